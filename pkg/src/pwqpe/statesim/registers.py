"""Named mixed-radix registers, state vectors and operator wrappers.

States live on an ordered list of named registers, each a qudit of known
dimension; the first register is the most significant in the flat index.
Operators larger than the dense cap are held as apply closures and can
answer basis-level queries without materializing a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..hamiltonian.dense import CapExceededError

DENSE_MATRIX_CAP = 4096


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered (name, dimension) register map with flat-index helpers."""

    registers: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.registers]
        if len(set(names)) != len(names):
            raise ValueError("register names must be unique")
        for name, dim in self.registers:
            if dim < 1:
                raise ValueError(f"register {name} has non-positive dimension {dim}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.registers)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.registers else 1

    def ravel(self, values: Sequence[int]) -> int:
        """Flat index of one register-value assignment (first = most significant)."""
        if len(values) != len(self.registers):
            raise ValueError("value count does not match register count")
        index = 0
        for value, (name, dim) in zip(values, self.registers):
            if not 0 <= value < dim:
                raise ValueError(f"value {value} out of range for register {name}")
            index = index * dim + value
        return index

    def unravel(self, index: int) -> tuple[int, ...]:
        """Register values of one flat index."""
        if not 0 <= index < self.dim:
            raise ValueError(f"index {index} out of range")
        values = []
        for _, dim in reversed(self.registers):
            values.append(index % dim)
            index //= dim
        return tuple(reversed(values))

    def extended(self, other: RegisterLayout) -> RegisterLayout:
        return RegisterLayout(self.registers + other.registers)


@dataclass
class StateVector:
    """Complex amplitudes over a register layout.

    Sub-normalized states carry the probability of the projected-out
    branch in success_prob; fully kept states use the default tag 1.0.
    """

    amplitudes: np.ndarray = field(repr=False)
    layout: RegisterLayout
    success_prob: float = 1.0

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.layout.dim,):
            raise ValueError(
                f"amplitude length {self.amplitudes.shape} does not match layout dim {self.layout.dim}"
            )
        norm = self.norm
        if not 0.0 < norm <= 1.0 + 1e-12:
            raise ValueError(f"state norm {norm} outside (0, 1]")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def fidelity(self, other: StateVector) -> float:
        """|<self|other>| / (norms); global-phase-free overlap."""
        denom = self.norm * other.norm
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) / denom)

    def register_probability(self, name: str, value: int) -> float:
        """Probability mass of one register taking one value."""
        axes = self.layout.dims
        pos = self.layout.names.index(name)
        amps = self.amplitudes.reshape(axes)
        sel = amps.take(indices=value, axis=pos)
        return float(np.sum(np.abs(sel) ** 2))


@dataclass
class OperatorMatrix:
    """Linear operator over a register layout, dense or closure-backed."""

    layout: RegisterLayout
    unitary: bool = True
    dense: np.ndarray | None = field(default=None, repr=False)
    apply_fn: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    apply_adjoint_fn: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.dense is None and self.apply_fn is None:
            raise ValueError("operator needs a dense matrix or an apply closure")
        if self.dense is not None:
            self.dense = np.asarray(self.dense, dtype=complex)
            expected = (self.layout.dim, self.layout.dim)
            if self.dense.shape != expected:
                raise ValueError(f"matrix shape {self.dense.shape} does not match layout {expected}")

    @property
    def dim(self) -> int:
        return self.layout.dim

    @property
    def matrix(self) -> np.ndarray:
        """Dense matrix, materialized column by column when cap permits."""
        if self.dense is not None:
            return self.dense
        if self.dim > DENSE_MATRIX_CAP:
            raise CapExceededError(
                f"operator dimension {self.dim} exceeds dense cap {DENSE_MATRIX_CAP}"
            )
        out = np.zeros((self.dim, self.dim), dtype=complex)
        basis = np.zeros(self.dim, dtype=complex)
        for col in range(self.dim):
            basis[:] = 0.0
            basis[col] = 1.0
            out[:, col] = self.apply_fn(basis)
        return out

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=complex)
        if self.dense is not None:
            return self.dense @ vec
        return self.apply_fn(vec)

    def apply_adjoint(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=complex)
        if self.dense is not None:
            return self.dense.conj().T @ vec
        if self.apply_adjoint_fn is None:
            raise ValueError("no adjoint closure provided")
        return self.apply_adjoint_fn(vec)

    def unitarity_deviation(self, samples: int = 64, seed: int = 11) -> float:
        """Max |M adjoint M - I| column deviation, dense or sampled."""
        if self.dense is not None:
            gram = self.dense.conj().T @ self.dense
            return float(np.max(np.abs(gram - np.eye(self.dim))))
        rng = np.random.default_rng(seed)
        cols = rng.choice(self.dim, size=min(samples, self.dim), replace=False)
        worst = 0.0
        basis = np.zeros(self.dim, dtype=complex)
        for col in cols:
            basis[:] = 0.0
            basis[col] = 1.0
            round_trip = self.apply_adjoint(self.apply(basis))
            round_trip[col] -= 1.0
            worst = max(worst, float(np.max(np.abs(round_trip))))
        return worst
