"""Qubitized walk operator and its spectral verification helpers.

The walk is Q = R (P SEL P) with R the reflection about the all-zero
ancilla row and P the preparation reflection. P SEL P is Hermitian and
self-inverse, so on the two-dimensional space spanned by an encoded
eigenvector and its image the walk rotates by the arccosine of the
rescaled eigenvalue. Everything here works on the invariant subspace
spanned by the all-zero ancilla row and the preparation support, which
keeps eta = 2 instances inside a few hundred megabytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..crystal import Material, PlaneWaveGrid, UnitCell
from ..hamiltonian.dense import CapExceededError, build_dense_hamiltonian
from .block_encoding import FULL_SPACE_CAP, EncodingModel, encoding_model
from .registers import OperatorMatrix


@dataclass
class WalkSubspace:
    """Walk restricted to the sigma-closed ancilla rows that matter.

    Vectors are (rows, system) arrays; row 0 is the all-zero ancilla
    state, the remaining rows enumerate the preparation support.
    """

    model: EncodingModel
    row_indices: np.ndarray = field(repr=False)
    w_rows: np.ndarray = field(repr=False)
    w_norm_sq: float = 0.0
    actions: list = field(default_factory=list, repr=False)

    @property
    def n_rows(self) -> int:
        return self.row_indices.size

    @property
    def sys_dim(self) -> int:
        return self.model.sys_layout.dim

    def embed(self, system_vector: np.ndarray) -> np.ndarray:
        """Places a flag-zero system vector on the all-zero ancilla row."""
        full = np.zeros(self.sys_dim, dtype=complex)
        full[self.model.flag_zero_columns()] = system_vector
        out = np.zeros((self.n_rows, self.sys_dim), dtype=complex)
        out[0] = full
        return out

    def apply_reflection(self, vec: np.ndarray) -> np.ndarray:
        out = -vec
        out[0] = vec[0]
        return out

    def apply_prep_reflection(self, vec: np.ndarray) -> np.ndarray:
        if self.w_norm_sq < 1e-28:
            return vec.copy()
        overlap = self.w_rows @ vec
        return vec - (2.0 / self.w_norm_sq) * np.outer(self.w_rows, overlap)

    def apply_sel(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vec)
        for pos in range(self.n_rows):
            row = vec[pos]
            if not np.any(row):
                continue
            image_pos, tgt, ph = self.actions[pos]
            out[image_pos, tgt] = ph * row
        return out

    def apply_encoded(self, vec: np.ndarray) -> np.ndarray:
        """P SEL P, the Hermitian self-inverse core of the walk."""
        return self.apply_prep_reflection(self.apply_sel(self.apply_prep_reflection(vec)))

    def apply_walk(self, vec: np.ndarray) -> np.ndarray:
        return self.apply_reflection(self.apply_encoded(vec))

    def apply_walk_adjoint(self, vec: np.ndarray) -> np.ndarray:
        return self.apply_encoded(self.apply_reflection(vec))


def walk_subspace(
    material: Material,
    cell: UnitCell,
    grid: PlaneWaveGrid,
    eta: int | None = None,
    norms=None,
) -> WalkSubspace:
    """Builds the closed-subspace walk for one instance."""
    model = encoding_model(material, cell, grid, eta=eta, norms=norms)
    rows = np.concatenate(([0], model.prep_indices)).astype(np.int64)
    if model.prep_indices.size and model.prep_indices[0] == 0:
        raise RuntimeError("preparation support touches the all-zero ancilla state")
    position = {int(idx): pos for pos, idx in enumerate(rows)}

    w_rows = np.zeros(rows.size)
    w_rows[0] = 1.0
    w_rows[1:] -= model.prep_amps
    actions = []
    for idx in rows:
        image, tgt, ph = model.sel_action(int(idx))
        if int(image) not in position:
            raise RuntimeError("selection operator leaves the closed subspace")
        actions.append((position[int(image)], tgt, ph))
    return WalkSubspace(
        model=model,
        row_indices=rows,
        w_rows=w_rows,
        w_norm_sq=float(w_rows @ w_rows),
        actions=actions,
    )


def walk_operator(
    material: Material,
    cell: UnitCell,
    grid: PlaneWaveGrid,
    eta: int | None = None,
    norms=None,
) -> OperatorMatrix:
    """Full-space walk operator Q as a closure-backed unitary."""
    ws = walk_subspace(material, cell, grid, eta=eta, norms=norms)
    model = ws.model
    anc_dim = model.anc_layout.dim
    sys_dim = model.sys_layout.dim
    if anc_dim * sys_dim > FULL_SPACE_CAP:
        raise CapExceededError(
            f"joint dimension {anc_dim * sys_dim} exceeds cap {FULL_SPACE_CAP}"
        )
    layout = model.anc_layout.extended(model.sys_layout)
    rows = ws.row_indices

    def _prep(mat: np.ndarray) -> np.ndarray:
        if ws.w_norm_sq < 1e-28:
            return mat
        overlap = ws.w_rows @ mat[rows]
        mat[rows] -= (2.0 / ws.w_norm_sq) * np.outer(ws.w_rows, overlap)
        return mat

    def _sel(mat: np.ndarray) -> np.ndarray:
        out = np.zeros_like(mat)
        for index in range(anc_dim):
            row = mat[index]
            if not np.any(row):
                continue
            image, tgt, ph = model.sel_action(index)
            out[image, tgt] = ph * row
        return out

    def apply(vec: np.ndarray) -> np.ndarray:
        mat = vec.reshape(anc_dim, sys_dim).astype(complex)
        mat = _prep(_sel(_prep(mat.copy())))
        mat = -mat
        mat[0] = -mat[0]
        return mat.reshape(vec.shape)

    def apply_adjoint(vec: np.ndarray) -> np.ndarray:
        mat = vec.reshape(anc_dim, sys_dim).astype(complex).copy()
        mat = -mat
        mat[0] = -mat[0]
        mat = _prep(_sel(_prep(mat)))
        return mat.reshape(vec.shape)

    return OperatorMatrix(
        layout=layout, unitary=True, apply_fn=apply, apply_adjoint_fn=apply_adjoint
    )


def eigenphase_check(
    material: Material,
    cell: UnitCell,
    grid: PlaneWaveGrid,
    eta: int | None = None,
) -> dict:
    """Compares lambda * cos(theta_k) against every Hamiltonian eigenvalue.

    The walk eigenphase cosines are the Rayleigh quotients of the encoded
    block in the Hamiltonian eigenbasis, shifted by the identity
    admixture of the amplified mode when present.

    Returns:
        Dict with the eigenvalue count, lambda_total, and the maximum
        absolute deviation |lambda cos(theta_k) - E_k| over all k.
    """
    model = encoding_model(material, cell, grid, eta=eta)
    block, leak = model.encoded_system_block()
    dense = build_dense_hamiltonian(material, grid, eta_override=model.eta)
    energies, vectors = np.linalg.eigh(dense.matrix)
    lam = model.norms.lambda_total
    shift = model.norms.encoding_shift()
    rayleigh = np.real(np.sum(vectors.conj() * (block @ vectors), axis=0))
    deviations = np.abs(lam * (rayleigh - shift) - energies)
    return {
        "n_eigenvalues": int(energies.size),
        "lambda_total": lam,
        "max_abs_deviation": float(np.max(deviations)),
        "flag_leakage": leak,
    }


def rotation_check(
    material: Material,
    cell: UnitCell,
    grid: PlaneWaveGrid,
    eta: int | None = None,
    n_samples: int = 12,
    seed: int = 3,
) -> float:
    """Drives the literal walk on sampled eigenvector planes.

    For sampled eigenpairs, builds the two-dimensional invariant plane
    and checks Q u1 = x u1 - s u2 and Q u2 = s u1 + x u2 with
    x = cos(theta_k). Returns the maximum absolute deviation.
    """
    ws = walk_subspace(material, cell, grid, eta=eta)
    dense = build_dense_hamiltonian(material, grid, eta_override=ws.model.eta)
    energies, vectors = np.linalg.eigh(dense.matrix)
    rng = np.random.default_rng(seed)
    picks = {0, energies.size - 1}
    if energies.size > 2:
        picks.update(rng.choice(energies.size, size=min(n_samples, energies.size), replace=False).tolist())

    worst = 0.0
    for k in sorted(picks):
        u1 = ws.embed(vectors[:, k])
        a1 = ws.apply_encoded(u1)
        x = float(np.real(np.vdot(u1, a1)))
        s_sq = max(1.0 - x * x, 0.0)
        if s_sq < 1e-24:
            worst = max(worst, float(np.max(np.abs(a1 - x * u1))))
            continue
        s = np.sqrt(s_sq)
        u2 = (a1 - x * u1) / s
        qu1 = ws.apply_reflection(a1)
        dev1 = float(np.max(np.abs(qu1 - (x * u1 - s * u2))))
        qu2 = ws.apply_walk(u2)
        dev2 = float(np.max(np.abs(qu2 - (s * u1 + x * u2))))
        worst = max(worst, dev1, dev2)
    return worst


def reflection_identity_check(
    material: Material,
    cell: UnitCell,
    grid: PlaneWaveGrid,
    eta: int | None = None,
    n_samples: int = 48,
    seed: int = 5,
) -> float:
    """Max deviation of R Q R - Q^dag on sampled basis columns."""
    ws = walk_subspace(material, cell, grid, eta=eta)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        col = np.zeros((ws.n_rows, ws.sys_dim), dtype=complex)
        col[rng.integers(ws.n_rows), rng.integers(ws.sys_dim)] = 1.0
        lhs = ws.apply_reflection(ws.apply_walk(ws.apply_reflection(col)))
        rhs = ws.apply_walk_adjoint(col)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
