"""Closed-form LCU 1-norms and the amplitude-amplification bookkeeping.

The block encoding advertises H/lambda_total; the three component norms
come from summing the positive amplitudes of the kinetic, nuclear and
two-body term families. Non-cubic cells rescale the momentum-norm sum
with the dimensionless side lengths a_w / Omega^(1/3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..crystal import Material, PlaneWaveGrid, UnitCell

DEFAULT_M_PARAM = 2**12


def lambda_nu_sum(cell: UnitCell, grid: PlaneWaveGrid, convention: str = "generalized") -> float:
    """Sum of inverse squared momentum norms over the nonzero grid.

    Args:
        cell: Unit cell; only consulted by the generalized convention.
        grid: Momentum grid whose nonzero points are summed.
        convention: "cubic" sums 1/||nu||^2 over integer triples;
            "generalized" divides each component by a_w / Omega^(1/3)
            first, which reduces to the cubic sum for cubic cells.

    Returns:
        The dimensionless sum; 0.0 when the nonzero grid is empty.

    The sum runs one x-slice at a time so that n_p up to 9 or so stays
    within a few megabytes instead of materializing the whole grid.
    """
    if convention == "cubic":
        tilde = np.ones(3)
    elif convention == "generalized":
        tilde = cell.lengths / cell.omega ** (1.0 / 3.0)
    else:
        raise ValueError(f"unknown convention {convention!r}")

    half = grid.half_width
    if half == 0:
        return 0.0
    axis = np.arange(-half, half + 1, dtype=float)
    y_plane, z_plane = np.meshgrid(axis / tilde[1], axis / tilde[2], indexing="ij")
    plane = y_plane * y_plane + z_plane * z_plane
    total = 0.0
    for x in axis:
        norm_sq = plane + (x / tilde[0]) ** 2
        if x == 0.0:
            norm_sq[half, half] = np.inf
        total += float(np.sum(1.0 / norm_sq))
    return total


@dataclass(frozen=True)
class LcuNorms:
    """LCU 1-norms in hartree plus the success-probability bookkeeping.

    lambda_total reflects the amplitude-amplification choice: with
    aa_rounds=0 it is the plain sum and the rotated-auxiliary-qubit
    construction is assumed; with aa_rounds=1 the potential part is
    inflated by the amplified momentum-state success probability.
    """

    lambda_T: float
    lambda_U: float
    lambda_V: float
    lambda_nu: float
    lambda_total: float
    aa_rounds: int
    p_nu: float

    def __post_init__(self) -> None:
        for name in ("lambda_T", "lambda_U", "lambda_V", "lambda_nu"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")
        if self.lambda_total <= 0.0:
            raise ValueError("lambda_total must be positive")
        if self.aa_rounds not in (0, 1):
            raise ValueError("aa_rounds must be 0 or 1")
        if not 0.0 < self.p_nu <= 1.0:
            raise ValueError("p_nu must lie in (0, 1]")
        if self.aa_rounds == 1 and self.kinetic_ratio >= 3.0:
            raise ValueError("aa_rounds=1 requires lambda_T / (lambda_U + lambda_V) < 3")

    @property
    def kinetic_ratio(self) -> float:
        """lambda_T / (lambda_U + lambda_V), infinite for a free gas."""
        pot = self.lambda_U + self.lambda_V
        return math.inf if pot == 0.0 else self.lambda_T / pot

    @property
    def p_amp(self) -> float:
        """Momentum-state success probability after aa_rounds Grover steps."""
        angle = math.asin(math.sqrt(self.p_nu))
        return math.sin((2 * self.aa_rounds + 1) * angle) ** 2

    def encoding_shift(self) -> float:
        """Identity admixture of the block encoding, in units of I.

        With one amplification round the encoded operator is
        H / lambda_total + shift * I; without amplification the failure
        branch is recycled into the kinetic term and the shift is zero.
        """
        if self.aa_rounds == 0:
            return 0.0
        pot = self.lambda_U + self.lambda_V
        return (1.0 - self.p_amp) * pot / (self.p_amp * self.lambda_total)


def lcu_norms(
    material: Material,
    cell: UnitCell,
    grid: PlaneWaveGrid,
    *,
    aa_rounds: int | str = "auto",
    convention: str = "generalized",
    m_param: int = DEFAULT_M_PARAM,
) -> LcuNorms:
    """Evaluates the closed-form LCU norms for one material and grid.

    Args:
        material: Supplies the electron count and total nuclear charge.
        cell: Unit cell used for volumes and side lengths.
        grid: Momentum grid.
        aa_rounds: "auto" picks 1 round exactly when
            lambda_T / (lambda_U + lambda_V) < 3, else 0; an explicit
            0 or 1 is validated against the same threshold.
        convention: Momentum-norm convention passed to lambda_nu_sum.
        m_param: Discretization parameter M of the momentum-state
            success probability.

    Returns:
        LcuNorms with lambda_total adjusted per the selected rounds.
    """
    if grid.n_p < 2:
        raise ValueError("grid must have n_p >= 2 to hold a nonzero momentum")
    eta = material.eta
    lam_nu = lambda_nu_sum(cell, grid, convention)
    half = float(grid.half_width)
    omega_third = cell.omega ** (1.0 / 3.0)
    lam_t = 2.0 * eta * math.pi**2 * half**2 * float(np.sum(cell.lengths**-2.0))
    lam_u = eta * material.lambda_Z * lam_nu / (math.pi * omega_third)
    lam_v = eta * (eta - 1) * lam_nu / (2.0 * math.pi * omega_third)

    pot = lam_u + lam_v
    ratio = math.inf if pot == 0.0 else lam_t / pot
    if aa_rounds == "auto":
        rounds = 0 if ratio >= 3.0 else 1
    else:
        rounds = int(aa_rounds)
        if rounds == 1 and ratio >= 3.0:
            raise ValueError(
                "aa_rounds=1 requires lambda_T / (lambda_U + lambda_V) < 3; "
                f"got ratio {ratio:.4g}"
            )
        if rounds == 0 and ratio < 3.0:
            raise ValueError(
                "aa_rounds=0 needs lambda_T / (lambda_U + lambda_V) >= 3 for the "
                f"rotated-qubit angle to exist; got ratio {ratio:.4g}"
            )

    if pot == 0.0:
        p_nu = 1.0
        total = lam_t
    else:
        from ..statesim.prep_states import amplified_success, momentum_success_probability

        p_nu = momentum_success_probability(grid.n_p, m_param, cell)
        if rounds == 0:
            total = lam_t + pot
        else:
            total = lam_t + pot / amplified_success(p_nu, 1)
    return LcuNorms(
        lambda_T=lam_t,
        lambda_U=lam_u,
        lambda_V=lam_v,
        lambda_nu=lam_nu,
        lambda_total=total,
        aa_rounds=rounds,
        p_nu=p_nu,
    )
