"""Exponential-amplitude and momentum-norm state preparations.

The momentum state is prepared over nested boxes indexed by mu plus an
inequality test against an auxiliary register of size M; the kept branch
carries amplitudes proportional to 1 / ||nu|| up to ceiling rounding.
"""

from __future__ import annotations

import math

import numpy as np

from ..crystal import UnitCell
from ..hamiltonian.dense import CapExceededError
from .registers import RegisterLayout, StateVector

MOMENTUM_STATE_CAP = 2**24

_success_cache: dict[tuple, float] = {}


def exponential_state(n_p: int) -> tuple[StateVector, float]:
    """Sub-normalized state with amplitudes growing as 2^(r/2).

    Args:
        n_p: Bits per signed momentum component; the register holds
            r in [0, n_p - 2].

    Returns:
        The state with amplitudes 2^(-(n_p - 1)/2) * 2^(r/2) and the
        success probability (2^(n_p - 1) - 1) / 2^(n_p - 1) of the
        projection that removed the flagged all-zero branch.
    """
    if n_p < 2:
        raise ValueError(f"n_p must be at least 2, got {n_p}")
    r = np.arange(n_p - 1)
    amps = 2.0 ** (-(n_p - 1) / 2.0) * 2.0 ** (r / 2.0)
    success = (2 ** (n_p - 1) - 1) / 2 ** (n_p - 1)
    layout = RegisterLayout((("r", n_p - 1),))
    return StateVector(amps.astype(complex), layout, success_prob=success), success


def amplified_success(p: float, rounds: int) -> float:
    """Success probability after Grover-style amplitude amplification."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"success probability must lie in (0, 1], got {p}")
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    return math.sin((2 * rounds + 1) * math.asin(math.sqrt(p))) ** 2


def _signed_values(n_p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sign bit, magnitude and signed value for each component index."""
    idx = np.arange(2 ** (n_p + 1))
    sign = idx >> n_p
    mag = idx & (2**n_p - 1)
    value = np.where(sign == 1, -mag, mag)
    return sign, mag, value


def momentum_state(
    n_p: int,
    m_param: int,
    cell: UnitCell | None = None,
    cap: int = MOMENTUM_STATE_CAP,
) -> tuple[StateVector, float]:
    """Full pre-measurement momentum state over (mu, nu, m) registers.

    Registers: mu holds the box index (value i encodes mu = i + 2), one
    signed-magnitude register per component of nu, and the inequality
    register m. The success branch consists of basis states with no
    negative zero, nu in the annulus of its mu, and m below the
    inequality threshold; its total mass is returned as p_nu.

    Args:
        n_p: Bits per signed momentum component.
        m_param: Power-of-two size M of the inequality register.
        cell: Optional unit cell; when given, the inequality threshold
            is rescaled by the normalized side lengths (App-style
            generalization to orthorhombic cells).
        cap: Largest state dimension this routine will materialize.

    Returns:
        (state, p_nu). The state is subnormalized: the boxes carry total
        mass 1 - 2^(-n_p), the remainder being the never-prepared box the
        mu register has no index for. success_prob carries p_nu.
    """
    if n_p < 2:
        raise ValueError(f"n_p must be at least 2, got {n_p}")
    if m_param < 4 or m_param & (m_param - 1):
        raise ValueError(f"m_param must be a power of two >= 4, got {m_param}")
    comp_dim = 2 ** (n_p + 1)
    dim = n_p * comp_dim**3 * m_param
    if dim > cap:
        raise CapExceededError(f"momentum state dimension {dim} exceeds cap {cap}")

    sign, mag, _ = _signed_values(n_p)
    scale = _inverse_side_weights(cell)
    amps = np.zeros((n_p, comp_dim, comp_dim, comp_dim, m_param))
    success = np.zeros_like(amps, dtype=bool)
    m_vals = np.arange(m_param)
    for mu in range(2, n_p + 2):
        in_box = mag < 2 ** (mu - 1)
        box_amp = math.sqrt(2**mu / 2 ** (n_p + 2)) * 2.0 ** (-1.5 * mu) / math.sqrt(m_param)
        mask3 = in_box[:, None, None] & in_box[None, :, None] & in_box[None, None, :]
        amps[mu - 2][mask3] = box_amp

        max_mag = np.maximum(
            mag[:, None, None], np.maximum(mag[None, :, None], mag[None, None, :])
        )
        annulus = mask3 & (max_mag >= 2 ** (mu - 2))
        no_neg_zero = ~(
            ((sign == 1) & (mag == 0))[:, None, None]
            | ((sign == 1) & (mag == 0))[None, :, None]
            | ((sign == 1) & (mag == 0))[None, None, :]
        )
        if scale is None:
            normsq = (
                mag[:, None, None].astype(np.int64) ** 2
                + mag[None, :, None].astype(np.int64) ** 2
                + mag[None, None, :].astype(np.int64) ** 2
            )
            threshold = m_param * 4 ** (mu - 2)
            passed = m_vals[None, None, None, :] * normsq[..., None] < threshold
        else:
            inv_sq, tilde_max_sq = scale
            normsq_g = (
                mag[:, None, None] ** 2 * inv_sq[0]
                + mag[None, :, None] ** 2 * inv_sq[1]
                + mag[None, None, :] ** 2 * inv_sq[2]
            )
            threshold = m_param * 4.0 ** (mu - 2) / tilde_max_sq
            passed = m_vals[None, None, None, :] * normsq_g[..., None] < threshold
        success[mu - 2] = (annulus & no_neg_zero)[..., None] & passed

    p_nu = float(np.sum(amps[success] ** 2))
    layout = RegisterLayout(
        (("mu", n_p), ("nu_x", comp_dim), ("nu_y", comp_dim), ("nu_z", comp_dim), ("m", m_param))
    )
    state = StateVector(amps.reshape(dim).astype(complex), layout, success_prob=p_nu)
    return state, p_nu


def momentum_state_success_amplitude(
    n_p: int, m_param: int, nu: tuple[int, int, int], cell: UnitCell | None = None
) -> float:
    """Aggregated success amplitude on one nonzero nu (closed formula)."""
    mags = [abs(int(x)) for x in nu]
    inf_norm = max(mags)
    if inf_norm == 0 or inf_norm > 2**n_p - 1:
        raise ValueError(f"nu {nu} is not reachable by the preparation boxes")
    mu = inf_norm.bit_length() + 1
    count = _inequality_count(np.array([[mags[0], mags[1], mags[2]]]), mu, m_param, cell)
    return math.sqrt(float(count[0]) / (m_param * 4**mu * 2 ** (n_p + 2)))


def _inverse_side_weights(cell: UnitCell | None):
    """(1/a_tilde_w^2 array, max a_tilde_w^2), or None for the cubic rule."""
    if cell is None or cell.is_cubic:
        return None
    tilde = cell.lengths / cell.omega ** (1.0 / 3.0)
    return 1.0 / tilde**2, float(np.max(tilde**2))


def _inequality_count(mags: np.ndarray, mu, m_param: int, cell: UnitCell | None) -> np.ndarray:
    """Number of m values passing the threshold test, per magnitude row."""
    scale = _inverse_side_weights(cell)
    if scale is None:
        normsq = np.sum(mags.astype(np.int64) ** 2, axis=1)
        numer = m_param * np.asarray(4, dtype=np.int64) ** (np.asarray(mu) - 2)
        return np.minimum((numer + normsq - 1) // normsq, m_param)
    inv_sq, tilde_max_sq = scale
    normsq_g = (mags.astype(float) ** 2) @ inv_sq
    numer = m_param * 4.0 ** (np.asarray(mu, dtype=float) - 2) / tilde_max_sq
    return np.minimum(np.ceil(numer / normsq_g), float(m_param))


def momentum_success_probability(
    n_p: int, m_param: int, cell: UnitCell | None = None
) -> float:
    """Total success probability p_nu without materializing the state.

    Enumerates magnitude octants in slices, exploiting the sign
    symmetry of the amplitudes; exact integer ceilings are used for the
    cubic rule. Results are cached per (n_p, M, normalized cell).
    """
    if n_p < 2:
        raise ValueError(f"n_p must be at least 2, got {n_p}")
    if m_param < 4 or m_param & (m_param - 1):
        raise ValueError(f"m_param must be a power of two >= 4, got {m_param}")
    scale = _inverse_side_weights(cell)
    key = (n_p, m_param, None if scale is None else tuple(np.round(scale[0], 12)))
    if key in _success_cache:
        return _success_cache[key]

    side = 2**n_p
    mags = np.arange(side)
    my, mz = np.meshgrid(mags, mags, indexing="ij")
    my_f = my.ravel()
    mz_f = mz.ravel()
    sign_weight_yz = 2.0 ** ((my_f > 0).astype(int) + (mz_f > 0).astype(int))
    total = 0.0
    for mx in range(side):
        inf_norm = np.maximum(mx, np.maximum(my_f, mz_f))
        keep = inf_norm > 0
        mu = np.frexp(inf_norm[keep].astype(float))[1] + 1
        rows = np.stack(
            [np.full(keep.sum(), mx), my_f[keep], mz_f[keep]], axis=1
        )
        counts = _inequality_count(rows, mu, m_param, cell).astype(float)
        weight = sign_weight_yz[keep] * (2.0 if mx > 0 else 1.0)
        total += float(np.sum(weight * counts / 4.0**mu))
    p_nu = total / (m_param * 2 ** (n_p + 2))
    _success_cache[key] = p_nu
    return p_nu
