"""Exact preparation and selection operators of the qubitized encoding.

The ancilla space is a product of named qudit registers (a through m).
PREP is the Householder reflection sending the all-zero state to the
target superposition; SEL is a self-inverse signed permutation that
routes each ancilla basis state to a kinetic phase, a nuclear
translation, a two-body translation pair, or the identity. Out-of-grid
translations wrap around and raise a per-electron overflow flag whose
sign, averaged over the b register, removes them from the encoded
block. The encoded system operator is assembled column by column from
the preparation support, never through full-space vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..crystal import Material, PlaneWaveGrid, UnitCell
from ..hamiltonian.dense import CapExceededError, build_dense_hamiltonian
from ..hamiltonian.lcu import LcuNorms, lambda_nu_sum, lcu_norms
from .registers import OperatorMatrix, RegisterLayout, StateVector

PREP_ETA_CAP = 3
PREP_NP_CAP = 3
FULL_SPACE_CAP = 2**25


def ancilla_layout(eta: int, grid: PlaneWaveGrid, n_atoms: int) -> RegisterLayout:
    """Named qudit registers of the preparation, in fixed order."""
    weight_dim = max(grid.n_p - 1, 1)
    return RegisterLayout(
        (
            ("a", 2),
            ("b", 2),
            ("c", 2),
            ("d", eta),
            ("e", eta),
            ("f", 3),
            ("g", weight_dim),
            ("h", weight_dim),
            ("j", 2),
            ("k", grid.size),
            ("l", max(n_atoms, 1)),
            ("m", 2),
        )
    )


def system_layout(eta: int, grid: PlaneWaveGrid) -> RegisterLayout:
    """Per-electron momentum register plus an overflow flag qubit."""
    regs = []
    for i in range(eta):
        regs.append((f"p{i}", grid.size))
        regs.append((f"o{i}", 2))
    return RegisterLayout(tuple(regs))


@dataclass
class EncodingModel:
    """All tables needed to evaluate PREP amplitudes and SEL actions."""

    material: Material
    cell: UnitCell
    grid: PlaneWaveGrid
    eta: int
    norms: LcuNorms
    anc_layout: RegisterLayout
    sys_layout: RegisterLayout
    theta: float
    success_amp: float
    prep_indices: np.ndarray = field(repr=False)
    prep_amps: np.ndarray = field(repr=False)
    _action_cache: dict = field(default_factory=dict, repr=False)

    @cached_property
    def _tables(self) -> dict:
        grid, cell = self.grid, self.cell
        pts = grid.points()
        nonzero = grid.points_nonzero()
        size, side, half = grid.size, grid.side, grid.half_width
        n_nu = size - 1

        full_idx = ((pts + half) * [side * side, side, 1]).sum(axis=1)
        if not np.array_equal(full_idx, np.arange(size)):
            raise RuntimeError("grid enumeration is not lexicographic")

        nz_full = ((nonzero + half) * [side * side, side, 1]).sum(axis=1)
        full_to_nz = np.full(size, -1, dtype=np.int64)
        full_to_nz[nz_full] = np.arange(n_nu)
        neg_k = np.zeros(size, dtype=np.int64)
        neg_k[1:] = 1 + full_to_nz[size - 1 - nz_full]

        minus_tgt = np.zeros((n_nu + 1, size), dtype=np.int64)
        minus_oob = np.zeros((n_nu + 1, size), dtype=np.int8)
        plus_tgt = np.zeros((n_nu + 1, size), dtype=np.int64)
        plus_oob = np.zeros((n_nu + 1, size), dtype=np.int8)
        for t in range(1, n_nu + 1):
            nu = nonzero[t - 1]
            for sign, tgt, oob in ((-1, minus_tgt, minus_oob), (1, plus_tgt, plus_oob)):
                shifted = pts + sign * nu
                wrapped = (shifted + half) % side - half
                tgt[t] = ((wrapped + half) * [side * side, side, 1]).sum(axis=1)
                oob[t] = np.any(np.abs(shifted) > half, axis=1).astype(np.int8)

        positions = self.material.positions
        charges = self.material.nuclear_charges
        n_atoms = max(len(charges), 1)
        phase_u = np.ones((n_nu + 1, n_atoms), dtype=complex)
        if len(charges):
            g_nu = 2.0 * np.pi * nonzero / cell.lengths
            phase_u[1:] = np.exp(1j * (g_nu @ positions.T))

        bits = np.zeros((3, max(grid.n_p - 1, 1), size), dtype=np.int8)
        for w in range(3):
            comp = np.abs(pts[:, w])
            for r in range(max(grid.n_p - 1, 1)):
                bits[w, r] = (comp >> r) & 1

        sys_dim = self.sys_layout.dim
        flat = np.arange(sys_dim, dtype=np.int64)
        mom = np.zeros((self.eta, sys_dim), dtype=np.int64)
        flg = np.zeros((self.eta, sys_dim), dtype=np.int64)
        stride = np.zeros(self.eta, dtype=np.int64)
        rem = flat.copy()
        for i in reversed(range(self.eta)):
            stride[i] = (2 * size) ** (self.eta - 1 - i)
        for i in reversed(range(self.eta)):
            flg[i] = rem % 2
            rem = rem // 2
            mom[i] = rem % size
            rem = rem // size
        contrib = (mom * 2 + flg) * stride[:, None]

        return {
            "neg_k": neg_k,
            "minus_tgt": minus_tgt,
            "minus_oob": minus_oob,
            "plus_tgt": plus_tgt,
            "plus_oob": plus_oob,
            "phase_u": phase_u,
            "bits": bits,
            "flat": flat,
            "mom": mom,
            "flg": flg,
            "stride": stride,
            "contrib": contrib,
        }

    def prep_vector(self) -> np.ndarray:
        vec = np.zeros(self.anc_layout.dim)
        vec[self.prep_indices] = self.prep_amps
        return vec

    def route(self, values: tuple[int, ...]):
        """Branch descriptor of one decoded ancilla basis state."""
        a, b, c, d, e, _f, _g, _h, j, k, _l, m = values
        if a == 0:
            return ("T", e, values[5], values[6], values[7], b)
        if j == 1:
            if self.norms.aa_rounds == 0 and self.norms.lambda_U + self.norms.lambda_V > 0:
                return ("T", e, values[5], values[6], values[7], b)
            return ("I",)
        if k == 0:
            return ("I",)
        if m == 0:
            return ("U", e, k, values[10], b)
        if c == 1 or d == e:
            return ("I",)
        return ("V", d, e, k, b)

    def ancilla_image(self, index: int) -> int:
        """Ancilla part of the SEL permutation (momentum-label negation)."""
        values = list(self.anc_layout.unravel(index))
        kind = self.route(tuple(values))[0]
        if kind in ("U", "V"):
            values[9] = int(self._tables["neg_k"][values[9]])
            return self.anc_layout.ravel(values)
        return index

    def sel_action(self, index: int):
        """(image ancilla index, system target indices, system phases)."""
        values = self.anc_layout.unravel(index)
        key = self.route(values)
        image = self.ancilla_image(index)
        if key not in self._action_cache:
            self._action_cache[key] = self._build_action(key)
        tgt, ph = self._action_cache[key]
        return image, tgt, ph

    def _build_action(self, key):
        tb = self._tables
        flat, mom, flg, stride, contrib = (
            tb["flat"],
            tb["mom"],
            tb["flg"],
            tb["stride"],
            tb["contrib"],
        )
        if key[0] == "I":
            return flat, np.ones(flat.size)
        if key[0] == "T":
            _, e, w, r, s, b = key
            if b == 0:
                return flat, np.ones(flat.size)
            product = tb["bits"][w, r][mom[e]] * tb["bits"][w, s][mom[e]]
            return flat, np.where(product == 1, 1.0, -1.0)
        if key[0] == "U":
            _, e, t, atom, b = key
            q = mom[e]
            new_mom = tb["minus_tgt"][t][q]
            oob = tb["minus_oob"][t][q].astype(np.int64)
            new_flag = flg[e] ^ oob
            tgt = flat - contrib[e] + (new_mom * 2 + new_flag) * stride[e]
            sign = np.where(b * oob == 1, -1.0, 1.0)
            return tgt, -tb["phase_u"][t, atom] * sign
        _, d, e, t, b = key
        pd = mom[d]
        new_d = tb["plus_tgt"][t][pd]
        oob_p = tb["plus_oob"][t][pd].astype(np.int64)
        qe = mom[e]
        new_e = tb["minus_tgt"][t][qe]
        oob_q = tb["minus_oob"][t][qe].astype(np.int64)
        tgt = (
            flat
            - contrib[d]
            - contrib[e]
            + (new_d * 2 + (flg[d] ^ oob_p)) * stride[d]
            + (new_e * 2 + (flg[e] ^ oob_q)) * stride[e]
        )
        sign = np.where(b * (oob_p | oob_q) == 1, -1.0, 1.0)
        return tgt, sign.astype(float)

    def flag_zero_columns(self) -> np.ndarray:
        tb = self._tables
        mask = np.ones(self.sys_layout.dim, dtype=bool)
        for i in range(self.eta):
            mask &= tb["flg"][i] == 0
        return np.nonzero(mask)[0]

    def encoded_system_block(self) -> tuple[np.ndarray, float]:
        """Flag-zero block of <prep| SEL |prep> and the leakage maximum."""
        cols = self.flag_zero_columns()
        enc = np.zeros((self.sys_layout.dim, cols.size), dtype=complex)
        col_range = np.arange(cols.size)
        amp_of = dict(zip(self.prep_indices.tolist(), self.prep_amps.tolist()))
        for index, amp in zip(self.prep_indices, self.prep_amps):
            image, tgt, ph = self.sel_action(int(index))
            coeff = amp * amp_of.get(int(image), 0.0)
            if coeff == 0.0:
                continue
            enc[tgt[cols], col_range] += coeff * ph[cols]
        block = enc[cols, :]
        leak = enc.copy()
        leak[cols, :] = 0.0
        return block, float(np.max(np.abs(leak))) if leak.size else 0.0


def _prep_support(material, cell, grid, norms, eta):
    """(values tuples, amplitudes) of the target superposition."""
    pot = norms.lambda_U + norms.lambda_V
    lam = norms.lambda_total
    if pot == 0.0:
        theta = 0.0
        success_amp = 0.0
    elif norms.aa_rounds == 0:
        theta = math.asin(2.0 * math.sqrt(pot / lam))
        success_amp = 0.5
    else:
        p_amp = norms.p_amp
        theta = math.asin(math.sqrt(pot / (p_amp * lam)))
        success_amp = math.sqrt(p_amp)

    a_support = [(0, math.cos(theta))]
    if math.sin(theta) > 0.0:
        a_support.append((1, math.sin(theta)))
    b_support = [(0, math.sqrt(0.5)), (1, math.sqrt(0.5))]
    inv_sq = cell.lengths**-2.0
    f_weights = inv_sq / np.sum(inv_sq)
    f_support = [(w, math.sqrt(f_weights[w])) for w in range(3)]
    r_norm = math.sqrt(2 ** (grid.n_p - 1) - 1)
    gh_support = [(r, 2.0 ** (r / 2.0) / r_norm) for r in range(grid.n_p - 1)]

    lam_nu = lambda_nu_sum(cell, grid, "generalized")
    tilde = cell.lengths / cell.omega ** (1.0 / 3.0)
    jk_support = []
    if success_amp > 0.0:
        scaled = grid.points_nonzero() / tilde
        inv_norm = 1.0 / np.sqrt(np.sum(scaled * scaled, axis=1))
        for t in range(inv_norm.size):
            jk_support.append((0, t + 1, success_amp * inv_norm[t] / math.sqrt(lam_nu)))
    fail_amp = math.sqrt(max(1.0 - success_amp**2, 0.0))
    if fail_amp > 0.0:
        jk_support.append((1, 0, fail_amp))

    charges = material.nuclear_charges
    if charges.size:
        l_support = [(i, math.sqrt(z / material.lambda_Z)) for i, z in enumerate(charges)]
    else:
        l_support = [(0, 1.0)]

    mcde_support = []
    if pot > 0.0:
        w_u = math.sqrt(norms.lambda_U / pot)
        w_v = math.sqrt(norms.lambda_V / pot)
        if w_u > 0.0:
            for i in range(eta):
                for jdx in range(eta):
                    cc = 1 if i == jdx else 0
                    mcde_support.append((0, cc, i, jdx, w_u / eta))
        if w_v > 0.0:
            pair_norm = math.sqrt(eta * (eta - 1))
            for i in range(eta):
                for jdx in range(eta):
                    if i != jdx:
                        mcde_support.append((1, 0, i, jdx, w_v / pair_norm))
    else:
        mcde_support.append((0, 1, 0, 0, 1.0))

    entries = []
    for a, amp_a in a_support:
        for b, amp_b in b_support:
            for m, c, d, e, amp_mcde in mcde_support:
                for f, amp_f in f_support:
                    for g, amp_g in gh_support:
                        for h, amp_h in gh_support:
                            for j, k, amp_jk in jk_support:
                                for l_idx, amp_l in l_support:
                                    amp = (
                                        amp_a * amp_b * amp_mcde * amp_f
                                        * amp_g * amp_h * amp_jk * amp_l
                                    )
                                    entries.append(
                                        ((a, b, c, d, e, f, g, h, j, k, l_idx, m), amp)
                                    )
    return entries, theta, success_amp


def encoding_model(
    material: Material,
    cell: UnitCell,
    grid: PlaneWaveGrid,
    eta: int | None = None,
    norms: LcuNorms | None = None,
) -> EncodingModel:
    """Builds the preparation support and selection tables for one instance."""
    eta = material.eta if eta is None else int(eta)
    if eta < 1 or eta > PREP_ETA_CAP:
        raise CapExceededError(f"eta {eta} outside the simulated range [1, {PREP_ETA_CAP}]")
    if grid.n_p > PREP_NP_CAP:
        raise CapExceededError(f"n_p {grid.n_p} exceeds the simulated cap {PREP_NP_CAP}")
    if norms is None:
        eta_material = material if material.eta == eta else _with_eta(material, eta)
        norms = lcu_norms(eta_material, cell, grid)
    else:
        reference = lambda_nu_sum(cell, grid, "generalized")
        if norms.lambda_nu > 0 and abs(norms.lambda_nu - reference) > 1e-9 * reference:
            raise ValueError(
                "norms must use the generalized momentum-norm convention to encode H"
            )

    anc = ancilla_layout(eta, grid, len(material.atoms))
    sys = system_layout(eta, grid)
    entries, theta, success_amp = _prep_support(material, cell, grid, norms, eta)
    indices = np.array([anc.ravel(values) for values, _ in entries], dtype=np.int64)
    amps = np.array([amp for _, amp in entries])
    order = np.argsort(indices)
    return EncodingModel(
        material=material,
        cell=cell,
        grid=grid,
        eta=eta,
        norms=norms,
        anc_layout=anc,
        sys_layout=sys,
        theta=theta,
        success_amp=success_amp,
        prep_indices=indices[order],
        prep_amps=amps[order],
    )


def _with_eta(material: Material, eta: int) -> Material:
    from ..crystal import make_material

    return make_material(material.name, material.cell, material.atoms, eta=eta)


def prep_operator(
    material: Material,
    cell: UnitCell,
    grid: PlaneWaveGrid,
    norms: LcuNorms,
    widths: dict | None = None,
) -> tuple[OperatorMatrix, StateVector]:
    """Householder reflection mapping |0> to the target superposition.

    Args:
        material: Atom table; supplies charges and positions.
        cell: Unit cell.
        grid: Momentum grid (n_p capped for simulation).
        norms: LCU norms fixing the branch weights and the rounds mode.
        widths: Optional overrides, recognizing key "eta".

    Returns:
        (operator, target state). The operator is self-inverse and sends
        the all-zero ancilla state exactly to the target. The target's
        success tag discounts the identity-encoding failure branch kept
        after one amplification round; it is 1.0 without amplification.
    """
    eta = None if widths is None else widths.get("eta")
    model = encoding_model(material, cell, grid, eta=eta, norms=norms)
    psi = model.prep_vector()
    dim = model.anc_layout.dim

    w = -psi.copy()
    w[0] += 1.0
    wn2 = float(w @ w)

    def apply(vec: np.ndarray) -> np.ndarray:
        if wn2 < 1e-28:
            return vec.copy()
        return vec - (2.0 / wn2) * np.outer(w, w @ vec.reshape(dim, -1)).reshape(vec.shape)

    operator = OperatorMatrix(
        layout=model.anc_layout, unitary=True, apply_fn=apply, apply_adjoint_fn=apply
    )
    if norms.aa_rounds == 1:
        tag = 1.0 - math.sin(model.theta) ** 2 * (1.0 - norms.p_amp)
    else:
        tag = 1.0
    target = StateVector(psi.astype(complex), model.anc_layout, success_prob=tag)
    return operator, target


def sel_operator(
    material: Material,
    cell: UnitCell,
    grid: PlaneWaveGrid,
    *,
    norms: LcuNorms | None = None,
    eta_override: int | None = None,
) -> OperatorMatrix:
    """Self-inverse signed-permutation selection operator.

    The returned operator acts on the ancilla plus system space; its
    apply closure reshapes the vector to (ancilla, system) and scatters
    each ancilla row through its cached system action.
    """
    model = encoding_model(material, cell, grid, eta=eta_override, norms=norms)
    anc_dim = model.anc_layout.dim
    sys_dim = model.sys_layout.dim
    full_dim = anc_dim * sys_dim
    if full_dim > FULL_SPACE_CAP:
        raise CapExceededError(f"joint dimension {full_dim} exceeds cap {FULL_SPACE_CAP}")
    layout = model.anc_layout.extended(model.sys_layout)

    def apply(vec: np.ndarray) -> np.ndarray:
        grid_view = vec.reshape(anc_dim, sys_dim)
        out = np.zeros_like(grid_view)
        for index in range(anc_dim):
            row = grid_view[index]
            if not np.any(row):
                continue
            image, tgt, ph = model.sel_action(index)
            out[image, tgt] = ph * row
        return out.reshape(vec.shape)

    return OperatorMatrix(layout=layout, unitary=True, apply_fn=apply, apply_adjoint_fn=apply)


def sel_involution_deviation(model: EncodingModel) -> float:
    """Certifies SEL^2 = I and unit phases over every ancilla row.

    Together with phase-unitality this implies SEL is Hermitian: the
    return leg of each signed permutation carries the conjugate phase.
    Returns the maximum deviation (0.0 for an exact involution).
    """
    worst = 0.0
    identity = np.arange(model.sys_layout.dim)
    for index in range(model.anc_layout.dim):
        image, tgt, ph = model.sel_action(index)
        back, tgt2, ph2 = model.sel_action(int(image))
        if back != index or np.any(tgt2[tgt] != identity):
            return 1.0
        worst = max(
            worst,
            float(np.max(np.abs(ph2[tgt] * ph - 1.0))),
            float(np.max(np.abs(np.abs(ph) - 1.0))),
        )
    return worst


def block_encoding_check(
    material: Material,
    cell: UnitCell,
    grid: PlaneWaveGrid,
    eta: int | None = None,
) -> float:
    """Max deviation of the encoded block from H / lambda (+ shift).

    Compares the flag-zero system block of <prep| SEL |prep> against the
    independently assembled dense Hamiltonian divided by lambda_total,
    plus the identity admixture of the amplified mode, and folds in the
    leakage into flagged rows (which must vanish by the sign average).
    """
    model = encoding_model(material, cell, grid, eta=eta)
    block, leak = model.encoded_system_block()
    dense = build_dense_hamiltonian(material, grid, eta_override=model.eta)
    lam = model.norms.lambda_total
    target = dense.matrix / lam + model.norms.encoding_shift() * np.eye(block.shape[0])
    return max(float(np.max(np.abs(block - target))), leak)
