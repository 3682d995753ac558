"""Named verification checks over small reference instances.

Each check measures a deviation against an explicit threshold and
reports a JSON-ready record: check name, instance parameters, measured
deviation, threshold, pass flag. The CLI verify command serializes the
full list; tests assert on individual records.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np

from ..crystal import Atom, Material, PlaneWaveGrid, UnitCell, make_material, unit_cell_from_bohr
from ..hamiltonian.lcu import lcu_norms
from .antisym import antisymmetrize, simulate_sorting_antisymmetrization
from .block_encoding import block_encoding_check, encoding_model, prep_operator, sel_involution_deviation
from .prep_states import (
    exponential_state,
    momentum_state,
    momentum_state_success_amplitude,
    momentum_success_probability,
)
from .qpe import qpe_simulate
from .registers import StateVector
from .slater import prepare_slater, random_unitary
from .walk import eigenphase_check, reflection_identity_check, rotation_check


@dataclass
class CheckResult:
    """One verification record, serializable with dataclasses.asdict."""

    name: str
    instance: dict
    deviation: float
    threshold: float
    passed: bool

    @classmethod
    def from_deviation(cls, name: str, instance: dict, deviation: float, threshold: float):
        return cls(
            name=name,
            instance=instance,
            deviation=float(deviation),
            threshold=float(threshold),
            passed=bool(deviation < threshold),
        )


def reference_instances() -> list[dict]:
    """Small encoding instances used by the verify suite and the tests."""
    instances = []

    cell = unit_cell_from_bohr(2.5, 2.5, 2.5)
    atoms = (Atom(symbol="H", Z=1, position=np.array([0.30, 0.675, 1.025])),)
    instances.append(
        {
            "label": "eta1-cubic",
            "material": make_material("single-nucleus", cell, atoms),
            "cell": cell,
            "grid": PlaneWaveGrid(2),
        }
    )

    cell = unit_cell_from_bohr(2.0, 2.0, 2.0)
    atoms = (Atom(symbol="H", Z=1, position=np.array([0.24, 0.54, 0.82])),)
    instances.append(
        {
            "label": "eta2-cubic",
            "material": make_material("single-nucleus", cell, atoms, eta=2),
            "cell": cell,
            "grid": PlaneWaveGrid(2),
        }
    )

    cell = unit_cell_from_bohr(2.0, 2.0, 2.0)
    instances.append(
        {
            "label": "eta2-bare",
            "material": make_material("electron-gas", cell, (), eta=2),
            "cell": cell,
            "grid": PlaneWaveGrid(2),
        }
    )

    cell = unit_cell_from_bohr(4.0, 4.0, 4.0)
    atoms = (Atom(symbol="H", Z=1, position=np.array([0.48, 1.08, 1.64])),)
    instances.append(
        {
            "label": "eta2-amplified",
            "material": make_material("single-nucleus", cell, atoms, eta=2),
            "cell": cell,
            "grid": PlaneWaveGrid(2),
        }
    )

    cell = unit_cell_from_bohr(2.0, 2.5, 3.0)
    atoms = (Atom(symbol="H", Z=1, position=np.array([0.30, 0.70, 1.10])),)
    instances.append(
        {
            "label": "eta1-orthorhombic",
            "material": make_material("single-nucleus", cell, atoms),
            "cell": cell,
            "grid": PlaneWaveGrid(2),
        }
    )

    return instances


def _instance_params(inst: dict) -> dict:
    material: Material = inst["material"]
    cell: UnitCell = inst["cell"]
    grid: PlaneWaveGrid = inst["grid"]
    return {
        "label": inst["label"],
        "eta": material.eta,
        "n_p": grid.n_p,
        "n_atoms": len(material.atoms),
        "cell_bohr": [float(x) for x in cell.lengths],
    }


def _encoding_checks(inst: dict) -> list[CheckResult]:
    material, cell, grid = inst["material"], inst["cell"], inst["grid"]
    params = _instance_params(inst)
    results = []

    deviation = block_encoding_check(material, cell, grid)
    results.append(CheckResult.from_deviation("block_encoding", params, deviation, 1e-10))

    model = encoding_model(material, cell, grid)
    results.append(
        CheckResult.from_deviation("sel_involution", params, sel_involution_deviation(model), 1e-12)
    )

    report = eigenphase_check(material, cell, grid)
    results.append(
        CheckResult.from_deviation(
            "walk_eigenphase",
            {**params, "n_eigenvalues": report["n_eigenvalues"]},
            report["max_abs_deviation"],
            1e-8 * report["lambda_total"],
        )
    )

    results.append(
        CheckResult.from_deviation(
            "walk_rotation", params, rotation_check(material, cell, grid), 1e-10
        )
    )
    results.append(
        CheckResult.from_deviation(
            "walk_reflection_conjugation",
            params,
            reflection_identity_check(material, cell, grid),
            1e-10,
        )
    )

    norms = lcu_norms(material, cell, grid)
    operator, target = prep_operator(material, cell, grid, norms)
    zero = np.zeros(target.layout.dim, dtype=complex)
    zero[0] = 1.0
    prepared = StateVector(operator.apply(zero), target.layout)
    results.append(
        CheckResult.from_deviation(
            "prep_target", params, 1.0 - prepared.fidelity(target), 1e-12
        )
    )
    results.append(
        CheckResult.from_deviation(
            "prep_unitarity", params, operator.unitarity_deviation(samples=16, seed=11), 1e-10
        )
    )
    return results


def _momentum_checks() -> list[CheckResult]:
    results = []
    cells = {"cubic": None, "orthorhombic": unit_cell_from_bohr(2.0, 2.5, 3.0)}
    for n_p, m_param in ((2, 64), (3, 64)):
        for cell_label, cell in cells.items():
            box = 2**n_p - 1
            total = 0.0
            for x in range(-box, box + 1):
                for y in range(-box, box + 1):
                    for z in range(-box, box + 1):
                        if x == y == z == 0:
                            continue
                        amp = momentum_state_success_amplitude(n_p, m_param, (x, y, z), cell)
                        total += amp**2
            p_nu = momentum_success_probability(n_p, m_param, cell)
            _state, p_full = momentum_state(n_p, m_param, cell)
            results.append(
                CheckResult.from_deviation(
                    "momentum_amplitude_consistency",
                    {"n_p": n_p, "m_param": m_param, "cell": cell_label},
                    abs(total - p_nu) + abs(p_full - p_nu),
                    1e-12,
                )
            )
    return results


def _antisymmetry_checks(seed: int) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    grid = PlaneWaveGrid(2)
    for eta in (2, 3):
        pts = grid.points()
        chosen = rng.choice(pts.shape[0], size=eta, replace=False)
        state = antisymmetrize([tuple(pts[c]) for c in chosen], 2)
        shape = (grid.size,) * eta
        amps = state.amplitudes.reshape(shape)
        worst = 0.0
        for i in range(eta):
            for j in range(i + 1, eta):
                swapped = np.swapaxes(amps, i, j)
                worst = max(worst, float(np.max(np.abs(swapped + amps))))
        results.append(
            CheckResult.from_deviation(
                "antisymmetrization_sign", {"eta": eta, "n_p": 2}, worst, 1e-12
            )
        )

        _state, success = simulate_sorting_antisymmetrization(eta, 2)
        f = 2 ** math.ceil(math.log2(eta**2))
        exact = math.factorial(f) / math.factorial(f - eta) / f**eta
        results.append(
            CheckResult.from_deviation(
                "sorting_success_probability",
                {"eta": eta, "seed_values": f},
                abs(success - exact),
                1e-12,
            )
        )
    return results


def _slater_checks(seed: int) -> list[CheckResult]:
    results = []
    for eta, n in ((1, 4), (2, 4), (3, 5)):
        u = random_unitary(n, seed + eta)
        state, _count = prepare_slater(u, eta)
        amps = state.amplitudes.reshape((n,) * eta)
        worst = 0.0
        for combo in itertools.product(range(n), repeat=eta):
            exact = np.linalg.det(u[np.ix_(range(eta), combo)]) / math.sqrt(math.factorial(eta))
            worst = max(worst, abs(amps[combo] - exact))
        results.append(
            CheckResult.from_deviation(
                "slater_determinant", {"eta": eta, "n_prime": n, "seed": seed + eta}, worst, 1e-10
            )
        )
    return results


def _qpe_checks() -> list[CheckResult]:
    results = []
    dim = 8
    phases = np.arange(dim) / dim
    unitary = np.diag(np.exp(2j * np.pi * phases))
    psi = np.zeros(dim, dtype=complex)
    psi[3] = 1.0
    dist = qpe_simulate(unitary, psi, 3)
    point_mass_dev = abs(dist[3] - 1.0) + float(np.sum(np.delete(dist, 3)))
    results.append(
        CheckResult.from_deviation(
            "qpe_point_mass", {"t": 3, "phase": "3/8"}, point_mass_dev, 1e-12
        )
    )

    rng = np.random.default_rng(23)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    dist = qpe_simulate(unitary, psi, 5)
    results.append(
        CheckResult.from_deviation(
            "qpe_distribution_normalization",
            {"t": 5, "dim": dim},
            abs(float(np.sum(dist)) - 1.0),
            1e-12,
        )
    )

    state, success = exponential_state(3)
    results.append(
        CheckResult.from_deviation(
            "exponential_state_success",
            {"n_p": 3},
            abs(success - 0.75) + abs(state.norm**2 - success),
            1e-12,
        )
    )
    return results


def run_verification_suite(seed: int = 11, instances: list[dict] | None = None) -> list[CheckResult]:
    """Runs every named check; a few seconds on one core."""
    results: list[CheckResult] = []
    for inst in reference_instances() if instances is None else instances:
        results.extend(_encoding_checks(inst))
    results.extend(_momentum_checks())
    results.extend(_antisymmetry_checks(seed))
    results.extend(_slater_checks(seed))
    results.extend(_qpe_checks())
    return results


def verification_report(results: list[CheckResult]) -> dict:
    """JSON document: every record plus an overall verdict."""
    return {
        "checks": [asdict(r) for r in results],
        "n_checks": len(results),
        "n_failed": sum(1 for r in results if not r.passed),
        "all_passed": all(r.passed for r in results),
    }
