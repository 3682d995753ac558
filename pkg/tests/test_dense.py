"""Dense Hamiltonian assembly against the matrix-element oracles."""

import numpy as np
import pytest

from pwqpe.crystal import Atom, PlaneWaveGrid, make_material, unit_cell_from_bohr
from pwqpe.hamiltonian import (
    CapExceededError,
    ExcludedTermError,
    build_dense_hamiltonian,
    coulomb_element,
    kinetic_element,
    lcu_norms,
    nuclear_element,
)


def one_body_oracle(material, grid):
    """(N, N) single-particle block assembled entry by entry."""
    cell = material.cell
    pts = grid.points()
    n = grid.size
    block = np.zeros((n, n), dtype=complex)
    for i, p in enumerate(pts):
        block[i, i] = kinetic_element(cell, p, p)
        for j, q in enumerate(pts):
            nu = p - q
            if not nu.any() or not grid.contains(nu):
                continue
            if material.atoms:
                block[i, j] += nuclear_element(cell, material, p, q)
    return block


class TestSingleParticle:
    def test_free_particle_is_diagonal(self):
        cell = unit_cell_from_bohr(2.0, 2.0, 2.0)
        material = make_material("gas", cell, (), eta=1)
        grid = PlaneWaveGrid(2)
        dense = build_dense_hamiltonian(material, grid)
        off = dense.matrix - np.diag(np.diag(dense.matrix))
        assert np.max(np.abs(off)) == 0.0
        for i, p in enumerate(grid.points()):
            assert abs(dense.matrix[i, i] - kinetic_element(cell, p, p)) < 1e-14

    def test_matches_element_oracle(self, instances_by_label):
        inst = instances_by_label["eta1-cubic"]
        dense = build_dense_hamiltonian(inst["material"], inst["grid"])
        oracle = one_body_oracle(inst["material"], inst["grid"])
        assert np.max(np.abs(dense.matrix - oracle)) < 1e-13

    def test_orthorhombic_matches_element_oracle(self, instances_by_label):
        inst = instances_by_label["eta1-orthorhombic"]
        dense = build_dense_hamiltonian(inst["material"], inst["grid"])
        oracle = one_body_oracle(inst["material"], inst["grid"])
        assert np.max(np.abs(dense.matrix - oracle)) < 1e-13


class TestTwoParticle:
    @pytest.fixture(scope="class")
    def eta2(self, instances_by_label):
        inst = instances_by_label["eta2-cubic"]
        dense = build_dense_hamiltonian(inst["material"], inst["grid"])
        return inst, dense

    def test_hermitian(self, eta2):
        _, dense = eta2
        assert np.max(np.abs(dense.matrix - dense.matrix.conj().T)) < 1e-12

    def test_permutation_invariance(self, eta2):
        _, dense = eta2
        n = dense.grid.size
        h = dense.matrix.reshape(n, n, n, n)
        swapped = h.transpose(1, 0, 3, 2)
        assert np.max(np.abs(h - swapped)) < 1e-12

    def test_sampled_entries_match_element_oracle(self, eta2):
        inst, dense = eta2
        material, grid = inst["material"], inst["grid"]
        cell = material.cell
        pts = grid.points()
        n = grid.size
        one_body = one_body_oracle(material, grid)
        rng = np.random.default_rng(13)
        for _ in range(400):
            a0, a1, b0, b1 = rng.integers(n, size=4)
            expected = 0.0 + 0.0j
            if a1 == b1:
                expected += one_body[a0, b0]
            if a0 == b0:
                expected += one_body[a1, b1]
            nu = pts[a0] - pts[b0]
            if nu.any() and grid.contains(nu) and np.array_equal(nu, -(pts[a1] - pts[b1])):
                expected += coulomb_element(cell, pts[a0], pts[a1], pts[b1], pts[b0])
            assert abs(dense.matrix[a0 * n + a1, b0 * n + b1] - expected) < 1e-13

    def test_bare_gas_has_no_nuclear_part(self, instances_by_label):
        inst = instances_by_label["eta2-bare"]
        dense = build_dense_hamiltonian(inst["material"], inst["grid"])
        n = inst["grid"].size
        h = dense.matrix.reshape(n, n, n, n)
        # With no nuclei every one-particle off-diagonal entry comes from
        # the pair term, which conserves total momentum exactly.
        pts = inst["grid"].points()
        total = pts[:, None, :] + pts[None, :, :]
        rng = np.random.default_rng(3)
        for _ in range(300):
            a0, a1, b0, b1 = rng.integers(n, size=4)
            if not np.array_equal(total[a0, a1], total[b0, b1]):
                assert h[a0, a1, b0, b1] == 0.0


class TestCapsAndBounds:
    def test_dimension_cap(self):
        cell = unit_cell_from_bohr(2.0, 2.0, 2.0)
        material = make_material("gas", cell, (), eta=3)
        with pytest.raises(CapExceededError):
            build_dense_hamiltonian(material, PlaneWaveGrid(2))

    def test_custom_cap(self):
        cell = unit_cell_from_bohr(2.0, 2.0, 2.0)
        material = make_material("gas", cell, (), eta=1)
        with pytest.raises(CapExceededError):
            build_dense_hamiltonian(material, PlaneWaveGrid(2), cap=26)

    def test_eta_override(self, instances_by_label):
        inst = instances_by_label["eta1-cubic"]
        dense = build_dense_hamiltonian(inst["material"], inst["grid"], eta_override=2)
        assert dense.eta == 2
        assert dense.dimension == inst["grid"].size ** 2

    def test_lambda_bounds_spectrum(self, instances):
        # The LCU 1-norm dominates the spectral radius on every instance.
        for inst in instances:
            material, cell, grid = inst["material"], inst["cell"], inst["grid"]
            dense = build_dense_hamiltonian(material, grid)
            energies = np.linalg.eigvalsh(dense.matrix)
            norms = lcu_norms(material, cell, grid)
            assert norms.lambda_total >= np.max(np.abs(energies))
