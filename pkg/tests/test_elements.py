"""Plane-wave matrix elements against hand-evaluated anchors and symmetries."""

import numpy as np
import pytest

from pwqpe.crystal import Atom, GeometryError, PlaneWaveGrid, make_material, unit_cell_from_bohr
from pwqpe.hamiltonian import (
    ExcludedTermError,
    coulomb_element,
    kinetic_element,
    nuclear_element,
)

TWO_PI = 2.0 * np.pi


@pytest.fixture(scope="module")
def two_pi_cell():
    return unit_cell_from_bohr(TWO_PI, TWO_PI, TWO_PI)


@pytest.fixture(scope="module")
def two_atom_material():
    cell = unit_cell_from_bohr(2.0, 2.5, 3.0)
    atoms = (
        Atom(symbol="He", Z=2, position=np.array([0.31, 0.42, 0.87])),
        Atom(symbol="H", Z=1, position=np.array([1.11, 2.03, 0.15])),
    )
    return make_material("asym", cell, atoms)


class TestKinetic:
    def test_unit_reciprocal_anchor(self, two_pi_cell):
        assert abs(kinetic_element(two_pi_cell, (1, 0, 0), (1, 0, 0)) - 0.5) < 1e-15

    def test_off_diagonal_vanishes(self, two_pi_cell):
        assert kinetic_element(two_pi_cell, (1, 0, 0), (0, 1, 0)) == 0.0

    def test_orthorhombic_anchor(self):
        cell = unit_cell_from_bohr(9.4866, 10.2045, 11.8297)
        value = kinetic_element(cell, (1, 1, 1), (1, 1, 1))
        assert abs(value - 0.5499481164540937) < 1e-14
        # Same number from the rounded reciprocal components.
        assert abs(value - 0.5 * (0.6623**2 + 0.6157**2 + 0.5311**2)) < 1e-4

    def test_scales_with_squared_index(self, two_pi_cell):
        base = kinetic_element(two_pi_cell, (1, 0, 0), (1, 0, 0))
        assert abs(kinetic_element(two_pi_cell, (3, 0, 0), (3, 0, 0)) - 9.0 * base) < 1e-12

    def test_grid_bound(self, two_pi_cell):
        grid = PlaneWaveGrid(2)
        with pytest.raises(GeometryError):
            kinetic_element(two_pi_cell, (2, 0, 0), (2, 0, 0), grid)


class TestNuclear:
    def test_origin_nucleus_anchor(self, two_pi_cell):
        # Z=1 at the origin, nu=(1,0,0): -(4 pi / (2 pi)^3) / 1 = -1 / (2 pi^2).
        material = make_material(
            "h", two_pi_cell, (Atom(symbol="H", Z=1, position=np.zeros(3)),)
        )
        value = nuclear_element(two_pi_cell, material, (1, 0, 0), (0, 0, 0))
        assert abs(value - (-0.05066059182116889)) < 1e-15
        assert abs(value.imag) < 1e-15

    def test_origin_nucleus_is_real_negative(self, two_pi_cell):
        material = make_material(
            "h", two_pi_cell, (Atom(symbol="H", Z=1, position=np.zeros(3)),)
        )
        grid = PlaneWaveGrid(2)
        for p in grid.points():
            for q in grid.points():
                nu = p - q
                if not nu.any() or not grid.contains(nu):
                    continue
                value = nuclear_element(two_pi_cell, material, p, q)
                assert abs(value.imag) < 1e-14
                assert value.real < 0.0

    def test_conjugate_symmetry(self, two_atom_material):
        cell = two_atom_material.cell
        grid = PlaneWaveGrid(2)
        pts = grid.points()
        for p in pts:
            for q in pts:
                nu = p - q
                if not nu.any() or not grid.contains(nu):
                    continue
                forward = nuclear_element(cell, two_atom_material, p, q)
                backward = nuclear_element(cell, two_atom_material, q, p)
                assert abs(forward - np.conj(backward)) < 1e-14

    def test_charge_linearity(self, two_pi_cell):
        pos = np.array([0.3, 0.9, 1.4])
        single = make_material("z1", two_pi_cell, (Atom(symbol="H", Z=1, position=pos),))
        triple = make_material("z3", two_pi_cell, (Atom(symbol="Li", Z=3, position=pos),))
        p, q = (1, 0, 0), (0, 1, 0)
        assert abs(
            nuclear_element(two_pi_cell, triple, p, q)
            - 3.0 * nuclear_element(two_pi_cell, single, p, q)
        ) < 1e-14

    def test_diagonal_excluded(self, two_atom_material):
        with pytest.raises(ExcludedTermError):
            nuclear_element(two_atom_material.cell, two_atom_material, (1, 0, 0), (1, 0, 0))

    def test_transfer_outside_grid(self, two_atom_material):
        grid = PlaneWaveGrid(2)
        with pytest.raises(GeometryError):
            nuclear_element(two_atom_material.cell, two_atom_material, (1, 0, 0), (-1, 0, 0), grid)


class TestCoulomb:
    def test_unit_transfer_anchor(self, two_pi_cell):
        # nu = (1,0,0) on the 2 pi cube: (4 pi / (2 pi)^3) / 1 = 1 / (2 pi^2).
        value = coulomb_element(two_pi_cell, (1, 0, 0), (0, 0, 0), (1, 0, 0), (0, 0, 0))
        assert abs(value - 0.05066059182116889) < 1e-15

    def test_non_conserving_vanishes(self, two_pi_cell):
        assert coulomb_element(two_pi_cell, (1, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0)) == 0.0

    def test_zero_transfer_excluded(self, two_pi_cell):
        with pytest.raises(ExcludedTermError):
            coulomb_element(two_pi_cell, (1, 0, 0), (0, 1, 0), (0, 1, 0), (1, 0, 0))

    def test_exchange_symmetry_over_conserving_tuples(self):
        # V_pqrs = V_qpsr for every momentum-conserving tuple at n_p = 2.
        cell = unit_cell_from_bohr(2.0, 2.5, 3.0)
        grid = PlaneWaveGrid(2)
        pts = grid.points()
        checked = 0
        for p in pts:
            for s in pts:
                nu = p - s
                if not nu.any():
                    continue
                for q in pts:
                    r = q + nu
                    if not grid.contains(r):
                        continue
                    lhs = coulomb_element(cell, p, q, r, s)
                    rhs = coulomb_element(cell, q, p, s, r)
                    assert abs(lhs - rhs) < 1e-15
                    assert lhs > 0.0
                    checked += 1
        assert checked > 5000

    def test_sampled_non_conserving(self):
        cell = unit_cell_from_bohr(2.0, 2.5, 3.0)
        grid = PlaneWaveGrid(2)
        pts = grid.points()
        rng = np.random.default_rng(5)
        found = 0
        for _ in range(400):
            p, q, r, s = pts[rng.integers(len(pts), size=4)]
            if np.array_equal(p - s, r - q):
                continue
            assert coulomb_element(cell, p, q, r, s) == 0.0
            found += 1
        assert found > 300

    def test_depends_only_on_transfer(self, two_pi_cell):
        # Same nu through different (p, q, r, s) gives the same value.
        a = coulomb_element(two_pi_cell, (1, 1, 0), (0, 0, 0), (1, 0, 0), (0, 1, 0))
        b = coulomb_element(two_pi_cell, (1, 0, -1), (1, 1, 1), (2, 1, 1), (0, 0, -1))
        assert abs(a - b) < 1e-15

    def test_grid_bound(self, two_pi_cell):
        grid = PlaneWaveGrid(2)
        with pytest.raises(GeometryError):
            coulomb_element(two_pi_cell, (2, 0, 0), (0, 0, 0), (1, 0, 0), (1, 0, 0), grid)
