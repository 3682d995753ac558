"""Cell geometry, momentum grid, and material schema tests."""

import json
import math

import numpy as np
import pytest

from pwqpe.crystal import (
    Atom,
    GeometryError,
    PlaneWaveGrid,
    SchemaError,
    UnitCell,
    grid_spacing,
    make_material,
    parse_material,
    reciprocal_vector,
    serialize_material,
    unit_cell_from_angstrom,
    unit_cell_from_bohr,
)

BOHR_IN_ANGSTROM = 0.52917721067


class TestUnitCell:
    def test_li2fesio4_volume(self):
        cell = unit_cell_from_angstrom(5.02, 5.40, 6.26)
        assert abs(cell.omega - 1145.0) <= 0.005 * 1145.0

    def test_one_bohr_cube(self):
        a = BOHR_IN_ANGSTROM
        cell = unit_cell_from_angstrom(a, a, a)
        assert abs(cell.omega - 1.0) < 1e-12

    def test_hand_multiplied_volume(self):
        # 6 * (1/0.52917721067)^3, worked out by hand to 40.48999822397969.
        cell = unit_cell_from_angstrom(1.0, 2.0, 3.0)
        assert abs(cell.omega - 40.48999822397969) < 5e-5

    def test_bohr_constructor_is_identity(self):
        cell = unit_cell_from_bohr(2.0, 2.5, 3.0)
        assert cell.a1 == 2.0 and cell.a2 == 2.5 and cell.a3 == 3.0
        assert abs(cell.omega - 15.0) < 1e-12

    def test_is_cubic(self):
        assert unit_cell_from_bohr(2.0, 2.0, 2.0).is_cubic
        assert not unit_cell_from_bohr(2.0, 2.0, 2.0001).is_cubic

    @pytest.mark.parametrize("lengths", [(0.0, 1.0, 1.0), (1.0, -2.0, 1.0)])
    def test_non_positive_length_rejected(self, lengths):
        with pytest.raises(GeometryError):
            unit_cell_from_bohr(*lengths)

    def test_reciprocal_lengths(self):
        cell = unit_cell_from_bohr(2.0, 4.0, 8.0)
        expected = 2.0 * np.pi / np.array([2.0, 4.0, 8.0])
        assert np.allclose(cell.reciprocal_lengths(), expected, atol=1e-15)


class TestReciprocalVector:
    def test_two_pi_cube_is_unit(self):
        cell = unit_cell_from_bohr(2.0 * np.pi, 2.0 * np.pi, 2.0 * np.pi)
        assert np.allclose(reciprocal_vector(cell, (1, 0, 0)), [1.0, 0.0, 0.0], atol=1e-15)

    def test_origin_maps_to_zero(self):
        cell = unit_cell_from_bohr(2.0, 2.5, 3.0)
        assert np.all(reciprocal_vector(cell, (0, 0, 0)) == 0.0)

    def test_componentwise_anchor(self):
        cell = unit_cell_from_bohr(9.4866, 10.2045, 11.8297)
        g = reciprocal_vector(cell, (1, 1, 1))
        expected = (0.6623221498934905, 0.6157269153000722, 0.5311364875846036)
        assert np.allclose(g, expected, rtol=1e-12, atol=0.0)

    def test_negation(self):
        cell = unit_cell_from_bohr(2.0, 2.5, 3.0)
        rng = np.random.default_rng(7)
        for _ in range(20):
            p = rng.integers(-5, 6, size=3)
            assert np.allclose(
                reciprocal_vector(cell, p), -reciprocal_vector(cell, -p), atol=1e-15
            )

    def test_dual_basis_identity(self):
        # b_i . a_j = 2 pi delta_ij for the orthogonal cell vectors.
        cell = unit_cell_from_bohr(2.0, 2.5, 3.0)
        vectors = np.diag(cell.lengths)
        for i in range(3):
            unit = np.zeros(3, dtype=int)
            unit[i] = 1
            b = reciprocal_vector(cell, unit)
            for j in range(3):
                expected = 2.0 * np.pi if i == j else 0.0
                assert abs(b @ vectors[j] - expected) < 1e-12

    def test_grid_bound_enforced(self):
        cell = unit_cell_from_bohr(2.0, 2.0, 2.0)
        grid = PlaneWaveGrid(2)
        reciprocal_vector(cell, (1, 1, 1), grid)
        with pytest.raises(GeometryError):
            reciprocal_vector(cell, (2, 0, 0), grid)

    def test_non_integer_label_rejected(self):
        cell = unit_cell_from_bohr(2.0, 2.0, 2.0)
        with pytest.raises(GeometryError):
            reciprocal_vector(cell, (0.5, 0.0, 0.0))


class TestPlaneWaveGrid:
    @pytest.mark.parametrize("n_p", [1, 2, 3, 4])
    def test_size_and_side(self, n_p):
        grid = PlaneWaveGrid(n_p)
        assert grid.side == 2**n_p - 1
        assert grid.size == (2**n_p - 1) ** 3
        assert grid.half_width == 2 ** (n_p - 1) - 1

    def test_points_cover_signed_box(self):
        grid = PlaneWaveGrid(3)
        pts = grid.points()
        assert pts.shape == (grid.size, 3)
        assert pts.min() == -grid.half_width
        assert pts.max() == grid.half_width
        assert len({tuple(p) for p in pts}) == grid.size

    def test_origin_and_negation_closure(self):
        grid = PlaneWaveGrid(3)
        pts = {tuple(p) for p in grid.points()}
        assert (0, 0, 0) in pts
        assert all(tuple(-x for x in p) in pts for p in pts)

    def test_points_nonzero_excludes_origin(self):
        grid = PlaneWaveGrid(2)
        nz = grid.points_nonzero()
        assert nz.shape == (grid.size - 1, 3)
        assert not any(np.all(p == 0) for p in nz)

    def test_index_of_is_lexicographic(self):
        grid = PlaneWaveGrid(2)
        for i, p in enumerate(grid.points()):
            assert grid.index_of(p) == i

    def test_contains(self):
        grid = PlaneWaveGrid(2)
        assert grid.contains((1, -1, 0))
        assert not grid.contains((2, 0, 0))

    def test_index_of_out_of_grid(self):
        with pytest.raises(GeometryError):
            PlaneWaveGrid(2).index_of((0, 0, 2))

    @pytest.mark.parametrize("bad", [0, -1, 2.5])
    def test_invalid_n_p(self, bad):
        with pytest.raises(GeometryError):
            PlaneWaveGrid(bad)


class TestGridSpacing:
    def test_point_value(self):
        a = 1145.2 ** (1.0 / 3.0)
        cell = unit_cell_from_bohr(a, a, a)
        delta = grid_spacing(cell, PlaneWaveGrid(4))
        assert abs(delta - 0.6974865769223564) < 1e-12
        assert abs(delta - 0.6977) < 1e-3

    def test_cube_recovers_volume(self):
        cell = unit_cell_from_bohr(2.0, 2.5, 3.0)
        for n_p in (2, 3, 4):
            grid = PlaneWaveGrid(n_p)
            delta = grid_spacing(cell, grid)
            assert abs(delta**3 * grid.size - cell.omega) < 1e-9


class TestMaterialSchema:
    def test_bundled_li2fesio4(self, li_material):
        assert li_material.eta == 156
        assert li_material.lambda_Z == 156
        assert len(li_material.atoms) == 16
        assert abs(li_material.cell.omega - 1145.0) <= 0.005 * 1145.0

    def test_single_hydrogen(self):
        document = json.dumps(
            {
                "name": "H",
                "cell": {"a1": 2.0, "a2": 2.0, "a3": 2.0, "unit": "bohr"},
                "atoms": [
                    {"symbol": "H", "Z": 1, "position": [0.1, 0.2, 0.3], "frame": "cartesian"}
                ],
            }
        )
        material = parse_material(document)
        assert material.eta == 1
        assert material.lambda_Z == 1

    def test_fractional_positions_convert(self):
        document = json.dumps(
            {
                "name": "frac",
                "cell": {"a1": 2.0, "a2": 4.0, "a3": 8.0, "unit": "bohr"},
                "atoms": [
                    {"symbol": "X", "Z": 2, "position": [0.5, 0.25, 0.125], "frame": "fractional"}
                ],
            }
        )
        material = parse_material(document)
        assert np.allclose(material.atoms[0].position, [1.0, 1.0, 1.0], atol=1e-12)

    def test_angstrom_cell_converts(self):
        document = json.dumps(
            {
                "name": "ang",
                "cell": {"a1": 1.0, "a2": 1.0, "a3": 1.0, "unit": "angstrom"},
                "atoms": [],
                "eta": 2,
            }
        )
        material = parse_material(document)
        assert abs(material.cell.a1 - 1.0 / BOHR_IN_ANGSTROM) < 1e-12

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda d: d["cell"].update(unit="meter"),
            lambda d: d["atoms"][0].update(Z=0),
            lambda d: d["atoms"][0].update(Z=1.5),
            lambda d: d["atoms"][0].update(frame="spherical"),
            lambda d: d["atoms"][0].update(position=[0.0, 0.0]),
            lambda d: d.pop("name"),
            lambda d: d["cell"].pop("a2"),
            lambda d: d.update(eta=0),
        ],
    )
    def test_schema_violations(self, mutate):
        document = {
            "name": "probe",
            "cell": {"a1": 2.0, "a2": 2.0, "a3": 2.0, "unit": "bohr"},
            "atoms": [{"symbol": "H", "Z": 1, "position": [0.1, 0.2, 0.3], "frame": "cartesian"}],
        }
        mutate(document)
        with pytest.raises(SchemaError):
            parse_material(json.dumps(document))

    def test_invalid_json(self):
        with pytest.raises(SchemaError):
            parse_material("{not json")

    def test_roundtrip(self, li_material):
        recovered = parse_material(serialize_material(li_material))
        assert recovered.name == li_material.name
        assert recovered.eta == li_material.eta
        assert np.allclose(recovered.cell.lengths, li_material.cell.lengths, rtol=1e-15)
        for a, b in zip(recovered.atoms, li_material.atoms):
            assert a.symbol == b.symbol and a.Z == b.Z
            assert np.allclose(a.position, b.position, atol=1e-12)

    def test_positions_wrap_into_cell(self):
        document = json.dumps(
            {
                "name": "wrap",
                "cell": {"a1": 2.0, "a2": 2.0, "a3": 2.0, "unit": "bohr"},
                "atoms": [
                    {"symbol": "X", "Z": 1, "position": [2.5, -0.5, 4.0], "frame": "cartesian"}
                ],
            }
        )
        material = parse_material(document)
        pos = material.atoms[0].position
        assert np.all(pos >= 0.0) and np.all(pos < 2.0)
        assert np.allclose(pos, [0.5, 1.5, 0.0], atol=1e-12)

    def test_default_eta_is_total_charge(self):
        cell = unit_cell_from_bohr(2.0, 2.0, 2.0)
        atoms = (
            Atom(symbol="He", Z=2, position=np.zeros(3)),
            Atom(symbol="H", Z=1, position=np.array([1.0, 1.0, 1.0])),
        )
        material = make_material("heh", cell, atoms)
        assert material.eta == 3
        assert make_material("heh+", cell, atoms, eta=2).eta == 2

    def test_make_material_rejects_bad_eta(self):
        cell = unit_cell_from_bohr(2.0, 2.0, 2.0)
        with pytest.raises(SchemaError):
            make_material("bad", cell, (), eta=0)
