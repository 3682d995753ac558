"""Orthogonal-lattice geometry, plane-wave grids, and material descriptions.

Everything downstream works in Hartree atomic units (bohr, hartree); this
module owns the unit conversions and the signed momentum grid conventions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .constants import ANGSTROM_TO_BOHR


class GeometryError(ValueError):
    """Invalid cell geometry or a momentum index outside the grid."""


class SchemaError(ValueError):
    """Malformed material document; the message carries the field path."""


@dataclass(frozen=True)
class UnitCell:
    """Orthogonal (orthorhombic) unit cell with edge lengths in bohr.

    The primitive vectors are a_i e_i, so the reciprocal primitive vectors
    are b_i = (2 pi / a_i) e_i and b_i . a_j = 2 pi delta_ij.
    """

    a1: float
    a2: float
    a3: float

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "a3"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise GeometryError(f"cell length {name} must be positive, got {value!r}")

    @property
    def lengths(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3], dtype=float)

    @property
    def omega(self) -> float:
        """Cell volume in bohr^3."""
        return self.a1 * self.a2 * self.a3

    @property
    def is_cubic(self) -> bool:
        a = self.lengths
        return bool(np.all(np.abs(a - a[0]) <= 1e-12 * a[0]))

    def reciprocal_lengths(self) -> np.ndarray:
        """Magnitudes of the reciprocal primitive vectors, 2 pi / a_i."""
        return 2.0 * np.pi / self.lengths


def unit_cell_from_bohr(a1: float, a2: float, a3: float) -> UnitCell:
    return UnitCell(float(a1), float(a2), float(a3))


def unit_cell_from_angstrom(a1: float, a2: float, a3: float) -> UnitCell:
    """Builds a cell from edge lengths in angstrom.

    Args:
        a1, a2, a3: Edge lengths in angstrom, all positive.

    Returns:
        UnitCell with lengths converted to bohr.
    """
    return UnitCell(
        float(a1) * ANGSTROM_TO_BOHR,
        float(a2) * ANGSTROM_TO_BOHR,
        float(a3) * ANGSTROM_TO_BOHR,
    )


@dataclass(frozen=True)
class PlaneWaveGrid:
    """The signed momentum-label grid.

    Each component of a grid point runs over [-(2^{n_p-1}-1), 2^{n_p-1}-1],
    so the grid holds N = (2^{n_p}-1)^3 points, is closed under negation and
    contains the origin. Enumeration is lexicographic on (p1, p2, p3).
    """

    n_p: int

    def __post_init__(self) -> None:
        if int(self.n_p) != self.n_p or self.n_p < 1:
            raise GeometryError(f"n_p must be a positive integer, got {self.n_p!r}")

    @property
    def half_width(self) -> int:
        """Largest component magnitude, 2^{n_p-1} - 1."""
        return 2 ** (self.n_p - 1) - 1

    @property
    def side(self) -> int:
        """Number of values per component, 2^{n_p} - 1."""
        return 2 * self.half_width + 1

    @property
    def size(self) -> int:
        """Total number of plane waves N."""
        return self.side**3

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=int)
        return bool(np.all(np.abs(p) <= self.half_width))

    def points(self) -> np.ndarray:
        """All grid points as an (N, 3) int array in lexicographic order."""
        h = self.half_width
        axis = np.arange(-h, h + 1)
        p1, p2, p3 = np.meshgrid(axis, axis, axis, indexing="ij")
        return np.stack([p1.ravel(), p2.ravel(), p3.ravel()], axis=1)

    def points_nonzero(self) -> np.ndarray:
        """Grid points with the origin removed, lexicographic order."""
        pts = self.points()
        keep = np.any(pts != 0, axis=1)
        return pts[keep]

    def index_of(self, p) -> int:
        """Lexicographic index of a grid point.

        Raises:
            GeometryError: if p lies outside the grid.
        """
        p = np.asarray(p, dtype=int)
        if not self.contains(p):
            raise GeometryError(f"momentum index {tuple(int(x) for x in p)} outside grid for n_p={self.n_p}")
        h, s = self.half_width, self.side
        return int((p[0] + h) * s * s + (p[1] + h) * s + (p[2] + h))


def reciprocal_vector(cell: UnitCell, p, grid: PlaneWaveGrid | None = None) -> np.ndarray:
    """Reciprocal-lattice vector G_p = 2 pi (p1/a1, p2/a2, p3/a3) in 1/bohr.

    Args:
        cell: The unit cell.
        p: Integer triple of momentum labels.
        grid: Optional grid; when given, p must lie inside it.

    Raises:
        GeometryError: non-integer components, or out of grid bounds when a
            grid is supplied.
    """
    arr = np.asarray(p)
    if arr.shape != (3,) or not np.all(arr == np.round(arr)):
        raise GeometryError(f"momentum label must be an integer triple, got {p!r}")
    arr = arr.astype(int)
    if grid is not None and not grid.contains(arr):
        raise GeometryError(f"momentum index {tuple(arr)} outside grid for n_p={grid.n_p}")
    return 2.0 * np.pi * arr / cell.lengths


def grid_spacing(cell: UnitCell, grid: PlaneWaveGrid) -> float:
    """Real-space spacing Delta = (Omega / N)^{1/3} in bohr."""
    return float((cell.omega / grid.size) ** (1.0 / 3.0))


@dataclass(frozen=True)
class Atom:
    symbol: str
    Z: int
    position: np.ndarray = field(repr=False)  # Cartesian, bohr

    def __post_init__(self) -> None:
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float))


@dataclass(frozen=True)
class Material:
    """A periodic material: cell, atoms and electron bookkeeping.

    eta defaults to the neutral-cell electron count sum_I Z_I; lambda_Z is
    always the total nuclear charge.
    """

    name: str
    cell: UnitCell
    atoms: tuple[Atom, ...]
    eta: int

    @property
    def lambda_Z(self) -> int:
        return int(sum(atom.Z for atom in self.atoms))

    @property
    def nuclear_charges(self) -> np.ndarray:
        return np.array([atom.Z for atom in self.atoms], dtype=float)

    @property
    def positions(self) -> np.ndarray:
        """Atom positions as an (L, 3) Cartesian array in bohr."""
        if not self.atoms:
            return np.zeros((0, 3))
        return np.stack([atom.position for atom in self.atoms])


def make_material(name: str, cell: UnitCell, atoms, eta: int | None = None) -> Material:
    atoms = tuple(atoms)
    if eta is None:
        eta = int(sum(a.Z for a in atoms))
    if eta < 1:
        raise SchemaError(f"eta: must be a positive integer, got {eta!r}")
    return Material(name=name, cell=cell, atoms=atoms, eta=int(eta))


def _require(mapping, key, path, kind=None):
    if key not in mapping:
        raise SchemaError(f"{path}{key}: missing required field")
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"{path}{key}: expected {kind}, got {type(value).__name__}")
    return value


def parse_material(document: str) -> Material:
    """Parses a material JSON document.

    The document holds `name`, `cell {a1, a2, a3, unit}` with unit
    "angstrom" or "bohr", `atoms [{symbol, Z, position, frame}]` with frame
    "fractional" or "cartesian", and an optional `eta`. Fractional positions
    are converted to Cartesian bohr at parse time and every position is
    wrapped into the cell box.

    Raises:
        SchemaError: unknown unit/frame tags, non-integer or non-positive Z,
            malformed positions; the message names the offending field.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"document: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise SchemaError("document: top level must be an object")

    name = _require(data, "name", "", str)
    cell_doc = _require(data, "cell", "", dict)
    unit = _require(cell_doc, "unit", "cell.", str)
    if unit not in ("angstrom", "bohr"):
        raise SchemaError(f"cell.unit: unknown unit tag {unit!r}")
    lengths = []
    for key in ("a1", "a2", "a3"):
        value = _require(cell_doc, key, "cell.")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError(f"cell.{key}: expected a number")
        lengths.append(float(value))
    if unit == "angstrom":
        cell = unit_cell_from_angstrom(*lengths)
    else:
        cell = unit_cell_from_bohr(*lengths)

    atoms_doc = _require(data, "atoms", "", list)
    atoms = []
    for i, atom_doc in enumerate(atoms_doc):
        path = f"atoms[{i}]."
        if not isinstance(atom_doc, dict):
            raise SchemaError(f"atoms[{i}]: expected an object")
        symbol = _require(atom_doc, "symbol", path, str)
        z = _require(atom_doc, "Z", path)
        if isinstance(z, bool) or not isinstance(z, (int, float)) or z != int(z) or z < 1:
            raise SchemaError(f"{path}Z: must be a positive integer, got {z!r}")
        position = _require(atom_doc, "position", path, list)
        if len(position) != 3 or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in position):
            raise SchemaError(f"{path}position: expected three numbers")
        frame = _require(atom_doc, "frame", path, str)
        pos = np.array(position, dtype=float)
        if not np.all(np.isfinite(pos)):
            raise SchemaError(f"{path}position: components must be finite")
        if frame == "fractional":
            cartesian = pos * cell.lengths
        elif frame == "cartesian":
            cartesian = pos * (ANGSTROM_TO_BOHR if unit == "angstrom" else 1.0)
        else:
            raise SchemaError(f"{path}frame: unknown frame tag {frame!r}")
        cartesian = np.mod(cartesian, cell.lengths)
        atoms.append(Atom(symbol=symbol, Z=int(z), position=cartesian))

    eta = data.get("eta")
    if eta is not None and (isinstance(eta, bool) or not isinstance(eta, (int, float)) or eta != int(eta) or eta < 1):
        raise SchemaError(f"eta: must be a positive integer, got {eta!r}")
    return make_material(name, cell, atoms, None if eta is None else int(eta))


def serialize_material(material: Material) -> str:
    """Inverse of parse_material up to unit normalization (emits bohr)."""
    doc = {
        "name": material.name,
        "cell": {
            "a1": material.cell.a1,
            "a2": material.cell.a2,
            "a3": material.cell.a3,
            "unit": "bohr",
        },
        "atoms": [
            {
                "symbol": atom.symbol,
                "Z": atom.Z,
                "position": [float(x) for x in atom.position],
                "frame": "cartesian",
            }
            for atom in material.atoms
        ],
        "eta": material.eta,
    }
    return json.dumps(doc, indent=2)
