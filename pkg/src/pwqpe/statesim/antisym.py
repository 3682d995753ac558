"""Antisymmetrization: direct signed sum and the sorting-network route.

The sorting-network simulation follows the seed/record construction:
a uniform seed superposition is sorted by a fixed comparator network
while recording the swaps, collision seeds are projected out, and the
record steers an inverse sort with one sign flip per executed swap on
the system registers. Re-sorting the system uncomputes the record.
"""

from __future__ import annotations

import math
from itertools import permutations, product

import numpy as np

from ..crystal import PlaneWaveGrid
from .registers import RegisterLayout, StateVector


def _system_layout(eta: int, size: int) -> RegisterLayout:
    return RegisterLayout(tuple((f"sys{i}", size) for i in range(eta)))


def _permutation_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def antisymmetrize(points, n_p: int) -> StateVector:
    """Signed permutation average of one ordered product state.

    Args:
        points: eta distinct grid points (integer triples).
        n_p: Bits per signed momentum component.

    Returns:
        The unit-norm antisymmetrized state over eta momentum registers.
    """
    grid = PlaneWaveGrid(n_p)
    indices = [grid.index_of(p) for p in points]
    eta = len(indices)
    if eta < 2:
        raise ValueError("antisymmetrization needs at least two particles")
    if len(set(indices)) != eta:
        raise ValueError("repeated momentum: the antisymmetrized state vanishes")
    layout = _system_layout(eta, grid.size)
    amps = np.zeros(layout.dim, dtype=complex)
    norm = 1.0 / math.sqrt(math.factorial(eta))
    for perm in permutations(range(eta)):
        ordered = [indices[p] for p in perm]
        amps[layout.ravel(ordered)] = _permutation_sign(perm) * norm
    return StateVector(amps, layout)


def _bubble_network(eta: int) -> list[tuple[int, int]]:
    return [(j, j + 1) for i in range(eta) for j in range(eta - 1 - i)]


def _sort_record(values, comparators) -> tuple[tuple, int]:
    """Compare-and-swap run; returns (sorted tuple, record bit mask)."""
    work = list(values)
    record = 0
    for t, (i, j) in enumerate(comparators):
        if work[i] > work[j]:
            work[i], work[j] = work[j], work[i]
            record |= 1 << t
    return tuple(work), record


def simulate_sorting_antisymmetrization(
    eta: int, n_p: int, seed_bits: int | None = None
) -> tuple[StateVector, float]:
    """Runs the seed-sort-unsort antisymmetrization on a reference input.

    The system starts in the ordered product state of the eta smallest
    grid points. Seeds are enumerated classically to obtain the
    collision-free projection probability and the record distribution;
    the record-controlled inverse sort and the record uncomputation act
    on the joint record/system state vector.

    Args:
        eta: Particle count (at least 2).
        n_p: Bits per signed momentum component.
        seed_bits: Bits per seed register; defaults to ceil(log2(eta^2)).

    Returns:
        (antisymmetrized system state, projection success probability).
    """
    if eta < 2:
        raise ValueError("sorting antisymmetrization needs at least two particles")
    min_bits = math.ceil(math.log2(eta**2))
    if seed_bits is None:
        seed_bits = min_bits
    if seed_bits < min_bits:
        raise ValueError(f"seed_bits must be at least {min_bits} for eta={eta}")

    comparators = _bubble_network(eta)
    f = 2**seed_bits
    pattern_record: dict[tuple[int, ...], int] = {}
    pattern_count: dict[tuple[int, ...], int] = {}
    successes = 0
    for seed in product(range(f), repeat=eta):
        if len(set(seed)) != eta:
            continue
        successes += 1
        order = tuple(sorted(range(eta), key=lambda i: seed[i]))
        _, record = _sort_record(seed, comparators)
        known = pattern_record.setdefault(order, record)
        if known != record:
            raise RuntimeError("record depends on seed values, not only their order")
        pattern_count[order] = pattern_count.get(order, 0) + 1
    success_prob = successes / f**eta
    if len(set(pattern_count.values())) != 1:
        raise RuntimeError("projected seed state is not uniform over order patterns")

    grid = PlaneWaveGrid(n_p)
    sys_layout = _system_layout(eta, grid.size)
    base = list(range(eta))  # indices of the eta smallest grid points, ascending

    # Projected seed/record state factorizes, so the joint state is the
    # uniform record superposition against the sorted system input.
    joint: dict[tuple[int, tuple[int, ...]], complex] = {}
    norm = 1.0 / math.sqrt(math.factorial(eta))
    for record in pattern_record.values():
        joint[(record, tuple(base))] = norm

    for t in reversed(range(len(comparators))):
        i, j = comparators[t]
        flipped: dict[tuple[int, tuple[int, ...]], complex] = {}
        for (record, regs), amp in joint.items():
            if record >> t & 1:
                swapped = list(regs)
                swapped[i], swapped[j] = swapped[j], swapped[i]
                flipped[(record, tuple(swapped))] = -amp
            else:
                flipped[(record, regs)] = amp
        joint = flipped

    system = np.zeros(sys_layout.dim, dtype=complex)
    for (record, regs), amp in joint.items():
        _, recomputed = _sort_record(regs, comparators)
        if record ^ recomputed:
            raise RuntimeError("record failed to uncompute against the re-sorted system")
        system[sys_layout.ravel(regs)] = amp
    return StateVector(system, sys_layout, success_prob=success_prob), success_prob
