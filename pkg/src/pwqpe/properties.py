"""Battery properties derived from ground-state total energies.

Three scalar calculators: equilibrium cell voltage from lithiation
energies, Arrhenius ionic diffusivity from a hop barrier, and the
oxygen-release stability temperature from oxide formation energies.
Energies enter in hartree unless a field says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import BOLTZMANN_EV_PER_K, HARTREE_TO_EV, O2_ENTROPY_EV_PER_K


@dataclass(frozen=True)
class EnergySet:
    """Total energies entering the voltage formula.

    Attributes:
        e_lithiated: Energy of the lithiated phase (hartree).
        e_delithiated: Energy of the delithiated phase (hartree).
        e_lithium: Per-atom reference energy of metallic lithium
            (hartree), or None when not yet available.
        delta_x: Number of lithium atoms transferred per formula unit.
        n: Electrons transferred per formula unit (one per lithium).
    """

    e_lithiated: float
    e_delithiated: float
    e_lithium: float | None = None
    delta_x: float = 1.0
    n: int = 1

    def __post_init__(self) -> None:
        for name in ("e_lithiated", "e_delithiated"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.e_lithium is not None and not math.isfinite(self.e_lithium):
            raise ValueError("e_lithium must be finite")
        if self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")


@dataclass(frozen=True)
class DiffusionInputs:
    """Hop geometry and energetics of the Arrhenius diffusivity.

    Attributes:
        hop_distance_m: Jump distance between stable sites (meters).
        attempt_frequency_hz: Attempt frequency (hertz).
        e_transition_ev: Transition-state energy (eV).
        e_initial_ev: Initial-site energy (eV).
        temperature_k: Temperature (kelvin).
    """

    hop_distance_m: float
    attempt_frequency_hz: float
    e_transition_ev: float
    e_initial_ev: float
    temperature_k: float

    def __post_init__(self) -> None:
        if self.hop_distance_m <= 0:
            raise ValueError("hop_distance_m must be positive")
        if self.attempt_frequency_hz <= 0:
            raise ValueError("attempt_frequency_hz must be positive")
        if self.temperature_k <= 0:
            raise ValueError("temperature_k must be positive")
        if self.e_transition_ev < self.e_initial_ev:
            raise ValueError("barrier is negative: e_transition_ev < e_initial_ev")


@dataclass(frozen=True)
class StabilityInputs:
    """Oxide energies entering the oxygen-release temperature.

    Attributes:
        e_rich: Energy of the oxygen-rich phase (hartree).
        e_poor: Energy of the oxygen-poor phase (hartree).
        e_o2: Energy of an O2 molecule (hartree).
        z_prime: Number of oxygen atoms released per formula unit.
        s_o2_ev_per_k: O2 entropy per molecule (eV/K); defaults to the
            standard-state 205.152 J/(mol K) converted per molecule.
    """

    e_rich: float
    e_poor: float
    e_o2: float
    z_prime: float
    s_o2_ev_per_k: float = O2_ENTROPY_EV_PER_K

    def __post_init__(self) -> None:
        if self.z_prime <= 0:
            raise ValueError(f"z_prime must be positive, got {self.z_prime}")
        if self.s_o2_ev_per_k <= 0:
            raise ValueError("s_o2_ev_per_k must be positive")


def cell_voltage(e: EnergySet) -> float:
    """Equilibrium voltage in volts.

    V = -(E_lith - E_delith - delta_x * E_Li) / n, converted from
    hartree to eV; with one electron per transferred lithium the eV
    difference per electron is already the voltage.

    Raises:
        ValueError: If the lithium reference energy is missing.
    """
    if e.e_lithium is None:
        raise ValueError("missing per-atom lithium reference energy")
    delta = e.e_lithiated - e.e_delithiated - e.delta_x * e.e_lithium
    return -delta * HARTREE_TO_EV / e.n


def diffusivity(d: DiffusionInputs) -> float:
    """Ionic diffusivity a^2 nu* exp(-(E_T - E_I)/(k_B T)) in m^2/s."""
    barrier = d.e_transition_ev - d.e_initial_ev
    boltz = math.exp(-barrier / (BOLTZMANN_EV_PER_K * d.temperature_k))
    return d.hop_distance_m**2 * d.attempt_frequency_hz * boltz


def stability_temperature(s: StabilityInputs) -> float:
    """Temperature (kelvin) at which oxygen release becomes favorable.

    T = (-E_rich + E_poor + (z'/2) E_O2) / ((z'/2) S_O2) with the
    energy numerator converted from hartree to eV.

    Raises:
        ValueError: If the entropy denominator is not positive.
    """
    half_z = s.z_prime / 2.0
    denominator = half_z * s.s_o2_ev_per_k
    if denominator <= 0:
        raise ValueError("entropy denominator must be positive")
    numerator_ev = (-s.e_rich + s.e_poor + half_z * s.e_o2) * HARTREE_TO_EV
    return numerator_ev / denominator
