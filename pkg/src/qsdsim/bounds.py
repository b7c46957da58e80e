"""Decoherence rates and experimental bounds on the fluctuation time scale.

The fundamental time constant tau_0 of the space-time fluctuations sets
the decoherence rate of a mass m = A * u through

    gamma = (m c^2 / hbar)^2 * tau_0,

the inverse decoherence time.  An interferometer that observes its
interference pattern survive to within a fraction epsilon therefore caps
tau_0: for delta noise the suppression is gamma T (linearized), for
non-commuting propagating noise it is (8/3) gamma^2 A, and inverting
either at the observed threshold gives the bound.  Commuting propagating
noise decoheres nothing, so no bound exists there.

Exact expressions are used throughout rather than order-of-magnitude
shortcuts; constants are injectable so tests can pin exact values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .interferometer import ScenarioKind

__all__ = [
    "PhysicalConstants",
    "CODATA",
    "BoundsInput",
    "decoherence_rate",
    "tau0_bound",
    "preset_kasevich_chu",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants: hbar (J s), the atomic mass unit as energy u*c^2 (J),
    and the Planck time (s, reference scale only)."""

    hbar: float = 1.054571817e-34
    atomic_mass_unit_energy: float = 1.49241808e-10
    planck_time: float = 5e-44

    def __post_init__(self):
        for name in ("hbar", "atomic_mass_unit_energy", "planck_time"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class BoundsInput:
    """Experimental parameters entering a tau_0 bound."""

    atomic_number: int
    drift_time: float
    area: float
    threshold: float = 0.1
    scenario: ScenarioKind = ScenarioKind.PAULI

    def __post_init__(self):
        if self.atomic_number < 1 or int(self.atomic_number) != self.atomic_number:
            raise ValueError(f"atomic number must be a positive integer, got {self.atomic_number}")
        if self.drift_time <= 0:
            raise ValueError(f"drift time must be positive, got {self.drift_time}")
        if not 0 < self.threshold < 1:
            raise ValueError(f"suppression threshold must lie in (0, 1), got {self.threshold}")
        if self.scenario is not ScenarioKind.DELTA and self.area <= 0:
            raise ValueError("propagating scenarios need a positive enclosed area")


def decoherence_rate(
    atomic_number: int, tau0: float, constants: PhysicalConstants = CODATA
) -> float:
    """gamma = (A u c^2 / hbar)^2 * tau0, in s^-1."""
    if tau0 < 0:
        raise ValueError(f"tau0 must be non-negative, got {tau0}")
    rest_energy = atomic_number * constants.atomic_mass_unit_energy
    return (rest_energy / constants.hbar) ** 2 * tau0


def tau0_bound(bounds_input: BoundsInput, constants: PhysicalConstants = CODATA) -> float:
    """Upper bound on tau_0 (s) from a suppression threshold epsilon.

    delta noise:        tau0 < (epsilon / T) (hbar / A u c^2)^2
    non-commuting:      tau0 < sqrt(3 epsilon / (8 A)) (hbar / A u c^2)^2

    both obtained by inserting the decoherence rate into the linearized
    suppression conditions gamma T < epsilon and (8/3) gamma^2 A < epsilon.
    """
    eps = bounds_input.threshold
    inv_rate = (
        constants.hbar / (bounds_input.atomic_number * constants.atomic_mass_unit_energy)
    ) ** 2
    if bounds_input.scenario is ScenarioKind.DELTA:
        return eps / bounds_input.drift_time * inv_rate
    if bounds_input.scenario is ScenarioKind.PAULI:
        return math.sqrt(3.0 * eps / (8.0 * bounds_input.area)) * inv_rate
    raise ValueError("no bound: scenario produces no decoherence")


def preset_kasevich_chu(scenario: ScenarioKind = ScenarioKind.PAULI) -> BoundsInput:
    """Sodium light-pulse interferometer: A = 23, T = 50 ms, area 1e-12 s^2,
    with the 10% suppression threshold."""
    return BoundsInput(
        atomic_number=23,
        drift_time=0.05,
        area=1e-12,
        threshold=0.1,
        scenario=scenario,
    )
