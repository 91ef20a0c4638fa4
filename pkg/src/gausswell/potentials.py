"""Radial potentials in dimensionless units.

All lengths are measured in units of the potential range L and all
energies in units of hbar^2/(mu L^2), mu being the reduced mass of the
pair.  In these units a Gaussian well is fixed by a single dimensionless
coupling eta = V0 mu / hbar^2 (eta > 0 attractive), and the scattering
length divided by L depends on eta alone.  The solvers never see
dimensional quantities; conversion helpers live at the bottom of this
module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import PotentialError

__all__ = [
    "TailClass",
    "GAUSSIAN_TAIL",
    "EXPONENTIAL_TAIL",
    "power_tail",
    "RadialPotential",
    "ValidityReport",
    "gaussian",
    "validate",
    "require_valid",
    "coupling_from_physical",
    "depth_from_coupling",
]

_TAIL_KINDS = ("gaussian", "exponential", "power")


@dataclass(frozen=True)
class TailClass:
    """Large-distance decay class of a radial potential.

    ``power`` tails must decay faster than r^-(n+margin) in n dimensions
    with margin > 0; slower tails do not admit a scattering length.
    """

    kind: str
    margin: float | None = None

    def __post_init__(self):
        if self.kind not in _TAIL_KINDS:
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if self.kind == "power":
            if self.margin is None or not self.margin > 0:
                raise ValueError("power tails require a positive decay margin")
        elif self.margin is not None:
            raise ValueError(f"{self.kind} tails take no margin")


GAUSSIAN_TAIL = TailClass("gaussian")
EXPONENTIAL_TAIL = TailClass("exponential")


def power_tail(margin: float) -> TailClass:
    return TailClass("power", margin)


@dataclass(frozen=True)
class RadialPotential:
    """Radial potential V(r) with the metadata the solver relies on.

    ``origin_exponent`` is the declared leading divergence s of V ~ r^-s
    near the origin (0 for a regular potential) and ``tail`` the declared
    decay class.  Both are metadata, not inferred: numerical inference of
    asymptotics is unreliable, and declaring them keeps admissibility
    checks exact.
    """

    v: Callable[[float], float]
    char_length: float = 1.0
    origin_exponent: float = 0.0
    tail: TailClass = GAUSSIAN_TAIL

    def __post_init__(self):
        if not self.char_length > 0:
            raise ValueError("char_length must be positive")

    def __call__(self, r: float) -> float:
        return self.v(r)


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of the admissibility check for the radial solver."""

    boundary_ok: bool
    tail_ok: bool
    messages: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.boundary_ok and self.tail_ok


def gaussian(eta: float) -> RadialPotential:
    """Gaussian well V(y) = -(eta/2) exp(-y^2), attractive for eta > 0."""
    eta = float(eta)
    if not math.isfinite(eta):
        raise ValueError("coupling must be finite")

    def v(r: float, _eta: float = eta) -> float:
        return -0.5 * _eta * math.exp(-r * r)

    return RadialPotential(v=v, char_length=1.0, origin_exponent=0.0,
                           tail=GAUSSIAN_TAIL)


def validate(pot: RadialPotential) -> ValidityReport:
    """Check that the standard origin boundary conditions apply and the
    tail admits a scattering length.

    Potentials diverging like r^-s with s >= 1 keep a finite wavefunction
    at the origin but break the zero-derivative start; they are rejected
    rather than handled.
    """
    messages = []
    boundary_ok = pot.origin_exponent < 1.0
    if not boundary_ok:
        messages.append(
            f"origin divergence exponent s={pot.origin_exponent:g} >= 1: "
            "modified boundary conditions required"
        )
    tail_ok = pot.tail.kind in ("gaussian", "exponential") or (
        pot.tail.kind == "power" and pot.tail.margin is not None and pot.tail.margin > 0
    )
    if not tail_ok:
        messages.append("tail decays too slowly for a scattering length")
    return ValidityReport(boundary_ok, tail_ok, tuple(messages))


def require_valid(pot: RadialPotential) -> None:
    report = validate(pot)
    if not report.ok:
        raise PotentialError("; ".join(report.messages))


def coupling_from_physical(v0: float, reduced_mass: float, hbar: float = 1.0) -> float:
    """Dimensionless coupling eta = V0 mu / hbar^2 from physical parameters.

    V0 carries units of energy * length^2 as in V(r) = -V0/(2 L^2) exp(-r^2/L^2).
    """
    return v0 * reduced_mass / hbar**2


def depth_from_coupling(eta: float, reduced_mass: float, hbar: float = 1.0) -> float:
    """Inverse of :func:`coupling_from_physical`."""
    return eta * hbar**2 / reduced_mass
