"""Adaptive integration of the zero-energy radial equation.

One and three dimensions are solved in the reduced form

    -(1/2) u''(r) + V(r) u(r) = 0,      u = r*Phi (3D), u = Phi (1D),

with u(0)=1, u'(0)=0 in 1D and u(0)=0, u'(0)=1 in 3D.  In two dimensions
the radial function Phi itself is integrated,

    -(1/2) (Phi'' + Phi'/r) + V(r) Phi = 0,

starting at a small offset r = epsilon with Phi(eps)=1, Phi'(eps)=0 to
avoid the coordinate singularity of the first-derivative term.

The stepper is an embedded Dormand-Prince 5(4) pair with FSAL and a
proportional step controller.  The accuracy knob is an exponent p: the
per-step relative and absolute tolerances are both 10^-p.  Values of p
beyond 13 are not meaningful in 64-bit arithmetic and are clamped.

Both radial equations are linear in (value, derivative), which permits an
overflow guard: whenever the state magnitude exceeds 1e150 the pair is
rescaled by its magnitude and only the accumulated log-scale is tracked.
Every downstream quantity depends on the ratio value/derivative only, so
the rescaling is exact for the extracted physics.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .constants import MAX_ACCURACY_EXPONENT
from .errors import SolverError
from .potentials import RadialPotential, gaussian, require_valid

__all__ = [
    "SolverConfig",
    "RadialSolution",
    "integrate_u",
    "integrate_phi2d",
    "ScanCell",
    "ScanResult",
    "convergence_scan",
]

_RENORM_LIMIT = 1e150

# Dormand-Prince 5(4) tableau.
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


@dataclass(frozen=True)
class SolverConfig:
    """Numerical limit parameters of the radial solve.

    p          accuracy exponent, per-step tolerance 10^-p (clamped at 13)
    r_max      integration cutoff
    epsilon    2D start offset (ignored in 1D/3D)
    max_steps  accepted-step budget
    """

    p: int = 11
    r_max: float = 10.0
    epsilon: float = 1e-6
    max_steps: int = 500_000
    keep_trajectory: bool = False

    def __post_init__(self):
        if self.p < 3:
            raise ValueError("accuracy exponent p must be >= 3")
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")
        if not 0 < self.epsilon < self.r_max:
            raise ValueError("epsilon must lie in (0, r_max)")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")

    @property
    def tolerance(self) -> float:
        return 10.0 ** (-min(self.p, MAX_ACCURACY_EXPONENT))


@dataclass(frozen=True)
class RadialSolution:
    """Endpoint data of a radial solve.

    ``value``/``derivative`` hold u, u' (1D/3D) or Phi, Phi' (2D), never a
    mixture.  When the overflow guard fired, both are rescaled by
    exp(-log_scale); ratios are unaffected.  ``node_count`` is the number
    of sign changes of the value along the integration.
    """

    dim: int
    r_end: float
    value: float
    derivative: float
    log_scale: float = 0.0
    node_count: int = 0
    trajectory: tuple[tuple[float, float, float], ...] | None = None
    checkpoints: tuple["RadialSolution", ...] = field(default=(), repr=False)


def _dp54(rhs: Callable[[float, float, float], tuple[float, float]],
          r: float, y: float, z: float, r_end: float,
          tol: float, max_steps: int,
          checkpoints: Sequence[float] = (),
          h0: float | None = None,
          keep_trajectory: bool = False):
    """March (y, z) from r to r_end, landing exactly on each checkpoint.

    Returns (y, z, log_scale, node_count, trajectory, checkpoint_states)
    where checkpoint_states is a list of (r, y, z, log_scale) tuples for
    each requested interior checkpoint, in ascending order.
    """
    atol = rtol = tol
    log_scale = 0.0
    nodes = 0
    traj = [(r, y, z)] if keep_trajectory else None

    targets = sorted({float(c) for c in checkpoints if r < c < r_end})
    targets.append(r_end)
    cp_states = []

    k1y, k1z = rhs(r, y, z)
    if h0 is None:
        scale = max(abs(y), abs(z), 1e-8)
        dscale = max(abs(k1y), abs(k1z), 1e-8)
        h0 = 0.01 * scale / dscale
    span = r_end - r
    h = min(h0, span)

    n_accepted = 0
    n_rejected = 0
    ti = 0
    while True:
        target = targets[ti]
        if r >= target:
            # floating-point safety; targets are landed on exactly below
            raise SolverError("step landed beyond target", radius=r)
        h = min(h, target - r)
        if h < 1e-14 * max(1.0, abs(r)):
            raise SolverError("step size underflow", radius=r)

        y2 = y + h * (_A21 * k1y)
        z2 = z + h * (_A21 * k1z)
        k2y, k2z = rhs(r + _C2 * h, y2, z2)
        y3 = y + h * (_A31 * k1y + _A32 * k2y)
        z3 = z + h * (_A31 * k1z + _A32 * k2z)
        k3y, k3z = rhs(r + _C3 * h, y3, z3)
        y4 = y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        z4 = z + h * (_A41 * k1z + _A42 * k2z + _A43 * k3z)
        k4y, k4z = rhs(r + _C4 * h, y4, z4)
        y5 = y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        z5 = z + h * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z)
        k5y, k5z = rhs(r + _C5 * h, y5, z5)
        y6 = y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y)
        z6 = z + h * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z + _A65 * k5z)
        k6y, k6z = rhs(r + h, y6, z6)

        yn = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
        zn = z + h * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
        rn = r + h
        k7y, k7z = rhs(rn, yn, zn)

        ey = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
        ez = h * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z + _E7 * k7z)
        sy = atol + rtol * max(abs(y), abs(yn))
        sz = atol + rtol * max(abs(z), abs(zn))
        err = max(abs(ey) / sy, abs(ez) / sz)

        if not math.isfinite(err) or not math.isfinite(yn) or not math.isfinite(zn):
            n_rejected += 1
            if n_rejected > max_steps:
                raise SolverError("nonfinite state", radius=r)
            h *= 0.25
            continue

        if err <= 1.0:
            if y * yn < 0.0:
                nodes += 1
            r, y, z = rn, yn, zn
            k1y, k1z = k7y, k7z
            n_accepted += 1
            if n_accepted > max_steps:
                raise SolverError("accepted-step budget exhausted", radius=r)

            if rn >= target or target - rn < 1e-14 * max(1.0, abs(target)):
                r = target
                if ti < len(targets) - 1:
                    cp_states.append((r, y, z, log_scale))
                    ti += 1
                else:
                    if traj is not None:
                        traj.append((r, y, z))
                    break

            m = max(abs(y), abs(z))
            if m > _RENORM_LIMIT:
                inv = 1.0 / m
                y *= inv
                z *= inv
                log_scale += math.log(m)
                # the radial equations are linear in the state, so the
                # cached FSAL derivative rescales exactly
                k1y *= inv
                k1z *= inv

            if traj is not None:
                traj.append((r, y, z))

            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            h *= fac
        else:
            n_rejected += 1
            if n_rejected > max_steps:
                raise SolverError("rejected-step budget exhausted", radius=r)
            h *= max(0.1, min(1.0, 0.9 * err ** -0.2))

    return y, z, log_scale, nodes, traj, cp_states


def _package(dim, r, y, z, log_scale, nodes, traj, cp_states) -> RadialSolution:
    if not (math.isfinite(y) and math.isfinite(z)):
        raise SolverError("nonfinite endpoint state", radius=r)
    cps = tuple(
        RadialSolution(dim=dim, r_end=cr, value=cy, derivative=cz, log_scale=cs)
        for cr, cy, cz, cs in cp_states
    )
    return RadialSolution(
        dim=dim, r_end=r, value=y, derivative=z, log_scale=log_scale,
        node_count=nodes,
        trajectory=tuple(traj) if traj is not None else None,
        checkpoints=cps,
    )


def integrate_u(dim: int, pot: RadialPotential, cfg: SolverConfig = SolverConfig(),
                *, initial: tuple[float, float] | None = None,
                checkpoints: Sequence[float] = ()) -> RadialSolution:
    """Integrate the u-form radial equation outward to r_max.

    ``initial`` overrides the boundary data (u(r0), u'(r0)); the default
    is the dimension-appropriate start.  ``checkpoints`` lists interior
    radii at which the state is recorded exactly (the step sequence lands
    on them); the states appear in ``RadialSolution.checkpoints``.
    """
    if dim not in (1, 3):
        raise ValueError("dim must be 1 or 3")
    require_valid(pot)
    if cfg.r_max < 5.0 * pot.char_length:
        warnings.warn("r_max below 5 potential ranges; asymptotics may be unreached",
                      stacklevel=2)
    u0, v0 = initial if initial is not None else ((1.0, 0.0) if dim == 1 else (0.0, 1.0))
    # potentials with an origin divergence (s < 1) cannot be evaluated at
    # r = 0 itself; the tiny offset changes the solution by O(r0^(2-s))
    r0 = 0.0 if pot.origin_exponent == 0 else 1e-10 * pot.char_length
    v = pot.v

    def rhs(r, u, w):
        return w, 2.0 * v(r) * u

    out = _dp54(rhs, r0, u0, v0, cfg.r_max, cfg.tolerance, cfg.max_steps,
                checkpoints=checkpoints, keep_trajectory=cfg.keep_trajectory)
    return _package(dim, cfg.r_max, *out[:2], *out[2:])


def integrate_phi2d(pot: RadialPotential, cfg: SolverConfig = SolverConfig(),
                    *, checkpoints: Sequence[float] = ()) -> RadialSolution:
    """Integrate the 2D radial equation for Phi from r = epsilon."""
    require_valid(pot)
    if cfg.r_max < 5.0 * pot.char_length:
        warnings.warn("r_max below 5 potential ranges; asymptotics may be unreached",
                      stacklevel=2)
    v = pot.v

    def rhs(r, phi, w):
        return w, -w / r + 2.0 * v(r) * phi

    out = _dp54(rhs, cfg.epsilon, 1.0, 0.0, cfg.r_max, cfg.tolerance,
                cfg.max_steps, checkpoints=checkpoints,
                h0=0.1 * cfg.epsilon, keep_trajectory=cfg.keep_trajectory)
    return _package(2, cfg.r_max, *out[:2], *out[2:])


@dataclass(frozen=True)
class ScanCell:
    axis_value: float
    eta: float
    rel_error: float
    failed: bool = False
    message: str = ""


@dataclass(frozen=True)
class ScanResult:
    dim: int
    axis: str
    reference: SolverConfig
    cells: tuple[ScanCell, ...]

    def to_csv_text(self) -> str:
        lines = ["axis_value,eta,rel_error"]
        for c in self.cells:
            lines.append(f"{c.axis_value:.17g},{c.eta:.17g},{c.rel_error:.17g}")
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "schema": "gausswell.scan.v1",
            "dim": self.dim,
            "axis": self.axis,
            "reference": {"p": self.reference.p, "r_max": self.reference.r_max,
                          "epsilon": self.reference.epsilon},
            "cells": [
                {"axis_value": c.axis_value, "eta": c.eta,
                 "rel_error": c.rel_error, "failed": c.failed,
                 "message": c.message}
                for c in self.cells
            ],
        }


_SCAN_AXES = ("p", "r_max", "epsilon")


def _single_cutoff(dim: int, eta: float, cfg: SolverConfig):
    """Scattering length from one solve at cfg.r_max, no cutoff ladder.

    Returns (value, log_value) with log_value None outside 2D.
    """
    from . import extraction

    pot = gaussian(eta)
    if dim == 2:
        sl = extraction.extract_2d(integrate_phi2d(pot, cfg))
        return sl.value, sl.log_value
    sl = extraction.extract_1d3d(integrate_u(dim, pot, cfg), dim)
    return sl.value, None


def _rel_error(value, log_value, ref_value, ref_log):
    if log_value is not None and ref_log is not None:
        if math.isinf(log_value) or math.isinf(ref_log):
            return 0.0 if log_value == ref_log else math.inf
        return abs(math.expm1(log_value - ref_log))
    if ref_value == 0.0:
        return abs(value)
    if math.isinf(ref_value) or math.isinf(value):
        return 0.0 if value == ref_value else math.inf
    return abs(value / ref_value - 1.0)


def convergence_scan(dim: int, eta_list: Sequence[float], axis: str,
                     grid: Sequence[float],
                     reference: SolverConfig = SolverConfig()) -> ScanResult:
    """Relative error of the single-cutoff scattering length against the
    reference settings, for each grid value of one numerical parameter.

    Failed cells (solver errors) are marked rather than aborting the scan.
    A grid point equal to the reference setting reproduces the reference
    computation and reports an error of exactly zero.
    """
    if axis not in _SCAN_AXES:
        raise ValueError(f"axis must be one of {_SCAN_AXES}")
    if axis == "epsilon" and dim != 2:
        raise ValueError("epsilon scan applies to dim=2 only")

    refs = {}
    for eta in eta_list:
        refs[eta] = _single_cutoff(dim, eta, reference)

    cells = []
    for x in grid:
        if axis == "p":
            cfg = replace(reference, p=int(x))
        elif axis == "r_max":
            cfg = replace(reference, r_max=float(x))
        else:
            cfg = replace(reference, epsilon=float(x))
        for eta in eta_list:
            try:
                val, logval = _single_cutoff(dim, eta, cfg)
                err = _rel_error(val, logval, *refs[eta])
                cells.append(ScanCell(float(x), float(eta), err))
            except Exception as exc:  # noqa: BLE001 - cell-level isolation
                cells.append(ScanCell(float(x), float(eta), math.nan,
                                      failed=True, message=str(exc)))
    return ScanResult(dim=dim, axis=axis, reference=reference, cells=tuple(cells))
