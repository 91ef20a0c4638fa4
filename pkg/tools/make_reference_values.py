#!/usr/bin/env python3
"""Regenerate tests/fixtures/golden.json.

High-precision reference values for the zero-energy radial problem with a
Gaussian well, computed with mpmath's arbitrary-precision Taylor ODE
integrator (mpmath.odefun).  These values are intentionally produced by a
method unrelated to the package's own adaptive Runge-Kutta solver so the
test suite can pin absolute accuracy, not just self-consistency.

Usage:
    python tools/make_reference_values.py [--skip-pole]

Requires mpmath (`pip install gausswell[refgen]`).  Runtime is a couple of
minutes, dominated by the root search for the first 3D bound-state
threshold unless --skip-pole is given.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from mpmath import mp, mpf, exp, log, euler, findroot, nstr

DPS = 30
ODE_TOL_EXP = -22  # local tolerance 10^-22 for odefun

OUT_PATH = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "golden.json"


def solve_u(eta, dim, r):
    """Integrate -(1/2)u'' + V u = 0 for the Gaussian well, u-form.

    Boundary data: u(0)=1, u'(0)=0 in 1D and u(0)=0, u'(0)=1 in 3D.
    Returns (u(r), u'(r)).
    """
    eta = mpf(eta)
    y0 = [mpf(1), mpf(0)] if dim == 1 else [mpf(0), mpf(1)]
    f = mp.odefun(
        lambda x, y: [y[1], -eta * exp(-x * x) * y[0]],
        mpf(0),
        y0,
        tol=mpf(10) ** ODE_TOL_EXP,
    )
    u, up = f(mpf(r))
    return u, up


def solve_phi2d(eta, epsilon, r):
    """Integrate the 2D radial equation for Phi from r=epsilon.

    Phi(eps)=1, Phi'(eps)=0.  Integrated in t = ln r, where the equation
    Phi_tt = -eta exp(2t - exp(2t)) Phi has no singular coefficient.
    Returns (Phi(r), Phi'(r)).
    """
    eta = mpf(eta)
    t0 = log(mpf(epsilon))
    f = mp.odefun(
        lambda t, y: [y[1], -eta * exp(2 * t - exp(2 * t)) * y[0]],
        t0,
        [mpf(1), mpf(0)],
        tol=mpf(10) ** ODE_TOL_EXP,
    )
    t1 = log(mpf(r))
    phi, dphi_dt = f(t1)
    return phi, dphi_dt / mpf(r)


def a_1d3d(eta, dim, r):
    u, up = solve_u(eta, dim, r)
    return mpf(r) - u / up


def a_2d(eta, epsilon, r):
    phi, dphi = solve_phi2d(eta, epsilon, r)
    return 2 * mpf(r) * exp(-phi / (mpf(r) * dphi) - euler)


def first_threshold_3d(r):
    """Coupling at which u'(r) crosses zero for the first time (3D)."""

    def indicator(eta):
        _, up = solve_u(eta, 3, r)
        return up

    return findroot(indicator, (mpf("2.684004"), mpf("2.684005")),
                    solver="secant", tol=mpf(10) ** -24)


def fnum(x):
    return float(nstr(x, 17))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--skip-pole", action="store_true",
                    help="skip the (slow) 3D threshold root search")
    args = ap.parse_args(argv)

    mp.dps = DPS
    t_start = time.time()
    records = []

    # Endpoint states used to validate the package's own integrator.
    for dim, eta in ((3, 2.0), (1, 4.0)):
        u, up = solve_u(eta, dim, 10.0)
        records.append({
            "kind": "u_endpoint", "dim": dim, "eta": eta, "r_max": 10.0,
            "value": fnum(u), "derivative": fnum(up),
        })
        print(f"u endpoint dim={dim} eta={eta}: u={nstr(u, 17)} u'={nstr(up, 17)}")

    phi, dphi = solve_phi2d(1.0, 1e-6, 10.0)
    records.append({
        "kind": "phi2d_endpoint", "eta": 1.0, "epsilon": 1e-6, "r_max": 10.0,
        "value": fnum(phi), "derivative": fnum(dphi),
    })
    print(f"phi endpoint eta=1: phi={nstr(phi, 17)} phi'={nstr(dphi, 17)}")

    # Scattering lengths.  r=12 is far outside the well; the residual
    # cutoff dependence is checked against r=10 before freezing.
    for dim, eta in ((1, 4.0), (3, 2.0), (3, 14.0)):
        a12 = a_1d3d(eta, dim, 12.0)
        a10 = a_1d3d(eta, dim, 10.0)
        drift = abs(a12 - a10) / abs(a12)
        assert drift < mpf(10) ** -18, f"cutoff drift {drift} dim={dim} eta={eta}"
        records.append({
            "kind": "scattering_length", "dim": dim, "eta": eta,
            "r_extract": 12.0, "value": fnum(a12),
        })
        print(f"a dim={dim} eta={eta}: {nstr(a12, 17)} (cutoff drift {nstr(drift, 3)})")

    a2 = a_2d(1.0, 1e-6, 12.0)
    a2_10 = a_2d(1.0, 1e-6, 10.0)
    drift = abs(a2 - a2_10) / a2
    assert drift < mpf(10) ** -18, f"2D cutoff drift {drift}"
    records.append({
        "kind": "scattering_length", "dim": 2, "eta": 1.0,
        "r_extract": 12.0, "epsilon": 1e-6, "value": fnum(a2),
        "log_value": fnum(log(a2)),
    })
    print(f"a dim=2 eta=1: {nstr(a2, 17)}")

    if not args.skip_pole:
        w1 = first_threshold_3d(12.0)
        records.append({
            "kind": "threshold", "dim": 3, "index": 1, "r_max": 12.0,
            "value": fnum(w1),
        })
        print(f"first 3D threshold: {nstr(w1, 17)}")

    payload = {
        "schema": "gausswell.golden.v1",
        "generator": "tools/make_reference_values.py",
        "dps": DPS,
        "ode_tol": f"1e{ODE_TOL_EXP}",
        "records": records,
    }
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    OUT_PATH.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {OUT_PATH} in {time.time() - t_start:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
