#!/usr/bin/env python3
"""Calibrate the bump constant at one mu and test the bound at the others.

    python3 scripts/bump_calibration.py --mu-max 10
"""

from __future__ import annotations

import argparse

import numpy as np

from _common import csv_writer
from vmoext.bump import S0, BumpSpec, bump_modulus_bound, calibrate_c0, measure_bump_modulus


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--calibrate-mu", type=int, default=2)
    ap.add_argument("--mu-max", type=int, default=10)
    ap.add_argument("--m", type=int, default=16, help="quadrature points per axis")
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    ns = ap.parse_args(argv)

    t = S0.side * 2.0 ** -np.arange(16, -1, -0.5)
    c0 = calibrate_c0(t, mu=ns.calibrate_mu, m=ns.m)
    with csv_writer(ns.out, ("mu", "c0", "sup_omega", "mu_times_sup", "max_measured_over_bound")) as w:
        for mu in range(ns.calibrate_mu, ns.mu_max + 1):
            spec = BumpSpec(S0, mu)
            curve = measure_bump_modulus(spec, t, ns.m)
            ok = ~curve.absent
            ratio = np.max(curve.values[ok] / bump_modulus_bound(spec, curve.t[ok], c0))
            w.writerow((mu, f"{c0:.5f}", f"{curve.sup:.5f}", f"{mu * curve.sup:.5f}", f"{ratio:.4f}"))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
