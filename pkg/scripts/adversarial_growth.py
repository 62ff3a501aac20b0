#!/usr/bin/env python3
"""Adversarial field at the Jones witness pair, level by level.

Separation grows with d1 while the BMO norm on the resolved union stays
bounded.

    python3 scripts/adversarial_growth.py --domain slit-disk --levels 6,7,8
"""

from __future__ import annotations

import argparse

from _common import csv_writer, levels
from vmoext.adversarial import adversarial_norm, build_adversarial, plateau_d2, resolved_family, separation
from vmoext.domain import make_domain
from vmoext.metrics import estimate_kappa
from vmoext.whitney import decompose


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--domain", default="slit-disk")
    ap.add_argument("--levels", type=levels, default=[6, 7, 8])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    ns = ap.parse_args(argv)

    with csv_writer(ns.out, ("level", "s1", "s2", "d1", "d2", "separation", "separation_over_d2", "norm")) as w:
        for lev in ns.levels:
            dec = decompose(make_domain(ns.domain), lev)
            s1, s2 = estimate_kappa(dec, seed=ns.seed).pair
            fld = build_adversarial(dec, s1, s2)
            sep, d2 = separation(fld), plateau_d2(fld)
            norm = adversarial_norm(fld, resolved_family(dec, seed=ns.seed))
            w.writerow((lev, s1, s2, fld.d1_pair, f"{d2:.4f}", f"{sep:.4f}", f"{sep / d2:.4f}", f"{norm:.4f}"))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
