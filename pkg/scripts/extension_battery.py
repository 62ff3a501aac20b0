#!/usr/bin/env python3
"""BMO norm ratio ||F|| / ||f|| and modulus decay of the extension.

For each domain, level and function, prints the norm ratio and the modulus
of F and f at t = diam and t = diam/64.

    python3 scripts/extension_battery.py --domains disk,l-shape --levels 6,8
"""

from __future__ import annotations

import argparse

from _common import csv_writer, levels
from vmoext.domain import make_domain
from vmoext.extension import boundedness_report, build
from vmoext.functions import make_function
from vmoext.whitney import decompose


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--domains", default="disk,l-shape")
    ap.add_argument("--levels", type=levels, default=[6, 8])
    ap.add_argument("--functions", default="coord1,halfstep,sqrtlogdist")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    ns = ap.parse_args(argv)

    header = ("domain", "level", "function", "norm_F", "norm_f", "ratio",
              "omegaF_diam", "omegaF_diam64", "omegaf_diam", "omegaf_diam64")
    with csv_writer(ns.out, header) as w:
        for name in ns.domains.split(","):
            for lev in ns.levels:
                dec = decompose(make_domain(name), lev)
                diam = dec.domain.diam
                for fn in ns.functions.split(","):
                    r = boundedness_report(build(make_function(fn, dec.domain), dec), seed=ns.seed)
                    cF, cf = r.curve_F, r.curve_f
                    w.writerow((name, lev, fn, f"{r.norm_F:.5f}", f"{r.norm_f:.5f}",
                                "" if r.ratio is None else f"{r.ratio:.4f}",
                                f"{cF.value(diam):.5f}", f"{cF.value(diam / 64):.5f}",
                                f"{cf.value(diam):.5f}", f"{cf.value(diam / 64):.5f}"))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
