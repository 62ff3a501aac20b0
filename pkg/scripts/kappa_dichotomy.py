#!/usr/bin/env python3
"""Jones ratio estimate per level, with the witness pair's d1 and d2.

On a Jones domain the estimate settles; across a slit the witness pair sits
on opposite faces at fixed d2 while d1 keeps climbing.

    python3 scripts/kappa_dichotomy.py --domains disk,slit-disk --levels 5,6,7,8
"""

from __future__ import annotations

import argparse

from _common import csv_writer, levels
from vmoext.domain import make_domain
from vmoext.metrics import estimate_kappa, straddles_slit
from vmoext.whitney import decompose


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--domains", default="disk,slit-disk")
    ap.add_argument("--levels", type=levels, default=[5, 6, 7, 8])
    ap.add_argument("--sampler", choices=("stratified", "exhaustive"), default="stratified")
    ap.add_argument("--pairs", type=int, default=4096)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    ns = ap.parse_args(argv)

    header = ("domain", "level", "n_E", "kappa_hat", "d1", "d2", "side_i", "side_j", "straddles_slit")
    with csv_writer(ns.out, header) as w:
        for name in ns.domains.split(","):
            for lev in ns.levels:
                dec = decompose(make_domain(name), lev)
                k = estimate_kappa(dec, sampler=ns.sampler, pairs=ns.pairs, seed=ns.seed)
                i, j = k.pair
                w.writerow((name, lev, dec.n_E, f"{k.kappa_hat:.4f}", k.d1, f"{k.d2:.4f}",
                            dec.E_side[i], dec.E_side[j], straddles_slit(dec, i, j)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
