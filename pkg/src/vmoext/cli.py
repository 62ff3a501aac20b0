"""Command line interface: ``vmoext {whitney,kappa,modulus,extend,adversarial,bump}``.

Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.  Outputs
are deterministic for a fixed configuration; ``-`` writes to stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .domain import BUILTIN_DOMAINS, make_domain
from .functions import available as available_functions
from .functions import make_function

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
HELP_WIDTH = 100
FN_HELP = "test function: " + ", ".join(available_functions()) + " (parameters as name:key=value)"

SHAPE_FLAGS = {
    "radius": ("disk", "slit-disk"),
    "side": ("square",),
    "size": ("l-shape",),
    "r_inner": ("annulus-sector",),
    "r_outer": ("annulus-sector",),
    "angle": ("annulus-sector",),
    "rooms": ("comb",),
    "wall": ("comb",),
    "first_gap": ("comb",),
    "ratio": ("comb",),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    domain: str = "disk"
    shape: dict = field(default_factory=dict)
    max_levels: tuple = (6,)
    m: int = 16
    seed: int = 0
    fn: Optional[str] = None
    t_min: Optional[float] = None
    t_points_per_octave: int = 2
    outputs: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)


def _formatter(prog):
    return argparse.HelpFormatter(prog, width=HELP_WIDTH, max_help_position=32)


def _levels(text: str) -> tuple:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("at least one level is required")
    return vals


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("domain")
    g.add_argument("--domain", default="disk", help="one of: " + ", ".join(sorted(BUILTIN_DOMAINS)))
    g.add_argument("--radius", type=float, help="disk, slit-disk: radius")
    g.add_argument("--side", type=float, help="square: side length")
    g.add_argument("--size", type=float, help="l-shape: half width")
    g.add_argument("--r-inner", dest="r_inner", type=float, help="annulus-sector: inner radius")
    g.add_argument("--r-outer", dest="r_outer", type=float, help="annulus-sector: outer radius")
    g.add_argument("--angle", type=float, help="annulus-sector: opening angle in radians (<= pi)")
    g.add_argument("--rooms", type=int, help="comb: number of rooms")
    g.add_argument("--wall", type=float, help="comb: wall thickness")
    g.add_argument("--first-gap", dest="first_gap", type=float, help="comb: first corridor width")
    g.add_argument("--ratio", type=float, help="comb: corridor shrink factor")
    r = common.add_argument_group("run")
    r.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    r.add_argument("--threads", type=_positive_int, help="worker cap (also VMOEXT_THREADS)")

    p = argparse.ArgumentParser(
        prog="vmoext",
        description="Whitney decompositions, Jones constants and VMO extensions on planar domains.",
        formatter_class=_formatter,
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    w = sub.add_parser("whitney", parents=[common], formatter_class=_formatter, help="Whitney cubes of a domain")
    w.add_argument("--max-level", type=int, default=6, help="finest refinement level (default 6)")
    w.add_argument("--json", help="write the decomposition as JSON (- for stdout)")
    w.add_argument("--svg", help="write an SVG picture of both cube families")

    k = sub.add_parser("kappa", parents=[common], formatter_class=_formatter, help="lower estimate of the Jones constant")
    k.add_argument("--max-level", type=_levels, default=(6,), help="comma-separated levels, e.g. 6,8")
    k.add_argument("--pairs", type=_positive_int, default=4096, help="sampled pairs (default 4096)")
    k.add_argument("--sampler", choices=("stratified", "exhaustive"), default="stratified", help="pair sampler (default stratified)")
    k.add_argument("--csv", help="write one row per level (- for stdout)")
    k.add_argument("--json", help="write a JSON report (- for stdout)")

    mo = sub.add_parser("modulus", parents=[common], formatter_class=_formatter, help="modulus of mean oscillation")
    mo.add_argument("--fn", required=True, help=FN_HELP)
    mo.add_argument("--max-level", type=int, default=7, help="refinement level of the cube family (default 7)")
    mo.add_argument("--t-min", type=float, default=1e-3, help="smallest t (default 1e-3)")
    mo.add_argument("--per-octave", type=_positive_int, default=2, help="breakpoints per octave (default 2)")
    mo.add_argument("--m", type=_positive_int, default=16, help="quadrature points per axis (default 16)")
    mo.add_argument("--csv", help="write rows t, omega_subcube, omega_interior (- for stdout)")
    mo.add_argument("--json", help="write a JSON report (- for stdout)")

    e = sub.add_parser("extend", parents=[common], formatter_class=_formatter, help="extend a function to the plane")
    e.add_argument("--fn", required=True, help=FN_HELP)
    e.add_argument("--max-level", type=int, default=6, help="finest refinement level (default 6)")
    e.add_argument("--grid", type=_positive_int, default=128, help="grid points per axis for --out (default 128)")
    e.add_argument("--m", type=_positive_int, default=16, help="quadrature points per axis (default 16)")
    e.add_argument("--shifted", action="store_true", help="add the base constant back in --out")
    e.add_argument("--out", help="CSV grid sample x, y, F over the evaluation box (- for stdout)")
    e.add_argument("--report", help="JSON report with norms, margin and checks (- for stdout)")

    a = sub.add_parser("adversarial", parents=[common], formatter_class=_formatter, help="non-extendability witness")
    a.add_argument("--max-level", type=_levels, default=(6,), help="comma-separated levels, e.g. 6,8")
    a.add_argument("--pairs", default="auto", help="auto (Jones witness), a count N of random pairs, or I:J")
    a.add_argument("--m", type=_positive_int, default=16, help="quadrature points per axis (default 16)")
    a.add_argument("--report", help="JSON report (- for stdout)")

    b = sub.add_parser("bump", formatter_class=_formatter, help="profile of a bump function on [-2,2]^2")
    b.add_argument("--mu", type=_positive_int, default=2, help="bump parameter (default 2)")
    b.add_argument("--points", type=_positive_int, default=201, help="samples along the x axis (default 201)")
    b.add_argument("--csv", help="write rows x, psi (- for stdout)")
    return p


# ---------------------------------------------------------------------------
# helpers


def _shape(ns) -> dict:
    name = ns.domain.replace("_", "-").lower()
    if name not in BUILTIN_DOMAINS:
        raise UsageError(f"unknown domain {ns.domain!r}; available: {', '.join(sorted(BUILTIN_DOMAINS))}")
    out = {}
    for key, owners in SHAPE_FLAGS.items():
        v = getattr(ns, key, None)
        if v is None:
            continue
        if name not in owners:
            raise UsageError(f"--{key.replace('_', '-')} does not apply to domain {name}")
        out[key] = v
    return out


def _domain(ns):
    try:
        return make_domain(ns.domain, **_shape(ns))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad shape parameters for {ns.domain}: {exc}") from None


def _function(spec: str, domain):
    try:
        return make_function(spec, domain)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _open(path: str):
    if path == "-":
        return _Stdout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="")


class _Stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()
        return False


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def write_json(path: str, payload: dict) -> None:
    with _open(path) as fh:
        json.dump(_clean(payload), fh, indent=1, sort_keys=True, allow_nan=False)
        fh.write("\n")


def write_csv(path: str, header: Sequence[str], rows) -> None:
    with _open(path) as fh:
        wr = csv.writer(fh, lineterminator="\r\n")
        wr.writerow(header)
        for row in rows:
            wr.writerow([_fmt(v) for v in row])


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


# ---------------------------------------------------------------------------
# subcommands


def cmd_whitney(ns, cfg: RunConfig) -> int:
    from .whitney import check_invariants, decompose, to_json, to_svg

    dom = _domain(ns)
    dec = decompose(dom, ns.max_level)
    if ns.json:
        payload = to_json(dec)
        payload["invariants"] = check_invariants(dec)
        write_json(ns.json, payload)
    if ns.svg:
        with _open(ns.svg) as fh:
            fh.write(to_svg(dec))
    if not ns.json and not ns.svg:
        inv = check_invariants(dec)
        print(f"{dom.name}: |E|={inv['n_E']} |E'|={inv['n_Eprime']} L={inv['L']} residual={inv['residual_fraction']:.4%}")
    return EXIT_OK


def cmd_kappa(ns, cfg: RunConfig) -> int:
    from .metrics import estimate_kappa, straddles_slit
    from .whitney import decompose

    dom = _domain(ns)
    rows, runs = [], []
    for lev in ns.max_level:
        dec = decompose(dom, lev)
        est = estimate_kappa(dec, sampler=ns.sampler, pairs=ns.pairs, seed=ns.seed)
        i, j = est.pair
        ci, cj = dec.cube(i), dec.cube(j)
        straddle = dom.name == "slit-disk" and straddles_slit(dec, i, j)
        rows.append(
            [lev, est.kappa_hat, est.d1, est.d2, i, j, ci.level, " ".join(map(str, ci.coords)), cj.level, " ".join(map(str, cj.coords))]
        )
        runs.append(
            {
                "max_level": lev,
                "kappa_hat_lower": est.kappa_hat,
                "d1": est.d1,
                "d2": est.d2,
                "pair": [i, j],
                "cubes": [{"level": ci.level, "coords": list(ci.coords)}, {"level": cj.level, "coords": list(cj.coords)}],
                "n_pairs": est.n_pairs,
                "straddles_slit": straddle,
                "n_E": dec.n_E,
            }
        )
    if ns.csv:
        header = ["max_level", "kappa_hat_lower", "d1", "d2", "i", "j", "level_i", "coords_i", "level_j", "coords_j"]
        write_csv(ns.csv, header, rows)
    if ns.json:
        write_json(
            ns.json,
            {"domain": dom.describe(), "sampler": ns.sampler, "seed": ns.seed, "pairs": ns.pairs, "runs": runs,
             "note": "sampled maxima are lower bounds of the Jones constant"},
        )
    if not ns.csv and not ns.json:
        for r in runs:
            print(f"level {r['max_level']}: kappa_hat_lower={r['kappa_hat_lower']:.4f} pair={r['pair']}")
    return EXIT_OK


def _t_grid(t_min: float, t_max: float, per_octave: int) -> np.ndarray:
    k = math.ceil(per_octave * math.log2(t_max / t_min))
    return t_max * 2.0 ** (-np.arange(k, -1, -1) / per_octave)


def cmd_modulus(ns, cfg: RunConfig) -> int:
    from .oscillation import INTERIOR, SUBCUBES, domain_family, is_vmo, least_concave_majorant, modulus_from_family
    from .whitney import decompose

    if not ns.t_min > 0:
        raise UsageError("--t-min must be positive")
    dom = _domain(ns)
    f = _function(ns.fn, dom)
    dec = decompose(dom, ns.max_level)
    t_max = 2 * dom.diam
    if ns.t_min >= t_max:
        raise UsageError(f"--t-min must be below {t_max}")
    t = _t_grid(ns.t_min, t_max, ns.per_octave)
    fam = domain_family(dec, seed=ns.seed)
    sub = modulus_from_family(f, fam, t, SUBCUBES, ns.m)
    inte = modulus_from_family(f, fam, t, INTERIOR, ns.m)
    if ns.csv:
        rows = [(tv, a, b) for (tv, a), (_, b) in zip(sub.rows(), inte.rows())]
        write_csv(ns.csv, ["t", "omega_subcube", "omega_interior"], rows)
    if ns.json:
        lcm = least_concave_majorant(sub)
        small = dom.diam / 64
        ok, diag = is_vmo(sub, 0.25 * sub.value(dom.diam), small) if t[0] <= small else (None, {})
        write_json(
            ns.json,
            {
                "domain": dom.describe(),
                "function": f.name,
                "max_level": ns.max_level,
                "m": ns.m,
                "seed": ns.seed,
                "t": t,
                "omega_subcube": [r[1] for r in sub.rows()],
                "omega_interior": [r[1] for r in inte.rows()],
                "majorant": {"t": lcm.tv, "value": lcm.vv},
                "bmo_norm": sub.sup,
                "vmo_proxy": {"passed": ok, **diag},
                "family": sub.meta["counts"],
            },
        )
    if not ns.csv and not ns.json:
        print(f"{f.name} on {dom.name}: sup omega = {sub.sup:.4f} over {sub.meta['n_cubes']} cubes")
    return EXIT_OK


def cmd_extend(ns, cfg: RunConfig) -> int:
    from .extension import boundedness_report, build, evaluate, proposition_checks, support_margin
    from .oscillation import is_vmo
    from .whitney import decompose

    dom = _domain(ns)
    f = _function(ns.fn, dom)
    dec = decompose(dom, ns.max_level)
    op = build(f, dec, ns.m)
    box = dec.eval_box()
    if ns.out:
        g = (np.arange(ns.grid) + 0.5) / ns.grid
        with _open(ns.out) as fh:
            wr = csv.writer(fh, lineterminator="\r\n")
            wr.writerow(["x", "y", "F"])
            for yv in box.lo[1] + box.side * g:
                pts = np.column_stack([box.lo[0] + box.side * g, np.full(ns.grid, yv)])
                vals = evaluate(op, pts, shifted=ns.shifted)
                for (xv, _), v in zip(pts, vals):
                    wr.writerow([repr(float(xv)), repr(float(yv)), repr(float(v))])
    if ns.report:
        rep = boundedness_report(op, box, seed=ns.seed)
        small = dom.diam / 64
        cF = rep.curve_F
        vmo, diag = is_vmo(cF, 0.25 * cF.value(dom.diam), small)
        checks = proposition_checks(op)
        margin = support_margin(op)
        write_json(
            ns.report,
            {
                "domain": dom.describe(),
                "function": f.name,
                "max_level": ns.max_level,
                "L": dec.L,
                "s_L": op.s_L,
                "base_constant": op.base_constant,
                "n_Eprime": dec.n_Ep,
                "boundedness": rep.to_json(),
                "support_margin": margin,
                "support_margin_over_L": margin / dec.L,
                "vmo_proxy": {"passed": vmo, **diag},
                "checks": checks,
                "omega_F": {"t": cF.t, "value": [r[1] for r in cF.rows()]},
            },
        )
    if not ns.out and not ns.report:
        print(f"{f.name} on {dom.name}: base constant {op.base_constant:.6g}, {dec.n_Ep} exterior cubes")
    return EXIT_OK


def _parse_pairs(text: str, dec, seed: int):
    from .adversarial import random_pairs, witness_pair

    if text == "auto":
        return [witness_pair(dec, seed=seed)]
    if ":" in text:
        try:
            i, j = (int(v) for v in text.split(":"))
        except ValueError:
            raise UsageError(f"bad pair {text!r}; expected I:J") from None
        if not (0 <= i < dec.n_E and 0 <= j < dec.n_E) or i == j:
            raise UsageError(f"pair {text} must be two distinct indices below {dec.n_E}")
        return [(i, j)]
    try:
        n = int(text)
    except ValueError:
        raise UsageError(f"--pairs must be auto, a count or I:J, got {text!r}") from None
    if n < 1:
        raise UsageError("--pairs count must be positive")
    return random_pairs(dec, n, seed)


def cmd_adversarial(ns, cfg: RunConfig) -> int:
    from .adversarial import (
        build_adversarial,
        hypothesis_checks,
        plateau_d2,
        resolved_family,
        separation,
        uniform_bmo_check,
    )
    from .whitney import decompose

    dom = _domain(ns)
    runs = []
    for lev in ns.max_level:
        dec = decompose(dom, lev)
        pairs = _parse_pairs(ns.pairs, dec, ns.seed)
        fam = resolved_family(dec, m=ns.m, seed=ns.seed)
        rep = uniform_bmo_check(dec, pairs, ns.m, fam, ns.seed)
        details = []
        for (i, j), norm in zip(pairs, rep.norms):
            fld = build_adversarial(dec, i, j)
            sep = separation(fld, ns.m)
            d2j = plateau_d2(fld)
            details.append(
                {
                    "pair": [i, j],
                    "d1": fld.d1_pair,
                    "separation": sep,
                    "d2_plateaus": d2j,
                    "separation_over_d2": sep / d2j,
                    "bmo_norm": norm,
                    "checks": hypothesis_checks(fld),
                }
            )
        runs.append({"max_level": lev, "pairs": details, "summary": rep.to_json()})
    payload = {
        "domain": dom.describe(),
        "seed": ns.seed,
        "m": ns.m,
        "runs": runs,
        "reasoning": (
            "Each field has BMO norm bounded independently of the pair while its plateau averages differ by d1. "
            "A bounded linear extension would force d1 <= C d2 for all pairs, so growth of separation/d2 under "
            "refinement with bounded norms witnesses that no such extension exists."
        ),
    }
    if ns.report:
        write_json(ns.report, payload)
    else:
        for r in runs:
            for d in r["pairs"]:
                print(f"level {r['max_level']} pair {d['pair']}: d1={d['d1']} separation/d2={d['separation_over_d2']:.4f}")
    return EXIT_OK


def cmd_bump(ns, cfg: RunConfig) -> int:
    from .bump import S0, BumpSpec, bump_value

    spec = BumpSpec(S0, ns.mu)
    x = np.linspace(-2.0, 2.0, ns.points)
    pts = np.column_stack([x, np.zeros_like(x)])
    v = bump_value(spec, pts)
    if ns.csv:
        write_csv(ns.csv, ["x", "psi"], zip(x, v))
    else:
        print(f"mu={ns.mu}: plateau [-0.5,0.5], support gap {2.0 ** (-ns.mu):g}")
    return EXIT_OK


COMMANDS = {
    "whitney": cmd_whitney,
    "kappa": cmd_kappa,
    "modulus": cmd_modulus,
    "extend": cmd_extend,
    "adversarial": cmd_adversarial,
    "bump": cmd_bump,
}


def config_from_args(ns) -> RunConfig:
    levels = getattr(ns, "max_level", None)
    levels = tuple(levels) if isinstance(levels, tuple) else ((levels,) if levels is not None else ())
    outputs = {k: getattr(ns, k) for k in ("json", "svg", "csv", "out", "report") if getattr(ns, k, None)}
    return RunConfig(
        command=ns.command,
        domain=getattr(ns, "domain", ""),
        max_levels=levels,
        m=getattr(ns, "m", 16),
        seed=getattr(ns, "seed", 0),
        fn=getattr(ns, "fn", None),
        t_min=getattr(ns, "t_min", None),
        outputs=outputs,
    )


def main(argv: Sequence[str] | None = None) -> int:
    from .extension import BuildError
    from .metrics import DisconnectedError
    from .oscillation import EvaluationError
    from .whitney import ResolutionError

    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(ns, "threads", None):
        os.environ["VMOEXT_THREADS"] = str(ns.threads)
    cfg = config_from_args(ns)
    try:
        if hasattr(ns, "domain"):
            cfg.shape = _shape(ns)
        return COMMANDS[ns.command](ns, cfg)
    except UsageError as exc:
        print(f"vmoext {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResolutionError, DisconnectedError, EvaluationError, BuildError, FloatingPointError) as exc:
        print(f"vmoext {ns.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"vmoext {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # reader closed stdout early, e.g. piped into head
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
