"""Command-line front end.

Every subcommand writes one CSV table: ``#`` comment lines first (artifact
version and the full parameter set), then a header row, then data rows with
17 significant digits. Exit status: 0 success, 1 parameter error, 2
numerical failure.
"""

from __future__ import annotations

import argparse
import io
import math
import sys

import numpy as np

from . import __version__, kernels
from .core import (INFINITY, NumericalError, ParameterError, QuadratureSpec, SpaceParams,
                   sample)
from . import experiments, norms_diff, norms_spectral, testbank, zeroset
from .truncation import operator

# parameters that must not leak into the output (they may not change it)
_UNRECORDED = {"threads", "out", "config", "command", "func"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def real(text: str) -> float:
    text = text.strip().lower()
    if text in ("inf", "infinity", "+inf"):
        return INFINITY
    return float(text)


def float_grid(text: str) -> list:
    """``a:b:step`` (inclusive) or a comma list."""
    if ":" in text:
        a, b, step = (float(x) for x in text.split(":"))
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return [round(a + i * step, 12) for i in range(count)]
    return [float(x) for x in text.split(",")]


def int_range(text: str) -> list:
    if ":" in text:
        a, b = (int(x) for x in text.split(":"))
        return list(range(a, b + 1))
    return [int(x) for x in text.split(",")]


def pair(text: str) -> tuple:
    a, b = text.split(":")
    return real(a), real(b)


def box_arg(text: str) -> list:
    return [pair(part) for part in text.split(",")]


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return "%.17g" % x
    return str(x)


def write_table(stream, args, header, rows, notes=()):
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _UNRECORDED}
    stream.write(f"# morreytrunc {__version__} command={args.command}\n")
    stream.write("# " + " ".join(f"{k}={_describe(v)}" for k, v in params.items()) + "\n")
    for note in notes:
        stream.write(f"# {note}\n")
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(x) for x in row) + "\n")


def _describe(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ";".join(_describe(x) for x in v) + "]"
    if isinstance(v, float):
        return repr(v)
    return fmt(v) if isinstance(v, (int, bool, np.number)) else str(v)


def _space_flags(p, d_default=1):
    p.add_argument("--s", type=real, required=True)
    p.add_argument("--p", type=real, default=1.0)
    p.add_argument("--u", type=real, default=2.0)
    p.add_argument("--q", type=real, default=2.0)
    p.add_argument("--d", type=int, default=d_default)


def _quadrature_flags(p):
    p.add_argument("--v", type=real, default=1.0)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--t-min", type=real, default=None)
    p.add_argument("--t-max", type=real, default=1.0)
    p.add_argument("--t-count", type=int, default=16)
    p.add_argument("--h-per-axis", type=int, default=8)
    p.add_argument("--j-min", type=int, default=None)
    p.add_argument("--j-max", type=int, default=None)


def _spec(args, g):
    return QuadratureSpec.for_grid(g, t_min=args.t_min, t_max=args.t_max, t_count=args.t_count,
                                   h_per_axis=args.h_per_axis, j_min=args.j_min,
                                   j_max=args.j_max)


def _function(args, d):
    kwargs = {"d": d}
    if hasattr(args, "s"):
        kwargs["s"] = args.s
    if hasattr(args, "p"):
        kwargs["p"] = args.p
    kwargs["seed"] = getattr(args, "seed", 0)
    box = args.box if getattr(args, "box", None) else testbank.DEFAULT_BOX.get(
        args.fn, lambda d: [(0.0, 1.0)] * d)(d)
    kwargs["box"] = box
    return testbank.named(args.fn, **kwargs), box


def cmd_norm(args):
    params = SpaceParams(args.s, args.p, args.u, args.q, args.d)
    f, box = _function(args, args.d)
    g = sample(f, box, args.n)
    if args.space in ("besov", "tlm"):
        spec = _spec(args, g)
        N = args.N or norms_diff.default_N(args.s)
        res = norms_diff.norm(args.space, g, params, args.v, N, spec)
    else:
        part = norms_spectral.partition_for(g, padding=args.padding)
        padded = norms_spectral.pad(g, part.freq_grid.shape)
        spec = _spec(args, padded)
        N = ""
        fn = norms_spectral.besov_morrey_norm_lp if args.space == "besov-lp" else norms_spectral.tlm_norm_lp
        res = fn(g, params, part, spec)
    w = res.witness
    header = ["space", "s", "p", "u", "q", "d", "v", "N", "n", "total", "morrey_part",
              "difference_part", "witness_j", "witness_m"]
    row = [args.space, args.s, args.p, args.u, args.q, args.d, args.v, N, args.n, res.total,
           res.morrey_part, res.difference_part, w.j if w else "",
           " ".join(map(str, w.m)) if w else ""]
    return header, [row], []


def cmd_sweep(args):
    d = args.d
    if args.fn == "random":
        box = args.box or [(0.0, 1.0)] * d
        family = testbank.random_family(args.family_size, d, box, seed=args.seed)
    else:
        f, box = _function(args, d)
        family = [f]
    rows = []
    for s in args.s_grid:
        params = SpaceParams(s, args.p, args.u, args.q, d)
        N = args.N or norms_diff.default_N(s)
        table = experiments.truncation_ratio_sweep(
            family, params, args.op, N, args.v, refinements=args.refinements, box=box,
            n0=args.n, space=args.space)
        border = experiments.critical_border(params)
        for i, m in enumerate(table.max_ratio):
            rows.append([s, i, args.n * 2 ** i, N, m, border, s < border, table.stable])
    header = ["s", "refinement", "n", "N", "max_ratio", "critical_border", "below_border",
              "stable"]
    return header, rows, []


def cmd_border(args):
    rows = []
    for s in args.s_grid:
        params = SpaceParams(s, args.p, args.u, 2.0, args.d)
        border = experiments.critical_border(params)
        probe = experiments.divergence_probe(params, args.j_range)
        rows.append([s, args.p, args.u, args.d, border, probe.status, probe.slope,
                     probe.predicted, probe.residual])
    header = ["s", "p", "u", "d", "critical_border", "status", "slope", "predicted",
              "residual"]
    return header, rows, []


def cmd_fubini(args):
    rep = experiments.fubini_comparison(args.d, args.p, args.u, args.s, args.q,
                                        args.t_range, args.box_scales, per_unit=args.per_unit)
    rows = [["fubini", t, v] for t, v in zip(rep.t, rep.fubini_values)]
    rows += [["direct", L, v] for L, v in zip(rep.box_scales, rep.direct_norms)]
    notes = [f"fubini_slope={fmt(rep.fubini_slope)} fubini_residual={fmt(rep.fubini_residual)} "
             f"direct_change={fmt(rep.direct_change)}"]
    return ["kind", "x", "value"], rows, notes


def cmd_hardy(args):
    family = testbank.zero_mean_family(args.family_size,
                                       centre=0.5 if args.interval[1] != INFINITY else 1.5)
    res = experiments.hardy_check(family, args.p, args.u, args.q, args.s, n=args.n,
                                  interval=args.interval)
    rows = [[i, l, r, q] for i, (l, r, q) in enumerate(zip(res.lhs, res.rhs, res.ratios))]
    return ["function", "lhs", "rhs", "ratio"], rows, [f"max_ratio={fmt(res.max_ratio)}"]


def cmd_sawtooth(args):
    fits = experiments.sawtooth_probe(args.p, args.u, args.J, args.t_range)
    rows = []
    for fit in fits:
        for t, v in zip(fit.t, fit.values):
            rows.append([fit.J, t, v, fit.c1, fit.c2, fit.residual])
    return ["J", "t", "value", "c1", "c2", "residual"], rows, []


def cmd_zeroset(args):
    d = args.d
    f, box = _function(args, d)
    res = zeroset.cover_scaling(f, box, args.k, args.r, tol=args.tol)
    rows = [[r, c, q] for r, c, q in res.rows()]
    notes = [f"status={res.status} exponent={fmt(res.exponent)} prefactor={fmt(res.prefactor)}"]
    return ["r", "count", "ratio"], rows, notes


def _sub(sub, name, **kw):
    return sub.add_parser(name, allow_abbrev=False, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="morreytrunc", description=__doc__.splitlines()[0], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--threads", type=int, default=None, help="worker cap (default: all cores)")
        p.add_argument("--config", default=None, help="key=value file; flags override it")

    p = _sub(sub, "norm", help="one difference or Littlewood-Paley norm")
    common(p)
    p.add_argument("--space", choices=["besov", "tlm", "besov-lp", "tlm-lp"], default="tlm")
    _space_flags(p)
    _quadrature_flags(p)
    p.add_argument("--fn", default="bump", choices=sorted(testbank.NAMED))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--box", type=box_arg, default=None, help="lo:hi per axis, comma separated")
    p.add_argument("--padding", type=int, default=2)
    p.set_defaults(func=cmd_norm)

    p = _sub(sub, "sweep", help="truncation ratio over a smoothness grid")
    common(p)
    p.add_argument("--op", choices=["T", "T+"], default="T")
    p.add_argument("--space", choices=["besov", "tlm"], default="tlm")
    p.add_argument("--s-grid", type=float_grid, required=True)
    p.add_argument("--p", type=real, default=1.0)
    p.add_argument("--u", type=real, default=2.0)
    p.add_argument("--q", type=real, default=2.0)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--v", type=real, default=1.0)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--fn", default="random", choices=sorted(testbank.NAMED))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family-size", type=int, default=3)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--refinements", type=int, default=2)
    p.add_argument("--box", type=box_arg, default=None)
    p.set_defaults(func=cmd_sweep)

    p = _sub(sub, "border", help="critical border and divergence-probe slopes")
    common(p)
    p.add_argument("--s-grid", type=float_grid, required=True)
    p.add_argument("--p", type=real, default=1.0)
    p.add_argument("--u", type=real, default=4.0)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--j-range", type=int_range, default=list(range(2, 9)))
    p.set_defaults(func=cmd_border)

    p = _sub(sub, "fubini", help="iterated-norm growth versus direct norm")
    common(p)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--p", type=real, default=1.0)
    p.add_argument("--u", type=real, default=2.0)
    p.add_argument("--s", type=real, default=0.5)
    p.add_argument("--q", type=real, default=2.0)
    p.add_argument("--t-range", type=pair, default=(1.0, 64.0))
    p.add_argument("--box-scales", type=float_grid, default=[16.0, 32.0])
    p.add_argument("--per-unit", type=int, default=16)
    p.set_defaults(func=cmd_fubini)

    p = _sub(sub, "hardy", help="empirical constant of the Morrey Hardy inequality")
    common(p)
    p.add_argument("--p", type=real, default=1.0)
    p.add_argument("--u", type=real, default=2.0)
    p.add_argument("--q", type=real, default=2.0)
    p.add_argument("--s", type=real, default=0.3)
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--family-size", type=int, default=10)
    p.add_argument("--interval", type=pair, default=(0.0, 1.0))
    p.set_defaults(func=cmd_hardy)

    p = _sub(sub, "sawtooth", help="logarithmic growth for the lacunary series")
    common(p)
    p.add_argument("--p", type=real, default=1.0)
    p.add_argument("--u", type=real, default=2.0)
    p.add_argument("--J", type=int_range, default=[12])
    p.add_argument("--t-range", type=pair, default=None)
    p.set_defaults(func=cmd_sawtooth)

    p = _sub(sub, "zeroset", help="dyadic covering counts of a zero set")
    common(p)
    p.add_argument("--fn", default="circle", choices=["circle", "line", "triple_line"])
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--r", type=int_range, default=list(range(4, 10)))
    p.add_argument("--tol", type=real, default=0.25)
    p.add_argument("--box", type=box_arg, default=None)
    p.set_defaults(func=cmd_zeroset)
    return parser


def read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value")
            key, value = (x.strip() for x in line.split("=", 1))
            out[key.lstrip("-").replace("_", "-")] = value
    return out


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    if argv and not argv[0].startswith("-"):
        pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv[1:])
        if known.config:
            extra = []
            for key, value in read_config(known.config).items():
                extra += [f"--{key}", value]
            # argparse keeps the last occurrence, so flags placed after the file win
            argv = argv[:1] + extra + argv[1:]
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError(parser.format_usage() + "morreytrunc: error: a subcommand is required")
    return args


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (ParameterError, OSError) as exc:
        print(f"morreytrunc: {exc}", file=sys.stderr)
        return 1
    try:
        kernels.set_threads(args.threads)
        with np.errstate(over="raise", invalid="ignore"):
            header, rows, notes = args.func(args)
    except (ParameterError, UsageError, ValueError) as exc:
        print(f"morreytrunc: parameter error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, FloatingPointError, OverflowError) as exc:
        print(f"morreytrunc: numerical failure: {exc}", file=sys.stderr)
        return 2
    buf = io.StringIO()
    write_table(buf, args, header, rows, notes)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def main() -> None:
    sys.exit(run())
