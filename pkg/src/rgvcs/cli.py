"""Command-line interface: ``rgvcs share|recover|theory|measure|sweep|compare``.

Exit codes: 0 success, 1 usage or parameter error, 2 I/O error,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from .empirical import combination_sweep, format_partition, layer_means, measure_contrast, sweep_csv
from .errors import BudgetExceededError, InvalidParameterError
from .image import half_white_secret, recover_image, share_image
from .manifest import load_shadow_set, save_shadow_set
from .pbm import PBMFormatError, read_pbm, write_pbm
from .rng import entropy_seed
from .sharing import SchemeParams, Variant
from .theory import DEFAULT_BUDGET, scheme_contrast

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _decimal(value, digits: int = 6) -> str:
    return f"{float(value):.{digits}g}"


def _params(args, variant=None) -> SchemeParams:
    variant = variant or args.variant
    return SchemeParams(k=args.k, n=args.n, n_prime=args.nprime, variant=variant, inner=args.inner)


def _seed(args, out) -> int:
    if args.seed is None:
        args.seed = entropy_seed()
        print(f"# seed={args.seed}", file=out)
    return args.seed


def _emit(text: str, args, out) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=";", lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _table(rows) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return "".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)


def cmd_share(args, out) -> int:
    params = _params(args)
    seed = _seed(args, out)
    secret = read_pbm(args.secret)
    shadows = share_image(secret, params, seed, n_jobs=args.jobs)
    manifest = save_shadow_set(shadows, args.out, args.pbm)
    print(f"wrote {len(manifest.shadows)} shadows and manifest.txt to {args.out} (seed={seed})", file=out)
    return EXIT_OK


def cmd_recover(args, out) -> int:
    images = [read_pbm(p) for p in args.shadows]
    write_pbm(args.out, recover_image(images), args.pbm)
    print(f"stacked {len(images)} shadows into {args.out}", file=out)
    return EXIT_OK


def cmd_theory(args, out) -> int:
    params = _params(args, Variant.GROUPED)
    header = f"# grouped k={params.k} nprime={params.n_prime} n={params.n} t={args.t}"
    breakdown = scheme_contrast(params, args.t, engine=args.engine, budget=args.budget)
    rows = [["class", "partition", "pr_distinct", "alpha", "alpha_decimal", "beta", "beta_decimal"]]
    for i, c in enumerate(breakdown.classes, 1):
        dist = " ".join(f"{x}:{p}" for x, p in sorted(c.probs.items()) if p)
        rows.append([i, format_partition(c.partition), dist, str(c.alpha), _decimal(c.alpha),
                     str(c.beta), _decimal(c.beta)])
    gamma = breakdown.gamma
    rows.append(["gamma", "", "", str(gamma), _decimal(gamma), "", ""])
    text = _csv(rows) if args.format == "csv" else _table(rows)
    _emit(f"{header} engine={breakdown.engine}\n{text}", args, out)
    return EXIT_OK


def cmd_measure(args, out) -> int:
    secret = read_pbm(args.secret)
    recovered = recover_image([read_pbm(p) for p in args.shadows])
    m = measure_contrast(secret, recovered)
    rows = [["t_white", "t_black", "alpha"], [f"{m.t_white:.6f}", f"{m.t_black:.6f}", f"{m.alpha:.6f}"]]
    text = _csv(rows) if args.format == "csv" else _table(rows)
    _emit(text, args, out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    secret = read_pbm(args.secret)
    shadows = load_shadow_set(args.manifest)
    rows = combination_sweep(secret, shadows, args.t, budget=args.budget)
    p = shadows.params
    header = (f"# {p.variant.value} k={p.k} nprime={p.n_prime} n={p.n} t={args.t} "
              f"seed={shadows.seed} combinations={len(rows)}\n")
    if args.format == "csv":
        _emit(sweep_csv(rows), args, out)
        return EXIT_OK
    table = [["layer", "count", "mean_alpha"]]
    for layer, (count, mean) in sorted(layer_means(rows).items(), key=lambda kv: -kv[1][1]):
        table.append([format_partition(layer), count, f"{mean:.6f}"])
    _emit(header + _table(table), args, out)
    return EXIT_OK


def cmd_compare(args, out) -> int:
    seed = _seed(args, out)
    if args.secret:
        secret = read_pbm(args.secret)
    else:
        secret = half_white_secret(args.size, args.size)
    ts = args.t or list(range(args.k, args.n + 1))
    for t in ts:
        if not 1 <= t <= args.n:
            raise InvalidParameterError(f"t={t} outside 1..{args.n}")
        if math.comb(args.n, t) > args.budget:
            raise BudgetExceededError("comparison sweep", math.comb(args.n, t), args.budget)
    rows = [["scheme"] + [f"t={t}" for t in ts]]
    for name in args.variants:
        variant = Variant.parse(name)
        nprime = args.nprime if variant is Variant.GROUPED else None
        params = SchemeParams(k=args.k, n=args.n, n_prime=nprime, variant=variant, inner=args.inner)
        shadows = share_image(secret, params, seed, n_jobs=args.jobs)
        cells = []
        for t in ts:
            sweep = combination_sweep(secret, shadows, t, budget=args.budget)
            cells.append(f"{sum(r.alpha for r in sweep) / len(sweep):.4f}")
        rows.append([variant.value] + cells)
    header = f"# ({args.k},{args.n}) seed={seed} mean contrast over all t-combinations\n"
    text = _csv(rows) if args.format == "csv" else header + _table(rows)
    _emit(text, args, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rgvcs", description="Grouped random-grid visual cryptography toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def scheme_flags(p):
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--nprime", type=int, default=None, help="group length (default: k for grouped)")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--inner", default="yan", help="scheme building the first group when nprime > k")

    p = sub.add_parser("share", help="split a PBM secret into shadow PBMs")
    p.add_argument("secret")
    scheme_flags(p)
    p.add_argument("--variant", default="grouped", choices=[v.value for v in Variant])
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--pbm", default="auto", choices=["auto", "P1", "P4"])
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_share)

    p = sub.add_parser("recover", help="OR-stack shadows")
    p.add_argument("shadows", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--pbm", default="auto", choices=["auto", "P1", "P4"])
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("theory", help="exact per-class contrast and expected contrast")
    scheme_flags(p)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--engine", default="auto", choices=["auto", "closed", "enumerated"])
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--format", default="table", choices=["table", "csv"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("measure", help="contrast of stacked shadows against the secret")
    p.add_argument("secret")
    p.add_argument("shadows", nargs="+")
    p.add_argument("--format", default="table", choices=["table", "csv"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("sweep", help="contrast of every t-combination of a shared set")
    p.add_argument("secret")
    p.add_argument("--manifest", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--format", default="table", choices=["table", "csv"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="mean measured contrast across schemes")
    scheme_flags(p)
    p.add_argument("--t", type=int, nargs="+")
    p.add_argument("--variants", nargs="+", default=["yan", "shyu", "grouped"])
    p.add_argument("--secret")
    p.add_argument("--size", type=int, default=512, help="side of the default half-white secret")
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", default="table", choices=["table", "csv"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "nprime") and args.nprime is None:
        args.nprime = args.k
    try:
        return args.func(args, out)
    except BudgetExceededError as exc:
        print(f"rgvcs: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PBMFormatError, OSError) as exc:
        print(f"rgvcs: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvalidParameterError as exc:
        print(f"rgvcs: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
