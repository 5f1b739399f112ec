"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__, analysis, combinatorics, kernel, regularity, suites
from .domain import DomainParams, Point, sample_uniform
from .report import check, render_csv, render_json, render_latex

SUBCOMMANDS = ("kernel", "coeffs", "counts", "verify", "lp-scan", "schur-scan", "sample")


@dataclass
class RunConfig:
    subcommand: str
    k: int = 1
    n: int = 1
    seed: int = 42
    samples: int = 10**6
    output_format: str = "json"
    output_path: Optional[str] = None


class UsageError(Exception):
    pass


def _complex_list(text: str) -> list[complex]:
    try:
        return [complex(x.strip().replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad complex list {text!r}") from exc


def _complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad complex number {text!r}") from exc


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def parse_grid(text: str) -> list[Fraction]:
    """``start:stop:step`` (inclusive, exact decimal arithmetic) or a comma list."""
    try:
        if ":" in text:
            start, stop, step = (Fraction(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError
            out, x = [], start
            while x <= stop:
                out.append(x)
                x += step
            return out
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from exc


def _add_common(p: argparse.ArgumentParser, formats=("json", "csv", "latex")):
    p.add_argument("--k", type=_positive_int, default=1, help="exponent k (default 1)")
    p.add_argument("--n", type=_positive_int, default=1, help="dimension n of the z-block (default 1)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    p.add_argument("--samples", type=_positive_int, default=10**6, help="Monte Carlo samples (default 10^6)")
    p.add_argument("--format", dest="output_format", choices=formats, default="json")
    p.add_argument("--output", dest="output_path", default=None, help="write the report here instead of stdout")
    p.add_argument(
        "--threads",
        type=_positive_int,
        default=None,
        help=f"worker threads (default ${analysis.THREADS_ENV} or the number of cores)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hartogs", description="Bergman kernel tools for {|z|^k < |w| < 1}.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("kernel", help="evaluate the Bergman kernel B((z,w),(s,t))")
    _add_common(p, ("json",))
    p.add_argument("--point-z", type=_complex_list, required=True, help="z as a comma list, e.g. '0.1+0.2j,0.3'")
    p.add_argument("--point-w", type=_complex, required=True)
    p.add_argument("--point-s", type=_complex_list, default=None, help="second point z-part (default: --point-z)")
    p.add_argument("--point-t", type=_complex, default=None, help="second point w-part (default: --point-w)")
    p.add_argument("--method", choices=("closed", "series", "special"), default="closed")
    p.add_argument("--json", action="store_true", help="JSON output (the default)")

    p = sub.add_parser("coeffs", help="numerator coefficient tables g_l(b)")
    _add_common(p)
    p.add_argument("--l", type=int, default=None, help="only this power of a")

    p = sub.add_parser("counts", help="tables of the pair/triple counting functions")
    _add_common(p)

    p = sub.add_parser("verify", help="run verification suites")
    _add_common(p, ("json", "csv"))
    p.add_argument("--suite", choices=suites.SUITES + ("all",), default="all")

    p = sub.add_parser("lp-scan", help="classify exponents p against the sharp interval")
    _add_common(p)
    p.add_argument("--p-grid", type=parse_grid, default=parse_grid("1.1:5:0.1"), help="start:stop:step or list")

    p = sub.add_parser("schur-scan", help="Schur-test ratios over a grid of eps and evaluation points")
    _add_common(p)
    p.add_argument("--eps-grid", type=parse_grid, default=None, help="eps values (default: 3 points of the range)")
    p.add_argument("--explore", action="store_true", help="allow eps outside the Schur range")

    p = sub.add_parser("sample", help="draw uniform points of the domain")
    _add_common(p)
    p.add_argument("--count", type=_positive_int, default=10)
    return parser


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _document(config: RunConfig, results: list[dict]) -> dict:
    return {"tool_version": __version__, "config": asdict(config), "results": results}


def _render(config: RunConfig, results: list[dict], columns: list[str]) -> str:
    if config.output_format == "csv":
        return render_csv(results, columns)
    if config.output_format == "latex":
        return render_latex(results, columns)
    return render_json(_document(config, results))


def cmd_kernel(args, config):
    params = DomainParams(args.n, args.k)
    p = Point(args.point_z, args.point_w)
    q = Point(args.point_s if args.point_s is not None else args.point_z, args.point_t if args.point_t is not None else args.point_w)
    if p.n != params.n or q.n != params.n:
        raise UsageError(f"points must have n={params.n} z-coordinates")
    if args.method == "closed":
        kv = kernel.kernel_closed(params, p, q)
    elif args.method == "series":
        kv = kernel.kernel_series(params, p, q)
    else:
        kv = kernel.kernel_special(params, p, q)
    rec = {"name": "kernel", "value": kv.value, "method": kv.method, "est_error": kv.est_error}
    return [rec], ["name", "value", "method", "est_error"], 0


def cmd_coeffs(args, config):
    params = DomainParams(args.n, args.k)
    ls = range(args.n + 2) if args.l is None else [args.l]
    rows = []
    for l in ls:
        g = combinatorics.g_polynomial(l, params)
        for t, c in enumerate(g.coeffs):
            if c:
                rows.append({"l": l, "power_a": l, "power_b": t, "coefficient": c})
    return rows, ["l", "power_b", "coefficient"], 0


def cmd_counts(args, config):
    k = args.k
    rows = [
        {"l": l, "f": combinatorics.count_f(l, k), "h": combinatorics.count_h(l, k)}
        for l in range(3 * k - 2)
    ]
    return rows, ["l", "f", "h"], 0


def cmd_verify(args, config):
    results = suites.run_suite(args.suite, args.k, args.n, args.samples, args.seed, args.threads)
    code = 0 if all(r["status"] == "pass" for r in results) else 1
    return results, ["suite", "name", "status", "value", "expected", "tolerance"], code


def cmd_lp_scan(args, config):
    k, n = args.k, args.n
    iv = regularity.critical_interval(k, n)
    spec = regularity.test_function(k, n)
    rows = []
    for p in args.p_grid:
        e = regularity.divergence_exponent(k, n, spec, p)
        rows.append(
            {
                "params": {"k": k, "n": n, "p": p},
                "p": p,
                "value": e,
                "std_error": 0.0,
                "test_function_norm_finite": e > -1,
                "classification": regularity.classify(k, n, p),
            }
        )
    if config.output_format == "json":
        rows.append(check("interval", True, [iv.lower, iv.upper], [iv.lower, iv.upper], 0))
    return rows, ["p", "value", "test_function_norm_finite", "classification"], 0


def schur_grid_points(params: DomainParams) -> list[Point]:
    """3 x 3 grid: |w| in {0.2, 0.5, 0.8}, |z|^k/|w| in {0, 0.5, 0.9}."""
    n, k = params.n, params.k
    pts = []
    direction = np.ones(n) / np.sqrt(n)
    for aw in (0.2, 0.5, 0.8):
        for frac in (0.0, 0.5, 0.9):
            r = (frac * aw) ** (1 / k)
            pts.append(Point(direction * r, aw * np.exp(0.3j)))
    return pts


def default_eps_grid(k: int, n: int) -> list[Fraction]:
    lo, hi = regularity.epsilon_range(k, n)
    return [lo + (hi - lo) * Fraction(i, 3) for i in range(3)]


def cmd_schur_scan(args, config):
    k, n = args.k, args.n
    params = DomainParams(n, k)
    eps_grid = args.eps_grid or default_eps_grid(k, n)
    lo, hi = regularity.epsilon_range(k, n)
    if not args.explore:
        bad = [e for e in eps_grid if not lo <= e < hi]
        if bad:
            raise UsageError(f"eps {bad[0]} outside [{lo}, {hi}); use --explore")
    points = schur_grid_points(params)
    cells = [(i, e, j, x) for i, e in enumerate(eps_grid) for j, x in enumerate(points)]

    def run(cell):
        i, e, j, x = cell
        seed = suites._sub_seed(args.seed, 7, i, j)
        est = regularity.schur_ratio(k, n, e, x, args.samples, seed, strict=not args.explore, threads=1)
        return {
            "params": {"k": k, "n": n, "eps": e, "point": j, "z": x.z.tolist(), "w": x.w},
            "eps": e,
            "point": j,
            "value": est.value,
            "std_error": est.std_error,
            "classification": "finite" if est.finite else "divergent",
        }

    threads = args.threads or analysis.default_threads()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(run, cells))
    return rows, ["eps", "point", "value", "std_error", "classification"], 0


def cmd_sample(args, config):
    params = DomainParams(args.n, args.k)
    rows = [
        {"index": i, "z": p.z.tolist(), "w": p.w}
        for i, p in enumerate(sample_uniform(params, args.count, args.seed))
    ]
    return rows, ["index", "z", "w"], 0


_COMMANDS = {
    "kernel": cmd_kernel,
    "coeffs": cmd_coeffs,
    "counts": cmd_counts,
    "verify": cmd_verify,
    "lp-scan": cmd_lp_scan,
    "schur-scan": cmd_schur_scan,
    "sample": cmd_sample,
}


def run(config: RunConfig, args: argparse.Namespace) -> int:
    try:
        rows, columns, code = _COMMANDS[config.subcommand](args, config)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"hartogs {config.subcommand}: error: {exc}\n")
        return 2
    _emit(_render(config, rows, columns), config.output_path)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = RunConfig(
        subcommand=args.subcommand,
        k=args.k,
        n=args.n,
        seed=args.seed,
        samples=args.samples,
        output_format=args.output_format,
        output_path=args.output_path,
    )
    return run(config, args)


if __name__ == "__main__":
    sys.exit(main())
