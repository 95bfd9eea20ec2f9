"""Command line front end: ``xxzring {spectrum,entropy,verify}``.

Exit status is 0 when every check holds, 1 when a (non-informational) check
fails and 2 for usage or parameter-domain errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import analysis, combinatorics, entanglement, spectral
from .config import Configuration, Interval, ModelParams, droplets, orbit_table, sector_basis
from .fourier import fiber_space, spectrum_union_check
from .graph import bfs_distances
from .metric import config_distance, nearest_droplet_centers
from .report import CheckReport, dumps, fmt_float

SUITES = ("fourier", "band", "ct-decay", "resolvent", "metric", "sums", "droplet-mass",
          "difference", "ssf", "main-chain")

# per-suite parameters used when the corresponding flag is absent
DEFAULTS = {
    "fourier": dict(L=8, N=3, delta=5.0),
    "band": dict(L=10, N=None, delta=5.0),
    "ct-decay": dict(L=12, N=3, delta=10.0),
    "resolvent": dict(L=10, N=3, delta=10.0),
    "metric": dict(L=8, N=3),
    "sums": dict(L=14, N=4),
    "droplet-mass": dict(L=12, N=3, delta=10.0),
    "difference": dict(L=14, N=4, delta=50.0, p=2.0),
    "ssf": dict(),
    "main-chain": dict(L=16, N=2, delta=1e3, epsilon=0.05, theta=1 / 16),
}


class UsageError(Exception):
    pass


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")


def _window(text):
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("window takes LO,HI")
    return tuple(vals)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xxzring", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--L", type=_int_list, help="ring size (entropy accepts a list 12,14,16)")
    common.add_argument("--N", type=int, help="particle number")
    common.add_argument("--delta", type=float, help="anisotropy, > 1")
    common.add_argument("--gamma", type=int, help="restrict to one momentum fiber")
    common.add_argument("--epsilon", type=float, help="particle density, in (0, 1/16)")
    common.add_argument("--theta", type=float, help="window half-width fraction")
    common.add_argument("--window", type=_window, help="explicit window bounds LO,HI")
    common.add_argument("--p", type=float, help="quasinorm exponent, > 1")
    common.add_argument("--q", type=float, help="conjugate exponent")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output file (default: stdout)")
    sub.add_parser("spectrum", parents=[common], help="fiber-resolved spectrum of one sector")
    sub.add_parser("entropy", parents=[common], help="entropy of the droplet band states")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    return parser


def _single_L(args, default):
    if args.L is None:
        return default
    if len(args.L) != 1:
        raise UsageError("this command takes a single L")
    return args.L[0]


def _pick(args, suite, name):
    value = getattr(args, name)
    if value is None:
        value = DEFAULTS[suite].get(name)
    if name == "L" and isinstance(value, list):
        if len(value) != 1:
            raise UsageError("this command takes a single L")
        value = value[0]
    return value


def _emit_rows(rows, fmt, columns=None):
    buf = io.StringIO()
    if fmt == "json":
        for row in rows:
            buf.write(dumps(row) + "\n")
    else:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row.get(c) is None else
                             fmt_float(row[c]) if isinstance(row[c], float) else row[c]
                             for c in columns])
    return buf.getvalue()


# ---- subcommands ------------------------------------------------------------------------

def cmd_spectrum(args):
    L = _single_L(args, 8)
    params = ModelParams(L, 3 if args.N is None else args.N, 5.0 if args.delta is None else args.delta)
    report = spectrum_union_check(params)
    fibers = report.details["fibers"]
    if args.gamma is not None:
        fibers = [f for f in fibers if f["gamma"] == args.gamma % L]
    if args.format == "json":
        rows = fibers + [{k: v for k, v in report.to_row().items() if k != "details"}]
        text = _emit_rows(rows, "json")
    else:
        rows = [{"gamma": f["gamma"], "energy": e} for f in fibers for e in f["eigenvalues"]]
        text = _emit_rows(rows, "csv", ("gamma", "energy"))
        print(f"union-vs-sector residual: {report.lhs:.3e}", file=sys.stderr)
    return text, [report]


def cmd_entropy(args):
    eps = 0.05 if args.epsilon is None else args.epsilon
    theta = 1 / 16 if args.theta is None else args.theta
    delta = 100.0 if args.delta is None else args.delta
    Ls = args.L or [12, 14, 16]
    scan = entanglement.entropy_scan(eps, theta, delta, Ls, N=args.N, window=args.window)
    rows = scan.rows
    if args.gamma is not None:
        rows = [r for r in rows if r["gamma"] == args.gamma % r["L"]]
    if args.format == "json":
        text = _emit_rows(rows + scan.skipped, "json")
    else:
        flagged = [{"L": s["L"], "N": s["N"], "gamma": "skipped"} for s in scan.skipped]
        text = _emit_rows(rows + flagged, "csv", entanglement.EntropyScan.COLUMNS)
    return text, []


def _default_window(L, N):
    width = N + 1
    if not width < L / 2:
        raise UsageError(f"no window with N < hi - lo < L/2 for L={L}, N={N}")
    lo = (L - 1) // 2 - width // 2
    return Interval(lo, lo + width, L)


def suite_fourier(args):
    L, N, delta = (_pick(args, "fourier", k) for k in ("L", "N", "delta"))
    params = ModelParams(L, N, delta)
    space = fiber_space(L, N)
    rng = np.random.default_rng(args.seed)
    err_inv = err_norm = 0.0
    for _ in range(100):
        psi = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
        psi /= np.linalg.norm(psi)
        phi = space.forward(psi)
        err_inv = max(err_inv, float(np.linalg.norm(space.adjoint(phi) - psi)))
        err_norm = max(err_norm, abs(space.norm(phi) - 1))
    p = params.to_dict()
    union = spectrum_union_check(params)
    return [CheckReport.make("fourier_inversion", p, err_inv, 1e-12),
            CheckReport.make("fourier_isometry", p, err_norm, 1e-12),
            CheckReport(union.check, union.params, union.lhs, union.rhs, union.slack, union.holds)]


def suite_band(args):
    L, N, delta = (_pick(args, "band", k) for k in ("L", "N", "delta"))
    out = []
    for n in ([N] if N is not None else range(2, L - 1)):
        params = ModelParams(L, n, delta)
        try:
            spectrum = spectral.droplet_band_states(params)
            violation = 0
            detail = {"energies": spectrum.energies().tolist()}
        except spectral.BandViolation as exc:
            violation, detail = 1, {"error": str(exc)}
        out.append(CheckReport.make("band_count", params.to_dict(), violation, 0, details=detail))
    return out


def suite_ct(args):
    L, N, delta = (_pick(args, "ct-decay", k) for k in ("L", "N", "delta"))
    r = spectral.verify_ct_eigenfunction(ModelParams(L, N, delta))
    details = {k: v for k, v in r.details.items() if k != "violations"}
    details["violations"] = len(r.details["violations"])
    return [CheckReport.make(r.check, r.params, r.lhs, r.rhs, tol=1e-12, details=details)]


def suite_resolvent(args):
    L, N, delta = (_pick(args, "resolvent", k) for k in ("L", "N", "delta"))
    params = ModelParams(L, N, delta)
    spectrum = spectral.droplet_band_states(params)
    out = []
    for s in spectrum:
        if args.gamma is not None and s.gamma != args.gamma % L:
            continue
        out += spectral.verify_resolvent_decay(params, s.gamma, 1, 0.5, s.energy)
    return out


def suite_metric(args):
    L, N = _pick(args, "metric", "L"), _pick(args, "metric", "N")
    basis = sector_basis(L, N)
    mismatches = 0
    for x in basis:
        bfs = bfs_distances(x)
        mismatches += sum(config_distance(x, y) != bfs[y] for y in basis)
    p = {"L": L, "N": N}
    out = [CheckReport.make("distance_vs_bfs", p, mismatches, 0,
                            details={"pairs": len(basis) ** 2})]
    if 0 < 2 * N < L:
        empty = sum(not (nearest_droplet_centers(x) & set(x.sites)) for x in basis)
        out.append(CheckReport.make("centers_meet_configuration", p, empty, 0))
    return out


def suite_sums(args):
    L, N = _pick(args, "sums", "L"), _pick(args, "sums", "N")
    out = [combinatorics.verify_geom_bound(k, mu)
           for k in range(1, 7) for mu in (math.log(2), 1.0, 2.0)]
    if 0 < 2 * N < L:
        out.append(combinatorics.verify_sum_over_configs(L, N, math.log(2)))
    w = Interval(*args.window, L) if args.window else _default_window(L, N)
    for n in (n for n in range(N) if N < 2 * n):
        out += combinatorics.verify_boundary_sums(L, N, n, w, math.log(2))
    return out


def suite_droplet_mass(args):
    L, N, delta = (_pick(args, "droplet-mass", k) for k in ("L", "N", "delta"))
    return analysis.droplet_mass_check(ModelParams(L, N, delta))


def suite_difference(args):
    L, N, delta, p = (_pick(args, "difference", k) for k in ("L", "N", "delta", "p"))
    q = args.q if args.q is not None else p / (p - 1)
    params = ModelParams(L, N, delta)
    w = Interval(*args.window, L) if args.window else _default_window(L, N)
    out = []
    for n in (n for n in range(N) if N < 2 * n):
        out += analysis.difference_entries_check(params, w, n)
        out += analysis.eigenvalue_order_check(params, w, n, p)
        out += analysis.entropy_difference_check(params, w, n, p, q)
    return out


def suite_ssf(args):
    return analysis.ssf_suite(args.seed)


def suite_main_chain(args):
    L, N, delta, eps, theta = (_pick(args, "main-chain", k)
                               for k in ("L", "N", "delta", "epsilon", "theta"))
    if args.N is None and args.epsilon is not None:
        N = None
    return analysis.main_theorem_chain(eps, theta, delta, L, N=N, window=args.window)


SUITE_RUNNERS = {
    "fourier": suite_fourier,
    "band": suite_band,
    "ct-decay": suite_ct,
    "resolvent": suite_resolvent,
    "metric": suite_metric,
    "sums": suite_sums,
    "droplet-mass": suite_droplet_mass,
    "difference": suite_difference,
    "ssf": suite_ssf,
    "main-chain": suite_main_chain,
}


def cmd_verify(args):
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = []
    for name in names:
        for r in SUITE_RUNNERS[name](args):
            reports.append((name, r))
    rows = [{"suite": name, **r.to_row()} for name, r in reports]
    if args.format == "csv":
        flat = [{**row, "params": dumps(row["params"])} for row in rows]
        text = _emit_rows(flat, "csv", ("suite", "check", "params", "lhs", "rhs", "slack", "holds"))
    else:
        text = _emit_rows(rows, "json")
    return text, [r for _, r in reports]


COMMANDS = {"spectrum": cmd_spectrum, "entropy": cmd_entropy, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, reports = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"xxzring {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if any(r.failed for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
