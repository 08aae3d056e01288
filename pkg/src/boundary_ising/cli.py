"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical failure,
4 disagreement or failed check.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import checks, correlate, oracle
from .errors import NumericalError, RegionError
from .numerics import DEFAULT_POLICY, TolerancePolicy
from .region import Matching, Region, from_boundary_vectors

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_DISAGREE = 0, 2, 3, 4

REGION_HELP = """\
region file: JSON object with "n" and either "tau" (1-based, length 2n) plus
"theta" (2n angles in radians), or "vectors" (2n unit [x, y] edge vectors in
counterclockwise order). Example: {"n": 2, "tau": [3, 4, 1, 2],
"theta": [0, 0.7853981633974483, 1.5707963267948966, 2.356194490192345]}
"""


class InputError(Exception):
    pass


def _num(x: float) -> str:
    # shortest repr that round-trips
    return repr(float(x))


def load_region(path: str) -> Region:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read region file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"region file is not valid JSON: {exc}") from exc
    return region_from_dict(data)


def region_from_dict(data) -> Region:
    if not isinstance(data, dict) or "n" not in data:
        raise InputError('region file must be a JSON object with an "n" field')
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f'"n" must be a positive integer, got {n!r}')
    if "tau" in data and "theta" in data:
        tau, theta = data["tau"], data["theta"]
        if len(tau) != 2 * n or len(theta) != 2 * n:
            raise InputError(f'"tau" and "theta" must have length 2n = {2 * n}')
        return Region(Matching(tuple(tau)), tuple(theta))
    if "vectors" in data:
        vs = data["vectors"]
        if len(vs) != 2 * n:
            raise InputError(f'"vectors" must have length 2n = {2 * n}')
        return from_boundary_vectors(np.array(vs, dtype=float))
    raise InputError('region file needs "tau" and "theta", or "vectors"')


def _policy(args) -> TolerancePolicy:
    return DEFAULT_POLICY.with_overrides(agreement_eps=getattr(args, "tol", None))


def _samples(text: str | None):
    if text is None:
        return None
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"--samples must be comma-separated numbers: {exc}") from exc


def _matrix_out(m: np.ndarray, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"n": int(m.shape[0]), "correlations": m.tolist()})
    lines = ["j,k,correlation"]
    for j in range(m.shape[0]):
        for k in range(m.shape[1]):
            lines.append(f"{j + 1},{k + 1},{_num(m[j, k])}")
    return "\n".join(lines)


def _table_out(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, row)) for row in rows])
    lines = [",".join(header)]
    lines += [",".join(_num(x) if isinstance(x, float) else str(x) for x in row) for row in rows]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_correlations(args) -> int:
    r = load_region(args.region)
    m = correlate.correlations(r, args.basis, samples=_samples(args.samples), policy=_policy(args))
    print(_matrix_out(m.entries, args.format))
    return EXIT_OK


def cmd_regular(args) -> int:
    n = args.n
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    if args.mode == "closed":
        row = [correlate.regular_correlation(n, 1, k) for k in range(1, n + 1)]
    else:
        row = correlate.regular_pipeline_row(n, args.basis, _policy(args)).tolist()
    print(_table_out(["k", "correlation"], [[k, float(v)] for k, v in enumerate(row, 1)], args.format))
    return EXIT_OK


def cmd_oracle(args) -> int:
    r = load_region(args.region)
    policy = _policy(args)
    res = oracle.oracle_correlations(r, args.placements, args.seed, policy, check=False)
    formula = correlate.correlations(r, policy=policy).entries
    diff = np.abs(res.entries - formula)
    j, k = np.unravel_index(int(np.argmax(diff)), diff.shape)
    report = {
        "n": r.n,
        "oracle": res.entries.tolist(),
        "formula": formula.tolist(),
        "max_abs_difference": float(diff[j, k]),
        "placement_spread": res.spread,
    }
    print(json.dumps(report, indent=2))
    if diff[j, k] > policy.agreement_eps:
        print(f"disagreement at ({j + 1},{k + 1}): oracle {_num(res.entries[j, k])}, "
              f"formula {_num(formula[j, k])}", file=sys.stderr)
        return EXIT_DISAGREE
    if res.spread > policy.agreement_eps:
        print(f"placement spread {res.spread:.3e} exceeds {policy.agreement_eps:.0e}", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def cmd_limit(args) -> int:
    x = args.x
    ns = [int(s) for s in args.n.split(",") if s.strip()]
    if ns != sorted(ns) or len(set(ns)) != len(ns):
        raise InputError("--n must be strictly ascending")
    target = correlate.scaling_limit(x)
    rows = []
    for n in ns:
        q = math.floor(n * x)
        scaled = n * correlate.regular_correlation(n, 1, q)
        rows.append([n, scaled, target, abs(scaled - target)])
    print(_table_out(["n", "scaled_correlation", "limit", "abs_error"], rows, args.format))
    return EXIT_OK


def cmd_check(args) -> int:
    r = load_region(args.region)
    results = checks.run_checks(r, _policy(args), placements=args.placements, seed=args.seed)
    for c in results:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}")
    failed = [c for c in results if not c.passed]
    if failed:
        print(f"failed invariant: {failed[0].name}", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=float, default=None,
                        help="agreement tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--placements", type=int, default=3,
                        help="oracle arrangement placements")

    p = argparse.ArgumentParser(
        prog="boundary-ising",
        description="Boundary spin correlations of critical Ising regions.",
        epilog=REGION_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("correlations", parents=[common], help="correlation matrix of a region",
                       epilog=REGION_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    c.add_argument("region")
    c.add_argument("--basis", choices=correlate.BASES, default="auto",
                   help="auto picks fourier, or derivative for alternating regions")
    c.add_argument("--samples", help="comma-separated sample points t1,t2,... in [0, pi)")
    c.set_defaults(func=cmd_correlations)

    g = sub.add_parser("regular", parents=[common], help="regular 2n-gon, first row")
    g.add_argument("n", type=int)
    g.add_argument("--mode", choices=("closed", "pipeline"), default="closed")
    g.add_argument("--basis", choices=correlate.BASES, default="fourier")
    g.set_defaults(func=cmd_regular)

    o = sub.add_parser("oracle", parents=[common], help="exact enumeration vs formula",
                       epilog=REGION_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    o.add_argument("region")
    o.set_defaults(func=cmd_oracle)

    lim = sub.add_parser("limit", parents=[common], help="convergence to 1/sin(pi x)")
    lim.add_argument("x", type=float)
    lim.add_argument("--n", default="64,128,256,512", help="ascending comma-separated sizes")
    lim.set_defaults(func=cmd_limit)

    ch = sub.add_parser("check", parents=[common], help="run the invariant suite",
                        epilog=REGION_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    ch.add_argument("region")
    ch.set_defaults(func=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, RegionError, ValueError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
