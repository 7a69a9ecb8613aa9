"""Command-line front end: ``equitynet equilibrium|optimize|sweep|verify``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 solver error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import re
import sys
from typing import Callable

import numpy as np

from .equilibrium import EquityAllocation, solve_equilibrium
from .errors import EquityNetError, InvalidInputError
from .network import WeightedNetwork, load_network
from .objective import SweepPoint, optimize, sweep
from .success_model import SuccessModel, model_from_config
from .verify import CRITERIA, run_criterion

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3

SWEEP_HELP = """\
CSV columns, in order: param, sigma_0..sigma_{n-1}, U_0..U_{n-1}, Y, c, s,
active_mask (bit i set when agent i is active). Failed points are written as
NaN rows and reported on stderr.
"""

log = logging.getLogger("equitynet")


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from exc


def _load(args) -> tuple[WeightedNetwork, SuccessModel]:
    try:
        net = load_network(args.network)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {args.network}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{args.network} is not valid JSON: {exc}") from exc
    return net, model_from_config(_read_json(args.model))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _threads() -> int:
    raw = os.environ.get("EQUITYNET_THREADS", "")
    if not raw:
        return min(4, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise InvalidInputError(f"EQUITYNET_THREADS must be an integer, got {raw!r}") from exc


def cmd_equilibrium(args) -> int:
    net, model = _load(args)
    raw = _read_json(args.shares)
    if not isinstance(raw, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw):
        raise InvalidInputError("shares file must be a JSON array of numbers")
    if len(raw) != net.n:
        raise InvalidInputError(f"shares file has {len(raw)} entries for {net.n} agents")
    result = solve_equilibrium(net, model, EquityAllocation(np.array(raw, dtype=float)))
    _emit(json.dumps(result.to_json(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    net, model = _load(args)
    contract = optimize(net, model, args.objective, max_n_enum=args.max_n_enum)
    _emit(json.dumps(contract.to_json(), indent=2) + "\n", args.out)
    return EXIT_OK


_LINK = re.compile(r"^link\((\d+),\s*(\d+)\)$")


def sweep_builder(param: str, net: WeightedNetwork, model: SuccessModel) -> Callable[[float], tuple]:
    if param == "beta":
        return lambda v: (net, model.with_beta(v))
    m = _LINK.match(param.strip())
    if not m:
        raise InvalidInputError(f"--param must be 'beta' or 'link(i,j)', got {param!r}")
    i, j = int(m.group(1)), int(m.group(2))
    if i == j or max(i, j) >= net.n:
        raise InvalidInputError(f"link({i},{j}) is not a valid link for n={net.n}")
    return lambda v: (net.with_weight(i, j, v), model)


def parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise InvalidInputError(f"--range must look like LO:HI, got {text!r}") from exc
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise InvalidInputError(f"--range needs finite LO <= HI, got {text!r}")
    return lo, hi


def sweep_csv(points: list[SweepPoint], n: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param", *(f"sigma_{i}" for i in range(n)), *(f"U_{i}" for i in range(n)),
                     "Y", "c", "s", "active_mask"])
    for p in points:
        if p.contract is None:
            print(f"warning: point {p.value!r} failed: {p.error}", file=sys.stderr)
            writer.writerow([repr(p.value), *(["nan"] * (2 * n + 4))])
            continue
        c = p.contract
        writer.writerow([
            repr(p.value),
            *(repr(float(v)) for v in c.shares),
            *(repr(float(v)) for v in c.equilibrium.agent_payoffs),
            repr(c.equilibrium.performance), repr(c.c), repr(c.s_star),
            sum(1 << i for i in c.active_set),
        ])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    net, model = _load(args)
    lo, hi = parse_range(args.range)
    if args.steps < 1:
        raise InvalidInputError("--steps must be positive")
    values = [lo] if lo == hi or args.steps == 1 else list(np.linspace(lo, hi, args.steps))
    build = sweep_builder(args.param, net, model)
    points = sweep(build, values, args.objective, workers=_threads(), max_n_enum=args.max_n_enum)
    _emit(sweep_csv(points, net.n), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    picks = range(1, len(CRITERIA) + 1) if not args.only else sorted({int(v) for v in args.only.split(",")})
    failed = 0
    for k in picks:
        if not 1 <= k <= len(CRITERIA):
            raise InvalidInputError(f"no criterion {k}")
        res = run_criterion(k, seed=args.seed)
        print(res.line(), flush=True)
        failed += not res.passed
    print(f"{len(picks) - failed}/{len(picks)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equitynet", description="Optimal equity contracts on networks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, objective=True):
        p.add_argument("--network", required=True, help="network JSON ({n, edges} or {n, matrix})")
        p.add_argument("--model", required=True, help="success-model JSON")
        if objective:
            p.add_argument("--objective", choices=["rp", "sp"], default="sp")
            p.add_argument("--max-n-enum", type=int, default=16, help="exhaustive search cap")
        p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("equilibrium", help="Nash equilibrium for given shares")
    common(p, objective=False)
    p.add_argument("--shares", required=True, help="JSON array of n shares")
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("optimize", help="optimal contract")
    common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="re-optimise over a parameter range, CSV out",
                       epilog=SWEEP_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    common(p)
    p.add_argument("--param", required=True, help="'beta' or 'link(i,j)'")
    p.add_argument("--range", required=True, help="LO:HI")
    p.add_argument("--steps", type=int, default=50)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EquityNetError as exc:
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
