"""Command-line interface.

Subcommands:
  verify   run a verification suite and write JSON/CSV reports
  entropy  evaluate entropies of a scenario description
  extract  evaluate a deor family on one input pair
  family   build and save a matrix family
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .entropies import h2_cond, h_min_classical, h_min_cond
from .extractors import deor_eval
from .cq_states import apply_classical_function, markov_block_state
from .gf2 import (
    build_field_family,
    build_shift_family,
    format_bits,
    parse_bits,
    parse_poly,
    read_family,
    save_family,
)
from .harness import load_config, run_suite, write_reports
from .harness.scenarios import make_flat_source, make_markov_scenario, make_side_info


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extraction-lab",
                                     description="two-source extraction verification lab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", required=True,
                          help="built-in suite name or path to a JSON config")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--out", required=True, help="output directory for reports")
    p_verify.add_argument("--jobs", type=int, default=1)

    p_entropy = sub.add_parser("entropy", help="entropies of a scenario JSON")
    p_entropy.add_argument("--state", required=True, help="scenario description file")

    p_extract = sub.add_parser("extract", help="evaluate a family on one input pair")
    p_extract.add_argument("--family", required=True)
    p_extract.add_argument("--x", required=True, help="first input as a 0/1 string")
    p_extract.add_argument("--y", required=True, help="second input as a 0/1 string")

    p_family = sub.add_parser("family", help="build a matrix family")
    p_family.add_argument("--build", required=True, choices=["field", "shift"])
    p_family.add_argument("--n", type=int, required=True)
    p_family.add_argument("--m", type=int, required=True)
    p_family.add_argument("--poly", help="irreducible polynomial as a 0/1 string, field only")
    p_family.add_argument("--out", required=True)
    return parser


def _cmd_verify(args) -> int:
    config = load_config(args.suite)
    result = run_suite(config, seed=args.seed, jobs=args.jobs)
    json_path, csv_path = write_reports(result, args.out)
    counts: dict[str, list[int]] = {}
    for r in result.reports:
        ok, total = counts.get(r.check_id, (0, 0))
        counts[r.check_id] = (ok + (1 if r.passed else 0), total + 1)
    for check_id in sorted(counts):
        ok, total = counts[check_id]
        status = "pass" if ok == total else "FAIL"
        print(f"{status}  {check_id}: {ok}/{total}")
    print(f"reports: {json_path} {csv_path}")
    print("all checks passed" if result.all_pass else "FAILURES present")
    return 0 if result.all_pass else 1


def _load_scenario(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"scenario file is not valid JSON: {exc}") from exc


def _cmd_entropy(args) -> int:
    scenario = _load_scenario(args.state)
    if "markov" in scenario:
        mk = scenario["markov"]
        scn = make_markov_scenario(int(mk["n"]), int(mk.get("blocks", 2)),
                                   seed=int(mk.get("seed", 0)),
                                   classical=bool(mk.get("classical", False)))
        joint = markov_block_state(scn)
        res1 = h_min_cond(apply_classical_function(joint, lambda sym: sym[0]))
        res2 = h_min_cond(apply_classical_function(joint, lambda sym: sym[1]))
        out = {
            "model": "markov_blocks",
            "side_dim": joint.side_dim,
            "h_min_cond_x1": res1.value,
            "h_min_cond_x2": res2.value,
            "converged": bool(res1.converged and res2.converged),
        }
        print(json.dumps(out, indent=2, sort_keys=True))
        return 0

    if "dist" in scenario:
        dist = {parse_bits(k): float(v) for k, v in scenario["dist"].items()}
    else:
        dist = make_flat_source(int(scenario["n"]), int(scenario["k"]),
                                scenario.get("support", "prefix"),
                                seed=int(scenario.get("seed", 0)))
    side = dict(scenario.get("side_info", {"model": "trivial"}))
    model = side.pop("model", "trivial")
    source = make_side_info(model, dist, seed=int(scenario.get("seed", 0)), **side)
    hmin = h_min_cond(source.state)
    h2 = h2_cond(source.state)
    out = {
        "model": model,
        "side_dim": source.state.side_dim,
        "h_min_classical": h_min_classical({k: v for k, v in dist.items()}),
        "h_min_cond": hmin.value,
        "h_min_converged": bool(hmin.converged),
        "h2_cond": h2.value,
        "certified_k": source.k,
    }
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def _cmd_extract(args) -> int:
    family = read_family(args.family)
    x = parse_bits(args.x)
    y = parse_bits(args.y)
    print(format_bits(deor_eval(family, x, y)))
    return 0


def _cmd_family(args) -> int:
    if args.build == "field":
        poly = parse_poly(args.poly) if args.poly else None
        family = build_field_family(args.n, args.m, poly)
    else:
        family = build_shift_family(args.n, args.m)
    save_family(family, args.out)
    print(f"wrote {args.build} family n={family.n} m={family.m} r={family.r} to {args.out}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "verify": _cmd_verify,
        "entropy": _cmd_entropy,
        "extract": _cmd_extract,
        "family": _cmd_family,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
