"""Suite execution and report emission.

A suite config is JSON of the form

    {"checks": [{"id": "...", "params": {...}, "repetitions": 1, "seed": 7}],
     "caps": {"max_runtime_hint_s": 600}}

Per-check seeds default to a value derived from the global seed and the
check's position, so one --seed reproduces the whole run.  The JSON
report contains only deterministic fields (identical config + seed gives
byte-identical files); wall-clock timings go to the CSV report only.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .checks import CHECK_IDS, run_check

SCHEMA_VERSION = 1

SUITES: dict[str, dict] = {
    "quick": {
        "checks": [
            {"id": "b1-exhaustive-flat",
             "params": {"ns": [3], "ms": [1], "families": ["field"], "sides": ["trivial"]}},
            {"id": "parseval-random", "params": {"count": 20}},
            {"id": "bound-ordering", "params": {"count": 200}},
        ],
    },
    "paper-table-1": {
        "checks": [
            {"id": "b1-exhaustive-flat",
             "params": {"ns": [3], "ms": [1, 2], "families": ["field", "shift"],
                        "sides": ["trivial", "classical_leak"]}},
            {"id": "b1-quantum-product", "params": {"count": 40, "n_max": 4}},
            {"id": "b8-weak-quantum", "params": {"count": 20, "n_max": 4}},
            {"id": "b2-markov", "params": {"count": 24, "n_max": 3}},
            {"id": "markov-cmi", "params": {"count": 30}},
            {"id": "ip-classical", "params": {"ns": [2, 3]}},
            {"id": "measured-xor-random", "params": {"count": 150}},
            {"id": "useful-prop-random", "params": {"count": 150}},
            {"id": "bound-ordering", "params": {"count": 2000}},
        ],
    },
    "full": {
        "checks": [
            {"id": "parseval-random", "params": {"count": 100}},
            {"id": "b1-exhaustive-flat",
             "params": {"ns": [3, 4], "ms": [1, 2], "families": ["field", "shift"],
                        "sides": ["trivial", "classical_leak"]}},
            {"id": "b1-quantum-product", "params": {"count": 200, "n_max": 5}},
            {"id": "b8-weak-quantum", "params": {"count": 50}},
            {"id": "b2-markov", "params": {"count": 40, "n_max": 4}},
            {"id": "markov-cmi", "params": {"count": 100}},
            {"id": "ip-classical", "params": {"ns": [2, 3, 4]}},
            {"id": "measured-xor-random", "params": {"count": 1000}},
            {"id": "useful-prop-random", "params": {"count": 1000}},
            {"id": "pgm-commutation", "params": {"count": 200}},
            {"id": "hmin-linear-drop", "params": {}},
            {"id": "hmin-le-h2", "params": {"count": 500}},
            {"id": "one-two-norm", "params": {"count": 500}},
            {"id": "bound-ordering", "params": {"count": 10000}},
        ],
    },
}

SUITE_NAMES = tuple(sorted(SUITES))


def load_config(suite: str) -> dict:
    """Resolve a suite name or JSON config path to a config dict."""
    if suite in SUITES:
        return {"name": suite, **SUITES[suite]}
    path = Path(suite)
    if not path.exists():
        raise ValueError(f"unknown suite {suite!r} and no such config file; "
                         f"built-in suites: {', '.join(SUITE_NAMES)}")
    try:
        config = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict) or "checks" not in config:
        raise ValueError(f"config {path} must be an object with a 'checks' list")
    for entry in config["checks"]:
        if not isinstance(entry, dict) or "id" not in entry:
            raise ValueError("every check entry needs an 'id'")
        if entry["id"] not in CHECK_IDS:
            raise ValueError(f"unknown check id {entry['id']!r}")
    config.setdefault("name", path.stem)
    return config


@dataclass(frozen=True)
class SuiteResult:
    name: str
    seed: int
    reports: list
    all_pass: bool
    summary: dict


def run_suite(config: dict, seed: int = 0, jobs: int = 1) -> SuiteResult:
    entries = config["checks"]

    def run_entry(pos_entry):
        pos, entry = pos_entry
        entry_seed = entry.get("seed")
        if entry_seed is None:
            entry_seed = (seed * 1000003 + pos) & 0x7FFFFFFF
        cfg = {"params": entry.get("params", {}),
               "seed": entry_seed,
               "repetitions": entry.get("repetitions", 1)}
        return run_check(entry["id"], cfg)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(run_entry, enumerate(entries)))
    else:
        chunks = [run_entry(item) for item in enumerate(entries)]
    reports = [r for chunk in chunks for r in chunk]
    reports.sort(key=lambda r: (r.check_id, r.scenario, r.bound_id))
    all_pass = all(r.passed for r in reports)
    summary = _summarize(reports)
    return SuiteResult(name=config.get("name", "custom"), seed=seed,
                       reports=reports, all_pass=all_pass, summary=summary)


def _summarize(reports) -> dict:
    ratios: dict[str, float] = {}
    failed = 0
    for r in reports:
        if not r.passed:
            failed += 1
        if r.bound_epsilon > 0:
            ratio = r.measured_delta / r.bound_epsilon
            ratios[r.bound_id] = max(ratios.get(r.bound_id, 0.0), ratio)
    return {
        "n_reports": len(reports),
        "n_failed": failed,
        "max_ratio_by_bound": {k: ratios[k] for k in sorted(ratios)},
    }


def render_json(result: SuiteResult) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "suite": result.name,
        "seed": result.seed,
        "all_pass": result.all_pass,
        "summary": result.summary,
        "reports": [
            {
                "check_id": r.check_id,
                "bound_id": r.bound_id,
                "params": r.params,
                "measured_delta": r.measured_delta,
                "bound_epsilon": r.bound_epsilon,
                "pass": r.passed,
                "scenario": r.scenario,
                "flags": r.flags,
            }
            for r in result.reports
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


CSV_COLUMNS = ["check_id", "bound_id", "n", "m", "r", "k1", "k2",
               "measured_delta", "bound_epsilon", "pass", "runtime_ms",
               "scenario", "flags"]


def render_csv(result: SuiteResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in result.reports:
        writer.writerow([
            r.check_id, r.bound_id,
            r.params.get("n"), r.params.get("m"), r.params.get("r"),
            repr(r.params.get("k1")), repr(r.params.get("k2")),
            repr(r.measured_delta), repr(r.bound_epsilon),
            r.passed, f"{r.runtime_ms:.3f}",
            r.scenario, json.dumps(r.flags, sort_keys=True),
        ])
    return buf.getvalue()


def write_reports(result: SuiteResult, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "report.json"
    csv_path = out / "report.csv"
    json_path.write_text(render_json(result))
    csv_path.write_text(render_csv(result))
    return json_path, csv_path
