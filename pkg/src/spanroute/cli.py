"""Command-line front end: run every policy of a scenario and write CSV results."""
from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .errors import SpanrouteError
from .graph import enumerate_paths
from .scenario import Scenario, dump_scenario, parse_scenario
from .sim import ExperimentConfig, brute_force_best_path, log_checkpoints, replicate
from .spanner import build_spanner

log = logging.getLogger("spanroute")

CSV_HEADER = "t,mean_cum_regret,std_cum_regret,replications,policy"
SEED_ENV = "SPANROUTE_SEED"


def format_csv(result) -> str:
    lines = [CSV_HEADER]
    for t, mu, sd, reps, name in result.rows():
        lines.append(f"{t},{mu:.12e},{sd:.12e},{reps},{name}")
    return "\n".join(lines) + "\n"


def _actions(scenario: Scenario):
    if scenario.network is not None:
        paths = enumerate_paths(scenario.network)
        labels = [" ".join(str(e) for e in p.edges) for p in paths]
        return paths.matrix, paths.dimension, labels
    A = np.array(scenario.actions, dtype=float)
    return A, int(np.linalg.matrix_rank(A)), [" ".join(f"{x:g}" for x in row) for row in A]


def _label(labels, i):
    return f"{i} ({labels[i]})"


def _write_atomically(files: dict[Path, str]) -> None:
    """Write every file to a temporary sibling first, then rename all of them."""
    temps = []
    try:
        for path, text in files.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            temps.append((tmp, path))
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        for tmp, path in temps:
            os.replace(tmp, path)
    except BaseException:
        for tmp, _ in temps:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise


def run_command(scenario: Scenario, jobs: int = 1, checkpoints=None) -> int:
    A, d, labels = _actions(scenario)
    cps = checkpoints or scenario.checkpoints or log_checkpoints(scenario.horizon)
    spanner = build_spanner(A, d)
    best, gap = brute_force_best_path(A, scenario.model)

    files = {}
    summary = [
        f"actions: {len(A)}  coordinates: {A.shape[1]}  dimension d: {d}",
        f"horizon: {scenario.horizon}  replications: {len(scenario.seeds)}  seeds: {scenario.seeds[0]}..{scenario.seeds[-1]}",
        f"spanner basis ids: {list(spanner.basis_ids)}",
        f"best action by exact means: {_label(labels, best)}  gap to second: {gap:.12g}",
        "",
        "policy  final_t  mean_cum_regret  std_cum_regret  empirical_best (episodes)",
    ]
    for spec in scenario.policies:
        log.info("running %s over %d seeds", spec.name, len(scenario.seeds))
        config = ExperimentConfig(A, scenario.model, spec, scenario.horizon)
        result = replicate(config, scenario.seeds, jobs=jobs, checkpoints=cps)
        files[Path(f"{scenario.output}_{spec.name}.csv")] = format_csv(result)
        top = max(result.empirical_best.items(), key=lambda kv: (kv[1], -kv[0]))
        summary.append(
            f"{spec.name}  {int(result.checkpoints[-1])}  {result.mean[-1]:.12g}  {result.std[-1]:.12g}  "
            f"{_label(labels, top[0])} ({top[1]}/{result.replications})"
        )
    files[Path(f"{scenario.output}_summary.txt")] = "\n".join(summary) + "\n"
    _write_atomically(files)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spanroute", description=__doc__)
    parser.add_argument("--scenario", required=True, help="scenario file")
    parser.add_argument("--validate-only", action="store_true", help="print the resolved scenario and exit")
    parser.add_argument("--jobs", type=int, default=1, help="parallel replications")
    parser.add_argument("--checkpoints", help="comma-separated checkpoint times (default: log-spaced)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        scenario = parse_scenario(args.scenario)
        if os.environ.get(SEED_ENV):
            scenario = scenario.with_base_seed(int(os.environ[SEED_ENV]))
        checkpoints = None
        if args.checkpoints:
            checkpoints = sorted({int(x) for x in args.checkpoints.split(",") if x.strip()})
            if not checkpoints or checkpoints[0] < 1 or checkpoints[-1] > scenario.horizon:
                raise ValueError("--checkpoints must lie in 1..horizon")
        if args.jobs < 1:
            raise ValueError("--jobs must be >= 1")
        if args.validate_only:
            sys.stdout.write(dump_scenario(scenario))
            return 0
        return run_command(scenario, jobs=args.jobs, checkpoints=checkpoints)
    except (SpanrouteError, ValueError, OSError) as e:
        print(f"spanroute: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
