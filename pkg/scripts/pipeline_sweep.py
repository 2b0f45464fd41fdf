"""Run the full pipeline over a grid of (group, I, n_I) and tabulate the outcomes.

    python3 scripts/pipeline_sweep.py --groups A1,A2,A3 --max-n 2 --out sweep.jsonl

Every report is written as one JSON line; a summary table goes to stdout.
"""

from __future__ import annotations

import argparse
import itertools
import json
import time
from dataclasses import dataclass

from kleinquiver import mckay as mk
from kleinquiver.pipeline import SearchSettings, run_pipeline


@dataclass
class SweepConfig:
    groups: tuple[str, ...] = ("A1", "A2", "A3", "D4")
    max_n: int = 2
    max_I: int = 2
    seed: int = 0
    restarts: int = 16
    out: str | None = None


def cases(cfg: SweepConfig):
    for label in cfg.groups:
        data = mk.mckay(label)
        for size in range(1, min(cfg.max_I, len(data.vertices)) + 1):
            for I in itertools.combinations(data.vertices, size):
                for n_I in itertools.product(range(cfg.max_n + 1), repeat=size):
                    yield label, I, n_I


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--groups", default=",".join(SweepConfig.groups))
    parser.add_argument("--max-n", type=int, default=SweepConfig.max_n)
    parser.add_argument("--max-I", type=int, default=SweepConfig.max_I)
    parser.add_argument("--seed", type=int, default=SweepConfig.seed)
    parser.add_argument("--restarts", type=int, default=SweepConfig.restarts)
    parser.add_argument("--out")
    args = parser.parse_args(argv)
    cfg = SweepConfig(tuple(args.groups.split(",")), args.max_n, args.max_I, args.seed, args.restarts, args.out)
    settings = SearchSettings(seed=cfg.seed, restarts=cfg.restarts)

    sink = open(cfg.out, "w") if cfg.out else None
    print(f"{'group':<6}{'I':<10}{'n_I':<10}{'v_prime':<20}{'v_tilde':<20}{'quiver':<10}{'A_I':<10}{'viol':>5}{'sec':>7}")
    totals = {"runs": 0, "nonempty": 0, "violations": 0}
    try:
        for label, I, n_I in cases(cfg):
            start = time.perf_counter()
            report = run_pipeline(label, I, n_I, settings)
            elapsed = time.perf_counter() - start
            vt = report["v_tilde"].get("dims")
            vt_text = str(tuple(vt["values"])) if vt else report["v_tilde"]["status"]
            ne = report["nonemptiness"]
            nviol = len(report["invariant_violations"])
            totals["runs"] += 1
            totals["nonempty"] += ne["quiver_variety"] == "nonempty"
            totals["violations"] += nviol
            print(
                f"{label:<6}{str(list(I)):<10}{str(list(n_I)):<10}"
                f"{str(tuple(report['v_prime']['dims']['values'])):<20}{vt_text:<20}"
                f"{ne['quiver_variety']:<10}{ne['moduli_A_I']:<10}{nviol:>5}{elapsed:>7.2f}"
            )
            if sink:
                sink.write(json.dumps(report, sort_keys=True) + "\n")
    finally:
        if sink:
            sink.close()
    print(json.dumps(totals))
    return 0 if totals["violations"] == 0 else 2


if __name__ == "__main__":
    raise SystemExit(main())
