"""How often does a numeric solver point become an exact certificate?

For each (group, v) the solver is started from several seeds with theta_I, I = {0}.
Found points go through exact completion; the table reports how many completed
by plain rounding, how many needed entry-by-entry pinning, and how many failed.

    python3 scripts/exact_completion_rate.py --seeds 8
"""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass

from kleinquiver import mckay as mk
from kleinquiver import stability as st
from kleinquiver.pipeline import RationalizationFailed, rationalize_and_verify, solve_moment_map

CASES = (
    ("A1", (1, 1)),
    ("A1", (2, 1)),
    ("A1", (2, 2)),
    ("A2", (2, 1, 1)),
    ("A3", (2, 1, 1, 1)),
    ("D4", (2, 1, 2, 1, 1)),
)


@dataclass
class RateConfig:
    seeds: int = 6
    restarts: int = 16


def outcome(label, dims, seed, cfg: RateConfig) -> str:
    data = mk.mckay(label)
    v = st.DimVector(dims, 1)
    theta = st.theta_I(data, [0], v)
    res = solve_moment_map(mk.frame(data), v, theta, seed=seed, restarts=cfg.restarts, group=label)
    if not res.found:
        return "not_found"
    try:
        cert = rationalize_and_verify(res.rep, theta)
    except RationalizationFailed:
        return "failed"
    return "pinned" if cert.notes.get("pinned_entries") else "rounded"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=RateConfig.seeds)
    parser.add_argument("--restarts", type=int, default=RateConfig.restarts)
    args = parser.parse_args(argv)
    cfg = RateConfig(args.seeds, args.restarts)
    print(f"{'group':<6}{'v':<18}{'rounded':>8}{'pinned':>8}{'failed':>8}{'not_found':>10}")
    for label, dims in CASES:
        counts = Counter(outcome(label, dims, s, cfg) for s in range(cfg.seeds))
        print(
            f"{label:<6}{str(dims):<18}{counts['rounded']:>8}{counts['pinned']:>8}"
            f"{counts['failed']:>8}{counts['not_found']:>10}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
