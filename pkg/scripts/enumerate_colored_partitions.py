"""Count Z/m-colored Young diagrams by content, independently of the library.

Diagrams are grown as down-closed cell sets in N^2 by adding one addable cell at a
time (so each diagram is reached many times and deduplicated). The cell (a, b)
has color (a - b) mod m.

    python3 scripts/enumerate_colored_partitions.py --out tests/data/colored_partition_counts.json
"""

import argparse
import json
from collections import Counter


def diagrams(n: int) -> set[frozenset]:
    level = {frozenset()}
    for _ in range(n):
        nxt = set()
        for cells in level:
            for a in range(len(cells) + 1):
                for b in range(len(cells) + 1):
                    if (a, b) in cells:
                        continue
                    left_ok = a == 0 or (a - 1, b) in cells
                    below_ok = b == 0 or (a, b - 1) in cells
                    if left_ok and below_ok:
                        nxt.add(cells | {(a, b)})
        level = nxt
    return level


def counts(m: int, n: int) -> Counter:
    out = Counter()
    for cells in diagrams(n):
        colors = [0] * m
        for a, b in cells:
            colors[(a - b) % m] += 1
        out[tuple(colors)] += 1
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=6)
    parser.add_argument("--out")
    args = parser.parse_args()
    table = {}
    for m in (2, 3):
        for n in range(args.max_n + 1):
            for content, count in sorted(counts(m, n).items()):
                table.setdefault(str(m), []).append({"n": n, "content": list(content), "count": count})
    text = json.dumps(table, indent=1, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text)


if __name__ == "__main__":
    main()
