"""Cross-check the search engine against exhaustive enumeration.

Generates small random problems (tiny ontologies, at most two added
activities and three added messages), solves each with the search and
with the brute-force enumerator, and compares the solution sets up to
renaming of added objects.

    python3 demos/oracle_check.py [count]
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

from wfcompose import enumerate_solutions
from wfcompose.canonical import canonical_key
from wfcompose.oracle import brute_force

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from generators import random_problem  # noqa: E402


def main(count: int):
    t0 = time.perf_counter()
    sat = mismatched = 0
    for seed in range(count):
        p = random_problem(random.Random(seed))
        found = {canonical_key(s.graph) for s in enumerate_solutions(p)}
        expected = set(brute_force(p))
        sat += bool(expected)
        if found != expected:
            mismatched += 1
            print(f"seed {seed}: search {len(found)} vs oracle {len(expected)}")
    print(f"{count} problems, {sat} satisfiable, {mismatched} mismatches, "
          f"{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 20)
