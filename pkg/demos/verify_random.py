"""Verify a handful of random projective structures and print a one-line summary each.

    python demos/verify_random.py [n] [count]
"""

import sys
import time

from fefferman_lab.verify import FeffermanData, VERIFY_SUITES, random_projective, verify_structure


def main(argv):
    n = int(argv[1]) if len(argv) > 1 else 2
    count = int(argv[2]) if len(argv) > 2 else 3
    for seed in range(1, count + 1):
        t = time.perf_counter()
        report = verify_structure(FeffermanData(random_projective(n, seed)), VERIFY_SUITES)
        bad = ", ".join(c.name for c in report.failures()) or "none"
        print("n=%d seed=%d  %d checks  failures: %s  (%.1f s)"
              % (n, seed, len(report.checks), bad, time.perf_counter() - t))


if __name__ == "__main__":
    main(sys.argv)
