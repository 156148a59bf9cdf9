#!/usr/bin/env python3
"""Measure how answer consumption scales on the string-matcher family.

With the new-answers-only gate (plus early promotion) the tabled matcher
is linear in the string length; with the gate off, or with the recursion
routed through a non-tabled helper, it is quadratic. Doubling n should
double (resp. quadruple) answers_consumed.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import lintab.corpus as corpus
from lintab import EngineOptions, load_program, run_query

CONFIGS = [
    ("tabled, gate on, early promotion", True, dict(semi_naive=True, early_promotion=True)),
    ("tabled, gate on, no promotion", True, dict(semi_naive=True, early_promotion=False)),
    ("tabled, gate off", True, dict(semi_naive=False, early_promotion=False)),
    ("non-tabled helper, gate on", False, dict(semi_naive=True, early_promotion=True)),
]


def measure(n, tabled, options):
    text, query = corpus.string_matcher_program(n, tabled_step=tabled)
    t0 = time.monotonic()
    _, eng = run_query(load_program(text), query, EngineOptions(**options))
    return eng.stats.answers_consumed, time.monotonic() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="*", default=[100, 200, 400, 800])
    args = ap.parse_args()

    for label, tabled, options in CONFIGS:
        print(f"== {label}")
        prev = None
        for n in args.sizes:
            consumed, dt = measure(n, tabled, options)
            ratio = "" if prev is None else f"  ratio={consumed / prev:.2f}"
            print(f"  n={n:5d}  answers_consumed={consumed:8d}  time={dt:6.2f}s{ratio}")
            prev = consumed
        print()


if __name__ == "__main__":
    main()
