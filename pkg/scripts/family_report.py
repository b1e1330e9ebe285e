"""Thickened-cycle generator counts and abelianization orders for a range of k."""

from __future__ import annotations

import argparse

from fibercox.pipeline import distinct_family_report


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ks", type=int, nargs="+", default=list(range(5, 13)))
    args = p.parse_args()
    rep = distinct_family_report(args.ks)
    print(f"{'k':>3} {'|V|':>5} {'k(k-3)':>7} {'log2 |ab|':>10}")
    for r in rep["rows"]:
        print(f"{r['k']:>3} {r['generators']:>5} {r['expected']:>7} {r['abelianization_order'].bit_length() - 1:>10}")
    print("pairwise distinct:", rep["pairwise_distinct"])


if __name__ == "__main__":
    main()
