"""Run the thicken/quotient iteration on a cycle and print a per-step summary."""

from __future__ import annotations

import argparse
import time

from fibercox.config import PipelineConfig
from fibercox.pipeline import run_pipeline


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--cycle", type=int, default=5)
    p.add_argument("--iterations", type=int, default=2)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for chain.json and per-level complexes")
    args = p.parse_args()

    cfg = PipelineConfig(cycle=args.cycle, iterations=args.iterations, samples=args.samples,
                         seed=args.seed, out_dir=args.out)
    t0 = time.perf_counter()
    chain = run_pipeline(cfg)
    for it in chain.to_json()["iterations"]:
        print(f"level {it['level']}: {it['status']}")
        for name, step in it["steps"].items():
            extra = step.get("value", step.get("vertices", step.get("f_vector", "")))
            print(f"  {name:22s} {step.get('status', '-'):10s} {extra}")
    print(f"chain: {chain.status} (exit {chain.exit_code}) in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
