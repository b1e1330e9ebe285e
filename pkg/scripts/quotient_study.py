"""Check the level-2 quotient of RACG(T(C_k)) for the properties the next
thickening needs, and report which one fails."""

from __future__ import annotations

import argparse
import time

from fibercox.cubical import cycle_complex
from fibercox.davis import level2_quotient, racg_from_complex, verify_quotient_properties
from fibercox.thickening import build_pair_thickening


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ks", type=int, nargs="+", default=[5, 6])
    args = p.parse_args()
    for k in args.ks:
        t0 = time.perf_counter()
        T, _ = build_pair_thickening(cycle_complex(k))
        Q = level2_quotient(racg_from_complex(T.complex))
        rep = verify_quotient_properties(Q, expected_cd=2)
        c = rep.checks
        print(f"k={k} f={Q.complex.f_vector()} cd={c['cd']} 5-large={c['five_large']['status']} "
              f"embedding={c['two_neighborhood_embedding']['injective']} "
              f"inductive={rep.inductive_input} ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
