"""Command-line entry point: ``fibercox <command> ...``.

Exit status: 0 on success, 2 when a certificate is refused, 1 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .complexes import Graph, SimplicialComplex
from .config import PipelineConfig
from .cubical import CubeComplex, graph_complex
from .davis import level2_quotient, racg_from_complex, racg_from_graph, verify_quotient_properties
from .errors import FibercoxError, PreconditionError
from .homology import vcd_racg
from .lemmas import run_lemma_suite
from .moves import canonical_moves, canonical_state, certify_legal_by_hypotheses, check_legal_orbit
from .pipeline import base_properties, distinct_family_report, dumps, run_pipeline
from .thickening import ImplicitPairThickening, Thickening, build_pair_thickening

OK, USAGE, REFUSED = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object")
    return data


def load(path: str):
    """Detect the object type from its keys."""
    data = _read(path)
    try:
        if "base" in data and "alpha" in data:
            return Thickening.from_json(data)
        if "cubes" in data:
            return CubeComplex.from_json(data)
        if "facets" in data:
            return SimplicialComplex.from_json(data)
        if "edges" in data:
            return Graph.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from exc
    raise UsageError(f"{path}: not a cube complex, simplicial complex, graph or thickening")


def load_cube_complex(path: str) -> CubeComplex:
    obj = load(path)
    if isinstance(obj, Graph):
        return graph_complex(obj)
    if isinstance(obj, CubeComplex):
        return obj
    raise UsageError(f"{path}: expected a cube complex or a graph")


def load_flag_complex(path: str) -> SimplicialComplex:
    obj = load(path)
    if isinstance(obj, Graph):
        return SimplicialComplex.from_graph(obj)
    if isinstance(obj, Thickening):
        return obj.complex
    if isinstance(obj, SimplicialComplex):
        return obj
    raise UsageError(f"{path}: expected a simplicial complex, graph or thickening")


def emit(data, out: str | None) -> None:
    text = dumps(data)
    if out:
        try:
            with open(out, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc.strerror}") from exc
    else:
        print(text)


# ----------------------------------------------------------------------------
# commands


def cmd_thicken(args) -> int:
    X = load_cube_complex(args.complex)
    T, _ = build_pair_thickening(X, threshold=args.implicit_threshold)
    if isinstance(T, ImplicitPairThickening):
        emit({"stats": T.stats()}, args.out)
    else:
        emit(T.to_json(), args.out)
    return OK


def cmd_check_legal(args) -> int:
    X = load_cube_complex(args.complex)
    cert = certify_legal_by_hypotheses(X, seed=args.seed)
    out = {"certificate": cert.to_json()}
    if cert.granted or args.exhaustive or args.samples:
        try:
            T, _ = build_pair_thickening(X, threshold=1 << 30)
        except PreconditionError as exc:
            out["orbit"] = {"skipped": str(exc)}
            emit(out, args.out)
            return REFUSED
        mode = "exhaustive" if args.exhaustive else ("sampled" if args.samples else "auto")
        rep = check_legal_orbit(T.complex.graph(), canonical_moves(T), canonical_state(T), mode=mode,
                                samples=args.samples or 10_000, orbit_budget=args.orbit_budget, seed=args.seed)
        out["orbit"] = rep.to_json()
        if rep.illegal:
            emit(out, args.out)
            return REFUSED
    emit(out, args.out)
    return OK if cert.granted else REFUSED


def cmd_vcd(args) -> int:
    L = load_flag_complex(args.complex)
    res = vcd_racg(L, args.coeffs, budget=args.cell_budget)
    emit(res.to_json(), args.out)
    return OK


def cmd_davis_quotient(args) -> int:
    if args.graph:
        obj = load(args.graph)
        if not isinstance(obj, Graph):
            raise UsageError(f"{args.graph}: expected a graph")
        G = racg_from_graph(obj)
    else:
        G = racg_from_complex(load_flag_complex(args.complex))
    Q = level2_quotient(G, budget=args.cell_budget)
    rep = verify_quotient_properties(Q, coeffs=args.coeffs, seed=args.seed, budget=args.cell_budget)
    data = Q.to_json()
    data["properties"] = rep.to_json()
    emit(data, args.out)
    return OK if rep.passed else REFUSED


def cmd_verify_properties(args) -> int:
    X = load_cube_complex(args.complex)
    cfg = PipelineConfig(cell_budget=args.cell_budget, seed=args.seed, coeffs=args.coeffs)
    rec, _ = base_properties(X, args.level, cfg)
    emit(rec, args.out)
    return OK if rec["status"] == "certified" else REFUSED


def cmd_pipeline(args) -> int:
    cfg = PipelineConfig(
        cycle=None if args.complex else args.cycle,
        complex_path=args.complex,
        iterations=args.iterations,
        cell_budget=args.cell_budget,
        orbit_budget=args.orbit_budget,
        samples=args.samples or 200,
        exhaustive=args.exhaustive,
        seed=args.seed,
        coeffs=args.coeffs,
        out_dir=args.out,
    )
    chain = run_pipeline(cfg)
    if args.out is None:
        print(dumps(chain.to_json()))
    else:
        print(dumps({"status": chain.status, "exit_code": chain.exit_code, "out": args.out}))
    return chain.exit_code


def cmd_lemma_suite(args) -> int:
    obj = load(args.complex)
    if isinstance(obj, Graph):
        obj = SimplicialComplex.from_graph(obj)
    elif isinstance(obj, CubeComplex):
        obj, _ = build_pair_thickening(obj, threshold=1 << 30)
    rep = run_lemma_suite(obj, args.level, seed=args.seed)
    emit(rep.to_json(), args.out)
    return OK if rep.passed else REFUSED


def cmd_family_report(args) -> int:
    rep = distinct_family_report(args.ks)
    emit(rep, args.out)
    return OK if rep["pairwise_distinct"] and rep["all_match"] else REFUSED


# ----------------------------------------------------------------------------


def _coeffs(s: str) -> str:
    m = {"z": "Z", "q": "Q", "gf2": "GF2", "f2": "GF2", "z2": "GF2"}
    if s.lower() not in m:
        raise argparse.ArgumentTypeError("coefficients must be one of z, q, gf2")
    return m[s.lower()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fibercox", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, complex_required=True):
        if complex_required:
            sp.add_argument("--complex", required=True, help="input JSON")
        sp.add_argument("--out", help="write JSON here instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--coeffs", type=_coeffs, default="Z", help="z, q or gf2")
        sp.add_argument("--cell-budget", type=int, default=10**7)

    sp = sub.add_parser("thicken", help="build the pair thickening of a cube complex")
    common(sp)
    sp.add_argument("--implicit-threshold", type=int, default=5000)
    sp.set_defaults(func=cmd_thicken)

    sp = sub.add_parser("check-legal", help="certify legality of the canonical moves")
    common(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--samples", type=int)
    sp.add_argument("--orbit-budget", type=int, default=1 << 20)
    sp.set_defaults(func=cmd_check_legal)

    sp = sub.add_parser("vcd", help="vcd of the RACG of a flag complex")
    common(sp)
    sp.set_defaults(func=cmd_vcd)

    sp = sub.add_parser("davis-quotient", help="level-2 quotient of the Davis complex")
    common(sp, complex_required=False)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph")
    g.add_argument("--complex")
    sp.set_defaults(func=cmd_davis_quotient)

    sp = sub.add_parser("verify-properties", help="5-largeness, corners, disconnecting cubes, cd")
    common(sp)
    sp.add_argument("--level", type=int)
    sp.set_defaults(func=cmd_verify_properties)

    sp = sub.add_parser("pipeline", help="run the iteration and emit the certificate chain")
    common(sp, complex_required=False)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--cycle", type=int, default=5)
    g.add_argument("--complex")
    sp.add_argument("--iterations", type=int, default=1)
    sp.add_argument("--orbit-budget", type=int, default=1 << 20)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--exhaustive", action="store_true")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("lemma-suite", help="local structure checks on a thickening")
    common(sp)
    sp.add_argument("--level", type=int, required=True)
    sp.set_defaults(func=cmd_lemma_suite)

    sp = sub.add_parser("family-report", help="generator counts for cycles of several lengths")
    sp.add_argument("--ks", type=int, nargs="+", default=[5, 6, 7, 8])
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_family_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, PreconditionError) as exc:
        print(f"fibercox: {exc}", file=sys.stderr)
        return USAGE
    except FibercoxError as exc:
        print(f"fibercox: {exc}", file=sys.stderr)
        return REFUSED


if __name__ == "__main__":
    sys.exit(main())
