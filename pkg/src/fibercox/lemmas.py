"""Executable local-structure checks on a thickening and its base cube complex.

Each check runs over every admissible input (simplex, face pair, cube/vertex pair)
and records the number of cases and any counterexamples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .bitset import iter_bits
from .collapse import collapse
from .complexes import (
    SimplicialComplex,
    combinatorial_ball,
    full_subcomplex,
    link,
    link_simplex_iso_check,
    same_complex,
    sphere_filtration,
)
from .cubical import CubeComplex, cube_link, minimal_cube, vertex_link
from .errors import HypothesisViolation
from .homology import filtration_gluings, link_cd_check, sphere_cd_check
from .thickening import Thickening, link_join_decomposition


@dataclass
class CheckResult:
    checked: int = 0
    failures: list = field(default_factory=list)
    skipped: str | None = None

    def fail(self, case) -> None:
        self.failures.append(case)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        out = {"checked": self.checked, "failures": self.failures[:10], "passed": self.passed}
        if self.skipped:
            out["skipped"] = self.skipped
        return out


@dataclass
class SuiteReport:
    level: int
    results: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def counterexamples(self) -> int:
        return sum(len(r.failures) for r in self.results.values())

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "passed": self.passed,
            "counterexamples": self.counterexamples(),
            "checks": {k: v.to_json() for k, v in self.results.items()},
        }


def _faces(sigma: frozenset):
    items = sorted(sigma)
    for r in range(len(items) + 1):
        for c in itertools.combinations(items, r):
            yield frozenset(c)


def check_cube_links(X: CubeComplex) -> CheckResult:
    """lk(cube) equals the link, inside lk(v), of the simplex of cube edges at v."""
    res = CheckResult()
    for cid in X.cube_ids():
        cube = X.cube(cid)
        for v in cube.vertices:
            res.checked += 1

            near = X.edge_adjacency[X.index[v]]

            def by_neighbor(C, near=near, cube=cube):
                (u,) = [u for u in C.vertices - cube.vertices if near >> X.index[u] & 1]
                return u

            direct = cube_link(X, cube, by_neighbor)
            tau = [u for u in cube.vertices if near >> X.index[u] & 1]
            via = link(vertex_link(X, v), tau)
            if not same_complex(direct, via):
                res.fail({"cube": sorted(cube.vertices), "vertex": v})
    return res


def check_link_of_link(K: SimplicialComplex, simplices) -> CheckResult:
    res = CheckResult()
    for s in simplices:
        for tau in _faces(s):
            res.checked += 1
            if not link_simplex_iso_check(K, s, tau):
                res.fail({"sigma": sorted(s), "tau": sorted(tau)})
    return res


def check_balls(K: SimplicialComplex, simplices, restarts: int = 32, seed: int = 0):
    """Balls collapse to a point, and each ball is the full subcomplex on its vertices."""
    collapsible, full = CheckResult(), CheckResult()
    for s in simplices:
        B = combinatorial_ball(K, s)
        collapsible.checked += 1
        if not collapse(B, restarts=restarts, seed=seed).contractible:
            collapsible.fail({"sigma": sorted(s)})
        full.checked += 1
        if not same_complex(B, full_subcomplex(K, B.vertices)):
            full.fail({"sigma": sorted(s)})
    return collapsible, full


def check_minimal_cubes(Th: Thickening, simplices) -> CheckResult:
    """The minimal cube of alpha(sigma) equals the intersection of all cubes containing it."""
    X = Th.base
    res = CheckResult()
    seen = set()
    for s in simplices:
        img = frozenset(Th.alpha(y) for y in s)
        if img in seen:
            continue
        seen.add(img)
        res.checked += 1
        m = X.mask(img)
        inter = X.full_mask
        for cid in X.cube_ids():
            cm = X.cube_mask(cid)
            if cm & m == m:
                inter &= cm
        try:
            cube = minimal_cube(X, img)
        except HypothesisViolation as exc:
            res.fail({"image": sorted(img), "error": str(exc)})
            continue
        if X.mask(cube.vertices) != inter:
            res.fail({"image": sorted(img), "minimal": sorted(cube.vertices)})
    return res


def check_join_decompositions(Th: Thickening, simplices) -> CheckResult:
    res = CheckResult()
    for s in simplices:
        res.checked += 1
        J = link_join_decomposition(Th, s)
        if not J.holds:
            res.fail({"sigma": sorted(s), "guarantees": J.guarantees})
    return res


def check_filtrations(K: SimplicialComplex, simplices):
    """Classes partition the sphere; distinct classes of equal codimension share no
    edge; each class with its boundary spans the link of its face minus the
    residual simplex, and carries every simplex of its stage that meets it."""
    partition, apart, from_links = CheckResult(), CheckResult(), CheckResult()
    adj = K.adjacency
    for s in simplices:
        F = sphere_filtration(K, s)
        sigma = F.sigma
        partition.checked += 1
        union = set()
        total = 0
        for cls in F.classes.values():
            union |= cls
            total += len(cls)
        if union != set(F.sphere.vertices) or total != len(union) or F.stages[-1] != frozenset(F.sphere.vertices):
            partition.fail({"sigma": sorted(sigma)})
        for i in range(1, len(F.stages)):
            faces = F.faces_of_codim(i)
            for a, b in itertools.combinations(faces, 2):
                apart.checked += 1
                ma, mb = K.mask(F.classes[a]), K.mask(F.classes[b])
                if any(adj[j] & mb for j in iter_bits(ma)):
                    apart.fail({"sigma": sorted(sigma), "faces": [sorted(a), sorted(b)]})
            for tau in faces:
                from_links.checked += 1
                piece = F.classes[tau] | F.boundaries[tau]
                lk = link(K, tau)
                hat = sigma - tau
                expected = full_subcomplex(lk, [v for v in lk.vertices if v not in hat])
                got = full_subcomplex(K, piece)
                stage = K.mask(F.stages[i])
                reach = 0
                for j in iter_bits(K.mask(F.classes[tau])):
                    reach |= adj[j]
                contained = reach & stage & ~K.mask(piece) == 0
                if not (same_complex(got, expected) and contained):
                    from_links.fail({"sigma": sorted(sigma), "tau": sorted(tau)})
    return partition, apart, from_links


def check_cd_bounds(K: SimplicialComplex, simplices, n: int):
    links, spheres = CheckResult(), CheckResult()
    for s in simplices:
        links.checked += 1
        r = link_cd_check(K, s, n)
        if not r.holds:
            links.fail({"sigma": sorted(s), "cd": r.cd})
        spheres.checked += 1
        r = sphere_cd_check(K, s, n)
        if not r.holds:
            spheres.fail({"sigma": sorted(s), "cd": r.cd})
    return links, spheres


def check_gluings(K: SimplicialComplex, simplices, n: int) -> CheckResult:
    res = CheckResult()
    for s in simplices:
        for rep in filtration_gluings(K, s, n):
            res.checked += 1
            if not rep.holds:
                res.fail({"sigma": sorted(s), **rep.to_json()})
    return res


def run_lemma_suite(T, level: int, extra_cube_complexes=(), restarts: int = 32, seed: int = 0) -> SuiteReport:
    """Run every check.  ``T`` is a Thickening (full suite) or a bare flag complex
    (the checks needing a base cube complex are skipped)."""
    if isinstance(T, Thickening):
        K = T.complex
        base = T.base
    else:
        K = T
        base = None
    simplices = [K.labels(m) for m in K.simplex_masks()]
    results: dict[str, CheckResult] = {}
    cubes = [base] if base is not None else []
    cubes += list(extra_cube_complexes)
    if cubes:
        agg = CheckResult()
        for X in cubes:
            r = check_cube_links(X)
            agg.checked += r.checked
            agg.failures += r.failures
        results["cube_link_vs_vertex_link"] = agg
    else:
        results["cube_link_vs_vertex_link"] = CheckResult(skipped="no cube complex")
    results["link_of_link"] = check_link_of_link(K, simplices)
    results["ball_collapsible"], results["ball_is_full"] = check_balls(K, simplices, restarts, seed)
    if base is not None:
        results["minimal_cube_oracle"] = check_minimal_cubes(T, simplices)
        results["link_join"] = check_join_decompositions(T, simplices)
    else:
        results["minimal_cube_oracle"] = CheckResult(skipped="no base cube complex")
        results["link_join"] = CheckResult(skipped="no base cube complex")
    (results["filtration_partition"], results["classes_not_adjacent"],
     results["class_pieces_are_links"]) = check_filtrations(K, simplices)
    results["link_cd_bound"], results["sphere_cd_bound"] = check_cd_bounds(K, simplices, level)
    results["gluing_cd_bound"] = check_gluings(K, simplices, level)
    return SuiteReport(level, results)
