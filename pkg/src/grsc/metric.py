"""Checks of contraction, intersection and penetration bounds inside a ball.

Ball distances ``d_B`` dominate true distances ``d``.  A shorter path
would have to leave the ball, so ``d >= min(d_B, depth(x) + depth(y) + 2)``
with ``depth`` as in :attr:`Ball.depth`; ball distances below that bound
are exact.  Objects whose verdict depends on distances
the ball cannot certify are counted as censored, never as passing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .geometry import Ball, EmbeddedComponent, Geodesic, embed_component
from .graph import LabelledGraph, components
from .pieces import is_piece

PASS, FAIL, CENSORED, INAPPLICABLE = "pass", "fail", "censored", "inapplicable"


def lower_bounds(b: Ball, xs, ys, dB: np.ndarray) -> np.ndarray:
    """Lower bounds on true distances given ball distances ``dB[i, j]``."""
    xs, ys = np.asarray(xs), np.asarray(ys)
    nx = b.norms[xs][:, None]
    ny = b.norms[ys][None, :]
    low = b.lower_bound(xs[:, None], ys[None, :], dB)
    return np.maximum(np.abs(nx - ny), low)


class ComponentField:
    """Distances from every ball element to an embedded component ``A``.

    ``dist[x]`` is the ball distance to ``A ∩ ball`` and ``certified[x]``
    says whether it equals the true distance to the whole of ``A``.
    """

    def __init__(self, b: Ball, A: EmbeddedComponent, complete: bool):
        self.ball, self.A = b, A
        self.points = np.array(A.elements(), dtype=np.int64)
        if len(self.points) == 0:
            raise ValueError("embedded component has no points in the ball")
        self.index = {int(a): i for i, a in enumerate(self.points)}
        D = b.distances_from(self.points)
        n = len(b)
        everything = np.arange(n)
        dep = b.depth
        exact = D <= dep[self.points][:, None] + dep[None, :] + 2
        big = np.iinfo(np.int64).max // 4
        m = np.where(exact, D, big).min(axis=0)
        low = lower_bounds(b, self.points, everything, D)
        ok = np.where(exact, True, low > m[None, :]).all(axis=0)
        if not complete:
            ok &= b.depth + 1 > m
        self.dist = D.min(axis=0)
        self.exact_dist = m
        self.certified = ok & (m < big)
        self.D = D
        self.exact = exact
        self.lower = low
        self.complete = complete
        self._proj = {}

    def contains(self, x: int) -> bool:
        return int(x) in self.index

    def projection(self, x: int) -> frozenset:
        p = self._proj.get(x)
        if p is None:
            col = self.D[:, x]
            hit = np.nonzero((col == self.exact_dist[x]) & self.exact[:, x])[0]
            p = self._proj[x] = frozenset(int(self.points[i]) for i in hit)
        return p

    def within(self, x: int, radius: int) -> Optional[bool]:
        """Whether ``d(x, A) <= radius``; None if the ball cannot tell."""
        if self.dist[x] <= radius:
            return True
        if (self.lower[:, x] > radius).all() and (self.complete or self.ball.depth[x] + 1 > radius):
            return False
        return None

    def diameter(self, pts) -> tuple:
        """(ball diameter, lower bound on the true diameter) of a point set."""
        idx = [self.index[p] for p in pts]
        if len(idx) < 2:
            return 0, 0
        sub = self.D[np.ix_(idx, self.points[idx])]
        low = lower_bounds(self.ball, self.points[idx], self.points[idx], sub)
        return int(sub.max()), int(low.max())


def _component_complete(g: LabelledGraph, A: EmbeddedComponent) -> bool:
    return len(A.vmap) == len(components(g)[A.component])


def field_for(b: Ball, g: LabelledGraph, A: EmbeddedComponent) -> ComponentField:
    return ComponentField(b, A, _component_complete(g, A))


@dataclass
class ProjectionReport:
    source: int
    points: list
    distance: int
    diameter: int
    certified: bool


def project(b: Ball, A: EmbeddedComponent, x: int, g: LabelledGraph = None,
            fld: ComponentField = None) -> ProjectionReport:
    """Nearest points of ``A`` to ``x``.

    Without the graph the in-ball part of ``A`` is assumed to be all of it.
    """
    if fld is None:
        fld = ComponentField(b, A, True if g is None else _component_complete(g, A))
    pts = sorted(fld.projection(x))
    return ProjectionReport(int(x), pts, int(fld.exact_dist[x]) if pts else int(fld.dist[x]),
                            fld.diameter(pts)[0], bool(fld.certified[x]))


# sampling of geodesics -----------------------------------------------------

def _choose(pool, priority, limit, rng):
    """Up to ``limit`` items: the first half by ``priority``, the rest uniformly.

    Returns the chosen items in increasing order and whether anything was
    left out.
    """
    pool = np.asarray(pool, dtype=np.int64)
    if len(pool) <= limit:
        return np.sort(pool), False
    order = pool[np.lexsort((pool, priority[pool]))]
    head = order[:limit // 2]
    rest = rng.choice(np.sort(order[limit // 2:]), size=limit - len(head), replace=False)
    return np.sort(np.concatenate([head, rest])), True


def _geodesics_to(b: Ball, row: np.ndarray, x: int, y: int, cap: int):
    """Geodesics from ``x`` to ``y`` using the distance row of ``x``."""
    out = []
    stack = [(y,)]
    while stack and len(out) < cap:
        path = stack.pop()
        z = path[-1]
        if z == x:
            out.append(Geodesic(tuple(reversed(path))))
            continue
        prev = sorted({int(w) for w in b.adj[z] if w >= 0 and row[w] == row[z] - 1}, reverse=True)
        for w in prev:
            stack.append(path + (w,))
    return out, bool(stack)


def _pairs(b, sources, target_ok, priority, max_targets, rng):
    """Yield (x, distance row of x, chosen targets, sampled) for pairs whose
    geodesics all lie in the ball."""
    for x in sources:
        x = int(x)
        row = b.distances_from([x])[0]
        inside = (row >= 0) & (row <= b.depth[x] + b.depth + 1)
        inside[x] = False
        ys, sampled = _choose(np.nonzero(inside & target_ok(x, row))[0], priority, max_targets, rng)
        yield x, row, ys, sampled


# contraction ---------------------------------------------------------------

@dataclass
class ContractionReport:
    component: int
    base: tuple
    bound: int
    scored: int = 0
    censored: int = 0
    max_observed: int = 0
    violations: list = field(default_factory=list)
    sampled: bool = False
    examples: list = field(default_factory=list)  # (geodesic vertices, diameter) for the widest few

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"component": self.component, "base": list(self.base), "bound": self.bound,
                "scored": self.scored, "censored": self.censored,
                "max_observed": self.max_observed, "passed": self.passed,
                "sampled": self.sampled,
                "violations": [list(v) for v in self.violations[:5]],
                "widest": [[list(p), d] for p, d in self.examples]}


def verify_contraction(b: Ball, A: EmbeddedComponent, M: int, g: LabelledGraph = None,
                       seed: int = 0, max_sources: int = 256, max_targets: int = 64,
                       cap_geodesics: int = 16, fld: ComponentField = None) -> ContractionReport:
    """Projection diameters of geodesics missing ``A`` against the bound ``2M``."""
    rng = np.random.default_rng(seed)
    if fld is None:
        fld = ComponentField(b, A, True if g is None else _component_complete(g, A))
    bound = 2 * M
    rep = ContractionReport(A.component, (A.base_vertex, A.base_element), bound)
    inA = np.zeros(len(b), dtype=bool)
    inA[fld.points] = True
    pool = np.nonzero(~inA)[0]
    sources, rep.sampled = _choose(pool, fld.dist, max_sources, rng)
    widest = []
    for x, row, ys, sampled in _pairs(b, sources, lambda x, row: ~inA, fld.dist, max_targets, rng):
        rep.sampled |= sampled
        for y in ys:
            paths, more = _geodesics_to(b, row, x, int(y), cap_geodesics)
            rep.sampled |= more
            for gam in paths:
                verts = gam.vertices
                if inA[list(verts)].any():
                    continue
                if not fld.certified[list(verts)].all():
                    rep.censored += 1
                    continue
                pts = set()
                for v in verts:
                    pts |= fld.projection(v)
                diam, low = fld.diameter(pts)
                if diam > bound and low <= bound:
                    rep.censored += 1
                    continue
                rep.scored += 1
                rep.max_observed = max(rep.max_observed, diam)
                if diam > bound:
                    rep.violations.append(verts)
                widest.append((diam, verts))
    widest.sort(key=lambda t: (-t[0], t[1]))
    rep.examples = [(v, d) for d, v in widest[:3]]
    return rep


# intersections of neighbourhoods --------------------------------------------

@dataclass
class Lambda1Report:
    first: tuple
    second: tuple
    delta: int
    bound: int
    intersection: list
    uncertain: int
    diameter: int
    status: str
    path_word: Optional[tuple] = None
    path_is_piece: Optional[bool] = None

    def to_dict(self, alphabet=None) -> dict:
        d = {"first": list(self.first), "second": list(self.second), "delta": self.delta,
             "bound": self.bound, "size": len(self.intersection), "uncertain": self.uncertain,
             "diameter": self.diameter, "status": self.status}
        if self.path_word is not None:
            d["path_word"] = alphabet.format_word(self.path_word) if alphabet else list(self.path_word)
            d["path_is_piece"] = self.path_is_piece
        return d


def _neighbourhood(fld: ComponentField, delta: int):
    inside = fld.dist <= delta
    out = (fld.lower > delta).all(axis=0)
    if not fld.complete:
        out &= fld.ball.depth + 1 > delta
    return inside, ~inside & ~out


def _path_word(b: Ball, pts):
    """Order a point set as a ball path and read its word; None if not a path."""
    pts = set(pts)
    if len(pts) == 1:
        return ()
    nbr = {p: [(x, int(b.adj[p, j])) for j, x in enumerate(b.letters)
               if int(b.adj[p, j]) in pts] for p in pts}
    ends = [p for p in pts if len({q for _, q in nbr[p]}) == 1]
    if len(ends) != 2 or any(len({q for _, q in nbr[p]}) > 2 for p in pts):
        return None
    start = min(ends)
    word, prev, cur = [], None, start
    while True:
        step = [(x, q) for x, q in nbr[cur] if q != prev]
        if not step:
            break
        x, q = min(step, key=lambda t: (abs(t[0]), t[0] < 0))
        word.append(x)
        prev, cur = cur, q
    return tuple(word) if len(word) == len(pts) - 1 else None


def verify_lambda1(b: Ball, A1: EmbeddedComponent, A2: EmbeddedComponent, delta: int, M: int,
                   g: LabelledGraph = None, fields=None) -> Lambda1Report:
    """Diameter of ``N_delta(A1) ∩ N_delta(A2)`` against ``5M + 10 delta``.

    Neighbourhoods are closed.  With ``delta = 0`` and the graph given, the
    intersection must be a path whose word is a piece.
    """
    if A1 == A2 or (A1.image == A2.image and len(A1.image) > 1):
        raise ValueError("the two embedded components must differ")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if fields is None:
        fields = (ComponentField(b, A1, True if g is None else _component_complete(g, A1)),
                  ComponentField(b, A2, True if g is None else _component_complete(g, A2)))
    f1, f2 = fields
    in1, unk1 = _neighbourhood(f1, delta)
    in2, unk2 = _neighbourhood(f2, delta)
    both = np.nonzero(in1 & in2)[0]
    unsure = int(((in1 | unk1) & (in2 | unk2) & ~(in1 & in2)).sum())
    bound = 5 * M + 10 * delta
    diam = low = 0
    if len(both) > 1:
        D = b.distances_from(both)[:, both]
        diam = int(D.max())
        low = int(lower_bounds(b, both, both, D).max())
    if diam <= bound:
        status = PASS
    elif low > bound:
        status = FAIL
    else:
        status = CENSORED
    rep = Lambda1Report((A1.component, A1.base_vertex, A1.base_element),
                        (A2.component, A2.base_vertex, A2.base_element),
                        delta, bound, [int(x) for x in both], unsure, diam, status)
    if delta == 0 and len(both) and g is not None:
        w = _path_word(b, both)
        rep.path_word = w
        rep.path_is_piece = w is not None and (len(w) == 0 or is_piece(g, w))
        if not rep.path_is_piece and rep.status == PASS:
            rep.status = FAIL
    return rep


# penetration ----------------------------------------------------------------

@dataclass
class Lambda2Result:
    status: str
    witness: Optional[int] = None
    witness_distance: Optional[int] = None


def verify_lambda2(b: Ball, A: EmbeddedComponent, gamma: Geodesic, M: int,
                   g: LabelledGraph = None, fld: ComponentField = None) -> Lambda2Result:
    """Whether a geodesic with both ends within a third of its length of ``A``
    comes within ``2M + 1`` of ``A``."""
    if fld is None:
        fld = ComponentField(b, A, True if g is None else _component_complete(g, A))
    ends = (gamma.start, gamma.end)
    if not all(fld.certified[e] for e in ends):
        return Lambda2Result(CENSORED)
    if any(3 * int(fld.exact_dist[e]) > gamma.length for e in ends):
        return Lambda2Result(INAPPLICABLE)
    radius = 2 * M + 1
    unsure = False
    for v in gamma.vertices:
        verdict = fld.within(v, radius)
        if verdict:
            return Lambda2Result(PASS, int(v), int(fld.dist[v]))
        unsure |= verdict is None
    return Lambda2Result(CENSORED if unsure else FAIL)


@dataclass
class Lambda2Report:
    component: int
    base: tuple
    radius: int
    counts: dict
    max_witness_distance: int = 0
    failures: list = field(default_factory=list)
    sampled: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"component": self.component, "base": list(self.base), "radius": self.radius,
                "counts": dict(sorted(self.counts.items())),
                "max_witness_distance": self.max_witness_distance,
                "passed": self.passed, "sampled": self.sampled,
                "failures": [list(f) for f in self.failures[:5]]}


def check_lambda2(b: Ball, A: EmbeddedComponent, M: int, g: LabelledGraph = None, seed: int = 0,
                  max_sources: int = 256, max_targets: int = 64, cap_geodesics: int = 16,
                  fld: ComponentField = None) -> Lambda2Report:
    """Run :func:`verify_lambda2` over sampled geodesics whose ends lie near ``A``."""
    rng = np.random.default_rng(seed)
    if fld is None:
        fld = ComponentField(b, A, True if g is None else _component_complete(g, A))
    rep = Lambda2Report(A.component, (A.base_vertex, A.base_element), 2 * M + 1,
                        {PASS: 0, FAIL: 0, CENSORED: 0, INAPPLICABLE: 0})
    dA = np.where(fld.certified, fld.exact_dist, np.iinfo(np.int64).max // 4)
    pool = np.nonzero(fld.certified)[0]
    sources, rep.sampled = _choose(pool, dA, max_sources, rng)

    def target_ok(x, row):
        return fld.certified & (3 * np.maximum(dA, dA[x]) <= row)

    for x, row, ys, sampled in _pairs(b, sources, target_ok, dA, max_targets, rng):
        rep.sampled |= sampled
        for y in ys:
            paths, more = _geodesics_to(b, row, x, int(y), cap_geodesics)
            rep.sampled |= more
            for gam in paths:
                res = verify_lambda2(b, A, gam, M, fld=fld)
                rep.counts[res.status] += 1
                if res.status == PASS:
                    rep.max_witness_distance = max(rep.max_witness_distance, res.witness_distance)
                elif res.status == FAIL:
                    rep.failures.append(gam.vertices)
    return rep


# fat polygons ---------------------------------------------------------------

def is_theta_fat(b: Ball, polygon, theta: int) -> Optional[bool]:
    """Whether non-adjacent sides of a geodesic polygon stay more than ``theta`` apart.

    The two sides of a bigon count as non-adjacent.  Returns None when the
    ball cannot certify a distance above ``theta``.
    """
    if theta < 0:
        raise ValueError("theta must be non-negative")
    n = len(polygon)
    if n == 0:
        raise ValueError("empty polygon")
    for i in range(n):
        if polygon[i].end != polygon[(i + 1) % n].start:
            raise ValueError("polygon is not closed")
    if n == 2:
        pairs = [(0, 1)]
    else:
        pairs = [(i, j) for i, j in combinations(range(n), 2)
                 if j != i + 1 and not (i == 0 and j == n - 1)]
    unsure = False
    for i, j in pairs:
        xs = list(polygon[i].vertices)
        ys = list(polygon[j].vertices)
        D = b.distances_from(xs)[:, ys]
        if (D <= theta).any():
            return False
        if not (lower_bounds(b, xs, ys, D) > theta).all():
            unsure = True
    return None if unsure else True


# whole-graph verification ----------------------------------------------------

def embeddings_through_identity(g: LabelledGraph, b: Ball, every_vertex: bool = False) -> list:
    """Embedded components sending a vertex to the identity.

    By default one per component (its least vertex); ``every_vertex`` gives
    one per vertex.
    """
    out = []
    for ci, comp in enumerate(components(g)):
        for y in (comp if every_vertex else comp[:1]):
            out.append(embed_component(g, ci, (y, 0), b))
    return out


def verify_all(b: Ball, g: LabelledGraph, M: int, delta: int, seed: int = 0,
               max_sources: int = 256, max_targets: int = 64, cap_geodesics: int = 16) -> dict:
    """Contraction and penetration per component, Λ1 over pairs through the identity."""
    comps = embeddings_through_identity(g, b)
    fields = {}

    def fld(A):
        key = (A.component, A.base_vertex, A.base_element)
        if key not in fields:
            fields[key] = field_for(b, g, A)
        return fields[key]

    contraction = [verify_contraction(b, A, M, g, seed, max_sources, max_targets, cap_geodesics,
                                      fld=fld(A)) for A in comps]
    lambda2 = [check_lambda2(b, A, M, g, seed, max_sources, max_targets, cap_geodesics,
                             fld=fld(A)) for A in comps]
    family = embeddings_through_identity(g, b, every_vertex=True)
    lam1 = []
    for A1, A2 in combinations(family, 2):
        if A1.image == A2.image:
            continue
        lam1.append(verify_lambda1(b, A1, A2, delta, M, g, (fld(A1), fld(A2))))
    l1_scored = [r for r in lam1 if r.status != CENSORED]
    return {
        "radius": b.radius,
        "ball_size": len(b),
        "M": M,
        "delta": delta,
        "seed": seed,
        "contraction": {
            "bound": 2 * M,
            "passed": all(r.passed for r in contraction),
            "components": [r.to_dict() for r in contraction],
        },
        "lambda1": {
            "bound": 5 * M + 10 * delta,
            "passed": all(r.status != FAIL for r in lam1),
            "pairs": len(lam1),
            "censored": len(lam1) - len(l1_scored),
            "max_observed": max((r.diameter for r in l1_scored), default=0),
            "piece_paths_ok": all(r.path_is_piece is not False for r in lam1),
            "failures": [r.to_dict(g.alphabet) for r in lam1 if r.status == FAIL][:5],
        },
        "lambda2": {
            "radius": 2 * M + 1,
            "passed": all(r.passed for r in lambda2),
            "components": [r.to_dict() for r in lambda2],
        },
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
