"""Simple cycles, the Gr'(1/6) test, presentations and certificates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .graph import LabelledGraph, NotReducedError, OrbitTable, aut_orbits, validate_reduced
from .pieces import PieceBound, longest_piece_prefix, max_piece_length
from .words import Alphabet, cyclic_canonical, shortlex_key

DEFAULT_CYCLE_CAP = 100_000


@dataclass(frozen=True)
class SimpleCycle:
    darts: tuple  # dart indices in traversal order
    vertices: tuple
    word: tuple

    @property
    def length(self) -> int:
        return len(self.darts)


class CycleList(list):
    """List of cycles; ``capped`` is set when enumeration hit its cap."""
    capped = False


def simple_cycles(g: LabelledGraph, cap: int = DEFAULT_CYCLE_CAP) -> CycleList:
    """Every simple cycle once, starting at its least vertex.

    Of the two orientations the one with the lexicographically smaller
    dart sequence is kept.
    """
    out = CycleList()
    seen_edges = set()
    for s in range(g.n):
        # DFS over simple paths s -> ... using vertices > s
        stack = [(s, [], {s})]
        while stack:
            v, path, on_path = stack.pop()
            for i in sorted(g.darts_at[v], reverse=True):
                d = g.darts[i]
                if path and d.edge == g.darts[path[-1]].edge:
                    continue
                if d.head == s:
                    cyc = path + [i]
                    key = frozenset(g.darts[j].edge for j in cyc)
                    if key in seen_edges:
                        continue
                    seen_edges.add(key)
                    rev = [j ^ 1 for j in reversed(cyc)]
                    best = min(cyc, rev)
                    verts = tuple(g.darts[j].tail for j in best)
                    out.append(SimpleCycle(tuple(best), verts,
                                           tuple(g.darts[j].letter for j in best)))
                    if len(out) > cap:
                        del out[cap:]
                        out.capped = True
                        return out
                elif d.head > s and d.head not in on_path:
                    stack.append((d.head, path + [i], on_path | {d.head}))
    out.sort(key=lambda c: (c.vertices[0], c.length, c.darts))
    return out


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple
    certified: bool = False  # built from a graph passing check_gr16

    def format(self) -> str:
        gens = ",".join(self.alphabet.names)
        rels = ", ".join(self.alphabet.format_word(r) for r in self.relators)
        return f"<{gens} | {rels}>"


def presentation(g: LabelledGraph, cap: int = DEFAULT_CYCLE_CAP, certified: bool = False) -> Presentation:
    cycles = simple_cycles(g, cap)
    if cycles.capped:
        raise CycleCapExceeded(cap)
    rels = sorted({cyclic_canonical(c.word) for c in cycles}, key=shortlex_key)
    return Presentation(g.alphabet, tuple(rels), certified)


class CycleCapExceeded(RuntimeError):
    def __init__(self, cap):
        super().__init__(f"more than {cap} simple cycles; result inconclusive")
        self.cap = cap


@dataclass(frozen=True)
class Gr16Verdict:
    holds: Optional[bool]  # None: inconclusive (cycle cap hit)
    piece_bound: PieceBound
    violation: Optional[tuple] = None  # (SimpleCycle, piece word)

    @property
    def inconclusive(self) -> bool:
        return self.holds is None


def _cycle_piece_lengths(g, cyc, orbits):
    """(start index, direction, longest piece length) at every cyclic start."""
    k = cyc.length
    verts = cyc.vertices
    word = cyc.word
    out = []
    for direction in (1, -1):
        for p in range(k):
            if direction == 1:
                start = verts[p]
                w = word[p:] + word[:p]
            else:
                # read backwards from vertex p: inverse letters of preceding darts
                start = verts[p]
                w = tuple(-word[(p - 1 - j) % k] for j in range(k))
            L = longest_piece_prefix(g, start, w[:k - 1], orbits)
            out.append((p, direction, L, w[:L]))
    return out


def check_gr16(g: LabelledGraph, cap: int = DEFAULT_CYCLE_CAP,
               orbits: OrbitTable = None) -> Gr16Verdict:
    if validate_reduced(g):
        raise NotReducedError("graph labelling is not reduced")
    orbits = orbits or aut_orbits(g)
    bound = max_piece_length(g, orbits)
    cycles = simple_cycles(g, cap)
    for cyc in cycles:
        worst = None
        for p, direction, L, w in _cycle_piece_lengths(g, cyc, orbits):
            if L and 6 * L >= cyc.length:
                if worst is None or (-len(w), shortlex_key(w)) < (-len(worst), shortlex_key(worst)):
                    worst = w
        if worst is not None:
            return Gr16Verdict(False, bound, (cyc, worst))
    if cycles.capped:
        return Gr16Verdict(None, bound)
    return Gr16Verdict(True, bound)


def _automorphism_generators(autos):
    """Greedy generating set for a permutation group given by its elements."""
    if not autos:
        return []
    verts = sorted(autos[0])
    as_tuple = [tuple(a[v] for v in verts) for a in autos]
    index = {v: i for i, v in enumerate(verts)}
    ident = tuple(verts)
    group = {ident}
    gens = []

    def compose(p, q):  # p after q
        return tuple(p[index[q[i]]] for i in range(len(q)))

    for a in sorted(as_tuple):
        if a in group:
            continue
        gens.append(a)
        frontier = list(group)
        group = set(group)
        while frontier:
            nxt = []
            for h in frontier:
                for s in gens:
                    c = compose(s, h)
                    if c not in group:
                        group.add(c)
                        nxt.append(c)
            frontier = nxt
    return [dict(zip(verts, a)) for a in gens]


@dataclass
class ComponentClass:
    representative: int  # index of the representative component
    vertices: list
    members: list  # component indices in the class
    aut_order: int
    generators: list


@dataclass
class Certificate:
    piece_bound: int
    classes: list
    relators: list = field(default_factory=list)

    @property
    def contraction(self) -> int:
        return 2 * self.piece_bound

    def lambda1(self, delta: int) -> int:
        return 5 * self.piece_bound + 10 * delta

    @property
    def lambda2(self) -> int:
        return 2 * self.piece_bound + 1

    def to_dict(self) -> dict:
        return {
            "verdict": "relatively-hyperbolic",
            "M": self.piece_bound,
            "constants": {
                "contraction": self.contraction,
                "lambda1": {"base": 5 * self.piece_bound, "per_delta": 10},
                "lambda2": self.lambda2,
            },
            "component_classes": [
                {"representative_component": c.representative,
                 "vertices": c.vertices,
                 "members": c.members,
                 "aut_order": c.aut_order,
                 "generators": [[gen[v] for v in c.vertices] for gen in c.generators]}
                for c in self.classes],
            "relators": self.relators,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"relatively hyperbolic certificate: M = {self.piece_bound}",
                 f"  contraction constant 2M = {self.contraction}",
                 f"  lambda1(delta) = {5 * self.piece_bound} + 10*delta",
                 f"  lambda2 = 2M+1 = {self.lambda2}",
                 f"  {len(self.classes)} component class(es):"]
        for c in self.classes:
            lines.append(f"    component {c.representative} ({len(c.vertices)} vertices, "
                         f"{len(c.members)} copies): |Aut| = {c.aut_order}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Refusal:
    reason: str

    def to_dict(self) -> dict:
        return {"verdict": "refused", "reason": self.reason}


def rh_certificate(g: LabelledGraph, cap: int = DEFAULT_CYCLE_CAP):
    """Certificate when Gr'(1/6) holds with bounded pieces, else a Refusal."""
    orbits = aut_orbits(g)
    verdict = check_gr16(g, cap, orbits)
    if not verdict.piece_bound.finite:
        return Refusal("pieces unbounded")
    if verdict.inconclusive:
        return Refusal("inconclusive: simple-cycle cap exceeded")
    if not verdict.holds:
        return Refusal("Gr'(1/6) condition fails")
    classes = {}
    for ci, comp in enumerate(orbits.components):
        rep = orbits.component_class[ci]
        classes.setdefault(rep, []).append(ci)
    out = []
    for rep_vertex in sorted(classes):
        members = classes[rep_vertex]
        ci = members[0]
        gens = _automorphism_generators(orbits.automorphisms.get(ci, []))
        gens = [gen for gen in gens if any(k != v for k, v in gen.items())]
        out.append(ComponentClass(ci, orbits.components[ci], members,
                                  orbits.aut_order[ci], gens))
    pres = presentation(g, cap)
    rels = [g.alphabet.format_word(r) for r in pres.relators]
    return Certificate(verdict.piece_bound.length, out, rels)
