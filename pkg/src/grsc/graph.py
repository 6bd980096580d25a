"""Finite edge-labelled directed graphs and their label-preserving symmetries.

The on-disk ``.lgf`` format is line oriented::

    # comment
    alphabet a b c
    vertices 7
    edge 0 1 a
    edge 1 2 b

Every declared edge ``tail -> head`` labelled ``x`` yields two darts: the
forward dart reads ``x`` and the backward dart reads ``x^{-1}``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .words import Alphabet, WordSyntaxError


class GraphSyntaxError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


class NotReducedError(ValueError):
    pass


class Dart(NamedTuple):
    edge: int
    tail: int
    head: int
    letter: int


class Violation(NamedTuple):
    vertex: int
    letter: int


class LabelledGraph:
    """A finite directed multigraph with edges labelled by an alphabet.

    Vertices are ``0..n-1``; edge ``e`` gives dart ``2e`` (forward) and
    dart ``2e + 1`` (backward).
    """

    def __init__(self, alphabet: Alphabet, n_vertices: int, edges):
        self.alphabet = alphabet
        self.n = int(n_vertices)
        self.edges = tuple((int(t), int(h), int(g)) for t, h, g in edges)
        for t, h, g in self.edges:
            if not (0 <= t < self.n and 0 <= h < self.n):
                raise ValueError("vertex index out of range")
            if not 0 <= g < len(alphabet):
                raise ValueError("unknown letter")
        darts = []
        for e, (t, h, g) in enumerate(self.edges):
            darts.append(Dart(e, t, h, g + 1))
            darts.append(Dart(e, h, t, -(g + 1)))
        self.darts = tuple(darts)
        at = [[] for _ in range(self.n)]
        for i, d in enumerate(darts):
            at[d.tail].append(i)
        self.darts_at = tuple(tuple(x) for x in at)
        self._follow = [dict() for _ in range(self.n)]
        for i, d in enumerate(darts):
            self._follow[d.tail].setdefault(d.letter, i)

    def __repr__(self):
        return f"LabelledGraph({len(self.alphabet)} letters, {self.n} vertices, {len(self.edges)} edges)"

    def __eq__(self, other):
        return (isinstance(other, LabelledGraph) and self.alphabet == other.alphabet
                and self.n == other.n and self.edges == other.edges)

    def __hash__(self):
        return hash((self.alphabet, self.n, self.edges))

    @staticmethod
    def inverse_dart(i: int) -> int:
        return i ^ 1

    def dart_from(self, v: int, x: int):
        """Index of the dart leaving ``v`` reading ``x``, or None."""
        return self._follow[v].get(x)

    def follow(self, v: int, x: int):
        i = self._follow[v].get(x)
        return None if i is None else self.darts[i].head

    def read(self, v: int, w):
        """End vertex of the walk from ``v`` reading ``w``, or None."""
        for x in w:
            v = self.follow(v, x)
            if v is None:
                return None
        return v

    def letters_at(self, v: int):
        return self._follow[v].keys()

    def relabel(self, perm):
        """Graph with vertex ``v`` renamed ``perm[v]`` (edge order kept)."""
        return LabelledGraph(self.alphabet, self.n,
                             [(perm[t], perm[h], g) for t, h, g in self.edges])

    def serialize(self) -> str:
        lines = ["alphabet " + " ".join(self.alphabet.names), f"vertices {self.n}"]
        lines += [f"edge {t} {h} {self.alphabet.names[g]}" for t, h, g in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_cycles(cls, alphabet: Alphabet, words):
        """Disjoint union of cycle graphs reading the given cyclic words."""
        edges, n = [], 0
        for w in words:
            k = len(w)
            for i, x in enumerate(w):
                u, v = n + i, n + (i + 1) % k
                if x > 0:
                    edges.append((u, v, x - 1))
                else:
                    edges.append((v, u, -x - 1))
            n += k
        return cls(alphabet, n, edges)


def parse_graph(text: str) -> LabelledGraph:
    alphabet = None
    n = None
    edges = {}
    order = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        cols, pos = [], 0
        for tok in toks:
            pos = line.index(tok, pos)
            cols.append(pos + 1)
            pos += len(tok)
        kw = toks[0]
        if alphabet is None:
            if kw != "alphabet":
                raise GraphSyntaxError("expected 'alphabet'", lineno, cols[0])
            try:
                alphabet = Alphabet(tuple(toks[1:]))
            except WordSyntaxError as exc:
                raise GraphSyntaxError(str(exc), lineno, cols[0]) from None
        elif n is None:
            if kw != "vertices" or len(toks) != 2:
                raise GraphSyntaxError("expected 'vertices <n>'", lineno, cols[0])
            n = _int(toks[1], lineno, cols[1])
            if n < 0:
                raise GraphSyntaxError("negative vertex count", lineno, cols[1])
        else:
            if kw != "edge" or len(toks) not in (4, 5):
                raise GraphSyntaxError("expected 'edge <tail> <head> <letter> [id]'", lineno, cols[0])
            t = _int(toks[1], lineno, cols[1])
            h = _int(toks[2], lineno, cols[2])
            for val, c in ((t, cols[1]), (h, cols[2])):
                if not 0 <= val < n:
                    raise GraphSyntaxError(f"vertex index {val} out of range", lineno, c)
            if toks[3] not in alphabet.names:
                raise GraphSyntaxError(f"unknown letter {toks[3]!r}", lineno, cols[3])
            eid = _int(toks[4], lineno, cols[4]) if len(toks) == 5 else len(order)
            if eid in edges:
                raise GraphSyntaxError(f"duplicate edge id {eid}", lineno, cols[-1])
            edges[eid] = (t, h, alphabet.index(toks[3]))
            order.append(eid)
    if alphabet is None or n is None:
        raise GraphSyntaxError("missing 'alphabet' or 'vertices' header")
    if sorted(edges) != list(range(len(edges))):
        raise GraphSyntaxError("edge ids must be dense integers from 0")
    return LabelledGraph(alphabet, n, [edges[i] for i in range(len(edges))])


def _int(tok, line, col):
    try:
        return int(tok)
    except ValueError:
        raise GraphSyntaxError(f"expected an integer, got {tok!r}", line, col) from None


def validate_reduced(g: LabelledGraph) -> list:
    """Violations of reducedness; empty list means the labelling is reduced."""
    out = []
    for v in range(g.n):
        seen = set()
        for i in g.darts_at[v]:
            x = g.darts[i].letter
            if x in seen:
                out.append(Violation(v, x))
            seen.add(x)
    return sorted(set(out))


def components(g: LabelledGraph) -> list:
    """Connected components as sorted vertex lists, ordered by least vertex."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            v = queue.popleft()
            comp.append(v)
            for i in g.darts_at[v]:
                h = g.darts[i].head
                if not seen[h]:
                    seen[h] = True
                    queue.append(h)
        comps.append(sorted(comp))
    return comps


def extend_isomorphism(g: LabelledGraph, u: int, v: int):
    """Unique label-preserving map of component(u) sending u to v.

    Returns the vertex map as a dict if it is a bijection onto
    component(v) preserving every dart, else None.  Requires a reduced
    labelling, which makes label-following deterministic.
    """
    phi = {u: v}
    used = {v}
    queue = deque([u])
    while queue:
        a = queue.popleft()
        b = phi[a]
        if len(g.darts_at[a]) != len(g.darts_at[b]):
            return None
        for i in g.darts_at[a]:
            d = g.darts[i]
            hb = g.follow(b, d.letter)
            if hb is None:
                return None
            ha = d.head
            if ha in phi:
                if phi[ha] != hb:
                    return None
            else:
                if hb in used:
                    return None
                phi[ha] = hb
                used.add(hb)
                queue.append(ha)
    return phi


@dataclass
class OrbitTable:
    """Orbits of the label-preserving automorphism group of a graph.

    ``orbit[v]`` is the least vertex in the orbit of ``v``.  Per component
    we keep the component isomorphism class (least vertex of the class
    representative), the automorphism group order, and witness maps.
    """
    orbit: list
    components: list
    component_of: list
    component_class: list
    aut_order: list
    witnesses: list = field(default_factory=list)
    automorphisms: dict = field(default_factory=dict)

    def same_orbit(self, u, v) -> bool:
        return self.orbit[u] == self.orbit[v]

    def orbits(self) -> list:
        groups = {}
        for v, o in enumerate(self.orbit):
            groups.setdefault(o, []).append(v)
        return [groups[k] for k in sorted(groups)]


def aut_orbits(g: LabelledGraph) -> OrbitTable:
    if validate_reduced(g):
        raise NotReducedError("aut_orbits requires a reduced labelling")
    comps = components(g)
    comp_of = [0] * g.n
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cls = list(range(len(comps)))
    aut_order = [0] * len(comps)
    autos = {}
    witnesses = []
    sizes = [len(c) for c in comps]
    for ci, comp in enumerate(comps):
        base = comp[0]
        for cj in range(ci, len(comps)):
            if sizes[cj] != sizes[ci] or (cj != ci and cls[cj] != cj):
                continue
            for v in comps[cj]:
                phi = extend_isomorphism(g, base, v)
                if phi is None:
                    continue
                if cj == ci:
                    aut_order[ci] += 1
                    autos.setdefault(ci, []).append(phi)
                elif cls[cj] == cj:
                    cls[cj] = cls[ci]
                merged = False
                for a, b in phi.items():
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
                        merged = True
                if merged:
                    witnesses.append(phi)
    for ci in range(len(comps)):
        if aut_order[ci] == 0:
            # every component class member shares the representative's group order
            aut_order[ci] = aut_order[cls[ci]] if cls[ci] != ci else 1
    groups = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    orbit = [0] * g.n
    for members in groups.values():
        m = min(members)
        for v in members:
            orbit[v] = m
    return OrbitTable(orbit=orbit, components=comps, component_of=comp_of,
                      component_class=[comps[c][0] for c in cls], aut_order=aut_order,
                      witnesses=witnesses, automorphisms=autos)
