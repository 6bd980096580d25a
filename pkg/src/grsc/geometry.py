"""Word problem, Cayley balls, geodesics and embedded components.

Elements of G(Γ) are handled through words.  Equality is decided by
Dehn's algorithm: a freely reduced word representing the identity
contains more than half of some relator, so greedy half-relator
replacement reaches the empty word exactly for trivial words.
"""

from __future__ import annotations

import json
import warnings
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .cancellation import Presentation
from .graph import LabelledGraph
from .words import free_reduce, inverse, letter_key, rotations, shortlex_key

__all__ = [
    "free_reduce", "HeuristicReductionWarning", "DehnTable", "dehn_reduce", "is_trivial",
    "BallCapExceeded", "Ball", "cayley_ball", "Geodesic", "GeodesicList", "geodesics",
    "EmbeddedComponent", "embed_component", "stabilizes",
]

DEFAULT_BALL_CAP = 50_000
FULL_TABLE_LIMIT = 4_000


class HeuristicReductionWarning(UserWarning):
    """Dehn reduction on a presentation not known to satisfy Gr'(1/6)."""


class DehnTable:
    """Half-relator rewriting rules for a presentation.

    Maps every factor ``s`` of a cyclic conjugate of a relator or its
    inverse with ``|s| > |r|/2`` to the shortest word equal to ``s``
    obtained from such a conjugate.
    """

    def __init__(self, p: Presentation):
        self.presentation = p
        rules = {}
        for r in p.relators:
            n = len(r)
            for rot in list(rotations(r)) + list(rotations(inverse(r))):
                for k in range(n // 2 + 1, n + 1):
                    s, rest = rot[:k], inverse(rot[k:])
                    old = rules.get(s)
                    if old is None or shortlex_key(rest) < shortlex_key(old):
                        rules[s] = rest
        self.rules = rules
        # head -> inverses of the tails completing it to a rule
        self.splits = {}
        for w in rules:
            for i in range(1, len(w)):
                self.splits.setdefault(w[:i], set()).add(inverse(w[i:]))
        self.lengths = sorted({len(s) for s in rules}, reverse=True)
        self.min_relator = min((len(r) for r in p.relators), default=0)

    def find(self, w):
        """Leftmost, then longest, replaceable factor as (start, length)."""
        for i in range(len(w)):
            for k in self.lengths:
                if i + k <= len(w) and w[i:i + k] in self.rules:
                    return i, k
        return None

    def reduce(self, w):
        w = free_reduce(w)
        while True:
            hit = self.find(w)
            if hit is None:
                return w
            i, k = hit
            w = free_reduce(w[:i] + self.rules[w[i:i + k]] + w[i + k:])


_tables = {}


def _table(p: Presentation) -> DehnTable:
    t = _tables.get(p)
    if t is None:
        t = _tables[p] = DehnTable(p)
    return t


def dehn_reduce(p: Presentation, w) -> tuple:
    if not p.certified:
        warnings.warn("presentation not certified Gr'(1/6); Dehn reduction is heuristic",
                      HeuristicReductionWarning, stacklevel=2)
    return _table(p).reduce(tuple(w))


def is_trivial(p: Presentation, w) -> bool:
    return len(dehn_reduce(p, w)) == 0


class _Abelianizer:
    """Exact invariant: exponent vector modulo the relator lattice."""

    def __init__(self, p: Presentation):
        k = len(p.alphabet)
        rows = [self.vector(r, k) for r in p.relators]
        self.k = k
        self.basis = _echelon(rows, k)

    @staticmethod
    def vector(w, k):
        v = [0] * k
        for x in w:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return v

    def key(self, w) -> tuple:
        v = self.vector(w, self.k)
        for pivot, row in self.basis:
            q = v[pivot] // row[pivot]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)


def _echelon(rows, k):
    """Integer row echelon form with positive pivots, as (pivot, row) pairs."""
    rows = [list(r) for r in rows if any(r)]
    out = []
    for col in range(k):
        while True:
            live = [r for r in rows if r[col] != 0]
            if not live:
                break
            piv = min(live, key=lambda r: abs(r[col]))
            rows.remove(piv)
            if piv[col] < 0:
                piv = [-a for a in piv]
            rest = []
            done = True
            for r in rows:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col] != 0:
                    done = False
                if any(r):
                    rest.append(r)
            rows = rest
            if done:
                out.append((col, piv))
                break
            rows.append(piv)
    return out


class _Identifier:
    """Finds earlier elements that may equal a Dehn-irreducible word ``w``.

    Candidates always share the abelian image of ``w``.  In filtered mode
    two further necessary conditions are used.  If ``w = v`` with both
    words Dehn-irreducible then the free reduction of ``w v^-1`` contains a
    half-relator factor straddling the junction, so ``v`` ends with the
    inverse of a rule tail whose head is a suffix of ``w``.  And a diagram
    with boundary ``w v^-1`` has a boundary of at least the shortest
    relator length.
    """

    def __init__(self, table: DehnTable, abel: _Abelianizer, filtered: bool):
        self.table, self.abel, self.filtered = table, abel, filtered
        self.by_key = {}
        self.by_suffix = {}
        self.comparisons = 0

    def add(self, i: int, rep, key):
        self.by_key.setdefault(key, []).append(i)
        if self.filtered:
            for m in range(1, len(rep) + 1):
                self.by_suffix.setdefault((key, rep[-m:]), []).append(i)

    def candidates(self, w, key):
        if not self.filtered:
            return self.by_key.get(key, ())
        out = set()
        for m in range(1, len(w) + 1):
            for tail in self.table.splits.get(w[-m:], ()):
                out.update(self.by_suffix.get((key, tail), ()))
        return sorted(out)

    def match(self, w, reps):
        key = self.abel.key(w)
        rmin = self.table.min_relator
        for v in self.candidates(w, key):
            if self.filtered and len(w) + len(reps[v]) < rmin:
                continue
            self.comparisons += 1
            if not self.table.reduce(w + inverse(reps[v])):
                return v
        return None


class BallCapExceeded(RuntimeError):
    pass


@dataclass
class Ball:
    """Ball of radius ``r`` about the identity in the Cayley graph.

    ``reps[i]`` is the shortlex-least word for element ``i`` (so its
    length is the word norm) and ``adj[i, j]`` is the element reached
    along the ``j``-th letter of ``letters``, or -1 outside the ball.
    Element 0 is the identity.
    """
    presentation: Presentation
    radius: int
    reps: list
    letters: list
    adj: np.ndarray
    comparisons: int = 0
    _index: dict = field(default_factory=dict, repr=False)
    _rows: dict = field(default_factory=dict, repr=False)
    _graph: object = field(default=None, repr=False)
    _depth: object = field(default=None, repr=False)

    def __post_init__(self):
        self.norms = np.array([len(w) for w in self.reps], dtype=np.int64)
        self._index = {w: i for i, w in enumerate(self.reps)}
        self._col = {x: j for j, x in enumerate(self.letters)}

    def __len__(self):
        return len(self.reps)

    def index_of(self, rep) -> int:
        return self._index[tuple(rep)]

    def step(self, i: int, x: int) -> int:
        return int(self.adj[i, self._col[x]])

    def walk(self, i: int, w):
        """Element reached from ``i`` along ``w``, or None if the path leaves the ball."""
        for x in w:
            i = self.adj[i, self._col[x]]
            if i < 0:
                return None
        return int(i)

    def locate(self, w):
        """Ball element equal to ``w`` in the group, or None if it lies outside."""
        z = self._ident.table.reduce(tuple(w))
        if len(z) <= self.radius:
            return self.walk(0, z)
        return self._ident.match(z, self.reps)

    def neighbours(self, i: int) -> list:
        return sorted({int(j) for j in self.adj[i] if j >= 0})

    @property
    def graph(self) -> csr_matrix:
        if self._graph is None:
            src, dst = np.nonzero(self.adj >= 0)
            n = len(self)
            data = np.ones(len(src), dtype=np.int8)
            m = csr_matrix((data, (src, self.adj[src, dst])), shape=(n, n))
            self._graph = ((m + m.T) > 0).astype(np.int8).tocsr()
        return self._graph

    def distances_from(self, sources) -> np.ndarray:
        """Rows of ball distances (int64, -1 for unreachable) for the given sources."""
        sources = [int(s) for s in np.atleast_1d(sources)]
        missing = [s for s in sources if s not in self._rows]
        if missing:
            d = shortest_path(self.graph, method="D", unweighted=True, indices=missing)
            d = np.where(np.isinf(d), -1, d).astype(np.int64)
            for s, row in zip(missing, d):
                self._rows[s] = row
        return np.array([self._rows[s] for s in sources])

    def dist(self, u: int, v: int) -> int:
        return int(self.distances_from([u])[0][v])

    def distance_table(self) -> np.ndarray:
        if len(self) > FULL_TABLE_LIMIT:
            raise ValueError(f"ball has {len(self)} elements; full table limited to {FULL_TABLE_LIMIT}")
        return self.distances_from(range(len(self)))

    @property
    def depth(self) -> np.ndarray:
        """Ball distance to the nearest element with an edge leaving the ball.

        Any path between ``u`` and ``v`` that leaves the ball has length at
        least ``depth[u] + depth[v] + 2``.  When nothing leaves the ball
        (a finite group swallowed whole) the depth is effectively infinite.
        """
        if self._depth is None:
            n = len(self)
            far = np.iinfo(np.int64).max // 8
            depth = np.full(n, -1, dtype=np.int64)
            frontier = np.nonzero((self.adj < 0).any(axis=1))[0]
            if len(frontier) == 0:
                depth[:] = far
            else:
                depth[frontier] = 0
                k = 0
                g = self.graph
                while len(frontier):
                    k += 1
                    nb = np.unique(g[frontier].indices)
                    frontier = nb[depth[nb] < 0]
                    depth[frontier] = k
                depth[depth < 0] = far
            self._depth = depth
        return self._depth

    def lower_bound(self, u, v, d):
        """Lower bound on the true distance given ball distance ``d`` (broadcasts)."""
        dep = self.depth
        return np.minimum(d, dep[u] + dep[v] + 2)

    def is_exact(self, u: int, v: int, d: int = None) -> bool:
        """Whether the ball distance equals the distance in the whole Cayley graph."""
        if d is None:
            d = self.dist(u, v)
        return 0 <= d <= self.depth[u] + self.depth[v] + 2

    def contains_geodesics(self, u: int, v: int, d: int = None) -> bool:
        """Whether every geodesic of the Cayley graph from ``u`` to ``v`` lies in the ball."""
        if d is None:
            d = self.dist(u, v)
        return 0 <= d <= self.depth[u] + self.depth[v] + 1

    def edges(self) -> list:
        """Undirected generator edges as sorted (u, v, letter) with the positive letter."""
        out = set()
        for j, x in enumerate(self.letters):
            if x < 0:
                continue
            for i in range(len(self)):
                k = int(self.adj[i, j])
                if k >= 0:
                    out.add((i, k, x))
        return sorted(out)

    def to_dict(self, with_table: bool = None) -> dict:
        names = self.presentation.alphabet
        if with_table is None:
            with_table = len(self) <= FULL_TABLE_LIMIT
        d = {
            "radius": self.radius,
            "size": len(self),
            "elements": [names.format_word(w) for w in self.reps],
            "edges": [[u, v, names.name(x)] for u, v, x in self.edges()],
        }
        if with_table:
            d["distances"] = self.distance_table().tolist()
        return d

    def to_json(self, with_table: bool = None) -> str:
        return json.dumps(self.to_dict(with_table), sort_keys=True)


def cayley_ball(p: Presentation, r: int, cap: int = DEFAULT_BALL_CAP,
                identify: str = "filtered") -> Ball:
    """Breadth-first ball of radius ``r``.

    A new word ``w = rep(u)·x`` that Dehn reduction shortens names an
    element already found, reached by walking the reduced word.  A
    Dehn-irreducible ``w`` is compared with earlier elements ``v`` of the
    same abelian image.  For certified presentations ``w·v^-1`` is trivial
    only if ``|w| + |v|`` reaches the shortest relator length, so shorter
    pairs are skipped; ``identify="pairwise"`` disables that filter.
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    if identify not in ("filtered", "pairwise"):
        raise ValueError("identify must be 'filtered' or 'pairwise'")
    if not p.certified:
        warnings.warn("presentation not certified Gr'(1/6); ball identification is heuristic",
                      HeuristicReductionWarning, stacklevel=2)
    table = _table(p)
    ident = _Identifier(table, _Abelianizer(p), identify == "filtered" and p.certified)
    letters = p.alphabet.letters()
    col = {x: j for j, x in enumerate(letters)}
    reps = [()]
    adj = [[-1] * len(letters)]
    ident.add(0, (), ident.abel.key(()))
    level = [0]
    for k in range(r + 1):
        nxt = []
        for u in level:
            ru = reps[u]
            for x in letters:
                j = col[x]
                if adj[u][j] >= 0 or (ru and ru[-1] == -x):
                    continue
                w = ru + (x,)
                z = table.reduce(w)
                if len(z) < len(w):
                    target = 0
                    for y in z:
                        target = adj[target][col[y]]
                else:
                    target = ident.match(w, reps)
                    if target is None and k < r:
                        if len(reps) >= cap:
                            raise BallCapExceeded(f"ball exceeds {cap} elements at radius {k + 1}")
                        target = len(reps)
                        reps.append(w)
                        adj.append([-1] * len(letters))
                        ident.add(target, w, ident.abel.key(w))
                        nxt.append(target)
                if target is not None:
                    adj[u][j] = target
                    adj[target][col[-x]] = u
        level = nxt
    ball = Ball(p, r, reps, letters, np.array(adj, dtype=np.int64), ident.comparisons)
    ball._ident = ident
    return ball


@dataclass(frozen=True)
class Geodesic:
    vertices: tuple

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]


class GeodesicList(list):
    capped = False


def geodesics(b: Ball, u: int, v: int, cap: int = 1000, check: bool = True) -> GeodesicList:
    """All ball geodesics from ``u`` to ``v``, in letter order, up to ``cap``.

    With ``check`` the pair must satisfy :meth:`Ball.contains_geodesics`,
    so these are exactly the geodesics of the whole Cayley graph.
    """
    dv = b.distances_from([v])[0]
    d = int(dv[u])
    if d < 0:
        raise ValueError("endpoints not connected inside the ball")
    if check and not b.contains_geodesics(u, v, d):
        raise ValueError("geodesics between these points may leave the ball")
    out = GeodesicList()
    stack = [(u,)]
    while stack:
        path = stack.pop()
        x = path[-1]
        if x == v:
            out.append(Geodesic(path))
            if len(out) >= cap:
                out.capped = bool(stack)
                break
            continue
        steps = []
        for j in range(len(b.letters)):
            y = int(b.adj[x, j])
            if y >= 0 and dv[y] == dv[x] - 1 and y not in steps:
                steps.append(y)
        for y in reversed(steps):
            stack.append(path + (y,))
    return out


@dataclass(frozen=True)
class EmbeddedComponent:
    """Image of a graph component under the label-preserving map y -> x."""
    component: int
    base_vertex: int
    base_element: int
    vmap: dict  # component vertex -> ball element, for images inside the ball

    @property
    def image(self) -> frozenset:
        return frozenset(self.vmap.values())

    def elements(self) -> list:
        return sorted(self.image)


def _component_paths(g: LabelledGraph, y: int) -> dict:
    """Shortest label word from ``y`` to each vertex of its component."""
    paths = {y: ()}
    queue = deque([y])
    while queue:
        a = queue.popleft()
        for i in sorted(g.darts_at[a], key=lambda i: letter_key(g.darts[i].letter)):
            d = g.darts[i]
            if d.head not in paths:
                paths[d.head] = paths[a] + (d.letter,)
                queue.append(d.head)
    return paths


def embed_component(g: LabelledGraph, comp: int, base, b: Ball) -> EmbeddedComponent:
    from .graph import components

    y, x = base
    comps = components(g)
    if y not in comps[comp]:
        raise ValueError(f"vertex {y} is not in component {comp}")
    vmap = {}
    rx = b.reps[x]
    for z, w in sorted(_component_paths(g, y).items()):
        e = b.locate(rx + w)
        if e is not None:
            vmap[z] = e
    return EmbeddedComponent(comp, y, x, vmap)


def stabilizes(b: Ball, g: LabelledGraph, A: EmbeddedComponent, elem: int) -> bool:
    """Whether ``elem·A`` and ``A`` have the same points inside the ball.

    The translate is the embedding based at ``(y, elem·x)``; its in-ball
    points are found by locating each translated vertex.
    """
    base = b.reps[elem] + b.reps[A.base_element]
    moved = set()
    for w in _component_paths(g, A.base_vertex).values():
        e = b.locate(base + w)
        if e is not None:
            moved.add(e)
    return moved == set(A.image)
