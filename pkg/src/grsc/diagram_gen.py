"""Exhaustive generation of small simple disc diagrams at arc level.

A map is stored by darts: arc ``a`` has darts ``2a`` and ``2a + 1``,
``nxt[d]`` is the next dart around the face on the left of ``d`` and
``tail[d]`` its start vertex.  Valence-2 vertices are suppressed, so every
vertex has valence at least 3.  Dart ``outer`` lies on the outer face.

Discs are grown by attaching a new face along a boundary path between two
points, each an existing boundary vertex or a new point inside an
exterior arc.  Every simple disc diagram arises this way (remove an ear
face whose intersection with the boundary is one arc, repeatedly).  Two
quantities never decrease while growing and prune the search:

* interior faces keep their arc count once interior, so it must be >= 7;
* the excess ``sum_v (2 deg(v) - 6) + sum_interior (i - 6)``.  In a
  combinatorial n-gon, boundary faces satisfy
  ``sum (6 - i - 2e) = 6 + excess`` and only faces holding a corner can
  contribute more than 0 (at most 3 each), so ``excess <= 3n - 6``.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class ArcMap:
    nxt: list
    tail: list
    outer: int
    n_vertices: int

    def copy(self) -> "ArcMap":
        return ArcMap(self.nxt[:], self.tail[:], self.outer, self.n_vertices)

    @property
    def n_darts(self) -> int:
        return len(self.nxt)

    def head(self, d: int) -> int:
        return self.tail[d ^ 1]

    def orbit(self, d: int) -> list:
        out = [d]
        e = self.nxt[d]
        while e != d:
            out.append(e)
            e = self.nxt[e]
        return out

    def boundary(self) -> list:
        return self.orbit(self.outer)

    def faces(self) -> list:
        """Dart orbits of inner faces, each starting at its least dart."""
        seen = set(self.boundary())
        out = []
        for d in range(self.n_darts):
            if d not in seen:
                orb = self.orbit(d)
                seen.update(orb)
                out.append(orb)
        return out

    def degrees(self) -> list:
        deg = [0] * self.n_vertices
        for t in self.tail:
            deg[t] += 1
        return deg

    def prev(self, d: int) -> int:
        e = d
        while self.nxt[e] != d:
            e = self.nxt[e]
        return e

    def split(self, d: int) -> int:
        """Put a new vertex inside the arc of dart ``d``; return the new dart after it."""
        w = self.n_vertices
        self.n_vertices += 1
        e = len(self.nxt)
        p = self.prev(d ^ 1)
        v = self.tail[d ^ 1]
        self.nxt += [self.nxt[d], d ^ 1]
        self.tail += [w, v]
        self.nxt[d] = e
        self.tail[d ^ 1] = w
        self.nxt[p] = e ^ 1
        if self.outer == d ^ 1:
            self.outer = e ^ 1
        return e

    def attach(self, first: int, last: int) -> None:
        """New face along the boundary darts from ``first`` to ``last``."""
        f = len(self.nxt)
        p = self.prev(first)
        q = self.nxt[last]
        x = self.tail[first]
        y = self.tail[last ^ 1]
        self.nxt += [first, q]
        self.tail += [y, x]
        self.nxt[last] = f
        self.nxt[p] = f ^ 1
        self.outer = f ^ 1

    def code(self) -> tuple:
        """Canonical form: least traversal code over outer-face roots."""
        best = None
        for root in self.boundary():
            num = {root: 0}
            order = [root]
            i = 0
            code = []
            while i < len(order):
                d = order[i]
                i += 1
                for e in (self.nxt[d], d ^ 1):
                    if e not in num:
                        num[e] = len(order)
                        order.append(e)
                    code.append(num[e])
                if best is not None and code > best[:len(code)]:
                    break
            else:
                if best is None or code < best:
                    best = code
        return tuple(best)


def two_face_map() -> ArcMap:
    # vertices 0, 1; arcs: 0 chord 0->1, 1 exterior 0->1, 2 exterior 1->0
    nxt = [None] * 6
    tail = [0, 1, 0, 1, 1, 0]
    # inner face A: chord 0->1 (dart 0), then exterior 1->0 (dart 4)
    nxt[0], nxt[4] = 4, 0
    # inner face B: exterior 0->1 (dart 2), then chord 1->0 (dart 1)
    nxt[2], nxt[1] = 1, 2
    # outer face: reverse darts 5 (0->1) and 3 (1->0)
    nxt[5], nxt[3] = 3, 5
    return ArcMap(nxt, tail, 5, 2)


@dataclass
class MapStats:
    faces: int
    excess: int
    ok: bool


def stats(m: ArcMap) -> MapStats:
    bd = set(m.boundary())
    deg = m.degrees()
    excess = sum(2 * k - 6 for k in deg)
    faces = m.faces()
    ok = True
    for orb in faces:
        if not any((d ^ 1) in bd for d in orb):
            if len(orb) < 7:
                ok = False
            excess += len(orb) - 6
    return MapStats(len(faces), excess, ok)


def _spans(L: int, tree: bool):
    """(start, length) of attachment paths in half-arc steps.

    Position ``2k`` is the start vertex of boundary arc ``k``, ``2k + 1`` a
    new point inside it.  In tree mode the path stays inside one arc.
    """
    for p in range(2 * L):
        if tree:
            hs = (0, 1) if p % 2 else (1, 2)
        else:
            hs = range(0, 2 * L + 1) if p % 2 else range(1, 2 * L)
        for h in hs:
            yield p, h


def children(m: ArcMap, tree: bool = False):
    """All maps obtained by attaching one face to ``m``."""
    B = m.boundary()
    L = len(B)
    for p, h in _spans(L, tree):
        if True:
            c = m.copy()
            Bc = B[:]
            k = p // 2
            if p % 2 == 0 and h % 2 == 0:
                first = Bc[k]
                last = Bc[(k + h // 2 - 1) % L]
            elif p % 2 == 0:
                # x at vertex, y inside arc k + h//2
                j = (k + h // 2) % L
                c.split(Bc[j])
                first = Bc[k]
                last = Bc[j]
            elif h % 2 == 1:
                # x inside arc k, y at a vertex
                e = c.split(Bc[k])
                first = e
                last = Bc[(k + (h + 1) // 2 - 1) % L] if h > 1 else e
            else:
                # both points inside arcs
                j = (k + h // 2) % L
                if h == 0:
                    e = c.split(Bc[k])
                    c.split(e)
                    first = last = e
                elif j == k:
                    # all the way round back into the same arc
                    e = c.split(Bc[k])
                    c.split(Bc[k])
                    first = e
                    last = Bc[k]
                else:
                    e = c.split(Bc[k])
                    c.split(Bc[j])
                    first = e
                    last = Bc[j]
            c.attach(first, last)
            yield c


def face_degrees(m: ArcMap) -> list:
    """(orbit, i, e) for each inner face."""
    bd = set(m.boundary())
    out = []
    for orb in m.faces():
        e = sum((d ^ 1) in bd for d in orb)
        out.append((orb, len(orb) - e, e))
    return out


def leaves(m: ArcMap) -> int:
    return sum(1 for _, i, _ in face_degrees(m) if i == 1)


def needy_arcs(m: ArcMap) -> set:
    """Exterior arcs whose face has one exterior arc and interior degree <= 3.

    In any combinatorial polygon built on ``m`` each of them must hold a
    side junction.
    """
    bd = set(m.boundary())
    out = set()
    for orb, i, e in face_degrees(m):
        if e == 1 and i <= 3:
            (d,) = [d for d in orb if (d ^ 1) in bd]
            out.add(d // 2)
    return out


def discs(max_faces: int, budget: int, tree: bool = False, max_leaves: int = None):
    """Yield arc maps with 2..max_faces faces, one per isomorphism class.

    Maps exceeding the excess ``budget`` or holding an interior face with
    fewer than 7 arcs are pruned.  In tree mode every face is glued along
    part of a single arc, so the dual graph is a tree whose leaf count never
    decreases; ``max_leaves`` prunes on it.
    """
    start = two_face_map()
    level = {start.code(): start}
    for k in range(2, max_faces + 1):
        for code in sorted(level):
            yield level[code]
        if k == max_faces:
            return
        nxt = {}
        for code in sorted(level):
            for c in children(level[code], tree):
                s = stats(c)
                if not s.ok or s.excess > budget:
                    continue
                if max_leaves is not None and leaves(c) > max_leaves:
                    continue
                nxt.setdefault(c.code(), c)
        level = nxt


def to_diagram(m: ArcMap, corners: dict, n: int):
    """Vertex-level diagram with ``corners[a]`` side junctions inside exterior arc ``a``."""
    from .diagrams import Diagram

    bd = m.boundary()
    bd_set = set(bd)
    nv = m.n_vertices
    inner = {}  # exterior arc -> vertices inside it, along its inner dart
    for d in bd:
        a = d // 2
        k = max(1, corners.get(a, 0))
        inner[a] = list(range(nv, nv + k))
        nv += k

    def along(d):
        a = d // 2
        if a not in inner:
            return []
        return inner[a] if (d ^ 1) in bd_set else inner[a][::-1]

    faces = {}
    for fid, orb in enumerate(m.faces()):
        walk = []
        for d in orb:
            walk.append(m.tail[d])
            walk += along(d)
        faces[fid] = tuple(walk)
    walk = []
    for d in reversed(bd):
        t = d ^ 1
        walk.append(m.tail[t])
        walk += along(t)
    junctions = {v for a, vs in inner.items() for v in vs[:corners.get(a, 0)]}
    sides = sorted(j for j, v in enumerate(walk) if v in junctions)
    return Diagram(faces, tuple(walk), tuple(sides))


def single_face(n: int):
    from .diagrams import Diagram

    k = max(3, n)
    return Diagram({0: tuple(range(k))}, tuple(range(k)), tuple(range(n)))


def _multisets(items, k):
    if k == 0:
        yield ()
        return
    if not items:
        return
    first, rest = items[0], items[1:]
    for j in range(k, -1, -1):
        for tail in _multisets(rest, k - j):
            yield (first,) * j + tail


def polygons(n: int, max_faces: int, tree: bool = False, nondegenerate: bool = False):
    """Simple combinatorial n-gons with at most ``max_faces`` faces.

    Side junctions sit at valence-2 vertices inside exterior arcs.  With
    ``nondegenerate`` only placements with exactly one junction in each
    needy arc are produced; every other placement has a junction whose
    removal keeps all needy arcs covered, so it is degenerate.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if max_faces >= 1 and not nondegenerate:
        yield single_face(n)
    budget = 3 * n - 6
    for m in discs(max_faces, budget, tree, n if tree else None):
        need = needy_arcs(m)
        if len(need) > n or (nondegenerate and len(need) != n):
            continue
        ext = sorted({d // 2 for d in m.boundary()})
        for extra in _multisets(ext, n - len(need)):
            corners = {a: 1 for a in need}
            for a in extra:
                corners[a] = corners.get(a, 0) + 1
            yield to_diagram(m, corners, n)
