"""Combinatorial disc diagrams, (3,7) conditions and polygon calculus.

A diagram is a planar map given by its inner faces, each a cyclic walk of
vertex ids, and the boundary walk.  All walks run counterclockwise, so an
exterior edge is traversed in the same direction by its face and by the
boundary.  Equivalently, the face walks together with the reversed
boundary use every directed edge exactly once.  The graph must be simple;
subdivide with valence-2 vertices where two arcs would be parallel.

The ``.dgf`` text format::

    faces 2
    face 0: 0 1 2 3
    face 1: 0 3 4 5
    boundary: 0 1 2 3 4 5
    sides: 0 3
    label 0 1 a

``sides`` lists the boundary positions where the sides start; labels are
optional tokens read along ``tail -> head``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional


class DiagramError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PreconditionError(ValueError):
    pass


class CrossingNotFound(RuntimeError):
    pass


def invert_token(tok: str) -> str:
    return tok[1:] if tok.startswith("-") else "-" + tok


@dataclass
class Diagram:
    faces: dict  # face id -> tuple of vertices (cyclic, counterclockwise)
    boundary: tuple
    sides: tuple = ()
    labels: dict = field(default_factory=dict)  # (tail, head) -> token

    def __post_init__(self):
        self.faces = {int(k): tuple(v) for k, v in self.faces.items()}
        self.boundary = tuple(self.boundary)
        self.sides = tuple(self.sides)
        for fid, walk in self.faces.items():
            if len(walk) < 3:
                raise DiagramError(f"face {fid} has fewer than 3 vertices")
            for a, b in zip(walk, walk[1:] + walk[:1]):
                if a == b:
                    raise DiagramError(f"face {fid} repeats vertex {a} consecutively")
        if not self.boundary:
            raise DiagramError("empty boundary")
        L = len(self.boundary)
        if L > 1 and any(a == b for a, b in zip(self.boundary, self.boundary[1:] + self.boundary[:1])):
            raise DiagramError("boundary repeats a vertex consecutively")
        if list(self.sides) != sorted(set(self.sides)) or any(not 0 <= s < L for s in self.sides):
            raise DiagramError("sides must be strictly increasing boundary positions")

    @property
    def n_sides(self) -> int:
        return len(self.sides)

    def label(self, u, v) -> Optional[str]:
        tok = self.labels.get((u, v))
        if tok is not None:
            return tok
        tok = self.labels.get((v, u))
        return None if tok is None else invert_token(tok)

    def read(self, walk, closed=True) -> list:
        pairs = zip(walk, walk[1:] + walk[:1]) if closed else zip(walk, walk[1:])
        return [self.label(a, b) for a, b in pairs]

    def boundary_word(self) -> list:
        if len(self.boundary) == 1:
            return []
        return self.read(list(self.boundary))

    def face_word(self, face) -> list:
        return self.read(list(self.faces[face]))

    def with_sides(self, sides) -> "Diagram":
        return Diagram(dict(self.faces), self.boundary, tuple(sides), dict(self.labels))

    @cached_property
    def structure(self) -> "_Structure":
        return _Structure(self)

    def serialize(self) -> str:
        lines = [f"faces {len(self.faces)}"]
        for fid in sorted(self.faces):
            lines.append(f"face {fid}: " + " ".join(map(str, self.faces[fid])))
        lines.append("boundary: " + " ".join(map(str, self.boundary)))
        lines.append("sides: " + " ".join(map(str, self.sides)))
        for (t, h) in sorted(self.labels):
            lines.append(f"label {t} {h} {self.labels[(t, h)]}")
        return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> Diagram:
    count = None
    faces = {}
    boundary = None
    sides = ()
    labels = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        toks = head.split()
        try:
            if toks[0] == "faces" and len(toks) == 2 and not rest:
                count = int(toks[1])
            elif toks[0] == "face" and len(toks) == 2 and _:
                fid = int(toks[1])
                if fid in faces:
                    raise DiagramError(f"duplicate face {fid}", lineno)
                faces[fid] = tuple(int(t) for t in rest.split())
            elif toks == ["boundary"] and _:
                boundary = tuple(int(t) for t in rest.split())
            elif toks == ["sides"] and _:
                sides = tuple(int(t) for t in rest.split())
            elif toks[0] == "label" and len(toks) == 4 and not rest:
                labels[(int(toks[1]), int(toks[2]))] = toks[3]
            else:
                raise DiagramError(f"unrecognised line {raw.strip()!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, DiagramError):
                raise
            raise DiagramError(f"bad integer in {raw.strip()!r}", lineno) from None
    if count is None or boundary is None:
        raise DiagramError("missing 'faces' or 'boundary' line")
    if count != len(faces):
        raise DiagramError(f"declared {count} faces, found {len(faces)}")
    try:
        return Diagram(faces, boundary, sides, labels)
    except DiagramError:
        raise
    except ValueError as exc:
        raise DiagramError(str(exc)) from None


@dataclass(frozen=True)
class Arc:
    """Maximal path through valence-2 vertices; closed arcs repeat the first vertex."""
    vertices: tuple
    interior: bool

    @property
    def ends(self) -> tuple:
        return self.vertices[0], self.vertices[-1]

    @property
    def closed(self) -> bool:
        return len(self.vertices) > 1 and self.vertices[0] == self.vertices[-1]

    def edges(self) -> list:
        return [frozenset(p) for p in zip(self.vertices, self.vertices[1:])]


class _Structure:
    """Incidence data derived once per diagram."""

    def __init__(self, d: Diagram):
        self.d = d
        self.errors = []
        dart_face = {}
        for fid, walk in d.faces.items():
            for a, b in zip(walk, walk[1:] + walk[:1]):
                if (a, b) in dart_face:
                    self.errors.append(f"directed edge {a}->{b} used twice")
                dart_face[(a, b)] = fid
        B = d.boundary
        self.bpos = {}
        if len(B) > 1:
            for j, (a, b) in enumerate(zip(B, B[1:] + B[:1])):
                if (a, b) in self.bpos:
                    self.errors.append(f"boundary uses {a}->{b} twice")
                self.bpos[(a, b)] = j
                if (b, a) in dart_face:
                    self.errors.append(f"directed edge {b}->{a} used by a face and the outer side")
                dart_face[(b, a)] = None
        self.dart_face = dart_face
        nbrs = {}
        for a, b in dart_face:
            nbrs.setdefault(a, set()).add(b)
            nbrs.setdefault(b, set()).add(a)
            if (b, a) not in dart_face:
                self.errors.append(f"edge {a}-{b} has only one side")
        for v in B:
            nbrs.setdefault(v, set())
        self.nbrs = nbrs
        self.vertices = sorted(nbrs)
        self.valence = {v: len(nbrs[v]) for v in nbrs}
        self.edges = {frozenset(p) for p in dart_face}
        self.on_boundary = set(B)
        self.boundary_edges = {frozenset(p) for p in self.bpos}
        if not self.errors:
            self._check_links()
            V, E, F = len(self.vertices), len(self.edges), len(d.faces)
            if V - E + F != 1:
                self.errors.append(f"Euler characteristic V-E+F = {V - E + F}, expected 1")
            if not self._connected():
                self.errors.append("diagram is not connected")
        self.arcs = []
        self.arc_of_edge = {}
        self.face_arcs = {}
        if not self.errors:
            self._build_arcs()

    def _check_links(self):
        # around each vertex the faces (and outer side) must form one cycle
        for v in self.vertices:
            out = sorted(self.nbrs[v])
            if not out:
                continue
            rho = {}
            for w in out:
                # dart w->v lies in some face; that face continues v->w'
                fid = self.dart_face[(w, v)]
                walk = self.d.faces[fid] if fid is not None else tuple(reversed(self.d.boundary))
                nxt = None
                n = len(walk)
                for j in range(n):
                    if walk[j] == w and walk[(j + 1) % n] == v:
                        nxt = walk[(j + 2) % n]
                        break
                rho[w] = nxt
            seen = {out[0]}
            x = rho[out[0]]
            while x not in seen:
                seen.add(x)
                x = rho[x]
            if len(seen) != len(out):
                self.errors.append(f"vertex {v} is not a disc point (link has several cycles)")

    def _connected(self):
        start = self.vertices[0]
        seen = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            for w in self.nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def is_node(self, v) -> bool:
        return self.valence[v] != 2

    def _build_arcs(self):
        used = set()

        def add(path):
            interior = not any(frozenset(p) in self.boundary_edges for p in zip(path, path[1:]))
            k = len(self.arcs)
            self.arcs.append(Arc(tuple(path), interior))
            for p in zip(path, path[1:]):
                self.arc_of_edge[frozenset(p)] = k
                used.add(frozenset(p))

        for u in self.vertices:
            if not self.is_node(u):
                continue
            for w in sorted(self.nbrs[u]):
                if frozenset((u, w)) in used:
                    continue
                path = [u, w]
                while not self.is_node(path[-1]):
                    a, b = sorted(self.nbrs[path[-1]])
                    path.append(b if a == path[-2] else a)
                add(path)
        for u in self.vertices:
            for w in sorted(self.nbrs[u]):
                if frozenset((u, w)) in used:
                    continue
                path = [u, w]
                while path[-1] != u:
                    a, b = sorted(self.nbrs[path[-1]])
                    path.append(b if a == path[-2] else a)
                add(path)
        for fid, walk in self.d.faces.items():
            n = len(walk)
            starts = [j for j in range(n) if self.is_node(walk[j])]
            if not starts:
                self.face_arcs[fid] = [self.arc_of_edge[frozenset(walk[:2])]]
                continue
            occ = []
            for j in starts:
                occ.append(self.arc_of_edge[frozenset((walk[j], walk[(j + 1) % n]))])
            self.face_arcs[fid] = occ

    def degrees(self, fid) -> tuple:
        i = e = 0
        for k in self.face_arcs[fid]:
            if self.arcs[k].interior:
                i += 1
            else:
                e += 1
        return i, e

    def face_exterior_runs(self, fid) -> list:
        """Boundary positions covered by each exterior arc occurrence of a face."""
        walk = self.d.faces[fid]
        n = len(walk)
        starts = [j for j in range(n) if self.is_node(walk[j])] or [0]
        runs = []
        for a, j in enumerate(starts):
            end = starts[(a + 1) % len(starts)]
            length = (end - j) % n or n
            darts = [(walk[(j + t) % n], walk[(j + t + 1) % n]) for t in range(length)]
            if all(dt in self.bpos for dt in darts):
                runs.append([self.bpos[dt] for dt in darts])
        return runs

    def side_of(self, pos: int) -> int:
        """Side index containing the boundary edge starting at ``pos``."""
        S = self.d.sides
        k = 0
        for idx, s in enumerate(S):
            if s <= pos:
                k = idx
        if pos < S[0]:
            k = len(S) - 1
        return k

    def side_vertices(self, k: int) -> list:
        S, B = self.d.sides, self.d.boundary
        L = len(B)
        a = S[k]
        b = S[(k + 1) % len(S)]
        span = (b - a) % L or L
        return [B[(a + t) % L] for t in range(span + 1)]


@dataclass
class Validation:
    errors: list
    seven_violations: list
    ngon_violations: list

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def is_37(self) -> bool:
        return self.ok and not self.seven_violations

    @property
    def is_ngon(self) -> bool:
        return self.is_37 and not self.ngon_violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "errors": self.errors,
                "is_37": self.is_37, "seven_violations": self.seven_violations,
                "is_ngon": self.is_ngon, "ngon_violations": self.ngon_violations}


def _ngon_violations(d: Diagram, st: _Structure) -> list:
    if not d.sides:
        return ["no side decomposition"]
    out = []
    for k in range(len(d.sides)):
        path = st.side_vertices(k)
        for a, b, c in zip(path, path[1:], path[2:]):
            if a == c:
                out.append(f"side {k} is not reduced at vertex {b}")
                break
    for fid in sorted(d.faces):
        i, e = st.degrees(fid)
        if e != 1 or i >= 4:
            continue
        runs = st.face_exterior_runs(fid)
        sides = {st.side_of(p) for p in runs[0]} if runs else set()
        if len(sides) == 1:
            out.append(f"face {fid} has i = {i} < 4 and its exterior arc lies in side {sides.pop()}")
    return out


def validate_diagram(d: Diagram) -> Validation:
    st = d.structure
    if st.errors:
        return Validation(list(st.errors), [], [])
    seven = []
    for v in st.vertices:
        if v not in st.on_boundary and st.valence[v] < 3:
            seven.append(f"interior vertex {v} has valence {st.valence[v]}")
    for fid in sorted(d.faces):
        i, e = st.degrees(fid)
        if e == 0 and i < 7:
            seven.append(f"interior face {fid} has only {i} arcs")
    ngon = _ngon_violations(d, st) if not seven else []
    return Validation([], seven, ngon)


def degrees(d: Diagram, face) -> tuple:
    """(interior degree, exterior degree) of a face, counted in arcs."""
    if face not in d.faces:
        raise DiagramError(f"unknown face {face!r}")
    st = d.structure
    if st.errors:
        raise DiagramError("invalid diagram: " + st.errors[0])
    return st.degrees(face)


def arcs(d: Diagram) -> list:
    st = d.structure
    if st.errors:
        raise DiagramError("invalid diagram: " + st.errors[0])
    return list(st.arcs)


def is_simple(d: Diagram) -> bool:
    return bool(d.faces) and len(set(d.boundary)) == len(d.boundary)


def distinguished_vertices(d: Diagram) -> list:
    """Valence-2 vertices where two sides meet."""
    st = d.structure
    return [d.boundary[s] for s in d.sides if st.valence.get(d.boundary[s]) == 2]


def _require_polygon(d: Diagram, sizes=None) -> _Structure:
    val = validate_diagram(d)
    if not val.ok:
        raise PreconditionError("invalid diagram: " + val.errors[0])
    if not val.is_37:
        raise PreconditionError("not a (3,7)-diagram: " + val.seven_violations[0])
    if not val.is_ngon:
        raise PreconditionError("not a combinatorial polygon: " + val.ngon_violations[0])
    if sizes is not None and d.n_sides not in sizes:
        raise PreconditionError(f"expected {' or '.join(map(str, sizes))} sides, got {d.n_sides}")
    return d.structure


# ---------------------------------------------------------------- Strebel forms

class StrebelForm(str, enum.Enum):
    I1 = "I1"
    I2 = "I2"
    I3 = "I3"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"


class _Dual:
    """Faces joined across interior arcs."""

    def __init__(self, d: Diagram, st: _Structure):
        self.adj = {f: [] for f in d.faces}  # face -> [(face, arc index)]
        for k, arc in enumerate(st.arcs):
            if not arc.interior:
                continue
            a, b = arc.vertices[0], arc.vertices[1]
            f, g = st.dart_face[(a, b)], st.dart_face[(b, a)]
            self.adj[f].append((g, k))
            self.adj[g].append((f, k))

    def components(self, cut=frozenset()) -> list:
        seen = set()
        out = []
        for f in sorted(self.adj):
            if f in seen:
                continue
            comp = {f}
            todo = [f]
            seen.add(f)
            while todo:
                x = todo.pop()
                for y, k in self.adj[x]:
                    if k not in cut and y not in seen:
                        seen.add(y)
                        comp.add(y)
                        todo.append(y)
            out.append(comp)
        return out

    def is_path(self, comp, cut=frozenset()) -> bool:
        edges = {k for f in comp for g, k in self.adj[f] if k not in cut and g in comp}
        if len(edges) != len(comp) - 1:
            return False
        return all(sum(1 for g, k in self.adj[f] if k not in cut and g in comp) <= 2 for f in comp)

    def degree(self, f, cut=frozenset()) -> int:
        return sum(1 for g, k in self.adj[f] if k not in cut)


def _corner_faces(d: Diagram, st: _Structure) -> dict:
    """Number of side junctions in each face (junctions must have valence 2)."""
    count = {f: 0 for f in d.faces}
    for s in d.sides:
        v = d.boundary[s]
        if st.valence[v] != 2:
            raise PreconditionError(f"side junction {v} has valence {st.valence[v]}, not 2")
        fs = {f for f, walk in d.faces.items() if v in walk}
        (f,) = fs
        count[f] += 1
    return count


def strebel_matches(d: Diagram) -> list:
    """Every form template the polygon matches; exactly one is expected."""
    if not is_simple(d):
        raise PreconditionError("diagram is not simple")
    st = _require_polygon(d, (2, 3))
    dual = _Dual(d, st)
    corners = _corner_faces(d, st)
    n = d.n_sides
    inner = [v for v in st.vertices if v not in st.on_boundary and st.is_node(v)]
    out = []
    faces = set(d.faces)
    if not inner and len(dual.components()) == 1 and dual.is_path(faces):
        ends = {f for f in faces if dual.degree(f) <= 1}
        if n == 2:
            out.append(StrebelForm.I1)
        elif all(corners[f] == 0 for f in faces - ends):
            out.append(StrebelForm.I2)
        elif sum(corners[f] for f in faces - ends) == 1 and all(corners[f] == 1 for f in ends):
            out.append(StrebelForm.I3)
    if n == 3 and not inner:
        degs = {f: dual.degree(f) for f in faces}
        hubs = [f for f in faces if degs[f] == 3]
        if (len(hubs) == 1 and all(x <= 3 for x in degs.values())
                and sum(degs.values()) == 2 * (len(faces) - 1)):
            hub = hubs[0]
            hub_cut = frozenset(k for _, k in dual.adj[hub])
            branches = [c for c in dual.components(hub_cut) if hub not in c]
            if (len(branches) == 3 and all(dual.is_path(c) and sum(corners[f] for f in c) == 1 for c in branches)
                    and corners[hub] == 0):
                e = st.degrees(hub)[1]
                if e == 3:
                    out.append(StrebelForm.II)
                elif e == 2:
                    out.append(StrebelForm.III)
    if n == 3 and inner:
        node_arcs = {}
        for k, arc in enumerate(st.arcs):
            for v in set(arc.ends):
                node_arcs.setdefault(v, []).append(k)
        if len(inner) == 1:
            c = inner[0]
            arms = node_arcs[c]
            if (len(arms) == 3 and st.valence[c] == 3
                    and all(set(st.arcs[k].ends) - {c} <= st.on_boundary and not st.arcs[k].closed for k in arms)):
                cut = frozenset(arms)
                comps = dual.components(cut)
                cfaces = {st.dart_face[(c, w)] for w in st.nbrs[c]}
                if (len(comps) == 3 and all(dual.is_path(x, cut) for x in comps)
                        and all(len(x & cfaces) == 1 and sum(corners[f] for f in x) == 1 for x in comps)
                        and all(dual.degree(next(iter(x & cfaces)), cut) <= 1 for x in comps)):
                    out.append(StrebelForm.V)
        if len(inner) == 4:
            for c in inner:
                arms = node_arcs[c]
                ts = [next(iter(set(st.arcs[k].ends) - {c}), None) for k in arms]
                if not (len(arms) == 3 and st.valence[c] == 3 and sorted(ts) == sorted(set(inner) - {c})):
                    continue
                rungs = []
                ok = True
                for t in ts:
                    rest = [k for k in node_arcs[t] if k not in arms]
                    if st.valence[t] != 3 or len(rest) != 2:
                        ok = False
                        break
                    for k in rest:
                        if not set(st.arcs[k].ends) - {t} <= st.on_boundary:
                            ok = False
                    rungs += rest
                if not ok:
                    continue
                cut = frozenset(arms) | frozenset(rungs)
                cfaces = {st.dart_face[(c, w)] for w in st.nbrs[c]}
                comps = dual.components(cut)
                singles = [x for x in comps if x <= cfaces]
                ladders = [x for x in comps if not x & cfaces]
                if (len(cfaces) == 3 and len(singles) == 3 and len(ladders) == 3
                        and all(corners[f] == 0 for f in cfaces)
                        and all(dual.is_path(x, cut) and sum(corners[f] for f in x) == 1 for x in ladders)):
                    out.append(StrebelForm.IV)
                break
    return out


def classify_strebel(d: Diagram) -> StrebelForm:
    forms = strebel_matches(d)
    if len(forms) != 1:
        raise PreconditionError(f"polygon matches {len(forms)} templates: {[f.value for f in forms]}")
    return forms[0]


# ---------------------------------------------------------------- degeneracy

def is_degenerate(d: Diagram) -> Optional[int]:
    """A side junction whose removal still leaves a combinatorial polygon."""
    _require_polygon(d)
    if d.n_sides < 2:
        return None
    for k, s in enumerate(d.sides):
        merged = d.with_sides(d.sides[:k] + d.sides[k + 1:])
        if validate_diagram(merged).is_ngon:
            return d.boundary[s]
    return None


# ---------------------------------------------------------------- reductions

@dataclass
class Reduction:
    kind: str  # "vertex" or "face"
    where: tuple  # (v,) or (face, arc, arc)
    parts: tuple

    def to_dict(self) -> dict:
        return {"kind": self.kind, "where": list(self.where),
                "parts": [p.serialize() for p in self.parts]}


def _union_find(d: Diagram, removed_vertices, removed_edges):
    """Connectivity of the 1-skeleton after deleting some vertices and edge interiors."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    st = d.structure
    for v in st.vertices:
        if v not in removed_vertices:
            parent[v] = v
    for e in st.edges:
        if e in removed_edges:
            continue
        a, b = tuple(e)
        if a in removed_vertices or b in removed_vertices:
            continue
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return find, parent


def _split_sides(sides, lo, hi, L):
    """Junction positions falling strictly inside the cyclic range (lo, hi), re-based at lo."""
    span = (hi - lo) % L or L
    out = {0}
    for s in sides:
        off = (s - lo) % L
        if 0 < off < span:
            out.add(off)
    return tuple(sorted(out))


def _sub_labels(labels, faces, boundary):
    verts = set(boundary)
    for w in faces.values():
        verts.update(w)
    return {k: tok for k, tok in labels.items() if k[0] in verts and k[1] in verts}


def _vertex_reductions(d: Diagram, st: _Structure) -> list:
    out = []
    B = d.boundary
    L = len(B)
    for v in sorted(set(B)):
        pos = [j for j in range(L) if B[j] == v]
        if len(pos) != 2:
            continue
        faces_at = [f for f, w in d.faces.items() if v in w]
        if len(faces_at) != 2 or any(st.degrees(f)[1] == 0 for f in faces_at):
            continue
        find, parent = _union_find(d, {v}, set())
        p, q = pos
        parts = []
        for lo, hi in ((p, q), (q, p)):
            walk = tuple(B[(lo + t) % L] for t in range((hi - lo) % L))
            roots = {find(x) for x in walk if x != v}
            fs = {f: w for f, w in d.faces.items() if any(find(x) in roots for x in w if x != v)}
            parts.append(Diagram(fs, walk, _split_sides(d.sides, lo, hi, L), _sub_labels(d.labels, fs, walk)))
        out.append(Reduction("vertex", (v,), tuple(parts)))
    return out


def _face_reductions(d: Diagram, st: _Structure) -> list:
    out = []
    B = d.boundary
    L = len(B)
    dist = set(distinguished_vertices(d))
    fresh = max(st.vertices) + 1
    for fid in sorted(d.faces):
        runs = st.face_exterior_runs(fid)
        if len(runs) < 2:
            continue
        for a in range(len(runs)):
            for b in range(a + 1, len(runs)):
                ra, rb = runs[a], runs[b]
                arc_a = st.arc_of_edge[frozenset((B[ra[0]], B[(ra[0] + 1) % L]))]
                arc_b = st.arc_of_edge[frozenset((B[rb[0]], B[(rb[0] + 1) % L]))]
                if set(st.arcs[arc_a].ends) & set(st.arcs[arc_b].ends):
                    # arcs meeting at a cut vertex: collapsing between them is a pinch there
                    continue
                removed_edges = {frozenset((B[j], B[(j + 1) % L])) for j in ra + rb}
                removed_vertices = {B[j] for j in ra[1:] + rb[1:]}
                find, parent = _union_find(d, removed_vertices, removed_edges)
                roots = {find(x) for x in parent}
                if len(roots) != 2:
                    continue
                if {find(x) for x in dist if x in parent} != roots:
                    continue
                parts = _collapse(d, st, fid, ra, rb, fresh, find, parent)
                out.append(Reduction("face", (fid, arc_a, arc_b), parts))
    return out


def _collapse(d, st, fid, ra, rb, fresh, find, parent):
    """Split the face along a path from the midpoint of one exterior arc to the other."""
    B = list(d.boundary)
    L = len(B)
    m1, m2 = fresh, fresh + 1
    # subdivide the first edge of each run; insert later position first
    ja, jb = ra[0], rb[0]
    inserts = sorted([(ja, m1), (jb, m2)], reverse=True)
    sides = list(d.sides)
    for j, m in inserts:
        B.insert(j + 1, m)
        sides = [s + 1 if s > j else s for s in sides]
    L2 = len(B)
    P1, P2 = B.index(m1), B.index(m2)
    walk = list(d.faces[fid])
    for j, m in ((ja, m1), (jb, m2)):
        u, v = d.boundary[j], d.boundary[(j + 1) % L]
        n = len(walk)
        for t in range(n):
            if walk[t] == u and walk[(t + 1) % n] == v:
                walk.insert(t + 1, m)
                break
    labels = {k: tok for k, tok in d.labels.items()
              if frozenset(k) not in {frozenset((d.boundary[j], d.boundary[(j + 1) % L])) for j in (ja, jb)}}
    parts = []
    for lo, hi, w_keep, w_drop in ((P1, P2, m1, m2), (P2, P1, m2, m1)):
        span = (hi - lo) % L2
        bwalk = tuple(B[(lo + t) % L2] for t in range(span))
        n = len(walk)
        a = walk.index(w_keep)
        piece = []
        t = a
        while walk[t % n] != w_drop:
            piece.append(walk[t % n])
            t += 1
        faces = {fid: tuple(piece)}
        rootset = {find(x) for x in bwalk if x in parent}
        for f, wf in d.faces.items():
            if f != fid and any(find(x) in rootset for x in wf if x in parent):
                faces[f] = wf
        parts.append(Diagram(faces, bwalk, _split_sides(sides, lo, hi, L2), _sub_labels(labels, faces, bwalk)))
    return tuple(parts)


def reduce(d: Diagram) -> list:
    """All vertex and face reductions; an empty list means irreducible."""
    st = _require_polygon(d)
    return _vertex_reductions(d, st) + _face_reductions(d, st)


# ---------------------------------------------------------------- crossing paths

@dataclass
class CrossingPath:
    sides: tuple
    arcs: list  # Arc objects in order
    vertices: list  # arc endpoints along the path

    @property
    def length(self) -> int:
        return len(self.arcs)

    def to_dict(self) -> dict:
        return {"sides": list(self.sides), "length": self.length,
                "vertices": self.vertices, "arcs": [list(a.vertices) for a in self.arcs]}


def crossing_paths(d: Diagram, st: _Structure = None) -> list:
    """Shortest interior-arc path between each pair of opposite sides."""
    st = st or d.structure
    graph = {}
    for k, arc in enumerate(st.arcs):
        if arc.interior and not arc.closed:
            u, v = arc.ends
            graph.setdefault(u, []).append((v, k))
            graph.setdefault(v, []).append((u, k))
    out = []
    for s in (0, 1):
        src = set(st.side_vertices(s))
        dst = set(st.side_vertices(s + 2))
        prev = {v: None for v in sorted(src)}
        todo = deque(sorted(src))
        hit = None
        while todo:
            v = todo.popleft()
            if v in dst:
                hit = v
                break
            for w, k in sorted(graph.get(v, [])):
                if w not in prev:
                    prev[w] = (v, k)
                    todo.append(w)
        if hit is None:
            continue
        verts, ks = [hit], []
        while prev[verts[-1]] is not None:
            v, k = prev[verts[-1]]
            ks.append(k)
            verts.append(v)
        out.append(CrossingPath((s, s + 2), [st.arcs[k] for k in reversed(ks)], verts[::-1]))
    return out


def quad_crossing_path(d: Diagram, limit: int = 6) -> CrossingPath:
    """Shortest path of interior arcs joining opposite sides of a special quadrangle."""
    if not is_simple(d):
        raise PreconditionError("diagram is not simple")
    st = _require_polygon(d, (4,))
    v = is_degenerate(d)
    if v is not None:
        raise PreconditionError(f"quadrangle is degenerate at vertex {v}")
    if reduce(d):
        raise PreconditionError("quadrangle is reducible")
    paths = crossing_paths(d, st)
    if not paths:
        raise CrossingNotFound("no interior-arc path joins opposite sides")
    best = min(paths, key=lambda p: (p.length, p.sides))
    if best.length > limit:
        raise CrossingNotFound(f"shortest crossing path has {best.length} > {limit} arcs")
    return best


# ---------------------------------------------------------------- filling words

def _cancel_first(w):
    for i in range(len(w) - 1):
        if w[i] == -w[i + 1]:
            return i
    return None


def dehn_trace(p, w) -> list:
    """Rewriting steps taking ``w`` to the empty word.

    Each step is ``("cancel", i, x)`` (delete ``x -x`` at ``i``) or
    ``("replace", i, s, t)`` (replace factor ``s`` at ``i`` by ``t``).
    """
    from .geometry import _table

    table = _table(p)
    w = tuple(w)
    steps = []
    while True:
        i = _cancel_first(w)
        if i is not None:
            steps.append(("cancel", i, w[i]))
            w = w[:i] + w[i + 2:]
            continue
        hit = table.find(w)
        if hit is None:
            break
        i, k = hit
        s = w[i:i + k]
        t = table.rules[s]
        steps.append(("replace", i, s, t))
        w = w[:i] + t + w[i + k:]
    if w:
        raise ValueError("word is not trivial in the group")
    return steps


def fill_word(p, w) -> Diagram:
    """A disc diagram with boundary label ``w`` built from the Dehn rewriting trace.

    Steps are undone from the empty word: a cancelled pair becomes a spur,
    a replacement glues a relator face along the replaced factor.
    """
    from .geometry import is_trivial

    w = tuple(w)
    if not is_trivial(p, w):
        raise ValueError("word is not trivial in the group")
    if p.relators and min(len(r) for r in p.relators) < 3:
        raise ValueError("relators of length < 3 would need loops or multi-edges")
    steps = dehn_trace(p, w)
    name = p.alphabet.name
    path = [0]
    nv = 1
    faces = {}
    labels = {}

    def edge(a, b, x):
        labels[(a, b) if x > 0 else (b, a)] = name(abs(x))

    for step in reversed(steps):
        if step[0] == "cancel":
            _, i, x = step
            a = path[i]
            path = path[:i + 1] + [nv, a] + path[i + 1:]
            edge(a, nv, x)
            nv += 1
        else:
            _, i, s, t = step
            A, B = path[i], path[i + len(t)]
            new = list(range(nv, nv + len(s) - 1))
            nv += len(s) - 1
            chain = [A] + new + [B]
            for a, b, x in zip(chain, chain[1:], s):
                edge(a, b, x)
            back = path[i + 1:i + len(t)][::-1]
            faces[len(faces)] = tuple(([A] + new + [B] + back) if t else ([A] + new))
            path = path[:i + 1] + new + path[i + len(t):]
    return Diagram(faces, tuple(path[:-1]) if len(path) > 1 else (0,), (), labels)


def interior_arcs_are_pieces(d: Diagram, g) -> bool:
    """Whether every interior arc of a labelled diagram reads a piece of ``g``."""
    from .pieces import is_piece
    from .words import is_freely_reduced

    for arc in arcs(d):
        if not arc.interior:
            continue
        toks = d.read(list(arc.vertices), closed=False)
        word = g.alphabet.parse_word(" ".join(toks))
        if not word or not is_freely_reduced(word) or not is_piece(g, word):
            return False
    return True
