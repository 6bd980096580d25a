"""Pieces: words readable at two starts not related by an automorphism.

The search runs in the synchronized product of the graph with itself.  A
product state ``(u, v, last)`` records two current vertices and the last
letter read; transitions read a common letter that does not undo ``last``,
so only freely reduced words are generated.  Start pairs are restricted to
``orbit(u) < orbit(v)``; the reversed pairs read the same words.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import LabelledGraph, NotReducedError, OrbitTable, aut_orbits, validate_reduced
from .words import inverse, is_freely_reduced, letter_key, shortlex_key


@dataclass(frozen=True)
class PieceBound:
    """Maximum piece length; ``length is None`` means unbounded."""
    length: Optional[int]
    witness: tuple

    @property
    def finite(self) -> bool:
        return self.length is not None

    def __str__(self):
        return "Unbounded" if self.length is None else f"Finite({self.length})"


def _check(g, orbits):
    if orbits is None:
        if validate_reduced(g):
            raise NotReducedError("graph labelling is not reduced")
        orbits = aut_orbits(g)
    return orbits


def readable_starts(g: LabelledGraph, w) -> list:
    return [v for v in range(g.n) if g.read(v, w) is not None]


def is_piece(g: LabelledGraph, w, orbits: OrbitTable = None) -> bool:
    w = tuple(w)
    if not w or not is_freely_reduced(w):
        raise ValueError("is_piece expects a nonempty freely reduced word")
    orbits = _check(g, orbits)
    starts = {orbits.orbit[v] for v in readable_starts(g, w)}
    return len(starts) >= 2


def _start_pairs(g, orbits):
    pairs = []
    for u in range(g.n):
        for v in range(g.n):
            if orbits.orbit[u] < orbits.orbit[v]:
                pairs.append((u, v))
    return pairs


def _successors(g, state):
    u, v, last = state
    out = []
    for x in sorted(g.letters_at(u), key=letter_key):
        if last is not None and x == -last:
            continue
        hv = g.follow(v, x)
        if hv is not None:
            out.append((x, (g.follow(u, x), hv, x)))
    return out


def max_piece_length(g: LabelledGraph, orbits: OrbitTable = None) -> PieceBound:
    """Longest piece, or Unbounded with a pumpable cycle word."""
    orbits = _check(g, orbits)
    starts = [(u, v, None) for u, v in _start_pairs(g, orbits)]
    # iterative DFS with colouring: detect a reachable cycle, else longest path
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {}
    best = {}
    for s in starts:
        if colour.get(s, WHITE) != WHITE:
            continue
        colour[s] = GREY
        stack = [(s, iter(_successors(g, s)))]
        path = [s]
        path_letters = []
        while stack:
            node, it = stack[-1]
            advanced = False
            for x, nxt in it:
                c = colour.get(nxt, WHITE)
                if c == GREY:
                    k = path.index(nxt)
                    cyc = tuple(path_letters[k:]) + (x,)
                    return PieceBound(None, cyc)
                if c == WHITE:
                    colour[nxt] = GREY
                    stack.append((nxt, iter(_successors(g, nxt))))
                    path.append(nxt)
                    path_letters.append(x)
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            path.pop()
            if path_letters:
                path_letters.pop()
            colour[node] = BLACK
            cand = ()
            for x, nxt in _successors(g, node):
                w = (x,) + best[nxt]
                if len(w) > len(cand) or (len(w) == len(cand) and shortlex_key(w) < shortlex_key(cand)):
                    cand = w
            best[node] = cand
    witness = ()
    for s in starts:
        w = best[s]
        if len(w) > len(witness) or (len(w) == len(witness) and shortlex_key(w) < shortlex_key(witness)):
            witness = w
    return PieceBound(len(witness), witness)


def enumerate_pieces(g: LabelledGraph, max_len: int, orbits: OrbitTable = None) -> list:
    """All freely reduced piece words of length <= max_len, shortlex sorted."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    orbits = _check(g, orbits)
    found = set()
    frontier = [((u, v, None), ()) for u, v in _start_pairs(g, orbits)]
    seen = set(frontier)
    while frontier:
        nxt_frontier = []
        for state, w in frontier:
            for x, nxt in _successors(g, state):
                w2 = w + (x,)
                found.add(w2)
                found.add(inverse(w2))
                if len(w2) < max_len and (nxt, w2) not in seen:
                    seen.add((nxt, w2))
                    nxt_frontier.append((nxt, w2))
        frontier = nxt_frontier
    return sorted(found, key=shortlex_key)


def longest_piece_prefix(g: LabelledGraph, start: int, w, orbits: OrbitTable) -> int:
    """Length of the longest prefix of ``w`` (read from ``start``) that is a piece.

    ``w`` must be readable from ``start``; any other start vertex in a
    different orbit that reads a common prefix witnesses a piece.
    """
    best = 0
    o = orbits.orbit[start]
    for v in range(g.n):
        if orbits.orbit[v] == o:
            continue
        k = 0
        x = v
        for letter in w:
            x = g.follow(x, letter)
            if x is None:
                break
            k += 1
        best = max(best, k)
    return best


def naive_is_piece(g: LabelledGraph, w) -> bool:
    """Oracle: enumerate all label-following walks and all automorphisms.

    Automorphisms are found by brute force over vertex permutations
    restricted by labelled degree, independent of :func:`aut_orbits`.
    """
    w = tuple(w)
    embeddings = []
    for u in range(g.n):
        walk = [u]
        ok = True
        for x in w:
            nxt = [g.darts[i].head for i in g.darts_at[walk[-1]] if g.darts[i].letter == x]
            if not nxt:
                ok = False
                break
            walk.append(nxt[0])
        if ok:
            embeddings.append(tuple(walk))
    if len(embeddings) < 2:
        return False
    autos = brute_force_automorphisms(g)
    for e1 in embeddings:
        for e2 in embeddings:
            if e1 == e2:
                continue
            if not any(all(eta[a] == b for a, b in zip(e1, e2)) for eta in autos):
                return True
    return False


def brute_force_automorphisms(g: LabelledGraph) -> list:
    """All label-preserving automorphisms by backtracking over vertex images."""
    from collections import Counter

    edge_count = Counter(g.edges)
    sig = [tuple(sorted(g.darts[i].letter for i in g.darts_at[v])) for v in range(g.n)]
    result = []
    perm = [None] * g.n
    used = [False] * g.n

    def consistent(v):
        for (t, h, lab), c in edge_count.items():
            if t <= v and h <= v and edge_count.get((perm[t], perm[h], lab), 0) != c:
                return False
        return True

    def rec(v):
        if v == g.n:
            result.append(tuple(perm))
            return
        for img in range(g.n):
            if used[img] or sig[img] != sig[v]:
                continue
            perm[v] = img
            used[img] = True
            if consistent(v):
                rec(v + 1)
            used[img] = False
            perm[v] = None

    rec(0)
    return result


def naive_max_piece_length(g: LabelledGraph, limit: int) -> Optional[int]:
    """Oracle: longest piece of length <= limit, or None if one of length limit exists."""
    from .words import reduced_words

    letters = []
    for i in range(len(g.alphabet)):
        letters += [i + 1, -(i + 1)]
    best = 0
    for k in range(1, limit + 1):
        if any(naive_is_piece(g, w) for w in reduced_words(letters, k)):
            best = k
        else:
            return best
    return None
