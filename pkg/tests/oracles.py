"""Brute-force reference implementations used only by the tests.

Nothing here imports the search code it is compared against.  Graphs are
used through their raw edge lists.
"""

from __future__ import annotations

import random
from collections import deque
from itertools import product


# graphs ------------------------------------------------------------------

def darts(g):
    """(tail, head, letter, edge) for both directions of every edge."""
    out = []
    for e, (t, h, x) in enumerate(g.edges):
        out.append((t, h, x + 1, e))
        out.append((h, t, -(x + 1), e))
    return out


def automorphisms(g):
    """All label-preserving vertex permutations.

    Plain backtracking over images vertex by vertex, checking every edge
    whose ends are both assigned; no label-following is used.
    """
    from collections import Counter

    count = Counter(g.edges)
    sig = [sorted(x for t, h, x, _ in darts(g) if t == v) for v in range(g.n)]
    incident = [[] for _ in range(g.n)]
    for t, h, x in count:
        incident[max(t, h)].append((t, h, x))
    out = []
    perm = [None] * g.n
    used = set()

    def rec(v):
        if v == g.n:
            out.append(tuple(perm))
            return
        for img in range(g.n):
            if img in used or sig[img] != sig[v]:
                continue
            perm[v] = img
            if all(count.get((perm[t], perm[h], x), 0) == count[(t, h, x)] for t, h, x in incident[v]):
                used.add(img)
                rec(v + 1)
                used.discard(img)
            perm[v] = None

    rec(0)
    return out


def walks(g, w):
    """Every walk reading ``w``, as a vertex tuple (any start)."""
    ds = darts(g)
    found = []
    for s in range(g.n):
        partial = [(s,)]
        for x in w:
            partial = [p + (h,) for p in partial for t, h, y, _ in ds if t == p[-1] and y == x]
        found += partial
    return found


def is_piece(g, w, autos=None):
    """Two walks reading ``w`` that no automorphism carries one onto the other."""
    ws = walks(g, w)
    if len(ws) < 2:
        return False
    autos = automorphisms(g) if autos is None else autos
    for p in ws:
        for q in ws:
            if p != q and not any(all(eta[a] == b for a, b in zip(p, q)) for eta in autos):
                return True
    return False


def reduced_words(n_letters, length):
    letters = [s * (i + 1) for i in range(n_letters) for s in (1, -1)]
    for w in product(letters, repeat=length):
        if all(w[i] != -w[i + 1] for i in range(length - 1)):
            yield w


def max_piece(g, limit, autos=None):
    """Longest piece up to ``limit``; ``limit`` itself means "at least limit"."""
    autos = automorphisms(g) if autos is None else autos
    best = 0
    for k in range(1, limit + 1):
        if not any(is_piece(g, w, autos) for w in reduced_words(len(g.alphabet), k)):
            return best
        best = k
    return best


def cycles(g):
    """Simple cycles as (vertex tuple, letter tuple), one per edge set."""
    ds = darts(g)
    seen = {}
    for s in range(g.n):
        stack = [((s,), (), ())]
        while stack:
            verts, letters, used = stack.pop()
            for t, h, x, e in ds:
                if t != verts[-1] or e in used:
                    continue
                if h == s:
                    key = frozenset(used + (e,))
                    seen.setdefault(key, (verts, letters + (x,)))
                elif h not in verts:
                    stack.append((verts + (h,), letters + (x,), used + (e,)))
    return list(seen.values())


def gr16(g):
    """(holds, longest offending piece length or 0) by checking every subpath."""
    autos = automorphisms(g)
    worst = 0
    holds = True
    for _, word in cycles(g):
        k = len(word)
        for seq_w in (word, tuple(-x for x in word[::-1])):
            for p in range(k):
                for length in range(1, k):
                    w = tuple(seq_w[(p + j) % k] for j in range(length))
                    if 6 * length >= k and is_piece(g, w, autos):
                        holds = False
                        worst = max(worst, length)
    return holds, worst


def random_reduced_graph(rng: random.Random, max_vertices=6, max_edges=8, n_letters=2):
    """Random graph whose labelling is reduced (edges violating it are skipped)."""
    from grsc.graph import LabelledGraph
    from grsc.words import Alphabet

    n = rng.randint(1, max_vertices)
    m = rng.randint(0, max_edges)
    out_seen, in_seen = set(), set()
    edges = []
    for _ in range(m * 3):
        if len(edges) == m:
            break
        t, h, x = rng.randrange(n), rng.randrange(n), rng.randrange(n_letters)
        if (t, x) in out_seen or (h, x) in in_seen:
            continue
        out_seen.add((t, x))
        in_seen.add((h, x))
        edges.append((t, h, x))
    return LabelledGraph(Alphabet(tuple("ab"[:n_letters])), n, edges)


# words ---------------------------------------------------------------------

def _free_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def trivial_words(relators, max_len, slack=None):
    """Freely reduced words of length <= ``max_len`` equal to 1, by rewriting search.

    Breadth-first from the empty word over freely reduced words of length at
    most ``max_len + slack`` (default: the longest relator).  A move inserts
    a cyclic conjugate of a relator or its inverse anywhere and freely
    reduces; deleting a relator factor is the insertion of its inverse, so
    the search is symmetric and ``w`` is found iff ``w`` rewrites to 1
    within the length bound.
    """
    conj = set()
    for r in relators:
        for s in (tuple(r), tuple(-x for x in reversed(r))):
            for i in range(len(s)):
                conj.add(s[i:] + s[:i])
    conj = sorted(conj)
    bound = max_len + (max((len(r) for r in relators), default=0) if slack is None else slack)
    seen = {()}
    queue = deque([()])
    while queue:
        w = queue.popleft()
        for i in range(len(w) + 1):
            for c in conj:
                z = _free_reduce(w[:i] + c + w[i:])
                if len(z) <= bound and z not in seen:
                    seen.add(z)
                    queue.append(z)
    return {w for w in seen if len(w) <= max_len}


def free_ball_size(rank, r):
    return 1 + sum(2 * rank * (2 * rank - 1) ** (k - 1) for k in range(1, r + 1))


def bfs_distances(n, edges):
    """All-pairs distances of an undirected graph by repeated BFS."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    out = []
    for s in range(n):
        d = [-1] * n
        d[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v in adj[u]:
                if d[v] < 0:
                    d[v] = d[u] + 1
                    q.append(v)
        out.append(d)
    return out
