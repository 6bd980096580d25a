"""
Word problem, Cayley balls and embedded components
==================================================

Dehn reduction decides triviality once the presentation is certified.  A
ball in the Cayley graph then carries the embedded copies of each
component, and the contraction and penetration bounds can be checked on
it directly.
"""

import time

from grsc import fixtures
from grsc.cancellation import presentation, rh_certificate
from grsc.geometry import cayley_ball, dehn_reduce, embed_component, geodesics, is_trivial
from grsc.metric import embeddings_through_identity, project, verify_all

g = fixtures.load("FIX2")
p = presentation(g, certified=True)
word = g.alphabet.parse_word
print("relator:", g.alphabet.format_word(p.relators[0]))

# A conjugate of the relator is trivial; cutting it short is not.
print(is_trivial(p, word("c d -c -d a b -a -b")), is_trivial(p, word("a b -a -b c d")))
print("reduced:", g.alphabet.format_word(dehn_reduce(p, word("a b -a -b c d -c"))))

# The ball of radius 2 in a one-relator group on four generators has 65
# elements, the same as in the free group: the relator has length 8.
b = cayley_ball(p, 2)
print("ball sizes:", [len(cayley_ball(p, r)) for r in range(4)])

# Geodesics between two elements, listed by the shortlex words of the
# elements they pass through.  A ball of radius 3 holds all of them.
b = cayley_ball(p, 3)
u, v = b.locate(word("a")), b.locate(word("-c"))
for gam in geodesics(b, u, v):
    print("  geodesic:", " | ".join(g.alphabet.format_word(b.reps[x]) or "1" for x in gam.vertices))

# FIX5 has two components and M = 2.  Project a point onto the component
# through the identity and then run every check in a radius-5 ball.
g = fixtures.load("FIX5")
p = presentation(g, certified=True)
M = rh_certificate(g).piece_bound
t0 = time.perf_counter()
b = cayley_ball(p, 5)
A = embed_component(g, 0, (0, 0), b)
x = b.locate(g.alphabet.parse_word("-a -c -a"))
rep = project(b, A, x, g)
print(f"ball radius 5: {len(b)} elements; projection of -a -c -a at distance {rep.distance}, "
      f"points {[g.alphabet.format_word(b.reps[q]) for q in rep.points]}")
print("components through the identity:", len(embeddings_through_identity(g, b)))

res = verify_all(b, g, M, delta=1, seed=0)
for key in ("contraction", "lambda1", "lambda2"):
    print(f"{key}: passed={res[key]['passed']}")
print(f"({time.perf_counter() - t0:.1f}s)")
