"""
Pieces, the 1/6 condition and certificates
==========================================

Walk through the bundled fixture graphs: longest pieces, the cancellation
verdict, the presentation read off simple cycles, and the certificate
listing peripheral automorphism groups.
"""

from grsc import fixtures
from grsc.cancellation import Certificate, check_gr16, presentation, rh_certificate
from grsc.graph import aut_orbits
from grsc.pieces import enumerate_pieces, max_piece_length

# A 7-cycle labelled a^7: rotations carry every path onto every other one,
# so nothing is a piece.
g = fixtures.load("FIX1")
print("FIX1 orbits:", aut_orbits(g).orbit)
print("FIX1 longest piece:", max_piece_length(g))

# Two 13-cycles sharing short labelled paths.  The pieces are listed in
# shortlex order and stop at length 2.
g = fixtures.load("FIX5")
print("FIX5 pieces up to length 3:", [g.alphabet.format_word(w) for w in enumerate_pieces(g, 3)])
print("FIX5 relators:", [g.alphabet.format_word(r) for r in presentation(g).relators])

# The verdict is strict: a piece of length k on a cycle of length n is fine
# only when 6k < n.
for name in fixtures.NAMES:
    h = fixtures.load(name)
    v = check_gr16(h)
    line = f"{name}: holds={v.holds} pieces={v.piece_bound}"
    if v.violation is not None:
        cyc, word = v.violation
        line += f"  witness {h.alphabet.format_word(word)} on a {len(cyc.word)}-cycle"
    print(line)

# With bounded pieces the certificate carries the constants that the
# metric checks use; unbounded pieces get a refusal instead.
for name in ("FIX3", "FIX5", "FIX6"):
    cert = rh_certificate(fixtures.load(name))
    if isinstance(cert, Certificate):
        print(cert.to_text())
    else:
        print(f"{name}: refused ({cert.reason})")
