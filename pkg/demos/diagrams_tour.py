"""
Disc diagrams, Strebel forms and crossing paths
===============================================

Generate small simple combinatorial bigons and triangles, sort them into
Strebel's forms, look for crossing paths in special quadrangles, and
build a diagram for a trivial word.
"""

from collections import Counter

from grsc import fixtures
from grsc.cancellation import presentation
from grsc.diagram_gen import polygons
from grsc.diagrams import (classify_strebel, fill_word, interior_arcs_are_pieces, is_degenerate,
                           is_simple, parse_diagram, quad_crossing_path, reduce, validate_diagram)

# Two faces glued along one arc, with the sides starting at the two
# valence-2 vertices opposite the chord.
text = """
faces 2
face 0: 0 1 2 3
face 1: 0 3 4 5
boundary: 0 1 2 3 4 5
sides: 1 4
"""
d = parse_diagram(text)
print(validate_diagram(d).to_dict())
print("form:", classify_strebel(d).value)

# Every generated simple bigon and triangle with up to 6 faces.
for n in (2, 3):
    forms = Counter(classify_strebel(p).value for p in polygons(n, 6) if is_simple(p))
    print(f"{n}-gons:", dict(sorted(forms.items())))

# Special quadrangles: simple, with no degenerate vertex and no reduction.
# Each one has opposite sides joined by a short path of interior arcs.
lengths = Counter()
for q in polygons(4, 7, nondegenerate=True):
    if is_simple(q) and is_degenerate(q) is None and not reduce(q):
        lengths[quad_crossing_path(q).length] += 1
print("crossing path lengths:", dict(sorted(lengths.items())))

# Undo the Dehn rewriting of a trivial word to glue a diagram whose faces
# read relators.
g = fixtures.load("FIX5")
p = presentation(g, certified=True)
w = p.relators[0] + p.relators[1]
filled = fill_word(p, w)
print(f"{len(filled.faces)} faces, boundary reads w: "
      f"{filled.boundary_word() == g.alphabet.format_word(w).split()}, "
      f"interior arcs are pieces: {interior_arcs_are_pieces(filled, g)}")
