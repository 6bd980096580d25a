import json

import pytest

from conftest import ball, graph
from grsc.cancellation import check_gr16, presentation
from grsc.geometry import Geodesic, cayley_ball, embed_component, geodesics
from grsc.graph import LabelledGraph
from grsc.metric import (FAIL, INAPPLICABLE, PASS, ComponentField, check_lambda2,
                         embeddings_through_identity, is_theta_fat, project, report_json,
                         verify_all, verify_contraction, verify_lambda1, verify_lambda2)
from grsc.pieces import is_piece, max_piece_length
from grsc.words import Alphabet
import oracles


def _setup(name, r, comp=0):
    g, b = graph(name), ball(name, r)
    return g, b, embed_component(g, comp, (0 if comp == 0 else 13, 0), b)


def _distance_to(b, points):
    """Ball distance to a set by multi-source BFS on the edge list."""
    n = len(b)
    ref = oracles.bfs_distances(n, [(u, v) for u, v, _ in b.edges()]) if n <= 1000 else None
    return [min(ref[p][x] for p in points) for x in range(n)], ref


def test_projection_onto_itself():
    g, b, A = _setup("FIX5", 4)
    for x in A.elements():
        rep = project(b, A, x, g)
        assert rep.points == [x] and rep.distance == 0


def test_projection_soundness():
    g, b, A = _setup("FIX5", 4)
    dA, ref = _distance_to(b, A.elements())
    fld = ComponentField(b, A, False)
    single = 0
    for x in range(len(b)):
        rep = project(b, A, x, g, fld)
        if not rep.certified:
            continue
        assert rep.distance == dA[x]
        assert rep.points == sorted(p for p in A.elements() if ref[p][x] == dA[x])
        if dA[x] == 1:
            assert len(rep.points) == 1
            single += 1
    assert single > 0


def test_one_step_off_the_component():
    g, b, A = _setup("FIX5", 5)
    a = A.vmap[0]
    image = A.image
    x = next(v for v in b.neighbours(a) if v not in image)
    rep = project(b, A, x, g)
    assert rep.points == [a] and rep.distance == 1 and rep.certified


def test_equidistant_point_has_two_projections():
    # 7-cycle relator whose longest piece is one letter: a relator face glued to the
    # component along one edge has a far point 3 steps from both ends of that edge
    alpha = Alphabet(("a", "b", "c"))
    g = LabelledGraph.from_cycles(alpha, [alpha.parse_word("a a b a -b a c")])
    assert check_gr16(g).holds and max_piece_length(g).length == 1
    b = cayley_ball(presentation(g, certified=True), 6)
    A = embed_component(g, 0, (0, 0), b)
    x = b.index_of(alpha.parse_word("-a -c -a"))
    rep = project(b, A, x, g)
    assert rep.certified and rep.distance == 3
    assert [b.reps[p] for p in rep.points] == [(), (1,)]


def test_contraction_vacuous_on_a_finite_group():
    g, b = graph("FIX1"), ball("FIX1", 3)
    A = embed_component(g, 0, (0, 0), b)
    rep = verify_contraction(b, A, 0, g)
    assert rep.passed and rep.scored == 0


@pytest.mark.parametrize("name, r, M", [("FIX2", 4, 1), ("FIX5", 5, 2)])
def test_contraction(name, r, M):
    g, b = graph(name), ball(name, r)
    for A in embeddings_through_identity(g, b):
        rep = verify_contraction(b, A, M, g, seed=3)
        assert rep.passed and rep.bound == 2 * M
        assert rep.scored > 0 and rep.max_observed <= 2 * M


def test_contraction_report_scores_only_disjoint_geodesics():
    g, b, A = _setup("FIX5", 5)
    rep = verify_contraction(b, A, 2, g, seed=1)
    image = A.image
    for verts, _ in rep.examples:
        assert not set(verts) & image


def test_lambda1_disjoint_neighbourhoods():
    g, b = graph("FIX5"), ball("FIX5", 5)
    A = embed_component(g, 0, (0, 0), b)
    # a translate far away along a word that leaves the image quickly
    far = b.locate(g.alphabet.parse_word("-a -a -a -a -a"))
    B = embed_component(g, 0, (0, far), b)
    rep = verify_lambda1(b, A, B, 0, 2, g)
    assert rep.intersection == [] and rep.diameter == 0 and rep.status == PASS


def test_lambda1_through_identity():
    g, b = graph("FIX5"), ball("FIX5", 5)
    A0, A1 = embeddings_through_identity(g, b)
    rep = verify_lambda1(b, A0, A1, 0, 2, g)
    assert rep.status == PASS and rep.bound == 10
    assert 0 < rep.diameter <= 2
    assert rep.path_is_piece and is_piece(g, rep.path_word)
    assert g.alphabet.format_word(rep.path_word) in ("a b", "-b -a")


def test_lambda1_monotone_in_delta():
    g, b = graph("FIX5"), ball("FIX5", 5)
    A0, A1 = embeddings_through_identity(g, b)
    reps = [verify_lambda1(b, A0, A1, d, 2, g) for d in (0, 1, 2)]
    assert [r.bound for r in reps] == [10, 20, 30]
    assert reps[0].diameter <= reps[1].diameter <= reps[2].diameter
    assert set(reps[0].intersection) <= set(reps[1].intersection) <= set(reps[2].intersection)


def test_lambda1_rejects_equal_components():
    g, b = graph("FIX5"), ball("FIX5", 4)
    A = embed_component(g, 0, (0, 0), b)
    with pytest.raises(ValueError):
        verify_lambda1(b, A, A, 0, 2, g)
    B = embed_component(g, 1, (13, 0), b)
    with pytest.raises(ValueError):
        verify_lambda1(b, A, B, -1, 2, g)


def test_lambda2_geodesic_through_the_component():
    g, b, A = _setup("FIX5", 5)
    a, c = A.vmap[0], A.vmap[3]
    gam = geodesics(b, a, c)[0]
    res = verify_lambda2(b, A, gam, 2, g)
    assert res.status == PASS and res.witness_distance == 0


def test_lambda2_far_endpoint_is_inapplicable():
    g, b, A = _setup("FIX5", 5)
    fld = ComponentField(b, A, False)
    x = next(v for v in range(len(b)) if fld.certified[v] and fld.exact_dist[v] == 2)
    # a short geodesic starting two steps off the component
    y = b.neighbours(x)[0]
    res = verify_lambda2(b, A, Geodesic((x, y)), 2, g, fld)
    assert res.status == INAPPLICABLE


def test_lambda2_sweep():
    g, b = graph("FIX5"), ball("FIX5", 5)
    for A in embeddings_through_identity(g, b):
        rep = check_lambda2(b, A, 2, g, seed=0)
        assert rep.passed and rep.counts[PASS] > 0 and rep.counts[FAIL] == 0
        assert rep.max_witness_distance <= 5


def test_fat_polygons():
    b = ball("FIX2", 3)
    g0 = geodesics(b, 0, b.index_of((1,)))[0]
    back = Geodesic(g0.vertices[::-1])
    assert is_theta_fat(b, [g0, back], 0) is False
    with pytest.raises(ValueError):
        is_theta_fat(b, [g0, back], -1)
    with pytest.raises(ValueError):
        is_theta_fat(b, [g0], 0)


def _bfs_from(b, sources):
    edges = {}
    for u, v, _ in b.edges():
        edges.setdefault(u, []).append(v)
        edges.setdefault(v, []).append(u)
    d = {s: 0 for s in sources}
    frontier = list(sources)
    while frontier:
        nxt = []
        for u in frontier:
            for v in edges.get(u, []):
                if v not in d:
                    d[v] = d[u] + 1
                    nxt.append(v)
        frontier = nxt
    return d


def test_fat_quadrangle_around_a_relator():
    b = ball("FIX2", 4)
    W = graph("FIX2").alphabet.parse_word
    # corners every two letters round the relator cycle a b -a -b c d -c -d
    corners = [b.locate(W(t)) for t in ("", "a b", "a b -a -b", "a b -a -b c d")]
    sides = [geodesics(b, corners[i], corners[(i + 1) % 4], check=False)[0] for i in range(4)]
    assert [s.length for s in sides] == [2, 2, 2, 2]

    def apart(i, j):
        d = _bfs_from(b, sides[i].vertices)
        return min(d[y] for y in sides[j].vertices)

    assert apart(0, 2) == apart(1, 3) == 2
    assert is_theta_fat(b, sides, 1) is True
    assert is_theta_fat(b, sides, 2) is False


def test_verify_all_report_is_deterministic():
    g, b = graph("FIX5"), ball("FIX5", 4)
    r1 = verify_all(b, g, 2, 1, seed=5)
    r2 = verify_all(b, g, 2, 1, seed=5)
    assert report_json(r1) == report_json(r2)
    doc = json.loads(report_json(r1))
    assert doc["lambda1"]["bound"] == 20 and doc["contraction"]["bound"] == 4
    assert doc["lambda2"]["radius"] == 5
