import itertools
import json

import pytest
from hypothesis import given, strategies as st

from kleinquiver import mckay as mk
from kleinquiver.mckay import INF

from reference import NULL_ROOTS, all_labels, golden, group_order


@pytest.mark.parametrize("label", all_labels())
def test_adjacency_matches_golden_diagram(label):
    data = mk.mckay(label)
    assert [list(r) for r in data.adjacency] == golden(label)
    data.check()


@pytest.mark.parametrize("m", range(2, 13))
def test_sum_of_squares_cyclic_and_dihedral(m):
    for kind in ("cyclic", "binary_dihedral"):
        data = mk.build_mckay(mk.GroupFamily(kind, m))
        assert sum(d * d for d in data.irrep_dims) == data.group.order
        data.check()


def test_cyclic_two():
    data = mk.mckay("A1")
    assert data.irrep_dims == (1, 1)
    assert [list(r) for r in data.adjacency] == [[0, 2], [2, 0]]
    assert data.delta == (1, 1)


def test_cyclic_three_triangle():
    data = mk.mckay("A2")
    assert data.delta == (1, 1, 1)
    assert [list(r) for r in data.adjacency] == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


@pytest.mark.parametrize("label", ["E6", "E7", "E8"])
def test_exceptional_null_roots(label):
    data = mk.mckay(label)
    assert data.delta == NULL_ROOTS[label]
    assert sum(d * d for d in data.delta) == group_order(label)


def test_e8_dims_multiset_and_order():
    delta = mk.mckay("E8").delta
    assert sorted(delta) == sorted((1, 2, 3, 4, 5, 6, 4, 2, 3))
    assert sum(d * d for d in delta) == 120


def test_invalid_parameters():
    with pytest.raises(mk.InvalidGroupParameter):
        mk.GroupFamily("cyclic", 1)
    with pytest.raises(mk.InvalidGroupParameter):
        mk.GroupFamily("binary_dihedral", 1)
    with pytest.raises(mk.InvalidGroupParameter):
        mk.mckay("D3")


def test_group_label_parsing():
    assert mk.GroupFamily.parse("A2") == mk.GroupFamily("cyclic", 3)
    assert mk.GroupFamily.parse("Z3") == mk.GroupFamily("cyclic", 3)
    assert mk.GroupFamily.parse("D4") == mk.GroupFamily("binary_dihedral", 2)
    assert mk.GroupFamily("binary_dihedral", 5).order == 20


def test_frame_counts_for_a1():
    q = mk.frame(mk.mckay("A1"))
    assert len(q.vertices) == 3
    assert len(q.arrows) == 6
    assert len(q.pairs()) == 3


def test_frame_degrees_for_a2():
    q = mk.frame(mk.mckay("A2"))
    pairs = q.pairs()
    degree = {v: sum(1 for a, b in pairs if v in (a.tail, a.head)) for v in q.vertices}
    assert degree == {INF: 1, 0: 3, 1: 2, 2: 2}


@pytest.mark.parametrize("label", all_labels())
def test_frame_structure(label):
    data = mk.mckay(label)
    q = mk.frame(data)
    for a in q.arrows:
        star = q.star(a)
        assert star.partner == a.id and star.id != a.id
        assert (star.tail, star.head) == (a.head, a.tail)
        assert a.eps * star.eps == -1
    framing = [a for a in q.arrows if INF in (a.tail, a.head)]
    assert {(a.tail, a.head) for a in framing} == {(INF, 0), (0, INF)}
    assert q.b.tail == INF and q.b.head == 0 and q.b_star.tail == 0
    restricted = q.restrict(data.vertices)
    assert restricted == mk.mckay_quiver(data)
    for i, j in itertools.combinations(data.vertices, 2):
        n_pairs = sum(1 for a, _ in restricted.pairs() if {a.tail, a.head} == {i, j})
        assert n_pairs == data.adjacency[i][j]


def test_star_quiver_drops_only_b_star():
    data = mk.mckay("A2")
    q, s = mk.frame(data), mk.star_quiver(data)
    assert len(s.arrows) == len(q.arrows) - 1
    assert s.b_star is None and s.b.partner is None


def test_diagram_automorphisms_a1():
    assert sorted(mk.diagram_automorphisms(mk.mckay("A1"))) == [(0, 1), (1, 0)]


def test_diagram_automorphisms_e8_trivial():
    data = mk.mckay("E8")
    assert mk.diagram_automorphisms(data) == [tuple(range(9))]
    # brute force over all dimension-preserving permutations as a cross-check
    adj, dims = data.adjacency, data.irrep_dims
    count = 0
    for perm in itertools.permutations(range(9)):
        if all(dims[perm[i]] == dims[i] for i in range(9)) and all(
            adj[perm[i]][perm[j]] == adj[i][j] for i in range(9) for j in range(9)
        ):
            count += 1
    assert count == 1


def test_diagram_automorphisms_d4_outer_orbit():
    autos = mk.diagram_automorphisms(mk.mckay("D4"))
    assert len(autos) == 24
    assert {s[0] for s in autos} == {0, 1, 3, 4}
    assert all(s[2] == 2 for s in autos)


@pytest.mark.parametrize("label", ["A1", "A3", "D4", "D6", "E6", "E7"])
def test_automorphisms_form_a_group(label):
    data = mk.mckay(label)
    autos = set(mk.diagram_automorphisms(data))
    adj = data.adjacency
    n = len(data.irrep_dims)
    for s in autos:
        assert all(adj[s[i]][s[j]] == adj[i][j] for i in range(n) for j in range(n))
        assert mk.invert(s) in autos
        for t in autos:
            assert mk.compose(s, t) in autos


def test_iota_examples():
    assert mk.iota_of_zero(mk.mckay("A1"), 0) == 0
    assert mk.iota_of_zero(mk.mckay("A2"), 1) == 2
    with pytest.raises(mk.NoSuchAutomorphism):
        mk.iota_of_zero(mk.mckay("E8"), 7)


@pytest.mark.parametrize("label", ["A1", "A2", "A4", "D4", "D5", "D8", "E6", "E7"])
def test_iota_is_a_diagram_automorphism_image(label):
    data = mk.mckay(label)
    autos = mk.diagram_automorphisms(data)
    for i, d in enumerate(data.irrep_dims):
        if d != 1:
            with pytest.raises(mk.NoSuchAutomorphism):
                mk.iota_of_zero(data, i)
            continue
        target = mk.iota_of_zero(data, i)
        assert any(s[i] == 0 and s[0] == target for s in autos)


def test_json_round_trip_and_dot():
    data = mk.mckay("D5")
    text = mk.dumps(data)
    again = mk.McKayData.from_json(json.loads(text))
    assert again.adjacency == data.adjacency and again.irrep_dims == data.irrep_dims
    dot = mk.frame(data).to_dot()
    assert dot == mk.frame(mk.mckay("D5")).to_dot()
    assert '"inf" -> "0"' in dot


@given(st.integers(min_value=2, max_value=12), st.sampled_from(["cyclic", "binary_dihedral"]))
def test_mckay_equality_property(m, kind):
    data = mk.build_mckay(mk.GroupFamily(kind, m))
    q = mk.mckay_quiver(data)
    for k in data.vertices:
        outgoing = sum(data.irrep_dims[a.head] for a in q.out_arrows(k))
        assert 2 * data.irrep_dims[k] == outgoing
