from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kleinquiver import cornered as C
from kleinquiver import mckay as mk
from kleinquiver import rep as R
from kleinquiver import stability as S
from kleinquiver.mckay import INF
from kleinquiver.oracle import ColoredPartition, enumerate_colored_partitions, partition_to_rep


def invariant_monomials(m: int, d: int) -> int:
    """Monomials x^a y^b of degree d fixed by (x, y) -> (w x, w^-1 y)."""
    return sum(1 for a in range(d + 1) if (a - (d - a)) % m == 0)


@pytest.fixture(scope="module")
def algebras():
    out = {}
    for label in ("A1", "A2"):
        data = mk.mckay(label)
        out[label] = {
            "B": C.truncated_basis("B", data, cap=6),
            "A": C.truncated_basis("A", data, cap=6),
        }
    return out


def test_B_degree_zero_is_idempotents():
    B = C.truncated_basis("B", mk.mckay("A1"), cap=0)
    assert B.basis_elements() == [(0, ()), (1, ())]


def test_A_degree_one_drops_b_star():
    for label in ("A1", "A2", "D4"):
        data = mk.mckay(label)
        A = C.truncated_basis("A", data, cap=1)
        q = A.quiver
        deg1 = {p[1][0] for (s, t, d), ps in A.basis.items() if d == 1 for p in ps}
        assert deg1 == {a.id for a in q.arrows if a.name != "b*"}


def test_Pi_degree_one_has_every_arrow():
    Pi = C.truncated_basis("Pi", mk.mckay("A2"), cap=1)
    assert Pi.dims_by_degree()[1] == len(Pi.quiver.arrows)


@pytest.mark.parametrize("label,m", [("A1", 2), ("A2", 3), ("A3", 4)])
def test_corner_at_zero_is_invariant_ring(label, m):
    B = C.truncated_basis("B", mk.mckay(label), cap=6)
    for d in range(7):
        assert len(B.piece(0, 0, d)) == invariant_monomials(m, d), d


def test_D4_corner_low_degrees():
    # binary dihedral of order 8: no invariants in degrees 1..3, two in degree 4
    B = C.truncated_basis("B", mk.mckay("D4"), cap=4)
    assert [len(B.piece(0, 0, d)) for d in range(5)] == [1, 0, 0, 0, 2]


def test_idempotents_are_orthogonal(algebras):
    B = algebras["A2"]["B"]
    for i in range(3):
        for j in range(3):
            prod = B.multiply(B.idempotent(i), B.idempotent(j))
            assert prod == (B.idempotent(i) if i == j else {})


@pytest.mark.parametrize("label", ["A1", "A2"])
@pytest.mark.parametrize("I", [(0,), (1,), (0, 1)])
def test_vector_space_decomposition(label, I, algebras):
    data = mk.mckay(label)
    if max(I) > data.r:
        pytest.skip("vertex outside the quiver")
    B = algebras[label]["B"]
    AI = C.truncated_basis("A_I", data, I=I, cap=6)
    for d in range(7):
        rhs = B.corner_dim_upto(I, I, d) + (B.corner_dim_upto((0,), I, d - 1) if d else 0) + 1
        assert AI.dim_upto(d) == rhs, d


@pytest.mark.parametrize("label", ["A1", "A2"])
def test_A_splits_as_B_plus_Bb_plus_inf(label, algebras):
    B, A = algebras[label]["B"], algebras[label]["A"]
    verts = tuple(range(mk.mckay(label).r + 1))
    for d in range(7):
        rhs = B.corner_dim_upto(verts, verts, d) + (B.corner_dim_upto((0,), verts, d - 1) if d else 0) + 1
        assert A.corner_dim_upto((INF, *verts), (INF, *verts), d) == rhs


def test_cap_guard():
    with pytest.raises(C.CapTooLargeForMemory):
        C.truncated_basis("B", mk.mckay("E8"), cap=60)


def test_unknown_kind():
    with pytest.raises(ValueError):
        C.truncated_basis("Q", mk.mckay("A1"), cap=1)


# --- ternary law -----------------------------------------------------------------------


@pytest.fixture(scope="module")
def ternary():
    return C.ternary_algebra(mk.mckay("A2"), (0, 2), cap=5)


def test_unit_law(ternary):
    rng = np.random.default_rng(0)
    one = ternary.unit()
    for _ in range(30):
        x = ternary.random_element(rng)
        assert C.ternary_multiply(one, x, ternary) == x
        assert C.ternary_multiply(x, one, ternary) == x


def test_R_times_R_vanishes(ternary):
    rng = np.random.default_rng(1)
    for _ in range(20):
        x, y = ternary.random_element(rng), ternary.random_element(rng)
        rx = C.TernaryElement({}, x.r, Fraction(0))
        ry = C.TernaryElement({}, y.r, Fraction(0))
        assert C.ternary_multiply(rx, ry, ternary).is_zero()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_associativity(ternary, seed):
    rng = np.random.default_rng(seed)
    x, y, z = (ternary.random_element(rng) for _ in range(3))
    left = ternary.multiply(ternary.multiply(x, y), z)
    right = ternary.multiply(x, ternary.multiply(y, z))
    assert left == right


def test_ternary_agrees_with_A_I(ternary):
    data = mk.mckay("A2")
    AI = C.truncated_basis("A_I", data, I=ternary.I, cap=ternary.cap)
    rng = np.random.default_rng(7)
    for _ in range(40):
        x, y = ternary.random_element(rng), ternary.random_element(rng)
        via_ternary = C.ternary_to_A(ternary.multiply(x, y), ternary, AI)
        via_A = AI.multiply(C.ternary_to_A(x, ternary, AI), C.ternary_to_A(y, ternary, AI))
        assert via_ternary == via_A


# --- assembling modules ----------------------------------------------------------------------


def test_zero_quotient():
    module = C.assemble_AI_module(C.CyclicQuotient((0,), {0: 0}, {}, {}))
    assert module.dims == {INF: 1, 0: 0}
    assert module.is_stable(S.eta_I([0], [0]))


def test_colength_one_quotient():
    rep = partition_to_rep(ColoredPartition((1,), 2))
    jI = R.restrict_jI(rep, [0])
    q = C.split_cornered(jI)
    module = C.assemble_AI_module(q)
    assert module.dims == {INF: 1, 0: 1}
    assert module.is_stable(S.eta_I([0], [1]))


def test_not_cyclic():
    one = np.array([[Fraction(1)]], dtype=object)
    quotient = C.CyclicQuotient((0, 1), {0: 1, 1: 1}, {(0, 1): [one]}, {1: [np.array([Fraction(1)], dtype=object)]})
    with pytest.raises(C.NotCyclic):
        C.assemble_AI_module(quotient)
    fixed = C.CyclicQuotient((0, 1), {0: 1, 1: 1}, {(0, 1): [one]}, {0: [np.array([Fraction(1)], dtype=object)]})
    assert C.assemble_AI_module(fixed).is_stable(S.eta_I([0, 1], [1, 1]))


def test_round_trip_on_oracle_quotients():
    checked = 0
    for m in (2, 3, 4):
        for n in range(1, 7):
            for cp in (c for v in _contents(m, n) for c in enumerate_colored_partitions(m, v)):
                rep = partition_to_rep(cp)
                for I in ([0], list(range(m)), [0, m - 1]):
                    I = sorted(set(I))
                    jI = R.restrict_jI(rep, I)
                    module = C.assemble_AI_module(C.split_cornered(jI))
                    assert module.is_stable(S.eta_I(I, [rep.dims[i] for i in I])), (cp, I)
                    checked += 1
    assert checked >= 100


def _contents(m, n):
    from kleinquiver.oracle import count_by_content

    return list(count_by_content(m, n))
