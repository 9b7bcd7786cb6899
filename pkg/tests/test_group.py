import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cencay.errors import CapExceededError, InvalidInputError
from cencay.group import (
    FiniteGroup,
    Subgroup,
    automorphism_group,
    closure,
    conjugacy_classes,
    greedy_generators,
    group_from_generators,
    group_isomorphisms,
    is_almost_simple,
    quotient_with_epimorphism,
    socle,
    subgroups_over_socle,
)
from .fixture_groups import alt5, c2_x_alt5, cyclic, sym5


def test_closure_orders():
    assert alt5().order == 60
    assert sym5().order == 120
    assert group_from_generators([], degree=1).order == 1


def test_closure_cap():
    with pytest.raises(CapExceededError):
        group_from_generators([(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)], cap=50)


def test_closure_rejects_non_permutation():
    with pytest.raises(InvalidInputError):
        group_from_generators([(0, 0, 1)])


def test_identity_is_index_zero():
    G = sym5()
    n = G.order
    assert list(G.table[0]) == list(range(n))
    assert list(G.table[:, 0]) == list(range(n))


def test_conjugacy_classes_sym5():
    # brute-force conjugation orbits; sizes are the S5 cycle-type counts
    cc = conjugacy_classes(sym5())
    assert cc.size_multiset() == (1, 10, 15, 20, 20, 24, 30)
    assert cc.classes[0] == (0,)


def test_conjugacy_classes_alt5():
    cc = conjugacy_classes(alt5())
    assert cc.size_multiset() == (1, 12, 12, 15, 20)


def test_conjugacy_classes_trivial():
    cc = conjugacy_classes(group_from_generators([], degree=1))
    assert cc.k == 1


def test_classes_closed_under_conjugation_and_inversion_sizes():
    G = sym5()
    cc = conjugacy_classes(G)
    for cls in cc.classes:
        mem = set(cls)
        assert all(G.conj(x, g) in mem for x in cls for g in range(0, G.order, 7))
        inv_cls = {int(G.inverse[x]) for x in cls}
        assert len(inv_cls) == len(cls)


def test_socle_sym5_is_even_subgroup():
    G = sym5()
    s = socle(G)
    assert s.order == 60
    # the even permutations are exactly the squares' closure
    squares = closure(G, (int(G.table[x, x]) for x in range(G.order)))
    assert s.elements == squares
    assert s.is_normal


def test_socle_alt5_is_itself():
    G = alt5()
    assert socle(G).order == 60


def test_almost_simple_flags():
    assert is_almost_simple(sym5())
    assert is_almost_simple(alt5())
    assert not is_almost_simple(c2_x_alt5())
    assert not is_almost_simple(cyclic(6))


def test_subgroups_over_socle_sym5():
    G = sym5()
    subs = subgroups_over_socle(G, require_normal=False)
    assert [h.order for h in subs] == [60, 120]
    subs_n = subgroups_over_socle(G, require_normal=True)
    assert [h.order for h in subs_n] == [60, 120]


def test_subgroups_over_socle_alt5():
    subs = subgroups_over_socle(alt5(), require_normal=False)
    assert [h.order for h in subs] == [60]


def test_automorphism_group_counts():
    assert len(automorphism_group(alt5())) == 120
    assert len(automorphism_group(sym5())) == 120
    assert len(automorphism_group(group_from_generators([], degree=1))) == 1


def test_automorphisms_are_table_maps():
    G = alt5()
    for a in automorphism_group(G)[:10]:
        assert a[0] == 0
        assert np.array_equal(a[G.table], G.table[a[:, None], a[None, :]])


def test_group_isomorphisms_relabelled_alt5():
    G = alt5()
    # same group, different generator order gives a different element ordering
    H = group_from_generators([(1, 2, 0, 3, 4), (1, 2, 3, 4, 0)])
    res = group_isomorphisms(G, H)
    assert res is not None
    beta, auts = res
    assert np.array_equal(beta[G.table], H.table[beta[:, None], beta[None, :]])
    assert len(auts) == 120


def test_group_isomorphisms_none_for_cyclic():
    assert group_isomorphisms(alt5(), cyclic(60)) is None


def test_isomorphism_count_equals_aut_order():
    G = sym5()
    res = group_isomorphisms(G, G)
    assert res is not None
    assert len(res[1]) == len(automorphism_group(G))


def test_quotient_sym5_by_socle():
    G = sym5()
    Q, pi = quotient_with_epimorphism(G, socle(G))
    assert Q.order == 2
    assert sorted(len(f) for f in pi.kernel_fibers) == [60, 60]


def test_quotient_by_whole_group_and_trivial():
    G = alt5()
    Q, _ = quotient_with_epimorphism(G, Subgroup(G, tuple(range(G.order))))
    assert Q.order == 1
    Q2, pi2 = quotient_with_epimorphism(G, Subgroup(G, (0,)))
    assert Q2.order == G.order
    assert np.array_equal(pi2.map, np.arange(G.order))


def test_quotient_requires_normal():
    G = sym5()
    # point stabilizer of S5 is not normal
    stab = closure(G, [x for x in range(G.order) if G.names and "4" not in G.names[x]][:8])
    H = Subgroup(G, stab)
    if not H.is_normal:
        with pytest.raises(InvalidInputError):
            quotient_with_epimorphism(G, H)


def test_normal_subgroups_contain_socle_when_almost_simple():
    G = sym5()
    soc = set(socle(G).elements)
    for x in range(1, G.order):
        from cencay.group import normal_closure

        nc = set(normal_closure(G, x))
        assert soc <= nc


def test_index_of_socle_within_log_bound():
    for G in (alt5(), sym5()):
        assert G.order // socle(G).order <= math.log2(G.order)


def test_greedy_generators_generate():
    for G in (alt5(), sym5(), cyclic(12)):
        gens = greedy_generators(G)
        assert len(closure(G, gens)) == G.order
        assert len(gens) <= 3


def test_subgroup_right_cosets():
    G = sym5()
    soc = socle(G)
    cosets = soc.right_cosets()
    assert len(cosets) == 2
    assert cosets[0] == soc.elements


@st.composite
def small_perm_group(draw):
    deg = draw(st.integers(min_value=2, max_value=5))
    k = draw(st.integers(min_value=1, max_value=2))
    gens = []
    for _ in range(k):
        p = draw(st.permutations(list(range(deg))))
        gens.append(tuple(p))
    return gens, deg


@settings(max_examples=40, deadline=None)
@given(small_perm_group())
def test_random_closures_are_groups(data):
    gens, deg = data
    G = group_from_generators(gens, degree=deg)
    # validation ran in the constructor; spot the Lagrange property
    cc = conjugacy_classes(G)
    assert sum(len(c) for c in cc.classes) == G.order
    for cls in cc.classes:
        assert G.order % G.element_order(cls[0]) == 0


@settings(max_examples=20, deadline=None)
@given(small_perm_group())
def test_random_group_self_isomorphisms(data):
    gens, deg = data
    G = group_from_generators(gens, degree=deg)
    if G.order > 24:
        return
    res = group_isomorphisms(G, G)
    assert res is not None
    assert len(res[1]) == len(automorphism_group(G))
