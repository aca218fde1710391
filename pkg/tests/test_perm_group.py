import pytest
from hypothesis import given, strategies as st

from elatlab.core.catalog import catalog_group
from elatlab.core.exceptions import GroupConstructionError, NotNormalError, OrderBoundError
from elatlab.core.perm_group import (
    automorphism_group,
    compose,
    group_from_generators,
    group_from_table,
    identity_perm,
    invert,
    is_normal_members,
    isomorphism_class,
    quotient_group,
)

S3_GENS = [(1, 0, 2), (1, 2, 0)]


def test_compose_applies_right_factor_first():
    a = (1, 0, 2)
    b = (0, 2, 1)
    assert compose(a, b) == (1, 2, 0)
    assert compose(b, a) == (2, 0, 1)


def test_invert():
    p = (2, 0, 3, 1)
    assert compose(p, invert(p)) == identity_perm(4)
    assert compose(invert(p), p) == identity_perm(4)


def test_s3_closure_and_table():
    g = group_from_generators(S3_GENS, label="S3")
    assert g.order == 6
    assert g.elements[0] == identity_perm(3)
    assert g.check_axioms() == []
    assert not g.is_abelian
    assert g.order_census == (1, 2, 2, 2, 3, 3)
    assert g.exponent == 6
    assert g.rank == 2


def test_generating_set_is_minimum():
    c6 = group_from_generators([(1, 2, 0, 3, 4), (0, 1, 2, 4, 3)])
    assert c6.order == 6
    assert c6.rank == 1
    v4 = group_from_generators([(1, 0, 2, 3), (0, 1, 3, 2)])
    assert v4.rank == 2


def test_trivial_group():
    g = group_from_generators([], degree=1)
    assert g.order == 1
    assert g.rank == 0
    assert g.check_axioms() == []


def test_mismatched_degrees():
    with pytest.raises(GroupConstructionError):
        group_from_generators([(1, 0), (1, 2, 0)])


def test_not_a_bijection():
    with pytest.raises(GroupConstructionError):
        group_from_generators([(0, 0, 1)])


def test_closure_bound():
    with pytest.raises(OrderBoundError, match="group too large"):
        group_from_generators([(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)], max_order=50)


def test_group_from_table_matches_generators():
    z4 = [[(i + j) % 4 for j in range(4)] for i in range(4)]
    g = group_from_table(z4, label="Z4")
    c4 = group_from_generators([(1, 2, 3, 0)])
    assert g.order == 4
    assert isomorphism_class(g, c4) is not None


def test_group_from_table_rejects_non_latin():
    with pytest.raises(GroupConstructionError):
        group_from_table([[0, 1], [1, 1]])


def test_quotient_of_s3_by_a3():
    g = group_from_generators(S3_GENS)
    a3 = g.closure([g.index[(1, 2, 0)]])
    q, projection = quotient_group(g, a3)
    assert q.order == 2
    assert projection.is_homomorphism()
    assert projection.kernel() == a3


def test_quotient_by_non_normal_subgroup():
    g = group_from_generators(S3_GENS)
    c2 = g.closure([g.index[(1, 0, 2)]])
    assert not is_normal_members(g, c2)
    with pytest.raises(NotNormalError):
        quotient_group(g, c2)


@pytest.mark.parametrize("gens, expected", [
    (S3_GENS, 6),
    ([(1, 2, 3, 0)], 2),
    ([(1, 0, 2, 3), (0, 1, 3, 2)], 6),
    ([(1, 2, 3, 0), (3, 2, 1, 0)], 8),
])
def test_automorphism_counts(gens, expected):
    g = group_from_generators(gens)
    automorphisms = automorphism_group(g)
    assert len(automorphisms) == expected
    assert all(a.is_homomorphism() and a.is_bijective() for a in automorphisms)


def test_non_isomorphic_groups_of_equal_order():
    c4 = group_from_generators([(1, 2, 3, 0)])
    v4 = group_from_generators([(1, 0, 2, 3), (0, 1, 3, 2)])
    assert isomorphism_class(c4, v4) is None


@given(st.lists(st.permutations(list(range(5))), min_size=1, max_size=3))
def test_closure_is_a_group(perms):
    g = group_from_generators([tuple(p) for p in perms])
    assert g.check_axioms() == []
    assert 120 % g.order == 0
    for p in perms:
        assert tuple(p) in g.index


@pytest.mark.parametrize("name", ["C6", "V4", "S3", "D4", "Q8", "A4", "Z2xZ2xZ2"])
def test_automorphisms_form_a_group(name):
    g = catalog_group(name)
    maps = {a.map for a in automorphism_group(g)}
    assert tuple(range(g.order)) in maps
    for a in maps:
        inverse = [0] * g.order
        for i, image in enumerate(a):
            inverse[image] = i
        assert tuple(inverse) in maps
        for b in maps:
            assert tuple(a[b[i]] for i in range(g.order)) in maps


@pytest.mark.parametrize("first, second, isomorphic", [
    ("S3", "Dih6", True),
    ("C6", "C3xC2", True),
    ("C4", "V4", False),
    ("Q8", "D4", False),
    ("Z3xZ3", "C9", False),
    ("A4", "Dih12", False),
    ("Q12", "Dih12", False),
])
def test_isomorphism_test_is_symmetric(first, second, isomorphic):
    g, h = catalog_group(first), catalog_group(second)
    forward, backward = isomorphism_class(g, h), isomorphism_class(h, g)
    assert (forward is not None) == (backward is not None) == isomorphic
    for witness in (forward, backward):
        if witness is not None:
            assert witness.is_homomorphism() and witness.is_bijective()
