import pytest

from elatlab.core.catalog import (
    ALIASES,
    CATALOG,
    catalog_group,
    catalog_scope,
    expected_spec_order,
    identify,
    parse_group_spec,
)
from elatlab.core.exceptions import GroupSpecError, OrderBoundError


@pytest.mark.parametrize("spec, order", [
    ("C1", 1),
    ("C12", 12),
    ("Z5", 5),
    ("V4", 4),
    ("S3", 6),
    ("D4", 8),
    ("Dih8", 8),
    ("Q8", 8),
    ("Q12", 12),
    ("Q16", 16),
    ("C4xC2", 8),
    ("Z2xZ2xZ2", 8),
    ("Z3xZ3", 9),
    ("A4", 12),
    ("S4", 24),
    ("Q8xC3", 24),
    ("Dih24", 24),
    ("A5", 60),
])
def test_catalog_orders(spec, order):
    assert catalog_group(spec).order == order


def test_every_catalog_name_has_its_expected_order():
    for name in CATALOG:
        assert catalog_group(name).order == expected_spec_order(name), name


def test_d4_uses_the_order_eight_convention():
    assert identify(catalog_group("Dih8")) == "D4"
    assert identify(catalog_group("D4")) == "D4"


@pytest.mark.parametrize("alias", sorted(ALIASES))
def test_aliases_identify_as_their_target(alias):
    assert identify(catalog_group(alias)) == ALIASES[alias]


def test_quaternion_groups_are_not_dihedral():
    q8 = catalog_group("Q8")
    assert q8.order_census == (1, 2, 4, 4, 4, 4, 4, 4)
    assert identify(q8) == "Q8"
    assert identify(catalog_group("Q12")) == "Q12"


def test_perm_spec_identified_as_s3():
    g = parse_group_spec("perm:(0 1),(0 1 2)")
    assert g.order == 6
    assert identify(g) == "S3"


def test_perm_spec_with_several_cycles():
    g = parse_group_spec("perm:(0 1)(2 3),(0 2)(1 3)")
    assert g.order == 4
    assert identify(g) == "V4"


def test_unknown_name_reports_token_and_position():
    with pytest.raises(GroupSpecError) as e:
        parse_group_spec("S3xK4")
    assert e.value.token == "K4"
    assert e.value.position == 3


def test_bad_dicyclic_order():
    with pytest.raises(GroupSpecError) as e:
        parse_group_spec("S3 x Q7")
    assert e.value.token == "Q7"
    assert e.value.position == 5


def test_invalid_character_position():
    with pytest.raises(GroupSpecError) as e:
        parse_group_spec("D4!")
    assert e.value.token == "!"
    assert e.value.position == 2


def test_repeated_point_in_one_generator():
    with pytest.raises(GroupSpecError) as e:
        parse_group_spec("perm:(0 1)(1 2)")
    assert e.value.token == "1"
    assert e.value.position == 11


def test_unclosed_cycle():
    with pytest.raises(GroupSpecError, match="unclosed cycle"):
        parse_group_spec("perm:(0 1")


def test_group_too_large():
    with pytest.raises(OrderBoundError, match="group too large"):
        parse_group_spec("S9", max_closure_order=10_000)


def test_catalog_scope_is_ordered_and_bounded():
    scope = catalog_scope(8)
    assert scope[:8] == ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8"]
    assert {"V4", "S3", "D4", "Q8", "C4xC2", "Z2xZ2xZ2"} <= set(scope)
    assert "A4" not in scope


def test_identify_unknown_group():
    # C2 x C2 x C2 x C2 is not in the catalog
    g = parse_group_spec("C2xC2xC2xC2")
    assert g.order == 16
    assert identify(g) == "unknown"


def test_identify_respects_the_bound():
    with pytest.raises(OrderBoundError):
        identify(catalog_group("A5"), max_order=24)
