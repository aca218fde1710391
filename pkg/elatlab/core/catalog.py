"""Named small groups and the group-spec grammar.

A spec is either a product of catalog names joined by ``x`` (``S3``, ``D4``,
``Dih8``, ``Z3xZ3``, ``Q8xC3``) or an explicit list of generators in cycle
notation on 0-based points (``perm:(0 1)(2 3),(0 1 2)``).

``D<n>`` is the dihedral group of order 2n and ``Dih<m>`` the dihedral group
of order m, so ``D4`` and ``Dih8`` name the same group.
"""
import logging
import re
from math import factorial, prod
from typing import List, Optional, Tuple

from sympy.combinatorics import Permutation
from sympy.combinatorics.named_groups import (
    AlternatingGroup,
    CyclicGroup,
    DihedralGroup,
    SymmetricGroup,
)

from elatlab.config.settings import settings
from elatlab.core.cache import cache
from elatlab.core.exceptions import GroupSpecError, OrderBoundError
from elatlab.core.perm_group import FiniteGroup, Perm, group_from_generators, identity_perm, isomorphism_class
from elatlab.utils.helpers import fuzzy_match
from elatlab.utils.validators import find_invalid_character, validate_group_spec

logger = logging.getLogger(__name__)

PERM_PREFIX = "perm:"

_FACTOR_RE = re.compile(r"(?P<family>Dih|C|Z|S|A|D|Q|V)(?P<n>[0-9]+)")

# Canonical names, one per isomorphism class; identify() reports the first match.
CATALOG: Tuple[str, ...] = tuple(f"C{n}" for n in range(1, 25)) + (
    "V4", "S3", "D4", "Q8", "C4xC2", "Z2xZ2xZ2", "Z3xZ3", "A4", "Q12", "C6xC2",
    "Dih10", "Dih12", "Dih14", "Dih16", "Dih18", "Dih20", "Dih22", "Dih24",
    "Q16", "Q8xC2", "S4", "Q8xC3", "A5",
)

# Other spellings of catalog groups, accepted by the parser as-is.
ALIASES = {
    "Dih4": "V4",
    "Dih6": "S3",
    "Dih8": "D4",
    "D2": "V4",
    "D3": "S3",
    "C2xC2": "V4",
    "Z2xZ2": "V4",
    "A3": "C3",
    "S2": "C2",
}

Generators = Tuple[List[Perm], int]


def _sympy_generators(group) -> Generators:
    degree = group.degree
    gens = []
    for p in group.generators:
        images = list(p.array_form) + list(range(p.size, degree))
        if images != list(range(degree)):
            gens.append(tuple(images))
    return gens, degree


def _dicyclic_generators(order: int) -> Generators:
    """Generators x, y of Q<4k> = <x, y | x^2k = 1, y^2 = x^k, y x y^-1 = x^-1>.

    Element x^a y^e has index e*2k + a; the generators are the rows of the
    multiplication table, i.e. the left regular representation.
    """
    m = order // 2

    def mul(i: int, j: int) -> int:
        e, a = divmod(i, m)
        f, b = divmod(j, m)
        if e == 0:
            return f * m + (a + b) % m
        if f == 0:
            return m + (a - b) % m
        return (a - b + m // 2) % m

    x = tuple(mul(1, j) for j in range(order))
    y = tuple(mul(m, j) for j in range(order))
    return [x, y], order


def _expected_order(family: str, n: int) -> int:
    if family in ("C", "Z", "Dih", "Q"):
        return n
    if family == "S":
        return factorial(n)
    if family == "A":
        return max(1, factorial(n) // 2)
    if family == "D":
        return 2 * n
    return 4


def _factor_generators(family: str, n: int) -> Generators:
    if family in ("C", "Z"):
        return _sympy_generators(CyclicGroup(n))
    if family == "S":
        return _sympy_generators(SymmetricGroup(n))
    if family == "A":
        return _sympy_generators(AlternatingGroup(n))
    if family == "D":
        return _sympy_generators(DihedralGroup(n))
    if family == "Dih":
        return _sympy_generators(DihedralGroup(n // 2))
    if family == "Q":
        return _dicyclic_generators(n)
    return _sympy_generators(DihedralGroup(2))


def _check_factor(family: str, n: int, token: str, position: int) -> None:
    if n < 1:
        raise GroupSpecError("group parameter must be positive", token, position)
    if family == "Dih" and n % 2:
        raise GroupSpecError("Dih<m> needs an even order m", token, position)
    if family == "V" and n != 4:
        raise GroupSpecError("only the Klein four-group V4 is available", token, position)
    if family == "Q" and (n % 4 or n < 8):
        raise GroupSpecError("Q<m> needs m divisible by 4 and at least 8", token, position)


def _direct_product(factors: List[Generators]) -> Generators:
    """Generators of the product acting on disjoint blocks of points."""
    degree = sum(d for _, d in factors)
    gens = []
    shift = 0
    for factor_gens, d in factors:
        for g in factor_gens:
            images = list(identity_perm(degree))
            for x in range(d):
                images[shift + x] = shift + g[x]
            gens.append(tuple(images))
        shift += d
    return gens, degree


def _parse_named(spec: str, limit: int) -> Generators:
    factors = []
    expected = 1
    position = 0
    for part in spec.split("x"):
        token = part.strip()
        at = position + (len(part) - len(part.lstrip()))
        match = _FACTOR_RE.fullmatch(token)
        if match is None:
            suggestions = fuzzy_match(token, list(CATALOG) + list(ALIASES))[:3] if token else []
            hint = f"; did you mean {', '.join(suggestions)}?" if suggestions else ""
            raise GroupSpecError(f"unknown group name{hint}", token or "x", at)
        family, n = match.group("family"), int(match.group("n"))
        _check_factor(family, n, token, at)
        expected *= _expected_order(family, n)
        if expected > limit:
            raise OrderBoundError(f"group too large: {spec} has order above {limit}")
        factors.append(_factor_generators(family, n))
        position += len(part) + 1
    return factors[0] if len(factors) == 1 else _direct_product(factors)


def _parse_cycles(spec: str) -> Generators:
    offset = len(PERM_PREFIX)
    body = spec[offset:]
    generators: List[List[List[int]]] = []
    cycles: List[List[int]] = []
    used: set = set()
    i = 0
    while i < len(body):
        ch = body[i]
        if ch.isspace():
            i += 1
        elif ch == "(":
            close = body.find(")", i)
            if close == -1:
                raise GroupSpecError("unclosed cycle", "(", offset + i)
            points = []
            for m in re.finditer(r"\S+", body[i + 1:close]):
                token = m.group()
                at = offset + i + 1 + m.start()
                if not token.isdigit():
                    raise GroupSpecError("expected a point index", token, at)
                point = int(token)
                if point in used or point in points:
                    raise GroupSpecError("point repeated within one generator", token, at)
                points.append(point)
            used.update(points)
            cycles.append(points)
            i = close + 1
        elif ch == ",":
            if not cycles:
                raise GroupSpecError("empty generator", ",", offset + i)
            generators.append(cycles)
            cycles, used = [], set()
            i += 1
        else:
            raise GroupSpecError("unexpected character", ch, offset + i)
    if not cycles:
        raise GroupSpecError("empty generator", body[-1:] or PERM_PREFIX, offset + max(len(body) - 1, 0))
    generators.append(cycles)

    degree = 1 + max((p for gen in generators for cyc in gen for p in cyc), default=0)
    gens = []
    for gen in generators:
        nontrivial = [cyc for cyc in gen if len(cyc) > 1]
        if nontrivial:
            gens.append(tuple(Permutation(nontrivial, size=degree).array_form))
        else:
            gens.append(identity_perm(degree))
    return gens, degree


def parse_group_spec(spec: str, max_closure_order: Optional[int] = None) -> FiniteGroup:
    """Build the group a spec names, with canonical generators."""
    limit = settings.bound('max_closure_order', max_closure_order)
    if not validate_group_spec(spec):
        bad = find_invalid_character(spec)
        if bad is None:
            raise GroupSpecError("empty or overlong group spec", spec[:16], 0)
        raise GroupSpecError("invalid character in group spec", spec[bad], bad)
    spec = spec.strip()
    if spec.startswith(PERM_PREFIX):
        gens, degree = _parse_cycles(spec)
    else:
        gens, degree = _parse_named(spec, limit)
    return group_from_generators(gens, label=spec, degree=degree, max_order=limit)


def catalog_group(name: str, max_closure_order: Optional[int] = None) -> FiniteGroup:
    """Return the group named by a spec, memoised per spec string."""
    key = cache.get_analysis_key(name.strip(), "group", max_closure_order)
    return cache.get_or_compute(key, lambda: parse_group_spec(name, max_closure_order))


def catalog_orders() -> List[Tuple[str, int]]:
    return [(name, catalog_group(name).order) for name in CATALOG]


def catalog_scope(max_group_order: int) -> List[str]:
    """Catalog names of order at most max_group_order, in catalog order."""
    return [name for name, order in catalog_orders() if order <= max_group_order]


def identify(g: FiniteGroup, max_order: Optional[int] = None) -> str:
    """Return the catalog name of g, or 'unknown'."""
    limit = settings.bound('max_order', max_order)
    if g.order > limit:
        raise OrderBoundError(f"group too large: identification of {g.label} needs order <= {limit}, got {g.order}")
    for name in CATALOG:
        h = catalog_group(name)
        if h.order != g.order:
            continue
        if isomorphism_class(g, h, max_order=limit) is not None:
            logger.debug(f"Identified {g.label} as {name}")
            return name
    return "unknown"


def expected_spec_order(spec: str) -> Optional[int]:
    """Order implied by a named spec without building it; None for perm specs."""
    spec = spec.strip()
    if spec.startswith(PERM_PREFIX):
        return None
    orders = []
    for part in spec.split("x"):
        match = _FACTOR_RE.fullmatch(part.strip())
        if match is None:
            return None
        orders.append(_expected_order(match.group("family"), int(match.group("n"))))
    return prod(orders)
