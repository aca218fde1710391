from math import factorial
from typing import Iterable, List, Sequence, Tuple


def to_cycles(perm: Sequence[int]) -> List[Tuple[int, ...]]:
    """Disjoint cycles of length > 1, each starting at its smallest point."""
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = perm[x]
        cycles.append(tuple(cycle))
    return cycles


def format_cycles(perm: Sequence[int]) -> str:
    """Cycle notation on 0-based points, e.g. '(0 1)(2 3)'; '()' for the identity."""
    cycles = to_cycles(perm)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycles)


def factorial_product(terms: Iterable[int]) -> int:
    result = 1
    for k in terms:
        result *= factorial(k)
    return result


def format_factorial_product(terms: Iterable[int], tail: int = 1) -> str:
    """Render ∏ k! × tail, dropping trivial factors: [23, 3, 0, 0] -> '23! × 3!'."""
    parts = [f"{k}!" for k in sorted((k for k in terms if k >= 2), reverse=True)]
    if tail > 1:
        parts.append(str(tail))
    return " × ".join(parts) if parts else "1"


def format_table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """Left-aligned plain text table."""
    rows = [[str(cell) for cell in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def fuzzy_match(query: str, options: List[str], threshold: float = 0.5) -> List[str]:
    """Rank catalog names by similarity to a mistyped name."""
    query_lower = query.lower()
    matches = []

    for option in options:
        option_lower = option.lower()

        if query_lower == option_lower:
            matches.append((option, 1.0))
            continue

        if query_lower in option_lower or option_lower in query_lower:
            matches.append((option, 0.8))
            continue

        # Character overlap
        query_chars = set(query_lower)
        option_chars = set(option_lower)
        total = len(query_chars | option_chars)
        if total > 0:
            score = len(query_chars & option_chars) / total
            if score >= threshold:
                matches.append((option, score))

    matches.sort(key=lambda x: (-x[1], x[0]))
    return [match[0] for match in matches]
