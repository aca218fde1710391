import re
import logging
from typing import Iterable, List, Optional

logger = logging.getLogger(__name__)

MAX_SPEC_LENGTH = 512

_SPEC_CHARACTER = re.compile(r"[A-Za-z0-9\s:(),]")


def find_invalid_character(spec: str) -> Optional[int]:
    """Position of the first character a group spec may not contain."""
    for i, ch in enumerate(spec):
        if not _SPEC_CHARACTER.fullmatch(ch):
            return i
    return None


def validate_group_spec(spec: str) -> bool:
    """
    Validate the raw text of a group spec before parsing.
    Allows letters, digits, whitespace, and the punctuation of cycle notation.
    """
    if not spec or not spec.strip() or len(spec) > MAX_SPEC_LENGTH:
        logger.warning(f"Invalid group spec length: {spec!r}")
        return False

    bad = find_invalid_character(spec)
    if bad is not None:
        logger.warning(f"Invalid character {spec[bad]!r} at position {bad} in group spec: {spec!r}")
        return False

    return True


def unknown_names(names: Iterable[str], known: Iterable[str]) -> List[str]:
    """Return the names not in known, logging each one."""
    known = set(known)
    unknown = [name for name in names if name not in known]
    for name in unknown:
        logger.warning(f"Unknown name: {name}")
    return unknown


def split_list_option(value: Optional[str]) -> List[str]:
    """Split a comma-separated option value, dropping blanks."""
    if not value:
        return []
    return [part.strip() for part in value.split(",") if part.strip()]
