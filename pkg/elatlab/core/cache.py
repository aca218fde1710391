from typing import Any, Callable, Optional
import logging

logger = logging.getLogger(__name__)


class CacheService:
    """In-process memo for immutable analysis results (groups, lattices, decompositions)."""

    def __init__(self):
        self._memory_cache = {}
        self.hits = 0
        self.misses = 0

    def get(self, key: str) -> Optional[Any]:
        """Get value from cache"""
        value = self._memory_cache.get(key)
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        return value

    def set(self, key: str, value: Any) -> bool:
        """Set value in cache"""
        if value is None:
            logger.error(f"Refusing to cache None for key {key}")
            return False
        self._memory_cache[key] = value
        return True

    def clear(self) -> None:
        self._memory_cache.clear()
        self.hits = 0
        self.misses = 0

    def get_or_compute(self, key: str, compute: Callable[[], Any]) -> Any:
        value = self.get(key)
        if value is None:
            value = compute()
            self.set(key, value)
            logger.debug(f"Cached {key}")
        return value

    def get_analysis_key(self, label: str, suffix: str, bound: Optional[int] = None) -> str:
        """Generate a group-specific cache key; the bound is part of the key."""
        key = f"group:{label}:{suffix}"
        return key if bound is None else f"{key}:{bound}"


cache = CacheService()
