import logging
import threading
from collections import OrderedDict
from typing import Any, Dict, Hashable, Optional

from app.core.config import Settings, get_settings

logger = logging.getLogger(__name__)


class SkeinCache:
    """In-process memo for skein-tree values, safe for concurrent idempotent fills"""

    def __init__(self, settings: Optional[Settings] = None):
        settings = settings or get_settings()
        self.enabled = settings.SKEIN_CACHE_ENABLED
        self.max_entries = settings.SKEIN_CACHE_MAX_ENTRIES
        self._entries: "OrderedDict[Hashable, Any]" = OrderedDict()
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0

    def get_cache(self, key: Hashable) -> Optional[Any]:
        """Get a value from cache"""
        if not self.enabled:
            return None
        with self._lock:
            value = self._entries.get(key)
            if value is None:
                self._misses += 1
            else:
                self._hits += 1
            return value

    def set_cache(self, key: Hashable, value: Any) -> bool:
        """
        Store a value unless the key is already present

        Args:
            key: Canonical diagram code
            value: The invariant computed for that code

        Returns:
            bool: True if the value was inserted
        """
        if not self.enabled:
            return False
        with self._lock:
            if key in self._entries:
                return False
            self._entries[key] = value
            if len(self._entries) > self.max_entries:
                self._entries.popitem(last=False)
            return True

    def exists(self, key: Hashable) -> bool:
        with self._lock:
            return key in self._entries

    def delete_cache(self, key: Hashable) -> bool:
        with self._lock:
            return self._entries.pop(key, None) is not None

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self._hits = 0
            self._misses = 0
        logger.debug("Skein cache cleared")

    def stats(self) -> Dict[str, int]:
        with self._lock:
            return {"entries": len(self._entries), "hits": self._hits, "misses": self._misses}


# Global cache instance
_skein_cache: Optional[SkeinCache] = None
_skein_cache_lock = threading.Lock()


def get_skein_cache() -> SkeinCache:
    """Get global skein cache instance"""
    global _skein_cache
    if _skein_cache is None:
        with _skein_cache_lock:
            if _skein_cache is None:
                _skein_cache = SkeinCache()
    return _skein_cache


def reset_skein_cache() -> None:
    """Drop the global cache so the next access re-reads settings"""
    global _skein_cache
    with _skein_cache_lock:
        _skein_cache = None
