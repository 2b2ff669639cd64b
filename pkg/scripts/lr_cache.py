"""
On-disk Littlewood-Richardson coefficient cache
Newline-delimited records `LR <λ>|<μ>|<ν> <value>`, appended one line at a time
"""

import logging
import threading
from pathlib import Path
from typing import Dict, Optional, Tuple

from partitions import Partition, format_partition, parse_partition

logger = logging.getLogger(__name__)

Key = Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]


class CacheConflictError(RuntimeError):
    """Two cache records for the same triple disagree."""


def format_record(key: Key, value: int) -> str:
    lam, mu, nu = (format_partition(Partition(rows)) for rows in key)
    return f"LR {lam}|{mu}|{nu} {value}\n"


def parse_record(line: str) -> Tuple[Key, int]:
    tag, triple, value = line.split()
    if tag != 'LR':
        raise ValueError(f"Unknown record tag '{tag}'")
    lam, mu, nu = (parse_partition(tok).rows for tok in triple.split('|'))
    return (lam, mu, nu), int(value)


class LRCache:
    """
    Append-only coefficient store backed by a text file.

    Duplicate lines are allowed but must agree; appends are serialized by a
    lock and written as a single line each.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._values: Dict[Key, int] = {}
        self._lock = threading.Lock()
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        with open(self.path, 'r', encoding='utf-8') as f:
            for lineno, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    key, value = parse_record(line)
                except ValueError as e:
                    logger.warning(f"  ! Skipping malformed cache line {lineno}: {e}")
                    continue
                self._check(key, value)
                self._values[key] = value
        logger.info(f"✓ Loaded {len(self._values)} LR coefficients from {self.path}")

    def _check(self, key: Key, value: int):
        known = self._values.get(key)
        if known is not None and known != value:
            raise CacheConflictError(
                f"Cache records disagree for {format_record(key, known).strip()} vs value {value}")

    def __len__(self):
        return len(self._values)

    def get(self, key: Key) -> Optional[int]:
        return self._values.get(key)

    def record(self, key: Key, value: int):
        with self._lock:
            self._check(key, value)
            if key in self._values:
                return
            self._values[key] = value
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, 'a', encoding='utf-8') as f:
                f.write(format_record(key, value))
                f.flush()
