"""On-disk cache of continued-fraction expansions.

Entries are JSON files named by the SHA-256 of the canonical prefix form
of the expanded number. A loaded entry is used only after its checksum
matches and its quotients are re-certified against a fresh enclosure
(``verify_prefix``); anything else is recomputed and overwritten.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from typing import Optional

from ..realnum import as_expr, to_prefix
from ..reduction import ContinuedFraction, convergents_of, real_cf, verify_prefix


def expr_key(expr) -> str:
    return hashlib.sha256(to_prefix(as_expr(expr)).encode()).hexdigest()


def _checksum(source: str, quotients) -> str:
    h = hashlib.sha256(source.encode())
    h.update(",".join(str(a) for a in quotients).encode())
    return h.hexdigest()


class CFCache:
    def __init__(self, directory: Optional[str] = None):
        self.directory = directory
        self._mem = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.rejected = 0
        if directory:
            os.makedirs(directory, exist_ok=True)

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, key + ".json")

    def _load(self, expr, key: str) -> Optional[ContinuedFraction]:
        if key in self._mem:
            return self._mem[key]
        if not self.directory or not os.path.exists(self._path(key)):
            return None
        try:
            with open(self._path(key)) as fh:
                data = json.load(fh)
            src = to_prefix(as_expr(expr))
            qs = [int(a) for a in data["partial_quotients"]]
            if data.get("source") != src or data.get("checksum") != _checksum(src, qs):
                raise ValueError("checksum mismatch")
            if not verify_prefix(expr, qs):
                raise ValueError("quotients do not match the number")
        except (OSError, ValueError, KeyError, TypeError):
            self.rejected += 1
            return None
        cf = ContinuedFraction(as_expr(expr), tuple(qs), tuple(convergents_of(qs)), int(data.get("precision_bits", 0)))
        self._mem[key] = cf
        return cf

    def _store(self, key: str, cf: ContinuedFraction) -> None:
        self._mem[key] = cf
        if not self.directory:
            return
        src = to_prefix(cf.source)
        data = {
            "source": src,
            "partial_quotients": [str(a) for a in cf.partial_quotients],
            "precision_bits": cf.precision_bits,
            "checksum": _checksum(src, cf.partial_quotients),
        }
        tmp = self._path(key) + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(data, fh)
        os.replace(tmp, self._path(key))

    def expansion(self, expr, q_exceeds=None, count=None, max_precision_bits: int = 1 << 20) -> ContinuedFraction:
        """Certified expansion reaching q > q_exceeds (or ``count`` quotients)."""
        expr = as_expr(expr)
        key = expr_key(expr)
        with self._lock:
            cf = self._load(expr, key)
        if cf is not None:
            if q_exceeds is not None:
                k = cf.first_index_q_exceeds(q_exceeds)
                if k is not None:
                    self.hits += 1
                    return ContinuedFraction(cf.source, cf.partial_quotients[: k + 1], cf.convergents[: k + 1], cf.precision_bits)
            elif len(cf.partial_quotients) >= count:
                self.hits += 1
                return ContinuedFraction(cf.source, cf.partial_quotients[:count], cf.convergents[:count], cf.precision_bits)
        self.misses += 1
        new = real_cf(expr, count=count, q_exceeds=q_exceeds, max_precision_bits=max_precision_bits)
        with self._lock:
            old = self._mem.get(key)
            if old is None or len(old.partial_quotients) < len(new.partial_quotients):
                self._store(key, new)
        return new
