"""Log-domain combinatorics: factorials, binomials, Stirling partition sums.

Everything is in nats.  Tables are grown lazily and shared; growth is
guarded by a lock so concurrent readers are safe.
"""

from __future__ import annotations

import threading

import numpy as np
from scipy.special import gammaln

__all__ = [
    "CombinatoricsCache",
    "log_factorial",
    "log_binomial",
    "log_sum_stirling",
    "shared_cache",
]

# Above this set size the O(n*k) Stirling recurrence is refused rather than
# silently approximated.
DEFAULT_STIRLING_CAP = 20_000


class CombinatoricsCache:
    """Lazily grown tables for log n!, log C(n, k) and log B(n, k).

    ``B(n, k) = sum_{j<=k} S(n, j)`` counts the partitions of an n-set into
    at most k non-empty blocks (S is the Stirling number of the second
    kind); ``B(n, n)`` is the Bell number.
    """

    def __init__(self, stirling_cap: int = DEFAULT_STIRLING_CAP):
        self._lock = threading.Lock()
        self._lf = gammaln(np.arange(2, dtype=float) + 1.0)
        self._log_b_rows: dict[int, np.ndarray] = {}
        self.stirling_cap = stirling_cap

    # -- log factorial ---------------------------------------------------

    def _ensure_lf(self, n: int):
        if n < len(self._lf):
            return
        with self._lock:
            if n >= len(self._lf):
                size = max(n + 1, 2 * len(self._lf))
                self._lf = gammaln(np.arange(size, dtype=float) + 1.0)

    def log_factorial(self, n: int) -> float:
        if n < 0:
            raise ValueError("factorial of a negative integer")
        self._ensure_lf(n)
        return float(self._lf[n])

    def lf_table(self, n: int) -> np.ndarray:
        """Read-only view of the log-factorial table covering 0..n."""
        self._ensure_lf(n)
        return self._lf

    # -- log binomial ----------------------------------------------------

    def log_binomial(self, n: int, k: int) -> float:
        if k < 0 or k > n:
            raise ValueError(f"binomial C({n},{k}) out of domain")
        self._ensure_lf(n)
        lf = self._lf
        return float(lf[n] - lf[k] - lf[n - k])

    # -- Stirling sums ---------------------------------------------------

    def _stirling_row(self, n: int) -> np.ndarray:
        """log B(n, k) for k = 1..n, via the log-space DP
        S(n, k) = k S(n-1, k) + S(n-1, k-1)."""
        if n > self.stirling_cap:
            raise ValueError(
                f"Stirling table for n={n} exceeds the cap {self.stirling_cap}; "
                "raise CombinatoricsCache(stirling_cap=...) explicitly")
        # log S(r, k) for k = 1..r, built row by row
        row = np.array([0.0])  # S(1, 1) = 1
        with np.errstate(divide="ignore"):
            logk = np.log(np.arange(1.0, n + 1))
        for r in range(2, n + 1):
            nxt = np.empty(r)
            nxt[0] = 0.0  # S(r, 1) = 1
            # k = 2..r-1: k*S(r-1, k) + S(r-1, k-1)
            if r > 2:
                nxt[1:r - 1] = np.logaddexp(logk[1:r - 1] + row[1:], row[:-1])
            nxt[r - 1] = 0.0  # S(r, r) = 1
            row = nxt
        # cumulative log-sum-exp over k
        out = np.empty(n)
        acc = row[0]
        out[0] = acc
        for k in range(1, n):
            acc = np.logaddexp(acc, row[k])
            out[k] = acc
        return out

    def log_sum_stirling(self, n: int, kmax: int) -> float:
        if kmax < 1:
            raise ValueError("kmax must be at least 1")
        if kmax > n:
            raise ValueError(f"kmax={kmax} exceeds n={n}")
        row = self._log_b_rows.get(n)
        if row is None:
            row = self._stirling_row(n)
            with self._lock:
                self._log_b_rows[n] = row
        return float(row[kmax - 1])


_shared = CombinatoricsCache()


def shared_cache() -> CombinatoricsCache:
    return _shared


def log_factorial(n: int) -> float:
    """ln n! in nats."""
    return _shared.log_factorial(n)


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) in nats."""
    return _shared.log_binomial(n, k)


def log_sum_stirling(n: int, kmax: int) -> float:
    """ln B(n, kmax), the log count of partitions of an n-set into at most
    kmax blocks."""
    return _shared.log_sum_stirling(n, kmax)
