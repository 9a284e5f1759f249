"""Weight sequences for Lorentz sequence spaces.

A weight sequence here is a nonincreasing, strictly positive sequence with
``w_1 = 1`` that tends to zero but is not summable.  Two kinds are provided:

* power-law: ``w_n = n**(-theta)`` with ``theta`` in ``[0.01, 0.99]``;
* explicit prefix: finitely many hand-picked leading weights, continued by a
  power-law tail glued at the last prefix entry so the sequence stays
  nonincreasing.

Partial sums ``W_k = w_1 + ... + w_k`` are cached as a prefix-sum array that
grows geometrically; the cache is rebuilt from scratch on growth so cached
values depend only on the index, never on the query order.  Reads are safe
under concurrent threads because growth swaps in a fresh array atomically.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from . import _kernels

THETA_MIN = 0.01
THETA_MAX = 0.99

#: largest index kept in the cached prefix-sum array (~268 MB of float64)
PREFIX_CACHE_LIMIT = 1 << 25
#: largest window length summed term by term once the cache cannot help
DIRECT_WINDOW_LIMIT = 10 ** 6
_CHUNK = 1 << 20


class WindowBoundsOnly(ValueError):
    """Raised when a window sum is only available as an integral bracket.

    Windows longer than :data:`DIRECT_WINDOW_LIMIT` that also start beyond the
    prefix cache cannot be summed exactly at reasonable cost; use
    :meth:`WeightSequence.window_sum_bounds` for those.
    """


def _check_int(name: str, value, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    if value > (1 << 62):
        raise ValueError(f"{name} is too large to index safely: {value}")
    return value


class WeightSequence:
    """Nonincreasing positive weights with ``w_1 = 1`` and cached partial sums.

    Parameters
    ----------
    theta : float
        Power-law decay exponent, restricted to ``[0.01, 0.99]``.  Governs the
        whole sequence, or just the tail when ``prefix`` is given.
    prefix : array_like, optional
        Explicit leading weights.  Must start at 1, be nonincreasing and
        strictly positive.  The tail continues as
        ``prefix[-1] * ((m+1)/n)**theta`` for ``n > m = len(prefix)``, which
        joins the prefix without ever rising above its last entry.
    compensated : bool, optional
        Use Kahan (compensated) summation when building partial sums.  Only
        worth switching on for partial sums far beyond 1e6 terms.
    """

    def __init__(self, theta: float, prefix=None, compensated: bool = False):
        theta = float(theta)
        if not (THETA_MIN <= theta <= THETA_MAX):
            raise ValueError(
                f"theta must lie in [{THETA_MIN}, {THETA_MAX}], got {theta}"
            )
        self.theta = theta
        self.compensated = bool(compensated)
        if prefix is None:
            self.prefix = None
        else:
            arr = np.asarray(prefix, dtype=np.float64).ravel()
            if arr.size == 0:
                raise ValueError("prefix must contain at least one weight")
            if not np.all(np.isfinite(arr)):
                raise ValueError("prefix weights must be finite")
            if arr[0] != 1.0:
                raise ValueError(f"first weight must equal 1, got {arr[0]}")
            if np.any(arr <= 0.0):
                raise ValueError("weights must be strictly positive")
            if np.any(np.diff(arr) > 0.0):
                raise ValueError("prefix weights must be nonincreasing")
            self.prefix = arr.copy()
            self.prefix.setflags(write=False)
        # prefix-sum cache: _sums[0] = 0, _sums[n] = W_n
        self._sums = np.zeros(1)

    @classmethod
    def power_law(cls, theta: float, compensated: bool = False) -> "WeightSequence":
        return cls(theta, prefix=None, compensated=compensated)

    # -- element access -----------------------------------------------------

    def weight(self, n) -> float:
        """``w_n`` evaluated directly (no cache round-off)."""
        n = _check_int("n", n, 1)
        if self.prefix is not None:
            m = self.prefix.shape[0]
            if n <= m:
                return float(self.prefix[n - 1])
            return float(self.prefix[-1] * np.float64((m + 1) / n) ** self.theta)
        return float(np.float64(n) ** np.float64(-self.theta))

    def weight_values(self, n_max) -> np.ndarray:
        """Array ``[w_1, ..., w_n_max]``."""
        n_max = _check_int("n_max", n_max, 0)
        if n_max == 0:
            return np.empty(0)
        n = np.arange(1, n_max + 1, dtype=np.float64)
        if self.prefix is None:
            return n ** np.float64(-self.theta)
        m = self.prefix.shape[0]
        if n_max <= m:
            return self.prefix[:n_max].copy()
        tail = self.prefix[-1] * ((m + 1) / n[m:]) ** np.float64(self.theta)
        return np.concatenate([self.prefix, tail])

    # -- partial sums ---------------------------------------------------------

    def _grow_cache(self, n: int) -> None:
        current = self._sums.shape[0] - 1
        if n <= current:
            return
        cap = max(n, 2 * current, 1024)
        cap = min(cap, PREFIX_CACHE_LIMIT)
        w = self.weight_values(cap)
        if self.compensated:
            body = _kernels.kahan_cumsum(w)
        else:
            body = np.cumsum(w)
        sums = np.empty(cap + 1)
        sums[0] = 0.0
        sums[1:] = body
        self._sums = sums  # atomic swap; concurrent readers keep old array

    def partial_sum(self, k) -> float:
        """``W_k`` (``W_0 = 0``).  Cached up to :data:`PREFIX_CACHE_LIMIT`."""
        k = _check_int("k", k, 0)
        if k <= PREFIX_CACHE_LIMIT:
            self._grow_cache(k)
            return float(self._sums[k])
        # beyond the cache: stream chunk sums; deterministic given k alone
        chunk_sums = []
        start = 0
        while start < k:
            stop = min(start + _CHUNK, k)
            chunk = self._window_values(start, stop - start)
            if self.compensated:
                chunk_sums.append(math.fsum(chunk))
            else:
                chunk_sums.append(float(np.sum(chunk)))
            start = stop
        if self.compensated:
            return math.fsum(chunk_sums)
        return float(sum(chunk_sums))

    def partial_sums(self, n_max) -> np.ndarray:
        """Read-only view ``[W_0, W_1, ..., W_n_max]`` for vectorised callers."""
        n_max = _check_int("n_max", n_max, 0)
        if n_max > PREFIX_CACHE_LIMIT:
            raise ValueError(
                f"partial-sum arrays are limited to {PREFIX_CACHE_LIMIT} entries"
            )
        self._grow_cache(n_max)
        view = self._sums[: n_max + 1].view()
        view.setflags(write=False)
        return view

    # -- window sums ----------------------------------------------------------

    def _window_values(self, j: int, k: int) -> np.ndarray:
        """Weights ``w_{j+1}, ..., w_{j+k}`` without touching the cache."""
        n = np.arange(j + 1, j + k + 1, dtype=np.float64)
        if self.prefix is None:
            return n ** np.float64(-self.theta)
        m = self.prefix.shape[0]
        if j >= m:
            return self.prefix[-1] * ((m + 1) / n) ** np.float64(self.theta)
        head = self.prefix[j : min(m, j + k)]
        if j + k <= m:
            return head.copy()
        tail = self.prefix[-1] * ((m + 1) / n[m - j :]) ** np.float64(self.theta)
        return np.concatenate([head, tail])

    def window_sum(self, j, k) -> float:
        """``w_{j+1} + ... + w_{j+k}`` evaluated exactly.

        Uses the prefix-sum cache while ``j + k`` fits in it, direct chunked
        summation for windows up to :data:`DIRECT_WINDOW_LIMIT` terms beyond
        that, and raises :class:`WindowBoundsOnly` otherwise (use
        :meth:`window_sum_bounds` there).  Single-term windows are read off
        directly, so they carry no summation round-off at all.
        """
        j = _check_int("j", j, 0)
        k = _check_int("k", k, 0)
        if k == 0:
            return 0.0
        if k == 1:
            return self.weight(j + 1)
        if j + k <= PREFIX_CACHE_LIMIT:
            self._grow_cache(j + k)
            return float(self._sums[j + k] - self._sums[j])
        if k <= DIRECT_WINDOW_LIMIT:
            acc = 0.0
            start = j
            end = j + k
            while start < end:
                stop = min(start + _CHUNK, end)
                acc += float(np.sum(self._window_values(start, stop - start)))
                start = stop
            return acc
        raise WindowBoundsOnly(
            f"window (j={j}, k={k}) exceeds both the cache range and the "
            f"direct-summation limit ({DIRECT_WINDOW_LIMIT}); call "
            "window_sum_bounds instead"
        )

    def _tail_integral(self, a: float, b: float) -> float:
        """``∫_a^b c·t**(-theta) dt`` for the power-law part covering [a, b]."""
        theta = self.theta
        if self.prefix is None:
            scale = 1.0
        else:
            m = self.prefix.shape[0]
            scale = float(self.prefix[-1]) * (m + 1) ** theta
        e = 1.0 - theta
        return scale * (b ** e - a ** e) / e

    def window_sum_bounds(self, j, k) -> Tuple[float, float, bool]:
        """``(lower, upper, exact)`` bracket for the window sum.

        Exact whenever :meth:`window_sum` succeeds.  For longer windows the
        sum of the decreasing integrand is bracketed by integrals:
        ``∫_{j+1}^{j+k+1} <= sum <= w_{j+1} + ∫_{j+1}^{j+k}``.
        """
        j = _check_int("j", j, 0)
        k = _check_int("k", k, 0)
        try:
            v = self.window_sum(j, k)
            return v, v, True
        except WindowBoundsOnly:
            pass
        m = 0 if self.prefix is None else self.prefix.shape[0]
        if j < m:
            # exact head through the prefix, bracket only the power-law tail
            head = self.window_sum(j, m - j)
            lo, hi, _ = self.window_sum_bounds(m, k - (m - j))
            return head + lo, head + hi, False
        lo = self._tail_integral(j + 1.0, j + k + 1.0)
        hi = self.weight(j + 1) + self._tail_integral(j + 1.0, float(j + k))
        return lo, hi, False

    # -- averaged weights -------------------------------------------------------

    def averaged_weight(self, i, k, offset=0) -> float:
        """Mean-type weight: the block-averaged value

        ``w_i^(k) = (w_{offset+(i-1)k+1} + ... + w_{offset+ik}) / W_k``.

        With ``offset = 0`` this is the classical averaged weight; a positive
        offset shifts the averaging window right, which is what staggered
        block constructions need.
        """
        i = _check_int("i", i, 1)
        k = _check_int("k", k, 1)
        offset = _check_int("offset", offset, 0)
        return self.window_sum(offset + (i - 1) * k, k) / self.partial_sum(k)

    def averaged_weight_values(self, n_max, k) -> np.ndarray:
        """Array ``[w_1^(k), ..., w_n_max^(k)]`` (offset zero)."""
        n_max = _check_int("n_max", n_max, 1)
        k = _check_int("k", k, 1)
        sums = self.partial_sums(n_max * k)
        i = np.arange(1, n_max + 1, dtype=np.int64)
        windows = sums[i * k] - sums[(i - 1) * k]
        if k == 1:
            windows = self.weight_values(n_max)
        return windows / sums[k]

    # -- misc -----------------------------------------------------------------

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        kind = "power-law" if self.prefix is None else f"prefix[{self.prefix.shape[0]}]"
        return f"WeightSequence({kind}, theta={self.theta})"
