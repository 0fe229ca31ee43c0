"""Finite sections of the cross-Gramian ``U``.

Row ``i`` of ``U`` is the frequency ``rho(i)`` on the grid ``eps * Z`` and
column ``j`` is the ``j``-th reconstruction function, so that

    U[i, j] = (F phi_j)(rho(i)).

Taking the first ``m`` rows gives an odd, symmetric window of frequencies
whenever ``m`` is odd, so the N-indexed and Z-indexed layouts coincide.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .bases import BasisFamily, eval_fourier, rho

# entries are generated in fixed row blocks so that every cached value is
# produced by the same computation no matter which section requested it
ROW_CHUNK = 512


class NyquistError(ValueError):
    """Sample spacing too coarse for the support of the reconstruction family."""


@dataclass(frozen=True)
class SamplingScheme:
    epsilon: float
    enforce_nyquist: bool = True

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError(f"sample spacing must lie in (0, 1], got {self.epsilon}")

    def frequencies(self, m: int) -> np.ndarray:
        return rho(np.arange(1, m + 1), self.epsilon)

    def nyquist_ok(self, family: BasisFamily) -> bool:
        return self.epsilon <= 1.0 / (2.0 * family.support_radius) * (1 + 1e-12)

    def check(self, family: BasisFamily):
        if self.enforce_nyquist and not self.nyquist_ok(family):
            raise NyquistError(
                f"eps = {self.epsilon:g} exceeds 1/(2T) = {1 / (2 * family.support_radius):g} "
                f"for {family.label}"
            )


@dataclass(frozen=True, eq=False)
class SectionMatrix:
    block: np.ndarray
    scheme: SamplingScheme
    family: BasisFamily
    col_offset: int = 0

    @property
    def shape(self):
        return self.block.shape

    @property
    def m(self) -> int:
        return self.block.shape[0]

    @property
    def n(self) -> int:
        return self.block.shape[1]

    @property
    def frequencies(self) -> np.ndarray:
        return self.scheme.frequencies(self.m)


class _EntryCache:
    def __init__(self):
        self._store = {}
        self._lock = threading.Lock()

    def chunk(self, family, eps, l, c):
        key = (family, eps, l, c)
        with self._lock:
            hit = self._store.get(key)
        if hit is not None:
            return hit
        rows = np.arange(c * ROW_CHUNK + 1, (c + 1) * ROW_CHUNK + 1)
        vals = np.asarray(eval_fourier(family, l, rho(rows, eps)), dtype=complex)
        vals.setflags(write=False)
        with self._lock:
            return self._store.setdefault(key, vals)

    def clear(self):
        with self._lock:
            self._store.clear()

    def __len__(self):
        return len(self._store)


_CACHE = _EntryCache()


def clear_cache():
    _CACHE.clear()


def _assemble(family, eps, m, cols):
    out = np.empty((m, len(cols)), dtype=complex)
    n_chunks = -(-m // ROW_CHUNK)
    for jj, l in enumerate(cols):
        for c in range(n_chunks):
            lo = c * ROW_CHUNK
            hi = min(m, lo + ROW_CHUNK)
            out[lo:hi, jj] = _CACHE.chunk(family, eps, l, c)[: hi - lo]
    return out


def build_section(
    family: BasisFamily, scheme: SamplingScheme, m: int, n: int, col_offset: int = 0
) -> SectionMatrix:
    """The ``m x n`` block of ``U`` with columns ``col_offset+1 .. col_offset+n``."""
    if m < 0 or n < 0 or col_offset < 0:
        raise ValueError("section sizes must be non-negative")
    scheme.check(family)
    cols = range(col_offset + 1, col_offset + n + 1)
    block = _assemble(family, scheme.epsilon, m, cols)
    block.setflags(write=False)
    return SectionMatrix(block=block, scheme=scheme, family=family, col_offset=col_offset)


def build_square_section(family: BasisFamily, scheme: SamplingScheme, m: int) -> SectionMatrix:
    """``P_m U P_m``: the square section used by consistent reconstruction."""
    return build_section(family, scheme, m, m, 0)
