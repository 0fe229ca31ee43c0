"""Reconstruction basis families.

Three families are provided, each indexed from 1:

* the Haar system on ``[0, a]`` (default ``a = 1``), ordered coarse to fine,
* Legendre polynomials on ``[-1, 1]``, normalised to unit L2 norm,
* the complex exponentials ``sqrt(eps) exp(2 pi i rho(l) x)`` on
  ``[-1/(2 eps), 1/(2 eps)]``, i.e. the basis that makes generalized sampling
  collapse to the classical Shannon series.

For every family both the pointwise values and the Fourier transform

    (F phi)(w) = int phi(x) exp(-2 pi i x w) dx

are available in closed form, and :func:`fourier_oracle` recomputes the
latter by Gauss-Legendre quadrature for independent checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np
from scipy.special import eval_legendre, spherical_jn

HAAR = "haar"
LEGENDRE = "legendre"
FOURIER = "fourier"

# below this |w| the closed forms are replaced by two-term Taylor expansions
SERIES_BAND = 1e-8
ORACLE_NODES = 64
# relative distance to an eps-grid point treated as "on the grid"
GRID_SNAP = 1e-12


class BasisIndexError(IndexError):
    pass


@dataclass(frozen=True)
class BasisFamily:
    kind: str
    support: tuple
    riesz_lower: float = 1.0
    riesz_upper: float = 1.0
    decay_C: Optional[float] = None
    decay_p: Optional[int] = None
    width: float = 1.0
    spacing: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (HAAR, LEGENDRE, FOURIER):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if not 0 < self.riesz_lower <= self.riesz_upper:
            raise ValueError("Riesz constants must satisfy 0 < A <= B")
        lo, hi = self.support
        if not hi > lo:
            raise ValueError("empty support interval")

    @property
    def support_radius(self) -> float:
        """Half the length of the support interval.

        A translation only multiplies the Fourier transform by a unimodular
        phase, so a family supported on ``[lo, hi]`` behaves exactly like one
        supported on ``[-T, T]`` with ``T = (hi - lo) / 2``.
        """
        lo, hi = self.support
        return 0.5 * (hi - lo)

    @property
    def orthonormal(self) -> bool:
        return self.riesz_lower == 1.0 and self.riesz_upper == 1.0

    @property
    def label(self) -> str:
        if self.kind == HAAR:
            return f"haar(a={self.width:g})"
        if self.kind == FOURIER:
            return f"fourier(eps={self.spacing:g})"
        return "legendre"


def haar_system(a: float = 1.0) -> BasisFamily:
    """Haar scaling function and wavelets whose supports meet ``(0, a)``."""
    if a <= 0:
        raise ValueError("Haar width a must be positive")
    c = math.ceil(a)
    return BasisFamily(
        kind=HAAR,
        support=(float(1 - c), float(c)),
        decay_C=2.0,
        decay_p=1,
        width=float(a),
    )


def legendre() -> BasisFamily:
    return BasisFamily(kind=LEGENDRE, support=(-1.0, 1.0))


def fourier_exponentials(epsilon: float) -> BasisFamily:
    if not 0 < epsilon:
        raise ValueError("spacing must be positive")
    half = 0.5 / epsilon
    return BasisFamily(kind=FOURIER, support=(-half, half), spacing=float(epsilon))


# ---------------------------------------------------------------------------
# indexing

def rho(i, epsilon: float):
    """The enumeration 0, eps, -eps, 2 eps, -2 eps, ... of the grid eps*Z.

    Accepts a scalar or an integer array of 1-based indices.
    """
    idx = np.asarray(i)
    if np.any(idx < 1):
        raise BasisIndexError("rho is defined for indices >= 1")
    k = idx // 2
    out = np.where(idx % 2 == 0, k * epsilon, -k * epsilon).astype(float)
    return float(out) if out.ndim == 0 else out


def rho_integer(i: int) -> int:
    """Integer counterpart of :func:`rho` (the multiplier of eps)."""
    if i < 1:
        raise BasisIndexError("rho is defined for indices >= 1")
    k = i // 2
    return k if i % 2 == 0 else -k


class HaarIndex(NamedTuple):
    kind: str  # "scaling" or "wavelet"
    level: int
    shift: int


def _shift_order(count_pos: int, c: int) -> list:
    return list(range(count_pos)) + [-s for s in range(1, c)]


@lru_cache(maxsize=None)
def decode_haar(l: int, a: float = 1.0) -> HaarIndex:
    """Decode the linear index ``l >= 1`` of the Haar ordering.

    Scaling functions first (shifts 0, 1, ..., c-1, -1, ..., -(c-1) with
    ``c = ceil(a)``), then level by level the wavelets with shifts
    0, 1, ..., 2^j c - 1, -1, ..., -(c-1).  For ``a = 1`` this is
    phi, psi_{0,0}, psi_{1,0}, psi_{1,1}, psi_{2,0}, ...
    """
    if l < 1:
        raise BasisIndexError(f"Haar index must be >= 1, got {l}")
    c = math.ceil(a)
    r = l - 1
    n_scaling = 2 * c - 1
    if r < n_scaling:
        return HaarIndex("scaling", 0, _shift_order(c, c)[r])
    r -= n_scaling
    j = 0
    while True:
        size = (2**j) * c + c - 1
        if r < size:
            if r < (2**j) * c:
                return HaarIndex("wavelet", j, r)
            return HaarIndex("wavelet", j, -(r - (2**j) * c + 1))
        r -= size
        j += 1


def haar_count_below_level(J: int, a: float = 1.0) -> int:
    """Number of Haar functions with wavelet level < J (scaling included)."""
    c = math.ceil(a)
    return 2 * c - 1 + sum((2**j) * c + c - 1 for j in range(J))


def _check_index(family: BasisFamily, l: int):
    if int(l) != l or l < 1:
        raise BasisIndexError(f"basis index must be a positive integer, got {l!r}")


# ---------------------------------------------------------------------------
# pointwise values

def _haar_scaling(t):
    return ((t >= 0) & (t < 1)).astype(float)


def _haar_mother(t):
    return ((t >= 0) & (t < 0.5)).astype(float) - ((t >= 0.5) & (t < 1)).astype(float)


def eval_point(family: BasisFamily, l: int, x):
    """Value of the ``l``-th basis function at ``x`` (scalar or array)."""
    _check_index(family, l)
    xs = np.asarray(x, dtype=float)
    if family.kind == HAAR:
        idx = decode_haar(int(l), family.width)
        if idx.kind == "scaling":
            out = _haar_scaling(xs - idx.shift)
        else:
            scale = 2.0**idx.level
            out = math.sqrt(scale) * _haar_mother(scale * xs - idx.shift)
    elif family.kind == LEGENDRE:
        j = int(l) - 1
        inside = (xs >= -1) & (xs <= 1)
        out = np.where(inside, math.sqrt(j + 0.5) * eval_legendre(j, np.clip(xs, -1, 1)), 0.0)
    else:
        eps = family.spacing
        half = 0.5 / eps
        freq = rho(int(l), eps)
        inside = (xs >= -half) & (xs <= half)
        out = np.where(inside, math.sqrt(eps) * np.exp(2j * np.pi * freq * xs), 0.0)
    return out.item() if np.ndim(out) == 0 else out


def point_matrix(family: BasisFamily, n: int, x) -> np.ndarray:
    """Matrix with entries ``phi_l(x_i)`` for ``l = 1..n``."""
    xs = np.asarray(x, dtype=float)
    dtype = complex if family.kind == FOURIER else float
    out = np.empty((xs.size, n), dtype=dtype)
    for l in range(1, n + 1):
        out[:, l - 1] = eval_point(family, l, xs)
    return out


# ---------------------------------------------------------------------------
# Fourier transforms

def haar_scaling_ft(w):
    """``(F chi_[0,1))(w) = (1 - exp(-2 pi i w)) / (2 pi i w)``."""
    w = np.asarray(w, dtype=float)
    out = np.empty(w.shape, dtype=complex)
    small = np.abs(w) < SERIES_BAND
    ws = w[~small]
    # same function written without the cancellation in 1 - exp(...)
    out[~small] = np.exp(-1j * np.pi * ws) * np.sinc(ws)
    out[small] = 1 - 1j * np.pi * w[small]
    return out


def haar_mother_ft(w):
    """``(F psi)(w) = (1 - exp(-pi i w))^2 / (2 pi i w)``."""
    w = np.asarray(w, dtype=float)
    out = np.empty(w.shape, dtype=complex)
    small = np.abs(w) < SERIES_BAND
    ws = w[~small]
    out[~small] = 1j * np.exp(-1j * np.pi * ws) * np.sin(0.5 * np.pi * ws) * np.sinc(0.5 * ws)
    u = w[small]
    out[small] = 0.5j * np.pi * u + 0.5 * (np.pi * u) ** 2
    return out


_I_POWERS = (1.0 + 0j, -1j, -1.0 + 0j, 1j)


def _legendre_ft(j: int, w):
    # int_{-1}^{1} P_j(x) exp(-i k x) dx = 2 (-i)^j j_j(k),  k = 2 pi w
    w = np.asarray(w, dtype=float)
    k = 2 * np.pi * np.abs(w)
    vals = spherical_jn(j, k)
    if j % 2:
        vals = np.where(w < 0, -vals, vals)
    return math.sqrt(j + 0.5) * 2 * _I_POWERS[j % 4] * vals


def _fourier_exp_ft(family: BasisFamily, l: int, w):
    eps = family.spacing
    w = np.asarray(w, dtype=float)
    t = (w - rho(int(l), eps)) / eps
    nearest = np.rint(t)
    on_grid = np.abs(t - nearest) <= GRID_SNAP * np.maximum(1.0, np.abs(t))
    vals = np.sinc(t)
    vals = np.where(on_grid, np.where(nearest == 0, 1.0, 0.0), vals)
    return (vals / math.sqrt(eps)).astype(complex)


def eval_fourier(family: BasisFamily, l: int, omega):
    """Closed-form ``(F phi_l)(omega)`` for scalar or array ``omega``."""
    _check_index(family, l)
    w = np.asarray(omega, dtype=float)
    if family.kind == HAAR:
        idx = decode_haar(int(l), family.width)
        if idx.kind == "scaling":
            out = np.exp(-2j * np.pi * idx.shift * w) * haar_scaling_ft(w)
        else:
            scale = 2.0**idx.level
            ws = w / scale
            out = np.exp(-2j * np.pi * idx.shift * ws) * haar_mother_ft(ws) / math.sqrt(scale)
    elif family.kind == LEGENDRE:
        out = _legendre_ft(int(l) - 1, w)
    else:
        out = _fourier_exp_ft(family, l, w)
    out = np.asarray(out, dtype=complex)
    return out.item() if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# quadrature oracle

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(ORACLE_NODES)


def gauss_legendre_integral(func, breakpoints, omega, max_cycles=8.0, degree=0):
    """Composite Gauss-Legendre value of ``int func(x) exp(-2 pi i omega x) dx``.

    ``breakpoints`` split the integrand into smooth pieces; each piece is
    further subdivided so that it holds at most ``max_cycles`` oscillations
    and a polynomial part of modest degree relative to the node count.
    """
    omegas = np.atleast_1d(np.asarray(omega, dtype=float))
    total = np.zeros(omegas.shape, dtype=complex)
    edges = np.asarray(breakpoints, dtype=float)
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        cycles = np.abs(omegas).max() * (b - a) if omegas.size else 0.0
        pieces = 1 + int(math.ceil(cycles / max_cycles)) + degree // 32
        sub = np.linspace(a, b, pieces + 1)
        for s0, s1 in zip(sub[:-1], sub[1:]):
            half = 0.5 * (s1 - s0)
            x = half * _GL_NODES + 0.5 * (s0 + s1)
            fx = func(x)
            phase = np.exp(-2j * np.pi * np.outer(omegas, x))
            total += half * (phase @ (_GL_WEIGHTS * fx))
    return total


def breakpoints(family: BasisFamily, l: int) -> list:
    if family.kind == HAAR:
        idx = decode_haar(int(l), family.width)
        if idx.kind == "scaling":
            return [idx.shift, idx.shift + 1.0]
        scale = 2.0**idx.level
        k = idx.shift
        return [k / scale, (k + 0.5) / scale, (k + 1) / scale]
    return list(family.support)


def fourier_oracle(family: BasisFamily, l: int, omega):
    """``(F phi_l)(omega)`` by composite 64-node Gauss-Legendre quadrature.

    Used only for verification; absolute error is at round-off level.
    """
    _check_index(family, l)
    w = np.asarray(omega, dtype=float)
    if family.kind == FOURIER:
        # the integrand oscillates at the difference frequency, so the
        # exponential of the basis function is merged into the kernel
        eps = family.spacing
        shift = rho(int(l), eps)
        flat = np.atleast_1d(w)
        out = np.array(
            [
                gauss_legendre_integral(
                    lambda x: np.full(x.shape, math.sqrt(eps)),
                    family.support,
                    wi - shift,
                )[0]
                for wi in flat
            ]
        ).reshape(w.shape)
    else:
        degree = int(l) - 1 if family.kind == LEGENDRE else 0
        out = gauss_legendre_integral(
            lambda x: eval_point(family, l, x),
            breakpoints(family, l),
            w,
            degree=degree,
        ).reshape(w.shape)
    return out.item() if np.ndim(out) == 0 else out
