"""Reconstruction from Fourier samples.

Two procedures share the same inputs, a section of ``U`` and the
rho-ordered samples ``f(rho(1)), ..., f(rho(m))`` with ``f = F g``:

* :func:`solve_uneven` takes ``m >= n`` samples and solves the least-squares
  problem whose normal equations are ``(U_mn^* U_mn) beta = U_mn^* eta``;
* :func:`solve_consistent` takes a square section and inverts it, which
  reproduces the samples exactly but can be arbitrarily ill-conditioned.

The module also holds the signal catalog used by the experiments, the two
classical baselines (truncated Fourier series and sinc interpolation) and
plain error metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from . import numerics
from .bases import (
    SERIES_BAND,
    BasisFamily,
    eval_fourier,
    gauss_legendre_integral,
    point_matrix,
    rho_integer,
)
from .numerics import SingularSystemError
from .sections import SamplingScheme, SectionMatrix, build_section


class OracleDisabledError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# closed-form signal terms

def _exp_window_ft(freq: float, a: float, b: float, w):
    """``int_a^b exp(2 pi i freq t) exp(-2 pi i w t) dt``."""
    w = np.asarray(w, dtype=float)
    d = freq - w
    out = np.empty(w.shape, dtype=complex)
    small = np.abs(d) < SERIES_BAND
    c = 2j * np.pi * d[~small]
    out[~small] = (np.exp(c * b) - np.exp(c * a)) / c
    cs = 2j * np.pi * d[small]
    out[small] = (b - a) + cs * (b * b - a * a) / 2
    return out


@dataclass(frozen=True)
class ClosedFormTerm:
    """A catalog signal with known pointwise values and Fourier transform."""

    name: str
    interval: tuple

    def point(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.interval
        inside = (x >= a) & (x <= b)
        if self.name == "cos_bump":
            return np.where(inside, np.cos(2 * np.pi * x), 0.0)
        if self.name == "sin_bump":
            return np.where(inside, np.sin(2 * np.pi * x), 0.0)
        if self.name == "runge":
            return np.where(inside, 1.0 / (1.0 + 16.0 * x * x), 0.0)
        raise KeyError(self.name)

    @property
    def has_closed_form(self) -> bool:
        return self.name in ("cos_bump", "sin_bump")

    def fourier(self, w, use_oracle: bool = True):
        a, b = self.interval
        if self.name == "cos_bump":
            return 0.5 * (_exp_window_ft(1.0, a, b, w) + _exp_window_ft(-1.0, a, b, w))
        if self.name == "sin_bump":
            return (_exp_window_ft(1.0, a, b, w) - _exp_window_ft(-1.0, a, b, w)) / 2j
        if not use_oracle:
            raise OracleDisabledError(f"{self.name} has no closed-form transform")
        return self.fourier_quadrature(w)

    def fourier_quadrature(self, w):
        w = np.atleast_1d(np.asarray(w, dtype=float))
        a, b = self.interval
        # the Runge function has poles at +-i/4; extra pieces keep the
        # Gauss-Legendre rule at full accuracy near x = 0
        edges = np.linspace(a, b, 33)
        out = np.empty(w.shape, dtype=complex)
        for s in range(0, w.size, 256):
            out[s:s + 256] = gauss_legendre_integral(self.point, edges, w[s:s + 256])
        return out


CATALOG = {
    "cos_bump": ClosedFormTerm("cos_bump", (0.5, 1.0)),
    "sin_bump": ClosedFormTerm("sin_bump", (0.3, 0.6)),
    "runge": ClosedFormTerm("runge", (-1.0, 1.0)),
}


@dataclass(frozen=True)
class Signal:
    """``g = sum_l coefficients[l-1] phi_l + sum(catalog terms)``."""

    family: Optional[BasisFamily] = None
    coefficients: tuple = ()
    terms: tuple = ()

    def __post_init__(self):
        for t in self.terms:
            if t not in CATALOG:
                raise KeyError(f"unknown catalog term {t!r}; known: {sorted(CATALOG)}")
        if len(self.coefficients) and self.family is None:
            raise ValueError("coefficients need a basis family")

    @property
    def beta(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=complex)

    def point(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        if len(self.coefficients):
            out += point_matrix(self.family, len(self.coefficients), x.ravel()).dot(self.beta).reshape(x.shape)
        for t in self.terms:
            out += CATALOG[t].point(x)
        return out

    def fourier(self, w, use_oracle: bool = True):
        w = np.asarray(w, dtype=float)
        out = np.zeros(w.shape, dtype=complex)
        for l, c in enumerate(self.coefficients, start=1):
            if c != 0:
                out += c * eval_fourier(self.family, l, w)
        for t in self.terms:
            out += CATALOG[t].fourier(w, use_oracle=use_oracle).reshape(w.shape)
        return out


# ---------------------------------------------------------------------------
# samples and results

@dataclass(frozen=True, eq=False)
class SampleVector:
    values: np.ndarray
    scheme: SamplingScheme

    def __post_init__(self):
        v = numerics.as_vector(self.values)
        if v.size < 1:
            raise ValueError("need at least one sample")
        object.__setattr__(self, "values", v)

    @property
    def m(self) -> int:
        return self.values.size

    def __mul__(self, c):
        return SampleVector(self.values * c, self.scheme)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    coefficients: np.ndarray
    family: BasisFamily
    inv_norm: float
    m_used: int
    n_used: int
    method: str = "uneven"
    diagnostics: dict = field(default_factory=dict)


def synthesize_samples(signal: Signal, scheme: SamplingScheme, m: int, use_oracle: bool = True) -> SampleVector:
    """Samples ``f(rho(i))``, ``i = 1..m``, of ``f = F g``."""
    values = np.zeros(m, dtype=complex)
    if len(signal.coefficients):
        sec = build_section(signal.family, scheme, m, len(signal.coefficients))
        values += sec.block @ signal.beta
    freqs = scheme.frequencies(m)
    for t in signal.terms:
        values += CATALOG[t].fourier(freqs, use_oracle=use_oracle)
    return SampleVector(values, scheme)


def _require_match(section: SectionMatrix, samples: SampleVector):
    if samples.m != section.m:
        raise numerics.DimensionError(
            f"section has {section.m} rows but {samples.m} samples were given"
        )
    if samples.scheme.epsilon != section.scheme.epsilon:
        raise ValueError("samples and section use different spacings")


def solve_uneven(section: SectionMatrix, samples: SampleVector) -> ReconstructionResult:
    """Generalized sampling reconstruction from an ``m x n`` section, ``m >= n``.

    Raises :class:`~gensamp.numerics.SingularSystemError` when the section is
    rank deficient, i.e. ``m`` is below the smallest admissible sample count.
    """
    _require_match(section, samples)
    if section.m < section.n:
        raise SingularSystemError(f"need m >= n, got m = {section.m}, n = {section.n}")
    beta = numerics.least_squares_solve(section.block, samples.values)
    lam_min = np.linalg.eigvalsh(numerics.gram(section.block))[0]
    inv_norm = 1.0 / lam_min if lam_min > 0 else math.inf
    resid = section.block @ beta - samples.values
    return ReconstructionResult(
        coefficients=beta,
        family=section.family,
        inv_norm=float(inv_norm),
        m_used=section.m,
        n_used=section.n,
        method="uneven",
        diagnostics={"residual_norm": float(np.linalg.norm(resid))},
    )


def solve_consistent(square: SectionMatrix, samples: SampleVector) -> ReconstructionResult:
    """Consistent (square finite-section) reconstruction ``beta = (P_m U P_m)^{-1} eta``."""
    _require_match(square, samples)
    if square.m != square.n:
        raise numerics.DimensionError(f"consistent reconstruction needs a square section, got {square.shape}")
    s = numerics.singular_values(square.block)
    if s[-1] <= numerics.RANK_TOL * s[0]:
        raise SingularSystemError(
            f"square section numerically singular: ||inverse|| ~ {1 / s[-1] if s[-1] else math.inf:.3e}",
            sigma_min=s[-1],
            sigma_max=s[0],
        )
    beta = scipy.linalg.solve(square.block, samples.values)
    return ReconstructionResult(
        coefficients=beta,
        family=square.family,
        inv_norm=float(1.0 / s[-1]),
        m_used=square.m,
        n_used=square.n,
        method="consistent",
    )


def eval_reconstruction(result: ReconstructionResult, grid, domain: str = "signal") -> np.ndarray:
    """Evaluate ``g~ = sum beta_j phi_j`` (``domain='signal'``) or
    ``f~ = sum beta_j F phi_j`` (``domain='transform'``) on ``grid``."""
    x = np.asarray(grid, dtype=float)
    beta = np.asarray(result.coefficients)
    if domain == "signal":
        return point_matrix(result.family, beta.size, x.ravel()).dot(beta).reshape(x.shape)
    if domain == "transform":
        out = np.zeros(x.shape, dtype=complex)
        for l, c in enumerate(beta, start=1):
            out += c * eval_fourier(result.family, l, x)
        return out
    raise ValueError(f"domain must be 'signal' or 'transform', got {domain!r}")


# ---------------------------------------------------------------------------
# classical baselines

def _odd_window(samples: SampleVector):
    if samples.m % 2 == 0:
        raise ValueError("baselines need an odd, symmetric window of samples")
    ks = np.array([rho_integer(i) for i in range(1, samples.m + 1)])
    return ks, samples.values


def baseline_truncated_fourier(samples: SampleVector, grid, block: int = 512) -> np.ndarray:
    """``g_N(t) = eps * sum_{|k| <= N} f(k eps) exp(2 pi i k eps t)``."""
    ks, f = _odd_window(samples)
    eps = samples.scheme.epsilon
    t = np.asarray(grid, dtype=float).ravel()
    out = np.zeros(t.shape, dtype=complex)
    for s in range(0, t.size, block):
        out[s:s + block] = eps * (np.exp(2j * np.pi * eps * np.outer(t[s:s + block], ks)) @ f)
    return out.reshape(np.shape(grid))


def baseline_sinc(samples: SampleVector, grid, block: int = 512) -> np.ndarray:
    """``f_N(t) = sum_{|k| <= N} f(k eps) sinc((t - k eps)/eps)``, ``sinc(0) = 1``."""
    ks, f = _odd_window(samples)
    eps = samples.scheme.epsilon
    t = np.asarray(grid, dtype=float).ravel()
    out = np.zeros(t.shape, dtype=complex)
    for s in range(0, t.size, block):
        arg = t[s:s + block, None] / eps - ks[None, :]
        out[s:s + block] = np.sinc(arg) @ f
    return out.reshape(np.shape(grid))


# ---------------------------------------------------------------------------
# error metrics and helpers

def error_metrics(approx: Sequence, reference: Sequence, grid_weights=None):
    """Weighted discrete L2 norm and max norm of ``approx - reference``.

    Without weights every point carries mass ``1/len``.
    """
    a = np.asarray(approx)
    r = np.asarray(reference)
    if a.shape != r.shape:
        raise numerics.DimensionError(f"length mismatch: {a.shape} vs {r.shape}")
    d = np.abs(a - r)
    if grid_weights is None:
        w = np.full(d.shape, 1.0 / d.size)
    else:
        w = np.asarray(grid_weights, dtype=float)
        if w.shape != d.shape:
            raise numerics.DimensionError("weights do not match the grid")
    l2 = math.sqrt(float(np.sum(w * d * d)))
    linf = float(d.max()) if d.size else 0.0
    return l2, linf


def gauss_grid(a: float, b: float, pieces: int = 64, nodes: int = 32):
    """Composite Gauss-Legendre nodes and weights on ``[a, b]``."""
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, pieces + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    return x, w


def midpoint_grid(a: float, b: float, count: int):
    """Cell midpoints of a uniform partition, each weighted by the cell width."""
    h = (b - a) / count
    x = a + h * (np.arange(count) + 0.5)
    return x, np.full(count, h)


LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407


def lcg_uniform(count: int, seed: int = 42, low: float = 0.0, high: float = 10.0) -> np.ndarray:
    """Deterministic uniforms from the 64-bit linear congruential generator.

    Each draw advances the state once and maps its top 53 bits to
    ``[low, high)``.
    """
    state = seed % 2**64
    out = np.empty(count)
    for k in range(count):
        state = (LCG_MULTIPLIER * state + LCG_INCREMENT) % 2**64
        out[k] = low + (high - low) * ((state >> 11) * 2.0**-53)
    return out
