"""Computable stability constants for generalized sampling.

With ``U_mn = P_m U P_n`` and ``G = U_mn^* U_mn`` (the matrix ``A`` of the
reconstruction system) this module evaluates

* ``||G^{-1}||``                                   (:func:`gram_inverse_norm`)
* ``K~_{n,m} = ||G^{-1} U_mn^*||``                  (:func:`k_tilde`)
* ``||U|| K~_{n,m}``, an upper bound for K_{n,m}    (:func:`k_upper`)
* ``K_{n,m,M} = ||G^{-1} U_mn^* P_m U (P_M - P_n)||``, a lower bound that
  increases to K_{n,m} as M grows                   (:func:`k_lower`)
* ``||eps^{-1} I - G||`` for orthonormal families   (:func:`residual_norm`)

and, on top of those, the sample-count thresholds ``Psi~`` and a bracket
for ``Phi`` (the smallest m with K_{n,m} <= theta), plus the analytic bound
available for compactly supported wavelets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

import numpy as np

from . import numerics
from .bases import BasisFamily
from .sections import SamplingScheme, build_section


class UnsupportedFamilyError(ValueError):
    pass


@dataclass(frozen=True)
class ThresholdQuery:
    n: int
    theta: float
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.theta <= 0:
            raise ValueError("theta must be positive")
        if self.n < 1:
            raise ValueError("n must be positive")


@dataclass(frozen=True)
class ConstantsReport:
    n: int
    m: int
    inv_norm: float
    k_tilde: float
    k_lower: float
    k_upper: float
    residual: Optional[float]
    M_used: int
    k_lower_converged: bool


class PhiBracket(NamedTuple):
    lower: int
    upper: int


def threshold_f(theta: float) -> float:
    """``f(theta) = (sqrt(1 + 4 theta^2) - 1)^2 / (4 theta^2)``."""
    return (math.sqrt(1.0 + 4.0 * theta * theta) - 1.0) ** 2 / (4.0 * theta * theta)


def u_norm(family: BasisFamily, scheme: SamplingScheme) -> float:
    """The bound ``||U|| <= sqrt(B / eps)``, attained for orthonormal families."""
    return math.sqrt(family.riesz_upper / scheme.epsilon)


def _section(family, scheme, m, n):
    if m < n:
        raise ValueError(f"need m >= n, got m = {m}, n = {n}")
    return build_section(family, scheme, m, n).block


def _gram_and_min_eig(block):
    g = numerics.gram(block)
    lam = np.linalg.eigvalsh(g)
    return g, lam[0], lam[-1]


# eigenvalues of G below this fraction of the largest are round-off: G squares
# the condition number of U_mn, so this is sigma_min/sigma_max ~ 1e-7
GRAM_TOL = 1e-14


def _is_singular(lam_min, lam_max):
    return lam_min <= GRAM_TOL * lam_max


def gram_inverse_norm(family: BasisFamily, scheme: SamplingScheme, n: int, m: int) -> float:
    """``||G(n, m)^{-1}||``; ``math.inf`` when ``G`` is numerically singular."""
    _, lo, hi = _gram_and_min_eig(_section(family, scheme, m, n))
    if _is_singular(lo, hi):
        return math.inf
    return float(1.0 / lo)


def k_tilde(family: BasisFamily, scheme: SamplingScheme, n: int, m: int) -> float:
    """``||G^{-1} U_mn^*||`` computed directly from its definition."""
    block = _section(family, scheme, m, n)
    g, lo, hi = _gram_and_min_eig(block)
    if _is_singular(lo, hi):
        return math.inf
    x = np.linalg.solve(g, block.conj().T)
    return numerics.operator_norm(x)


def k_upper(family: BasisFamily, scheme: SamplingScheme, n: int, m: int) -> float:
    return u_norm(family, scheme) * k_tilde(family, scheme, n, m)


def _tail_composition(family, scheme, n, m, M):
    """``G^{-1} U_mn^* P_m U (P_M - P_n)`` as an ``n x (M - n)`` array."""
    head = _section(family, scheme, m, n)
    g, lo, hi = _gram_and_min_eig(head)
    if _is_singular(lo, hi):
        return None
    tail = build_section(family, scheme, m, M - n, col_offset=n).block
    return np.linalg.solve(g, head.conj().T @ tail)


def k_lower(family: BasisFamily, scheme: SamplingScheme, n: int, m: int, M: int) -> float:
    """``K_{n,m,M}``, a lower bound for ``K_{n,m}`` nondecreasing in ``M``."""
    if M <= n:
        raise ValueError(f"need M > n, got M = {M}, n = {n}")
    y = _tail_composition(family, scheme, n, m, M)
    if y is None:
        return math.inf
    return numerics.operator_norm(y)


def k_lower_sequence(family: BasisFamily, scheme: SamplingScheme, n: int, m: int, Ms: Iterable[int]) -> np.ndarray:
    """``K_{n,m,M}`` for many ``M`` at once.

    The squared norm is the top eigenvalue of ``Y_M Y_M^*``, which is
    accumulated column block by column block.
    """
    Ms = [int(M) for M in Ms]
    if not Ms:
        return np.zeros(0)
    if min(Ms) <= n:
        raise ValueError("every M must exceed n")
    order = np.argsort(Ms, kind="stable")
    y = _tail_composition(family, scheme, n, m, max(Ms))
    out = np.empty(len(Ms))
    if y is None:
        out[:] = math.inf
        return out
    h = np.zeros((n, n), dtype=complex)
    done = 0
    for pos in order:
        upto = Ms[pos] - n
        if upto > done:
            cols = y[:, done:upto]
            h += cols @ cols.conj().T
            done = upto
        lam = np.linalg.eigvalsh(0.5 * (h + h.conj().T))[-1]
        out[pos] = math.sqrt(max(lam, 0.0))
    return out


def _require_orthonormal(family):
    if not family.orthonormal:
        raise UnsupportedFamilyError(
            f"{family.label} is not orthonormal; the infinite Gram tail is not computable"
        )


def residual_norm(family: BasisFamily, scheme: SamplingScheme, n: int, m: int) -> float:
    """``||eps^{-1} I_n - G(n, m)||`` for an orthonormal family."""
    _require_orthonormal(family)
    g = numerics.gram(_section(family, scheme, m, n))
    lam = np.linalg.eigvalsh(np.eye(n) / scheme.epsilon - g)[-1]
    return float(max(lam, 0.0))


def _first_crossing(predicate, start: int) -> int:
    """Smallest ``m >= start`` with ``predicate(m)``, for monotone predicates."""
    if predicate(start):
        return start
    lo, hi = start, 2 * start
    while not predicate(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return hi


def psi_tilde(family: BasisFamily, scheme: SamplingScheme, query: ThresholdQuery) -> int:
    """Smallest ``m >= n`` with ``residual_norm(n, m) <= f(theta) / eps``.

    The residual is nonincreasing in ``m`` (each added row adds a positive
    semidefinite term to ``G``), so doubling followed by bisection finds the
    first crossing.
    """
    _require_orthonormal(family)
    _check_query(scheme, query)
    thr = threshold_f(query.theta) / scheme.epsilon
    return _first_crossing(lambda m: residual_norm(family, scheme, query.n, m) <= thr, query.n)


def _check_query(scheme, query):
    if query.epsilon is not None and not math.isclose(query.epsilon, scheme.epsilon):
        raise ValueError("query and scheme disagree on the sample spacing")


def k_product_bound(family: BasisFamily, scheme: SamplingScheme, n: int, m: int) -> float:
    """``||G^{-1}|| ||U|| sqrt(residual)``, an upper bound for ``K_{n,m}``."""
    inv = gram_inverse_norm(family, scheme, n, m)
    return inv * u_norm(family, scheme) * math.sqrt(residual_norm(family, scheme, n, m))


def phi_bracket(
    family: BasisFamily, scheme: SamplingScheme, query: ThresholdQuery, M_cap: Optional[int] = None
) -> PhiBracket:
    """Bracket ``lower <= Phi(U, n, theta) <= upper``.

    ``upper`` is the first ``m`` at which a rigorous upper bound on
    ``K_{n,m}`` drops to ``theta``: the smaller of ``||U|| K~_{n,m}`` and
    ``||G^{-1}|| ||U|| sqrt(residual)``.  Both are nonincreasing in ``m``.
    ``lower`` is the first ``m`` (scanning upward from ``n``) at which the
    lower bound ``K_{n,m,M_cap}`` drops to ``theta``; any ``m`` with
    ``K_{n,m} <= theta`` satisfies this too, hence ``lower <= Phi``.
    """
    _require_orthonormal(family)
    _check_query(scheme, query)
    n, theta = query.n, query.theta
    M_cap = M_cap or 8 * n

    def upper_ok(m):
        return min(k_upper(family, scheme, n, m), k_product_bound(family, scheme, n, m)) <= theta

    upper = _first_crossing(upper_ok, n)
    head = build_section(family, scheme, upper, n).block
    tail = build_section(family, scheme, upper, M_cap - n, col_offset=n).block
    lower = upper
    for m in range(n, upper + 1):
        h = head[:m]
        g = numerics.gram(h)
        lam = np.linalg.eigvalsh(g)
        if _is_singular(lam[0], lam[-1]):
            continue
        y = np.linalg.solve(g, h.conj().T @ tail[:m])
        if numerics.operator_norm(y) <= theta:
            lower = m
            break
    return PhiBracket(lower, upper)


def wavelet_phi_bound(query: ThresholdQuery, C: float, p: int, a: float) -> float:
    """Closed-form upper bound on ``Phi(U, n, theta)`` for wavelets with
    ``|F phi|, |F psi| <= C / |w|^p`` supported on ``[0, a]``."""
    if C <= 0 or p < 1 or a <= 0:
        raise ValueError("need C > 0, p >= 1, a > 0")
    if query.epsilon is None:
        raise ValueError("the wavelet bound needs the sample spacing")
    eps, n = query.epsilon, query.n
    e = 1.0 / (2 * p - 1)
    first = (4.0 * eps ** (1 - 2 * p) * math.ceil(a) * C * C / threshold_f(query.theta)) ** e
    second = (1.0 + (4.0**p * float(n) ** (2 * p) - 1.0) / (4.0**p - 1.0)) ** e
    return first * second


def wavelet_tail_bound(n: int, m: int, epsilon: float, C: float, p: int, a: float) -> float:
    """Analytic bound on ``||G(n, m) - eps^{-1} I||`` for the same wavelet class."""
    return (
        4.0 * epsilon ** (-2 * p) * math.ceil(a) * C * C / float(m) ** (2 * p - 1)
        * (1.0 + (4.0**p * float(n) ** (2 * p) - 1.0) / (4.0**p - 1.0))
    )


def constants_report(
    family: BasisFamily, scheme: SamplingScheme, n: int, m: int, M: Optional[int] = None
) -> ConstantsReport:
    """Collect every constant for one ``(n, m)``.

    ``k_lower`` is evaluated at ``M = 2n, 4n, 8n`` (or the given ``M``); the
    convergence flag is set when the last doubling moved it by at most 1%.
    """
    inv = gram_inverse_norm(family, scheme, n, m)
    kt = k_tilde(family, scheme, n, m)
    if M is None:
        Ms = [2 * n, 4 * n, 8 * n]
    else:
        Ms = [M]
    kl = k_lower_sequence(family, scheme, n, m, Ms)
    converged = True
    if len(kl) > 1 and kl[-1] > 0:
        converged = abs(kl[-1] - kl[-2]) <= 0.01 * kl[-1]
    resid = residual_norm(family, scheme, n, m) if family.orthonormal else None
    return ConstantsReport(
        n=n,
        m=m,
        inv_norm=inv,
        k_tilde=kt,
        k_lower=float(kl[-1]),
        k_upper=u_norm(family, scheme) * kt,
        residual=resid,
        M_used=Ms[-1],
        k_lower_converged=bool(converged),
    )
