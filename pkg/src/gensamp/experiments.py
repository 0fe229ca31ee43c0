"""Deterministic CSV reproductions of every figure and example.

Each experiment is a function ``(config, writer) -> summary`` registered in
:data:`EXPERIMENTS`; :func:`run` handles output bookkeeping and removes
partially written files when an experiment fails.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from . import numerics
from .bases import fourier_exponentials, haar_system, legendre, point_matrix
from .constants import (
    ThresholdQuery,
    gram_inverse_norm,
    k_lower,
    k_lower_sequence,
    k_tilde,
    psi_tilde,
    u_norm,
)
from .sections import SamplingScheme, build_section, build_square_section
from .solver import (
    SampleVector,
    Signal,
    baseline_sinc,
    baseline_truncated_fourier,
    error_metrics,
    eval_reconstruction,
    gauss_grid,
    lcg_uniform,
    midpoint_grid,
    solve_consistent,
    solve_uneven,
    synthesize_samples,
)

log = logging.getLogger(__name__)

INSTABILITY_EPSILONS = (1.0, 7 / 8, 1 / 2, 1 / 8)


class UsageError(ValueError):
    """Invalid experiment id or override."""


class ExperimentError(RuntimeError):
    """Numerical failure inside an experiment."""


@dataclass
class ExperimentConfig:
    experiment: str
    out: Path = Path("results")
    epsilon: Optional[float] = None
    n: Optional[int] = None
    m: Optional[int] = None
    grid: Optional[int] = None
    seed: Optional[int] = None

    def overrides(self) -> Dict[str, object]:
        return {k: v for k, v in asdict(self).items() if k in _OVERRIDES and v is not None}


_OVERRIDES = ("epsilon", "n", "m", "grid", "seed")


@dataclass
class CsvWriter:
    """Writes CSV files into one directory and remembers what it wrote."""

    out: Path
    params: Dict[str, object]
    written: List[Path] = field(default_factory=list)

    def record(self, **resolved):
        """Add resolved parameters to the configuration comment of later files."""
        self.params.update(resolved)

    def write(self, name: str, header, rows) -> Path:
        path = self.out / name
        self.written.append(path)
        line = json.dumps(self.params, sort_keys=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(f"# config: {line}\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        return path

    def cleanup(self):
        for p in self.written:
            p.unlink(missing_ok=True)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    x = float(v)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def _tag(eps: float) -> str:
    return f"{eps:g}"


def _require(cond: bool, msg: str):
    if not cond:
        raise UsageError(msg)


def _allowed(config: ExperimentConfig, names):
    extra = set(config.overrides()) - set(names)
    _require(not extra, f"{config.experiment} does not accept --{', --'.join(sorted(extra))}")
    eps = config.epsilon
    if eps is not None:
        _require(0 < eps <= 1, f"--epsilon must lie in (0, 1], got {eps}")
    for name in ("n", "m", "grid"):
        v = getattr(config, name)
        if v is not None:
            _require(v >= 1, f"--{name} must be positive, got {v}")


# ---------------------------------------------------------------------------
# figures

def fig_instability(config: ExperimentConfig, out: CsvWriter) -> str:
    """Inverse norms of square sections for Haar (m = 1..100) and Legendre (m = 2..50)."""
    _allowed(config, ("epsilon", "m"))
    epsilons = (config.epsilon,) if config.epsilon else INSTABILITY_EPSILONS
    m_haar = config.m or 100
    m_leg = min(config.m, 50) if config.m else 50
    out.record(epsilons=list(epsilons), m_max_haar=m_haar, m_max_legendre=m_leg)
    lines = []
    for eps in epsilons:
        rows = _square_inverse_norms(haar_system(), eps, range(1, m_haar + 1))
        out.write(f"instability_haar_eps{_tag(eps)}.csv", ("m", "inv_norm"), rows)
        lines.append(f"haar eps={_tag(eps)} max={max(r[1] for r in rows):.3e}")
    for eps in epsilons:
        rows = _square_inverse_norms(legendre(), eps, range(2, m_leg + 1, 2))
        out.write(f"instability_legendre_eps{_tag(eps)}.csv", ("m", "inv_norm"), rows)
        lines.append(f"legendre eps={_tag(eps)} max={max(r[1] for r in rows):.3e}")
    return "; ".join(lines)


def _square_inverse_norms(family, eps, ms):
    # square sections illustrate the failure of the finite-section method,
    # so undersampled spacings are allowed here
    scheme = SamplingScheme(eps, enforce_nyquist=False)
    big = build_square_section(family, scheme, max(ms)).block
    rows = []
    for m in ms:
        smin = numerics.min_singular_value(big[:m, :m])
        rows.append((m, 1.0 / smin if smin > 0 else math.inf))
    return rows


def runge_errors(ns, epsilon: float = 0.5, quad_pieces: int = 64):
    """L2 errors on [-1, 1] for the Runge function 1/(1 + 16 x^2).

    Returns rows ``(n, best_approx, uneven, consistent)`` where ``uneven``
    uses ``m = 4 n^2`` samples and ``consistent`` uses ``m = n``.
    """
    fam = legendre()
    scheme = SamplingScheme(epsilon)
    signal = Signal(terms=("runge",))
    m_max = max(4 * n * n for n in ns)
    eta = synthesize_samples(signal, scheme, m_max).values
    x, w = gauss_grid(-1.0, 1.0, pieces=quad_pieces, nodes=32)
    ref = signal.point(x).real
    basis = point_matrix(fam, max(ns), x)
    rows = []
    for n in ns:
        phi = basis[:, :n]
        best = phi @ (phi.T @ (w * ref))
        m = 4 * n * n
        sec = build_section(fam, scheme, m, n)
        unev = solve_uneven(sec, SampleVector(eta[:m], scheme))
        sq = build_square_section(fam, scheme, n)
        try:
            cons = solve_consistent(sq, SampleVector(eta[:n], scheme))
            cons_err = error_metrics(phi @ cons.coefficients, ref, w)[0]
        except numerics.SingularSystemError:
            cons_err = math.inf
        rows.append(
            (
                n,
                error_metrics(best, ref, w)[0],
                error_metrics(phi @ unev.coefficients, ref, w)[0],
                cons_err,
            )
        )
    return rows


def fig_legendre(config: ExperimentConfig, out: CsvWriter) -> str:
    _allowed(config, ("epsilon", "n", "m"))
    m_max = config.m or 50
    out.record(condition_epsilons=list(INSTABILITY_EPSILONS), m_max=m_max)
    for eps in INSTABILITY_EPSILONS:
        rows = _square_inverse_norms(legendre(), eps, range(2, m_max + 1, 2))
        out.write(f"legendre_condition_eps{_tag(eps)}.csv", ("m", "inv_norm"), rows)
    eps = config.epsilon or 0.5
    _require(eps <= 0.5, "the Runge reconstruction needs --epsilon <= 1/2 (Legendre support [-1, 1])")
    n_max = config.n or 20
    _require(n_max >= 2, "--n must be at least 2")
    out.record(epsilon=eps, n_max=n_max, uneven_m="4n^2", consistent_m="n")
    rows = runge_errors(list(range(2, n_max + 1, 2)), eps)
    out.write("runge_errors.csv", ("n", "best_approx", "uneven", "consistent"), rows)
    last = rows[-1]
    return (
        f"fig-legendre: n={last[0]} best={last[1]:.3e} uneven(m=4n^2)={last[2]:.3e} "
        f"consistent(m=n)={last[3]:.3e}"
    )


def fig_knmm(config: ExperimentConfig, out: CsvWriter) -> str:
    _allowed(config, ("epsilon", "n", "m", "grid"))
    eps = config.epsilon or 0.5
    scheme = SamplingScheme(eps)
    M_max = config.grid or 6000
    if config.n or config.m:
        n = config.n or 75
        m = config.m or max(n, 350)
        pairs = [(n, m)]
    else:
        pairs = [(75, 350), (100, 400)]
    out.record(epsilon=eps, M_max=M_max, pairs=pairs)
    lines = []
    for n, m in pairs:
        _require(m >= n, f"need m >= n, got m={m}, n={n}")
        _require(M_max > n, f"--grid (largest M) must exceed n={n}")
        Ms = list(range(n + 1, M_max + 1))
        vals = k_lower_sequence(haar_system(), scheme, n, m, Ms)
        out.write(f"knmm_n{n}_m{m}.csv", ("M", "k_lower"), zip(Ms, vals))
        lines.append(f"n={n} m={m} K(M={M_max})={vals[-1]:.6f}")
    return "fig-knmm: " + "; ".join(lines)


def fig_psi(config: ExperimentConfig, out: CsvWriter) -> str:
    _allowed(config, ("epsilon", "n"))
    eps = config.epsilon or 0.5
    scheme = SamplingScheme(eps)
    ns = list(range(10, (config.n or 200) + 1, 10))
    _require(ns, "--n must be at least 10")
    out.record(epsilon=eps, n_values=f"10..{ns[-1]} step 10", thetas=[1, 2])
    lines = []
    for theta in (1, 2):
        rows = [(n, psi_tilde(haar_system(), scheme, ThresholdQuery(n, float(theta), eps))) for n in ns]
        out.write(f"psi_theta{theta}.csv", ("n", "psi_tilde"), rows)
        lines.append(f"theta={theta} max psi/n={max(p / n for n, p in rows):.3f}")
    return "fig-psi: " + "; ".join(lines)


def stability_values(ns, epsilon: float = 0.5, ratio: float = 4.9):
    scheme = SamplingScheme(epsilon)
    return [
        (n, gram_inverse_norm(haar_system(), scheme, n, math.ceil(ratio * n)) / epsilon)
        for n in ns
    ]


def fig_stability(config: ExperimentConfig, out: CsvWriter) -> str:
    """``||(eps A)^{-1}||`` with ``m = ceil(4.9 n)`` for n = 2, 4, ..., 360."""
    _allowed(config, ("epsilon", "n"))
    eps = config.epsilon or 0.5
    out.record(epsilon=eps, n_max=config.n or 360, m="ceil(4.9 n)")
    rows = stability_values(range(2, (config.n or 360) + 1, 2), eps)
    _require(rows, "--n must be at least 2")
    out.write("stability.csv", ("n", "inv_norm_scaled"), rows)
    return f"fig-stability: max ||(eps A)^-1|| = {max(r[1] for r in rows):.4f}"


# ---------------------------------------------------------------------------
# reconstruction examples

def _recon_inputs(config, n_default, N_default):
    eps = config.epsilon or 0.5
    n = config.n or n_default
    m = config.m or 2 * N_default + 1
    _require(m % 2 == 1, f"--m must be odd (symmetric sample window), got {m}")
    _require(m >= n, f"need m >= n, got m={m}, n={n}")
    return eps, n, m


def _write_common(out, result, diagnostics):
    beta = result.coefficients
    out.write(
        "coefficients.csv",
        ("index", "real", "imag"),
        ((i, b.real, b.imag) for i, b in enumerate(beta, start=1)),
    )
    out.write("diagnostics.csv", ("key", "value"), diagnostics.items())


def away_from(x, points, radius):
    mask = np.ones(x.shape, dtype=bool)
    for p in points:
        mask &= np.abs(x - p) > radius
    return mask


def ex_fourier_recon(config: ExperimentConfig, out: CsvWriter) -> str:
    """Recover g = cos(2 pi t) on [0.5, 1] from Fourier samples in the Haar basis."""
    _allowed(config, ("epsilon", "n", "m", "grid"))
    eps, n, m = _recon_inputs(config, 500, 900)
    out.record(epsilon=eps, n=n, m=m, grid=config.grid or 4096, signal="cos_bump")
    fam = haar_system()
    scheme = SamplingScheme(eps)
    signal = Signal(terms=("cos_bump",))
    samples = synthesize_samples(signal, scheme, m)
    result = solve_uneven(build_section(fam, scheme, m, n), samples)

    x, w = midpoint_grid(0.0, 1.0, config.grid or 4096)
    ref = signal.point(x).real
    gen = eval_reconstruction(result, x)
    base = baseline_truncated_fourier(samples, x)
    l2, linf = error_metrics(gen, ref, w)
    bl2, blinf = error_metrics(base, ref, w)
    mask = away_from(x, (0.0, 0.5, 1.0), 0.01)
    kt = k_tilde(fam, scheme, n, m)
    diagnostics = {
        "epsilon": eps,
        "n": n,
        "m": m,
        "inv_norm": result.inv_norm,
        "k_tilde": kt,
        "k_upper": u_norm(fam, scheme) * kt,
        "l2_error": l2,
        "linf_error": linf,
        "baseline_l2_error": bl2,
        "baseline_linf_error": blinf,
        "linf_error_away_from_jumps": float(np.abs(gen - ref)[mask].max()),
        "baseline_linf_error_away_from_jumps": float(np.abs(base - ref)[mask].max()),
        "max_imag_generalized": float(np.abs(gen.imag).max()),
    }
    out.write(
        "reconstruction.csv",
        ("x", "reference", "generalized", "baseline", "generalized_imag", "baseline_imag"),
        zip(x, ref, gen.real, base.real, gen.imag, base.imag),
    )
    _write_common(out, result, diagnostics)
    return (
        f"ex-fourier-recon: inv_norm={result.inv_norm:.4f} k_tilde={kt:.4f} "
        f"l2_error={l2:.3e} baseline_l2_error={bl2:.3e}"
    )


def pointwise_signal(K: int = 400, seed: int = 42) -> Signal:
    alpha = lcg_uniform(K, seed=seed, low=0.0, high=10.0)
    return Signal(family=haar_system(), coefficients=tuple(alpha), terms=("sin_bump",))


def ex_pointwise_recon(config: ExperimentConfig, out: CsvWriter) -> str:
    """Recover f = F g on [-5000, 5000] from 1201 samples; g has K = 400 Haar terms."""
    _allowed(config, ("epsilon", "n", "m", "grid", "seed"))
    eps, n, m = _recon_inputs(config, 500, 600)
    seed = config.seed if config.seed is not None else 42
    out.record(epsilon=eps, n=n, m=m, grid=config.grid or 5000, seed=seed, K=400, signal="haar+sin_bump")
    fam = haar_system()
    scheme = SamplingScheme(eps)
    signal = pointwise_signal(400, seed)
    samples = synthesize_samples(signal, scheme, m)
    result = solve_uneven(build_section(fam, scheme, m, n), samples)

    half = config.grid or 5000
    t = np.arange(-half, half + 1, dtype=float)
    ref = signal.fourier(t)
    gen = eval_reconstruction(result, t, domain="transform")
    base = baseline_sinc(samples, t)
    l2, linf = error_metrics(gen, ref)
    bl2, blinf = error_metrics(base, ref)
    tail = (t >= 0.8 * half) & (t <= half)
    tail_err = float(np.abs(gen - ref)[tail].max())
    tail_base = float(np.abs(base - ref)[tail].max())
    kt = k_tilde(fam, scheme, n, m)
    diagnostics = {
        "epsilon": eps,
        "n": n,
        "m": m,
        "inv_norm": result.inv_norm,
        "k_tilde": kt,
        "k_upper": u_norm(fam, scheme) * kt,
        "l2_error": l2,
        "linf_error": linf,
        "baseline_l2_error": bl2,
        "baseline_linf_error": blinf,
        "tail_linf_error": tail_err,
        "baseline_tail_linf_error": tail_base,
        "tail_improvement": tail_base / tail_err if tail_err > 0 else math.inf,
    }
    out.write(
        "reconstruction.csv",
        ("x", "reference", "generalized", "baseline", "reference_imag", "generalized_imag", "baseline_imag"),
        zip(t, ref.real, gen.real, base.real, ref.imag, gen.imag, base.imag),
    )
    _write_common(out, result, diagnostics)
    return (
        f"ex-pointwise-recon: inv_norm={result.inv_norm:.4f} k_tilde={kt:.4f} "
        f"tail improvement={diagnostics['tail_improvement']:.3e}"
    )


def shannon_check(config: ExperimentConfig, out: CsvWriter) -> str:
    """With the exponential basis and m = n the method is the Shannon series."""
    _allowed(config, ("epsilon", "n", "m"))
    eps = config.epsilon or 0.5
    m = config.m or config.n or 101
    n = config.n or m
    _require(n == m, "shannon-check reconstructs with m = n")
    out.record(epsilon=eps, n=n, m=m, signal="cos_bump")
    fam = fourier_exponentials(eps)
    scheme = SamplingScheme(eps)
    signal = Signal(terms=("cos_bump",))
    samples = synthesize_samples(signal, scheme, m)
    result = solve_uneven(build_section(fam, scheme, m, n), samples)
    expected = math.sqrt(eps) * samples.values[:n]
    coef_err = float(np.abs(result.coefficients - expected).max())
    cons = solve_consistent(build_square_section(fam, scheme, m), samples)
    cons_err = float(np.abs(cons.coefficients - expected).max())
    n_tail = max(1, m // 2)
    k_vals = [k_lower(fam, scheme, n_tail, m, M) for M in range(n_tail + 1, m + 1)]
    diagnostics = {
        "epsilon": eps,
        "n": n,
        "m": m,
        "inv_norm": result.inv_norm,
        "max_coefficient_error": coef_err,
        "max_coefficient_error_consistent": cons_err,
        "k_lower_n": n_tail,
        "max_k_lower_M_le_m": max(k_vals) if k_vals else 0.0,
    }
    _write_common(out, result, diagnostics)
    status = "<=" if coef_err <= 1e-12 else ">"
    return f"shannon-check: max coefficient error = {coef_err:.3e} {status} 1e-12"


EXPERIMENTS: Dict[str, Callable[[ExperimentConfig, CsvWriter], str]] = {
    "fig-instability": fig_instability,
    "fig-legendre": fig_legendre,
    "fig-knmm": fig_knmm,
    "fig-psi": fig_psi,
    "fig-stability": fig_stability,
    "ex-fourier-recon": ex_fourier_recon,
    "ex-pointwise-recon": ex_pointwise_recon,
    "shannon-check": shannon_check,
}


def run(config: ExperimentConfig):
    """Run one experiment; returns ``(files, summary)``.

    Raises :class:`UsageError` for bad ids or overrides and
    :class:`ExperimentError` for numerical failures (after deleting any
    files the experiment had already written).
    """
    if config.experiment not in EXPERIMENTS:
        raise UsageError(f"unknown experiment {config.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    writer = CsvWriter(out_dir, {"experiment": config.experiment, **config.overrides()})
    try:
        summary = EXPERIMENTS[config.experiment](config, writer)
    except UsageError:
        writer.cleanup()
        raise
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        writer.cleanup()
        raise ExperimentError(f"{config.experiment} failed: {exc}") from exc
    log.info("%s wrote %d files to %s", config.experiment, len(writer.written), out_dir)
    return list(writer.written), summary
