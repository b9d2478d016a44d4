"""Variance analysis and singularity-location estimation.

Blocked standard errors and autocorrelation diagnostics for chain
output, the jackknifed ratio estimator of the canonical mean length,
exact canonical means from coefficient sequences, and the
reciprocal-error extrapolation that locates the critical fugacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .sampler import ObservableSeries


@dataclass
class BlockEstimate:
    mean: float
    stderr: float
    block_size: int
    num_blocks: int


@dataclass
class AnalysisResult:
    beta_c_estimate: float
    fit_degree: int
    residual: float
    uncertainty: float = 0.0
    num_generators: Optional[int] = None
    amenable_threshold: Optional[float] = None
    verdict: Optional[str] = None


def block_means(series: Sequence[float], m: int) -> np.ndarray:
    """Averages over consecutive blocks of size m; a trailing partial
    block is discarded."""
    if m < 1:
        raise ValueError("block size must be positive")
    n = len(series)
    if m > n:
        raise ValueError("block size exceeds series length")
    nb = n // m
    data = np.asarray(series[:nb * m], dtype=float)
    return data.reshape(nb, m).mean(axis=1)


def block_stderr(series: Sequence[float], m: int) -> BlockEstimate:
    """Standard error of the mean from block averages treated as
    independent samples."""
    means = block_means(series, m)
    nb = len(means)
    if nb < 2:
        raise ValueError("need at least two blocks")
    s2 = float(np.mean(means ** 2) - np.mean(means) ** 2)
    return BlockEstimate(mean=float(np.mean(means)),
                         stderr=math.sqrt(max(s2, 0.0) / (nb - 1)),
                         block_size=m, num_blocks=nb)


def block_stderr_plateau(series: Sequence[float], m0: int = 1,
                         rel_tol: float = 0.05) -> list[BlockEstimate]:
    """Estimates for doubling block sizes, stopping once the stderr is
    stable within rel_tol (or fewer than 2 blocks remain)."""
    out = []
    m = m0
    while len(series) // m >= 2:
        out.append(block_stderr(series, m))
        if len(out) >= 2 and out[-2].stderr > 0:
            if abs(out[-1].stderr - out[-2].stderr) <= rel_tol * out[-2].stderr:
                break
        m *= 2
    return out


def autocorrelation(series: Sequence[float], k: int) -> float:
    """Connected autocorrelation S(k) = <O_i O_{i+k}> - <O>^2."""
    data = np.asarray(series, dtype=float)
    n = len(data)
    if not 0 <= k < n:
        raise ValueError("lag out of range")
    mean = data.mean()
    return float(np.mean(data[:n - k] * data[k:]) - mean * mean)


def integrated_autocorrelation_time(series: Sequence[float]) -> float:
    """tau = 1/2 + sum of normalized autocorrelations, truncated at the
    first negative term."""
    s0 = autocorrelation(series, 0)
    if s0 <= 0:
        return 0.5
    tau = 0.5
    for k in range(1, len(series)):
        rho = autocorrelation(series, k) / s0
        if rho < 0:
            break
        tau += rho
    return tau


def ratio_estimator(obs: ObservableSeries) -> BlockEstimate:
    """Canonical mean length from the stored block sums.

    The point estimate is (sum f1) / (sum f2); the stderr comes from a
    leave-one-block-out jackknife, which respects the block structure.
    """
    f1 = np.asarray(obs.sum_f1, dtype=float)
    f2 = np.asarray(obs.sum_f2, dtype=float)
    nb = len(f1)
    tot1 = f1.sum()
    tot2 = f2.sum()
    if tot2 <= 0:
        raise ValueError("no non-empty samples recorded")
    mean = tot1 / tot2
    if nb < 2:
        return BlockEstimate(mean=mean, stderr=float("inf"),
                             block_size=obs.steps_per_block, num_blocks=nb)
    denom = tot2 - f2
    if np.any(denom <= 0):
        # one block holds every sample; no resampling error is possible
        return BlockEstimate(mean=float(mean), stderr=float("inf"),
                             block_size=obs.steps_per_block, num_blocks=nb)
    loo = (tot1 - f1) / denom
    stderr = math.sqrt((nb - 1) / nb * float(np.sum((loo - loo.mean()) ** 2)))
    return BlockEstimate(mean=float(mean), stderr=stderr,
                         block_size=obs.steps_per_block, num_blocks=nb)


def exact_canonical_mean(d: Sequence[int], beta: float, alpha: float = -1.0,
                         rel_tol: float = 1e-12) -> float:
    """Mean length under weights (n+1)^(1+alpha) d_n beta^n, n >= 1.

    The order-0 (empty word) term is excluded.  Terms are accumulated in
    log space to survive huge counts; non-decaying terms at the end of
    the supplied coefficients signal beta at or beyond the radius of
    convergence.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    log_beta = math.log(beta)
    num = 0.0
    den = 0.0
    log_terms = []
    shift = None
    for n, dn in enumerate(d):
        if n == 0 or dn <= 0:
            continue
        lt = math.log(dn) + (1 + alpha) * math.log(n + 1) + n * log_beta
        if shift is None:
            shift = lt
        term = math.exp(lt - shift)
        log_terms.append((n, lt))
        num += n * term
        den += term
        if term < rel_tol * den and lt < log_terms[max(0, len(log_terms) - 2)][1]:
            break
    if den == 0:
        raise ValueError("no nonzero coefficients")
    if len(log_terms) >= 3:
        (n1, t1), (n2, t2) = log_terms[-2], log_terms[-1]
        if t2 >= t1 and math.exp(t2 - shift) > rel_tol * den:
            raise ValueError("terms are not decaying: beta at or beyond the "
                             "radius of convergence for this truncation")
    return num / den


def intercept_extrapolate(points: Sequence[tuple[float, float]],
                          degree: int = 1) -> AnalysisResult:
    """Fit reciprocal-stderr points and locate the beta where the fit
    crosses zero (the smallest real root beyond the data range)."""
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    if len(points) < degree + 2:
        raise ValueError(f"need at least {degree + 2} points")
    betas = np.asarray([p[0] for p in points], dtype=float)
    ys = np.asarray([p[1] for p in points], dtype=float)
    if np.allclose(ys, ys[0]):
        raise ValueError("degenerate constant input: no crossing")
    coeffs = np.polyfit(betas, ys, degree)
    fit = np.polyval(coeffs, betas)
    residual = float(np.sqrt(np.mean((fit - ys) ** 2)))
    roots = np.roots(coeffs)
    beta_max = betas.max()
    real_roots = sorted(r.real for r in roots
                        if abs(r.imag) <= 1e-9 * max(1.0, abs(r.real))
                        and r.real > beta_max)
    if not real_roots:
        # a quadratic may have a minimum shortly beyond the data instead
        # of a root; treat a near-tangent vertex as the crossing
        if degree == 2:
            vertex = -coeffs[1] / (2 * coeffs[0])
            if vertex > beta_max and np.polyval(coeffs, vertex) < ys.max() * 0.05:
                real_roots = [float(vertex)]
    if not real_roots:
        raise ValueError("fit has no real root beyond the data range")
    root = float(real_roots[0])
    # propagate the vertical scatter through the slope at the crossing
    slope = float(np.polyval(np.polyder(coeffs), root))
    uncertainty = residual / abs(slope) if slope else float("inf")
    return AnalysisResult(beta_c_estimate=root, fit_degree=degree,
                          residual=residual, uncertainty=uncertainty)


def amenability_report(result: AnalysisResult, k: int,
                       uncertainty: Optional[float] = None) -> AnalysisResult:
    """Compare the estimated critical beta against 1/(2k-1).

    The verdict is statistical evidence only, never a proof.
    """
    threshold = 1.0 / (2 * k - 1)
    beta_c = result.beta_c_estimate
    if uncertainty is None:
        uncertainty = 2 * result.uncertainty
    if beta_c - uncertainty > threshold:
        verdict = "not amenable signal (statistical, not a proof)"
    else:
        verdict = "consistent with amenable (statistical, not a proof)"
    return AnalysisResult(beta_c_estimate=beta_c, fit_degree=result.fit_degree,
                          residual=result.residual,
                          uncertainty=result.uncertainty, num_generators=k,
                          amenable_threshold=threshold, verdict=verdict)
