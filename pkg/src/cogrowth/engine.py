"""Exact counting of trivial words in Baumslag-Solitar and related groups.

The central object is the three-series system for BS(N, M) counting words
that land in the cyclic subgroup generated by a, graded by the a-exponent
of the normal form.  Every non-constant term of the system carries a
factor of z or z^2, so the coefficient of z^n is determined by lower
orders and a single order-by-order sweep produces exact coefficients.

Also here: the continued-fraction evaluation for BS(1, M), the explicit
algebraic equations satisfied by the N = M series, closed forms for the
free-group limit and Kouksov's free products, and growth-rate estimation
by corrected ratios with Richardson extrapolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .qseries import (
    LaurentPoly,
    QSeries,
    Q_PLUS_QINV,
    RatSeries,
    rat_div,
    rat_sqrt,
    integer_coefficients,
)


@dataclass(frozen=True)
class BSSpec:
    n: int
    m: int
    n_max: int
    trim_threshold: Optional[int] = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("N and M must be >= 1")
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")
        if self.trim_threshold is not None and self.trim_threshold < 1:
            raise ValueError("trim threshold must be positive")


def _trim_row(row: LaurentPoly, threshold: int) -> LaurentPoly:
    """Drop coefficients c with threshold * c < (row sum)."""
    if row.is_zero():
        return row
    total = row.coefficient_sum()
    kept = {k: v for k, v in row.items() if threshold * v >= total}
    return LaurentPoly.from_dict(kept)


def iterate_bs_system(spec: BSSpec) -> tuple[QSeries, QSeries, QSeries]:
    """Solve the coupled functional equations for BS(N, M) to order n_max.

    Returns the series (L, K, G): all three count words evaluating into
    the subgroup generated by a, with q marking the a-exponent; L excludes
    words with a prefix equal to b^-1 a^j, K excludes prefixes equal to
    b a^j, and G is unrestricted.
    """
    n, m, n_max = spec.n, spec.m, spec.n_max
    trim = spec.trim_threshold
    q = Q_PLUS_QINV
    zero = LaurentPoly()
    one = LaurentPoly.const(1)

    L: list[LaurentPoly] = []
    K: list[LaurentPoly] = []
    G: list[LaurentPoly] = []
    # projected rows, cached as each order is finalized
    Lnm: list[LaurentPoly] = []   # Phi_{N,M} L
    Kmn: list[LaurentPoly] = []   # Phi_{M,N} K
    Lnn: list[LaurentPoly] = []   # Phi_{N,N} L
    Kmm: list[LaurentPoly] = []   # Phi_{M,M} K
    S: list[LaurentPoly] = []     # Lnm + Kmn

    for order in range(n_max + 1):
        if order == 0:
            lrow = krow = grow = one
        else:
            lrow = q * L[order - 1]
            krow = q * K[order - 1]
            grow = q * G[order - 1]
            for i in range(order - 1):
                j = order - 2 - i
                if not L[i].is_zero() and not S[j].is_zero():
                    lrow = lrow + L[i] * S[j]
                if not K[i].is_zero() and not S[j].is_zero():
                    krow = krow + K[i] * S[j]
                if not G[i].is_zero() and not S[j].is_zero():
                    grow = grow + G[i] * S[j]
                if not Kmn[i].is_zero() and not Lnn[j].is_zero():
                    lrow = lrow - Kmn[i] * Lnn[j]
                if not Lnm[i].is_zero() and not Kmm[j].is_zero():
                    krow = krow - Lnm[i] * Kmm[j]
        if trim is not None:
            lrow = _trim_row(lrow, trim)
            krow = _trim_row(krow, trim)
            grow = _trim_row(grow, trim)
        L.append(lrow)
        K.append(krow)
        G.append(grow)
        Lnm.append(lrow.phi(n, m))
        Kmn.append(krow.phi(m, n))
        Lnn.append(lrow.phi(n, n))
        Kmm.append(krow.phi(m, m))
        S.append(Lnm[-1] + Kmn[-1])

    return (QSeries(n_max, L), QSeries(n_max, K), QSeries(n_max, G))


def constant_term(series: QSeries) -> list[int]:
    return series.constant_term()


# ---------------------------------------------------------------------------
# algebraic equations for BS(N, N), N = 2, 3, 4

def _zq_series(n_max: int, terms: dict[int, LaurentPoly]) -> QSeries:
    rows = [LaurentPoly() for _ in range(n_max + 1)]
    for zpow, poly in terms.items():
        if zpow <= n_max:
            rows[zpow] = rows[zpow] + poly
    return QSeries(n_max, rows)


def _nn_polynomial_coefficients(n: int, n_max: int) -> list[QSeries]:
    """Coefficients of the algebraic equation satisfied by G for BS(N, N)."""
    Q = Q_PLUS_QINV
    one = LaurentPoly.const(1)

    def zq(terms):
        return _zq_series(n_max, terms)

    if n == 2:
        c0 = zq({0: one})
        c1 = zq({1: Q.scale(3)})
        c2 = zq({0: one.scale(-1), 2: one.scale(4) + Q * Q})
        # -zQ (1 - zQ - 2z)(1 - zQ + 2z)
        f1 = zq({0: one, 1: -(Q + one.scale(2))})
        f2 = zq({0: one, 1: -(Q - one.scale(2))})
        c3 = zq({1: Q.scale(-1)}) * f1 * f2
        return [c0, c1, c2, c3]
    if n == 3:
        c0 = zq({0: one})
        c1 = zq({1: Q.scale(4)})
        c2 = zq({0: one.scale(-1), 2: (Q * Q).scale(6) - one})
        # 2z (Qz + 1)(Q^2 z - Q + 2z)
        f1 = zq({0: one, 1: Q})
        f2 = zq({0: -Q, 1: Q * Q + one.scale(2)})
        c3 = zq({1: one.scale(2)}) * f1 * f2
        # z^2 (1 - Q)(1 + Q)(Qz + 2z - 1)(Qz - 2z - 1)
        g0 = LaurentPoly.const(1) - Q * Q
        f3 = zq({0: -one, 1: Q + one.scale(2)})
        f4 = zq({0: -one, 1: Q - one.scale(2)})
        c4 = zq({2: g0}) * f3 * f4
        return [c0, c1, c2, c3, c4]
    if n == 4:
        c0 = zq({0: one})
        c1 = zq({1: Q.scale(5)})
        c2 = zq({0: one.scale(-1), 2: (Q * Q).scale(10) - one.scale(2)})
        # z (10 Q^3 z^2 - 6 Q z^2 - 3Q + 4z)
        c3 = zq({1: Q.scale(-3), 2: one.scale(4),
                 3: (Q * Q * Q).scale(10) - Q.scale(6)})
        # z^2 (3 Q^4 z^2 + 2 Q^2 z^2 - 3 Q^2 + 8 Q z - 8 z^2 + 2)
        q2 = Q * Q
        c4 = zq({2: one.scale(2) - q2.scale(3),
                 3: Q.scale(8),
                 4: (q2 * q2).scale(3) + q2.scale(2) - one.scale(8)})
        # -z^3 Q (Q^2 - 2)(Qz + 2z - 1)(Qz - 2z - 1)
        f1 = zq({0: -one, 1: Q + one.scale(2)})
        f2 = zq({0: -one, 1: Q - one.scale(2)})
        c5 = zq({3: (Q * (q2 - one.scale(2))).scale(-1)}) * f1 * f2
        return [c0, c1, c2, c3, c4, c5]
    raise ValueError("explicit polynomial known only for N = 2, 3, 4")


def verify_bs_nn_polynomial(n: int, g: QSeries) -> bool:
    """Check that G for BS(N, N) satisfies its printed algebraic equation."""
    coeffs = _nn_polynomial_coefficients(n, g.n_max)
    acc = coeffs[0]
    power = QSeries.one(g.n_max)
    for c in coeffs[1:]:
        power = power * g
        acc = acc + c * power
    return all(row.is_zero() for row in acc.rows)


# ---------------------------------------------------------------------------
# continued fraction for BS(1, M)

def _qseries_inv_unit(b: QSeries) -> QSeries:
    """Inverse of a series with constant row 1."""
    if b.rows[0] != LaurentPoly.const(1):
        raise ValueError("constant row must be 1")
    n = b.n_max
    out = [LaurentPoly.const(1)] + [LaurentPoly() for _ in range(n)]
    for k in range(1, n + 1):
        acc = LaurentPoly()
        for i in range(1, k + 1):
            if not b.rows[i].is_zero() and not out[k - i].is_zero():
                acc = acc + b.rows[i] * out[k - i]
        out[k] = -acc
    return QSeries(n, out)


def bs1m_continued_fraction_L(m: int, n_max: int,
                              depth: Optional[int] = None) -> QSeries:
    """Evaluate the nested-fraction form of the L series for BS(1, M).

    Level j carries the weight z(q^(M^j) + q^(-M^j)); it first contributes
    at order z^(2j), so depth n_max // 2 is exact.  Passing an explicit
    smaller depth gives the truncated fraction (depth 0 is the geometric
    series in z(q + 1/q)).
    """
    if m < 1:
        raise ValueError("M must be >= 1")
    if depth is None:
        depth = n_max // 2
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    one = LaurentPoly.const(1)

    def level_weight(j):
        e = m ** j
        return LaurentPoly.from_dict({e: 1, -e: 1})

    t = _qseries_inv_unit(_zq_series(n_max, {0: one, 1: -level_weight(depth)}))
    for j in range(depth - 1, -1, -1):
        denom = _zq_series(n_max, {0: one, 1: -level_weight(j)})
        denom = denom - t.scale_z(2, one)
        t = _qseries_inv_unit(denom)
    return t


# ---------------------------------------------------------------------------
# closed forms

def free_group_series(k: int, n_max: int) -> list[int]:
    """Counts of all words of length n equal to the identity in the free
    group on k generators: 2(2k-1) / ((2k-2) + 2k sqrt(1 - 4(2k-1) z^2))."""
    if k < 2:
        raise ValueError("need at least two generators")
    s = rat_sqrt(RatSeries.from_terms(n_max, {0: 1, 2: -4 * (2 * k - 1)}))
    denom = RatSeries.from_terms(n_max, {0: 2 * k - 2}) + s * RatSeries.from_terms(n_max, {0: 2 * k})
    f = rat_div(RatSeries.from_terms(n_max, {0: 2 * (2 * k - 1)}), denom)
    return integer_coefficients(f)


def bs11_reduced_series(n_max: int) -> list[int]:
    """Freely reduced trivial-word counts for Z^2, obtained from the
    all-words counts binom(n, n/2)^2 by the reduced-word substitution."""
    from .qseries import substitute_reduced
    f = RatSeries.from_terms(
        n_max, {n: math.comb(n, n // 2) ** 2 for n in range(0, n_max + 1, 2)})
    return integer_coefficients(substitute_reduced(f, 2))


def free_group_L0(n_max: int) -> RatSeries:
    """The limit series (1 - sqrt(1 - 12 z^2)) / (6 z^2) for k = 2."""
    s = rat_sqrt(RatSeries.from_terms(n_max + 2, {0: 1, 2: -12}))
    num = RatSeries.from_terms(n_max + 2, {0: 1}) - s
    l0 = rat_div(num, RatSeries.from_terms(n_max + 2, {2: 6}))
    return RatSeries(n_max, l0.c[:n_max + 1])


def _poly(n_max: int, coeffs: Sequence[int]) -> RatSeries:
    return RatSeries.from_terms(n_max, dict(enumerate(coeffs)))


def kouksov_series(which: int, n_max: int) -> list[int]:
    """Reduced trivial-word counts for the free products Z2*Z3, Z3*Z3 and
    Z2*Z2*Z2, expanded from their closed-form generating functions."""
    n = n_max
    if which == 1:
        p = _poly(n, [0, -1, 1, -8, 3, -9])
        root = rat_sqrt(_poly(n, [1, -2, 1, -6, -8, -18, 9, -54, 81]))
        num = _poly(n, [1, 1]) * (p + _poly(n, [2, -1, 6]) * root)
        den = (_poly(n, [2]) * _poly(n, [1, -3]) * _poly(n, [1, 0, 3])
               * _poly(n, [1, 3, 3]) * _poly(n, [1, -1, 3]))
        c = rat_div(num, den)
    elif which == 2:
        root = rat_sqrt(_poly(n, [1, -2, -1, -6, 9]))
        num = _poly(n, [1, 1]) * (_poly(n, [0, -1]) + root)
        den = _poly(n, [1, -3]) * _poly(n, [1, 2, 3])
        c = rat_div(num, den)
    elif which == 3:
        root = rat_sqrt(_poly(n, [1, 0, -22, 0, 25]))
        num = _poly(n, [-1, 0, -5]) + _poly(n, [3]) * root
        den = _poly(n, [2]) * _poly(n, [1, 0, -25])
        c = rat_div(num, den)
    else:
        raise ValueError("which must be 1, 2 or 3")
    coeffs = integer_coefficients(c)
    for i, v in enumerate(coeffs):
        if v < 0:
            raise ValueError(f"negative coefficient at order {i}: transcription bug")
    return coeffs


# ---------------------------------------------------------------------------
# growth rate estimation

@dataclass
class GrowthEstimate:
    mu: float
    mu_uncertainty: float
    lam: float
    correction_exponent: float
    amplitude: Optional[float]
    terms_used: int
    method: str = "ratio-richardson"


def _richardson(xs: Sequence[float], values: Sequence[float], p: int) -> list[float]:
    """Eliminate an assumed x^-p error term from successive estimates."""
    out = []
    for i in range(1, len(values)):
        a, b = xs[i - 1], xs[i]
        wa = a ** p
        wb = b ** p
        out.append((wb * values[i] - wa * values[i - 1]) / (wb - wa))
    return out


def growth_rate_estimate(coeffs: Sequence[int], correction_exponent: float = -2.0,
                         k: int = 2) -> GrowthEstimate:
    """Estimate the exponential growth rate of a coefficient sequence.

    Assumes g_n ~ A mu^n n^c on the even subsequence; successive ratios
    corrected by the power law converge as 1/n^2 and are Richardson
    extrapolated.
    """
    c = correction_exponent
    data = [(i, v) for i, v in enumerate(coeffs)
            if i > 0 and i % 2 == 0 and v > 0]
    if len(data) < 20:
        raise ValueError("need at least 20 nonzero even-order coefficients")
    ns, ratios = [], []
    for (n0, g0), (n1, g1) in zip(data, data[1:]):
        if n1 - n0 != 2:
            raise ValueError("nonzero coefficients not equally spaced")
        r = (g1 / g0) * (n0 / n1) ** c
        if r <= 0:
            raise ValueError("non-monotone ratio sequence")
        ns.append(n1)
        ratios.append(math.sqrt(r))
    xs, est = ns, ratios
    for p in (2, 3, 4):
        if len(est) < 3:
            break
        est = _richardson(xs, est, p)
        xs = xs[1:]
    tail = est[-5:]
    mu = tail[-1]
    spread = max(tail) - min(tail)
    lam = mu_to_lambda(mu, k)
    # best-effort amplitude from the largest coefficient
    n_top, g_top = data[-1]
    try:
        amplitude = math.exp(math.log(g_top) - n_top * math.log(mu)
                             - c * math.log(n_top))
    except (ValueError, OverflowError):
        amplitude = None
    return GrowthEstimate(mu=mu, mu_uncertainty=max(spread, 1e-12), lam=lam,
                          correction_exponent=c, amplitude=amplitude,
                          terms_used=len(data))


def mu_to_lambda(mu: float, k: int = 2) -> float:
    """Convert the all-words growth rate to the cogrowth: the larger root
    of lambda + (2k-1)/lambda = mu."""
    disc = mu * mu - 4 * (2 * k - 1)
    if disc < -1e-12:
        raise ValueError("mu below 2 sqrt(2k-1)")
    return (mu + math.sqrt(max(disc, 0.0))) / 2
