"""Exact series arithmetic.

Three layers:

* ``LaurentPoly`` -- Laurent polynomials in q with arbitrary-precision
  integer coefficients, stored densely over a contiguous exponent window.
* ``QSeries`` -- truncated power series in z whose coefficients are
  Laurent polynomials (the carrier for the word-counting series).
* ``RatSeries`` -- truncated series with exact rational coefficients,
  supporting division, square roots and composition (for closed forms).

Large convolutions are done by Kronecker substitution (pack coefficients
into one big integer, multiply, unpack), delegating to GMP via gmpy2 when
available so that the hot loop runs in quasi-linear time.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int

# below this many coefficient pairs, schoolbook convolution beats packing
_KRONECKER_CUTOFF = 2048


def _kron_convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Convolution of two nonnegative coefficient lists via big-int packing."""
    amax = max(a)
    bmax = max(b)
    if amax == 0 or bmax == 0:
        return [0] * (len(a) + len(b) - 1)
    width = (amax.bit_length() + bmax.bit_length()
             + min(len(a), len(b)).bit_length() + 7) // 8 * 8 + 8
    nbytes = width // 8
    abuf = bytearray(len(a) * nbytes)
    for i, c in enumerate(a):
        if c:
            abuf[i * nbytes:(i + 1) * nbytes] = c.to_bytes(nbytes, "little")
    bbuf = bytearray(len(b) * nbytes)
    for i, c in enumerate(b):
        if c:
            bbuf[i * nbytes:(i + 1) * nbytes] = c.to_bytes(nbytes, "little")
    prod = int(_mpz(int.from_bytes(abuf, "little"))
               * _mpz(int.from_bytes(bbuf, "little")))
    out_len = len(a) + len(b) - 1
    pbuf = prod.to_bytes(out_len * nbytes, "little")
    return [int.from_bytes(pbuf[i * nbytes:(i + 1) * nbytes], "little")
            for i in range(out_len)]


def _schoolbook_convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
    return out


class LaurentPoly:
    """Laurent polynomial in q; dense storage over [kmin, kmin + len - 1]."""

    __slots__ = ("kmin", "c")

    def __init__(self, kmin: int = 0, coeffs: Sequence[int] = ()):
        lo = 0
        hi = len(coeffs)
        while hi > lo and coeffs[hi - 1] == 0:
            hi -= 1
        while lo < hi and coeffs[lo] == 0:
            lo += 1
        self.kmin = kmin + lo
        self.c = list(coeffs[lo:hi])
        if not self.c:
            self.kmin = 0

    @classmethod
    def from_dict(cls, d: dict) -> "LaurentPoly":
        if not d:
            return cls()
        kmin = min(d)
        kmax = max(d)
        coeffs = [0] * (kmax - kmin + 1)
        for k, v in d.items():
            coeffs[k - kmin] = v
        return cls(kmin, coeffs)

    @classmethod
    def const(cls, value: int) -> "LaurentPoly":
        return cls(0, [value])

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __getitem__(self, k: int) -> int:
        i = k - self.kmin
        if 0 <= i < len(self.c):
            return self.c[i]
        return 0

    def items(self):
        for i, v in enumerate(self.c):
            if v:
                yield self.kmin + i, v

    def support(self):
        return [k for k, _ in self.items()]

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.kmin == other.kmin and self.c == other.c

    def __hash__(self):
        return hash((self.kmin, tuple(self.c)))

    def __repr__(self):
        terms = [f"{v}*q^{k}" for k, v in self.items()]
        return " + ".join(terms) if terms else "0"

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.c:
            return other
        if not other.c:
            return self
        kmin = min(self.kmin, other.kmin)
        kmax = max(self.kmin + len(self.c), other.kmin + len(other.c))
        out = [0] * (kmax - kmin)
        for i, v in enumerate(self.c):
            out[self.kmin - kmin + i] += v
        for i, v in enumerate(other.c):
            out[other.kmin - kmin + i] += v
        return LaurentPoly(kmin, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.kmin, [-v for v in self.c])

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.c or not other.c:
            return LaurentPoly()
        kmin = self.kmin + other.kmin
        nonneg = all(v >= 0 for v in self.c) and all(v >= 0 for v in other.c)
        if nonneg and len(self.c) * len(other.c) >= _KRONECKER_CUTOFF:
            return LaurentPoly(kmin, _kron_convolve(self.c, other.c))
        return LaurentPoly(kmin, _schoolbook_convolve(self.c, other.c))

    def scale(self, factor: int) -> "LaurentPoly":
        return LaurentPoly(self.kmin, [factor * v for v in self.c])

    def constant_coefficient(self) -> int:
        return self[0]

    def coefficient_sum(self) -> int:
        return sum(self.c)

    def is_symmetric(self) -> bool:
        return all(self[k] == self[-k] for k, _ in self.items())

    def phi(self, d: int, e: int) -> "LaurentPoly":
        """Keep exponents divisible by d, rescaling q^k to q^(k/d*e)."""
        if d < 1 or e < 1:
            raise ValueError("phi requires d, e >= 1")
        if d == 1 and e == 1:
            return self
        return LaurentPoly.from_dict(
            {(k // d) * e: v for k, v in self.items() if k % d == 0})


def laurent_mul(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    return p * r


def phi_map(p: LaurentPoly, d: int, e: int) -> LaurentPoly:
    return p.phi(d, e)


Q_PLUS_QINV = LaurentPoly(-1, [1, 0, 1])
ONE = LaurentPoly.const(1)


class QSeries:
    """Power series in z truncated at order n_max, Laurent coefficients."""

    __slots__ = ("n_max", "rows")

    def __init__(self, n_max: int, rows: Sequence[LaurentPoly] | None = None):
        self.n_max = n_max
        if rows is None:
            self.rows = [LaurentPoly() for _ in range(n_max + 1)]
        else:
            if len(rows) != n_max + 1:
                raise ValueError("rows must cover orders 0..n_max")
            self.rows = list(rows)

    @classmethod
    def one(cls, n_max: int) -> "QSeries":
        s = cls(n_max)
        s.rows[0] = ONE
        return s

    def _check(self, other: "QSeries"):
        if self.n_max != other.n_max:
            raise ValueError("truncation order mismatch")

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.n_max == other.n_max and self.rows == other.rows

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        return QSeries(self.n_max,
                       [a + b for a, b in zip(self.rows, other.rows)])

    def __sub__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        return QSeries(self.n_max,
                       [a - b for a, b in zip(self.rows, other.rows)])

    def __mul__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        out = [LaurentPoly() for _ in range(self.n_max + 1)]
        for i, a in enumerate(self.rows):
            if a.is_zero():
                continue
            for j in range(self.n_max + 1 - i):
                b = other.rows[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return QSeries(self.n_max, out)

    def scale_z(self, j: int, p: LaurentPoly) -> "QSeries":
        """Multiply by z^j * p."""
        out = [LaurentPoly() for _ in range(self.n_max + 1)]
        for i, a in enumerate(self.rows):
            if i + j <= self.n_max and not a.is_zero():
                out[i + j] = a * p
        return QSeries(self.n_max, out)

    def constant_term(self) -> list[int]:
        return [row.constant_coefficient() for row in self.rows]

    def at_q1(self) -> list[int]:
        return [row.coefficient_sum() for row in self.rows]


def qseries_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def qseries_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def qseries_scale_z(a: QSeries, j: int, p: LaurentPoly) -> QSeries:
    return a.scale_z(j, p)


# ---------------------------------------------------------------------------
# rational-coefficient series

class RatSeries:
    """Truncated power series with exact Fraction coefficients."""

    __slots__ = ("n_max", "c")

    def __init__(self, n_max: int, coeffs: Iterable = ()):
        self.n_max = n_max
        self.c = [Fraction(v) for v in coeffs]
        if len(self.c) > n_max + 1:
            raise ValueError("too many coefficients")
        self.c += [Fraction(0)] * (n_max + 1 - len(self.c))

    @classmethod
    def from_terms(cls, n_max: int, terms: dict) -> "RatSeries":
        s = cls(n_max)
        for k, v in terms.items():
            if k <= n_max:
                s.c[k] = Fraction(v)
        return s

    def __eq__(self, other):
        if not isinstance(other, RatSeries):
            return NotImplemented
        return self.n_max == other.n_max and self.c == other.c

    def _check(self, other: "RatSeries"):
        if self.n_max != other.n_max:
            raise ValueError("truncation order mismatch")

    def __add__(self, other: "RatSeries") -> "RatSeries":
        self._check(other)
        return RatSeries(self.n_max, [a + b for a, b in zip(self.c, other.c)])

    def __sub__(self, other: "RatSeries") -> "RatSeries":
        self._check(other)
        return RatSeries(self.n_max, [a - b for a, b in zip(self.c, other.c)])

    def __neg__(self) -> "RatSeries":
        return RatSeries(self.n_max, [-a for a in self.c])

    def __mul__(self, other: "RatSeries") -> "RatSeries":
        self._check(other)
        out = [Fraction(0)] * (self.n_max + 1)
        for i, a in enumerate(self.c):
            if a:
                for j in range(self.n_max + 1 - i):
                    b = other.c[j]
                    if b:
                        out[i + j] += a * b
        return RatSeries(self.n_max, out)

    def valuation(self) -> int:
        for i, a in enumerate(self.c):
            if a:
                return i
        return self.n_max + 1


def rat_div(a: RatSeries, b: RatSeries) -> RatSeries:
    """Exact series division; the valuation of b must not exceed that of a."""
    a._check(b)
    vb = b.valuation()
    if vb > b.n_max:
        raise ZeroDivisionError("division by zero series")
    va = a.valuation()
    if va < vb:
        raise ValueError("valuation of numerator below that of denominator")
    n = a.n_max
    # shift out the common z^vb factor, then invert a unit
    num = a.c[vb:] + [Fraction(0)] * vb
    den = b.c[vb:] + [Fraction(0)] * vb
    out = [Fraction(0)] * (n + 1)
    lead = den[0]
    for k in range(n + 1):
        acc = num[k]
        for i in range(1, k + 1):
            if den[i]:
                acc -= den[i] * out[k - i]
        out[k] = acc / lead
    return RatSeries(n, out)


def _rational_sqrt(x: Fraction) -> Fraction:
    if x < 0:
        raise ValueError("negative constant term")
    p, q = x.numerator, x.denominator
    sp, sq = isqrt(p), isqrt(q)
    if sp * sp != p or sq * sq != q:
        raise ValueError("constant term is not a perfect rational square")
    return Fraction(sp, sq)


def rat_sqrt(a: RatSeries) -> RatSeries:
    """Series square root; the constant term must be a rational square."""
    if not a.c[0]:
        raise ValueError("zero constant term")
    n = a.n_max
    out = [Fraction(0)] * (n + 1)
    out[0] = _rational_sqrt(a.c[0])
    inv2y0 = 1 / (2 * out[0])
    for k in range(1, n + 1):
        acc = a.c[k]
        for i in range(1, k):
            if out[i] and out[k - i]:
                acc -= out[i] * out[k - i]
        out[k] = acc * inv2y0
    return RatSeries(n, out)


def rat_compose(f: RatSeries, g: RatSeries) -> RatSeries:
    """f(g(t)) by Horner; g must have zero constant term."""
    f._check(g)
    if g.c[0]:
        raise ValueError("inner series must have zero constant term")
    n = f.n_max
    out = RatSeries(n, [f.c[n]])
    for k in range(n - 1, -1, -1):
        out = out * g
        out.c[0] += f.c[k]
    return out


def substitute_reduced(f: RatSeries, k: int) -> RatSeries:
    """Transform an all-words trivial-word series into the reduced-word one.

    h(t) = f(t / (1 + (2k-1) t^2)) * (1 - t^2) / (1 + (2k-1) t^2)
    for a group on k generators.
    """
    if k < 1:
        raise ValueError("need at least one generator")
    n = f.n_max
    denom = RatSeries.from_terms(n, {0: 1, 2: 2 * k - 1})
    inner = rat_div(RatSeries.from_terms(n, {1: 1}), denom)
    factor = rat_div(RatSeries.from_terms(n, {0: 1, 2: -1}), denom)
    return rat_compose(f, inner) * factor


def integer_coefficients(s: RatSeries) -> list[int]:
    """Coefficients as ints; raises if any is not an integer."""
    out = []
    for i, a in enumerate(s.c):
        if a.denominator != 1:
            raise ValueError(f"coefficient of order {i} is not an integer: {a}")
        out.append(a.numerator)
    return out


def write_coefficients(path, coeffs: Sequence[int], header: str | None = None):
    """One ``n <tab> value`` line per coefficient.  Accepts a path or an
    open text file."""
    if hasattr(path, "write"):
        _write_coefficient_lines(path, coeffs, header)
    else:
        with open(path, "w") as fh:
            _write_coefficient_lines(fh, coeffs, header)


def _write_coefficient_lines(fh, coeffs, header):
    if header:
        fh.write(f"# {header}\n")
    for n, v in enumerate(coeffs):
        fh.write(f"{n}\t{v}\n")


def read_coefficients(path) -> list[int]:
    if hasattr(path, "read"):
        return _read_coefficient_lines(path)
    with open(path) as fh:
        return _read_coefficient_lines(fh)


def _read_coefficient_lines(fh) -> list[int]:
    out: list[int] = []
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        n, v = line.split("\t")
        n = int(n)
        while len(out) <= n:
            out.append(0)
        out[n] = int(v)
    return out
