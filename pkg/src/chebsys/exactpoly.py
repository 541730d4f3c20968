"""Dense univariate polynomials over exact rationals.

A polynomial is a tuple of rational coefficients indexed by power, with
trailing zeros stripped, so the zero polynomial holds an empty tuple and
reports degree -1.  Every operation except complex evaluation is exact;
complex evaluation rounds the coefficients to an explicit working precision
(in bits) and is the single bridge between the exact and numeric halves of
the package.

All values are immutable and the functions are pure, so everything here is
safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import mpmath

from .rationals import Rational, ZERO, as_rational, rat_to_mpf

DEFAULT_PRECISION = 53


def _normalized(coeffs: Iterable) -> tuple:
    out = [as_rational(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return tuple(out)


@dataclass(frozen=True, init=False)
class Poly:
    """Dense polynomial; ``coeffs[i]`` is the coefficient of ``x**i``."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _normalized(coeffs))

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "Poly":
        if power < 0:
            raise ValueError("monomial power must be nonnegative")
        return cls((0,) * power + (coeff,))

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 encodes the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Rational:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    def __radd__(self, other) -> "Poly":
        if other == 0:  # lets sum() work over polynomials
            return self
        return NotImplemented

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly(())
            out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return Poly(out)
        scalar = as_rational(other)
        return Poly(tuple(c * scalar for c in self.coeffs))

    def __rmul__(self, other):
        return self.__mul__(other)

    def shift(self, k: int) -> "Poly":
        """Multiply by x**k."""
        if k < 0:
            raise ValueError("negative shift")
        if not self.coeffs:
            return self
        return Poly((ZERO,) * k + self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def eval_exact(self, x) -> Rational:
        """Exact Horner evaluation at a rational point."""
        x = as_rational(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_complex(self, z, precision: int = DEFAULT_PRECISION):
        """Horner evaluation at a complex point.

        Coefficients are rounded to ``precision`` bits; the result is an
        mpmath complex carrying that working precision.
        """
        if precision < 53:
            raise ValueError("precision must be at least 53 bits")
        with mpmath.workprec(precision):
            zz = mpmath.mpc(z)
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * zz + rat_to_mpf(c)
            return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"({c})*x")
            else:
                parts.append(f"({c})*x^{i}")
        return " + ".join(parts)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_eval_exact(p: Poly, x) -> Rational:
    return p.eval_exact(x)


def poly_eval_complex(p: Poly, z, precision: int = DEFAULT_PRECISION):
    return p.eval_complex(z, precision)


def compose_star(h: Poly, m: int, k: int, ell: int) -> Poly:
    """Expand ``(-1)**k * z**ell * h(z**(m+1))`` as an exact polynomial.

    The result is supported on exponents congruent to ``ell`` modulo ``m+1``
    and has degree ``ell + (m+1)*deg(h)`` when ``h`` is nonzero.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 <= k <= m - 1:
        raise ValueError("k must lie in 0..m-1")
    if not 0 <= ell <= m:
        raise ValueError("ell must lie in 0..m")
    if h.is_zero:
        return Poly(())
    sign = -1 if k % 2 else 1
    out = [ZERO] * (ell + (m + 1) * h.degree + 1)
    for i, c in enumerate(h.coeffs):
        if c:
            out[ell + (m + 1) * i] = sign * c
    return Poly(out)


def _poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    quo = [ZERO] * max(0, a.degree - b.degree + 1)
    rem = list(a.coeffs)
    lead = b.leading
    for i in range(a.degree - b.degree, -1, -1):
        factor = rem[i + b.degree] / lead
        if not factor:
            continue
        quo[i] = factor
        for j, c in enumerate(b.coeffs):
            rem[i + j] = rem[i + j] - factor * c
    return Poly(quo), Poly(rem)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd via the Euclidean algorithm (exact)."""
    a, b = p, q
    while not b.is_zero:
        a, b = b, _poly_divmod(a, b)[1]
    if a.is_zero:
        return a
    return a * (as_rational(1) / a.leading)
