"""Univariate rational functions over exact rationals.

Carrier for smoothed probability masses: each mass is a ratio of
polynomials in the smoothing parameter, reduced by polynomial gcd with a
monic denominator, so equality is structural and every arithmetic
operation is exact.  The only analytic operation ever needed is the
one-sided limit at zero, which for a function bounded near 0+ is the
ratio of the lowest-order nonzero coefficients.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["RationalFn", "limit_at_zero"]

_ZERO = ()
_ONE = (Fraction(1),)


def _trim(coeffs) -> tuple:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _add(a, b):
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                 for i in range(n))


def _neg(a):
    return tuple(-c for c in a)


def _mul(a, b):
    if not a or not b:
        return _ZERO
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _trim(out)


def _divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    inv = 1 / b[-1]
    while len(r) >= len(b) and _trim(r):
        r = list(_trim(r))
        if len(r) < len(b):
            break
        k = len(r) - len(b)
        c = r[-1] * inv
        q[k] = c
        for i, cb in enumerate(b):
            r[k + i] -= c * cb
    return _trim(q), _trim(r)


def _gcd(a, b):
    while b:
        a, b = b, _divmod(a, b)[1]
    if not a:
        return _ZERO
    inv = 1 / a[-1]
    return tuple(c * inv for c in a)


def _order(p) -> int:
    """Order of vanishing at zero (index of the first nonzero coefficient)."""
    for i, c in enumerate(p):
        if c != 0:
            return i
    raise ValueError("zero polynomial has no vanishing order")


class RationalFn:
    """Reduced ratio of univariate polynomials with Fraction coefficients."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=_ONE):
        num = _trim(Fraction(c) for c in num)
        den = _trim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = _ZERO, _ONE
            return
        g = _gcd(num, den)
        num = _divmod(num, g)[0]
        den = _divmod(den, g)[0]
        inv = 1 / den[-1]
        self.num = tuple(c * inv for c in num)
        self.den = tuple(c * inv for c in den)

    @classmethod
    def const(cls, value) -> "RationalFn":
        return cls((Fraction(value),))

    @classmethod
    def variable(cls) -> "RationalFn":
        return cls((Fraction(0), Fraction(1)))

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFn.const(other)
        return NotImplemented

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFn(_add(_mul(self.num, other.den), _mul(other.num, self.den)),
                          _mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(_neg(self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFn(_mul(self.num, other.num), _mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFn(_mul(self.num, other.den), _mul(self.den, other.num))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        num = sum((c * x ** i for i, c in enumerate(self.num)), Fraction(0))
        den = sum((c * x ** i for i, c in enumerate(self.den)), Fraction(0))
        return num / den

    def positive_near_zero(self) -> bool:
        """Sign of the function just right of zero."""
        if not self.num:
            return False
        return (self.num[_order(self.num)] * self.den[_order(self.den)]) > 0

    def __repr__(self):
        def poly(p):
            if not p:
                return "0"
            parts = []
            for i, c in enumerate(p):
                if c == 0:
                    continue
                if i == 0:
                    parts.append(str(c))
                elif i == 1:
                    parts.append(f"{c}*e")
                else:
                    parts.append(f"{c}*e^{i}")
            return " + ".join(parts)
        return f"({poly(self.num)})/({poly(self.den)})"


def limit_at_zero(r: RationalFn) -> Fraction:
    """One-sided limit at 0+ of a function bounded near zero.

    The numerator must not vanish to lower order than the denominator;
    that would mean the function is unbounded, which a probability mass
    never is.
    """
    if not r.num:
        return Fraction(0)
    vn = _order(r.num)
    vd = _order(r.den)
    if vn > vd:
        return Fraction(0)
    if vn < vd:
        raise ValueError("unbounded at zero: numerator vanishes to lower order")
    return r.num[vn] / r.den[vd]
