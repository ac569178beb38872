"""Exact arithmetic over the Gaussian rationals Q(i).

Every quantity in this library is a ``Scalar``: a complex number
``re + im*i`` whose real and imaginary parts are exact rationals with
arbitrary-precision integer numerator and denominator.  There is no
floating point anywhere, and no square roots are ever taken of a
Scalar; half-integer exponents of quadratic forms are tracked
symbolically by the callers that need them.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction

Rational = Fraction

__all__ = ["Rational", "Scalar", "ZERO", "ONE", "I", "as_scalar"]


class Scalar:
    """A Gaussian rational number ``re + im*i``, immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- algebra -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.re and not other.im:
            return self
        if not self.re and not self.im:
            return other
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.im and not other.im:
            return Scalar(self.re * other.re)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_scalar(other)
        if not other.re and not other.im:
            raise ZeroDivisionError("division of Scalar by zero")
        if not self.re and not self.im:
            return ZERO
        if not other.im:
            return Scalar(self.re / other.re, self.im / other.re)
        n = other.re * other.re + other.im * other.im
        return Scalar(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return as_scalar(other) / self

    def conj(self):
        return Scalar(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|s|^2 = re^2 + im^2, an exact nonnegative rational."""
        return self.re * self.re + self.im * self.im

    # -- predicates / ordering ----------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.re == other and not self.im
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        """Total order key (real part, then imaginary part)."""
        return (self.re, self.im)

    # -- text form -----------------------------------------------------

    def __str__(self):
        if not self.im:
            return str(self.re)
        if self.im == 1:
            istr = "i"
        elif self.im == -1:
            istr = "-i"
        else:
            istr = f"{self.im}*i"
        if not self.re:
            return istr
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{istr}"

    def __repr__(self):
        return f"Scalar({self})"

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``a/b+c/d*i`` style text; unreduced fractions are reduced."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty scalar literal")
        re_part = Fraction(0)
        im_part = Fraction(0)
        for tok in _TOKEN.findall(s):
            sign = -1 if tok.startswith("-") else 1
            body = tok.lstrip("+-")
            if body in ("i", "1i"):
                im_part += sign
            elif body.endswith("i"):
                body = body[:-1]
                if body.endswith("*"):
                    body = body[:-1]
                im_part += sign * Fraction(body)
            else:
                re_part += sign * Fraction(body)
        return cls(re_part, im_part)


_TOKEN = _re.compile(r"[+-]?[^+-]+")


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    return None


def as_scalar(x) -> Scalar:
    """Coerce an int, Fraction, or string into a Scalar."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    if isinstance(x, str):
        return Scalar.parse(x)
    raise TypeError(f"cannot interpret {x!r} as a Scalar")


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
