"""Exact complex-rational scalars.

Every amplitude and inner product in this package is a Gaussian rational:
a complex number whose real and imaginary parts are fractions with
arbitrary-precision integer terms.  All zero/nonzero decisions are exact
structural comparisons; there is no epsilon anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, str, Fraction]


class ScalarParseError(ValueError):
    """Scalar text that does not match the grammar, with the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class ComplexRational:
    """A complex number with exact rational real and imaginary parts.

    Immutable; safe to share between concurrent workers.  Fraction keeps
    both parts canonical (positive denominator, reduced), so equality is
    plain structural equality.
    """

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: "ComplexRational") -> "ComplexRational":
        return ComplexRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexRational") -> "ComplexRational":
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, other: "ComplexRational") -> "ComplexRational":
        return ComplexRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __pow__(self, exponent: int) -> "ComplexRational":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only non-negative integer exponents are supported")
        result = ONE
        for _ in range(exponent):
            result = result * self
        return result

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"ComplexRational({format_scalar(self)!r})"


ZERO = ComplexRational(0)
ONE = ComplexRational(1)
I = ComplexRational(0, 1)


def scalar(re: RationalLike, im: RationalLike = 0) -> ComplexRational:
    """Convenience constructor accepting ints, Fractions or rational strings."""
    return ComplexRational(Fraction(re), Fraction(im))


def format_scalar(z: ComplexRational) -> str:
    """Render a scalar in the canonical text form, e.g. "3/4+1/2i" or "-i".

    parse_scalar(format_scalar(z)) == z for every value.
    """
    if z.im == 0:
        return str(z.re)
    if z.re == 0:
        return _imag_part(z.im, with_sign=True)
    sep = "+" if z.im > 0 else "-"
    return f"{z.re}{sep}{_imag_part(abs(z.im), with_sign=False)}"


def _imag_part(f: Fraction, with_sign: bool) -> str:
    mag = abs(f)
    body = "i" if mag == 1 else f"{mag}i"
    if with_sign and f < 0:
        return "-" + body
    return body


def parse_scalar(text: str) -> ComplexRational:
    """Parse scalar text such as "2", "-1", "3/4+1/2i", "2/3-1/5i" or "-i".

    Grammar::

        scalar := real | imag | real imag
        real   := [sign] rat
        imag   := sign? rat? 'i'
        rat    := int ('/' posint)?

    When both parts are present the imaginary part must carry an explicit
    sign.  Malformed text raises ScalarParseError naming the position.
    """
    n = len(text)
    pos = 0

    def read_sign() -> int:
        nonlocal pos
        if pos < n and text[pos] in "+-":
            pos += 1
            return -1 if text[pos - 1] == "-" else 1
        return 1

    def read_uint(what: str) -> int:
        nonlocal pos
        start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise ScalarParseError(f"expected {what}", start)
        return int(text[start:pos])

    def read_rat(sign: int) -> Fraction:
        nonlocal pos
        num = read_uint("digits")
        if pos < n and text[pos] == "/":
            pos += 1
            den_start = pos
            den = read_uint("positive denominator")
            if den == 0:
                raise ScalarParseError("denominator must be positive", den_start)
            return Fraction(sign * num, den)
        return Fraction(sign * num)

    if n == 0:
        raise ScalarParseError("empty scalar", 0)

    # First term: bare 'i', a rational followed by 'i', or a plain rational.
    sign = read_sign()
    if pos < n and text[pos] == "i":
        pos += 1
        first_im: Fraction | None = Fraction(sign)
        first_re = Fraction(0)
    else:
        value = read_rat(sign)
        if pos < n and text[pos] == "i":
            pos += 1
            first_im = value
            first_re = Fraction(0)
        else:
            first_im = None
            first_re = value

    if pos == n:
        if first_im is not None:
            return ComplexRational(0, first_im)
        return ComplexRational(first_re)

    if first_im is not None:
        raise ScalarParseError("unexpected text after imaginary part", pos)
    if text[pos] not in "+-":
        raise ScalarParseError("expected '+' or '-' before imaginary part", pos)

    sign = read_sign()
    if pos < n and text[pos] == "i":
        pos += 1
        im = Fraction(sign)
    else:
        im = read_rat(sign)
        if pos >= n or text[pos] != "i":
            raise ScalarParseError("expected 'i'", pos)
        pos += 1

    if pos != n:
        raise ScalarParseError("unexpected trailing text", pos)
    return ComplexRational(first_re, im)
