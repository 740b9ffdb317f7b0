"""Multi-precision complex values with explicit working precision.

Every value carries its own ``prec_bits``; arithmetic runs at the operands'
precision (the smaller one for binary operations), never at an ambient
global default. The mantissas are mpmath binary floats, so conversion to
exact rationals and exact scaled rounding are available at any time.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

__all__ = [
    "PrecComplex",
    "mpf_to_fraction",
    "fraction_to_mpf",
    "dyadic_round",
]


def mpf_to_fraction(x: mpf) -> Fraction:
    """Exact conversion of a finite mpmath float to a Fraction."""
    sign, man, exp, _ = x._mpf_
    man = int(man)
    if man == 0:
        if x == 0:
            return Fraction(0)
        raise ValueError(f"non-finite value {x!r} has no rational value")
    if sign:
        man = -man
    return Fraction(man, 1) * Fraction(2) ** exp if exp < 0 else Fraction(man * 2**exp)


def fraction_to_mpf(q: Fraction, prec_bits: int) -> mpf:
    """Round a rational to the nearest binary float with prec_bits mantissa bits."""
    with mp.workprec(prec_bits):
        return mpf(q.numerator) / q.denominator


def dyadic_round(x: mpf, s: int) -> int:
    """round(2**s * x) computed exactly from the float's mantissa and exponent.

    Ties round to even, matching mpmath's nearest mode.
    """
    sign, man, exp, _ = x._mpf_
    man = int(man)
    if man == 0:
        return 0
    e = exp + s
    if e >= 0:
        v = man << e
    else:
        shift = -e
        q, r = divmod(man, 1 << shift)
        half = 1 << (shift - 1)
        if r > half or (r == half and q & 1):
            q += 1
        v = q
    return -v if sign else v


@dataclass(frozen=True)
class PrecComplex:
    """A complex number stored as two binary floats plus its working precision."""

    re: mpf
    im: mpf
    prec_bits: int

    def __post_init__(self):
        if self.prec_bits < 1:
            raise ValueError("prec_bits must be positive")

    @classmethod
    def from_complex(cls, z: complex, prec_bits: int = 53) -> PrecComplex:
        with mp.workprec(prec_bits):
            return cls(mpf(z.real), mpf(z.imag), prec_bits)

    @classmethod
    def from_rational(cls, re: Fraction, im: Fraction, prec_bits: int) -> PrecComplex:
        return cls(fraction_to_mpf(re, prec_bits), fraction_to_mpf(im, prec_bits), prec_bits)

    @classmethod
    def from_mpc(cls, z, prec_bits: int) -> PrecComplex:
        with mp.workprec(prec_bits):
            return cls(mpf(z.real), mpf(z.imag), prec_bits)

    def to_prec(self, prec_bits: int) -> PrecComplex:
        with mp.workprec(prec_bits):
            return PrecComplex(+self.re, +self.im, prec_bits)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_mpc(self):
        # bypass the mpc constructor: it would round at the ambient precision
        return mp.make_mpc((self.re._mpf_, self.im._mpf_))

    def re_fraction(self) -> Fraction:
        return mpf_to_fraction(self.re)

    def im_fraction(self) -> Fraction:
        return mpf_to_fraction(self.im)

    def abs_squared_fraction(self) -> Fraction:
        """|z|^2 as an exact rational (no rounding)."""
        return self.re_fraction() ** 2 + self.im_fraction() ** 2

    def _join(self, other) -> int:
        if isinstance(other, PrecComplex):
            return min(self.prec_bits, other.prec_bits)
        return self.prec_bits

    @staticmethod
    def _parts(v):
        if isinstance(v, PrecComplex):
            return v.re, v.im
        if isinstance(v, (int, Fraction)):
            return v, 0
        raise TypeError(f"cannot mix PrecComplex with {type(v).__name__}")

    def __add__(self, other):
        prec = self._join(other)
        ore, oim = self._parts(other)
        with mp.workprec(prec):
            return PrecComplex(self.re + ore, self.im + oim, prec)

    __radd__ = __add__

    def __sub__(self, other):
        prec = self._join(other)
        ore, oim = self._parts(other)
        with mp.workprec(prec):
            return PrecComplex(self.re - ore, self.im - oim, prec)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return PrecComplex(-self.re, -self.im, self.prec_bits)

    def __mul__(self, other):
        prec = self._join(other)
        ore, oim = self._parts(other)
        with mp.workprec(prec):
            return PrecComplex(
                self.re * ore - self.im * oim,
                self.re * oim + self.im * ore,
                prec,
            )

    __rmul__ = __mul__

    def __truediv__(self, other):
        prec = self._join(other)
        ore, oim = self._parts(other)
        with mp.workprec(prec):
            den = ore * ore + oim * oim
            return PrecComplex(
                (self.re * ore + self.im * oim) / den,
                (self.im * ore - self.re * oim) / den,
                prec,
            )

    def __rtruediv__(self, other):
        ore, oim = self._parts(other)
        return PrecComplex(mpf(ore), mpf(oim), self.prec_bits) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        with mp.workprec(self.prec_bits):
            acc = PrecComplex(mpf(1), mpf(0), self.prec_bits)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __abs__(self) -> mpf:
        with mp.workprec(self.prec_bits):
            return mp.hypot(self.re, self.im)

    def conjugate(self) -> PrecComplex:
        return PrecComplex(self.re, -self.im, self.prec_bits)

    def scaled_round(self, s: int) -> tuple[int, int]:
        """(round(2**s * re), round(2**s * im)), exactly."""
        return dyadic_round(self.re, s), dyadic_round(self.im, s)

    def __repr__(self):
        return f"PrecComplex({self.re!r}, {self.im!r}, prec={self.prec_bits})"
