"""Exact minimal polynomials of algebraic numbers from their approximations.

A candidate is searched for degree n = 1, 2, ... by reducing the lattice
whose rows pair an identity block with scaled real/imaginary parts of the
powers of the approximation; the first reduced vector is accepted when its
norm passes the degree/height bound. Values of modulus above one go through
the reciprocal and the coefficient vector is reversed at the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpf

from .errors import InconsistentGrouping, NoCandidateFound, PrecisionTooLow
from .polynomials import UniPolyZ
from .precision import PrecComplex
from .rootsolve import ApproxRoot

__all__ = [
    "LatticeBasis",
    "RootGroup",
    "required_bits",
    "build_lattice",
    "lll_reduce",
    "minimal_polynomial",
    "group_roots",
]

_LOVASZ_DELTA = Fraction(3, 4)


@dataclass(frozen=True)
class LatticeBasis:
    """Rows of an integer lattice basis (all the same length, independent)."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows:
            width = len(self.rows[0])
            if any(len(r) != width for r in self.rows):
                raise ValueError("rows must all have the same length")


@dataclass
class RootGroup:
    """Base-node root indices sharing one minimal polynomial.

    degree_pair is the factor's 2-tuple degree, filled in by the degree
    detection stage.
    """

    root_indices: tuple[int, ...]
    min_poly: UniPolyZ
    degree_pair: tuple[int, int] | None = field(default=None)


def required_bits(d: int, H: int) -> int:
    """Smallest positive s with 2^s > 2^(d^2/2) * (d+1)^((3d+4)/2) * H^(2d)."""
    if d < 1 or H < 1:
        raise ValueError("need d >= 1 and H >= 1")
    # square the inequality: 4^s > 2^(d^2) * (d+1)^(3d+4) * H^(4d)
    rhs = (1 << (d * d)) * (d + 1) ** (3 * d + 4) * H ** (4 * d)
    return max(1, (rhs.bit_length() + 1) // 2)


def build_lattice(alpha: PrecComplex, n: int, s: int, err_bound: Fraction = Fraction(0)) -> LatticeBasis:
    """The (n+1) x (n+3) basis: identity block plus columns round(2^s * alpha^i).

    The powers are computed at the value's working precision (>= 2s bits
    required) so their error stays below 2^(-s-1/2).
    """
    if n < 1 or s < 1:
        raise ValueError("need n >= 1 and s >= 1")
    if alpha.abs_squared_fraction() > 1:
        raise ValueError("build_lattice requires |alpha| <= 1")
    if alpha.prec_bits < 2 * s:
        raise PrecisionTooLow(f"alpha carried at {alpha.prec_bits} bits; need >= {2 * s}")
    if err_bound > Fraction(1, 12 * n * 2**s):
        raise PrecisionTooLow("approximation error exceeds 2^-s / (12 n)")
    rows = []
    power = PrecComplex.from_rational(Fraction(1), Fraction(0), alpha.prec_bits)
    for i in range(n + 1):
        re_i, im_i = power.scaled_round(s)
        rows.append(tuple(1 if j == i else 0 for j in range(n + 1)) + (re_i, im_i))
        power = power * alpha
    return LatticeBasis(tuple(rows))


# ---------------------------------------------------------------------------
# LLL with exact Gram-Schmidt data (delta = 3/4)
#
# The Gram-Schmidt rationals are carried in integer-scaled form: D[i+1] is
# the Gram determinant d_i of the first i+1 vectors (D[0] = 1) and
# lam[i][j] = mu_ij * d_j. All updates stay in Z with exact divisions, which
# avoids the gcd-normalization cost of Fraction arithmetic on wide entries.


def _lll_init(b):
    n = len(b)
    D = [1] * (n + 1)
    lam = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            u = sum(x * y for x, y in zip(b[i], b[j]))
            for k in range(j):
                u = (D[k + 1] * u - lam[i][k] * lam[j][k]) // D[k]
            if j < i:
                lam[i][j] = u
            else:
                D[i + 1] = u
        if D[i + 1] <= 0:
            raise ValueError("basis rows are linearly dependent")
    return D, lam


def _lll_size_reduce(b, D, lam, k, l):
    if 2 * abs(lam[k][l]) > D[l + 1]:
        d2 = 2 * D[l + 1]
        q = (2 * lam[k][l] + D[l + 1]) // d2
        if q:
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            for j in range(l):
                lam[k][j] -= q * lam[l][j]
            lam[k][l] -= q * D[l + 1]


def lll_reduce(basis: LatticeBasis) -> LatticeBasis:
    """LLL-reduce with exact arithmetic; same lattice, delta = 3/4."""
    b = [list(r) for r in basis.rows]
    n = len(b)
    if n <= 1:
        return LatticeBasis(tuple(tuple(r) for r in b))
    D, lam = _lll_init(b)
    k = 1
    while k < n:
        _lll_size_reduce(b, D, lam, k, k - 1)
        if 4 * (D[k + 1] * D[k - 1] + lam[k][k - 1] ** 2) < 3 * D[k] ** 2:
            b[k], b[k - 1] = b[k - 1], b[k]
            for j in range(k - 1):
                lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
            m = lam[k][k - 1]
            Bnew = (D[k - 1] * D[k + 1] + m * m) // D[k]
            for i in range(k + 1, n):
                t = lam[i][k]
                lam[i][k] = (D[k + 1] * lam[i][k - 1] - m * t) // D[k]
                lam[i][k - 1] = (Bnew * t + m * lam[i][k]) // D[k + 1]
            D[k] = Bnew
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                _lll_size_reduce(b, D, lam, k, l)
            k += 1
    return LatticeBasis(tuple(tuple(r) for r in b))


# ---------------------------------------------------------------------------
# miniPoly


def _accept_norm_bound(d: int, H: int) -> int:
    """Squared acceptance bound (2^(d/2) * (d+1) * H)^2 = 2^d * (d+1)^2 * H^2."""
    return (1 << d) * (d + 1) ** 2 * H * H


def _residual_passes(poly: UniPolyZ, beta: PrecComplex, d: int, H: int, n: int, s: int) -> bool:
    """|poly(beta)| must be tiny: of the lattice tail's order, 2^-s scaled."""
    tau = Fraction(2 ** ((d + 1) // 2 + 4) * (d + 1) * H * (n + 2), 2**s)
    with mp.workprec(beta.prec_bits):
        z = beta.to_mpc()
        acc = z * 0
        for c in reversed(poly.coeffs):
            acc = acc * z + c
        val = abs(acc)
        return val <= mpf(tau.numerator) / tau.denominator


def minimal_polynomial(alpha: ApproxRoot, d: int, H: int) -> UniPolyZ:
    """The primitive minimal polynomial of the algebraic number behind alpha.

    d and H bound the degree and height of the number; the approximation
    must satisfy |alpha - exact| <= 2^-s / (12 d) for s = required_bits(d, H)
    (three times tighter when |alpha| > 1, which is handled through 1/alpha).
    """
    if d < 1 or H < 1:
        raise ValueError("need d >= 1 and H >= 1")
    s = required_bits(d, H)
    need = Fraction(1, 12 * d * 2**s)
    value = alpha.value
    reciprocal = value.abs_squared_fraction() > 1
    if reciprocal:
        need = need / 3
    if alpha.err_bound > need:
        raise PrecisionTooLow(
            f"err_bound {float(alpha.err_bound):.3e} exceeds the Thm.-2 requirement for s={s}"
        )
    work_prec = max(value.prec_bits, 2 * s + 64)
    beta = value.to_prec(work_prec)
    if reciprocal:
        beta = 1 / beta
        if beta.abs_squared_fraction() > 1:
            # rounding can push |1/alpha| barely over 1 when |alpha| is near 1;
            # shrinking by 1 - 2^-(s+45) stays far inside the error budget
            shrink = Fraction(2 ** (s + 45) - 1, 2 ** (s + 45))
            beta = beta * shrink
            if beta.abs_squared_fraction() > 1:
                raise PrecisionTooLow("reciprocal value could not be normalized inside the disk")

    for n in range(1, d + 1):
        reduced = lll_reduce(build_lattice(beta, n, s, err_bound=alpha.err_bound))
        v = reduced.rows[0]
        if sum(c * c for c in v) > _accept_norm_bound(d, H):
            continue
        cand = UniPolyZ(v[: n + 1])
        if cand.is_zero or cand.degree < 1:
            continue
        cand = cand.primitive()
        if not _residual_passes(cand, beta, d, H, n, s):
            continue
        if reciprocal:
            cand = cand.reverse().primitive()
        return cand
    raise NoCandidateFound(f"no candidate of degree <= {d} passed the norm bound")


def _member_residual_ok(poly: UniPolyZ, root: ApproxRoot, d: int) -> bool:
    """High-precision membership test: |p(x)| < 2 * ||p||_2 * d * err * max(1,|x|)^(d-1)."""
    prec = root.value.prec_bits
    err = root.err_bound
    if err == 0:
        err = Fraction(1, 2 ** (prec - 8))
    with mp.workprec(prec):
        z = root.value.to_mpc()
        acc = z * 0
        for c in reversed(poly.coeffs):
            acc = acc * z + c
        val = abs(acc)
        tau = (
            mp.sqrt(mpf(poly.norm2_squared()))
            * d
            * (mpf(err.numerator) / err.denominator)
            * max(mpf(1), abs(z)) ** (d - 1)
            * 2
        )
        return val <= tau


def group_roots(roots: list[ApproxRoot], d: int, H: int) -> list[RootGroup]:
    """Partition the full root set of a degree-d square-free polynomial.

    One lattice search runs per group; the remaining roots are assigned by
    evaluating the found polynomial at them.
    """
    if len(roots) != d:
        raise InconsistentGrouping(f"expected {d} roots, got {len(roots)}")
    remaining = list(range(d))
    groups: list[RootGroup] = []
    seen_polys: set[UniPolyZ] = set()
    while remaining:
        first = remaining[0]
        poly = minimal_polynomial(roots[first], d, H)
        members = [i for i in remaining if _member_residual_ok(poly, roots[i], d)]
        if first not in members or len(members) != poly.degree:
            raise InconsistentGrouping(
                f"minimal polynomial of degree {poly.degree} matched {len(members)} roots"
            )
        if poly in seen_polys:
            raise InconsistentGrouping("two groups produced the same minimal polynomial")
        seen_polys.add(poly)
        groups.append(RootGroup(tuple(members), poly))
        remaining = [i for i in remaining if i not in set(members)]
    return groups
