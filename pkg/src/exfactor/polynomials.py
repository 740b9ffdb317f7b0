"""Exact univariate and bivariate polynomial arithmetic over Z and Q.

Univariate polynomials are dense ascending coefficient vectors; bivariate
ones are sparse maps (i, j) -> coefficient of x^i y^j. Everything here is
exact integer/rational arithmetic: these routines are the correctness
anchor the numerical stages are checked against.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NotDivisible, ZeroPolynomial

__all__ = [
    "UniPolyZ",
    "UniPolyQ",
    "BivarPolyZ",
    "content_primitive",
    "primitive_from_rational",
    "specialize",
    "gcd_bivariate",
    "squarefree_decompose",
    "squarefree_decompose_uni",
    "exact_divide",
    "divide_exact_int",
    "height_bound",
    "gcd_unipoly",
]


def _strip(coeffs: Iterable) -> tuple:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class UniPolyZ:
    """Univariate polynomial with integer coefficients, ascending powers.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        self.coeffs = _strip(int(c) for c in coeffs)

    @classmethod
    def zero(cls) -> UniPolyZ:
        return cls(())

    @classmethod
    def const(cls, c: int) -> UniPolyZ:
        return cls((c,))

    @classmethod
    def monomial(cls, c: int, k: int) -> UniPolyZ:
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> int:
        if self.is_zero:
            return 0
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, UniPolyZ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("UniPolyZ", self.coeffs))

    def __neg__(self):
        return UniPolyZ(-c for c in self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPolyZ(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return UniPolyZ(c * other for c in self.coeffs)
        if self.is_zero or other.is_zero:
            return UniPolyZ.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPolyZ(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        acc = UniPolyZ.const(1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def shift(self, k: int) -> UniPolyZ:
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return UniPolyZ((0,) * k + self.coeffs)

    def derivative(self) -> UniPolyZ:
        return UniPolyZ(i * c for i, c in enumerate(self.coeffs) if i >= 1)

    def reverse(self) -> UniPolyZ:
        """x^deg * p(1/x): coefficient vector reversed."""
        return UniPolyZ(reversed(self.coeffs))

    def content(self) -> int:
        """gcd of the coefficients, signed so the primitive part has lc > 0."""
        if self.is_zero:
            raise ZeroPolynomial("content of zero polynomial")
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return -g if self.lc < 0 else g

    def primitive(self) -> UniPolyZ:
        c = self.content()
        return UniPolyZ(a // c for a in self.coeffs)

    def div_exact(self, other: UniPolyZ) -> UniPolyZ:
        """Exact quotient self / other in Z[x]; raises NotDivisible otherwise."""
        if other.is_zero:
            raise ZeroPolynomial("division by zero polynomial")
        if self.is_zero:
            return UniPolyZ.zero()
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            raise NotDivisible("degree of divisor exceeds dividend")
        out = [0] * (dq + 1)
        ob = other.coeffs
        for k in range(dq, -1, -1):
            lead = rem[k + len(ob) - 1]
            if lead % ob[-1]:
                raise NotDivisible("leading coefficient not divisible")
            q = lead // ob[-1]
            out[k] = q
            if q:
                for j, b in enumerate(ob):
                    rem[k + j] -= q * b
        if any(rem):
            raise NotDivisible("nonzero remainder")
        return UniPolyZ(out)

    def pseudo_rem(self, other: UniPolyZ) -> UniPolyZ:
        """prem(self, other): remainder of lc(other)^(delta+1) * self by other."""
        if other.is_zero:
            raise ZeroPolynomial("pseudo-remainder by zero")
        r = self
        d = other.degree
        lo = other.lc
        e = r.degree - d + 1
        while not r.is_zero and r.degree >= d:
            s = UniPolyZ.monomial(r.lc, r.degree - d) * other
            r = r * lo - s
            e -= 1
        if e > 0:
            r = r * (lo**e)
        return r

    def eval_fraction(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def eval_any(self, z):
        """Horner evaluation for any ring element supporting + and *."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * z + c
        return 0 if acc is None else acc

    def norm2_squared(self) -> int:
        return sum(c * c for c in self.coeffs)

    def height(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def is_squarefree(self) -> bool:
        if self.degree <= 1:
            return not self.is_zero
        return gcd_unipoly(self, self.derivative()).degree == 0

    def to_rational(self) -> UniPolyQ:
        return UniPolyQ(Fraction(c) for c in self.coeffs)

    def __repr__(self):
        return f"UniPolyZ({list(self.coeffs)})"


class UniPolyQ:
    """Univariate polynomial with rational coefficients, ascending powers."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction]):
        self.coeffs = _strip(Fraction(c) for c in coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        return isinstance(other, UniPolyQ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("UniPolyQ", self.coeffs))

    def __neg__(self):
        return UniPolyQ(-c for c in self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPolyQ(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPolyQ(c * other for c in self.coeffs)
        if self.is_zero or other.is_zero:
            return UniPolyQ(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPolyQ(out)

    __rmul__ = __mul__

    def derivative(self) -> UniPolyQ:
        return UniPolyQ(i * c for i, c in enumerate(self.coeffs) if i >= 1)

    def divmod(self, other: UniPolyQ) -> tuple[UniPolyQ, UniPolyQ]:
        if other.is_zero:
            raise ZeroPolynomial("division by zero polynomial")
        rem = list(self.coeffs)
        d = other.degree
        if len(rem) - 1 < d:
            return UniPolyQ(()), UniPolyQ(rem)
        out = [Fraction(0)] * (len(rem) - d)
        for k in range(len(rem) - 1 - d, -1, -1):
            lead = rem[k + d]
            if lead:
                q = lead / other.lc
                out[k] = q
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return UniPolyQ(out), UniPolyQ(rem[:d])

    def div_exact(self, other: UniPolyQ) -> UniPolyQ:
        q, r = self.divmod(other)
        if not r.is_zero:
            raise NotDivisible("nonzero remainder")
        return q

    def eval_fraction(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def clear_denominators(self) -> tuple[Fraction, UniPolyZ]:
        """Write self = cofactor * P with P a primitive integer polynomial, lc(P) > 0."""
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no primitive form")
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = UniPolyZ(c * den for c in self.coeffs)
        cont = ints.content()
        return Fraction(cont, den), UniPolyZ(c // cont for c in ints.coeffs)

    def __repr__(self):
        return f"UniPolyQ({[str(c) for c in self.coeffs]})"


class BivarPolyZ:
    """Bivariate polynomial in x, y over Z as a sparse term map.

    No zero coefficients are stored; the degree pair is the componentwise
    maximum of the exponents present, (-1, -1) for the zero polynomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int]):
        self.terms = {k: int(v) for k, v in terms.items() if v != 0}

    @classmethod
    def zero(cls) -> BivarPolyZ:
        return cls({})

    @classmethod
    def const(cls, c: int) -> BivarPolyZ:
        return cls({(0, 0): c})

    @classmethod
    def var(cls, name: str) -> BivarPolyZ:
        if name == "x":
            return cls({(1, 0): 1})
        if name == "y":
            return cls({(0, 1): 1})
        raise ValueError(f"unknown variable {name!r}")

    @classmethod
    def from_x_coeffs(cls, coeffs: Iterable[UniPolyZ]) -> BivarPolyZ:
        terms: dict[tuple[int, int], int] = {}
        for i, p in enumerate(coeffs):
            for j, c in enumerate(p.coeffs):
                if c:
                    terms[(i, j)] = c
        return cls(terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    @property
    def degree_pair(self) -> tuple[int, int]:
        if not self.terms:
            return (-1, -1)
        return (max(i for i, _ in self.terms), max(j for _, j in self.terms))

    def deg(self, var: str) -> int:
        idx = 0 if var == "x" else 1
        return self.degree_pair[idx]

    def lc_lex(self) -> int:
        """Leading coefficient under lex order x > y."""
        if not self.terms:
            return 0
        return self.terms[max(self.terms)]

    def __eq__(self, other):
        return isinstance(other, BivarPolyZ) and self.terms == other.terms

    def __hash__(self):
        return hash(("BivarPolyZ", frozenset(self.terms.items())))

    def __neg__(self):
        return BivarPolyZ({k: -v for k, v in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BivarPolyZ(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BivarPolyZ({k: v * other for k, v in self.terms.items()})
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + a * b
        return BivarPolyZ(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        acc = BivarPolyZ.const(1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def derivative(self, var: str) -> BivarPolyZ:
        out: dict[tuple[int, int], int] = {}
        for (i, j), c in self.terms.items():
            if var == "x" and i >= 1:
                out[(i - 1, j)] = c * i
            elif var == "y" and j >= 1:
                out[(i, j - 1)] = c * j
        return BivarPolyZ(out)

    def swap_vars(self) -> BivarPolyZ:
        return BivarPolyZ({(j, i): c for (i, j), c in self.terms.items()})

    def to_x_coeffs(self) -> list[UniPolyZ]:
        """Coefficients as polynomials in y, indexed by x power (dense)."""
        m = self.deg("x")
        buckets: list[dict[int, int]] = [dict() for _ in range(m + 1)]
        for (i, j), c in self.terms.items():
            buckets[i][j] = c
        out = []
        for b in buckets:
            n = max(b) if b else -1
            out.append(UniPolyZ(b.get(j, 0) for j in range(n + 1)))
        return out

    def content(self) -> int:
        if self.is_zero:
            raise ZeroPolynomial("content of zero polynomial")
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
        return -g if self.lc_lex() < 0 else g

    def primitive(self) -> BivarPolyZ:
        c = self.content()
        return BivarPolyZ({k: v // c for k, v in self.terms.items()})

    def scale_exact(self, q: Fraction) -> BivarPolyZ:
        out = {}
        for k, v in self.terms.items():
            w = v * q
            if w.denominator != 1:
                raise NotDivisible("scaling produced a non-integer coefficient")
            out[k] = int(w)
        return BivarPolyZ(out)

    def eval_complex(self, x: complex, y: complex) -> complex:
        coeffs = self.to_x_coeffs()
        acc = 0j
        for p in reversed(coeffs):
            acc = acc * x + p.eval_complex(y)
        return acc

    def eval_fraction(self, x: Fraction, y: Fraction) -> Fraction:
        acc = Fraction(0)
        for p in reversed(self.to_x_coeffs()):
            acc = acc * x + p.eval_fraction(y)
        return acc

    def __repr__(self):
        return f"BivarPolyZ({self.terms})"


# ---------------------------------------------------------------------------
# content / primitive part


def content_primitive(f):
    """(content, primitive) with content * primitive == f and lc(primitive) > 0.

    Works for UniPolyZ and BivarPolyZ; the sign of the content makes the
    primitive part's leading coefficient (lex x > y for bivariate) positive.
    """
    if f.is_zero:
        raise ZeroPolynomial("content_primitive of zero polynomial")
    c = f.content()
    return c, f.primitive()


def primitive_from_rational(f: UniPolyQ) -> UniPolyZ:
    """The primitive integer polynomial with the same roots as f, lc > 0."""
    if f.is_zero:
        raise ZeroPolynomial("primitive part of zero polynomial")
    _, p = f.clear_denominators()
    return p


# ---------------------------------------------------------------------------
# specialization


def specialize(F: BivarPolyZ, var: str, value: Fraction) -> UniPolyQ:
    """Substitute a rational for one variable; exact in the other variable."""
    value = Fraction(value)
    if var == "y":
        rows = F.to_x_coeffs()
        return UniPolyQ(p.eval_fraction(value) for p in rows)
    if var == "x":
        return specialize(F.swap_vars(), "y", value)
    raise ValueError(f"unknown variable {var!r}")


# ---------------------------------------------------------------------------
# univariate gcd over Z (primitive PRS)


def gcd_unipoly(a: UniPolyZ, b: UniPolyZ) -> UniPolyZ:
    """gcd in Z[x] including integer content, normalized to positive lc."""
    if a.is_zero and b.is_zero:
        raise ZeroPolynomial("gcd(0, 0) undefined")
    if a.is_zero:
        return b.primitive() * abs(b.content())
    if b.is_zero:
        return a.primitive() * abs(a.content())
    ca, pa = abs(a.content()), a.primitive()
    cb, pb = abs(b.content()), b.primitive()
    cg = math.gcd(ca, cb)
    if pa.degree < pb.degree:
        pa, pb = pb, pa
    while not pb.is_zero:
        r = pa.pseudo_rem(pb)
        pa, pb = pb, (r if r.is_zero else r.primitive())
    return pa.primitive() * cg


# ---------------------------------------------------------------------------
# bivariate helpers: Z[y][x] view


def _content_in_y(F: BivarPolyZ) -> UniPolyZ:
    """gcd in Z[y] of the x-coefficients (the y-only factor of F)."""
    coeffs = [p for p in F.to_x_coeffs() if not p.is_zero]
    g = coeffs[0]
    for p in coeffs[1:]:
        if g.degree == 0 and abs(g.lc) == 1:
            break
        g = gcd_unipoly(g, p)
    return g if g.lc > 0 else -g


def _divide_coeffs_by_unipoly(F: BivarPolyZ, g: UniPolyZ) -> BivarPolyZ:
    return BivarPolyZ.from_x_coeffs(
        p.div_exact(g) if not p.is_zero else p for p in F.to_x_coeffs()
    )


def _lc_x(F: BivarPolyZ) -> UniPolyZ:
    return F.to_x_coeffs()[-1]


def _pseudo_rem_x(A: BivarPolyZ, B: BivarPolyZ) -> BivarPolyZ:
    """prem of A by B in (Z[y])[x]: remainder of lc_x(B)^(delta+1) * A."""
    db = B.deg("x")
    lb_b = BivarPolyZ({(0, j): c for j, c in enumerate(_lc_x(B).coeffs) if c})
    r = A
    e = A.deg("x") - db + 1
    while not r.is_zero and r.deg("x") >= db:
        lr = _lc_x(r)
        shift = r.deg("x") - db
        s = BivarPolyZ({(shift, j): c for j, c in enumerate(lr.coeffs) if c}) * B
        r = lb_b * r - s
        e -= 1
    for _ in range(max(e, 0)):
        r = lb_b * r
    return r


def divide_exact_int(F: BivarPolyZ, G: BivarPolyZ) -> BivarPolyZ:
    """True quotient F / G when G divides F in Z[x, y]; raises NotDivisible."""
    if G.is_zero:
        raise ZeroPolynomial("division by zero polynomial")
    if F.is_zero:
        return BivarPolyZ.zero()
    fa = F.to_x_coeffs()
    ga = G.to_x_coeffs()
    dg = len(ga) - 1
    dq = len(fa) - 1 - dg
    if dq < 0:
        raise NotDivisible("degree of divisor exceeds dividend")
    rem = list(fa)
    out: list[UniPolyZ] = [UniPolyZ.zero()] * (dq + 1)
    for k in range(dq, -1, -1):
        lead = rem[k + dg]
        if lead.is_zero:
            continue
        q = lead.div_exact(ga[-1])
        out[k] = q
        for j, gc in enumerate(ga):
            rem[k + j] = rem[k + j] - q * gc
    if any(not r.is_zero for r in rem):
        raise NotDivisible("nonzero remainder")
    return BivarPolyZ.from_x_coeffs(out)


# ---------------------------------------------------------------------------
# bivariate gcd: content separation + subresultant PRS


def gcd_bivariate(F: BivarPolyZ, G: BivarPolyZ) -> BivarPolyZ:
    """Primitive gcd over Q[x, y], positive lex-leading coefficient.

    Contents are separated in both variable orderings; the primitive parts
    go through the subresultant polynomial remainder sequence in (Z[y])[x].
    """
    if F.is_zero and G.is_zero:
        raise ZeroPolynomial("gcd(0, 0) undefined")
    if F.is_zero:
        return G.primitive()
    if G.is_zero:
        return F.primitive()
    F = F.primitive()
    G = G.primitive()
    if F.deg("x") == 0 and G.deg("x") == 0:
        g = gcd_unipoly(_content_in_y(F), _content_in_y(G))
        return BivarPolyZ.from_x_coeffs([g]).primitive()

    cf = _content_in_y(F)
    cg = _content_in_y(G)
    pf = _divide_coeffs_by_unipoly(F, cf)
    pg = _divide_coeffs_by_unipoly(G, cg)
    cont_gcd = gcd_unipoly(cf, cg)

    if pf.deg("x") < pg.deg("x"):
        pf, pg = pg, pf
    pp_gcd = _subresultant_gcd(pf, pg)
    result = BivarPolyZ.from_x_coeffs([cont_gcd]) * pp_gcd
    return result.primitive()


def _subresultant_gcd(A: BivarPolyZ, B: BivarPolyZ) -> BivarPolyZ:
    """gcd of y-primitive A, B in (Z[y])[x] with deg_x A >= deg_x B >= 0."""
    g = h = UniPolyZ.const(1)
    while True:
        if B.deg("x") == 0:
            # y-primitive with no x part: the primitive parts are coprime
            return BivarPolyZ.const(1)
        delta = A.deg("x") - B.deg("x")
        r = _pseudo_rem_x(A, B)
        if r.is_zero:
            break
        beta = g * (h**delta)
        A, B = B, _divide_coeffs_by_unipoly(r, beta)
        g = _lc_x(A)
        if delta == 1:
            h = g
        elif delta > 1:
            h = (g**delta).div_exact(h ** (delta - 1))
    pb = _divide_coeffs_by_unipoly(B, _content_in_y(B))
    return pb.primitive()


# ---------------------------------------------------------------------------
# exact division over Q with primitive rescaling


def exact_divide(F: BivarPolyZ, G: BivarPolyZ) -> tuple[BivarPolyZ, Fraction]:
    """(Q, c) with F = c * Q * G exactly over Q, Q primitive with positive lc.

    Raises NotDivisible when G does not divide F in Q[x, y].
    """
    if G.is_zero:
        raise ZeroPolynomial("division by zero polynomial")
    if F.is_zero:
        return BivarPolyZ.zero(), Fraction(1)
    fa = [p.to_rational() for p in F.to_x_coeffs()]
    ga = [p.to_rational() for p in G.to_x_coeffs()]
    dg = len(ga) - 1
    dq = len(fa) - 1 - dg
    if dq < 0:
        raise NotDivisible("degree of divisor exceeds dividend")
    out: list[UniPolyQ] = [UniPolyQ(())] * (dq + 1)
    rem = list(fa)
    for k in range(dq, -1, -1):
        lead = rem[k + dg]
        if lead.is_zero:
            continue
        q = lead.div_exact(ga[-1])
        out[k] = q
        for j, gc in enumerate(ga):
            rem[k + j] = rem[k + j] - q * gc
    if any(not r.is_zero for r in rem):
        raise NotDivisible("nonzero remainder")

    den = 1
    for p in out:
        for c in p.coeffs:
            den = math.lcm(den, c.denominator)
    int_terms: dict[tuple[int, int], int] = {}
    for i, p in enumerate(out):
        for j, c in enumerate(p.coeffs):
            if c:
                int_terms[(i, j)] = int(c * den)
    quotient = BivarPolyZ(int_terms)
    cont, prim = content_primitive(quotient)
    return prim, Fraction(cont, den)


# ---------------------------------------------------------------------------
# square-free decomposition (Yun)


def squarefree_decompose_uni(f: UniPolyZ) -> list[tuple[UniPolyZ, int]]:
    """Yun's algorithm in Z[x] on the primitive part of f."""
    if f.is_zero or f.is_constant:
        raise ZeroPolynomial("square-free decomposition needs a nonconstant polynomial")
    f = f.primitive()
    out: list[tuple[UniPolyZ, int]] = []
    a0 = gcd_unipoly(f, f.derivative())
    b = f.div_exact(a0)
    c = f.derivative().div_exact(a0)
    d = c - b.derivative()
    i = 1
    while not b.is_constant:
        a = gcd_unipoly(b, d)
        if not a.is_constant:
            out.append((a.primitive(), i))
        b = b.div_exact(a)
        c = d.div_exact(a)
        d = c - b.derivative()
        i += 1
    return out


def squarefree_decompose(F: BivarPolyZ) -> list[tuple[BivarPolyZ, int]]:
    """F = content * prod factor_i^mult_i with square-free, pairwise coprime factors.

    The y-only content is split off first and decomposed univariately; the
    rest goes through Yun's algorithm with respect to x using bivariate gcds.
    """
    if F.is_zero or F.is_constant:
        raise ZeroPolynomial("square-free decomposition needs a nonconstant polynomial")
    W = F.primitive()
    out: list[tuple[BivarPolyZ, int]] = []

    ycont = _content_in_y(W)
    if ycont.degree >= 1:
        W = _divide_coeffs_by_unipoly(W, ycont)
        for p, m in squarefree_decompose_uni(ycont):
            out.append((BivarPolyZ.from_x_coeffs([p]), m))

    if W.deg("x") >= 1:
        wx = W.derivative("x")
        a0 = gcd_bivariate(W, wx)
        b = divide_exact_int(W, a0)
        c = divide_exact_int(wx, a0)
        d = c - b.derivative("x")
        i = 1
        while not b.is_constant:
            a = gcd_bivariate(b, d)
            if not a.is_constant:
                out.append((a.primitive(), i))
            b = divide_exact_int(b, a)
            c = divide_exact_int(d, a)
            d = c - b.derivative("x")
            i += 1
    return out


# ---------------------------------------------------------------------------
# Mignotte-style factor height bound


def height_bound(f: UniPolyZ) -> int:
    """H = ceil(2^d * ||f||_2): bounds the height of every integer factor of f."""
    if f.is_zero:
        raise ZeroPolynomial("height bound of zero polynomial")
    d = f.degree
    if d < 1:
        raise ValueError("height bound needs degree >= 1")
    n2 = f.norm2_squared()
    # ceil(2^d * sqrt(n2)) via integer square root of 4^d * n2
    scaled = n2 << (2 * d)
    r = math.isqrt(scaled)
    return r if r * r == scaled else r + 1
