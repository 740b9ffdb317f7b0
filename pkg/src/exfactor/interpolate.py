"""From approximate roots to exact node polynomials to the exact factor.

Node polynomials come from rounding the coefficients of alpha * prod(x - r_i)
once the roots are accurate below the rounding threshold. The factor is then
assembled over exact rationals: per-node scaling constants solve the
homogeneous system that kills all y-powers above the factor's y-degree, and
a Lagrange combination produces the primitive integer factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import DegreeOverflow, Inconsistent, NeedMoreNodes, PrecisionTooLow, RankOne
from .polynomials import BivarPolyZ, UniPolyQ, UniPolyZ
from .precision import dyadic_round, mpf_to_fraction
from .rootsolve import ApproxRoot

__all__ = [
    "NodeRecord",
    "ScalingSystem",
    "rounding_threshold",
    "node_polynomial",
    "required_nodes",
    "scaling_constants",
    "assemble_factor",
]


@dataclass(frozen=True)
class NodeRecord:
    """One interpolation node: its rational position, the reconstructed exact
    integer node polynomial of the group, and the alpha used to scale it."""

    y: Fraction
    node_poly: UniPolyZ | UniPolyQ
    alpha_used: int


@dataclass(frozen=True)
class ScalingSystem:
    """Vandermonde-against-coefficients data of Eq. V*C = Lambda*A."""

    nodes: tuple[Fraction, ...]
    coeff_rows: tuple[tuple[Fraction, ...], ...]
    n: int  # degree of the factor in y

    def __post_init__(self):
        if len(self.nodes) != len(self.coeff_rows):
            raise ValueError("one coefficient row per node required")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("interpolation nodes must be distinct")

    @classmethod
    def from_polys(cls, nodes, polys, n: int) -> ScalingSystem:
        nodes = tuple(Fraction(v) for v in nodes)
        width = max(p.degree for p in polys) + 1
        rows = []
        for p in polys:
            cs = [Fraction(c) for c in p.coeffs]
            rows.append(tuple(cs + [Fraction(0)] * (width - len(cs))))
        return cls(nodes, tuple(rows), n)


def rounding_threshold(m: int, r_mag, alpha: int) -> Fraction:
    """delta* = 1 / (2 alpha M) with M = max_i { i r^(i-1) C(m, i) } + 1.

    Roots known to better than delta* make every coefficient of
    alpha * prod(x - r_i) land within 1/2 of the exact integer.
    """
    if m < 1 or alpha < 1:
        raise ValueError("need m >= 1 and alpha >= 1")
    r = Fraction(r_mag if not isinstance(r_mag, mpf) else mpf_to_fraction(r_mag))
    if r < 0:
        raise ValueError("root magnitude must be nonnegative")
    M = max(i * r ** (i - 1) * math.comb(m, i) for i in range(1, m + 1)) + 1
    return 1 / (2 * alpha * M)


def _abs_upper(root: ApproxRoot) -> Fraction:
    """Upper bound on |root| as an exact rational."""
    q = root.value.abs_squared_fraction()
    if q == 0:
        return Fraction(0)
    with mp.workprec(80):
        s = mp.sqrt(mpf(q.numerator) / q.denominator)
    return mpf_to_fraction(s) * Fraction(2**50 + 1, 2**50)


def node_polynomial(roots: list[ApproxRoot], alpha: int) -> UniPolyZ:
    """Round alpha * prod(x - root_i) to the exact integer node polynomial.

    Requires every root's err_bound below rounding_threshold(m, max|root|, alpha);
    the primitive part (positive leading coefficient) is returned.
    """
    if not roots:
        raise ValueError("at least one root required")
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    m = len(roots)
    r_up = max(_abs_upper(r) for r in roots)
    threshold = rounding_threshold(m, r_up, alpha)
    for r in roots:
        if r.err_bound >= threshold:
            raise PrecisionTooLow(
                f"root error {float(r.err_bound):.3e} not below the rounding threshold "
                f"{float(threshold):.3e}"
            )
    wp = max(max(r.value.prec_bits for r in roots), alpha.bit_length() + 8 * m + 64)
    quarter = Fraction(1, 4)
    with mp.workprec(wp):
        coeffs = [mp.mpc(alpha)]
        for r in roots:
            z = r.value.to_mpc()
            nxt = [mp.mpc(0)] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                nxt[k] -= c * z
                nxt[k + 1] += c
            coeffs = nxt
    ints = []
    for c in coeffs:
        # c.real / c.imag are exact mpf values; re-wrapping them would round
        # at the ambient precision and corrupt wide integer coefficients
        if abs(mpf_to_fraction(c.imag)) >= quarter:
            raise PrecisionTooLow("imaginary residue of a coefficient is too large")
        v = dyadic_round(c.real, 0)
        if abs(mpf_to_fraction(c.real) - v) >= quarter:
            raise PrecisionTooLow("a coefficient is farther than 1/4 from an integer")
        ints.append(v)
    return UniPolyZ(ints).primitive()


def required_nodes(r_rank: int, n: int) -> int:
    """mu = ceil(r n / (r - 1)): nodes needed beyond the base node."""
    if n < 1:
        raise ValueError("need n >= 1")
    if r_rank < 2:
        raise RankOne("rank < 2 contradicts irreducibility of the factor")
    return -(-r_rank * n // (r_rank - 1))


# ---------------------------------------------------------------------------
# exact rational linear algebra (small dense systems)


def _rank(rows: list[list[Fraction]]) -> int:
    mat = [row[:] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][c]
        mat[rank] = [v * inv for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][c] != 0:
                f = mat[r][c]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def _nullspace(rows: list[list[Fraction]], width: int) -> list[list[Fraction]]:
    mat = [row[:] for row in rows]
    pivots: list[int] = []
    rank = 0
    for c in range(width):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][c]
        mat[rank] = [v * inv for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][c] != 0:
                f = mat[r][c]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        pivots.append(c)
        rank += 1
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * width
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -mat[r][fc]
        basis.append(v)
    return basis


def _vinv_row(nodes: tuple[Fraction, ...], i: int) -> list[Fraction]:
    """Row i (1-based) of V^-1, V the Vandermonde in basis {y^k, ..., 1}.

    Computed by solving V^T u = e_i instead of forming the inverse.
    """
    k = len(nodes) - 1
    size = k + 1
    # V[r][c] = nodes[r]^(k-c); V^T[r][c] = nodes[c]^(k-r)
    aug = [[nodes[c] ** (k - r) for c in range(size)] + [Fraction(int(r == i - 1))] for r in range(size)]
    for col in range(size):
        piv = next(r for r in range(col, size) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][size] for r in range(size)]


def scaling_constants(sys: ScalingSystem) -> list[Fraction]:
    """Solve Row(V^-1, i) * Lambda * Col(A, j) = 0 exactly; lambda_0 fixed to 1.

    The homogeneous system must have nullity exactly one; its normalized
    solution gives lambda_1 .. lambda_k.
    """
    nodes = sys.nodes
    A = [list(row) for row in sys.coeff_rows]
    k = len(nodes) - 1
    n = sys.n
    if k > 2 * n:
        raise Inconsistent(f"{k} extra nodes exceed the 2n = {2 * n} cap")
    r = _rank(A)
    mu = required_nodes(r, n)  # raises RankOne when r < 2
    if k < mu:
        raise NeedMoreNodes(f"k = {k} below mu = {mu}")
    width = len(A[0])
    equations: list[list[Fraction]] = []
    for i in range(1, k - n + 1):
        u = _vinv_row(nodes, i)
        for j in range(width):
            equations.append([u[l] * A[l][j] for l in range(k + 1)])
    kernel = _nullspace(equations, k + 1)
    if len(kernel) > 1:
        raise NeedMoreNodes(f"nullity {len(kernel)} > 1; add interpolation nodes")
    if not kernel:
        raise Inconsistent("scaling system has only the trivial solution")
    v = kernel[0]
    if v[0] == 0:
        raise Inconsistent("solution does not extend lambda_0 = 1")
    lam = [c / v[0] for c in v]
    if any(c == 0 for c in lam):
        raise Inconsistent("a scaling constant vanished; node polynomials inconsistent")
    return lam[1:]


def assemble_factor(records: list[NodeRecord], lam: list[Fraction], n: int) -> BivarPolyZ:
    """f = sum_i lambda_i f_i l_i over exact rationals; primitive integer output.

    lam includes lambda_0 = 1; every y-power above n must cancel exactly.
    """
    if len(records) != len(lam):
        raise ValueError("one lambda per node record required (lambda_0 included)")
    nodes = [Fraction(rec.y) for rec in records]
    if len(set(nodes)) != len(nodes):
        raise ValueError("interpolation nodes must be distinct")
    acc: dict[tuple[int, int], Fraction] = {}
    for idx, rec in enumerate(records):
        # Lagrange basis polynomial l_idx(y), ascending coefficients
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, yj in enumerate(nodes):
            if j == idx:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= yj * basis[t + 1]
            denom *= nodes[idx] - yj
        scale = lam[idx] / denom
        for xp, c in enumerate(rec.node_poly.coeffs):
            if not c:
                continue
            for yp, b in enumerate(basis):
                if b:
                    key = (xp, yp)
                    acc[key] = acc.get(key, Fraction(0)) + scale * Fraction(c) * b
    acc = {kk: v for kk, v in acc.items() if v != 0}
    over = [kk for kk in acc if kk[1] > n]
    if over:
        raise DegreeOverflow(f"nonzero coefficients above y^{n}: {sorted(over)}")
    if not acc:
        raise Inconsistent("assembled factor is identically zero")
    den = 1
    for v in acc.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    terms = {kk: int(v * den) for kk, v in acc.items()}
    return BivarPolyZ(terms).primitive()
