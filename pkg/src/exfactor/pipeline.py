"""End-to-end factorization: reductions, randomness, retries, exact verification.

The numerical stages (root solving, grouping, transport, reconstruction) can
only ever cause a retry with fresh randomness and escalated precision; every
candidate factor must pass exact division and the full product identity
before it is returned, so the output is exact unconditionally.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from .continuation import detect_degrees, transport_group
from .errors import (
    ExfactorError,
    FactorizationFailed,
    Inconsistent,
    InconsistentGrouping,
    NeedMoreNodes,
    NoCandidateFound,
    NotDivisible,
    PathFailure,
    PrecisionTooLow,
    RankOne,
    ZeroPolynomial,
)
from .interpolate import (
    NodeRecord,
    ScalingSystem,
    assemble_factor,
    node_polynomial,
    required_nodes,
    rounding_threshold,
    scaling_constants,
)
from .minpoly import RootGroup, group_roots, required_bits
from .polynomials import (
    BivarPolyZ,
    UniPolyZ,
    content_primitive,
    exact_divide,
    height_bound,
    primitive_from_rational,
    specialize,
    squarefree_decompose,
    squarefree_decompose_uni,
    _content_in_y,
    _divide_coeffs_by_unipoly,
)
from .precision import PrecComplex
from .rootsolve import ApproxRoot, TrackerConfig, newton_refine, solve_univariate

__all__ = [
    "RngState",
    "RunStats",
    "FactorizationResult",
    "FactorizeOptions",
    "sample_rational",
    "reduce_input",
    "factorize",
    "verify",
]

_NODE_DENOM = 101
_COINCIDENT_NODE_TOL = 2.0**-19


class RngState:
    """Deterministic randomness stream; identical seed, identical transcript."""

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = Random(seed)
        self._position = 0
        self._emitted: set[Fraction] = set()

    @property
    def position(self) -> int:
        return self._position

    def angle(self) -> float:
        self._position += 1
        return self._rng.uniform(-math.pi, math.pi)

    def gamma(self, prec_bits: int = 53) -> PrecComplex:
        theta = self.angle()
        return PrecComplex.from_complex(complex(math.cos(theta), math.sin(theta)), prec_bits)

    def draw_numerator(self) -> int:
        self._position += 1
        return self._rng.randint((_NODE_DENOM + 1) // 2, 2 * _NODE_DENOM)


def sample_rational(rng: RngState) -> Fraction:
    """A fresh rational p/101 with p/101 in [1/2, 2]; never repeats a value."""
    while True:
        value = Fraction(rng.draw_numerator(), _NODE_DENOM)
        if value not in rng._emitted:
            rng._emitted.add(value)
            return value


@dataclass
class RunStats:
    retries: int = 0
    max_precision_bits: int = 53
    nodes_per_factor: list[int] = field(default_factory=list)
    wall_time: float = 0.0


@dataclass(frozen=True)
class FactorizationResult:
    content: Fraction
    factors: tuple[tuple[BivarPolyZ, int], ...]
    stats: RunStats
    seed: int


@dataclass(frozen=True)
class FactorizeOptions:
    max_restarts: int = 5
    max_bits: int = 65536
    swap_vars: bool = False


def _canonical_key(g: BivarPolyZ):
    return (g.degree_pair, tuple(sorted(g.terms.items())))


def _uni_in(var: str, p: UniPolyZ) -> BivarPolyZ:
    if var == "x":
        return BivarPolyZ({(i, 0): c for i, c in enumerate(p.coeffs) if c})
    return BivarPolyZ({(0, j): c for j, c in enumerate(p.coeffs) if c})


def _as_unipoly(g: BivarPolyZ, var: str) -> UniPolyZ:
    d = g.deg(var)
    out = [0] * (d + 1)
    for (i, j), c in g.terms.items():
        out[i if var == "x" else j] = c
    return UniPolyZ(out)


def reduce_input(F: BivarPolyZ):
    """(content, units, parts): content * prod(units) * prod(parts) == F exactly.

    Units are monomial and univariate-only factors (with multiplicity); parts
    are square-free primitive polynomials involving both variables, with
    gcd(part, d(part)/dx) constant.
    """
    if F.is_zero:
        raise ZeroPolynomial("cannot reduce the zero polynomial")
    if F.is_constant:
        raise ValueError("reduce_input needs a nonconstant polynomial")
    cont, W = content_primitive(F)
    units: list[tuple[BivarPolyZ, int]] = []

    a = min(i for i, _ in W.terms)
    b = min(j for _, j in W.terms)
    if a or b:
        W = BivarPolyZ({(i - a, j - b): c for (i, j), c in W.terms.items()})
    if a:
        units.append((BivarPolyZ.var("x"), a))
    if b:
        units.append((BivarPolyZ.var("y"), b))

    if not W.is_constant:
        ycont = _content_in_y(W)
        if ycont.degree >= 1:
            W = _divide_coeffs_by_unipoly(W, ycont)
            for p, mult in squarefree_decompose_uni(ycont):
                units.append((_uni_in("y", p), mult))
    if not W.is_constant:
        xcont = _content_in_y(W.swap_vars())
        if xcont.degree >= 1:
            W = _divide_coeffs_by_unipoly(W.swap_vars(), xcont).swap_vars()
            for p, mult in squarefree_decompose_uni(xcont):
                units.append((_uni_in("x", p), mult))

    parts: list[tuple[BivarPolyZ, int]] = []
    if not W.is_constant:
        parts = squarefree_decompose(W)
    elif W.terms.get((0, 0), 1) != 1:
        # leftover unit sign/constant folds into the content
        cont *= W.terms[(0, 0)]
    return Fraction(cont), units, parts


def verify(F: BivarPolyZ, result: FactorizationResult) -> bool:
    """True iff content * prod(factor^mult) equals F by exact arithmetic."""
    prod = BivarPolyZ.const(1)
    for g, mult in result.factors:
        prod = prod * g**mult
    return F * result.content.denominator == prod * result.content.numerator


# ---------------------------------------------------------------------------
# stage helpers


def _grouping_target_bits(d: int, s: int) -> int:
    # err must be below 2^-s / (12 d), and 3x tighter for the reciprocal path
    return s + (36 * d).bit_length() + 4


def _solve_with_fresh_angles(p: UniPolyZ, rng: RngState, target_bits: int, tries: int = 3):
    last: ExfactorError | None = None
    for _ in range(tries):
        cfg = TrackerConfig(gamma_angle=rng.angle())
        try:
            return solve_univariate(p, cfg, target_bits), cfg
        except PathFailure as exc:
            last = exc
    raise last if last is not None else PathFailure("no tracking attempt made")


def _group_with_height_retry(roots, d: int, H: int):
    try:
        return group_roots(roots, d, H), H
    except (NoCandidateFound, InconsistentGrouping):
        # H is a cheap heuristic bound; inflate once before giving up
        return group_roots(roots, d, 2 * H), 2 * H


def _fresh_valid_node(P: BivarPolyZ, var: str, rng: RngState, tries: int = 25) -> Fraction:
    """A random node where the specialization keeps degree and stays square-free."""
    want = P.deg("x" if var == "y" else "y")
    for _ in range(tries):
        v = sample_rational(rng)
        p = specialize(P, var, v)
        if p.degree != want:
            continue
        if not primitive_from_rational(p).is_squarefree():
            continue
        return v
    raise PathFailure(f"could not find a usable {var}-node in {tries} draws")


def _mag_bits(q: Fraction) -> int:
    """Smallest b with 2^-b < q does not exceed: bits needed so 2^-b < q."""
    return max(1, q.denominator.bit_length() - q.numerator.bit_length() + 2)


def _factor_univariate_part(p: UniPolyZ, var: str, rng: RngState, stats: RunStats, opts: FactorizeOptions, boost: int):
    """Irreducible factors of a square-free univariate polynomial, via roots + grouping."""
    if p.degree == 1:
        return [_uni_in(var, p.primitive())]
    H = height_bound(p)
    d = p.degree
    s = required_bits(d, H)
    target = _grouping_target_bits(d, s) * boost
    if target > opts.max_bits:
        raise PrecisionTooLow(f"target {target} bits exceeds --max-bits {opts.max_bits}")
    stats.max_precision_bits = max(stats.max_precision_bits, target)
    roots, _ = _solve_with_fresh_angles(p, rng, target)
    groups, _ = _group_with_height_retry(roots, d, H)
    prod = UniPolyZ.const(1)
    for g in groups:
        prod = prod * g.min_poly
    if prod != p.primitive():
        raise InconsistentGrouping("group polynomials do not multiply back to the input")
    return [_uni_in(var, g.min_poly) for g in groups]


def _reconstruct_factor(
    P: BivarPolyZ,
    grp: RootGroup,
    x_roots: list[ApproxRoot],
    y0: Fraction,
    rng: RngState,
    stats: RunStats,
    opts: FactorizeOptions,
    boost: int,
) -> BivarPolyZ:
    """Algorithm-2 style reconstruction of one group's exact factor."""
    a_i, n = grp.degree_pair
    base_roots = [x_roots[i] for i in grp.root_indices]
    records: list[NodeRecord] = [
        NodeRecord(y0, grp.min_poly, abs(primitive_from_rational(specialize(P, "y", y0)).lc))
    ]

    def try_solve():
        k = len(records) - 1
        sys_ = ScalingSystem.from_polys(
            [r.y for r in records], [r.node_poly for r in records], n
        )
        lam = scaling_constants(sys_)
        return assemble_factor(records, [Fraction(1)] + lam, n)

    max_extra = 2 * n
    while True:
        k = len(records) - 1
        rows = [[Fraction(c) for c in r.node_poly.coeffs] for r in records]
        width = max(len(r) for r in rows)
        rows = [r + [Fraction(0)] * (width - len(r)) for r in rows]
        from .interpolate import _rank

        r_hat = _rank(rows)
        mu_hat = required_nodes(r_hat, n) if r_hat >= 2 else max_extra
        if k >= mu_hat and r_hat >= 2:
            try:
                candidate = try_solve()
            except NeedMoreNodes:
                candidate = None
            if candidate is not None:
                if candidate.degree_pair != (a_i, n):
                    raise Inconsistent(
                        f"assembled factor has degree {candidate.degree_pair}, expected {(a_i, n)}"
                    )
                stats.nodes_per_factor.append(len(records))
                return candidate
        if k >= max_extra:
            raise Inconsistent(f"no unique scaling solution within the 2n = {max_extra} node cap")
        records.append(_next_node_record(P, base_roots, y0, rng, stats, opts, boost))


def _next_node_record(
    P: BivarPolyZ,
    base_roots: list[ApproxRoot],
    y0: Fraction,
    rng: RngState,
    stats: RunStats,
    opts: FactorizeOptions,
    boost: int,
) -> NodeRecord:
    m_f = len(base_roots)
    deg_full = P.deg("x")
    last: ExfactorError | None = None
    for _ in range(25):
        y1 = sample_rational(rng)
        spec_q = specialize(P, "y", y1)
        if spec_q.is_zero or spec_q.degree != deg_full:
            continue
        p1 = primitive_from_rational(spec_q)
        if not p1.is_squarefree():
            continue
        cfg = TrackerConfig(gamma_angle=rng.angle())
        gamma = rng.gamma()
        try:
            moved = transport_group(P, base_roots, y0, y1, gamma, cfg)
        except PathFailure as exc:
            last = exc
            continue
        vals = [r.value.to_complex() for r in moved]
        if m_f > 1:
            gap = min(abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1 :])
            if gap < _COINCIDENT_NODE_TOL:
                continue  # node too close to the discriminant locus
        alpha = abs(p1.lc)
        r_up = max(max((abs(v) for v in vals), default=0.0) * 1.125, 0.5)
        threshold = rounding_threshold(m_f, Fraction(r_up), alpha)
        target = (_mag_bits(threshold) + 8) * boost
        if target > opts.max_bits:
            raise PrecisionTooLow(f"target {target} bits exceeds --max-bits {opts.max_bits}")
        stats.max_precision_bits = max(stats.max_precision_bits, target)
        try:
            refined = [newton_refine(p1, r, target) for r in moved]
            poly = node_polynomial(refined, alpha)
        except (PrecisionTooLow, ExfactorError) as exc:
            last = exc
            continue
        return NodeRecord(y1, poly, alpha)
    raise last if last is not None else PathFailure("no usable interpolation node found")


def _factor_part_once(
    P: BivarPolyZ, rng: RngState, stats: RunStats, opts: FactorizeOptions, boost: int
) -> list[BivarPolyZ]:
    y0 = _fresh_valid_node(P, "y", rng)
    x0 = _fresh_valid_node(P, "x", rng)
    f0 = primitive_from_rational(specialize(P, "y", y0))
    g0 = primitive_from_rational(specialize(P, "x", x0))

    groups_by_side = {}
    roots_by_side = {}
    for side, poly in (("x", f0), ("y", g0)):
        d = poly.degree
        H = height_bound(poly)
        s = required_bits(d, H)
        target = _grouping_target_bits(d, s) * boost
        if target > opts.max_bits:
            raise PrecisionTooLow(f"target {target} bits exceeds --max-bits {opts.max_bits}")
        stats.max_precision_bits = max(stats.max_precision_bits, target)
        roots, _ = _solve_with_fresh_angles(poly, rng, target)
        groups, _ = _group_with_height_retry(roots, d, H)
        prod = UniPolyZ.const(1)
        for g in groups:
            prod = prod * g.min_poly
        if prod != poly:
            raise InconsistentGrouping(f"{side}-side grouping does not multiply back")
        groups_by_side[side] = groups
        roots_by_side[side] = roots

    x_groups = groups_by_side["x"]
    if len(x_groups) == 1:
        return [P]

    detect_degrees(
        P,
        x_groups,
        roots_by_side["x"],
        groups_by_side["y"],
        roots_by_side["y"],
        x0,
        y0,
        rng.gamma(),
        TrackerConfig(gamma_angle=rng.angle()),
    )

    factors: list[BivarPolyZ] = []
    for grp in x_groups:
        g = _reconstruct_factor(P, grp, roots_by_side["x"], y0, rng, stats, opts, boost)
        exact_divide(P, g)  # raises NotDivisible on any reconstruction slip
        factors.append(g)

    prod = BivarPolyZ.const(1)
    for g in factors:
        prod = prod * g
    if prod != P:
        raise Inconsistent("factor product does not reproduce the square-free part")
    return factors


def _factor_part(
    P: BivarPolyZ, rng: RngState, stats: RunStats, opts: FactorizeOptions
) -> list[BivarPolyZ]:
    diagnostics: list[str] = []
    for attempt in range(opts.max_restarts + 1):
        try:
            return _factor_part_once(P, rng, stats, opts, boost=2**attempt)
        except ExfactorError as exc:
            diagnostics.append(f"attempt {attempt}: {type(exc).__name__}: {exc}")
            stats.retries += 1
    raise FactorizationFailed(
        "restarts exhausted for part "
        f"{sorted(P.terms.items())}; stages: " + " | ".join(diagnostics)
    )


def factorize(F: BivarPolyZ, seed: int, opts: FactorizeOptions | None = None) -> FactorizationResult:
    """Exact irreducible factorization over Q; never returns an unverified answer."""
    if opts is None:
        opts = FactorizeOptions()
    if F.is_zero:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    start = time.perf_counter()
    stats = RunStats()
    rng = RngState(seed)

    if F.is_constant:
        result = FactorizationResult(Fraction(F.terms[(0, 0)]), (), stats, seed)
        stats.wall_time = time.perf_counter() - start
        return result

    work = F.swap_vars() if opts.swap_vars else F
    content, units, parts = reduce_input(work)

    collected: list[tuple[BivarPolyZ, int]] = []
    diagnostics: list[str] = []
    for u, mult in units:
        if u.degree_pair in ((1, 0), (0, 1)) and len(u.terms) == 1:
            collected.append((u, mult))
            continue
        var = "x" if u.deg("y") == 0 else "y"
        p = _as_unipoly(u, var)
        done = False
        for attempt in range(opts.max_restarts + 1):
            try:
                for g in _factor_univariate_part(p, var, rng, stats, opts, boost=2**attempt):
                    collected.append((g, mult))
                done = True
                break
            except ExfactorError as exc:
                diagnostics.append(f"univariate attempt {attempt}: {type(exc).__name__}: {exc}")
                stats.retries += 1
        if not done:
            raise FactorizationFailed("; ".join(diagnostics))

    for part, mult in parts:
        for g in _factor_part(part, rng, stats, opts):
            collected.append((g, mult))

    if opts.swap_vars:
        collected = [(g.swap_vars().primitive(), m) for g, m in collected]
    collected.sort(key=lambda gm: _canonical_key(gm[0]))
    result = FactorizationResult(content, tuple(collected), stats, seed)
    if not verify(F, result):
        raise FactorizationFailed("internal verification failed; no answer returned")
    stats.wall_time = time.perf_counter() - start
    return result
