"""All complex roots of an exact univariate polynomial, to any precision.

Tracking runs a total-degree homotopy from the roots of unity, twisted by a
random unit complex constant so paths stay nonsingular for t in [0, 1).
Tracking itself works in hardware doubles; certified accuracy comes from
the Newton refinement stage, which escalates working precision until the
correction magnitude is below the requested bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import pi

from mpmath import mp, mpc, mpf

from .errors import NotConverging, NotSquareFree, PathFailure, ZeroPolynomial
from .polynomials import UniPolyZ, gcd_unipoly
from .precision import PrecComplex, mpf_to_fraction

__all__ = ["ApproxRoot", "TrackerConfig", "start_roots", "solve_univariate", "newton_refine"]

_COINCIDENCE_TOL = 2.0**-20
_RETRACK_PREC = 212  # quadrupled 53-bit tracking precision


@dataclass(frozen=True)
class ApproxRoot:
    """An approximate root with a bound on its distance to the exact root."""

    value: PrecComplex
    err_bound: Fraction
    path_index: int

    def __post_init__(self):
        if self.err_bound < 0:
            raise ValueError("err_bound must be nonnegative")


@dataclass(frozen=True)
class TrackerConfig:
    initial_step: float = 0.05
    min_step: float = 1e-12
    corrector_tol: float = 1e-10
    max_corrector_iters: int = 3
    gamma_angle: float = 0.7853981633974483  # pi/4 unless the caller draws one

    def __post_init__(self):
        if not (0 < self.min_step <= self.initial_step < 1):
            raise ValueError("need 0 < min_step <= initial_step < 1")
        if self.max_corrector_iters < 1:
            raise ValueError("max_corrector_iters must be >= 1")
        if not -pi <= self.gamma_angle <= pi:
            raise ValueError("gamma_angle must lie in [-pi, pi]")


def start_roots(d: int, prec_bits: int = 53) -> list[PrecComplex]:
    """The d-th roots of unity e^(2*pi*i*k/d), k = 0..d-1, at working precision."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    out = []
    with mp.workprec(prec_bits):
        for k in range(d):
            arg = mpf(2 * k) / d
            out.append(PrecComplex(mp.cospi(arg), mp.sinpi(arg), prec_bits))
    return out


def _horner(coeffs, z):
    acc = z * 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


class _StepFailed(Exception):
    pass


def _track_total_degree(coeffs, dcoeffs, d, gamma, z0, cfg: TrackerConfig):
    """One homotopy path of t*f(z) + gamma*(1-t)*(z^d - 1) from t=0 to t=1."""

    def h_parts(z, t):
        u = 1.0 - t
        hz = t * _horner(dcoeffs, z) + gamma * u * d * z ** (d - 1)
        ht = _horner(coeffs, z) - gamma * (z**d - 1)
        return hz, ht

    def velocity(z, t):
        hz, ht = h_parts(z, t)
        if hz == 0:
            raise _StepFailed
        return -ht / hz

    def correct(z, t):
        for _ in range(cfg.max_corrector_iters):
            u = 1.0 - t
            hv = t * _horner(coeffs, z) + gamma * u * (z**d - 1)
            hz = t * _horner(dcoeffs, z) + gamma * u * d * z ** (d - 1)
            if hz == 0:
                return None
            delta = hv / hz
            z = z - delta
            if abs(delta) <= cfg.corrector_tol * max(1.0, abs(z)):
                return z
        return None

    z, t, h = z0, 0.0, cfg.initial_step
    while t < 1.0:
        h = min(h, 1.0 - t)
        try:
            k1 = velocity(z, t)
            k2 = velocity(z + 0.5 * h * k1, t + 0.5 * h)
            k3 = velocity(z + 0.5 * h * k2, t + 0.5 * h)
            k4 = velocity(z + h * k3, t + h)
            pred = z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            corr = correct(pred, t + h)
        except (_StepFailed, ZeroDivisionError, OverflowError):
            corr = None
        if corr is None:
            h *= 0.5
            if h < cfg.min_step:
                raise PathFailure(f"step size underflow at t={t:.6f}")
            continue
        z, t = corr, t + h
        h = min(h * 1.5, cfg.initial_step)

    # polish against the target system itself
    for _ in range(8):
        fz = _horner(coeffs, z)
        dz = _horner(dcoeffs, z)
        if dz == 0:
            break
        delta = fz / dz
        z = z - delta
        if abs(delta) <= 1e-14 * max(1.0, abs(z)):
            break
    return z


def _track_path(p: UniPolyZ, gamma_angle: float, k: int, cfg: TrackerConfig, prec_bits: int = 53):
    # normalize the target to unit 2-norm so both homotopy ends are O(1);
    # scaling by a positive constant leaves the roots untouched
    d = p.degree
    norm2 = p.norm2_squared()
    if prec_bits <= 53:
        from math import sqrt

        scale = sqrt(float(norm2))
        coeffs = [c / scale for c in p.coeffs]
        dcoeffs = [c / scale for c in p.derivative().coeffs]
        start = start_roots(d)[k].to_complex()
        from cmath import exp as cexp

        gamma = cexp(1j * gamma_angle)
        z = _track_total_degree(coeffs, dcoeffs, d, gamma, start, cfg)
        val = PrecComplex.from_complex(z, 53)
    else:
        with mp.workprec(prec_bits):
            scale = mp.sqrt(mpf(norm2))
            coeffs = [mpf(c) / scale for c in p.coeffs]
            dcoeffs = [mpf(c) / scale for c in p.derivative().coeffs]
            start = start_roots(d, prec_bits)[k].to_mpc()
            gamma = mp.expjpi(mpf(gamma_angle) / mp.pi)
            z = _track_total_degree(coeffs, dcoeffs, d, gamma, start, cfg)
            val = PrecComplex.from_mpc(z, prec_bits)
    return val


def _rough_error(p: UniPolyZ, val: PrecComplex) -> Fraction:
    """Heuristic first-order error estimate |p(z)/p'(z)| at the value's precision."""
    with mp.workprec(val.prec_bits):
        z = val.to_mpc()
        fz = _horner(p.coeffs, z)
        dz = _horner(p.derivative().coeffs, z)
        if dz == 0:
            return Fraction(1)
        est = abs(fz / dz)
    return 4 * mpf_to_fraction(est) + Fraction(1, 2 ** (val.prec_bits - 4))


def solve_univariate(p: UniPolyZ, cfg: TrackerConfig, target_bits: int) -> list[ApproxRoot]:
    """All d roots of a square-free p, each certified to err_bound <= 2^-target_bits."""
    if p.is_zero or p.degree < 1:
        raise ZeroPolynomial("solve_univariate needs degree >= 1")
    if gcd_unipoly(p, p.derivative()).degree != 0:
        raise NotSquareFree("input has repeated roots")
    d = p.degree

    roots: list[ApproxRoot] = []
    for k in range(d):
        val = _track_path(p, cfg.gamma_angle, k, cfg)
        try:
            root = newton_refine(p, ApproxRoot(val, _rough_error(p, val), k), target_bits)
        except NotConverging:
            val = _track_path(p, cfg.gamma_angle, k, cfg, prec_bits=_RETRACK_PREC)
            try:
                root = newton_refine(p, ApproxRoot(val, _rough_error(p, val), k), target_bits)
            except NotConverging as exc:
                raise PathFailure(f"endpoint of path {k} does not refine") from exc
        roots.append(root)

    _check_distinct(p, roots, cfg)
    return roots


def _check_distinct(p: UniPolyZ, roots: list[ApproxRoot], cfg: TrackerConfig) -> None:
    d = len(roots)
    suspect: set[int] = set()
    vals = [r.value.to_complex() for r in roots]
    for i in range(d):
        for j in range(i + 1, d):
            if abs(vals[i] - vals[j]) < _COINCIDENCE_TOL:
                suspect.update((i, j))
    if not suspect:
        return
    # two paths may have jumped onto the same root; re-run them at quadrupled
    # tracker precision and compare with certified error bounds
    check_bits = 256
    refined: dict[int, ApproxRoot] = {}
    for k in sorted(suspect):
        val = _track_path(p, cfg.gamma_angle, k, cfg, prec_bits=_RETRACK_PREC)
        refined[k] = newton_refine(p, ApproxRoot(val, _rough_error(p, val), k), check_bits)
    for i in sorted(suspect):
        for j in sorted(suspect):
            if i >= j:
                continue
            a, b = refined[i], refined[j]
            gap2 = (a.value - b.value).abs_squared_fraction()
            lim = 2 * (a.err_bound + b.err_bound)
            if gap2 <= lim * lim:
                raise NotSquareFree(f"paths {i} and {j} persistently coincide")


def newton_refine(p: UniPolyZ, z: ApproxRoot, target_bits: int) -> ApproxRoot:
    """Refine z until err_bound <= 2^-target_bits, doubling working precision as needed.

    Requires the start value to lie in the quadratic-convergence basin
    (checked via |p * p''| < |p'|^2 at the start value).
    """
    if p.is_zero or p.degree < 1:
        raise ZeroPolynomial("newton_refine needs degree >= 1")
    coeffs = p.coeffs
    dcoeffs = p.derivative().coeffs
    ddcoeffs = p.derivative().derivative().coeffs

    wp = max(z.value.prec_bits, 64)
    with mp.workprec(wp):
        zv = z.value.to_mpc()
        fz = _horner(coeffs, zv)
        dfz = _horner(dcoeffs, zv)
        ddfz = _horner(ddcoeffs, zv)
        if dfz == 0 or abs(fz * ddfz) >= abs(dfz) ** 2:
            raise NotConverging("start value outside the quadratic basin")

    # bits of accuracy we can currently rely on
    acc = max(4, -_mag(z.err_bound)) if z.err_bound > 0 else wp - 8
    stale = 0
    while acc < target_bits + 2:
        wp = max(2 * acc + 64, 80)
        with mp.workprec(wp):
            fz = _horner(coeffs, zv)
            dfz = _horner(dcoeffs, zv)
            if dfz == 0:
                raise NotConverging("derivative vanished during refinement")
            delta = fz / dfz
            zv = zv - delta
            ad = abs(delta)
        if ad == 0:
            acc = wp - 8
            stale = 0
            continue
        new_acc = -mp.mag(ad)
        if new_acc <= acc:
            stale += 1
            if stale > 6:
                raise NotConverging("correction magnitude stopped shrinking")
        else:
            stale = 0
            acc = new_acc

    # certification step at full precision
    final_wp = max(target_bits + 64, wp)
    with mp.workprec(final_wp):
        fz = _horner(coeffs, zv)
        dfz = _horner(dcoeffs, zv)
        if dfz == 0:
            raise NotConverging("derivative vanished at certification")
        delta = fz / dfz
        zv = zv - delta
        ad = abs(delta)
        exact = _horner(coeffs, zv) == 0 and ad == 0
    if ad != 0 and mp.mag(ad) > -(target_bits + 2):
        raise NotConverging("could not certify the requested accuracy")
    err = Fraction(0) if exact else Fraction(1, 2**target_bits)
    return ApproxRoot(PrecComplex.from_mpc(zv, final_wp), err, z.path_index)


def _mag(q: Fraction) -> int:
    """ceil(log2(q)) for positive rationals, avoiding float under/overflow."""
    if q <= 0:
        raise ValueError("positive value required")
    return q.numerator.bit_length() - q.denominator.bit_length() + 1
