"""Root transport between specialization nodes and factor-degree detection.

Transport follows f(x, y(t)) = 0 along the closed-form arc
y(t) = ((1-t) y0 + t g y1) / ((1-t) + t g), whose denominator cannot vanish
on [0, 1] for non-real g, so only x is tracked. Degree detection tracks the
genuine two-equation system pairing f with a moving linear constraint and
matches each endpoint to a root group of the other specialization.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PathFailure, UnmatchedEndpoint
from .polynomials import BivarPolyZ
from .precision import PrecComplex
from .rootsolve import ApproxRoot, TrackerConfig
from .minpoly import RootGroup

__all__ = ["CurvePath", "transport_group", "detect_degrees"]


@dataclass(frozen=True)
class CurvePath:
    start: tuple[PrecComplex, Fraction]
    end: tuple[PrecComplex, PrecComplex]
    gamma: PrecComplex
    status: str  # "converged" | "failed"


def _grid(F: BivarPolyZ) -> list[tuple[int, ...]]:
    return [p.coeffs for p in F.to_x_coeffs()]


def _eval_grid(grid, x, y):
    acc = x * 0
    for row in reversed(grid):
        ry = x * 0
        for c in reversed(row):
            ry = ry * y + c
        acc = acc * x + ry
    return acc


class _StepFailed(Exception):
    pass


def _transport_path(grids, y0c, y1c, gamma, x_start, cfg: TrackerConfig):
    f, fx, fy = grids

    def arc(t):
        den = (1.0 - t) + t * gamma
        y = ((1.0 - t) * y0c + t * gamma * y1c) / den
        dy = gamma * (y1c - y0c) / (den * den)
        return y, dy

    def velocity(x, t):
        y, dy = arc(t)
        den = _eval_grid(fx, x, y)
        if den == 0:
            raise _StepFailed
        return -_eval_grid(fy, x, y) * dy / den

    def correct(x, t):
        y, _ = arc(t)
        for _ in range(cfg.max_corrector_iters):
            den = _eval_grid(fx, x, y)
            if den == 0:
                return None
            delta = _eval_grid(f, x, y) / den
            x = x - delta
            if abs(delta) <= cfg.corrector_tol * max(1.0, abs(x)):
                return x
        return None

    x, t, h = x_start, 0.0, cfg.initial_step
    while t < 1.0:
        h = min(h, 1.0 - t)
        try:
            k1 = velocity(x, t)
            k2 = velocity(x + 0.5 * h * k1, t + 0.5 * h)
            k3 = velocity(x + 0.5 * h * k2, t + 0.5 * h)
            k4 = velocity(x + h * k3, t + h)
            pred = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            corr = correct(pred, t + h)
        except (_StepFailed, ZeroDivisionError, OverflowError):
            corr = None
        if corr is None:
            h *= 0.5
            if h < cfg.min_step:
                raise PathFailure(f"transport step size underflow at t={t:.6f}")
            continue
        x, t = corr, t + h
        h = min(h * 1.5, cfg.initial_step)

    for _ in range(8):
        den = _eval_grid(fx, x, y1c)
        if den == 0:
            break
        delta = _eval_grid(f, x, y1c) / den
        x = x - delta
        if abs(delta) <= 1e-14 * max(1.0, abs(x)):
            break
    return x


def transport_group(
    f: BivarPolyZ,
    roots: list[ApproxRoot],
    y0: Fraction,
    y1: Fraction,
    gamma: PrecComplex,
    cfg: TrackerConfig,
) -> list[ApproxRoot]:
    """Carry a group's roots of f(., y0) to f(., y1); output i follows input i."""
    y0, y1 = Fraction(y0), Fraction(y1)
    if y0 == y1:
        return list(roots)
    grids = (_grid(f), _grid(f.derivative("x")), _grid(f.derivative("y")))
    y0c, y1c = complex(y0), complex(y1)
    gc = gamma.to_complex()
    norm = abs(max(f.terms.values(), key=abs)) * max(1, len(f.terms))
    out: list[ApproxRoot] = []
    for i, root in enumerate(roots):
        x_end = _transport_path(grids, y0c, y1c, gc, root.value.to_complex(), cfg)
        resid = abs(_eval_grid(grids[0], x_end, y1c))
        path = CurvePath(
            start=(root.value, y0),
            end=(PrecComplex.from_complex(x_end, 53), PrecComplex.from_complex(y1c, 53)),
            gamma=gamma,
            status="converged" if resid <= cfg.corrector_tol * norm else "failed",
        )
        if path.status != "converged":
            raise PathFailure(f"transport path {i} missed the target fiber (residual {resid:.3e})")
        den = _eval_grid(grids[1], x_end, y1c)
        est = abs(_eval_grid(grids[0], x_end, y1c) / den) if den != 0 else 1e-10
        err = 4 * Fraction(est) + Fraction(1, 2**48)
        out.append(ApproxRoot(path.end[0], err, root.path_index))
    return out


def _detect_path(grids, x0c, y0c, gamma, start_x, cfg: TrackerConfig):
    f, fx, fy = grids

    def g_val(x, y, t):
        return (1.0 - t) * (y - y0c) + t * gamma * (x - x0c)

    def velocity(x, y, t):
        if abs(x) > 1e9 or abs(y) > 1e9:
            # the path is escaping to infinity (endpoint count drops at t=1)
            raise _StepFailed
        gt = -(y - y0c) + gamma * (x - x0c)
        det = _eval_grid(fx, x, y) * (1.0 - t) - _eval_grid(fy, x, y) * (t * gamma)
        if det == 0:
            raise _StepFailed
        # J * (x', y') = -(f_t, g_t) with f_t = 0
        vx = _eval_grid(fy, x, y) * gt / det
        vy = -_eval_grid(fx, x, y) * gt / det
        return vx, vy

    def correct(x, y, t):
        for _ in range(cfg.max_corrector_iters):
            fv = _eval_grid(f, x, y)
            gv = g_val(x, y, t)
            a = _eval_grid(fx, x, y)
            b = _eval_grid(fy, x, y)
            c = t * gamma
            d = 1.0 - t
            det = a * d - b * c
            if det == 0:
                return None
            dx = (fv * d - b * gv) / det
            dy = (a * gv - fv * c) / det
            x, y = x - dx, y - dy
            if max(abs(dx), abs(dy)) <= cfg.corrector_tol * max(1.0, abs(x), abs(y)):
                return x, y
        return None

    x, y, t, h = start_x, y0c, 0.0, cfg.initial_step
    while t < 1.0:
        h = min(h, 1.0 - t)
        try:
            k1x, k1y = velocity(x, y, t)
            k2x, k2y = velocity(x + 0.5 * h * k1x, y + 0.5 * h * k1y, t + 0.5 * h)
            k3x, k3y = velocity(x + 0.5 * h * k2x, y + 0.5 * h * k2y, t + 0.5 * h)
            k4x, k4y = velocity(x + h * k3x, y + h * k3y, t + h)
            px = x + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
            py = y + (h / 6.0) * (k1y + 2 * k2y + 2 * k3y + k4y)
            corr = correct(px, py, t + h)
        except (_StepFailed, ZeroDivisionError, OverflowError):
            corr = None
        if corr is None:
            h *= 0.5
            if h < cfg.min_step:
                raise PathFailure(f"degree-detection step size underflow at t={t:.6f}")
            continue
        (x, y), t = corr, t + h
        h = min(h * 1.5, cfg.initial_step)

    # at t=1 the constraint pins x = x0; the endpoint must already sit there
    if abs(x - x0c) > 1e-5 * max(1.0, abs(x0c)) or abs(y) > 1e8:
        raise PathFailure("endpoint did not converge onto the x = x0 fiber")
    y_pre = y
    for _ in range(8):
        den = _eval_grid(fy, x0c, y)
        if den == 0:
            break
        delta = _eval_grid(f, x0c, y) / den
        y = y - delta
        if abs(delta) <= 1e-14 * max(1.0, abs(y)):
            break
    if abs(y - y_pre) > 1e-4 * max(1.0, abs(y_pre)):
        raise PathFailure("endpoint polish jumped; path did not truly converge")
    return x, y


def detect_degrees(
    f: BivarPolyZ,
    x_groups: list[RootGroup],
    x_roots: list[ApproxRoot],
    y_groups: list[RootGroup],
    y_roots: list[ApproxRoot],
    x0: Fraction,
    y0: Fraction,
    gamma: PrecComplex,
    cfg: TrackerConfig,
) -> list[tuple[int, int]]:
    """Fill each x-group's degree pair by connecting it to a unique y-group.

    One representative root per x-group is tracked on the two-equation
    system from (x_k, y0) to (x0, y*); y* selects the matching y-group.
    """
    if len(x_groups) != len(y_groups):
        raise UnmatchedEndpoint(
            f"{len(x_groups)} x-groups vs {len(y_groups)} y-groups; node pair is inconsistent"
        )
    grids = (_grid(f), _grid(f.derivative("x")), _grid(f.derivative("y")))
    x0c, y0c = complex(Fraction(x0)), complex(Fraction(y0))
    gc = gamma.to_complex()

    y_vals = [r.value.to_complex() for r in y_roots]
    min_gap = min(
        (abs(a - b) for i, a in enumerate(y_vals) for b in y_vals[i + 1 :]),
        default=1.0,
    )
    tol = max(min_gap / 2, 2.0**-20)

    claimed: set[int] = set()
    matches: dict[int, int] = {}
    for gi, grp in enumerate(x_groups):
        # a path can escape to infinity when the factor has deg_x > deg_y;
        # another root of the same group then rides a converging path
        for idx in grp.root_indices:
            try:
                _, y_end = _detect_path(grids, x0c, y0c, gc, x_roots[idx].value.to_complex(), cfg)
            except PathFailure:
                continue
            best = min(range(len(y_vals)), key=lambda j: abs(y_end - y_vals[j]))
            if abs(y_end - y_vals[best]) > tol:
                continue
            target = next(j for j, yg in enumerate(y_groups) if best in yg.root_indices)
            if target in claimed:
                raise UnmatchedEndpoint(f"y-group {target} claimed by two x-groups")
            claimed.add(target)
            matches[gi] = target
            break

    unresolved = [gi for gi in range(len(x_groups)) if gi not in matches]
    if len(unresolved) == 1:
        # the bijection forces the last pairing
        leftover = next(j for j in range(len(y_groups)) if j not in claimed)
        matches[unresolved[0]] = leftover
    elif unresolved:
        raise UnmatchedEndpoint(f"{len(unresolved)} x-groups found no converging endpoint")

    pairs: list[tuple[int, int]] = []
    for gi, grp in enumerate(x_groups):
        pair = (len(grp.root_indices), len(y_groups[matches[gi]].root_indices))
        grp.degree_pair = pair
        pairs.append(pair)

    if sum(a for a, _ in pairs) != f.deg("x") or sum(b for _, b in pairs) != f.deg("y"):
        raise UnmatchedEndpoint("degree pairs do not sum to the degree of f")
    return pairs
