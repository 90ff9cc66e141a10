"""Numerical tracking of the configuration curve of a closed 6R linkage.

Joint ``k`` is rotated by the angle ``theta_k`` through the factor
``cos(theta_k/2) - sin(theta_k/2) h_k``, which is the projective joint parameter
``(cos(theta_k/2) : sin(theta_k/2))``.  This angle chart covers the whole real
projective line, so no chart switching is needed; ``theta = 0`` is the point at
infinity, i.e. the identity configuration in which every linkage closes.

Everything here is float arithmetic.  A tracked curve is a numerical witness of
mobility, not a proof.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .linkage import (DHParams, Linkage6R, LinkageError, closing_discrepancy,
                      lines_from_dh)

log = logging.getLogger(__name__)

TWO_PI = 2 * math.pi


def _dq_mul(a, b):
    """Product of dual quaternions stored as length-8 arrays."""
    def q(x, y):
        return np.array([
            x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3],
            x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2],
            x[0] * y[2] - x[1] * y[3] + x[2] * y[0] + x[3] * y[1],
            x[0] * y[3] + x[1] * y[2] - x[2] * y[1] + x[3] * y[0],
        ])
    return np.concatenate([q(a[:4], b[:4]), q(a[:4], b[4:]) + q(a[4:], b[:4])])


_ONE = np.eye(8)[0]


def _axes(L: Linkage6R):
    if isinstance(L, DHParams):
        raise TypeError("track a Linkage6R; use assemble() to place DH parameters")
    return [np.array([float(x) for x in L.h(k).coeffs]) for k in range(1, 7)]


def _factors(H, theta):
    return [math.cos(a / 2) * _ONE - math.sin(a / 2) * h for a, h in zip(theta, H)]


def _product(G):
    out = _ONE
    for g in G:
        out = _dq_mul(out, g)
    return out


def closure_system(L, theta):
    """The 7 non-scalar coordinates of the closure product, normalized.

    ``theta`` holds the six joint angles.  Every factor is a unit dual
    quaternion, so the product's primal part has norm 1 and equals the largest
    coordinate magnitude whenever the configuration closes; dividing by that
    norm keeps the system smooth.  The result is the zero vector exactly when
    the configuration closes.
    """
    return _system(_axes(L), theta)[0]


def _system(H, theta):
    """Residual and 7x6 Jacobian of the closure system at ``theta``."""
    G = _factors(H, theta)
    left = [_ONE]
    for g in G:
        left.append(_dq_mul(left[-1], g))
    right = [_ONE]
    for g in reversed(G):
        right.append(_dq_mul(g, right[-1]))
    right.reverse()
    F = left[-1]
    scale = np.linalg.norm(F[:4])
    J = np.empty((7, 6))
    for k in range(6):
        dg = -0.5 * _dq_mul(H[k], G[k])
        J[:, k] = _dq_mul(_dq_mul(left[k], dg), right[k + 1])[1:]
    return F[1:] / scale, J / scale


def closure_jacobian(L, theta):
    """Jacobian of :func:`closure_system` with respect to the six joint angles."""
    return _system(_axes(L), theta)[1]


def _rank(J, rel=1e-8):
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[0] == 0:
        return 0, math.inf
    r = int(np.sum(sv > rel * sv[0]))
    cond = sv[0] / sv[r - 1] if r else math.inf
    return r, cond


def _tangent(J):
    _, sv, vt = np.linalg.svd(J)
    return vt[-1], sv


@dataclass(frozen=True)
class TrackerConfig:
    """Settings for :func:`track`.

    ``step`` is the driver increment in radians and ``min_step`` the smallest
    allowed fraction of it.  ``tol`` bounds the residual of reported samples.
    """

    step: float = 0.05
    max_steps: int = 400
    tol: float = 1e-9
    newton_tol: float = 1e-11
    max_newton: int = 25
    min_step: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        for name in ("step", "max_steps", "tol", "newton_tol", "max_newton", "min_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"TrackerConfig.{name} must be positive")


@dataclass(frozen=True)
class MotionSample:
    step: int
    theta: tuple
    residual: float
    jac_rank: int
    condition: float
    driver: int

    @property
    def t1(self):
        return self.theta[0]


@dataclass
class TrackResult:
    """Samples plus the reason tracking stopped."""

    samples: list = field(default_factory=list)
    stop: str = ""
    skipped: int = 0
    initial_rank: int = 6
    extent: float = 0.0

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, i):
        return self.samples[i]


def _correct(H, theta, driver, cfg):
    """Gauss-Newton on the five non-driver angles; returns (theta, residual) or None."""
    free = [k for k in range(6) if k != driver]
    theta = theta.copy()
    for _ in range(cfg.max_newton):
        r, J = _system(H, theta)
        res = np.max(np.abs(r))
        if res < cfg.newton_tol:
            return theta, res
        delta, *_ = np.linalg.lstsq(J[:, free], -r, rcond=None)
        theta[free] += delta
    return None


def _wrapped_distance(a, b):
    d = np.mod(a - b + math.pi, TWO_PI) - math.pi
    return float(np.max(np.abs(d)))


def _choose_driver(tangent, current):
    big = np.max(np.abs(tangent))
    if abs(tangent[current]) >= 0.25 * big:
        return current
    # prefer low joint numbers among the components that do move
    for k in range(6):
        if abs(tangent[k]) >= 0.5 * big:
            return k
    return int(np.argmax(np.abs(tangent)))


def track(L: Linkage6R, cfg: TrackerConfig = TrackerConfig()) -> TrackResult:
    """Follow the real configuration curve through the identity configuration.

    Starts at ``theta = 0`` and steps the driver angle (joint 1 unless it is
    locally constant along the curve) by ``cfg.step``.  Each prediction along
    the curve tangent is corrected by Gauss-Newton on the other five angles;
    failed corrections halve the step.  A correction is accepted only when the
    residual itself drops below ``cfg.newton_tol``.  Stops at the step budget,
    when the curve returns to the start, or when the step falls below
    ``cfg.min_step * cfg.step``.
    """
    H = _axes(L)
    theta = np.zeros(6)
    r, J = _system(H, theta)
    rank, cond = _rank(J)
    result = TrackResult(initial_rank=rank)
    if rank >= 6:
        result.stop = "no motion found at this resolution"
        return result
    tangent, _ = _tangent(J)
    driver = _choose_driver(tangent, 0)
    if tangent[driver] < 0:
        tangent = -tangent
    result.samples.append(MotionSample(0, tuple(theta), float(np.max(np.abs(r))), rank, cond, driver + 1))
    h = cfg.step
    left_start = False
    for n in range(1, cfg.max_steps + 1):
        while True:
            pred = theta + tangent * (h / abs(tangent[driver]))
            got = _correct(H, pred, driver, cfg)
            if got is not None and _wrapped_distance(got[0], theta) < 4 * h / abs(tangent[driver]) + 1e-9:
                break
            result.skipped += 1
            log.debug("corrector failed at step %d with h=%g", n, h)
            h /= 2
            if h < cfg.min_step * cfg.step:
                result.stop = "Newton failure"
                return result
        new, res = got
        _, J = _system(H, new)
        rank, cond = _rank(J)
        nt, _ = _tangent(J)
        if nt @ tangent < 0:
            nt = -nt
        tangent, theta = nt, new
        driver = _choose_driver(tangent, driver)
        result.samples.append(MotionSample(n, tuple(theta), float(res), rank, cond, driver + 1))
        h = min(cfg.step, 2 * h)
        away = _wrapped_distance(theta, 0 * theta)
        result.extent = max(result.extent, away)
        left_start = left_start or away > 3 * cfg.step
        if left_start and away < 0.75 * cfg.step:
            result.stop = "returned to start"
            return result
    result.stop = "step budget"
    return result


@dataclass(frozen=True)
class MobilityWitness:
    """Summary of a tracking run.  A numerical witness, not a proof."""

    label: str
    samples: int
    max_residual: float
    rank_counts: dict
    rank5_fraction: float
    initial_rank: int
    stop: str
    extent: float = 0.0

    @property
    def mobile(self):
        return self.label.startswith("mobility")


def mobility_witness(L: Linkage6R, cfg: TrackerConfig = TrackerConfig()) -> MobilityWitness:
    H = _axes(L)
    rank0, _ = _rank(_system(H, np.zeros(6))[1])
    if rank0 <= 3:
        return MobilityWitness("higher mobility", 0, 0.0, {rank0: 1}, 0.0, rank0,
                               "closure Jacobian rank <= 3 at the identity")
    res = track(L, cfg)
    counts = {}
    for s in res.samples:
        counts[s.jac_rank] = counts.get(s.jac_rank, 0) + 1
    n = len(res.samples)
    frac = counts.get(5, 0) / n if n else 0.0
    moved = res.extent > 3 * cfg.step
    if moved and frac >= 0.9:
        label = "mobility-1 witness (numerical)"
    elif moved:
        label = "motion found, rank not 5 along the curve"
    else:
        label = "no motion found at this resolution"
    maxres = max((s.residual for s in res.samples), default=0.0)
    return MobilityWitness(label, n, maxres, counts, frac, rank0, res.stop, res.extent)


def assemble(P: DHParams, seed=0, tries=50, tol=1e-11) -> Linkage6R:
    """Place axes realising all of ``P``, closing the chain numerically.

    Solves for the joint angles 2..5 of :func:`lines_from_dh` so that the
    closing invariants ``c_6, b_6, s_6, s_1`` match.  Raises
    :class:`LinkageError` if no real assembly is found.
    """
    P = P.to_float()
    P.validate()
    scale = max(1.0, *(abs(x) for x in P.b + P.s))

    def residual(a):
        L = lines_from_dh(P, list(a))
        d = closing_discrepancy(P, L)
        out = np.array([d["c6"], d["b6"] / scale, d["s6"] / scale, d["s1"] / scale])
        return np.where(np.isfinite(out), out, 1e3)

    rng = np.random.default_rng(seed)
    best = None
    for _ in range(tries):
        sol = least_squares(residual, rng.uniform(-math.pi, math.pi, 4), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        err = np.max(np.abs(residual(sol.x)))
        if best is None or err < best[0]:
            best = (err, sol.x)
        if err < tol:
            return lines_from_dh(P, list(sol.x))
    raise LinkageError(f"no real assembly found (best closing error {best[0]:.3g})")
