"""Single-RE constellation group design.

A constellation group is the set of d_f M-point sub-constellations that
collide on one resource element. The sums of one point per sub-constellation
form the superimposed constellation whose union-bound SER is the design
objective. ``optimize_group`` minimizes that objective with a multi-start
sequential quadratic programming descent; ``baseline_group`` builds the
classical alternative of one base constellation under d_f distinct rotations.

Each sub-constellation is normalized to unit average power, so radii may
exceed 1 after normalization; Es in the SNR convention refers to this unit
per-user-per-RE energy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import channels
from .errors import ConstructionError, ValidationError

# Superimposed points closer than this (squared) are treated as coincident,
# which breaks unique decodability at the RE.
MIN_SUP_SEPARATION = 1e-4

_POWER_TOL = 1e-9


@dataclass(frozen=True)
class ConstellationGroup:
    """d_f sub-constellations of M complex points sharing one RE."""

    points: np.ndarray  # shape (d_f, M)

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=complex)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 2:
            raise ValidationError("group shape", "points must be d_f x M with M >= 2")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def d_f(self) -> int:
        return self.points.shape[0]

    @property
    def M(self) -> int:
        return self.points.shape[1]

    def sub_power(self) -> np.ndarray:
        """Average power of each sub-constellation."""
        return np.mean(np.abs(self.points) ** 2, axis=1)

    def superimposed(self) -> np.ndarray:
        """All M^d_f sums, first sub-constellation varying fastest."""
        idx = np.arange(self.M**self.d_f)
        acc = np.zeros(idx.size, dtype=complex)
        for v in range(self.d_f):
            acc += self.points[v, (idx // (self.M**v)) % self.M]
        return acc

    def min_sup_distance(self) -> float:
        """Smallest squared distance between distinct superimposed sums."""
        c = self.superimposed()
        iu, ju = np.triu_indices(c.size, k=1)
        return float((np.abs(c[iu] - c[ju]) ** 2).min())

    def validate(self, min_separation: float = MIN_SUP_SEPARATION) -> None:
        power = self.sub_power()
        if not np.allclose(power, 1.0, atol=1e-6):
            raise ValidationError("power normalization",
                                  f"sub-constellation powers {power} differ from 1")
        if self.min_sup_distance() <= min_separation:
            raise ValidationError("unique decodability",
                                  "superimposed points are not pairwise separated")


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iterations: int = 200
    gradient_tolerance: float = 1e-10
    constraint_tolerance: float = 1e-8
    design_snr_db: float = 16.0
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValidationError("restarts", "restarts must be >= 1")
        if self.gradient_tolerance <= 0 or self.constraint_tolerance <= 0:
            raise ValidationError("tolerance", "tolerances must be > 0")


def normalize_group(points: np.ndarray) -> np.ndarray:
    """Scale each sub-constellation to unit average power."""
    points = np.asarray(points, dtype=complex)
    rms = np.sqrt(np.mean(np.abs(points) ** 2, axis=1, keepdims=True))
    if np.any(rms == 0):
        raise ValidationError("power normalization", "a sub-constellation is all zero")
    return points / rms


def qpsk() -> np.ndarray:
    """Unit-power QPSK, counter-clockwise from the first quadrant."""
    return np.exp(1j * (np.pi / 4 + np.pi / 2 * np.arange(4)))


def objective_ser(group: ConstellationGroup, spec: channels.ChannelSpec,
                  es_over_n0: float) -> float:
    """Union-bound SER of the superimposed constellation at one RE.

    (1/M^d_f) * sum over ordered pairs of distinct superimposed points of
    the channel MGF factor at squared distance |c_i - c_j|^2. Smooth in
    the 2*d_f*M polar parameters (coincident points give factor 1).
    """
    c = group.superimposed()
    d2 = np.abs(c[:, None] - c[None, :]) ** 2
    fac = channels.pair_factor(spec, d2, es_over_n0)
    np.fill_diagonal(fac, 0.0)
    return float(fac.sum()) / c.size


def objective_ser_polar(r: np.ndarray, theta: np.ndarray, spec, es_over_n0):
    """Objective and its gradient with respect to (r, theta).

    Returns (value, d/dr, d/dtheta), each gradient shaped like ``r``.
    """
    pts = r * np.exp(1j * theta)
    d_f, M = pts.shape
    N = M**d_f
    idx = np.arange(N)
    digits = np.stack([(idx // (M**v)) % M for v in range(d_f)])  # (d_f, N)
    c = np.zeros(N, dtype=complex)
    for v in range(d_f):
        c += pts[v, digits[v]]

    delta = c[:, None] - c[None, :]
    d2 = np.abs(delta) ** 2
    gb = channels.gamma_bar(spec, es_over_n0)
    fac = channels.mgf_neg(spec, d2 / 4.0, gb)
    np.fill_diagonal(fac, 0.0)
    value = float(fac.sum()) / N

    gprime = channels.mgf_neg_ds(spec, d2 / 4.0, gb) / 4.0  # dG/d(d2)
    rowsum = (gprime * np.conj(delta)).sum(axis=1)  # diagonal terms vanish
    grad_r = np.zeros_like(r)
    grad_t = np.zeros_like(theta)
    for v in range(d_f):
        for m in range(M):
            s = rowsum[digits[v] == m].sum()
            grad_r[v, m] = 4.0 / N * np.real(np.exp(1j * theta[v, m]) * s)
            grad_t[v, m] = -4.0 / N * np.imag(pts[v, m] * s)
    return value, grad_r, grad_t


def baseline_group(M: int, d_f: int, base, angles) -> ConstellationGroup:
    """Group of one base constellation under d_f distinct rotations.

    Output is power-normalized identically to ``optimize_group`` results.
    """
    base = np.asarray(base, dtype=complex)
    if base.ndim != 1 or base.size != M:
        raise ValidationError("base constellation", f"base must have {M} points")
    angles = np.asarray(angles, dtype=float)
    if angles.size != d_f:
        raise ValidationError("rotation count", f"need {d_f} angles")
    wrapped = np.sort(np.mod(angles, 2 * np.pi))
    gaps = np.diff(np.concatenate([wrapped, [wrapped[0] + 2 * np.pi]]))
    if np.any(np.abs(gaps) < 1e-12) and d_f > 1:
        raise ValidationError("distinct rotations", "angles must be distinct modulo 2*pi")
    pts = base[None, :] * np.exp(1j * angles)[:, None]
    return ConstellationGroup(normalize_group(pts))


def rotated_qpsk_group(d_f: int) -> ConstellationGroup:
    """Reference rotated-QPSK group with evenly spread rotations.

    QPSK differences repeat with period pi/2, so the d_f rotations are
    spread evenly over [0, pi/2).
    """
    angles = np.arange(d_f) * (np.pi / 2) / d_f
    return baseline_group(4, d_f, qpsk(), angles)


def optimize_group(M: int, d_f: int, spec: channels.ChannelSpec,
                   cfg: OptimizerConfig | None = None) -> ConstellationGroup:
    """Multi-start constrained descent on the superimposed SER bound.

    Each restart draws polar-uniform points, projects them to unit average
    power per sub-constellation, and runs an SQP descent with the power
    equality constraints and the analytic gradient. The best feasible,
    uniquely-decodable result over all restarts is returned; reruns with
    the same config are identical.
    """
    if M < 2 or d_f < 1:
        raise ValidationError("group shape", "need M >= 2 and d_f >= 1")
    cfg = cfg or OptimizerConfig()
    es_over_n0 = 10.0 ** (cfg.design_snr_db / 10.0)
    n = d_f * M

    def unpack(x):
        return x[:n].reshape(d_f, M), x[n:].reshape(d_f, M)

    def fun(x):
        r, t = unpack(x)
        value, gr, gt = objective_ser_polar(r, t, spec, es_over_n0)
        return value, np.concatenate([gr.ravel(), gt.ravel()])

    constraints = []
    for v in range(d_f):
        def c_fun(x, v=v):
            r, _ = unpack(x)
            return np.mean(r[v] ** 2) - 1.0

        def c_jac(x, v=v):
            r, _ = unpack(x)
            g = np.zeros_like(x)
            g[v * M:(v + 1) * M] = 2.0 * r[v] / M
            return g

        constraints.append({"type": "eq", "fun": c_fun, "jac": c_jac})

    bounds = [(0.0, np.sqrt(M))] * n + [(None, None)] * n

    best = None
    any_converged = False
    for restart in range(cfg.restarts):
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(restart,)))
        r0 = rng.uniform(0.05, 1.0, size=(d_f, M))
        t0 = rng.uniform(0.0, 2 * np.pi, size=(d_f, M))
        r0 *= np.sqrt(M / (r0**2).sum(axis=1, keepdims=True))
        x0 = np.concatenate([r0.ravel(), t0.ravel()])

        res = minimize(fun, x0, jac=True, method="SLSQP", bounds=bounds,
                       constraints=constraints,
                       options={"maxiter": cfg.max_iterations,
                                "ftol": cfg.gradient_tolerance})
        any_converged = any_converged or bool(res.success)

        # the init stays a candidate so a restart never ends worse than
        # where it started
        for x in (res.x, x0):
            r, t = unpack(x)
            pts = normalize_group(r * np.exp(1j * np.mod(t, 2 * np.pi)))
            group = ConstellationGroup(pts)
            if group.min_sup_distance() <= MIN_SUP_SEPARATION:
                continue
            value = objective_ser(group, spec, es_over_n0)
            if best is None or value < best[0]:
                best = (value, restart, group)

    if best is None:
        raise ConstructionError("no restart produced a uniquely decodable group")
    if not any_converged:
        warnings.warn("optimizer hit max_iterations in every restart; "
                      "returning best point found", RuntimeWarning)
    return best[2]
