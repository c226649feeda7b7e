"""Geometric action machinery on the flat torus.

A physical S-matrix curve p -> (phi(p), theta(p)) can be generated as a
trajectory of an external potential V(phi, theta) on the flat torus with
metric g = diag(1,1)/2, traversed with a momentum-dependent lapse N(p):

    x''_a - kappa x'_a + N^2 dV/dx_a = 0,   kappa = N'/N,

where primes are d/dp and the inverse-metric factor 2 is folded into the
potential term (g^{ab} = 2 diag(1,1)).  Three exactly solvable families are
implemented:

* 3D zero-range models: V = A tan^2((phi + eps theta)/2) with
  A = |a0 a1| / ((|a0|+|a1|)^2 c1^2), lapse N = (c1/p)(sin phi - eps sin theta);
* the lambda = 1/4 range-correlated family with r = +2 a lambda in both
  channels: amplitude A/2, argument rescaled to (phi + eps theta)/4, lapse
  N = sqrt(2) c1 (phi' - eps theta');
* 2D models: V = -pi^2/(4 log^2(a0/a1) c1^2) tan^2((phi+theta)/2 + pi/2); the
  lapse is not assumed but recovered pointwise from the overdetermined
  trajectory equations (it comes out proportional to phi' - theta').

Momenta where the potential argument hits a tan singularity
(|cos| < 1e-6) or the lapse vanishes (|N| < 1e-10) are excluded from
residual evaluation and reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp

from . import ere
from .torus import Trajectory

__all__ = [
    "GeometricPotential",
    "EomResidualReport",
    "OverdeterminationReport",
    "AffineCurve",
    "epsilon_for",
    "potential_3d",
    "potential_lam14",
    "potential_2d",
    "lapse_3d",
    "construction_lapse",
    "inaffinity",
    "eom_residual",
    "overdetermination_2d",
    "integrate_affine",
    "affine_parameter_span",
    "first_integral",
    "galilean_rescale",
    "point_to_polyline_distance",
]

#: Exclusion thresholds for singular grid points (see module docstring).
COS_SINGULAR_TOL = 1e-6
LAPSE_SINGULAR_TOL = 1e-10


@dataclass(frozen=True)
class GeometricPotential:
    """V(phi, theta) = amplitude * tan^2(scale*(phi + epsilon*theta) + chi)."""

    amplitude: float
    epsilon: int
    scale: float
    chi: float
    c1: float = 1.0

    def __post_init__(self) -> None:
        if self.epsilon not in (+1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if self.scale not in (0.5, 0.25):
            raise ValueError("scale must be 1/2 or 1/4")
        if self.chi not in (0.0, math.pi / 2):
            raise ValueError("chi must be 0 or pi/2")
        if self.c1 == 0.0:
            raise ValueError("c1 must be nonzero")

    def argument(self, phi, theta):
        return self.scale * (np.asarray(phi) + self.epsilon * np.asarray(theta)) + self.chi

    def value(self, phi, theta):
        t = np.tan(self.argument(phi, theta))
        return (self.amplitude * t * t)[()]

    def gradient(self, phi, theta):
        """(dV/dphi, dV/dtheta); the theta component is epsilon times the phi one."""
        u = self.argument(phi, theta)
        sec2 = 1.0 / np.cos(u) ** 2
        g_phi = 2.0 * self.amplitude * self.scale * np.tan(u) * sec2
        return g_phi[()], (self.epsilon * g_phi)[()]

    def singular_mask(self, phi, theta, tol: float = COS_SINGULAR_TOL):
        """True where tan(argument) blows up (|cos| below tol)."""
        return np.abs(np.cos(self.argument(phi, theta))) < tol


def epsilon_for(a0: float, a1: float) -> int:
    """Sign convention of the potential argument: -1 for equal-sign lengths."""
    if a0 == 0.0 or a1 == 0.0:
        raise ValueError("scattering lengths must be nonzero")
    return -1 if a0 * a1 > 0.0 else +1


def potential_3d(a0: float, a1: float, c1: float = 1.0) -> GeometricPotential:
    """Exact geometric potential of the 3D zero-range (scattering-length) model."""
    if a0 == 0.0 or a1 == 0.0:
        raise ValueError("zero scattering length: trivial fixed point, no potential")
    if not (math.isfinite(a0) and math.isfinite(a1)):
        raise ValueError("potential requires finite scattering lengths")
    if c1 == 0.0:
        raise ValueError("c1 must be nonzero")
    amp = abs(a0 * a1) / ((abs(a0) + abs(a1)) ** 2 * c1 * c1)
    return GeometricPotential(
        amplitude=amp, epsilon=epsilon_for(a0, a1), scale=0.5, chi=0.0, c1=c1
    )


def potential_lam14(
    a0: float, a1: float, c1: float = 1.0, lam: float = 0.25
) -> GeometricPotential:
    """Geometric potential of the lambda = 1/4 range-correlated family.

    Relative to the zero-range potential the amplitude is halved and the
    argument rescaled from (phi + eps theta)/2 to (phi + eps theta)/4.  Only
    lambda = 1/4 admits this closed form; other lambdas are rejected.
    """
    if abs(lam - 0.25) > 1e-15:
        raise ValueError("closed-form potential exists only at lambda = 1/4")
    base = potential_3d(a0, a1, c1)
    return GeometricPotential(
        amplitude=0.5 * base.amplitude,
        epsilon=base.epsilon,
        scale=0.25,
        chi=0.0,
        c1=c1,
    )


def potential_2d(a2_0: float, a2_1: float, c1: float = 1.0) -> GeometricPotential:
    """Exact geometric potential of the 2D log-periodic model.

    Defined only for distinct 2D scattering lengths; at a2_0 = a2_1 the
    trajectory is a geodesic (the diagonal) and no potential is needed.
    """
    if not (a2_0 > 0.0 and a2_1 > 0.0):
        raise ValueError("2D scattering lengths must be positive")
    if a2_0 == a2_1:
        raise ValueError(
            "equal 2D scattering lengths: trajectory is a geodesic, no potential"
        )
    if c1 == 0.0:
        raise ValueError("c1 must be nonzero")
    log_ratio = math.log(a2_0 / a2_1)
    amp = -math.pi**2 / (4.0 * log_ratio * log_ratio * c1 * c1)
    return GeometricPotential(
        amplitude=amp, epsilon=+1, scale=0.5, chi=math.pi / 2, c1=c1
    )


def _model_epsilon(model: ere.TwoChannelModel) -> int:
    if model.dimension == 2:
        return +1
    return epsilon_for(model.singlet.a, model.triplet.a)


def lapse_3d(model: ere.TwoChannelModel, p, c1: float = 1.0):
    """Lapse N(p) = (c1/p)(sin phi - eps sin theta) along a 3D trajectory."""
    if model.dimension != 3:
        raise ValueError("lapse_3d requires a 3D model")
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0):
        raise ValueError("lapse requires p > 0")
    phi, theta = ere.phase_shifts_3d(model, p)
    eps = _model_epsilon(model)
    return (c1 / p * (np.sin(phi) - eps * np.sin(theta)))[()]


def _lapse_3d_derivative(model: ere.TwoChannelModel, p, c1: float):
    p = np.asarray(p, dtype=float)
    phi, theta = ere.phase_shifts_3d(model, p)
    dphi, dtheta = ere.tangents(model, p)
    eps = _model_epsilon(model)
    s = np.sin(phi) - eps * np.sin(theta)
    ds = np.cos(phi) * dphi - eps * np.cos(theta) * dtheta
    return (c1 * (ds / p - s / (p * p)))[()]


def construction_lapse(
    model: ere.TwoChannelModel, potential: GeometricPotential, p
) -> tuple[np.ndarray, np.ndarray]:
    """(N, dN/dp) of the lapse paired with the given potential family.

    * 3D zero-range potential (scale 1/2, chi 0): the sine-form lapse;
    * lambda = 1/4 potential (scale 1/4): N = sqrt(2) c1 (phi' - eps theta'),
      which on the solvable family equals the half-angle sine form
      (2 sqrt(2) c1 / p)(sin(phi/2) - eps sin(theta/2));
    * 2D potential (chi pi/2): N = c1 (phi' - theta'), the normalization for
      which the pointwise-solved trajectory equations close exactly.
    """
    c1 = potential.c1
    p = np.asarray(p, dtype=float)
    if potential.chi == math.pi / 2:
        if model.dimension != 2:
            raise ValueError("the chi = pi/2 potential belongs to 2D models")
        dphi, dtheta = ere.tangents(model, p)
        d2phi, d2theta = ere.second_derivatives(model, p)
        return (c1 * (dphi - dtheta))[()], (c1 * (d2phi - d2theta))[()]
    if potential.scale == 0.25:
        eps = potential.epsilon
        dphi, dtheta = ere.tangents(model, p)
        d2phi, d2theta = ere.second_derivatives(model, p)
        root2 = math.sqrt(2.0)
        return (
            (root2 * c1 * (dphi - eps * dtheta))[()],
            (root2 * c1 * (d2phi - eps * d2theta))[()],
        )
    return lapse_3d(model, p, c1), _lapse_3d_derivative(model, p, c1)


def inaffinity(model: ere.TwoChannelModel, p, c1: float = 1.0):
    """kappa(p) = N'(p)/N(p) with the model's natural lapse, analytic in p.

    3D models use the sine-form lapse; 2D models use the lapse recovered from
    the pointwise-solved trajectory equations (proportional to phi' - theta').
    Momenta where the lapse vanishes are flagged by a ValueError.
    """
    p = np.asarray(p, dtype=float)
    if model.dimension == 3:
        n_val = np.asarray(lapse_3d(model, p, c1))
        dn_val = np.asarray(_lapse_3d_derivative(model, p, c1))
    else:
        dphi, dtheta = ere.tangents(model, p)
        d2phi, d2theta = ere.second_derivatives(model, p)
        n_val = np.asarray(c1 * (np.asarray(dphi) - np.asarray(dtheta)))
        dn_val = np.asarray(c1 * (np.asarray(d2phi) - np.asarray(d2theta)))
    bad = np.abs(n_val) < LAPSE_SINGULAR_TOL * abs(c1)
    if np.any(bad):
        p_bad = np.atleast_1d(p)[np.atleast_1d(bad)]
        raise ValueError(f"lapse vanishes at p = {p_bad[:3]}: inaffinity singular")
    return (dn_val / n_val)[()]


@dataclass(frozen=True)
class EomResidualReport:
    """Residuals of the trajectory equations over a momentum grid."""

    p: np.ndarray
    res_phi: np.ndarray
    res_theta: np.ndarray
    max_norm: float
    excluded: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "max_norm": self.max_norm,
            "n_points": int(self.p.size),
            "excluded": [
                {"p": float(pp), "reason": reason} for pp, reason in self.excluded
            ],
        }


def eom_residual(
    model: ere.TwoChannelModel,
    potential: GeometricPotential,
    c1: float | None = None,
    p_grid=None,
) -> EomResidualReport:
    """Residual x'' - kappa x' + N^2 dV/dx of both components on a grid.

    All derivatives are analytic.  Grid points where the potential argument
    is within 1e-6 of a tan singularity, or where |N| < 1e-10, are excluded
    from the max-norm and reported in ``excluded``.  The residual is
    independent of c1 (the amplitude carries 1/c1^2 and the lapse c1).
    """
    if p_grid is None:
        raise ValueError("p_grid is required")
    if c1 is not None and c1 != potential.c1:
        raise ValueError("c1 disagrees with the potential's c1")
    p = np.asarray(p_grid, dtype=float)
    if np.any(p <= 0):
        raise ValueError("residual grid requires p > 0")

    phi, theta = (np.asarray(x) for x in ere.phases(model, p))
    dphi, dtheta = (np.asarray(x) for x in ere.tangents(model, p))
    d2phi, d2theta = (np.asarray(x) for x in ere.second_derivatives(model, p))
    n_val, dn_val = (np.asarray(x) for x in construction_lapse(model, potential, p))

    singular_pot = np.asarray(potential.singular_mask(phi, theta))
    singular_lapse = np.abs(n_val) < LAPSE_SINGULAR_TOL * abs(potential.c1)
    keep = ~(singular_pot | singular_lapse)

    excluded = [
        (float(pp), "potential singularity" if sp else "vanishing lapse")
        for pp, sp, kp in zip(np.atleast_1d(p), np.atleast_1d(singular_pot), np.atleast_1d(keep))
        if not kp
    ]

    kappa = np.where(keep, dn_val / np.where(keep, n_val, 1.0), np.nan)
    g_phi, g_theta = (np.asarray(x) for x in potential.gradient(phi, theta))
    res_phi = d2phi - kappa * dphi + n_val * n_val * g_phi
    res_theta = d2theta - kappa * dtheta + n_val * n_val * g_theta

    keep_arr = np.atleast_1d(keep)
    res_phi_kept = np.atleast_1d(res_phi)[keep_arr]
    res_theta_kept = np.atleast_1d(res_theta)[keep_arr]
    if res_phi_kept.size == 0:
        max_norm = math.nan
    else:
        max_norm = float(
            max(np.max(np.abs(res_phi_kept)), np.max(np.abs(res_theta_kept)))
        )
    return EomResidualReport(
        p=np.atleast_1d(p)[keep_arr],
        res_phi=res_phi_kept,
        res_theta=res_theta_kept,
        max_norm=max_norm,
        excluded=excluded,
    )


@dataclass(frozen=True)
class OverdeterminationReport:
    """Consistency of the pointwise-solved 2D trajectory equations.

    The two equations at fixed p are linear in (kappa, W = N^2 * amplitude)
    once the potential shape is fixed with unit amplitude.  Exactness of
    kappa = (ln N)' is equivalent to W being proportional to (phi'-theta')^2;
    ``max_relative_deviation`` bounds the spread of that ratio on the grid.
    """

    p: np.ndarray
    kappa: np.ndarray
    w: np.ndarray
    max_relative_deviation: float
    tolerance: float
    passed: bool
    excluded: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "max_deviation": self.max_relative_deviation,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "n_points": int(self.p.size),
        }


def overdetermination_2d(
    model: ere.TwoChannelModel, p_grid, tol: float = 1e-6
) -> OverdeterminationReport:
    """Solve the two 2D trajectory equations pointwise and check consistency.

    Unknowns per grid point: the inaffinity kappa and the combination
    W = N^2 * A (lapse squared times potential amplitude), with the potential
    shape tan^2((phi+theta)/2 + pi/2) fixed at unit amplitude:

        phi''   = kappa phi'   - W dU/dphi
        theta'' = kappa theta' - W dU/dtheta,   U = tan^2((phi+theta)/2 + pi/2).

    The overdetermination is consistent iff kappa equals (ln sqrt(W))', i.e.
    iff W / (phi' - theta')^2 is constant along the curve; the maximal
    relative spread of that ratio is reported.  Points where the shape's
    gradient vanishes or blows up are excluded.
    """
    if model.dimension != 2:
        raise ValueError("overdetermination check is for 2D models")
    if model.singlet.a2 == model.triplet.a2:
        raise ValueError("equal 2D scattering lengths: geodesic, nothing to solve")
    p = np.asarray(p_grid, dtype=float)
    if np.any(p <= 0):
        raise ValueError("grid requires p > 0")

    phi, theta = (np.asarray(x) for x in ere.phases(model, p))
    dphi, dtheta = (np.asarray(x) for x in ere.tangents(model, p))
    d2phi, d2theta = (np.asarray(x) for x in ere.second_derivatives(model, p))

    u = 0.5 * (phi + theta) + math.pi / 2
    cos_u, sin_u = np.cos(u), np.sin(u)
    keep = (np.abs(cos_u) >= COS_SINGULAR_TOL) & (np.abs(sin_u) >= COS_SINGULAR_TOL)
    excluded = [
        (float(pp), "shape gradient singular or zero")
        for pp, kp in zip(np.atleast_1d(p), np.atleast_1d(keep))
        if not kp
    ]

    # Unit-amplitude shape gradient: dU/dphi = dU/dtheta = tan(u)/cos^2(u).
    grad_u = np.tan(u) / (cos_u * cos_u)
    # 2x2 solve: [phi', -grad; theta', -grad] [kappa, W]^T = [phi'', theta''].
    det = -dphi * grad_u + dtheta * grad_u
    kappa = np.where(keep, (-d2phi * grad_u + d2theta * grad_u) / np.where(keep, det, 1.0), np.nan)
    w = np.where(keep, (dphi * d2theta - d2phi * dtheta) / np.where(keep, det, 1.0), np.nan)

    dw = dphi - dtheta
    ratio = np.atleast_1d(w / (dw * dw))[np.atleast_1d(keep)]
    if ratio.size == 0:
        dev = math.nan
        passed = False
    else:
        center = float(np.median(ratio))
        dev = float(np.max(np.abs(ratio - center) / abs(center)))
        passed = dev < tol
    return OverdeterminationReport(
        p=np.atleast_1d(p)[np.atleast_1d(keep)],
        kappa=np.atleast_1d(kappa)[np.atleast_1d(keep)],
        w=np.atleast_1d(w)[np.atleast_1d(keep)],
        max_relative_deviation=dev,
        tolerance=tol,
        passed=passed,
        excluded=excluded,
    )


@dataclass(frozen=True)
class AffineCurve:
    """A curve integrated in the affine parameterization (N = 1, kappa = 0)."""

    tau: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    dphi: np.ndarray
    dtheta: np.ndarray
    truncated: bool = False
    diagnostic: str = ""

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.phi, self.theta])


def first_integral(potential: GeometricPotential, phi, theta, dphi, dtheta):
    """Conserved energy (kinetic term plus potential) of the affine motion."""
    kinetic = 0.5 * (np.asarray(dphi) ** 2 + np.asarray(dtheta) ** 2)
    return (kinetic + potential.value(phi, theta))[()]


def integrate_affine(
    potential: GeometricPotential,
    init: tuple[float, float, float, float],
    tau_span: float,
    n_samples: int = 1000,
    rtol: float = 1e-11,
    atol: float = 1e-12,
) -> AffineCurve:
    """Integrate x''_a = -dV/dx_a from (phi, theta, phi', theta') over tau.

    The inverse-metric factor is folded into the potential term exactly as in
    ``eom_residual`` with N = 1, so an integrated curve initialized on a
    closed-form trajectory stays on it.  If the integrator fails (typically
    by running into a potential singularity) the curve is truncated and a
    diagnostic recorded.
    """
    phi0, theta0, dphi0, dtheta0 = (float(v) for v in init)
    if bool(np.asarray(potential.singular_mask(phi0, theta0))):
        raise ValueError("initial point sits on a potential singularity")

    def rhs(_tau, y):
        g_phi, g_theta = potential.gradient(y[0], y[1])
        return [y[2], y[3], -g_phi, -g_theta]

    t_eval = np.linspace(0.0, tau_span, n_samples)
    sol = solve_ivp(
        rhs,
        (0.0, tau_span),
        [phi0, theta0, dphi0, dtheta0],
        t_eval=t_eval,
        rtol=rtol,
        atol=atol,
        method="RK45",
        dense_output=False,
    )
    truncated = not sol.success or sol.t.size < n_samples
    return AffineCurve(
        tau=sol.t,
        phi=sol.y[0],
        theta=sol.y[1],
        dphi=sol.y[2],
        dtheta=sol.y[3],
        truncated=truncated,
        diagnostic="" if sol.success else f"integrator stopped: {sol.message}",
    )


def affine_parameter_span(
    model: ere.TwoChannelModel,
    potential: GeometricPotential,
    p_start: float,
    p_stop: float,
) -> float:
    """Affine-parameter length tau = integral of N dp between two momenta."""

    def n_of_p(p):
        n_val, _ = construction_lapse(model, potential, p)
        return float(n_val)

    value, _err = quad(n_of_p, p_start, p_stop, limit=200)
    return value


def galilean_rescale(traj: Trajectory, omega: float) -> Trajectory:
    """Relabel the trajectory parameter p -> Omega p (Omega >= 1).

    The (phi, theta) point set is untouched; only the parameterization
    changes.  The recomputed inaffinity obeys the chain rule
    kappa_original(p) = Omega * kappa_rescaled(Omega p).
    """
    if omega < 1.0:
        raise ValueError("Galilean rescaling requires Omega >= 1")
    return Trajectory(
        model=traj.model,
        p=traj.p * omega,
        phi=traj.phi,
        theta=traj.theta,
        parameter_scale=traj.parameter_scale * omega,
    )


def trajectory_inaffinity(traj: Trajectory, p_param, c1: float = 1.0):
    """Inaffinity of a (possibly relabeled) trajectory at parameter value(s)."""
    scale = traj.parameter_scale
    return np.asarray(inaffinity(traj.model, np.asarray(p_param) / scale, c1)) / scale


def point_to_polyline_distance(points: np.ndarray, polyline: np.ndarray) -> np.ndarray:
    """Distance from each point to a piecewise-linear curve (vectorized).

    ``points`` is (n, 2) and ``polyline`` (m, 2) with m >= 2.  Returns the
    (n,) array of Euclidean distances to the nearest segment.
    """
    points = np.asarray(points, dtype=float)
    polyline = np.asarray(polyline, dtype=float)
    seg_a = polyline[:-1]
    seg_v = polyline[1:] - seg_a
    seg_len2 = np.maximum(np.einsum("ij,ij->i", seg_v, seg_v), 1e-300)
    out = np.empty(points.shape[0])
    chunk = 256
    for start in range(0, points.shape[0], chunk):
        pts = points[start : start + chunk]
        diff = pts[:, None, :] - seg_a[None, :, :]
        t = np.clip(np.einsum("kij,ij->ki", diff, seg_v) / seg_len2, 0.0, 1.0)
        proj = seg_a[None, :, :] + t[:, :, None] * seg_v[None, :, :]
        d2 = np.sum((pts[:, None, :] - proj) ** 2, axis=2)
        out[start : start + chunk] = np.sqrt(np.min(d2, axis=1))
    return out
