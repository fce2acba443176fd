"""Gauge group actions on Nahm data.

Gauge paths with exact velocities, the action on Nahm data and tangents,
fundamental vector fields, gauge fixing of T0 by an ordered exponential,
the tau0-centring gauge, Kronheimer's map on [0, 1] with its inverse, the
complexified action on ``(alpha, beta)`` pairs, and polar decomposition.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from nahm_implosion.exceptions import (
    AsymptoticsError,
    GridError,
    IntegrationBlowUpError,
    LieAlgebraError,
    ToleranceError,
)
from nahm_implosion.lie_core import (
    SUBALGEBRA_TOLERANCE,
    adjoint_action,
    bracket,
    project_stratum,
)
from nahm_implosion.logging_config import format_matrix
from nahm_implosion.nahm_dynamics import (
    BLOW_UP_THRESHOLD,
    Grid,
    NahmAsymptotics,
    NahmPath,
    TangentAsymptotics,
    TangentVector,
    _frozen,
    as_time_function,
    nahm_residual,
    sup_norm,
)

logger = logging.getLogger(__name__)

UNITARY_TOLERANCE = 1e-10
COMPLEX_DET_TOLERANCE = 1e-8
DRIFT_TOLERANCE = 1e-6
REORTHONORMALIZE_EVERY = 64
KRONHEIMER_RESIDUAL_TOLERANCE = 1e-6

Profile = Callable[[np.ndarray], np.ndarray]


def _matrix_inverse(samples: np.ndarray) -> np.ndarray:
    det = np.linalg.det(samples)
    if np.any(np.abs(det) < 1e-14):
        raise ToleranceError(
            "Gauge path has a singular sample",
            quantity="det",
            value=float(np.min(np.abs(det))),
            tolerance=1e-14,
        )
    return np.linalg.inv(samples)


def unitary_projection(g: np.ndarray) -> np.ndarray:
    """Nearest unitary matrix (polar factor) of each sample."""
    u, _, vh = np.linalg.svd(g)
    return u @ vh


def _skew_part(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x - np.conj(np.swapaxes(x, -1, -2)))


@dataclass(frozen=True, eq=False)
class GaugePath:
    """Sampled gauge transformation.

    ``velocity`` holds ``u' u^{-1}`` and ``acceleration`` its time derivative
    when they are known exactly. ``slope`` is ``s(u)`` and ``limit`` is the
    limit of ``u(t) exp(-(t - b) s(u))`` for half-line transformations.
    """

    grid: Grid
    samples: np.ndarray
    flavor: str = "unitary"
    velocity: Optional[np.ndarray] = None
    acceleration: Optional[np.ndarray] = None
    slope: Optional[np.ndarray] = None
    limit: Optional[np.ndarray] = None
    drift: float = 0.0

    def __post_init__(self) -> None:
        samples = _frozen(self.samples)
        n = samples.shape[-1]
        if samples.shape != (self.grid.size, n, n):
            raise GridError(f"Gauge samples of shape {samples.shape} do not fit the grid")
        if self.flavor not in ("unitary", "complexified"):
            raise LieAlgebraError(f"Unknown gauge flavor '{self.flavor}'")
        det = np.linalg.det(samples)
        if self.flavor == "unitary":
            defect = float(np.max(np.abs(samples @ np.conj(np.swapaxes(samples, -1, -2)) - np.eye(n))))
            det_defect = float(np.max(np.abs(det - 1.0)))
            if defect > UNITARY_TOLERANCE or det_defect > UNITARY_TOLERANCE:
                raise ToleranceError(
                    "Unitary gauge path leaves SU(n)",
                    quantity="unitarity",
                    value=max(defect, det_defect),
                    tolerance=UNITARY_TOLERANCE,
                )
        else:
            det_defect = float(np.max(np.abs(det - 1.0)))
            if det_defect > COMPLEX_DET_TOLERANCE:
                raise ToleranceError(
                    "Complexified gauge path leaves SL(n, C)",
                    quantity="det",
                    value=det_defect,
                    tolerance=COMPLEX_DET_TOLERANCE,
                )
        object.__setattr__(self, "samples", samples)
        for name in ("velocity", "acceleration", "slope", "limit"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def n(self) -> int:
        return int(self.samples.shape[-1])

    @property
    def boundary(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.samples[0], self.samples[-1]

    @classmethod
    def identity(cls, grid: Grid, n: int) -> "GaugePath":
        eye = np.broadcast_to(np.eye(n, dtype=complex), (grid.size, n, n))
        zero = np.zeros((grid.size, n, n), dtype=complex)
        return cls(
            grid=grid,
            samples=eye,
            velocity=zero,
            acceleration=zero,
            slope=np.zeros((n, n), dtype=complex),
            limit=np.eye(n, dtype=complex),
        )

    @classmethod
    def constant(cls, grid: Grid, u: np.ndarray, flavor: str = "unitary") -> "GaugePath":
        u = np.asarray(u, dtype=complex)
        n = u.shape[0]
        zero = np.zeros((grid.size, n, n), dtype=complex)
        return cls(
            grid=grid,
            samples=np.broadcast_to(u, (grid.size, n, n)),
            flavor=flavor,
            velocity=zero,
            acceleration=zero,
            slope=np.zeros((n, n), dtype=complex),
            limit=u,
        )

    @classmethod
    def one_parameter(
        cls,
        grid: Grid,
        generator: np.ndarray,
        profile: Profile,
        rate: Profile,
        acceleration: Profile,
        flavor: str = "unitary",
        slope: Optional[np.ndarray] = None,
        limit: Optional[np.ndarray] = None,
    ) -> "GaugePath":
        """``u(t) = exp(f(t) A)`` with exact velocity ``f'(t) A``.

        Args:
            grid: Sampling grid
            generator: The constant matrix ``A``
            profile: ``f`` evaluated on node arrays
            rate: ``f'``
            acceleration: ``f''``
            flavor: "unitary" or "complexified"
            slope: Asymptotic slope s(u), if the path has one
            limit: Asymptotic limit of ``u(t) exp(-(t - b) s(u))``
        """
        a = np.asarray(generator, dtype=complex)
        t = grid.nodes
        f = np.asarray(profile(t), dtype=float)
        samples = linalg.expm(f[:, None, None] * a)
        return cls(
            grid=grid,
            samples=samples,
            flavor=flavor,
            velocity=np.asarray(rate(t), dtype=float)[:, None, None] * a,
            acceleration=np.asarray(acceleration(t), dtype=float)[:, None, None] * a,
            slope=slope,
            limit=limit,
        )

    def inverse(self) -> "GaugePath":
        """Pointwise inverse; ``(u^{-1})' u = -u^{-1} v u``."""
        inv = _matrix_inverse(self.samples)
        velocity = acceleration = None
        if self.velocity is not None:
            velocity = -(inv @ self.velocity @ self.samples)
            if self.acceleration is not None:
                # d/dt(-Ad(u^{-1}) v) = Ad(u^{-1})([v, v] - v') = -Ad(u^{-1}) v'
                acceleration = -(inv @ self.acceleration @ self.samples)
        slope = None if self.slope is None else -self.slope
        limit = None if self.limit is None else np.linalg.inv(self.limit)
        return GaugePath(
            grid=self.grid,
            samples=inv,
            flavor=self.flavor,
            velocity=velocity,
            acceleration=acceleration,
            slope=slope,
            limit=limit,
        )

    def finite_difference_velocity(self) -> np.ndarray:
        """``u' u^{-1}`` from centred differences (skew part for unitary paths)."""
        velocity = self.grid.derivative(self.samples) @ _matrix_inverse(self.samples)
        if self.flavor == "unitary":
            velocity = _skew_part(velocity)
        return velocity

    def velocity_samples(self) -> np.ndarray:
        if self.velocity is not None:
            return self.velocity
        return self.finite_difference_velocity()


def compose(u: GaugePath, w: GaugePath) -> GaugePath:
    """Pointwise product ``u w``, combining exact velocities when both have them."""
    u.grid.require_same(w.grid)
    samples = u.samples @ w.samples
    velocity = acceleration = None
    if u.velocity is not None and w.velocity is not None:
        moved = adjoint_action(u.samples, w.velocity)
        velocity = u.velocity + moved
        if u.acceleration is not None and w.acceleration is not None:
            acceleration = (
                u.acceleration
                + bracket(u.velocity, moved)
                + adjoint_action(u.samples, w.acceleration)
            )
    slope = limit = None
    if u.slope is not None and w.slope is not None and u.limit is not None and w.limit is not None:
        slope = u.slope + w.slope
        limit = u.limit @ w.limit
    flavor = "unitary" if u.flavor == w.flavor == "unitary" else "complexified"
    return GaugePath(
        grid=u.grid,
        samples=samples,
        flavor=flavor,
        velocity=velocity,
        acceleration=acceleration,
        slope=slope,
        limit=limit,
    )


@dataclass(frozen=True, eq=False)
class GaugeAlgebraPath:
    """Sampled infinitesimal gauge transformation with ``xi(0) = 0``."""

    grid: Grid
    samples: np.ndarray
    rates: Optional[np.ndarray] = None
    accelerations: Optional[np.ndarray] = None
    slope: Optional[np.ndarray] = None
    limit: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        samples = _frozen(self.samples)
        if samples.shape[0] != self.grid.size:
            raise GridError("Gauge algebra samples do not fit the grid")
        if np.max(np.abs(samples[0]), initial=0.0) > 1e-14:
            raise LieAlgebraError("Infinitesimal gauge transformations must vanish at t = 0")
        object.__setattr__(self, "samples", samples)
        for name in ("rates", "accelerations", "slope", "limit"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @classmethod
    def from_profiles(
        cls,
        grid: Grid,
        terms: Sequence[Tuple[np.ndarray, Profile, Profile, Profile]],
        slope: Optional[np.ndarray] = None,
        limit: Optional[np.ndarray] = None,
    ) -> "GaugeAlgebraPath":
        """``xi(t) = sum_k f_k(t) A_k`` from ``(A_k, f_k, f_k', f_k'')`` terms."""
        t = grid.nodes
        n = np.asarray(terms[0][0]).shape[0]
        samples = np.zeros((grid.size, n, n), dtype=complex)
        rates = np.zeros_like(samples)
        accelerations = np.zeros_like(samples)
        for a, f, df, ddf in terms:
            a = np.asarray(a, dtype=complex)
            samples += np.asarray(f(t), dtype=float)[:, None, None] * a
            rates += np.asarray(df(t), dtype=float)[:, None, None] * a
            accelerations += np.asarray(ddf(t), dtype=float)[:, None, None] * a
        return cls(
            grid=grid,
            samples=samples,
            rates=rates,
            accelerations=accelerations,
            slope=slope,
            limit=limit,
        )

    def time_derivative(self) -> np.ndarray:
        if self.rates is not None:
            return self.rates
        return self.grid.derivative(self.samples)

    def exponentiate(self, theta: float = 1.0) -> GaugePath:
        """Pointwise ``exp(theta xi(t))`` (velocity left to finite differences)."""
        samples = linalg.expm(theta * self.samples)
        samples = unitary_projection(samples)
        samples = samples / np.linalg.det(samples)[:, None, None] ** (1.0 / samples.shape[-1])
        slope = limit = None
        if self.slope is not None and self.limit is not None:
            slope = theta * self.slope
            limit = linalg.expm(theta * self.limit)
        return GaugePath(grid=self.grid, samples=samples, slope=slope, limit=limit)


def _in_stabilizer(limit: np.ndarray, record: NahmAsymptotics) -> bool:
    """Whether ``limit`` lies in [C,C] and commutes with sigma."""
    _, _, h = project_stratum(limit, record.stratum)
    if np.max(np.abs(h), initial=0.0) > 1e-8:
        return False
    for members in record.stratum.groups:
        block = limit[np.ix_(members, members)]
        if abs(np.linalg.det(block) - 1.0) > 1e-8:
            return False
    for s in record.sigma.sigma:
        if np.max(np.abs(bracket(limit, s)), initial=0.0) > 1e-8:
            return False
    return True


def apply_gauge(u: GaugePath, T: NahmPath) -> NahmPath:
    """Gauge action ``T0 -> u T0 u^-1 - u' u^-1``, ``T_i -> u T_i u^-1``.

    Exact derivative samples propagate when both ``T`` and ``u`` carry them.

    Raises:
        GridError: If the grids differ
        AsymptoticsError: If a half-line path meets a gauge path without
            compatible asymptotic data
    """
    T.grid.require_same(u.grid)
    inv = _matrix_inverse(u.samples)
    velocity = u.velocity_samples()
    moved = u.samples[:, None] @ T.samples @ inv[:, None]
    samples = moved.copy()
    samples[:, 0] -= velocity

    derivatives = None
    if T.derivatives is not None and u.velocity is not None and u.acceleration is not None:
        derivatives = bracket(u.velocity[:, None], moved) + (
            u.samples[:, None] @ T.derivatives @ inv[:, None]
        )
        derivatives[:, 0] -= u.acceleration

    asymptotics = T.asymptotics
    if asymptotics is not None:
        if u.limit is None or u.slope is None:
            raise AsymptoticsError("Half-line gauge action needs the slope and limit of u")
        if not _in_stabilizer(u.limit, asymptotics):
            raise AsymptoticsError(
                "Gauge limit must lie in [C,C] and centralise sigma",
                details={"limit": u.limit.tolist()},
            )
        _, d1, h = project_stratum(u.slope, asymptotics.stratum)
        if np.max(np.abs(d1 + h), initial=0.0) > SUBALGEBRA_TOLERANCE:
            raise AsymptoticsError("Gauge slope must lie in Z(c)")
        asymptotics = NahmAsymptotics(
            tau0=asymptotics.tau0 - u.slope,
            tau=asymptotics.tau,
            sigma=asymptotics.sigma,
            stratum=asymptotics.stratum,
        )
    return NahmPath(grid=T.grid, samples=samples, asymptotics=asymptotics, derivatives=derivatives)


def act_on_tangent(u: GaugePath, X: TangentVector) -> TangentVector:
    """Conjugate tangent samples by ``u``; ``delta`` is fixed and ``eps`` moves by the limit."""
    X.grid.require_same(u.grid)
    inv = _matrix_inverse(u.samples)
    samples = u.samples[:, None] @ X.samples @ inv[:, None]
    asymptotics = X.asymptotics
    if asymptotics is not None:
        if u.limit is None:
            raise AsymptoticsError("Half-line tangent action needs the limit of u")
        asymptotics = TangentAsymptotics(
            delta=asymptotics.delta,
            eps=_frozen(adjoint_action(u.limit, asymptotics.eps)),
        )
    return TangentVector(grid=X.grid, samples=samples, asymptotics=asymptotics)


def fundamental_vector_field(xi: GaugeAlgebraPath, T: NahmPath) -> TangentVector:
    """``X = ([xi, T0] - xi', [xi, T1], [xi, T2], [xi, T3])``.

    With asymptotic data on both sides the tangent carries
    ``delta = (-slope, 0, 0, 0)`` and ``eps_i = [limit, sigma_i]``.
    """
    T.grid.require_same(xi.grid)
    x = xi.samples
    rates = xi.time_derivative()
    samples = bracket(x[:, None], T.samples)
    samples[:, 0] -= rates

    derivatives = None
    if T.derivatives is not None and xi.rates is not None and xi.accelerations is not None:
        derivatives = bracket(xi.rates[:, None], T.samples) + bracket(x[:, None], T.derivatives)
        derivatives[:, 0] -= xi.accelerations

    asymptotics = None
    if T.asymptotics is not None:
        n = T.n
        delta = np.zeros((4, n, n), dtype=complex)
        eps = np.zeros((4, n, n), dtype=complex)
        if xi.slope is not None:
            delta[0] = -xi.slope
        if xi.limit is not None:
            for i in range(3):
                eps[i + 1] = bracket(xi.limit, T.asymptotics.sigma.sigma[i])
        asymptotics = TangentAsymptotics(delta=_frozen(delta), eps=_frozen(eps))
    return TangentVector(grid=T.grid, samples=samples, asymptotics=asymptotics, derivatives=derivatives)


def ordered_exponential(
    generator: Any,
    grid: Grid,
    n: int,
    flavor: str = "unitary",
    reorthonormalize_every: int = REORTHONORMALIZE_EVERY,
    blow_up: float = BLOW_UP_THRESHOLD,
) -> Tuple[np.ndarray, float]:
    """Solve ``g' = g A(t)``, ``g(0) = 1`` with RK4, one step per grid interval.

    Sampled generators are interpolated by cubic splines between nodes.
    Unitary solutions are projected back onto U(n) every
    ``reorthonormalize_every`` steps.

    Returns:
        ``(samples, max_drift)`` where ``max_drift`` is the largest unitarity
        defect seen before a projection

    Raises:
        IntegrationBlowUpError: If the solution exceeds the blow-up guard
    """
    a = as_time_function(generator, grid, n)
    t = grid.nodes
    g = np.eye(n, dtype=complex)
    out = np.empty((grid.size, n, n), dtype=complex)
    out[0] = g
    eye = np.eye(n)
    max_drift = 0.0
    for step in range(grid.size - 1):
        h = t[step + 1] - t[step]
        a0 = a(t[step])
        am = a(t[step] + h / 2)
        a1 = a(t[step + 1])
        k1 = g @ a0
        k2 = (g + h / 2 * k1) @ am
        k3 = (g + h / 2 * k2) @ am
        k4 = (g + h * k3) @ a1
        g = g + h * (k1 / 6 + k2 / 3 + k3 / 3 + k4 / 6)
        if flavor == "unitary" and (step + 1) % reorthonormalize_every == 0:
            drift = float(np.max(np.abs(g @ g.conj().T - eye)))
            max_drift = max(max_drift, drift)
            if drift > DRIFT_TOLERANCE:
                logger.warning(f"Unitary drift {drift:.3e} at t={t[step + 1]:.6g} before projection")
            g = unitary_projection(g)
        size = float(np.max(np.abs(g)))
        if not np.isfinite(size) or size > blow_up:
            raise IntegrationBlowUpError(
                f"Ordered exponential exceeded {blow_up:.1e} at t={t[step + 1]:.6g}",
                t=float(t[step + 1]),
                norm=size,
            )
        out[step + 1] = g
    if flavor == "unitary":
        out = unitary_projection(out)
        out = out / np.linalg.det(out)[:, None, None] ** (1.0 / n)
    return out, max_drift


def gauge_T0_to_zero(T: NahmPath) -> Tuple[GaugePath, NahmPath]:
    """Find ``u`` with ``u' = u T0``, ``u(0) = 1``; then ``(u.T)_0 = 0``.

    Half-line paths with ``tau0 != 0`` must be centred first
    (see ``center_tau0_gauge``); otherwise the gauge has no limit.

    Raises:
        AsymptoticsError: If the half-line limit of ``u`` leaves the stabiliser
    """
    n = T.n
    samples, drift = ordered_exponential(T.samples[:, 0], T.grid, n)
    velocity = samples @ T.samples[:, 0] @ np.conj(np.swapaxes(samples, -1, -2))
    acceleration = None
    if T.derivatives is not None:
        acceleration = samples @ T.derivatives[:, 0] @ np.conj(np.swapaxes(samples, -1, -2))
    slope = limit = None
    if T.asymptotics is not None:
        if np.max(np.abs(T.asymptotics.tau0), initial=0.0) > SUBALGEBRA_TOLERANCE:
            raise AsymptoticsError("Centre tau0 before gauging T0 to zero on the half-line")
        slope = np.zeros((n, n), dtype=complex)
        limit = samples[-1]
    u = GaugePath(
        grid=T.grid,
        samples=samples,
        velocity=velocity,
        acceleration=acceleration,
        slope=slope,
        limit=limit,
        drift=drift,
    )
    logger.debug(f"Gauged T0 to zero (max drift {drift:.3e})")
    return u, apply_gauge(u, T)


def tau0_centering_generator(T: NahmPath, b: float, c: float) -> GaugeAlgebraPath:
    """``xi(t) = (t - b + b e^{-ct}) tau0`` with slope ``tau0`` and limit 0."""
    if T.asymptotics is None:
        raise AsymptoticsError("tau0 centring needs an asymptotic record")
    if c <= 0:
        raise AsymptoticsError(f"Centring rate must be positive, got {c}")
    tau0 = T.asymptotics.tau0
    return GaugeAlgebraPath.from_profiles(
        T.grid,
        [(
            tau0,
            lambda t: t - b + b * np.exp(-c * t),
            lambda t: 1.0 - b * c * np.exp(-c * t),
            lambda t: b * c * c * np.exp(-c * t),
        )],
        slope=tau0,
        limit=np.zeros_like(tau0),
    )


def center_tau0_gauge(T: NahmPath, b: float, c: float) -> Tuple[GaugePath, NahmPath]:
    """Gauge ``tau0`` to zero with ``u = exp((t - b + b e^{-ct}) tau0)``.

    Raises:
        AsymptoticsError: If ``T`` has no asymptotic record or ``c <= 0``
    """
    xi = tau0_centering_generator(T, b, c)
    tau0 = T.asymptotics.tau0  # type: ignore[union-attr]
    u = GaugePath.one_parameter(
        T.grid,
        tau0,
        lambda t: t - b + b * np.exp(-c * t),
        lambda t: 1.0 - b * c * np.exp(-c * t),
        lambda t: b * c * c * np.exp(-c * t),
        slope=xi.slope,
        limit=np.eye(T.n, dtype=complex),
    )
    return u, apply_gauge(u, T)


class KronheimerPoint(NamedTuple):
    g_end: np.ndarray
    beta0: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {"g_end": matrix_to_pairs(self.g_end), "beta0": matrix_to_pairs(self.beta0)}


def matrix_to_pairs(m: np.ndarray) -> List[List[List[float]]]:
    """Row-major nested ``[re, im]`` pairs."""
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def pairs_to_matrix(pairs: Sequence[Sequence[Sequence[float]]]) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in pairs], dtype=complex)


def kronheimer_map(T: NahmPath) -> KronheimerPoint:
    """``(g(1), beta(0))`` with ``g' = g alpha``, ``alpha = T0 - i T1``, ``beta = T2 + i T3``.

    Raises:
        GridError: If ``T`` is not on an interval grid
    """
    if T.grid.kind != "interval":
        raise GridError("Kronheimer's map is defined on interval paths")
    residual = sup_norm(nahm_residual(T))
    if residual > KRONHEIMER_RESIDUAL_TOLERANCE:
        logger.warning(f"Kronheimer input solves Nahm only to {residual:.3e}")
    alpha = T.samples[:, 0] - 1j * T.samples[:, 1]
    samples, _ = ordered_exponential(alpha, T.grid, T.n, flavor="complexified")
    beta0 = T.samples[0, 2] + 1j * T.samples[0, 3]
    logger.debug(f"Kronheimer point g(1)={format_matrix(samples[-1])}")
    return KronheimerPoint(g_end=samples[-1], beta0=beta0)


def unitary_log(k: np.ndarray) -> np.ndarray:
    """Traceless skew-Hermitian ``L`` with ``exp(L) = k`` for ``k`` in SU(n)."""
    k = np.asarray(k, dtype=complex)
    form, vectors = linalg.schur(k, output="complex")
    angles = np.angle(np.diag(form))
    winding = int(round(float(np.sum(angles)) / (2 * math.pi)))
    order = np.argsort(angles)
    if winding > 0:
        angles[order[-winding:]] -= 2 * math.pi
    elif winding < 0:
        angles[order[:-winding]] += 2 * math.pi
    log = vectors @ np.diag(1j * angles) @ vectors.conj().T
    return _skew_part(log)


def unitary_interpolant(k: np.ndarray, grid: Grid) -> GaugePath:
    """``u(t) = exp(t log k / L)`` from 1 to ``k`` across an interval of length ``L``."""
    log = unitary_log(k) / grid.t_max
    return GaugePath.one_parameter(
        grid, log, lambda t: t, lambda t: np.ones_like(t), lambda t: np.zeros_like(t)
    )


def kronheimer_inverse(
    k: np.ndarray, constants: Sequence[np.ndarray], grid: Grid
) -> NahmPath:
    """``T = u0^{-1}.(0, c1, c2, c3)`` with ``u0(0) = 1``, ``u0(1) = k``.

    Kronheimer's map sends the result to ``(exp(-i c1) k, c2 + i c3)``; with
    ``c1 = 0`` it recovers ``k`` itself.

    Args:
        k: Target value of ``g(1)``
        constants: Pairwise commuting ``(c1, c2, c3)``
        grid: Interval grid

    Raises:
        LieAlgebraError: If the constants do not commute
    """
    c = [np.asarray(x, dtype=complex) for x in constants]
    for i in range(3):
        for j in range(i + 1, 3):
            if np.max(np.abs(bracket(c[i], c[j])), initial=0.0) > SUBALGEBRA_TOLERANCE:
                raise LieAlgebraError("Inverse Kronheimer data must commute")
    n = c[0].shape[0]
    constant = np.zeros((grid.size, 4, n, n), dtype=complex)
    for i in range(3):
        constant[:, i + 1] = c[i]
    zero_path = NahmPath(grid=grid, samples=constant, derivatives=np.zeros_like(constant))
    u0 = unitary_interpolant(k, grid)
    return apply_gauge(u0.inverse(), zero_path)


class ComplexPair(NamedTuple):
    """Sampled solution candidate ``(alpha, beta)`` of ``beta' = [beta, alpha]``."""

    grid: Grid
    alpha: np.ndarray
    beta: np.ndarray
    beta_rate: Optional[np.ndarray] = None


def complex_pair_from_path(T: NahmPath) -> ComplexPair:
    """``alpha = T0 - i T1``, ``beta = T2 + i T3``."""
    rate = None
    if T.derivatives is not None:
        rate = T.derivatives[:, 2] + 1j * T.derivatives[:, 3]
    return ComplexPair(
        grid=T.grid,
        alpha=T.samples[:, 0] - 1j * T.samples[:, 1],
        beta=T.samples[:, 2] + 1j * T.samples[:, 3],
        beta_rate=rate,
    )


def model_complex_pair(
    tau: Sequence[np.ndarray],
    sigma: Sequence[np.ndarray],
    grid: Grid,
    tau0: Optional[np.ndarray] = None,
) -> ComplexPair:
    """Complexified model data.

    ``alpha0 = tau0 - tau_r - H/(2(t+1))``, ``beta0 = tau_C + Y/(2(t+1))`` with
    ``tau_r = i tau_1``, ``tau_C = tau_2 + i tau_3``, ``H = i sigma_1`` and
    ``Y = sigma_2 + i sigma_3``.
    """
    n = np.asarray(tau[0]).shape[0]
    tau0 = np.zeros((n, n), dtype=complex) if tau0 is None else np.asarray(tau0, dtype=complex)
    factor = 1.0 / (2.0 * (grid.nodes + 1.0))
    tau_r = 1j * np.asarray(tau[0])
    tau_c = np.asarray(tau[1]) + 1j * np.asarray(tau[2])
    h = 1j * np.asarray(sigma[0])
    y = np.asarray(sigma[1]) + 1j * np.asarray(sigma[2])
    alpha = tau0 - tau_r - factor[:, None, None] * h
    beta = tau_c + factor[:, None, None] * y
    beta_rate = -(factor ** 2 * 2.0)[:, None, None] * y
    return ComplexPair(grid=grid, alpha=alpha, beta=beta, beta_rate=beta_rate)


def complex_equation_residual(pair: ComplexPair) -> np.ndarray:
    """``beta' - [beta, alpha]`` sampled on the grid."""
    rate = pair.beta_rate if pair.beta_rate is not None else pair.grid.derivative(pair.beta)
    return rate - bracket(pair.beta, pair.alpha)


def complex_gauge_apply(g: GaugePath, pair: ComplexPair) -> ComplexPair:
    """``alpha -> g alpha g^-1 - g' g^-1``, ``beta -> g beta g^-1``.

    Raises:
        GridError: If the grids differ
        ToleranceError: If a sample of ``g`` is singular
    """
    pair.grid.require_same(g.grid)
    inv = _matrix_inverse(g.samples)
    velocity = g.velocity if g.velocity is not None else g.grid.derivative(g.samples) @ inv
    alpha = g.samples @ pair.alpha @ inv - velocity
    beta = g.samples @ pair.beta @ inv
    beta_rate = None
    if pair.beta_rate is not None and g.velocity is not None:
        beta_rate = bracket(g.velocity, beta) + g.samples @ pair.beta_rate @ inv
    return ComplexPair(grid=pair.grid, alpha=alpha, beta=beta, beta_rate=beta_rate)


def holomorphic_coordinates(
    g: GaugePath, tau: Sequence[np.ndarray], sigma: Sequence[np.ndarray]
) -> Tuple[np.ndarray, np.ndarray]:
    """Orbit coordinates ``(g(0), tau_C + Y)`` of ``g`` applied to model data."""
    tau_c = np.asarray(tau[1]) + 1j * np.asarray(tau[2])
    y = np.asarray(sigma[1]) + 1j * np.asarray(sigma[2])
    return g.samples[0], tau_c + y


def polar_decompose(g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """``g = k exp(i xi)`` with ``k`` unitary and ``xi`` skew-Hermitian.

    Uses the SVD ``g = U S V*``: ``k = U V*`` and ``exp(i xi) = V S V*``.

    Raises:
        ToleranceError: If ``g`` is singular or ``det g != 1``
    """
    g = np.asarray(g, dtype=complex)
    det = complex(np.linalg.det(g))
    if abs(det) < 1e-14:
        raise ToleranceError("Cannot polar-decompose a singular matrix", quantity="det", value=abs(det), tolerance=1e-14)
    if abs(det - 1.0) > COMPLEX_DET_TOLERANCE:
        raise ToleranceError(
            "Polar decomposition expects det(g) = 1",
            quantity="det",
            value=abs(det - 1.0),
            tolerance=COMPLEX_DET_TOLERANCE,
        )
    u, s, vh = np.linalg.svd(g)
    k = u @ vh
    v = vh.conj().T
    hermitian_log = v @ np.diag(np.log(s)) @ vh
    hermitian_log = 0.5 * (hermitian_log + hermitian_log.conj().T)
    xi = -1j * hermitian_log
    return k, xi


def polar_reconstruct(k: np.ndarray, xi: np.ndarray) -> np.ndarray:
    return k @ linalg.expm(1j * xi)
