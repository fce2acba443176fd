"""Bielawski metric, quaternionic structure and moment maps on Nahm data.

The regularised pairing subtracts the constant limits ``delta`` of both
tangents, integrates the rest by composite Simpson quadrature, and closes the
half-line with the analytic tail ``<eps, eps'> / (4 (1 + t)^2)`` plus a fitted
remainder beyond ``T_max``.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from nahm_implosion.config import MetricConfig
from nahm_implosion.exceptions import (
    AsymptoticsError,
    DivergentPairingError,
    GridError,
    ImplosionLabError,
    ToleranceError,
)
from nahm_implosion.gauge_engine import GaugeAlgebraPath
from nahm_implosion.lie_core import StratumData, inner, project_stratum
from nahm_implosion.nahm_dynamics import (
    Grid,
    NahmPath,
    TangentAsymptotics,
    TangentVector,
    _frozen,
    nahm_residual,
    rescale_tangent,
    sup_norm,
)

logger = logging.getLogger(__name__)

CROSS_TERM_TOLERANCE = 1e-8
JUNCTION_TOLERANCE = 1e-8
REMAINDER_RATE_AGREEMENT = 0.1
NONDEGENERACY_FACTOR = 1e-10

AXES = ("I", "J", "K")

# Right multiplication by -i, j, k on (X0, X1, X2, X3).
QUATERNION_MATRICES: Dict[str, np.ndarray] = {
    "I": np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]),
    "J": np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]),
    "K": np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]),
}

# mu_axis = sign * (Nahm residual component) makes omega_axis(X^xi, X) = d<mu_axis, xi>(X).
MOMENT_SIGNS = {"I": -1.0, "J": 1.0, "K": 1.0}


@dataclass(frozen=True)
class PairingReport:
    """Audit trail of one regularised pairing."""

    interval_part: float
    tail_part: float
    boundary_part: float
    remainder_estimate: float = 0.0

    @property
    def value(self) -> float:
        return self.interval_part + self.tail_part + self.boundary_part

    def to_dict(self) -> Dict[str, float]:
        return {
            "value": self.value,
            "interval_part": self.interval_part,
            "tail_part": self.tail_part,
            "boundary_part": self.boundary_part,
            "remainder_estimate": self.remainder_estimate,
        }


def _component_pairing(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``sum_i <a_i, b_i>`` over the component axis; shape of the leading axes."""
    return np.sum(inner(a, b), axis=-1)


def pairing_integrand(X: TangentVector, Y: TangentVector) -> np.ndarray:
    """``sum_i <X_i(t), Y_i(t)>`` at every node."""
    X.grid.require_same(Y.grid)
    return np.asarray(_component_pairing(X.samples, Y.samples), dtype=float)


def _check_cross_terms(x: TangentAsymptotics, y: TangentAsymptotics) -> None:
    pairings = [
        float(v)
        for v in np.concatenate([inner(x.delta, y.eps), inner(x.eps, y.delta)])
    ]
    worst = max(abs(v) for v in pairings)
    if worst > CROSS_TERM_TOLERANCE:
        raise DivergentPairingError(
            f"<delta_i, eps_i> = {worst:.3e} makes the pairing diverge logarithmically",
            pairings=pairings,
        )


def _remainder_beyond(grid: Grid, residual: np.ndarray, offset: float) -> float:
    """Estimate ``int_{T_max}^inf r dt`` from the decay of ``r`` at the last nodes."""
    t = grid.nodes
    picks = [grid.index_at(0.8 * grid.t_max), grid.index_at(0.9 * grid.t_max), grid.size - 1]
    ta, tb, tc = t[picks]
    ra, rb, rc = residual[picks]
    floor = 1e-13 * (1.0 + float(np.max(np.abs(residual))))
    if max(abs(ra), abs(rb), abs(rc)) <= floor:
        return 0.0
    if not (ra * rb > 0 and rb * rc > 0 and abs(rc) < abs(rb) < abs(ra)):
        logger.warning(
            f"Tail remainder is not decaying near T_max (r = {ra:.3e}, {rb:.3e}, {rc:.3e}); "
            "reporting 0"
        )
        return 0.0
    rate_1 = math.log(ra / rb) / (tb - ta)
    rate_2 = math.log(rb / rc) / (tc - tb)
    if abs(rate_1 - rate_2) <= REMAINDER_RATE_AGREEMENT * max(rate_1, rate_2):
        return float(rc / rate_2)
    power = math.log(rb / rc) / math.log((1.0 + tc - offset) / (1.0 + tb - offset))
    if power <= 1.0:
        raise DivergentPairingError(
            f"Tail remainder decays like t^-{power:.3f}, which is not integrable",
            pairings=[float(ra), float(rb), float(rc)],
        )
    return float(rc * (1.0 + tc - offset) / (power - 1.0))


def bielawski_pair(X: TangentVector, Y: TangentVector, cfg: MetricConfig) -> PairingReport:
    """Regularised Bielawski pairing ``<X, Y>_{B,b}``.

    On interval grids the pairing is plain L^2 unless ``cfg.endpoint_weighted``,
    in which case the endpoint values play the role of the limits. On the
    half-line the limits ``delta`` are subtracted, the integral runs to
    ``tail_start`` and the tail is closed analytically.

    Args:
        X: Tangent vector
        Y: Tangent vector on the same grid
        cfg: Metric parameters

    Returns:
        PairingReport whose ``value`` is the sum of its three parts

    Raises:
        GridError: If the grids differ or ``tail_start >= T_max``
        AsymptoticsError: If a half-line tangent has no asymptotic data
        DivergentPairingError: If ``<delta_i, eps_i>`` cross terms are nonzero
    """
    grid = X.grid
    f = pairing_integrand(X, Y)

    if grid.kind == "interval":
        if not cfg.endpoint_weighted:
            return PairingReport(interval_part=grid.integrate(f), tail_part=0.0, boundary_part=0.0)
        end = float(f[-1])
        return PairingReport(
            interval_part=grid.integrate(f - end), tail_part=0.0, boundary_part=cfg.b * end
        )

    if X.asymptotics is None or Y.asymptotics is None:
        raise AsymptoticsError("Half-line pairings need the limits of both tangents")
    ax, ay = X.asymptotics, Y.asymptotics
    _check_cross_terms(ax, ay)
    limit = float(_component_pairing(ax.delta, ay.delta))
    eps = float(_component_pairing(ax.eps, ay.eps))
    g = f - limit
    boundary = cfg.b * limit
    offset = cfg.tail_offset
    t = grid.nodes

    if not cfg.analytic_tail:
        tail = eps / (4.0 * (1.0 + grid.t_max - offset))
        return PairingReport(interval_part=grid.integrate(g), tail_part=tail, boundary_part=boundary)

    start = cfg.resolved_tail_start(grid)
    if start >= grid.t_max:
        raise GridError(
            f"tail_start {start:.6g} must lie below T_max {grid.t_max:.6g}",
            details={"tail_start": start, "t_max": grid.t_max},
        )
    k = grid.index_at(start)
    model = eps / (4.0 * (1.0 + t - offset) ** 2)
    residual = g - model
    remainder = _remainder_beyond(grid, residual, offset)
    tail = eps / (4.0 * (1.0 + t[k] - offset)) + grid.integrate(residual, start=k) + remainder
    report = PairingReport(
        interval_part=grid.integrate(g, stop=k),
        tail_part=tail,
        boundary_part=boundary,
        remainder_estimate=remainder,
    )
    logger.debug(f"Bielawski pairing (b={cfg.b}): {report.to_dict()}")
    return report


def bielawski_norm(X: TangentVector, cfg: MetricConfig) -> float:
    return bielawski_pair(X, X, cfg).value


def quaternion_act(axis: str, X: TangentVector) -> TangentVector:
    """Apply I, J or K; asymptotic data is permuted the same way.

    Raises:
        ImplosionLabError: For an unknown axis name
    """
    if axis not in QUATERNION_MATRICES:
        raise ImplosionLabError(f"Unknown complex structure '{axis}'")
    q = QUATERNION_MATRICES[axis]

    def permute(arr: Optional[np.ndarray]) -> Optional[np.ndarray]:
        if arr is None:
            return None
        return np.einsum("ij,...jab->...iab", q, arr)

    asymptotics = None
    if X.asymptotics is not None:
        asymptotics = TangentAsymptotics(
            delta=_frozen(permute(X.asymptotics.delta)),
            eps=_frozen(permute(X.asymptotics.eps)),
        )
    return TangentVector(
        grid=X.grid,
        samples=permute(X.samples),
        asymptotics=asymptotics,
        derivatives=permute(X.derivatives),
    )


def symplectic_pair(axis: str, X: TangentVector, Y: TangentVector, cfg: MetricConfig) -> float:
    """``omega_axis(X, Y) = <axis X, Y>_{B,b}``."""
    return bielawski_pair(quaternion_act(axis, X), Y, cfg).value


def hyperkahler_moment(T: NahmPath) -> np.ndarray:
    """``(mu_I, mu_J, mu_K)`` sampled on the grid, shape ``(N, 3, n, n)``."""
    residual = nahm_residual(T)
    signs = np.array([MOMENT_SIGNS[a] for a in AXES])
    return signs[None, :, None, None] * residual


def moment_pairing(T: NahmPath, xi: Any, axis: str = "I") -> float:
    """``int <mu_axis(T), xi> dt`` for a gauge algebra path (or its samples)."""
    samples = xi.samples if isinstance(xi, GaugeAlgebraPath) else np.asarray(xi)
    mu = hyperkahler_moment(T)[:, AXES.index(axis)]
    return T.grid.integrate(np.asarray(inner(mu, samples), dtype=float))


def moment_torus(T: NahmPath) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Torus moment map: the limits ``(tau_1, tau_2, tau_3)``.

    Raises:
        AsymptoticsError: For paths without an asymptotic record
    """
    if T.asymptotics is None:
        raise AsymptoticsError("The torus moment map reads the asymptotic record")
    tau = T.asymptotics.tau
    return (tau[0].copy(), tau[1].copy(), tau[2].copy())


def moment_boundary(T: NahmPath) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Moment map of the residual K-action: ``-(T1(0), T2(0), T3(0))``."""
    s = T.samples[0]
    return (-s[1], -s[2], -s[3])


def _tangent_part(X: TangentVector, part: int, s: StratumData) -> TangentVector:
    pieces = project_stratum(X.samples, s)
    asymptotics = None
    if X.asymptotics is not None:
        n = X.n
        zero = np.zeros((4, n, n), dtype=complex)
        delta = project_stratum(X.asymptotics.delta, s)[part]
        eps = project_stratum(X.asymptotics.eps, s)[part]
        asymptotics = TangentAsymptotics(
            delta=_frozen(delta if part == 0 else zero),
            eps=_frozen(eps),
        )
    return TangentVector(grid=X.grid, samples=pieces[part], asymptotics=asymptotics)


def decomposed_norms(X: TangentVector, s: StratumData, cfg: MetricConfig) -> Dict[str, float]:
    """``|X^H|^2``, ``|X^{D,1}|^2`` (both L^2) and ``|X^{D,0}|^2_{B,b}``.

    Returns:
        Mapping with keys ``H``, ``D1``, ``D0`` and ``total`` (the full norm)
    """
    parts = {}
    for key, index in (("D0", 0), ("D1", 1), ("H", 2)):
        piece = _tangent_part(X, index, s)
        parts[key] = bielawski_pair(piece, piece, cfg).value
    parts["total"] = bielawski_pair(X, X, cfg).value
    return parts


@dataclass(frozen=True)
class NondegeneracyProbe:
    value: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.value > self.threshold


def nondegeneracy_probe(
    X: TangentVector, t0: float, width: float, cfg: MetricConfig
) -> NondegeneracyProbe:
    """Pair ``X`` with ``h X`` for a bump ``h`` supported on ``[t0 - width, t0 + width]``.

    Raises:
        GridError: If the bump does not fit inside the grid
    """
    t = X.grid.nodes
    if width <= 0 or t0 - width < 0 or t0 + width >= X.grid.t_max:
        raise GridError("Bump support must lie inside the grid")
    inside = np.abs(t - t0) < width
    bump = np.where(inside, np.cos(0.5 * math.pi * (t - t0) / width) ** 2, 0.0)
    value = bielawski_pair(X, X.restricted(bump), cfg).value
    window = X.samples[inside]
    threshold = NONDEGENERACY_FACTOR * sup_norm(window) ** 2 * 2.0 * width
    return NondegeneracyProbe(value=value, threshold=threshold)


@dataclass(frozen=True)
class GlueReport:
    """Result of concatenating an interval path with a half-line path."""

    glued: NahmPath
    config: MetricConfig
    junction_mismatch: float
    metric_check: Optional[Dict[str, float]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "junction_mismatch": self.junction_mismatch,
            "b": self.config.b,
            "metric_check": self.metric_check,
        }


def _glued_grid(interval: Grid, halfline: Grid) -> Grid:
    if interval.kind != "interval" or halfline.kind != "halfline":
        raise GridError("Gluing joins an interval grid to a half-line grid")
    nodes = np.concatenate([interval.nodes, halfline.nodes[1:] + interval.t_max])
    breaks = tuple(interval.breaks) + (interval.size - 1,) + tuple(
        b + interval.size - 1 for b in halfline.breaks
    )
    return Grid(nodes=nodes, kind="halfline", breaks=breaks)


def _junction(left: np.ndarray, right: np.ndarray, what: str) -> float:
    mismatch = float(np.max(np.abs(left - right), initial=0.0))
    if mismatch > JUNCTION_TOLERANCE:
        raise ToleranceError(
            f"{what} do not match at the junction",
            quantity="junction_mismatch",
            value=mismatch,
            tolerance=JUNCTION_TOLERANCE,
        )
    return mismatch


def _concatenate(left: Optional[np.ndarray], right: Optional[np.ndarray]) -> Optional[np.ndarray]:
    if left is None or right is None:
        return None
    return np.concatenate([left, right[1:]], axis=0)


def glue_tangents(X: TangentVector, X_tilde: TangentVector, grid: Optional[Grid] = None) -> TangentVector:
    """Concatenate matching tangents on ``[0, L]`` and on the half-line."""
    glued_grid = grid or _glued_grid(X.grid, X_tilde.grid)
    _junction(X.samples[-1], X_tilde.samples[0], "Tangent samples")
    if X_tilde.asymptotics is None:
        raise AsymptoticsError("The half-line tangent needs asymptotic data")
    derivatives = None
    if X.derivatives is not None and X_tilde.derivatives is not None:
        derivatives = _concatenate(X.derivatives, X_tilde.derivatives)
    return TangentVector(
        grid=glued_grid,
        samples=_concatenate(X.samples, X_tilde.samples),
        asymptotics=X_tilde.asymptotics,
        derivatives=derivatives,
    )


def glue_paths(
    T_interval: NahmPath,
    T_halfline: NahmPath,
    cfg: MetricConfig,
    tangents: Optional[Tuple[TangentVector, TangentVector]] = None,
) -> GlueReport:
    """Concatenate Nahm data on ``[0, L]`` and on the half-line.

    The half-line piece moves to ``[L, inf)`` and the glued path is measured
    with ``b + L``. With a matching tangent pair the report compares
    ``|X|^2_{L^2} + |X~|^2_{B,b}`` against ``|(X, X~)|^2_{B,b+L}``.

    Raises:
        GridError: If the grids are not an interval and a half-line
        ToleranceError: If the samples disagree at the junction or T0 does not
            vanish there
    """
    grid = _glued_grid(T_interval.grid, T_halfline.grid)
    mismatch = _junction(T_interval.samples[-1], T_halfline.samples[0], "Nahm samples")
    t0_size = max(
        float(np.max(np.abs(T_interval.samples[-1, 0]))),
        float(np.max(np.abs(T_halfline.samples[0, 0]))),
    )
    if t0_size > JUNCTION_TOLERANCE:
        raise ToleranceError(
            "T0 must vanish near the junction (apply a gauge first)",
            quantity="T0_at_junction",
            value=t0_size,
            tolerance=JUNCTION_TOLERANCE,
        )
    glued = NahmPath(
        grid=grid,
        samples=_concatenate(T_interval.samples, T_halfline.samples),
        asymptotics=T_halfline.asymptotics,
        derivatives=_concatenate(T_interval.derivatives, T_halfline.derivatives),
    )
    glued_cfg = cfg.shifted(T_interval.grid.t_max)

    metric_check = None
    if tangents is not None:
        X, X_tilde = tangents
        T_interval.grid.require_same(X.grid)
        T_halfline.grid.require_same(X_tilde.grid)
        glued_x = glue_tangents(X, X_tilde, grid)
        interval_norm = bielawski_pair(X, X, cfg.model_copy(update={"endpoint_weighted": False})).value
        halfline_norm = bielawski_pair(X_tilde, X_tilde, cfg).value
        glued_norm = bielawski_pair(glued_x, glued_x, glued_cfg).value
        metric_check = {
            "interval_norm": interval_norm,
            "halfline_norm": halfline_norm,
            "glued_norm": glued_norm,
            "difference": abs(interval_norm + halfline_norm - glued_norm),
        }
        logger.debug(f"Gluing metric check: {metric_check}")
    return GlueReport(glued=glued, config=glued_cfg, junction_mismatch=mismatch, metric_check=metric_check)


@dataclass(frozen=True)
class HomothetyReport:
    rescaled_norm: float
    scaled_norm: float

    @property
    def difference(self) -> float:
        return abs(self.rescaled_norm - self.scaled_norm)


def homothety_check(X: TangentVector, r: float, b: float) -> HomothetyReport:
    """Compare ``|X_r|^2_{B,b}`` with ``r |X|^2_{B,r b}`` for ``X_r(t) = r X(r t)``.

    Raises:
        GridError: If ``r <= 0``
    """
    if r <= 0:
        raise GridError(f"Homothety factor must be positive, got {r}")
    rescaled = rescale_tangent(X, r)
    return HomothetyReport(
        rescaled_norm=bielawski_pair(rescaled, rescaled, MetricConfig(b=b)).value,
        scaled_norm=r * bielawski_pair(X, X, MetricConfig(b=r * b)).value,
    )
