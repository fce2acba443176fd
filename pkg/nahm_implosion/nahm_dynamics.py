"""Discretised Nahm flows.

Grids on [0, L] and on a truncated half-line, sampled Nahm data and tangent
vectors, model solutions, the Nahm residual (the hyperkahler moment map up to
sign), RK4 initial-value integration, the linearised equations with the
horizontality condition, and decay-rate diagnostics.

Sampled paths are arrays of shape ``(N, 4, n, n)`` (node, component, matrix).
Paths built from closed forms carry exact derivative samples; otherwise time
derivatives use the three-point stencil on the nonuniform grid.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate, interpolate

from nahm_implosion.exceptions import (
    AsymptoticsError,
    GridError,
    IntegrationBlowUpError,
    LieAlgebraError,
)
from nahm_implosion.lie_core import (
    StratumData,
    Su2Triple,
    as_lie_element,
    asymptotic_relation_residuals,
    bracket,
    centralizer_blocks,
    project_stratum,
)

logger = logging.getLogger(__name__)

MIN_NODES = 16
DEFAULT_T_MAX = 40.0
DEFAULT_SEGMENTS = 2048
BLOW_UP_THRESHOLD = 1e6
RELATION_TOLERANCE = 1e-10

CYCLIC = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


@dataclass(frozen=True, eq=False)
class Grid:
    """Time nodes on an interval or a truncated half-line.

    ``breaks`` lists interior node indices where piecewise quadrature and
    differencing restart (a glued path is only piecewise smooth).
    """

    nodes: np.ndarray
    kind: str
    breaks: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < MIN_NODES:
            raise GridError(
                f"Grid needs at least {MIN_NODES} nodes, got {nodes.size}",
                details={"nodes": int(nodes.size)},
            )
        if nodes[0] != 0.0:
            raise GridError(f"Grid must start at 0, starts at {nodes[0]}")
        if np.any(np.diff(nodes) <= 0):
            raise GridError("Grid nodes must be strictly increasing")
        if self.kind not in ("interval", "halfline"):
            raise GridError(f"Unknown grid kind '{self.kind}'")
        for b in self.breaks:
            if not 0 < b < nodes.size - 1:
                raise GridError(f"Break index {b} outside the grid interior")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "breaks", tuple(sorted(self.breaks)))

    @classmethod
    def interval(cls, length: float = 1.0, nodes: int = 1025) -> "Grid":
        """Uniform grid on [0, length]."""
        return cls(nodes=np.linspace(0.0, length, nodes), kind="interval")

    @classmethod
    def halfline(
        cls, t_max: float = DEFAULT_T_MAX, segments: int = DEFAULT_SEGMENTS
    ) -> "Grid":
        """Geometric grid ``t_k = (1 + t_max)^(k/N) - 1`` on [0, t_max]."""
        k = np.arange(segments + 1)
        nodes = (1.0 + t_max) ** (k / segments) - 1.0
        nodes[0] = 0.0
        nodes[-1] = t_max
        return cls(nodes=nodes, kind="halfline")

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    @property
    def t_max(self) -> float:
        return float(self.nodes[-1])

    def same_as(self, other: "Grid") -> bool:
        return (
            self is other
            or (
                self.kind == other.kind
                and self.breaks == other.breaks
                and np.array_equal(self.nodes, other.nodes)
            )
        )

    def require_same(self, other: "Grid") -> None:
        """Raise GridError unless both paths live on this grid."""
        if not self.same_as(other):
            raise GridError(
                "Paths live on different grids",
                details={"left": [self.kind, self.size], "right": [other.kind, other.size]},
            )

    def segments(self) -> List[Tuple[int, int]]:
        """Inclusive ``(start, stop)`` node ranges between breaks."""
        edges = [0] + list(self.breaks) + [self.size - 1]
        return list(zip(edges[:-1], edges[1:]))

    def derivative(self, samples: np.ndarray) -> np.ndarray:
        """Three-point derivative along axis 0, one-sided second order at segment ends."""
        out = np.empty_like(samples)
        for start, stop in self.segments():
            piece = slice(start, stop + 1)
            out[piece] = np.gradient(samples[piece], self.nodes[piece], axis=0, edge_order=2)
        return out

    def integrate(self, values: np.ndarray, stop: Optional[int] = None, start: int = 0) -> float:
        """Composite Simpson integral of node values over ``[start, stop]``, per segment."""
        stop = self.size - 1 if stop is None else stop
        total = 0.0
        for a, b in self.segments():
            lo, hi = max(a, start), min(b, stop)
            if hi - lo >= 2:
                total += float(integrate.simpson(values[lo:hi + 1], x=self.nodes[lo:hi + 1], axis=0))
            elif hi - lo == 1:
                total += float(
                    0.5 * (values[lo] + values[hi]) * (self.nodes[hi] - self.nodes[lo])
                )
        return total

    def index_at(self, t: float) -> int:
        """Index of the first node at or after ``t``."""
        return int(min(np.searchsorted(self.nodes, t - 1e-12), self.size - 1))

    def rescaled(self, r: float) -> "Grid":
        return Grid(nodes=self.nodes / r, kind=self.kind, breaks=self.breaks)


def _frozen(arr: Optional[np.ndarray]) -> Optional[np.ndarray]:
    if arr is None:
        return None
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


def sup_norm(samples: np.ndarray) -> float:
    """Largest Frobenius norm over all leading indices of a sampled path."""
    if samples.size == 0:
        return 0.0
    return float(np.max(np.sqrt(np.sum(np.abs(samples) ** 2, axis=(-2, -1)))))


@dataclass(frozen=True, eq=False)
class NahmAsymptotics:
    """Model data ``(tau0, tau, sigma)`` prescribing half-line asymptotics."""

    tau0: np.ndarray
    tau: Tuple[np.ndarray, np.ndarray, np.ndarray]
    sigma: Su2Triple
    stratum: StratumData

    @classmethod
    def build(
        cls,
        tau0: Optional[np.ndarray],
        tau: Sequence[np.ndarray],
        sigma: Union[Su2Triple, Sequence[np.ndarray], None] = None,
        stratum: Optional[StratumData] = None,
    ) -> "NahmAsymptotics":
        """Validate and assemble an asymptotic record.

        Raises:
            TripleError: If sigma fails the triple invariants in c(tau)
            LieAlgebraError: If tau0 lies outside Z(c)
        """
        if stratum is None:
            stratum = centralizer_blocks(tau)
        n = stratum.n
        if tau0 is None:
            tau0 = np.zeros((n, n), dtype=complex)
        tau0 = as_lie_element(tau0)
        d0, d1, h = project_stratum(tau0, stratum)
        defect = float(np.max(np.abs(d1 + h), initial=0.0))
        if defect > RELATION_TOLERANCE:
            raise LieAlgebraError(
                f"tau0 must lie in Z(c) (defect {defect:.3e})", details={"defect": defect}
            )
        if sigma is None:
            triple = Su2Triple.zero(n)
        else:
            raw = sigma.sigma if isinstance(sigma, Su2Triple) else sigma
            triple = Su2Triple.validated(raw, stratum=stratum)
        return cls(tau0=tau0, tau=stratum.tau, sigma=triple, stratum=stratum)

    def model_value(self, t: np.ndarray, shift: float = 1.0) -> np.ndarray:
        """Model solution samples ``(tau0, tau_i + sigma_i / (2(t + shift)))``."""
        t = np.asarray(t, dtype=float)
        factor = 1.0 / (2.0 * (t + shift))
        out = np.empty(t.shape + (4, self.stratum.n, self.stratum.n), dtype=complex)
        out[..., 0, :, :] = self.tau0
        for i in range(3):
            out[..., i + 1, :, :] = self.tau[i] + factor[..., None, None] * self.sigma.sigma[i]
        return out


@dataclass(frozen=True, eq=False)
class NahmPath:
    """Sampled Nahm data ``(T0, T1, T2, T3)`` on a grid."""

    grid: Grid
    samples: np.ndarray
    asymptotics: Optional[NahmAsymptotics] = None
    derivatives: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        samples = _frozen(self.samples)
        if samples.ndim != 4 or samples.shape[0] != self.grid.size or samples.shape[1] != 4:
            raise GridError(
                f"Samples of shape {samples.shape} do not fit a grid of {self.grid.size} nodes"
            )
        if self.derivatives is not None and np.shape(self.derivatives) != samples.shape:
            raise GridError("Derivative samples must match the sample shape")
        if self.grid.kind == "interval" and self.asymptotics is not None:
            raise AsymptoticsError("Interval paths carry no asymptotic record")
        if self.grid.kind == "halfline" and self.asymptotics is None:
            raise AsymptoticsError("Half-line paths must carry an asymptotic record")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "derivatives", _frozen(self.derivatives))

    @property
    def n(self) -> int:
        return int(self.samples.shape[-1])

    def component(self, i: int) -> np.ndarray:
        return self.samples[:, i]

    def time_derivative(self) -> np.ndarray:
        if self.derivatives is not None:
            return self.derivatives
        return self.grid.derivative(self.samples)

    def perturbed(self, x: "TangentVector", theta: float) -> "NahmPath":
        """``T + theta X`` (exact derivatives kept when both carry them)."""
        self.grid.require_same(x.grid)
        derivatives = None
        if self.derivatives is not None and x.derivatives is not None:
            derivatives = self.derivatives + theta * x.derivatives
        return NahmPath(
            grid=self.grid,
            samples=self.samples + theta * x.samples,
            asymptotics=self.asymptotics,
            derivatives=derivatives,
        )


@dataclass(frozen=True, eq=False)
class TangentAsymptotics:
    """Limits ``delta`` (in Z(c)) and ``1/(2(t+1))`` coefficients ``eps`` (in [c,c])."""

    delta: np.ndarray
    eps: np.ndarray

    @classmethod
    def build(
        cls,
        delta: Sequence[np.ndarray],
        eps: Optional[Sequence[np.ndarray]] = None,
        stratum: Optional[StratumData] = None,
    ) -> "TangentAsymptotics":
        """Assemble (and with a stratum, validate) tangent asymptotics.

        ``eps`` may have three components (eps_1..eps_3) or four.

        Raises:
            AsymptoticsError: If the algebraic relations with the stratum fail
        """
        delta_arr = np.array(delta, dtype=complex)
        if delta_arr.shape[0] != 4:
            raise AsymptoticsError(f"delta needs 4 components, got {delta_arr.shape[0]}")
        if eps is None:
            eps_arr = np.zeros_like(delta_arr)
        else:
            eps_arr = np.array(eps, dtype=complex)
            if eps_arr.shape[0] == 3:
                eps_arr = np.concatenate([np.zeros_like(eps_arr[:1]), eps_arr], axis=0)
            if eps_arr.shape != delta_arr.shape:
                raise AsymptoticsError("eps must have 3 or 4 components matching delta")
        if stratum is not None:
            _, d1, h = project_stratum(delta_arr, stratum)
            e0, _, eh = project_stratum(eps_arr, stratum)
            outside = max(
                float(np.max(np.abs(d1 + h), initial=0.0)),
                float(np.max(np.abs(e0 + eh), initial=0.0)),
            )
            residuals = asymptotic_relation_residuals(stratum, delta_arr, eps_arr)
            worst = max([outside] + list(residuals.values()))
            if worst > RELATION_TOLERANCE:
                raise AsymptoticsError(
                    f"Tangent asymptotics violate the stratum relations ({worst:.3e})",
                    details={"subspace_defect": outside, **residuals},
                )
        return cls(delta=_frozen(delta_arr), eps=_frozen(eps_arr))

    @classmethod
    def zero(cls, n: int) -> "TangentAsymptotics":
        z = np.zeros((4, n, n), dtype=complex)
        return cls(delta=_frozen(z), eps=_frozen(z))

    def combined(self, other: "TangentAsymptotics", a: float, b: float) -> "TangentAsymptotics":
        return TangentAsymptotics(
            delta=_frozen(a * self.delta + b * other.delta),
            eps=_frozen(a * self.eps + b * other.eps),
        )


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Sampled tangent quadruple ``(X0, ..., X3)`` with optional asymptotics."""

    grid: Grid
    samples: np.ndarray
    asymptotics: Optional[TangentAsymptotics] = None
    derivatives: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        samples = _frozen(self.samples)
        if samples.ndim != 4 or samples.shape[0] != self.grid.size or samples.shape[1] != 4:
            raise GridError(
                f"Samples of shape {samples.shape} do not fit a grid of {self.grid.size} nodes"
            )
        if self.derivatives is not None and np.shape(self.derivatives) != samples.shape:
            raise GridError("Derivative samples must match the sample shape")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "derivatives", _frozen(self.derivatives))

    @classmethod
    def zero(cls, grid: Grid, n: int) -> "TangentVector":
        asymptotics = TangentAsymptotics.zero(n) if grid.kind == "halfline" else None
        z = np.zeros((grid.size, 4, n, n), dtype=complex)
        return cls(grid=grid, samples=z, asymptotics=asymptotics, derivatives=z)

    @property
    def n(self) -> int:
        return int(self.samples.shape[-1])

    def time_derivative(self) -> np.ndarray:
        if self.derivatives is not None:
            return self.derivatives
        return self.grid.derivative(self.samples)

    def combined(self, other: "TangentVector", a: float = 1.0, b: float = 1.0) -> "TangentVector":
        """Linear combination ``a * self + b * other``."""
        self.grid.require_same(other.grid)
        asymptotics = None
        if self.asymptotics is not None and other.asymptotics is not None:
            asymptotics = self.asymptotics.combined(other.asymptotics, a, b)
        derivatives = None
        if self.derivatives is not None and other.derivatives is not None:
            derivatives = a * self.derivatives + b * other.derivatives
        return TangentVector(
            grid=self.grid,
            samples=a * self.samples + b * other.samples,
            asymptotics=asymptotics,
            derivatives=derivatives,
        )

    def scaled(self, a: float) -> "TangentVector":
        return self.combined(self, a, 0.0)

    def restricted(self, weights: np.ndarray) -> "TangentVector":
        """Multiply by node weights ``h(t)`` vanishing at the far end (compact support).

        Raises:
            GridError: If the weights do not fit the grid or do not vanish at T_max
        """
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (self.grid.size,):
            raise GridError("Weights must have one entry per node")
        if weights[-1] != 0.0:
            raise GridError("Restricted tangents must vanish at the last node")
        asymptotics = TangentAsymptotics.zero(self.n) if self.asymptotics is not None else None
        return TangentVector(
            grid=self.grid,
            samples=weights[:, None, None, None] * self.samples,
            asymptotics=asymptotics,
        )


def model_solution(
    tau0: Optional[np.ndarray],
    tau: Sequence[np.ndarray],
    sigma: Union[Su2Triple, Sequence[np.ndarray], None],
    grid: Grid,
    shift: float = 1.0,
) -> NahmPath:
    """Exact solution ``(tau0, tau_i + sigma_i / (2(t + shift)))``.

    ``shift = 1`` is the model solution. On half-line grids the asymptotic
    record is attached; interval grids produce bare exact solutions (used as
    matching pieces when gluing).

    Raises:
        TripleError: If sigma is not a triple in c(tau)
        LieAlgebraError: If tau0 lies outside Z(c)
        GridError: If shift does not keep the pole off the grid
    """
    if shift <= 0:
        raise GridError(f"shift must be positive, got {shift}")
    record = NahmAsymptotics.build(tau0, tau, sigma)
    t = grid.nodes
    samples = record.model_value(t, shift)
    derivatives = np.zeros_like(samples)
    rate = -1.0 / (2.0 * (t + shift) ** 2)
    for i in range(3):
        derivatives[:, i + 1] = rate[:, None, None] * record.sigma.sigma[i]
    logger.debug(
        f"Model solution on {grid.kind} grid ({grid.size} nodes), blocks={record.stratum.blocks}"
    )
    return NahmPath(
        grid=grid,
        samples=samples,
        asymptotics=record if grid.kind == "halfline" else None,
        derivatives=derivatives,
    )


def nahm_residual(T: NahmPath) -> np.ndarray:
    """``T_i' + [T0, T_i] - [T_j, T_k]`` for cyclic (i, j, k).

    Returns:
        Array of shape ``(N, 3, n, n)``; this is minus the hyperkahler moment map
    """
    derivative = T.time_derivative()
    s = T.samples
    out = np.empty((s.shape[0], 3) + s.shape[2:], dtype=complex)
    for i, j, k in CYCLIC:
        out[:, i - 1] = (
            derivative[:, i] + bracket(s[:, 0], s[:, i]) - bracket(s[:, j], s[:, k])
        )
    return out


def linearized_residual(T: NahmPath, X: TangentVector) -> np.ndarray:
    """Linearised Nahm equations at ``T`` in direction ``X``, shape ``(N, 3, n, n)``."""
    T.grid.require_same(X.grid)
    derivative = X.time_derivative()
    s = T.samples
    x = X.samples
    out = np.empty((s.shape[0], 3) + s.shape[2:], dtype=complex)
    for i, j, k in CYCLIC:
        out[:, i - 1] = (
            derivative[:, i]
            + bracket(s[:, 0], x[:, i])
            + bracket(x[:, 0], s[:, i])
            - bracket(s[:, j], x[:, k])
            - bracket(x[:, j], s[:, k])
        )
    return out


def horizontality_residual(T: NahmPath, X: TangentVector) -> np.ndarray:
    """``X0' + sum_{i=0..3} [T_i, X_i]``, shape ``(N, n, n)``."""
    T.grid.require_same(X.grid)
    derivative = X.time_derivative()
    return derivative[:, 0] + np.sum(bracket(T.samples, X.samples), axis=1)


class _SampledFunction:
    """Cubic-spline interpolant of complex matrix samples on a grid."""

    def __init__(self, grid: Grid, samples: np.ndarray) -> None:
        self._real = interpolate.CubicSpline(grid.nodes, samples.real, axis=0)
        self._imag = interpolate.CubicSpline(grid.nodes, samples.imag, axis=0)

    def __call__(self, t: float) -> np.ndarray:
        return self._real(t) + 1j * self._imag(t)


MatrixFunction = Callable[[float], np.ndarray]


def as_time_function(
    value: Union[None, np.ndarray, MatrixFunction], grid: Grid, n: int
) -> MatrixFunction:
    """Normalise a constant, a callable or node samples into ``t -> matrix``."""
    if value is None:
        zero = np.zeros((n, n), dtype=complex)
        return lambda t: zero
    if callable(value):
        return value
    arr = np.asarray(value, dtype=complex)
    if arr.shape == (n, n):
        return lambda t: arr
    if arr.shape == (grid.size, n, n):
        return _SampledFunction(grid, arr)
    raise GridError(f"Cannot interpret T0 of shape {arr.shape} on this grid")


def integrate_ivp(
    initial: Sequence[np.ndarray],
    T0_of_t: Union[None, np.ndarray, MatrixFunction],
    grid: Grid,
    asymptotics: Optional[NahmAsymptotics] = None,
    blow_up: float = BLOW_UP_THRESHOLD,
) -> NahmPath:
    """Classic RK4 for ``T_i' = -[T0, T_i] + [T_j, T_k]`` with prescribed T0.

    Args:
        initial: ``(T1, T2, T3)`` at t = 0, or a quadruple whose first entry is ignored
        T0_of_t: Constant matrix, callable ``t -> matrix`` or node samples
        grid: Integration grid (one RK4 step per grid interval)
        asymptotics: Record to attach on half-line grids
        blow_up: Norm threshold that aborts the integration

    Raises:
        IntegrationBlowUpError: If any ``|T_i|`` exceeds ``blow_up``
    """
    mats = [np.asarray(m, dtype=complex) for m in initial]
    if len(mats) == 4:
        mats = mats[1:]
    if len(mats) != 3:
        raise GridError(f"Initial data needs 3 or 4 matrices, got {len(mats)}")
    n = mats[0].shape[0]
    t0 = as_time_function(T0_of_t, grid, n)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        a = t0(t)
        out = np.empty_like(y)
        for i, j, k in CYCLIC:
            out[i - 1] = -bracket(a, y[i - 1]) + bracket(y[j - 1], y[k - 1])
        return out

    t = grid.nodes
    samples = np.zeros((grid.size, 4, n, n), dtype=complex)
    y = np.stack(mats)
    samples[0, 1:] = y
    samples[0, 0] = t0(t[0])
    for step in range(grid.size - 1):
        h = t[step + 1] - t[step]
        k1 = rhs(t[step], y)
        k2 = rhs(t[step] + h / 2, y + h / 2 * k1)
        k3 = rhs(t[step] + h / 2, y + h / 2 * k2)
        k4 = rhs(t[step] + h, y + h * k3)
        y = y + h * (k1 / 6 + k2 / 3 + k3 / 3 + k4 / 6)
        size = float(np.max(np.sqrt(np.sum(np.abs(y) ** 2, axis=(-2, -1)))))
        if not np.isfinite(size) or size > blow_up:
            logger.warning(f"Nahm flow blew up at t={t[step + 1]:.6g} (norm {size:.3e})")
            raise IntegrationBlowUpError(
                f"Nahm flow exceeded {blow_up:.1e} at t={t[step + 1]:.6g}",
                t=float(t[step + 1]),
                norm=size,
            )
        samples[step + 1, 1:] = y
        samples[step + 1, 0] = t0(t[step + 1])
    logger.debug(f"RK4 integration finished on {grid.size} nodes")
    return NahmPath(grid=grid, samples=samples, asymptotics=asymptotics)


def extrapolated_limits(T: NahmPath) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``T_i(T_max) - sigma_i / (2(T_max + 1))`` as estimates of the limits tau_i.

    Raises:
        AsymptoticsError: For paths without an asymptotic record
    """
    if T.asymptotics is None:
        raise AsymptoticsError("Limit extrapolation needs an asymptotic record")
    t_max = T.grid.t_max
    sigma = T.asymptotics.sigma.sigma
    return tuple(  # type: ignore[return-value]
        T.samples[-1, i + 1] - sigma[i] / (2.0 * (t_max + 1.0)) for i in range(3)
    )


@dataclass(frozen=True)
class DecayReport:
    """Fitted decay exponents of the D and H parts of a sampled path."""

    zeta_fit: float
    eta_fit: float
    zeta_fit_residual: float
    eta_fit_residual: float
    zeta_weighted_sup: float
    eta_weighted_sup: float
    fit_window: Tuple[float, float] = field(default=(0.0, 0.0))

    def to_dict(self) -> Dict[str, float]:
        return {
            "zeta_fit": self.zeta_fit,
            "eta_fit": self.eta_fit,
            "zeta_fit_residual": self.zeta_fit_residual,
            "eta_fit_residual": self.eta_fit_residual,
            "zeta_weighted_sup": self.zeta_weighted_sup,
            "eta_weighted_sup": self.eta_weighted_sup,
        }


NEGLIGIBLE_NORM = 1e-300


def _log_fit(x: np.ndarray, norms: np.ndarray) -> Tuple[float, float]:
    keep = norms > NEGLIGIBLE_NORM
    if np.count_nonzero(keep) < 2:
        return math.inf, 0.0
    logs = np.log(norms[keep])
    slope, intercept = np.polyfit(x[keep], logs, 1)
    rms = float(np.sqrt(np.mean((logs - (slope * x[keep] + intercept)) ** 2)))
    return float(-slope), rms


def _weighted_sup(log_weight: np.ndarray, norms: np.ndarray) -> float:
    keep = norms > NEGLIGIBLE_NORM
    if not np.any(keep):
        return 0.0
    exponent = float(np.max(log_weight[keep] + np.log(norms[keep])))
    if exponent > 700.0:
        return math.inf
    return math.exp(exponent)


def decay_diagnostics(samples: np.ndarray, grid: Grid, s: StratumData) -> DecayReport:
    """Fit polynomial decay of the D part and exponential decay of the H part.

    Fits run on ``t in [T_max/2, T_max]``. ``zeta_fit`` solves
    ``log|f^D| ~ -(1 + zeta) log(1 + t)``, ``eta_fit`` solves ``log|f^H| ~ -eta t``.
    A part that vanishes identically on the window reports ``inf``.

    Args:
        samples: Sampled path in k, shape ``(N, n, n)``
        grid: Half-line grid with ``T_max >= 20``
        s: Stratum defining the D/H split

    Raises:
        GridError: If the grid is not a long enough half-line
    """
    if grid.kind != "halfline" or grid.t_max < 20.0:
        raise GridError("Decay diagnostics need a half-line grid with T_max >= 20")
    samples = np.asarray(samples, dtype=complex)
    if samples.shape[0] != grid.size:
        raise GridError("Sample count does not match the grid")
    d0, d1, h = project_stratum(samples, s)
    d_norms = np.sqrt(np.sum(np.abs(d0 + d1) ** 2, axis=(-2, -1)))
    h_norms = np.sqrt(np.sum(np.abs(h) ** 2, axis=(-2, -1)))
    t = grid.nodes
    window = t >= grid.t_max / 2.0
    zeta_rate, zeta_rms = _log_fit(np.log1p(t[window]), d_norms[window])
    eta_rate, eta_rms = _log_fit(t[window], h_norms[window])
    zeta_fit = zeta_rate - 1.0 if math.isfinite(zeta_rate) else math.inf

    zeta_weight = (1.0 + s.zeta) * np.log1p(t) if math.isfinite(s.zeta) else np.zeros_like(t)
    eta_weight = s.eta * t if math.isfinite(s.eta) else np.zeros_like(t)
    report = DecayReport(
        zeta_fit=zeta_fit,
        eta_fit=eta_rate,
        zeta_fit_residual=zeta_rms,
        eta_fit_residual=eta_rms,
        zeta_weighted_sup=_weighted_sup(zeta_weight, d_norms),
        eta_weighted_sup=_weighted_sup(eta_weight, h_norms),
        fit_window=(grid.t_max / 2.0, grid.t_max),
    )
    logger.debug(f"Decay fit: zeta={report.zeta_fit:.4g}, eta={report.eta_fit:.4g}")
    return report


def rescale_path(T: NahmPath, r: float) -> NahmPath:
    """Homothety ``T(t) -> r T(r t)`` on the rescaled grid ``nodes / r``."""
    grid = T.grid.rescaled(r)
    asymptotics = None
    if T.asymptotics is not None:
        a = T.asymptotics
        asymptotics = NahmAsymptotics.build(
            r * a.tau0, [r * x for x in a.tau], a.sigma.sigma
        )
    derivatives = None if T.derivatives is None else r * r * T.derivatives
    return NahmPath(grid=grid, samples=r * T.samples, asymptotics=asymptotics, derivatives=derivatives)


def rescale_tangent(X: TangentVector, r: float) -> TangentVector:
    """Homothety on tangents; limits scale by ``r``, ``eps`` is unchanged."""
    grid = X.grid.rescaled(r)
    asymptotics = None
    if X.asymptotics is not None:
        asymptotics = TangentAsymptotics(
            delta=_frozen(r * X.asymptotics.delta), eps=X.asymptotics.eps
        )
    derivatives = None if X.derivatives is None else r * r * X.derivatives
    return TangentVector(grid=grid, samples=r * X.samples, asymptotics=asymptotics, derivatives=derivatives)
