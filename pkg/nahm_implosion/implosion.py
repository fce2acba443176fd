"""Baby Nahm equation and the universal symplectic implosion.

Solutions of ``T1' + [T0, T1] = 0`` on [0, 1] realise ``T*K``; on the
half-line with limit ``tau_1`` in a face of the positive Weyl chamber they
realise ``(K x t+_C) / [C, C]``. This module provides both identifications
with their inverses, closed-form tangent vectors built from root spaces, and
the explicit metric, complex structure and symplectic form on tangent
coordinates.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from nahm_implosion.config import MetricConfig
from nahm_implosion.exceptions import (
    GridError,
    LieAlgebraError,
    StratumError,
    ToleranceError,
)
from nahm_implosion.gauge_engine import (
    GaugePath,
    apply_gauge,
    matrix_to_pairs,
    ordered_exponential,
    polar_decompose,
    unitary_interpolant,
    unitary_log,
    unitary_projection,
)
from nahm_implosion.hk_metric import bielawski_pair, symplectic_pair
from nahm_implosion.lie_core import (
    RootSpace,
    StratumData,
    as_lie_element,
    bracket,
    centralizer_blocks,
    inner,
    project_stratum,
    root_spaces,
)
from nahm_implosion.nahm_dynamics import (
    Grid,
    NahmAsymptotics,
    NahmPath,
    TangentAsymptotics,
    TangentVector,
    model_solution,
    sup_norm,
)

logger = logging.getLogger(__name__)

BABY_RESIDUAL_TOLERANCE = 1e-6
FACE_TOLERANCE = 1e-8
LIMIT_TOLERANCE = 1e-6
COLLAPSE_TOLERANCE = 1e-8
Z_C_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class WeylFace:
    """A face of the closed positive Weyl chamber.

    ``tau1`` is ``i diag(d)`` with ``d`` non-increasing; ``permutation`` is the
    reordering that took the raw diagonal to ``tau1``.
    """

    tau1: np.ndarray
    blocks: Tuple[int, ...]
    stratum: StratumData
    permutation: Tuple[int, ...]
    roots: List[RootSpace] = field(default_factory=list)

    @property
    def n(self) -> int:
        return int(self.tau1.shape[0])

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.tau1).imag

    @property
    def alpha_values(self) -> List[float]:
        return [r.alpha_value for r in self.roots]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "diagonal": [float(d) for d in self.diagonal],
            "blocks": list(self.blocks),
            "permutation": list(self.permutation),
            "alpha_values": self.alpha_values,
        }


def weyl_face(tau1_raw: np.ndarray) -> WeylFace:
    """Sort a diagonal element into the closed positive chamber.

    Args:
        tau1_raw: Imaginary, traceless, diagonal matrix

    Returns:
        The chamber representative with its blocks, stratum and root spaces

    Raises:
        StratumError: If the input is not diagonal, imaginary and traceless
    """
    raw = np.asarray(tau1_raw, dtype=complex)
    zero = np.zeros_like(raw)
    centralizer_blocks((raw, zero, zero))
    values = np.diag(raw).imag
    order = np.argsort(-values, kind="stable")
    tau1 = np.diag(1j * values[order])
    stratum = centralizer_blocks((tau1, zero, zero))
    face = WeylFace(
        tau1=tau1,
        blocks=stratum.blocks,
        stratum=stratum,
        permutation=tuple(int(j) for j in order),
        roots=root_spaces(tau1, stratum),
    )
    logger.debug(f"Weyl face blocks={face.blocks}, alpha={face.alpha_values}")
    return face


def baby_path(
    grid: Grid,
    T0: np.ndarray,
    T1: np.ndarray,
    asymptotics: Optional[NahmAsymptotics] = None,
    derivatives: Optional[Tuple[np.ndarray, np.ndarray]] = None,
) -> NahmPath:
    """Package ``(T0, T1)`` samples as Nahm data with ``T2 = T3 = 0``."""
    T0 = np.asarray(T0, dtype=complex)
    T1 = np.asarray(T1, dtype=complex)
    if T0.shape != T1.shape or T0.shape[0] != grid.size:
        raise GridError("Baby Nahm components must share the grid")
    samples = np.zeros((grid.size, 4) + T0.shape[1:], dtype=complex)
    samples[:, 0] = T0
    samples[:, 1] = T1
    rates = None
    if derivatives is not None:
        rates = np.zeros_like(samples)
        rates[:, 0] = derivatives[0]
        rates[:, 1] = derivatives[1]
    return NahmPath(grid=grid, samples=samples, asymptotics=asymptotics, derivatives=rates)


def baby_residual(
    T0: np.ndarray, T1: np.ndarray, grid: Grid, T1_rate: Optional[np.ndarray] = None
) -> np.ndarray:
    """``T1' + [T0, T1]`` sampled on the grid.

    Raises:
        GridError: If the samples do not share the grid
    """
    T0 = np.asarray(T0, dtype=complex)
    T1 = np.asarray(T1, dtype=complex)
    if T0.shape != T1.shape or T0.shape[0] != grid.size:
        raise GridError("Baby Nahm components must share the grid")
    rate = grid.derivative(T1) if T1_rate is None else np.asarray(T1_rate)
    return rate + bracket(T0, T1)


def path_baby_residual(T: NahmPath) -> np.ndarray:
    rate = T.derivatives[:, 1] if T.derivatives is not None else None
    return baby_residual(T.samples[:, 0], T.samples[:, 1], T.grid, rate)


def _require_baby_solution(T: NahmPath) -> float:
    residual = sup_norm(path_baby_residual(T))
    if residual > BABY_RESIDUAL_TOLERANCE:
        raise ToleranceError(
            "Path does not solve the Baby Nahm equation",
            quantity="baby_residual",
            value=residual,
            tolerance=BABY_RESIDUAL_TOLERANCE,
        )
    return residual


class BabyPoint(NamedTuple):
    """Point ``(k, xi0)`` of ``K x k = T*K``."""

    k: np.ndarray
    xi0: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {"k": matrix_to_pairs(self.k), "xi0": matrix_to_pairs(self.xi0)}


def baby_phi_interval(T: NahmPath) -> BabyPoint:
    """``(u0(1), T1(0))`` where ``u0' = u0 T0``, ``u0(0) = 1`` kills ``T0``.

    Raises:
        GridError: If ``T`` is not on an interval grid
        ToleranceError: If the Baby Nahm residual exceeds 1e-6
    """
    if T.grid.kind != "interval":
        raise GridError("The interval identification needs an interval path")
    _require_baby_solution(T)
    u0, _ = ordered_exponential(T.samples[:, 0], T.grid, T.n)
    return BabyPoint(k=u0[-1], xi0=np.array(T.samples[0, 1]))


def baby_inverse_interval(k: np.ndarray, xi: np.ndarray, grid: Grid) -> NahmPath:
    """``u0^{-1}.(0, xi)`` with ``u0 = exp(t log k)``; explicitly ``(L, Ad(e^{-tL}) xi)``."""
    xi = np.asarray(xi, dtype=complex)
    n = xi.shape[0]
    constant = np.zeros((grid.size, n, n), dtype=complex)
    flat = baby_path(
        grid,
        constant,
        np.broadcast_to(xi, constant.shape),
        derivatives=(constant, constant),
    )
    u0 = unitary_interpolant(k, grid)
    return apply_gauge(u0.inverse(), flat)


@dataclass(frozen=True, eq=False)
class BabyHalflinePoint:
    """``(k, tau1)`` before collapsing by right multiplication with ``[C, C]``."""

    k: np.ndarray
    tau1: np.ndarray
    face: WeylFace

    def equivalent_to(self, other: "BabyHalflinePoint", tolerance: float = COLLAPSE_TOLERANCE) -> bool:
        if np.max(np.abs(self.tau1 - other.tau1)) > FACE_TOLERANCE:
            return False
        return collapse_equivalent(self.k, other.k, self.face).distance <= tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {"k": matrix_to_pairs(self.k), "face": self.face.to_dict()}


def baby_phi_halfline(T: NahmPath, face: WeylFace) -> BabyHalflinePoint:
    """``(w(inf), tau1)`` where ``w' = w T0``, ``w(0) = 1``.

    For ``T = u0.(0, tau1)`` with ``u0(inf) = 1`` this returns ``(u0(0), tau1)``.

    Raises:
        GridError: If ``T`` is not a half-line path
        StratumError: If the recorded limit is not the face's ``tau1``
        ToleranceError: If ``T1(T_max)`` is far from ``tau1`` or the residual is large
    """
    if T.grid.kind != "halfline" or T.asymptotics is None:
        raise GridError("The half-line identification needs a half-line path")
    if np.max(np.abs(T.asymptotics.tau[0] - face.tau1)) > FACE_TOLERANCE:
        raise StratumError(
            "Limit of T1 lies outside the declared face",
            details={"face": face.to_dict()},
        )
    distance = float(np.max(np.abs(T.samples[-1, 1] - face.tau1)))
    if distance > LIMIT_TOLERANCE:
        raise ToleranceError(
            "T1(T_max) has not reached its limit",
            quantity="limit_distance",
            value=distance,
            tolerance=LIMIT_TOLERANCE,
        )
    _require_baby_solution(T)
    w, _ = ordered_exponential(T.samples[:, 0], T.grid, T.n)
    return BabyHalflinePoint(k=w[-1], tau1=np.array(face.tau1), face=face)


def baby_inverse_halfline(
    k: np.ndarray, face: WeylFace, grid: Grid, rate: float = 1.0
) -> NahmPath:
    """``u0.(0, tau1)`` with ``u0 = exp(e^{-rate t} log k)`` so ``u0(0) = k``, ``u0(inf) = 1``."""
    if rate <= 0:
        raise GridError(f"Decay rate must be positive, got {rate}")
    log = unitary_log(k)
    n = face.n
    zero = np.zeros((n, n), dtype=complex)
    model = model_solution(None, (face.tau1, zero, zero), None, grid)
    u0 = GaugePath.one_parameter(
        grid,
        log,
        lambda t: np.exp(-rate * t),
        lambda t: -rate * np.exp(-rate * t),
        lambda t: rate * rate * np.exp(-rate * t),
        slope=zero,
        limit=np.eye(n, dtype=complex),
    )
    return apply_gauge(u0, model)


class CollapseReport(NamedTuple):
    distance: float
    factor: np.ndarray


def collapse_equivalent(k1: np.ndarray, k2: np.ndarray, face: WeylFace) -> CollapseReport:
    """Nearest ``c`` in ``[C, C]`` with ``k1 c ~ k2`` and the residual distance."""
    m = np.conj(np.asarray(k1, dtype=complex)).T @ np.asarray(k2, dtype=complex)
    factor = np.zeros_like(m)
    for members in face.stratum.groups:
        idx = np.ix_(members, members)
        block = unitary_projection(m[idx])
        d = len(members)
        phase = np.angle(np.linalg.det(block))
        candidates = [
            block * np.exp(-1j * (phase + 2.0 * np.pi * j) / d) for j in range(d)
        ]
        factor[idx] = min(candidates, key=lambda c: float(np.linalg.norm(c - m[idx])))
    distance = float(np.linalg.norm(np.asarray(k1) @ factor - np.asarray(k2)))
    return CollapseReport(distance=distance, factor=factor)


def _in_center(x: np.ndarray, s: StratumData, what: str) -> np.ndarray:
    x = as_lie_element(x)
    _, d1, h = project_stratum(x, s)
    defect = float(np.max(np.abs(d1 + h), initial=0.0))
    if defect > Z_C_TOLERANCE:
        raise LieAlgebraError(f"{what} must lie in Z(c) (defect {defect:.3e})")
    return x


@dataclass(frozen=True, eq=False)
class ImplosionTangent:
    """Closed-form tangent data at ``(0, tau1)``.

    ``xi(t) = (t - b) slope + sum_alpha xi_alpha(0) exp(-alpha t)`` generates
    ``X0 = -xi'``, ``X1 = [xi, tau1] + delta1``.
    """

    face: WeylFace
    delta1: np.ndarray
    slope: np.ndarray
    root_coeffs: np.ndarray
    b: float

    def __post_init__(self) -> None:
        s = self.face.stratum
        object.__setattr__(self, "delta1", _in_center(self.delta1, s, "delta1"))
        object.__setattr__(self, "slope", _in_center(self.slope, s, "slope"))
        coeffs = np.asarray(self.root_coeffs, dtype=float).reshape(-1, 2)
        if coeffs.shape[0] != len(self.face.roots):
            raise StratumError(
                f"Expected {len(self.face.roots)} root coefficient pairs, got {coeffs.shape[0]}"
            )
        object.__setattr__(self, "root_coeffs", coeffs)

    def root_components(self) -> List[np.ndarray]:
        """``xi_alpha(0)`` for each root space."""
        return [r.from_coordinates(c) for r, c in zip(self.face.roots, self.root_coeffs)]

    def generator(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(xi, xi', xi'')`` at the given times."""
        t = np.asarray(t, dtype=float)
        xi = (t - self.b)[:, None, None] * self.slope
        rate = np.broadcast_to(self.slope, xi.shape).astype(complex)
        accel = np.zeros_like(xi)
        for root, v in zip(self.face.roots, self.root_components()):
            decay = np.exp(-root.alpha_value * t)[:, None, None]
            xi = xi + decay * v
            rate = rate - root.alpha_value * decay * v
            accel = accel + root.alpha_value ** 2 * decay * v
        return xi, rate, accel

    def ode_residual(self, t: np.ndarray) -> np.ndarray:
        """``xi'' + [tau1, [tau1, xi]]``."""
        xi, _, accel = self.generator(t)
        tau1 = self.face.tau1
        return accel + bracket(tau1, bracket(tau1, xi))

    def closed_form_norm(self) -> float:
        """``b (|delta1|^2 + |slope|^2) + sum alpha |xi_alpha(0)|^2``."""
        value = self.b * (inner(self.delta1, self.delta1) + inner(self.slope, self.slope))
        for root, c in zip(self.face.roots, self.root_coeffs):
            value += root.alpha_value * float(np.dot(c, c))
        return float(value)


def baby_tangent(
    face: WeylFace,
    delta1: np.ndarray,
    slope: np.ndarray,
    root_coeffs: Sequence[Sequence[float]],
    b: float,
    grid: Optional[Grid] = None,
) -> Tuple[ImplosionTangent, TangentVector]:
    """Build the closed-form tangent and sample it on a half-line grid.

    Raises:
        StratumError: If the coefficient count does not match the root spaces
        LieAlgebraError: If ``delta1`` or ``slope`` leave Z(c)
    """
    tangent = ImplosionTangent(
        face=face, delta1=delta1, slope=slope, root_coeffs=np.asarray(root_coeffs), b=b
    )
    grid = grid or Grid.halfline()
    xi, rate, accel = tangent.generator(grid.nodes)
    tau1 = face.tau1
    n = face.n
    samples = np.zeros((grid.size, 4, n, n), dtype=complex)
    derivatives = np.zeros_like(samples)
    samples[:, 0] = -rate
    samples[:, 1] = bracket(xi, tau1) + tangent.delta1
    derivatives[:, 0] = -accel
    derivatives[:, 1] = bracket(rate, tau1)
    delta = np.zeros((4, n, n), dtype=complex)
    delta[0] = -tangent.slope
    delta[1] = tangent.delta1
    asymptotics = TangentAsymptotics.build(delta, stratum=face.stratum)
    vector = TangentVector(grid=grid, samples=samples, asymptotics=asymptotics, derivatives=derivatives)
    return tangent, vector


def baby_background(face: WeylFace, grid: Grid) -> NahmPath:
    """The constant solution ``(0, tau1)`` on the half-line."""
    zero = np.zeros((face.n, face.n), dtype=complex)
    return model_solution(None, (face.tau1, zero, zero), None, grid)


@dataclass(frozen=True, eq=False)
class ImplosionCoordinates:
    """Tangent coordinates ``(v, v_perp, w)`` with ``v, w`` in Z(c), ``v_perp`` in c^perp."""

    v: np.ndarray
    v_perp: np.ndarray
    w: np.ndarray

    @classmethod
    def random(cls, face: WeylFace, rng: np.random.Generator) -> "ImplosionCoordinates":
        center = face.stratum.center_basis
        v = np.einsum("p,pij->ij", rng.normal(size=center.shape[0]), center)
        w = np.einsum("p,pij->ij", rng.normal(size=center.shape[0]), center)
        v_perp = np.zeros((face.n, face.n), dtype=complex)
        for root in face.roots:
            v_perp = v_perp + root.from_coordinates(rng.normal(size=2))
        return cls(v=v.astype(complex), v_perp=v_perp, w=w.astype(complex))

    def is_zero(self) -> bool:
        return not (np.any(self.v) or np.any(self.v_perp) or np.any(self.w))

    def to_tangent(self, face: WeylFace, b: float) -> ImplosionTangent:
        """Inverse of ``tangent_coordinates`` for the parameter ``b``."""
        coeffs = np.array([root.coordinates(self.v_perp) for root in face.roots]).reshape(-1, 2)
        return ImplosionTangent(face=face, delta1=self.w, slope=-self.v / b, root_coeffs=coeffs, b=b)


def tangent_coordinates(tangent: ImplosionTangent) -> ImplosionCoordinates:
    """``(v, v_perp, w) = (-b slope, sum xi_alpha(0), delta1)``."""
    n = tangent.face.n
    v_perp = np.zeros((n, n), dtype=complex)
    for component in tangent.root_components():
        v_perp = v_perp + component
    return ImplosionCoordinates(v=-tangent.b * tangent.slope, v_perp=v_perp, w=np.array(tangent.delta1))


class BabyGeometry:
    """Closed-form Kahler structure on tangent coordinates of one face.

    Args:
        face: Weyl chamber face
        b: Metric parameter; must be positive for the metric and the complex
            structure
    """

    def __init__(self, face: WeylFace, b: float) -> None:
        self.face = face
        self.b = b

    def _require_positive_b(self) -> None:
        if self.b <= 0:
            raise ToleranceError(
                "The metric and complex structure need b > 0", quantity="b", value=self.b, tolerance=0.0
            )

    def metric(self, x: ImplosionCoordinates, y: ImplosionCoordinates) -> float:
        """``b <w, w'> + <v, v'> / b + sum alpha <v_perp_alpha, v'_perp_alpha>``."""
        self._require_positive_b()
        value = self.b * inner(x.w, y.w) + inner(x.v, y.v) / self.b
        for root in self.face.roots:
            value += root.alpha_value * float(np.dot(root.coordinates(x.v_perp), root.coordinates(y.v_perp)))
        return float(value)

    def complex_structure(self, x: ImplosionCoordinates) -> ImplosionCoordinates:
        """``I(v + v_perp, w) = (-b w + I0 v_perp, v / b)``."""
        self._require_positive_b()
        v_perp = np.zeros_like(x.v_perp)
        for root in self.face.roots:
            v_perp = v_perp + root.apply_i0(x.v_perp)
        return ImplosionCoordinates(v=-self.b * x.w, v_perp=v_perp, w=x.v / self.b)

    def kks(self, x: ImplosionCoordinates, y: ImplosionCoordinates) -> float:
        """``<tau1, [v_perp, v'_perp]>``."""
        return float(inner(self.face.tau1, bracket(x.v_perp, y.v_perp)))

    def symplectic(self, x: ImplosionCoordinates, y: ImplosionCoordinates) -> float:
        """``<v, w'> - <w, v'> + <tau1, [v_perp, v'_perp]>`` (no dependence on b)."""
        return float(inner(x.v, y.w) - inner(x.w, y.v)) + self.kks(x, y)

    def symplectic_via_metric(self, x: ImplosionCoordinates, y: ImplosionCoordinates) -> float:
        """``g(I x, y)``."""
        return self.metric(self.complex_structure(x), y)

    def to_dict(self, samples: Sequence[ImplosionCoordinates] = ()) -> Dict[str, Any]:
        table = [
            [self.metric(x, y) if self.b > 0 else None, self.symplectic(x, y)]
            for x in samples
            for y in samples
        ]
        return {"b": self.b, "face": self.face.to_dict(), "evaluator_table": table}


def baby_geometry(face: WeylFace, b: float) -> BabyGeometry:
    return BabyGeometry(face, b)


def integrated_metric(
    x: ImplosionCoordinates,
    y: ImplosionCoordinates,
    face: WeylFace,
    b: float,
    grid: Optional[Grid] = None,
) -> float:
    """``<X, Y>_{B,b}`` of the sampled tangents with coordinates ``x`` and ``y``."""
    _, vx = baby_tangent(face, x.w, -x.v / b, _root_coordinates(face, x.v_perp), b, grid)
    _, vy = baby_tangent(face, y.w, -y.v / b, _root_coordinates(face, y.v_perp), b, grid)
    return bielawski_pair(vx, vy, MetricConfig(b=b)).value


def integrated_symplectic(
    x: ImplosionCoordinates,
    y: ImplosionCoordinates,
    face: WeylFace,
    b: float,
    grid: Optional[Grid] = None,
) -> float:
    """``omega_I(X, Y)`` of the sampled tangents with coordinates ``x`` and ``y``.

    The quaternion ``I`` of ``hk_metric`` and the coordinate map
    ``v = -b slope`` give the opposite orientation to ``BabyGeometry``:
    the result equals ``-BabyGeometry(face, b).symplectic(x, y)`` for every
    ``b > 0``.
    """
    _, vx = baby_tangent(face, x.w, -x.v / b, _root_coordinates(face, x.v_perp), b, grid)
    _, vy = baby_tangent(face, y.w, -y.v / b, _root_coordinates(face, y.v_perp), b, grid)
    return symplectic_pair("I", vx, vy, MetricConfig(b=b))


def _root_coordinates(face: WeylFace, v_perp: np.ndarray) -> np.ndarray:
    return np.array([root.coordinates(v_perp) for root in face.roots]).reshape(-1, 2)


def interval_symplectic_pullback(
    psi: Tuple[np.ndarray, np.ndarray],
    phi: Tuple[np.ndarray, np.ndarray],
    grid: Optional[Grid] = None,
    theta: float = 1e-4,
) -> Tuple[float, float]:
    """Pull ``omega_I`` back through the inverse interval map at ``(1, 0)``.

    Tangents ``(psi_1, psi_2)`` at ``(1, 0)`` follow the curves
    ``theta -> (exp(theta psi_1), theta psi_2)``; their images are
    differentiated by central differences.

    Returns:
        ``(pulled_back, standard)`` where ``standard = <psi_2, phi_1> - <psi_1, phi_2>``
    """
    grid = grid or Grid.interval()

    def image(pair: Tuple[np.ndarray, np.ndarray]) -> TangentVector:
        a, c = (np.asarray(m, dtype=complex) for m in pair)
        plus = baby_inverse_interval(linalg.expm(theta * a), theta * c, grid)
        minus = baby_inverse_interval(linalg.expm(-theta * a), -theta * c, grid)
        return TangentVector(grid=grid, samples=(plus.samples - minus.samples) / (2.0 * theta))

    pulled = symplectic_pair("I", image(psi), image(phi), MetricConfig())
    standard = float(inner(psi[1], phi[0]) - inner(psi[0], phi[1]))
    return pulled, standard


def complexified_baby_solution(g: np.ndarray, grid: Optional[Grid] = None) -> NahmPath:
    """Interval Baby Nahm solution of ``g = k exp(i xi)`` in K_C."""
    k, xi = polar_decompose(g)
    return baby_inverse_interval(k, xi, grid or Grid.interval())


def complex_point(T: NahmPath) -> np.ndarray:
    """``k exp(i xi0)`` from the interval identification."""
    point = baby_phi_interval(T)
    return point.k @ linalg.expm(1j * point.xi0)
