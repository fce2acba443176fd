"""su(n) structure layer.

Brackets, the invariant inner product ``<x, y> = -trace(xy)``, centraliser
strata of commuting diagonal triples, root spaces, standard su(2)-triples and
the Chern-Simons stability spectra.

All functions accept single ``(n, n)`` matrices; ``bracket``, ``inner`` and
``project_stratum`` also broadcast over leading axes so sampled paths of shape
``(N, ..., n, n)`` can be processed without Python loops.
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from nahm_implosion.exceptions import LieAlgebraError, StratumError, TripleError

logger = logging.getLogger(__name__)

SKEW_TOLERANCE = 1e-12
GROUPING_TOLERANCE = 1e-9
TRIPLE_TOLERANCE = 1e-10
SUBALGEBRA_TOLERANCE = 1e-10
POSITIVE_EIGENVALUE_FLOOR = 1e-9


def _check_same_shape(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape[-2:] != y.shape[-2:]:
        raise LieAlgebraError(
            f"Dimension mismatch: {x.shape[-2:]} vs {y.shape[-2:]}",
            details={"left": list(x.shape), "right": list(y.shape)},
        )


def as_lie_element(x, atol: float = SKEW_TOLERANCE) -> np.ndarray:
    """Validate and return a point of su(n).

    Args:
        x: Square array-like
        atol: Absolute entrywise tolerance, scaled by the largest entry

    Returns:
        Complex ``(n, n)`` array

    Raises:
        LieAlgebraError: If the matrix is not square, skew-Hermitian or traceless
    """
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise LieAlgebraError(f"Expected a square matrix, got shape {arr.shape}")
    scale = max(1.0, float(np.max(np.abs(arr), initial=0.0)))
    skew = float(np.max(np.abs(arr + arr.conj().T), initial=0.0))
    if skew > atol * scale:
        raise LieAlgebraError(
            f"Matrix is not skew-Hermitian (defect {skew:.3e})",
            details={"skew_defect": skew},
        )
    trace = abs(complex(np.trace(arr)))
    if trace > atol * scale * arr.shape[0]:
        raise LieAlgebraError(
            f"Matrix is not traceless (|trace| = {trace:.3e})",
            details={"trace": trace},
        )
    return arr


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Commutator ``xy - yx`` (broadcasts over leading axes).

    Raises:
        LieAlgebraError: On dimension mismatch
    """
    x = np.asarray(x)
    y = np.asarray(y)
    _check_same_shape(x, y)
    return x @ y - y @ x


def inner(x: np.ndarray, y: np.ndarray):
    """Invariant inner product ``-Re trace(xy)`` (broadcasts over leading axes).

    Returns:
        A float for single matrices, otherwise an array of the leading shape

    Raises:
        LieAlgebraError: On dimension mismatch
    """
    x = np.asarray(x)
    y = np.asarray(y)
    _check_same_shape(x, y)
    value = -np.einsum("...ij,...ji->...", x, y).real
    if np.ndim(value) == 0:
        return float(value)
    return value


def norm(x: np.ndarray):
    """Norm induced by ``inner`` on su(n) (broadcasts over leading axes)."""
    value = np.sqrt(np.sum(np.abs(np.asarray(x)) ** 2, axis=(-2, -1)))
    if np.ndim(value) == 0:
        return float(value)
    return value


def adjoint_action(u: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``u x u^{-1}`` (broadcasts; ``u`` may be a stack of matrices)."""
    return u @ x @ np.linalg.inv(u)


def adjoint_matrix(x: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Matrix of ``ad(x)`` restricted to the span of an orthonormal basis.

    Args:
        x: Lie algebra element
        basis: Orthonormal basis, shape ``(m, n, n)``

    Returns:
        Real ``(m, m)`` array ``M[p, q] = <basis_p, [x, basis_q]>``
    """
    images = bracket(x, basis)
    return -np.einsum("pij,qji->pq", basis, images).real


def random_lie_element(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Gaussian random element of su(n)."""
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    x = (a - a.conj().T) / 2
    x -= np.trace(x) / n * np.eye(n)
    return scale * x


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of SU(n)."""
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return q / np.linalg.det(q) ** (1.0 / n)


def _to_real_vectors(mats: np.ndarray) -> np.ndarray:
    m = mats.shape[0]
    return np.concatenate(
        [mats.real.reshape(m, -1), mats.imag.reshape(m, -1)], axis=1
    ).T


def _orthonormal_span(mats: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Orthonormal basis (for ``inner``) of the real span of skew-Hermitian matrices."""
    if len(mats) == 0:
        return np.zeros((0, n, n), dtype=complex)
    vectors = _to_real_vectors(np.asarray(mats, dtype=complex))
    q = linalg.orth(vectors, rcond=1e-10)
    half = n * n
    basis = (q[:half].T + 1j * q[half:].T).reshape(-1, n, n)
    return basis


def _pair_generators(n: int, j: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    e1 = np.zeros((n, n), dtype=complex)
    e1[j, k] = 1.0
    e1[k, j] = -1.0
    e2 = np.zeros((n, n), dtype=complex)
    e2[j, k] = 1j
    e2[k, j] = 1j
    return e1 / math.sqrt(2), e2 / math.sqrt(2)


def su_basis(n: int) -> np.ndarray:
    """Orthonormal basis of su(n), shape ``(n*n - 1, n, n)``."""
    mats: List[np.ndarray] = []
    for j, k in itertools.combinations(range(n), 2):
        mats.extend(_pair_generators(n, j, k))
    for j in range(n - 1):
        d = np.zeros((n, n), dtype=complex)
        d[j, j] = 1j
        d[j + 1, j + 1] = -1j
        mats.append(d)
    return _orthonormal_span(mats, n)


@dataclass(frozen=True, eq=False)
class StratumData:
    """A commuting diagonal triple with its centraliser structure.

    ``labels[j]`` is the block index of diagonal position ``j``; blocks are
    numbered in order of first appearance so ``blocks`` lists their sizes.
    """

    n: int
    tau: Tuple[np.ndarray, np.ndarray, np.ndarray]
    labels: Tuple[int, ...]
    blocks: Tuple[int, ...]
    zeta: float
    eta: float
    block_mask: np.ndarray
    center_basis: np.ndarray
    derived_basis: np.ndarray
    perp_basis: np.ndarray

    @property
    def groups(self) -> List[Tuple[int, ...]]:
        """Diagonal index sets of the blocks."""
        return [
            tuple(j for j, label in enumerate(self.labels) if label == g)
            for g in range(len(self.blocks))
        ]

    @property
    def c_basis(self) -> np.ndarray:
        """Orthonormal basis of the centraliser algebra c = Z(c) + [c,c]."""
        return np.concatenate([self.center_basis, self.derived_basis], axis=0)

    @property
    def is_contiguous(self) -> bool:
        return list(self.labels) == sorted(self.labels)

    def dims(self) -> Dict[str, int]:
        return {
            "center": int(self.center_basis.shape[0]),
            "derived": int(self.derived_basis.shape[0]),
            "perp": int(self.perp_basis.shape[0]),
        }


def _diagonal_values(mats: Sequence[np.ndarray]) -> np.ndarray:
    for m in mats:
        scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
        off = m - np.diag(np.diag(m))
        if np.max(np.abs(off), initial=0.0) > SKEW_TOLERANCE * scale:
            raise StratumError("Limiting triple must be diagonal")
        if np.max(np.abs(np.diag(m).real), initial=0.0) > SKEW_TOLERANCE * scale:
            raise StratumError("Limiting triple must be imaginary on the diagonal")
        if abs(complex(np.trace(m))) > SKEW_TOLERANCE * scale * m.shape[0]:
            raise StratumError("Limiting triple must be traceless")
    return np.stack([np.diag(m).imag for m in mats], axis=1)


def _group_labels(values: np.ndarray, tolerance: float) -> Tuple[int, ...]:
    labels: List[int] = []
    representatives: List[int] = []
    for j in range(values.shape[0]):
        for g, rep in enumerate(representatives):
            if np.max(np.abs(values[j] - values[rep])) <= tolerance:
                labels.append(g)
                break
        else:
            representatives.append(j)
            labels.append(len(representatives) - 1)
    return tuple(labels)


def _stratum_bases(
    n: int, labels: Tuple[int, ...]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    mask = np.equal.outer(np.array(labels), np.array(labels))
    group_count = max(labels) + 1
    center: List[np.ndarray] = []
    for g in range(group_count):
        indicator = np.array([1.0 if label == g else 0.0 for label in labels])
        center.append(np.diag(1j * (indicator - indicator.sum() / n)))
    derived: List[np.ndarray] = []
    perp: List[np.ndarray] = []
    for j, k in itertools.combinations(range(n), 2):
        if labels[j] == labels[k]:
            derived.extend(_pair_generators(n, j, k))
        else:
            perp.extend(_pair_generators(n, j, k))
    for g in range(group_count):
        members = [j for j, label in enumerate(labels) if label == g]
        for j, k in zip(members, members[1:]):
            d = np.zeros((n, n), dtype=complex)
            d[j, j] = 1j
            d[k, k] = -1j
            derived.append(d)
    return (
        mask,
        _orthonormal_span(center, n),
        _orthonormal_span(derived, n),
        _orthonormal_span(perp, n),
    )


def integer_partitions(m: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of ``m`` as non-increasing tuples, largest parts first."""
    if largest is None:
        largest = m
    if m == 0:
        yield ()
        return
    for part in range(min(m, largest), 0, -1):
        for rest in integer_partitions(m - part, part):
            yield (part,) + rest


def irreducible_triple(d: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Standard su(2)-triple of the ``d``-dimensional irreducible representation.

    Built from the ladder operator ``J+`` as ``sigma = 2i (Jz, Jx, Jy)`` so that
    ``[sigma_1, sigma_2] = -2 sigma_3`` cyclically.
    """
    j = (d - 1) / 2.0
    m = j - np.arange(d)
    jp = np.zeros((d, d))
    for k in range(1, d):
        jp[k - 1, k] = math.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    jm = jp.T
    jx = 0.5 * (jp + jm)
    jy = -0.5j * (jp - jm)
    jz = np.diag(m)
    return (2j * jz.astype(complex), 2j * jx.astype(complex), 2j * jy)


def _triple_from_parts(
    n: int, labels: Tuple[int, ...], parts: Sequence[Sequence[int]]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    sigma = [np.zeros((n, n), dtype=complex) for _ in range(3)]
    for g, part_list in enumerate(parts):
        members = [j for j, label in enumerate(labels) if label == g]
        offset = 0
        for d in part_list:
            if d > 1:
                sub = members[offset:offset + d]
                block = irreducible_triple(d)
                for i in range(3):
                    sigma[i][np.ix_(sub, sub)] = block[i]
            offset += d
    return (sigma[0], sigma[1], sigma[2])


def _hessian_matrix(sigma: Sequence[np.ndarray], c_basis: np.ndarray) -> np.ndarray:
    m = c_basis.shape[0]
    a1, a2, a3 = (adjoint_matrix(s, c_basis) for s in sigma)
    zero = np.zeros((m, m))
    cubic = np.block([[zero, -a3, a2], [a3, zero, -a1], [-a2, a1, zero]])
    return 2.0 * np.eye(3 * m) + cubic


def _casimir_matrix(sigma: Sequence[np.ndarray], c_basis: np.ndarray) -> np.ndarray:
    m = c_basis.shape[0]
    total = np.zeros((m, m))
    for s in sigma:
        a = adjoint_matrix(s, c_basis)
        total -= a @ a
    return total


def _spectra(sigma: Sequence[np.ndarray], c_basis: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if c_basis.shape[0] == 0:
        return np.zeros(0), np.zeros(0)
    hess = _hessian_matrix(sigma, c_basis)
    casimir = _casimir_matrix(sigma, c_basis)
    hess_spectrum = linalg.eigh(0.5 * (hess + hess.T), eigvals_only=True)
    casimir_spectrum = linalg.eigh(0.5 * (casimir + casimir.T), eigvals_only=True)
    return np.sort(hess_spectrum), np.sort(casimir_spectrum)


def _smallest_positive(values: np.ndarray) -> Optional[float]:
    positive = values[values > POSITIVE_EIGENVALUE_FLOOR]
    if positive.size == 0:
        return None
    return float(positive.min())


@functools.lru_cache(maxsize=128)
def _stratum_zeta(n: int, labels: Tuple[int, ...]) -> float:
    _, center, derived, _ = _stratum_bases(n, labels)
    c_basis = np.concatenate([center, derived], axis=0)
    sizes = [labels.count(g) for g in range(max(labels) + 1)]
    best = math.inf
    for parts in itertools.product(*(list(integer_partitions(m)) for m in sizes)):
        sigma = _triple_from_parts(n, labels, parts)
        hess, casimir = _spectra(sigma, c_basis)
        candidates = [
            v for v in (_smallest_positive(hess), _smallest_positive(casimir)) if v is not None
        ]
        if candidates:
            best = min(best, min(candidates))
    return best


def centralizer_blocks(
    tau: Sequence[np.ndarray], tolerance: float = GROUPING_TOLERANCE
) -> StratumData:
    """Centraliser block structure of a commuting diagonal triple.

    Args:
        tau: Three diagonal, imaginary, traceless matrices
        tolerance: Diagonal entries closer than this merge into one block

    Returns:
        StratumData with projector bases and the constants zeta, eta

    Raises:
        StratumError: If the input is not diagonal or not commuting
    """
    if len(tau) != 3:
        raise StratumError(f"Expected a triple, got {len(tau)} matrices")
    mats = tuple(np.array(t, dtype=complex) for t in tau)
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise StratumError("Limiting triple has inconsistent shapes")
    values = _diagonal_values(mats)
    for a, b in itertools.combinations(mats, 2):
        if np.max(np.abs(bracket(a, b))) > SKEW_TOLERANCE:
            raise StratumError("Limiting triple does not commute")

    labels = _group_labels(values, tolerance)
    blocks = tuple(labels.count(g) for g in range(max(labels) + 1))
    mask, center, derived, perp = _stratum_bases(n, labels)

    gaps = [
        float(np.sum((values[j] - values[k]) ** 2))
        for j, k in itertools.combinations(range(n), 2)
        if labels[j] != labels[k]
    ]
    eta = min(gaps) if gaps else math.inf
    zeta = _stratum_zeta(n, labels)

    for arr in (mask, center, derived, perp) + mats:
        arr.setflags(write=False)
    logger.debug(f"Stratum of su({n}): blocks={blocks}, zeta={zeta:.4g}, eta={eta:.4g}")
    return StratumData(
        n=n,
        tau=mats,
        labels=labels,
        blocks=blocks,
        zeta=zeta,
        eta=eta,
        block_mask=mask,
        center_basis=center,
        derived_basis=derived,
        perp_basis=perp,
    )


def project_stratum(
    x: np.ndarray, s: StratumData
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split ``x`` along ``k = Z(c) + [c,c] + c^perp`` (broadcasts).

    Returns:
        ``(x_D0, x_D1, x_H)``
    """
    x = np.asarray(x, dtype=complex)
    if x.shape[-2:] != (s.n, s.n):
        raise LieAlgebraError(f"Dimension mismatch: {x.shape[-2:]} vs {(s.n, s.n)}")
    x_d = np.where(s.block_mask, x, 0.0)
    x_h = x - x_d
    averaging = s.block_mask / s.block_mask.sum(axis=1, keepdims=True)
    diagonal = np.diagonal(x_d, axis1=-2, axis2=-1)
    means = np.einsum("...j,jk->...k", diagonal, averaging)
    x_d0 = np.zeros_like(x)
    idx = np.arange(s.n)
    x_d0[..., idx, idx] = means
    return x_d0, x_d - x_d0, x_h


def random_block_unitary(
    s: StratumData, rng: np.random.Generator, derived: bool = False
) -> np.ndarray:
    """Random element of the centraliser group C, or of [C,C] when ``derived``."""
    u = np.zeros((s.n, s.n), dtype=complex)
    for members in s.groups:
        block = random_unitary(len(members), rng)
        if not derived:
            block = block * np.exp(1j * rng.uniform(0, 2 * math.pi))
        u[np.ix_(members, members)] = block
    if not derived:
        u = u / np.linalg.det(u) ** (1.0 / s.n)
    return u


@dataclass(frozen=True, eq=False)
class Su2Triple:
    """Elements with ``[sigma_1, sigma_2] = -2 sigma_3`` and cyclic permutations."""

    sigma: Tuple[np.ndarray, np.ndarray, np.ndarray]

    @classmethod
    def validated(cls, sigma: Sequence[np.ndarray], stratum: Optional[StratumData] = None) -> "Su2Triple":
        """Build a triple after checking the bracket relations.

        Args:
            sigma: Three matrices
            stratum: When given, each sigma_i must also lie in [c,c]

        Raises:
            TripleError: If a relation fails
        """
        if len(sigma) != 3:
            raise TripleError(f"Expected three matrices, got {len(sigma)}")
        mats = tuple(as_lie_element(s) for s in sigma)
        residual = triple_residual(mats)
        if residual > TRIPLE_TOLERANCE:
            raise TripleError(
                f"Bracket relations fail (residual {residual:.3e})", residual=residual
            )
        if stratum is not None:
            for s in mats:
                d0, _, h = project_stratum(s, stratum)
                outside = float(np.max(np.abs(d0 + h), initial=0.0))
                if outside > SUBALGEBRA_TOLERANCE:
                    raise TripleError(
                        f"Triple leaves [c,c] (defect {outside:.3e})", residual=outside
                    )
        return cls(sigma=mats)  # type: ignore[arg-type]

    @classmethod
    def zero(cls, n: int) -> "Su2Triple":
        z = np.zeros((n, n), dtype=complex)
        return cls(sigma=(z, z.copy(), z.copy()))

    @property
    def n(self) -> int:
        return int(self.sigma[0].shape[0])

    @property
    def is_zero(self) -> bool:
        return all(np.max(np.abs(s), initial=0.0) == 0.0 for s in self.sigma)

    def conjugated(self, u: np.ndarray) -> "Su2Triple":
        return Su2Triple(sigma=tuple(adjoint_action(u, s) for s in self.sigma))  # type: ignore[arg-type]


def triple_residual(sigma: Sequence[np.ndarray]) -> float:
    """Largest entry of ``[sigma_i, sigma_j] + 2 sigma_k`` over cyclic (i, j, k)."""
    worst = 0.0
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        defect = bracket(sigma[i], sigma[j]) + 2 * sigma[k]
        worst = max(worst, float(np.max(np.abs(defect), initial=0.0)))
    return worst


def su2_triple_from_partition(s: StratumData, parts: Sequence[Sequence[int]]) -> Su2Triple:
    """Block-diagonal standard triple, one irreducible summand per part.

    Args:
        s: Stratum whose blocks are partitioned
        parts: One partition per block, in block order

    Raises:
        StratumError: If the partitions do not match the blocks
    """
    if len(parts) != len(s.blocks):
        raise StratumError(
            f"Expected {len(s.blocks)} partitions, got {len(parts)}",
            details={"blocks": list(s.blocks)},
        )
    for size, part_list in zip(s.blocks, parts):
        if sum(part_list) != size or any(p < 1 for p in part_list):
            raise StratumError(
                f"Partition {tuple(part_list)} does not sum to block size {size}",
                details={"blocks": list(s.blocks)},
            )
    sigma = _triple_from_parts(s.n, s.labels, parts)
    return Su2Triple.validated(sigma, stratum=s)


def principal_partition(s: StratumData) -> List[Tuple[int, ...]]:
    """One part per block: the principal (regular nilpotent) triple of c."""
    return [(size,) for size in s.blocks]


def chern_simons(xi: Sequence[np.ndarray], s: Optional[StratumData] = None) -> float:
    """``phi(xi) = sum <xi_i, xi_i> + <xi_1, [xi_2, xi_3]>``.

    Raises:
        LieAlgebraError: If ``s`` is given and a component leaves c
    """
    if s is not None:
        for x in xi:
            _, _, h = project_stratum(x, s)
            if np.max(np.abs(h), initial=0.0) > SUBALGEBRA_TOLERANCE:
                raise LieAlgebraError("Chern-Simons argument must lie in c")
    quadratic = sum(inner(x, x) for x in xi)
    return float(quadratic + inner(xi[0], bracket(xi[1], xi[2])))


def chern_simons_gradient(xi: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradient ``2 xi_i + [xi_j, xi_k]`` of ``chern_simons``."""
    return (
        2 * xi[0] + bracket(xi[1], xi[2]),
        2 * xi[1] + bracket(xi[2], xi[0]),
        2 * xi[2] + bracket(xi[0], xi[1]),
    )


def hessian_form(
    sigma: Sequence[np.ndarray], xi: Sequence[np.ndarray], psi: Sequence[np.ndarray]
) -> float:
    """Second derivative of ``chern_simons`` at ``sigma`` in directions ``xi``, ``psi``."""
    value = 2 * sum(inner(a, b) for a, b in zip(xi, psi))
    value += inner(xi[0], -bracket(sigma[2], psi[1]) + bracket(sigma[1], psi[2]))
    value += inner(xi[1], bracket(sigma[2], psi[0]) - bracket(sigma[0], psi[2]))
    value += inner(xi[2], bracket(sigma[0], psi[1]) - bracket(sigma[1], psi[0]))
    return float(value)


@dataclass(frozen=True)
class StabilitySpectra:
    hess_spectrum: np.ndarray
    casimir_spectrum: np.ndarray
    zeta_bound: float


def stability_constants(sigma: Su2Triple, s: StratumData) -> StabilitySpectra:
    """Hessian and Casimir spectra of a triple on c, with their zeta bound.

    Raises:
        StratumError: If neither spectrum has a positive eigenvalue
    """
    hess, casimir = _spectra(sigma.sigma, s.c_basis)
    candidates = [
        v for v in (_smallest_positive(hess), _smallest_positive(casimir)) if v is not None
    ]
    if not candidates:
        raise StratumError("No positive eigenvalue in either stability spectrum")
    return StabilitySpectra(
        hess_spectrum=hess, casimir_spectrum=casimir, zeta_bound=min(candidates)
    )


@dataclass(frozen=True, eq=False)
class RootSpace:
    """Two-dimensional ad(tau_1)-invariant summand of c^perp.

    ``i0_matrix`` acts on coordinates in ``basis``:
    ``I0(basis[q]) = sum_p i0_matrix[p, q] basis[p]``.
    """

    alpha_value: float
    basis: np.ndarray
    i0_matrix: np.ndarray
    position: Tuple[int, int]

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        return np.array([inner(b, v) for b in self.basis])

    def from_coordinates(self, coeffs: Sequence[float]) -> np.ndarray:
        return coeffs[0] * self.basis[0] + coeffs[1] * self.basis[1]

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.from_coordinates(self.coordinates(v))

    def apply_i0(self, v: np.ndarray) -> np.ndarray:
        return self.from_coordinates(self.i0_matrix @ self.coordinates(v))


def root_spaces(tau1: np.ndarray, s: StratumData) -> List[RootSpace]:
    """Decompose c^perp into root spaces of ad(tau_1), positive roots only.

    Raises:
        StratumError: If tau_1 is not diagonal or annihilates part of c^perp
    """
    tau1 = np.asarray(tau1, dtype=complex)
    values = _diagonal_values([tau1])[:, 0]
    spaces: List[RootSpace] = []
    for j, k in itertools.combinations(range(s.n), 2):
        if s.labels[j] == s.labels[k]:
            continue
        difference = values[j] - values[k]
        alpha = abs(difference)
        if alpha < GROUPING_TOLERANCE:
            raise StratumError(
                f"tau_1 is more degenerate than the stratum at position {(j, k)}",
                details={"position": [j, k]},
            )
        basis = np.stack(_pair_generators(s.n, j, k))
        i0 = adjoint_matrix(tau1, basis) / alpha
        spaces.append(
            RootSpace(alpha_value=float(alpha), basis=basis, i0_matrix=i0, position=(j, k))
        )
    spaces.sort(key=lambda r: (-r.alpha_value, r.position))
    return spaces


def asymptotic_relation_residuals(
    s: StratumData, delta: Sequence[np.ndarray], eps: Sequence[np.ndarray]
) -> Dict[str, float]:
    """Residuals of the algebraic relations between (delta, eps) and the stratum.

    ``delta`` entries should lie in Z(c), ``eps`` entries in [c,c]; entries are
    paired by index for the last relation.
    """
    c_basis = s.c_basis
    delta_arr = np.asarray(delta, dtype=complex)
    eps_arr = np.asarray(eps, dtype=complex)

    def _largest(arr) -> float:
        return float(np.max(np.abs(arr), initial=0.0))

    delta_c = _largest(bracket(delta_arr[:, None], c_basis[None, :])) if c_basis.size else 0.0
    tau_eps = _largest(bracket(np.asarray(s.tau)[:, None], eps_arr[None, :]))
    delta_eps = _largest(bracket(delta_arr[:, None], eps_arr[None, :]))
    if c_basis.size:
        brackets = bracket(c_basis[:, None], c_basis[None, :])
        pairing = inner(brackets[None], delta_arr[:, None, None])
        bracket_delta = _largest(pairing)
    else:
        bracket_delta = 0.0
    count = min(len(delta_arr), len(eps_arr))
    paired = [abs(inner(delta_arr[i], eps_arr[i])) for i in range(count)]
    return {
        "delta_commutes_with_c": delta_c,
        "tau_commutes_with_eps": tau_eps,
        "delta_commutes_with_eps": delta_eps,
        "brackets_orthogonal_to_delta": bracket_delta,
        "delta_orthogonal_to_eps": max(paired, default=0.0),
    }


def random_asymptotic_data(
    s: StratumData, rng: np.random.Generator, components: int = 4
) -> Tuple[np.ndarray, np.ndarray]:
    """Random ``delta`` in Z(c) and ``eps`` in [c,c] (``eps_0 = 0``).

    Returns:
        Arrays of shape ``(components, n, n)``
    """
    delta = np.einsum(
        "cp,pij->cij", rng.normal(size=(components, s.center_basis.shape[0])), s.center_basis
    )
    eps = np.einsum(
        "cp,pij->cij", rng.normal(size=(components, s.derived_basis.shape[0])), s.derived_basis
    )
    eps[0] = 0.0
    return delta.astype(complex), eps.astype(complex)
