"""Dense complex linear algebra on composite spaces.

Composite indices are row-major with the leftmost subsystem most
significant, so ``|i>|j>`` on dims ``(d0, d1)`` sits at ``i * d1 + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import InvalidArgument

TOL_ALG = 1e-10
TOL_EIG = 1e-9

# Gram-Schmidt candidates whose residual falls below this are skipped.
_GS_SKIP = 1e-6


def _dims(dims: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(x) for x in dims)
    if not out or any(x < 1 for x in out):
        raise InvalidArgument(f"dims must be positive integers, got {dims!r}")
    return out


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized ket on a composite space."""

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        dims = _dims(self.dims)
        amps = _frozen(np.ravel(self.amps))
        if amps.size != int(np.prod(dims)):
            raise InvalidArgument(
                f"{amps.size} amplitudes do not match dims {dims}"
            )
        if abs(np.linalg.norm(amps) - 1.0) > TOL_ALG:
            raise InvalidArgument(f"state has norm {np.linalg.norm(amps)}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def basis(cls, dims: Sequence[int], index: int | Sequence[int]) -> PureState:
        """Computational basis ket; ``index`` is flat or one digit per subsystem."""
        dims = _dims(dims)
        if not isinstance(index, (int, np.integer)):
            index = int(np.ravel_multi_index(tuple(index), dims))
        amps = np.zeros(int(np.prod(dims)), dtype=complex)
        amps[index] = 1.0
        return cls(dims, amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def density(self) -> DensityOperator:
        return DensityOperator(self.dims, np.outer(self.amps, self.amps.conj()))

    def inner(self, other: PureState) -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amps, other.amps))

    def conj(self) -> PureState:
        """Entrywise conjugate in the computational basis."""
        return PureState(self.dims, self.amps.conj())


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite matrix on a composite space."""

    dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        dims = _dims(self.dims)
        mat = _frozen(self.mat)
        n = int(np.prod(dims))
        if mat.shape != (n, n):
            raise InvalidArgument(f"matrix shape {mat.shape} does not match dims {dims}")
        if np.max(np.abs(mat - mat.conj().T)) > TOL_ALG:
            raise InvalidArgument("density operator is not Hermitian")
        if abs(np.trace(mat) - 1.0) > TOL_ALG:
            raise InvalidArgument(f"density operator has trace {np.trace(mat)}")
        if np.linalg.eigvalsh(mat)[0] < -TOL_EIG:
            raise InvalidArgument("density operator has a negative eigenvalue")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @classmethod
    def maximally_mixed(cls, d: int) -> DensityOperator:
        return cls((d,), np.eye(d) / d)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Square complex matrix acting on a composite space."""

    dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        dims = _dims(self.dims)
        mat = _frozen(self.mat)
        n = int(np.prod(dims))
        if mat.shape != (n, n):
            raise InvalidArgument(f"matrix shape {mat.shape} does not match dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> OperatorMatrix:
        dims = _dims(dims)
        return cls(dims, np.eye(int(np.prod(dims))))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def H(self) -> OperatorMatrix:
        return OperatorMatrix(self.dims, self.mat.conj().T)

    def is_unitary(self, tol: float = TOL_ALG) -> bool:
        return unitarity_defect(self.mat) < tol

    def is_hermitian(self, tol: float = TOL_ALG) -> bool:
        return float(np.max(np.abs(self.mat - self.mat.conj().T))) < tol

    def apply(self, psi: PureState) -> np.ndarray:
        """Raw image vector ``O|psi>``; not renormalized, since ``O`` need not be unitary."""
        if psi.dims != self.dims:
            raise InvalidArgument(f"operator dims {self.dims} != state dims {psi.dims}")
        return self.mat @ psi.amps

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        if other.dims != self.dims:
            raise InvalidArgument(f"operator dims {self.dims} != {other.dims}")
        return OperatorMatrix(self.dims, self.mat @ other.mat)


def unitarity_defect(mat: np.ndarray) -> float:
    """``max |U^dagger U - I|`` entrywise."""
    mat = np.asarray(mat)
    return float(np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[1]))))


def tensor_product(*parts):
    """Kronecker product of states or operators, concatenating their dims."""
    if not parts:
        raise InvalidArgument("tensor_product needs at least one operand")
    kinds = {type(p) for p in parts}
    if len(kinds) != 1:
        raise InvalidArgument("cannot mix states and operators in a tensor product")
    kind = kinds.pop()
    dims = tuple(x for p in parts for x in p.dims)
    if kind is PureState:
        return PureState(dims, reduce(np.kron, [p.amps for p in parts]))
    if kind in (OperatorMatrix, DensityOperator):
        return kind(dims, reduce(np.kron, [p.mat for p in parts]))
    raise InvalidArgument(f"unsupported operand type {kind.__name__}")


def _check_keep(dims: tuple[int, ...], keep: Sequence[int]) -> list[int]:
    keep = sorted({int(k) for k in keep})
    if not keep or len(keep) == len(dims):
        raise InvalidArgument("keep must be a nonempty proper subset of subsystems")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise InvalidArgument(f"subsystem index out of range in {keep}")
    return keep


def partial_trace_matrix(mat: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of a raw matrix, keeping the listed subsystems in order."""
    dims = tuple(dims)
    n = len(dims)
    keep = sorted(keep)
    drop = [i for i in range(n) if i not in keep]
    t = np.asarray(mat).reshape(dims + dims)
    perm = keep + drop
    t = t.transpose(perm + [n + i for i in perm])
    dk = int(np.prod([dims[i] for i in keep]))
    dd = int(np.prod([dims[i] for i in drop]))
    t = t.reshape(dk, dd, dk, dd)
    return np.einsum("ajbj->ab", t)


def reduced_matrix(amps: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of a raw ket without forming the full projector."""
    dims = tuple(dims)
    n = len(dims)
    keep = sorted(keep)
    drop = [i for i in range(n) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep]))
    t = np.asarray(amps).reshape(dims).transpose(keep + drop).reshape(dk, -1)
    return t @ t.conj().T


def partial_trace(rho: DensityOperator | PureState, keep: Sequence[int]) -> DensityOperator:
    """Trace out every subsystem not in ``keep``.

    A ``PureState`` is accepted as shorthand for its projector.
    """
    keep = _check_keep(rho.dims, keep)
    if isinstance(rho, PureState):
        mat = reduced_matrix(rho.amps, rho.dims, keep)
    else:
        mat = partial_trace_matrix(rho.mat, rho.dims, keep)
    return DensityOperator(tuple(rho.dims[i] for i in keep), mat)


def eig_hermitian(h) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs of a Hermitian matrix, eigenvalues in descending order."""
    mat = np.asarray(getattr(h, "mat", h), dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidArgument("eig_hermitian needs a square matrix")
    if np.max(np.abs(mat - mat.conj().T)) > TOL_ALG:
        raise InvalidArgument("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(mat)
    order = np.argsort(vals)[::-1]
    return [(float(vals[i]), vecs[:, i]) for i in order]


def eigvals_hermitian(mat: np.ndarray) -> np.ndarray:
    """Eigenvalues only, descending."""
    return np.linalg.eigvalsh(np.asarray(mat))[::-1]


def complete_orthonormal_vectors(vs: np.ndarray) -> np.ndarray:
    """Columns completing the orthonormal columns of ``vs`` to a basis.

    Candidates are computational basis vectors in index order; each is
    orthogonalized twice against everything accepted so far and dropped
    if its residual is negligible.
    """
    vs = np.asarray(vs, dtype=complex)
    n, k = vs.shape
    if k > n:
        raise InvalidArgument(f"{k} vectors cannot be orthonormal in dimension {n}")
    if k and np.max(np.abs(vs.conj().T @ vs - np.eye(k))) > TOL_ALG:
        raise InvalidArgument("input vectors are not orthonormal")
    basis = [vs[:, i] for i in range(k)]
    extra = []
    for j in range(n):
        if len(basis) == n:
            break
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
        for _ in range(2):
            for b in basis:
                v = v - np.vdot(b, v) * b
        norm = np.linalg.norm(v)
        if norm < _GS_SKIP:
            continue
        v = v / norm
        basis.append(v)
        extra.append(v)
    if not extra:
        return np.zeros((n, 0), dtype=complex)
    return np.column_stack(extra)


def complete_orthonormal(vs: Sequence[PureState]) -> list[PureState]:
    """States that extend an orthonormal list ``vs`` to a basis of its space."""
    if not vs:
        raise InvalidArgument("need at least one state to fix the space")
    dims = vs[0].dims
    if any(v.dims != dims for v in vs):
        raise InvalidArgument("states live on different spaces")
    cols = complete_orthonormal_vectors(np.column_stack([v.amps for v in vs]))
    return [PureState(dims, cols[:, i]) for i in range(cols.shape[1])]


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based (Philox) generator; all stochastic code draws from one of these."""
    return np.random.Generator(np.random.Philox(int(seed)))


def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return make_rng(seed_or_rng)


def random_ket(d: int, rng: np.random.Generator) -> np.ndarray:
    """Raw Haar-distributed unit vector."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_unitary_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    """Raw Haar unitary: QR of a Ginibre matrix with the R diagonal phases removed."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def haar_random_state(d: int, seed) -> PureState:
    """Haar-random pure state of one ``d``-level system.

    ``seed`` is an integer or an existing generator.
    """
    if d < 2:
        raise InvalidArgument("d must be at least 2")
    return PureState((d,), random_ket(d, _rng(seed)))


def haar_random_unitary(d: int, seed) -> OperatorMatrix:
    if d < 2:
        raise InvalidArgument("d must be at least 2")
    return OperatorMatrix((d,), random_unitary_matrix(d, _rng(seed)))
