"""Dense density matrices over multipartite systems.

States carry an explicit list of subsystem dimensions. Subsystem ``i`` of a
state with ``dims = (d0, d1, ...)`` is the ``i``-th tensor factor in
row-major (Kronecker) order, so ``tensor(a, b)`` puts ``a`` first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, CapacityError, InvalidStateError
from .tolerances import (
    MAX_AMBIENT_DIM,
    MAX_PURE_DIM,
    TAU_CLIP,
    TAU_HERM,
    TAU_PSD,
    TAU_TRACE,
)

__all__ = [
    "DimSpec",
    "DensityMatrix",
    "PureState",
    "EnsembleOfStates",
    "tensor",
    "partial_trace",
    "permute",
    "group",
    "purify",
    "von_neumann_entropy",
    "shannon_entropy",
    "entropy_of_spectrum",
    "is_ppt",
]


@dataclass(frozen=True)
class DimSpec:
    """Ordered subsystem dimensions with optional names."""

    dims: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims or any(d < 1 for d in dims):
            raise ArgumentError(f"dimensions must be positive, got {dims}")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != len(dims):
                raise ArgumentError("one label per subsystem required")
            object.__setattr__(self, "labels", labels)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self):
        return len(self.dims)

    def index(self, name: str | int) -> int:
        if isinstance(name, (int, np.integer)):
            return int(name)
        if self.labels is None or name not in self.labels:
            raise ArgumentError(f"unknown subsystem {name!r}")
        return self.labels.index(name)

    def select(self, idx: Sequence[int]) -> "DimSpec":
        labels = None if self.labels is None else tuple(self.labels[i] for i in idx)
        return DimSpec(tuple(self.dims[i] for i in idx), labels)

    def concat(self, other: "DimSpec") -> "DimSpec":
        if self.labels is None or other.labels is None:
            labels = None
        else:
            labels = self.labels + other.labels
        return DimSpec(self.dims + other.dims, labels)


def _as_spec(dims, labels=None) -> DimSpec:
    if isinstance(dims, DimSpec):
        return dims
    if isinstance(dims, (int, np.integer)):
        dims = (int(dims),)
    return DimSpec(tuple(dims), None if labels is None else tuple(labels))


@dataclass(frozen=True, eq=False, init=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix with subsystem structure.

    ``separable`` records that the state is fully separable *by construction*
    (a mixture of products over all listed subsystems). It is set by the
    separable and CQ factories, survives permutation, grouping, partial trace
    and tensor products, and is never inferred numerically.
    """

    matrix: np.ndarray
    spec: DimSpec
    separable: bool = False
    label: str | None = None

    def __init__(self, matrix, dims=None, labels=None, *, separable=False, label=None, check=True):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got shape {m.shape}")
        spec = _as_spec(m.shape[0] if dims is None else dims, labels)
        if spec.total != m.shape[0]:
            raise InvalidStateError(f"dims {spec.dims} do not match matrix size {m.shape[0]}")
        if m.shape[0] > MAX_AMBIENT_DIM:
            raise CapacityError(f"ambient dimension {m.shape[0]} exceeds {MAX_AMBIENT_DIM}")
        if check:
            _check_density(m)
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "separable", bool(separable))
        object.__setattr__(self, "label", label)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.spec.dims

    @property
    def labels(self):
        return self.spec.labels

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def rank(self, tol: float = TAU_CLIP) -> int:
        return int(np.sum(self.eigvalsh() > tol))

    def is_pure(self, tol: float = 1e-9) -> bool:
        return abs(np.real(np.trace(self.matrix @ self.matrix)) - 1.0) < tol

    def with_spec(self, dims, labels=None) -> "DensityMatrix":
        return DensityMatrix(self.matrix, dims, labels, separable=self.separable,
                             label=self.label, check=False)

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims}, labels={self.labels}, label={self.label!r})"


def _check_density(m: np.ndarray) -> None:
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("matrix has non-finite entries")
    if np.max(np.abs(m - m.conj().T), initial=0.0) > TAU_HERM:
        raise InvalidStateError("matrix is not Hermitian")
    tr = np.trace(m)
    if abs(tr - 1.0) > TAU_TRACE:
        raise InvalidStateError(f"trace is {tr.real:.3e}, expected 1")
    lam = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    if lam[0] < -TAU_PSD:
        raise InvalidStateError(f"negative eigenvalue {lam[0]:.3e}")


@dataclass(frozen=True, eq=False, init=False)
class PureState:
    """Unit vector with subsystem structure."""

    vector: np.ndarray
    spec: DimSpec
    label: str | None = None

    def __init__(self, vector, dims=None, labels=None, *, label=None, normalize=False):
        v = np.array(vector, dtype=complex).ravel()
        spec = _as_spec(v.size if dims is None else dims, labels)
        if spec.total != v.size:
            raise InvalidStateError(f"dims {spec.dims} do not match vector length {v.size}")
        if v.size > MAX_PURE_DIM:
            raise CapacityError(f"vector length {v.size} exceeds {MAX_PURE_DIM}")
        nrm = np.linalg.norm(v)
        if normalize:
            if nrm == 0:
                raise InvalidStateError("zero vector")
            v = v / nrm
        elif abs(nrm**2 - 1.0) > TAU_TRACE:
            raise InvalidStateError(f"squared norm {nrm**2:.12g} is not 1")
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "label", label)

    @property
    def dims(self):
        return self.spec.dims

    @property
    def labels(self):
        return self.spec.labels

    @property
    def dim(self) -> int:
        return self.spec.total

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.vector, self.vector.conj()), self.spec,
                             label=self.label, check=False)

    def reduced(self, keep: Iterable[int | str]) -> DensityMatrix:
        """Reduced state on ``keep`` (original order) without forming the full projector."""
        keep = sorted(self.spec.index(k) for k in keep)
        _check_keep(keep, len(self.dims))
        rest = [i for i in range(len(self.dims)) if i not in keep]
        t = self.vector.reshape(self.dims).transpose(keep + rest)
        dk = int(np.prod([self.dims[i] for i in keep]))
        t = t.reshape(dk, -1)
        return DensityMatrix(t @ t.conj().T, self.spec.select(keep), check=False)

    def __repr__(self):
        return f"PureState(dims={self.dims}, labels={self.labels}, label={self.label!r})"


@dataclass(frozen=True)
class EnsembleOfStates:
    probs: np.ndarray
    states: tuple[DensityMatrix, ...]

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or len(p) != len(self.states):
            raise ArgumentError("one probability per state required")
        if np.any(p < -TAU_TRACE) or abs(p.sum() - 1.0) > TAU_TRACE:
            raise ArgumentError("probabilities must be nonnegative and sum to 1")
        if len({s.dims for s in self.states}) > 1:
            raise ArgumentError("ensemble states must share one DimSpec")
        object.__setattr__(self, "probs", np.clip(p, 0.0, None))
        object.__setattr__(self, "states", tuple(self.states))

    def average(self) -> DensityMatrix:
        m = sum(p * s.matrix for p, s in zip(self.probs, self.states))
        return DensityMatrix(m, self.states[0].spec)


def _check_keep(keep, n):
    if not keep:
        raise ArgumentError("keep set must be nonempty")
    if len(set(keep)) != len(keep) or any(k < 0 or k >= n for k in keep):
        raise ArgumentError(f"invalid subsystem indices {keep}")


def tensor(*states: DensityMatrix) -> DensityMatrix:
    """Kronecker product; the result is flagged separable only if every factor is."""
    if not states:
        raise ArgumentError("nothing to tensor")
    total = int(np.prod([s.dim for s in states]))
    if total > MAX_AMBIENT_DIM:
        raise CapacityError(f"ambient dimension {total} exceeds {MAX_AMBIENT_DIM}")
    m = states[0].matrix
    spec = states[0].spec
    for s in states[1:]:
        m = np.kron(m, s.matrix)
        spec = spec.concat(s.spec)
    return DensityMatrix(m, spec, separable=all(s.separable for s in states), check=False)


def permute(rho: DensityMatrix, order: Sequence[int | str]) -> DensityMatrix:
    """Reorder subsystems so that new subsystem ``j`` is old subsystem ``order[j]``."""
    order = [rho.spec.index(o) for o in order]
    n = len(rho.dims)
    if sorted(order) != list(range(n)):
        raise ArgumentError(f"{order} is not a permutation of {n} subsystems")
    t = rho.matrix.reshape(rho.dims + rho.dims)
    t = t.transpose(order + [n + o for o in order])
    return DensityMatrix(t.reshape(rho.dim, rho.dim), rho.spec.select(order),
                         separable=rho.separable, label=rho.label, check=False)


def partial_trace(rho: DensityMatrix, keep: Iterable[int | str]) -> DensityMatrix:
    """Trace out every subsystem not in ``keep``; kept subsystems stay in their original order."""
    keep = sorted(rho.spec.index(k) for k in keep)
    n = len(rho.dims)
    _check_keep(keep, n)
    rest = [i for i in range(n) if i not in keep]
    dk = int(np.prod([rho.dims[i] for i in keep]))
    dr = rho.dim // dk
    t = rho.matrix.reshape(rho.dims + rho.dims)
    t = t.transpose(keep + rest + [n + i for i in keep] + [n + i for i in rest])
    t = t.reshape(dk, dr, dk, dr)
    return DensityMatrix(np.einsum("ajbj->ab", t), rho.spec.select(keep),
                         separable=rho.separable, check=False)


def group(rho: DensityMatrix, groups: Sequence[Sequence[int | str]],
          labels: Sequence[str] | None = None) -> DensityMatrix:
    """Coarse-grain subsystems into parties.

    ``groups`` must partition all subsystems; the result has one subsystem
    per group, in the order given.
    """
    groups = [[rho.spec.index(i) for i in g] for g in groups]
    flat = [i for g in groups for i in g]
    out = permute(rho, flat)
    dims = [int(np.prod([rho.dims[i] for i in g])) for g in groups]
    if labels is None and rho.labels is not None:
        labels = ["".join(rho.labels[i] for i in g) for g in groups]
    return DensityMatrix(out.matrix, dims, labels, separable=rho.separable,
                         label=rho.label, check=False)


def purify(rho: DensityMatrix) -> PureState:
    """Purification on ``system ⊗ ancilla`` with ancilla dimension equal to the numerical rank."""
    lam, vec = np.linalg.eigh(rho.matrix)
    mask = lam > TAU_CLIP
    lam, vec = lam[mask], vec[:, mask]
    r = len(lam)
    # |psi> = sum_k sqrt(lam_k) |v_k>|k>
    psi = (vec * np.sqrt(lam)).reshape(rho.dim, r)
    psi = psi / np.linalg.norm(psi)
    labels = None if rho.labels is None else rho.labels + ("anc",)
    return PureState(psi.ravel(), rho.dims + (r,), labels)


def entropy_of_spectrum(lam, tol: float = TAU_PSD) -> float:
    """Shannon entropy in bits of a spectrum; tiny negative noise is clipped to zero."""
    lam = np.asarray(lam, dtype=float)
    if lam.size and lam.min() < -tol:
        raise InvalidStateError(f"negative eigenvalue {lam.min():.3e}")
    lam = lam[lam > TAU_CLIP]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def shannon_entropy(p) -> float:
    return entropy_of_spectrum(np.ravel(p))


def von_neumann_entropy(rho: DensityMatrix | np.ndarray) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return entropy_of_spectrum(np.linalg.eigvalsh(m))


def is_ppt(rho: DensityMatrix, tol: float = TAU_PSD) -> bool:
    """Positive-partial-transpose test across the split after subsystem 0."""
    d0 = rho.dims[0]
    d1 = rho.dim // d0
    t = rho.matrix.reshape(d0, d1, d0, d1).transpose(0, 3, 2, 1).reshape(rho.dim, rho.dim)
    return bool(np.linalg.eigvalsh(t)[0] >= -tol)
