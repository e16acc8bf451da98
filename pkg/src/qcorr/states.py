"""Factories for named states and random-state samplers."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ArgumentError
from .qstate import DensityMatrix, DimSpec, PureState
from .tolerances import TAU_PSD

__all__ = [
    "maximally_mixed",
    "product_pure",
    "make_epr",
    "make_ghz",
    "make_cc_state",
    "make_cq_state",
    "make_trine",
    "trine_vectors",
    "make_ghz_epr_psi",
    "make_ghz_epr_phi",
    "make_one_way_mcs",
    "random_density",
    "random_pure",
    "random_separable",
    "random_cq",
    "parties_from_labels",
    "rng_for",
]

_S2 = 1.0 / np.sqrt(2.0)


def rng_for(seed) -> np.random.Generator:
    """Generator from an int, a sequence of ints (hashed by SeedSequence) or a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def maximally_mixed(dims) -> DensityMatrix:
    dims = (dims,) if np.isscalar(dims) else tuple(dims)
    d = int(np.prod(dims))
    return DensityMatrix(np.eye(d) / d, dims, separable=True)


def product_pure(*vectors, labels=None) -> PureState:
    v = np.array([1.0 + 0j])
    dims = []
    for x in vectors:
        x = np.asarray(x, dtype=complex)
        v = np.kron(v, x / np.linalg.norm(x))
        dims.append(len(x))
    return PureState(v, dims, labels)


def make_epr(labels=("A", "B")) -> PureState:
    """(|00> + |11>)/sqrt(2)."""
    return PureState([_S2, 0, 0, _S2], (2, 2), labels, label="epr")


def make_ghz(n: int = 3, labels=None) -> PureState:
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = _S2
    if labels is None and n <= 26:
        labels = tuple(chr(ord("A") + i) for i in range(n))
    return PureState(v, (2,) * n, labels, label="ghz")


def make_cc_state() -> DensityMatrix:
    """Two classically correlated bits, (|00><00| + |11><11|)/2."""
    return DensityMatrix(np.diag([0.5, 0, 0, 0.5]), (2, 2), ("A", "B"),
                         separable=True, label="cc")


def make_cq_state(probs: Sequence[float], cond_states: Sequence[DensityMatrix]) -> DensityMatrix:
    """sum_i p_i |i><i| (x) rho_i with the classical register as subsystem 0."""
    probs = np.asarray(probs, dtype=float)
    if len(probs) != len(cond_states) or len(probs) == 0:
        raise ArgumentError("need one conditional state per probability")
    if np.any(probs < 0) or abs(probs.sum() - 1) > 1e-10:
        raise ArgumentError("probs must be a probability vector")
    specs = {s.dims for s in cond_states}
    if len(specs) != 1:
        raise ArgumentError("conditional states must share dimensions")
    k = len(probs)
    db = cond_states[0].dim
    m = np.zeros((k * db, k * db), dtype=complex)
    for i, (p, s) in enumerate(zip(probs, cond_states)):
        m[i * db:(i + 1) * db, i * db:(i + 1) * db] = p * s.matrix
    sep = all(s.separable or len(s.dims) == 1 for s in cond_states)
    spec = DimSpec((k,)).concat(cond_states[0].spec)
    if spec.labels is None:
        spec = DimSpec(spec.dims, ("A",) + (("B",) if len(spec.dims) == 2 else
                                           tuple(f"B{j}" for j in range(len(spec.dims) - 1))))
    return DensityMatrix(m, spec, separable=sep)


def trine_vectors() -> list[np.ndarray]:
    """Qubit pure states whose Bloch vectors sit in the x-z plane at 0, 120 and 240 degrees."""
    return [np.array([np.cos(a / 2), np.sin(a / 2)], dtype=complex)
            for a in (0.0, 2 * np.pi / 3, 4 * np.pi / 3)]


def make_trine() -> DensityMatrix:
    conds = [DensityMatrix(np.outer(v, v.conj())) for v in trine_vectors()]
    rho = make_cq_state(np.full(3, 1 / 3), conds)
    return DensityMatrix(rho.matrix, rho.spec, separable=True, label="trine", check=False)


def _permute_vector(v: np.ndarray, dims, order) -> np.ndarray:
    return np.asarray(v).reshape(dims).transpose(order).ravel()


def _ghz_epr_vector(with_bc_pair: bool):
    ghz = make_ghz(3).vector              # a1 b1 c1
    epr = make_epr().vector
    pieces = [ghz, epr, epr]              # (a1 b1 c1)(a2 b2)(a3 c2)
    raw_labels = ["a1", "b1", "c1", "a2", "b2", "a3", "c2"]
    if with_bc_pair:
        pieces.append(epr)                # (b3 c3)
        raw_labels += ["b3", "c3"]
    v = np.array([1.0 + 0j])
    for p in pieces:
        v = np.kron(v, p)
    target = sorted(raw_labels, key=lambda s: (s[0], int(s[1:])))
    order = [raw_labels.index(t) for t in target]
    return _permute_vector(v, (2,) * len(raw_labels), order), tuple(target)


def make_ghz_epr_psi() -> PureState:
    """GHZ on (a1,b1,c1), EPR on (a2,b2), EPR on (a3,c2); qubits ordered a1 a2 a3 b1 b2 c1 c2."""
    v, labels = _ghz_epr_vector(False)
    return PureState(v, (2,) * 7, labels, label="ghz-epr-psi")


def make_ghz_epr_phi() -> PureState:
    """The previous state plus an extra EPR pair on (b3,c3); nine qubits ordered a1..a3 b1..b3 c1..c3."""
    v, labels = _ghz_epr_vector(True)
    return PureState(v, (2,) * 9, labels, label="ghz-epr-phi")


def parties_from_labels(spec: DimSpec) -> dict[str, tuple[int, ...]]:
    """Group subsystems by the upper-cased first character of their label (``a1`` -> ``A``)."""
    if spec.labels is None:
        raise ArgumentError("state has no subsystem labels")
    out: dict[str, list[int]] = {}
    for i, lab in enumerate(spec.labels):
        out.setdefault(lab[0].upper(), []).append(i)
    return {k: tuple(v) for k, v in out.items()}


def make_one_way_mcs(probs, a_states, overlaps=None, b_states=None) -> DensityMatrix:
    """One-way maximally correlated state on A (x) C.

    rho = sum_ij sqrt(p_i p_j) <b_j|b_i> |a_i><a_j| (x) |i><j|. Pass either the
    ``b_states`` themselves or their Gram matrix ``overlaps[i, j] = <b_j|b_i>``.
    """
    probs = np.asarray(probs, dtype=float)
    n = len(probs)
    a = [np.asarray(x.vector if isinstance(x, PureState) else x, dtype=complex) for x in a_states]
    if len(a) != n:
        raise ArgumentError("need one A state per probability")
    if any(abs(np.linalg.norm(x) - 1) > 1e-10 for x in a):
        raise ArgumentError("A states must be normalized")
    if b_states is not None:
        b = [np.asarray(x.vector if isinstance(x, PureState) else x, dtype=complex)
             for x in b_states]
        if len(b) != n or any(abs(np.linalg.norm(x) - 1) > 1e-10 for x in b):
            raise ArgumentError("B states must be normalized, one per probability")
        gram = np.array([[np.vdot(b[j], b[i]) for j in range(n)] for i in range(n)])
    elif overlaps is not None:
        gram = np.asarray(overlaps, dtype=complex)
        if gram.shape != (n, n) or np.max(np.abs(np.diag(gram) - 1)) > 1e-10:
            raise ArgumentError("overlaps must be an n x n Gram matrix with unit diagonal")
    else:
        raise ArgumentError("pass overlaps or b_states")
    da = len(a[0])
    m = np.zeros((da * n, da * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            blk = np.sqrt(probs[i] * probs[j]) * gram[i, j] * np.outer(a[i], a[j].conj())
            m[i::n, j::n] = blk
    m = 0.5 * (m + m.conj().T)
    if np.linalg.eigvalsh(m)[0] < -TAU_PSD:
        raise ArgumentError("overlaps do not define a positive semidefinite state")
    return DensityMatrix(m, (da, n), ("A", "C"), label="owmcs")


def _ginibre(rng, rows, cols):
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_density(dims, rank: int | None = None, seed=None) -> DensityMatrix:
    """Ginibre-induced random state G G^dagger / tr, G of shape (D, rank)."""
    dims = (dims,) if np.isscalar(dims) else tuple(dims)
    d = int(np.prod(dims))
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise ArgumentError(f"rank must lie in [1, {d}]")
    g = _ginibre(rng_for(seed), d, rank)
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, dims)


def random_pure(dims, seed=None) -> PureState:
    dims = (dims,) if np.isscalar(dims) else tuple(dims)
    d = int(np.prod(dims))
    v = _ginibre(rng_for(seed), d, 1).ravel()
    return PureState(v, dims, normalize=True)


def random_separable(dim_a: int, dim_b: int, terms: int = 4, seed=None) -> DensityMatrix:
    """sum_k q_k rho_k (x) sigma_k with Dirichlet weights and random-rank Ginibre factors."""
    if terms < 1:
        raise ArgumentError("terms must be >= 1")
    rng = rng_for(seed)
    q = rng.dirichlet(np.ones(terms))
    m = np.zeros((dim_a * dim_b,) * 2, dtype=complex)
    for qk in q:
        ra = random_density(dim_a, int(rng.integers(1, dim_a + 1)), rng)
        rb = random_density(dim_b, int(rng.integers(1, dim_b + 1)), rng)
        m += qk * np.kron(ra.matrix, rb.matrix)
    return DensityMatrix(m / np.trace(m).real, (dim_a, dim_b), ("A", "B"), separable=True)


def random_cq(dim_a: int, dim_b: int, seed=None) -> DensityMatrix:
    """Random CQ state with a classical register of size ``dim_a``."""
    rng = rng_for(seed)
    p = rng.dirichlet(np.ones(dim_a))
    conds = [random_density(dim_b, int(rng.integers(1, dim_b + 1)), rng) for _ in range(dim_a)]
    return make_cq_state(p, conds)

