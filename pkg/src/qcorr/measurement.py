"""POVMs, conditional ensembles and classical information quantities."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import numpy as np

from .errors import ArgumentError, InvalidStateError
from .qstate import DensityMatrix, entropy_of_spectrum, shannon_entropy
from .tolerances import P_DROP, TAU_HERM, TAU_NUM, TAU_POVM, TAU_PSD, TAU_TRACE

__all__ = [
    "Povm",
    "ConditionalEnsemble",
    "JointDistribution",
    "measure_side",
    "joint_distribution",
    "classical_mutual_information",
    "holevo_quantity",
    "computational_povm",
    "tensor_povm",
    "povm_from_rows",
]


@dataclass(frozen=True, eq=False, init=False)
class Povm:
    """Ordered list of PSD effects on one ``dim``-dimensional system, summing to identity."""

    effects: np.ndarray

    def __init__(self, effects, check: bool = True):
        e = np.array(effects, dtype=complex)
        if e.ndim != 3 or e.shape[1] != e.shape[2] or e.shape[0] < 1:
            raise ArgumentError(f"effects must have shape (k, d, d), got {e.shape}")
        if check:
            if np.max(np.abs(e - e.conj().transpose(0, 2, 1))) > TAU_HERM:
                raise InvalidStateError("POVM effect is not Hermitian")
            lam = np.linalg.eigvalsh(0.5 * (e + e.conj().transpose(0, 2, 1)))
            if lam.min() < -TAU_PSD:
                raise InvalidStateError(f"POVM effect has eigenvalue {lam.min():.3e}")
            dev = np.max(np.abs(e.sum(0) - np.eye(e.shape[1])))
            if dev > TAU_POVM:
                raise InvalidStateError(f"effects sum to identity only within {dev:.3e}")
        e = 0.5 * (e + e.conj().transpose(0, 2, 1))
        e.setflags(write=False)
        object.__setattr__(self, "effects", e)

    @property
    def dim(self) -> int:
        return self.effects.shape[1]

    @property
    def n_outcomes(self) -> int:
        return self.effects.shape[0]

    def __len__(self):
        return self.n_outcomes

    def rank_one_rows(self, tol: float = 1e-12) -> np.ndarray:
        """Rows m such that every effect splits into pieces m^dagger m (a rank-1 refinement)."""
        rows = []
        for e in self.effects:
            lam, vec = np.linalg.eigh(e)
            for l, v in zip(lam, vec.T):
                if l > tol:
                    rows.append(np.sqrt(l) * v.conj())
        return np.array(rows)

    def __repr__(self):
        return f"Povm(dim={self.dim}, n_outcomes={self.n_outcomes})"


def computational_povm(d: int) -> Povm:
    e = np.zeros((d, d, d))
    e[np.arange(d), np.arange(d), np.arange(d)] = 1.0
    return Povm(e, check=False)


def tensor_povm(*povms: Povm) -> Povm:
    """Product POVM; outcome index runs over the first factor slowest."""
    eff = povms[0].effects
    for p in povms[1:]:
        t = np.einsum("iab,jcd->ijacbd", eff, p.effects)
        k, d = t.shape[0] * t.shape[1], t.shape[2] * t.shape[3]
        eff = t.reshape(k, d, d)
    return Povm(eff, check=False)


@dataclass(frozen=True)
class ConditionalEnsemble:
    """Outcome probabilities and normalized post-measurement states of the other side.

    ``kept`` lists the original outcome indices that survived the ``P_DROP``
    cut; ``probs`` and ``states`` refer only to those.
    """

    probs: np.ndarray
    states: np.ndarray
    kept: np.ndarray
    all_probs: np.ndarray

    def average(self) -> np.ndarray:
        return np.einsum("i,iab->ab", self.probs, self.states)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim != 2:
            raise ArgumentError("joint distribution must be a 2-d table")
        if t.min(initial=0.0) < -TAU_NUM or abs(t.sum() - 1) > TAU_TRACE:
            raise ArgumentError("table must be nonnegative and sum to 1")
        object.__setattr__(self, "table", np.clip(t, 0.0, None))

    @cached_property
    def row_marginal(self) -> np.ndarray:
        return self.table.sum(1)

    @cached_property
    def col_marginal(self) -> np.ndarray:
        return self.table.sum(0)


def _bipartite_tensor(rho: DensityMatrix):
    if len(rho.dims) != 2:
        raise ArgumentError(f"expected a bipartite state, got dims {rho.dims}")
    da, db = rho.dims
    return rho.matrix.reshape(da, db, da, db)


def _side_index(side) -> int:
    s = str(side).upper()
    if s not in ("A", "B", "0", "1"):
        raise ArgumentError(f"side must be A or B, got {side!r}")
    return 0 if s in ("A", "0") else 1


def unnormalized_conditionals(rho: DensityMatrix, side, povm: Povm) -> np.ndarray:
    """tr_side((Pi_i (x) I) rho) for every outcome, shape (k, d_other, d_other)."""
    r = _bipartite_tensor(rho)
    s = _side_index(side)
    if povm.dim != rho.dims[s]:
        raise ArgumentError(f"POVM acts on dimension {povm.dim}, side {side} has {rho.dims[s]}")
    if s == 0:
        # tau_i[y, w] = sum_{x,z} Pi_i[x, z] rho[z y, x w]
        return np.einsum("kxz,zyxw->kyw", povm.effects, r)
    return np.einsum("kyz,xzwy->kxw", povm.effects, r)


def measure_side(rho: DensityMatrix, side, povm: Povm) -> ConditionalEnsemble:
    tau = unnormalized_conditionals(rho, side, povm)
    p_all = np.real(np.einsum("kaa->k", tau))
    p_all = np.clip(p_all, 0.0, None)
    kept = np.flatnonzero(p_all >= P_DROP)
    p = p_all[kept]
    states = tau[kept] / p[:, None, None]
    states = 0.5 * (states + states.conj().transpose(0, 2, 1))
    return ConditionalEnsemble(p / p.sum(), states, kept, p_all)


def joint_distribution(rho: DensityMatrix, povm_a: Povm, povm_b: Povm) -> JointDistribution:
    r = _bipartite_tensor(rho)
    if povm_a.dim != rho.dims[0] or povm_b.dim != rho.dims[1]:
        raise ArgumentError("POVM dimensions do not match the state")
    # p_ij = tr((A_i (x) B_j) rho)
    t = np.einsum("ixz,jyw,zwxy->ij", povm_a.effects, povm_b.effects, r)
    t = np.clip(np.real(t), 0.0, None)
    return JointDistribution(t / t.sum())


def classical_mutual_information(jd: JointDistribution) -> float:
    """H(row) + H(col) - H(joint), in bits."""
    return (shannon_entropy(jd.row_marginal) + shannon_entropy(jd.col_marginal)
            - shannon_entropy(jd.table))


def holevo_quantity(ens) -> float:
    """S(average) - sum_i p_i S(rho_i) for a ConditionalEnsemble or an EnsembleOfStates."""
    if isinstance(ens, ConditionalEnsemble):
        probs, mats = ens.probs, ens.states
    else:
        probs = np.asarray(ens.probs)
        mats = np.array([s.matrix for s in ens.states])
    avg = np.einsum("i,iab->ab", probs, mats)
    s_avg = entropy_of_spectrum(np.linalg.eigvalsh(avg))
    lam = np.linalg.eigvalsh(mats)
    s_cond = sum(p * entropy_of_spectrum(l) for p, l in zip(probs, lam))
    return float(s_avg - s_cond)


def povm_from_rows(rows: np.ndarray) -> Povm:
    """Rank-1 POVM with effects m_i^dagger m_i for the rows m_i of an isometry."""
    rows = np.asarray(rows, dtype=complex)
    eff = np.einsum("ix,iz->ixz", rows.conj(), rows)
    return Povm(eff)

