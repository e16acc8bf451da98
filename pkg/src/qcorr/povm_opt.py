"""Maximization of measurement-dependent information over POVMs.

Rank-1 POVMs with ``k`` outcomes on a ``d``-dimensional system are the rows
``m_i`` of a ``k x d`` isometry ``M`` (``M^dagger M = I``), with effects
``m_i^dagger m_i``. The default search is Riemannian gradient ascent on that
Stiefel manifold with polar retraction and Barzilai-Borwein steps, restarted
from several points. ``mode="general"`` instead optimizes arbitrary-rank
effects with a quasi-Newton method on finite differences, and is mostly
useful as an independent cross-check.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import ArgumentError
from .measurement import (
    Povm,
    classical_mutual_information,
    holevo_quantity,
    joint_distribution,
    measure_side,
    povm_from_rows,
)
from .qstate import DensityMatrix, partial_trace, permute, von_neumann_entropy
from .tolerances import P_DROP, TAU_PSD

__all__ = [
    "OptConfig",
    "OptResult",
    "parameterize_rank1",
    "parameterize_general",
    "maximize_single",
    "maximize_product",
    "polar_isometry",
]

log = logging.getLogger(__name__)

MODES = ("rank1-stiefel", "general", "projective")
_LN2 = np.log(2.0)


@dataclass(frozen=True)
class OptConfig:
    n_outcomes: int | None = None
    restarts: int = 24
    max_iters: int = 2000
    conv_tol: float = 1e-9
    seed: int = 0
    mode: str = "rank1-stiefel"
    seeds_in: tuple = ()
    structured_starts: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ArgumentError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n_outcomes is not None and self.n_outcomes < 1:
            raise ArgumentError("n_outcomes must be >= 1")
        if self.conv_tol <= 0:
            raise ArgumentError("conv_tol must be positive")
        if self.restarts < 0 or self.max_iters < 1:
            raise ArgumentError("restarts must be >= 0 and max_iters >= 1")
        object.__setattr__(self, "seeds_in", tuple(self.seeds_in))

    def outcomes_for(self, d: int) -> int:
        if self.mode == "projective":
            if self.n_outcomes not in (None, d):
                raise ArgumentError("projective mode forces n_outcomes = dim")
            return d
        k = d * d if self.n_outcomes is None else self.n_outcomes
        if self.mode == "rank1-stiefel" and k < d:
            raise ArgumentError(f"rank-1 POVMs on dimension {d} need at least {d} outcomes")
        return k

    @classmethod
    def from_dict(cls, d: dict) -> "OptConfig":
        known = {f for f in cls.__dataclass_fields__ if f != "seeds_in"}
        unknown = set(d) - known
        if unknown:
            raise ArgumentError(f"unknown OptConfig fields {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("seeds_in")
        return d


@dataclass
class OptResult:
    value: float
    certificate: Povm | tuple[Povm, Povm]
    bound_direction: str = "lower"
    restarts_used: int = 0
    best_restart_trace: list = field(default_factory=list)
    converged: bool = True
    iterations: int = 0
    best_start: str = ""

    def summary(self) -> dict:
        return {
            "restarts": self.restarts_used,
            "converged": bool(self.converged),
            "iters": int(self.iterations),
            "best_start": self.best_start,
        }


# --------------------------------------------------------------------------
# parameterizations


def polar_isometry(w: np.ndarray) -> np.ndarray:
    """Closest isometry U V^dagger to ``w`` (k x d, k >= d)."""
    u, _, vh = np.linalg.svd(w, full_matrices=False)
    return u @ vh


def _raw_matrix(params, d, k):
    params = np.asarray(params, dtype=float)
    if params.size != 2 * k * d:
        raise ArgumentError(f"expected {2 * k * d} parameters, got {params.size}")
    return (params[: k * d] + 1j * params[k * d:]).reshape(k, d)


def parameterize_rank1(params, d: int, k: int) -> Povm:
    """k rank-1 effects from the polar (Stiefel) projection of a raw complex k x d matrix."""
    if k < d:
        raise ArgumentError("need k >= d for a complete rank-1 POVM")
    w = _raw_matrix(params, d, k)
    rng = np.random.default_rng(0)
    for _ in range(3):
        s = np.linalg.svd(w, compute_uv=False)
        if s[-1] > 1e-10 * max(s[0], 1e-300):
            return povm_from_rows(polar_isometry(w))
        w = w + 1e-6 * (rng.normal(size=w.shape) + 1j * rng.normal(size=w.shape))
    raise ArgumentError("raw matrix is rank deficient after 3 perturbations")


def parameterize_general(param_mats: Sequence[np.ndarray]) -> Povm:
    """Effects S^{-1/2} B_i^dagger B_i S^{-1/2} with S = sum_i B_i^dagger B_i."""
    b = np.array(param_mats, dtype=complex)
    if b.ndim != 3 or b.shape[1] != b.shape[2] or b.shape[0] < 1:
        raise ArgumentError("need one or more square matrices")
    d = b.shape[1]
    rng = np.random.default_rng(0)
    for _ in range(3):
        bb = np.einsum("iba,ibc->iac", b.conj(), b)
        s = bb.sum(0)
        lam, v = np.linalg.eigh(0.5 * (s + s.conj().T))
        if lam[0] > TAU_PSD * max(lam[-1], 1.0):
            s_inv_half = (v / np.sqrt(lam)) @ v.conj().T
            eff = np.einsum("ab,ibc,cd->iad", s_inv_half, bb, s_inv_half)
            return Povm(eff)
        b = b + 1e-6 * (rng.normal(size=b.shape) + 1j * rng.normal(size=b.shape))
    raise ArgumentError(f"sum of B_i^dagger B_i is singular on dimension {d}")


# --------------------------------------------------------------------------
# objective


def _xlogx(x):
    x = np.clip(x, 0.0, None)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


class HolevoObjective:
    """chi(M) = S(rho_other) - sum_i p_i S(rho_i) for rank-1 rows M on the measured side."""

    def __init__(self, rho: DensityMatrix, side):
        if len(rho.dims) != 2:
            raise ArgumentError("HolevoObjective needs a bipartite state")
        side = str(side).upper()
        if side not in ("A", "B"):
            raise ArgumentError("side must be A or B")
        self.rho = rho
        self.side = side
        x = rho if side == "A" else permute(rho, [1, 0])
        self.d, self.e = x.dims
        self.r = x.matrix.reshape(self.d, self.e, self.d, self.e)
        self.r_flat = self.r.reshape(self.d, -1)
        self.s_other = von_neumann_entropy(partial_trace(x, [1]))
        self.marginal = partial_trace(x, [0]).matrix

    def conditionals(self, m):
        a = (m @ self.r_flat).reshape(m.shape[0], self.e, self.d, self.e)
        t = np.einsum("iyxw,ix->iyw", a, m.conj())
        return 0.5 * (t + t.conj().transpose(0, 2, 1))

    def value(self, m) -> float:
        w = np.linalg.eigvalsh(self.conditionals(m))
        p = w.sum(1)
        f = _xlogx(w).sum(1) - _xlogx(p)
        return float(self.s_other + f.sum() / _LN2)

    def value_grad(self, m):
        t = self.conditionals(m)
        w, v = np.linalg.eigh(t)
        p = w.sum(1)
        f = _xlogx(w).sum(1) - _xlogx(p)
        val = float(self.s_other + f.sum() / _LN2)
        live = p > P_DROP
        floor = np.maximum(p[:, None] * 1e-15, 1e-300)
        logs = np.log(np.maximum(w, floor)) - np.log(np.where(live, p, 1.0))[:, None]
        logs[~live] = 0.0
        g = np.einsum("iab,ib,icb->iac", v, logs, v.conj())
        # K[i,z] = sum_{y,x,w} R[z,y,x,w] conj(M[i,x]) G_i[w,y]
        h = m.conj()[:, None, :, None] * g.transpose(0, 2, 1)[:, :, None, :]
        k = h.reshape(m.shape[0], -1) @ self.r_flat.T
        return val, 2.0 * k.conj() / _LN2


def _herm(a):
    return 0.5 * (a + a.conj().T)


def _ascend(obj: HolevoObjective, m0, max_iters, conv_tol, cancel=None):
    """Riemannian gradient ascent with polar retraction. Returns (M, value, iters, converged, trace)."""
    m = polar_isometry(m0)
    f, z = obj.value_grad(m)
    xi = z - m @ _herm(m.conj().T @ z)
    step = 0.5
    trace = [(0, f)]
    stall = 0
    for it in range(1, max_iters + 1):
        if cancel is not None and cancel():
            return m, f, it - 1, False, trace
        g2 = float(np.real(np.vdot(xi, xi)))
        if g2 < 1e-22:
            return m, f, it - 1, True, trace
        t = step
        while True:
            mn = polar_isometry(m + t * xi)
            fn = obj.value(mn)
            if fn >= f + 1e-4 * t * g2 or t < 1e-14:
                break
            t *= 0.5
        if fn < f:
            return m, f, it, True, trace
        fn, zn = obj.value_grad(mn)
        xin = zn - mn @ _herm(mn.conj().T @ zn)
        s = mn - m
        y = xin - xi
        sy = float(np.real(np.vdot(s, y)))
        ss = float(np.real(np.vdot(s, s)))
        step = ss / -sy if sy < 0 else 2.0 * t
        step = float(np.clip(step, 1e-6, 1e3))
        gain = fn - f
        m, f, xi = mn, fn, xin
        trace.append((it, f))
        stall = stall + 1 if gain < conv_tol else 0
        if stall >= 3:
            return m, f, it, True, trace
    return m, f, max_iters, False, trace


def _random_isometry(rng, k, d):
    w = rng.normal(size=(k, d)) + 1j * rng.normal(size=(k, d))
    return polar_isometry(w)


def _pad(rows, k):
    rows = np.asarray(rows, dtype=complex)
    if rows.shape[0] >= k:
        return rows
    return np.vstack([rows, np.zeros((k - rows.shape[0], rows.shape[1]), dtype=complex)])


def _starts(obj: HolevoObjective, cfg: OptConfig, k: int):
    """Named starting isometries: warm starts, structured starts, then seeded random restarts."""
    d = obj.d
    out = []
    for j, s in enumerate(cfg.seeds_in):
        if not isinstance(s, Povm) or s.dim != d:
            raise ArgumentError("warm-start POVMs must act on the measured side")
        rows = s.rank_one_rows()
        if cfg.mode == "projective":
            if rows.shape[0] != d:
                continue
        out.append((f"seed{j}", rows, None))
    if cfg.structured_starts:
        out.append(("computational", _pad(np.eye(d), k), None))
        _, v = np.linalg.eigh(obj.marginal)
        out.append(("eigenbasis", _pad(v.conj().T, k), None))
    for r in range(cfg.restarts):
        out.append((f"restart{r}", None, np.random.SeedSequence([cfg.seed, r])))
    return out


def _run_starts(obj, cfg, k, cancel):
    starts = _starts(obj, cfg, k)

    def one(item):
        name, rows, ss = item
        if rows is None:
            rows = _random_isometry(np.random.default_rng(ss), k, obj.d)
        return (name,) + _ascend(obj, rows, cfg.max_iters, cfg.conv_tol, cancel)

    if cfg.threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            results = list(ex.map(one, starts))
    else:
        results = [one(s) for s in starts]
    best = max(range(len(results)), key=lambda i: (results[i][2], -i))
    return results, best


def maximize_single(rho: DensityMatrix, side="A", objective: str = "holevo",
                    cfg: OptConfig | None = None, cancel: Callable[[], bool] | None = None) -> OptResult:
    """Maximize the Holevo quantity of the ensemble prepared on the other side by measuring ``side``."""
    if objective != "holevo":
        raise ArgumentError(f"unsupported objective {objective!r}")
    cfg = cfg or OptConfig()
    obj = HolevoObjective(rho, side)
    k = cfg.outcomes_for(obj.d)
    if cfg.mode == "general":
        return _maximize_general(rho, side, obj, cfg, k)
    results, best = _run_starts(obj, cfg, k, cancel)
    name, m, _, iters, conv, trace = results[best]
    cert = povm_from_rows(m)
    value = holevo_quantity(measure_side(rho, side, cert))
    return OptResult(
        value=value,
        certificate=cert,
        restarts_used=len(results),
        best_restart_trace=trace,
        converged=bool(conv),
        iterations=int(sum(r[3] for r in results)),
        best_start=name,
    )


def _maximize_general(rho, side, obj, cfg, k):
    d = obj.d
    n = k * d * d

    def unpack(x):
        return (x[:n] + 1j * x[n:]).reshape(k, d, d)

    def loss(x):
        try:
            povm = parameterize_general(unpack(x))
        except ArgumentError:
            return 0.0
        return -holevo_quantity(measure_side(rho, side, povm))

    best = None
    starts = []
    for s in cfg.seeds_in:
        # B_i = sqrt(Pi_i) reproduces the seed exactly
        roots = []
        for e in s.effects:
            lam, v = np.linalg.eigh(e)
            roots.append((v * np.sqrt(np.clip(lam, 0, None))) @ v.conj().T)
        if len(roots) == k:
            x = np.concatenate([np.real(roots).ravel(), np.imag(roots).ravel()])
            starts.append(("seed", x))
    for r in range(max(cfg.restarts, 1)):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, r]))
        starts.append((f"restart{r}", rng.normal(size=2 * n)))
    iters = 0
    for name, x0 in starts:
        res = minimize(loss, x0, method="L-BFGS-B",
                       options={"maxiter": cfg.max_iters, "ftol": cfg.conv_tol})
        iters += int(res.nit)
        if best is None or -res.fun > best[0] + 1e-15:
            best = (-res.fun, res.x, name, bool(res.success))
    cert = parameterize_general(unpack(best[1]))
    value = holevo_quantity(measure_side(rho, side, cert))
    return OptResult(value=value, certificate=cert, restarts_used=len(starts),
                     best_restart_trace=[(0, value)], converged=best[3],
                     iterations=iters, best_start=best[2])


# --------------------------------------------------------------------------
# product measurements


def _classical_register_state(probs, states, classical_first: bool) -> DensityMatrix:
    """sum_i p_i |i><i| (x) rho_i (or rho_i (x) |i><i|) from a conditional ensemble."""
    k, e = len(probs), states.shape[1]
    blocks = probs[:, None, None] * states
    m = np.zeros((k * e, k * e), dtype=complex)
    if classical_first:
        for i in range(k):
            m[i * e:(i + 1) * e, i * e:(i + 1) * e] = blocks[i]
        dims = (k, e)
    else:
        for i in range(k):
            m[i::k, i::k] = blocks[i]
        dims = (e, k)
    return DensityMatrix(m, dims, check=False)


def _alternate(rho, ma, mb, sweeps, cfg_a, cfg_b, cancel):
    iters = 0
    trace = []
    for sweep in range(sweeps):
        ens = measure_side(rho, "A", povm_from_rows(ma))
        cq = _classical_register_state(ens.probs, ens.states, classical_first=True)
        mb, _, it, _, _ = _ascend(HolevoObjective(cq, "B"), mb, cfg_b.max_iters, cfg_b.conv_tol, cancel)
        iters += it
        ens = measure_side(rho, "B", povm_from_rows(mb))
        qc = _classical_register_state(ens.probs, ens.states, classical_first=False)
        ma, _, it, _, _ = _ascend(HolevoObjective(qc, "A"), ma, cfg_a.max_iters, cfg_a.conv_tol, cancel)
        iters += it
        trace.append((sweep + 1, classical_mutual_information(
            joint_distribution(rho, povm_from_rows(ma), povm_from_rows(mb)))))
    pa, pb = povm_from_rows(ma), povm_from_rows(mb)
    return pa, pb, classical_mutual_information(joint_distribution(rho, pa, pb)), iters, trace


def maximize_product(rho: DensityMatrix, cfg_a: OptConfig | None = None,
                     cfg_b: OptConfig | None = None, sweeps: int = 6,
                     cancel: Callable[[], bool] | None = None) -> OptResult:
    """Maximize I(A:B) of the outcome distribution over product POVMs by block-coordinate ascent.

    With the A-side POVM fixed the objective is the Holevo quantity of the B-side
    measurement on the classical-quantum state ``sum_i p_i |i><i| (x) rho_i``,
    and vice versa, so each half-sweep reuses the single-side ascent.
    """
    cfg_a = cfg_a or OptConfig()
    cfg_b = cfg_b or cfg_a
    if cfg_a.mode == "general" or cfg_b.mode == "general":
        raise ArgumentError("product optimization supports rank1-stiefel and projective modes")
    if len(rho.dims) != 2:
        raise ArgumentError("maximize_product needs a bipartite state")
    da, db = rho.dims
    ka, kb = cfg_a.outcomes_for(da), cfg_b.outcomes_for(db)

    starts = []
    if cfg_a.structured_starts:
        _, va = np.linalg.eigh(partial_trace(rho, [0]).matrix)
        _, vb = np.linalg.eigh(partial_trace(rho, [1]).matrix)
        starts.append(("computational", _pad(np.eye(da), ka), _pad(np.eye(db), kb)))
        starts.append(("eigenbasis", _pad(va.conj().T, ka), _pad(vb.conj().T, kb)))
    for j, s in enumerate(cfg_a.seeds_in):
        if isinstance(s, tuple) and len(s) == 2:
            starts.append((f"seed{j}", s[0].rank_one_rows(), s[1].rank_one_rows()))
    for r in range(cfg_a.restarts):
        rng = np.random.default_rng(np.random.SeedSequence([cfg_a.seed, r]))
        starts.append((f"restart{r}", _random_isometry(rng, ka, da), _random_isometry(rng, kb, db)))

    def one(item):
        name, ma, mb = item
        return (name,) + _alternate(rho, ma, mb, sweeps, cfg_a, cfg_b, cancel)

    if cfg_a.threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=cfg_a.threads) as ex:
            results = list(ex.map(one, starts))
    else:
        results = [one(s) for s in starts]
    best = max(range(len(results)), key=lambda i: (results[i][3], -i))
    name, pa, pb, value, _, trace = results[best]
    return OptResult(
        value=value,
        certificate=(pa, pb),
        restarts_used=len(results),
        best_restart_trace=trace,
        iterations=int(sum(r[4] for r in results)),
        converged=True,
        best_start=name,
    )


def with_seeds(cfg: OptConfig, seeds) -> OptConfig:
    return replace(cfg, seeds_in=tuple(cfg.seeds_in) + tuple(seeds))


def evaluate_certificate(rho: DensityMatrix, side, cert) -> float:
    """Re-evaluate the objective on a certificate: Holevo for one POVM, I(A:B) for a pair."""
    if isinstance(cert, tuple):
        return classical_mutual_information(joint_distribution(rho, cert[0], cert[1]))
    return holevo_quantity(measure_side(rho, side, cert))

