"""Seeded property suites that check the correlation inequalities numerically.

Each suite draws independent trials from ``SeedSequence([seed, trial])``;
a trial passes when its margin (distance to violating the checked
inequality, in bits) is nonnegative. Failing trials are dumped as state
files that :func:`replay` can re-run alone.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import ArgumentError, CapacityError
from .io import save_state, state_from_dict
from .measures import (
    CutSpec,
    coherent_information,
    eof_two_qubit,
    irreversibility_bound,
    koashi_winter_terms,
    party_state,
    regularization_probe_n2,
    s_min,
    seeded_chain,
)
from .povm_opt import OptConfig
from .qstate import DensityMatrix, PureState, group, partial_trace, tensor, von_neumann_entropy
from .states import (
    make_ghz_epr_phi,
    make_ghz_epr_psi,
    make_trine,
    parties_from_labels,
    random_cq,
    random_density,
    random_pure,
    random_separable,
)
from .tolerances import MAX_AMBIENT_DIM, TAU_CHAIN, TAU_KW, TAU_NUM

__all__ = ["SUITES", "SuiteSpec", "SuiteReport", "run_suite", "replay", "projective_grid_value"]

log = logging.getLogger(__name__)

DEFAULT_TRIALS = {
    "prop1": 50,
    "prop3": 20,
    "prop4": 20,
    "prop5": 500,
    "lemma2": 10,
    "sm-superadd": 200,
    "pure-collapse": 50,
    "koashi-winter": 200,
    "trine-gap": 1,
}
SUITES = tuple(DEFAULT_TRIALS)
DEFAULT_DIMS = ((2, 2), (2, 3), (3, 3))
TRINE_MIN_GAP = 0.01


def _sig12(x):
    return float(f"{x:.12g}")


@dataclass(frozen=True)
class SuiteSpec:
    suite: str
    trials: int | None = None
    seed: int = 1
    dims: tuple = DEFAULT_DIMS
    tolerances: dict = field(default_factory=dict)
    restarts: int = 8
    threads: int = 1
    dump_dir: str | None = None

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ArgumentError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if self.trials is not None and self.trials < 1:
            raise ArgumentError("trials must be >= 1")
        dims = tuple(tuple(int(x) for x in d) for d in self.dims)
        if not dims or any(len(d) != 2 or min(d) < 2 for d in dims):
            raise ArgumentError("dims must be a nonempty list of pairs of sizes >= 2")
        # tensor-product suites square the dimension
        if any((d[0] * d[1]) ** 2 > MAX_AMBIENT_DIM for d in dims):
            raise ArgumentError(f"dims {dims} exceed capacity for two-copy checks")
        object.__setattr__(self, "dims", dims)
        unknown = set(self.tolerances) - {"tau_num", "tau_chain", "tau_kw", "trine_gap"}
        if unknown:
            raise ArgumentError(f"unknown tolerance overrides {sorted(unknown)}")

    @property
    def n_trials(self) -> int:
        return DEFAULT_TRIALS[self.suite] if self.trials is None else self.trials

    def tol(self, name: str) -> float:
        defaults = {"tau_num": TAU_NUM, "tau_chain": TAU_CHAIN, "tau_kw": TAU_KW,
                    "trine_gap": TRINE_MIN_GAP}
        return float(self.tolerances.get(name, defaults[name]))


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials_run: int
    failures: list
    wall_time: float
    records: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def min_margin(self) -> float | None:
        m = [r["margin"] for r in self.records]
        return min(m) if m else None

    def to_dict(self) -> dict:
        def clean(v):
            if isinstance(v, float):
                return _sig12(v)
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            return v

        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials_run": self.trials_run,
            "passed": self.passed,
            "min_margin": None if self.min_margin is None else _sig12(self.min_margin),
            "failures": clean(self.failures),
            "skipped": clean(self.skipped),
            "wall_time": round(self.wall_time, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def table(self) -> str:
        lines = [f"suite {self.suite}  seed {self.seed}  trials {self.trials_run}  "
                 f"failures {len(self.failures)}  skipped {len(self.skipped)}  "
                 f"time {self.wall_time:.1f}s"]
        if self.min_margin is not None:
            lines.append(f"  min margin {self.min_margin:.6g}")
        for f in self.failures:
            lines.append(f"  FAIL trial {f['trial']} seed {f['trial_seed']} margin "
                         f"{f['margin']:.6g} -> {f['state_file']}")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# trial plumbing


@dataclass
class _Trial:
    state: object
    meta: dict = field(default_factory=dict)


def _trial_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, i]).generate_state(1)[0])


def _cfg(spec: SuiteSpec, trial_seed: int) -> OptConfig:
    return OptConfig(restarts=spec.restarts, seed=trial_seed)


def _pick_dims(rng, spec):
    return spec.dims[int(rng.integers(len(spec.dims)))]


def _margin(values: dict, slacks: list[float]) -> tuple[dict, float]:
    return values, float(min(slacks))


# --------------------------------------------------------------------------
# suites: (sampler, checker) pairs


def _sample_prop1(rng, spec):
    dims = _pick_dims(rng, spec)
    rank = int(rng.integers(1, dims[0] * dims[1] + 1))
    return _Trial(random_density(dims, rank, rng))


def _check_prop1(state, meta, spec, cfg):
    ch = seeded_chain(state, None, cfg)
    c, ha, hb, sm = (ch[k].value for k in ("symmetric", "holevo_A", "holevo_B", "s_min"))
    tc, tn = spec.tol("tau_chain"), spec.tol("tau_num")
    values = {"C": c, "Ch_A": ha, "Ch_B": hb, "s_min": sm}
    return _margin(values, [ha + tc - c, hb + tc - c, sm + tn - ha, sm + tn - hb])


def _sample_prop3(rng, spec):
    da, db = _pick_dims(rng, spec)
    return _Trial(random_cq(da, db, rng))


def _check_prop3(state, meta, spec, cfg):
    ch = seeded_chain(state, None, cfg)
    c, hb = ch["symmetric"].value, ch["holevo_B"].value
    qa = ch["mutual_information"].value - ch["holevo_A"].value
    tk = spec.tol("tau_kw")
    values = {"C": c, "Ch_B": hb, "Qd_A": qa}
    return _margin(values, [tk - abs(c - hb), tk - qa])


def _sample_prop4(rng, spec):
    return _Trial(random_pure((2, 2, 2), rng))


def _check_prop4(state, meta, spec, cfg):
    pm = meta.get("party_map")
    rep = irreversibility_bound(state, pm, cfg)
    tn = spec.tol("tau_num")
    bound = rep.value
    disc = rep.diagnostics["discord_form"]
    values = {"bound": bound, "discord_form": disc, "cbar_est": rep.diagnostics["cbar_est"],
              "s_min_AC": rep.diagnostics["s_min"]}
    slacks = [bound + tn, disc - bound + tn]
    if pm is None and state.dims == (2, 2, 2):
        rho_ab = state.reduced([0, 1])
        ef = eof_two_qubit(rho_ab).value
        ic = coherent_information(rho_ab).value
        values.update({"eof_AB": ef, "coherent_AB": ic})
        # hashing <= distillable <= cost <= formation
        slacks.append(ef - ic + tn)
    if "expected_bound" in meta:
        values["expected_bound"] = meta["expected_bound"]
        slacks.append(spec.tol("tau_kw") - abs(bound - meta["expected_bound"]))
    return _margin(values, slacks)


def _fixed_prop4():
    out = []
    for st, expected in ((make_ghz_epr_psi(), 0.0), (make_ghz_epr_phi(), 1.0)):
        pm = parties_from_labels(st.spec)
        out.append(_Trial(st, {"fixed": st.label, "expected_bound": expected, "party_map": pm}))
    return out


def _sample_prop5(rng, spec):
    da, db = _pick_dims(rng, spec)
    k = int(rng.integers(2, 5))
    p = rng.dirichlet(np.ones(k))
    m = np.zeros((da * db * k,) * 2, dtype=complex)
    for i in range(k):
        r = random_density(da, int(rng.integers(1, da + 1)), rng)
        s = random_density(db, int(rng.integers(1, db + 1)), rng)
        blk = p[i] * np.kron(r.matrix, s.matrix)
        # register K is the last subsystem: entries (ab, k) -> ab * k_dim + k
        m[i::k, i::k] = blk
    return _Trial(DensityMatrix(m, (da, db, k), ("A", "B", "K"), separable=True))


def _check_prop5(state, meta, spec, cfg):
    da, db, k = state.dims
    t = state.matrix.reshape(da * db, k, da * db, k)
    lhs_a = 0.0
    sig = np.zeros((db, db), dtype=complex)
    prod = np.zeros((da * db,) * 2, dtype=complex)
    for i in range(k):
        blk = t[:, i, :, i]
        p = float(np.real(np.trace(blk)))
        if p <= 0:
            continue
        blk4 = (blk / p).reshape(da, db, da, db)
        rho_k = np.einsum("ajbj->ab", blk4)
        sig_k = np.einsum("jajb->ab", blk4)
        lhs_a += p * von_neumann_entropy(rho_k)
        sig += p * sig_k
        prod += blk
    lhs = lhs_a + von_neumann_entropy(sig)
    rhs = von_neumann_entropy(prod)
    return _margin({"lhs": lhs, "rhs": rhs}, [rhs - lhs + spec.tol("tau_num")])


def _sample_lemma2(rng, spec):
    return _Trial(random_separable(2, 2, int(rng.integers(1, 5)), rng))


def _check_lemma2(state, meta, spec, cfg):
    probe = regularization_probe_n2(state, CutSpec(None, "A"), cfg)
    single = probe.diagnostics["single"]
    tk = spec.tol("tau_kw")
    return _margin({"single": single, "probe_n2": probe.value}, [tk - abs(probe.value - single)])


def _split_pair(rng, spec):
    d1 = _pick_dims(rng, spec)
    d2 = _pick_dims(rng, spec)
    r = random_density(d1, int(rng.integers(1, d1[0] * d1[1] + 1)), rng)
    s = random_density(d2, int(rng.integers(1, d2[0] * d2[1] + 1)), rng)
    return r, s


def _pair_state(r: DensityMatrix, s: DensityMatrix) -> DensityMatrix:
    t = tensor(r, s)
    return DensityMatrix(t.matrix, t.dims, ("a1", "b1", "a2", "b2"), check=False)


def _sample_sm(rng, spec):
    r, s = _split_pair(rng, spec)
    return _Trial(_pair_state(r, s))


def _check_sm(state, meta, spec, cfg):
    if state.labels != ("a1", "b1", "a2", "b2"):
        raise ArgumentError("superadditivity check expects subsystems a1 b1 a2 b2")
    r = partial_trace(state, [0, 1])
    s = partial_trace(state, [2, 3])
    joint = s_min(state, CutSpec({"A": (0, 2), "B": (1, 3)})).value
    sr, ss = s_min(r).value, s_min(s).value
    values = {"s_min_joint": joint, "s_min_rho": sr, "s_min_sigma": ss, "gap": joint - sr - ss}
    slacks = [joint - sr - ss + spec.tol("tau_num")]
    if "min_gap" in meta:
        slacks.append(joint - sr - ss - meta["min_gap"])
    return _margin(values, slacks)


def _fixed_sm():
    # rho_AB of the nine-qubit state splits into an EPR pair (a2 b2) and a separable rest
    phi = make_ghz_epr_phi()
    pm = parties_from_labels(phi.spec)
    rho_ab, m = party_state(phi, pm, ["A", "B"])
    labels = rho_ab.labels
    epr = [labels.index("a2"), labels.index("b2")]
    rest_a = [labels.index(x) for x in ("a1", "a3")]
    rest_b = [labels.index(x) for x in ("b1", "b3")]
    r = group(partial_trace(rho_ab, epr), [[0], [1]], ["A", "B"])
    sub = partial_trace(rho_ab, sorted(rest_a + rest_b))
    sl = sub.labels
    s = group(sub, [[sl.index("a1"), sl.index("a3")], [sl.index("b1"), sl.index("b3")]], ["A", "B"])
    return [_Trial(_pair_state(r, s), {"fixed": "ghz-epr-phi AB split", "min_gap": 0.5})]


def _sample_pure(rng, spec):
    return _Trial(random_pure(_pick_dims(rng, spec), rng))


def _check_pure(state, meta, spec, cfg):
    rho = state.density() if isinstance(state, PureState) else state
    ch = seeded_chain(rho, None, cfg)
    sa = von_neumann_entropy(partial_trace(rho, [0]))
    values = {k: ch[k].value for k in ("symmetric", "holevo_A", "holevo_B", "s_min")}
    values["S_A"] = sa
    tk = spec.tol("tau_kw")
    return _margin(values, [tk - abs(v - sa) for k, v in values.items() if k != "S_A"])


def _sample_kw(rng, spec):
    return _Trial(random_pure((2, 2, 2), rng))


def _check_kw(state, meta, spec, cfg):
    t = koashi_winter_terms(state, meta.get("party_map"), cfg)
    res = t["residual"]
    values = {k: t[k] for k in ("eof", "holevo", "s_a", "residual")}
    return _margin(values, [res + spec.tol("tau_kw"), spec.tol("tau_num") - res])


def projective_grid_value(rho: DensityMatrix, step_deg: float = 1.0) -> float:
    """Best I(A:B) with A read out in its computational basis and B a projective qubit measurement.

    The B axis runs over a polar/azimuthal grid of ``step_deg`` resolution.
    """
    if len(rho.dims) != 2 or rho.dims[1] != 2:
        raise ArgumentError("grid oracle needs a bipartite state with a qubit on side B")
    da = rho.dims[0]
    r = rho.matrix.reshape(da, 2, da, 2)
    blocks = np.array([r[a, :, a, :] for a in range(da)])          # unnormalized conditionals
    pa = np.real(np.einsum("kii->k", blocks))
    # Bloch components of each unnormalized block
    bx = 2 * np.real(blocks[:, 0, 1])
    by = -2 * np.imag(blocks[:, 0, 1])
    bz = np.real(blocks[:, 0, 0] - blocks[:, 1, 1])
    th = np.deg2rad(np.arange(0.0, 180.0 + 1e-9, step_deg))
    ph = np.deg2rad(np.arange(0.0, 360.0, step_deg))
    T, P = np.meshgrid(th, ph, indexing="ij")
    nx, ny, nz = np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)
    dot = bx[:, None, None] * nx + by[:, None, None] * ny + bz[:, None, None] * nz
    plus = 0.5 * (pa[:, None, None] + dot)
    joint = np.stack([plus, pa[:, None, None] - plus], axis=1)     # (a, b, theta, phi)
    joint = np.clip(joint, 0.0, None)

    def h(x, axes):
        x = np.where(x > 0, x, 1.0)
        return -np.sum(x * np.log2(x), axis=axes)

    hj = h(joint, (0, 1))
    hb = h(joint.sum(0), 0)
    ha = -np.sum(pa[pa > 0] * np.log2(pa[pa > 0]))
    return float(np.max(ha + hb - hj))


def _sample_trine(rng, spec):
    return _Trial(make_trine())


def _check_trine(state, meta, spec, cfg):
    from .measures import symmetric_correlation

    grid = projective_grid_value(state)
    ch = seeded_chain(state, None, cfg)
    c = ch["symmetric"].value
    proj = symmetric_correlation(state, None, OptConfig(mode="projective", restarts=cfg.restarts,
                                                        seed=cfg.seed)).value
    hb = ch["holevo_B"].value
    values = {"C_povm": c, "C_projective": proj, "grid": grid, "Ch_B": hb, "margin_bits": c - grid}
    return _margin(values, [c - grid - spec.tol("trine_gap"), spec.tol("tau_kw") - abs(c - hb)])


_SUITES: dict[str, tuple[Callable, Callable, Callable | None]] = {
    "prop1": (_sample_prop1, _check_prop1, None),
    "prop3": (_sample_prop3, _check_prop3, None),
    "prop4": (_sample_prop4, _check_prop4, _fixed_prop4),
    "prop5": (_sample_prop5, _check_prop5, None),
    "lemma2": (_sample_lemma2, _check_lemma2, None),
    "sm-superadd": (_sample_sm, _check_sm, _fixed_sm),
    "pure-collapse": (_sample_pure, _check_pure, None),
    "koashi-winter": (_sample_kw, _check_kw, None),
    "trine-gap": (_sample_trine, _check_trine, None),
}


def _dump(spec: SuiteSpec, trial: _Trial, index: int, trial_seed: int, values, margin) -> str:
    d = Path(spec.dump_dir or "qcorr_failures")
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"{spec.suite}_seed{spec.seed}_trial{index}.json"
    meta = {k: v for k, v in trial.meta.items()}
    if "party_map" in meta:
        meta["party_map"] = {k: list(v) for k, v in meta["party_map"].items()}
    save_state(trial.state, path, extra={
        "suite": spec.suite, "master_seed": spec.seed, "trial": index,
        "trial_seed": trial_seed, "meta": meta,
        "values": {k: _sig12(v) for k, v in values.items()}, "margin": _sig12(margin),
    })
    return str(path)


def _run_trial(spec, index, trial, trial_seed, check):
    cfg = _cfg(spec, trial_seed)
    try:
        values, margin = check(trial.state, trial.meta, spec, cfg)
    except CapacityError as exc:
        return {"trial": index, "trial_seed": trial_seed, "skipped": str(exc)}
    return {"trial": index, "trial_seed": trial_seed, "values": values, "margin": margin,
            "meta": trial.meta}


def run_suite(spec: SuiteSpec) -> SuiteReport:
    """Run every trial of ``spec`` (plus the suite's fixed instances) and collect margins."""
    sampler, check, fixed = _SUITES[spec.suite]
    t0 = time.perf_counter()
    jobs = []
    for i in range(spec.n_trials):
        ts = _trial_seed(spec.seed, i)
        jobs.append((i, sampler(np.random.default_rng(ts), spec), ts))
    if fixed is not None:
        for j, tr in enumerate(fixed()):
            jobs.append((spec.n_trials + j, tr, _trial_seed(spec.seed, spec.n_trials + j)))

    def go(job):
        i, tr, ts = job
        return _run_trial(spec, i, tr, ts, check)

    if spec.threads > 1:
        with ThreadPoolExecutor(max_workers=spec.threads) as ex:
            results = list(ex.map(go, jobs))
    else:
        results = [go(j) for j in jobs]
    results.sort(key=lambda r: r["trial"])

    records, failures, skipped = [], [], []
    for (i, tr, ts), r in zip(jobs, results):
        if "skipped" in r:
            skipped.append(r)
            continue
        records.append({"trial": i, "trial_seed": ts, "values": r["values"], "margin": r["margin"]})
        if r["margin"] < 0:
            path = _dump(spec, tr, i, ts, r["values"], r["margin"])
            log.warning("suite %s trial %d failed with margin %.3g", spec.suite, i, r["margin"])
            failures.append({"trial": i, "trial_seed": ts, "seed": spec.seed, "state_file": path,
                             "values": r["values"], "margin": r["margin"]})
    return SuiteReport(spec.suite, spec.seed, len(records), failures,
                       time.perf_counter() - t0, records, skipped)


def replay(state_file, suite: str, spec: SuiteSpec | None = None) -> SuiteReport:
    """Re-run one suite check on a saved state (a failure dump or any state file)."""
    try:
        with open(state_file) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise OSError(f"cannot read state file {state_file}: {exc}") from exc
    if suite not in _SUITES:
        raise ArgumentError(f"unknown suite {suite!r}")
    state = state_from_dict(raw)
    spec = spec or SuiteSpec(suite, trials=1, seed=int(raw.get("master_seed", 1)))
    meta = dict(raw.get("meta", {}))
    if "party_map" in meta:
        meta["party_map"] = {k: tuple(v) for k, v in meta["party_map"].items()}
    elif "parties" in raw:
        meta["party_map"] = {k: tuple(v) for k, v in raw["parties"].items()}
    if suite in ("prop1", "prop3", "pure-collapse", "lemma2", "trine-gap") and isinstance(state, PureState):
        state = state.density()
    ts = int(raw.get("trial_seed", spec.seed))
    t0 = time.perf_counter()
    r = _run_trial(spec, int(raw.get("trial", 0)), _Trial(state, meta), ts, _SUITES[suite][1])
    if "skipped" in r:
        return SuiteReport(suite, spec.seed, 0, [], time.perf_counter() - t0, [], [r])
    rec = {"trial": r["trial"], "trial_seed": ts, "values": r["values"], "margin": r["margin"]}
    failures = []
    if r["margin"] < 0:
        failures.append({**rec, "seed": spec.seed, "state_file": str(state_file)})
    return SuiteReport(suite, spec.seed, 1, failures, time.perf_counter() - t0, [rec], [])
