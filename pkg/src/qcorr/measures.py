"""Named correlation measures of bipartite states.

Every optimized classical correlation is a certified *lower* bound (the
certificate reproduces the value), so the discords built from them are
*upper* bounds. A lower bound that reaches the ceiling ``s_min`` within
``TAU_NUM`` is pinched and reported as exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .errors import ArgumentError, CapacityError
from .measurement import Povm, computational_povm, povm_from_rows, tensor_povm
from .povm_opt import OptConfig, evaluate_certificate, maximize_product, maximize_single, with_seeds
from .qstate import (
    DensityMatrix,
    PureState,
    group,
    is_ppt,
    partial_trace,
    permute,
    tensor,
    von_neumann_entropy,
)
from .states import parties_from_labels
from .tolerances import TAU_NUM

__all__ = [
    "CutSpec",
    "MeasureReport",
    "Sandwich",
    "party_state",
    "tensor_factors",
    "mutual_information",
    "s_min",
    "coherent_information",
    "holevo_correlation",
    "symmetric_correlation",
    "discord",
    "symmetric_discord",
    "eof_two_qubit",
    "concurrence_two_qubit",
    "koashi_winter_terms",
    "koashi_winter_residual",
    "irreversibility_bound",
    "regularization_probe_n2",
    "lemma2_additive_value",
    "cl_sandwich",
    "seeded_chain",
]

# largest measured-side dimension handed to the direct optimizer
DIRECT_MEASURED_CAP = 16
PROBE_CAP = 64


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


@dataclass(frozen=True)
class CutSpec:
    """Assignment of subsystems to named parties plus the measured party.

    ``party_map`` is ordered; bipartite measures use its first two parties.
    ``measured_side`` is a party name, ``"both"`` or ``None``. With
    ``party_map=None`` a two-subsystem state is split as A=0, B=1 and a
    labelled state is grouped by label initials.
    """

    party_map: Mapping[str, tuple[int, ...]] | None = None
    measured_side: str | None = None

    def __post_init__(self):
        if self.party_map is not None:
            pm = {str(k): tuple(int(i) for i in v) for k, v in self.party_map.items()}
            object.__setattr__(self, "party_map", pm)

    def resolve(self, state) -> dict[str, tuple[int, ...]]:
        n = len(state.dims)
        if self.party_map is not None:
            pm = dict(self.party_map)
        elif n == 2:
            names = ("A", "B")
            if state.labels is not None and len(set(state.labels)) == 2:
                names = tuple(lab[0].upper() for lab in state.labels)
                if names[0] == names[1]:
                    names = ("A", "B")
            pm = {names[0]: (0,), names[1]: (1,)}
        else:
            pm = parties_from_labels(state.spec)
        pm = {k: tuple(sorted(v)) for k, v in pm.items()}
        flat = sorted(i for v in pm.values() for i in v)
        if flat != list(range(n)):
            raise ArgumentError(f"party map {pm} does not partition {n} subsystems")
        return pm

    def with_measured(self, side: str | None) -> "CutSpec":
        return replace(self, measured_side=side)


@dataclass
class MeasureReport:
    name: str
    value: float
    bound_direction: str
    certificate: Povm | tuple | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.bound_direction not in ("lower", "upper", "exact"):
            raise ArgumentError(f"bad bound direction {self.bound_direction!r}")

    def to_dict(self, certificate_file: str | None = None) -> dict:
        d = {"name": self.name, "value": _sig12(self.value), "bound_direction": self.bound_direction}
        if certificate_file is not None:
            d["certificate_file"] = str(certificate_file)
        diag = _clean(self.diagnostics)
        diag.setdefault("restarts", 0)
        diag.setdefault("converged", True)
        diag.setdefault("iters", 0)
        d["diagnostics"] = diag
        return d


def _clean(v):
    """JSON-ready copy with floats cut to 12 significant digits."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return _sig12(float(v))
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


class Sandwich(NamedTuple):
    lower: float
    upper: float

    @property
    def locked_width(self) -> float:
        return self.upper - self.lower


# --------------------------------------------------------------------------
# cuts and party views


def _as_density(state) -> DensityMatrix:
    return state.density() if isinstance(state, PureState) else state


def party_state(state, party_map: Mapping[str, Sequence[int]], keep: Sequence[str]):
    """Reduced state on the parties ``keep`` with its fine subsystem structure intact.

    Returns ``(rho, cut_map)`` where ``cut_map`` maps each kept party to its
    subsystem indices in ``rho``.
    """
    idx = sorted(i for p in keep for i in party_map[p])
    if isinstance(state, PureState):
        rho = state.reduced(idx)
    else:
        rho = partial_trace(state, idx) if len(idx) < len(state.dims) else state
    pos = {old: new for new, old in enumerate(idx)}
    return rho, {p: tuple(pos[i] for i in party_map[p]) for p in keep}


def _bipartite(rho: DensityMatrix, cut: CutSpec | None):
    """Group ``rho`` into (X, Y) for the first two parties of the cut."""
    cut = cut or CutSpec()
    pm = cut.resolve(rho)
    names = list(pm)
    if len(names) != 2:
        raise ArgumentError(f"bipartite measure needs exactly two parties, got {names}")
    x, y = names
    rho2 = group(rho, [pm[x], pm[y]], labels=[x, y])
    return rho2, names, pm


def _measured_letter(cut: CutSpec | None, names) -> str:
    """Map the measured party name onto the position letter of the grouped state."""
    side = None if cut is None else cut.measured_side
    if side is None:
        return "A"
    if side == names[0]:
        return "A"
    if side == names[1]:
        return "B"
    raise ArgumentError(f"measured side {side!r} is not one of the parties {names}")


def _entropies(rho2: DensityMatrix):
    sa = von_neumann_entropy(partial_trace(rho2, [0]))
    sb = von_neumann_entropy(partial_trace(rho2, [1]))
    sab = von_neumann_entropy(rho2)
    return sa, sb, sab


# --------------------------------------------------------------------------
# closed-form measures


def mutual_information(rho, cut: CutSpec | None = None) -> MeasureReport:
    rho2, _, _ = _bipartite(_as_density(rho), cut)
    sa, sb, sab = _entropies(rho2)
    return MeasureReport("mutual-information", sa + sb - sab, "exact",
                         diagnostics={"method": "closed-form"})


def s_min(rho, cut: CutSpec | None = None) -> MeasureReport:
    """min{S(A), S(B), S(A:B)}: the ceiling for every classical correlation measure."""
    rho2, _, _ = _bipartite(_as_density(rho), cut)
    sa, sb, sab = _entropies(rho2)
    return MeasureReport("s-min", min(sa, sb, sa + sb - sab), "exact",
                         diagnostics={"method": "closed-form"})


def coherent_information(rho, cut: CutSpec | None = None) -> MeasureReport:
    rho2, _, _ = _bipartite(_as_density(rho), cut)
    sa, sb, sab = _entropies(rho2)
    return MeasureReport("coherent-information", max(0.0, sa - sab, sb - sab), "exact",
                         diagnostics={"method": "closed-form"})


def concurrence_two_qubit(rho: DensityMatrix) -> float:
    if rho.dim != 4:
        raise ArgumentError("concurrence needs a two-qubit state")
    yy = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0]))
    m = rho.matrix
    tilde = yy @ m.conj() @ yy
    lam = np.sqrt(np.clip(np.real(np.linalg.eigvals(m @ tilde)), 0.0, None))
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _binary_entropy(x: float) -> float:
    return -sum(p * np.log2(p) for p in (x, 1 - x) if p > 0)


def eof_two_qubit(rho, cut: CutSpec | None = None) -> MeasureReport:
    """Entanglement of formation from the concurrence closed form."""
    rho = _as_density(rho)
    if len(rho.dims) != 2 and rho.dim == 4:
        rho, _, _ = _bipartite(rho, cut)
    if rho.dims != (2, 2):
        raise ArgumentError(f"two-qubit state required, got dims {rho.dims}")
    c = concurrence_two_qubit(rho)
    e = _binary_entropy((1 + np.sqrt(max(0.0, 1 - c * c))) / 2) + 0.0
    return MeasureReport("eof", float(e), "exact",
                         diagnostics={"method": "closed-form", "concurrence": c})


# --------------------------------------------------------------------------
# factorization route


def _is_product(rho: DensityMatrix, part: Sequence[int], tol: float) -> bool:
    rest = [i for i in range(len(rho.dims)) if i not in part]
    a = partial_trace(rho, part)
    b = partial_trace(rho, rest)
    order = sorted(part) + rest
    return np.max(np.abs(permute(rho, order).matrix - np.kron(a.matrix, b.matrix))) < tol


def tensor_factors(rho: DensityMatrix, tol: float = 1e-10) -> list[tuple[int, ...]]:
    """Finest partition of the subsystems into groups on which ``rho`` is a tensor product."""
    remaining = list(range(len(rho.dims)))
    current = rho
    factors = []
    while remaining:
        n = len(remaining)
        found = None
        for size in range(1, n):
            for combo in combinations(range(1, n), size - 1):
                local = (0,) + combo
                if _is_product(current, local, tol):
                    found = local
                    break
            if found:
                break
        if found is None:
            factors.append(tuple(remaining))
            break
        factors.append(tuple(remaining[i] for i in found))
        keep = [i for i in range(n) if i not in found]
        current = partial_trace(current, keep)
        remaining = [remaining[i] for i in keep]
    return factors


def _certified_separable(rho: DensityMatrix, xs, ys) -> bool:
    if not xs or not ys or rho.separable:
        return True
    rho2 = group(rho, [xs, ys])
    if rho2.is_pure():
        return von_neumann_entropy(partial_trace(rho2, [0])) < TAU_NUM
    return rho2.dim <= 6 and is_ppt(rho2)


def _permute_povm(povm: Povm, dims: Sequence[int], order: Sequence[int]) -> Povm:
    """Relabel a POVM on subsystems ordered as ``order`` (dims given in that order) to sorted order."""
    n = len(dims)
    inv = np.argsort(order)
    k, d = povm.n_outcomes, povm.dim
    t = povm.effects.reshape((k,) + tuple(dims) * 2)
    axes = [0] + [1 + i for i in inv] + [1 + n + i for i in inv]
    return Povm(t.transpose(axes).reshape(k, d, d), check=False)


def _factorized_route(rho: DensityMatrix, pm, meas, other, cfg):
    """Per-factor Holevo correlations of a tensor-product state and their product certificate.

    Returns ``(total, exact, certificate, factor_info)`` or ``None`` when the
    state does not factor. The sum equals the Holevo correlation of the whole
    state when at most one factor is not certified separable; ``exact`` is
    set only then and only if every factor value is itself exact.
    """
    factors = tensor_factors(rho)
    if len(factors) < 2:
        return None
    parts = []
    nonsep = 0
    for f in factors:
        xs = [i for i in f if i in pm[meas]]
        ys = [i for i in f if i in pm[other]]
        sub = partial_trace(rho, f)
        loc = {old: new for new, old in enumerate(sorted(f))}
        lx = tuple(loc[i] for i in xs)
        ly = tuple(loc[i] for i in ys)
        sep = _certified_separable(sub, lx, ly)
        nonsep += not sep
        parts.append((f, xs, lx, ly, sub, sep))

    total = 0.0
    exact = nonsep <= 1
    povms = []
    info = []
    regularized = True
    for f, xs, lx, ly, sub, sep in parts:
        entry = {"subsystems": [int(i) for i in f], "separable": bool(sep)}
        if not xs:
            info.append({**entry, "kind": "unmeasured", "value": 0.0})
            continue
        dx = int(np.prod([rho.dims[i] for i in xs]))
        if not ly:
            povms.append(Povm(np.eye(dx)[None], check=False))
            info.append({**entry, "kind": "local", "value": 0.0})
            continue
        sub2 = group(sub, [lx, ly])
        if sub2.is_pure():
            # the Schmidt basis leaves pure conditionals, so chi = S(marginal)
            _, v = np.linalg.eigh(partial_trace(sub2, [0]).matrix)
            povm = povm_from_rows(v.conj().T)
            val = evaluate_certificate(sub2, "A", povm)
            povms.append(povm)
            total += val
            info.append({**entry, "kind": "pure", "value": val})
            continue
        rep = holevo_correlation(sub2, CutSpec({"X": (0,), "Y": (1,)}, "X"), cfg, factorize=False)
        povms.append(rep.certificate)
        total += rep.value
        exact &= rep.bound_direction == "exact"
        regularized &= sep
        info.append({**entry, "kind": "mixed", "value": rep.value})
    order = [i for _, xs, *_ in parts for i in xs]
    meas_sorted = sorted(pm[meas])
    rank = [meas_sorted.index(i) for i in order]
    dims = [rho.dims[i] for i in order]
    cert = _permute_povm(tensor_povm(*povms), dims, rank)
    return total, bool(exact), cert, info, bool(exact and regularized)


def _finish(name, value, cert, ceiling, summary, extra, exact=False) -> MeasureReport:
    """Pinch a certified lower bound against ``ceiling`` and assemble the report."""
    pinched = value >= ceiling - TAU_NUM
    if pinched or exact:
        diag = {"method": "pinched" if pinched else "factorized", **extra}
        return MeasureReport(name, float(ceiling if pinched else value), "exact", cert, diag)
    diag = dict(summary)
    diag.update(extra)
    return MeasureReport(name, float(value), "lower", cert, diag)


def holevo_correlation(rho, cut: CutSpec | None = None, cfg: OptConfig | None = None,
                       factorize: bool = True, seeds: Sequence[Povm] = ()) -> MeasureReport:
    """Holevo classical correlation with the measurement on ``cut.measured_side``.

    A state that splits into tensor factors with at most one factor not
    certified separable is handled factor by factor and the values added.
    Otherwise the whole measured side is optimized directly, warm-started
    from ``seeds`` and from any product certificate found on the way.
    """
    rho = _as_density(rho)
    cfg = cfg or OptConfig()
    rho2, names, pm = _bipartite(rho, cut)
    side = _measured_letter(cut, names)
    meas, other = (names[0], names[1]) if side == "A" else (names[1], names[0])
    sa, sb, sab = _entropies(rho2)
    ceiling = min(sa, sb, sa + sb - sab)
    extra: dict = {"measured": meas, "s_min": ceiling}

    best = None
    exact = False
    if factorize:
        res = _factorized_route(rho, pm, meas, other, cfg)
        if res is not None:
            _, exact, cert, info, regularized = res
            value = evaluate_certificate(rho2, side, cert)
            extra["factors"] = info
            if exact:
                extra["factorized_value"] = value
                extra["regularized_exact"] = regularized
            best = (value, cert, {}, "factorized")
    if not exact:
        dx = rho2.dims[0 if side == "A" else 1]
        if dx > DIRECT_MEASURED_CAP:
            if best is None:
                raise CapacityError(f"measured dimension {dx} exceeds the direct-optimization cap")
        else:
            warm = list(seeds) + ([best[1]] if best is not None else [])
            opt = maximize_single(rho2, side, "holevo", with_seeds(cfg, warm))
            if best is None or opt.value > best[0]:
                best = (opt.value, opt.certificate, opt.summary(), "direct")
            else:
                best = (best[0], best[1], opt.summary(), best[3])
    value, cert, summary, route = best
    extra["route"] = route
    return _finish("holevo", value, cert, ceiling, summary, extra, exact=exact)


def symmetric_correlation(rho, cut: CutSpec | None = None, cfg_a: OptConfig | None = None,
                          cfg_b: OptConfig | None = None, sweeps: int = 6,
                          seeds: Sequence[tuple] = ()) -> MeasureReport:
    """Largest classical mutual information reachable with local POVMs on both sides."""
    rho2, names, _ = _bipartite(_as_density(rho), cut)
    cfg_a = cfg_a or OptConfig()
    sa, sb, sab = _entropies(rho2)
    ceiling = min(sa, sb, sa + sb - sab)
    opt = maximize_product(rho2, with_seeds(cfg_a, seeds), cfg_b, sweeps)
    return _finish("symmetric-correlation", opt.value, opt.certificate, ceiling, opt.summary(),
                   {"s_min": ceiling, "parties": list(names)})


def discord(rho, cut: CutSpec | None = None, cfg: OptConfig | None = None,
            seeds: Sequence[Povm] = ()) -> MeasureReport:
    """S(A:B) minus the Holevo correlation; an upper bound unless the latter is exact."""
    mi = mutual_information(rho, cut).value
    ch = holevo_correlation(rho, cut, cfg, seeds=seeds)
    diag = dict(ch.diagnostics)
    diag.update({"mutual_information": mi, "holevo": ch.value})
    direction = "exact" if ch.bound_direction == "exact" else "upper"
    return MeasureReport("discord", mi - ch.value, direction, ch.certificate, diag)


def symmetric_discord(rho, cut: CutSpec | None = None, cfg_a: OptConfig | None = None,
                      cfg_b: OptConfig | None = None, sweeps: int = 6) -> MeasureReport:
    mi = mutual_information(rho, cut).value
    c = symmetric_correlation(rho, cut, cfg_a, cfg_b, sweeps)
    diag = dict(c.diagnostics)
    diag.update({"mutual_information": mi, "symmetric": c.value})
    direction = "exact" if c.bound_direction == "exact" else "upper"
    return MeasureReport("symmetric-discord", mi - c.value, direction, c.certificate, diag)


def seeded_chain(rho, cut: CutSpec | None = None, cfg_a: OptConfig | None = None,
                 cfg_b: OptConfig | None = None, sweeps: int = 6) -> dict[str, MeasureReport]:
    """C, both one-sided Holevo correlations, S(A:B) and s_min under a warm-start discipline.

    One-sided runs go first; their certificates, paired with a basis readout
    on the other side, seed the product search. The final one-sided runs are
    seeded from the matching half of the product certificate, so the
    reported values respect C <= C^h on both sides.
    """
    rho = _as_density(rho)
    rho2, names, pm = _bipartite(rho, cut)
    cfg_a = cfg_a or OptConfig()
    cfg_b = cfg_b or cfg_a
    base = CutSpec(pm)
    first_a = holevo_correlation(rho, base.with_measured(names[0]), cfg_a)
    first_b = holevo_correlation(rho, base.with_measured(names[1]), cfg_b)
    da, db = rho2.dims
    pairs = []
    for basis_b in (computational_povm(db), _eigenbasis_povm(partial_trace(rho2, [1]))):
        pairs.append((first_a.certificate, basis_b))
    for basis_a in (computational_povm(da), _eigenbasis_povm(partial_trace(rho2, [0]))):
        pairs.append((basis_a, first_b.certificate))
    c = symmetric_correlation(rho, base, cfg_a, cfg_b, sweeps, seeds=pairs)
    pa, pb = c.certificate
    return {
        "symmetric": c,
        "holevo_A": holevo_correlation(rho, base.with_measured(names[0]), cfg_a,
                                       seeds=[pa, first_a.certificate]),
        "holevo_B": holevo_correlation(rho, base.with_measured(names[1]), cfg_b,
                                       seeds=[pb, first_b.certificate]),
        "s_min": s_min(rho, base),
        "mutual_information": mutual_information(rho, base),
    }


def _eigenbasis_povm(rho: DensityMatrix) -> Povm:
    _, v = np.linalg.eigh(rho.matrix)
    return povm_from_rows(v.conj().T)


def cl_sandwich(rho, cut: CutSpec | None = None, cfg_a: OptConfig | None = None,
                cfg_b: OptConfig | None = None) -> Sandwich:
    """Interval [C, C^h measured on the first party] for the one-way correlation in between.

    Its width bounds the locked part of the classical correlation.
    """
    chain = seeded_chain(rho, cut, cfg_a, cfg_b)
    return Sandwich(chain["symmetric"].value, chain["holevo_A"].value)


# --------------------------------------------------------------------------
# tripartite quantities


def _tripartite_map(state, party_map):
    if party_map is None:
        if state.labels is None:
            if len(state.dims) != 3:
                raise ArgumentError("unlabelled tripartite input must have three subsystems")
            party_map = {"A": (0,), "B": (1,), "C": (2,)}
        else:
            party_map = parties_from_labels(state.spec)
    pm = {k: tuple(sorted(int(i) for i in v)) for k, v in party_map.items()}
    if set(pm) != {"A", "B", "C"}:
        raise ArgumentError(f"tripartite party map needs parties A, B, C; got {sorted(pm)}")
    flat = sorted(i for v in pm.values() for i in v)
    if flat != list(range(len(state.dims))):
        raise ArgumentError("party map must partition the subsystems")
    return pm


def _party_dim(state, idx) -> int:
    return int(np.prod([state.dims[i] for i in idx]))


def koashi_winter_terms(psi, party_map=None, cfg: OptConfig | None = None) -> dict:
    """E^F(rho_AB), C^h(rho_AC) measured on C, S(rho_A) and the residual of their balance."""
    if not isinstance(psi, PureState):
        raise ArgumentError("the balance holds for tripartite pure states")
    pm = _tripartite_map(psi, party_map)
    if _party_dim(psi, pm["A"]) != 2 or _party_dim(psi, pm["B"]) != 2:
        raise ArgumentError("parties A and B must be qubits")
    if _party_dim(psi, pm["C"]) > 4:
        raise ArgumentError("party C may have dimension at most 4")
    rho_ab, mab = party_state(psi, pm, ["A", "B"])
    rho_ac, mac = party_state(psi, pm, ["A", "C"])
    ef = eof_two_qubit(group(rho_ab, [mab["A"], mab["B"]], labels=["A", "B"]))
    ch = holevo_correlation(rho_ac, CutSpec(mac, "C"), cfg)
    s_a = von_neumann_entropy(partial_trace(rho_ab, mab["A"]))
    return {"eof": ef.value, "holevo": ch.value, "s_a": s_a,
            "residual": ef.value + ch.value - s_a, "holevo_report": ch}


def koashi_winter_residual(psi, party_map=None, cfg: OptConfig | None = None) -> float:
    return float(koashi_winter_terms(psi, party_map, cfg)["residual"])


def regularization_probe_n2(rho, cut: CutSpec | None = None, cfg: OptConfig | None = None,
                            single: MeasureReport | None = None) -> MeasureReport:
    """Half the Holevo correlation of two copies, a lower bound on the regularized value.

    The two-copy run is warm-started from the square of the single-copy
    certificate, so it never falls below the single-copy value.
    """
    rho = _as_density(rho)
    rho2, names, pm = _bipartite(rho, cut)
    if rho2.dim ** 2 > PROBE_CAP:
        raise CapacityError(f"two copies have dimension {rho2.dim ** 2} > {PROBE_CAP}")
    side = _measured_letter(cut, names)
    cfg = cfg or OptConfig()
    if single is None:
        single = holevo_correlation(rho, cut, cfg)
    doubled = group(tensor(rho2, rho2), [[0, 2], [1, 3]], labels=names)
    seed = tensor_povm(single.certificate, single.certificate)
    opt = maximize_single(doubled, side, "holevo", with_seeds(cfg, [seed]))
    diag = opt.summary()
    diag.update({"single": single.value, "two_copy": opt.value})
    return MeasureReport("holevo-n2", opt.value / 2, "lower", opt.certificate, diag)


def lemma2_additive_value(rho, sigma, cut: CutSpec | None = None, cfg: OptConfig | None = None,
                          sigma_cut: CutSpec | None = None) -> MeasureReport:
    """Holevo correlation of rho (x) sigma as the sum of the two single values.

    Additivity holds because ``sigma`` is separable; only states flagged
    separable at construction are accepted.
    """
    sigma = _as_density(sigma)
    if not sigma.separable:
        raise ArgumentError("sigma must be flagged separable")
    if sigma_cut is None:
        sigma_cut = CutSpec(None, None if cut is None else cut.measured_side)
    r = holevo_correlation(rho, cut, cfg)
    s = holevo_correlation(sigma, sigma_cut, cfg)
    cert = tensor_povm(r.certificate, s.certificate)
    both_exact = r.bound_direction == s.bound_direction == "exact"
    diag = {"addends": [r.value, s.value], "directions": [r.bound_direction, s.bound_direction]}
    if both_exact:
        diag["method"] = "factorized"
    return MeasureReport("holevo-lemma2", r.value + s.value, "exact" if both_exact else "lower",
                         cert, diag)


def irreversibility_bound(psi, party_map=None, cfg: OptConfig | None = None,
                          measured: str = "C", probe: bool = True) -> MeasureReport:
    """Upper bound S^m(rho_AC) - Cbar^h(rho_AC) on the entanglement irreversibility of rho_AB.

    Cbar^h is estimated from below by the best of the single-copy value, the
    factorized value and half the two-copy value (when two copies fit), so
    the reported number is an upper bound. The discord form
    S(A:C) - Cbar^h is returned in the diagnostics.
    """
    pm = _tripartite_map(psi, party_map)
    rho_ac, mac = party_state(psi, pm, ["A", "C"])
    cut = CutSpec(mac, measured)
    sm = s_min(rho_ac, cut).value
    mi = mutual_information(rho_ac, cut).value
    single = holevo_correlation(rho_ac, cut, cfg)
    sources = {"single": single.value}
    cert = single.certificate
    if "factorized_value" in single.diagnostics:
        sources["factorized"] = single.diagnostics["factorized_value"]
    if probe and rho_ac.dim ** 2 <= PROBE_CAP:
        pr = regularization_probe_n2(rho_ac, cut, cfg, single=single)
        sources["probe_n2"] = pr.value
    cbar = max(sources.values())
    diag = {
        "s_min": sm,
        "mutual_information": mi,
        "cbar_est": cbar,
        "cbar_sources": sources,
        "cbar_exact": bool(single.diagnostics.get("regularized_exact", False)),
        "discord_form": mi - cbar,
        "measured": measured,
    }
    return MeasureReport("irreversibility", sm - cbar, "upper", cert, diag)
