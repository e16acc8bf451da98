import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcorr.errors import ArgumentError, CapacityError
from qcorr.measurement import computational_povm
from qcorr.measures import (
    CutSpec,
    MeasureReport,
    Sandwich,
    cl_sandwich,
    coherent_information,
    concurrence_two_qubit,
    discord,
    eof_two_qubit,
    holevo_correlation,
    irreversibility_bound,
    koashi_winter_residual,
    koashi_winter_terms,
    lemma2_additive_value,
    mutual_information,
    party_state,
    regularization_probe_n2,
    s_min,
    seeded_chain,
    symmetric_correlation,
    symmetric_discord,
    tensor_factors,
)
from qcorr.povm_opt import OptConfig, evaluate_certificate
from qcorr.qstate import DensityMatrix, PureState, group, tensor
from qcorr.states import (
    make_cc_state,
    make_epr,
    make_ghz,
    make_ghz_epr_phi,
    make_ghz_epr_psi,
    make_trine,
    maximally_mixed,
    parties_from_labels,
    random_cq,
    random_density,
    random_pure,
    random_separable,
)
from qcorr.tolerances import TAU_CHAIN, TAU_KW, TAU_NUM

from oracle_values import BELL_DIAG_CONCURRENCE, BELL_DIAG_EOF, TRINE_ANTI_TRINE, TRINE_PROJECTIVE_GRID

seeds = st.integers(min_value=0, max_value=2**31 - 1)
A, B = CutSpec(None, "A"), CutSpec(None, "B")


def product_state():
    return tensor(random_density(2, seed=1), random_density(3, seed=2))


def psi_ac():
    psi = make_ghz_epr_psi()
    return party_state(psi, parties_from_labels(psi.spec), ["A", "C"])


def phi_ac():
    phi = make_ghz_epr_phi()
    return party_state(phi, parties_from_labels(phi.spec), ["A", "C"])


# cuts and reports


def test_cutspec_default_and_partition():
    rho = random_density((2, 3), seed=0)
    assert CutSpec().resolve(rho) == {"A": (0,), "B": (1,)}
    with pytest.raises(ArgumentError):
        CutSpec({"A": [0], "B": [0]}).resolve(rho)
    psi = make_ghz_epr_psi()
    assert set(CutSpec().resolve(psi)) == {"A", "B", "C"}


def test_report_rejects_bad_direction():
    with pytest.raises(ArgumentError):
        MeasureReport("x", 0.0, "sideways")


def test_report_json_has_diagnostics():
    d = mutual_information(make_epr()).to_dict("cert.json")
    assert d["value"] == 2.0 and d["bound_direction"] == "exact"
    assert d["certificate_file"] == "cert.json"
    assert set(d["diagnostics"]) >= {"restarts", "converged", "iters"}


# closed-form measures


def test_mutual_information_examples():
    assert abs(mutual_information(product_state()).value) < TAU_NUM
    assert abs(mutual_information(make_epr()).value - 2) < 1e-12
    rho, pm = psi_ac()
    assert abs(mutual_information(rho, CutSpec(pm)).value - 3) < 1e-9


def test_s_min_examples():
    rho, pm = psi_ac()
    assert abs(s_min(rho, CutSpec(pm)).value - 2) < 1e-9
    rho, pm = phi_ac()
    assert abs(s_min(rho, CutSpec(pm)).value - 3) < 1e-9


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_s_min_pure_and_separable(seed, dims):
    psi = random_pure(dims, seed=seed)
    from qcorr.qstate import von_neumann_entropy

    sa = von_neumann_entropy(psi.reduced([0]))
    assert abs(s_min(psi).value - sa) < 1e-9
    sep = random_separable(dims[0], dims[1], 3, seed)
    assert abs(s_min(sep).value - mutual_information(sep).value) < 1e-9


def test_coherent_information_examples():
    assert abs(coherent_information(make_epr()).value - 1) < 1e-12
    assert coherent_information(maximally_mixed((2, 2))).value == 0.0
    psi = make_ghz_epr_psi()
    rho_ab, pm = party_state(psi, parties_from_labels(psi.spec), ["A", "B"])
    assert abs(coherent_information(rho_ab, CutSpec(pm)).value - 1) < 1e-9


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_coherent_information_nonnegative(seed):
    assert coherent_information(random_density((2, 3), seed=seed)).value >= 0


def test_eof_examples():
    assert abs(eof_two_qubit(make_epr()).value - 1) < 1e-12
    phi_p = np.array([1, 0, 0, 1]) / np.sqrt(2)
    psi_p = np.array([0, 1, 1, 0]) / np.sqrt(2)
    rho = DensityMatrix(0.9 * np.outer(phi_p, phi_p) + 0.1 * np.outer(psi_p, psi_p), (2, 2))
    assert abs(concurrence_two_qubit(rho) - BELL_DIAG_CONCURRENCE) < 1e-10
    assert abs(eof_two_qubit(rho).value - BELL_DIAG_EOF) < 1e-10
    with pytest.raises(ArgumentError):
        eof_two_qubit(random_density((2, 3), seed=1))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_eof_separable_zero(seed):
    v = eof_two_qubit(random_separable(2, 2, 4, seed)).value
    assert 0 <= v < 1e-10


# factorization


def test_tensor_factors_of_product_structure():
    rho = tensor(make_epr().density(), random_density(2, seed=3))
    assert tensor_factors(rho) == [(0, 1), (2,)]
    assert tensor_factors(random_density((2, 2), seed=1)) == [(0, 1)]


# Holevo correlation


def test_holevo_seven_qubit_measured_c_exact():
    rho, pm = psi_ac()
    rep = holevo_correlation(rho, CutSpec(pm, "C"), OptConfig(restarts=4, seed=1))
    assert 2 - 1e-4 <= rep.value <= 2 + 1e-9
    assert rep.diagnostics["route"] == "factorized"
    rho2 = group(rho, [pm["A"], pm["C"]])
    assert abs(evaluate_certificate(rho2, "B", rep.certificate) - 2) < 1e-9


@pytest.mark.parametrize("cut", [A, B])
def test_holevo_epr_either_side(cut, fast_cfg):
    rep = holevo_correlation(make_epr(), cut, fast_cfg)
    assert abs(rep.value - 1) < 1e-9
    assert rep.bound_direction == "exact"


def test_holevo_trine_b_equals_symmetric(fast_cfg):
    chain = seeded_chain(make_trine(), None, fast_cfg)
    c, hb = chain["symmetric"].value, chain["holevo_B"].value
    assert abs(c - TRINE_ANTI_TRINE) < 1e-4
    assert abs(c - hb) <= TAU_KW
    assert hb > TRINE_PROJECTIVE_GRID + 0.01


@settings(max_examples=10, deadline=None)
@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 2)]))
def test_holevo_never_exceeds_s_min(seed, dims):
    rho = random_density(dims, seed=seed)
    rep = holevo_correlation(rho, A, OptConfig(restarts=2, seed=1))
    assert rep.value <= s_min(rho).value + TAU_NUM
    assert rep.certificate is not None
    assert rep.bound_direction in ("lower", "exact")


def test_holevo_seed_is_respected():
    rho = make_trine()
    rep = holevo_correlation(rho, A, OptConfig(restarts=0, structured_starts=False, max_iters=1),
                             seeds=[computational_povm(3)])
    assert abs(rep.value - 1) < 1e-9


# symmetric correlation, discords, sandwich


def test_symmetric_examples(fast_cfg):
    assert abs(symmetric_correlation(make_cc_state(), None, fast_cfg).value - 1) < 1e-6
    assert abs(symmetric_correlation(product_state(), None, fast_cfg).value) < 1e-9
    proj = symmetric_correlation(make_trine(), None, OptConfig(mode="projective", restarts=6, seed=3))
    povm = symmetric_correlation(make_trine(), None, fast_cfg)
    assert povm.value > proj.value + 0.01
    assert proj.value <= TRINE_PROJECTIVE_GRID + 1e-6


def test_discord_examples(fast_cfg):
    cq = random_cq(3, 2, seed=4)
    assert abs(discord(cq, A, fast_cfg).value) < 1e-4
    rep = discord(make_epr(), A, fast_cfg)
    assert abs(rep.value - 1) < 1e-6
    assert abs(discord(product_state(), A, fast_cfg).value) < 1e-6


def test_discord_direction_upper_for_generic_state():
    rep = discord(random_density((2, 2), seed=8), A, OptConfig(restarts=2, seed=0))
    assert rep.bound_direction == "upper"
    assert rep.value >= -TAU_KW


def test_symmetric_discord_examples(fast_cfg):
    assert abs(symmetric_discord(make_cc_state(), None, fast_cfg).value) < 1e-4
    assert abs(symmetric_discord(make_epr(), None, fast_cfg).value - 1) < 1e-6
    qs = symmetric_discord(make_trine(), None, fast_cfg).value
    qd = discord(make_trine(), B, fast_cfg).value
    assert abs(qs - qd) < 1e-4


@settings(max_examples=6, deadline=None)
@given(seeds, st.sampled_from([(2, 2), (2, 3)]))
def test_seeded_chain_ordering(seed, dims):
    rho = random_density(dims, seed=seed)
    ch = seeded_chain(rho, None, OptConfig(restarts=3, seed=2))
    c, ha, hb, sm = (ch[k].value for k in ("symmetric", "holevo_A", "holevo_B", "s_min"))
    assert c <= ha + TAU_CHAIN and c <= hb + TAU_CHAIN
    assert max(ha, hb) <= sm + TAU_NUM
    mi = ch["mutual_information"].value
    # discord on either side never exceeds the symmetric discord
    assert mi - ha <= mi - c + TAU_CHAIN and mi - hb <= mi - c + TAU_CHAIN


def test_cl_sandwich_examples(fast_cfg):
    s = cl_sandwich(make_cc_state(), None, fast_cfg)
    assert isinstance(s, Sandwich)
    assert abs(s.lower - 1) < 1e-6 and abs(s.upper - 1) < 1e-6 and abs(s.locked_width) < 1e-6
    s = cl_sandwich(product_state(), None, fast_cfg)
    assert abs(s.lower) < 1e-9 and abs(s.upper) < 1e-9
    s = cl_sandwich(make_trine(), None, fast_cfg)
    assert abs(s.upper - 1) < 1e-9
    assert s.locked_width > 0.4


# tripartite


def test_koashi_winter_examples(fast_cfg):
    epr_0 = PureState(np.kron(make_epr().vector, [1, 0]), (2, 2, 2))
    t = koashi_winter_terms(epr_0, None, fast_cfg)
    assert abs(t["eof"] - 1) < 1e-12 and abs(t["holevo"]) < 1e-9 and abs(t["residual"]) < 1e-9
    t = koashi_winter_terms(make_ghz(3), None, fast_cfg)
    assert abs(t["eof"]) < 1e-12 and abs(t["holevo"] - 1) < 1e-9
    assert abs(koashi_winter_residual(make_ghz(3), None, fast_cfg)) < 1e-9


def test_koashi_winter_random(fast_cfg):
    for seed in range(5):
        r = koashi_winter_residual(random_pure((2, 2, 2), seed=seed), None, fast_cfg)
        assert -TAU_KW <= r <= 1e-8


def test_koashi_winter_dimension_checks():
    with pytest.raises(ArgumentError):
        koashi_winter_residual(random_pure((3, 2, 2), seed=1))
    with pytest.raises(ArgumentError):
        koashi_winter_residual(random_pure((2, 2, 5), seed=1))
    with pytest.raises(ArgumentError):
        koashi_winter_residual(random_density((2, 2, 2), seed=1))


def test_probe_examples(fast_cfg):
    sigma = random_separable(2, 2, 3, seed=5)
    single = holevo_correlation(sigma, A, fast_cfg)
    pr = regularization_probe_n2(sigma, A, fast_cfg, single=single)
    assert pr.bound_direction == "lower"
    assert abs(pr.value - single.value) < 1e-3
    pure = random_pure((2, 2), seed=6)
    from qcorr.qstate import von_neumann_entropy

    assert abs(regularization_probe_n2(pure, A, fast_cfg).value
               - von_neumann_entropy(pure.reduced([0]))) < 1e-3
    tr_single = holevo_correlation(make_trine(), B, fast_cfg)
    assert regularization_probe_n2(make_trine(), B, fast_cfg, single=tr_single).value \
        >= tr_single.value - 1e-6


def test_probe_capacity():
    with pytest.raises(CapacityError):
        regularization_probe_n2(random_density((3, 3), seed=1), A)


def test_lemma2_examples(fast_cfg):
    cc = make_cc_state()
    cc_flagged = DensityMatrix(cc.matrix, (2, 2), separable=True)
    assert abs(lemma2_additive_value(cc, cc_flagged, A, fast_cfg).value - 2) < 1e-9
    prod = DensityMatrix(np.kron(np.diag([1.0, 0]), np.eye(2) / 2), (2, 2), separable=True)
    rep = lemma2_additive_value(make_epr(), prod, A, fast_cfg)
    assert abs(rep.value - 1) < 1e-9
    assert len(rep.diagnostics["addends"]) == 2
    with pytest.raises(ArgumentError):
        lemma2_additive_value(cc, random_density((2, 2), seed=1), A, fast_cfg)


def test_factorized_nine_qubit_marginal(fast_cfg):
    rho, pm = phi_ac()
    rep = holevo_correlation(rho, CutSpec(pm, "C"), fast_cfg)
    assert abs(rep.value - 2) < 1e-9
    assert rep.diagnostics["regularized_exact"]


def test_irreversibility_examples(fast_cfg):
    rep = irreversibility_bound(make_ghz_epr_psi(), cfg=fast_cfg)
    assert rep.bound_direction == "upper"
    assert abs(rep.value) < 1e-3
    assert abs(rep.diagnostics["discord_form"] - 1) < 1e-3
    rep = irreversibility_bound(make_ghz_epr_phi(), cfg=fast_cfg)
    assert abs(rep.value - 1) < 1e-3
    assert rep.diagnostics["cbar_exact"]
