import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcorr.errors import ArgumentError, CapacityError, InvalidStateError
from qcorr.qstate import (
    DensityMatrix,
    DimSpec,
    EnsembleOfStates,
    PureState,
    group,
    is_ppt,
    partial_trace,
    permute,
    purify,
    tensor,
    von_neumann_entropy,
)
from qcorr.states import (
    make_cc_state,
    make_cq_state,
    make_epr,
    make_ghz_epr_phi,
    make_ghz_epr_psi,
    make_one_way_mcs,
    make_trine,
    maximally_mixed,
    parties_from_labels,
    random_cq,
    random_density,
    random_pure,
    random_separable,
    trine_vectors,
)
from qcorr.tolerances import TAU_NUM, TAU_RECON

from oracle_values import H_THREE_QUARTERS

seeds = st.integers(min_value=0, max_value=2**31 - 1)


def projector(v, dims=None):
    v = np.asarray(v, dtype=complex)
    return DensityMatrix(np.outer(v, v.conj()), dims)


def assert_valid(rho):
    m = rho.matrix
    assert np.allclose(m, m.conj().T, atol=1e-10)
    assert np.linalg.eigvalsh(m).min() > -1e-9
    assert abs(np.trace(m) - 1) < 1e-10


# construction


def test_dimspec_rejects_bad_dims():
    with pytest.raises(ArgumentError):
        DimSpec((2, 0))
    with pytest.raises(ArgumentError):
        DimSpec((2, 2), ("a",))


def test_density_invariants_enforced():
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.array([[1, 1], [0, 0]]))
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.diag([1.2, -0.2]))
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.eye(2))
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.eye(4) / 4, (2, 3))


def test_density_capacity():
    with pytest.raises(CapacityError):
        DensityMatrix(np.eye(512) / 512)


def test_pure_state_norm_checked():
    with pytest.raises(InvalidStateError):
        PureState([1, 1], (2,))
    assert np.isclose(np.linalg.norm(PureState([1, 1], (2,), normalize=True).vector), 1)


def test_ensemble_validation():
    a, b = maximally_mixed(2), projector([1, 0])
    ens = EnsembleOfStates([0.5, 0.5], [a, b])
    assert np.allclose(ens.average().matrix, [[0.75, 0], [0, 0.25]])
    with pytest.raises(ArgumentError):
        EnsembleOfStates([0.6, 0.6], [a, b])
    with pytest.raises(ArgumentError):
        EnsembleOfStates([1.0], [a, b])


# tensor


def test_tensor_of_mixed_qubits():
    out = tensor(maximally_mixed(2), maximally_mixed(2))
    assert out.dims == (2, 2)
    assert np.allclose(out.matrix, np.eye(4) / 4)


def test_tensor_of_basis_states():
    out = tensor(projector([1, 0]), projector([0, 1]))
    target = np.zeros((4, 4))
    target[1, 1] = 1
    assert np.allclose(out.matrix, target)


def test_tensor_capacity():
    big = maximally_mixed((4, 4, 4))
    with pytest.raises(CapacityError):
        tensor(big, big)


@settings(max_examples=25, deadline=None)
@given(seeds, seeds)
def test_entropy_additive(s1, s2):
    r = random_density((2, 3), seed=s1)
    s = random_density(3, 2, seed=s2)
    assert abs(von_neumann_entropy(tensor(r, s)) - von_neumann_entropy(r)
               - von_neumann_entropy(s)) < TAU_NUM


# partial trace, permute, group


def test_partial_trace_of_product():
    r = random_density(2, seed=1)
    s = random_density(3, seed=2)
    assert np.allclose(partial_trace(tensor(r, s), [0]).matrix, r.matrix)
    assert np.allclose(partial_trace(tensor(r, s), [1]).matrix, s.matrix)


def test_partial_trace_epr():
    rho = make_epr().density()
    for keep in ([0], [1]):
        assert np.allclose(partial_trace(rho, keep).matrix, np.eye(2) / 2)


def test_partial_trace_rejects_empty_and_bad():
    rho = make_epr().density()
    with pytest.raises(ArgumentError):
        partial_trace(rho, [])
    with pytest.raises(ArgumentError):
        partial_trace(rho, [2])


def test_seven_qubit_marginal_structure():
    psi = make_ghz_epr_psi()
    pm = parties_from_labels(psi.spec)
    assert pm == {"A": (0, 1, 2), "B": (3, 4), "C": (5, 6)}
    rho_ab = psi.reduced([0, 1, 2, 3, 4])          # a1 a2 a3 b1 b2
    epr = partial_trace(rho_ab, ["a2", "b2"])
    assert np.allclose(epr.matrix, make_epr().density().matrix)
    rest = partial_trace(rho_ab, ["a1", "a3", "b1"])
    cc_part = permute(rest, [0, 2, 1])             # a1 b1 a3
    expected = np.kron(make_cc_state().matrix, np.eye(2) / 2)
    assert np.allclose(cc_part.matrix, expected)
    # and rho_AB is exactly the product of the two
    prod = tensor(permute(epr, [0, 1]), rest)      # a2 b2 a1 a3 b1
    back = permute(rho_ab, ["a2", "b2", "a1", "a3", "b1"])
    assert np.allclose(prod.matrix, back.matrix)


def test_permute_and_group_consistent():
    rho = random_density((2, 3, 2), seed=4)
    g = group(rho, [[2, 0], [1]])
    assert g.dims == (4, 3)
    p = permute(rho, [2, 0, 1])
    assert np.allclose(g.matrix, p.matrix)
    with pytest.raises(ArgumentError):
        permute(rho, [0, 0, 1])


def test_pure_reduced_matches_density_partial_trace():
    psi = random_pure((2, 3, 2), seed=5)
    assert np.allclose(psi.reduced([0, 2]).matrix, partial_trace(psi.density(), [0, 2]).matrix)


# purification


def test_purify_maximally_mixed():
    p = purify(maximally_mixed(2))
    assert p.dims == (2, 2)
    assert abs(von_neumann_entropy(p.reduced([0])) - 1) < TAU_NUM


def test_purify_pure_has_trivial_ancilla():
    rho = projector([0.6, 0.8j])
    p = purify(rho)
    assert p.dims == (2, 1)
    assert np.allclose(p.reduced([0]).matrix, rho.matrix)


def test_purify_schmidt_coefficients():
    p = purify(DensityMatrix(np.diag([0.75, 0.25])))
    coeffs = np.linalg.svd(p.vector.reshape(2, -1), compute_uv=False)
    assert np.allclose(sorted(coeffs), sorted([np.sqrt(0.25), np.sqrt(0.75)]))


def test_purify_reconstruction_many_states():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        d = int(rng.integers(1, 17))
        rho = random_density(d, int(rng.integers(1, d + 1)), rng)
        p = purify(rho)
        assert np.max(np.abs(p.reduced([0]).matrix - rho.matrix)) < TAU_RECON


# entropy


def test_entropy_values():
    assert abs(von_neumann_entropy(maximally_mixed(2)) - 1) < 1e-12
    assert abs(von_neumann_entropy(projector(np.array([1, 1j]) / np.sqrt(2)))) < 1e-12
    assert abs(von_neumann_entropy(DensityMatrix(np.diag([0.75, 0.25]))) - H_THREE_QUARTERS) < 1e-12


def test_entropy_rejects_negative_spectrum():
    with pytest.raises(InvalidStateError):
        von_neumann_entropy(np.diag([1.1, -0.1]))


def test_entropy_clips_tiny_negatives():
    assert von_neumann_entropy(np.diag([1.0 + 5e-10, -5e-10])) >= 0


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_araki_lieb_and_subadditivity(seed, dims):
    rho = random_density(dims, seed=seed)
    sa = von_neumann_entropy(partial_trace(rho, [0]))
    sb = von_neumann_entropy(partial_trace(rho, [1]))
    sab = von_neumann_entropy(rho)
    assert abs(sa - sb) <= sab + TAU_NUM
    assert sab <= sa + sb + TAU_NUM


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 5))
def test_separable_entropy_ordering(seed, terms):
    rho = random_separable(2, 3, terms, seed)
    assert rho.separable
    sab = von_neumann_entropy(rho)
    assert von_neumann_entropy(partial_trace(rho, [0])) <= sab + TAU_NUM
    assert von_neumann_entropy(partial_trace(rho, [1])) <= sab + TAU_NUM
    assert is_ppt(rho)


# factories


def test_cq_state_examples():
    cc = make_cq_state([0.5, 0.5], [projector([1, 0]), projector([0, 1])])
    assert np.allclose(cc.matrix, make_cc_state().matrix)
    single = make_cq_state([1.0], [projector([0.6, 0.8])])
    assert single.dims == (1, 2)
    with pytest.raises(ArgumentError):
        make_cq_state([0.5, 0.5], [projector([1, 0])])


def test_trine_marginals():
    tr = make_trine()
    assert tr.dims == (3, 2)
    assert np.allclose(partial_trace(tr, [1]).matrix, np.eye(2) / 2)
    assert np.allclose(partial_trace(tr, [0]).matrix, np.eye(3) / 3)
    vs = trine_vectors()
    for a in range(3):
        for b in range(a + 1, 3):
            assert abs(abs(np.vdot(vs[a], vs[b])) ** 2 - 0.25) < 1e-12


def test_ghz_epr_states_shape():
    psi, phi = make_ghz_epr_psi(), make_ghz_epr_phi()
    assert psi.dims == (2,) * 7 and phi.dims == (2,) * 9
    assert phi.labels == ("a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3")
    assert abs(np.linalg.norm(phi.vector) - 1) < 1e-12


def test_one_way_mcs_orthogonal_b_is_diagonal_in_c():
    a = [np.array([1, 0]), np.array([1, 1]) / np.sqrt(2)]
    rho = make_one_way_mcs([0.3, 0.7], a, overlaps=np.eye(2))
    m = rho.matrix.reshape(2, 2, 2, 2)
    assert np.allclose(m[:, 0, :, 1], 0) and np.allclose(m[:, 1, :, 0], 0)


def test_one_way_mcs_single_term_is_product_pure():
    rho = make_one_way_mcs([1.0], [np.array([0.6, 0.8])], overlaps=np.ones((1, 1)))
    assert rho.is_pure()
    assert np.allclose(rho.matrix, np.outer([0.6, 0.8], [0.6, 0.8]))


def test_one_way_mcs_identical_b_gives_pure_entangled():
    p = [0.25, 0.75]
    a = [np.array([1, 0]), np.array([0, 1])]
    rho = make_one_way_mcs(p, a, overlaps=np.ones((2, 2)))
    target = np.zeros(4)
    target[0], target[3] = np.sqrt(p[0]), np.sqrt(p[1])
    assert np.allclose(rho.matrix, np.outer(target, target))


def test_one_way_mcs_rejects_non_psd_overlaps():
    a = [np.array([1, 0]), np.array([0, 1]), np.array([1, 1]) / np.sqrt(2)]
    bad = np.array([[1, 0.9, -0.9], [0.9, 1, 0.9], [-0.9, 0.9, 1]])
    with pytest.raises(ArgumentError):
        make_one_way_mcs([1 / 3] * 3, a, overlaps=bad)


def test_random_density_valid_and_deterministic():
    r1 = random_density((2, 2), 4, seed=7)
    r2 = random_density((2, 2), 4, seed=7)
    assert_valid(r1)
    assert np.array_equal(r1.matrix, r2.matrix)
    assert r1.rank() == 4
    with pytest.raises(ArgumentError):
        random_density(2, 3, seed=1)


def test_random_separable_single_term_is_product():
    rho = random_separable(2, 2, 1, seed=3)
    mi = (von_neumann_entropy(partial_trace(rho, [0])) + von_neumann_entropy(partial_trace(rho, [1]))
          - von_neumann_entropy(rho))
    assert abs(mi) < 1e-9


def test_random_pure_marginal_entropies_match():
    psi = random_pure((2, 2), seed=9)
    assert abs(von_neumann_entropy(psi.reduced([0])) - von_neumann_entropy(psi.reduced([1]))) < 1e-10


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_factory_outputs_valid(seed):
    for rho in (random_density((2, 3), seed=seed), random_separable(3, 2, 3, seed),
                random_cq(3, 2, seed), make_trine(), make_cc_state()):
        assert_valid(rho)
