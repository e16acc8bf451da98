import json

import numpy as np
import pytest

from qcorr.errors import ArgumentError, InvalidStateError
from qcorr.io import (
    load_povm,
    load_state,
    povm_from_dict,
    save_povm,
    save_state,
    state_from_dict,
    state_to_dict,
)
from qcorr.measurement import computational_povm
from qcorr.povm_opt import parameterize_rank1
from qcorr.qstate import PureState
from qcorr.states import make_ghz_epr_psi, random_density, random_separable


def test_density_roundtrip_is_bit_exact(tmp_path):
    rho = random_density((2, 3), seed=12)
    back = load_state(save_state(rho, tmp_path / "s.json"))
    assert back.dims == (2, 3)
    assert np.array_equal(back.matrix, rho.matrix)


def test_pure_roundtrip_keeps_labels(tmp_path):
    psi = make_ghz_epr_psi()
    back = load_state(save_state(psi, tmp_path / "p.json"))
    assert isinstance(back, PureState)
    assert back.labels == psi.labels
    assert np.array_equal(back.vector, psi.vector)


def test_separable_flag_roundtrip():
    rho = random_separable(2, 2, 3, seed=1)
    assert state_from_dict(state_to_dict(rho)).separable


def test_extra_fields_written(tmp_path):
    path = save_state(random_density(2, seed=0), tmp_path / "x.json", {"parties": {"A": [0]}})
    assert json.loads(path.read_text())["parties"] == {"A": [0]}


def test_missing_fields_rejected():
    with pytest.raises(ArgumentError):
        state_from_dict({"matrix": [[[1, 0]]]})
    with pytest.raises(ArgumentError):
        state_from_dict({"dims": [1]})
    with pytest.raises(ArgumentError):
        state_from_dict({"dims": [2], "matrix": [[1, 0], [0, 0]]})


def test_invalid_matrix_rejected():
    d = {"dims": [2], "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}
    with pytest.raises(InvalidStateError):
        state_from_dict(d)


def test_povm_roundtrip(tmp_path):
    rng = np.random.default_rng(2)
    povm = parameterize_rank1(rng.normal(size=16), 2, 4)
    back = load_povm(save_povm(povm, tmp_path / "c.json"))
    assert np.array_equal(back.effects, povm.effects)


def test_povm_dim_mismatch():
    from qcorr.io import povm_to_dict

    d = povm_to_dict(computational_povm(2))
    d["dim"] = 3
    with pytest.raises(ArgumentError):
        povm_from_dict(d)
    with pytest.raises(ArgumentError):
        povm_from_dict({"dim": 2})


def test_state_file_validates_against_schema(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    from importlib.resources import files

    schema = json.loads(files("qcorr").joinpath("schemas/state.schema.json").read_text())
    for st in (random_density((2, 2), seed=3), make_ghz_epr_psi()):
        jsonschema.validate(json.loads(save_state(st, tmp_path / "s.json").read_text()), schema)
    schema = json.loads(files("qcorr").joinpath("schemas/povm.schema.json").read_text())
    jsonschema.validate(json.loads(save_povm(computational_povm(3), tmp_path / "p.json").read_text()),
                        schema)
