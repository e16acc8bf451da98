"""Named example states and their expected values with provenance tags.

Tags: ``PAPER`` (value stated in the source literature), ``DERIVED``
(computed here by an independent closed form or oracle), ``TRIVIAL``.
"""

from __future__ import annotations

import numpy as np

from .errors import ArgumentError
from .qstate import von_neumann_entropy
from .states import (
    make_cc_state,
    make_epr,
    make_ghz,
    make_ghz_epr_phi,
    make_ghz_epr_psi,
    make_one_way_mcs,
    make_trine,
    parties_from_labels,
)

__all__ = ["EXAMPLES", "build_example", "TRINE_GRID_VALUE", "TRINE_POVM_VALUE"]

# projective optimum from a 1-degree grid over B axes (A read out in its basis)
TRINE_GRID_VALUE = 0.459147917027245
# anti-trine POVM on B: log2(3) - 1
TRINE_POVM_VALUE = float(np.log2(3) - 1)

_GRID_RECIPE = ("exhaustive 1-degree grid over the B-side projective axis on the Bloch sphere, "
                "A read out in its computational basis")


def _entry(quantity, value, provenance, cut=None, measured=None, tolerance=None, note=None):
    e = {"quantity": quantity, "value": float(value), "provenance": provenance}
    if cut is not None:
        e["cut"] = cut
    if measured is not None:
        e["measured"] = measured
    if tolerance is not None:
        e["tolerance"] = float(tolerance)
    if note is not None:
        e["note"] = note
    return e


def _epr():
    st = make_epr()
    return st, None, [
        _entry("mutual_information", 2.0, "TRIVIAL", "A|B"),
        _entry("s_min", 1.0, "TRIVIAL", "A|B"),
        _entry("holevo", 1.0, "PAPER", "A|B", "A", 1e-3),
        _entry("discord", 1.0, "TRIVIAL", "A|B", "A", 1e-3),
        _entry("symmetric_discord", 1.0, "TRIVIAL", "A|B", None, 1e-3),
        _entry("eof", 1.0, "TRIVIAL", "A|B"),
    ]


def _cc():
    st = make_cc_state()
    return st, None, [
        _entry("mutual_information", 1.0, "TRIVIAL", "A|B"),
        _entry("symmetric_correlation", 1.0, "TRIVIAL", "A|B", None, 1e-4),
        _entry("symmetric_discord", 0.0, "TRIVIAL", "A|B", None, 1e-4),
        _entry("discord", 0.0, "TRIVIAL", "A|B", "A", 1e-4),
    ]


def _ghz():
    st = make_ghz(3)
    return st, {"A": [0], "B": [1], "C": [2]}, [
        _entry("eof", 0.0, "DERIVED", "A|B", note="rho_AB is classically correlated"),
        _entry("holevo", 1.0, "DERIVED", "A|C", "C", 1e-3,
               note="computational-basis readout of C attains S(rho_A)"),
        _entry("koashi_winter_residual", 0.0, "DERIVED", None, None, 1e-3),
    ]


def _trine():
    st = make_trine()
    return st, None, [
        _entry("mutual_information", 1.0, "TRIVIAL", "A|B"),
        _entry("holevo", 1.0, "DERIVED", "A|B", "A", 1e-9, note="A is a classical register"),
        _entry("symmetric_correlation_projective", TRINE_GRID_VALUE, "DERIVED", "A|B", None, 1e-6,
               note=_GRID_RECIPE),
        _entry("symmetric_correlation", TRINE_POVM_VALUE, "DERIVED", "A|B", None, 1e-3,
               note="three-outcome anti-trine POVM on B; lower bound for the POVM optimum"),
        _entry("holevo", TRINE_POVM_VALUE, "DERIVED", "A|B", "B", 1e-3,
               note="equal to the symmetric correlation for classical-quantum states"),
    ]


def _psi():
    st = make_ghz_epr_psi()
    return st, parties_from_labels(st.spec), [
        _entry("s_min", 2.0, "PAPER", "A|C", tolerance=1e-9),
        _entry("mutual_information", 3.0, "PAPER", "A|C"),
        _entry("holevo", 2.0, "PAPER", "A|C", "C", 1e-3),
        _entry("holevo_regularized", 2.0, "PAPER", "A|C", "C"),
        _entry("entanglement_cost", 1.0, "PAPER", "A|B"),
        _entry("distillable_entanglement", 1.0, "PAPER", "A|B"),
        _entry("irreversibility_bound", 0.0, "PAPER", "A|B", "C", 1e-3),
        _entry("regularized_discord", 1.0, "PAPER", "A|C", "C", 1e-3),
        _entry("coherent_information", 1.0, "DERIVED", "A|B",
               note="cost minus the irreversibility identity with the listed values"),
    ]


def _phi():
    st = make_ghz_epr_phi()
    return st, parties_from_labels(st.spec), [
        _entry("s_min", 3.0, "PAPER", "A|C", tolerance=1e-9),
        _entry("holevo_regularized", 2.0, "PAPER", "A|C", "C"),
        _entry("entanglement_cost", 1.0, "PAPER", "A|B"),
        _entry("distillable_entanglement", 1.0, "PAPER", "A|B"),
        _entry("irreversibility_bound", 1.0, "PAPER", "A|B", "C", 1e-3,
               note="strictly above the true gap of 0"),
    ]


def _owmcs():
    p = np.array([0.5, 0.5])
    a = [np.array([1.0, 0.0]), np.array([1.0, 1.0]) / np.sqrt(2)]
    b = a
    st = make_one_way_mcs(p, a, b_states=b)
    rho_a = sum(pi * np.outer(x, x.conj()) for pi, x in zip(p, a))
    rho_b = sum(pi * np.outer(x, x.conj()) for pi, x in zip(p, b))
    sa = von_neumann_entropy(rho_a)
    sac = von_neumann_entropy(rho_b)  # rho_AC and rho_B share a purification
    return st, None, [
        _entry("entropy_A", sa, "DERIVED", note="spectrum of sum_i p_i |a_i><a_i|"),
        _entry("entropy_C", 1.0, "DERIVED", note="C carries the label i"),
        _entry("entropy_AC", sac, "DERIVED", note="equals S(sum_i p_i |b_i><b_i|)"),
        _entry("mutual_information", sa + 1.0 - sac, "DERIVED", "A|C"),
    ]


EXAMPLES = {
    "trine": _trine,
    "ghz-epr-psi": _psi,
    "ghz-epr-phi": _phi,
    "owmcs": _owmcs,
    "cc": _cc,
    "epr": _epr,
    "ghz": _ghz,
}


def build_example(name: str):
    """``(state, party_map or None, expected entries)`` for a catalogue name."""
    if name not in EXAMPLES:
        raise ArgumentError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    return EXAMPLES[name]()
