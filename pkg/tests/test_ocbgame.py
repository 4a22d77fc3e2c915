import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from pmtool.channels import KrausFamily, cj_of_kraus, is_cptp
from pmtool.linalg import (
    DimensionPair,
    basis_state,
    kron,
    min_eigenvalue,
    pauli_eigenvector,
    projector,
)
from pmtool.ocbgame import (
    CausalStrategy,
    ETA_STATES,
    P_GAME_QUANTUM,
    alice_cj,
    bob_cj,
    build_w_ocb,
    causal_bound_bruteforce,
    causal_bound_details,
    evaluate_game,
    evaluate_strategy,
    outcome_probability,
)
from pmtool.process import PartySpec, ProcessMatrix, validate

KET0 = basis_state(0)


def test_w_ocb_trace_and_spectrum():
    w = build_w_ocb()
    assert np.trace(w.matrix).real == pytest.approx(4.0, abs=1e-14)
    # the two non-identity Pauli words anticommute, so eigenvalues are {1/2, 0}
    eigs = np.linalg.eigvalsh(w.matrix)
    assert min_eigenvalue(w.matrix) == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(sorted(eigs), [0.0] * 8 + [0.5] * 8, atol=1e-12)


def test_w_ocb_is_valid():
    assert validate(build_w_ocb(), tol=1e-10).ok


def test_alice_cj():
    p0, p1 = projector(basis_state(0)), projector(basis_state(1))
    assert np.allclose(alice_cj(0, 0).matrix, kron(p0, p0))
    assert np.allclose(alice_cj(0, 1).matrix, kron(p1, p0))
    for a in (0, 1):
        total = sum(alice_cj(a, x).matrix for x in (0, 1))
        reduced = total.reshape(2, 2, 2, 2)
        # summed over outcomes the map is CPTP: Tr_out CJ = I
        assert np.allclose(np.einsum("iaja->ij", reduced), np.eye(2), atol=1e-14)


def test_bob_cj():
    p0, p1 = projector(basis_state(0)), projector(basis_state(1))
    plus = projector(pauli_eigenvector("x", 0))
    assert np.allclose(bob_cj(0, 1, 0, KET0).matrix, kron(p0, p0))
    assert np.allclose(bob_cj(1, 0, 0, KET0).matrix, kron(plus, p1))
    for b, bp in itertools.product((0, 1), repeat=2):
        total = sum(bob_cj(b, bp, y, KET0).matrix for y in (0, 1))
        reduced = total.reshape(2, 2, 2, 2)
        assert np.allclose(np.einsum("iaja->ij", reduced), np.eye(2), atol=1e-14)


def test_bob_cj_rejects_non_unit_eta():
    with pytest.raises(ValueError):
        bob_cj(0, 1, 0, np.array([1.0, 1.0]))


def test_outcomes_normalize_per_setting():
    w = build_w_ocb()
    for a, b, bp in itertools.product((0, 1), repeat=3):
        total = sum(
            outcome_probability(w, a, b, bp, x, y, KET0)
            for x in (0, 1)
            for y in (0, 1)
        )
        assert total == pytest.approx(1.0, abs=1e-10)


def test_game_value_matches_quantum_score():
    start = time.perf_counter()
    result = evaluate_game(build_w_ocb(), KET0)
    assert time.perf_counter() - start < 1.0
    assert result.p_ocb == pytest.approx((2 + np.sqrt(2)) / 4, abs=1e-12)
    assert result.p_ocb == pytest.approx(P_GAME_QUANTUM, abs=1e-12)
    assert result.p_ocb == pytest.approx((result.p_guess_a + result.p_guess_b) / 2)
    assert 0 <= result.p_guess_a <= 1 + 1e-9
    assert 0 <= result.p_guess_b <= 1 + 1e-9


def test_game_value_identity_w():
    spec = PartySpec((DimensionPair(2, 2), DimensionPair(2, 2)))
    w = ProcessMatrix(spec, np.eye(16, dtype=complex) / 4)
    result = evaluate_game(w, KET0)
    assert result.p_guess_b == pytest.approx(0.5, abs=1e-12)
    assert result.p_guess_a == pytest.approx(0.5, abs=1e-12)
    assert result.p_ocb == pytest.approx(0.5, abs=1e-12)


def test_game_value_is_eta_independent():
    w = build_w_ocb()
    reference = evaluate_game(w, ETA_STATES["0"]).p_ocb
    for name in ("1", "plus", "iplus"):
        assert evaluate_game(w, ETA_STATES[name]).p_ocb == pytest.approx(
            reference, abs=1e-12
        )


def test_strategy_cjs_are_cptp():
    # Alice's outcome-summed map for each a is the CPTP measure-and-prepare
    # channel with Kraus operators |a><x|.
    dims = DimensionPair(2, 2)
    for a in (0, 1):
        branch_kraus = tuple(
            np.outer(basis_state(a), basis_state(x).conj()) for x in (0, 1)
        )
        family = KrausFamily(dims, branch_kraus)
        assert is_cptp(family, tol=1e-14)
        assert np.allclose(
            cj_of_kraus(family).matrix,
            sum(alice_cj(a, x).matrix for x in (0, 1)),
            atol=1e-14,
        )


def test_evaluate_strategy_exact_example():
    # x constant, message carries a, Bob echoes the message when b'=1
    strategy = CausalStrategy(
        order="A_before_B",
        first_output=(0, 0),
        message=(0, 1),
        second_output={
            (b, bp, m): (m if bp == 1 else 0)
            for b in (0, 1)
            for bp in (0, 1)
            for m in (0, 1)
        },
    )
    assert evaluate_strategy(strategy) == Fraction(3, 4)


def test_causal_bound_is_three_quarters_exactly():
    start = time.perf_counter()
    details = causal_bound_details()
    assert time.perf_counter() - start < 1.0
    assert details.bound == Fraction(3, 4)
    assert details.a_before_b == Fraction(3, 4)
    assert details.b_before_a == Fraction(3, 4)
    assert details.b_before_a_two_bit == Fraction(3, 4)
    assert causal_bound_bruteforce() == 0.75
    assert evaluate_strategy(details.best_strategy) == Fraction(3, 4)
    assert details.best_strategy.order == "A_before_B"


def test_no_communication_bound():
    # With a trivial message alphabet neither output can correlate with the
    # other laboratory's input, so the enumerated maximum is 1/2.
    assert causal_bound_details().no_communication == Fraction(1, 2)


def test_quantum_score_violates_causal_bound():
    assert evaluate_game(build_w_ocb()).p_ocb > causal_bound_bruteforce()
