"""Single-party reduction of process matrices to density operators.

For one laboratory the framework collapses to ordinary quantum theory:
every valid W factors as W_1 (x) I with W_1 a density matrix. Two
independent procedures establish this:

* the constructive route — Pauli-basis constraint sums that force every
  coefficient with output-side Pauli content to zero (single-qubit case and
  its n-qubit parity-subset generalization);
* a projection oracle — partial-trace projection plus a Frobenius residual,
  valid in any dimension.

Both certify the same inputs; ``born_equivalence`` closes the loop by
checking the trace rule against the standard Kraus-form Born rule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channels import KrausFamily, cj_of_kraus
from .linalg import (
    DEFAULT_TOL,
    DimensionMismatchError,
    frobenius_norm,
    is_psd,
    kron,
    min_eigenvalue,
    kron_all,
    pauli,
    pauli_eigenvector,
    pauli_word,
)
from .process import (
    ProcessMatrix,
    normalization_constraints,
    partial_trace_over_outputs,
    probability,
)

MAX_QUBITS = 4
LINALG_TOL = 1e-12


@dataclass(frozen=True)
class ConstraintRecord:
    """One evaluated normalization constraint and the coefficient it pins."""

    description: str
    lhs_value: float
    expected: float
    coefficient_label: str
    coefficient_value: float

    def passes(self, tol: float) -> bool:
        return abs(self.lhs_value - self.expected) <= tol


@dataclass(frozen=True)
class PauliDecomposition:
    """Real coefficients of W over Pauli words sigma (x) ... (x) sigma."""

    n: int
    coefficients: dict

    def reconstruct(self) -> np.ndarray:
        d = 4**self.n
        out = np.zeros((d, d), dtype=complex)
        for word, coeff in self.coefficients.items():
            out += coeff * pauli_word(word)
        return out


@dataclass(frozen=True)
class ReductionReport:
    certified: bool
    w1: Optional[np.ndarray]
    residual: float
    violations: tuple
    w1_psd: bool
    w1_trace: float


def _qubit_count(w: ProcessMatrix) -> int:
    if len(w.spec.parties) != 1:
        raise DimensionMismatchError("reduction operates on single-party W")
    dims = w.spec.parties[0]
    if dims.d_in != dims.d_out:
        raise DimensionMismatchError("qubit reduction needs d_in = d_out")
    n = dims.d_in.bit_length() - 1
    if 2**n != dims.d_in:
        raise DimensionMismatchError(f"dimension {dims.d_in} is not a power of two")
    return n


def pauli_coefficient(matrix: np.ndarray, word) -> float:
    """Single coefficient Tr(W sigma-word) / 4^n (n = half the word length)."""
    n2 = len(word)
    value = complex(np.trace(matrix @ pauli_word(word))) / (2**n2)
    if abs(value.imag) > LINALG_TOL * (2**n2):
        raise ValueError(f"non-real Pauli coefficient {value} for word {word}")
    return value.real


def pauli_decompose(w: ProcessMatrix) -> PauliDecomposition:
    """Full Pauli decomposition of a single-party n-qubit-in/out W."""
    n = _qubit_count(w)
    d = 2**n
    t = w.matrix.reshape(d, d, d, d)
    side_words = {
        word: pauli_word(word) for word in itertools.product("1xyz", repeat=n)
    }
    coefficients = {}
    for win, a in side_words.items():
        for wout, b in side_words.items():
            value = complex(np.einsum("iajb,ji,ba->", t, a, b)) / 4**n
            if abs(value.imag) > LINALG_TOL * d:
                raise ValueError("decomposition of a non-Hermitian matrix")
            coefficients[win + wout] = value.real
    return PauliDecomposition(n, coefficients)


def _projector_expectation(matrix: np.ndarray, vectors) -> float:
    """<v|W|v> for the product vector v = kron of the given qubit vectors."""
    v = kron_all(np.asarray(x).reshape(-1, 1) for x in vectors).reshape(-1)
    return float(np.real(v.conj() @ matrix @ v))


def constraint_sum_single(
    w: ProcessMatrix, alpha: str, beta: str, m_rule: str
) -> ConstraintRecord:
    """Single-qubit constraint sum over the measure-alpha prepare-beta(m(s))
    instrument.

    For any Hermitian W the sum equals 2 w_11 + 2 w_{alpha,beta} under the
    rule m=s and 2 w_11 + 2 w_{1,beta} under m=0; it must equal 1 on a valid
    W, forcing the respective coefficient to zero.
    """
    if alpha not in "xyz" or beta not in "xyz":
        raise ValueError("alpha and beta must be x, y or z")
    if m_rule not in ("m=s", "m=0"):
        raise ValueError(f"unknown rule {m_rule!r}")
    if _qubit_count(w) != 1:
        raise DimensionMismatchError("constraint_sum_single needs one qubit in/out")
    lhs = 0.0
    for s in (0, 1):
        m = s if m_rule == "m=s" else 0
        lhs += _projector_expectation(
            w.matrix, [pauli_eigenvector(alpha, s), pauli_eigenvector(beta, m)]
        )
    label = f"w_{alpha}{beta}" if m_rule == "m=s" else f"w_1{beta}"
    return ConstraintRecord(
        description=f"alpha={alpha}, beta={beta}, rule {m_rule}",
        lhs_value=lhs,
        expected=1.0,
        coefficient_label=label,
        coefficient_value=(lhs - 1.0) / 2,
    )


def _bookkeeping_records(w: ProcessMatrix, n: int, tol: float):
    """Trace and PSD checks shared by the constructive procedures."""
    records = []
    trace = float(np.trace(w.matrix).real)
    if abs(trace - 2**n) > tol:
        records.append(
            ConstraintRecord(
                description=f"Tr(W) = {2**n}",
                lhs_value=trace,
                expected=float(2**n),
                coefficient_label="trace",
                coefficient_value=(trace - 2**n) / 2**n,
            )
        )
    if not is_psd(w.matrix, tol):
        mineig = min_eigenvalue(w.matrix, tol)
        records.append(
            ConstraintRecord(
                description="W >= 0",
                lhs_value=mineig,
                expected=0.0,
                coefficient_label="min_eigenvalue",
                coefficient_value=mineig,
            )
        )
    return records


def _finish_report(w: ProcessMatrix, n: int, w1: np.ndarray, violations, tol: float):
    residual = frobenius_norm(w.matrix - kron(w1, np.eye(2**n)))
    w1_psd = is_psd((w1 + w1.conj().T) / 2, tol)
    w1_trace = float(np.trace(w1).real)
    certified = (
        not violations
        and residual <= tol
        and w1_psd
        and abs(w1_trace - 1.0) <= tol
    )
    return ReductionReport(
        certified=certified,
        w1=w1,
        residual=residual,
        violations=tuple(violations),
        w1_psd=w1_psd,
        w1_trace=w1_trace,
    )


def reduce_single_qubit(w: ProcessMatrix, tol: float = DEFAULT_TOL) -> ReductionReport:
    """Constructive single-qubit reduction via the 18 constraint sums.

    Runs both rules on all nine (alpha, beta) pairs, checks Tr(W) = 2 and
    W >= 0, then extracts W_1 = I/2 + w_x1 X + w_y1 Y + w_z1 Z and verifies
    it is a density matrix.
    """
    if _qubit_count(w) != 1:
        raise DimensionMismatchError("reduce_single_qubit needs one qubit in/out")
    violations = []
    for alpha in "xyz":
        for beta in "xyz":
            for rule in ("m=s", "m=0"):
                rec = constraint_sum_single(w, alpha, beta, rule)
                if not rec.passes(tol):
                    violations.append(rec)
    violations.extend(_bookkeeping_records(w, 1, tol))
    w1 = np.eye(2, dtype=complex) / 2
    for alpha in "xyz":
        w1 += pauli_coefficient(w.matrix, (alpha, "1")) * pauli(alpha)
    return _finish_report(w, 1, w1, violations, tol)


def appendix_constraint_sum(
    w: ProcessMatrix, alphas, betas, xi_support, eta_support
) -> ConstraintRecord:
    """n-qubit parity-subset constraint sum.

    Measures each input qubit i in basis alphas[i] (outcome s_i) and
    prepares each output qubit in basis betas[i] (bit m_i), averaging m
    uniformly over the subset S_s where the parity of m over eta_support
    equals the parity of s over xi_support. For any Hermitian W the sum
    equals 2^n (w_identity + w_target), where w_target carries alphas on the
    xi_support input slots, betas on the eta_support output slots and
    identity elsewhere.
    """
    n = _qubit_count(w)
    alphas, betas = tuple(alphas), tuple(betas)
    if len(alphas) != n or len(betas) != n:
        raise DimensionMismatchError(f"need {n} input and output bases")
    if any(p not in "xyz" for p in alphas + betas):
        raise ValueError("bases must be x, y or z")
    xi_support = sorted(set(xi_support))
    eta_support = sorted(set(eta_support))
    if not eta_support:
        raise ValueError("eta_support must be nonempty")
    if any(i < 0 or i >= n for i in xi_support + eta_support):
        raise ValueError("support index out of range")

    lhs = 0.0
    for s in itertools.product((0, 1), repeat=n):
        target_parity = sum(s[i] for i in xi_support) % 2
        subset = [
            m
            for m in itertools.product((0, 1), repeat=n)
            if sum(m[j] for j in eta_support) % 2 == target_parity
        ]
        in_vecs = [pauli_eigenvector(alphas[i], s[i]) for i in range(n)]
        for m in subset:
            out_vecs = [pauli_eigenvector(betas[i], m[i]) for i in range(n)]
            lhs += _projector_expectation(w.matrix, in_vecs + out_vecs) / len(subset)

    w_identity = float(np.trace(w.matrix).real) / 4**n
    implied = lhs / 2**n - w_identity
    xi_word = "".join(alphas[i] if i in xi_support else "1" for i in range(n))
    eta_word = "".join(betas[i] if i in eta_support else "1" for i in range(n))
    return ConstraintRecord(
        description=(
            f"alphas={''.join(alphas)}, betas={''.join(betas)}, "
            f"xi_support={xi_support}, eta_support={eta_support}"
        ),
        lhs_value=lhs,
        expected=1.0,
        coefficient_label=f"w_{xi_word},{eta_word}",
        coefficient_value=implied,
    )


def _multiqubit_constraints(n: int):
    """(alphas, betas, xi_support, eta_support) per output-touching target.

    Full basis sweep for n <= 2; one representative basis pair per support
    pattern for n in {3, 4} (the residual check covers the rest).
    """
    positions = range(n)
    if n <= 2:
        for xi in itertools.product("1xyz", repeat=n):
            for eta in itertools.product("1xyz", repeat=n):
                if all(p == "1" for p in eta):
                    continue
                xi_support = [i for i in positions if xi[i] != "1"]
                eta_support = [i for i in positions if eta[i] != "1"]
                alphas = tuple(xi[i] if xi[i] != "1" else "x" for i in positions)
                betas = tuple(eta[i] if eta[i] != "1" else "x" for i in positions)
                yield alphas, betas, xi_support, eta_support
    else:
        all_x = tuple("x" for _ in positions)
        for xi_bits in itertools.product((0, 1), repeat=n):
            for eta_bits in itertools.product((0, 1), repeat=n):
                if not any(eta_bits):
                    continue
                xi_support = [i for i in positions if xi_bits[i]]
                eta_support = [i for i in positions if eta_bits[i]]
                yield all_x, all_x, xi_support, eta_support


def reduce_multiqubit(w: ProcessMatrix, tol: float = DEFAULT_TOL) -> ReductionReport:
    """n-qubit constructive reduction via parity-subset constraint sums.

    Certifies W = W_1 (x) I when every output-touching Pauli coefficient
    vanishes, Tr(W) = 2^n, W >= 0 and the extracted W_1 (partial trace over
    the output factor, divided by 2^n) is a density matrix.
    """
    n = _qubit_count(w)
    if n > MAX_QUBITS:
        raise DimensionMismatchError(f"at most {MAX_QUBITS} qubits supported")
    violations = []
    for alphas, betas, xi_support, eta_support in _multiqubit_constraints(n):
        rec = appendix_constraint_sum(w, alphas, betas, xi_support, eta_support)
        if not rec.passes(tol):
            violations.append(rec)
    violations.extend(_bookkeeping_records(w, n, tol))
    w1 = partial_trace_over_outputs(w) / 2**n
    return _finish_report(w, n, w1, violations, tol)


def projection_oracle(w: ProcessMatrix, tol: float = DEFAULT_TOL) -> ReductionReport:
    """Dimension-agnostic reduction check by orthogonal projection.

    W_1 = Tr_out(W) / d_out; certifies iff the Frobenius residual
    ||W - W_1 (x) I|| is within tol, W_1 is a density matrix, and all
    normalization constraints of the validity check pass.
    """
    if len(w.spec.parties) != 1:
        raise DimensionMismatchError("projection_oracle needs a single party")
    dims = w.spec.parties[0]
    w1 = partial_trace_over_outputs(w) / dims.d_out
    residual = frobenius_norm(w.matrix - kron(w1, np.eye(dims.d_out)))
    violations = []
    for label, matrix, expected in normalization_constraints(w.spec):
        value = complex(np.trace(w.matrix @ matrix))
        if abs(value - expected) > tol:
            violations.append(
                ConstraintRecord(
                    description=f"normalization {label}",
                    lhs_value=value.real,
                    expected=expected,
                    coefficient_label=label,
                    coefficient_value=abs(value - expected),
                )
            )
    w1_herm = (w1 + w1.conj().T) / 2
    w1_psd = (
        frobenius_norm(w1 - w1_herm) <= tol and is_psd(w1_herm, tol)
    )
    w1_trace = float(np.trace(w1).real)
    certified = (
        residual <= tol
        and not violations
        and w1_psd
        and abs(w1_trace - 1.0) <= tol
    )
    return ReductionReport(
        certified=certified,
        w1=w1,
        residual=residual,
        violations=tuple(violations),
        w1_psd=w1_psd,
        w1_trace=w1_trace,
    )


def born_equivalence(w1: np.ndarray, f: KrausFamily, w: ProcessMatrix):
    """(Tr[W M_f], Tr[sum_k E_k W_1 E_k^dagger]); equal when W = W_1 (x) I."""
    lhs = probability(w, [cj_of_kraus(f)])
    rhs = float(np.trace(f.apply(np.asarray(w1, dtype=complex))).real)
    return lhs, rhs
