"""Process matrices: the trace probability rule and validity checking.

A process matrix W lives on the tensor product of each laboratory's input
and output space (per party: input factor then output factor, parties in
declaration order). Event probabilities are Tr[W (M_1 (x) ... (x) M_n)]
with one CJ operator per party.

Validity = Hermitian and PSD, Tr(W) = product of output dimensions, and the
probability rule normalizes to 1 over every choice of CPTP instruments.
The normalization check uses a finite affine characterization: CPTP CJ
operators form the affine set {M >= 0, Tr_out M = I}, so by linearity it
suffices to check one reference CPTP CJ per party plus a basis of Hermitian
directions that are traceless on the output factor. This finite test set is
an implementation-level derivation from the probability rule, not something
stated per party count in the source framework.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import CJOperator, KrausFamily, cj_of_kraus
from .linalg import (
    DEFAULT_TOL,
    DimensionMismatchError,
    DimensionPair,
    hermitian_basis,
    is_hermitian,
    kron_all,
    min_eigenvalue,
    partial_trace,
    traceless_hermitian_basis,
)


@dataclass(frozen=True)
class PartySpec:
    """Input/output dimensions of each laboratory, in factor order."""

    parties: tuple

    def __post_init__(self):
        parties = tuple(self.parties)
        if not parties:
            raise ValueError("PartySpec needs at least one party")
        for p in parties:
            if not isinstance(p, DimensionPair):
                raise TypeError("parties must be DimensionPair instances")
        object.__setattr__(self, "parties", parties)

    @property
    def total_dim(self) -> int:
        out = 1
        for p in self.parties:
            out *= p.total
        return out

    @property
    def d_out_product(self) -> int:
        out = 1
        for p in self.parties:
            out *= p.d_out
        return out

    @property
    def factor_dims(self) -> list:
        """Flat factor dimensions [in_1, out_1, in_2, out_2, ...]."""
        dims = []
        for p in self.parties:
            dims.extend([p.d_in, p.d_out])
        return dims


@dataclass(frozen=True)
class ProcessMatrix:
    spec: PartySpec
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.spec.total_dim
        if m.shape != (d, d):
            raise DimensionMismatchError(
                f"process matrix shape {m.shape} != ({d}, {d})"
            )
        object.__setattr__(self, "matrix", m)


def single_party(d_in: int, d_out: int, matrix: np.ndarray) -> ProcessMatrix:
    return ProcessMatrix(PartySpec((DimensionPair(d_in, d_out),)), matrix)


@dataclass(frozen=True)
class ValidityReport:
    psd_ok: bool
    min_eigenvalue: float
    normalization_ok: bool
    worst_residual: float
    trace_ok: bool
    trace_value: float
    violated_constraints: tuple = ()

    @property
    def ok(self) -> bool:
        return self.psd_ok and self.normalization_ok and self.trace_ok


def probability(w: ProcessMatrix, branch_cjs) -> float:
    """Tr[W (M_1 (x) ... (x) M_n)] for one CJ operator per party.

    The raw real value is returned unclamped; a significant imaginary part
    signals non-Hermitian inputs and raises.
    """
    if len(branch_cjs) != len(w.spec.parties):
        raise DimensionMismatchError(
            f"expected {len(w.spec.parties)} CJ operators, got {len(branch_cjs)}"
        )
    for cj, party in zip(branch_cjs, w.spec.parties):
        if cj.dims != party:
            raise DimensionMismatchError(
                f"CJ dims {cj.dims} do not match party dims {party}"
            )
    m = kron_all(cj.matrix for cj in branch_cjs)
    tr = complex(np.trace(w.matrix @ m))
    if abs(tr.imag) > 1e-10:
        raise ValueError(f"probability trace has imaginary part {tr.imag:.3e}")
    return tr.real


def clamp_probability(p: float, tol: float = DEFAULT_TOL) -> float:
    """Display-only clamp to [0, 1]; raw values stay diagnostic."""
    if -tol <= p <= 1 + tol:
        return min(max(p, 0.0), 1.0)
    return p


def reference_cptp_cj(dims: DimensionPair) -> CJOperator:
    """One fixed CPTP CJ per party: identity channel if square, else
    trace-and-prepare-|0>."""
    if dims.d_in == dims.d_out:
        return cj_of_kraus(KrausFamily(dims, (np.eye(dims.d_in, dtype=complex),)))
    ops = []
    for k in range(dims.d_in):
        op = np.zeros((dims.d_out, dims.d_in), dtype=complex)
        op[0, k] = 1.0
        ops.append(op)
    return cj_of_kraus(KrausFamily(dims, tuple(ops)))


def output_traceless_directions(dims: DimensionPair) -> list:
    """Hermitian basis of the directions tangent to the CPTP CJ set.

    These are h_in (x) g_out with g_out traceless, so Tr_out of each
    direction vanishes; there are d_in^2 (d_out^2 - 1) of them, all unit
    Frobenius norm.
    """
    return [
        np.kron(h, g)
        for h in hermitian_basis(dims.d_in)
        for g in traceless_hermitian_basis(dims.d_out)
    ]


def normalization_constraints(spec: PartySpec) -> list:
    """Finite constraint set equivalent to normalization over all CPTP
    instruments.

    Returns (label, matrix, expected) triples: expected 1 when every party
    takes its reference CPTP CJ, 0 as soon as any party takes a traceless
    direction.
    """
    per_party = []
    for i, dims in enumerate(spec.parties):
        choices = [(f"P{i}:ref", reference_cptp_cj(dims).matrix, True)]
        for k, direction in enumerate(output_traceless_directions(dims)):
            choices.append((f"P{i}:dir{k}", direction, False))
        per_party.append(choices)

    constraints = []
    combos = [[]]
    for choices in per_party:
        combos = [c + [ch] for c in combos for ch in choices]
    for combo in combos:
        label = "|".join(name for name, _, _ in combo)
        matrix = kron_all(mat for _, mat, _ in combo)
        expected = 1.0 if all(is_ref for _, _, is_ref in combo) else 0.0
        constraints.append((label, matrix, expected))
    return constraints


def validate(w: ProcessMatrix, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Check PSD, trace = product of output dimensions, and normalization."""
    violated = []

    hermitian = is_hermitian(w.matrix, tol)
    if hermitian:
        mineig = min_eigenvalue(w.matrix, tol)
    else:
        mineig = float("-inf")
        violated.append(("hermiticity", float(np.max(np.abs(w.matrix - w.matrix.conj().T)))))
    psd_ok = hermitian and mineig >= -tol

    trace_value = float(np.trace(w.matrix).real)
    trace_ok = abs(trace_value - w.spec.d_out_product) <= tol
    if not trace_ok:
        violated.append(("trace", abs(trace_value - w.spec.d_out_product)))

    worst = 0.0
    for label, matrix, expected in normalization_constraints(w.spec):
        value = complex(np.trace(w.matrix @ matrix))
        residual = abs(value - expected)
        worst = max(worst, residual)
        if residual > tol:
            violated.append((label, residual))
    normalization_ok = worst <= tol

    return ValidityReport(
        psd_ok=psd_ok,
        min_eigenvalue=mineig,
        normalization_ok=normalization_ok,
        worst_residual=worst,
        trace_ok=trace_ok,
        trace_value=trace_value,
        violated_constraints=tuple(violated),
    )


def trace_dimension_identity(w: ProcessMatrix) -> float:
    """Probability sum over the flatten-and-reprepare Kraus family.

    Uses the instrument with Kraus operators E_{j,k} = |j><k| / sqrt(d_out)
    over all j, k; for any Hermitian W the sum equals Tr(W)/d_out, and it
    equals 1 exactly when Tr(W) = d_out.
    """
    if len(w.spec.parties) != 1:
        raise DimensionMismatchError("trace_dimension_identity needs a single party")
    dims = w.spec.parties[0]
    total = 0.0
    for j in range(dims.d_out):
        for k in range(dims.d_in):
            op = np.zeros((dims.d_out, dims.d_in), dtype=complex)
            op[j, k] = 1 / np.sqrt(dims.d_out)
            cj = cj_of_kraus(KrausFamily(dims, (op,)))
            total += probability(w, [cj])
    return total


def partial_trace_over_outputs(w: ProcessMatrix) -> np.ndarray:
    """Reduce a single-party W onto its input factor."""
    if len(w.spec.parties) != 1:
        raise DimensionMismatchError("single-party operation")
    dims = w.spec.parties[0]
    return partial_trace(w.matrix, [dims.d_in, dims.d_out], keep={0})
