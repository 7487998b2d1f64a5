"""Fourier analysis of matrix-valued functions and pretty good measurements.

Contains the machinery behind the single-bit reduction of multi-bit
output security: the character-sum Fourier transform with its Parseval
identity, the pretty good measurement and its channel, the Fourier-side
upper bound on the squared distance to uniform, and the measured-XOR
bound that compresses a multi-bit output state to its s-masked bits.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .cq_states import CqState, apply_classical_function, marginal_side
from .gf2 import index_to_bits
from .operators import check_hermitian, op_power, partial_trace, tensor

MAX_FOURIER_BITS = 12


@dataclass(frozen=True)
class MatrixValuedFunction:
    """All 2^m values of a map from m-bit strings to d x d matrices."""

    m: int
    d: int
    values: np.ndarray   # shape (2^m, d, d), indexed by big-endian bit index

    def __post_init__(self):
        expected = (1 << self.m, self.d, self.d)
        if self.values.shape != expected:
            raise ValueError(f"values must have shape {expected}, got {self.values.shape}")


def mvf_from_blocks(m: int, d: int, blocks: dict) -> MatrixValuedFunction:
    """Build a matrix-valued function from a symbol -> matrix map (zeros elsewhere)."""
    vals = np.zeros((1 << m, d, d), dtype=complex)
    for sym, mat in blocks.items():
        idx = 0
        for b in sym:
            idx = (idx << 1) | (b & 1)
        vals[idx] = mat
    return MatrixValuedFunction(m=m, d=d, values=vals)


@functools.lru_cache(maxsize=None)
def character_matrix(m: int) -> np.ndarray:
    """Sylvester matrix H[a, z] = (-1)^(a . z) of size 2^m."""
    if m > MAX_FOURIER_BITS:
        raise ValueError(f"transform capped at m <= {MAX_FOURIER_BITS}")
    h = np.array([[1.0]])
    block = np.array([[1.0, 1.0], [1.0, -1.0]])
    for _ in range(m):
        h = np.kron(h, block)
    return h


def mvf_fourier(mvf: MatrixValuedFunction) -> MatrixValuedFunction:
    """Transform alpha -> 2^(-m/2) sum_z (-1)^(alpha . z) M(z); self-inverse."""
    h = character_matrix(mvf.m)
    n = 1 << mvf.m
    flat = mvf.values.reshape(n, mvf.d * mvf.d)
    out = (h @ flat) / np.sqrt(n)
    return MatrixValuedFunction(m=mvf.m, d=mvf.d, values=out.reshape(n, mvf.d, mvf.d))


def mvf_l2_norm(mvf: MatrixValuedFunction) -> float:
    """sqrt(tr sum_z M(z)^dagger M(z)), the Frobenius mass of all values."""
    return float(np.sqrt(np.sum(np.abs(mvf.values) ** 2)))


@dataclass(frozen=True)
class POVM:
    elements: dict   # outcome -> PSD operator, summing to the identity

    def dim(self) -> int:
        return next(iter(self.elements.values())).shape[0]

    def outcomes(self):
        return sorted(self.elements)


def validate_povm(povm: POVM, atol: float = 1e-9) -> POVM:
    dim = povm.dim()
    total = np.zeros((dim, dim), dtype=complex)
    for outcome, el in povm.elements.items():
        e = check_hermitian(el, atol=1e-9)
        w = np.linalg.eigvalsh(e)
        if w.size and w[0] < -1e-10 * max(1.0, float(abs(w[-1]))):
            raise ValueError(f"POVM element for {outcome} is not PSD (min eig {w[0]:.3e})")
        total += e
    if np.max(np.abs(total - np.eye(dim))) > atol:
        raise ValueError("POVM elements do not sum to the identity")
    return povm


def pgm(state: CqState) -> POVM:
    """Pretty good measurement: rho_B^{-1/2} rho_{B and x} rho_B^{-1/2}.

    The completeness deficit on ker(rho_B), never occupied by the state,
    is assigned to the lexicographically first outcome so the result is a
    genuine POVM on the full space.
    """
    rho_b = marginal_side(state)
    inv_sqrt = op_power(rho_b, -0.5, "pseudo")
    symbols = state.symbols()
    elements = {sym: inv_sqrt @ state.blocks[sym] @ inv_sqrt for sym in symbols}
    deficit = np.eye(state.side_dim, dtype=complex) - sum(elements.values())
    if np.max(np.abs(deficit)) > 1e-12:
        first = symbols[0]
        elements[first] = elements[first] + deficit
    return POVM(elements={sym: 0.5 * (e + e.conj().T) for sym, e in elements.items()})


def measure_operator(povm: POVM, op) -> dict:
    """Outcome weights tr(Lambda_x op)."""
    mat = np.asarray(op, dtype=complex)
    return {outcome: float(np.trace(povm.elements[outcome] @ mat).real)
            for outcome in povm.outcomes()}


def apply_measurement(povm: POVM, state: CqState) -> CqState:
    """Measure the side register: classical-classical state on (x, outcome)."""
    if povm.dim() != state.side_dim:
        raise ValueError("POVM dimension does not match the side register")
    blocks = {}
    for sym in state.symbols():
        for outcome, p in measure_operator(povm, state.blocks[sym]).items():
            blocks[(sym, outcome)] = np.array([[p]], dtype=complex)
    return CqState(side_dim=1, blocks=blocks)


def squared_distance_fourier_bound(state: CqState, sigma) -> float:
    """Fourier-side upper bound on delta(rho_ZE, omega (x) rho_E)^2.

    Equals (2^m / 4) * sum_{s != 0} tr F[M](s)^2 for the matrix-valued
    function M(z) = sigma^{-1/4} rho_{E and z} sigma^{-1/4}; the raw
    double sum over (z, z') is kept as a test oracle.
    """
    m = _output_bits(state)
    sig = np.asarray(sigma, dtype=complex)
    quarter = op_power(sig, -0.25, "pseudo")
    kernel = np.eye(state.side_dim, dtype=complex) - op_power(sig, 0.0, "pseudo")
    conj_blocks = {}
    for sym in state.symbols():
        block = state.blocks[sym]
        if float(np.trace(kernel @ block @ kernel).real) > 1e-9:
            raise ValueError("sigma kernel is not contained in the state kernel")
        conj_blocks[sym] = quarter @ block @ quarter
    mvf = mvf_from_blocks(m, state.side_dim, conj_blocks)
    fourier = mvf_fourier(mvf)
    acc = 0.0
    for idx in range(1, 1 << m):
        f = fourier.values[idx]
        acc += float(np.trace(f @ f).real)
    return ((1 << m) / 4.0) * acc


def measured_xor_bound(state: CqState) -> float:
    """Root-mean bound on delta(rho_ZE, omega (x) rho_E) via masked bits.

    For each nonzero mask s the m-bit state is compressed to the bit
    s . z, the pretty good measurement of the compressed state is applied
    to its own side register, and the resulting classical-classical
    distance from (uniform bit) (x) (measured marginal) is accumulated.
    """
    m = _output_bits(state)
    rho_e = marginal_side(state)
    acc = 0.0
    for idx in range(1, 1 << m):
        s = index_to_bits(idx, m)
        masked = apply_classical_function(
            state, lambda z, s=s: (sum(si & zi for si, zi in zip(s, z)) & 1,))
        povm = pgm(masked)
        joint = apply_measurement(povm, masked)
        ref = measure_operator(povm, rho_e)
        target_blocks = {}
        for i in ((0,), (1,)):
            for outcome, q in ref.items():
                target_blocks[(i, outcome)] = np.array([[0.5 * q]], dtype=complex)
        acc += _cc_distance(joint, target_blocks)
    return float(np.sqrt(0.5 * acc))


def _cc_distance(state: CqState, target_blocks: dict) -> float:
    keys = sorted(set(state.blocks) | set(target_blocks))
    total = 0.0
    for key in keys:
        a = float(state.blocks[key][0, 0].real) if key in state.blocks else 0.0
        b = float(target_blocks[key][0, 0].real) if key in target_blocks else 0.0
        total += abs(a - b)
    return 0.5 * total


def _output_bits(state: CqState) -> int:
    lengths = {len(sym) for sym in state.blocks}
    if len(lengths) != 1:
        raise ValueError("state symbols must all be bit tuples of one length")
    (m,) = lengths
    if m > MAX_FOURIER_BITS:
        raise ValueError(f"output length {m} exceeds cap {MAX_FOURIER_BITS}")
    return m


def l2_distance_to_uniform(rho_ab, dim_a: int, sigma_b) -> float:
    """Conjugated squared 2-distance of rho_AB from omega_A (x) rho_B.

    Internal evaluator for the one-norm/two-norm inequality checks; not
    part of the supported API surface.
    """
    rho = np.asarray(rho_ab, dtype=complex)
    sig = np.asarray(sigma_b, dtype=complex)
    dim_b = sig.shape[0]
    if rho.shape[0] != dim_a * dim_b:
        raise ValueError("dimension mismatch between rho_AB and (dim_a, sigma_b)")
    rho_b = partial_trace(rho, (dim_a, dim_b), keep=(1,))
    centered = rho - tensor(np.eye(dim_a) / dim_a, rho_b)
    weight = tensor(np.eye(dim_a), op_power(sig, -0.25, "pseudo"))
    conj = weight @ centered @ weight
    return float(np.trace(conj @ conj).real)
