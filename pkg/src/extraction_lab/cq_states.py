"""Classical-quantum states as block-diagonal collections of operators.

A cq-state is stored as a map from classical symbols to subnormalized PSD
conditional operators on the quantum side register.  Every operation here
works block by block; a state is never materialized as one dense matrix
except through :func:`to_dense`, which exists for cross-checks (the dense
and blockwise routes must agree) and for conditional-mutual-information
evaluation of Markov block states.

Symbols are hashable tuples: bit tuples for plain registers, nested
tuples such as ``(z_bits, x_bits)`` for composite classical registers.
Deterministic iteration uses sorted symbol order throughout so results
are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf2 import Bits, index_to_bits
from .operators import check_hermitian, hermitian_trace_norm, tensor

PSD_ATOL = 1e-10
TRACE_ATOL = 1e-9


@dataclass(frozen=True)
class CqState:
    """Map symbol -> subnormalized conditional operator rho_{B and x}."""

    side_dim: int
    blocks: dict = field(repr=False)

    def symbols(self):
        return sorted(self.blocks)

    def probabilities(self) -> dict:
        return {sym: float(np.trace(b).real) for sym, b in sorted(self.blocks.items())}

    def total_trace(self) -> float:
        return float(sum(np.trace(b).real for b in self.blocks.values()))


def validate_cq(state: CqState, atol: float = TRACE_ATOL) -> CqState:
    total = 0.0
    for sym, block in state.blocks.items():
        b = check_hermitian(block, atol=1e-9)
        if b.shape != (state.side_dim, state.side_dim):
            raise ValueError(f"block for {sym} has shape {b.shape}, expected side_dim {state.side_dim}")
        w = np.linalg.eigvalsh(b)
        if w.size and w[0] < -PSD_ATOL * max(1.0, float(abs(w[-1]))):
            raise ValueError(f"conditional operator for {sym} is not PSD (min eig {w[0]:.3e})")
        total += float(np.trace(b).real)
    if abs(total - 1.0) > atol:
        raise ValueError(f"cq-state trace {total} != 1")
    return state


def build_cq(dist: dict, cond_states: dict, side_dim: int | None = None) -> CqState:
    """Assemble a cq-state from a distribution and normalized conditionals."""
    total = float(sum(dist.values()))
    if abs(total - 1.0) > TRACE_ATOL:
        raise ValueError(f"distribution sums to {total}, not 1")
    if any(p < -1e-12 for p in dist.values()):
        raise ValueError("negative probability in distribution")
    blocks = {}
    dim = side_dim
    for sym, p in dist.items():
        if p <= 0:
            continue
        cond = np.asarray(cond_states[sym], dtype=complex)
        if dim is None:
            dim = cond.shape[0]
        if cond.shape != (dim, dim):
            raise ValueError(f"conditional for {sym} has shape {cond.shape}")
        if abs(np.trace(cond).real - 1.0) > TRACE_ATOL:
            raise ValueError(f"conditional state for {sym} is not normalized")
        blocks[sym] = p * cond
    if dim is None:
        raise ValueError("empty distribution")
    return validate_cq(CqState(side_dim=dim, blocks=blocks))


def classical_state(dist: dict) -> CqState:
    """Source with trivial (one-dimensional) side register."""
    one = np.ones((1, 1), dtype=complex)
    return build_cq(dist, {sym: one for sym in dist}, side_dim=1)


def marginal_side(state: CqState) -> np.ndarray:
    out = np.zeros((state.side_dim, state.side_dim), dtype=complex)
    for sym in state.symbols():
        out += state.blocks[sym]
    return out


def apply_classical_function(state: CqState, f) -> CqState:
    """Push the classical register through f, summing merged blocks."""
    blocks: dict = {}
    for sym in state.symbols():
        out_sym = f(sym)
        if out_sym in blocks:
            blocks[out_sym] = blocks[out_sym] + state.blocks[sym]
        else:
            blocks[out_sym] = state.blocks[sym].copy()
    return CqState(side_dim=state.side_dim, blocks=blocks)


def product(s1: CqState, s2: CqState) -> CqState:
    """Independent pair: alphabet of pairs, side register C1 (x) C2."""
    blocks = {}
    for a in s1.symbols():
        for b in s2.symbols():
            blocks[(a, b)] = tensor(s1.blocks[a], s2.blocks[b])
    return CqState(side_dim=s1.side_dim * s2.side_dim, blocks=blocks)


@dataclass(frozen=True)
class MarkovScenario:
    """Mixture of product blocks: weights P_Z(z) and per-block factors."""

    weights: tuple
    factors: tuple   # tuple of (CqState, CqState) pairs

    def __post_init__(self):
        if len(self.weights) != len(self.factors) or not self.weights:
            raise ValueError("weights and factor pairs must align and be nonempty")
        if any(w < -1e-12 for w in self.weights):
            raise ValueError("negative block weight")
        if abs(sum(self.weights) - 1.0) > TRACE_ATOL:
            raise ValueError("block weights must sum to 1")


def markov_block_state(scenario: MarkovScenario) -> CqState:
    """Embed the block mixture as one cq-state on the pair alphabet.

    The side register is the direct sum over blocks of C1^z (x) C2^z,
    realized with explicit offsets; block z of weight w contributes
    w * rho^z_{C1 and x1} (x) rho^z_{C2 and x2} in its diagonal slot.
    By construction I(X1:X2|C) = 0 for the embedded state.
    """
    dims = [(s1.side_dim, s2.side_dim) for s1, s2 in scenario.factors]
    side_dim = sum(d1 * d2 for d1, d2 in dims)
    offsets = np.cumsum([0] + [d1 * d2 for d1, d2 in dims])
    alpha1 = sorted({a for s1, _ in scenario.factors for a in s1.blocks})
    alpha2 = sorted({b for _, s2 in scenario.factors for b in s2.blocks})
    blocks = {}
    for a in alpha1:
        for b in alpha2:
            acc = np.zeros((side_dim, side_dim), dtype=complex)
            nonzero = False
            for z, (w, (s1, s2)) in enumerate(zip(scenario.weights, scenario.factors)):
                if w <= 0 or a not in s1.blocks or b not in s2.blocks:
                    continue
                lo, hi = offsets[z], offsets[z + 1]
                acc[lo:hi, lo:hi] = w * tensor(s1.blocks[a], s2.blocks[b])
                nonzero = True
            if nonzero:
                blocks[(a, b)] = acc
    return CqState(side_dim=side_dim, blocks=blocks)


def _strong_flag(strong_in) -> str | None:
    if strong_in in (None, "none", "NONE", "None"):
        return None
    flag = str(strong_in).lower()
    if flag not in ("x1", "x2"):
        raise ValueError(f"strong_in must be None, 'x1' or 'x2', got {strong_in!r}")
    return flag


def _check_alphabet(state: CqState, n: int, which: str) -> None:
    for sym in state.blocks:
        if not isinstance(sym, tuple) or len(sym) != n:
            raise ValueError(f"{which} alphabet symbol {sym!r} is not an {n}-bit string")


def extractor_output_state(ext, s1: CqState, s2: CqState, strong_in=None) -> CqState:
    """State of (Ext(X1, X2), [X_i copy], C1 C2) for independent sources.

    The classical register is the output z for a weak evaluation, or the
    pair (z, x_i) when strong_in names a source; the side register is
    always C1 (x) C2.  Blocks are grouped before tensoring so the full
    joint operator is never built.
    """
    flag = _strong_flag(strong_in)
    _check_alphabet(s1, ext.n1, "source 1")
    _check_alphabet(s2, ext.n2, "source 2")
    blocks: dict = {}
    if flag == "x2":
        for x2 in s2.symbols():
            grouped: dict = {}
            for x1 in s1.symbols():
                z = ext(x1, x2)
                grouped[z] = grouped.get(z, 0) + s1.blocks[x1]
            for z, acc in grouped.items():
                blocks[(z, x2)] = tensor(acc, s2.blocks[x2])
        return CqState(side_dim=s1.side_dim * s2.side_dim, blocks=blocks)
    for x1 in s1.symbols():
        grouped = {}
        for x2 in s2.symbols():
            z = ext(x1, x2)
            grouped[z] = grouped.get(z, 0) + s2.blocks[x2]
        for z, acc in grouped.items():
            piece = tensor(s1.blocks[x1], acc)
            if flag == "x1":
                blocks[(z, x1)] = piece
            else:
                blocks[z] = blocks.get(z, 0) + piece
    return CqState(side_dim=s1.side_dim * s2.side_dim, blocks=blocks)


def extractor_output_from_joint(ext, joint: CqState, strong_in=None) -> CqState:
    """Same as :func:`extractor_output_state` for a joint (x1, x2) state.

    Used for Markov block states, whose side register does not factorize.
    """
    flag = _strong_flag(strong_in)
    blocks: dict = {}
    for sym in joint.symbols():
        x1, x2 = sym
        z = ext(x1, x2)
        key = (z, x1) if flag == "x1" else (z, x2) if flag == "x2" else z
        blocks[key] = blocks.get(key, 0) + joint.blocks[sym]
    return CqState(side_dim=joint.side_dim, blocks=blocks)


def distance_to_uniform(state: CqState, uniform_dim: int, strong: bool = False) -> float:
    """Exact trace distance to (uniform output) (x) (rest of the state).

    For a weak output state (symbols are z themselves) this is
    delta(rho_{ZC}, omega (x) rho_C).  For a strong state (symbols are
    (z, x_i) pairs) the distance decomposes as the expectation over x_i
    of the per-x_i distances; both cases reduce to one blockwise sum,
    including output symbols of weight zero that the alphabet omits.
    """
    groups: dict = {}
    for sym, block in state.blocks.items():
        if strong:
            if not (isinstance(sym, tuple) and len(sym) == 2):
                raise ValueError(f"strong output symbols must be (z, x) pairs, got {sym!r}")
            z, rest = sym
        else:
            z, rest = sym, None
        groups.setdefault(rest, {})[z] = block
    total = 0.0
    for rest in sorted(groups, key=lambda r: (r is not None, r)):
        zmap = groups[rest]
        target = sum(zmap[z] for z in sorted(zmap)) / uniform_dim
        target_norm = hermitian_trace_norm(target)
        present = 0
        for z in sorted(zmap):
            total += hermitian_trace_norm(zmap[z] - target)
            present += 1
        total += (uniform_dim - present) * target_norm
    return 0.5 * total


def to_dense(state: CqState, symbols=None) -> np.ndarray:
    """Materialize sum_x |x><x| (x) rho_{B and x} over an explicit symbol order."""
    if symbols is None:
        symbols = state.symbols()
    d = state.side_dim
    n = len(symbols)
    out = np.zeros((n * d, n * d), dtype=complex)
    for i, sym in enumerate(symbols):
        block = state.blocks.get(sym)
        if block is not None:
            out[i * d : (i + 1) * d, i * d : (i + 1) * d] = block
    return out


def full_alphabet(n: int) -> list[Bits]:
    return [index_to_bits(i, n) for i in range(1 << n)]
