"""Scenario construction: flat sources, side-information models, Markov blocks.

Every builder is deterministic given its seed.  A built source carries a
certified entropy: exact closed forms for trivial/classical side
information, and the achieved (hence sound) solver lower bound for
quantum side information, together with the solver's convergence flags.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..cq_states import CqState, MarkovScenario, build_cq, classical_state
from ..entropies import h_min_classical, h_min_cond
from ..gf2 import index_to_bits
from ..operators import random_pure_state

SIDE_MODELS = ("trivial", "classical_leak", "bb84", "random_pure")

_KET0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
_KETPLUS = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)


def make_flat_source(n: int, k: int, support_rule: str = "prefix",
                     seed: int | None = None) -> dict:
    """Uniform distribution over 2^k of the 2^n strings; H_min = k exactly."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    size = 1 << k
    if support_rule == "prefix":
        indices = range(size)
    elif support_rule == "random":
        rng = np.random.default_rng(seed)
        indices = sorted(int(i) for i in rng.choice(1 << n, size=size, replace=False))
    else:
        raise ValueError(f"unknown support rule {support_rule!r}")
    p = 1.0 / size
    return {index_to_bits(i, n): p for i in indices}


@dataclass(frozen=True)
class SourceWithSide:
    """A source together with its side information and certified entropy."""

    state: CqState
    k: float
    model: str
    flags: dict


def _leak_function(name: str, n: int):
    if name == "parity":
        return lambda x: (sum(x) & 1,), 2
    if name == "first_bit":
        return lambda x: (x[0],), 2
    raise ValueError(f"unknown leak function {name!r}")


def make_side_info(model: str, dist: dict, *, seed: int = 0, **params) -> SourceWithSide:
    """Attach side information of the named model to a classical source."""
    if model == "trivial":
        state = classical_state(dist)
        return SourceWithSide(state, h_min_classical(dist), model, {"certified": "exact"})

    if model == "classical_leak":
        leak, dim = _leak_function(params.get("leak", "parity"), len(next(iter(dist))))
        conds = {}
        for sym in dist:
            c = np.zeros((dim, dim), dtype=complex)
            idx = leak(sym)[0]
            c[idx, idx] = 1.0
            conds[sym] = c
        state = build_cq(dist, conds, side_dim=dim)
        res = h_min_cond(state)
        return SourceWithSide(state, res.value, model, {"certified": "exact"})

    if model == "bb84":
        bits = int(params.get("bits", 1))
        if not 1 <= bits <= 2:
            raise ValueError("bb84 model encodes 1 or 2 leading bits")
        conds = {}
        for sym in dist:
            parts = [_KET0 if sym[i] == 0 else _KETPLUS for i in range(bits)]
            c = parts[0]
            for p in parts[1:]:
                c = np.kron(c, p)
            conds[sym] = c
        state = build_cq(dist, conds, side_dim=2 ** bits)
        res = h_min_cond(state)
        return SourceWithSide(state, res.value, model,
                              {"certified": "solver", "converged": res.converged,
                               "gap": res.gap})

    if model == "random_pure":
        dim = int(params.get("dim", 2))
        if not 2 <= dim <= 4:
            raise ValueError("random_pure side dimension must be 2..4")
        rng = np.random.default_rng(seed)
        conds = {sym: random_pure_state(dim, rng) for sym in sorted(dist)}
        state = build_cq(dist, conds, side_dim=dim)
        res = h_min_cond(state)
        return SourceWithSide(state, res.value, model,
                              {"certified": "solver", "converged": res.converged,
                               "gap": res.gap})

    if model == "markov_blocks":
        raise ValueError("markov_blocks scenarios pair two sources; "
                         "build them with make_markov_scenario")
    raise ValueError(f"unknown side-information model {model!r}; known: {SIDE_MODELS}")


def _random_distribution(n: int, rng: np.random.Generator, min_support: int = 1) -> dict:
    size = 1 << n
    support = int(rng.integers(min_support, size + 1))
    chosen = sorted(int(i) for i in rng.choice(size, size=support, replace=False))
    weights = rng.random(support) + 1e-3
    weights = weights / weights.sum()
    return {index_to_bits(i, n): float(w) for i, w in zip(chosen, weights)}


def _random_factor(n: int, side_dim: int, rng: np.random.Generator,
                   classical: bool) -> CqState:
    dist = _random_distribution(n, rng)
    if side_dim == 1:
        return classical_state(dist)
    if classical:
        conds = {}
        for sym in sorted(dist):
            idx = int(rng.integers(side_dim))
            c = np.zeros((side_dim, side_dim), dtype=complex)
            c[idx, idx] = 1.0
            conds[sym] = c
        return build_cq(dist, conds, side_dim=side_dim)
    conds = {sym: random_pure_state(side_dim, rng) for sym in sorted(dist)}
    return build_cq(dist, conds, side_dim=side_dim)


def make_markov_scenario(n: int, n_blocks: int, seed: int,
                         classical: bool = False,
                         max_side_dim: int = 2) -> MarkovScenario:
    """Random block mixture of product sources, one side register per block."""
    rng = np.random.default_rng(seed)
    weights = rng.random(n_blocks) + 0.2
    weights = tuple(float(w) for w in weights / weights.sum())
    factors = []
    for _ in range(n_blocks):
        d1 = int(rng.integers(1, max_side_dim + 1))
        d2 = int(rng.integers(1, max_side_dim + 1))
        factors.append((_random_factor(n, d1, rng, classical),
                        _random_factor(n, d2, rng, classical)))
    return MarkovScenario(weights=weights, factors=tuple(factors))
