"""Check registry: one entry per verified inequality family.

A check builds deterministic scenarios from its seed, computes the exact
measured quantity, and compares it against catalog bounds or a stated
numerical slack.  Every comparison becomes
one BoundReport row; a row passes iff measured <= epsilon + 1e-9.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, asdict

import numpy as np

from ..cq_states import (
    CqState,
    apply_classical_function,
    build_cq,
    classical_state,
    distance_to_uniform,
    extractor_output_from_joint,
    extractor_output_state,
    full_alphabet,
    markov_block_state,
)
from ..entropies import h2_cond, h2_rel, h_min_cond, h_min_rel
from ..extractors import deor_extractor, ip_extractor
from ..gf2 import build_field_family, build_shift_family, gf2_matvec, gf2_rank, index_to_bits
from ..operators import (
    conditional_mutual_information,
    partial_trace,
    random_density,
    tensor,
    trace_distance,
)
from ..xor_analysis import (
    MatrixValuedFunction,
    l2_distance_to_uniform,
    measured_xor_bound,
    mvf_fourier,
    mvf_l2_norm,
    pgm,
    squared_distance_fourier_bound,
)
from .bounds import base_exponent, bound_value
from .scenarios import (
    _random_distribution,
    make_flat_source,
    make_markov_scenario,
    make_side_info,
)

PASS_TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    check_id: str
    bound_id: str
    params: dict
    measured_delta: float
    bound_epsilon: float
    passed: bool
    runtime_ms: float
    scenario: str
    flags: dict

    def as_row(self) -> dict:
        row = asdict(self)
        row["pass"] = row.pop("passed")
        return row


def _report(check_id, bound_id, params, measured, epsilon, runtime_ms, scenario, flags=None):
    return BoundReport(
        check_id=check_id,
        bound_id=bound_id,
        params=dict(params),
        measured_delta=float(measured),
        bound_epsilon=float(epsilon),
        passed=bool(measured <= epsilon + PASS_TOL),
        runtime_ms=float(runtime_ms),
        scenario=scenario,
        flags=dict(flags or {}),
    )


def _family(kind: str, n: int, m: int, cache={}):
    key = (kind, n, m)
    if key not in cache:
        cache[key] = build_field_family(n, m) if kind == "field" else build_shift_family(n, m)
    return cache[key]


def _k_params(n, m, r, k1, k2):
    # + 0.0 normalizes -0.0 so serialized reports are visually clean
    return {"n": n, "m": m, "r": r,
            "k1": max(float(k1), 0.0) + 0.0, "k2": max(float(k2), 0.0) + 0.0}


def _random_cq(n_bits: int, dim: int, rng: np.random.Generator, min_support: int = 1) -> CqState:
    dist = _random_distribution(n_bits, rng, min_support=min_support)
    if dim == 1:
        return classical_state(dist)
    conds = {sym: random_density(dim, rng) for sym in sorted(dist)}
    return build_cq(dist, conds, side_dim=dim)


# ---------------------------------------------------------------------------
# Extractor bound checks
# ---------------------------------------------------------------------------

def check_b1_exhaustive(params: dict, seed: int) -> list[BoundReport]:
    """Exhaustive prefix-flat grid for the exact product-type bound."""
    ns = tuple(params.get("ns", (3, 4)))
    ms = tuple(params.get("ms", (1, 2)))
    families = tuple(params.get("families", ("field", "shift")))
    sides = tuple(params.get("sides", ("trivial", "classical_leak")))
    bounds = tuple(params.get("bounds", ("B1",)))
    strong_in = params.get("strong_in", "x1")
    reports = []
    idx = 0
    for kind in families:
        for n in ns:
            for m in ms:
                fam = _family(kind, n, m)
                ext = deor_extractor(fam)
                for side in sides:
                    for k1 in range(n + 1):
                        s1 = make_side_info(side, make_flat_source(n, k1))
                        for k2 in range(n + 1):
                            t0 = time.perf_counter()
                            s2 = make_side_info(side, make_flat_source(n, k2))
                            out = extractor_output_state(ext, s1.state, s2.state, strong_in)
                            delta = distance_to_uniform(out, 1 << m, strong=True)
                            dt = (time.perf_counter() - t0) * 1e3
                            p = _k_params(n, m, fam.r, s1.k, s2.k)
                            scen = (f"s{idx:05d} {kind} n={n} m={m} side={side} "
                                    f"flat=({k1},{k2})")
                            for b in bounds:
                                reports.append(_report("b1-exhaustive-flat", b, p, delta,
                                                       bound_value(b, p), dt, scen))
                            idx += 1
    return reports


def _random_source(n: int, rng: np.random.Generator):
    k_target = int(rng.integers(max(1, n - 2), n + 1))
    rule = "prefix" if rng.random() < 0.5 else "random"
    dist = make_flat_source(n, k_target, rule, seed=int(rng.integers(2 ** 31)))
    model = "bb84" if rng.random() < 0.5 else "random_pure"
    if model == "bb84":
        kw = {"bits": int(rng.integers(1, 3))}
    else:
        kw = {"dim": int(rng.integers(2, 5))}
    return make_side_info(model, dist, seed=int(rng.integers(2 ** 31)), **kw)


def check_b1_quantum(params: dict, seed: int) -> list[BoundReport]:
    """Randomized quantum product-type scenarios with solver-certified entropies."""
    count = int(params.get("count", 200))
    n_min = int(params.get("n_min", 3))
    n_max = int(params.get("n_max", 5))
    m_max = int(params.get("m_max", 3))
    bounds = tuple(params.get("bounds", ("B1", "B6", "B3", "B4")))
    strong_in = params.get("strong_in", "x1")
    rng = np.random.default_rng(seed)
    reports = []
    for idx in range(count):
        t0 = time.perf_counter()
        n = int(rng.integers(n_min, n_max + 1))
        m = int(rng.integers(1, min(m_max, n) + 1))
        kind = "field" if rng.random() < 0.5 else "shift"
        fam = _family(kind, n, m)
        ext = deor_extractor(fam)
        s1 = _random_source(n, rng)
        s2 = _random_source(n, rng)
        out = extractor_output_state(ext, s1.state, s2.state, strong_in)
        delta = distance_to_uniform(out, 1 << m, strong=True)
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(n, m, fam.r, s1.k, s2.k)
        scen = f"s{idx:05d} {kind} n={n} m={m} sides=({s1.model},{s2.model})"
        flags = {"converged1": s1.flags.get("converged", True),
                 "converged2": s2.flags.get("converged", True)}
        for b in bounds:
            reports.append(_report("b1-quantum-product", b, p, delta,
                                   bound_value(b, p), dt, scen, flags))
    return reports


def check_b8_weak(params: dict, seed: int) -> list[BoundReport]:
    """Weak-output variant: same pipeline with no copied source register."""
    count = int(params.get("count", 50))
    n_max = int(params.get("n_max", 4))
    rng = np.random.default_rng(seed)
    reports = []
    for idx in range(count):
        t0 = time.perf_counter()
        n = int(rng.integers(3, n_max + 1))
        m = int(rng.integers(1, min(2, n) + 1))
        kind = "field" if rng.random() < 0.5 else "shift"
        fam = _family(kind, n, m)
        ext = deor_extractor(fam)
        s1 = _random_source(n, rng)
        s2 = _random_source(n, rng)
        out = extractor_output_state(ext, s1.state, s2.state, None)
        delta = distance_to_uniform(out, 1 << m, strong=False)
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(n, m, fam.r, s1.k, s2.k)
        scen = f"s{idx:05d} {kind} n={n} m={m} weak"
        reports.append(_report("b8-weak-quantum", "B8", p, delta,
                               bound_value("B8", p), dt, scen))
    return reports


def check_b2_markov(params: dict, seed: int) -> list[BoundReport]:
    """Markov block scenarios against the Markov-model bound family."""
    count = int(params.get("count", 40))
    n_min = int(params.get("n_min", 2))
    n_max = int(params.get("n_max", 4))
    bounds = tuple(params.get("bounds", ("B2", "B5", "B10", "B11")))
    rng = np.random.default_rng(seed)
    reports = []
    for idx in range(count):
        t0 = time.perf_counter()
        n = int(rng.integers(n_min, n_max + 1))
        m = int(rng.integers(1, min(2, n) + 1))
        kind = "field" if rng.random() < 0.5 else "shift"
        classical = bool(rng.random() < 0.5)
        fam = _family(kind, n, m)
        ext = deor_extractor(fam)
        scn = make_markov_scenario(n, int(rng.integers(2, 4)),
                                   seed=int(rng.integers(2 ** 31)),
                                   classical=classical)
        joint = markov_block_state(scn)
        marg1 = apply_classical_function(joint, lambda sym: sym[0])
        marg2 = apply_classical_function(joint, lambda sym: sym[1])
        res1, res2 = h_min_cond(marg1), h_min_cond(marg2)
        out = extractor_output_from_joint(ext, joint, "x1")
        delta = distance_to_uniform(out, 1 << m, strong=True)
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(n, m, fam.r, res1.value, res2.value)
        model = "classical-markov" if classical else "quantum-markov"
        scen = f"s{idx:05d} {kind} n={n} m={m} {model} blocks={len(scn.weights)}"
        flags = {"converged1": res1.converged, "converged2": res2.converged}
        for b in bounds:
            reports.append(_report("b2-markov", b, p, delta,
                                   bound_value(b, p), dt, scen, flags))
    return reports


def check_ip_classical(params: dict, seed: int) -> list[BoundReport]:
    """Exhaustive flat grid for the inner-product extractor."""
    ns = tuple(params.get("ns", (2, 3, 4)))
    sides = tuple(params.get("sides", ("trivial", "classical_leak")))
    reports = []
    idx = 0
    for n in ns:
        ext = ip_extractor(n)
        for side in sides:
            for k1 in range(n + 1):
                s1 = make_side_info(side, make_flat_source(n, k1))
                for k2 in range(n + 1):
                    t0 = time.perf_counter()
                    s2 = make_side_info(side, make_flat_source(n, k2))
                    out = extractor_output_state(ext, s1.state, s2.state, "x1")
                    delta = distance_to_uniform(out, 2, strong=True)
                    dt = (time.perf_counter() - t0) * 1e3
                    p = _k_params(n, 1, 0, s1.k, s2.k)
                    scen = f"s{idx:05d} ip n={n} side={side} flat=({k1},{k2})"
                    reports.append(_report("ip-classical", "B7", p, delta,
                                           bound_value("B7", p), dt, scen))
                    idx += 1
    return reports


# ---------------------------------------------------------------------------
# Markov structure and identity checks
# ---------------------------------------------------------------------------

def _dense_tripartite(joint: CqState, n1: int, n2: int):
    a1 = full_alphabet(n1)
    a2 = full_alphabet(n2)
    d = joint.side_dim
    dim = len(a1) * len(a2) * d
    out = np.zeros((dim, dim), dtype=complex)
    for i1, x1 in enumerate(a1):
        for i2, x2 in enumerate(a2):
            block = joint.blocks.get((x1, x2))
            if block is not None:
                lo = (i1 * len(a2) + i2) * d
                out[lo:lo + d, lo:lo + d] = block
    return out, (len(a1), len(a2), d)


def check_markov_cmi(params: dict, seed: int) -> list[BoundReport]:
    """Conditional mutual information of constructed Markov block states."""
    count = int(params.get("count", 100))
    rng = np.random.default_rng(seed)
    reports = []
    for idx in range(count):
        t0 = time.perf_counter()
        n = int(rng.integers(1, 3))
        classical = bool(rng.random() < 0.3)
        scn = make_markov_scenario(n, int(rng.integers(2, 4)),
                                   seed=int(rng.integers(2 ** 31)),
                                   classical=classical)
        joint = markov_block_state(scn)
        dense, dims = _dense_tripartite(joint, n, n)
        cmi = conditional_mutual_information(dense, dims)
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(n, 1, 0, 0.0, 0.0)
        scen = f"s{idx:05d} markov-cmi n={n} blocks={len(scn.weights)} side={joint.side_dim}"
        reports.append(_report("markov-cmi", "cmi-zero", p, cmi, 0.0, dt, scen))
    return reports


def check_measured_xor(params: dict, seed: int) -> list[BoundReport]:
    """Distance to uniform against the masked-bit measured bound."""
    count = int(params.get("count", 1000))
    m_max = int(params.get("m_max", 2))
    dim_max = int(params.get("dim_max", 3))
    rng = np.random.default_rng(seed)
    reports = []
    for idx in range(count):
        t0 = time.perf_counter()
        m = int(rng.integers(1, m_max + 1))
        dim = int(rng.integers(1, dim_max + 1))
        state = _random_cq(m, dim, rng)
        lhs = distance_to_uniform(state, 1 << m, strong=False)
        rhs = measured_xor_bound(state)
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(max(m, 1), m, 0, 0.0, 0.0)
        scen = f"s{idx:05d} xor m={m} dim={dim}"
        reports.append(_report("measured-xor-random", "measured-xor", p, lhs, rhs, dt, scen))
    return reports


def check_useful_prop(params: dict, seed: int) -> list[BoundReport]:
    """Squared distance against the Fourier-side bound for arbitrary sigma."""
    count = int(params.get("count", 1000))
    rng = np.random.default_rng(seed)
    reports = []
    for idx in range(count):
        t0 = time.perf_counter()
        m = int(rng.integers(1, 3))
        dim = int(rng.integers(1, 4))
        state = _random_cq(m, dim, rng)
        sigma = random_density(dim, rng)
        lhs = distance_to_uniform(state, 1 << m, strong=False) ** 2
        rhs = squared_distance_fourier_bound(state, sigma)
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(max(m, 1), m, 0, 0.0, 0.0)
        scen = f"s{idx:05d} fourier m={m} dim={dim}"
        reports.append(_report("useful-prop-random", "fourier-rhs", p, lhs, rhs, dt, scen))
    return reports


def check_parseval(params: dict, seed: int) -> list[BoundReport]:
    """Norm preservation of the matrix-valued transform."""
    count = int(params.get("count", 100))
    rng = np.random.default_rng(seed)
    reports = []
    for idx in range(count):
        t0 = time.perf_counter()
        m = int(rng.integers(1, 4))
        d = int(rng.integers(1, 5))
        values = rng.standard_normal((1 << m, d, d)) + 1j * rng.standard_normal((1 << m, d, d))
        mvf = MatrixValuedFunction(m=m, d=d, values=values)
        dev = abs(mvf_l2_norm(mvf_fourier(mvf)) - mvf_l2_norm(mvf))
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(max(m, 1), m, 0, 0.0, 0.0)
        scen = f"s{idx:05d} parseval m={m} d={d}"
        reports.append(_report("parseval-random", "parseval", p, dev, 0.0, dt, scen))
    return reports


def check_pgm_commutation(params: dict, seed: int) -> list[BoundReport]:
    """Measurement-then-relabel equals relabel-then-measurement, elementwise."""
    count = int(params.get("count", 200))
    rng = np.random.default_rng(seed)
    reports = []
    for idx in range(count):
        t0 = time.perf_counter()
        n_bits = int(rng.integers(1, 4))
        dim = int(rng.integers(2, 5))
        state = _random_cq(n_bits, dim, rng, min_support=2)
        out_bits = int(rng.integers(1, 3))
        table = {sym: index_to_bits(int(rng.integers(1 << out_bits)), out_bits)
                 for sym in state.symbols()}
        fn = lambda sym, table=table: table[sym]
        lhs = pgm(apply_classical_function(state, fn))
        rhs_elements = {}
        base = pgm(state)
        for sym, el in base.elements.items():
            y = fn(sym)
            rhs_elements[y] = rhs_elements.get(y, 0) + el
        dev = max(float(np.max(np.abs(lhs.elements[y] - rhs_elements[y])))
                  for y in lhs.elements)
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(max(n_bits, 1), out_bits, 0, 0.0, 0.0)
        scen = f"s{idx:05d} pgm-commute n={n_bits} dim={dim} out={out_bits}"
        reports.append(_report("pgm-commutation", "channel-equality", p, dev, 0.0,
                               dt, scen, {"criterion_tol": 1e-10}))
    return reports


def check_hmin_linear_drop(params: dict, seed: int) -> list[BoundReport]:
    """Entropy decrease under GF(2) maps bounded by the rank deficiency."""
    exhaustive_n = int(params.get("exhaustive_n", 3))
    random_ns = tuple(params.get("random_ns", (4, 5, 6)))
    per_n = int(params.get("per_n", 25))
    slack = 1e-6
    rng = np.random.default_rng(seed)
    reports = []
    idx = 0

    def run_case(state, base, mat, n, label):
        nonlocal idx
        t0 = time.perf_counter()
        mapped = apply_classical_function(state, lambda x, mat=mat: gf2_matvec(mat, x))
        lifted = h_min_cond(mapped)
        r = n - gf2_rank(mat)
        measured = (base.value - r) - lifted.value
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(n, 1, min(r, n - 1), base.value, lifted.value)
        scen = f"s{idx:05d} linear-drop {label} n={n} r={r}"
        flags = {"converged": base.converged and lifted.converged}
        reports.append(_report("hmin-linear-drop", "rank-drop", p, measured, slack,
                               dt, scen, flags))
        idx += 1

    n = exhaustive_n
    states = [
        _random_cq(n, 2, rng, min_support=2),
        classical_state(make_flat_source(n, n - 1, "random", seed=int(rng.integers(2 ** 31)))),
    ]
    bases = [h_min_cond(s) for s in states]
    for mat_idx in range(1 << (n * n)):
        mat = np.array(index_to_bits(mat_idx, n * n), dtype=np.uint8).reshape(n, n)
        pick = mat_idx % len(states)
        run_case(states[pick], bases[pick], mat, n, "exhaustive")
    for n in random_ns:
        state = _random_cq(n, int(rng.integers(1, 4)), rng, min_support=2)
        base = h_min_cond(state)
        for _ in range(per_n):
            mat = np.array(rng.integers(0, 2, size=(n, n)), dtype=np.uint8)
            run_case(state, base, mat, n, "random")
    return reports


def check_hmin_le_h2(params: dict, seed: int) -> list[BoundReport]:
    """Min-entropy below collision entropy, relative and optimized."""
    count = int(params.get("count", 500))
    slack = 1e-6
    rng = np.random.default_rng(seed)
    reports = []
    for idx in range(count):
        t0 = time.perf_counter()
        n_bits = int(rng.integers(1, 4))
        dim = int(rng.integers(1, 4))
        state = _random_cq(n_bits, dim, rng)
        sigma = random_density(dim, rng) if dim > 1 else np.ones((1, 1), dtype=complex)
        rel_gap = h_min_rel(state, sigma) - h2_rel(state, sigma)
        opt_gap = h_min_cond(state).value - h2_cond(state).value
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(max(n_bits, 1), 1, 0, 0.0, 0.0)
        scen = f"s{idx:05d} entropy-order n={n_bits} dim={dim}"
        reports.append(_report("hmin-le-h2", "relative", p, rel_gap, slack,
                               dt / 2, scen))
        reports.append(_report("hmin-le-h2", "optimized", p, opt_gap, slack,
                               dt / 2, scen))
    return reports


def check_one_two_norm(params: dict, seed: int) -> list[BoundReport]:
    """Trace distance bounded through the conjugated 2-distance."""
    count = int(params.get("count", 500))
    rng = np.random.default_rng(seed)
    reports = []
    for idx in range(count):
        t0 = time.perf_counter()
        dim_a = int(rng.integers(2, 5))
        dim_b = int(rng.integers(2, 5))
        rho = random_density(dim_a * dim_b, rng)
        sigma = random_density(dim_b, rng) * float(rng.uniform(0.5, 2.0))
        rho_b = partial_trace(rho, (dim_a, dim_b), keep=(1,))
        delta = trace_distance(rho, tensor(np.eye(dim_a) / dim_a, rho_b), check_trace=False)
        rhs = 0.5 * np.sqrt(dim_a * np.trace(sigma).real
                            * l2_distance_to_uniform(rho, dim_a, sigma))
        dt = (time.perf_counter() - t0) * 1e3
        p = _k_params(dim_a, 1, 0, 0.0, 0.0)
        scen = f"s{idx:05d} one-two-norm dims=({dim_a},{dim_b})"
        reports.append(_report("one-two-norm", "two-norm-rhs", p, delta, rhs, dt, scen))
    return reports


def check_bound_ordering(params: dict, seed: int) -> list[BoundReport]:
    """Pointwise comparison of the exact bound against the generic lifts."""
    count = int(params.get("count", 10000))
    rng = np.random.default_rng(seed)
    reports = []
    made = 0
    while made < count:
        n = int(rng.integers(2, 25))
        m = int(rng.integers(1, min(8, n) + 1))
        r = int(rng.integers(0, min(m, n - 1) + 1)) if n > 1 else 0
        k1 = float(rng.uniform(0, n))
        k2 = float(rng.uniform(0, n))
        p = _k_params(n, m, r, k1, k2)
        if base_exponent(n, m, r, k1, k2) < 0:
            continue
        b1 = bound_value("B1", p)
        scen = f"s{made:05d} ordering n={n} m={m} r={r}"
        for other in ("B6", "B4"):
            reports.append(_report("bound-ordering", other, p, b1,
                                   bound_value(other, p), 0.0, scen))
        made += 1
    return reports


CHECKS = {
    "b1-exhaustive-flat": check_b1_exhaustive,
    "b1-quantum-product": check_b1_quantum,
    "b8-weak-quantum": check_b8_weak,
    "b2-markov": check_b2_markov,
    "ip-classical": check_ip_classical,
    "markov-cmi": check_markov_cmi,
    "measured-xor-random": check_measured_xor,
    "useful-prop-random": check_useful_prop,
    "parseval-random": check_parseval,
    "pgm-commutation": check_pgm_commutation,
    "hmin-linear-drop": check_hmin_linear_drop,
    "hmin-le-h2": check_hmin_le_h2,
    "one-two-norm": check_one_two_norm,
    "bound-ordering": check_bound_ordering,
}

CHECK_IDS = tuple(sorted(CHECKS))


def run_check(check_id: str, config: dict | None = None) -> list[BoundReport]:
    """Run one registered check; deterministic given (params, seed)."""
    if check_id not in CHECKS:
        raise KeyError(f"unknown check {check_id!r}; known: {', '.join(CHECK_IDS)}")
    config = dict(config or {})
    params = dict(config.get("params", {}))
    seed = int(config.get("seed", 0))
    repetitions = int(config.get("repetitions", 1))
    reports: list[BoundReport] = []
    for rep in range(repetitions):
        rep_seed = seed if repetitions == 1 else seed + 10007 * rep
        reports.extend(CHECKS[check_id](params, rep_seed))
    return reports
