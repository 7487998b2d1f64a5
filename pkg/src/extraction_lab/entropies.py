"""Min-entropy and collision entropy, relative and optimized, base 2.

The relative quantities H_min(rho|sigma) and H_2(rho|sigma) are exact
spectral evaluations.  The optimized quantities sup_sigma are computed by
deterministic solvers that only ever return *achieved* values: every
candidate sigma is an explicit density operator, so the reported entropy
is a sound lower bound on the true supremum regardless of convergence.

For H_min the solver iterates a discrimination-measurement fixed point
and extracts a feasible dual certificate (an operator dominating every
conditional block); the gap between the certificate and the primal
success probability bounds the distance to the true supremum and is
reported on the result.  Classical side information is handled by exact
closed forms.  Kernel violations return -inf, mirroring the definition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cq_states import CqState, marginal_side
from .operators import eigh, op_power, tensor

NEG_INF = float("-inf")
KERNEL_LEAK_ATOL = 1e-9
DIAG_ATOL = 1e-12
SOLVER_SIDE_CAP = 16


def h_min_classical(dist: dict) -> float:
    """Min-entropy -log2 max_x P(x) of a classical distribution."""
    probs = list(dist.values())
    if not probs or any(p < -1e-12 for p in probs) or abs(sum(probs) - 1.0) > 1e-9:
        raise ValueError("not a probability distribution")
    return -float(np.log2(max(probs)))


def _kernel_projector(sigma: np.ndarray) -> np.ndarray:
    w, v = eigh(sigma)
    thresh = 1e-10 * max(float(w[-1]), 0.0) if w.size else 0.0
    dead = v[:, w <= thresh]
    return dead @ dead.conj().T


def _kernel_ok(block: np.ndarray, proj_kernel: np.ndarray) -> bool:
    leak = float(np.trace(proj_kernel @ block @ proj_kernel).real)
    return leak <= KERNEL_LEAK_ATOL


def _max_eig(h: np.ndarray) -> float:
    hs = 0.5 * (h + h.conj().T)
    return float(np.linalg.eigvalsh(hs)[-1])


def h_min_rel(rho, sigma, dim_a: int | None = None) -> float:
    """H_min of rho relative to sigma; -inf when ker(sigma) leaks into rho.

    ``rho`` is a CqState (evaluated block by block) or a dense bipartite
    operator, in which case ``dim_a`` gives the classical/first dimension.
    """
    sig = np.asarray(sigma, dtype=complex)
    if isinstance(rho, CqState):
        proj = _kernel_projector(sig)
        inv_sqrt = op_power(sig, -0.5, "pseudo")
        worst = 0.0
        for sym in rho.symbols():
            block = rho.blocks[sym]
            if not _kernel_ok(block, proj):
                return NEG_INF
            worst = max(worst, _max_eig(inv_sqrt @ block @ inv_sqrt))
        return -float(np.log2(worst))
    if dim_a is None:
        raise ValueError("dense input requires dim_a")
    mat = np.asarray(rho, dtype=complex)
    big_proj = tensor(np.eye(dim_a), _kernel_projector(sig))
    if float(np.trace(big_proj @ mat @ big_proj).real) > KERNEL_LEAK_ATOL:
        return NEG_INF
    big_inv = tensor(np.eye(dim_a), op_power(sig, -0.5, "pseudo"))
    return -float(np.log2(_max_eig(big_inv @ mat @ big_inv)))


def h2_rel(rho: CqState, sigma) -> float:
    """Collision entropy of a cq-state relative to sigma (blockwise form)."""
    sig = np.asarray(sigma, dtype=complex)
    proj = _kernel_projector(sig)
    quarter = op_power(sig, -0.25, "pseudo")
    total = rho.total_trace()
    acc = 0.0
    for sym in rho.symbols():
        block = rho.blocks[sym]
        if not _kernel_ok(block, proj):
            return NEG_INF
        conj = quarter @ block @ quarter
        acc += float(np.trace(conj @ conj).real)
    return -float(np.log2(acc / total))


@dataclass(frozen=True)
class EntropyResult:
    value: float
    sigma: np.ndarray
    converged: bool
    gap: float
    iterations: int


def _is_classical(state: CqState) -> bool:
    for block in state.blocks.values():
        off = block - np.diag(np.diag(block))
        if block.shape[0] > 1 and np.max(np.abs(off)) > DIAG_ATOL:
            return False
    return True


def _classical_h_min(state: CqState) -> EntropyResult:
    diags = np.array([np.diag(state.blocks[s]).real for s in state.symbols()])
    per_b = diags.max(axis=0)
    p_guess = float(per_b.sum())
    sigma = np.diag(per_b / p_guess).astype(complex)
    return EntropyResult(-float(np.log2(p_guess)), sigma, True, 0.0, 0)


def _classical_h2(state: CqState) -> EntropyResult:
    diags = np.array([np.diag(state.blocks[s]).real for s in state.symbols()])
    roots = np.sqrt((diags ** 2).sum(axis=0))
    z = float(roots.sum())
    sigma = np.diag(roots / z).astype(complex)
    return EntropyResult(-2.0 * float(np.log2(z)), sigma, True, 0.0, 0)


def _support_basis(rho_b: np.ndarray) -> np.ndarray:
    w, v = eigh(rho_b)
    thresh = 1e-12 * max(float(w[-1]), 0.0)
    return v[:, w > thresh]


def _herm(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def h_min_cond(state: CqState, iters: int = 500, tol: float = 1e-8) -> EntropyResult:
    """Conditional min-entropy sup_sigma H_min(rho|sigma).

    Exact for classical side registers; otherwise a measurement fixed
    point with a dual certificate.  ``result.gap`` bounds the shortfall
    to the true supremum in bits.
    """
    if state.side_dim > SOLVER_SIDE_CAP:
        raise ValueError(f"side_dim {state.side_dim} exceeds solver cap {SOLVER_SIDE_CAP}")
    if _is_classical(state):
        return _classical_h_min(state)
    return _h_min_solver(state, iters, tol)


def _h_min_solver(state: CqState, iters: int, tol: float) -> EntropyResult:
    rho_b = marginal_side(state)
    basis = _support_basis(rho_b)
    d = state.side_dim
    proj_blocks = [basis.conj().T @ state.blocks[s] @ basis for s in state.symbols()]
    k = basis.shape[1]
    povm = [np.eye(k, dtype=complex) / len(proj_blocks) for _ in proj_blocks]
    eye = np.eye(k, dtype=complex)

    best_ub = float("inf")
    best_y = eye.copy()
    best_pri = 0.0
    iterations = 0
    for it in range(iters):
        iterations = it + 1
        y0 = _herm(sum(lam @ blk for lam, blk in zip(povm, proj_blocks)))
        mu = max(_max_eig(blk - y0) for blk in proj_blocks)
        y = y0 + max(mu, 0.0) * eye
        ub = float(np.trace(y).real)
        pri = float(sum(np.trace(lam @ blk).real for lam, blk in zip(povm, proj_blocks)))
        best_pri = max(best_pri, pri)
        if ub < best_ub:
            best_ub, best_y = ub, y
        if best_ub - best_pri <= tol * max(best_ub, 1e-300):
            break
        g = _herm(sum(blk @ lam @ blk for lam, blk in zip(povm, proj_blocks)))
        g_inv_sqrt = op_power(g, -0.5, "pseudo")
        povm = [_herm(g_inv_sqrt @ blk @ lam @ blk @ g_inv_sqrt)
                for lam, blk in zip(povm, proj_blocks)]

    sigma_y = basis @ (best_y / np.trace(best_y).real) @ basis.conj().T
    candidates = [sigma_y, rho_b, np.eye(d, dtype=complex) / d]
    scored = [(h_min_rel(state, s), s) for s in candidates]
    value, sigma = max(scored, key=lambda t: t[0])
    upper = -float(np.log2(best_pri)) if best_pri > 0 else float("inf")
    gap = max(upper - value, 0.0)
    return EntropyResult(value, sigma, gap <= 1e-6, gap, iterations)


def h2_cond(state: CqState, iters: int = 500, tol: float = 1e-8) -> EntropyResult:
    """Conditional collision entropy sup_sigma H_2(rho|sigma).

    Exact for classical side registers; otherwise a stationarity fixed
    point on sigma with keep-best iterates and deterministic restarts.
    The min-entropy solver's sigma is included as a candidate so that
    h2_cond >= h_min_cond holds structurally.
    """
    if state.side_dim > SOLVER_SIDE_CAP:
        raise ValueError(f"side_dim {state.side_dim} exceeds solver cap {SOLVER_SIDE_CAP}")
    if _is_classical(state):
        return _classical_h2(state)

    rho_b = marginal_side(state)
    basis = _support_basis(rho_b)
    k = basis.shape[1]
    proj_state = CqState(
        side_dim=k,
        blocks={s: basis.conj().T @ state.blocks[s] @ basis for s in state.symbols()},
    )
    proj_rho_b = marginal_side(proj_state)
    hmin = _h_min_solver(state, iters, tol)
    starts = [
        proj_rho_b / np.trace(proj_rho_b).real,
        np.eye(k, dtype=complex) / k,
        basis.conj().T @ hmin.sigma @ basis / max(np.trace(basis.conj().T @ hmin.sigma @ basis).real, 1e-300),
    ]
    blocks = [proj_state.blocks[s] for s in proj_state.symbols()]

    best_val = NEG_INF
    best_sigma = starts[0]
    iterations = 0
    for sigma in starts:
        prev = NEG_INF
        for it in range(iters):
            iterations += 1
            val = h2_rel(proj_state, sigma)
            if val > best_val:
                best_val, best_sigma = val, sigma
            if val != NEG_INF and abs(val - prev) <= 1e-13:
                break
            prev = val
            tau = op_power(sigma, -0.5, "pseudo")
            phi = _herm(sum(b @ tau @ b for b in blocks))
            prop = op_power(phi, 2.0 / 3.0, "pseudo")
            tr = float(np.trace(prop).real)
            if tr <= 0:
                break
            sigma = _herm(0.5 * sigma + 0.5 * prop / tr)

    sigma_full = basis @ best_sigma @ basis.conj().T
    value = h2_rel(state, sigma_full)
    converged = value >= hmin.value - 1e-9 and np.isfinite(value)
    return EntropyResult(value, sigma_full, converged, max(hmin.value - value, 0.0), iterations)
