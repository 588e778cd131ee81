"""Exact distribution of the adoption process by direct master-equation
integration over all 2^M adopter sets.

State A is the bitmask of current adopters. From A, each non-adopter j
flips independently at rate p_j + sum_{i in A} W[i, j], so the generator is
sparse: 2^M states, at most M off-diagonal entries per column. Practical up
to M around 16; hard cap 20.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp

from .curves import AdoptionCurve
from .network import Network

HARD_CAP = 20
PRACTICAL_CAP = 16

ORACLE_RTOL = 1e-11
ORACLE_ATOL = 1e-12
CONSERVATION_TOL = 1e-12


@dataclass(frozen=True)
class StateDistribution:
    """Probability vector over adopter sets (bitmask-indexed) at one time."""

    M: int
    time: float
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probabilities, dtype=float)
        if probs.shape != (1 << self.M,):
            raise ValueError(f"need 2^{self.M} entries, got shape {probs.shape}")
        if float(probs.min()) < -CONSERVATION_TOL:
            raise ValueError(f"negative probability {probs.min():.3e}")
        defect = abs(float(probs.sum()) - 1.0)
        if defect > CONSERVATION_TOL:
            raise ValueError(f"probabilities sum to 1 {defect:.3e} off")
        object.__setattr__(self, "probabilities", probs)

    def prob(self, adopters) -> float:
        """Probability that the adopter set is exactly the given one."""
        mask = 0
        for j in adopters:
            mask |= 1 << j
        return float(self.probabilities[mask])


class MasterSolution:
    """Distribution over adopter sets on a time grid; acts as a sequence of
    per-time StateDistribution snapshots.

    probs[n, A] = Prob(adopter set = A at t[n]), A a bitmask over nodes
    0..M-1 (bit j set means node j has adopted).
    """

    def __init__(self, network: Network, t: np.ndarray, probs: np.ndarray):
        self.network = network
        self.t = np.asarray(t, dtype=float)
        self.probs = np.asarray(probs, dtype=float)
        if self.probs.shape != (self.t.size, 1 << network.n):
            raise ValueError("probs must have shape (len(t), 2^M)")

    @property
    def n_nodes(self) -> int:
        return self.network.n

    def __len__(self) -> int:
        return self.t.size

    def __getitem__(self, n: int) -> StateDistribution:
        return StateDistribution(
            M=self.n_nodes, time=float(self.t[n]), probabilities=self.probs[n]
        )

    def __iter__(self):
        return (self[n] for n in range(len(self)))

    def marginals(self) -> np.ndarray:
        """Per-node adoption probabilities, shape (M, T)."""
        M = self.n_nodes
        bits = _bit_table(M)  # (2^M, M)
        return (self.probs @ bits).T

    def survival(self, nodes) -> np.ndarray:
        """Prob(no node of the set has adopted) on the grid."""
        mask = 0
        for j in nodes:
            if not 0 <= j < self.n_nodes:
                raise ValueError(f"node {j} out of range")
            mask |= 1 << j
        if mask == 0:
            raise ValueError("node set must be non-empty")
        states = np.arange(self.probs.shape[1])
        keep = (states & mask) == 0
        return self.probs[:, keep].sum(axis=1)

    def pair_survival(self, i: int, j: int) -> np.ndarray:
        return self.survival([i, j])

    def expected_fraction(self) -> np.ndarray:
        return self.marginals().mean(axis=0)

    def conservation_defect(self) -> float:
        return float(np.max(np.abs(self.probs.sum(axis=1) - 1.0)))


def _bit_table(M: int) -> np.ndarray:
    states = np.arange(1 << M, dtype=np.int64)
    return ((states[:, None] >> np.arange(M)) & 1).astype(float)


def build_generator(net: Network) -> sparse.csr_matrix:
    """Sparse generator Q with dP/dt = Q P, Q[to, from] = rate."""
    M = net.n
    if M > HARD_CAP:
        raise ValueError(f"exact oracle capped at {HARD_CAP} nodes, got {M}")
    n_states = 1 << M
    bits = _bit_table(M)  # (2^M, M), bits[A, j] = 1 iff j in A
    W = net.weight_matrix
    # rate[A, j] = p_j + sum_{i in A} W[i, j]; applies when j not in A
    rate = net.p[None, :] + bits @ W
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    states = np.arange(n_states, dtype=np.int64)
    for j in range(M):
        absent = bits[:, j] == 0
        src = states[absent]
        lam = rate[absent, j]
        rows.append(src | (1 << j))
        cols.append(src)
        vals.append(lam)
    row = np.concatenate(rows)
    col = np.concatenate(cols)
    val = np.concatenate(vals)
    Q = sparse.coo_matrix((val, (row, col)), shape=(n_states, n_states)).tocsr()
    outflow = np.asarray(Q.sum(axis=0)).ravel()
    Q = Q - sparse.diags(outflow)
    return Q.tocsr()


def solve_master(
    net: Network,
    t_grid,
    rtol: float = ORACLE_RTOL,
    atol: float = ORACLE_ATOL,
) -> MasterSolution:
    """Integrate the master equation from the all-susceptible state."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1:
        raise ValueError("t_grid must be a non-empty 1D array")
    if t_grid[0] < 0 or np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must ascend from a non-negative start")
    Q = build_generator(net)
    P0 = np.zeros(Q.shape[0])
    P0[0] = 1.0
    sol = solve_ivp(
        lambda _t, P: Q @ P,
        (0.0, float(t_grid[-1])) if t_grid[-1] > 0 else (0.0, 1.0),
        P0,
        t_eval=t_grid,
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise RuntimeError(f"master equation integration failed: {sol.message}")
    out = MasterSolution(network=net, t=t_grid, probs=sol.y.T)
    defect = out.conservation_defect()
    if defect > CONSERVATION_TOL:
        raise RuntimeError(f"probability conservation violated: defect {defect:.3e}")
    return out


@dataclass(frozen=True)
class MarginalReport:
    """Per-node adoption probabilities plus joint survivals for chosen sets."""

    t: np.ndarray
    marginals: np.ndarray
    f: np.ndarray
    survivals: dict[tuple[int, ...], np.ndarray] = field(default_factory=dict)


def exact_marginals(net: Network, t_grid) -> np.ndarray:
    return solve_master(net, t_grid).marginals()


def exact_f(net: Network, t_grid) -> AdoptionCurve:
    """Expected adopter fraction on the grid, with per-node probabilities."""
    sol = solve_master(net, t_grid)
    per_node = sol.marginals()
    return AdoptionCurve(
        t=sol.t, f=per_node.mean(axis=0), source="oracle", per_node=per_node
    )


def survival(net: Network, omega, t_grid) -> np.ndarray:
    """Prob(no node of omega has adopted by t) on the grid."""
    return solve_master(net, t_grid).survival(omega)


def marginal_report(net: Network, t_grid, omegas=()) -> MarginalReport:
    """One master solve summarised as marginals, f, and requested survivals."""
    sol = solve_master(net, t_grid)
    marg = sol.marginals()
    surv = {tuple(sorted(om)): sol.survival(om) for om in omegas}
    return MarginalReport(t=sol.t, marginals=marg, f=marg.mean(axis=0), survivals=surv)
