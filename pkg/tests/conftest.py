"""Shared hand-derived reference solutions used across test modules."""
import numpy as np


def independent_survival(t, p_vec, nodes):
    """S_Omega(t) when the network has no edges: product of e^{-p_j t}."""
    total = sum(p_vec[j] for j in nodes)
    return np.exp(-total * np.asarray(t, dtype=float))


def two_node_chain_survival(t, p1, p2, w):
    """P(X_2(t) = 0) for the two-node network with the single edge 1 -> 2 of
    weight w, by conditioning on the adoption time of node 1 (requires
    p1 != w):

        P = e^{-p2 t} [ e^{-p1 t} + p1 e^{-w t} (1 - e^{-(p1-w) t}) / (p1 - w) ].
    """
    t = np.asarray(t, dtype=float)
    if abs(p1 - w) < 1e-12:
        raise ValueError("closed form needs p1 != w")
    waited = np.exp(-p1 * t)
    fired = p1 * np.exp(-w * t) * (1.0 - np.exp(-(p1 - w) * t)) / (p1 - w)
    return np.exp(-p2 * t) * (waited + fired)


def discrete_chain_f(net, dt, n_steps):
    """Exact mean adopter fraction of the synchronous discrete-time chain
    (each non-adopter flips with probability lambda_j*dt per step), by
    dynamic programming over all 2^M adopter sets. Independent reference for
    the stochastic discrete scheme; O(3^M) per step, so keep M small."""
    M = net.n
    n_states = 1 << M
    bits = ((np.arange(n_states)[:, None] >> np.arange(M)) & 1).astype(float)
    pr = np.clip((net.p[None, :] + bits @ net.weight_matrix) * dt, 0.0, 1.0)
    probs = np.zeros(n_states)
    probs[0] = 1.0
    for _ in range(n_steps):
        nxt = np.zeros(n_states)
        for A in range(n_states):
            if probs[A] == 0.0:
                continue
            absent = [j for j in range(M) if not (A >> j) & 1]
            sub = absent
            # enumerate which subset of the absent nodes flips this step
            for mask in range(1 << len(sub)):
                w = probs[A]
                B = A
                for b, j in enumerate(sub):
                    if (mask >> b) & 1:
                        w *= pr[A, j]
                        B |= 1 << j
                    else:
                        w *= 1.0 - pr[A, j]
                nxt[B] += w
        probs = nxt
    return float((probs @ bits).mean())
