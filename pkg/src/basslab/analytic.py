"""Exact and semi-analytic adoption curves for the 1D topologies.

The workhorse objects are the block-survival probabilities S_k(t;M): the
probability that k fixed adjacent circle nodes are all non-adopters at time
t. They satisfy a closed lower-bidiagonal linear ODE system

    S_k' = -(k p + q) S_k + q S_{k+1},   k = 1..M-1,
    S_M' = -M p S_M,

with S_k(0) = 1, and (away from the resonances q = jp) the closed form

    S_1(t;M) = sum_{k=1}^{M-1} A_{k,M} e^{-(kp+q)t} + B_M e^{-Mpt}.

Everything else (lines, hybrid, diagnostics) is assembled from S_k.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

# Degeneracy detection: the closed form excludes q = jp, j = 1..M-1.
DEGENERACY_TOL = 1e-9
# Coefficient recursion cancels catastrophically for large M; beyond this the
# ODE hierarchy (exactly equivalent) is used.
CLOSED_FORM_MAX_M = 30
# Adaptive Runge-Kutta tolerances for all linear systems here.
ODE_RTOL = 1e-10
ODE_ATOL = 1e-12


class DegenerateParameters(ValueError):
    """q is within tolerance of jp for some j < M, so the closed-form
    coefficients are singular; use the ODE hierarchy instead."""


def _check_pq(p: float, q: float) -> None:
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    if q < 0:
        raise ValueError(f"q must be non-negative, got {q}")


def is_degenerate(p: float, q: float, M: int) -> bool:
    """True if q is within tolerance of jp for some j in 1..M-1."""
    _check_pq(p, q)
    tol = DEGENERACY_TOL * max(p, q)
    return any(abs(q - j * p) < tol for j in range(1, M))


@dataclass(frozen=True)
class CircleCoefficients:
    """Closed-form exponent coefficients for S_1(t;M) on the circle.

    A has length M-1 (A[k-1] multiplies e^{-(kp+q)t}); B multiplies
    e^{-Mpt}. c[m-1] is the size-(M-m+1) leading coefficient A_{1,M-m+1},
    related to A by A_{m,M} = (-q)^{m-1} / ((m-1)! p^{m-1}) * c_m.
    """

    M: int
    p: float
    q: float
    A: np.ndarray
    B: float
    c: np.ndarray

    def normalization_defect(self) -> float:
        return abs(float(np.sum(self.A)) + self.B - 1.0)


def circle_coefficients(p: float, q: float, M: int) -> CircleCoefficients:
    _check_pq(p, q)
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if M > CLOSED_FORM_MAX_M:
        raise ValueError(
            f"closed form capped at M <= {CLOSED_FORM_MAX_M} (got {M}); use the ODE hierarchy"
        )
    if is_degenerate(p, q, M):
        raise DegenerateParameters(f"q={q} is within tolerance of a multiple of p={p} below M={M}")
    if M == 1:
        return CircleCoefficients(M=1, p=p, q=q, A=np.zeros(0), B=1.0, c=np.zeros(0))
    # Forward recursion over sizes 2..M. A1_by_size[m] = A_{1,m} feeds the c
    # array; each size's A vector comes from the previous size's.
    A_prev: list[float] = []
    B_prev = 1.0
    A1_by_size: dict[int, float] = {}
    A_cur: list[float] = []
    B_cur = 1.0
    for m in range(2, M + 1):
        denom = q - (m - 1) * p
        B_cur = q * B_prev / denom
        A_cur = [0.0] * (m - 1)
        A_cur[0] = 1.0 + (q / p) * sum(A_prev[k - 1] / k for k in range(1, m - 1)) - q * B_prev / denom
        for k in range(2, m):
            A_cur[k - 1] = -q * A_prev[k - 2] / ((k - 1) * p)
        A1_by_size[m] = A_cur[0]
        A_prev, B_prev = A_cur, B_cur
    c = np.array([A1_by_size[M - m + 1] for m in range(1, M)])
    return CircleCoefficients(M=M, p=p, q=q, A=np.asarray(A_cur), B=B_cur, c=c)


def survival_circle_closed_form(t, p: float, q: float, M: int) -> np.ndarray:
    """S_1(t;M) on the circle via the explicit exponent sum.

    Raises DegenerateParameters when q is within tolerance of jp (j < M).
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    coef = circle_coefficients(p, q, M)
    S = coef.B * np.exp(-M * p * t)
    for k in range(1, M):
        S = S + coef.A[k - 1] * np.exp(-(k * p + q) * t)
    return S


@dataclass(frozen=True)
class SurvivalSeries:
    """Block survival probabilities S_k(t;M), k = 1..M, on a time grid.

    values[k-1] is the S_k row. The sided tag records which edge-weight
    convention the coefficients were assembled from (the resulting system is
    the same either way: the two q/2 boundary contributions of a two-sided
    block sum to q).
    """

    M: int
    sided: str
    t: np.ndarray
    values: np.ndarray

    def s(self, k: int) -> np.ndarray:
        if not 1 <= k <= self.M:
            raise ValueError(f"k must be in 1..{self.M}, got {k}")
        return self.values[k - 1]


def _hierarchy_matrix(p: float, q: float, M: int, sided: str = "one") -> np.ndarray:
    """Coefficient matrix of the S_k hierarchy, assembled from the sided
    edge weights: a block of k adjacent nodes is fed by 1 outside neighbor
    at weight q (one-sided) or 2 at q/2 (two-sided)."""
    if sided not in ("one", "two"):
        raise ValueError(f"sided must be 'one' or 'two', got {sided!r}")
    boundary_feeds = 1 if sided == "one" else 2
    w_edge = q if sided == "one" else q / 2
    total = boundary_feeds * w_edge
    L = np.zeros((M, M))
    for k in range(1, M + 1):
        if k < M:
            L[k - 1, k - 1] = -(k * p + total)
            L[k - 1, k] = total
        else:
            L[k - 1, k - 1] = -M * p
    return L


def survival_circle_ode(
    t_grid,
    p: float,
    q: float,
    M: int,
    sided: str = "one",
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
) -> SurvivalSeries:
    """Integrate the S_k hierarchy on a grid; valid for all (p, q)."""
    _check_pq(p, q)
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    t_grid = np.asarray(t_grid, dtype=float)
    L = _hierarchy_matrix(p, q, M, sided)
    sol = solve_ivp(
        lambda _t, y: L @ y,
        (0.0, float(t_grid[-1])) if t_grid[-1] > 0 else (0.0, 1.0),
        np.ones(M),
        t_eval=t_grid,
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise RuntimeError(f"hierarchy integration failed: {sol.message}")
    return SurvivalSeries(M=M, sided=sided, t=t_grid, values=sol.y)


def survival_interpolant(
    p: float, q: float, M: int, t_max: float, k: int = 1
) -> Callable[[np.ndarray], np.ndarray]:
    """Evaluator for S_k(tau;M) at arbitrary tau in [0, t_max]: closed form
    when available for k=1, dense ODE interpolant otherwise."""
    if k == 1 and M <= CLOSED_FORM_MAX_M and not is_degenerate(p, q, M):
        return lambda tau: survival_circle_closed_form(tau, p, q, M)
    L = _hierarchy_matrix(p, q, M)
    sol = solve_ivp(
        lambda _t, y: L @ y,
        (0.0, float(t_max)),
        np.ones(M),
        dense_output=True,
        method="DOP853",
        rtol=ODE_RTOL,
        atol=ODE_ATOL,
    )
    if not sol.success:
        raise RuntimeError(f"hierarchy integration failed: {sol.message}")
    return lambda tau: sol.sol(np.atleast_1d(np.asarray(tau, dtype=float)))[k - 1]


def survival_circle(t_grid, p: float, q: float, M: int, method: str = "auto"):
    """S_1(t;M) with automatic routing: closed form where its hypothesis
    holds, ODE hierarchy at degeneracies or large M.

    Returns (values, source) with source in {"closed_form", "ode"}.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if method not in ("auto", "closed_form", "ode"):
        raise ValueError(f"unknown method {method!r}")
    if method != "ode" and M <= CLOSED_FORM_MAX_M and not is_degenerate(p, q, M):
        return survival_circle_closed_form(t_grid, p, q, M), "closed_form"
    if method == "closed_form":
        # surface the precondition failure rather than silently rerouting
        return survival_circle_closed_form(t_grid, p, q, M), "closed_form"
    return survival_circle_ode(t_grid, p, q, M).values[0], "ode"


def f_circle(t_grid, p: float, q: float, M: int, method: str = "auto"):
    """Expected adopter fraction on the circle: 1 - S_1(t;M).

    Returns (values, source).
    """
    S, source = survival_circle(t_grid, p, q, M, method=method)
    return 1.0 - S, source


def f_one_dim_limit(t, p: float, q: float) -> np.ndarray:
    """Infinite-line / infinite-circle adoption fraction."""
    _check_pq(p, q)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return 1.0 - np.exp(-(p + q) * t + (q / p) * (1.0 - np.exp(-p * t)))


def default_time_grid(p: float, q: float, points: int = 200, coverage: float = 0.99) -> np.ndarray:
    """Uniform grid on [0, T] with T chosen so the infinite-line fraction
    reaches `coverage` at T."""
    if not 0 < coverage < 1:
        raise ValueError("coverage must be in (0, 1)")
    g = lambda T: float(f_one_dim_limit(T, p, q)[0]) - coverage
    hi = 1.0
    while g(hi) < 0:
        hi *= 2.0
        if hi > 1e12:
            raise RuntimeError("could not bracket the grid horizon")
    T = brentq(g, hi / 2 if g(hi / 2) < 0 else 1e-12, hi)
    return np.linspace(0.0, T, points)


# ---------------------------------------------------------------------------
# Lines


def _curve_source(sources: set[str]) -> str:
    return "closed_form" if sources == {"closed_form"} else "ode"


def f_line_one_sided(t_grid, p: float, q: float, M: int):
    """Per-node and aggregate adoption on the one-sided line.

    Node j (1-based) behaves exactly like a node of a j-circle, so its
    adoption probability is f_circle(t; p, q, j).

    Returns (per_node (M,T), f (T,), source).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    per_node = np.empty((M, t_grid.size))
    sources: set[str] = set()
    for j in range(1, M + 1):
        fj, src = f_circle(t_grid, p, q, j)
        per_node[j - 1] = fj
        sources.add(src)
    return per_node, per_node.mean(axis=0), _curve_source(sources)


def _two_sided_line_system(p: float, q: float, M: int):
    """Index plumbing for the coupled system solving the two-sided line.

    State vector: the S_k hierarchies at internal rate q/2 for every circle
    size m = 1..M (block m starts at offset m(m-1)/2), followed by the
    non-adoption probabilities u_j of the interior nodes j = 2..M-1.
    """
    q2 = q / 2
    NS = M * (M + 1) // 2
    off = [0] * (M + 1)
    for m in range(1, M + 1):
        off[m] = m * (m - 1) // 2
    Lbig = np.zeros((NS, NS))
    for m in range(1, M + 1):
        Lbig[off[m] : off[m] + m, off[m] : off[m] + m] = _hierarchy_matrix(p, q2, m)
    interior = list(range(2, M))  # 1-based interior node labels
    iA1 = np.array([off[j - 1] for j in interior], dtype=int)
    iA2 = np.array([off[M - j + 1] for j in interior], dtype=int)
    iB1 = np.array([off[j] for j in interior], dtype=int)
    iB2 = np.array([off[M - j] for j in interior], dtype=int)
    return NS, off, Lbig, (iA1, iA2, iB1, iB2)


def f_line_two_sided(
    t_grid, p: float, q: float, M: int, rtol: float = ODE_RTOL, atol: float = ODE_ATOL
):
    """Per-node and aggregate adoption on the two-sided line.

    The boundary nodes equal f_circle(t; p, q/2, M); each interior node
    solves a scalar ODE fed by the closed-form pair survivals
    Prob(X_{j-1}=0, X_j=0) = S(t;p,q/2,j-1) S(t;p,q/2,M-j+1). The pair
    survivals and the interior unknowns are integrated as one coupled
    system, so no interpolation error enters.

    Returns (per_node (M,T), f (T,), source="ode").
    """
    _check_pq(p, q)
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    t_grid = np.asarray(t_grid, dtype=float)
    if M == 1:
        S, _ = survival_circle(t_grid, p, q / 2, 1)
        per_node = (1.0 - S)[None, :]
        return per_node, per_node.mean(axis=0), "ode"
    NS, off, Lbig, (iA1, iA2, iB1, iB2) = _two_sided_line_system(p, q, M)
    n_int = M - 2

    def rhs(_t, y):
        yS = y[:NS]
        dy = np.empty_like(y)
        dy[:NS] = Lbig @ yS
        if n_int:
            u = y[NS:]
            pair_left = yS[iA1] * yS[iA2]
            pair_right = yS[iB1] * yS[iB2]
            dy[NS:] = -(p + q) * u + (q / 2) * (pair_left + pair_right)
        return dy

    sol = solve_ivp(
        rhs,
        (0.0, float(t_grid[-1])) if t_grid[-1] > 0 else (0.0, 1.0),
        np.ones(NS + n_int),
        t_eval=t_grid,
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise RuntimeError(f"two-sided line integration failed: {sol.message}")
    per_node = np.empty((M, t_grid.size))
    boundary = 1.0 - sol.y[off[M]]  # S_1 of the size-M hierarchy
    per_node[0] = boundary
    per_node[M - 1] = boundary
    for idx, j in enumerate(range(2, M)):
        per_node[j - 1] = 1.0 - sol.y[NS + idx]
    return per_node, per_node.mean(axis=0), "ode"


def pair_survival_two_sided_line(t_grid, p: float, q: float, M: int, j: int) -> np.ndarray:
    """Prob(X_{j-1}=0, X_j=0) on the two-sided line, j = 2..M: the product
    of the two one-sided circle survivals at internal rate q/2."""
    if not 2 <= j <= M:
        raise ValueError(f"j must be in 2..{M}, got {j}")
    t_grid = np.asarray(t_grid, dtype=float)
    left, _ = survival_circle(t_grid, p, q / 2, j - 1)
    right, _ = survival_circle(t_grid, p, q / 2, M - j + 1)
    return left * right


def a_j_quadrature(
    t_points, p: float, q: float, M: int, j: int, epsabs: float = 1e-12, epsrel: float = 1e-10
) -> np.ndarray:
    """A_j(t) for interior node j of the two-sided line by adaptive
    quadrature of e^{(p+q)tau} times the pair survivals; cross-check for the
    ODE route."""
    if not 2 <= j <= M - 1:
        raise ValueError(f"j must be an interior node in 2..{M - 1}, got {j}")
    t_points = np.atleast_1d(np.asarray(t_points, dtype=float))
    t_max = float(t_points[-1])
    q2 = q / 2
    sizes = {j, M - j, j - 1, M - j + 1}
    S = {m: survival_interpolant(p, q2, m, t_max) for m in sizes}

    def integrand(tau: float) -> float:
        return float(
            np.exp((p + q) * tau)
            * (S[j](tau)[0] * S[M - j](tau)[0] + S[j - 1](tau)[0] * S[M - j + 1](tau)[0])
        )

    out = np.zeros(t_points.size)
    acc = 0.0
    prev = 0.0
    for k, t in enumerate(t_points):
        if t > prev:
            seg, _err = quad(integrand, prev, float(t), epsabs=epsabs, epsrel=epsrel, limit=200)
            acc += seg
            prev = float(t)
        out[k] = acc
    return out


def f_line_two_sided_quadrature(t_grid, p: float, q: float, M: int):
    """Two-sided line curve via the quadrature representation
    u_j = e^{-(p+q)t} (1 + (q/2) A_j(t)); boundary nodes as usual."""
    t_grid = np.asarray(t_grid, dtype=float)
    per_node = np.empty((M, t_grid.size))
    S_M, _ = survival_circle(t_grid, p, q / 2, M)
    per_node[0] = 1.0 - S_M
    per_node[M - 1] = 1.0 - S_M
    for j in range(2, M):
        A = a_j_quadrature(t_grid, p, q, M, j)
        u = np.exp(-(p + q) * t_grid) * (1.0 + (q / 2) * A)
        per_node[j - 1] = 1.0 - u
    return per_node, per_node.mean(axis=0), "quadrature"


# ---------------------------------------------------------------------------
# Hybrid circle + ray


def f_hybrid(t_grid, p: float, q: float, circle_size: int, ray_size: int):
    """Circle-with-ray curve: circle nodes follow the (M-K)-circle, the k-th
    ray node follows an (M-K+k)-circle.

    Returns (per_node (M,T), f (T,), source).
    """
    if circle_size < 1 or ray_size < 1:
        raise ValueError("circle_size and ray_size must be >= 1")
    t_grid = np.asarray(t_grid, dtype=float)
    C, K = circle_size, ray_size
    per_node = np.empty((C + K, t_grid.size))
    sources: set[str] = set()
    fC, src = f_circle(t_grid, p, q, C)
    sources.add(src)
    per_node[:C] = fC
    for k in range(1, K + 1):
        fk, src = f_circle(t_grid, p, q, C + k)
        sources.add(src)
        per_node[C + k - 1] = fk
    return per_node, per_node.mean(axis=0), _curve_source(sources)


# ---------------------------------------------------------------------------
# Shift identities and diagnostic quantities


def s_k_shift_identity(t_grid, p: float, q: float, k: int, M: int, sided: str = "one") -> np.ndarray:
    """Residual |LHS - RHS| of the block-shift identity, from independent
    ODE solves of the two hierarchy sizes.

    one-sided: S_k(t;M) = S_1(t;M-k+1) e^{-(k-1)pt}, 2 <= k <= M.
    two-sided: S_k(t;M) = S_2(t;M-k+2) e^{-(k-2)pt}, 3 <= k <= M.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    big = survival_circle_ode(t_grid, p, q, M, sided=sided)
    if sided == "one":
        if not 2 <= k <= M:
            raise ValueError(f"one-sided shift needs 2 <= k <= M, got k={k}, M={M}")
        small = survival_circle_ode(t_grid, p, q, M - k + 1, sided=sided)
        rhs = small.s(1) * np.exp(-(k - 1) * p * t_grid)
    elif sided == "two":
        if not 3 <= k <= M:
            raise ValueError(f"two-sided shift needs 3 <= k <= M, got k={k}, M={M}")
        small = survival_circle_ode(t_grid, p, q, M - k + 2, sided=sided)
        rhs = small.s(2) * np.exp(-(k - 2) * p * t_grid)
    else:
        raise ValueError(f"sided must be 'one' or 'two', got {sided!r}")
    return np.abs(big.s(k) - rhs)


def alpha_diag(t_grid, p: float, q: float, k: int) -> np.ndarray:
    """alpha(t,k) = S_1(t;k) - S_1(t;k+1); positive for t > 0.

    For k beyond ~6 the plain subtraction cancels catastrophically (the
    true value decays like (qt)^k / k! at small t, below round-off of the
    two survivals), so the difference is integrated directly: combining the
    S_1 evolution with the block-shift identity gives the triangular system

        alpha_j' = -(p+q) alpha_j + q e^{-pt} alpha_{j-1},
        alpha_0  = 1 - e^{-pt},  alpha_j(0) = 0,

    which is positivity-preserving and carries no cancellation.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_pq(p, q)
    t_grid = np.asarray(t_grid, dtype=float)

    def rhs(t, a):
        d = -(p + q) * a
        drive = q * np.exp(-p * t)
        d[0] += drive * (1.0 - np.exp(-p * t))
        d[1:] += drive * a[:-1]
        return d

    sol = solve_ivp(
        rhs,
        (0.0, float(t_grid[-1])) if t_grid[-1] > 0 else (0.0, 1.0),
        np.zeros(k),
        t_eval=t_grid,
        method="DOP853",
        rtol=ODE_RTOL,
        atol=1e-18,
    )
    if not sol.success:
        raise RuntimeError(f"difference system integration failed: {sol.message}")
    return sol.y[k - 1]


def beta_diag(t_grid, p: float, q: float, k: int, M: int) -> np.ndarray:
    """beta(t,k,M) = [S_k - S_{k+1}](q/2) - [S_k - S_{k+1}](q); positive for
    t > 0, k = 1..M-1."""
    if not (M >= 2 and 1 <= k <= M - 1):
        raise ValueError(f"beta needs M >= 2 and 1 <= k <= M-1, got k={k}, M={M}")
    t_grid = np.asarray(t_grid, dtype=float)
    half = survival_circle_ode(t_grid, p, q / 2, M)
    full = survival_circle_ode(t_grid, p, q, M)
    return (half.s(k) - half.s(k + 1)) - (full.s(k) - full.s(k + 1))


def gamma_diag(t_grid, p: float, q: float, k: int, M: int) -> np.ndarray:
    """gamma(t,k,M) = S_k - 2 S_{k+1} + S_{k+2}; positive for t > 0,
    k = 1..M-2."""
    if not (M >= 3 and 1 <= k <= M - 2):
        raise ValueError(f"gamma needs M >= 3 and 1 <= k <= M-2, got k={k}, M={M}")
    t_grid = np.asarray(t_grid, dtype=float)
    h = survival_circle_ode(t_grid, p, q, M)
    return h.s(k) - 2 * h.s(k + 1) + h.s(k + 2)


def nu_from_node_survivals(s_one: np.ndarray, s_two: np.ndarray, k: int) -> np.ndarray:
    """nu(t,k,M) from per-node non-adoption probabilities of the one- and
    two-sided lines (rows are nodes 1..M)."""
    M = s_one.shape[0]
    if s_two.shape != s_one.shape:
        raise ValueError("survival arrays must have equal shapes")
    if not 1 <= k <= M:
        raise ValueError(f"k must be in 1..{M}, got {k}")
    mirror = M - k + 1
    return (s_one[k - 1] + s_one[mirror - 1]) - (s_two[k - 1] + s_two[mirror - 1])


def nu_diag(t_grid, p: float, q: float, k: int, M: int) -> np.ndarray:
    """nu(t,k,M) computed from the analytic line formulas."""
    per_one, _, _ = f_line_one_sided(t_grid, p, q, M)
    per_two, _, _ = f_line_two_sided(t_grid, p, q, M)
    return nu_from_node_survivals(1.0 - per_one, 1.0 - per_two, k)


def psi_diag(
    t_grid,
    p: float,
    q: float,
    k: int,
    M: int,
    pair_left: np.ndarray | None = None,
    pair_right: np.ndarray | None = None,
) -> np.ndarray:
    """psi(t,k,M) = S_2(t;q,k) + S_2(t;q,M-k+1)
    - Prob(X_{k-1}=0, X_k=0) - Prob(X_k=0, X_{k+1}=0) on the two-sided line;
    positive for t > 0, k >= 2, M >= 2k-1.

    The pair probabilities default to the closed-form products; callers can
    pass oracle-computed series instead.
    """
    if not (k >= 2 and M >= 2 * k - 1):
        raise ValueError(f"psi needs k >= 2 and M >= 2k-1, got k={k}, M={M}")
    t_grid = np.asarray(t_grid, dtype=float)
    s2_left = survival_circle_ode(t_grid, p, q, k).s(2)
    s2_right = survival_circle_ode(t_grid, p, q, M - k + 1).s(2)
    if pair_left is None:
        pair_left = pair_survival_two_sided_line(t_grid, p, q, M, k)
    if pair_right is None:
        pair_right = pair_survival_two_sided_line(t_grid, p, q, M, k + 1)
    return s2_left + s2_right - pair_left - pair_right


def diagnostics_alpha_beta_gamma_nu_psi(
    t_grid, p: float, q: float, k: int, M: int
) -> dict[str, np.ndarray]:
    """All diagnostic series whose index preconditions hold at (k, M)."""
    out: dict[str, np.ndarray] = {"alpha": alpha_diag(t_grid, p, q, k)}
    if M >= 2 and 1 <= k <= M - 1:
        out["beta"] = beta_diag(t_grid, p, q, k, M)
    if M >= 3 and 1 <= k <= M - 2:
        out["gamma"] = gamma_diag(t_grid, p, q, k, M)
    if 1 <= k <= M:
        out["nu"] = nu_diag(t_grid, p, q, k, M)
    if k >= 2 and M >= 2 * k - 1:
        out["psi"] = psi_diag(t_grid, p, q, k, M)
    return out
