"""Gaussian quadrature against |sin x|^{2k} dx and weighted Lp norms.

build_rule maps the half-period integral to a Gauss-Jacobi rule in
t = cos x with both exponents k - 1/2 and mirrors the nodes, so even
trig polynomials up to degree 2M-1 integrate exactly and odd parts
vanish by symmetry.  k = 0 and k = 1 have closed Chebyshev rules and
skip the eigenvalue solve.  Lp norms are not polynomial integrals, so
they are defined by a node-doubling policy rather than an exactness
claim.  Rules absorbing a (1-cos x)^sigma factor into the weight handle
the power singularity of the counterexample function.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .errors import ConvergenceError, EvaluationError, IntegrabilityError
from .exppoly import check_multiplicity


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Mirrored rule for integrals against |sin x|^{2k} dx on [-pi, pi]."""

    k: float
    nodes: np.ndarray      # ascending, symmetric about 0, none at 0 or +-pi
    weights: np.ndarray    # all positive; sum equals norm_sq(0, k)
    exact_degree: int      # largest trig degree integrated exactly


def _half_rule(k, m):
    # nodes in (0, pi) ascending and weights for integral_0^pi g sin^{2k}
    if k == 0.0:
        x = (2.0 * np.arange(1, m + 1) - 1.0) * math.pi / (2.0 * m)
        w = np.full(m, math.pi / m)
        return x, w
    if k == 1.0:
        x = np.arange(1, m + 1) * math.pi / (m + 1.0)
        w = (math.pi / (m + 1.0)) * np.sin(x) ** 2
        return x, w
    t, w = roots_jacobi(m, k - 0.5, k - 0.5)
    x = np.arccos(t)[::-1].copy()
    return x, w[::-1].copy()


@lru_cache(maxsize=None)
def build_rule(k, m):
    """M-point-per-half-period rule for the weight |sin x|^{2k}."""
    k = check_multiplicity(k)
    m = int(m)
    if m < 1:
        raise ValueError(f"node count must be >= 1, got {m}")
    x, w = _half_rule(k, m)
    nodes = np.concatenate([-x[::-1], x])
    weights = np.concatenate([w[::-1], w])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadRule(k=k, nodes=nodes, weights=weights, exact_degree=2 * m - 1)


def _eval_at(f, nodes):
    try:
        vals = np.asarray(f(nodes))
        if vals.shape != nodes.shape:
            raise ValueError
    except (TypeError, ValueError):
        vals = np.asarray([f(x) for x in nodes])
    bad = ~np.isfinite(vals) if not np.iscomplexobj(vals) else ~(
        np.isfinite(vals.real) & np.isfinite(vals.imag))
    if bad.any():
        i = int(np.argmax(bad))
        raise EvaluationError(f"non-finite value at node x = {nodes[i]!r}")
    return vals


def integrate(f, rule):
    """Sum of weights times f(node), exactly rounded.

    Raises EvaluationError naming the offending node if f produces a
    non-finite value.
    """
    vals = _eval_at(f, rule.nodes)
    if np.iscomplexobj(vals):
        return complex(math.fsum(rule.weights * vals.real),
                       math.fsum(rule.weights * vals.imag))
    return math.fsum(rule.weights * vals)


@dataclass(frozen=True)
class RefinePolicy:
    """Node-doubling control for non-polynomial integrands."""

    m_start: int = 64
    rel_tol: float = 1e-8
    m_cap: int = 2 ** 16
    on_cap: str = "raise"   # or "return": accept the last estimate


def lp_norm(f, p, k, policy=None):
    """Weighted Lp norm (integral of |f|^p dm_k)^(1/p) by node doubling.

    Doubles the node count from policy.m_start until successive
    estimates agree to policy.rel_tol relatively, raising
    ConvergenceError (carrying the last two estimates) if the cap is hit
    and the policy says to raise.
    """
    p = float(p)
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    k = check_multiplicity(k)
    policy = policy or RefinePolicy()
    m = policy.m_start
    prev = None
    while True:
        rule = build_rule(k, m)
        vals = np.abs(_eval_at(f, rule.nodes)) ** p
        est = math.fsum(rule.weights * vals) ** (1.0 / p)
        if prev is not None and abs(est - prev) <= policy.rel_tol * max(est, prev):
            return est
        if 2 * m > policy.m_cap:
            if policy.on_cap == "return":
                return est
            raise ConvergenceError(
                f"lp_norm did not settle by M = {m}: {prev!r} vs {est!r}",
                estimates=(prev, est))
        prev = est
        m *= 2


@dataclass(frozen=True, eq=False)
class SingularRule:
    """Half-period rule absorbing (1-cos x)^sigma into the weight.

    integrate_singular(g) equals integral_0^pi of
    g(x) (1-cos x)^sigma sin^{2k} x dx; under t = cos x this is the
    Jacobi weight (1-t)^alpha (1+t)^beta with alpha = sigma + k - 1/2
    and beta = k - 1/2.
    """

    k: float
    p: float
    alpha: float
    beta: float
    sigma: float
    nodes: np.ndarray
    weights: np.ndarray


def build_singular_rule(k, p, m):
    """Rule for integrals of g times the p-th power of the counterexample.

    The absorbed factor is (1-cos x)^{-p(k+1)/2}; integrability requires
    alpha = (k - 1/2) - p(k+1)/2 > -1.
    """
    k = check_multiplicity(k)
    p = float(p)
    m = int(m)
    if m < 1:
        raise ValueError(f"node count must be >= 1, got {m}")
    sigma = -p * (k + 1.0) / 2.0
    alpha = (k - 0.5) + sigma
    beta = k - 0.5
    if alpha <= -1.0:
        raise IntegrabilityError(
            f"f is not in L^p at this (p, k): p = {p}, k = {k} give "
            f"Jacobi exponent alpha = {alpha} <= -1")
    t, w = roots_jacobi(m, alpha, beta)
    x = np.arccos(t)[::-1].copy()
    w = w[::-1].copy()
    x.setflags(write=False)
    w.setflags(write=False)
    return SingularRule(k=k, p=p, alpha=alpha, beta=beta, sigma=sigma,
                        nodes=x, weights=w)


def integrate_singular(g, srule):
    """Half-period integral of g against the absorbed singular weight."""
    vals = _eval_at(g, srule.nodes)
    if np.iscomplexobj(vals):
        return complex(math.fsum(srule.weights * vals.real),
                       math.fsum(srule.weights * vals.imag))
    return math.fsum(srule.weights * vals)


def integrate_singular_symmetric(h, srule):
    """Full-period integral of h against (1-cos x)^sigma |sin x|^{2k} dx."""
    vals = _eval_at(h, srule.nodes) + _eval_at(h, -srule.nodes)
    if np.iscomplexobj(vals):
        return complex(math.fsum(srule.weights * vals.real),
                       math.fsum(srule.weights * vals.imag))
    return math.fsum(srule.weights * vals)
