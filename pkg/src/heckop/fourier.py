"""Coefficients, partial sums, the reproducing kernel, and experiments.

The expansion coefficient of f at index n is gamma_n^2 (f, E_n)_k; the
partial-sum operator S_N is either the coefficient sum or the integral
against the kernel K_N, which collapses to a single product of E_{N+1}
values divided by sin((x-y)/2).  The experiment drivers sweep truncation
or term index and report weighted Lp error norms.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

from .errors import ConvergenceError
from .exppoly import check_multiplicity
from .quadrature import (RefinePolicy, build_rule, build_singular_rule,
                         _eval_at, lp_norm)
from .specfun import e_eval, e_table, gamma_sq, p_eval

_DIAG_CUTOFF = 1e-8   # |sin((x-y)/2)| below this uses the direct sum


@dataclass(frozen=True)
class KernelQuery:
    x: float
    y: float
    N: int
    k: float


@dataclass(frozen=True, eq=False)
class CoeffTable:
    """Expansion coefficients a_n for |n| <= N at one multiplicity."""

    k: float
    N: int
    values: np.ndarray   # index n + N

    def a(self, n):
        if abs(n) > self.N:
            raise IndexError(f"|n| = {abs(n)} exceeds table truncation {self.N}")
        return complex(self.values[n + self.N])

    def items(self):
        return [(n, complex(self.values[n + self.N]))
                for n in range(-self.N, self.N + 1)]


def coefficients(f, N, k, rule=None):
    """Expansion coefficients a_n = gamma_n^2 (f, E_n)_k for |n| <= N.

    The quadrature rule must be exact to trig degree 2N+2 so that
    polynomial inputs of degree <= N are reproduced exactly; the default
    rule uses max(64, 2N+16) nodes per half period.
    """
    N = int(N)
    if N < 0:
        raise ValueError("truncation N must be >= 0")
    k = check_multiplicity(k)
    if rule is None:
        rule = build_rule(k, max(64, 2 * N + 16))
    if rule.k != k:
        raise ValueError(f"rule built for k = {rule.k}, coefficients need k = {k}")
    if rule.exact_degree < 2 * N + 2:
        raise ValueError(
            f"rule exact to degree {rule.exact_degree} is insufficient for "
            f"N = {N}; need at least {2 * N + 2}")
    fvals = _eval_at(f, rule.nodes)
    basis = e_table(N, k, rule.nodes).conj()
    wf = rule.weights * fvals
    vals = np.empty(2 * N + 1, dtype=complex)
    for i in range(2 * N + 1):
        prod = basis[i] * wf
        vals[i] = complex(math.fsum(prod.real), math.fsum(prod.imag))
        vals[i] *= gamma_sq(i - N, k)
    vals.setflags(write=False)
    return CoeffTable(k=k, N=N, values=vals)


def partial_sum(table, x):
    """S_N f at x (scalar or ndarray) from a coefficient table."""
    x = np.asarray(x, dtype=float)
    rows = e_table(table.N, table.k, x)
    prod = table.values[:, None] * rows
    re = np.array([math.fsum(col) for col in prod.real.T])
    im = np.array([math.fsum(col) for col in prod.imag.T])
    vals = re + 1j * im
    return vals if x.ndim else complex(vals[0])


def kernel_direct(q):
    """K_N(x, y) summed term by term; the oracle for the closed form."""
    k = check_multiplicity(q.k)
    ex = e_table(q.N, k, np.array([q.x]))[:, 0]
    ey = e_table(q.N, k, np.array([q.y]))[:, 0]
    g2 = np.array([gamma_sq(n, k) for n in range(-q.N, q.N + 1)])
    prod = g2 * ex * ey.conj()
    re = math.fsum(prod.real)
    im = math.fsum(prod.imag)
    assert abs(im) <= 1e-10 * max(1.0, abs(re)), \
        f"kernel imaginary part {im} too large at {q}"
    return re


def kernel_closed(q):
    """K_N(x, y) via the closed form in E_{N+1}.

    gamma_{N+1}^2 Im(e^{-i(x-y)/2} E_{N+1}(ix) conj(E_{N+1}(iy))) over
    sin((x-y)/2), falling back to the direct sum near the removable
    singularity on the diagonal.
    """
    u = q.x - q.y
    s = math.sin(0.5 * u)
    if abs(s) < _DIAG_CUTOFF:
        return kernel_direct(q)
    k = check_multiplicity(q.k)
    ex = e_eval(q.N + 1, k, q.x)
    ey = e_eval(q.N + 1, k, q.y)
    val = complex(np.exp(-0.5j * u)) * ex * np.conj(ey)
    return gamma_sq(q.N + 1, k) * val.imag / s


def kernel_closed_grid(x, ys, N, k):
    """K_N(x, y) over a vector of y, closed form with diagonal fallback."""
    k = check_multiplicity(k)
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    u = x - ys
    s = np.sin(0.5 * u)
    ex = e_eval(N + 1, k, np.array([x]))[0]
    ey = e_eval(N + 1, k, ys)
    num = (np.exp(-0.5j * u) * ex * ey.conj()).imag
    g2 = gamma_sq(N + 1, k)
    out = np.empty_like(s)
    near = np.abs(s) < _DIAG_CUTOFF
    out[~near] = g2 * num[~near] / s[~near]
    for i in np.nonzero(near)[0]:
        out[i] = kernel_direct(KernelQuery(x=x, y=float(ys[i]), N=N, k=k))
    return out


def partial_sum_kernel(f, N, k, rule, x):
    """S_N f at x as the quadrature integral of K_N(x, y) f(y).

    Intended for real-valued f; complex f returns the complex integral.
    """
    kv = kernel_closed_grid(x, rule.nodes, N, k)
    fv = _eval_at(f, rule.nodes)
    prod = rule.weights * kv * fv
    if np.iscomplexobj(prod):
        return complex(math.fsum(prod.real), math.fsum(prod.imag))
    return math.fsum(prod)


@dataclass
class ExperimentReport:
    """Rows plus the knobs that produced them."""

    columns: tuple
    rows: list
    metadata: dict = field(default_factory=dict)


def converge_experiment(f, k, p, n_values, *, m_nodes=None, policy=None):
    """Partial-sum error sweep: rows (N, p, k, error in Lp(dm_k)).

    Error norms use node doubling capped at 2^14 and keep the last
    estimate when successive values sit at the double-precision floor
    and cannot agree to the relative tolerance.
    """
    k = check_multiplicity(k)
    p = float(p)
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    if policy is None:
        policy = RefinePolicy(m_cap=2 ** 14, on_cap="return")
    rows = []
    used_nodes = {}
    for N in sorted(int(n) for n in n_values):
        m = m_nodes if m_nodes is not None else max(64, 2 * N + 16)
        used_nodes[N] = m
        table = coefficients(f, N, k, build_rule(k, m))

        def err_fn(x, _t=table):
            return partial_sum(_t, x) - f(x)

        rows.append((N, p, k, lp_norm(err_fn, p, k, policy)))
    meta = {"function": getattr(f, "__name__", repr(f)), "m_nodes": used_nodes,
            "policy": policy}
    return ExperimentReport(columns=("N", "p", "k", "error"), rows=rows, metadata=meta)


def counterexample_function(k):
    """f(x) = (1 - cos x)^{-(k+1)/2}; integrable against dm_k iff k > 0."""
    k = check_multiplicity(k)

    def f(x):
        return (1.0 - np.cos(x)) ** (-0.5 * (k + 1.0))

    f.__name__ = "counterexample"
    return f


def counterexample_coefficient(n, k, m_nodes):
    """a_n of the counterexample via the singularity-absorbing rule.

    The integrand splits as E_n(-iy) + E_n(iy) = 2 Re E_n(iy) over the
    half period, a trig polynomial of degree n, so the rule is exact
    once m_nodes exceeds about n/2.
    """
    srule = build_singular_rule(k, 1.0, m_nodes)
    vals = 2.0 * e_eval(n, k, srule.nodes).real
    return gamma_sq(n, k) * math.fsum(srule.weights * vals)


def counterexample_experiment(k, p, n_list, *, m_nodes=None, policy=None):
    """Per-term Lp norms b_n of the paired expansion of the counterexample.

    Rows (n, b_n) with b_n the Lp(dm_k) norm of a_n E_n + a_{-n} E_{-n}.
    Verifies a_{-n}/a_n = (n+k)/n and the collapse of the pair to
    2 a_n ((n+k)/n) P_n before reporting each row.
    """
    k = check_multiplicity(k)
    p = float(p)
    ns = sorted(int(n) for n in n_list)
    if not ns or ns[0] < 1:
        raise ValueError("term indices must be positive integers")
    if policy is None:
        # |pair|^p has a kink at each zero of P_n, so the doubling loop
        # converges algebraically for fractional p; settle for the cap.
        policy = RefinePolicy(m_cap=2 ** 14, on_cap="return")
    mc = m_nodes if m_nodes is not None else max(64, ns[-1] // 2 + 16)
    rows = []
    for n in ns:
        a_pos = counterexample_coefficient(n, k, mc)
        a_neg = counterexample_coefficient(-n, k, mc)
        ratio = (n + k) / n
        assert abs(a_neg - ratio * a_pos) <= 1e-8 * abs(a_neg), \
            f"coefficient ratio a_-n/a_n off at n = {n}: {a_neg / a_pos} vs {ratio}"

        def pair(x, _n=n, _ap=a_pos, _an=a_neg):
            return _ap * e_eval(_n, k, x) + _an * e_eval(-_n, k, x)

        b = lp_norm(pair, p, k, policy)
        b_alt = 2.0 * a_pos * ratio * lp_norm(
            lambda x, _n=n: p_eval(_n, k, x), p, k, policy)
        assert abs(b - b_alt) <= 1e-8 * max(b, b_alt), \
            f"pair norm does not match the symmetric collapse at n = {n}"
        rows.append((n, b))
    meta = {"k": k, "p": p, "m_coeff_nodes": mc, "policy": policy}
    return ExperimentReport(columns=("n", "b_n"), rows=rows, metadata=meta)


# -- cotangent comparison diagnostic --------------------------------------


def _panel_quad(g, lo, hi, singular, policy):
    """Integral of g over (lo, hi) with order doubling.

    singular is None for a smooth panel, else ("left"|"right", e): absorb
    |y - endpoint|^{-e} into a one-sided Jacobi weight.
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    prev = None
    m = max(8, policy.m_start)
    while True:
        if singular is None:
            t, w = np.polynomial.legendre.leggauss(m)
            ys = mid + half * t
            vals = g(ys)
            est = half * float(w @ vals)
        else:
            side, e = singular
            alpha, beta = (0.0, -e) if side == "left" else (-e, 0.0)
            t, w = roots_jacobi(m, alpha, beta)
            ys = mid + half * t
            base = lo if side == "left" else hi
            # g = smooth * |y - base|^{-e}; the rule integrates the weight
            vals = g(ys) * np.abs(ys - base) ** e
            est = half ** (1.0 - e) * float(w @ vals)
        if prev is not None and abs(est - prev) <= 1e-10 * max(1.0, abs(est)):
            return est
        if 2 * m > policy.m_cap:
            return est   # panel floor; the Richardson loop judges the total
        prev = est
        m *= 2


def cot_comparison_integral(x, a, b, policy=None):
    """Full-period integral of |cot((x-y)/2) (|sin x/sin y|^a - |..|^b)|.

    The integrand is bounded at y = x (the power difference vanishes
    linearly against the cotangent pole) and has integrable power
    singularities where sin y = 0.  A symmetric neighborhood of y = x of
    radius h is excised and h is driven to 0 by Richardson extrapolation;
    panels touching sin y = 0 absorb the dominant power into a one-sided
    Jacobi weight.  Diagnostic for the uniform-boundedness comparison.
    """
    if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
        raise ValueError("exponents must lie in (0, 1)")
    x = float(x)
    sx = math.sin(x)
    if sx == 0.0:
        return 0.0
    if policy is None:
        policy = RefinePolicy(m_start=16, rel_tol=1e-6, m_cap=2048)
    e = max(a, b)
    asx = abs(sx)

    def integrand(ys):
        rho = asx / np.abs(np.sin(ys))
        diff = np.abs(rho ** a - rho ** b)
        return np.abs(1.0 / np.tan(0.5 * (x - ys))) * diff

    # sign boundaries of the power difference and of sin y
    crossings = {x, -x, math.copysign(math.pi - abs(x), x), -math.copysign(math.pi - abs(x), x)}
    fixed = sorted(c for c in crossings | {0.0} if -math.pi < c < math.pi)

    def excised(h):
        lo_x, hi_x = x - h, x + h
        pts = sorted({-math.pi, math.pi, lo_x, hi_x} | {c for c in fixed if not lo_x < c < hi_x})
        total = 0.0
        for lo, hi in zip(pts[:-1], pts[1:]):
            if lo >= lo_x - 1e-15 and hi <= hi_x + 1e-15:
                continue   # the excised gap
            if hi - lo < 1e-14:
                continue
            sing = None
            if lo in (-math.pi, 0.0):
                sing = ("left", e)
            elif hi in (math.pi, 0.0):
                sing = ("right", e)
            total += _panel_quad(integrand, lo, hi, sing, policy)
        return total

    gaps = [abs(x), math.pi - abs(x)]
    h = min(0.1, 0.25 * min(g for g in gaps if g > 0))
    i_h = excised(h)
    prev_r = None
    for _ in range(14):
        h *= 0.5
        i_h2 = excised(h)
        r = 2.0 * i_h2 - i_h
        if prev_r is not None and abs(r - prev_r) <= policy.rel_tol * max(1.0, abs(r)):
            return r
        prev_r, i_h = r, i_h2
    raise ConvergenceError(
        f"excised integral did not extrapolate at x = {x}: last {prev_r!r}",
        estimates=(prev_r, r))


def builtin_function(name, k):
    """Resolve a CLI function identifier to an evaluation callable."""
    if name == "expcos":
        def f(x):
            return np.exp(np.cos(x))
        f.__name__ = "expcos"
        return f
    if name == "abssin":
        def f(x):
            return np.abs(np.sin(x))
        f.__name__ = "abssin"
        return f
    if name == "counterexample":
        return counterexample_function(k)
    if name.startswith("basis:"):
        try:
            m = int(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad basis index in function name {name!r}") from None

        def f(x, _m=m):
            return e_eval(_m, k, x)
        f.__name__ = name
        return f
    raise ValueError(
        f"unknown function {name!r}; choose expcos, abssin, counterexample, basis:<m>")
