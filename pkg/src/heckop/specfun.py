"""Closed-form evaluation of the polynomial basis and its norms.

The symmetric polynomials P_n^k reduce to scaled Gegenbauer polynomials
in cos x, and the non-symmetric E_n^k are a two-term combination of P at
weights k and k+1.  All Gamma-factor prefactors are assembled in log
space.  k = 0 takes a dedicated classical branch (cos nx, e^{inx}); the
Gegenbauer recurrence degenerates there.
"""

import math

import numpy as np
from scipy.special import gammaln

from .exppoly import check_multiplicity


def gegenbauer(n, lam, t):
    """C_n^lam(t) by the forward three-term recurrence.

    Parameters
    ----------
    n : int, degree >= 0
    lam : float, > 0
    t : scalar or ndarray

    Forward recurrence is stable on [-1, 1] for the degrees used here
    (a few hundred); arguments beyond [-1, 1] evaluate the same
    polynomial and simply grow.
    """
    if lam <= 0:
        raise ValueError(f"gegenbauer parameter must be > 0, got {lam}")
    n = int(n)
    if n < 0:
        raise ValueError("degree must be >= 0")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if n == 0:
        return prev if t.ndim else float(prev)
    cur = 2.0 * lam * t
    for m in range(2, n + 1):
        prev, cur = cur, (2.0 * (m + lam - 1) * t * cur - (m + 2 * lam - 2) * prev) / m
    return cur if t.ndim else float(cur)


def gegenbauer_table(nmax, lam, t):
    """Rows C_0..C_nmax of the recurrence over a vector of arguments."""
    if lam <= 0:
        raise ValueError(f"gegenbauer parameter must be > 0, got {lam}")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((nmax + 1, t.size))
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 2.0 * lam * t
    for m in range(2, nmax + 1):
        out[m] = (2.0 * (m + lam - 1) * t * out[m - 1] - (m + 2 * lam - 2) * out[m - 2]) / m
    return out


def _p_prefactor(n, k):
    # P_n^k(0)/C_n^k(1) = Gamma(k+1) n! / (2k Gamma(n+k)); equals 1/2 at n=0
    return math.exp(gammaln(k + 1) + gammaln(n + 1) - math.log(2 * k) - gammaln(n + k))


def p_table(nmax, k, x):
    """P_n^k(ix) for n = 0..nmax over a vector of angles."""
    k = check_multiplicity(k)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if k == 0.0:
        out = np.cos(np.multiply.outer(np.arange(nmax + 1, dtype=float), x))
        out[0] = 0.5
        return out
    out = gegenbauer_table(nmax, k, np.cos(x))
    for n in range(nmax + 1):
        out[n] *= _p_prefactor(n, k)
    return out


def p_eval(n, k, x):
    """P_n^k(ix): the symmetrization (E_n(ix) + E_n(-ix))/2 for n >= 1.

    Convention: P_0 = 1/2 (the Gamma-factor formula's value at n = 0),
    which is what makes the E-assembly identities hold term by term.
    """
    k = check_multiplicity(k)
    x = np.asarray(x, dtype=float)
    if k == 0.0:
        val = np.cos(n * x) if n >= 1 else np.full(x.shape, 0.5) if x.ndim else 0.5
        return val if x.ndim else float(val)
    val = _p_prefactor(n, k) * gegenbauer(n, k, np.cos(x))
    return val if x.ndim else float(val)


def p_eval_real(n, k, x):
    """P_n^k at real argument: cosh x replaces cos x."""
    k = check_multiplicity(k)
    x = np.asarray(x, dtype=float)
    if k == 0.0:
        val = np.cosh(n * x) if n >= 1 else np.full(x.shape, 0.5) if x.ndim else 0.5
        return val if x.ndim else float(val)
    val = _p_prefactor(n, k) * gegenbauer(n, k, np.cosh(x))
    return val if x.ndim else float(val)


def e_table(nmax, k, x):
    """E_n^k(ix) for |n| <= nmax; row index n + nmax, columns follow x."""
    k = check_multiplicity(k)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if k == 0.0:
        return np.exp(1j * np.multiply.outer(np.arange(-nmax, nmax + 1, dtype=float), x))
    out = np.empty((2 * nmax + 1, x.size), dtype=complex)
    out[nmax] = 1.0
    if nmax == 0:
        return out
    pk = p_table(nmax, k, x)
    qk = p_table(nmax - 1, k + 1, x)
    isin = 1j * np.sin(x)
    for n in range(1, nmax + 1):
        cross = qk[n - 1] * isin
        out[nmax + n] = pk[n] + 2.0 * cross
        out[nmax - n] = ((n + 2 * k) / (n + k)) * pk[n] - (2.0 * n / (n + k)) * cross
    return out


def e_eval(n, k, x):
    """E_n^k(ix) from the closed forms; x scalar or ndarray."""
    n = int(n)
    k = check_multiplicity(k)
    x = np.asarray(x, dtype=float)
    if k == 0.0:
        val = np.exp(1j * n * x)
        return val if x.ndim else complex(val)
    if n == 0:
        return np.ones(x.shape, dtype=complex) if x.ndim else 1.0 + 0j
    m = abs(n)
    cross = 1j * np.sin(x) * p_eval(m - 1, k + 1, x)
    if n > 0:
        val = p_eval(m, k, x) + 2.0 * cross
    else:
        val = ((m + 2 * k) / (m + k)) * p_eval(m, k, x) - (2.0 * m / (m + k)) * cross
    return val if x.ndim else complex(val)


def e_eval_real(n, k, x):
    """E_n^k at real argument: sinh x replaces i sin x."""
    n = int(n)
    k = check_multiplicity(k)
    x = np.asarray(x, dtype=float)
    if k == 0.0:
        val = np.exp(n * x)
        return val if x.ndim else float(val)
    if n == 0:
        return np.ones(x.shape) if x.ndim else 1.0
    m = abs(n)
    cross = np.sinh(x) * p_eval_real(m - 1, k + 1, x)
    if n > 0:
        val = p_eval_real(m, k, x) + 2.0 * cross
    else:
        val = ((m + 2 * k) / (m + k)) * p_eval_real(m, k, x) - (2.0 * m / (m + k)) * cross
    return val if x.ndim else float(val)


def log_norm_sq(n, k):
    """log of the squared weighted L2 norm of E_n^k.

    For n >= 1 the norm is pi 2^{1-2k} (n-1)! Gamma(n+2k) / Gamma(n+k)^2;
    the other indices fold over via norm(E_0) = norm(E_1) and
    norm(E_{-m}) = norm(E_{m+1}).
    """
    n = int(n)
    k = check_multiplicity(k)
    if n <= 0:
        n = -n + 1
    return (math.log(math.pi) + (1 - 2 * k) * math.log(2.0)
            + gammaln(n) + gammaln(n + 2 * k) - 2 * gammaln(n + k))


def norm_sq(n, k):
    """Squared weighted L2 norm of E_n^k; 2 pi for every n at k = 0."""
    return math.exp(log_norm_sq(n, k))


def gamma_sq(n, k):
    """gamma_n^2 = 1 / norm_sq(n, k): the coefficient normalizer."""
    return math.exp(-log_norm_sq(n, k))


def gamma_coeff(n, k):
    """gamma_n = norm(E_n)^{-1}."""
    return math.exp(-0.5 * log_norm_sq(n, k))


class NormTable:
    """Precomputed log norms for |n| <= nmax; immutable once built."""

    __slots__ = ("k", "nmax", "_log")

    def __init__(self, k, nmax, log_values):
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "nmax", nmax)
        object.__setattr__(self, "_log", log_values)

    def __setattr__(self, name, value):
        raise AttributeError("NormTable is immutable")

    @classmethod
    def build(cls, k, nmax):
        k = check_multiplicity(k)
        vals = np.array([log_norm_sq(n, k) for n in range(-nmax, nmax + 1)])
        vals.setflags(write=False)
        return cls(k, int(nmax), vals)

    def log_norm_sq(self, n):
        return float(self._log[n + self.nmax])

    def norm_sq(self, n):
        return math.exp(self.log_norm_sq(n))

    def gamma_sq(self, n):
        return math.exp(-self.log_norm_sq(n))

    def gamma(self, n):
        return math.exp(-0.5 * self.log_norm_sq(n))


def envelope(n, k, grid):
    """max over the grid of gamma_n |sin x|^k |E_n^k(ix)|.

    The quantity that stays uniformly bounded in n; the classical case
    gives (2 pi)^{-1/2} identically.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    vals = np.abs(e_eval(n, k, grid)) * np.abs(np.sin(grid)) ** k
    return float(np.max(vals)) * gamma_coeff(n, k)
