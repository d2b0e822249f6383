"""Exact algebra on exponential polynomials sum_j c_j e^{jx}.

Everything in this module works at the coefficient level.  The weighted
inner product against |sin x|^{2k} dx reduces to Fourier moments of the
weight, which are rational multiples of the zeroth moment; inner products
used by the Gram-Schmidt construction are therefore accumulated in exact
integer arithmetic and rounded once.  That keeps the constructed basis
orthogonal to machine precision independently of the Gram matrix
conditioning.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import DegreeCapError

DEFAULT_DEGREE_CAP = 128


def check_multiplicity(k):
    """Validate the weight exponent k and return it as a float."""
    k = float(k)
    if not math.isfinite(k) or k < 0.0:
        raise ValueError(f"multiplicity k must be finite and >= 0, got {k}")
    return k


def eigenvalue(n, k):
    """Cherednik eigenvalue n_k: n + k for n > 0, n - k for n <= 0."""
    return n + k if n > 0 else n - k


def precedes(j, n):
    """Partial order j < n on integer frequencies.

    j precedes n iff |j| < |n| with |n| - |j| even, or |j| = |n| with
    n < j.  Transitive; build order for the triangular construction.
    """
    aj, an = abs(j), abs(n)
    if aj < an:
        return (an - aj) % 2 == 0
    return aj == an and n < j


def enumeration_key(j):
    """Total order 0, 1, -1, 2, -2, ... refining the partial order."""
    if j == 0:
        return 0
    return 2 * j - 1 if j > 0 else 2 * (-j)


def predecessors(n):
    """All frequencies preceding n, in enumeration order."""
    cand = [j for j in range(-abs(n), abs(n) + 1) if precedes(j, n)]
    cand.sort(key=enumeration_key)
    return cand


class ExpPoly:
    """Immutable exponential polynomial with finite integer support.

    Coefficients may be real or complex; exact zeros are dropped so the
    stored support is minimal.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        self._c = {int(j): c for j, c in coeffs.items() if c != 0}

    @classmethod
    def basis(cls, j, c=1.0):
        return cls({j: c})

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def one(cls):
        return cls({0: 1.0})

    def items(self):
        """Coefficient pairs in ascending frequency order."""
        return sorted(self._c.items())

    def coeff(self, j):
        return self._c.get(j, 0.0)

    @property
    def support(self):
        return sorted(self._c)

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        return isinstance(other, ExpPoly) and self._c == other._c

    def __hash__(self):
        return hash(tuple(self.items()))

    def __add__(self, other):
        out = dict(self._c)
        for j, c in other._c.items():
            out[j] = out.get(j, 0) + c
        return ExpPoly(out)

    def __sub__(self, other):
        out = dict(self._c)
        for j, c in other._c.items():
            out[j] = out.get(j, 0) - c
        return ExpPoly(out)

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            out = {}
            for j, c in self._c.items():
                for i, d in other._c.items():
                    out[j + i] = out.get(j + i, 0.0) + c * d
            return ExpPoly(out)
        return ExpPoly({j: other * c for j, c in self._c.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return ExpPoly({j: -c for j, c in self._c.items()})

    def shift(self, d):
        """Multiply by e^{dx}: shifts every frequency by the integer d."""
        return ExpPoly({j + d: c for j, c in self._c.items()})

    def reflect(self):
        """Compose with x -> -x."""
        return ExpPoly({-j: c for j, c in self._c.items()})

    def evaluate(self, x):
        """Value at real argument x."""
        return sum(c * math.exp(j * x) for j, c in self.items())

    def evaluate_imag(self, x):
        """Value at ix, i.e. sum_j c_j e^{ijx}; x scalar or ndarray."""
        x = np.asarray(x, dtype=float)
        items = self.items()
        if not items:
            return np.zeros(x.shape, dtype=complex) if x.ndim else 0j
        freqs = np.array([j for j, _ in items], dtype=float)
        coeffs = np.array([c for _, c in items])
        vals = np.exp(1j * np.multiply.outer(x, freqs)) @ coeffs
        return vals if x.ndim else complex(vals)

    def norm_inf(self):
        return max((abs(c) for c in self._c.values()), default=0.0)

    def allclose(self, other, tol=1e-12):
        scale = max(self.norm_inf(), other.norm_inf(), 1.0)
        return (self - other).norm_inf() <= tol * scale

    def __repr__(self):
        return "ExpPoly({%s})" % ", ".join(f"{j}: {c!r}" for j, c in self.items())


def cherednik_apply(f, k):
    """Apply the Cherednik operator T^k to an exponential polynomial.

    Acting on a single term, T^k e^{jx} = (j - k) e^{jx} + 2k D_j where
    D_j is the finite geometric sum e^{jx} + e^{(j-2)x} + ... + e^{(-j+2)x}
    for j >= 1, minus the analogous sum for j <= -1, and 0 for j = 0.
    Terms landing on a common frequency are combined with exact rounding.
    """
    k = check_multiplicity(k)
    buckets = {}

    def put(j, v):
        buckets.setdefault(j, []).append(v)

    for j, c in f.items():
        put(j, c * (j - k))
        if k != 0.0 and j != 0:
            if j > 0:
                for m in range(j):
                    put(j - 2 * m, 2 * k * c)
            else:
                for m in range(-j):
                    put(-j - 2 * m, -2 * k * c)
    out = {}
    for j, terms in buckets.items():
        if any(isinstance(t, complex) for t in terms):
            out[j] = complex(math.fsum(t.real for t in map(complex, terms)),
                             math.fsum(t.imag for t in map(complex, terms)))
        else:
            out[j] = math.fsum(terms)
    return ExpPoly(out)


# -- weight moments -----------------------------------------------------
#
# mu(2r) / mu(0) = prod_{j=1..r} -(k+1-j)/(k+j) is rational in k, and any
# float k is an exact rational, so the normalized moments are computed as
# exact Fractions.  mu(0) = pi 2^{1-2k} Gamma(2k+1)/Gamma(k+1)^2 carries
# the only transcendental factor.


@lru_cache(maxsize=None)
def _moment_fracs(k, rmax):
    kf = Fraction(k)
    out = [Fraction(1)]
    for r in range(1, rmax + 1):
        out.append(out[-1] * (-(kf + 1 - r)) / (kf + r))
    return tuple(out)


@lru_cache(maxsize=None)
def _moment_ints(k, rmax):
    """Normalized moments as integers P_r over a common denominator Q."""
    fr = _moment_fracs(k, rmax)
    q = math.lcm(*(f.denominator for f in fr))
    return tuple(f.numerator * (q // f.denominator) for f in fr), q


@lru_cache(maxsize=None)
def _moment0(k):
    return math.pi * 2.0 ** (1 - 2 * k) * math.exp(gammaln(2 * k + 1) - 2 * gammaln(k + 1))


def weight_fourier_moment(m, k):
    """Fourier moment of the weight: integral of e^{imx}|sin x|^{2k} dx.

    Zero for odd m.  For m = 2r the value is
    pi 2^{1-2k} (-1)^r Gamma(2k+1) / (Gamma(k+1+r) Gamma(k+1-r)), with the
    reciprocal Gamma entire, so integer k gives exact zeros for r > k.
    """
    k = check_multiplicity(k)
    m = abs(int(m))
    if m % 2:
        return 0.0
    r = m // 2
    ratio = _moment_fracs(k, r)[r]
    return float(ratio) * _moment0(k)


def _int_vec(vals):
    """Exact integer numerators of floats over a power-of-two denominator."""
    ratios = [float(v).as_integer_ratio() for v in vals]
    den = 1
    for _, d in ratios:
        den = max(den, d)
    return [a * (den // d) for a, d in ratios], den


def _ip_num(fa, na, fb, nb, table):
    # integer numerator of the normalized inner product
    tot = 0
    for j, cj in zip(fa, na):
        if cj == 0:
            continue
        for m, dm in zip(fb, nb):
            r = j - m
            if r % 2 or dm == 0:
                continue
            tot += cj * dm * table[abs(r) >> 1]
    return tot


def _split_parts(f):
    items = f.items()
    freqs = [j for j, _ in items]
    re = [complex(c).real for _, c in items]
    im = [complex(c).imag for _, c in items]
    return freqs, re, im


def inner_product(f, g, k):
    """Weighted inner product (f, g)_k = integral f(ix) conj(g(ix)) dm_k.

    Bilinear expansion over weight moments, accumulated exactly in
    integer arithmetic and rounded once at the end.
    """
    k = check_multiplicity(k)
    if not f or not g:
        return 0j
    ff, fre, fim = _split_parts(f)
    gf, gre, gim = _split_parts(g)
    rmax = (max(abs(j) for j in ff) + max(abs(j) for j in gf)) // 2
    table, q = _moment_ints(k, rmax)
    nre_a, da = _int_vec(fre)
    nim_a, da2 = _int_vec(fim)
    nre_b, db = _int_vec(gre)
    nim_b, db2 = _int_vec(gim)
    # align the two power-of-two denominators within each polynomial
    if da2 != da:
        d = max(da, da2)
        nre_a = [v * (d // da) for v in nre_a]
        nim_a = [v * (d // da2) for v in nim_a]
        da = d
    if db2 != db:
        d = max(db, db2)
        nre_b = [v * (d // db) for v in nre_b]
        nim_b = [v * (d // db2) for v in nim_b]
        db = d
    # (a+bi)(e-fi) = (ae+bf) + i(be-af)
    re_num = _ip_num(ff, nre_a, gf, nre_b, table) + _ip_num(ff, nim_a, gf, nim_b, table)
    im_num = _ip_num(ff, nim_a, gf, nre_b, table) - _ip_num(ff, nre_a, gf, nim_b, table)
    den = da * db * q
    scale = _moment0(k)
    return complex(float(Fraction(re_num, den)) * scale,
                   float(Fraction(im_num, den)) * scale)


# -- Gram-Schmidt construction ------------------------------------------


@lru_cache(maxsize=None)
def _exact_form(n, k):
    """Integer form and exact normalized norm^2 of the cached E_n."""
    e = _build_E(n, k)
    items = e.items()
    freqs = tuple(j for j, _ in items)
    nums, den = _int_vec([c for _, c in items])
    table, q = _moment_ints(k, abs(n) if n else 0)
    norm_num = _ip_num(freqs, nums, freqs, nums, table)
    norm = Fraction(norm_num, den * den * q)
    return freqs, tuple(nums), den, norm


@lru_cache(maxsize=None)
def _build_E(n, k):
    if k == 0.0 or n == 0:
        return ExpPoly.basis(n)
    preds = predecessors(n)
    rmax = abs(n)
    table, q = _moment_ints(k, rmax)
    mu = [float(Fraction(p, q)) for p in table]

    def ip_float(fc, gc):
        return math.fsum(cj * dm * mu[abs(j - m) >> 1]
                         for j, cj in fc.items()
                         for m, dm in gc.items() if (j - m) % 2 == 0)

    pred_polys = [_build_E(j, k) for j in preds]
    coeffs = {n: 1.0}
    # first sweep in doubles gets within rounding of the projection
    for ej in pred_polys:
        ejc = dict(ej.items())
        c = ip_float(coeffs, ejc) / ip_float(ejc, ejc)
        for m, v in ejc.items():
            coeffs[m] = coeffs.get(m, 0.0) - c * v
    # second sweep with exact inner products removes what rounding left
    for j, ej in zip(preds, pred_polys):
        fj, nj, dj, norm_j = _exact_form(j, k)
        items = sorted(coeffs.items())
        fe = [m for m, _ in items]
        ne, de = _int_vec([v for _, v in items])
        num = _ip_num(fe, ne, fj, nj, table)
        c = float(Fraction(num, de * dj * q) / norm_j)
        for m, v in ej.items():
            coeffs[m] = coeffs.get(m, 0.0) - c * v
    return ExpPoly({m: v for m, v in coeffs.items() if v != 0.0})


def build_E_gram_schmidt(n, k, max_degree=DEFAULT_DEGREE_CAP):
    """Construct E_n^k by Gram-Schmidt in the exponential basis.

    Monic on e^{nx} with support inside {n} and its predecessors,
    orthogonal to every preceding exponential under the k-weighted inner
    product.  Predecessors are processed in the enumeration order
    0, 1, -1, 2, -2, ...  Results are cached per (n, k).

    Raises
    ------
    DegreeCapError
        if |n| exceeds max_degree.
    """
    n = int(n)
    k = check_multiplicity(k)
    if abs(n) > max_degree:
        raise DegreeCapError(f"|n| = {abs(n)} exceeds degree cap {max_degree}")
    return _build_E(n, k)


def gram_schmidt_norm_sq(n, k):
    """Exact-arithmetic norm^2 of the constructed E_n (float)."""
    n = int(n)
    k = check_multiplicity(k)
    if k == 0.0:
        return 2.0 * math.pi
    _, _, _, norm = _exact_form(n, k)
    return float(norm) * _moment0(k)


@dataclass
class IdentityReport:
    """Residuals of the structural identities at one index."""

    n: int
    k: float
    eigenvalue: float
    eigen_residual: float
    shift_residual: float
    reflect_residual: float  # None when n < 1
    sym_eigen_residual: float


def identity_checks(n, k, max_degree=DEFAULT_DEGREE_CAP):
    """Coefficient-level residuals of the defining identities at index n.

    Checks, with everything built independently by Gram-Schmidt:
    the shift identity E_{n+1}(x) = e^x E_{-n}(-x); the reflection
    identity E_{-n}(x) = E_n(-x) + (k/(n+k)) E_n(x) for n >= 1; the
    eigen-identity T^k E_n = n_k E_n; and the symmetrized identity
    (T^k)^2 P = (|n|+k)^2 P with P the even part of E_n.  Residuals are
    sup-norms of coefficient differences scaled by the operand size.
    """
    n = int(n)
    k = check_multiplicity(k)
    e_n = build_E_gram_schmidt(n, k, max_degree)

    lam = eigenvalue(n, k)
    r_eig = (cherednik_apply(e_n, k) - lam * e_n).norm_inf() / e_n.norm_inf()

    e_next = build_E_gram_schmidt(n + 1, k, max_degree)
    e_mirror = build_E_gram_schmidt(-n, k, max_degree)
    r_shift = (e_next - e_mirror.reflect().shift(1)).norm_inf() / e_next.norm_inf()

    r_reflect = None
    if n >= 1:
        rhs = e_n.reflect() + (k / (n + k)) * e_n
        r_reflect = (build_E_gram_schmidt(-n, k, max_degree) - rhs).norm_inf() / rhs.norm_inf()

    p = 0.5 * (e_n + e_n.reflect())
    lam2 = (abs(n) + k) ** 2
    tt = cherednik_apply(cherednik_apply(p, k), k)
    r_sym = (tt - lam2 * p).norm_inf() / max(p.norm_inf(), 1e-300)

    return IdentityReport(n=n, k=k, eigenvalue=lam, eigen_residual=r_eig,
                          shift_residual=r_shift, reflect_residual=r_reflect,
                          sym_eigen_residual=r_sym)
