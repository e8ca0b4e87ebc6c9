"""Elliptic building blocks: theta, Eisenstein functions, the two-variable
elliptic kernel F, and the one-form coefficient ladder it generates.

Conventions.  e(x) = exp(2*pi*i*x), q = e(tau) with Im(tau) > 0.  Points on
the curve are carried as the real pair (s, r) with xi = s + r*tau: keeping
the decomposition explicit fixes branches (z^(1/2) = e(xi/2)) and makes the
non-holomorphic coordinate r available to the one-form machinery (nu is
2*pi*i*dr).

The kernel F(xi, eta) has three interchangeable evaluators:

* theta_ratio       theta'(0) theta(xi+eta) / (theta(xi) theta(eta))
* double_q_series   the absolutely convergent double q-series, after
                    reducing r-coordinates into [0, 1) by quasi-periodicity
                    (each tau-shift of xi contributes a factor 1/e(eta)) and
                    resumming the inner geometric series
* exp_eisenstein    a Laurent series in a formal second slot, with a simple
                    pole and exponential of weighted Eisenstein functions

Eisenstein sums use the conditionally convergent double-sum order: the inner
(integer) direction is summed in closed form via cotangent polynomials,
which is its exact limit, and the outer direction is accumulated
symmetrically n, -n.  Reordering is not allowed.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import BadModulus, OnLattice, OnSingularLocus
from .precision import get_context
from .series import INF, MultiSeries

_LATTICE_TOL = 1e-12


@lru_cache(maxsize=None)
def _cot_poly(j):
    """Coefficients (low to high, exact) of the polynomial P_j with
    sum_m 1/(x+m)^j = pi^j P_j(cot(pi x));  P_1 = c, P_{j+1} = (1+c^2)P_j'/j."""
    if j == 1:
        return (Fraction(0), Fraction(1))
    prev = _cot_poly(j - 1)
    deriv = tuple(prev[k + 1] * (k + 1) for k in range(len(prev) - 1))
    out = [Fraction(0)] * (len(prev) + 1)
    for k, c in enumerate(deriv):
        out[k] += c
        out[k + 2] += c
    return tuple(c / (j - 1) for c in out)


@lru_cache(maxsize=None)
def _bernoulli(n):
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for j in range(n):
        total += Fraction(math.comb(n + 1, j)) * _bernoulli(j)
    return -total / (n + 1)


def zeta_even(j):
    """zeta(j) for positive even j, from the Bernoulli closed form."""
    if j <= 0 or j % 2:
        raise ValueError("even positive index required")
    k = j // 2
    b = _bernoulli(j)
    return float((-1) ** (k + 1) * b * Fraction(2) ** (j - 1)) * math.pi**j / math.factorial(j)


class EllipticPoint:
    """A point on the universal cover, stored as the real pair (s, r) with
    xi = s + r*tau.  The pair is never re-derived from xi, so branch data
    survives arithmetic exactly."""

    __slots__ = ("s", "r")

    def __init__(self, s, r):
        self.s = float(s)
        self.r = float(r)

    @classmethod
    def from_xi(cls, xi, tau):
        xi = complex(xi)
        tau = complex(tau)
        r = xi.imag / tau.imag
        return cls(xi.real - r * tau.real, r)

    def xi(self, tau):
        return self.s + self.r * complex(tau)

    def z(self, ctx):
        return ctx.prec.e(self.s + self.r * ctx.tau)

    def __add__(self, other):
        return EllipticPoint(self.s + other.s, self.r + other.r)

    def __sub__(self, other):
        return EllipticPoint(self.s - other.s, self.r - other.r)

    def __neg__(self):
        return EllipticPoint(-self.s, -self.r)

    def shift(self, ds=0, dr=0):
        return EllipticPoint(self.s + ds, self.r + dr)

    def is_lattice(self, tol=_LATTICE_TOL):
        ds = abs(self.s - round(self.s))
        dr = abs(self.r - round(self.r))
        return ds < tol and dr < tol

    def __repr__(self):
        return f"EllipticPoint(s={self.s!r}, r={self.r!r})"


class LatticeContext:
    """Fixed modulus tau plus truncation policy.

    q_series_cutoff bounds the number of q-powers in theta products and the
    kernel's double series; lattice_cutoff = (M, N) records the Eisenstein
    summation window: the inner direction is evaluated in closed form (its
    exact M -> infinity limit), N bounds the outer symmetric sum.  Moduli
    with |q| > 0.7 are refused: every truncation bound here assumes a
    reasonable decay rate, and the conditionally convergent sums degrade
    badly as |q| -> 1.
    """

    def __init__(self, tau, precision=None, q_series_cutoff=None, lattice_cutoff=None):
        self.prec = get_context(precision)
        self.tau = self.prec.complex(tau)
        if self.prec.im(self.tau) <= 0:
            raise BadModulus("Im(tau) must be positive")
        self.q = self.prec.e(self.tau)
        qa = abs(self.q)
        if qa > 0.7:
            raise BadModulus(f"|q| = {qa:.3f} exceeds the supported range (0.7)")
        decade = -math.log10(qa)
        auto = int(math.ceil((self.prec.digits + 4) / decade)) + 2
        self.q_series_cutoff = q_series_cutoff or auto
        self.lattice_cutoff = lattice_cutoff or (INF, auto + 4)
        self._e_cache = {}
        self._theta_prime0 = None

    def e(self, x):
        return self.prec.e(x)

    def point(self, s, r):
        return EllipticPoint(s, r)

    def point_from_xi(self, xi):
        return EllipticPoint.from_xi(complex(xi), complex(self.tau))

    def tail_bound(self):
        """Crude magnitude of the first neglected q-power, for reporting."""
        return abs(self.q) ** self.q_series_cutoff

    def __repr__(self):
        return f"LatticeContext(tau={complex(self.tau)!r}, |q|={abs(self.q):.4g})"


# ----------------------------------------------------------------- theta


def theta(p, ctx):
    """The odd theta function, normalized so theta'(0) = 2*pi*i*q^(1/12)
    prod(1-q^j)^2.  Arbitrary (s, r) handled by exact quasi-periodicity
    reduction into s, r in [0, 1)."""
    m = math.floor(p.s)
    k = math.floor(p.r)
    s0 = p.s - m
    r0 = p.r - k
    e = ctx.e
    xi0 = s0 + r0 * ctx.tau
    sign = -1 if (m + k) % 2 else 1
    pref = sign * e(-(k * k) * ctx.tau / 2) * e(-k * xi0)
    return pref * _theta_reduced(s0, r0, ctx)


def _theta_reduced(s0, r0, ctx):
    e = ctx.e
    xi0 = s0 + r0 * ctx.tau
    z = e(xi0)
    val = e(ctx.tau / 12) * (e(xi0 / 2) - e(-xi0 / 2))
    q = ctx.q
    qj = q
    for _ in range(ctx.q_series_cutoff):
        val *= (1 - qj * z) * (1 - qj / z)
        qj *= q
    return val


def theta_prime0(ctx):
    """theta'(0), from the closed form (derivative of the prefactor times
    the product at z = 1)."""
    if ctx._theta_prime0 is None:
        q = ctx.q
        prod = ctx.prec.complex(1)
        qj = q
        for _ in range(ctx.q_series_cutoff):
            prod *= (1 - qj) ** 2
            qj *= q
        ctx._theta_prime0 = ctx.prec.two_pi_i * ctx.e(ctx.tau / 12) * prod
    return ctx._theta_prime0


# ------------------------------------------------------------- eisenstein


def _inner_row(j, x, ctx):
    """sum over the integer direction of 1/(x + m)^j, in closed form."""
    c = ctx.prec.cot_pi(x)
    coeffs = _cot_poly(j)
    acc = ctx.prec.complex(0)
    for coef in reversed(coeffs):
        acc = acc * c + float(coef)
    return ctx.prec.pi**j * acc


def eisenstein_E(j, p, ctx):
    """E_j at the point p: the conditionally convergent lattice sum of
    1/(xi + m + n*tau)^j, inner direction exact, outer symmetric."""
    if j < 1:
        raise ValueError("index must be >= 1")
    if p.is_lattice():
        raise OnLattice(f"E_{j} pole at {p!r}")
    tau = ctx.tau
    total = _inner_row(j, p.s + p.r * tau, ctx)
    eps = 10.0 ** (-(ctx.prec.digits + 2))
    settled = 0
    n_min = int(abs(p.r)) + 1
    for n in range(1, ctx.lattice_cutoff[1] + n_min):
        inc = _inner_row(j, p.s + (p.r + n) * tau, ctx) + _inner_row(
            j, p.s + (p.r - n) * tau, ctx
        )
        total += inc
        if n >= n_min and abs(inc) < eps * (abs(total) + 1):
            settled += 1
            if settled >= 2:
                break
        else:
            settled = 0
    return total


def lattice_constant(j, ctx):
    """e_j: the lattice sum without the origin; vanishes for odd j."""
    if j < 1:
        raise ValueError("index must be >= 1")
    if j % 2:
        return ctx.prec.complex(0)
    if j in ctx._e_cache:
        return ctx._e_cache[j]
    total = ctx.prec.complex(2 * zeta_even(j))
    eps = 10.0 ** (-(ctx.prec.digits + 2))
    settled = 0
    for n in range(1, ctx.lattice_cutoff[1] + 1):
        inc = 2 * _inner_row(j, n * ctx.tau, ctx)  # even j: n and -n agree
        total += inc
        if abs(inc) < eps * (abs(total) + 1):
            settled += 1
            if settled >= 2:
                break
        else:
            settled = 0
    ctx._e_cache[j] = total
    return total


def weierstrass_p(p, ctx):
    return eisenstein_E(2, p, ctx) - lattice_constant(2, ctx)


def weierstrass_p_prime(p, ctx):
    return -2 * eisenstein_E(3, p, ctx)


def eisenstein(kind, j=None, xi=None, ctx=None):
    """Selector wrapper: kind in {"E", "e", "weierstrass_p"}."""
    if kind == "E":
        return eisenstein_E(j, xi, ctx)
    if kind == "e":
        return lattice_constant(j, ctx)
    if kind == "weierstrass_p":
        return weierstrass_p(xi, ctx)
    raise ValueError(f"unknown kind {kind!r}")


# ----------------------------------------------------------------- kernel


def kronecker_F(xi, eta_or_alpha, ctx, definition="theta_ratio"):
    """The elliptic kernel F.

    definition:
      * "theta_ratio" / "double_q_series": eta_or_alpha is an EllipticPoint,
        returns a complex value.
      * "exp_eisenstein": eta_or_alpha is a truncation order K, returns a
        Laurent MultiSeries in the formal variable "alpha" with window
        [-1, K-1].
    """
    if definition == "theta_ratio":
        return _F_theta(xi, eta_or_alpha, ctx)
    if definition == "double_q_series":
        return _F_qseries(xi, eta_or_alpha, ctx)
    if definition == "exp_eisenstein":
        return _F_series(xi, int(eta_or_alpha), ctx)
    raise ValueError(f"unknown definition {definition!r}")


def _F_theta(xi, eta, ctx):
    if xi.is_lattice() or eta.is_lattice():
        raise OnSingularLocus("kernel pole: argument on the lattice")
    return theta_prime0(ctx) * theta(xi + eta, ctx) / (theta(xi, ctx) * theta(eta, ctx))


def _F_qseries(xi, eta, ctx):
    if xi.is_lattice() or eta.is_lattice():
        raise OnSingularLocus("kernel pole: argument on the lattice")
    # reduce r into [-1/2, 1/2): the resummed series decays like
    # |q|^(n(1-|r|)), so the nearest-integer representative conditions best
    k = math.floor(xi.r + 0.5)
    l = math.floor(eta.r + 0.5)
    x0 = xi.shift(dr=-k)
    e0 = eta.shift(dr=-l)
    z = x0.z(ctx)
    w = e0.z(ctx)
    # tau-shifts of xi cost e(eta)^-1 with the *unreduced* eta, and shifts
    # of eta cost e(xi0)^-1; together w0^-k z0^-l q^-kl
    factor = w ** (-k) * z ** (-l) * ctx.q ** (-k * l)
    if abs(1 - z) < _LATTICE_TOL or abs(1 - w) < _LATTICE_TOL:
        raise OnSingularLocus("kernel pole after reduction")
    total = z / (1 - z) + 1 / (1 - w)
    q = ctx.q
    eps = 10.0 ** (-(ctx.prec.digits + 2))
    qn = ctx.prec.complex(1)
    wn = ctx.prec.complex(1)
    win = ctx.prec.complex(1)
    for n in range(1, 8 * ctx.q_series_cutoff):
        qn *= q
        wn *= w
        win /= w
        d1 = 1 - qn * z
        d2 = 1 - qn / z
        if abs(d1) < _LATTICE_TOL or abs(d2) < _LATTICE_TOL:
            raise OnSingularLocus("kernel pole after reduction")
        inc = wn * (qn * z) / d1 - win * (qn / z) / d2
        total += inc
        if abs(inc) < eps * (abs(total) + 1):
            break
    return -ctx.prec.two_pi_i * total * factor


def _F_series(xi, K, ctx):
    if xi.is_lattice():
        raise OnSingularLocus("kernel pole: xi on the lattice")
    terms = {}
    for j in range(1, K + 1):
        ej = lattice_constant(j, ctx)
        val = eisenstein_E(j, xi, ctx) - ej
        terms[(j,)] = -((-1) ** j) * ctx.prec.to_complex(val) / j
    arg = MultiSeries(("alpha",), terms, K)
    pole = MultiSeries(("alpha",), {(-1,): 1.0}, INF, -1)
    return pole * arg.exp()


def kronecker_F_value(xi, eta, ctx, definition="theta_ratio", order=None):
    """Numeric value of F(xi, eta) under any definition; exp_eisenstein is
    summed at the given truncation order (default from ctx)."""
    if definition == "exp_eisenstein":
        K = order or (ctx.prec.digits + 10)
        ser = _F_series(xi, K, ctx)
        return ser.eval_at({"alpha": complex(eta.xi(ctx.tau))})
    return kronecker_F(xi, eta, ctx, definition)


# ---------------------------------------------------------------- one-forms


def omega_coefficients(p, K, ctx):
    """Values of the one-form coefficients at the point p: entry k is the
    dxi-coefficient of the alpha^(k-1) term of e(alpha*r) F(xi; alpha)."""
    fser = _F_series(p, K + 1, ctx)
    r2pi = complex(ctx.prec.two_pi_i) * p.r
    ecf = {}
    fact = 1.0
    for k in range(K + 2):
        if k:
            fact *= k
        ecf[(k,)] = r2pi**k / fact
    eser = MultiSeries(("alpha",), ecf, K + 1)
    prod = fser * eser
    return [prod.coeff((k - 1,)) for k in range(K + 1)]


def omega_expand(i, j, K, ctx, points):
    """One-form coefficient values for the point pair (i, j), as
    (dxi-component, dr-component) pairs for k = 0..K.  Index 0 refers to the
    marked basepoint; points[m-1] is the m-th coordinate."""
    pi_ = EllipticPoint(0.0, 0.0) if i == 0 else points[i - 1]
    pj_ = EllipticPoint(0.0, 0.0) if j == 0 else points[j - 1]
    if i == j:
        return [(0.0, 0.0)] * (K + 1)
    d = pi_ - pj_
    if d.is_lattice():
        raise OnSingularLocus("coincident points")
    vals = omega_coefficients(d, K, ctx)
    return [(v, 0.0) for v in vals]
