"""Exact multivariate polynomial / rational function arithmetic.

Coefficients are fractions.Fraction, exponents live in a fixed variable
tuple.  Rational functions are stored unreduced (no multivariate gcd); the
only questions we ever ask are "is this identically zero?" and "what is the
value at an exact rational point?", and both are answered without
normalizing: a sum of fractions is zero iff, after clearing to the common
product denominator, the numerator expands to the zero polynomial.

Weight labels that must satisfy a linear constraint (the labels of a symbol
sum to zero) are handled by eliminating the last variable up front, so
zero-testing happens in free variables.
"""

from __future__ import annotations

from fractions import Fraction


class Poly:
    """Multivariate polynomial: dict exponent-tuple -> Fraction."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        self.terms = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[tuple(e)] = c

    @classmethod
    def const(cls, vars, c):
        return cls(vars, {(0,) * len(tuple(vars)): Fraction(c)})

    @classmethod
    def variable(cls, vars, name):
        vars = tuple(vars)
        e = tuple(1 if v == name else 0 for v in vars)
        if sum(e) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls(vars, {e: Fraction(1)})

    @classmethod
    def linear(cls, vars, coeffs, const=0):
        """sum_i coeffs[v]*v + const."""
        vars = tuple(vars)
        terms = {}
        for v, c in coeffs.items():
            i = vars.index(v)
            e = tuple(1 if j == i else 0 for j in range(len(vars)))
            terms[e] = terms.get(e, Fraction(0)) + Fraction(c)
        if const:
            terms[(0,) * len(vars)] = Fraction(const)
        return cls(vars, terms)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items()))))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.vars, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Poly.const(self.vars, 1)
        for _ in range(n):
            out = out * self
        return out

    def eval(self, values):
        total = Fraction(0)
        for e, c in self.terms.items():
            m = c
            for v, n in zip(self.vars, e):
                if n:
                    m *= Fraction(values[v]) ** n
            total += m
        return total

    def subs_linear(self, var, replacement):
        """Substitute a Poly for one variable (used for label elimination)."""
        i = self.vars.index(var)
        out = Poly(self.vars, {})
        for e, c in self.terms.items():
            base = Poly(self.vars, {e[:i] + (0,) + e[i + 1:]: c})
            out = out + base * replacement ** e[i]
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"{v}^{n}" if n != 1 else v for v, n in zip(self.vars, e) if n
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


class RationalFn:
    """num/den, unreduced.  den must be nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = Poly.const(num.vars, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def const(cls, vars, c):
        return cls(Poly.const(vars, c))

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFn.const(self.vars, other)
        return RationalFn(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFn.const(self.vars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFn(self.num * other, self.den)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFn(self.num, self.den * other)
        return RationalFn(self.num * other.den, self.den * other.num)

    def inv(self):
        return RationalFn(self.den, self.num)

    def eval(self, values):
        d = self.den.eval(values)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return self.num.eval(values) / d

    def equals(self, other):
        """Exact identity test via cross multiplication and expansion."""
        if isinstance(other, (int, Fraction)):
            other = RationalFn.const(self.vars, other)
        return (self.num * other.den - other.num * self.den).is_zero()

    def __repr__(self):
        return f"({self.num}) / ({self.den})"


def rational_sum(parts):
    """Sum an iterable of RationalFn over one common product denominator.

    Builds num = sum_i num_i * prod_{j != i} den_j once, instead of chaining
    pairwise additions (keeps intermediate expansion smaller for the
    cancellation identities)."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty sum")
    vars = parts[0].vars
    total_den = Poly.const(vars, 1)
    for p in parts:
        total_den = total_den * p.den
    total_num = Poly(vars, {})
    for i, p in enumerate(parts):
        piece = p.num
        for j, q in enumerate(parts):
            if j != i:
                piece = piece * q.den
        total_num = total_num + piece
    return RationalFn(total_num, total_den)
