"""String Hopf algebra on ordered point sequences.

Symbols (t_{i_1}:...:t_{i_l}; labels) with exact rational labels summing to
zero, directed consecutive strings, admissible collections, the reduced
coproduct and its one-star / star-one components, iterated coproducts, the
divisor-asymptotics assembly, and the partial-fraction identities used for
residue bookkeeping.  Everything here is exact; numeric realizations are
supplied by callers as callbacks.
"""

from fractions import Fraction

from .errors import SizeBudgetExceeded
from .rational import Poly, RationalFn, rational_sum

DEFAULT_SIZE_BUDGET = 10**6


def _vec(width, entries=None):
    v = [Fraction(0)] * width
    for i, c in (entries or {}).items():
        v[i] = Fraction(c)
    return tuple(v)


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_neg(a):
    return tuple(-x for x in a)


def label_str(vec, names=None):
    """Render a label vector like '-b1-b2' over b1, b2, ...."""
    names = names or [f"b{i + 1}" for i in range(len(vec))]
    bits = []
    for c, name in zip(vec, names):
        if c == 0:
            continue
        if c == 1:
            bits.append(f"+{name}")
        elif c == -1:
            bits.append(f"-{name}")
        else:
            bits.append(f"{'+' if c > 0 else '-'}{abs(c)}*{name}")
    if not bits:
        return "0"
    out = "".join(bits)
    return out[1:] if out.startswith("+") else out


class ASymbol:
    """One bracket symbol (t_{i_1}: ... : t_{i_l}; labels).

    `ts` are 1-based point indices into the ambient tuple (index n is the
    slot fixed at 1 in realizations).  Labels are exact vectors over a free
    basis b_1..b_w and must sum to zero; the last label of a string symbol
    is minus the sum of the others by construction.
    """

    __slots__ = ("ts", "labels")

    def __init__(self, ts, labels):
        self.ts = tuple(int(i) for i in ts)
        self.labels = tuple(tuple(Fraction(c) for c in lab) for lab in labels)
        if len(self.ts) < 2:
            raise ValueError("symbol needs at least two slots")
        if len(self.labels) != len(self.ts):
            raise ValueError("one label per slot required")
        width = len(self.labels[0])
        if any(len(lab) != width for lab in self.labels):
            raise ValueError("ragged label vectors")
        total = self.labels[0]
        for lab in self.labels[1:]:
            total = _vec_add(total, lab)
        if any(c != 0 for c in total):
            raise ValueError("labels must sum to zero")

    @property
    def length(self):
        return len(self.ts)

    def key(self):
        return (self.ts, self.labels)

    def __eq__(self, other):
        return isinstance(other, ASymbol) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        heads = ":".join(f"t{i}" for i in self.ts)
        tails = ", ".join(label_str(lab) for lab in self.labels)
        return f"({heads}; {tails})"


def canonical_symbol(n):
    """(t_1:...:t_n; b_1,...,b_{n-1}, -sum) over the free basis b_1..b_{n-1}."""
    if n < 2:
        raise ValueError("need at least two slots")
    width = n - 1
    labels = [_vec(width, {i: 1}) for i in range(width)]
    labels.append(_vec_neg(_vec_add_many(labels)))
    return ASymbol(range(1, n + 1), labels)


def _vec_add_many(vecs):
    out = vecs[0]
    for v in vecs[1:]:
        out = _vec_add(out, v)
    return out


class StringSym:
    """A directed run of consecutive positions inside a length-m symbol.

    Positions are 1-based, strictly consecutive (ascending or descending),
    of length l with 2 <= l < m, and the first position is never m.
    """

    __slots__ = ("positions", "total")

    def __init__(self, positions, total):
        self.positions = tuple(int(p) for p in positions)
        self.total = int(total)
        l = len(self.positions)
        if not 2 <= l < self.total:
            raise ValueError("string length out of range")
        steps = {b - a for a, b in zip(self.positions, self.positions[1:])}
        if steps not in ({1}, {-1}):
            raise ValueError("positions must be consecutive in one direction")
        if self.positions[0] == self.total:
            raise ValueError("string may not start at the final position")
        if not all(1 <= p <= self.total for p in self.positions):
            raise ValueError("position out of range")

    @property
    def last(self):
        return self.positions[-1]

    @property
    def increasing(self):
        return self.positions[1] > self.positions[0]

    @property
    def sign(self):
        return 1 if self.increasing else (-1) ** (len(self.positions) - 1)

    def __eq__(self, other):
        return (
            isinstance(other, StringSym)
            and self.positions == other.positions
            and self.total == other.total
        )

    def __hash__(self):
        return hash((self.positions, self.total))

    def __repr__(self):
        return f"S{self.positions}"


def enumerate_strings(total):
    """All valid strings inside a symbol of the given length."""
    out = []
    for lo in range(1, total + 1):
        for hi in range(lo + 1, total + 1):
            l = hi - lo + 1
            if l >= total:
                continue
            if lo != total:
                out.append(StringSym(range(lo, hi + 1), total))
            if hi != total:
                out.append(StringSym(range(hi, lo - 1, -1), total))
    return out


def _compatible(a, b):
    sa, sb = set(a.positions), set(b.positions)
    inter = sa & sb
    if not inter:
        return True
    return inter == {a.last} and a.last == b.last


def admissible_collections(total, include_empty=False):
    """Non-empty admissible collections of strings (pairwise disjoint or
    sharing exactly a common last position)."""
    strings = enumerate_strings(total)
    out = [()] if include_empty else []

    def extend(start, chosen):
        for i in range(start, len(strings)):
            s = strings[i]
            if all(_compatible(s, c) and _compatible(c, s) for c in chosen):
                combo = chosen + (s,)
                out.append(combo)
                extend(i + 1, combo)

    extend(0, ())
    return out


def string_symbol(sym, string):
    """The symbol A_S cut out of `sym` by a string of positions."""
    ts = tuple(sym.ts[p - 1] for p in string.positions)
    body = [sym.labels[p - 1] for p in string.positions[:-1]]
    beta_s = _vec_add_many(body)
    return ASymbol(ts, body + [_vec_neg(beta_s)])


def quotient_symbol(sym, collection):
    """The quotient of `sym` by an admissible collection, or None if fewer
    than two positions remain."""
    covered = set()
    for s in collection:
        covered.update(s.positions)
    remaining = sorted(
        (set(range(1, sym.length + 1)) - covered) | {s.last for s in collection}
    )
    if len(remaining) < 2:
        return None
    labels = []
    for p in remaining:
        lab = sym.labels[p - 1]
        for s in collection:
            if s.last == p:
                lab = _vec_add(lab, _vec_add_many([sym.labels[q - 1] for q in s.positions[:-1]]))
        labels.append(lab)
    return ASymbol((sym.ts[p - 1] for p in remaining), labels)


class HopfElement:
    """Formal sum of tensors of symbol products with exact coefficients.

    Keys are tuples of slots; a slot is a sorted tuple of ASymbol (the empty
    tuple is the algebra unit).
    """

    def __init__(self, terms=None, budget=DEFAULT_SIZE_BUDGET):
        self.budget = budget
        self.terms = {}
        for key, c in (terms or {}).items():
            self.add(key, c)

    def add(self, key, coeff):
        coeff = Fraction(coeff)
        if coeff == 0:
            return
        cur = self.terms.get(key, Fraction(0)) + coeff
        if cur == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = cur
            if len(self.terms) > self.budget:
                raise SizeBudgetExceeded(
                    f"element exceeds {self.budget} terms"
                )

    @property
    def rank(self):
        return len(next(iter(self.terms))) if self.terms else 0

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, HopfElement) and self.terms == other.terms

    def __add__(self, other):
        out = HopfElement(self.terms, budget=self.budget)
        for key, c in other.terms.items():
            out.add(key, c)
        return out

    def __sub__(self, other):
        out = HopfElement(self.terms, budget=self.budget)
        for key, c in other.terms.items():
            out.add(key, -c)
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __repr__(self):
        bits = []
        for key, c in self.sorted_terms():
            slots = " (x) ".join(
                "1" if not slot else ".".join(repr(s) for s in slot) for slot in key
            )
            bits.append(f"{c} * {slots}")
        return " + ".join(bits) if bits else "0"


def _delta_prime_symbol(sym):
    """[(coeff, left_slot, right_symbol)] for the reduced coproduct of one
    symbol: signed admissible collections against their quotients."""
    out = []
    for coll in admissible_collections(sym.length):
        q = quotient_symbol(sym, coll)
        if q is None:
            continue
        coeff = 1
        for s in coll:
            coeff *= s.sign
        left = tuple(sorted(string_symbol(sym, s) for s in coll))
        out.append((Fraction(coeff), left, q))
    return out


def coproduct_delta_prime(sym, budget=DEFAULT_SIZE_BUDGET):
    """Reduced coproduct of a single symbol as a rank-2 element."""
    el = HopfElement(budget=budget)
    for coeff, left, q in _delta_prime_symbol(sym):
        el.add((left, (q,)), coeff)
    return el


def _delta_symbol_full(sym):
    terms = [(Fraction(1), (sym,), ()), (Fraction(1), (), (sym,))]
    terms.extend((c, left, (q,)) for c, left, q in _delta_prime_symbol(sym))
    return terms


def _delta_slot(slot):
    """Full coproduct of a product slot: expand factorwise."""
    acc = [(Fraction(1), (), ())]
    for sym in slot:
        nxt = []
        for c0, l0, r0 in acc:
            for c1, l1, r1 in _delta_symbol_full(sym):
                nxt.append(
                    (
                        c0 * c1,
                        tuple(sorted(l0 + l1)),
                        tuple(sorted(r0 + r1)),
                    )
                )
        acc = nxt
    return acc


def apply_delta(element, slot_index):
    """Replace one tensor slot by its full coproduct, raising the rank by 1."""
    out = HopfElement(budget=element.budget)
    for key, coeff in element.terms.items():
        for c, left, right in _delta_slot(key[slot_index]):
            new_key = key[:slot_index] + (left, right) + key[slot_index + 1 :]
            out.add(new_key, coeff * c)
    return out


def delta_components(sym, which, m=None, budget=DEFAULT_SIZE_BUDGET):
    """Components of the coproduct of one symbol.

    one_star: single length-2 strings on the left.
    star_one: collections whose quotient has exactly two slots.
    iterated: the m-fold coproduct (m >= 2) of the symbol.
    """
    if which == "one_star":
        el = HopfElement(budget=budget)
        if sym.length == 2:
            el.add(((sym,), ()), 1)
        for coeff, left, q in _delta_prime_symbol(sym):
            if len(left) == 1 and left[0].length == 2:
                el.add((left, (q,)), coeff)
        return el
    if which == "star_one":
        el = HopfElement(budget=budget)
        if sym.length == 2:
            el.add(((), (sym,)), 1)
        for coeff, left, q in _delta_prime_symbol(sym):
            if q.length == 2:
                el.add((left, (q,)), coeff)
        return el
    if which == "iterated":
        if m is None or m < 2:
            raise ValueError("iterated coproduct needs m >= 2")
        el = HopfElement({((sym,),): Fraction(1)}, budget=budget)
        for _ in range(m - 1):
            el = apply_delta(el, 0)
        return el
    raise ValueError(f"unknown component {which!r}")


def monomial_exponent(slots):
    """Exponent vectors of the monomial character, per point index.

    Sends each symbol to prod t_{i_k}^{label_k} and multiplies; returns a
    dict index -> label vector.
    """
    out = {}
    for sym in slots:
        for i, lab in zip(sym.ts, sym.labels):
            out[i] = _vec_add(out[i], lab) if i in out else lab
    return {i: v for i, v in out.items() if any(c != 0 for c in v)}


def essential(sym, J):
    """A string symbol is essential when every slot but the last goes to
    infinity and the last one stays finite."""
    J = set(J)
    return sym.ts[-1] not in J and all(i in J for i in sym.ts[:-1])


def regular(sym, J):
    """Regular symbols have all slots inside J or all outside."""
    J = set(J)
    inside = [i in J for i in sym.ts]
    return all(inside) or not any(inside)


def phi_parts(sym):
    """Data of the leading-monomial realization of an essential symbol:
    (point indices, their exponent labels negated, denominator partial sums).
    """
    exps = [_vec_neg(lab) for lab in sym.labels]
    partials = []
    run = _vec(len(sym.labels[0]))
    for lab in sym.labels[:-1]:
        run = _vec_add(run, lab)
        partials.append(run)
    return sym.ts, exps, partials


def lambda_args(sym):
    """Realization data ((numerator index, denominator index) pairs, labels)
    for the Debye function attached to a symbol: depth length-1 with
    arguments t_{i_k}/t_{i_l}."""
    last = sym.ts[-1]
    return tuple((i, last) for i in sym.ts[:-1]), sym.labels[:-1]


def assemble_asymptotic(sym, J, realizers=None, budget=DEFAULT_SIZE_BUDGET):
    """mu_3 (Phi (x) Lambda^reg (x) C) Delta^(3) relative to the set J of
    indices sent to infinity.

    Without realizers, returns the classified term list
    [(coeff, phi_slot, lambda_slot, c_slot)]; with realizers (callables under
    keys 'phi', 'lambda_reg', 'C'), multiplies their values per term and sums.
    Slots failing the essential / regular / essential classification drop out.
    """
    if not J:
        raise ValueError("J must be a non-empty set of point indices")
    J = frozenset(J)
    el = delta_components(sym, "iterated", 3, budget=budget)
    kept = []
    for key, coeff in el.sorted_terms():
        phi_slot, lam_slot, c_slot = key
        if not all(essential(s, J) for s in phi_slot):
            continue
        if not all(regular(s, J) for s in lam_slot):
            continue
        if not all(essential(s, J) for s in c_slot):
            continue
        kept.append((coeff, phi_slot, lam_slot, c_slot))
    if realizers is None:
        return kept
    total = None
    for coeff, phi_slot, lam_slot, c_slot in kept:
        val = Fraction(coeff)
        for s in phi_slot:
            val = val * realizers["phi"](s)
        for s in lam_slot:
            val = val * realizers["lambda_reg"](s)
        for s in c_slot:
            val = val * realizers["C"](s)
        total = val if total is None else total + val
    return total


def _beta_run(vars, lo, hi):
    """Poly for beta_lo + ... + beta_hi (either order)."""
    step = 1 if hi >= lo else -1
    out = Poly.const(vars, 0)
    for k in range(lo, hi + step, step):
        out = out + Poly.variable(vars, vars[k - 1])
    return out


def _a_factor(vars, i, j):
    """a_[i,j] = beta_i (beta_i+beta_{i-1}) ... (beta_i+...+beta_j), i >= j."""
    if i < j:
        return Poly.const(vars, 1)
    out = Poly.const(vars, 1)
    for k in range(i, j - 1, -1):
        out = out * _beta_run(vars, i, k)
    return out


def _b_factor(vars, i, j):
    """b_[i,j] = beta_i (beta_i+beta_{i+1}) ... (beta_i+...+beta_j), i <= j."""
    if i > j:
        return Poly.const(vars, 1)
    out = Poly.const(vars, 1)
    for k in range(i, j + 1):
        out = out * _beta_run(vars, i, k)
    return out


def kid_identity(n, which):
    """The alternating partial-fraction sums behind the residue bookkeeping,
    as exact RationalFn sums (should be identically zero).

    kid1: sum_{i=1}^{n-1} (-1)^{i-1} / (a_[i,2] b_[i+1,n-1]).
    kid2: for each 1 < k < n-1, the analogous sum with the b_[1,k-1] prefix,
    summed over i = k..n-1 (the i = k and i = n-1 boundary terms carry empty
    a / b factors equal to 1).
    """
    vars = tuple(f"b{i}" for i in range(1, n + 1))
    one = Poly.const(vars, 1)
    minus_rest = Poly.linear(vars, {v: -1 for v in vars[:-1]})

    def eliminated(fn):
        return RationalFn(
            fn.num.subs_linear(vars[-1], minus_rest),
            fn.den.subs_linear(vars[-1], minus_rest),
        )

    if which == "kid1":
        parts = []
        for i in range(1, n):
            den = _a_factor(vars, i, 2) * _b_factor(vars, i + 1, n - 1)
            parts.append(RationalFn(one * ((-1) ** (i - 1)), den))
        return [eliminated(rational_sum(parts))]
    if which == "kid2":
        sums = []
        for k in range(2, n - 1):
            parts = []
            for i in range(k, n):
                den = (
                    _b_factor(vars, 1, k - 1)
                    * _a_factor(vars, i, k + 1)
                    * _b_factor(vars, i + 1, n - 1)
                )
                parts.append(RationalFn(one * ((-1) ** ((i - k + 1) % 2)), den))
            sums.append(eliminated(rational_sum(parts)))
        return sums
    raise ValueError(f"unknown identity {which!r}")


def verify_identities(n, which, lam=None, dlam=None, points=None, budget=DEFAULT_SIZE_BUDGET):
    """Verdict report for the exact identities or the numeric differential
    comparison.

    kid1 / kid2: expand over a common denominator and test the numerator for
    exact vanishing.  diff_vs_coproduct: compare dlam(canonical symbol)
    against mu (dlam (x) lam) Delta_{1,*} with caller-supplied callbacks
    (lam: symbol -> value, dlam: symbol -> gradient tuple); reports the
    largest residual over the supplied evaluations.
    """
    if which in ("kid1", "kid2"):
        sums = kid_identity(n, which)
        ok = all(s.num.is_zero() for s in sums)
        return {"identity": which, "n": n, "ok": ok, "residual": 0 if ok else None}
    if which == "diff_vs_coproduct":
        if lam is None or dlam is None:
            raise ValueError("diff_vs_coproduct needs lam and dlam callbacks")
        sym = canonical_symbol(n)
        comp = delta_components(sym, "one_star", budget=budget)
        lhs = dlam(sym)
        rhs = [0.0] * len(lhs)
        for key, coeff in comp.sorted_terms():
            (left_sym,) = key[0]
            grad = dlam(left_sym)
            val = 1.0
            for s in key[1]:
                val *= lam(s)
            for i in range(len(rhs)):
                rhs[i] += float(coeff) * grad[i] * val
        residual = max(abs(a - b) for a, b in zip(lhs, rhs))
        return {"identity": which, "n": n, "ok": residual <= 1e-5, "residual": residual}
    raise ValueError(f"unknown identity {which!r}")
