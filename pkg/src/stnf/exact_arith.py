"""Exact arithmetic core: rationals, univariate polynomials over Q,
rational functions of t, and real-algebraic time values.

Every value is immutable and every operation is a pure function, so the
whole module is safe to use from multiple threads.  Nothing in here ever
falls back to floating point: comparisons between algebraic numbers are
decided symbolically (polynomial gcd + sign changes) with interval
refinement used only to separate provably distinct values.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

try:
    from gmpy2 import mpq as Rat  # much faster than fractions.Fraction
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rat

RAT_ZERO = Rat(0)
RAT_ONE = Rat(1)


def rat(n, d=1) -> Rat:
    """Build a rational from integers (or parse 'n/d' strings)."""
    return Rat(n, d)


def rat_sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def rat_to_pair(x) -> Tuple[int, int]:
    return int(x.numerator), int(x.denominator)


def rat_from_pair(pair) -> Rat:
    n, d = pair
    if d == 0:
        raise ValueError("rational with zero denominator")
    return Rat(int(n), int(d))


def _floor(x) -> int:
    n, d = int(x.numerator), int(x.denominator)
    return n // d


def simplest_between(lo, hi, open_lo: bool = True, open_hi: bool = True) -> Rat:
    """Smallest-denominator rational in the interval from lo to hi.

    Ties on the denominator are broken towards the smaller numerator, so
    the result is unique and deterministic.  Stern-Brocot / continued
    fraction descent; exact.
    """
    lo, hi = Rat(lo), Rat(hi)
    if lo > hi or (lo == hi and (open_lo or open_hi)):
        raise ValueError("empty interval")
    if lo == hi:
        return lo

    zero_ok = (lo < 0 or (lo == 0 and not open_lo)) and (hi > 0 or (hi == 0 and not open_hi))
    if zero_ok:
        return RAT_ZERO
    if hi < 0 or (hi == 0 and open_hi):
        return -simplest_between(-hi, -lo, open_hi, open_lo)

    # Strictly positive admissible range now.
    def go(a, b, oa, ob):
        # 0 <= a < b (or a == b closed); returns simplest admissible value
        fa = _floor(a)
        low_int = fa if (a == fa and not oa) else fa + 1
        if b > low_int or (b == low_int and not ob):
            return Rat(low_int)
        # no integer inside: recurse on the reciprocal of the fractional part
        a2, b2 = a - fa, b - fa
        if a2 == 0:
            # admissible range is ]0, b2): smallest admissible integer 1/k
            inv = RAT_ONE / b2
            fb = _floor(inv)
            k = fb if (inv == fb and not ob) else fb + 1
            return fa + Rat(1, k)
        s = go(RAT_ONE / b2, RAT_ONE / a2, ob, oa)
        return fa + RAT_ONE / s

    return go(lo, hi, open_lo, open_hi)


class Polynomial:
    """Univariate polynomial over the rationals, dense ascending coefficients.

    The zero polynomial has an empty coefficient tuple; otherwise the
    leading coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @staticmethod
    def _raw(cs: tuple) -> "Polynomial":
        # internal: cs already Rat-typed with nonzero leading coefficient
        p = object.__new__(Polynomial)
        object.__setattr__(p, "coeffs", cs)
        return p

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Polynomial is immutable")

    @staticmethod
    def const(c) -> "Polynomial":
        return Polynomial((Rat(c),))

    @staticmethod
    def t() -> "Polynomial":
        return Polynomial((RAT_ZERO, RAT_ONE))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Rat:
        if not self.coeffs:
            return RAT_ZERO
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "Polynomial(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"{c}*t")
            else:
                terms.append(f"{c}*t^{i}")
        return "Polynomial(" + " + ".join(terms) + ")"

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        while out and out[-1] == 0:
            out.pop()
        return Polynomial._raw(tuple(out))

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial._raw(())
        if len(a) == 1:
            k = a[0]
            return Polynomial._raw(tuple(c * k for c in b))
        if len(b) == 1:
            k = b[0]
            return Polynomial._raw(tuple(c * k for c in a))
        out = [RAT_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return Polynomial._raw(tuple(out))

    def scale(self, k) -> "Polynomial":
        k = Rat(k)
        if k == 0:
            return Polynomial._raw(())
        return Polynomial._raw(tuple(c * k for c in self.coeffs))

    def eval(self, x) -> Rat:
        acc = RAT_ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial()
        return Polynomial(tuple(self.coeffs[i] * i for i in range(1, len(self.coeffs))))

    def divmod(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = [RAT_ZERO] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        dlead = other.leading
        dd = other.degree
        while len(rem) - 1 >= dd and rem:
            k = len(rem) - 1 - dd
            f = rem[-1] / dlead
            q[k] = f
            for i, c in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - f * c
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial(q), Polynomial(rem)

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        lead = self.leading
        if lead == 1:
            return self
        return Polynomial(tuple(c / lead for c in self.coeffs))

    def primitive_int(self) -> "Polynomial":
        """Scale to integer coefficients with content 1 and positive leading
        coefficient (the canonical representative of the scaling class)."""
        if self.is_zero:
            return self
        from math import gcd

        den_lcm = 1
        for c in self.coeffs:
            d = int(c.denominator)
            den_lcm = den_lcm // gcd(den_lcm, d) * d
        ints = [int(c.numerator) * (den_lcm // int(c.denominator)) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        if g == 0:
            g = 1
        if ints[-1] < 0:
            g = -g
        return Polynomial(tuple(Rat(v // g) for v in ints))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over Q (the zero polynomial if both are zero)."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.degree < 1:
        return p.monic()
    g = poly_gcd(p, p.derivative())
    if g.degree < 1:
        return p.monic()
    return (p // g).monic()


def _sturm_chain(p: Polynomial) -> List[Polynomial]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero:
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _variations(chain: Sequence[Polynomial], x) -> int:
    prev = 0
    count = 0
    for q in chain:
        s = rat_sign(q.eval(x))
        if s == 0:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def _root_bound(p: Polynomial) -> Rat:
    # Cauchy bound: 1 + max |a_i / a_n|
    lead = abs(p.leading)
    m = RAT_ZERO
    for c in p.coeffs[:-1]:
        v = abs(c) / lead
        if v > m:
            m = v
    return m + 1


class TimeValue:
    """An exact time moment: a rational, or a real-algebraic number given by
    a square-free defining polynomial plus an open isolating interval.

    Algebraic values never have a rational root of the defining polynomial
    inside their isolating interval; rational roots are always represented
    by the Exact variant.
    """

    __slots__ = ("value", "poly", "lo", "hi")

    def __init__(self, value=None, poly=None, lo=None, hi=None):
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, *a):
        raise AttributeError("TimeValue is immutable")

    @staticmethod
    def exact(v) -> "TimeValue":
        return TimeValue(value=Rat(v))

    @staticmethod
    def algebraic(poly: Polynomial, lo, hi) -> "TimeValue":
        lo, hi = Rat(lo), Rat(hi)
        p = poly.primitive_int()
        if p.eval(lo) == 0 or p.eval(hi) == 0:
            raise ValueError("isolating interval endpoints must not be roots")
        return TimeValue(poly=p, lo=lo, hi=hi)

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    def bracket(self) -> Tuple[Rat, Rat]:
        """A rational interval containing the value (degenerate if exact)."""
        if self.is_exact:
            return self.value, self.value
        return self.lo, self.hi

    def __repr__(self):
        if self.is_exact:
            return f"TimeValue({self.value})"
        return f"TimeValue(root of {self.poly} in ]{self.lo}, {self.hi}[)"

    def __eq__(self, other):
        if not isinstance(other, TimeValue):
            return NotImplemented
        return tv_compare(self, other) == 0

    def __lt__(self, other):
        return tv_compare(self, other) < 0

    def __le__(self, other):
        return tv_compare(self, other) <= 0

    def __gt__(self, other):
        return tv_compare(self, other) > 0

    def __ge__(self, other):
        return tv_compare(self, other) >= 0

    def __hash__(self):
        # Exact values hash like their rational; algebraic values by poly only
        # (equal algebraic values share the same primitive defining data is
        # not guaranteed, so hash collisions are resolved by __eq__).
        if self.is_exact:
            return hash(self.value)
        return hash(self.poly)


def _narrow(poly: Polynomial, lo, hi):
    """One exact bisection step of an isolating interval ]lo, hi[.

    The defining polynomial has no rational roots in the interval, so the
    midpoint sign is always nonzero.
    """
    mid = (lo + hi) / 2
    if rat_sign(poly.eval(lo)) * rat_sign(poly.eval(mid)) < 0:
        return lo, mid
    return mid, hi


def refine(tv: TimeValue, eps) -> Tuple[Rat, Rat]:
    """A rational bracket of width <= eps around the value; nested under
    repeated calls with smaller eps."""
    eps = Rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if tv.is_exact:
        return tv.value, tv.value
    lo, hi = tv.lo, tv.hi
    while hi - lo > eps:
        lo, hi = _narrow(tv.poly, lo, hi)
    return lo, hi


def tv_compare(a: TimeValue, b: TimeValue) -> int:
    """Exact total order: -1, 0 or +1.  Equality is decided symbolically."""
    if a is b:
        return 0
    if a.is_exact and b.is_exact:
        return rat_sign(a.value - b.value)
    if a.is_exact:
        return -_cmp_algebraic_rational(b, a.value)
    if b.is_exact:
        return _cmp_algebraic_rational(a, b.value)
    return _cmp_algebraic_algebraic(a, b)


def _cmp_algebraic_rational(a: TimeValue, r) -> int:
    lo, hi = a.lo, a.hi
    if r <= lo:
        return 1
    if r >= hi:
        return -1
    # r strictly inside; the isolating interval holds no rational root, so
    # p(r) != 0 and the root lies on the side where the sign still flips.
    pr = rat_sign(a.poly.eval(r))
    if pr == 0:
        raise AssertionError("rational root inside an algebraic isolating interval")
    if rat_sign(a.poly.eval(lo)) * pr < 0:
        return -1  # root in ]lo, r[
    return 1


def _cmp_algebraic_algebraic(a: TimeValue, b: TimeValue) -> int:
    alo, ahi = a.lo, a.hi
    blo, bhi = b.lo, b.hi
    g: Optional[Polynomial] = None
    while True:
        if ahi <= blo:
            return -1
        if bhi <= alo:
            return 1
        # overlapping open intervals
        if g is None:
            g = poly_gcd(a.poly, b.poly)
            if g.degree < 1:
                g = Polynomial()  # coprime: values cannot be equal
        if not g.is_zero:
            olo, ohi = max(alo, blo), min(ahi, bhi)
            if rat_sign(g.eval(olo)) * rat_sign(g.eval(ohi)) < 0:
                return 0  # the shared root lies in the overlap: same value
        alo, ahi = _narrow(a.poly, alo, ahi)
        blo, bhi = _narrow(b.poly, blo, bhi)


def tv_min(a: TimeValue, b: TimeValue) -> TimeValue:
    return a if tv_compare(a, b) <= 0 else b


def tv_max(a: TimeValue, b: TimeValue) -> TimeValue:
    return a if tv_compare(a, b) >= 0 else b


def _isolate_irrational_roots(p: Polynomial, lo, hi) -> List[Tuple[Rat, Rat]]:
    """Disjoint open isolating intervals for all roots of p in [lo, hi];
    p must be square-free with p(lo) != 0 != p(hi) and no rational roots in
    the range."""
    chain = _sturm_chain(p)

    def count(a, b):  # roots in ]a, b]; both are non-roots so ]a, b[ works
        return _variations(chain, a) - _variations(chain, b)

    out: List[Tuple[Rat, Rat]] = []
    stack = [(lo, hi, count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        while p.eval(mid) == 0:  # cannot happen (no rational roots) but stay safe
            mid = (a + mid) / 2
        nl = count(a, mid)
        stack.append((a, mid, nl))
        stack.append((mid, b, n - nl))
    out.sort()
    return out


def _extract_rational_root(p: Polynomial, a, b) -> Optional[Rat]:
    """The rational root of square-free integer-primitive p inside the open
    isolating interval ]a, b[, or None if the root is irrational.

    A rational root u/v in lowest terms has v dividing the leading
    coefficient, so once the interval is narrower than 1/lead^2 the root, if
    rational, is the unique smallest-denominator rational in the interval.
    """
    lead = abs(int(p.leading.numerator))  # primitive integer poly: denom 1
    limit = Rat(1, lead * lead)
    sa = rat_sign(p.eval(a))
    while b - a >= limit:
        mid = (a + b) / 2
        sm = rat_sign(p.eval(mid))
        if sm == 0:
            return mid
        if sa * sm < 0:
            b = mid
        else:
            a = mid
            sa = sm
    s = simplest_between(a, b)
    if p.eval(s) == 0:
        return s
    return None


def _quadratic_rational_roots(p: Polynomial) -> Optional[List[Rat]]:
    """Both roots of a square-free quadratic when they are rational (sorted),
    [] when there are no real roots, None when they are irrational."""
    from math import isqrt

    c0, c1, c2 = p.coeffs
    disc = c1 * c1 - 4 * c0 * c2
    if disc < 0:
        return []
    num, den = int(disc.numerator), int(disc.denominator)
    sn, sd = isqrt(num), isqrt(den)
    if sn * sn != num or sd * sd != den:
        return None
    s = Rat(sn, sd)
    return sorted(((-c1 - s) / (2 * c2), (-c1 + s) / (2 * c2)))


def poly_real_roots(p: Polynomial, lo, hi) -> List[TimeValue]:
    """All distinct real roots of p in the closed range [lo, hi], sorted
    ascending; rational roots come back Exact, irrational ones Algebraic
    with pairwise disjoint isolating intervals."""
    if p.is_zero:
        raise ValueError("indeterminate roots: zero polynomial")
    lo, hi = Rat(lo), Rat(hi)
    if lo > hi:
        raise ValueError("empty range")
    p = squarefree_part(p)
    if p.degree < 1:
        return []

    if p.degree == 1:
        r = -p.coeffs[0] / p.coeffs[1]
        return [TimeValue.exact(r)] if lo <= r <= hi else []
    if p.degree == 2:
        quad = _quadratic_rational_roots(p)
        if quad is not None:
            return [TimeValue.exact(r) for r in quad if lo <= r <= hi]

    exact: List[Rat] = []
    # peel off rational roots hit exactly at the range ends first
    changed = True
    while changed and p.degree >= 1:
        changed = False
        for r in (lo, hi):
            if p.degree >= 1 and p.eval(r) == 0:
                exact.append(r)
                p = p // Polynomial((-r, RAT_ONE))
                changed = True
    p = p.primitive_int()

    algebraic: List[TimeValue] = []
    if p.degree >= 1:
        bound = _root_bound(p)
        a = max(lo, -bound - 1)
        b = min(hi, bound + 1)
        if a < b:
            # deflate rational roots until none remain in the range
            while True:
                intervals = _isolate_irrational_roots(p, a, b)
                found = None
                for (ia, ib) in intervals:
                    r = _extract_rational_root(p, ia, ib)
                    if r is not None:
                        found = r
                        break
                if found is None:
                    for (ia, ib) in intervals:
                        algebraic.append(TimeValue.algebraic(p, ia, ib))
                    break
                exact.append(found)
                p = (p // Polynomial((-found, RAT_ONE))).primitive_int()
                if p.degree < 1:
                    break

    roots = [TimeValue.exact(r) for r in sorted(set(exact)) if lo <= r <= hi]
    roots.extend(algebraic)
    roots.sort(key=_TvSortKey)
    return roots


class _TvSortKey:
    __slots__ = ("tv",)

    def __init__(self, tv: TimeValue):
        self.tv = tv

    def __lt__(self, other: "_TvSortKey"):
        return tv_compare(self.tv, other.tv) < 0


def tv_sorted_dedup(values: Iterable[TimeValue]) -> List[TimeValue]:
    """Sort by exact comparison and drop duplicates (symbolic equality)."""
    vs = sorted(values, key=_TvSortKey)
    out: List[TimeValue] = []
    for v in vs:
        if not out or tv_compare(out[-1], v) != 0:
            out.append(v)
    return out


class RationalFunction:
    """Quotient of two polynomials in t, kept in canonical form:
    gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial = None):
        if den is None:
            den = Polynomial.const(1)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator polynomial")
        if num.is_zero:
            num, den = Polynomial(), Polynomial.const(1)
        elif den.degree == 0:
            lead = den.coeffs[0]
            if lead != 1:
                num = num.scale(RAT_ONE / lead)
                den = _POLY_ONE
        else:
            g = poly_gcd(num, den)
            if g.degree >= 1:
                num, den = num // g, den // g
            lead = den.leading
            if lead != 1:
                num = num.scale(RAT_ONE / lead)
                den = den.scale(RAT_ONE / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RationalFunction is immutable")

    @staticmethod
    def const(c) -> "RationalFunction":
        return RationalFunction(Polynomial.const(c))

    @staticmethod
    def t() -> "RationalFunction":
        return RationalFunction(Polynomial.t())

    @staticmethod
    def from_poly(p: Polynomial) -> "RationalFunction":
        return RationalFunction(p)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> Rat:
        if not self.is_constant:
            raise ValueError("not a constant")
        if self.num.is_zero:
            return RAT_ZERO
        return self.num.coeffs[0] / self.den.coeffs[0]

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self.num!r} / {self.den!r})"

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other) -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            other = RationalFunction.const(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def eval(self, tau) -> Rat:
        tau = Rat(tau)
        d = self.den.eval(tau)
        if d == 0:
            raise PoleError(f"pole at {tau}")
        return self.num.eval(tau) / d

    def defined_at(self, tau) -> bool:
        return self.den.eval(Rat(tau)) != 0


_POLY_ONE = Polynomial((RAT_ONE,))


class PoleError(ZeroDivisionError):
    """Evaluation of a rational function at a pole."""


def ratfun_equal(f: RationalFunction, g: RationalFunction) -> bool:
    return f == g


# ---------------------------------------------------------------------------
# interval evaluation, used only to produce epsilon-approximations of values
# at algebraic times (never for comparisons)

def _ival_add(a, b):
    return a[0] + b[0], a[1] + b[1]


def _ival_mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def poly_eval_interval(p: Polynomial, lo, hi):
    acc = (RAT_ZERO, RAT_ZERO)
    x = (lo, hi)
    for c in reversed(p.coeffs):
        acc = _ival_add(_ival_mul(acc, x), (c, c))
    return acc


def ratfun_eval_at(f: RationalFunction, tv: TimeValue, eps) -> Rat:
    """Evaluate f at a time value.  Exact times evaluate exactly; algebraic
    times yield the midpoint of an enclosure of width <= eps."""
    if tv.is_exact:
        return f.eval(tv.value)
    eps = Rat(eps)
    lo, hi = tv.lo, tv.hi
    for _ in range(4096):
        nlo, nhi = poly_eval_interval(f.num, lo, hi)
        dlo, dhi = poly_eval_interval(f.den, lo, hi)
        if dlo > 0 or dhi < 0:
            cands = (nlo / dlo, nlo / dhi, nhi / dlo, nhi / dhi)
            vlo, vhi = min(cands), max(cands)
            if vhi - vlo <= eps:
                return (vlo + vhi) / 2
        lo, hi = _narrow(tv.poly, lo, hi)
    raise PoleError("rational function undefined (or nearly so) at algebraic time")


# JSON helpers shared by the model/CLI layers --------------------------------

def poly_to_json(p: Polynomial):
    return [list(rat_to_pair(c)) for c in p.coeffs]


def poly_from_json(data) -> Polynomial:
    return Polynomial(tuple(rat_from_pair(c) for c in data))


def ratfun_to_json(f: RationalFunction):
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}


def ratfun_from_json(data) -> RationalFunction:
    return RationalFunction(poly_from_json(data["num"]), poly_from_json(data["den"]))


def tv_to_json(tv: TimeValue):
    if tv.is_exact:
        return list(rat_to_pair(tv.value))
    return {
        "poly": poly_to_json(tv.poly),
        "iso": [list(rat_to_pair(tv.lo)), list(rat_to_pair(tv.hi))],
    }


def tv_from_json(data) -> TimeValue:
    """Parse a time value, re-canonicalizing algebraic ones: the defining
    polynomial is re-isolated so equal inputs always parse to equal
    (byte-identical on reserialization) values."""
    if isinstance(data, dict):
        poly = poly_from_json(data["poly"])
        lo = rat_from_pair(data["iso"][0])
        hi = rat_from_pair(data["iso"][1])
        roots = poly_real_roots(poly, lo, hi)
        inside = [r for r in roots if _strictly_inside(r, lo, hi)]
        if len(inside) != 1:
            raise ValueError("isolating interval must contain exactly one root")
        return inside[0]
    return TimeValue.exact(rat_from_pair(data))


def _strictly_inside(tv: TimeValue, lo, hi) -> bool:
    if tv.is_exact:
        return lo < tv.value < hi
    return lo <= tv.lo and tv.hi <= hi
