"""Exact univariate polynomials over Z with Sturm-based real-root machinery.

Coefficients are arbitrary-precision ints, rationals are fractions.Fraction,
and signs are ints in {-1, 0, +1}.  All root counting is of distinct roots.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import _intops as ops

Rational = Fraction


class ZeroPolynomialError(ValueError):
    """Raised where an operation is undefined on the zero polynomial."""


class IntPoly:
    """Immutable dense polynomial in Z[x], coefficients ascending."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "_c", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def _raw(cls, cs: list) -> "IntPoly":
        p = cls.__new__(cls)
        object.__setattr__(p, "_c", tuple(int(c) for c in cs))
        return p

    @classmethod
    def zero(cls) -> "IntPoly":
        return cls._raw([])

    @classmethod
    def one(cls) -> "IntPoly":
        return cls._raw([1])

    @classmethod
    def x(cls) -> "IntPoly":
        return cls._raw([0, 1])

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def leading(self) -> int:
        if not self._c:
            raise ZeroPolynomialError("zero polynomial has no leading coefficient")
        return self._c[-1]

    def constant_term(self) -> int:
        return self._c[0] if self._c else 0

    def __add__(self, other):
        other = _coerce(other)
        return IntPoly._raw(ops.add(list(self._c), list(other._c)))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return IntPoly._raw(ops.sub(list(self._c), list(other._c)))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly._raw(ops.scale(list(self._c), other))
        other = _coerce(other)
        return IntPoly._raw(ops.mul(list(self._c), list(other._c)))

    __rmul__ = __mul__

    def __neg__(self):
        return IntPoly._raw(ops.neg(list(self._c)))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = IntPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self._c == ((other,) if other else ())
        return isinstance(other, IntPoly) and self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __bool__(self):
        return bool(self._c)

    def __call__(self, x):
        if isinstance(x, Fraction):
            num, den = x.numerator, x.denominator
            if den == 1:
                return Fraction(ops.eval_int(list(self._c), num))
            d = self.degree
            return Fraction(ops.eval_frac(list(self._c), num, den), den**d)
        if isinstance(x, int):
            return ops.eval_int(list(self._c), x)
        acc = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly._raw(ops.deriv(list(self._c)))

    def content(self) -> int:
        return ops.content(list(self._c))

    def primitive(self) -> "IntPoly":
        _, p = ops.primitive(list(self._c))
        return IntPoly._raw(p)

    def pretty(self, var: str = "x") -> str:
        if not self._c:
            return "0"
        parts = []
        for i, c in enumerate(self._c):
            if not c:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}"
                term = f"{mag}{var}" if i == 1 else f"{mag}{var}^{i}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)

    def __repr__(self):
        return f"IntPoly({self.pretty()})"


def _coerce(v) -> IntPoly:
    if isinstance(v, IntPoly):
        return v
    if isinstance(v, int):
        return IntPoly._raw([v] if v else [])
    raise TypeError(f"cannot coerce {type(v).__name__} to IntPoly")


@dataclass(frozen=True)
class Interval:
    """Closed rational interval; [m, m] encodes an exactly-known root."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def sign_at(f: IntPoly, r) -> int:
    """Exact sign of f(r) for rational r."""
    r = Fraction(r)
    return ops.sign_eval(list(f.coeffs), r.numerator, r.denominator)


def sign_at_infinity(f: IntPoly, direction: int) -> int:
    """Sign of f near +inf (direction=+1) or -inf (direction=-1)."""
    if f.is_zero:
        raise ZeroPolynomialError("zero polynomial has no stable sign")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    return ops.lead_sign_at_inf(list(f.coeffs), direction)


def cauchy_bound(f: IntPoly) -> Fraction:
    """B > 0 with every real root of f in (-B, B)."""
    if f.is_zero:
        raise ZeroPolynomialError("zero polynomial has no root bound")
    return ops.cauchy_root_bound(list(f.coeffs))


def gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Primitive, positive-leading gcd in Z[x]."""
    if f.is_zero and g.is_zero:
        raise ZeroPolynomialError("gcd(0, 0) is undefined")
    return IntPoly._raw(ops.poly_gcd(list(f.coeffs), list(g.coeffs)))


def is_squarefree(f: IntPoly) -> bool:
    if f.is_zero:
        raise ZeroPolynomialError("squarefreeness undefined for 0")
    if f.degree <= 1:
        return True
    return ops.SturmChain(list(f.coeffs)).squarefree


def divides(g: IntPoly, f: IntPoly) -> Optional[IntPoly]:
    """Quotient q with f = g*q in Z[x], or None when division is not exact."""
    if g.is_zero:
        raise ZeroPolynomialError("division by the zero polynomial")
    q = ops.divides(list(g.coeffs), list(f.coeffs))
    return None if q is None else IntPoly._raw(q)


def sturm_sequence(f: IntPoly) -> list[IntPoly]:
    """Sturm chain of f (of its squarefree part when f has repeated roots).

    Remainders are scaled only by positive contents, preserving the
    variation-counting sign pattern.
    """
    if f.is_zero:
        raise ZeroPolynomialError("zero polynomial has no Sturm chain")
    chain = ops.SturmChain(list(f.coeffs))
    return [IntPoly._raw([int(c) for c in m]) for m in chain.chain]


def count_real_roots(f: IntPoly) -> int:
    """Number of distinct real roots of f."""
    if f.is_zero:
        raise ZeroPolynomialError("root count undefined for 0")
    if f.degree == 0:
        return 0
    return ops.SturmChain(list(f.coeffs)).count_real_roots()


def count_roots_in(f: IntPoly, interval: Interval) -> int:
    """Distinct real roots of f in (lo, hi]; endpoints must not be roots."""
    if f.is_zero:
        raise ZeroPolynomialError("root count undefined for 0")
    if sign_at(f, interval.lo) == 0 or sign_at(f, interval.hi) == 0:
        raise ValueError("interval endpoint is a root; refine the interval first")
    if f.degree == 0:
        return 0
    return ops.SturmChain(list(f.coeffs)).count_in(interval.lo, interval.hi)


def isolate_real_roots(f: IntPoly, method: str = "certified") -> list[Interval]:
    """Disjoint rational intervals, each holding exactly one real root of f.

    Sorted ascending; non-point endpoints are never roots.  "certified" finds
    sign-change intervals adaptively and certifies completeness against the
    exact Sturm count; "sturm" is plain bisection driven by chain counts.
    """
    if f.is_zero:
        raise ZeroPolynomialError("cannot isolate roots of 0")
    if f.degree == 0:
        return []
    chain = ops.SturmChain(list(f.coeffs))
    m = chain.count_real_roots()
    if m == 0:
        return []
    work = chain.sqfree_part
    if method == "sturm":
        raw = _isolate_sturm(chain, work)
    elif method == "certified":
        raw = _isolate_certified(chain, work, m)
    else:
        raise ValueError(f"unknown isolation method {method!r}")
    raw.sort(key=lambda iv: (iv[0], iv[1]))
    out = _separate(work, raw)
    return [Interval(lo, hi) for lo, hi in out]


def refine(f: IntPoly, interval: Interval, width) -> Interval:
    """Shrink an isolating interval below width by sign bisection.

    A midpoint that is exactly a root collapses to the point interval.
    """
    if f.is_zero:
        raise ZeroPolynomialError("cannot refine against 0")
    width = Fraction(width)
    if interval.is_point:
        if sign_at(f, interval.lo) != 0:
            raise ValueError("point interval is not a root")
        return interval
    work, _ = _sqfree_list(f)
    lo, hi = interval.lo, interval.hi
    slo = ops.sign_eval(work, lo.numerator, lo.denominator)
    shi = ops.sign_eval(work, hi.numerator, hi.denominator)
    if slo == 0 or shi == 0 or slo == shi:
        raise ValueError("interval does not isolate a simple sign change")
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = ops.sign_eval(work, mid.numerator, mid.denominator)
        if sm == 0:
            return Interval(mid, mid)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return Interval(lo, hi)


def _sqfree_list(f: IntPoly):
    """(squarefree-part coeff list, was_squarefree)."""
    if f.degree <= 1:
        _, p = ops.primitive(list(f.coeffs))
        return p, True
    chain = ops.SturmChain(list(f.coeffs))
    return chain.sqfree_part, chain.squarefree


def _isolate_sturm(chain: ops.SturmChain, work: list) -> list:
    """Bisection on (lo, hi] driven by exact chain counts."""
    bound = ops.dyadic_root_bound(work)
    lo, hi = -bound, bound
    total = chain.count_in(lo, hi)
    stack = [(lo, hi, total)]
    found = []
    while stack:
        lo, hi, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            found.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        mid = _nudge_off_root(work, mid, hi - lo)
        left = chain.count_in(lo, mid)
        stack.append((lo, mid, left))
        stack.append((mid, hi, cnt - left))
    return found


def _nudge_off_root(work: list, point: Fraction, span: Fraction) -> Fraction:
    step = span / 64
    while ops.sign_eval(work, point.numerator, point.denominator) == 0:
        point += step
        step /= 2
    return point


def _isolate_certified(chain: ops.SturmChain, work: list, m: int) -> list:
    """Sign-change search certified complete by the exact count m.

    Split points are jittered off roots, so every root is interior to some
    segment and segment boundaries are never roots.  The segments partition
    the root range; once exactly m of them carry a sign change, each must
    hold exactly one root (a sign change proves an odd count >= 1, the rest
    is even, and the total is m).  Queue order is heuristic (log-magnitude
    dips hint at clusters, width at unsplit multiples); near-axis complex
    pairs mimic real clusters, so a stalling search hands its partition to
    exact count-driven bisection instead of chasing them.
    """
    bound = ops.dyadic_root_bound(work)
    deg = len(work) - 1
    depth_cap = 64
    budget = 32 * (m + 2) + 1024

    def probe(p: Fraction):
        """(sign, log2-magnitude) of work at p, from the exact evaluation."""
        h = ops.eval_frac(work, p.numerator, p.denominator)
        logmag = abs(h).bit_length() - deg * (p.denominator.bit_length() - 0.5)
        return (1 if h > 0 else -1 if h < 0 else 0), logmag

    counter = 0
    hunt = []  # no sign change: ranked by log-magnitude dip at the midpoint
    split = []  # sign change: ranked widest-first (likely multi-root)
    parked = []
    changes = 0

    def push(a, pa, b, pb, d):
        nonlocal counter, changes
        counter += 1
        if pa[0] != pb[0]:
            changes += 1
            heapq.heappush(split, (-float(b - a), counter, a, pa, b, pb, d))
        elif d < depth_cap:
            mid = _nudge_off_root(work, (a + b) / 2, b - a)
            pm = probe(mid)
            # dip relative to the smaller endpoint, so segments beside an
            # already-found root sink instead of soaking up the search
            dip = pm[1] - min(pa[1], pb[1])
            heapq.heappush(
                hunt, (dip, -float(b - a), counter, a, pa, mid, pm, b, pb, d)
            )
        else:
            parked.append((a, b))

    push(-bound, probe(-bound), bound, probe(bound), 0)
    turn = 0
    stalled = 0
    stall_limit = max(48, 4 * m)
    while changes < m and budget > 0 and stalled < stall_limit:
        turn += 1
        budget -= 1
        src = split if (turn % 2 == 0 and split) or not hunt else hunt
        if not src:
            break
        before = changes
        if src is split:
            _, _, a, pa, b, pb, d = heapq.heappop(src)
            if d >= depth_cap:
                parked.append((a, b))
                continue
            changes -= 1
            mid = _nudge_off_root(work, (a + b) / 2, b - a)
            pm = probe(mid)
        else:
            _, _, _, a, pa, mid, pm, b, pb, d = heapq.heappop(src)
        push(a, pa, mid, pm, d + 1)
        push(mid, pm, b, pb, d + 1)
        stalled = 0 if changes > before else stalled + 1
    if changes == m:
        # hunt segments cannot hold roots once m sign changes exist
        out = [(a, b) for _, _, a, _pa, b, _pb, _d in split]
        out.extend(parked)
        return [seg for seg in out if _has_change(work, seg)]
    # hand the partition to exact counting; it prunes complex-pair dips at
    # one evaluation per segment and bisects only true multiples
    segments = [(a, b) for _, _, a, _pa, b, _pb, _d in split]
    segments.extend(parked)
    for _, _, _, a, _pa, mid, _pm, b, _pb, _d in hunt:
        segments.append((a, mid))
        segments.append((mid, b))
    return _finish_by_counting(chain, work, segments)


def _has_change(work: list, seg) -> bool:
    a, b = seg
    return ops.sign_eval(work, a.numerator, a.denominator) != ops.sign_eval(
        work, b.numerator, b.denominator
    )


def _finish_by_counting(chain: ops.SturmChain, work: list, segments: list) -> list:
    out = []
    for a, b in segments:
        cnt = chain.count_in(a, b)
        stack = [(a, b, cnt)] if cnt else []
        while stack:
            lo, hi, c = stack.pop()
            if c == 1:
                out.append((lo, hi))
                continue
            mid = _nudge_off_root(work, (lo + hi) / 2, hi - lo)
            left = chain.count_in(lo, mid)
            if left:
                stack.append((lo, mid, left))
            if c - left:
                stack.append((mid, hi, c - left))
    return out


def isolate_with_chain(coeffs: list):
    """(SturmChain, sorted disjoint isolating Intervals) for a coeff list."""
    chain = ops.SturmChain(coeffs)
    m = chain.count_real_roots()
    if m == 0:
        return chain, []
    raw = _isolate_certified(chain, chain.sqfree_part, m)
    raw.sort(key=lambda iv: (iv[0], iv[1]))
    out = _separate(chain.sqfree_part, raw)
    return chain, [Interval(lo, hi) for lo, hi in out]


def certified_sign_at_root(
    g: list, work: list, interval: Interval, cap: int = 96
):
    """Exact sign of g at the root of `work` isolated by `interval`.

    `work` must be squarefree with a sign change over the interval (or the
    interval is an exact point).  Refines until interval arithmetic pins the
    sign of g; a persistent failure is decided exactly through gcd (shared
    root => sign 0).  Returns (sign, refined interval).
    """
    if interval.is_point:
        p = interval.lo
        return ops.sign_eval(g, p.numerator, p.denominator), interval
    lo, hi = interval.lo, interval.hi
    slo = ops.sign_eval(work, lo.numerator, lo.denominator)
    shi = ops.sign_eval(work, hi.numerator, hi.denominator)
    if slo == 0 or shi == 0 or slo == shi:
        raise ValueError("interval does not bracket a sign change of work")
    for attempt in range(2):
        for _ in range(cap):
            den = (lo.denominator * hi.denominator) // ops._int_gcd(
                lo.denominator, hi.denominator
            )
            lon = lo.numerator * (den // lo.denominator)
            hin = hi.numerator * (den // hi.denominator)
            gmin, gmax = ops.eval_interval_scaled(g, lon, hin, den)
            if gmin > 0:
                return 1, Interval(lo, hi)
            if gmax < 0:
                return -1, Interval(lo, hi)
            mid = (lo + hi) / 2
            sm = ops.sign_eval(work, mid.numerator, mid.denominator)
            if sm == 0:
                return (
                    ops.sign_eval(g, mid.numerator, mid.denominator),
                    Interval(mid, mid),
                )
            if sm == slo:
                lo = mid
            else:
                hi = mid
        h = ops.poly_gcd(work, g)
        if len(h) > 1 and ops.SturmChain(h).count_in(lo, hi) > 0:
            return 0, Interval(lo, hi)
    raise ArithmeticError("could not certify sign at isolated root")


def _separate(work: list, raw: list) -> list:
    """Shrink touching neighbours so closed intervals are pairwise disjoint."""
    out = []
    for lo, hi in raw:
        while out and out[-1][1] >= lo:
            out[-1] = _bisect_once(work, *out[-1])
        out.append((lo, hi))
    return out


def _bisect_once(work, lo, hi):
    """Halve an isolating sign-change interval, keeping its root."""
    mid = (lo + hi) / 2
    sm = ops.sign_eval(work, mid.numerator, mid.denominator)
    if sm == 0:
        return (mid, mid)
    sl = ops.sign_eval(work, lo.numerator, lo.denominator)
    return (lo, mid) if sl != sm else (mid, hi)
