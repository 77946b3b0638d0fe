"""Dense integer-polynomial kernels.

Polynomials are plain lists of ints in ascending degree order with no
trailing zeros; the zero polynomial is the empty list.  Everything here is
exact.  The Sturm-chain and gcd kernels switch coefficients to gmpy2.mpz
when the operands are large enough for GMP to win.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

try:
    import gmpy2 as _gmpy2
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _gmpy2 = None
    _mpz = int

# Below these sizes GMP overhead beats its asymptotics.
_MPZ_MIN_DEGREE = 24
_MPZ_MIN_BITS = 128


def norm(cs):
    """Strip trailing zeros in place and return the list."""
    while cs and not cs[-1]:
        cs.pop()
    return cs


def add(f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] += c
    return norm(out)


def sub(f, g):
    out = list(f) + [0] * (len(g) - len(f))
    for i, c in enumerate(g):
        out[i] -= c
    return norm(out)


def neg(f):
    return [-c for c in f]


def scale(f, k):
    if not k:
        return []
    return [k * c for c in f]


def mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return norm(out)


def mul_xshift(f, k):
    """Multiply by x**k."""
    return [0] * k + list(f) if f else []


def deriv(f):
    return [i * c for i, c in enumerate(f)][1:]


def eval_int(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def eval_frac(f, num, den):
    """Homogeneous value den**deg(f) * f(num/den); exact, sign-faithful."""
    if not f:
        return 0
    acc = f[-1]
    dp = 1
    for c in reversed(f[:-1]):
        dp *= den
        acc = acc * num + c * dp
    return acc


def sign(v):
    return (v > 0) - (v < 0)


def sign_eval(f, num, den):
    return sign(eval_frac(f, num, den))


def lead_sign_at_inf(f, direction):
    """Sign of f at +inf (direction > 0) or -inf (direction < 0)."""
    s = sign(f[-1])
    if direction < 0 and (len(f) - 1) % 2 == 1:
        s = -s
    return s


def content(f):
    g = 0
    for c in f:
        g = _int_gcd(g, abs(int(c)) if type(c) is not int else abs(c))
        if g == 1:
            return 1
    return g


def primitive(f):
    """(content, primitive part); content carries the leading sign."""
    if not f:
        return 0, []
    c = content(f)
    if f[-1] < 0:
        c = -c
    if c == 1:
        return 1, list(f)
    return c, [v // c for v in f]


def _to_mpz(f):
    return [_mpz(c) for c in f]


def _wants_mpz(f, g=()):
    if _gmpy2 is None:
        return False
    if len(f) < _MPZ_MIN_DEGREE and len(g) < _MPZ_MIN_DEGREE:
        return False
    b = 0
    for c in f:
        b = max(b, c.bit_length() if type(c) is int else int(c).bit_length())
    for c in g:
        b = max(b, c.bit_length() if type(c) is int else int(c).bit_length())
    return b >= _MPZ_MIN_BITS or len(f) >= 4 * _MPZ_MIN_DEGREE


def _content_any(f):
    if _gmpy2 is not None and f and type(f[0]) is not int:
        g = _mpz(0)
        for c in f:
            g = _gmpy2.gcd(g, c)
            if g == 1:
                return g
        return g
    return content(f)


def pseudo_rem(f, g, want_quotient=False):
    """Pseudo-remainder of f by g: lc(g)**t * f = Q*g + R, t reduction passes.

    Returns (R, sign(lc(g)**t)) or (R, sign, lcpow, Q) with want_quotient.
    """
    r = list(f)
    dg = len(g) - 1
    lg = g[-1]
    t = 0
    gbody = g[:-1]
    q = [0] * max(len(f) - dg, 1) if want_quotient else None
    while len(r) - 1 >= dg:
        lr = r[-1]
        r.pop()
        if not lr:
            continue
        t += 1
        shift = len(r) - dg
        if lg != 1:
            for i in range(len(r)):
                r[i] *= lg
        if want_quotient:
            for i in range(len(q)):
                q[i] *= lg
            q[shift] += lr
        for i, c in enumerate(gbody):
            r[shift + i] -= lr * c
        norm(r)
    s = -1 if (lg < 0 and t % 2 == 1) else 1
    if want_quotient:
        return r, s, lg**t, q
    return r, s


def prim_prs(f, g):
    """Primitive polynomial remainder sequence of (f, g), contents stripped.

    Signs of the members are not meaningful (gcd use only).
    """
    seq = [list(f), list(g)]
    while seq[-1]:
        r, _ = pseudo_rem(seq[-2], seq[-1])
        if not r:
            break
        _, r = _prim_any(r)
        seq.append(r)
    return seq


def _prim_any(f):
    c = _content_any(f)
    if f[-1] < 0:
        c = -c
    if c == 1:
        return 1, f
    return c, [v // c for v in f]


def poly_gcd(f, g):
    """Primitive positive-leading gcd in Z[x]; (0,0) is rejected by callers."""
    if not f:
        _, p = primitive(list(g))
        return _abs_lead(p)
    if not g:
        _, p = primitive(list(f))
        return _abs_lead(p)
    a = _to_mpz(f) if _wants_mpz(f, g) else list(f)
    b = _to_mpz(g) if type(a[0]) is not int else list(g)
    if len(a) < len(b):
        a, b = b, a
    _, a = _prim_any(a)
    _, b = _prim_any(b)
    seq = prim_prs(a, b)
    last = seq[-1] if seq[-1] else seq[-2]
    last = [int(c) for c in last]
    _, p = primitive(last)
    return _abs_lead(p)


def _abs_lead(f):
    if f and f[-1] < 0:
        return [-c for c in f]
    return f


def divides(g, f):
    """Exact quotient f/g in Z[x], or None when g does not divide f."""
    if not f:
        return []
    if len(f) < len(g):
        return None
    rem = list(f)
    dg = len(g) - 1
    lg = g[-1]
    q = [0] * (len(f) - dg)
    for top in range(len(f) - 1, dg - 1, -1):
        if top >= len(rem):
            continue
        c = rem[top] if top < len(rem) else 0
        if not c:
            continue
        qc, r = divmod(c, lg)
        if r:
            return None
        pos = top - dg
        q[pos] = qc
        for i, gc in enumerate(g):
            rem[pos + i] -= qc * gc
    return q if not any(rem) else None


class SturmChain:
    """Sturm chain of the squarefree part of f, with variation queries.

    Members satisfy s_{i+1} = -(s_{i-1} mod s_i) up to positive factors, so
    classical variation differences count distinct real roots.  The
    pseudo-division quotients are kept so a point evaluation of the whole
    chain runs by the three-term recurrence instead of per-member Horner.
    """

    __slots__ = (
        "poly", "chain", "steps", "squarefree", "sqfree_part", "_var_cache"
    )

    def __init__(self, f):
        if not f:
            raise ValueError("zero polynomial has no Sturm chain")
        work = [int(c) for c in f]
        _, work = primitive(work)
        chain, steps, terminal_const = _build_chain(work)
        self.squarefree = terminal_const
        if terminal_const:
            self.poly = work
            self.chain = chain
            self.steps = steps
            self.sqfree_part = work
        else:
            _, tail = primitive([int(c) for c in chain[-1]])
            part = divides(tail, work)
            if part is None:  # pragma: no cover - PRS gcd always divides
                raise ArithmeticError("PRS terminal does not divide input")
            _, part = primitive(part)
            part = _abs_lead(part)
            chain2, steps2, ok = _build_chain(part)
            if not ok:  # pragma: no cover
                raise ArithmeticError("squarefree part not squarefree")
            self.poly = work
            self.chain = chain2
            self.steps = steps2
            self.sqfree_part = part
        self._var_cache = {}

    def values_at(self, num, den):
        """Homogenized values den**deg(s_i) * s_i(num/den) for the chain."""
        h_prev = eval_frac(self.chain[0], num, den)
        out = [h_prev]
        if len(self.chain) == 1:
            return out
        h_cur = eval_frac(self.chain[1], num, den)
        out.append(h_cur)
        den_pows = {}
        for lcpow, q, ssign, cont, gamma in self.steps:
            hq = eval_frac(q, num, den)
            dp = den_pows.get(gamma)
            if dp is None:
                dp = den**gamma
                den_pows[gamma] = dp
            h_next = (lcpow * h_prev - hq * h_cur)
            h_next = -h_next if ssign > 0 else h_next
            h_next //= cont * dp
            out.append(h_next)
            h_prev, h_cur = h_cur, h_next
        return out

    def variation_at(self, point):
        """Sign variations of the chain at a rational point (zeros skipped)."""
        num, den = point.numerator, point.denominator
        key = (num, den)
        v = self._var_cache.get(key)
        if v is None:
            signs = [sign(h) for h in self.values_at(num, den)]
            signs = [s for s in signs if s]
            v = sum(1 for i in range(len(signs) - 1) if signs[i] != signs[i + 1])
            self._var_cache[key] = v
        return v

    def variation_at_inf(self, direction):
        signs = [lead_sign_at_inf(m, direction) for m in self.chain]
        return sum(1 for i in range(len(signs) - 1) if signs[i] != signs[i + 1])

    def count_real_roots(self):
        return self.variation_at_inf(-1) - self.variation_at_inf(+1)

    def count_in(self, lo, hi):
        """Distinct real roots in (lo, hi]."""
        return self.variation_at(lo) - self.variation_at(hi)


def _build_chain(f):
    """Chain for f as given; returns (chain, steps, terminal_is_constant).

    steps[i] = (lcpow, quotient, sign, content, degree drop) relates chain
    members i, i+1, i+2 for the recurrence-style point evaluation.
    """
    if len(f) == 1:
        return [list(f)], [], True
    use_mpz = _wants_mpz(f)
    s0 = _to_mpz(f) if use_mpz else list(f)
    s1 = deriv(s0)
    chain = [s0, norm(s1)]
    steps = []
    while True:
        cur = chain[-1]
        if len(cur) == 1:
            return chain, steps, True
        r, ssign, lcpow, q = pseudo_rem(chain[-2], cur, want_quotient=True)
        if not r:
            return chain, steps, False
        c = _content_any(r)
        if ssign > 0:
            nxt = [-v // c for v in r]
        else:
            nxt = [v // c for v in r]
        steps.append((lcpow, norm(q), ssign, c, len(chain[-2]) - len(nxt)))
        chain.append(nxt)


def cauchy_root_bound(f):
    """Fraction B > 0 with all real roots of f inside (-B, B)."""
    if not f:
        raise ValueError("zero polynomial has no root bound")
    if len(f) == 1:
        return Fraction(1)
    lead = abs(f[-1])
    top = max(abs(c) for c in f[:-1])
    return 1 + Fraction(top, lead)


def _fujiwara_exp(f):
    """e with 2**e an upper root bound, from 2*max_k |a_{d-k}/a_d|^(1/k).

    Bit-length overestimates keep it a valid bound; usually far tighter than
    the Cauchy bound when inner coefficients dwarf the leading one.
    """
    d = len(f) - 1
    lead_bits = abs(f[-1]).bit_length()
    best = 0
    for k in range(1, d + 1):
        c = f[d - k]
        if not c:
            continue
        num = abs(c).bit_length() - lead_bits + 1
        e = -(-num // k) if num > 0 else 0
        if e > best:
            best = e
    return best + 1


def dyadic_root_bound(f):
    """A power of two >= some upper bound on |roots of f|, as a Fraction.

    Takes the tighter of the Cauchy and Fujiwara-style bounds.
    """
    b = cauchy_root_bound(f)
    e = 0
    while (1 << e) < b:
        e += 1
    if len(f) > 1:
        e = min(e, _fujiwara_exp(f))
    return Fraction(1 << e)


def eval_float(f, x):
    """Float Horner; None on overflow (screening only, never trusted)."""
    acc = 0.0
    try:
        for c in reversed(f):
            acc = acc * x + float(c)
    except OverflowError:
        return None
    return acc


def eval_interval_scaled(f, lo_num, hi_num, den):
    """Exact range bounds of f over [lo_num/den, hi_num/den], den = 2**s.

    Returns (min_scaled, max_scaled) with the true range of den**deg * f
    contained in [min_scaled, max_scaled]; all-integer interval Horner.
    """
    if not f:
        return 0, 0
    amin = amax = f[-1]
    dp = 1
    for c in reversed(f[:-1]):
        p1 = amin * lo_num
        p2 = amin * hi_num
        p3 = amax * lo_num
        p4 = amax * hi_num
        amin = min(p1, p2, p3, p4)
        amax = max(p1, p2, p3, p4)
        dp *= den
        cd = c * dp
        amin += cd
        amax += cd
    return amin, amax
