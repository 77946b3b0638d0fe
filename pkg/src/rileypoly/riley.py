"""Riley polynomials via the word recurrence, with exact verification.

The matrix word W_k of a 2-bridge presentation is tracked row by row:
a/b are the top row (the recurrence the whole pipeline rests on), c/d the
bottom row, added so the determinant identity and the parabolic
certification become machine-checkable.  Everything is exact; violations of
structural identities raise rather than degrade.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import _intops as ops
from .exactpoly import IntPoly, Interval, divides, gcd
from .twobridge import (
    InvariantViolation,
    KnotFraction,
    SignData,
    mirror,
    sign_sequences,
    signature,
)

_FULL_DET_CHECK_MAX_N = 50
_DET_SPOT_POINTS = (1, -1, 2)


def _step_top(a, b, e, h, d):
    """One recurrence step: a' = (1+dx)a + hx b, b' = e a + b."""
    na = [0] * max(len(a) + 1 if a else 0, len(b) + 1 if b else 0)
    for i, c in enumerate(a):
        na[i] += c
        na[i + 1] += d * c
    for i, c in enumerate(b):
        na[i + 1] += h * c
    ops.norm(na)
    if e == 1:
        nb = ops.add(a, b)
    else:
        nb = ops.sub(b, a)
    return na, nb


def _run_word(sd: SignData, keep_all: bool, bottom: bool):
    """Run the recurrence; returns rows as lists of coefficient lists."""
    a, b = [1], []
    c, d_row = [], [1]
    eps, eta, delta = sd.eps, sd.eta, sd.delta
    a_all, b_all, c_all, d_all = [a], [b], [c], [d_row]
    for k in range(sd.n):
        a, b = _step_top(a, b, eps[k], eta[k], delta[k])
        if bottom:
            c, d_row = _step_top(c, d_row, eps[k], eta[k], delta[k])
        if keep_all:
            a_all.append(a)
            b_all.append(b)
            c_all.append(c)
            d_all.append(d_row)
    if keep_all:
        return a_all, b_all, c_all, d_all
    return a, b, c, d_row


def _check_top_invariants(sd: SignData, a_final: list):
    n = sd.n
    if len(a_final) != n + 1:
        raise InvariantViolation(f"deg a_n = {len(a_final) - 1}, expected {n}")
    if a_final[0] != 1:
        raise InvariantViolation("a_n(0) != 1")
    lead_expected = 1
    for d in sd.delta:
        lead_expected *= d
    if a_final[-1] != lead_expected:
        raise InvariantViolation("leading coefficient of a_n != prod(delta)")


def word_values_at(sd: SignData, x: int):
    """Exact (a_n, b_n, c_n, d_n) at an integer x, by 2x2 products."""
    a, b, c, d = 1, 0, 0, 1
    for e, h, dd in zip(sd.eps, sd.eta, sd.delta):
        t = 1 + dd * x
        hx = h * x
        a, b = a * t + b * hx, a * e + b
        c, d = c * t + d * hx, c * e + d
    return a, b, c, d


@dataclass(frozen=True)
class RileySequence:
    """All four polynomial rows of W_0..W_n for one sign sequence."""

    sd: SignData
    a: tuple
    b: tuple
    c: tuple
    d: tuple

    @property
    def n(self) -> int:
        return self.sd.n


def riley_sequence(sd: SignData) -> RileySequence:
    """Build W_0..W_n and verify its structural identities.

    Degree, leading-coefficient and constant-term facts are checked for every
    k; the determinant identity is checked in full for small words and at
    integer spot points otherwise (the full polynomial check is O(n^3) and
    has its own verifier, verify_sequence_identities).
    """
    a_all, b_all, c_all, d_all = _run_word(sd, keep_all=True, bottom=True)
    lead = 1
    for k in range(sd.n + 1):
        ak = a_all[k]
        if len(ak) != k + 1:
            raise InvariantViolation(f"deg a_{k} = {len(ak) - 1}, expected {k}")
        if ak[0] != 1:
            raise InvariantViolation(f"a_{k}(0) != 1")
        if ak[-1] != lead:
            raise InvariantViolation(f"lead(a_{k}) != prod(delta_i, i<={k})")
        if k < sd.n:
            lead *= sd.delta[k]
    for x in _DET_SPOT_POINTS:
        av, bv, cv, dv = word_values_at(sd, x)
        if av * dv - bv * cv != 1:
            raise InvariantViolation(f"det W_n != 1 at x={x}")
    rs = RileySequence(
        sd=sd,
        a=tuple(IntPoly(v) for v in a_all),
        b=tuple(IntPoly(v) for v in b_all),
        c=tuple(IntPoly(v) for v in c_all),
        d=tuple(IntPoly(v) for v in d_all),
    )
    if sd.n <= _FULL_DET_CHECK_MAX_N:
        _check_det_identity(rs)
    return rs


def _check_det_identity(rs: RileySequence):
    one = IntPoly.one()
    for k in range(rs.n + 1):
        if rs.a[k] * rs.d[k] - rs.b[k] * rs.c[k] != one:
            raise InvariantViolation(f"a_k d_k - b_k c_k != 1 at k={k}")


def riley_polynomial(rs: RileySequence) -> IntPoly:
    """The defining polynomial a_n; constant term 1, degree n, lead +-1."""
    return rs.a[rs.n]


def riley_polynomial_of(k: KnotFraction) -> IntPoly:
    """a_n for a fraction without building the full sequence."""
    sd = sign_sequences(k)
    a, _, _, _ = _run_word(sd, keep_all=False, bottom=False)
    _check_top_invariants(sd, a)
    return IntPoly(a)


@dataclass(frozen=True)
class FSequence:
    """f_k = (prod of eta_1..eta_k) * a_k; the bound-carrying sequence."""

    sd: SignData
    f: tuple

    @property
    def n(self) -> int:
        return self.sd.n


def f_sequence(sd: SignData, rs: RileySequence) -> FSequence:
    if rs.sd != sd:
        raise ValueError("sign data does not match the sequence")
    sign = 1
    polys = [rs.a[0]]
    for k in range(1, sd.n + 1):
        sign *= sd.eta[k - 1]
        polys.append(rs.a[k] if sign == 1 else -rs.a[k])
    fs = FSequence(sd=sd, f=tuple(polys))
    if fs.f[0] != IntPoly.one():
        raise InvariantViolation("f_0 != 1")
    for k in range(sd.n + 1):
        if fs.f[k].leading != sd.mu[k]:
            raise InvariantViolation(f"lead(f_{k}) != mu_{k}")
    return fs


def conjecture_bound(sd: SignData) -> int:
    """|sum(eps)| = |sigma|/2, cross-checked against the mu sign patterns.

    Signs of f at +inf are (mu_k), at -inf ((-1)^k mu_k); their variation
    counts must match the eps tallies and the signature identity.
    """
    sum_eps = sum(sd.eps)
    var_plus = sum(
        1 for k in range(1, sd.n + 1) if sd.mu[k] != sd.mu[k - 1]
    )
    minus_signs = [(-1) ** k * sd.mu[k] for k in range(sd.n + 1)]
    var_minus = sum(
        1 for k in range(sd.n) if minus_signs[k] != minus_signs[k + 1]
    )
    neg_eps = sum(1 for e in sd.eps if e == -1)
    pos_eps = sd.n - neg_eps
    if var_plus != neg_eps or var_minus != pos_eps:
        raise InvariantViolation("variation counts disagree with eps tallies")
    bound = abs(var_minus - var_plus)
    if bound != abs(sum_eps) or 2 * bound != abs(signature(sd)):
        raise InvariantViolation("bound identities |var diff| = |sum eps| = |sigma|/2 failed")
    return bound


@dataclass(frozen=True)
class VerificationReport:
    """Per-knot outcome of the real-root lower-bound check."""

    fraction: KnotFraction
    n: int
    sigma: int
    determinant: int
    bound: int
    real_root_count: int
    satisfied: bool
    lam: IntPoly
    roots: tuple
    squarefree: bool
    congruence_ok: bool
    timing_ms: float

    @property
    def gap(self) -> int:
        return self.real_root_count - self.bound


def _congruence_ok(p: int, sigma: int) -> bool:
    want = 1 if (sigma // 2) % 2 == 0 else -1
    return (p - want) % 4 == 0


def verify_conjecture(
    k: KnotFraction,
    isolate: bool = True,
    refine_width: Optional[Fraction] = None,
) -> VerificationReport:
    """Exact Sturm count of real roots of a_n versus the |sigma|/2 bound."""
    t0 = time.perf_counter()
    sd = sign_sequences(k)
    sigma = signature(sd)
    bound = conjecture_bound(sd)
    a, _, _, _ = _run_word(sd, keep_all=False, bottom=False)
    _check_top_invariants(sd, a)
    lam = IntPoly(a)
    report = _verify_from_lambda(
        k, sd.n, sigma, bound, lam, isolate, refine_width, t0
    )
    return report


def _verify_from_lambda(k, n, sigma, bound, lam, isolate, refine_width, t0):
    from .exactpoly import _isolate_certified, _separate, refine as refine_iv

    chain = ops.SturmChain(list(lam.coeffs))
    count = chain.count_real_roots()
    roots = ()
    if isolate and count:
        raw = _isolate_certified(chain, chain.sqfree_part, count)
        raw.sort(key=lambda iv: (iv[0], iv[1]))
        ivs = [Interval(lo, hi) for lo, hi in _separate(chain.sqfree_part, raw)]
        if refine_width is not None:
            ivs = [refine_iv(lam, iv, refine_width) for iv in ivs]
        roots = tuple(ivs)
        if len(roots) != count:
            raise InvariantViolation("isolation disagrees with Sturm count")
    return VerificationReport(
        fraction=k,
        n=n,
        sigma=sigma,
        determinant=k.p,
        bound=bound,
        real_root_count=count,
        satisfied=count >= bound,
        lam=lam,
        roots=roots,
        squarefree=chain.squarefree,
        congruence_ok=_congruence_ok(k.p, sigma),
        timing_ms=(time.perf_counter() - t0) * 1000.0,
    )


def verify_conjecture_pair(
    k: KnotFraction,
    isolate: bool = True,
    refine_width: Optional[Fraction] = None,
) -> tuple:
    """Reports for k and its mirror, sharing the heavy exact work.

    Mirroring negates both sign sequences and leaves a_n unchanged (delta is
    fixed, b_k flips sign); the identity is unit-tested in full and
    spot-asserted here at integer points.
    """
    if k.q < 0:
        raise ValueError("pair verification starts from the positive-q form")
    t0 = time.perf_counter()
    sd = sign_sequences(k)
    sigma = signature(sd)
    bound = conjecture_bound(sd)
    a, _, _, _ = _run_word(sd, keep_all=False, bottom=False)
    _check_top_invariants(sd, a)
    lam = IntPoly(a)
    km = mirror(k)
    sdm = sign_sequences(km)
    sigma_m = signature(sdm)
    if sigma_m != -sigma or conjecture_bound(sdm) != bound:
        raise InvariantViolation("mirror signature/bound mismatch")
    for x in _DET_SPOT_POINTS:
        am, _, _, _ = word_values_at(sdm, x)
        if am != ops.eval_int(a, x):
            raise InvariantViolation(f"mirror a_n differs at x={x}")
    rep = _verify_from_lambda(k, sd.n, sigma, bound, lam, isolate, refine_width, t0)
    t1 = time.perf_counter()
    rep_m = VerificationReport(
        fraction=km,
        n=sd.n,
        sigma=sigma_m,
        determinant=km.p,
        bound=bound,
        real_root_count=rep.real_root_count,
        satisfied=rep.satisfied,
        lam=lam,
        roots=rep.roots,
        squarefree=rep.squarefree,
        congruence_ok=_congruence_ok(km.p, sigma_m),
        timing_ms=(time.perf_counter() - t1) * 1000.0,
    )
    return rep, rep_m


@dataclass(frozen=True)
class Lemma31Entry:
    k: int
    interval: Interval
    sign_prev: int
    sign_next: int
    sign_b: int
    expected_product: int


@dataclass(frozen=True)
class Lemma31Report:
    fraction_n: int
    entries: tuple

    @property
    def roots_checked(self) -> int:
        return len(self.entries)


def lemma31_check(rs: RileySequence) -> Lemma31Report:
    """Neighbour-sign law at every real root of every interior a_k.

    At each root x0 of a_k (0 < k < n): a_{k-1}, a_{k+1} are non-zero with
    sign product -eta_k * eta_{k+1}, and b_k is non-zero.  Signs are
    certified by interval refinement; any failure raises.
    """
    from .exactpoly import certified_sign_at_root, isolate_with_chain

    sd = rs.sd
    entries = []
    for k in range(1, rs.n):
        ak = rs.a[k]
        if ak.constant_term() != 1:
            raise InvariantViolation(f"a_{k}(0) != 1")
        chain, ivs = isolate_with_chain(list(ak.coeffs))
        if not ivs:
            continue
        work = chain.sqfree_part
        prev_c = list(rs.a[k - 1].coeffs)
        next_c = list(rs.a[k + 1].coeffs)
        b_c = list(rs.b[k].coeffs)
        expected = -sd.eta[k - 1] * sd.eta[k]
        for iv in ivs:
            s_prev, iv2 = certified_sign_at_root(prev_c, work, iv)
            s_next, iv3 = certified_sign_at_root(next_c, work, iv2)
            s_b, iv4 = certified_sign_at_root(b_c, work, iv3)
            if s_prev == 0 or s_next == 0:
                raise InvariantViolation(
                    f"a_{k}+-1 vanishes at a root of a_{k} near {iv4}"
                )
            if s_b == 0:
                raise InvariantViolation(f"b_{k} vanishes at a root of a_{k}")
            if s_prev * s_next != expected:
                raise InvariantViolation(
                    f"sign law broken at k={k}, root in {iv4}: "
                    f"{s_prev}*{s_next} != {expected}"
                )
            entries.append(
                Lemma31Entry(
                    k=k,
                    interval=iv4,
                    sign_prev=s_prev,
                    sign_next=s_next,
                    sign_b=s_b,
                    expected_product=expected,
                )
            )
    return Lemma31Report(fraction_n=rs.n, entries=tuple(entries))


@dataclass(frozen=True)
class ParabolicCertificate:
    """Exact witness that every root of a_n gives a representation.

    The relation defect W_n A - X W_n has entries (0, a_n, -x a_n, c_n - x b_n);
    the first three vanish at roots of a_n by construction, and the last is
    certified by exact divisibility.
    """

    skew: IntPoly
    quotient: IntPoly
    skew_is_zero: bool
    spot_residual: Optional[float]


def certify_parabolic(rs: RileySequence) -> ParabolicCertificate:
    from .exactpoly import isolate_real_roots, refine

    lam = riley_polynomial(rs)
    skew = rs.c[rs.n] - IntPoly.x() * rs.b[rs.n]
    q = divides(lam, skew)
    if q is None:
        raise InvariantViolation("a_n does not divide c_n - x b_n")
    residual = None
    ivs = isolate_real_roots(lam)
    if ivs:
        iv = refine(lam, ivs[0], Fraction(1, 1 << 30))
        x0 = float(iv.midpoint)
        lam_v = abs(lam(x0))
        skew_v = abs(skew(x0))
        residual = max(lam_v, abs(x0) * lam_v, skew_v)
    return ParabolicCertificate(
        skew=skew,
        quotient=q,
        skew_is_zero=skew.is_zero,
        spot_residual=residual,
    )


def verify_sequence_identities(rs: RileySequence) -> dict:
    """Full exact identity suite over the whole word.

    det W_k = 1 as polynomials, gcd(a_k, b_k) = 1, and gcd(a_k, a_{k+1})
    constant, for every k.  Returns tallies; failures raise.
    """
    one = IntPoly.one()
    for k in range(rs.n + 1):
        if rs.a[k] * rs.d[k] - rs.b[k] * rs.c[k] != one:
            raise InvariantViolation(f"det W_{k} != 1")
    for k in range(rs.n + 1):
        if k and gcd(rs.a[k], rs.b[k]).degree != 0:
            raise InvariantViolation(f"gcd(a_{k}, b_{k}) not constant")
    for k in range(rs.n):
        if gcd(rs.a[k], rs.a[k + 1]).degree != 0:
            raise InvariantViolation(f"gcd(a_{k}, a_{k + 1}) not constant")
    return {
        "det_checked": rs.n + 1,
        "coprime_ab_checked": rs.n,
        "consecutive_gcd_checked": rs.n,
    }
