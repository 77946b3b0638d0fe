"""Trace deformations of parabolic representations.

The meridian images generalize to upper/lower triangular matrices with
eigenvalue t; the word's representation condition collapses to one Laurent
polynomial phi(t, x), symmetric under t -> 1/t, hence a polynomial psi(s, x)
in the trace s = t + 1/t.  psi(2, .) recovers the parabolic polynomial, and
tracking a real root of it from s = 2 down to s_n = 2 cos(2 pi / n) produces
an elliptic-trace representation witness for the n-fold cyclic branched
cover.  Symbolic work is exact; only the root tracking is floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exactpoly import IntPoly, Interval, gcd, isolate_with_chain, refine
from .riley import _run_word
from .twobridge import InvariantViolation, KnotFraction, SignData, sign_sequences

_LADDER_MAX_STEP = 0.05
_TRUST_RADIUS = 0.5
_X0_REFINE_WIDTH = Fraction(1, 1 << 40)


class LaurentBi:
    """Exact bivariate polynomial in t^(+-1) and x.

    Terms are stored as {t-exponent: x-coefficient tuple}; no zero rows.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        clean = {}
        if terms:
            for j, xs in terms.items():
                xs = list(xs)
                while xs and not xs[-1]:
                    xs.pop()
                if xs:
                    clean[j] = tuple(xs)
        self.terms = clean

    @classmethod
    def monomial(cls, coeff: int, t_exp: int = 0, x_exp: int = 0) -> "LaurentBi":
        if not coeff:
            return cls()
        return cls({t_exp: (0,) * x_exp + (coeff,)})

    @classmethod
    def zero(cls) -> "LaurentBi":
        return cls()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, LaurentBi) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "LaurentBi") -> "LaurentBi":
        out = {j: list(xs) for j, xs in self.terms.items()}
        for j, xs in other.terms.items():
            _acc(out, j, xs, 0, 1)
        return LaurentBi(out)

    def __sub__(self, other: "LaurentBi") -> "LaurentBi":
        out = {j: list(xs) for j, xs in self.terms.items()}
        for j, xs in other.terms.items():
            _acc(out, j, xs, 0, -1)
        return LaurentBi(out)

    def __neg__(self) -> "LaurentBi":
        return LaurentBi({j: [-c for c in xs] for j, xs in self.terms.items()})

    def __mul__(self, other: "LaurentBi") -> "LaurentBi":
        out: dict = {}
        for j1, xs1 in self.terms.items():
            for j2, xs2 in other.terms.items():
                j = j1 + j2
                row = out.setdefault(j, [])
                need = len(xs1) + len(xs2) - 1
                if len(row) < need:
                    row.extend([0] * (need - len(row)))
                for m1, c1 in enumerate(xs1):
                    if c1:
                        for m2, c2 in enumerate(xs2):
                            row[m1 + m2] += c1 * c2
        return LaurentBi(out)

    def shifted(self, t_shift: int = 0, x_shift: int = 0, scalar: int = 1) -> "LaurentBi":
        if not scalar:
            return LaurentBi()
        pad = (0,) * x_shift
        return LaurentBi(
            {
                j + t_shift: pad + tuple(scalar * c for c in xs)
                for j, xs in self.terms.items()
            }
        )

    def t_inverse(self) -> "LaurentBi":
        return LaurentBi({-j: xs for j, xs in self.terms.items()})

    @property
    def is_t_symmetric(self) -> bool:
        return all(self.terms.get(-j) == xs for j, xs in self.terms.items())

    def specialize_t_one(self) -> IntPoly:
        acc: list = []
        for xs in self.terms.values():
            if len(acc) < len(xs):
                acc.extend([0] * (len(xs) - len(acc)))
            for m, c in enumerate(xs):
                acc[m] += c
        return IntPoly(acc)

    def __call__(self, t: complex, x: complex) -> complex:
        total = 0j
        for j, xs in self.terms.items():
            acc = 0j
            for c in reversed(xs):
                acc = acc * x + c
            total += acc * t**j
        return total

    def max_abs_coeff(self) -> int:
        best = 0
        for xs in self.terms.values():
            for c in xs:
                if abs(c) > best:
                    best = abs(c)
        return best

    def __repr__(self):
        return f"LaurentBi({self.terms})"


def _acc(out: dict, j: int, xs, x_shift: int, scalar: int):
    row = out.setdefault(j, [])
    need = len(xs) + x_shift
    if len(row) < need:
        row.extend([0] * (need - len(row)))
    for m, c in enumerate(xs):
        if c:
            row[m + x_shift] += scalar * c


def meridian_matrices():
    """(rho_a, rho_b) with unit determinant; x marks the lower coupling."""
    t = LaurentBi.monomial(1, 1)
    tinv = LaurentBi.monomial(1, -1)
    one = LaurentBi.monomial(1)
    x = LaurentBi.monomial(1, 0, 1)
    zero = LaurentBi.zero()
    rho_a = (t, one, zero, tinv)
    rho_b = (t, zero, x, tinv)
    return rho_a, rho_b


def general_word(sd: SignData, rows: str = "full") -> tuple:
    """W = product of rho(a)^eps_i rho(b)^eta_i as exact Laurent entries.

    Returns (w11, w12, w21, w22); with rows="top" the bottom entries are None
    (the sweep over many knots only needs the top row).
    """
    w11 = {0: [1]}
    w12: dict = {}
    w21: dict = {}
    w22 = {0: [1]}
    bottom = rows == "full"
    for e, h in zip(sd.eps, sd.eta):
        d = e * h
        w11, w12 = _word_step(w11, w12, e, h, d)
        if bottom:
            w21, w22 = _word_step(w21, w22, e, h, d)
    if bottom:
        return (LaurentBi(w11), LaurentBi(w12), LaurentBi(w21), LaurentBi(w22))
    return (LaurentBi(w11), LaurentBi(w12), None, None)


def _word_step(u: dict, v: dict, e: int, h: int, d: int):
    """(u, v) -> (u*(t^(e+h) + e h x) + v*(h x t^-e),  u*(e t^-h) + v*t^-(e+h))."""
    nu: dict = {}
    nv: dict = {}
    for j, xs in u.items():
        _acc(nu, j + e + h, xs, 0, 1)
        _acc(nu, j, xs, 1, d)
        _acc(nv, j - h, xs, 0, e)
    for j, xs in v.items():
        _acc(nu, j - e, xs, 1, h)
        _acc(nv, j - (e + h), xs, 0, 1)
    _trim(nu)
    _trim(nv)
    return nu, nv


def _trim(rows: dict):
    dead = []
    for j, xs in rows.items():
        while xs and not xs[-1]:
            xs.pop()
        if not xs:
            dead.append(j)
    for j in dead:
        del rows[j]


def word_determinant(word: tuple) -> LaurentBi:
    w11, w12, w21, w22 = word
    return w11 * w22 - w12 * w21


def phi(word: tuple) -> LaurentBi:
    """The representation condition w11 + (1/t - t) w12 from the top row.

    Equating W rho(a) = rho(b) W entrywise: the (1,2) entry gives exactly
    this polynomial; (2,1) and (2,2) give the secondary conditions of
    entry_conditions, which vanish on its solution set.
    """
    w11, w12 = word[0], word[1]
    return w11 + w12.shifted(t_shift=-1) - w12.shifted(t_shift=1)


def entry_conditions(word: tuple) -> tuple:
    """Residual polynomials (t - 1/t) w21 - x w11 and w21 - x w12."""
    w11, w12, w21, _ = word
    if w21 is None:
        raise ValueError("entry conditions need the full word (rows='full')")
    e21 = w21.shifted(t_shift=1) - w21.shifted(t_shift=-1) - w11.shifted(x_shift=1)
    e22 = w21 - w12.shifted(x_shift=1)
    return e21, e22


class SymPoly:
    """Exact polynomial in (s, x); s is the meridian trace."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[dict] = None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    def __eq__(self, other):
        return isinstance(other, SymPoly) and self.coeffs == other.coeffs

    def specialize_s(self, s_value: int) -> IntPoly:
        acc: dict = {}
        for (i, m), c in self.coeffs.items():
            acc[m] = acc.get(m, 0) + c * s_value**i
        if not acc:
            return IntPoly.zero()
        out = [0] * (max(acc) + 1)
        for m, c in acc.items():
            out[m] = c
        return IntPoly(out)

    def partial_x(self) -> "SymPoly":
        out: dict = {}
        for (i, m), c in self.coeffs.items():
            if m:
                out[(i, m - 1)] = out.get((i, m - 1), 0) + m * c
        return SymPoly(out)

    def x_coeffs_at(self, s: float) -> list:
        """Float coefficients of x -> psi(s, x), ascending."""
        if not self.coeffs:
            return []
        deg_x = max(m for _, m in self.coeffs)
        out = [0.0] * (deg_x + 1)
        for (i, m), c in self.coeffs.items():
            out[m] += float(c) * s**i
        return out

    def __call__(self, s, x):
        acc = 0.0 if isinstance(s, float) else 0
        for (i, m), c in self.coeffs.items():
            acc += c * s**i * x**m
        return acc

    def max_abs_coeff(self) -> int:
        return max((abs(c) for c in self.coeffs.values()), default=0)

    @property
    def degree_s(self) -> int:
        return max((i for i, _ in self.coeffs), default=-1)

    @property
    def degree_x(self) -> int:
        return max((m for _, m in self.coeffs), default=-1)

    def __repr__(self):
        return f"SymPoly({self.coeffs})"


def to_psi(ph: LaurentBi) -> SymPoly:
    """Rewrite a t-symmetric Laurent polynomial in the trace variable.

    t^j + t^-j = P_j(s) with P_0 = 2, P_1 = s, P_j = s P_{j-1} - P_{j-2};
    asymmetric input is an error.
    """
    if not ph.is_t_symmetric:
        raise ValueError("phi is not symmetric under t -> 1/t")
    degree = max((abs(j) for j in ph.terms), default=0)
    basis = [[2], [0, 1]]
    while len(basis) <= degree:
        prev, prev2 = basis[-1], basis[-2]
        nxt = [0] + list(prev)
        for i, c in enumerate(prev2):
            nxt[i] -= c
        basis.append(nxt)
    out: dict = {}
    for j, xs in ph.terms.items():
        if j < 0:
            continue
        if j == 0:
            for m, c in enumerate(xs):
                if c:
                    out[(0, m)] = out.get((0, m), 0) + c
            continue
        for i, b in enumerate(basis[j]):
            if not b:
                continue
            for m, c in enumerate(xs):
                if c:
                    out[(i, m)] = out.get((i, m), 0) + b * c
    return SymPoly(out)


@dataclass(frozen=True)
class KnotDeformation:
    """Exact deformation data for one knot, with its consistency checks run."""

    fraction: KnotFraction
    sd: SignData
    word: tuple
    phi: LaurentBi
    psi: SymPoly
    lam: IntPoly


def build_deformation(k: KnotFraction, rows: str = "full") -> KnotDeformation:
    """Construct W, phi, psi for a knot and verify the three exact anchors:

    phi(t, x) = phi(1/t, x); psi(2, .) equals the parabolic polynomial; and
    t = 1 collapses W to the parabolic word.
    """
    sd = sign_sequences(k)
    word = general_word(sd, rows=rows)
    ph = phi(word)
    if not ph.is_t_symmetric:
        raise InvariantViolation(f"phi not t-symmetric for {k}")
    psi = to_psi(ph)
    rows_par = _run_word(sd, keep_all=False, bottom=(rows == "full"))
    lam = IntPoly(rows_par[0])
    if psi.specialize_s(2) != lam:
        raise InvariantViolation(f"psi(2, x) != parabolic polynomial for {k}")
    par = (rows_par[0], rows_par[1], rows_par[2], rows_par[3])
    for idx, entry in enumerate(word):
        if entry is None:
            continue
        if entry.specialize_t_one() != IntPoly(par[idx]):
            raise InvariantViolation(
                f"t=1 specialization of word entry {idx} is not parabolic for {k}"
            )
    return KnotDeformation(
        fraction=k, sd=sd, word=word, phi=ph, psi=psi, lam=lam
    )


@dataclass(frozen=True)
class Witness:
    """A tracked elliptic-trace root near a real parabolic root."""

    fraction: Optional[KnotFraction]
    n: int
    s_n: float
    x0: float
    x_n: float
    residual: float
    converged: bool

    def to_dict(self) -> dict:
        return {
            "p": self.fraction.p if self.fraction else None,
            "q": self.fraction.q if self.fraction else None,
            "n": self.n,
            "s_n": self.s_n,
            "x0": self.x0,
            "x_n": self.x_n,
            "residual": self.residual,
            "converged": self.converged,
        }


def elliptic_trace(n: int) -> float:
    return 2.0 * math.cos(2.0 * math.pi / n)


def _newton_step_poly(coeffs: Sequence[float], x: float):
    """(value, derivative) by a joint Horner pass."""
    v = 0.0
    dv = 0.0
    for c in reversed(coeffs):
        dv = dv * x + v
        v = v * x + c
    return v, dv


def _correct_at_s(
    coeffs: Sequence[float],
    x_start: float,
    tol_abs: float,
    trust: float,
    max_iter: int,
):
    """Newton with a trust radius around x_start, bisection as fallback."""
    x = x_start
    for _ in range(max_iter):
        v, dv = _newton_step_poly(coeffs, x)
        if abs(v) <= tol_abs:
            return x, abs(v), True
        if dv == 0.0:
            break
        nx = x - v / dv
        if abs(nx - x_start) > trust or not math.isfinite(nx):
            break
        x = nx
    lo, hi = x_start - trust, x_start + trust
    vlo, _ = _newton_step_poly(coeffs, lo)
    vhi, _ = _newton_step_poly(coeffs, hi)
    if vlo == 0.0:
        return lo, 0.0, True
    if vhi == 0.0:
        return hi, 0.0, True
    if (vlo > 0) == (vhi > 0):
        v, _ = _newton_step_poly(coeffs, x)
        return x, abs(v), abs(v) <= tol_abs
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        vm, _ = _newton_step_poly(coeffs, mid)
        if vm == 0.0 or hi - lo < 1e-15 * max(1.0, abs(mid)):
            return mid, abs(vm), abs(vm) <= tol_abs
        if (vm > 0) == (vlo > 0):
            lo, vlo = mid, vm
        else:
            hi = mid
    vm, _ = _newton_step_poly(coeffs, mid)
    return mid, abs(vm), abs(vm) <= tol_abs


def continue_root(
    psi: SymPoly,
    x0: Interval,
    n: int,
    fraction: Optional[KnotFraction] = None,
    tol: float = 1e-9,
    max_iter: int = 100,
) -> Witness:
    """Track the root x0 of psi(2, .) along traces from 2 down to s_n.

    The ladder keeps each Newton correction inside a 0.5 trust radius of the
    previous step's root (with sign-change bisection as fallback); honest
    non-convergence is reported, never raised.
    """
    if n < 3:
        raise ValueError("order n must be at least 3")
    lam = psi.specialize_s(2)
    iv = x0 if x0.is_point else refine(lam, x0, _X0_REFINE_WIDTH)
    x_start = float(iv.midpoint)
    s_target = elliptic_trace(n)
    base_steps = max(4, math.ceil(abs(2.0 - s_target) / _LADDER_MAX_STEP))
    x = x_start
    ok = True
    residual = float("inf")
    for mult in (1, 4, 16):  # retry a stubborn path with a finer ladder
        steps = base_steps * mult
        x = x_start
        ok = True
        for i in range(1, steps + 1):
            s = 2.0 + (s_target - 2.0) * (i / steps)
            coeffs = psi.x_coeffs_at(s)
            scale = max(1.0, max(abs(c) for c in coeffs))
            x, residual, ok = _correct_at_s(
                coeffs, x, tol * scale, _TRUST_RADIUS, max_iter
            )
            if not ok:
                break
        if ok:
            break
    return Witness(
        fraction=fraction,
        n=n,
        s_n=s_target,
        x0=x_start,
        x_n=x,
        residual=residual,
        converged=ok,
    )


def parabolic_root_intervals(deformation: KnotDeformation) -> list:
    _, ivs = isolate_with_chain(list(deformation.lam.coeffs))
    return ivs


def witnesses_for(
    deformation: KnotDeformation,
    orders: Iterable[int],
    tol: float = 1e-9,
) -> list:
    """A Witness per (real parabolic root, order)."""
    out = []
    for iv in parabolic_root_intervals(deformation):
        for n in orders:
            out.append(
                continue_root(
                    deformation.psi,
                    iv,
                    n,
                    fraction=deformation.fraction,
                    tol=tol,
                )
            )
    return out


def nondegenerate_at_parabolic_roots(deformation: KnotDeformation) -> list:
    """|d psi/d x| at (2, root) per real root; exact squarefree fallback.

    A zero derivative would contradict squarefreeness of the parabolic
    polynomial; the float values are returned for inspection and the exact
    gcd check backs them up.
    """
    lam = deformation.lam
    if gcd(lam, lam.derivative()).degree != 0:
        raise InvariantViolation("parabolic polynomial is not squarefree")
    dpsi = deformation.psi.partial_x()
    vals = []
    for iv in parabolic_root_intervals(deformation):
        iv = refine(lam, iv, Fraction(1, 1 << 30))
        vals.append(abs(dpsi(2.0, float(iv.midpoint))))
    return vals


@dataclass(frozen=True)
class ResidualReport:
    fraction: KnotFraction
    s: float
    x: float
    relation_residual: float
    trace_residual: float
    order_n: Optional[int]
    order_residual: Optional[float]


def verify_representation(
    k: KnotFraction,
    s: float,
    x: float,
    order_n: Optional[int] = None,
    word: Optional[tuple] = None,
) -> ResidualReport:
    """Numerical residual of W rho(a) = rho(b) W at trace s and coupling x.

    t is placed on the unit circle via s = 2 cos(theta); |s| <= 2 is required.
    With order_n given, the theta-rotation is additionally checked to have
    that order.
    """
    if abs(s) > 2:
        raise ValueError("trace must satisfy |s| <= 2")
    if word is None:
        word = general_word(sign_sequences(k), rows="full")
    theta = math.acos(s / 2.0)
    t = cmath.exp(1j * theta)
    w11, w12, w21, w22 = (entry(t, x) for entry in word)
    ta, tb = t, 1.0 / t
    # W * rho(a) - rho(b) * W with rho(a) = [[t,1],[0,1/t]], rho(b) = [[t,0],[x,1/t]]
    r11 = w11 * ta - ta * w11
    r12 = w11 + w12 * tb - ta * w12
    r21 = w21 * ta - (x * w11 + tb * w21)
    r22 = w21 + w22 * tb - (x * w12 + tb * w22)
    relation = max(abs(r11), abs(r12), abs(r21), abs(r22))
    trace_res = abs(2.0 * math.cos(theta) - s)
    order_res = None
    if order_n is not None:
        c, sn = math.cos(theta), math.sin(theta)
        m = ((1.0, 0.0), (0.0, 1.0))
        rot = ((c, -sn), (sn, c))
        for _ in range(order_n):
            m = (
                (
                    m[0][0] * rot[0][0] + m[0][1] * rot[1][0],
                    m[0][0] * rot[0][1] + m[0][1] * rot[1][1],
                ),
                (
                    m[1][0] * rot[0][0] + m[1][1] * rot[1][0],
                    m[1][0] * rot[0][1] + m[1][1] * rot[1][1],
                ),
            )
        order_res = max(
            abs(m[0][0] - 1.0), abs(m[0][1]), abs(m[1][0]), abs(m[1][1] - 1.0)
        )
    return ResidualReport(
        fraction=k,
        s=s,
        x=x,
        relation_residual=relation,
        trace_residual=trace_res,
        order_n=order_n,
        order_residual=order_res,
    )
