"""Variation counts and the weakened-chain real-root lower bound.

For a polynomial sequence whose first member is a nonzero constant and whose
interior members separate their neighbours' signs at every real root, the
difference of sign variations at -infinity and +infinity lower-bounds the
number of distinct real roots of the last member.  This module verifies the
hypotheses exactly and computes the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import _intops as ops
from .exactpoly import (
    Interval,
    IntPoly,
    ZeroPolynomialError,
    certified_sign_at_root,
    isolate_with_chain,
    refine,
    sign_at_infinity,
)


class HypothesesNotSatisfied(ValueError):
    """The bound was requested for a sequence that failed verification."""


def variation(signs: Sequence[int]) -> int:
    """Adjacent sign changes in a sequence of strictly non-zero signs."""
    for s in signs:
        if s == 0:
            raise ValueError("variation is undefined on sequences with zeros")
    return sum(
        1 for i in range(len(signs) - 1) if signs[i] != signs[i + 1]
    )


@dataclass(frozen=True)
class VariationCount:
    at_minus_inf: int
    at_plus_inf: int

    @property
    def bound(self) -> int:
        return abs(self.at_minus_inf - self.at_plus_inf)


def variation_at_infinity(seq: Sequence[IntPoly]) -> VariationCount:
    for f in seq:
        if f.is_zero:
            raise ZeroPolynomialError("sequence contains the zero polynomial")
    return VariationCount(
        at_minus_inf=variation([sign_at_infinity(f, -1) for f in seq]),
        at_plus_inf=variation([sign_at_infinity(f, +1) for f in seq]),
    )


@dataclass(frozen=True)
class HypothesisViolation:
    kind: str
    k: int
    witness: Optional[Interval]
    detail: str


@dataclass(frozen=True)
class HypothesesReport:
    passed: bool
    violations: tuple
    roots_checked: int


def check_hypotheses(
    seq: Sequence[IntPoly],
    pre_refine_width: Optional[Fraction] = None,
) -> HypothesesReport:
    """Verify the two chain hypotheses exactly, reporting every violation.

    (1) the first member is a nonzero constant; (2) at every real root of an
    interior member, the two neighbours have nonzero opposite-product signs.
    Root isolation plus certified interval signs keep the check exact;
    pre_refine_width optionally shrinks the isolating intervals first (the
    verdict must not depend on it).
    """
    seq = list(seq)
    if not seq:
        raise ValueError("empty sequence")
    for f in seq:
        if f.is_zero:
            raise ValueError("sequences with zero members are rejected")
    violations = []
    if seq[0].degree != 0:
        violations.append(
            HypothesisViolation(
                kind="first_not_constant",
                k=0,
                witness=None,
                detail=f"degree {seq[0].degree}",
            )
        )
    roots_checked = 0
    for k in range(1, len(seq) - 1):
        fk = seq[k]
        if fk.degree < 1:
            continue
        chain, ivs = isolate_with_chain(list(fk.coeffs))
        if not ivs:
            continue
        work = chain.sqfree_part
        prev_c = list(seq[k - 1].coeffs)
        next_c = list(seq[k + 1].coeffs)
        for iv in ivs:
            if pre_refine_width is not None and not iv.is_point:
                iv = refine(fk, iv, pre_refine_width)
            roots_checked += 1
            s_prev, iv2 = certified_sign_at_root(prev_c, work, iv)
            s_next, iv3 = certified_sign_at_root(next_c, work, iv2)
            if s_prev * s_next >= 0:
                violations.append(
                    HypothesisViolation(
                        kind="neighbour_product",
                        k=k,
                        witness=iv3,
                        detail=(
                            f"sign(f_{k - 1}) * sign(f_{k + 1}) = "
                            f"{s_prev} * {s_next} at a root of f_{k}"
                        ),
                    )
                )
    return HypothesesReport(
        passed=not violations,
        violations=tuple(violations),
        roots_checked=roots_checked,
    )


def lower_bound(
    seq: Sequence[IntPoly],
    report: Optional[HypothesesReport] = None,
) -> int:
    """The variation-difference lower bound; refuses unverified sequences."""
    if report is None:
        report = check_hypotheses(seq)
    if not report.passed:
        raise HypothesesNotSatisfied(
            f"{len(report.violations)} hypothesis violation(s); bound not valid"
        )
    return variation_at_infinity(seq).bound


def classical_sturm_reversed(f: IntPoly) -> list:
    """Classical Sturm chain of f, reversed so f is the last member.

    The reversed chain satisfies the hypotheses verbatim and its bound is
    exactly the distinct-real-root count of f (the equality case used as an
    oracle in tests).
    """
    from .exactpoly import sturm_sequence

    return list(reversed(sturm_sequence(f)))
