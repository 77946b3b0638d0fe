"""Exact verification of the real-root lower bound for 2-bridge knots.

The pipeline: a fraction p/q fixes sign sequences, the sign sequences drive
a polynomial matrix recurrence whose top-left entry is the Riley polynomial,
and exact Sturm machinery counts its distinct real roots against |sigma|/2.
A generalized variation bound makes the inequality structural, and trace
deformations continue real parabolic roots to elliptic-trace witnesses.
"""

from .exactpoly import (
    IntPoly,
    Interval,
    Rational,
    ZeroPolynomialError,
    cauchy_bound,
    count_real_roots,
    count_roots_in,
    divides,
    gcd,
    is_squarefree,
    isolate_real_roots,
    refine,
    sign_at,
    sign_at_infinity,
    sturm_sequence,
)
from .twobridge import (
    InvariantViolation,
    KnotFraction,
    KnotInvariants,
    SignData,
    determinant,
    enumerate_fractions,
    invariants,
    mirror,
    normalize,
    sign_sequences,
    signature,
)
from .riley import (
    FSequence,
    RileySequence,
    VerificationReport,
    certify_parabolic,
    conjecture_bound,
    f_sequence,
    lemma31_check,
    riley_polynomial,
    riley_polynomial_of,
    riley_sequence,
    verify_conjecture,
    verify_conjecture_pair,
    verify_sequence_identities,
)
from .sturmvar import (
    HypothesesNotSatisfied,
    VariationCount,
    check_hypotheses,
    classical_sturm_reversed,
    lower_bound,
    variation,
    variation_at_infinity,
)
from .deform import (
    KnotDeformation,
    LaurentBi,
    SymPoly,
    Witness,
    build_deformation,
    continue_root,
    elliptic_trace,
    entry_conditions,
    general_word,
    phi,
    to_psi,
    verify_representation,
    witnesses_for,
    word_determinant,
)
from .scan import ScanConfig, ScanSummary, run_scan

__version__ = "0.1.0"
