"""Canonical 2-bridge fractions, their sign sequences, and knot invariants.

A knot is presented by p/q with p odd > 1 and q odd, coprime, -p < q < p.
The two-generator presentation word fixes sign sequences eps_i, eta_i whose
palindrome symmetry and determinant congruence are enforced loudly: they are
the built-in cross-checks that would expose a wrong sign convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd as int_gcd
from typing import Iterator


class InvariantViolation(RuntimeError):
    """An internally-verified identity failed; signals a convention bug."""


@dataclass(frozen=True, order=True)
class KnotFraction:
    """Canonical fraction p/q of a 2-bridge knot."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p <= 1 or p % 2 == 0:
            raise ValueError(f"p must be odd and > 1, got {p}")
        if q == 0 or q % 2 == 0 or not -p < q < p:
            raise ValueError(f"q must be odd, nonzero, in (-{p}, {p}), got {q}")
        if int_gcd(p, abs(q)) != 1:
            raise ValueError(f"p and q must be coprime, got {p}, {q}")

    @property
    def n(self) -> int:
        return (self.p - 1) // 2

    def __str__(self):
        return f"{self.p}/{self.q}"


def normalize(p: int, q: int) -> KnotFraction:
    """Canonical odd representative of q modulo 2p, in (-p, p).

    Even intermediates are shifted by p (positive even subtracts p, negative
    even adds p); the result presents the same knot.
    """
    if p <= 1 or p % 2 == 0:
        raise ValueError(f"p must be odd and > 1, got {p}")
    if int_gcd(p, abs(q)) != 1:
        raise ValueError(f"p and q must be coprime, got {p}, {q}")
    r = q % (2 * p)
    if r >= p:
        r -= 2 * p
    if r % 2 == 0:
        r = r - p if r > 0 else r + p
    return KnotFraction(p, r)


@dataclass(frozen=True)
class SignData:
    """Sign sequences of the presentation word and their running products."""

    n: int
    eps: tuple
    eta: tuple
    delta: tuple
    mu: tuple

    def __post_init__(self):
        n = self.n
        if len(self.eps) != n or len(self.eta) != n:
            raise InvariantViolation("sign sequence length mismatch")
        for i in range(n):
            if self.eps[i] != self.eta[n - 1 - i]:
                raise InvariantViolation(
                    f"palindrome symmetry broken at i={i + 1}: "
                    f"eps={self.eps[i]}, eta={self.eta[n - 1 - i]}"
                )
            if self.delta[i] != self.eps[i] * self.eta[i]:
                raise InvariantViolation("delta inconsistent with eps*eta")
        if self.mu[0] != 1 or len(self.mu) != n + 1:
            raise InvariantViolation("mu must start at 1 with length n+1")
        for k in range(1, n + 1):
            if self.mu[k] != self.eps[k - 1] * self.mu[k - 1]:
                raise InvariantViolation("mu is not the prefix product of eps")


def sign_sequences(k: KnotFraction) -> SignData:
    """eps_i = (-1)**floor((2i-1)q/p), eta_i = (-1)**floor(2iq/p)."""
    p, q, n = k.p, k.q, k.n
    eps = tuple(
        -1 if (((2 * i - 1) * q) // p) % 2 else 1 for i in range(1, n + 1)
    )
    eta = tuple(-1 if ((2 * i * q) // p) % 2 else 1 for i in range(1, n + 1))
    delta = tuple(e * h for e, h in zip(eps, eta))
    mu = [1]
    for e in eps:
        mu.append(mu[-1] * e)
    return SignData(n=n, eps=eps, eta=eta, delta=delta, mu=tuple(mu))


def signature(sd: SignData) -> int:
    """Sum of (eps_i + eta_i); always even, equal to 2*sum(eps)."""
    sig = sum(sd.eps) + sum(sd.eta)
    if sig != 2 * sum(sd.eps):
        raise InvariantViolation("signature identity sum(eps) = sigma/2 failed")
    return sig


def determinant(k: KnotFraction) -> int:
    return k.p


@dataclass(frozen=True)
class KnotInvariants:
    """Signature and determinant, with their mod-4 congruence verified."""

    signature: int
    determinant: int

    def __post_init__(self):
        if self.signature % 2 != 0:
            raise InvariantViolation("signature must be even")
        want = 1 if (self.signature // 2) % 2 == 0 else -1
        if (self.determinant - want) % 4 != 0:
            raise InvariantViolation(
                f"determinant {self.determinant} is not congruent to "
                f"(-1)^(sigma/2) = {want} mod 4"
            )


def invariants(k: KnotFraction) -> KnotInvariants:
    return KnotInvariants(signature=signature(sign_sequences(k)), determinant=k.p)


def _order_key(q: int) -> tuple:
    return (0, q) if q > 0 else (1, -q)


def equivalent_forms(k: KnotFraction) -> set:
    """Canonical q-values presenting the same knot: q and q^-1 mod p."""
    inv = pow(k.q % k.p, -1, k.p)
    alt = inv if inv % 2 == 1 else inv - k.p
    return {k.q, alt}


def enumerate_fractions(pmax: int, dedup: bool = False) -> Iterator[KnotFraction]:
    """All canonical fractions with 3 <= p <= pmax, in (p, q-order).

    q runs over positive odds ascending, then negative odds by magnitude.
    With dedup, only the first representative of each {q, q^-1 mod p} class
    is emitted.
    """
    if pmax < 3:
        raise ValueError("pmax must be at least 3")
    for p in range(3, pmax + 1, 2):
        qs = [q for q in range(1, p, 2) if int_gcd(p, q) == 1]
        qs += [-q for q in qs]
        qs.sort(key=_order_key)
        for q in qs:
            k = KnotFraction(p, q)
            if dedup:
                key = _order_key(q)
                if min(_order_key(c) for c in equivalent_forms(k)) < key:
                    continue
            yield k


def mirror(k: KnotFraction) -> KnotFraction:
    return KnotFraction(k.p, -k.q)
