"""Message-to-syndrome map: hash, counter, and combinadic unranking.

A message digest h (x bits) and a counter l (y bits) form the integer
(h << y) | l, which is unranked into the weight-w length-r vector whose
sorted support {a_1 < ... < a_w} has colexicographic rank
sum_i C(a_i, i).  The registry guarantees C(r, w) >= 2^(x+y), so every
(h, l) pair lands on a distinct syndrome.  The signer scans l upward
from zero until the syndrome is orthogonal to the public matrix b and
the smallest such counter is part of the signature, which makes
signatures canonical.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .gf2 import BitVector, DenseMatrix
from .params import ParameterSet

__all__ = [
    "CounterExhausted",
    "PublicSyndrome",
    "rank_support",
    "unrank",
    "digest_message",
    "map_to_syndrome",
    "find_orthogonal",
]


class CounterExhausted(RuntimeError):
    """No counter value in [0, 2^y) produced a b-orthogonal syndrome."""


@dataclass(frozen=True)
class PublicSyndrome:
    """Weight-w syndrome with the counter that produced it.

    tries counts how many counter values were tested (theta + 1 for the
    canonical smallest-counter search).
    """

    s: BitVector
    theta: int
    tries: int


def rank_support(support) -> int:
    """Colex rank of a sorted support tuple."""
    return sum(math.comb(a, i + 1) for i, a in enumerate(sorted(support)))


def unrank(index: int, r: int, w: int) -> list[int]:
    """Support of the index-th weight-w vector of length r, colex order."""
    if not 0 <= index < math.comb(r, w):
        raise ValueError(f"index {index} outside [0, C({r},{w}))")
    support = []
    for i in range(w, 0, -1):
        # largest a with C(a, i) <= index, found by binary search
        lo, hi = i - 1, r - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if math.comb(mid, i) <= index:
                lo = mid
            else:
                hi = mid - 1
        support.append(lo)
        index -= math.comb(lo, i)
    support.reverse()
    return support


def digest_message(message: bytes, ps: ParameterSet) -> int:
    """x most significant bits of the message hash, as an integer."""
    if ps.x <= 256:
        raw = hashlib.sha256(message).digest()
    elif ps.x <= 512:
        raw = hashlib.sha512(message).digest()
    else:
        raise ValueError(f"digest width {ps.x} not supported")
    return int.from_bytes(raw, "big") >> (8 * len(raw) - ps.x)


def map_to_syndrome(h: int, l: int, ps: ParameterSet) -> BitVector:
    """Unrank [h | l] (h in the high bits) into a weight-w syndrome."""
    if not 0 <= h < 1 << ps.x:
        raise ValueError(f"digest value needs more than {ps.x} bits")
    if not 0 <= l < 1 << ps.y:
        raise ValueError(f"counter value needs more than {ps.y} bits")
    index = (h << ps.y) | l
    return BitVector.from_support(ps.r, unrank(index, ps.r, ps.w))


def find_orthogonal(h: int, b: DenseMatrix, ps: ParameterSet) -> PublicSyndrome:
    """Smallest counter whose syndrome satisfies b s = 0.

    b is the expanded z x r public constraint matrix.  Raises
    CounterExhausted when no counter below 2^y works; with z parity
    constraints a counter is accepted with chance about 2^-z, so the
    expected number of tries is 2^z and exhaustion has probability
    around (1 - 2^-z)^(2^y).
    """
    if b.cols != ps.r:
        raise ValueError(f"constraint matrix is {b.rows}x{b.cols}, expected z x {ps.r}")
    for l in range(1 << ps.y):
        s = map_to_syndrome(h, l, ps)
        if b.mul_vec(s).weight() == 0:
            return PublicSyndrome(s=s, theta=l, tries=l + 1)
    raise CounterExhausted(f"no orthogonal syndrome within 2^{ps.y} counters")
