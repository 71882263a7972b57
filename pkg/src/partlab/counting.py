"""Exact counting formulas and inequality material for the witness engines.

Everything on a counting path is exact: big integers and Fractions.  The
only floating-point value in the package is the entropy-relaxed
diagnostic of comb_ratio_bound, which is explicitly approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import DomainError
from .partitions import SetPartition, is_coarsening

__all__ = [
    "CoarseningProfile",
    "profile_of",
    "count_extensions",
    "entropy_bounds",
    "ratio_R",
    "comb_ratio_bound",
    "CombRatioBound",
]


@dataclass(frozen=True)
class CoarseningProfile:
    """Shape data of a coarse partition t inside the equipartition space.

    blocks[i] = (k_i, m_i): block i covers k_i * N points and contains
    m_i of the distinguished points 0..m-1.  splits[i] lists the
    refinement sub-blocks (k_ij, m_ij) of block i, ordered by minimum;
    an unsplit block has the single entry (k_i, m_i).
    """

    blocks: tuple[tuple[int, int], ...]
    splits: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.splits) or not self.blocks:
            raise DomainError("profile needs one split list per block")
        for (ki, mi), sub in zip(self.blocks, self.splits):
            if ki <= 0 or not 0 <= mi <= ki:
                raise DomainError(f"bad block data (k_i={ki}, m_i={mi})")
            if not sub:
                raise DomainError("each block needs at least one sub-block")
            if sum(kij for kij, _ in sub) != ki or sum(mij for _, mij in sub) != mi:
                raise DomainError(f"sub-blocks do not add up for block ({ki}, {mi})")
            for kij, mij in sub:
                if kij <= 0 or not 0 <= mij <= kij:
                    raise DomainError(f"bad sub-block data (k_ij={kij}, m_ij={mij})")

    @property
    def u(self) -> int:
        return len(self.blocks)

    @property
    def k(self) -> int:
        return sum(ki for ki, _ in self.blocks)

    @property
    def m(self) -> int:
        return sum(mi for _, mi in self.blocks)


def profile_of(
    t: SetPartition, N: int, m: int, h: Optional[SetPartition] = None
) -> CoarseningProfile:
    """Extract the profile of t (refined by h, if given) at grain N.

    Raises DomainError when t cannot coarsen any equipartition with the
    given parameters: a block size not a multiple of N, or more than
    k_i distinguished points in a block.
    """
    if N < 1:
        raise DomainError("need N >= 1")
    if t.n % N != 0:
        raise DomainError(f"domain size {t.n} is not a multiple of N={N}")
    if not 0 <= m <= t.n:
        raise DomainError(f"need 0 <= m <= {t.n}")
    if h is None:
        h = t
    elif not is_coarsening(t, h):
        raise DomainError("h must refine t")
    blocks = []
    splits = []
    for blk in t.blocks:
        size = len(blk)
        if size % N != 0:
            raise DomainError(f"block of size {size} is not a multiple of N={N}")
        ki = size // N
        mi = sum(1 for p in blk if p < m)
        if mi > ki:
            raise DomainError(f"block holds {mi} distinguished points but only {ki} slots")
        sub_ids: dict[int, list[int]] = {}
        for p in blk:
            sub_ids.setdefault(h.rgs[p], []).append(p)
        sub = []
        for _, pts in sorted(sub_ids.items(), key=lambda kv: min(kv[1])):
            if len(pts) % N != 0:
                raise DomainError(f"sub-block of size {len(pts)} is not a multiple of N={N}")
            kij = len(pts) // N
            mij = sum(1 for p in pts if p < m)
            if mij > kij:
                raise DomainError(
                    f"sub-block holds {mij} distinguished points but only {kij} slots"
                )
            sub.append((kij, mij))
        blocks.append((ki, mi))
        splits.append(tuple(sub))
    return CoarseningProfile(tuple(blocks), tuple(splits))


def count_extensions(profile: CoarseningProfile, k: int, N: int, m: int) -> int:
    """|{s in the (k, N, m) equipartition space : t <= s}| for t of this profile.

    Product formula: 1/((N-1)!^m N!^(k-m)) * prod_i (k_i N - m_i)!/(k_i - m_i)!.
    """
    if N < 1:
        raise DomainError("need N >= 1")
    if profile.k != k or profile.m != m:
        raise DomainError(
            f"profile totals (k={profile.k}, m={profile.m}) do not match ({k}, {m})"
        )
    num = 1
    den = math.factorial(N - 1) ** m * math.factorial(N) ** (k - m)
    for ki, mi in profile.blocks:
        num *= math.factorial(ki * N - mi) // math.factorial(ki - mi)
    q, r = divmod(num, den)
    if r:
        raise DomainError("extension count is not an integer; inconsistent profile")
    return q


def _pow2_entropy_exact(a: int, b: int) -> Fraction:
    """2^(b H(a/b)) as the exact rational b^b / (a^a (b-a)^(b-a)); 0^0 = 1."""
    return Fraction(b**b, a**a * (b - a) ** (b - a))


def entropy_bounds(a: int, b: int) -> tuple[Fraction, int, Fraction]:
    """The sandwich (1/(b+1)) 2^(b H(a/b)) <= C(b, a) <= 2^(b H(a/b)).

    Returns (lower, binomial, upper) as exact values so the comparison
    involves no floating point.
    """
    if b < 1 or not 0 <= a <= b:
        raise DomainError(f"need 0 <= a <= b and b >= 1, got a={a}, b={b}")
    power = _pow2_entropy_exact(a, b)
    return power / (b + 1), math.comb(b, a), power


def ratio_R(a1: int, a2: int, b1: int, b2: int, N: int) -> Fraction:
    """Exact value of the factorial-combination ratio at a given N.

    ((a1 N - b1)!/(a1 - b1)!) ((a2 N - b2)!/(a2 - b2)!)
    (((a1+a2)-(b1+b2))! / ((a1+a2) N - (b1+b2))!).
    """
    for a, b in ((a1, b1), (a2, b2)):
        if a < 1 or not 0 <= b <= a:
            raise DomainError(f"need 0 <= b <= a and a >= 1, got a={a}, b={b}")
    if N < 1:
        raise DomainError("need N >= 1")
    f = math.factorial
    return Fraction(
        f(a1 * N - b1) * f(a2 * N - b2) * f((a1 + a2) - (b1 + b2)),
        f(a1 - b1) * f(a2 - b2) * f((a1 + a2) * N - (b1 + b2)),
    )


class CombRatioBound(NamedTuple):
    exact: Fraction  # product of binomial quotients, exact
    entropy_diag: float  # entropy-relaxed upper bound, approximate


def _binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def comb_ratio_bound(profile: CoarseningProfile, N: int) -> CombRatioBound:
    """Bound on the fraction of candidates above a strictly split block.

    Exact form: product over blocks with k_{i,1} < k_i of
    C(k_i - m_i, k_{i,1} - m_{i,1}) / C(k_i N - m_i, k_{i,1} N - m_{i,1}).
    The entropy-relaxed product is returned as a float diagnostic only.
    """
    if N < 1:
        raise DomainError("need N >= 1")
    exact = Fraction(1)
    diag = 1.0
    split_seen = False
    for (ki, mi), sub in zip(profile.blocks, profile.splits):
        ki1, mi1 = sub[0]
        if ki1 >= ki:
            continue
        split_seen = True
        exact *= Fraction(math.comb(ki - mi, ki1 - mi1), math.comb(ki * N - mi, ki1 * N - mi1))
        small = ki - mi
        big = ki * N - mi
        h_small = _binary_entropy((ki1 - mi1) / small) if small else 0.0
        h_big = _binary_entropy((ki1 * N - mi1) / big) if big else 0.0
        diag *= (big + 1) * 2.0 ** (small * h_small - big * h_big)
    if not split_seen:
        raise DomainError("profile has no strictly split block; ratio bound undefined")
    return CombRatioBound(exact, diag)
