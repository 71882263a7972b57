"""Canonical set partitions of {0,...,n-1} and the coarsening order.

A partition is stored as a restricted growth string (rgs): position i
carries the index of the block containing point i, blocks numbered by
order of first occurrence.  This makes block order coincide with the
order of block minima, so the representation is canonical and hashable.

The order used everywhere is the one where coarser partitions are
*lower*: ``is_coarsening(s, t)`` holds when every t-block sits inside a
single s-block (written s <= t).  ``meet_refine`` is then the least
common upper bound: the common refinement.

All counting is exact big-integer arithmetic; enumeration streams are
lazy generators in lexicographic rgs order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import DomainError

__all__ = [
    "SetPartition",
    "enumerate_partitions",
    "enumerate_equipartitions",
    "is_coarsening",
    "meet_refine",
    "count_partitions",
    "count_equipartitions",
    "coarsenings_of",
    "rgs_is_valid",
    "rgs_leq",
    "rgs_meet",
    "rgs_restrict",
    "relabel_canonical",
]


def rgs_is_valid(rgs: tuple[int, ...]) -> bool:
    """True iff rgs is a restricted growth string (empty allowed)."""
    mx = -1
    for v in rgs:
        if v < 0 or v > mx + 1:
            return False
        if v > mx:
            mx = v
    return True


def relabel_canonical(labels) -> tuple[int, ...]:
    """Relabel an arbitrary block-label sequence into canonical rgs form."""
    table: dict = {}
    out = []
    for lab in labels:
        idx = table.get(lab)
        if idx is None:
            idx = table[lab] = len(table)
        out.append(idx)
    return tuple(out)


def rgs_leq(s: tuple[int, ...], t: tuple[int, ...]) -> bool:
    """s <= t: every t-block is contained in a single s-block.

    Single pass over a t-block -> s-block remap table; no block sets are
    materialized.  Inner loop of every lemma engine.
    """
    table = [-1] * (len(t) + 1)
    for sv, tv in zip(s, t):
        cur = table[tv]
        if cur < 0:
            table[tv] = sv
        elif cur != sv:
            return False
    return True


def rgs_meet(t1: tuple[int, ...], t2: tuple[int, ...]) -> tuple[int, ...]:
    """Common refinement: i ~ j iff i t1 j and i t2 j, canonically labeled."""
    return relabel_canonical(zip(t1, t2))


def rgs_restrict(rgs: tuple[int, ...], length: int) -> tuple[int, ...]:
    """Restriction to {0,...,length-1}; a prefix of an rgs is an rgs."""
    return rgs[:length]


@dataclass(frozen=True)
class SetPartition:
    """A partition of {0,...,n-1} in canonical rgs form.

    The empty partition (n = 0) is a legal value: it appears as the
    0-th approximation of every prefix.
    """

    rgs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rgs", tuple(self.rgs))
        if not rgs_is_valid(self.rgs):
            raise DomainError(f"not a restricted growth string: {self.rgs!r}")

    @property
    def n(self) -> int:
        return len(self.rgs)

    @property
    def num_blocks(self) -> int:
        return max(self.rgs) + 1 if self.rgs else 0

    @property
    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for i, v in enumerate(self.rgs):
            out[v].append(i)
        return out

    def block_sizes(self) -> list[int]:
        sizes = [0] * self.num_blocks
        for v in self.rgs:
            sizes[v] += 1
        return sizes

    def restrict(self, length: int) -> "SetPartition":
        if length > self.n:
            raise DomainError(f"cannot restrict length-{self.n} partition to {length}")
        return SetPartition(self.rgs[:length])

    @classmethod
    def from_labels(cls, labels) -> "SetPartition":
        return cls(relabel_canonical(labels))

    @classmethod
    def from_blocks(cls, blocks, n: int) -> "SetPartition":
        labels = [-1] * n
        for idx, blk in enumerate(blocks):
            for p in blk:
                if not 0 <= p < n or labels[p] >= 0:
                    raise DomainError(f"blocks do not partition range({n})")
                labels[p] = idx
        if any(v < 0 for v in labels):
            raise DomainError(f"blocks do not cover range({n})")
        return cls.from_labels(labels)

    @classmethod
    def discrete(cls, n: int) -> "SetPartition":
        return cls(tuple(range(n)))

    @classmethod
    def single_block(cls, n: int) -> "SetPartition":
        return cls((0,) * n)

    def to_text(self) -> str:
        return ",".join(str(v) for v in self.rgs)

    @classmethod
    def from_text(cls, text: str) -> "SetPartition":
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(int(tok) for tok in text.split(",")))

    def __str__(self) -> str:
        return self.to_text() or "(empty)"


def iter_rgs(n: int, m: int = 0) -> Iterator[tuple[int, ...]]:
    """All rgs of length n with points 0..m-1 in distinct blocks, lex order.

    Separating the first m points forces rgs[i] = i for i < m, so the
    constraint is a fixed prefix.  Iterative successor computation; the
    helper array b tracks prefix maxima.
    """
    if n < 1:
        raise DomainError("domain size must be >= 1")
    if m < 0 or m > n:
        raise DomainError(f"need 0 <= m <= n, got m={m}, n={n}")
    lo = m if m >= 2 else 1
    a = list(range(lo)) + [0] * (n - lo)
    b = [0] * n  # b[i] = max(a[0..i-1]) for i >= 1
    for i in range(1, n):
        b[i] = max(b[i - 1], a[i - 1])
    while True:
        yield tuple(a)
        i = n - 1
        while i >= lo and a[i] > b[i]:
            i -= 1
        if i < lo:
            return
        a[i] += 1
        mx = b[i] if b[i] >= a[i] else a[i]
        for j in range(i + 1, n):
            a[j] = 0
            b[j] = mx


def enumerate_partitions(n: int, m: int = 0) -> Iterator[SetPartition]:
    """Stream every partition of n points separating the first m, lex order."""
    for rgs in iter_rgs(n, m):
        yield SetPartition(rgs)


def iter_equipartition_rgs(k: int, N: int, m: int = 0) -> Iterator[tuple[int, ...]]:
    """All rgs of k*N points with k blocks of N points each, first m separated."""
    if k < 1 or N < 1:
        raise DomainError("need k >= 1 and N >= 1")
    if m < 0 or m > k:
        raise DomainError(f"need 0 <= m <= k, got m={m}, k={k}")
    n = k * N
    a = [0] * n
    counts = [0] * k

    def rec(i: int, used: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(a)
            return
        if i < m:
            # canonical form forces each of the first m points to open a block
            a[i] = i
            counts[i] += 1
            yield from rec(i + 1, max(used, i + 1))
            counts[i] -= 1
            return
        for j in range(used):
            if counts[j] < N:
                a[i] = j
                counts[j] += 1
                yield from rec(i + 1, used)
                counts[j] -= 1
        if used < k:
            a[i] = used
            counts[used] += 1
            yield from rec(i + 1, used + 1)
            counts[used] -= 1

    yield from rec(0, 0)


def enumerate_equipartitions(k: int, N: int, m: int = 0) -> Iterator[SetPartition]:
    """Stream the equipartitions of k*N points (k blocks of N), lex order."""
    for rgs in iter_equipartition_rgs(k, N, m):
        yield SetPartition(rgs)


def is_coarsening(s: SetPartition, t: SetPartition) -> bool:
    """s <= t: true iff every t-block is contained in a single s-block."""
    if s.n != t.n:
        raise DomainError(f"domain size mismatch: {s.n} vs {t.n}")
    return rgs_leq(s.rgs, t.rgs)


def meet_refine(t1: SetPartition, t2: SetPartition) -> SetPartition:
    """Least common upper bound of t1, t2: their common refinement."""
    if t1.n != t2.n:
        raise DomainError(f"domain size mismatch: {t1.n} vs {t2.n}")
    return SetPartition(rgs_meet(t1.rgs, t2.rgs))


def count_partitions(n: int) -> int:
    """Number of partitions of n points, by the Bell triangle recurrence."""
    if n < 1:
        raise DomainError("domain size must be >= 1")
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[-1]


def count_equipartitions(k: int, N: int) -> int:
    """(kN)! / (N!^k * k!), the size of the equipartition space."""
    from math import factorial

    if k < 1 or N < 1:
        raise DomainError("need k >= 1 and N >= 1")
    return factorial(k * N) // (factorial(N) ** k * factorial(k))


def coarsenings_of(s: SetPartition) -> Iterator[SetPartition]:
    """All t <= s, by merging s-blocks along every partition of the block set."""
    k = s.num_blocks
    if k == 0:
        yield s
        return
    srgs = s.rgs
    for q in iter_rgs(k):
        yield SetPartition(relabel_canonical(q[v] for v in srgs))
