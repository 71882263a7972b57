"""Finite section lemma for block partitions with large blocks.

A (k, N)-partition splits a finite ground set into k blocks of at least
N points.  A section meets each block at most once; a complete section
meets each exactly once.  Given an adversary map e from sections to
arbitrary subsets of the ground set, a witness is a complete section E
with e(F) subset-of F or e(F) not-subset-of E for every F inside E.

Subset tests run on bitmasks; the ground set is mapped onto bit
positions in sorted point order.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping, Optional, Union

from .errors import BudgetError, DomainError
from .reports import WitnessReport
from .witness import Exhaustive, Sampled, _budget_cap

__all__ = [
    "BlockPartitionKN",
    "SectionMapTable",
    "enumerate_sections",
    "find_section_witness",
    "verify_tree",
    "section_bound",
    "least_N_below_one",
    "equal_block_partition",
    "witness_via_equal_blocks",
]


@dataclass(frozen=True)
class BlockPartitionKN:
    """Partition of a finite ground set into k blocks of >= N points each."""

    blocks: tuple[frozenset, ...]
    N: int

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(frozenset(b) for b in self.blocks))
        if self.N < 1 or not self.blocks:
            raise DomainError("need N >= 1 and at least one block")
        seen: set = set()
        for blk in self.blocks:
            if len(blk) < self.N:
                raise DomainError(f"block of size {len(blk)} is below the floor {self.N}")
            if blk & seen:
                raise DomainError("blocks must be disjoint")
            seen |= blk
        object.__setattr__(self, "ground", frozenset(seen))

    ground: frozenset = frozenset()  # filled in __post_init__

    @property
    def k(self) -> int:
        return len(self.blocks)

    def section_count(self) -> int:
        out = 1
        for blk in self.blocks:
            out *= len(blk) + 1
        return out

    def complete_section_count(self) -> int:
        out = 1
        for blk in self.blocks:
            out *= len(blk)
        return out


def equal_block_partition(k: int, N: int) -> BlockPartitionKN:
    """The canonical (k, N)-partition of {0,...,kN-1} into consecutive runs."""
    return BlockPartitionKN(
        tuple(frozenset(range(i * N, (i + 1) * N)) for i in range(k)), N
    )


@dataclass(frozen=True)
class SectionMapTable:
    """Total map from the sections of a fixed partition to point sets."""

    entries: tuple[tuple[frozenset, frozenset], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "entries",
            tuple((frozenset(f), frozenset(v)) for f, v in self.entries),
        )

    def as_dict(self) -> dict[frozenset, frozenset]:
        return dict(self.entries)

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "SectionMapTable":
        return cls(tuple(sorted(mapping.items(), key=lambda kv: sorted(kv[0]))))


def enumerate_sections(P: BlockPartitionKN, complete_only: bool = False) -> Iterator[frozenset]:
    """All (complete) sections, in the fixed sorted-element-tuple order."""
    choices = []
    for blk in P.blocks:
        opts = [frozenset({p}) for p in sorted(blk)]
        if not complete_only:
            opts.insert(0, frozenset())
        choices.append(opts)
    sections = [frozenset().union(*combo) for combo in product(*choices)]
    sections.sort(key=lambda s: tuple(sorted(s)))
    yield from sections


def _check_table(e: SectionMapTable, P: BlockPartitionKN) -> dict[frozenset, frozenset]:
    table = e.as_dict()
    missing = [s for s in enumerate_sections(P) if s not in table]
    if missing:
        raise DomainError(f"map is not total: {len(missing)} sections unmapped")
    return table


def _masks(P: BlockPartitionKN):
    order = sorted(P.ground)
    bit = {p: 1 << i for i, p in enumerate(order)}

    def mask(points) -> int:
        out = 0
        for p in points:
            out |= bit[p]
        return out

    return mask


def find_section_witness(e: SectionMapTable, P: BlockPartitionKN) -> Optional[frozenset]:
    """Least complete section all of whose subsets satisfy the condition."""
    table = _check_table(e, P)
    mask = _masks(P)
    emask = {mask(f): mask(v) for f, v in table.items()}
    for E in enumerate_sections(P, complete_only=True):
        em = mask(E)
        ok = True
        # walk the subsets of E via the standard submask loop
        sub = em
        while True:
            v = emask[sub]
            if not (v & ~sub == 0 or v & ~em != 0):
                ok = False
                break
            if sub == 0:
                break
            sub = (sub - 1) & em
        if ok:
            return E
    return None


def _witness_valid(table, E: frozenset) -> bool:
    """Independent set-based re-validation of a section witness."""
    pts = sorted(E)
    for r in range(1 << len(pts)):
        F = frozenset(p for i, p in enumerate(pts) if r >> i & 1)
        v = table[F]
        if not (v <= F or not v <= E):
            return False
    return True


def section_bound(k: int, N: int) -> Fraction:
    """Closed-form bound 2^k (1 - ((N-1)/N)^k) on the bad-section ratio."""
    if k < 1 or N < 1:
        raise DomainError("need k >= 1 and N >= 1")
    return 2**k * (1 - Fraction(N - 1, N) ** k)


def least_N_below_one(k: int, N_cap: int = 10_000) -> int:
    """Least N with section_bound(k, N) < 1, by exact-rational scan."""
    for N in range(1, N_cap + 1):
        if section_bound(k, N) < 1:
            return N
    raise BudgetError(f"no N below {N_cap} brings the bound under 1")


def intermediate_sum_bound(k: int, N: int) -> Fraction:
    """The pre-relaxation sum over section sizes, divided by |CT(P)|.

    sum_{m <= k} C(k, m) N^m (N^(k-m) - (N-1)^(k-m)) / N^k, as stated;
    no independent derivation of the first inequality is attempted.
    """
    from math import comb

    total = sum(comb(k, m) * N**m * (N ** (k - m) - (N - 1) ** (k - m)) for m in range(k + 1))
    return Fraction(total, N**k)


def _random_table(P: BlockPartitionKN, seed: int, sample_index: int) -> SectionMapTable:
    """Uniform value in the power set of the ground, per section."""
    rng = random.Random((seed << 32) ^ (sample_index * 0xC2B2AE35 + 5))
    order = sorted(P.ground)
    entries = []
    for F in enumerate_sections(P):
        v = frozenset(p for p in order if rng.random() < 0.5)
        entries.append((F, v))
    return SectionMapTable(tuple(entries))


def verify_tree(k: int, N: int, strategy: Union[Exhaustive, Sampled]) -> WitnessReport:
    """Campaign against the equal-block (k, N)-partition; aggregate report."""
    start = time.perf_counter()
    P = equal_block_partition(k, N)
    ct = P.complete_section_count()
    bound = section_bound(k, N)

    if isinstance(strategy, Exhaustive):
        cap = strategy.cap if strategy.cap is not None else _budget_cap()
        sections = list(enumerate_sections(P))
        total_maps = (1 << len(P.ground)) ** len(sections)
        if total_maps > cap:
            raise BudgetError(f"{total_maps} maps exceed the exhaustive cap of {cap}")
        ground = sorted(P.ground)

        def stream():
            for combo in product(range(1 << len(ground)), repeat=len(sections)):
                yield SectionMapTable(
                    tuple(
                        (F, frozenset(p for i, p in enumerate(ground) if r >> i & 1))
                        for F, r in zip(sections, combo)
                    )
                )

        tables = stream()
        seed = None
    elif isinstance(strategy, Sampled):
        tables = (
            _random_table(P, strategy.seed, i)
            for i in range(strategy.start, strategy.start + strategy.count)
        )
        seed = strategy.seed
    else:
        raise DomainError(f"unknown strategy {strategy!r}")

    tested = 0
    failures = 0
    worst_bad_sections = -1
    worst_witness: Optional[frozenset] = None
    max_ratio = Fraction(0)
    bound_respected = True
    for e in tables:
        tested += 1
        table = _check_table(e, P)
        witness = find_section_witness(e, P)
        bad_sections = 0
        for E in enumerate_sections(P, complete_only=True):
            if not _witness_valid(table, E):
                bad_sections += 1
        ratio = Fraction(bad_sections, ct)
        max_ratio = max(max_ratio, ratio)
        if bound <= 1 and ratio > bound:
            bound_respected = False
        if witness is None:
            failures += 1
        elif not _witness_valid(table, witness):
            raise RuntimeError("section witness failed independent re-validation")
        if bad_sections > worst_bad_sections:
            worst_bad_sections = bad_sections
            worst_witness = witness

    return WitnessReport(
        params={"k": k, "N": N},
        strategy=strategy.label(),
        seed=seed,
        witness=None,
        bad_pair_count=max(worst_bad_sections, 0),
        candidate_count=ct,
        census={},
        ratio=max_ratio,
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
        details={
            "lemma": "tree",
            "tested": tested,
            "failures": failures,
            "all_witnessed": failures == 0,
            "bound": bound,
            "bound_respected": bound_respected,
            "least_N_below_one": least_N_below_one(k),
            "worst_witness": sorted(worst_witness) if worst_witness else None,
        },
    )


def witness_via_equal_blocks(e: SectionMapTable, P: BlockPartitionKN) -> Optional[frozenset]:
    """Witness for an unequal-block partition via the shrink-and-lift route.

    Shrinks each block to its N least points, restricts e to the shrunken
    partition, searches there, and returns the found complete section,
    which is complete for the original partition as well.
    """
    table = _check_table(e, P)
    Z_blocks = tuple(frozenset(sorted(blk)[: P.N]) for blk in P.blocks)
    Q = BlockPartitionKN(Z_blocks, P.N)
    Z = Q.ground
    shrunk = SectionMapTable.from_mapping(
        {F: table[F] & Z for F in enumerate_sections(Q)}
    )
    return find_section_witness(shrunk, Q)
