"""Witness search engines for the partition combinatorial lemmas.

The adversary is a total map e over the partition space of a fixed
domain; a witness is a candidate s all of whose coarsenings t satisfy
e(t) <= t or e(t) !<= s.  The engines do exhaustive, sampled, and greedy
adversarial campaigns, census bad pairs exactly, and run single fusion
steps of the canonization construction.

Every returned witness is re-validated by an independent brute-force
scan that shares no enumeration path with the search.
"""

from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Optional, Union

from .errors import BudgetError, DomainError, ThresholdError
from .partitions import (
    SetPartition,
    coarsenings_of,
    count_partitions,
    iter_equipartition_rgs,
    iter_rgs,
    rgs_leq,
)
from .prefixes import (
    PartitionPrefix,
    approx_r,
    induced_coarsening_h,
    mu_sequence,
    prefix_is_coarsening,
    project_g,
    trace,
)
from .reports import WitnessReport

__all__ = [
    "EMapTable",
    "Exhaustive",
    "Sampled",
    "Adversarial",
    "bad_pairs",
    "find_witness",
    "verify_comb",
    "min_threshold_comb",
    "fusion_step",
    "fusion_conditions_hold",
    "witness_is_valid",
    "partition_space",
]

_SPACE_CAP = 500_000


def _budget_cap() -> int:
    return int(os.environ.get("LAB_BUDGET_CAP", "1000000"))


@lru_cache(maxsize=32)
def partition_space(n: int) -> tuple[tuple[int, ...], ...]:
    """All rgs of Q(n) in lexicographic order, materialized once."""
    if count_partitions(n) > _SPACE_CAP:
        raise BudgetError(f"partition space of {n} points is too large to materialize")
    return tuple(iter_rgs(n))


@lru_cache(maxsize=32)
def _space_index(n: int) -> dict[tuple[int, ...], int]:
    return {rgs: i for i, rgs in enumerate(partition_space(n))}


@dataclass(frozen=True)
class EMapTable:
    """Total map from Q(n) to Q(n), stored as value indices over lex order."""

    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        size = len(partition_space(self.n))
        if len(self.values) != size:
            raise DomainError(f"map must be total over {size} partitions")
        if any(not 0 <= v < size for v in self.values):
            raise DomainError("value index out of range")

    def apply_rgs(self, rgs: tuple[int, ...]) -> tuple[int, ...]:
        return partition_space(self.n)[self.values[_space_index(self.n)[rgs]]]

    def apply(self, t: SetPartition) -> SetPartition:
        return SetPartition(self.apply_rgs(t.rgs))

    @classmethod
    def identity(cls, n: int) -> "EMapTable":
        return cls(n, tuple(range(len(partition_space(n)))))

    @classmethod
    def constant(cls, n: int, value: SetPartition) -> "EMapTable":
        idx = _space_index(n)[value.rgs]
        return cls(n, (idx,) * len(partition_space(n)))

    @classmethod
    def from_function(cls, n: int, fn) -> "EMapTable":
        space = partition_space(n)
        index = _space_index(n)
        return cls(n, tuple(index[fn(SetPartition(rgs)).rgs] for rgs in space))

    @classmethod
    def from_assignments(
        cls,
        n: int,
        assignments: Mapping[tuple[int, ...], tuple[int, ...]],
        default: str = "identity",
    ) -> "EMapTable":
        """Build a total table from partial rgs assignments.

        Unassigned arguments default to identity; they are irrelevant to
        the lemma condition when the assigned set covers every coarsening
        of a candidate.
        """
        if default != "identity":
            raise DomainError(f"unknown default policy {default!r}")
        index = _space_index(n)
        values = list(range(len(partition_space(n))))
        for arg, val in assignments.items():
            values[index[arg]] = index[val]
        return cls(n, tuple(values))


# -- strategies ---------------------------------------------------------------


@dataclass(frozen=True)
class Exhaustive:
    cap: Optional[int] = None

    def label(self) -> str:
        return "exhaustive"


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int = 0
    start: int = 0  # first sample index, so campaigns can be split into chunks

    def label(self) -> str:
        if self.start:
            return f"sampled({self.count}, seed={self.seed}, start={self.start})"
        return f"sampled({self.count}, seed={self.seed})"


@dataclass(frozen=True)
class Adversarial:
    budget: int
    seed: int = 0

    def label(self) -> str:
        return f"adversarial({self.budget}, seed={self.seed})"


Strategy = Union[Exhaustive, Sampled, Adversarial]


# -- shared per-configuration context ----------------------------------------


@dataclass(frozen=True)
class _CombContext:
    k: int
    m: int
    N: int
    space: tuple[tuple[int, ...], ...]
    index: dict[tuple[int, ...], int]
    candidates: tuple[tuple[int, ...], ...]
    coars: tuple[tuple[int, ...], ...]  # per candidate: indices of its coarsenings
    relevant: tuple[int, ...]  # indices of t coarsening at least one candidate


@lru_cache(maxsize=16)
def _comb_context(k: int, m: int, N: int) -> _CombContext:
    if not 0 <= m <= k or k < 1 or N < 1:
        raise DomainError(f"need 1 <= k, 1 <= N, 0 <= m <= k; got k={k}, m={m}, N={N}")
    n = k * N
    space = partition_space(n)
    index = _space_index(n)
    candidates = tuple(iter_equipartition_rgs(k, N, m))
    coars = []
    relevant: set[int] = set()
    for s in candidates:
        idxs = tuple(index[t.rgs] for t in coarsenings_of(SetPartition(s)))
        coars.append(idxs)
        relevant.update(idxs)
    return _CombContext(k, m, N, space, index, candidates, tuple(coars), tuple(sorted(relevant)))


def _scan_witness(ctx: _CombContext, values: tuple[int, ...]) -> Optional[tuple[int, ...]]:
    """Lexicographically least candidate passing the lemma condition, or None."""
    space = ctx.space
    for s, coar in zip(ctx.candidates, ctx.coars):
        ok = True
        for ti in coar:
            v = space[values[ti]]
            if rgs_leq(v, space[ti]):
                continue
            if rgs_leq(v, s):
                ok = False
                break
        if ok:
            return s
    return None


def _census(ctx: _CombContext, values: tuple[int, ...]) -> tuple[int, dict[tuple[int, ...], int]]:
    """Exact bad-pair count and per-candidate breakdown."""
    space = ctx.space
    total = 0
    per: dict[tuple[int, ...], int] = {}
    for s, coar in zip(ctx.candidates, ctx.coars):
        bad = 0
        for ti in coar:
            v = space[values[ti]]
            if rgs_leq(v, s) and not rgs_leq(v, space[ti]):
                bad += 1
        if bad:
            per[s] = bad
            total += bad
    return total, per


def _blocking_shape(ctx: _CombContext, values: tuple[int, ...]) -> frozenset:
    """The entries of e that invalidate candidates: the failing map's shape."""
    space = ctx.space
    shape = set()
    for s, coar in zip(ctx.candidates, ctx.coars):
        for ti in coar:
            v = space[values[ti]]
            if rgs_leq(v, s) and not rgs_leq(v, space[ti]):
                shape.add((space[ti], v))
    return frozenset(shape)


def witness_is_valid(e: EMapTable, s: SetPartition, m: int) -> bool:
    """Independent re-validation of a witness by scanning all of Q(n).

    Deliberately avoids the candidate/coarsening tables used by the
    search: every t in Q(n) is tested from scratch.
    """
    rgs = s.rgs
    if any(rgs[i] != i for i in range(min(m, len(rgs)))):
        return False
    for t in iter_rgs(e.n):
        if not rgs_leq(t, rgs):
            continue
        v = e.apply_rgs(t)
        if not rgs_leq(v, t) and rgs_leq(v, rgs):
            return False
    return True


# -- public operations --------------------------------------------------------


def find_witness(e: EMapTable, m: int, mprime: int) -> Optional[SetPartition]:
    """Least s separating the first m points with the lemma property, or None."""
    if e.n != mprime:
        raise DomainError(f"map is over {e.n} points, expected {mprime}")
    if not 0 <= m <= mprime:
        raise DomainError(f"need 0 <= m <= {mprime}")
    space = partition_space(mprime)
    for s in iter_rgs(mprime, m):
        ok = True
        for t in coarsenings_of(SetPartition(s)):
            v = space[e.values[_space_index(mprime)[t.rgs]]]
            if rgs_leq(v, t.rgs) or not rgs_leq(v, s):
                continue
            ok = False
            break
        if ok:
            return SetPartition(s)
    return None


def bad_pairs(e: EMapTable, k: int, m: int, N: int) -> WitnessReport:
    """Exact census of the bad pairs (s, t) of a single adversary map."""
    start = time.perf_counter()
    ctx = _comb_context(k, m, N)
    if e.n != k * N:
        raise DomainError(f"map is over {e.n} points, expected {k * N}")
    total, per = _census(ctx, e.values)
    witness = _scan_witness(ctx, e.values)
    pair_count = len(ctx.candidates) * count_partitions(k)
    return WitnessReport(
        params={"k": k, "m": m, "N": N},
        strategy="single-map census",
        seed=None,
        witness=SetPartition(witness) if witness is not None else None,
        bad_pair_count=total,
        candidate_count=len(ctx.candidates),
        census={",".join(map(str, s)): b for s, b in per.items()},
        ratio=Fraction(total, pair_count),
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
        details={"coarsening_pair_count": pair_count},
    )


def _sample_values(ctx: _CombContext, seed: int, sample_index: int) -> tuple[int, ...]:
    """Uniform independent values on coarsening-relevant arguments.

    Irrelevant arguments keep the identity; they cannot occur in the
    lemma condition for any candidate.  Each sample owns an independent
    PRNG derived from (seed, index).
    """
    rng = random.Random((seed << 32) ^ (sample_index * 0x9E3779B9 + 1))
    size = len(ctx.space)
    values = list(range(size))
    for ti in ctx.relevant:
        values[ti] = rng.randrange(size)
    return tuple(values)


@lru_cache(maxsize=16)
def _greedy_scores(k: int, m: int, N: int) -> dict[int, list[tuple[int, int]]]:
    """For each relevant t: value indices with maximal invalidation score."""
    ctx = _comb_context(k, m, N)
    space = ctx.space
    # candidate bitmask of {s : t <= s} per relevant t
    above: dict[int, int] = {ti: 0 for ti in ctx.relevant}
    for ci, coar in enumerate(ctx.coars):
        for ti in coar:
            above[ti] |= 1 << ci
    best: dict[int, list[tuple[int, int]]] = {}
    for ti in ctx.relevant:
        t = space[ti]
        scored = []
        top = 0
        for vi, v in enumerate(space):
            if rgs_leq(v, t):
                continue  # e(t) <= t can never invalidate
            mask = 0
            for ci, s in enumerate(ctx.candidates):
                if above[ti] >> ci & 1 and rgs_leq(v, s):
                    mask |= 1 << ci
            score = mask.bit_count()
            if score > top:
                top = score
                scored = [(score, vi)]
            elif score == top and score > 0:
                scored.append((score, vi))
        best[ti] = scored  # empty when t invalidates nothing
    return best


def _adversarial_values(ctx: _CombContext, seed: int, map_index: int) -> tuple[int, ...]:
    """Greedy adversary: per argument, a maximally invalidating value.

    Map 0 is the pure greedy with lexicographic-least tie-break; later
    maps break argmax ties with a seeded PRNG so the budget probes
    different corners of the tie set.  Results are a lower bound on
    adversarial difficulty.
    """
    rng = random.Random((seed << 32) ^ (map_index * 0x85EBCA6B + 3))
    best = _greedy_scores(ctx.k, ctx.m, ctx.N)
    values = list(range(len(ctx.space)))
    for ti in ctx.relevant:
        choices = best[ti]
        if choices:
            if map_index == 0:
                values[ti] = min(vi for _, vi in choices)
            else:
                values[ti] = rng.choice(choices)[1]
    return tuple(values)


def verify_comb(k: int, m: int, N: int, strategy: Strategy) -> WitnessReport:
    """Test the lemma against a family of adversary maps; aggregate a report.

    Exit contract: details["all_witnessed"] is True iff every tested map
    admitted a witness; counterexample shapes (the invalidating entries)
    are collected otherwise.  Every witness is re-validated by the
    independent scan, and the pigeonhole certificate (bad pairs below
    candidate count implies a witness) is checked for every map.
    """
    start = time.perf_counter()
    ctx = _comb_context(k, m, N)
    n_cands = len(ctx.candidates)

    if isinstance(strategy, Exhaustive):
        cap = strategy.cap if strategy.cap is not None else _budget_cap()
        total_maps = len(ctx.space) ** len(ctx.relevant)
        if total_maps > cap:
            raise BudgetError(
                f"{total_maps} adversary maps exceed the exhaustive cap of {cap}"
            )
        assignments: Iterable[tuple[int, ...]] = product(
            range(len(ctx.space)), repeat=len(ctx.relevant)
        )

        def value_stream():
            base = list(range(len(ctx.space)))
            for combo in assignments:
                values = base[:]
                for ti, vi in zip(ctx.relevant, combo):
                    values[ti] = vi
                yield tuple(values)

        stream = value_stream()
        seed = None
    elif isinstance(strategy, Sampled):
        stream = (
            _sample_values(ctx, strategy.seed, i)
            for i in range(strategy.start, strategy.start + strategy.count)
        )
        seed = strategy.seed
    elif isinstance(strategy, Adversarial):
        stream = (_adversarial_values(ctx, strategy.seed, i) for i in range(strategy.budget))
        seed = strategy.seed
    else:
        raise DomainError(f"unknown strategy {strategy!r}")

    tested = 0
    failures = 0
    shapes: list[frozenset] = []
    worst_bad = -1
    worst_values: Optional[tuple[int, ...]] = None
    worst_witness: Optional[tuple[int, ...]] = None
    pigeonhole_ok = True
    max_ratio = Fraction(0)
    for values in stream:
        tested += 1
        witness = _scan_witness(ctx, values)
        bad, _ = _census(ctx, values)
        max_ratio = max(max_ratio, Fraction(bad, n_cands))
        if witness is None:
            failures += 1
            shape = _blocking_shape(ctx, values)
            if shape not in shapes:
                shapes.append(shape)
            if bad < n_cands:
                pigeonhole_ok = False  # would contradict the counting chain
        else:
            e = EMapTable(ctx.k * ctx.N, values)
            if not witness_is_valid(e, SetPartition(witness), m):
                raise RuntimeError("witness failed independent re-validation")
        if bad > worst_bad:
            worst_bad = bad
            worst_values = values
            worst_witness = witness

    _, worst_census = _census(ctx, worst_values) if worst_values is not None else (0, {})
    return WitnessReport(
        params={"k": k, "m": m, "N": N},
        strategy=strategy.label(),
        seed=seed,
        witness=SetPartition(worst_witness) if worst_witness is not None else None,
        bad_pair_count=max(worst_bad, 0),
        candidate_count=n_cands,
        census={",".join(map(str, s)): b for s, b in worst_census.items()},
        ratio=max_ratio,
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
        details={
            "tested": tested,
            "failures": failures,
            "all_witnessed": failures == 0,
            "pigeonhole_ok": pigeonhole_ok,
            "counterexample_shapes": [sorted(shape) for shape in shapes],
        },
    )


def min_threshold_comb(
    k: int, m: int, search: Sampled, N_max: int
) -> tuple[Optional[int], list[WitnessReport]]:
    """Least N <= N_max at which the sampled campaign is clean.

    EMPIRICAL: the returned value bounds, but does not certify, the
    lemma's threshold; it depends on the tested maps only.
    """
    if not 0 <= m <= k:
        raise DomainError(f"need 0 <= m <= k, got m={m}, k={k}")
    reports = []
    for N in range(1, N_max + 1):
        rep = verify_comb(k, m, N, search)
        rep.details["empirical"] = True
        reports.append(rep)
        if rep.details["all_witnessed"] and rep.ratio < 1:
            return N, reports
    return None, reports


# -- fusion -------------------------------------------------------------------


FTable = Mapping[Union[str, PartitionPrefix], PartitionPrefix]


def _normalize_ftable(f_table: FTable) -> dict[str, PartitionPrefix]:
    out = {}
    for key, val in f_table.items():
        text = key.to_text() if isinstance(key, PartitionPrefix) else str(key)
        out[text] = val
    return out


def fusion_step(
    B: PartitionPrefix,
    f_table: FTable,
    n0: int,
    ell: int,
    mprime: int,
) -> PartitionPrefix:
    """One inductive step of the canonization construction.

    Builds the induced adversary e = project o f o coarsen over Q(mprime),
    finds a witness separating the first n0+ell+1 points, and returns the
    coarsening of B the witness induces.  The step conditions (approximation
    kept exactly; trace disjunction over the table domain) are verified
    before returning.  An unmapped table argument is a hard error.
    """
    m = n0 + ell + 1
    if m > mprime:
        raise DomainError(f"need n0+ell+1 <= mprime, got {m} > {mprime}")
    table = _normalize_ftable(f_table)
    space = partition_space(mprime)
    index = _space_index(mprime)
    values = []
    for t in space:
        A = induced_coarsening_h(SetPartition(t), B, mprime)
        C = table.get(A.to_text())
        if C is None:
            raise DomainError(f"f_table is not defined on {A.to_text()}")
        values.append(index[project_g(C, B, mprime).rgs])
    e = EMapTable(mprime, tuple(values))
    witness = find_witness(e, m, mprime)
    if witness is None:
        # independent brute-force recheck before reporting a threshold failure
        if _brute_force_has_witness(e, m, mprime):
            raise RuntimeError("search and brute-force recheck disagree on witness absence")
        raise ThresholdError(f"no witness in Q^{m}({mprime}); enlarge mprime")
    if not witness_is_valid(e, witness, m):
        raise RuntimeError("witness failed independent re-validation")
    B_new = induced_coarsening_h(witness, B, mprime)
    if approx_r(B_new, n0 + ell) != approx_r(B, n0 + ell):
        raise RuntimeError("fusion step did not preserve the required approximation")
    return B_new


def _brute_force_has_witness(e: EMapTable, m: int, mprime: int) -> bool:
    """From-scratch scan over all (s, t) pairs; shares no path with find_witness."""
    for s in iter_rgs(mprime, m):
        if all(
            rgs_leq(e.apply_rgs(t), t) or not rgs_leq(e.apply_rgs(t), s)
            for t in iter_rgs(mprime)
            if rgs_leq(t, s)
        ):
            return True
    return False


def fusion_conditions_hold(
    B_old: PartitionPrefix,
    B_new: PartitionPrefix,
    f_table: FTable,
    n0: int,
    ell: int,
) -> tuple[bool, bool]:
    """Check the two step conditions on a fusion output.

    Returns (approximation kept, trace disjunction over the table domain).
    The second condition quantifies over table arguments that coarsen the
    new prefix and have a block-minimum cut at depth n0+ell+1.
    """
    m = n0 + ell + 1
    cond1 = approx_r(B_new, n0 + ell) == approx_r(B_old, n0 + ell)
    cond2 = True
    r_m = approx_r(B_new, m)
    for key, fA in _normalize_ftable(f_table).items():
        A = PartitionPrefix.from_text(key)
        if not prefix_is_coarsening(A, B_new):
            continue
        mu_new = mu_sequence(B_new)
        if m >= len(mu_new) or mu_new[m] not in mu_sequence(A):
            continue
        tr_f = trace(fA, B_new, m).partition
        tr_a = trace(A, B_new, m).partition
        if rgs_leq(tr_f.rgs, tr_a.rgs) or not rgs_leq(tr_f.rgs, r_m.rgs):
            continue
        cond2 = False
    return cond1, cond2
