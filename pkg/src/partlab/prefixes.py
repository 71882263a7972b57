"""Finite truncations of infinite partitions and the cut/trace calculus.

A PartitionPrefix is the restriction to {0,...,L-1} of an infinite
partition all of whose blocks are open-ended; the representation is the
same canonical rgs as SetPartition plus the semantic convention that
every visible block extends past the window.

Every operation that the window cannot decide raises
InsufficientTruncationError rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, InsufficientTruncationError, NotACutError
from .partitions import SetPartition, relabel_canonical, rgs_is_valid, rgs_leq

__all__ = [
    "PartitionPrefix",
    "TraceResult",
    "mu_sequence",
    "approx_r",
    "trace",
    "depth",
    "cube_member",
    "induced_coarsening_h",
    "project_g",
    "prefix_is_coarsening",
]


@dataclass(frozen=True)
class PartitionPrefix:
    """Length-L window onto an infinite partition with open-ended blocks."""

    rgs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rgs", tuple(self.rgs))
        if not self.rgs:
            raise DomainError("a prefix must have positive length")
        if not rgs_is_valid(self.rgs):
            raise DomainError(f"not a restricted growth string: {self.rgs!r}")

    @property
    def L(self) -> int:
        return len(self.rgs)

    @property
    def num_blocks(self) -> int:
        return max(self.rgs) + 1

    def as_partition(self) -> SetPartition:
        return SetPartition(self.rgs)

    def restrict(self, length: int) -> SetPartition:
        if length > self.L:
            raise InsufficientTruncationError(
                f"window of length {self.L} cannot be restricted to {length}"
            )
        return SetPartition(self.rgs[:length])

    @classmethod
    def discrete(cls, L: int) -> "PartitionPrefix":
        return cls(tuple(range(L)))

    @classmethod
    def from_partition(cls, p: SetPartition) -> "PartitionPrefix":
        return cls(p.rgs)

    def to_text(self) -> str:
        return f"L={self.L};" + ",".join(str(v) for v in self.rgs)

    @classmethod
    def from_text(cls, text: str) -> "PartitionPrefix":
        text = text.strip()
        if not text.startswith("L="):
            raise DomainError(f"prefix text must carry an 'L=<n>;' header: {text!r}")
        head, _, body = text.partition(";")
        length = int(head[2:])
        rgs = tuple(int(tok) for tok in body.split(",")) if body else ()
        if len(rgs) != length:
            raise DomainError(f"header length {length} does not match body of {len(rgs)}")
        return cls(rgs)

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class TraceResult:
    """Restriction of one partition cut at another prefix's block minima."""

    partition: SetPartition
    n: int
    source_length: int

    def __post_init__(self):
        if self.partition.n != self.source_length:
            raise DomainError("trace domain must equal the cut length")


def mu_sequence(B: PartitionPrefix) -> list[int]:
    """Block minima of B visible in the window, in increasing order."""
    mins = [-1] * B.num_blocks
    for i, v in enumerate(B.rgs):
        if mins[v] < 0:
            mins[v] = i
    return mins  # block index order == order of minima, by rgs canonicity


def approx_r(B: PartitionPrefix, n: int) -> SetPartition:
    """The n-th approximation: B restricted to its first n block minima."""
    mu = mu_sequence(B)
    if n < 0:
        raise DomainError("approximation depth must be >= 0")
    if n >= len(mu) + 1:
        raise InsufficientTruncationError(
            f"only {len(mu)} blocks visible; cannot take approximation {n}"
        )
    if n == len(mu):
        # mu_n would be the minimum of the first invisible block
        raise InsufficientTruncationError(
            f"mu_{n} lies beyond the window of length {B.L}"
        )
    return SetPartition(B.rgs[: mu[n]])


def trace(A: PartitionPrefix, B: PartitionPrefix, n: int) -> TraceResult:
    """tr(A, B, n): A cut at B's n-th block minimum.

    Unlike approx_r, the cut point comes from B; the result need not be
    an approximation of A.
    """
    mu = mu_sequence(B)
    if n < 0:
        raise DomainError("trace depth must be >= 0")
    if n >= len(mu):
        raise InsufficientTruncationError(
            f"B shows only {len(mu)} blocks; trace depth {n} is undecidable"
        )
    cut = mu[n]
    if cut > A.L:
        raise InsufficientTruncationError(
            f"trace needs A through {cut} points but window has {A.L}"
        )
    return TraceResult(SetPartition(A.rgs[:cut]), n, cut)


def depth(B: PartitionPrefix, s: SetPartition) -> int:
    """The unique m with dom(s) = {0,...,mu_m(B)-1}."""
    if s.n == 0:
        return 0
    mu = mu_sequence(B)
    if s.n >= B.L:
        # mu_{len(mu)} might equal s.n in some extension of the window
        raise InsufficientTruncationError(
            f"cannot decide whether {s.n} is a cut of a window of length {B.L}"
        )
    try:
        return mu.index(s.n)
    except ValueError:
        raise NotACutError(f"{s.n} is not a block minimum of {B}") from None


def cube_member(s: SetPartition, A: PartitionPrefix, B: PartitionPrefix) -> bool:
    """Window approximation of B in [s, A]: s end-extends to B and B <= A.

    End-extension requires s to be a whole approximation of B (its domain
    size a block-minimum cut); the coarsening clause is checked on the
    common window of A and B.
    """
    if s.n > B.L:
        raise InsufficientTruncationError(
            f"cannot check end-extension of {s.n} points in a window of {B.L}"
        )
    if s.n > 0:
        if B.rgs[: s.n] != s.rgs:
            return False
        try:
            depth(B, s)
        except NotACutError:
            return False
    overlap = min(A.L, B.L)
    return rgs_leq(B.rgs[:overlap], A.rgs[:overlap])


def induced_coarsening_h(t: SetPartition, B: PartitionPrefix, mprime: int) -> PartitionPrefix:
    """Coarsening of B induced by t on its first mprime blocks.

    Blocks i, j < mprime merge exactly when i t j; blocks >= mprime are
    left intact.  The result coarsens B.
    """
    if t.n != mprime:
        raise DomainError(f"t must live on {mprime} points, has {t.n}")
    if B.num_blocks < mprime:
        raise InsufficientTruncationError(
            f"B shows {B.num_blocks} blocks, need at least {mprime}"
        )
    trgs = t.rgs
    labels = []
    for v in B.rgs:
        if v < mprime:
            labels.append(("t", trgs[v]))
        else:
            labels.append(("b", v))
    return PartitionPrefix(relabel_canonical(labels))


def project_g(C: PartitionPrefix, B: PartitionPrefix, mprime: int) -> SetPartition:
    """Partition of B's first mprime block minima induced by C.

    Case split mirrors the construction: if C does not coarsen B's
    approximation on that window, fall back to the discrete partition.
    """
    mu = mu_sequence(B)
    if mprime > len(mu):
        raise InsufficientTruncationError(
            f"B shows {len(mu)} blocks, need at least {mprime}"
        )
    if mprime == len(mu):
        raise InsufficientTruncationError(
            f"mu_{mprime} of B lies beyond its window of length {B.L}"
        )
    cut = mu[mprime]
    if cut > C.L:
        raise InsufficientTruncationError(
            f"C window of length {C.L} does not reach mu_{mprime}(B) = {cut}"
        )
    c_cut = C.rgs[:cut]
    if not rgs_leq(c_cut, B.rgs[:cut]):
        return SetPartition.discrete(mprime)
    return SetPartition(relabel_canonical(c_cut[mu[i]] for i in range(mprime)))


def prefix_is_coarsening(A: PartitionPrefix, B: PartitionPrefix) -> bool:
    """A <= B on the common window of the two prefixes."""
    overlap = min(A.L, B.L)
    return rgs_leq(A.rgs[:overlap], B.rgs[:overlap])
