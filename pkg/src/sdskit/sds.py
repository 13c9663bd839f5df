"""Supplementary difference sets: blocks, parameter sets, the difference
verifier, parameter enumeration, and block-level predicates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from . import zmod


def _rotl(x: int, r: int, v: int) -> int:
    """Rotate the low v bits of x left by r (bit i -> bit (i+r) mod v)."""
    r %= v
    if r == 0:
        return x
    mask = (1 << v) - 1
    return ((x << r) | (x >> (v - r))) & mask


@dataclass(frozen=True)
class Block:
    """A subset of Z_v stored as a packed bit-vector (bit i set iff i is a
    member)."""

    v: int
    mask: int

    def __post_init__(self):
        if self.v < 1:
            raise ValueError("modulus must be positive")
        if self.mask < 0 or self.mask >> self.v:
            raise ValueError("mask has bits outside 0..v-1")

    @classmethod
    def from_iterable(cls, v: int, members: Iterable[int]) -> "Block":
        mask = 0
        for x in members:
            mask |= 1 << (x % v)
        return cls(v, mask)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.v) if (self.mask >> i) & 1)

    def __contains__(self, x: int) -> bool:
        return (self.mask >> (x % self.v)) & 1 == 1

    def complement(self) -> "Block":
        return Block(self.v, self.mask ^ ((1 << self.v) - 1))

    def translate(self, t: int) -> "Block":
        return Block(self.v, _rotl(self.mask, t, self.v))

    def scale(self, m: int) -> "Block":
        """The block {m*x mod v : x in this block}."""
        return Block.from_iterable(self.v, (m * x for x in self.members()))

    def negate(self) -> "Block":
        return self.scale(self.v - 1)


@dataclass(frozen=True)
class ParameterSet:
    """An SDS parameter set (v; k_1..k_t; lambda) with derived order n.

    Construction checks the counting identity
    lambda * (v-1) = sum k_i (k_i - 1).
    """

    v: int
    sizes: tuple[int, ...]
    lam: int

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        if self.v < 3:
            raise ValueError("v must be >= 3")
        if any(k < 0 or k > self.v for k in self.sizes):
            raise ValueError("block sizes must lie in 0..v")
        if self.lam * (self.v - 1) != sum(k * (k - 1) for k in self.sizes):
            raise ValueError(
                f"lambda={self.lam} violates the counting identity for "
                f"v={self.v}, sizes={self.sizes}"
            )

    @property
    def n(self) -> int:
        """Order: sum of block sizes minus lambda."""
        return sum(self.sizes) - self.lam

    @property
    def in_P(self) -> bool:
        """Membership in the normalized 3-block family with prime
        v = 3 (mod 4) and n = (3v-1)/4."""
        if len(self.sizes) != 3:
            return False
        if self.v % 4 != 3 or not zmod.is_prime(self.v):
            return False
        k1, k2, k3 = self.sizes
        if not (2 * k1 < self.v and k1 >= k2 >= k3 >= 0):
            return False
        return 4 * self.lam == 4 * (k1 + k2 + k3) - (3 * self.v - 1)

    def __str__(self) -> str:
        ks = ",".join(str(k) for k in self.sizes)
        return f"({self.v};{ks};{self.lam})"


@dataclass(frozen=True)
class DifferenceFamily:
    """An ordered list of blocks over a common modulus."""

    v: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        for b in self.blocks:
            if b.v != self.v:
                raise ValueError("all blocks must share the family modulus")

    @classmethod
    def from_sets(cls, v: int, sets: Iterable[Iterable[int]]) -> "DifferenceFamily":
        return cls(v, tuple(Block.from_iterable(v, s) for s in sets))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b.size for b in self.blocks)

    def member_lists(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b.members() for b in self.blocks)


def difference_counts(f: DifferenceFamily) -> list[int]:
    """Count, for each c in 1..v-1, the ordered pairs (a, b) within a block
    with a - b = c (mod v), summed over blocks.

    Returns a list indexed by c; index 0 is unused and left at 0.
    """
    v = f.v
    counts = [0] * v
    for b in f.blocks:
        m = b.mask
        for c in range(1, v):
            counts[c] += (m & _rotl(m, c, v)).bit_count()
    return counts


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    lam: int
    histogram: tuple[int, ...]
    worst_deviation: int

    def __bool__(self) -> bool:
        return self.ok


def verify_sds(f: DifferenceFamily, lam: int) -> VerifyReport:
    """Check that every nonzero residue occurs exactly lam times as a
    within-block difference.  The report carries the full histogram."""
    counts = difference_counts(f)
    worst = max((abs(counts[c] - lam) for c in range(1, f.v)), default=0)
    return VerifyReport(
        ok=worst == 0, lam=lam, histogram=tuple(counts), worst_deviation=worst
    )


def derive_lambda(v: int, sizes: Iterable[int]) -> Optional[int]:
    """lambda from the counting identity, or None when non-integral."""
    total = sum(k * (k - 1) for k in sizes)
    if total % (v - 1):
        return None
    return total // (v - 1)


def enumerate_P(v: int) -> list[ParameterSet]:
    """All normalized 3-block parameter sets for prime v = 3 (mod 4).

    Every decomposition 4v-1 = s1^2 + s2^2 + s3^2 into positive odd
    squares yields sizes k_i = (v - s_i)/2; output is deduplicated and
    sorted descending by (k1, k2, k3).
    """
    if not zmod.is_prime(v):
        raise ValueError(f"v={v} is not prime")
    if v % 4 != 3:
        raise ValueError(f"v={v} is not 3 mod 4")
    target = 4 * v - 1
    found = set()
    s1 = 1
    while s1 * s1 <= target:
        s2 = 1
        while s2 <= s1 and s1 * s1 + s2 * s2 < target:
            rest = target - s1 * s1 - s2 * s2
            s3 = math.isqrt(rest)
            if s3 * s3 == rest and s3 % 2 == 1 and s3 <= s2:
                ks = tuple(sorted(((v - s) // 2 for s in (s1, s2, s3)), reverse=True))
                found.add(ks)
            s2 += 2
        s1 += 2
    out = []
    for ks in sorted(found, reverse=True):
        lam = sum(ks) - (3 * v - 1) // 4
        out.append(ParameterSet(v, ks, lam))
    return out


def is_skew(b: Block) -> bool:
    """True iff 0 is absent and exactly one of {i, v-i} is present for
    every i in 1..v-1."""
    if 0 in b:
        return False
    neg = b.negate()
    return (b.mask | neg.mask) == ((1 << b.v) - 1) - 1 and (b.mask & neg.mask) == 0


def is_symmetric(b: Block) -> bool:
    """True iff the block equals its own negation mod v."""
    return b.mask == b.negate().mask


def complement_block(f: DifferenceFamily, i: int) -> tuple[DifferenceFamily, int]:
    """Replace block i (0-based) by its complement in Z_v.

    Returns the new family together with its lambda, recomputed from the
    counting identity.  The order n is unchanged.
    """
    if not 0 <= i < len(f.blocks):
        raise IndexError(f"block index {i} out of range")
    blocks = list(f.blocks)
    blocks[i] = blocks[i].complement()
    g = DifferenceFamily(f.v, tuple(blocks))
    lam = derive_lambda(f.v, g.sizes)
    if lam is None:
        raise ValueError("complemented family has non-integral lambda")
    return g, lam


def compose_with_paley_todd(f: DifferenceFamily) -> DifferenceFamily:
    """Prepend the Paley-Todd difference set (nonzero squares mod v) as a
    new first block.

    If the input verifies at lambda, the output verifies at
    lambda + (v-3)/4, raising the order by (v+1)/4.
    """
    qr = zmod.quadratic_residues(f.v)
    return DifferenceFamily(f.v, (qr,) + f.blocks)
