"""Orbit-union search for difference families.

Blocks are built as unions of orbits of a prime-order subgroup of Z_v^*,
which shrinks the search space from subsets of Z_v to subsets of orbit
representatives.  Two engines are provided: exhaustive backtracking with
count pruning for small orbit counts, and randomized-restart local search
with single-orbit swaps otherwise.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from . import equivalence, sds, zmod
from .zmod import OrbitSystem

# At most this many nontrivial orbits before switching from exhaustive
# backtracking to local search.
EXHAUSTIVE_ORBIT_LIMIT = 24


class InfeasibleError(ValueError):
    """Raised when the orbit method cannot represent the target sizes."""

    def __init__(self, reasons: Sequence[str]):
        self.reasons = tuple(reasons)
        super().__init__("; ".join(reasons))


@dataclass(frozen=True)
class BlockPlan:
    """How one block decomposes into orbits: m nontrivial orbits plus
    optionally the zero orbit."""

    size: int
    orbit_count: int
    include_zero: bool


def feasibility(v: int, sizes: Sequence[int], q: int) -> list[BlockPlan]:
    """Per-block orbit counts for the q-orbit method.

    Each size k must satisfy q | k (plain union) or k = 1 (mod q) (union
    plus the zero orbit; equivalent to q | v-k since q | v-1).  Raises
    InfeasibleError listing every failing block.
    """
    if not zmod.is_prime(q):
        raise ValueError(f"q={q} is not prime")
    if (v - 1) % q != 0:
        raise ValueError(f"q={q} does not divide v-1={v - 1}")
    plans = []
    bad = []
    for i, k in enumerate(sizes):
        if k % q == 0:
            plans.append(BlockPlan(k, k // q, False))
        elif k % q == 1:
            plans.append(BlockPlan(k, (k - 1) // q, True))
        else:
            bad.append(
                f"block {i}: q={q} divides neither k={k} nor v-k={v - k}"
            )
    if bad:
        raise InfeasibleError(bad)
    return plans


@dataclass(frozen=True)
class OrbitSelection:
    """A family described by orbit representatives, one rep set per block."""

    orbsys: OrbitSystem
    reps_per_block: tuple[tuple[int, ...], ...]

    def includes_zero(self, i: int) -> bool:
        return 0 in self.reps_per_block[i]


def expand(sel: OrbitSelection) -> sds.DifferenceFamily:
    """Materialize an orbit selection into a difference family.

    Representatives may be arbitrary orbit members; naming the same orbit
    twice within a block is an error.
    """
    osys = sel.orbsys
    blocks = []
    for reps in sel.reps_per_block:
        seen = set()
        members: list[int] = []
        for r in reps:
            idx = osys.orbit_index_of(r)
            if idx in seen:
                raise ValueError(f"representative {r} duplicates an orbit")
            seen.add(idx)
            members.extend(osys.orbits[idx])
        blocks.append(sds.Block.from_iterable(osys.v, members))
    return sds.DifferenceFamily(osys.v, tuple(blocks))


class DifferenceTable:
    """Per ordered orbit pair (i, j), the vector of counts
    D[i][j][c] = #{(a, b) in O_i x O_j : a - b = c (mod v), a != b}."""

    def __init__(self, orbsys: OrbitSystem):
        self.orbsys = orbsys
        v = orbsys.v
        n = len(orbsys.orbits)
        self.counts = [[None] * n for _ in range(n)]
        for i, oi in enumerate(orbsys.orbits):
            for j, oj in enumerate(orbsys.orbits):
                vec = [0] * v
                for a in oi:
                    for b in oj:
                        if a != b:
                            vec[(a - b) % v] += 1
                self.counts[i][j] = vec


def difference_table(orbsys: OrbitSystem) -> DifferenceTable:
    return DifferenceTable(orbsys)


class _Engine:
    """Shared state for both search engines over one orbit system."""

    def __init__(self, orbsys: OrbitSystem, lam: int, table: DifferenceTable):
        self.orbsys = orbsys
        self.lam = lam
        self.table = table.counts
        self.v = orbsys.v
        # nontrivial orbit indices (index 0 is the zero orbit)
        self.free = list(range(1, len(orbsys.orbits)))

    def apply_orbit(self, counts, chosen, orbit, sign):
        """Add (sign=+1) or remove (sign=-1) one orbit's contribution to a
        block whose other orbits are `chosen` (orbit excluded)."""
        t = self.table
        v = self.v
        row = t[orbit][orbit]
        for c in range(1, v):
            d = row[c]
            for s in chosen:
                d += t[orbit][s][c] + t[s][orbit][c]
            if d:
                counts[c] += sign * d

    def family_counts(self, selection):
        counts = [0] * self.v
        for block in selection:
            acc = []
            for o in block:
                self.apply_orbit(counts, acc, o, +1)
                acc.append(o)
        return counts


def _selection_from_indices(orbsys: OrbitSystem, blocks) -> OrbitSelection:
    reps = tuple(
        tuple(sorted(orbsys.orbits[i][0] for i in block)) for block in blocks
    )
    return OrbitSelection(orbsys, reps)


def _exhaustive(engine: _Engine, plans, budget, want, skew_pairs=None):
    """Backtracking over per-block orbit combinations, pruning whenever any
    running count exceeds lambda.

    If skew_pairs is given, block 0 instead picks one orientation per
    negation-paired orbit couple (the structural skew constraint).
    """
    lam = engine.lam
    v = engine.v
    counts = [0] * v
    found = []
    nodes = 0

    def over():
        return any(counts[c] > lam for c in range(1, v))

    def block_choices(bi):
        if skew_pairs is not None and bi == 0:
            return list(itertools.product(*[(a, b) for a, b in skew_pairs]))
        m = plans[bi].orbit_count
        return list(itertools.combinations(engine.free, m))

    def recurse(bi, partial):
        nonlocal nodes
        if len(found) >= want or nodes >= budget:
            return
        if bi == len(plans):
            if all(counts[c] == lam for c in range(1, v)):
                found.append([list(b) for b in partial])
            return
        base = [0] if plans[bi].include_zero else []
        for combo in block_choices(bi):
            nodes += 1
            if nodes >= budget:
                return
            block = list(base)
            ok = True
            for o in combo:
                engine.apply_orbit(counts, block, o, +1)
                block.append(o)
                if over():
                    ok = False
                    break
            if ok:
                recurse(bi + 1, partial + [block])
            while len(block) > len(base):
                o = block.pop()
                engine.apply_orbit(counts, block, o, -1)
            if len(found) >= want:
                return

    recurse(0, [])
    return found


def _local_search(engine: _Engine, plans, budget, want, rng, skew_pairs=None):
    """Randomized restarts + steepest single-orbit swap descent on the sum
    of squared deviations of the difference histogram from lambda."""
    lam = engine.lam
    v = engine.v
    free = engine.free
    found = []
    seen_keys = set()
    evals = 0

    def random_state():
        blocks = []
        if skew_pairs is not None:
            blocks.append([rng.choice(pair) for pair in skew_pairs])
        start = 1 if skew_pairs is not None else 0
        for plan in plans[start:]:
            base = [0] if plan.include_zero else []
            blocks.append(base + rng.sample(free, plan.orbit_count))
        return blocks

    def cost_of(counts):
        return sum((counts[c] - lam) ** 2 for c in range(1, v))

    def swap_delta(counts, block, o_out, o_in):
        rest = [o for o in block if o != o_out]
        engine.apply_orbit(counts, rest, o_out, -1)
        engine.apply_orbit(counts, rest, o_in, +1)
        c = cost_of(counts)
        engine.apply_orbit(counts, rest, o_in, -1)
        engine.apply_orbit(counts, rest, o_out, +1)
        return c

    while evals < budget and len(found) < want:
        blocks = random_state()
        counts = engine.family_counts(blocks)
        cost = cost_of(counts)
        sideways = 0
        while evals < budget:
            if cost == 0:
                key = tuple(tuple(sorted(b)) for b in blocks)
                if key not in seen_keys:
                    seen_keys.add(key)
                    found.append([list(b) for b in blocks])
                break
            best = None
            moves = []
            for bi, block in enumerate(blocks):
                if skew_pairs is not None and bi == 0:
                    for pi, pair in enumerate(skew_pairs):
                        cur = block[pi]
                        alt = pair[0] if cur == pair[1] else pair[1]
                        moves.append((bi, cur, alt, pi))
                else:
                    in_block = set(block)
                    for o_out in block:
                        if o_out == 0:
                            continue
                        for o_in in free:
                            if o_in in in_block:
                                continue
                            moves.append((bi, o_out, o_in, None))
            rng.shuffle(moves)
            for bi, o_out, o_in, pi in moves:
                evals += 1
                c = swap_delta(counts, blocks[bi], o_out, o_in)
                if best is None or c < best[0]:
                    best = (c, bi, o_out, o_in)
                if evals >= budget:
                    break
            if best is None:
                break
            c, bi, o_out, o_in = best
            if c > cost or (c == cost and sideways >= 10):
                break  # local optimum; restart
            if c == cost:
                sideways += 1
            else:
                sideways = 0
            block = blocks[bi]
            rest = [o for o in block if o != o_out]
            engine.apply_orbit(counts, rest, o_out, -1)
            engine.apply_orbit(counts, rest, o_in, +1)
            block.remove(o_out)
            block.append(o_in)
            cost = c
    return found


def _dedup_and_sort(orbsys, raw_blocks_list):
    out = {}
    for blocks in raw_blocks_list:
        sel = _selection_from_indices(orbsys, blocks)
        form = equivalence.canonical_form(expand(sel))
        out.setdefault(form.blocks, sel)
    return [out[k] for k in sorted(out)]


def _run(orbsys, plans, lam, budget, seed, workers, want, skew_pairs=None):
    engine = _Engine(orbsys, lam, difference_table(orbsys))
    if len(engine.free) <= EXHAUSTIVE_ORBIT_LIMIT and skew_pairs is None:
        raw = _exhaustive(engine, plans, budget, want)
    elif skew_pairs is not None and len(skew_pairs) <= 12:
        raw = _exhaustive(engine, plans, budget, want, skew_pairs=skew_pairs)
    else:
        raw = []
        per_worker = max(1, budget // max(1, workers))
        for w in range(max(1, workers)):
            rng = random.Random(f"{seed}:{w}")
            raw.extend(
                _local_search(engine, plans, per_worker, want, rng, skew_pairs)
            )
    return _dedup_and_sort(orbsys, raw)


def search_sds(
    p: sds.ParameterSet,
    q: int,
    budget: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
    want: int = 1,
) -> list[OrbitSelection]:
    """Find difference families with parameters p as unions of q-orbits.

    Every returned selection expands to a family passing verify_sds at
    p.lam.  Deterministic for fixed (seed, workers); an empty result only
    means the budget was exhausted, not nonexistence.
    """
    plans = feasibility(p.v, p.sizes, q)
    orbsys = zmod.orbit_system(p.v, zmod.element_of_order(p.v, q))
    sels = _run(orbsys, plans, p.lam, budget, seed, workers, want)
    for sel in sels:
        assert verify_selection(sel, p.lam)
    return sels


def negation_pairs(orbsys: OrbitSystem) -> list[tuple[int, int]]:
    """Pair up nontrivial orbits with their negations (q odd, so -1 is not
    in the subgroup and the pairing is perfect)."""
    pairs = []
    done = set()
    for i in range(1, len(orbsys.orbits)):
        if i in done:
            continue
        j = orbsys.orbit_index_of(orbsys.v - orbsys.orbits[i][0])
        if j == i:
            raise ValueError("orbit is self-negating; subgroup order not odd?")
        done.add(i)
        done.add(j)
        pairs.append((i, j))
    return pairs


def search_skew_gs(
    v: int,
    sizes: Sequence[int],
    q: int,
    budget: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
    want: int = 1,
) -> list[OrbitSelection]:
    """Search for 4-block families of order v whose first block is skew.

    sizes = (k0, k1, k2, k3) with k0 = (v-1)/2; the skew constraint is
    structural: block 0 takes exactly one orbit from each negation pair.
    The result feeds directly into the Goethals-Seidel assembly.
    """
    sizes = tuple(sizes)
    if len(sizes) != 4:
        raise ValueError("need exactly 4 block sizes")
    if sizes[0] != (v - 1) // 2 or v % 2 == 0:
        raise ValueError(f"k0={sizes[0]} must equal (v-1)/2")
    lam0 = sum(sizes) - v
    if sds.derive_lambda(v, sizes) != lam0:
        raise ValueError("sizes do not admit an order-v family")
    plans = feasibility(v, sizes, q)
    if plans[0].include_zero:
        raise ValueError("skew first block cannot contain 0")
    orbsys = zmod.orbit_system(v, zmod.element_of_order(v, q))
    pairs = negation_pairs(orbsys)
    if len(pairs) != plans[0].orbit_count:
        raise ValueError("first block must take one orbit from every pair")
    sels = _run(orbsys, plans, lam0, budget, seed, workers, want, skew_pairs=pairs)
    for sel in sels:
        fam = expand(sel)
        assert sds.verify_sds(fam, lam0) and sds.is_skew(fam.blocks[0])
    return sels


def verify_selection(sel: OrbitSelection, lam: int) -> bool:
    return sds.verify_sds(expand(sel), lam).ok
