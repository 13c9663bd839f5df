"""Arithmetic in Z_v for prime v: primality, unit orders, subgroup orbits,
and quadratic residues."""

from __future__ import annotations

from dataclasses import dataclass

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10^24
# (covers 64-bit inputs unconditionally).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for n >= 0 (valid through 64 bits)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def element_of_order(v: int, q: int) -> int:
    """Return a unit of Z_v^* of multiplicative order exactly q (q prime,
    q | v-1).

    Deterministic: uses the smallest base g >= 2 with g^((v-1)/q) != 1 and
    returns h = g^((v-1)/q) mod v, so repeated calls agree.
    """
    if not is_prime(v):
        raise ValueError(f"v={v} is not prime")
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")
    if (v - 1) % q != 0:
        raise ValueError(f"q={q} does not divide v-1={v - 1}")
    e = (v - 1) // q
    for g in range(2, v):
        h = pow(g, e, v)
        if h != 1:
            return h
    raise AssertionError("unreachable for prime v")


def multiplicative_order(v: int, x: int) -> int:
    """Order of x in Z_v^* by direct iteration (v prime, x a unit)."""
    if x % v == 0:
        raise ValueError("0 is not a unit")
    k = 1
    y = x % v
    while y != 1:
        y = y * x % v
        k += 1
    return k


@dataclass(frozen=True)
class OrbitSystem:
    """Partition of Z_v into orbits of the subgroup generated by h.

    h has prime order q, so the orbit of 0 is {0} and every other orbit
    has exactly q elements.  Orbits are sorted internally and listed in
    increasing order of their minimum element (the representative).
    """

    v: int
    h: int
    q: int
    orbits: tuple[tuple[int, ...], ...]

    @property
    def reps(self) -> tuple[int, ...]:
        return tuple(o[0] for o in self.orbits)

    def orbit_index_of(self, x: int) -> int:
        return self._index[x % self.v]

    def orbit_of(self, x: int) -> tuple[int, ...]:
        return self.orbits[self.orbit_index_of(x)]

    @property
    def _index(self) -> dict[int, int]:
        # lazy cache; frozen dataclass, so stash via object.__setattr__
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {}
            for i, orb in enumerate(self.orbits):
                for x in orb:
                    cached[x] = i
            object.__setattr__(self, "_index_cache", cached)
        return cached


def orbit_system(v: int, h: int) -> OrbitSystem:
    """Build the full orbit partition of Z_v under the subgroup <h>.

    h must have prime order in Z_v^*.
    """
    if not is_prime(v):
        raise ValueError(f"v={v} is not prime")
    h %= v
    q = multiplicative_order(v, h)
    if not is_prime(q):
        raise ValueError(f"order of h={h} is {q}, not prime")
    seen = [False] * v
    orbits: list[tuple[int, ...]] = []
    for j in range(v):
        if seen[j]:
            continue
        orb = []
        x = j
        while not seen[x]:
            seen[x] = True
            orb.append(x)
            x = x * h % v
        orbits.append(tuple(sorted(orb)))
    orbits.sort(key=lambda o: o[0])
    return OrbitSystem(v=v, h=h, q=q, orbits=tuple(orbits))


def quadratic_residues(v: int):
    """The Paley-Todd difference set: nonzero squares mod v, for prime
    v = 3 (mod 4).  Returned as a Block; always of skew type."""
    from . import sds

    if not is_prime(v):
        raise ValueError(f"v={v} is not prime")
    if v % 4 != 3:
        raise ValueError(f"v={v} is not 3 mod 4 (result would not be skew)")
    return sds.Block.from_iterable(v, (x * x % v for x in range(1, v)))
