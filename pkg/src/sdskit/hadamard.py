"""Goethals-Seidel assembly and exact Hadamard verification.

All arithmetic is on packed sign bits (bit set = -1 entry); verification
is popcount-based and certificate-grade, with no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import sds
from .sds import Block, DifferenceFamily


@dataclass(frozen=True)
class SignSequence:
    """A +-1 sequence of length v; bit i set encodes -1 at position i."""

    v: int
    bits: int

    def values(self) -> tuple[int, ...]:
        return tuple(-1 if (self.bits >> i) & 1 else 1 for i in range(self.v))


@dataclass(frozen=True)
class SignMatrix:
    """A square +-1 matrix with packed rows (bit j of row i = entry -1)."""

    n: int
    rows: tuple[int, ...]

    def entry(self, i: int, j: int) -> int:
        return -1 if (self.rows[i] >> j) & 1 else 1

    def to_lines(self) -> list[str]:
        out = []
        for r in self.rows:
            out.append("".join("-" if (r >> j) & 1 else "+" for j in range(self.n)))
        return out


def associated_sequence(b: Block) -> SignSequence:
    """The +-1 sequence with -1 exactly on block members."""
    return SignSequence(b.v, b.mask)


def _rotl(x: int, r: int, v: int) -> int:
    r %= v
    if r == 0:
        return x
    return ((x << r) | (x >> (v - r))) & ((1 << v) - 1)


def _bit_reverse(x: int, v: int) -> int:
    """Reverse the low v bits (bit j -> bit v-1-j)."""
    return int(f"{x:0{v}b}"[::-1], 2) if v else 0


def _circulant(bits: int, v: int) -> list[int]:
    """Rows of the circulant with the given first row: row r entry c is
    bits[(c - r) mod v]."""
    return [_rotl(bits, r, v) for r in range(v)]


def _seq_reverse(bits: int, v: int) -> int:
    """First row of the transpose of circulant(bits): index i -> (v-i) mod v."""
    out = bits & 1
    for i in range(1, v):
        if (bits >> i) & 1:
            out |= 1 << (v - i)
    return out


def goethals_seidel(
    a0: SignSequence, a1: SignSequence, a2: SignSequence, a3: SignSequence
) -> SignMatrix:
    """Assemble the 4v x 4v Goethals-Seidel block matrix from four length-v
    sequences (circulants Z_i, back-diagonal R applied as column reversal)."""
    v = a0.v
    if not (a1.v == a2.v == a3.v == v):
        raise ValueError("all four sequences must share one length")
    neg_mask = (1 << v) - 1

    def circ(a):
        return _circulant(a.bits, v)

    def circ_t(a):
        return _circulant(_seq_reverse(a.bits, v), v)

    def right_r(rows):
        return [_bit_reverse(r, v) for r in rows]

    def neg(rows):
        return [r ^ neg_mask for r in rows]

    z0 = circ(a0)
    z1r = right_r(circ(a1))
    z2r = right_r(circ(a2))
    z3r = right_r(circ(a3))
    z1tr = right_r(circ_t(a1))
    z2tr = right_r(circ_t(a2))
    z3tr = right_r(circ_t(a3))

    grid = [
        [z0, z1r, z2r, z3r],
        [neg(z1r), z0, neg(z3tr), z2tr],
        [neg(z2r), z3tr, z0, neg(z1tr)],
        [neg(z3r), neg(z2tr), z1tr, z0],
    ]
    rows = []
    for bi in range(4):
        for r in range(v):
            row = 0
            for bj in range(4):
                row |= grid[bi][bj][r] << (bj * v)
            rows.append(row)
    return SignMatrix(4 * v, tuple(rows))


def is_hadamard(m: SignMatrix) -> bool:
    """Exact orthogonality check: every distinct row pair has dot product
    zero, computed as n - 2*popcount(xor)."""
    n = m.n
    rows = m.rows
    for i in range(n):
        ri = rows[i]
        for j in range(i + 1, n):
            if (ri ^ rows[j]).bit_count() * 2 != n:
                return False
    return True


def is_skew_hadamard(m: SignMatrix) -> bool:
    """True iff Hadamard with +1 diagonal and antisymmetric off-diagonal
    (M + M^T = 2I)."""
    n = m.n
    nbytes = (n + 7) // 8
    rb = [r.to_bytes(nbytes, "little") for r in m.rows]
    for i in range(n):
        if (rb[i][i >> 3] >> (i & 7)) & 1:
            return False
        for j in range(i + 1, n):
            if ((rb[i][j >> 3] >> (j & 7)) & 1) == ((rb[j][i >> 3] >> (i & 7)) & 1):
                return False
    return is_hadamard(m)


class BuildError(ValueError):
    """A precondition of the skew-Hadamard pipeline failed."""


def build_skew_hadamard(
    v: int, x0: Block, x1: Block, x2: Block, x3: Block
) -> SignMatrix:
    """Assemble and certify a 4v x 4v skew-Hadamard matrix from a 4-block
    family of order v whose first block is skew."""
    if not sds.is_skew(x0):
        raise BuildError("first block is not of skew type")
    fam = DifferenceFamily(v, (x0, x1, x2, x3))
    lam0 = sum(fam.sizes) - v
    if sds.derive_lambda(v, fam.sizes) != lam0:
        raise BuildError(
            f"sizes {fam.sizes} do not give an order-v family over Z_{v}"
        )
    report = sds.verify_sds(fam, lam0)
    if not report.ok:
        raise BuildError(
            f"blocks are not an SDS at lambda={lam0} "
            f"(worst deviation {report.worst_deviation})"
        )
    m = goethals_seidel(*(associated_sequence(x) for x in fam.blocks))
    assert is_skew_hadamard(m)
    return m


def write_matrix(m: SignMatrix, path) -> None:
    """Write the order on the first line, then one +/- row per line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{m.n}\n")
        for line in m.to_lines():
            fh.write(line + "\n")


def read_matrix(path) -> SignMatrix:
    with open(path, encoding="ascii") as fh:
        n = int(fh.readline())
        rows = []
        for _ in range(n):
            line = fh.readline().strip()
            if len(line) != n or set(line) - {"+", "-"}:
                raise ValueError("malformed matrix row")
            row = 0
            for j, ch in enumerate(line):
                if ch == "-":
                    row |= 1 << j
            rows.append(row)
    return SignMatrix(n, tuple(rows))
