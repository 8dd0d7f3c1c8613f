"""Partitions, Maya diagrams, hook lengths, and Schur functions on loop coefficients.

A partition is a plain tuple of weakly decreasing positive ints; a Maya
diagram is the pair (members <= 0, missing positives), both finite.  The
bijection with (index, partition) pairs follows kappa_i = i - index - s_i
where {s_i} enumerates the diagram increasingly.
"""

from __future__ import annotations

from math import prod

from .errors import CellOutOfShape, InsufficientCoefficients, ShapeTooLarge


# -- partitions --------------------------------------------------------------

def normalize_partition(parts) -> tuple[int, ...]:
    parts = tuple(int(x) for x in parts if x)
    assert all(parts[i] >= parts[i + 1] > 0 for i in range(len(parts) - 1)) \
        or len(parts) <= 1, f"not weakly decreasing: {parts}"
    return parts

def weight(kappa) -> int:
    return sum(kappa)


def length(kappa) -> int:
    return len(kappa)


def part(kappa, i: int) -> int:
    """kappa_i with implicit trailing zeros, 1-indexed."""
    return kappa[i - 1] if 1 <= i <= len(kappa) else 0


def leq(lam, kappa) -> bool:
    """Componentwise partial order lambda <= kappa."""
    n = max(len(lam), len(kappa))
    return all(part(lam, i) <= part(kappa, i) for i in range(1, n + 1))


def partitions_of(n: int, max_part: int | None = None):
    """All partitions of n with parts <= max_part, lexicographically decreasing."""
    if n == 0:
        yield ()
        return
    top = n if max_part is None else min(n, max_part)
    for first in range(top, 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def partitions_upto(w: int):
    for n in range(w + 1):
        yield from partitions_of(n)


def partitions_above(kappa, max_weight: int):
    """All lambda >= kappa with |lambda| <= max_weight."""
    return [lam for lam in partitions_upto(max_weight) if leq(kappa, lam)]


# -- Maya diagrams ------------------------------------------------------------

class MayaDiagram:
    """Subset of Z with finite nonpositive part and cofinite positive part."""

    __slots__ = ("low", "gaps")

    def __init__(self, low, gaps):
        self.low = frozenset(int(x) for x in low)
        self.gaps = frozenset(int(x) for x in gaps)
        assert all(x <= 0 for x in self.low)
        assert all(x > 0 for x in self.gaps)

    def __eq__(self, other):
        return isinstance(other, MayaDiagram) and (self.low, self.gaps) == (other.low, other.gaps)

    def __hash__(self):
        return hash((self.low, self.gaps))

    def __contains__(self, n: int):
        return n in self.low if n <= 0 else n not in self.gaps

    def index(self) -> int:
        return len(self.low) - len(self.gaps)

    def members(self, count: int) -> list[int]:
        """The first `count` members in increasing order."""
        out = sorted(self.low)
        n = 1
        while len(out) < count:
            if n not in self.gaps:
                out.append(n)
            n += 1
        return out[:count]

    @classmethod
    def from_members_nonneg(cls, members, bound: int):
        """Diagram containing the given members of [0, bound] plus all > bound."""
        mem = set(members)
        low = {m for m in mem if m <= 0}
        gaps = {n for n in range(1, bound + 1) if n not in mem}
        return cls(low, gaps)

    def __repr__(self):
        return f"MayaDiagram(low={sorted(self.low)}, gaps={sorted(self.gaps)})"


def maya_to_pair(M: MayaDiagram) -> tuple[int, tuple[int, ...]]:
    """(index, partition) of a Maya diagram; inverse of pair_to_maya."""
    idx = M.index()
    count = len(M.low) + max(M.gaps, default=0) + 2
    s = M.members(count)
    kappa = [i - idx - s[i - 1] for i in range(1, count + 1)]
    assert all(k >= 0 for k in kappa) and kappa[-1] == 0, "inconsistent Maya data"
    while kappa and kappa[-1] == 0:
        kappa.pop()
    return idx, tuple(kappa)


def pair_to_maya(index: int, kappa) -> MayaDiagram:
    """Maya diagram with the given index and partition."""
    kappa = tuple(kappa)
    n = len(kappa)
    members = [i - index - part(kappa, i) for i in range(1, n + 2)]
    tail_start = members[-1]  # from here on, every integer is a member
    memset = set(members) | set(range(tail_start, 1))
    low = [m for m in memset if m <= 0]
    gaps = [g for g in range(1, max(tail_start, 1)) if g not in memset]
    return MayaDiagram(low, gaps)


# -- hooks and Schur functions -------------------------------------------------

def hook_length(lam, cell: tuple[int, int]) -> int:
    """Cardinality of the arm-and-leg set of `cell` in the diagram of lam."""
    i, j = cell
    lam = tuple(lam)
    if not (1 <= i <= len(lam) and 1 <= j <= lam[i - 1]):
        raise CellOutOfShape(f"cell {cell} outside shape {lam}")
    count = 0
    for ip in range(1, len(lam) + 1):
        for jp in range(1, lam[ip - 1] + 1):
            if (ip == i and j <= jp <= lam[i - 1]) or (i <= ip and jp == j <= lam[ip - 1]):
                count += 1
    return count


def hook_product(lam) -> int:
    return prod(hook_length(lam, (i, j))
                for i in range(1, len(lam) + 1)
                for j in range(1, lam[i - 1] + 1)) if lam else 1


def schur(lam, h) -> "PadicElement":
    """Jacobi-Trudi determinant det(h_{lam_i - i + j}) over the loop coefficients.

    `h` is a sequence of PadicElements with h[0] = 1; entries below index 0
    are zero.  Homogeneous of degree |lam| when h_i is graded of degree i.
    """
    lam = tuple(lam)
    if not lam:
        return h[0].K.one()
    n = len(lam)
    need = max(lam[i] - i + n - 1 for i in range(n))
    if need >= len(h):
        raise InsufficientCoefficients(f"need h_0..h_{need}, got {len(h) - 1}")
    K = h[0].K
    mat = [[h[lam[i] - (i + 1) + (j + 1)] if 0 <= lam[i] - (i + 1) + (j + 1) < len(h)
            else K.zero() for j in range(n)] for i in range(n)]
    return det_padic(mat, K)


def hook_schur_value(lam, pi, p: int) -> "PadicElement":
    """pi^{|lam|} / (product of hook lengths); valid when l + lam_1 <= p."""
    lam = tuple(lam)
    if not lam:
        return pi.K.one()
    if len(lam) + lam[0] > p:
        raise ShapeTooLarge(f"l(lam) + lam_1 = {len(lam) + lam[0]} > p = {p}")
    hp = hook_product(lam)
    return pi ** weight(lam) / pi.K.from_int(hp)


def det_padic(mat, K) -> "PadicElement":
    """Exact determinant by Gaussian elimination with minimal-valuation pivoting."""
    n = len(mat)
    if n == 0:
        return K.one()
    m = [row[:] for row in mat]
    det = K.one()
    for col in range(n):
        piv, pv = None, None
        for r in range(col, n):
            x = m[r][col]
            if not x.is_zero() and (pv is None or x.valuation() < pv):
                piv, pv = r, x.valuation()
        if piv is None:
            return K.zero_at(min((m[r][col].ap for r in range(col, n)), default=0))
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inv()
        for r in range(col + 1, n):
            if m[r][col].is_zero():
                continue
            factor = m[r][col] * inv
            for c in range(col, n):
                m[r][c] = m[r][c] - factor * m[col][c]
    return det
