"""Points of the Sato Grassmannian materialized through standard bases.

A point is stored as its monic echelon basis up to a stated degree cap,
together with the Maya diagram / index / partition read off the basis
degrees (all membership beyond the cap is implied).  Predicates report the
cap they were decided at; strictness can be upgraded from "cap-checked" to
"theorem-backed" by attaching an external certificate (gap-sequence
equality on curve-derived points).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .combinat import MayaDiagram, leq, maya_to_pair, part
from .errors import (CapTooSmall, DegenerateSpan, InconclusiveAtPrecision,
                     PrecisionExhausted, UnboundedAtCap)
from .padic import INF, PadicElement, PadicField
from .series import NEG_INF, LaurentSeries, residue_series_field


class GrassPoint:
    """Grassmannian point: standard basis to a cap plus derived invariants."""

    __slots__ = ("field", "basis", "cap", "maya", "index", "partition",
                 "integrality", "reduced", "strict_evidence")

    def __init__(self, field: PadicField, basis: list[LaurentSeries], cap: int,
                 integrality: str = "unclassified", reduced: "GrassPoint | None" = None,
                 strict_evidence: dict | None = None):
        self.field = field
        self.basis = basis
        self.cap = cap
        degrees = [v.deg() for v in basis]
        assert degrees == sorted(degrees), "basis must be sorted by degree"
        low = [d for d in degrees if d <= 0]
        gaps = [n for n in range(1, cap + 1) if n not in set(degrees)]
        self.maya = MayaDiagram(low, gaps)
        self.index, self.partition = maya_to_pair(self.maya)
        self.integrality = integrality
        self.reduced = reduced
        self.strict_evidence = strict_evidence

    def degrees(self) -> list[int]:
        return [v.deg() for v in self.basis]

    def element_of_degree(self, d: int) -> LaurentSeries | None:
        for v in self.basis:
            if v.deg() == d:
                return v
        return None

    def norm_vals(self):
        return [v.norm_val() for v in self.basis]

    def __repr__(self):
        return (f"GrassPoint(index={self.index}, partition={self.partition}, "
                f"cap={self.cap}, {len(self.basis)} basis elements, "
                f"{self.integrality})")


def standard_basis(vectors: list[LaurentSeries], cap: int) -> GrassPoint:
    """Row-reduce a spanning set into the monic echelon standard basis.

    Tie-break: among equal degrees the earlier-inserted vector stays as the
    pivot, so output is deterministic.
    """
    if not vectors:
        raise DegenerateSpan("empty spanning set")
    field = vectors[0].field
    slots: dict[int, LaurentSeries] = {}
    order: list[int] = []
    for v in vectors:
        cur = v
        while True:
            if cur.is_zero():
                break
            d = cur.deg()
            if d > cap:
                raise CapTooSmall(f"vector of degree {d} exceeds cap {cap}")
            if d not in slots:
                try:
                    slots[d] = cur.monic_normalize()
                except PrecisionExhausted as exc:
                    raise DegenerateSpan(f"pivot at degree {d} has no usable "
                                         f"precision") from exc
                order.append(d)
                break
            cur = cur.sub(slots[d].scale(cur.coeff(d)))
    degrees = sorted(slots)
    basis = [slots[d] for d in degrees]
    # back-elimination: later elements vanish at earlier pivots
    for i in range(len(basis)):
        for j in range(i - 1, -1, -1):
            c = basis[i].coeff(degrees[j])
            if not c.is_zero():
                basis[i] = basis[i].sub(basis[j].scale(c))
    return GrassPoint(field, basis, cap)


def plucker(V: GrassPoint, lam) -> PadicElement:
    """Stabilized minor det(v_{i, j - lam_j - i(V)}) of the standard basis."""
    from .combinat import det_padic

    lam = tuple(lam)
    K = V.field
    idx = V.index
    # minimal size: past the irregular zone and the support of lam
    n0 = max(len(lam) + 1, len(V.partition) + 1, 2)
    while n0 <= len(V.basis) and V.basis[n0 - 1].deg() != n0 - idx:
        n0 += 1  # advance until s_n = n - i(V) (regular zone)
    if n0 > len(V.basis):
        raise CapTooSmall("basis does not reach the regular zone")

    def minor(n):
        if n > len(V.basis):
            raise CapTooSmall(f"need {n} basis elements, have {len(V.basis)}")
        rows = []
        for i in range(1, n + 1):
            v = V.basis[i - 1]
            row = []
            for j in range(1, n + 1):
                e = j - part(lam, j) - idx
                if e < v.floor:
                    raise CapTooSmall("matrix entry below guarantee floor")
                row.append(v.coeff(e))
            rows.append(row)
        return det_padic(rows, K)

    val = minor(n0)
    for n in range(n0 + 1, min(len(V.basis), n0 + 3) + 1):
        nxt = minor(n)
        if nxt.eq_at_precision(val):
            return val
        val = nxt
    return val


def _scale_to_integral(v: LaurentSeries) -> LaurentSeries:
    nv = v.norm_val()
    if nv >= 0:
        return v
    k = -math.floor(nv)
    return v.scale(v.field.from_int(v.field.p ** k))


def _normalize_content(v: LaurentSeries) -> LaurentSeries:
    """Scale by a power of p so the sup-norm valuation is exactly 0."""
    nv = v.norm_val()
    if nv == 0:
        return v
    k = math.floor(nv) if nv > 0 else math.ceil(nv)
    if nv > 0:
        return v.scale(v.field.from_rational(Fraction(1, v.field.p ** k)))
    return v.scale(v.field.from_int(v.field.p ** (-k)))


def _left_kernel_vector(rows: list[LaurentSeries]):
    """One nonzero combination of rows vanishing identically, or None.

    Rows live over an N=1 residue field; returns the coefficient dict
    {row_index: residue-field PadicElement}.
    """
    if not rows:
        return None
    Kbar = rows[0].field
    work = [dict(v.coeffs) for v in rows]
    combos = [{i: Kbar.one()} for i in range(len(rows))]
    pivots: dict[int, int] = {}
    for i in range(len(work)):
        r, combo = work[i], combos[i]
        while r:
            e = max(r)
            if r[e].is_zero():
                del r[e]
                continue
            if e not in pivots:
                pivots[e] = i
                break
            j = pivots[e]
            factor = r[e] / work[j][e]
            for ee, c in work[j].items():
                r[ee] = r.get(ee, Kbar.zero()) - factor * c
                if r[ee].is_zero():
                    del r[ee]
            for ii, c in combos[j].items():
                combo[ii] = combo.get(ii, Kbar.zero()) - factor * c
        if not r:
            return {ii: c for ii, c in combo.items() if not c.is_zero()}
    return None


def _saturated_integral_basis(basis: list[LaurentSeries]) -> list[LaurentSeries]:
    """O_K-basis (at the window) of the integral part of the span.

    Iterated residue-kernel saturation: scale every generator to sup-norm 1,
    then as long as the reductions are F-linearly dependent, replace a row by
    (dependent combination)/p.  On exit the reductions are independent, which
    forces saturation inside the K-span.
    """
    field = basis[0].field
    rows = [_normalize_content(v) for v in basis if not v.is_zero()]
    for _ in range(len(basis) * field.N + 8):
        reds = [v.reduce_mod_p() for v in rows]
        ker = _left_kernel_vector(reds)
        if ker is None:
            return rows
        comb = None
        for i, c in ker.items():
            lifted = rows[i].scale(field.from_residue(c.residue()))
            comb = lifted if comb is None else comb.add(lifted)
        target = max(ker)
        comb = comb.scale(field.from_rational(Fraction(1, field.p)))
        if comb.is_zero():
            rows.pop(target)
        else:
            rows[target] = _normalize_content(comb)
    return rows


def classify_integrality(V: GrassPoint, strict_evidence: dict | None = None):
    """Classification per the bounded/integral/strict trichotomy, plus reduction.

    Returns (classification, V_red).  Strictness is decided at the cap via
    Maya-diagram equality with the reduction; it is reported theorem-backed
    only when `strict_evidence` (e.g. gap-sequence equality of the curve and
    its special fiber) is supplied by the caller.
    """
    norm_vals = V.norm_vals()
    if any(nv == -INF for nv in norm_vals):
        raise UnboundedAtCap("basis norm unbounded at cap")
    sat = _saturated_integral_basis(V.basis)
    red_vectors = []
    for v in sat:
        r = v.reduce_mod_p()
        if not r.is_zero():
            red_vectors.append(r)
    if not red_vectors:
        raise UnboundedAtCap("reduction collapsed; precision too low")
    Vred = standard_basis(red_vectors, V.cap)
    if all(nv >= 0 for nv in norm_vals):
        cls = "strict" if V.maya == Vred.maya else "integral"
    else:
        bad = max(i for i, nv in enumerate(norm_vals) if nv < 0)
        cls = "integral" if bad < len(norm_vals) - 1 else "bounded"
        if cls == "integral" and V.index != Vred.index:
            cls = "bounded"
    evidence = None
    if cls == "strict":
        evidence = {"tier": "theorem-backed" if strict_evidence else "cap-checked",
                    "cap": V.cap}
        if strict_evidence:
            evidence.update(strict_evidence)
    V.integrality = cls
    V.reduced = Vred
    V.strict_evidence = evidence
    return cls, Vred


def subspace_product(V: GrassPoint, W: GrassPoint, cap: int | None = None) -> GrassPoint:
    """Span of pairwise products, re-echelonized."""
    if V.field != W.field:
        raise CapTooSmall("fields differ")
    cap_out = min(V.cap, W.cap) if cap is None else cap
    prods = []
    for v in V.basis:
        for w in W.basis:
            if v.deg() + w.deg() <= cap_out:
                prods.append(v.mul(w))
    if not prods:
        raise CapTooSmall("no products under the cap")
    return standard_basis(prods, cap_out)


def tail_intersection_dim(V: GrassPoint, n: int) -> tuple[int, dict]:
    """dim { v in V : deg v <= n }, decided from the standard basis."""
    dims = [d for d in V.degrees() if d <= n]
    cert = {"cap": V.cap, "degrees": dims, "method": "standard-basis"}
    return len(dims), cert


def homothety_equal(V: GrassPoint, W: GrassPoint) -> bool:
    """Same Maya diagram through the smaller cap (necessary condition for ~)."""
    cap = min(V.cap, W.cap)
    dv = [d for d in V.degrees() if d <= cap]
    dw = [d for d in W.degrees() if d <= cap]
    return dv == dw
