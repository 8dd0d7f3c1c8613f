"""Descending-variable Laurent series and finite windows of the bi-infinite space.

A series here has finitely many high-degree terms and an infinite tail of
decreasing exponents; `deg` is the top exponent (pole order at infinity in
the geometric picture) and `floor` is the guarantee bound: coefficients at
exponents >= floor are exactly the stored ones, below floor nothing is
claimed.  ZSeries is the integral fast path (plain ints mod p^N) that the
curve pipeline runs on; LaurentSeries wraps PadicElement coefficients for
the general case.
"""

from __future__ import annotations

from fractions import Fraction

from . import intpoly
from .errors import FieldMismatch, NotIntegral
from .padic import INF, PadicElement, PadicField

NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# fast integral series: dict exponent -> int (mod p^N), over Q_p or U_f
# ---------------------------------------------------------------------------

class ZSeries:
    """Integral-coefficient series over Z/p^N, exact on [floor, +inf)."""

    __slots__ = ("mod", "coeffs", "floor")

    def __init__(self, mod: int, coeffs: dict[int, int], floor):
        self.mod = mod
        self.coeffs = {e: c % mod for e, c in coeffs.items()
                       if c % mod and e >= floor}
        self.floor = floor

    @classmethod
    def monomial(cls, mod: int, exp: int, c: int = 1, floor=NEG_INF):
        return cls(mod, {exp: c}, floor)

    @classmethod
    def zero(cls, mod: int, floor=NEG_INF):
        return cls(mod, {}, floor)

    def deg(self):
        return max(self.coeffs) if self.coeffs else NEG_INF

    def copy(self):
        return ZSeries(self.mod, dict(self.coeffs), self.floor)

    def coeff(self, e: int) -> int:
        assert e >= self.floor, "coefficient below guarantee floor"
        return self.coeffs.get(e, 0)

    def truncate(self, floor):
        fl = max(floor, self.floor)
        if fl == self.floor and all(e >= fl for e in self.coeffs):
            return self
        return ZSeries(self.mod, {e: c for e, c in self.coeffs.items() if e >= fl}, fl)

    def add(self, other: "ZSeries") -> "ZSeries":
        out = dict(self.coeffs)
        mod = self.mod
        for e, c in other.coeffs.items():
            v = (out.get(e, 0) + c) % mod
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return ZSeries(mod, out, max(self.floor, other.floor))

    def sub(self, other: "ZSeries") -> "ZSeries":
        out = dict(self.coeffs)
        mod = self.mod
        for e, c in other.coeffs.items():
            v = (out.get(e, 0) - c) % mod
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return ZSeries(mod, out, max(self.floor, other.floor))

    def scale(self, s: int) -> "ZSeries":
        s %= self.mod
        return ZSeries(self.mod, {e: c * s for e, c in self.coeffs.items()}, self.floor)

    def shift(self, k: int) -> "ZSeries":
        fl = self.floor if self.floor == NEG_INF else self.floor + k
        return ZSeries(self.mod, {e + k: c for e, c in self.coeffs.items()}, fl)

    def _stride(self) -> int:
        exps = list(self.coeffs)
        if len(exps) <= 1:
            return 0
        from math import gcd
        ref = exps[0]
        g = 0
        for e in exps[1:]:
            g = gcd(g, e - ref)
        return g

    def mul(self, other: "ZSeries", floor=None) -> "ZSeries":
        """Product, exact down to max(fA + dB, fB + dA) (clipped by `floor`)."""
        if not self.coeffs or not other.coeffs:
            newfloor = max(self.floor + (other.deg() if other.coeffs else 0),
                           other.floor + (self.deg() if self.coeffs else 0)) \
                if (self.floor != NEG_INF or other.floor != NEG_INF) else NEG_INF
            return ZSeries(self.mod, {}, newfloor if floor is None else max(newfloor, floor))
        da, db = self.deg(), other.deg()
        out_floor = max(self.floor + db if self.floor != NEG_INF else NEG_INF,
                        other.floor + da if other.floor != NEG_INF else NEG_INF)
        if floor is not None:
            out_floor = max(out_floor, floor)
        if out_floor == NEG_INF:
            out_lo = min(self.coeffs) + min(other.coeffs)
        else:
            out_lo = out_floor
        # clip operands: only exponents that can land at >= out_lo matter
        a = {e: c for e, c in self.coeffs.items() if e >= out_lo - db}
        b = {e: c for e, c in other.coeffs.items() if e >= out_lo - da}
        if not a or not b:
            return ZSeries(self.mod, {}, out_floor)
        from math import gcd
        stride = 0
        base = None
        for e in list(a) + list(b):
            if base is None:
                base = e
            else:
                stride = gcd(stride, e - base)
        if stride == 0:
            stride = 1
        amin, amax = min(a), max(a)
        bmin, bmax = min(b), max(b)
        la = (amax - amin) // stride + 1
        lb = (bmax - bmin) // stride + 1
        va = [0] * la
        for e, c in a.items():
            va[(e - amin) // stride] = c
        vb = [0] * lb
        for e, c in b.items():
            vb[(e - bmin) // stride] = c
        prod = intpoly.polymul(va, vb, self.mod)
        out = {}
        lo = amin + bmin
        for i, c in enumerate(prod):
            if c:
                e = lo + i * stride
                if e >= out_lo or out_floor == NEG_INF:
                    out[e] = c
        return ZSeries(self.mod, out, out_floor)

    def inv(self, floor) -> "ZSeries":
        """Inverse of a series with unit leading coefficient.

        Exact down to max(floor, honest) where honest = self.floor - 2*deg
        reflects how deep the input's guaranteed tail can support the
        inverse; the result floor records what was actually achieved.
        """
        d = self.deg()
        assert d != NEG_INF, "cannot invert zero"
        if self.floor != NEG_INF:
            floor = max(floor, self.floor - 2 * d)
        length = -d - floor + 1  # inverse has top exponent -d
        stride = self._stride() or 1
        n_terms = max(1, (length + stride - 1) // stride)
        f = [0] * n_terms
        for e, c in self.coeffs.items():
            idx = (d - e) // stride
            if (d - e) % stride == 0 and idx < n_terms:
                f[idx] = c
        invf = intpoly.inv_series(f, n_terms, self.mod)
        out = {}
        for i, c in enumerate(invf):
            if c:
                out[-d - i * stride] = c
        new_floor = -d - (n_terms - 1) * stride
        return ZSeries(self.mod, out, max(floor, new_floor))

    def pow(self, n: int, floor) -> "ZSeries":
        if n < 0:
            return self.inv(floor - (n + 1) * self.deg()).pow(-n, floor)
        result = ZSeries.monomial(self.mod, 0, 1, NEG_INF)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, floor=floor)
            n >>= 1
            if n:
                base = base.mul(base, floor=floor)
        return result.truncate(max(floor, result.floor)) if result.floor != NEG_INF or floor != NEG_INF else result

    def derivative(self) -> "ZSeries":
        return ZSeries(self.mod, {e - 1: (e * c) for e, c in self.coeffs.items() if e != 0},
                       self.floor if self.floor == NEG_INF else self.floor - 1)

    def reduce_mod(self, m: int) -> "ZSeries":
        return ZSeries(m, {e: c % m for e, c in self.coeffs.items()}, self.floor)

    def __repr__(self):
        terms = sorted(self.coeffs.items(), reverse=True)[:4]
        body = " + ".join(f"{c}*T^{e}" for e, c in terms)
        return f"ZSeries({body}{' + ...' if len(self.coeffs) > 4 else ''}; floor={self.floor})"


# ---------------------------------------------------------------------------
# public Laurent series over a PadicField
# ---------------------------------------------------------------------------

class LaurentSeries:
    """Finite-top, truncated-tail series with PadicElement coefficients.

    A coefficient that is zero at full storage precision is dropped; one that
    is zero only at substandard precision is retained so that echelonization
    can refuse to pivot on it (DegenerateSpan) instead of silently guessing.
    """

    __slots__ = ("field", "coeffs", "floor")

    def __init__(self, field: PadicField, coeffs: dict[int, PadicElement], floor=NEG_INF):
        self.field = field
        self.coeffs = {e: c for e, c in coeffs.items()
                       if not (c.is_zero() and (c.ap == INF or c.ap >= field.N))}
        self.floor = floor

    @classmethod
    def from_ints(cls, field: PadicField, coeffs: dict[int, int], floor=NEG_INF):
        return cls(field, {e: field.from_int(c) for e, c in coeffs.items()}, floor)

    @classmethod
    def from_zseries(cls, field: PadicField, z: ZSeries):
        return cls(field, {e: field.from_int(c) for e, c in z.coeffs.items()}, z.floor)

    def coeff(self, e: int) -> PadicElement:
        if e in self.coeffs:
            return self.coeffs[e]
        return self.field.zero() if e >= self.floor else self.field.zero_at(Fraction(0))

    def deg(self):
        """Top exponent with a nonzero-at-precision coefficient, or -inf."""
        return max(self.coeffs) if self.coeffs else NEG_INF

    def norm_val(self):
        """Valuation form of the sup-norm: min coefficient valuation (INF if zero)."""
        if not self.coeffs:
            return INF
        return min(c.valuation() for c in self.coeffs.values())

    def is_zero(self):
        return not self.coeffs

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch("series over different fields")

    def add(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return LaurentSeries(self.field, out, max(self.floor, other.floor))

    def sub(self, other: "LaurentSeries") -> "LaurentSeries":
        return self.add(other.scale(self.field.from_int(-1)))

    def scale(self, s: PadicElement) -> "LaurentSeries":
        return LaurentSeries(self.field, {e: c * s for e, c in self.coeffs.items()},
                             self.floor)

    def shift(self, k: int) -> "LaurentSeries":
        fl = self.floor if self.floor == NEG_INF else self.floor + k
        return LaurentSeries(self.field, {e + k: c for e, c in self.coeffs.items()}, fl)

    def mul(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return LaurentSeries(self.field, {}, max(self.floor, other.floor))
        da, db = self.deg(), other.deg()
        fl = max(self.floor + db if self.floor != NEG_INF else NEG_INF,
                 other.floor + da if other.floor != NEG_INF else NEG_INF)
        out: dict[int, PadicElement] = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                e = ea + eb
                if e < fl:
                    continue
                t = ca * cb
                out[e] = out[e] + t if e in out else t
        return LaurentSeries(self.field, out, fl)

    def truncate(self, floor):
        if floor <= self.floor:
            return self
        return LaurentSeries(self.field,
                             {e: c for e, c in self.coeffs.items() if e >= floor}, floor)

    def monic_normalize(self) -> "LaurentSeries":
        d = self.deg()
        assert d != NEG_INF
        return self.scale(self.coeffs[d].inv())

    def reduce_mod_p(self) -> "LaurentSeries":
        """Coefficientwise reduction to the residue field (as an N=1 field)."""
        if self.norm_val() < 0:
            raise NotIntegral("series has sup-norm > 1")
        K = self.field
        Kbar = _residue_series_field(K)
        out = {}
        for e, c in self.coeffs.items():
            r = c.residue()
            if any(r):
                out[e] = Kbar.elem(0, tuple(r) + (0,) * 0)
        return LaurentSeries(Kbar, out, self.floor)

    def __repr__(self):
        terms = sorted(self.coeffs.items(), reverse=True)[:3]
        body = " + ".join(f"({c!r})T^{e}" for e, c in terms)
        return f"LaurentSeries({body}...; deg={self.deg()}, floor={self.floor})"


_RESIDUE_CACHE: dict[tuple, PadicField] = {}


def _residue_series_field(K: PadicField) -> PadicField:
    key = (K.p, K.f)
    if key not in _RESIDUE_CACHE:
        _RESIDUE_CACHE[key] = PadicField(K.p, K.f, None, 1,
                                         unram_poly=K.unram if K.f > 1 else None)
    return _RESIDUE_CACHE[key]


def residue_series_field(K: PadicField) -> PadicField:
    return _residue_series_field(K)


# -- spec surface ------------------------------------------------------------

def arith(a, b, op: str):
    """add | mul | scale on LaurentSeries or WindowSeries of the same kind."""
    if isinstance(a, WindowSeries) or isinstance(b, WindowSeries):
        if op == "add":
            return a.add(b)
        if op == "mul":
            return a.mul(b)
        raise ValueError(f"unsupported window op {op}")
    if op == "add":
        return a.add(b)
    if op == "mul":
        return a.mul(b)
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown op {op}")


def degree_norm(v: LaurentSeries):
    """(degree or None-if-zero, sup-norm as a valuation)."""
    if v.is_zero():
        return None, INF
    return v.deg(), v.norm_val()


def reduce_mod_p(v: LaurentSeries) -> LaurentSeries:
    return v.reduce_mod_p()


# ---------------------------------------------------------------------------
# finite windows of H
# ---------------------------------------------------------------------------

class WindowSeries:
    """Coefficients on [lo, hi] of an element of H.

    `zero_below` / `zero_above` declare that coefficients outside the window
    on that side are known to vanish (rather than merely being truncated);
    products track the sub-window on which no truncated term can contribute.
    """

    __slots__ = ("field", "lo", "hi", "coeffs", "zero_below", "zero_above",
                 "exact_lo", "exact_hi")

    def __init__(self, field, lo, hi, coeffs, zero_below=False, zero_above=False,
                 exact_lo=None, exact_hi=None):
        self.field = field
        self.lo = lo
        self.hi = hi
        self.coeffs = {e: c for e, c in coeffs.items()
                       if lo <= e <= hi and not c.is_zero()}
        self.zero_below = zero_below
        self.zero_above = zero_above
        self.exact_lo = lo if exact_lo is None else exact_lo
        self.exact_hi = hi if exact_hi is None else exact_hi

    def coeff(self, e):
        return self.coeffs.get(e, self.field.zero())

    def norm_bound(self):
        """Valuation lower bound for coefficients: min val over stored ones."""
        if not self.coeffs:
            return INF
        return min(c.valuation() for c in self.coeffs.values())

    def add(self, other):
        if self.field != other.field:
            raise FieldMismatch("window add over different fields")
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        out = {}
        for e in range(lo, hi + 1):
            c = self.coeff(e) + other.coeff(e)
            if not c.is_zero():
                out[e] = c
        return WindowSeries(self.field, lo, hi, out,
                            self.zero_below and other.zero_below,
                            self.zero_above and other.zero_above,
                            max(self.exact_lo, other.exact_lo),
                            min(self.exact_hi, other.exact_hi))

    def mul(self, other):
        if self.field != other.field:
            raise FieldMismatch("window mul over different fields")
        lo = self.lo + other.lo
        hi = self.hi + other.hi
        out = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                e = ea + eb
                t = ca * cb
                out[e] = out[e] + t if e in out else t
        # exact zone: exclude n reachable by a truncated (unknown) coefficient
        lo_ok = []
        hi_ok = []
        if not self.zero_below:   # unknown A_i for i < exact_lo pollute small n
            lo_ok.append(self.exact_lo + other.exact_hi)
        if not other.zero_below:
            lo_ok.append(other.exact_lo + self.exact_hi)
        if not self.zero_above:   # unknown A_i for i > exact_hi pollute large n
            hi_ok.append(self.exact_hi + other.exact_lo)
        if not other.zero_above:
            hi_ok.append(other.exact_hi + self.exact_lo)
        exact_hi = min(hi_ok) if hi_ok else hi
        exact_lo = max(lo_ok) if lo_ok else lo
        return WindowSeries(self.field, lo, hi, out,
                            self.zero_below and other.zero_below,
                            self.zero_above and other.zero_above,
                            exact_lo, exact_hi)
