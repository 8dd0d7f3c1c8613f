"""Exact arithmetic in finite extensions of Q_p at capped precision.

A field is built in at most two steps: an unramified extension of degree f
followed by one Eisenstein extension of degree e.  An element is stored in
floating form, `pi^(e*v) * unit`, with the unit's coordinates kept modulo
p^N in the basis {zeta^i pi^j}.  Every element also carries its absolute
precision `ap` (in powers of p), so cancellation is tracked honestly and
comparisons can report "zero at precision" instead of guessing.
"""

from __future__ import annotations

from fractions import Fraction

from . import intpoly
from .errors import (EmptyPolygon, FieldMismatch, NoRoot, NonEisenstein,
                     NotContracting, NotIntegral, PrecisionExhausted)
from .gf import GF

INF = float("inf")


def _valp_int(n: int, p: int, cap: int) -> int | float:
    """p-adic valuation of n mod p^cap; INF if n == 0 mod p^cap."""
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
        if v >= cap:
            return INF
    return v


class PadicField:
    """Handle for K = (unramified deg f over Q_p) adjoined an Eisenstein root."""

    def __init__(self, p: int, f: int = 1, eis=None, N: int = 24,
                 unram_poly: tuple[int, ...] | None = None):
        if p < 2 or any(p % k == 0 for k in range(2, min(p, 100000))) and p != 2:
            raise ValueError(f"p = {p} is not prime")
        if N < 1:
            raise ValueError("N must be >= 1")
        self.p = p
        self.f = f
        self.N = N
        self.pN = p ** N
        # unit coordinates carry two guard digits so that conversions through
        # eps = pi^e/p keep N honest digits
        self.Ng = N + 2
        self.pNu = p ** self.Ng
        self.gf = GF(p, f, poly=unram_poly[:f] + (1,) if (unram_poly and f > 1) else None) \
            if f > 1 else GF(p, 1)
        self.unram = tuple(self.gf.poly)  # monic, degree f, entries in [0, p)
        if eis is None:
            self.e = 1
            self.eis = None
        else:
            coeffs = [self._coerce_ocoeff(c) for c in eis]
            if len(coeffs) < 2:
                raise NonEisenstein("Eisenstein polynomial must have degree >= 1")
            top = coeffs[-1]
            if top != self._ou_one():
                raise NonEisenstein("leading coefficient must be 1")
            self.e = len(coeffs) - 1
            if self.e == 1:
                raise NonEisenstein("degree-1 Eisenstein extension is trivial; omit it")
            c0v = self._ou_valp(coeffs[0])
            if c0v != 1:
                raise NonEisenstein("constant term must have valuation exactly 1")
            for c in coeffs[1:-1]:
                if self._ou_valp(c) < 1:
                    raise NonEisenstein("middle coefficient is a unit")
            self.eis = tuple(coeffs[:-1]) + (top,)
        self.ef = self.e * self.f
        self._init_tables()

    # -- O_U coefficient helpers (f-vectors of ints mod p^N) --

    def _ou_one(self):
        return (1,) + (0,) * (self.f - 1)

    def _ou_zero(self):
        return (0,) * self.f

    def _coerce_ocoeff(self, c):
        if isinstance(c, int):
            return (c % self.pNu,) + (0,) * (self.f - 1)
        c = tuple(x % self.pNu for x in c)
        assert len(c) == self.f
        return c

    def _ou_valp(self, c) -> int | float:
        return min(_valp_int(x, self.p, self.N) for x in c)

    def _ou_mul(self, a, b):
        if self.f == 1:
            return ((a[0] * b[0]) % self.pNu,)
        prod = intpoly.polymul(list(a), list(b), self.pNu)
        return tuple(self._ured.reduce(prod))

    def _ou_scale(self, a, s: int):
        return tuple((x * s) % self.pNu for x in a)

    def _init_tables(self):
        pN = self.pNu
        if self.f > 1:
            self._ured = intpoly.MonicReducer([c % pN for c in self.unram], pN)
        if self.e > 1:
            if self.f == 1:
                flat = [c[0] % pN for c in self.eis]
                self._ered_flat = intpoly.MonicReducer(flat, pN)
            # pi-division data: u0/pi = -(u0/c0) * (c1 + c2 pi + ... + pi^{e-1})
            c0 = self.eis[0]
            w0 = tuple(x // self.p for x in c0)  # c0/p, a unit of O_U
            self._c0p_inv = self._ou_inv(w0)
            piv = [self.eis[i] for i in range(1, self.e)] + [self._ou_one()]
            self._pi_div_vec = tuple(self._ou_scale(self._ou_mul(c, self._c0p_inv), -1)
                                     for c in piv)
            # eps = pi^e / p, the unit mediating between p and pi^e
            eps = []
            for i in range(self.e):
                ci = self.eis[i]
                assert all(x % self.p == 0 for x in ci)
                eps.extend(tuple((-(x // self.p)) % pN for x in ci))
            self._eps = tuple(eps)
            self._eps_inv = None  # computed lazily (needs _uinv below)
            self._eps_pows: dict[int, tuple] = {0: self._flat_one()}

    def _eps_power(self, a: int):
        """Coordinates of eps^a (eps = pi^e / p), cached, a in Z."""
        if self.e == 1:
            return self._flat_one()
        if a in self._eps_pows:
            return self._eps_pows[a]
        if self._eps_inv is None:
            self._eps_inv = self._uinv(self._eps)
        base = self._eps if a > 0 else self._eps_inv
        cur = self._eps_pows[0]
        for _ in range(abs(a)):
            cur = self._umul(cur, base)
        self._eps_pows[a] = cur
        return cur

    def _ou_inv(self, a):
        """Inverse of a unit of O_U mod p^N, by Hensel from the residue inverse."""
        if self.f == 1:
            return (pow(a[0], -1, self.pN),)
        res = tuple(x % self.p for x in a)
        x = self.gf.inv(res) + (0,) * 0
        x = tuple(x)
        prec = 1
        while prec < self.N:
            prec = min(2 * prec, self.N)
            ax = self._ou_mul(a, x)
            corr = tuple((2 if i == 0 else 0) - c for i, c in enumerate(ax))
            x = self._ou_mul(x, tuple(c % self.pN for c in corr))
        return x

    # -- unit-coordinate arithmetic (flat tuples of length e*f) --

    def _flat_one(self):
        return (1,) + (0,) * (self.ef - 1)

    def _umul(self, a, b):
        pN = self.pN
        if self.e == 1:
            if self.f == 1:
                return ((a[0] * b[0]) % pN,)
            return tuple(self._ured.reduce(intpoly.polymul(list(a), list(b), pN)))
        if self.f == 1:
            return tuple(self._ered_flat.reduce(intpoly.polymul(list(a), list(b), pN)))
        return self._umul_bivariate(a, b)

    def _umul_bivariate(self, a, b):
        e, f, pN = self.e, self.f, self.pN
        # pack (j, i) -> slot j*(2f-1)+i so zeta-convolutions stay in-row
        W = 2 * f - 1
        bits = intpoly.slot_bits(pN, self.ef)

        def bipack(c):
            acc = 0
            for j in range(e):
                for i in range(f):
                    v = c[j * f + i]
                    if v:
                        acc |= v << ((j * W + i) * bits)
            return acc

        prod = bipack(a) * bipack(b)
        rows = []
        mask = (1 << bits) - 1
        for j in range(2 * e - 1):
            row = [(prod >> ((j * W + i) * bits)) & mask for i in range(W)]
            rows.append(tuple(self._ured.reduce([c % pN for c in row]))
                        if f > 1 else (row[0] % pN,))
        # fold pi powers >= e with the Eisenstein relation
        for j in range(2 * e - 2, e - 1, -1):
            row = rows[j]
            if all(c == 0 for c in row):
                continue
            rows[j] = self._ou_zero()
            for i in range(self.e):
                term = self._ou_mul(row, self.eis[i])
                tgt = j - self.e + i
                rows[tgt] = tuple((x - y) % pN for x, y in zip(rows[tgt], term))
        flat = []
        for j in range(e):
            flat.extend(rows[j])
        return tuple(flat)

    def _ucoords_valpi(self, c) -> int | float:
        """pi-adic valuation of a coordinate tuple (INF if zero mod p^N)."""
        best = INF
        for j in range(self.e):
            seg = c[j * self.f:(j + 1) * self.f]
            v = min(_valp_int(x, self.p, self.N) for x in seg)
            if v is not INF:
                cand = self.e * v + j
                if cand < best:
                    best = cand
        return best

    def _ucoords_div_p(self, c, k: int = 1):
        pk = self.p ** k
        assert all(x % pk == 0 for x in c), "inexact division by p"
        return tuple(x // pk for x in c)

    def _ucoords_div_pi(self, c):
        """Divide by pi once; layer 0 must be divisible by p."""
        f = self.f
        shifted = list(c[f:]) + [0] * f
        u0 = c[:f]
        if any(u0):
            u0p = tuple(x // self.p for x in u0)
            assert all(x % self.p == 0 for x in u0), "inexact division by pi"
            for j, vec in enumerate(self._pi_div_vec):
                term = self._ou_mul(u0p, vec)
                for i in range(f):
                    shifted[j * f + i] = (shifted[j * f + i] + term[i]) % self.pN
        return tuple(shifted)

    def _ucoords_shift_down(self, c, k: int):
        """Divide coordinates by pi^k (valuation known >= k).

        pi^{e a} = p^a eps^a, so the p-division must be compensated by
        eps^{-a}.
        """
        a, r = divmod(k, self.e)
        if a:
            c = self._ucoords_div_p(c, a)
            c = self._umul(c, self._eps_power(-a))
        for _ in range(r):
            c = self._ucoords_div_pi(c)
        return c

    def _ucoords_mul_pi(self, c, k: int):
        """Multiply coordinates by pi^k (k >= 0)."""
        pN = self.pN
        while k > 0:
            step = min(k, self.e - 1) if self.e > 1 else k
            if self.e == 1:
                return tuple((x * self.p ** k) % pN for x in c)
            rows = [self._ou_zero()] * step + \
                   [tuple(c[j * self.f:(j + 1) * self.f]) for j in range(self.e)]
            for j in range(len(rows) - 1, self.e - 1, -1):
                row = rows[j]
                if all(x == 0 for x in row):
                    continue
                rows[j] = self._ou_zero()
                for i in range(self.e):
                    term = self._ou_mul(row, self.eis[i])
                    tgt = j - self.e + i
                    rows[tgt] = tuple((x - y) % pN for x, y in zip(rows[tgt], term))
            flat = []
            for j in range(self.e):
                flat.extend(rows[j])
            c = tuple(flat)
            k -= step
        return c

    def _uinv(self, a):
        """Inverse of a unit coordinate tuple (layer-0 residue nonzero)."""
        res = tuple(x % self.p for x in a[:self.f])
        x0 = self.gf.inv(res)
        x = tuple(x0) + (0,) * (self.ef - self.f)
        # Newton: x <- x(2 - ax); pi-adic accuracy doubles per step
        prec = 1
        target = self.e * self.N
        while prec < target:
            prec = min(2 * prec, target)
            ax = self._umul(a, x)
            corr = list(tuple((-c) % self.pN for c in ax))
            corr[0] = (corr[0] + 2) % self.pN
            x = self._umul(x, tuple(corr))
        return x

    # -- element constructors --

    def zero(self):
        return PadicElement(self, INF, None, INF)

    def zero_at(self, ap):
        return PadicElement(self, INF, None, ap)

    def one(self):
        return PadicElement(self, Fraction(0), self._flat_one(), Fraction(self.N))

    def from_int(self, n: int) -> "PadicElement":
        if n == 0:
            return self.zero()
        v = 0
        m = n
        while m % self.p == 0 and v < self.N:
            m //= self.p
            v += 1
        if v >= self.N and m % self.p == 0:
            return self.zero_at(Fraction(self.N))
        unit0 = m % self.pN
        if unit0 == 0:
            return self.zero_at(Fraction(v + self.N))
        unit = (unit0,) + (0,) * (self.ef - 1)
        if v and self.e > 1:
            unit = self._umul(unit, self._eps_power(-v))  # p^v = pi^{ev} eps^{-v}
        return PadicElement(self, Fraction(v), unit, Fraction(v + self.N))

    def from_rational(self, q) -> "PadicElement":
        q = Fraction(q)
        num = self.from_int(q.numerator)
        if q.denominator == 1:
            return num
        return num / self.from_int(q.denominator)

    def elem(self, v, unit_coords, ap=None) -> "PadicElement":
        v = Fraction(v)
        unit = tuple(c % self.pN for c in unit_coords)
        assert len(unit) == self.ef
        k = self._ucoords_valpi(unit)
        if k is INF:
            return self.zero_at(v + self.N if ap is None else ap)
        if k:
            unit = self._ucoords_shift_down(unit, k)
            v = v + Fraction(k, self.e)
        ap = v + self.N if ap is None else Fraction(ap)
        return PadicElement(self, v, unit, min(ap, v + self.N))

    def uniformizer(self) -> "PadicElement":
        if self.e == 1:
            return self.from_int(self.p)
        return PadicElement(self, Fraction(1, self.e), self._flat_one(),
                            Fraction(1, self.e) + self.N)

    def from_residue(self, gfelt) -> "PadicElement":
        """Plain digit lift of a residue-field element."""
        if all(c == 0 for c in gfelt):
            return self.zero_at(Fraction(self.N))
        coords = tuple(gfelt) + (0,) * (self.ef - self.f)
        return self.elem(0, coords)

    def teichmuller(self, d: int) -> "PadicElement":
        return teichmuller_root(self, d)

    def residue_field(self) -> GF:
        return self.gf

    def extension_eisenstein(self, coeffs, N: int | None = None) -> "PadicField":
        """New field with the same unramified part and the given Eisenstein polynomial."""
        assert self.e == 1, "two-step extensions only: base must be unramified"
        return PadicField(self.p, self.f, eis=coeffs, N=self.N if N is None else N,
                          unram_poly=self.unram if self.f > 1 else None)

    # -- misc --

    def __eq__(self, other):
        return (isinstance(other, PadicField)
                and (self.p, self.f, self.e, self.N, self.unram, self.eis)
                == (other.p, other.f, other.e, other.N, other.unram, other.eis))

    def __hash__(self):
        return hash((self.p, self.f, self.e, self.N))

    def __repr__(self):
        tags = [f"Q_{self.p}"]
        if self.f > 1:
            tags.append(f"unram deg {self.f}")
        if self.e > 1:
            tags.append(f"eis deg {self.e}")
        return f"PadicField({', '.join(tags)}; N={self.N})"


class PadicElement:
    """Floating element: pi^(e*v) * unit, unit coordinates mod p^N.

    `ap` is the absolute precision (in powers of p): the element is known
    modulo pi^(e*ap).  `v is INF` encodes zero-at-precision-ap (exact zero
    when ap is also INF).
    """

    __slots__ = ("K", "v", "u", "ap")

    def __init__(self, K: PadicField, v, u, ap):
        self.K = K
        self.v = v
        self.u = u
        self.ap = ap

    # -- predicates --

    def zero_status(self) -> str:
        if self.v is INF:
            return "zero" if self.ap is INF else "zero-at-precision"
        return "nonzero"

    def is_zero(self) -> bool:
        """True if indistinguishable from zero at stored precision."""
        return self.v is INF

    def valuation(self):
        return self.v

    def unit_coords(self):
        return self.u

    # -- arithmetic --

    def _check(self, other):
        if self.K is not other.K and self.K != other.K:
            raise FieldMismatch(f"{self.K} vs {other.K}")

    def __neg__(self):
        if self.v is INF:
            return self
        pN = self.K.pN
        return PadicElement(self.K, self.v, tuple((-c) % pN for c in self.u), self.ap)

    def __add__(self, other):
        if isinstance(other, int):
            other = self.K.from_int(other)
        self._check(other)
        K = self.K
        if self.v is INF and other.v is INF:
            return PadicElement(K, INF, None, min(self.ap, other.ap))
        if self.v is INF:
            return other._truncate_ap(min(other.ap, self.ap))
        if other.v is INF:
            return self._truncate_ap(min(self.ap, other.ap))
        ap = min(self.ap, other.ap)
        lo, hi = (self, other) if self.v <= other.v else (other, self)
        shift = hi.v - lo.v
        k = int(shift * K.e)
        assert shift == Fraction(k, K.e)
        if lo.v + Fraction(k, K.e) >= lo.v + K.N:  # hi vanishes at storage precision
            return lo._truncate_ap(ap)
        hi_coords = K._ucoords_mul_pi(hi.u, k) if k else hi.u
        coords = tuple((a + b) % K.pN for a, b in zip(lo.u, hi_coords))
        kk = K._ucoords_valpi(coords)
        if kk is INF:
            return PadicElement(K, INF, None, min(ap, lo.v + K.N))
        vnew = lo.v + Fraction(kk, K.e)
        if vnew >= ap:
            return PadicElement(K, INF, None, ap)
        if kk:
            coords = K._ucoords_shift_down(coords, kk)
        return PadicElement(K, vnew, coords, min(ap, vnew + K.N))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.K.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _mul_int(self, n: int):
        """Fast scalar multiple by an integer (single coordinate pass)."""
        K = self.K
        if n == 0:
            return K.zero()
        if self.v is INF:
            return self
        a = 0
        while n % K.p == 0:
            n //= K.p
            a += 1
        u = tuple((c * n) % K.pN for c in self.u)
        if a and K.e > 1:
            u = K._umul(u, K._eps_power(-a))
        v = self.v + a
        return PadicElement(K, v, u, min(self.ap + a, v + K.N))

    def __mul__(self, other):
        if isinstance(other, int):
            return self._mul_int(other)
        self._check(other)
        K = self.K
        if self.v is INF or other.v is INF:
            # val >= v1 + v2 with ap propagation
            if self.v is INF and other.v is INF:
                return PadicElement(K, INF, None, self.ap + other.ap)
            reg, z = (self, other) if other.v is INF else (other, self)
            if reg.v is INF:
                reg, z = z, reg
            return PadicElement(K, INF, None, reg.v + z.ap)
        v = self.v + other.v
        ap = min(self.ap + other.v, other.ap + self.v, v + K.N)
        u = K._umul(self.u, other.u)
        return PadicElement(K, v, u, ap)

    __rmul__ = __mul__

    def inv(self):
        K = self.K
        if self.v is INF:
            raise (ZeroDivisionError("division by exact zero") if self.ap is INF
                   else PrecisionExhausted("division by zero-at-precision"))
        u = K._uinv(self.u)
        v = -self.v
        ap = self.ap - 2 * self.v
        return PadicElement(K, v, u, min(ap, v + K.N))

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.K.from_int(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * self.K.from_int(other) if isinstance(other, int) else NotImplemented

    def __pow__(self, n: int):
        K = self.K
        if n == 0:
            return K.one()
        if n < 0:
            return self.inv() ** (-n)
        if self.v is INF:
            return PadicElement(K, INF, None, self.ap * n if self.ap is not INF else INF)
        rel = self.ap - self.v
        result_u = K._flat_one()
        base = self.u
        m = n
        while m:
            if m & 1:
                result_u = K._umul(result_u, base)
            m >>= 1
            if m:
                base = K._umul(base, base)
        v = self.v * n
        return PadicElement(K, v, result_u, v + rel)

    def _truncate_ap(self, ap):
        if ap == self.ap:
            return self
        if self.v is not INF and self.v >= ap:
            return PadicElement(self.K, INF, None, ap)
        return PadicElement(self.K, self.v, self.u, ap)

    # -- conversions --

    def residue(self):
        """Image in the residue field; requires valuation >= 0."""
        K = self.K
        if self.v is INF:
            return K.gf.zero
        if self.v < 0:
            raise NotIntegral("negative valuation has no residue")
        if self.v > 0:
            return K.gf.zero
        return tuple(c % K.p for c in self.u[:K.f])

    def eq_at_precision(self, other) -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        if self.v is INF:
            return f"O(p^{self.ap})" if self.ap is not INF else "0"
        digits = self.u[0] % self.K.p ** min(4, self.K.N)
        return f"p^{self.v}*({digits}+... ; ap={self.ap})"


# -- module-level operations (spec surface) ---------------------------------

def make_field(p: int, f: int = 1, eis=None, N: int = 24) -> PadicField:
    """Construct Q_p, an unramified extension, or a two-step extension."""
    return PadicField(p, f, eis=eis, N=N)


def teichmuller_root(field: PadicField, d: int) -> PadicElement:
    """The canonical d-th root of unity: Newton lift of the smallest residue
    of exact multiplicative order d."""
    q = field.gf.q
    if d <= 0 or (q - 1) % d != 0:
        raise NoRoot(f"{d} does not divide q - 1 = {q - 1}")
    if d == 1:
        return field.one()
    target = None
    for counter in range(1, q):
        cand = field.gf.from_counter(counter)
        if cand != field.gf.zero and field.gf.order(cand) == d:
            target = cand
            break
    assert target is not None
    x = field.from_residue(target)
    one = field.one()
    dK = field.from_int(d)
    for _ in range(field.N.bit_length() + 2):
        fx = x ** d - one
        if fx.is_zero():
            break
        x = x - fx / (dK * x ** (d - 1))
    assert (x ** d - one).is_zero()
    return x


def hensel_lift(poly: list[PadicElement], approx: PadicElement) -> PadicElement:
    """Newton-lift a root of poly from approx; requires |f(a)| < |f'(a)|^2."""
    K = approx.K

    def feval(x):
        acc = K.zero()
        for c in reversed(poly):
            acc = acc * x + c
        return acc

    def fprime(x):
        acc = K.zero()
        for i in range(len(poly) - 1, 0, -1):
            acc = acc * x + poly[i] * K.from_int(i)
        return acc

    fx = feval(approx)
    dfx = fprime(approx)
    if dfx.is_zero():
        raise NotContracting("derivative vanishes at approximation")
    if not fx.is_zero() and not (fx.v > 2 * dfx.v):
        raise NotContracting(
            f"|f(a)| = p^-{fx.v} not < |f'(a)|^2 = p^-{2 * dfx.v}")
    x = approx
    for _ in range(64):
        fx = feval(x)
        if fx.is_zero():
            return x
        x = x - fx / fprime(x)
    return x


def newton_polygon(vals) -> list[tuple[Fraction, int]]:
    """Lower convex hull slopes of {(i, val(a_i))}, increasing order.

    `vals` is indexed by degree; entries are Fraction-like or None for zero
    coefficients.  A root of valuation w corresponds to a slope -w segment,
    whose horizontal length counts those roots.
    """
    pts = [(i, Fraction(v)) for i, v in enumerate(vals) if v is not None and v is not INF]
    if not pts:
        raise EmptyPolygon("all coefficients vanish at precision")
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return out
