"""Loop-group elements and formal-group series plumbing.

Artin-Hasse loops h(T; pi) = exp(sum pi^{p^k} T^{p^k} / p^k) live in the
positive loop group; their coefficients obey |h_i| <= |pi|^i with equality
data certified from the exact rational Artin-Hasse coefficients.

The torsion solvers need the multiplication-by-m series [m] = l^{-1}(m l)
of the formal group with logarithm l(X) = sum (e_k / p^k) X^{p^k}, plus
Weierstrass factors of [p^s]; these run over Z_p in a fixed-point scaled
representation (coefficients times p^S), which is erosion-free because each
series product divides the doubled scale back out exactly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import intpoly
from .errors import NonEisenstein, NotInMaximalIdeal
from .padic import INF, PadicElement, PadicField


@lru_cache(maxsize=None)
def artin_hasse_coeffs(p: int, n: int) -> tuple[Fraction, ...]:
    """Exact rational coefficients of exp(sum_k T^{p^k}/p^k) through degree n.

    Recurrence m a_m = sum_{p^k <= m} a_{m - p^k}; every coefficient is
    p-integral (checked), which is what makes the loops integral.
    """
    a = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        pk = 1
        while pk <= m:
            acc += a[m - pk]
            pk *= p
        val = acc / m
        assert val.denominator % p != 0, "Artin-Hasse coefficient not p-integral"
        a.append(val)
    return tuple(a)


class LoopElement:
    """Element of Gamma_+ with certified geometric decay of its coefficients.

    coeffs[i] is h_i (h_0 = 1); rho_val is a certified Fraction with
    val(h_i) >= i * rho_val, i.e. |h_i| <= rho^i for rho = p^(-rho_val).
    Provenance records the (mu_i, pi_i) data when built from Artin-Hasse.
    """

    __slots__ = ("field", "coeffs", "rho_val", "provenance")

    def __init__(self, field: PadicField, coeffs, rho_val: Fraction, provenance=()):
        self.field = field
        self.coeffs = list(coeffs)
        self.rho_val = Fraction(rho_val)
        self.provenance = tuple(provenance)
        assert (self.coeffs[0] - field.one()).is_zero(), "h_0 must be 1"
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                assert c.valuation() >= i * self.rho_val, \
                    f"coefficient {i} violates the certified decay"

    def coeff(self, i: int) -> PadicElement:
        if i < 0:
            return self.field.zero()
        if i < len(self.coeffs):
            return self.coeffs[i]
        raise IndexError(f"loop coefficient {i} beyond cap {len(self.coeffs) - 1}")

    def cap(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self):
        return (f"LoopElement(cap={self.cap()}, rho_val={self.rho_val}, "
                f"mu={[m for m, _ in self.provenance]})")


def artin_hasse_loop(pi, cap: int, mu=None) -> LoopElement:
    """h(T; pi) for a single parameter, or the product loop for a vector.

    `pi` is a PadicElement (then mu defaults to (1,)) or a sequence of
    PadicElements with matching exponent tuple `mu`.
    """
    if isinstance(pi, PadicElement):
        pis = [pi]
        mu = (1,) if mu is None else tuple(mu)
    else:
        pis = list(pi)
        mu = tuple(mu) if mu is not None else tuple(range(1, len(pis) + 1))
    assert len(mu) == len(pis)
    K = pis[0].K
    for x in pis:
        if not x.is_zero() and not x.valuation() > 0:
            raise NotInMaximalIdeal("loop parameter must satisfy |pi| < 1")
    ah = artin_hasse_coeffs(K.p, cap)
    out = [K.one()] + [K.zero()] * cap
    for m_exp, x in zip(mu, pis):
        if x.is_zero():
            continue
        # factor series: sum_k AH_k x^k T^{m_exp k}
        powers = [K.one()]
        for _ in range(cap // m_exp):
            powers.append(powers[-1] * x)
        factor = {}
        for k in range(0, cap // m_exp + 1):
            factor[m_exp * k] = K.from_rational(ah[k]) * powers[k]
        new = [K.zero()] * (cap + 1)
        for e, c in factor.items():
            for i in range(0, cap + 1 - e):
                if not out[i].is_zero():
                    new[i + e] = new[i + e] + out[i] * c
        out = new
    rho_val = min((x.valuation() / m_exp for m_exp, x in zip(mu, pis)
                   if not x.is_zero()), default=Fraction(K.N))
    return LoopElement(K, out, rho_val, provenance=tuple(zip(mu, pis)))


def loop_pn_power_coeffs(provenance, n: int, cap: int):
    """Coefficients of h_mu(T; pi)^{p^n} = exp(p^n sum_j l(pi_j T^{mu_j})).

    Derivative recurrence on the exponential; coefficient m costs one term
    per (j, k) with mu_j p^k <= m.
    """
    (mu0, pi0) = provenance[0]
    K = pi0.K
    p = K.p
    args = []  # (exponent, scalar) of the exponent series' derivative*T
    for mu_j, pi_j in provenance:
        if pi_j.is_zero():
            continue
        k = 0
        while True:
            e = mu_j * p ** k
            if e > cap:
                break
            # term p^n * pi_j^{p^k} / p^k * T^e; times e from differentiation
            scal = (pi_j ** (p ** k)) * K.from_rational(Fraction(p ** n, p ** k))
            args.append((e, scal * K.from_int(e)))
            k += 1
    f = [K.one()] + [K.zero()] * cap
    for m in range(1, cap + 1):
        acc = K.zero()
        for e, scal in args:
            if e <= m and not f[m - e].is_zero():
                acc = acc + scal * f[m - e]
        f[m] = acc / K.from_int(m)
    return f


# ---------------------------------------------------------------------------
# scaled integer series over Z_p (fixed-point, erosion-free)
# ---------------------------------------------------------------------------

class FGSeries:
    """Power series over Q_p with denominators bounded by p^S.

    Stored as integer coefficients equal to (true value) * p^S, modulo
    p^(M + S).  Products rescale by exact division by p^S, which removes the
    injected scale without losing precision.
    """

    __slots__ = ("p", "S", "M", "mod", "c")

    def __init__(self, p, S, M, coeffs):
        self.p = p
        self.S = S
        self.M = M
        self.mod = p ** (M + S)
        self.c = [x % self.mod for x in coeffs]

    @classmethod
    def from_scaled(cls, p, S, M, scaled):
        return cls(p, S, M, scaled)

    @classmethod
    def from_valunits(cls, p, S, M, pairs, deg):
        """pairs: list of (exponent, val, unit-int); val >= -S."""
        mod = p ** (M + S)
        c = [0] * (deg + 1)
        for e, v, u in pairs:
            assert v >= -S
            if e <= deg:
                c[e] = (u * p ** (S + v)) % mod
        return cls(p, S, M, c)

    def deg_cap(self):
        return len(self.c) - 1

    def mul(self, other: "FGSeries", deg: int) -> "FGSeries":
        conv = intpoly.polymul_trunc(self.c[:deg + 1], other.c[:deg + 1],
                                     self.mod * self.p ** self.S, deg + 1)
        pS = self.p ** self.S
        out = [(x // pS) % self.mod for x in conv]
        return FGSeries(self.p, self.S, self.M, out)

    def add(self, other):
        n = max(len(self.c), len(other.c))
        a = self.c + [0] * (n - len(self.c))
        b = other.c + [0] * (n - len(other.c))
        return FGSeries(self.p, self.S, self.M,
                        [(x + y) % self.mod for x, y in zip(a, b)])

    def sub(self, other):
        n = max(len(self.c), len(other.c))
        a = self.c + [0] * (n - len(self.c))
        b = other.c + [0] * (n - len(other.c))
        return FGSeries(self.p, self.S, self.M,
                        [(x - y) % self.mod for x, y in zip(a, b)])

    def scale_int(self, s: int):
        return FGSeries(self.p, self.S, self.M, [(x * s) % self.mod for x in self.c])

    def is_zero_mod(self, Mcheck: int) -> bool:
        bar = self.p ** (self.S + Mcheck)
        return all(x % bar == 0 for x in self.c)

    def compose_powers(self, g: "FGSeries", exps_coeffs, deg: int) -> "FGSeries":
        """sum over (power, scaled coeff) of coeff * g^power, truncated at deg.

        The coefficient is scaled by p^S like the series, so each term is
        double-scaled before the exact p^S division strips it back.
        """
        out = FGSeries(self.p, self.S, self.M, [0] * (deg + 1))
        cache: dict[int, FGSeries] = {1: g}

        def gpow(n):
            if n in cache:
                return cache[n]
            half = gpow(n // 2)
            res = half.mul(half, deg)
            if n % 2:
                res = res.mul(g, deg)
            cache[n] = res
            return res

        pS = self.p ** self.S
        for power, coeff in exps_coeffs:
            gp = gpow(power)
            term = FGSeries(self.p, self.S, self.M,
                            [((x * coeff) // pS) % self.mod for x in gp.c])
            out = out.add(term)
        return out

    def inv_unit_series(self, deg: int) -> "FGSeries":
        """Inverse of an integral series with unit constant term."""
        pS = self.p ** self.S
        assert self.c[0] % pS == 0, "series must be integral"
        f_int = [x // pS for x in self.c[:deg + 1]]
        assert f_int[0] % self.p != 0, "constant term must be a unit"
        inv = intpoly.inv_series(f_int + [0] * (deg + 1 - len(f_int)), deg + 1,
                                 self.p ** self.M)
        return FGSeries(self.p, self.S, self.M, [(x * pS) % self.mod for x in inv])

    def integral_coeffs(self, deg: int) -> list[int]:
        """Strip the scale; valid only when the series is integral."""
        pS = self.p ** self.S
        out = []
        for x in self.c[:deg + 1]:
            assert x % pS == 0, "series is not integral"
            out.append((x // pS) % self.p ** self.M)
        return out


def log_support(p: int, deg: int) -> list[int]:
    """The exponents p^k <= deg."""
    out = []
    pk = 1
    while pk <= deg:
        out.append(pk)
        pk *= p
    return out


def fg_mult_series(e_units: list[int], p: int, m: int, deg: int, M: int) -> list[int]:
    """[m](X) = l^{-1}(m l(X)) mod (p^M, X^{deg+1}), integral coefficients.

    e_units[k] is the unit e^(k) of the logarithm coefficient e^(k)/p^k
    (e_units[0] = 1); only the p^k <= deg part of l matters at this degree.
    Newton on the functional equation l(F) = m l(X) keeps all intermediates
    within bounded denominators.
    """
    support = log_support(p, deg)
    kl = len(support) - 1
    S = kl + 2
    mod = p ** (M + S)
    pS = p ** S

    def l_coeff_scaled(k):
        # e_k / p^k scaled by p^S
        return (e_units[k] % mod) * p ** (S - k) % mod

    l_pairs = [(support[k], l_coeff_scaled(k)) for k in range(len(support))]

    # right-hand side m*l(X); m is an exact integer, so this stays single-scaled
    rhs = [0] * (deg + 1)
    for k, e in enumerate(support):
        rhs[e] = (m % mod) * l_coeff_scaled(k) % mod
    rhs_s = FGSeries(p, S, M, rhs)

    # l'(F) where F integral: integral series with unit constant term
    F = FGSeries(p, S, M, [0, (m % mod) * pS % mod] + [0] * (deg - 1))
    X = FGSeries(p, S, M, [0, pS] + [0] * (deg - 1))

    for _ in range(deg.bit_length() + 3):
        lF = X.compose_powers(F, l_pairs, deg)
        delta = lF.sub(rhs_s)
        if delta.is_zero_mod(M):
            break
        # l'(F) = sum_k e_k F^{p^k - 1}: compute as (sum_k e_k F^{p^k}) / F...
        # safer: build directly from powers of F
        lpF = FGSeries(p, S, M, [pS] + [0] * deg)  # e_0 = 1 contributes 1
        cache = {1: F}

        def fpow(n):
            if n in cache:
                return cache[n]
            half = fpow(n // 2)
            res = half.mul(half, deg)
            if n % 2:
                res = res.mul(F, deg)
            cache[n] = res
            return res

        for k in range(1, len(support)):
            gp = fpow(support[k] - 1)
            lpF = lpF.add(gp.scale_int(e_units[k] % mod))
        inv = lpF.inv_unit_series(deg)
        corr = delta.mul(inv, deg)
        F = F.sub(corr)
    lF = X.compose_powers(F, l_pairs, deg)
    assert lF.sub(rhs_s).is_zero_mod(M), "functional equation not satisfied"
    return F.integral_coeffs(deg)


def weierstrass_factor(F_int: list[int], p: int, wdeg: int, M: int) -> list[int]:
    """Distinguished monic factor of degree wdeg of an integral series.

    Requires F = (unit series) * X^wdeg mod p.  Returns the Weierstrass
    polynomial W (wdeg + 1 coefficients) with F = W * (unit series) mod
    (p^M, X^len(F)).
    """
    mod = p ** M
    D = len(F_int) - 1
    Fbar = [c % p for c in F_int]
    assert all(c == 0 for c in Fbar[:wdeg]), "series is not X^wdeg * unit mod p"
    assert Fbar[wdeg] % p != 0, "Weierstrass degree is off"
    W = [0] * wdeg + [1]
    U = [c % mod for c in F_int[wdeg:]]
    for _ in range(M.bit_length() + 2):
        WU = intpoly.polymul(W, U, mod)
        delta = intpoly.polysub(F_int, WU, mod)[:D + 1]
        if all(c % mod == 0 for c in delta):
            break
        B = intpoly.inv_series(U, D + 1, mod)
        BD = intpoly.polymul_trunc(B, delta, mod, D + 1)
        red = intpoly.MonicReducer(W, mod)
        dW = red.reduce(BD)
        # quotient q = (BD - dW)/W, then dU = q * U
        q_num = intpoly.polysub(BD, dW, mod)
        q = _exact_poly_div(q_num, W, mod)
        dU = intpoly.polymul_trunc(q, U, mod, D + 1 - 0)[:len(U)]
        W = intpoly.polyadd(W, dW, mod)[:wdeg + 1]
        W[wdeg] = 1
        U = intpoly.polyadd(U, dU + [0] * (len(U) - len(dU)), mod)
    WU = intpoly.polymul(W, U, mod)
    delta = intpoly.polysub(F_int, WU, mod)[:D + 1]
    assert all(c % mod == 0 for c in delta), "Weierstrass lift did not converge"
    return W


def _exact_poly_div(a: list[int], b_monic: list[int], mod: int) -> list[int]:
    """Quotient a / b for monic b, assuming exact division."""
    a = [c % mod for c in a]
    db = len(b_monic) - 1
    a = intpoly.trim(a)
    if len(a) < len(b_monic):
        return [0]
    q = [0] * (len(a) - db)
    for i in range(len(a) - db, 0, -1):
        c = a[i + db - 1]
        q[i - 1] = c
        if c:
            for jj, bc in enumerate(b_monic):
                a[i - 1 + jj] = (a[i - 1 + jj] - c * bc) % mod
    return q


def division_polynomials(e_units: list[int], p: int, n: int, M: int = 8):
    """Exact-level division polynomials W_1, ..., W_n of the formal group.

    W_s is Eisenstein over Z_p of degree p^s - p^{s-1}; its roots are the
    points of exact order p^s.  Returned as integer coefficient lists mod
    p^M, monic.
    """
    out = []
    prev = [0, 1]  # W^{(0)} = X
    for s in range(1, n + 1):
        wdeg = p ** s
        deg = wdeg + wdeg * M + 8
        F = fg_mult_series(e_units, p, p ** s, deg, M)
        Wfull = weierstrass_factor(F, p, wdeg, M)
        Ws = _exact_poly_div(Wfull, prev, p ** M)
        assert Ws[-1] % p ** M == 1, "division polynomial not monic"
        assert Ws[0] % p == 0 and (Ws[0] // p) % p != 0, "constant term val != 1"
        for c in Ws[1:-1]:
            if c % p != 0:
                raise NonEisenstein("division polynomial not Eisenstein")
        out.append(Ws)
        prev = Wfull
    return out
