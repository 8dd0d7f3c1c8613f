"""Small finite fields F_{p^f} used as residue fields.

Elements are tuples of f ints in [0, p) (coefficients of zeta^i against a
fixed monic irreducible polynomial).  Sizes here are tiny (f <= ~12), so
schoolbook arithmetic is fine; the only nontrivial routine is the discrete
logarithm used to solve z^m = c.
"""

from __future__ import annotations

from .errors import NoRoot


def _polymulmod_p(a, b, modpoly, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    f = len(modpoly) - 1
    for k in range(len(out) - 1, f - 1, -1):
        c = out[k]
        if c:
            out[k] = 0
            for i in range(f):
                out[k - f + i] = (out[k - f + i] - c * modpoly[i]) % p
    out = out[:f] + [0] * max(0, f - len(out))
    return out[:f]


def _trial_factor(n: int) -> dict[int, int]:
    fac: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        fac[n] = fac.get(n, 0) + 1
    return fac


def find_irreducible(p: int, f: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree f over F_p, in counter order."""
    if f == 1:
        return (0, 1)
    primes = list(_trial_factor(f))
    for counter in range(p ** f):
        coeffs = []
        c = counter
        for _ in range(f):
            coeffs.append(c % p)
            c //= p
        poly = coeffs + [1]
        if _is_irreducible(poly, p, f, primes):
            return tuple(poly)
    raise NoRoot(f"no irreducible polynomial of degree {f} over F_{p}")


def _xpow_qmod(poly, p, exp):
    # X^exp mod poly (f >= 2), square-and-multiply on polynomials mod p
    f = len(poly) - 1
    result = [1] + [0] * (f - 1)
    base = [0, 1] + [0] * (f - 2)
    e = exp
    while e:
        if e & 1:
            result = _polymulmod_p(result, base, poly, p)
        base = _polymulmod_p(base, base, poly, p)
        e >>= 1
    return result


def _is_irreducible(poly, p, f, prime_divisors):
    x_itself = [0, 1] + [0] * (f - 2)
    if _xpow_qmod(poly, p, p ** f) != x_itself:
        return False
    for ell in prime_divisors:
        d = f // ell
        if _xpow_qmod(poly, p, p ** d) == x_itself:
            return False
    return True


class GF:
    """The field with p^f elements."""

    def __init__(self, p: int, f: int = 1, poly: tuple[int, ...] | None = None):
        self.p = p
        self.f = f
        self.q = p ** f
        self.poly = tuple(poly) if poly is not None else find_irreducible(p, f)
        assert len(self.poly) == f + 1 and self.poly[-1] == 1
        self.zero = (0,) * f
        self.one = (1,) + (0,) * (f - 1)
        self._gen: tuple[int, ...] | None = None
        self._qm1_factors = _trial_factor(self.q - 1) if self.q > 2 else {1: 1}

    # -- element helpers --

    def elem(self, coeffs) -> tuple[int, ...]:
        coeffs = [c % self.p for c in coeffs]
        coeffs += [0] * (self.f - len(coeffs))
        return tuple(coeffs[:self.f])

    def from_int(self, n: int) -> tuple[int, ...]:
        return (n % self.p,) + (0,) * (self.f - 1)

    def from_counter(self, counter: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.f):
            out.append(counter % self.p)
            counter //= self.p
        return tuple(out)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        if self.f == 1:
            return ((a[0] * b[0]) % self.p,)
        return tuple(_polymulmod_p(list(a), list(b), list(self.poly), self.p))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero in GF")
        return self.pow(a, self.q - 2)

    def frobenius(self, a, k: int = 1):
        return self.pow(a, self.p ** (k % self.f if self.f > 1 else 1))

    def order(self, a) -> int:
        if a == self.zero:
            raise ZeroDivisionError("order of zero")
        n = self.q - 1
        for ell, mult in self._qm1_factors.items():
            for _ in range(mult):
                if n % ell == 0 and self.pow(a, n // ell) == self.one:
                    n //= ell
        return n

    def generator(self) -> tuple[int, ...]:
        if self._gen is None:
            for counter in range(1, self.q):
                cand = self.from_counter(counter)
                if cand != self.zero and self.order(cand) == self.q - 1:
                    self._gen = cand
                    break
        assert self._gen is not None
        return self._gen

    def dlog(self, c) -> int:
        """Discrete log base generator(), baby-step giant-step."""
        g = self.generator()
        n = self.q - 1
        m = 1
        while m * m < n:
            m += 1
        table = {}
        cur = self.one
        for j in range(m):
            table.setdefault(cur, j)
            cur = self.mul(cur, g)
        gm_inv = self.pow(g, -m)
        gamma = c
        for i in range(m + 1):
            if gamma in table:
                return (i * m + table[gamma]) % n
            gamma = self.mul(gamma, gm_inv)
        raise NoRoot("dlog failed (element not in multiplicative group?)")

    def mth_roots(self, c, m: int) -> list[tuple[int, ...]]:
        """All z with z^m = c, possibly empty."""
        if c == self.zero:
            return [self.zero]
        n = self.q - 1
        m %= n
        if m == 0:
            return []  # z^0 = 1 only; caller never needs this
        from math import gcd
        d = gcd(m, n)
        t = self.dlog(c)
        if t % d != 0:
            return []
        g = self.generator()
        # solve m*s = t mod n
        s0 = (t // d) * pow(m // d, -1, n // d) % (n // d)
        step = n // d
        return [self.pow(g, (s0 + j * step) % n) for j in range(d)]

    def all_elements(self):
        for counter in range(self.q):
            yield self.from_counter(counter)

    def poly_roots(self, coeffs: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
        """Roots in F_q of a polynomial with GF coefficients, by scan (small q)."""
        roots = []
        for x in self.all_elements():
            acc = self.zero
            for c in reversed(coeffs):
                acc = self.add(self.mul(acc, x), c)
            if acc == self.zero:
                roots.append(x)
        return roots
