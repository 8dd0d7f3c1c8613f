"""Dense integer-polynomial kernels used by the exact arithmetic layers.

Coefficients are plain Python ints reduced modulo a word `mod` (typically
p^N).  Multiplication packs a polynomial into one big integer (Kronecker
substitution) so CPython's subquadratic bigint product does the work; this
is what keeps degree-kilobit convolutions tolerable without numpy.
"""

from __future__ import annotations


def slot_bits(mod: int, length: int) -> int:
    # product coefficients are < length * (mod-1)^2; one spare bit for safety
    return 2 * (mod - 1).bit_length() + max(length, 1).bit_length() + 1


def pack(coeffs: list[int], bits: int) -> int:
    acc = 0
    shift = 0
    for c in coeffs:
        acc |= c << shift
        shift += bits
    return acc


def unpack(value: int, bits: int, count: int) -> list[int]:
    mask = (1 << bits) - 1
    return [(value >> (i * bits)) & mask for i in range(count)]


def polymul(a: list[int], b: list[int], mod: int) -> list[int]:
    """Product of coefficient lists, entries reduced mod `mod`."""
    if not a or not b:
        return []
    bits = slot_bits(mod, min(len(a), len(b)))
    prod = pack(a, bits) * pack(b, bits)
    out = unpack(prod, bits, len(a) + len(b) - 1)
    return [c % mod for c in out]


def polymul_trunc(a: list[int], b: list[int], mod: int, count: int) -> list[int]:
    """First `count` coefficients of a*b (power-series product)."""
    full = polymul(a[:count], b[:count], mod)
    out = full[:count]
    out.extend([0] * (count - len(out)))
    return out


def polyadd(a: list[int], b: list[int], mod: int) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % mod
    return out


def polysub(a: list[int], b: list[int], mod: int) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % mod
    return out


def polyscale(a: list[int], s: int, mod: int) -> list[int]:
    s %= mod
    return [(c * s) % mod for c in a]


def trim(a: list[int]) -> list[int]:
    n = len(a)
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n]


def inv_series(f: list[int], count: int, mod: int) -> list[int]:
    """Inverse of a power series with unit constant term, to `count` terms.

    Newton iteration x <- x(2 - fx); `mod` need not be prime as long as
    f[0] is invertible modulo it.
    """
    inv0 = pow(f[0], -1, mod)
    x = [inv0]
    k = 1
    while k < count:
        k = min(2 * k, count)
        fx = polymul_trunc(f[:k], x, mod, k)
        two_minus = [(-c) % mod for c in fx]
        two_minus[0] = (two_minus[0] + 2) % mod
        x = polymul_trunc(x, two_minus, mod, k)
    return x[:count]


class MonicReducer:
    """Reduction modulo a monic polynomial via reversal + Newton inverse."""

    def __init__(self, modulus: list[int], mod: int):
        assert modulus and modulus[-1] % mod == 1 % mod, "modulus must be monic"
        self.modulus = [c % mod for c in modulus]
        self.mod = mod
        self.deg = len(modulus) - 1
        self._rev = list(reversed(self.modulus))
        self._rev_inv = inv_series(self._rev, max(self.deg, 1), mod)

    def _inv_to(self, count: int) -> list[int]:
        if count > len(self._rev_inv):
            self._rev_inv = inv_series(self._rev, count, self.mod)
        return self._rev_inv[:count]

    def reduce(self, a: list[int]) -> list[int]:
        """a mod modulus, returned with exactly deg coefficients."""
        mod, deg = self.mod, self.deg
        a = [c % mod for c in a]
        a_trim = trim(a)
        if len(a_trim) <= deg:
            return a_trim + [0] * (deg - len(a_trim))
        k = len(a_trim) - deg  # number of quotient coefficients
        rev_a = list(reversed(a_trim))
        q_rev = polymul_trunc(rev_a, self._inv_to(k), mod, k)
        q = list(reversed(q_rev))
        r = polysub(a_trim, polymul(q, self.modulus, mod), mod)[:deg]
        r += [0] * (deg - len(r))
        return r


def polyshift_taylor(a: list[int], c: int, mod: int) -> list[int]:
    """Coefficients of a(X + c), Horner style."""
    out: list[int] = []
    for coeff in reversed(a):
        new = [0] * (len(out) + 1)
        for i, v in enumerate(out):
            new[i] = (new[i] + v * c) % mod
            new[i + 1] = (new[i + 1] + v) % mod
        new[0] = (new[0] + coeff) % mod
        out = new
    return out or [0]


def polyval(a: list[int], x: int, mod: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % mod
    return acc
