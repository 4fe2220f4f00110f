"""Field arithmetic: the prime field F_p the vaults live in, safe-prime
parameter generation, and a small GF(2^16) used by the identity binding.

Prime-field elements are plain ints in [0, p); the field object carries p
and a fixed primitive root alpha and exposes method arithmetic. GF(2^16)
elements are ints in [0, 65536) interpreted as polynomials over GF(2).
"""

from __future__ import annotations

import random
import struct
from functools import lru_cache

from ._wire import pack_lpint, unpack_lpint, take
from .errors import BadFactorization, MalformedFile, ZeroInverse

_MILLER_RABIN_ROUNDS = 64
# below this bound primality is decided by trial division alone
_TRIAL_DIVISION_BOUND = 1 << 20


def _sieve(limit):
    flags = bytearray([1]) * limit
    flags[0] = flags[1] = 0
    for i in range(2, int(limit ** 0.5) + 1):
        if flags[i]:
            flags[i * i::i] = bytearray(len(flags[i * i::i]))
    return [i for i in range(limit) if flags[i]]


# 1100 > sqrt(2^20), so division by these is exhaustive below the bound
_SMALL_PRIMES = _sieve(1100)


def _miller_rabin(n: int, rounds: int) -> bool:
    # bases drawn from an rng seeded with n itself, so the verdict is
    # deterministic per candidate while still using random witnesses
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int, rounds: int = _MILLER_RABIN_ROUNDS) -> bool:
    """Primality test: exhaustive trial division below 2^20, Miller-Rabin above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _TRIAL_DIVISION_BOUND:
        return True
    return _miller_rabin(n, rounds)


def is_primitive_root(candidate: int, p: int, factors: list[int]) -> bool:
    """Whether candidate generates the full multiplicative group of F_p.

    factors must be the distinct primes dividing p - 1; anything that is
    not a complete factorization raises BadFactorization.
    """
    distinct = set(factors)
    m = p - 1
    for f in distinct:
        if f < 2 or m % f != 0 or not is_prime(f):
            raise BadFactorization(f"{f} is not a prime factor of {m}")
    rest = m
    for f in distinct:
        while rest % f == 0:
            rest //= f
    if rest != 1:
        raise BadFactorization("factor list does not cover p - 1")
    c = candidate % p
    if c == 0:
        # 0 never generates anything, and the power test below would
        # wrongly pass it (0^e != 1 for every e)
        return False
    return all(pow(c, m // f, p) != 1 for f in distinct)


class PrimeField:
    """F_p together with a fixed primitive root alpha.

    Immutable once built; the constructor re-checks primality and the
    alpha range so a field deserialized from untrusted bytes is safe to
    compute in.
    """

    __slots__ = ("p", "alpha", "p_bits")

    def __init__(self, p: int, alpha: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if not 2 <= alpha <= p - 2:
            raise ValueError("alpha must lie in [2, p - 2]")
        self.p = p
        self.alpha = alpha
        self.p_bits = p.bit_length()

    @property
    def size(self) -> int:
        return self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def pow(self, base: int, exponent: int) -> int:
        return pow(base, exponent, self.p)

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return pow(x, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and (self.p, self.alpha) == (other.p, other.alpha)

    def __hash__(self):
        return hash((self.p, self.alpha))

    def __repr__(self):
        return f"PrimeField(p={self.p}, alpha={self.alpha})"

    def to_bytes(self) -> bytes:
        """Parameter block: length-prefixed p then length-prefixed alpha."""
        return pack_lpint(self.p) + pack_lpint(self.alpha)

    @classmethod
    def read_from(cls, data: bytes, offset: int = 0) -> tuple["PrimeField", int]:
        p, offset = unpack_lpint(data, offset)
        alpha, offset = unpack_lpint(data, offset)
        try:
            return cls(p, alpha), offset
        except ValueError as exc:
            raise MalformedFile(str(exc)) from exc


def gen_params(bits: int, seed: int) -> PrimeField:
    """Deterministically generate a safe prime p of exactly `bits` bits
    and its smallest primitive root.

    p = 2q + 1 with q prime; candidates for q are drawn from a seeded rng,
    filtered with single-round tests, then confirmed at full strength.
    The smallest alpha works because safe primes have abundant primitive
    roots.
    """
    if bits < 5:
        raise ValueError("no safe prime has fewer than 5 bits")
    rng = random.Random(seed)
    while True:
        q = rng.randrange(1 << (bits - 2), 1 << (bits - 1)) | 1
        if not is_prime(q, rounds=1):
            continue
        p = 2 * q + 1
        if not is_prime(p, rounds=1):
            continue
        if is_prime(q) and is_prime(p):
            break
    alpha = 2
    while not is_primitive_root(alpha, p, [2, q]):
        alpha += 1
    return PrimeField(p, alpha)


_PARAMS_MAGIC = b"DLFP"
_PARAMS_VERSION = 1


def params_to_file(field: PrimeField) -> bytes:
    """Standalone field-parameters file: magic, version, parameter block."""
    return _PARAMS_MAGIC + bytes([_PARAMS_VERSION]) + field.to_bytes()


def params_from_file(data: bytes) -> PrimeField:
    magic, offset = take(data, 0, 4)
    if magic != _PARAMS_MAGIC:
        raise MalformedFile("not a field parameters file")
    version, offset = take(data, offset, 1)
    if version[0] != _PARAMS_VERSION:
        raise MalformedFile(f"unsupported parameters version {version[0]}")
    field, offset = PrimeField.read_from(data, offset)
    if offset != len(data):
        raise MalformedFile("trailing bytes after the parameter block")
    return field


# ---------------------------------------------------------------------------
# GF(2^16)

# smallest irreducible degree-16 polynomial over GF(2): x^16+x^5+x^3+x+1
GF16_REDUCTION_POLY = 0x1002B


def gf16_clmul(a: int, b: int, reduction: int = GF16_REDUCTION_POLY) -> int:
    """Carry-less shift-and-xor product reduced mod the degree-16 polynomial."""
    a &= 0xFFFF
    b &= 0xFFFF
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x10000:
            a ^= reduction
    return r


def _pow_clmul(base, exponent, reduction):
    r = 1
    while exponent:
        if exponent & 1:
            r = gf16_clmul(r, base, reduction)
        base = gf16_clmul(base, base, reduction)
        exponent >>= 1
    return r


class BinaryField16:
    """GF(2^16) with log/exp tables over a found multiplicative generator.

    Addition is xor. Multiplication and inversion go through the tables;
    building them walks the full 65535-element orbit once, so share an
    instance via binary_field() instead of constructing ad hoc.
    """

    size = 1 << 16
    # 65535 = 3 * 5 * 17 * 257
    _ORDER_FACTORS = (3, 5, 17, 257)

    def __init__(self, reduction: int = GF16_REDUCTION_POLY):
        if reduction.bit_length() != 17:
            raise ValueError("reduction polynomial must have degree exactly 16")
        self.reduction = reduction
        self._build_tables()

    def _generates(self, g):
        order = self.size - 1
        if _pow_clmul(g, order, self.reduction) != 1:
            return False
        return all(_pow_clmul(g, order // f, self.reduction) != 1
                   for f in self._ORDER_FACTORS)

    def _build_tables(self):
        order = self.size - 1
        g = 2
        while g < self.size and not self._generates(g):
            g += 1
        if g == self.size:
            raise ValueError("no multiplicative generator; reduction polynomial is not irreducible")
        exp = [1] * order
        log = [0] * self.size
        acc = 1
        for i in range(order):
            exp[i] = acc
            log[acc] = i
            acc = gf16_clmul(acc, g, self.reduction)
        if acc != 1:
            raise ValueError("generator orbit did not close; reduction polynomial is not irreducible")
        self.generator = g
        self._exp = exp
        self._log = log

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % 65535]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return self._exp[-self._log[x] % 65535]

    def pow(self, base: int, exponent: int) -> int:
        if base == 0:
            return 0 if exponent else 1
        return self._exp[self._log[base] * exponent % 65535]

    def __repr__(self):
        return f"BinaryField16(reduction={self.reduction:#x})"


@lru_cache(maxsize=None)
def binary_field(reduction: int = GF16_REDUCTION_POLY) -> BinaryField16:
    """Shared BinaryField16 instance; table construction runs once per reduction."""
    return BinaryField16(reduction)


def gf16_mul(a: int, b: int) -> int:
    """Product in the default GF(2^16)."""
    return binary_field().mul(a, b)
