"""Fuzzy vault core: locking a message under a set, tolerance matching,
subset-search unlocking, and the vault file format.

A vault is r points over F_p. The t genuine ones sit on the locking
polynomial whose coefficients carry the (optionally encrypted) framed
message; the rest are chaff placed off the polynomial. All x coordinates
keep a pairwise integer distance greater than 2*delta so that a probe
value can never sit within delta of two vault points at once.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import random
import struct
from bisect import bisect_left, insort
from dataclasses import dataclass, field as dc_field

from . import framing
from ._wire import pack_lpint, unpack_lpint, take
from .dlog_codec import (
    KIND_NONE,
    KIND_PARITY,
    KIND_SINGLE,
    EphemeralKey,
    KeyFile,
    encode_segment,
    encode_whole,
    gen_key,
    key_exponent,
)
from .errors import (
    BadLength,
    ChaffSpaceExhausted,
    DecodeFailed,
    InvalidLockingSet,
    KeyKindMismatch,
    LockingSetTooSmall,
    MalformedFile,
    MalformedFrame,
    NotEnoughMatches,
    SignatureMismatch,
    WrongCount,
)
from .field import PrimeField
from .polynomial import eval_poly, lagrange_interpolate

DEFAULT_MAX_SUBSETS = 100_000

# consecutive placement failures tolerated before chaff generation gives up
_CHAFF_ATTEMPTS = 1000

_MAGIC = b"DLFV"
_VERSION = 1


class Scheme(enum.IntEnum):
    """How polynomial coefficients relate to the framed message."""

    CLASSICAL = 0        # segments are the coefficients, no encryption
    PER_SEGMENT = 1      # each segment multiplied by alpha^kappa
    WHOLE_MESSAGE = 2    # one multiplication of the whole framed integer, then split
    PARITY = 3           # separate exponents for even- and odd-indexed segments


_SCHEME_KEY_KIND = {
    Scheme.CLASSICAL: KIND_NONE,
    Scheme.PER_SEGMENT: KIND_SINGLE,
    Scheme.WHOLE_MESSAGE: KIND_SINGLE,
    Scheme.PARITY: KIND_PARITY,
}


@dataclass
class Vault:
    """A locked vault: parameters, dimensions, and the point cloud.

    genuine_mask marks which points lie on the locking polynomial. It is
    ground truth for tests and the attack harness and is never written
    by to_bytes, so a serialized vault leaks nothing beyond the points.
    """

    params: PrimeField
    scheme: Scheme
    coeff_count: int
    seg_bits: int
    delta: int
    points: list[tuple[int, int]]
    genuine_mask: list[bool] | None = dc_field(default=None, repr=False, compare=False)

    def to_bytes(self) -> bytes:
        out = bytearray(_MAGIC)
        out.append(_VERSION)
        out.append(int(self.scheme))
        out += struct.pack(">HH", self.seg_bits, self.coeff_count)
        out += pack_lpint(self.delta)
        out += self.params.to_bytes()
        out += struct.pack(">I", len(self.points))
        width = (self.params.p_bits + 7) // 8
        for x, y in self.points:
            out += x.to_bytes(width, "big")
            out += y.to_bytes(width, "big")
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Vault":
        magic, offset = take(data, 0, 4)
        if magic != _MAGIC:
            raise MalformedFile("not a vault file")
        version, offset = take(data, offset, 1)
        if version[0] != _VERSION:
            raise MalformedFile(f"unsupported vault version {version[0]}")
        code, offset = take(data, offset, 1)
        try:
            scheme = Scheme(code[0])
        except ValueError:
            raise MalformedFile(f"unknown scheme code {code[0]}") from None
        raw, offset = take(data, offset, 4)
        seg_bits, coeff_count = struct.unpack(">HH", raw)
        delta, offset = unpack_lpint(data, offset)
        params, offset = PrimeField.read_from(data, offset)
        raw, offset = take(data, offset, 4)
        (count,) = struct.unpack(">I", raw)
        width = (params.p_bits + 7) // 8
        points = []
        for _ in range(count):
            xb, offset = take(data, offset, width)
            yb, offset = take(data, offset, width)
            points.append((int.from_bytes(xb, "big"), int.from_bytes(yb, "big")))
        if offset != len(data):
            raise MalformedFile("trailing bytes after the point list")
        return cls(params=params, scheme=scheme, coeff_count=coeff_count,
                   seg_bits=seg_bits, delta=delta, points=points)


def _subseed(seed: int, label: str) -> int:
    # independent rng streams per purpose, so the point layout for a given
    # (seed, locking set) is identical across schemes
    digest = hashlib.sha256(f"{label}:{seed}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _validate_locking_set(locking_set, p, delta):
    for a in locking_set:
        if not isinstance(a, int):
            raise InvalidLockingSet(f"locking set element {a!r} is not an integer")
        if not 0 <= a < p:
            raise InvalidLockingSet(f"locking set element {a} is outside [0, p)")
    ordered = sorted(locking_set)
    for prev, cur in zip(ordered, ordered[1:]):
        if cur - prev <= 2 * delta:
            raise InvalidLockingSet(
                f"locking set elements {prev} and {cur} are within 2*delta = {2 * delta}")


def _split_chunks(value: int, count: int, seg_bits: int) -> list[int]:
    mask = (1 << seg_bits) - 1
    return [(value >> (seg_bits * (count - 1 - i))) & mask for i in range(count)]


def _join_chunks(chunks: list[int], seg_bits: int) -> int:
    value = 0
    for c in chunks:
        if not 0 <= c < 1 << seg_bits:
            raise BadLength(f"chunk does not fit in {seg_bits} bits")
        value = value << seg_bits | c
    return value


def _lock_coefficients(framed, scheme, params, seg_bits, key):
    """Map framed bytes to the coefficient list; returns (coeffs, framed_len)."""
    if scheme is Scheme.CLASSICAL:
        return framing.segment(framed, seg_bits), 0
    if scheme in (Scheme.PER_SEGMENT, Scheme.PARITY):
        segments = framing.segment(framed, seg_bits)
        return [encode_segment(params, s, key, i)
                for i, s in enumerate(segments, start=1)], 0
    beta = encode_whole(params, framed, key)
    count = -(-params.p_bits // seg_bits)
    return _split_chunks(beta, count, seg_bits), len(framed)


def lock(message: bytes, locking_set, scheme: Scheme, params: PrimeField,
         chaff_count: int = 0, delta: int = 0, seed: int = 0,
         seg_bits: int = framing.DEFAULT_SEG_BITS) -> tuple[Vault, KeyFile]:
    """Lock message bytes under the locking set.

    Frames the message, maps it to polynomial coefficients per the
    scheme, evaluates the polynomial on every locking set element, then
    adds chaff_count off-polynomial points and scrambles the order. All
    randomness flows from seed. Returns the vault together with the key
    file that unlocking will need.
    """
    if seg_bits > params.p_bits - 1:
        raise BadLength(
            f"{seg_bits}-bit segments do not embed into a {params.p_bits}-bit field")
    if chaff_count < 0:
        raise ValueError("chaff_count must be non-negative")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    _validate_locking_set(locking_set, params.p, delta)

    key = gen_key(params, _SCHEME_KEY_KIND[scheme], _subseed(seed, "key"))
    framed = framing.frame(message, seg_bits)
    coeffs, framed_len = _lock_coefficients(framed, scheme, params, seg_bits, key)
    if len(locking_set) < len(coeffs):
        raise LockingSetTooSmall(
            f"{len(coeffs)} coefficients need at least that many locking elements, "
            f"got {len(locking_set)}")

    genuine = [(a, eval_poly(params, coeffs, a)) for a in locking_set]
    chaff = _generate_chaff(params, coeffs, sorted(locking_set), chaff_count,
                            delta, random.Random(_subseed(seed, "chaff")))

    points = genuine + chaff
    mask = [True] * len(genuine) + [False] * len(chaff)
    order = list(range(len(points)))
    random.Random(_subseed(seed, "scramble")).shuffle(order)

    vault = Vault(params=params, scheme=scheme, coeff_count=len(coeffs),
                  seg_bits=seg_bits, delta=delta,
                  points=[points[i] for i in order],
                  genuine_mask=[mask[i] for i in order])
    return vault, KeyFile(key=key, framed_len=framed_len)


def _generate_chaff(params, coeffs, taken_xs, count, delta, rng):
    """count points (u, v) with v != P(u), every x gap above 2*delta."""
    gap = 2 * delta
    xs = list(taken_xs)
    chaff = []
    for _ in range(count):
        for _ in range(_CHAFF_ATTEMPTS):
            u = rng.randrange(params.p)
            i = bisect_left(xs, u)
            if i < len(xs) and xs[i] - u <= gap:
                continue
            if i > 0 and u - xs[i - 1] <= gap:
                continue
            break
        else:
            raise ChaffSpaceExhausted(
                f"no room for chaff point {len(chaff) + 1} of {count} at gap > {gap}")
        insort(xs, u)
        on_poly = eval_poly(params, coeffs, u)
        # one draw from a (p - 1)-element range, shifted around P(u):
        # uniform over F_p minus the polynomial value
        v = rng.randrange(params.p - 1)
        if v >= on_poly:
            v += 1
        chaff.append((u, v))
    return chaff


def match_points(vault: Vault, unlocking_set) -> list[tuple[int, int]]:
    """Vault points within delta of any probe, deduplicated, ordered by x.

    Distance is plain integer distance, no wraparound. The 2*delta gap
    between vault x coordinates means each probe can match at most one
    point, so nearest-point selection is unambiguous.
    """
    ordered = sorted(vault.points)
    xs = [x for x, _ in ordered]
    chosen = {}
    for b in unlocking_set:
        i = bisect_left(xs, b)
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(xs):
                d = abs(xs[j] - b)
                if best is None or d < best[0]:
                    best = (d, j)
        if best is not None and best[0] <= vault.delta:
            chosen[xs[best[1]]] = ordered[best[1]]
    return [chosen[x] for x in sorted(chosen)]


def _check_key_kind(scheme, key_file):
    expected = _SCHEME_KEY_KIND[scheme]
    actual = key_file.key.kind if key_file is not None else KIND_NONE
    if actual != expected:
        raise KeyKindMismatch(f"scheme {scheme.name} needs a {expected!r} key, got {actual!r}")


def _decoder(vault, key_file):
    """Build coeffs -> message bytes for this vault and key; raises
    BadLength / MalformedFrame / SignatureMismatch on a wrong candidate."""
    params = vault.params
    seg_bits = vault.seg_bits
    key = key_file.key if key_file is not None else EphemeralKey(KIND_NONE)

    if vault.scheme is Scheme.CLASSICAL or key.kind == KIND_NONE:
        # without key material the coefficients can only be read as raw
        # segments, which is exactly the classical decode
        def decode(coeffs):
            return framing.deframe(framing.reassemble(coeffs, seg_bits))
        return decode

    if vault.scheme in (Scheme.PER_SEGMENT, Scheme.PARITY):
        inverse = [params.inv(params.pow(params.alpha, key_exponent(key, i)))
                   for i in range(1, vault.coeff_count + 1)]

        def decode(coeffs):
            segments = [params.mul(c, m) for c, m in zip(coeffs, inverse)]
            return framing.deframe(framing.reassemble(segments, seg_bits))
        return decode

    inverse = params.inv(params.pow(params.alpha, key.kappa))
    framed_len = key_file.framed_len

    def decode(coeffs):
        beta = _join_chunks(coeffs, seg_bits)
        value = params.mul(beta % params.p, inverse)
        try:
            framed = value.to_bytes(framed_len, "big")
        except OverflowError:
            raise BadLength("decoded value is wider than the recorded frame length") from None
        return framing.deframe(framed)
    return decode


def _subset_search(vault, candidates, key_file, max_subsets):
    """Interpolate candidate subsets in lexicographic x order until one
    decodes; returns (message or None, subsets tried)."""
    n = vault.coeff_count
    decode = _decoder(vault, key_file)
    tried = 0
    for subset in itertools.combinations(candidates, n):
        if tried == max_subsets:
            break
        tried += 1
        coeffs = lagrange_interpolate(vault.params, list(subset), n)
        try:
            return decode(coeffs), tried
        except (BadLength, MalformedFrame, SignatureMismatch):
            continue
    return None, tried


def unlock(vault: Vault, unlocking_set, key_file: KeyFile | None = None,
           max_subsets: int = DEFAULT_MAX_SUBSETS) -> bytes:
    """Recover the message from a vault given an unlocking set and the key.

    Probes are matched against vault points within delta, then subsets
    of the matches are interpolated until the framed digest verifies.
    key_file may be omitted for classical vaults only.
    """
    _check_key_kind(vault.scheme, key_file)
    candidates = match_points(vault, unlocking_set)
    if len(candidates) < vault.coeff_count:
        raise NotEnoughMatches(
            f"{len(candidates)} matched points cannot determine {vault.coeff_count} coefficients")
    message, tried = _subset_search(vault, candidates, key_file, max_subsets)
    if message is None:
        raise DecodeFailed(f"no subset of {tried} tried produced a valid digest")
    return message


def verify_coefficients(recovered: list[int], expected: list[int]) -> bool:
    """Exact equality; field interpolation leaves no tolerance to apply."""
    if len(recovered) != len(expected):
        raise WrongCount(f"coefficient lists differ in length: "
                         f"{len(recovered)} vs {len(expected)}")
    return recovered == expected


def classical_coeff_check(l: int, params: PrimeField) -> int:
    """Coefficients a classical vault needs for an l-bit payload in this field."""
    return framing.required_coeff_count(l, params.p)
