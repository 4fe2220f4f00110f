"""Identity binding: pack a 128-bit secret exponent and a 64-bit identity,
protected by a CRC-16, into 13 GF(2^16) polynomial coefficients.

Layout of the 208-bit record, most significant first:

    kappa (128) | id (64) | crc (16)

where crc is the CRC-16 of the id alone and the decoder checks that the
80-bit id-plus-crc tail divides cleanly by the generator. Chunked into
16-bit words, the most significant word becomes coefficient c_12 and the
least significant (the crc itself) becomes c_0. Any corruption of the
tail region is caught by the division check; corruption confined to the
kappa region decodes to a wrong exponent but still reports Accept, which
is exactly the binding the scheme promises: the identity, not the
secret, is what cannot be swapped.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ._wire import take
from .errors import (
    ChaffSpaceExhausted,
    LockingSetTooSmall,
    MalformedFile,
    NotEnoughMatches,
    WrongCount,
)
from .field import GF16_REDUCTION_POLY, binary_field
from .polynomial import crc16_remainder, eval_poly, lagrange_interpolate

# X^16 + X^15 + X^2 + 1
CRC16_GENERATOR = 0x18005

COEFF_COUNT = 13
KAPPA_BITS = 128
ID_BITS = 64
CRC_BITS = 16
IDC_BITS = ID_BITS + CRC_BITS          # the checked tail
RECORD_BITS = KAPPA_BITS + IDC_BITS    # 208 = 13 * 16

_MAGIC = b"DLFI"
_VERSION = 1


@dataclass(frozen=True)
class IdentityRecord:
    """One kappa/id pair with its derived checksum fields."""

    kappa128: int
    id64: int
    crc16: int
    idc: int        # id || crc, 80 bits
    kappa_id: int   # kappa || id || crc, 208 bits


def make_identity_record(kappa128: int, id64: int) -> IdentityRecord:
    """Compute the checksum and assemble the full 208-bit record."""
    if not 0 <= kappa128 < 1 << KAPPA_BITS:
        raise ValueError("kappa must fit in 128 bits")
    if not 0 <= id64 < 1 << ID_BITS:
        raise ValueError("id must fit in 64 bits")
    crc = crc16_remainder(id64, ID_BITS, CRC16_GENERATOR)
    idc = id64 << CRC_BITS | crc
    return IdentityRecord(kappa128=kappa128, id64=id64, crc16=crc, idc=idc,
                          kappa_id=kappa128 << IDC_BITS | idc)


def encode_identity(kappa128: int, id64: int) -> list[int]:
    """The 13 coefficients carrying the record; coeffs[i] is c_i."""
    record = make_identity_record(kappa128, id64)
    return [(record.kappa_id >> (16 * i)) & 0xFFFF for i in range(COEFF_COUNT)]


def decode_identity(coeffs: list[int]) -> tuple[int, int] | None:
    """Recover (kappa128, id64) from coefficients, or None on checksum failure.

    Rejection is a value, not an exception: a vault unlocked with wrong
    points routinely lands here, and the caller decides what that means.
    """
    if len(coeffs) != COEFF_COUNT:
        raise WrongCount(f"need exactly {COEFF_COUNT} coefficients, got {len(coeffs)}")
    record = 0
    for i, c in enumerate(coeffs):
        if not 0 <= c < 1 << 16:
            raise ValueError(f"coefficient {i} does not fit in 16 bits")
        record |= c << (16 * i)
    idc = record & ((1 << IDC_BITS) - 1)
    if crc16_remainder(idc, IDC_BITS, CRC16_GENERATOR) != 0:
        return None
    return record >> IDC_BITS, idc >> CRC_BITS


def identity_to_bytes(coeffs: list[int], reduction: int = GF16_REDUCTION_POLY) -> bytes:
    """Identity coefficient file: magic, version, reduction polynomial, 13 u16."""
    if len(coeffs) != COEFF_COUNT:
        raise WrongCount(f"need exactly {COEFF_COUNT} coefficients, got {len(coeffs)}")
    out = bytearray(_MAGIC)
    out.append(_VERSION)
    out += reduction.to_bytes(4, "big")
    for c in coeffs:
        out += c.to_bytes(2, "big")
    return bytes(out)


def identity_from_bytes(data: bytes) -> tuple[list[int], int]:
    """Parse an identity file, returning (coefficients, reduction polynomial)."""
    magic, offset = take(data, 0, 4)
    if magic != _MAGIC:
        raise MalformedFile("not an identity file")
    version, offset = take(data, offset, 1)
    if version[0] != _VERSION:
        raise MalformedFile(f"unsupported identity file version {version[0]}")
    raw, offset = take(data, offset, 4)
    reduction = int.from_bytes(raw, "big")
    coeffs = []
    for _ in range(COEFF_COUNT):
        raw, offset = take(data, offset, 2)
        coeffs.append(int.from_bytes(raw, "big"))
    if offset != len(data):
        raise MalformedFile("trailing bytes after the coefficients")
    return coeffs, reduction


def identity_vault_roundtrip(record: IdentityRecord, locking_set, chaff_count: int,
                             seed: int, unlocking_set=None) -> bool:
    """Embed the record in an exact-match GF(2^16) vault and decode it back.

    Genuine points evaluate the coefficient polynomial on the locking
    set; chaff lands on distinct x off the polynomial. Matching is exact
    (no tolerance) since biometric-style noise does not apply to the
    16-bit identity field. True only when the decoder accepts and
    returns the original kappa and id.
    """
    gf = binary_field()
    if len(locking_set) < COEFF_COUNT:
        raise LockingSetTooSmall(
            f"{COEFF_COUNT} coefficients need at least that many locking elements")
    xs = set()
    for a in locking_set:
        if not 0 <= a < gf.size:
            raise ValueError(f"locking element {a} is outside GF(2^16)")
        xs.add(a)
    if len(xs) != len(locking_set):
        raise ValueError("locking set elements must be distinct")

    coeffs = encode_identity(record.kappa128, record.id64)
    points = [(a, eval_poly(gf, coeffs, a)) for a in locking_set]
    rng = random.Random(seed)
    for k in range(chaff_count):
        for _ in range(1000):
            u = rng.randrange(gf.size)
            if u not in xs:
                break
        else:
            raise ChaffSpaceExhausted(f"no free x left for chaff point {k + 1}")
        xs.add(u)
        on_poly = eval_poly(gf, coeffs, u)
        v = rng.randrange(gf.size - 1)
        if v >= on_poly:
            v += 1
        points.append((u, v))
    rng.shuffle(points)

    probes = locking_set if unlocking_set is None else unlocking_set
    by_x = {x: (x, y) for x, y in points}
    matched = sorted(by_x[b] for b in set(probes) if b in by_x)
    if len(matched) < COEFF_COUNT:
        raise NotEnoughMatches(
            f"{len(matched)} exact matches cannot determine {COEFF_COUNT} coefficients")
    recovered = lagrange_interpolate(gf, matched[:COEFF_COUNT], COEFF_COUNT)
    decoded = decode_identity(recovered)
    return decoded == (record.kappa128, record.id64)
