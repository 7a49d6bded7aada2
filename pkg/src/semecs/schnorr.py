"""Classical Schnorr signatures over an abstract prime-order group.

The ancestor of the multiple-time schemes in this package; kept as a
correctness cross-check and benchmark baseline.  The signature is the pair
(s, e) -- the challenge travels, not the commitment R.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedEncoding
from .fdh import fdh_pair
from .group import (
    GroupParams,
    double_exp,
    encode_element,
    encode_scalar,
    decode_scalar,
    exp,
    random_scalar,
    scalar_sub_mul,
)

ENVELOPE_VERSION = 1


@dataclass(frozen=True)
class SchnorrKeyPair:
    params: GroupParams
    y: int  # private
    Y: int  # public, alpha^y mod p

    @classmethod
    def from_private(cls, params: GroupParams, y: int) -> "SchnorrKeyPair":
        """Deterministic constructor from the private scalar (test seam)."""
        if not 1 <= y < params.q:
            raise ValueError("private key must lie in [1, q-1]")
        return cls(params=params, y=y, Y=exp(params, params.alpha, y))


@dataclass(frozen=True)
class SchnorrSignature:
    s: int
    e: int


def schnorr_keygen(params: GroupParams, rng=None) -> SchnorrKeyPair:
    """Draw y uniformly from Z_q* and publish Y = alpha^y mod p."""
    return SchnorrKeyPair.from_private(params, random_scalar(params, rng))


def schnorr_sign(
    kp: SchnorrKeyPair, message: bytes, rng=None, nonce: int | None = None
) -> SchnorrSignature:
    """Sign: R = alpha^r, e = H0(M || R), s = (r - e*y) mod q.

    ``nonce`` forces the ephemeral r for reproducible transcripts; production
    callers leave it None and supply (or default) a randomness source.
    """
    params = kp.params
    r = nonce if nonce is not None else random_scalar(params, rng)
    if not 1 <= r < params.q:
        raise ValueError("nonce must lie in [1, q-1]")
    h0, _ = fdh_pair(params.q)
    big_r = exp(params, params.alpha, r)
    e = h0.eval(message + encode_element(params, big_r))
    s = scalar_sub_mul(params.q, r, e, kp.y)
    return SchnorrSignature(s=s, e=e)


def schnorr_verify(
    params: GroupParams, big_y: int, message: bytes, sig: SchnorrSignature
) -> bool:
    """Accept iff e = H0(M || Y^e * alpha^s)."""
    if not (0 <= sig.s < params.q and 0 <= sig.e < params.q):
        return False
    h0, _ = fdh_pair(params.q)
    big_r = double_exp(params, big_y, sig.e, sig.s)
    return h0.eval(message + encode_element(params, big_r)) == sig.e


# --- wire format -----------------------------------------------------------

def encode_signed_message(
    params: GroupParams, sig: SchnorrSignature, message: bytes
) -> bytes:
    """version || s || e || message."""
    return (
        bytes([ENVELOPE_VERSION])
        + encode_scalar(params, sig.s)
        + encode_scalar(params, sig.e)
        + message
    )


def decode_signed_message(
    params: GroupParams, data: bytes
) -> tuple[SchnorrSignature, bytes]:
    L = params.scalar_len
    if len(data) < 1 + 2 * L:
        raise MalformedEncoding("signed message too short")
    if data[0] != ENVELOPE_VERSION:
        raise MalformedEncoding(f"unknown envelope version {data[0]}")
    s = decode_scalar(params, data[1 : 1 + L])
    e = decode_scalar(params, data[1 + L : 1 + 2 * L])
    return SchnorrSignature(s=s, e=e), data[1 + 2 * L :]
