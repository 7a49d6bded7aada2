"""ETA: hash-chained K-time signatures with per-signature randomness.

The preliminary multiple-time scheme.  Ephemeral scalars form a forward
hash chain r_{j+1} = H0(r_j); the public key commits to each chain point via
a token v_j = H1(R_j) with R_j = alpha^{r_j}.  Each signature carries a fresh
128-bit randomizer x_j in place of the commitment, so the scheme needs an
online RNG -- the limitation its successor removes.

Hash assignment (the source algorithm uses one untyped H): the chain step and
the message hash use H0, verification tokens use H1.  Golden vectors pin this.
"""

from __future__ import annotations

import hmac
from dataclasses import dataclass

from .errors import KeyExhausted, MalformedEncoding
from .fdh import fdh_pair
from .group import (
    GroupParams,
    double_exp,
    encode_element,
    encode_scalar,
    decode_scalar,
    exp,
    random_octets,
    random_scalar,
    scalar_sub_mul,
)

X_LEN = 16  # kappa = 128 bits of per-signature randomness
INDEX_LEN = 4  # wire width of the index j
ENVELOPE_VERSION = 1


@dataclass
class EtaSigningState:
    """Mutable signer state: (y, current chain value, counter).

    Single-writer: sign() mutates in place and must be externally serialized.
    Previous chain values are dropped on advance and are not recoverable from
    the fields kept here.
    """

    params: GroupParams
    y: int
    r_cur: int
    j: int
    K: int


@dataclass(frozen=True)
class EtaPublicKey:
    params: GroupParams
    Y: int
    tokens: tuple[bytes, ...]  # v_j = H1(R_j), one scalar_len digest per index
    K: int


@dataclass(frozen=True)
class EtaSignature:
    s: int
    x: bytes
    j: int


def _index_octets(j: int) -> bytes:
    # j is hashed as 8 octets big-endian for unambiguous concatenation
    return j.to_bytes(8, "big")


def eta_keygen_from_secrets(
    params: GroupParams, K: int, y: int, r0: int
) -> tuple[EtaSigningState, EtaPublicKey]:
    """Deterministic key generation from (y, r0) -- the test seam."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if not 1 <= y < params.q or not 1 <= r0 < params.q:
        raise ValueError("secrets must lie in [1, q-1]")
    h0, h1 = fdh_pair(params.q)
    big_y = exp(params, params.alpha, y)
    tokens = []
    r = r0
    for _ in range(K):
        big_r = exp(params, params.alpha, r)
        tokens.append(h1.eval_encoded(encode_element(params, big_r)))
        r = h0.eval(encode_scalar(params, r))  # chain step
    state = EtaSigningState(params=params, y=y, r_cur=r0, j=0, K=K)
    pk = EtaPublicKey(params=params, Y=big_y, tokens=tuple(tokens), K=K)
    return state, pk


def eta_keygen(
    params: GroupParams, K: int, rng=None
) -> tuple[EtaSigningState, EtaPublicKey]:
    """K-time keypair with uniform y and chain seed r0."""
    return eta_keygen_from_secrets(
        params, K, random_scalar(params, rng), random_scalar(params, rng)
    )


def eta_sign(
    state: EtaSigningState, message: bytes, rng=None, x: bytes | None = None
) -> EtaSignature:
    """Sign with the current chain value, then advance the chain.

    e_j = H0(M || j || x_j), s_j = (r_j - e_j*y) mod q.  The state moves to
    r_{j+1} = H0(r_j) and the old chain value is dropped before returning.
    ``x`` forces the randomizer for reproducible transcripts.
    """
    if state.j >= state.K:
        raise KeyExhausted(f"all {state.K} indices consumed")
    params = state.params
    if x is None:
        x = random_octets(X_LEN, rng)
    if len(x) != X_LEN:
        raise ValueError(f"x must be {X_LEN} octets")
    h0, _ = fdh_pair(params.q)
    e = h0.eval(message + _index_octets(state.j) + x)
    s = scalar_sub_mul(params.q, state.r_cur, e, state.y)
    sig = EtaSignature(s=s, x=x, j=state.j)
    state.r_cur = h0.eval(encode_scalar(params, state.r_cur))
    state.j += 1
    return sig


def eta_verify(pk: EtaPublicKey, message: bytes, sig: EtaSignature) -> bool:
    """Recompute R'_j = Y^{H0(M||j||x)} * alpha^{s} and check v_j = H1(R'_j)."""
    if sig.j < 0 or sig.j >= pk.K:
        return False
    if len(sig.x) != X_LEN or not 0 <= sig.s < pk.params.q:
        return False
    params = pk.params
    h0, h1 = fdh_pair(params.q)
    e = h0.eval(message + _index_octets(sig.j) + sig.x)
    big_r = double_exp(params, pk.Y, e, sig.s)
    candidate = h1.eval_encoded(encode_element(params, big_r))
    return hmac.compare_digest(candidate, pk.tokens[sig.j])


# --- wire format -----------------------------------------------------------

def encode_signed_message(
    params: GroupParams, sig: EtaSignature, message: bytes
) -> bytes:
    """version || j || s || x || message."""
    return (
        bytes([ENVELOPE_VERSION])
        + sig.j.to_bytes(INDEX_LEN, "big")
        + encode_scalar(params, sig.s)
        + sig.x
        + message
    )


def decode_signed_message(
    params: GroupParams, data: bytes
) -> tuple[EtaSignature, bytes]:
    L = params.scalar_len
    head = 1 + INDEX_LEN + L + X_LEN
    if len(data) < head:
        raise MalformedEncoding("signed message too short")
    if data[0] != ENVELOPE_VERSION:
        raise MalformedEncoding(f"unknown envelope version {data[0]}")
    j = int.from_bytes(data[1 : 1 + INDEX_LEN], "big")
    s = decode_scalar(params, data[1 + INDEX_LEN : 1 + INDEX_LEN + L])
    x = data[1 + INDEX_LEN + L : head]
    return EtaSignature(s=s, x=x, j=j), data[head:]
