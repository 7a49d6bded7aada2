"""Full-domain hash functions H0 and H1 onto Z_q*.

Two domain-separated hashes are required by every scheme in this package.
Construction (expand-then-reduce): digest the one-octet domain-separation
prefix (0x00 for H0, 0x01 for H1) followed by the message into
2*bitlen(q) pseudorandom bits via counter-mode chaining of a 256-bit digest,
then reduce mod q.  The double-width expansion keeps the modular bias below
2^-bitlen(q).  A zero residue (never observed in practice) is handled by
appending octet 0xFF and re-deriving, so outputs always land in [1, q-1].

Default digest is BLAKE2s; the algorithm identifier is an explicit parameter
so serialized test vectors pin it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True)
class Fdh:
    """One full-domain hash H_i : {0,1}* -> Z_q* for i = hash_id."""

    q: int
    hash_id: int
    algorithm: str = "blake2s"

    def __post_init__(self) -> None:
        if self.hash_id not in (0, 1):
            raise ValueError("hash_id selects H0 or H1")
        if self.q < 2:
            raise ValueError("q must be a prime >= 2")
        hashlib.new(self.algorithm)  # fail fast on unknown digests

    @property
    def scalar_len(self) -> int:
        return (self.q.bit_length() + 7) // 8

    def eval(self, message: bytes) -> int:
        """Deterministically hash an octet string into [1, q-1]."""
        digest = _digest_fn(self.algorithm)
        prefix = bytes([self.hash_id])
        nbits = 2 * self.q.bit_length()
        nbytes = (nbits + 7) // 8
        data = bytes(message)
        while True:
            stream = b""
            block = 0
            while len(stream) < nbytes:
                stream += digest(prefix + data + block.to_bytes(4, "big")).digest()
                block += 1
            value = int.from_bytes(stream[:nbytes], "big") >> (8 * nbytes - nbits)
            value %= self.q
            if value:
                return value
            data += b"\xff"  # zero residue: re-derive

    def eval_encoded(self, message: bytes) -> bytes:
        """Like :meth:`eval` but returns the canonical scalar_len encoding."""
        return self.eval(message).to_bytes(self.scalar_len, "big")


@lru_cache(maxsize=32)
def _digest_fn(algorithm: str):
    fn = getattr(hashlib, algorithm, None)
    if fn is not None:
        return fn
    return lambda data: hashlib.new(algorithm, data)


@lru_cache(maxsize=32)
def fdh_pair(q: int, algorithm: str = "blake2s") -> tuple[Fdh, Fdh]:
    """The (H0, H1) pair for a given group order."""
    return Fdh(q, 0, algorithm), Fdh(q, 1, algorithm)
