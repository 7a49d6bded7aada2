"""Prime-order subgroup arithmetic over Z_p*.

The schemes in this package are group-generic: everything is phrased over a
cyclic group G of prime order q with generator alpha, realized here as the
order-q subgroup of Z_p*.  Two interchangeable backends are provided:

* ``TOY_GROUP`` (p=23, q=11, alpha=2) and anything produced by
  :func:`generate_toy_group` -- small enough for exhaustive oracles such as
  :func:`brute_force_dlog`.  Never for real security.
* ``PRODUCTION_GROUP`` -- a fixed 256-bit safe-prime group at the 128-bit
  security level.  Scalars and group elements both encode to 32 octets.

Scalar arithmetic on the production path avoids value-dependent branching at
the Python level; CPython big integers are not constant-time, so this is
hygiene, not a hardened side-channel guarantee.
"""

from __future__ import annotations

import contextvars
import secrets
from dataclasses import dataclass

from .errors import MalformedEncoding, OracleRefused, RngFailure

#: Largest subgroup order the exhaustive discrete-log oracle will search.
DLOG_ORACLE_BOUND = 1 << 24


@dataclass(frozen=True)
class GroupParams:
    """Parameters (p, q, alpha) of the order-q subgroup of Z_p*.

    Immutable and freely shareable.  Validated on construction: q must divide
    p - 1 and alpha must have multiplicative order exactly q.
    """

    p: int
    q: int
    alpha: int

    def __post_init__(self) -> None:
        if self.q < 2 or self.p < 3:
            raise ValueError("group parameters out of range")
        if (self.p - 1) % self.q != 0:
            raise ValueError("q does not divide p - 1")
        if not 1 < self.alpha < self.p:
            raise ValueError("generator out of range")
        if pow(self.alpha, self.q, self.p) != 1:
            raise ValueError("alpha does not have order q modulo p")

    @property
    def scalar_len(self) -> int:
        """Canonical byte length of a Z_q scalar encoding."""
        return (self.q.bit_length() + 7) // 8

    @property
    def element_len(self) -> int:
        """Canonical byte length of a group-element encoding."""
        return (self.p.bit_length() + 7) // 8

    @property
    def is_toy(self) -> bool:
        """True when the group is small enough for exhaustive test oracles."""
        return self.q <= DLOG_ORACLE_BOUND


#: Canonical hand-checkable test group.
TOY_GROUP = GroupParams(p=23, q=11, alpha=2)

#: 256-bit safe-prime group (p = 2q + 1, q a 255-bit prime, alpha = 2^2 a
#: quadratic residue, hence a generator of the order-q subgroup).  Found by a
#: deterministic sieve: smallest prime q >= 2^254 with 2q + 1 prime.
PRODUCTION_GROUP = GroupParams(
    p=0x800000000000000000000000000000000000000000000000000000000002FF7F,
    q=0x4000000000000000000000000000000000000000000000000000000000017FBF,
    alpha=4,
)


# ---------------------------------------------------------------------------
# Operation counting
# ---------------------------------------------------------------------------

@dataclass
class OpCounter:
    """Accumulator for group operations performed inside a counting context.

    Counts are exact: every call to exp/double_exp/group_mul made while the
    counter is installed bumps the corresponding field.  A counter must not be
    shared across concurrent callers without external coordination.
    """

    exp_count: int = 0
    double_exp_count: int = 0
    mul_count: int = 0

    def reset(self) -> None:
        self.exp_count = 0
        self.double_exp_count = 0
        self.mul_count = 0

    def total(self) -> int:
        return self.exp_count + self.double_exp_count + self.mul_count


_active_counter: contextvars.ContextVar[OpCounter | None] = contextvars.ContextVar(
    "semecs_group_op_counter", default=None
)


class count_group_ops:
    """Install an :class:`OpCounter` for the dynamic extent of a ``with`` block.

    >>> with count_group_ops() as ops:
    ...     exp(TOY_GROUP, 2, 4)
    16
    >>> ops.exp_count
    1
    """

    def __init__(self, counter: OpCounter | None = None):
        self.counter = counter if counter is not None else OpCounter()
        self._token = None

    def __enter__(self) -> OpCounter:
        self._token = _active_counter.set(self.counter)
        return self.counter

    def __exit__(self, *exc) -> None:
        _active_counter.reset(self._token)


def _bump(field: str) -> None:
    counter = _active_counter.get()
    if counter is not None:
        setattr(counter, field, getattr(counter, field) + 1)


# ---------------------------------------------------------------------------
# Group and scalar operations
# ---------------------------------------------------------------------------

def exp(params: GroupParams, base: int, k: int) -> int:
    """Single exponentiation base^k mod p."""
    _bump("exp_count")
    return pow(base, k, params.p)


def double_exp(params: GroupParams, big_y: int, e: int, s: int) -> int:
    """Simultaneous double exponentiation Y^e * alpha^s mod p.

    Evaluated in one interleaved square-and-multiply pass over both exponents
    (Shamir's trick) with the product Y*alpha precomputed.  Equal to
    exp(Y, e) * exp(alpha, s) mod p; the interleaving is an evaluation
    strategy, not a contract change.
    """
    _bump("double_exp_count")
    p = params.p
    g = params.alpha
    both = big_y * g % p
    acc = 1
    for i in range(max(e.bit_length(), s.bit_length()) - 1, -1, -1):
        acc = acc * acc % p
        eb = (e >> i) & 1
        sb = (s >> i) & 1
        if eb and sb:
            acc = acc * both % p
        elif eb:
            acc = acc * big_y % p
        elif sb:
            acc = acc * g % p
    return acc


def group_mul(params: GroupParams, a: int, b: int) -> int:
    """Group multiplication a*b mod p."""
    _bump("mul_count")
    return a * b % params.p


def scalar_sub_mul(q: int, r: int, e: int, y: int) -> int:
    """(r - e*y) mod q, reduced into [0, q-1].

    The whole signing-side scalar arithmetic of every scheme here.  No
    value-dependent branches.
    """
    return (r - e * y) % q


def scalar_inv(q: int, x: int) -> int:
    """Multiplicative inverse of x modulo the prime q."""
    return pow(x, -1, q)


def is_group_element(params: GroupParams, value: int) -> bool:
    """Membership test for the order-q subgroup (value in [1, p-1], value^q = 1)."""
    return 1 <= value < params.p and pow(value, params.q, params.p) == 1


def brute_force_dlog(params: GroupParams, big_y: int) -> int:
    """Exhaustive discrete log: the y in [0, q-1] with alpha^y = Y mod p.

    Test oracle only; refuses groups with q above ``DLOG_ORACLE_BOUND``.
    """
    if params.q > DLOG_ORACLE_BOUND:
        raise OracleRefused(
            f"exhaustive search refused: q has {params.q.bit_length()} bits "
            f"(bound is 2^24)"
        )
    acc = 1
    for k in range(params.q):
        if acc == big_y:
            return k
        acc = acc * params.alpha % params.p
    raise ValueError("value is not in the subgroup generated by alpha")


# ---------------------------------------------------------------------------
# Canonical encodings (fixed-length big-endian)
# ---------------------------------------------------------------------------

def encode_scalar(params: GroupParams, x: int) -> bytes:
    """Encode a scalar as exactly scalar_len big-endian octets."""
    if not 0 <= x < params.q:
        raise ValueError(f"scalar {x} outside [0, q-1]")
    return x.to_bytes(params.scalar_len, "big")


def decode_scalar(params: GroupParams, data: bytes) -> int:
    """Inverse of :func:`encode_scalar`; rejects wrong length or value >= q."""
    if len(data) != params.scalar_len:
        raise MalformedEncoding(
            f"scalar encoding must be {params.scalar_len} octets, got {len(data)}"
        )
    value = int.from_bytes(data, "big")
    if value >= params.q:
        raise MalformedEncoding("scalar encoding is not canonical (value >= q)")
    return value


def encode_element(params: GroupParams, value: int) -> bytes:
    """Encode a group element as exactly element_len big-endian octets."""
    if not 1 <= value < params.p:
        raise ValueError(f"element {value} outside [1, p-1]")
    return value.to_bytes(params.element_len, "big")


def decode_element(params: GroupParams, data: bytes) -> int:
    """Inverse of :func:`encode_element`; enforces subgroup membership."""
    if len(data) != params.element_len:
        raise MalformedEncoding(
            f"element encoding must be {params.element_len} octets, got {len(data)}"
        )
    value = int.from_bytes(data, "big")
    if not is_group_element(params, value):
        raise MalformedEncoding("octets do not decode to a subgroup element")
    return value


# ---------------------------------------------------------------------------
# Randomness
# ---------------------------------------------------------------------------

_SYSTEM_RNG = secrets.SystemRandom()


def random_scalar(params: GroupParams, rng=None) -> int:
    """Uniform scalar in Z_q* (i.e. [1, q-1]) from the given randomness source.

    ``rng`` is any object with the ``random.Random`` interface; ``None`` uses
    the operating-system CSPRNG.
    """
    source = rng if rng is not None else _SYSTEM_RNG
    try:
        return source.randrange(1, params.q)
    except Exception as exc:  # noqa: BLE001 - caller-supplied source
        raise RngFailure("randomness source failed while drawing a scalar") from exc


def random_octets(n: int, rng=None) -> bytes:
    """n uniform octets from the given randomness source."""
    source = rng if rng is not None else _SYSTEM_RNG
    try:
        return source.getrandbits(8 * n).to_bytes(n, "big") if n else b""
    except Exception as exc:  # noqa: BLE001
        raise RngFailure("randomness source failed while drawing octets") from exc


# ---------------------------------------------------------------------------
# Toy-group generation (safe-prime sieve)
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # Deterministic Miller-Rabin for n < 3.3 * 10^24; ample for toy sieving.
    if n < 2:
        return False
    for sp in _MR_BASES:
        if n % sp == 0:
            return n == sp
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def generate_toy_group(min_q: int) -> GroupParams:
    """Smallest safe-prime Schnorr group with subgroup order q >= min_q.

    Sieves for the first prime q >= min_q with p = 2q + 1 also prime, and uses
    alpha = 4 (a quadratic residue, hence of order q).  Deterministic, so test
    suites get stable parameters.  Bounded by the dlog-oracle limit to keep
    these groups firmly in test territory.
    """
    if min_q > DLOG_ORACLE_BOUND:
        raise ValueError("toy groups must keep q within the exhaustive-search bound")
    q = max(3, min_q) | 1
    while True:
        if _is_prime(q) and _is_prime(2 * q + 1):
            if q > DLOG_ORACLE_BOUND:
                raise ValueError("no safe prime within the toy bound")
            return GroupParams(p=2 * q + 1, q=q, alpha=4)
        q += 2
