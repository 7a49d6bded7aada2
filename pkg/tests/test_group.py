import pytest

from semecs.errors import MalformedEncoding, OracleRefused, RngFailure
from semecs.group import (
    DLOG_ORACLE_BOUND,
    PRODUCTION_GROUP,
    TOY_GROUP,
    GroupParams,
    OpCounter,
    brute_force_dlog,
    count_group_ops,
    decode_element,
    decode_scalar,
    double_exp,
    encode_element,
    encode_scalar,
    exp,
    generate_toy_group,
    group_mul,
    random_scalar,
    scalar_sub_mul,
)


# --- parameters -------------------------------------------------------------

def test_toy_group_is_the_canonical_vector():
    assert (TOY_GROUP.p, TOY_GROUP.q, TOY_GROUP.alpha) == (23, 11, 2)
    assert TOY_GROUP.scalar_len == 1 and TOY_GROUP.element_len == 1
    assert TOY_GROUP.is_toy


def test_production_group_shape():
    g = PRODUCTION_GROUP
    assert g.p == 2 * g.q + 1
    assert g.q.bit_length() == 255 and g.p.bit_length() == 256
    assert g.scalar_len == 32 and g.element_len == 32
    assert pow(g.alpha, g.q, g.p) == 1 and g.alpha != 1
    assert not g.is_toy


@pytest.mark.parametrize(
    "p,q,alpha",
    [
        (23, 7, 2),  # q does not divide p-1
        (23, 11, 5),  # 5 is not in the order-11 subgroup
        (23, 11, 1),  # trivial generator
    ],
)
def test_invalid_params_rejected(p, q, alpha):
    with pytest.raises(ValueError):
        GroupParams(p=p, q=q, alpha=alpha)


def test_generate_toy_group_is_a_deterministic_safe_prime_sieve():
    g1 = generate_toy_group(1 << 19)
    g2 = generate_toy_group(1 << 19)
    assert g1 == g2
    assert g1.p == 2 * g1.q + 1
    assert g1.q >= 1 << 19
    assert pow(g1.alpha, g1.q, g1.p) == 1
    assert generate_toy_group(11) == GroupParams(p=23, q=11, alpha=4)
    with pytest.raises(ValueError):
        generate_toy_group(DLOG_ORACLE_BOUND + 1)


# --- exponentiation ---------------------------------------------------------

def test_exp_toy_vectors():
    assert exp(TOY_GROUP, 2, 4) == 16
    assert exp(TOY_GROUP, 2, 0) == 1
    assert exp(TOY_GROUP, 2, 9) == 6  # 512 mod 23


def test_double_exp_toy_vectors():
    assert double_exp(TOY_GROUP, 8, 2, 9) == 16  # 18 * 6 mod 23
    assert double_exp(TOY_GROUP, 8, 0, 0) == 1
    assert double_exp(TOY_GROUP, 8, 1, 0) == 8


@pytest.mark.parametrize("params", [TOY_GROUP, PRODUCTION_GROUP], ids=["toy", "prod"])
def test_double_exp_matches_product_of_single_exps(params, rng):
    # oracle: two independent pow() calls multiplied together
    for _ in range(1000):
        y = pow(params.alpha, rng.randrange(1, params.q), params.p)
        e = rng.randrange(0, params.q)
        s = rng.randrange(0, params.q)
        expected = pow(y, e, params.p) * pow(params.alpha, s, params.p) % params.p
        assert double_exp(params, y, e, s) == expected


def test_exp_homomorphism_on_toy_group(rng):
    g = TOY_GROUP
    for _ in range(300):
        k1 = rng.randrange(0, g.q)
        k2 = rng.randrange(0, g.q)
        lhs = exp(g, g.alpha, k1) * exp(g, g.alpha, k2) % g.p
        assert lhs == exp(g, g.alpha, (k1 + k2) % g.q)


def test_outputs_stay_in_subgroup(rng):
    for k in range(TOY_GROUP.q):  # exhaustive on the toy group
        v = exp(TOY_GROUP, TOY_GROUP.alpha, k)
        assert pow(v, TOY_GROUP.q, TOY_GROUP.p) == 1
    g = PRODUCTION_GROUP
    for _ in range(20):  # sampled on the production group
        v = double_exp(
            g,
            pow(g.alpha, rng.randrange(1, g.q), g.p),
            rng.randrange(0, g.q),
            rng.randrange(0, g.q),
        )
        assert pow(v, g.q, g.p) == 1


def test_scalar_sub_mul_vectors():
    assert scalar_sub_mul(11, 4, 2, 3) == 9
    assert scalar_sub_mul(11, 7, 0, 3) == 7
    assert scalar_sub_mul(11, 4, 5, 3) == 0  # 4 - 15 = -11 = 0 mod 11


# --- dlog oracle ------------------------------------------------------------

def test_brute_force_dlog_vectors():
    assert brute_force_dlog(TOY_GROUP, 8) == 3
    assert brute_force_dlog(TOY_GROUP, 1) == 0
    assert brute_force_dlog(TOY_GROUP, 16) == 4


def test_brute_force_dlog_round_trips_every_exponent():
    for k in range(TOY_GROUP.q):
        assert brute_force_dlog(TOY_GROUP, exp(TOY_GROUP, 2, k)) == k


def test_brute_force_dlog_refuses_production_group():
    with pytest.raises(OracleRefused):
        brute_force_dlog(PRODUCTION_GROUP, PRODUCTION_GROUP.alpha)


def test_brute_force_dlog_rejects_non_members():
    with pytest.raises(ValueError):
        brute_force_dlog(TOY_GROUP, 5)  # 5 is not a power of 2 mod 23


# --- op counting ------------------------------------------------------------

def test_op_counter_is_exact(rng):
    with count_group_ops() as ops:
        n_exp = rng.randrange(1, 20)
        n_dexp = rng.randrange(1, 20)
        n_mul = rng.randrange(1, 20)
        for _ in range(n_exp):
            exp(TOY_GROUP, 2, 3)
        for _ in range(n_dexp):
            double_exp(TOY_GROUP, 8, 2, 9)
        for _ in range(n_mul):
            group_mul(TOY_GROUP, 8, 4)
    assert (ops.exp_count, ops.double_exp_count, ops.mul_count) == (n_exp, n_dexp, n_mul)
    assert ops.total() == n_exp + n_dexp + n_mul


def test_op_counter_reset_and_scoping():
    outer = OpCounter()
    with count_group_ops(outer):
        exp(TOY_GROUP, 2, 3)
        with count_group_ops() as inner:
            exp(TOY_GROUP, 2, 3)
        assert inner.exp_count == 1
    assert outer.exp_count == 1  # inner context shadowed the outer counter
    exp(TOY_GROUP, 2, 3)  # uncounted outside any context
    assert outer.exp_count == 1
    outer.reset()
    assert outer.total() == 0


# --- encodings --------------------------------------------------------------

def test_scalar_encoding_round_trip(rng):
    for params in (TOY_GROUP, PRODUCTION_GROUP, generate_toy_group(1 << 19)):
        for _ in range(200):
            x = rng.randrange(0, params.q)
            blob = encode_scalar(params, x)
            assert len(blob) == params.scalar_len
            assert decode_scalar(params, blob) == x


def test_scalar_encoding_vectors():
    assert encode_scalar(TOY_GROUP, 9) == b"\x09"
    assert encode_scalar(PRODUCTION_GROUP, 0) == b"\x00" * 32
    with pytest.raises(MalformedEncoding):
        decode_scalar(TOY_GROUP, b"\x0b")  # value == q is non-canonical
    with pytest.raises(MalformedEncoding):
        decode_scalar(TOY_GROUP, b"\x01\x02")  # wrong length
    with pytest.raises(ValueError):
        encode_scalar(TOY_GROUP, 11)


def test_element_encoding_round_trip_and_membership():
    for k in range(TOY_GROUP.q):
        v = exp(TOY_GROUP, 2, k)
        assert decode_element(TOY_GROUP, encode_element(TOY_GROUP, v)) == v
    with pytest.raises(MalformedEncoding):
        decode_element(TOY_GROUP, b"\x05")  # in Z_p* but outside the subgroup
    with pytest.raises(MalformedEncoding):
        decode_element(TOY_GROUP, b"\x00")
    with pytest.raises(MalformedEncoding):
        decode_element(TOY_GROUP, b"\x01\x02")


# --- randomness -------------------------------------------------------------

def test_random_scalar_range(rng):
    seen = {random_scalar(TOY_GROUP, rng) for _ in range(200)}
    assert seen <= set(range(1, 11))
    assert len(seen) > 5  # actually random, not constant
    assert 1 <= random_scalar(PRODUCTION_GROUP) < PRODUCTION_GROUP.q  # system rng


def test_random_scalar_wraps_broken_rng():
    class Broken:
        def randrange(self, *a):
            raise RuntimeError("no entropy")

    with pytest.raises(RngFailure):
        random_scalar(TOY_GROUP, Broken())
