import pytest

from symindex.angles import PI, ZERO, Angle
from symindex.generators import (
    HyperbolicBlock,
    PathSpec,
    Q0Block,
    QSignBlock,
    RotationBlock,
    ZeroForm,
    iterate,
)
from symindex.sampling import conjugated_elliptic, conjugated_hyperbolic, random_spec, random_symmetric
from symindex.splitting import (
    beta_minus_check,
    bott_splitting,
    splitting_numbers,
    splitting_profile,
)


def one(*blocks):
    return PathSpec(tuple(blocks))


@pytest.mark.parametrize("route", ["table", "numeric"])
@pytest.mark.parametrize("block, expected", [
    (ZeroForm(1), (1, 1)),
    (QSignBlock(1, -1), (1, 1)),
    (QSignBlock(1, 1), (0, 0)),
    (Q0Block(3), (1, 1)),
    (Q0Block(5), (1, 1)),
])
def test_anchor_values(route, block, expected):
    assert splitting_numbers(one(block), ZERO, route) == expected


def test_quarter_rotation_profile():
    prof = splitting_profile(one(RotationBlock(Angle.exact(1, 2))))
    assert sorted(a.pi_frac for a in prof.angles()) == [Angle.exact(1, 2).pi_frac, Angle.exact(3, 2).pi_frac]


def test_hyperbolic_profile_is_empty():
    assert splitting_profile(one(HyperbolicBlock(0.5))).entries == {}
    assert splitting_profile(one(HyperbolicBlock(0.5)), "numeric").entries == {}


def test_profiles_add_under_direct_sum():
    a = one(RotationBlock(Angle.exact(1, 3)), QSignBlock(1, -1))
    b = one(Q0Block(3), RotationBlock(Angle.exact(1, 3)))
    for route in ("table", "numeric"):
        merged = splitting_profile(a, route).merged(splitting_profile(b, route))
        assert splitting_profile(a + b, route).to_json() == merged.to_json()


def test_bott_sum_examples():
    ident = splitting_profile(one(ZeroForm(1)))
    assert bott_splitting(ident, 1) == 1
    assert all(bott_splitting(ident, m) == 1 for m in range(1, 13))
    half = one(RotationBlock(PI))
    prof = splitting_profile(half)
    assert bott_splitting(prof, 1) == prof.s_minus(ZERO) == 0
    assert bott_splitting(prof, 2) == prof.s_minus(PI) == splitting_numbers(iterate(half, 2), ZERO, "numeric")[1]


def _every_kind(rng):
    yield from (ZeroForm(1), ZeroForm(2), Q0Block(1), Q0Block(3), Q0Block(5))
    yield from (QSignBlock(d, s) for d in (1, 2, 3) for s in (1, -1))
    yield from (RotationBlock(Angle.exact(p, q)) for p, q in ((1, 2), (1, 1), (2, 3), (5, 3)))
    yield RotationBlock(PI, mult=2)
    yield RotationBlock(Angle(None, 1.0))
    yield RotationBlock(Angle.exact(1, 3), mult=4)
    yield HyperbolicBlock(0.6)
    yield conjugated_elliptic(rng, 2)
    yield conjugated_hyperbolic(rng, 1)
    yield random_symmetric(rng, 2)


def test_table_and_numeric_routes_agree_per_kind(rng):
    for b in _every_kind(rng):
        spec = one(b)
        assert splitting_profile(spec, "table").to_json() == splitting_profile(spec, "numeric").to_json(), b


def test_splitting_bounds_and_symmetry_at_one(rng):
    from symindex.core import nullity
    from symindex.paths import evaluate

    for _ in range(25):
        spec = random_spec(rng)
        M = evaluate(spec, 1.0)
        prof = splitting_profile(spec, "numeric")
        assert prof.s_plus(ZERO) == prof.s_minus(ZERO)
        for a in prof.angles():
            sp, sm = prof.get(a)
            assert 0 <= sp <= nullity(M, a) and 0 <= sm <= nullity(M, a)


@pytest.mark.parametrize("blocks, beta", [((Q0Block(3),), 1), ((QSignBlock(1, 1),), 0), ((QSignBlock(1, -1),), 1)])
def test_beta_minus_check_examples(blocks, beta):
    res = beta_minus_check(PathSpec(blocks))
    assert res.passed
    assert res.beta_minus == res.s_minus_table == res.s_minus_numeric == beta


def test_beta_minus_of_iterates():
    from symindex.generators import invariants_of

    spec = one(Q0Block(3), QSignBlock(1, -1), QSignBlock(2, 1), ZeroForm(1))
    for m in range(1, 13):
        it = iterate(spec, m)
        assert invariants_of(it).beta_minus == splitting_numbers(it, ZERO, "numeric")[1]


def test_unknown_route_is_rejected():
    with pytest.raises(ValueError):
        splitting_profile(one(ZeroForm(1)), "guess")
