import math

import numpy as np
import pytest
import scipy.linalg

from symindex.angles import ZERO, Angle
from symindex.core import (
    J,
    bott_nullity_sum,
    check_symplectic,
    classify_cnu,
    darboux_sum,
    direct_sum,
    has_hyperbolic_part,
    nullity,
    unit_spectrum,
)
from symindex.errors import DimensionError, ValidationError
from symindex.generators import PathSpec, Q0Block, QSignBlock, iterate
from symindex.paths import evaluate
from symindex.sampling import random_spec


def R(theta):
    return np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])


def test_check_symplectic_examples():
    assert check_symplectic(np.eye(4))
    assert check_symplectic(J(2))
    assert not check_symplectic(np.diag([2.0, 1, 1, 1]))


def test_odd_dimension_is_rejected():
    with pytest.raises(DimensionError):
        check_symplectic(np.eye(3))


def test_direct_sum_of_identities():
    assert np.array_equal(direct_sum(np.eye(2), np.eye(2)), np.eye(4))


def test_direct_sum_rejects_non_symplectic():
    with pytest.raises(ValidationError):
        direct_sum(np.eye(2), np.diag([2.0, 1.0]))


def test_direct_sum_places_blocks_on_darboux_pairs():
    A, B = R(0.3), np.diag([2.0, 0.5])
    M = direct_sum(A, B)
    assert check_symplectic(M)
    assert np.allclose(M[np.ix_([0, 2], [0, 2])], A)
    assert np.allclose(M[np.ix_([1, 3], [1, 3])], B)


def test_unit_spectrum_of_quarter_rotation():
    spec = unit_spectrum(R(math.pi / 2))
    assert [(u.angle.pi_frac, u.alg_mult, u.geo_mult) for u in spec] == [
        (Angle.exact(1, 2).pi_frac, 1, 1), (Angle.exact(3, 2).pi_frac, 1, 1)]


def test_unit_spectrum_of_q0_end():
    M = evaluate(PathSpec((Q0Block(3),)), 1.0)
    (u,) = unit_spectrum(M)
    assert u.angle.is_zero and u.alg_mult == 6 and u.geo_mult == 2


def test_hyperbolic_has_empty_unit_spectrum():
    M = np.diag([math.e, 1 / math.e])
    assert unit_spectrum(M) == []
    assert has_hyperbolic_part(M)


def test_nullity_examples():
    assert nullity(np.eye(2), ZERO) == 2
    assert nullity(np.array([[1.0, 1.0], [0.0, 1.0]]), ZERO) == 1
    assert nullity(evaluate(PathSpec((Q0Block(3),)), 1.0), ZERO) == 2


def test_nullity_survives_a_dominant_hyperbolic_block():
    big = np.diag([1e6, 1e-6])
    M = direct_sum(np.eye(2), big)
    assert nullity(M, ZERO) == 2


def test_classify_examples():
    assert classify_cnu(np.diag([2.0, 0.5])).is_cnu
    c = classify_cnu(R(2 * math.pi / 3))
    assert c.kind == "vnu" and c.witness.angle == Angle.exact(2, 3)
    c = classify_cnu(R(1.0))
    assert c.is_cnu and c.undecided == ()
    M = R(1.0)
    assert {nullity(np.linalg.matrix_power(M, m), ZERO) for m in range(1, 51)} == {0}


def test_conjugate_pairs_share_multiplicity():
    M = direct_sum(R(0.7), R(0.7))
    spec = unit_spectrum(M)
    assert len(spec) == 2
    assert spec[0].alg_mult == spec[1].alg_mult == 2
    assert spec[0].angle.conj() == spec[1].angle


def _spec_matrices(rng, count):
    for _ in range(count):
        s = random_spec(rng, max_blocks=3)
        yield s, evaluate(s, 1.0)


def test_spectrum_and_nullity_are_additive(rng):
    for _ in range(25):
        (sa, A), (sb, B) = _spec_matrices(rng, 2)
        M = direct_sum(A, B)
        union = sorted((u.angle.value, u.alg_mult) for u in unit_spectrum(A) + unit_spectrum(B))
        merged: dict = {}
        for v, mult in union:
            key = next((k for k in merged if abs(k - v) < 1e-9), v)
            merged[key] = merged.get(key, 0) + mult
        got = {round(u.angle.value, 9): u.alg_mult for u in unit_spectrum(M)}
        assert got == {round(k, 9): v for k, v in merged.items()}
        for angle in {u.angle for u in unit_spectrum(M)}:
            assert nullity(M, angle) == nullity(A, angle) + nullity(B, angle)


def test_bott_nullity_identity(rng):
    for s, M in _spec_matrices(rng, 30):
        for m in range(1, 25):
            assert nullity(np.linalg.matrix_power(M, m), ZERO) == bott_nullity_sum(M, m), (s, m)


def test_cnu_means_constant_nullity(rng):
    for s, M in _spec_matrices(rng, 30):
        c = classify_cnu(M)
        if c.is_cnu and not c.undecided:
            base = nullity(M, ZERO)
            for m in range(2, 51):
                assert nullity(evaluate(iterate(s, m), 1.0), ZERO) == base


def test_vnu_witness_changes_nullity(rng):
    for s, M in _spec_matrices(rng, 30):
        c = classify_cnu(M)
        if not c.is_cnu:
            k = c.witness.angle.period()
            assert nullity(evaluate(iterate(s, k), 1.0), ZERO) > nullity(M, ZERO)


def test_darboux_sum_matches_permuted_block_diag():
    A, B = R(0.1), np.diag([3.0, 1 / 3])
    M = darboux_sum(A, B)
    P = np.eye(4)[[0, 2, 1, 3]]
    assert np.allclose(P @ M @ P.T, scipy.linalg.block_diag(A, B))


def test_sign_block_kernel_is_one_at_every_d():
    for d in range(1, 7):
        for sign in (1, -1):
            assert nullity(evaluate(PathSpec((QSignBlock(d, sign),)), 1.0), ZERO) == 1
