import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from conftest import random_so_plus
from spincover.errors import InvariantError, MembershipError
from spincover.indefinite_group import (
    GivensFactor,
    Signature,
    check_so_plus,
    givens_decompose,
    givens_embed,
    givens_log,
    givens_product,
    is_in_lie_algebra,
    is_in_so_plus,
    leading_minors,
    metric,
    normalize_angle,
    polar_decompose_n1,
    random_givens_factors,
)

SIGS = [(2, 1), (2, 2), (3, 2), (4, 1), (1, 1), (3, 3), (1, 4), (5, 0)]


def test_signature_basics():
    s = Signature.coerce("3,2")
    assert s == Signature(3, 2) and s.n == 5
    assert Signature.coerce((2, 1)) == Signature(2, 1)
    assert np.array_equal(metric((2, 1)), np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(InvariantError):
        Signature(0, 0)
    with pytest.raises(InvariantError):
        Signature(-1, 2)


def test_givens_factor_conventions():
    R = givens_embed(GivensFactor.R(1, 2, 0.3), (2, 0))
    assert np.allclose(R, [[math.cos(0.3), -math.sin(0.3)], [math.sin(0.3), math.cos(0.3)]])
    assert np.allclose(givens_embed(GivensFactor.R(2, 1, -0.3), (2, 0)), R)
    H = givens_embed(GivensFactor.H(1, 3, 0.7), (2, 1))
    assert np.isclose(H[0, 0], math.cosh(0.7)) and np.isclose(H[0, 2], math.sinh(0.7))
    assert np.isclose(H[2, 0], math.sinh(0.7)) and H[1, 1] == 1.0
    assert GivensFactor.R(3, 1, 0.5).canonical() == GivensFactor.R(1, 3, -0.5)
    assert GivensFactor.H(1, 3, 0.5).label == "H1,3"


@pytest.mark.parametrize(
    "f, sig",
    [
        (GivensFactor.H(1, 2, 0.1), (2, 1)),
        (GivensFactor.R(1, 3, 0.1), (2, 1)),
        (GivensFactor.R(1, 4, 0.1), (2, 1)),
    ],
)
def test_invalid_factors(f, sig):
    with pytest.raises(InvariantError):
        givens_embed(f, sig)


@pytest.mark.parametrize("sig", SIGS)
def test_givens_factors_lie_in_group(sig, rng):
    for f in random_givens_factors(sig, rng, count=20, beta_max=3.0):
        G = givens_embed(f, sig)
        assert is_in_so_plus(G, sig)
        L = givens_log(f, sig)
        assert is_in_lie_algebra(L, sig)
        assert np.allclose(expm(L), G, atol=1e-10 * np.abs(G).max())
        assert np.allclose(givens_embed(f.inverse(), sig) @ G, np.eye(Signature.coerce(sig).n), atol=1e-10 * np.abs(G).max() ** 2)


def test_membership_rejections():
    sig = (2, 1)
    assert not is_in_so_plus(np.diag([1.0, -1.0, -1.0]), sig)  # wrong component
    assert not is_in_so_plus(np.diag([1.0, 1.0, -1.0]), sig)  # det -1
    assert not is_in_so_plus(2 * np.eye(3), sig)
    assert not is_in_so_plus(np.eye(2), sig)
    with pytest.raises(MembershipError):
        check_so_plus(np.diag([-1.0, 1.0, -1.0]), sig)
    assert is_in_so_plus(np.diag([-1.0, -1.0, 1.0]), sig)


@pytest.mark.parametrize("sig", SIGS)
def test_decompose_reconstructs(sig, rng):
    for _ in range(40):
        X = givens_product(random_givens_factors(sig, rng, beta_max=1.0), sig)
        fs = givens_decompose(X, sig)
        for f in fs:
            f.validate(sig)
        assert np.allclose(givens_product(fs, sig), X, atol=1e-11 * np.abs(X).max() ** 2)


@pytest.mark.parametrize("sig", [(2, 1), (3, 2), (4, 1)])
def test_decompose_exponential_targets(sig, rng):
    for _ in range(20):
        X = random_so_plus(sig, rng, 0.7)
        assert np.allclose(givens_product(givens_decompose(X, sig), sig), X, atol=1e-10 * np.abs(X).max() ** 2)


def test_decompose_identity_and_pi_rotation():
    assert givens_decompose(np.eye(3), (2, 1)) == [] or np.allclose(
        givens_product(givens_decompose(np.eye(3), (2, 1)), (2, 1)), np.eye(3)
    )
    X = np.diag([-1.0, -1.0, 1.0])
    assert np.allclose(givens_product(givens_decompose(X, (2, 1)), (2, 1)), X)


def test_decompose_rejects_non_members():
    with pytest.raises((MembershipError, InvariantError)):
        givens_decompose(np.diag([1.0, -1.0, -1.0]), (2, 1))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=6, max_size=6))
def test_decompose_hypothesis_41(params):
    fs = [
        GivensFactor.R(1, 2, params[0] * 3),
        GivensFactor.H(1, 5, params[1]),
        GivensFactor.R(3, 4, params[2] * 3),
        GivensFactor.H(2, 5, params[3]),
        GivensFactor.R(2, 4, params[4] * 3),
        GivensFactor.H(4, 5, params[5]),
    ]
    X = givens_product(fs, (4, 1))
    Xr = givens_product(givens_decompose(X, (4, 1)), (4, 1))
    assert np.allclose(Xr, X, atol=1e-10 * np.abs(X).max() ** 2)


@pytest.mark.parametrize("sig", [(2, 1), (3, 1), (4, 1), (5, 1)])
def test_polar_decomposition_n1(sig, rng):
    n = Signature.coerce(sig).n
    for _ in range(30):
        X = givens_product(random_givens_factors(sig, rng, beta_max=2.0), sig)
        pd = polar_decompose_n1(X, sig)
        s = np.abs(X).max()
        assert np.allclose(pd.V @ pd.P, X, atol=1e-12 * s)
        assert np.allclose(pd.V.T @ pd.V, np.eye(n), atol=1e-12)
        assert np.allclose(pd.P, pd.P.T, atol=1e-12 * s)
        assert np.all(leading_minors(pd.P) > 0)
        assert np.allclose(expm(pd.Q), pd.P, atol=1e-10 * s)
        assert is_in_so_plus(pd.V, sig) and is_in_so_plus(pd.P, sig)
        assert np.isclose(math.cosh(pd.sigma), X[-1, -1])


def test_polar_of_pure_rotation_and_pure_boost():
    X = givens_embed(GivensFactor.R(1, 2, 1.1), (2, 1))
    pd = polar_decompose_n1(X)
    assert np.allclose(pd.P, np.eye(3)) and np.allclose(pd.V, X)
    B = givens_embed(GivensFactor.H(2, 3, 0.9), (2, 1))
    pd = polar_decompose_n1(B)
    assert np.allclose(pd.V, np.eye(3)) and np.allclose(pd.P, B)
    assert np.isclose(pd.sigma, 0.9)


def test_normalize_angle():
    assert normalize_angle(-0.5) == -0.5
    assert normalize_angle(2 * math.pi - 0.5) == pytest.approx(-0.5)
    assert normalize_angle(-math.pi) == math.pi
    assert -math.pi < normalize_angle(7.5 * math.pi) <= math.pi
