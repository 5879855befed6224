import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from oracles import hash_unit_reference

from orthostab.models import (
    FiniteModel,
    MapModel,
    NoiseSpec,
    PexiderTriple,
    bilinear,
    deterministic_noise,
    hash_unit,
    make_pexider_instance,
    polarize,
)
from orthostab.orthogonality import OrthoRelation, PairSampler, sample_orthogonal_pairs

IP = OrthoRelation.inner_product()
coords = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
points = arrays(np.float64, (5, 3), elements=coords)


def test_eval_examples():
    assert np.allclose(MapModel.from_linear([[2, -1]])([1, 1]), [1.0])
    assert np.allclose(MapModel.squared_norm(2)([3, 4]), [25.0])
    noisy = MapModel(3, noise=NoiseSpec(0.5, 11))
    X = PairSampler(0, 3).vectors(10_000)
    assert np.max(np.abs(noisy(X))) <= 0.5


def test_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        MapModel.from_linear([[2, -1]])([1, 1, 1])
    with pytest.raises(ValueError):
        MapModel(2, 1, linear=[[1.0, 2.0, 3.0]])


def test_quad_must_be_symmetric():
    with pytest.raises(ValueError, match="symmetric"):
        MapModel(2, 1, quad=[[[1.0, 2.0], [0.0, 1.0]]])


def test_batched_and_single_agree():
    m = MapModel(3, 2, linear=np.arange(6.0).reshape(2, 3), quad=np.stack([np.eye(3), 2 * np.eye(3)]),
                 noise=NoiseSpec(0.1, 3))
    X = PairSampler(1, 3).vectors(20)
    # BLAS may reorder the batched sums; only rounding differs
    assert np.allclose(m(X), np.vstack([m(x) for x in X]), rtol=1e-14, atol=1e-14)


def test_hash_matches_integer_reference():
    X = np.vstack([PairSampler(2, 3).vectors(50), [[0.0, -0.0, 1e-308]], [[-0.0, 0.0, 5.0]]])
    got = hash_unit(123456789, X, 2)
    ref = np.array([[hash_unit_reference(123456789, x, k) for k in range(2)] for x in X])
    assert np.array_equal(got, ref)


def test_hash_is_in_unit_interval():
    u = hash_unit(5, PairSampler(3, 2).vectors(5000), 3)
    assert u.min() >= 0.0 and u.max() < 1.0
    # roughly uniform
    assert abs(u.mean() - 0.5) < 0.02


def test_negative_zero_is_canonicalised():
    spec = NoiseSpec(1.0, 9)
    assert np.array_equal(deterministic_noise(spec, [0.0, 1.0]), deterministic_noise(spec, [-0.0, 1.0]))


def test_noise_examples():
    spec = NoiseSpec(0.7, 4)
    X = PairSampler(4, 2).vectors(1000)
    assert np.array_equal(deterministic_noise(spec, X), deterministic_noise(spec, X))
    odd = NoiseSpec(0.7, 4, "odd")
    assert np.array_equal(deterministic_noise(odd, X) + deterministic_noise(odd, -X), np.zeros((1000, 1)))
    assert not np.any(deterministic_noise(NoiseSpec(0.0, 4), X))


@given(points, st.integers(0, 2**64 - 1), st.sampled_from(["none", "odd", "even"]),
       st.floats(0, 10, allow_nan=False))
def test_noise_bounded_and_parity(X, seed, parity, amp):
    spec = NoiseSpec(amp, seed, parity)
    a = deterministic_noise(spec, X, 2)
    assert np.all(np.abs(a) <= amp)
    b = deterministic_noise(spec, -X, 2)
    if parity == "odd":
        assert np.array_equal(a, -b)
    elif parity == "even":
        assert np.array_equal(a, b)


def test_noise_survives_dyadic_scaling():
    spec = NoiseSpec(1.0, 17)
    X = PairSampler(5, 2).vectors(1000)
    big = []
    for n in range(21):
        v = deterministic_noise(spec, X * 2.0**n)
        assert np.all(np.abs(v) <= 1.0)
        big.append(np.abs(v[:, 0]) > 0.5)
    assert np.mean(big) > 0.2


@given(points, st.sampled_from(["odd", "even"]))
def test_parity_filter_exact(X, parity):
    m = MapModel(3, 2, linear=[[1, 2, 3], [0, -1, 4]], quad=np.stack([np.eye(3), np.ones((3, 3))]),
                 offset=[0.5, -2.0], noise=NoiseSpec(0.3, 8), parity=parity)
    a, b = m(X), m(-X)
    if parity == "odd":
        assert np.array_equal(a, -b)
    else:
        assert np.array_equal(a, b)


def test_odd_model_vanishes_at_zero():
    m = MapModel(2, 1, linear=[[1, 1]], offset=[3.0], noise=NoiseSpec(1.0, 2), parity="odd")
    assert m([0.0, 0.0])[0] == 0.0


def test_polarize_examples():
    q = MapModel.squared_norm(2)
    assert polarize(q, (1, 0), (0, 1))[0] == pytest.approx(0.0)
    assert polarize(q, (1, 0), (1, 0))[0] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        polarize(MapModel.from_linear([[1, 0]]), (1, 0), (0, 1))


def test_polarize_matches_stored_form():
    rng = np.random.default_rng(3)
    M = rng.normal(size=(3, 3))
    B = (M + M.T) / 2
    q = MapModel.from_forms([B])
    for _ in range(100):
        x, y = rng.normal(size=3), rng.normal(size=3)
        assert polarize(q, x, y)[0] == pytest.approx(x @ B @ y, abs=1e-9)
        assert bilinear(q, x, y)[0] == pytest.approx(x @ B @ y, abs=1e-12)


@given(arrays(np.float64, (2, 3), elements=st.floats(-100, 100, allow_nan=False)))
def test_jordan_von_neumann_identity(P):
    x, y = P
    q = MapModel.from_forms([[[2.0, 0.5, 0.0], [0.5, 1.0, -1.0], [0.0, -1.0, 3.0]]])
    lhs = q(x + y) + q(x - y)
    rhs = 2 * q(x) + 2 * q(y)
    assert abs(lhs[0] - rhs[0]) <= 1e-9 * (1 + abs(rhs[0]))


def test_pexider_instance_exact_and_noisy():
    pairs = sample_orthogonal_pairs(IP, PairSampler(6, 2), 10_000)
    exact = make_pexider_instance([[2, -1]], 0, 0, 0, (1, 2, 3), IP)
    assert np.max(exact.premise_residual(*pairs)) <= 1e-12
    noisy = make_pexider_instance([[2, -1]], 0.25, 0.25, 0.25, (1, 2, 3), IP)
    assert noisy.epsilon_design == 1.5
    r = noisy.premise_residual(*pairs)
    assert 0 < r.max() <= 1.5
    X = PairSampler(7, 2).vectors(1000)
    assert np.array_equal(noisy.f(-X), -noisy.f(X))


def test_pexider_premise_guarantee_many_instances():
    for s in range(10):
        tr = make_pexider_instance([[1.0, 3.0], [-2.0, 0.5]], 0.1 * s, 0.05, 0.2, (s, s + 1, s + 2), IP)
        pairs = sample_orthogonal_pairs(IP, PairSampler(s, 2), 10_000)
        assert tr.premise_residual(*pairs).max() <= tr.epsilon_design


def test_pexider_constant_h_residual():
    # negating a constant h flips its contribution: residual becomes 4|c|
    c = 0.75
    f = MapModel.from_linear([[1, 2]])
    h = MapModel(2, 1, offset=[c])
    g = MapModel.from_linear([[1, 2]], offset=[-c])
    tr = PexiderTriple(f, g, h, 0.0, IP)
    pairs = sample_orthogonal_pairs(IP, PairSampler(1, 2), 100)
    assert np.max(tr.premise_residual(*pairs)) == pytest.approx(0.0, abs=1e-12)
    flipped = PexiderTriple(f, g, MapModel(2, 1, offset=[-c]), 0.0, IP)
    assert np.allclose(flipped.premise_residual(*pairs), 4 * c)


def test_triple_roundtrip():
    tr = make_pexider_instance([[2, -1]], 0.25, 0.1, 0.05, (1, 2, 3), IP)
    back = PexiderTriple.from_dict(json.loads(json.dumps(tr.to_dict())))
    X = PairSampler(3, 2).vectors(50)
    for a, b in ((tr.f, back.f), (tr.g, back.g), (tr.h, back.h)):
        assert np.array_equal(a(X), b(X))


def test_triple_dimension_check():
    with pytest.raises(ValueError):
        PexiderTriple(MapModel(2), MapModel(3), MapModel(2), 0.0, IP)


def test_finite_model():
    m = FiniteModel.constant(3, 1)
    assert m.points().shape == (49, 2)
    assert np.all(m(m.points()) == 1)
    with pytest.raises(KeyError):
        m(np.array([4, 0]))
