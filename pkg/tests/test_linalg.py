import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from orthostab.linalg import (
    NormSpec,
    dot,
    golden_section,
    golden_section_batch,
    norm_eval,
    orthonormal_complement_in_plane,
)

NORMS = [NormSpec("L2"), NormSpec("L1"), NormSpec("LInf"), NormSpec.lp(3), NormSpec.lp(1.5),
         NormSpec.weighted([1.0, 2.0, 0.5])]

finite = st.floats(-1e3, 1e3, allow_nan=False)
vec3 = arrays(np.float64, 3, elements=finite)


def test_norm_examples():
    assert norm_eval(NormSpec("L2"), [3, 4]) == 5.0
    assert norm_eval(NormSpec("LInf"), [1, -2]) == 2.0
    assert norm_eval(NormSpec("L1"), [1, 1, 1]) == 3.0


def test_lp_matches_direct_formula():
    x = np.array([0.3, -1.7, 2.2])
    for p in (1.5, 3.0, 7.0):
        assert norm_eval(NormSpec.lp(p), x) == pytest.approx(np.sum(np.abs(x) ** p) ** (1 / p), rel=1e-14)


def test_lp_large_p_does_not_overflow():
    x = np.array([1e200, 3e199])
    assert norm_eval(NormSpec.lp(50), x) == pytest.approx(1e200, rel=1e-10)


def test_weighted_norm_and_mismatch():
    w = NormSpec.weighted([2.0, 3.0])
    assert norm_eval(w, [1, 1]) == pytest.approx(math.sqrt(13))
    with pytest.raises(ValueError, match="dimension"):
        norm_eval(w, [1, 1, 1])


@pytest.mark.parametrize("bad", [dict(kind="Lp", p=0.5), dict(kind="Lp"), dict(kind="Weighted", weights=(1.0, -1.0)),
                                 dict(kind="Weighted", weights=(1.0, 0.0)), dict(kind="L3")])
def test_norm_spec_validation(bad):
    with pytest.raises(ValueError):
        NormSpec(**bad)


def test_norm_batched_matches_rows():
    X = np.random.default_rng(0).normal(size=(7, 3))
    for n in NORMS:
        assert np.allclose(norm_eval(n, X), [norm_eval(n, x) for x in X], rtol=1e-15, atol=0)


def test_norm_roundtrip():
    for n in NORMS:
        assert NormSpec.from_dict(n.to_dict()) == n


@given(vec3, st.floats(-1e3, 1e3, allow_nan=False))
def test_absolute_homogeneity(x, a):
    for n in NORMS:
        lhs = norm_eval(n, a * x)
        rhs = abs(a) * norm_eval(n, x)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


@given(vec3)
def test_zero_iff_zero(x):
    for n in NORMS:
        assert (norm_eval(n, x) == 0.0) == (not np.any(x))


def test_triangle_inequality_random_pairs():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(10_000, 3)) * rng.lognormal(size=(10_000, 1))
    Y = rng.normal(size=(10_000, 3)) * rng.lognormal(size=(10_000, 1))
    for n in NORMS:
        lhs = norm_eval(n, X + Y)
        rhs = norm_eval(n, X) + norm_eval(n, Y)
        assert np.all(lhs <= rhs * (1 + 1e-14))


def test_dot_examples_and_errors():
    assert dot([1, 0], [0, 3]) == 0.0
    assert dot([1, 2], [4, -2]) == 0.0
    assert dot([2, 1], [2, 1]) == 5.0
    with pytest.raises(ValueError, match="dimension"):
        dot([1, 2], [1, 2, 3])


def test_complement_examples():
    axes = ((1, 0), (0, 1))
    assert np.allclose(orthonormal_complement_in_plane((1, 0), axes), (0, 1))
    s = 1 / math.sqrt(2)
    assert np.allclose(orthonormal_complement_in_plane((1, 1), axes), (s, -s), atol=1e-15)
    assert np.allclose(orthonormal_complement_in_plane((0, 2), axes), (1, 0))


def test_complement_errors():
    with pytest.raises(ValueError, match="plane"):
        orthonormal_complement_in_plane((0, 0, 1), ((1, 0, 0), (0, 1, 0)))
    with pytest.raises(ValueError, match="degenerate"):
        orthonormal_complement_in_plane((1, 0), ((1, 0), (2, 0)))
    with pytest.raises(ValueError):
        orthonormal_complement_in_plane((0, 0), ((1, 0), (0, 1)))
    with pytest.raises(ValueError, match="finite"):
        orthonormal_complement_in_plane((np.nan, 0), ((1, 0), (0, 1)))


@given(arrays(np.float64, (3, 4), elements=st.floats(-10, 10, allow_nan=False)))
def test_complement_properties(M):
    b1, b2, c = M
    s = np.linalg.svd(np.vstack([b1, b2]), compute_uv=False)
    if s[0] == 0 or s[1] <= 1e-6 * s[0]:
        return
    x = c[0] * b1 + c[1] * b2
    if np.linalg.norm(x) < 1e-6 * (np.linalg.norm(b1) + np.linalg.norm(b2)):
        return
    u = orthonormal_complement_in_plane(x, (b1, b2))
    assert abs(x @ u) <= 1e-10 * np.linalg.norm(x)
    assert abs(np.linalg.norm(u) - 1) <= 1e-12
    first = u[np.abs(u) > 1e-12][0]
    assert first > 0
    # u lies in the plane
    q, _ = np.linalg.qr(np.vstack([b1, b2]).T)
    assert np.linalg.norm(u - q @ (q.T @ u)) <= 1e-9


def test_golden_section_matches_closed_form():
    t, v = golden_section(lambda s: (s - 0.3) ** 2 + 1, -5, 5, 1e-12)
    assert t == pytest.approx(0.3, abs=1e-6)
    assert v == pytest.approx(1.0, abs=1e-12)
    t, v = golden_section(lambda s: abs(s + 1.25), -4, 4, 1e-12)
    assert t == pytest.approx(-1.25, abs=1e-11)


def test_golden_section_batch_rows_independent():
    centers = np.array([-2.0, 0.0, 0.7, 3.3])
    t, v = golden_section_batch(lambda s: np.abs(s - centers), -5.0, 5.0, 1e-12)
    assert np.allclose(t, centers, atol=1e-11)
    assert np.all(v <= 1e-11)


def test_golden_section_endpoint_minimum():
    t, v = golden_section(lambda s: s, 0.0, 1.0, 1e-12)
    assert t == 0.0 and v == 0.0
