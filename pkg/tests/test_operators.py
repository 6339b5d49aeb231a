"""Vector and linear-map layer: adjoint identity, linearity, validation."""

import numpy as np
import pytest

from conefeas.operators import (
    DimensionMismatchError,
    LinearMap,
    as_vector,
    inner,
    norm,
)


class TestVectors:
    def test_identity_inner_and_norm(self):
        assert inner(as_vector([1.0, 0.0]), as_vector([0.0, 1.0])) == 0.0
        assert norm(as_vector([3.0, 4.0])) == 5.0

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            as_vector([1.0, np.nan])
        with pytest.raises(ValueError):
            as_vector([np.inf, 0.0])

    def test_rejects_wrong_dim(self):
        with pytest.raises(DimensionMismatchError):
            as_vector([1.0, 2.0], dim=3)
        with pytest.raises(DimensionMismatchError):
            inner(np.ones(2), np.ones(3))

    def test_vectors_are_read_only(self):
        v = as_vector([1.0, 2.0])
        with pytest.raises(ValueError):
            v[0] = 5.0

    def test_cauchy_schwarz_sampled(self):
        """|<x, y>| <= ||x|| ||y|| over 1000 random pairs."""
        rng = np.random.default_rng(0)
        for _ in range(1000):
            n = int(rng.integers(1, 12))
            x, y = rng.normal(size=n), rng.normal(size=n)
            assert abs(inner(x, y)) <= norm(x) * norm(y) + 1e-12


class TestLinearMap:
    def test_identity_apply(self):
        A = LinearMap.identity(2)
        np.testing.assert_allclose(A.apply([3.0, 4.0]), [3.0, 4.0])
        np.testing.assert_allclose(A.adjoint_apply([1.0, 0.0]), [1.0, 0.0])

    def test_rectangular_apply_and_adjoint(self):
        A = LinearMap([[1.0, 0.0, -1.0], [1.0, 2.0, 1.0]])
        np.testing.assert_allclose(A.apply([1.0, 1.0, 1.0]), [0.0, 4.0])
        np.testing.assert_allclose(A.adjoint_apply([1.0, 1.0]), [2.0, 2.0, 0.0])

    def test_adjoint_identity_random(self):
        """<A x, y> = <x, A* y> for 100 random maps and vectors."""
        rng = np.random.default_rng(1)
        for _ in range(100):
            m, n = int(rng.integers(1, 9)), int(rng.integers(1, 9))
            A = LinearMap(rng.normal(size=(m, n)))
            x, y = rng.normal(size=n), rng.normal(size=m)
            lhs = inner(A.apply(x), y)
            rhs = inner(x, A.adjoint_apply(y))
            # explicit transpose multiply as the independent reference
            ref = float(x @ (A.entries.T @ y))
            assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(lhs))
            assert abs(rhs - ref) <= 1e-12 * (1.0 + abs(ref))

    def test_linearity(self):
        rng = np.random.default_rng(2)
        A = LinearMap(rng.normal(size=(4, 6)))
        x, z = rng.normal(size=6), rng.normal(size=6)
        a, c = 0.37, -2.5
        np.testing.assert_allclose(
            A.apply(a * x + c * z),
            a * A.apply(x) + c * A.apply(z),
            atol=1e-12,
        )

    def test_dimension_errors(self):
        A = LinearMap([[1.0, 2.0]])
        with pytest.raises(DimensionMismatchError):
            A.apply([1.0])
        with pytest.raises(DimensionMismatchError):
            A.adjoint_apply([1.0, 2.0])

    def test_rejects_non_finite_entries(self):
        with pytest.raises(ValueError):
            LinearMap([[1.0, np.inf]])
