"""Shared builders and independent oracles for the test suite."""

import numpy as np

from conefeas import (
    BallCap,
    Instance,
    LinearMap,
    NonnegativeOrthant,
    SecondOrderCone,
    as_vector,
)
from conefeas.solvers import SolverConfig


def solver_config(**overrides):
    """Default test configuration: adaptive steps, generous budget."""
    kwargs = {"schedule": "polyak_estimate", "max_iter": 20000}
    kwargs.update(overrides)
    return SolverConfig(**kwargs)


def identity_orthant_instance(epsilon=0.0, b=(1.0, 0.0)):
    """The 2-d uniqueness example: A = Id, nonnegative orthant, b on an axis."""
    return Instance(
        LinearMap.identity(2),
        as_vector(list(b)),
        BallCap(NonnegativeOrthant(2)),
        epsilon,
    )


def soc_unattained_instance():
    """Aperture-1 second-order-cone instance whose dual infimum (-1/4) is
    finite but not attained; the primal solution is (1/2, 0, 1/2)."""
    A = LinearMap([[1.0, 0.0, -1.0], [1.0, 2.0, 1.0]])
    return Instance(A, as_vector([0.0, 1.0]), BallCap(SecondOrderCone(3, 1.0)), 0.0)


def feasible_orthant_instance(rng, m=None, n=None, epsilon=0.0, boundary=False):
    """Random instance with b = A x0 for x0 in the orthant, b normalised."""
    m = m or int(rng.integers(2, 9))
    n = n or int(rng.integers(2, 9))
    a_mat = rng.normal(size=(m, n))
    x0 = rng.uniform(0.0, 1.0, size=n)
    if boundary:
        x0[rng.random(size=n) < 0.5] = 0.0
    b = a_mat @ x0
    nb = np.linalg.norm(b)
    if nb > 1e-9:
        b = b / nb
    return Instance(LinearMap(a_mat), as_vector(b), BallCap(NonnegativeOrthant(n)), epsilon)


def infeasible_orthant_instance(rng, m=None, n=None, epsilon=0.0):
    """A nonnegative matrix maps the orthant into the orthant, so a negative
    component of b puts it strictly outside the closure of the image."""
    m = m or int(rng.integers(2, 7))
    n = n or int(rng.integers(2, 8))
    a_mat = rng.uniform(0.1, 1.0, size=(m, n))
    b = rng.uniform(0.2, 1.0, size=m)
    b[int(rng.integers(0, m))] = -1.0
    b = b / np.linalg.norm(b)
    return Instance(LinearMap(a_mat), as_vector(b), BallCap(NonnegativeOrthant(n)), epsilon)


def sample_cone_point(cone, rng, scale=1.0):
    """A random point of the cone, for sampling-based oracles."""
    x = rng.normal(size=cone.dim) * scale
    return cone.project(x)


def projection_oracle_check(cone, x, p, samples=2000, seed=0, tol=1e-8):
    """Variational-inequality check that p is the projection of x onto the cone:
    p in P and <x - p, q - p> <= tol for sampled q in P."""
    rng = np.random.default_rng(seed)
    if not cone.contains(p, 1e-8 * (1.0 + np.linalg.norm(x))):
        return False
    r = x - p
    scale = 1.0 + np.linalg.norm(x)
    for _ in range(samples):
        q = sample_cone_point(cone, rng, scale=scale)
        if np.dot(r, q - p) > tol * scale * (1.0 + np.linalg.norm(q)):
            return False
    return True
