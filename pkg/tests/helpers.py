"""Shared checks for the property-style and acceptance tests."""

import numpy as np

from cnumrange.coefficients import CoefficientVector
from cnumrange.linalg import INFINITE, adjoint, as_operator, random_matrix, random_unitary
from cnumrange.numrange import boundary, grid, radius, support_values
from cnumrange.prng import SplitMix64, stream_seed

from conftest import random_c

N_GRID = 720
THETAS = grid(N_GRID)


def random_instance(seed, max_n=6, max_k=4, infinite=False):
    rng = SplitMix64(seed)
    k = 2 + int(rng.uniform(1)[0] * (max_k - 1))
    n = max(k, 2 + int(rng.uniform(1)[0] * (max_n - 1)))
    c = random_c(stream_seed(seed, 1), k, distinct=False)
    A = random_matrix(n, stream_seed(seed, 2))
    return as_operator(A, INFINITE if infinite else n), CoefficientVector(c)


def rel(dev, h):
    return dev / (1.0 + float(np.max(np.abs(h))))


# Each check returns the relative deviation (or a boolean) for one seeded trial.

def check_convex(seed):
    A, c = random_instance(seed)
    region = boundary(A, c, N_GRID)
    h = region.h
    from cnumrange.numrange import is_convex
    return is_convex(region) and bool(np.all(h + region.support.opposite() >= -1e-10))


def check_unitary(seed):
    A, c = random_instance(seed)
    U = random_unitary(A.size, stream_seed(seed, 3))
    h1 = support_values(A, c, THETAS)
    h2 = support_values(A.with_block(U @ A.block @ adjoint(U)), c, THETAS)
    return rel(np.max(np.abs(h1 - h2)), h1)


def check_scaling(seed):
    A, c = random_instance(seed)
    rng = SplitMix64(stream_seed(seed, 4))
    shift = int(rng.uniform(1)[0] * N_GRID)
    lam = (0.2 + 2 * rng.uniform(1)[0]) * np.exp(1j * THETAS[shift])
    h = support_values(A, c, THETAS)
    h_lam = support_values(A.with_block(lam * A.block), c, THETAS)
    return rel(np.max(np.abs(h_lam - abs(lam) * np.roll(h, -shift))), h_lam)


def check_translation(seed):
    A, c = random_instance(seed)
    lam = complex(*SplitMix64(stream_seed(seed, 5)).normal(2))
    B = A.block + lam * np.eye(A.size)
    h = support_values(A, c, THETAS)
    h_shift = support_values(A.with_block(B), c, THETAS)
    expected = h + np.real(np.exp(1j * THETAS) * lam * c.total)
    return rel(np.max(np.abs(h_shift - expected)), h_shift)


def check_weight_scaling(seed):
    A, c = random_instance(seed)
    beta = float(SplitMix64(stream_seed(seed, 6)).normal(1)[0]) or 1.0
    h = support_values(A, c, THETAS)
    hb = support_values(A, c.scaled(beta), THETAS)
    if beta > 0:
        expected = beta * h
    else:
        expected = -beta * np.roll(h, -N_GRID // 2)
    return rel(np.max(np.abs(hb - expected)), hb)


def check_singleton(seed):
    A, c = random_instance(seed)
    lam = complex(*SplitMix64(stream_seed(seed, 7)).normal(2))
    scalar = boundary(A.with_block(lam * np.eye(A.size)), c, N_GRID)
    general = boundary(A, c, N_GRID)
    point = scalar.degenerate == "point"
    value_ok = abs(scalar.vertices[0] - lam * c.total) <= 1e-8 * (1 + abs(lam))
    return point and value_ok and general.degenerate != "point"


def check_norm(seed):
    A, c = random_instance(seed)
    B = random_matrix(A.size, stream_seed(seed, 8))
    lam = complex(*SplitMix64(stream_seed(seed, 9)).normal(2))
    h = lambda X, th=THETAS: support_values(A.with_block(X), c, th)
    ha, hb = h(A.block), h(B)
    scale = 1 + np.max(np.abs(ha)) + np.max(np.abs(hb))
    # subadditivity holds pointwise in theta
    tri = bool(np.all(h(A.block + B) <= ha + hb + 1e-8 * scale))
    # homogeneity: h_{lam A}(theta) = |lam| h_A(theta + arg lam) at any lam
    hom_dev = np.max(np.abs(h(lam * A.block) - abs(lam) * h(A.block, THETAS + np.angle(lam))))
    hom = hom_dev <= 1e-8 * (1 + abs(lam) * np.max(np.abs(ha)))
    # the grid radius inherits homogeneity exactly for on-grid rotations
    r = lambda X: radius(boundary(A.with_block(X), c, N_GRID))
    ra = r(A.block)
    mu = abs(lam) * np.exp(1j * THETAS[seed % N_GRID])
    hom_r = abs(r(mu * A.block) - abs(mu) * ra) <= 1e-8 * (1 + abs(mu) * ra)
    # positive definiteness fails exactly when sum(c) == 0 (identity has range {0})
    ident = r(np.eye(A.size))
    definite = (ident > 1e-8) == (c.total != 0)
    return tri and hom and hom_r and definite and ra > 0


def check_real_iff_hermitian(seed):
    A, c = random_instance(seed)
    n = A.size
    H = 0.5 * (A.block + adjoint(A.block))
    mu = float(SplitMix64(stream_seed(seed, 10)).normal(1)[0])

    def real_range(X):
        h = support_values(A.with_block(X), c, THETAS)
        # the range lies in R iff max Im z and max -Im z both vanish
        q = N_GRID // 4
        tol = 1e-8 * (1 + np.max(np.abs(h)))
        return abs(h[q]) <= tol and abs(h[3 * q]) <= tol

    hermitian_real = real_range(H)
    general_real = real_range(A.block)
    shifted = real_range(H + 1j * mu * np.eye(n))
    return hermitian_real and not general_real and shifted == (c.total == 0)
