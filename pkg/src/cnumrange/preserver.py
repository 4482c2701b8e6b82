"""Maps that preserve (or fail to preserve) c-numerical ranges of products.

Every map acts on square blocks of a fixed size. The verification helpers are
falsifiers: they sample pairs and report, they do not prove anything.
"""

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .coefficients import as_coefficients, classify_regime
from .errors import ShapeError
from .linalg import (
    adjoint,
    as_matrix,
    as_operator,
    null_vector,
    numerical_rank,
    operator_norm,
    random_matrix,
    random_unitary,
    rank_one,
)
from .numrange import DEFAULT_GRID, boundary, is_symmetric, max_deviation
from .prng import SplitMix64, stream_seed

UNITARY_TOL = 1e-10


def _check_unitary(U):
    U = as_matrix(U, square=True)
    dev = float(np.max(np.abs(adjoint(U) @ U - np.eye(U.shape[0]))))
    if dev > UNITARY_TOL:
        raise ShapeError(f"U is not unitary (max |U*U - I| = {dev:.2e})")
    return U


def hashed_sign(A):
    """An arbitrary but deterministic sign of a matrix, from a hash of its entries."""
    data = np.round(as_matrix(A), 9) + 0.0  # +0.0 folds -0.0 into 0.0
    digest = hashlib.blake2b(data.tobytes(), digest_size=1).digest()
    return 1 if digest[0] & 1 else -1


def constant_sign(value):
    return lambda A: value


def rank_sign_rule(p):
    """``-1`` on operators of rank below ``p``, ``+1`` otherwise.

    Any product with a rank < p factor has rank < p, so the sign flip only ever
    meets products whose range is symmetric.
    """
    return lambda A: -1 if numerical_rank(A) < p else 1


@dataclass(frozen=True, eq=False)
class PreserverMap:
    U: np.ndarray

    regime = None

    def __post_init__(self):
        object.__setattr__(self, "U", _check_unitary(self.U))

    @property
    def size(self):
        return self.U.shape[0]

    def conjugate(self, A):
        return self.U @ A @ adjoint(self.U)

    def __call__(self, A):
        return apply_map(self, A)


@dataclass(frozen=True, eq=False)
class CaseIMap(PreserverMap):
    """``A -> sign * U A U*``."""

    sign: int = 1
    regime = 1

    def _apply(self, A):
        return self.sign * self.conjugate(A)


@dataclass(frozen=True, eq=False)
class CaseIIMap(PreserverMap):
    """``A -> sign_rule(A) * U A U*``."""

    sign_rule: object = field(default=constant_sign(1))
    regime = 2

    def _apply(self, A):
        return self.sign_rule(A) * self.conjugate(A)


@dataclass(frozen=True, eq=False)
class CaseIIIMap(PreserverMap):
    """``A -> g(A) U A U*``, times ``i`` when ``use_i`` is set."""

    g: object = field(default=hashed_sign)
    use_i: bool = False
    regime = 3

    def _apply(self, A):
        factor = 1j if self.use_i else 1.0
        return factor * self.g(A) * self.conjugate(A)


@dataclass(frozen=True, eq=False)
class HybridMap(PreserverMap):
    """``U A U*`` on rank <= 1 and ``A U*`` otherwise.

    It preserves left-weak zero products but not zero products.
    """

    def _apply(self, A):
        if numerical_rank(A) <= 1:
            return self.conjugate(A)
        return A @ adjoint(self.U)


@dataclass(frozen=True, eq=False)
class TransposeMap(PreserverMap):
    """``A -> U A^T U*``."""

    def _apply(self, A):
        return self.conjugate(A.T)


def swap_unitary(n):
    """``[[0, 1], [1, 0]] (+) I_{n-2}``."""
    U = np.eye(n, dtype=np.complex128)
    U[[0, 1]] = U[[1, 0]]
    return U


def apply_map(phi, A):
    A = as_matrix(A, square=True)
    if A.shape[0] != phi.size:
        raise ShapeError(f"map acts on {phi.size}x{phi.size} blocks, got {A.shape}")
    return phi._apply(A)


# -- reports --------------------------------------------------------------------

@dataclass(frozen=True)
class TrialResult:
    trial: int
    passed: bool
    max_dev: float
    seed: int
    kind: str = ""

    def to_json(self):
        return json.dumps(
            {"trial": self.trial, "pass": self.passed, "max_dev": self.max_dev, "seed": self.seed}
        )


@dataclass(frozen=True)
class Report:
    results: tuple

    @property
    def all_passed(self):
        return all(r.passed for r in self.results)

    @property
    def failures(self):
        return [r for r in self.results if not r.passed]

    def to_jsonl(self):
        return "".join(r.to_json() + "\n" for r in self.results)


# -- product preservation ---------------------------------------------------------

_PAIR_KINDS = (("full", "full"), ("rank1", "full"), ("full", "rank1"), ("rank1", "rank1"))


def _sample(kind, n, seed):
    if kind == "rank1":
        return random_matrix(n, seed, rank=1)
    return random_matrix(n, seed)


def projection(n, p):
    return np.diag([1.0] * p + [0.0] * (n - p)).astype(np.complex128)


def compare_products(phi, A, B, c, ambient=None, grid=DEFAULT_GRID):
    """Largest support deviation between ``W_c(phi(A) phi(B))`` and ``W_c(AB)``."""
    base = as_operator(A @ B, ambient)
    mapped = base.with_block(apply_map(phi, A) @ apply_map(phi, B))
    r1 = boundary(base, c, grid)
    r2 = boundary(mapped, c, grid)
    return max_deviation(r1, r2), float(np.max(np.abs(r1.h)))


def verify_product_preservation(phi, c, trials=50, n=None, seed=42, tol=1e-8,
                                grid=DEFAULT_GRID, ambient=None):
    """Sample pairs ``(A, B)`` and test ``W_c(phi(A) phi(B)) == W_c(AB)``.

    Pairs cycle through full-rank and rank-one kinds. For case-II ``c`` the
    first trial is the fixture ``A = B = `` rank-``p`` projection, on which any
    non-real scalar factor in ``phi`` shows up.
    """
    c = as_coefficients(c)
    n = phi.size if n is None else n
    if n != phi.size:
        raise ShapeError(f"map acts on dimension {phi.size}, not {n}")
    regime = classify_regime(c)
    results = []
    for i in range(trials):
        s = stream_seed(seed, i)
        if i == 0 and regime.case == 2 and regime.p <= n:
            kind = "projection"
            A = B = projection(n, regime.p)
        else:
            ka, kb = _PAIR_KINDS[i % len(_PAIR_KINDS)]
            kind = f"{ka}/{kb}"
            A = _sample(ka, n, stream_seed(s, 0))
            B = _sample(kb, n, stream_seed(s, 1))
        dev, scale = compare_products(phi, A, B, c, ambient, grid)
        results.append(TrialResult(i, dev <= tol * (1.0 + scale), dev, s, kind))
    return Report(tuple(results))


# -- weak zero products -----------------------------------------------------------

@dataclass(frozen=True)
class ZeroProductResult:
    trial: int
    seed: int
    skipped: bool
    left: bool = True
    right: bool = True
    left_norm: float = 0.0
    right_norm: float = 0.0


def _zero_check(P, Q):
    # ||P Q|| small relative to ||P|| ||Q||
    norm = operator_norm(P @ Q)
    return norm <= 1e-9 * (1.0 + operator_norm(P) * operator_norm(Q)), norm


def weak_zero_product_check(phi, trials=20, n=None, seed=42, kernel_tol=1e-10):
    """``A T = 0`` with rank-one ``T`` should give ``phi(A) phi(T) = 0``.

    ``A`` has one singular value zeroed; ``T = x (x) f`` with ``x`` its kernel
    vector. The mirrored condition ``T A = 0`` (``T = x (x) f`` with ``f`` in the
    kernel of ``A*``) is recorded as ``right``.
    """
    n = phi.size if n is None else n
    out = []
    for i in range(trials):
        s = stream_seed(seed, i)
        A = random_matrix(n, stream_seed(s, 0), rank=n - 1)
        x, res = null_vector(A)
        y, res_adj = null_vector(adjoint(A))
        if max(res, res_adj) > kernel_tol * max(1.0, operator_norm(A)):
            out.append(ZeroProductResult(i, s, True))
            continue
        rng = SplitMix64(stream_seed(s, 1))
        f = rng.complex_normal(n)
        g = rng.complex_normal(n)
        T_left = rank_one(x, f)    # A T_left = 0
        T_right = rank_one(g, y)   # T_right A = 0
        PA = apply_map(phi, A)
        left, left_norm = _zero_check(PA, apply_map(phi, T_left))
        right, right_norm = _zero_check(apply_map(phi, T_right), PA)
        out.append(ZeroProductResult(i, s, False, left, right, left_norm, right_norm))
    return tuple(out)


def hybrid_violation(n=3):
    """The pair ``A = E_12 (+) 0``, ``B = E_11 (+) I`` with ``AB = 0`` for the hybrid map.

    Returns ``(||AB||, ||phi(A) phi(B)||)``.
    """
    if n < 3:
        raise ShapeError("the hybrid counterexample needs n >= 3")
    phi = HybridMap(swap_unitary(n))
    A = np.zeros((n, n), dtype=np.complex128)
    A[0, 1] = 1.0
    B = np.eye(n, dtype=np.complex128)
    B[1, 1] = 0.0
    return operator_norm(A @ B), operator_norm(apply_map(phi, A) @ apply_map(phi, B))


# -- symmetric-range sets ----------------------------------------------------------

def membership_S(A, c, tol=1e-8, grid=DEFAULT_GRID):
    """Whether ``W_c(A) == -W_c(A)``."""
    return is_symmetric(boundary(A, c, grid), tol)


@dataclass(frozen=True, eq=False)
class MembershipResult:
    member: bool
    witness: np.ndarray = None
    side: str = None
    probes: int = 0

    def __bool__(self):
        return self.member


def witness_fixture(n, p):
    """``I_{p-1} (+) (-2) (+) 0`` padded to size ``n``."""
    return np.diag([1.0] * (p - 1) + [-2.0] + [0.0] * (n - p)).astype(np.complex128)


def _structured_probes(n, c, seed):
    regime = classify_regime(c)
    if regime.case == 2 and regime.p <= n:
        yield witness_fixture(n, regime.p)
    rng = SplitMix64(stream_seed(seed, 0))
    for _ in range(2):
        yield np.diag(rng.normal(n)).astype(np.complex128)
    for j in range(2):
        yield random_matrix(n, stream_seed(seed, 1 + j), rank=1)


def membership_T(A, c, probes=32, seed=42, tol=1e-8, grid=DEFAULT_GRID):
    """Sampled test of ``A in S`` with ``AB, BA in S`` for every probe ``B``.

    A ``False`` answer carries the witness ``B``; ``True`` only means no probe
    found a counterexample.
    """
    A = as_operator(A)
    c = as_coefficients(c)
    if not membership_S(A, c, tol, grid):
        return MembershipResult(False, None, "A", 0)
    n = A.size
    candidates = list(_structured_probes(n, c, seed))
    candidates += [random_matrix(n, stream_seed(seed, 100 + j)) for j in range(probes)]
    for count, B in enumerate(candidates, 1):
        for side, P in (("AB", A.block @ B), ("BA", B @ A.block)):
            if not membership_S(A.with_block(P), c, tol, grid):
                return MembershipResult(False, B, side, count)
    return MembershipResult(True, None, None, len(candidates))


def sign_admissible(A, B, eps_a, eps_b, c, tol=1e-8, ambient=None, grid=DEFAULT_GRID):
    """Whether ``X -> eps(X) U X U*`` keeps ``W_c(AB)`` for this pair."""
    if eps_a * eps_b == 1:
        return True
    return membership_S(as_operator(as_matrix(A) @ as_matrix(B), ambient), c, tol, grid)


def random_case_map(kind, n, seed, **kwargs):
    """Convenience constructor with a seeded random unitary."""
    U = random_unitary(n, seed)
    return {"I": CaseIMap, "II": CaseIIMap, "III": CaseIIIMap,
            "hybrid": HybridMap, "transpose": TransposeMap}[kind](U, **kwargs)
