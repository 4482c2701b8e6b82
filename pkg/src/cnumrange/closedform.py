"""Closed-form c-numerical ranges of rank-1 and rank-2 operators.

An elliptical disc with centre ``z0``, half focal distance ``beta``, major axis
direction ``e^{i phi}`` and semi-minor axis ``alpha`` has support function

    h(theta) = Re(e^{i theta} z0) + sqrt(beta^2 cos^2(theta + phi) + alpha^2),

which degenerates to a segment for ``alpha = 0`` and to a point when also
``beta = 0``. Everything here is expressed through that support function so it
can be checked against :func:`cnumrange.numrange.support_values` angle by angle.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .coefficients import adjusted, as_coefficients, classify_regime
from .errors import ContractError
from .linalg import (
    INFINITE,
    as_operator,
    check_hermitian,
    jacobi_eigh,
    numerical_rank,
    operator_norm,
    trace,
)
from .numrange import Interval

DEGENERATE_TOL = 1e-10
NON_ELLIPSE_TOL = 1e-4


@dataclass(frozen=True)
class EllipseDescriptor:
    focus1: complex
    focus2: complex
    semi_minor: float

    def __post_init__(self):
        if self.semi_minor < 0:
            raise ContractError("semi-minor axis must be non-negative")
        object.__setattr__(self, "focus1", complex(self.focus1))
        object.__setattr__(self, "focus2", complex(self.focus2))
        object.__setattr__(self, "semi_minor", float(self.semi_minor))

    @property
    def center(self):
        return 0.5 * (self.focus1 + self.focus2)

    @property
    def beta(self):
        """Half the focal distance."""
        return 0.5 * abs(self.focus1 - self.focus2)

    @property
    def axis_angle(self):
        diff = self.focus1 - self.focus2
        return math.atan2(diff.imag, diff.real) if diff != 0 else 0.0

    @property
    def semi_major(self):
        return math.hypot(self.beta, self.semi_minor)

    @property
    def degenerate(self):
        if self.semi_minor > 0:
            return None
        return "point" if self.focus1 == self.focus2 else "segment"

    def support(self, thetas):
        th = np.asarray(thetas, dtype=float)
        return np.real(np.exp(1j * th) * self.center) + np.sqrt(
            (self.beta * np.cos(th + self.axis_angle)) ** 2 + self.semi_minor**2
        )

    def to_json(self):
        return {
            "f1": [self.focus1.real, self.focus1.imag],
            "f2": [self.focus2.real, self.focus2.imag],
            "semi_minor": self.semi_minor,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(complex(*obj["f1"]), complex(*obj["f2"]), obj["semi_minor"])


def _ends(c, ambient):
    adj = adjusted(c, ambient)
    return adj.cbar, adj.ctilde


def rank1_range(T, c, ambient=None):
    """Ellipse with foci ``cbar_1 tr T``, ``ctilde_k tr T`` for rank-1 ``T``.

    The semi-minor axis is ``(cbar_1 - ctilde_k) sqrt(||T||^2 - |tr T|^2) / 2``;
    when ``|tr T| = ||T||`` the disc collapses to the segment between the foci.
    """
    T = as_operator(T, ambient)
    c = as_coefficients(c)
    if numerical_rank(T.block) != 1:
        raise ContractError("rank1_range needs a rank-1 operator")
    cbar, ctilde = _ends(c, T.ambient)
    t = trace(T.block)
    norm = operator_norm(T.block)
    gap = norm * norm - abs(t) ** 2
    if abs(norm - abs(t)) <= DEGENERATE_TOL * max(1.0, norm):
        gap = 0.0
    minor = 0.5 * (cbar[0] - ctilde[-1]) * math.sqrt(max(gap, 0.0))
    return EllipseDescriptor(cbar[0] * t, ctilde[-1] * t, minor)


def rank2_matrix(a, b, d=0.0):
    """The 2x2 block ``[[a, d], [0, b]]``."""
    return np.array([[a, d], [0.0, b]], dtype=np.complex128)


def _rank2_room(c, ambient):
    # With one spare dimension and weights of a single sign, the clipped
    # weights put a zero where the padded vector still carries c_k (or c_1).
    if ambient == c.k + 1 and (c[c.k - 1] >= 0 or c[0] <= 0):
        raise ContractError(
            f"ambient dimension k + 1 = {ambient} with single-signed c is outside the formula's range"
        )


def rank2_diag_range(a, b, c, ambient):
    """Segment ``W_c(diag(a, b) (+) 0)`` for nonzero real ``a``, ``b``.

    Inputs must be ordered into one of ``a >= b > 0``, ``a > 0 > b`` or
    ``0 > a >= b``.
    """
    c = as_coefficients(c)
    a = float(a)
    b = float(b)
    cbar, ctilde = _ends(c, ambient)
    k = c.k
    if a >= b > 0:
        _rank2_room(c, ambient)
        return Interval(ctilde[k - 1] * a + ctilde[k - 2] * b, cbar[0] * a + cbar[1] * b)
    if a > 0 > b:
        return Interval(ctilde[k - 1] * a + cbar[0] * b, cbar[0] * a + ctilde[k - 1] * b)
    if 0 > a >= b:
        _rank2_room(c, ambient)
        return Interval(cbar[0] * b + cbar[1] * a, ctilde[k - 1] * b + ctilde[k - 2] * a)
    raise ContractError(f"(a, b) = ({a}, {b}) is not a normalised rank-2 diagonal")


def rank2_ellipse(a, b, d, c, ambient):
    """Elliptical disc for real ``a, b`` with ``|d|^2 > 4|ab|``."""
    c = as_coefficients(c)
    a = float(a)
    b = float(b)
    if not abs(d) ** 2 > 4.0 * abs(a * b):
        raise ContractError("rank2_ellipse needs |d|^2 > 4|ab|")
    cbar, ctilde = _ends(c, ambient)
    c1, ck = cbar[0], ctilde[-1]
    return EllipseDescriptor(c1 * a + ck * b, c1 * b + ck * a, 0.5 * (c1 - ck) * abs(d))


def rank2_nonellipse_support(a, b, d, c, theta, ambient=INFINITE):
    """Piecewise support function of ``[[a, d], [0, b]] (+) 0`` when it is not an ellipse.

    Requires ``c_1 + c_k = 0``, ``c_2 + c_{k-1} = 0``, ``a >= b > 0``,
    ``0 < |d|^2 < 4ab`` and an ambient dimension of at least 3. The angle
    ``phi`` with ``cos^2 phi = |d|^2 / (4ab)`` splits the circle into the arcs
    where both eigenvalues of ``Re(e^{i theta} A)`` are positive, of mixed
    sign, or both negative.
    """
    c = as_coefficients(c)
    k = c.k
    if c[0] + c[k - 1] != 0 or c[1] + c[k - 2] != 0:
        raise ContractError("need c_1 + c_k = 0 and c_2 + c_{k-1} = 0")
    if ambient < max(3, k):
        raise ContractError("ambient dimension must be at least 3 (and at least k)")
    a = float(a)
    b = float(b)
    dd = abs(d) ** 2
    if not (a >= b > 0 and 0 < dd < 4 * a * b):
        raise ContractError("need a >= b > 0 and 0 < |d|^2 < 4ab")
    if k >= 3:
        c_dot, c_ddot = 0.5 * (c[0] + c[1]), 0.5 * (c[0] - c[1])
    else:
        c_dot = c_ddot = 0.5 * c[0]
    phi = math.acos(math.sqrt(dd / (4 * a * b)))

    th = np.mod(np.asarray(theta, dtype=float), 2 * np.pi)
    cos = np.cos(th)
    root = np.sqrt((a - b) ** 2 * cos**2 + dd)
    positive = (th <= phi) | (th >= 2 * np.pi - phi)
    negative = (th >= np.pi - phi) & (th <= np.pi + phi)
    out = np.where(
        positive,
        c_dot * (a + b) * cos + c_ddot * root,
        np.where(negative, -c_dot * (a + b) * cos + c_ddot * root, (c_dot + c_ddot) * root),
    )
    return float(out) if out.ndim == 0 else out


# -- ellipse detection -------------------------------------------------------

def _ellipse_model(params, th):
    x0, y0, beta, alpha, phi = params
    return x0 * np.cos(th) - y0 * np.sin(th) + np.sqrt(
        (beta * np.cos(th + phi)) ** 2 + alpha**2
    )


def _moment_fit(th, h):
    # Odd part of h is Re(e^{i theta} z0); the squared even part lies in
    # span{1, cos 2theta, sin 2theta}. Both are read off by Fourier sums.
    N = len(th)
    opp = np.roll(h, -N // 2)
    odd = 0.5 * (h - opp)
    even2 = (0.5 * (h + opp)) ** 2
    x0 = 2.0 / N * np.sum(odd * np.cos(th))
    y0 = -2.0 / N * np.sum(odd * np.sin(th))
    a0 = np.mean(even2)
    a1 = 2.0 / N * np.sum(even2 * np.cos(2 * th))
    a2 = 2.0 / N * np.sum(even2 * np.sin(2 * th))
    half_beta2 = math.hypot(a1, a2)
    if half_beta2 <= 1e-14 * (1.0 + a0):
        half_beta2 = 0.0  # rounding noise; a square root would inflate it
    phi = 0.5 * math.atan2(-a2, a1)
    alpha2 = max(a0 - half_beta2, 0.0)
    return np.array([x0, y0, math.sqrt(2 * half_beta2), math.sqrt(alpha2), phi])


def _descriptor(params):
    x0, y0, beta, alpha, phi = params
    z0 = complex(x0, y0)
    shift = abs(beta) * complex(math.cos(phi), math.sin(phi))
    return EllipseDescriptor(z0 + shift, z0 - shift, abs(alpha))


def is_ellipse(region, tol=NON_ELLIPSE_TOL):
    """Best elliptical fit to a sampled support function.

    Returns ``(ok, descriptor, residual)`` where ``residual`` is the largest
    absolute support deviation and ``ok`` means
    ``residual <= tol * (1 + max|h|)``.
    """
    th = np.asarray(region.thetas, dtype=float)
    h = np.asarray(region.h, dtype=float)
    if len(th) % 2:
        raise ContractError("ellipse fitting needs an even grid")
    params = _moment_fit(th, h)
    residual = float(np.max(np.abs(_ellipse_model(params, th) - h)))
    scale = 1.0 + float(np.max(np.abs(h)))
    if residual > 1e-12 * scale:
        fit = least_squares(lambda p: _ellipse_model(p, th) - h, params, max_nfev=200)
        refined = float(np.max(np.abs(_ellipse_model(fit.x, th) - h)))
        if refined < residual:
            params, residual = fit.x, refined
    return residual <= tol * scale, _descriptor(params), residual


# -- trace recovery and symmetry ---------------------------------------------

def trace_candidates(ellipse, c, ambient=None, rtol=1e-8):
    """Traces ``t`` of rank-1 operators whose range has the given foci.

    Unique when ``c_1 + c_k != 0``; otherwise ``t`` and ``-t`` both fit.
    ``ambient`` defaults to ``k``.
    """
    c = as_coefficients(c)
    if ambient is None:
        ambient = c.k
    cbar, ctilde = _ends(c, ambient)
    c1, ck = cbar[0], ctilde[-1]
    f1, f2 = ellipse.focus1, ellipse.focus2
    scale = 1.0 + max(abs(f1), abs(f2))
    if abs(f1) <= rtol * scale and abs(f2) <= rtol * scale:
        return (0j,)
    found = []
    for upper, lower in ((f1, f2), (f2, f1)):
        t = (c1 * upper + ck * lower) / (c1 * c1 + ck * ck)
        if abs(c1 * t - upper) <= rtol * scale and abs(ck * t - lower) <= rtol * scale:
            if not any(abs(t - s) <= rtol * scale for s in found):
                found.append(t)
    if not found:
        raise ContractError("foci are not of the form cbar_1 t, ctilde_k t")
    return tuple(found)


def symmetry_predict(S, c, tol=1e-10):
    """Predicted ``W_c(S) == -W_c(S)`` for Hermitian finite-rank ``S`` and case-II ``c``.

    ``True`` when rank < p, ``False`` when rank == p and ``S`` or ``-S`` is
    positive semidefinite, ``None`` when no conclusion is available.
    """
    S = as_operator(S)
    c = as_coefficients(c)
    try:
        check_hermitian(S.block)
    except ValueError as exc:
        raise ContractError(str(exc)) from None
    regime = classify_regime(c)
    if regime.case != 2:
        raise ContractError(f"symmetry_predict needs case-II coefficients, got {regime}")
    rank = numerical_rank(S.block)
    if rank < regime.p:
        return True
    if rank == regime.p:
        lam = jacobi_eigh(S.block)
        cutoff = tol * max(1.0, float(np.max(np.abs(lam))))
        if np.all(lam >= -cutoff) or np.all(lam <= cutoff):
            return False
    return None
