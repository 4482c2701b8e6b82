"""Weight vectors ``c = (c_1, ..., c_k)`` and the regimes they fall into."""

from dataclasses import dataclass

from .errors import ContractError, DimensionError, ParseError
from .linalg import INFINITE


@dataclass(frozen=True)
class CoefficientVector:
    """Real weights sorted non-increasing, at least two, not all equal.

    Unsorted input is rejected rather than sorted so caller mistakes surface.
    """

    entries: tuple

    def __post_init__(self):
        entries = tuple(float(x) for x in self.entries)
        if len(entries) < 2:
            raise ContractError("a coefficient vector needs k >= 2 entries")
        if any(a < b for a, b in zip(entries, entries[1:])):
            raise ContractError(f"coefficients must be sorted non-increasing: {entries}")
        if entries[0] == entries[-1]:
            raise ContractError("coefficients must not all be equal")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text):
        """Parse ``"1,0,-1"``."""
        try:
            values = [float(tok) for tok in text.split(",") if tok.strip()]
        except ValueError as exc:
            raise ParseError(f"bad coefficient list {text!r}: {exc}") from None
        return cls(values)

    @property
    def k(self):
        return len(self.entries)

    @property
    def total(self):
        return sum(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def scaled(self, beta):
        """Coefficients of ``beta * c``, re-sorted when ``beta < 0``."""
        values = [beta * x for x in self.entries]
        if beta < 0:
            values.reverse()
        return CoefficientVector(values)

    def __str__(self):
        return "(" + ", ".join(f"{x:g}" for x in self.entries) + ")"


def as_coefficients(c):
    if isinstance(c, CoefficientVector):
        return c
    if isinstance(c, str):
        return CoefficientVector.parse(c)
    return CoefficientVector(c)


@dataclass(frozen=True)
class Regime:
    """Which of the three structural cases ``c`` belongs to.

    ``case`` is 1, 2 or 3; ``p`` is set only for case 2 and is the first index
    with ``c_p + c_{k+1-p} != 0``.
    """

    case: int
    p: int = None

    @property
    def name(self):
        return "Case" + "I" * self.case

    def __str__(self):
        return f"{self.name}(p={self.p})" if self.case == 2 else self.name


def classify_regime(c):
    """Classify by exact pair sums ``c_j + c_{k+1-j}`` (no tolerance).

    >>> str(classify_regime((1, 1, -1)))
    'CaseII(p=2)'
    """
    c = as_coefficients(c)
    k = c.k
    for j in range(1, k + 1):
        if c[j - 1] + c[k - j] != 0:
            if j == 1:
                return Regime(1)
            return Regime(2, j)
    return Regime(3)


def r_c_is_norm(c):
    """The c-numerical radius is a norm iff ``sum(c) != 0`` (entries never all equal here)."""
    return as_coefficients(c).total != 0


@dataclass(frozen=True)
class AdjustedCoefficients:
    cbar: tuple
    ctilde: tuple
    ambient: float


def _check_ambient(c, ambient):
    if ambient != INFINITE and int(ambient) != ambient:
        raise DimensionError(f"ambient dimension must be an integer or infinite, got {ambient}")
    if ambient < c.k:
        raise DimensionError(f"ambient dimension {ambient} is smaller than k = {c.k}")


def adjusted(c, ambient):
    """``cbar_j``/``ctilde_j``: ``c_j`` when the space has dimension k, else clipped at 0."""
    c = as_coefficients(c)
    _check_ambient(c, ambient)
    if ambient == c.k:
        return AdjustedCoefficients(c.entries, c.entries, ambient)
    cbar = tuple(max(x, 0.0) for x in c)
    ctilde = tuple(min(x, 0.0) for x in c)
    return AdjustedCoefficients(cbar, ctilde, ambient)


def pad_to_dimension(c, n):
    """``c`` extended by ``n - k`` zeros and re-sorted non-increasing."""
    c = as_coefficients(c)
    if n == INFINITE:
        raise DimensionError("cannot pad to an infinite dimension")
    _check_ambient(c, n)
    return sorted(list(c.entries) + [0.0] * (int(n) - c.k), reverse=True)
