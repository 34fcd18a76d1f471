"""Classical orthogonal polynomials and the small coefficient matrices.

Supported families: Chebyshev (first and second kind), Hermite
(physicists'), Jacobi, Laguerre, Legendre, all in their classical
normalizations.  Each family satisfies the differential recurrence

    g_i(t) = alpha_i g'_{i+1}(t) + beta_i g'_i(t) + gamma_i g'_{i-1}(t)

whose coefficients drive the two small matrices used by the time-domain
reduction: the bordered tridiagonal Etilde (with companion Atilde) for the
variant that keeps the initial-condition row, and the pure tridiagonal
Ehat for the variant that removes it.

Sign convention for Hermite: Ehat is built strictly from the recurrence
coefficients, which makes its superdiagonal -alpha_i (the negated matrix
-Ehat then has superdiagonal +alpha_i).  Rank and expansion-point
diagnostics are insensitive to this sign, and the observability tests
compare magnitudes.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import SingularSmallMatrix, UndefinedCoefficient

__all__ = [
    "FAMILIES",
    "PolynomialFamily",
    "RecurrenceTriple",
    "SmallPencilPair",
    "recurrence_coeffs",
    "eval_poly",
    "g0_over_g1dot",
    "build_E_tilde",
    "build_E_hat",
    "invert_E_hat",
    "input_weights",
    "is_regular_E_tilde",
    "is_regular_E_hat",
    "exact_regularity",
]

FAMILIES = ("chebyshev1", "chebyshev2", "hermite", "jacobi", "laguerre", "legendre")

_REGULARITY_COND_LIMIT = 1e12


@dataclass(frozen=True)
class PolynomialFamily:
    """A polynomial family choice; (a, b) apply to Jacobi only."""

    kind: str
    jacobi_a: float = 0.0
    jacobi_b: float = 0.0

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in FAMILIES:
            raise ValueError(f"unknown family {self.kind!r}; choose one of {FAMILIES}")
        object.__setattr__(self, "kind", kind)
        if kind == "jacobi" and (self.jacobi_a <= -1 or self.jacobi_b <= -1):
            raise ValueError("Jacobi parameters must satisfy a, b > -1")

    def __str__(self):
        if self.kind == "jacobi":
            return f"jacobi({self.jacobi_a:g},{self.jacobi_b:g})"
        return self.kind


@dataclass(frozen=True)
class RecurrenceTriple:
    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class SmallPencilPair:
    """Small coefficient matrices of one reduction variant.

    ``kind="tdmor1"`` stores (Etilde, Atilde); ``kind="tdmor2"`` stores
    (Ehat, I).  Matrices are kept untransposed so the Sylvester equations
    read literally A V E_small + E V A_small = F.
    """

    E_small: np.ndarray
    A_small: np.ndarray
    kind: str
    family: PolynomialFamily
    r: int
    t0: float = 0.0


def _family(family):
    if isinstance(family, PolynomialFamily):
        return family
    return PolynomialFamily(kind=family)


def recurrence_coeffs(family, i):
    """Differential recurrence triple (alpha_i, beta_i, gamma_i), i >= 1.

    The Chebyshev-1 gamma has denominator 2i-2 and is undefined at i = 1;
    it is never needed there since it multiplies g'_0 = 0.
    """
    fam = _family(family)
    if i < 1:
        raise UndefinedCoefficient(f"recurrence index must be >= 1, got {i}")
    k = fam.kind
    if k == "chebyshev1":
        if i == 1:
            raise UndefinedCoefficient("Chebyshev-1 gamma_1 has a zero denominator")
        return RecurrenceTriple(1.0 / (2 * i + 2), 0.0, -1.0 / (2 * i - 2))
    if k == "chebyshev2":
        return RecurrenceTriple(1.0 / (2 * i + 2), 0.0, -1.0 / (2 * i + 2))
    if k == "hermite":
        return RecurrenceTriple(1.0 / (2 * i + 2), 0.0, 0.0)
    if k == "laguerre":
        return RecurrenceTriple(-1.0, 1.0, 0.0)
    if k == "legendre":
        return RecurrenceTriple(1.0 / (2 * i + 1), 0.0, -1.0 / (2 * i + 1))
    a, b = fam.jacobi_a, fam.jacobi_b
    alpha = 2 * (a + b + i + 1) / ((a + b + 2 * i + 2) * (a + b + 2 * i + 1))
    beta = 2 * (a - b) / ((a + b + 2 * i) * (a + b + 2 * i + 2))
    gamma = -2 * (a + i) * (b + i) / ((a + b + 2 * i + 1) * (a + b + 2 * i) * (a + b + i))
    return RecurrenceTriple(alpha, beta, gamma)


def _alpha(fam, i):
    if fam.kind == "chebyshev1":
        return 1.0 / (2 * i + 2)
    return recurrence_coeffs(fam, i).alpha


def _gamma(fam, i):
    # gamma enters the small matrices only for i >= 2, where it is defined
    return recurrence_coeffs(fam, i).gamma


def _beta(fam, i):
    if fam.kind == "chebyshev1":
        return 0.0
    return recurrence_coeffs(fam, i).beta


def eval_poly(family, i, t):
    """g_i(t) by the classical three-term recurrence of the family."""
    fam = _family(family)
    if i < 0:
        raise ValueError("degree must be nonnegative")
    if i == 0:
        return 1.0
    k = fam.kind
    if k == "legendre":
        p0, p1 = 1.0, t
        for m in range(1, i):
            p0, p1 = p1, ((2 * m + 1) * t * p1 - m * p0) / (m + 1)
        return p1
    if k == "chebyshev1":
        p0, p1 = 1.0, t
        for _ in range(1, i):
            p0, p1 = p1, 2 * t * p1 - p0
        return p1
    if k == "chebyshev2":
        p0, p1 = 1.0, 2 * t
        for _ in range(1, i):
            p0, p1 = p1, 2 * t * p1 - p0
        return p1
    if k == "hermite":
        p0, p1 = 1.0, 2 * t
        for m in range(1, i):
            p0, p1 = p1, 2 * t * p1 - 2 * m * p0
        return p1
    if k == "laguerre":
        p0, p1 = 1.0, 1.0 - t
        for m in range(1, i):
            p0, p1 = p1, ((2 * m + 1 - t) * p1 - m * p0) / (m + 1)
        return p1
    a, b = fam.jacobi_a, fam.jacobi_b
    p0, p1 = 1.0, (a + 1) + (a + b + 2) * (t - 1) / 2
    for m in range(2, i + 1):
        c1 = 2 * m * (m + a + b) * (2 * m + a + b - 2)
        c2 = (2 * m + a + b - 1) * ((2 * m + a + b) * (2 * m + a + b - 2) * t + a * a - b * b)
        c3 = 2 * (m + a - 1) * (m + b - 1) * (2 * m + a + b)
        p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
    return p1


def g0_over_g1dot(family):
    """The constant g_0 / g'_1 of the family (both are constant in t)."""
    fam = _family(family)
    table = {
        "legendre": 1.0,
        "chebyshev1": 1.0,
        "chebyshev2": 0.5,
        "hermite": 0.5,
        "laguerre": -1.0,
    }
    if fam.kind in table:
        return table[fam.kind]
    return 2.0 / (fam.jacobi_a + fam.jacobi_b + 2.0)


def build_E_tilde(family, r, t0=0.0):
    """Small pair (Etilde, Atilde) of the initial-condition-carrying variant.

    The transpose of Etilde has first row [g_0(t0) .. g_{r-1}(t0)]; row i
    (2 <= i <= r) holds -alpha_{i-2} (or -g_0/g'_1 for i = 2), -beta_{i-1}
    and -gamma_i on the sub-, main and superdiagonal.  Atilde^T is
    blkdiag(0, I_{r-1}).
    """
    fam = _family(family)
    if r < 2:
        raise ValueError("r must be >= 2")
    Et = np.zeros((r, r))
    for j in range(r):
        Et[0, j] = eval_poly(fam, j, t0)
    Et[1, 0] = -g0_over_g1dot(fam)
    for i in range(2, r + 1):
        if i >= 3:
            Et[i - 1, i - 2] = -_alpha(fam, i - 2)
        Et[i - 1, i - 1] = -_beta(fam, i - 1)
        if i + 1 <= r:
            Et[i - 1, i] = -_gamma(fam, i)
    At = np.zeros((r, r))
    At[1:, 1:] = np.eye(r - 1)
    return SmallPencilPair(
        E_small=Et.T, A_small=At.T, kind="tdmor1", family=fam, r=r, t0=t0
    )


def build_E_hat(family, r):
    """Small pair (Ehat, I) of the variant without the initial-condition row.

    Ehat^T is the negated tridiagonal with alpha_1..alpha_{r-1} below,
    beta_1..beta_r on and gamma_2..gamma_r above the diagonal.
    """
    fam = _family(family)
    if r < 1:
        raise ValueError("r must be >= 1")
    Et = np.zeros((r, r))
    for i in range(1, r + 1):
        Et[i - 1, i - 1] = -_beta(fam, i)
        if i <= r - 1:
            Et[i, i - 1] = -_alpha(fam, i)
        if i >= 2:
            Et[i - 2, i - 1] = -_gamma(fam, i)
    return SmallPencilPair(
        E_small=Et.T, A_small=np.eye(r), kind="tdmor2", family=fam, r=r
    )


def _cond(M):
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] == 0.0:
        return np.inf
    return s[0] / s[-1]


def is_regular_E_tilde(family, r, t0=0.0):
    """Numerical (working-precision) regularity gate used by the reducers."""
    return _cond(build_E_tilde(family, r, t0).E_small) < _REGULARITY_COND_LIMIT


def is_regular_E_hat(family, r):
    """Numerical (working-precision) regularity gate used by the reducers."""
    return _cond(build_E_hat(family, r).E_small) < _REGULARITY_COND_LIMIT


def _exact_triple(fam, i):
    """Recurrence triple in exact rational arithmetic."""
    k = fam.kind
    if k == "chebyshev1":
        gamma = Fraction(-1, 2 * i - 2) if i >= 2 else Fraction(0)
        return Fraction(1, 2 * i + 2), Fraction(0), gamma
    if k == "chebyshev2":
        return Fraction(1, 2 * i + 2), Fraction(0), Fraction(-1, 2 * i + 2)
    if k == "hermite":
        return Fraction(1, 2 * i + 2), Fraction(0), Fraction(0)
    if k == "laguerre":
        return Fraction(-1), Fraction(1), Fraction(0)
    if k == "legendre":
        return Fraction(1, 2 * i + 1), Fraction(0), Fraction(-1, 2 * i + 1)
    a = Fraction(fam.jacobi_a).limit_denominator(10**6)
    b = Fraction(fam.jacobi_b).limit_denominator(10**6)
    alpha = 2 * (a + b + i + 1) / ((a + b + 2 * i + 2) * (a + b + 2 * i + 1))
    beta = 2 * (a - b) / ((a + b + 2 * i) * (a + b + 2 * i + 2))
    gamma = -2 * (a + i) * (b + i) / ((a + b + 2 * i + 1) * (a + b + 2 * i) * (a + b + i))
    return alpha, beta, gamma


def _exact_eval(fam, i, t):
    """g_i(t) with rational t in exact arithmetic."""
    if i == 0:
        return Fraction(1)
    k = fam.kind
    if k == "legendre":
        p0, p1 = Fraction(1), t
        for m in range(1, i):
            p0, p1 = p1, ((2 * m + 1) * t * p1 - m * p0) / (m + 1)
        return p1
    if k == "chebyshev1":
        p0, p1 = Fraction(1), t
        for _ in range(1, i):
            p0, p1 = p1, 2 * t * p1 - p0
        return p1
    if k == "chebyshev2":
        p0, p1 = Fraction(1), 2 * t
        for _ in range(1, i):
            p0, p1 = p1, 2 * t * p1 - p0
        return p1
    if k == "hermite":
        p0, p1 = Fraction(1), 2 * t
        for m in range(1, i):
            p0, p1 = p1, 2 * t * p1 - 2 * m * p0
        return p1
    if k == "laguerre":
        p0, p1 = Fraction(1), 1 - t
        for m in range(1, i):
            p0, p1 = p1, ((2 * m + 1 - t) * p1 - m * p0) / (m + 1)
        return p1
    a = Fraction(fam.jacobi_a).limit_denominator(10**6)
    b = Fraction(fam.jacobi_b).limit_denominator(10**6)
    p0, p1 = Fraction(1), (a + 1) + (a + b + 2) * (t - 1) / 2
    for m in range(2, i + 1):
        c1 = 2 * m * (m + a + b) * (2 * m + a + b - 2)
        c2 = (2 * m + a + b - 1) * ((2 * m + a + b) * (2 * m + a + b - 2) * t + a * a - b * b)
        c3 = 2 * (m + a - 1) * (m + b - 1) * (2 * m + a + b)
        p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
    return p1


def _exact_rank_full(M):
    """Full-rank decision by fraction-exact Gaussian elimination."""
    r = len(M)
    M = [row[:] for row in M]
    for col in range(r):
        piv = None
        for row in range(col, r):
            if M[row][col] != 0:
                piv = row
                break
        if piv is None:
            return False
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col]
        for row in range(col + 1, r):
            if M[row][col] != 0:
                f = M[row][col] / inv
                M[row] = [x - f * y for x, y in zip(M[row], M[col])]
    return True


def exact_regularity(family, r, variant, t0=Fraction(0)):
    """Exact (rational-arithmetic) invertibility of Etilde or Ehat.

    The structural singularities of the small matrices are exact rational
    cancellations, while the regular Hermite combinations can exceed any
    floating-point condition threshold well below r = 60; this oracle
    decides invertibility without any tolerance.
    """
    fam = _family(family)
    t0 = Fraction(t0)
    if variant == "tdmor2":
        M = [[Fraction(0)] * r for _ in range(r)]
        for i in range(1, r + 1):
            al, be, ga = _exact_triple(fam, i)
            M[i - 1][i - 1] = -be
            if i <= r - 1:
                M[i][i - 1] = -al
            if i >= 2:
                M[i - 2][i - 1] = -ga
        return _exact_rank_full(M)
    if variant == "tdmor1":
        M = [[Fraction(0)] * r for _ in range(r)]
        for j in range(r):
            M[0][j] = _exact_eval(fam, j, t0)
        g1dot_inv = {  # g0/g1' as exact rationals
            "legendre": Fraction(1),
            "chebyshev1": Fraction(1),
            "chebyshev2": Fraction(1, 2),
            "hermite": Fraction(1, 2),
            "laguerre": Fraction(-1),
        }
        if fam.kind in g1dot_inv:
            M[1][0] = -g1dot_inv[fam.kind]
        else:
            a = Fraction(fam.jacobi_a).limit_denominator(10**6)
            b = Fraction(fam.jacobi_b).limit_denominator(10**6)
            M[1][0] = -2 / (a + b + 2)
        for i in range(2, r + 1):
            if i >= 3:
                M[i - 1][i - 2] = -_exact_triple(fam, i - 2)[0]
            M[i - 1][i - 1] = -_exact_triple(fam, i - 1)[1]
            if i + 1 <= r:
                M[i - 1][i] = -_exact_triple(fam, i)[2]
        return _exact_rank_full(M)
    raise ValueError(f"unknown variant {variant!r}")


def invert_E_hat(family, r):
    """Inverse of Ehat where the family/order combination is regular.

    Laguerre has the closed form -(upper triangle of ones).  Hermite is
    always singular; Legendre and both Chebyshev kinds are singular for
    odd r.  Jacobi is decided numerically.

    Raises
    ------
    SingularSmallMatrix
        For the analytically or numerically singular combinations.
    """
    fam = _family(family)
    if fam.kind == "laguerre":
        return -np.triu(np.ones((r, r)))
    if fam.kind == "hermite":
        raise SingularSmallMatrix("Ehat is singular for Hermite at every order")
    if fam.kind in ("legendre", "chebyshev1", "chebyshev2") and r % 2 == 1:
        raise SingularSmallMatrix(f"Ehat is singular for {fam.kind} at odd r = {r}")
    Eh = build_E_hat(fam, r).E_small
    if _cond(Eh) >= _REGULARITY_COND_LIMIT:
        raise SingularSmallMatrix(f"Ehat numerically singular for {fam} at r = {r}")
    inv = np.linalg.inv(Eh)
    if np.linalg.norm(Eh @ inv - np.eye(r)) >= 1e-10:
        raise SingularSmallMatrix(f"Ehat inverse failed the residual check for {fam} at r = {r}")
    return inv


def input_weights(family, r, variant):
    """Input expansion weights for a piecewise-constant unit input.

    The first unit vector, of length r-1 for the tdmor1 variant and r for
    tdmor2.  Any other constant scaling changes the solution but not its
    span, hence not the reduced model.
    """
    if variant not in ("tdmor1", "tdmor2"):
        raise ValueError(f"unknown variant {variant!r}")
    m = r - 1 if variant == "tdmor1" else r
    if m < 1:
        raise ValueError("no weights for this order")
    w = np.zeros(m)
    w[0] = 1.0
    return w
