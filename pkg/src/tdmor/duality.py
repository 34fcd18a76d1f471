"""Observability and expansion-point diagnostics for the small pairs.

The duality between Sylvester solutions and rational Krylov subspaces
hinges on observability of the small pair (S, L) and on the generalized
eigenvalues of the coefficient pencils: ``(-Atilde, Etilde)`` for the
variant with the initial-condition row and ``(-I, Ehat)`` for the variant
without it.  This module provides the observability matrices, their exact
structural oracles (Pascal matrix for Laguerre, the diagonal for Hermite),
numerical-rank checks and the expansion-point reports.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import orthopoly
from .exceptions import DimensionMismatch, SingularSmallMatrix
from .linalg import generalized_eigenvalues, numerical_rank, principal_angles

__all__ = [
    "ObservabilityMatrix",
    "ExpansionPointReport",
    "observability_matrix",
    "observability_pair",
    "pascal_oracle",
    "hermite_obs_diagonal",
    "expansion_points",
    "check_observability",
    "subspace_equivalence",
]


@dataclass(frozen=True)
class ObservabilityMatrix:
    """Stacked rows L, L S, ..., L S^{r-1}."""

    matrix: np.ndarray
    source_pair: str = ""


@dataclass(frozen=True)
class ExpansionPointReport:
    """Expansion points of one family/variant/order combination."""

    points: np.ndarray
    infinite_flags: np.ndarray
    min_pairwise_distance: float
    family: str
    r: int
    variant: str


def observability_matrix(S, L):
    S = np.atleast_2d(np.asarray(S, dtype=float))
    L = np.asarray(L, dtype=float).reshape(-1)
    r = S.shape[0]
    if S.shape != (r, r) or L.shape[0] != r:
        raise DimensionMismatch("S must be square with L of matching length")
    rows = [L]
    for _ in range(r - 1):
        rows.append(rows[-1] @ S)
    return ObservabilityMatrix(matrix=np.vstack(rows))


def observability_pair(family, r, variant, t0=0.0, form="auto"):
    """The (S, L) pair whose observability the duality theorems require.

    tdmor1 uses S = -Atilde inv(Etilde), L = [0, w] inv(Etilde).  For
    tdmor2, ``form="standard"`` gives S = -inv(Ehat), L = w inv(Ehat)
    (requires a regular Ehat) while ``form="swapped"`` gives the
    orientation-swapped pair S = -Ehat, L = w used by the structural
    triangularity and Hermite-diagonal results; ``form="auto"`` picks
    standard when Ehat is regular, swapped otherwise.
    """
    if variant == "tdmor1":
        pair = orthopoly.build_E_tilde(family, r, t0)
        Einv = np.linalg.inv(pair.E_small)
        ell = np.concatenate([[0.0], orthopoly.input_weights(family, r, "tdmor1")])
        return -pair.A_small @ Einv, ell @ Einv
    if variant == "tdmor2":
        if form not in ("auto", "standard", "swapped"):
            raise ValueError(f"unknown form {form!r}")
        w = orthopoly.input_weights(family, r, "tdmor2")
        if form == "swapped":
            return -orthopoly.build_E_hat(family, r).E_small, w
        try:
            Einv = orthopoly.invert_E_hat(family, r)
        except SingularSmallMatrix:
            if form == "standard":
                raise
            return -orthopoly.build_E_hat(family, r).E_small, w
        return -Einv, w @ Einv
    raise ValueError(f"unknown variant {variant!r}")


def pascal_oracle(r, exact=False):
    """Pascal matrix with entries binomial(i+j-2, j-1), built additively.

    With ``exact=True`` the entries are Python integers (arbitrary
    precision); otherwise a float array is returned.  Entries are always
    generated in integer arithmetic so large binomials are exact before
    any float conversion.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    rows = [[1] * r]
    for _ in range(r - 1):
        prev = rows[-1]
        row = [1]
        for j in range(1, r):
            row.append(row[-1] + prev[j])
        rows.append(row)
    if exact:
        out = np.empty((r, r), dtype=object)
        for i in range(r):
            out[i, :] = rows[i]
        return out
    return np.array(rows, dtype=float)


def hermite_obs_diagonal(r):
    """Magnitudes (1/2)^(k-1) / k! of the Hermite observability diagonal."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return np.array([0.5 ** k / math.factorial(k + 1) for k in range(r)])


def expansion_points(family, r, variant, t0=0.0):
    """Generalized eigenvalues of the small pencil, i.e. the expansion points.

    tdmor2 uses the pencil (-I, Ehat) (all infinite for Hermite, all equal
    to one for Laguerre); tdmor1 uses (-Atilde, Etilde).  The minimal
    pairwise distance is computed over the finite points.
    """
    if variant == "tdmor2":
        pair = orthopoly.build_E_hat(family, r)
        spec = generalized_eigenvalues(-np.eye(r), pair.E_small)
    elif variant == "tdmor1":
        pair = orthopoly.build_E_tilde(family, r, t0)
        spec = generalized_eigenvalues(-pair.A_small, pair.E_small)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    finite = spec.finite_values
    if finite.size >= 2:
        d = np.abs(finite[:, None] - finite[None, :])
        d[np.diag_indices_from(d)] = np.inf
        min_dist = float(d.min())
    else:
        min_dist = float("inf")
    return ExpansionPointReport(
        points=spec.values,
        infinite_flags=spec.infinite_flags,
        min_pairwise_distance=min_dist,
        family=str(pair.family),
        r=r,
        variant=variant,
    )


def check_observability(S, L, tol=1e-20, mode="absolute"):
    """Numerical rank of Ob(S, L) and its deficiency r - rank.

    The default absolute cutoff of 1e-20 mirrors the rank tolerance used
    for the published observability sweeps; a relative mode is available.
    """
    ob = observability_matrix(S, L).matrix
    r = ob.shape[0]
    rank = numerical_rank(ob, tol, mode=mode)
    return rank, r - rank


def subspace_equivalence(V1, V2, angle_tol):
    """True iff the maximal principal angle between the spans is below tol."""
    V1 = np.atleast_2d(np.asarray(V1, dtype=float))
    V2 = np.atleast_2d(np.asarray(V2, dtype=float))
    if V1.shape != V2.shape:
        raise DimensionMismatch(
            f"bases must have equal shape, got {V1.shape} and {V2.shape}"
        )
    return bool(principal_angles(V1, V2)[-1] < angle_tol)
