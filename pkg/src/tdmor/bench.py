"""Benchmark model generators and external-matrix ingestion.

Three built-in models cover the benchmark suite at desk scale:

* ``build_fom``: the triple-peak system of order 1006 (three lightly
  damped resonant pairs at 100/200/400 plus a real decay ladder).
* ``build_triple_chain``: three mass-spring-damper chains tied to one
  coupling mass, proportionally damped.  The published comparisons do not
  fix the physical constants, so the defaults here (unit masses, coupling
  mass 10, stiffness 2, alpha = beta = 0.002) are this package's
  documented choice and the related tests are property-based.
* ``build_mini_gyro``: a 20-DOF oscillatory stand-in for the butterfly
  gyroscope (the real 17361-DOF dataset is external).  Its lightly damped
  modes sit right in the band of the low-order polynomial expansion
  points, which reproduces the qualitative failure of the time-domain
  reductions on strongly oscillatory outputs.

Gyroscope-sized Matrix Market data can be ingested with
:func:`load_matrix_market` when the files are available locally (the test
suite never downloads anything).
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exceptions import DimensionMismatch
from .lti import DescriptorSystem, SecondOrderSystem
from .mmio import read_matrix_market

__all__ = [
    "TripleChainParams",
    "build_fom",
    "build_triple_chain",
    "build_mini_gyro",
    "load_matrix_market",
]


def build_fom():
    """Triple-peak benchmark: n = 1006, E = I, resonances near 100/200/400."""
    blocks = [
        np.array([[-1.0, 100.0], [-100.0, -1.0]]),
        np.array([[-1.0, 200.0], [-200.0, -1.0]]),
        np.array([[-1.0, 400.0], [-400.0, -1.0]]),
        sp.diags(-np.arange(1.0, 1001.0)),
    ]
    A = sp.block_diag(blocks, format="csc")
    E = sp.identity(1006, format="csc")
    B = np.concatenate([np.full(6, 10.0), np.ones(1000)])
    return DescriptorSystem(E=E, A=A, B=B, C=B.copy())


@dataclass(frozen=True)
class TripleChainParams:
    """Parameters of the triple mass-spring-damper chain."""

    chain_length: int = 200
    mass: float = 1.0
    coupling_mass: float = 10.0
    stiffness: float = 2.0
    damping_alpha: float = 0.002
    damping_beta: float = 0.002

    def __post_init__(self):
        if self.chain_length < 1:
            raise ValueError("chain_length must be >= 1")
        for name in ("mass", "coupling_mass", "stiffness", "damping_alpha", "damping_beta"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def build_triple_chain(params=None):
    """Three chains of springs, grounded at their free ends, joined by one mass.

    State ordering: chain 1, chain 2, chain 3 (each from the grounded end
    inward), coupling mass last.  Damping is proportional,
    D = alpha*M + beta*K; input and output weights are all ones.
    """
    p = params or TripleChainParams()
    ell, k = p.chain_length, p.stiffness
    m_dim = 3 * ell + 1
    masses = np.full(m_dim, p.mass)
    masses[-1] = p.coupling_mass
    M = sp.diags(masses, format="csc")

    rows, cols, vals = [], [], []

    def add(i, j, v):
        rows.append(i)
        cols.append(j)
        vals.append(v)

    coupling = m_dim - 1
    for c in range(3):
        base = c * ell
        for j in range(ell):
            add(base + j, base + j, 2 * k)  # spring to each neighbor (or ground)
            if j + 1 < ell:
                add(base + j, base + j + 1, -k)
                add(base + j + 1, base + j, -k)
        inner = base + ell - 1
        add(inner, coupling, -k)
        add(coupling, inner, -k)
    add(coupling, coupling, 3 * k)
    K = sp.csc_matrix((vals, (rows, cols)), shape=(m_dim, m_dim))
    D = (p.damping_alpha * M + p.damping_beta * K).tocsc()
    ones = np.ones(m_dim)
    return SecondOrderSystem(M=M, D=D, K=K, Bin=ones, Cout=ones.copy())


def build_mini_gyro(m=20):
    """20-DOF oscillatory stand-in with lightly damped fast modes.

    Modal frequencies span [3, 40] with mild deterministic jitter, uniform
    damping rate 0.2, and geometrically graded modal gains.  Meant to be
    lifted with the gyro form (symmetric indefinite E), where one-sided
    projection onto low-order polynomial subspaces produces unstable or
    useless reduced models while balanced truncation stays reliable.
    """
    rng = np.random.default_rng(3)
    w = np.logspace(np.log10(3.0), np.log10(40.0), m) * (1 + 0.03 * rng.uniform(-1, 1, m))
    gains = 0.6 ** np.arange(m)
    M = sp.identity(m, format="csc")
    K = sp.diags(w**2, format="csc")
    D = sp.diags(np.full(m, 2 * 0.2), format="csc")
    Bv = gains * w
    return SecondOrderSystem(M=M, D=D, K=K, Bin=Bv, Cout=Bv.copy())


def load_matrix_market(mfile, dfile, kfile, b_source, c_source):
    """Second-order system from Matrix Market files.

    ``b_source`` supplies the input vector (first column is taken);
    ``c_source`` supplies the output matrix, of which only the first row
    is used, keeping the system single-output.
    """
    M = read_matrix_market(mfile)
    D = read_matrix_market(dfile)
    K = read_matrix_market(kfile)
    Bmat = read_matrix_market(b_source)
    Cmat = read_matrix_market(c_source)
    m = M.shape[0]
    if Bmat.shape[0] != m:
        raise DimensionMismatch(f"B has {Bmat.shape[0]} rows, expected {m}")
    Bin = np.asarray(Bmat.tocsc()[:, 0].todense()).reshape(-1)
    if Cmat.shape[1] == m:
        Cout = np.asarray(Cmat.tocsr()[0, :].todense()).reshape(-1)
    elif Cmat.shape[0] == m:
        Cout = np.asarray(Cmat.tocsc()[:, 0].todense()).reshape(-1)
    else:
        raise DimensionMismatch(f"C has shape {Cmat.shape}, expected a {m}-compatible matrix")
    return SecondOrderSystem(M=M, D=D, K=K, Bin=Bin, Cout=Cout)
