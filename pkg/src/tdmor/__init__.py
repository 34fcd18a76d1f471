"""Model-order reduction for SISO descriptor systems.

Time-domain reduction via orthogonal polynomials in its Sylvester-equation
form, rational-Krylov moment matching, IRKA and balanced truncation, plus
an implicit-Euler simulator and a benchmark harness.
"""

from . import bench, duality, linalg, lti, mmio, orthopoly, reducers, sylvester, timesim
from .bench import TripleChainParams, build_fom, build_mini_gyro, build_triple_chain
from .lti import (
    DescriptorSystem,
    MomentList,
    ReducedModel,
    SecondOrderSystem,
    lift_second_order,
    moments,
    project,
    transfer_eval,
)
from .orthopoly import PolynomialFamily
from .reducers import (
    ReductionReport,
    ShiftSet,
    balanced_truncation,
    irka,
    moment_matching,
    rational_krylov_basis,
    syltdmor1,
    syltdmor2,
)
from .timesim import InputSignal, Trajectory, implicit_euler, relative_error_2norm

__version__ = "0.1.0"

__all__ = [
    "bench",
    "duality",
    "linalg",
    "lti",
    "mmio",
    "orthopoly",
    "reducers",
    "sylvester",
    "timesim",
    "DescriptorSystem",
    "SecondOrderSystem",
    "ReducedModel",
    "MomentList",
    "PolynomialFamily",
    "ShiftSet",
    "ReductionReport",
    "InputSignal",
    "Trajectory",
    "TripleChainParams",
    "build_fom",
    "build_mini_gyro",
    "build_triple_chain",
    "lift_second_order",
    "moments",
    "project",
    "transfer_eval",
    "implicit_euler",
    "relative_error_2norm",
    "syltdmor1",
    "syltdmor2",
    "rational_krylov_basis",
    "moment_matching",
    "irka",
    "balanced_truncation",
]
