"""cqgeom: frame-free tensor and spinor calculus over complexified quaternions.

The metric, connection, curvature, and gauge structure of a spacetime
are all encoded in four biquaternion-valued basis fields and a gauge
connection; this package computes those objects numerically and verifies
their defining identities through a scenario-driven check runner.
"""

__version__ = "0.1.0"

from .algebra import (  # noqa: F401
    Biquaternion,
    Tolerance,
    ZeroDivisorError,
    commutator,
    conjugate,
    exp_vec,
    inner,
    inverse,
    mul,
    norm,
    norm_and_inverse,
)
from .fields import Chart, ExprError, FDConfig, FieldDomainError  # noqa: F401
from .geometry import BasisField, Species  # noqa: F401
from .gauge import GaugeConnection  # noqa: F401
from .transform import CoordinateMap, LorentzField, U1Field  # noqa: F401
from .scenario import Scenario, ScenarioError, load_scenario  # noqa: F401
