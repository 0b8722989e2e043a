"""Numerical Liouville-foliation calculus on the slit tangent bundle of a
Finsler manifold: jets, a metric catalog, the adapted Liouville frame,
vertical-form algebra with the (0,s,t) splitting, the leafwise operators
d01 / d' / d'', chart-transition covariance checks, and a randomized
identity-verification harness."""

from .jets import Jet3, seed_variable, constant, fd_oracle, JetDomainError
from .metrics import (MetricSpec, PointTM, default_catalog, euclidean,
                      riemannian, randers, minkowski_quartic, eval_F,
                      eval_F_vertical, eval_F_value, validate_at, sample_point)
from .geometry import (FundamentalTensor, SprayData, LiouvilleFrame, FrameBasis,
                       fundamental_tensor, spray, adapted_frame, sasaki_pair,
                       liouville_frame, frame_basis,
                       DegenerateMetricError, SingularBasisError)
from .vforms import (VerticalForm, SplitForm, wedge, interior_Z, omega0, theta,
                     classify, split, xi1, xi2)
from .vcalc import (FormField, ScalarField, d01, d_prime, d_second, lie_bracket,
                    omega0_field, theta_field, PurityError)
from .transitions import (ChartTransition, default_transitions, push_point,
                          check_t_covariance, check_X_covariance,
                          check_omega0_invariance, check_coefficient_law,
                          frame_change_determinant)
from .leafprim import (LeafPoint, LeafPath, project_to_leaf, leaf_path,
                       path_integral, primitive_1form, is_basic,
                       NotClosedError, PathError, QuadratureError)

__version__ = "0.1.0"
