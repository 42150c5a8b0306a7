"""Discrete centroaffine curvatures, torsions and flows of polygons."""

from .chain import (ClosureReport, ClosureSpec, chain_product, classify_constant, closure_check,
                    constant_eigenvalues, constant_space_polygon, inverse_transition_matrix,
                    reconstruct, regular_polygon, transition_matrix)
from .dynamics import (FlowTrace, GenerationRecord, Periodicity, StabilityReport, make_flow,
                       renormalize, run_flow, stability_probe)
from .equivalence import AffineMap, MatchReport, match_polygons, signature_distance
from .errors import *  # noqa: F401,F403
from .flows import (FlowCoefficients, PlanarityConstraintMatrix, TransversalRecipe,
                    endpoint_flow_step, inverse_pentagram_step, pentagram_coefficients,
                    pentagram_step, planarity_betas, planarity_matrix, planarity_system,
                    predict_inverse_pentagram, predict_pentagram, predict_proportional,
                    predict_tangent, predict_transversal, proportional_step, tangent_step,
                    transversal_step)
from .polygon import (Polygon, Signature, VertexInvariants, check_admissible, compute_signature,
                      is_admissible, is_planar)
from .shapes import ConvexityReport, convexity_check, is_simple

__version__ = "0.1.0"
