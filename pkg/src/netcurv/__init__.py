"""netcurv: total curvature of embedded graphs, cone densities at an apex,
and classification of the singularities a spanning film can exhibit."""

from .arcs import ArcPath, CircularArc, Polyline, Segment, arc_from_endpoints
from .cone_area import (ConeAreaReport, CorrectedClassification, cone_area_comparison,
                        cone_area_induced, cone_area_report, corrected_classify,
                        max_spherical_cone_area, min_cone_area)
from .cone_density import (ConeDensityReport, SingularityClass, classify,
                           classify_value, cone_density_gb, density_upper_bound,
                           endpoint_angle, max_cone_density_over_hull,
                           THRESHOLD_T, THRESHOLD_Y)
from .curvature import (TotalCurvatureReport, arc_curvature_integral,
                        projection_length, signed_cone_curvature_integral,
                        total_curvature)
from .examples import builtin_example
from .graph import (EmbeddedGraph, EulerCircuit, GraphVertex, ValidationReport,
                    doubled_euler_circuit, validate, vertex_tangents)
from .io import graph_from_dict, graph_to_dict, load_graph, save_graph
from .quadrature import QuadratureConfig, integrate
from .spaces import (GeometryError, ModelSpace, dist, euclidean, exp_map, geodesic,
                     hyperbolic, initial_direction, lift_point, log_map, spherical)
from .steiner import (SteinerResult, TangentConfiguration, angle_objective,
                      equilateral_tc, solve_r0, steiner_general, steiner_grid_oracle,
                      steiner_valence3, steiner_valence4, vertex_tc)

__version__ = "0.1.0"
