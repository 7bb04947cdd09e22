"""Capacitated vehicle routing where each customer is a polygonal region."""
from .elastic import BandTour, VisitSequence, check_band_conditions, elastic_improv, optimal_tour_over_regions
from .errors import CVRGError, GeometryError, GuardError, InfeasibleError, ParseError, PrecedenceError
from .formats import emit_instance, emit_solution, parse_instance, parse_solution
from .geom import ConvexPolygon, Point, Polygon, Segment, region
from .instances import GenSpec, gen_3partition_family, generate, interlocking_counterexample
from .model import Customer, Instance, Solution, Tour, validate_solution
from .routing import PrecedenceDag, held_karp
from .solvers import oracle_cvrp, solve_centroid, solve_dp, solve_fh, solve_greedy

__all__ = [
    "BandTour", "VisitSequence", "check_band_conditions", "elastic_improv", "optimal_tour_over_regions",
    "CVRGError", "GeometryError", "GuardError", "InfeasibleError", "ParseError", "PrecedenceError",
    "emit_instance", "emit_solution", "parse_instance", "parse_solution",
    "ConvexPolygon", "Point", "Polygon", "Segment", "region",
    "GenSpec", "gen_3partition_family", "generate", "interlocking_counterexample",
    "Customer", "Instance", "Solution", "Tour", "validate_solution",
    "PrecedenceDag", "held_karp",
    "oracle_cvrp", "solve_centroid", "solve_dp", "solve_fh", "solve_greedy",
]
