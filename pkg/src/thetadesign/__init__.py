"""Theta-graph designs: verification, catalogue data and recursive constructions."""
__version__ = "0.1.0"

from .action import Decomposition, GroupAction, Segment, apply, develop, order, parse_action
from .catalogue import CatalogueEntry, lookup, parse_catalogue, serialize
from .construct import ConstructionPlan, PlanStep, construct, execute, inflate, plan, spectrum_table
from .errors import *  # noqa: F401,F403
from .gdd import GDD, ResolvableGDD, extend_with_group, provide_gdd, provide_rgdd
from .kernels import BACKEND
from .search import SearchProblem, resume, search
from .theta import (
    HostGraph,
    ThetaBlock,
    ThetaGraph,
    bipartite_theta_count,
    block_edges,
    copy_counts,
    enumerate_thetas,
    make_theta,
    necessary_conditions,
    parse_theta,
    spectrum_membership,
    theta_count,
)
from .verify import Certificate, Violation, oracle_verify, verify_decomposition
