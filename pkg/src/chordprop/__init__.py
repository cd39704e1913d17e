"""Executable fat-graph calculus, chord-diagram props and graded sign bookkeeping."""

from .bv import (
    AlgebraSpec,
    CheckReport,
    GradedBasisAlgebra,
    apply_delta,
    check_bv,
    check_gerstenhaber,
    check_graded_commutative_associative,
    derived_bracket,
    load_algebra,
    multiply,
)
from .diagram import ChordDiagram, GlueMatching, classify_type, glue, is_cactus, make_diagram, reduce
from .dsl import export_dot, parse, serialize
from .errors import ChordpropError
from .fatgraph import (
    BoundaryCycle,
    FatGraph,
    boundary_cycles,
    contract_edge,
    enumerate_fatgraphs,
    euler_characteristic,
    genus,
    is_connected,
    make_fatgraph,
)
from .reports import AuditReport
from .signs import (
    ZERO,
    FormalCycleDegree,
    SignedDegreeResult,
    bracket_degree,
    cap_degree,
    commutativity_audit,
    cross_sign,
    delta,
    gysin,
    intersection_morphism,
    loop_product,
    mu_degree,
    string_bracket_degrees,
)

__all__ = [name for name in dir() if not name.startswith("_")]
