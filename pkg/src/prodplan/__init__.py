"""prodplan: compile production-system models to PDDL, plan, and merge
the plans back into the model as operations data.

The pipeline: load model -> derive domain -> derive problem per goal ->
serialize/parse PDDL -> solve (embedded A*/greedy or an external solver)
-> validate plan -> operations records -> integrated model.
"""

from .demo import build_demo_model, demo_goal_2341
from .errors import (
    InvalidParameter,
    ParseError,
    PlanError,
    ProdplanError,
    UnsupportedFeature,
    ValidationError,
)
from .merge import merge, operations_to_plan, plan_to_operations, unsolvable_record
from .model import (
    ProductionModel,
    RoutingGraph,
    build_routing_graph,
    validate_model,
)
from .model_io import (
    GoalSpec,
    IntegratedModel,
    Operation,
    OperationsRecord,
    generate_drill_goal,
    generate_permutation_goals,
    generate_reverse_goal,
    generate_ring_layout,
    load_goal_model,
    load_integrated_model,
    load_production_model,
    save_goal_model,
    save_integrated_model,
    save_production_model,
)
from .pddl import (
    parse_domain,
    parse_plan,
    parse_problem,
    write_domain,
    write_plan,
    write_problem,
)
from .planner import (
    GroundTask,
    SearchResult,
    backend_name,
    ground,
    solve,
    validate_plan,
)
from .planner.external import solve_external
from .planner.search import solve_bidirectional
from .transform import (
    TransformReport,
    derive_domain,
    derive_problem,
    derive_reverse_problem,
)

__version__ = "0.1.0"

__all__ = [
    "GoalSpec",
    "GroundTask",
    "IntegratedModel",
    "InvalidParameter",
    "Operation",
    "OperationsRecord",
    "ParseError",
    "PlanError",
    "ProductionModel",
    "ProdplanError",
    "RoutingGraph",
    "SearchResult",
    "TransformReport",
    "UnsupportedFeature",
    "ValidationError",
    "backend_name",
    "build_demo_model",
    "build_routing_graph",
    "demo_goal_2341",
    "derive_domain",
    "derive_problem",
    "derive_reverse_problem",
    "generate_drill_goal",
    "generate_permutation_goals",
    "generate_reverse_goal",
    "generate_ring_layout",
    "ground",
    "load_goal_model",
    "load_integrated_model",
    "load_production_model",
    "merge",
    "operations_to_plan",
    "parse_domain",
    "parse_plan",
    "parse_problem",
    "plan_to_operations",
    "save_goal_model",
    "save_integrated_model",
    "save_production_model",
    "solve",
    "solve_bidirectional",
    "solve_external",
    "unsolvable_record",
    "validate_model",
    "validate_plan",
    "write_domain",
    "write_plan",
    "write_problem",
]
