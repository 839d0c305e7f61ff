"""aspobj: declarative object instantiation through stable-model search.

Describe the objects you need (constructor calls, method invocations,
constraints over parameter arrays) in a small rule language; the engine
grounds the description, enumerates its stable models, and materializes
each model as a configured object graph through a class registry.
"""

from .ast_nodes import SpecProgram
from .binding import (
    ClassRegistry, CreatedObj, FactBase, ObjectUniverse, ParamObj,
    bind_params, encode_facts,
)
from .errors import (
    BindError, CoreTextError, EngineError, ExecutionError, GroundingError,
    LexicalError, PlanError, RegistryError, SolveError, SpecSyntaxError,
    SpecValidationError,
)
from .grounding import GroundProgram, ProgramBuilder, ground
from .materialize import (
    ConstructionPlan, ObjectSpec, Solution, evaluate, execute_plan,
    extract_plan, has_solution,
)
from .parser import parse_spec, tokenize
from .solver import (
    AnswerSet, SolveRequest, active_kernel_name, brute_force_models,
    enumerate_models, evaluate_cardinality, is_stable_model,
)
from .validate import Diagnostic, validate

__version__ = "0.1.0"

__all__ = [
    "AnswerSet", "BindError", "ClassRegistry", "ConstructionPlan",
    "CoreTextError", "CreatedObj", "Diagnostic", "EngineError",
    "ExecutionError", "FactBase", "GroundProgram", "GroundingError",
    "LexicalError", "ObjectSpec", "ObjectUniverse", "ParamObj", "PlanError",
    "ProgramBuilder", "RegistryError", "Solution", "SolveError",
    "SolveRequest", "SpecProgram", "SpecSyntaxError", "SpecValidationError",
    "active_kernel_name", "bind_params", "brute_force_models",
    "encode_facts", "enumerate_models", "evaluate", "evaluate_cardinality",
    "execute_plan", "extract_plan", "ground", "has_solution",
    "is_stable_model", "parse_spec", "tokenize", "validate",
]
