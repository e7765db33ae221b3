"""Equational reasoning: normal forms, normalization, proving, trace checking."""

from .normal_form import (
    BOT_NF,
    ZERO_NF,
    Branch,
    BotNF,
    DisjNF,
    NormalForm,
    is_valid_normal_form,
    normal_form_violation,
    reify,
    reify_branch,
    single_branch,
)
from .prover import (
    nf_conjoin,
    nf_ec_merge,
    nf_le_holds,
    nf_leq,
    nf_parallel,
    normalize,
    prove,
)
from .schemas import AXIOM_SCHEMAS, RULE_NAMES, Schema, SchemaError
from .trace import (
    ProofStep,
    ProofTrace,
    TraceBuilder,
    trace_violation,
    validate_trace,
)

__all__ = [
    "AXIOM_SCHEMAS",
    "BOT_NF",
    "ZERO_NF",
    "Branch",
    "BotNF",
    "DisjNF",
    "NormalForm",
    "ProofStep",
    "ProofTrace",
    "RULE_NAMES",
    "Schema",
    "SchemaError",
    "TraceBuilder",
    "is_valid_normal_form",
    "nf_conjoin",
    "nf_ec_merge",
    "nf_le_holds",
    "nf_leq",
    "nf_parallel",
    "normal_form_violation",
    "normalize",
    "prove",
    "reify",
    "reify_branch",
    "single_branch",
    "trace_violation",
    "validate_trace",
]
