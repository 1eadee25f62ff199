"""Exact explainability queries (MCR, MSR, CSR, CC) over FBDDs, perceptrons and MLPs."""
from .core import (
    BudgetExceeded,
    DimensionError,
    Fbdd,
    FbddValidationError,
    Inner,
    Layer,
    Leaf,
    Mlp,
    NotCompletionError,
    Perceptron,
    PreconditionError,
    QueryVerdict,
    XQError,
    enumerate_completions,
    eval_fbdd,
    eval_mlp,
    eval_perceptron,
    evaluate,
    validate_fbdd,
)
from .fbdd_engine import cc_fbdd, csr_fbdd, mcr_fbdd, msr_fbdd
from .mlp_engine import cc_mlp, csr_mlp, mcr_mlp, msr_mlp
from .perceptron_engine import cc_perceptron, csr_perceptron, mcr_perceptron, msr_perceptron

__version__ = "0.1.0"
