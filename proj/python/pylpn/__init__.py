"""Python bindings for the LPN solver suite."""

import json

from ._core import (
    BudgetExceeded,
    UsageError,
    auto_repetitions,
    basis_learn,
    gaussian_solve,
    generate_instance,
    mle,
    predicted_bias,
    run_online,
    solve_bkw,
    xor_chain_oracle,
)
from ._core import _sq_json


def sq_table(subcommand, class_name, query="labels-equal", eps=0.05, seed=1):
    """Rows of an `lpn sq` report as a list of dicts."""
    return json.loads(_sq_json(subcommand, class_name, query, eps, seed))


__all__ = [
    "BudgetExceeded",
    "UsageError",
    "auto_repetitions",
    "basis_learn",
    "gaussian_solve",
    "generate_instance",
    "mle",
    "predicted_bias",
    "run_online",
    "solve_bkw",
    "sq_table",
    "xor_chain_oracle",
]
