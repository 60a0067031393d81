"""Regret laboratory for episodic tabular MDPs.

Thin Python layer over the C++ core. Table-shaped results (optimal values,
gap profiles, bound terms) come back as plain dictionaries.
"""

import json

from . import _core
from ._core import (
    TabularMdp,
    aggregate,
    bonus,
    eta,
    eta_weights,
    evaluate_policy,
    generate_mdp,
    load_mdp,
    mdp_from_json,
    run_experiment,
    save_mdp,
    validate_mdp,
)

__all__ = [
    "TabularMdp",
    "aggregate",
    "bonus",
    "bound_terms",
    "eta",
    "eta_weights",
    "evaluate_policy",
    "gap_profile",
    "generate_mdp",
    "load_mdp",
    "mdp_from_json",
    "run_experiment",
    "save_mdp",
    "solve_optimal",
    "validate_mdp",
]


def solve_optimal(mdp):
    """Q*, V* (with the terminal zero level) and the greedy policy."""
    return json.loads(_core.solve_optimal_json(mdp))


def gap_profile(mdp):
    """Suboptimality gaps and optimal-action sets; a missing minimum gap is None."""
    return json.loads(_core.gap_profile_json(mdp))


def bound_terms(mdp, T):
    """Gap-dependent bound expressions for T total steps."""
    return json.loads(_core.bound_terms_json(mdp, float(T)))
