"""Simulated quantum permanent-compromise attack on Blum-Micali generators."""
from .attack import (
    AttackPlan,
    AttackReport,
    AttackTrace,
    amplify,
    candidate_set,
    consistent_seeds_bruteforce,
    execute_attack,
    plan_attack,
    recover_internal_states,
    run_walk,
)
from .estimator import PermanentCompromiseAttack
from .generators import reference_bbs, reference_kaliski

__version__ = "0.1.0"

__all__ = [
    "AttackPlan", "AttackReport", "AttackTrace", "PermanentCompromiseAttack",
    "amplify", "candidate_set", "consistent_seeds_bruteforce", "execute_attack",
    "reference_bbs", "reference_kaliski", "plan_attack", "recover_internal_states", "run_walk",
]
