"""Exact free conditional model engine for the logic DmBL*.

Build the staged free model, evaluate conditional and modal formulas in
its Kripke transfer, and extend arbitrary rational probabilities from
classical propositions to the full conditional language, with the
inference identity holding exactly and triviality provably avoided.
"""

from .algebra import StageSet
from .evaluator import Session, Verdict, check_independence, evaluate, verdict
from .formula import (AtomContext, Formula, ParseError, desugar, parse,
                      render)
from .model import (DEFAULT_MAX_WORLDS, GuardExceeded, ModelState,
                    UndefinedConditional, init_generalized, init_stage0)
from .probability import (BayesReport, DegenerateDistribution, Distribution,
                          DistributionError, attach, attach_epsilon,
                          bayes_check, epsilon_prob, load_distribution,
                          measure, prob)
from .ratfn import RationalFn, limit_at_zero

__version__ = "0.1.0"

__all__ = [
    "AtomContext", "BayesReport", "DEFAULT_MAX_WORLDS",
    "DegenerateDistribution", "Distribution", "DistributionError", "Formula",
    "GuardExceeded", "ModelState", "ParseError", "RationalFn", "Session",
    "StageSet", "UndefinedConditional", "Verdict", "attach", "attach_epsilon",
    "bayes_check", "check_independence", "desugar", "epsilon_prob",
    "evaluate", "init_generalized", "init_stage0", "limit_at_zero",
    "load_distribution", "measure", "parse", "prob", "render", "verdict",
]
