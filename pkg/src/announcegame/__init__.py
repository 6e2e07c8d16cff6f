"""Equilibria of the announce/challenge game between an aggregator and validators."""

from .analysis import Variant, all_equilibria
from .asymmetric import AsymSolution, combinatorial_terms, solve_asymmetric, sweep_k
from .closed_form import (Delta_m, EquilibriumResult, Gamma_m, P_m, Q_m, alpha_m,
                          chance_taker_threshold, derived_quantities,
                          enumerate_symmetric_equilibria, single_validator_equilibria,
                          symmetric_candidate, symmetric_mne, two_validator_equilibria,
                          worst_case_loss)
from .errors import AssumptionViolated, Infeasible, InvalidProfile
from .extensions import (NonKycParams, TieBreakParams, nonkyc_beta,
                         nonkyc_two_validator_equilibrium, tiebreak_alpha, tiebreak_dEA_dZ)
from .model import (ATTACK, BLIND, FREE_RIDE, HONEST, VERIFY, AggregatorAction,
                    StrategyProfile, ValidatorAction, ValidatorStrategy)
from .montecarlo import SimulationReport, compare_to_theory, simulate
from .oracle import (DeviationReport, best_response_check, expected_utility_aggregator,
                     expected_utility_validator, is_equilibrium, system_loss)
from .params import REFERENCE, SUGGESTION_REGIME, GameParams, load_params, validate_params

__version__ = "0.1.0"
