"""Nonlocal-game laboratory: states, games, spin models, and searches.

The package splits into layers.  ``statevec`` holds dense pure-state
linear algebra, ``games`` the referee rules, ``models`` the spin
Hamiltonians whose ground states play them, ``protocols`` the
measurement schedules and win probabilities, ``freefermion`` the
large-size parity-game solutions, ``classical`` the exhaustive strategy
searches and closed forms, and ``combinatorics`` the polygon matching
machinery underneath.  ``cli`` wires everything to a command line.
"""

__version__ = "0.1.0"

from .errors import (BracketError, CapacityError, ConfigError,
                     ContractViolationError, ConvergenceError, GeometryError,
                     IncompatibleProtocolError, InvalidMatchingError,
                     NoSolutionError, ParameterError, PhaseGamesError)
from .statevec import (Branch, MeasurementBranches, OperatorString,
                       PureState, SiteOperator, apply_unitary,
                       enumerate_measurement_branches, expectation,
                       inner_product, make_named_state, pauli_string,
                       x_string, z_string)
from .games import (MarkedParityGame, ModuloGame, ParityGame, PolygonGame,
                    ToricGame)
from .combinatorics import (Matching, cycle_matchings, fibonacci_number,
                            lucas_number, lucas_polynomial, matching_count,
                            matching_sum)
from .models import (ClockSpec, ClusterChainSpec, GroundStateResult,
                     Hamiltonian, IsingSpec, OrderParameters, ToricLattice,
                     ToricSpec, adiabatic_toric_state, build_hamiltonian,
                     cluster_stabilizer, dual_loop_operator, ground_state,
                     mean_field_magnetization, mean_field_state,
                     model_ground_state, order_parameters,
                     plaquette_operator, star_operator, team_loop_operator,
                     toric_game_state, toric_ideal_state)
from .freefermion import (ClosedForms, FloatWithError, bogoliubov_angle,
                          classical_parity_value, closed_forms, dispersion,
                          ground_overlap, magnetization_asymptotic,
                          marked_threshold_field,
                          marked_threshold_magnetization, momenta,
                          threshold_asymptotic, threshold_finite,
                          three_bit_threshold_field,
                          uniform_marked_threshold_field, win_probability,
                          zz_correlation_asymptotic)
from .protocols import (ProtocolReport, ToricPerturbativeRecord,
                        analytic_report, apply_loop_root, cluster_outputs,
                        enumerate_plays, marked_closed_form_value,
                        marked_stabilizer_value, marked_three_site_value,
                        modulo_block_value, oracle_win_probability,
                        parity_fidelity_value, polygon_dichotomic_value,
                        polygon_estimate_criterion, polygon_estimate_value,
                        polygon_stabilizer_value, run_cluster_protocol,
                        run_modulo_protocol, run_parity_protocol,
                        run_toric_protocol, toric_exact_value,
                        toric_perturbative_record)
from .classical import (ClassicalBound, ClassicalStrategy, SearchResult,
                        StrategyEvaluation, closed_form_bounds,
                        constant_strategy, evaluate_strategy,
                        exhaustive_search, game_label, marked_classical_value,
                        modulo_classical_upper_bound,
                        modulo_phase_sum_maximum, polygon_classical_bounds,
                        polygon_reference_strategy, strategy_from_tables,
                        toric_classical_value)
from .config import Config, parse_config, parse_config_text

__all__ = [
    "__version__",
    "PhaseGamesError", "ParameterError", "ContractViolationError",
    "CapacityError", "ConvergenceError", "BracketError", "GeometryError",
    "InvalidMatchingError", "IncompatibleProtocolError", "NoSolutionError",
    "ConfigError",
    "PureState", "SiteOperator", "OperatorString", "Branch",
    "MeasurementBranches", "apply_unitary", "expectation", "inner_product",
    "enumerate_measurement_branches", "make_named_state", "pauli_string",
    "x_string", "z_string",
    "ParityGame", "MarkedParityGame", "ModuloGame", "PolygonGame",
    "ToricGame",
    "Matching", "cycle_matchings", "matching_count", "matching_sum",
    "fibonacci_number", "lucas_number", "lucas_polynomial",
    "IsingSpec", "ClockSpec", "ClusterChainSpec", "ToricSpec",
    "ToricLattice", "Hamiltonian", "GroundStateResult", "OrderParameters",
    "build_hamiltonian", "ground_state", "model_ground_state",
    "adiabatic_toric_state", "toric_game_state", "toric_ideal_state",
    "team_loop_operator", "dual_loop_operator", "plaquette_operator",
    "star_operator", "cluster_stabilizer", "order_parameters",
    "mean_field_magnetization", "mean_field_state",
    "FloatWithError", "ClosedForms", "win_probability",
    "classical_parity_value", "threshold_finite", "threshold_asymptotic",
    "three_bit_threshold_field", "marked_threshold_magnetization",
    "marked_threshold_field", "uniform_marked_threshold_field", "momenta",
    "dispersion", "bogoliubov_angle", "ground_overlap", "closed_forms",
    "magnetization_asymptotic", "zz_correlation_asymptotic",
    "ProtocolReport", "ToricPerturbativeRecord", "oracle_win_probability",
    "analytic_report", "enumerate_plays", "parity_fidelity_value",
    "modulo_block_value", "polygon_dichotomic_value", "toric_exact_value",
    "toric_perturbative_record", "polygon_estimate_value",
    "polygon_estimate_criterion", "marked_stabilizer_value",
    "marked_three_site_value", "marked_closed_form_value",
    "polygon_stabilizer_value", "apply_loop_root", "cluster_outputs",
    "run_parity_protocol", "run_modulo_protocol", "run_cluster_protocol",
    "run_toric_protocol",
    "ClassicalStrategy", "StrategyEvaluation", "SearchResult",
    "ClassicalBound", "evaluate_strategy", "exhaustive_search",
    "closed_form_bounds", "game_label", "constant_strategy",
    "strategy_from_tables", "polygon_reference_strategy",
    "marked_classical_value", "toric_classical_value",
    "polygon_classical_bounds", "modulo_phase_sum_maximum",
    "modulo_classical_upper_bound",
    "Config", "parse_config", "parse_config_text",
]
