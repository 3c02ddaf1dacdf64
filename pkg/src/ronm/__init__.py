"""Robustness-based non-Markovianity measure for time-local open dynamics.

Build short-time maps from GKLS generators, take their Choi matrices, and
quantify how far they sit outside the Markovian set: closed form, primal and
dual certificates, discrimination-game advantages, and time-integrated
totals that tie the measure to the trace-norm growth rate.
"""

from .choi import (ChoiMatrix, apply_from_choi, apply_to_second_factor,
                   choi_of_map, is_cp, is_tp_marginal, map_from_choi,
                   maximally_entangled, partial_trace_first,
                   partial_trace_second)
from .dynamics import (GKLSModel, IntermediateMap, RateFunction,
                       apply_generator, compose_maps, generator_superoperator,
                       identity_intermediate_map, intermediate_map,
                       sample_markovian_model)
from .games import (JointDistribution, MapEnsemble, POVM, StateEnsemble,
                    channel_advantage_ratio, channel_disc_success,
                    info_bound_check, joint_from_game,
                    markovian_baseline_success, min_information,
                    random_povm, random_state_ensemble,
                    relaxed_state_game_max, state_advantage_ratio,
                    state_disc_success)
from .linalg import (EIG_TOL, HERM_TOL, ZERO_TOL, EigenDecomposition,
                     hermitian_eig, is_hermitian, kron, matrix_exp,
                     trace_norm, unvec, vec)
from .measures import (DEFAULT_EPSILON, MeasureReport, OptimalDecomposition,
                       Witness, dual_witness, measure_report, normalized_ronm,
                       optimal_decomposition, primal_value, rhp_integrand,
                       ronm_closed_form, ronm_rate, total_rhp, total_ronm)

__version__ = "0.1.0"

__all__ = [
    "ChoiMatrix", "apply_from_choi", "apply_to_second_factor", "choi_of_map",
    "is_cp", "is_tp_marginal", "map_from_choi", "maximally_entangled",
    "partial_trace_first", "partial_trace_second",
    "GKLSModel", "IntermediateMap", "RateFunction", "apply_generator",
    "compose_maps", "generator_superoperator", "identity_intermediate_map",
    "intermediate_map", "sample_markovian_model",
    "JointDistribution", "MapEnsemble", "POVM", "StateEnsemble",
    "channel_advantage_ratio", "channel_disc_success", "info_bound_check",
    "joint_from_game", "markovian_baseline_success", "min_information",
    "random_povm", "random_state_ensemble", "relaxed_state_game_max",
    "state_advantage_ratio", "state_disc_success",
    "EIG_TOL", "HERM_TOL", "ZERO_TOL", "EigenDecomposition", "hermitian_eig",
    "is_hermitian", "kron", "matrix_exp", "trace_norm", "unvec", "vec",
    "DEFAULT_EPSILON", "MeasureReport", "OptimalDecomposition", "Witness",
    "dual_witness", "measure_report", "normalized_ronm",
    "optimal_decomposition", "primal_value", "rhp_integrand",
    "ronm_closed_form", "ronm_rate", "total_rhp", "total_ronm",
    "__version__",
]
