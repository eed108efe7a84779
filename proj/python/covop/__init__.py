"""Covering-option discovery for tabular MDPs.

Options are discovered by greedily maximizing the algebraic connectivity of
the state-transition graph; the package also estimates random-walk cover
times, runs SMDP Q-learning experiments, and draws state graphs spectrally.
All sampling is seed-deterministic. See `run_experiment` for the config-file
driven entry point (the same one the `covop` command-line tool uses).
"""

from ._core import (
    CoverTimeEstimate,
    DiscoveryRecord,
    Graph,
    Laplacian,
    LearningCurve,
    OnlineRunResult,
    OptionSet,
    PointOption,
    QLearningResult,
    QTable,
    Spectrum,
    StudyRow,
    SweepCurve,
    TabularMDP,
    VisitTimeEstimate,
    betweenness_centrality,
    betweenness_options,
    connectivity_gain,
    correlation_study,
    cover_time_upper_bound,
    covering_options,
    data_directory,
    derive_seed,
    eigenoptions_point,
    estimate_cover_time,
    estimate_visit_times,
    exact_cover_times,
    exact_visit_times,
    graph_from_mdp,
    grid_from_text,
    hanoi,
    load_edge_list,
    load_grid,
    load_option_set,
    offline_sampled_discovery,
    online_discovery_run,
    option_count_sweep,
    option_policy,
    option_shortcuts,
    parr_maze,
    q_learning,
    race_track,
    random_connected_graph,
    random_policy_cost,
    random_ssp,
    run_experiment,
    save_edge_list,
    save_option_set,
    smallest_eigenpairs,
    spearman,
    spectral_drawing,
    ssp_from_graph,
    taxi,
    taxi_state,
    widen_initiation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
