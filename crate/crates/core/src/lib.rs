//! Exact inference for the 1K (degree distribution) and 2K (bi-degree
//! distribution) exponential random graph models on labeled simple graphs.
//!
//! The partition functions are computed exactly by sweeping every labeled
//! graph on `n <= 7` nodes (8 on request) and compressing the sweep into a
//! [`PartitionTable`] keyed by the sufficient statistic. Everything else
//! (probabilities, moments, MLE fitting, existence tests) is evaluated from
//! those tables.

pub mod asymptotics;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod family;
pub mod graph;
pub mod io;
pub mod lp;
pub mod model1k;
pub mod model2k;
pub mod numeric;
pub mod polytope;

pub use asymptotics::{
    band_bound_sweep, greedy_bound_rows, h_sequence, lambda_k, mc_degree_presence, mc_nonzero_count,
    nu_dominance, sequence_rows, singularity_experiment, spectrum_rows, ExperimentConfig,
    ExperimentReport, SequenceKind,
};
pub use constructions::{near_regular_graph, regular_graph, spectrum_bidegree_nonzeros, spectrum_graph};
pub use enumeration::{
    count_no_isolated, dominance_ratio, enumerate, enumerate_with_cap, nu, Cap, KeyKind,
    PartitionTable,
};
pub use error::{Error, Result};
pub use family::NewtonOptions;
pub use graph::{
    bi_degree_vector, degree_vector, degrees_from_bidegrees, edges_from_degrees,
    scaled_bi_degree, BiDegreeVector, DegreeVector, Graph, ScaledBiDegreeVector,
};
pub use model1k::{
    alpha_from_p, change_statistic, er_embedding, expected_stats_1k, fit_1k, log_prob_1k,
    p_from_alpha, prob_degree_present, psi_1k, FitResult1K, NaturalParams1K, ProbabilityParams1K,
};
pub use model2k::{
    bidegree_nonzero_upper_bound, fit_2k, log_prob_2k, psi_2k, Coordinates2K, Existence,
    FitResult2K, GreedyRule, NaturalParams2K,
};
pub use polytope::{
    interior_membership, interior_membership_f64, mle_exists_1k, polytope_a, polytope_b,
    Membership, PolytopeSpec,
};
