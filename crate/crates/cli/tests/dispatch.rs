//! Every library operation is reachable from a subcommand, and each listed
//! invocation succeeds.

use std::collections::BTreeSet;
use std::path::Path;

use dkgraph_cli::{run, DISPATCH};

const OPERATIONS: &[&str] = &[
    "degree_vector",
    "bi_degree_vector",
    "scaled_bi_degree",
    "edges_from_degrees",
    "degrees_from_bidegrees",
    "enumerate",
    "count_no_isolated",
    "nu",
    "dominance_ratio",
    "regular_graph",
    "near_regular_graph",
    "spectrum_graph",
    "spectrum_bidegree_nonzeros",
    "polytope_b",
    "polytope_a",
    "mle_exists_1k",
    "interior_membership",
    "alpha_from_p",
    "psi_1k",
    "log_prob_1k",
    "expected_stats_1k",
    "change_statistic",
    "fit_1k",
    "er_embedding",
    "prob_degree_present",
    "psi_2k",
    "log_prob_2k",
    "fit_2k",
    "bidegree_nonzero_upper_bound",
    "lambda_k",
    "mc_degree_presence",
    "mc_nonzero_count",
    "h_sequence",
    "singularity_experiment",
];

#[test]
fn every_operation_has_a_subcommand() {
    let covered: BTreeSet<&str> = DISPATCH.iter().map(|(op, _)| *op).collect();
    let missing: Vec<_> = OPERATIONS.iter().filter(|op| !covered.contains(*op)).collect();
    assert!(missing.is_empty(), "no subcommand for {missing:?}");
}

#[test]
fn every_dispatch_entry_runs() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    for (op, args) in DISPATCH {
        let argv: Vec<String> = std::iter::once("dkgraph".to_string())
            .chain(args.iter().map(|a| {
                if a.ends_with(".edges") {
                    data.join(a).display().to_string()
                } else {
                    a.to_string()
                }
            }))
            .collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&argv, &mut out, &mut err);
        assert_eq!(code, 0, "{op}: {}", String::from_utf8_lossy(&err));
        assert!(!out.is_empty(), "{op}: no output");
    }
}
