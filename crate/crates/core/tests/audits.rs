use dpsublinear::audit::{
    audit_greedy_matching_cgs, audit_matched_set_difference, audit_privacy, audit_stage_sensitivities,
    doctor_example, greedy_in_order, max_count_difference, AuditStatus, Coupling, GreedyAudit, Mechanism,
    PrivacyAuditConfig, StageAudit, D1,
};
use dpsublinear::graph::Family;
use dpsublinear::matching::{greedy_matching, matched_vertices, EdgeRanking};
use dpsublinear::{Execution, Graph};

fn permutations(items: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    (0..items.len())
        .flat_map(|i| {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            permutations(&rest).into_iter().map(move |mut p| {
                p.insert(0, head);
                p
            })
        })
        .collect()
}

#[test]
fn path3_plus_chord_under_every_order() {
    let p3 = Family::Path(3).generate(0).unwrap();
    let tri = p3.with_edge_toggled(0, 2).unwrap();
    let orders = permutations(&[(0, 1), (1, 2), (0, 2)]);
    assert_eq!(orders.len(), 6);
    for order in &orders {
        let a = greedy_in_order(&p3, order).len();
        let b = greedy_in_order(&tri, order).len();
        assert!(a.abs_diff(b) <= 1, "{order:?}");
    }
}

#[test]
fn one_edge_changes_size_by_exactly_one() {
    let e4 = Graph::empty(4);
    let one = Graph::from_edges(4, [(1, 3)]).unwrap();
    for seed in 0..100 {
        let pi = EdgeRanking::new(seed);
        assert_eq!(greedy_matching(&one, &pi).len() - greedy_matching(&e4, &pi).len(), 1);
    }
    let e2 = Graph::empty(2);
    let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
    let pi = EdgeRanking::new(0);
    let covered = |g: &Graph| matched_vertices(2, &greedy_matching(g, &pi)).iter().filter(|&&b| b).count();
    assert_eq!(covered(&k2) - covered(&e2), 2);
    assert_eq!(covered(&k2), covered(&k2.clone()));
}

#[test]
fn greedy_size_audit_n4() {
    let cfg = GreedyAudit { node_neighbors: false, ..GreedyAudit::new(4, 100, 3) };
    let r = audit_greedy_matching_cgs(&cfg, Execution::Parallel);
    assert!(r.pass, "{r:?}");
    assert_eq!(r.observed_max, 1.0);
    assert_eq!(r.bound, 1.0);
}

#[test]
fn matched_set_audit_n5_node_neighbors() {
    let cfg = GreedyAudit { edge_neighbors: false, ..GreedyAudit::new(5, 50, 4) };
    let r = audit_matched_set_difference(&cfg, Execution::Parallel);
    assert!(r.pass, "{r:?}");
    assert!(r.observed_max <= 2.0);
    assert!(r.cases_checked > 0);
}

#[test]
fn stage_reports_cover_every_claim() {
    let cfg = StageAudit { instances: 200, seed: 9, ..StageAudit::default() };
    let reports = audit_stage_sensitivities(&cfg, Execution::Parallel).unwrap();
    assert_eq!(reports.len(), 4);
    for r in &reports {
        assert!(r.pass, "{r:?}");
        assert_eq!(r.cases_checked, 200);
    }
}

#[test]
fn identical_inputs_show_no_privacy_loss() {
    let cfg = PrivacyAuditConfig { samples: 200_000, ..PrivacyAuditConfig::default() };
    let mech = Mechanism::Laplace { first: 3.0, second: 3.0, cgs: 1.0, eps: 0.5 };
    let r = audit_privacy(&mech, &cfg, Execution::Parallel).unwrap();
    assert_eq!(r.status, AuditStatus::Pass);
    assert!(r.eps_hat <= 0.0, "{}", r.eps_hat);
    // Thin bins near the floor carry log-ratio noise of about sqrt(2/50).
    assert!(r.eps_hat_raw < 3.0 * (2.0 / cfg.floor as f64).sqrt(), "{}", r.eps_hat_raw);
}

#[test]
fn privacy_estimate_grows_with_samples() {
    let mech = Mechanism::Laplace { first: 0.0, second: 1.0, cgs: 1.0, eps: 0.5 };
    let est: Vec<f64> = [10_000, 100_000, 1_000_000]
        .into_iter()
        .map(|samples| {
            let cfg = PrivacyAuditConfig { samples, seed: 1, ..PrivacyAuditConfig::default() };
            audit_privacy(&mech, &cfg, Execution::Parallel).unwrap().eps_hat
        })
        .collect();
    assert!(est.windows(2).all(|w| w[0] <= w[1]), "{est:?}");
    assert!(est[2] <= 0.55, "{est:?}");
}

#[test]
fn unreachable_floor_is_inconclusive() {
    let cfg = PrivacyAuditConfig { samples: 1000, floor: 10_000, ..PrivacyAuditConfig::default() };
    let mech = Mechanism::Laplace { first: 0.0, second: 1.0, cgs: 1.0, eps: 0.5 };
    let r = audit_privacy(&mech, &cfg, Execution::Sequential).unwrap();
    assert_eq!(r.status, AuditStatus::Inconclusive);
    assert!(!r.pass());
}

#[test]
fn doctor_fixture() {
    let r = doctor_example();
    assert!(r.pass);
    assert_eq!(r.identity_at_iei, 2);
    assert!(r.aligned_max <= 1);
    assert_eq!(max_count_difference(&D1, &D1, &Coupling::Identity), 0);
    assert_eq!(max_count_difference(&D1, &D1, &Coupling::aligned(&D1, &D1)), 0);
}
