//! Exact laws against independent oracles: hand closed forms and exhaustive enumeration.

use bernoulli_sieve::exact_engine::{
    default_kstar_cap, e_k0_dp, gem_k0_exact_pmf, k0_pmf, k_pmf, kstar_pmf, visit_probs, y_pmf, zn_pmf,
};
use bernoulli_sieve::suites::oracle::enumerate;
use bernoulli_sieve::XiModel;

fn max_gap(a: &[f64], b: impl Fn(usize) -> f64) -> f64 {
    a.iter().enumerate().map(|(i, &x)| (x - b(i)).abs()).fold(0.0, f64::max)
}

#[test]
fn single_ball_last_box_is_geometric() {
    // One ball: box j catches it with probability (Eξ̄)^(j-1) Eξ; Beta(2,3) has Eξ = 2/5.
    let model = XiModel::beta(2.0, 3.0).unwrap();
    let p = kstar_pmf(&model, 1, 200).unwrap();
    for j in 1..40 {
        let want = 0.6f64.powi(j - 1) * 0.4;
        assert!((p.prob(j as i64) - want).abs() < 1e-14, "j = {j}");
    }
}

#[test]
fn two_balls_share_a_box() {
    // Same box iff the first box to catch either ball catches both: Eξ²/(1 - Eξ̄²).
    // Beta(2,3): Eξ² = 1/5, Eξ̄² = 2/5, so 1/3.
    let model = XiModel::beta(2.0, 3.0).unwrap();
    let k = k_pmf(&model, 2).unwrap();
    assert!((k.prob(1) - 1.0 / 3.0).abs() < 1e-14);
    assert!((k.prob(2) - 2.0 / 3.0).abs() < 1e-14);
    let z = zn_pmf(&model, 2).unwrap();
    // Balls meet in the last box exactly when K = 1.
    assert!((z.prob(2) - 1.0 / 3.0).abs() < 1e-14);
}

#[test]
fn uniform_last_box_law_and_empty_mean() {
    let model = XiModel::beta(1.0, 1.0).unwrap();
    for n in [5usize, 50, 150] {
        let z = zn_pmf(&model, n).unwrap();
        for m in 1..n {
            let want = 1.0 / (m * (m + 1)) as f64;
            assert!((z.prob(m as i64) - want).abs() < 1e-12, "n = {n}, m = {m}");
        }
        assert!((z.prob(n as i64) - 1.0 / n as f64).abs() < 1e-12);
        assert!((e_k0_dp(&model, n).unwrap() - 1.0).abs() < 1e-12);
        let g = visit_probs(&model, n).unwrap();
        for m in 1..n {
            assert!((g.g(n, m) - 1.0 / (m + 1) as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn gem_occupied_boxes_follow_ewens_counts() {
    // Under GEM(θ) the number of occupied boxes is a sum of independent
    // Bernoulli(θ/(θ+i)), i = 0..n-1.
    for theta in [0.7, 2.0] {
        let model = XiModel::gem(theta).unwrap();
        let n = 25;
        let mut law = vec![1.0];
        for i in 0..n {
            let p = theta / (theta + i as f64);
            let mut next = vec![0.0; law.len() + 1];
            for (j, &x) in law.iter().enumerate() {
                next[j] += x * (1.0 - p);
                next[j + 1] += x * p;
            }
            law = next;
        }
        let k = k_pmf(&model, n).unwrap();
        let gap = max_gap(&law, |j| k.prob(j as i64));
        assert!(gap < 1e-12, "theta = {theta}: {gap:e}");
    }
}

#[test]
fn gem_empty_boxes_product_formula_matches_recursion() {
    for theta in [0.5, 1.0, 3.0] {
        let model = XiModel::gem(theta).unwrap();
        let a = k0_pmf(&model, 60, 300).unwrap();
        let b = gem_k0_exact_pmf(theta, 60, 300).unwrap();
        let gap = max_gap(&a.probs, |i| b.prob(i as i64 + a.offset));
        assert!(gap < 1e-10, "theta = {theta}: {gap:e}");
    }
}

fn check_against_enumeration(xibar: &[f64], weights: &[f64], n_max: usize, tol: f64) {
    let model = XiModel::custom_atoms("atoms", xibar.to_vec(), weights.to_vec(), None).unwrap();
    for n in 1..=n_max {
        let e = enumerate(xibar, weights, n, 1e-22);
        assert!(e.pruned < 1e-14, "n = {n}: pruned {:e}", e.pruned);
        let cap = default_kstar_cap(&model, n).unwrap();
        let pairs = [
            ("kstar", kstar_pmf(&model, n, cap).unwrap(), &e.kstar),
            ("k", k_pmf(&model, n).unwrap(), &e.k),
            ("k0", k0_pmf(&model, n, 200).unwrap(), &e.k0),
            ("y", y_pmf(&model, n, 200).unwrap(), &e.y),
            ("z", zn_pmf(&model, n).unwrap(), &e.z),
        ];
        for (name, exact, brute) in pairs {
            let gap = max_gap(brute, |i| exact.prob(i as i64));
            assert!(gap < tol, "{name}, n = {n}: {gap:e}");
        }
        let g = visit_probs(&model, n).unwrap();
        for m in 1..=n {
            assert!((g.g(n, m) - e.visits[m]).abs() < tol, "visits n = {n}, m = {m}");
        }
        assert!((e_k0_dp(&model, n).unwrap() - e.mean_k0()).abs() < 1e-11);
    }
}

#[test]
fn two_atom_law_matches_enumeration() {
    check_against_enumeration(&[0.3, 0.8], &[1.0, 2.0], 5, 1e-12);
}

#[test]
fn spread_atoms_match_enumeration() {
    check_against_enumeration(&[0.05, 0.5, 0.6, 0.9], &[0.1, 0.2, 0.3, 0.4], 4, 1e-12);
}
