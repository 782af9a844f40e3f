//! Property tests for invariants shared by the exact, simulated and limit layers.

use bernoulli_sieve::exact_engine::{
    default_kstar_cap, e_k0_alt_sum, e_k0_dp, k0_pmf, k_pmf, kstar_pmf, kstar_tail_direct, visit_probs, zn_pmf,
    DecrementRows,
};
use bernoulli_sieve::limit_laws::normalization;
use bernoulli_sieve::sieve_sim::{simulate_composition, simulate_composition_walkpoints, RngStream, SieveStats};
use bernoulli_sieve::stats_harness::{ks_two_sample, tv_pmfs};
use bernoulli_sieve::{Pmf, XiModel};
use proptest::prelude::*;
use rand::RngCore;

fn beta_model() -> impl Strategy<Value = XiModel> {
    (0.5f64..4.0, 0.5f64..4.0).prop_map(|(b, c)| XiModel::beta(b, c).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_laws_are_probability_vectors(model in beta_model(), n in 1usize..40) {
        let cap = default_kstar_cap(&model, n).unwrap();
        let laws: Vec<Pmf> = vec![
            kstar_pmf(&model, n, cap).unwrap(),
            k_pmf(&model, n).unwrap(),
            k0_pmf(&model, n, 400).unwrap(),
            zn_pmf(&model, n).unwrap(),
        ];
        for p in &laws {
            prop_assert!(p.probs.iter().all(|&x| x >= -1e-15));
            prop_assert!(close(p.total() + p.mass_deficit, 1.0, 1e-9));
        }
        prop_assert_eq!(laws[1].prob(0), 0.0);
        prop_assert!(laws[3].prob(0).abs() < 1e-15);
    }

    #[test]
    fn decrement_rows_sum_to_one(model in beta_model(), n in 1usize..60) {
        let rows = DecrementRows::new(&model, n).unwrap();
        let qs: f64 = rows.qstar(n).iter().sum();
        let q = rows.q(n);
        prop_assert!(close(qs, 1.0, 1e-12));
        prop_assert!(close(q.iter().sum::<f64>(), 1.0, 1e-12));
        prop_assert_eq!(q[0], 0.0);
    }

    #[test]
    fn last_box_index_splits_into_occupied_and_empty(model in beta_model(), n in 1usize..40) {
        let cap = default_kstar_cap(&model, n).unwrap();
        let kstar = kstar_pmf(&model, n, cap).unwrap();
        let k = k_pmf(&model, n).unwrap();
        let ek0 = e_k0_dp(&model, n).unwrap();
        prop_assert!(close(kstar.mean(), k.mean() + ek0, 1e-8 * kstar.mean().max(1.0)));
    }

    #[test]
    fn recursive_and_alternating_routes_agree(model in beta_model(), n in 1usize..30, k in 0u64..12) {
        let cap = default_kstar_cap(&model, n).unwrap();
        let kstar = kstar_pmf(&model, n, cap).unwrap();
        let direct = kstar_tail_direct(&model, n, k).unwrap();
        prop_assert!(close(kstar.tail_gt(k as i64), direct, 1e-8));
        prop_assert!(close(e_k0_alt_sum(&model, n).unwrap(), e_k0_dp(&model, n).unwrap(), 1e-8));
    }

    #[test]
    fn visit_probabilities_are_probabilities(model in beta_model(), n in 1usize..50) {
        let g = visit_probs(&model, n).unwrap();
        prop_assert!(close(g.g(n, n), 1.0, 1e-15));
        for m in 1..=n {
            let v = g.g(n, m);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
        }
    }

    #[test]
    fn simulated_statistics_are_consistent(
        model in beta_model(),
        n in 1u64..300,
        seed in any::<u64>(),
        walk in any::<bool>(),
    ) {
        let mut rng = RngStream::new(seed, 0);
        let comp = if walk {
            simulate_composition_walkpoints(&model, n, &mut rng)
        } else {
            simulate_composition(&model, n, &mut rng)
        };
        prop_assert_eq!(comp.counts().iter().sum::<u64>(), n);
        prop_assert!(*comp.counts().last().unwrap() > 0);
        let s: SieveStats = comp.stats();
        prop_assert_eq!(s.kstar, s.k + s.k0);
        prop_assert!(s.k1 <= s.k);
        prop_assert!(s.w >= 1 && s.w <= s.kstar + 1);
        prop_assert!(s.z >= 1 && s.z <= n);
        prop_assert!(s.v <= n);
        prop_assert_eq!(s.w == s.kstar + 1, s.k0 == 0);
    }

    #[test]
    fn replicate_streams_are_reproducible(seed in any::<u64>(), rep in any::<u64>()) {
        let mut a = RngStream::new(seed, rep);
        let mut b = RngStream::new(seed, rep);
        for _ in 0..8 {
            prop_assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn ks_distance_is_symmetric_and_bounded(
        a in prop::collection::vec(-5.0f64..5.0, 1..60),
        b in prop::collection::vec(-5.0f64..5.0, 1..60),
    ) {
        let ab = ks_two_sample("ab", &a, &b, None);
        let ba = ks_two_sample("ba", &b, &a, None);
        prop_assert_eq!(ab.statistic, ba.statistic);
        prop_assert!((0.0..=1.0).contains(&ab.statistic));
        let p = ab.p_value.unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert_eq!(ks_two_sample("aa", &a, &a, None).statistic, 0.0);
    }

    #[test]
    fn tv_is_symmetric_and_bounded(
        p in prop::collection::vec(0.0f64..1.0, 1..20),
        q in prop::collection::vec(0.0f64..1.0, 1..20),
    ) {
        let norm = |v: Vec<f64>| {
            let s: f64 = v.iter().sum::<f64>().max(1e-300);
            Pmf::from_probs(0, v.into_iter().map(|x| x / s).collect())
        };
        let (p, q) = (norm(p), norm(q));
        let pq = tv_pmfs("pq", &p, &q, 1.0).statistic;
        let qp = tv_pmfs("qp", &q, &p, 1.0).statistic;
        prop_assert!(close(pq, qp, 1e-15));
        prop_assert!((-1e-15..=1.0 + 1e-12).contains(&pq));
    }

    #[test]
    fn normalization_schedules_are_finite(
        model in prop_oneof![
            beta_model(),
            (0.1f64..2.9).prop_map(|a| XiModel::log_pareto(a).unwrap()),
        ],
        log10_n in 3.0f64..15.0,
    ) {
        let n = 10f64.powf(log10_n);
        let s = normalization(&model).unwrap();
        prop_assert!(s.a_n(n).is_finite() && s.a_n(n) > 0.0);
        prop_assert!(s.b_n(n).is_finite());
    }
}
