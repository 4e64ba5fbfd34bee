//! Property tests: invariants of risk, AUC, composition and I/O.

mod common;

use common::*;
use oodlab::auc::{auc_parts, bayes_sup_auc_parts, RankingFunction};
use oodlab::conditions::check_linear_risk;
use oodlab::domain::{FeatureSpace, OodMarginal};
use oodlab::hypothesis::{exhaustive_labelings, phi, phi_project, sauer_bound, vc_dimension};
use oodlab::io::{fmt_sig12, DomainRecord, SpaceRecord};
use oodlab::learners::{
    composite_constant, composite_learner, constrained_reject_learner, empirical_risk, erm_id, mmd, nn_rate_bound,
    phi_in_risk, ErmLearner, TrainingSet,
};
use oodlab::loss::{alpha_risk, inf_alpha_risk, inf_risk_in, inf_risk_out, risk_in, risk_out, LossTable};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn alpha_risk_is_affine_in_alpha(seed in any::<u64>(), n in 1usize..6, k in 1usize..3, a in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let d = random_domain(&mut r, n, k);
        let loss = LossTable::zero_one(k);
        let h: Vec<u8> = (0..n).map(|_| r.gen_range(1..=(k + 1) as u8)).collect();
        let lhs = alpha_risk(&h, &d, &loss, a).unwrap();
        let rhs = (1.0 - a) * risk_in(&h, &d, &loss).unwrap() + a * risk_out(&h, &d, &loss).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
        prop_assert!((lhs - oracle_alpha_risk(&h, &d, &loss, a)).abs() <= 1e-12);
    }

    #[test]
    fn infimum_is_concave_below_the_chord(seed in any::<u64>(), n in 1usize..5, k in 1usize..3, a in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let d = random_domain(&mut r, n, k);
        let space = random_space(&mut r, n, k, 32);
        let loss = LossTable::zero_one(k);
        let inf_a = inf_alpha_risk(&space, &d, &loss, a).unwrap().value;
        let chord = (1.0 - a) * inf_risk_in(&space, &d, &loss).unwrap().value
            + a * inf_risk_out(&space, &d, &loss).unwrap().value;
        prop_assert!(inf_a >= chord - 1e-12);
    }

    #[test]
    fn separate_domains_have_empty_overlap(seed in any::<u64>(), n in 1usize..7, k in 1usize..3) {
        let d = random_domain(&mut rng(seed), n, k);
        let direct = (0..n).all(|x| d.id_part().marginal()[x] == 0.0 || d.ood_part().mass(x) == 0.0);
        prop_assert_eq!(d.is_separate(), direct);
        prop_assert_eq!(d.overlap_set().is_empty(), direct);
    }

    #[test]
    fn id_key_ignores_the_class_prior(seed in any::<u64>(), n in 1usize..6, a in 0.0f64..=1.0) {
        let d = random_domain(&mut rng(seed), n, 2);
        prop_assert_eq!(d.id_equivalence_key(), d.mix_alpha(a).unwrap().id_equivalence_key());
    }

    #[test]
    fn mixture_marginal_is_affine(seed in any::<u64>(), n in 1usize..6, a in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let all: Vec<usize> = (0..n).collect();
        let p = OodMarginal::new(random_masses(&mut r, n, &all, 4)).unwrap();
        let q = OodMarginal::new(random_masses(&mut r, n, &all, 4)).unwrap();
        let m = OodMarginal::mixture(&p, &q, a).unwrap();
        for x in 0..n {
            prop_assert!((m.mass(x) - ((1.0 - a) * p.mass(x) + a * q.mass(x))).abs() <= 1e-12
                || (m.mass(x) - (a * p.mass(x) + (1.0 - a) * q.mass(x))).abs() <= 1e-12);
        }
    }

    #[test]
    fn auc_matches_oracle_and_negation_flips(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let all: Vec<usize> = (0..n).collect();
        let id = random_masses(&mut r, n, &all, 4);
        let ood = random_masses(&mut r, n, &all, 4);
        let scores: Vec<f64> = (0..n).map(|_| r.gen_range(0..4) as f64).collect();
        let ranker = RankingFunction::new(scores.clone()).unwrap();
        let a = auc_parts(&scores, &id, &ood);
        prop_assert!((a - oracle_auc(&scores, &id, &ood)).abs() <= 1e-12);
        let neg = auc_parts(ranker.negated().scores(), &id, &ood);
        prop_assert!((a + neg - 1.0).abs() <= 1e-12);
        prop_assert!(a <= bayes_sup_auc_parts(&id, &ood) + 1e-12);
    }

    #[test]
    fn mmd_is_a_symmetric_distance(seed in any::<u64>(), n in 2usize..6, m in 1usize..12) {
        let mut r = rng(seed);
        let x = FeatureSpace::line(n).unwrap();
        let a: Vec<(usize, usize)> = (0..m).map(|_| (r.gen_range(0..n), r.gen_range(1..=2))).collect();
        let b: Vec<(usize, usize)> = (0..m).map(|_| (r.gen_range(0..n), r.gen_range(1..=2))).collect();
        let ab = mmd(&a, &b, &x, 1.0).unwrap();
        let ba = mmd(&b, &a, &x, 1.0).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!(ab >= 0.0);
        prop_assert!(mmd(&a, &a, &x, 1.0).unwrap() <= 1e-12);
    }

    #[test]
    fn constrained_reject_fits_the_sample(seed in any::<u64>(), n in 1usize..5, k in 1usize..3) {
        let mut r = rng(seed);
        let d = random_domain(&mut r, n, k);
        let s = TrainingSet::sample(&d, 8, seed).unwrap();
        let space = random_space(&mut r, n, k, 32);
        let loss = LossTable::zero_one(k);
        let aux: Vec<usize> = (0..n).collect();
        match constrained_reject_learner(&s, &aux, &space, &loss) {
            Ok(h) => prop_assert_eq!(empirical_risk(h.labels(), &s, &loss), 0.0),
            Err(_) => prop_assert!(space.iter().all(|h| empirical_risk(h, &s, &loss) > 0.0)),
        }
    }

    #[test]
    fn composite_risk_bound(seed in any::<u64>(), n in 1usize..5, k in 1usize..3) {
        let mut r = rng(seed);
        let d = random_domain(&mut r, n, k);
        let s = TrainingSet::sample(&d, 6, seed).unwrap();
        let loss = LossTable::zero_one(k);
        let id_space = exhaustive_labelings(n, k).unwrap();
        let id_only = oodlab::hypothesis::HypothesisSpace::from_members(
            n, k, id_space.iter().filter(|h| h.iter().all(|&y| (y as usize) <= k)).map(<[u8]>::to_vec).collect(),
        ).unwrap();
        let b_space = random_space(&mut r, n, 1, 8);
        let a_in = ErmLearner { space: &id_only, loss: &loss };
        let b_loss = LossTable::zero_one(1);
        let a_b = ErmLearner { space: &b_space, loss: &b_loss };
        let composed = composite_learner(&s, &a_in, &a_b).unwrap();
        let h_in = erm_id(&s, &id_only, &loss).unwrap();
        let projected: Vec<(usize, usize)> = s.samples().iter().map(|&(x, _)| (x, 1)).collect();
        let h_b = erm_id(&TrainingSet::new(projected, 1).unwrap(), &b_space, &b_loss).unwrap();
        let lhs = risk_in(composed.labels(), &d, &loss).unwrap();
        let rhs = risk_in(h_in.labels(), &d, &loss).unwrap()
            + composite_constant(&loss) * phi_in_risk(h_b.labels(), &d, &loss);
        prop_assert!(lhs <= rhs + 1e-12, "{} > {}", lhs, rhs);
    }

    #[test]
    fn phi_is_idempotent(labels in proptest::collection::vec(1u8..=3, 1..8)) {
        let once = phi(&labels, 2);
        prop_assert_eq!(phi(&once, 1), once.clone());
        prop_assert!(once.iter().all(|&y| y == 1 || y == 2));
    }

    #[test]
    fn projected_patterns_within_counting_bound(seed in any::<u64>(), n in 1usize..7) {
        let space = random_space(&mut rng(seed), n, 2, 40);
        let projected = phi_project(&space);
        let v = vc_dimension(&projected).unwrap();
        prop_assert!(projected.len() as u128 <= sauer_bound(v, n));
    }

    #[test]
    fn nn_rate_bound_decreases(d in 1usize..50, n in 1usize..1000) {
        prop_assert!(nn_rate_bound(d, n + 1) <= nn_rate_bound(d, n));
    }

    #[test]
    fn domain_and_space_records_round_trip(seed in any::<u64>(), n in 1usize..6, k in 1usize..3) {
        let mut r = rng(seed);
        let d = random_domain(&mut r, n, k);
        let text = serde_json::to_string(&DomainRecord::from_domain(&d)).unwrap();
        let back: DomainRecord = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_domain().unwrap(), d);
        let space = random_space(&mut r, n, k, 16);
        let text = serde_json::to_string(&SpaceRecord::from_space(&space)).unwrap();
        let back: SpaceRecord = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_space().unwrap().members(), space.members());
    }

    #[test]
    fn sig12_parses_back_close(v in -1e20f64..1e20) {
        let parsed: f64 = fmt_sig12(v).parse().unwrap();
        prop_assert!((parsed - v).abs() <= 1e-11 * v.abs().max(1e-300));
    }

    #[test]
    fn excess_curve_is_affine_when_linear_condition_holds(seed in any::<u64>(), n in 1usize..4, a in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let d = random_domain(&mut r, n, 1);
        let space = random_space(&mut r, n, 1, 8);
        let loss = LossTable::zero_one(1);
        prop_assume!(check_linear_risk(&space, &d, &loss).unwrap().holds);
        let h = space.member(r.gen_range(0..space.len()));
        let excess = |t: f64| alpha_risk(h, &d, &loss, t).unwrap() - inf_alpha_risk(&space, &d, &loss, t).unwrap().value;
        let mid = excess(a);
        let chord = (1.0 - a) * excess(0.0) + a * excess(1.0);
        prop_assert!((mid - chord).abs() <= 1e-12);
    }
}
