//! Impossibility constructions materialized as explicit finite domains with
//! certificates whose inequalities are recomputed at emission.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::auc::{bayes_sup_auc_parts, sup_auc_parts, RankingFunction};
use crate::conditions::{check_linear_auc, check_linear_risk, default_alpha_grid, split_separable, AUC_REALIZABLE_TOL};
use crate::domain::{FiniteDomain, IdJoint, OodMarginal, PROB_TOL};
use crate::error::{LabError, Result};
use crate::hypothesis::{check_separate_assumption, exhaustive_labelings, patterns_on, phi, phi_project, sauer_bound, vc_dimension, HypothesisSpace};
use crate::io::DomainRecord;
use crate::loss::{combine, partial_risk_table, LossTable};

/// Largest number of splits [`auc_unrealizable_split`] enumerates.
pub const SPLIT_CAP: u128 = 1_000_000;

/// Largest candidate set scanned by [`sauer_pattern_domain`].
pub const PATTERN_POINTS_CAP: usize = 20;

/// One recomputed inequality `lhs <relation> rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub relation: String,
    pub rhs: f64,
    pub holds: bool,
}

impl Check {
    pub fn new(name: &str, lhs: f64, relation: &str, rhs: f64) -> Self {
        let holds = match relation {
            ">" => lhs > rhs + PROB_TOL,
            "<" => lhs < rhs - PROB_TOL,
            ">=" => lhs >= rhs - PROB_TOL,
            "<=" => lhs <= rhs + PROB_TOL,
            "=" => (lhs - rhs).abs() <= PROB_TOL,
            _ => false,
        };
        Self {
            name: name.into(),
            lhs,
            relation: relation.into(),
            rhs,
            holds,
        }
    }
}

/// A constructed counterexample with its recomputed measurements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub theorem: String,
    pub domains: Vec<DomainRecord>,
    pub checks: Vec<Check>,
    pub ledger: BTreeMap<String, Value>,
    pub verdict: String,
}

impl Certificate {
    /// Whether every check marked essential holds; non-essential checks are
    /// named with a leading `info:`.
    pub fn verified(&self) -> bool {
        self.checks.iter().filter(|c| !c.name.starts_with("info:")).all(|c| c.holds)
    }
}

/// The two-atom overlap domain: ID mass on `(x, h1(x))` and OOD mass on `x`,
/// where `h1(x)` is an ID label and some `h2(x)` rejects. Both partial risk
/// infima are zero while the supports overlap.
pub fn overlap_domain(space: &HypothesisSpace) -> Result<FiniteDomain> {
    let k = space.k();
    let reject = (k + 1) as u8;
    for x in 0..space.n_points() {
        let h1 = space.iter().find(|m| m[x] != reject);
        let h2 = space.iter().any(|m| m[x] == reject);
        if let (Some(h1), true) = (h1, h2) {
            let n = space.n_points();
            return FiniteDomain::new(
                IdJoint::dirac(n, k, x, h1[x] as usize)?,
                OodMarginal::dirac(n, x)?,
                0.5,
            );
        }
    }
    Err(LabError::NoCounterexample(
        "the projected space is trivial: no point is both accepted and rejected".into(),
    ))
}

/// Gap between the α-risk infimum and the affine combination of the partial
/// infima, with the overlap lower bound `c_α |A_{m0}| / m0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub alpha: f64,
    pub inf_alpha: f64,
    pub inf_in: f64,
    pub inf_out: f64,
    pub gap: f64,
    pub c_alpha: f64,
    pub m0: u64,
    pub a_measure: f64,
    /// Present when both partial infima vanish, the regime where the bound applies.
    pub bound: Option<f64>,
    pub bound_holds: bool,
}

/// `min_{y1} [(1-α) min_{y2 <= K} l(y1, y2) + α l(y1, K+1)]`.
pub fn c_alpha(loss: &LossTable, alpha: f64) -> f64 {
    let k = loss.k();
    (1..=k + 1)
        .map(|y1| {
            let id_min = (1..=k).map(|y2| loss.loss(y1, y2)).fold(f64::INFINITY, f64::min);
            (1.0 - alpha) * id_min + alpha * loss.loss(y1, k + 1)
        })
        .fold(f64::INFINITY, f64::min)
}

/// `(m0, |A_{m0}|)` maximizing `|A_m| / m` where
/// `A_m = {x : f_I(x) >= 1/m and f_O(x) >= 1/m}` under counting measure.
pub fn overlap_level(domain: &FiniteDomain) -> (u64, usize) {
    let id = domain.id_part().marginal();
    let levels: Vec<f64> = id
        .iter()
        .zip(domain.ood_part().masses())
        .map(|(a, b)| a.min(*b))
        .filter(|v| *v > 0.0)
        .collect();
    let mut best = (1u64, 0usize);
    let mut best_ratio = 0.0;
    for &v in &levels {
        let mut m = (1.0 / v).ceil().max(1.0) as u64;
        if v < 1.0 / m as f64 {
            m += 1;
        }
        let count = levels.iter().filter(|&&w| w >= 1.0 / m as f64).count();
        let ratio = count as f64 / m as f64;
        if ratio > best_ratio || (ratio == best_ratio && m < best.0) {
            best = (m, count);
            best_ratio = ratio;
        }
    }
    best
}

pub fn alpha_risk_gap(domain: &FiniteDomain, space: &HypothesisSpace, loss: &LossTable, alpha: f64) -> Result<GapReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LabError::DomainParameter(format!("alpha = {alpha} not in (0, 1)")));
    }
    let table = partial_risk_table(space, domain, loss)?;
    let inf_in = table.iter().map(|t| t.0).fold(f64::INFINITY, f64::min);
    let inf_out = table.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
    let inf_alpha = table.iter().map(|&(i, o)| combine(i, o, alpha)).fold(f64::INFINITY, f64::min);
    let gap = (inf_alpha - combine(inf_in, inf_out, alpha)).max(0.0);
    let c = c_alpha(loss, alpha);
    let (m0, count) = overlap_level(domain);
    let bound = (inf_in == 0.0 && inf_out == 0.0).then(|| c * count as f64 / m0 as f64);
    let bound_holds = bound.is_none_or(|b| gap >= b - PROB_TOL);
    Ok(GapReport {
        alpha,
        inf_alpha,
        inf_in,
        inf_out,
        gap,
        c_alpha: c,
        m0,
        a_measure: count as f64,
        bound,
        bound_holds,
    })
}

/// Certificate for the overlap construction at `alpha`.
pub fn overlap_certificate(space: &HypothesisSpace, loss: &LossTable, alpha: f64) -> Result<Certificate> {
    let d = overlap_domain(space)?;
    let gap = alpha_risk_gap(&d, space, loss, alpha)?;
    let linear = check_linear_risk(space, &d, loss)?;
    let mut checks = vec![
        Check::new("inf ID risk", gap.inf_in, "=", 0.0),
        Check::new("inf OOD risk", gap.inf_out, "=", 0.0),
        Check::new("overlap points", d.overlap_set().len() as f64, ">", 0.0),
        Check::new("alpha-risk gap", gap.gap, ">", 0.0),
    ];
    if let Some(b) = gap.bound {
        checks.push(Check::new("gap versus overlap bound", gap.gap, ">=", b));
    }
    let mut ledger = BTreeMap::new();
    ledger.insert("alpha".into(), json!(alpha));
    ledger.insert("c_alpha".into(), json!(gap.c_alpha));
    ledger.insert("m0".into(), json!(gap.m0));
    ledger.insert("overlap_measure".into(), json!(gap.a_measure));
    ledger.insert("linear_condition_holds".into(), json!(linear.holds));
    Ok(Certificate {
        theorem: "overlap-impossibility".into(),
        domains: vec![DomainRecord::from_domain(&d)],
        checks,
        ledger,
        verdict: "an overlapping domain with zero partial risk infima breaks the linear condition; risk learning fails in every prior-unknown space containing it".into(),
    })
}

/// Separate-space construction from a missing projected pattern.
///
/// Takes the member `h̃` with the most ID-labelled points, lets `C` be those
/// points, and scans labellings of `C` containing both labels in
/// lexicographic order for one absent from `φ∘H` restricted to `C`. The
/// domain is uniform over the ID part of the pattern (labels from `h̃`) and
/// uniform over its OOD part. A pattern with positive OOD risk infimum is
/// preferred; otherwise the first missing pattern is used, for which the
/// linear condition fails directly.
pub fn sauer_pattern_domain(space: &HypothesisSpace, loss: &LossTable) -> Result<Certificate> {
    let k = space.k();
    let n = space.n_points();
    let projected = phi_project(space);
    let v = vc_dimension(&projected)?;
    let (tilde_idx, _) = space
        .iter()
        .enumerate()
        .map(|(i, m)| (i, m.iter().filter(|&&l| (l as usize) <= k).count()))
        .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let tilde = space.member(tilde_idx).to_vec();
    let c: Vec<usize> = (0..n).filter(|&x| (tilde[x] as usize) <= k).collect();
    if c.len() < 2 {
        return Err(LabError::NoCounterexample("no member accepts two or more points".into()));
    }
    if c.len() > PATTERN_POINTS_CAP {
        return Err(LabError::SizeCap {
            requested: c.len() as u128,
            cap: PATTERN_POINTS_CAP as u128,
        });
    }
    let realized = patterns_on(&projected, &c);
    let candidates = exhaustive_labelings(c.len(), 1)?;

    let mut fallback = None;
    let mut chosen = None;
    for pattern in candidates.iter() {
        if realized.contains(pattern) || !pattern.contains(&1) || !pattern.contains(&2) {
            continue;
        }
        let d = pattern_domain(&c, pattern, &tilde, n, k)?;
        let table = partial_risk_table(space, &d, loss)?;
        let inf_out = table.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
        if fallback.is_none() {
            fallback = Some((pattern.to_vec(), d.clone()));
        }
        if inf_out > 0.0 {
            chosen = Some((pattern.to_vec(), d));
            break;
        }
    }
    let Some((pattern, d)) = chosen.or(fallback) else {
        return Err(LabError::NoCounterexample(format!(
            "all {} two-label patterns on the {} accepted points are realized",
            (1u128 << c.len()) - 2,
            c.len()
        )));
    };

    let table = partial_risk_table(space, &d, loss)?;
    let inf_in = table.iter().map(|t| t.0).fold(f64::INFINITY, f64::min);
    let inf_out = table.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
    let inf = table.iter().map(|&(i, o)| combine(i, o, 0.5)).fold(f64::INFINITY, f64::min);
    let gap = inf - combine(inf_in, inf_out, 0.5);
    let checks = vec![
        Check::new("inf risk", inf, ">", 0.0),
        Check::new("inf ID risk", inf_in, "=", 0.0),
        if inf_out > 0.0 {
            Check::new("inf OOD risk", inf_out, ">", 0.0)
        } else {
            Check::new("linear-condition gap at alpha 0.5", gap, ">", 0.0)
        },
        Check::new(
            "info: realized patterns within the counting bound",
            realized.len() as f64,
            "<=",
            sauer_bound(v, c.len() - 1) as f64,
        ),
    ];
    let mut ledger = BTreeMap::new();
    ledger.insert("vc_dimension".into(), json!(v));
    ledger.insert("accepted_points".into(), json!(c));
    ledger.insert("pattern".into(), json!(pattern));
    ledger.insert("realized_patterns".into(), json!(realized.len()));
    ledger.insert("sauer_bound".into(), json!(sauer_bound(v, c.len() - 1).to_string()));
    ledger.insert("all_patterns".into(), json!((1u128 << c.len()).to_string()));
    ledger.insert("separate".into(), json!(d.is_separate()));
    let rejectable = check_separate_assumption(space);
    ledger.insert("every_point_rejectable".into(), json!(rejectable));
    let verdict = match (inf_out > 0.0, rejectable) {
        (true, true) => "separate domain with zero ID infimum and positive OOD infimum in a space that can reject every point; risk learning fails in the separate space",
        (true, false) => "separate domain with zero ID infimum and positive OOD infimum; the space cannot reject every point, so the domain is reported without a learnability conclusion",
        (false, _) => "separate domain violating the linear condition; risk learning fails in the separate space",
    };
    Ok(Certificate {
        theorem: "separate-space-capacity".into(),
        domains: vec![DomainRecord::from_domain(&d)],
        checks,
        ledger,
        verdict: verdict.into(),
    })
}

fn pattern_domain(c: &[usize], pattern: &[u8], tilde: &[u8], n: usize, k: usize) -> Result<FiniteDomain> {
    let id_atoms: Vec<(usize, usize)> = c
        .iter()
        .zip(pattern)
        .filter(|(_, &p)| p == 1)
        .map(|(&x, _)| (x, tilde[x] as usize))
        .collect();
    let ood: Vec<usize> = c.iter().zip(pattern).filter(|(_, &p)| p == 2).map(|(&x, _)| x).collect();
    FiniteDomain::new(IdJoint::uniform(n, k, &id_atoms)?, OodMarginal::uniform(n, &ood)?, 0.5)
}

/// Number of distinct weak orders the rankers induce on `X`.
pub fn order_type_count(space: &[RankingFunction]) -> usize {
    space
        .iter()
        .map(|r| {
            let n = r.len();
            (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| r.score(a).partial_cmp(&r.score(b)).map(|o| o as i8).unwrap_or(2))
                .collect::<Vec<i8>>()
        })
        .collect::<BTreeSet<_>>()
        .len()
}

/// Finds a uniform ID/OOD split of `X` that no ranker orders perfectly.
///
/// Splits are enumerated by bitmask (bit set means ID) from 1 to `2^m - 2`;
/// the ledger records how many are perfectly ranked against the counting
/// bound `(m - 1)` times the number of induced order types.
pub fn auc_unrealizable_split(space: &[RankingFunction]) -> Result<Certificate> {
    let Some(first) = space.first() else {
        return Err(LabError::Empty("ranking space"));
    };
    let m = first.len();
    let total = (1u128 << m.min(127)) - 2;
    if m >= 32 || total > SPLIT_CAP {
        return Err(LabError::SizeCap {
            requested: total,
            cap: SPLIT_CAP,
        });
    }
    if m < 2 {
        return Err(LabError::NoCounterexample("a single point admits no split".into()));
    }
    let mut realized = 0u128;
    let mut first_failure = None;
    for mask in 1u32..(1u32 << m) - 1 {
        if split_separable(space, mask, m) {
            realized += 1;
        } else if first_failure.is_none() {
            first_failure = Some(mask);
        }
    }
    let order_types = order_type_count(space);
    let bound = (m as u128 - 1) * order_types as u128;
    let Some(mask) = first_failure else {
        return Err(LabError::NoCounterexample(format!("all {total} splits are perfectly ranked")));
    };
    let id_points: Vec<usize> = (0..m).filter(|x| mask & (1 << x) != 0).collect();
    let ood_points: Vec<usize> = (0..m).filter(|x| mask & (1 << x) == 0).collect();
    let id_atoms: Vec<(usize, usize)> = id_points.iter().map(|&x| (x, 1)).collect();
    let d = FiniteDomain::new(IdJoint::uniform(m, 1, &id_atoms)?, OodMarginal::uniform(m, &ood_points)?, 0.5)?;
    let id = d.id_part().marginal();
    let sup = sup_auc_parts(space, &id, d.ood_part().masses())?.value;
    let checks = vec![
        Check::new("sup AUC", sup, "<", 1.0 - AUC_REALIZABLE_TOL + PROB_TOL),
        Check::new("info: Bayes sup AUC", bayes_sup_auc_parts(&id, d.ood_part().masses()), "=", 1.0),
        Check::new("realized splits within counting bound", realized as f64, "<=", bound as f64),
    ];
    let mut ledger = BTreeMap::new();
    ledger.insert("points".into(), json!(m));
    ledger.insert("total_splits".into(), json!(total.to_string()));
    ledger.insert("realized_splits".into(), json!(realized.to_string()));
    ledger.insert("order_types".into(), json!(order_types));
    ledger.insert("counting_bound".into(), json!(bound.to_string()));
    ledger.insert("id_points".into(), json!(id_points));
    Ok(Certificate {
        theorem: "auc-split-counting".into(),
        domains: vec![DomainRecord::from_domain(&d)],
        checks,
        ledger,
        verdict: "a separable split that the ranking space cannot order perfectly; AUC realizability fails in the separate space".into(),
    })
}

/// `(28 d + 14) ln(14 d + 7)`, the feature-space size above which a separate
/// ranking space of projected VC dimension `d` cannot be AUC learnable in
/// the separate space (natural log; the base is not pinned down in the source).
pub fn separate_auc_size_threshold(d: usize) -> f64 {
    let d = d as f64;
    (28.0 * d + 14.0) * (14.0 * d + 7.0).ln()
}

/// Two Dirac OOD marginals at distinct ID-charged points `x`, `x'`.
///
/// Verifies the overlap-mass premise `I(P ∩ P') < min(I(P), I(P'))` with
/// `P = {x}`, `P' = {x'}`, and reports the AUC linear condition over `rankers`.
pub fn dirac_auc_overlap_pair(
    id_part: &IdJoint,
    x: usize,
    xp: usize,
    rankers: &[RankingFunction],
) -> Result<Certificate> {
    let n = id_part.n_points();
    if x == xp {
        return Err(LabError::Premise("the two OOD atoms must differ".into()));
    }
    if x >= n || xp >= n {
        return Err(LabError::Premise("OOD atom outside X".into()));
    }
    let id = id_part.marginal();
    if id[x] <= 0.0 || id[xp] <= 0.0 {
        return Err(LabError::Premise("both OOD atoms must carry ID mass".into()));
    }
    let o1 = OodMarginal::dirac(n, x)?;
    let o2 = OodMarginal::dirac(n, xp)?;
    let report = check_linear_auc(rankers, id_part, &o1, &o2, &default_alpha_grid())?;
    let w = report.witness.clone().unwrap_or_default();
    let sup1 = sup_auc_parts(rankers, &id, o1.masses())?.value;
    let sup2 = sup_auc_parts(rankers, &id, o2.masses())?.value;
    let checks = vec![
        Check::new("overlap mass of P and P'", 0.0, "<", id[x].min(id[xp])),
        Check::new(
            "info: sup over the space equals Bayes sup (first pair)",
            sup1,
            "=",
            bayes_sup_auc_parts(&id, o1.masses()),
        ),
        Check::new(
            "info: sup over the space equals Bayes sup (second pair)",
            sup2,
            "=",
            bayes_sup_auc_parts(&id, o2.masses()),
        ),
        Check::new("info: AUC linear condition gap", w.gap.unwrap_or(0.0).abs(), ">", 0.0),
    ];
    let mut ledger = BTreeMap::new();
    ledger.insert("points".into(), json!([x, xp]));
    ledger.insert("linear_condition_holds".into(), json!(report.holds));
    ledger.insert("report".into(), serde_json::to_value(&report).map_err(|e| LabError::Internal(e.to_string()))?);
    let d1 = FiniteDomain::new(id_part.clone(), o1, 0.5)?;
    let d2 = FiniteDomain::new(id_part.clone(), o2, 0.5)?;
    Ok(Certificate {
        theorem: "dirac-overlap-auc".into(),
        domains: vec![DomainRecord::from_domain(&d1), DomainRecord::from_domain(&d2)],
        checks,
        ledger,
        verdict: if report.holds {
            "the AUC linear condition holds over this ranking space".into()
        } else {
            "the AUC linear condition fails: AUC learning is impossible for any domain space containing both domains".into()
        },
    })
}

/// `φ` applied to one labelling (re-exported for certificate consumers).
pub fn project_labels(labels: &[u8], k: usize) -> Vec<u8> {
    phi(labels, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auc::{all_order_types, linear_rankers_1d};
    use crate::hypothesis::threshold_space;

    #[test]
    fn overlap_construction() {
        let loss = LossTable::zero_one(1);
        let space = HypothesisSpace::from_members(1, 1, vec![vec![1], vec![2]]).unwrap();
        let d = overlap_domain(&space).unwrap();
        assert_eq!(d.joint_mass(0, 1), 0.5);
        assert_eq!(d.joint_mass(0, 2), 0.5);
        let gap = alpha_risk_gap(&d, &space, &loss, 0.5).unwrap();
        assert_eq!(gap.gap, 0.5);
        assert_eq!(gap.c_alpha, 0.5);
        assert_eq!(gap.m0, 1);
        assert_eq!(gap.bound, Some(0.5));
        assert!(overlap_certificate(&space, &loss, 0.5).unwrap().verified());

        assert!(overlap_domain(&exhaustive_labelings(1, 1).unwrap()).is_ok());
        let trivial = HypothesisSpace::from_members(1, 1, vec![vec![1]]).unwrap();
        assert!(matches!(overlap_domain(&trivial), Err(LabError::NoCounterexample(_))));
    }

    #[test]
    fn gap_vanishes_at_small_alpha_and_on_separate_domains() {
        let loss = LossTable::zero_one(1);
        let space = HypothesisSpace::from_members(1, 1, vec![vec![1], vec![2]]).unwrap();
        let d = overlap_domain(&space).unwrap();
        let small = alpha_risk_gap(&d, &space, &loss, 1e-6).unwrap();
        assert!(small.gap <= 1e-6 + 1e-15);

        let sep = FiniteDomain::new(IdJoint::dirac(2, 1, 0, 1).unwrap(), OodMarginal::dirac(2, 1).unwrap(), 0.5).unwrap();
        let all = exhaustive_labelings(2, 1).unwrap();
        assert_eq!(alpha_risk_gap(&sep, &all, &loss, 0.3).unwrap().gap, 0.0);
    }

    #[test]
    fn sauer_on_thresholds() {
        let loss = LossTable::zero_one(1);
        let cert = sauer_pattern_domain(&threshold_space(3).unwrap(), &loss).unwrap();
        assert!(cert.verified(), "{cert:#?}");
        assert_eq!(cert.ledger["separate"], json!(true));
        assert!(matches!(
            sauer_pattern_domain(&exhaustive_labelings(3, 1).unwrap(), &loss),
            Err(LabError::NoCounterexample(_))
        ));
    }

    #[test]
    fn auc_split_on_linear_rankers() {
        let rankers = linear_rankers_1d(&[0.0, 1.0, 2.0]).unwrap();
        let cert = auc_unrealizable_split(&rankers).unwrap();
        assert!(cert.verified());
        assert_eq!(cert.ledger["id_points"], json!([1]));
        assert!(matches!(
            auc_unrealizable_split(&all_order_types(3).unwrap()),
            Err(LabError::NoCounterexample(_))
        ));
    }

    #[test]
    fn size_threshold_natural_log() {
        assert_eq!(separate_auc_size_threshold(1).ceil(), 128.0);
    }

    #[test]
    fn dirac_pair_premises() {
        let id = IdJoint::uniform(2, 1, &[(0, 1), (1, 1)]).unwrap();
        let orders = all_order_types(2).unwrap();
        let cert = dirac_auc_overlap_pair(&id, 0, 1, &orders).unwrap();
        assert!(cert.verified());
        assert_eq!(cert.checks[0].rhs, 0.5);
        assert_eq!(cert.ledger["linear_condition_holds"], json!(false));
        assert!(matches!(dirac_auc_overlap_pair(&id, 0, 0, &orders), Err(LabError::Premise(_))));
        let point = IdJoint::dirac(2, 1, 0, 1).unwrap();
        assert!(matches!(dirac_auc_overlap_pair(&point, 0, 1, &orders), Err(LabError::Premise(_))));
    }
}
