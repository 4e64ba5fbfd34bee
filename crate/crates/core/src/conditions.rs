//! Exact checkers for the linear, multi-linear, compatibility and
//! realizability conditions, plus the learnability verdict table.
//!
//! Every infimum over a finite space is attained, so the ε-ball formulations
//! collapse to intersections of exact argmin sets.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::auc::{sup_auc, sup_auc_parts, RankingFunction};
use crate::counterexamples::sauer_pattern_domain;
use crate::domain::{DomainSpaceSpec, FiniteDomain, IdJoint, OodMarginal, SpaceKind};
use crate::error::{LabError, Result};
use crate::hypothesis::{
    bullet_compose, check_constant_closure, check_separate_assumption, check_separate_ranking, exhaustive_labelings,
    phi_project, HypothesisSpace, Provenance,
};
use crate::loss::{check_loss_dominance, combine, inf_risk, partial_risk_table, Argmin, LossTable};

/// Tolerance for equality of AUC suprema.
pub const SUP_TOL: f64 = 1e-9;

/// Tolerance under which a supremum of AUC counts as perfect.
pub const AUC_REALIZABLE_TOL: f64 = 1e-12;

/// Grid of ε values reported alongside exact compatibility.
pub const EPSILON_GRID: [f64; 3] = [1.0, 0.1, 0.01];

/// Default α grid `{0, 0.1, ..., 0.9}`.
pub fn default_alpha_grid() -> Vec<f64> {
    (0..10).map(|i| i as f64 / 10.0).collect()
}

/// Evidence that a condition fails.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain_index: Option<usize>,
    pub note: String,
}

/// Outcome of one condition check; a failing report always carries a witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub citations: Vec<String>,
    /// ε values of the reporting grid at which the ε-relaxed condition holds.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub epsilon_holds: Vec<f64>,
}

impl ConditionReport {
    fn new(condition: &str, holds: bool, witness: Option<Witness>, citations: &[&str]) -> Self {
        Self {
            condition: condition.into(),
            holds,
            witness: if holds { None } else { witness },
            citations: citations.iter().map(|c| c.to_string()).collect(),
            epsilon_holds: Vec::new(),
        }
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = b.iter().copied().collect();
    a.iter().copied().filter(|i| set.contains(i)).collect()
}

fn column_argmin(table: &[(f64, f64)], out: bool) -> Result<Argmin> {
    let values: Vec<f64> = table.iter().map(|&(i, o)| if out { o } else { i }).collect();
    Argmin::from_values(&values)
}

/// The linear condition under risk: `argmin R^in ∩ argmin R^out ≠ ∅`.
pub fn check_linear_risk(space: &HypothesisSpace, domain: &FiniteDomain, loss: &LossTable) -> Result<ConditionReport> {
    let table = partial_risk_table(space, domain, loss)?;
    let r_in = column_argmin(&table, false)?;
    let r_out = column_argmin(&table, true)?;
    let holds = !intersect(&r_in.argmin, &r_out.argmin).is_empty();
    let witness = (!holds).then(|| {
        let alpha = 0.5;
        let inf = table
            .iter()
            .map(|&(i, o)| combine(i, o, alpha))
            .fold(f64::INFINITY, f64::min);
        let rhs = combine(r_in.value, r_out.value, alpha);
        Witness {
            alpha: Some(alpha),
            gap: Some(inf - rhs),
            lhs: Some(inf),
            rhs: Some(rhs),
            note: "no hypothesis minimises ID and OOD risk simultaneously".into(),
            ..Witness::default()
        }
    });
    Ok(ConditionReport::new("linear-risk", holds, witness, &["linear-condition-risk"]))
}

/// Direct α-grid form of the linear condition:
/// `inf R^α = (1-α) inf R^in + α inf R^out` at every grid point, within `tol`.
pub fn linear_risk_on_grid(
    space: &HypothesisSpace,
    domain: &FiniteDomain,
    loss: &LossTable,
    alphas: &[f64],
    tol: f64,
) -> Result<bool> {
    let table = partial_risk_table(space, domain, loss)?;
    let inf_in = column_argmin(&table, false)?.value;
    let inf_out = column_argmin(&table, true)?.value;
    Ok(alphas.iter().all(|&a| {
        let inf = table.iter().map(|&(i, o)| combine(i, o, a)).fold(f64::INFINITY, f64::min);
        (inf - combine(inf_in, inf_out, a)).abs() <= tol
    }))
}

/// The multi-linear condition for an OOD convex decomposition `Q_1, ..., Q_l`:
/// some hypothesis minimises the ID risk and every `R_{Q_j}` at once.
pub fn check_multilinear(
    space: &HypothesisSpace,
    id_part: &IdJoint,
    decomposition: &[OodMarginal],
    loss: &LossTable,
) -> Result<ConditionReport> {
    if decomposition.is_empty() {
        return Err(LabError::Empty("OOD decomposition"));
    }
    let mut common: Option<Vec<usize>> = None;
    let mut failing = None;
    for (j, q) in decomposition.iter().enumerate() {
        let d = FiniteDomain::new(id_part.clone(), q.clone(), 0.5)?;
        let table = partial_risk_table(space, &d, loss)?;
        let start = match common.take() {
            Some(c) => c,
            None => column_argmin(&table, false)?.argmin,
        };
        let next = intersect(&start, &column_argmin(&table, true)?.argmin);
        if next.is_empty() && failing.is_none() {
            failing = Some(j);
        }
        common = Some(next);
    }
    let holds = common.is_some_and(|c| !c.is_empty());
    let witness = failing.map(|j| Witness {
        domain_index: Some(j),
        note: format!("argmin intersection becomes empty at component {j}"),
        ..Witness::default()
    });
    Ok(ConditionReport::new("multi-linear-risk", holds, witness, &["multi-linear-condition"]))
}

/// The linear condition under AUC for two OOD marginals sharing an ID part.
pub fn check_linear_auc(
    space: &[RankingFunction],
    id_part: &IdJoint,
    ood1: &OodMarginal,
    ood2: &OodMarginal,
    alpha_grid: &[f64],
) -> Result<ConditionReport> {
    let id = id_part.marginal();
    let sup1 = sup_auc_parts(space, &id, ood1.masses())?.value;
    let sup2 = sup_auc_parts(space, &id, ood2.masses())?.value;
    let mut worst: Option<(f64, f64, f64)> = None;
    for &alpha in alpha_grid {
        let mix = OodMarginal::mixture(ood1, ood2, alpha)?;
        let lhs = sup_auc_parts(space, &id, mix.masses())?.value;
        let rhs = alpha * sup1 + (1.0 - alpha) * sup2;
        if worst.is_none_or(|(_, l, r)| (lhs - rhs).abs() > (l - r).abs()) {
            worst = Some((alpha, lhs, rhs));
        }
    }
    let holds = worst.is_none_or(|(_, l, r)| (l - r).abs() <= SUP_TOL);
    let witness = worst.map(|(alpha, lhs, rhs)| Witness {
        alpha: Some(alpha),
        gap: Some(lhs - rhs),
        lhs: Some(lhs),
        rhs: Some(rhs),
        note: "sup AUC of the OOD mixture versus the mixture of sups".into(),
        ..Witness::default()
    });
    Ok(ConditionReport::new("linear-auc", holds, witness, &["linear-condition-auc"]))
}

/// The compatibility condition on one ID-equivalence class.
///
/// `holds` is decided exactly through argmin intersections; the ε grid is
/// evaluated only for reporting.
pub fn check_compatibility(
    space: &HypothesisSpace,
    class: &[FiniteDomain],
    loss: &LossTable,
    epsilon_grid: &[f64],
) -> Result<ConditionReport> {
    let Some(first) = class.first() else {
        return Err(LabError::Empty("equivalence class"));
    };
    let key = first.id_equivalence_key();
    if let Some(i) = class.iter().position(|d| d.id_equivalence_key() != key) {
        return Err(LabError::MixedEquivalence(format!("domain {i} has a different ID part")));
    }
    let tables = class
        .iter()
        .map(|d| partial_risk_table(space, d, loss))
        .collect::<Result<Vec<_>>>()?;

    let mut common = column_argmin(&tables[0], false)?.argmin;
    let mut failing = None;
    for (i, t) in tables.iter().enumerate() {
        common = intersect(&common, &column_argmin(t, true)?.argmin);
        if common.is_empty() {
            failing = Some(i);
            break;
        }
    }
    let holds = failing.is_none();

    let mut epsilon_holds = Vec::new();
    for &eps in epsilon_grid {
        let inf_in = column_argmin(&tables[0], false)?.value;
        let inf_outs: Vec<f64> = tables.iter().map(|t| column_argmin(t, true).map(|a| a.value)).collect::<Result<_>>()?;
        let ok = (0..space.len()).any(|h| {
            tables[0][h].0 <= inf_in + eps && tables.iter().zip(&inf_outs).all(|(t, &o)| t[h].1 <= o + eps)
        });
        if ok {
            epsilon_holds.push(eps);
        }
    }

    let witness = failing.map(|i| Witness {
        domain_index: Some(i),
        epsilon: Some(0.0),
        note: format!("no common minimiser once domain {i} of the class is included"),
        ..Witness::default()
    });
    let mut report = ConditionReport::new("compatibility", holds, witness, &["compatibility-condition"]);
    report.epsilon_holds = epsilon_holds;
    Ok(report)
}

/// Some member attains zero risk on the domain.
pub fn check_risk_realizability(space: &HypothesisSpace, domain: &FiniteDomain, loss: &LossTable) -> Result<bool> {
    Ok(inf_risk(space, domain, loss)?.value == 0.0)
}

/// Some ranker attains AUC 1 (up to [`AUC_REALIZABLE_TOL`]).
pub fn check_auc_realizability(space: &[RankingFunction], domain: &FiniteDomain) -> Result<bool> {
    Ok(sup_auc(space, domain)?.value >= 1.0 - AUC_REALIZABLE_TOL)
}

/// Three-valued learnability outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Learnable,
    NotLearnable,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Learnable => "learnable",
            Verdict::NotLearnable => "not-learnable",
            Verdict::Undetermined => "undetermined",
        })
    }
}

/// A theorem premise that fired, with a plain-language statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Premise {
    pub id: String,
    pub statement: String,
    pub detail: String,
}

fn premise(id: &str, detail: impl Into<String>) -> Premise {
    Premise {
        id: id.into(),
        statement: premise_statement(id).into(),
        detail: detail.into(),
    }
}

/// Plain-language statement of each premise the verdict table can cite.
pub fn premise_statement(id: &str) -> &'static str {
    match id {
        "overlap-zero-infima" => {
            "a member has ID/OOD overlap while both the ID and OOD risk infima are zero, so the linear condition fails and risk learning is impossible in any prior-unknown space"
        }
        "linear-condition-risk" => {
            "the linear condition under risk is necessary in prior-unknown spaces and a member violates it"
        }
        "total-space-risk" => {
            "in the total space risk learning is impossible once the projected space holds more than one function"
        }
        "single-space-risk" => "for a single-distribution space, risk learnability is equivalent to the linear condition",
        "separate-space-capacity" => {
            "with every point rejectable, a separate domain built from a pattern missing from the projected space has zero ID risk infimum and positive risk infimum, so risk learning fails in the separate space"
        }
        "separate-space-one-class" => {
            "with K = 1, finite X, every point rejectable and the all-ID constant available, separate-space risk learnability holds exactly when the space contains every labelling except the all-OOD constant"
        }
        "separate-space-multiclass" => {
            "a composed space whose detector part contains every labelling except the all-OOD constant, with a loss where ID confusions never cost more than rejection, is learnable in the separate space for finite X"
        }
        "finite-id-compatibility" => {
            "for finitely many ID distributions on bounded X, risk learnability is equivalent to compatibility on every ID-equivalence class"
        }
        "density-realizability" => {
            "for a density-based space on finite X, risk realizability and finite Natarajan dimension imply learnability"
        }
        "density-network-equivalence" => {
            "for K = 1 with network- or score-induced spaces, risk learnability in a density-based space is equivalent to realizability"
        }
        "linear-condition-auc" => "the linear condition under AUC is necessary and a pair of members sharing an ID part violates it",
        "total-space-auc" => {
            "two rankers that order some pair of points oppositely make AUC learning impossible in the total space"
        }
        "separate-space-auc" => {
            "for a separate ranking space on finite X, AUC learnability in the separate space is equivalent to AUC realizability"
        }
        "density-auc-realizability" => {
            "a constant-closed separate ranking space with AUC realizability on finite X is AUC learnable in the density-based space"
        }
        _ => "unrecognised premise",
    }
}

/// Which metric a verdict is about, with the objects it needs.
#[derive(Clone, Copy, Debug)]
pub enum VerdictMode<'a> {
    Risk {
        space: &'a HypothesisSpace,
        loss: &'a LossTable,
        /// Optional `(H_in, H_b)` factors when `space = H_in • H_b`.
        decomposition: Option<(&'a HypothesisSpace, &'a HypothesisSpace)>,
    },
    Auc {
        rankers: &'a [RankingFunction],
        /// Designated constant pool for constant closure; `None` leaves the
        /// density-based AUC question undetermined.
        constant_pool: Option<&'a [f64]>,
    },
}

/// Verdict with the premises that fired and the reports backing them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub verdict: Verdict,
    pub space_kind: String,
    pub premises: Vec<Premise>,
    pub reports: Vec<ConditionReport>,
}

/// Learnability verdict licensed by the theorems on the explicit members
/// and structure of `spec`. Not-learnable findings take precedence.
pub fn learnability_verdict(spec: &DomainSpaceSpec, mode: VerdictMode<'_>) -> Result<VerdictRecord> {
    let mut record = match mode {
        VerdictMode::Risk {
            space,
            loss,
            decomposition,
        } => risk_verdict(spec, space, loss, decomposition)?,
        VerdictMode::Auc { rankers, constant_pool } => auc_verdict(spec, rankers, constant_pool)?,
    };
    record.space_kind = spec.kind().name().into();
    Ok(record)
}

fn record(verdict: Verdict, premises: Vec<Premise>, reports: Vec<ConditionReport>) -> VerdictRecord {
    VerdictRecord {
        verdict,
        space_kind: String::new(),
        premises,
        reports,
    }
}

fn undetermined(reports: Vec<ConditionReport>) -> VerdictRecord {
    record(Verdict::Undetermined, Vec::new(), reports)
}

fn risk_verdict(
    spec: &DomainSpaceSpec,
    space: &HypothesisSpace,
    loss: &LossTable,
    decomposition: Option<(&HypothesisSpace, &HypothesisSpace)>,
) -> Result<VerdictRecord> {
    let k = space.k();
    let mut reports = Vec::new();

    for (i, d) in spec.members().iter().enumerate() {
        let table = partial_risk_table(space, d, loss)?;
        let inf_in = column_argmin(&table, false)?.value;
        let inf_out = column_argmin(&table, true)?.value;
        if !d.overlap_set().is_empty() && inf_in == 0.0 && inf_out == 0.0 {
            let rep = check_linear_risk(space, d, loss)?;
            reports.push(rep);
            return Ok(record(
                Verdict::NotLearnable,
                vec![premise("overlap-zero-infima", format!("member {i}"))],
                reports,
            ));
        }
    }
    for (i, d) in spec.members().iter().enumerate() {
        let rep = check_linear_risk(space, d, loss)?;
        let holds = rep.holds;
        reports.push(rep);
        if !holds {
            return Ok(record(
                Verdict::NotLearnable,
                vec![premise("linear-condition-risk", format!("member {i}"))],
                reports,
            ));
        }
    }

    let projected = phi_project(space);
    match spec.kind() {
        SpaceKind::Total => {
            if projected.len() > 1 {
                return Ok(record(
                    Verdict::NotLearnable,
                    vec![premise("total-space-risk", format!("|φ∘H| = {}", projected.len()))],
                    reports,
                ));
            }
            Ok(undetermined(reports))
        }
        SpaceKind::Single => {
            if spec.members().is_empty() {
                return Ok(undetermined(reports));
            }
            Ok(record(
                Verdict::Learnable,
                vec![premise("single-space-risk", "linear condition holds on the anchor domain")],
                reports,
            ))
        }
        SpaceKind::Separate => separate_risk_verdict(space, loss, decomposition, reports, k),
        SpaceKind::FiniteId(_) => {
            let classes = spec.equivalence_classes();
            if classes.is_empty() {
                return Ok(undetermined(reports));
            }
            for (c, class) in classes.iter().enumerate() {
                let rep = check_compatibility(space, class, loss, &EPSILON_GRID)?;
                let holds = rep.holds;
                reports.push(rep);
                if !holds {
                    return Ok(record(
                        Verdict::NotLearnable,
                        vec![premise("finite-id-compatibility", format!("class {c} is incompatible"))],
                        reports,
                    ));
                }
            }
            Ok(record(
                Verdict::Learnable,
                vec![premise(
                    "finite-id-compatibility",
                    format!("compatibility holds on all {} classes", classes.len()),
                )],
                reports,
            ))
        }
        SpaceKind::DensityBased { .. } => {
            if spec.members().is_empty() {
                return Ok(undetermined(reports));
            }
            let mut all = true;
            for d in spec.members() {
                if !check_risk_realizability(space, &d.mix_alpha(0.5)?, loss)? {
                    all = false;
                }
            }
            let network_based = matches!(space.provenance(), Provenance::FcnnInduced | Provenance::ScoreInduced);
            if all {
                Ok(record(
                    Verdict::Learnable,
                    vec![premise("density-realizability", "every member is risk-realizable")],
                    reports,
                ))
            } else if k == 1 && network_based {
                Ok(record(
                    Verdict::NotLearnable,
                    vec![premise("density-network-equivalence", "some member is not risk-realizable")],
                    reports,
                ))
            } else {
                Ok(undetermined(reports))
            }
        }
    }
}

fn separate_risk_verdict(
    space: &HypothesisSpace,
    loss: &LossTable,
    decomposition: Option<(&HypothesisSpace, &HypothesisSpace)>,
    mut reports: Vec<ConditionReport>,
    k: usize,
) -> Result<VerdictRecord> {
    let n = space.n_points();
    let assumption = check_separate_assumption(space);
    let all_binary = exhaustive_labelings(n, 1)?;
    let all_but_reject = |s: &HypothesisSpace| {
        all_binary
            .iter()
            .filter(|m| m.contains(&1))
            .all(|m| s.contains(m))
    };

    if k == 1 && assumption && space.contains(&vec![1u8; n]) {
        return Ok(if all_but_reject(space) {
            record(
                Verdict::Learnable,
                vec![premise("separate-space-one-class", "space contains all labellings but the all-OOD one")],
                reports,
            )
        } else {
            record(
                Verdict::NotLearnable,
                vec![premise("separate-space-one-class", "some labelling other than the all-OOD one is missing")],
                reports,
            )
        });
    }

    if assumption {
        if let Ok(cert) = sauer_pattern_domain(space, loss) {
            if cert.verified() {
                if let Some(d) = cert.domains.first() {
                    reports.push(check_linear_risk(space, &d.to_domain()?, loss)?);
                }
                return Ok(record(
                    Verdict::NotLearnable,
                    vec![premise("separate-space-capacity", cert.verdict.clone())],
                    reports,
                ));
            }
        }
    }

    if let Some((h_in, h_b)) = decomposition {
        let composed = bullet_compose(h_in, h_b)?;
        let same = composed.len() == space.len() && composed.iter().all(|m| space.contains(m));
        if same && all_but_reject(h_b) && check_loss_dominance(loss, k) {
            return Ok(record(
                Verdict::Learnable,
                vec![premise(
                    "separate-space-multiclass",
                    "detector space is rich enough and the loss favours confusion over rejection",
                )],
                reports,
            ));
        }
    }
    Ok(undetermined(reports))
}

/// Whether every split of `X` into two non-empty parts is strictly separated
/// (ID part above OOD part) by some ranker; equivalently, AUC realizability
/// over the whole separate space.
pub fn all_splits_separable(rankers: &[RankingFunction]) -> Result<bool> {
    let Some(first) = rankers.first() else {
        return Err(LabError::Empty("ranking space"));
    };
    let n = first.len();
    if n > 20 {
        return Err(LabError::SizeCap {
            requested: 1u128 << n,
            cap: 1 << 20,
        });
    }
    Ok((1u32..(1u32 << n) - 1).all(|mask| split_separable(rankers, mask, n)))
}

pub(crate) fn split_separable(rankers: &[RankingFunction], id_mask: u32, n: usize) -> bool {
    rankers.iter().any(|r| {
        let lo_id = (0..n)
            .filter(|x| id_mask & (1 << x) != 0)
            .map(|x| r.score(x))
            .fold(f64::INFINITY, f64::min);
        let hi_ood = (0..n)
            .filter(|x| id_mask & (1 << x) == 0)
            .map(|x| r.score(x))
            .fold(f64::NEG_INFINITY, f64::max);
        lo_id > hi_ood
    })
}

fn auc_verdict(spec: &DomainSpaceSpec, rankers: &[RankingFunction], pool: Option<&[f64]>) -> Result<VerdictRecord> {
    let mut reports = Vec::new();
    let grid = default_alpha_grid();
    for class in spec.equivalence_classes() {
        for i in 0..class.len() {
            for j in (i + 1)..class.len() {
                let rep = check_linear_auc(rankers, class[i].id_part(), class[i].ood_part(), class[j].ood_part(), &grid)?;
                if !rep.holds {
                    reports.push(rep);
                    return Ok(record(
                        Verdict::NotLearnable,
                        vec![premise("linear-condition-auc", "members sharing an ID part")],
                        reports,
                    ));
                }
            }
        }
    }

    match spec.kind() {
        SpaceKind::Total => {
            let n = rankers.first().map_or(0, RankingFunction::len);
            for x in 0..n {
                for xp in 0..n {
                    let up = rankers.iter().any(|r| r.score(x) > r.score(xp));
                    let down = rankers.iter().any(|r| r.score(xp) > r.score(x));
                    if up && down {
                        return Ok(record(
                            Verdict::NotLearnable,
                            vec![premise("total-space-auc", format!("points {x} and {xp}"))],
                            reports,
                        ));
                    }
                }
            }
            Ok(undetermined(reports))
        }
        SpaceKind::Separate => {
            if !check_separate_ranking(rankers) {
                return Ok(undetermined(reports));
            }
            let ok = all_splits_separable(rankers)?;
            Ok(record(
                if ok { Verdict::Learnable } else { Verdict::NotLearnable },
                vec![premise(
                    "separate-space-auc",
                    if ok {
                        "every split of X is perfectly ranked"
                    } else {
                        "some split of X cannot be perfectly ranked"
                    },
                )],
                reports,
            ))
        }
        SpaceKind::DensityBased { .. } => {
            let Some(pool) = pool else {
                return Ok(undetermined(reports));
            };
            if spec.members().is_empty() || !check_constant_closure(rankers, pool) || !check_separate_ranking(rankers) {
                return Ok(undetermined(reports));
            }
            for d in spec.members() {
                if !check_auc_realizability(rankers, d)? {
                    return Ok(undetermined(reports));
                }
            }
            Ok(record(
                Verdict::Learnable,
                vec![premise("density-auc-realizability", "every member is AUC-realizable")],
                reports,
            ))
        }
        SpaceKind::Single | SpaceKind::FiniteId(_) => Ok(undetermined(reports)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auc::all_order_types;

    fn two_constants() -> HypothesisSpace {
        HypothesisSpace::from_members(1, 1, vec![vec![1], vec![2]]).unwrap()
    }

    fn overlap_atom() -> FiniteDomain {
        FiniteDomain::new(IdJoint::dirac(1, 1, 0, 1).unwrap(), OodMarginal::dirac(1, 0).unwrap(), 0.5).unwrap()
    }

    fn separate_pair() -> FiniteDomain {
        FiniteDomain::new(IdJoint::dirac(2, 1, 0, 1).unwrap(), OodMarginal::dirac(2, 1).unwrap(), 0.5).unwrap()
    }

    #[test]
    fn linear_risk_examples() {
        let loss = LossTable::zero_one(1);
        let all = exhaustive_labelings(2, 1).unwrap();
        assert!(check_linear_risk(&all, &separate_pair(), &loss).unwrap().holds);

        let rep = check_linear_risk(&two_constants(), &overlap_atom(), &loss).unwrap();
        assert!(!rep.holds);
        let w = rep.witness.unwrap();
        assert_eq!(w.alpha, Some(0.5));
        assert_eq!(w.gap, Some(0.5));

        let single = HypothesisSpace::from_members(1, 1, vec![vec![1]]).unwrap();
        assert!(check_linear_risk(&single, &overlap_atom(), &loss).unwrap().holds);
    }

    #[test]
    fn multilinear_examples() {
        let loss = LossTable::zero_one(1);
        let id = IdJoint::dirac(3, 1, 0, 1).unwrap();
        let q = vec![OodMarginal::dirac(3, 1).unwrap(), OodMarginal::dirac(3, 2).unwrap()];
        let all = exhaustive_labelings(3, 1).unwrap();
        assert!(check_multilinear(&all, &id, &q, &loss).unwrap().holds);

        let split = HypothesisSpace::from_members(3, 1, vec![vec![1, 2, 1], vec![1, 1, 2]]).unwrap();
        let rep = check_multilinear(&split, &id, &q, &loss).unwrap();
        assert!(!rep.holds);
        assert!(rep.witness.is_some());
        assert!(check_multilinear(&split, &id, &[], &loss).is_err());
    }

    #[test]
    fn linear_auc_examples() {
        let id = IdJoint::uniform(2, 1, &[(0, 1), (1, 1)]).unwrap();
        let o1 = OodMarginal::dirac(2, 0).unwrap();
        let o2 = OodMarginal::dirac(2, 1).unwrap();
        let orders = all_order_types(2).unwrap();
        let grid = default_alpha_grid();
        assert!(check_linear_auc(&orders, &id, &o1, &o1, &grid).unwrap().holds);
        let rep = check_linear_auc(&orders, &id, &o1, &o2, &grid).unwrap();
        assert!(!rep.holds);
        let w = rep.witness.unwrap();
        assert!(w.lhs.unwrap() < w.rhs.unwrap());
    }

    #[test]
    fn compatibility_examples() {
        let loss = LossTable::zero_one(1);
        let all = exhaustive_labelings(3, 1).unwrap();
        let id = IdJoint::dirac(3, 1, 0, 1).unwrap();
        let a = FiniteDomain::new(id.clone(), OodMarginal::dirac(3, 1).unwrap(), 0.5).unwrap();
        let b = FiniteDomain::new(id.clone(), OodMarginal::dirac(3, 2).unwrap(), 0.3).unwrap();
        let rep = check_compatibility(&all, &[a.clone(), b.clone()], &loss, &EPSILON_GRID).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.epsilon_holds, EPSILON_GRID.to_vec());

        let narrow = HypothesisSpace::from_members(3, 1, vec![vec![1, 2, 1], vec![1, 1, 2]]).unwrap();
        let rep = check_compatibility(&narrow, &[a.clone(), b], &loss, &EPSILON_GRID).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.epsilon_holds, vec![1.0]);

        let other = FiniteDomain::new(IdJoint::dirac(3, 1, 1, 1).unwrap(), OodMarginal::dirac(3, 2).unwrap(), 0.5).unwrap();
        assert!(matches!(
            check_compatibility(&all, &[a, other], &loss, &EPSILON_GRID),
            Err(LabError::MixedEquivalence(_))
        ));
    }

    #[test]
    fn realizability_examples() {
        let loss = LossTable::zero_one(1);
        let all = exhaustive_labelings(2, 1).unwrap();
        assert!(check_risk_realizability(&all, &separate_pair(), &loss).unwrap());
        assert!(!check_risk_realizability(&exhaustive_labelings(1, 1).unwrap(), &overlap_atom(), &loss).unwrap());
        let noisy = FiniteDomain::new(
            IdJoint::new(2, 2, &[(0, 1, 0.5), (0, 2, 0.5)]).unwrap(),
            OodMarginal::dirac(2, 1).unwrap(),
            0.5,
        )
        .unwrap();
        assert!(!check_risk_realizability(&exhaustive_labelings(2, 2).unwrap(), &noisy, &LossTable::zero_one(2)).unwrap());

        let orders = all_order_types(2).unwrap();
        assert!(check_auc_realizability(&orders, &separate_pair()).unwrap());
        let same = FiniteDomain::new(IdJoint::dirac(2, 1, 0, 1).unwrap(), OodMarginal::dirac(2, 0).unwrap(), 0.5).unwrap();
        assert!(!check_auc_realizability(&orders, &same).unwrap());
    }

    #[test]
    fn verdict_examples() {
        let loss = LossTable::zero_one(1);
        let all = exhaustive_labelings(1, 1).unwrap();
        let mode = VerdictMode::Risk {
            space: &all,
            loss: &loss,
            decomposition: None,
        };
        let total = DomainSpaceSpec::new(SpaceKind::Total, vec![overlap_atom()]).unwrap();
        let v = learnability_verdict(&total, mode).unwrap();
        assert_eq!(v.verdict, Verdict::NotLearnable);
        assert_eq!(v.premises[0].id, "overlap-zero-infima");

        let id = IdJoint::dirac(2, 1, 0, 1).unwrap();
        let finite = DomainSpaceSpec::new(SpaceKind::FiniteId(vec![id]), vec![separate_pair()]).unwrap();
        let all2 = exhaustive_labelings(2, 1).unwrap();
        let v = learnability_verdict(
            &finite,
            VerdictMode::Risk {
                space: &all2,
                loss: &loss,
                decomposition: None,
            },
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::Learnable);
        assert_eq!(v.premises[0].id, "finite-id-compatibility");

        let empty_total = DomainSpaceSpec::new(SpaceKind::Total, vec![]).unwrap();
        let single = HypothesisSpace::from_members(2, 1, vec![vec![1, 1]]).unwrap();
        let v = learnability_verdict(
            &empty_total,
            VerdictMode::Risk {
                space: &single,
                loss: &loss,
                decomposition: None,
            },
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::Undetermined);
        assert!(v.premises.is_empty());
    }

    #[test]
    fn separate_auc_verdicts() {
        let orders = all_order_types(3).unwrap();
        let three = FiniteDomain::new(IdJoint::dirac(3, 1, 0, 1).unwrap(), OodMarginal::dirac(3, 1).unwrap(), 0.5).unwrap();
        let sep3 = DomainSpaceSpec::new(SpaceKind::Separate, vec![three]).unwrap();
        let v = learnability_verdict(
            &sep3,
            VerdictMode::Auc {
                rankers: &orders,
                constant_pool: None,
            },
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::Learnable);

        let orders2 = all_order_types(2).unwrap();
        let fid = DomainSpaceSpec::new(SpaceKind::FiniteId(vec![IdJoint::dirac(2, 1, 0, 1).unwrap()]), vec![separate_pair()]).unwrap();
        let v = learnability_verdict(
            &fid,
            VerdictMode::Auc {
                rankers: &orders2,
                constant_pool: None,
            },
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::Undetermined);
    }
}
