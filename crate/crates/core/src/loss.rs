//! Loss tables and the risk functionals, with exact infima by enumeration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{FiniteDomain, PROB_TOL};
use crate::error::{LabError, Result};
use crate::hypothesis::HypothesisSpace;

/// Largest hypothesis space any enumeration will touch.
pub const ENUMERATION_CAP: usize = 10_000_000;

/// A `(K+1) x (K+1)` loss `l(predicted, true)` with zero diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossTable {
    // values[pred - 1][truth - 1]
    values: Vec<Vec<f64>>,
    bound: f64,
}

impl LossTable {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let size = values.len();
        if size < 2 {
            return Err(LabError::Shape("loss table needs at least 2 labels".into()));
        }
        let mut bound = 0.0_f64;
        for (i, row) in values.iter().enumerate() {
            if row.len() != size {
                return Err(LabError::Shape(format!("loss row {} has {} entries, expected {size}", i + 1, row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(LabError::DomainParameter(format!("loss entry ({}, {}) = {v}", i + 1, j + 1)));
                }
                if (i == j) != (v == 0.0) {
                    return Err(LabError::DomainParameter(format!(
                        "loss ({}, {}) = {v}: zero exactly on the diagonal required",
                        i + 1,
                        j + 1
                    )));
                }
                bound = bound.max(v);
            }
        }
        Ok(Self { values, bound })
    }

    /// Zero-one loss over labels `1..=K+1`.
    pub fn zero_one(k: usize) -> Self {
        let size = k + 1;
        let values = (0..size)
            .map(|i| (0..size).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        Self { values, bound: 1.0 }
    }

    /// Looks up a built-in table by name.
    pub fn named(name: &str, k: usize) -> Result<Self> {
        match name {
            "zero-one" => Ok(Self::zero_one(k)),
            other => Err(LabError::Config(format!("unknown loss table '{other}'"))),
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.values
                .iter()
                .map(|row| row.iter().map(|v| v * c).collect())
                .collect(),
        )
    }

    /// `K`, the number of ID classes.
    pub fn k(&self) -> usize {
        self.values.len() - 1
    }

    /// `l(predicted, truth)` with 1-based labels.
    pub fn loss(&self, predicted: usize, truth: usize) -> f64 {
        self.values[predicted - 1][truth - 1]
    }

    /// `B`, the largest entry.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
}

fn check_compatible(h: &[u8], domain: &FiniteDomain, loss: &LossTable) -> Result<()> {
    if h.len() != domain.n_points() {
        return Err(LabError::Evaluation(format!(
            "hypothesis defined on {} points, domain has {}",
            h.len(),
            domain.n_points()
        )));
    }
    if loss.k() != domain.k() {
        return Err(LabError::Shape(format!("loss has K = {}, domain has K = {}", loss.k(), domain.k())));
    }
    let top = domain.k() + 1;
    if let Some(bad) = h.iter().find(|&&l| l == 0 || l as usize > top) {
        return Err(LabError::LabelRange(format!("hypothesis label {bad} not in 1..={top}")));
    }
    Ok(())
}

/// `R^in`: expected loss over the ID joint.
pub fn risk_in(h: &[u8], domain: &FiniteDomain, loss: &LossTable) -> Result<f64> {
    check_compatible(h, domain, loss)?;
    Ok(risk_in_unchecked(h, domain, loss))
}

/// `R^out`: expected loss against label `K+1` over the OOD marginal.
pub fn risk_out(h: &[u8], domain: &FiniteDomain, loss: &LossTable) -> Result<f64> {
    check_compatible(h, domain, loss)?;
    Ok(risk_out_unchecked(h, domain, loss))
}

/// Risk of `h` under the domain's own mixture.
pub fn risk(h: &[u8], domain: &FiniteDomain, loss: &LossTable) -> Result<f64> {
    alpha_risk(h, domain, loss, domain.pi_out())
}

/// `R^α = (1 - α) R^in + α R^out`.
pub fn alpha_risk(h: &[u8], domain: &FiniteDomain, loss: &LossTable, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_compatible(h, domain, loss)?;
    Ok(combine(risk_in_unchecked(h, domain, loss), risk_out_unchecked(h, domain, loss), alpha))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(LabError::DomainParameter(format!("alpha = {alpha} not in [0, 1]")));
    }
    Ok(())
}

pub(crate) fn combine(r_in: f64, r_out: f64, alpha: f64) -> f64 {
    (1.0 - alpha) * r_in + alpha * r_out
}

pub(crate) fn risk_in_unchecked(h: &[u8], domain: &FiniteDomain, loss: &LossTable) -> f64 {
    domain
        .id_part()
        .atoms()
        .map(|(x, y, p)| p * loss.loss(h[x] as usize, y))
        .sum()
}

pub(crate) fn risk_out_unchecked(h: &[u8], domain: &FiniteDomain, loss: &LossTable) -> f64 {
    let reject = domain.k() + 1;
    domain
        .ood_part()
        .masses()
        .iter()
        .enumerate()
        .filter(|(_, p)| **p > 0.0)
        .map(|(x, p)| p * loss.loss(h[x] as usize, reject))
        .sum()
}

/// Exact minimum over a finite space with every minimiser kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Argmin {
    pub value: f64,
    /// Indices of every member within [`PROB_TOL`] of the minimum, ascending.
    pub argmin: Vec<usize>,
    /// Lowest-index minimiser.
    pub representative: usize,
}

impl Argmin {
    pub(crate) fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(LabError::Empty("hypothesis space"));
        }
        let value = values.iter().copied().fold(f64::INFINITY, f64::min);
        let argmin: Vec<usize> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v <= value + PROB_TOL)
            .map(|(i, _)| i)
            .collect();
        Ok(Self {
            value,
            representative: argmin[0],
            argmin,
        })
    }
}

fn check_space(space: &HypothesisSpace, domain: &FiniteDomain, loss: &LossTable) -> Result<()> {
    if space.len() > ENUMERATION_CAP {
        return Err(LabError::SizeCap {
            requested: space.len() as u128,
            cap: ENUMERATION_CAP as u128,
        });
    }
    if space.is_empty() {
        return Err(LabError::Empty("hypothesis space"));
    }
    check_compatible(space.member(0), domain, loss)?;
    if space.k() != domain.k() {
        return Err(LabError::Shape(format!("space has K = {}, domain has K = {}", space.k(), domain.k())));
    }
    Ok(())
}

/// `(R^in, R^out)` for every member, in member order.
pub fn partial_risk_table(space: &HypothesisSpace, domain: &FiniteDomain, loss: &LossTable) -> Result<Vec<(f64, f64)>> {
    check_space(space, domain, loss)?;
    Ok((0..space.len())
        .into_par_iter()
        .map(|i| {
            let h = space.member(i);
            (risk_in_unchecked(h, domain, loss), risk_out_unchecked(h, domain, loss))
        })
        .collect())
}

/// `inf_{h in H} R^α_D(h)` by full enumeration.
pub fn inf_alpha_risk(space: &HypothesisSpace, domain: &FiniteDomain, loss: &LossTable, alpha: f64) -> Result<Argmin> {
    check_alpha(alpha)?;
    let table = partial_risk_table(space, domain, loss)?;
    let values: Vec<f64> = table.iter().map(|&(i, o)| combine(i, o, alpha)).collect();
    Argmin::from_values(&values)
}

pub fn inf_risk_in(space: &HypothesisSpace, domain: &FiniteDomain, loss: &LossTable) -> Result<Argmin> {
    inf_alpha_risk(space, domain, loss, 0.0)
}

pub fn inf_risk_out(space: &HypothesisSpace, domain: &FiniteDomain, loss: &LossTable) -> Result<Argmin> {
    inf_alpha_risk(space, domain, loss, 1.0)
}

pub fn inf_risk(space: &HypothesisSpace, domain: &FiniteDomain, loss: &LossTable) -> Result<Argmin> {
    inf_alpha_risk(space, domain, loss, domain.pi_out())
}

/// Whether misclassifying between ID labels never costs more than rejecting:
/// `l(y2, y1) <= l(K+1, y1)` for all ID labels `y1, y2`.
pub fn check_loss_dominance(loss: &LossTable, k: usize) -> bool {
    if loss.k() != k {
        return false;
    }
    (1..=k).all(|y1| (1..=k).all(|y2| loss.loss(y2, y1) <= loss.loss(k + 1, y1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{IdJoint, OodMarginal};
    use crate::hypothesis::HypothesisSpace;

    fn single_point_overlap() -> FiniteDomain {
        FiniteDomain::new(IdJoint::dirac(1, 1, 0, 1).unwrap(), OodMarginal::dirac(1, 0).unwrap(), 0.5).unwrap()
    }

    #[test]
    fn loss_table_validation() {
        assert!(LossTable::new(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).is_err());
        assert!(LossTable::new(vec![vec![1.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(LossTable::new(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0]]).is_err());
        let t = LossTable::new(vec![vec![0.0, 3.0], vec![0.5, 0.0]]).unwrap();
        assert_eq!(t.bound(), 3.0);
        assert_eq!(t.loss(1, 2), 3.0);
        assert!(LossTable::named("hinge", 1).is_err());
    }

    #[test]
    fn risk_examples() {
        let loss = LossTable::zero_one(1);
        let d = FiniteDomain::new(IdJoint::dirac(2, 1, 0, 1).unwrap(), OodMarginal::dirac(2, 1).unwrap(), 0.5).unwrap();
        assert_eq!(risk(&[1, 2], &d, &loss).unwrap(), 0.0);
        assert_eq!(risk(&[1, 1], &d, &loss).unwrap(), 0.5);
        assert_eq!(risk_out(&[2, 2], &d, &loss).unwrap(), 0.0);
        assert_eq!(risk_in(&[2, 2], &d, &loss).unwrap(), 1.0);
        assert_eq!(risk_out(&[1, 1], &d, &loss).unwrap(), 1.0);
        assert!(risk(&[1], &d, &loss).is_err());
        assert!(risk(&[1, 3], &d, &loss).is_err());
    }

    #[test]
    fn alpha_endpoints() {
        let loss = LossTable::zero_one(1);
        let d = single_point_overlap();
        let h = [1u8];
        assert_eq!(alpha_risk(&h, &d, &loss, 0.0).unwrap(), risk_in(&h, &d, &loss).unwrap());
        assert_eq!(alpha_risk(&h, &d, &loss, 1.0).unwrap(), risk_out(&h, &d, &loss).unwrap());
        assert_eq!(alpha_risk(&h, &d, &loss, 0.5).unwrap(), 0.5);
        assert!(alpha_risk(&h, &d, &loss, 1.5).is_err());
    }

    #[test]
    fn infimum_over_the_two_constants() {
        let loss = LossTable::zero_one(1);
        let d = single_point_overlap();
        let space = HypothesisSpace::from_members(1, 1, vec![vec![1], vec![2]]).unwrap();
        let inf = inf_alpha_risk(&space, &d, &loss, 0.5).unwrap();
        assert_eq!(inf.value, 0.5);
        assert_eq!(inf.argmin, vec![0, 1]);
        assert_eq!(inf.representative, 0);
        assert_eq!(inf_risk_in(&space, &d, &loss).unwrap().argmin, vec![0]);
        assert_eq!(inf_risk_out(&space, &d, &loss).unwrap().argmin, vec![1]);
    }

    #[test]
    fn dominance_examples() {
        assert!(check_loss_dominance(&LossTable::zero_one(3), 3));
        let mut v = vec![vec![1.0; 3]; 3];
        for (i, row) in v.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        v[1][0] = 5.0;
        assert!(!check_loss_dominance(&LossTable::new(v).unwrap(), 2));
        assert!(check_loss_dominance(&LossTable::new(vec![vec![0.0, 9.0], vec![0.1, 0.0]]).unwrap(), 1));
    }
}
