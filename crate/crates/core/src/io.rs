//! JSON persistence for domains, spaces, rankers, networks, losses and
//! certificates, plus the CSV writer used for learning curves.
//!
//! Loaders return a [`Loaded`] value carrying any tolerance warnings so the
//! caller decides where they go; parse errors keep serde's line/column.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::auc::RankingFunction;
use crate::domain::{DomainSpaceSpec, FeatureSpace, FiniteDomain, IdJoint, OodMarginal, SpaceKind, LOAD_TOL};
use crate::error::{LabError, Result};
use crate::fcnn::{Architecture, Layer, ReluNetwork};
use crate::hypothesis::HypothesisSpace;
use crate::loss::LossTable;

/// A loaded value together with non-fatal diagnostics.
#[derive(Clone, Debug)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdAtom {
    pub point: usize,
    pub label: usize,
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OodAtom {
    pub point: usize,
    pub p: f64,
}

/// Serialized form of a [`FiniteDomain`], optionally with its feature points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub n_points: Option<usize>,
    pub k: usize,
    pub pi_out: f64,
    pub id: Vec<IdAtom>,
    pub ood: Vec<OodAtom>,
}

impl DomainRecord {
    pub fn from_domain(d: &FiniteDomain) -> Self {
        Self {
            points: None,
            n_points: Some(d.n_points()),
            k: d.k(),
            pi_out: d.pi_out(),
            id: d.id_part().atoms().map(|(point, label, p)| IdAtom { point, label, p }).collect(),
            ood: d
                .ood_part()
                .masses()
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0.0)
                .map(|(point, &p)| OodAtom { point, p })
                .collect(),
        }
    }

    pub fn with_points(mut self, x: &FeatureSpace) -> Self {
        self.points = Some(x.points().to_vec());
        self
    }

    fn size(&self) -> Result<usize> {
        match (&self.points, self.n_points) {
            (Some(p), Some(n)) if p.len() != n => Err(LabError::Shape(format!(
                "n_points = {n} but {} points listed",
                p.len()
            ))),
            (Some(p), _) => Ok(p.len()),
            (None, Some(n)) => Ok(n),
            (None, None) => Err(LabError::Shape("domain needs `points` or `n_points`".into())),
        }
    }

    /// Builds the domain exactly as stored; masses must already sum to one.
    pub fn to_domain(&self) -> Result<FiniteDomain> {
        self.build(false).map(|l| l.value)
    }

    /// Builds the domain, rescaling each part whose mass is within
    /// [`LOAD_TOL`] of one and rejecting anything further off.
    pub fn to_domain_renormalized(&self) -> Result<Loaded<FiniteDomain>> {
        self.build(true)
    }

    fn build(&self, renormalize: bool) -> Result<Loaded<FiniteDomain>> {
        let n = self.size()?;
        let mut warnings = Vec::new();
        let id_sum: f64 = self.id.iter().map(|a| a.p).sum();
        let ood_sum: f64 = self.ood.iter().map(|a| a.p).sum();
        let id_scale = if renormalize { scale("ID", id_sum, &mut warnings)? } else { 1.0 };
        let ood_scale = if renormalize { scale("OOD", ood_sum, &mut warnings)? } else { 1.0 };
        let entries: Vec<(usize, usize, f64)> = self.id.iter().map(|a| (a.point, a.label, a.p * id_scale)).collect();
        let id = IdJoint::new(n, self.k, &entries)?;
        let mut ood = vec![0.0; n];
        for a in &self.ood {
            let slot = ood
                .get_mut(a.point)
                .ok_or_else(|| LabError::Shape(format!("OOD atom at point {} outside X of size {n}", a.point)))?;
            *slot += a.p * ood_scale;
        }
        Ok(Loaded {
            value: FiniteDomain::new(id, OodMarginal::new(ood)?, self.pi_out)?,
            warnings,
        })
    }
}

fn scale(part: &str, sum: f64, warnings: &mut Vec<String>) -> Result<f64> {
    if (sum - 1.0).abs() > LOAD_TOL {
        return Err(LabError::MassNotNormalized { sum, tolerance: LOAD_TOL });
    }
    if sum != 1.0 {
        warnings.push(format!("{part} mass sums to {sum:.15}; renormalized"));
    }
    Ok(1.0 / sum)
}

/// Serialized domain space: a kind tag plus members.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DomainSpaceRecord {
    pub kind: String,
    #[serde(default)]
    pub members: Vec<DomainRecord>,
    /// Admissible ID parts for the `finite-id` kind.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub id_parts: Vec<DomainRecord>,
    /// Base weights for the `density` kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

impl DomainSpaceRecord {
    pub fn to_spec(&self) -> Result<Loaded<DomainSpaceSpec>> {
        let mut warnings = Vec::new();
        let mut load = |r: &DomainRecord| -> Result<FiniteDomain> {
            let l = r.to_domain_renormalized()?;
            warnings.extend(l.warnings);
            Ok(l.value)
        };
        let members = self.members.iter().map(&mut load).collect::<Result<Vec<_>>>()?;
        let kind = match self.kind.as_str() {
            "single" => SpaceKind::Single,
            "total" => SpaceKind::Total,
            "separate" => SpaceKind::Separate,
            "finite-id" => {
                let ids = self
                    .id_parts
                    .iter()
                    .map(|r| load(r).map(|d| d.id_part().clone()))
                    .collect::<Result<Vec<_>>>()?;
                let ids = if ids.is_empty() {
                    members.iter().map(|d| d.id_part().clone()).collect()
                } else {
                    ids
                };
                SpaceKind::FiniteId(ids)
            }
            "density" => SpaceKind::DensityBased {
                base: self
                    .base
                    .clone()
                    .ok_or_else(|| LabError::Config("density space needs `base`".into()))?,
                b: self.b.ok_or_else(|| LabError::Config("density space needs `b`".into()))?,
            },
            other => return Err(LabError::Config(format!("unknown domain-space kind `{other}`"))),
        };
        Ok(Loaded {
            value: DomainSpaceSpec::new(kind, members)?,
            warnings,
        })
    }
}

/// Serialized hypothesis space: labels are 1-based, `K + 1` rejects.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceRecord {
    pub k: usize,
    pub members: Vec<Vec<u8>>,
}

impl SpaceRecord {
    pub fn from_space(h: &HypothesisSpace) -> Self {
        Self {
            k: h.k(),
            members: h.members(),
        }
    }

    pub fn to_space(&self) -> Result<HypothesisSpace> {
        let n = self
            .members
            .first()
            .map(Vec::len)
            .ok_or(LabError::Empty("hypothesis space"))?;
        HypothesisSpace::from_members(n, self.k, self.members.clone())
    }
}

/// A ranker as a point-index → score map.
pub type RankerRecord = BTreeMap<usize, f64>;

pub fn ranker_to_record(r: &RankingFunction) -> RankerRecord {
    r.scores().iter().copied().enumerate().collect()
}

pub fn ranker_from_record(rec: &RankerRecord) -> Result<RankingFunction> {
    let n = rec.len();
    if rec.keys().copied().ne(0..n) {
        return Err(LabError::Shape("ranker must score points 0..n exactly once".into()));
    }
    RankingFunction::new(rec.values().copied().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkRecord {
    pub widths: Vec<usize>,
    pub layers: Vec<LayerRecord>,
}

impl NetworkRecord {
    pub fn from_network(net: &ReluNetwork) -> Self {
        Self {
            widths: net.arch().widths().to_vec(),
            layers: net
                .layers()
                .iter()
                .map(|l| LayerRecord {
                    weights: l.weights.clone(),
                    bias: l.bias.clone(),
                })
                .collect(),
        }
    }

    pub fn to_network(&self) -> Result<ReluNetwork> {
        let arch = Architecture::new(self.widths.clone())?;
        let layers = self
            .layers
            .iter()
            .map(|l| Layer {
                weights: l.weights.clone(),
                bias: l.bias.clone(),
            })
            .collect();
        ReluNetwork::new(arch, layers)
    }
}

/// A loss given by name (`"zero-one"`) or as a dense `(K+1)²` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LossRecord {
    Named(String),
    Dense(Vec<Vec<f64>>),
}

impl Default for LossRecord {
    fn default() -> Self {
        LossRecord::Named("zero-one".into())
    }
}

impl LossRecord {
    pub fn to_loss(&self, k: usize) -> Result<LossTable> {
        match self {
            LossRecord::Named(name) => LossTable::named(name, k),
            LossRecord::Dense(values) => {
                if values.len() != k + 1 {
                    return Err(LabError::Shape(format!(
                        "loss table has {} rows, expected {}",
                        values.len(),
                        k + 1
                    )));
                }
                LossTable::new(values.clone())
            }
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| LabError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| LabError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json_string(value)?)
}

pub fn load_domain(path: &Path) -> Result<Loaded<FiniteDomain>> {
    read_json::<DomainRecord>(path)?.to_domain_renormalized()
}

/// Loads a domain file and its feature points, when listed.
pub fn load_domain_with_points(path: &Path) -> Result<(Loaded<FiniteDomain>, Option<FeatureSpace>)> {
    let rec: DomainRecord = read_json(path)?;
    let x = rec.points.clone().map(FeatureSpace::new).transpose()?;
    Ok((rec.to_domain_renormalized()?, x))
}

pub fn save_domain(path: &Path, d: &FiniteDomain) -> Result<()> {
    write_json(path, &DomainRecord::from_domain(d))
}

pub fn load_domain_space(path: &Path) -> Result<Loaded<DomainSpaceSpec>> {
    read_json::<DomainSpaceRecord>(path)?.to_spec()
}

pub fn load_space(path: &Path) -> Result<HypothesisSpace> {
    read_json::<SpaceRecord>(path)?.to_space()
}

pub fn save_space(path: &Path, h: &HypothesisSpace) -> Result<()> {
    write_json(path, &SpaceRecord::from_space(h))
}

pub fn load_rankers(path: &Path) -> Result<Vec<RankingFunction>> {
    read_json::<Vec<RankerRecord>>(path)?.iter().map(ranker_from_record).collect()
}

pub fn save_rankers(path: &Path, rankers: &[RankingFunction]) -> Result<()> {
    write_json(path, &rankers.iter().map(ranker_to_record).collect::<Vec<_>>())
}

pub fn load_network(path: &Path) -> Result<ReluNetwork> {
    read_json::<NetworkRecord>(path)?.to_network()
}

pub fn save_network(path: &Path, net: &ReluNetwork) -> Result<()> {
    write_json(path, &NetworkRecord::from_network(net))
}

/// Formats a number with 12 significant digits in a stable textual form.
pub fn fmt_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.11e}");
    let parsed: f64 = s.parse().unwrap_or(v);
    let exp = parsed.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let mut out = format!("{parsed:.decimals$}");
        if out.contains('.') {
            out = out.trim_end_matches('0').trim_end_matches('.').to_string();
        }
        out
    } else {
        s
    }
}

/// Resolves `p` against the directory holding `base` unless already absolute.
pub fn resolve_relative(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or_else(|| Path::new(".")).join(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id_p: f64) -> DomainRecord {
        DomainRecord {
            points: Some(vec![vec![0.0], vec![1.0]]),
            n_points: None,
            k: 1,
            pi_out: 0.3,
            id: vec![IdAtom { point: 0, label: 1, p: id_p }],
            ood: vec![OodAtom { point: 1, p: 1.0 }],
        }
    }

    #[test]
    fn renormalization_window() {
        let ok = record(0.9999999995).to_domain_renormalized().unwrap();
        assert_eq!(ok.warnings.len(), 1);
        assert_eq!(ok.value.id_part().mass(0, 1), 1.0);
        assert!(record(1.0).to_domain_renormalized().unwrap().warnings.is_empty());
        assert!(matches!(
            record(0.5).to_domain_renormalized(),
            Err(LabError::MassNotNormalized { .. })
        ));
    }

    #[test]
    fn domain_round_trip_keeps_key() {
        let d = record(1.0).to_domain().unwrap();
        let text = to_json_string(&DomainRecord::from_domain(&d)).unwrap();
        let back: DomainRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_domain().unwrap().id_equivalence_key(), d.id_equivalence_key());
        assert_eq!(back.to_domain().unwrap(), d);
    }

    #[test]
    fn parse_errors_carry_position() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.json");
        fs::write(&p, "{\n  \"k\": 1,\n  oops\n}").unwrap();
        let err = load_domain(&p).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(fmt_sig12(0.5), "0.5");
        assert_eq!(fmt_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig12(16.0), "16");
        assert_eq!(fmt_sig12(0.0), "0");
        assert_eq!(fmt_sig12(1e-9), "1.00000000000e-9");
    }

    #[test]
    fn loss_records() {
        let named: LossRecord = serde_json::from_str("\"zero-one\"").unwrap();
        assert_eq!(named.to_loss(2).unwrap(), LossTable::zero_one(2));
        let dense: LossRecord = serde_json::from_str("[[0,1],[1,0]]").unwrap();
        assert_eq!(dense.to_loss(1).unwrap(), LossTable::zero_one(1));
        assert!(dense.to_loss(2).is_err());
    }
}
