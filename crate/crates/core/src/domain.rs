//! Finite feature spaces, ID/OOD distributions and domains.
//!
//! Every measure lives on a finite point set and the counting measure is the
//! reference measure, so densities are plain point masses and every support,
//! overlap and density test is an exact enumeration.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Absolute tolerance for probability comparisons.
pub const PROB_TOL: f64 = 1e-12;

/// Tolerance accepted when loading hand-written mass tables.
pub const LOAD_TOL: f64 = 1e-9;

/// Largest supported ID class count (labels are stored as `u8`, `K + 1 <= 255`).
pub const MAX_CLASSES: usize = 254;

/// A finite set of distinct points in `R^d`, indexed in insertion order.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSpace {
    points: Vec<Vec<f64>>,
    dim: usize,
    min_distance: f64,
}

impl FeatureSpace {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(LabError::FeatureSpace("no points".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(LabError::FeatureSpace("dimension must be at least 1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(LabError::FeatureSpace(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(LabError::FeatureSpace(format!("point {i} is not finite")));
            }
        }
        let mut min_distance = f64::INFINITY;
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let dist = euclidean(&points[i], &points[j]);
                if dist == 0.0 {
                    return Err(LabError::FeatureSpace(format!("points {i} and {j} coincide")));
                }
                min_distance = min_distance.min(dist);
            }
        }
        Ok(Self {
            points,
            dim,
            min_distance,
        })
    }

    /// `n` collinear points `0, 1, ..., n - 1` on the real line.
    pub fn line(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| vec![i as f64]).collect())
    }

    /// Integer grid `{0..width} x {0..height}` in row-major order.
    pub fn grid(width: usize, height: usize) -> Result<Self> {
        let mut points = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                points.push(vec![x as f64, y as f64]);
            }
        }
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, index: usize) -> &[f64] {
        &self.points[index]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Minimum pairwise Euclidean distance `d0`; infinite for a single point.
    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        euclidean(&self.points[a], &self.points[b])
    }

    /// Largest absolute coordinate over all points.
    pub fn max_abs_coordinate(&self) -> f64 {
        self.points
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0_f64, |acc, c| acc.max(c.abs()))
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn check_normalized(masses: &[f64]) -> Result<()> {
    if let Some(bad) = masses.iter().find(|m| !m.is_finite() || **m < 0.0) {
        return Err(LabError::DomainParameter(format!("invalid mass {bad}")));
    }
    let sum: f64 = masses.iter().sum();
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(LabError::MassNotNormalized {
            sum,
            tolerance: PROB_TOL,
        });
    }
    Ok(())
}

/// Joint ID distribution over `(point, label)` with labels `1..=K`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdJoint {
    n_points: usize,
    k: usize,
    // row-major: mass[x * k + (y - 1)]
    mass: Vec<f64>,
}

impl IdJoint {
    /// Builds a joint from `(point, label, p)` triples; repeated cells accumulate.
    pub fn new(n_points: usize, k: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        if k == 0 || k > MAX_CLASSES {
            return Err(LabError::DomainParameter(format!("class count {k} out of range")));
        }
        let mut mass = vec![0.0; n_points * k];
        for &(x, y, p) in entries {
            if x >= n_points {
                return Err(LabError::DomainParameter(format!("point {x} out of range")));
            }
            if y == 0 || y > k {
                return Err(LabError::LabelRange(format!("ID label {y} not in 1..={k}")));
            }
            mass[x * k + (y - 1)] += p;
        }
        check_normalized(&mass)?;
        Ok(Self { n_points, k, mass })
    }

    pub fn dirac(n_points: usize, k: usize, point: usize, label: usize) -> Result<Self> {
        Self::new(n_points, k, &[(point, label, 1.0)])
    }

    /// Uniform over the given labelled atoms.
    pub fn uniform(n_points: usize, k: usize, atoms: &[(usize, usize)]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(LabError::Empty("ID atom list"));
        }
        let p = 1.0 / atoms.len() as f64;
        let entries: Vec<_> = atoms.iter().map(|&(x, y)| (x, y, p)).collect();
        Self::new(n_points, k, &entries)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mass(&self, point: usize, label: usize) -> f64 {
        self.mass[point * self.k + (label - 1)]
    }

    /// Masses of `(point, label)` cells with positive probability, in canonical order.
    pub fn atoms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.mass.iter().enumerate().filter(|(_, p)| **p > 0.0).map(move |(i, p)| {
            (i / self.k, i % self.k + 1, *p)
        })
    }

    /// Marginal `D_{X_I}` as a dense vector over points.
    pub fn marginal(&self) -> Vec<f64> {
        self.mass
            .chunks(self.k)
            .map(|row| row.iter().sum())
            .collect()
    }

    pub fn support(&self) -> Vec<usize> {
        self.marginal()
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Canonical key; two joints share it iff their masses agree after rounding to 12 decimals.
    pub fn key(&self) -> IdKey {
        IdKey {
            k: self.k,
            cells: self
                .atoms()
                .map(|(x, y, p)| (x, y, (p * 1e12).round() as i64))
                .filter(|(_, _, q)| *q != 0)
                .collect(),
        }
    }
}

/// OOD marginal `D_{X_O}`; the label is implicitly `K + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct OodMarginal {
    mass: Vec<f64>,
}

impl OodMarginal {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        check_normalized(&mass)?;
        Ok(Self { mass })
    }

    pub fn dirac(n_points: usize, point: usize) -> Result<Self> {
        if point >= n_points {
            return Err(LabError::DomainParameter(format!("point {point} out of range")));
        }
        let mut mass = vec![0.0; n_points];
        mass[point] = 1.0;
        Self::new(mass)
    }

    pub fn uniform(n_points: usize, points: &[usize]) -> Result<Self> {
        if points.is_empty() {
            return Err(LabError::Empty("OOD point list"));
        }
        let mut mass = vec![0.0; n_points];
        for &x in points {
            if x >= n_points {
                return Err(LabError::DomainParameter(format!("point {x} out of range")));
            }
            mass[x] += 1.0 / points.len() as f64;
        }
        Self::new(mass)
    }

    /// `alpha * a + (1 - alpha) * b`.
    pub fn mixture(a: &Self, b: &Self, alpha: f64) -> Result<Self> {
        if a.mass.len() != b.mass.len() {
            return Err(LabError::Shape("OOD marginals over different point sets".into()));
        }
        let mass = a
            .mass
            .iter()
            .zip(&b.mass)
            .map(|(x, y)| alpha * x + (1.0 - alpha) * y)
            .collect();
        Self::new(mass)
    }

    pub fn n_points(&self) -> usize {
        self.mass.len()
    }

    pub fn mass(&self, point: usize) -> f64 {
        self.mass[point]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn support(&self) -> Vec<usize> {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Canonical encoding of an [`IdJoint`]: sorted `(point, label, round(p * 1e12))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IdKey {
    pub k: usize,
    pub cells: Vec<(usize, usize, i64)>,
}

/// `D_XY = (1 - pi_out) * D_{X_I Y_I} + pi_out * D_{X_O Y_O}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDomain {
    id: IdJoint,
    ood: OodMarginal,
    pi_out: f64,
}

impl FiniteDomain {
    pub fn new(id: IdJoint, ood: OodMarginal, pi_out: f64) -> Result<Self> {
        if id.n_points() != ood.n_points() {
            return Err(LabError::Shape(format!(
                "ID part over {} points, OOD part over {}",
                id.n_points(),
                ood.n_points()
            )));
        }
        if !(0.0..1.0).contains(&pi_out) {
            return Err(LabError::DomainParameter(format!("pi_out = {pi_out} not in [0, 1)")));
        }
        Ok(Self { id, ood, pi_out })
    }

    pub fn id_part(&self) -> &IdJoint {
        &self.id
    }

    pub fn ood_part(&self) -> &OodMarginal {
        &self.ood
    }

    pub fn pi_out(&self) -> f64 {
        self.pi_out
    }

    pub fn k(&self) -> usize {
        self.id.k()
    }

    pub fn n_points(&self) -> usize {
        self.id.n_points()
    }

    /// Same ID and OOD parts, class prior replaced by `alpha`.
    pub fn mix_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.id.clone(), self.ood.clone(), alpha)
    }

    /// Joint mass of `(point, label)` for labels `1..=K+1`.
    pub fn joint_mass(&self, point: usize, label: usize) -> f64 {
        if label == self.k() + 1 {
            self.pi_out * self.ood.mass(point)
        } else {
            (1.0 - self.pi_out) * self.id.mass(point, label)
        }
    }

    /// Feature marginal `D_X` of the mixture.
    pub fn x_marginal(&self) -> Vec<f64> {
        self.id
            .marginal()
            .iter()
            .zip(self.ood.masses())
            .map(|(i, o)| (1.0 - self.pi_out) * i + self.pi_out * o)
            .collect()
    }

    /// Points charged by both the ID marginal and the OOD marginal.
    pub fn overlap_set(&self) -> BTreeSet<usize> {
        self.id
            .marginal()
            .iter()
            .zip(self.ood.masses())
            .enumerate()
            .filter(|(_, (i, o))| **i > 0.0 && **o > 0.0)
            .map(|(x, _)| x)
            .collect()
    }

    pub fn is_separate(&self) -> bool {
        self.overlap_set().is_empty()
    }

    /// Whether the balanced mixture `0.5 D_{X_I} + 0.5 D_{X_O}` has a density in `[1/b, b]`
    /// with respect to `base` on the support of `base`.
    pub fn check_density_bounds(&self, base: &[f64], b: f64) -> Result<bool> {
        if base.len() != self.n_points() {
            return Err(LabError::Shape("base measure over a different point set".into()));
        }
        if base.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(LabError::DomainParameter("base weights must be nonnegative".into()));
        }
        if !(b >= 1.0) {
            return Err(LabError::DomainParameter(format!("density bound b = {b} < 1")));
        }
        let id = self.id.marginal();
        for (x, &w) in base.iter().enumerate() {
            let m = 0.5 * id[x] + 0.5 * self.ood.mass(x);
            if w == 0.0 {
                if m > 0.0 {
                    return Ok(false);
                }
                continue;
            }
            let f = m / w;
            if f > b * (1.0 + PROB_TOL) || f < (1.0 / b) * (1.0 - PROB_TOL) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `n` i.i.d. draws `(point, label)` from the ID joint; deterministic in `seed`.
    pub fn sample_id(&self, n: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
        if n == 0 {
            return Err(LabError::DomainParameter("sample size must be at least 1".into()));
        }
        let atoms: Vec<_> = self.id.atoms().collect();
        let dist = WeightedIndex::new(atoms.iter().map(|a| a.2))
            .map_err(|e| LabError::Internal(format!("ID weights: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..n)
            .map(|_| {
                let (x, y, _) = atoms[dist.sample(&mut rng)];
                (x, y)
            })
            .collect())
    }

    pub fn id_equivalence_key(&self) -> IdKey {
        self.id.key()
    }
}

/// The five domain-space families.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceKind {
    Single,
    Total,
    Separate,
    FiniteId(Vec<IdJoint>),
    DensityBased { base: Vec<f64>, b: f64 },
}

impl SpaceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SpaceKind::Single => "single",
            SpaceKind::Total => "total",
            SpaceKind::Separate => "separate",
            SpaceKind::FiniteId(_) => "finite-id",
            SpaceKind::DensityBased { .. } => "density-based",
        }
    }
}

/// A domain space: its family plus explicit members for enumerable checks.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpaceSpec {
    kind: SpaceKind,
    members: Vec<FiniteDomain>,
}

impl DomainSpaceSpec {
    pub fn new(kind: SpaceKind, members: Vec<FiniteDomain>) -> Result<Self> {
        if let Some(first) = members.first() {
            if members
                .iter()
                .any(|d| d.n_points() != first.n_points() || d.k() != first.k())
            {
                return Err(LabError::Shape("members disagree on |X| or K".into()));
            }
        }
        match &kind {
            SpaceKind::DensityBased { base, b } => {
                if !(*b >= 1.0) {
                    return Err(LabError::DomainParameter(format!("density bound b = {b} < 1")));
                }
                if base.iter().any(|w| !w.is_finite() || *w < 0.0) || base.iter().all(|w| *w == 0.0) {
                    return Err(LabError::DomainParameter(
                        "base measure needs nonnegative weights with nonempty support".into(),
                    ));
                }
            }
            SpaceKind::FiniteId(list) => {
                if list.is_empty() {
                    return Err(LabError::Empty("finite ID list"));
                }
                let keys: BTreeSet<_> = list.iter().map(IdJoint::key).collect();
                if keys.len() != list.len() {
                    return Err(LabError::DomainParameter("duplicate ID joints in finite ID list".into()));
                }
            }
            _ => {}
        }
        let spec = Self { kind, members };
        for (i, d) in spec.members.iter().enumerate() {
            if !spec.admits(d)? {
                return Err(LabError::DomainParameter(format!(
                    "member {i} does not belong to the {} space",
                    spec.kind.name()
                )));
            }
        }
        Ok(spec)
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn members(&self) -> &[FiniteDomain] {
        &self.members
    }

    /// Membership predicate of the family.
    pub fn admits(&self, domain: &FiniteDomain) -> Result<bool> {
        Ok(match &self.kind {
            SpaceKind::Total => true,
            SpaceKind::Separate => domain.is_separate(),
            SpaceKind::Single => match self.members.first() {
                Some(anchor) => anchor.id_part() == domain.id_part() && anchor.ood_part() == domain.ood_part(),
                None => true,
            },
            SpaceKind::FiniteId(list) => {
                let key = domain.id_equivalence_key();
                list.iter().any(|j| j.key() == key)
            }
            SpaceKind::DensityBased { base, b } => domain.check_density_bounds(base, *b)?,
        })
    }

    /// Members grouped by ID equivalence key, in order of first appearance.
    pub fn equivalence_classes(&self) -> Vec<Vec<FiniteDomain>> {
        let mut keys: Vec<IdKey> = Vec::new();
        let mut classes: Vec<Vec<FiniteDomain>> = Vec::new();
        for d in &self.members {
            let key = d.id_equivalence_key();
            match keys.iter().position(|k| *k == key) {
                Some(i) => classes[i].push(d.clone()),
                None => {
                    keys.push(key);
                    classes.push(vec![d.clone()]);
                }
            }
        }
        classes
    }

    pub fn with_member(&self, domain: FiniteDomain) -> Result<Self> {
        let mut members = self.members.clone();
        members.push(domain);
        Self::new(self.kind.clone(), members)
    }
}
