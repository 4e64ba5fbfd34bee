//! Experiment configuration and the four run modes behind the CLI: learning
//! curves, condition reports, counterexample searches and verdict tables.
//!
//! Every run is a pure function of the config and seed, so reruns produce
//! byte-identical output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::auc::{all_order_types, linear_rankers_1d, RankingFunction};
use crate::conditions::{
    check_compatibility, check_linear_risk, check_risk_realizability, learnability_verdict, ConditionReport,
    VerdictMode, VerdictRecord, EPSILON_GRID,
};
use crate::counterexamples::{
    auc_unrealizable_split, dirac_auc_overlap_pair, overlap_certificate, sauer_pattern_domain, Certificate,
};
use crate::domain::{DomainSpaceSpec, FeatureSpace, FiniteDomain, SpaceKind};
use crate::error::{LabError, Result};
use crate::hypothesis::{exhaustive_labelings, threshold_space, Hypothesis, HypothesisSpace};
use crate::io::{self, fmt_sig12, read_json, resolve_relative, LossRecord};
use crate::learners::{
    composite_learner, constrained_reject_learner, nn_rate_bound, nn_threshold_learner, ErmLearner, Learner,
    NnThresholdLearner, TrainingSet,
};
use crate::loss::{alpha_risk, inf_alpha_risk, LossTable};

/// Header of the learning-curve CSV.
pub const CURVE_HEADER: &str = "n,alpha,mean_excess,std_excess,nn_rate_bound,theta_anchor,inv_n_anchor";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Curve,
    Check,
    Counterexample,
    Verdict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    /// Nearest-neighbour threshold rule (K = 1).
    #[default]
    Nn,
    /// ERM over the hypothesis space.
    Erm,
    /// ERM classifier composed with the nearest-neighbour detector.
    Composite,
    /// Constrained rejection rule with auxiliary points `X`.
    ConstrainedReject,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleKind {
    Overlap,
    Sauer,
    AucSplit,
    DiracPair,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    #[default]
    Risk,
    Auc,
}

/// A JSON experiment description. Relative paths resolve against the
/// directory of the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    /// Domain file (with `points` for the nearest-neighbour learner).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_space: Option<PathBuf>,
    /// Hypothesis space: a file, or `"exhaustive"` / `"thresholds"` (the default is exhaustive).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    /// Ranking space: a file, or `"linear-1d"` / `"order-types"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rankers: Option<String>,
    #[serde(default)]
    pub loss: LossRecord,
    #[serde(default)]
    pub n_grid: Vec<usize>,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_alphas")]
    pub alpha_grid: Vec<f64>,
    #[serde(default = "half")]
    pub theta: f64,
    #[serde(default)]
    pub learner: LearnerKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleKind>,
    /// The two OOD atoms for the Dirac-pair construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    #[serde(default)]
    pub objective: Objective,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_pool: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn one() -> usize {
    1
}

fn half() -> f64 {
    0.5
}

fn default_alphas() -> Vec<f64> {
    vec![0.0, 0.5, 1.0]
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg: Self = read_json(path)?;
        cfg.base_dir = resolve_relative(path, Path::new(""));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: Self = serde_json::from_str(text).map_err(|source| LabError::Parse {
            path: "<inline config>".into(),
            source,
        })?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(LabError::Config("trials must be at least 1".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Config("n_grid must be strictly increasing".into()));
        }
        if self.n_grid.first() == Some(&0) {
            return Err(LabError::Config("n_grid entries must be positive".into()));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(LabError::Config(format!("theta = {} not in (0, 1)", self.theta)));
        }
        if let Some(a) = self.alpha_grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(LabError::Config(format!("alpha {a} not in [0, 1]")));
        }
        Ok(())
    }

    fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// The domain and its feature space (a unit-spaced line when the file
    /// lists no points), plus load warnings.
    pub fn load_domain(&self) -> Result<(FiniteDomain, FeatureSpace, Vec<String>)> {
        let p = self.domain.as_ref().ok_or_else(|| LabError::Config("config needs `domain`".into()))?;
        let (loaded, x) = io::load_domain_with_points(&self.path(p))?;
        let x = match x {
            Some(x) => x,
            None => FeatureSpace::line(loaded.value.n_points())?,
        };
        Ok((loaded.value, x, loaded.warnings))
    }

    pub fn load_domain_space(&self) -> Result<(DomainSpaceSpec, Vec<String>)> {
        if let Some(p) = &self.domain_space {
            let l = io::load_domain_space(&self.path(p))?;
            return Ok((l.value, l.warnings));
        }
        let (d, _, w) = self.load_domain()?;
        Ok((DomainSpaceSpec::new(SpaceKind::Single, vec![d])?, w))
    }

    pub fn load_space(&self, n: usize, k: usize) -> Result<HypothesisSpace> {
        match self.space.as_deref() {
            None | Some("exhaustive") => exhaustive_labelings(n, k),
            Some("thresholds") => threshold_space(n),
            Some(p) => io::load_space(&self.path(Path::new(p))),
        }
    }

    /// Renormalization warnings from the configured domain files.
    pub fn load_warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.domain.is_some() {
            if let Ok((_, _, dw)) = self.load_domain() {
                w.extend(dw);
            }
        }
        if let Some(p) = &self.domain_space {
            if let Ok(l) = io::load_domain_space(&self.path(p)) {
                w.extend(l.warnings);
            }
        }
        w
    }

    /// The hypothesis space, sized from the domain file for the built-in
    /// families and read directly otherwise.
    pub fn resolve_space(&self) -> Result<HypothesisSpace> {
        match self.space.as_deref() {
            Some(p) if p != "exhaustive" && p != "thresholds" => io::load_space(&self.path(Path::new(p))),
            _ => {
                let (d, _, _) = self.load_domain()?;
                self.load_space(d.n_points(), d.k())
            }
        }
    }

    /// The ranking space. Built-in families need the point count `n` (and
    /// one-dimensional coordinates for `linear-1d`, a unit-spaced line
    /// when `x` is absent).
    pub fn load_rankers(&self, x: Option<&FeatureSpace>, n: Option<usize>) -> Result<Vec<RankingFunction>> {
        let need_n = || n.ok_or_else(|| LabError::Config("built-in rankers need a domain to size X".into()));
        match self.rankers.as_deref() {
            None => Err(LabError::Config("config needs `rankers`".into())),
            Some("order-types") => all_order_types(need_n()?),
            Some("linear-1d") => {
                let coords: Vec<f64> = match x {
                    Some(x) if x.dim() == 1 => x.points().iter().map(|p| p[0]).collect(),
                    Some(_) => return Err(LabError::Config("linear-1d rankers need a one-dimensional X".into())),
                    None => (0..need_n()?).map(|i| i as f64).collect(),
                };
                linear_rankers_1d(&coords)
            }
            Some(p) => io::load_rankers(&self.path(Path::new(p))),
        }
    }

    pub fn loss(&self, k: usize) -> Result<LossTable> {
        self.loss.to_loss(k)
    }
}

/// One `(n, α)` row of a learning curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub n: usize,
    pub alpha: f64,
    pub mean_excess: f64,
    pub std_excess: f64,
    pub nn_rate_bound: f64,
    /// `1 / √(n^{1-θ})`.
    pub theta_anchor: f64,
    /// `1 / n`.
    pub inv_n_anchor: f64,
}

/// Fitted log-log slope of mean excess versus `n` at one α.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub alpha: f64,
    /// `None` when fewer than two grid points have positive excess.
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub learner: LearnerKind,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<CurveRow>,
    pub slopes: Vec<SlopeFit>,
    /// Per-trial excess at every `(n, α)`, indexed `[grid][trial][alpha]`.
    #[serde(skip)]
    pub per_trial: Vec<Vec<Vec<f64>>>,
}

fn learn_once(
    cfg: &ExperimentConfig,
    s: &TrainingSet,
    x: &FeatureSpace,
    space: Option<&HypothesisSpace>,
    loss: &LossTable,
) -> Result<Hypothesis> {
    let space = match (cfg.learner, space) {
        (LearnerKind::Nn, _) => return nn_threshold_learner(s, x),
        (_, Some(space)) => space,
        (_, None) => return Err(LabError::Config("learner needs a hypothesis space".into())),
    };
    match cfg.learner {
        LearnerKind::Nn => unreachable!("handled above"),
        LearnerKind::Erm => ErmLearner { space, loss }.learn(s),
        LearnerKind::Composite => composite_learner(s, &ErmLearner { space, loss }, &NnThresholdLearner { x }),
        LearnerKind::ConstrainedReject => {
            let aux: Vec<usize> = (0..x.len()).collect();
            constrained_reject_learner(s, &aux, space, loss)
        }
    }
}

/// Mean and standard deviation (population form) of excess α-risk over
/// seeded trials at every grid size. Trial `t` uses seed `seed + t`.
pub fn run_learning_curve(cfg: &ExperimentConfig) -> Result<CurveReport> {
    if cfg.n_grid.is_empty() {
        return Err(LabError::Config("curve mode needs a non-empty n_grid".into()));
    }
    if cfg.alpha_grid.is_empty() {
        return Err(LabError::Config("curve mode needs a non-empty alpha_grid".into()));
    }
    let (domain, x, _) = cfg.load_domain()?;
    let k = domain.k();
    if matches!(cfg.learner, LearnerKind::Nn) && k != 1 {
        return Err(LabError::Config("the nearest-neighbour learner needs K = 1".into()));
    }
    let loss = cfg.loss(k)?;
    let space = match cfg.learner {
        LearnerKind::Nn => None,
        _ => Some(cfg.load_space(domain.n_points(), k)?),
    };
    let infima = cfg
        .alpha_grid
        .iter()
        .map(|&a| {
            match &space {
                None => nn_reference_infimum(&domain, &loss, a),
                Some(space) => inf_alpha_risk(space, &domain, &loss, a).map(|m| m.value),
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut per_trial = Vec::with_capacity(cfg.n_grid.len());
    let mut rows = Vec::new();
    for &n in &cfg.n_grid {
        let trials: Vec<Vec<f64>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| -> Result<Vec<f64>> {
                let s = TrainingSet::sample(&domain, n, cfg.seed.wrapping_add(t as u64))?;
                let h = learn_once(cfg, &s, &x, space.as_ref(), &loss)?;
                cfg.alpha_grid
                    .iter()
                    .zip(&infima)
                    .map(|(&a, inf)| Ok(alpha_risk(&h, &domain, &loss, a)? - inf))
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        for (j, &alpha) in cfg.alpha_grid.iter().enumerate() {
            let vals: Vec<f64> = trials.iter().map(|t| t[j]).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64;
            rows.push(CurveRow {
                n,
                alpha,
                mean_excess: mean,
                std_excess: var.sqrt(),
                nn_rate_bound: nn_rate_bound(x.dim(), n),
                theta_anchor: 1.0 / (n as f64).powf(1.0 - cfg.theta).sqrt(),
                inv_n_anchor: 1.0 / n as f64,
            });
        }
        per_trial.push(trials);
    }
    let slopes = cfg
        .alpha_grid
        .iter()
        .map(|&alpha| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.alpha == alpha && r.mean_excess > 0.0)
                .map(|r| ((r.n as f64).ln(), r.mean_excess.ln()))
                .collect();
            SlopeFit {
                alpha,
                slope: least_squares_slope(&pts),
            }
        })
        .collect();
    Ok(CurveReport {
        learner: cfg.learner,
        trials: cfg.trials,
        seed: cfg.seed,
        rows,
        slopes,
        per_trial,
    })
}

/// The nearest-neighbour rule outputs arbitrary binary labellings, so its
/// excess is measured against the infimum over all of them.
fn nn_reference_infimum(domain: &FiniteDomain, loss: &LossTable, alpha: f64) -> Result<f64> {
    let all = exhaustive_labelings(domain.n_points(), 1)?;
    Ok(inf_alpha_risk(&all, domain, loss, alpha)?.value)
}

fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

impl CurveReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CURVE_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.n,
                fmt_sig12(r.alpha),
                fmt_sig12(r.mean_excess),
                fmt_sig12(r.std_excess),
                fmt_sig12(r.nn_rate_bound),
                fmt_sig12(r.theta_anchor),
                fmt_sig12(r.inv_n_anchor)
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:>8} {:>6} {:>16} {:>16} {:>16}\n",
            "n", "alpha", "mean_excess", "std_excess", "nn_rate_bound"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>8} {:>6} {:>16} {:>16} {:>16}",
                r.n,
                fmt_sig12(r.alpha),
                fmt_sig12(r.mean_excess),
                fmt_sig12(r.std_excess),
                fmt_sig12(r.nn_rate_bound)
            );
        }
        for s in &self.slopes {
            let slope = s.slope.map_or_else(|| "n/a".to_string(), fmt_sig12);
            let _ = writeln!(out, "log-log slope at alpha {}: {}", fmt_sig12(s.alpha), slope);
        }
        out
    }
}

/// Condition reports for every member and equivalence class, plus the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub space_kind: String,
    pub reports: Vec<ConditionReport>,
    pub realizable: Vec<bool>,
    pub verdict: VerdictRecord,
}

pub fn run_condition_report(cfg: &ExperimentConfig) -> Result<CheckReport> {
    let (spec, _) = cfg.load_domain_space()?;
    let first = spec
        .members()
        .first()
        .ok_or_else(|| LabError::Config("the domain space lists no members".into()))?;
    let (n, k) = (first.n_points(), first.k());
    let space = cfg.load_space(n, k)?;
    let loss = cfg.loss(k)?;
    let mut reports = Vec::new();
    let mut realizable = Vec::new();
    for d in spec.members() {
        reports.push(check_linear_risk(&space, d, &loss)?);
        realizable.push(check_risk_realizability(&space, d, &loss)?);
    }
    for class in spec.equivalence_classes() {
        reports.push(check_compatibility(&space, &class, &loss, &EPSILON_GRID)?);
    }
    let verdict = verdict_for(cfg, &spec, &space, &loss)?;
    Ok(CheckReport {
        space_kind: spec.kind().name().into(),
        reports,
        realizable,
        verdict,
    })
}

fn verdict_for(
    cfg: &ExperimentConfig,
    spec: &DomainSpaceSpec,
    space: &HypothesisSpace,
    loss: &LossTable,
) -> Result<VerdictRecord> {
    match cfg.objective {
        Objective::Risk => learnability_verdict(
            spec,
            VerdictMode::Risk {
                space,
                loss,
                decomposition: None,
            },
        ),
        Objective::Auc => {
            let n = space.n_points();
            let x = cfg.load_domain().ok().map(|t| t.1);
            let rankers = cfg.load_rankers(x.as_ref(), Some(n))?;
            learnability_verdict(
                spec,
                VerdictMode::Auc {
                    rankers: &rankers,
                    constant_pool: cfg.constant_pool.as_deref(),
                },
            )
        }
    }
}

pub fn run_verdict(cfg: &ExperimentConfig) -> Result<VerdictRecord> {
    let (spec, _) = cfg.load_domain_space()?;
    let (n, k) = match spec.members().first() {
        Some(d) => (d.n_points(), d.k()),
        None => {
            let (d, _, _) = cfg.load_domain()?;
            (d.n_points(), d.k())
        }
    };
    let space = cfg.load_space(n, k)?;
    let loss = cfg.loss(k)?;
    verdict_for(cfg, &spec, &space, &loss)
}

/// Renders a verdict as a two-column text table.
pub fn verdict_table(v: &VerdictRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<14} {}", "space", v.space_kind);
    let _ = writeln!(out, "{:<14} {}", "verdict", v.verdict);
    for p in &v.premises {
        let _ = writeln!(out, "{:<14} {}: {}", "premise", p.id, p.statement);
        if !p.detail.is_empty() {
            let _ = writeln!(out, "{:<14} {}", "", p.detail);
        }
    }
    for r in &v.reports {
        let _ = writeln!(out, "{:<14} {} = {}", "condition", r.condition, r.holds);
    }
    out
}

pub fn run_counterexample(cfg: &ExperimentConfig) -> Result<Certificate> {
    let kind = cfg
        .counterexample
        .ok_or_else(|| LabError::Config("counterexample mode needs `counterexample`".into()))?;
    match kind {
        CounterexampleKind::Overlap | CounterexampleKind::Sauer => {
            let space = cfg.resolve_space()?;
            let loss = cfg.loss(space.k())?;
            if kind == CounterexampleKind::Overlap {
                let alpha = cfg.alpha_grid.iter().copied().find(|a| *a > 0.0 && *a < 1.0).unwrap_or(0.5);
                overlap_certificate(&space, &loss, alpha)
            } else {
                sauer_pattern_domain(&space, &loss)
            }
        }
        CounterexampleKind::AucSplit => {
            let x = match cfg.domain {
                Some(_) => Some(cfg.load_domain()?.1),
                None => None,
            };
            let n = x.as_ref().map(FeatureSpace::len);
            auc_unrealizable_split(&cfg.load_rankers(x.as_ref(), n)?)
        }
        CounterexampleKind::DiracPair => {
            let (d, x, _) = cfg.load_domain()?;
            let [a, b] = cfg.pair.ok_or_else(|| LabError::Config("dirac-pair needs `pair`".into()))?;
            let rankers = cfg.load_rankers(Some(&x), Some(d.n_points()))?;
            dirac_auc_overlap_pair(d.id_part(), a, b, &rankers)
        }
    }
}

/// Output format for rendered results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Runs `mode` and renders the result in `format`.
pub fn run_and_render(mode: Mode, cfg: &ExperimentConfig, format: Format) -> Result<String> {
    match mode {
        Mode::Curve => {
            let r = run_learning_curve(cfg)?;
            match format {
                Format::Csv => Ok(r.to_csv()),
                Format::Table => Ok(r.to_table()),
                Format::Json => io::to_json_string(&r),
            }
        }
        Mode::Check => {
            let r = run_condition_report(cfg)?;
            match format {
                Format::Table => {
                    let mut out = verdict_table(&r.verdict);
                    for (i, rep) in r.reports.iter().enumerate() {
                        let _ = writeln!(out, "{:<14} #{i} {} = {}", "report", rep.condition, rep.holds);
                    }
                    Ok(out)
                }
                Format::Csv => Err(LabError::Config("check output supports json or table".into())),
                Format::Json => io::to_json_string(&r),
            }
        }
        Mode::Counterexample => {
            let c = run_counterexample(cfg)?;
            match format {
                Format::Table => {
                    let mut out = format!("{}\n{}\n", c.theorem, c.verdict);
                    for ch in &c.checks {
                        let _ = writeln!(
                            out,
                            "{:<56} {} {} {}  [{}]",
                            ch.name,
                            fmt_sig12(ch.lhs),
                            ch.relation,
                            fmt_sig12(ch.rhs),
                            if ch.holds { "ok" } else { "FAILED" }
                        );
                    }
                    Ok(out)
                }
                Format::Csv => Err(LabError::Config("counterexample output supports json or table".into())),
                Format::Json => io::to_json_string(&c),
            }
        }
        Mode::Verdict => {
            let v = run_verdict(cfg)?;
            match format {
                Format::Table => Ok(verdict_table(&v)),
                Format::Csv => Err(LabError::Config("verdict output supports json or table".into())),
                Format::Json => io::to_json_string(&v),
            }
        }
    }
}
