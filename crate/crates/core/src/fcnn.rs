//! ReLU fully-connected networks, score functions, the architecture
//! preorder, and explicit constructions (embedding, point isolation,
//! interpolation, binary heads).
//!
//! Forward passes skip zero weights and use `relu(x) = if x > 0 { x } else { 0 }`,
//! so padding a network with zero blocks or identity layers leaves every
//! floating-point sum unchanged and outputs stay bit-identical.

use serde::{Deserialize, Serialize};

use crate::auc::RankingFunction;
use crate::domain::FeatureSpace;
use crate::error::{LabError, Result};
use crate::hypothesis::{Hypothesis, HypothesisSpace, Provenance};

/// Layer widths `q = (l_1, ..., l_g)`, `g > 2`; `l_1` is the input dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    widths: Vec<usize>,
}

impl Architecture {
    pub fn new(widths: Vec<usize>) -> Result<Self> {
        if widths.len() <= 2 {
            return Err(LabError::Shape(format!("depth {} must exceed 2", widths.len())));
        }
        if widths.contains(&0) {
            return Err(LabError::Shape("layer widths must be positive".into()));
        }
        Ok(Self { widths })
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn depth(&self) -> usize {
        self.widths.len()
    }

    pub fn input_dim(&self) -> usize {
        self.widths[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.widths.last().unwrap()
    }
}

/// `q ≲ q'`: `q'` is at least as deep and wide, with matching input and output.
pub fn arch_precedes(q: &Architecture, qp: &Architecture) -> bool {
    let (a, b) = (q.widths(), qp.widths());
    let (g, gp) = (a.len(), b.len());
    if g > gp || a[0] != b[0] || a[g - 1] != b[gp - 1] {
        return false;
    }
    (0..g - 1).all(|i| a[i] <= b[i]) && (g - 1..gp - 1).all(|i| a[g - 2] <= b[i])
}

/// One affine map `w x + b`, `w` stored row-major with `out` rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    fn zeros(out: usize, inp: usize) -> Self {
        Self {
            weights: vec![0.0; out * inp],
            bias: vec![0.0; out],
        }
    }

    fn set(&mut self, inp: usize, row: usize, col: usize, value: f64) {
        self.weights[row * inp + col] = value;
    }
}

#[inline]
fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// A ReLU network: ReLU on hidden layers, linear output layer.
#[derive(Clone, Debug, PartialEq)]
pub struct ReluNetwork {
    arch: Architecture,
    layers: Vec<Layer>,
}

impl ReluNetwork {
    pub fn new(arch: Architecture, layers: Vec<Layer>) -> Result<Self> {
        let w = arch.widths();
        if layers.len() != w.len() - 1 {
            return Err(LabError::Shape(format!("{} layers for depth {}", layers.len(), w.len())));
        }
        for (i, layer) in layers.iter().enumerate() {
            let (inp, out) = (w[i], w[i + 1]);
            if layer.weights.len() != inp * out || layer.bias.len() != out {
                return Err(LabError::Shape(format!(
                    "layer {} expects {out}x{inp} weights and {out} biases",
                    i + 1
                )));
            }
            if layer.weights.iter().chain(&layer.bias).any(|v| !v.is_finite()) {
                return Err(LabError::Shape(format!("layer {} has non-finite parameters", i + 1)));
            }
        }
        Ok(Self { arch, layers })
    }

    /// All weights and biases zero.
    pub fn zeros(arch: Architecture) -> Self {
        let layers = arch.widths().windows(2).map(|p| Layer::zeros(p[1], p[0])).collect();
        Self { arch, layers }
    }

    /// Network `(d, 1, l)` whose output is `value` everywhere.
    pub fn constant(d: usize, value: Vec<f64>) -> Result<Self> {
        let arch = Architecture::new(vec![d, 1, value.len()])?;
        let mut net = Self::zeros(arch);
        net.layers[1].bias = value;
        Self::new(net.arch, net.layers)
    }

    pub fn arch(&self) -> &Architecture {
        &self.arch
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.arch.input_dim() {
            return Err(LabError::Shape(format!(
                "input of dimension {}, network expects {}",
                x.len(),
                self.arch.input_dim()
            )));
        }
        let last = self.layers.len() - 1;
        let mut act = x.to_vec();
        for (i, layer) in self.layers.iter().enumerate() {
            let inp = act.len();
            let next: Vec<f64> = layer
                .bias
                .iter()
                .enumerate()
                .map(|(row, b)| {
                    let mut acc = 0.0;
                    for (col, a) in act.iter().enumerate() {
                        let w = layer.weights[row * inp + col];
                        if w != 0.0 {
                            acc += w * a;
                        }
                    }
                    let z = acc + b;
                    if i == last {
                        z
                    } else {
                        relu(z)
                    }
                })
                .collect();
            act = next;
        }
        Ok(act)
    }

    /// Outputs at every point of `X`, in point order.
    pub fn forward_on(&self, x: &FeatureSpace) -> Result<Vec<Vec<f64>>> {
        x.points().iter().map(|p| self.forward(p)).collect()
    }
}

/// Largest index among the maximal coordinates, 1-based.
pub fn argmax_last(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &value) in v.iter().enumerate() {
        if value >= v[best] {
            best = i;
        }
    }
    best + 1
}

/// `h(x) = argmax_k f^k(x)` over `X`, ties resolved to the largest index.
pub fn induced_hypothesis(net: &ReluNetwork, x: &FeatureSpace, k: usize) -> Result<Hypothesis> {
    if net.arch.output_dim() != k + 1 {
        return Err(LabError::Shape(format!(
            "network has {} outputs, K + 1 = {}",
            net.arch.output_dim(),
            k + 1
        )));
    }
    let labels = net.forward_on(x)?.iter().map(|v| argmax_last(v) as u8).collect();
    Hypothesis::new(labels, k)
}

/// `H_q` materialized over a finite set of networks.
pub fn fcnn_induced_space(nets: &[ReluNetwork], x: &FeatureSpace, k: usize) -> Result<HypothesisSpace> {
    let members = nets
        .iter()
        .map(|n| induced_hypothesis(n, x, k).map(Hypothesis::into_labels))
        .collect::<Result<Vec<_>>>()?;
    Ok(HypothesisSpace::from_members(x.len(), k, members)?.with_provenance(Provenance::FcnnInduced))
}

/// The three score families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScoreKind {
    /// Maximum softmax probability.
    Softmax,
    /// Maximum softmax probability of `v / T`.
    TempScaled { t: f64 },
    /// `T log sum exp(v / T)`.
    Energy { t: f64 },
}

/// A score family with its acceptance threshold `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreFunction {
    pub kind: ScoreKind,
    pub lambda: f64,
}

impl ScoreFunction {
    /// Validates `T > 0` and the threshold range for outputs of width `l`.
    pub fn new(kind: ScoreKind, lambda: f64, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(LabError::Shape("score needs at least one output".into()));
        }
        let ok = match kind {
            ScoreKind::Softmax => lambda > 1.0 / l as f64 && lambda < 1.0,
            ScoreKind::TempScaled { t } => {
                check_temperature(t)?;
                lambda > 1.0 / l as f64 && lambda < 1.0
            }
            ScoreKind::Energy { t } => {
                check_temperature(t)?;
                lambda > 0.0 && lambda.is_finite()
            }
        };
        if !ok {
            return Err(LabError::DomainParameter(format!(
                "threshold {lambda} outside the valid range for {kind:?} with {l} outputs"
            )));
        }
        Ok(Self { kind, lambda })
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(LabError::DomainParameter(format!("temperature {t} must be positive")));
    }
    Ok(())
}

fn max_softmax(v: &[f64], t: f64) -> f64 {
    let m = v.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b / t));
    1.0 / v.iter().map(|&c| (c / t - m).exp()).sum::<f64>()
}

/// `E(v)` for the given score family.
pub fn score_value(kind: ScoreKind, v: &[f64]) -> f64 {
    match kind {
        ScoreKind::Softmax => max_softmax(v, 1.0),
        ScoreKind::TempScaled { t } => max_softmax(v, t),
        ScoreKind::Energy { t } => {
            let m = v.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b / t));
            t * (m + v.iter().map(|&c| (c / t - m).exp()).sum::<f64>().ln())
        }
    }
}

/// `h(x) = 1` iff `E(f(x)) >= λ`, else 2.
pub fn score_classifier(net: &ReluNetwork, score: &ScoreFunction, x: &FeatureSpace) -> Result<Hypothesis> {
    let score = ScoreFunction::new(score.kind, score.lambda, net.arch.output_dim())?;
    let labels = net
        .forward_on(x)?
        .iter()
        .map(|v| if score_value(score.kind, v) >= score.lambda { 1 } else { 2 })
        .collect();
    Hypothesis::new(labels, 1)
}

/// Score-based binary space materialized over a finite set of networks.
pub fn score_induced_space(nets: &[ReluNetwork], score: &ScoreFunction, x: &FeatureSpace) -> Result<HypothesisSpace> {
    let members = nets
        .iter()
        .map(|n| score_classifier(n, score, x).map(Hypothesis::into_labels))
        .collect::<Result<Vec<_>>>()?;
    Ok(HypothesisSpace::from_members(x.len(), 1, members)?.with_provenance(Provenance::ScoreInduced))
}

/// The ranker `x -> E(f(x))`.
pub fn score_ranker(net: &ReluNetwork, kind: ScoreKind, x: &FeatureSpace) -> Result<RankingFunction> {
    RankingFunction::new(net.forward_on(x)?.iter().map(|v| score_value(kind, v)).collect())
}

/// Scalar-output network ranker `x -> f(x)`.
pub fn network_ranker(net: &ReluNetwork, x: &FeatureSpace) -> Result<RankingFunction> {
    if net.arch.output_dim() != 1 {
        return Err(LabError::Shape("ranker networks must have a single output".into()));
    }
    RankingFunction::new(net.forward_on(x)?.iter().map(|v| v[0]).collect())
}

/// Embeds `net` into the larger architecture `target`: hidden layers are
/// widened with zero blocks, and extra depth is filled with identity layers
/// acting on the (nonnegative) last hidden activations.
pub fn embed_network(net: &ReluNetwork, target: &Architecture) -> Result<ReluNetwork> {
    if !arch_precedes(&net.arch, target) {
        return Err(LabError::Architecture(format!(
            "{:?} is not embeddable in {:?}",
            net.arch.widths(),
            target.widths()
        )));
    }
    let src = net.arch.widths();
    let dst = target.widths();
    let (g, gp) = (src.len(), dst.len());
    let mut layers = Vec::with_capacity(gp - 1);
    // hidden layers 2..g-1 keep their weights in the top-left block
    for i in 0..g - 2 {
        let (inp, out) = (src[i], src[i + 1]);
        let (inp2, out2) = (dst[i], dst[i + 1]);
        let mut layer = Layer::zeros(out2, inp2);
        for r in 0..out {
            for c in 0..inp {
                layer.set(inp2, r, c, net.layers[i].weights[r * inp + c]);
            }
            layer.bias[r] = net.layers[i].bias[r];
        }
        layers.push(layer);
    }
    // identity layers carrying the l_{g-1} live units
    let live = src[g - 2];
    for i in g - 2..gp - 2 {
        let (inp2, out2) = (dst[i], dst[i + 1]);
        let mut layer = Layer::zeros(out2, inp2);
        for u in 0..live {
            layer.set(inp2, u, u, 1.0);
        }
        layers.push(layer);
    }
    // output layer reads the live units
    let out = src[g - 1];
    let inp2 = dst[gp - 2];
    let mut head = Layer::zeros(out, inp2);
    for r in 0..out {
        for c in 0..live {
            head.set(inp2, r, c, net.layers[g - 2].weights[r * live + c]);
        }
        head.bias[r] = net.layers[g - 2].bias[r];
    }
    layers.push(head);
    ReluNetwork::new(target.clone(), layers)
}

/// Hidden layer of `2d` units per point `p`: `relu(x_i - p_i)` and `relu(p_i - x_i)`.
fn l1_units(points: &[&[f64]], d: usize) -> Layer {
    let mut layer = Layer::zeros(2 * d * points.len(), d);
    for (j, p) in points.iter().enumerate() {
        for i in 0..d {
            let up = j * 2 * d + 2 * i;
            layer.set(d, up, i, 1.0);
            layer.bias[up] = -p[i];
            layer.set(d, up + 1, i, -1.0);
            layer.bias[up + 1] = p[i];
        }
    }
    layer
}

/// Network `(d, 2d, 1)` computing the L1 distance to `X[target]`: zero at
/// the target and positive at every other point.
pub fn point_isolating_ranker(target: usize, x: &FeatureSpace) -> Result<ReluNetwork> {
    isolating_score_network(target, x, 1)
}

/// Network `(d, 2d, l)` whose first output is the L1 distance to `X[target]`
/// and whose other outputs are zero. Every score family is strictly
/// increasing in the first output, so the induced score ranker is strictly
/// minimal at the target.
pub fn isolating_score_network(target: usize, x: &FeatureSpace, l: usize) -> Result<ReluNetwork> {
    if target >= x.len() {
        return Err(LabError::DomainParameter(format!("point {target} out of range")));
    }
    let d = x.dim();
    let arch = Architecture::new(vec![d, 2 * d, l])?;
    let hidden = l1_units(&[x.point(target)], d);
    let mut head = Layer::zeros(l, 2 * d);
    for u in 0..2 * d {
        head.set(2 * d, 0, u, 1.0);
    }
    ReluNetwork::new(arch, vec![hidden, head])
}

fn min_l1(x: &FeatureSpace) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..x.len() {
        for b in (a + 1)..x.len() {
            let dist: f64 = x.point(a).iter().zip(x.point(b)).map(|(p, q)| (p - q).abs()).sum();
            best = best.min(dist);
        }
    }
    best
}

/// Bump layers `(d, 2dn, n)`: unit `p` of the second layer is
/// `relu(1 - (2/δ) |x - p|_1)`, which is 1 at `p` and 0 at every other point of `X`.
fn bump_layers(x: &FeatureSpace) -> (Layer, Layer) {
    let d = x.dim();
    let n = x.len();
    let points: Vec<&[f64]> = x.points().iter().map(Vec::as_slice).collect();
    let units = l1_units(&points, d);
    let delta = min_l1(x);
    let slope = if delta.is_finite() { -2.0 / delta } else { -1.0 };
    let mut bumps = Layer::zeros(n, 2 * d * n);
    for p in 0..n {
        for u in 0..2 * d {
            bumps.set(2 * d * n, p, p * 2 * d + u, slope);
        }
        bumps.bias[p] = 1.0;
    }
    (units, bumps)
}

/// Network whose induced hypothesis equals `labels` on `X`.
///
/// Constant labellings use `(d, 1, K+1)` with a one-hot output bias; all
/// others use `(d, 2d|X|, |X|, K+1)`, summing per-label point bumps.
pub fn interpolating_network(labels: &[u8], x: &FeatureSpace, k: usize) -> Result<ReluNetwork> {
    let h = Hypothesis::new(labels.to_vec(), k)?;
    if h.len() != x.len() {
        return Err(LabError::Shape(format!("{} labels for {} points", h.len(), x.len())));
    }
    if h.iter().all(|&l| l == h[0]) {
        let mut one_hot = vec![0.0; k + 1];
        one_hot[h[0] as usize - 1] = 1.0;
        return ReluNetwork::constant(x.dim(), one_hot);
    }
    let (units, bumps) = bump_layers(x);
    let n = x.len();
    let mut head = Layer::zeros(k + 1, n);
    for (p, &label) in h.iter().enumerate() {
        head.set(n, label as usize - 1, p, 1.0);
    }
    ReluNetwork::new(
        Architecture::new(vec![x.dim(), 2 * x.dim() * n, n, k + 1])?,
        vec![units, bumps, head],
    )
}

/// Network with `l` outputs whose score classifier under `score` equals the
/// binary `labels` on `X`: outputs `v_id` on points labelled 1 and `v_ood`
/// elsewhere, with `E(v_id) >= λ > E(v_ood)` by a unit margin.
pub fn score_interpolating_network(
    labels: &[u8],
    x: &FeatureSpace,
    score: &ScoreFunction,
    l: usize,
) -> Result<ReluNetwork> {
    let h = Hypothesis::new(labels.to_vec(), 1)?;
    if h.len() != x.len() {
        return Err(LabError::Shape(format!("{} labels for {} points", h.len(), x.len())));
    }
    let score = ScoreFunction::new(score.kind, score.lambda, l)?;
    let (v_id, v_ood) = match score.kind {
        ScoreKind::Softmax | ScoreKind::TempScaled { .. } => {
            if l < 2 {
                return Err(LabError::Shape("softmax scores need at least two outputs".into()));
            }
            let t = match score.kind {
                ScoreKind::TempScaled { t } => t,
                _ => 1.0,
            };
            let lam = score.lambda;
            let top = t * (lam * (l as f64 - 1.0) / (1.0 - lam)).ln() + 1.0;
            let mut v_id = vec![0.0; l];
            v_id[0] = top.max(1.0);
            (v_id, vec![0.0; l])
        }
        ScoreKind::Energy { t } => {
            let base = score.lambda - t * (l as f64).ln();
            (vec![base + 1.0; l], vec![base - 1.0; l])
        }
    };
    let n = x.len();
    let (units, bumps) = bump_layers(x);
    let mut head = Layer::zeros(l, n);
    for c in 0..l {
        for (p, &label) in h.iter().enumerate() {
            if label == 1 {
                head.set(n, c, p, v_id[c] - v_ood[c]);
            }
        }
        head.bias[c] = v_ood[c];
    }
    ReluNetwork::new(
        Architecture::new(vec![x.dim(), 2 * x.dim() * n, n, l])?,
        vec![units, bumps, head],
    )
}

/// Network with two outputs whose induced binary hypothesis is `φ` of the
/// hypothesis induced by `net` (K+1 outputs).
///
/// The output layer is split into `relu(f)` and `relu(-f)`, then
/// `relu(f_k - f_{K+1})` is formed for every ID label `k`; each difference is
/// a single rounded subtraction of exact values, so its sign is exact. The
/// first output sums these and the second is zero, so label 1 wins exactly
/// when some ID coordinate beats the reject coordinate.
pub fn binary_head_projection(net: &ReluNetwork) -> Result<ReluNetwork> {
    let w = net.arch.widths();
    let classes = net.arch.output_dim();
    if classes < 2 {
        return Err(LabError::Shape("projection needs at least two outputs".into()));
    }
    let g = w.len();
    let hidden = w[g - 2];
    let last = &net.layers[g - 2];

    let mut split = Layer::zeros(2 * classes, hidden);
    for r in 0..classes {
        for c in 0..hidden {
            let v = last.weights[r * hidden + c];
            split.set(hidden, r, c, v);
            split.set(hidden, classes + r, c, -v);
        }
        split.bias[r] = last.bias[r];
        split.bias[classes + r] = -last.bias[r];
    }

    let reject = classes - 1;
    let mut diff = Layer::zeros(classes, 2 * classes);
    for k in 0..reject {
        diff.set(2 * classes, k, k, 1.0);
        diff.set(2 * classes, k, reject, -1.0);
        diff.set(2 * classes, k, classes + k, -1.0);
        diff.set(2 * classes, k, classes + reject, 1.0);
    }

    let mut head = Layer::zeros(2, classes);
    for k in 0..reject {
        head.set(classes, 0, k, 1.0);
    }

    let mut widths = w[..g - 1].to_vec();
    widths.extend([2 * classes, classes, 2]);
    let mut layers = net.layers[..g - 2].to_vec();
    layers.extend([split, diff, head]);
    ReluNetwork::new(Architecture::new(widths)?, layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arch(w: &[usize]) -> Architecture {
        Architecture::new(w.to_vec()).unwrap()
    }

    #[test]
    fn forward_examples() {
        let zero = ReluNetwork::zeros(arch(&[2, 3, 2]));
        assert_eq!(zero.forward(&[1.0, -4.0]).unwrap(), vec![0.0, 0.0]);
        assert!(zero.forward(&[1.0]).is_err());

        let x0 = 0.75;
        let net = ReluNetwork::new(
            arch(&[1, 2, 1]),
            vec![
                Layer {
                    weights: vec![1.0, -1.0],
                    bias: vec![-x0, x0],
                },
                Layer {
                    weights: vec![1.0, 1.0],
                    bias: vec![0.0],
                },
            ],
        )
        .unwrap();
        assert_eq!(net.forward(&[x0]).unwrap(), vec![0.0]);
        assert_eq!(net.forward(&[x0 + 1.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn argmax_tie_rule() {
        assert_eq!(argmax_last(&[0.0, 0.0]), 2);
        assert_eq!(argmax_last(&[3.0, 1.0, 2.0]), 1);
        assert_eq!(argmax_last(&[1.0, 2.0, 2.0]), 3);
    }

    #[test]
    fn score_closed_forms() {
        assert!((score_value(ScoreKind::Softmax, &[1.0, 1.0, 1.0]) - 1.0 / 3.0).abs() < 1e-12);
        assert!((score_value(ScoreKind::Energy { t: 1.0 }, &[0.0, 0.0]) - 2f64.ln()).abs() < 1e-12);
        let e = std::f64::consts::E;
        assert!((score_value(ScoreKind::TempScaled { t: 2.0 }, &[2.0, 0.0]) - e / (e + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn threshold_ranges() {
        assert!(ScoreFunction::new(ScoreKind::Softmax, 0.5, 2).is_err());
        assert!(ScoreFunction::new(ScoreKind::Softmax, 0.6, 2).is_ok());
        assert!(ScoreFunction::new(ScoreKind::TempScaled { t: 0.0 }, 0.6, 2).is_err());
        assert!(ScoreFunction::new(ScoreKind::Energy { t: 1.0 }, 0.0, 1).is_err());
        assert!(ScoreFunction::new(ScoreKind::Energy { t: 1.0 }, 7.0, 1).is_ok());
    }

    #[test]
    fn score_classifier_examples() {
        let x = FeatureSpace::line(2).unwrap();
        let energy = ScoreFunction::new(ScoreKind::Energy { t: 1.0 }, 0.5, 1).unwrap();
        // f(x) = x realized as relu(x) through one hidden unit
        let ident = ReluNetwork::new(
            arch(&[1, 1, 1]),
            vec![
                Layer {
                    weights: vec![1.0],
                    bias: vec![0.0],
                },
                Layer {
                    weights: vec![1.0],
                    bias: vec![0.0],
                },
            ],
        )
        .unwrap();
        assert_eq!(score_classifier(&ident, &energy, &x).unwrap().labels(), &[2, 1]);

        let high = ReluNetwork::constant(1, vec![2.0]).unwrap();
        let low = ReluNetwork::constant(1, vec![0.1]).unwrap();
        assert_eq!(score_classifier(&high, &energy, &x).unwrap().labels(), &[1, 1]);
        assert_eq!(score_classifier(&low, &energy, &x).unwrap().labels(), &[2, 2]);
    }

    #[test]
    fn precedence_examples() {
        assert!(arch_precedes(&arch(&[2, 3, 1]), &arch(&[2, 3, 1])));
        assert!(arch_precedes(&arch(&[2, 3, 1]), &arch(&[2, 4, 3, 1])));
        assert!(!arch_precedes(&arch(&[2, 3, 1]), &arch(&[2, 2, 1])));
        assert!(!arch_precedes(&arch(&[2, 3, 1]), &arch(&[2, 4, 2, 1])));
        assert!(!arch_precedes(&arch(&[2, 3, 1]), &arch(&[2, 3, 2])));
    }

    #[test]
    fn isolating_ranker_values() {
        let x = FeatureSpace::line(3).unwrap();
        let r = network_ranker(&point_isolating_ranker(1, &x).unwrap(), &x).unwrap();
        assert_eq!(r.scores(), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn interpolation_of_constants_and_alternation() {
        let x = FeatureSpace::line(2).unwrap();
        let c = interpolating_network(&[2, 2], &x, 1).unwrap();
        assert_eq!(c.arch().widths(), &[1, 1, 2]);
        assert_eq!(induced_hypothesis(&c, &x, 1).unwrap().labels(), &[2, 2]);
        let alt = interpolating_network(&[1, 2], &x, 1).unwrap();
        assert_eq!(induced_hypothesis(&alt, &x, 1).unwrap().labels(), &[1, 2]);
    }

    #[test]
    fn embedding_rejects_non_precedence() {
        let net = ReluNetwork::zeros(arch(&[2, 3, 1]));
        assert!(matches!(embed_network(&net, &arch(&[2, 2, 1])), Err(LabError::Architecture(_))));
    }

    #[test]
    fn binary_head_of_reject_everywhere() {
        let x = FeatureSpace::line(3).unwrap();
        let net = interpolating_network(&[3, 3, 3], &x, 2).unwrap();
        let proj = binary_head_projection(&net).unwrap();
        assert_eq!(induced_hypothesis(&proj, &x, 1).unwrap().labels(), &[2, 2, 2]);
    }
}
