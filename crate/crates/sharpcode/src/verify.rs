//! Verification engine: design strength via moments, distance
//! distributions, bound evaluation, attainment at witnesses, empirical
//! minimization, and level-set/facet structure checks.

use crate::codes::{dot, normalize, SphericalCode, WitnessRole};
use crate::error::{Error, Result};
use crate::potentials::{self, Potential};
use crate::quadrature::{self, IndexSet, QuadratureRule};
use crate::tol;
use rand::{Rng, SeedableRng};
use serde::Serialize;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    sum: f64,
    comp: f64,
}

impl Acc {
    #[inline]
    fn add(&mut self, term: f64) {
        let t = self.sum + term;
        self.comp += if self.sum.abs() >= term.abs() {
            (self.sum - t) + term
        } else {
            (term - t) + self.sum
        };
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    /// Every ordered pair; O(N^2).
    Full,
    /// Spot-check at m random unit vectors.
    Sampled(usize),
}

/// Full scans are refused above this cardinality (the Leech shell would
/// take 4*10^10 pairs); sampled mode covers it.
pub const FULL_SCAN_LIMIT: usize = 5000;

/// Gegenbauer values P_1..P_max at t, by the three-term recurrence.
#[inline]
fn gegenbauer_values(n: usize, max_degree: usize, t: f64, out: &mut [f64]) {
    // out[i] = P_i^{(n)}(t) for i = 0..=max_degree.
    let alpha = n as f64 / 2.0 - 1.0;
    out[0] = 1.0;
    if max_degree >= 1 {
        out[1] = t;
    }
    for k in 1..max_degree {
        let kf = k as f64;
        out[k + 1] = (2.0 * (alpha + kf) * t * out[k] - kf * out[k - 1]) / (2.0 * alpha + kf);
    }
}

/// All moments M_i = sum_{x,y} P_i^{(n)}(x . y) for i = 0..=max_degree in
/// one pair scan.
fn moments_full(code: &SphericalCode, max_degree: usize) -> Result<Vec<f64>> {
    let num = code.cardinality();
    if num > FULL_SCAN_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "full moment scan refused for N = {num} > {FULL_SCAN_LIMIT}; use sampled mode"
        )));
    }
    let mut acc = vec![Acc::default(); max_degree + 1];
    let mut values = vec![0.0; max_degree + 1];
    for i in 0..num {
        for j in i + 1..num {
            let t = dot(&code.points[i], &code.points[j]);
            gegenbauer_values(code.n, max_degree, t, &mut values);
            for (a, &v) in acc.iter_mut().zip(values.iter()) {
                a.add(v);
            }
        }
    }
    // Ordered pairs: off-diagonal twice, diagonal contributes P_i(1) = 1.
    Ok(acc.iter().map(|a| 2.0 * a.value() + num as f64).collect())
}

/// max over sample points x of |sum_y P_i(x . y)|, per degree.
fn moments_sampled(code: &SphericalCode, max_degree: usize, samples: usize, seed: u64) -> Vec<f64> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut worst = vec![0.0f64; max_degree + 1];
    let mut values = vec![0.0; max_degree + 1];
    for _ in 0..samples {
        let x = random_unit(code.n, &mut rng);
        let mut acc = vec![Acc::default(); max_degree + 1];
        for p in &code.points {
            let t = dot(&x, p);
            gegenbauer_values(code.n, max_degree, t, &mut values);
            for (a, &v) in acc.iter_mut().zip(values.iter()) {
                a.add(v);
            }
        }
        for (w, a) in worst.iter_mut().zip(acc.iter()) {
            *w = w.max(a.value().abs());
        }
    }
    worst
}

fn random_unit(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    // Box-Muller normals, renormalized.
    loop {
        let v: Vec<f64> = (0..n.div_ceil(2))
            .flat_map(|_| {
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = (-2.0 * u1.ln()).sqrt();
                [r * u2.cos(), r * u2.sin()]
            })
            .take(n)
            .collect();
        let norm2 = dot(&v, &v);
        if norm2 > 1e-12 {
            return v.iter().map(|x| x / norm2.sqrt()).collect();
        }
    }
}

/// i-th moment of the code: full mode returns M_i exactly; sampled mode
/// returns the worst |sum_y P_i(x . y)| over random probes (zero for a
/// design degree by the harmonic characterization).
pub fn moment(code: &SphericalCode, degree: usize, mode: ScanMode, seed: u64) -> Result<f64> {
    if degree == 0 {
        return Err(Error::InvalidArgument("moment degree must be >= 1".into()));
    }
    match mode {
        ScanMode::Full => Ok(moments_full(code, degree)?[degree]),
        ScanMode::Sampled(m) => Ok(moments_sampled(code, degree, m, seed)[degree]),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignCheck {
    pub degree: usize,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Moment test for every degree in T. Thresholds: 1e-9 N^2 (full),
/// 1e-6 N (sampled).
pub fn design_certificate(
    code: &SphericalCode,
    degrees: &IndexSet,
    mode: ScanMode,
    seed: u64,
) -> Result<Vec<DesignCheck>> {
    let num = code.cardinality() as f64;
    let max_degree = degrees.max_degree();
    let (residuals, threshold) = match mode {
        ScanMode::Full => (
            moments_full(code, max_degree)?,
            tol::MOMENT_FULL_FACTOR * num * num,
        ),
        ScanMode::Sampled(m) => (
            moments_sampled(code, max_degree, m, seed),
            tol::MOMENT_SAMPLED_FACTOR * num,
        ),
    };
    Ok(degrees
        .degrees()
        .map(|d| {
            let residual = residuals[d].abs();
            DesignCheck {
                degree: d,
                residual,
                threshold,
                pass: residual <= threshold,
            }
        })
        .collect())
}

/// Inner products of a probe point against the code, clustered to the
/// given absolute tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceDistribution {
    pub entries: Vec<(f64, usize)>,
    pub includes_self: bool,
    pub tolerance: f64,
}

impl DistanceDistribution {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.entries.iter().map(|&(_, c)| c).collect()
    }
}

pub fn distance_distribution(
    x: &[f64],
    code: &SphericalCode,
    tolerance: f64,
) -> Result<DistanceDistribution> {
    let norm = dot(x, x).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "probe point has norm {norm}"
        )));
    }
    let mut products: Vec<f64> = code.points.iter().map(|p| dot(x, p)).collect();
    products.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut entries: Vec<(f64, usize)> = Vec::new();
    let mut cluster_start = products[0];
    let mut cluster_sum = 0.0;
    let mut cluster_len = 0usize;
    let mut includes_self = false;
    for &t in &products {
        if cluster_len > 0 && t - cluster_start > tolerance {
            entries.push((cluster_sum / cluster_len as f64, cluster_len));
            cluster_sum = 0.0;
            cluster_len = 0;
            cluster_start = t;
        }
        cluster_sum += t;
        cluster_len += 1;
        if t > 1.0 - tolerance {
            includes_self = true;
        }
    }
    entries.push((cluster_sum / cluster_len as f64, cluster_len));
    for w in entries.windows(2) {
        if w[1].0 - w[0].0 < 2.0 * tolerance {
            return Err(Error::ClusterAmbiguity {
                a: w[0].0,
                b: w[1].0,
            });
        }
    }
    Ok(DistanceDistribution {
        entries,
        includes_self,
        tolerance,
    })
}

/// U_h(x, C) = sum_y h(x . y), compensated, deterministic order.
///
/// Products within the clustering tolerance of 1 are the self-pairing of a
/// code point (distinct points are separated by far more) and evaluate at
/// exactly 1; kernels with a branch point there would otherwise blow f64
/// coordinate noise up to sqrt-of-epsilon size.
pub fn potential_value(h: &Potential, x: &[f64], code: &SphericalCode) -> Result<f64> {
    let mut acc = Acc::default();
    for p in &code.points {
        let mut t = dot(x, p);
        if t > 1.0 - tol::INNER_PRODUCT_CLUSTER {
            if h.singular_at_one() {
                return Err(Error::SingularEvaluation { t });
            }
            t = 1.0;
        }
        acc.add(h.value(t));
    }
    Ok(acc.value())
}

/// N * sum_i w_i h(alpha_i): the lower bound a rule certifies for U_h.
pub fn pulb_value(rule: &QuadratureRule, h: &Potential, cardinality: f64) -> f64 {
    cardinality * rule.apply(|t| h.value(t))
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub total: f64,
    pub per_point: f64,
    /// Distribution common to the sampled base points (sampled mode).
    pub distribution: Option<Vec<(f64, usize)>>,
}

/// h-energy sum_{x != y} h(x . y). Sampled mode computes per-point
/// distributions at 20 base points, requires them to coincide, and scales
/// up; this is exact for the distance-regular catalog codes.
pub fn energy(code: &SphericalCode, h: &Potential, mode: ScanMode) -> Result<EnergyReport> {
    let num = code.cardinality();
    match mode {
        ScanMode::Full => {
            if num > FULL_SCAN_LIMIT {
                return Err(Error::InvalidArgument(format!(
                    "full energy scan refused for N = {num}; use sampled mode"
                )));
            }
            let mut acc = Acc::default();
            for i in 0..num {
                for j in i + 1..num {
                    let t = dot(&code.points[i], &code.points[j]);
                    if h.singular_at_one() && t > 1.0 - tol::INNER_PRODUCT_CLUSTER {
                        return Err(Error::SingularEvaluation { t });
                    }
                    acc.add(h.value(t));
                }
            }
            let total = 2.0 * acc.value();
            Ok(EnergyReport {
                total,
                per_point: total / num as f64,
                distribution: None,
            })
        }
        ScanMode::Sampled(samples) => {
            let samples = samples.max(1).min(num);
            let stride = (num / samples).max(1);
            let mut common: Option<Vec<(f64, usize)>> = None;
            for s in 0..samples {
                let base = s * stride;
                let dist =
                    distance_distribution(&code.points[base], code, tol::INNER_PRODUCT_CLUSTER)?;
                // Drop the self pairing.
                let entries: Vec<(f64, usize)> = dist
                    .entries
                    .iter()
                    .filter(|&&(v, _)| v < 1.0 - tol::INNER_PRODUCT_CLUSTER)
                    .copied()
                    .collect();
                match &common {
                    None => common = Some(entries),
                    Some(reference) => {
                        let same = reference.len() == entries.len()
                            && reference.iter().zip(&entries).all(|(a, b)| {
                                a.1 == b.1 && (a.0 - b.0).abs() <= tol::INNER_PRODUCT_CLUSTER
                            });
                        if !same {
                            return Err(Error::DistributionMismatch(format!(
                                "per-point distributions differ between base 0 and base {base}"
                            )));
                        }
                    }
                }
            }
            let entries = common.unwrap();
            let mut acc = Acc::default();
            for &(v, c) in &entries {
                acc.add(c as f64 * h.value(v));
            }
            let per_point = acc.value();
            Ok(EnergyReport {
                total: per_point * num as f64,
                per_point,
                distribution: Some(entries),
            })
        }
    }
}

/// Which bound a verification targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    FirstI,
    FirstII,
    Second,
    Cell600,
}

impl Level {
    pub fn as_str(&self) -> &'static str {
        match self {
            Level::FirstI => "first_i",
            Level::FirstII => "first_ii",
            Level::Second => "second",
            Level::Cell600 => "cell600",
        }
    }

    pub fn parse(s: &str) -> Result<Level> {
        match s {
            "first_i" => Ok(Level::FirstI),
            "first_ii" => Ok(Level::FirstII),
            "second" => Ok(Level::Second),
            "cell600" => Ok(Level::Cell600),
            _ => Err(Error::InvalidArgument(format!("unknown level '{s}'"))),
        }
    }

    fn witness_role(&self) -> WitnessRole {
        match self {
            Level::FirstI => WitnessRole::CaseI,
            Level::FirstII | Level::Cell600 => WitnessRole::CaseII,
            Level::Second => WitnessRole::SecondLevel,
        }
    }
}

/// One verified bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub code: String,
    pub n: usize,
    pub cardinality: usize,
    pub level: &'static str,
    pub potential: String,
    pub rule_kind: String,
    pub nodes: Vec<f64>,
    pub multiplicities: Vec<f64>,
    pub bound: f64,
    pub witness_value: f64,
    pub relative_gap: f64,
    pub attained: bool,
    pub distribution: Vec<(f64, usize)>,
    pub search_floor: Option<f64>,
    pub restarts: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    /// Empirical minimization restarts; 0 skips the search.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            restarts: 0,
            seed: 42,
        }
    }
}

/// Nodes and weights backing a level's bound for a given code.
pub fn level_rule(code: &SphericalCode, level: Level) -> Result<(String, Vec<f64>, Vec<f64>)> {
    match level {
        Level::FirstI => {
            let rule = quadrature::pulb_case_i(code.n, code.strength)?;
            Ok(("pulb_i".into(), rule.nodes, rule.weights))
        }
        Level::FirstII => {
            let rule = quadrature::pulb_case_ii(code.n, code.strength)?;
            Ok(("pulb_ii".into(), rule.nodes, rule.weights))
        }
        Level::Second => {
            let k = code.second_level_k.ok_or_else(|| Error::LevelNotAttained {
                code: code.name.clone(),
                level: "second".into(),
                reason: "no skip 1-add 2 structure registered for this code".into(),
            })?;
            let rule = quadrature::skip1add2(code.n, k)?;
            Ok(("skip1add2".into(), rule.nodes, rule.weights))
        }
        Level::Cell600 => {
            if code.name != "cell_600" {
                return Err(Error::LevelNotAttained {
                    code: code.name.clone(),
                    level: "cell600".into(),
                    reason: "the 16-node interpolation rule applies to the 600-cell only".into(),
                });
            }
            let s5 = 5.0f64.sqrt();
            let nodes = vec![
                -1.0,
                -(1.0 + s5) / 4.0,
                -0.5,
                (1.0 - s5) / 4.0,
                0.0,
                (s5 - 1.0) / 4.0,
                0.5,
                (1.0 + s5) / 4.0,
                1.0,
            ];
            let weights: Vec<f64> = [1.0, 12.0, 20.0, 12.0, 30.0, 12.0, 20.0, 12.0, 1.0]
                .iter()
                .map(|c| c / 120.0)
                .collect();
            Ok(("cell600".into(), nodes, weights))
        }
    }
}

fn kernel_admissible(level: Level, h: &Potential, strength: usize) -> Result<()> {
    let sign = h.sign_case();
    let ok = match level {
        Level::FirstI => sign.admits_case_i(strength),
        Level::FirstII => sign.admits_case_ii(strength),
        Level::Second => sign.admits_second_level(strength.div_ceil(2)),
        Level::Cell600 => {
            matches!(sign, potentials::SignCase::NonnegativeUpTo { order } if order >= 15)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "kernel {} does not have the derivative signs required at level {}",
            h.spec(),
            level.as_str()
        )))
    }
}

/// Evaluate the level's bound against a specified probe point.
pub fn attainment_check_at(
    code: &SphericalCode,
    level: Level,
    h: &Potential,
    probe: &[f64],
    cfg: &CheckConfig,
) -> Result<BoundReport> {
    kernel_admissible(level, h, code.strength)?;
    let (rule_kind, nodes, weights) = level_rule(code, level)?;
    let num = code.cardinality() as f64;

    // A bound is attainable only with integer node multiplicities.
    let multiplicities: Vec<f64> = weights.iter().map(|w| w * num).collect();
    for (&x, &m) in nodes.iter().zip(&multiplicities) {
        if (m - m.round()).abs() > tol::INTEGER_COUNT_DEVIATION {
            return Err(Error::LevelNotAttained {
                code: code.name.clone(),
                level: level.as_str().into(),
                reason: format!("node multiplicity N*rho = {m} at node {x} is not an integer"),
            });
        }
    }
    if h.singular_at_one() && nodes.iter().any(|&x| x > 1.0 - tol::INNER_PRODUCT_CLUSTER) {
        return Err(Error::SingularEvaluation { t: 1.0 });
    }

    let mut bound_acc = Acc::default();
    for (&x, &w) in nodes.iter().zip(&weights) {
        bound_acc.add(w * h.value(x));
    }
    let bound = num * bound_acc.value();

    let witness_value = potential_value(h, probe, code)?;
    let scale = bound.abs().max(1.0);
    let relative_gap = (witness_value - bound).abs() / scale;

    let dist = distance_distribution(probe, code, tol::INNER_PRODUCT_CLUSTER)?;
    let mut distribution_matches = dist.entries.len() == nodes.len();
    if distribution_matches {
        for ((value, count), (&node, &m)) in
            dist.entries.iter().zip(nodes.iter().zip(&multiplicities))
        {
            if (value - node).abs() > tol::INNER_PRODUCT_CLUSTER || *count != m.round() as usize {
                distribution_matches = false;
                break;
            }
        }
    }
    let attained = relative_gap <= tol::ATTAINMENT_REL_GAP && distribution_matches;

    let search_floor = if cfg.restarts > 0 {
        let (floor, _) = global_min_search(code, h, cfg.restarts, cfg.seed)?;
        if floor < bound - tol::SEARCH_UNDERCUT * scale {
            return Err(Error::DistributionMismatch(format!(
                "empirical search found {floor} below the certified bound {bound}"
            )));
        }
        Some(floor)
    } else {
        None
    };

    Ok(BoundReport {
        code: code.name.clone(),
        n: code.n,
        cardinality: code.cardinality(),
        level: level.as_str(),
        potential: h.spec().to_string(),
        rule_kind,
        nodes,
        multiplicities,
        bound,
        witness_value,
        relative_gap,
        attained,
        distribution: dist.entries,
        search_floor,
        restarts: cfg.restarts,
        seed: cfg.seed,
    })
}

/// Refuse a level outright when its rule multiplicities are not integers
/// (no point of the sphere can then realize the required distribution).
pub fn integrality_refusal(code: &SphericalCode, level: Level) -> Result<()> {
    let (_, nodes, weights) = level_rule(code, level)?;
    let num = code.cardinality() as f64;
    for (&x, &w) in nodes.iter().zip(&weights) {
        let m = w * num;
        if (m - m.round()).abs() > tol::INTEGER_COUNT_DEVIATION {
            return Err(Error::LevelNotAttained {
                code: code.name.clone(),
                level: level.as_str().into(),
                reason: format!("node multiplicity N*rho = {m} at node {x} is not an integer"),
            });
        }
    }
    Ok(())
}

/// Evaluate the level's bound at the catalog witness of this code.
pub fn attainment_check(
    code: &SphericalCode,
    level: Level,
    h: &Potential,
    cfg: &CheckConfig,
) -> Result<BoundReport> {
    kernel_admissible(level, h, code.strength)?;
    integrality_refusal(code, level)?;
    let witness = code.witness_point(level.witness_role())?.to_vec();
    attainment_check_at(code, level, h, &witness, cfg)
}

/// Projected gradient descent over the sphere from `restarts` random
/// starts plus every catalog witness; deterministic for a fixed seed.
/// Returns the smallest U_h found and its location.
pub fn global_min_search(
    code: &SphericalCode,
    h: &Potential,
    restarts: usize,
    seed: u64,
) -> Result<(f64, Vec<f64>)> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(restarts + 4);
    for role in [
        WitnessRole::CaseI,
        WitnessRole::CaseII,
        WitnessRole::SecondLevel,
    ] {
        if let Ok(w) = code.witness_point(role) {
            starts.push(w.to_vec());
        }
    }
    for _ in 0..restarts {
        starts.push(random_unit(code.n, &mut rng));
    }
    if starts.is_empty() {
        starts.push(random_unit(code.n, &mut rng));
    }

    // Lipschitz scale from sampled gradient norms.
    let mut grad_scale = 1e-9f64;
    for _ in 0..8 {
        let x = random_unit(code.n, &mut rng);
        let (_, g) = value_and_gradient(code, h, &x);
        grad_scale = grad_scale.max(dot(&g, &g).sqrt());
    }
    let initial_step = 0.1 / grad_scale;

    let mut best_value = f64::INFINITY;
    let mut best_point = starts[0].clone();
    for start in starts {
        let (value, point) = descend(code, h, start, initial_step);
        if value < best_value {
            best_value = value;
            best_point = point;
        }
    }
    Ok((best_value, best_point))
}

fn value_and_gradient(code: &SphericalCode, h: &Potential, x: &[f64]) -> (f64, Vec<f64>) {
    let mut value = Acc::default();
    let mut grad = vec![0.0; code.n];
    for p in &code.points {
        let t = dot(x, p).min(1.0 - tol::SINGULARITY_CLAMP);
        value.add(h.value(t));
        let slope = h.derivative(t);
        for (g, &c) in grad.iter_mut().zip(p) {
            *g += slope * c;
        }
    }
    (value.value(), grad)
}

fn descend(
    code: &SphericalCode,
    h: &Potential,
    mut x: Vec<f64>,
    initial_step: f64,
) -> (f64, Vec<f64>) {
    let (mut value, mut grad) = value_and_gradient(code, h, &x);
    let mut step = initial_step;
    let mut streak = 0u32;
    for _ in 0..10_000 {
        // Tangential component.
        let radial = dot(&grad, &x);
        let tangent: Vec<f64> = grad.iter().zip(&x).map(|(g, xi)| g - radial * xi).collect();
        let tnorm = dot(&tangent, &tangent).sqrt();
        if step * tnorm < 1e-12 {
            break;
        }
        let candidate = normalize(
            &x.iter()
                .zip(&tangent)
                .map(|(xi, ti)| xi - step * ti)
                .collect::<Vec<f64>>(),
        );
        let (cand_value, cand_grad) = value_and_gradient(code, h, &candidate);
        if cand_value < value {
            x = candidate;
            value = cand_value;
            grad = cand_grad;
            streak += 1;
            if streak >= 2 {
                step *= 1.5;
                streak = 0;
            }
        } else {
            step *= 0.5;
            streak = 0;
            if step < 1e-18 {
                break;
            }
        }
    }
    (value, x)
}

/// Expected shape of the facet cut out by the top level set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetKind {
    /// m points, pairwise inner product -1/(m-1) after recentering.
    Simplex,
    /// 2m points, one antipode and 2m-2 orthogonal partners each.
    CrossPolytope,
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetReport {
    pub centroids_ok: bool,
    pub top_set_size: usize,
    pub top_set_expected: usize,
    pub top_node: f64,
    pub witness_matches_centroid: bool,
    pub facet_kind_ok: Option<bool>,
}

impl FacetReport {
    pub fn pass(&self) -> bool {
        self.centroids_ok
            && self.top_set_size == self.top_set_expected
            && self.witness_matches_centroid
            && self.facet_kind_ok.unwrap_or(true)
    }
}

/// Level-set structure at an attaining witness:
/// (a) the centroid of every level set C_{y,alpha} equals alpha * y;
/// (b) the top level set (largest node below the self-pairing) matches
///     its multiplicity and has at least n points;
/// (c) the witness points along the top set's centroid;
/// (d) optionally, the recentered top set forms the documented facet.
///
/// An attaining witness is also a point of the sphere furthest from the
/// code; at the witness that condition is exactly "the largest inner
/// product equals the largest node", which (a)+(b) certify, so no
/// separate covering-radius computation is run.
pub fn facet_checks(
    code: &SphericalCode,
    witness: &[f64],
    nodes: &[f64],
    multiplicities: &[f64],
    expected: Option<FacetKind>,
) -> Result<FacetReport> {
    let mut centroids_ok = true;
    let mut level_sets: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (idx, p) in code.points.iter().enumerate() {
        let t = dot(witness, p);
        if let Some(pos) = nodes
            .iter()
            .position(|&x| (t - x).abs() <= tol::INNER_PRODUCT_CLUSTER)
        {
            level_sets[pos].push(idx);
        } else {
            return Err(Error::DistributionMismatch(format!(
                "inner product {t} at point {idx} is not a rule node"
            )));
        }
    }
    for (pos, set) in level_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::DistributionMismatch(format!(
                "no code points at node {}",
                nodes[pos]
            )));
        }
        let mut centroid = vec![0.0; code.n];
        for &idx in set {
            for (c, v) in centroid.iter_mut().zip(&code.points[idx]) {
                *c += v;
            }
        }
        for c in centroid.iter_mut() {
            *c /= set.len() as f64;
        }
        let deviation = centroid
            .iter()
            .zip(witness)
            .map(|(c, w)| (c - nodes[pos] * w).abs())
            .fold(0.0f64, f64::max);
        if deviation > tol::CENTROID_TOL {
            centroids_ok = false;
        }
    }

    // Top node: skip a singleton self-pairing at 1 when the witness is a
    // code point.
    let mut top = nodes.len() - 1;
    if nodes[top] > 1.0 - tol::INNER_PRODUCT_CLUSTER && level_sets[top].len() == 1 {
        top -= 1;
    }
    let top_node = nodes[top];
    let top_set = &level_sets[top];
    let top_set_expected = multiplicities[top].round() as usize;

    let witness_matches_centroid = if top_node > tol::INNER_PRODUCT_CLUSTER {
        let mut centroid = vec![0.0; code.n];
        for &idx in top_set {
            for (c, v) in centroid.iter_mut().zip(&code.points[idx]) {
                *c += v;
            }
        }
        let direction = normalize(&centroid);
        direction
            .iter()
            .zip(witness)
            .map(|(d, w)| (d - w).abs())
            .fold(0.0f64, f64::max)
            <= tol::CENTROID_TOL
    } else {
        true
    };

    let facet_kind_ok = expected.map(|kind| {
        let m = top_set.len();
        let scale = (1.0 - top_node * top_node).sqrt();
        let recentered: Vec<Vec<f64>> = top_set
            .iter()
            .map(|&idx| {
                code.points[idx]
                    .iter()
                    .zip(witness)
                    .map(|(v, w)| (v - top_node * w) / scale)
                    .collect()
            })
            .collect();
        match kind {
            FacetKind::Simplex => {
                let expect = -1.0 / (m as f64 - 1.0);
                (0..m).all(|i| {
                    (0..i).all(|j| (dot(&recentered[i], &recentered[j]) - expect).abs() <= 1e-8)
                })
            }
            FacetKind::CrossPolytope => (0..m).all(|i| {
                let mut antipodes = 0;
                let mut orthogonal = 0;
                for j in 0..m {
                    if i == j {
                        continue;
                    }
                    let t = dot(&recentered[i], &recentered[j]);
                    if (t + 1.0).abs() <= 1e-8 {
                        antipodes += 1;
                    } else if t.abs() <= 1e-8 {
                        orthogonal += 1;
                    }
                }
                antipodes == 1 && orthogonal == m - 2
            }),
        }
    });

    Ok(FacetReport {
        centroids_ok,
        top_set_size: top_set.len(),
        top_set_expected,
        top_node,
        witness_matches_centroid,
        facet_kind_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::build_code;
    use crate::orthopoly::{basis, integrate};

    #[test]
    fn cross_polytope_moments() {
        let code = build_code("cross_polytope(4)").unwrap();
        for i in 1..=3 {
            let m = moment(&code, i, ScanMode::Full, 42).unwrap();
            assert!(m.abs() <= 1e-9 * 64.0, "degree {i}: {m}");
        }
        // Degree 4 does not vanish (strength is exactly 3).
        let m4 = moment(&code, 4, ScanMode::Full, 42).unwrap();
        assert!(m4.abs() > 1.0);
    }

    #[test]
    fn octahedron_fourth_moment_oracle() {
        // Brute-force oracle over the 6 points of the octahedron:
        // products 1 (6x), -1 (6x), 0 (24x); P_4(±1) = 1, P_4(0) = 3/8.
        let code = build_code("cross_polytope(3)").unwrap();
        let bas = basis(3);
        let p4_zero = bas.eval(0, 0, 4, 0.0).unwrap();
        let expected = 6.0 + 6.0 + 24.0 * p4_zero;
        let m4 = moment(&code, 4, ScanMode::Full, 42).unwrap();
        assert!((m4 - expected).abs() < 1e-10, "{m4} vs {expected}");
        assert!((p4_zero - 3.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn simplex_certificate_passes_and_fails() {
        let code = build_code("simplex(3)").unwrap();
        let ok = design_certificate(&code, &IndexSet::range(1, 2), ScanMode::Full, 42).unwrap();
        assert!(ok.iter().all(|c| c.pass));
        let bad = design_certificate(&code, &IndexSet::range(1, 3), ScanMode::Full, 42).unwrap();
        assert!(bad.iter().any(|c| c.degree == 3 && !c.pass));
    }

    #[test]
    fn icosahedron_extended_degrees() {
        let code = build_code("icosahedron").unwrap();
        let checks = design_certificate(&code, &code.design_degrees, ScanMode::Full, 42).unwrap();
        assert_eq!(checks.len(), 7); // {1..5, 7, 8}
        assert!(checks.iter().all(|c| c.pass));
        // Degree 6 moment is nonzero: the skipped degree.
        let m6 = moment(&code, 6, ScanMode::Full, 42).unwrap();
        assert!(m6.abs() > 1e-6);
    }

    #[test]
    fn sampled_mode_agrees_with_design_structure() {
        let code = build_code("e8_240").unwrap();
        let checks =
            design_certificate(&code, &code.design_degrees, ScanMode::Sampled(10), 42).unwrap();
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn full_scan_refused_beyond_limit() {
        let code = build_code("leech_196560").unwrap();
        assert!(moment(&code, 2, ScanMode::Full, 42).is_err());
    }

    #[test]
    fn distribution_at_octahedron_pole() {
        let code = build_code("cross_polytope(3)").unwrap();
        let dist = distance_distribution(&code.points[0], &code, 1e-9).unwrap();
        assert_eq!(dist.entries.len(), 3);
        assert_eq!(dist.counts(), vec![1, 4, 1]);
        assert!(dist.includes_self);
        assert_eq!(dist.total(), 6);
    }

    #[test]
    fn distribution_cluster_ambiguity() {
        let code = build_code("icosahedron").unwrap();
        // With an absurd tolerance the clusters merge instead of erroring,
        // but a tolerance just below the spectral gap must be rejected.
        let gap = 2.0 / 5.0f64.sqrt();
        assert!(matches!(
            distance_distribution(&code.points[0], &code, gap * 0.6),
            Err(Error::ClusterAmbiguity { .. })
        ));
    }

    #[test]
    fn potential_value_constant_kernel() {
        let code = build_code("c_5_16_3").unwrap();
        let one = Potential::custom(
            std::sync::Arc::new(|_| 1.0),
            std::sync::Arc::new(|_| 0.0),
            potentials::SignCase::Custom,
        );
        let w = code.witness_point(WitnessRole::CaseI).unwrap().to_vec();
        assert!((potential_value(&one, &w, &code).unwrap() - 16.0).abs() < 1e-12);
    }

    #[test]
    fn potential_value_singular_at_code_point() {
        let code = build_code("cube").unwrap();
        let h = Potential::riesz(1.0);
        assert!(matches!(
            potential_value(&h, &code.points[0], &code),
            Err(Error::SingularEvaluation { .. })
        ));
    }

    #[test]
    fn e8_witness_value_against_known_distribution() {
        let code = build_code("e8_240").unwrap();
        let h = Potential::exp(1.0);
        let w = code
            .witness_point(WitnessRole::SecondLevel)
            .unwrap()
            .to_vec();
        let got = potential_value(&h, &w, &code).unwrap();
        let s2 = 2.0f64.sqrt();
        let expect = 14.0 * h.value(-s2 / 2.0)
            + 64.0 * h.value(-s2 / 4.0)
            + 84.0 * h.value(0.0)
            + 64.0 * h.value(s2 / 4.0)
            + 14.0 * h.value(s2 / 2.0);
        assert!((got - expect).abs() <= 1e-10 * expect.abs());
    }

    #[test]
    fn pulb_value_known_rows() {
        // Constant kernel: N * c.
        let one = Potential::custom(
            std::sync::Arc::new(|_| 2.5),
            std::sync::Arc::new(|_| 0.0),
            potentials::SignCase::Custom,
        );
        let rule = quadrature::pulb_case_i(3, 5).unwrap();
        assert!((pulb_value(&rule, &one, 12.0) - 30.0).abs() < 1e-12);
        // (22,891,5) case (i): 162 h(-1/sqrt8) + 567 h(0) + 162 h(1/sqrt8).
        let h = Potential::riesz(1.0);
        let rule = quadrature::pulb_case_i(22, 5).unwrap();
        let s8 = 8.0f64.sqrt();
        let expect = 162.0 * h.value(-1.0 / s8) + 567.0 * h.value(0.0) + 162.0 * h.value(1.0 / s8);
        let got = pulb_value(&rule, &h, 891.0);
        assert!((got - expect).abs() <= 1e-10 * expect, "{got} vs {expect}");
        // (8,240,7) case (ii) under an entire kernel:
        // h(-1) + 56 h(-1/2) + 126 h(0) + 56 h(1/2) + h(1).
        let h = Potential::exp(1.0);
        let rule = quadrature::pulb_case_ii(8, 7).unwrap();
        let expect = h.value(-1.0)
            + 56.0 * h.value(-0.5)
            + 126.0 * h.value(0.0)
            + 56.0 * h.value(0.5)
            + h.value(1.0);
        let got = pulb_value(&rule, &h, 240.0);
        assert!((got - expect).abs() <= 1e-10 * expect, "{got} vs {expect}");
    }

    #[test]
    fn energy_full_vs_sampled_on_27() {
        let code = build_code("c_6_27_4").unwrap();
        let h = Potential::riesz(1.0);
        let full = energy(&code, &h, ScanMode::Full).unwrap();
        let sampled = energy(&code, &h, ScanMode::Sampled(20)).unwrap();
        let expect = 10.0 * h.value(-0.5) + 16.0 * h.value(0.25);
        assert!((full.per_point - expect).abs() <= 1e-12 * expect);
        assert!((sampled.per_point - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn energy_two_antipodal_points() {
        let code = build_code("ngon(2)").unwrap();
        let h = Potential::exp(1.0);
        let report = energy(&code, &h, ScanMode::Full).unwrap();
        assert!((report.total - 2.0 * h.value(-1.0)).abs() < 1e-14);
    }

    #[test]
    fn attainment_icosahedron_second_level() {
        let code = build_code("icosahedron").unwrap();
        let h = Potential::riesz(1.0);
        let report = attainment_check(&code, Level::Second, &h, &CheckConfig::default()).unwrap();
        assert!(report.attained, "gap {}", report.relative_gap);
        assert_eq!(
            report
                .distribution
                .iter()
                .map(|&(_, c)| c)
                .collect::<Vec<_>>(),
            vec![3, 3, 3, 3]
        );
    }

    #[test]
    fn attainment_icosahedron_first_level_refused() {
        let code = build_code("icosahedron").unwrap();
        let h = Potential::riesz(1.0);
        let err = attainment_check(&code, Level::FirstI, &h, &CheckConfig::default());
        match err {
            Err(Error::LevelNotAttained { reason, .. }) => {
                assert!(reason.contains("not an integer"), "{reason}");
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn attainment_100_code_first_level() {
        let code = build_code("c_22_100_3").unwrap();
        for h in [
            Potential::riesz(1.0),
            Potential::riesz(3.0),
            Potential::exp(1.0),
        ] {
            let report =
                attainment_check(&code, Level::FirstI, &h, &CheckConfig::default()).unwrap();
            assert!(report.attained, "{}: gap {}", h.spec(), report.relative_gap);
            assert_eq!(
                report
                    .distribution
                    .iter()
                    .map(|&(_, c)| c)
                    .collect::<Vec<_>>(),
                vec![50, 50]
            );
        }
    }

    #[test]
    fn attainment_case_ii_cross_polytope() {
        let code = build_code("cross_polytope(4)").unwrap();
        let h = Potential::dist();
        let report = attainment_check(&code, Level::FirstII, &h, &CheckConfig::default()).unwrap();
        assert!(report.attained);
        assert_eq!(
            report
                .distribution
                .iter()
                .map(|&(_, c)| c)
                .collect::<Vec<_>>(),
            vec![1, 6, 1]
        );
    }

    #[test]
    fn attainment_case_ii_16_refused_noninteger() {
        let code = build_code("c_5_16_3").unwrap();
        let h = Potential::dist();
        match attainment_check(&code, Level::FirstII, &h, &CheckConfig::default()) {
            Err(Error::LevelNotAttained { reason, .. }) => {
                assert!(reason.contains("not an integer"));
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn attainment_rejects_wrong_kernel_sign() {
        let code = build_code("cross_polytope(4)").unwrap();
        // riesz is absolutely monotone: case (ii) must reject it.
        assert!(matches!(
            attainment_check(
                &code,
                Level::FirstII,
                &Potential::riesz(1.0),
                &CheckConfig::default()
            ),
            Err(Error::InvalidArgument(_)) | Err(Error::SingularEvaluation { .. })
        ));
    }

    #[test]
    fn search_two_antipodal_points() {
        let code = build_code("ngon(2)").unwrap();
        let h = Potential::riesz(1.0);
        let (floor, point) = global_min_search(&code, &h, 50, 42).unwrap();
        // Minimum on the equator: 2 h(0) = 2 / sqrt2.
        let expect = 2.0 * h.value(0.0);
        assert!(
            (floor - expect).abs() <= 1e-10 * expect,
            "{floor} vs {expect}"
        );
        assert!(point[0].abs() < 1e-5);
    }

    #[test]
    fn search_icosahedron_reaches_second_level_bound() {
        let code = build_code("icosahedron").unwrap();
        let h = Potential::riesz(1.0);
        let (floor, _) = global_min_search(&code, &h, 200, 42).unwrap();
        let rule = quadrature::skip1add2(3, 3).unwrap();
        let bound = 12.0 * rule.apply(|t| h.value(t));
        assert!((floor - bound).abs() <= 1e-8 * bound, "{floor} vs {bound}");
    }

    #[test]
    fn search_octahedron_floor() {
        let code = build_code("cross_polytope(3)").unwrap();
        let h = Potential::riesz(1.0);
        let (floor, _) = global_min_search(&code, &h, 100, 42).unwrap();
        let s3 = 3.0f64.sqrt();
        let expect = 3.0 * h.value(-1.0 / s3) + 3.0 * h.value(1.0 / s3);
        assert!(
            (floor - expect).abs() <= 1e-8 * expect,
            "{floor} vs {expect}"
        );
    }

    #[test]
    fn facet_simplex_witness() {
        let code = build_code("simplex(4)").unwrap();
        let w = code.witness_point(WitnessRole::CaseI).unwrap().to_vec();
        let (_, nodes, weights) = level_rule(&code, Level::FirstI).unwrap();
        let mult: Vec<f64> = weights.iter().map(|x| x * 5.0).collect();
        let report = facet_checks(&code, &w, &nodes, &mult, Some(FacetKind::Simplex)).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.top_set_size, 4);
    }

    #[test]
    fn facet_icosahedron_triangle() {
        let code = build_code("icosahedron").unwrap();
        let w = code
            .witness_point(WitnessRole::SecondLevel)
            .unwrap()
            .to_vec();
        let (_, nodes, weights) = level_rule(&code, Level::Second).unwrap();
        let mult: Vec<f64> = weights.iter().map(|x| x * 12.0).collect();
        let report = facet_checks(&code, &w, &nodes, &mult, Some(FacetKind::Simplex)).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.top_set_size, 3);
    }

    #[test]
    fn facet_e8_cross_polytope() {
        let code = build_code("e8_240").unwrap();
        let w = code
            .witness_point(WitnessRole::SecondLevel)
            .unwrap()
            .to_vec();
        let (_, nodes, weights) = level_rule(&code, Level::Second).unwrap();
        let mult: Vec<f64> = weights.iter().map(|x| x * 240.0).collect();
        let report =
            facet_checks(&code, &w, &nodes, &mult, Some(FacetKind::CrossPolytope)).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.top_set_size, 14);
    }

    #[test]
    fn design_potential_consistency() {
        // For a tau-design and any polynomial kernel of degree <= tau,
        // U_f(x, C) = f_0 N at arbitrary probe points.
        use rand::{Rng, SeedableRng};
        let code = build_code("c_7_56_5").unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let coeffs: Vec<f64> = (0..=5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let poly = crate::orthopoly::Poly::from_coeffs(coeffs);
            let f0 = integrate(7, &poly);
            let x = random_unit(7, &mut rng);
            let p2 = poly.clone();
            let h = Potential::custom(
                std::sync::Arc::new(move |t| poly.eval(t)),
                std::sync::Arc::new(move |t| p2.derivative().eval(t)),
                potentials::SignCase::Custom,
            );
            let u = potential_value(&h, &x, &code).unwrap();
            assert!((u - f0 * 56.0).abs() <= 1e-8 * 56.0, "{u} vs {}", f0 * 56.0);
        }
    }
}
