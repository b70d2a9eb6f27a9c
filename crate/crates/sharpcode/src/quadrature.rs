//! Quadrature rules exact on Gegenbauer index sets.
//!
//! Four families, all with nodes in [-1, 1], positive weights, and a
//! certified exactness residual:
//!
//! * Gauss-Gegenbauer: k nodes, exact through degree 2k-1.
//! * Polarization lower bound (PULB) rules for strength tau = 2k-1+eps:
//!   case (i) nodes are the zeros of (1+t)^eps P_k^{(0,eps)}, case (ii)
//!   the zeros of (t-1)(t+1)^{1-eps} P_{k-1+eps}^{(1,1-eps)}.
//! * Levenshtein 1/N rules: a preassigned node at 1 carrying weight 1/N,
//!   the level (k, eps) determined by where N falls between consecutive
//!   Delsarte-Goethals-Seidel numbers.
//! * Skip 1-Add 2: k+1 nodes exact on span{P_i : i in {0..2k+2} \ {2k}},
//!   built from q_{k+1} = P_{k+1}^{(n)} + b P_{k-1}^{(n)}.

use crate::error::{Error, Result};
use crate::orthopoly::{self, basis, integrate, isolate_roots, orthogonal_roots, Poly};
use crate::tol;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

/// Sorted set of positive polynomial degrees a rule is exact on
/// (degree 0 is always implicitly included).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSet(BTreeSet<usize>);

impl IndexSet {
    pub fn range(lo: usize, hi: usize) -> Self {
        IndexSet((lo..=hi).collect())
    }

    /// {1..2k+2} \ {2k}.
    pub fn skip_one_add_two(k: usize) -> Self {
        let mut set: BTreeSet<usize> = (1..=2 * k + 2).collect();
        set.remove(&(2 * k));
        IndexSet(set)
    }

    pub fn from_degrees(degrees: impl IntoIterator<Item = usize>) -> Self {
        IndexSet(degrees.into_iter().filter(|&d| d > 0).collect())
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, d: usize) -> bool {
        self.0.contains(&d)
    }

    pub fn max_degree(&self) -> usize {
        self.0.iter().next_back().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    PulbI,
    PulbIi,
    Gauss,
    #[serde(rename = "levenshtein_1_over_N")]
    Levenshtein,
    #[serde(rename = "skip1add2")]
    Skip1Add2,
}

impl RuleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RuleKind::PulbI => "pulb_i",
            RuleKind::PulbIi => "pulb_ii",
            RuleKind::Gauss => "gauss",
            RuleKind::Levenshtein => "levenshtein_1_over_N",
            RuleKind::Skip1Add2 => "skip1add2",
        }
    }
}

/// Nodes, positive weights, and the degree set the rule integrates
/// exactly against mu_n. For the Levenshtein kind the last node is the
/// preassigned node 1 with weight 1/N.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureRule {
    pub n: usize,
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exact_on: IndexSet,
    /// Cardinality parameter of the 1/N rules; None otherwise.
    pub cardinality: Option<f64>,
}

impl QuadratureRule {
    /// Apply the rule to a function of the node values (Neumaier sum).
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = 0.0;
        let mut comp = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let term = w * f(x);
            let t = acc + term;
            comp += if acc.abs() >= term.abs() {
                (acc - t) + term
            } else {
                (term - t) + acc
            };
            acc = t;
        }
        acc + comp
    }

    pub fn apply_poly(&self, p: &Poly) -> f64 {
        self.apply(|t| p.eval(t))
    }

    /// Nodes strictly below 1, paired with weights (the energy-bound side
    /// of a 1/N rule).
    pub fn interior(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(&x, _)| x < 1.0 - tol::NODE_CLUSTER)
            .map(|(&x, &w)| (x, w))
    }

    fn validate(&self) -> Result<()> {
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&x) {
                return Err(Error::RuleConstruction(format!("node {x} outside [-1,1]")));
            }
            if w <= 0.0 {
                return Err(Error::NonpositiveWeight { node: x, weight: w });
            }
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::RuleConstruction(format!("weights sum to {sum}")));
        }
        let residual = verify_exactness(self, false);
        if residual > tol::EXACTNESS_RESIDUAL {
            return Err(Error::RuleConstruction(format!(
                "exactness residual {residual:e} for {} (n={}, degrees {:?})",
                self.kind.as_str(),
                self.n,
                self.exact_on.to_vec()
            )));
        }
        Ok(())
    }
}

/// Largest residual |rule(P_i) - delta_{i0}| over the exactness set; with
/// `deep`, also over 200 random elements of the spanned subspace.
pub fn verify_exactness(rule: &QuadratureRule, deep: bool) -> f64 {
    let bas = basis(rule.n);
    let eval_basis = |i: usize| -> f64 { rule.apply(|t| bas.eval(0, 0, i, t).unwrap()) };
    let mut residual = (eval_basis(0) - 1.0).abs();
    for i in rule.exact_on.degrees() {
        residual = residual.max(eval_basis(i).abs());
    }
    if deep {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        let degrees: Vec<usize> = rule.exact_on.degrees().collect();
        for _ in 0..200 {
            let c0 = rng.gen_range(-1.0..1.0f64);
            let coeffs: Vec<(usize, f64)> = degrees
                .iter()
                .map(|&d| (d, rng.gen_range(-1.0..1.0)))
                .collect();
            let got = rule.apply(|t| {
                let mut v = c0;
                for &(d, c) in &coeffs {
                    v += c * bas.eval(0, 0, d, t).unwrap();
                }
                v
            });
            // rule(f) must recover the constant Gegenbauer coefficient.
            residual = residual.max((got - c0).abs());
        }
    }
    residual
}

/// Delsarte-Goethals-Seidel bound D(n, tau) on the cardinality of a
/// tau-design in dimension n.
pub fn dgs_bound(n: usize, tau: usize) -> u64 {
    assert!(tau >= 1 && n >= 2);
    let k = tau.div_ceil(2);
    let eps = usize::from(tau.is_multiple_of(2));
    let binom = |top: usize, bot: usize| -> u64 {
        let mut v: u128 = 1;
        for j in 1..=bot {
            v = v * (top + 1 - j) as u128 / j as u128;
        }
        v as u64
    };
    binom(n + k - 2 + eps, n - 1) + binom(n + k - 2, n - 1)
}

/// Interpolatory weights w_i = int l_i dmu_n over the given nodes.
fn lagrange_weights(n: usize, nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let others: Vec<f64> = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .collect();
            let num = Poly::from_roots(&others);
            integrate(n, &num) / num.eval(xi)
        })
        .collect()
}

fn decompose_strength(tau: usize) -> (usize, usize) {
    // tau = 2k - 1 + eps with eps in {0, 1}.
    if tau % 2 == 1 {
        (tau.div_ceil(2), 0)
    } else {
        (tau / 2, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct RuleKey {
    kind: RuleKind,
    n: usize,
    level: usize,
    cardinality_bits: u64,
}

fn rule_cache() -> &'static Mutex<HashMap<RuleKey, QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, QuadratureRule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn memoized<F>(key: RuleKey, build: F) -> Result<QuadratureRule>
where
    F: FnOnce() -> Result<QuadratureRule>,
{
    if let Some(rule) = rule_cache().lock().unwrap().get(&key) {
        return Ok(rule.clone());
    }
    let rule = build()?;
    rule_cache()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| rule.clone());
    Ok(rule)
}

/// Plain Gauss-Gegenbauer rule: zeros of P_k^{(n)}, exact through 2k-1.
pub fn gauss(n: usize, k: usize) -> Result<QuadratureRule> {
    let key = RuleKey {
        kind: RuleKind::Gauss,
        n,
        level: k,
        cardinality_bits: 0,
    };
    memoized(key, || {
        let nodes = orthogonal_roots(n, 0, 0, k)?;
        let weights = lagrange_weights(n, &nodes);
        let rule = QuadratureRule {
            n,
            kind: RuleKind::Gauss,
            nodes,
            weights,
            exact_on: IndexSet::range(1, 2 * k - 1),
            cardinality: None,
        };
        rule.validate()?;
        Ok(rule)
    })
}

/// First-level polarization rule, case (i): for potentials whose
/// (tau+1)-st derivative is nonnegative on (-1,1). Nodes are the zeros of
/// (1+t)^eps P_k^{(0,eps)}; exact on {0..tau}.
pub fn pulb_case_i(n: usize, tau: usize) -> Result<QuadratureRule> {
    if tau < 1 {
        return Err(Error::InvalidArgument("strength must be >= 1".into()));
    }
    let key = RuleKey {
        kind: RuleKind::PulbI,
        n,
        level: tau,
        cardinality_bits: 0,
    };
    memoized(key, || {
        let (k, eps) = decompose_strength(tau);
        let mut nodes = orthogonal_roots(n, 0, eps, k)?;
        if eps == 1 {
            nodes.insert(0, -1.0);
        }
        let weights = lagrange_weights(n, &nodes);
        let rule = QuadratureRule {
            n,
            kind: RuleKind::PulbI,
            nodes,
            weights,
            exact_on: IndexSet::range(1, tau),
            cardinality: None,
        };
        rule.validate()?;
        Ok(rule)
    })
}

/// First-level polarization rule, case (ii): for potentials whose
/// (tau+1)-st derivative is nonpositive on (-1,1). Nodes are the zeros of
/// (t-1)(t+1)^{1-eps} P_{k-1+eps}^{(1,1-eps)}; exact on {0..tau}.
pub fn pulb_case_ii(n: usize, tau: usize) -> Result<QuadratureRule> {
    if tau < 1 {
        return Err(Error::InvalidArgument("strength must be >= 1".into()));
    }
    let key = RuleKey {
        kind: RuleKind::PulbIi,
        n,
        level: tau,
        cardinality_bits: 0,
    };
    memoized(key, || {
        let (k, eps) = decompose_strength(tau);
        let mut nodes = orthogonal_roots(n, 1, 1 - eps, k - 1 + eps)?;
        if eps == 0 {
            nodes.insert(0, -1.0);
        }
        nodes.push(1.0);
        let weights = lagrange_weights(n, &nodes);
        let rule = QuadratureRule {
            n,
            kind: RuleKind::PulbIi,
            nodes,
            weights,
            exact_on: IndexSet::range(1, tau),
            cardinality: None,
        };
        rule.validate()?;
        Ok(rule)
    })
}

/// Levenshtein 1/N rule: f_0 = f(1)/N + sum rho_i f(alpha_i) for all f of
/// degree <= tau.
///
/// The level tau_N = 2k-1+eps is fixed by N through
/// N in (D(n, tau_N), D(n, tau_N + 1)]. The free interior nodes are the
/// roots of the monic annihilator q determined by the linear conditions
///   eps = 0:  int q P_j dmu       = q(1) / N,     j = 0..k-1,
///   eps = 1:  int q (t+1) P_j dmu = 2 q(1) / N,   j = 0..k-1
/// (apply the rule to q P_j, resp. (t+1) q P_j); eps = 1 adjoins the node
/// -1. Exactness on the requested {0..tau} is certified numerically; at
/// the tight cardinalities N = D(n, tau) the rule gains one degree over
/// its own level, which is what the sharp-code rows use.
pub fn levenshtein_1_over_n(n: usize, cardinality: f64, tau: usize) -> Result<QuadratureRule> {
    if cardinality <= 1.0 {
        return Err(Error::InvalidArgument("cardinality must exceed 1".into()));
    }
    let key = RuleKey {
        kind: RuleKind::Levenshtein,
        n,
        level: tau,
        cardinality_bits: cardinality.to_bits(),
    };
    memoized(key, || build_levenshtein(n, cardinality, tau))
}

fn build_levenshtein(n: usize, big_n: f64, tau: usize) -> Result<QuadratureRule> {
    // Locate the level from the DGS numbers.
    let mut level = 1usize;
    while (dgs_bound(n, level + 1) as f64) < big_n {
        level += 1;
        if level > 40 {
            return Err(Error::InvalidArgument(format!(
                "cardinality {big_n} beyond supported levels"
            )));
        }
    }
    if (dgs_bound(n, level) as f64) >= big_n {
        return Err(Error::InvalidArgument(format!(
            "cardinality {big_n} is not above D({n},{level}) = {}",
            dgs_bound(n, level)
        )));
    }
    let (k, eps) = decompose_strength(level);
    let bas = basis(n);

    // k x k linear system for the non-leading coefficients of the monic
    // annihilator q of the free nodes.
    let weight_poly = if eps == 1 {
        Poly::from_coeffs(vec![1.0, 1.0]) // (t + 1)
    } else {
        Poly::constant(1.0)
    };
    let endpoint_factor = if eps == 1 { 2.0 } else { 1.0 };
    let l_j = |p: &Poly, j: usize| -> f64 {
        orthopoly::inner_product(n, &p.mul(&weight_poly), bas.gegenbauer(j))
            - endpoint_factor * p.eval(1.0) / big_n
    };
    let monomial = |m: usize| {
        let mut c = vec![0.0; m + 1];
        c[m] = 1.0;
        Poly::from_coeffs(c)
    };
    let mut matrix = vec![vec![0.0; k]; k];
    let mut rhs = vec![0.0; k];
    for (j, (row, r)) in matrix.iter_mut().zip(rhs.iter_mut()).enumerate() {
        for (m, cell) in row.iter_mut().enumerate() {
            *cell = l_j(&monomial(m), j);
        }
        *r = -l_j(&monomial(k), j);
    }
    let mut q_coeffs = solve_dense(matrix, rhs).ok_or_else(|| {
        Error::RuleConstruction(format!("singular system for 1/N rule (n={n}, N={big_n})"))
    })?;
    q_coeffs.push(1.0);
    let q = Poly::from_coeffs(q_coeffs);

    // Roots of q: scan a fine grid for sign-change brackets (the nodes can
    // touch -1 at tight cardinalities, so the grid starts just below).
    let grid = 1 << 14;
    let lo_end = -1.0 - 1e-9;
    let hi_end = 1.0;
    let mut brackets = Vec::new();
    let mut prev_t = lo_end;
    let mut prev_v = q.eval(prev_t);
    for i in 1..=grid {
        let t = lo_end + (hi_end - lo_end) * i as f64 / grid as f64;
        let v = q.eval(t);
        if prev_v == 0.0 || prev_v.signum() != v.signum() {
            brackets.push((prev_t, t));
        }
        prev_t = t;
        prev_v = v;
    }
    if brackets.len() != k {
        return Err(Error::RuleConstruction(format!(
            "expected {k} free nodes, found {} (n={n}, N={big_n})",
            brackets.len()
        )));
    }
    let mut nodes = isolate_roots(&q, &brackets)?;
    for x in nodes.iter_mut() {
        if (*x + 1.0).abs() < 1e-11 {
            *x = -1.0;
        }
    }
    if eps == 1 {
        nodes.insert(0, -1.0);
    }
    nodes.push(1.0);

    let mut weights = lagrange_weights(n, &nodes);
    // The j = 0 condition forces the node-1 weight to 1/N; snap the
    // rounding residual onto it.
    let w1 = weights.last_mut().unwrap();
    if (*w1 - 1.0 / big_n).abs() > 1e-9 / big_n.max(1.0) {
        return Err(Error::RuleConstruction(format!(
            "node-1 weight {w1} differs from 1/N = {}",
            1.0 / big_n
        )));
    }
    *w1 = 1.0 / big_n;

    for (&x, &w) in nodes.iter().zip(&weights) {
        if w <= 0.0 {
            return Err(Error::NonpositiveWeight { node: x, weight: w });
        }
    }
    let rule = QuadratureRule {
        n,
        kind: RuleKind::Levenshtein,
        nodes,
        weights,
        exact_on: IndexSet::range(1, tau.max(level)),
        cardinality: Some(big_n),
    };
    rule.validate()?;
    Ok(rule)
}

/// Skip 1-Add 2 rule: k+1 nodes with positive weights, exact on
/// span{P_i^{(n)} : i in {0..2k+2} \ {2k}}.
///
/// The node polynomial is q_{k+1} = P_{k+1}^{(n)} + b P_{k-1}^{(n)} with
/// (b, c) the positive/negative root pair of
///   b c   = -(k+1) k (a+k-1) / [(2a+k)(2a+k-1)(a+k+1)]
///   b + c = -2a (k+1)^2 (a+k-1) / [(2a+k)(2a+k-1)(a+2k+1)]
/// where a = n/2 - 1; its k+1 roots strictly interlace the zeros of
/// P_k^{(n)}, which supplies the isolation brackets.
pub fn skip1add2(n: usize, k: usize) -> Result<QuadratureRule> {
    if n < 3 {
        return Err(Error::InvalidArgument("skip 1-add 2 needs n >= 3".into()));
    }
    if k < 1 {
        return Err(Error::InvalidArgument(
            "half-strength k must be >= 1".into(),
        ));
    }
    let key = RuleKey {
        kind: RuleKind::Skip1Add2,
        n,
        level: k,
        cardinality_bits: 0,
    };
    memoized(key, || {
        let q = skip1add2_node_poly(n, k);
        let gauss_nodes = orthogonal_roots(n, 0, 0, k)?;
        let mut brackets = Vec::with_capacity(k + 1);
        let mut prev = -1.0;
        for &r in &gauss_nodes {
            brackets.push((prev, r));
            prev = r;
        }
        brackets.push((prev, 1.0));
        let nodes = isolate_roots(&q, &brackets)?;
        let weights = lagrange_weights(n, &nodes);
        for (&x, &w) in nodes.iter().zip(&weights) {
            if w <= 0.0 {
                return Err(Error::NonpositiveWeight { node: x, weight: w });
            }
        }
        let rule = QuadratureRule {
            n,
            kind: RuleKind::Skip1Add2,
            nodes,
            weights,
            exact_on: IndexSet::skip_one_add_two(k),
            cardinality: None,
        };
        rule.validate()?;
        Ok(rule)
    })
}

/// The (b, c) pair for the Skip 1-Add 2 node polynomial, b > 0 > c.
pub fn skip1add2_bc(n: usize, k: usize) -> (f64, f64) {
    let a = n as f64 / 2.0 - 1.0;
    let kf = k as f64;
    let bc = -((kf + 1.0) * kf * (a + kf - 1.0))
        / ((2.0 * a + kf) * (2.0 * a + kf - 1.0) * (a + kf + 1.0));
    let b_plus_c = -(2.0 * a * (kf + 1.0) * (kf + 1.0) * (a + kf - 1.0))
        / ((2.0 * a + kf) * (2.0 * a + kf - 1.0) * (a + 2.0 * kf + 1.0));
    let disc = (b_plus_c * b_plus_c - 4.0 * bc).sqrt();
    ((b_plus_c + disc) / 2.0, (b_plus_c - disc) / 2.0)
}

/// The Skip 1-Add 2 node polynomial q_{k+1} = P_{k+1}^{(n)} + b P_{k-1}^{(n)}.
pub fn skip1add2_node_poly(n: usize, k: usize) -> Poly {
    let (b, _) = skip1add2_bc(n, k);
    let bas = basis(n);
    bas.gegenbauer(k + 1).add(&bas.gegenbauer(k - 1).scale(b))
}

/// Gaussian elimination with partial pivoting; None if singular.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                let pivot_row = a[col].clone();
                for (cell, p) in a[row][col..n].iter_mut().zip(&pivot_row[col..n]) {
                    *cell -= f * p;
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}
