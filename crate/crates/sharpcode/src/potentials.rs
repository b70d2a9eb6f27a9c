//! Potential kernels and the interpolants that certify the lower bounds.
//!
//! A kernel h enters a bound through a polynomial that agrees with it at
//! the quadrature nodes while staying below it on all of [-1, 1]. The
//! machinery here: confluent Newton divided differences (node multiplicity
//! up to 2, so only h' is ever needed), the Hermite interpolant in Newton
//! form, and the modified interpolants with one Gegenbauer component
//! annihilated for the skip-structure rules.

use crate::error::{Error, Result};
use crate::orthopoly::{gegenbauer_expand, Poly};
use crate::quadrature;
use crate::tol;
use std::fmt;
use std::sync::Arc;

/// Derivative-sign profile of a kernel on (-1, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignCase {
    /// All derivatives nonnegative (absolutely monotone).
    AbsolutelyMonotone,
    /// All derivatives of order >= 1 nonpositive.
    CaseII,
    /// h^(i) >= 0 for i <= order and h^(order+1) <= 0.
    NonnegativeUpTo {
        order: usize,
    },
    Custom,
}

impl SignCase {
    /// Admissible for a case (i) bound of strength tau?
    pub fn admits_case_i(&self, tau: usize) -> bool {
        match self {
            SignCase::AbsolutelyMonotone => true,
            SignCase::NonnegativeUpTo { order } => tau < *order,
            _ => false,
        }
    }

    /// Admissible for a case (ii) bound of strength tau?
    pub fn admits_case_ii(&self, tau: usize) -> bool {
        match self {
            SignCase::CaseII => true,
            SignCase::NonnegativeUpTo { order } => tau + 1 > *order,
            _ => false,
        }
    }

    /// Admissible for the Skip 1-Add 2 bound with half-strength k
    /// (h^(2k), h^(2k+1), h^(2k+2) all nonnegative suffice).
    pub fn admits_second_level(&self, k: usize) -> bool {
        match self {
            SignCase::AbsolutelyMonotone => true,
            SignCase::NonnegativeUpTo { order } => 2 * k + 2 <= *order,
            _ => false,
        }
    }
}

#[derive(Clone)]
enum Kind {
    /// (2-2t)^(-s/2); absolutely monotone, singular at t = 1.
    Riesz(f64),
    /// -log(2-2t); absolutely monotone, singular at t = 1.
    Log,
    /// exp(a t) with a > 0; absolutely monotone, entire.
    Exp(f64),
    /// (2-2t)^(1/2), the chordal distance; every derivative of order >= 1
    /// is nonpositive.
    Dist,
    /// Truncated exponential sum_{i<=order} (a t)^i / i!; derivatives
    /// nonnegative through `order`, identically zero beyond.
    TruncExp { a: f64, order: usize },
    Custom {
        value: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        sign_case: SignCase,
    },
}

/// An evaluable kernel h(t) with first derivative and derivative-sign
/// descriptor.
#[derive(Clone)]
pub struct Potential {
    kind: Kind,
    spec: String,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Potential({})", self.spec)
    }
}

fn truncated_exp(x: f64, order: usize) -> f64 {
    // Horner form of sum_{i=0}^{order} x^i/i!.
    let mut acc = 1.0;
    for i in (1..=order).rev() {
        acc = 1.0 + acc * x / i as f64;
    }
    acc
}

impl Potential {
    pub fn riesz(s: f64) -> Self {
        Potential {
            kind: Kind::Riesz(s),
            spec: format!("riesz:{s}"),
        }
    }

    pub fn log() -> Self {
        Potential {
            kind: Kind::Log,
            spec: "log".into(),
        }
    }

    pub fn exp(a: f64) -> Self {
        Potential {
            kind: Kind::Exp(a),
            spec: format!("exp:{a}"),
        }
    }

    /// The chordal distance |x - y| = sqrt(2 - 2t) as a kernel; the
    /// canonical case (ii) potential (h >= 0, all higher derivatives <= 0).
    pub fn dist() -> Self {
        Potential {
            kind: Kind::Dist,
            spec: "dist".into(),
        }
    }

    /// Degree-15 truncated exponential: nonnegative derivatives through
    /// order 15 and vanishing 16th, the admissible profile for the
    /// 600-cell rule.
    pub fn trunc_exp(a: f64) -> Self {
        Potential {
            kind: Kind::TruncExp { a, order: 15 },
            spec: format!("trunc_exp:{a}"),
        }
    }

    pub fn custom(
        value: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        sign_case: SignCase,
    ) -> Self {
        Potential {
            kind: Kind::Custom {
                value,
                derivative,
                sign_case,
            },
            spec: "custom".into(),
        }
    }

    /// Parse a CLI kernel spec: `riesz:<s>`, `log`, `exp:<a>`, `dist`,
    /// `trunc_exp:<a>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::BadPotentialSpec(spec.to_string());
        if spec == "log" {
            return Ok(Potential::log());
        }
        if spec == "dist" {
            return Ok(Potential::dist());
        }
        if let Some(arg) = spec.strip_prefix("riesz:") {
            let s: f64 = arg.parse().map_err(|_| bad())?;
            if s <= 0.0 {
                return Err(bad());
            }
            return Ok(Potential::riesz(s));
        }
        if let Some(arg) = spec.strip_prefix("exp:") {
            let a: f64 = arg.parse().map_err(|_| bad())?;
            if a <= 0.0 {
                return Err(bad());
            }
            return Ok(Potential::exp(a));
        }
        if let Some(arg) = spec.strip_prefix("trunc_exp:") {
            let a: f64 = arg.parse().map_err(|_| bad())?;
            if a <= 0.0 {
                return Err(bad());
            }
            return Ok(Potential::trunc_exp(a));
        }
        Err(bad())
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn sign_case(&self) -> SignCase {
        match &self.kind {
            Kind::Riesz(_) | Kind::Log | Kind::Exp(_) => SignCase::AbsolutelyMonotone,
            Kind::Dist => SignCase::CaseII,
            Kind::TruncExp { order, .. } => SignCase::NonnegativeUpTo { order: *order },
            Kind::Custom { sign_case, .. } => *sign_case,
        }
    }

    pub fn singular_at_one(&self) -> bool {
        matches!(self.kind, Kind::Riesz(_) | Kind::Log)
    }

    pub fn value(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Riesz(s) => (2.0 - 2.0 * t.min(1.0 - tol::SINGULARITY_CLAMP)).powf(-s / 2.0),
            Kind::Log => -(2.0 - 2.0 * t.min(1.0 - tol::SINGULARITY_CLAMP)).ln(),
            Kind::Exp(a) => (a * t).exp(),
            Kind::Dist => (2.0 - 2.0 * t.min(1.0)).sqrt(),
            Kind::TruncExp { a, order } => truncated_exp(a * t, *order),
            Kind::Custom { value, .. } => value(t),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Riesz(s) => {
                s * (2.0 - 2.0 * t.min(1.0 - tol::SINGULARITY_CLAMP)).powf(-s / 2.0 - 1.0)
            }
            Kind::Log => 2.0 / (2.0 - 2.0 * t.min(1.0 - tol::SINGULARITY_CLAMP)),
            Kind::Exp(a) => a * (a * t).exp(),
            Kind::Dist => -1.0 / (2.0 - 2.0 * t.min(1.0 - tol::SINGULARITY_CLAMP)).sqrt(),
            Kind::TruncExp { a, order } => a * truncated_exp(a * t, order - 1),
            Kind::Custom { derivative, .. } => derivative(t),
        }
    }

    /// Reject evaluation points indistinguishable from the singularity.
    pub fn check_node(&self, t: f64) -> Result<()> {
        if self.singular_at_one() && t > 1.0 - tol::INNER_PRODUCT_CLUSTER {
            return Err(Error::SingularEvaluation { t });
        }
        Ok(())
    }
}

/// Interpolation nodes with multiplicities (at most 2; doubled nodes
/// consume the kernel derivative).
#[derive(Debug, Clone)]
pub struct NodeMultiset {
    nodes: Vec<f64>,
}

impl NodeMultiset {
    /// From a sorted list with repetitions.
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        let mut run = 1;
        for i in 1..nodes.len() {
            if nodes[i] < nodes[i - 1] {
                return Err(Error::InvalidArgument("multiset must be sorted".into()));
            }
            if nodes[i] == nodes[i - 1] {
                run += 1;
                if run > 2 {
                    return Err(Error::InvalidArgument(
                        "node multiplicity above 2 is not modeled (needs h'')".into(),
                    ));
                }
            } else {
                run = 1;
            }
        }
        Ok(NodeMultiset { nodes })
    }

    /// Every node doubled.
    pub fn doubled(nodes: &[f64]) -> Result<Self> {
        let mut v = Vec::with_capacity(2 * nodes.len());
        for &x in nodes {
            v.push(x);
            v.push(x);
        }
        NodeMultiset::new(v)
    }

    /// Endpoints (±1) simple, interior nodes doubled: the multiset of the
    /// first-level bound certificates.
    pub fn endpoints_simple(nodes: &[f64]) -> Result<Self> {
        let mut v = Vec::new();
        for &x in nodes {
            v.push(x);
            if x.abs() < 1.0 - tol::NODE_CLUSTER {
                v.push(x);
            }
        }
        NodeMultiset::new(v)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Confluent Newton divided-difference table over the multiset: a repeated
/// node feeds h' into the first-order difference.
pub fn divided_differences(h: &Potential, multiset: &NodeMultiset) -> Result<Vec<f64>> {
    let nodes = multiset.nodes();
    let m = nodes.len();
    if m == 0 {
        return Err(Error::InvalidArgument("empty node multiset".into()));
    }
    for &x in nodes {
        h.check_node(x)?;
    }
    // table[i] holds f[x_i..x_{i+level}] as levels advance.
    let mut table: Vec<f64> = nodes.iter().map(|&x| h.value(x)).collect();
    let mut diffs = vec![table[0]];
    for level in 1..m {
        for i in 0..m - level {
            let lo = nodes[i];
            let hi = nodes[i + level];
            table[i] = if hi == lo {
                // Only level == 1 can see a zero gap (multiplicity <= 2).
                h.derivative(lo)
            } else {
                (table[i + 1] - table[i]) / (hi - lo)
            };
        }
        diffs.push(table[0]);
    }
    Ok(diffs)
}

/// Hermite interpolant in Newton form over the multiset, as a polynomial
/// of degree len(multiset) - 1.
pub fn hermite_interpolant(h: &Potential, multiset: &NodeMultiset) -> Result<Poly> {
    let diffs = divided_differences(h, multiset)?;
    Ok(newton_to_poly(&diffs, multiset.nodes()))
}

fn newton_to_poly(diffs: &[f64], nodes: &[f64]) -> Poly {
    let mut acc = Poly::constant(diffs[0]);
    let mut partial = Poly::constant(1.0);
    for (j, &dd) in diffs.iter().enumerate().skip(1) {
        partial = partial.mul(&Poly::from_coeffs(vec![-nodes[j - 1], 1.0]));
        acc = acc.add(&partial.scale(dd));
    }
    acc
}

/// Verify f <= h on a dense Chebyshev grid (relative slack), returning the
/// worst offending point on failure.
pub fn check_domination(n_points: usize, f: &Poly, h: &Potential) -> Result<()> {
    let mut worst = (0.0f64, 0.0f64);
    for i in 0..n_points {
        let theta = std::f64::consts::PI * (i as f64 + 0.5) / n_points as f64;
        let t = theta.cos().clamp(-1.0, 1.0 - tol::SINGULARITY_CLAMP);
        let hv = h.value(t);
        let excess = f.eval(t) - hv;
        let allowed = tol::DOMINATION_REL * hv.abs().max(1.0);
        if excess > allowed && excess > worst.1 {
            worst = (t, excess);
        }
    }
    if worst.1 > 0.0 {
        return Err(Error::DominationFailure {
            t: worst.0,
            excess: worst.1,
        });
    }
    Ok(())
}

const DOMINATION_GRID: usize = 100_000;

/// The modified interpolant for the Skip 1-Add 2 rule: the Hermite
/// interpolant at the doubled rule nodes, minus the multiple of the full
/// node-product square that annihilates its degree-2k Gegenbauer
/// coefficient. Touches h at all rule nodes and stays below it.
pub fn second_level_interpolant(n: usize, k: usize, h: &Potential) -> Result<Poly> {
    if !h.sign_case().admits_second_level(k) {
        return Err(Error::InvalidArgument(format!(
            "kernel {} lacks the nonnegative derivatives of orders 2k..2k+2 needed here",
            h.spec()
        )));
    }
    let rule = quadrature::skip1add2(n, k)?;
    let multiset = NodeMultiset::doubled(&rule.nodes)?;
    let hermite = hermite_interpolant(h, &multiset)?;
    let full_product = Poly::from_roots(&rule.nodes);
    let square = full_product.mul(&full_product);

    let h_coeffs = gegenbauer_expand(n, &hermite);
    let e_coeffs = gegenbauer_expand(n, &square);
    let h_2k = h_coeffs.get(2 * k).copied().unwrap_or(0.0);
    let e_2k = e_coeffs[2 * k];
    let modified = hermite.sub(&square.scale(h_2k / e_2k));

    check_domination(DOMINATION_GRID, &modified, h)?;
    Ok(modified)
}

/// The degree-16 certificate for the 600-cell: interpolate h over the
/// inner-product multiset (simple at ±1, doubled at the seven interior
/// values) and annihilate the 12th Gegenbauer coefficient in dimension 4.
pub fn cell600_interpolant(h: &Potential) -> Result<Poly> {
    let sign = h.sign_case();
    let admissible = matches!(sign, SignCase::NonnegativeUpTo { order } if order >= 15)
        || sign == SignCase::Custom;
    if !admissible {
        return Err(Error::InvalidArgument(format!(
            "kernel {} does not satisfy h^(i) >= 0 (i <= 15), h^(16) <= 0",
            h.spec()
        )));
    }
    let s5 = 5.0f64.sqrt();
    let interior = [
        -(1.0 + s5) / 4.0,
        -0.5,
        (1.0 - s5) / 4.0,
        0.0,
        (s5 - 1.0) / 4.0,
        0.5,
        (1.0 + s5) / 4.0,
    ];
    let mut nodes = vec![-1.0];
    for &x in &interior {
        nodes.push(x);
        nodes.push(x);
    }
    nodes.push(1.0);
    let multiset = NodeMultiset::new(nodes.clone())?;

    // Numerically spot-check the first two derivative signs; the rest of
    // the profile is taken from the descriptor.
    for i in 0..=10 {
        let t = -1.0 + 1.9 * i as f64 / 10.0;
        if h.derivative(t) < -1e-12 {
            return Err(Error::InvalidArgument(format!(
                "kernel {} has negative first derivative at t = {t}",
                h.spec()
            )));
        }
        let step = 1e-5;
        let second = (h.derivative(t + step) - h.derivative(t - step)) / (2.0 * step);
        if second < -1e-6 {
            return Err(Error::InvalidArgument(format!(
                "kernel {} has negative second derivative at t = {t}",
                h.spec()
            )));
        }
    }

    let interpolant = hermite_interpolant(h, &multiset)?;
    let g16 = Poly::from_roots(&nodes);
    let g_coeffs = gegenbauer_expand(4, &interpolant);
    let e_coeffs = gegenbauer_expand(4, &g16);
    let modified =
        interpolant.sub(&g16.scale(g_coeffs.get(12).copied().unwrap_or(0.0) / e_coeffs[12]));
    check_domination(DOMINATION_GRID, &modified, h)?;
    Ok(modified)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeCase {
    I,
    II,
}

/// The degree-tau Hermite certificate for the first-level bounds: nodes of
/// the corresponding rule, doubled in the interior, simple at ±1.
pub fn case_interpolant(n: usize, tau: usize, case: DerivativeCase, h: &Potential) -> Result<Poly> {
    let admissible = match case {
        DerivativeCase::I => h.sign_case().admits_case_i(tau),
        DerivativeCase::II => h.sign_case().admits_case_ii(tau),
    };
    if !admissible {
        return Err(Error::InvalidArgument(format!(
            "kernel {} does not have the derivative signs of case {:?} at strength {tau}",
            h.spec(),
            case
        )));
    }
    let rule = match case {
        DerivativeCase::I => quadrature::pulb_case_i(n, tau)?,
        DerivativeCase::II => quadrature::pulb_case_ii(n, tau)?,
    };
    if h.singular_at_one()
        && rule
            .nodes
            .iter()
            .any(|&x| x > 1.0 - tol::INNER_PRODUCT_CLUSTER)
    {
        return Err(Error::SingularEvaluation { t: 1.0 });
    }
    let multiset = NodeMultiset::endpoints_simple(&rule.nodes)?;
    let interpolant = hermite_interpolant(h, &multiset)?;
    check_domination(DOMINATION_GRID, &interpolant, h)?;
    Ok(interpolant)
}
