//! Gegenbauer and adjacent Jacobi polynomials, and integration against the
//! projected surface measure on [-1, 1].
//!
//! Everything is normalized so that P_i^{(a,b)}(1) = 1. The measure is
//! d mu_n(t) = gamma_n (1 - t^2)^((n-3)/2) dt with gamma_n chosen to make
//! mu_n a probability measure; gamma_n itself is never needed because all
//! integrals reduce to the moment table of mu_n.
//!
//! Coefficient recurrences and integration dot products run in
//! double-double arithmetic internally: near degree 14 the monomial basis
//! cancels ten digits in low dimensions, and the verification invariants
//! ask for residuals at 1e-11.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::tol;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Real univariate polynomial in the monomial basis, index = power.
///
/// The zero polynomial is the empty coefficient vector; otherwise the
/// leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// Build from monomial coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut p = Poly::constant(1.0);
        for &r in roots {
            p = p.mul(&Poly::from_coeffs(vec![-r, 1.0]));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| j as f64 * c)
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|j| self.coeff(j) + other.coeff(j)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Dd::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(Dd::prod(a, b));
            }
        }
        Poly::from_coeffs(coeffs.into_iter().map(Dd::to_f64).collect())
    }
}

/// Moment table of mu_n: m_j = int t^j d mu_n(t).
///
/// m_0 = 1, odd moments vanish, and the even moments obey
/// m_{2j} = m_{2j-2} (2j-1)/(2j+n-2).
#[derive(Debug, Clone)]
pub struct MeasureMoments {
    pub n: usize,
    even: Vec<Dd>,
}

impl MeasureMoments {
    pub fn new(n: usize, max_power: usize) -> Self {
        assert!(n >= 2, "dimension must be at least 2");
        let mut even = vec![Dd::ONE];
        let mut m = Dd::ONE;
        let mut j = 1usize;
        while 2 * j <= max_power {
            m = m
                .mul_f64((2 * j - 1) as f64)
                .div_f64((2 * j + n - 2) as f64);
            even.push(m);
            j += 1;
        }
        MeasureMoments { n, even }
    }

    pub fn moment(&self, j: usize) -> f64 {
        self.moment_dd(j).to_f64()
    }

    fn moment_dd(&self, j: usize) -> Dd {
        if j % 2 == 1 {
            return Dd::ZERO;
        }
        match self.even.get(j / 2) {
            Some(&m) => m,
            None => MeasureMoments::new(self.n, j).even[j / 2],
        }
    }
}

/// int t^j d mu_n(t); 0 for odd j.
pub fn measure_moment(n: usize, j: usize) -> f64 {
    MeasureMoments::new(n, j).moment(j)
}

/// Constant Gegenbauer coefficient f_0 = int f d mu_n.
pub fn integrate(n: usize, f: &Poly) -> f64 {
    let moments = MeasureMoments::new(n, f.degree());
    let mut acc = Dd::ZERO;
    for (j, &c) in f.coeffs().iter().enumerate() {
        if c != 0.0 {
            acc = acc.add(moments.moment_dd(j).mul_f64(c));
        }
    }
    acc.to_f64()
}

/// int f g d mu_n without rounding the product to f64 coefficients first.
pub fn inner_product(n: usize, f: &Poly, g: &Poly) -> f64 {
    if f.is_zero() || g.is_zero() {
        return 0.0;
    }
    let moments = MeasureMoments::new(n, f.degree() + g.degree());
    let mut acc = Dd::ZERO;
    for (i, &a) in f.coeffs().iter().enumerate() {
        for (j, &b) in g.coeffs().iter().enumerate() {
            if a != 0.0 && b != 0.0 && (i + j) % 2 == 0 {
                acc = acc.add(moments.moment_dd(i + j).mul(Dd::prod(a, b)));
            }
        }
    }
    acc.to_f64()
}

/// Cache of adjacent Gegenbauer polynomials P_i^{(a,b)} for a,b in {0,1},
/// built eagerly up to a maximum degree and immutable afterwards.
///
/// P_i^{(a,b)} is the Jacobi polynomial with alpha = a + (n-3)/2 and
/// beta = b + (n-3)/2, renormalized so its value at 1 is 1.
#[derive(Debug)]
pub struct GegenbauerBasis {
    pub n: usize,
    max_degree: usize,
    // polys[a][b][i]
    polys: [[Vec<Poly>; 2]; 2],
}

pub const DEFAULT_MAX_DEGREE: usize = 20;

impl GegenbauerBasis {
    pub fn new(n: usize, max_degree: usize) -> Self {
        assert!(n >= 2, "dimension must be at least 2");
        let build = |a: usize, b: usize| jacobi_family(n, a, b, max_degree);
        GegenbauerBasis {
            n,
            max_degree,
            polys: [[build(0, 0), build(0, 1)], [build(1, 0), build(1, 1)]],
        }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Coefficient vector of P_i^{(a,b)}.
    pub fn poly(&self, a: usize, b: usize, i: usize) -> Result<&Poly> {
        if a > 1 || b > 1 {
            return Err(Error::InvalidArgument(format!(
                "adjacent offsets must be 0 or 1, got ({a},{b})"
            )));
        }
        self.polys[a][b].get(i).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "degree {i} beyond cached maximum {}",
                self.max_degree
            ))
        })
    }

    /// P_i^{(n)} = P_i^{(0,0)}.
    pub fn gegenbauer(&self, i: usize) -> &Poly {
        &self.polys[0][0][i]
    }

    /// Value of P_i^{(a,b)}(t) through the recurrence on values.
    pub fn eval(&self, a: usize, b: usize, i: usize, t: f64) -> Result<f64> {
        if a > 1 || b > 1 {
            return Err(Error::InvalidArgument(format!(
                "adjacent offsets must be 0 or 1, got ({a},{b})"
            )));
        }
        Ok(jacobi_value(self.n, a, b, i, t))
    }
}

fn shared_cache() -> &'static Mutex<HashMap<usize, Arc<GegenbauerBasis>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GegenbauerBasis>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared, lazily built basis for dimension n (degrees up to 20).
pub fn basis(n: usize) -> Arc<GegenbauerBasis> {
    let mut cache = shared_cache().lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| Arc::new(GegenbauerBasis::new(n, DEFAULT_MAX_DEGREE)))
        .clone()
}

/// Classical Jacobi parameters for the adjacent polynomial P^{(a,b)} in
/// dimension n.
fn jacobi_params(n: usize, a: usize, b: usize) -> (f64, f64) {
    let half = (n as f64 - 3.0) / 2.0;
    (a as f64 + half, b as f64 + half)
}

/// Value at 1 of the classical Jacobi polynomial: binom(i + alpha, i).
fn jacobi_value_at_one(alpha: f64, i: usize) -> Dd {
    let mut v = Dd::ONE;
    for j in 1..=i {
        v = v.mul_f64(alpha + j as f64).div_f64(j as f64);
    }
    v
}

/// Recurrence constants for the classical Jacobi family; all four are
/// dyadic rationals of modest size, hence exact in f64.
fn jacobi_rec(alpha: f64, beta: f64, k: f64) -> (f64, f64, f64, f64) {
    let c1 = 2.0 * k * (k + alpha + beta) * (2.0 * k + alpha + beta - 2.0);
    let c2 = (2.0 * k + alpha + beta - 1.0) * (alpha * alpha - beta * beta);
    let c3 =
        (2.0 * k + alpha + beta - 2.0) * (2.0 * k + alpha + beta - 1.0) * (2.0 * k + alpha + beta);
    let c4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + alpha + beta);
    (c1, c2, c3, c4)
}

/// All of P_0..P_max for (n, a, b), normalized to 1 at t = 1, as f64
/// coefficient vectors rounded once from double-double.
fn jacobi_family(n: usize, a: usize, b: usize, max_degree: usize) -> Vec<Poly> {
    let (alpha, beta) = jacobi_params(n, a, b);
    let mut classical: Vec<Vec<Dd>> = Vec::with_capacity(max_degree + 1);
    classical.push(vec![Dd::ONE]);
    if max_degree >= 1 {
        // P_1 = (alpha + 1) + (alpha + beta + 2)(x - 1)/2
        let s = alpha + beta + 2.0;
        classical.push(vec![Dd::from(alpha + 1.0 - s / 2.0), Dd::from(s / 2.0)]);
    }
    for i in 2..=max_degree {
        let (c1, c2, c3, c4) = jacobi_rec(alpha, beta, i as f64);
        let prev = &classical[i - 1];
        let prev2 = &classical[i - 2];
        let mut next = vec![Dd::ZERO; i + 1];
        for (j, &c) in prev.iter().enumerate() {
            next[j] = next[j].add(c.mul_f64(c2));
            next[j + 1] = next[j + 1].add(c.mul_f64(c3));
        }
        for (j, &c) in prev2.iter().enumerate() {
            next[j] = next[j].sub(c.mul_f64(c4));
        }
        for c in next.iter_mut() {
            *c = c.div_f64(c1);
        }
        classical.push(next);
    }
    classical
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let v1 = jacobi_value_at_one(alpha, i);
            Poly::from_coeffs(p.into_iter().map(|c| c.div(v1).to_f64()).collect())
        })
        .collect()
}

/// Value recurrence for the normalized Jacobi polynomial.
fn jacobi_value(n: usize, a: usize, b: usize, i: usize, t: f64) -> f64 {
    let (alpha, beta) = jacobi_params(n, a, b);
    if i == 0 {
        return 1.0;
    }
    // Classical values scaled on the fly by the values at 1.
    let mut prev = 1.0;
    let mut cur = alpha + 1.0 + (alpha + beta + 2.0) * (t - 1.0) / 2.0;
    for k in 2..=i {
        let (c1, c2, c3, c4) = jacobi_rec(alpha, beta, k as f64);
        let next = ((c2 + c3 * t) * cur - c4 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur / jacobi_value_at_one(alpha, i).to_f64()
}

/// P_i^{(a,b)}(t) with the normalization P_i^{(a,b)}(1) = 1.
pub fn jacobi_eval(n: usize, a: usize, b: usize, i: usize, t: f64) -> Result<f64> {
    if a > 1 || b > 1 {
        return Err(Error::InvalidArgument(format!(
            "adjacent offsets must be 0 or 1, got ({a},{b})"
        )));
    }
    Ok(jacobi_value(n, a, b, i, t))
}

/// Leading monomial coefficient a_k of P_k^{(n)};
/// a_{k+1}/a_k = (n+2k-2)/(n+k-2), a_0 = a_1 = 1.
pub fn gegenbauer_leading(n: usize, k: usize) -> f64 {
    let mut a = Dd::ONE;
    for j in 1..k {
        a = a
            .mul_f64((n + 2 * j - 2) as f64)
            .div_f64((n + j - 2) as f64);
    }
    a.to_f64()
}

/// ||P_k^{(n)}||^2 = (n+k-2)/(n+2k-2) * binom(k+n-2, k)^{-1}.
pub fn gegenbauer_norm_sq(n: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut v = Dd::ratio((n + k - 2) as f64, (n + 2 * k - 2) as f64);
    for j in 1..=k {
        v = v.mul_f64(j as f64).div_f64((n - 2 + j) as f64);
    }
    v.to_f64()
}

/// Expand f in the Gegenbauer basis of dimension n by back-substitution
/// from the highest degree, returning (f_0, ..., f_deg).
pub fn gegenbauer_expand(n: usize, f: &Poly) -> Vec<f64> {
    if f.is_zero() {
        return vec![0.0];
    }
    let deg = f.degree();
    let b = if deg <= DEFAULT_MAX_DEGREE {
        basis(n)
    } else {
        Arc::new(GegenbauerBasis::new(n, deg))
    };
    let mut residue: Vec<Dd> = f.coeffs().iter().map(|&c| Dd::from(c)).collect();
    let mut coeffs = vec![0.0; deg + 1];
    for d in (0..=deg).rev() {
        let c = residue[d].to_f64();
        if c != 0.0 {
            let p = b.gegenbauer(d);
            let fd = c / p.leading();
            coeffs[d] = fd;
            for (j, &pc) in p.coeffs().iter().enumerate() {
                residue[j] = residue[j].sub(Dd::prod(pc, fd));
            }
        }
    }
    coeffs
}

/// Rebuild the polynomial from Gegenbauer coefficients.
pub fn gegenbauer_synthesize(n: usize, coeffs: &[f64]) -> Poly {
    let deg = coeffs.len().saturating_sub(1);
    let b = if deg <= DEFAULT_MAX_DEGREE {
        basis(n)
    } else {
        Arc::new(GegenbauerBasis::new(n, deg))
    };
    let mut acc = vec![Dd::ZERO; deg + 1];
    for (i, &c) in coeffs.iter().enumerate() {
        if c != 0.0 {
            for (j, &pc) in b.gegenbauer(i).coeffs().iter().enumerate() {
                acc[j] = acc[j].add(Dd::prod(pc, c));
            }
        }
    }
    Poly::from_coeffs(acc.into_iter().map(Dd::to_f64).collect())
}

/// Refine one root per bracket: bisection to width 1e-12, then Newton
/// polish. Every bracket must contain exactly one sign change.
pub fn isolate_roots(f: &Poly, brackets: &[(f64, f64)]) -> Result<Vec<f64>> {
    let df = f.derivative();
    let mut roots = Vec::with_capacity(brackets.len());
    for &(lo, hi) in brackets {
        roots.push(refine_root(f, &df, lo, hi)?);
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(roots)
}

fn refine_root(f: &Poly, df: &Poly, mut lo: f64, mut hi: f64) -> Result<f64> {
    let flo = f.eval(lo);
    let fhi = f.eval(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::MissingRoot { lo, hi });
    }
    let sign_lo = flo.signum();
    while hi - lo > tol::BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let fm = f.eval(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..4 {
        let fx = f.eval(x);
        let dfx = df.eval(x);
        if dfx == 0.0 {
            break;
        }
        let next = x - fx / dfx;
        if next < lo - tol::BISECTION_WIDTH || next > hi + tol::BISECTION_WIDTH {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Roots of P_k^{(a,b)}, isolated inductively: the zeros of consecutive
/// orthogonal polynomials interlace, so degree j roots bracket degree j+1.
pub fn orthogonal_roots(n: usize, a: usize, b: usize, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let bas = basis(n);
    let p1 = bas.poly(a, b, 1)?;
    // Linear case directly.
    let mut roots = vec![-p1.coeff(0) / p1.coeff(1)];
    for j in 2..=k {
        let pj = bas.poly(a, b, j)?;
        let mut brackets = Vec::with_capacity(j);
        let mut prev = -1.0;
        for &r in &roots {
            brackets.push((prev, r));
            prev = r;
        }
        brackets.push((prev, 1.0));
        roots = isolate_roots(pj, &brackets)?;
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Midpoint oracle for int t^j dmu_n in the theta substitution
    /// t = cos(theta), which removes the endpoint singularity:
    /// int cos^j(theta) sin^{n-2}(theta) dtheta / int sin^{n-2}.
    fn moment_oracle(n: usize, j: usize) -> f64 {
        let panels = 1_000_000;
        let h = std::f64::consts::PI / panels as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..panels {
            let th = (i as f64 + 0.5) * h;
            let w = th.sin().powi(n as i32 - 2);
            num += th.cos().powi(j as i32) * w;
            den += w;
        }
        num / den
    }

    #[test]
    fn moments_match_oracle() {
        for &n in &[2usize, 3, 4, 8, 22, 24] {
            for j in [0usize, 2, 4, 6, 8] {
                let exact = measure_moment(n, j);
                let approx = moment_oracle(n, j);
                assert!(
                    (exact - approx).abs() <= 1e-10,
                    "n={n} j={j}: {exact} vs oracle {approx}"
                );
            }
        }
    }

    #[test]
    fn moment_golden_values() {
        assert!((measure_moment(3, 2) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(measure_moment(7, 1), 0.0);
        assert_eq!(measure_moment(4, 9), 0.0);
        assert!((measure_moment(8, 2) - 1.0 / 8.0).abs() < 1e-15);
        assert!((measure_moment(3, 4) - 1.0 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn moments_strictly_decreasing() {
        for n in 3..=24 {
            let mut prev = 1.0;
            for j in 1..=8 {
                let m = measure_moment(n, 2 * j);
                assert!(m < prev, "n={n}: m_{} not decreasing", 2 * j);
                prev = m;
            }
        }
    }

    #[test]
    fn jacobi_degree_zero_is_one() {
        assert_eq!(jacobi_eval(5, 0, 0, 0, 0.37).unwrap(), 1.0);
    }

    #[test]
    fn jacobi_legendre_p2() {
        // n = 3 gives the Legendre family: P_2(t) = (3t^2 - 1)/2.
        let v = jacobi_eval(3, 0, 0, 2, 0.0).unwrap();
        assert!((v + 0.5).abs() < 1e-14);
        for &t in &[-0.9, -0.3, 0.2, 0.77] {
            let expect = (3.0 * t * t - 1.0) / 2.0;
            assert!((jacobi_eval(3, 0, 0, 2, t).unwrap() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobi_normalized_at_one() {
        for n in [2usize, 3, 8, 21, 24] {
            for a in 0..=1 {
                for b in 0..=1 {
                    for i in [0usize, 1, 3, 7, 12] {
                        let v = jacobi_eval(n, a, b, i, 1.0).unwrap();
                        assert!(
                            (v - 1.0).abs() < 1e-12,
                            "P(1) != 1 for n={n} a={a} b={b} i={i}: {v}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_rejects_bad_offsets() {
        assert!(jacobi_eval(3, 2, 0, 1, 0.0).is_err());
    }

    #[test]
    fn coefficient_and_value_routes_agree() {
        for n in [3usize, 8, 24] {
            let bas = basis(n);
            for a in 0..=1 {
                for b in 0..=1 {
                    for i in [1usize, 4, 9, 14] {
                        for &t in &[-1.0, -0.42, 0.0, 0.65, 1.0] {
                            let by_coeffs = bas.poly(a, b, i).unwrap().eval(t);
                            let by_values = bas.eval(a, b, i, t).unwrap();
                            assert!(
                                (by_coeffs - by_values).abs() < 1e-11,
                                "n={n} ({a},{b}) i={i} t={t}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn three_term_recurrence_residual() {
        // (2a+k) P_{k+1} = 2(a+k) t P_k - k P_{k-1}, a = n/2 - 1,
        // at 100 Chebyshev-spaced points.
        for n in 3..=24 {
            let alpha = n as f64 / 2.0 - 1.0;
            for k in 1..=13 {
                for s in 0..100 {
                    let t = (std::f64::consts::PI * (s as f64 + 0.5) / 100.0).cos();
                    let lhs = (2.0 * alpha + k as f64) * jacobi_eval(n, 0, 0, k + 1, t).unwrap();
                    let rhs = 2.0 * (alpha + k as f64) * t * jacobi_eval(n, 0, 0, k, t).unwrap()
                        - k as f64 * jacobi_eval(n, 0, 0, k - 1, t).unwrap();
                    assert!(
                        (lhs - rhs).abs() <= tol::RECURRENCE_RESIDUAL,
                        "n={n} k={k} t={t}: residual {}",
                        (lhs - rhs).abs()
                    );
                }
            }
        }
    }

    #[test]
    fn integrate_golden_values() {
        // Orthogonality to constants.
        let bas = basis(3);
        assert!(integrate(3, bas.gegenbauer(2)).abs() < 1e-14);
        // Moment oracle: int t^2 dmu_3 = 1/3.
        assert!((integrate(3, &Poly::from_coeffs(vec![0.0, 0.0, 1.0])) - 1.0 / 3.0).abs() < 1e-15);
        // q_5 for (n=8, k=4) is odd: t(8t^2-1)(2t^2-1)/6.
        let q5 = Poly::from_coeffs(vec![0.0, 1.0 / 6.0, 0.0, -10.0 / 6.0, 0.0, 16.0 / 6.0]);
        assert!(integrate(8, &q5).abs() < 1e-15);
    }

    #[test]
    fn norm_sq_matches_direct_integration() {
        assert!((gegenbauer_norm_sq(3, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(gegenbauer_norm_sq(11, 0), 1.0);
        // (n+k-2)/(n+2k-2) * binom(k+n-2,k)^{-1} at n=8, k=2:
        // (8/10) * (1/28) = 1/35; cross-checked below against the direct
        // integral of ((8t^2-1)/7)^2.
        assert!((gegenbauer_norm_sq(8, 2) - 1.0 / 35.0).abs() < 1e-15);
        let p2 = Poly::from_coeffs(vec![-1.0 / 7.0, 0.0, 8.0 / 7.0]);
        assert!((integrate(8, &p2.mul(&p2)) - 1.0 / 35.0).abs() < 1e-15);
        for n in [3usize, 8, 22, 24] {
            let bas = basis(n);
            for k in 0..=14 {
                let p = bas.gegenbauer(k);
                let direct = inner_product(n, p, p);
                assert!(
                    (direct - gegenbauer_norm_sq(n, k)).abs() < 1e-12,
                    "n={n} k={k}: {direct} vs {}",
                    gegenbauer_norm_sq(n, k)
                );
            }
        }
    }

    #[test]
    fn pairwise_orthogonality() {
        for n in [3usize, 8, 24] {
            let bas = basis(n);
            for i in 0..=14 {
                for j in 0..i {
                    let direct = inner_product(n, bas.gegenbauer(i), bas.gegenbauer(j));
                    assert!(
                        direct.abs() <= tol::ORTHOGONALITY_RESIDUAL,
                        "n={n} <P_{i}, P_{j}> = {direct}"
                    );
                }
            }
        }
    }

    #[test]
    fn integrate_of_explicit_product_stays_small() {
        // Same orthogonality but through the rounded product polynomial.
        let bas = basis(3);
        let prod = bas.gegenbauer(14).mul(bas.gegenbauer(12));
        assert!(integrate(3, &prod).abs() <= 1e-10);
    }

    #[test]
    fn leading_coefficient_ratio() {
        for n in 3..=24 {
            for k in 1..=13 {
                let ratio = gegenbauer_leading(n, k + 1) / gegenbauer_leading(n, k);
                let expect = (n + 2 * k - 2) as f64 / (n + k - 2) as f64;
                assert!((ratio - expect).abs() < 1e-12, "n={n} k={k}");
            }
            let bas = basis(n);
            for k in 0..=14 {
                assert!(
                    (bas.gegenbauer(k).leading() - gegenbauer_leading(n, k)).abs()
                        / gegenbauer_leading(n, k)
                        < 1e-12
                );
            }
        }
    }

    #[test]
    fn expand_basis_element() {
        let out = gegenbauer_expand(7, basis(7).gegenbauer(3));
        assert_eq!(out.len(), 4);
        for (i, &c) in out.iter().enumerate() {
            let expect = if i == 3 { 1.0 } else { 0.0 };
            assert!((c - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn expand_t_squared_in_dim3() {
        let out = gegenbauer_expand(3, &Poly::from_coeffs(vec![0.0, 0.0, 1.0]));
        assert!((out[0] - 1.0 / 3.0).abs() < 1e-14);
        assert!(out[1].abs() < 1e-14);
        assert!((out[2] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn expand_roundtrip_random_polynomials() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(41);
        for n in [3usize, 8, 24] {
            for _ in 0..20 {
                let deg = rng.gen_range(1..=14);
                let coeffs: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let f = Poly::from_coeffs(coeffs);
                let back = gegenbauer_synthesize(n, &gegenbauer_expand(n, &f));
                for s in 0..=100 {
                    let t = -1.0 + 2.0 * s as f64 / 100.0;
                    assert!(
                        (f.eval(t) - back.eval(t)).abs() <= tol::EXPAND_ROUNDTRIP,
                        "n={n} deg={deg} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn isolate_simple_root() {
        let f = Poly::from_coeffs(vec![-1.0 / 3.0, 0.0, 1.0]);
        let roots = isolate_roots(&f, &[(0.0, 1.0)]).unwrap();
        assert!((roots[0] - 0.5773502691896258).abs() < 1e-14);
    }

    #[test]
    fn isolate_missing_root_errors() {
        let f = Poly::from_coeffs(vec![1.0, 0.0, 1.0]); // t^2 + 1
        assert!(matches!(
            isolate_roots(&f, &[(-1.0, 1.0)]),
            Err(Error::MissingRoot { .. })
        ));
    }

    #[test]
    fn root_residual_within_bracket_scale() {
        let bas = basis(3);
        let q4 = bas.gegenbauer(4).add(&bas.gegenbauer(2).scale(5.0 / 9.0));
        let gauss = orthogonal_roots(3, 0, 0, 3).unwrap();
        let mut brackets = vec![(-1.0, gauss[0])];
        for w in gauss.windows(2) {
            brackets.push((w[0], w[1]));
        }
        brackets.push((gauss[2], 1.0));
        let roots = isolate_roots(&q4, &brackets).unwrap();
        let scale = (0..=100)
            .map(|i| q4.eval(-1.0 + 0.02 * i as f64).abs())
            .fold(0.0f64, f64::max);
        for &r in &roots {
            assert!(q4.eval(r).abs() <= tol::ROOT_RESIDUAL_FACTOR * scale);
        }
    }

    #[test]
    fn q7_roots_for_leech_rule() {
        // q_7 = P_7^{(24)} + (4/81) P_5^{(24)} has zeros
        // {0, ±sqrt6/12, ±sqrt6/6, ±sqrt6/4}.
        let bas = basis(24);
        let q7 = bas.gegenbauer(7).add(&bas.gegenbauer(5).scale(4.0 / 81.0));
        let gauss = orthogonal_roots(24, 0, 0, 6).unwrap();
        let mut brackets = Vec::new();
        let mut prev = -1.0;
        for &r in &gauss {
            brackets.push((prev, r));
            prev = r;
        }
        brackets.push((prev, 1.0));
        let roots = isolate_roots(&q7, &brackets).unwrap();
        let s6 = 6.0f64.sqrt();
        let expect = [
            -s6 / 4.0,
            -s6 / 6.0,
            -s6 / 12.0,
            0.0,
            s6 / 12.0,
            s6 / 6.0,
            s6 / 4.0,
        ];
        assert_eq!(roots.len(), expect.len());
        for (r, e) in roots.iter().zip(expect.iter()) {
            assert!((r - e).abs() < 1e-12, "{r} vs {e}");
        }
    }

    #[test]
    fn gauss_root_values_dim3() {
        // Zeros of P_3^{(3)} (Legendre): 0, ±sqrt(3/5).
        let roots = orthogonal_roots(3, 0, 0, 3).unwrap();
        let s = (3.0f64 / 5.0).sqrt();
        for (r, e) in roots.iter().zip([-s, 0.0, s].iter()) {
            assert!((r - e).abs() < 1e-14);
        }
    }
}
