//! Spherical code catalog: explicit coordinates, witness points, export.
//!
//! Every configuration discussed in the verification suites is built from
//! closed-form coordinates (golden ratio, Golay codewords, lattice shells)
//! and checked at construction time: unit norms, pairwise separation, and
//! membership of every inner product in the expected spectrum.

mod catalog;

use crate::error::{Error, Result};
use crate::quadrature::IndexSet;
use crate::tol;

/// Which universal-minimum witness a stored point certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessRole {
    /// Potentials with nonnegative (tau+1)-st derivative (first level).
    CaseI,
    /// Potentials with nonpositive (tau+1)-st derivative; the witness is a
    /// point of the code.
    CaseII,
    /// The Skip 1-Add 2 enhanced bound.
    SecondLevel,
}

impl WitnessRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessRole::CaseI => "case_i",
            WitnessRole::CaseII => "case_ii",
            WitnessRole::SecondLevel => "second_level",
        }
    }
}

/// A named point configuration on the unit sphere S^{n-1} with its
/// catalog metadata.
#[derive(Debug, Clone)]
pub struct SphericalCode {
    pub name: String,
    pub n: usize,
    pub points: Vec<Vec<f64>>,
    /// Design strength tau.
    pub strength: usize,
    /// All degrees with vanishing moments that the suites rely on
    /// (a superset of 1..=strength for the skip-structure codes).
    pub design_degrees: IndexSet,
    /// Inner products attained between distinct points, ascending.
    pub expected_inner_products: Vec<f64>,
    /// Half-strength of the Skip 1-Add 2 rule this code attains, if any.
    pub second_level_k: Option<usize>,
    witnesses: Vec<(WitnessRole, Vec<f64>)>,
    unsupported: Vec<(WitnessRole, String)>,
}

impl SphericalCode {
    pub fn cardinality(&self) -> usize {
        self.points.len()
    }

    /// The stored universal-minimum witness for a role.
    pub fn witness_point(&self, role: WitnessRole) -> Result<&[f64]> {
        if let Some((_, w)) = self.witnesses.iter().find(|(r, _)| *r == role) {
            return Ok(w);
        }
        let reason = self
            .unsupported
            .iter()
            .find(|(r, _)| *r == role)
            .map(|(_, msg)| msg.clone())
            .unwrap_or_else(|| "no witness registered".to_string());
        Err(Error::LevelNotAttained {
            code: self.name.clone(),
            level: role.as_str().to_string(),
            reason,
        })
    }

    pub fn supports(&self, role: WitnessRole) -> bool {
        self.witnesses.iter().any(|(r, _)| *r == role)
    }

    /// Construction-time self checks: unit norms and, pairwise (full scan
    /// for N <= 5000, twenty deterministic base points otherwise),
    /// separation plus membership of the inner product in the expected
    /// spectrum.
    pub fn validate(&self) -> Result<()> {
        let fail = |check: String| {
            Err(Error::CodeSelfCheck {
                code: self.name.clone(),
                check,
            })
        };
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != self.n {
                return fail(format!("point {i} has {} coordinates", p.len()));
            }
            let norm2: f64 = p.iter().map(|x| x * x).sum();
            if (norm2.sqrt() - 1.0).abs() > tol::UNIT_NORM {
                return fail(format!("point {i} has norm {}", norm2.sqrt()));
            }
        }
        for (_, w) in &self.witnesses {
            let norm2: f64 = w.iter().map(|x| x * x).sum();
            if (norm2.sqrt() - 1.0).abs() > tol::UNIT_NORM {
                return fail("witness is not a unit vector".to_string());
            }
        }
        let num = self.points.len();
        let bases: Vec<usize> = if num <= 5000 {
            (0..num).collect()
        } else {
            (0..20).map(|i| i * (num / 20) + 1).collect()
        };
        for &i in &bases {
            for j in 0..num {
                if i == j {
                    continue;
                }
                let t = dot(&self.points[i], &self.points[j]);
                if t > 1.0 - tol::MIN_POINT_SEPARATION {
                    return fail(format!("points {i} and {j} coincide"));
                }
                let ok = self
                    .expected_inner_products
                    .iter()
                    .any(|&v| (t - v).abs() <= tol::INNER_PRODUCT_CLUSTER);
                if !ok {
                    return fail(format!(
                        "inner product {t} between points {i},{j} outside spectrum"
                    ));
                }
            }
        }
        Ok(())
    }

    /// CSV dump, one point per row, 17 significant digits, construction
    /// order.
    pub fn export_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON dump with the same ordering; floats as shortest round-trip
    /// decimals.
    pub fn export_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"name\": \"{}\",\n", self.name));
        out.push_str(&format!("  \"n\": {},\n", self.n));
        out.push_str(&format!("  \"cardinality\": {},\n", self.points.len()));
        out.push_str("  \"points\": [\n");
        for (i, p) in self.points.iter().enumerate() {
            let row: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
            let sep = if i + 1 == self.points.len() { "" } else { "," };
            out.push_str(&format!("    [{}]{sep}\n", row.join(",")));
        }
        out.push_str("  ]\n}\n");
        out
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn normalize(v: &[f64]) -> Vec<f64> {
    let norm = dot(v, v).sqrt();
    v.iter().map(|x| x / norm).collect()
}

/// Householder reflection sending `axis` to the last coordinate vector,
/// applied to a vector known to be orthogonal to `axis`; the last
/// coordinate (then zero) is dropped.
fn drop_axis(v: &[f64], axis: &[f64]) -> Vec<f64> {
    let d = v.len();
    // Choose the better-conditioned of axis -/+ e_last.
    let mut refl: Vec<f64> = axis.to_vec();
    if axis[d - 1] < 0.0 {
        refl[d - 1] += 1.0;
    } else {
        refl[d - 1] -= 1.0;
    }
    let rr = dot(&refl, &refl);
    if rr < 1e-24 {
        // axis already is ±e_last.
        return v[..d - 1].to_vec();
    }
    let f = 2.0 * dot(&refl, v) / rr;
    let mut out: Vec<f64> = v.iter().zip(&refl).map(|(x, r)| x - f * r).collect();
    out.pop();
    out
}

/// Points orthogonal to `axis`, re-expressed in the hyperplane's own
/// coordinates (dimension drops by one).
fn reduce_points(points: &[Vec<f64>], axis: &[f64]) -> Vec<Vec<f64>> {
    points.iter().map(|p| drop_axis(p, axis)).collect()
}

/// Select the points of `parent` at inner product `s` from the apex point,
/// recenter and rescale them onto the unit sphere of the orthogonal
/// complement: y = (x - s * apex) / sqrt(1 - s^2), expressed in n-1
/// coordinates.
pub fn derive_kissing(parent: &SphericalCode, apex: usize, s: f64) -> Result<SphericalCode> {
    if apex >= parent.points.len() {
        return Err(Error::InvalidArgument(format!(
            "apex index {apex} out of range"
        )));
    }
    if !parent
        .expected_inner_products
        .iter()
        .any(|&v| (v - s).abs() <= tol::INNER_PRODUCT_CLUSTER)
    {
        return Err(Error::InvalidArgument(format!(
            "{s} is not an inner product of {}",
            parent.name
        )));
    }
    let apex_point = parent.points[apex].clone();
    let scale = (1.0 - s * s).sqrt();
    let mut ambient = Vec::new();
    for (i, p) in parent.points.iter().enumerate() {
        if i == apex {
            continue;
        }
        if (dot(p, &apex_point) - s).abs() <= tol::INNER_PRODUCT_CLUSTER {
            let y: Vec<f64> = p
                .iter()
                .zip(&apex_point)
                .map(|(x, a)| (x - s * a) / scale)
                .collect();
            ambient.push(y);
        }
    }
    if ambient.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no points of {} at inner product {s} from apex {apex}",
            parent.name
        )));
    }
    let points = reduce_points(&ambient, &apex_point);
    // Spectrum observed from the derived points themselves.
    let mut values: Vec<f64> = Vec::new();
    let num = points.len();
    let bases: Vec<usize> = if num <= 2000 {
        (0..num).collect()
    } else {
        (0..20).collect()
    };
    for &i in &bases {
        for j in 0..num {
            if i != j {
                let t = dot(&points[i], &points[j]);
                if !values
                    .iter()
                    .any(|&v| (v - t).abs() <= tol::INNER_PRODUCT_CLUSTER)
                {
                    values.push(t);
                }
            }
        }
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let code = SphericalCode {
        name: format!("{}_kissing_{apex}", parent.name),
        n: parent.n - 1,
        points,
        strength: 0,
        design_degrees: IndexSet::from_degrees([]),
        expected_inner_products: values,
        second_level_k: None,
        witnesses: Vec::new(),
        unsupported: Vec::new(),
    };
    code.validate()?;
    Ok(code)
}

/// Catalog lookup. Parametric names: `ngon(N)`, `simplex(n)`,
/// `cross_polytope(n)`.
pub fn build_code(name: &str) -> Result<SphericalCode> {
    let code = catalog::build(name)?;
    code.validate()?;
    Ok(code)
}

/// Stable catalog names (parametric entries listed with the instances the
/// table commands use).
pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "ngon(6)",
        "ngon(7)",
        "simplex(4)",
        "cross_polytope(4)",
        "cube",
        "icosahedron",
        "dodecahedron",
        "c_5_16_3",
        "c_6_27_4",
        "c_7_56_5",
        "e8_240",
        "c_21_112_3",
        "c_21_162_3",
        "c_22_100_3",
        "c_22_275_4",
        "c_22_891_5",
        "c_23_552_5",
        "c_23_4600_7",
        "leech_196560",
        "cell_600",
    ]
}
