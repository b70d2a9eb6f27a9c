//! Shared report schema for the CLI and the browser demo.

use serde::Serialize;

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "sharpcode/1";

/// One row of a table command: the recomputed rule and its bound under a
/// kernel, with attainment status.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub code: String,
    pub n: usize,
    pub cardinality: usize,
    pub strength: usize,
    pub rule_kind: String,
    pub nodes: Vec<f64>,
    pub multiplicities: Vec<f64>,
    pub value: f64,
    pub status: RowStatus,
    /// Human-readable sum mirroring the table layout.
    pub expression: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Attained,
    NotAttainedAtThisLevel { reason: String },
    EnergyBound,
    Failed { reason: String },
}

/// Text rendering of N * sum w_i h(alpha_i) as coefficient-times-kernel
/// terms, for eyeball comparison.
pub fn expression_string(nodes: &[f64], multiplicities: &[f64]) -> String {
    let terms: Vec<String> = nodes
        .iter()
        .zip(multiplicities)
        .map(|(x, m)| {
            let coeff = if (m - m.round()).abs() < 1e-6 {
                format!("{}", m.round() as i64)
            } else {
                format!("{m:.3}")
            };
            format!("{coeff}*h({x:.6})")
        })
        .collect();
    terms.join(" + ")
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub schema: &'static str,
    pub table: u8,
    pub potential: String,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleReport<'a> {
    pub schema: &'static str,
    #[serde(flatten)]
    pub rule: &'a crate::quadrature::QuadratureRule,
    pub exactness_residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_renders_integers_and_reals() {
        let s = expression_string(&[-1.0, 0.5], &[1.0, 56.0000000001]);
        assert_eq!(s, "1*h(-1.000000) + 56*h(0.500000)");
        let s = expression_string(&[0.0], &[3.3333333]);
        assert!(s.starts_with("3.333*h"));
    }
}
