//! Browser bindings for the interactive demo page (www/index.html).
//!
//! Three operations, each returning a JSON string the page plots on a
//! canvas: quadrature rule construction, the dominated-interpolant curves
//! behind a second-level bound, and a full bound verification for the
//! small catalog codes. The logic lives in [`ops`]; the thin
//! `#[wasm_bindgen]` layer only exists on the wasm32 target.

pub mod ops {
    use serde::Serialize;
    use sharpcode::codes::build_code;
    use sharpcode::error::Error;
    use sharpcode::potentials::{second_level_interpolant, Potential};
    use sharpcode::quadrature::{self, verify_exactness};
    use sharpcode::verify::{attainment_check, CheckConfig, Level};

    fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
        serde_json::to_string(value).map_err(|e| e.to_string())
    }

    #[derive(Serialize)]
    struct RuleJson {
        kind: String,
        n: usize,
        nodes: Vec<f64>,
        weights: Vec<f64>,
        exact_on: Vec<usize>,
        residual: f64,
    }

    /// Construct a rule and return nodes/weights plus the certified
    /// residual. `tk` is tau for pulb_i/pulb_ii/levenshtein and k for
    /// gauss/skip1add2; `cardinality` matters for levenshtein only.
    pub fn quadrature_rule(
        kind: &str,
        n: usize,
        tk: usize,
        cardinality: f64,
    ) -> Result<String, String> {
        let rule = match kind {
            "gauss" => quadrature::gauss(n, tk),
            "pulb_i" => quadrature::pulb_case_i(n, tk),
            "pulb_ii" => quadrature::pulb_case_ii(n, tk),
            "levenshtein" => quadrature::levenshtein_1_over_n(n, cardinality, tk),
            "skip1add2" => quadrature::skip1add2(n, tk),
            other => Err(Error::InvalidArgument(format!("unknown kind '{other}'"))),
        }
        .map_err(|e| e.to_string())?;
        let residual = verify_exactness(&rule, false);
        to_json(&RuleJson {
            kind: rule.kind.as_str().to_string(),
            n: rule.n,
            nodes: rule.nodes.clone(),
            weights: rule.weights.clone(),
            exact_on: rule.exact_on.to_vec(),
            residual,
        })
    }

    #[derive(Serialize)]
    struct CurvesJson {
        ts: Vec<f64>,
        kernel: Vec<f64>,
        interpolant: Vec<f64>,
        nodes: Vec<f64>,
        node_values: Vec<f64>,
        bound_per_point: f64,
    }

    /// Sample the kernel and its annihilated second-level interpolant over
    /// [-1, 1]: the curve pair behind the Skip 1-Add 2 bound for (n, k).
    pub fn interpolant_curves(
        n: usize,
        k: usize,
        h_spec: &str,
        samples: usize,
    ) -> Result<String, String> {
        let h = Potential::parse(h_spec).map_err(|e| e.to_string())?;
        let rule = quadrature::skip1add2(n, k).map_err(|e| e.to_string())?;
        let g = second_level_interpolant(n, k, &h).map_err(|e| e.to_string())?;
        let samples = samples.clamp(16, 4096);
        let hi = if h.singular_at_one() { 0.999 } else { 1.0 };
        let ts: Vec<f64> = (0..samples)
            .map(|i| -1.0 + (hi + 1.0) * i as f64 / (samples - 1) as f64)
            .collect();
        let kernel: Vec<f64> = ts.iter().map(|&t| h.value(t)).collect();
        let interpolant: Vec<f64> = ts.iter().map(|&t| g.eval(t)).collect();
        let node_values: Vec<f64> = rule.nodes.iter().map(|&t| h.value(t)).collect();
        let bound_per_point = rule.apply(|t| h.value(t));
        to_json(&CurvesJson {
            ts,
            kernel,
            interpolant,
            nodes: rule.nodes.clone(),
            node_values,
            bound_per_point,
        })
    }

    /// Codes small enough to rebuild interactively in the page.
    pub fn demo_codes() -> String {
        [
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
            "cell_600",
        ]
        .join(",")
    }

    #[derive(Serialize)]
    struct RefusalJson {
        refused: bool,
        code: String,
        level: String,
        reason: String,
    }

    /// Run a bound verification at the catalog witness and return the
    /// report (or an explicit refusal).
    pub fn verify_code(code: &str, level: &str, h_spec: &str) -> Result<String, String> {
        if !demo_codes().split(',').any(|c| c == code) {
            return Err("code not in the in-browser subset".into());
        }
        let code = build_code(code).map_err(|e| e.to_string())?;
        let level = Level::parse(level).map_err(|e| e.to_string())?;
        let h = Potential::parse(h_spec).map_err(|e| e.to_string())?;
        match attainment_check(&code, level, &h, &CheckConfig::default()) {
            Ok(report) => to_json(&report),
            Err(Error::LevelNotAttained {
                code,
                level,
                reason,
            }) => to_json(&RefusalJson {
                refused: true,
                code,
                level,
                reason,
            }),
            Err(e) => Err(e.to_string()),
        }
    }
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    fn lift(r: Result<String, String>) -> Result<String, JsValue> {
        r.map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn quadrature_rule(
        kind: &str,
        n: usize,
        tk: usize,
        cardinality: f64,
    ) -> Result<String, JsValue> {
        lift(super::ops::quadrature_rule(kind, n, tk, cardinality))
    }

    #[wasm_bindgen]
    pub fn interpolant_curves(
        n: usize,
        k: usize,
        h_spec: &str,
        samples: usize,
    ) -> Result<String, JsValue> {
        lift(super::ops::interpolant_curves(n, k, h_spec, samples))
    }

    #[wasm_bindgen]
    pub fn demo_codes() -> String {
        super::ops::demo_codes()
    }

    #[wasm_bindgen]
    pub fn verify_code(code: &str, level: &str, h_spec: &str) -> Result<String, JsValue> {
        lift(super::ops::verify_code(code, level, h_spec))
    }
}
