//! Browser bindings for the interactive demo page: analyze a simplex, certify a cover
//! exactly, and sample the uncovered region. Each entry point takes and returns JSON
//! strings so the page needs no bindings beyond `JSON.parse`.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use simplex_cover::coverage::{
    a_coefficients, certify, monte_carlo_convergence, uncovered_samples, CertStatus,
};
use simplex_cover::io::{CoverFile, SimplexFile};
use simplex_cover::lattice::BarycentricCoords;

#[derive(Serialize)]
struct AnalyzeOut {
    dim: usize,
    edge_matrix: Vec<Vec<String>>,
    min_length: String,
    k: u32,
    a: Vec<String>,
    all_nonnegative: bool,
}

#[derive(Serialize)]
struct CertifyOut {
    covered: bool,
    branches_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<String>>,
    /// Witness projected to the demo plane, when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_xy: Option<[f64; 2]>,
}

#[derive(Serialize)]
struct SampleOut {
    samples: u64,
    uncovered: u64,
    rate: f64,
    stderr: f64,
    convergence: Vec<ConvergencePoint>,
    /// 2D projections of uncovered sample points (barycentric mapped onto a regular
    /// polygon whose corners are the simplex vertices).
    uncovered_xy: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct ConvergencePoint {
    samples: u64,
    uncovered: u64,
    rate: f64,
}

fn err_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

/// Barycentric coordinates mapped onto a regular (n+1)-gon in the unit disc.
fn project(lambda: &BarycentricCoords) -> [f64; 2] {
    let m = lambda.order();
    let mut x = 0.0;
    let mut y = 0.0;
    for (i, weight) in lambda.to_f64().into_iter().enumerate() {
        let angle = std::f64::consts::TAU * i as f64 / m as f64 - std::f64::consts::FRAC_PI_2;
        x += weight * angle.cos();
        y += weight * angle.sin();
    }
    [x, y]
}

/// Edge length matrix, l(P), and the A coefficients at modulus `k` (0 picks dim - 1).
#[wasm_bindgen]
pub fn analyze(simplex_json: &str, k: u32) -> String {
    let p = match SimplexFile::parse(simplex_json) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let lengths = p.edge_length_matrix();
    let m = lengths.order();
    let k = if k == 0 { (p.dim() - 1) as u32 } else { k };
    let (a, all_nonnegative) = match a_coefficients(&p, k) {
        Ok(a) => {
            let ok = a.all_nonnegative();
            (a.a.iter().map(|x| x.to_string()).collect(), ok)
        }
        Err(e) => return err_json(e),
    };
    let out = AnalyzeOut {
        dim: p.dim(),
        edge_matrix: (0..m)
            .map(|i| (0..m).map(|j| lengths.get(i, j).to_string()).collect())
            .collect(),
        min_length: lengths.min_length().to_string(),
        k,
        a,
        all_nonnegative,
    };
    serde_json::to_string(&out).unwrap_or_else(err_json)
}

/// Exact coverage certificate for a cover file against a simplex file.
#[wasm_bindgen]
pub fn certify_cover(simplex_json: &str, cover_json: &str) -> String {
    let p = match SimplexFile::parse(simplex_json) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let cover = match CoverFile::parse(cover_json, &p) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    let cert = match certify(&cover) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    let out = match &cert.status {
        CertStatus::Covered => CertifyOut {
            covered: true,
            branches_checked: cert.branches_checked,
            witness: None,
            witness_xy: None,
        },
        CertStatus::Witness { lambda, .. } => CertifyOut {
            covered: false,
            branches_checked: cert.branches_checked,
            witness: Some(lambda.as_slice().iter().map(|x| x.to_string()).collect()),
            witness_xy: Some(project(lambda)),
        },
    };
    serde_json::to_string(&out).unwrap_or_else(err_json)
}

/// Seeded Monte Carlo estimate of the uncovered volume fraction, with a convergence
/// trace and up to `max_points` projected uncovered sample points for plotting.
#[wasm_bindgen]
pub fn sample_uncovered(
    simplex_json: &str,
    cover_json: &str,
    samples: u32,
    seed: u32,
    max_points: u32,
) -> String {
    let p = match SimplexFile::parse(simplex_json) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let cover = match CoverFile::parse(cover_json, &p) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    let samples = samples as u64;
    let stride = (samples / 50).max(1);
    let runs = match monte_carlo_convergence(&cover, samples, seed as u64, stride) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let last = runs.last().copied();
    let points = match uncovered_samples(&cover, samples, seed as u64, max_points as usize) {
        Ok(pts) => pts,
        Err(e) => return err_json(e),
    };
    let out = SampleOut {
        samples,
        uncovered: last.map_or(0, |e| e.uncovered),
        rate: last.map_or(0.0, |e| e.rate),
        stderr: last.map_or(0.0, |e| e.stderr),
        convergence: runs
            .iter()
            .map(|e| ConvergencePoint {
                samples: e.samples,
                uncovered: e.uncovered,
                rate: e.rate,
            })
            .collect(),
        uncovered_xy: points.iter().map(|(_, l)| project(l)).collect(),
    };
    serde_json::to_string(&out).unwrap_or_else(err_json)
}

/// Bundled demo data (the 4-simplex with two edges of lattice length 5).
#[wasm_bindgen]
pub fn demo_simplex() -> String {
    simplex_cover::fixtures::LEN5_SIMPLEX_JSON.to_string()
}

#[wasm_bindgen]
pub fn demo_base_cover() -> String {
    simplex_cover::fixtures::LEN5_COVER_BASE_JSON.to_string()
}

#[wasm_bindgen]
pub fn demo_full_cover() -> String {
    simplex_cover::fixtures::LEN5_COVER_FULL_JSON.to_string()
}

#[wasm_bindgen]
pub fn demo_repaired_cover() -> String {
    simplex_cover::fixtures::LEN5_COVER_REPAIRED_JSON.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_reports_the_demo_matrix() {
        let out = analyze(&demo_simplex(), 3);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["min_length"], "3");
        assert_eq!(v["a"][0], "-2/3");
        assert_eq!(v["all_nonnegative"], false);
    }

    #[test]
    fn certify_distinguishes_the_bundled_covers() {
        let base: serde_json::Value =
            serde_json::from_str(&certify_cover(&demo_simplex(), &demo_base_cover())).unwrap();
        assert_eq!(base["covered"], false);
        assert!(base["witness"].is_array());
        // The historically reported cover still misses a sliver; the repaired one
        // certifies.
        let full: serde_json::Value =
            serde_json::from_str(&certify_cover(&demo_simplex(), &demo_full_cover())).unwrap();
        assert_eq!(full["covered"], false);
        let repaired: serde_json::Value =
            serde_json::from_str(&certify_cover(&demo_simplex(), &demo_repaired_cover())).unwrap();
        assert_eq!(repaired["covered"], true);
    }

    #[test]
    fn sampling_returns_convergence_and_points() {
        let out = sample_uncovered(&demo_simplex(), &demo_base_cover(), 5_000, 1, 40);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["samples"], 5_000);
        assert!(v["convergence"].as_array().unwrap().len() >= 2);
        assert!(!v["uncovered_xy"].as_array().unwrap().is_empty());
    }

    #[test]
    fn bad_input_yields_an_error_object() {
        let v: serde_json::Value = serde_json::from_str(&analyze("{", 0)).unwrap();
        assert!(v["error"].is_string());
    }
}
