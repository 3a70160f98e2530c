//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array` so the page can draw it
//! without any glue beyond `wasm-bindgen`.

use casual_stable::citation::{simulate_field, FieldSim};
use casual_stable::convergence::{convergence_curve, mean_matched_exponential};
use casual_stable::stats::histogram;
use casual_stable::{Error, ExtractOptions, GridSpec, LaplaceFamily, PgfFamily, Seed};
use wasm_bindgen::prelude::*;

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Probabilities of `0..=n_max` for a discrete stable family.
///
/// `family` is `"svh"`, `"ex1"` or `"ex2"`; `index` is α for `svh` and γ
/// otherwise. `kappa` and `m` apply to `ex1`, `b` to `ex2`.
#[wasm_bindgen]
pub fn pmf_curve(
    family: &str,
    lambda: f64,
    index: f64,
    kappa: f64,
    m: u32,
    b: f64,
    n_max: usize,
) -> Result<Vec<f64>, JsError> {
    let fam = match family {
        "svh" => PgfFamily::SvhStable { lambda, alpha: index },
        "ex1" => PgfFamily::Example1 { lambda, gamma: index, kappa, m },
        "ex2" => PgfFamily::Example2 { lambda, gamma: index, b },
        other => return Err(JsError::new(&format!("unknown family {other:?}"))),
    };
    if !(1..=2000).contains(&n_max) {
        return Err(JsError::new("n_max must lie in 1..=2000"));
    }
    let table = fam.pmf_with(&ExtractOptions::for_degree(n_max)).map_err(js)?;
    Ok(table.masses)
}

/// Relative frequencies of per-author citations `0..=k_max` in one simulated
/// field, followed by the share above `k_max`.
#[wasm_bindgen]
pub fn citation_histogram(lambda: f64, p: f64, q: f64, seed: u64, k_max: usize) -> Result<Vec<f64>, JsError> {
    if lambda > 1e6 {
        return Err(JsError::new("lambda above 1e6 is too slow for the browser"));
    }
    let summary = simulate_field(&FieldSim { lambda, p, q, seed: Seed::new(seed) }).map_err(js)?;
    let (mut freq, over) = histogram(&summary.per_author_citations, k_max);
    freq.push(over);
    Ok(freq)
}

/// Sup distance between the normalized exponential sum and the Gamma(b, γ)
/// target for `n = 1, 2, 4, ..., 2^(doublings-1)`.
#[wasm_bindgen]
pub fn convergence_distances(b: f64, gamma: f64, doublings: u32) -> Result<Vec<f64>, JsError> {
    if !(1..=20).contains(&doublings) {
        return Err(JsError::new("doublings must lie in 1..=20"));
    }
    let fam = LaplaceFamily::Gamma { b, shape: gamma };
    fam.validate().map_err(js)?;
    let h = mean_matched_exponential(&fam).map_err(js)?;
    let ns: Vec<u32> = (0..doublings).map(|k| 1 << k).collect();
    let curve = convergence_curve(h, &fam, 2.0, &ns, &GridSpec::log(1e-3, 1e3, 200)).map_err(js)?;
    Ok(curve.points.iter().map(|p| p.sup_distance).collect())
}
