//! The γ → 0 limit: 2iγ log Φ_γ(φ) approaches Li₂(−e^φ) at second order.
//!
//! ```text
//! cargo run --example phi_classical_limit
//! ```

use knotvol::dilog::li2;
use knotvol::qdilog::{phi_log, PhiParams, QuadratureSpec};
use num_complex::Complex64;

fn main() {
    let point = Complex64::new(0.7, 0.0);
    let target = li2(-point.exp()).unwrap();
    println!("phi = {point},  Li2(-e^phi) = {target}\n");
    println!(
        "{:>8} {:>24} {:>14}",
        "gamma", "2ig log Phi_g(phi)", "|error|"
    );
    let mut previous: Option<f64> = None;
    for gamma in [0.4, 0.2, 0.1, 0.05, 0.025] {
        let params = PhiParams::new(gamma).unwrap();
        let quad = QuadratureSpec::for_gamma(gamma);
        let log = phi_log(params, &quad, point).unwrap().log;
        let approx = 2.0 * Complex64::i() * gamma * log;
        let err = (approx - target).norm();
        let ratio = previous.map(|p| err / p);
        match ratio {
            Some(r) => println!(
                "{gamma:>8} {:>24.12} {err:>14.3e}   x{r:.3} of previous",
                approx.re
            ),
            None => println!("{gamma:>8} {:>24.12} {err:>14.3e}", approx.re),
        }
        previous = Some(err);
    }
    println!("\nhalving gamma divides the error by about four: O(gamma^2).");
}
