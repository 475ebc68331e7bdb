//! The quantum dilogarithm Φ_γ: value checks and the identity suite.
//!
//! ```text
//! cargo run --example quantum_identities
//! ```

use knotvol::qdilog::{inversion_rhs, phi, PhiParams, QuadratureSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() {
    let gamma = 0.5;
    let params = PhiParams::new(gamma).unwrap();
    let quad = QuadratureSpec::for_gamma(gamma);

    let at_zero = phi(params, &quad, Complex64::new(0.0, 0.0)).unwrap();
    let expected = (Complex64::i() * (PI * PI + gamma * gamma) / (24.0 * gamma)).exp();
    println!("Phi_0.5(0)             = {at_zero}");
    println!("exp(i(pi^2+g^2)/24g)   = {expected}");

    let x = Complex64::new(0.9, 0.0);
    let inv = phi(params, &quad, x).unwrap() * phi(params, &quad, -x).unwrap();
    println!("\ninversion at x = 0.9:");
    println!("  Phi(x)Phi(-x)        = {inv}");
    println!("  closed form          = {}", inversion_rhs(gamma, x));

    println!("\nidentity suite over the (gamma, x) grid:");
    for c in knotvol::checks::quantum_suite().expect("suite evaluates") {
        println!(
            "  {:<36} max residual {:>12.3e}   {}",
            c.name,
            c.max_residual,
            if c.passes(1e-8) {
                "ok (< 1e-8)"
            } else {
                "FAIL"
            }
        );
    }
}
