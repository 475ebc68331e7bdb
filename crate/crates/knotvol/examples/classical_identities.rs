//! Residual sweep over the classical dilogarithm identities.
//!
//! ```text
//! cargo run --example classical_identities
//! ```

fn main() {
    let checks = knotvol::checks::classical_suite(100, 42).expect("suite evaluates");
    println!("classical dilogarithm identities, 100 samples each:");
    for c in &checks {
        println!(
            "  {:<28} max residual {:>12.3e}   {}",
            c.name,
            c.max_residual,
            if c.passes(1e-11) {
                "ok (< 1e-11)"
            } else {
                "FAIL"
            }
        );
    }

    // A few point values.
    use knotvol::dilog::{bloch_wigner, clausen2, li2, rogers_l};
    use num_complex::Complex64;
    use std::f64::consts::PI;
    println!("\npoint values:");
    println!(
        "  Li2(1)        = {}",
        li2(Complex64::new(1.0, 0.0)).unwrap().re
    );
    println!("  pi^2/6        = {}", PI * PI / 6.0);
    println!(
        "  L(1/2)        = {}",
        rogers_l(Complex64::new(0.5, 0.0)).unwrap().re
    );
    println!("  pi^2/12       = {}", PI * PI / 12.0);
    println!("  Cl2(pi/3)     = {}", clausen2(PI / 3.0));
    println!(
        "  D(e^{{i pi/3}}) = {}",
        bloch_wigner(Complex64::from_polar(1.0, PI / 3.0)).unwrap()
    );
}
