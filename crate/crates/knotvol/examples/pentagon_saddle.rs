//! The pentagon composition as a saddle system: solving the three-term side
//! at its internal saddle reproduces the two-term side.
//!
//! ```text
//! cargo run --example pentagon_saddle
//! ```

use knotvol::glue::{pentagon_system, v_classical, Rat};
use knotvol::solve::{newton_polish, SolverConfig};
use num_complex::Complex64;

fn main() {
    let (p1, p2, p3, p2p, p3p) = (
        Rat::new(3, 10),
        Rat::new(-1, 5),
        Rat::new(2, 5),
        Rat::new(1, 2),
        Rat::new(-3, 10),
    );
    let f = |r: &Rat| *r.numer() as f64 / *r.denom() as f64;
    let sys = pentagon_system(p1.clone(), p2.clone(), p3.clone(), p2p.clone(), p3p.clone());

    // Two-term side of the pentagon: −V(p₃′−p₃, p₂) − V(p₂′−p₂−p₃, p₁).
    let c = |r: &Rat| Complex64::new(f(r), 0.0);
    let two_term = -v_classical(c(&p3p) - c(&p3), c(&p2)).unwrap()
        - v_classical(c(&p2p) - c(&p2) - c(&p3), c(&p1)).unwrap();

    // The internal saddle in closed form: eliminating z from the
    // exponentiated stationarity condition leaves one nondegenerate root
    // e^{−z} = (e^{p₂} + e^{p₂′−p₃′} − e^{p₂′−p₃}) e^{−p₂−p₂′+p₃′}.
    let t = (c(&p2).exp() + (c(&p2p) - c(&p3p)).exp() - (c(&p2p) - c(&p3)).exp())
        * (-c(&p2) - c(&p2p) + c(&p3p)).exp();
    let z0 = -t.ln();
    let cfg = SolverConfig::default();
    let (z, _) = newton_polish(&sys, &[z0], &cfg).expect("saddle");
    let at_saddle = sys.value(&z).unwrap();
    println!("three-term side at its saddle  = {at_saddle}");
    println!("two-term side                  = {two_term}");
    println!(
        "difference                     = {:.3e}",
        (at_saddle - two_term).norm()
    );

    // Exponentiated gradient = the gluing condition of the two adjacent
    // tetrahedra: (1−e^{w−p₃})⁻¹ (1−e^{p₂−z}) (1−e^{w−p₃′}) with w = p₂′−z.
    let zc = Complex64::new(-0.3, 0.8);
    let grad = sys.gradient(&[zc]).unwrap()[0];
    let w = c(&p2p) - zc;
    let one = Complex64::new(1.0, 0.0);
    let condition = (one - (w - c(&p3)).exp()).inv()
        * (one - (c(&p2) - zc).exp())
        * (one - (w - c(&p3p)).exp());
    println!("\nat a random z:");
    println!("  exp(-dU/dz)     = {}", (-grad).exp());
    println!("  gluing product  = {condition}");
}
