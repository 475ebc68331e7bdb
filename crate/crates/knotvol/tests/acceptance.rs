//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Criteria 1 and 2 (figure-eight volume and saddle via the braid-assembled
//! system) are implemented faithfully and are expected to fail: the
//! unsimplified crossing-diagram system carries its hyperbolic content only
//! at ideal-boundary degenerations (see the README, Known limitation). The informational
//! lines they print show the same solver machinery recovering the volume on
//! the reduced one-variable endpoint.

use knotvol::braid::{build_diagram, parse_braid, Crossing, Diagram};
use knotvol::checks::{classical_suite, quantum_suite};
use knotvol::cli;
use knotvol::dilog::{clausen2, li2};
use knotvol::glue::{assemble, figure_eight_reduced_system, pentagon_system, v_classical, Rat};
use knotvol::qdilog::{h_closed, h_closed_log, QuadratureSpec};
use knotvol::solve::{newton_polish, report, solve_all, SolverConfig};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::Instant;

fn criterion(n: u32, name: &str, pass: bool, detail: &str) -> bool {
    println!(
        "criterion {n:>2} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

struct Rng(u64);
impl Rng {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut x = self.0;
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
        x ^= x >> 31;
        (x >> 11) as f64 / (1u64 << 53) as f64
    }
    fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run_with(
        args.iter().map(|s| s.to_string()).collect(),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn criterion_1_figure_eight_volume() {
    let start = Instant::now();
    let word = parse_braid("1 -2 1 -2").unwrap();
    let sys = assemble(&build_diagram(&word)).unwrap();
    let cfg = SolverConfig {
        starts: 64,
        ..SolverConfig::default()
    };
    let sols = solve_all(&sys, &cfg, 7);
    let rep = report(&sys, &sols);
    let elapsed = start.elapsed().as_secs_f64();

    let oracle = 2.0 * clausen2(PI / 3.0);
    let principal_volume = rep.principal_index.map(|i| rep.solutions[i].volume);
    let pass = principal_volume
        .is_some_and(|v| (v - 2.02988).abs() < 1e-4 && (v - oracle).abs() < 1e-6)
        && elapsed < 5.0;

    // Same machinery on the reduced endpoint, for contrast.
    let reduced = solve_all(&figure_eight_reduced_system(), &SolverConfig::default(), 7);
    let reduced_rep = report(&figure_eight_reduced_system(), &reduced);
    let reduced_vol = reduced_rep
        .principal_index
        .map(|i| reduced_rep.solutions[i].volume);

    let detail = format!(
        "braid-system principal volume {:?} (target {oracle:.10}), {:.2}s; reduced endpoint gives {:?}",
        principal_volume, elapsed, reduced_vol
    );
    assert!(
        criterion(1, "figure-eight volume", pass, &detail),
        "the unsimplified braid-assembled system exposes no interior geometric \
         critical point; its hyperbolic content sits at ideal-boundary \
         degenerations (see the README, Known limitation). Reduced endpoint volume: {reduced_vol:?}"
    );
}

#[test]
fn criterion_2_figure_eight_saddle() {
    let word = parse_braid("1 -2 1 -2").unwrap();
    let sys = assemble(&build_diagram(&word)).unwrap();
    let cfg = SolverConfig {
        starts: 64,
        ..SolverConfig::default()
    };
    let sols = solve_all(&sys, &cfg, 7);
    let rep = report(&sys, &sols);

    // Faithful reading: the principal solution must carry a free variable
    // (traced through the eliminated-variable dump) satisfying the section-6
    // condition e^p + e^{−p} = 1.
    let saddle_residual = rep.principal_index.map(|i| {
        sols[i]
            .v
            .iter()
            .map(|p| (p.exp() + (-p).exp() - 1.0).norm())
            .fold(f64::INFINITY, f64::min)
    });
    let pass = saddle_residual.is_some_and(|r| r < 1e-10);

    // The reduced endpoint satisfies it to machine precision.
    let reduced_sys = figure_eight_reduced_system();
    let reduced = solve_all(&reduced_sys, &SolverConfig::default(), 7);
    let reduced_rep = report(&reduced_sys, &reduced);
    let reduced_residual = reduced_rep.principal_index.map(|i| {
        let p = reduced[i].v[0];
        (p.exp() + (-p).exp() - 1.0).norm()
    });

    let detail = format!(
        "braid-system residual {saddle_residual:?}; reduced endpoint residual {reduced_residual:?}"
    );
    assert!(
        criterion(2, "figure-eight saddle condition", pass, &detail),
        "no principal solution on the braid-assembled system (see decisions \
         ledger); the reduced endpoint satisfies |e^p + e^-p - 1| = {reduced_residual:?}"
    );
}

#[test]
fn criterion_3_quantum_identity_suite() {
    let start = Instant::now();
    let checks = quantum_suite().expect("suite evaluates");
    let elapsed = start.elapsed().as_secs_f64();
    let mut worst: f64 = 0.0;
    let mut stability: f64 = 0.0;
    for c in &checks {
        if c.name.contains("refinement") {
            stability = c.max_residual;
        } else {
            worst = worst.max(c.max_residual);
        }
    }
    let pass = worst < 1e-8 && stability < 1e-9 && elapsed < 30.0;
    let detail = format!(
        "max residual {worst:.3e} (< 1e-8), refinement stability {stability:.3e} (< 1e-9), {elapsed:.1}s"
    );
    assert!(criterion(3, "quantum identity suite", pass, &detail));
}

#[test]
fn criterion_4_classical_limit_order() {
    use knotvol::qdilog::{phi_log, PhiParams};
    let point = Complex64::new(0.7, 0.0);
    let target = li2(-point.exp()).unwrap();
    let err_at = |gamma: f64| {
        let params = PhiParams::new(gamma).unwrap();
        let quad = QuadratureSpec::for_gamma(gamma);
        let log = phi_log(params, &quad, point).unwrap().log;
        (2.0 * Complex64::i() * gamma * log - target).norm()
    };
    let ratio = err_at(0.05) / err_at(0.1);
    let pass = (0.15..=0.35).contains(&ratio);
    let detail = format!("E(0.05)/E(0.1) = {ratio:.4} in [0.15, 0.35]");
    assert!(criterion(4, "classical-limit order", pass, &detail));
}

#[test]
fn criterion_5_classical_identity_suite() {
    let start = Instant::now();
    let checks = classical_suite(100, 42).expect("suite evaluates");
    let elapsed = start.elapsed().as_secs_f64();
    let worst = checks.iter().map(|c| c.max_residual).fold(0.0f64, f64::max);
    let pass = worst < 1e-11 && elapsed < 5.0;
    let detail = format!("max residual {worst:.3e} (< 1e-11), 100 samples each, {elapsed:.2}s");
    assert!(criterion(5, "classical identity suite", pass, &detail));
}

#[test]
fn criterion_6_pentagon_saddle_reproduction() {
    let (p1, p2, p3, p2p, p3p) = (
        Rat::new(3, 10),
        Rat::new(-1, 5),
        Rat::new(2, 5),
        Rat::new(1, 2),
        Rat::new(-3, 10),
    );
    let f = |r: &Rat| Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0);
    let sys = pentagon_system(p1.clone(), p2.clone(), p3.clone(), p2p.clone(), p3p.clone());

    // Internal saddle from the closed-form root, polished by Newton.
    let t = (f(&p2).exp() + (f(&p2p) - f(&p3p)).exp() - (f(&p2p) - f(&p3)).exp())
        * (-f(&p2) - f(&p2p) + f(&p3p)).exp();
    let cfg = SolverConfig::default();
    let (z, _) = newton_polish(&sys, &[-t.ln()], &cfg).expect("pentagon saddle converges");
    let at_saddle = sys.value(&z).unwrap();
    let two_term = -v_classical(f(&p3p) - f(&p3), f(&p2)).unwrap()
        - v_classical(f(&p2p) - f(&p2) - f(&p3), f(&p1)).unwrap();
    let reproduction = (at_saddle - two_term).norm();

    // Exponentiated-gradient audit against the gluing condition
    // (1−e^{w−p₃})⁻¹ (1−e^{p₂−z}) (1−e^{w−p₃′}) = 1, w = p₂′ − z.
    let mut rng = Rng(31);
    let mut audit: f64 = 0.0;
    let one = Complex64::new(1.0, 0.0);
    for _ in 0..20 {
        let zc = Complex64::new(rng.in_range(-1.0, 1.0), rng.in_range(0.2, 2.2));
        let grad = sys.gradient(&[zc]).unwrap()[0];
        let w = f(&p2p) - zc;
        let condition = (one - (w - f(&p3)).exp()).inv()
            * (one - (f(&p2) - zc).exp())
            * (one - (w - f(&p3p)).exp());
        audit = audit.max(((-grad).exp() - condition).norm());
    }
    let saddle_condition = {
        let w = f(&p2p) - z[0];
        ((one - (w - f(&p3)).exp()).inv()
            * (one - (f(&p2) - z[0]).exp())
            * (one - (w - f(&p3p)).exp())
            - one)
            .norm()
    };

    let pass = reproduction < 1e-10 && audit < 1e-10 && saddle_condition < 1e-10;
    let detail = format!(
        "two-term reproduction {reproduction:.2e} (< 1e-10), gradient/gluing audit {audit:.2e}, condition at saddle {saddle_condition:.2e}"
    );
    assert!(criterion(6, "pentagon saddle reproduction", pass, &detail));
}

#[test]
fn criterion_7_h_symmetry() {
    let gamma = 0.45;
    let mut quad = QuadratureSpec::for_gamma(gamma);
    quad.panel_tol = 1e-13;
    let mut rng = Rng(1234);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 100 {
        // Strip-valid inputs: real parts in a moderate band, half the
        // samples with small imaginary parts.
        let im = if n % 2 == 0 { 0.0 } else { 0.1 };
        let a = Complex64::new(rng.in_range(-0.8, 0.8), rng.in_range(-im, im));
        let b = Complex64::new(rng.in_range(-0.8, 0.8), rng.in_range(-im, im));
        let c = Complex64::new(rng.in_range(-0.8, 0.8), rng.in_range(-im, im));
        let d = Complex64::new(rng.in_range(-0.8, 0.8), rng.in_range(-im, im));
        if (a - c).norm() < 0.05 {
            continue;
        }
        // Strip-valid by construction: discard draws whose shifted Φ
        // arguments land in the infeasible sliver at the strip boundary.
        let (Ok(lhs), Ok(rhs)) = (
            h_closed(gamma, &quad, a, b, c, d),
            h_closed(gamma, &quad, c, d, a, b),
        ) else {
            continue;
        };
        worst = worst.max((lhs - rhs).norm() / lhs.norm());
        n += 1;
    }
    let pass = worst < 1e-12;
    let detail = format!("max relative residual {worst:.3e} over {n} samples (< 1e-12)");
    assert!(criterion(7, "H symmetry", pass, &detail));
}

#[test]
fn criterion_8_h_asymptotics() {
    // Momenta ordered d < a < c < b keep every dilog argument off the cut;
    // a − c close to 0⁻ keeps the finite-γ log corrections single-signed
    // over the γ grid (see the README, Known limitation).
    let (a, b, c, d) = (
        Complex64::new(-0.25, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(-0.2, 0.0),
        Complex64::new(-25.0, 0.0),
    );
    let target = li2((a - b).exp()).unwrap() + li2((d - a).exp()).unwrap()
        - li2((c - b).exp()).unwrap()
        - li2((d - c).exp()).unwrap()
        + c * (-a + b - c + d);
    let rel_err = |gamma: f64| {
        let quad = QuadratureSpec::for_gamma(gamma);
        let log = h_closed_log(gamma, &quad, a, b, c, d).unwrap();
        (2.0 * Complex64::i() * gamma * log - target).norm() / target.norm()
    };
    let (e8, e4, e2) = (rel_err(0.08), rel_err(0.04), rel_err(0.02));
    let pass = e2 < 5e-2 && e8 > e4 && e4 > e2;
    let detail = format!(
        "relative errors {e8:.4} > {e4:.4} > {e2:.4}, final < 5e-2: {}",
        e2 < 5e-2
    );
    assert!(criterion(8, "asymptotic H", pass, &detail));
}

#[test]
fn criterion_9_non_hyperbolic_detection() {
    let (code_trefoil, _) = run_cli(&[
        "volume", "--braid", "1 1 1", "--starts", "256", "--seed", "3",
    ]);
    let (code_id, out_id) = run_cli(&["volume", "--braid", "strands=1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(out_id.trim()).unwrap();
    let id_volume = v["solutions"][0]["volume"].as_f64().unwrap();
    let pass = code_trefoil == cli::EXIT_NO_PRINCIPAL
        && code_id == cli::EXIT_NO_PRINCIPAL
        && id_volume == 0.0;
    let detail = format!(
        "trefoil exit {code_trefoil} (want 3, no geometric over 256 starts); identity tangle volume {id_volume} (want exactly 0)"
    );
    assert!(criterion(9, "non-hyperbolic detection", pass, &detail));
}

#[test]
fn criterion_10_property_suites() {
    let start = Instant::now();
    let sys = assemble(&build_diagram(&parse_braid("1 -2 1 -2").unwrap())).unwrap();
    let k = sys.n_free();
    let mut rng = Rng(99);
    let point = |rng: &mut Rng| -> Vec<Complex64> {
        (0..k)
            .map(|_| Complex64::new(rng.in_range(-0.8, 0.8), rng.in_range(0.4, 2.4)))
            .collect()
    };

    // Gradient and Hessian against central finite differences.
    let mut grad_fd: f64 = 0.0;
    let mut hess_fd: f64 = 0.0;
    let h = 1e-5;
    for _ in 0..5 {
        let v = point(&mut rng);
        let grad = sys.gradient(&v).unwrap();
        let hess = sys.hessian(&v).unwrap();
        for j in 0..k {
            let mut vp = v.clone();
            let mut vm = v.clone();
            vp[j] += Complex64::new(h, 0.0);
            vm[j] -= Complex64::new(h, 0.0);
            let fd = (sys.value(&vp).unwrap() - sys.value(&vm).unwrap()) / (2.0 * h);
            grad_fd = grad_fd.max((grad[j] - fd).norm());
            let (gp, gm) = (sys.gradient(&vp).unwrap(), sys.gradient(&vm).unwrap());
            for kk in 0..k {
                let fd = (gp[kk] - gm[kk]) / (2.0 * h);
                hess_fd = hess_fd.max((hess[j][kk] - fd).norm());
            }
        }
    }

    // Constraint exactness at random points.
    let mut constraint: f64 = 0.0;
    for _ in 0..20 {
        constraint = constraint.max(sys.constraint_residual(&point(&mut rng)));
    }

    // Dihedral product a1·a2·a3·a4 = 1 wherever defined (plus a fully
    // independent crossing).
    let free8 = assemble(&Diagram {
        n_strands: 2,
        n_segments: 8,
        crossings: vec![Crossing {
            sign: 1,
            slots: [0, 1, 2, 3, 4, 5, 6, 7],
        }],
        open_segments: vec![],
        pinned_segments: vec![],
        source: None,
    })
    .unwrap();
    let mut dihedral: f64 = 0.0;
    for _ in 0..20 {
        let v: Vec<Complex64> = (0..free8.n_free())
            .map(|_| Complex64::new(rng.in_range(-0.8, 0.8), rng.in_range(0.4, 2.4)))
            .collect();
        for d in free8.dihedral_angles(&v).iter().flatten() {
            dihedral = dihedral.max((d.product() - Complex64::new(1.0, 0.0)).norm());
        }
        let v = point(&mut rng);
        for d in sys.dihedral_angles(&v).iter().flatten() {
            dihedral = dihedral.max((d.product() - Complex64::new(1.0, 0.0)).norm());
        }
    }

    // Conjugate-pair symmetry, constructively.
    let cfg = SolverConfig {
        starts: 96,
        max_var_norm: 80.0,
        shape_floor: 1e-14,
        ..SolverConfig::default()
    };
    let sols = solve_all(&sys, &cfg, 7);
    let mut pairing: f64 = 0.0;
    let mut paired = 0;
    for s in sols.iter().take(6) {
        let start_v: Vec<Complex64> = s.v.iter().map(|c| c.conj()).collect();
        if let Some((w, _)) = newton_polish(&sys, &start_v, &cfg) {
            let drift = w
                .iter()
                .zip(&s.v)
                .map(|(a, b)| (a - b.conj()).norm())
                .fold(0.0f64, f64::max);
            pairing = pairing.max(drift);
            paired += 1;
        }
    }

    // Determinism under a fixed seed.
    let again = solve_all(&sys, &cfg, 7);
    let deterministic = sols.len() == again.len()
        && sols
            .iter()
            .zip(&again)
            .all(|(a, b)| a.v == b.v && a.critical_value == b.critical_value);

    let elapsed = start.elapsed().as_secs_f64();
    let pass = grad_fd < 1e-6
        && hess_fd < 1e-5
        && constraint < 1e-12
        && dihedral < 1e-8
        && paired > 0
        && pairing < 1e-8
        && deterministic
        && elapsed < 120.0;
    let detail = format!(
        "grad-FD {grad_fd:.2e} (<1e-6), hess-FD {hess_fd:.2e} (<1e-5), constraints {constraint:.2e}, \
         dihedral {dihedral:.2e}, conjugate drift {pairing:.2e} over {paired} pairs, deterministic {deterministic}, {elapsed:.1}s"
    );
    assert!(criterion(10, "property suites", pass, &detail));
}
