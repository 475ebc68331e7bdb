//! Command-line front end: `phi`, `check`, `volume` and `system`.
//!
//! Exit codes: 0 success, 1 failed identity check, 2 parse or domain error,
//! 3 no principal (geometric) solution found.
//!
//! Complex numbers are written `a+bi` with optional parts: `1.2`, `0.3i`,
//! `1+2i`, `-1.5-2i`. Defaults are printed by `--show-defaults` and can be
//! overridden by the environment variables `KNOTVOL_PANEL_TOL`,
//! `KNOTVOL_TAIL_TOL`, `KNOTVOL_NEWTON_TOL`, `KNOTVOL_STARTS` and
//! `KNOTVOL_SEED` (command-line flags win over the environment).

use crate::braid::{build_diagram, parse_braid};
use crate::checks::{classical_suite, quantum_suite, IdentityCheck};
use crate::glue::assemble;
use crate::qdilog::{phi_log, PhiParams, QuadratureSpec};
use crate::solve::{report, solve_all, SolverConfig};
use crate::ComplexValue;
use num_complex::Complex64;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_PRINCIPAL: i32 = 3;

const USAGE: &str = "\
knotvol — quantum dilogarithms and hyperbolic volumes from braid words

USAGE:
    knotvol phi --gamma G --point Z [--format text|json] [quadrature flags]
    knotvol check <classical|quantum|all> [--tol T] [--samples N] [--seed S]
    knotvol volume --braid \"1 -2 1 -2\" [--starts N] [--seed S] [--format F]
    knotvol system --braid \"1 -2 1 -2\"
    knotvol --show-defaults

QUADRATURE FLAGS (phi):
    --panel-tol T     adaptive panel error target
    --tail-tol T      discarded-tail bound
    --radius R        semicircle detour radius

SOLVER FLAGS (volume):
    --starts N        multistart count (split over both half-plane boxes)
    --seed S          start-sampling seed
    --newton-tol T    gradient convergence threshold

Complex syntax: a+bi with optional parts (\"1.2\", \"0.3i\", \"1+2i\").
Exit codes: 0 ok, 1 failed check, 2 parse/domain error, 3 no principal.
";

/// Parse the `a+bi` grammar.
pub fn parse_complex(text: &str) -> Result<ComplexValue, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    // Split before the last top-level sign that is not an exponent sign.
    let bytes = s.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
            break;
        }
    }
    let parse_imag = |tok: &str| -> Result<f64, String> {
        let body = tok.strip_suffix(['i', 'I']).ok_or("missing trailing i")?;
        match body {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => body
                .parse()
                .map_err(|_| format!("bad imaginary part `{tok}`")),
        }
    };
    if s.ends_with(['i', 'I']) {
        match split {
            Some(i) => {
                let re: f64 = s[..i]
                    .parse()
                    .map_err(|_| format!("bad real part `{}`", &s[..i]))?;
                Ok(Complex64::new(re, parse_imag(&s[i..])?))
            }
            None => Ok(Complex64::new(0.0, parse_imag(&s)?)),
        }
    } else {
        let re: f64 = s
            .parse()
            .map_err(|_| format!("bad complex literal `{s}`"))?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn env_f64(name: &str) -> Option<f64> {
    std::env::var(name).ok()?.parse().ok()
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.parse().ok()
}

/// Flag cursor over the argument list; rejects unknown flags.
struct Args {
    items: Vec<String>,
}

impl Args {
    fn take_value(&mut self, flag: &str) -> Result<Option<String>, String> {
        if let Some(pos) = self.items.iter().position(|a| a == flag) {
            if pos + 1 >= self.items.len() {
                return Err(format!("flag {flag} needs a value"));
            }
            let value = self.items.remove(pos + 1);
            self.items.remove(pos);
            Ok(Some(value))
        } else {
            Ok(None)
        }
    }

    fn take_f64(&mut self, flag: &str) -> Result<Option<f64>, String> {
        match self.take_value(flag)? {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| format!("flag {flag}: bad number `{v}`")),
            None => Ok(None),
        }
    }

    fn take_u64(&mut self, flag: &str) -> Result<Option<u64>, String> {
        match self.take_value(flag)? {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| format!("flag {flag}: bad integer `{v}`")),
            None => Ok(None),
        }
    }

    fn finish(&mut self) -> Result<(), String> {
        if let Some(stray) = self.items.first() {
            return Err(format!("unknown argument `{stray}`"));
        }
        Ok(())
    }
}

#[derive(PartialEq, Clone, Copy)]
enum Format {
    Text,
    Json,
}

fn take_format(args: &mut Args) -> Result<Format, String> {
    match args.take_value("--format")?.as_deref() {
        None | Some("text") => Ok(Format::Text),
        Some("json") => Ok(Format::Json),
        Some(other) => Err(format!("unknown format `{other}`")),
    }
}

/// Entry point; prints to the given writers and returns the exit code.
pub fn run_with<W: Write, E: Write>(argv: Vec<String>, out: &mut W, err: &mut E) -> i32 {
    match dispatch(argv, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

/// Entry point on stdout/stderr.
pub fn run(argv: Vec<String>) -> i32 {
    let (mut out, mut err) = (std::io::stdout(), std::io::stderr());
    run_with(argv, &mut out, &mut err)
}

fn dispatch<W: Write>(argv: Vec<String>, out: &mut W) -> Result<i32, String> {
    let mut argv = argv;
    if argv.first().map(String::as_str) == Some("--show-defaults") {
        show_defaults(out);
        return Ok(EXIT_OK);
    }
    if argv.is_empty() || argv[0] == "--help" || argv[0] == "-h" {
        let _ = write!(out, "{USAGE}");
        return Ok(if argv.is_empty() { EXIT_USAGE } else { EXIT_OK });
    }
    let command = argv.remove(0);
    let mut args = Args { items: argv };
    match command.as_str() {
        "phi" => cmd_phi(&mut args, out),
        "check" => cmd_check(&mut args, out),
        "volume" => cmd_volume(&mut args, out),
        "system" => cmd_system(&mut args, out),
        other => Err(format!("unknown command `{other}`; try --help")),
    }
}

fn show_defaults<W: Write>(out: &mut W) {
    let quad = QuadratureSpec::for_gamma(0.5);
    let solver = SolverConfig::default();
    let _ = writeln!(out, "defaults (env override in parentheses):");
    let _ = writeln!(
        out,
        "  quadrature.semicircle_radius  {}",
        quad.semicircle_radius
    );
    let _ = writeln!(
        out,
        "  quadrature.panel_tol          {}  (KNOTVOL_PANEL_TOL)",
        quad.panel_tol
    );
    let _ = writeln!(
        out,
        "  quadrature.tail_tol           {}  (KNOTVOL_TAIL_TOL)",
        quad.tail_tol
    );
    let _ = writeln!(out, "  check.samples                 100");
    let _ = writeln!(out, "  check.tol.classical           1e-11");
    let _ = writeln!(out, "  check.tol.quantum             1e-8");
    let _ = writeln!(
        out,
        "  solver.starts                 {}  (KNOTVOL_STARTS)",
        solver.starts
    );
    let _ = writeln!(
        out,
        "  solver.newton_tol             {}  (KNOTVOL_NEWTON_TOL)",
        solver.newton_tol
    );
    let _ = writeln!(out, "  solver.max_iters              {}", solver.max_iters);
    let _ = writeln!(out, "  solver.damping                {}", solver.damping);
    let _ = writeln!(
        out,
        "  solver.start_box              Re in [-2,2], Im in (0,pi) + mirror"
    );
    let _ = writeln!(out, "  solver.dedupe_tol             {}", solver.dedupe_tol);
    let _ = writeln!(
        out,
        "  solver.max_var_norm           {}",
        solver.max_var_norm
    );
    let _ = writeln!(
        out,
        "  solver.shape_floor            {}",
        solver.shape_floor
    );
    let _ = writeln!(out, "  seed                          7  (KNOTVOL_SEED)");
    let _ = writeln!(out, "  gamma grid (check quantum)    0.3, 0.8");
}

fn quadrature_from(args: &mut Args, gamma: f64) -> Result<QuadratureSpec, String> {
    let mut quad = QuadratureSpec::for_gamma(gamma);
    if let Some(v) = env_f64("KNOTVOL_PANEL_TOL") {
        quad.panel_tol = v;
    }
    if let Some(v) = env_f64("KNOTVOL_TAIL_TOL") {
        quad.tail_tol = v;
    }
    if let Some(v) = args.take_f64("--panel-tol")? {
        quad.panel_tol = v;
    }
    if let Some(v) = args.take_f64("--tail-tol")? {
        quad.tail_tol = v;
    }
    if let Some(v) = args.take_f64("--radius")? {
        quad.semicircle_radius = v;
    }
    Ok(quad)
}

fn cmd_phi<W: Write>(args: &mut Args, out: &mut W) -> Result<i32, String> {
    let gamma = args.take_f64("--gamma")?.ok_or("phi needs --gamma")?;
    let point = parse_complex(&args.take_value("--point")?.ok_or("phi needs --point")?)?;
    let format = take_format(args)?;
    let quad = quadrature_from(args, gamma)?;
    args.finish()?;

    let params = PhiParams::new(gamma).map_err(|e| e.to_string())?;
    match phi_log(params, &quad, point) {
        Ok(eval) => {
            let value = eval.log.exp();
            match format {
                Format::Json => {
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::json!({"re": value.re, "im": value.im, "err": eval.err})
                    );
                }
                Format::Text => {
                    let _ = writeln!(out, "Phi_{gamma}({point}) = {value}");
                    let _ = writeln!(out, "estimated log error: {:.3e}", eval.err);
                }
            }
            Ok(EXIT_OK)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn print_checks<W: Write>(
    out: &mut W,
    format: Format,
    entries: &[(&str, Vec<IdentityCheck>, f64)],
) -> i32 {
    let mut ok = true;
    match format {
        Format::Json => {
            let suites: Vec<_> = entries
                .iter()
                .map(|(suite, checks, tol)| {
                    serde_json::json!({
                        "suite": suite,
                        "tol": tol,
                        "checks": checks.iter().map(|c| {
                            ok &= c.passes(*tol);
                            serde_json::json!({
                                "name": c.name,
                                "max_residual": c.max_residual,
                                "samples": c.samples,
                                "pass": c.passes(*tol),
                            })
                        }).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let _ = writeln!(out, "{}", serde_json::json!({ "suites": suites }));
        }
        Format::Text => {
            for (suite, checks, tol) in entries {
                let _ = writeln!(out, "{suite} identities (tol {tol:.1e}):");
                for c in checks {
                    let pass = c.passes(*tol);
                    ok &= pass;
                    let _ = writeln!(
                        out,
                        "  {:<36} max residual {:>12.3e}  over {:>4} samples  {}",
                        c.name,
                        c.max_residual,
                        c.samples,
                        if pass { "ok" } else { "FAIL" }
                    );
                }
            }
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_check<W: Write>(args: &mut Args, out: &mut W) -> Result<i32, String> {
    let suite = if !args.items.is_empty() && !args.items[0].starts_with("--") {
        args.items.remove(0)
    } else {
        return Err("check needs a suite: classical, quantum or all".into());
    };
    let tol = args.take_f64("--tol")?;
    let samples = args.take_u64("--samples")?.unwrap_or(100) as usize;
    let seed = args.take_u64("--seed")?.unwrap_or(42);
    let format = take_format(args)?;
    args.finish()?;

    let mut entries = Vec::new();
    if suite == "classical" || suite == "all" {
        let checks = classical_suite(samples, seed).map_err(|e| e.to_string())?;
        entries.push(("classical", checks, tol.unwrap_or(1e-11)));
    }
    if suite == "quantum" || suite == "all" {
        let checks = quantum_suite().map_err(|e| e.to_string())?;
        entries.push(("quantum", checks, tol.unwrap_or(1e-8)));
    }
    if entries.is_empty() {
        return Err(format!("unknown suite `{suite}`"));
    }
    Ok(print_checks(out, format, &entries))
}

fn solver_from(args: &mut Args) -> Result<(SolverConfig, u64), String> {
    let mut cfg = SolverConfig::default();
    if let Some(v) = env_f64("KNOTVOL_NEWTON_TOL") {
        cfg.newton_tol = v;
    }
    if let Some(v) = env_u64("KNOTVOL_STARTS") {
        cfg.starts = v as usize;
    }
    if let Some(v) = args.take_u64("--starts")? {
        cfg.starts = v as usize;
    }
    if let Some(v) = args.take_f64("--newton-tol")? {
        cfg.newton_tol = v;
    }
    if let Some(v) = args.take_u64("--max-iters")? {
        cfg.max_iters = v as usize;
    }
    let seed = args
        .take_u64("--seed")?
        .or_else(|| env_u64("KNOTVOL_SEED"))
        .unwrap_or(7);
    cfg.validate().map_err(|e| e.to_string())?;
    Ok((cfg, seed))
}

fn cmd_volume<W: Write>(args: &mut Args, out: &mut W) -> Result<i32, String> {
    let braid = args.take_value("--braid")?.ok_or("volume needs --braid")?;
    let format = take_format(args)?;
    let (cfg, seed) = solver_from(args)?;
    args.finish()?;

    let word = parse_braid(&braid).map_err(|e| e.to_string())?;
    let system = assemble(&build_diagram(&word)).map_err(|e| e.to_string())?;
    let solutions = solve_all(&system, &cfg, seed);
    let rep = report(&system, &solutions);

    match format {
        Format::Json => {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string(&rep).expect("serializable")
            );
        }
        Format::Text => {
            let _ = writeln!(
                out,
                "braid {}  strands {}  writhe {}  free variables {}",
                rep.braid.as_deref().unwrap_or("-"),
                rep.n_strands,
                rep.writhe,
                rep.free_vars
            );
            if rep.solutions.is_empty() {
                let _ = writeln!(out, "no critical points converged");
            }
            for (i, s) in rep.solutions.iter().enumerate() {
                let marker = if Some(i) == rep.principal_index {
                    "*"
                } else {
                    " "
                };
                let _ = writeln!(
                    out,
                    "{marker} [{i:>2}] volume {:+.9}  bw {:+.9}  cs {:+.9} (branch-dependent)  {:?}  residual {:.1e}",
                    s.volume, s.volume_bw, s.cs_estimate, s.class, s.residual
                );
            }
            match rep.principal_index {
                Some(i) => {
                    let _ = writeln!(
                        out,
                        "principal volume {:+.9} (|volume - volume_bw| = {:.2e})",
                        rep.solutions[i].volume,
                        rep.volume_consistency.unwrap_or(f64::NAN)
                    );
                }
                None => {
                    let _ = writeln!(out, "no geometric solution (non-hyperbolic indication)");
                }
            }
        }
    }
    Ok(if rep.principal_index.is_some() {
        EXIT_OK
    } else {
        EXIT_NO_PRINCIPAL
    })
}

fn cmd_system<W: Write>(args: &mut Args, out: &mut W) -> Result<i32, String> {
    let braid = args.take_value("--braid")?.ok_or("system needs --braid")?;
    args.finish()?;
    let word = parse_braid(&braid).map_err(|e| e.to_string())?;
    let system = assemble(&build_diagram(&word)).map_err(|e| e.to_string())?;
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&system.to_json()).expect("serializable")
    );
    Ok(EXIT_OK)
}
