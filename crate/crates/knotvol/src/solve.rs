//! Critical points of the saddle potential and the volume report.
//!
//! A damped Newton iteration on ∇V = 0 runs from a deterministic multistart
//! cloud, converged points are deduplicated and classified, and the report
//! singles out the geometric solution of largest volume. The imaginary part
//! of the critical value is the hyperbolic volume estimate; the real part is
//! a Chern–Simons estimate up to branch jumps of the dilogarithms, and is
//! flagged as such.

use crate::glue::{SaddleSystem, Shape};
use crate::ComplexValue;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Multistart Newton configuration.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Number of starting points (split between the Im > 0 and Im < 0 boxes).
    pub starts: usize,
    /// Convergence threshold on ‖∇V‖∞.
    pub newton_tol: f64,
    pub max_iters: usize,
    /// Backtracking shrink factor in (0, 1).
    pub damping: f64,
    /// Real part of the start box.
    pub start_re: (f64, f64),
    /// Imaginary part of the first-pass start box; the second pass mirrors it.
    pub start_im: (f64, f64),
    /// Solutions closer than this in ‖·‖∞ are identified.
    pub dedupe_tol: f64,
    /// Reject converged points with any |vⱼ| above this bound (ideal-point
    /// runaways satisfy the equations only asymptotically).
    pub max_var_norm: f64,
    /// Reject converged points whose tetrahedron moduli leave
    /// [shape_floor, 1/shape_floor]: such shapes sit at the ideal boundary.
    pub shape_floor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: 64,
            newton_tol: 1e-11,
            max_iters: 60,
            damping: 0.5,
            start_re: (-2.0, 2.0),
            start_im: (0.0, PI),
            dedupe_tol: 1e-6,
            max_var_norm: 40.0,
            shape_floor: 1e-8,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.starts == 0 || self.max_iters == 0 {
            return Err(crate::Error::Config(
                "starts and max_iters must be positive".into(),
            ));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(crate::Error::Config(format!(
                "damping must be in (0,1), got {}",
                self.damping
            )));
        }
        if !(self.newton_tol > 0.0 && self.dedupe_tol > self.newton_tol) {
            return Err(crate::Error::Config(
                "need dedupe_tol > newton_tol > 0".into(),
            ));
        }
        if !(self.max_var_norm > 0.0 && self.shape_floor > 0.0 && self.shape_floor < 1.0) {
            return Err(crate::Error::Config(
                "need max_var_norm > 0 and shape_floor in (0,1)".into(),
            ));
        }
        Ok(())
    }
}

/// Classification of a critical point by its tetrahedron shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionClass {
    /// Every signed shape volume nonnegative (up to tolerance) and total
    /// volume positive.
    Geometric,
    /// All shape volumes vanish.
    Flat,
    Other,
}

/// Tolerance for treating a signed shape volume as zero.
pub const SHAPE_TOL: f64 = 1e-8;
/// Tolerance for treating a total volume as zero.
pub const VOLUME_TOL: f64 = 1e-8;

/// A converged critical point of the potential.
#[derive(Debug, Clone)]
pub struct SaddleSolution {
    /// Free-variable values.
    pub v: Vec<ComplexValue>,
    /// V at the critical point.
    pub critical_value: ComplexValue,
    pub shapes: Vec<Shape>,
    /// Im(critical value): the volume estimate.
    pub volume: f64,
    /// Independent volume route: Σ sᵢ·D(zᵢ) over the shapes.
    pub volume_bw: f64,
    /// −Re(critical value); meaningful only modulo dilogarithm branch jumps.
    pub cs_estimate: f64,
    pub class: SolutionClass,
    /// ‖∇V‖∞ at the solution.
    pub residual: f64,
}

impl SaddleSolution {
    pub fn geometric(&self) -> bool {
        self.class == SolutionClass::Geometric
    }
}

/// Classify a solution from its signed shape volumes and total volume.
pub fn classify(shapes: &[Shape], volume: f64) -> SolutionClass {
    let all_zero = shapes.iter().all(|s| s.signed_volume.abs() <= SHAPE_TOL);
    if all_zero && volume.abs() <= VOLUME_TOL {
        return SolutionClass::Flat;
    }
    let nonnegative = shapes.iter().all(|s| s.signed_volume >= -SHAPE_TOL);
    if nonnegative && volume > VOLUME_TOL {
        SolutionClass::Geometric
    } else {
        SolutionClass::Other
    }
}

/// SplitMix64: deterministic start sampling for a given seed.
struct Rng(u64);

impl Rng {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut x = self.0;
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
        x ^ (x >> 31)
    }
    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Solve the complex linear system A·x = b by partial-pivot LU.
fn solve_linear(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let (pivot, pnorm) = (col..n)
            .map(|r| (r, a[r][col].norm_sqr()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if pnorm < 1e-28 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for c in col..n {
                let sub = f * a[col][c];
                a[r][c] -= sub;
            }
            let sub = f * b[col];
            b[r] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    x.iter()
        .all(|v| v.re.is_finite() && v.im.is_finite())
        .then_some(x)
}

fn grad_norm(g: &[Complex64]) -> f64 {
    g.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// One damped Newton run; returns the converged point and the residual
/// history, or None when the start does not converge.
pub fn newton_polish(
    sys: &SaddleSystem,
    start: &[ComplexValue],
    cfg: &SolverConfig,
) -> Option<(Vec<ComplexValue>, Vec<f64>)> {
    let mut v = start.to_vec();
    let mut history = Vec::with_capacity(cfg.max_iters);
    let mut grad = sys.gradient(&v).ok()?;
    let mut res = grad_norm(&grad);
    history.push(res);
    for _ in 0..cfg.max_iters {
        if res < cfg.newton_tol {
            return Some((v, history));
        }
        let hess = sys.hessian(&v).ok()?;
        let step = solve_linear(hess, grad.iter().map(|g| -g).collect())?;
        // Backtracking on ‖∇V‖∞.
        let mut lambda = 1.0;
        loop {
            let trial: Vec<Complex64> = v.iter().zip(&step).map(|(x, d)| x + lambda * d).collect();
            if let Ok(g) = sys.gradient(&trial) {
                let r = grad_norm(&g);
                if r < res * (1.0 - 0.25 * lambda) || r < cfg.newton_tol {
                    v = trial;
                    grad = g;
                    res = r;
                    history.push(res);
                    break;
                }
            }
            lambda *= cfg.damping;
            if lambda < 1e-6 {
                return None;
            }
        }
    }
    (res < cfg.newton_tol).then_some((v, history))
}

fn build_solution(
    sys: &SaddleSystem,
    v: Vec<ComplexValue>,
    residual: f64,
) -> Option<SaddleSolution> {
    let critical_value = sys.value(&v).ok()?;
    let shapes = sys.shapes(&v).ok()?;
    let volume = critical_value.im;
    let volume_bw = shapes.iter().map(|s| s.signed_volume).sum();
    let class = classify(&shapes, volume);
    Some(SaddleSolution {
        cs_estimate: -critical_value.re,
        v,
        critical_value,
        shapes,
        volume,
        volume_bw,
        class,
        residual,
    })
}

/// Find critical points of the assembled potential by multistart damped
/// Newton. Deterministic for a fixed seed; non-convergent starts are
/// discarded, so an empty list is a valid outcome.
pub fn solve_all(sys: &SaddleSystem, cfg: &SolverConfig, seed: u64) -> Vec<SaddleSolution> {
    let k = sys.n_free();
    if k == 0 {
        // The potential is a constant; the empty point is the one solution.
        return build_solution(sys, Vec::new(), 0.0).into_iter().collect();
    }
    let gauge = sys.gauge_directions();
    let mut rng = Rng(seed);
    let mut solutions: Vec<SaddleSolution> = Vec::new();
    for attempt in 0..cfg.starts {
        let upper = attempt < cfg.starts.div_ceil(2);
        let start: Vec<Complex64> = (0..k)
            .map(|_| {
                let re = cfg.start_re.0 + (cfg.start_re.1 - cfg.start_re.0) * rng.next_f64();
                let im = cfg.start_im.0 + (cfg.start_im.1 - cfg.start_im.0) * rng.next_f64();
                Complex64::new(re, if upper { im } else { -im })
            })
            .collect();
        let Some((v, history)) = newton_polish(sys, &start, cfg) else {
            continue;
        };
        if v.iter().any(|c| c.norm() > cfg.max_var_norm) {
            continue;
        }
        let residual = *history.last().expect("nonempty history");
        let duplicate = solutions
            .iter()
            .any(|s| same_modulo_gauge(&s.v, &v, &gauge, cfg.dedupe_tol));
        if duplicate {
            continue;
        }
        if let Some(sol) = build_solution(sys, v, residual) {
            let interior = sol.shapes.iter().all(|s| {
                let m = s.z.norm();
                m > cfg.shape_floor && m < 1.0 / cfg.shape_floor
            });
            if interior {
                solutions.push(sol);
            }
        }
    }
    // Order-normalize: by volume descending, then lexicographically.
    solutions.sort_by(|a, b| {
        b.volume
            .total_cmp(&a.volume)
            .then_with(|| lex_cmp(&a.v, &b.v))
    });
    solutions
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Distance test after projecting out any gauge translation directions.
fn same_modulo_gauge(a: &[Complex64], b: &[Complex64], gauge: &[Vec<f64>], tol: f64) -> bool {
    let mut diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    for dir in gauge {
        let norm2: f64 = dir.iter().map(|d| d * d).sum();
        if norm2 == 0.0 {
            continue;
        }
        let proj: Complex64 = diff.iter().zip(dir).map(|(d, g)| d * *g).sum::<Complex64>() / norm2;
        for (d, g) in diff.iter_mut().zip(dir) {
            *d -= proj * *g;
        }
    }
    diff.iter().map(|d| d.norm()).fold(0.0, f64::max) < tol
}

/// One solution as reported: plain numbers, JSON-ready.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionReport {
    pub v: Vec<(f64, f64)>,
    pub critical_value: (f64, f64),
    pub volume: f64,
    pub volume_bw: f64,
    /// Branch-dependent: reported modulo dilogarithm branch jumps.
    pub cs_estimate: f64,
    pub class: SolutionClass,
    pub geometric: bool,
    pub residual: f64,
}

/// The end-to-end volume report for one braid word.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub braid: Option<String>,
    pub n_strands: usize,
    pub writhe: i64,
    pub free_vars: usize,
    pub solutions: Vec<SolutionReport>,
    /// Index of the principal solution: the geometric solution of maximal
    /// volume, when any exists. The choice of a principal among several
    /// critical points is a heuristic, so every solution stays listed.
    pub principal_index: Option<usize>,
    /// |volume − volume_bw| of the principal solution.
    pub volume_consistency: Option<f64>,
    pub cs_branch_dependent: bool,
}

/// Assemble the report: all solutions listed, the max-volume geometric one
/// marked principal.
pub fn report(sys: &SaddleSystem, solutions: &[SaddleSolution]) -> InvariantReport {
    let principal_index = solutions
        .iter()
        .enumerate()
        .filter(|(_, s)| s.geometric())
        .max_by(|a, b| a.1.volume.total_cmp(&b.1.volume))
        .map(|(i, _)| i);
    InvariantReport {
        braid: sys.braid.clone(),
        n_strands: sys.n_strands,
        writhe: sys.writhe,
        free_vars: sys.n_free(),
        solutions: solutions
            .iter()
            .map(|s| SolutionReport {
                v: s.v.iter().map(|c| (c.re, c.im)).collect(),
                critical_value: (s.critical_value.re, s.critical_value.im),
                volume: s.volume,
                volume_bw: s.volume_bw,
                cs_estimate: s.cs_estimate,
                class: s.class,
                geometric: s.geometric(),
                residual: s.residual,
            })
            .collect(),
        principal_index,
        volume_consistency: principal_index
            .map(|i| (solutions[i].volume - solutions[i].volume_bw).abs()),
        cs_branch_dependent: true,
    }
}
