//! Faddeev quantum dilogarithm Φ_γ and derived matrix elements.
//!
//! Φ_γ(φ) = exp ∫_{R+i0} e^{−iφx} / (4 sinh(γx) sinh(πx)) dx/x.
//!
//! The contour runs along the real axis with a semicircular detour above the
//! third-order pole at the origin. The integral is evaluated by adaptive
//! Gauss–Kronrod panels on the two real tails and on the semicircle, with a
//! certified exponential tail truncation. Points outside the strip of
//! convergence |Im φ| < π + γ are reached through the exact difference
//! equations, each step contributing a closed-form factor.
//!
//! On top of Φ_γ sit the closed form of the H integral ([`h_closed`]), the
//! S-matrix amplitudes ([`s_element`]) and the difference-equation residual
//! probe ([`phi_difference_check`]).

use crate::error::{Error, Result};
use crate::ComplexValue;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Coupling of the quantum dilogarithm, the Planck constant of the theory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiParams {
    pub gamma: f64,
}

impl PhiParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::Config(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        Ok(PhiParams { gamma })
    }

    /// Half-width π + γ of the strip of convergence.
    pub fn strip_half_width(&self) -> f64 {
        PI + self.gamma
    }
}

/// Contour-deformation and truncation parameters for the Φ_γ integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Radius of the upper-half-plane detour around x = 0.
    pub semicircle_radius: f64,
    /// Truncation point for Im φ = 0; scaled up for points deeper in the strip.
    pub truncation: f64,
    /// Per-panel adaptive error target.
    pub panel_tol: f64,
    /// Bound on the discarded exponential tail.
    pub tail_tol: f64,
}

impl QuadratureSpec {
    /// Defaults meeting the 1e−8 identity-suite budget with margin.
    pub fn for_gamma(gamma: f64) -> Self {
        let tail_tol: f64 = 1e-16;
        let radius = (0.5f64).min(0.9 * Self::radius_guard(gamma));
        QuadratureSpec {
            semicircle_radius: radius,
            truncation: (1.0 / tail_tol).ln() / (PI + gamma),
            panel_tol: 1e-12,
            tail_tol,
        }
    }

    /// Largest admissible detour radius: stays inside the pole-free region,
    /// below the nearest zero of sinh(γx)·sinh(πx) off the origin.
    fn radius_guard(gamma: f64) -> f64 {
        (PI / gamma).min(1.0) * PI / (PI + gamma)
    }

    pub fn validate(&self, gamma: f64) -> Result<()> {
        let guard = Self::radius_guard(gamma);
        if !(self.semicircle_radius > 0.0 && self.semicircle_radius < guard) {
            return Err(Error::Config(format!(
                "semicircle_radius {} outside (0, {guard})",
                self.semicircle_radius
            )));
        }
        for (name, v) in [
            ("truncation", self.truncation),
            ("panel_tol", self.panel_tol),
            ("tail_tol", self.tail_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Doubled truncation, halved panel tolerance. Used by the stability
    /// checks.
    pub fn refined(&self) -> Self {
        QuadratureSpec {
            semicircle_radius: self.semicircle_radius,
            truncation: self.truncation * 2.0,
            panel_tol: self.panel_tol * 0.5,
            tail_tol: self.tail_tol,
        }
    }
}

/// Value of log Φ_γ together with the quadrature error estimate.
#[derive(Debug, Clone, Copy)]
pub struct PhiEval {
    /// log Φ_γ(φ): the contour integral plus any difference-equation factors.
    pub log: ComplexValue,
    /// Estimated absolute error of the log.
    pub err: f64,
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Feasibility floor: how close to the strip boundary we still integrate.
const MAX_TRUNCATION: f64 = 5.0e3;

/// ln(1 + e^w), stable for large |Re w|.
fn ln_one_plus_exp(w: Complex64) -> Result<Complex64> {
    if w.re > 20.0 {
        return Ok(w + (-w).exp());
    }
    if w.re < -20.0 {
        return Ok(w.exp());
    }
    let v = Complex64::new(1.0, 0.0) + w.exp();
    if v.norm_sqr() < 1e-28 {
        return Err(Error::domain(format!("log(1+e^w) pole at w = {w}")));
    }
    Ok(v.ln())
}

/// ln(1 − e^w), stable for large |Re w| (defined modulo 2πi for Re w ≫ 0).
fn ln_one_minus_exp(w: Complex64) -> Result<Complex64> {
    if w.re > 20.0 {
        // 1 − e^w = e^w (e^{−w} − 1)
        return Ok(w + ((-w).exp() - 1.0).ln());
    }
    if w.re < -20.0 {
        return Ok(-w.exp());
    }
    let v = Complex64::new(1.0, 0.0) - w.exp();
    if v.norm_sqr() < 1e-28 {
        return Err(Error::domain(format!("log(1-e^w) pole at w = {w}")));
    }
    Ok(v.ln())
}

/// Contour integrand e^{−iφx} / (4 sinh(γx) sinh(πx) x) at complex x.
/// Safe only for moderate |Re(γx)|, |Re(πx)|; the real-axis tails use
/// [`integrand_real`].
fn integrand(gamma: f64, phi: Complex64, x: Complex64) -> Complex64 {
    let denom = 4.0 * (gamma * x).sinh() * (PI * x).sinh() * x;
    (-I * phi * x).exp() / denom
}

/// Integrand on the real axis, stable out to arbitrary |x|.
fn integrand_real(gamma: f64, phi: Complex64, x: f64) -> Complex64 {
    let y = x.abs();
    // Keep every intermediate below ~1e105 so complex division cannot
    // overflow its norm computation.
    if (gamma + PI) * y < 240.0 {
        return integrand(gamma, phi, Complex64::new(x, 0.0));
    }
    // sinh(γx) sinh(πx) = e^{(γ+π)y} (1−e^{−2γy})(1−e^{−2πy}) / 4, even in x.
    let s = x.signum();
    let expo = -I * phi * x - Complex64::new((gamma + PI) * y, 0.0);
    s * expo.exp() / (y * (1.0 - (-2.0 * gamma * y).exp()) * (1.0 - (-2.0 * PI * y).exp()))
}

// 15-point Kronrod nodes and weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224,
    0.06309209262997856,
    0.10479001032225018,
    0.14065325971552592,
    0.1690047266392679,
    0.1903505780647854,
    0.20443294007529889,
    0.20948214108472782,
];
const WG: [f64; 4] = [
    0.1294849661688697,
    0.27970539148927664,
    0.3818300505051189,
    0.4179591836734694,
];

/// One Gauss–Kronrod 15(7) panel; returns (K15, |K15 − G7|).
fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).norm())
}

struct AdaptiveState {
    evals: usize,
    err: f64,
}

const EVAL_BUDGET: usize = 2_000_000;

struct Panel {
    err: f64,
    a: f64,
    b: f64,
    value: Complex64,
}

/// Globally adaptive integration: keep splitting the worst panel until the
/// summed error estimate meets `tol` or hits the roundoff floor.
fn adapt<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    state: &mut AdaptiveState,
) -> Result<Complex64> {
    // Seed with panels short enough that oscillation is visible to the rule.
    let n0 = (((b - a) / 8.0).ceil() as usize).clamp(1, 512);
    let step = (b - a) / n0 as f64;
    let mut panels: Vec<Panel> = Vec::with_capacity(n0 + 64);
    for k in 0..n0 {
        let (pa, pb) = (a + k as f64 * step, a + (k + 1) as f64 * step);
        let (value, err) = kronrod15(f, pa, pb);
        panels.push(Panel {
            err,
            a: pa,
            b: pb,
            value,
        });
    }
    state.evals += 15 * n0;

    loop {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        let scale: f64 = panels.iter().map(|p| p.value.norm()).sum();
        if total_err <= tol {
            break;
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .expect("at least one panel");
        // Roundoff floor: further splitting cannot help.
        if panels[worst].err < 1e-16 * (1.0 + scale) / panels.len() as f64 {
            break;
        }
        if state.evals > EVAL_BUDGET {
            return Err(Error::QuadratureNonConvergence {
                estimate: total_err,
                target: tol,
            });
        }
        let Panel { a: pa, b: pb, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        let (lv, le) = kronrod15(f, pa, mid);
        let (rv, re) = kronrod15(f, mid, pb);
        state.evals += 30;
        panels.push(Panel {
            err: le,
            a: pa,
            b: mid,
            value: lv,
        });
        panels.push(Panel {
            err: re,
            a: mid,
            b: pb,
            value: rv,
        });
    }

    state.err += panels.iter().map(|p| p.err).sum::<f64>();
    Ok(panels.iter().map(|p| p.value).sum())
}

/// The contour integral for log Φ_γ(φ), requiring |Im φ| strictly inside the
/// strip. Returns the log value and an error estimate.
fn log_phi_in_strip(
    params: PhiParams,
    quad: &QuadratureSpec,
    phi_arg: Complex64,
) -> Result<PhiEval> {
    let gamma = params.gamma;
    let width = params.strip_half_width();
    let decay = width - phi_arg.im.abs();
    let needed = (1.0 / quad.tail_tol).ln() / decay;
    if !(decay > 0.0) || needed > MAX_TRUNCATION {
        return Err(Error::StripViolation {
            im_abs: phi_arg.im.abs(),
            limit: width - (1.0 / quad.tail_tol).ln() / MAX_TRUNCATION,
        });
    }
    let cutoff = quad.truncation.max(needed);
    let r = quad.semicircle_radius;

    let mut state = AdaptiveState { evals: 0, err: 0.0 };
    let real_part = |x: f64| integrand_real(gamma, phi_arg, x);
    let left = adapt(&real_part, -cutoff, -r, quad.panel_tol, &mut state)?;
    let right = adapt(&real_part, r, cutoff, quad.panel_tol, &mut state)?;
    // Semicircle x = r e^{iθ}, θ from π to 0 (detour above the pole):
    // ∫ f dx = −∫₀^π f(re^{iθ}) · i r e^{iθ} dθ.
    let semi_f = |theta: f64| {
        let x = Complex64::from_polar(r, theta);
        integrand(gamma, phi_arg, x) * I * x
    };
    let semi = -adapt(&semi_f, 0.0, PI, quad.panel_tol, &mut state)?;

    // Discarded tails: |integrand| ≤ e^{−decay·|x|} / (|x|·(1−e^{−2γ|x|})(1−e^{−2π|x|})).
    let tail_scale =
        cutoff * (1.0 - (-2.0 * gamma * cutoff).exp()) * (1.0 - (-2.0 * PI * cutoff).exp());
    let tail = 2.0 * (-decay * cutoff).exp() / (decay * tail_scale);

    Ok(PhiEval {
        log: left + semi + right,
        err: state.err + tail,
    })
}

/// log Φ_γ(φ) with its error estimate, for φ strictly inside the strip of
/// convergence |Im φ| < π + γ (up to the truncation-feasibility margin).
pub fn phi_log(params: PhiParams, quad: &QuadratureSpec, varphi: ComplexValue) -> Result<PhiEval> {
    if !varphi.re.is_finite() || !varphi.im.is_finite() {
        return Err(Error::domain(format!("non-finite argument {varphi}")));
    }
    quad.validate(params.gamma)?;
    log_phi_in_strip(params, quad, varphi)
}

/// log Φ_γ(φ) extended past the strip boundary.
///
/// Inside the strip this is the contour integral itself. For
/// |Im φ| ≥ π + γ the difference equations
/// Φ_γ(φ+iγ)/Φ_γ(φ−iγ) = 1/(1+e^φ) are applied repeatedly to land the
/// argument at |Im| ≤ γ, each step contributing an exact closed-form
/// factor. This extension backs the iπ + iγ shifts of the matrix elements.
pub fn phi_log_extended(
    params: PhiParams,
    quad: &QuadratureSpec,
    varphi: ComplexValue,
) -> Result<PhiEval> {
    if !varphi.re.is_finite() || !varphi.im.is_finite() {
        return Err(Error::domain(format!("non-finite argument {varphi}")));
    }
    quad.validate(params.gamma)?;
    let gamma = params.gamma;
    let width = params.strip_half_width();
    let mut psi = varphi;
    let mut factor = Complex64::new(0.0, 0.0);
    if psi.im.abs() >= width {
        let steps = ((psi.im.abs() - gamma) / (2.0 * gamma)).ceil() as u64;
        if steps > 1_000_000 {
            return Err(Error::StripViolation {
                im_abs: psi.im.abs(),
                limit: width,
            });
        }
        while psi.im > gamma {
            // Φ(ψ) = Φ(ψ − 2iγ) / (1 + e^{ψ − iγ})
            factor -= ln_one_plus_exp(psi - I * gamma)?;
            psi -= 2.0 * I * gamma;
        }
        while psi.im < -gamma {
            // Φ(ψ) = Φ(ψ + 2iγ) · (1 + e^{ψ + iγ})
            factor += ln_one_plus_exp(psi + I * gamma)?;
            psi += 2.0 * I * gamma;
        }
    }
    let base = log_phi_in_strip(params, quad, psi)?;
    Ok(PhiEval {
        log: base.log + factor,
        err: base.err,
    })
}

/// Φ_γ(φ) inside the strip; see [`phi_log`].
pub fn phi(params: PhiParams, quad: &QuadratureSpec, varphi: ComplexValue) -> Result<ComplexValue> {
    let eval = phi_log(params, quad, varphi)?;
    let value = eval.log.exp();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::domain(format!(
            "Phi overflow: log value {} too large",
            eval.log
        )));
    }
    Ok(value)
}

/// Φ with the default quadrature for its γ.
pub fn phi_default(gamma: f64, varphi: ComplexValue) -> Result<ComplexValue> {
    let params = PhiParams::new(gamma)?;
    phi(params, &QuadratureSpec::for_gamma(gamma), varphi)
}

/// Φ_γ(φ) through the difference-equation extension; defined wherever the
/// step factors stay off the zero/pole lattice.
pub fn phi_extended(
    params: PhiParams,
    quad: &QuadratureSpec,
    varphi: ComplexValue,
) -> Result<ComplexValue> {
    let eval = phi_log_extended(params, quad, varphi)?;
    let value = eval.log.exp();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::domain(format!(
            "Phi overflow: log value {} too large",
            eval.log
        )));
    }
    Ok(value)
}

/// log H(a,b,c,d) via the closed form
///
/// H = (1/4πγ) · Φ(a−b−iπ−iγ) Φ(d−a+iπ+iγ) / (Φ(c−b−iπ−iγ) Φ(d−c+iπ+iγ))
///     · e^{c(−a+b−c+d)/2iγ} / ((1−e^{a−c})(1−e^{(π/γ)(a−c)})).
///
/// Summing logs keeps the classical limit 2iγ·log H free of spurious 2πi
/// windings from the product form.
pub fn h_closed_log(
    gamma: f64,
    quad: &QuadratureSpec,
    a: ComplexValue,
    b: ComplexValue,
    c: ComplexValue,
    d: ComplexValue,
) -> Result<ComplexValue> {
    let params = PhiParams::new(gamma)?;
    let shift = I * (PI + gamma);
    let num1 = phi_log_extended(params, quad, a - b - shift)?.log;
    let num2 = phi_log_extended(params, quad, d - a + shift)?.log;
    let den1 = phi_log_extended(params, quad, c - b - shift)?.log;
    let den2 = phi_log_extended(params, quad, d - c + shift)?.log;
    let quadratic = c * (-a + b - c + d) / (2.0 * I * gamma);
    let pole1 = ln_one_minus_exp(a - c)?;
    let pole2 = ln_one_minus_exp((PI / gamma) * (a - c))?;
    Ok(num1 + num2 - den1 - den2 + quadratic - (4.0 * PI * gamma).ln() - pole1 - pole2)
}

/// H(a,b,c,d) as a value; errors on denominator poles, strip violations and
/// overflow.
pub fn h_closed(
    gamma: f64,
    quad: &QuadratureSpec,
    a: ComplexValue,
    b: ComplexValue,
    c: ComplexValue,
    d: ComplexValue,
) -> Result<ComplexValue> {
    let log = h_closed_log(gamma, quad, a, b, c, d)?;
    let value = log.exp();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::domain(format!("H overflow: log value {log}")));
    }
    Ok(value)
}

/// Which S-matrix element: the operator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SSign {
    Plus,
    Minus,
}

/// Symbolic momentum-conservation constraint of an S element: the
/// coefficients of (p₁, p₂, p₁′, p₂′) in a relation Σ cᵢ pᵢ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaConstraint {
    pub coeffs: [i8; 4],
}

impl std::fmt::Display for DeltaConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = ["p1", "p2", "p1'", "p2'"];
        let mut first = true;
        for (c, name) in self.coeffs.iter().zip(names) {
            match (*c, first) {
                (0, _) => continue,
                (1, true) => write!(f, "{name}")?,
                (1, false) => write!(f, " + {name}")?,
                (-1, true) => write!(f, "-{name}")?,
                (-1, false) => write!(f, " - {name}")?,
                _ => write!(f, " {c:+}{name}")?,
            }
            first = false;
        }
        write!(f, " = 0")
    }
}

/// An evaluated S-matrix element: the delta-function constraint as a linear
/// relation, and the complex amplitude multiplying it.
#[derive(Debug, Clone, Copy)]
pub struct SElement {
    pub constraint: DeltaConstraint,
    pub amplitude: ComplexValue,
}

/// Matrix element ⟨p₁,p₂|S^{±1}|p₁′,p₂′⟩ = δ(relation) · amplitude.
///
/// The delta function is returned symbolically, never as a number; the
/// 1/√(4πγ) prefactor is kept verbatim inside the amplitude.
pub fn s_element(
    gamma: f64,
    sign: SSign,
    quad: &QuadratureSpec,
    p1: ComplexValue,
    p2: ComplexValue,
    p1p: ComplexValue,
    p2p: ComplexValue,
) -> Result<SElement> {
    let params = PhiParams::new(gamma)?;
    let shift = I * (PI + gamma);
    let pref = 1.0 / (4.0 * PI * gamma).sqrt();
    let two_i_gamma = 2.0 * I * gamma;
    let const_term = (PI * PI + gamma * gamma) / 6.0 + gamma * PI / 2.0;
    match sign {
        SSign::Plus => {
            let amp = pref
                * phi_extended(params, quad, p2p - p2 + shift)?
                * ((-const_term + p1 * (p2p - p2)) / two_i_gamma).exp();
            Ok(SElement {
                constraint: DeltaConstraint {
                    coeffs: [1, 1, -1, 0],
                },
                amplitude: amp,
            })
        }
        SSign::Minus => {
            let amp = pref / phi_extended(params, quad, p2 - p2p - shift)?
                * ((const_term - p1p * (p2 - p2p)) / two_i_gamma).exp();
            Ok(SElement {
                constraint: DeltaConstraint {
                    coeffs: [1, 0, -1, -1],
                },
                amplitude: amp,
            })
        }
    }
}

/// Residuals of the two difference equations at φ.
#[derive(Debug, Clone, Copy)]
pub struct DifferenceResiduals {
    /// |Φ(φ+iγ)/Φ(φ−iγ) − 1/(1+e^φ)|
    pub gamma_shift: f64,
    /// |Φ(φ+iπ)/Φ(φ−iπ) − 1/(1+e^{(π/γ)φ})|
    pub pi_shift: f64,
}

impl DifferenceResiduals {
    pub fn max(&self) -> f64 {
        self.gamma_shift.max(self.pi_shift)
    }
}

/// Evaluate both difference-equation residuals by direct quadrature at the
/// shifted points (all four must lie inside the strip).
pub fn phi_difference_check(
    gamma: f64,
    quad: &QuadratureSpec,
    varphi: ComplexValue,
) -> Result<DifferenceResiduals> {
    let params = PhiParams::new(gamma)?;
    let up_g = phi(params, quad, varphi + I * gamma)?;
    let dn_g = phi(params, quad, varphi - I * gamma)?;
    let rhs_g = (Complex64::new(1.0, 0.0) + varphi.exp()).inv();
    let up_p = phi(params, quad, varphi + I * PI)?;
    let dn_p = phi(params, quad, varphi - I * PI)?;
    let rhs_p = (Complex64::new(1.0, 0.0) + ((PI / gamma) * varphi).exp()).inv();
    Ok(DifferenceResiduals {
        gamma_shift: (up_g / dn_g - rhs_g).norm(),
        pi_shift: (up_p / dn_p - rhs_p).norm(),
    })
}

/// Right-hand side of the inversion relation:
/// Φ_γ(x)·Φ_γ(−x) = exp(−(x²/2 + (π²+γ²)/6) / 2iγ).
pub fn inversion_rhs(gamma: f64, x: ComplexValue) -> ComplexValue {
    ((x * x / 2.0 + (PI * PI + gamma * gamma) / 6.0) / (-2.0 * I * gamma)).exp()
}
