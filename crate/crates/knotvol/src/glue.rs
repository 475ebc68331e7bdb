//! Saddle-point potential and momentum constraints of a crossing diagram.
//!
//! Each crossing contributes two homogeneous linear relations among its
//! eight segment momenta and five potential terms: four signed dilogarithms
//! Li₂(e^{difference}) and one bilinear product of momentum differences.
//! The pinned segments of the (1,1)-tangle close the system. Exact integer
//! elimination then rewrites every segment as an affine combination of a
//! deterministic free-variable basis, and the potential descends to those
//! free variables.
//!
//! Stationarity of the reduced potential is the hyperbolicity gluing system:
//! exponentiating a gradient component turns the signed log terms into a
//! product of (1 − e^·)^{±1} factors equal to 1.

use crate::braid::{Crossing, Diagram};
use crate::dilog::{bloch_wigner, li2, PI2_6};
use crate::error::{Error, Result};
use crate::ComplexValue;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use serde_json::{json, Value};

pub type Rat = Ratio<i128>;

fn rat(n: i128) -> Rat {
    Ratio::from_integer(n)
}

fn rat_to_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn rat_str(r: &Rat) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Affine form c·v + c₀ over the free variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
}

impl Affine {
    fn zeros(n: usize) -> Self {
        Affine {
            coeffs: vec![Rat::zero(); n],
            constant: Rat::zero(),
        }
    }

    pub fn eval(&self, v: &[ComplexValue]) -> ComplexValue {
        let mut acc = Complex64::new(rat_to_f64(&self.constant), 0.0);
        for (c, x) in self.coeffs.iter().zip(v) {
            if !c.is_zero() {
                acc += rat_to_f64(c) * x;
            }
        }
        acc
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Integer linear constraints over segment momenta: homogeneous crossing
/// relations plus pin equations fixing single segments.
#[derive(Debug, Clone, Default)]
pub struct LinearConstraintSet {
    pub n_segments: usize,
    /// Homogeneous rows: Σ coeff·segment = 0, coefficients in {−1, 0, +1}
    /// before accumulation of closure-identified slots.
    pub rows: Vec<Vec<i64>>,
    /// Pinned segments: segment = value.
    pub pins: Vec<(usize, Rat)>,
}

/// Exact solution of a constraint set: every segment as an affine form over
/// the surviving free segments.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Segment ids forming the free basis, ascending.
    pub free: Vec<usize>,
    /// Per segment, its expression over the free basis.
    pub exprs: Vec<Affine>,
}

impl LinearConstraintSet {
    /// Fraction-free integer Gaussian elimination with first-nonzero
    /// pivoting in segment index order, then exact back-substitution.
    pub fn eliminate(&self) -> Result<Reduction> {
        let n = self.n_segments;
        // Assemble integer rows with rational right-hand sides.
        let mut rows: Vec<(Vec<i128>, Rat)> = Vec::new();
        for r in &self.rows {
            rows.push((r.iter().map(|&c| c as i128).collect(), Rat::zero()));
        }
        for &(seg, ref value) in &self.pins {
            let mut row = vec![0i128; n];
            row[seg] = 1;
            rows.push((row, value.clone()));
        }

        let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
        let mut next_row = 0usize;
        for col in 0..n {
            let Some(pivot_idx) = (next_row..rows.len()).find(|&r| rows[r].0[col] != 0) else {
                continue;
            };
            rows.swap(next_row, pivot_idx);
            let (head, tail) = rows.split_at_mut(next_row + 1);
            let pivot_row = &head[next_row];
            let p = pivot_row.0[col];
            for other in tail.iter_mut() {
                let c = other.0[col];
                if c == 0 {
                    continue;
                }
                let g = gcd_i128(c, p);
                let (mp, mc) = (p / g, c / g);
                for (dst, src) in other.0.iter_mut().zip(pivot_row.0.iter()) {
                    *dst = *dst * mp - src * mc;
                }
                other.1 = &other.1 * rat(mp) - &pivot_row.1 * rat(mc);
                normalize_row(other);
            }
            pivot_of_col[col] = Some(next_row);
            next_row += 1;
            if next_row == rows.len() {
                break;
            }
        }
        // Inconsistency: zero coefficients with nonzero right-hand side.
        for (coeffs, rhs) in rows.iter().skip(next_row) {
            debug_assert!(coeffs.iter().all(|&c| c == 0));
            if !rhs.is_zero() {
                return Err(Error::InconsistentConstraints(format!(
                    "0 = {} after elimination",
                    rat_str(rhs)
                )));
            }
        }
        for (coeffs, rhs) in rows.iter().take(next_row) {
            if coeffs.iter().all(|&c| c == 0) && !rhs.is_zero() {
                return Err(Error::InconsistentConstraints(format!(
                    "0 = {} after elimination",
                    rat_str(rhs)
                )));
            }
        }

        let free: Vec<usize> = (0..n).filter(|&c| pivot_of_col[c].is_none()).collect();
        let col_of_free: Vec<usize> = free.clone();
        let k = free.len();

        let mut exprs: Vec<Affine> = vec![Affine::zeros(k); n];
        for (j, &seg) in col_of_free.iter().enumerate() {
            exprs[seg].coeffs[j] = rat(1);
        }
        // Bound columns, bottom-up so later pivots are already expressed.
        for col in (0..n).rev() {
            let Some(r) = pivot_of_col[col] else { continue };
            let (coeffs, rhs) = &rows[r];
            let p = coeffs[col];
            let mut acc = Affine::zeros(k);
            acc.constant = rhs.clone();
            for c in col + 1..n {
                if coeffs[c] != 0 {
                    let factor = rat(coeffs[c]);
                    for (dst, src) in acc.coeffs.iter_mut().zip(exprs[c].coeffs.iter()) {
                        *dst -= &factor * src;
                    }
                    acc.constant -= &factor * &exprs[c].constant;
                }
            }
            let inv_p = Rat::new(1, p);
            for c in acc.coeffs.iter_mut() {
                *c *= &inv_p;
            }
            acc.constant *= &inv_p;
            exprs[col] = acc;
        }
        Ok(Reduction { free, exprs })
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn normalize_row(row: &mut (Vec<i128>, Rat)) {
    let mut g = 0i128;
    for &c in &row.0 {
        g = gcd_i128(g, c);
        if g == 1 {
            break;
        }
    }
    if g > 1 {
        for c in row.0.iter_mut() {
            *c /= g;
        }
        row.1 /= rat(g);
    }
}

/// One signed dilogarithm term s·Li₂(e^{ℓ(v)}).
#[derive(Debug, Clone)]
pub struct DilogTerm {
    pub sign: i8,
    pub arg: Affine,
}

/// The reduced potential over free variables:
///
/// V(v) = Σ s·Li₂(e^{ℓ(v)}) + vᵀQv + b·v + c₆·π²/6 + c₀.
#[derive(Debug, Clone)]
pub struct Potential {
    pub n_free: usize,
    pub dilog_terms: Vec<DilogTerm>,
    /// Symmetric quadratic form, entries integer or half-integer.
    pub quad: Vec<Vec<Rat>>,
    pub linear: Vec<Rat>,
    /// Coefficient of π²/6.
    pub const_pi2_6: Rat,
    pub const_plain: Rat,
    /// Constant absorbed from dilog terms whose argument reduced to a
    /// nonzero constant (zero for diagram systems).
    pub const_extra: ComplexValue,
}

impl Potential {
    /// V(v). Dilog arguments may touch the Li₂ cut; only non-finite input is
    /// an error.
    pub fn value(&self, v: &[ComplexValue]) -> Result<ComplexValue> {
        let mut acc = self.const_extra
            + Complex64::new(
                rat_to_f64(&self.const_pi2_6) * PI2_6 + rat_to_f64(&self.const_plain),
                0.0,
            );
        for t in &self.dilog_terms {
            let l = t.arg.eval(v);
            acc += f64::from(t.sign) * li2(l.exp())?;
        }
        for (j, row) in self.quad.iter().enumerate() {
            for (kk, q) in row.iter().enumerate() {
                if !q.is_zero() {
                    acc += rat_to_f64(q) * v[j] * v[kk];
                }
            }
        }
        for (b, x) in self.linear.iter().zip(v) {
            if !b.is_zero() {
                acc += rat_to_f64(b) * x;
            }
        }
        Ok(acc)
    }

    /// ∇V(v): component j is Σ −s·log(1−e^{ℓ})·∂ℓ/∂vⱼ + 2(Qv)ⱼ + bⱼ.
    pub fn gradient(&self, v: &[ComplexValue]) -> Result<Vec<ComplexValue>> {
        let k = self.n_free;
        let mut grad = vec![Complex64::new(0.0, 0.0); k];
        for (idx, t) in self.dilog_terms.iter().enumerate() {
            let l = t.arg.eval(v);
            let w = Complex64::new(1.0, 0.0) - l.exp();
            if w.norm_sqr() < 1e-200 {
                return Err(Error::Singular { term: idx });
            }
            let factor = -f64::from(t.sign) * w.ln();
            for (g, c) in grad.iter_mut().zip(t.arg.coeffs.iter()) {
                if !c.is_zero() {
                    *g += factor * rat_to_f64(c);
                }
            }
        }
        for j in 0..k {
            let mut acc = Complex64::new(rat_to_f64(&self.linear[j]), 0.0);
            for (kk, x) in v.iter().enumerate() {
                let q = &self.quad[j][kk];
                if !q.is_zero() {
                    acc += 2.0 * rat_to_f64(q) * x;
                }
            }
            grad[j] += acc;
        }
        Ok(grad)
    }

    /// Hessian ∂²V: symmetric by construction, entries
    /// Σ s·e^{ℓ}/(1−e^{ℓ})·∂ℓ/∂vⱼ·∂ℓ/∂vₖ + 2Qⱼₖ.
    pub fn hessian(&self, v: &[ComplexValue]) -> Result<Vec<Vec<ComplexValue>>> {
        let k = self.n_free;
        let mut h = vec![vec![Complex64::new(0.0, 0.0); k]; k];
        for (j, row) in h.iter_mut().enumerate() {
            for (kk, entry) in row.iter_mut().enumerate() {
                *entry = 2.0 * Complex64::new(rat_to_f64(&self.quad[j][kk]), 0.0);
            }
        }
        for (idx, t) in self.dilog_terms.iter().enumerate() {
            let l = t.arg.eval(v);
            let el = l.exp();
            let w = Complex64::new(1.0, 0.0) - el;
            if w.norm_sqr() < 1e-200 {
                return Err(Error::Singular { term: idx });
            }
            let factor = f64::from(t.sign) * el / w;
            let cf: Vec<f64> = t.arg.coeffs.iter().map(rat_to_f64).collect();
            for j in 0..k {
                if cf[j] == 0.0 {
                    continue;
                }
                for kk in 0..k {
                    if cf[kk] != 0.0 {
                        h[j][kk] += factor * cf[j] * cf[kk];
                    }
                }
            }
        }
        Ok(h)
    }
}

/// Per-crossing contributions before elimination, over segment variables.
/// Kept for audits and for the JSON dump.
#[derive(Debug, Clone)]
pub struct RawSystem {
    pub constraints: LinearConstraintSet,
    /// Signed dilog terms with integer coefficient rows over segments.
    pub dilog_terms: Vec<(i8, Vec<i64>)>,
    /// Bilinear terms as factored pairs of integer rows over segments.
    pub quad_factors: Vec<(Vec<i64>, Vec<i64>)>,
}

/// A tetrahedron shape attached to one dilog term at a point.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    /// Orientation: the sign of the dilog term.
    pub sign: i8,
    /// Modulus z = e^{ℓ(v)} (the paper's z₁; z₂ = 1 − z₁⁻¹ and
    /// z₃ = (1−z₁)⁻¹ carry the same signed volume).
    pub z: ComplexValue,
    /// Signed volume contribution s·D(z).
    pub signed_volume: f64,
}

/// Dihedral angle data of one crossing at a point.
#[derive(Debug, Clone, Copy)]
pub struct DihedralAngles {
    pub a: [ComplexValue; 4],
}

impl DihedralAngles {
    pub fn product(&self) -> ComplexValue {
        self.a[0] * self.a[1] * self.a[2] * self.a[3]
    }
}

/// The assembled saddle system: exact constraint solution plus the reduced
/// potential, with enough raw structure retained to audit and serialize.
#[derive(Debug, Clone)]
pub struct SaddleSystem {
    pub braid: Option<String>,
    pub n_strands: usize,
    pub writhe: i64,
    pub crossings: Vec<Crossing>,
    pub raw: RawSystem,
    pub reduction: Reduction,
    pub potential: Potential,
}

/// Slot roles of the braid operator: relations and potential of each
/// crossing, from the classical limit of the braiding matrix elements.
///
/// sign = +1:  δ(p₁+p₃−p₂−p₁′), δ(p₂′−p₃′+p₄′−p₄);
///             +Li₂(e^{p₄−p₃}) +Li₂(e^{p₃′−p₁}) −Li₂(e^{p₄′−p₂}) −Li₂(e^{p₂′−p₁′})
///             +(p₁′−p₁)(−p₄+p₃−p₁′+p₂′)
/// sign = −1:  δ(p₄′−p₂+p₃−p₄), δ(p₁−p₁′−p₃′+p₂′);
///             +Li₂(e^{p₂−p₁}) +Li₂(e^{p₄−p₂′}) −Li₂(e^{p₃−p₁′}) −Li₂(e^{p₄′−p₃′})
///             +(p₁−p₁′)(p₁−p₂−p₃′+p₄′)
///
/// Slot indices: p₁..p₄ = 0..3, p₁′..p₄′ = 4..7.
fn crossing_tables(
    sign: i8,
) -> (
    &'static [[i64; 8]; 2],
    &'static [(i8, [i64; 8]); 4],
    &'static [[i64; 8]; 2],
) {
    const DELTAS_POS: [[i64; 8]; 2] = [[1, -1, 1, 0, -1, 0, 0, 0], [0, 0, 0, -1, 0, 1, -1, 1]];
    const DILOGS_POS: [(i8, [i64; 8]); 4] = [
        (1, [0, 0, -1, 1, 0, 0, 0, 0]),
        (1, [-1, 0, 0, 0, 0, 0, 1, 0]),
        (-1, [0, -1, 0, 0, 0, 0, 0, 1]),
        (-1, [0, 0, 0, 0, -1, 1, 0, 0]),
    ];
    const QUAD_POS: [[i64; 8]; 2] = [[-1, 0, 0, 0, 1, 0, 0, 0], [0, 0, 1, -1, -1, 1, 0, 0]];
    const DELTAS_NEG: [[i64; 8]; 2] = [[0, -1, 1, -1, 0, 0, 0, 1], [1, 0, 0, 0, -1, 1, -1, 0]];
    const DILOGS_NEG: [(i8, [i64; 8]); 4] = [
        (1, [-1, 1, 0, 0, 0, 0, 0, 0]),
        (1, [0, 0, 0, 1, 0, -1, 0, 0]),
        (-1, [0, 0, 1, 0, -1, 0, 0, 0]),
        (-1, [0, 0, 0, 0, 0, 0, -1, 1]),
    ];
    const QUAD_NEG: [[i64; 8]; 2] = [[1, 0, 0, 0, -1, 0, 0, 0], [1, -1, 0, 0, 0, 0, -1, 1]];
    if sign > 0 {
        (&DELTAS_POS, &DILOGS_POS, &QUAD_POS)
    } else {
        (&DELTAS_NEG, &DILOGS_NEG, &QUAD_NEG)
    }
}

fn scatter(slot_row: &[i64; 8], crossing: &Crossing, n_segments: usize) -> Vec<i64> {
    let mut row = vec![0i64; n_segments];
    for (slot, &c) in slot_row.iter().enumerate() {
        if c != 0 {
            row[crossing.slots[slot]] += c;
        }
    }
    row
}

/// Assemble the saddle system of a diagram: crossing relations, pins, the
/// raw potential, exact elimination and the reduced potential.
pub fn assemble(diagram: &Diagram) -> Result<SaddleSystem> {
    let n = diagram.n_segments;
    let mut constraints = LinearConstraintSet {
        n_segments: n,
        rows: Vec::new(),
        pins: diagram
            .pinned_segments
            .iter()
            .map(|&s| (s, Rat::zero()))
            .collect(),
    };
    let mut raw_dilogs: Vec<(i8, Vec<i64>)> = Vec::new();
    let mut quad_factors: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();

    for crossing in &diagram.crossings {
        let (deltas, dilogs, quad) = crossing_tables(crossing.sign);
        for d in deltas.iter() {
            constraints.rows.push(scatter(d, crossing, n));
        }
        for (sign, row) in dilogs.iter() {
            raw_dilogs.push((*sign, scatter(row, crossing, n)));
        }
        quad_factors.push((
            scatter(&quad[0], crossing, n),
            scatter(&quad[1], crossing, n),
        ));
    }

    let reduction = constraints.eliminate()?;
    let k = reduction.free.len();

    // Substitute segment expressions into the potential.
    let mut dilog_terms = Vec::new();
    let mut const_pi2_6 = Rat::zero();
    let mut const_plain = Rat::zero();
    let mut const_extra = Complex64::new(0.0, 0.0);
    for (sign, row) in &raw_dilogs {
        let arg = substitute_row(row, &reduction, k);
        if arg.is_constant() {
            // A closure-degenerate term: constant contribution, no gradient.
            if arg.constant.is_zero() {
                const_pi2_6 += rat(*sign as i128);
            } else {
                let v = li2(Complex64::new(rat_to_f64(&arg.constant), 0.0).exp())?;
                const_extra += f64::from(*sign) * v;
            }
            continue;
        }
        dilog_terms.push(DilogTerm { sign: *sign, arg });
    }

    let mut quad = vec![vec![Rat::zero(); k]; k];
    let mut linear = vec![Rat::zero(); k];
    for (fa, fb) in &quad_factors {
        let a = substitute_row(fa, &reduction, k);
        let b = substitute_row(fb, &reduction, k);
        // (a·v + a₀)(b·v + b₀), symmetrized.
        let half = Rat::new(1, 2);
        for j in 0..k {
            for kk in 0..k {
                let cross = &a.coeffs[j] * &b.coeffs[kk] + &a.coeffs[kk] * &b.coeffs[j];
                quad[j][kk] += &half * cross;
            }
            linear[j] += &a.coeffs[j] * &b.constant + &b.coeffs[j] * &a.constant;
        }
        const_plain += &a.constant * &b.constant;
    }

    let potential = Potential {
        n_free: k,
        dilog_terms,
        quad,
        linear,
        const_pi2_6,
        const_plain,
        const_extra,
    };

    Ok(SaddleSystem {
        braid: diagram.source.clone(),
        n_strands: diagram.n_strands,
        writhe: diagram.crossings.iter().map(|c| c.sign as i64).sum(),
        crossings: diagram.crossings.clone(),
        raw: RawSystem {
            constraints,
            dilog_terms: raw_dilogs,
            quad_factors,
        },
        reduction,
        potential,
    })
}

fn substitute_row(row: &[i64], reduction: &Reduction, k: usize) -> Affine {
    let mut acc = Affine::zeros(k);
    for (seg, &c) in row.iter().enumerate() {
        if c != 0 {
            let factor = rat(c as i128);
            let e = &reduction.exprs[seg];
            for (dst, src) in acc.coeffs.iter_mut().zip(e.coeffs.iter()) {
                *dst += &factor * src;
            }
            acc.constant += &factor * &e.constant;
        }
    }
    acc
}

impl SaddleSystem {
    pub fn n_free(&self) -> usize {
        self.potential.n_free
    }

    /// Momentum value of every segment at a free-variable point.
    pub fn segment_values(&self, v: &[ComplexValue]) -> Vec<ComplexValue> {
        self.reduction.exprs.iter().map(|e| e.eval(v)).collect()
    }

    /// Residuals of the raw constraint rows at a point; exact elimination
    /// makes these vanish identically up to floating-point assembly.
    pub fn constraint_residual(&self, v: &[ComplexValue]) -> f64 {
        let seg = self.segment_values(v);
        let mut worst: f64 = 0.0;
        for row in &self.raw.constraints.rows {
            let s: ComplexValue = row.iter().zip(&seg).map(|(&c, p)| c as f64 * p).sum();
            worst = worst.max(s.norm());
        }
        for &(pin, ref val) in &self.raw.constraints.pins {
            worst = worst.max((seg[pin] - Complex64::new(rat_to_f64(val), 0.0)).norm());
        }
        worst
    }

    pub fn value(&self, v: &[ComplexValue]) -> Result<ComplexValue> {
        self.potential.value(v)
    }

    pub fn gradient(&self, v: &[ComplexValue]) -> Result<Vec<ComplexValue>> {
        self.potential.gradient(v)
    }

    pub fn hessian(&self, v: &[ComplexValue]) -> Result<Vec<Vec<ComplexValue>>> {
        self.potential.hessian(v)
    }

    /// Tetrahedron shapes of every dilog term at a point.
    pub fn shapes(&self, v: &[ComplexValue]) -> Result<Vec<Shape>> {
        self.potential
            .dilog_terms
            .iter()
            .enumerate()
            .map(|(idx, t)| {
                let z = t.arg.eval(v).exp();
                if (Complex64::new(1.0, 0.0) - z).norm_sqr() < 1e-200 || z.norm_sqr() < 1e-200 {
                    return Err(Error::Singular { term: idx });
                }
                Ok(Shape {
                    sign: t.sign,
                    z,
                    signed_volume: f64::from(t.sign) * bloch_wigner(z)?,
                })
            })
            .collect()
    }

    /// Per-crossing dihedral angles a₁..a₄ at a point, with the auxiliary
    /// octahedron momenta fixed by the internal saddle relations; whenever
    /// they are defined their product is identically 1.
    ///
    /// A crossing whose internal saddle degenerates (the denominator fixing
    /// e^w or e^z vanishes, which the tangle pins can force identically)
    /// yields `None`.
    pub fn dihedral_angles(&self, v: &[ComplexValue]) -> Vec<Option<DihedralAngles>> {
        let seg = self.segment_values(v);
        self.crossings
            .iter()
            .map(|c| {
                let s = |slot: usize| seg[c.slots[slot]];
                // The inverse crossing is the braid operator with relabeled
                // slots: (p₂′,p₁′,p₁,p₂ | p₃′,p₄′,p₄,p₃).
                let [p1, p2, _p3, p4, p1p, _p2p, p3p, p4p] = if c.sign > 0 {
                    [s(0), s(1), s(2), s(3), s(4), s(5), s(6), s(7)]
                } else {
                    [s(5), s(4), s(0), s(1), s(6), s(7), s(3), s(2)]
                };
                let e_x = (p1 - p1p + p4 - p4p).exp();
                let den_w = (-p4p).exp() - e_x * (-p2).exp();
                let den_z = (-p3p).exp() - e_x * (-p1).exp();
                let scale_w = (-p4p).exp().norm_sqr() + (e_x * (-p2).exp()).norm_sqr();
                let scale_z = (-p3p).exp().norm_sqr() + (e_x * (-p1).exp()).norm_sqr();
                if den_w.norm_sqr() < 1e-24 * scale_w || den_z.norm_sqr() < 1e-24 * scale_z {
                    return None;
                }
                let ew = (1.0 - e_x) / den_w;
                let ez = (1.0 - e_x) / den_z;
                let one = Complex64::new(1.0, 0.0);
                let a1 = (one - ez * (-p1).exp()).inv();
                let a2 = one - ez * (-p3p).exp();
                let a3 = (one - ew * (-p4p).exp()).inv();
                let a4 = one - ew * (-p2).exp();
                for a in [a1, a2, a3, a4] {
                    if !a.re.is_finite() || !a.im.is_finite() {
                        return None;
                    }
                }
                Some(DihedralAngles {
                    a: [a1, a2, a3, a4],
                })
            })
            .collect()
    }

    /// Documented JSON schema of the system, for inspection and replay.
    pub fn to_json(&self) -> Value {
        let aff = |a: &Affine| {
            json!({
                "coeffs": a.coeffs.iter().map(rat_str).collect::<Vec<_>>(),
                "const": rat_str(&a.constant),
            })
        };
        json!({
            "braid": self.braid,
            "n_strands": self.n_strands,
            "writhe": self.writhe,
            "n_segments": self.raw.constraints.n_segments,
            "free_segments": self.reduction.free,
            "pins": self.raw.constraints.pins.iter()
                .map(|(s, v)| json!({"segment": s, "value": rat_str(v)}))
                .collect::<Vec<_>>(),
            "constraint_rows": self.raw.constraints.rows,
            "segment_exprs": self.reduction.exprs.iter().map(aff).collect::<Vec<_>>(),
            "crossings": self.crossings.iter()
                .map(|c| json!({"sign": c.sign, "slots": c.slots}))
                .collect::<Vec<_>>(),
            "potential": {
                "dilog_terms": self.potential.dilog_terms.iter()
                    .map(|t| json!({"sign": t.sign, "arg": aff(&t.arg)}))
                    .collect::<Vec<_>>(),
                "quad": self.potential.quad.iter()
                    .map(|row| row.iter().map(rat_str).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "linear": self.potential.linear.iter().map(rat_str).collect::<Vec<_>>(),
                "const_pi2_6": rat_str(&self.potential.const_pi2_6),
                "const": rat_str(&self.potential.const_plain),
            },
        })
    }

    /// Directions v ↦ v + t·d leaving every dilog argument and quadratic
    /// term invariant (gauge null vectors). Empty for pinned diagrams.
    pub fn gauge_directions(&self) -> Vec<Vec<f64>> {
        let k = self.potential.n_free;
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for t in &self.potential.dilog_terms {
            rows.push(t.arg.coeffs.clone());
        }
        for row in &self.potential.quad {
            rows.push(row.clone());
        }
        rows.push(self.potential.linear.clone());
        // Rational null space by Gaussian elimination.
        let mut mat = rows;
        let m = mat.len();
        let mut pivot_cols = Vec::new();
        let mut rank = 0usize;
        for col in 0..k {
            let Some(pr) = (rank..m).find(|&r| !mat[r][col].is_zero()) else {
                continue;
            };
            mat.swap(rank, pr);
            let inv = mat[rank][col].recip();
            for c in 0..k {
                mat[rank][c] *= &inv;
            }
            for r in 0..m {
                if r != rank && !mat[r][col].is_zero() {
                    let f = mat[r][col].clone();
                    for c in 0..k {
                        let sub = &f * &mat[rank][c];
                        mat[r][c] -= sub;
                    }
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
        let mut basis = Vec::new();
        for col in 0..k {
            if pivot_cols.contains(&col) {
                continue;
            }
            let mut dir = vec![0.0; k];
            dir[col] = 1.0;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                dir[pc] = -rat_to_f64(&mat[r][col]);
            }
            basis.push(dir);
        }
        basis
    }
}

/// The classical-limit single-crossing potential V(x, y) = π²/6 − Li₂(eˣ) − xy.
pub fn v_classical(x: ComplexValue, y: ComplexValue) -> Result<ComplexValue> {
    Ok(Complex64::new(PI2_6, 0.0) - li2(x.exp())? - x * y)
}

impl SaddleSystem {
    /// Wrap a hand-built potential as a system with a trivial reduction
    /// (one free variable per potential variable, no crossings).
    pub fn from_potential(potential: Potential) -> SaddleSystem {
        let k = potential.n_free;
        SaddleSystem {
            braid: None,
            n_strands: 0,
            writhe: 0,
            crossings: Vec::new(),
            raw: RawSystem {
                constraints: LinearConstraintSet {
                    n_segments: 0,
                    rows: Vec::new(),
                    pins: Vec::new(),
                },
                dilog_terms: Vec::new(),
                quad_factors: Vec::new(),
            },
            reduction: Reduction {
                free: (0..k).collect(),
                exprs: (0..k)
                    .map(|j| {
                        let mut coeffs = vec![Rat::zero(); k];
                        coeffs[j] = rat(1);
                        Affine {
                            coeffs,
                            constant: Rat::zero(),
                        }
                    })
                    .collect(),
            },
            potential,
        }
    }
}

/// The three-dilogarithm system of the pentagon composition, reduced to its
/// single internal variable z at fixed external momenta:
///
/// U(z) = −π²/2 + Li₂(e^{z−p₂}) + Li₂(e^{p₂′−p₃−z}) + Li₂(e^{p₃′−p₂′+z})
///        + z(−p₂+p₃′−p₂′+z) − p₁p₂ + (p₂′−p₃)(p₁+p₂).
///
/// Its saddle reproduces the two-term side through the five-term identity,
/// and the exponentiated stationarity condition is the gluing equation of
/// the two adjacent tetrahedra.
pub fn pentagon_system(p1: Rat, p2: Rat, p3: Rat, p2p: Rat, p3p: Rat) -> SaddleSystem {
    let term = |sign: i8, coeff: i128, c: Rat| DilogTerm {
        sign,
        arg: Affine {
            coeffs: vec![rat(coeff)],
            constant: c,
        },
    };
    let dilog_terms = vec![
        term(1, 1, -&p2),
        term(1, -1, &p2p - &p3),
        term(1, 1, &p3p - &p2p),
    ];
    let potential = Potential {
        n_free: 1,
        dilog_terms,
        quad: vec![vec![rat(1)]],
        linear: vec![-&p2 + &p3p - &p2p],
        const_pi2_6: rat(-3),
        const_plain: -&p1 * &p2 + (&p2p - &p3) * (&p1 + &p2),
        const_extra: Complex64::new(0.0, 0.0),
    };
    SaddleSystem::from_potential(potential)
}

/// The paper's reduced figure-eight endpoint: the one-variable potential
/// U(p) = Li₂(e^{−p}) − Li₂(e^{p}), whose stationarity condition
/// exponentiates to (1 − e^p)(1 − e^{−p}) = 1 and whose critical value at
/// the positively-oriented root e^p = e^{−iπ/3} is 2i·Cl₂(π/3).
pub fn figure_eight_reduced_system() -> SaddleSystem {
    let term = |sign: i8, coeff: i128| DilogTerm {
        sign,
        arg: Affine {
            coeffs: vec![rat(coeff)],
            constant: Rat::zero(),
        },
    };
    SaddleSystem::from_potential(Potential {
        n_free: 1,
        dilog_terms: vec![term(1, -1), term(-1, 1)],
        quad: vec![vec![Rat::zero()]],
        linear: vec![Rat::zero()],
        const_pi2_6: Rat::zero(),
        const_plain: Rat::zero(),
        const_extra: Complex64::new(0.0, 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{build_diagram, parse_braid, BraidWord};

    fn c(re: f64, im: f64) -> ComplexValue {
        Complex64::new(re, im)
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
        fn point(&mut self, k: usize) -> Vec<ComplexValue> {
            (0..k)
                .map(|_| c(1.6 * self.next_f64() - 0.8, 0.4 + 2.0 * self.next_f64()))
                .collect()
        }
    }

    fn fig8() -> SaddleSystem {
        assemble(&build_diagram(&parse_braid("1 -2 1 -2").unwrap())).unwrap()
    }

    #[test]
    fn identity_tangle_is_trivial() {
        let sys = assemble(&build_diagram(&BraidWord::new(1, vec![]).unwrap())).unwrap();
        assert_eq!(sys.n_free(), 0);
        assert!(sys.potential.dilog_terms.is_empty());
        assert_eq!(sys.value(&[]).unwrap(), c(0.0, 0.0));
        assert!(sys.shapes(&[]).unwrap().is_empty());
    }

    #[test]
    fn single_crossing_raw_terms_audit() {
        // One positive crossing with all eight slots independent: the raw
        // system must list exactly the five contributions with the stated
        // coefficient rows.
        let d = Diagram {
            n_strands: 2,
            n_segments: 8,
            crossings: vec![Crossing {
                sign: 1,
                slots: [0, 1, 2, 3, 4, 5, 6, 7],
            }],
            open_segments: vec![],
            pinned_segments: vec![],
            source: None,
        };
        let sys = assemble(&d).unwrap();
        let rows = &sys.raw.constraints.rows;
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], vec![1, -1, 1, 0, -1, 0, 0, 0]);
        assert_eq!(rows[1], vec![0, 0, 0, -1, 0, 1, -1, 1]);
        let dl = &sys.raw.dilog_terms;
        assert_eq!(dl.len(), 4);
        assert_eq!(dl[0], (1, vec![0, 0, -1, 1, 0, 0, 0, 0]));
        assert_eq!(dl[1], (1, vec![-1, 0, 0, 0, 0, 0, 1, 0]));
        assert_eq!(dl[2], (-1, vec![0, -1, 0, 0, 0, 0, 0, 1]));
        assert_eq!(dl[3], (-1, vec![0, 0, 0, 0, -1, 1, 0, 0]));
        let (fa, fb) = &sys.raw.quad_factors[0];
        assert_eq!(fa, &vec![-1, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(fb, &vec![0, 0, 1, -1, -1, 1, 0, 0]);
        // Two deltas, eight distinct incident slots, each once per relation
        // set.
        let mut touched: Vec<usize> = rows
            .iter()
            .flat_map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(i, _)| i)
            })
            .collect();
        touched.sort_unstable();
        assert_eq!(touched, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn figure_eight_reduces_exactly() {
        let sys = fig8();
        assert!(sys.n_free() > 0);
        // Exact elimination: integer coefficients and zero constants.
        for e in &sys.reduction.exprs {
            assert!(e.constant.is_zero());
            for cc in &e.coeffs {
                assert_eq!(cc.denom(), &1, "non-integer coefficient {cc}");
            }
        }
        // Constraints vanish at random points.
        let mut rng = Rng(3);
        for _ in 0..10 {
            let v = rng.point(sys.n_free());
            assert!(sys.constraint_residual(&v) < 1e-12);
        }
        // Four dilogs per crossing, one of which degenerates: both segments
        // of the p₂′−p₁′ argument of the third crossing are pinned, so that
        // term folds to the constant −Li₂(1) = −π²/6.
        assert_eq!(sys.potential.dilog_terms.len(), 15);
        assert_eq!(sys.potential.const_pi2_6, rat(-1));
        assert!(sys.potential.const_plain.is_zero());
        assert_eq!(sys.potential.const_extra, c(0.0, 0.0));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let sys = fig8();
        let mut rng = Rng(17);
        let k = sys.n_free();
        let h = 1e-5;
        for _ in 0..5 {
            let v = rng.point(k);
            let grad = sys.gradient(&v).unwrap();
            for j in 0..k {
                let mut vp = v.clone();
                let mut vm = v.clone();
                vp[j] += c(h, 0.0);
                vm[j] -= c(h, 0.0);
                let fd = (sys.value(&vp).unwrap() - sys.value(&vm).unwrap()) / (2.0 * h);
                assert!(
                    (grad[j] - fd).norm() < 1e-6,
                    "grad[{j}] = {} vs fd {}",
                    grad[j],
                    fd
                );
            }
        }
    }

    #[test]
    fn hessian_symmetric_and_matches_fd() {
        let sys = fig8();
        let mut rng = Rng(23);
        let k = sys.n_free();
        let h = 1e-5;
        let v = rng.point(k);
        let hess = sys.hessian(&v).unwrap();
        for j in 0..k {
            for kk in 0..k {
                assert_eq!(hess[j][kk], hess[kk][j], "Hessian symmetry");
            }
        }
        for j in 0..k {
            let mut vp = v.clone();
            let mut vm = v.clone();
            vp[j] += c(h, 0.0);
            vm[j] -= c(h, 0.0);
            let gp = sys.gradient(&vp).unwrap();
            let gm = sys.gradient(&vm).unwrap();
            for kk in 0..k {
                let fd = (gp[kk] - gm[kk]) / (2.0 * h);
                assert!(
                    (hess[j][kk] - fd).norm() < 1e-5,
                    "H[{j}][{kk}] vs fd: {} vs {}",
                    hess[j][kk],
                    fd
                );
            }
        }
    }

    #[test]
    fn gauge_fixed_by_pins() {
        let sys = fig8();
        assert!(sys.gauge_directions().is_empty());
        // Raw dilog and bilinear rows are translation invariant: their
        // coefficients over segments sum to zero.
        for (_, row) in &sys.raw.dilog_terms {
            assert_eq!(row.iter().sum::<i64>(), 0);
        }
        for (fa, fb) in &sys.raw.quad_factors {
            assert_eq!(fa.iter().sum::<i64>(), 0);
            assert_eq!(fb.iter().sum::<i64>(), 0);
        }
        for row in &sys.raw.constraints.rows {
            assert_eq!(row.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn dihedral_product_is_one() {
        // Fully independent slots: the identity a₁a₂a₃a₄ = 1 holds at
        // arbitrary momenta.
        let d = Diagram {
            n_strands: 2,
            n_segments: 8,
            crossings: vec![Crossing {
                sign: 1,
                slots: [0, 1, 2, 3, 4, 5, 6, 7],
            }],
            open_segments: vec![],
            pinned_segments: vec![],
            source: None,
        };
        let sys = assemble(&d).unwrap();
        let mut rng = Rng(41);
        for _ in 0..50 {
            let v = rng.point(sys.n_free());
            for d in sys.dihedral_angles(&v).iter().flatten() {
                assert!(
                    (d.product() - c(1.0, 0.0)).norm() < 1e-9,
                    "a1·a2·a3·a4 = {}",
                    d.product()
                );
            }
        }

        // On the figure-eight system the pins force exactly one crossing
        // into the degenerate case; the rest still multiply to 1.
        let sys = fig8();
        let mut degenerate = 0;
        for _ in 0..20 {
            let v = rng.point(sys.n_free());
            let angles = sys.dihedral_angles(&v);
            assert_eq!(angles.len(), 4);
            degenerate = angles.iter().filter(|a| a.is_none()).count();
            for d in angles.iter().flatten() {
                assert!((d.product() - c(1.0, 0.0)).norm() < 1e-8);
            }
        }
        assert_eq!(degenerate, 1);
    }

    #[test]
    fn shapes_at_random_point() {
        let sys = fig8();
        let mut rng = Rng(47);
        let v = rng.point(sys.n_free());
        let shapes = sys.shapes(&v).unwrap();
        assert_eq!(shapes.len(), 15);
        for s in &shapes {
            assert!(s.signed_volume.is_finite());
        }
    }

    #[test]
    fn singular_at_origin() {
        let sys = fig8();
        let v = vec![c(0.0, 0.0); sys.n_free()];
        assert!(matches!(sys.gradient(&v), Err(Error::Singular { .. })));
    }

    #[test]
    fn inconsistent_pins_detected() {
        let cs = LinearConstraintSet {
            n_segments: 2,
            rows: vec![vec![1, -1]],
            pins: vec![(0, rat(0)), (1, rat(1))],
        };
        assert!(matches!(
            cs.eliminate(),
            Err(Error::InconsistentConstraints(_))
        ));
    }

    #[test]
    fn pentagon_gradient_exponentiates_to_gluing_condition() {
        // Random momenta; at any z the exponentiated gradient must equal the
        // product (1−e^{w−p₃})⁻¹(1−e^{p₂−z})(1−e^{w−p₃′}) with w = p₂′ − z.
        let (p1, p2, p3, p2p, p3p) = (
            Rat::new(3, 10),
            Rat::new(-1, 5),
            Rat::new(2, 5),
            Rat::new(1, 2),
            Rat::new(-3, 10),
        );
        let sys = pentagon_system(p1, p2.clone(), p3.clone(), p2p.clone(), p3p.clone());
        let f = |r: &Rat| rat_to_f64(r);
        let mut rng = Rng(7);
        for _ in 0..20 {
            let z = c(2.0 * rng.next_f64() - 1.0, 2.0 * rng.next_f64() + 0.2);
            let grad = sys.gradient(&[z]).unwrap()[0];
            let w = c(f(&p2p), 0.0) - z;
            let one = c(1.0, 0.0);
            let condition = (one - (w - f(&p3)).exp()).inv()
                * (one - (c(f(&p2), 0.0) - z).exp())
                * (one - (w - f(&p3p)).exp());
            assert!(
                ((-grad).exp() - condition).norm() < 1e-9,
                "exp(-dU/dz) = {} vs condition {}",
                (-grad).exp(),
                condition
            );
        }
    }

    #[test]
    fn json_dump_has_schema_fields() {
        let sys = fig8();
        let j = sys.to_json();
        for key in [
            "braid",
            "n_segments",
            "free_segments",
            "segment_exprs",
            "potential",
        ] {
            assert!(j.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(j["potential"]["dilog_terms"].as_array().unwrap().len(), 15);
    }
}
