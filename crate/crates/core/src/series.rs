//! Closed-form series for `phi(X, g)` and `h(X, g)`.
//!
//! Everything is expressed through the operator `D = ad(XP)` acting on
//! `g`-valued polynomials, `D(f (x) w) = sum_i (-1)^{|P_i||f|} X^i f (x) [P_i, w]`.
//! Power series in `D` are evaluated term by term; each application raises
//! the `X`-degree by one, so a degree cap ends every sum.

use thiserror::Error;

use crate::decomp::Decomposition;
use crate::liealg::GVector;
use crate::scalar::{bernoulli_with, factorial, BernoulliConvention, Scalar};
use crate::superpoly::{Coefficient, Monomial, ScalarPoly, SuperPoly};

pub type GPoly = SuperPoly<GVector>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("g_- is not a subalgebra; use the general engine")]
    NotSubalgebra,
    #[error("no natural truncation for an ungraded decomposition; pass one explicitly")]
    TruncationRequired,
}

/// Result of either engine for one generator.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiH {
    /// `g_-`-valued: the coefficient of `P_i` is `phi^i(X, g)`.
    pub phi: GPoly,
    /// `h`-valued.
    pub h: GPoly,
    pub truncation: usize,
    /// Some series was cut by the degree cap, so the result is a truncation
    /// of an infinite one.
    pub truncated: bool,
}

impl PhiH {
    /// `phi^i(X, g)` as a scalar polynomial.
    pub fn phi_component(&self, decomp: &Decomposition, i: usize) -> ScalarPoly {
        let idx = decomp.minus()[i];
        self.phi.map(|v| v.get(idx))
    }

    /// `phi P + h`, the full `g`-valued series.
    pub fn combined(&self) -> GPoly {
        self.phi.add(&self.h)
    }
}

/// One application of `ad(XP)`, without a degree cap.
pub fn ad_xp(decomp: &Decomposition, v: &GPoly) -> GPoly {
    let alg = decomp.algebra();
    let mut out = GPoly::zero(None);
    for (f, w) in v.iter() {
        let f_odd = f.parity().is_odd();
        for (i, &p) in decomp.minus().iter().enumerate() {
            let x = decomp.var(i);
            let mut b = GVector::zero();
            for (j, c) in w.iter() {
                b.add_assign(&alg.bracket_basis(p, j).scale(c));
            }
            if b.is_empty() {
                continue;
            }
            if let Some((neg, m)) = Monomial::var(x).mul(f) {
                let neg = neg ^ (x.parity.is_odd() && f_odd);
                out.add_signed_term(m, b, neg);
            }
        }
    }
    out.with_truncation(v.truncation())
}

/// `D` with a degree cap; reports whether anything was cut.
fn ad_capped(decomp: &Decomposition, v: &GPoly, cap: usize) -> (GPoly, bool) {
    let raw = ad_xp(decomp, &v.clone().with_truncation(None));
    let cut = raw.degree().is_some_and(|d| d > cap);
    (raw.with_truncation(Some(cap)), cut)
}

/// `sum_j coeff(j) D^j v` up to the cap.
fn power_series(
    decomp: &Decomposition,
    coeff: impl Fn(usize) -> Scalar,
    v: &GPoly,
    cap: usize,
    cut: &mut bool,
) -> GPoly {
    let mut total = GPoly::zero(Some(cap));
    let mut term = v.clone().with_truncation(Some(cap));
    let mut j = 0;
    while !term.is_zero() {
        let c = coeff(j);
        if !c.is_zero() {
            total = total.add(&term.scale(&c));
        }
        let (next, was_cut) = ad_capped(decomp, &term, cap);
        *cut |= was_cut;
        term = next;
        j += 1;
    }
    total
}

fn inv_factorial(n: usize) -> Scalar {
    Scalar::one() / Scalar::from(factorial(n as u32))
}

/// Coefficients of `t / (e^{-t} - 1) = -sum_j b+_j t^j / j!`.
fn f_coeff(j: usize) -> Scalar {
    -(bernoulli_with(j, BernoulliConvention::PlusHalf) * inv_factorial(j))
}

/// Coefficients of `(e^{-t} - 1) / t = sum_n (-1)^{n+1} t^n / (n+1)!`.
fn g_coeff(n: usize) -> Scalar {
    inv_factorial(n + 1).signed(n % 2 == 0)
}

/// `e^{-D} g = sum_n (-1)^n D^n g / n!`.
pub fn exp_neg_ad(decomp: &Decomposition, g: &GVector, truncation: usize) -> GPoly {
    let mut cut = false;
    exp_neg_ad_flagged(decomp, g, truncation, &mut cut)
}

fn exp_neg_ad_flagged(decomp: &Decomposition, g: &GVector, cap: usize, cut: &mut bool) -> GPoly {
    let start = GPoly::constant(g.clone(), Some(cap));
    power_series(decomp, |n| inv_factorial(n).signed(n % 2 == 1), &start, cap, cut)
}

/// `l + d` for a generator of degree `d` in a triangular decomposition of a
/// graded algebra (the highest `X`-degree that can occur).
pub fn default_truncation(decomp: &Decomposition, g: &GVector) -> Result<usize, SeriesError> {
    let alg = decomp.algebra();
    let l = alg.grading_depth().ok_or(SeriesError::TruncationRequired)?;
    let aligned_negative = decomp.minus().iter().all(|&i| alg.basis()[i].degree.unwrap() < 0)
        && decomp.h().iter().all(|&i| alg.basis()[i].degree.unwrap() >= 0);
    if !aligned_negative {
        return Err(SeriesError::TruncationRequired);
    }
    let d = g.iter().map(|(i, _)| alg.basis()[i].degree.unwrap()).max().unwrap_or(0);
    Ok((l + d).max(0) as usize)
}

/// Closed forms for a subalgebra `g_-`:
/// `h = Pi_h e^{-D} g` and `phi P = (-D / (e^{-D} - 1)) Pi_- e^{-D} g`.
pub fn phi_h_subalgebra(decomp: &Decomposition, g: &GVector, truncation: usize) -> Result<PhiH, SeriesError> {
    if !decomp.is_subalgebra() {
        return Err(SeriesError::NotSubalgebra);
    }
    let mut cut = false;
    let e = exp_neg_ad_flagged(decomp, g, truncation, &mut cut);
    let h = decomp.project_h_poly(&e);
    let minus = decomp.project_minus_poly(&e);
    // -t/(e^{-t}-1) = sum_j b+_j t^j / j!
    let phi = power_series(decomp, |j| -f_coeff(j), &minus, truncation, &mut cut);
    Ok(PhiH { phi, h, truncation, truncated: cut })
}

/// General decomposition: invert `Pi_- (e^{-D} - 1)/D` on `g_-`-valued
/// series and `Pi_h D/(e^{-D} - 1)` on `h`-valued series by Neumann sums.
pub fn phi_h_general(decomp: &Decomposition, g: &GVector, truncation: usize) -> PhiH {
    let mut cut = false;
    let e = exp_neg_ad_flagged(decomp, g, truncation, &mut cut);

    // Pi_- ((e^{-D}-1)/D) = -1 + N
    let base = decomp.project_minus_poly(&e);
    let mut phi = GPoly::zero(Some(truncation));
    let mut term = base;
    while !term.is_zero() {
        phi = phi.add(&term);
        let tail = power_series(decomp, |n| if n == 0 { Scalar::zero() } else { g_coeff(n) }, &term, truncation, &mut cut);
        term = decomp.project_minus_poly(&tail);
    }

    // Pi_h f(D) = -1 + N'
    let fe = power_series(decomp, f_coeff, &e, truncation, &mut cut);
    let rhs = decomp.project_h_poly(&fe);
    let mut h = GPoly::zero(Some(truncation));
    let mut term = rhs;
    while !term.is_zero() {
        h = h.sub(&term);
        let tail = power_series(decomp, |j| if j == 0 { Scalar::zero() } else { f_coeff(j) }, &term, truncation, &mut cut);
        term = decomp.project_h_poly(&tail);
    }
    PhiH { phi, h, truncation, truncated: cut }
}

/// Check `phi P - f(D) h = -f(D) e^{-D} g` to the truncation degree, with
/// `f(t) = t / (e^{-t} - 1)`.
pub fn verify_defining_identity(decomp: &Decomposition, g: &GVector, phi: &GPoly, h: &GPoly, truncation: usize) -> bool {
    defining_identity_residual(decomp, g, phi, h, truncation).is_zero()
}

/// Left side minus right side of the defining identity.
pub fn defining_identity_residual(decomp: &Decomposition, g: &GVector, phi: &GPoly, h: &GPoly, truncation: usize) -> GPoly {
    let mut cut = false;
    let e = exp_neg_ad_flagged(decomp, g, truncation, &mut cut);
    let phi = phi.clone().with_truncation(Some(truncation));
    let lhs = phi.sub(&power_series(decomp, f_coeff, h, truncation, &mut cut));
    let rhs = power_series(decomp, f_coeff, &e, truncation, &mut cut).neg();
    lhs.sub(&rhs)
}
