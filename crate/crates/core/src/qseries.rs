//! Scalar q-analysis kernel: q-shifted factorials, the Jacobi theta function,
//! the q-gamma function and the quasi-constant Ψ_t.
//!
//! Real exponents never go through complex powers. A shifted factorial with
//! exponent τ (where t = q^τ) is always realised as the ratio
//! (a;q)_∞ / (a t;q)_∞, with `t` stored exactly as the caller supplied it.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// 2^-53: truncation threshold for infinite products.
pub const TRUNC: f64 = 1.1102230246251565e-16;

/// Denominator factors with |1 - a q^i| below this are treated as poles.
pub const POLE_TOL: f64 = 1e-13;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// The base q, strictly inside (0, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QBase(f64);

impl QBase {
    pub fn new(q: f64) -> Result<Self> {
        if q > 0.0 && q < 1.0 {
            Ok(QBase(q))
        } else {
            Err(Error::InvalidParameter(format!("q must lie in (0,1), got {q}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// A deformation parameter t = q^τ kept as the exact pair (t, τ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deformation {
    t: f64,
    tau: f64,
}

impl Deformation {
    /// Builds the pair from t; τ is computed once here and never again.
    pub fn new(q: QBase, t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidParameter(format!("t must lie in (0,1), got {t}")));
        }
        Ok(Deformation { t, tau: t.ln() / q.get().ln() })
    }

    /// t = q^k with τ = k exactly.
    pub fn from_power(q: QBase, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("t = q^0 = 1 is not allowed".into()));
        }
        Ok(Deformation { t: q.get().powi(k as i32), tau: k as f64 })
    }

    #[inline]
    pub fn t(self) -> f64 {
        self.t
    }

    #[inline]
    pub fn tau(self) -> f64 {
        self.tau
    }

    /// Returns k when τ is (numerically) a positive integer.
    pub fn integer_power(self) -> Option<u32> {
        let k = self.tau.round();
        if k >= 1.0 && (self.tau - k).abs() < 1e-12 {
            Some(k as u32)
        } else {
            None
        }
    }
}

/// Exponent of a q-shifted factorial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QExponent {
    Finite(u32),
    /// Real exponent b realised through `shift` = q^b.
    Real { shift: f64 },
    Infinite,
}

/// (a;q)_k = ∏_{i<k} (1 - a q^i).
pub fn qpoch_finite(a: C64, q: QBase, k: u32) -> C64 {
    let q = q.get();
    let mut prod = ONE;
    let mut term = a;
    for _ in 0..k {
        prod *= ONE - term;
        term *= q;
    }
    prod
}

/// (a;q)_∞, truncated once |a| q^j < `rel_tol`.
pub fn qpoch_infinite(a: C64, q: QBase, rel_tol: f64) -> C64 {
    let q = q.get();
    let mut prod = ONE;
    let mut term = a;
    while term.norm() >= rel_tol {
        prod *= ONE - term;
        term *= q;
    }
    prod
}

/// (a;q)_∞ at the default truncation threshold.
#[inline]
pub fn qpoch_inf(a: C64, q: QBase) -> C64 {
    qpoch_infinite(a, q, TRUNC)
}

/// (a;q)_∞ with a guard against vanishing factors.
pub fn qpoch_infinite_nonzero(a: C64, q: QBase) -> Result<C64> {
    let qv = q.get();
    let mut prod = ONE;
    let mut term = a;
    while term.norm() >= TRUNC {
        let f = ONE - term;
        if f.norm() < POLE_TOL {
            return Err(Error::Zero(format!("({a};q)_inf")));
        }
        prod *= f;
        term *= qv;
    }
    Ok(prod)
}

/// ∏(num;q)_∞ / ∏(den;q)_∞ evaluated in a single interleaved loop, which
/// keeps intermediate magnitudes moderate when large arguments appear on both
/// sides.
pub fn qpoch_ratio(num: &[C64], den: &[C64], q: QBase) -> Result<C64> {
    let qv = q.get();
    let mut nt: Vec<C64> = num.to_vec();
    let mut dt: Vec<C64> = den.to_vec();
    let mut prod = ONE;
    loop {
        let mut active = false;
        for x in nt.iter_mut() {
            if x.norm() >= TRUNC {
                prod *= ONE - *x;
                *x *= qv;
                active = true;
            }
        }
        for x in dt.iter_mut() {
            if x.norm() >= TRUNC {
                let f = ONE - *x;
                if f.norm() < POLE_TOL {
                    return Err(Error::PoleAtDenominator(format!("factor 1 - {x}")));
                }
                prod /= f;
                *x *= qv;
                active = true;
            }
        }
        if !active {
            return Ok(prod);
        }
    }
}

/// Finite analogue of [`qpoch_ratio`]: ∏(num;q)_k / ∏(den;q)_k.
pub fn qpoch_finite_ratio(num: &[C64], den: &[C64], q: QBase, k: u32) -> Result<C64> {
    let qv = q.get();
    let mut nt: Vec<C64> = num.to_vec();
    let mut dt: Vec<C64> = den.to_vec();
    let mut prod = ONE;
    for _ in 0..k {
        for x in nt.iter_mut() {
            prod *= ONE - *x;
            *x *= qv;
        }
        for x in dt.iter_mut() {
            let f = ONE - *x;
            if f.norm() < POLE_TOL {
                return Err(Error::PoleAtDenominator(format!("factor 1 - {x}")));
            }
            prod /= f;
            *x *= qv;
        }
    }
    Ok(prod)
}

/// (a;q)_τ = (a;q)_∞ / (a t;q)_∞ with t = q^τ.
pub fn qpoch_real(a: C64, q: QBase, t: f64) -> Result<C64> {
    qpoch_ratio(&[a], &[a * t], q)
}

/// (a_1,…,a_m;q)_b for any supported exponent.
pub fn qpoch_product(list: &[C64], q: QBase, exponent: QExponent) -> Result<C64> {
    match exponent {
        QExponent::Finite(k) => Ok(list.iter().map(|&a| qpoch_finite(a, q, k)).product()),
        QExponent::Infinite => Ok(list.iter().map(|&a| qpoch_inf(a, q)).product()),
        QExponent::Real { shift } => {
            let den: Vec<C64> = list.iter().map(|&a| a * shift).collect();
            qpoch_ratio(list, &den, q)
        }
    }
}

/// θ(x) = (q, x, q/x; q)_∞.
pub fn theta_jacobi(x: C64, q: QBase) -> Result<C64> {
    if x == C64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    let qc = C64::new(q.get(), 0.0);
    Ok(qpoch_inf(qc, q) * qpoch_inf(x, q) * qpoch_inf(qc / x, q))
}

/// θ on the real line.
pub fn theta_real(x: f64, q: QBase) -> Result<f64> {
    theta_jacobi(C64::new(x, 0.0), q).map(|v| v.re)
}

/// Γ_q(u) = (q;q)_∞ / (q^u;q)_∞ · (1-q)^{1-u}, with q^u computed once.
pub fn qgamma(u: f64, q: QBase) -> Result<f64> {
    qgamma_with_power(u, q.get().powf(u), q)
}

/// Γ_q(u) where the caller supplies q^u in exact product form.
pub fn qgamma_with_power(u: f64, qu: f64, q: QBase) -> Result<f64> {
    if u <= 0.0 && u.fract() == 0.0 {
        return Err(Error::PoleAtNonpositiveInteger(u));
    }
    let qq = C64::new(q.get(), 0.0);
    let r = qpoch_ratio(&[qq], &[C64::new(qu, 0.0)], q)
        .map_err(|_| Error::PoleAtNonpositiveInteger(u))?;
    Ok(r.re * (1.0 - q.get()).powf(1.0 - u))
}

/// Ψ_t(x) = |x|^{2τ-1} θ(t x) / θ(q x / t).
pub fn psi_t(x: f64, q: QBase, t: Deformation) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let den = theta_real(q.get() * x / t.t(), q)?;
    if den.abs() < POLE_TOL {
        return Err(Error::PoleAtDenominator(format!("theta(q x / t) at x = {x}")));
    }
    let pow = ((2.0 * t.tau() - 1.0) * x.abs().ln()).exp();
    Ok(pow * theta_real(t.t() * x, q)? / den)
}

/// Binomial coefficient C(n, k) as i64 (zero when k > n).
pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
