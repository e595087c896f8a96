//! Multivariable little q-Jacobi polynomials: the Jackson measure over
//! ⟨ρ_L⟩_n, Gram–Schmidt construction, closed-form norms and the
//! Askey–Wilson → little q-Jacobi limit.

use num_complex::Complex64 as C64;

use crate::askey_wilson::aw_polynomial;
use crate::bcpoly::{monomial_w, LaurentPolynomial, Partition};
use crate::error::{Error, Result};
use crate::jackson::{gamma_ratio, gram_schmidt, qj_norm_args, selberg_args, sym_monomial, GammaBase, JacksonDomain, SplitPoint};
use crate::koornwinder::AWParams;
use crate::measures::partial_bilinear;
use crate::qseries::{binom, qpoch_inf, qpoch_ratio, Deformation, QBase};
use crate::quadrature::{DiscreteMeasure, MeasureReport};

/// Parameters (q, t, a, b) with (a, b) ∈ V_L, in n variables.
#[derive(Clone, Copy, Debug)]
pub struct LittleParams {
    pub q: QBase,
    pub t: Deformation,
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl LittleParams {
    pub fn new(q: f64, t: f64, a: f64, b: f64, n: usize) -> Result<Self> {
        let qb = QBase::new(q)?;
        let p = LittleParams { q: qb, t: Deformation::new(qb, t)?, a, b, n };
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if !(a > 0.0 && a < 1.0 / q && b < 1.0 / q) {
            return Err(Error::DomainViolation(format!("(a, b) = ({a}, {b}) not in V_L")));
        }
        Ok(p)
    }

    pub fn qv(&self) -> f64 {
        self.q.get()
    }

    pub fn tv(&self) -> f64 {
        self.t.t()
    }

    /// α with q^α = a.
    pub fn alpha(&self) -> f64 {
        self.a.ln() / self.qv().ln()
    }

    pub fn rho(&self) -> Vec<C64> {
        (0..self.n).map(|i| C64::new(self.tv().powi(i as i32), 0.0)).collect()
    }

    pub fn gamma_base(&self) -> GammaBase {
        GammaBase { q: self.q, t: self.tv(), a: C64::new(self.a, 0.0), b: C64::new(self.b, 0.0) }
    }

    /// The Askey–Wilson parameters t_L(ε).
    pub fn aw_params(&self, eps: f64) -> Result<AWParams> {
        let s = self.qv().sqrt();
        AWParams::real(self.qv(), self.tv(), [s / eps, -self.a * s, eps * self.b * s, -s], self.n)
    }
}

/// δ_qJ(z) = ∏_{i<j} |z_i − z_j| |z_i|^{2τ−1} (qz_j/(tz_i);q)_∞ / (tz_j/z_i;q)_∞
/// for real z.
pub fn delta_qj(z: &[f64], t: Deformation, q: QBase) -> Result<f64> {
    let (tv, tau) = (t.t(), t.tau());
    let mut r = 1.0;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let x = z[j] / z[i];
            let ratio = qpoch_ratio(&[C64::new(q.get() * x / tv, 0.0)], &[C64::new(tv * x, 0.0)], q)
                .map_err(|e| Error::PoleInWeight(e.to_string()))?;
            r *= (z[i] - z[j]).abs() * z[i].abs().powf(2.0 * tau - 1.0) * ratio.re;
        }
    }
    Ok(r)
}

/// Δ^L at ρ_L q^ν. The power x^α at x = t^{i−1}q^{ν_i} is assembled as
/// a^{ν_i}(t^α)^{i−1}.
pub fn weight_little(nu: &[u32], p: &LittleParams) -> Result<f64> {
    let n = nu.len();
    let (q, t) = (p.qv(), p.tv());
    let t_alpha = (p.alpha() * t.ln()).exp();
    let pairs = binom(n as i64, 2) as i32;
    let tau = p.t.tau();
    let mut w = q.powf(-2.0 * tau * tau * binom(n as i64, 3) as f64) * (t_alpha * t).powi(-pairs);
    let z: Vec<f64> = nu.iter().enumerate().map(|(i, &v)| t.powi(i as i32) * q.powi(v as i32)).collect();
    for (i, (&x, &v)) in z.iter().zip(nu).enumerate() {
        let ratio = qpoch_ratio(&[C64::new(q * x, 0.0)], &[C64::new(q * p.b * x, 0.0)], p.q)
            .map_err(|e| Error::PoleInWeight(e.to_string()))?;
        w *= ratio.re * p.a.powi(v as i32) * t_alpha.powi(i as i32);
    }
    Ok(w * delta_qj(&z, p.t, p.q)?)
}

fn domain(p: &LittleParams) -> JacksonDomain {
    JacksonDomain::plain(p.rho(), p.q)
}

/// The Jackson measure f ↦ ∬ f Δ^L d_qz, built adaptively until the tails of
/// the total mass and of ⟨m̃_top, m̃_top⟩ are below `tol`.
pub fn little_measure(p: &LittleParams, top: &Partition, tol: f64) -> Result<(DiscreteMeasure, u32, f64)> {
    let w = |pt: SplitPoint, _: &[C64]| weight_little(pt.nu, p).map(|x| C64::new(x, 0.0));
    let m = sym_monomial(top);
    let probe = |meas: &DiscreteMeasure| vec![meas.total_mass(), meas.bilinear(&m, &m)];
    domain(p).adaptive(tol, &w, &probe)
}

/// ⟨f, g⟩_L.
pub fn bilinear_little(f: &LaurentPolynomial, g: &LaurentPolynomial, p: &LittleParams, tol: f64) -> Result<MeasureReport> {
    let w = |pt: SplitPoint, _: &[C64]| weight_little(pt.nu, p).map(|x| C64::new(x, 0.0));
    let probe = |meas: &DiscreteMeasure| vec![meas.bilinear(f, g), meas.total_mass()];
    let (meas, depth, tail) = domain(p).adaptive(tol, &w, &probe)?;
    let value = meas.bilinear(f, g);
    Ok(MeasureReport {
        value,
        abs_error_estimate: tail * value.norm().max(meas.total_mass().norm()),
        quadrature_points_per_axis: 0,
        discrete_points_used: meas.len(),
        truncation_depth: depth as usize,
    })
}

/// P^L_λ = m̃_λ + lower terms, orthogonal to every m̃_μ with μ < λ.
pub fn little_polynomial(lambda: &Partition, p: &LittleParams, tol: f64) -> Result<LaurentPolynomial> {
    let (meas, _, _) = little_measure(p, lambda, tol)?;
    Ok(gram_schmidt(lambda, &meas)?.2)
}

/// 𝒩^L(λ) = q^{Σ(λ_i+α+2(n−i)τ)λ_i} 𝒩⁺_qJ(λ) 𝒩⁻_qJ(λ).
pub fn norm_little(lambda: &Partition, p: &LittleParams) -> Result<f64> {
    let n = lambda.len();
    let (q, t) = (p.qv(), p.tv());
    let mut pre = 1.0;
    for (i, &l) in lambda.parts().iter().enumerate() {
        let l = l as i32;
        pre *= q.powi(l * l) * p.a.powi(l) * t.powi(2 * (n - 1 - i) as i32 * l);
    }
    let (num, den) = qj_norm_args(lambda);
    Ok(pre * gamma_ratio(&num, &den, &p.gamma_base())?.re)
}

/// ⟨1, 1⟩_L as the q-Selberg Γ_q product.
pub fn selberg_little(p: &LittleParams) -> Result<f64> {
    let (num, den) = selberg_args(p.n);
    Ok(gamma_ratio(&num, &den, &p.gamma_base())?.re)
}

/// One row of a limit scan.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitRow {
    pub k: u32,
    pub eps: f64,
    /// Max-coefficient distance to the limit polynomial; `None` when the
    /// Askey–Wilson polynomial could not be built at this ε.
    pub distance: Option<f64>,
    pub note: Option<String>,
}

/// u^{|λ|} P(z/u) for a polynomial of degree λ.
pub fn rescale_for_limit(poly: &LaurentPolynomial, degree: u32, u: f64) -> LaurentPolynomial {
    let mut out = LaurentPolynomial::zero(poly.nvars());
    for (e, c) in poly.terms() {
        let s: i32 = e.iter().sum();
        out.add_term(e.clone(), c * u.powi(degree as i32 - s));
    }
    out
}

/// max over all exponents of |coeff_f − coeff_g|.
pub fn coefficient_distance(f: &LaurentPolynomial, g: &LaurentPolynomial) -> f64 {
    let a = f.terms().map(|(e, c)| (c - g.coeff(e)).norm());
    let b = g.terms().map(|(e, c)| (c - f.coeff(e)).norm());
    a.chain(b).fold(0.0, f64::max)
}

/// Generic scan along ε_k = ε₀q^k: at each k the Askey–Wilson polynomial at
/// `params(ε_k)` is rescaled by `u(ε_k)` and compared with `target`.
pub fn limit_scan<F, U>(lambda: &Partition, target: &LaurentPolynomial, q: f64, eps0: f64, kmax: u32, params: F, u: U) -> Vec<LimitRow>
where
    F: Fn(f64) -> Result<AWParams>,
    U: Fn(f64) -> f64,
{
    (0..=kmax)
        .map(|k| {
            let eps = eps0 * q.powi(k as i32);
            let built = params(eps).and_then(|ap| aw_polynomial(lambda, &ap));
            match built {
                Ok(pl) => {
                    let scaled = rescale_for_limit(&pl.to_laurent(), lambda.size(), u(eps));
                    LimitRow { k, eps, distance: Some(coefficient_distance(&scaled, target)), note: None }
                }
                Err(e) => LimitRow { k, eps, distance: None, note: Some(e.to_string()) },
            }
        })
        .collect()
}

/// True when the last `tail` recorded distances are non-increasing, or have
/// already reached `floor`.
pub fn eventually_decreasing(rows: &[LimitRow], tail: usize, floor: f64) -> bool {
    let d: Vec<f64> = rows.iter().filter_map(|r| r.distance).collect();
    if d.len() < tail.max(2) {
        return false;
    }
    d[d.len() - tail..].windows(2).all(|w| w[1] <= w[0] || w[1] <= floor)
}

/// Distance table for (q^{−½}ε_k)^{|λ|} P_λ(q^{½}ε_k^{−1}z; t_L(ε_k); t) against P^L_λ.
pub fn limit_scan_little(lambda: &Partition, p: &LittleParams, eps0: f64, kmax: u32) -> Result<Vec<LimitRow>> {
    let target = little_polynomial(lambda, p, 1e-15)?;
    let q = p.qv();
    Ok(limit_scan(lambda, &target, q, eps0, kmax, |e| p.aw_params(e), |e| e / q.sqrt()))
}

/// 2ⁿn!(q;q)_∞^{−2n}(1−q)^{−n}.
pub fn limit_constant(n: usize, q: QBase) -> f64 {
    let fact: f64 = (1..=n).map(|i| i as f64).product();
    let qq = qpoch_inf(C64::new(q.get(), 0.0), q).re;
    2f64.powi(n as i32) * fact * qq.powi(-2 * n as i32) * (1.0 - q.get()).powi(-(n as i32))
}

/// The renormalized Askey–Wilson form at t_L(ε) against the little form:
/// returns (∏(−ε⁻¹qt^{i−1}, −ε⁻¹qat^{i−1};q)_∞ (εq^{−½})^{|λ|+|μ|} ⟨m_λ,m_μ⟩,
/// 2ⁿn!(q;q)_∞^{−2n}(1−q)^{−n} ⟨m̃_λ,m̃_μ⟩_L).
pub fn limit_measure_little(lambda: &Partition, mu: &Partition, p: &LittleParams, eps: f64, m: usize) -> Result<(f64, f64)> {
    let (q, t) = (p.qv(), p.tv());
    let ap = p.aw_params(eps)?;
    let aw = partial_bilinear(&monomial_w(lambda), &monomial_w(mu), &ap, m)?.value.re;
    let mut renorm = (eps / q.sqrt()).powi((lambda.size() + mu.size()) as i32);
    for i in 0..p.n {
        let ti = t.powi(i as i32);
        renorm *= qpoch_inf(C64::new(-q * ti / eps, 0.0), p.q).re * qpoch_inf(C64::new(-q * p.a * ti / eps, 0.0), p.q).re;
    }
    let little = bilinear_little(&sym_monomial(lambda), &sym_monomial(mu), p, 1e-14)?.value.re;
    Ok((renorm * aw, limit_constant(p.n, p.q) * little))
}
