//! Multivariable big q-Jacobi polynomials: the c-weighted Jackson measure
//! over ⟨σ_B, ρ_B⟩_n, the theta weights c_{B,j}, closed-form norms and
//! constant terms, and the Askey–Wilson → big q-Jacobi limit.

use num_complex::Complex64 as C64;

use crate::bcpoly::{monomial_w, LaurentPolynomial, Partition};
use crate::error::{Error, Result};
use crate::jackson::{gamma_ratio, gram_schmidt, qj_norm_args, selberg_args, sym_monomial, GammaArg, GammaBase, JacksonDomain, SplitPoint};
use crate::koornwinder::AWParams;
use crate::measures::partial_bilinear;
use crate::qjacobi_little::{delta_qj, limit_constant, limit_scan, LimitRow};
use crate::qseries::{binom, psi_t, qpoch_finite, qpoch_inf, qpoch_ratio, theta_real, Deformation, QBase};
use crate::quadrature::{DiscreteMeasure, MeasureReport};

/// Relative tolerance for the agreement of the two c-weight expressions.
pub const C_WEIGHT_TOL: f64 = 1e-9;

/// Parameters (q, t, a, b, c, d) with (a, b, c, d) ∈ V_B, in n variables.
/// `a` and `b` are complex only on the conjugate branch a = cu, b = −dū.
#[derive(Clone, Copy, Debug)]
pub struct BigParams {
    pub q: QBase,
    pub t: Deformation,
    pub a: C64,
    pub b: C64,
    pub c: f64,
    pub d: f64,
    pub n: usize,
}

impl BigParams {
    pub fn new(q: f64, t: f64, a: f64, b: f64, c: f64, d: f64, n: usize) -> Result<Self> {
        Self::complex(q, t, C64::new(a, 0.0), C64::new(b, 0.0), c, d, n)
    }

    pub fn complex(q: f64, t: f64, a: C64, b: C64, c: f64, d: f64, n: usize) -> Result<Self> {
        let qb = QBase::new(q)?;
        let p = BigParams { q: qb, t: Deformation::new(qb, t)?, a, b, c, d, n };
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if !p.in_domain() {
            return Err(Error::DomainViolation(format!("(a, b, c, d) = ({a}, {b}, {c}, {d}) not in V_B")));
        }
        Ok(p)
    }

    /// Membership in V_B, including the conjugate-pair branch.
    pub fn in_domain(&self) -> bool {
        let (q, c, d) = (self.qv(), self.c, self.d);
        if !(c > 0.0 && d > 0.0) {
            return false;
        }
        if self.a.im == 0.0 && self.b.im == 0.0 {
            let (a, b) = (self.a.re, self.b.re);
            return a > -c / (d * q) && a < 1.0 / q && b > -d / (c * q) && b < 1.0 / q;
        }
        let u = self.a / c;
        u.im != 0.0 && (self.b + d * u.conj()).norm() <= 1e-14 * self.b.norm()
    }

    pub fn qv(&self) -> f64 {
        self.q.get()
    }

    pub fn tv(&self) -> f64 {
        self.t.t()
    }

    pub fn rho(&self) -> Vec<C64> {
        (0..self.n).map(|i| C64::new(self.c * self.tv().powi(i as i32), 0.0)).collect()
    }

    pub fn sigma(&self) -> Vec<C64> {
        (0..self.n).map(|i| C64::new(-self.d * self.tv().powi(i as i32), 0.0)).collect()
    }

    pub fn gamma_base(&self) -> GammaBase {
        GammaBase { q: self.q, t: self.tv(), a: self.a, b: self.b }
    }

    /// The Askey–Wilson parameters t_B(ε).
    pub fn aw_params(&self, eps: f64) -> Result<AWParams> {
        let (q, c, d) = (self.qv(), self.c, self.d);
        let (r1, r2) = ((q * c / d).sqrt(), (q * d / c).sqrt());
        let tt = [C64::new(r1 / eps, 0.0), C64::new(-r2 / eps, 0.0), self.a * (eps * r2), -self.b * (eps * r1)];
        AWParams::with_deformation(self.q, self.t, tt, self.n)
    }
}

/// v_B(x) = (qx/c, −qx/d;q)_∞ / (qax/c, −qbx/d;q)_∞.
pub fn v_big(x: f64, p: &BigParams) -> Result<f64> {
    let q = p.qv();
    let num = [C64::new(q * x / p.c, 0.0), C64::new(-q * x / p.d, 0.0)];
    let den = [p.a * (q * x / p.c), p.b * (-q * x / p.d)];
    qpoch_ratio(&num, &den, p.q).map(|v| v.re).map_err(|e| Error::PoleInWeight(e.to_string()))
}

/// Δ^B(z) = ∏v_B(z_i) δ_qJ(z) at a real point in chain order.
pub fn weight_big_at(z: &[f64], p: &BigParams) -> Result<f64> {
    let mut w = delta_qj(z, p.t, p.q)?;
    for &x in z {
        w *= v_big(x, p)?;
    }
    Ok(w)
}

/// The point (ρ_B q^ν, σ_B q^{ν′}).
pub fn support_point(nu: &[u32], nu_prime: &[u32], p: &BigParams) -> Vec<f64> {
    let (q, t) = (p.qv(), p.tv());
    let first = nu.iter().enumerate().map(|(i, &v)| p.c * t.powi(i as i32) * q.powi(v as i32));
    let second = nu_prime.iter().enumerate().map(|(i, &v)| -p.d * t.powi(i as i32) * q.powi(v as i32));
    first.chain(second).collect()
}

/// Δ^B at a structural support point.
pub fn weight_big(pt: SplitPoint, p: &BigParams) -> Result<f64> {
    weight_big_at(&support_point(pt.nu, pt.nu_prime, p), p)
}

fn theta(x: f64, q: QBase) -> Result<f64> {
    let v = theta_real(x, q).map_err(|e| Error::PoleInTheta(e.to_string()))?;
    if v == 0.0 {
        return Err(Error::PoleInTheta(format!("theta({x}) = 0")));
    }
    Ok(v)
}

fn c2(n: usize) -> i64 {
    binom(n as i64, 2)
}

fn c3(n: usize) -> i64 {
    binom(n as i64, 3)
}

/// c_B = (q;q)_∞ⁿ q^{−2τ²C(n,3)} d^{−2τC(n,2)−n} t^{−C(n,2)} / ∏θ(−t^{1−i}c/d).
pub fn c_b(p: &BigParams) -> Result<f64> {
    let (q, t, n) = (p.qv(), p.tv(), p.n);
    let tau = p.t.tau();
    let qq = qpoch_inf(C64::new(q, 0.0), p.q).re;
    let mut v = qq.powi(n as i32)
        * q.powf(-2.0 * tau * tau * c3(n) as f64)
        * p.d.powf(-2.0 * tau * c2(n) as f64 - n as f64)
        * t.powi(-c2(n) as i32);
    for i in 1..=n as i32 {
        v /= theta(-t.powi(1 - i) * p.c / p.d, p.q)?;
    }
    Ok(v)
}

/// d_{B,j} = ∏_{k<m, k≤j} Ψ_t(−t^{n−m−k+1}d/c).
pub fn d_b(j: usize, p: &BigParams) -> Result<f64> {
    let (n, t) = (p.n as i32, p.tv());
    let mut v = 1.0;
    for k in 1..=j as i32 {
        for m in k + 1..=n {
            v *= psi_t(-t.powi(n - m - k + 1) * p.d / p.c, p.q, p.t).map_err(|e| Error::PoleInTheta(e.to_string()))?;
        }
    }
    Ok(v)
}

/// The closed form of c_{B,j} without Ψ_t factors.
pub fn c_weight_closed(j: usize, p: &BigParams) -> Result<f64> {
    let (q, t, n) = (p.qv(), p.tv(), p.n);
    let (c, d) = (p.c, p.d);
    let tau = p.t.tau();
    let (ji, ni) = (j as i32, n as i32);
    let mut v = qpoch_inf(C64::new(q, 0.0), p.q).re.powi(ni);
    for i in 1..=ji {
        v *= theta(-t.powi(i + ji - ni) * c / d, p.q)?;
        v /= theta(-t.powi(1 - i) * d / c, p.q)? * theta(-t.powi(i) * c / d, p.q)?;
    }
    for i in 1..=ni - ji {
        v /= theta(-t.powi(1 - i) * c / d, p.q)?;
    }
    let qexp = ((n - j) as i64 * c2(j) + c3(j) + c3(n - j)) as f64;
    v *= q.powf(-2.0 * tau * tau * qexp) * t.powi(-(c2(j) + c2(n - j)) as i32);
    v *= c.powf(-2.0 * tau * (j * (n - j)) as f64 - 2.0 * tau * c2(j) as f64 - j as f64);
    v *= d.powf(-2.0 * tau * c2(n - j) as f64 + j as f64 - n as f64);
    Ok(v)
}

/// c_{B,0..n}, computed both as c_B d_{B,j} and in closed form; the closed
/// form is returned after checking agreement to [`C_WEIGHT_TOL`].
pub fn c_weights(p: &BigParams) -> Result<Vec<f64>> {
    let cb = c_b(p)?;
    (0..=p.n)
        .map(|j| {
            let direct = cb * d_b(j, p)?;
            let closed = c_weight_closed(j, p)?;
            let rel = (direct - closed).abs() / closed.abs();
            if rel > C_WEIGHT_TOL {
                return Err(Error::FormMismatch(format!("c_B,{j}: {direct:e} vs {closed:e} (rel {rel:e})")));
            }
            Ok(closed)
        })
        .collect()
}

/// c_B for t = q^k: q^{C(k,2)C(n,2)−k²C(n,3)}(c+d)ⁿ / ((−d/c,−c/d;q)_∞ⁿ(cd)^{n+C(n,2)k}).
pub fn c_b_integer(p: &BigParams, k: u32) -> f64 {
    let (q, n, c, d) = (p.qv(), p.n, p.c, p.d);
    let k = k as i64;
    let e = binom(k, 2) * c2(n) - k * k * c3(n);
    let pp = qpoch_inf(C64::new(-d / c, 0.0), p.q).re * qpoch_inf(C64::new(-c / d, 0.0), p.q).re;
    q.powi(e as i32) * (c + d).powi(n as i32) / (pp.powi(n as i32) * (c * d).powi(n as i32 + (c2(n) * k) as i32))
}

fn domain(p: &BigParams) -> Result<JacksonDomain> {
    let c = c_weights(p)?.into_iter().map(|x| C64::new(x, 0.0)).collect();
    Ok(JacksonDomain { xi: p.rho(), eta: p.sigma(), c, q: p.q })
}

/// The c-weighted Jackson measure f ↦ ∬ f Δ^B d_q^{c_B}z, adaptive in depth.
pub fn big_measure(p: &BigParams, top: &Partition, tol: f64) -> Result<(DiscreteMeasure, u32, f64)> {
    let w = |pt: SplitPoint, _: &[C64]| weight_big(pt, p).map(|x| C64::new(x, 0.0));
    let m = sym_monomial(top);
    let probe = |meas: &DiscreteMeasure| vec![meas.total_mass(), meas.bilinear(&m, &m)];
    domain(p)?.adaptive(tol, &w, &probe)
}

/// c-weighted Jackson integral of an arbitrary evaluator (no Δ^B).
pub fn weighted_jackson<F>(f: F, p: &BigParams, tol: f64) -> Result<MeasureReport>
where
    F: Fn(&[C64]) -> C64,
{
    let w = |_: SplitPoint, z: &[C64]| Ok(f(z));
    let (meas, depth, tail) = domain(p)?.adaptive(tol, &w, &|m: &DiscreteMeasure| vec![m.total_mass()])?;
    let value = meas.total_mass();
    Ok(MeasureReport {
        value,
        abs_error_estimate: tail * value.norm(),
        quadrature_points_per_axis: 0,
        discrete_points_used: meas.len(),
        truncation_depth: depth as usize,
    })
}

/// ⟨f, g⟩_B.
pub fn bilinear_big(f: &LaurentPolynomial, g: &LaurentPolynomial, p: &BigParams, tol: f64) -> Result<MeasureReport> {
    let w = |pt: SplitPoint, _: &[C64]| weight_big(pt, p).map(|x| C64::new(x, 0.0));
    let probe = |meas: &DiscreteMeasure| vec![meas.bilinear(f, g), meas.total_mass()];
    let (meas, depth, tail) = domain(p)?.adaptive(tol, &w, &probe)?;
    let value = meas.bilinear(f, g);
    Ok(MeasureReport {
        value,
        abs_error_estimate: tail * value.norm().max(meas.total_mass().norm()),
        quadrature_points_per_axis: 0,
        discrete_points_used: meas.len(),
        truncation_depth: depth as usize,
    })
}

/// P^B_λ = m̃_λ + lower terms, orthogonal to every m̃_μ with μ < λ.
pub fn big_polynomial(lambda: &Partition, p: &BigParams, tol: f64) -> Result<LaurentPolynomial> {
    let (meas, _, _) = big_measure(p, lambda, tol)?;
    Ok(gram_schmidt(lambda, &meas)?.2)
}

/// 𝒩^B(λ).
pub fn norm_big(lambda: &Partition, p: &BigParams) -> Result<f64> {
    let (q, t, n) = (p.qv(), p.tv(), p.n);
    let (c, d) = (p.c, p.d);
    let mut pre = C64::new((c * d).powi(lambda.size() as i32), 0.0);
    let mut den = Vec::new();
    for (i, &l) in lambda.parts().iter().enumerate() {
        let l = l as i32;
        let s = (n - 1 - i) as i32;
        pre *= q.powf(0.5 * ((l - 1) * l) as f64) * t.powi(s * l);
        let base = q.powi(l + 1) * t.powi(s);
        den.push(-p.b * (base * c / d));
        den.push(-p.a * (base * d / c));
    }
    let (num_g, den_g) = qj_norm_args(lambda);
    let g = gamma_ratio(&num_g, &den_g, &p.gamma_base())?;
    let inv = qpoch_ratio(&[], &den, p.q).map_err(|e| Error::PoleInGamma(e.to_string()))?;
    Ok((pre * g * inv).re)
}

/// ⟨1, 1⟩_B as the Γ_q/Pochhammer product.
pub fn selberg_big(p: &BigParams) -> Result<f64> {
    let (q, t, c, d) = (p.qv(), p.tv(), p.c, p.d);
    let (num, den) = selberg_args(p.n);
    let g = gamma_ratio(&num, &den, &p.gamma_base())?;
    let extra: Vec<C64> = (0..p.n as i32)
        .flat_map(|j| {
            let base = q * t.powi(j);
            [-p.a * (base * d / c), -p.b * (base * c / d)]
        })
        .collect();
    let inv = qpoch_ratio(&[], &extra, p.q).map_err(|e| Error::PoleInGamma(e.to_string()))?;
    Ok((g * inv).re)
}

/// Right-hand side of the Askey–Evans evaluation at t = q^k, assembled from
/// its own Γ_q arguments (Γ_q(ik+1), Γ_q(k+1)).
pub fn askey_evans_rhs(p: &BigParams, k: u32) -> Result<f64> {
    check_integer_t(p, k)?;
    let (q, n, c, d) = (p.qv(), p.n as i32, p.c, p.d);
    let ki = k as i32;
    let g = GammaArg::new;
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut extra = Vec::new();
    let mut scalar = C64::new(q.powi((ki * ki) as i32 * c3(p.n) as i32 - (binom(k as i64, 2) * c2(p.n)) as i32), 0.0);
    let pp = qpoch_inf(C64::new(-d / c, 0.0), p.q).re * qpoch_inf(C64::new(-c / d, 0.0), p.q).re;
    for i in 1..=n {
        num.extend([g(1, i - 1, 1, 0), g(1, i - 1, 0, 1), g(1, i, 0, 0)]);
        den.extend([g(2, n + i - 2, 1, 1), g(1, 1, 0, 0)]);
        let base = q.powi(1 + (i - 1) * ki);
        extra.push(-p.a * (base * d / c));
        extra.push(-p.b * (base * c / d));
        scalar *= pp * (c * d).powi(1 + (i - 1) * ki) / (c + d);
    }
    let gr = gamma_ratio(&num, &den, &p.gamma_base())?;
    let inv = qpoch_ratio(&[], &extra, p.q).map_err(|e| Error::PoleInGamma(e.to_string()))?;
    Ok((scalar * gr * inv).re)
}

fn check_integer_t(p: &BigParams, k: u32) -> Result<()> {
    if p.t.integer_power() != Some(k) {
        return Err(Error::InvalidParameter(format!("t is not q^{k}")));
    }
    Ok(())
}

/// ∏_{i=1}^n (1−q^{ik})/(1−q^k).
pub fn poincare_factor(n: usize, q: f64, k: u32) -> f64 {
    (1..=n as i32).map(|i| (1.0 - q.powi(i * k as i32)) / (1.0 - q.powi(k as i32))).product()
}

/// The Askey–Evans constant obtained from the general constant term:
/// ⟨1,1⟩_B / c_B times the Poincaré factor of the symmetrization.
pub fn askey_evans_from_selberg(p: &BigParams, k: u32) -> Result<f64> {
    check_integer_t(p, k)?;
    Ok(selberg_big(p)? / c_b_integer(p, k) * poincare_factor(p.n, p.qv(), k))
}

/// Brute-force box sum ∫_{−d}^{c}…∫_{−d}^{c} ∏_{i<j} z_i^{2k}(q^{1−k}z_j/z_i;q)_{2k}
/// ∏ v_B(z_i) d_qz over all lattice points with exponents below `depth`.
pub fn askey_evans_box(p: &BigParams, k: u32, depth: u32) -> Result<f64> {
    check_integer_t(p, k)?;
    let (q, n) = (p.qv(), p.n);
    let pts: Vec<(f64, f64)> = (0..depth as i32)
        .flat_map(|m| {
            let s = q.powi(m);
            [(p.c * s, (1.0 - q) * p.c * s), (-p.d * s, (1.0 - q) * p.d * s)]
        })
        .map(|(x, w)| v_big(x, p).map(|v| (x, w * v)))
        .collect::<Result<_>>()?;
    let npts = pts.len();
    let total = npts.pow(n as u32);
    let qk = q.powi(1 - k as i32);
    let mut sum = 0.0;
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        let mut term = 1.0;
        for i in 0..n {
            term *= pts[idx[i]].1;
        }
        'pairs: for i in 0..n {
            let zi = pts[idx[i]].0;
            for j in i + 1..n {
                let zj = pts[idx[j]].0;
                let f = qpoch_finite(C64::new(qk * zj / zi, 0.0), p.q, 2 * k).re;
                term *= zi.powi(2 * k as i32) * f;
                if term == 0.0 {
                    break 'pairs;
                }
            }
        }
        sum += term;
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < npts {
                break;
            }
            *slot = 0;
        }
    }
    Ok(sum)
}

/// c_{B,j}Δ^B(z⁺(L)) / (c_{B,j−1}Δ^B(z⁻(L))) with z⁺ = (ρ_Bq^{(λ,L)}, σ_Bq^μ)
/// and z⁻ = (ρ_Bq^λ, σ_Bq^{(μ,L)}); λ has j−1 parts, μ has n−j.
pub fn asymptotic_match(j: usize, lambda: &[u32], mu: &[u32], p: &BigParams, l: u32) -> Result<f64> {
    if j == 0 || j > p.n || lambda.len() != j - 1 || mu.len() != p.n - j {
        return Err(Error::InvalidParameter("need 1 ≤ j ≤ n, |λ| = j−1 parts, |μ| = n−j parts".into()));
    }
    let cw = c_weights(p)?;
    let mut lp = lambda.to_vec();
    lp.push(l);
    let mut mp = mu.to_vec();
    mp.push(l);
    let plus = cw[j] * weight_big_at(&support_point(&lp, mu, p), p)?;
    let minus = cw[j - 1] * weight_big_at(&support_point(lambda, &mp, p), p)?;
    Ok(plus / minus)
}

/// Distance table for (ε_k(cd/q)^{½})^{|λ|} P_λ((q/cd)^{½}ε_k^{−1}z; t_B(ε_k); t) against P^B_λ.
pub fn limit_scan_big(lambda: &Partition, p: &BigParams, eps0: f64, kmax: u32) -> Result<Vec<LimitRow>> {
    let target = big_polynomial(lambda, p, 1e-15)?;
    let q = p.qv();
    let s = (p.c * p.d / q).sqrt();
    Ok(limit_scan(lambda, &target, q, eps0, kmax, |e| p.aw_params(e), |e| e * s))
}

/// (∏(−ε⁻²qt^{i−1};q)_∞ (ε(cd/q)^{½})^{|λ|+|μ|} ⟨m_λ,m_μ⟩ at t_B(ε),
/// 2ⁿn!(q;q)_∞^{−2n}(1−q)^{−n} ⟨m̃_λ,m̃_μ⟩_B).
pub fn limit_measure_big(lambda: &Partition, mu: &Partition, p: &BigParams, eps: f64, m: usize) -> Result<(f64, f64)> {
    let (q, t) = (p.qv(), p.tv());
    let ap = p.aw_params(eps)?;
    let aw = partial_bilinear(&monomial_w(lambda), &monomial_w(mu), &ap, m)?.value.re;
    let mut renorm = (eps * (p.c * p.d / q).sqrt()).powi((lambda.size() + mu.size()) as i32);
    for i in 0..p.n {
        renorm *= qpoch_inf(C64::new(-q * t.powi(i as i32) / (eps * eps), 0.0), p.q).re;
    }
    let big = bilinear_big(&sym_monomial(lambda), &sym_monomial(mu), p, 1e-14)?.value.re;
    Ok((renorm * aw, limit_constant(p.n, p.q) * big))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qjacobi_little::eventually_decreasing;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn domain_checks() {
        assert!(BigParams::new(0.5, 0.3, 0.3, 0.2, 1.0, 0.7, 2).is_ok());
        assert!(BigParams::new(0.5, 0.3, 2.5, 0.2, 1.0, 0.7, 2).is_err());
        assert!(BigParams::new(0.5, 0.3, 0.3, 0.2, -1.0, 0.7, 2).is_err());
        let u = C64::new(0.3, 0.4);
        assert!(BigParams::complex(0.5, 0.3, u * 1.0, -u.conj() * 0.7, 1.0, 0.7, 2).is_ok());
        assert!(BigParams::complex(0.5, 0.3, u, u, 1.0, 0.7, 2).is_err());
    }

    #[test]
    fn one_variable_weight_and_measure() {
        let p = BigParams::new(0.5, 0.3, 0.3, 0.2, 1.0, 0.7, 1).unwrap();
        let qb = p.q;
        let qp = |x: f64| qpoch_inf(C64::new(x, 0.0), qb).re;
        let want = qp(0.5) * qp(-0.5 / 0.7) / (qp(0.15) * qp(-0.5 * 0.2 / 0.7));
        assert!(rel(v_big(1.0, &p).unwrap(), want) < 1e-14);
        let cw = c_weights(&p).unwrap();
        assert!(rel(cw[0], cw[1]) < 1e-14);
        // with c = (1, 1): ∫_{−d}^{c} d_qx = c + d
        let one = BigParams { n: 1, ..p };
        let w = |_: SplitPoint, _: &[C64]| Ok(C64::new(1.0, 0.0));
        let dom = JacksonDomain { xi: one.rho(), eta: one.sigma(), c: vec![C64::new(1.0, 0.0); 2], q: one.q };
        let (m, _, _) = dom.adaptive(1e-15, &w, &|m: &DiscreteMeasure| vec![m.total_mass()]).unwrap();
        assert!((m.total_mass().re - 1.7).abs() < 1e-13);
    }

    #[test]
    fn c_weight_forms_agree() {
        for (t, c, d, n) in [(0.3, 1.0, 0.7, 2), (0.55, 0.4, 1.9, 3), (0.8, 2.0, 0.3, 3)] {
            let p = BigParams::new(0.5, t, 0.1, 0.1, c, d, n).unwrap();
            let cw = c_weights(&p).unwrap();
            assert!(cw.iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn c_weights_at_integer_power() {
        for k in 1..=3u32 {
            let p = BigParams::new(0.5, 0.5f64.powi(k as i32), 0.1, 0.1, 1.3, 0.6, 3).unwrap();
            for j in 0..=3 {
                assert!((d_b(j, &p).unwrap() - 1.0).abs() < 1e-12, "k={k} j={j}");
            }
            assert!(rel(c_b(&p).unwrap(), c_b_integer(&p, k)) < 1e-12);
        }
    }

    #[test]
    fn psi_quasi_constancy() {
        let p = BigParams::new(0.5, 0.3, 0.1, 0.1, 1.3, 0.6, 3).unwrap();
        let pq = BigParams { d: 0.6 * 0.5, ..p };
        for j in 0..=3 {
            assert!(rel(d_b(j, &p).unwrap(), d_b(j, &pq).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn constant_term_and_norms() {
        let p = BigParams::new(0.5, 0.3, 0.3, 0.2, 1.0, 0.7, 1).unwrap();
        let one = LaurentPolynomial::one(1);
        let m0 = bilinear_big(&one, &one, &p, 1e-15).unwrap().value.re;
        assert!(rel(m0, selberg_big(&p).unwrap()) < 1e-12);
        assert!(rel(norm_big(&part(&[0]), &p).unwrap(), m0) < 1e-12);
        let p1 = big_polynomial(&part(&[1]), &p, 1e-15).unwrap();
        let nn = bilinear_big(&p1, &p1, &p, 1e-15).unwrap().value.re;
        assert!(rel(nn, norm_big(&part(&[1]), &p).unwrap()) < 1e-10);

        let p2 = BigParams { n: 2, ..p };
        let one = LaurentPolynomial::one(2);
        let m0 = bilinear_big(&one, &one, &p2, 1e-15).unwrap().value.re;
        assert!(rel(m0, selberg_big(&p2).unwrap()) < 1e-9, "{m0}");
    }

    #[test]
    fn selberg_symmetry_under_swap() {
        let p = BigParams::new(0.5, 0.3, 0.3, 0.2, 1.0, 0.7, 2).unwrap();
        let s = BigParams { a: p.b, b: p.a, c: p.d, d: p.c, ..p };
        assert!(rel(selberg_big(&p).unwrap(), selberg_big(&s).unwrap()) < 1e-13);
    }

    #[test]
    fn askey_evans() {
        for (n, k) in [(1usize, 1u32), (2, 1), (2, 2)] {
            let p = BigParams::new(0.5, 0.5f64.powi(k as i32), 0.3, 0.2, 1.0, 0.7, n).unwrap();
            let rhs = askey_evans_rhs(&p, k).unwrap();
            assert!(rel(askey_evans_from_selberg(&p, k).unwrap(), rhs) < 1e-12);
            let lhs = askey_evans_box(&p, k, 70).unwrap();
            assert!(rel(lhs, rhs) < 1e-10, "n={n} k={k}: {lhs} {rhs}");
        }
    }

    #[test]
    fn asymptotic_matching() {
        let p = BigParams::new(0.5, 0.3, 0.3, 0.2, 1.0, 0.7, 1).unwrap();
        assert!((asymptotic_match(1, &[], &[], &p, 25).unwrap() - 1.0).abs() < 1e-6);
        let p = BigParams { n: 2, ..p };
        let r = asymptotic_match(1, &[], &[0], &p, 25).unwrap();
        assert!((r - 1.0).abs() < 1e-5, "{r}");
        let r = asymptotic_match(2, &[1], &[], &p, 25).unwrap();
        assert!((r - 1.0).abs() < 1e-5, "{r}");
    }

    #[test]
    fn limit_scan_one_variable() {
        let p = BigParams::new(0.5, 0.5f64.powf(0.3), 0.3, 0.2, 1.0, 0.7, 1).unwrap();
        let rows = limit_scan_big(&part(&[1]), &p, 1.0, 11).unwrap();
        assert!(rows.last().unwrap().distance.unwrap() < 1e-4, "{rows:?}");
        assert!(eventually_decreasing(&rows, 5, 1e-9));
    }

    #[test]
    fn measure_weights_positive() {
        // every split contributes positive mass, including negative a and b
        for (a, b, c, d, n) in [(0.3, 0.2, 1.0, 0.7, 2), (-0.5, -0.6, 1.0, 0.7, 2), (0.9, -0.3, 0.4, 1.9, 3)] {
            let p = BigParams::new(0.5, 0.3, a, b, c, d, n).unwrap();
            let top = Partition::zero(n);
            let (m, _, _) = big_measure(&p, &top, 1e-12).unwrap();
            assert!(m.weights().iter().all(|w| w.re > 0.0 && w.im == 0.0), "a={a} b={b}");
        }
    }
}
