//! Jackson multisums over ⟨ξ⟩_n and the c-weighted sums over ⟨η,ξ⟩_n,
//! Γ_q products with structurally assembled q-powers, and Gram–Schmidt for
//! S-invariant polynomials.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::bcpoly::{monomial_s, partitions_dominated_by, AscendingIndex, LaurentPolynomial, Partition};
use crate::error::{Error, Result};
use crate::qseries::{qpoch_ratio, QBase};
use crate::quadrature::{DiscreteMeasure, MeasureReport};

/// Initial depth of the adaptive shell summation.
pub const START_DEPTH: u32 = 16;
/// Maximal shell depth before giving up.
pub const DEPTH_CAP: u32 = 400;

/// A point of ⟨η,ξ⟩_n: j coordinates ξ_lq^{ν_l} followed by n−j
/// coordinates η_mq^{ν′_m}.
#[derive(Clone, Copy, Debug)]
pub struct SplitPoint<'a> {
    pub j: usize,
    pub nu: &'a [u32],
    pub nu_prime: &'a [u32],
}

/// Chain description for a c-weighted Jackson sum. A plain multisum over
/// ⟨ξ⟩_n has `eta` empty and `c = [0, …, 0, 1]`.
#[derive(Clone, Debug)]
pub struct JacksonDomain {
    pub xi: Vec<C64>,
    pub eta: Vec<C64>,
    pub c: Vec<C64>,
    pub q: QBase,
}

impl JacksonDomain {
    pub fn plain(xi: Vec<C64>, q: QBase) -> Self {
        let n = xi.len();
        let mut c = vec![C64::new(0.0, 0.0); n + 1];
        c[n] = C64::new(1.0, 0.0);
        JacksonDomain { xi, eta: Vec::new(), c, q }
    }

    pub fn nvars(&self) -> usize {
        self.xi.len().max(self.eta.len())
    }

    /// Nodes with max(ν_j, ν′_{n−j}) in `lo..=hi`; the weight returned by
    /// `w` multiplies the Jackson factor (1−q)ⁿ c_j ∏ξ_lq^{ν_l} ∏(−η_mq^{ν′_m}).
    pub fn shells<W>(&self, lo: u32, hi: u32, w: &W) -> Result<DiscreteMeasure>
    where
        W: Fn(SplitPoint, &[C64]) -> Result<C64>,
    {
        let n = self.nvars();
        let q = self.q.get();
        let scale = (1.0 - q).powi(n as i32);
        let mut meas = DiscreteMeasure::new(n);
        let mut node = vec![C64::new(0.0, 0.0); n];
        for j in 0..=n {
            if self.c[j] == C64::new(0.0, 0.0) {
                continue;
            }
            let first = AscendingIndex::all_bounded(j, hi);
            let second = AscendingIndex::all_bounded(n - j, hi);
            for a in &first {
                for b in &second {
                    let top = a.parts().last().copied().unwrap_or(0).max(b.parts().last().copied().unwrap_or(0));
                    if top < lo || top > hi {
                        continue;
                    }
                    let mut jac = self.c[j] * scale;
                    for (l, &v) in a.parts().iter().enumerate() {
                        node[l] = self.xi[l] * q.powi(v as i32);
                        jac *= node[l];
                    }
                    for (m, &v) in b.parts().iter().enumerate() {
                        node[j + m] = self.eta[m] * q.powi(v as i32);
                        jac *= -node[j + m];
                    }
                    let pt = SplitPoint { j, nu: a.parts(), nu_prime: b.parts() };
                    let wt = jac * w(pt, &node)?;
                    meas.push(&node, wt);
                }
            }
        }
        Ok(meas)
    }

    /// Builds the measure with depth doubled from [`START_DEPTH`] until the
    /// outermost shell, continued geometrically, is below `tol` relative to
    /// every probe value. Returns the measure, the depth reached and the
    /// largest relative tail estimate.
    pub fn adaptive<W, P>(&self, tol: f64, w: &W, probe: &P) -> Result<(DiscreteMeasure, u32, f64)>
    where
        W: Fn(SplitPoint, &[C64]) -> Result<C64>,
        P: Fn(&DiscreteMeasure) -> Vec<C64>,
    {
        let q = self.q.get();
        let mut meas = self.shells(0, START_DEPTH, w)?;
        let mut depth = START_DEPTH;
        loop {
            let last = self.shells(depth, depth, w)?;
            let tot = probe(&meas);
            let sh = probe(&last);
            let tail = tot
                .iter()
                .zip(&sh)
                .map(|(t, s)| s.norm() / (1.0 - q) / t.norm().max(f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            if tail <= tol {
                return Ok((meas, depth, tail));
            }
            if depth >= DEPTH_CAP {
                return Err(Error::SlowConvergence(depth as usize));
            }
            let next = (2 * depth).min(DEPTH_CAP);
            meas.append_scaled(&self.shells(depth + 1, next, w)?, C64::new(1.0, 0.0));
            depth = next;
        }
    }
}

/// Adaptive Jackson multisum of `f` over ⟨ξ⟩_n.
pub fn jackson_multisum<F>(f: F, xi: &[C64], q: QBase, tol: f64) -> Result<MeasureReport>
where
    F: Fn(&[C64]) -> C64,
{
    let dom = JacksonDomain::plain(xi.to_vec(), q);
    let w = |_: SplitPoint, z: &[C64]| Ok(f(z));
    let probe = |m: &DiscreteMeasure| vec![m.total_mass()];
    let (meas, depth, tail) = dom.adaptive(tol, &w, &probe)?;
    let value = meas.total_mass();
    Ok(MeasureReport {
        value,
        abs_error_estimate: tail * value.norm(),
        quadrature_points_per_axis: 0,
        discrete_points_used: meas.len(),
        truncation_depth: depth as usize,
    })
}

/// An argument u = int + k_τ·τ + k_α·α + k_β·β of Γ_q, with
/// q^u = q^int t^{k_τ} a^{k_α} b^{k_β}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaArg {
    pub int: i32,
    pub tau: i32,
    pub alpha: i32,
    pub beta: i32,
}

impl GammaArg {
    pub const fn new(int: i32, tau: i32, alpha: i32, beta: i32) -> Self {
        GammaArg { int, tau, alpha, beta }
    }
}

/// Base values for evaluating Γ_q products: q, t = q^τ, a = q^α, b = q^β.
#[derive(Clone, Copy, Debug)]
pub struct GammaBase {
    pub q: QBase,
    pub t: f64,
    pub a: C64,
    pub b: C64,
}

impl GammaBase {
    pub fn power(&self, u: GammaArg) -> C64 {
        let qv = self.q.get();
        C64::new(qv.powi(u.int) * self.t.powi(u.tau), 0.0) * self.a.powi(u.alpha) * self.b.powi(u.beta)
    }

    fn tau(&self) -> f64 {
        self.t.ln() / self.q.get().ln()
    }
}

/// ∏ Γ_q(num) / ∏ Γ_q(den). Each Γ_q(u) = (q;q)_∞ (1−q)^{1−u} / (q^u;q)_∞;
/// the α and β parts of the (1−q)-exponent must cancel, so no logarithm of
/// a or b is ever taken.
pub fn gamma_ratio(num: &[GammaArg], den: &[GammaArg], g: &GammaBase) -> Result<C64> {
    let sa: i32 = num.iter().map(|u| u.alpha).sum::<i32>() - den.iter().map(|u| u.alpha).sum::<i32>();
    let sb: i32 = num.iter().map(|u| u.beta).sum::<i32>() - den.iter().map(|u| u.beta).sum::<i32>();
    if sa != 0 || sb != 0 {
        return Err(Error::InvalidParameter("alpha/beta exponents do not balance".into()));
    }
    let tau = g.tau();
    let lin = |u: &GammaArg| 1.0 - u.int as f64 - u.tau as f64 * tau;
    let e: f64 = num.iter().map(lin).sum::<f64>() - den.iter().map(lin).sum::<f64>();
    let qv = g.q.get();
    let qq = C64::new(qv, 0.0);
    // (q;q)_∞^{#num − #den} · ∏_den (q^u;q)_∞ / ∏_num (q^u;q)_∞
    let mut pn: Vec<C64> = den.iter().map(|&u| g.power(u)).collect();
    let mut pd: Vec<C64> = num.iter().map(|&u| g.power(u)).collect();
    let diff = num.len() as i64 - den.len() as i64;
    if diff > 0 {
        pn.extend(std::iter::repeat_n(qq, diff as usize));
    } else {
        pd.extend(std::iter::repeat_n(qq, (-diff) as usize));
    }
    let r = qpoch_ratio(&pn, &pd, g.q).map_err(|e| Error::PoleInGamma(e.to_string()))?;
    Ok(r * (1.0 - qv).powf(e))
}

/// 𝒩⁺_qJ(λ)·𝒩⁻_qJ(λ) as Γ_q argument lists.
pub fn qj_norm_args(lambda: &Partition) -> (Vec<GammaArg>, Vec<GammaArg>) {
    let n = lambda.len() as i32;
    let l: Vec<i32> = lambda.parts().iter().map(|&x| x as i32).collect();
    let mut num = Vec::new();
    let mut den = Vec::new();
    let g = GammaArg::new;
    for i in 1..=n {
        let li = l[i as usize - 1];
        let s = n - i;
        num.extend([g(li + 1, s, 1, 1), g(li + 1, s, 1, 0)]);
        den.push(g(2 * li + 1, 2 * s, 1, 1));
        num.extend([g(li + 1, s, 0, 0), g(li + 1, s, 0, 1)]);
        den.push(g(2 * li + 2, 2 * s, 1, 1));
    }
    for j in 1..=n {
        for k in j + 1..=n {
            let (lj, lk) = (l[j as usize - 1], l[k as usize - 1]);
            let e = 2 * n - j - k;
            num.push(g(lj + lk + 1, e + 1, 1, 1));
            den.push(g(lj + lk + 1, e, 1, 1));
            num.push(g(lj - lk, k - j + 1, 0, 0));
            den.push(g(lj - lk, k - j, 0, 0));
            num.push(g(lj + lk + 2, e - 1, 1, 1));
            den.push(g(lj + lk + 2, e, 1, 1));
            num.push(g(lj - lk + 1, k - j - 1, 0, 0));
            den.push(g(lj - lk + 1, k - j, 0, 0));
        }
    }
    (num, den)
}

/// The q-Selberg Γ_q-ratio ∏_j Γ_q(α+1+(j−1)τ)Γ_q(β+1+(j−1)τ)Γ_q(jτ)
/// / (Γ_q(α+β+2+(n+j−2)τ)Γ_q(τ)).
pub fn selberg_args(n: usize) -> (Vec<GammaArg>, Vec<GammaArg>) {
    let n = n as i32;
    let g = GammaArg::new;
    let mut num = Vec::new();
    let mut den = Vec::new();
    for j in 1..=n {
        num.extend([g(1, j - 1, 1, 0), g(1, j - 1, 0, 1), g(0, j, 0, 0)]);
        den.extend([g(2, n + j - 2, 1, 1), g(0, 1, 0, 0)]);
    }
    (num, den)
}

/// P = m̃_λ + Σ_{μ<λ} c_μ m̃_μ with ⟨P, m̃_μ⟩ = 0 for all μ < λ (dominance).
/// Returns the basis partitions (graded-lex, λ last), the coefficients and
/// the polynomial.
pub fn gram_schmidt(lambda: &Partition, meas: &DiscreteMeasure) -> Result<(Vec<Partition>, Vec<C64>, LaurentPolynomial)> {
    let index = partitions_dominated_by(lambda);
    let basis: Vec<LaurentPolynomial> = index.iter().map(sym_monomial).collect();
    let g = meas.gram(&basis);
    let k = index.len() - 1;
    let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
    coeffs[k] = C64::new(1.0, 0.0);
    if k > 0 {
        let a = DMatrix::from_fn(k, k, |i, j| g[i][j]);
        let rhs = DVector::from_fn(k, |i, _| -g[i][k]);
        let sv = a.clone().singular_values();
        let cond = sv.max() / sv.min();
        if !cond.is_finite() || cond > 1e14 {
            return Err(Error::SingularGram(cond));
        }
        let sol = a.lu().solve(&rhs).ok_or(Error::SingularGram(cond))?;
        coeffs[..k].copy_from_slice(sol.as_slice());
    }
    let mut p = LaurentPolynomial::zero(lambda.len());
    for (c, b) in coeffs.iter().zip(&basis) {
        p = &p + &b.scale(*c);
    }
    Ok((index, coeffs, p))
}

/// m̃_λ for a partition.
pub fn sym_monomial(lambda: &Partition) -> LaurentPolynomial {
    let e: Vec<i32> = lambda.parts().iter().map(|&x| x as i32).collect();
    monomial_s(&e)
}
