//! Orthogonality measures on the Askey–Wilson side: the torus density, the
//! residue weights of the discrete chains, the partially discrete positive
//! form and its rewrite for t = q^k.

use num_complex::Complex64 as C64;

use crate::bcpoly::{AscendingIndex, LaurentPolynomial};
use crate::error::{Error, Result};
use crate::koornwinder::AWParams;
use crate::qseries::{qpoch_finite_ratio, qpoch_ratio, QBase};
use crate::quadrature::{circle_grid, DiscreteMeasure, MeasureReport};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Parameters closer than this to the unit circle (after multiplication by
/// t^j q^p) are reported by [`v0_margin`].
pub const TORUS_GUARD: f64 = 1e-9;

fn near_pole(e: Error) -> Error {
    Error::NearPole(e.to_string())
}

fn weight_pole(e: Error) -> Error {
    Error::PoleInWeight(e.to_string())
}

/// w_c(x) = (x², x⁻²;q)_∞ / ∏_i (t_i x, t_i/x;q)_∞ for an arbitrary
/// parameter quadruple.
pub fn wc_with(x: C64, tt: &[C64; 4], q: QBase) -> Result<C64> {
    let xi = x.inv();
    let den: Vec<C64> = tt.iter().flat_map(|&t| [t * x, t * xi]).collect();
    qpoch_ratio(&[x * x, xi * xi], &den, q).map_err(near_pole)
}

/// One-variable continuous weight w_c(x; t̲).
pub fn wc(x: C64, p: &AWParams) -> Result<C64> {
    wc_with(x, &p.tt, p.q)
}

/// (a;q)_τ for each a in `args`, multiplied together.
fn poch_tau(args: &[C64], p: &AWParams) -> Result<C64> {
    let t = p.tv();
    let den: Vec<C64> = args.iter().map(|a| a * t).collect();
    qpoch_ratio(args, &den, p.q).map_err(near_pole)
}

/// (z_i z_j, z_i⁻¹z_j, z_i z_j⁻¹, z_i⁻¹z_j⁻¹;q)_τ.
pub fn pair_factor(zi: C64, zj: C64, p: &AWParams) -> Result<C64> {
    let (a, b) = (zi.inv(), zj.inv());
    poch_tau(&[zi * zj, a * zj, zi * b, a * b], p)
}

/// The interaction factor δ(z;t).
pub fn interaction(z: &[C64], p: &AWParams) -> Result<C64> {
    let mut d = ONE;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            d *= pair_factor(z[i], z[j], p)?;
        }
    }
    Ok(d)
}

/// Δ(z) = ∏ w_c(z_j) · δ(z;t).
pub fn weight_continuous(z: &[C64], p: &AWParams) -> Result<C64> {
    let mut w = interaction(z, p)?;
    for &x in z {
        w *= wc(x, p)?;
    }
    Ok(w)
}

/// δ_c(ω; z) = ∏_{k,l} (ω_k z_l, ω_k z_l⁻¹, ω_k⁻¹ z_l, ω_k⁻¹ z_l⁻¹;q)_τ.
pub fn interaction_c(omega: &[C64], z: &[C64], p: &AWParams) -> Result<C64> {
    let mut d = ONE;
    for &w in omega {
        for &x in z {
            d *= pair_factor(w, x, p)?;
        }
    }
    Ok(d)
}

/// Residue weight w_d(τ₀qⁱ; τ₀; τ₁, τ₂, τ₃).
pub fn wd_residue_weight(i: u32, tau: [C64; 4], q: QBase) -> Result<C64> {
    let [t0, t1, t2, t3] = tau;
    let qv = q.get();
    let a = qpoch_ratio(
        &[t0.powi(-2)],
        &[C64::new(qv, 0.0), t0 * t1, t1 / t0, t0 * t2, t2 / t0, t0 * t3, t3 / t0],
        q,
    )
    .map_err(weight_pole)?;
    let b = qpoch_finite_ratio(
        &[t0 * t0, t0 * t1, t0 * t2, t0 * t3],
        &[C64::new(qv, 0.0), t0 * qv / t1, t0 * qv / t2, t0 * qv / t3],
        q,
        i,
    )
    .map_err(weight_pole)?;
    let d0 = ONE - t0 * t0;
    if d0.norm() < crate::qseries::POLE_TOL {
        return Err(Error::PoleInWeight("1 - tau0^2 vanishes".into()));
    }
    let c = (ONE - t0 * t0 * qv.powi(2 * i as i32)) / d0;
    let d = (C64::new(qv, 0.0) / (t0 * t1 * t2 * t3)).powi(i as i32);
    Ok(a * b * c * d)
}

/// A discrete chain ρq^ν attached to the parameter t_param, with
/// ρ_j = t_param t^{j-1}.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteChain {
    pub param: usize,
    pub nu: AscendingIndex,
}

impl DiscreteChain {
    pub fn rho(&self, j: usize, p: &AWParams) -> C64 {
        p.tt[self.param] * p.tv().powi(j as i32 - 1)
    }

    /// The points ρ_j q^{ν_j}, j = 1..r.
    pub fn omega(&self, p: &AWParams) -> Vec<C64> {
        let q = p.qv();
        self.nu
            .parts()
            .iter()
            .enumerate()
            .map(|(jm1, &nu)| self.rho(jm1 + 1, p) * q.powi(nu as i32))
            .collect()
    }

    /// The three parameters other than t_param, in index order.
    pub fn others(&self, p: &AWParams) -> [C64; 3] {
        let v: Vec<C64> = (0..4).filter(|&k| k != self.param).map(|k| p.tt[k]).collect();
        [v[0], v[1], v[2]]
    }
}

/// Δ^(d)(ρq^ν; t_param) = ∏_j w_d(ρ_jq^{ν_j}; ρ_jq^{ν_{j-1}}) · δ_d(ρq^ν).
pub fn multi_discrete_weight(chain: &DiscreteChain, p: &AWParams) -> Result<C64> {
    let q = p.qv();
    let t = p.tv();
    let nu = chain.nu.parts();
    let r = nu.len();
    let [o1, o2, o3] = chain.others(p);
    let mut w = ONE;
    for j in 1..=r {
        let prev = chain.nu.prev(j);
        let tau0 = chain.rho(j, p) * q.powi(prev as i32);
        w *= wd_residue_weight(nu[j - 1] - prev, [tau0, o1, o2, o3], p.q)?;
    }
    for k in 1..=r {
        for l in k + 1..=r {
            let (rk, rl) = (chain.rho(k, p), chain.rho(l, p));
            let (nk, nl) = (nu[k - 1] as i32, nu[l - 1] as i32);
            let nkm = chain.nu.prev(k) as i32;
            // ρ_l/ρ_k = t^{l-k} exactly
            let ratio = C64::new(t.powi((l - k) as i32) * q.powi(nl - nk), 0.0);
            let inv = (rk * rl).inv() * q.powi(-nk - nl);
            let num = qpoch_ratio(&[ratio, inv], &[ratio * t, inv * t], p.q).map_err(weight_pole)?;
            let den = qpoch_finite_ratio(
                &[rk * rl * q.powi(nkm + nl), rk / rl * q.powi(nkm - nl)],
                &[],
                p.q,
                (nk - nkm) as u32,
            )?;
            if den.norm() < crate::qseries::POLE_TOL {
                return Err(Error::PoleInWeight(format!("delta_d denominator at ({k},{l})")));
            }
            w *= num / den;
        }
    }
    Ok(w)
}

/// A point of F(r): chains for the (at most two) large parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteSupportPoint {
    pub split: (usize, usize),
    pub first: Option<DiscreteChain>,
    pub second: Option<DiscreteChain>,
    pub omega: Vec<C64>,
}

/// Indices of the parameters with |t_i| > 1, in index order.
pub fn large_parameters(p: &AWParams) -> Result<Vec<usize>> {
    let large: Vec<usize> = (0..4).filter(|&i| p.tt[i].norm() > 1.0).collect();
    if large.len() > 2 {
        return Err(Error::DomainViolation(format!("{} parameters of modulus > 1", large.len())));
    }
    Ok(large)
}

/// min over i, j ∈ {−1..n−1}, p ∈ ℤ of ||t_i t^j q^p| − 1|.
pub fn v0_margin(p: &AWParams) -> f64 {
    let lq = p.qv().ln();
    let mut best = f64::INFINITY;
    for x in p.tt {
        for j in -1..p.n as i32 {
            let l = (x.norm() * p.tv().powi(j)).ln();
            let s = (l / lq).round();
            for s in [s - 1.0, s, s + 1.0] {
                best = best.min(((l - s * lq).exp() - 1.0).abs());
            }
        }
    }
    best
}

/// Ascending ν of length r with |t_i t^{r-1} q^{ν_r}| > 1.
pub fn support_d(param: usize, r: usize, p: &AWParams) -> Vec<DiscreteChain> {
    if r == 0 {
        return Vec::new();
    }
    let last = p.tt[param].norm() * p.tv().powi(r as i32 - 1);
    if last <= 1.0 {
        return Vec::new();
    }
    let q = p.qv();
    let mut max = 0u32;
    while last * q.powi(max as i32 + 1) > 1.0 {
        max += 1;
    }
    AscendingIndex::all_bounded(r, max)
        .into_iter()
        .map(|nu| DiscreteChain { param, nu })
        .collect()
}

/// F(r) as a list in (split, ν, ν′) lexicographic order.
pub fn support_f(r: usize, p: &AWParams) -> Result<Vec<DiscreteSupportPoint>> {
    let large = large_parameters(p)?;
    let mut out = Vec::new();
    let (i, j) = (large.first().copied(), large.get(1).copied());
    for l in 0..=r {
        let m = r - l;
        let first: Vec<Option<DiscreteChain>> = match (l, i) {
            (0, _) => vec![None],
            (_, Some(i)) => support_d(i, l, p).into_iter().map(Some).collect(),
            _ => vec![],
        };
        let second: Vec<Option<DiscreteChain>> = match (m, j) {
            (0, _) => vec![None],
            (_, Some(j)) => support_d(j, m, p).into_iter().map(Some).collect(),
            _ => vec![],
        };
        for a in &first {
            for b in &second {
                let mut omega = Vec::with_capacity(r);
                if let Some(c) = a {
                    omega.extend(c.omega(p));
                }
                if let Some(c) = b {
                    omega.extend(c.omega(p));
                }
                out.push(DiscreteSupportPoint { split: (l, m), first: a.clone(), second: b.clone(), omega });
            }
        }
    }
    Ok(out)
}

/// Tensor-grid measure on {prefix} × T^{dim}: node weights are
/// scale · ∏ axis[k_l] · ∏_{l<l'} pair[k_l][k_l'] / M^{dim}.
fn tensor_measure(
    prefix: &[C64],
    dim: usize,
    grid: &[C64],
    axis: &[C64],
    pair: &[Vec<C64>],
    scale: C64,
) -> DiscreteMeasure {
    let n = prefix.len() + dim;
    let m = grid.len();
    let mut meas = DiscreteMeasure::new(n);
    if dim == 0 {
        meas.push(prefix, scale);
        return meas;
    }
    let total = m.pow(dim as u32);
    let norm = scale / (total as f64);
    let mut idx = vec![0usize; dim];
    let mut node: Vec<C64> = prefix.to_vec();
    node.resize(n, ONE);
    for _ in 0..total {
        let mut w = norm;
        for a in 0..dim {
            w *= axis[idx[a]];
            node[prefix.len() + a] = grid[idx[a]];
            for b in a + 1..dim {
                w *= pair[idx[a]][idx[b]];
            }
        }
        if w != C64::new(0.0, 0.0) {
            meas.push(&node, w);
        }
        for a in (0..dim).rev() {
            idx[a] += 1;
            if idx[a] < m {
                break;
            }
            idx[a] = 0;
        }
    }
    meas
}

fn pair_table(grid: &[C64], p: &AWParams) -> Result<Vec<Vec<C64>>> {
    grid.iter()
        .map(|&a| grid.iter().map(|&b| pair_factor(a, b, p)).collect())
        .collect()
}

/// The torus measure (1/(2πi)ⁿ) Δ(z) dz/z discretised on M points per axis.
pub fn torus_measure(p: &AWParams, m: usize) -> Result<DiscreteMeasure> {
    let grid = circle_grid(m);
    let axis: Vec<C64> = grid.iter().map(|&x| wc(x, p)).collect::<Result<_>>()?;
    let pair = if p.n > 1 { pair_table(&grid, p)? } else { Vec::new() };
    Ok(tensor_measure(&[], p.n, &grid, &axis, &pair, ONE))
}

fn check_degree(f: &LaurentPolynomial, g: &LaurentPolynomial, m: usize) -> Result<()> {
    let need = 2 * (f.max_axis_degree() + g.max_axis_degree()) as usize + 8;
    if m < need {
        return Err(Error::InvalidParameter(format!("M = {m} below the required {need}")));
    }
    Ok(())
}

/// ⟨f,g⟩₀ on the torus with an M vs M/2 error estimate.
pub fn torus_bilinear(f: &LaurentPolynomial, g: &LaurentPolynomial, p: &AWParams, m: usize) -> Result<MeasureReport> {
    check_degree(f, g, m)?;
    let v = torus_measure(p, m)?.bilinear(f, g);
    let h = torus_measure(p, m / 2)?.bilinear(f, g);
    Ok(MeasureReport {
        value: v,
        abs_error_estimate: (v - h).norm(),
        quadrature_points_per_axis: m,
        discrete_points_used: 0,
        truncation_depth: 0,
    })
}

fn rising(a: usize, r: usize) -> f64 {
    (0..r).map(|i| (a + i) as f64).product()
}

/// Positivity check for weights that are positive on the domain V_AW.
fn check_positive(v: C64, what: &str) -> Result<()> {
    if v.re <= 0.0 || v.im.abs() > 1e-9 * v.norm() {
        return Err(Error::NonPositiveWeight(format!("{what}: {v}")));
    }
    Ok(())
}

/// The partially discrete measure Σ_r 2^r (n−r+1)_r ⟨·,·⟩_r on V_AW,
/// discretised with M points per torus axis. Returns the measure and the
/// number of discrete support points used.
pub fn partial_measure(p: &AWParams, m: usize) -> Result<(DiscreteMeasure, usize)> {
    if !p.in_v_aw() {
        return Err(Error::DomainViolation("parameters not in the positivity domain".into()));
    }
    let n = p.n;
    let positive = true;
    let grid = circle_grid(m);
    let wc_axis: Vec<C64> = grid.iter().map(|&x| wc(x, p)).collect::<Result<_>>()?;
    let pair = if n > 1 { pair_table(&grid, p)? } else { Vec::new() };
    let mut meas = tensor_measure(&[], n, &grid, &wc_axis, &pair, ONE);
    let mut used = 0;
    for r in 1..=n {
        let factor = 2f64.powi(r as i32) * rising(n - r + 1, r);
        for pt in support_f(r, p)? {
            used += 1;
            let mut c = C64::new(factor, 0.0);
            if let Some(ch) = &pt.first {
                c *= multi_discrete_weight(ch, p)?;
            }
            if let Some(ch) = &pt.second {
                c *= multi_discrete_weight(ch, p)?;
                if let Some(fi) = &pt.first {
                    c *= interaction_c(&fi.omega(p), &ch.omega(p), p)?;
                }
            }
            if positive {
                check_positive(c, "discrete weight")?;
            }
            let axis: Vec<C64> = grid
                .iter()
                .zip(&wc_axis)
                .map(|(&x, &w)| Ok(w * interaction_c(&pt.omega, &[x], p)?))
                .collect::<Result<_>>()?;
            meas.append_scaled(&tensor_measure(&pt.omega, n - r, &grid, &axis, &pair, c), ONE);
        }
    }
    Ok((meas, used))
}

/// ⟨f,g⟩ for the partially discrete positive measure.
pub fn partial_bilinear(f: &LaurentPolynomial, g: &LaurentPolynomial, p: &AWParams, m: usize) -> Result<MeasureReport> {
    check_degree(f, g, m)?;
    let (meas, used) = partial_measure(p, m)?;
    let (half, _) = partial_measure(p, m / 2)?;
    let v = meas.bilinear(f, g);
    let h = half.bilinear(f, g);
    Ok(MeasureReport {
        value: v,
        abs_error_estimate: (v - h).norm(),
        quadrature_points_per_axis: m,
        discrete_points_used: used,
        truncation_depth: max_chain_depth(p),
    })
}

fn max_chain_depth(p: &AWParams) -> usize {
    let q = p.qv();
    p.tt.iter()
        .map(|x| {
            let mut k = 0;
            while x.norm() * q.powi(k as i32 + 1) > 1.0 {
                k += 1;
            }
            k
        })
        .max()
        .unwrap_or(0)
}

/// (a;q)_k evaluated with exponent bookkeeping: a = q^s·base, and a factor
/// 1 − q^{s+i} with s+i = 0 is an exact zero when `base` is exactly 1.
fn poch_k_structural(s: i32, k: u32, q: f64) -> f64 {
    (0..k as i32).map(|i| if s + i == 0 { 0.0 } else { 1.0 - q.powi(s + i) }).product()
}

/// Pair factor for t = q^k as a finite product.
fn pair_factor_k(zi: C64, zj: C64, k: u32, q: QBase) -> C64 {
    let (a, b) = (zi.inv(), zj.inv());
    let args = [zi * zj, a * zj, zi * b, a * b];
    qpoch_finite_ratio(&args, &[], q, k).unwrap_or_default()
}

/// The measure of the t = q^k rewrite: ordered tuples of discrete
/// coordinates z_i ∈ {e_i q^m : |e_i q^m| > 1} with one-variable residue
/// weights, and δ(z;q^k) as a polynomial factor.
pub fn natural_t_measure(p: &AWParams, m: usize) -> Result<(DiscreteMeasure, usize)> {
    let k = p
        .t
        .integer_power()
        .ok_or_else(|| Error::InvalidParameter("t is not an integer power of q".into()))?;
    let n = p.n;
    let q = p.qv();
    let large = large_parameters(p)?;
    // (parameter index, depth m) for every discrete value e q^m
    let mut values: Vec<(usize, u32)> = Vec::new();
    for &e in &large {
        let mut d = 0u32;
        while p.tt[e].norm() * q.powi(d as i32) > 1.0 {
            values.push((e, d));
            d += 1;
        }
    }
    let grid = circle_grid(m);
    let wc_axis: Vec<C64> = grid.iter().map(|&x| wc(x, p)).collect::<Result<_>>()?;
    let pair: Vec<Vec<C64>> = grid
        .iter()
        .map(|&a| grid.iter().map(|&b| pair_factor_k(a, b, k, p.q)).collect())
        .collect();
    let mut meas = DiscreteMeasure::new(n);
    let mut used = 0;
    for r in 0..=n {
        let factor = 2f64.powi(r as i32) * crate::qseries::binom(n as i64, r as i64) as f64;
        let count = values.len().pow(r as u32);
        for flat in 0..count {
            let mut rem = flat;
            let tuple: Vec<(usize, u32)> = (0..r)
                .map(|_| {
                    let v = values[rem % values.len()];
                    rem /= values.len();
                    v
                })
                .collect();
            let z: Vec<C64> = tuple.iter().map(|&(e, d)| p.tt[e] * q.powi(d as i32)).collect();
            let mut c = C64::new(factor, 0.0);
            for &(e, d) in &tuple {
                let others: Vec<C64> = (0..4).filter(|&i| i != e).map(|i| p.tt[i]).collect();
                c *= wd_residue_weight(d, [p.tt[e], others[0], others[1], others[2]], p.q)?;
            }
            for a in 0..r {
                for b in a + 1..r {
                    let ((ea, da), (eb, db)) = (tuple[a], tuple[b]);
                    if ea == eb {
                        // same chain: z_a/z_b = q^{da-db} exactly
                        let s = db as i32 - da as i32;
                        let cross = poch_k_structural(s, k, q) * poch_k_structural(-s, k, q);
                        let (za, zb) = (z[a], z[b]);
                        c *= qpoch_finite_ratio(&[za * zb, (za * zb).inv()], &[], p.q, k)? * cross;
                    } else {
                        c *= pair_factor_k(z[a], z[b], k, p.q);
                    }
                }
            }
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            used += usize::from(r > 0);
            let axis: Vec<C64> = grid
                .iter()
                .zip(&wc_axis)
                .map(|(&x, &w)| z.iter().fold(w, |acc, &zi| acc * pair_factor_k(zi, x, k, p.q)))
                .collect();
            meas.append_scaled(&tensor_measure(&z, n - r, &grid, &axis, &pair, c), ONE);
        }
    }
    Ok((meas, used))
}

/// ⟨f,g⟩ through the t = q^k rewrite.
pub fn natural_t_bilinear(f: &LaurentPolynomial, g: &LaurentPolynomial, p: &AWParams, m: usize) -> Result<MeasureReport> {
    check_degree(f, g, m)?;
    let (meas, used) = natural_t_measure(p, m)?;
    let (half, _) = natural_t_measure(p, m / 2)?;
    let v = meas.bilinear(f, g);
    let h = half.bilinear(f, g);
    Ok(MeasureReport {
        value: v,
        abs_error_estimate: (v - h).norm(),
        quadrature_points_per_axis: m,
        discrete_points_used: used,
        truncation_depth: max_chain_depth(p),
    })
}

/// n = 1: (1/2πi)∮_C f w_c dz/z over an inversion-invariant deformed circle
/// r(x) = e^{h(x)} that bulges to radius `peak` around the argument of each
/// parameter of modulus > 1 (and correspondingly inwards around the
/// inverse), evaluated with the M-point trapezoid rule.
pub fn deformed_contour_integral(f: &LaurentPolynomial, p: &AWParams, peak: f64, m: usize) -> Result<C64> {
    use std::f64::consts::TAU;
    if p.n != 1 {
        return Err(Error::InvalidParameter("contour integral implemented for n = 1".into()));
    }
    let kappa = 40.0;
    let centres: Vec<f64> = large_parameters(p)?
        .into_iter()
        .map(|i| p.tt[i].arg().rem_euclid(TAU) / TAU)
        .collect();
    let amp = peak.ln();
    let bump = |y: f64| (kappa * ((TAU * y).cos() - 1.0)).exp();
    let dbump = |y: f64| -bump(y) * kappa * TAU * (TAU * y).sin();
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..m {
        let x = (k as f64 + 0.5) / m as f64;
        let mut h = 0.0;
        let mut dh = 0.0;
        for &a in &centres {
            h += amp * (bump(x - a) - bump(x - (1.0 - a)));
            dh += amp * (dbump(x - a) - dbump(x - (1.0 - a)));
        }
        let z = C64::from_polar(h.exp(), TAU * x);
        let jac = ONE + C64::new(0.0, -dh / TAU);
        acc += f.eval(&[z])? * wc(z, p)? * jac;
    }
    Ok(acc / m as f64)
}

/// n = 1: torus integral plus 2 Σ f(t_i q^m) w_d(t_i q^m; t_i) over the
/// poles outside the unit circle.
pub fn torus_plus_residues(f: &LaurentPolynomial, p: &AWParams, m: usize) -> Result<C64> {
    if p.n != 1 {
        return Err(Error::InvalidParameter("residue decomposition implemented for n = 1".into()));
    }
    let mut v = torus_measure(p, m)?.bilinear(f, &LaurentPolynomial::one(1));
    for i in large_parameters(p)? {
        let ch = DiscreteChain { param: i, nu: AscendingIndex::new(vec![0]).unwrap() };
        let others = ch.others(p);
        let mut d = 0u32;
        while p.tt[i].norm() * p.qv().powi(d as i32) > 1.0 {
            let x = p.tt[i] * p.qv().powi(d as i32);
            v += 2.0 * f.eval(&[x])? * wd_residue_weight(d, [p.tt[i], others[0], others[1], others[2]], p.q)?;
            d += 1;
        }
    }
    Ok(v)
}

/// Numerical residue of w_c(x)/x at x0: the mean of (x − x0) w_c(x)/x over a
/// small circle around x0.
pub fn numeric_residue(x0: C64, tt: &[C64; 4], q: QBase, radius: f64) -> Result<C64> {
    let m = 64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..m {
        let d = C64::from_polar(radius, std::f64::consts::TAU * (k as f64 + 0.5) / m as f64);
        let x = x0 + d;
        acc += d * wc_with(x, tt, q)? / x;
    }
    Ok(acc / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::askey_wilson::gustafson_constant;
    use crate::bcpoly::{monomial_w, Partition};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn small(n: usize) -> AWParams {
        AWParams::new(0.5, 0.6, [c(0.3, 0.0), c(-0.4, 0.0), c(0.0, 0.5), c(0.0, -0.5)], n).unwrap()
    }

    #[test]
    fn continuous_weight_basics() {
        let p = small(1);
        let z = [c(0.6, 0.8)];
        assert_eq!(weight_continuous(&z, &p).unwrap(), wc(z[0], &p).unwrap());
        let p2 = small(2);
        let z = [c(0.6, 0.8), c(-0.28, 0.96)];
        let w = weight_continuous(&z, &p2).unwrap();
        assert!(w.re > 0.0 && w.im.abs() < 1e-12 * w.norm());
        let near_one = AWParams::new(0.5, 1.0 - 1e-15, p2.tt, 2).unwrap();
        assert!((interaction(&z, &near_one).unwrap() - ONE).norm() < 1e-12);
    }

    #[test]
    fn gustafson_by_quadrature() {
        for n in [1, 2] {
            let p = small(n);
            let one = LaurentPolynomial::one(n);
            let rep = torus_bilinear(&one, &one, &p, 128).unwrap();
            let g = gustafson_constant(&p).unwrap();
            assert!((rep.value - g).norm() < 1e-10 * g.norm(), "n={n}");
            assert!(rep.abs_error_estimate < 1e-8 * g.norm());
        }
    }

    #[test]
    fn residue_weight_examples() {
        let q = QBase::new(0.5).unwrap();
        let tau = [c(1.3, 0.2), c(0.3, 0.0), c(-0.2, 0.1), c(0.25, -0.3)];
        let w0 = wd_residue_weight(0, tau, q).unwrap();
        let [t0, t1, t2, t3] = tau;
        let direct = qpoch_ratio(&[t0.powi(-2)], &[c(0.5, 0.0), t0 * t1, t1 / t0, t0 * t2, t2 / t0, t0 * t3, t3 / t0], q).unwrap();
        assert!((w0 - direct).norm() < 1e-15 * w0.norm());
        for i in 0..3 {
            let x0 = t0 * 0.5f64.powi(i);
            let res = numeric_residue(x0, &tau, q, 1e-6).unwrap();
            let w = wd_residue_weight(i as u32, tau, q).unwrap();
            assert!((res - w).norm() < 1e-8 * w.norm(), "i={i}");
        }
    }

    #[test]
    fn discrete_chains() {
        let p = AWParams::real(0.5, 0.4, [1.2, 0.3, -0.2, 0.1], 2).unwrap();
        let f1 = support_f(1, &p).unwrap();
        assert_eq!(f1.len(), 1);
        assert!((f1[0].omega[0] - c(1.2, 0.0)).norm() < 1e-15);
        assert!(support_f(2, &p).unwrap().is_empty());
        assert!(support_f(1, &small(2)).unwrap().is_empty());
        // r = 1 chain weight equals the one-variable residue weight
        let ch = DiscreteChain { param: 0, nu: AscendingIndex::new(vec![1]).unwrap() };
        let w = multi_discrete_weight(&ch, &p).unwrap();
        let tt = p.tt;
        let wd = wd_residue_weight(1, [tt[0], tt[1], tt[2], tt[3]], p.q).unwrap();
        assert!((w - wd).norm() < 1e-15 * w.norm());
        let too_many = AWParams::real(0.5, 0.4, [1.2, -1.3, 1.5, 0.1], 2).unwrap();
        assert!(matches!(support_f(1, &too_many), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn delta_c_factorises() {
        let p = small(2);
        let om = [c(1.3, 0.0)];
        let (u, v) = (c(0.6, 0.8), c(0.8, -0.6));
        let a = interaction_c(&om, &[u, v], &p).unwrap();
        let b = interaction_c(&om, &[u], &p).unwrap() * interaction_c(&om, &[v], &p).unwrap();
        assert!((a - b).norm() < 1e-14 * a.norm());
        assert_eq!(interaction_c(&[], &[u], &p).unwrap(), ONE);
    }

    #[test]
    fn partial_reduces_to_torus_without_large_parameters() {
        let p = small(2);
        let f = monomial_w(&part(&[1, 0]));
        let a = partial_bilinear(&f, &f, &p, 32).unwrap();
        let b = torus_bilinear(&f, &f, &p, 32).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.discrete_points_used, 0);
    }

    #[test]
    fn partial_constant_term_with_one_chain() {
        for n in [1, 2] {
            let p = AWParams::real(0.5, 0.6, [1.3, -0.4, 0.3, 0.2], n).unwrap();
            let one = LaurentPolynomial::one(n);
            let rep = partial_bilinear(&one, &one, &p, 128).unwrap();
            let g = gustafson_constant(&p).unwrap();
            assert!((rep.value - g).norm() < 1e-10 * g.norm(), "n={n}: {} vs {}", rep.value, g);
        }
    }

    #[test]
    fn natural_rewrite_matches_partial_form() {
        let p = AWParams::new(0.5, 0.25, [c(1.6, 0.0), c(-1.3, 0.0), c(0.2, 0.3), c(0.2, -0.3)], 2).unwrap();
        let p = AWParams::with_deformation(p.q, crate::qseries::Deformation::from_power(p.q, 2).unwrap(), p.tt, 2).unwrap();
        let f = monomial_w(&part(&[1, 0]));
        let g = monomial_w(&part(&[1, 1]));
        let a = partial_bilinear(&f, &g, &p, 48).unwrap();
        let b = natural_t_bilinear(&f, &g, &p, 48).unwrap();
        assert!((a.value - b.value).norm() < 1e-9 * a.value.norm(), "{} vs {}", a.value, b.value);
    }

    #[test]
    fn contour_matches_residue_decomposition() {
        let t0 = C64::from_polar(1.1, 0.3);
        let tt = [t0, C64::from_polar(0.3, 1.0), C64::from_polar(0.4, 2.0), C64::from_polar(0.2, -2.5)];
        let p = AWParams::new(0.5, 0.5, tt, 1).unwrap();
        assert!(p.in_v());
        let f = monomial_w(&part(&[1]));
        let lhs = deformed_contour_integral(&f, &p, 1.3, 4096).unwrap();
        let rhs = torus_plus_residues(&f, &p, 1024).unwrap();
        assert!((lhs - rhs).norm() < 1e-9 * rhs.norm(), "{lhs} vs {rhs}");
    }

    #[test]
    fn degenerate_boundary_parameters() {
        // t0 = t^{-1} q^{-1} and t0 = t^{-1} q^{-2}: the last chain point lands
        // on the unit circle and carries no mass
        for t0 in [2.0, 4.0] {
            let p = AWParams::new(0.5, 0.5, [c(t0, 0.0), c(-0.4, 0.0), c(0.3, 0.2), c(0.3, -0.2)], 2).unwrap();
            assert!(p.in_v_aw());
            let one = LaurentPolynomial::one(2);
            let rep = partial_bilinear(&one, &one, &p, 64).unwrap();
            let g = gustafson_constant(&p).unwrap();
            assert!((rep.value - g).norm() < 1e-12 * g.norm(), "t0={t0}: {} vs {}", rep.value, g);
        }
    }
}
