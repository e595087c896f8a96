//! Multivariable q-Racah polynomials: the Askey–Wilson family at the
//! truncated parameter t₃ = t^{1−n}t₀^{−1}q^{−N}, orthogonal for a finite
//! discrete measure supported on ρq^λ, ρ_i = t₀t^{i−1}, λ_n ≤ N.

use num_complex::Complex64 as C64;

use crate::bcpoly::{AscendingIndex, LaurentPolynomial, Partition};
use crate::error::{Error, Result};
use crate::koornwinder::AWParams;
use crate::pochsym::{Mono, PochProduct, SymValues};
use crate::qseries::{qpoch_finite_ratio, qpoch_ratio, Deformation, QBase};
use crate::quadrature::DiscreteMeasure;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// (q, t, t₀, t₁, t₂) and the truncation N. t₃ is never stored as a bare
/// float: products involving it are formed from t^{1−n}, t₀^{−1}, q^{−N}.
#[derive(Clone, Copy, Debug)]
pub struct QRacahParams {
    pub q: QBase,
    pub t: Deformation,
    pub t0: C64,
    pub t1: C64,
    pub t2: C64,
    pub n: usize,
    pub big_n: u32,
}

impl QRacahParams {
    pub fn new(q: f64, t: f64, [t0, t1, t2]: [C64; 3], n: usize, big_n: u32) -> Result<Self> {
        let q = QBase::new(q)?;
        let t = Deformation::new(q, t)?;
        if n == 0 || big_n == 0 {
            return Err(Error::InvalidParameter("n and N must be positive".into()));
        }
        if [t0, t1, t2].iter().any(|x| x.norm() == 0.0) {
            return Err(Error::InvalidParameter("parameters must be nonzero".into()));
        }
        Ok(QRacahParams { q, t, t0, t1, t2, n, big_n })
    }

    pub fn qv(&self) -> f64 {
        self.q.get()
    }

    pub fn tv(&self) -> f64 {
        self.t.t()
    }

    /// t₃ = t^{1−n} t₀^{−1} q^{−N} as a number.
    pub fn t3(&self) -> C64 {
        self.t0.inv() * self.tv().powi(1 - self.n as i32) * self.qv().powi(-(self.big_n as i32))
    }

    /// ρ_i = t₀t^{i−1}, 1-based i.
    pub fn rho(&self, i: usize) -> C64 {
        self.t0 * self.tv().powi(i as i32 - 1)
    }

    /// Askey–Wilson parameters at the truncated point.
    pub fn aw_params(&self) -> Result<AWParams> {
        AWParams::with_deformation(self.q, self.t, [self.t0, self.t1, self.t2, self.t3()], self.n)
    }

    fn sym_values(&self) -> SymValues {
        SymValues { q: self.q, t: self.tv(), tt: [self.t0, self.t1, self.t2, self.t3()] }
    }
}

/// Point-wise data needed by the q-Racah weight: ρ_i, t_jρ_i and q t_j^{-1}ρ_i.
struct WeightInputs {
    q: QBase,
    t: f64,
    rho: Vec<C64>,
    tprod: C64,
    t_rho: Vec<[C64; 4]>,
    qinv_rho: Vec<[C64; 4]>,
}

fn inputs_generic(r: usize, p: &AWParams) -> WeightInputs {
    let rho: Vec<C64> = (1..=r).map(|i| p.tt[0] * p.tv().powi(i as i32 - 1)).collect();
    let q = p.qv();
    WeightInputs {
        q: p.q,
        t: p.tv(),
        t_rho: rho.iter().map(|&x| p.tt.map(|tj| tj * x)).collect(),
        qinv_rho: rho.iter().map(|&x| p.tt.map(|tj| q * x / tj)).collect(),
        rho,
        tprod: p.tprod(),
    }
}

fn inputs_truncated(r: usize, p: &QRacahParams) -> WeightInputs {
    let (q, t, n, nn) = (p.qv(), p.tv(), p.n as i32, p.big_n as i32);
    let rho: Vec<C64> = (1..=r).map(|i| p.rho(i)).collect();
    let tt3 = [p.t0, p.t1, p.t2];
    let t_rho = rho
        .iter()
        .enumerate()
        .map(|(im1, &x)| {
            let i = im1 as i32 + 1;
            // t₃ρ_i = t^{i−n} q^{−N}
            [tt3[0] * x, tt3[1] * x, tt3[2] * x, C64::new(t.powi(i - n) * q.powi(-nn), 0.0)]
        })
        .collect();
    let qinv_rho = rho
        .iter()
        .enumerate()
        .map(|(im1, &x)| {
            let i = im1 as i32 + 1;
            // q t₃^{−1} ρ_i = t₀² t^{n+i−2} q^{N+1}
            let last = p.t0 * p.t0 * t.powi(n + i - 2) * q.powi(nn + 1);
            [q * x / tt3[0], q * x / tt3[1], q * x / tt3[2], last]
        })
        .collect();
    WeightInputs {
        q: p.q,
        t,
        rho,
        // t₀t₁t₂t₃ = t₁t₂ t^{1−n} q^{−N}
        tprod: p.t1 * p.t2 * t.powi(1 - n) * q.powi(-nn),
        t_rho,
        qinv_rho,
    }
}

fn weight_from(lambda: &AscendingIndex, w: &WeightInputs) -> Result<C64> {
    let pole = |e: Error| Error::PoleInWeight(e.to_string());
    let l = lambda.parts();
    let q = w.q.get();
    let mut acc = ONE;
    for (im1, &li) in l.iter().enumerate() {
        let rho = w.rho[im1];
        let r2 = rho * rho;
        acc *= qpoch_finite_ratio(&[r2 * q], &[r2], w.q, 2 * li).map_err(pole)?;
        let base = w.tprod * w.t.powi(2 * im1 as i32) / q;
        acc /= base.powi(li as i32);
        acc *= qpoch_finite_ratio(&w.t_rho[im1], &w.qinv_rho[im1], w.q, li).map_err(pole)?;
    }
    for k in 0..l.len() {
        for m in k + 1..l.len() {
            let (rk, rl) = (w.rho[k], w.rho[m]);
            let (s, d) = (l[k] + l[m], l[m] - l[k]);
            let pr = rk * rl;
            let ratio = rl / rk;
            acc *= qpoch_finite_ratio(&[pr * q, pr * w.t], &[pr * q / w.t, pr], w.q, s).map_err(pole)?;
            acc *= qpoch_finite_ratio(&[ratio * q, ratio * w.t], &[ratio * q / w.t, ratio], w.q, d).map_err(pole)?;
        }
    }
    Ok(acc)
}

/// Δ^qR(ρq^λ; t̲; t) for generic parameters, ρ_i = t₀t^{i−1}.
pub fn weight_qr_generic(lambda: &AscendingIndex, p: &AWParams) -> Result<C64> {
    weight_from(lambda, &inputs_generic(lambda.len(), p))
}

/// Δ^qR(ρq^λ; t̲_N; t); zero when λ_n > N.
pub fn weight_qr(lambda: &AscendingIndex, p: &QRacahParams) -> Result<C64> {
    if lambda.parts().last().is_some_and(|&x| x > p.big_n) {
        return Ok(C64::new(0.0, 0.0));
    }
    weight_from(lambda, &inputs_truncated(lambda.len(), p))
}

/// K_r in its product form with the (·;q)_τ pair factor.
pub fn k_constant_first(r: usize, p: &AWParams) -> Result<C64> {
    let q = p.qv();
    let [_, t1, t2, t3] = p.tt;
    let rho: Vec<C64> = (1..=r).map(|i| p.tt[0] * p.tv().powi(i as i32 - 1)).collect();
    let mut num = Vec::new();
    let mut den = Vec::new();
    for &x in &rho {
        let xi = x.inv();
        num.push(xi * xi);
        den.extend([C64::new(q, 0.0), x * t1, xi * t1, x * t2, xi * t2, x * t3, xi * t3]);
    }
    let tv = p.tv();
    for k in 0..r {
        for l in k + 1..r {
            for a in [rho[l] / rho[k], (rho[k] * rho[l]).inv()] {
                num.push(a);
                den.push(a * tv);
            }
        }
    }
    qpoch_ratio(&num, &den, p.q).map_err(|e| Error::PoleInProduct(e.to_string()))
}

/// Symbolic K_r (the form without (·;q)_τ).
pub fn k_constant_symbolic(r: usize) -> PochProduct {
    let mut k = PochProduct::new();
    let t0 = Mono::param(0);
    for i in 1..=r as i32 {
        let rho = t0.mul(Mono::t(i - 1));
        k.num(rho.pow(-2)).num(Mono::t(1)).num(t0.pow(-2).mul(Mono::t(2 - i - r as i32)));
        k.den(Mono::q(1));
        for j in 1..4 {
            let tj = Mono::param(j);
            k.den(rho.mul(tj)).den(rho.inv().mul(tj));
        }
        k.den(Mono::t(i)).den(t0.pow(-2).mul(Mono::t(2 - 2 * i)));
    }
    k
}

/// K_r computed from both displayed forms; they must agree to rel 1e-10.
pub fn k_constant(r: usize, p: &AWParams) -> Result<C64> {
    let a = k_constant_first(r, p)?;
    let v = SymValues { q: p.q, t: p.tv(), tt: p.tt };
    let b = k_constant_symbolic(r).eval(&v)?;
    if (a - b).norm() > 1e-10 * a.norm().max(b.norm()) {
        return Err(Error::FormMismatch(format!("K_{r}: {a} vs {b}")));
    }
    Ok(a)
}

/// Symbolic 𝒩⁺(λ)𝒩⁻(λ).
pub fn aw_norm_symbolic(lambda: &Partition) -> PochProduct {
    let n = lambda.len() as i32;
    let l: Vec<i32> = lambda.parts().iter().map(|&x| x as i32).collect();
    let tp = Mono::new([1, 1, 1, 1, 0], 0);
    let tt = |j: usize, k: usize| Mono::param(j).mul(Mono::param(k));
    let mut p = PochProduct::new();
    for i in 1..=n {
        let li = l[i as usize - 1];
        let tn = Mono::t(n - i);
        let base = Mono::q(li).mul(tn);
        // 𝒩⁺
        p.num(tp.mul(Mono::q(2 * li - 1)).mul(Mono::t(2 * (n - i))));
        p.den(tp.mul(Mono::q(li - 1)).mul(tn));
        for j in 1..4 {
            p.den(base.mul(tt(0, j)));
        }
        // 𝒩⁻
        p.num(tp.mul(Mono::q(2 * li)).mul(Mono::t(2 * (n - i))));
        p.den(Mono::q(li + 1).mul(tn));
        for (j, k) in [(1, 2), (1, 3), (2, 3)] {
            p.den(base.mul(tt(j, k)));
        }
    }
    for j in 1..=n {
        for k in j + 1..=n {
            let (lj, lk) = (l[j as usize - 1], l[k as usize - 1]);
            let e = 2 * n - j - k;
            p.num(tp.mul(Mono::q(lj + lk - 1)).mul(Mono::t(e)));
            p.num(Mono::q(lj - lk).mul(Mono::t(k - j)));
            p.den(tp.mul(Mono::q(lj + lk - 1)).mul(Mono::t(e + 1)));
            p.den(Mono::q(lj - lk).mul(Mono::t(k - j + 1)));
            p.num(tp.mul(Mono::q(lj + lk)).mul(Mono::t(e)));
            p.num(Mono::q(lj - lk + 1).mul(Mono::t(k - j)));
            p.den(tp.mul(Mono::q(lj + lk)).mul(Mono::t(e - 1)));
            p.den(Mono::q(lj - lk + 1).mul(Mono::t(k - j - 1)));
        }
    }
    p
}

/// 𝒩^qR(λ) = 𝒩(λ)/(K_n 2ⁿn!) at the truncated parameters, with the
/// vanishing infinite products cancelled symbolically.
pub fn norm_qr(lambda: &Partition, p: &QRacahParams) -> Result<C64> {
    if lambda.len() != p.n {
        return Err(Error::LengthMismatch(lambda.len(), p.n));
    }
    let ratio = aw_norm_symbolic(lambda).times(&k_constant_symbolic(p.n).inverse());
    ratio.eval_truncated(&p.sym_values(), p.n, p.big_n)
}

/// Closed product for ⟨1,1⟩_qR.
pub fn summation_formula(p: &QRacahParams) -> Result<C64> {
    let (q, t, n) = (p.qv(), p.tv(), p.n as i32);
    let mut num = Vec::new();
    let mut den = Vec::new();
    for i in 1..=n {
        num.push(p.t0 * p.t0 * q * t.powi(2 * n - i - 1));
        num.push((p.t1 * p.t2).inv() * q * t.powi(i - n));
        den.push(p.t0 / p.t1 * q * t.powi(n - i));
        den.push(p.t0 / p.t2 * q * t.powi(n - i));
    }
    qpoch_finite_ratio(&num, &den, p.q, p.big_n).map_err(|e| Error::PoleInProduct(e.to_string()))
}

/// The finite measure Σ_{λ_n ≤ N} Δ^qR(ρq^λ) δ_{ρq^λ}.
pub fn qr_measure(p: &QRacahParams) -> Result<DiscreteMeasure> {
    let q = p.qv();
    let mut meas = DiscreteMeasure::new(p.n);
    for lambda in AscendingIndex::all_bounded(p.n, p.big_n) {
        let node: Vec<C64> =
            lambda.parts().iter().enumerate().map(|(im1, &l)| p.rho(im1 + 1) * q.powi(l as i32)).collect();
        meas.push(&node, weight_qr(&lambda, p)?);
    }
    Ok(meas)
}

/// ⟨f,g⟩_qR.
pub fn bilinear_qr(f: &LaurentPolynomial, g: &LaurentPolynomial, p: &QRacahParams) -> Result<C64> {
    Ok(qr_measure(p)?.bilinear(f, g))
}

/// Λ_N: partitions of length n with λ₁ ≤ N, graded-lex.
pub fn lambda_n(n: usize, big_n: u32) -> Vec<Partition> {
    let mut v: Vec<Partition> = AscendingIndex::all_bounded(n, big_n)
        .into_iter()
        .map(|a| {
            let mut parts = a.parts().to_vec();
            parts.reverse();
            Partition::new(parts).unwrap()
        })
        .collect();
    crate::bcpoly::sort_graded_lex(&mut v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::askey_wilson::{aw_norm, aw_polynomial};
    use crate::measures::multi_discrete_weight;
    use crate::measures::DiscreteChain;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn asc(v: &[u32]) -> AscendingIndex {
        AscendingIndex::new(v.to_vec()).unwrap()
    }

    fn racah(n: usize, big_n: u32) -> QRacahParams {
        QRacahParams::new(0.5, 0.3, [c(0.4, 0.2), c(-0.3, 0.1), c(0.2, -0.35)], n, big_n).unwrap()
    }

    #[test]
    fn weight_edge_cases() {
        let p = racah(2, 2);
        assert_eq!(weight_qr(&asc(&[0, 0]), &p).unwrap(), ONE);
        assert_eq!(weight_qr(&asc(&[1, 3]), &p).unwrap(), c(0.0, 0.0));
        // structural t₃ agrees with the numerical one
        let aw = p.aw_params().unwrap();
        let a = weight_qr(&asc(&[1, 2]), &p).unwrap();
        let b = weight_qr_generic(&asc(&[1, 2]), &aw).unwrap();
        assert!((a - b).norm() < 1e-11 * a.norm());
    }

    #[test]
    fn k_forms_agree() {
        let p = AWParams::new(0.5, 0.25, [c(0.3, 0.0), c(-0.4, 0.0), c(0.0, 0.2), c(0.5, 0.1)], 2).unwrap();
        for r in 0..=2 {
            k_constant(r, &p).unwrap();
        }
        assert_eq!(k_constant(0, &p).unwrap(), ONE);
    }

    #[test]
    fn discrete_weight_factorises() {
        let p = AWParams::new(0.5, 0.35, [c(1.9, 0.3), c(-0.4, 0.1), c(0.2, 0.3), c(0.3, -0.2)], 3).unwrap();
        for nu in [vec![1], vec![0, 0], vec![0, 2], vec![1, 1], vec![0, 1, 3], vec![2, 2, 2]] {
            let r = nu.len();
            let chain = DiscreteChain { param: 0, nu: asc(&nu) };
            let d = multi_discrete_weight(&chain, &p).unwrap();
            let k = k_constant(r, &p).unwrap() * weight_qr_generic(&chain.nu, &p).unwrap();
            assert!((d - k).norm() < 1e-10 * d.norm(), "{nu:?}: {d} vs {k}");
        }
    }

    #[test]
    fn symbolic_norm_matches_numeric() {
        let p = AWParams::new(0.5, 0.3, [c(0.3, 0.1), c(-0.4, 0.0), c(0.2, 0.3), c(0.5, -0.1)], 2).unwrap();
        let v = SymValues { q: p.q, t: p.tv(), tt: p.tt };
        for lam in [vec![0, 0], vec![2, 1], vec![3, 3]] {
            let lam = Partition::new(lam).unwrap();
            let a = aw_norm_symbolic(&lam).eval(&v).unwrap() * 8.0;
            let b = aw_norm(&lam, &p).unwrap();
            assert!((a - b).norm() < 1e-12 * b.norm());
        }
    }

    #[test]
    fn summation_formula_holds() {
        for (n, big_n) in [(1, 1), (1, 3), (2, 2), (3, 1)] {
            let p = racah(n, big_n);
            let one = LaurentPolynomial::one(n);
            let sum = bilinear_qr(&one, &one, &p).unwrap();
            let closed = summation_formula(&p).unwrap();
            let norm0 = norm_qr(&Partition::zero(n), &p).unwrap();
            assert!((sum - closed).norm() < 1e-10 * closed.norm(), "({n},{big_n}): {sum} vs {closed}");
            assert!((norm0 - closed).norm() < 1e-10 * closed.norm(), "({n},{big_n}): {norm0} vs {closed}");
        }
    }

    #[test]
    fn orthogonality_on_lambda_n() {
        for (n, big_n) in [(1, 2), (2, 2)] {
            let p = racah(n, big_n);
            let aw = p.aw_params().unwrap();
            let meas = qr_measure(&p).unwrap();
            let lams = lambda_n(n, big_n);
            let polys: Vec<LaurentPolynomial> =
                lams.iter().map(|l| aw_polynomial(l, &aw).unwrap().to_laurent()).collect();
            let g = meas.gram(&polys);
            for a in 0..lams.len() {
                let norm = norm_qr(&lams[a], &p).unwrap();
                assert!((g[a][a] - norm).norm() < 1e-8 * norm.norm(), "{}: {} vs {norm}", lams[a], g[a][a]);
                for b in 0..a {
                    assert!(g[a][b].norm() < 1e-8 * (g[a][a] * g[b][b]).norm().sqrt());
                }
            }
        }
    }

    #[test]
    fn norm_outside_lambda_n() {
        let p = racah(2, 2);
        let r = norm_qr(&Partition::new(vec![3, 0]).unwrap(), &p);
        assert!(matches!(r, Err(Error::UncancelledPole(_))) || r.unwrap() == c(0.0, 0.0));
    }
}
