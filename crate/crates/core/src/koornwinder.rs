//! Parameters of the Askey–Wilson family and Koornwinder's second-order
//! q-difference operator D.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bcpoly::{dominance_leq, monomial_w, partitions_dominated_by, LaurentPolynomial, Partition};
use crate::error::{Error, Result};
use crate::qseries::{Deformation, QBase};

/// Denominator factors of φ_j^± below this magnitude count as poles.
pub const PHI_POLE_TOL: f64 = 1e-12;

/// Seed of the sample-point generator used by [`op_matrix`].
pub const SAMPLE_SEED: u64 = 0x5eed_0f_d1ff;

const MAX_ATTEMPTS: usize = 20;
const MAX_COND: f64 = 1e10;

/// (q, t, t₀..t₃) in n variables.
#[derive(Clone, Debug, PartialEq)]
pub struct AWParams {
    pub q: QBase,
    pub t: Deformation,
    pub tt: [C64; 4],
    pub n: usize,
}

fn is_real(x: C64) -> bool {
    x.im.abs() <= 1e-14 * x.norm()
}

fn real_geq_one(x: C64) -> bool {
    is_real(x) && x.re >= 1.0
}

impl AWParams {
    pub fn new(q: f64, t: f64, tt: [C64; 4], n: usize) -> Result<Self> {
        let q = QBase::new(q)?;
        let t = Deformation::new(q, t)?;
        Self::with_deformation(q, t, tt, n)
    }

    /// Real parameters given as plain floats.
    pub fn real(q: f64, t: f64, tt: [f64; 4], n: usize) -> Result<Self> {
        Self::new(q, t, tt.map(|x| C64::new(x, 0.0)), n)
    }

    pub fn with_deformation(q: QBase, t: Deformation, tt: [C64; 4], n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if tt.iter().any(|x| x.norm() == 0.0) {
            return Err(Error::InvalidParameter("the parameters t_i must be nonzero".into()));
        }
        Ok(AWParams { q, t, tt, n })
    }

    pub fn qv(&self) -> f64 {
        self.q.get()
    }

    pub fn tv(&self) -> f64 {
        self.t.t()
    }

    pub fn tau(&self) -> f64 {
        self.t.tau()
    }

    /// t₀t₁t₂t₃.
    pub fn tprod(&self) -> C64 {
        self.tt.iter().product()
    }

    pub fn with_n(&self, n: usize) -> Self {
        AWParams { n, ..self.clone() }
    }

    /// Generic domain: the eight arguments of t_i^{±1} are distinct and
    /// t₀t₁t₂t₃ is not a real number ≥ 1.
    pub fn in_v(&self) -> bool {
        use std::f64::consts::TAU;
        let mut args = Vec::with_capacity(8);
        for x in self.tt {
            let a = x.arg().rem_euclid(TAU);
            args.push(a);
            args.push((-x.arg()).rem_euclid(TAU));
        }
        for i in 0..8 {
            for j in 0..i {
                let d = (args[i] - args[j]).rem_euclid(TAU);
                if d.min(TAU - d) < 1e-12 {
                    return false;
                }
            }
        }
        !real_geq_one(self.tprod())
    }

    /// Positivity domain: parameters are real or come in conjugate pairs,
    /// and no pairwise product is a real number ≥ 1.
    pub fn in_v_aw(&self) -> bool {
        let mut used = [false; 4];
        for i in 0..4 {
            if used[i] {
                continue;
            }
            let x = self.tt[i];
            if is_real(x) {
                used[i] = true;
                continue;
            }
            let partner = (0..4).find(|&j| {
                j != i && !used[j] && (self.tt[j] - x.conj()).norm() <= 1e-13 * x.norm()
            });
            match partner {
                Some(j) => {
                    used[i] = true;
                    used[j] = true;
                }
                None => return false,
            }
        }
        for k in 0..4 {
            for l in k + 1..4 {
                if real_geq_one(self.tt[k] * self.tt[l]) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether all parameters are real or conjugate pairs (so forms are real).
    pub fn is_conjugate_closed(&self) -> bool {
        let mut used = [false; 4];
        for i in 0..4 {
            if used[i] {
                continue;
            }
            let x = self.tt[i];
            used[i] = true;
            if is_real(x) {
                continue;
            }
            match (0..4).find(|&j| !used[j] && (self.tt[j] - x.conj()).norm() <= 1e-13 * x.norm()) {
                Some(j) => used[j] = true,
                None => return false,
            }
        }
        true
    }
}

/// φ_j^+(z) (j is 0-based).
pub fn phi_plus(j: usize, z: &[C64], p: &AWParams) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    let zj = z[j];
    let q = p.qv();
    let t = p.tv();
    let mut num: C64 = p.tt.iter().map(|&ti| one - ti * zj).product();
    let mut den = (one - zj * zj) * (one - zj * zj * q);
    check_den(one - zj * zj, j)?;
    check_den(one - zj * zj * q, j)?;
    for (l, &zl) in z.iter().enumerate() {
        if l == j {
            continue;
        }
        let d1 = one - zl * zj;
        let d2 = one - zj / zl;
        check_den(d1, j)?;
        check_den(d2, j)?;
        num *= (one - zl * zj * t) * (one - zj / zl * t);
        den *= d1 * d2;
    }
    Ok(num / den)
}

fn check_den(d: C64, j: usize) -> Result<()> {
    if d.norm() < PHI_POLE_TOL {
        Err(Error::NearPole(format!("phi_{} denominator {d}", j + 1)))
    } else {
        Ok(())
    }
}

/// φ_j^-(z) = φ_j^+(z^{-1}).
pub fn phi_minus(j: usize, z: &[C64], p: &AWParams) -> Result<C64> {
    let zi: Vec<C64> = z.iter().map(|x| x.inv()).collect();
    phi_plus(j, &zi, p)
}

/// (Df)(z).
pub fn apply_d(f: &LaurentPolynomial, z: &[C64], p: &AWParams) -> Result<C64> {
    let f0 = f.eval(z)?;
    let q = p.qv();
    let mut acc = C64::new(0.0, 0.0);
    let mut w = z.to_vec();
    for j in 0..z.len() {
        let pp = phi_plus(j, z, p)?;
        let pm = phi_minus(j, z, p)?;
        w[j] = z[j] * q;
        let fp = f.eval(&w)?;
        w[j] = z[j] / q;
        let fm = f.eval(&w)?;
        w[j] = z[j];
        acc += pp * (fp - f0) + pm * (fm - f0);
    }
    Ok(acc)
}

/// E_λ.
pub fn eigenvalue_e(lambda: &Partition, p: &AWParams) -> C64 {
    let n = lambda.len() as i32;
    let q = p.qv();
    let t = p.tv();
    let tp = p.tprod() / q;
    let mut e = C64::new(0.0, 0.0);
    for (jm1, &l) in lambda.parts().iter().enumerate() {
        let j = jm1 as i32 + 1;
        let ql = q.powi(l as i32);
        e += tp * t.powi(2 * n - j - 1) * (ql - 1.0) + t.powi(j - 1) * (1.0 / ql - 1.0);
    }
    e
}

/// min_{μ<λ} |E_λ − E_μ| over the dominated set (∞ for λ minimal).
pub fn eigen_separation(lambda: &Partition, p: &AWParams) -> (f64, Option<Partition>) {
    let el = eigenvalue_e(lambda, p);
    let mut best = (f64::INFINITY, None);
    for mu in partitions_dominated_by(lambda) {
        if &mu == lambda {
            continue;
        }
        let d = (el - eigenvalue_e(&mu, p)).norm();
        if d < best.0 {
            best = (d, Some(mu));
        }
    }
    best
}

/// The matrix E_{λ',μ} over the partitions dominated by λ.
#[derive(Clone, Debug)]
pub struct TriangularOpMatrix {
    pub index: Vec<Partition>,
    /// `entries[a][b]` is the coefficient of m_{index[b]} in D m_{index[a]}.
    pub entries: Vec<Vec<C64>>,
    /// Max relative residual of the interpolation solve.
    pub residual: f64,
}

impl TriangularOpMatrix {
    pub fn position(&self, mu: &Partition) -> Option<usize> {
        self.index.iter().position(|x| x == mu)
    }

    /// Σ_μ E_{λ',μ} m_μ as a Laurent polynomial.
    pub fn row_polynomial(&self, a: usize) -> LaurentPolynomial {
        let n = self.index[0].len();
        let mut out = LaurentPolynomial::zero(n);
        for (b, mu) in self.index.iter().enumerate() {
            out = &out + &monomial_w(mu).scale(self.entries[a][b]);
        }
        out
    }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let r: f64 = rng.gen_range(0.7..1.4);
            let th: f64 = rng.gen_range(0.0..1.0);
            C64::from_polar(r, std::f64::consts::TAU * th)
        })
        .collect()
}

/// Extracts E_{λ',μ} for all λ', μ ≤ λ.
///
/// D m_{λ'} is sampled on a tensor grid of circles with distinct radii inside
/// the unit disc (so no sample meets a pole of φ_j^±) and its Laurent
/// coefficients are read off by a discrete Fourier transform. The grid has
/// more than twice the per-axis degree in points, so the transform is exact
/// for the polynomial D m_{λ'}; this is an orthogonal, perfectly conditioned
/// version of the interpolation solve in [`op_matrix_seeded`].
pub fn op_matrix(lambda: &Partition, p: &AWParams) -> Result<TriangularOpMatrix> {
    let index = partitions_dominated_by(lambda);
    let nb = index.len();
    let n = lambda.len();
    let deg = lambda.parts().first().copied().unwrap_or(0) as usize;
    let m = 2 * deg + 2;
    let radii: Vec<f64> = (0..n).map(|j| 0.9 - 0.05 * j as f64).collect();
    let axis: Vec<Vec<C64>> = radii
        .iter()
        .map(|&r| {
            (0..m)
                .map(|k| C64::from_polar(r, std::f64::consts::TAU * (k as f64 + 0.5) / m as f64))
                .collect()
        })
        .collect();
    let total = m.pow(n as u32);
    let monos: Vec<LaurentPolynomial> = index.iter().map(monomial_w).collect();
    let mut entries = vec![vec![C64::new(0.0, 0.0); nb]; nb];
    let mut z = vec![C64::new(0.0, 0.0); n];
    for flat in 0..total {
        let mut rem = flat;
        for j in 0..n {
            z[j] = axis[j][rem % m];
            rem /= m;
        }
        // z^{-μ} for every basis exponent
        let inv: Vec<C64> = index
            .iter()
            .map(|mu| {
                mu.parts()
                    .iter()
                    .zip(&z)
                    .map(|(&e, x)| x.powi(-(e as i32)))
                    .product()
            })
            .collect();
        for (a, f) in monos.iter().enumerate() {
            let d = apply_d(f, &z, p)?;
            for b in 0..nb {
                entries[a][b] += d * inv[b];
            }
        }
    }
    for row in entries.iter_mut() {
        for v in row.iter_mut() {
            *v /= total as f64;
        }
    }
    let mt = TriangularOpMatrix { index, entries, residual: 0.0 };
    check_diagonal(&mt, p)?;
    Ok(mt)
}

fn check_diagonal(m: &TriangularOpMatrix, p: &AWParams) -> Result<()> {
    for (k, mu) in m.index.iter().enumerate() {
        let e = eigenvalue_e(mu, p);
        let rel = (m.entries[k][k] - e).norm() / e.norm().max(1.0);
        if rel > 1e-8 {
            return Err(Error::DiagonalMismatch { mu: mu.parts().to_vec(), rel });
        }
    }
    Ok(())
}

/// Extraction by a square interpolation solve: D m_{λ'} is sampled at as many
/// seeded random points (radii in [0.7, 1.4]) as there are basis monomials.
/// Sample sets hitting a pole or giving a condition number above 1e10 are
/// redrawn, at most 20 times.
pub fn op_matrix_seeded(lambda: &Partition, p: &AWParams, seed: u64) -> Result<TriangularOpMatrix> {
    let index = partitions_dominated_by(lambda);
    let nb = index.len();
    let n = lambda.len();
    let monos: Vec<LaurentPolynomial> = index.iter().map(monomial_w).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _attempt in 0..MAX_ATTEMPTS {
        let pts: Vec<Vec<C64>> = (0..nb).map(|_| random_point(&mut rng, n)).collect();
        let mut a = DMatrix::<C64>::zeros(nb, nb);
        let mut rhs = DMatrix::<C64>::zeros(nb, nb);
        let mut ok = true;
        'outer: for (s, z) in pts.iter().enumerate() {
            for (b, m) in monos.iter().enumerate() {
                a[(s, b)] = m.eval(z)?;
                match apply_d(m, z, p) {
                    Ok(v) => rhs[(s, b)] = v,
                    Err(Error::NearPole(_)) => {
                        ok = false;
                        break 'outer;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        if !ok {
            continue;
        }
        let sv = a.clone().singular_values();
        let smax = sv.max();
        let smin = sv.min();
        if smin == 0.0 || smax / smin > MAX_COND {
            continue;
        }
        let lu = a.clone().lu();
        let Some(sol) = lu.solve(&rhs) else { continue };
        // column b of `sol` holds the coefficients of D m_{index[b]}
        let resid = (&a * &sol - &rhs).norm() / rhs.norm().max(1e-300);
        let mut entries = vec![vec![C64::new(0.0, 0.0); nb]; nb];
        for row in 0..nb {
            for col in 0..nb {
                entries[row][col] = sol[(col, row)];
            }
        }
        let m = TriangularOpMatrix { index, entries, residual: resid };
        check_diagonal(&m, p)?;
        return Ok(m);
    }
    Err(Error::IllConditionedSamples(MAX_ATTEMPTS))
}

/// Largest |E_{λ',μ}| over entries with μ not dominated by λ'.
pub fn triangularity_defect(m: &TriangularOpMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, la) in m.index.iter().enumerate() {
        for (b, mu) in m.index.iter().enumerate() {
            if !dominance_leq(mu, la).unwrap_or(false) {
                worst = worst.max(m.entries[a][b].norm());
            }
        }
    }
    worst
}
