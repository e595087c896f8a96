//! Products of infinite q-shifted factorials with monomial arguments
//! t₀^a t₁^b t₂^c t₃^d t^e q^k, kept symbolic so that factors which vanish
//! under the truncation t₃ = t^{1−n}t₀^{−1}q^{−N} can be cancelled before
//! anything is evaluated.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qseries::{qpoch_ratio, QBase};

/// The monomial t₀^{e₀} t₁^{e₁} t₂^{e₂} t₃^{e₃} t^{e₄} q^{qexp}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub exps: [i32; 5],
    pub qexp: i32,
}

impl Mono {
    pub const fn new(exps: [i32; 5], qexp: i32) -> Self {
        Mono { exps, qexp }
    }

    pub fn q(k: i32) -> Self {
        Mono { exps: [0; 5], qexp: k }
    }

    pub fn t(k: i32) -> Self {
        Mono { exps: [0, 0, 0, 0, k], qexp: 0 }
    }

    /// t_j for j = 0..3.
    pub fn param(j: usize) -> Self {
        let mut exps = [0; 5];
        exps[j] = 1;
        Mono { exps, qexp: 0 }
    }

    pub fn mul(self, o: Mono) -> Mono {
        let mut exps = self.exps;
        for (e, f) in exps.iter_mut().zip(o.exps) {
            *e += f;
        }
        Mono { exps, qexp: self.qexp + o.qexp }
    }

    pub fn pow(self, k: i32) -> Mono {
        Mono { exps: self.exps.map(|e| e * k), qexp: self.qexp * k }
    }

    pub fn inv(self) -> Mono {
        self.pow(-1)
    }

    pub fn eval(&self, v: &SymValues) -> C64 {
        let mut x = C64::new(v.q.get().powi(self.qexp) * v.t.powi(self.exps[4]), 0.0);
        for j in 0..4 {
            if self.exps[j] != 0 {
                x *= v.tt[j].powi(self.exps[j]);
            }
        }
        x
    }
}

/// Numerical values of the symbols.
#[derive(Clone, Copy, Debug)]
pub struct SymValues {
    pub q: QBase,
    pub t: f64,
    pub tt: [C64; 4],
}

/// ∏ (num;q)_∞ / ∏ (den;q)_∞.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PochProduct {
    pub num: Vec<Mono>,
    pub den: Vec<Mono>,
}

impl PochProduct {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(&mut self, m: Mono) -> &mut Self {
        self.num.push(m);
        self
    }

    pub fn den(&mut self, m: Mono) -> &mut Self {
        self.den.push(m);
        self
    }

    pub fn times(&self, o: &PochProduct) -> PochProduct {
        let mut r = self.clone();
        r.num.extend(&o.num);
        r.den.extend(&o.den);
        r
    }

    pub fn inverse(&self) -> PochProduct {
        PochProduct { num: self.den.clone(), den: self.num.clone() }
    }

    /// Direct numerical evaluation (generic parameters).
    pub fn eval(&self, v: &SymValues) -> Result<C64> {
        let num: Vec<C64> = self.num.iter().map(|m| m.eval(v)).collect();
        let den: Vec<C64> = self.den.iter().map(|m| m.eval(v)).collect();
        qpoch_ratio(&num, &den, v.q).map_err(|e| Error::PoleInProduct(e.to_string()))
    }

    /// Value at t₃ = t^{1−n} t₀^{−1} q^{−N}, as the limit t₃ → that value.
    ///
    /// After substitution a factor whose argument is the pure power q^k with
    /// k ≤ 0 vanishes; along the limit it behaves like d·ε, where d is the
    /// t₃-exponent of the original argument. Such factors are cancelled in
    /// pairs between numerator and denominator, leaving the ratio of the d's
    /// and of the remaining nonzero factors.
    pub fn eval_truncated(&self, v: &SymValues, n: usize, big_n: u32) -> Result<C64> {
        let subst = |m: &Mono| -> (Mono, i32) {
            let d = m.exps[3];
            let exps = [m.exps[0] - d, m.exps[1], m.exps[2], 0, m.exps[4] + (1 - n as i32) * d];
            (Mono { exps, qexp: m.qexp - big_n as i32 * d }, d)
        };
        let mut vals = *v;
        vals.tt[3] = C64::new(0.0, 0.0);
        let mut num = Vec::new();
        let mut den = Vec::new();
        let mut zeros_num: Vec<i32> = Vec::new();
        let mut zeros_den: Vec<i32> = Vec::new();
        let mut regular = C64::new(1.0, 0.0);
        let q = v.q.get();
        for (side, list) in [(0, &self.num), (1, &self.den)] {
            for m in list {
                let (s, d) = subst(m);
                if s.exps == [0; 5] && s.qexp <= 0 {
                    // (q^k;q)_∞ = ∏_{j=k}^{-1}(1 − q^j) · (1 − q⁰) · (q;q)_∞
                    let finite: f64 = (s.qexp..0).map(|j| 1.0 - q.powi(j)).product();
                    let reg = C64::new(finite, 0.0);
                    if side == 0 {
                        zeros_num.push(d);
                        regular *= reg;
                        num.push(C64::new(q, 0.0));
                    } else {
                        zeros_den.push(d);
                        regular /= reg;
                        den.push(C64::new(q, 0.0));
                    }
                } else if side == 0 {
                    num.push(s.eval(&vals));
                } else {
                    den.push(s.eval(&vals));
                }
            }
        }
        if zeros_den.contains(&0) || zeros_den.len() > zeros_num.len() {
            return Err(Error::UncancelledPole(format!(
                "{} vanishing denominator factor(s) against {} in the numerator",
                zeros_den.len(),
                zeros_num.len()
            )));
        }
        if zeros_num.len() > zeros_den.len() || zeros_num.contains(&0) {
            return Ok(C64::new(0.0, 0.0));
        }
        let orders: f64 = zeros_num.iter().map(|&d| d as f64).product::<f64>()
            / zeros_den.iter().map(|&d| d as f64).product::<f64>();
        let rest = qpoch_ratio(&num, &den, v.q).map_err(|e| Error::UncancelledPole(e.to_string()))?;
        Ok(rest * regular * orders)
    }
}
