//! Finite node/weight measures and deterministic Gram-matrix assembly.
//!
//! Every bilinear form in the crate is reduced to a finite sum
//! Σ_k w_k f(x_k) g(x_k): torus integrals through the trapezoid rule on a
//! tensor grid of angles, discrete parts and Jackson sums directly.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::bcpoly::LaurentPolynomial;

/// Nodes per parallel work unit. Partial sums are combined in chunk order,
/// so the result does not depend on the thread count.
const CHUNK: usize = 2048;

/// A finite measure Σ_k w_k δ_{x_k} on (ℂ*)ⁿ.
#[derive(Clone, Debug, Default)]
pub struct DiscreteMeasure {
    n: usize,
    nodes: Vec<C64>,
    weights: Vec<C64>,
}

impl DiscreteMeasure {
    pub fn new(n: usize) -> Self {
        DiscreteMeasure { n, nodes: Vec::new(), weights: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn push(&mut self, node: &[C64], w: C64) {
        debug_assert_eq!(node.len(), self.n);
        self.nodes.extend_from_slice(node);
        self.weights.push(w);
    }

    /// Appends all nodes of `other` with weights multiplied by `scale`.
    pub fn append_scaled(&mut self, other: &DiscreteMeasure, scale: C64) {
        assert_eq!(self.n, other.n);
        self.nodes.extend_from_slice(&other.nodes);
        self.weights.extend(other.weights.iter().map(|w| w * scale));
    }

    pub fn node(&self, k: usize) -> &[C64] {
        &self.nodes[k * self.n..(k + 1) * self.n]
    }

    pub fn weight(&self, k: usize) -> C64 {
        self.weights[k]
    }

    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    /// Σ w_k.
    pub fn total_mass(&self) -> C64 {
        self.reduce(|_, w| w)
    }

    /// Σ_k w_k f(x_k) with a deterministic chunked reduction.
    pub fn reduce<F>(&self, f: F) -> C64
    where
        F: Fn(&[C64], C64) -> C64 + Sync,
    {
        let nk = self.len();
        let nchunks = nk.div_ceil(CHUNK);
        let partial: Vec<C64> = (0..nchunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(nk);
                (lo..hi).map(|k| f(self.node(k), self.weights[k])).sum()
            })
            .collect();
        partial.into_iter().sum()
    }

    /// Σ_k w_k f(x_k) g(x_k).
    pub fn bilinear(&self, f: &LaurentPolynomial, g: &LaurentPolynomial) -> C64 {
        self.reduce(|x, w| w * f.eval_poly(x) * g.eval_poly(x))
    }

    /// G_{ab} = Σ_k w_k b_a(x_k) b_b(x_k); symmetric by construction.
    pub fn gram(&self, basis: &[LaurentPolynomial]) -> Vec<Vec<C64>> {
        let nb = basis.len();
        let nk = self.len();
        let nchunks = nk.div_ceil(CHUNK);
        let zero = vec![C64::new(0.0, 0.0); nb * nb];
        let partial: Vec<Vec<C64>> = (0..nchunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(nk);
                let mut acc = zero.clone();
                let mut vals = vec![C64::new(0.0, 0.0); nb];
                for k in lo..hi {
                    let x = self.node(k);
                    for (v, b) in vals.iter_mut().zip(basis) {
                        *v = b.eval_poly(x);
                    }
                    let w = self.weights[k];
                    for a in 0..nb {
                        let wa = w * vals[a];
                        for b in a..nb {
                            acc[a * nb + b] += wa * vals[b];
                        }
                    }
                }
                acc
            })
            .collect();
        let mut g = zero;
        for p in partial {
            for (x, y) in g.iter_mut().zip(p) {
                *x += y;
            }
        }
        (0..nb)
            .map(|a| (0..nb).map(|b| if a <= b { g[a * nb + b] } else { g[b * nb + a] }).collect())
            .collect()
    }
}

/// Half-offset angle grid e^{2πi(k+½)/M}, k = 0..M−1. The offset keeps the
/// nodes away from z = ±1.
pub fn circle_grid(m: usize) -> Vec<C64> {
    (0..m)
        .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.5) / m as f64))
        .collect()
}

/// Value of a bilinear form together with quadrature metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub value: C64,
    pub abs_error_estimate: f64,
    pub quadrature_points_per_axis: usize,
    pub discrete_points_used: usize,
    pub truncation_depth: usize,
}

/// ⟨P_λ, P_μ⟩ = c_λᵀ G c_μ (bilinear, no conjugation).
pub fn form_from_gram(gram: &[Vec<C64>], a: &[C64], b: &[C64]) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for (i, ai) in a.iter().enumerate() {
        if ai.norm() == 0.0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            s += ai * gram[i][j] * bj;
        }
    }
    s
}
