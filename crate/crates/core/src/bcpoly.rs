//! Partitions, the BC dominance order, Weyl-group orbits and sparse Laurent
//! polynomials in n variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped.
pub const PRUNE: f64 = 1e-300;

/// A weakly decreasing vector of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn zero(n: usize) -> Self {
        Partition(vec![0; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&p| p == 0)
    }

    /// Sort key of the fixed total order: graded, then lexicographic.
    pub fn order_key(&self) -> (u32, &[u32]) {
        (self.size(), &self.0)
    }

    /// All partitions of length n with |λ| ≤ max_size, in the fixed order.
    pub fn all_up_to(n: usize, max_size: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fill_bounded(n, max_size, max_size, &mut cur, &mut out);
        sort_graded_lex(&mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

fn fill_bounded(n: usize, cap: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if cur.len() == n {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in 0..=cap.min(budget) {
        cur.push(p);
        fill_bounded(n, p, budget - p, cur, out);
        cur.pop();
    }
}

/// Sorts into graded-lex order: by |μ| first, then lexicographically.
pub fn sort_graded_lex(v: &mut [Partition]) {
    v.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
}

/// A weakly increasing vector of nonnegative integers (λ₀ := 0 implied).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AscendingIndex(Vec<u32>);

impl AscendingIndex {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(format!("{parts:?} is not weakly increasing")));
        }
        Ok(AscendingIndex(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// λ_{j-1} with the convention λ₀ = 0 (j is 1-based).
    pub fn prev(&self, j: usize) -> u32 {
        if j <= 1 {
            0
        } else {
            self.0[j - 2]
        }
    }

    /// All ascending vectors of length r with entries ≤ max, lexicographic.
    pub fn all_bounded(r: usize, max: u32) -> Vec<AscendingIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(r);
        fn rec(r: usize, lo: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<AscendingIndex>) {
            if cur.len() == r {
                out.push(AscendingIndex(cur.clone()));
                return;
            }
            for v in lo..=max {
                cur.push(v);
                rec(r, v, max, cur, out);
                cur.pop();
            }
        }
        rec(r, 0, max, &mut cur, &mut out);
        out
    }
}

/// BC dominance: μ ≤ λ iff every leading partial sum of μ is at most λ's.
pub fn dominance_leq(mu: &Partition, lambda: &Partition) -> Result<bool> {
    if mu.len() != lambda.len() {
        return Err(Error::LengthMismatch(mu.len(), lambda.len()));
    }
    let (mut sm, mut sl) = (0u32, 0u32);
    for (m, l) in mu.0.iter().zip(&lambda.0) {
        sm += m;
        sl += l;
        if sm > sl {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every μ ≤ λ in dominance order, in graded-lex order.
pub fn partitions_dominated_by(lambda: &Partition) -> Vec<Partition> {
    let n = lambda.len();
    let mut prefix = Vec::with_capacity(n);
    let mut acc = 0;
    for &p in &lambda.0 {
        acc += p;
        prefix.push(acc);
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(prefix: &[u32], cap: u32, sum: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        let i = cur.len();
        if i == prefix.len() {
            out.push(Partition(cur.clone()));
            return;
        }
        let hi = cap.min(prefix[i] - sum);
        for p in 0..=hi {
            cur.push(p);
            rec(prefix, p, sum + p, cur, out);
            cur.pop();
        }
    }
    let cap = lambda.0.first().copied().unwrap_or(0);
    rec(&prefix, cap, 0, &mut cur, &mut out);
    sort_graded_lex(&mut out);
    out
}

/// Sparse Laurent polynomial in a fixed number of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPolynomial {
    n: usize,
    terms: BTreeMap<Vec<i32>, C64>,
}

impl LaurentPolynomial {
    pub fn zero(n: usize) -> Self {
        LaurentPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: C64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, C64::new(1.0, 0.0))
    }

    /// The monomial c·z^e.
    pub fn monomial(exp: Vec<i32>, c: C64) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[i32]) -> C64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, exp: Vec<i32>, c: C64) {
        debug_assert_eq!(exp.len(), self.n);
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().norm() < PRUNE {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if c.norm() >= PRUNE {
                    v.insert(c);
                }
            }
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero(self.n);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * s);
        }
        out
    }

    /// Largest |e_i| over all terms and axes.
    pub fn max_axis_degree(&self) -> u32 {
        self.terms.keys().flat_map(|k| k.iter()).map(|e| e.unsigned_abs()).max().unwrap_or(0)
    }

    /// Σ coeff · ∏ z_i^{e_i}, summed in sorted key order.
    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        if z.len() != self.n {
            return Err(Error::LengthMismatch(z.len(), self.n));
        }
        if z.iter().any(|x| x.norm() == 0.0) {
            return Err(Error::ZeroCoordinate);
        }
        let mut s = C64::new(0.0, 0.0);
        for (k, v) in &self.terms {
            let mut m = *v;
            for (x, &e) in z.iter().zip(k) {
                m *= x.powi(e);
            }
            s += m;
        }
        Ok(s)
    }

    /// Evaluation for coordinates that may vanish, valid only if no term has
    /// a negative exponent on a zero coordinate (used for ordinary polynomials).
    pub fn eval_poly(&self, z: &[C64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (k, v) in &self.terms {
            let mut m = *v;
            for (x, &e) in z.iter().zip(k) {
                if e != 0 {
                    m *= x.powi(e);
                }
            }
            s += m;
        }
        s
    }

    /// Applies z_i ↦ z_i q^{±1} style substitution: z ↦ s·z on axis `axis`.
    pub fn scale_axis(&self, axis: usize, s: C64) -> Self {
        let mut out = Self::zero(self.n);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * s.powi(k[axis]));
        }
        out
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), *v);
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), -*v);
        }
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero(self.n);
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let k: Vec<i32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(k, va * vb);
            }
        }
        out
    }
}

fn distinct_permutations(v: &[i32]) -> BTreeSet<Vec<i32>> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable();
    let mut out = BTreeSet::new();
    // Iterate next_permutation over the sorted multiset.
    loop {
        out.insert(sorted.clone());
        let n = sorted.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && sorted[i - 1] >= sorted[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while sorted[j] <= sorted[i - 1] {
            j -= 1;
        }
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
    }
    out
}

/// Exponent vectors of the W-orbit (permutations and sign flips) of λ.
pub fn w_orbit(lambda: &Partition) -> BTreeSet<Vec<i32>> {
    let base: Vec<i32> = lambda.0.iter().map(|&p| p as i32).collect();
    let mut out = BTreeSet::new();
    for perm in distinct_permutations(&base) {
        let nz: Vec<usize> = (0..perm.len()).filter(|&i| perm[i] != 0).collect();
        for mask in 0u32..(1 << nz.len()) {
            let mut v = perm.clone();
            for (b, &i) in nz.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    v[i] = -v[i];
                }
            }
            out.insert(v);
        }
    }
    out
}

/// m_λ = Σ_{μ ∈ Wλ} z^μ.
pub fn monomial_w(lambda: &Partition) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero(lambda.len());
    for e in w_orbit(lambda) {
        p.add_term(e, C64::new(1.0, 0.0));
    }
    p
}

/// m̃_λ = Σ_{μ ∈ Sλ} z^μ (permutations only).
pub fn monomial_s(lambda: &[i32]) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero(lambda.len());
    for e in distinct_permutations(lambda) {
        p.add_term(e, C64::new(1.0, 0.0));
    }
    p
}

/// m_λ(z|u) = u^{|λ|} m_λ(z/u).
pub fn rescale_monomial(lambda: &Partition, u: C64) -> Result<LaurentPolynomial> {
    if u.norm() == 0.0 {
        return Err(Error::ZeroScale);
    }
    let size = lambda.size() as i32;
    let mut p = LaurentPolynomial::zero(lambda.len());
    for e in w_orbit(lambda) {
        let deg: i32 = e.iter().sum();
        p.add_term(e, u.powi(size - deg));
    }
    Ok(p)
}
