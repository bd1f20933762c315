//! Independent reference computations used by the integration tests.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use sos_core::sosmap::ObjectiveContext;
use sos_core::{CoordinateRing, LinearTuple, QuadraticForm};

pub const TABLE3_CUBIC: [i64; 10] = [-3, 1, 3, -1, 6, 5, -6, 5, 5, 3];

/// Exponent order of the ten cubic coefficients.
pub const CUBIC_TERMS: [[u32; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

/// All exponent vectors of `nvars` variables summing to `degree`, by
/// scanning the full box `[0, degree]^nvars`.
pub fn brute_force_exponents(nvars: usize, degree: u32) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    let base = degree as u64 + 1;
    let total = base.pow(nvars as u32);
    for code in 0..total {
        let mut c = code;
        let mut e = Vec::with_capacity(nvars);
        for _ in 0..nvars {
            e.push((c % base) as u32);
            c /= base;
        }
        if e.iter().sum::<u32>() == degree {
            out.insert(e);
        }
    }
    out
}

/// Every `y0^a y1^b x_i x_j` with `a + b = n_i + n_j`, as exponent vectors
/// `(a, b, x_1, ..., x_m)`.
pub fn brute_force_scroll_r2(heights: &[u32]) -> BTreeSet<Vec<u32>> {
    let m = heights.len();
    let mut out = BTreeSet::new();
    for i in 0..m {
        for j in 0..m {
            let t = heights[i] + heights[j];
            for a in 0..=t {
                let mut e = vec![0; m + 2];
                e[0] = a;
                e[1] = t - a;
                e[2 + i] += 1;
                e[2 + j] += 1;
                out.insert(e);
            }
        }
    }
    out
}

pub fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Degree-`deg` piece of `S / (c)` for a ternary cubic: `dim S_deg` minus the
/// rank of multiplication by `c` from `S_(deg - 3)`.
pub fn quotient_dimension_by_rank(cubic: &[i64; 10], deg: u32) -> usize {
    let target: Vec<Vec<u32>> = brute_force_exponents(3, deg).into_iter().collect();
    if deg < 3 {
        return target.len();
    }
    let source: Vec<Vec<u32>> = brute_force_exponents(3, deg - 3).into_iter().collect();
    let index: BTreeMap<&Vec<u32>, usize> =
        target.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut m = DMatrix::<f64>::zeros(target.len(), source.len());
    for (col, s) in source.iter().enumerate() {
        for (t, &c) in CUBIC_TERMS.iter().zip(cubic) {
            let e: Vec<u32> = s.iter().zip(t).map(|(a, b)| a + b).collect();
            m[(index[&e], col)] += c as f64;
        }
    }
    let sv = m.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > 1e-9 * smax).count();
    target.len() - rank
}

/// Graded reverse lexicographic comparison with `x0 > x1 > x2`.
pub fn grevlex_greater(a: &[u32], b: &[u32]) -> bool {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    if da != db {
        return da > db;
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return a[i] < b[i];
        }
    }
    false
}

pub type Poly = BTreeMap<Vec<u32>, f64>;

/// Remainder of `p` on division by the cubic, reducing the grevlex-largest
/// divisible term until none is left.
pub fn divide_by_cubic(p: &Poly, cubic: &[i64; 10]) -> Poly {
    let mut lead = 0;
    for i in 1..10 {
        if cubic[i] != 0
            && (cubic[lead] == 0 || grevlex_greater(&CUBIC_TERMS[i], &CUBIC_TERMS[lead]))
        {
            lead = i;
        }
    }
    let lm = CUBIC_TERMS[lead];
    let lc = cubic[lead] as f64;
    let mut p: Poly = p
        .iter()
        .filter(|(_, &v)| v != 0.0)
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    let divisible = |e: &Vec<u32>| e.iter().zip(&lm).all(|(a, b)| a >= b);
    loop {
        let mut best: Option<Vec<u32>> = None;
        for (e, &v) in &p {
            if v.abs() > 1e-12
                && divisible(e)
                && best.as_ref().is_none_or(|b| grevlex_greater(e, b))
            {
                best = Some(e.clone());
            }
        }
        let Some(e) = best else { break };
        let coef = p[&e] / lc;
        let q: Vec<u32> = e.iter().zip(&lm).map(|(a, b)| a - b).collect();
        for (t, &c) in CUBIC_TERMS.iter().zip(cubic) {
            if c == 0 {
                continue;
            }
            let key: Vec<u32> = q.iter().zip(t).map(|(a, b)| a + b).collect();
            *p.entry(key).or_insert(0.0) -= coef * c as f64;
        }
        p.remove(&e);
    }
    p.retain(|_, v| v.abs() > 1e-12);
    p
}

/// `sum_i sum_{a, b} l_i[a] l_i[b] mult(a, b)` by explicit loops.
pub fn sigma_oracle(ring: &CoordinateRing, l: &LinearTuple) -> Vec<f64> {
    let n = ring.dim1();
    let mut out = vec![0.0; ring.dim2()];
    for row in l.rows() {
        for a in 0..n {
            for b in 0..n {
                for (idx, v) in ring.mult(a, b) {
                    out[idx] += row[a] * row[b] * v;
                }
            }
        }
    }
    out
}

/// `a * b` by explicit loops over the product table.
pub fn product_oracle(ring: &CoordinateRing, a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = ring.dim1();
    let mut out = vec![0.0; ring.dim2()];
    for p in 0..n {
        for q in 0..n {
            for (idx, v) in ring.mult(p, q) {
                out[idx] += a[p] * b[q] * v;
            }
        }
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `sum_i l_i h_i` via [`product_oracle`].
pub fn differential_oracle(ring: &CoordinateRing, l: &LinearTuple, h: &LinearTuple) -> Vec<f64> {
    let mut out = vec![0.0; ring.dim2()];
    for (li, hi) in l.rows().zip(h.rows()) {
        for (o, v) in out.iter_mut().zip(product_oracle(ring, li, hi)) {
            *o += v;
        }
    }
    out
}

pub fn objective_oracle(ring: &CoordinateRing, f: &[f64], l: &LinearTuple) -> f64 {
    let r = sub(&sigma_oracle(ring, l), f);
    dot(&r, &r)
}

/// Central differences of the objective with step `h`.
pub fn fd_gradient(ctx: &ObjectiveContext<'_>, l: &LinearTuple, h: f64) -> Vec<f64> {
    let ring = ctx.ring();
    let f = ctx.target().as_slice();
    let mut out = vec![0.0; l.as_flat().len()];
    for (j, o) in out.iter_mut().enumerate() {
        let mut plus = l.as_flat().to_vec();
        let mut minus = plus.clone();
        plus[j] += h;
        minus[j] -= h;
        let lp = LinearTuple::from_flat(l.k(), l.dim1(), plus).unwrap();
        let lm = LinearTuple::from_flat(l.k(), l.dim1(), minus).unwrap();
        *o = (objective_oracle(ring, f, &lp) - objective_oracle(ring, f, &lm)) / (2.0 * h);
    }
    out
}

/// Haar-ish random orthogonal `k x k` matrix (row-major) from a QR factor.
pub fn random_orthogonal(k: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::<f64>::from_fn(k, k, |_, _| StandardNormal.sample(&mut rng));
    let q = a.qr().q();
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            out.push(q[(i, j)]);
        }
    }
    out
}

pub fn random_quadratic(ring: &CoordinateRing, seed: u64) -> QuadraticForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    QuadraticForm(
        (0..ring.dim2())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect(),
    )
}

pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let scale = norm(b).max(f64::MIN_POSITIVE);
    norm(&sub(a, b)) / scale
}
