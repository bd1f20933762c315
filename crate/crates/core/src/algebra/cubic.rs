//! Normal forms modulo a single ternary cubic.
//!
//! The principal ideal `(c)` needs no Groebner machinery: with the leading
//! monomial `LM(c)` taken in grevlex order, every monomial divisible by
//! `LM(c)` rewrites into strictly smaller monomials, and the standard
//! monomials (those not divisible by `LM(c)`) form a basis of each graded
//! piece of `S/(c)`.

use std::collections::HashMap;

use super::monomial::{monomials_of_degree, Monomial};
use crate::error::{Error, Result};

/// Exponent vectors matching the coefficient order of plane cubic specs.
pub const CUBIC_MONOMIALS: [[u32; 3]; 10] = [
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

#[derive(Clone, Debug)]
pub struct Cubic {
    terms: Vec<(Monomial, f64)>,
    leading: Monomial,
    leading_coeff: f64,
}

impl Cubic {
    pub fn new(coefficients: &[i64; 10]) -> Result<Self> {
        let terms: Vec<(Monomial, f64)> = CUBIC_MONOMIALS
            .iter()
            .zip(coefficients)
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (Monomial::new(e.to_vec()), c as f64))
            .collect();
        let (leading, leading_coeff) =
            terms
                .iter()
                .max_by(|a, b| a.0.grevlex_cmp(&b.0))
                .cloned()
                .ok_or_else(|| Error::InvalidSpec("cubic is identically zero".into()))?;
        if !is_squarefree(coefficients) {
            return Err(Error::DegenerateCubic(
                "cubic has a repeated linear factor; S/(c) is not reduced".into(),
            ));
        }
        Ok(Self {
            terms,
            leading,
            leading_coeff,
        })
    }

    pub fn leading_monomial(&self) -> &Monomial {
        &self.leading
    }

    /// Evaluate the cubic at an integer or real point.
    pub fn eval(&self, x: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let e = m.exponents();
                c * x[0].powi(e[0] as i32) * x[1].powi(e[1] as i32) * x[2].powi(e[2] as i32)
            })
            .sum()
    }
}

/// Normal forms of every monomial of one degree modulo a cubic.
pub struct NormalForms {
    /// Standard monomials of this degree, descending lex order.
    pub basis: Vec<Monomial>,
    index_of_monomial: HashMap<Monomial, usize>,
    /// Sparse normal form per monomial of the degree (indexed like `index_of_monomial`).
    forms: Vec<Vec<(usize, f64)>>,
}

impl NormalForms {
    pub fn new(cubic: &Cubic, degree: u32) -> Self {
        let all = monomials_of_degree(3, degree);
        let basis: Vec<Monomial> = all
            .iter()
            .filter(|m| !cubic.leading.divides(m))
            .cloned()
            .collect();
        let basis_index: HashMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let index_of_monomial: HashMap<Monomial, usize> = all
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();

        let mut order: Vec<usize> = (0..all.len()).collect();
        order.sort_by(|&a, &b| all[a].grevlex_cmp(&all[b]));

        let mut forms: Vec<Vec<(usize, f64)>> = vec![Vec::new(); all.len()];
        let mut dense = vec![0.0; basis.len()];
        for idx in order {
            let m = &all[idx];
            match cubic.leading.quotient_of(m) {
                None => forms[idx] = vec![(basis_index[m], 1.0)],
                Some(q) => {
                    // m = q * LM  ==  -(1/lc) * sum_t c_t q t  (mod c)
                    dense.iter_mut().for_each(|v| *v = 0.0);
                    for (t, ct) in &cubic.terms {
                        if *t == cubic.leading {
                            continue;
                        }
                        let smaller = q.mul(t);
                        let scale = -ct / cubic.leading_coeff;
                        for &(j, v) in &forms[index_of_monomial[&smaller]] {
                            dense[j] += scale * v;
                        }
                    }
                    forms[idx] = dense
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| v != 0.0)
                        .map(|(j, &v)| (j, v))
                        .collect();
                }
            }
        }
        Self {
            basis,
            index_of_monomial,
            forms,
        }
    }

    pub fn normal_form(&self, m: &Monomial) -> &[(usize, f64)] {
        &self.forms[self.index_of_monomial[m]]
    }
}

/// A ternary cubic is non-reduced exactly when it has a squared linear
/// factor. Restricting a reduced cubic to a general line gives a binary
/// cubic with three distinct roots, so a nonzero discriminant on any probe
/// line proves squarefreeness. All arithmetic is exact.
pub fn is_squarefree(coefficients: &[i64; 10]) -> bool {
    PROBE_LINES.iter().any(|(p, q)| {
        let binary = restrict_to_line(coefficients, *p, *q);
        binary_cubic_discriminant(binary).is_none_or(|disc| disc != 0)
    })
}

const PROBE_LINES: [([i128; 3], [i128; 3]); 12] = [
    ([1, 0, 0], [0, 1, 0]),
    ([1, 0, 0], [0, 0, 1]),
    ([0, 1, 0], [0, 0, 1]),
    ([1, 1, 0], [0, 1, 1]),
    ([1, 2, 1], [2, -1, 1]),
    ([2, 1, -1], [1, -2, 2]),
    ([1, -1, 2], [2, 2, -1]),
    ([-2, 1, 1], [1, 1, 2]),
    ([1, 2, -2], [-1, 1, 1]),
    ([2, -1, -1], [1, 2, 1]),
    ([1, 1, 1], [2, -1, 2]),
    ([-1, 2, 1], [2, 1, -2]),
];

/// Coefficients `[a, b, c, d]` of `f(s p + t q) = a s^3 + b s^2 t + c s t^2 + d t^3`.
fn restrict_to_line(coefficients: &[i64; 10], p: [i128; 3], q: [i128; 3]) -> [i128; 4] {
    // linear forms in (s, t): x_i = p_i s + q_i t, represented as binary
    // polynomials [coef s^k t^(deg-k)] with highest s power first
    let mut out = [0i128; 4];
    for (e, &c) in CUBIC_MONOMIALS.iter().zip(coefficients) {
        if c == 0 {
            continue;
        }
        let mut poly = vec![1i128]; // degree 0
        for (var, &exp) in e.iter().enumerate() {
            for _ in 0..exp {
                let mut next = vec![0i128; poly.len() + 1];
                for (k, &v) in poly.iter().enumerate() {
                    next[k] += v * p[var];
                    next[k + 1] += v * q[var];
                }
                poly = next;
            }
        }
        for (k, v) in poly.iter().enumerate() {
            out[k] += c as i128 * v;
        }
    }
    out
}

/// `b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2 + 18abcd`, or `None` on overflow.
fn binary_cubic_discriminant([a, b, c, d]: [i128; 4]) -> Option<i128> {
    let m = |x: i128, y: i128| x.checked_mul(y);
    let t1 = m(m(b, b)?, m(c, c)?)?;
    let t2 = m(4, m(a, m(c, m(c, c)?)?)?)?;
    let t3 = m(4, m(d, m(b, m(b, b)?)?)?)?;
    let t4 = m(27, m(m(a, a)?, m(d, d)?)?)?;
    let t5 = m(18, m(m(a, b)?, m(c, d)?)?)?;
    t1.checked_sub(t2)?
        .checked_sub(t3)?
        .checked_sub(t4)?
        .checked_add(t5)
}
