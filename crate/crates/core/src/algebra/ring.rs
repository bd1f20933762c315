use std::collections::HashMap;

use super::cubic::{Cubic, NormalForms};
use super::forms::{dot, LinearForm, LinearTuple, QuadraticForm};
use super::monomial::{monomials_of_degree, Monomial};
use super::spec::VarietySpec;
use crate::error::{check_len, Error, Result};

/// Multiplication `R1 x R1 -> R2`, stored for unordered basis pairs `a <= b`
/// in compressed sparse rows.
#[derive(Clone, Debug)]
struct ProductTable {
    dim1: usize,
    offsets: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<f64>,
}

impl ProductTable {
    #[inline]
    fn pair(&self, a: usize, b: usize) -> usize {
        let (p, q) = if a <= b { (a, b) } else { (b, a) };
        p * (2 * self.dim1 - p + 1) / 2 + (q - p)
    }

    #[inline]
    fn entry(&self, pair: usize) -> (&[u32], &[f64]) {
        let (s, e) = (self.offsets[pair], self.offsets[pair + 1]);
        (&self.indices[s..e], &self.values[s..e])
    }
}

/// Graded pieces `R1`, `R2` of a coordinate ring in monomial bases, with the
/// multiplication tensor between them. Immutable once built.
#[derive(Clone, Debug)]
pub struct CoordinateRing {
    spec: VarietySpec,
    basis1: Vec<Monomial>,
    basis2: Vec<Monomial>,
    index1: HashMap<Monomial, usize>,
    index2: HashMap<Monomial, usize>,
    table: ProductTable,
    monomial_products: bool,
}

impl CoordinateRing {
    pub fn build(spec: &VarietySpec) -> Result<Self> {
        spec.validate()?;
        match spec {
            VarietySpec::Scroll { heights } => {
                let (basis1, basis2) = scroll_bases(heights);
                Self::from_monomial_bases(spec.clone(), basis1, basis2)
            }
            VarietySpec::Veronese { m, d } => {
                let nvars = *m as usize + 1;
                let basis1 = monomials_of_degree(nvars, *d);
                let basis2 = monomials_of_degree(nvars, 2 * d);
                Self::from_monomial_bases(spec.clone(), basis1, basis2)
            }
            VarietySpec::PlaneCubic { cubic, d } => {
                let cubic = Cubic::new(cubic)?;
                Self::plane_cubic(spec.clone(), &cubic, *d)
            }
        }
    }

    fn from_monomial_bases(
        spec: VarietySpec,
        basis1: Vec<Monomial>,
        basis2: Vec<Monomial>,
    ) -> Result<Self> {
        let index1 = index_map(&basis1);
        let index2 = index_map(&basis2);
        let dim1 = basis1.len();
        let npairs = dim1 * (dim1 + 1) / 2;
        let mut offsets = Vec::with_capacity(npairs + 1);
        let mut indices = Vec::with_capacity(npairs);
        offsets.push(0);
        for a in 0..dim1 {
            for b in a..dim1 {
                let prod = basis1[a].mul(&basis1[b]);
                let idx = *index2.get(&prod).ok_or_else(|| {
                    Error::InvalidSpec(format!("product {prod} missing from R2 basis"))
                })?;
                indices.push(idx as u32);
                offsets.push(indices.len());
            }
        }
        let values = vec![1.0; indices.len()];
        Ok(Self {
            spec,
            basis1,
            basis2,
            index1,
            index2,
            table: ProductTable {
                dim1,
                offsets,
                indices,
                values,
            },
            monomial_products: true,
        })
    }

    fn plane_cubic(spec: VarietySpec, cubic: &Cubic, d: u32) -> Result<Self> {
        let basis1: Vec<Monomial> = monomials_of_degree(3, d)
            .into_iter()
            .filter(|m| !cubic.leading_monomial().divides(m))
            .collect();
        let forms = NormalForms::new(cubic, 2 * d);
        let basis2 = forms.basis.clone();
        if basis1.len() != 3 * d as usize || basis2.len() != 6 * d as usize {
            return Err(Error::DegenerateCubic(format!(
                "standard monomial counts {} / {} differ from 3d / 6d",
                basis1.len(),
                basis2.len()
            )));
        }
        let dim1 = basis1.len();
        let mut offsets = vec![0];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for a in 0..dim1 {
            for b in a..dim1 {
                for &(j, v) in forms.normal_form(&basis1[a].mul(&basis1[b])) {
                    if !v.is_finite() {
                        return Err(Error::NonFiniteValue(
                            "cubic reduction produced a non-finite coefficient".into(),
                        ));
                    }
                    indices.push(j as u32);
                    values.push(v);
                }
                offsets.push(indices.len());
            }
        }
        Ok(Self {
            spec,
            index1: index_map(&basis1),
            index2: index_map(&basis2),
            basis1,
            basis2,
            table: ProductTable {
                dim1,
                offsets,
                indices,
                values,
            },
            monomial_products: false,
        })
    }

    pub fn spec(&self) -> &VarietySpec {
        &self.spec
    }

    pub fn dim1(&self) -> usize {
        self.basis1.len()
    }

    pub fn dim2(&self) -> usize {
        self.basis2.len()
    }

    pub fn basis1(&self) -> &[Monomial] {
        &self.basis1
    }

    pub fn basis2(&self) -> &[Monomial] {
        &self.basis2
    }

    pub fn index1(&self, m: &Monomial) -> Option<usize> {
        self.index1.get(m).copied()
    }

    pub fn index2(&self, m: &Monomial) -> Option<usize> {
        self.index2.get(m).copied()
    }

    /// True when every basis product is a single basis monomial.
    pub fn has_monomial_products(&self) -> bool {
        self.monomial_products
    }

    /// Sparse coefficients of `basis1[a] * basis1[b]` over `basis2`.
    pub fn mult(&self, a: usize, b: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (idx, val) = self.table.entry(self.table.pair(a, b));
        idx.iter().zip(val).map(|(&i, &v)| (i as usize, v))
    }

    pub fn mult_dense(&self, a: usize, b: usize) -> QuadraticForm {
        let mut out = vec![0.0; self.dim2()];
        for (i, v) in self.mult(a, b) {
            out[i] += v;
        }
        QuadraticForm(out)
    }

    pub fn multiply(&self, a: &LinearForm, b: &LinearForm) -> Result<QuadraticForm> {
        check_len(self.dim1(), a.len())?;
        check_len(self.dim1(), b.len())?;
        let mut out = vec![0.0; self.dim2()];
        self.accumulate_product(a.as_slice(), b.as_slice(), 1.0, &mut out);
        Ok(QuadraticForm(out))
    }

    /// `out += scale * a * b` for raw coordinate slices of length `dim1`.
    pub(crate) fn accumulate_product(&self, a: &[f64], b: &[f64], scale: f64, out: &mut [f64]) {
        let n = self.dim1();
        let mut pair = 0;
        for p in 0..n {
            for q in p..n {
                let c = if p == q {
                    a[p] * b[p]
                } else {
                    a[p] * b[q] + a[q] * b[p]
                };
                if c != 0.0 {
                    let (idx, val) = self.table.entry(pair);
                    for (&i, &v) in idx.iter().zip(val) {
                        out[i as usize] += scale * c * v;
                    }
                }
                pair += 1;
            }
        }
    }

    /// `out += scale * l * e_a` for a raw form `l`.
    pub(crate) fn accumulate_basis_product(
        &self,
        l: &[f64],
        a: usize,
        scale: f64,
        out: &mut [f64],
    ) {
        for (q, &lq) in l.iter().enumerate() {
            if lq == 0.0 {
                continue;
            }
            let (idx, val) = self.table.entry(self.table.pair(a, q));
            for (&i, &v) in idx.iter().zip(val) {
                out[i as usize] += scale * lq * v;
            }
        }
    }

    /// `sum_{a,b} gram[a][b] * mult(a,b)` for a symmetric row-major
    /// `dim1 x dim1` matrix.
    pub fn contract_gram(&self, gram: &[f64]) -> Result<QuadraticForm> {
        let n = self.dim1();
        check_len(n * n, gram.len())?;
        let mut out = vec![0.0; self.dim2()];
        let mut pair = 0;
        for p in 0..n {
            for q in p..n {
                let c = if p == q {
                    gram[p * n + p]
                } else {
                    gram[p * n + q] + gram[q * n + p]
                };
                if c != 0.0 {
                    let (idx, val) = self.table.entry(pair);
                    for (&i, &v) in idx.iter().zip(val) {
                        out[i as usize] += c * v;
                    }
                }
                pair += 1;
            }
        }
        Ok(QuadraticForm(out))
    }

    /// Symmetric row-major matrix `M[a][b] = <f, mult(a,b)>`, the bilinear
    /// form `(h, h') -> <f, h h'>` on `R1`.
    pub fn pairing_matrix(&self, f: &QuadraticForm) -> Result<Vec<f64>> {
        check_len(self.dim2(), f.len())?;
        let n = self.dim1();
        let r = f.as_slice();
        let mut out = vec![0.0; n * n];
        let mut pair = 0;
        for p in 0..n {
            for q in p..n {
                let (idx, val) = self.table.entry(pair);
                let s: f64 = idx.iter().zip(val).map(|(&i, &v)| r[i as usize] * v).sum();
                out[p * n + q] = s;
                out[q * n + p] = s;
                pair += 1;
            }
        }
        Ok(out)
    }

    /// Euclidean inner product on `R2`; the `basis2` monomials are orthonormal.
    pub fn inner_product(&self, f: &QuadraticForm, g: &QuadraticForm) -> Result<f64> {
        check_len(self.dim2(), f.len())?;
        check_len(self.dim2(), g.len())?;
        Ok(dot(f.as_slice(), g.as_slice()))
    }

    pub fn random_linear_tuple(&self, k: usize, seed: u64) -> Result<LinearTuple> {
        LinearTuple::random(k, self.dim1(), seed)
    }

    pub fn check_tuple(&self, l: &LinearTuple) -> Result<()> {
        check_len(self.dim1(), l.dim1())
    }

    pub fn check_quadratic(&self, f: &QuadraticForm) -> Result<()> {
        check_len(self.dim2(), f.len())
    }

    /// Linear form from `(exponents, coefficient)` terms over `basis1`.
    pub fn linear_form(&self, terms: &[(&[u32], f64)]) -> Result<LinearForm> {
        let mut out = vec![0.0; self.dim1()];
        for (e, c) in terms {
            let m = Monomial::new(e.to_vec());
            let i = self
                .index1(&m)
                .ok_or_else(|| Error::InvalidSpec(format!("{m} is not an R1 basis monomial")))?;
            out[i] += c;
        }
        Ok(LinearForm(out))
    }

    /// Quadratic form from `(exponents, coefficient)` terms over `basis2`.
    pub fn quadratic_form(&self, terms: &[(&[u32], f64)]) -> Result<QuadraticForm> {
        let mut out = vec![0.0; self.dim2()];
        for (e, c) in terms {
            let m = Monomial::new(e.to_vec());
            let i = self
                .index2(&m)
                .ok_or_else(|| Error::InvalidSpec(format!("{m} is not an R2 basis monomial")))?;
            out[i] += c;
        }
        Ok(QuadraticForm(out))
    }
}

fn index_map(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect()
}

/// Scroll monomials in variables `(y0, y1, x1, ..., xm)`.
///
/// `R1`: `y0^i y1^(n_j - i) x_j`, grouped by `j`, descending in `i`.
/// `R2`: `y0^a y1^b x_i x_j` with `i <= j` and `a + b = n_i + n_j`, grouped
/// by `(i, j)` lexicographically, descending in `a`.
fn scroll_bases(heights: &[u32]) -> (Vec<Monomial>, Vec<Monomial>) {
    let m = heights.len();
    let nvars = m + 2;
    let mono = |y0: u32, y1: u32, xs: &[usize]| {
        let mut e = vec![0u32; nvars];
        e[0] = y0;
        e[1] = y1;
        for &x in xs {
            e[2 + x] += 1;
        }
        Monomial::new(e)
    };
    let mut basis1 = Vec::new();
    for (j, &n) in heights.iter().enumerate() {
        for i in (0..=n).rev() {
            basis1.push(mono(i, n - i, &[j]));
        }
    }
    let mut basis2 = Vec::new();
    for i in 0..m {
        for j in i..m {
            let total = heights[i] + heights[j];
            for a in (0..=total).rev() {
                basis2.push(mono(a, total - a, &[i, j]));
            }
        }
    }
    (basis1, basis2)
}
