use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinates of an element of `R1` in the monomial basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm(pub Vec<f64>);

/// Coordinates of an element of `R2` in the monomial basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuadraticForm(pub Vec<f64>);

impl LinearForm {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[index] = 1.0;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl QuadraticForm {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[index] = 1.0;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Euclidean norm in the orthonormal monomial basis.
    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|v| v * s).collect())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &QuadraticForm) -> Result<Self> {
        crate::error::check_len(self.len(), other.len())?;
        Ok(Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &QuadraticForm) -> Result<Self> {
        self.add_scaled(-1.0, other)
    }
}

/// A k-tuple of linear forms, stored row-major as a `k x dim1` matrix
/// (row `i` is `l_i`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearTuple {
    k: usize,
    dim1: usize,
    data: Vec<f64>,
}

impl LinearTuple {
    pub fn zeros(k: usize, dim1: usize) -> Self {
        Self {
            k,
            dim1,
            data: vec![0.0; k * dim1],
        }
    }

    pub fn from_flat(k: usize, dim1: usize, data: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Config("a tuple needs k >= 1 forms".into()));
        }
        crate::error::check_len(k * dim1, data.len())?;
        Ok(Self { k, dim1, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::Config("a tuple needs k >= 1 forms".into()));
        }
        let dim1 = rows[0].len();
        let mut data = Vec::with_capacity(k * dim1);
        for r in rows {
            crate::error::check_len(dim1, r.len())?;
            data.extend_from_slice(r);
        }
        Ok(Self { k, dim1, data })
    }

    pub fn from_forms(forms: &[LinearForm]) -> Result<Self> {
        let rows: Vec<Vec<f64>> = forms.iter().map(|f| f.0.clone()).collect();
        Self::from_rows(&rows)
    }

    /// Standard-normal entries from a seeded ChaCha8 stream.
    pub fn random(k: usize, dim1: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Config("a tuple needs k >= 1 forms".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..k * dim1)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        Ok(Self { k, dim1, data })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim1(&self) -> usize {
        self.dim1
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim1..(i + 1) * self.dim1]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim1..(i + 1) * self.dim1]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim1.max(1)).take(self.k)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.data
    }

    /// Frobenius norm, i.e. the norm on `R1^k` with orthonormal monomials.
    pub fn norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            k: self.k,
            dim1: self.dim1,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Appends a form as a new last row.
    pub fn push(&self, form: &LinearForm) -> Result<Self> {
        crate::error::check_len(self.dim1, form.len())?;
        let mut data = self.data.clone();
        data.extend_from_slice(&form.0);
        Ok(Self {
            k: self.k + 1,
            dim1: self.dim1,
            data,
        })
    }

    /// `O * l` for a `k x k` matrix given row-major.
    pub fn left_multiply(&self, o: &[f64]) -> Result<Self> {
        crate::error::check_len(self.k * self.k, o.len())?;
        let mut out = Self::zeros(self.k, self.dim1);
        for i in 0..self.k {
            for j in 0..self.k {
                let c = o[i * self.k + j];
                if c == 0.0 {
                    continue;
                }
                let src = self.row(j).to_vec();
                for (dst, s) in out.row_mut(i).iter_mut().zip(src) {
                    *dst += c * s;
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
