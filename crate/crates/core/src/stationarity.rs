//! Syzygies, ideal images and checks of stationarity certificates.
//!
//! A syzygy of `l` is a tuple `h` with `sum_i l_i h_i = 0`, i.e. an element
//! of the kernel of [`differential_matrix`]. A certificate for a spurious
//! second-order stationary point is a form `g` with
//!
//! * `g` orthogonal to the ideal image `<l>_2` (the column space),
//! * `<g, w^2> < 0` for an explicit witness `w`,
//! * `h -> <g, sigma_k(h)>` positive semidefinite on syzygies, and
//! * `g` orthogonal to `<h>_2` for every syzygy on which that form vanishes.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::algebra::{CoordinateRing, LinearForm, LinearTuple, QuadraticForm};
use crate::error::{check_len, Error, Result};
use crate::sosmap::{self, ObjectiveContext};

pub use crate::sosmap::differential_matrix;

/// Default relative rank cutoff and certificate tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest `k * dim1` handled by the dense decompositions here.
pub const DENSE_LIMIT: usize = 2000;

/// Orthonormal basis of `Syz_1(l)`, plus an orthonormal basis of the image
/// `<l>_2` from the same decomposition.
#[derive(Clone, Debug)]
pub struct SyzygyBasis {
    k: usize,
    dim1: usize,
    /// `(k * dim1) x nullity`, columns orthonormal.
    kernel: DMatrix<f64>,
    /// `dim2 x rank`, columns orthonormal.
    image: DMatrix<f64>,
    singular_values: Vec<f64>,
    cutoff: f64,
    tol: f64,
}

impl SyzygyBasis {
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Absolute singular-value threshold, `tol * sigma_max`.
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn rank(&self) -> usize {
        self.image.ncols()
    }

    pub fn nullity(&self) -> usize {
        self.kernel.ncols()
    }

    /// Singular values of the differential, descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn kernel_matrix(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    pub fn image_matrix(&self) -> &DMatrix<f64> {
        &self.image
    }

    pub fn vector(&self, j: usize) -> LinearTuple {
        LinearTuple::from_flat(
            self.k,
            self.dim1,
            self.kernel.column(j).iter().copied().collect(),
        )
        .expect("k >= 1")
    }

    pub fn vectors(&self) -> Vec<LinearTuple> {
        (0..self.nullity()).map(|j| self.vector(j)).collect()
    }

    /// Distance from `h` to the syzygy space, relative to `||h||`.
    pub fn projection_residual(&self, h: &LinearTuple) -> Result<f64> {
        check_len(self.k * self.dim1, h.as_flat().len())?;
        let v = DVector::from_column_slice(h.as_flat());
        let nv = v.norm();
        if nv == 0.0 {
            return Ok(0.0);
        }
        let proj = &self.kernel * (self.kernel.transpose() * &v);
        Ok((v - proj).norm() / nv)
    }
}

fn check_dense(size: usize) -> Result<()> {
    if size > DENSE_LIMIT {
        return Err(Error::SizeLimitExceeded {
            size,
            limit: DENSE_LIMIT,
        });
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Kernel and image of the differential at `l`, with singular values below
/// `tol * sigma_max` treated as zero.
pub fn syzygies(ring: &CoordinateRing, l: &LinearTuple, tol: f64) -> Result<SyzygyBasis> {
    check_tol(tol)?;
    let d = differential_matrix(ring, l)?;
    let (rows, cols) = d.shape();
    check_dense(cols)?;
    // pad to at least square so the SVD returns a full right basis
    let padded = if rows < cols {
        d.clone().resize_vertically(cols, 0.0)
    } else {
        d.clone()
    };
    let svd = padded.svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let cutoff = tol * smax;

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let ranked: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&j| smax > 0.0 && sv[j] > cutoff)
        .collect();

    let mut image = DMatrix::zeros(rows, ranked.len());
    for (c, &j) in ranked.iter().enumerate() {
        image.column_mut(c).copy_from(&u.column(j).rows(0, rows));
    }
    // rows of v_t not in the ranked set, plus any rows beyond the singular values
    let mut kernel_rows: Vec<usize> = order
        .iter()
        .copied()
        .filter(|j| !ranked.contains(j))
        .collect();
    kernel_rows.extend(sv.len()..v_t.nrows());
    let mut kernel = DMatrix::zeros(cols, kernel_rows.len());
    for (c, &j) in kernel_rows.iter().enumerate() {
        kernel.column_mut(c).copy_from(&v_t.row(j).transpose());
    }
    Ok(SyzygyBasis {
        k: l.k(),
        dim1: l.dim1(),
        kernel,
        image,
        singular_values: order.iter().map(|&j| sv[j]).collect(),
        cutoff,
        tol,
    })
}

/// Orthonormal basis (columns) of `span(l_1, ..., l_k)` in `R1`.
pub fn span_basis(l: &LinearTuple, tol: f64) -> DMatrix<f64> {
    let (k, n) = (l.k(), l.dim1());
    let m = DMatrix::from_row_slice(k, n, l.as_flat()).transpose();
    let padded = if n < k {
        m.clone().resize_vertically(k, 0.0)
    } else {
        m
    };
    let svd = padded.svd(true, false);
    let u = svd.u.expect("requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&j| smax > 0.0 && svd.singular_values[j] > tol * smax)
        .collect();
    let mut out = DMatrix::zeros(n, keep.len());
    for (c, &j) in keep.iter().enumerate() {
        out.column_mut(c).copy_from(&u.column(j).rows(0, n));
    }
    out
}

/// Largest relative distance from a component `h_i` of a syzygy basis
/// vector to `span(l)`.
pub fn span_containment_residual(l: &LinearTuple, basis: &SyzygyBasis) -> f64 {
    let b = span_basis(l, basis.tol());
    let mut worst: f64 = 0.0;
    for h in basis.vectors() {
        for row in h.rows() {
            let v = DVector::from_column_slice(row);
            let nv = v.norm();
            if nv <= f64::EPSILON {
                continue;
            }
            let proj = &b * (b.transpose() * &v);
            worst = worst.max((v - proj).norm() / nv.max(1e-300));
        }
    }
    worst
}

/// Dimension of the syzygies whose components all lie in `span(l)`.
pub fn trivial_syzygy_dimension(ring: &CoordinateRing, l: &LinearTuple, tol: f64) -> Result<usize> {
    check_tol(tol)?;
    ring.check_tuple(l)?;
    let b = span_basis(l, tol);
    let (k, n, r) = (l.k(), l.dim1(), b.ncols());
    check_dense(k * r)?;
    // columns: l_i * b_s for each (i, s)
    let mut m = DMatrix::zeros(ring.dim2(), k * r);
    let mut col = vec![0.0; ring.dim2()];
    for i in 0..k {
        for s in 0..r {
            col.iter_mut().for_each(|v| *v = 0.0);
            let bs: Vec<f64> = b.column(s).iter().copied().collect();
            debug_assert_eq!(bs.len(), n);
            ring.accumulate_product(l.row(i), &bs, 1.0, &mut col);
            m.column_mut(i * r + s).copy_from_slice(&col);
        }
    }
    Ok(k * r - numerical_rank(&m, tol))
}

/// `nullity(differential) - trivial_syzygy_dimension`.
pub fn nontrivial_syzygy_dimension(
    ring: &CoordinateRing,
    l: &LinearTuple,
    tol: f64,
) -> Result<usize> {
    let total = syzygies(ring, l, tol)?.nullity();
    Ok(total - trivial_syzygy_dimension(ring, l, tol)?)
}

/// Rank with singular values above `tol * sigma_max`.
pub fn numerical_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderReport {
    pub grad_norm: f64,
    pub hessian_min_eig: f64,
    pub is_second_order_stationary: bool,
}

/// Gradient norm and smallest Hessian eigenvalue at `l`.
pub fn verify_second_order(
    ctx: &ObjectiveContext<'_>,
    l: &LinearTuple,
    tol: f64,
) -> Result<SecondOrderReport> {
    check_tol(tol)?;
    let grad_norm = sosmap::gradient(ctx, l)?.norm();
    let h = sosmap::hessian(ctx, l)?;
    let hessian_min_eig = min_eigenvalue(h);
    Ok(SecondOrderReport {
        grad_norm,
        hessian_min_eig,
        is_second_order_stationary: grad_norm <= tol && hessian_min_eig >= -tol,
    })
}

fn min_eigenvalue(m: DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return f64::INFINITY;
    }
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedSpurious,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    /// Check (a): `g` is orthogonal to `<l>_2`.
    pub orthogonal_to_ideal: bool,
    /// `max |<g, u>|` over an orthonormal basis of `<l>_2`.
    pub ideal_pairing_max: f64,
    /// Check (b): `<g, w^2>`.
    pub dual_violation_witness_value: f64,
    /// Check (c): smallest eigenvalue of `h -> <g, sigma_k(h)>` on syzygies;
    /// `None` when there are no syzygies.
    pub restricted_form_min_eig: Option<f64>,
    /// Check (d): `g` orthogonal to `<h>_2` on the near-null eigenvectors.
    pub kernel_condition_ok: bool,
    /// Largest `|<g, h_i e_a>|` seen in check (d).
    pub kernel_pairing_max: f64,
    pub syzygy_dimension: usize,
    pub ideal_rank: usize,
    pub tol: f64,
    pub verdict: Verdict,
}

/// Checks a candidate certificate `g` (with witness `w` for `g` outside the
/// dual cone) for the tuple `l`.
pub fn verify_spurious_certificate(
    ring: &CoordinateRing,
    l: &LinearTuple,
    g: &QuadraticForm,
    w: &LinearForm,
    tol: f64,
) -> Result<CertificateReport> {
    check_tol(tol)?;
    ring.check_tuple(l)?;
    ring.check_quadratic(g)?;
    check_len(ring.dim1(), w.len())?;
    let (k, n) = (l.k(), ring.dim1());

    let basis = syzygies(ring, l, tol)?;
    let gv = DVector::from_column_slice(g.as_slice());

    // (a)
    let pairings = basis.image_matrix().transpose() * &gv;
    let ideal_pairing_max = pairings.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let orthogonal_to_ideal = ideal_pairing_max <= tol;

    // (b)
    let w2 = ring.multiply(w, w)?;
    let witness = ring.inner_product(g, &w2)?;
    let witness_ok = witness < -tol;

    // (c) S = Z^T (I (x) M_g) Z
    let mg = DMatrix::from_row_slice(n, n, &ring.pairing_matrix(g)?);
    let z = basis.kernel_matrix();
    let s_dim = z.ncols();
    let mut mz = DMatrix::zeros(k * n, s_dim);
    for i in 0..k {
        let block = &mg * z.rows(i * n, n);
        mz.rows_mut(i * n, n).copy_from(&block);
    }
    let s = z.transpose() * &mz;
    let s = (&s + s.transpose()) * 0.5;

    let (restricted_form_min_eig, kernel_condition_ok, kernel_pairing_max) = if s_dim == 0 {
        (None, true, 0.0)
    } else {
        let eig = SymmetricEigen::new(s);
        let min = eig
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        // (d) for eigenvectors with |lambda| <= tol, M_g h_i must vanish
        let mut worst = 0.0_f64;
        for (j, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam.abs() > tol {
                continue;
            }
            let mh = &mz * eig.eigenvectors.column(j);
            worst = mh.iter().fold(worst, |m, v| m.max(v.abs()));
        }
        (Some(min), worst <= tol, worst)
    };
    let psd_ok = restricted_form_min_eig.is_none_or(|m| m >= -tol);

    let verdict = if !(orthogonal_to_ideal && witness_ok && psd_ok) {
        Verdict::Refuted
    } else if kernel_condition_ok {
        Verdict::CertifiedSpurious
    } else {
        Verdict::Inconclusive
    };
    Ok(CertificateReport {
        orthogonal_to_ideal,
        ideal_pairing_max,
        dual_violation_witness_value: witness,
        restricted_form_min_eig,
        kernel_condition_ok,
        kernel_pairing_max,
        syzygy_dimension: basis.nullity(),
        ideal_rank: basis.rank(),
        tol,
        verdict,
    })
}

/// `<g, sigma_k(h)>`.
pub fn restricted_form_value(
    ring: &CoordinateRing,
    g: &QuadraticForm,
    h: &LinearTuple,
) -> Result<f64> {
    ring.inner_product(g, &sosmap::sigma(ring, h)?)
}
