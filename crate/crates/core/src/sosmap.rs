//! The sum-of-squares map `sigma_k`, the distance objective and its
//! derivatives, and the Gram map `tau`.
//!
//! For a residual `r = sigma_k(l) - f`, the objective is `||r||^2`, with
//!
//! ```text
//! grad[(i, a)]         = 4 <r, l_i e_a>
//! H[(i, a), (j, b)]    = 4 <l_i e_a, l_j e_b> + 2 delta_ij <r, e_a e_b>
//! ```
//!
//! Both are assembled from the pairing matrix `M_r[a][b] = <r, e_a e_b>`, so
//! an objective-plus-gradient evaluation costs one pass over the product
//! table.

use nalgebra::DMatrix;

use crate::algebra::{dot, CoordinateRing, LinearTuple, QuadraticForm};
use crate::error::{check_len, Error, Result};

/// Largest `k * dim1` for which [`hessian`] materializes a dense matrix.
pub const DENSE_HESSIAN_LIMIT: usize = 2000;

/// A fixed target `f` and rank `k` over a shared ring.
#[derive(Clone, Debug)]
pub struct ObjectiveContext<'r> {
    ring: &'r CoordinateRing,
    target: QuadraticForm,
    k: usize,
}

impl<'r> ObjectiveContext<'r> {
    pub fn new(ring: &'r CoordinateRing, target: QuadraticForm, k: usize) -> Result<Self> {
        ring.check_quadratic(&target)?;
        if k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        Ok(Self { ring, target, k })
    }

    pub fn ring(&self) -> &'r CoordinateRing {
        self.ring
    }

    pub fn target(&self) -> &QuadraticForm {
        &self.target
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of scalar variables, `k * dim1`.
    pub fn nvars(&self) -> usize {
        self.k * self.ring.dim1()
    }

    fn check(&self, l: &LinearTuple) -> Result<()> {
        self.ring.check_tuple(l)?;
        check_len(self.k, l.k())
    }

    /// `sigma_k(l) - f`.
    pub fn residual(&self, l: &LinearTuple) -> Result<QuadraticForm> {
        self.check(l)?;
        sigma(self.ring, l)?.sub(&self.target)
    }

    /// Objective and gradient on a flat row-major `k * dim1` vector.
    pub fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let n = self.ring.dim1();
        debug_assert_eq!(x.len(), self.k * n);
        let l = LinearTuple::from_flat(self.k, n, x.to_vec()).expect("sized by caller");
        let r = sigma(self.ring, &l)
            .and_then(|s| s.sub(&self.target))
            .expect("sized by caller");
        let m = self.ring.pairing_matrix(&r).expect("sized by caller");
        for i in 0..self.k {
            let li = &x[i * n..(i + 1) * n];
            let gi = &mut grad[i * n..(i + 1) * n];
            for (a, g) in gi.iter_mut().enumerate() {
                *g = 4.0 * dot(&m[a * n..(a + 1) * n], li);
            }
        }
        dot(r.as_slice(), r.as_slice())
    }
}

/// `sigma_k(l) = l_1^2 + ... + l_k^2`, contracted through the Gram matrix.
pub fn sigma(ring: &CoordinateRing, l: &LinearTuple) -> Result<QuadraticForm> {
    ring.check_tuple(l)?;
    let gram = gram_flat(l);
    ring.contract_gram(&gram)
}

/// `||sigma_k(l) - f||^2`.
pub fn objective(ctx: &ObjectiveContext<'_>, l: &LinearTuple) -> Result<f64> {
    let r = ctx.residual(l)?;
    Ok(dot(r.as_slice(), r.as_slice()))
}

pub fn gradient(ctx: &ObjectiveContext<'_>, l: &LinearTuple) -> Result<LinearTuple> {
    ctx.check(l)?;
    let mut g = vec![0.0; ctx.nvars()];
    ctx.value_and_gradient(l.as_flat(), &mut g);
    LinearTuple::from_flat(ctx.k, ctx.ring.dim1(), g)
}

/// The `dim2 x (k * dim1)` matrix of `h -> sum_i l_i h_i`; column `(i, a)`
/// (index `i * dim1 + a`) is `l_i * e_a`.
pub fn differential_matrix(ring: &CoordinateRing, l: &LinearTuple) -> Result<DMatrix<f64>> {
    ring.check_tuple(l)?;
    let (n, k) = (ring.dim1(), l.k());
    let mut out = DMatrix::zeros(ring.dim2(), k * n);
    let mut col = vec![0.0; ring.dim2()];
    for i in 0..k {
        for a in 0..n {
            col.iter_mut().for_each(|v| *v = 0.0);
            ring.accumulate_basis_product(l.row(i), a, 1.0, &mut col);
            out.column_mut(i * n + a).copy_from_slice(&col);
        }
    }
    Ok(out)
}

/// `sum_i l_i h_i`, the differential of `sigma_k` at `l` applied to `h`
/// (without the factor 2).
pub fn apply_differential(
    ring: &CoordinateRing,
    l: &LinearTuple,
    h: &LinearTuple,
) -> Result<QuadraticForm> {
    ring.check_tuple(l)?;
    ring.check_tuple(h)?;
    check_len(l.k(), h.k())?;
    let mut out = vec![0.0; ring.dim2()];
    for i in 0..l.k() {
        ring.accumulate_product(l.row(i), h.row(i), 1.0, &mut out);
    }
    Ok(QuadraticForm(out))
}

/// Dense Hessian of the objective, `(k * dim1)^2`, indices `i * dim1 + a`.
pub fn hessian(ctx: &ObjectiveContext<'_>, l: &LinearTuple) -> Result<DMatrix<f64>> {
    ctx.check(l)?;
    let size = ctx.nvars();
    if size > DENSE_HESSIAN_LIMIT {
        return Err(Error::SizeLimitExceeded {
            size,
            limit: DENSE_HESSIAN_LIMIT,
        });
    }
    let ring = ctx.ring;
    let n = ring.dim1();
    let d = differential_matrix(ring, l)?;
    let mut h = d.tr_mul(&d) * 4.0;
    let r = ctx.residual(l)?;
    let m = ring.pairing_matrix(&r)?;
    for i in 0..ctx.k {
        for a in 0..n {
            for b in 0..n {
                h[(i * n + a, i * n + b)] += 2.0 * m[a * n + b];
            }
        }
    }
    // exact symmetry; the Gauss-Newton product can differ in the last ulp
    let ht = h.transpose();
    Ok((h + ht) * 0.5)
}

/// `H v` without forming `H`.
pub fn hessian_vector_product(
    ctx: &ObjectiveContext<'_>,
    l: &LinearTuple,
    v: &LinearTuple,
) -> Result<LinearTuple> {
    ctx.check(l)?;
    ctx.check(v)?;
    let ring = ctx.ring;
    let n = ring.dim1();
    let dv = apply_differential(ring, l, v)?;
    let r = ctx.residual(l)?;
    let m_dv = ring.pairing_matrix(&dv)?;
    let m_r = ring.pairing_matrix(&r)?;
    let mut out = vec![0.0; ctx.nvars()];
    for i in 0..ctx.k {
        for a in 0..n {
            // 4 <l_i e_a, D v> + 2 <r, e_a v_i>
            let gn = 4.0 * dot(&m_dv[a * n..(a + 1) * n], l.row(i));
            let curv = 2.0 * dot(&m_r[a * n..(a + 1) * n], v.row(i));
            out[i * n + a] = gn + curv;
        }
    }
    LinearTuple::from_flat(ctx.k, n, out)
}

/// `tau(l) = sum_i l_i l_i^T` in `R1` monomial coordinates.
pub fn tau_gram(ring: &CoordinateRing, l: &LinearTuple) -> Result<DMatrix<f64>> {
    ring.check_tuple(l)?;
    let n = l.dim1();
    Ok(DMatrix::from_row_slice(n, n, &gram_flat(l)))
}

fn gram_flat(l: &LinearTuple) -> Vec<f64> {
    let n = l.dim1();
    let mut g = vec![0.0; n * n];
    for row in l.rows() {
        for a in 0..n {
            let ra = row[a];
            if ra == 0.0 {
                continue;
            }
            for b in a..n {
                g[a * n + b] += ra * row[b];
            }
        }
    }
    for a in 0..n {
        for b in 0..a {
            g[a * n + b] = g[b * n + a];
        }
    }
    g
}
