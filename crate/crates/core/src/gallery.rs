//! Explicit spurious instances and the descent curve that falsifies local
//! minimality in the Veronese surface example.

use serde::Serialize;

use crate::algebra::{
    monomials_of_degree, CoordinateRing, LinearForm, LinearTuple, QuadraticForm, VarietySpec,
};
use crate::error::{Error, Result};
use crate::sosmap::{self, ObjectiveContext};
use crate::stationarity::{self, CertificateReport};

/// A named tuple on a ring, optionally with a certificate `g` and witness `w`.
#[derive(Clone, Debug, Serialize)]
pub struct GalleryInstance {
    pub name: String,
    pub spec: VarietySpec,
    #[serde(skip)]
    pub ring: CoordinateRing,
    pub l: LinearTuple,
    pub g: Option<QuadraticForm>,
    pub witness: Option<LinearForm>,
    pub notes: String,
}

impl GalleryInstance {
    pub fn k(&self) -> usize {
        self.l.k()
    }

    /// Certificate report when both `g` and the witness are present.
    pub fn verify(&self, tol: f64) -> Result<Option<CertificateReport>> {
        match (&self.g, &self.witness) {
            (Some(g), Some(w)) => {
                stationarity::verify_spurious_certificate(&self.ring, &self.l, g, w, tol).map(Some)
            }
            _ => Ok(None),
        }
    }

    /// The target `sigma_k(l) - eps * g` for which `l` is stationary.
    pub fn target(&self, eps: f64) -> Result<QuadraticForm> {
        let g = self
            .g
            .as_ref()
            .ok_or_else(|| Error::Config(format!("instance {} carries no form g", self.name)))?;
        sosmap::sigma(&self.ring, &self.l)?.add_scaled(-eps, g)
    }
}

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 4] = [
    "veronese-surface",
    "scroll22",
    "scroll-spurious",
    "veronese-quartic",
];

/// Looks up a gallery instance; `heights` feeds `scroll-spurious` and `m`
/// feeds `veronese-quartic`.
pub fn by_name(name: &str, heights: Option<&[u32]>, m: Option<u32>) -> Result<GalleryInstance> {
    match name {
        "veronese-surface" => veronese_surface_example(),
        "scroll22" => scroll22_example(),
        "scroll-spurious" => scroll_spurious(heights.unwrap_or(&[2, 3])),
        "veronese-quartic" => veronese_quartic_spurious(m.unwrap_or(4)),
        other => Err(Error::Config(format!(
            "unknown gallery instance {other:?}; expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

fn forms(ring: &CoordinateRing, monomials: &[&[u32]]) -> Result<LinearTuple> {
    let rows = monomials
        .iter()
        .map(|e| ring.linear_form(&[(e, 1.0)]))
        .collect::<Result<Vec<_>>>()?;
    LinearTuple::from_forms(&rows)
}

/// `l = (x0^2, x0 x1, x1^2)` on the Veronese surface, `g = -x2^4`,
/// witness `x2^2`.
pub fn veronese_surface_example() -> Result<GalleryInstance> {
    let spec = VarietySpec::Veronese { m: 2, d: 2 };
    let ring = CoordinateRing::build(&spec)?;
    let l = forms(&ring, &[&[2, 0, 0], &[1, 1, 0], &[0, 2, 0]])?;
    let g = ring.quadratic_form(&[(&[0, 0, 4], -1.0)])?;
    let witness = ring.linear_form(&[(&[0, 0, 2], 1.0)])?;
    Ok(GalleryInstance {
        name: "veronese-surface".into(),
        spec,
        ring,
        l,
        g: Some(g),
        witness: Some(witness),
        notes: "second-order stationary for sigma(l) + eps*x2^4, but not a local minimum: \
                the curve l + z*sqrt2*(x1x2, -x0x2, 0) + z^2*(-x2^2, 0, -x2^2) descends"
            .into(),
    })
}

/// `f(eps) = sigma_3(l) + eps * x2^4` for the Veronese surface tuple.
pub fn veronese_surface_target(eps: f64) -> Result<(GalleryInstance, QuadraticForm)> {
    let inst = veronese_surface_example()?;
    let f = inst.target(eps)?;
    Ok((inst, f))
}

/// `obj(gamma(z)) - obj(gamma(0))` along the descent curve
/// `gamma(z) = l + z l1 + z^2 l2`.
pub fn descent_curve_value(eps: f64, z: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Config(format!("eps must be positive, got {eps}")));
    }
    let (inst, f) = veronese_surface_target(eps)?;
    let ring = &inst.ring;
    let s = std::f64::consts::SQRT_2;
    let l1 = LinearTuple::from_forms(&[
        ring.linear_form(&[(&[0, 1, 1], s)])?,
        ring.linear_form(&[(&[1, 0, 1], -s)])?,
        LinearForm::zeros(ring.dim1()),
    ])?;
    let l2 = LinearTuple::from_forms(&[
        ring.linear_form(&[(&[0, 0, 2], -1.0)])?,
        LinearForm::zeros(ring.dim1()),
        ring.linear_form(&[(&[0, 0, 2], -1.0)])?,
    ])?;
    let gamma: Vec<f64> = inst
        .l
        .as_flat()
        .iter()
        .zip(l1.as_flat())
        .zip(l2.as_flat())
        .map(|((a, b), c)| a + z * b + z * z * c)
        .collect();
    let gamma = LinearTuple::from_flat(3, ring.dim1(), gamma)?;
    let ctx = ObjectiveContext::new(ring, f, 3)?;
    Ok(sosmap::objective(&ctx, &gamma)? - sosmap::objective(&ctx, &inst.l)?)
}

/// Exponent vector of `y0^a y1^b x_j` on a scroll with `m` parts
/// (`j` counts from 1).
fn scroll_exponents(m: usize, a: u32, b: u32, j: usize) -> Vec<u32> {
    let mut e = vec![0; m + 2];
    e[0] = a;
    e[1] = b;
    e[1 + j] = 1;
    e
}

/// `l = (y0^2 x1, y0 y1 x1, y1^2 x1)` on the scroll with heights `(2, 2)`,
/// `g = x2^2 (y0^4 + y1^4 - y0^2 y1^2 / 3)`, witness `y0 y1 x2`.
pub fn scroll22_example() -> Result<GalleryInstance> {
    let spec = VarietySpec::Scroll {
        heights: vec![2, 2],
    };
    let ring = CoordinateRing::build(&spec)?;
    let l = forms(&ring, &[&[2, 0, 1, 0], &[1, 1, 1, 0], &[0, 2, 1, 0]])?;
    let g = ring.quadratic_form(&[
        (&[4, 0, 0, 2], 1.0),
        (&[0, 4, 0, 2], 1.0),
        (&[2, 2, 0, 2], -1.0 / 3.0),
    ])?;
    let witness = ring.linear_form(&[(&[1, 1, 0, 1], 1.0)])?;
    Ok(GalleryInstance {
        name: "scroll22".into(),
        spec,
        ring,
        l,
        g: Some(g),
        witness: Some(witness),
        notes: "spurious second-order stationary point on the (2,2) scroll; the restricted \
                form on the quotient syzygies is positive definite"
            .into(),
    })
}

/// The generators `h1..h4` of the syzygies of the `(2, 2)` scroll tuple
/// modulo those with components in `span(l)`.
pub fn scroll22_syzygy_generators(ring: &CoordinateRing) -> Result<Vec<LinearTuple>> {
    let f = |e: &[u32], c: f64| ring.linear_form(&[(e, c)]);
    let zero = || LinearForm::zeros(ring.dim1());
    let (y0y1x2, y0y0x2, y1y1x2) = ([1, 1, 0, 1], [2, 0, 0, 1], [0, 2, 0, 1]);
    Ok(vec![
        LinearTuple::from_forms(&[f(&y0y1x2, 1.0)?, f(&y0y0x2, -1.0)?, zero()])?,
        LinearTuple::from_forms(&[f(&y1y1x2, 1.0)?, f(&y0y1x2, -1.0)?, zero()])?,
        LinearTuple::from_forms(&[zero(), f(&y0y1x2, -1.0)?, f(&y0y0x2, 1.0)?])?,
        LinearTuple::from_forms(&[zero(), f(&y1y1x2, -1.0)?, f(&y0y1x2, 1.0)?])?,
    ])
}

/// Index pairs `(i, j)` of the forms `l_{i,j} = y0^i y1^(n_j - i) x_j`,
/// `j = 2..m`, `i = 0..n_j`, in tuple order.
pub fn scroll_spurious_indices(heights: &[u32]) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for (j, &n) in heights.iter().enumerate().skip(1) {
        for i in 0..=n {
            out.push((i, j + 1));
        }
    }
    out
}

/// The tuple of all monomials `y0^i y1^(n_j - i) x_j` with `j >= 2`, of
/// length `n - n_1`.
pub fn scroll_spurious(heights: &[u32]) -> Result<GalleryInstance> {
    let spec = VarietySpec::Scroll {
        heights: heights.to_vec(),
    };
    spec.validate()?;
    let m = heights.len();
    if m < 2 {
        return Err(Error::InvalidSpec(
            "scroll_spurious needs at least two heights".into(),
        ));
    }
    let ring = CoordinateRing::build(&spec)?;
    let idx = scroll_spurious_indices(heights);
    let exps: Vec<Vec<u32>> = idx
        .iter()
        .map(|&(i, j)| scroll_exponents(m, i, heights[j - 1] - i, j))
        .collect();
    let refs: Vec<&[u32]> = exps.iter().map(|e| e.as_slice()).collect();
    let l = forms(&ring, &refs)?;
    let n = ring.dim1() - 1;
    let expected = n - heights[0] as usize;
    if l.k() != expected {
        return Err(Error::InvalidSpec(format!(
            "tuple has {} forms but n - n1 = {expected}",
            l.k()
        )));
    }
    Ok(GalleryInstance {
        name: "scroll-spurious".into(),
        spec,
        ring,
        l,
        g: None,
        witness: None,
        notes: format!(
            "k = n - n1 = {expected}; no explicit certificate g. Modulo syzygies with \
             components in span(l), the syzygies are spanned by the {} tuples g_(d,i,j)",
            heights[0] * heights[1..].iter().sum::<u32>()
        ),
    })
}

/// The syzygies `g_(d,i,j)`: `y0^d y1^(n1-d) x1` at `l_{i,j}` and
/// `-y0^(d+1) y1^(n1-d-1) x1` at `l_{i-1,j}`, for `d < n1`, `1 <= i <= n_j`.
pub fn scroll_spurious_generators(inst: &GalleryInstance) -> Result<Vec<LinearTuple>> {
    let VarietySpec::Scroll { heights } = &inst.spec else {
        return Err(Error::InvalidSpec("not a scroll instance".into()));
    };
    let m = heights.len();
    let n1 = heights[0];
    let idx = scroll_spurious_indices(heights);
    let pos = |i: u32, j: usize| {
        idx.iter()
            .position(|&p| p == (i, j))
            .expect("index in tuple")
    };
    let mut out = Vec::new();
    for (j0, &nj) in heights.iter().enumerate().skip(1) {
        let j = j0 + 1;
        for i in 1..=nj {
            for d in 0..n1 {
                let mut h = LinearTuple::zeros(inst.k(), inst.ring.dim1());
                let a = inst
                    .ring
                    .linear_form(&[(&scroll_exponents(m, d, n1 - d, 1), 1.0)])?;
                let b = inst
                    .ring
                    .linear_form(&[(&scroll_exponents(m, d + 1, n1 - d - 1, 1), -1.0)])?;
                h.row_mut(pos(i, j)).copy_from_slice(a.as_slice());
                h.row_mut(pos(i - 1, j)).copy_from_slice(b.as_slice());
                out.push(h);
            }
        }
    }
    Ok(out)
}

/// On the Veronese variety `nu_2(P^m)`: `l = (x0^2 + x1^2, all quadratic
/// monomials in x2..xm)`, with `g` the real part of evaluation at
/// `p = (1, i, 0, ..., 0)` and witness `x0 x1`.
pub fn veronese_quartic_spurious(m: u32) -> Result<GalleryInstance> {
    if m < 2 {
        return Err(Error::InvalidSpec(format!(
            "veronese_quartic_spurious needs m >= 2, got {m}"
        )));
    }
    let spec = VarietySpec::Veronese { m, d: 2 };
    let ring = CoordinateRing::build(&spec)?;
    let nv = m as usize + 1;
    let e = |pairs: &[(usize, u32)]| {
        let mut v = vec![0u32; nv];
        for &(i, p) in pairs {
            v[i] += p;
        }
        v
    };
    let mut rows = vec![ring.linear_form(&[(&e(&[(0, 2)]), 1.0), (&e(&[(1, 2)]), 1.0)])?];
    for mono in monomials_of_degree(nv - 2, 2) {
        let mut full = vec![0, 0];
        full.extend_from_slice(mono.exponents());
        rows.push(ring.linear_form(&[(&full, 1.0)])?);
    }
    let l = LinearTuple::from_forms(&rows)?;

    // re(p^alpha) is nonzero only off x2..xm, where it is re(i^alpha_1)
    let mut g = vec![0.0; ring.dim2()];
    for (idx, mono) in ring.basis2().iter().enumerate() {
        let ex = mono.exponents();
        if ex[2..].iter().all(|&v| v == 0) {
            g[idx] = match ex[1] % 4 {
                0 => 1.0,
                2 => -1.0,
                _ => 0.0,
            };
        }
    }
    let witness = ring.linear_form(&[(&e(&[(0, 1), (1, 1)]), 1.0)])?;
    let note = if m >= 10 {
        "k is at least the Pythagoras number of nu_2(P^m)"
    } else {
        "for m < 10 the bound k >= py(X) does not apply; still a valid stationary-point test case"
    };
    Ok(GalleryInstance {
        name: "veronese-quartic".into(),
        spec,
        ring,
        l,
        g: Some(QuadraticForm(g)),
        witness: Some(witness),
        notes: format!(
            "every l_i vanishes at the complex point p = (1, i, 0, ..., 0), and so does every \
             syzygy component; for m >= 3 those components need not lie in span(l), e.g. \
             (0, x0x3, -x0x2, 0, ...). {note}"
        ),
    })
}
