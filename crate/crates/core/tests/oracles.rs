mod common;

use std::collections::BTreeSet;

use common::*;
use nalgebra::DVector;
use sos_core::gallery;
use sos_core::solver::{self, RunStatus, SolverConfig};
use sos_core::sosmap::{self, ObjectiveContext};
use sos_core::stationarity::{self, DEFAULT_TOL};
use sos_core::{CoordinateRing, LinearForm, LinearTuple, Monomial, VarietySpec};

fn exps(basis: &[Monomial]) -> BTreeSet<Vec<u32>> {
    basis.iter().map(|m| m.exponents().to_vec()).collect()
}

#[test]
fn scroll_bases_match_enumeration() {
    for heights in [
        vec![2, 2],
        vec![1, 4],
        vec![5, 10],
        vec![1, 2, 3],
        vec![3, 3, 3, 3],
    ] {
        let ring = CoordinateRing::build(&VarietySpec::Scroll {
            heights: heights.clone(),
        })
        .unwrap();
        let r2 = brute_force_scroll_r2(&heights);
        assert_eq!(exps(ring.basis2()), r2, "{heights:?}");
        assert_eq!(ring.dim2(), ring.basis2().len());
        let m = heights.len();
        let dim1 = m + heights.iter().sum::<u32>() as usize;
        assert_eq!(ring.dim1(), dim1);
        assert_eq!(ring.dim2(), (m + 1) * dim1 - m * (m + 1) / 2);
    }
}

#[test]
fn scroll22_basis_order() {
    let ring = CoordinateRing::build(&VarietySpec::Scroll {
        heights: vec![2, 2],
    })
    .unwrap();
    let got: Vec<Vec<u32>> = ring
        .basis1()
        .iter()
        .map(|m| m.exponents().to_vec())
        .collect();
    let want = vec![
        vec![2, 0, 1, 0],
        vec![1, 1, 1, 0],
        vec![0, 2, 1, 0],
        vec![2, 0, 0, 1],
        vec![1, 1, 0, 1],
        vec![0, 2, 0, 1],
    ];
    assert_eq!(got, want);
    assert_eq!(ring.dim2(), 15);
}

#[test]
fn veronese_bases_match_enumeration() {
    for (m, d) in [(1, 1), (2, 2), (4, 2), (2, 3), (3, 1)] {
        let ring = CoordinateRing::build(&VarietySpec::Veronese { m, d }).unwrap();
        assert_eq!(
            exps(ring.basis1()),
            brute_force_exponents(m as usize + 1, d)
        );
        assert_eq!(
            exps(ring.basis2()),
            brute_force_exponents(m as usize + 1, 2 * d)
        );
        assert_eq!(ring.dim1() as u64, binom(m as u64 + d as u64, d as u64));
        assert_eq!(
            ring.dim2() as u64,
            binom(m as u64 + 2 * d as u64, 2 * d as u64)
        );
    }
}

#[test]
fn plane_cubic_dimensions_match_rank_oracle() {
    let fermat = [1, 0, 0, 0, 0, 0, 1, 0, 0, 1];
    let nodal = [0, 0, 1, 0, 0, 0, 1, -1, 0, 0];
    for cubic in [TABLE3_CUBIC, fermat, nodal] {
        for d in [3, 4, 7, 10] {
            let ring = CoordinateRing::build(&VarietySpec::PlaneCubic { cubic, d }).unwrap();
            assert_eq!(ring.dim1(), quotient_dimension_by_rank(&cubic, d));
            assert_eq!(ring.dim2(), quotient_dimension_by_rank(&cubic, 2 * d));
            assert_eq!((ring.dim1(), ring.dim2()), (3 * d as usize, 6 * d as usize));
        }
    }
}

#[test]
fn plane_cubic_products_match_long_division() {
    for (cubic, d) in [
        (TABLE3_CUBIC, 3),
        (TABLE3_CUBIC, 4),
        ([1, 0, 0, 0, 0, 0, 1, 0, 0, 1], 3),
    ] {
        let ring = CoordinateRing::build(&VarietySpec::PlaneCubic { cubic, d }).unwrap();
        let n = ring.dim1();
        let mut reduced_any = false;
        for a in 0..n {
            for b in a..n {
                let prod = ring.basis1()[a].mul(&ring.basis1()[b]);
                let mut p = Poly::new();
                p.insert(prod.exponents().to_vec(), 1.0);
                let rem = divide_by_cubic(&p, &cubic);
                let mut want = vec![0.0; ring.dim2()];
                for (e, v) in rem {
                    let idx = ring
                        .index2(&Monomial::new(e.clone()))
                        .expect("remainder in basis");
                    want[idx] = v;
                }
                let got = ring.mult_dense(a, b);
                if ring.index2(&prod).is_none() {
                    reduced_any = true;
                }
                for (g, w) in got.as_slice().iter().zip(&want) {
                    assert!(
                        (g - w).abs() <= 1e-9 * (1.0 + w.abs()),
                        "({a},{b}): {g} vs {w}"
                    );
                }
            }
        }
        assert!(reduced_any);
    }
}

#[test]
fn multiply_agrees_with_table_oracle() {
    let ring = CoordinateRing::build(&VarietySpec::PlaneCubic {
        cubic: TABLE3_CUBIC,
        d: 5,
    })
    .unwrap();
    let l = ring.random_linear_tuple(2, 11).unwrap();
    let a = LinearForm(l.row(0).to_vec());
    let b = LinearForm(l.row(1).to_vec());
    let got = ring.multiply(&a, &b).unwrap();
    assert!(
        relative_error(
            got.as_slice(),
            &product_oracle(&ring, a.as_slice(), b.as_slice())
        ) < 1e-13
    );
    let zero = ring.multiply(&LinearForm::zeros(ring.dim1()), &b).unwrap();
    assert!(zero.as_slice().iter().all(|&v| v == 0.0));
}

#[test]
fn sigma_matches_triple_loop() {
    let ring = CoordinateRing::build(&VarietySpec::Scroll {
        heights: vec![2, 2],
    })
    .unwrap();
    for seed in 0..5 {
        let l = ring.random_linear_tuple(4, seed).unwrap();
        let s = sosmap::sigma(&ring, &l).unwrap();
        assert!(relative_error(s.as_slice(), &sigma_oracle(&ring, &l)) < 1e-13);
    }
    let ring = CoordinateRing::build(&VarietySpec::PlaneCubic {
        cubic: TABLE3_CUBIC,
        d: 4,
    })
    .unwrap();
    let l = ring.random_linear_tuple(3, 2).unwrap();
    let s = sosmap::sigma(&ring, &l).unwrap();
    assert!(relative_error(s.as_slice(), &sigma_oracle(&ring, &l)) < 1e-12);
}

#[test]
fn veronese_surface_sigma_and_objective() {
    let (inst, f) = gallery::veronese_surface_target(0.1).unwrap();
    let s = sosmap::sigma(&inst.ring, &inst.l).unwrap();
    let want = inst
        .ring
        .quadratic_form(&[(&[4, 0, 0], 1.0), (&[2, 2, 0], 1.0), (&[0, 4, 0], 1.0)])
        .unwrap();
    assert_eq!(s, want);
    let ctx = ObjectiveContext::new(&inst.ring, f, 3).unwrap();
    assert!((sosmap::objective(&ctx, &inst.l).unwrap() - 0.01).abs() < 1e-15);
    assert!(sosmap::gradient(&ctx, &inst.l).unwrap().norm() < 1e-12);
}

#[test]
fn gradient_matches_central_differences() {
    let specs = [
        VarietySpec::Scroll {
            heights: vec![5, 10],
        },
        VarietySpec::Veronese { m: 2, d: 2 },
        VarietySpec::PlaneCubic {
            cubic: TABLE3_CUBIC,
            d: 4,
        },
    ];
    for (s, spec) in specs.iter().enumerate() {
        let ring = CoordinateRing::build(spec).unwrap();
        for seed in 0..3u64 {
            let l = ring.random_linear_tuple(3, 100 * s as u64 + seed).unwrap();
            let f = random_quadratic(&ring, 7 + seed);
            let ctx = ObjectiveContext::new(&ring, f, 3).unwrap();
            let g = sosmap::gradient(&ctx, &l).unwrap();
            let fd = fd_gradient(&ctx, &l, 1e-5 * l.norm());
            assert!(relative_error(g.as_flat(), &fd) < 1e-6, "{spec}");
        }
    }
}

#[test]
fn quartic_expansion_of_objective() {
    let ring = CoordinateRing::build(&VarietySpec::Veronese { m: 2, d: 2 }).unwrap();
    for seed in 0..5u64 {
        let l = ring.random_linear_tuple(3, seed).unwrap();
        let h = ring.random_linear_tuple(3, 1000 + seed).unwrap();
        let f = random_quadratic(&ring, 50 + seed);
        let e = 1e-2;
        let r = sub(&sigma_oracle(&ring, &l), f.as_slice());
        let dl = differential_oracle(&ring, &l, &h);
        let sh = sigma_oracle(&ring, &h);
        let expansion = dot(&r, &r)
            + 4.0 * dot(&r, &dl) * e
            + (4.0 * dot(&dl, &dl) + 2.0 * dot(&r, &sh)) * e * e
            + 4.0 * dot(&sh, &dl) * e.powi(3)
            + dot(&sh, &sh) * e.powi(4);
        let shifted: Vec<f64> = l
            .as_flat()
            .iter()
            .zip(h.as_flat())
            .map(|(a, b)| a + e * b)
            .collect();
        let shifted = LinearTuple::from_flat(3, ring.dim1(), shifted).unwrap();
        let ctx = ObjectiveContext::new(&ring, f, 3).unwrap();
        let got = sosmap::objective(&ctx, &shifted).unwrap();
        assert!(((got - expansion) / expansion).abs() < 1e-8);
    }
}

#[test]
fn hessian_quadratic_form_matches_direct_formula() {
    let ring = CoordinateRing::build(&VarietySpec::Scroll {
        heights: vec![2, 3],
    })
    .unwrap();
    for seed in 0..5u64 {
        let l = ring.random_linear_tuple(3, seed).unwrap();
        let h = ring.random_linear_tuple(3, 40 + seed).unwrap();
        let f = random_quadratic(&ring, 80 + seed);
        let ctx = ObjectiveContext::new(&ring, f.clone(), 3).unwrap();
        let hm = sosmap::hessian(&ctx, &l).unwrap();
        let hv = DVector::from_column_slice(h.as_flat());
        let quad = hv.dot(&(&hm * &hv));
        let r = sub(&sigma_oracle(&ring, &l), f.as_slice());
        let dl = differential_oracle(&ring, &l, &h);
        let direct = 4.0 * dot(&dl, &dl) + 2.0 * dot(&r, &sigma_oracle(&ring, &h));
        assert!(((quad - direct) / direct.abs()).abs() < 1e-10);
        let hvp = sosmap::hessian_vector_product(&ctx, &l, &h).unwrap();
        assert!(relative_error(hvp.as_flat(), (&hm * &hv).as_slice()) < 1e-12);
        assert_eq!(hm, hm.transpose());
    }
}

#[test]
fn hessian_at_global_minimum_is_psd() {
    let ring = CoordinateRing::build(&VarietySpec::Veronese { m: 2, d: 2 }).unwrap();
    let l = ring.random_linear_tuple(3, 5).unwrap();
    let ctx = ObjectiveContext::new(&ring, sosmap::sigma(&ring, &l).unwrap(), 3).unwrap();
    let rep = stationarity::verify_second_order(&ctx, &l, 1e-10).unwrap();
    assert!(rep.is_second_order_stationary);
    assert_eq!(rep.grad_norm, 0.0);
    assert!(rep.hessian_min_eig >= -1e-12);
}

#[test]
fn second_order_check_detects_large_perturbation() {
    // r = -eps x2^4 makes the Hessian form 4||D h||^2 - 2 eps sum_i (x2^2-coefficient of h_i)^2,
    // indefinite at h = (x2^2, 0, 0) once 2 eps > 4
    let inst = gallery::veronese_surface_example().unwrap();
    for (eps, expect) in [(0.1, true), (-0.1, true), (10.0, false)] {
        let f = inst.target(eps).unwrap();
        let ctx = ObjectiveContext::new(&inst.ring, f, 3).unwrap();
        let rep = stationarity::verify_second_order(&ctx, &inst.l, 1e-10).unwrap();
        assert_eq!(
            rep.is_second_order_stationary, expect,
            "eps = {eps}: {rep:?}"
        );
    }
    let f = inst.target(10.0).unwrap();
    let h = LinearTuple::from_forms(&[
        inst.ring.linear_form(&[(&[0, 0, 2], 1.0)]).unwrap(),
        LinearForm::zeros(6),
        LinearForm::zeros(6),
    ])
    .unwrap();
    let r = sub(&sigma_oracle(&inst.ring, &inst.l), f.as_slice());
    let dl = differential_oracle(&inst.ring, &inst.l, &h);
    let q = 4.0 * dot(&dl, &dl) + 2.0 * dot(&r, &sigma_oracle(&inst.ring, &h));
    assert!((q - (4.0 - 20.0)).abs() < 1e-12);
}

#[test]
fn tau_distinguishes_equal_sums_of_squares() {
    let ring = CoordinateRing::build(&VarietySpec::Veronese { m: 2, d: 2 }).unwrap();
    let family = |b: f64| {
        LinearTuple::from_forms(&[
            ring.linear_form(&[(&[2, 0, 0], 1.0), (&[0, 2, 0], b)])
                .unwrap(),
            ring.linear_form(&[(&[1, 1, 0], (1.0 - 2.0 * b).sqrt())])
                .unwrap(),
            ring.linear_form(&[(&[0, 2, 0], (1.0 - b * b).sqrt())])
                .unwrap(),
        ])
        .unwrap()
    };
    let s0 = sosmap::sigma(&ring, &family(0.0)).unwrap();
    let t0 = sosmap::tau_gram(&ring, &family(0.0)).unwrap();
    for b in [0.25, 0.5] {
        let s = sosmap::sigma(&ring, &family(b)).unwrap();
        assert!(relative_error(s.as_slice(), s0.as_slice()) < 1e-15);
        let t = sosmap::tau_gram(&ring, &family(b)).unwrap();
        assert!((t - &t0).abs().max() > 0.1);
    }
    let unit = LinearTuple::from_forms(&[LinearForm::unit(6, 1)]).unwrap();
    let t = sosmap::tau_gram(&ring, &unit).unwrap();
    assert_eq!(t.sum(), 1.0);
    assert_eq!(t[(1, 1)], 1.0);
}

#[test]
fn scalar_quartic_reduction() {
    // k = 1 on P^1 with target c^2 x0^2: from l0 = a0 x0 the iterates stay on
    // the x0 axis, so the problem is min (a^2 - c^2)^2
    let ring = CoordinateRing::build(&VarietySpec::Veronese { m: 1, d: 1 }).unwrap();
    let c = 2.0;
    let f = ring.quadratic_form(&[(&[2, 0], c * c)]).unwrap();
    let grid_min = (0..=40_000)
        .map(|i| i as f64 * 1e-4)
        .min_by(|a, b| ((a * a - c * c).powi(2)).total_cmp(&(b * b - c * c).powi(2)))
        .unwrap();
    let l0 = LinearTuple::from_forms(&[ring.linear_form(&[(&[1, 0], 0.3)]).unwrap()]).unwrap();
    let ctx = ObjectiveContext::new(&ring, f, 1).unwrap();
    let rec = solver::minimize(&ctx, &l0, &SolverConfig::default()).unwrap();
    assert_eq!(rec.status, RunStatus::Successful);
    let x0 = ring.index1(&Monomial::new(vec![1, 0])).unwrap();
    assert!((rec.final_tuple.row(0)[x0] - grid_min).abs() < 1e-4);
    assert!(rec.final_tuple.row(0)[1 - x0].abs() < 1e-12);
}

#[test]
fn scroll_5_10_solve_succeeds() {
    let ring = CoordinateRing::build(&VarietySpec::Scroll {
        heights: vec![5, 10],
    })
    .unwrap();
    let star = ring.random_linear_tuple(3, 1).unwrap();
    let ctx = ObjectiveContext::new(&ring, sosmap::sigma(&ring, &star).unwrap(), 3).unwrap();
    let l0 = ring.random_linear_tuple(3, 2).unwrap();
    let rec = solver::minimize(&ctx, &l0, &SolverConfig::default()).unwrap();
    assert_eq!(rec.status, RunStatus::Successful);
    assert!(rec.final_distance <= 1e-8);
    assert!(rec.trace.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn solver_is_deterministic_and_scale_consistent() {
    let ring = CoordinateRing::build(&VarietySpec::PlaneCubic {
        cubic: TABLE3_CUBIC,
        d: 5,
    })
    .unwrap();
    let star = ring.random_linear_tuple(ring.dim1(), 3).unwrap();
    let f = sosmap::sigma(&ring, &star).unwrap();
    let f = f.scaled(1.0 / f.norm());
    let l0 = ring.random_linear_tuple(3, 4).unwrap();
    let l0 = l0.scaled(1.0 / l0.norm());
    let ctx = ObjectiveContext::new(&ring, f.clone(), 3).unwrap();
    let cfg = SolverConfig::default();
    let a = solver::minimize(&ctx, &l0, &cfg).unwrap();
    let b = solver::minimize(&ctx, &l0, &cfg).unwrap();
    assert_eq!(a.final_distance.to_bits(), b.final_distance.to_bits());
    assert_eq!(a.final_tuple, b.final_tuple);
    assert_eq!(a.evals, b.evals);

    let c = 1.7;
    let ctx_c = ObjectiveContext::new(&ring, f.scaled(c * c), 3).unwrap();
    let scaled = solver::minimize(&ctx_c, &l0.scaled(c), &cfg).unwrap();
    assert_eq!(a.status, scaled.status);
}

#[test]
fn differential_columns_and_zero_tuple() {
    let ring = CoordinateRing::build(&VarietySpec::Veronese { m: 2, d: 2 }).unwrap();
    let e1 = LinearTuple::from_forms(&[LinearForm::unit(6, 1)]).unwrap();
    let d = stationarity::differential_matrix(&ring, &e1).unwrap();
    for a in 0..6 {
        let col: Vec<f64> = d.column(a).iter().copied().collect();
        assert_eq!(col, ring.mult_dense(1, a).0);
    }
    assert_eq!(stationarity::numerical_rank(&d, DEFAULT_TOL), 6);
    let z = stationarity::differential_matrix(&ring, &LinearTuple::zeros(2, 6)).unwrap();
    assert!(z.iter().all(|&v| v == 0.0));
}

#[test]
fn scroll22_syzygies_and_restricted_form() {
    let inst = gallery::scroll22_example().unwrap();
    let ring = &inst.ring;
    let basis = stationarity::syzygies(ring, &inst.l, DEFAULT_TOL).unwrap();
    let gens = gallery::scroll22_syzygy_generators(ring).unwrap();
    for h in &gens {
        assert!(norm(&differential_oracle(ring, &inst.l, h)) == 0.0);
        assert!(basis.projection_residual(h).unwrap() < 1e-10);
    }
    assert_eq!(
        stationarity::nontrivial_syzygy_dimension(ring, &inst.l, DEFAULT_TOL).unwrap(),
        4
    );

    let g = inst.g.clone().unwrap();
    let w = inst.witness.clone().unwrap();
    let w2 = product_oracle(ring, w.as_slice(), w.as_slice());
    assert!((dot(g.as_slice(), &w2) + 1.0 / 3.0).abs() < 1e-15);

    for seed in 0..10u64 {
        let c: Vec<f64> = random_quadratic(ring, seed).0[..4].to_vec();
        let mut h = vec![0.0; 3 * ring.dim1()];
        for (cj, gj) in c.iter().zip(&gens) {
            for (x, v) in h.iter_mut().zip(gj.as_flat()) {
                *x += cj * v;
            }
        }
        let h = LinearTuple::from_flat(3, ring.dim1(), h).unwrap();
        let q = dot(g.as_slice(), &sigma_oracle(ring, &h));
        let (c1, c2, c3, c4) = (c[0], c[1], c[2], c[3]);
        let want =
            (c1 * c1 + c4 * c4 + (c1 - c4).powi(2) + c2 * c2 + c3 * c3 + (c2 - c3).powi(2)) / 3.0;
        assert!((q - want).abs() < 1e-12 * (1.0 + want), "{q} vs {want}");
    }
}

#[test]
fn scroll_spurious_generators_span_nontrivial_syzygies() {
    for heights in [vec![2, 2], vec![2, 3], vec![1, 2, 2]] {
        let inst = gallery::scroll_spurious(&heights).unwrap();
        let ring = &inst.ring;
        let n = ring.dim1() - 1;
        assert_eq!(inst.k(), n - heights[0] as usize);
        let enumerated: usize = heights[1..].iter().map(|&h| h as usize + 1).sum();
        assert_eq!(inst.k(), enumerated);

        let gens = gallery::scroll_spurious_generators(&inst).unwrap();
        let expected = heights[0] as usize * heights[1..].iter().sum::<u32>() as usize;
        assert_eq!(gens.len(), expected);
        let basis = stationarity::syzygies(ring, &inst.l, DEFAULT_TOL).unwrap();
        for h in &gens {
            assert!(norm(&differential_oracle(ring, &inst.l, h)) < 1e-10);
            assert!(basis.projection_residual(h).unwrap() < 1e-10);
        }
        let stacked = nalgebra::DMatrix::from_fn(gens[0].as_flat().len(), gens.len(), |i, j| {
            gens[j].as_flat()[i]
        });
        assert_eq!(stationarity::numerical_rank(&stacked, 1e-10), expected);
        assert_eq!(
            stationarity::nontrivial_syzygy_dimension(ring, &inst.l, DEFAULT_TOL).unwrap(),
            expected,
            "{heights:?}"
        );
    }
}

#[test]
fn veronese_quartic_structure() {
    let inst = gallery::veronese_quartic_spurious(4).unwrap();
    let ring = &inst.ring;
    let g = inst.g.clone().unwrap();
    let s = sosmap::sigma(ring, &inst.l).unwrap();
    assert!(dot(g.as_slice(), s.as_slice()).abs() < 1e-14);

    // <g, f> = re f(p) at p = (1, i, 0, 0, 0), checked on random forms
    for seed in 0..5u64 {
        let f = random_quadratic(ring, seed);
        let mut re = 0.0;
        for (c, m) in f.as_slice().iter().zip(ring.basis2()) {
            let e = m.exponents();
            if e[2..].iter().all(|&v| v == 0) {
                re += c * [1.0, 0.0, -1.0, 0.0][(e[1] % 4) as usize];
            }
        }
        assert!((ring.inner_product(&g, &f).unwrap() - re).abs() < 1e-12);
    }

    // every syzygy component vanishes at p, real and imaginary parts
    let at_p = |h: &[f64]| {
        let (mut re, mut im) = (0.0, 0.0);
        for (c, m) in h.iter().zip(ring.basis1()) {
            let e = m.exponents();
            if e[2..].iter().all(|&v| v == 0) {
                let (a, b) =
                    [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][(e[1] % 4) as usize];
                re += c * a;
                im += c * b;
            }
        }
        re.hypot(im)
    };
    let basis = stationarity::syzygies(ring, &inst.l, DEFAULT_TOL).unwrap();
    assert!(basis.nullity() > 0);
    for v in basis.vectors() {
        for row in v.rows() {
            assert!(at_p(row) < 1e-10);
        }
    }
    assert!(stationarity::nontrivial_syzygy_dimension(ring, &inst.l, DEFAULT_TOL).unwrap() > 0);
}

#[test]
fn veronese_quartic_has_syzygy_outside_span() {
    // x2^2 * x0x3 = x2x3 * x0x2, with x0x3 and x0x2 outside span(l)
    let inst = gallery::veronese_quartic_spurious(4).unwrap();
    let ring = &inst.ring;
    let mut rows = vec![LinearForm::zeros(ring.dim1()); inst.k()];
    let pos = |e: &[u32]| {
        inst.l.rows().position(|r| {
            let i = ring
                .basis1()
                .iter()
                .position(|m| m.exponents() == e)
                .unwrap();
            r[i] == 1.0 && r.iter().filter(|&&c| c != 0.0).count() == 1
        })
    };
    let (i2, i3) = (
        pos(&[0, 0, 2, 0, 0]).unwrap(),
        pos(&[0, 0, 1, 1, 0]).unwrap(),
    );
    rows[i2] = ring.linear_form(&[(&[1, 0, 0, 1, 0], 1.0)]).unwrap();
    rows[i3] = ring.linear_form(&[(&[1, 0, 1, 0, 0], -1.0)]).unwrap();
    let h = LinearTuple::from_forms(&rows).unwrap();
    assert!(norm(&differential_oracle(ring, &inst.l, &h)) < 1e-14);
    let basis = stationarity::syzygies(ring, &inst.l, DEFAULT_TOL).unwrap();
    assert!(basis.projection_residual(&h).unwrap() < 1e-10);
    assert!(stationarity::span_containment_residual(&inst.l, &basis) > 0.5);
}

#[test]
fn full_rank_differential_forces_refutation() {
    let ring = CoordinateRing::build(&VarietySpec::Scroll {
        heights: vec![5, 10],
    })
    .unwrap();
    let l = ring.random_linear_tuple(3, 8).unwrap();
    let d = stationarity::differential_matrix(&ring, &l).unwrap();
    assert_eq!(stationarity::numerical_rank(&d, DEFAULT_TOL), ring.dim2());
    let g = random_quadratic(&ring, 1);
    let w = LinearForm::unit(ring.dim1(), 0);
    let rep = stationarity::verify_spurious_certificate(&ring, &l, &g, &w, 1e-8).unwrap();
    assert!(!rep.orthogonal_to_ideal);
    assert_eq!(rep.verdict, stationarity::Verdict::Refuted);
}

#[test]
fn appended_form_keeps_refutation() {
    // a g that fails on the Veronese surface tuple still fails after padding
    let inst = gallery::veronese_surface_example().unwrap();
    let ring = &inst.ring;
    let g = ring
        .quadratic_form(&[(&[0, 2, 2], -1.0), (&[0, 0, 4], -1.0)])
        .unwrap();
    let w = inst.witness.clone().unwrap();
    let base = stationarity::verify_spurious_certificate(ring, &inst.l, &g, &w, 1e-8).unwrap();
    assert_eq!(base.verdict, stationarity::Verdict::Refuted);
    let extra = ring.random_linear_tuple(1, 3).unwrap();
    let padded = inst.l.push(&LinearForm(extra.row(0).to_vec())).unwrap();
    let rep = stationarity::verify_spurious_certificate(ring, &padded, &g, &w, 1e-8).unwrap();
    assert_eq!(rep.verdict, stationarity::Verdict::Refuted);
}
