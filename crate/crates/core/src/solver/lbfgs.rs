//! Limited-memory BFGS with a strong-Wolfe line search (bracketing + zoom
//! with safeguarded cubic interpolation).

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::algebra::{dot, norm};

#[derive(Clone, Debug)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub c1: f64,
    pub c2: f64,
    pub grad_tol: f64,
    pub ftol_rel: f64,
    pub max_evals: usize,
    pub time_limit: Duration,
    /// Stop as soon as the objective drops to or below this value.
    pub target_value: f64,
}

/// Why the iteration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    TargetReached,
    GradientTolerance,
    RelativeDecrease,
    EvaluationLimit,
    TimeLimit,
    LineSearchFailure,
}

impl Termination {
    /// Convergence in the optimizer's own sense, independent of the target.
    pub fn is_converged(self) -> bool {
        matches!(
            self,
            Termination::GradientTolerance | Termination::RelativeDecrease
        )
    }
}

#[derive(Clone, Debug)]
pub struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub evals: usize,
    pub iterations: usize,
    pub termination: Termination,
    /// Objective at every accepted iterate, starting with `x0`.
    pub trace: Vec<f64>,
    pub diagnostic: Option<String>,
}

#[derive(Debug)]
pub struct NonFinite(pub String);

const MAX_BRACKET: usize = 20;
const MAX_ZOOM: usize = 30;
const MAX_HALVINGS: usize = 50;

struct Point {
    alpha: f64,
    value: f64,
    slope: f64,
    x: Vec<f64>,
    grad: Vec<f64>,
}

enum Search {
    Accepted(Point),
    /// Budget ran out; carries the best sufficient-decrease point seen, if any.
    OutOfBudget(Option<Point>, Termination),
    Failed(String),
}

struct Evaluator<'f> {
    f: &'f mut dyn FnMut(&[f64], &mut [f64]) -> f64,
    evals: usize,
    max_evals: usize,
    start: Instant,
    time_limit: Duration,
}

impl Evaluator<'_> {
    fn exhausted(&self) -> Option<Termination> {
        if self.evals >= self.max_evals {
            Some(Termination::EvaluationLimit)
        } else if self.start.elapsed() >= self.time_limit {
            Some(Termination::TimeLimit)
        } else {
            None
        }
    }

    fn eval(&mut self, x: &[f64], g: &mut [f64]) -> f64 {
        self.evals += 1;
        (self.f)(x, g)
    }
}

pub fn minimize(
    f: &mut dyn FnMut(&[f64], &mut [f64]) -> f64,
    x0: Vec<f64>,
    opts: &LbfgsOptions,
) -> Result<LbfgsOutcome, NonFinite> {
    let n = x0.len();
    let mut ev = Evaluator {
        f,
        evals: 0,
        max_evals: opts.max_evals.max(1),
        start: Instant::now(),
        time_limit: opts.time_limit,
    };
    let mut x = x0;
    let mut g = vec![0.0; n];
    let mut fx = ev.eval(&x, &mut g);
    if !fx.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(NonFinite(
            "objective or gradient at the starting point".into(),
        ));
    }

    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut trace = vec![fx];
    let mut iterations = 0;
    let mut diagnostic = None;
    let mut retried = false;

    let termination = loop {
        if fx <= opts.target_value {
            break Termination::TargetReached;
        }
        let gnorm = norm(&g);
        if gnorm <= opts.grad_tol * norm(&x).max(1.0) {
            break Termination::GradientTolerance;
        }
        if let Some(t) = ev.exhausted() {
            break t;
        }

        let mut d = two_loop(&g, &memory);
        let mut slope = dot(&d, &g);
        if !(slope < 0.0) || !slope.is_finite() {
            memory.clear();
            d = g.iter().map(|v| -v).collect();
            slope = -gnorm * gnorm;
        }
        let alpha0 = if memory.is_empty() {
            (1.0 / gnorm).min(1.0)
        } else {
            1.0
        };

        let point = match strong_wolfe(&mut ev, &x, fx, slope, &d, alpha0, opts) {
            Search::Accepted(p) => p,
            Search::OutOfBudget(Some(p), t) => {
                accept(&mut x, &mut g, &mut fx, &mut trace, p);
                iterations += 1;
                break if fx <= opts.target_value {
                    Termination::TargetReached
                } else {
                    t
                };
            }
            Search::OutOfBudget(None, t) => break t,
            Search::Failed(msg) => {
                if !memory.is_empty() && !retried {
                    // retry once along steepest descent with a fresh model
                    memory.clear();
                    retried = true;
                    continue;
                }
                diagnostic = Some(msg);
                break Termination::LineSearchFailure;
            }
        };
        retried = false;

        let s: Vec<f64> = point.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = point.grad.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > f64::EPSILON * norm(&s) * norm(&y) && sy.is_finite() {
            if memory.len() == opts.memory {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }

        let previous = fx;
        accept(&mut x, &mut g, &mut fx, &mut trace, point);
        iterations += 1;
        if fx <= opts.target_value {
            break Termination::TargetReached;
        }
        if (previous - fx) <= opts.ftol_rel * previous.abs() {
            break Termination::RelativeDecrease;
        }
    };

    Ok(LbfgsOutcome {
        grad_norm: norm(&g),
        x,
        value: fx,
        evals: ev.evals,
        iterations,
        termination,
        trace,
        diagnostic,
    })
}

fn accept(x: &mut Vec<f64>, g: &mut Vec<f64>, fx: &mut f64, trace: &mut Vec<f64>, p: Point) {
    *x = p.x;
    *g = p.grad;
    *fx = p.value;
    trace.push(p.value);
}

/// `-H g` from the stored curvature pairs with the usual `s'y / y'y` scaling.
fn two_loop(g: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q: Vec<f64> = g.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

fn probe(ev: &mut Evaluator<'_>, x: &[f64], d: &[f64], alpha: f64) -> Point {
    let xa: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + alpha * di).collect();
    let mut ga = vec![0.0; x.len()];
    let value = ev.eval(&xa, &mut ga);
    let slope = dot(&ga, d);
    Point {
        alpha,
        value,
        slope,
        x: xa,
        grad: ga,
    }
}

fn finite(p: &Point) -> bool {
    p.value.is_finite() && p.slope.is_finite()
}

fn strong_wolfe(
    ev: &mut Evaluator<'_>,
    x: &[f64],
    f0: f64,
    slope0: f64,
    d: &[f64],
    alpha0: f64,
    opts: &LbfgsOptions,
) -> Search {
    let armijo = |p: &Point| p.value <= f0 + opts.c1 * p.alpha * slope0;
    let curvature = |p: &Point| p.slope.abs() <= -opts.c2 * slope0;

    let mut prev = Point {
        alpha: 0.0,
        value: f0,
        slope: slope0,
        x: x.to_vec(),
        grad: Vec::new(),
    };
    let mut best: Option<Point> = None;
    let mut alpha = alpha0;
    let mut halvings = 0;

    for i in 0..MAX_BRACKET {
        if let Some(t) = ev.exhausted() {
            return Search::OutOfBudget(best, t);
        }
        let cur = probe(ev, x, d, alpha);
        if !finite(&cur) {
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Search::Failed("non-finite objective along the search direction".into());
            }
            alpha = prev.alpha + 0.5 * (alpha - prev.alpha);
            continue;
        }
        if !armijo(&cur) || (i > 0 && cur.value >= prev.value) {
            return zoom(ev, x, f0, slope0, d, prev, cur, best, opts);
        }
        if curvature(&cur) {
            return Search::Accepted(cur);
        }
        if cur.slope >= 0.0 {
            return zoom(ev, x, f0, slope0, d, cur, prev, best, opts);
        }
        alpha = 2.0 * cur.alpha;
        if best.as_ref().is_none_or(|b| cur.value < b.value) {
            best = Some(Point {
                grad: cur.grad.clone(),
                x: cur.x.clone(),
                ..cur
            });
        }
        prev = cur;
    }
    match best {
        Some(p) => Search::Accepted(p),
        None => Search::Failed("bracketing phase did not terminate".into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn zoom(
    ev: &mut Evaluator<'_>,
    x: &[f64],
    f0: f64,
    slope0: f64,
    d: &[f64],
    mut lo: Point,
    mut hi: Point,
    mut best: Option<Point>,
    opts: &LbfgsOptions,
) -> Search {
    // `lo` always satisfies sufficient decrease (or is the origin)
    for _ in 0..MAX_ZOOM {
        if lo.alpha > 0.0 && best.as_ref().is_none_or(|b| lo.value < b.value) {
            best = Some(Point {
                grad: lo.grad.clone(),
                x: lo.x.clone(),
                ..lo
            });
        }
        if let Some(t) = ev.exhausted() {
            return Search::OutOfBudget(best, t);
        }
        let width = (hi.alpha - lo.alpha).abs();
        if width <= f64::EPSILON * lo.alpha.abs().max(hi.alpha.abs()) {
            break;
        }
        let alpha = interpolate(&lo, &hi);
        let cur = probe(ev, x, d, alpha);
        if !finite(&cur) {
            hi = cur;
            continue;
        }
        if cur.value > f0 + opts.c1 * cur.alpha * slope0 || cur.value >= lo.value {
            hi = cur;
        } else {
            if cur.slope.abs() <= -opts.c2 * slope0 {
                return Search::Accepted(cur);
            }
            if cur.slope * (hi.alpha - lo.alpha) >= 0.0 {
                hi = lo;
            }
            lo = cur;
        }
    }
    // weak acceptance: a point with sufficient decrease is still a descent step
    match best {
        Some(p) if p.value < f0 => Search::Accepted(p),
        _ => Search::Failed("zoom interval collapsed without sufficient decrease".into()),
    }
}

/// Minimizer of the cubic through `(lo, hi)` values and slopes, kept away
/// from the interval ends; bisection when the cubic is unusable.
fn interpolate(lo: &Point, hi: &Point) -> f64 {
    let (a, b) = (lo.alpha, hi.alpha);
    let (left, right) = if a < b { (a, b) } else { (b, a) };
    let margin = 0.1 * (right - left);
    let fallback = 0.5 * (a + b);
    if !finite(hi) {
        return fallback;
    }
    let d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (a - b);
    let disc = d1 * d1 - lo.slope * hi.slope;
    if disc < 0.0 || !disc.is_finite() {
        return fallback;
    }
    let d2 = (b - a).signum() * disc.sqrt();
    let denom = hi.slope - lo.slope + 2.0 * d2;
    if denom == 0.0 {
        return fallback;
    }
    let t = b - (b - a) * (hi.slope + d2 - d1) / denom;
    if !t.is_finite() || t < left + margin || t > right - margin {
        fallback
    } else {
        t
    }
}
