//! Full-memory BFGS with a strong-Wolfe line search.
//!
//! The line search is the standard bracketing/zoom scheme with safeguarded
//! cubic interpolation. The inverse
//! Hessian starts as the identity and is rescaled by `y's / y'y` before the
//! first update.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, copysign, sqrt};

/// Something that can be minimised: returns `f(x)` and writes `grad f(x)`.
pub trait Objective {
    fn evaluate(&mut self, x: &[f64], grad: &mut [f64]) -> f64;
}

impl<F> Objective for F
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    fn evaluate(&mut self, x: &[f64], grad: &mut [f64]) -> f64 {
        self(x, grad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsConfig {
    /// Stop once `||grad||_2` drops below this.
    pub gradient_tol: f64,
    pub max_iterations: usize,
    /// Sufficient-decrease constant.
    pub c1: f64,
    /// Curvature constant.
    pub c2: f64,
    /// Function evaluations allowed per line search.
    pub max_line_search_evals: usize,
}

impl Default for BfgsConfig {
    fn default() -> Self {
        Self { gradient_tol: 1e-5, max_iterations: 1000, c1: 1e-4, c2: 0.9, max_line_search_evals: 40 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Tolerance,
    MaxIterations,
    LineSearchFailure,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Tolerance => "tolerance",
            Termination::MaxIterations => "max_iter",
            Termination::LineSearchFailure => "line_search_failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationTrace {
    pub iterations: usize,
    pub evaluations: usize,
    pub final_value: f64,
    pub final_gradient_norm: f64,
    pub termination: Termination,
    /// Objective value at every accepted iterate, starting with `x0`.
    pub accepted_values: Vec<f64>,
}

struct Point {
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
}

struct Evaluator<'a, O: Objective> {
    objective: &'a mut O,
    evaluations: usize,
    best: Option<Point>,
}

impl<O: Objective> Evaluator<'_, O> {
    fn eval(&mut self, x: Vec<f64>) -> Point {
        let mut g = vec![0.0; x.len()];
        let mut f = self.objective.evaluate(&x, &mut g);
        if !f.is_finite() {
            f = f64::INFINITY;
        }
        self.evaluations += 1;
        let p = Point { x, f, g };
        if self.best.as_ref().is_none_or(|b| p.f < b.f) {
            self.best = Some(Point { x: p.x.clone(), f: p.f, g: p.g.clone() });
        }
        p
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

fn step(x: &[f64], dir: &[f64], alpha: f64) -> Vec<f64> {
    x.iter().zip(dir).map(|(xi, di)| xi + alpha * di).collect()
}

/// Minimiser of the cubic interpolating `(a, fa, da)` and `(b, fb, db)`,
/// pulled back to the interval interior when it strays too close to the ends.
fn cubic_step(a: f64, fa: f64, da: f64, b: f64, fb: f64, db: f64) -> f64 {
    let lo = a.min(b);
    let hi = a.max(b);
    let width = hi - lo;
    let d1 = da + db - 3.0 * (fa - fb) / (a - b);
    let disc = d1 * d1 - da * db;
    let mut t = f64::NAN;
    if disc >= 0.0 && (a - b) != 0.0 {
        let d2 = copysign(sqrt(disc), b - a);
        let denom = db - da + 2.0 * d2;
        if denom != 0.0 {
            t = b - (b - a) * (db + d2 - d1) / denom;
        }
    }
    if !t.is_finite() || t < lo + 0.1 * width || t > hi - 0.1 * width {
        t = 0.5 * (lo + hi);
    }
    t
}

enum Search {
    Found(Point),
    Failed,
}

fn line_search<O: Objective>(
    ev: &mut Evaluator<'_, O>,
    start: &Point,
    dir: &[f64],
    alpha0: f64,
    cfg: &BfgsConfig,
) -> Search {
    let f0 = start.f;
    let d0 = dot(&start.g, dir);
    let armijo = |a: f64, f: f64| f <= f0 + cfg.c1 * a * d0;
    let curvature = |d: f64| abs(d) <= -cfg.c2 * d0;

    let (mut a_prev, mut f_prev, mut d_prev) = (0.0, f0, d0);
    let mut alpha = alpha0;
    let mut evals = 0;
    let mut first = true;
    loop {
        if evals >= cfg.max_line_search_evals {
            return Search::Failed;
        }
        let p = ev.eval(step(&start.x, dir, alpha));
        evals += 1;
        let d = dot(&p.g, dir);
        if !armijo(alpha, p.f) || (!first && p.f >= f_prev) {
            return zoom(ev, start, dir, (a_prev, f_prev, d_prev), (alpha, p.f, d), evals, cfg);
        }
        if curvature(d) {
            return Search::Found(p);
        }
        if d >= 0.0 {
            return zoom(ev, start, dir, (alpha, p.f, d), (a_prev, f_prev, d_prev), evals, cfg);
        }
        a_prev = alpha;
        f_prev = p.f;
        d_prev = d;
        alpha *= 2.0;
        first = false;
    }
}

fn zoom<O: Objective>(
    ev: &mut Evaluator<'_, O>,
    start: &Point,
    dir: &[f64],
    mut lo: (f64, f64, f64),
    mut hi: (f64, f64, f64),
    mut evals: usize,
    cfg: &BfgsConfig,
) -> Search {
    let f0 = start.f;
    let d0 = dot(&start.g, dir);
    loop {
        if evals >= cfg.max_line_search_evals {
            return Search::Failed;
        }
        let width = abs(hi.0 - lo.0);
        if width <= 1e-16 * lo.0.abs().max(1.0) {
            return Search::Failed;
        }
        // An infinite value at the far end leaves nothing to interpolate.
        let alpha = if hi.1.is_finite() {
            cubic_step(lo.0, lo.1, lo.2, hi.0, hi.1, hi.2)
        } else {
            0.5 * (lo.0 + hi.0)
        };
        let p = ev.eval(step(&start.x, dir, alpha));
        evals += 1;
        let d = dot(&p.g, dir);
        if p.f > f0 + cfg.c1 * alpha * d0 || p.f >= lo.1 {
            hi = (alpha, p.f, d);
        } else {
            if abs(d) <= -cfg.c2 * d0 {
                return Search::Found(p);
            }
            if d * (hi.0 - lo.0) >= 0.0 {
                hi = lo;
            }
            lo = (alpha, p.f, d);
        }
    }
}

/// Runs BFGS from `x0` and returns the best point visited.
pub fn bfgs_minimize<O: Objective>(objective: &mut O, x0: &[f64], cfg: &BfgsConfig) -> (Vec<f64>, OptimizationTrace) {
    let n = x0.len();
    let mut ev = Evaluator { objective, evaluations: 0, best: None };
    let mut cur = ev.eval(x0.to_vec());
    let mut accepted = vec![cur.f];
    // Inverse Hessian approximation; `None` means a (scaled) identity.
    let mut inv_h: Option<Vec<f64>> = None;
    let mut iterations = 0;
    let mut termination = Termination::MaxIterations;
    let mut hy = vec![0.0; n];
    loop {
        if norm(&cur.g) < cfg.gradient_tol {
            termination = Termination::Tolerance;
            break;
        }
        if iterations >= cfg.max_iterations {
            break;
        }
        let mut dir: Vec<f64> = match &inv_h {
            Some(h) => (0..n).map(|i| -dot(&h[i * n..(i + 1) * n], &cur.g)).collect(),
            None => cur.g.iter().map(|g| -g).collect(),
        };
        if dot(&dir, &cur.g) >= 0.0 {
            inv_h = None;
            dir = cur.g.iter().map(|g| -g).collect();
        }
        let alpha0 = if inv_h.is_some() { 1.0 } else { (1.0 / norm(&cur.g)).min(1.0) };
        let next = match line_search(&mut ev, &cur, &dir, alpha0, cfg) {
            Search::Found(p) => p,
            Search::Failed if inv_h.is_some() => {
                // Retry once from steepest descent before giving up.
                inv_h = None;
                iterations += 1;
                continue;
            }
            Search::Failed => {
                termination = Termination::LineSearchFailure;
                break;
            }
        };
        iterations += 1;
        let s: Vec<f64> = next.x.iter().zip(&cur.x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next.g.iter().zip(&cur.g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) && sy > 0.0 {
            let h = inv_h.get_or_insert_with(|| {
                let scale = sy / dot(&y, &y);
                let mut m = vec![0.0; n * n];
                for i in 0..n {
                    m[i * n + i] = scale;
                }
                m
            });
            let rho = 1.0 / sy;
            for i in 0..n {
                hy[i] = dot(&h[i * n..(i + 1) * n], &y);
            }
            let yhy = dot(&y, &hy);
            let coef = rho * rho * yhy + rho;
            for i in 0..n {
                let row = &mut h[i * n..(i + 1) * n];
                for j in 0..n {
                    row[j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        cur = next;
        accepted.push(cur.f);
    }
    let evaluations = ev.evaluations;
    if let Some(best) = ev.best.take() {
        if best.f < cur.f {
            cur = best;
        }
    }
    let trace = OptimizationTrace {
        iterations,
        evaluations,
        final_value: cur.f,
        final_gradient_norm: norm(&cur.g),
        termination,
        accepted_values: accepted,
    };
    (cur.x, trace)
}
