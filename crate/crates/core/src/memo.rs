//! Memoized evaluators for nested transforms.
//!
//! A wrapped function is replaced, lazily and panel by panel, by piecewise
//! Chebyshev interpolants in u = ln x.  Each panel is validated against the
//! wrapped function at off-node points and bisected until it passes.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::funcspace::{Evaluator, RealFunction};

const NODES: usize = 20;
const BASE_WIDTH: f64 = 0.5;
const MAX_LEVEL: u8 = 8;
const U_MIN: f64 = -46.0;
const U_MAX: f64 = 46.0;

#[derive(Clone)]
enum Panel {
    Leaf(Arc<[f64; NODES]>),
    Split,
}

struct Cache {
    inner: Evaluator,
    abs_tol: f64,
    rel_tol: f64,
    panels: RwLock<HashMap<(u8, i64), Panel>>,
}

fn cheb_nodes() -> [f64; NODES] {
    let mut out = [0.0; NODES];
    for (j, o) in out.iter_mut().enumerate() {
        *o = (std::f64::consts::PI * (j as f64 + 0.5) / NODES as f64).cos();
    }
    out
}

fn clenshaw(c: &[f64; NODES], y: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for k in (1..NODES).rev() {
        let b0 = 2.0 * y * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    y * b1 - b2 + 0.5 * c[0]
}

impl Cache {
    fn width(level: u8) -> f64 {
        BASE_WIDTH / f64::from(1u32 << level)
    }

    fn bounds(level: u8, idx: i64) -> (f64, f64) {
        let w = Self::width(level);
        (idx as f64 * w, (idx + 1) as f64 * w)
    }

    fn build(&self, level: u8, idx: i64) -> Panel {
        let (a, b) = Self::bounds(level, idx);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let nodes = cheb_nodes();
        let vals: Vec<f64> = nodes.iter().map(|y| (self.inner)((mid + half * y).exp())).collect();
        let mut coef = [0.0; NODES];
        for (k, c) in coef.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, v) in vals.iter().enumerate() {
                s += v * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / NODES as f64).cos();
            }
            *c = 2.0 * s / NODES as f64;
        }
        if level >= MAX_LEVEL || vals.iter().any(|v| !v.is_finite()) {
            return Panel::Leaf(Arc::new(coef));
        }
        let ok = [-0.61, 0.13, 0.87].iter().all(|&y| {
            let direct = (self.inner)((mid + half * y).exp());
            let approx = clenshaw(&coef, y);
            (direct - approx).abs() <= self.abs_tol + self.rel_tol * direct.abs()
        });
        if ok {
            Panel::Leaf(Arc::new(coef))
        } else {
            Panel::Split
        }
    }

    fn eval(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return (self.inner)(x);
        }
        let u = x.ln();
        if !(U_MIN..=U_MAX).contains(&u) {
            return (self.inner)(x);
        }
        let mut level = 0u8;
        loop {
            let w = Self::width(level);
            let idx = (u / w).floor() as i64;
            let key = (level, idx);
            let found = self.panels.read().expect("memo lock").get(&key).cloned();
            let panel = match found {
                Some(p) => p,
                None => {
                    let p = self.build(level, idx);
                    self.panels.write().expect("memo lock").entry(key).or_insert(p).clone()
                }
            };
            match panel {
                Panel::Leaf(c) => {
                    let (a, b) = Self::bounds(level, idx);
                    let y = ((u - a) - (b - u)) / (b - a);
                    return clenshaw(&c, y.clamp(-1.0, 1.0));
                }
                Panel::Split => level += 1,
            }
        }
    }
}

/// Wraps `f` in a lazily built piecewise-Chebyshev cache over ln x.
/// Decay metadata and known Mellin data are kept.
pub fn memoize(f: &RealFunction, abs_tol: f64, rel_tol: f64) -> RealFunction {
    let cache = Arc::new(Cache {
        inner: f.evaluator().clone(),
        abs_tol,
        rel_tol,
        panels: RwLock::new(HashMap::new()),
    });
    let evaluator: Evaluator = Arc::new(move |x| cache.eval(x));
    let mut out = RealFunction::from_evaluator(f.label().to_string(), f.decay_hint(), evaluator);
    if let Some(m) = f.known_mellin() {
        let m = m.clone();
        out = out.with_mellin(move |t| m(t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::DecayClass;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn reproduces_smooth_functions() {
        let f = RealFunction::new("r", DecayClass::Algebraic(2.0), |x| 1.0 / (1.0 + x * x));
        let m = memoize(&f, 1e-13, 1e-11);
        for &x in &[1e-9, 0.003, 0.5, 1.0, 1.7, 33.0, 1e6] {
            assert!((m.eval(x) - f.eval(x)).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn reuses_panels() {
        let calls = Arc::new(AtomicUsize::new(0));
        let c2 = calls.clone();
        let f = RealFunction::new("e", DecayClass::Exponential(1.0), move |x| {
            c2.fetch_add(1, Ordering::Relaxed);
            (-x).exp()
        });
        let m = memoize(&f, 1e-13, 1e-11);
        for i in 0..1000 {
            m.eval(1.0 + i as f64 * 1e-4);
        }
        let first = calls.load(Ordering::Relaxed);
        for i in 0..1000 {
            m.eval(1.0 + i as f64 * 1e-4);
        }
        assert_eq!(calls.load(Ordering::Relaxed), first);
        assert!(first < 200);
    }

    #[test]
    fn resolves_kinks_by_refinement() {
        let f = RealFunction::new("k", DecayClass::Compact(3.0), |x| (x - 1.3).abs().min(1.0));
        let m = memoize(&f, 1e-6, 0.0);
        for &x in &[1.0, 1.29, 1.31, 2.0] {
            assert!((m.eval(x) - f.eval(x)).abs() < 1e-4, "x={x}");
        }
    }
}
