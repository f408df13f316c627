//! Real derivative tensors of `F²` in the coordinates `(x, y)`, `v = x + √-1 y`,
//! from nested dual numbers or from central differences.

use serde::{Deserialize, Serialize};

use super::spec::NormSpec;
use crate::error::{Error, Result};
use crate::scalar::{Dual, Dual2, Dual3, Dual4, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DiffMode {
    /// Forward-mode automatic differentiation with nested duals.
    #[default]
    Dual,
    /// Central differences.
    Fd,
}

impl std::fmt::Display for DiffMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DiffMode::Dual => "dual",
            DiffMode::Fd => "fd",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffConfig {
    pub mode: DiffMode,
    /// Base finite-difference step; scaled by `max(1, |v|_∞)`. When unset the
    /// step for a derivative of total order `k` is `ε^{1/(k+4)}` with
    /// Richardson extrapolation and `ε^{1/(k+2)}` without.
    pub fd_step: Option<f64>,
    pub richardson: bool,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            mode: DiffMode::Dual,
            fd_step: None,
            richardson: true,
        }
    }
}

impl DiffConfig {
    pub fn fd() -> Self {
        DiffConfig {
            mode: DiffMode::Fd,
            ..Default::default()
        }
    }

    /// Mode actually used for `norm`: custom norms only support `Fd`.
    pub fn effective_mode(&self, norm: &NormSpec) -> DiffMode {
        if norm.is_custom() {
            DiffMode::Fd
        } else {
            self.mode
        }
    }

    pub(crate) fn step(&self, order: usize, scale: f64) -> f64 {
        let base = self.fd_step.unwrap_or_else(|| {
            let extra = if self.richardson { 4 } else { 2 };
            f64::EPSILON.powf(1.0 / (order + extra) as f64)
        });
        base * scale.max(1.0)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self.fd_step {
            Some(h) if !(h > 0.0 && h.is_finite()) => {
                Err(Error::Parameter(format!("fd step must be positive, got {h}")))
            }
            _ => Ok(()),
        }
    }
}

/// All partial derivatives of a real function up to `order`, stored densely.
#[derive(Clone, Debug)]
pub(crate) struct RealTaylor {
    m: usize,
    order: usize,
    tensors: Vec<Vec<f64>>,
}

impl RealTaylor {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &a| acc * self.m + a)
    }

    /// `∂^k f / ∂x_{idx[0]} ... ∂x_{idx[k-1]}`; the empty index gives `f`.
    pub fn get(&self, idx: &[usize]) -> f64 {
        debug_assert!(idx.len() <= self.order);
        self.tensors[idx.len()][self.flat(idx)]
    }

    pub fn value(&self) -> f64 {
        self.tensors[0][0]
    }
}

/// Nondecreasing index tuples of length `k` over `0..m`.
fn sorted_indices(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..m {
            cur.push(a);
            rec(m, k, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

fn permutations(idx: &[usize]) -> Vec<Vec<usize>> {
    if idx.len() <= 1 {
        return vec![idx.to_vec()];
    }
    let mut out = Vec::new();
    for p in 0..idx.len() {
        if p > 0 && idx[..p].contains(&idx[p]) {
            continue;
        }
        let mut rest = idx.to_vec();
        let head = rest.remove(p);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Scalar types whose top infinitesimal coefficient is a mixed partial.
trait Tower: Scalar {
    const DEPTH: usize;
    fn seed(x: f64, on: &[bool]) -> Self;
    fn top(&self) -> f64;
}

impl Tower for f64 {
    const DEPTH: usize = 0;
    fn seed(x: f64, _: &[bool]) -> Self {
        x
    }
    fn top(&self) -> f64 {
        *self
    }
}

impl<T: Tower> Tower for Dual<T> {
    const DEPTH: usize = T::DEPTH + 1;
    fn seed(x: f64, on: &[bool]) -> Self {
        let d = Self::DEPTH;
        Dual::new(T::seed(x, &on[..d - 1]), if on[d - 1] { T::one() } else { T::zero() })
    }
    fn top(&self) -> f64 {
        self.eps.top()
    }
}

fn dual_partial<T: Tower>(norm: &NormSpec, x: &[f64], dirs: &[usize]) -> f64 {
    let seeded: Vec<T> = x
        .iter()
        .enumerate()
        .map(|(c, &xc)| {
            let on: Vec<bool> = dirs.iter().map(|&d| d == c).collect();
            T::seed(xc, &on)
        })
        .collect();
    norm.eval_real(&seeded).top()
}

fn fd_nested(f: &dyn Fn(&[f64]) -> f64, x: &mut Vec<f64>, dirs: &[usize], h: f64) -> f64 {
    match dirs.split_last() {
        None => f(x),
        Some((&a, rest)) => {
            let x0 = x[a];
            x[a] = x0 + h;
            let plus = fd_nested(f, x, rest, h);
            x[a] = x0 - h;
            let minus = fd_nested(f, x, rest, h);
            x[a] = x0;
            (plus - minus) / (2.0 * h)
        }
    }
}

/// One step of Richardson extrapolation for an `O(h²)` central scheme.
fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

fn fd_partial(norm: &NormSpec, x: &[f64], dirs: &[usize], cfg: &DiffConfig, scale: f64) -> f64 {
    let f = |p: &[f64]| norm.eval_real_f64(p);
    let h = cfg.step(dirs.len(), scale);
    let mut buf = x.to_vec();
    let coarse = fd_nested(&f, &mut buf, dirs, h);
    if !cfg.richardson {
        return coarse;
    }
    let fine = fd_nested(&f, &mut buf, dirs, h / 2.0);
    richardson(coarse, fine)
}

/// Derivative tensors of `F²` at the real point `x` up to `order ≤ 4`.
pub(crate) fn real_taylor(norm: &NormSpec, x: &[f64], order: usize, cfg: &DiffConfig) -> Result<RealTaylor> {
    assert!(order <= 4, "derivative tensors are available up to order 4");
    cfg.validate()?;
    let m = x.len();
    let mode = cfg.effective_mode(norm);
    let scale = x.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let mut tensors = vec![vec![norm.eval_real_f64(x)]];
    for k in 1..=order {
        let mut t = vec![0.0; m.pow(k as u32)];
        for idx in sorted_indices(m, k) {
            let val = match mode {
                DiffMode::Dual => match k {
                    1 => dual_partial::<Dual<f64>>(norm, x, &idx),
                    2 => dual_partial::<Dual2>(norm, x, &idx),
                    3 => dual_partial::<Dual3>(norm, x, &idx),
                    _ => dual_partial::<Dual4>(norm, x, &idx),
                },
                DiffMode::Fd => fd_partial(norm, x, &idx, cfg, scale),
            };
            if !val.is_finite() {
                return Err(Error::Differentiation(format!(
                    "non-finite order-{k} derivative along {idx:?}"
                )));
            }
            for p in permutations(&idx) {
                let flat = p.iter().fold(0, |acc, &a| acc * m + a);
                t[flat] = val;
            }
        }
        tensors.push(t);
    }
    Ok(RealTaylor { m, order, tensors })
}
