use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::scalar::Scalar;

/// Hermitian-residual threshold above which an input matrix is rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;

type Evaluator = dyn Fn(&[C64]) -> f64 + Send + Sync;

/// Black-box `F²` on `C^n`. Only `f64` evaluation is available, so jets of
/// custom norms always come from the finite-difference engine.
#[derive(Clone)]
pub struct CustomNorm {
    n: usize,
    name: String,
    f: Arc<Evaluator>,
}

impl CustomNorm {
    pub fn new(n: usize, name: impl Into<String>, f: impl Fn(&[C64]) -> f64 + Send + Sync + 'static) -> Self {
        CustomNorm {
            n,
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomNorm")
            .field("n", &self.n)
            .field("name", &self.name)
            .finish()
    }
}

/// A complex Minkowski norm on `g^{1,0} ≅ C^n`, given through `F²`.
#[derive(Clone, Debug)]
pub enum NormSpec {
    /// `F²(v) = H_{ij} v^i v̄^j`.
    Hermitian {
        h: CMat,
    },
    /// `F²(v) = H_{ij} v^i v̄^j + ε (Σ_i |v^i|^{2p})^{1/p}`.
    PerturbedHermitian {
        h: CMat,
        epsilon: f64,
        p: u32,
    },
    Custom(CustomNorm),
}

fn check_hpd(h: &CMat) -> Result<()> {
    let res = h.hermitian_residual();
    if !(res <= HERMITIAN_TOL) {
        return Err(Error::Input(format!("matrix is not Hermitian: residual {res:.3e}")));
    }
    let min = h.min_hermitian_eigenvalue();
    if !(min > 0.0) {
        return Err(Error::Input(format!(
            "matrix is not positive definite: smallest eigenvalue {min:.3e}"
        )));
    }
    Ok(())
}

impl NormSpec {
    pub fn hermitian(h: CMat) -> Result<Self> {
        check_hpd(&h)?;
        Ok(NormSpec::Hermitian { h })
    }

    pub fn identity(n: usize) -> Self {
        NormSpec::Hermitian { h: CMat::identity(n) }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::hermitian(CMat::from_fn(d.len(), |i, j| {
            C64::new(if i == j { d[i] } else { 0.0 }, 0.0)
        }))
    }

    pub fn perturbed(h: CMat, epsilon: f64, p: u32) -> Result<Self> {
        check_hpd(&h)?;
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::Parameter(format!("epsilon must be ≥ 0, got {epsilon}")));
        }
        if p < 2 {
            return Err(Error::Parameter(format!("p must be ≥ 2, got {p}")));
        }
        Ok(NormSpec::PerturbedHermitian { h, epsilon, p })
    }

    pub fn custom(norm: CustomNorm) -> Self {
        NormSpec::Custom(norm)
    }

    pub fn dim(&self) -> usize {
        match self {
            NormSpec::Hermitian { h } | NormSpec::PerturbedHermitian { h, .. } => h.dim(),
            NormSpec::Custom(c) => c.n,
        }
    }

    pub fn is_custom(&self) -> bool {
        matches!(self, NormSpec::Custom(_))
    }

    /// `true` when the Cartan tensors vanish identically.
    pub fn is_hermitian(&self) -> bool {
        match self {
            NormSpec::Hermitian { .. } => true,
            NormSpec::PerturbedHermitian { epsilon, .. } => *epsilon == 0.0,
            NormSpec::Custom(_) => false,
        }
    }

    pub fn kind_name(&self) -> &str {
        match self {
            NormSpec::Hermitian { .. } => "hermitian",
            NormSpec::PerturbedHermitian { .. } => "perturbed_hermitian",
            NormSpec::Custom(c) => c.name(),
        }
    }

    pub(crate) fn check_direction(&self, v: &[C64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::Input(format!(
                "direction has {} components, norm expects {}",
                v.len(),
                self.dim()
            )));
        }
        if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Input("direction has non-finite components".into()));
        }
        Ok(())
    }

    /// `F²(v)`.
    pub fn f_squared(&self, v: &[C64]) -> Result<f64> {
        self.check_direction(v)?;
        Ok(self.eval_f64(v))
    }

    pub(crate) fn eval_f64(&self, v: &[C64]) -> f64 {
        match self {
            NormSpec::Custom(c) => (c.f)(v),
            _ => {
                let x: Vec<f64> = v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect();
                self.eval_real(&x)
            }
        }
    }

    /// `F²` on the real coordinates `(x_1..x_n, y_1..y_n)`, `v = x + √-1 y`.
    ///
    /// Panics for custom norms, which have no generic evaluator.
    pub(crate) fn eval_real<S: Scalar>(&self, x: &[S]) -> S {
        match self {
            NormSpec::Hermitian { h } => hermitian_form(h, x),
            NormSpec::PerturbedHermitian { h, epsilon, p } => {
                let n = h.dim();
                let mut sum = S::zero();
                for i in 0..n {
                    let r2 = x[i] * x[i] + x[n + i] * x[n + i];
                    sum += r2.powi(*p as i32);
                }
                hermitian_form(h, x) + S::from_f64(*epsilon) * sum.powf(1.0 / *p as f64)
            }
            NormSpec::Custom(_) => panic!("custom norms are evaluated on f64 only"),
        }
    }

    /// Evaluates on real coordinates; works for every kind, `f64` only.
    pub(crate) fn eval_real_f64(&self, x: &[f64]) -> f64 {
        match self {
            NormSpec::Custom(c) => {
                let n = c.n;
                let v: Vec<C64> = (0..n).map(|i| C64::new(x[i], x[n + i])).collect();
                (c.f)(&v)
            }
            _ => self.eval_real(x),
        }
    }
}

/// `Re Σ H_ij v^i v̄^j` written in real coordinates.
fn hermitian_form<S: Scalar>(h: &CMat, x: &[S]) -> S {
    let n = h.dim();
    let mut acc = S::zero();
    for i in 0..n {
        let (xi, yi) = (x[i], x[n + i]);
        for j in 0..n {
            let hij = h.get(i, j);
            let (xj, yj) = (x[j], x[n + j]);
            if hij.re != 0.0 {
                acc += S::from_f64(hij.re) * (xi * xj + yi * yj);
            }
            if hij.im != 0.0 {
                acc -= S::from_f64(hij.im) * (yi * xj - xi * yj);
            }
        }
    }
    acc
}
