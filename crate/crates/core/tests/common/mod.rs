//! Brute-force finite-difference pipeline used as an oracle. It shares no
//! code with the library beyond evaluating `F²` and brackets of basis vectors.

#![allow(dead_code, clippy::needless_range_loop)]

use finsler_lie::algebra::{ComplexifiedAlgebra, MixedVector};
use finsler_lie::linalg::C64;
use finsler_lie::norm::NormSpec;

pub type Mat = Vec<Vec<C64>>;

const I: C64 = C64::new(0.0, 1.0);

fn basis(n: usize, i: usize) -> Vec<C64> {
    let mut e = vec![C64::new(0.0, 0.0); n];
    e[i] = C64::new(1.0, 0.0);
    e
}

/// Gaussian elimination with partial pivoting.
pub fn solve(a: &Mat, b: &[C64]) -> Vec<C64> {
    let n = b.len();
    let mut m: Vec<Vec<C64>> = a
        .iter()
        .zip(b)
        .map(|(r, &x)| r.iter().copied().chain([x]).collect())
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| m[x][c].norm().total_cmp(&m[y][c].norm()))
            .unwrap();
        m.swap(c, p);
        assert!(m[c][c].norm() > 1e-14, "oracle: singular system");
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..=n {
                let t = m[c][k];
                m[r][k] -= f * t;
            }
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: C64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    x
}

pub struct Oracle<'a> {
    pub alg: &'a ComplexifiedAlgebra,
    pub norm: &'a NormSpec,
    pub n: usize,
}

impl<'a> Oracle<'a> {
    pub fn new(alg: &'a ComplexifiedAlgebra, norm: &'a NormSpec) -> Self {
        Oracle {
            alg,
            norm,
            n: alg.dim(),
        }
    }

    fn f2(&self, x: &[f64]) -> f64 {
        let n = self.n;
        let v: Vec<C64> = (0..n).map(|i| C64::new(x[i], x[n + i])).collect();
        self.norm.f_squared(&v).unwrap()
    }

    /// `∂²F²/∂x_a∂x_b` by a four-point stencil with one Richardson step.
    fn second(&self, x: &[f64], a: usize, b: usize, h: f64) -> f64 {
        let stencil = |h: f64| {
            let at = |sa: f64, sb: f64| {
                let mut y = x.to_vec();
                y[a] += sa * h;
                y[b] += sb * h;
                self.f2(&y)
            };
            (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * h * h)
        };
        (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0
    }

    /// `(g_{ij̄}, g_{ij} conjugated)`, i.e. `∂²F²/∂v^i∂v̄^j` and `∂²F²/∂v̄^i∂v̄^j`.
    pub fn metric(&self, v: &[C64]) -> (Mat, Mat) {
        let n = self.n;
        let x: Vec<f64> = v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect();
        let scale = v.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let h = 5e-3 * scale;
        let d = |a: usize, b: usize| self.second(&x, a, b, h);
        let mut g = vec![vec![C64::new(0.0, 0.0); n]; n];
        let mut ga = g.clone();
        for i in 0..n {
            for j in 0..n {
                let (xx, yy, xy, yx) = (d(i, j), d(n + i, n + j), d(i, n + j), d(n + i, j));
                g[i][j] = C64::new(xx + yy, xy - yx) * 0.25;
                ga[i][j] = C64::new(xx - yy, xy + yx) * 0.25;
            }
        }
        (g, ga)
    }

    /// `[e_a, ē_b]`.
    fn mixed(&self, a: usize, b: usize) -> MixedVector {
        self.alg.bracket_with_conj(&basis(self.n, a), &basis(self.n, b))
    }

    /// `[u, w̄]` for arbitrary vectors, from basis brackets.
    fn bracket_bar(&self, u: &[C64], w: &[C64]) -> MixedVector {
        let n = self.n;
        let mut out = MixedVector::zeros(n);
        for a in 0..n {
            for b in 0..n {
                let c = u[a] * w[b].conj();
                let m = self.mixed(a, b);
                for i in 0..n {
                    out.hol[i] += c * m.hol[i];
                    out.anti[i] += c * m.anti[i];
                }
            }
        }
        out
    }

    fn inner(g: &Mat, a: &[C64], b: &[C64]) -> C64 {
        let n = a.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| g[i][j] * a[i] * b[j].conj())
            .sum()
    }

    /// `S̄_v(a, b) = ∂²F²/∂v̄^j∂v̄^t ā^j b̄^t`.
    fn s_bar(ga: &Mat, a: &[C64], b: &[C64]) -> C64 {
        let n = a.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| ga[i][j] * a[i].conj() * b[j].conj())
            .sum()
    }

    /// Columns `𝒩(e_k)` from `g_v(𝒩(w), u) = g_v(v, [u, w̄]^{1,0}) + S̄_v(u, [v, w̄]^{1,0})`.
    /// Returns `N[i][k] = N^i_k`.
    pub fn n_matrix(&self, v: &[C64]) -> Mat {
        let n = self.n;
        let (g, ga) = self.metric(v);
        // g_v(x, e_u) = g_{i ū} x^i: row u of the system is column u of g.
        let a: Mat = (0..n).map(|u| (0..n).map(|i| g[i][u]).collect()).collect();
        let mut out = vec![vec![C64::new(0.0, 0.0); n]; n];
        for k in 0..n {
            let w = basis(n, k);
            let vw = self.bracket_bar(v, &w).hol;
            let rhs: Vec<C64> = (0..n)
                .map(|u| {
                    let e = basis(n, u);
                    Self::inner(&g, v, &self.bracket_bar(&e, &w).hol) + Self::s_bar(&ga, &e, &vw)
                })
                .collect();
            for (i, x) in solve(&a, &rhs).into_iter().enumerate() {
                out[i][k] = x;
            }
        }
        out
    }

    /// Wirtinger derivatives `(∂N^i_k/∂v^l, ∂N^i_k/∂v̄^l)` by central
    /// differences of the whole map `v ↦ N(v)`, stored `[i][k][l]`.
    pub fn dn(&self, v: &[C64]) -> (Vec<Mat>, Vec<Mat>) {
        let n = self.n;
        let scale = v.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let h = 2e-3 * scale;
        let partial = |l: usize, dir: C64| -> Mat {
            let diff = |h: f64| {
                let shift = |s: f64| {
                    let mut p = v.to_vec();
                    p[l] += dir * (s * h);
                    self.n_matrix(&p)
                };
                let (a, b) = (shift(1.0), shift(-1.0));
                (0..n)
                    .map(|i| (0..n).map(|k| (a[i][k] - b[i][k]) / (2.0 * h)).collect())
                    .collect::<Mat>()
            };
            let (fine, coarse) = (diff(h / 2.0), diff(h));
            (0..n)
                .map(|i| (0..n).map(|k| (fine[i][k] * 4.0 - coarse[i][k]) / 3.0).collect())
                .collect()
        };
        let mut dv = vec![vec![vec![C64::new(0.0, 0.0); n]; n]; n];
        let mut dvb = dv.clone();
        for l in 0..n {
            let (px, py) = (partial(l, C64::new(1.0, 0.0)), partial(l, I));
            for i in 0..n {
                for k in 0..n {
                    dv[i][k][l] = (px[i][k] - I * py[i][k]) * 0.5;
                    dvb[i][k][l] = (px[i][k] + I * py[i][k]) * 0.5;
                }
            }
        }
        (dv, dvb)
    }

    /// `R^i_{kj̄}` stored `[i][k][j]`, every term recomputed from basis brackets.
    pub fn r_block(&self, v: &[C64]) -> Vec<Mat> {
        let n = self.n;
        let nm = self.n_matrix(v);
        let (dv, dvb) = self.dn(v);
        // λ^l_{s j̄}: (1,0) part of [e_s, ē_j].
        let lam = |l: usize, s: usize, j: usize| self.mixed(s, j).hol[l];
        // λ^{t̄}_{j̄ k}: (0,1) part of [ē_j, e_k] = -[e_k, ē_j].
        let lam_bar = |t: usize, j: usize, k: usize| -self.mixed(k, j).anti[t];
        let mut r = vec![vec![vec![C64::new(0.0, 0.0); n]; n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for l in 0..n {
                        for s in 0..n {
                            acc -= dv[i][k][l] * lam(l, s, j) * v[s];
                        }
                        acc += dvb[i][k][l] * nm[l][j].conj();
                        acc -= nm[i][l] * lam(l, k, j);
                        acc += lam(i, l, j) * nm[l][k];
                        for s in 0..n {
                            acc -= lam(i, s, l) * v[s] * lam_bar(l, j, k);
                        }
                    }
                    r[i][k][j] = acc;
                }
            }
        }
        r
    }

    /// `R(w, w̄)v = -w^k w̄^j R^i_{kj̄} e_i`.
    pub fn operator(&self, v: &[C64], w: &[C64]) -> Vec<C64> {
        let n = self.n;
        let r = self.r_block(v);
        (0..n)
            .map(|i| {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    for j in 0..n {
                        acc -= w[k] * w[j].conj() * r[i][k][j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn bisectional(&self, v: &[C64], w: &[C64]) -> f64 {
        let (g, _) = self.metric(v);
        let rv = self.operator(v, w);
        (Self::inner(&g, &rv, v) / (Self::inner(&g, v, v) * Self::inner(&g, w, w))).re
    }

    pub fn sectional(&self, v: &[C64]) -> f64 {
        let (g, _) = self.metric(v);
        let rv = self.operator(v, v);
        let f2 = self.norm.f_squared(v).unwrap();
        2.0 * Self::inner(&g, &rv, v).re / (f2 * f2)
    }

    /// Six-term Kähler expression at `(u, w)`.
    pub fn kahler_term(&self, v: &[C64], u: &[C64], w: &[C64]) -> C64 {
        let (g, ga) = self.metric(v);
        let nm = self.n_matrix(v);
        let n = self.n;
        let nv: Vec<C64> = (0..n).map(|i| (0..n).map(|k| nm[i][k] * v[k]).sum()).collect();
        let hol = |a: &[C64], b: &[C64]| self.alg.bracket_hol(a, b).0;
        let c = self.cartan(v);
        let cplus = |a: &[C64], b: &[C64], x: &[C64]| -> C64 {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..n {
                for q in 0..n {
                    for l in 0..n {
                        s += c.0[k][q][l] * a[k] * b[q].conj() * x[l];
                    }
                }
            }
            s
        };
        let cminus = |a: &[C64], b: &[C64], x: &[C64]| -> C64 {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..n {
                for q in 0..n {
                    for l in 0..n {
                        s += c.1[k][q][l] * a[k] * b[q].conj() * x[l].conj();
                    }
                }
            }
            s
        };
        Self::inner(&g, w, &self.bracket_bar(u, v).hol)
            - Self::inner(&g, &hol(v, w), u)
            - Self::inner(&g, v, &self.bracket_bar(u, w).hol)
            - Self::s_bar(&ga, u, &self.bracket_bar(v, w).hol)
            - cplus(w, u, &nv)
            + cminus(w, u, &self.bracket_bar(v, v).hol)
    }

    /// Four-term weakly Kähler expression at `w`.
    pub fn weakly_term(&self, v: &[C64], w: &[C64]) -> C64 {
        let (g, ga) = self.metric(v);
        let nm = self.n_matrix(v);
        let n = self.n;
        let nv: Vec<C64> = (0..n).map(|i| (0..n).map(|k| nm[i][k] * v[k]).sum()).collect();
        // S_v(a, b) = ∂²F²/∂v^i∂v^j a^i b^j, the conjugate of the antiholomorphic block.
        let s: C64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| ga[i][j].conj() * nv[i] * w[j])
            .sum();
        Self::inner(&g, w, &self.bracket_bar(v, v).hol)
            - Self::inner(&g, &self.alg.bracket_hol(v, w).0, v)
            - Self::inner(&g, v, &self.bracket_bar(v, w).hol)
            - s
    }

    /// Cartan tensors `C_{iq̄l}`, `C_{iq̄l̄}` by differencing the oracle metric,
    /// with one Richardson step.
    pub fn cartan(&self, v: &[C64]) -> (Vec<Mat>, Vec<Mat>) {
        let n = self.n;
        let h = 1e-3 * v.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut cp = vec![vec![vec![C64::new(0.0, 0.0); n]; n]; n];
        let mut cm = cp.clone();
        for l in 0..n {
            let d = |dir: C64| -> Mat {
                let diff = |h: f64| {
                    let at = |s: f64| {
                        let mut p = v.to_vec();
                        p[l] += dir * (s * h);
                        self.metric(&p).0
                    };
                    let (a, b) = (at(1.0), at(-1.0));
                    (0..n)
                        .map(|i| (0..n).map(|q| (a[i][q] - b[i][q]) / (2.0 * h)).collect())
                        .collect::<Mat>()
                };
                let (fine, coarse) = (diff(h / 2.0), diff(h));
                (0..n)
                    .map(|i| (0..n).map(|q| (fine[i][q] * 4.0 - coarse[i][q]) / 3.0).collect())
                    .collect()
            };
            let (dx, dy) = (d(C64::new(1.0, 0.0)), d(I));
            for i in 0..n {
                for q in 0..n {
                    cp[i][q][l] = (dx[i][q] - I * dy[i][q]) * 0.5;
                    cm[i][q][l] = (dx[i][q] + I * dy[i][q]) * 0.5;
                }
            }
        }
        (cp, cm)
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
