//! Lovász theta by an ADMM solver on the dense SDP
//! `max ⟨J,B⟩ : tr B = 1, B_ij = 0 (ij ∈ E), B ⪰ 0`.
//!
//! Each iterate yields two certificates. A feasible primal matrix is
//! recovered from the current `X` by zeroing edge entries, shifting by its
//! most negative eigenvalue and rescaling the trace; its objective is a
//! lower bound. For the dual, any symmetric `M` with `M_ij = 1` off the edge
//! set gives `ϑ ≤ λ_max(M)`; the edge multipliers provide such an `M`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_VERTICES: usize = 200;
const MAX_ITER: usize = 50_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThetaValue {
    /// Midpoint of `[lo, hi]`.
    pub value: f64,
    /// Half-width of `[lo, hi]`.
    pub tol: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
    /// Feasible primal matrix (row-major, trace one, zero on edges).
    pub primal: Vec<f64>,
    /// Edge multipliers `y_e` defining the dual matrix `J + Σ y_e (E_ij + E_ji)`.
    pub dual: Vec<f64>,
}

impl ThetaValue {
    /// Recomputes both certificates and checks them against `lo` and `hi`.
    pub fn verify(&self, g: &Graph, tol: f64) -> bool {
        let n = g.n();
        if self.primal.len() != n * n || self.dual.len() != g.edge_count() {
            return false;
        }
        let b = DMatrix::from_row_slice(n, n, &self.primal);
        let trace: f64 = (0..n).map(|i| b[(i, i)]).sum();
        let edges_ok = g.edges().iter().all(|&(i, j)| b[(i, j)].abs() <= tol && b[(j, i)].abs() <= tol);
        let min_eig = SymmetricEigen::new(b.clone()).eigenvalues.min();
        let obj: f64 = b.iter().sum();
        let ub = lambda_max(&dual_matrix(g, &self.dual));
        edges_ok
            && min_eig >= -tol
            && (trace - 1.0).abs() <= tol
            && obj >= self.lo - tol
            && ub <= self.hi + tol
    }
}

fn dual_matrix(g: &Graph, y: &[f64]) -> DMatrix<f64> {
    let n = g.n();
    let mut m = DMatrix::from_element(n, n, 1.0);
    for (k, (i, j)) in g.edges().into_iter().enumerate() {
        m[(i, j)] += y[k];
        m[(j, i)] += y[k];
    }
    m
}

fn lambda_max(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.max()
}

fn frob(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Rounding allowance for an eigenvalue of a matrix with Frobenius norm `f`.
fn margin(n: usize, f: f64) -> f64 {
    1e-13 * (n as f64 + 1.0) * f.max(1.0)
}

/// Feasible primal point and its objective (certified lower bound).
fn primal_certificate(g: &Graph, x: &DMatrix<f64>) -> Option<(DMatrix<f64>, f64)> {
    let n = g.n();
    let mut b = (x + x.transpose()) * 0.5;
    for (i, j) in g.edges() {
        b[(i, j)] = 0.0;
        b[(j, i)] = 0.0;
    }
    let lmin = SymmetricEigen::new(b.clone()).eigenvalues.min();
    let eps = (-lmin).max(0.0) + margin(n, frob(&b));
    for i in 0..n {
        b[(i, i)] += eps;
    }
    let tr: f64 = (0..n).map(|i| b[(i, i)]).sum();
    if tr <= 0.0 {
        return None;
    }
    b /= tr;
    let obj: f64 = b.iter().sum();
    Some((b, obj * (1.0 - 1e-14) - margin(n, 1.0)))
}

/// ϑ(g) to within `tol`, or a non-convergence error.
pub fn lovasz_theta(g: &Graph, tol: f64) -> Result<ThetaValue> {
    lovasz_theta_limited(g, tol, DEFAULT_MAX_VERTICES)
}

pub fn lovasz_theta_limited(g: &Graph, tol: f64, max_vertices: usize) -> Result<ThetaValue> {
    let n = g.n();
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidParameter(format!("theta tolerance {tol} outside (0, 1e-3]")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    if n > max_vertices {
        return Err(Error::SizeLimit {
            vertices: n as u128,
            limit: max_vertices as u128,
        });
    }
    let edges = g.edges();
    let m = edges.len();
    if m == 0 || n == 1 {
        // Edgeless: B = J/n attains n, and M = J certifies it.
        let b = vec![1.0 / n as f64; n * n];
        let v = n as f64;
        return Ok(ThetaValue {
            value: v,
            tol: 0.0,
            lo: v,
            hi: v,
            iterations: 0,
            primal: b,
            dual: vec![],
        });
    }
    let c = DMatrix::from_element(n, n, -1.0);
    let mut x = DMatrix::identity(n, n) / n as f64;
    let mut s = DMatrix::<f64>::zeros(n, n);
    let mut mu = 1.0;
    let mut y0;
    let mut ye = vec![0.0; m];
    let mut best_lo = f64::NEG_INFINITY;
    let mut best_hi = f64::INFINITY;
    let mut best_primal: Option<DMatrix<f64>> = None;
    let mut best_dual = vec![0.0; m];
    let cnorm = 1.0 + n as f64;
    for it in 1..=MAX_ITER {
        // y = -(AA*)^{-1} (μ(A(X) - b) + A(S - C))
        let sc = &s - &c;
        let tr_x: f64 = x.trace();
        y0 = -(mu * (tr_x - 1.0) + sc.trace()) / n as f64;
        for (k, &(i, j)) in edges.iter().enumerate() {
            ye[k] = -(mu * 2.0 * x[(i, j)] + 2.0 * sc[(i, j)]) / 2.0;
        }
        // V = C - A*(y) - μX
        let mut v = &c - &x * mu;
        for i in 0..n {
            v[(i, i)] -= y0;
        }
        for (k, &(i, j)) in edges.iter().enumerate() {
            v[(i, j)] -= ye[k];
            v[(j, i)] -= ye[k];
        }
        let eig = SymmetricEigen::new(v.clone());
        let mut pos = eig.eigenvalues.clone();
        pos.apply(|l| *l = l.max(0.0));
        s = &eig.eigenvectors * DMatrix::from_diagonal(&pos) * eig.eigenvectors.transpose();
        let x_new = (&s - &v) / mu;

        // Residuals for the penalty update.
        let mut pinf = (x_new.trace() - 1.0).powi(2);
        for &(i, j) in &edges {
            pinf += (2.0 * x_new[(i, j)]).powi(2);
        }
        let pinf = pinf.sqrt() / 2.0;
        let mut dres = &c - &s;
        for i in 0..n {
            dres[(i, i)] -= y0;
        }
        for (k, &(i, j)) in edges.iter().enumerate() {
            dres[(i, j)] -= ye[k];
            dres[(j, i)] -= ye[k];
        }
        let dinf = frob(&dres) / cnorm;
        x = x_new;

        if it % 10 == 0 {
            if pinf < 0.5 * dinf {
                mu = (mu * 0.7).max(1e-4);
            } else if pinf > 2.0 * dinf {
                mu = (mu * 1.4).min(1e4);
            }
        }
        if it % 5 == 0 || it < 5 {
            let dm = dual_matrix(g, &ye);
            let hi = lambda_max(&dm) + margin(n, frob(&dm));
            if hi < best_hi {
                best_hi = hi;
                best_dual.clone_from(&ye);
            }
            if let Some((b, lo)) = primal_certificate(g, &x) {
                if lo > best_lo {
                    best_lo = lo;
                    best_primal = Some(b);
                }
            }
            if best_hi - best_lo <= tol {
                let primal = best_primal.take().expect("lower bound came with a matrix");
                return Ok(ThetaValue {
                    value: 0.5 * (best_lo + best_hi),
                    tol: 0.5 * (best_hi - best_lo),
                    lo: best_lo,
                    hi: best_hi,
                    iterations: it,
                    primal: primal.transpose().as_slice().to_vec(),
                    dual: best_dual,
                });
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "theta: gap {:.3e} after {MAX_ITER} iterations",
        best_hi - best_lo
    )))
}
