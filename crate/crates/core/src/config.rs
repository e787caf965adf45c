//! Tolerances, budgets and size limits shared by the bound engine.

use crate::error::{Error, Result};
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct Config {
    /// ϑ interval width, and the snapping tolerance for ϑ.
    pub tol: f64,
    /// Node budget for each backtracking search.
    pub budget_nodes: u64,
    /// Wall-clock allowance; optional stages are skipped once it is spent.
    pub budget_secs: Option<f64>,
    /// Largest `j` for `α(G^j)` and `γ(G^j)`.
    pub max_power: usize,
    /// Ceiling on `|V(G^j)|` for independence numbers of powers.
    pub power_vertices: usize,
    pub theta_max_vertices: usize,
    pub chi_max_vertices: usize,
    /// Ceiling on `|V(G^k)|` for code search inside bounds.
    pub code_max_vertices: usize,
    /// Ceiling on `|V|` for complement-core reduction.
    pub core_max_vertices: usize,
    /// Ceiling on `|V|` for building an operand graph at all.
    pub operand_max_vertices: usize,
    /// Extra concatenation pivots (expressions); source, channel and their
    /// cores are always tried.
    pub pivots: Vec<String>,
    /// Recursion depth for structural rules.
    pub depth: usize,
    started: Instant,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: crate::theta::DEFAULT_TOL,
            budget_nodes: crate::hom::DEFAULT_HOM_BUDGET,
            budget_secs: None,
            max_power: 2,
            power_vertices: 400,
            theta_max_vertices: crate::theta::DEFAULT_MAX_VERTICES,
            chi_max_vertices: 400,
            code_max_vertices: 64,
            core_max_vertices: 40,
            operand_max_vertices: 20_000,
            pivots: vec!["Kbar(2)".into(), "Kbar(3)".into()],
            depth: 3,
            started: Instant::now(),
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol <= 1e-3) {
            return Err(Error::InvalidParameter(format!("tolerance {} outside (0, 1e-3]", self.tol)));
        }
        if self.budget_nodes == 0 || self.budget_secs.is_some_and(|s| s <= 0.0) {
            return Err(Error::InvalidParameter("budgets must be positive".into()));
        }
        if self.max_power == 0 {
            return Err(Error::InvalidParameter("max power must be at least 1".into()));
        }
        Ok(())
    }

    /// Restarts the wall clock.
    pub fn start_clock(&mut self) {
        self.started = Instant::now();
    }

    pub fn out_of_time(&self) -> bool {
        self.budget_secs
            .is_some_and(|s| self.started.elapsed() > Duration::from_secs_f64(s))
    }
}
