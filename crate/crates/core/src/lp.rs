//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// `maximize c·x` subject to the rows; `free[j]` marks unrestricted columns,
/// the others are nonnegative.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<Constraint>,
    pub free: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        primal: Vec<Rational>,
        /// One multiplier per row; `≤` rows get `y ≥ 0`, `≥` rows `y ≤ 0`.
        dual: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            free: vec![false; n],
        }
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, sense: Sense, rhs: Rational) {
        assert_eq!(coeffs.len(), self.objective.len(), "row width");
        self.rows.push(Constraint { coeffs, sense, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Checks primal feasibility of `x` exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().zip(&self.free).all(|(v, &f)| f || !v.is_negative())
            && self.rows.iter().all(|r| {
                let lhs: Rational = r.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
                match r.sense {
                    Sense::Le => lhs <= r.rhs,
                    Sense::Ge => lhs >= r.rhs,
                    Sense::Eq => lhs == r.rhs,
                }
            })
    }

    /// Checks dual feasibility of `y` for the maximization form: sign
    /// conditions per row and `Aᵀy ≥ c` (equality on free columns).
    pub fn is_dual_feasible(&self, y: &[Rational]) -> bool {
        if y.len() != self.rows.len() {
            return false;
        }
        let signs = self.rows.iter().zip(y).all(|(r, v)| match r.sense {
            Sense::Le => !v.is_negative(),
            Sense::Ge => !v.is_positive(),
            Sense::Eq => true,
        });
        signs
            && (0..self.num_vars()).all(|j| {
                let s: Rational = self.rows.iter().zip(y).map(|(r, v)| &r.coeffs[j] * v).sum();
                if self.free[j] {
                    s == self.objective[j]
                } else {
                    s >= self.objective[j]
                }
            })
    }

    pub fn dual_objective(&self, y: &[Rational]) -> Rational {
        self.rows.iter().zip(y).map(|(r, v)| &r.rhs * v).sum()
    }
}

struct Tableau {
    /// `m` rows of width `cols + 1`; last entry is the right-hand side.
    a: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rational]) {
        let p = self.a[r][c].clone();
        if !p.is_one() {
            for x in self.a[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &p;
                }
            }
        }
        let prow = self.a[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for &j in &nz {
                obj[j] -= &f * &prow[j];
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes with reduced-cost row `obj` (entries `c_j - z_j`, last entry
    /// `-value`). Columns with `allowed[j] == false` never enter.
    fn run(&mut self, obj: &mut [Rational], allowed: &[bool]) -> bool {
        // Dantzig's rule, falling back to Bland's rule for good after a run
        // of degenerate pivots.
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            let candidates = (0..self.cols).filter(|&j| allowed[j] && obj[j].is_positive());
            let c = if bland {
                candidates.min()
            } else {
                candidates.max_by(|&i, &j| obj[i].cmp(&obj[j]).then(j.cmp(&i)))
            };
            let Some(c) = c else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.cols] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = best else {
                return false;
            };
            if ratio.is_zero() {
                degenerate += 1;
                if degenerate > 50 {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
            self.pivot(r, c, obj);
        }
    }
}

/// Solves the program exactly.
pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    let m = lp.rows.len();
    let nv = lp.num_vars();
    // Structural columns: x_j, plus x_j^- for free columns.
    let mut struct_cols: Vec<(usize, bool)> = Vec::new();
    for j in 0..nv {
        struct_cols.push((j, false));
        if lp.free[j] {
            struct_cols.push((j, true));
        }
    }
    let ns = struct_cols.len();
    // Each row gets one identity column (slack or artificial) and `≥` rows
    // an additional surplus column.
    let mut flipped = vec![false; m];
    let mut senses = Vec::with_capacity(m);
    for (i, r) in lp.rows.iter().enumerate() {
        let mut s = r.sense;
        if r.rhs.is_negative() {
            flipped[i] = true;
            s = match s {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        senses.push(s);
    }
    let n_surplus = senses.iter().filter(|&&s| s == Sense::Ge).count();
    let id_base = ns + n_surplus;
    let cols = id_base + m;
    let mut a = vec![vec![Rational::zero(); cols + 1]; m];
    let mut surplus_col = vec![usize::MAX; m];
    let mut next_surplus = ns;
    let mut artificial = vec![false; cols];
    for (i, r) in lp.rows.iter().enumerate() {
        let sign = if flipped[i] { -Rational::one() } else { Rational::one() };
        for (k, &(j, neg)) in struct_cols.iter().enumerate() {
            if !r.coeffs[j].is_zero() {
                let v = &r.coeffs[j] * &sign;
                a[i][k] = if neg { -v } else { v };
            }
        }
        a[i][cols] = &r.rhs * &sign;
        if senses[i] == Sense::Ge {
            a[i][next_surplus] = -Rational::one();
            surplus_col[i] = next_surplus;
            next_surplus += 1;
        }
        a[i][id_base + i] = Rational::one();
        if senses[i] != Sense::Le {
            artificial[id_base + i] = true;
        }
    }
    let mut t = Tableau {
        a,
        basis: (0..m).map(|i| id_base + i).collect(),
        cols,
    };
    let all: Vec<bool> = vec![true; cols];
    // Phase 1: maximize -Σ artificials.
    if artificial.iter().any(|&x| x) {
        let mut obj = vec![Rational::zero(); cols + 1];
        for (j, &art) in artificial.iter().enumerate() {
            if art {
                obj[j] = -Rational::one();
            }
        }
        for i in 0..m {
            if artificial[t.basis[i]] {
                for j in 0..=cols {
                    let v = t.a[i][j].clone();
                    obj[j] += v;
                }
            }
        }
        t.run(&mut obj, &all);
        if obj[cols].is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-level) artificials out of the basis.
        for i in 0..m {
            if artificial[t.basis[i]] {
                if let Some(c) = (0..cols).find(|&j| !artificial[j] && !t.a[i][j].is_zero()) {
                    t.pivot(i, c, &mut obj);
                }
            }
        }
    }
    // Phase 2.
    let mut obj = vec![Rational::zero(); cols + 1];
    for (k, &(j, neg)) in struct_cols.iter().enumerate() {
        obj[k] = if neg { -lp.objective[j].clone() } else { lp.objective[j].clone() };
    }
    for i in 0..m {
        let cb = obj[t.basis[i]].clone();
        if !cb.is_zero() {
            for j in 0..=cols {
                let v = &cb * &t.a[i][j];
                obj[j] -= v;
            }
        }
    }
    let allowed: Vec<bool> = (0..cols).map(|j| !artificial[j]).collect();
    if !t.run(&mut obj, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut xs = vec![Rational::zero(); cols];
    for i in 0..m {
        xs[t.basis[i]] = t.a[i][cols].clone();
    }
    let mut primal = vec![Rational::zero(); nv];
    for (k, &(j, neg)) in struct_cols.iter().enumerate() {
        if neg {
            primal[j] -= &xs[k];
        } else {
            primal[j] += &xs[k];
        }
    }
    let dual: Vec<Rational> = (0..m)
        .map(|i| {
            let y = -obj[id_base + i].clone();
            if flipped[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    let value = -obj[cols].clone();
    LpOutcome::Optimal { value, primal, dual }
}
