//! Dense two-phase primal simplex.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Entries below this magnitude never become pivots.
pub const PIVOT_TOLERANCE: f64 = 1e-9;
const FEASIBILITY_TOLERANCE: f64 = 1e-7;
const MAX_DIMENSION: usize = 20_000;
const MAX_TABLEAU_ENTRIES: usize = 250_000_000;
const PARALLEL_ROWS: usize = 256;
const ZERO_CLEAN: f64 = PIVOT_TOLERANCE;
const MAX_PIVOTS: usize = 2_000_000;
const PERTURBATION: f64 = 1e-7;
const HARRIS_TOLERANCE: f64 = 1e-9;
const RESTORE_TOLERANCE: f64 = 1e-6;
const STALL_LIMIT: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    Equal,
    GreaterEq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `optimise c·x` subject to linear rows and per-variable bounds
/// (default `[0, ∞)`; use `f64::NEG_INFINITY` for a free variable).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    /// One multiplier per constraint: `c − Aᵀy` is nonpositive (maximise) or
    /// nonnegative (minimise) on nonnegative variables, and `b·y` is the
    /// optimum.
    pub duals: Vec<f64>,
    /// Variables basic in the final tableau.
    pub basic_vars: Vec<usize>,
    /// Inequality rows whose slack is basic, that is rows not forced tight.
    pub loose_rows: Vec<usize>,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram { sense, objective, constraints: Vec::new(), bounds: vec![(0.0, f64::INFINITY); n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Adds a row given as sparse `(index, coefficient)` pairs.
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) {
        let mut coeffs = vec![0.0; self.num_vars()];
        for &(i, c) in terms {
            coeffs[i] += c;
        }
        self.add(coeffs, relation, rhs);
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.bounds[var] = (lo, hi);
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::Dimension { expected: n, found: self.bounds.len() });
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(Error::Dimension { expected: n, found: c.coeffs.len() });
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|x| !x.is_finite()) {
                return Err(Error::Lp("non-finite constraint data".into()));
            }
        }
        if self.objective.iter().any(|x| !x.is_finite()) {
            return Err(Error::Lp("non-finite objective".into()));
        }
        for &(lo, hi) in &self.bounds {
            if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(Error::Lp(format!("bad bounds [{lo}, {hi}]")));
            }
        }
        if n > MAX_DIMENSION || self.constraints.len() > MAX_DIMENSION {
            return Err(Error::Capacity {
                what: "linear program dimension",
                requested: n.max(self.constraints.len()),
                limit: MAX_DIMENSION,
            });
        }
        Ok(())
    }

    /// The program in LP text format with variables `v0, v1, ...`.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", if self.sense == Sense::Maximize { "Maximize" } else { "Minimize" });
        let _ = writeln!(out, " obj: {}", linear_text(&self.objective));
        let _ = writeln!(out, "Subject To");
        for (i, c) in self.constraints.iter().enumerate() {
            let rel = match c.relation {
                Relation::LessEq => "<=",
                Relation::Equal => "=",
                Relation::GreaterEq => ">=",
            };
            let _ = writeln!(out, " c{i}: {} {rel} {}", linear_text(&c.coeffs), c.rhs);
        }
        let _ = writeln!(out, "Bounds");
        for (i, &(lo, hi)) in self.bounds.iter().enumerate() {
            match (lo.is_finite(), hi.is_finite()) {
                (true, true) => {
                    let _ = writeln!(out, " {lo} <= v{i} <= {hi}");
                }
                (true, false) => {
                    let _ = writeln!(out, " v{i} >= {lo}");
                }
                (false, true) => {
                    let _ = writeln!(out, " -inf <= v{i} <= {hi}");
                }
                (false, false) => {
                    let _ = writeln!(out, " v{i} free");
                }
            }
        }
        let _ = writeln!(out, "End");
        out
    }
}

fn linear_text(coeffs: &[f64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, c)| format!("{c} v{i}"))
        .collect();
    if terms.is_empty() {
        "0 v0".to_string()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// How an original variable is rebuilt from nonnegative columns.
#[derive(Clone, Copy)]
enum Recover {
    Shifted { col: usize, lo: f64 },
    Mirrored { col: usize, hi: f64 },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: usize,
    width: usize,
    cells: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.cells[r * self.width + c]
    }

    /// Pivots on `(r, c)`; `obj` is reduced in place too.
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [f64]) {
        let w = self.width;
        let p = self.at(r, c);
        for x in &mut self.cells[r * w..(r + 1) * w] {
            *x /= p;
        }
        let pivot_row: Vec<f64> = self.cells[r * w..(r + 1) * w].to_vec();
        let eliminate = |i: usize, row: &mut [f64]| {
            if i == r {
                return;
            }
            let f = row[c];
            if f != 0.0 {
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * pv;
                    if x.abs() < ZERO_CLEAN {
                        *x = 0.0;
                    }
                }
                row[c] = 0.0;
                let last = row.len() - 1;
                row[last] = row[last].max(0.0);
            }
        };
        if self.rows >= PARALLEL_ROWS {
            self.cells.par_chunks_mut(w).enumerate().for_each(|(i, row)| eliminate(i, row));
        } else {
            self.cells.chunks_mut(w).enumerate().for_each(|(i, row)| eliminate(i, row));
        }
        let f = obj[c];
        if f != 0.0 {
            for (x, &pv) in obj.iter_mut().zip(&pivot_row) {
                *x -= f * pv;
            }
            obj[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Minimises with Bland's rule over columns `< allowed`. Returns false
    /// when unbounded.
    fn run(&mut self, obj: &mut [f64], allowed: usize) -> Result<bool> {
        let mut stalled = 0usize;
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Err(Error::Lp(format!("no convergence after {MAX_PIVOTS} pivots")));
            }
            // Most negative reduced cost, falling back to Bland's rule
            // during long runs of degenerate pivots.
            let entering = if stalled >= STALL_LIMIT {
                (0..allowed).find(|&j| obj[j] < -PIVOT_TOLERANCE)
            } else {
                (0..allowed)
                    .filter(|&j| obj[j] < -PIVOT_TOLERANCE)
                    .min_by(|&a, &b| obj[a].total_cmp(&obj[b]).then(a.cmp(&b)))
            };
            let Some(c) = entering else { return Ok(true) };
            let rhs = self.rhs_col();
            // Two-pass ratio test: bound the step with a small feasibility
            // allowance, then take the largest pivot within that bound.
            let mut limit = f64::INFINITY;
            for i in 0..self.rows {
                let a = self.at(i, c);
                if a > PIVOT_TOLERANCE {
                    limit = limit.min((self.at(i, rhs).max(0.0) + HARRIS_TOLERANCE) / a);
                }
            }
            let mut leave: Option<(f64, usize, usize)> = None;
            for i in 0..self.rows {
                let a = self.at(i, c);
                if a > PIVOT_TOLERANCE && self.at(i, rhs).max(0.0) / a <= limit {
                    let better = match leave {
                        None => true,
                        Some((best, _, bvar)) => a > best || (a == best && self.basis[i] < bvar),
                    };
                    if better {
                        leave = Some((a, i, self.basis[i]));
                    }
                }
            }
            let Some((a, r, _)) = leave else { return Ok(false) };
            if self.at(r, rhs).max(0.0) / a <= PIVOT_TOLERANCE {
                stalled += 1;
            } else {
                stalled = 0;
            }
            self.pivot(r, c, obj);
        }
    }

    fn drop_row(&mut self, r: usize) {
        let w = self.width;
        self.cells.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.rows -= 1;
    }
}

/// Two-phase simplex with Dantzig pricing and a Bland fallback on
/// stalling. Deterministic for a given input.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.num_vars();

    // Map variables onto nonnegative columns.
    let mut recover = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut extra_rows: Vec<(usize, f64)> = Vec::new();
    for &(lo, hi) in &lp.bounds {
        if lo.is_finite() {
            recover.push(Recover::Shifted { col: ncols, lo });
            if hi.is_finite() {
                extra_rows.push((ncols, hi - lo));
            }
            ncols += 1;
        } else if hi.is_finite() {
            recover.push(Recover::Mirrored { col: ncols, hi });
            ncols += 1;
        } else {
            recover.push(Recover::Split { pos: ncols, neg: ncols + 1 });
            ncols += 2;
        }
    }
    let structural = ncols;

    // Rows over structural columns with nonnegative right-hand sides.
    struct Row {
        coeffs: Vec<f64>,
        relation: Relation,
        rhs: f64,
        factor: f64,
    }
    let mut rows: Vec<Row> = Vec::with_capacity(lp.constraints.len() + extra_rows.len());
    for c in &lp.constraints {
        let mut coeffs = vec![0.0; structural];
        let mut rhs = c.rhs;
        for (i, &a) in c.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match recover[i] {
                Recover::Shifted { col, lo } => {
                    coeffs[col] += a;
                    rhs -= a * lo;
                }
                Recover::Mirrored { col, hi } => {
                    coeffs[col] -= a;
                    rhs -= a * hi;
                }
                Recover::Split { pos, neg } => {
                    coeffs[pos] += a;
                    coeffs[neg] -= a;
                }
            }
        }
        rows.push(Row { coeffs, relation: c.relation, rhs, factor: 1.0 });
    }
    for &(col, width) in &extra_rows {
        let mut coeffs = vec![0.0; structural];
        coeffs[col] = 1.0;
        rows.push(Row { coeffs, relation: Relation::LessEq, rhs: width, factor: 1.0 });
    }
    for row in &mut rows {
        if row.rhs < 0.0 || (row.rhs == 0.0 && row.relation == Relation::GreaterEq) {
            row.rhs = -row.rhs;
            row.coeffs.iter_mut().for_each(|x| *x = -*x);
            row.relation = match row.relation {
                Relation::LessEq => Relation::GreaterEq,
                Relation::GreaterEq => Relation::LessEq,
                Relation::Equal => Relation::Equal,
            };
            row.factor = -1.0;
        }
        let largest = row.coeffs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if largest > 0.0 {
            row.coeffs.iter_mut().for_each(|x| *x /= largest);
            row.rhs /= largest;
            row.factor /= largest;
        }
    }

    let slacks = rows.iter().filter(|r| r.relation != Relation::Equal).count();
    let artificials = rows.iter().filter(|r| r.relation != Relation::LessEq).count();
    let width = structural + slacks + artificials + 1;
    let nrows = rows.len();
    if nrows.saturating_mul(width) > MAX_TABLEAU_ENTRIES {
        return Err(Error::Capacity { what: "simplex tableau entries", requested: nrows * width, limit: MAX_TABLEAU_ENTRIES });
    }
    let art_start = structural + slacks;
    let mut t = Tableau { rows: nrows, width, cells: vec![0.0; nrows * width], basis: vec![0; nrows], pivots: 0 };
    let (mut s, mut a) = (structural, art_start);
    // Column and sign that read off each row's dual from the reduced costs.
    let mut dual_col: Vec<(usize, f64)> = Vec::with_capacity(nrows);
    // Initially basic column per row; its current column is a column of B⁻¹.
    let mut unit_col: Vec<usize> = Vec::with_capacity(nrows);
    let original_rhs: Vec<f64> = rows.iter().map(|r| r.rhs).collect();
    for (i, row) in rows.iter().enumerate() {
        let base = i * width;
        t.cells[base..base + structural].copy_from_slice(&row.coeffs);
        // Relaxing perturbation against degenerate cycling; removed at the end.
        let shift = PERTURBATION * (1.0 + ((i as f64) * 0.618_033_988_749_895).fract());
        t.cells[base + width - 1] = match row.relation {
            Relation::LessEq => row.rhs + shift,
            Relation::GreaterEq => (row.rhs - shift).max(row.rhs * 0.5),
            Relation::Equal => row.rhs,
        };
        match row.relation {
            Relation::LessEq => {
                t.cells[base + s] = 1.0;
                t.basis[i] = s;
                dual_col.push((s, 1.0));
                unit_col.push(s);
                s += 1;
            }
            Relation::GreaterEq => {
                t.cells[base + s] = -1.0;
                dual_col.push((s, -1.0));
                s += 1;
                t.cells[base + a] = 1.0;
                t.basis[i] = a;
                unit_col.push(a);
                a += 1;
            }
            Relation::Equal => {
                t.cells[base + a] = 1.0;
                t.basis[i] = a;
                dual_col.push((a, 1.0));
                unit_col.push(a);
                a += 1;
            }
        }
    }
    let factors: Vec<f64> = rows.iter().map(|r| r.factor).collect();
    drop(rows);

    // Phase one: minimise the sum of artificials.
    if artificials > 0 {
        let mut obj = vec![0.0; width];
        for j in art_start..width - 1 {
            obj[j] = 1.0;
        }
        for i in 0..t.rows {
            if t.basis[i] >= art_start {
                for j in 0..width {
                    obj[j] -= t.at(i, j);
                }
            }
        }
        t.run(&mut obj, art_start + artificials)?;
        let infeasibility = -obj[width - 1];
        let scale = 1.0 + (0..t.rows).map(|i| t.at(i, width - 1).abs()).fold(0.0, f64::max);
        if infeasibility > FEASIBILITY_TOLERANCE * scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                values: vec![0.0; n],
                objective_value: f64::NAN,
                duals: Vec::new(),
                basic_vars: Vec::new(),
                loose_rows: Vec::new(),
                pivots: t.pivots,
            });
        }
        // Drive remaining artificials out of the basis or drop their rows.
        let mut i = 0;
        while i < t.rows {
            if t.basis[i] >= art_start {
                match (0..art_start).find(|&j| t.at(i, j).abs() > PIVOT_TOLERANCE) {
                    Some(j) => {
                        t.pivot(i, j, &mut obj);
                        i += 1;
                    }
                    None => t.drop_row(i),
                }
            } else {
                i += 1;
            }
        }
    }

    // Phase two over structural and slack columns, as a minimisation.
    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let mut cost = vec![0.0; width];
    for (i, &c) in lp.objective.iter().enumerate() {
        match recover[i] {
            Recover::Shifted { col, .. } => cost[col] += sign * c,
            Recover::Mirrored { col, .. } => cost[col] -= sign * c,
            Recover::Split { pos, neg } => {
                cost[pos] += sign * c;
                cost[neg] -= sign * c;
            }
        }
    }
    let mut obj = cost.clone();
    for i in 0..t.rows {
        let cb = cost[t.basis[i]];
        if cb != 0.0 {
            for j in 0..width {
                obj[j] -= cb * t.at(i, j);
            }
        }
    }
    if !t.run(&mut obj, art_start)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: vec![0.0; n],
            objective_value: if lp.sense == Sense::Maximize { f64::INFINITY } else { f64::NEG_INFINITY },
            duals: Vec::new(),
            basic_vars: Vec::new(),
            loose_rows: Vec::new(),
            pivots: t.pivots,
        });
    }

    // Basic values for the unperturbed right-hand side.
    let mut col_value = vec![0.0; width];
    for k in 0..t.rows {
        let v: f64 = unit_col.iter().zip(&original_rhs).map(|(&c, b)| t.at(k, c) * b).sum();
        if v < -RESTORE_TOLERANCE {
            return Err(Error::Lp(format!("perturbed basis infeasible by {v:e}")));
        }
        col_value[t.basis[k]] = v.max(0.0);
    }
    let values: Vec<f64> = recover
        .iter()
        .map(|r| match *r {
            Recover::Shifted { col, lo } => lo + col_value[col],
            Recover::Mirrored { col, hi } => hi - col_value[col],
            Recover::Split { pos, neg } => col_value[pos] - col_value[neg],
        })
        .collect();
    let objective_value = lp.objective.iter().zip(&values).map(|(c, x)| c * x).sum();
    let duals = (0..lp.constraints.len())
        .map(|i| {
            let (col, colsign) = dual_col[i];
            -sign * colsign * obj[col] * factors[i]
        })
        .collect();
    let mut basic_vars: Vec<usize> = recover
        .iter()
        .enumerate()
        .filter(|(_, r)| match **r {
            Recover::Shifted { col, .. } | Recover::Mirrored { col, .. } => t.basis.contains(&col),
            Recover::Split { pos, neg } => t.basis.contains(&pos) || t.basis.contains(&neg),
        })
        .map(|(i, _)| i)
        .collect();
    basic_vars.sort_unstable();
    let loose_rows = (0..lp.constraints.len())
        .filter(|&i| lp.constraints[i].relation != Relation::Equal && t.basis.contains(&dual_col[i].0))
        .collect();
    Ok(LpSolution { status: LpStatus::Optimal, values, objective_value, duals, basic_vars, loose_rows, pivots: t.pivots })
}

/// Rechecks bounds, every row and the objective value within `tol`.
pub fn verify_solution(lp: &LinearProgram, sol: &LpSolution, tol: f64) -> bool {
    if sol.status != LpStatus::Optimal || sol.values.len() != lp.num_vars() {
        return false;
    }
    let x = &sol.values;
    if x.iter().any(|v| !v.is_finite()) {
        return false;
    }
    for (v, &(lo, hi)) in x.iter().zip(&lp.bounds) {
        if *v < lo - tol || *v > hi + tol {
            return false;
        }
    }
    for c in &lp.constraints {
        let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        let ok = match c.relation {
            Relation::LessEq => lhs <= c.rhs + tol,
            Relation::GreaterEq => lhs >= c.rhs - tol,
            Relation::Equal => (lhs - c.rhs).abs() <= tol,
        };
        if !ok {
            return false;
        }
    }
    let obj: f64 = lp.objective.iter().zip(x).map(|(a, v)| a * v).sum();
    (obj - sol.objective_value).abs() <= tol
}
