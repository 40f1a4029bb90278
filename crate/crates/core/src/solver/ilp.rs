//! Integer program for Squared Kemeny in CPLEX LP text format.
//!
//! Variables: `x_a_b` is 1 when `a` is ranked above `b`; `dist_k` and
//! `sqdist_k` are the distance and squared distance to the `k`-th support
//! ranking in canonical order. Squared distance is bounded below by the
//! tangent cuts `sqdist ≥ k² + (2k+1)(dist − k)` for `k = 0..C(m,2)−1`.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ranking::max_distance;
use crate::rational::common_denominator;

pub fn emit_ilp(profile: &Profile) -> String {
    let m = profile.m();
    let dmax = max_distance(m);
    let denom = common_denominator(profile.iter().map(|(_, w)| w));
    let coeffs: Vec<BigInt> = profile.iter().map(|(_, w)| w.numer() * (&denom / w.denom())).collect();

    let mut out = String::new();
    let _ = writeln!(out, "\\ Squared Kemeny aggregation over {m} alternatives");
    let _ = writeln!(out, "\\ objective coefficients are weights times {denom}");
    let _ = writeln!(out, "Minimize");
    let terms: Vec<String> = coeffs.iter().enumerate().map(|(k, c)| format!("{c} sqdist_{k}")).collect();
    let _ = writeln!(out, " obj: {}", terms.join(" + "));
    let _ = writeln!(out, "Subject To");
    for a in 0..m {
        for b in a + 1..m {
            let _ = writeln!(out, " complete_{a}_{b}: x_{a}_{b} + x_{b}_{a} = 1");
        }
    }
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if a != b && b != c && a != c {
                    let _ = writeln!(out, " trans_{a}_{b}_{c}: x_{a}_{b} + x_{b}_{c} + x_{c}_{a} <= 2");
                }
            }
        }
    }
    for (k, (r, _)) in profile.iter().enumerate() {
        let order = r.order();
        let mut line = format!(" dist_def_{k}: dist_{k}");
        for i in 0..m {
            for j in i + 1..m {
                let _ = write!(line, " - x_{}_{}", order[j], order[i]);
            }
        }
        let _ = writeln!(out, "{line} = 0");
    }
    for k in 0..profile.support_size() {
        for t in 0..dmax {
            let slope = 2 * t + 1;
            let rhs = -((t * (t + 1)) as i64);
            let _ = writeln!(out, " cut_{k}_{t}: sqdist_{k} - {slope} dist_{k} >= {rhs}");
        }
    }
    let _ = writeln!(out, "Bounds");
    for k in 0..profile.support_size() {
        let _ = writeln!(out, " 0 <= dist_{k} <= {dmax}");
        let _ = writeln!(out, " sqdist_{k} >= 0");
    }
    let _ = writeln!(out, "Binaries");
    for a in 0..m {
        for b in 0..m {
            if a != b {
                let _ = writeln!(out, " x_{a}_{b}");
            }
        }
    }
    let _ = writeln!(out, "End");
    out
}

/// Counts recovered by [`lint_lp`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LpSummary {
    pub objective_terms: usize,
    pub equalities: usize,
    pub inequalities: usize,
    pub bounds: usize,
    pub binaries: usize,
    pub variables: usize,
}

/// Parses LP text back into section counts, checking that every
/// constraint has a name, a relation and a numeric right-hand side, and
/// that every variable is a known identifier.
pub fn lint_lp(text: &str) -> Result<LpSummary> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Objective,
        Constraints,
        Bounds,
        Binaries,
        Done,
    }
    let mut section = Section::None;
    let mut summary = LpSummary::default();
    let mut vars = std::collections::BTreeSet::new();
    let err = |line: usize, message: &str| Error::Parse { line, message: message.to_string() };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        match line {
            "Minimize" | "Maximize" => {
                section = Section::Objective;
                continue;
            }
            "Subject To" => {
                section = Section::Constraints;
                continue;
            }
            "Bounds" => {
                section = Section::Bounds;
                continue;
            }
            "Binaries" => {
                section = Section::Binaries;
                continue;
            }
            "End" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::None | Section::Done => return Err(err(ln, "content outside any section")),
            Section::Objective => {
                let (_, expr) = line.split_once(':').ok_or_else(|| err(ln, "objective needs a name"))?;
                summary.objective_terms += parse_expr(expr, &mut vars).map_err(|m| err(ln, &m))?;
            }
            Section::Constraints => {
                let (_, body) = line.split_once(':').ok_or_else(|| err(ln, "constraint needs a name"))?;
                let (lhs, rel, rhs) = split_relation(body).ok_or_else(|| err(ln, "missing relation"))?;
                rhs.trim().parse::<f64>().map_err(|_| err(ln, "right-hand side is not a number"))?;
                parse_expr(lhs, &mut vars).map_err(|m| err(ln, &m))?;
                if rel == "=" {
                    summary.equalities += 1;
                } else {
                    summary.inequalities += 1;
                }
            }
            Section::Bounds => {
                if !line.split_whitespace().any(|t| is_identifier(t)) {
                    return Err(err(ln, "bound without a variable"));
                }
                summary.bounds += 1;
            }
            Section::Binaries => {
                for t in line.split_whitespace() {
                    if !is_identifier(t) {
                        return Err(err(ln, "bad binary name"));
                    }
                    vars.insert(t.to_string());
                    summary.binaries += 1;
                }
            }
        }
    }
    if section != Section::Done {
        return Err(err(text.lines().count(), "missing End"));
    }
    summary.variables = vars.len();
    Ok(summary)
}

fn split_relation(body: &str) -> Option<(&str, &str, &str)> {
    for rel in ["<=", ">=", "="] {
        if let Some((l, r)) = body.split_once(rel) {
            return Some((l, rel, r));
        }
    }
    None
}

fn is_identifier(t: &str) -> bool {
    t.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `c1 v1 + c2 v2 - v3 ...`, returning the term count.
fn parse_expr(expr: &str, vars: &mut std::collections::BTreeSet<String>) -> std::result::Result<usize, String> {
    let mut terms = 0;
    let mut expect_term = true;
    for tok in expr.split_whitespace() {
        if tok == "+" || tok == "-" {
            expect_term = true;
            continue;
        }
        if tok.parse::<f64>().is_ok() {
            continue;
        }
        if !is_identifier(tok) {
            return Err(format!("unexpected token {tok:?}"));
        }
        if !expect_term {
            return Err(format!("missing operator before {tok:?}"));
        }
        vars.insert(tok.to_string());
        terms += 1;
        expect_term = false;
    }
    Ok(terms)
}
