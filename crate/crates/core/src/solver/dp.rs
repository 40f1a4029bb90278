use super::{Proof, SolveResult};
use crate::cost::{CostSpec, Evaluator};
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ranking::Ranking;

/// Largest strongly connected block of the majority graph the subset
/// program will handle.
pub const DP_GUARD: usize = 20;

const TIE_LIMIT: usize = 100_000;

/// `n[a][b]`: scaled weight of voters ranking `a` above `b`.
pub(crate) fn pairwise_support(eval: &Evaluator) -> Result<Vec<Vec<u128>>> {
    let w = eval
        .small_weights()
        .ok_or_else(|| Error::Precision("scaled weights exceed 64 bits".into()))?;
    let m = eval.m();
    let mut n = vec![vec![0u128; m]; m];
    for (r, &wv) in eval.rankings().iter().zip(w) {
        let order = r.order();
        for i in 0..m {
            for j in i + 1..m {
                n[order[i]][order[j]] += wv as u128;
            }
        }
    }
    Ok(n)
}

/// Strongly connected components of the weak majority graph (an edge
/// `a → b` whenever at least half the weight ranks `a` above `b`), in the
/// order every Kemeny ranking must place them.
pub fn majority_components(profile: &Profile) -> Result<Vec<Vec<usize>>> {
    let eval = Evaluator::new(profile, CostSpec::KEMENY);
    Ok(components(&pairwise_support(&eval)?))
}

fn components(n: &[Vec<u128>]) -> Vec<Vec<usize>> {
    let m = n.len();
    let edge = |a: usize, b: usize| a != b && n[a][b] >= n[b][a];
    // Tarjan's algorithm; components come out sinks first.
    struct State {
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(v: usize, m: usize, edge: &dyn Fn(usize, usize) -> bool, s: &mut State) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for w in 0..m {
            if !edge(v, w) {
                continue;
            }
            match s.index[w] {
                None => {
                    visit(w, m, edge, s);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("stack holds v");
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.out.push(comp);
        }
    }
    let mut s = State {
        index: vec![None; m],
        low: vec![0; m],
        on_stack: vec![false; m],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..m {
        if s.index[v].is_none() {
            visit(v, m, &edge, &mut s);
        }
    }
    s.out.reverse();
    s.out
}

/// Exact Kemeny via the majority-graph decomposition and a subset dynamic
/// program inside each block. Returns every optimal ranking.
pub fn solve_kemeny_dp(profile: &Profile) -> Result<SolveResult> {
    solve_limited(profile, TIE_LIMIT)
}

/// One Kemeny-optimal ranking, skipping tie enumeration.
pub(crate) fn first_kemeny_ranking(profile: &Profile) -> Result<Ranking> {
    Ok(solve_limited(profile, 1)?.optima.swap_remove(0))
}

fn solve_limited(profile: &Profile, limit: usize) -> Result<SolveResult> {
    let eval = Evaluator::new(profile, CostSpec::KEMENY);
    let n = pairwise_support(&eval)?;
    let comps = components(&n);
    let largest = comps.iter().map(Vec::len).max().unwrap_or(0);
    if largest > DP_GUARD {
        return Err(Error::Capacity { what: "Kemeny dynamic program block size", requested: largest, limit: DP_GUARD });
    }
    let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
    for comp in &comps {
        let block = block_optima(comp, &n, limit)?;
        if partial.len().saturating_mul(block.len()) > TIE_LIMIT {
            return Err(Error::Capacity { what: "Kemeny tie set", requested: partial.len() * block.len(), limit: TIE_LIMIT });
        }
        partial = partial
            .iter()
            .flat_map(|p| {
                block.iter().map(move |b| {
                    let mut v = p.clone();
                    v.extend_from_slice(b);
                    v
                })
            })
            .collect();
    }
    let mut optima = partial.into_iter().map(Ranking::new).collect::<Result<Vec<_>>>()?;
    optima.sort();
    let cost = eval.cost(&optima[0])?;
    Ok(SolveResult { optima, cost, proof: Proof::Exhaustive })
}

/// All optimal orders of one block. `best[S]` is the least disagreement
/// among pairs inside `S` when `S` is ranked first.
fn block_optima(comp: &[usize], n: &[Vec<u128>], limit: usize) -> Result<Vec<Vec<usize>>> {
    let k = comp.len();
    if k == 1 {
        return Ok(vec![comp.to_vec()]);
    }
    let full = (1usize << k) - 1;
    let mut best = vec![u128::MAX; 1 << k];
    best[0] = 0;
    for s in 0..full {
        if best[s] == u128::MAX {
            continue;
        }
        for i in 0..k {
            if s & (1 << i) != 0 {
                continue;
            }
            let c = best[s] + append_cost(i, s, comp, n);
            let t = s | (1 << i);
            if c < best[t] {
                best[t] = c;
            }
        }
    }
    let mut out = Vec::new();
    let mut suffix = Vec::new();
    collect(full, &best, comp, n, limit, &mut suffix, &mut out);
    if out.len() > TIE_LIMIT {
        return Err(Error::Capacity { what: "Kemeny tie set", requested: out.len(), limit: TIE_LIMIT });
    }
    Ok(out)
}

fn append_cost(i: usize, s: usize, comp: &[usize], n: &[Vec<u128>]) -> u128 {
    let a = comp[i];
    let mut c = 0;
    let mut rest = s;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        c += n[a][comp[j]];
    }
    c
}

fn collect(
    s: usize,
    best: &[u128],
    comp: &[usize],
    n: &[Vec<u128>],
    limit: usize,
    suffix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if out.len() >= limit.saturating_add(1) || (limit == 1 && !out.is_empty()) {
        return;
    }
    if s == 0 {
        out.push(suffix.iter().rev().copied().collect());
        return;
    }
    for i in 0..comp.len() {
        if s & (1 << i) == 0 {
            continue;
        }
        let prev = s & !(1 << i);
        if best[prev] != u128::MAX && best[prev] + append_cost(i, prev, comp, n) == best[s] {
            suffix.push(comp[i]);
            collect(prev, best, comp, n, limit, suffix, out);
            suffix.pop();
        }
    }
}
