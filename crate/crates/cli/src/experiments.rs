//! One-shot reproductions of the desk-scale experiments.
//!
//! Every experiment is a pure function of its parameters and seed; the
//! runner writes its CSV, SVG and JSON artifacts plus a `manifest.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use rankfair::axioms::is_single_crossing;
use rankfair::bounds::{self, mu_alpha, single_ranking_bound};
use rankfair::embed::{fit_point_for_ranking, map_svg, Marker};
use rankfair::fixtures;
use rankfair::sampling::{sample_points, seeded_rng, CultureKind, CultureSpec, PointConfig, PointKind};
use rankfair::solver::{solve, solve_bnb, solve_kemeny_dp, Budget, Method, SolveResult};
use rankfair::{enumerate_rankings, CostSpec, Profile, Ranking, Rational};

use crate::plot::{line_chart, scatter, Cloud, Series, Shape};
use crate::{usage, write_file, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    HotelInterpolation,
    CityRanking,
    AlphaCurve,
    GroupDistance,
    Maps,
    EuclideanEmbeddings,
}

impl ExperimentName {
    pub fn slug(self) -> &'static str {
        match self {
            ExperimentName::HotelInterpolation => "hotel-interpolation",
            ExperimentName::CityRanking => "city-ranking",
            ExperimentName::AlphaCurve => "alpha-curve",
            ExperimentName::GroupDistance => "group-distance",
            ExperimentName::Maps => "maps",
            ExperimentName::EuclideanEmbeddings => "euclidean-embeddings",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub name: ExperimentName,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// Parameter access that rejects unknown keys up front.
pub struct Params<'a> {
    map: &'a BTreeMap<String, String>,
}

impl<'a> Params<'a> {
    pub fn new(map: &'a BTreeMap<String, String>, known: &[&str]) -> CliResult<Self> {
        if let Some(k) = map.keys().find(|k| !known.contains(&k.as_str())) {
            return usage(format!("unknown parameter {k:?}; expected one of {known:?}"));
        }
        Ok(Params { map })
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> CliResult<T> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v.parse().or_else(|_| usage(format!("parameter {key}: cannot parse {v:?}"))),
        }
    }
}

/// What an experiment produced: a JSON report and named text artifacts.
pub struct Outcome {
    pub report: Value,
    pub artifacts: Vec<(String, String)>,
}

fn check(cond: bool, msg: &str) -> CliResult<()> {
    if cond {
        Ok(())
    } else {
        usage(msg)
    }
}

/// Validates parameters, runs, and writes everything under `out_dir`.
pub fn run_experiment(spec: &ExperimentSpec) -> CliResult<Value> {
    let start = Instant::now();
    let outcome = match spec.name {
        ExperimentName::HotelInterpolation => {
            Params::new(&spec.params, &[])?;
            hotel_interpolation()?.outcome()
        }
        ExperimentName::CityRanking => {
            let p = Params::new(&spec.params, &["nodes"])?;
            city_ranking(p.get("nodes", 5_000_000u64)?)?.outcome()
        }
        ExperimentName::AlphaCurve => {
            let p = Params::new(&spec.params, &["m", "steps"])?;
            let (m, steps) = (p.get("m", 4usize)?, p.get("steps", 50u32)?);
            check((2..=bounds::LP_GUARD).contains(&m), "m must lie in 2..=6")?;
            check(steps >= 1, "steps must be positive")?;
            alpha_curve_outcome(m, steps)?
        }
        ExperimentName::GroupDistance => {
            let p = Params::new(&spec.params, &["culture", "m", "n", "profiles", "lower"])?;
            let params = GroupParams {
                culture: p.get("culture", Culture::Disc)?,
                m: p.get("m", 8)?,
                n: p.get("n", 50)?,
                profiles: p.get("profiles", 100)?,
                lower: p.get("lower", false)?,
                seed: spec.seed,
            };
            params.validate()?;
            group_distance(&params)?.outcome()
        }
        ExperimentName::Maps => {
            let p = Params::new(&spec.params, &["m", "n"])?;
            let (m, n) = (p.get("m", 10usize)?, p.get("n", 200usize)?);
            check((3..=12).contains(&m) && n >= 1, "maps need 3 <= m <= 12 and n >= 1")?;
            maps(m, n, spec.seed)?
        }
        ExperimentName::EuclideanEmbeddings => {
            let p = Params::new(&spec.params, &["m", "profiles"])?;
            let (m, profiles) = (p.get("m", 10usize)?, p.get("profiles", 100usize)?);
            check((3..=12).contains(&m) && profiles >= 1, "embeddings need 3 <= m <= 12 and profiles >= 1")?;
            euclidean_embeddings(m, profiles, spec.seed)?
        }
    };
    let runtime = start.elapsed().as_secs_f64();
    let mut files = Vec::new();
    for (name, text) in &outcome.artifacts {
        write_file(&spec.out_dir.join(name), text)?;
        files.push(name.clone());
    }
    write_file(&spec.out_dir.join("report.json"), &pretty(&outcome.report))?;
    files.push("report.json".into());
    let manifest = json!({
        "experiment": spec.name.slug(),
        "version": env!("CARGO_PKG_VERSION"),
        "seed": spec.seed,
        "parameters": spec.params,
        "runtime_seconds": runtime,
        "files": files,
    });
    write_file(&spec.out_dir.join("manifest.json"), &pretty(&manifest))?;
    Ok(manifest)
}

pub(crate) fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn names(r: &Ranking, labels: &[String]) -> String {
    r.display_with(labels)
}

// Hotels.

#[derive(Clone, Debug, Serialize)]
pub struct HotelRow {
    pub price_weight: Rational,
    pub optima: Vec<Ranking>,
    pub selected: Ranking,
    pub to_price: u64,
    pub to_score: u64,
    pub matches_published: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HotelReport {
    pub labels: Vec<String>,
    pub distance: u64,
    pub rows: Vec<HotelRow>,
    pub single_crossing: bool,
    pub unit_steps: bool,
}

/// Squared Kemeny on price/score mixtures at price weights 9/10 down to 1/10.
pub fn hotel_interpolation() -> CliResult<HotelReport> {
    let h = fixtures::hotels();
    let mut solved = Vec::new();
    for k in (1..=9).rev() {
        let w = Rational::new(k, 10)?;
        let mut r = solve(&h.profile(&w)?, CostSpec::SQUARED, Method::Brute, Budget::unlimited())?;
        if let Some(p) = h.published_path.get(9 - k as usize) {
            if let Some(i) = r.optima.iter().position(|o| o == p) {
                r.optima[..=i].rotate_right(1);
            }
        }
        solved.push((w, r.optima));
    }
    let options: Vec<Vec<Ranking>> = solved.iter().map(|(_, o)| o.clone()).collect();
    let path = unit_step_path(&options).unwrap_or_else(|| options.iter().map(|o| o[0].clone()).collect());
    let mut rows = Vec::new();
    for (i, ((w, optima), selected)) in solved.into_iter().zip(path.iter()).enumerate() {
        rows.push(HotelRow {
            to_price: selected.swap_distance(&h.price)?,
            to_score: selected.swap_distance(&h.score)?,
            matches_published: h.published_path.get(i).is_some_and(|p| optima.contains(p)),
            selected: selected.clone(),
            optima,
            price_weight: w,
        });
    }
    Ok(HotelReport {
        labels: h.labels.clone(),
        distance: h.price.swap_distance(&h.score)?,
        single_crossing: is_single_crossing(&path),
        unit_steps: path.windows(2).all(|w| w[0].swap_distance(&w[1]).ok() == Some(1)),
        rows,
    })
}

/// One optimum per row, consecutive picks one swap apart, earlier options first.
fn unit_step_path(options: &[Vec<Ranking>]) -> Option<Vec<Ranking>> {
    fn extend(options: &[Vec<Ranking>], path: &mut Vec<Ranking>) -> bool {
        let Some(row) = options.get(path.len()) else {
            return is_single_crossing(path);
        };
        for r in row {
            if path.last().is_none_or(|p| p.swap_distance(r).ok() == Some(1)) {
                path.push(r.clone());
                if extend(options, path) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let mut path = Vec::new();
    extend(options, &mut path).then_some(path)
}

impl HotelReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("price_weight,ranking,ties,swap_to_price,swap_to_score,matches_published\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{}",
                r.price_weight,
                names(&r.selected, &self.labels),
                r.optima.len(),
                r.to_price,
                r.to_score,
                r.matches_published
            )
            .unwrap();
        }
        s
    }

    fn outcome(&self) -> Outcome {
        Outcome {
            report: serde_json::to_value(self).expect("report serializes"),
            artifacts: vec![("hotels.csv".into(), self.to_csv())],
        }
    }
}

// Cities.

#[derive(Clone, Debug, Serialize)]
pub struct CityReport {
    pub labels: Vec<String>,
    /// Every Kemeny optimum of the bundled weights.
    pub kemeny_optima: Vec<Ranking>,
    pub kemeny_cost: Rational,
    /// The Kemeny optimum after raising the GDP weight by 10⁻⁶.
    pub kemeny_selected: Ranking,
    pub published_kemeny: Ranking,
    pub published_sqk: Ranking,
    pub published_kemeny_kemeny_cost: Rational,
    pub published_kemeny_sqk_cost: Rational,
    pub published_sqk_cost: Rational,
    pub published_sqk_locally_optimal: bool,
    pub sqk: SolveResult,
}

/// Squared Kemeny cost does not drop under any adjacent swap.
pub fn locally_optimal(profile: &Profile, r: &Ranking, p: u32) -> CliResult<bool> {
    let c = profile.power_cost(r, p)?;
    for i in 0..r.m() - 1 {
        if profile.power_cost(&r.with_adjacent_swap(i), p)? < c {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn city_ranking(nodes: u64) -> CliResult<CityReport> {
    let c = fixtures::cities();
    let profile = c.profile();
    let kemeny = solve_kemeny_dp(&profile)?;
    let bump = Rational::new(1, 1_000_000)?;
    let nudged = c.weighted(Rational::new(2, 5)? + bump, Rational::new(3, 10)?, Rational::new(3, 10)?)?;
    let selected = solve_kemeny_dp(&nudged)?.first().clone();
    let (pk, ps) = fixtures::city_published_outputs(&c);
    let sqk = solve_bnb(&profile, CostSpec::SQUARED, Budget::nodes(nodes))?;
    Ok(CityReport {
        labels: c.labels.clone(),
        kemeny_cost: kemeny.cost.clone(),
        kemeny_optima: kemeny.optima,
        kemeny_selected: selected,
        published_kemeny_kemeny_cost: profile.power_cost(&pk, 1)?,
        published_kemeny_sqk_cost: profile.power_cost(&pk, 2)?,
        published_sqk_cost: profile.power_cost(&ps, 2)?,
        published_sqk_locally_optimal: locally_optimal(&profile, &ps, 2)?,
        published_kemeny: pk,
        published_sqk: ps,
        sqk,
    })
}

impl CityReport {
    pub fn to_csv(&self) -> String {
        let l = &self.labels;
        let cols = [&self.kemeny_selected, self.sqk.first(), &self.published_kemeny, &self.published_sqk];
        let mut s = String::from("rank,kemeny,squared_kemeny,published_kemeny,published_squared_kemeny\n");
        for i in 0..l.len() {
            let cells: Vec<&str> = cols.iter().map(|r| l[r.order()[i]].as_str()).collect();
            writeln!(s, "{},{}", i + 1, cells.join(",")).unwrap();
        }
        s
    }

    fn outcome(&self) -> Outcome {
        Outcome {
            report: serde_json::to_value(self).expect("report serializes"),
            artifacts: vec![("cities.csv".into(), self.to_csv())],
        }
    }
}

// Alpha curves.

fn alpha_curve_outcome(m: usize, steps: u32) -> CliResult<Outcome> {
    let curve = bounds::alpha_curve(m, steps)?;
    let mut csv = String::from("alpha,value,bound\n");
    let mut pts = Vec::new();
    let mut bound = Vec::new();
    for (a, v) in &curve.points {
        let b = single_ranking_bound(a, m)?;
        writeln!(csv, "{a},{v:.6},{b:.6}").unwrap();
        pts.push((a.to_f64(), *v));
        bound.push((a.to_f64(), b));
    }
    let svg = line_chart(
        &format!("Worst normalised distance to a ranking, m = {m}"),
        "alpha",
        "distance / C(m,2)",
        1.0,
        1.0,
        &[
            Series { label: "worst case", color: "#2ca02c", points: pts, steps: true },
            Series { label: "closed-form bound", color: "#7f7f7f", points: bound, steps: false },
        ],
    );
    Ok(Outcome {
        report: json!({ "m": m, "steps": steps, "non_increasing": curve.is_non_increasing(), "exact": m <= bounds::EXACT_CURVE_LIMIT }),
        artifacts: vec![(format!("alpha_curve_m{m}.csv"), csv), (format!("alpha_curve_m{m}.svg"), svg)],
    })
}

// Group distances.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Culture {
    Disc,
    Circle,
    /// Mallows mixture, 55% around the identity and 45% around its reverse,
    /// both with φ = 0.5.
    MallowsEven,
    /// As `MallowsEven` with φ = 0.7 and 0.3.
    MallowsSkewed,
    Impartial,
}

impl FromStr for Culture {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Culture as clap::ValueEnum>::from_str(s, true)
    }
}

impl Culture {
    pub fn spec(self, m: usize, n: usize, seed: u64) -> CliResult<CultureSpec> {
        Ok(match self {
            Culture::Disc => CultureSpec::disc(m, n, seed),
            Culture::Circle => CultureSpec::circle(m, n, seed),
            Culture::MallowsEven => CultureSpec::mallows_mixture(m, n, 0.55, 0.5, 0.5, seed)?,
            Culture::MallowsSkewed => CultureSpec::mallows_mixture(m, n, 0.55, 0.7, 0.3, seed)?,
            Culture::Impartial => CultureSpec::new(CultureKind::ImpartialCulture, m, n, seed),
        })
    }

    pub fn slug(self) -> &'static str {
        match self {
            Culture::Disc => "disc",
            Culture::Circle => "circle",
            Culture::MallowsEven => "mallows-even",
            Culture::MallowsSkewed => "mallows-skewed",
            Culture::Impartial => "impartial",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupParams {
    pub culture: Culture,
    pub m: usize,
    pub n: usize,
    pub profiles: usize,
    /// Also compute the best achievable value at each α by enumeration.
    pub lower: bool,
    pub seed: u64,
}

impl GroupParams {
    pub fn validate(&self) -> CliResult<()> {
        check((2..=10).contains(&self.m), "m must lie in 2..=10")?;
        check(self.n >= 1 && self.profiles >= 1, "n and profiles must be positive")?;
        check(!self.lower || self.m <= 8, "the lower curve enumerates rankings and needs m <= 8")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub m: usize,
    pub alphas: Vec<Rational>,
    pub sqk: Vec<f64>,
    pub kemeny: Vec<f64>,
    pub lower: Option<Vec<f64>>,
}

/// Independent per-profile seeds drawn from one master seed.
pub fn profile_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| rng.random()).collect()
}

/// `min` over all rankings of the worst α-group distance, for every α.
fn best_group_distances(profile: &Profile, alphas: &[f64]) -> CliResult<Vec<f64>> {
    let weights: Vec<(&Ranking, f64)> = profile.iter().map(|(r, w)| (r, w.to_f64())).collect();
    let all: Vec<Ranking> = enumerate_rankings(profile.m())?.collect();
    let per: Vec<Vec<f64>> = all
        .par_iter()
        .map(|cand| {
            let mut d: Vec<(u64, f64)> = weights.iter().map(|(r, w)| (r.swap_distance(cand).unwrap(), *w)).collect();
            d.sort_by(|a, b| b.0.cmp(&a.0));
            alphas
                .iter()
                .map(|&alpha| {
                    let (mut left, mut acc) = (alpha, 0.0);
                    for &(dist, w) in &d {
                        let take = w.min(left);
                        acc += take * dist as f64;
                        left -= take;
                        if left <= 0.0 {
                            break;
                        }
                    }
                    acc / alpha
                })
                .collect()
        })
        .collect();
    Ok((0..alphas.len()).map(|k| per.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min)).collect())
}

pub fn group_distance(p: &GroupParams) -> CliResult<GroupReport> {
    let alphas: Vec<Rational> = (1..=p.n).map(|k| Rational::new(k as i64, p.n as i64)).collect::<Result<_, _>>()?;
    let alpha_f: Vec<f64> = alphas.iter().map(|a| a.to_f64()).collect();
    let rows: Vec<(Vec<f64>, Vec<f64>, Option<Vec<f64>>)> = profile_seeds(p.seed, p.profiles)
        .into_par_iter()
        .map(|s| -> CliResult<_> {
            let profile = p.culture.spec(p.m, p.n, s)?.sample_profile()?;
            let sqk = solve(&profile, CostSpec::SQUARED, Method::Auto, Budget::unlimited())?;
            let kem = solve(&profile, CostSpec::KEMENY, Method::Auto, Budget::unlimited())?;
            let mu = |r: &Ranking| -> CliResult<Vec<f64>> {
                alphas.iter().map(|a| Ok(mu_alpha(&profile, r, a)?.to_f64())).collect()
            };
            let lower = if p.lower { Some(best_group_distances(&profile, &alpha_f)?) } else { None };
            Ok((mu(sqk.first())?, mu(kem.first())?, lower))
        })
        .collect::<CliResult<_>>()?;
    let mean = |pick: &dyn Fn(&(Vec<f64>, Vec<f64>, Option<Vec<f64>>)) -> &[f64]| -> Vec<f64> {
        (0..alphas.len()).map(|k| rows.iter().map(|r| pick(r)[k]).sum::<f64>() / rows.len() as f64).collect()
    };
    Ok(GroupReport {
        m: p.m,
        sqk: mean(&|r| &r.0),
        kemeny: mean(&|r| &r.1),
        lower: p.lower.then(|| mean(&|r| r.2.as_deref().unwrap_or(&[]))),
        alphas,
    })
}

impl GroupReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(if self.lower.is_some() { "alpha,squared_kemeny,kemeny,lower\n" } else { "alpha,squared_kemeny,kemeny\n" });
        for (k, a) in self.alphas.iter().enumerate() {
            write!(s, "{a},{:.6},{:.6}", self.sqk[k], self.kemeny[k]).unwrap();
            if let Some(l) = &self.lower {
                write!(s, ",{:.6}", l[k]).unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn to_svg(&self) -> String {
        let pts = |v: &[f64]| self.alphas.iter().zip(v).map(|(a, y)| (a.to_f64(), *y)).collect::<Vec<_>>();
        let mut series = vec![
            Series { label: "Squared Kemeny", color: "#2ca02c", points: pts(&self.sqk), steps: false },
            Series { label: "Kemeny", color: "#d62728", points: pts(&self.kemeny), steps: false },
        ];
        if let Some(l) = &self.lower {
            series.push(Series { label: "best possible", color: "#1f77b4", points: pts(l), steps: false });
        }
        let y_max = rankfair::ranking::max_distance(self.m) as f64;
        line_chart("Average distance to the worst-off group", "alpha", "distance", 1.0, y_max, &series)
    }

    fn outcome(&self) -> Outcome {
        Outcome {
            report: serde_json::to_value(self).expect("report serializes"),
            artifacts: vec![("group_distance.csv".into(), self.to_csv()), ("group_distance.svg".into(), self.to_svg())],
        }
    }
}

// Maps.

fn maps(m: usize, n: usize, seed: u64) -> CliResult<Outcome> {
    let cultures = [Culture::Disc, Culture::Circle, Culture::MallowsEven, Culture::MallowsSkewed];
    let seeds = profile_seeds(seed, cultures.len());
    let mut csv = String::from("culture,support,squared_kemeny,kemeny,distance,squared_kemeny_proof,kemeny_proof\n");
    let mut artifacts = Vec::new();
    let mut report = Vec::new();
    for (c, s) in cultures.iter().zip(seeds) {
        let profile = c.spec(m, n, s)?.sample_profile()?;
        let sqk = solve(&profile, CostSpec::SQUARED, Method::Auto, Budget::unlimited())?;
        let kem = solve(&profile, CostSpec::KEMENY, Method::Auto, Budget::unlimited())?;
        let d = sqk.first().swap_distance(kem.first())?;
        writeln!(csv, "{},{},{},{},{d},{},{}", c.slug(), profile.support_size(), sqk.first(), kem.first(), sqk.proof, kem.proof).unwrap();
        let svg = map_svg(&profile, &[(kem.first().clone(), Marker::Kemeny), (sqk.first().clone(), Marker::SquaredKemeny)])?;
        artifacts.push((format!("map_{}.svg", c.slug()), svg));
        report.push(json!({ "culture": c.slug(), "squared_kemeny": sqk, "kemeny": kem, "distance": d }));
    }
    artifacts.insert(0, ("maps.csv".into(), csv));
    Ok(Outcome { report: Value::Array(report), artifacts })
}

// Euclidean embeddings.

/// Voter layouts over the unit square: a disc, two corner clusters, four
/// corner clusters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VoterLayout {
    Disc,
    TwoEven,
    TwoSkewed,
    FourEven,
    FourSkewed,
}

pub const CORNER_SIGMA: f64 = 0.1;
const CORNERS: [[f64; 2]; 4] = [[0.2, 0.2], [0.8, 0.8], [0.8, 0.2], [0.2, 0.8]];

impl VoterLayout {
    pub const ALL: [VoterLayout; 5] =
        [VoterLayout::Disc, VoterLayout::TwoEven, VoterLayout::TwoSkewed, VoterLayout::FourEven, VoterLayout::FourSkewed];

    pub fn slug(self) -> &'static str {
        match self {
            VoterLayout::Disc => "disc",
            VoterLayout::TwoEven => "two-gaussians-20-20",
            VoterLayout::TwoSkewed => "two-gaussians-30-10",
            VoterLayout::FourEven => "four-gaussians-10-10-10-10",
            VoterLayout::FourSkewed => "four-gaussians-25-5-5-5",
        }
    }

    /// Voters per cluster, lower-left first; empty for the disc.
    pub fn counts(self) -> &'static [usize] {
        match self {
            VoterLayout::Disc => &[],
            VoterLayout::TwoEven => &[20, 20],
            VoterLayout::TwoSkewed => &[30, 10],
            VoterLayout::FourEven => &[10, 10, 10, 10],
            VoterLayout::FourSkewed => &[25, 5, 5, 5],
        }
    }

    /// Forty voters.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> CliResult<Vec<[f64; 2]>> {
        if self == VoterLayout::Disc {
            let pts = sample_points(&PointKind::Disc, 40, rng)?;
            return Ok(pts.into_iter().map(|p| [0.5 + 0.5 * p[0], 0.5 + 0.5 * p[1]]).collect());
        }
        let mut out = Vec::new();
        for (k, &count) in self.counts().iter().enumerate() {
            let kind = PointKind::Gaussians { centers: vec![CORNERS[k]], sigmas: vec![CORNER_SIGMA], shares: vec![1.0] };
            out.extend(sample_points(&kind, count, rng)?);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FitRow {
    pub profile: usize,
    pub sqk: [f64; 2],
    pub sqk_defect: u64,
    pub kemeny: [f64; 2],
    pub kemeny_defect: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LayoutRun {
    pub layout: VoterLayout,
    pub voters: Vec<[f64; 2]>,
    pub rows: Vec<FitRow>,
}

impl LayoutRun {
    pub fn mean(&self, sqk: bool) -> [f64; 2] {
        let n = self.rows.len() as f64;
        let pick = |r: &FitRow| if sqk { r.sqk } else { r.kemeny };
        [self.rows.iter().map(|r| pick(r)[0]).sum::<f64>() / n, self.rows.iter().map(|r| pick(r)[1]).sum::<f64>() / n]
    }
}

/// Places the Kemeny and Squared Kemeny outputs of Euclidean profiles back
/// in the plane.
pub fn run_layout(layout: VoterLayout, m: usize, profiles: usize, seed: u64) -> CliResult<LayoutRun> {
    let results: Vec<(Vec<[f64; 2]>, FitRow)> = profile_seeds(seed, profiles)
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| -> CliResult<_> {
            let mut rng = seeded_rng(s);
            let alts = sample_points(&PointKind::Square, m, &mut rng)?;
            let voters = layout.sample(&mut rng)?;
            let cfg = PointConfig::new(voters.clone(), alts)?.with_jitter_seed(s);
            let profile = rankfair::sampling::profile_from_points(&cfg)?;
            let sqk = solve(&profile, CostSpec::SQUARED, Method::Auto, Budget::unlimited())?;
            let kem = solve(&profile, CostSpec::KEMENY, Method::Auto, Budget::unlimited())?;
            let fs = fit_point_for_ranking(&cfg, sqk.first())?;
            let fk = fit_point_for_ranking(&cfg, kem.first())?;
            Ok((voters, FitRow { profile: i, sqk: fs.point, sqk_defect: fs.defect, kemeny: fk.point, kemeny_defect: fk.defect }))
        })
        .collect::<CliResult<_>>()?;
    let (voters, rows): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(LayoutRun { layout, voters: voters.concat(), rows })
}

fn euclidean_embeddings(m: usize, profiles: usize, seed: u64) -> CliResult<Outcome> {
    let seeds = profile_seeds(seed, VoterLayout::ALL.len());
    let mut csv = String::from("layout,profile,squared_kemeny_x,squared_kemeny_y,squared_kemeny_defect,kemeny_x,kemeny_y,kemeny_defect\n");
    let mut artifacts = Vec::new();
    let mut summary = Vec::new();
    for (layout, s) in VoterLayout::ALL.into_iter().zip(seeds) {
        let run = run_layout(layout, m, profiles, s)?;
        for r in &run.rows {
            writeln!(
                csv,
                "{},{},{:.6},{:.6},{},{:.6},{:.6},{}",
                layout.slug(),
                r.profile,
                r.sqk[0],
                r.sqk[1],
                r.sqk_defect,
                r.kemeny[0],
                r.kemeny[1],
                r.kemeny_defect
            )
            .unwrap();
        }
        let svg = scatter(
            [-0.1, -0.1],
            [1.1, 1.1],
            &[
                Cloud { points: run.voters.clone(), shape: Shape::Dot, color: "#1f77b4", size: 2.0 },
                Cloud { points: run.rows.iter().map(|r| r.kemeny).collect(), shape: Shape::Diamond, color: "#d62728", size: 6.0 },
                Cloud { points: run.rows.iter().map(|r| r.sqk).collect(), shape: Shape::Square, color: "#2ca02c", size: 4.0 },
            ],
        );
        artifacts.push((format!("embedding_{}.svg", layout.slug()), svg));
        summary.push(json!({
            "layout": layout.slug(),
            "mean_squared_kemeny": run.mean(true),
            "mean_kemeny": run.mean(false),
            "max_defect": run.rows.iter().map(|r| r.sqk_defect.max(r.kemeny_defect)).max(),
        }));
    }
    artifacts.insert(0, ("embeddings.csv".into(), csv));
    Ok(Outcome { report: Value::Array(summary), artifacts })
}

/// Writes `text` to `path`, or prints it when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
