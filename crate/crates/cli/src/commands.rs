//! Argument definitions and dispatch for the `rankfair` binary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rankfair::axioms::{self, SCP_EXHAUSTIVE_LIMIT};
use rankfair::bounds::{self, group_bound, single_ranking_bound, AlphaCurve};
use rankfair::embed::{fit_point_for_ranking, map_svg, Marker};
use rankfair::sampling::{self, seeded_rng, CultureKind, CultureSpec, MallowsComponent, PointConfig, PointKind};
use rankfair::solver::{ilp, solve, solve_brute_force, Budget, Method, Proof};
use rankfair::{CostSpec, Profile, Ranking, Rational};

use crate::experiments::{emit, pretty, run_experiment, ExperimentName, ExperimentSpec};
use crate::plot::{line_chart, Series};
use crate::{read_file, usage, write_file, CliResult};

#[derive(Debug, Parser)]
#[command(name = "rankfair", version, about = "Squared Kemeny and p-Kemeny rank aggregation")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (directory for `experiment`); standard output otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Aggregate a profile.
    Aggregate(AggregateArgs),
    /// Check an axiom on a profile or on random profiles.
    Axioms(AxiomsArgs),
    /// Worst-case distance curves.
    Bounds(BoundsArgs),
    /// Draw a profile from a preference culture or read a PrefLib file.
    Sample(SampleArgs),
    /// Planar maps and point fitting.
    Embed(EmbedArgs),
    /// Run a bundled experiment.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    /// Profile in JSON form.
    #[arg(long)]
    pub profile: PathBuf,
    /// `sqk`, `kemeny` or `p=<exponent>`.
    #[arg(long, default_value = "sqk")]
    pub rule: String,
    /// auto, brute, bnb or dp.
    #[arg(long, default_value = "auto")]
    pub method: String,
    /// Rescale weights that do not sum to one.
    #[arg(long)]
    pub normalize: bool,
    /// Branch-and-bound node budget.
    #[arg(long)]
    pub max_nodes: Option<u64>,
    /// Branch-and-bound time budget in seconds.
    #[arg(long)]
    pub max_seconds: Option<f64>,
    /// Also write the Squared Kemeny integer program in LP format.
    #[arg(long)]
    pub emit_ilp: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxiomCheck {
    #[value(name = "2rp")]
    TwoRankings,
    Scp,
    Efficiency,
    Participation,
    Reinforcement,
}

#[derive(Debug, Args)]
pub struct AxiomsArgs {
    #[arg(long, value_enum)]
    pub check: AxiomCheck,
    /// Profile in JSON form.
    #[arg(long, conflicts_with = "random")]
    pub profile: Option<PathBuf>,
    /// Second profile for participation and reinforcement.
    #[arg(long, requires = "profile")]
    pub other: Option<PathBuf>,
    /// Mixing weight on the first profile, for example `1/3`.
    #[arg(long, default_value = "1/2")]
    pub lambda: String,
    /// Number of random instances.
    #[arg(long)]
    pub random: Option<usize>,
    /// Alternatives in random instances.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveChoice {
    Single,
    Group,
    Lower,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub curve: CurveChoice,
    #[arg(long)]
    pub m: usize,
    /// α takes the values k/grid.
    #[arg(long, default_value_t = 50)]
    pub grid: u32,
    /// Number of steps in the q sweep of the group programs.
    #[arg(long, default_value_t = 40)]
    pub q_steps: u32,
    /// Also write a plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CultureChoice {
    Mallows,
    Mixture,
    Disc,
    Circle,
    Gaussians,
    Impartial,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, required_unless_present = "preflib")]
    pub culture: Option<CultureChoice>,
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Dispersion of the (first) Mallows component.
    #[arg(long, default_value_t = 0.5)]
    pub phi: f64,
    /// Dispersion of the reversed Mallows component.
    #[arg(long, default_value_t = 0.5)]
    pub phi2: f64,
    /// Share of the first mixture component or of the lower-left cluster.
    #[arg(long, default_value_t = 0.55)]
    pub share: f64,
    /// Also write voter and alternative locations of Euclidean cultures.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Read a PrefLib SOC file instead of sampling.
    #[arg(long, conflicts_with = "culture")]
    pub preflib: Option<PathBuf>,
    /// Keep this many randomly chosen alternatives.
    #[arg(long)]
    pub restrict: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Draw the profile in this JSON file.
    #[arg(long, conflicts_with = "fit", required_unless_present = "fit")]
    pub map: Option<PathBuf>,
    /// Comma-separated rules to mark on the map: sqk, kemeny.
    #[arg(long, default_value = "sqk,kemeny")]
    pub with_rules: String,
    /// Voter and alternative locations in JSON form.
    #[arg(long, requires = "target")]
    pub fit: Option<PathBuf>,
    /// Ranking to place: letters (`cadb`), indices (`2,0,3,1`) or labels
    /// joined by `>`.
    #[arg(long)]
    pub target: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: ExperimentName,
    /// Experiment parameter as `key=value`; repeatable.
    #[arg(long = "param", value_parser = parse_key_value)]
    pub params: Vec<(String, String)>,
}

fn parse_key_value(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

pub fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return usage("--threads must be positive");
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Aggregate(a) => aggregate(a, out),
        Command::Axioms(a) => axioms_command(a, cli.seed, out),
        Command::Bounds(a) => bounds_command(a, out),
        Command::Sample(a) => sample(a, cli.seed, out),
        Command::Embed(a) => embed(a, out),
        Command::Experiment(a) => {
            let spec = ExperimentSpec {
                name: a.name,
                params: a.params.iter().cloned().collect::<BTreeMap<_, _>>(),
                seed: cli.seed,
                out_dir: out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("out").join(a.name.slug())),
            };
            let manifest = run_experiment(&spec)?;
            print!("{}", pretty(&manifest));
            Ok(())
        }
    }
}

pub fn load_profile(path: &Path, normalize: bool) -> CliResult<Profile> {
    Ok(Profile::from_json(&read_file(path)?, normalize)?)
}

pub fn parse_rule(rule: &str) -> CliResult<CostSpec> {
    match rule {
        "sqk" | "squared-kemeny" => Ok(CostSpec::SQUARED),
        "kemeny" => Ok(CostSpec::KEMENY),
        other => match other.strip_prefix("p=").map(str::parse::<u32>) {
            Some(Ok(p)) => Ok(CostSpec::new(p)?),
            _ => usage(format!("unknown rule {other:?}; use sqk, kemeny or p=<exponent>")),
        },
    }
}

/// Reads a ranking written as letters, comma-separated indices, or labels
/// joined by `>`.
pub fn parse_ranking(s: &str, m: usize, labels: &[String]) -> CliResult<Ranking> {
    let s = s.trim();
    let r = if s.contains('>') {
        let order = s
            .split('>')
            .map(|name| {
                let name = name.trim();
                labels.iter().position(|l| l == name).ok_or_else(|| rankfair::Error::InvalidRanking(format!("unknown label {name:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ranking::new(order)?
    } else if s.contains(',') || s.chars().all(|c| c.is_ascii_digit()) {
        let order = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| rankfair::Error::InvalidRanking(format!("bad index {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ranking::new(order)?
    } else {
        Ranking::from_letters(s)?
    };
    if r.m() != m {
        return Err(rankfair::Error::Dimension { expected: m, found: r.m() }.into());
    }
    Ok(r)
}

fn labelled(r: &Ranking, labels: &[String]) -> Value {
    json!({ "order": r.order(), "text": r.display_with(labels) })
}

fn aggregate(a: &AggregateArgs, out: Option<&Path>) -> CliResult<()> {
    let profile = load_profile(&a.profile, a.normalize)?;
    let spec = parse_rule(&a.rule)?;
    let method: Method = a.method.parse()?;
    let budget = Budget {
        max_nodes: a.max_nodes,
        max_time: a.max_seconds.map(Duration::from_secs_f64),
    };
    if let Some(path) = &a.emit_ilp {
        let text = ilp::emit_ilp(&profile);
        ilp::lint_lp(&text)?;
        write_file(path, &text)?;
    }
    let result = solve(&profile, spec, method, budget)?;
    let labels = profile.label_names();
    let distances: Vec<Value> = profile
        .iter()
        .map(|(r, w)| {
            let d: Vec<u64> = result.optima.iter().map(|o| r.swap_distance(o).unwrap()).collect();
            json!({ "ranking": labelled(r, &labels), "weight": w, "distances": d })
        })
        .collect();
    let gap = match &result.proof {
        Proof::Heuristic { lower_bound } => Some(json!({
            "lower_bound": lower_bound,
            "upper_bound": result.cost,
            "gap": result.cost.clone() - lower_bound.clone(),
        })),
        _ => None,
    };
    let report = json!({
        "m": profile.m(),
        "rule": spec.to_string(),
        "optima": result.optima.iter().map(|r| labelled(r, &labels)).collect::<Vec<_>>(),
        "cost": result.cost,
        "cost_decimal": result.cost.to_f64(),
        "proof": result.proof,
        "exact": result.proof.is_exact(),
        "gap": gap,
        "inputs": distances,
    });
    emit(out, &pretty(&report))?;
    if out.is_some() {
        for r in &result.optima {
            println!("{}", r.display_with(&labels));
        }
        println!("cost {} ({})", result.cost, result.proof);
    }
    Ok(())
}

fn random_profile(m: usize, rng: &mut impl rand::Rng) -> CliResult<Profile> {
    let k = rng.random_range(1..=6);
    let entries = (0..k)
        .map(|_| Ok((sampling::random_ranking(m, rng)?, rng.random_range(1..=9u64))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Profile::from_counts(entries)?)
}

/// One axiom verdict: `None` when the instance is out of the axiom's scope.
fn check_instance(check: AxiomCheck, p: &Profile, other: Option<&Profile>, lambda: &Rational) -> CliResult<Option<bool>> {
    Ok(match check {
        AxiomCheck::TwoRankings => {
            if p.support_size() != 2 {
                return Ok(None);
            }
            Some(axioms::sqk_satisfies_2rp(p)?)
        }
        AxiomCheck::Scp => {
            let Some(seq) = axioms::find_single_crossing_order(p)? else { return Ok(None) };
            let optima: std::collections::BTreeSet<Ranking> = solve(p, CostSpec::SQUARED, Method::Auto, Budget::unlimited())?.optima.into_iter().collect();
            if p.m() <= SCP_EXHAUSTIVE_LIMIT {
                Some(axioms::sc_proportional_expected_exhaustive(p)? == optima)
            } else {
                let expected = axioms::sc_proportional_expected(p, &seq)?;
                Some(!expected.is_empty() && expected.is_subset(&optima))
            }
        }
        AxiomCheck::Efficiency => {
            let r = solve(p, CostSpec::SQUARED, Method::Auto, Budget::unlimited())?;
            let mut ok = true;
            for o in &r.optima {
                ok &= axioms::is_undominated(o, p)?;
            }
            Some(ok)
        }
        AxiomCheck::Participation => {
            let Some(q) = other else { return usage("participation needs --other") };
            Some(axioms::check_participation_instance(p, q, lambda)?)
        }
        AxiomCheck::Reinforcement => {
            let Some(q) = other else { return usage("reinforcement needs --other") };
            axioms::check_reinforcement_instance(p, q, lambda, CostSpec::SQUARED)?
        }
    })
}

fn axioms_command(a: &AxiomsArgs, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let lambda: Rational = a.lambda.parse()?;
    if !(lambda.is_positive() && lambda < Rational::one()) {
        return usage("--lambda must lie strictly between 0 and 1");
    }
    let mut instances: Vec<(Profile, Option<Profile>)> = Vec::new();
    match (&a.profile, a.random) {
        (Some(path), _) => {
            let other = a.other.as_deref().map(|o| load_profile(o, false)).transpose()?;
            instances.push((load_profile(path, false)?, other));
        }
        (None, Some(n)) => {
            if a.m < 2 {
                return usage("--m must be at least 2");
            }
            let mut rng = seeded_rng(seed);
            for _ in 0..n {
                let p = match a.check {
                    AxiomCheck::TwoRankings => sampling::random_two_ranking_profile(a.m, 9, &mut rng)?,
                    AxiomCheck::Scp => sampling::random_single_crossing_profile(a.m, 5, 9, &mut rng)?,
                    _ => random_profile(a.m, &mut rng)?,
                };
                let other = match a.check {
                    AxiomCheck::Participation | AxiomCheck::Reinforcement => Some(random_profile(a.m, &mut rng)?),
                    _ => None,
                };
                instances.push((p, other));
            }
        }
        (None, None) => return usage("give --profile or --random"),
    }
    let (mut checked, mut passed, mut skipped) = (0, 0, 0);
    let mut counterexamples = Vec::new();
    for (p, other) in &instances {
        match check_instance(a.check, p, other.as_ref(), &lambda)? {
            None => skipped += 1,
            Some(ok) => {
                checked += 1;
                if ok {
                    passed += 1;
                } else {
                    counterexamples.push(json!({
                        "profile": serde_json::from_str::<Value>(&p.to_json()).expect("profile json parses"),
                        "other": other.as_ref().map(|o| serde_json::from_str::<Value>(&o.to_json()).expect("profile json parses")),
                    }));
                }
            }
        }
    }
    let mode = match a.check {
        AxiomCheck::Scp if a.m <= SCP_EXHAUSTIVE_LIMIT => "exhaustive",
        AxiomCheck::Scp => "single-sequence",
        _ => "exact",
    };
    let report = json!({
        "check": format!("{:?}", a.check).to_lowercase(),
        "mode": mode,
        "checked": checked,
        "passed": passed,
        "out_of_scope": skipped,
        "counterexamples": counterexamples,
    });
    emit(out, &pretty(&report))
}

fn curve_csv(curve: &AlphaCurve, bound: impl Fn(&Rational) -> CliResult<f64>) -> CliResult<String> {
    let mut s = String::from("alpha,value,bound\n");
    for (a, v) in &curve.points {
        s.push_str(&format!("{a},{v:.6},{:.6}\n", bound(a)?));
    }
    Ok(s)
}

fn bounds_command(a: &BoundsArgs, out: Option<&Path>) -> CliResult<()> {
    if a.grid == 0 {
        return usage("--grid must be positive");
    }
    let m = a.m;
    let (curve, bound): (AlphaCurve, Box<dyn Fn(&Rational) -> CliResult<f64>>) = match a.curve {
        CurveChoice::Single => (bounds::alpha_curve(m, a.grid)?, Box::new(move |x| Ok(single_ranking_bound(x, m)?))),
        CurveChoice::Group => {
            let qs = bounds::q_grid(a.q_steps);
            (bounds::worst_group_curve(m, &qs, a.grid)?.0, Box::new(move |x| Ok(group_bound(x, m)?.min(1.0))))
        }
        CurveChoice::Lower => {
            let qs = bounds::q_grid(a.q_steps);
            (bounds::lower_bound_curve(m, &qs, a.grid)?.0, Box::new(move |x| Ok(group_bound(x, m)?.min(1.0))))
        }
    };
    let csv = curve_csv(&curve, &bound)?;
    if let Some(svg) = &a.svg {
        let pts: Vec<(f64, f64)> = curve.points.iter().map(|(x, y)| (x.to_f64(), *y)).collect();
        let bpts = curve.points.iter().map(|(x, _)| Ok((x.to_f64(), bound(x)?))).collect::<CliResult<Vec<_>>>()?;
        let chart = line_chart(
            &format!("{:?} curve, m = {m}", a.curve),
            "alpha",
            "distance / C(m,2)",
            1.0,
            1.0,
            &[
                Series { label: "computed", color: "#2ca02c", points: pts, steps: a.curve == CurveChoice::Single },
                Series { label: "closed-form bound", color: "#7f7f7f", points: bpts, steps: false },
            ],
        );
        write_file(svg, &chart)?;
    }
    emit(out, &csv)
}

fn sample(a: &SampleArgs, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let (profile, points) = if let Some(path) = &a.preflib {
        (sampling::parse_preflib(&read_file(path)?)?, None)
    } else {
        let (m, n) = (a.m, a.n);
        let identity = Ranking::identity(m)?;
        let kind = match a.culture.expect("clap requires a culture") {
            CultureChoice::Mallows => CultureKind::Mallows { center: identity, phi: a.phi },
            CultureChoice::Mixture => CultureKind::MallowsMixture(vec![
                MallowsComponent { center: identity.clone(), phi: a.phi, share: a.share },
                MallowsComponent { center: identity.reversed(), phi: a.phi2, share: 1.0 - a.share },
            ]),
            CultureChoice::Disc => CultureKind::Euclidean { voters: PointKind::Disc, alternatives: PointKind::Disc },
            CultureChoice::Circle => CultureKind::Euclidean { voters: PointKind::Circle, alternatives: PointKind::Circle },
            CultureChoice::Gaussians => CultureKind::Euclidean { voters: PointKind::two_corners(a.share), alternatives: PointKind::Square },
            CultureChoice::Impartial => CultureKind::ImpartialCulture,
        };
        let spec = CultureSpec::new(kind, m, n, seed);
        let points = match spec.kind {
            CultureKind::Euclidean { .. } => Some(spec.sample_points()?),
            _ => None,
        };
        (spec.sample_profile()?, points)
    };
    let profile = match a.restrict {
        Some(k) => sampling::restrict_random(&profile, k, seed)?.0,
        None => profile,
    };
    if let Some(path) = &a.points {
        let Some(cfg) = points else { return usage("--points needs a Euclidean culture") };
        if a.restrict.is_some() {
            return usage("--points cannot be combined with --restrict");
        }
        write_file(path, &pretty(&serde_json::to_value(&cfg).expect("points serialize")))?;
    }
    emit(out, &(profile.to_json() + "\n"))
}

fn embed(a: &EmbedArgs, out: Option<&Path>) -> CliResult<()> {
    if let Some(path) = &a.map {
        let profile = load_profile(path, false)?;
        let mut marks = Vec::new();
        for rule in a.with_rules.split(',').map(str::trim).filter(|r| !r.is_empty()) {
            let (spec, marker) = match rule {
                "sqk" => (CostSpec::SQUARED, Marker::SquaredKemeny),
                "kemeny" => (CostSpec::KEMENY, Marker::Kemeny),
                other => return usage(format!("unknown rule {other:?} in --with-rules")),
            };
            let r = if profile.m() <= 7 { solve_brute_force(&profile, spec)? } else { solve(&profile, spec, Method::Auto, Budget::unlimited())? };
            marks.push((r.first().clone(), marker));
        }
        return emit(out, &map_svg(&profile, &marks)?);
    }
    let path = a.fit.as_ref().expect("clap requires --map or --fit");
    let cfg: PointConfig = serde_json::from_str(&read_file(path)?).map_err(rankfair::Error::from)?;
    let cfg = PointConfig::new(cfg.voter_points, cfg.alt_points)?.with_jitter_seed(cfg.jitter_seed);
    let labels: Vec<String> = (0..cfg.m()).map(|a| ((b'a' + a as u8) as char).to_string()).collect();
    let target = parse_ranking(a.target.as_deref().expect("clap requires --target"), cfg.m(), &labels)?;
    let fit = fit_point_for_ranking(&cfg, &target)?;
    let report = json!({
        "target": target.order(),
        "point": fit.point,
        "achieved": fit.achieved.order(),
        "defect": fit.defect,
    });
    emit(out, &pretty(&report))
}
