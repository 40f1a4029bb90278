//! Preference cultures and PrefLib input.
//!
//! All randomness flows through [`ChaCha8Rng`] seeded from a `u64`, so a
//! seed reproduces the same samples on every platform.

use rand::seq::index::sample as sample_indices;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ranking::Ranking;

pub type Point = [f64; 2];

/// The generator used everywhere in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_phi(phi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&phi) {
        return Err(Error::OutOfRange(format!("phi must lie in [0, 1], got {phi}")));
    }
    Ok(())
}

/// One draw from the Mallows model around `center` by repeated insertion.
pub fn sample_mallows<R: Rng + ?Sized>(center: &Ranking, phi: f64, rng: &mut R) -> Result<Ranking> {
    check_phi(phi)?;
    let mut order: Vec<usize> = Vec::with_capacity(center.m());
    for (i, &a) in center.order().iter().enumerate() {
        // Moving `a` up by j places creates j inversions: weight phi^j.
        let total: f64 = (0..=i).map(|j| phi.powi(j as i32)).sum();
        let mut u = rng.random::<f64>() * total;
        let mut jump = 0;
        for j in 0..=i {
            let w = phi.powi(j as i32);
            if u < w {
                jump = j;
                break;
            }
            u -= w;
            jump = j;
        }
        if phi == 0.0 {
            jump = 0;
        }
        order.insert(i - jump, a);
    }
    Ranking::new(order)
}

/// A weighted mixture of Mallows models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MallowsComponent {
    pub center: Ranking,
    pub phi: f64,
    pub share: f64,
}

fn pick_share<R: Rng + ?Sized>(shares: &[f64], rng: &mut R) -> usize {
    let mut u = rng.random::<f64>();
    for (i, &s) in shares.iter().enumerate() {
        if u < s {
            return i;
        }
        u -= s;
    }
    shares.len() - 1
}

fn check_shares(shares: &[f64]) -> Result<()> {
    if shares.is_empty() || shares.iter().any(|s| !(0.0..=1.0).contains(s)) || (shares.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidWeight(format!("shares must be in [0, 1] and sum to 1, got {shares:?}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PointKind {
    /// Uniform on the unit disc.
    Disc,
    /// Uniform on the unit circle.
    Circle,
    /// Uniform on `[0, 1]²`.
    Square,
    /// Isotropic normals, one picked per point by share.
    Gaussians { centers: Vec<Point>, sigmas: Vec<f64>, shares: Vec<f64> },
}

impl PointKind {
    /// Two clusters in the lower-left and upper-right of the unit square.
    pub fn two_corners(lower_left_share: f64) -> Self {
        PointKind::Gaussians {
            centers: vec![[0.2, 0.2], [0.8, 0.8]],
            sigmas: vec![0.1, 0.1],
            shares: vec![lower_left_share, 1.0 - lower_left_share],
        }
    }
}

pub fn sample_points<R: Rng + ?Sized>(kind: &PointKind, n: usize, rng: &mut R) -> Result<Vec<Point>> {
    if let PointKind::Gaussians { centers, sigmas, shares } = kind {
        if centers.len() != sigmas.len() || centers.len() != shares.len() {
            return Err(Error::Dimension { expected: centers.len(), found: sigmas.len().min(shares.len()) });
        }
        check_shares(shares)?;
        if sigmas.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::OutOfRange("sigmas must be finite and nonnegative".into()));
        }
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let p = match kind {
            PointKind::Disc => loop {
                let x = rng.random_range(-1.0..=1.0);
                let y = rng.random_range(-1.0..=1.0);
                if x * x + y * y <= 1.0 {
                    break [x, y];
                }
            },
            PointKind::Circle => {
                let t = rng.random_range(0.0..std::f64::consts::TAU);
                [t.cos(), t.sin()]
            }
            PointKind::Square => [rng.random::<f64>(), rng.random::<f64>()],
            PointKind::Gaussians { centers, sigmas, shares } => {
                let k = pick_share(shares, rng);
                let normal = Normal::new(0.0, sigmas[k]).map_err(|e| Error::OutOfRange(e.to_string()))?;
                [centers[k][0] + normal.sample(rng), centers[k][1] + normal.sample(rng)]
            }
        };
        out.push(p);
    }
    Ok(out)
}

/// Voter and alternative locations for a Euclidean profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    pub voter_points: Vec<Point>,
    pub alt_points: Vec<Point>,
    /// Seeds the tiny displacement applied to voters equidistant from two
    /// alternatives.
    pub jitter_seed: u64,
}

/// Scale of the displacement that breaks exact distance ties.
pub const JITTER: f64 = 1e-9;

impl PointConfig {
    pub fn new(voter_points: Vec<Point>, alt_points: Vec<Point>) -> Result<Self> {
        if alt_points.len() < 2 {
            return Err(Error::OutOfRange("need at least two alternatives".into()));
        }
        if voter_points.is_empty() {
            return Err(Error::InvalidWeight("no voters".into()));
        }
        if voter_points.iter().chain(&alt_points).flatten().any(|c| !c.is_finite()) {
            return Err(Error::OutOfRange("coordinates must be finite".into()));
        }
        Ok(PointConfig { voter_points, alt_points, jitter_seed: 0 })
    }

    pub fn with_jitter_seed(mut self, seed: u64) -> Self {
        self.jitter_seed = seed;
        self
    }

    pub fn m(&self) -> usize {
        self.alt_points.len()
    }
}

fn squared_distance(a: &Point, b: &Point) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Alternatives sorted by increasing distance from `voter`, or `None` on
/// an exact tie.
pub fn ranking_at(voter: &Point, alts: &[Point]) -> Option<Ranking> {
    let d: Vec<f64> = alts.iter().map(|a| squared_distance(voter, a)).collect();
    let mut order: Vec<usize> = (0..alts.len()).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    if order.windows(2).any(|w| d[w[0]] == d[w[1]]) {
        return None;
    }
    Ranking::new(order).ok()
}

/// The ranking of voter `v`, nudged by at most [`JITTER`] if it is
/// equidistant from two alternatives.
pub fn voter_ranking(cfg: &PointConfig, v: usize) -> Ranking {
    let p = cfg.voter_points[v];
    if let Some(r) = ranking_at(&p, &cfg.alt_points) {
        return r;
    }
    let mut rng = seeded_rng(cfg.jitter_seed ^ (v as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    loop {
        let q = [p[0] + JITTER * rng.random_range(-1.0..1.0), p[1] + JITTER * rng.random_range(-1.0..1.0)];
        if let Some(r) = ranking_at(&q, &cfg.alt_points) {
            return r;
        }
    }
}

/// Each voter ranks alternatives by distance and contributes weight `1/n`.
pub fn profile_from_points(cfg: &PointConfig) -> Result<Profile> {
    Profile::from_counts((0..cfg.voter_points.len()).map(|v| (voter_ranking(cfg, v), 1u64)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CultureKind {
    Mallows { center: Ranking, phi: f64 },
    MallowsMixture(Vec<MallowsComponent>),
    /// Voters and alternatives both from the given point distributions.
    Euclidean { voters: PointKind, alternatives: PointKind },
    ImpartialCulture,
}

/// A sampling recipe: `n` rankings over `m` alternatives from one seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CultureSpec {
    pub kind: CultureKind,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
}

impl CultureSpec {
    pub fn new(kind: CultureKind, m: usize, n: usize, seed: u64) -> Self {
        CultureSpec { kind, m, n, seed }
    }

    pub fn disc(m: usize, n: usize, seed: u64) -> Self {
        Self::new(CultureKind::Euclidean { voters: PointKind::Disc, alternatives: PointKind::Disc }, m, n, seed)
    }

    pub fn circle(m: usize, n: usize, seed: u64) -> Self {
        Self::new(CultureKind::Euclidean { voters: PointKind::Circle, alternatives: PointKind::Circle }, m, n, seed)
    }

    /// Two-cluster voters over alternatives uniform in the unit square.
    pub fn two_gaussians(m: usize, n: usize, lower_left_share: f64, seed: u64) -> Self {
        let voters = PointKind::two_corners(lower_left_share);
        Self::new(CultureKind::Euclidean { voters, alternatives: PointKind::Square }, m, n, seed)
    }

    /// `share` of the draws around the identity with `phi1`, the rest
    /// around its reverse with `phi2`.
    pub fn mallows_mixture(m: usize, n: usize, share: f64, phi1: f64, phi2: f64, seed: u64) -> Result<Self> {
        let center = Ranking::identity(m)?;
        let parts = vec![
            MallowsComponent { center: center.clone(), phi: phi1, share },
            MallowsComponent { center: center.reversed(), phi: phi2, share: 1.0 - share },
        ];
        Ok(Self::new(CultureKind::MallowsMixture(parts), m, n, seed))
    }

    fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::OutOfRange("need at least two alternatives".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidWeight("sample size must be positive".into()));
        }
        match &self.kind {
            CultureKind::Mallows { center, phi } => {
                check_phi(*phi)?;
                if center.m() != self.m {
                    return Err(Error::Dimension { expected: self.m, found: center.m() });
                }
            }
            CultureKind::MallowsMixture(parts) => {
                check_shares(&parts.iter().map(|p| p.share).collect::<Vec<_>>())?;
                for p in parts {
                    check_phi(p.phi)?;
                    if p.center.m() != self.m {
                        return Err(Error::Dimension { expected: self.m, found: p.center.m() });
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The sampled rankings in draw order.
    pub fn sample_rankings(&self) -> Result<Vec<Ranking>> {
        self.validate()?;
        let mut rng = seeded_rng(self.seed);
        match &self.kind {
            CultureKind::Mallows { center, phi } => (0..self.n).map(|_| sample_mallows(center, *phi, &mut rng)).collect(),
            CultureKind::MallowsMixture(parts) => {
                let shares: Vec<f64> = parts.iter().map(|p| p.share).collect();
                (0..self.n)
                    .map(|_| {
                        let p = &parts[pick_share(&shares, &mut rng)];
                        sample_mallows(&p.center, p.phi, &mut rng)
                    })
                    .collect()
            }
            CultureKind::Euclidean { .. } => {
                let cfg = self.sample_points()?;
                Ok((0..self.n).map(|v| voter_ranking(&cfg, v)).collect())
            }
            CultureKind::ImpartialCulture => {
                let center = Ranking::identity(self.m)?;
                (0..self.n).map(|_| sample_mallows(&center, 1.0, &mut rng)).collect()
            }
        }
    }

    /// Voter and alternative points of a Euclidean culture.
    pub fn sample_points(&self) -> Result<PointConfig> {
        self.validate()?;
        let CultureKind::Euclidean { voters, alternatives } = &self.kind else {
            return Err(Error::Incompatible("not a Euclidean culture".into()));
        };
        let mut rng = seeded_rng(self.seed);
        let alt_points = sample_points(alternatives, self.m, &mut rng)?;
        let voter_points = sample_points(voters, self.n, &mut rng)?;
        Ok(PointConfig::new(voter_points, alt_points)?.with_jitter_seed(self.seed))
    }

    /// The sampled profile; duplicate rankings merge their weights.
    pub fn sample_profile(&self) -> Result<Profile> {
        if matches!(self.kind, CultureKind::Euclidean { .. }) {
            return profile_from_points(&self.sample_points()?);
        }
        Profile::from_counts(self.sample_rankings()?.into_iter().map(|r| (r, 1)))
    }
}

/// A uniformly random ranking.
pub fn random_ranking<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Ranking> {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    Ranking::new(order)
}

/// A maximal single-crossing sequence from `start` to its reverse, each
/// step swapping a uniformly chosen adjacent pair that has not crossed yet.
pub fn random_maximal_sequence<R: Rng + ?Sized>(start: &Ranking, rng: &mut R) -> Vec<Ranking> {
    let pos = start.positions();
    let mut current = start.clone();
    let mut seq = vec![current.clone()];
    loop {
        let open: Vec<usize> = (0..current.m().saturating_sub(1))
            .filter(|&i| pos[current.order()[i]] < pos[current.order()[i + 1]])
            .collect();
        let Some(&i) = open.choose(rng) else { break };
        current = current.with_adjacent_swap(i);
        seq.push(current.clone());
    }
    seq
}

/// Weights `1..=max_count` on two distinct random rankings.
pub fn random_two_ranking_profile<R: Rng + ?Sized>(m: usize, max_count: u64, rng: &mut R) -> Result<Profile> {
    let a = random_ranking(m, rng)?;
    let b = loop {
        let b = random_ranking(m, rng)?;
        if b != a {
            break b;
        }
    };
    Profile::from_counts([(a, rng.random_range(1..=max_count)), (b, rng.random_range(1..=max_count))])
}

/// Up to `support` rankings picked from one random maximal sequence, with
/// weights `1..=max_count`.
pub fn random_single_crossing_profile<R: Rng + ?Sized>(m: usize, support: usize, max_count: u64, rng: &mut R) -> Result<Profile> {
    let seq = random_maximal_sequence(&random_ranking(m, rng)?, rng);
    let k = support.clamp(1, seq.len());
    let picks = sample_indices(rng, seq.len(), k).into_vec();
    Profile::from_counts(picks.into_iter().map(|i| (seq[i].clone(), rng.random_range(1..=max_count))))
}

/// Parses a PrefLib strict-complete-order (SOC) document.
pub fn parse_preflib(text: &str) -> Result<Profile> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut m: Option<usize> = None;
    let mut names: Vec<(usize, String)> = Vec::new();
    let mut votes: Vec<(Ranking, u64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            let Some((key, value)) = meta.split_once(':') else { continue };
            let key = key.trim().to_ascii_uppercase();
            let value = value.trim();
            if key == "DATA TYPE" && !value.eq_ignore_ascii_case("soc") {
                return Err(err(ln, format!("only strict complete orders (soc) are supported, found {value}")));
            } else if key == "NUMBER ALTERNATIVES" {
                m = Some(value.parse().map_err(|_| err(ln, format!("bad alternative count {value:?}")))?);
            } else if let Some(idx) = key.strip_prefix("ALTERNATIVE NAME") {
                let idx: usize = idx.trim().parse().map_err(|_| err(ln, "bad alternative index".into()))?;
                names.push((idx, value.to_string()));
            }
            continue;
        }
        let m = m.ok_or_else(|| err(ln, "vote before the NUMBER ALTERNATIVES header".into()))?;
        let (count, order) = line.split_once(':').ok_or_else(|| err(ln, "expected `count: i1,i2,...`".into()))?;
        let count: u64 = count.trim().parse().map_err(|_| err(ln, format!("bad count {:?}", count.trim())))?;
        if order.contains('{') || order.contains('}') {
            return Err(err(ln, "ties are not allowed in strict orders".into()));
        }
        let items = order
            .split(',')
            .map(|t| {
                let k: usize = t.trim().parse().map_err(|_| err(ln, format!("bad alternative {:?}", t.trim())))?;
                if k == 0 || k > m {
                    return Err(err(ln, format!("alternative {k} out of range 1..={m}")));
                }
                Ok(k - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        if items.len() != m {
            return Err(err(ln, format!("incomplete order: {} of {m} alternatives", items.len())));
        }
        let ranking = Ranking::new(items).map_err(|e| err(ln, e.to_string()))?;
        if count > 0 {
            votes.push((ranking, count));
        }
    }
    let m = m.ok_or_else(|| err(text.lines().count(), "missing NUMBER ALTERNATIVES header".into()))?;
    if votes.is_empty() {
        return Err(err(text.lines().count(), "no votes".into()));
    }
    let profile = Profile::from_counts(votes)?;
    if names.len() == m {
        names.sort();
        if names.iter().enumerate().all(|(i, (k, _))| *k == i + 1) {
            return profile.with_labels(names.into_iter().map(|(_, n)| n).collect());
        }
    }
    Ok(profile)
}

/// Projects the profile onto `k` alternatives chosen uniformly at random.
pub fn restrict_random(profile: &Profile, k: usize, seed: u64) -> Result<(Profile, Vec<usize>)> {
    if k < 2 || k > profile.m() {
        return Err(Error::OutOfRange(format!("cannot keep {k} of {} alternatives", profile.m())));
    }
    let mut rng = seeded_rng(seed);
    let mut keep = sample_indices(&mut rng, profile.m(), k).into_vec();
    keep.sort_unstable();
    Ok((profile.restricted(&keep)?, keep))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_zero_returns_center() {
        let c = Ranking::from_letters("cadb").unwrap();
        let mut rng = seeded_rng(1);
        for _ in 0..50 {
            assert_eq!(sample_mallows(&c, 0.0, &mut rng).unwrap(), c);
        }
        assert!(sample_mallows(&c, 1.5, &mut rng).is_err());
    }

    #[test]
    fn circle_points_are_on_the_circle() {
        let pts = sample_points(&PointKind::Circle, 500, &mut seeded_rng(3)).unwrap();
        assert!(pts.iter().all(|p| ((p[0] * p[0] + p[1] * p[1]).sqrt() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn preflib_minimal_and_errors() {
        let p = parse_preflib("# DATA TYPE: soc\n# NUMBER ALTERNATIVES: 2\n1: 1,2\n").unwrap();
        assert_eq!(p, Profile::singleton(Ranking::from_letters("ab").unwrap()));
        assert!(parse_preflib("# DATA TYPE: soi\n# NUMBER ALTERNATIVES: 3\n1: 1,2\n").is_err());
        let e = parse_preflib("# NUMBER ALTERNATIVES: 3\n1: 1,2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_preflib("# NUMBER ALTERNATIVES: 3\n1: 1,{2,3}\n").is_err());
    }

    #[test]
    fn symmetric_voters_split_evenly() {
        let cfg = PointConfig::new(vec![[-0.5, 1.0], [0.5, 1.0]], vec![[-1.0, 0.0], [1.0, 0.0]]).unwrap();
        let p = profile_from_points(&cfg).unwrap();
        assert_eq!(p.support_size(), 2);
    }

    #[test]
    fn equidistant_voter_is_jittered_deterministically() {
        let cfg = PointConfig::new(vec![[0.0, 1.0]], vec![[-1.0, 0.0], [1.0, 0.0]]).unwrap().with_jitter_seed(9);
        assert_eq!(profile_from_points(&cfg).unwrap(), profile_from_points(&cfg).unwrap());
    }
}
