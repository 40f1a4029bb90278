//! Bundled reference data: the hotel rankings, the city table, and a few
//! profiles with known Squared Kemeny behaviour.

use serde::Deserialize;

use crate::axioms::build_swap_path;
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ranking::Ranking;
use crate::rational::Rational;

const EXTREMAL_M4: &str = include_str!("../data/extremal_m4.json");
const EXTREMAL_M5: &str = include_str!("../data/extremal_m5.json");
const MANIPULATION_BEFORE: &str = include_str!("../data/manipulation_before.json");
const MANIPULATION_AFTER: &str = include_str!("../data/manipulation_after.json");
const HOTELS: &str = include_str!("../data/hotels.json");
const CITIES: &str = include_str!("../data/cities.csv");
const CITY_OUTPUTS: &str = include_str!("../data/city_outputs.csv");

/// Seven rankings over four alternatives on which Squared Kemeny picks the
/// reverse of `abcd`, which carries weight 7/40.
pub fn extremal_m4() -> Profile {
    Profile::from_json(EXTREMAL_M4, false).expect("bundled profile is valid")
}

/// Twelve rankings over five alternatives on which Squared Kemeny picks
/// the reverse of `abcde`, which carries weight 231/1318.
pub fn extremal_m5() -> Profile {
    Profile::from_json(EXTREMAL_M5, false).expect("bundled profile is valid")
}

/// `{abc: 1/3, bac: 5/9, cab: 1/9}`; Squared Kemeny picks `abc`.
pub fn manipulation_before() -> Profile {
    Profile::from_json(MANIPULATION_BEFORE, false).expect("bundled profile is valid")
}

/// The same voters after 1/9 of the weight moves from `bac` to `cba`;
/// Squared Kemeny now picks `bac`.
pub fn manipulation_after() -> Profile {
    Profile::from_json(MANIPULATION_AFTER, false).expect("bundled profile is valid")
}

/// Six hotels ranked by price and by user score.
#[derive(Clone, Debug)]
pub struct Hotels {
    pub labels: Vec<String>,
    pub price: Ranking,
    pub score: Ranking,
    /// The published outputs for price weights 90%, 80%, ..., 10%.
    pub published_path: Vec<Ranking>,
}

impl Hotels {
    /// The two-ranking profile with the given weight on price.
    pub fn profile(&self, price_weight: &Rational) -> Result<Profile> {
        let rest = Rational::one() - price_weight.clone();
        Profile::new([(self.price.clone(), price_weight.clone()), (self.score.clone(), rest)])?
            .with_labels(self.labels.clone())
    }
}

#[derive(Deserialize)]
struct HotelsDoc {
    labels: Vec<String>,
    price: Ranking,
    score: Ranking,
    published_path: Vec<Ranking>,
}

pub fn hotels() -> Hotels {
    let doc: HotelsDoc = serde_json::from_str(HOTELS).expect("bundled hotels parse");
    Hotels { labels: doc.labels, price: doc.price, score: doc.score, published_path: doc.published_path }
}

/// Twenty-five cities ranked by GDP per capita (descending), PM2.5
/// concentration (ascending) and yearly sunshine hours (descending).
#[derive(Clone, Debug)]
pub struct Cities {
    pub labels: Vec<String>,
    pub gdp: Ranking,
    pub air: Ranking,
    pub sun: Ranking,
}

impl Cities {
    /// Weights 2/5 on GDP and 3/10 on each of the others.
    pub fn profile(&self) -> Profile {
        self.weighted(Rational::new(2, 5).unwrap(), Rational::new(3, 10).unwrap(), Rational::new(3, 10).unwrap())
            .expect("weights sum to one")
    }

    pub fn weighted(&self, gdp: Rational, air: Rational, sun: Rational) -> Result<Profile> {
        Profile::normalized([(self.gdp.clone(), gdp), (self.air.clone(), air), (self.sun.clone(), sun)])?
            .with_labels(self.labels.clone())
    }

    /// Index of a city by name.
    pub fn index(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::Incompatible(format!("unknown city {name:?}")))
    }

    pub fn ranking_from_names<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<Ranking> {
        Ranking::new(names.into_iter().map(|n| self.index(n)).collect::<Result<Vec<_>>>()?)
    }
}

pub fn cities() -> Cities {
    let mut labels = Vec::new();
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    for line in CITIES.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        labels.push(f[0].to_string());
        let num = |s: &str| s.parse::<f64>().expect("bundled numbers parse");
        rows.push((num(f[1]), num(f[2]), num(f[3])));
    }
    let sorted = |key: &dyn Fn(&(f64, f64, f64)) -> f64| {
        let mut idx: Vec<usize> = (0..rows.len()).collect();
        idx.sort_by(|&a, &b| key(&rows[a]).total_cmp(&key(&rows[b])));
        Ranking::new(idx).expect("permutation")
    };
    let gdp = sorted(&|r| -r.0);
    let air = sorted(&|r| r.1);
    let sun = sorted(&|r| -r.2);
    Cities { labels, gdp, air, sun }
}

/// The published Kemeny and Squared Kemeny city rankings, in that order.
pub fn city_published_outputs(cities: &Cities) -> (Ranking, Ranking) {
    let mut kemeny = Vec::new();
    let mut sqk = Vec::new();
    for line in CITY_OUTPUTS.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        kemeny.push(f[1]);
        sqk.push(f[2]);
    }
    (
        cities.ranking_from_names(kemeny).expect("bundled names are known"),
        cities.ranking_from_names(sqk).expect("bundled names are known"),
    )
}

/// A profile on which Kemeny and Squared Kemeny are nearly opposite:
/// `a₁…a_m` has weight `2 + ε`, `a₂ a₁ a₃…a_m` weight 0, every other
/// ranking weight 1, normalised. Requires `m <= 8`.
pub fn divergence_profile(m: usize, epsilon: &Rational) -> Result<Profile> {
    let first = Ranking::identity(m)?;
    let mut second = first.order().to_vec();
    second.swap(0, 1);
    let second = Ranking::new(second)?;
    let two = Rational::from_integer(2) + epsilon.clone();
    let entries = crate::ranking::enumerate_rankings_with_guard(m, 8)?.filter_map(|r| {
        if r == first {
            Some((r, two.clone()))
        } else if r == second {
            None
        } else {
            Some((r, Rational::one()))
        }
    });
    Profile::normalized(entries.collect::<Vec<_>>())
}

/// The eleven-step sequence from `abcde` to `edcba` by adjacent swaps,
/// with weights 3/10, 3/10, 1/10, 3/10 at steps 0, 2, 4 and 10.
pub fn single_crossing_example() -> (Profile, Vec<Ranking>) {
    let start = Ranking::identity(5).unwrap();
    let seq = build_swap_path(&start, &start.reversed()).unwrap().rankings;
    let w = |n| Rational::new(n, 10).unwrap();
    let profile = Profile::new([
        (seq[0].clone(), w(3)),
        (seq[2].clone(), w(3)),
        (seq[4].clone(), w(1)),
        (seq[10].clone(), w(3)),
    ])
    .unwrap();
    (profile, seq)
}
