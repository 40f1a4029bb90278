//! Weighted profiles of rankings and their subprofiles.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::Ranking;
use crate::rational::Rational;

/// A weight function over rankings with positive exact weights summing to 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Profile {
    m: usize,
    entries: BTreeMap<Ranking, Rational>,
    labels: Option<Vec<String>>,
}

impl Profile {
    /// Builds a profile; duplicate rankings are merged and zero weights dropped.
    pub fn new(entries: impl IntoIterator<Item = (Ranking, Rational)>) -> Result<Self> {
        Self::build(entries, false)
    }

    /// Like [`Profile::new`] but rescales so the weights sum to 1.
    pub fn normalized(entries: impl IntoIterator<Item = (Ranking, Rational)>) -> Result<Self> {
        Self::build(entries, true)
    }

    /// Weights proportional to integer counts.
    pub fn from_counts(entries: impl IntoIterator<Item = (Ranking, u64)>) -> Result<Self> {
        Self::normalized(
            entries
                .into_iter()
                .map(|(r, c)| (r, Rational::from(BigInt::from(c)))),
        )
    }

    /// The profile with all weight on one ranking.
    pub fn singleton(r: Ranking) -> Self {
        let m = r.m();
        let mut entries = BTreeMap::new();
        entries.insert(r, Rational::one());
        Profile { m, entries, labels: None }
    }

    fn build(entries: impl IntoIterator<Item = (Ranking, Rational)>, normalize: bool) -> Result<Self> {
        let mut map: BTreeMap<Ranking, Rational> = BTreeMap::new();
        let mut m = None;
        for (r, w) in entries {
            if w.is_negative() {
                return Err(Error::InvalidWeight(format!("negative weight {w} on {r}")));
            }
            match m {
                None => m = Some(r.m()),
                Some(m0) if m0 != r.m() => return Err(Error::Dimension { expected: m0, found: r.m() }),
                _ => {}
            }
            if w.is_zero() {
                continue;
            }
            *map.entry(r).or_default() += &w;
        }
        let m = m.ok_or_else(|| Error::InvalidWeight("empty profile".into()))?;
        let total: Rational = map.values().sum();
        if total.is_zero() {
            return Err(Error::InvalidWeight("all weights are zero".into()));
        }
        if normalize {
            for w in map.values_mut() {
                *w = &*w / &total;
            }
        } else if total != Rational::one() {
            return Err(Error::WeightSum(total.to_string()));
        }
        Ok(Profile { m, entries: map, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.m {
            return Err(Error::Dimension { expected: self.m, found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Labels, defaulting to letters `a`, `b`, ... (or indices past 26).
    pub fn label_names(&self) -> Vec<String> {
        match &self.labels {
            Some(l) => l.clone(),
            None => default_labels(self.m),
        }
    }

    /// Support rankings with their weights, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Ranking, &Rational)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Ranking> {
        self.entries.keys()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn weight(&self, r: &Ranking) -> Rational {
        self.entries.get(r).cloned().unwrap_or_default()
    }

    /// Exact `Σ R(≻)·swap(≻, cand)^p`.
    pub fn power_cost(&self, cand: &Ranking, p: u32) -> Result<Rational> {
        let mut total = Rational::zero();
        for (r, w) in &self.entries {
            let d = r.swap_distance(cand)?;
            total += &(w * &Rational::from(BigInt::from(d).pow(p)));
        }
        Ok(total)
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, other: &Profile, lambda: &Rational) -> Result<Profile> {
        if self.m != other.m {
            return Err(Error::Dimension { expected: self.m, found: other.m });
        }
        if !lambda.is_positive() || *lambda >= Rational::one() {
            return Err(Error::OutOfRange(format!("mixing weight {lambda} not in (0,1)")));
        }
        let rest = Rational::one() - lambda.clone();
        let entries = self
            .iter()
            .map(|(r, w)| (r.clone(), w * lambda))
            .chain(other.iter().map(|(r, w)| (r.clone(), w * &rest)));
        let mut out = Profile::new(entries)?;
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// Relabels every ranking by `tau` (alternative `a` becomes `tau[a]`).
    pub fn permuted(&self, tau: &[usize]) -> Result<Profile> {
        let entries = self
            .iter()
            .map(|(r, w)| Ok((r.permuted(tau)?, w.clone())))
            .collect::<Result<Vec<_>>>()?;
        Profile::new(entries)
    }

    /// Projects every ranking onto `keep`, merging weights of coinciding rankings.
    pub fn restricted(&self, keep: &[usize]) -> Result<Profile> {
        if keep.len() < 2 {
            return Err(Error::OutOfRange("restriction needs at least 2 alternatives".into()));
        }
        let entries = self
            .iter()
            .map(|(r, w)| Ok((r.restricted(keep)?, w.clone())))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Profile::new(entries)?;
        if let Some(l) = &self.labels {
            out.labels = Some(keep.iter().map(|&a| l[a].clone()).collect());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ProfileDoc::from(self)).expect("profile serializes")
    }

    /// Parses the canonical JSON form; rejects sums other than 1 unless `normalize`.
    pub fn from_json(text: &str, normalize: bool) -> Result<Profile> {
        let doc: ProfileDoc = serde_json::from_str(text)?;
        let entries = doc.entries.into_iter().map(|e| (e.order, e.weight)).collect::<Vec<_>>();
        if entries.iter().any(|(r, _)| r.m() != doc.m) {
            let bad = entries.iter().find(|(r, _)| r.m() != doc.m).unwrap();
            return Err(Error::Dimension { expected: doc.m, found: bad.0.m() });
        }
        let p = Profile::build(entries, normalize)?;
        match doc.labels {
            Some(l) => p.with_labels(l),
            None => Ok(p),
        }
    }
}

pub(crate) fn default_labels(m: usize) -> Vec<String> {
    (0..m)
        .map(|a| {
            if m <= 26 {
                ((b'a' + a as u8) as char).to_string()
            } else {
                a.to_string()
            }
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct ProfileDoc {
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    order: Ranking,
    weight: Rational,
}

impl From<&Profile> for ProfileDoc {
    fn from(p: &Profile) -> Self {
        ProfileDoc {
            m: p.m,
            labels: p.labels.clone(),
            entries: p
                .iter()
                .map(|(r, w)| EntryDoc { order: r.clone(), weight: w.clone() })
                .collect(),
        }
    }
}

/// A group of voters: pointwise at most the parent profile's weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subprofile<'a> {
    parent: &'a Profile,
    entries: BTreeMap<Ranking, Rational>,
}

impl<'a> Subprofile<'a> {
    pub fn new(parent: &'a Profile, entries: impl IntoIterator<Item = (Ranking, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<Ranking, Rational> = BTreeMap::new();
        for (r, w) in entries {
            if w.is_negative() {
                return Err(Error::InvalidWeight(format!("negative weight {w} on {r}")));
            }
            if !w.is_zero() {
                *map.entry(r).or_default() += &w;
            }
        }
        for (r, w) in &map {
            let cap = parent.weight(r);
            if *w > cap {
                return Err(Error::InvalidWeight(format!("{r} has weight {w} above parent weight {cap}")));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidWeight("empty subprofile".into()));
        }
        Ok(Subprofile { parent, entries: map })
    }

    pub fn parent(&self) -> &Profile {
        self.parent
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ranking, &Rational)> {
        self.entries.iter()
    }

    /// Total weight α.
    pub fn size(&self) -> Rational {
        self.entries.values().sum()
    }

    /// Average swap distance between the group and `cand`.
    pub fn average_distance(&self, cand: &Ranking) -> Result<Rational> {
        let mut total = Rational::zero();
        for (r, w) in &self.entries {
            total += &(w * &Rational::from(BigInt::from(r.swap_distance(cand)?)));
        }
        Ok(&total / &self.size())
    }
}
