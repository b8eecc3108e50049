//! Exact AUC under insertions and deletions.
//!
//! The state is twice the Mann–Whitney statistic, kept as an integer so that
//! the half-point contributions of ties never round. Each update samples the
//! counts below the updated score, at the score, and in total from the
//! [`ScoreIndex`] before touching it.

use crate::error::{Error, Result};
use crate::score_index::ScoreIndex;
use crate::types::{CountPair, Label, Score};

#[derive(Debug, Clone, Default)]
pub struct AucState {
    index: ScoreIndex,
    doubled_u: u64,
}

impl AucState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `w` points that all share `score`.
    pub fn add(&mut self, score: f64, w: CountPair) -> Result<()> {
        let (key, below, at, totals) = self.sample(score, w)?;
        let w1 = w.c1 as i128;
        let w2 = w.c2 as i128;
        let delta = w2 * (2 * below.c1 as i128 + at.c1 as i128)
            + w1 * (2 * totals.c2 as i128 - 2 * below.c2 as i128 - at.c2 as i128)
            + w1 * w2;
        self.index.insert_known(key, w, at);
        self.apply(delta);
        Ok(())
    }

    /// Removes `w` points at `score`; they must be present.
    pub fn delete(&mut self, score: f64, w: CountPair) -> Result<()> {
        let (key, below, at, totals) = self.sample(score, w)?;
        if at.is_zero() {
            return Err(Error::ScoreNotFound(score));
        }
        if !w.fits_within(at) {
            return Err(Error::InsufficientWeight {
                score,
                requested: w,
                present: at,
            });
        }
        let w1 = w.c1 as i128;
        let w2 = w.c2 as i128;
        let delta = -w2 * (2 * below.c1 as i128 + at.c1 as i128)
            - w1 * (2 * totals.c2 as i128 - 2 * below.c2 as i128 - at.c2 as i128)
            + w1 * w2;
        self.index.remove_known(key, w, at);
        self.apply(delta);
        Ok(())
    }

    pub fn add_point(&mut self, score: f64, label: Label) -> Result<()> {
        self.add(score, label.unit())
    }

    pub fn delete_point(&mut self, score: f64, label: Label) -> Result<()> {
        self.delete(score, label.unit())
    }

    fn sample(&self, score: f64, w: CountPair) -> Result<(Score, CountPair, CountPair, CountPair)> {
        let key = Score::new(score)?;
        if w.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let (below, at) = self.index.probe(key.get());
        Ok((key, below, at, self.index.totals()))
    }

    fn apply(&mut self, delta: i128) {
        let next = self.doubled_u as i128 + delta;
        self.doubled_u = u64::try_from(next).expect("Mann-Whitney statistic out of range");
    }

    /// Twice the Mann–Whitney U statistic of the current multiset.
    pub fn doubled_u(&self) -> u64 {
        self.doubled_u
    }

    /// AUC, or `None` while one of the classes is absent.
    pub fn auc(&self) -> Option<f64> {
        let n = self.index.totals();
        if n.c1 == 0 || n.c2 == 0 {
            return None;
        }
        Some(self.doubled_u as f64 / (2.0 * n.c1 as f64 * n.c2 as f64))
    }

    pub fn totals(&self) -> CountPair {
        self.index.totals()
    }

    pub fn index(&self) -> &ScoreIndex {
        &self.index
    }
}
