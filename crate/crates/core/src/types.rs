//! Value types shared by every structure in the crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Sub, SubAssign};

use crate::error::{Error, Result};

/// True class of a data point. High scores are expected for `Class2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Class1,
    Class2,
}

impl Label {
    /// The unit weight of a single point with this label.
    pub fn unit(self) -> CountPair {
        match self {
            Label::Class1 => CountPair::new(1, 0),
            Label::Class2 => CountPair::new(0, 1),
        }
    }
}

/// Label counts `(class-1 count, class-2 count)`.
///
/// This is the weight of a point, of a group of points sharing a score, and
/// also the (non-normalized) coordinate of an ROC point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CountPair {
    pub c1: u64,
    pub c2: u64,
}

impl CountPair {
    pub const ZERO: CountPair = CountPair { c1: 0, c2: 0 };

    pub const fn new(c1: u64, c2: u64) -> Self {
        CountPair { c1, c2 }
    }

    pub fn is_zero(self) -> bool {
        self.c1 == 0 && self.c2 == 0
    }

    /// Component-wise `self <= other`.
    pub fn fits_within(self, other: CountPair) -> bool {
        self.c1 <= other.c1 && self.c2 <= other.c2
    }

    pub fn checked_sub(self, other: CountPair) -> Option<CountPair> {
        Some(CountPair {
            c1: self.c1.checked_sub(other.c1)?,
            c2: self.c2.checked_sub(other.c2)?,
        })
    }

    pub fn total(self) -> u64 {
        self.c1 + self.c2
    }
}

impl Add for CountPair {
    type Output = CountPair;
    fn add(self, rhs: CountPair) -> CountPair {
        CountPair::new(self.c1 + rhs.c1, self.c2 + rhs.c2)
    }
}

impl AddAssign for CountPair {
    fn add_assign(&mut self, rhs: CountPair) {
        *self = *self + rhs;
    }
}

impl Sub for CountPair {
    type Output = CountPair;
    /// Panics if any component would underflow.
    fn sub(self, rhs: CountPair) -> CountPair {
        self.checked_sub(rhs)
            .expect("CountPair subtraction underflow")
    }
}

impl SubAssign for CountPair {
    fn sub_assign(&mut self, rhs: CountPair) {
        *self = *self - rhs;
    }
}

impl fmt::Display for CountPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c1, self.c2)
    }
}

/// A finite score with `-0.0` folded into `+0.0`, totally ordered.
#[derive(Debug, Clone, Copy)]
pub struct Score(f64);

impl Score {
    pub fn new(value: f64) -> Result<Score> {
        if !value.is_finite() {
            return Err(Error::NonFiniteScore(value));
        }
        // -0.0 + 0.0 == +0.0
        Ok(Score(value + 0.0))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl PartialEq for Score {
    fn eq(&self, other: &Score) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Score) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Score) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A scored, labeled observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataPoint {
    pub score: f64,
    pub label: Label,
}

impl DataPoint {
    pub fn new(score: f64, label: Label) -> Result<DataPoint> {
        Score::new(score)?;
        Ok(DataPoint { score, label })
    }
}

/// A non-normalized ROC coordinate: cumulative class counts up to a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RocPoint {
    pub r1: u64,
    pub r2: u64,
}

impl RocPoint {
    pub const ORIGIN: RocPoint = RocPoint { r1: 0, r2: 0 };

    pub const fn new(r1: u64, r2: u64) -> RocPoint {
        RocPoint { r1, r2 }
    }
}

impl From<CountPair> for RocPoint {
    fn from(c: CountPair) -> RocPoint {
        RocPoint::new(c.c1, c.c2)
    }
}

impl From<RocPoint> for CountPair {
    fn from(p: RocPoint) -> CountPair {
        CountPair::new(p.r1, p.r2)
    }
}

impl fmt::Display for RocPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r1, self.r2)
    }
}
