//! Augmented AVL tree over unique scores.
//!
//! Every node carries the label counts of the points sharing its score and
//! the sum of those counts over its subtree, so the counts of all points
//! strictly below a threshold can be read off a single root-to-leaf descent.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::types::{CountPair, Score};

type Link = Option<Box<Node>>;

#[derive(Debug, Clone)]
struct Node {
    key: Score,
    weight: CountPair,
    cweight: CountPair,
    height: u32,
    left: Link,
    right: Link,
}

impl Node {
    fn leaf(key: Score, weight: CountPair) -> Box<Node> {
        Box::new(Node {
            key,
            weight,
            cweight: weight,
            height: 1,
            left: None,
            right: None,
        })
    }

    fn update(&mut self) {
        self.height = 1 + height(&self.left).max(height(&self.right));
        self.cweight = cweight(&self.left) + self.weight + cweight(&self.right);
    }

    fn balance(&self) -> i64 {
        height(&self.left) as i64 - height(&self.right) as i64
    }
}

fn height(link: &Link) -> u32 {
    link.as_ref().map_or(0, |n| n.height)
}

fn cweight(link: &Link) -> CountPair {
    link.as_ref().map_or(CountPair::ZERO, |n| n.cweight)
}

fn rotate_left(mut x: Box<Node>) -> Box<Node> {
    let mut y = x.right.take().expect("rotate_left without right child");
    x.right = y.left.take();
    x.update();
    y.left = Some(x);
    y.update();
    y
}

fn rotate_right(mut x: Box<Node>) -> Box<Node> {
    let mut y = x.left.take().expect("rotate_right without left child");
    x.left = y.right.take();
    x.update();
    y.right = Some(x);
    y.update();
    y
}

fn rebalance(mut node: Box<Node>) -> Box<Node> {
    node.update();
    let bf = node.balance();
    if bf > 1 {
        if node.left.as_ref().is_some_and(|l| l.balance() < 0) {
            node.left = node.left.take().map(rotate_left);
        }
        rotate_right(node)
    } else if bf < -1 {
        if node.right.as_ref().is_some_and(|r| r.balance() > 0) {
            node.right = node.right.take().map(rotate_right);
        }
        rotate_left(node)
    } else {
        node
    }
}

fn insert(link: Link, key: Score, w: CountPair) -> Box<Node> {
    let Some(mut node) = link else {
        return Node::leaf(key, w);
    };
    match key.cmp(&node.key) {
        Ordering::Less => node.left = Some(insert(node.left.take(), key, w)),
        Ordering::Greater => node.right = Some(insert(node.right.take(), key, w)),
        Ordering::Equal => node.weight += w,
    }
    rebalance(node)
}

/// Detaches the minimum node of a non-empty subtree.
fn take_min(mut node: Box<Node>) -> (Link, Box<Node>) {
    match node.left.take() {
        None => (node.right.take(), node),
        Some(left) => {
            let (rest, min) = take_min(left);
            node.left = rest;
            (Some(rebalance(node)), min)
        }
    }
}

/// Removes `w` at `key`; the caller has checked that enough weight is present.
fn remove(link: Link, key: Score, w: CountPair) -> Link {
    let mut node = link?;
    match key.cmp(&node.key) {
        Ordering::Less => node.left = remove(node.left.take(), key, w),
        Ordering::Greater => node.right = remove(node.right.take(), key, w),
        Ordering::Equal => {
            node.weight -= w;
            if node.weight.is_zero() {
                return match (node.left.take(), node.right.take()) {
                    (None, None) => None,
                    (Some(l), None) => Some(l),
                    (None, Some(r)) => Some(r),
                    (Some(l), Some(r)) => {
                        let (rest, mut min) = take_min(r);
                        min.left = Some(l);
                        min.right = rest;
                        Some(rebalance(min))
                    }
                };
            }
        }
    }
    Some(rebalance(node))
}

/// Label counts per unique score with logarithmic prefix-count queries.
#[derive(Debug, Clone, Default)]
pub struct ScoreIndex {
    root: Link,
    len: usize,
}

impl ScoreIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `w` to the counts stored at `score`, creating the node if needed.
    pub fn insert(&mut self, score: f64, w: CountPair) -> Result<()> {
        let key = Score::new(score)?;
        if w.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let present = self.weight_at_key(key);
        self.insert_known(key, w, present);
        Ok(())
    }

    /// Subtracts `w` from the counts at `score`; the node is dropped once empty.
    pub fn remove(&mut self, score: f64, w: CountPair) -> Result<()> {
        let key = Score::new(score)?;
        if w.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let present = self.weight_at_key(key);
        if present.is_zero() {
            return Err(Error::ScoreNotFound(key.get()));
        }
        if !w.fits_within(present) {
            return Err(Error::InsufficientWeight {
                score: key.get(),
                requested: w,
                present,
            });
        }
        self.remove_known(key, w, present);
        Ok(())
    }

    /// Insert for callers that already know the weight `present` at `key`.
    pub(crate) fn insert_known(&mut self, key: Score, w: CountPair, present: CountPair) {
        if present.is_zero() {
            self.len += 1;
        }
        self.root = Some(insert(self.root.take(), key, w));
    }

    /// Remove for callers that have checked `w` fits within `present`.
    pub(crate) fn remove_known(&mut self, key: Score, w: CountPair, present: CountPair) {
        if present == w {
            self.len -= 1;
        }
        self.root = remove(self.root.take(), key, w);
    }

    /// Total counts of points with score strictly below `score`.
    ///
    /// Non-finite thresholds are answered by their position in the order:
    /// `-inf` gives nothing, `+inf` gives the totals, NaN gives nothing.
    pub fn left_count(&self, score: f64) -> CountPair {
        if score.is_nan() {
            return CountPair::ZERO;
        }
        let key = score + 0.0;
        let mut acc = CountPair::ZERO;
        let mut cur = self.root.as_deref();
        while let Some(node) = cur {
            match key.total_cmp(&node.key.get()) {
                Ordering::Less => cur = node.left.as_deref(),
                Ordering::Greater => {
                    acc += cweight(&node.left) + node.weight;
                    cur = node.right.as_deref();
                }
                Ordering::Equal => return acc + cweight(&node.left),
            }
        }
        acc
    }

    /// Counts strictly below `score` and exactly at `score`, in one descent.
    pub fn probe(&self, score: f64) -> (CountPair, CountPair) {
        if score.is_nan() {
            return (CountPair::ZERO, CountPair::ZERO);
        }
        let key = score + 0.0;
        let mut below = CountPair::ZERO;
        let mut cur = self.root.as_deref();
        while let Some(node) = cur {
            match key.total_cmp(&node.key.get()) {
                Ordering::Less => cur = node.left.as_deref(),
                Ordering::Greater => {
                    below += cweight(&node.left) + node.weight;
                    cur = node.right.as_deref();
                }
                Ordering::Equal => return (below + cweight(&node.left), node.weight),
            }
        }
        (below, CountPair::ZERO)
    }

    /// Counts stored at exactly `score`, `(0, 0)` if absent.
    pub fn weight_at(&self, score: f64) -> CountPair {
        match Score::new(score) {
            Ok(key) => self.weight_at_key(key),
            Err(_) => CountPair::ZERO,
        }
    }

    fn weight_at_key(&self, key: Score) -> CountPair {
        let mut cur = self.root.as_deref();
        while let Some(node) = cur {
            match key.cmp(&node.key) {
                Ordering::Less => cur = node.left.as_deref(),
                Ordering::Greater => cur = node.right.as_deref(),
                Ordering::Equal => return node.weight,
            }
        }
        CountPair::ZERO
    }

    pub fn totals(&self) -> CountPair {
        cweight(&self.root)
    }

    /// Number of distinct scores.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn height(&self) -> u32 {
        height(&self.root)
    }

    /// `(score, counts)` pairs in increasing score order.
    pub fn entries(&self) -> Vec<(f64, CountPair)> {
        fn walk(link: &Link, out: &mut Vec<(f64, CountPair)>) {
            if let Some(n) = link {
                walk(&n.left, out);
                out.push((n.key.get(), n.weight));
                walk(&n.right, out);
            }
        }
        let mut out = Vec::with_capacity(self.len);
        walk(&self.root, &mut out);
        out
    }

    /// Audits ordering, balance and the subtree-sum recurrence at every node.
    pub fn validate(&self) -> std::result::Result<(), String> {
        fn check(
            link: &Link,
            lo: Option<Score>,
            hi: Option<Score>,
        ) -> Result<(u32, CountPair, usize), String> {
            let Some(n) = link else {
                return Ok((0, CountPair::ZERO, 0));
            };
            if lo.is_some_and(|lo| n.key <= lo) || hi.is_some_and(|hi| n.key >= hi) {
                return Err(format!("key {} out of order", n.key));
            }
            if n.weight.is_zero() {
                return Err(format!("zero weight node at {}", n.key));
            }
            let (hl, wl, cl) = check(&n.left, lo, Some(n.key))?;
            let (hr, wr, cr) = check(&n.right, Some(n.key), hi)?;
            if hl.abs_diff(hr) > 1 {
                return Err(format!("unbalanced at {}", n.key));
            }
            let h = 1 + hl.max(hr);
            let w = wl + n.weight + wr;
            if h != n.height {
                return Err(format!("stale height at {}", n.key));
            }
            if w != n.cweight {
                return Err(format!(
                    "cweight mismatch at {}: {} vs {}",
                    n.key, n.cweight, w
                ));
            }
            Ok((h, w, cl + cr + 1))
        }
        let (_, _, count) = check(&self.root, None, None).map_err(|e| e.to_string())?;
        if count != self.len {
            return Err(format!("len {} but {} nodes", self.len, count));
        }
        Ok(())
    }
}
