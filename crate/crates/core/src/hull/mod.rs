//! Dynamic upper hull of the non-normalized ROC curve.
//!
//! The outer structure is a leaf-oriented AVL tree over unique scores. Every
//! inner node owns the hull of its subtree's ROC segment, built by bridging
//! the hulls of its two children. The parts of the children's hulls that the
//! bridge cuts away are kept in a [`JoinRecord`], so the join can be undone
//! in logarithmic time when an update has to pass through the node.
//!
//! Hulls are stored in local coordinates: a node's hull starts at the
//! cumulative count just before its first score.

mod bridge;
mod tree;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::types::{CountPair, RocPoint, Score};

pub use bridge::{bridge, Bridge};
pub use tree::{HullNode, HullTree};

/// Scalar attached to every hull edge as a function of its coordinate
/// difference. Must be pure.
pub type NodeFn = dyn Fn(CountPair) -> f64 + Send + Sync;

#[derive(Debug, Clone)]
struct JoinRecord {
    keep: usize,
    left_rest: HullTree,
    right_drop: HullTree,
    right_first: (CountPair, f64),
}

/// Outer tree node. A leaf has no children and `key` is its score; an inner
/// node's `key` is a separator: left keys `<=` key `<` right keys.
#[derive(Debug, Clone)]
struct Node {
    key: Score,
    weight: CountPair,
    height: u32,
    left: Option<Box<Node>>,
    right: Option<Box<Node>>,
    hull: HullTree,
    join: Option<JoinRecord>,
}

impl Node {
    fn leaf(key: Score, weight: CountPair, eval: &dyn Fn(CountPair) -> f64) -> Box<Node> {
        Box::new(Node {
            key,
            weight,
            height: 1,
            left: None,
            right: None,
            hull: HullTree::single(weight, eval(weight)),
            join: None,
        })
    }

    fn is_leaf(&self) -> bool {
        self.left.is_none()
    }

    fn l(&mut self) -> &mut Node {
        self.left.as_deref_mut().expect("inner node")
    }

    fn r(&mut self) -> &mut Node {
        self.right.as_deref_mut().expect("inner node")
    }

    fn fix_height(&mut self) {
        self.height = 1 + h(&self.left).max(h(&self.right));
    }
}

fn h(n: &Option<Box<Node>>) -> u32 {
    n.as_ref().map_or(0, |n| n.height)
}

/// Builds this node's hull from its children's hulls.
fn join(node: &mut Node, eval: &dyn Fn(CountPair) -> f64) {
    debug_assert!(node.join.is_none());
    let lh = node.l().hull.take();
    let rh = node.r().hull.take();
    let offset = lh.total();
    let br = bridge::search(
        lh.root().expect("child hull present"),
        rh.root().expect("child hull present"),
        offset,
    );
    let (a, left_rest) = lh.split_at(br.i);
    let (right_drop, mut keep) = rh.split_at(br.j - 1);
    let w = br.end - br.start;
    let right_first = keep
        .replace_first(w, eval(w))
        .expect("bridge keeps a right edge");
    node.hull = a.concat(keep);
    node.join = Some(JoinRecord {
        keep: br.i,
        left_rest,
        right_drop,
        right_first,
    });
}

/// Restores the children's hulls from this node's hull and join record.
fn unjoin(node: &mut Node) {
    let rec = node.join.take().expect("node is joined");
    let (a, mut keep) = node.hull.take().split_at(rec.keep);
    keep.replace_first(rec.right_first.0, rec.right_first.1);
    node.l().hull = a.concat(rec.left_rest);
    node.r().hull = rec.right_drop.concat(keep);
}

/// Rebalances an unjoined node whose children are joined. The result is
/// unjoined with joined children.
fn rebalance(mut x: Box<Node>, eval: &dyn Fn(CountPair) -> f64) -> Box<Node> {
    x.fix_height();
    let bf = h(&x.left) as i64 - h(&x.right) as i64;
    if bf > 1 {
        let mut y = x.left.take().expect("heavy side");
        unjoin(&mut y);
        if h(&y.left) < h(&y.right) {
            let mut z = y.right.take().expect("heavy side");
            unjoin(&mut z);
            y.right = z.left.take();
            y.fix_height();
            join(&mut y, eval);
            x.left = z.right.take();
            x.fix_height();
            join(&mut x, eval);
            z.left = Some(y);
            z.right = Some(x);
            z.fix_height();
            z
        } else {
            x.left = y.right.take();
            x.fix_height();
            join(&mut x, eval);
            y.right = Some(x);
            y.fix_height();
            y
        }
    } else if bf < -1 {
        let mut y = x.right.take().expect("heavy side");
        unjoin(&mut y);
        if h(&y.right) < h(&y.left) {
            let mut z = y.left.take().expect("heavy side");
            unjoin(&mut z);
            y.left = z.right.take();
            y.fix_height();
            join(&mut y, eval);
            x.right = z.left.take();
            x.fix_height();
            join(&mut x, eval);
            z.right = Some(y);
            z.left = Some(x);
            z.fix_height();
            z
        } else {
            x.right = y.left.take();
            x.fix_height();
            join(&mut x, eval);
            y.left = Some(x);
            y.fix_height();
            y
        }
    } else {
        x
    }
}

fn insert(
    mut node: Box<Node>,
    key: Score,
    w: CountPair,
    eval: &dyn Fn(CountPair) -> f64,
) -> Box<Node> {
    if node.is_leaf() {
        if node.key == key {
            node.weight += w;
            node.hull = HullTree::single(node.weight, eval(node.weight));
            return node;
        }
        let fresh = Node::leaf(key, w, eval);
        let (left, right) = if key < node.key {
            (fresh, node)
        } else {
            (node, fresh)
        };
        let mut parent = Box::new(Node {
            key: left.key,
            weight: CountPair::ZERO,
            height: 2,
            left: Some(left),
            right: Some(right),
            hull: HullTree::new(),
            join: None,
        });
        join(&mut parent, eval);
        return parent;
    }
    unjoin(&mut node);
    if key <= node.key {
        node.left = Some(insert(node.left.take().expect("inner node"), key, w, eval));
    } else {
        node.right = Some(insert(node.right.take().expect("inner node"), key, w, eval));
    }
    let mut node = rebalance(node, eval);
    join(&mut node, eval);
    node
}

/// Removes `w` at `key`, which must be present with enough weight.
fn remove(
    mut node: Box<Node>,
    key: Score,
    w: CountPair,
    eval: &dyn Fn(CountPair) -> f64,
) -> Option<Box<Node>> {
    if node.is_leaf() {
        node.weight -= w;
        if node.weight.is_zero() {
            return None;
        }
        node.hull = HullTree::single(node.weight, eval(node.weight));
        return Some(node);
    }
    unjoin(&mut node);
    let go_left = key <= node.key;
    let child = if go_left {
        node.left.take()
    } else {
        node.right.take()
    };
    match remove(child.expect("inner node"), key, w, eval) {
        None => {
            // The sibling is joined already and takes the parent's place.
            if go_left {
                node.right.take()
            } else {
                node.left.take()
            }
        }
        Some(c) => {
            if go_left {
                node.left = Some(c);
            } else {
                node.right = Some(c);
            }
            let mut node = rebalance(node, eval);
            join(&mut node, eval);
            Some(node)
        }
    }
}

fn recompute(node: &mut Node, eval: &dyn Fn(CountPair) -> f64) {
    node.hull.recompute_acc(eval);
    if let Some(rec) = node.join.as_mut() {
        rec.left_rest.recompute_acc(eval);
        rec.right_drop.recompute_acc(eval);
        rec.right_first.1 = eval(rec.right_first.0);
    }
    if let Some(l) = node.left.as_deref_mut() {
        recompute(l, eval);
    }
    if let Some(r) = node.right.as_deref_mut() {
        recompute(r, eval);
    }
}

/// Upper convex hull of the ROC curve of a dynamic multiset of scored points.
#[derive(Clone, Default)]
pub struct RocHullIndex {
    root: Option<Box<Node>>,
    acc: Option<Arc<NodeFn>>,
}

impl fmt::Debug for RocHullIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RocHullIndex")
            .field("totals", &self.totals())
            .field("hull", &self.hull_vertices())
            .field("accumulator", &self.acc.is_some())
            .finish()
    }
}

impl RocHullIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `w` points at `score`.
    pub fn insert(&mut self, score: f64, w: CountPair) -> Result<()> {
        let key = Score::new(score)?;
        if w.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let acc = &self.acc;
        let eval = |d: CountPair| acc.as_ref().map_or(0.0, |f| f(d));
        self.root = Some(match self.root.take() {
            None => Node::leaf(key, w, &eval),
            Some(root) => insert(root, key, w, &eval),
        });
        Ok(())
    }

    /// Removes `w` points at `score`. On error the index is unchanged.
    pub fn remove(&mut self, score: f64, w: CountPair) -> Result<()> {
        let key = Score::new(score)?;
        if w.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let present = self.weight_at(score);
        if present.is_zero() {
            return Err(Error::ScoreNotFound(score));
        }
        if !w.fits_within(present) {
            return Err(Error::InsufficientWeight {
                score,
                requested: w,
                present,
            });
        }
        let acc = &self.acc;
        let eval = |d: CountPair| acc.as_ref().map_or(0.0, |f| f(d));
        let root = self.root.take().expect("non-empty after lookup");
        self.root = remove(root, key, w, &eval);
        Ok(())
    }

    /// Weight stored at `score`, zero if absent.
    pub fn weight_at(&self, score: f64) -> CountPair {
        let Ok(key) = Score::new(score) else {
            return CountPair::ZERO;
        };
        let mut cur = self.root.as_deref();
        while let Some(n) = cur {
            if n.is_leaf() {
                return if n.key == key {
                    n.weight
                } else {
                    CountPair::ZERO
                };
            }
            cur = if key <= n.key {
                n.left.as_deref()
            } else {
                n.right.as_deref()
            };
        }
        CountPair::ZERO
    }

    pub fn totals(&self) -> CountPair {
        self.hull().map_or(CountPair::ZERO, |h| h.total())
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// Height of the outer tree.
    pub fn height(&self) -> u32 {
        h(&self.root)
    }

    /// The hull of the whole curve, or `None` when empty.
    pub fn hull(&self) -> Option<&HullTree> {
        self.root.as_ref().map(|r| &r.hull)
    }

    /// Hull vertices from `(0, 0)` to the totals.
    pub fn hull_vertices(&self) -> Vec<RocPoint> {
        match self.hull() {
            None => vec![RocPoint::ORIGIN],
            Some(h) => h.vertices_from(CountPair::ZERO),
        }
    }

    /// Registers the per-edge scalar and recomputes it everywhere.
    pub fn set_accumulator(&mut self, f: Arc<NodeFn>) {
        self.acc = Some(f);
        self.refresh_accumulator();
    }

    pub fn clear_accumulator(&mut self) {
        self.acc = None;
        self.refresh_accumulator();
    }

    pub fn has_accumulator(&self) -> bool {
        self.acc.is_some()
    }

    fn refresh_accumulator(&mut self) {
        let acc = &self.acc;
        let eval = |d: CountPair| acc.as_ref().map_or(0.0, |f| f(d));
        if let Some(root) = self.root.as_deref_mut() {
            recompute(root, &eval);
        }
    }

    /// Sum of the registered scalar over all hull edges.
    pub fn root_accumulator(&self) -> Result<f64> {
        if self.acc.is_none() {
            return Err(Error::NoAccumulatorRegistered);
        }
        Ok(self.hull().map_or(0.0, |h| h.total_acc()))
    }

    /// Full structural audit: outer balance and separators, and for every
    /// inner node that undoing its join reproduces its children's hulls and
    /// that re-bridging them reproduces its own.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let Some(root) = self.root.as_deref() else {
            return Ok(());
        };
        let acc = &self.acc;
        let eval = |d: CountPair| acc.as_ref().map_or(0.0, |f| f(d));
        audit(root, root.hull.clone(), None, None, &eval).map(|_| ())
    }
}

/// Checks the subtree at `node`, whose hull (held by the parent's record when
/// the parent is joined) is `hull`. Returns the subtree height.
fn audit(
    node: &Node,
    hull: HullTree,
    lo: Option<Score>,
    hi: Option<Score>,
    eval: &dyn Fn(CountPair) -> f64,
) -> std::result::Result<u32, String> {
    hull.validate()?;
    let diffs = hull.diffs();
    for w in diffs.windows(2) {
        let (d, e) = (w[0], w[1]);
        if (d.c1 as i128) * (e.c2 as i128) <= (e.c1 as i128) * (d.c2 as i128) {
            return Err(format!("hull not strictly concave at {d} -> {e}"));
        }
    }
    if lo.is_some_and(|lo| node.key <= lo) || hi.is_some_and(|hi| node.key > hi) {
        return Err(format!("key {} out of separator range", node.key));
    }
    if node.is_leaf() {
        if node.weight.is_zero() {
            return Err("zero-weight leaf".into());
        }
        if diffs != [node.weight] {
            return Err(format!(
                "leaf hull {diffs:?} does not match weight {}",
                node.weight
            ));
        }
        return if node.height == 1 {
            Ok(1)
        } else {
            Err("leaf height".into())
        };
    }
    let rec = node.join.as_ref().ok_or("inner node left unjoined")?;
    let (a, mut keep) = hull.clone().split_at(rec.keep);
    keep.replace_first(rec.right_first.0, rec.right_first.1);
    let lh = a.concat(rec.left_rest.clone());
    let rh = rec.right_drop.clone().concat(keep);
    let (l, r) = (
        node.left.as_deref().unwrap(),
        node.right.as_deref().unwrap(),
    );

    let mut rejoined = Node {
        key: node.key,
        weight: CountPair::ZERO,
        height: 0,
        left: Some(Box::new(Node {
            hull: lh.clone(),
            ..leaf_stub()
        })),
        right: Some(Box::new(Node {
            hull: rh.clone(),
            ..leaf_stub()
        })),
        hull: HullTree::new(),
        join: None,
    };
    join(&mut rejoined, eval);
    if rejoined.hull.diffs() != diffs {
        return Err(format!(
            "re-bridging children does not reproduce hull at {}",
            node.key
        ));
    }

    let hl = audit(l, lh, lo, Some(node.key), eval)?;
    let hr = audit(r, rh, Some(node.key), hi, eval)?;
    if hl.abs_diff(hr) > 1 {
        return Err("outer tree unbalanced".into());
    }
    if node.height != 1 + hl.max(hr) {
        return Err("stale outer height".into());
    }
    Ok(node.height)
}

fn leaf_stub() -> Node {
    Node {
        key: Score::new(0.0).unwrap(),
        weight: CountPair::ZERO,
        height: 1,
        left: None,
        right: None,
        hull: HullTree::new(),
        join: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(a: u64, b: u64) -> CountPair {
        CountPair::new(a, b)
    }

    fn rp(v: &[(u64, u64)]) -> Vec<RocPoint> {
        v.iter().map(|&(a, b)| RocPoint::new(a, b)).collect()
    }

    fn three_point() -> RocHullIndex {
        let mut idx = RocHullIndex::new();
        idx.insert(0.1, c(0, 1)).unwrap();
        idx.insert(0.2, c(1, 0)).unwrap();
        idx.insert(0.3, c(0, 1)).unwrap();
        idx.validate().unwrap();
        idx
    }

    #[test]
    fn three_point_hull() {
        assert_eq!(three_point().hull_vertices(), rp(&[(0, 0), (1, 1), (1, 2)]));
    }

    #[test]
    fn single_point_and_empty() {
        let mut idx = RocHullIndex::new();
        assert_eq!(idx.hull_vertices(), rp(&[(0, 0)]));
        idx.insert(0.5, c(1, 0)).unwrap();
        assert_eq!(idx.hull_vertices(), rp(&[(0, 0), (1, 0)]));
    }

    #[test]
    fn separated_stream() {
        let mut idx = RocHullIndex::new();
        for i in 0..5 {
            idx.insert(i as f64, c(1, 0)).unwrap();
            idx.insert(10.0 + i as f64, c(0, 1)).unwrap();
        }
        idx.validate().unwrap();
        assert_eq!(idx.hull_vertices(), rp(&[(0, 0), (5, 0), (5, 5)]));
    }

    #[test]
    fn removal_examples() {
        let mut idx = three_point();
        idx.remove(0.2, c(1, 0)).unwrap();
        idx.validate().unwrap();
        assert_eq!(idx.hull_vertices(), rp(&[(0, 0), (0, 2)]));

        let mut idx = three_point();
        let before = idx.hull_vertices();
        idx.insert(0.15, c(2, 1)).unwrap();
        idx.remove(0.15, c(2, 1)).unwrap();
        assert_eq!(idx.hull_vertices(), before);

        let mut empty = RocHullIndex::new();
        assert_eq!(empty.remove(0.9, c(1, 0)), Err(Error::ScoreNotFound(0.9)));
    }

    #[test]
    fn failed_remove_leaves_index() {
        let mut idx = three_point();
        assert!(matches!(
            idx.remove(0.2, c(0, 1)),
            Err(Error::InsufficientWeight { .. })
        ));
        assert!(matches!(
            idx.remove(f64::NAN, c(0, 1)),
            Err(Error::NonFiniteScore(_))
        ));
        assert_eq!(idx.totals(), c(1, 2));
        idx.validate().unwrap();
    }

    #[test]
    fn accumulator_readout() {
        let mut idx = three_point();
        assert_eq!(idx.root_accumulator(), Err(Error::NoAccumulatorRegistered));
        idx.set_accumulator(Arc::new(|d: CountPair| (d.c1 + d.c2) as f64));
        assert_eq!(idx.root_accumulator(), Ok(3.0));
        idx.insert(0.05, c(4, 0)).unwrap();
        assert_eq!(idx.root_accumulator(), Ok(7.0));
        idx.validate().unwrap();
        idx.set_accumulator(Arc::new(|_| 0.0));
        assert_eq!(idx.root_accumulator(), Ok(0.0));
    }
}
