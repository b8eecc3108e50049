//! Upper hull stored as a concatenable queue.
//!
//! Each node is one hull edge. Its `weight` is the coordinate difference
//! between the edge's end vertex and the previous vertex, so a hull never
//! stores absolute coordinates and can be shifted for free. Subtrees carry
//! sums of weights (`cweight`), of the accumulator values (`cacc`) and their
//! node count, which gives logarithmic split-by-position and concatenation.

use crate::types::{CountPair, RocPoint};

pub(crate) type Link = Option<Box<HullNode>>;

/// One hull edge in the tree.
#[derive(Debug, Clone)]
pub struct HullNode {
    weight: CountPair,
    acc: f64,
    cweight: CountPair,
    cacc: f64,
    len: usize,
    height: u32,
    left: Link,
    right: Link,
}

impl HullNode {
    pub(crate) fn new(weight: CountPair, acc: f64) -> Box<HullNode> {
        Box::new(HullNode {
            weight,
            acc,
            cweight: weight,
            cacc: acc,
            len: 1,
            height: 1,
            left: None,
            right: None,
        })
    }

    /// Coordinate difference of this edge.
    pub fn weight(&self) -> CountPair {
        self.weight
    }

    /// Sum of weights over this subtree.
    pub fn cweight(&self) -> CountPair {
        self.cweight
    }

    /// Accumulator value of this edge.
    pub fn acc(&self) -> f64 {
        self.acc
    }

    /// Sum of accumulator values over this subtree.
    pub fn cacc(&self) -> f64 {
        self.cacc
    }

    pub fn left(&self) -> Option<&HullNode> {
        self.left.as_deref()
    }

    pub fn right(&self) -> Option<&HullNode> {
        self.right.as_deref()
    }

    /// Number of edges in this subtree.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len
    }

    fn update(&mut self) {
        self.height = 1 + height(&self.left).max(height(&self.right));
        self.len = 1 + len(&self.left) + len(&self.right);
        self.cweight = cweight(&self.left) + self.weight + cweight(&self.right);
        self.cacc = cacc(&self.left) + self.acc + cacc(&self.right);
    }

    fn balance(&self) -> i64 {
        height(&self.left) as i64 - height(&self.right) as i64
    }
}

pub(crate) fn height(link: &Link) -> u32 {
    link.as_ref().map_or(0, |n| n.height)
}

pub(crate) fn len(link: &Link) -> usize {
    link.as_ref().map_or(0, |n| n.len)
}

pub(crate) fn cweight(link: &Link) -> CountPair {
    link.as_ref().map_or(CountPair::ZERO, |n| n.cweight)
}

fn cacc(link: &Link) -> f64 {
    link.as_ref().map_or(0.0, |n| n.cacc)
}

fn rotate_left(mut x: Box<HullNode>) -> Box<HullNode> {
    let mut y = x.right.take().expect("rotate_left without right child");
    x.right = y.left.take();
    x.update();
    y.left = Some(x);
    y.update();
    y
}

fn rotate_right(mut x: Box<HullNode>) -> Box<HullNode> {
    let mut y = x.left.take().expect("rotate_right without left child");
    x.left = y.right.take();
    x.update();
    y.right = Some(x);
    y.update();
    y
}

fn rebalance(mut node: Box<HullNode>) -> Box<HullNode> {
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

/// Concatenates `left ++ [mid] ++ right`; `mid` must be detached.
fn join_with(left: Link, mut mid: Box<HullNode>, right: Link) -> Box<HullNode> {
    let hl = height(&left);
    let hr = height(&right);
    if hl > hr + 1 {
        let mut l = left.expect("taller side is non-empty");
        l.right = Some(join_with(l.right.take(), mid, right));
        rebalance(l)
    } else if hr > hl + 1 {
        let mut r = right.expect("taller side is non-empty");
        r.left = Some(join_with(left, mid, r.left.take()));
        rebalance(r)
    } else {
        mid.left = left;
        mid.right = right;
        mid.update();
        mid
    }
}

fn take_last(mut node: Box<HullNode>) -> (Link, Box<HullNode>) {
    match node.right.take() {
        None => (node.left.take(), node),
        Some(right) => {
            let (rest, last) = take_last(right);
            node.right = rest;
            (Some(rebalance(node)), last)
        }
    }
}

fn join(left: Link, right: Link) -> Link {
    match (left, right) {
        (None, r) => r,
        (l, None) => l,
        (Some(l), r) => {
            let (rest, last) = take_last(l);
            Some(join_with(rest, last, r))
        }
    }
}

/// Splits into the first `at` edges and the rest.
fn split_at(link: Link, at: usize) -> (Link, Link) {
    let Some(mut node) = link else {
        return (None, None);
    };
    let left = node.left.take();
    let right = node.right.take();
    let nl = len(&left);
    if at <= nl {
        let (a, b) = split_at(left, at);
        (a, Some(join_with(b, node, right)))
    } else {
        let (a, b) = split_at(right, at - nl - 1);
        (Some(join_with(left, node, a)), b)
    }
}

/// Replaces the weight of the first edge; returns the previous `(weight, acc)`.
fn set_first(node: &mut HullNode, weight: CountPair, acc: f64) -> (CountPair, f64) {
    let old = match node.left.as_deref_mut() {
        Some(l) => set_first(l, weight, acc),
        None => {
            let old = (node.weight, node.acc);
            node.weight = weight;
            node.acc = acc;
            old
        }
    };
    node.update();
    old
}

fn recompute(link: &mut Link, eval: &dyn Fn(CountPair) -> f64) {
    if let Some(node) = link {
        recompute(&mut node.left, eval);
        recompute(&mut node.right, eval);
        node.acc = eval(node.weight);
        node.update();
    }
}

/// A hull chain in difference form, possibly empty.
#[derive(Debug, Clone, Default)]
pub struct HullTree {
    pub(crate) root: Link,
}

impl HullTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// A single edge from the origin to `weight`.
    pub fn single(weight: CountPair, acc: f64) -> Self {
        HullTree {
            root: Some(HullNode::new(weight, acc)),
        }
    }

    /// Builds a tree from consecutive coordinate differences.
    pub fn from_diffs(diffs: &[CountPair], eval: &dyn Fn(CountPair) -> f64) -> Self {
        fn build(diffs: &[CountPair], eval: &dyn Fn(CountPair) -> f64) -> Link {
            if diffs.is_empty() {
                return None;
            }
            let mid = diffs.len() / 2;
            let node = HullNode::new(diffs[mid], eval(diffs[mid]));
            Some(join_with(
                build(&diffs[..mid], eval),
                node,
                build(&diffs[mid + 1..], eval),
            ))
        }
        HullTree {
            root: build(diffs, eval),
        }
    }

    pub fn root(&self) -> Option<&HullNode> {
        self.root.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// Number of edges, i.e. vertices excluding the origin.
    pub fn len(&self) -> usize {
        len(&self.root)
    }

    pub fn height(&self) -> u32 {
        height(&self.root)
    }

    /// Coordinates of the last vertex relative to the origin.
    pub fn total(&self) -> CountPair {
        cweight(&self.root)
    }

    /// Sum of accumulator values over all edges.
    pub fn total_acc(&self) -> f64 {
        cacc(&self.root)
    }

    pub fn first_weight(&self) -> Option<CountPair> {
        let mut cur = self.root.as_deref()?;
        while let Some(l) = cur.left() {
            cur = l;
        }
        Some(cur.weight)
    }

    pub(crate) fn take(&mut self) -> HullTree {
        HullTree {
            root: self.root.take(),
        }
    }

    pub(crate) fn split_at(self, at: usize) -> (HullTree, HullTree) {
        let (a, b) = split_at(self.root, at);
        (HullTree { root: a }, HullTree { root: b })
    }

    pub(crate) fn concat(self, other: HullTree) -> HullTree {
        HullTree {
            root: join(self.root, other.root),
        }
    }

    /// Replaces the first edge's weight, returning the old `(weight, acc)`.
    pub(crate) fn replace_first(
        &mut self,
        weight: CountPair,
        acc: f64,
    ) -> Option<(CountPair, f64)> {
        self.root.as_deref_mut().map(|r| set_first(r, weight, acc))
    }

    pub(crate) fn recompute_acc(&mut self, eval: &dyn Fn(CountPair) -> f64) {
        recompute(&mut self.root, eval);
    }

    /// Edge weights in chain order.
    pub fn diffs(&self) -> Vec<CountPair> {
        fn walk(link: &Link, out: &mut Vec<CountPair>) {
            if let Some(n) = link {
                walk(&n.left, out);
                out.push(n.weight);
                walk(&n.right, out);
            }
        }
        let mut out = Vec::with_capacity(self.len());
        walk(&self.root, &mut out);
        out
    }

    /// Absolute vertices starting from `origin`, the origin included.
    pub fn vertices_from(&self, origin: CountPair) -> Vec<RocPoint> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut p = origin;
        out.push(p.into());
        for d in self.diffs() {
            p += d;
            out.push(p.into());
        }
        out
    }

    /// Audits balance and the subtree recurrences. Accumulator sums are
    /// compared with a relative tolerance.
    pub fn validate(&self) -> Result<(), String> {
        fn check(link: &Link) -> Result<(u32, usize, CountPair, f64), String> {
            let Some(n) = link else {
                return Ok((0, 0, CountPair::ZERO, 0.0));
            };
            if n.weight.is_zero() {
                return Err("zero-weight hull edge".into());
            }
            let (hl, ll, wl, al) = check(&n.left)?;
            let (hr, lr, wr, ar) = check(&n.right)?;
            if hl.abs_diff(hr) > 1 {
                return Err("unbalanced hull tree".into());
            }
            let h = 1 + hl.max(hr);
            let l = 1 + ll + lr;
            let w = wl + n.weight + wr;
            let a = al + n.acc + ar;
            if h != n.height || l != n.len || w != n.cweight {
                return Err("stale hull aggregate".into());
            }
            if (a - n.cacc).abs() > 1e-9 * a.abs().max(1.0) {
                return Err(format!("cacc mismatch: {} vs {}", n.cacc, a));
            }
            Ok((h, l, w, a))
        }
        check(&self.root).map(|_| ())
    }
}
