//! Bridge search between two side-by-side hulls.
//!
//! Both trees are descended together. Geometry is evaluated in the sheared
//! frame `X = c1 + c2`, `Y = c1`, where every chain is strictly monotone in
//! `X`. All tests are exact integer cross products.

use crate::error::{Error, Result};
use crate::types::CountPair;

use super::tree::{HullNode, HullTree};

/// Result of a bridge search between `H` and `G`.
///
/// The joined hull is `y_0..=y_i` of `H` followed by `g_j..` of `G`, where
/// the segment `y_i -> g_j` replaces edge `j` of `G`. Coordinates are in the
/// frame of `H`'s origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bridge {
    /// Number of `H` edges kept.
    pub i: usize,
    /// Index of the first kept `G` vertex; always at least 1.
    pub j: usize,
    pub start: CountPair,
    pub end: CountPair,
}

#[derive(Clone, Copy)]
struct P {
    c1: i128,
    c2: i128,
}

impl P {
    fn of(c: CountPair) -> P {
        P {
            c1: c.c1 as i128,
            c2: c.c2 as i128,
        }
    }

    fn x(self) -> i128 {
        self.c1 + self.c2
    }

    fn sub(self, o: P) -> P {
        P {
            c1: self.c1 - o.c1,
            c2: self.c2 - o.c2,
        }
    }
}

fn cross(u: P, v: P) -> i128 {
    u.c2 * v.c1 - u.c1 * v.c2
}

/// Sign of `r` relative to the line through `p` with direction `d`;
/// positive means strictly above.
fn side(r: P, p: P, d: P) -> i128 {
    cross(d, r.sub(p)).signum()
}

struct Cursor<'a> {
    node: Option<&'a HullNode>,
    base: CountPair,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn go_right(&mut self, k: usize, p1: CountPair) {
        self.pos = k;
        self.base = p1;
        self.node = self.node.and_then(|n| n.right());
    }

    fn go_left(&mut self) {
        self.node = self.node.and_then(|n| n.left());
    }
}

/// Locates the bridge joining `h` and `g`, where `g` starts at `offset`
/// relative to `h`'s origin. `offset` must equal `h.total()`.
pub fn bridge(h: &HullTree, g: &HullTree, offset: CountPair) -> Result<Bridge> {
    let (Some(hr), Some(gr)) = (h.root(), g.root()) else {
        return Err(Error::DegenerateHull);
    };
    if offset != h.total() {
        return Err(Error::Domain(format!(
            "bridge offset {offset} does not match left hull end {}",
            h.total()
        )));
    }
    Ok(search(hr, gr, offset))
}

fn subtree_len(n: Option<&HullNode>) -> usize {
    n.map_or(0, |n| n.len())
}

pub(crate) fn search(h: &HullNode, g: &HullNode, offset: CountPair) -> Bridge {
    let sigma = P::of(offset).x();
    let yp = P::of(offset);
    let mut a = Cursor {
        node: Some(h),
        base: CountPair::ZERO,
        pos: 0,
    };
    let mut b = Cursor {
        node: Some(g),
        base: offset,
        pos: 0,
    };
    let (mut i, mut start) = (0usize, CountPair::ZERO);
    let (mut j, mut end) = (0usize, offset);

    loop {
        match (a.node, b.node) {
            (Some(an), Some(bn)) => {
                let ka = a.pos + subtree_len(an.left()) + 1;
                let p0c = a.base + an.left().map_or(CountPair::ZERO, |l| l.cweight());
                let p1c = p0c + an.weight();
                let lb = b.pos + subtree_len(bn.left()) + 1;
                let q0c = b.base + bn.left().map_or(CountPair::ZERO, |l| l.cweight());
                let q1c = q0c + bn.weight();
                let (p0, p1, q0, q1) = (P::of(p0c), P::of(p1c), P::of(q0c), P::of(q1c));
                let da = P::of(an.weight());
                let db = P::of(bn.weight());

                if side(q0, p1, da) > 0 || side(q1, p1, da) > 0 {
                    a.go_left();
                } else if side(p0, q0, db) >= 0 || side(p1, q0, db) >= 0 {
                    j = lb;
                    end = q1c;
                    b.go_right(lb, q1c);
                } else {
                    let d = cross(da, db);
                    let num = (p1.x() - sigma) * d + cross(q0.sub(p1), db) * da.x();
                    // sign of (x_int - sigma)
                    let s = num.signum() * d.signum();
                    if s > 0 || (s == 0 && side(yp, q0, db) < 0) {
                        b.go_left();
                    } else {
                        i = ka;
                        start = p1c;
                        a.go_right(ka, p1c);
                    }
                }
            }
            (None, Some(bn)) => {
                let lb = b.pos + subtree_len(bn.left()) + 1;
                let q0c = b.base + bn.left().map_or(CountPair::ZERO, |l| l.cweight());
                let q1c = q0c + bn.weight();
                if side(P::of(start), P::of(q0c), P::of(bn.weight())) >= 0 {
                    j = lb;
                    end = q1c;
                    b.go_right(lb, q1c);
                } else {
                    b.go_left();
                }
            }
            (Some(an), None) => {
                let ka = a.pos + subtree_len(an.left()) + 1;
                let p0c = a.base + an.left().map_or(CountPair::ZERO, |l| l.cweight());
                let p1c = p0c + an.weight();
                if side(P::of(end), P::of(p1c), P::of(an.weight())) < 0 {
                    i = ka;
                    start = p1c;
                    a.go_right(ka, p1c);
                } else {
                    a.go_left();
                }
            }
            (None, None) => break,
        }
    }
    debug_assert!(j >= 1, "bridge must reach into the right hull");
    Bridge { i, j, start, end }
}
