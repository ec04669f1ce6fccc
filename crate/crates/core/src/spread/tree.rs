//! Depth- and branch-bounded truncations of a spread and their iterated
//! derivatives.
//!
//! A truncation keeps every accepted node of length at most `depth` whose
//! entries are below `branch_bound` and which has an accepted extension of
//! full length. The derivative of a truncation whose leaves sit at height
//! `h` keeps the initial segments of nodes at height `h - 1` with at least
//! two surviving children. Iterating it approximates the Cantor-Bendixson
//! derivatives: a point of rank at least `k` leaves a full-height path in
//! the `k`-th derivative.

use serde::{Deserialize, Serialize};

use super::law::SpreadLaw;
use crate::seqcore::FinSeq;

#[derive(Clone, Debug)]
struct Node {
    parent: usize,
    last: u64,
    len: usize,
    children: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TruncatedTree {
    nodes: Vec<Node>,
    by_len: Vec<Vec<usize>>,
    depth: usize,
}

/// One derivative of a truncation.
#[derive(Clone, Debug)]
pub struct Layer {
    pub mask: Vec<bool>,
    /// Length of the leaves of this layer.
    pub height: usize,
    /// Number of leaves of this layer.
    pub leaves: usize,
}

impl TruncatedTree {
    pub fn build(law: &dyn SpreadLaw, depth: usize, branch_bound: u64) -> Self {
        let mut raw: Vec<Node> = Vec::new();
        let mut seq_of: Vec<Vec<u64>> = Vec::new();
        if law.accepts(&[]) {
            raw.push(Node { parent: usize::MAX, last: 0, len: 0, children: Vec::new() });
            seq_of.push(Vec::new());
        }
        let mut frontier: Vec<usize> = if raw.is_empty() { vec![] } else { vec![0] };
        for len in 0..depth {
            let mut next = Vec::new();
            for &i in &frontier {
                let bound = law.child_bound(&seq_of[i]).map_or(branch_bound, |b| b.saturating_add(1).min(branch_bound));
                for n in 0..bound {
                    let mut s = seq_of[i].clone();
                    s.push(n);
                    if law.accepts(&s) {
                        let id = raw.len();
                        raw.push(Node { parent: i, last: n, len: len + 1, children: Vec::new() });
                        raw[i].children.push(id);
                        seq_of.push(s);
                        next.push(id);
                    }
                }
            }
            frontier = next;
        }
        // keep only nodes with a descendant of full length
        let mut alive = vec![false; raw.len()];
        for i in (0..raw.len()).rev() {
            if raw[i].len == depth || raw[i].children.iter().any(|&c| alive[c]) {
                alive[i] = true;
            }
        }
        let mut remap = vec![usize::MAX; raw.len()];
        let mut nodes = Vec::new();
        for (i, n) in raw.iter().enumerate() {
            if alive[i] {
                remap[i] = nodes.len();
                let parent = if n.parent == usize::MAX { usize::MAX } else { remap[n.parent] };
                nodes.push(Node { parent, last: n.last, len: n.len, children: Vec::new() });
            }
        }
        for i in 0..nodes.len() {
            let p = nodes[i].parent;
            if p != usize::MAX {
                nodes[p].children.push(i);
            }
        }
        let mut by_len = vec![Vec::new(); depth + 1];
        for (i, n) in nodes.iter().enumerate() {
            by_len[n.len].push(i);
        }
        TruncatedTree { nodes, by_len, depth }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn seq(&self, mut i: usize) -> FinSeq {
        let mut out = Vec::with_capacity(self.nodes[i].len);
        while self.nodes[i].parent != usize::MAX {
            out.push(self.nodes[i].last);
            i = self.nodes[i].parent;
        }
        out.reverse();
        FinSeq(out)
    }

    pub fn node_len(&self, i: usize) -> usize {
        self.nodes[i].len
    }

    pub fn nodes_of_len(&self, len: usize) -> &[usize] {
        self.by_len.get(len).map_or(&[], |v| v.as_slice())
    }

    /// Full-length nodes, i.e. the truncated points.
    pub fn leaves(&self) -> Vec<FinSeq> {
        self.nodes_of_len(self.depth).iter().map(|&i| self.seq(i)).collect()
    }

    pub fn find(&self, s: &[u64]) -> Option<usize> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut cur = 0;
        for &x in s {
            cur = *self.nodes[cur].children.iter().find(|&&c| self.nodes[c].last == x)?;
        }
        Some(cur)
    }

    fn first_layer(&self) -> Layer {
        Layer {
            mask: vec![true; self.nodes.len()],
            height: self.depth,
            leaves: self.nodes_of_len(self.depth).len(),
        }
    }

    fn derive(&self, layer: &Layer) -> Option<Layer> {
        // the root is not a point, so branching there says nothing
        if layer.leaves == 0 || layer.height <= 1 {
            return None;
        }
        let h = layer.height - 1;
        let mut mask = vec![false; self.nodes.len()];
        let mut leaves = 0;
        for &i in self.nodes_of_len(h) {
            if !layer.mask[i] {
                continue;
            }
            let live = self.nodes[i].children.iter().filter(|&&c| layer.mask[c]).count();
            if live >= 2 {
                leaves += 1;
                let mut j = i;
                while j != usize::MAX && !mask[j] {
                    mask[j] = true;
                    j = self.nodes[j].parent;
                }
            }
        }
        Some(Layer { mask, height: h, leaves })
    }

    /// The truncation and its derivatives, stopping at the first empty one
    /// or after `max_layers` layers.
    pub fn layers(&self, max_layers: usize) -> Vec<Layer> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let mut cur = self.first_layer();
        loop {
            let next = if out.len() + 1 < max_layers { self.derive(&cur) } else { None };
            out.push(cur);
            match next {
                Some(l) if l.leaves > 0 => cur = l,
                _ => break,
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RankValue {
    Exact(usize),
    AtLeast(usize),
}

impl RankValue {
    pub fn lower_bound(&self) -> usize {
        match *self {
            RankValue::Exact(r) | RankValue::AtLeast(r) => r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankLevel {
    pub rank: usize,
    pub height: usize,
    /// Leaves of the derivative, one per surviving component of rank at
    /// least `rank`.
    pub survivors: usize,
    /// Survivors that do not survive the next derivative.
    pub exact: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    pub depth: usize,
    pub branch_bound: u64,
    pub rank_cap: usize,
    /// `None` for an empty truncation.
    pub root_rank: Option<RankValue>,
    pub levels: Vec<RankLevel>,
}

impl RankProfile {
    /// Number of components of the top rank.
    pub fn top_components(&self) -> usize {
        self.levels.last().map_or(0, |l| l.survivors)
    }
}

pub fn rank_profile(tree: &TruncatedTree, branch_bound: u64, rank_cap: usize) -> RankProfile {
    let layers = tree.layers(rank_cap + 1);
    let levels: Vec<RankLevel> = layers
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let next = layers.get(k + 1).map_or(0, |n| n.leaves);
            RankLevel { rank: k, height: l.height, survivors: l.leaves, exact: l.leaves - next.min(l.leaves) }
        })
        .collect();
    let root_rank = levels.last().map(|top| {
        // exact only when the next derivative was computed at positive
        // height and came out empty
        if top.rank < rank_cap && top.height >= 2 {
            RankValue::Exact(top.rank)
        } else {
            RankValue::AtLeast(top.rank)
        }
    });
    RankProfile { depth: tree.depth(), branch_bound, rank_cap, root_rank, levels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spread::law::{BaireLaw, FnLaw, SingletonLaw};
    use crate::spread::Point;

    fn nondecreasing_below(n: u64) -> FnLaw {
        FnLaw::new("nd", move |s: &[u64]| s.iter().all(|&x| x < n) && s.windows(2).all(|w| w[0] <= w[1]))
    }

    #[test]
    fn singleton_has_one_leaf() {
        let t = TruncatedTree::build(&SingletonLaw(Point::zero()), 6, 4);
        assert_eq!(t.leaves(), vec![FinSeq(vec![0; 6])]);
        let p = rank_profile(&t, 4, 8);
        assert_eq!(p.root_rank, Some(RankValue::Exact(0)));
        assert_eq!(p.top_components(), 1);
    }

    #[test]
    fn derivative_of_nondecreasing_drops_top_value() {
        let t = TruncatedTree::build(&nondecreasing_below(3), 6, 6);
        let layers = t.layers(10);
        assert_eq!(layers.len(), 3);
        assert_eq!(layers[2].leaves, 1);
        assert_eq!(layers[2].height, 4);
        // level-5 survivors are the nondecreasing sequences below 2
        assert_eq!(layers[1].leaves, 6);
    }

    #[test]
    fn baire_is_capped() {
        let t = TruncatedTree::build(&BaireLaw, 4, 2);
        let p = rank_profile(&t, 2, 8);
        assert!(matches!(p.root_rank, Some(RankValue::AtLeast(_))));
    }

    #[test]
    fn dead_ends_are_pruned() {
        let law = FnLaw::new("dead", |s: &[u64]| s.is_empty() || s[0] == 0 || s.len() < 2);
        let t = TruncatedTree::build(&law, 3, 3);
        assert!(t.find(&[1]).is_none());
        assert!(t.find(&[0, 2]).is_some());
    }
}
