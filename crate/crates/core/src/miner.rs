//! Level-wise closed pattern mining over a window snapshot.
//!
//! The tree starts with one node per item. Each round joins pairs of
//! surviving nodes that share all but their last item, combines their
//! ternary vectors, and marks the child `Dead` when its support falls below
//! the threshold. After a level is generated, any parent-level node with a
//! one-larger superset of equal support is marked `NotClosed`: it is still
//! frequent and still joins, but it is not reported as a closed pattern.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::ternary::TernaryVector;
use crate::window::WindowSnapshot;

/// Minimum support, either as a transaction count or a fraction of the
/// occupied window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinSupport {
    Absolute(u32),
    Fraction(f64),
}

impl MinSupport {
    pub fn absolute(count: u32) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidConfig(
                "absolute min support must be at least 1".into(),
            ));
        }
        Ok(MinSupport::Absolute(count))
    }

    pub fn fraction(f: f64) -> Result<Self> {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "fractional min support must be in (0, 1], got {f}"
            )));
        }
        Ok(MinSupport::Fraction(f))
    }

    /// Absolute threshold for a window holding `occupied` transactions.
    /// A fraction resolves to `max(1, ceil(f * occupied))`.
    pub fn resolve(&self, occupied: usize) -> u32 {
        match *self {
            MinSupport::Absolute(n) => n,
            MinSupport::Fraction(f) => {
                // Absorb representation error so that 0.3 * 10 resolves to 3, not 4.
                let raw = (f * occupied as f64 - 1e-9).ceil();
                (raw.max(1.0)) as u32
            }
        }
    }
}

/// Parses `"3"` as an absolute count and `"0.2"` (anything with a decimal
/// point or exponent) as a fraction.
impl FromStr for MinSupport {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(n) = s.parse::<u32>() {
            return MinSupport::absolute(n);
        }
        match s.parse::<f64>() {
            Ok(f) if s.contains(['.', 'e', 'E']) => MinSupport::fraction(f),
            _ => Err(Error::InvalidConfig(format!("invalid min support {s:?}"))),
        }
    }
}

impl fmt::Display for MinSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinSupport::Absolute(n) => write!(f, "{n}"),
            MinSupport::Fraction(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinerConfig {
    pub min_support: MinSupport,
    pub k: usize,
}

impl MinerConfig {
    pub fn new(min_support: MinSupport, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("top-k must be at least 1".into()));
        }
        Ok(MinerConfig { min_support, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeStatus {
    /// Frequent and, so far, closed.
    Live,
    /// Below threshold. Never joined, never reported.
    Dead,
    /// Frequent, but a superset has the same support.
    NotClosed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternNode {
    itemset: SmallVec<[u32; 4]>,
    vector: TernaryVector,
    support: u32,
    status: NodeStatus,
    parents: Option<(usize, usize)>,
}

impl PatternNode {
    /// Item indices into the owning tree's item list, strictly increasing.
    pub fn itemset(&self) -> &[u32] {
        &self.itemset
    }

    pub fn vector(&self) -> &TernaryVector {
        &self.vector
    }

    pub fn support(&self) -> u32 {
        self.support
    }

    pub fn status(&self) -> NodeStatus {
        self.status
    }

    /// Positions of the two join parents in the previous level; `None` at level 1.
    pub fn parents(&self) -> Option<(usize, usize)> {
        self.parents
    }

    fn is_dead(&self) -> bool {
        self.status == NodeStatus::Dead
    }
}

/// The frequent pattern generation tree for one snapshot.
#[derive(Debug, Clone)]
pub struct FpgTree {
    items: Vec<String>,
    levels: Vec<Vec<PatternNode>>,
    threshold: u32,
}

impl FpgTree {
    /// One node per snapshot item, `Dead` if below the resolved threshold.
    pub fn build_level1(snap: &WindowSnapshot, min_support: &MinSupport) -> Self {
        let threshold = min_support.resolve(snap.occupied());
        let level1 = snap
            .vectors()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let support = v.support();
                PatternNode {
                    itemset: smallvec![i as u32],
                    vector: v.clone(),
                    support,
                    status: status_for(support, threshold),
                    parents: None,
                }
            })
            .collect();
        FpgTree {
            items: snap.item_order().to_vec(),
            levels: vec![level1],
            threshold,
        }
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    /// Number of generated levels.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Nodes holding `size`-itemsets (1-based). Empty past the deepest level.
    pub fn level(&self, size: usize) -> &[PatternNode] {
        size.checked_sub(1)
            .and_then(|i| self.levels.get(i))
            .map_or(&[], Vec::as_slice)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &PatternNode> {
        self.levels.iter().flatten()
    }

    pub fn item_names(&self, node: &PatternNode) -> Vec<String> {
        node.itemset
            .iter()
            .map(|&i| self.items[i as usize].clone())
            .collect()
    }

    /// Candidate `size + 1`-itemsets from the non-dead nodes of level `size`.
    ///
    /// Two nodes join when they agree on everything but the last item; at
    /// level 1 that is every pair of siblings. Level nodes are kept in
    /// lexicographic order, so nodes sharing a prefix are contiguous and the
    /// output is itself lexicographically ordered.
    pub fn expand_level(&self, size: usize) -> Vec<PatternNode> {
        let level = self.level(size);
        let prefix = size.saturating_sub(1);
        let mut out = Vec::new();
        for (j, left) in level.iter().enumerate() {
            if left.is_dead() {
                continue;
            }
            for (k, right) in level.iter().enumerate().skip(j + 1) {
                if right.itemset[..prefix] != left.itemset[..prefix] {
                    break;
                }
                if right.is_dead() {
                    continue;
                }
                let vector = left.vector.combine_unchecked(&right.vector);
                let support = vector.support();
                let mut itemset = left.itemset.clone();
                itemset.push(right.itemset[prefix]);
                out.push(PatternNode {
                    itemset,
                    vector,
                    support,
                    status: status_for(support, self.threshold),
                    parents: Some((j, k)),
                });
            }
        }
        out
    }

    /// Marks every live node of level `size` that has an equal-support
    /// superset among the non-dead nodes of level `size + 1`. Returns the
    /// number of nodes newly marked.
    pub fn prune_nonclosed(&mut self, size: usize) -> usize {
        let Some(children) = self.levels.get(size) else {
            return 0;
        };
        let index: HashMap<&[u32], usize> = self.levels[size - 1]
            .iter()
            .enumerate()
            .map(|(i, n)| (n.itemset.as_slice(), i))
            .collect();

        // Every subset obtained by dropping one item, not only the join parents.
        let mut subsumed = Vec::new();
        let mut subset: SmallVec<[u32; 4]> = SmallVec::with_capacity(size);
        for child in children.iter().filter(|c| !c.is_dead()) {
            for skip in 0..child.itemset.len() {
                subset.clear();
                subset.extend(
                    child
                        .itemset
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &x)| x),
                );
                if let Some(&p) = index.get(subset.as_slice()) {
                    if self.levels[size - 1][p].support == child.support {
                        subsumed.push(p);
                    }
                }
            }
        }

        let parents = &mut self.levels[size - 1];
        let mut marked = 0;
        for p in subsumed {
            if parents[p].status == NodeStatus::Live {
                parents[p].status = NodeStatus::NotClosed;
                marked += 1;
            }
        }
        marked
    }

    /// Expands and prunes level by level until a level yields no candidates.
    pub fn grow(&mut self) {
        let mut size = self.levels.len();
        loop {
            let next = self.expand_level(size);
            if next.is_empty() {
                break;
            }
            self.levels.push(next);
            self.prune_nonclosed(size);
            size += 1;
        }
    }

    /// Every frequent node as a [`MinedPattern`], in rank order.
    pub fn patterns(&self) -> Vec<MinedPattern> {
        let mut out: Vec<MinedPattern> = self
            .nodes()
            .filter(|n| !n.is_dead())
            .map(|n| MinedPattern {
                items: self.item_names(n),
                support: n.support,
                closed: n.status == NodeStatus::Live,
            })
            .collect();
        out.sort_by(MinedPattern::rank_cmp);
        out
    }
}

fn status_for(support: u32, threshold: u32) -> NodeStatus {
    if support < threshold {
        NodeStatus::Dead
    } else {
        NodeStatus::Live
    }
}

/// A frequent itemset reported by the miner.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MinedPattern {
    pub items: Vec<String>,
    pub support: u32,
    pub closed: bool,
}

impl MinedPattern {
    /// Support descending, then itemset size ascending, then items
    /// lexicographically ascending.
    pub fn rank_cmp(a: &MinedPattern, b: &MinedPattern) -> Ordering {
        b.support
            .cmp(&a.support)
            .then(a.items.len().cmp(&b.items.len()))
            .then_with(|| a.items.cmp(&b.items))
    }
}

/// Mines all frequent itemsets of a snapshot. Closed ones carry
/// `closed == true`; output is in rank order (see [`MinedPattern::rank_cmp`]).
pub fn mine(snap: &WindowSnapshot, config: &MinerConfig) -> Vec<MinedPattern> {
    mine_tree(snap, &config.min_support).patterns()
}

/// Same as [`mine`] but returns the whole tree, dead nodes included.
pub fn mine_tree(snap: &WindowSnapshot, min_support: &MinSupport) -> FpgTree {
    let mut tree = FpgTree::build_level1(snap, min_support);
    tree.grow();
    tree
}

/// The first `k` closed patterns in rank order.
pub fn top_k(patterns: &[MinedPattern], k: usize) -> Result<Vec<MinedPattern>> {
    if k == 0 {
        return Err(Error::InvalidConfig("top-k must be at least 1".into()));
    }
    let mut closed: Vec<MinedPattern> = patterns.iter().filter(|p| p.closed).cloned().collect();
    closed.sort_by(MinedPattern::rank_cmp);
    closed.truncate(k);
    Ok(closed)
}
