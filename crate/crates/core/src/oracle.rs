//! Exhaustive reference miner.
//!
//! Rebuilds each occupied slot's transaction from single-slot lookups and
//! counts containment for every non-empty itemset directly. It shares no
//! code with vector combination, so it serves as ground truth for the tree
//! miner on small inputs.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::ternary::TernaryBit;
use crate::window::WindowSnapshot;

pub const DEFAULT_ITEM_LIMIT: usize = 20;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleResult {
    /// Frequent itemsets (items in canonical order) and their supports.
    pub frequent: BTreeMap<Vec<String>, u32>,
    pub closed: BTreeSet<Vec<String>>,
}

pub fn oracle_mine(snap: &WindowSnapshot, threshold: u32) -> Result<OracleResult> {
    oracle_mine_bounded(snap, threshold, DEFAULT_ITEM_LIMIT)
}

pub fn oracle_mine_bounded(
    snap: &WindowSnapshot,
    threshold: u32,
    item_limit: usize,
) -> Result<OracleResult> {
    let items = snap.item_order();
    let m = items.len();
    if m > item_limit || m >= 32 {
        return Err(Error::TooManyItems {
            items: m,
            limit: item_limit.min(31),
        });
    }

    let rows: Vec<u32> = (0..snap.occupied())
        .map(|slot| {
            snap.vectors()
                .iter()
                .enumerate()
                .filter(|(_, v)| v.get(slot) == TernaryBit::One)
                .fold(0u32, |acc, (i, _)| acc | (1 << i))
        })
        .collect();

    let support_of = |mask: u32| rows.iter().filter(|&&r| r & mask == mask).count() as u32;
    let names = |mask: u32| -> Vec<String> {
        (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| items[i].clone())
            .collect()
    };

    let mut result = OracleResult::default();
    let all = 1u32.checked_shl(m as u32).unwrap_or(0).wrapping_sub(1);
    for mask in 1..=all {
        let support = support_of(mask);
        if support < threshold {
            continue;
        }
        let subsumed = (0..m)
            .filter(|b| mask & (1 << b) == 0)
            .any(|b| support_of(mask | (1 << b)) == support);
        let key = names(mask);
        if !subsumed {
            result.closed.insert(key.clone());
        }
        result.frequent.insert(key, support);
    }
    Ok(result)
}
