//! Count-based sliding window over a transaction stream.
//!
//! The window keeps only one presence bitmap per item plus a fill count;
//! raw transactions are never retained. Once full, every arrival evicts the
//! oldest slot by shifting all bitmaps one position toward the front.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::ternary::{prefix_mask, words_for, TernaryVector, Words};

/// Window capacity `n` and mining cadence `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowConfig {
    capacity: usize,
    slide: usize,
}

impl WindowConfig {
    pub fn new(capacity: usize, slide: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidConfig(
                "window capacity must be at least 1".into(),
            ));
        }
        if slide == 0 || slide > capacity {
            return Err(Error::InvalidConfig(format!(
                "slide must be in [1, {capacity}], got {slide}"
            )));
        }
        Ok(WindowConfig { capacity, slide })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn slide(&self) -> usize {
        self.slide
    }
}

/// One stream element. Items are held as a set in canonical (byte) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub seq: u64,
    pub items: BTreeSet<String>,
}

impl Transaction {
    pub fn new<I, S>(seq: u64, items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Transaction {
            seq,
            items: items.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SlidingWindow {
    config: WindowConfig,
    occupied: usize,
    presence: BTreeMap<String, Words>,
    last_seq: Option<u64>,
    arrivals_since_mine: usize,
    filled: bool,
}

impl SlidingWindow {
    pub fn new(config: WindowConfig) -> Self {
        SlidingWindow {
            config,
            occupied: 0,
            presence: BTreeMap::new(),
            last_seq: None,
            arrivals_since_mine: 0,
            filled: false,
        }
    }

    pub fn config(&self) -> WindowConfig {
        self.config
    }

    pub fn occupied(&self) -> usize {
        self.occupied
    }

    pub fn is_empty(&self) -> bool {
        self.occupied == 0
    }

    pub fn last_seq(&self) -> Option<u64> {
        self.last_seq
    }

    /// Number of distinct items with at least one occurrence in the window.
    pub fn item_count(&self) -> usize {
        self.presence.len()
    }

    /// Bits of per-item state currently held (presence bitmaps only).
    pub fn state_bits(&self) -> usize {
        self.presence.len() * words_for(self.config.capacity) * 64
    }

    /// Appends a transaction. Returns `true` when a mining run is due: the
    /// first time the window fills, then after every `slide` arrivals.
    pub fn push(&mut self, txn: &Transaction) -> Result<bool> {
        if let Some(last) = self.last_seq {
            if txn.seq != last + 1 {
                return Err(Error::OutOfOrder {
                    expected: last + 1,
                    got: txn.seq,
                });
            }
        }

        let capacity = self.config.capacity;
        let slot = if self.occupied < capacity {
            self.occupied += 1;
            self.occupied - 1
        } else {
            for bits in self.presence.values_mut() {
                shift_out_oldest(bits);
            }
            self.presence.retain(|_, bits| bits.iter().any(|&w| w != 0));
            capacity - 1
        };

        let words = words_for(capacity);
        for item in &txn.items {
            let bit = 1 << (slot % 64);
            match self.presence.get_mut(item) {
                Some(bits) => bits[slot / 64] |= bit,
                None => {
                    // Unseen items start all-zero: earlier slots were observed without them.
                    let mut bits: Words = smallvec::smallvec![0; words];
                    bits[slot / 64] |= bit;
                    self.presence.insert(item.clone(), bits);
                }
            }
        }

        self.last_seq = Some(txn.seq);
        self.arrivals_since_mine += 1;

        let due = if self.occupied < capacity {
            false
        } else if !self.filled {
            self.filled = true;
            true
        } else {
            self.arrivals_since_mine >= self.config.slide
        };
        if due {
            self.arrivals_since_mine = 0;
        }
        Ok(due)
    }

    /// End-of-stream check: `true` if the window holds transactions that no
    /// mining run has covered yet. Resets the pending count.
    pub fn finish(&mut self) -> bool {
        let due = self.occupied > 0 && self.arrivals_since_mine > 0;
        self.arrivals_since_mine = 0;
        due
    }

    pub fn snapshot(&self) -> WindowSnapshot {
        let capacity = self.config.capacity;
        let known = prefix_mask(capacity, self.occupied);
        let (item_order, vectors) = self
            .presence
            .iter()
            .map(|(item, bits)| {
                (
                    item.clone(),
                    TernaryVector::from_words(capacity, bits.clone(), known.clone()),
                )
            })
            .unzip();
        WindowSnapshot {
            capacity,
            occupied: self.occupied,
            window_end_seq: self.last_seq.unwrap_or(0),
            item_order,
            vectors,
        }
    }
}

/// Drops slot 0 and moves every later slot one position toward the front.
fn shift_out_oldest(bits: &mut [u64]) {
    let n = bits.len();
    for i in 0..n {
        let carry = if i + 1 < n { bits[i + 1] << 63 } else { 0 };
        bits[i] = (bits[i] >> 1) | carry;
    }
}

/// Frozen view of a window, handed to the miner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSnapshot {
    capacity: usize,
    occupied: usize,
    window_end_seq: u64,
    item_order: Vec<String>,
    vectors: Vec<TernaryVector>,
}

impl WindowSnapshot {
    /// Builds a snapshot directly from the given transactions, oldest first.
    /// Only the last `capacity` transactions are kept.
    pub fn from_transactions(capacity: usize, txns: &[Transaction]) -> Self {
        let start = txns.len().saturating_sub(capacity);
        let txns = &txns[start..];
        let item_order: Vec<String> = txns
            .iter()
            .flat_map(|t| t.items.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let vectors = item_order
            .iter()
            .map(|item| {
                let mut present = vec![false; capacity];
                for (slot, t) in txns.iter().enumerate() {
                    present[slot] = t.items.contains(item);
                }
                TernaryVector::from_memberships(&present, txns.len())
            })
            .collect();
        WindowSnapshot {
            capacity,
            occupied: txns.len(),
            window_end_seq: txns.last().map_or(0, |t| t.seq),
            item_order,
            vectors,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn occupied(&self) -> usize {
        self.occupied
    }

    pub fn window_end_seq(&self) -> u64 {
        self.window_end_seq
    }

    /// Items in canonical order.
    pub fn item_order(&self) -> &[String] {
        &self.item_order
    }

    /// Vectors aligned with [`item_order`](Self::item_order).
    pub fn vectors(&self) -> &[TernaryVector] {
        &self.vectors
    }

    pub fn item_vector(&self, item: &str) -> Result<&TernaryVector> {
        self.item_order
            .binary_search_by(|probe| probe.as_str().cmp(item))
            .map(|i| &self.vectors[i])
            .map_err(|_| Error::UnknownItem(item.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &TernaryVector)> {
        self.item_order
            .iter()
            .map(String::as_str)
            .zip(self.vectors.iter())
    }
}
