//! Ternary presence values and fixed-length ternary vectors.
//!
//! A [`TernaryVector`] records, for each slot of a sliding window, whether an
//! itemset occurred in the transaction occupying that slot. Slots that no
//! transaction has occupied yet are [`TernaryBit::Unknown`]. Internally a
//! vector is two parallel bitmaps, `presence` and `known`, with presence
//! always masked by known.

use std::fmt;
use std::str::FromStr;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Bitmap words; windows up to 128 slots stay inline.
pub(crate) type Words = SmallVec<[u64; 2]>;

/// A single ternary value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TernaryBit {
    One,
    Zero,
    Unknown,
}

impl TernaryBit {
    pub const ALL: [TernaryBit; 3] = [TernaryBit::One, TernaryBit::Zero, TernaryBit::Unknown];

    pub fn as_char(self) -> char {
        match self {
            TernaryBit::One => '1',
            TernaryBit::Zero => '0',
            TernaryBit::Unknown => 'U',
        }
    }
}

/// The bitwise combiner `F`.
///
/// `ONE` only when both operands are `ONE`; `ZERO` when exactly one is `ONE`
/// and the other `ZERO`; every other pair (including `ZERO, ZERO`) carries no
/// information and yields `UNKNOWN`.
pub fn combine_bit(a: TernaryBit, b: TernaryBit) -> TernaryBit {
    use TernaryBit::*;
    match (a, b) {
        (One, One) => One,
        (One, Zero) | (Zero, One) => Zero,
        (Zero, Zero) => Unknown,
        (Unknown, _) | (_, Unknown) => Unknown,
    }
}

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Bitmap with the low `count` bits set, sized for a vector of `len` slots.
pub(crate) fn prefix_mask(len: usize, count: usize) -> Words {
    debug_assert!(count <= len);
    let mut words: Words = smallvec![0u64; words_for(len)];
    let full = count / WORD_BITS;
    for w in &mut words[..full] {
        *w = u64::MAX;
    }
    let rem = count % WORD_BITS;
    if rem > 0 {
        words[full] = (1u64 << rem) - 1;
    }
    words
}

/// A fixed-length sequence of [`TernaryBit`]s. Position 0 is the oldest slot.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryVector {
    len: usize,
    presence: Words,
    known: Words,
}

impl TernaryVector {
    /// A vector of `len` slots, all unknown.
    pub fn unknown(len: usize) -> Self {
        let words = words_for(len);
        TernaryVector {
            len,
            presence: smallvec![0; words],
            known: smallvec![0; words],
        }
    }

    /// Builds a vector of length `present.len()` whose first `occupied`
    /// slots are known with the given presence; later slots are unknown.
    ///
    /// Panics if `occupied > present.len()`.
    pub fn from_memberships(present: &[bool], occupied: usize) -> Self {
        assert!(
            occupied <= present.len(),
            "occupied slots ({occupied}) exceed vector length ({})",
            present.len()
        );
        let len = present.len();
        let mut presence: Words = smallvec![0u64; words_for(len)];
        for (i, _) in present[..occupied].iter().enumerate().filter(|(_, &p)| p) {
            presence[i / WORD_BITS] |= 1 << (i % WORD_BITS);
        }
        TernaryVector {
            len,
            presence,
            known: prefix_mask(len, occupied),
        }
    }

    /// Builds a vector from an explicit bit per slot.
    pub fn from_bits<I: IntoIterator<Item = TernaryBit>>(bits: I) -> Self {
        let bits: Vec<TernaryBit> = bits.into_iter().collect();
        let mut v = TernaryVector::unknown(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            let (w, m) = (i / WORD_BITS, 1u64 << (i % WORD_BITS));
            match b {
                TernaryBit::One => {
                    v.presence[w] |= m;
                    v.known[w] |= m;
                }
                TernaryBit::Zero => v.known[w] |= m,
                TernaryBit::Unknown => {}
            }
        }
        v
    }

    /// Raw constructor used by the window; normalizes presence against known.
    pub(crate) fn from_words(len: usize, mut presence: Words, known: Words) -> Self {
        debug_assert_eq!(presence.len(), words_for(len));
        debug_assert_eq!(known.len(), words_for(len));
        for (p, k) in presence.iter_mut().zip(&known) {
            *p &= k;
        }
        TernaryVector {
            len,
            presence,
            known,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> TernaryBit {
        assert!(
            i < self.len,
            "slot {i} out of range for length {}",
            self.len
        );
        let (w, m) = (i / WORD_BITS, 1u64 << (i % WORD_BITS));
        if self.known[w] & m == 0 {
            TernaryBit::Unknown
        } else if self.presence[w] & m != 0 {
            TernaryBit::One
        } else {
            TernaryBit::Zero
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = TernaryBit> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Number of `ONE` slots.
    pub fn support(&self) -> u32 {
        self.presence.iter().map(|w| w.count_ones()).sum()
    }

    /// Number of slots that are not `UNKNOWN`.
    pub fn known_count(&self) -> u32 {
        self.known.iter().map(|w| w.count_ones()).sum()
    }

    /// Applies [`combine_bit`] slot by slot.
    pub fn combine(&self, other: &TernaryVector) -> Result<TernaryVector> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(self.combine_unchecked(other))
    }

    /// Slotwise combine for vectors already known to share a length.
    ///
    /// A result slot is known iff both inputs are known and at least one is
    /// `ONE`, i.e. the three table rows that do not produce `UNKNOWN`.
    pub(crate) fn combine_unchecked(&self, other: &TernaryVector) -> TernaryVector {
        debug_assert_eq!(self.len, other.len);
        let presence = self
            .presence
            .iter()
            .zip(&other.presence)
            .map(|(a, b)| a & b)
            .collect();
        let known = self
            .known
            .iter()
            .zip(&other.known)
            .zip(self.presence.iter().zip(&other.presence))
            .map(|((ka, kb), (pa, pb))| ka & kb & (pa | pb))
            .collect();
        TernaryVector {
            len: self.len,
            presence,
            known,
        }
    }
}

/// Renders one character per slot: `1`, `0` or `U`.
impl fmt::Display for TernaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.iter().try_for_each(|b| write!(f, "{}", b.as_char()))
    }
}

impl fmt::Debug for TernaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryVector({self})")
    }
}

impl FromStr for TernaryVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '1' => Ok(TernaryBit::One),
                '0' => Ok(TernaryBit::Zero),
                'U' | 'u' | 'Z' | 'z' => Ok(TernaryBit::Unknown),
                other => Err(Error::InvalidConfig(format!(
                    "invalid ternary digit {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(TernaryVector::from_bits)
    }
}
