//! Global taxon indexing, cluster bit-strings, and radix-sort deduplication.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::model::{PhyloTree, TreeCollection, VertexId};

/// Bijection between taxon names and indices `0..n`.
///
/// Indices follow lexicographic order of the names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSpace {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl LabelSpace {
    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let index: BTreeMap<String, usize> = names.into_iter().map(|s| (s.into(), 0)).collect();
        let names: Vec<String> = index.keys().cloned().collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        LabelSpace { names, index }
    }

    /// `n`, the number of taxa.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Bit-string of a set of names; `None` if a name is unknown.
    pub fn encode<'a, I>(&self, names: I) -> Option<BitString>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut bits = BitString::zeros(self.len());
        for name in names {
            bits.set(self.index_of(name)?);
        }
        Some(bits)
    }

    /// Names of the set bits, in index order.
    pub fn decode<'a>(&'a self, bits: &'a BitString) -> impl Iterator<Item = &'a str> + 'a {
        bits.ones().map(move |i| self.name(i))
    }
}

/// The label space over the union of all leaf names in `collection`.
pub fn build_label_space(collection: &TreeCollection) -> LabelSpace {
    LabelSpace::from_names(collection.taxa())
}

const WORD_BITS: usize = 64;

/// Fixed-width bit vector encoding a cluster.
///
/// Bit `i` lives in word `i / 64` at position `63 - i % 64`, so comparing
/// the word vectors compares the strings `b0 b1 ... b(n-1)`
/// lexicographically. Unused trailing bits are always zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    words: Vec<u64>,
    width: usize,
}

impl BitString {
    pub fn zeros(width: usize) -> Self {
        BitString {
            words: vec![0; width.div_ceil(WORD_BITS)],
            width,
        }
    }

    pub fn ones_of_width(width: usize) -> Self {
        let mut bits = BitString::zeros(width);
        for i in 0..width {
            bits.set(i);
        }
        bits
    }

    pub fn singleton(width: usize, index: usize) -> Self {
        let mut bits = BitString::zeros(width);
        bits.set(index);
        bits
    }

    fn mask(index: usize) -> u64 {
        1u64 << (WORD_BITS - 1 - index % WORD_BITS)
    }

    pub fn set(&mut self, index: usize) {
        assert!(
            index < self.width,
            "bit {index} outside width {}",
            self.width
        );
        self.words[index / WORD_BITS] |= Self::mask(index);
    }

    pub fn clear(&mut self, index: usize) {
        assert!(
            index < self.width,
            "bit {index} outside width {}",
            self.width
        );
        self.words[index / WORD_BITS] &= !Self::mask(index);
    }

    pub fn get(&self, index: usize) -> bool {
        index < self.width && self.words[index / WORD_BITS] & Self::mask(index) != 0
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn or_assign(&mut self, other: &BitString) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and(&self, other: &BitString) -> BitString {
        debug_assert_eq!(self.width, other.width);
        BitString {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            width: self.width,
        }
    }

    pub fn and_not(&self, other: &BitString) -> BitString {
        debug_assert_eq!(self.width, other.width);
        BitString {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
            width: self.width,
        }
    }

    pub fn intersects(&self, other: &BitString) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset_of(&self, other: &BitString) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_proper_subset_of(&self, other: &BitString) -> bool {
        self != other && self.is_subset_of(other)
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let lead = rest.leading_zeros() as usize;
                rest &= !(1u64 << (WORD_BITS - 1 - lead));
                Some(w * WORD_BITS + lead)
            })
        })
    }

    /// Hex digits of `b0 b1 ... b(n-1)`, four bits per digit with the lowest
    /// index first, zero-padded at the end.
    pub fn to_hex(&self) -> String {
        const DIGITS: &[u8; 16] = b"0123456789abcdef";
        let digits = self.width.div_ceil(4);
        let mut out = String::with_capacity(digits);
        for d in 0..digits {
            let word = self.words[d * 4 / WORD_BITS];
            let shift = WORD_BITS - 4 - (d * 4) % WORD_BITS;
            out.push(DIGITS[((word >> shift) & 0xf) as usize] as char);
        }
        out
    }

    /// Inverse of [`to_hex`](Self::to_hex).
    pub fn from_hex(width: usize, hex: &str) -> Option<Self> {
        if hex.len() != width.div_ceil(4) {
            return None;
        }
        let mut bits = BitString::zeros(width);
        for (d, c) in hex.chars().enumerate() {
            let nibble = c.to_digit(16)? as usize;
            for j in 0..4 {
                if nibble & (8 >> j) != 0 {
                    let index = d * 4 + j;
                    if index >= width {
                        return None;
                    }
                    bits.set(index);
                }
            }
        }
        Some(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("taxon `{0}` is not in the label space")]
pub struct UnknownTaxon(pub String);

/// Bit-string of every vertex of `tree`, in post-order.
///
/// A leaf gets the single bit of its taxon; an internal vertex gets the OR
/// of its children.
pub fn collect_bitstrings(
    tree: &PhyloTree,
    space: &LabelSpace,
) -> Result<Vec<(VertexId, BitString)>, UnknownTaxon> {
    let order = tree.postorder();
    let mut slot: Vec<usize> = vec![usize::MAX; tree.vertex_count()];
    let mut out: Vec<(VertexId, BitString)> = Vec::with_capacity(order.len());
    for v in order {
        let bits = match tree.label(v) {
            Some(name) => {
                let i = space
                    .index_of(name)
                    .ok_or_else(|| UnknownTaxon(name.into()))?;
                BitString::singleton(space.len(), i)
            }
            None => {
                let mut bits = BitString::zeros(space.len());
                for &c in tree.children(v) {
                    bits.or_assign(&out[slot[c]].1);
                }
                bits
            }
        };
        slot[v] = out.len();
        out.push((v, bits));
    }
    Ok(out)
}

/// Sorts bit-strings lexicographically and drops duplicates.
///
/// LSD radix sort with one byte per digit, least significant byte of the
/// last word first. Digit positions on which every string agrees are
/// skipped.
pub fn sort_dedup(mut all: Vec<BitString>) -> Vec<BitString> {
    if all.len() > 1 {
        radix_sort(&mut all);
    }
    all.dedup();
    all
}

fn radix_sort(items: &mut Vec<BitString>) {
    let word_count = items[0].words.len();
    debug_assert!(items.iter().all(|b| b.words.len() == word_count));

    let mut scratch: Vec<BitString> = Vec::with_capacity(items.len());
    for w in (0..word_count).rev() {
        for byte in 0..8 {
            let shift = byte * 8;
            let digit = |b: &BitString| ((b.words[w] >> shift) & 0xff) as usize;

            let mut counts = [0usize; 257];
            for b in items.iter() {
                counts[digit(b) + 1] += 1;
            }
            if counts.contains(&items.len()) {
                continue;
            }
            for i in 1..257 {
                counts[i] += counts[i - 1];
            }

            scratch.clear();
            scratch.resize_with(items.len(), || BitString {
                words: Vec::new(),
                width: 0,
            });
            for b in items.drain(..) {
                let d = digit(&b);
                scratch[counts[d]] = b;
                counts[d] += 1;
            }
            core::mem::swap(items, &mut scratch);
        }
    }
}
