//! Ground-set representation and element sets.
//!
//! Elements are dense indices in `[0, n)`. Working sets pair a bitset with a
//! sorted id list: the bitset gives O(1) membership during greedy scans, the
//! sorted list gives cheap ordered iteration for objective evaluation.

/// Identifier of a ground-set element; dense in `[0, n)` for the owning set.
pub type ElementId = u32;

/// What kind of payload the ground set indexes into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadKind {
    Vectors,
    Graph,
    SetSystem,
    Abstract,
}

/// The ground set `V`: a size plus a payload tag. Objectives own the actual
/// data; this type only fixes `n` and the payload family.
#[derive(Debug, Clone)]
pub struct GroundSet {
    n: usize,
    payload_kind: PayloadKind,
}

impl GroundSet {
    pub fn new(n: usize, payload_kind: PayloadKind) -> Self {
        assert!(n >= 1, "ground set must contain at least one element");
        GroundSet { n, payload_kind }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn payload_kind(&self) -> PayloadKind {
        self.payload_kind
    }

    /// All element ids, in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        0..self.n as ElementId
    }

    pub fn element_vec(&self) -> Vec<ElementId> {
        self.elements().collect()
    }
}

/// A subset of a ground set: bitset for membership, sorted ids for iteration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ElementSet {
    words: Vec<u64>,
    sorted: Vec<ElementId>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        ElementSet {
            words: vec![0; n.div_ceil(64)],
            sorted: Vec::new(),
        }
    }

    pub fn from_slice(ids: &[ElementId]) -> Self {
        let mut s = ElementSet::new();
        for &e in ids {
            s.insert(e);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn contains(&self, e: ElementId) -> bool {
        let (w, b) = (e as usize / 64, e as usize % 64);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    /// Insert `e`; returns false if it was already present.
    pub fn insert(&mut self, e: ElementId) -> bool {
        let (w, b) = (e as usize / 64, e as usize % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        if self.words[w] & (1 << b) != 0 {
            return false;
        }
        self.words[w] |= 1 << b;
        let pos = self.sorted.partition_point(|&x| x < e);
        self.sorted.insert(pos, e);
        true
    }

    /// Remove `e`; returns false if it was absent.
    pub fn remove(&mut self, e: ElementId) -> bool {
        let (w, b) = (e as usize / 64, e as usize % 64);
        if w >= self.words.len() || self.words[w] & (1 << b) == 0 {
            return false;
        }
        self.words[w] &= !(1 << b);
        let pos = self.sorted.partition_point(|&x| x < e);
        self.sorted.remove(pos);
        true
    }

    /// Member ids in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.sorted.iter().copied()
    }

    pub fn as_sorted_slice(&self) -> &[ElementId] {
        &self.sorted
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    /// The set as a bitmask; only valid for ground sets with n <= 64.
    pub fn as_mask(&self) -> u64 {
        debug_assert!(self.sorted.last().is_none_or(|&e| e < 64));
        self.words.first().copied().unwrap_or(0)
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut s = ElementSet::new();
        for b in 0..64 {
            if mask & (1 << b) != 0 {
                s.insert(b as ElementId);
            }
        }
        s
    }
}

impl FromIterator<ElementId> for ElementSet {
    fn from_iter<T: IntoIterator<Item = ElementId>>(iter: T) -> Self {
        let mut s = ElementSet::new();
        for e in iter {
            s.insert(e);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insert_contains_remove() {
        let mut s = ElementSet::new();
        assert!(s.insert(5));
        assert!(!s.insert(5));
        assert!(s.contains(5));
        assert!(!s.contains(4));
        assert!(s.insert(2));
        assert_eq!(s.as_sorted_slice(), &[2, 5]);
        assert!(s.remove(5));
        assert!(!s.remove(5));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn mask_round_trip() {
        let s = ElementSet::from_slice(&[0, 3, 17, 63]);
        assert_eq!(ElementSet::from_mask(s.as_mask()), s);
    }

    proptest! {
        #[test]
        fn matches_reference_set(ops in proptest::collection::vec((0u32..200, any::<bool>()), 0..100)) {
            let mut mine = ElementSet::new();
            let mut reference = std::collections::BTreeSet::new();
            for (e, add) in ops {
                if add {
                    prop_assert_eq!(mine.insert(e), reference.insert(e));
                } else {
                    prop_assert_eq!(mine.remove(e), reference.remove(&e));
                }
            }
            let got: Vec<u32> = mine.iter().collect();
            let want: Vec<u32> = reference.into_iter().collect();
            prop_assert_eq!(got, want);
        }
    }
}
