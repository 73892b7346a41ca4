//! Fixed-capacity bitsets used for adjacency rows and vertex sets.

/// A bitset over `0..capacity`. Capacity is fixed at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(capacity: usize) -> Self {
        Bitset {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    /// All bits in `0..capacity` set.
    pub fn full(capacity: usize) -> Self {
        let mut s = Bitset::new(capacity);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            *w = if capacity >= lo + 64 {
                u64::MAX
            } else if capacity > lo {
                (1u64 << (capacity - lo)) - 1
            } else {
                0
            };
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: u32) {
        self.words[v as usize / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: u32) {
        self.words[v as usize / 64] &= !(1 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.words[v as usize / 64] >> (v % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set bit, if any.
    pub fn first(&self) -> Option<u32> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some((i * 64 + w.trailing_zeros() as usize) as u32);
            }
        }
        None
    }

    pub fn intersect_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersection(&self, other: &Bitset) -> Bitset {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    /// Iterates set bits in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    Some((i * 64) as u32 + b)
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_iter_roundtrip() {
        let mut s = Bitset::new(130);
        for v in [0u32, 63, 64, 65, 129] {
            s.insert(v);
        }
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 65, 129]);
        assert_eq!(s.count(), 5);
        assert_eq!(s.first(), Some(0));
        s.remove(0);
        assert_eq!(s.first(), Some(63));
    }

    #[test]
    fn full_has_exact_capacity() {
        assert_eq!(Bitset::full(70).count(), 70);
        assert_eq!(Bitset::full(64).count(), 64);
        assert!(Bitset::full(64).contains(63));
    }
}
