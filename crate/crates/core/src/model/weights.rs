//! Append-only Fenwick tree over integer weights.

/// Prefix-sum tree supporting `O(log m)` point updates, appends and
/// weighted search. Slots are never removed; a slot whose weight drops to
/// zero stays as a tombstone and can no longer be selected.
#[derive(Debug, Clone, Default)]
pub struct WeightTree {
    // 1-based Fenwick array; tree[0] unused.
    tree: Vec<u64>,
    values: Vec<u64>,
    total: u64,
}

#[inline]
fn lowbit(i: usize) -> usize {
    i & i.wrapping_neg()
}

impl WeightTree {
    pub fn new() -> Self {
        Self {
            tree: vec![0],
            values: Vec::new(),
            total: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, slot: usize) -> u64 {
        self.values[slot]
    }

    /// Appends a slot with weight `w` and returns its index.
    pub fn push(&mut self, w: u64) -> usize {
        let slot = self.values.len();
        let i = slot + 1;
        // tree[i] covers (i - lowbit(i), i].
        let covered = self.prefix(slot) - self.prefix(i - lowbit(i));
        self.tree.push(covered + w);
        self.values.push(w);
        self.total += w;
        slot
    }

    pub fn increment(&mut self, slot: usize) {
        self.values[slot] += 1;
        self.total += 1;
        let mut i = slot + 1;
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += lowbit(i);
        }
    }

    pub fn decrement(&mut self, slot: usize) {
        assert!(self.values[slot] > 0, "decrement of empty slot {slot}");
        self.values[slot] -= 1;
        self.total -= 1;
        let mut i = slot + 1;
        while i < self.tree.len() {
            self.tree[i] -= 1;
            i += lowbit(i);
        }
    }

    /// Sum of the first `n` slots.
    pub fn prefix(&self, n: usize) -> u64 {
        let mut i = n;
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i -= lowbit(i);
        }
        s
    }

    /// Smallest slot whose inclusive prefix sum exceeds `target`.
    ///
    /// Requires `target < total`.
    pub fn find(&self, target: u64) -> usize {
        debug_assert!(target < self.total);
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut rem = target;
        let mut step = if n == 0 {
            0
        } else {
            1 << (usize::BITS - 1 - n.leading_zeros())
        };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn find_respects_boundaries() {
        let mut t = WeightTree::new();
        for w in [1, 1, 2] {
            t.push(w);
        }
        assert_eq!(t.find(0), 0);
        assert_eq!(t.find(1), 1);
        assert_eq!(t.find(2), 2);
        assert_eq!(t.find(3), 2);
    }

    #[test]
    fn tombstones_are_skipped() {
        let mut t = WeightTree::new();
        t.push(1);
        t.push(2);
        t.push(1);
        t.decrement(1);
        t.decrement(1);
        assert_eq!(t.total(), 2);
        assert_eq!(t.find(0), 0);
        assert_eq!(t.find(1), 2);
    }

    proptest! {
        #[test]
        fn prefix_and_find_match_linear_scan(
            ws in proptest::collection::vec(0u64..20, 1..200),
            ops in proptest::collection::vec((0usize..200, any::<bool>()), 0..200),
        ) {
            let mut t = WeightTree::new();
            let mut naive = Vec::new();
            for &w in &ws {
                t.push(w);
                naive.push(w);
            }
            for (slot, up) in ops {
                let slot = slot % naive.len();
                if up {
                    t.increment(slot);
                    naive[slot] += 1;
                } else if naive[slot] > 0 {
                    t.decrement(slot);
                    naive[slot] -= 1;
                }
            }
            let mut acc = 0;
            for (i, &w) in naive.iter().enumerate() {
                prop_assert_eq!(t.prefix(i), acc);
                acc += w;
            }
            prop_assert_eq!(t.total(), acc);
            for target in 0..acc {
                let mut run = 0;
                let expect = naive.iter().position(|&w| { run += w; run > target }).unwrap();
                prop_assert_eq!(t.find(target), expect);
            }
        }
    }
}
