//! Addressable Fibonacci heap.
//!
//! Items are ordered by `(key, value)`, so with unique values (the solver
//! stores one item per vertex, valued by vertex id) the minimum is unique
//! and ties on the key go to the smallest value.
//!
//! Amortized costs: `insert`, `decrease_key` and `find_min` are O(1);
//! `delete_min`, `delete` and an increasing `reassign_key` are O(log n).
//! Nodes live in an arena; a [`Handle`] carries a generation so a handle to
//! a removed item is rejected instead of aliasing a reused slot.

use thiserror::Error;

const NIL: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Handle {
    index: usize,
    generation: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum HeapError {
    #[error("heap handle refers to a removed item")]
    StaleHandle,
    #[error("decrease_key called with a larger key")]
    KeyIncrease,
}

#[derive(Debug, Clone)]
struct Node<K, V> {
    item: Option<(K, V)>,
    parent: usize,
    child: usize,
    left: usize,
    right: usize,
    degree: u32,
    marked: bool,
    generation: u32,
}

#[derive(Debug, Clone)]
pub struct FibHeap<K, V> {
    nodes: Vec<Node<K, V>>,
    free: Vec<usize>,
    min: usize,
    len: usize,
    comparisons: u64,
}

impl<K: Ord, V: Ord> Default for FibHeap<K, V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord, V: Ord> FibHeap<K, V> {
    pub fn new() -> Self {
        FibHeap {
            nodes: Vec::new(),
            free: Vec::new(),
            min: NIL,
            len: 0,
            comparisons: 0,
        }
    }

    pub fn with_capacity(cap: usize) -> Self {
        FibHeap {
            nodes: Vec::with_capacity(cap),
            ..Self::new()
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of key comparisons performed so far.
    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    #[inline]
    fn less(&mut self, a: usize, b: usize) -> bool {
        self.comparisons += 1;
        let (x, y) = (self.item(a), self.item(b));
        (&x.0, &x.1) < (&y.0, &y.1)
    }

    #[inline]
    fn item(&self, i: usize) -> &(K, V) {
        self.nodes[i].item.as_ref().expect("heap node is live")
    }

    fn check(&self, h: Handle) -> Result<usize, HeapError> {
        match self.nodes.get(h.index) {
            Some(n) if n.item.is_some() && n.generation == h.generation => Ok(h.index),
            _ => Err(HeapError::StaleHandle),
        }
    }

    pub fn contains(&self, h: Handle) -> bool {
        self.check(h).is_ok()
    }

    pub fn get(&self, h: Handle) -> Result<(&K, &V), HeapError> {
        let i = self.check(h)?;
        let (k, v) = self.item(i);
        Ok((k, v))
    }

    pub fn insert(&mut self, key: K, value: V) -> Handle {
        let index = match self.free.pop() {
            Some(i) => {
                let generation = self.nodes[i].generation.wrapping_add(1);
                self.nodes[i] = Node {
                    item: Some((key, value)),
                    parent: NIL,
                    child: NIL,
                    left: i,
                    right: i,
                    degree: 0,
                    marked: false,
                    generation,
                };
                i
            }
            None => {
                let i = self.nodes.len();
                self.nodes.push(Node {
                    item: Some((key, value)),
                    parent: NIL,
                    child: NIL,
                    left: i,
                    right: i,
                    degree: 0,
                    marked: false,
                    generation: 0,
                });
                i
            }
        };
        self.add_root(index);
        self.len += 1;
        Handle {
            index,
            generation: self.nodes[index].generation,
        }
    }

    pub fn find_min(&self) -> Option<(&K, &V)> {
        if self.min == NIL {
            None
        } else {
            let (k, v) = self.item(self.min);
            Some((k, v))
        }
    }

    pub fn min_handle(&self) -> Option<Handle> {
        (self.min != NIL).then(|| Handle {
            index: self.min,
            generation: self.nodes[self.min].generation,
        })
    }

    /// Lowers the key of `h`. Equal keys are accepted as a no-op.
    pub fn decrease_key(&mut self, h: Handle, key: K) -> Result<(), HeapError> {
        let i = self.check(h)?;
        self.comparisons += 1;
        let slot = &mut self.nodes[i].item.as_mut().expect("checked live").0;
        if key > *slot {
            return Err(HeapError::KeyIncrease);
        }
        *slot = key;
        let p = self.nodes[i].parent;
        if p != NIL && self.less(i, p) {
            self.cut(i, p);
            self.cascading_cut(p);
        }
        if self.less(i, self.min) {
            self.min = i;
        }
        Ok(())
    }

    /// Replaces the key of `h` in either direction. Decreases are done in
    /// place; increases remove and re-insert, which issues a new handle.
    pub fn reassign_key(&mut self, h: Handle, key: K) -> Result<Handle, HeapError> {
        let i = self.check(h)?;
        self.comparisons += 1;
        if key <= self.item(i).0 {
            self.decrease_key(h, key)?;
            return Ok(h);
        }
        let (_, value) = self.remove(i);
        Ok(self.insert(key, value))
    }

    pub fn delete(&mut self, h: Handle) -> Result<(K, V), HeapError> {
        let i = self.check(h)?;
        Ok(self.remove(i))
    }

    pub fn delete_min(&mut self) -> Option<(K, V)> {
        if self.min == NIL {
            None
        } else {
            Some(self.extract(self.min))
        }
    }

    fn remove(&mut self, i: usize) -> (K, V) {
        let p = self.nodes[i].parent;
        if p != NIL {
            self.cut(i, p);
            self.cascading_cut(p);
        }
        // `i` is now a root; extracting it as if it were the minimum is valid
        // because consolidation recomputes the minimum from scratch.
        self.extract(i)
    }

    /// Removes root `z`, promotes its children and consolidates.
    fn extract(&mut self, z: usize) -> (K, V) {
        debug_assert_eq!(self.nodes[z].parent, NIL);
        let mut children = Vec::with_capacity(self.nodes[z].degree as usize);
        let first = self.nodes[z].child;
        if first != NIL {
            let mut c = first;
            loop {
                children.push(c);
                c = self.nodes[c].right;
                if c == first {
                    break;
                }
            }
            self.nodes[z].child = NIL;
        }
        let right = self.nodes[z].right;
        self.unlink(z);
        self.min = if right == z { NIL } else { right };
        for c in children {
            self.unlink(c);
            self.nodes[c].marked = false;
            self.add_root(c);
        }
        if self.min != NIL {
            self.consolidate();
        }
        self.len -= 1;
        self.free.push(z);
        self.nodes[z].item.take().expect("extracted node is live")
    }

    fn add_root(&mut self, i: usize) {
        self.nodes[i].parent = NIL;
        if self.min == NIL {
            self.nodes[i].left = i;
            self.nodes[i].right = i;
            self.min = i;
        } else {
            let m = self.min;
            let r = self.nodes[m].right;
            self.nodes[i].left = m;
            self.nodes[i].right = r;
            self.nodes[m].right = i;
            self.nodes[r].left = i;
            if self.less(i, m) {
                self.min = i;
            }
        }
    }

    /// Removes `i` from its sibling ring, leaving it as a singleton ring.
    fn unlink(&mut self, i: usize) {
        let (l, r) = (self.nodes[i].left, self.nodes[i].right);
        self.nodes[l].right = r;
        self.nodes[r].left = l;
        self.nodes[i].left = i;
        self.nodes[i].right = i;
    }

    fn cut(&mut self, i: usize, p: usize) {
        if self.nodes[p].child == i {
            let r = self.nodes[i].right;
            self.nodes[p].child = if r == i { NIL } else { r };
        }
        self.unlink(i);
        self.nodes[p].degree -= 1;
        self.nodes[i].marked = false;
        self.add_root(i);
    }

    fn cascading_cut(&mut self, mut p: usize) {
        loop {
            let gp = self.nodes[p].parent;
            if gp == NIL {
                return;
            }
            if !self.nodes[p].marked {
                self.nodes[p].marked = true;
                return;
            }
            self.cut(p, gp);
            p = gp;
        }
    }

    fn consolidate(&mut self) {
        let mut roots = Vec::new();
        let start = self.min;
        let mut r = start;
        loop {
            roots.push(r);
            r = self.nodes[r].right;
            if r == start {
                break;
            }
        }
        let mut by_degree: Vec<usize> = vec![NIL; 64];
        for mut x in roots {
            self.unlink(x);
            let mut d = self.nodes[x].degree as usize;
            while by_degree[d] != NIL {
                let mut y = by_degree[d];
                if self.less(y, x) {
                    std::mem::swap(&mut x, &mut y);
                }
                self.link(y, x);
                by_degree[d] = NIL;
                d += 1;
            }
            by_degree[d] = x;
        }
        self.min = NIL;
        for x in by_degree.into_iter().filter(|&x| x != NIL) {
            self.add_root(x);
        }
    }

    /// Makes root `y` a child of root `x`.
    fn link(&mut self, y: usize, x: usize) {
        self.nodes[y].parent = x;
        self.nodes[y].marked = false;
        let c = self.nodes[x].child;
        if c == NIL {
            self.nodes[y].left = y;
            self.nodes[y].right = y;
            self.nodes[x].child = y;
        } else {
            let r = self.nodes[c].right;
            self.nodes[y].left = c;
            self.nodes[y].right = r;
            self.nodes[c].right = y;
            self.nodes[r].left = y;
        }
        self.nodes[x].degree += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basic_min() {
        let mut h: FibHeap<i64, u32> = FibHeap::new();
        assert!(h.find_min().is_none());
        h.insert(5, 0);
        assert_eq!(h.find_min(), Some((&5, &0)));
        h.insert(2, 1);
        h.insert(7, 2);
        h.insert(2, 3);
        assert_eq!(h.find_min().map(|(k, _)| *k), Some(2));
    }

    #[test]
    fn infinite_keys_lose_to_finite() {
        use crate::scalar::Extended;
        let mut h: FibHeap<Extended<i64>, u32> = FibHeap::new();
        h.insert(Extended::PlusInf, 0);
        h.insert(Extended::Finite(3), 1);
        assert_eq!(h.find_min().map(|(k, _)| *k), Some(Extended::Finite(3)));
    }

    #[test]
    fn decrease_and_reassign() {
        let mut h: FibHeap<i64, u32> = FibHeap::new();
        h.insert(5, 0);
        let a = h.insert(7, 1);
        h.decrease_key(a, 3).unwrap();
        assert_eq!(h.find_min(), Some((&3, &1)));
        h.decrease_key(a, 3).unwrap();
        assert_eq!(h.decrease_key(a, 4), Err(HeapError::KeyIncrease));

        let b = h.reassign_key(a, 9).unwrap();
        assert_eq!(h.find_min(), Some((&5, &0)));
        assert!(!h.contains(a) || a == b);
        let c = h.reassign_key(b, 9).unwrap();
        assert_eq!(b, c);
        assert_eq!(h.get(c).unwrap(), (&9, &1));
    }

    #[test]
    fn stale_handles_are_rejected() {
        let mut h: FibHeap<i64, u32> = FibHeap::new();
        let a = h.insert(1, 0);
        assert_eq!(h.delete_min(), Some((1, 0)));
        let b = h.insert(4, 1);
        assert_eq!(h.decrease_key(a, 0), Err(HeapError::StaleHandle));
        assert_eq!(h.reassign_key(a, 0), Err(HeapError::StaleHandle));
        assert!(h.contains(b));
    }

    #[test]
    fn drains_in_order_with_deterministic_ties() {
        let mut h: FibHeap<i64, u32> = FibHeap::new();
        h.insert(2, 0);
        h.insert(1, 1);
        assert_eq!(h.delete_min(), Some((1, 1)));
        assert_eq!(h.delete_min(), Some((2, 0)));
        assert_eq!(h.delete_min(), None);

        for v in [4, 2, 9, 0, 7] {
            h.insert(3, v);
        }
        let order: Vec<u32> = std::iter::from_fn(|| h.delete_min().map(|(_, v)| v)).collect();
        assert_eq!(order, vec![0, 2, 4, 7, 9]);
    }

    #[test]
    fn heapsort_matches_sort() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut keys: Vec<i64> = (0..10_000).map(|_| rng.gen_range(-1000..1000)).collect();
        let mut h = FibHeap::new();
        for (i, &k) in keys.iter().enumerate() {
            h.insert(k, i);
        }
        let drained: Vec<i64> = std::iter::from_fn(|| h.delete_min().map(|(k, _)| k)).collect();
        keys.sort();
        assert_eq!(drained, keys);
    }

    #[test]
    fn random_inserts_track_sorted_min() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut h = FibHeap::new();
        let mut best = i64::MAX;
        for i in 0..100_000u32 {
            let k = rng.gen_range(-1_000_000..1_000_000);
            best = best.min(k);
            h.insert(k, i);
            assert_eq!(*h.find_min().unwrap().0, best);
        }
    }

    #[test]
    fn delete_arbitrary_items() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut h = FibHeap::new();
        let mut live = Vec::new();
        for i in 0..2000u32 {
            live.push((h.insert(rng.gen_range(0..500), i), i));
        }
        // Force structure by extracting a few minima first.
        for _ in 0..10 {
            let (_, v) = h.delete_min().unwrap();
            live.retain(|&(_, w)| w != v);
        }
        while !live.is_empty() {
            let idx = rng.gen_range(0..live.len());
            let (handle, v) = live.swap_remove(idx);
            assert_eq!(h.delete(handle).unwrap().1, v);
            assert_eq!(h.len(), live.len());
        }
        assert!(h.is_empty());
    }
}
