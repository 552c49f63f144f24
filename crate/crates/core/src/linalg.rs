//! Linear algebra over `F_2` on packed `u64` rows.

use std::collections::HashMap;
use std::hash::Hash;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut r = BitRow::zeros(len);
        for i in ones {
            r.flip(i);
        }
        r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if self.get(i) != v {
            self.flip(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// XOR restricted to words from `start_bit / 64` on.
    fn xor_from(&mut self, other: &BitRow, start_bit: usize) {
        let w = start_bit / 64;
        for (a, b) in self.words[w..].iter_mut().zip(&other.words[w..]) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set bit at or after `from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut w = from / 64;
        let mut word = self.words[w] & (!0u64 << (from % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w >= self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.next_one(0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + t)
            })
        })
    }
}

impl std::fmt::Debug for BitRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Assigns dense indices to coordinates in first-seen order.
#[derive(Debug, Clone)]
pub struct Indexer<T: Hash + Eq + Clone> {
    map: HashMap<T, usize>,
    items: Vec<T>,
}

impl<T: Hash + Eq + Clone> Default for Indexer<T> {
    fn default() -> Self {
        Indexer {
            map: HashMap::new(),
            items: Vec::new(),
        }
    }
}

impl<T: Hash + Eq + Clone> Indexer<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn index(&mut self, t: &T) -> usize {
        if let Some(&i) = self.map.get(t) {
            return i;
        }
        let i = self.items.len();
        self.map.insert(t.clone(), i);
        self.items.push(t.clone());
        i
    }

    pub fn get(&self, t: &T) -> Option<usize> {
        self.map.get(t).copied()
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Incremental echelon basis of the span of the images `v_0, v_1, ...` of input basis vectors,
/// tracking for each reduced row the input combination producing it.
#[derive(Debug, Clone)]
pub struct Reducer {
    ncoords: usize,
    ninputs: usize,
    rows: Vec<(BitRow, BitRow)>,
    pivot_of: HashMap<usize, usize>,
    kernel: Vec<BitRow>,
    pushed: usize,
}

impl Reducer {
    pub fn new(ncoords: usize, ninputs: usize) -> Self {
        Reducer {
            ncoords,
            ninputs,
            rows: Vec::new(),
            pivot_of: HashMap::new(),
            kernel: Vec::new(),
            pushed: 0,
        }
    }

    /// Builds from images given as coordinate-index sets.
    pub fn from_images(ncoords: usize, images: &[Vec<usize>]) -> Self {
        let mut r = Reducer::new(ncoords, images.len());
        for img in images {
            r.push(BitRow::from_ones(ncoords, img.iter().copied()));
        }
        r
    }

    fn reduce(&self, v: &mut BitRow, combo: &mut BitRow) -> Option<usize> {
        let mut pos = 0;
        while let Some(c) = v.next_one(pos) {
            match self.pivot_of.get(&c) {
                Some(&row) => {
                    let (rv, rc) = &self.rows[row];
                    v.xor_from(rv, c);
                    combo.xor_assign(rc);
                    pos = c + 1;
                }
                None => return Some(c),
            }
        }
        None
    }

    /// Adds the image of the next input basis vector.
    pub fn push(&mut self, v: BitRow) {
        assert!(self.pushed < self.ninputs, "more images than inputs");
        assert_eq!(v.len(), self.ncoords);
        let mut v = v;
        let mut combo = BitRow::zeros(self.ninputs);
        combo.flip(self.pushed);
        self.pushed += 1;
        match self.reduce(&mut v, &mut combo) {
            Some(c) => {
                self.pivot_of.insert(c, self.rows.len());
                self.rows.push((v, combo));
            }
            None => self.kernel.push(combo),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    /// Kernel basis in reduced row echelon form.
    pub fn kernel(&self) -> Vec<BitRow> {
        rref(self.kernel.clone())
    }

    /// Some input combination with image `target`, if one exists.
    pub fn solve(&self, target: &BitRow) -> Option<BitRow> {
        let mut v = target.clone();
        let mut combo = BitRow::zeros(self.ninputs);
        match self.reduce(&mut v, &mut combo) {
            Some(_) => None,
            None => Some(combo),
        }
    }

    pub fn in_span(&self, target: &BitRow) -> bool {
        self.solve(target).is_some()
    }
}

/// Reduced row echelon form with pivots on lowest set bits; zero rows dropped.
pub fn rref(rows: Vec<BitRow>) -> Vec<BitRow> {
    let mut rows: Vec<BitRow> = rows.into_iter().filter(|r| !r.is_zero()).collect();
    let mut out: Vec<(usize, BitRow)> = Vec::new();
    while let Some(mut r) = rows.pop() {
        for (p, b) in &out {
            if r.get(*p) {
                r.xor_assign(b);
            }
        }
        let Some(p) = r.first_one() else { continue };
        for (_, b) in out.iter_mut() {
            if b.get(p) {
                b.xor_assign(&r);
            }
        }
        out.push((p, r));
    }
    out.sort_by_key(|(p, _)| *p);
    out.into_iter().map(|(_, r)| r).collect()
}

pub fn rank(rows: &[BitRow]) -> usize {
    rref(rows.to_vec()).len()
}
