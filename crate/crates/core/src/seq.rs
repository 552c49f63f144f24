//! Index sequences for iterated operations.
//!
//! An [`UpperSeq`] `(i_1, ..., i_s)` names the composite `Q^{i_1} ... Q^{i_s}`, applied
//! innermost-first (the last entry acts first). A [`LowerSeq`] `(j_1, ..., j_s)` names
//! `Q_{j_1} ... Q_{j_s}` with the same convention. Over a class of dimension `d` the two are
//! related by `Q_j z = Q^{j + dim z} z`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Entries = SmallVec<[u32; 6]>;

/// Upper-indexed operation sequence `(i_1, ..., i_s)`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UpperSeq(pub(crate) Entries);

/// Lower-indexed operation sequence `(j_1, ..., j_s)`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LowerSeq(pub(crate) Entries);

/// Excess of a sequence. The empty sequence has infinite excess, which compares
/// greater than every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Excess {
    Finite(i64),
    Infinite,
}

impl Excess {
    pub fn is_finite(self) -> bool {
        matches!(self, Excess::Finite(_))
    }

    /// `self > value`, with the infinite sentinel exceeding everything.
    pub fn exceeds(self, value: i64) -> bool {
        match self {
            Excess::Finite(e) => e > value,
            Excess::Infinite => true,
        }
    }
}

impl PartialEq<i64> for Excess {
    fn eq(&self, other: &i64) -> bool {
        matches!(self, Excess::Finite(e) if e == other)
    }
}

impl PartialOrd<i64> for Excess {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(match self {
            Excess::Finite(e) => e.cmp(other),
            Excess::Infinite => Ordering::Greater,
        })
    }
}

impl fmt::Display for Excess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Excess::Finite(e) => write!(f, "{e}"),
            Excess::Infinite => f.write_str("inf"),
        }
    }
}

macro_rules! seq_common {
    ($ty:ident) => {
        impl $ty {
            pub fn new(entries: impl IntoIterator<Item = u32>) -> Self {
                $ty(entries.into_iter().collect())
            }

            pub fn empty() -> Self {
                $ty(Entries::new())
            }

            pub fn entries(&self) -> &[u32] {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn iter(&self) -> impl DoubleEndedIterator<Item = u32> + ExactSizeIterator + '_ {
                self.0.iter().copied()
            }
        }

        impl From<Vec<u32>> for $ty {
            fn from(v: Vec<u32>) -> Self {
                $ty(Entries::from_vec(v))
            }
        }

        impl From<&[u32]> for $ty {
            fn from(v: &[u32]) -> Self {
                $ty(Entries::from_slice(v))
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{:?}", stringify!($ty), self.0.as_slice())
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("(")?;
                for (k, e) in self.0.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
        }
    };
}

seq_common!(UpperSeq);
seq_common!(LowerSeq);

impl UpperSeq {
    /// `i_j <= 2 i_{j+1}` for every consecutive pair; the empty sequence is admissible.
    pub fn is_admissible(&self) -> bool {
        is_admissible(&self.0)
    }

    pub fn excess(&self) -> Excess {
        excess(&self.0)
    }

    /// Total degree raised by the composite.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&i| i as u64).sum()
    }

    pub fn upper_dim(&self, base_dim: i64) -> i64 {
        base_dim + self.degree() as i64
    }

    pub fn all_entries_odd(&self) -> bool {
        self.0.iter().all(|i| i % 2 == 1)
    }

    /// The sequence with its outermost operation removed.
    pub fn tail(&self) -> UpperSeq {
        UpperSeq(self.0.iter().skip(1).copied().collect())
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// Prepends an outer operation.
    pub fn prepend(&self, a: u32) -> UpperSeq {
        let mut v = Entries::with_capacity(self.len() + 1);
        v.push(a);
        v.extend_from_slice(&self.0);
        UpperSeq(v)
    }

    pub fn concat(&self, inner: &UpperSeq) -> UpperSeq {
        let mut v = self.0.clone();
        v.extend_from_slice(&inner.0);
        UpperSeq(v)
    }

    pub fn to_lower(&self, base_dim: i64) -> Result<LowerSeq> {
        upper_to_lower(self, base_dim)
    }
}

impl LowerSeq {
    pub fn is_nondecreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_strictly_increasing(&self) -> bool {
        is_strictly_increasing(self)
    }

    pub fn to_upper(&self, base_dim: i64) -> UpperSeq {
        lower_to_upper(self, base_dim)
    }
}

pub(crate) fn is_admissible(entries: &[u32]) -> bool {
    entries
        .windows(2)
        .all(|w| (w[0] as u64) <= 2 * w[1] as u64)
}

pub(crate) fn excess(entries: &[u32]) -> Excess {
    match entries.split_first() {
        None => Excess::Infinite,
        Some((&first, rest)) => {
            Excess::Finite(first as i64 - rest.iter().map(|&i| i as i64).sum::<i64>())
        }
    }
}

pub fn is_admissible_seq(seq: &UpperSeq) -> bool {
    seq.is_admissible()
}

pub fn upper_dim(seq: &UpperSeq, base_dim: i64) -> i64 {
    seq.upper_dim(base_dim)
}

/// Converts lower indices to upper ones, folding from the innermost operation.
pub fn lower_to_upper(seq: &LowerSeq, base_dim: i64) -> UpperSeq {
    let mut dim = base_dim;
    let mut out: Entries = SmallVec::from_elem(0, seq.len());
    for (k, &j) in seq.0.iter().enumerate().rev() {
        let i = j as i64 + dim;
        out[k] = u32::try_from(i).expect("upper index out of range");
        dim += i;
    }
    UpperSeq(out)
}

/// Inverse of [`lower_to_upper`]. Fails with [`Error::NegativeLowerIndex`] when some
/// operation sits below the dimension of the class it is applied to.
pub fn upper_to_lower(seq: &UpperSeq, base_dim: i64) -> Result<LowerSeq> {
    let mut dim = base_dim;
    let mut out: Entries = SmallVec::from_elem(0, seq.len());
    for (k, &i) in seq.0.iter().enumerate().rev() {
        let j = i as i64 - dim;
        if j < 0 {
            return Err(Error::NegativeLowerIndex {
                seq: seq.clone(),
                position: k,
                value: j,
            });
        }
        out[k] = j as u32;
        dim += i as i64;
    }
    Ok(LowerSeq(out))
}

pub fn is_strictly_increasing(seq: &LowerSeq) -> bool {
    seq.0.windows(2).all(|w| w[0] < w[1])
}

/// All admissible `I` of total dimension `degree` over a base of dimension `base_dim`, with
/// `excess(I) > min_excess` and, when `lower_entry_bound` is given, every lower index below
/// it. Lexicographic order.
///
/// Entries are positive: an admissible sequence containing a zero has all its zeros in front
/// and therefore nonpositive excess, so with `min_excess >= 0` nothing is lost. For negative
/// `min_excess` those sequences are still omitted (there are infinitely many of them).
pub fn enumerate_admissible(
    degree: i64,
    base_dim: i64,
    min_excess: i64,
    lower_entry_bound: Option<u32>,
) -> Vec<UpperSeq> {
    let mut out = Vec::new();
    if degree < base_dim {
        return out;
    }
    let total = degree - base_dim;
    let mut prefix: Entries = Entries::new();
    enumerate_rec(total, base_dim, min_excess, lower_entry_bound, &mut prefix, &mut out);
    out
}

fn enumerate_rec(
    remaining: i64,
    base_dim: i64,
    min_excess: i64,
    bound: Option<u32>,
    prefix: &mut Entries,
    out: &mut Vec<UpperSeq>,
) {
    if remaining == 0 {
        let seq = UpperSeq(prefix.clone());
        if seq.excess().exceeds(min_excess) && within_bound(&seq, base_dim, bound) {
            out.push(seq);
        }
        return;
    }
    // i_{k} <= 2 i_{k+1} means the next entry is at least ceil(prev / 2).
    let lo = prefix.last().map_or(1, |&p| p.div_ceil(2).max(1)) as i64;
    // Excess only decreases as entries are appended, so prune on the running value.
    if let Some((&first, rest)) = prefix.split_first() {
        let running = first as i64 - rest.iter().map(|&i| i as i64).sum::<i64>();
        if running - lo <= min_excess && remaining > 0 {
            return;
        }
    }
    for next in lo..=remaining {
        prefix.push(next as u32);
        enumerate_rec(remaining - next, base_dim, min_excess, bound, prefix, out);
        prefix.pop();
    }
}

fn within_bound(seq: &UpperSeq, base_dim: i64, bound: Option<u32>) -> bool {
    match bound {
        None => true,
        Some(b) => match upper_to_lower(seq, base_dim) {
            Ok(lower) => lower.0.iter().all(|&j| j < b),
            Err(_) => false,
        },
    }
}
