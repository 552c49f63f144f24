//! Ambient spaces: `Q_0 S^0`, `QS^n`, and `Q Σ^s X` for a finite cell description of `X`.
//!
//! A [`Space`] fixes the grading, the base classes the operations act on, and the base
//! Steenrod action. It also owns the memo tables used by the operation modules; those are
//! behind mutexes and never change observable results.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::algebra::{Generator, Monomial, Tensor};
use crate::error::{Error, Result};
use crate::seq::{enumerate_admissible, UpperSeq};
use crate::steenrod::BaseSteenrodAction;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub name: String,
    pub dim: u32,
}

/// Cells of a finite complex `X` (reduced homology basis) with the action of the dual
/// Steenrod operations on them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellComplex {
    cells: Vec<Cell>,
    action: BaseSteenrodAction,
}

impl CellComplex {
    pub fn new(cells: Vec<Cell>, action: BaseSteenrodAction) -> Result<Self> {
        let mut names = BTreeSet::new();
        for c in &cells {
            if c.dim < 1 {
                return Err(Error::SpaceDesc(format!("cell {} has dimension 0", c.name)));
            }
            if !names.insert(c.name.as_str()) {
                return Err(Error::SpaceDesc(format!("duplicate cell name {}", c.name)));
            }
        }
        for (r, from, to) in action.entries() {
            let Some(src) = cells.get(from) else {
                return Err(Error::SpaceDesc(format!("action source index {from} out of range")));
            };
            if r == 0 {
                return Err(Error::SpaceDesc("Sq^0 is the identity and cannot be set".into()));
            }
            for &t in to {
                let Some(dst) = cells.get(t) else {
                    return Err(Error::SpaceDesc(format!("action target index {t} out of range")));
                };
                if dst.dim as i64 != src.dim as i64 - r as i64 {
                    return Err(Error::SpaceDesc(format!(
                        "Sq^{r}_* {} -> {} does not drop dimension by {r}",
                        src.name, dst.name
                    )));
                }
            }
        }
        Ok(CellComplex { cells, action })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn action(&self) -> &BaseSteenrodAction {
        &self.action
    }

    pub fn top_dim(&self) -> u32 {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn cell_index(&self, name: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.name == name)
    }

    /// Two cells in dimensions 1 and 2 with trivial Steenrod action (`S^1 v S^2`).
    pub fn two_cell_test() -> Self {
        CellComplex::new(
            vec![
                Cell { name: "a".into(), dim: 1 },
                Cell { name: "b".into(), dim: 2 },
            ],
            BaseSteenrodAction::default(),
        )
        .expect("valid test complex")
    }
}

/// Which model a space is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceDesc {
    /// The base point component `Q_0 S^0` inside `QS^0`, with explicit component charge.
    Qs0,
    /// `QS^n`, `n >= 1`.
    Qsn { n: u32 },
    /// `Q Σ^shift X`; `shift = 2` is the double suspension model.
    Suspension { complex: Arc<CellComplex>, shift: u32 },
}

impl SpaceDesc {
    pub fn id(&self) -> String {
        match self {
            SpaceDesc::Qs0 => "qs0".to_string(),
            SpaceDesc::Qsn { n } => format!("qs{n}"),
            SpaceDesc::Suspension { complex, shift } => {
                let cells: Vec<String> = complex
                    .cells
                    .iter()
                    .map(|c| format!("{}:{}", c.name, c.dim))
                    .collect();
                format!("sigma{shift}[{}]", cells.join(","))
            }
        }
    }
}

impl fmt::Display for SpaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

type Memo<K> = Mutex<HashMap<K, Arc<Vec<Monomial>>>>;

#[derive(Default)]
pub(crate) struct Caches {
    pub q_monomial: Memo<(u32, Monomial)>,
    pub q_translation: Memo<(u32, i64)>,
    pub sq_monomial: Memo<(u32, Monomial)>,
    pub coproduct_gen: Mutex<HashMap<Generator, Arc<Tensor>>>,
    pub coproduct_mono: Mutex<HashMap<Monomial, Arc<Tensor>>>,
    pub generators: Mutex<HashMap<u32, Arc<Vec<Generator>>>>,
    pub decomposable_systems: Mutex<HashMap<u32, Arc<crate::hopf::DecomposableSystem>>>,
}

/// A space together with its memo tables. Always handled through `Arc<Space>`.
pub struct Space {
    desc: SpaceDesc,
    base_dims: Vec<u32>,
    pub(crate) caches: Caches,
    successor: OnceLock<Arc<Space>>,
    predecessor: OnceLock<Option<Arc<Space>>>,
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space({})", self.desc.id())
    }
}

impl Space {
    pub fn new(desc: SpaceDesc) -> Result<Arc<Space>> {
        let base_dims = match &desc {
            SpaceDesc::Qs0 => vec![0],
            SpaceDesc::Qsn { n } => {
                if *n == 0 {
                    return Err(Error::SpaceDesc(
                        "QS^0 is modelled by qs0 (the base point component)".into(),
                    ));
                }
                vec![*n]
            }
            SpaceDesc::Suspension { complex, shift } => {
                if *shift == 0 {
                    return Err(Error::SpaceDesc("suspension shift must be positive".into()));
                }
                if complex.cells.is_empty() {
                    return Err(Error::SpaceDesc("complex has no cells".into()));
                }
                complex.cells.iter().map(|c| c.dim + shift).collect()
            }
        };
        Ok(Arc::new(Space {
            desc,
            base_dims,
            caches: Caches::default(),
            successor: OnceLock::new(),
            predecessor: OnceLock::new(),
        }))
    }

    pub fn qs0() -> Arc<Space> {
        Space::new(SpaceDesc::Qs0).expect("qs0")
    }

    pub fn qsn(n: u32) -> Result<Arc<Space>> {
        Space::new(SpaceDesc::Qsn { n })
    }

    pub fn sigma2(complex: CellComplex) -> Arc<Space> {
        Space::new(SpaceDesc::Suspension {
            complex: Arc::new(complex),
            shift: 2,
        })
        .expect("nonempty complex")
    }

    pub fn desc(&self) -> &SpaceDesc {
        &self.desc
    }

    pub fn id(&self) -> String {
        self.desc.id()
    }

    /// True for the `Q_0 S^0` model, whose classes carry a component charge.
    pub fn has_charge(&self) -> bool {
        matches!(self.desc, SpaceDesc::Qs0)
    }

    pub fn base_count(&self) -> usize {
        self.base_dims.len()
    }

    pub fn base_dim(&self, base: u32) -> u32 {
        self.base_dims[base as usize]
    }

    pub fn base_name(&self, base: u32) -> String {
        match &self.desc {
            SpaceDesc::Qs0 => "[1]".to_string(),
            SpaceDesc::Qsn { n } => format!("x_{n}"),
            SpaceDesc::Suspension { complex, shift } => {
                let name = &complex.cells[base as usize].name;
                if *shift == 1 {
                    format!("s{name}")
                } else {
                    format!("s^{shift}{name}")
                }
            }
        }
    }

    pub fn base_by_name(&self, name: &str) -> Option<u32> {
        (0..self.base_count() as u32).find(|&b| {
            self.base_name(b) == name
                || matches!(&self.desc, SpaceDesc::Suspension { complex, .. }
                    if complex.cells[b as usize].name == name)
        })
    }

    pub fn same_as(&self, other: &Space) -> bool {
        std::ptr::eq(self, other) || self.desc == other.desc
    }

    /// The space receiving the homology suspension.
    pub fn successor(self: &Arc<Self>) -> Result<Arc<Space>> {
        if let Some(s) = self.successor.get() {
            return Ok(s.clone());
        }
        let desc = match &self.desc {
            SpaceDesc::Qs0 => SpaceDesc::Qsn { n: 1 },
            SpaceDesc::Qsn { n } => SpaceDesc::Qsn { n: n + 1 },
            SpaceDesc::Suspension { complex, shift } => SpaceDesc::Suspension {
                complex: complex.clone(),
                shift: shift + 1,
            },
        };
        let space = Space::new(desc)?;
        let space = self.successor.get_or_init(|| space).clone();
        // link back so desuspension of the successor finds this instance and its caches
        let _ = space.predecessor.set(Some(self.clone()));
        Ok(space)
    }

    /// The space whose suspension is this one, when it is among the supported models.
    pub fn predecessor(self: &Arc<Self>) -> Option<Arc<Space>> {
        self.predecessor
            .get_or_init(|| {
                let desc = match &self.desc {
                    SpaceDesc::Qs0 => return None,
                    SpaceDesc::Qsn { n: 1 } => SpaceDesc::Qs0,
                    SpaceDesc::Qsn { n } => SpaceDesc::Qsn { n: n - 1 },
                    SpaceDesc::Suspension { shift: 1, .. } => return None,
                    SpaceDesc::Suspension { complex, shift } => SpaceDesc::Suspension {
                        complex: complex.clone(),
                        shift: shift - 1,
                    },
                };
                let pred = Space::new(desc).ok()?;
                let _ = pred.successor.set(self.clone());
                Some(pred)
            })
            .clone()
    }

    /// The base class as a monomial: `[1]` in `Q_0 S^0`, the bottom generator otherwise.
    pub fn base_monomial(&self, base: u32) -> Monomial {
        if self.has_charge() {
            Monomial::translation(1)
        } else {
            Monomial::generator(Generator::new(base, UpperSeq::empty()))
        }
    }

    /// Polynomial generators of the given positive dimension, in canonical order.
    pub fn generators_of_degree(&self, degree: u32) -> Arc<Vec<Generator>> {
        if let Some(g) = self.caches.generators.lock().get(&degree) {
            return g.clone();
        }
        let mut out = Vec::new();
        if degree > 0 {
            for base in 0..self.base_count() as u32 {
                let bd = self.base_dim(base) as i64;
                for seq in enumerate_admissible(degree as i64, bd, bd, None) {
                    if self.has_charge() && seq.is_empty() {
                        continue;
                    }
                    out.push(Generator::new(base, seq));
                }
            }
        }
        out.sort();
        let out = Arc::new(out);
        self.caches.generators.lock().insert(degree, out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn successor_chain() {
        let s0 = Space::qs0();
        let s1 = s0.successor().unwrap();
        assert_eq!(s1.desc(), &SpaceDesc::Qsn { n: 1 });
        assert!(Arc::ptr_eq(&s1.predecessor().unwrap(), &s0));
        let s2 = s1.successor().unwrap();
        assert_eq!(s2.base_dim(0), 2);
        assert!(s0.predecessor().is_none());
    }

    #[test]
    fn complex_validation() {
        let mut action = BaseSteenrodAction::default();
        action.set(1, 1, vec![0]);
        let ok = CellComplex::new(
            vec![
                Cell { name: "a".into(), dim: 1 },
                Cell { name: "b".into(), dim: 2 },
            ],
            action.clone(),
        );
        assert!(ok.is_ok());
        let mut bad = BaseSteenrodAction::default();
        bad.set(2, 1, vec![0]);
        assert!(CellComplex::new(
            vec![
                Cell { name: "a".into(), dim: 1 },
                Cell { name: "b".into(), dim: 2 },
            ],
            bad
        )
        .is_err());
        assert!(CellComplex::new(
            vec![
                Cell { name: "a".into(), dim: 1 },
                Cell { name: "a".into(), dim: 2 },
            ],
            BaseSteenrodAction::default()
        )
        .is_err());
    }

    #[test]
    fn sigma2_base_dims() {
        let s = Space::sigma2(CellComplex::two_cell_test());
        assert_eq!(s.base_dim(0), 3);
        assert_eq!(s.base_dim(1), 4);
        assert_eq!(s.base_name(1), "s^2b");
        assert_eq!(s.predecessor().unwrap().base_dim(0), 2);
    }
}
