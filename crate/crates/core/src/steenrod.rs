//! Dual Steenrod operations `Sq^r_*` via the Nishida relations and the dual Cartan formula.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{poly_mul, poly_square, Accumulator, Element, Generator, Monomial};
use crate::dyer_lashof::q_monomial;
use crate::space::{Space, SpaceDesc};

/// `Sq^r_*` on the cells of `X`: `(r, cell) -> cells`. Missing entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BaseSteenrodAction {
    table: BTreeMap<(u32, usize), Vec<usize>>,
}

impl BaseSteenrodAction {
    pub fn set(&mut self, r: u32, from: usize, to: Vec<usize>) {
        let mut to = to;
        to.sort_unstable();
        // repeated targets cancel mod 2
        let mut reduced: Vec<usize> = Vec::with_capacity(to.len());
        for t in to {
            if reduced.last() == Some(&t) {
                reduced.pop();
            } else {
                reduced.push(t);
            }
        }
        if reduced.is_empty() {
            self.table.remove(&(r, from));
        } else {
            self.table.insert((r, from), reduced);
        }
    }

    pub fn get(&self, r: u32, from: usize) -> &[usize] {
        self.table.get(&(r, from)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, usize, &Vec<usize>)> {
        self.table.iter().map(|(&(r, from), to)| (r, from, to))
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// `C(n, k) mod 2`, zero outside `0 <= k <= n`.
pub fn lucas_binom(n: i64, k: i64) -> bool {
    if n < 0 || k < 0 || k > n {
        return false;
    }
    (n & k) == k
}

fn sq_base(space: &Space, r: u32, base: u32) -> Vec<Monomial> {
    if r == 0 {
        return vec![space.base_monomial(base)];
    }
    match space.desc() {
        SpaceDesc::Suspension { complex, .. } => {
            let mut v: Vec<Monomial> = complex
                .action()
                .get(r, base as usize)
                .iter()
                .map(|&t| Monomial::generator(Generator::new(t as u32, Default::default())))
                .collect();
            v.sort_unstable();
            v
        }
        _ => Vec::new(),
    }
}

fn sq_generator(space: &Space, r: u32, g: &Generator) -> Vec<Monomial> {
    let Some(a) = g.seq().first() else {
        return sq_base(space, r, g.base());
    };
    let inner = match g.seq().len() {
        1 => space.base_monomial(g.base()),
        _ => Monomial::generator(Generator::new(g.base(), g.seq().tail())),
    };
    let (a, r) = (a as i64, r as i64);
    let mut acc = Accumulator::new();
    for t in 0..=r / 2 {
        if !lucas_binom(a - r, r - 2 * t) {
            continue;
        }
        let op = (a - r + t) as u32;
        for w in sq_monomial(space, t as u32, &inner).iter() {
            acc.extend(q_monomial(space, op, w).iter().cloned());
        }
    }
    acc.into_sorted()
}

pub(crate) fn sq_monomial(space: &Space, r: u32, m: &Monomial) -> Arc<Vec<Monomial>> {
    if r == 0 {
        return Arc::new(vec![m.clone()]);
    }
    if r > m.dim(space) || m.is_scalar() {
        return Arc::new(Vec::new());
    }
    let key = (r, m.clone());
    if let Some(v) = space.caches.sq_monomial.lock().get(&key) {
        return v.clone();
    }
    let value = if let Some(root) = m.sqrt() {
        if r % 2 == 1 {
            Vec::new()
        } else {
            poly_square(&sq_monomial(space, r / 2, &root))
        }
    } else if let (Some(g), 0) = (m.as_single_generator(), m.translation_part()) {
        sq_generator(space, r, g)
    } else {
        let (g, rest) = m.split_first().expect("non-scalar");
        let g = Monomial::generator(g);
        let mut acc = Accumulator::new();
        for i in 0..=r {
            let left = sq_monomial(space, i, &g);
            if left.is_empty() {
                continue;
            }
            let right = sq_monomial(space, r - i, &rest);
            acc.extend(poly_mul(&left, &right));
        }
        acc.into_sorted()
    };
    let value = Arc::new(value);
    space.caches.sq_monomial.lock().insert(key, value.clone());
    value
}

/// `Sq^r_* e`.
pub fn sq_lower(r: u32, e: &Element) -> Element {
    let space = e.space();
    let mut acc = Accumulator::new();
    for m in e.terms() {
        acc.extend(sq_monomial(space, r, m).iter().cloned());
    }
    Element::from_sorted(space, acc.into_sorted())
}

/// `Sq^r_* e = 0` for every `r > 0`.
#[allow(non_snake_case)]
pub fn is_A_annihilated(e: &Element) -> bool {
    let top = e.terms().iter().map(|m| m.dim(e.space())).max().unwrap_or(0);
    (1..=top).all(|r| sq_lower(r, e).is_zero())
}
