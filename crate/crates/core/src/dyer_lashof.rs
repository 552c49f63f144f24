//! Upper-indexed Dyer-Lashof operations `Q^a`: Cartan expansion, the square and zero boundary
//! cases, and Adem normalization to admissible sequences.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;

use crate::algebra::{evaluate_admissible, poly_mul, poly_square, Accumulator, Element, Generator, Monomial};
use crate::error::{Error, Result};
use crate::seq::UpperSeq;
use crate::space::Space;
use crate::steenrod::lucas_binom;

/// Adem relation for `Q^r Q^s`, `r > 2s`: the admissible pairs `(r+s-i, i)` with odd
/// coefficient `C(i-s-1, 2i-r)`.
pub fn adem_normalize(r: u32, s: u32) -> Result<Vec<(u32, u32)>> {
    if r <= 2 * s {
        return Err(Error::InvalidInput(format!("Q^{r}Q^{s} is already admissible")));
    }
    let (r, s) = (r as i64, s as i64);
    let mut out = Vec::new();
    for i in (r + 1) / 2..=r + s {
        if lucas_binom(i - s - 1, 2 * i - r) {
            out.push(((r + s - i) as u32, i as u32));
        }
    }
    Ok(out)
}

type ComposeMemo = Mutex<HashMap<(u32, UpperSeq), Arc<Vec<UpperSeq>>>>;

fn compose_memo() -> &'static ComposeMemo {
    static MEMO: OnceLock<ComposeMemo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `Q^a Q^J` for admissible `J`, as a mod-2 sum of admissible sequences.
pub(crate) fn compose(a: u32, seq: &UpperSeq) -> Arc<Vec<UpperSeq>> {
    match seq.first() {
        None => return Arc::new(vec![UpperSeq::from(vec![a])]),
        Some(j) if a <= 2 * j => return Arc::new(vec![seq.prepend(a)]),
        _ => {}
    }
    let key = (a, seq.clone());
    if let Some(v) = compose_memo().lock().get(&key) {
        return v.clone();
    }
    let s = seq.first().unwrap();
    let tail = seq.tail();
    let mut acc = Accumulator::new();
    for (outer, inner) in adem_normalize(a, s).expect("inadmissible pair") {
        for k in compose(inner, &tail).iter() {
            acc.extend(compose(outer, k).iter().cloned());
        }
    }
    let v = Arc::new(acc.into_sorted());
    compose_memo().lock().insert(key, v.clone());
    v
}

/// Rewrites an arbitrary sequence as a sum of admissible ones.
pub fn normalize_sequence(seq: &UpperSeq) -> Vec<UpperSeq> {
    let mut current = vec![UpperSeq::empty()];
    for a in seq.iter().rev() {
        let mut acc = Accumulator::new();
        for k in &current {
            acc.extend(compose(a, k).iter().cloned());
        }
        current = acc.into_sorted();
    }
    current
}

fn q_generator(space: &Space, a: u32, g: &Generator) -> Vec<Monomial> {
    let mut acc = Accumulator::new();
    for seq in compose(a, g.seq()).iter() {
        if let Some(m) = evaluate_admissible(space, seq, g.base()) {
            acc.toggle(m);
        }
    }
    acc.into_sorted()
}

pub(crate) fn q_translation(space: &Space, a: u32, k: i64) -> Arc<Vec<Monomial>> {
    if a == 0 {
        return Arc::new(vec![Monomial::translation(2 * k)]);
    }
    if k == 0 {
        return Arc::new(Vec::new());
    }
    if k == 1 {
        return Arc::new(vec![Monomial::generator(Generator::new(0, UpperSeq::from(vec![a])))]);
    }
    let key = (a, k);
    if let Some(v) = space.caches.q_translation.lock().get(&key) {
        return v.clone();
    }
    let value = if k % 2 == 0 {
        if a % 2 == 1 {
            Vec::new()
        } else {
            poly_square(&q_translation(space, a / 2, k / 2))
        }
    } else if k > 0 {
        let mut acc = Accumulator::new();
        for a1 in 0..=a {
            let left = q_translation(space, a1, 1);
            let right = q_translation(space, a - a1, k - 1);
            acc.extend(poly_mul(&left, &right));
        }
        acc.into_sorted()
    } else {
        // 0 = Q^a([n][-n]) isolates the a' = 0 term [2n] Q^a[-n]
        let n = -k;
        let mut acc = Accumulator::new();
        for a1 in 1..=a {
            let left = q_translation(space, a1, n);
            let right = q_translation(space, a - a1, k);
            acc.extend(poly_mul(&left, &right));
        }
        acc.into_sorted()
            .into_iter()
            .map(|m| m.shifted(-2 * n))
            .collect::<Vec<_>>()
    };
    let mut value = value;
    value.sort_unstable();
    let value = Arc::new(value);
    space.caches.q_translation.lock().insert(key, value.clone());
    value
}

pub(crate) fn q_monomial(space: &Space, a: u32, m: &Monomial) -> Arc<Vec<Monomial>> {
    let d = m.dim(space);
    if a < d {
        return Arc::new(Vec::new());
    }
    if a == d {
        return Arc::new(vec![m.square()]);
    }
    if m.is_scalar() {
        if space.has_charge() {
            return q_translation(space, a, m.translation_part());
        }
        return Arc::new(Vec::new());
    }
    let key = (a, m.clone());
    if let Some(v) = space.caches.q_monomial.lock().get(&key) {
        return v.clone();
    }
    let value = if let Some(root) = m.sqrt() {
        if a % 2 == 1 {
            Vec::new()
        } else {
            poly_square(&q_monomial(space, a / 2, &root))
        }
    } else if let (Some(g), 0) = (m.as_single_generator(), m.translation_part()) {
        q_generator(space, a, g)
    } else {
        let (g, rest) = m.split_first().expect("non-scalar");
        let g = Monomial::generator(g);
        let (dg, dr) = (g.dim(space), rest.dim(space));
        let mut acc = Accumulator::new();
        for a1 in dg..=a - dr {
            let left = q_monomial(space, a1, &g);
            if left.is_empty() {
                continue;
            }
            let right = q_monomial(space, a - a1, &rest);
            acc.extend(poly_mul(&left, &right));
        }
        acc.into_sorted()
    };
    let value = Arc::new(value);
    space.caches.q_monomial.lock().insert(key, value.clone());
    value
}

/// `Q^a e`, extended linearly.
pub fn apply_q(a: u32, e: &Element) -> Element {
    let space = e.space();
    let mut acc = Accumulator::new();
    for m in e.terms() {
        acc.extend(q_monomial(space, a, m).iter().cloned());
    }
    Element::from_sorted(space, acc.into_sorted())
}

/// `Q^I e = Q^{i_1}(... Q^{i_s} e)`.
pub fn apply_q_iterated(seq: &UpperSeq, e: &Element) -> Element {
    seq.iter().rev().fold(e.clone(), |acc, a| apply_q(a, &acc))
}
