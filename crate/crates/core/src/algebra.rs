//! The graded polynomial algebra over `F_2` on admissible-monomial generators.
//!
//! Coefficients live in the two-element field, so an element is a finite set of monomials and
//! addition is symmetric difference. In the `Q_0 S^0` model a monomial also carries an integer
//! translation `[k]`, and every class has a component charge.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::seq::{Excess, UpperSeq};
use crate::space::Space;

/// `Q^I` applied to a base class. Ordered by base class, then sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    base: u32,
    seq: UpperSeq,
}

impl Generator {
    pub fn new(base: u32, seq: UpperSeq) -> Self {
        Generator { base, seq }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn seq(&self) -> &UpperSeq {
        &self.seq
    }

    pub fn dim(&self, space: &Space) -> u32 {
        space.base_dim(self.base) + self.seq.degree() as u32
    }

    /// Component of `Q^I[1]`: `2^{l(I)}`.
    pub fn charge(&self) -> i64 {
        1i64 << self.seq.len()
    }

    /// Admissible with excess strictly above the base dimension.
    pub fn is_valid(&self, space: &Space) -> bool {
        if (self.base as usize) >= space.base_count() {
            return false;
        }
        if space.has_charge() && self.seq.is_empty() {
            return false;
        }
        self.seq.is_admissible()
            && self.seq.excess().exceeds(space.base_dim(self.base) as i64)
    }

    pub fn render(&self, space: &Space) -> String {
        let base = space.base_name(self.base);
        match self.seq.len() {
            0 => base,
            1 if space.has_charge() => format!("Q^{}{}", self.seq.entries()[0], base),
            1 => format!("Q^{} {}", self.seq.entries()[0], base),
            _ if space.has_charge() => format!("Q^{}{}", self.seq, base),
            _ => format!("Q^{} {}", self.seq, base),
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q^{}<{}>", self.seq, self.base)
    }
}

pub(crate) type Factors = SmallVec<[(Generator, u32); 4]>;

/// Product of generator powers, times a translation `[k]` in the `Q_0 S^0` model.
///
/// Canonical form: factors strictly increasing by generator, exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    factors: Factors,
    translation: i64,
}

impl Monomial {
    /// The unit: `[0]` in `Q_0 S^0`, the empty product otherwise.
    pub fn one() -> Self {
        Monomial {
            factors: Factors::new(),
            translation: 0,
        }
    }

    pub fn translation(k: i64) -> Self {
        Monomial {
            factors: Factors::new(),
            translation: k,
        }
    }

    pub fn generator(g: Generator) -> Self {
        let mut factors = Factors::new();
        factors.push((g, 1));
        Monomial {
            factors,
            translation: 0,
        }
    }

    /// Builds a monomial from arbitrary factors, merging repeats and dropping zero exponents.
    pub fn from_factors(factors: impl IntoIterator<Item = (Generator, u32)>, translation: i64) -> Self {
        let mut v: Factors = factors.into_iter().filter(|(_, e)| *e > 0).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out = Factors::new();
        for (g, e) in v {
            match out.last_mut() {
                Some((lg, le)) if *lg == g => *le += e,
                _ => out.push((g, e)),
            }
        }
        Monomial {
            factors: out,
            translation,
        }
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.factors
    }

    pub fn translation_part(&self) -> i64 {
        self.translation
    }

    pub fn with_translation(&self, k: i64) -> Monomial {
        Monomial {
            factors: self.factors.clone(),
            translation: k,
        }
    }

    pub fn shifted(&self, k: i64) -> Monomial {
        self.with_translation(self.translation + k)
    }

    /// No generator factors (a unit or a translation).
    pub fn is_scalar(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dim(&self, space: &Space) -> u32 {
        self.factors
            .iter()
            .map(|(g, e)| g.dim(space) * e)
            .sum()
    }

    pub fn charge(&self) -> i64 {
        self.factors
            .iter()
            .map(|(g, e)| g.charge() * *e as i64)
            .sum::<i64>()
            + self.translation
    }

    /// Total number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    /// A single generator to the first power (any translation).
    pub fn as_single_generator(&self) -> Option<&Generator> {
        match self.factors.as_slice() {
            [(g, 1)] => Some(g),
            _ => None,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Factors::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Monomial {
            factors: out,
            translation: self.translation + other.translation,
        }
    }

    pub fn square(&self) -> Monomial {
        self.pow2(1)
    }

    /// `self^(2^k)`.
    pub fn pow2(&self, k: u32) -> Monomial {
        Monomial {
            factors: self
                .factors
                .iter()
                .map(|(g, e)| (g.clone(), e << k))
                .collect(),
            translation: self.translation << k,
        }
    }

    /// Square root when every exponent and the translation are even.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.translation % 2 != 0 || self.factors.iter().any(|(_, e)| e % 2 != 0) {
            return None;
        }
        Some(Monomial {
            factors: self.factors.iter().map(|(g, e)| (g.clone(), e / 2)).collect(),
            translation: self.translation / 2,
        })
    }

    pub fn is_square(&self) -> bool {
        self.translation % 2 == 0 && self.factors.iter().all(|(_, e)| e % 2 == 0)
    }

    /// Splits off one copy of the first generator: `m = g * rest`.
    pub fn split_first(&self) -> Option<(Generator, Monomial)> {
        let (g, e) = self.factors.first()?;
        let mut rest = self.clone();
        if *e == 1 {
            rest.factors.remove(0);
        } else {
            rest.factors[0].1 -= 1;
        }
        Some((g.clone(), rest))
    }

    /// The monomial with the translation removed, and the translation.
    pub fn split_translation(&self) -> (Monomial, i64) {
        (self.with_translation(0), self.translation)
    }

    pub fn render(&self, space: &Space) -> String {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(g, e)| {
                let s = g.render(space);
                match (*e, g.seq().is_empty()) {
                    (1, _) => s,
                    (e, true) => format!("{s}^{e}"),
                    (e, false) => format!("({s})^{e}"),
                }
            })
            .collect();
        if space.has_charge() {
            let t = format!("[{}]", self.translation);
            if parts.is_empty() {
                return t;
            }
            let body = parts.join(" * ");
            return format!("{body}*{t}");
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        parts.join(" * ")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("M")?;
        f.debug_list().entries(self.factors.iter()).finish()?;
        if self.translation != 0 {
            write!(f, "[{}]", self.translation)?;
        }
        Ok(())
    }
}

/// Sum over `F_2`, accumulated by toggling membership.
#[derive(Debug, Clone)]
pub(crate) struct Accumulator<T: Hash + Eq>(HashSet<T>);

impl<T: Hash + Eq + Ord> Accumulator<T> {
    pub fn new() -> Self {
        Accumulator(HashSet::new())
    }

    pub fn toggle(&mut self, x: T) {
        if !self.0.remove(&x) {
            self.0.insert(x);
        }
    }

    pub fn extend(&mut self, xs: impl IntoIterator<Item = T>) {
        for x in xs {
            self.toggle(x);
        }
    }

    pub fn into_sorted(self) -> Vec<T> {
        let mut v: Vec<T> = self.0.into_iter().collect();
        v.sort_unstable();
        v
    }
}

/// `F_2`-sum of monomials as a sorted, duplicate-free vector.
pub(crate) fn sum_of<I: IntoIterator<Item = Monomial>>(terms: I) -> Vec<Monomial> {
    let mut acc = Accumulator::new();
    acc.extend(terms);
    acc.into_sorted()
}

pub(crate) fn poly_mul(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut acc = Accumulator::new();
    for x in a {
        for y in b {
            acc.toggle(x.mul(y));
        }
    }
    acc.into_sorted()
}

pub(crate) fn poly_square(a: &[Monomial]) -> Vec<Monomial> {
    let mut v: Vec<Monomial> = a.iter().map(Monomial::square).collect();
    v.sort_unstable();
    v
}

/// Internal tensor: sorted, duplicate-free list of monomial pairs.
pub(crate) type Tensor = Vec<(Monomial, Monomial)>;

pub(crate) fn tensor_mul(a: &Tensor, b: &Tensor) -> Tensor {
    let mut acc = Accumulator::new();
    for (x1, y1) in a {
        for (x2, y2) in b {
            acc.toggle((x1.mul(x2), y1.mul(y2)));
        }
    }
    acc.into_sorted()
}

pub(crate) fn tensor_square(a: &Tensor) -> Tensor {
    let mut v: Tensor = a.iter().map(|(x, y)| (x.square(), y.square())).collect();
    v.sort_unstable();
    v
}

pub(crate) fn tensor_of(a: &[Monomial], b: &[Monomial]) -> Tensor {
    let mut v = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            v.push((x.clone(), y.clone()));
        }
    }
    v.sort_unstable();
    v
}

/// A homology class: a finite sum of monomials in a fixed space.
#[derive(Clone)]
pub struct Element {
    space: Arc<Space>,
    terms: Vec<Monomial>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_as(&other.space) && self.terms == other.terms
    }
}

impl Eq for Element {}

impl Element {
    pub fn zero(space: &Arc<Space>) -> Self {
        Element {
            space: space.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(space: &Arc<Space>) -> Self {
        Element::from_monomial(space, Monomial::one())
    }

    pub fn from_monomial(space: &Arc<Space>, m: Monomial) -> Self {
        Element {
            space: space.clone(),
            terms: vec![m],
        }
    }

    pub fn from_terms(space: &Arc<Space>, terms: impl IntoIterator<Item = Monomial>) -> Self {
        Element {
            space: space.clone(),
            terms: sum_of(terms),
        }
    }

    pub(crate) fn from_sorted(space: &Arc<Space>, terms: Vec<Monomial>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0] < w[1]));
        Element {
            space: space.clone(),
            terms,
        }
    }

    /// `Q^I` applied to base class `base`, as a single generator. Fails unless the result is a
    /// polynomial generator; use [`crate::dyer_lashof::apply_q_iterated`] for general values.
    pub fn generator(space: &Arc<Space>, base: u32, seq: UpperSeq) -> Result<Self> {
        let g = Generator::new(base, seq);
        if !g.is_valid(space) {
            return Err(Error::InvalidInput(format!(
                "Q^{} on base {} is not a polynomial generator",
                g.seq(),
                space.base_name(base)
            )));
        }
        Ok(Element::from_monomial(space, Monomial::generator(g)))
    }

    /// `Q^I[1] * [-2^{l(I)}]` in `Q_0 S^0`.
    pub fn normalized_generator(space: &Arc<Space>, seq: UpperSeq) -> Result<Self> {
        if !space.has_charge() {
            return Err(Error::UnsupportedSpace(space.id()));
        }
        let g = Generator::new(0, seq);
        if !g.is_valid(space) {
            return Err(Error::InvalidInput(format!("Q^{}[1] is not a generator", g.seq())));
        }
        let k = g.charge();
        Ok(Element::from_monomial(
            space,
            Monomial::generator(g).with_translation(-k),
        ))
    }

    /// The translation class `[k]` in `Q_0 S^0` (or the unit elsewhere when `k = 0`).
    pub fn translation(space: &Arc<Space>, k: i64) -> Result<Self> {
        if !space.has_charge() && k != 0 {
            return Err(Error::UnsupportedSpace(space.id()));
        }
        Ok(Element::from_monomial(space, Monomial::translation(k)))
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Monomial> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.binary_search(m).is_ok()
    }

    fn check_space(&self, other: &Element) -> Result<()> {
        if self.space.same_as(&other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                left: self.space.id(),
                right: other.space.id(),
            })
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_space(other)?;
        let mut acc = Accumulator::new();
        acc.extend(self.terms.iter().cloned());
        acc.extend(other.terms.iter().cloned());
        Ok(Element::from_sorted(&self.space, acc.into_sorted()))
    }

    pub fn multiply(&self, other: &Element) -> Result<Element> {
        self.check_space(other)?;
        Ok(Element::from_sorted(
            &self.space,
            poly_mul(&self.terms, &other.terms),
        ))
    }

    pub fn square(&self) -> Element {
        Element::from_sorted(&self.space, poly_square(&self.terms))
    }

    pub fn pow(&self, n: u32) -> Element {
        let mut result = Element::one(&self.space);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.multiply(&base).expect("same space");
            }
            base = base.square();
            n >>= 1;
        }
        result
    }

    /// Multiplies by `[k]`.
    pub fn translate(&self, k: i64) -> Element {
        Element::from_terms(&self.space, self.terms.iter().map(|m| m.shifted(k)))
    }

    /// Common dimension of all terms; `None` for zero. Errors on mixed dimensions.
    pub fn dim(&self) -> Result<Option<u32>> {
        let mut dims = self.terms.iter().map(|m| m.dim(&self.space));
        let Some(first) = dims.next() else {
            return Ok(None);
        };
        if dims.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    /// Common charge of all terms (always 0 outside the `Q_0 S^0` model).
    pub fn charge(&self) -> Result<Option<i64>> {
        let mut charges = self.terms.iter().map(Monomial::charge);
        let Some(first) = charges.next() else {
            return Ok(None);
        };
        if charges.all(|c| c == first) {
            Ok(Some(first))
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.dim().is_ok() && self.charge().is_ok()
    }

    /// Splits into the part made of single generators (to the first power, any translation)
    /// and the decomposable remainder.
    pub fn split_decomposable(&self) -> (Element, Element) {
        let (gens, decs): (Vec<_>, Vec<_>) = self
            .terms
            .iter()
            .cloned()
            .partition(|m| m.as_single_generator().is_some());
        (
            Element::from_sorted(&self.space, gens),
            Element::from_sorted(&self.space, decs),
        )
    }

    /// True iff every monomial is a square; by Frobenius additivity the sum is then a square.
    pub fn is_square(&self) -> bool {
        self.terms.iter().all(Monomial::is_square)
    }

    pub fn sqrt_of_square(&self) -> Result<Element> {
        let roots: Option<Vec<Monomial>> = self.terms.iter().map(Monomial::sqrt).collect();
        let mut roots = roots.ok_or(Error::NotASquare)?;
        roots.sort_unstable();
        Ok(Element::from_sorted(&self.space, roots))
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|m| m.render(&self.space))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self.render())
    }
}

/// `F_2`-sum of monomial pairs: values of the coproduct.
#[derive(Clone)]
pub struct TensorElement {
    space: Arc<Space>,
    terms: Tensor,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_as(&other.space) && self.terms == other.terms
    }
}

impl Eq for TensorElement {}

impl TensorElement {
    pub(crate) fn from_sorted(space: &Arc<Space>, terms: Tensor) -> Self {
        TensorElement {
            space: space.clone(),
            terms,
        }
    }

    pub fn from_pairs(space: &Arc<Space>, pairs: impl IntoIterator<Item = (Monomial, Monomial)>) -> Self {
        let mut acc = Accumulator::new();
        acc.extend(pairs);
        TensorElement {
            space: space.clone(),
            terms: acc.into_sorted(),
        }
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn terms(&self) -> &[(Monomial, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        TensorElement::from_pairs(
            &self.space,
            self.terms.iter().chain(other.terms.iter()).cloned(),
        )
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(a, b)| format!("{} (x) {}", a.render(&self.space), b.render(&self.space)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor({})", self.render())
    }
}

/// Monomial basis of the (reduced) homology in `degree`. In the `Q_0 S^0` model `charge`
/// selects the component and the translation is chosen to land on it; elsewhere it must be
/// `None` (or `Some(0)`).
pub fn basis_enumerate(space: &Space, degree: u32, charge: Option<i64>) -> Vec<Monomial> {
    if degree == 0 {
        return Vec::new();
    }
    let mut gens: Vec<(Generator, u32)> = Vec::new();
    for d in 1..=degree {
        for g in space.generators_of_degree(d).iter() {
            gens.push((g.clone(), d));
        }
    }
    let target_charge = if space.has_charge() { charge.unwrap_or(0) } else { 0 };
    let mut out = Vec::new();
    let mut current: Factors = Factors::new();
    basis_rec(&gens, 0, degree, &mut current, &mut |factors| {
        let m = Monomial::from_factors(factors.iter().cloned(), 0);
        let m = if space.has_charge() {
            let k = target_charge - m.charge();
            m.with_translation(k)
        } else {
            m
        };
        out.push(m);
    });
    out.sort_unstable();
    out
}

fn basis_rec(
    gens: &[(Generator, u32)],
    start: usize,
    remaining: u32,
    current: &mut Factors,
    emit: &mut dyn FnMut(&Factors),
) {
    if remaining == 0 {
        emit(current);
        return;
    }
    for idx in start..gens.len() {
        let (g, d) = &gens[idx];
        if *d > remaining {
            continue;
        }
        let max_e = remaining / d;
        for e in 1..=max_e {
            current.push((g.clone(), e));
            basis_rec(gens, idx + 1, remaining - e * d, current, emit);
            current.pop();
        }
    }
}

/// Value of `Q^I` applied to the base class when `I` is admissible: a generator, a `2^k`-th
/// power, or zero (`None`).
pub fn evaluate_admissible(space: &Space, seq: &UpperSeq, base: u32) -> Option<Monomial> {
    debug_assert!(seq.is_admissible());
    let bd = space.base_dim(base) as i64;
    match seq.excess() {
        Excess::Infinite => Some(space.base_monomial(base)),
        Excess::Finite(e) if e < bd => None,
        Excess::Finite(e) if e == bd => evaluate_admissible(space, &seq.tail(), base).map(|m| m.square()),
        Excess::Finite(_) => Some(Monomial::generator(Generator::new(base, seq.clone()))),
    }
}
