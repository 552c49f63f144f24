//! Coalgebra structure: the coproduct, primitives, the square-root map `r` on the `Q_0 S^0`
//! model, and the primitive classes `p_I`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{
    basis_enumerate, tensor_mul, tensor_of, tensor_square, Accumulator, Element, Generator,
    Monomial, Tensor, TensorElement,
};
use crate::dyer_lashof::{apply_q_iterated, q_monomial};
use crate::error::{Error, Result};
use crate::linalg::{BitRow, Indexer, Reducer};
use crate::seq::{enumerate_admissible, UpperSeq};
use crate::space::Space;

fn coproduct_generator(space: &Space, g: &Generator) -> Arc<Tensor> {
    if let Some(t) = space.caches.coproduct_gen.lock().get(g) {
        return t.clone();
    }
    let value: Tensor = match g.seq().first() {
        None => {
            let b = space.base_monomial(g.base());
            if space.has_charge() {
                vec![(b.clone(), b)]
            } else {
                let mut v = vec![(b.clone(), Monomial::one()), (Monomial::one(), b)];
                v.sort_unstable();
                v
            }
        }
        Some(a) => {
            let inner = match g.seq().len() {
                1 => space.base_monomial(g.base()),
                _ => Monomial::generator(Generator::new(g.base(), g.seq().tail())),
            };
            let mut acc = Accumulator::new();
            for (z1, z2) in coproduct_monomial(space, &inner).iter() {
                let (d1, d2) = (z1.dim(space), z2.dim(space));
                if a < d1 + d2 {
                    continue;
                }
                for a1 in d1..=a - d2 {
                    let left = q_monomial(space, a1, z1);
                    if left.is_empty() {
                        continue;
                    }
                    let right = q_monomial(space, a - a1, z2);
                    acc.extend(tensor_of(&left, &right));
                }
            }
            acc.into_sorted()
        }
    };
    let value = Arc::new(value);
    space.caches.coproduct_gen.lock().insert(g.clone(), value.clone());
    value
}

pub(crate) fn coproduct_monomial(space: &Space, m: &Monomial) -> Arc<Tensor> {
    if m.is_scalar() {
        return Arc::new(vec![(m.clone(), m.clone())]);
    }
    if let Some(t) = space.caches.coproduct_mono.lock().get(m) {
        return t.clone();
    }
    let value = if let Some(root) = m.sqrt() {
        tensor_square(&coproduct_monomial(space, &root))
    } else {
        let (g, rest) = m.split_first().expect("non-scalar");
        tensor_mul(&coproduct_generator(space, &g), &coproduct_monomial(space, &rest))
    };
    let value = Arc::new(value);
    space.caches.coproduct_mono.lock().insert(m.clone(), value.clone());
    value
}

/// `psi(e)`.
pub fn coproduct(e: &Element) -> TensorElement {
    let space = e.space();
    let mut acc = Accumulator::new();
    for m in e.terms() {
        acc.extend(coproduct_monomial(space, m).iter().cloned());
    }
    TensorElement::from_sorted(space, acc.into_sorted())
}

fn reduced_monomial(space: &Space, m: &Monomial) -> Tensor {
    let mut acc = Accumulator::new();
    acc.extend(coproduct_monomial(space, m).iter().cloned());
    acc.toggle((m.clone(), Monomial::one()));
    acc.toggle((Monomial::one(), m.clone()));
    acc.into_sorted()
}

fn check_charge_zero(e: &Element) -> Result<()> {
    if e.space().has_charge() {
        for m in e.terms() {
            if m.charge() != 0 {
                return Err(Error::ChargeNonzero(m.charge()));
            }
        }
    }
    Ok(())
}

/// `psi(e) - e (x) 1 - 1 (x) e`; zero iff `e` is primitive.
pub fn reduced_coproduct(e: &Element) -> Result<TensorElement> {
    check_charge_zero(e)?;
    let space = e.space();
    let mut acc = Accumulator::new();
    for m in e.terms() {
        acc.extend(reduced_monomial(space, m));
    }
    Ok(TensorElement::from_sorted(space, acc.into_sorted()))
}

pub fn is_primitive(e: &Element) -> Result<bool> {
    Ok(reduced_coproduct(e)?.is_zero())
}

/// Kernel of a linear map given on a monomial basis, returned as elements.
pub(crate) fn kernel_elements<C>(space: &Arc<Space>, basis: &[Monomial], images: Vec<Vec<C>>) -> Vec<Element>
where
    C: std::hash::Hash + Eq + Clone,
{
    let mut coords = Indexer::new();
    let sets: Vec<Vec<usize>> = images
        .iter()
        .map(|img| img.iter().map(|c| coords.index(c)).collect())
        .collect();
    let red = Reducer::from_images(coords.len(), &sets);
    red.kernel()
        .into_iter()
        .map(|row| Element::from_terms(space, row.ones().map(|i| basis[i].clone())))
        .collect()
}

/// Basis of the primitives in `degree` (charge 0 in the `Q_0 S^0` model).
pub fn primitive_space(space: &Arc<Space>, degree: u32) -> Vec<Element> {
    let basis = basis_enumerate(space, degree, Some(0));
    let images: Vec<Tensor> = basis
        .par_iter()
        .map(|m| reduced_monomial(space, m))
        .collect();
    kernel_elements(space, &basis, images)
}

fn require_qs0(space: &Space) -> Result<()> {
    if space.has_charge() {
        Ok(())
    } else {
        Err(Error::UnsupportedSpace(space.id()))
    }
}

/// `Q^I[1] * [-2^{l(I)}]` when `m` has that form.
fn normalized_generator_seq(m: &Monomial) -> Option<&UpperSeq> {
    let g = m.as_single_generator()?;
    (m.translation_part() == -g.charge()).then(|| g.seq())
}

/// The square-root map on the span of `Q^I[1] * [-2^{l(I)}]`: halves all-even sequences and
/// kills sequences with an odd entry.
pub fn square_root_r(e: &Element) -> Result<Element> {
    let space = e.space();
    require_qs0(space)?;
    let mut out = Vec::new();
    for m in e.terms() {
        let seq = normalized_generator_seq(m).ok_or_else(|| {
            Error::UnsupportedOperand(format!("{} is not of the form Q^I[1]*[-2^l(I)]", m.render(space)))
        })?;
        if seq.iter().any(|i| i % 2 == 1) {
            continue;
        }
        let half = UpperSeq::new(seq.iter().map(|i| i / 2));
        let g = Generator::new(0, half);
        let k = g.charge();
        out.push(Monomial::generator(g).with_translation(-k));
    }
    Ok(Element::from_terms(space, out))
}

/// Monomials `Q^I[1] * [-2^length]` of the given degree and length.
pub fn normalized_generators(degree: u32, length: usize) -> Vec<Monomial> {
    enumerate_admissible(degree as i64, 0, 0, None)
        .into_iter()
        .filter(|s| s.len() == length && !s.is_empty())
        .map(|s| {
            let g = Generator::new(0, s);
            let k = g.charge();
            Monomial::generator(g).with_translation(-k)
        })
        .collect()
}

/// Kernel of `r` on the length-graded span of `Q^I[1] * [-2^length]` in `degree`.
pub fn kernel_of_r(space: &Arc<Space>, degree: u32, length: usize) -> Result<Vec<Element>> {
    require_qs0(space)?;
    let basis = normalized_generators(degree, length);
    let mut images = Vec::with_capacity(basis.len());
    for m in &basis {
        images.push(square_root_r(&Element::from_monomial(space, m.clone()))?.into_terms());
    }
    Ok(kernel_elements(space, &basis, images))
}

/// Linear system for decomposable corrections in one degree of `Q_0 S^0`, charge 0.
pub struct DecomposableSystem {
    monomials: Vec<Monomial>,
    coords: Indexer<(Monomial, Monomial)>,
    reducer: Reducer,
}

impl DecomposableSystem {
    fn build(space: &Space, degree: u32) -> Self {
        let monomials: Vec<Monomial> = basis_enumerate(space, degree, Some(0))
            .into_iter()
            .filter(|m| m.as_single_generator().is_none())
            .collect();
        let images: Vec<Tensor> = monomials
            .par_iter()
            .map(|m| reduced_monomial(space, m))
            .collect();
        let mut coords = Indexer::new();
        let sets: Vec<Vec<usize>> = images
            .iter()
            .map(|img| img.iter().map(|c| coords.index(c)).collect())
            .collect();
        let reducer = Reducer::from_images(coords.len(), &sets);
        DecomposableSystem {
            monomials,
            coords,
            reducer,
        }
    }

    pub fn size(&self) -> usize {
        self.monomials.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.reducer.kernel_dim()
    }

    fn solve(&self, target: &[(Monomial, Monomial)]) -> Option<Vec<Monomial>> {
        let mut ones = Vec::with_capacity(target.len());
        for c in target {
            ones.push(self.coords.get(c)?);
        }
        let row = BitRow::from_ones(self.coords.len(), ones);
        let combo = self.reducer.solve(&row)?;
        Some(combo.ones().map(|i| self.monomials[i].clone()).collect())
    }
}

pub(crate) fn decomposable_system(space: &Space, degree: u32) -> Arc<DecomposableSystem> {
    if let Some(s) = space.caches.decomposable_systems.lock().get(&degree) {
        return s.clone();
    }
    let sys = Arc::new(DecomposableSystem::build(space, degree));
    space
        .caches
        .decomposable_systems
        .lock()
        .entry(degree)
        .or_insert(sys)
        .clone()
}

/// `p_I = Q^I[1] * [-2^{l(I)}] + D_I`, the unique primitive with that generator part.
#[derive(Clone, PartialEq, Eq)]
pub struct PrimitiveBasisElement {
    pub seq: UpperSeq,
    pub value: Element,
}

impl fmt::Debug for PrimitiveBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p_{} = {}", self.seq, self.value)
    }
}

/// Admissible, excess positive, first entry odd, later entries even.
pub fn is_primitive_basis_seq(seq: &UpperSeq) -> bool {
    let e = seq.entries();
    !e.is_empty()
        && seq.is_admissible()
        && seq.excess().exceeds(0)
        && e[0] % 2 == 1
        && e[1..].iter().all(|i| i % 2 == 0)
}

pub fn primitive_basis_seqs(degree: u32) -> Vec<UpperSeq> {
    enumerate_admissible(degree as i64, 0, 0, None)
        .into_iter()
        .filter(is_primitive_basis_seq)
        .collect()
}

pub fn make_primitive_pi(space: &Arc<Space>, seq: &UpperSeq) -> Result<PrimitiveBasisElement> {
    require_qs0(space)?;
    if !is_primitive_basis_seq(seq) {
        return Err(Error::InvalidInput(format!(
            "{seq} must be admissible, of positive excess, with first entry odd and the rest even"
        )));
    }
    let lead = Element::normalized_generator(space, seq.clone())?;
    let target = reduced_coproduct(&lead)?;
    let sys = decomposable_system(space, seq.degree() as u32);
    let correction = sys
        .solve(target.terms())
        .ok_or_else(|| Error::NoSolution { seq: seq.clone() })?;
    if sys.kernel_dim() > 0 {
        return Err(Error::NonUnique {
            seq: seq.clone(),
            kernel_dim: sys.kernel_dim(),
        });
    }
    let value = lead.add(&Element::from_terms(space, correction))?;
    debug_assert!(is_primitive(&value).unwrap());
    Ok(PrimitiveBasisElement {
        seq: seq.clone(),
        value,
    })
}

/// Splits `I` at its last odd entry: `(I', I'')` with `I''` of primitive-basis shape.
pub fn split_at_last_odd(seq: &UpperSeq) -> Option<(UpperSeq, UpperSeq)> {
    let e = seq.entries();
    let b = e.iter().rposition(|i| i % 2 == 1)?;
    Some((UpperSeq::from(&e[..b]), UpperSeq::from(&e[b..])))
}

/// `Q^{I'} p_{I''}` for the split of `I` at its last odd entry.
pub fn operated_primitive(space: &Arc<Space>, seq: &UpperSeq) -> Result<(UpperSeq, PrimitiveBasisElement, Element)> {
    let (outer, inner) = split_at_last_odd(seq)
        .ok_or_else(|| Error::InvalidInput(format!("{seq} has no odd entry")))?;
    let p = make_primitive_pi(space, &inner)?;
    let value = apply_q_iterated(&outer, &p.value);
    Ok((outer, p, value))
}

#[derive(Clone, Debug)]
pub struct DecompositionTerm {
    pub outer: UpperSeq,
    pub inner: PrimitiveBasisElement,
    /// Translation `k` in `Q^{I'} p_{I''} * [k]` matching the generator term.
    pub translation: i64,
    pub translation_is_power_difference: bool,
}

/// `e = sum Q^{I'} p_{I''} * [k] + (square part)^2`.
#[derive(Clone, Debug)]
pub struct PrimitiveDecomposition {
    pub terms: Vec<DecompositionTerm>,
    pub square_root: Option<Box<PrimitiveDecomposition>>,
    pub square_root_value: Option<Element>,
}

/// `k = 2^a - 2^b` for some `a, b >= 0`.
pub fn is_power_of_two_difference(k: i64) -> bool {
    if k == 0 {
        return true;
    }
    let k_abs = k.unsigned_abs();
    (0..63).any(|b| {
        let s = k_abs + (1u64 << b);
        s.is_power_of_two()
    })
}

pub fn primitive_decomposition(e: &Element) -> Result<PrimitiveDecomposition> {
    let space = e.space();
    require_qs0(space)?;
    check_charge_zero(e)?;
    if !e.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if !is_primitive(e)? {
        return Err(Error::NotPrimitive);
    }
    let (gens, _) = e.split_decomposable();
    let mut terms = Vec::new();
    let mut remainder = e.clone();
    for m in gens.terms() {
        let g = m.as_single_generator().expect("generator part");
        let (outer, inner, value) = operated_primitive(space, g.seq()).map_err(|err| match err {
            Error::InvalidInput(_) => Error::CounterexampleFound(format!(
                "primitive has generator term {} with no odd entry",
                m.render(space)
            )),
            other => other,
        })?;
        let (value_gens, _) = value.split_decomposable();
        let lead = value_gens
            .terms()
            .iter()
            .find(|v| v.as_single_generator() == Some(g))
            .ok_or_else(|| {
                Error::CounterexampleFound(format!("Q^{}p_{} misses its generator term", outer, inner.seq))
            })?;
        let k = m.translation_part() - lead.translation_part();
        remainder = remainder.add(&value.translate(k))?;
        terms.push(DecompositionTerm {
            outer,
            inner,
            translation: k,
            translation_is_power_difference: is_power_of_two_difference(k),
        });
    }
    if remainder.is_zero() {
        return Ok(PrimitiveDecomposition {
            terms,
            square_root: None,
            square_root_value: None,
        });
    }
    let (g, _) = remainder.split_decomposable();
    if !g.is_zero() {
        return Err(Error::CounterexampleFound(format!("leftover generator terms {g}")));
    }
    let root = remainder.sqrt_of_square().map_err(|_| {
        Error::CounterexampleFound(format!("decomposable primitive {remainder} is not a square"))
    })?;
    let inner = primitive_decomposition(&root)?;
    Ok(PrimitiveDecomposition {
        terms,
        square_root: Some(Box::new(inner)),
        square_root_value: Some(root),
    })
}

impl PrimitiveDecomposition {
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let base = if t.outer.is_empty() {
                    format!("p_{}", t.inner.seq)
                } else {
                    format!("Q^{}p_{}", t.outer, t.inner.seq)
                };
                if t.translation == 0 {
                    base
                } else {
                    format!("{base}*[{}]", t.translation)
                }
            })
            .collect();
        if let Some(root) = &self.square_root {
            parts.push(format!("({})^2", root.render()));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
