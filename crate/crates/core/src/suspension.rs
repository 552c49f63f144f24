//! Homology suspension `sigma_*` along `Q_0 S^0 -> QS^1 -> QS^2 -> ...` and
//! `Q Σ^s X -> Q Σ^{s+1} X`, and loop-filtration membership.

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{basis_enumerate, evaluate_admissible, Accumulator, Element, Monomial};
use crate::error::{Error, Result};
use crate::hopf::kernel_elements;
use crate::seq::upper_to_lower;
use crate::space::Space;

fn suspend_monomial(source: &Space, target: &Space, m: &Monomial) -> Result<Option<Monomial>> {
    if source.has_charge() && m.charge() != 0 {
        return Err(Error::ChargeNonzero(m.charge()));
    }
    let Some(g) = m.as_single_generator() else {
        return Ok(None);
    };
    Ok(evaluate_admissible(target, g.seq(), g.base()))
}

/// `sigma_* e`: kills decomposables, sends `Q^I(base)` to `Q^I(suspended base)`.
pub fn suspend(e: &Element) -> Result<Element> {
    let source = e.space();
    let target = source.successor()?;
    let mut acc = Accumulator::new();
    for m in e.terms() {
        if let Some(v) = suspend_monomial(source, &target, m)? {
            acc.toggle(v);
        }
    }
    Ok(Element::from_sorted(&target, acc.into_sorted()))
}

/// Basis of `ker sigma_*` in `degree` (charge 0 in the `Q_0 S^0` model).
pub fn suspension_kernel_basis(space: &Arc<Space>, degree: u32) -> Result<Vec<Element>> {
    let target = space.successor()?;
    let basis = basis_enumerate(space, degree, Some(0));
    let images = basis
        .par_iter()
        .map(|m| suspend_monomial(space, &target, m).map(|v| v.into_iter().collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    Ok(kernel_elements(space, &basis, images))
}

/// Every generator occurring in `e` has all lower indices below `l`.
pub fn loop_filtration_member(e: &Element, l: u32) -> bool {
    let space = e.space();
    e.terms().iter().all(|m| {
        m.factors().iter().all(|(g, _)| {
            let bd = space.base_dim(g.base()) as i64;
            match upper_to_lower(g.seq(), bd) {
                Ok(lower) => lower.iter().all(|j| j < l),
                Err(_) => false,
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{lower_to_upper, LowerSeq, UpperSeq};

    fn q(space: &Arc<Space>, seq: &[u32]) -> Element {
        Element::generator(space, 0, UpperSeq::from(seq)).unwrap()
    }

    #[test]
    fn suspension_examples() {
        let s1 = Space::qsn(1).unwrap();
        let s2 = s1.successor().unwrap();
        assert_eq!(suspend(&q(&s1, &[6, 3])).unwrap(), q(&s2, &[6, 3]));
        // excess 2 reaches the new bottom dimension
        assert_eq!(suspend(&q(&s1, &[5, 3])).unwrap(), q(&s2, &[3]).square());
        assert!(suspend(&q(&s1, &[2]).square()).unwrap().is_zero());

        let s0 = Space::qs0();
        let e = Element::normalized_generator(&s0, UpperSeq::from(&[2, 1][..])).unwrap();
        let x1 = q(&s0.successor().unwrap(), &[]);
        assert_eq!(suspend(&e).unwrap(), x1.pow(4));
        let bad = Element::generator(&s0, 0, UpperSeq::from(&[2][..])).unwrap();
        assert!(matches!(suspend(&bad), Err(Error::ChargeNonzero(2))));
    }

    #[test]
    fn no_successor_for_single_suspension_predecessor() {
        let s = Space::qsn(1).unwrap();
        assert!(s.successor().is_ok());
    }

    #[test]
    fn kernels() {
        let s1 = Space::qsn(1).unwrap();
        let k2 = suspension_kernel_basis(&s1, 2).unwrap();
        assert_eq!(k2, vec![q(&s1, &[]).square()]);
        assert!(suspension_kernel_basis(&s1, 1).unwrap().is_empty());
    }

    #[test]
    fn filtration() {
        let s1 = Space::qsn(1).unwrap();
        let seq = lower_to_upper(&LowerSeq::from(vec![1, 2]), 1);
        let e = Element::generator(&s1, 0, seq).unwrap();
        assert!(loop_filtration_member(&e, 3));
        assert!(!loop_filtration_member(&e, 2));
        assert!(loop_filtration_member(&q(&s1, &[]), 1));
    }
}
