//! Spherical-class screening on the span of single-operation classes `Q^I(base)`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{evaluate_admissible, Element, Monomial};
use crate::bounds::{bound_report, BoundReport};
use crate::dyer_lashof::apply_q;
use crate::error::{Error, Result};
use crate::hopf::{kernel_elements, reduced_coproduct};
use crate::seq::{enumerate_admissible, upper_to_lower, UpperSeq};
use crate::space::{Space, SpaceDesc};
use crate::steenrod::{is_A_annihilated, sq_monomial};
use crate::suspension::suspend;

/// `Q^I` on a base class with `ex(I) >= dim(base)`, and its value in the algebra (a generator
/// or a `2^k`-th power). In `Q_0 S^0` the value is recentred to charge 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MInfinitySymbol {
    pub base: u32,
    pub seq: UpperSeq,
    pub value: Monomial,
}

impl MInfinitySymbol {
    pub fn is_square(&self) -> bool {
        self.value.as_single_generator().is_none()
    }

    pub fn all_entries_odd(&self) -> bool {
        self.seq.all_entries_odd()
    }

    pub fn render(&self, space: &Space) -> String {
        let base = space.base_name(self.base);
        match (self.seq.len(), space.has_charge()) {
            (0, _) => base,
            (1, true) => format!("Q^{}{}", self.seq.entries()[0], base),
            (_, true) => format!("Q^{}{}", self.seq, base),
            (1, false) => format!("Q^{} {}", self.seq.entries()[0], base),
            (_, false) => format!("Q^{} {}", self.seq, base),
        }
    }
}

/// The symbols of `M_infinity` in `degree`, restricted to lower indices below `l` when given.
pub fn m_infinity_symbols(space: &Space, degree: u32, l: Option<u32>) -> Vec<MInfinitySymbol> {
    let mut out = Vec::new();
    for base in 0..space.base_count() as u32 {
        let bd = space.base_dim(base) as i64;
        for seq in enumerate_admissible(degree as i64, bd, bd - 1, None) {
            if space.has_charge() && seq.is_empty() {
                continue;
            }
            if let Some(l) = l {
                match upper_to_lower(&seq, bd) {
                    Ok(lower) if lower.iter().all(|j| j < l) => {}
                    _ => continue,
                }
            }
            let Some(mut value) = evaluate_admissible(space, &seq, base) else {
                continue;
            };
            if space.has_charge() {
                value = value.shifted(-(1i64 << seq.len()));
            }
            out.push(MInfinitySymbol { base, seq, value });
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
#[allow(clippy::large_enum_variant)]
enum Coord {
    Tensor(Monomial, Monomial),
    Sq(u32, Monomial),
}

fn sq_coords(space: &Space, m: &Monomial, top: u32) -> Vec<Coord> {
    let mut v = Vec::new();
    for r in 1..=top {
        for w in sq_monomial(space, r, m).iter() {
            v.push(Coord::Sq(r, w.clone()));
        }
    }
    v
}

/// Candidate class with its expression over symbols.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Candidate {
    pub element: String,
    pub symbols: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScreenBounds {
    pub k: Option<u32>,
    pub printed: Option<i64>,
    pub oracle: Option<i64>,
    pub discrepancy: Option<bool>,
    pub within_printed: Option<bool>,
    pub within_oracle: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScreenReport {
    pub space: String,
    pub degree: u32,
    #[serde(rename = "loop")]
    pub loop_filtration: Option<u32>,
    pub symbols: usize,
    pub candidates: Vec<Candidate>,
    pub squares: Vec<Candidate>,
    pub bounds: ScreenBounds,
    #[serde(skip)]
    pub candidate_elements: Vec<Element>,
    #[serde(skip)]
    pub square_elements: Vec<Element>,
}

/// `k` with `space = Q Σ^2 X`, `X` of top dimension `k`; `None` for `QS^1` (`X = S^{-1}`).
fn main1_parameter(space: &Space) -> Option<Option<u32>> {
    match space.desc() {
        SpaceDesc::Qsn { n: 1 } => Some(None),
        SpaceDesc::Qsn { n } => Some(Some(n - 2)),
        SpaceDesc::Suspension { complex, shift: 2 } => Some(Some(complex.top_dim())),
        _ => None,
    }
}

fn screen_bounds(space: &Space, degree: u32, l: Option<u32>) -> ScreenBounds {
    let empty = ScreenBounds {
        k: None,
        printed: None,
        oracle: None,
        discrepancy: None,
        within_printed: None,
        within_oracle: None,
    };
    let (Some(k), Some(l)) = (main1_parameter(space), l) else {
        return empty;
    };
    match bound_report(l, k) {
        Ok(BoundReport { printed, oracle, discrepancy, .. }) => ScreenBounds {
            k,
            printed: Some(printed),
            oracle: Some(oracle),
            discrepancy: Some(discrepancy),
            within_printed: Some(degree as i64 <= printed),
            within_oracle: Some(degree as i64 <= oracle),
        },
        Err(_) => ScreenBounds { k, ..empty },
    }
}

fn kernel_over_symbols(space: &Arc<Space>, symbols: &[MInfinitySymbol], degree: u32) -> Vec<(Element, Vec<usize>)> {
    let values: Vec<Monomial> = symbols.iter().map(|s| s.value.clone()).collect();
    let images: Vec<Vec<Coord>> = values
        .par_iter()
        .map(|m| {
            let e = Element::from_monomial(space, m.clone());
            let mut coords: Vec<Coord> = reduced_coproduct(&e)
                .expect("charge 0 values")
                .terms()
                .iter()
                .map(|(a, b)| Coord::Tensor(a.clone(), b.clone()))
                .collect();
            coords.extend(sq_coords(space, m, degree));
            coords
        })
        .collect();
    kernel_elements(space, &values, images)
        .into_iter()
        .map(|e| {
            let idx = e
                .terms()
                .iter()
                .map(|m| values.iter().position(|v| v == m).expect("value"))
                .collect();
            (e, idx)
        })
        .collect()
}

fn to_candidate(space: &Space, symbols: &[MInfinitySymbol], e: &Element, idx: &[usize]) -> Candidate {
    let mut names: Vec<String> = idx.iter().map(|&i| symbols[i].render(space)).collect();
    names.sort();
    Candidate {
        element: e.render(),
        symbols: names,
    }
}

/// Primitive, `A`-annihilated classes in the single-operation span of `degree`.
pub fn spherical_candidates(space: &Arc<Space>, degree: u32, l: Option<u32>) -> Result<ScreenReport> {
    if degree == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    if l == Some(0) {
        return Err(Error::InvalidInput("loop filtration must be at least 1".into()));
    }
    let symbols = m_infinity_symbols(space, degree, l);
    let kernel = kernel_over_symbols(space, &symbols, degree);
    let squares_only: Vec<MInfinitySymbol> = symbols.iter().filter(|s| s.is_square()).cloned().collect();
    let square_kernel = kernel_over_symbols(space, &squares_only, degree);
    Ok(ScreenReport {
        space: space.id(),
        degree,
        loop_filtration: l,
        symbols: symbols.len(),
        candidates: kernel.iter().map(|(e, i)| to_candidate(space, &symbols, e, i)).collect(),
        squares: square_kernel
            .iter()
            .map(|(e, i)| to_candidate(space, &squares_only, e, i))
            .collect(),
        bounds: screen_bounds(space, degree, l),
        candidate_elements: kernel.into_iter().map(|(e, _)| e).collect(),
        square_elements: square_kernel.into_iter().map(|(e, _)| e).collect(),
    })
}

/// Replay of the odd-dimension argument for one square candidate `zeta^2`.
#[derive(Clone, Debug, Serialize)]
pub struct MechanismCheck {
    pub square: String,
    pub root: String,
    pub desuspended_root: String,
    /// `Q^d` of the desuspended root.
    pub representative: String,
    pub suspends_to_square: bool,
    pub sq1_is_root_square: bool,
    pub sq1_nonzero: bool,
}

impl MechanismCheck {
    pub fn passed(&self) -> bool {
        self.suspends_to_square && self.sq1_is_root_square && self.sq1_nonzero
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EvenSquaresDegree {
    pub half_degree: u32,
    pub degree: u32,
    pub square_candidates: Vec<Candidate>,
    pub mechanism: Vec<MechanismCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvenSquaresReport {
    pub space: String,
    pub max_half_degree: u32,
    pub degrees: Vec<EvenSquaresDegree>,
    /// No primitive, `A`-annihilated square was found in any checked degree.
    pub no_square_candidates: bool,
    pub mechanism_passed: bool,
}

/// Lifts `sum Q^I(base)` in `space` to the same symbols in the predecessor space.
fn desuspend_symbols(pred: &Arc<Space>, symbols: &[&MInfinitySymbol]) -> Result<Element> {
    let mut terms = Vec::new();
    for s in symbols {
        let gen = crate::algebra::Generator::new(s.base, s.seq.clone());
        if !gen.is_valid(pred) && !(s.seq.is_empty() && !pred.has_charge()) {
            return Err(Error::InvalidInput(format!("cannot desuspend Q^{}", s.seq)));
        }
        let m = if pred.has_charge() {
            Monomial::generator(gen.clone()).with_translation(-gen.charge())
        } else {
            Monomial::generator(gen)
        };
        terms.push(m);
    }
    Ok(Element::from_terms(pred, terms))
}

fn mechanism_check(space: &Arc<Space>, square: &Element, half: u32) -> Result<MechanismCheck> {
    let pred = space
        .predecessor()
        .ok_or_else(|| Error::UnsupportedSpace(format!("{} has no desuspension", space.id())))?;
    let root = square.sqrt_of_square()?;
    let root_symbols = m_infinity_symbols(space, half, None);
    let mut used = Vec::new();
    for m in root.terms() {
        let s = root_symbols
            .iter()
            .find(|s| &s.value == m)
            .ok_or_else(|| Error::CounterexampleFound(format!("root term {} is not a single operation", m.render(space))))?;
        used.push(s);
    }
    let lifted = desuspend_symbols(&pred, &used)?;
    let representative = apply_q(half, &lifted);
    let suspended = suspend(&representative)?;
    let sq1 = crate::steenrod::sq_lower(1, &representative);
    Ok(MechanismCheck {
        square: square.render(),
        root: root.render(),
        desuspended_root: lifted.render(),
        representative: representative.render(),
        suspends_to_square: suspended.terms() == square.terms(),
        sq1_is_root_square: sq1 == lifted.square(),
        sq1_nonzero: !sq1.is_zero(),
    })
}

/// For each even `d <= max_half_degree`, lists primitive `A`-annihilated squares in degree `2d`
/// and replays the `Sq^1_*` argument on each. Fails only if the argument itself breaks.
pub fn verify_no_even_squares(space: &Arc<Space>, max_half_degree: u32) -> Result<EvenSquaresReport> {
    match space.desc() {
        SpaceDesc::Qsn { .. } => {}
        SpaceDesc::Suspension { shift, .. } if *shift >= 2 => {}
        _ => return Err(Error::UnsupportedSpace(space.id())),
    }
    let halves: Vec<u32> = (2..=max_half_degree).step_by(2).collect();
    let degrees = halves
        .par_iter()
        .map(|&half| {
            let report = spherical_candidates(space, 2 * half, None)?;
            let mechanism = report
                .square_elements
                .iter()
                .map(|sq| mechanism_check(space, sq, half))
                .collect::<Result<Vec<_>>>()?;
            Ok(EvenSquaresDegree {
                half_degree: half,
                degree: 2 * half,
                square_candidates: report.squares,
                mechanism,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let no_square_candidates = degrees.iter().all(|d| d.square_candidates.is_empty());
    let mechanism_passed = degrees.iter().all(|d| d.mechanism.iter().all(MechanismCheck::passed));
    let report = EvenSquaresReport {
        space: space.id(),
        max_half_degree,
        degrees,
        no_square_candidates,
        mechanism_passed,
    };
    if !report.mechanism_passed {
        let bad = report
            .degrees
            .iter()
            .flat_map(|d| d.mechanism.iter())
            .find(|m| !m.passed())
            .expect("failing check");
        return Err(Error::CounterexampleFound(format!(
            "Sq^1_* argument fails for {}: representative {}",
            bad.square, bad.representative
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct WellingtonReport {
    pub space: String,
    pub degree: u32,
    pub span_dim: usize,
    pub odd_span_dim: usize,
    pub annihilated: Vec<Candidate>,
    pub contained: bool,
}

/// `ann(M_infinity X)` in odd `degree`, checked to lie in the all-odd-entry span.
pub fn wellington_check(space: &Arc<Space>, degree: u32) -> Result<WellingtonReport> {
    if space.has_charge() {
        return Err(Error::UnsupportedSpace(space.id()));
    }
    if degree.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("degree must be odd (got {degree})")));
    }
    let symbols = m_infinity_symbols(space, degree, None);
    let values: Vec<Monomial> = symbols.iter().map(|s| s.value.clone()).collect();
    let images: Vec<Vec<Coord>> = values.par_iter().map(|m| sq_coords(space, m, degree)).collect();
    let kernel = kernel_elements(space, &values, images);
    let mut annihilated = Vec::new();
    let mut contained = true;
    for e in &kernel {
        debug_assert!(is_A_annihilated(e));
        let idx: Vec<usize> = e
            .terms()
            .iter()
            .map(|m| values.iter().position(|v| v == m).expect("value"))
            .collect();
        contained &= idx.iter().all(|&i| symbols[i].all_entries_odd());
        annihilated.push(to_candidate(space, &symbols, e, &idx));
    }
    let report = WellingtonReport {
        space: space.id(),
        degree,
        span_dim: symbols.len(),
        odd_span_dim: symbols.iter().filter(|s| s.all_entries_odd()).count(),
        annihilated,
        contained,
    };
    if !contained {
        return Err(Error::CounterexampleFound(format!(
            "annihilated class outside the all-odd span in degree {degree} of {}",
            space.id()
        )));
    }
    Ok(report)
}
