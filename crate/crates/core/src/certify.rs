//! Exhaustive low-degree certification suites.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{basis_enumerate, Accumulator, Element, Monomial};
use crate::bounds::{
    bound_main1, bound_report, max_generator_dim, max_generator_dim_closed_form, stable_range_check,
    sum_identity_check,
};
use crate::dyer_lashof::q_monomial;
use crate::error::{Error, Result};
use crate::hopf::{
    coproduct_monomial, is_primitive, kernel_of_r, make_primitive_pi, normalized_generators,
    operated_primitive, primitive_basis_seqs, primitive_space,
};
use crate::linalg::{rank, BitRow, Indexer};
use crate::screen::{verify_no_even_squares, wellington_check};
use crate::seq::enumerate_admissible;
use crate::space::{CellComplex, Space};
use crate::steenrod::{lucas_binom, sq_monomial};
use crate::suspension::suspension_kernel_basis;

pub const SUITES: &[&str] = &[
    "kernel-of-r",
    "primitive-basis",
    "even-squares",
    "wellington",
    "suspension-kernel",
    "dimension-bounds",
    "sum-identity",
    "hopf-consistency",
    "stable-range",
];

pub fn default_max_degree(suite: &str) -> Option<u32> {
    Some(match suite {
        "kernel-of-r" => 16,
        "primitive-basis" => 13,
        "even-squares" => 20,
        "wellington" => 15,
        "suspension-kernel" => 12,
        "dimension-bounds" => 10,
        "sum-identity" => 30,
        "hopf-consistency" => 10,
        "stable-range" => 10,
        _ => return None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub max_degree: u32,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, max_degree: u32) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            max_degree,
            passed: true,
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            self.failures.push(what());
        }
    }
}

/// Runs one suite. Counterexamples are recorded as failures, not returned as errors.
pub fn run_suite(suite: &str, max_degree: Option<u32>) -> Result<SuiteReport> {
    let max = max_degree
        .or_else(|| default_max_degree(suite))
        .ok_or_else(|| Error::InvalidInput(format!("unknown suite {suite}; expected one of {}", SUITES.join(", "))))?;
    match suite {
        "kernel-of-r" => kernel_of_r_suite(max),
        "primitive-basis" => primitive_basis_suite(max),
        "even-squares" => even_squares_suite(max),
        "wellington" => wellington_suite(max),
        "suspension-kernel" => suspension_kernel_suite(max),
        "dimension-bounds" => dimension_bounds_suite(max),
        "sum-identity" => Ok(sum_identity_suite(max)),
        "hopf-consistency" => Ok(hopf_consistency_suite(max)),
        "stable-range" => Ok(stable_range_suite(max)),
        _ => unreachable!(),
    }
}

/// Equal spans, by rank of the union.
pub fn same_span(a: &[Element], b: &[Element]) -> bool {
    let mut idx = Indexer::new();
    let rows = |v: &[Element], idx: &mut Indexer<Monomial>| -> Vec<Vec<usize>> {
        v.iter().map(|e| e.terms().iter().map(|m| idx.index(m)).collect()).collect()
    };
    let ra = rows(a, &mut idx);
    let rb = rows(b, &mut idx);
    let n = idx.len();
    let to_bits = |r: &[Vec<usize>]| r.iter().map(|s| BitRow::from_ones(n, s.iter().copied())).collect::<Vec<_>>();
    let (ba, bb) = (to_bits(&ra), to_bits(&rb));
    let (ka, kb) = (rank(&ba), rank(&bb));
    let union: Vec<BitRow> = ba.into_iter().chain(bb).collect();
    ka == kb && rank(&union) == ka
}

/// Number of linearly independent elements.
pub fn span_rank(v: &[Element]) -> usize {
    let mut idx = Indexer::new();
    let sets: Vec<Vec<usize>> = v.iter().map(|e| e.terms().iter().map(|m| idx.index(m)).collect()).collect();
    let n = idx.len();
    rank(&sets.iter().map(|s| BitRow::from_ones(n, s.iter().copied())).collect::<Vec<_>>())
}

fn kernel_of_r_suite(max: u32) -> Result<SuiteReport> {
    let s0 = Space::qs0();
    let mut rep = SuiteReport::new("kernel-of-r", max);
    for d in 1..=max {
        for len in 1..=3 {
            let kernel = kernel_of_r(&s0, d, len)?;
            let odd: Vec<Element> = normalized_generators(d, len)
                .into_iter()
                .filter(|m| {
                    m.as_single_generator()
                        .is_some_and(|g| g.seq().iter().any(|i| i % 2 == 1))
                })
                .map(|m| Element::from_monomial(&s0, m))
                .collect();
            let ok = kernel.len() == odd.len() && same_span(&kernel, &odd);
            rep.check(ok, || format!("degree {d} length {len}: kernel dim {} vs {} odd-entry monomials", kernel.len(), odd.len()));
        }
    }
    Ok(rep)
}

fn primitive_basis_suite(max: u32) -> Result<SuiteReport> {
    let s0 = Space::qs0();
    let mut rep = SuiteReport::new("primitive-basis", max);
    for d in (1..=max).step_by(2) {
        for seq in primitive_basis_seqs(d) {
            match make_primitive_pi(&s0, &seq) {
                Ok(p) => rep.check(is_primitive(&p.value)?, || format!("p_{seq} is not primitive")),
                Err(e) => rep.check(false, || format!("p_{seq}: {e}")),
            }
        }
        let seqs = enumerate_admissible(d as i64, 0, 0, None);
        let mut classes = Vec::new();
        for seq in &seqs {
            match operated_primitive(&s0, seq) {
                Ok((_, _, v)) => {
                    rep.check(is_primitive(&v)?, || format!("Q^I'p_I'' for I = {seq} is not primitive"));
                    classes.push(v);
                }
                Err(e) => rep.check(false, || format!("I = {seq}: {e}")),
            }
        }
        let r = span_rank(&classes);
        rep.check(r == classes.len(), || format!("degree {d}: {} classes span rank {r}", classes.len()));
        let prims = primitive_space(&s0, d);
        rep.check(same_span(&classes, &prims), || {
            format!("degree {d}: span of Q^I'p_I'' (dim {r}) differs from primitives (dim {})", prims.len())
        });
        rep.notes.push(format!("degree {d}: {} primitives, {} classes Q^I'p_I''", prims.len(), classes.len()));
    }
    Ok(rep)
}

fn two_cell_space() -> Arc<Space> {
    Space::sigma2(CellComplex::two_cell_test())
}

fn even_squares_suite(max: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("even-squares", max);
    let cases = [(Space::qsn(1)?, max / 2), (two_cell_space(), (max / 2).min(8))];
    for (space, half) in cases {
        match verify_no_even_squares(&space, half) {
            Ok(r) => {
                rep.checks += r.degrees.iter().map(|d| d.mechanism.len()).sum::<usize>();
                for d in &r.degrees {
                    if !d.square_candidates.is_empty() {
                        let names: Vec<&str> = d.square_candidates.iter().map(|c| c.element.as_str()).collect();
                        rep.notes.push(format!(
                            "{} degree {}: primitive A-annihilated squares [{}]; Sq^1_* argument rules each out",
                            r.space,
                            d.degree,
                            names.join(", ")
                        ));
                    }
                }
            }
            Err(Error::CounterexampleFound(msg)) => rep.check(false, || msg),
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

fn wellington_suite(max: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("wellington", max);
    let cases = [(Space::qsn(1)?, max), (two_cell_space(), max.saturating_sub(4))];
    for (space, top) in cases {
        for d in (1..=top).step_by(2) {
            match wellington_check(&space, d) {
                Ok(r) => rep.check(r.contained, || format!("{} degree {d}", r.space)),
                Err(Error::CounterexampleFound(msg)) => rep.check(false, || msg),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(rep)
}

fn suspension_kernel_suite(max: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("suspension-kernel", max);
    for space in [Space::qs0(), Space::qsn(1)?] {
        for d in 1..=max {
            let kernel = suspension_kernel_basis(&space, d)?;
            let decomposables: Vec<Element> = basis_enumerate(&space, d, Some(0))
                .into_iter()
                .filter(|m| m.as_single_generator().is_none())
                .map(|m| Element::from_monomial(&space, m))
                .collect();
            rep.check(same_span(&kernel, &decomposables), || {
                format!("{} degree {d}: kernel dim {} vs decomposables {}", space.id(), kernel.len(), decomposables.len())
            });
        }
    }
    Ok(rep)
}

fn dimension_bounds_suite(max: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("dimension-bounds", max);
    for l in 2..=max {
        let m = max_generator_dim(l, 1)?;
        let c = max_generator_dim_closed_form(l);
        rep.check(m == c, || format!("l={l}: exhaustive {m} vs closed form {c}"));
        let b = bound_report(l, None)?;
        rep.notes.push(format!(
            "l={l}: printed S^-1 bound {}, doubled maximum {}, discrepancy={}",
            b.printed, b.oracle, b.discrepancy
        ));
    }
    Ok(rep)
}

fn sum_identity_suite(max: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("sum-identity", max);
    for k in 1..=max {
        rep.check(sum_identity_check(k), || format!("k={k}"));
    }
    rep
}

fn stable_range_suite(max: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("stable-range", max);
    for l in 1..=max {
        for n in 1..=max {
            let d = bound_main1(l, n) + 1;
            rep.check(!stable_range_check(d, n as i64, l as i64), || format!("l={l} n={n}: d={d} inside stable range"));
        }
    }
    rep
}

type Triple = (Monomial, Monomial, Monomial);

fn psi(space: &Space, m: &Monomial) -> Arc<Vec<(Monomial, Monomial)>> {
    coproduct_monomial(space, m)
}

/// Failures of the Hopf and Steenrod identities on one basis monomial.
fn hopf_checks(space: &Space, m: &Monomial, max: u32) -> Vec<String> {
    let mut fails = Vec::new();
    let name = || m.render(space);
    let cop = psi(space, m);

    let mut left = Accumulator::<Triple>::new();
    let mut right = Accumulator::<Triple>::new();
    for (a, b) in cop.iter() {
        for (a1, a2) in psi(space, a).iter() {
            left.toggle((a1.clone(), a2.clone(), b.clone()));
        }
        for (b1, b2) in psi(space, b).iter() {
            right.toggle((a.clone(), b1.clone(), b2.clone()));
        }
    }
    if left.into_sorted() != right.into_sorted() {
        fails.push(format!("coassociativity fails on {}", name()));
    }

    let mut lc = Accumulator::new();
    let mut rc = Accumulator::new();
    for (a, b) in cop.iter() {
        if a.is_scalar() {
            lc.toggle(b.clone());
        }
        if b.is_scalar() {
            rc.toggle(a.clone());
        }
    }
    if lc.into_sorted() != vec![m.clone()] || rc.into_sorted() != vec![m.clone()] {
        fails.push(format!("counit fails on {}", name()));
    }

    let d = m.dim(space);
    for r in 1..=d {
        let mut acc = Accumulator::new();
        for w in sq_monomial(space, r, m).iter() {
            acc.extend(sq_monomial(space, 1, w).iter().cloned());
        }
        if r == 1 && !acc.into_sorted().is_empty() {
            fails.push(format!("Sq^1_* Sq^1_* nonzero on {}", name()));
        }

        let mut lhs = Accumulator::new();
        for w in sq_monomial(space, r, m).iter() {
            lhs.extend(psi(space, w).iter().cloned());
        }
        let mut rhs = Accumulator::new();
        for (a, b) in cop.iter() {
            for i in 0..=r {
                let sa = sq_monomial(space, i, a);
                if sa.is_empty() {
                    continue;
                }
                let sb = sq_monomial(space, r - i, b);
                for x in sa.iter() {
                    for y in sb.iter() {
                        rhs.toggle((x.clone(), y.clone()));
                    }
                }
            }
        }
        if lhs.into_sorted() != rhs.into_sorted() {
            fails.push(format!("psi does not commute with Sq^{r}_* on {}", name()));
        }
    }

    // Q^a m against the diagonal Cartan formula and the Nishida relations
    for a in d + 1..=max.saturating_sub(d) {
        let qm = q_monomial(space, a, m);
        let mut lhs = Accumulator::new();
        for w in qm.iter() {
            lhs.extend(psi(space, w).iter().cloned());
        }
        let mut rhs = Accumulator::new();
        for (z1, z2) in cop.iter() {
            let (d1, d2) = (z1.dim(space), z2.dim(space));
            if a < d1 + d2 {
                continue;
            }
            for a1 in d1..=a - d2 {
                let x = q_monomial(space, a1, z1);
                if x.is_empty() {
                    continue;
                }
                let y = q_monomial(space, a - a1, z2);
                for u in x.iter() {
                    for v in y.iter() {
                        rhs.toggle((u.clone(), v.clone()));
                    }
                }
            }
        }
        if lhs.into_sorted() != rhs.into_sorted() {
            fails.push(format!("psi Q^{a} differs from the Cartan formula on {}", name()));
        }

        for r in 1..=a + d {
            let mut lhs = Accumulator::new();
            for w in qm.iter() {
                lhs.extend(sq_monomial(space, r, w).iter().cloned());
            }
            let mut rhs = Accumulator::new();
            let (ai, ri) = (a as i64, r as i64);
            for t in 0..=ri / 2 {
                if !lucas_binom(ai - ri, ri - 2 * t) {
                    continue;
                }
                for w in sq_monomial(space, t as u32, m).iter() {
                    rhs.extend(q_monomial(space, (ai - ri + t) as u32, w).iter().cloned());
                }
            }
            if lhs.into_sorted() != rhs.into_sorted() {
                fails.push(format!("Nishida relation fails for Sq^{r}_* Q^{a} on {}", name()));
            }
        }
    }
    fails
}

fn hopf_consistency_suite(max: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("hopf-consistency", max);
    for space in [Space::qsn(1).expect("qs1"), Space::qs0()] {
        let basis: Vec<Monomial> = (1..=max).flat_map(|d| basis_enumerate(&space, d, Some(0))).collect();
        let fails: Vec<Vec<String>> = basis.par_iter().map(|m| hopf_checks(&space, m, max)).collect();
        for f in fails {
            rep.checks += 1;
            if !f.is_empty() {
                rep.passed = false;
                rep.failures.extend(f);
            }
        }
        rep.notes.push(format!("{}: {} basis monomials of degree <= {max}", space.id(), basis.len()));
    }
    rep
}
