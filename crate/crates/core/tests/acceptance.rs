use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use dlhom::bounds::{bound_main1, bound_report, bound_s_minus1, max_generator_dim, stable_range_check, sum_identity_check};
use dlhom::certify::run_suite;
use dlhom::hopf::{coproduct, is_primitive, kernel_of_r, make_primitive_pi, operated_primitive, reduced_coproduct};
use dlhom::screen::m_infinity_symbols;
use dlhom::{
    basis_enumerate, is_A_annihilated, primitive_space, sq_lower, spherical_candidates, suspend,
    suspension_kernel_basis, verify_no_even_squares, wellington_check, CellComplex, Element, Monomial,
    Space, UpperSeq,
};

/// Row-reduction over F_2 with sparse rows keyed by an ordered coordinate, tracking combinations.
type Row<K> = (BTreeSet<K>, BTreeSet<usize>);

struct Span<K: Ord + Clone> {
    rows: BTreeMap<K, Row<K>>,
    next: usize,
}

fn toggle<T: Ord + Clone>(a: &mut BTreeSet<T>, b: &BTreeSet<T>) {
    for x in b {
        if !a.remove(x) {
            a.insert(x.clone());
        }
    }
}

impl<K: Ord + Clone> Span<K> {
    fn new() -> Self {
        Span { rows: BTreeMap::new(), next: 0 }
    }

    fn reduce(&self, mut v: BTreeSet<K>, mut combo: BTreeSet<usize>) -> Row<K> {
        while let Some(top) = v.last().cloned() {
            match self.rows.get(&top) {
                Some((row, c)) => {
                    toggle(&mut v, row);
                    toggle(&mut combo, c);
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Adds a vector; returns the combination of inputs summing to zero if it is dependent.
    fn push(&mut self, v: BTreeSet<K>) -> Option<BTreeSet<usize>> {
        let id = self.next;
        self.next += 1;
        let (v, combo) = self.reduce(v, BTreeSet::from([id]));
        match v.last().cloned() {
            Some(top) => {
                self.rows.insert(top, (v, combo));
                None
            }
            None => Some(combo),
        }
    }

    fn contains(&self, v: BTreeSet<K>) -> bool {
        self.reduce(v, BTreeSet::new()).0.is_empty()
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn terms(e: &Element) -> BTreeSet<Monomial> {
    e.terms().iter().cloned().collect()
}

fn rank_of(v: &[Element]) -> usize {
    let mut s = Span::new();
    for e in v {
        s.push(terms(e));
    }
    s.rank()
}

fn same_span(a: &[Element], b: &[Element]) -> bool {
    let both: Vec<Element> = a.iter().chain(b).cloned().collect();
    let r = rank_of(&both);
    r == rank_of(a) && r == rank_of(b)
}

/// Admissible upper sequences of `degree` over a base of dimension `bd`, excess > `min_excess`.
fn admissible(degree: i64, bd: i64, min_excess: i64) -> Vec<Vec<u32>> {
    fn rec(left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for a in 1..=left {
            if let Some(&prev) = cur.last() {
                if prev > 2 * a as u32 {
                    continue;
                }
            }
            cur.push(a as u32);
            rec(left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if degree < bd {
        return out;
    }
    rec(degree - bd, &mut Vec::new(), &mut out);
    out.retain(|s| match s.first() {
        None => true,
        Some(&f) => f as i64 - s[1..].iter().map(|&x| x as i64).sum::<i64>() > min_excess,
    });
    out
}

fn normalized(s: &Arc<Space>, seq: &[u32]) -> Element {
    Element::normalized_generator(s, UpperSeq::from(seq)).unwrap()
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    expected_fail: bool,
    detail: String,
}

fn pass(ok: bool, detail: String) -> Outcome {
    Outcome { pass: ok, expected_fail: false, detail }
}

fn ac1() -> Outcome {
    let s = Space::qsn(1).unwrap();
    let mut witnesses = Vec::new();
    let mut agree = true;
    for d in (2..=10u32).step_by(2) {
        let deg = 2 * d;
        // square symbols Q^I x_1 with excess exactly 1
        let squares: Vec<_> = m_infinity_symbols(&s, deg, None).into_iter().filter(|m| m.is_square()).collect();
        let expected = admissible(deg as i64, 1, 0).len() - admissible(deg as i64, 1, 1).len();
        agree &= squares.len() == expected;
        let mut span = Span::new();
        let mut kernel = Vec::new();
        for sym in &squares {
            let e = Element::from_monomial(&s, sym.value.clone());
            let mut image: BTreeSet<(u32, Monomial, Monomial)> = BTreeSet::new();
            for (a, b) in reduced_coproduct(&e).unwrap().terms() {
                image.insert((0, a.clone(), b.clone()));
            }
            for r in 1..=deg {
                for m in sq_lower(r, &e).terms() {
                    image.insert((r, m.clone(), Monomial::one()));
                }
            }
            if let Some(c) = span.push(image) {
                kernel.push(Element::from_terms(&s, c.iter().map(|&i| squares[i].value.clone())));
            }
        }
        for k in &kernel {
            agree &= k.is_square() && is_primitive(k).unwrap() && is_A_annihilated(k);
        }
        let report = spherical_candidates(&s, deg, None).unwrap();
        agree &= report.squares.len() == kernel.len() && same_span(&report.square_elements, &kernel);
        for k in &kernel {
            witnesses.push(format!("{}: {}", deg, k.render()));
        }
    }
    let x1 = Element::generator(&s, 0, UpperSeq::empty()).unwrap();
    let x1_4 = x1.pow(4);
    let hand_witness = is_primitive(&x1_4).unwrap() && is_A_annihilated(&x1_4) && x1_4.is_square();
    let mech = verify_no_even_squares(&s, 10);
    let mech_ok = matches!(&mech, Ok(r) if r.mechanism_passed);
    let literal = witnesses.is_empty();
    let detail = format!(
        "literal clause (no primitive A-annihilated squares in H_2d QS^1, d even <= 10): {}; witnesses [{}]; \
         x_1^4 primitive+annihilated by hand: {}; oracle agrees with screener: {}; Sq^1_* mechanism check: {}",
        if literal { "holds" } else { "fails" },
        witnesses.join(", "),
        hand_witness,
        agree,
        if mech_ok { "PASS" } else { "FAIL" }
    );
    Outcome {
        pass: literal && mech_ok && agree,
        expected_fail: !literal && hand_witness && mech_ok && agree,
        detail,
    }
}

fn ac2() -> Outcome {
    let s = Space::qs0();
    let mut checked = 0;
    let mut ok = true;
    for d in 1..=16u32 {
        for len in 1..=3usize {
            let want: BTreeSet<Monomial> = admissible(d as i64, 0, 0)
                .into_iter()
                .filter(|q| q.len() == len && q.iter().any(|i| i % 2 == 1))
                .flat_map(|q| normalized(&s, &q).into_terms())
                .collect();
            let kernel = kernel_of_r(&s, d, len).unwrap();
            let got: BTreeSet<Monomial> = kernel
                .iter()
                .map(|e| {
                    assert_eq!(e.terms().len(), 1, "kernel basis vector is not a monomial");
                    e.terms()[0].clone()
                })
                .collect();
            ok &= got == want && kernel.len() == want.len();
            checked += 1;
        }
    }
    pass(ok, format!("{checked} (degree, length) tables match the odd-entry predicate"))
}

fn ac3() -> Outcome {
    let s = Space::qs0();
    let mut ok = true;
    let mut dims = Vec::new();
    for d in (1..=13u32).step_by(2) {
        // (a)
        for q in admissible(d as i64, 0, 0) {
            if !(q[0] % 2 == 1 && q[1..].iter().all(|i| i % 2 == 0)) {
                continue;
            }
            match make_primitive_pi(&s, &UpperSeq::from(&q[..])) {
                Ok(p) => {
                    let (gen_part, _) = p.value.split_decomposable();
                    ok &= is_primitive(&p.value).unwrap() && gen_part == normalized(&s, &q);
                }
                Err(_) => ok = false,
            }
        }
        // (b)
        let seqs = admissible(d as i64, 0, 0);
        let mut classes = Vec::new();
        for q in &seqs {
            match operated_primitive(&s, &UpperSeq::from(&q[..])) {
                Ok((_, _, v)) => {
                    ok &= is_primitive(&v).unwrap();
                    classes.push(v);
                }
                Err(_) => ok = false,
            }
        }
        let independent = rank_of(&classes) == seqs.len();
        // (c) odd degree: no squares
        let prims = primitive_space(&s, d);
        ok &= independent && prims.len() == seqs.len() && same_span(&classes, &prims);
        dims.push(format!("{d}:{}", prims.len()));
    }
    pass(ok, format!("primitive dimensions by odd degree [{}]", dims.join(" ")))
}

fn annihilated_kernel(space: &Arc<Space>, degree: u32) -> (Vec<Element>, bool) {
    let symbols = m_infinity_symbols(space, degree, None);
    let mut span = Span::new();
    let mut kernel = Vec::new();
    for sym in &symbols {
        let e = Element::from_monomial(space, sym.value.clone());
        let mut image: BTreeSet<(u32, Monomial)> = BTreeSet::new();
        for r in 1..=degree {
            for m in sq_lower(r, &e).terms() {
                image.insert((r, m.clone()));
            }
        }
        if let Some(c) = span.push(image) {
            let k = Element::from_terms(space, c.iter().map(|&i| symbols[i].value.clone()));
            if !k.is_zero() {
                kernel.push(k);
            }
        }
    }
    let mut odd = Span::new();
    for sym in symbols.iter().filter(|m| m.all_entries_odd()) {
        odd.push(BTreeSet::from([sym.value.clone()]));
    }
    let contained = kernel.iter().all(|k| odd.contains(terms(k)));
    (kernel, contained)
}

fn ac4() -> Outcome {
    let mut ok = true;
    let mut dims = Vec::new();
    let cases = [
        (Space::qsn(1).unwrap(), 15u32),
        (Space::sigma2(CellComplex::two_cell_test()), 11),
    ];
    for (space, top) in cases {
        for d in (1..=top).step_by(2) {
            let (kernel, contained) = annihilated_kernel(&space, d);
            let report = wellington_check(&space, d);
            let agrees = matches!(&report, Ok(r) if r.contained && r.annihilated.len() == kernel.len());
            ok &= contained && agrees;
            dims.push(format!("{}/{d}:{}", space.id(), kernel.len()));
        }
    }
    pass(ok, format!("annihilated dimensions [{}]", dims.join(" ")))
}

fn ac5() -> Outcome {
    let mut ok = true;
    for space in [Space::qs0(), Space::qsn(1).unwrap()] {
        for d in 1..=12u32 {
            let decomposables: Vec<Element> = basis_enumerate(&space, d, Some(0))
                .into_iter()
                .filter(|m| m.as_single_generator().is_none())
                .map(|m| Element::from_monomial(&space, m))
                .collect();
            for e in &decomposables {
                ok &= suspend(e).unwrap().is_zero();
            }
            let kernel = suspension_kernel_basis(&space, d).unwrap();
            ok &= kernel.len() == decomposables.len() && same_span(&kernel, &decomposables);
        }
    }
    pass(ok, "Q_0S^0 -> QS^1 and QS^1 -> QS^2 in degrees 1..12".into())
}

fn ac6() -> Outcome {
    fn brute(l: u32, z: u64) -> u64 {
        // every subset of 1..l-1 applied innermost-largest
        let mut best = z;
        for mask in 0u32..(1 << (l - 1)) {
            let js: Vec<u64> = (1..l).filter(|j| mask >> (j - 1) & 1 == 1).map(u64::from).collect();
            let mut d = z;
            for j in js.iter().rev() {
                d = 2 * d + j;
            }
            best = best.max(d);
        }
        best
    }
    let mut ok = true;
    for l in 2..=10u32 {
        let closed = (1u64 << (l - 1)) * (l as u64 - 1) + 1;
        ok &= max_generator_dim(l, 1).unwrap() == closed && brute(l, 1) == closed;
        let r = bound_report(l, None).unwrap();
        ok &= r.printed == (1i64 << (l - 1)) * l as i64 + 2 && r.printed == bound_s_minus1(l);
        ok &= r.oracle == 2 * closed as i64 && r.discrepancy == (r.printed != r.oracle);
    }
    let r3 = bound_report(3, None).unwrap();
    ok &= r3.printed == 14 && r3.oracle == 18 && r3.discrepancy;
    pass(
        ok,
        format!("maxima match 2^(l-1)(l-1)+1 for l=2..10; S^-1 at l=3: printed {} oracle {} discrepancy {}", r3.printed, r3.oracle, r3.discrepancy),
    )
}

fn ac7() -> Outcome {
    let ok = (1..=30u32).all(|k| {
        let lhs: u128 = (1..=k as u128).map(|i| i << (i - 1)).sum();
        lhs == ((k as u128 - 1) << k) + 1 && sum_identity_check(k)
    });
    pass(ok, "k = 1..30".into())
}

type Triple = (Monomial, Monomial, Monomial);

fn hopf_checks(space: &Arc<Space>, top: u32) -> (bool, usize) {
    let mut monomials = Vec::new();
    for d in 1..=top {
        monomials.extend(basis_enumerate(space, d, Some(0)));
    }
    let psi = |m: &Monomial| coproduct(&Element::from_monomial(space, m.clone()));
    let mut ok = true;
    for m in &monomials {
        let p = psi(m);
        // coassociativity
        let mut left: BTreeSet<Triple> = BTreeSet::new();
        let mut right: BTreeSet<Triple> = BTreeSet::new();
        for (a, b) in p.terms() {
            for (a1, a2) in psi(a).terms() {
                toggle(&mut left, &BTreeSet::from([(a1.clone(), a2.clone(), b.clone())]));
            }
            for (b1, b2) in psi(b).terms() {
                toggle(&mut right, &BTreeSet::from([(a.clone(), b1.clone(), b2.clone())]));
            }
        }
        ok &= left == right;
        // counit on both sides
        let mut l_unit = BTreeSet::new();
        let mut r_unit = BTreeSet::new();
        for (a, b) in p.terms() {
            if a.is_scalar() {
                toggle(&mut l_unit, &BTreeSet::from([b.clone()]));
            }
            if b.is_scalar() {
                toggle(&mut r_unit, &BTreeSet::from([a.clone()]));
            }
        }
        ok &= l_unit == BTreeSet::from([m.clone()]) && r_unit == l_unit;
        // Sq^1 Sq^1
        let e = Element::from_monomial(space, m.clone());
        ok &= sq_lower(1, &sq_lower(1, &e)).is_zero();
    }
    // multiplicativity on all pairs within the degree range
    let mut pairs = 0;
    for (i, m1) in monomials.iter().enumerate() {
        for m2 in &monomials[i..] {
            if m1.dim(space) + m2.dim(space) > top {
                continue;
            }
            pairs += 1;
            let mut want = BTreeSet::new();
            for (a1, b1) in psi(m1).terms() {
                for (a2, b2) in psi(m2).terms() {
                    toggle(&mut want, &BTreeSet::from([(a1.mul(a2), b1.mul(b2))]));
                }
            }
            let got: BTreeSet<_> = psi(&m1.mul(m2)).terms().iter().cloned().collect();
            ok &= got == want;
        }
    }
    (ok, monomials.len() + pairs)
}

fn ac8() -> Outcome {
    let (a, na) = hopf_checks(&Space::qsn(1).unwrap(), 10);
    let (b, nb) = hopf_checks(&Space::qs0(), 10);
    let suite = run_suite("hopf-consistency", Some(10)).map(|r| r.passed).unwrap_or(false);
    pass(a && b && suite, format!("{na} QS^1 and {nb} Q_0S^0 checks; library suite passed: {suite}"))
}

fn ac9() -> Outcome {
    let mut ok = true;
    for l in 1..=10u32 {
        for n in 1..=10u32 {
            let d = bound_main1(l, n) + 1;
            let printed = (1i64 << l) * (n as i64 + 2) + (1i64 << (l - 1)) * (l as i64 - 2) + 2;
            ok &= d == printed + 1;
            let (l, n) = (l as i64, n as i64);
            ok &= !(d + l < 2 * (n + l - 1)) && !stable_range_check(d, n, l);
        }
    }
    pass(ok, "bound_main1(l,n)+1 lies outside the stable range for 1 <= l,n <= 10".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC-1", ac1),
        ("AC-2", ac2),
        ("AC-3", ac3),
        ("AC-4", ac4),
        ("AC-5", ac5),
        ("AC-6", ac6),
        ("AC-7", ac7),
        ("AC-8", ac8),
        ("AC-9", ac9),
    ];
    let mut unexpected = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let o = f();
        let secs = t.elapsed().as_secs_f64();
        let status = match (o.pass, o.expected_fail) {
            (true, _) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("{name} {status} [{secs:.2}s] {}", o.detail);
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
