mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use tangle_embed::bracket::*;
use tangle_embed::diagram::{Crossing, LinkDiagram, TangleDiagram};
use tangle_embed::expr::parse_expr;
use tangle_embed::fraction::Fraction;
use tangle_embed::poly::{Gaussian, LaurentPoly, Var};
use tangle_embed::quandle::determinant;

fn a_mono(c: i64, e: i64) -> LaurentPoly {
    LaurentPoly::monomial(Var::A, c, e)
}

/// Closed diagrams: numerator and denominator closures of the catalog and of
/// random tangles, without free loops.
fn closures(seed: u64, random: usize) -> Vec<LinkDiagram> {
    let mut r = common::rng(seed);
    let mut tangles: Vec<TangleDiagram> =
        common::catalog().into_iter().map(|e| e.diagram).collect();
    tangles.extend((0..random).map(|_| common::random_tangle(&mut r, 9)));
    tangles
        .iter()
        .flat_map(|d| [d.close_numerator(), d.close_denominator()])
        .filter(|l| l.loops == 0 && !l.crossings.is_empty())
        .collect()
}

/// Inserts a curl on one end of edge `ports[port]` of crossing `at`.
fn kink(l: &LinkDiagram, at: usize, port: usize, variant: u8) -> LinkDiagram {
    let top = l.crossings.iter().flat_map(|c| c.ports).max().unwrap();
    let (f, k) = (top + 1, top + 2);
    let mut out = l.clone();
    let e = out.crossings[at].ports[port];
    out.crossings[at].ports[port] = f;
    let ports = if variant & 1 == 0 {
        [e, k, k, f]
    } else {
        [e, f, k, k]
    };
    out.crossings.push(Crossing::new(ports, variant & 2 != 0));
    out
}

#[test]
fn curls_scale_the_bracket_and_fix_jones() {
    let mut r = common::rng(31);
    for l in closures(31, 30) {
        let b = kauffman_bracket(&l).unwrap();
        let v = jones_default(&l).unwrap();
        let at = r.gen_range(0..l.crossings.len());
        let port = r.gen_range(0..4);
        for variant in 0..4u8 {
            let k = kink(&l, at, port, variant);
            assert!(k.validate().is_ok(), "{k}");
            assert_eq!(k.component_count(), l.component_count());
            let kb = kauffman_bracket(&k).unwrap();
            assert!(
                kb == &a_mono(-1, 3) * &b || kb == &a_mono(-1, -3) * &b,
                "{l} variant {variant}"
            );
            assert_eq!(
                jones(&k, &vec![false; k.component_count()]).unwrap(),
                v,
                "{l} variant {variant}"
            );
        }
    }
}

#[test]
fn cancelling_twists_fix_jones() {
    let mut r = common::rng(32);
    let mut tangles: Vec<TangleDiagram> =
        common::catalog().into_iter().map(|e| e.diagram).collect();
    tangles.extend((0..30).map(|_| common::random_tangle(&mut r, 9)));
    let (pos, neg) = (TangleDiagram::unit(true), TangleDiagram::unit(false));
    for d in &tangles {
        let l = d.close_numerator();
        let moved = d.sum(&pos).sum(&neg).close_numerator();
        assert_eq!(
            kauffman_bracket(&moved).unwrap(),
            kauffman_bracket(&l).unwrap(),
            "{d}"
        );
        let vertical = d
            .product(&pos.rotate())
            .product(&neg.rotate())
            .close_numerator();
        assert_eq!(
            kauffman_bracket(&vertical).unwrap(),
            kauffman_bracket(&l).unwrap(),
            "{d}"
        );
    }
}

/// Jones over every orientation, which isotopy preserves as a set.
fn jones_set(l: &LinkDiagram) -> Vec<String> {
    let mut out: Vec<String> = l
        .orientations()
        .iter()
        .map(|o| jones(l, o).unwrap().to_string())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Rearranged builds of the same rational and Montesinos tangles differ by
/// flypes and third moves.
#[test]
fn rearranged_builds_have_equal_jones() {
    let no_names = |_: &str| None;
    let build =
        |s: &str| TangleDiagram::from_expression(&parse_expr(s).unwrap(), &no_names).unwrap();
    let list: Vec<Fraction> = common::fractions(5)
        .into_iter()
        .filter(|f| f.den() > &BigInt::from(1))
        .collect();
    for f in &list {
        let direct = TangleDiagram::rational(f).close_numerator();
        let v = jones_set(&direct);
        for n in -2..=2i64 {
            let rest = f.add_integer(&BigInt::from(-n));
            let split = build(&format!("[{n}] + [{rest}]")).close_numerator();
            assert_eq!(jones_set(&split), v, "[{f}] as [{n}] + [{rest}]");
        }
    }
    let mut r = common::rng(33);
    for _ in 0..40 {
        let t: Vec<Fraction> = (0..3).map(|_| common::random_fraction(&mut r, 4)).collect();
        let one = build(&format!("[{}] + [{}] + [{}]", t[0], t[1], t[2])).close_numerator();
        let other = build(&format!("[{}] + [{}] + [{}]", t[0], t[2], t[1])).close_numerator();
        assert_eq!(one.component_count(), other.component_count());
        assert_eq!(jones_set(&one), jones_set(&other), "{t:?}");
    }
}

#[test]
fn skein_relation_on_a_boundary_crossing() {
    let mut r = common::rng(34);
    let a = a_mono(1, 1);
    let a_inv = a_mono(1, -1);
    for _ in 0..60 {
        let d = common::random_tangle(&mut r, 9);
        let crossed =
            kauffman_bracket(&d.sum(&TangleDiagram::unit(true)).close_numerator()).unwrap();
        let zero = kauffman_bracket(&d.close_numerator()).unwrap();
        let inf = kauffman_bracket(&d.close_denominator()).unwrap();
        let one_way = &(&a * &zero) + &(&a_inv * &inf);
        let other_way = &(&a_inv * &zero) + &(&a * &inf);
        assert!(crossed == one_way || crossed == other_way, "{d}");
    }
    let probe = kauffman_bracket(&TangleDiagram::unit(true).close_numerator()).unwrap();
    let zero = kauffman_bracket(&TangleDiagram::zero().close_numerator()).unwrap();
    let inf = kauffman_bracket(&TangleDiagram::infinity().close_numerator()).unwrap();
    assert!(probe == &(&a * &zero) + &(&a_inv * &inf) || probe == &(&a_inv * &zero) + &(&a * &inf));
}

#[test]
fn value_at_minus_one_is_the_determinant() {
    let i = Gaussian::integer(0, 1);
    let mut checked = 0;
    for l in closures(35, 60) {
        if l.component_count() != 1 {
            continue;
        }
        let v = jones_default(&l).unwrap();
        let det = determinant(&l);
        assert_eq!(
            v.eval(&i).norm(),
            BigRational::from_integer(&det * &det),
            "{l}"
        );
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} knots");
}

#[test]
fn distant_union_multiplies() {
    let list = closures(36, 10);
    for (x, y) in list.iter().zip(list.iter().rev()).take(20) {
        if x.crossings.len() + y.crossings.len() > DEFAULT_CROSSING_BUDGET {
            continue;
        }
        let u = x.disjoint_union(y);
        let expect =
            &(&jones_loop_factor() * &jones_default(x).unwrap()) * &jones_default(y).unwrap();
        assert_eq!(jones_default(&u).unwrap(), expect, "{x} and {y}");
        let b = &(&loop_factor() * &kauffman_bracket(x).unwrap()) * &kauffman_bracket(y).unwrap();
        assert_eq!(kauffman_bracket(&u).unwrap(), b);
    }
}

#[test]
fn mirror_inverts_and_reversal_fixes_jones() {
    for l in closures(37, 20) {
        let v = jones_default(&l).unwrap();
        let m = jones_default(&l.mirror()).unwrap();
        assert_eq!(m, v.substitute(Var::SqrtT, -1, 1).unwrap(), "{l}");
        let all = vec![true; l.component_count()];
        assert_eq!(jones(&l, &all).unwrap(), v, "{l}");
    }
}

#[test]
fn split_evidence_for_polyhedral_entries() {
    let c = common::catalog();
    let trefoil = common::left_trefoil();
    let unknot = LinkDiagram::unlink(1);
    let l13 = common::entry(&c, "7_13")
        .diagram
        .plus(&Fraction::of(-3, 4))
        .close_numerator();
    for t in [trefoil.clone(), trefoil.mirror()] {
        for rev in [[false, false], [false, true]] {
            assert_ne!(
                jones(&l13, &rev).unwrap(),
                jones_default(&t.disjoint_union(&unknot)).unwrap()
            );
        }
    }
    assert_eq!(l13.component_count(), 2);
    let l15 = common::entry(&c, "7_15")
        .diagram
        .plus(&Fraction::of(-2, 3))
        .close_numerator();
    assert_eq!(l15.component_count(), 2);
    for rev in [[false, false], [false, true]] {
        assert_ne!(
            jones(&l15, &rev).unwrap(),
            jones_default(&LinkDiagram::unlink(2)).unwrap()
        );
    }
    for (name, f) in [
        ("7_17", Fraction::of(-8, 7)),
        ("7_18", Fraction::integer(-2)),
    ] {
        let l = common::entry(&c, name).diagram.plus(&f).close_numerator();
        assert_ne!(linking_number(&l, &[false, false]).unwrap(), 0, "{name}");
        assert!(not_split_witness(&l).unwrap().is_some(), "{name}");
    }
}

#[test]
fn budget_guard() {
    let big = TangleDiagram::rational(&Fraction::integer(30)).close_numerator();
    assert!(matches!(
        kauffman_bracket(&big),
        Err(BracketError::Budget { crossings: 30, .. })
    ));
}
