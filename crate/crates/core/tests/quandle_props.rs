mod common;

use num_bigint::BigInt;
use num_traits::Zero;
use tangle_embed::diagram::TangleDiagram;
use tangle_embed::fraction::Fraction;
use tangle_embed::quandle::*;

fn dihedral_table(n: usize) -> FiniteTable {
    FiniteTable::new(
        (0..n)
            .map(|x| (0..n).map(|y| (2 * y + 2 * n - x) % n).collect())
            .collect(),
    )
    .unwrap()
}

#[test]
fn nullity_at_least_strand_count() {
    let mut r = common::rng(21);
    let mut diagrams: Vec<TangleDiagram> =
        common::catalog().into_iter().map(|e| e.diagram).collect();
    diagrams.extend((0..60).map(|_| common::random_tangle(&mut r, 10)));
    for d in &diagrams {
        assert!(color_solve_dihedral(d, 0).free_rank() >= 2, "{d}");
        for n in 2..=13u64 {
            let count = color_solve_dihedral(d, n).count().unwrap();
            assert!(count >= BigInt::from(n * n), "{d} mod {n}: {count}");
        }
    }
}

#[test]
fn polychromatic_is_stable_under_two_twists() {
    let mut r = common::rng(22);
    let (two, minus_two) = (Fraction::of(2, 1), Fraction::of(-2, 1));
    for _ in 0..100 {
        let d = common::random_tangle(&mut r, 10);
        for n in 2..=13u64 {
            let base = has_nontrivial_c_coloring(&d, n);
            assert_eq!(
                base,
                has_nontrivial_c_coloring(&d.plus(&two), n),
                "{d} + [2] mod {n}"
            );
            assert_eq!(
                base,
                has_nontrivial_c_coloring(&d.plus(&minus_two), n),
                "{d} + [-2] mod {n}"
            );
            // Stacked twists force equal colors only when 2 is invertible.
            if n % 2 == 1 {
                for t in [&two, &minus_two] {
                    let below = TangleDiagram::rational(t);
                    assert_eq!(
                        base,
                        has_nontrivial_c_coloring(&d.product(&below), n),
                        "{d} * [{t}] mod {n}"
                    );
                }
            }
        }
    }
}

#[test]
fn finite_search_agrees_with_lattice() {
    for e in common::catalog() {
        let d = &e.diagram;
        let arcs = tangle_arcs(d);
        let over_in: Vec<usize> = d
            .orient(&[false, false])
            .iter()
            .map(|c| c.over_in)
            .collect();
        for n in [2usize, 3, 5, 7] {
            let found = color_search_finite(&arcs, &over_in, &dihedral_table(n)).len();
            let count = color_solve_dihedral(d, n as u64).count().unwrap();
            assert_eq!(BigInt::from(found), count, "{} mod {n}", e.name);
        }
    }
}

#[test]
fn determinant_minors_agree() {
    let mut r = common::rng(23);
    let mut done = 0;
    while done < 50 {
        let l = common::random_tangle(&mut r, 10).close_numerator();
        if l.loops > 0 || l.crossings.is_empty() {
            continue;
        }
        done += 1;
        let det = determinant(&l);
        let arcs = link_arcs(&l);
        for row in 0..l.crossings.len() {
            for col in 0..arcs.count {
                assert_eq!(
                    determinant_minor(&l, row, col),
                    det,
                    "{l} row {row} col {col}"
                );
            }
        }
    }
}

#[test]
fn split_candidate_has_zero_determinant() {
    for e in common::catalog() {
        if !monochromatic_report(&e.diagram).r0_monochromatic {
            continue;
        }
        if let ColoringFraction::Fraction(f) = coloring_fraction(&e.diagram) {
            let l = e.diagram.plus(&f.mirror()).close_numerator();
            assert!(
                determinant(&l).is_zero(),
                "{}: det N(T + [{}])",
                e.name,
                f.mirror()
            );
        }
    }
}

#[test]
fn monochromatic_pairs_have_opposite_fractions() {
    let c = common::catalog();
    let mut pairs: Vec<(TangleDiagram, TangleDiagram)> = common::fractions(7)
        .into_iter()
        .map(|f| {
            (
                TangleDiagram::rational(&f),
                TangleDiagram::rational(&f.mirror()),
            )
        })
        .collect();
    for (name, f) in [
        ("7_13", Fraction::of(-3, 4)),
        ("7_15", Fraction::of(-2, 3)),
        ("6_3", Fraction::zero()),
    ] {
        pairs.push((
            common::entry(&c, name).diagram.clone(),
            TangleDiagram::rational(&f),
        ));
    }
    let mut checked = 0;
    for (a, b) in &pairs {
        let l = a.sum(b).close_numerator();
        let colorable = color_solve_dihedral_link(&l, 0).free_rank() >= 2;
        if !(colorable
            && monochromatic_report(a).r0_monochromatic
            && monochromatic_report(b).r0_monochromatic)
        {
            continue;
        }
        let (fa, fb) = (coloring_fraction(a), coloring_fraction(b));
        assert_eq!(
            fa.fraction().map(Fraction::mirror).as_ref(),
            fb.fraction(),
            "{a}"
        );
        checked += 1;
    }
    assert!(
        checked >= pairs.len() / 2,
        "only {checked} pairs met the hypotheses"
    );
}

#[test]
fn colorings_satisfy_the_alternating_sum() {
    let mut r = common::rng(24);
    let mut diagrams: Vec<TangleDiagram> =
        common::catalog().into_iter().map(|e| e.diagram).collect();
    diagrams.extend((0..40).map(|_| common::random_tangle(&mut r, 8)));
    for d in &diagrams {
        for n in [2u64, 3, 5, 7] {
            let lat = color_solve_dihedral(d, n);
            for c in lat.enumerate(5000).unwrap_or_default() {
                let b = lat.boundary_colors(&c).unwrap();
                assert!(
                    alternating_sum_check(&b, &BigInt::from(n)),
                    "{d} mod {n}: {b:?}"
                );
            }
        }
        let lat = color_solve_dihedral(d, 0);
        for g in lat.generators() {
            assert!(
                alternating_sum_check(&lat.boundary_colors(&g).unwrap(), &BigInt::zero()),
                "{d}"
            );
        }
    }
}

#[test]
fn rational_fractions_are_recovered() {
    for f in common::fractions(13) {
        assert_eq!(
            coloring_fraction(&TangleDiagram::rational(&f)),
            ColoringFraction::Fraction(f.clone())
        );
    }
    assert_eq!(
        coloring_fraction(&TangleDiagram::infinity()),
        ColoringFraction::Fraction(Fraction::infinity())
    );
}

#[test]
fn fractions_add_on_rational_pairs() {
    let mut r = common::rng(25);
    for _ in 0..300 {
        let (f, g) = (
            common::random_fraction(&mut r, 9),
            common::random_fraction(&mut r, 9),
        );
        assert!(
            fraction_additivity_check(&TangleDiagram::rational(&f), &TangleDiagram::rational(&g)),
            "[{f}] + [{g}]"
        );
    }
}

#[test]
fn four_element_table_is_a_quandle() {
    let q = Quandle::z2t().table().unwrap();
    assert_eq!(q.size(), 4);
    assert!(quandle_check(q.rows()).is_ok());
    assert!(!q.is_involutory());
}
