mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use tangle_embed::bracket::{jones, jones_default, linking_number};
use tangle_embed::catalog::{reproduce_tables, SetMember};
use tangle_embed::diagram::{parse_diagram, LinkDiagram, TangleDiagram};
use tangle_embed::expr::{montesinos_verdict, three_factor_verdict, EmbedVerdict};
use tangle_embed::fraction::Fraction;
use tangle_embed::quandle::*;

const REPRODUCE_LIMIT: Duration = Duration::from_secs(60);
const SUITE_LIMIT: Duration = Duration::from_secs(300);
const MAX_MODULUS: u64 = 13;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn f(p: i64, q: i64) -> Fraction {
    Fraction::of(p, q)
}

fn classification() -> Outcome {
    let start = Instant::now();
    let report = reproduce_tables(&common::catalog());
    let took = start.elapsed();
    let show = |m: &[SetMember]| {
        m.iter()
            .map(|s| format!("{}[{}]", s.name, s.closure))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let unknottable = show(&report.unknottable);
    let unlinkable = show(&report.unlinkable);
    let splittable = show(&report.splittable);
    check(
        unknottable == "5_1[-1] 6_1[-1] 7_2[-1] 7_5[0] 7_7[0] 7_14[-1]",
        format!("unknottable {unknottable}"),
    )?;
    check(unlinkable == "6_3[0]", format!("unlinkable {unlinkable}"))?;
    check(splittable == "6_3[0]", format!("splittable {splittable}"))?;
    check(report.matches, format!("diff {:?}", report.diff))?;
    check(took < REPRODUCE_LIMIT, format!("took {took:?}"))?;
    Ok(format!(
        "unknottable {unknottable}; unlinkable = splittable {unlinkable}; {took:.2?}"
    ))
}

fn algebraic_verdicts() -> Outcome {
    let montesinos: [(&str, [Fraction; 2]); 5] = [
        ("6_2", [f(1, 3), f(1, 3)]),
        ("7_1", [f(1, 2), f(1, 5)]),
        ("7_3", [f(1, 2), f(2, 7)]),
        ("7_4", [f(1, 3), f(1, 4)]),
        ("7_6", [f(1, 3), f(2, 5)]),
    ];
    let products: [(&str, [Fraction; 3]); 7] = [
        ("6_4", [f(1, 3), f(-1, 2), f(-2, 1)]),
        ("7_8", [f(-1, 2), f(-1, 3), f(-2, 1)]),
        ("7_9", [f(-1, 2), f(-2, 3), f(-2, 1)]),
        ("7_10", [f(-1, 2), f(1, 3), f(3, 1)]),
        ("7_11", [f(-2, 3), f(1, 2), f(-3, 1)]),
        ("7_12", [f(2, 3), f(-1, 2), f(-2, 1)]),
        ("7_16", [f(1, 3), f(1, 3), f(-2, 1)]),
    ];
    let mut all: Vec<(&str, EmbedVerdict)> = Vec::new();
    for (name, t) in &montesinos {
        all.push((
            name,
            montesinos_verdict(t).map_err(|e| format!("{name}: {e}"))?,
        ));
    }
    for (name, [a, b, c]) in &products {
        all.push((
            name,
            three_factor_verdict(a, b, c).map_err(|e| format!("{name}: {e}"))?,
        ));
    }
    let table_one = [
        "6_4", "7_1", "7_3", "7_4", "7_6", "7_8", "7_9", "7_10", "7_11", "7_12",
    ];
    for (name, v) in &all {
        if table_one.contains(name) {
            check(
                v.unknottable.is_no(),
                format!("{name} unknottable {}", v.unknottable),
            )?;
        }
        check(
            v.unlinkable.is_no(),
            format!("{name} unlinkable {}", v.unlinkable),
        )?;
        check(
            v.splittable.is_no(),
            format!("{name} splittable {}", v.splittable),
        )?;
    }
    Ok(format!("{} expressions, all No", all.len()))
}

fn coloring_invariants() -> Outcome {
    let c = common::catalog();
    for (name, want) in [
        ("7_13", f(3, 4)),
        ("7_15", f(2, 3)),
        ("7_17", f(8, 7)),
        ("7_18", f(2, 1)),
    ] {
        let got = coloring_fraction(&common::entry(&c, name).diagram);
        check(
            got == ColoringFraction::Fraction(want.clone()),
            format!("{name}: {got}, expected {want}"),
        )?;
    }
    let list = common::fractions(13);
    for x in &list {
        let got = coloring_fraction(&TangleDiagram::rational(x));
        check(
            got == ColoringFraction::Fraction(x.clone()),
            format!("[{x}]: {got}"),
        )?;
    }
    Ok(format!("table values and {} rational tangles", list.len()))
}

fn monochromaticity() -> Outcome {
    let c = common::catalog();
    let r = monochromatic_report(&common::entry(&c, "6_4").diagram);
    check(r.c_trivial_for_all_n, "6_4 is not c-trivial")?;
    for name in ["7_13", "7_15", "7_17", "7_18"] {
        check(
            monochromatic_report(&common::entry(&c, name).diagram).r0_monochromatic,
            format!("{name} not R_0-monochromatic"),
        )?;
    }
    let mut witnesses = Vec::new();
    for name in ["6_2", "6_3", "7_13", "7_15", "7_16", "7_17", "7_18"] {
        let d = &common::entry(&c, name).diagram;
        let n = (2..=50u64)
            .find(|&n| has_nontrivial_c_coloring(d, n))
            .ok_or(format!("{name}: no modulus ≤ 50"))?;
        witnesses.push(format!("{name}:R_{n}"));
    }
    Ok(witnesses.join(" "))
}

fn obstruction_evidence() -> Outcome {
    let c = common::catalog();
    let trefoil = common::left_trefoil();
    let unknot = LinkDiagram::unlink(1);
    let l13 = common::entry(&c, "7_13")
        .diagram
        .plus(&f(-3, 4))
        .close_numerator();
    for t in [trefoil.clone(), trefoil.mirror()] {
        let split = jones_default(&t.disjoint_union(&unknot)).map_err(|e| e.to_string())?;
        for o in l13.orientations() {
            check(
                jones(&l13, &o).map_err(|e| e.to_string())? != split,
                "7_13 closure matches trefoil and unknot",
            )?;
        }
    }
    let l15 = common::entry(&c, "7_15")
        .diagram
        .plus(&f(-2, 3))
        .close_numerator();
    let unlink = jones_default(&LinkDiagram::unlink(2)).map_err(|e| e.to_string())?;
    for o in l15.orientations() {
        check(
            jones(&l15, &o).map_err(|e| e.to_string())? != unlink,
            "7_15 closure matches the 2-unlink",
        )?;
    }
    let mut lk = Vec::new();
    for (name, x) in [("7_17", f(-8, 7)), ("7_18", f(-2, 1))] {
        let l = common::entry(&c, name).diagram.plus(&x).close_numerator();
        let n = linking_number(&l, &[false, false]).map_err(|e| e.to_string())?;
        check(n != 0, format!("{name}: linking number 0"))?;
        lk.push(format!("lk {name} {n}"));
    }
    let v13 = jones_default(&l13).map_err(|e| e.to_string())?;
    Ok(format!("V(N(7_13 + [-3/4])) = {v13}; {}", lk.join(", ")))
}

fn determinant_zero() -> Outcome {
    let mut done = Vec::new();
    for e in common::catalog() {
        if !monochromatic_report(&e.diagram).r0_monochromatic {
            continue;
        }
        let ColoringFraction::Fraction(x) = coloring_fraction(&e.diagram) else {
            return Err(format!("{}: no fraction", e.name));
        };
        let det = determinant(&e.diagram.plus(&x.mirror()).close_numerator());
        check(det.is_zero(), format!("{}: det {det}", e.name))?;
        done.push(e.name);
    }
    check(done.len() >= 4, "fewer than four monochromatic entries")?;
    Ok(done.join(" "))
}

fn timed(f: impl FnOnce() -> Result<(), String>) -> Result<Duration, String> {
    let start = Instant::now();
    f()?;
    let took = start.elapsed();
    check(took < SUITE_LIMIT, format!("took {took:?}"))?;
    Ok(took)
}

fn property_suites() -> Outcome {
    let mut r = common::rng(71);
    let mut diagrams: Vec<TangleDiagram> =
        common::catalog().into_iter().map(|e| e.diagram).collect();
    diagrams.extend((0..40).map(|_| common::random_tangle(&mut r, 10)));
    let alternating = timed(|| {
        for d in &diagrams {
            for n in 2..=MAX_MODULUS {
                let lat = color_solve_dihedral(d, n);
                for col in lat.enumerate(5000).unwrap_or_default() {
                    let b = lat.boundary_colors(&col).unwrap();
                    check(
                        alternating_sum_check(&b, &BigInt::from(n)),
                        format!("{d} mod {n}"),
                    )?;
                }
            }
        }
        Ok(())
    })?;
    let nullity = timed(|| {
        for d in &diagrams {
            check(
                color_solve_dihedral(d, 0).free_rank() >= d.strand_count(),
                format!("{d} over Z"),
            )?;
            for n in 2..=MAX_MODULUS {
                let lat = color_solve_dihedral(d, n);
                check(
                    lat.count() >= Some(BigInt::from(n).pow(d.strand_count() as u32)),
                    format!("{d} mod {n}"),
                )?;
            }
        }
        Ok(())
    })?;
    let stability = timed(|| {
        let (two, minus) = (f(2, 1), f(-2, 1));
        for _ in 0..100 {
            let d = common::random_tangle(&mut r, 10);
            for n in 2..=MAX_MODULUS {
                let base = has_nontrivial_c_coloring(&d, n);
                check(
                    base == has_nontrivial_c_coloring(&d.plus(&two), n),
                    format!("{d} + [2] mod {n}"),
                )?;
                check(
                    base == has_nontrivial_c_coloring(&d.plus(&minus), n),
                    format!("{d} + [-2] mod {n}"),
                )?;
            }
        }
        Ok(())
    })?;
    let additivity = timed(|| {
        for _ in 0..300 {
            let (x, y) = (
                common::random_fraction(&mut r, 9),
                common::random_fraction(&mut r, 9),
            );
            let ok = fraction_additivity_check(
                &TangleDiagram::rational(&x),
                &TangleDiagram::rational(&y),
            );
            check(ok, format!("[{x}] + [{y}]"))?;
        }
        Ok(())
    })?;
    let structural = timed(|| {
        for x in common::fractions(40) {
            check(
                x.rotate().rotate().rotate().rotate() == x,
                format!("rot^4 {x}"),
            )?;
            let cf = x.continued_fraction().map_err(|e| e.to_string())?;
            check(
                Fraction::from_continued_fraction(&cf).map_err(|e| e.to_string())? == x,
                format!("cf {x}"),
            )?;
        }
        for _ in 0..100 {
            let d = common::random_tangle(&mut r, 12);
            let back = parse_diagram(&d.to_string())
                .and_then(|a| a.into_tangle())
                .map_err(|e| e.to_string())?;
            check(back == d, format!("round trip {d}"))?;
            check(
                d.close_denominator().canonical() == d.rotate().close_numerator().canonical(),
                format!("D vs N rot {d}"),
            )?;
        }
        let table = |n: usize| {
            FiniteTable::new(
                (0..n)
                    .map(|x| (0..n).map(|y| (2 * y + 2 * n - x) % n).collect())
                    .collect(),
            )
            .unwrap()
        };
        for e in common::catalog() {
            let arcs = tangle_arcs(&e.diagram);
            let over_in: Vec<usize> = e
                .diagram
                .orient(&[false, false])
                .iter()
                .map(|c| c.over_in)
                .collect();
            for n in [2usize, 3, 5, 7] {
                let found = color_search_finite(&arcs, &over_in, &table(n)).len();
                let count = color_solve_dihedral(&e.diagram, n as u64)
                    .count()
                    .unwrap_or_default();
                check(
                    BigInt::from(found) == count,
                    format!("{} mod {n}: {found} vs {count}", e.name),
                )?;
            }
        }
        Ok(())
    })?;
    Ok(format!(
        "alternating sum {alternating:.2?}, nullity {nullity:.2?}, ±2 stability {stability:.2?}, additivity {additivity:.2?}, structural {structural:.2?}"
    ))
}

fn four_element_quandle() -> Outcome {
    let q = Quandle::z2t().table().map_err(|e| e.to_string())?;
    quandle_check(q.rows()).map_err(|e| e.to_string())?;
    check(q.size() == 4, "table size")?;
    let c = common::catalog();
    let d = &common::entry(&c, "7_7").diagram;
    let mut hits = Vec::new();
    for o in d.orientations() {
        let n = nontrivial_c_colorings(d, &o, &q).len();
        if n > 0 {
            let tag: String = o.iter().map(|&rev| if rev { 'r' } else { '+' }).collect();
            hits.push(format!("{tag}:{n}"));
        }
    }
    check(
        !hits.is_empty(),
        "no orientation of 7_7 admits a nontrivial c-coloring",
    )?;
    Ok(format!("axioms hold; 7_7 colorings {}", hits.join(" ")))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 classification reproduction", classification),
        ("2 algebraic expression verdicts", algebraic_verdicts),
        ("3 coloring invariants", coloring_invariants),
        ("4 monochromaticity", monochromaticity),
        ("5 obstruction evidence", obstruction_evidence),
        ("6 determinant-zero theorem", determinant_zero),
        ("7 property suites", property_suites),
        ("8 four-element quandle", four_element_quandle),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match std::panic::catch_unwind(run) {
            Ok(Ok(detail)) => println!("PASS {name}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {name}: panicked");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
