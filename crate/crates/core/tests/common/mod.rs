#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangle_embed::catalog::{bundled_catalog, CatalogEntry};
use tangle_embed::diagram::{parse_diagram, LinkDiagram, TangleDiagram};
use tangle_embed::fraction::Fraction;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn catalog() -> Vec<CatalogEntry> {
    bundled_catalog().expect("bundled catalog loads")
}

pub fn entry<'a>(c: &'a [CatalogEntry], name: &str) -> &'a CatalogEntry {
    c.iter()
        .find(|e| e.name == name)
        .unwrap_or_else(|| panic!("no entry {name}"))
}

/// Reduced fractions with `|p| ≤ max`, `1 ≤ q ≤ max`.
pub fn fractions(max: i64) -> Vec<Fraction> {
    let mut out = Vec::new();
    for q in 1..=max {
        for p in -max..=max {
            if num_integer::gcd(p, q) == 1 {
                out.push(Fraction::of(p, q));
            }
        }
    }
    out
}

pub fn random_fraction(r: &mut ChaCha8Rng, max: i64) -> Fraction {
    loop {
        let p = r.gen_range(-max..=max);
        let q = r.gen_range(1..=max);
        if num_integer::gcd(p, q) == 1 {
            return Fraction::of(p, q);
        }
    }
}

fn random_piece(r: &mut ChaCha8Rng, depth: u32) -> TangleDiagram {
    if depth == 0 || r.gen_bool(0.3) {
        return TangleDiagram::rational(&random_fraction(r, 4));
    }
    let a = random_piece(r, depth - 1);
    let b = random_piece(r, depth - 1);
    let d = match r.gen_range(0..4) {
        0 => a.sum(&b),
        1 => a.product(&b),
        2 => a.rotate().sum(&b),
        _ => a.sum(&b).mirror(),
    };
    if r.gen_bool(0.2) {
        d.rotate()
    } else {
        d
    }
}

/// A random valid algebraic tangle diagram with at most `max_crossings`.
pub fn random_tangle(r: &mut ChaCha8Rng, max_crossings: usize) -> TangleDiagram {
    loop {
        let d = random_piece(r, 3);
        if d.crossing_count() <= max_crossings && d.validate().is_ok() {
            return d;
        }
    }
}

pub fn left_trefoil() -> LinkDiagram {
    parse_diagram("link\nX 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n")
        .unwrap()
        .into_link()
        .unwrap()
}
