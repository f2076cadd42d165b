//! Kauffman bracket, Jones polynomial, writhe and linking numbers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::diagram::{find, LinkDiagram, TangleDiagram};
use crate::poly::{LaurentPoly, Var};

pub const DEFAULT_CROSSING_BUDGET: usize = 24;

/// Environment variable overriding [`DEFAULT_CROSSING_BUDGET`].
pub const BUDGET_ENV: &str = "TANGLE_CROSSING_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("{crossings} crossings exceed the budget of {budget}")]
    Budget { crossings: usize, budget: usize },
    #[error("expected a {expected}-component link, got {found}")]
    Components { expected: usize, found: usize },
}

pub fn crossing_budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CROSSING_BUDGET)
}

/// `−A² − A⁻²`
pub fn loop_factor() -> LaurentPoly {
    LaurentPoly::from_terms(Var::A, [(2, BigInt::from(-1)), (-2, BigInt::from(-1))])
}

/// `−t^(1/2) − t^(−1/2)`
pub fn jones_loop_factor() -> LaurentPoly {
    LaurentPoly::from_terms(Var::SqrtT, [(1, BigInt::from(-1)), (-1, BigInt::from(-1))])
}

/// State sum over all `2^k` smoothings, normalized so a single round loop
/// has bracket 1.
pub fn kauffman_bracket(d: &LinkDiagram) -> Result<LaurentPoly, BracketError> {
    let k = d.crossings.len();
    let budget = crossing_budget();
    if k > budget {
        return Err(BracketError::Budget {
            crossings: k,
            budget,
        });
    }
    let mut index = BTreeMap::new();
    for e in d.crossings.iter().flat_map(|c| c.ports.iter()) {
        let next = index.len();
        index.entry(*e).or_insert(next);
    }
    let edges = index.len();
    // Port edge indices rotated so that position 0 is an under port.
    let ports: Vec<[usize; 4]> = d
        .crossings
        .iter()
        .map(|c| {
            let u = c.under_port();
            [0, 1, 2, 3].map(|i| index[&c.ports[(u + i) % 4]])
        })
        .collect();
    // (A exponent, loop count) -> number of states
    let mut tally: BTreeMap<(i64, usize), u64> = BTreeMap::new();
    let mut parent = vec![0usize; edges];
    for state in 0u64..(1u64 << k) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        let mut merges = 0;
        let mut a_minus_b = 0i64;
        for (c, p) in ports.iter().enumerate() {
            let pairs = if state >> c & 1 == 0 {
                a_minus_b += 1;
                [(p[0], p[1]), (p[2], p[3])]
            } else {
                a_minus_b -= 1;
                [(p[1], p[2]), (p[3], p[0])]
            };
            for (x, y) in pairs {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx.max(ry)] = rx.min(ry);
                    merges += 1;
                }
            }
        }
        let loops = edges - merges + d.loops;
        *tally.entry((a_minus_b, loops)).or_insert(0) += 1;
    }
    let delta = loop_factor();
    let mut powers = vec![LaurentPoly::one(Var::A)];
    let mut out = LaurentPoly::zero(Var::A);
    for ((a, loops), count) in tally {
        while powers.len() < loops {
            let next = powers.last().expect("nonempty") * &delta;
            powers.push(next);
        }
        let term = &LaurentPoly::monomial(Var::A, count, a) * &powers[loops.max(1) - 1];
        out = &out + &term;
    }
    Ok(out)
}

pub fn writhe(d: &LinkDiagram, reverse: &[bool]) -> i64 {
    d.orient(reverse).iter().map(|c| c.sign() as i64).sum()
}

/// Half the signed count of crossings between the two components.
pub fn linking_number(d: &LinkDiagram, reverse: &[bool]) -> Result<i64, BracketError> {
    let found = d.component_count();
    if found != 2 {
        return Err(BracketError::Components { expected: 2, found });
    }
    Ok(pairwise_linking(d, reverse, 0, 1))
}

/// Linking number of components `i` and `j` of a diagram.
pub fn pairwise_linking(d: &LinkDiagram, reverse: &[bool], i: usize, j: usize) -> i64 {
    let sum: i64 = d
        .orient(reverse)
        .iter()
        .filter(|c| {
            (c.under_component == i && c.over_component == j)
                || (c.under_component == j && c.over_component == i)
        })
        .map(|c| c.sign() as i64)
        .sum();
    sum / 2
}

/// `V = (−A³)^(−w) ⟨D⟩` with `A = t^(−1/4)`, in powers of `t^(1/2)`.
pub fn jones(d: &LinkDiagram, reverse: &[bool]) -> Result<LaurentPoly, BracketError> {
    let bracket = kauffman_bracket(d)?;
    let w = writhe(d, reverse);
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let normalized = &LaurentPoly::monomial(Var::A, sign, -3 * w) * &bracket;
    Ok(normalized
        .substitute(Var::SqrtT, -1, 2)
        .expect("bracket exponents of a link are even"))
}

/// Jones polynomial with every component oriented along its traced
/// direction.
pub fn jones_default(d: &LinkDiagram) -> Result<LaurentPoly, BracketError> {
    jones(d, &vec![false; d.component_count()])
}

/// A reason the two-component link cannot be split, if the linking number
/// or the Jones polynomial shows it.
pub fn not_split_witness(d: &LinkDiagram) -> Result<Option<String>, BracketError> {
    let n = d.component_count();
    if n == 1 {
        return Ok(Some("the closure is a knot".into()));
    }
    if n != 2 {
        return Err(BracketError::Components {
            expected: 2,
            found: n,
        });
    }
    let lk = linking_number(d, &[false, false])?;
    if lk != 0 {
        return Ok(Some(format!("linking number {lk}")));
    }
    let v = jones_default(d)?;
    let k1 = d.sublink(&[true, false]);
    let k2 = d.sublink(&[false, true]);
    let split = &(&jones_loop_factor() * &jones_default(&k1)?) * &jones_default(&k2)?;
    if v != split {
        return Ok(Some(format!(
            "Jones polynomial {v} differs from {split}, that of the split union of its components"
        )));
    }
    Ok(None)
}

/// Whether strand `i` of the tangle, closed outside the disk, is knotted
/// according to its Jones polynomial.
pub fn knotted_strand(d: &TangleDiagram, i: usize) -> Result<bool, BracketError> {
    let k = d.strand_knot(i);
    Ok(jones_default(&k)? != LaurentPoly::one(Var::SqrtT))
}
