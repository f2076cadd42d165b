//! Quandles, colorings of diagrams, coloring fractions and link determinants.
//!
//! Arcs are maximal over-strands: the two over ports of a crossing lie on
//! the same arc, each under port starts or ends one.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{find, union, LinkDiagram, TangleDiagram, View};
use crate::fraction::Fraction;
use crate::smith::{bareiss_det, smith, Matrix, Smith};

/// The bundled table of the four-element quandle `Z_2[t]/(t^2 + t + 1)`,
/// elements ordered `0, 1, t, t+1`.
pub const Z2T_TABLE: &str = include_str!("../data/quandles/z2t.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomViolation {
    #[error("table is not square: row {row} has {len} entries, expected {size}")]
    Shape { row: usize, len: usize, size: usize },
    #[error("entry {value} at ({x}, {y}) is out of range")]
    Range { x: usize, y: usize, value: usize },
    #[error("idempotence fails at x = {x}: x ▷ x = {value}")]
    Idempotence { x: usize, value: usize },
    #[error("right multiplication by y = {y} is not a bijection: {x1} ▷ y = {x2} ▷ y")]
    Invertibility { y: usize, x1: usize, x2: usize },
    #[error("self-distributivity fails at (x, y, z) = ({x}, {y}, {z})")]
    Distributivity { x: usize, y: usize, z: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuandleError {
    #[error(transparent)]
    Axiom(#[from] AxiomViolation),
    #[error("table parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("R_0 is infinite; use the integer solver")]
    Infinite,
}

/// Checks the three quandle axioms exhaustively, reporting the first failure.
pub fn quandle_check(op: &[Vec<usize>]) -> Result<(), AxiomViolation> {
    let m = op.len();
    for (row, r) in op.iter().enumerate() {
        if r.len() != m {
            return Err(AxiomViolation::Shape {
                row,
                len: r.len(),
                size: m,
            });
        }
        if let Some((y, &value)) = r.iter().enumerate().find(|(_, v)| **v >= m) {
            return Err(AxiomViolation::Range { x: row, y, value });
        }
    }
    for x in 0..m {
        if op[x][x] != x {
            return Err(AxiomViolation::Idempotence { x, value: op[x][x] });
        }
    }
    for y in 0..m {
        let mut seen = vec![None; m];
        for x in 0..m {
            if let Some(x1) = seen[op[x][y]] {
                return Err(AxiomViolation::Invertibility { y, x1, x2: x });
            }
            seen[op[x][y]] = Some(x);
        }
    }
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                if op[op[x][y]][z] != op[op[x][z]][op[y][z]] {
                    return Err(AxiomViolation::Distributivity { x, y, z });
                }
            }
        }
    }
    Ok(())
}

/// A validated finite quandle with its inverse operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTable {
    op: Vec<Vec<usize>>,
    inv: Vec<Vec<usize>>,
}

impl FiniteTable {
    pub fn new(op: Vec<Vec<usize>>) -> Result<Self, AxiomViolation> {
        quandle_check(&op)?;
        let m = op.len();
        let mut inv = vec![vec![0; m]; m];
        for x in 0..m {
            for y in 0..m {
                inv[op[x][y]][y] = x;
            }
        }
        Ok(FiniteTable { op, inv })
    }

    pub fn size(&self) -> usize {
        self.op.len()
    }

    /// `x ▷ y`
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.op[x][y]
    }

    /// `z ◁ y`, the unique `x` with `x ▷ y = z`.
    pub fn inv(&self, z: usize, y: usize) -> usize {
        self.inv[z][y]
    }

    pub fn is_involutory(&self) -> bool {
        self.op == self.inv
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.op
    }
}

impl fmt::Display for FiniteTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.size())?;
        for row in &self.op {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Parses the table format: the size `m`, then `m` rows of `m` entries.
/// `#` starts a comment.
pub fn parse_table(text: &str) -> Result<FiniteTable, QuandleError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, first) = lines.next().ok_or(QuandleError::Parse {
        line: 1,
        message: "empty table".into(),
    })?;
    let m: usize = first.parse().map_err(|_| QuandleError::Parse {
        line,
        message: format!("bad size `{first}`"),
    })?;
    let mut op = Vec::with_capacity(m);
    let mut last = line;
    for (line, l) in lines {
        last = line;
        let row = l
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| QuandleError::Parse {
                line,
                message: e.to_string(),
            })?;
        op.push(row);
    }
    if op.len() != m {
        return Err(QuandleError::Parse {
            line: last,
            message: format!("expected {m} rows, found {}", op.len()),
        });
    }
    Ok(FiniteTable::new(op)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quandle {
    /// `R_n` with `x ◇ y = 2y − x mod n`; `n = 0` is `R_0 = Z`.
    Dihedral(u64),
    Table(FiniteTable),
}

impl Quandle {
    pub fn z2t() -> Self {
        Quandle::Table(parse_table(Z2T_TABLE).expect("bundled table is a quandle"))
    }

    /// The operation table; `R_0` has none.
    pub fn table(&self) -> Result<FiniteTable, QuandleError> {
        match self {
            Quandle::Dihedral(0) => Err(QuandleError::Infinite),
            Quandle::Dihedral(n) => {
                let n = *n as usize;
                let op = (0..n)
                    .map(|x| (0..n).map(|y| (2 * y + n - x) % n).collect())
                    .collect();
                Ok(FiniteTable::new(op)?)
            }
            Quandle::Table(t) => Ok(t.clone()),
        }
    }
}

// ---------------------------------------------------------------------------
// Arcs

/// Arc structure of a diagram.
#[derive(Debug, Clone)]
pub struct Arcs {
    pub count: usize,
    pub of_edge: BTreeMap<u32, usize>,
    /// Arc at each port of each crossing.
    pub at_port: Vec<[usize; 4]>,
    /// Index of one under port per crossing (the other is two further).
    pub under: Vec<usize>,
    /// Arcs at NW, NE, SW, SE for tangles.
    pub boundary: Option<[usize; 4]>,
}

impl Arcs {
    pub(crate) fn of(view: &View<'_>) -> Arcs {
        let order: Vec<u32> = view
            .ends
            .into_iter()
            .flatten()
            .chain(view.crossings.iter().flat_map(|c| c.ports.iter()))
            .copied()
            .collect();
        let mut index = BTreeMap::new();
        for e in &order {
            let next = index.len();
            index.entry(*e).or_insert(next);
        }
        let mut parent: Vec<usize> = (0..index.len()).collect();
        for c in view.crossings {
            let o = 1 - c.under_port();
            union(&mut parent, index[&c.ports[o]], index[&c.ports[o + 2]]);
        }
        let mut label = vec![usize::MAX; index.len()];
        let mut count = 0;
        let mut of_edge = BTreeMap::new();
        for e in order {
            let r = find(&mut parent, index[&e]);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            of_edge.insert(e, label[r]);
        }
        count += view.loops;
        let at_port = view
            .crossings
            .iter()
            .map(|c| c.ports.map(|e| of_edge[&e]))
            .collect();
        let under = view.crossings.iter().map(|c| c.under_port()).collect();
        let boundary = view.ends.map(|ends| ends.map(|e| of_edge[&e]));
        Arcs {
            count,
            of_edge,
            at_port,
            under,
            boundary,
        }
    }

    pub fn over_arc(&self, crossing: usize) -> usize {
        self.at_port[crossing][1 - self.under[crossing]]
    }

    /// One row `2·over − under − under` per crossing.
    pub fn relation_matrix(&self) -> Matrix {
        (0..self.at_port.len())
            .map(|i| {
                let mut row = vec![BigInt::zero(); self.count];
                let u = self.under[i];
                row[self.over_arc(i)] += 2;
                row[self.at_port[i][u]] -= 1;
                row[self.at_port[i][u + 2]] -= 1;
                row
            })
            .collect()
    }

    /// Rows forcing the four boundary colors to agree.
    fn boundary_rows(&self) -> Matrix {
        let [a, b, c, d] = self.boundary.expect("tangle arcs");
        [b, c, d]
            .iter()
            .map(|&x| {
                let mut row = vec![BigInt::zero(); self.count];
                row[a] += 1;
                row[x] -= 1;
                row
            })
            .collect()
    }
}

pub fn tangle_arcs(d: &TangleDiagram) -> Arcs {
    Arcs::of(&d.view())
}

pub fn link_arcs(d: &LinkDiagram) -> Arcs {
    Arcs::of(&d.view())
}

// ---------------------------------------------------------------------------
// Dihedral colorings

/// Solutions of the dihedral crossing equations: mod `n`, or over `Z` when
/// `n = 0`.
#[derive(Debug, Clone)]
pub struct ColoringLattice {
    pub modulus: BigInt,
    pub arcs: Arcs,
    pub smith: Smith,
}

impl ColoringLattice {
    /// Number of colorings; `None` over the integers.
    pub fn count(&self) -> Option<BigInt> {
        if self.modulus.is_zero() {
            None
        } else {
            Some(self.smith.count_mod(&self.modulus))
        }
    }

    /// Number of free parameters: `log_n` of the count for prime `n`, the
    /// lattice rank over the integers.
    pub fn free_rank(&self) -> usize {
        if self.modulus.is_zero() {
            return self.smith.nullity();
        }
        let n = &self.modulus;
        self.smith.nullity()
            + self
                .smith
                .factors
                .iter()
                .filter(|d| (*d).mod_floor(n).is_zero())
                .count()
    }

    /// Generators of the solution module (a lattice basis when `n = 0`).
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        if self.modulus.is_zero() {
            self.smith.kernel_basis()
        } else {
            self.smith.generators_mod(&self.modulus)
        }
    }

    pub fn satisfies(&self, coloring: &[BigInt]) -> bool {
        self.arcs.relation_matrix().iter().all(|row| {
            let v: BigInt = row.iter().zip(coloring).map(|(x, y)| x * y).sum();
            if self.modulus.is_zero() {
                v.is_zero()
            } else {
                v.mod_floor(&self.modulus).is_zero()
            }
        })
    }

    /// Colors at NW, NE, SW, SE of a tangle coloring.
    pub fn boundary_colors(&self, coloring: &[BigInt]) -> Option<[BigInt; 4]> {
        self.arcs.boundary.map(|b| b.map(|a| coloring[a].clone()))
    }

    /// Every coloring, for small finite counts.
    pub fn enumerate(&self, limit: usize) -> Option<Vec<Vec<BigInt>>> {
        let count = self.count()?;
        if count > BigInt::from(limit) {
            return None;
        }
        let n = &self.modulus;
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(vec![BigInt::zero(); self.arcs.count]);
        for g in self.generators() {
            let snapshot: Vec<Vec<BigInt>> = seen.iter().cloned().collect();
            for base in snapshot {
                let mut cur = base;
                loop {
                    cur = cur
                        .iter()
                        .zip(&g)
                        .map(|(x, y)| (x + y).mod_floor(n))
                        .collect();
                    if !seen.insert(cur.clone()) {
                        break;
                    }
                }
            }
        }
        Some(seen.into_iter().collect())
    }
}

fn lattice(arcs: Arcs, n: u64) -> ColoringLattice {
    let m = arcs.relation_matrix();
    let s = smith(&m, arcs.count);
    ColoringLattice {
        modulus: BigInt::from(n),
        arcs,
        smith: s,
    }
}

pub fn color_solve_dihedral(d: &TangleDiagram, n: u64) -> ColoringLattice {
    lattice(tangle_arcs(d), n)
}

pub fn color_solve_dihedral_link(d: &LinkDiagram, n: u64) -> ColoringLattice {
    lattice(link_arcs(d), n)
}

/// Number of c-colorings of a tangle by `R_n`, `n > 0`, constants included.
pub fn c_coloring_count(d: &TangleDiagram, n: u64) -> BigInt {
    let arcs = tangle_arcs(d);
    let mut m = arcs.relation_matrix();
    m.extend(arcs.boundary_rows());
    smith(&m, arcs.count).count_mod(&BigInt::from(n))
}

pub fn has_nontrivial_c_coloring(d: &TangleDiagram, n: u64) -> bool {
    c_coloring_count(d, n) > BigInt::from(n)
}

// ---------------------------------------------------------------------------
// Finite quandle colorings

/// All colorings of an oriented diagram by a finite quandle, in
/// lexicographic order of arc colors.
///
/// At each crossing, with `y` the over arc, `x` the under arc on its right
/// and `z` the one on its left, `z = x ▷ y`.
pub fn color_search_finite(arcs: &Arcs, over_in: &[usize], q: &FiniteTable) -> Vec<Vec<usize>> {
    // (x, y, z) per crossing
    let rules: Vec<[usize; 3]> = over_in
        .iter()
        .enumerate()
        .map(|(i, &o)| {
            [
                arcs.at_port[i][(o + 1) % 4],
                arcs.at_port[i][o],
                arcs.at_port[i][(o + 3) % 4],
            ]
        })
        .collect();
    let mut touching = vec![Vec::new(); arcs.count];
    for (i, r) in rules.iter().enumerate() {
        for &a in r {
            touching[a].push(i);
        }
    }
    let mut out = Vec::new();
    let mut colors = vec![None; arcs.count];
    search(&rules, &touching, q, &mut colors, &mut out);
    out
}

fn search(
    rules: &[[usize; 3]],
    touching: &[Vec<usize>],
    q: &FiniteTable,
    colors: &mut Vec<Option<usize>>,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(next) = colors.iter().position(Option::is_none) else {
        out.push(colors.iter().map(|c| c.expect("assigned")).collect());
        return;
    };
    for value in 0..q.size() {
        let mut trial = colors.clone();
        trial[next] = Some(value);
        if propagate(rules, touching, q, &mut trial, next) {
            search(rules, touching, q, &mut trial, out);
        }
    }
}

/// Fills forced colors from the arc just set; false on a contradiction.
fn propagate(
    rules: &[[usize; 3]],
    touching: &[Vec<usize>],
    q: &FiniteTable,
    colors: &mut [Option<usize>],
    start: usize,
) -> bool {
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        for &r in &touching[a] {
            let [x, y, z] = rules[r];
            let (cx, cy, cz) = (colors[x], colors[y], colors[z]);
            let forced = match (cx, cy, cz) {
                (Some(vx), Some(vy), Some(vz)) => {
                    if q.op(vx, vy) != vz {
                        return false;
                    }
                    None
                }
                (Some(vx), Some(vy), None) => Some((z, q.op(vx, vy))),
                (None, Some(vy), Some(vz)) => Some((x, q.inv(vz, vy))),
                _ => None,
            };
            if let Some((arc, value)) = forced {
                match colors[arc] {
                    Some(v) if v != value => return false,
                    Some(_) => {}
                    None => {
                        colors[arc] = Some(value);
                        stack.push(arc);
                    }
                }
            }
        }
    }
    true
}

/// Colorings of an oriented tangle whose four boundary arcs share a color
/// but which are not constant.
pub fn nontrivial_c_colorings(
    d: &TangleDiagram,
    reverse: &[bool],
    q: &FiniteTable,
) -> Vec<Vec<usize>> {
    let arcs = tangle_arcs(d);
    let over_in: Vec<usize> = d.orient(reverse).iter().map(|c| c.over_in).collect();
    let b = arcs.boundary.expect("tangle");
    color_search_finite(&arcs, &over_in, q)
        .into_iter()
        .filter(|c| b.iter().all(|&a| c[a] == c[b[0]]) && c.iter().any(|&x| x != c[0]))
        .collect()
}

// ---------------------------------------------------------------------------
// Monochromaticity

/// Moduli with nontrivial c-colorings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Offending {
    /// Every modulus, from a free integer c-coloring.
    All,
    /// Exactly the moduli sharing a factor with one of these primes.
    Primes(#[serde(serialize_with = "big_list")] Vec<BigInt>),
}

fn big_list<S: serde::Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

impl Offending {
    pub fn admits(&self, n: &BigInt) -> bool {
        match self {
            Offending::All => true,
            Offending::Primes(ps) => ps.iter().any(|p| n.is_multiple_of(p)),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Offending::Primes(ps) if ps.is_empty())
    }
}

impl fmt::Display for Offending {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Offending::All => write!(f, "all"),
            Offending::Primes(ps) if ps.is_empty() => write!(f, "none"),
            Offending::Primes(ps) => {
                let s: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "multiples of {}", s.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonochromaticReport {
    pub c_trivial_for_all_n: bool,
    pub offending_moduli: Offending,
    pub r0_monochromatic: bool,
    #[serde(serialize_with = "big_list")]
    pub invariant_factors: Vec<BigInt>,
}

/// Smith normal form of the crossing equations plus `a = b = c = d`.
pub fn monochromatic_report(d: &TangleDiagram) -> MonochromaticReport {
    let arcs = tangle_arcs(d);
    let mut m = arcs.relation_matrix();
    m.extend(arcs.boundary_rows());
    let s = smith(&m, arcs.count);
    let free = s.nullity();
    let factors: Vec<BigInt> = s.factors.iter().filter(|d| !d.is_one()).cloned().collect();
    let offending = if free >= 2 {
        Offending::All
    } else {
        let mut primes = Vec::new();
        for f in &factors {
            for p in prime_factors(f) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort();
        Offending::Primes(primes)
    };
    MonochromaticReport {
        c_trivial_for_all_n: offending.is_empty(),
        r0_monochromatic: free <= 1,
        offending_moduli: offending,
        invariant_factors: factors,
    }
}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            out.push(p.clone());
            while n.is_multiple_of(&p) {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// Coloring fraction

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ColoringFraction {
    Fraction(Fraction),
    /// The boundary lattice modulo constants has this rank (0 or 2).
    NotInvariant(usize),
}

impl ColoringFraction {
    pub fn fraction(&self) -> Option<&Fraction> {
        match self {
            ColoringFraction::Fraction(f) => Some(f),
            ColoringFraction::NotInvariant(_) => None,
        }
    }
}

impl fmt::Display for ColoringFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringFraction::Fraction(x) => write!(f, "{x}"),
            ColoringFraction::NotInvariant(r) => write!(f, "not invariant (boundary rank {r})"),
        }
    }
}

/// `(b − a)/(b − d)` on the integer colorings.
pub fn coloring_fraction(d: &TangleDiagram) -> ColoringFraction {
    let lat = color_solve_dihedral(d, 0);
    let images: Vec<(BigInt, BigInt)> = lat
        .generators()
        .iter()
        .map(|g| {
            let [a, b, _, d] = lat.boundary_colors(g).expect("tangle");
            (&b - &a, &b - &d)
        })
        .filter(|(u, v)| !u.is_zero() || !v.is_zero())
        .collect();
    let Some((u, v)) = images.first() else {
        return ColoringFraction::NotInvariant(0);
    };
    if images.iter().any(|(x, y)| !(u * y - v * x).is_zero()) {
        return ColoringFraction::NotInvariant(2);
    }
    ColoringFraction::Fraction(Fraction::new(u.clone(), v.clone()).expect("nonzero image"))
}

/// The fraction of `d1 + d2` is the sum of the fractions.
pub fn fraction_additivity_check(d1: &TangleDiagram, d2: &TangleDiagram) -> bool {
    let (ColoringFraction::Fraction(f1), ColoringFraction::Fraction(f2)) =
        (coloring_fraction(d1), coloring_fraction(d2))
    else {
        return false;
    };
    match (f1.checked_add(&f2), coloring_fraction(&d1.sum(d2))) {
        (Some(sum), ColoringFraction::Fraction(f)) => sum == f,
        _ => false,
    }
}

/// `a + d = b + c` (mod `n`, or exactly for `n = 0`).
pub fn alternating_sum_check(boundary: &[BigInt; 4], n: &BigInt) -> bool {
    let [a, b, c, d] = boundary;
    let diff = a + d - b - c;
    if n.is_zero() {
        diff.is_zero()
    } else {
        diff.mod_floor(n).is_zero()
    }
}

// ---------------------------------------------------------------------------
// Determinant

/// Link determinant from the Smith form of the crossing relations.
pub fn determinant(d: &LinkDiagram) -> BigInt {
    let arcs = link_arcs(d);
    let s = smith(&arcs.relation_matrix(), arcs.count);
    if arcs.count > 0 && s.rank() == arcs.count - 1 {
        s.torsion_order()
    } else {
        BigInt::zero()
    }
}

/// `|det|` of the minor deleting arc column `col` and, when there are as
/// many crossings as arcs, crossing row `row`.
pub fn determinant_minor(d: &LinkDiagram, row: usize, col: usize) -> BigInt {
    let arcs = link_arcs(d);
    let m = arcs.relation_matrix();
    let rows = m.len();
    if arcs.count == 0 || rows + 1 < arcs.count {
        return BigInt::zero();
    }
    let drop_row = rows == arcs.count;
    let minor: Matrix = m
        .iter()
        .enumerate()
        .filter(|(i, _)| !(drop_row && *i == row))
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect();
    bareiss_det(&minor).abs()
}
