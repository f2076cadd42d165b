//! Combinatorial tangle and link diagrams.
//!
//! A crossing lists its four incident edge ids counterclockwise. By default
//! ports 0 and 2 form the under pair; `over_first` flips that. A tangle also
//! names the edges ending at its four corners. Edges that close up without
//! meeting a crossing are kept as a plain loop count.
//!
//! The corner `[1]` is a single crossing whose NW–SE strand is over; with
//! this choice the coloring fraction of `[p/q]` is `p/q`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::expr::TangleExpr;
use crate::fraction::Fraction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Corner {
    NW,
    NE,
    SW,
    SE,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::NW, Corner::NE, Corner::SW, Corner::SE];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Position in the counterclockwise order seen from outside the disk.
    fn outer_rank(self) -> usize {
        match self {
            Corner::NW => 0,
            Corner::NE => 1,
            Corner::SE => 2,
            Corner::SW => 3,
        }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub ports: [u32; 4],
    pub over_first: bool,
}

impl Crossing {
    pub fn new(ports: [u32; 4], over_first: bool) -> Self {
        Crossing { ports, over_first }
    }

    pub fn is_over(&self, port: usize) -> bool {
        port.is_multiple_of(2) == self.over_first
    }

    /// Index of one of the two under ports.
    pub fn under_port(&self) -> usize {
        if self.over_first {
            1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Port(usize, usize),
    End(Corner),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("dangling port: edge {0} has a single endpoint")]
    DanglingPort(u32),
    #[error("edge {0} is used {1} times")]
    OverusedEdge(u32, usize),
    #[error("planarity: V - E + F = {euler}, expected {expected}")]
    Planarity { euler: i64, expected: i64 },
    #[error("closed component inside a 2-string tangle")]
    ClosedComponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid diagram: {0}")]
    Invalid(#[from] Diagnostic),
    #[error("unresolved tangle reference @{0}")]
    Unresolved(String),
    #[error("expected a {expected} diagram")]
    WrongKind { expected: &'static str },
    #[error("{0}")]
    Other(String),
}

/// A traced strand or closed component: the edges met in walking order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub edges: Vec<u32>,
    /// For tangle strands, the corners at the start and end of the walk.
    pub ends: Option<(Corner, Corner)>,
}

/// Per-crossing data of an oriented diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientedCrossing {
    pub under_in: usize,
    pub over_in: usize,
    pub under_component: usize,
    pub over_component: usize,
}

impl OrientedCrossing {
    pub fn sign(&self) -> i32 {
        if self.over_in == (self.under_in + 3) % 4 {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TangleDiagram {
    pub crossings: Vec<Crossing>,
    /// Edge ids at NW, NE, SW, SE.
    pub ends: [u32; 4],
    pub loops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    pub loops: usize,
}

/// Shared read-only view used by both diagram kinds.
pub(crate) struct View<'a> {
    pub crossings: &'a [Crossing],
    pub ends: Option<&'a [u32; 4]>,
    pub loops: usize,
}

impl View<'_> {
    fn slots(&self) -> BTreeMap<u32, Vec<Slot>> {
        let mut map: BTreeMap<u32, Vec<Slot>> = BTreeMap::new();
        for (ci, c) in self.crossings.iter().enumerate() {
            for (p, &e) in c.ports.iter().enumerate() {
                map.entry(e).or_default().push(Slot::Port(ci, p));
            }
        }
        if let Some(ends) = self.ends {
            for corner in Corner::ALL {
                map.entry(ends[corner.index()])
                    .or_default()
                    .push(Slot::End(corner));
            }
        }
        map
    }

    fn partner_table(&self) -> Result<BTreeMap<Slot, (Slot, u32)>, Diagnostic> {
        let mut partner = BTreeMap::new();
        for (e, slots) in self.slots() {
            match slots.len() {
                1 => return Err(Diagnostic::DanglingPort(e)),
                2 => {
                    partner.insert(slots[0], (slots[1], e));
                    partner.insert(slots[1], (slots[0], e));
                }
                n => return Err(Diagnostic::OverusedEdge(e, n)),
            }
        }
        Ok(partner)
    }

    fn validate(&self) -> Result<(), Diagnostic> {
        let partner = self.partner_table()?;
        let k = self.crossings.len();
        let has_ends = self.ends.is_some();
        let vertices = k + usize::from(has_ends);
        let darts = 4 * vertices;
        let index = |s: Slot| match s {
            Slot::Port(c, p) => 4 * c + p,
            Slot::End(corner) => 4 * k + corner.outer_rank(),
        };
        let rotate = |d: usize| {
            if d < 4 * k {
                4 * (d / 4) + (d + 1) % 4
            } else {
                4 * k + (d - 4 * k + 1) % 4
            }
        };
        let mut alpha = vec![0usize; darts];
        for (s, (t, _)) in &partner {
            alpha[index(*s)] = index(*t);
        }
        let mut seen = vec![false; darts];
        let mut faces = 0i64;
        for start in 0..darts {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                d = rotate(alpha[d]);
            }
        }
        // connected components of the vertex graph
        let mut parent: Vec<usize> = (0..vertices).collect();
        for d in 0..darts {
            union(&mut parent, d / 4, alpha[d] / 4);
        }
        let comps = (0..vertices).filter(|&v| find(&mut parent, v) == v).count() as i64;
        let euler = vertices as i64 - (darts / 2) as i64 + faces;
        if euler != 2 * comps {
            return Err(Diagnostic::Planarity {
                euler,
                expected: 2 * comps,
            });
        }
        Ok(())
    }

    /// Strands (from corners) first, then closed components, then free loops.
    fn trace(&self) -> Vec<Walk> {
        let partner = self
            .partner_table()
            .expect("components of an invalid diagram");
        let mut used = vec![[false; 4]; self.crossings.len()];
        let mut out = Vec::new();
        // Follows the strand leaving through `start` until it reaches a
        // corner or comes back to an already used port.
        let walk_from =
            |start: Slot, used: &mut Vec<[bool; 4]>, walk: &mut Walk| -> Option<Corner> {
                let mut slot = start;
                loop {
                    let (next, e) = partner[&slot];
                    walk.edges.push(e);
                    match next {
                        Slot::End(c) => return Some(c),
                        Slot::Port(ci, p) => {
                            if used[ci][p] {
                                return None;
                            }
                            used[ci][p] = true;
                            used[ci][(p + 2) % 4] = true;
                            walk.visits.push((ci, p));
                            slot = Slot::Port(ci, (p + 2) % 4);
                        }
                    }
                }
            };
        if self.ends.is_some() {
            let mut used_ends = [false; 4];
            for corner in Corner::ALL {
                if used_ends[corner.index()] {
                    continue;
                }
                let mut walk = Walk::default();
                let last = walk_from(Slot::End(corner), &mut used, &mut walk)
                    .expect("strand ends at a corner");
                used_ends[corner.index()] = true;
                used_ends[last.index()] = true;
                walk.ends = Some((corner, last));
                out.push(walk);
            }
        }
        for ci in 0..self.crossings.len() {
            for p in 0..4 {
                if used[ci][p] {
                    continue;
                }
                used[ci][p] = true;
                used[ci][(p + 2) % 4] = true;
                let mut walk = Walk {
                    visits: vec![(ci, p)],
                    ..Walk::default()
                };
                walk.edges.push(self.crossings[ci].ports[p]);
                walk_from(Slot::Port(ci, (p + 2) % 4), &mut used, &mut walk);
                // The last edge pushed is the entry edge again.
                walk.edges.pop();
                out.push(walk);
            }
        }
        for _ in 0..self.loops {
            out.push(Walk::default());
        }
        out
    }

    fn components(&self) -> Vec<Component> {
        self.trace()
            .into_iter()
            .map(|w| Component {
                edges: w.edges,
                ends: w.ends,
            })
            .collect()
    }

    /// Orients every component, reversing those with `reverse[i]` set.
    fn orient(&self, reverse: &[bool]) -> Vec<OrientedCrossing> {
        let blank = OrientedCrossing {
            under_in: 0,
            over_in: 0,
            under_component: 0,
            over_component: 0,
        };
        let mut out = vec![blank; self.crossings.len()];
        for (i, walk) in self.trace().iter().enumerate() {
            let flip = reverse.get(i).copied().unwrap_or(false);
            for &(ci, p) in &walk.visits {
                let entry = if flip { (p + 2) % 4 } else { p };
                let slot = &mut out[ci];
                if self.crossings[ci].is_over(p) {
                    slot.over_in = entry;
                    slot.over_component = i;
                } else {
                    slot.under_in = entry;
                    slot.under_component = i;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
struct Walk {
    edges: Vec<u32>,
    /// `(crossing, entry port)` in walking order.
    visits: Vec<(usize, usize)>,
    ends: Option<(Corner, Corner)>,
}

pub(crate) fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub(crate) fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Merges edges according to `joins`, turns edge classes with no remaining
/// slot into loops and renumbers edges by first appearance.
fn assemble(
    crossings: Vec<Crossing>,
    ends: Option<[u32; 4]>,
    joins: &[(u32, u32)],
    loops: usize,
) -> (Vec<Crossing>, Option<[u32; 4]>, usize) {
    let max_edge = crossings
        .iter()
        .flat_map(|c| c.ports.iter())
        .chain(ends.iter().flatten())
        .chain(joins.iter().flat_map(|(a, b)| [a, b]))
        .copied()
        .max()
        .unwrap_or(0) as usize;
    let mut parent: Vec<usize> = (0..=max_edge).collect();
    let mut present = vec![false; max_edge + 1];
    for e in crossings
        .iter()
        .flat_map(|c| c.ports.iter())
        .chain(ends.iter().flatten())
    {
        present[*e as usize] = true;
    }
    for &(a, b) in joins {
        present[a as usize] = true;
        present[b as usize] = true;
        union(&mut parent, a as usize, b as usize);
    }
    let mut occurs = vec![0usize; max_edge + 1];
    for e in crossings
        .iter()
        .flat_map(|c| c.ports.iter())
        .chain(ends.iter().flatten())
    {
        let r = find(&mut parent, *e as usize);
        occurs[r] += 1;
    }
    let mut new_loops = loops;
    for e in 0..=max_edge {
        if present[e] && find(&mut parent, e) == e && occurs[e] == 0 {
            new_loops += 1;
        }
    }
    let mut label = vec![0u32; max_edge + 1];
    let mut next = 1u32;
    let mut relabel = |e: u32, parent: &mut Vec<usize>| {
        let r = find(parent, e as usize);
        if label[r] == 0 {
            label[r] = next;
            next += 1;
        }
        label[r]
    };
    let ends = ends.map(|ends| ends.map(|e| relabel(e, &mut parent)));
    let crossings = crossings
        .into_iter()
        .map(|c| Crossing {
            ports: c.ports.map(|e| relabel(e, &mut parent)),
            over_first: c.over_first,
        })
        .collect();
    (crossings, ends, new_loops)
}

fn max_edge(crossings: &[Crossing], ends: Option<&[u32; 4]>) -> u32 {
    crossings
        .iter()
        .flat_map(|c| c.ports.iter())
        .chain(ends.into_iter().flatten())
        .copied()
        .max()
        .unwrap_or(0)
}

fn shifted(crossings: &[Crossing], by: u32) -> Vec<Crossing> {
    crossings
        .iter()
        .map(|c| Crossing {
            ports: c.ports.map(|e| e + by),
            over_first: c.over_first,
        })
        .collect()
}

impl TangleDiagram {
    pub(crate) fn view(&self) -> View<'_> {
        View {
            crossings: &self.crossings,
            ends: Some(&self.ends),
            loops: self.loops,
        }
    }

    fn from_parts(
        crossings: Vec<Crossing>,
        ends: [u32; 4],
        joins: &[(u32, u32)],
        loops: usize,
    ) -> Self {
        let (crossings, ends, loops) = assemble(crossings, Some(ends), joins, loops);
        TangleDiagram {
            crossings,
            ends: ends.expect("tangle ends"),
            loops,
        }
    }

    /// `[0]`: arcs NW–NE and SW–SE.
    pub fn zero() -> Self {
        TangleDiagram {
            crossings: Vec::new(),
            ends: [1, 1, 2, 2],
            loops: 0,
        }
    }

    /// `[∞]`: arcs NW–SW and NE–SE.
    pub fn infinity() -> Self {
        TangleDiagram {
            crossings: Vec::new(),
            ends: [1, 2, 1, 2],
            loops: 0,
        }
    }

    /// `[1]` for `positive`, otherwise `[-1]`.
    pub fn unit(positive: bool) -> Self {
        let (nw, ne, sw, se) = (1, 2, 3, 4);
        let crossing = if positive {
            Crossing::new([sw, se, ne, nw], false)
        } else {
            Crossing::new([nw, sw, se, ne], false)
        };
        TangleDiagram {
            crossings: vec![crossing],
            ends: [nw, ne, sw, se],
            loops: 0,
        }
    }

    /// East–west gluing `self + other`.
    pub fn sum(&self, other: &TangleDiagram) -> Self {
        let by = max_edge(&self.crossings, Some(&self.ends));
        let mut crossings = self.crossings.clone();
        crossings.extend(shifted(&other.crossings, by));
        let o = other.ends.map(|e| e + by);
        let [nw, ne, sw, se] = self.ends;
        let joins = [(ne, o[0]), (se, o[2])];
        Self::from_parts(
            crossings,
            [nw, o[1], sw, o[3]],
            &joins,
            self.loops + other.loops,
        )
    }

    /// North–south gluing `self * other` (`self` on top).
    pub fn product(&self, other: &TangleDiagram) -> Self {
        let by = max_edge(&self.crossings, Some(&self.ends));
        let mut crossings = self.crossings.clone();
        crossings.extend(shifted(&other.crossings, by));
        let o = other.ends.map(|e| e + by);
        let [nw, ne, sw, se] = self.ends;
        let joins = [(sw, o[0]), (se, o[1])];
        Self::from_parts(
            crossings,
            [nw, ne, o[2], o[3]],
            &joins,
            self.loops + other.loops,
        )
    }

    /// Quarter turn counterclockwise; the fraction becomes `-1/f`.
    pub fn rotate(&self) -> Self {
        let [nw, ne, sw, se] = self.ends;
        Self::from_parts(self.crossings.clone(), [ne, se, nw, sw], &[], self.loops)
    }

    /// Half turn.
    pub fn turn(&self) -> Self {
        self.rotate().rotate()
    }

    pub fn mirror(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing::new(c.ports, !c.over_first))
            .collect();
        TangleDiagram {
            crossings,
            ends: self.ends,
            loops: self.loops,
        }
    }

    /// Numerator closure: NW–NE and SW–SE joined.
    pub fn close_numerator(&self) -> LinkDiagram {
        let [nw, ne, sw, se] = self.ends;
        LinkDiagram::from_parts(self.crossings.clone(), &[(nw, ne), (sw, se)], self.loops)
    }

    /// Denominator closure: NW–SW and NE–SE joined.
    pub fn close_denominator(&self) -> LinkDiagram {
        let [nw, ne, sw, se] = self.ends;
        LinkDiagram::from_parts(self.crossings.clone(), &[(nw, sw), (ne, se)], self.loops)
    }

    /// Renumbers edges by first appearance.
    pub fn canonical(&self) -> Self {
        Self::from_parts(self.crossings.clone(), self.ends, &[], self.loops)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn validate(&self) -> Result<(), Diagnostic> {
        self.view().validate()?;
        if self.loops > 0 || self.components().len() > 2 {
            return Err(Diagnostic::ClosedComponent);
        }
        Ok(())
    }

    /// Only the port pairing and planarity checks, allowing closed components.
    pub fn validate_graph(&self) -> Result<(), Diagnostic> {
        self.view().validate()
    }

    /// The two strands first (starting from the first free corner in
    /// NW, NE, SW, SE order), then any closed components.
    pub fn components(&self) -> Vec<Component> {
        self.view().components()
    }

    pub fn strand_count(&self) -> usize {
        self.components()
            .iter()
            .filter(|c| c.ends.is_some())
            .count()
    }

    pub fn orient(&self, reverse: &[bool]) -> Vec<OrientedCrossing> {
        self.view().orient(reverse)
    }

    /// All `2^s` orientation choices, as reversal masks.
    pub fn orientations(&self) -> Vec<Vec<bool>> {
        all_masks(self.components().len())
    }

    /// The closed knot made from strand `index` alone: the other components
    /// are deleted and the two ends are joined outside the disk.
    pub fn strand_knot(&self, index: usize) -> LinkDiagram {
        let comps = self.components();
        let keep: Vec<bool> = (0..comps.len()).map(|i| i == index).collect();
        let (crossings, joins, loops) = restrict(&self.view(), &comps, &keep);
        let (a, b) = comps[index].ends.expect("strand");
        let mut joins = joins;
        joins.push((self.ends[a.index()], self.ends[b.index()]));
        LinkDiagram::from_parts(crossings, &joins, loops)
    }

    /// Debug dump, one crossing per line with the components meeting there.
    pub fn dump(&self) -> String {
        let comps = self.components();
        let mut owner = BTreeMap::new();
        for (i, c) in comps.iter().enumerate() {
            for e in &c.edges {
                owner.insert(*e, i);
            }
        }
        let mut out = format!(
            "{} crossings, strands {:?}\n",
            self.crossings.len(),
            comps.iter().map(|c| c.ends).collect::<Vec<_>>()
        );
        for (i, c) in self.crossings.iter().enumerate() {
            let u = c.under_port();
            out.push_str(&format!(
                "  #{i}: under {}-{} (s{}) over {}-{} (s{})\n",
                c.ports[u],
                c.ports[u + 2],
                owner[&c.ports[u]],
                c.ports[(u + 1) % 4],
                c.ports[(u + 3) % 4],
                owner[&c.ports[(u + 1) % 4]]
            ));
        }
        out
    }

    /// Builds the diagram of an expression; `@name` references are looked up
    /// through `resolve`.
    pub fn from_expression(
        expr: &TangleExpr,
        resolve: &dyn Fn(&str) -> Option<TangleDiagram>,
    ) -> Result<Self, DiagramError> {
        Ok(match expr {
            TangleExpr::Leaf(f) => Self::rational(f),
            TangleExpr::Sum(a, b) => {
                Self::from_expression(a, resolve)?.sum(&Self::from_expression(b, resolve)?)
            }
            TangleExpr::Product(a, b) => {
                Self::from_expression(a, resolve)?.product(&Self::from_expression(b, resolve)?)
            }
            TangleExpr::Rotate(a) => Self::from_expression(a, resolve)?.rotate(),
            TangleExpr::Mirror(a) => Self::from_expression(a, resolve)?.mirror(),
            TangleExpr::Named(name) => {
                resolve(name).ok_or_else(|| DiagramError::Unresolved(name.clone()))?
            }
        })
    }

    /// The twist-block diagram of `[p/q]`.
    ///
    /// With twist vector `[c_1, ..., c_m]`, start from `[0]` (m odd) or `[∞]`
    /// (m even) and apply horizontal twists `+ [c]` and vertical twists
    /// `* [1/c]` alternately, finishing with a horizontal block.
    pub fn rational(f: &Fraction) -> Self {
        if f.is_infinite() {
            return Self::infinity();
        }
        let terms = f.continued_fraction().expect("finite fraction");
        let m = terms.len();
        let mut t = if m % 2 == 1 {
            Self::zero()
        } else {
            Self::infinity()
        };
        for (k, c) in terms.iter().enumerate() {
            let horizontal = (m - 1 - k).is_multiple_of(2);
            let unit = Self::unit(c.is_positive());
            let n = c.abs().to_usize().expect("twist count fits in memory");
            for _ in 0..n {
                t = if horizontal {
                    t.sum(&unit)
                } else {
                    t.product(&unit)
                };
            }
        }
        t
    }

    /// `self + [p/q]` for an integer or fraction.
    pub fn plus(&self, f: &Fraction) -> Self {
        self.sum(&Self::rational(f))
    }
}

impl LinkDiagram {
    pub(crate) fn view(&self) -> View<'_> {
        View {
            crossings: &self.crossings,
            ends: None,
            loops: self.loops,
        }
    }

    fn from_parts(crossings: Vec<Crossing>, joins: &[(u32, u32)], loops: usize) -> Self {
        let (crossings, _, loops) = assemble(crossings, None, joins, loops);
        LinkDiagram { crossings, loops }
    }

    /// `k` disjoint round circles.
    pub fn unlink(k: usize) -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            loops: k,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn validate(&self) -> Result<(), Diagnostic> {
        self.view().validate()
    }

    pub fn components(&self) -> Vec<Component> {
        self.view().components()
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    pub fn orient(&self, reverse: &[bool]) -> Vec<OrientedCrossing> {
        self.view().orient(reverse)
    }

    pub fn orientations(&self) -> Vec<Vec<bool>> {
        all_masks(self.component_count())
    }

    pub fn mirror(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing::new(c.ports, !c.over_first))
            .collect();
        LinkDiagram {
            crossings,
            loops: self.loops,
        }
    }

    pub fn canonical(&self) -> Self {
        Self::from_parts(self.crossings.clone(), &[], self.loops)
    }

    /// Distant union.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> Self {
        let by = max_edge(&self.crossings, None);
        let mut crossings = self.crossings.clone();
        crossings.extend(shifted(&other.crossings, by));
        Self::from_parts(crossings, &[], self.loops + other.loops)
    }

    /// The sublink formed by the components with `keep[i]` set.
    pub fn sublink(&self, keep: &[bool]) -> Self {
        let comps = self.components();
        let (crossings, joins, loops) = restrict(&self.view(), &comps, keep);
        Self::from_parts(crossings, &joins, loops)
    }
}

/// Drops every crossing that is not entirely between kept components,
/// reconnecting the kept strand through it.
fn restrict(
    view: &View<'_>,
    comps: &[Component],
    keep: &[bool],
) -> (Vec<Crossing>, Vec<(u32, u32)>, usize) {
    let mut owner = BTreeMap::new();
    for (i, c) in comps.iter().enumerate() {
        for e in &c.edges {
            owner.insert(*e, i);
        }
    }
    let loops_kept = comps
        .iter()
        .enumerate()
        .filter(|(i, c)| c.edges.is_empty() && keep.get(*i).copied().unwrap_or(false))
        .count();
    let mut crossings = Vec::new();
    let mut joins = Vec::new();
    for c in view.crossings {
        let k0 = keep[owner[&c.ports[0]]];
        let k1 = keep[owner[&c.ports[1]]];
        match (k0, k1) {
            (true, true) => crossings.push(c.clone()),
            (true, false) => joins.push((c.ports[0], c.ports[2])),
            (false, true) => joins.push((c.ports[1], c.ports[3])),
            (false, false) => {}
        }
    }
    // Edges of dropped components must vanish: they only occur in dropped
    // crossings, so `assemble` never sees them unless joined.
    (crossings, joins, loops_kept)
}

fn all_masks(n: usize) -> Vec<Vec<bool>> {
    (0..1usize << n)
        .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Text format

impl fmt::Display for TangleDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tangle")?;
        write_crossings(f, &self.crossings)?;
        let [nw, ne, sw, se] = self.ends;
        writeln!(f, "B NW={nw} NE={ne} SW={sw} SE={se}")?;
        if self.loops > 0 {
            writeln!(f, "O {}", self.loops)?;
        }
        Ok(())
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "link")?;
        write_crossings(f, &self.crossings)?;
        if self.loops > 0 {
            writeln!(f, "O {}", self.loops)?;
        }
        Ok(())
    }
}

fn write_crossings(f: &mut fmt::Formatter<'_>, crossings: &[Crossing]) -> fmt::Result {
    for c in crossings {
        let [a, b, x, d] = c.ports;
        if c.over_first {
            writeln!(f, "X {a} {b} {x} {d} o")?;
        } else {
            writeln!(f, "X {a} {b} {x} {d}")?;
        }
    }
    Ok(())
}

/// A parsed diagram file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyDiagram {
    Tangle(TangleDiagram),
    Link(LinkDiagram),
}

impl AnyDiagram {
    pub fn into_tangle(self) -> Result<TangleDiagram, DiagramError> {
        match self {
            AnyDiagram::Tangle(t) => Ok(t),
            AnyDiagram::Link(_) => Err(DiagramError::WrongKind { expected: "tangle" }),
        }
    }

    pub fn into_link(self) -> Result<LinkDiagram, DiagramError> {
        match self {
            AnyDiagram::Link(l) => Ok(l),
            AnyDiagram::Tangle(_) => Err(DiagramError::WrongKind { expected: "link" }),
        }
    }
}

impl fmt::Display for AnyDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyDiagram::Tangle(t) => t.fmt(f),
            AnyDiagram::Link(l) => l.fmt(f),
        }
    }
}

pub fn parse_diagram(text: &str) -> Result<AnyDiagram, DiagramError> {
    let err = |line: usize, message: &str| DiagramError::Parse {
        line,
        message: message.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty diagram file"))?;
    let is_tangle = match header {
        "tangle" => true,
        "link" => false,
        _ => return Err(err(hline, "header must be `tangle` or `link`")),
    };
    let mut crossings = Vec::new();
    let mut ends: Option<[u32; 4]> = None;
    let mut loops = 0usize;
    let mut saw_loops = false;
    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "X" => {
                if ends.is_some() || saw_loops {
                    return Err(err(n, "crossing after boundary or loop line"));
                }
                let over_first = match words.len() {
                    5 => false,
                    6 if words[5] == "o" => true,
                    _ => return Err(err(n, "expected `X i j k l [o]`")),
                };
                let mut ports = [0u32; 4];
                for (slot, w) in ports.iter_mut().zip(&words[1..5]) {
                    *slot = w
                        .parse()
                        .map_err(|_| err(n, "edge ids are positive integers"))?;
                    if *slot == 0 {
                        return Err(err(n, "edge ids are positive integers"));
                    }
                }
                crossings.push(Crossing::new(ports, over_first));
            }
            "B" => {
                if !is_tangle || ends.is_some() || saw_loops || words.len() != 5 {
                    return Err(err(n, "misplaced or malformed boundary line"));
                }
                let mut b = [0u32; 4];
                for (corner, w) in Corner::ALL.iter().zip(&words[1..]) {
                    let value = w
                        .strip_prefix(&format!("{corner}="))
                        .ok_or_else(|| err(n, "expected `B NW=e NE=e SW=e SE=e`"))?;
                    b[corner.index()] =
                        value.parse().map_err(|_| err(n, "bad boundary edge id"))?;
                }
                ends = Some(b);
            }
            "O" => {
                if saw_loops || words.len() != 2 {
                    return Err(err(n, "malformed loop line"));
                }
                loops = words[1].parse().map_err(|_| err(n, "bad loop count"))?;
                if loops == 0 {
                    return Err(err(n, "loop count must be positive"));
                }
                saw_loops = true;
            }
            _ => return Err(err(n, "unknown line")),
        }
    }
    if is_tangle {
        let ends = ends.ok_or_else(|| err(hline, "tangle without boundary line"))?;
        Ok(AnyDiagram::Tangle(TangleDiagram {
            crossings,
            ends,
            loops,
        }))
    } else {
        Ok(AnyDiagram::Link(LinkDiagram { crossings, loops }))
    }
}

/// Fraction `p/q` of a twist-block leaf as used by the builder, for callers
/// that need the crossing count without building the diagram.
pub fn twist_crossings(f: &Fraction) -> BigInt {
    if f.is_infinite() {
        return BigInt::zero();
    }
    f.continued_fraction()
        .expect("finite")
        .iter()
        .map(|c| c.abs())
        .sum()
}
