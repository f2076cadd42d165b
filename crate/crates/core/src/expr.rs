//! Algebraic tangle expressions and the embedding verdict engine.
//!
//! Grammar: rational leaves `[p/q]`, `p/q`, `n` or `inf`; binary `+` (sum)
//! and `*` (product); `rot(...)`, `mirror(...)`; `@name` for a catalog entry.
//! Sums and products may not be mixed at one level without parentheses.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fraction::{rational_unknotting_closure, Fraction};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TangleExpr {
    Leaf(Fraction),
    Sum(Box<TangleExpr>, Box<TangleExpr>),
    Product(Box<TangleExpr>, Box<TangleExpr>),
    Rotate(Box<TangleExpr>),
    Mirror(Box<TangleExpr>),
    Named(String),
}

impl TangleExpr {
    pub fn leaf(p: i64, q: i64) -> Self {
        TangleExpr::Leaf(Fraction::of(p, q))
    }

    pub fn sum(a: TangleExpr, b: TangleExpr) -> Self {
        TangleExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: TangleExpr, b: TangleExpr) -> Self {
        TangleExpr::Product(Box::new(a), Box::new(b))
    }

    pub fn rotate(a: TangleExpr) -> Self {
        TangleExpr::Rotate(Box::new(a))
    }

    pub fn mirror(a: TangleExpr) -> Self {
        TangleExpr::Mirror(Box::new(a))
    }

    /// Collapses four quarter turns and double mirrors.
    pub fn normalize(&self) -> TangleExpr {
        match self {
            TangleExpr::Rotate(_) => {
                let mut depth = 0;
                let mut node = self;
                while let TangleExpr::Rotate(inner) = node {
                    depth += 1;
                    node = inner;
                }
                let mut out = node.normalize();
                for _ in 0..depth % 4 {
                    out = TangleExpr::rotate(out);
                }
                out
            }
            TangleExpr::Mirror(inner) => match inner.as_ref() {
                TangleExpr::Mirror(x) => x.normalize(),
                other => TangleExpr::mirror(other.normalize()),
            },
            TangleExpr::Sum(a, b) => TangleExpr::sum(a.normalize(), b.normalize()),
            TangleExpr::Product(a, b) => TangleExpr::product(a.normalize(), b.normalize()),
            leaf => leaf.clone(),
        }
    }

    /// Catalog names referenced anywhere in the tree.
    pub fn references(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut Vec<String>) {
        match self {
            TangleExpr::Named(n) => out.push(n.clone()),
            TangleExpr::Sum(a, b) | TangleExpr::Product(a, b) => {
                a.collect_refs(out);
                b.collect_refs(out);
            }
            TangleExpr::Rotate(a) | TangleExpr::Mirror(a) => a.collect_refs(out),
            TangleExpr::Leaf(_) => {}
        }
    }
}

impl fmt::Display for TangleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(
            f: &mut fmt::Formatter<'_>,
            e: &TangleExpr,
            parent_sum: bool,
            right: bool,
        ) -> fmt::Result {
            let wrap = match e {
                TangleExpr::Sum(..) => !parent_sum || right,
                TangleExpr::Product(..) => parent_sum || right,
                _ => false,
            };
            if wrap {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            TangleExpr::Leaf(x) => write!(f, "[{x}]"),
            TangleExpr::Sum(a, b) => {
                side(f, a, true, false)?;
                write!(f, " + ")?;
                side(f, b, true, true)
            }
            TangleExpr::Product(a, b) => {
                side(f, a, false, false)?;
                write!(f, " * ")?;
                side(f, b, false, true)
            }
            TangleExpr::Rotate(a) => write!(f, "rot({a})"),
            TangleExpr::Mirror(a) => write!(f, "mirror({a})"),
            TangleExpr::Named(n) => write!(f, "@{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

pub fn parse_expr(text: &str) -> Result<TangleExpr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<TangleExpr, ParseError> {
        let mut left = self.term()?;
        let mut op: Option<u8> = None;
        while let Some(c @ (b'+' | b'*')) = self.peek() {
            if op.is_some_and(|o| o != c) {
                return Err(self.error("mixing `+` and `*` needs parentheses"));
            }
            op = Some(c);
            self.pos += 1;
            let right = self.term()?;
            left = if c == b'+' {
                TangleExpr::sum(left, right)
            } else {
                TangleExpr::product(left, right)
            };
        }
        Ok(left)
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn term(&mut self) -> Result<TangleExpr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.eat(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let f = self.fraction()?;
                self.eat(b']')?;
                Ok(TangleExpr::Leaf(f))
            }
            Some(b'@') => {
                self.pos += 1;
                let start = self.pos;
                let name = self.word().to_string();
                if name.is_empty() {
                    self.pos = start;
                    return Err(self.error("expected a tangle name after `@`"));
                }
                Ok(TangleExpr::Named(name))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let w = self.word().to_string();
                match w.as_str() {
                    "rot" | "mirror" => {
                        self.eat(b'(')?;
                        let e = self.expr()?;
                        self.eat(b')')?;
                        Ok(if w == "rot" {
                            TangleExpr::rotate(e)
                        } else {
                            TangleExpr::mirror(e)
                        })
                    }
                    "inf" => Ok(TangleExpr::Leaf(Fraction::infinity())),
                    _ => {
                        self.pos = start;
                        Err(self.error("unknown word"))
                    }
                }
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => Ok(TangleExpr::Leaf(self.fraction()?)),
            Some(_) => Err(self.error("expected a tangle")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            self.skip_ws();
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits == self.pos {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let text: String = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        Ok(text.parse().expect("validated digits"))
    }

    fn fraction(&mut self) -> Result<Fraction, ParseError> {
        if self.peek() == Some(b'i') {
            let start = self.pos;
            if self.word() == "inf" {
                return Ok(Fraction::infinity());
            }
            self.pos = start;
            return Err(self.error("expected a fraction"));
        }
        let start = self.pos;
        let p = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let q = self.integer()?;
            Fraction::new(p, q).map_err(|_| ParseError {
                pos: start,
                message: "0/0 is not a tangle".into(),
            })
        } else {
            Ok(Fraction::integer(p))
        }
    }
}

// ---------------------------------------------------------------------------
// Verdicts

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Yes {
        #[serde(skip_serializing_if = "Option::is_none")]
        closure: Option<Fraction>,
    },
    No {
        reason: String,
    },
    Unknown {
        reason: String,
    },
}

impl Status {
    pub fn yes(closure: Fraction) -> Self {
        Status::Yes {
            closure: Some(closure),
        }
    }

    pub fn no(reason: impl Into<String>) -> Self {
        Status::No {
            reason: reason.into(),
        }
    }

    pub fn unknown(reason: impl Into<String>) -> Self {
        Status::Unknown {
            reason: reason.into(),
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Status::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Status::No { .. })
    }

    pub fn closure(&self) -> Option<&Fraction> {
        match self {
            Status::Yes { closure } => closure.as_ref(),
            _ => None,
        }
    }

    fn map_closure(&self, f: impl Fn(&Fraction) -> Fraction) -> Status {
        match self {
            Status::Yes { closure } => Status::Yes {
                closure: closure.as_ref().map(f),
            },
            other => other.clone(),
        }
    }

    fn tag(self, note: &str) -> Status {
        match self {
            Status::No { reason } => Status::No {
                reason: format!("{reason} {note}"),
            },
            other => other,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Yes { closure: Some(c) } => write!(f, "yes, closure [{c}]"),
            Status::Yes { closure: None } => write!(f, "yes"),
            Status::No { reason } => write!(f, "no ({reason})"),
            Status::Unknown { reason } => write!(f, "unknown ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbedVerdict {
    pub unknottable: Status,
    pub unlinkable: Status,
    pub splittable: Status,
    pub evidence: Vec<String>,
}

impl EmbedVerdict {
    pub fn unknown(reason: &str) -> Self {
        EmbedVerdict {
            unknottable: Status::unknown(reason),
            unlinkable: Status::unknown(reason),
            splittable: Status::unknown(reason),
            evidence: Vec::new(),
        }
    }

    fn all_no(reason: &str) -> Self {
        EmbedVerdict {
            unknottable: Status::no(reason),
            unlinkable: Status::no(reason),
            splittable: Status::no(reason),
            evidence: Vec::new(),
        }
    }

    fn map_closures(&self, f: impl Fn(&Fraction) -> Fraction + Copy) -> Self {
        EmbedVerdict {
            unknottable: self.unknottable.map_closure(f),
            unlinkable: self.unlinkable.map_closure(f),
            splittable: self.splittable.map_closure(f),
            evidence: self.evidence.clone(),
        }
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.evidence.push(line.into());
        self
    }
}

impl fmt::Display for EmbedVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "unknottable: {}", self.unknottable)?;
        writeln!(f, "unlinkable:  {}", self.unlinkable)?;
        writeln!(f, "splittable:  {}", self.splittable)?;
        for line in &self.evidence {
            writeln!(f, "  - {line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unresolved tangle reference @{0}")]
    Unresolved(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconsistent verdict: {0}")]
    Inconsistent(String),
}

/// Tag attached to conclusions for unlinking/splitting that reuse the
/// unknotting congruences.
pub const MIRRORED_RULE: &str = "[mirrored rule: unknotting congruence reused for this property]";

/// The verdict for a rational tangle `[f]`.
pub fn rational_verdict(f: &Fraction) -> EmbedVerdict {
    let minus = f.mirror();
    EmbedVerdict {
        unknottable: Status::yes(rational_unknotting_closure(f)),
        unlinkable: Status::yes(minus.clone()),
        splittable: Status::yes(minus),
        evidence: vec![format!("[{f}] is rational")],
    }
}

fn require_montesinos_term(f: &Fraction) -> Result<(), ExprError> {
    if f.den() <= &BigInt::one() {
        return Err(ExprError::Precondition(format!(
            "Montesinos terms need denominator > 1, got [{f}]; absorb integral terms first"
        )));
    }
    Ok(())
}

/// Criterion for `[p1/q1] + ... + [pn/qn]` with every `q_i > 1`.
pub fn montesinos_verdict(fractions: &[Fraction]) -> Result<EmbedVerdict, ExprError> {
    if fractions.len() < 2 {
        return Err(ExprError::Precondition(
            "a Montesinos sum needs at least two terms".into(),
        ));
    }
    for f in fractions {
        require_montesinos_term(f)?;
    }
    let list = fractions
        .iter()
        .map(|f| format!("[{f}]"))
        .collect::<Vec<_>>()
        .join(" + ");
    if fractions.len() >= 3 {
        return Ok(
            EmbedVerdict::all_no("three or more non-integral rational summands")
                .note(format!("Montesinos criterion on {list}")),
        );
    }
    let (p1, q1) = (fractions[0].num(), fractions[0].den());
    let (p2, q2) = (fractions[1].num(), fractions[1].den());
    let m = p1 * q2 + p2 * q1;
    let big_q = q1 * q2;
    let plus = (BigInt::one() - &m).mod_floor(&big_q).is_zero();
    let minus = (-BigInt::one() - &m).mod_floor(&big_q).is_zero();
    if plus && minus {
        return Err(ExprError::Inconsistent(format!(
            "both signs solve the congruence for {list}"
        )));
    }
    let unknottable = if plus || minus {
        let target = if plus { BigInt::one() } else { -BigInt::one() };
        Status::yes(Fraction::integer((target - &m) / &big_q))
    } else {
        Status::no(format!("p1q2 + p2q1 = {m} is not ±1 mod {big_q}"))
    };
    let unlinkable = if q1 == q2 && (p1 + p2).mod_floor(q1).is_zero() {
        Status::yes(Fraction::integer(-(p1 + p2) / q1))
    } else if q1 != q2 {
        Status::no(format!("denominators {q1} and {q2} differ"))
    } else {
        Status::no(format!("p1 + p2 = {} is not divisible by {q1}", p1 + p2))
    };
    Ok(EmbedVerdict {
        unknottable,
        splittable: unlinkable.clone(),
        unlinkable,
        evidence: vec![format!("Montesinos criterion on {list}")],
    })
}

/// Whether `T + [p/q]` keeps the property when `T` has closure `r/s`.
pub fn extend_sum_verdict(closure: &Fraction, added: &Fraction) -> Status {
    let (r, s) = (closure.num(), closure.den());
    let (p, q) = (added.num(), added.den());
    if q.is_zero() {
        return Status::unknown("adding [inf] is degenerate");
    }
    if q.is_one() {
        return Status::yes(closure.add_integer(&-p));
    }
    if q == s && (p - r).mod_floor(q).is_zero() {
        return Status::yes(Fraction::integer((r - p) / s));
    }
    Status::no(format!(
        "closure [{closure}] is not reachable by adding [{added}]"
    ))
}

/// `T * [p/q]` through the quarter-turn reduction to a sum.
pub fn extend_product_verdict(closure: &Fraction, factor: &Fraction) -> Status {
    match extend_sum_verdict(&closure.rotate(), &factor.rotate()) {
        Status::Yes { closure: Some(c) } => Status::yes(c.rotate()),
        Status::No { .. } => Status::no(format!(
            "closure [{closure}] does not fit the factor [{factor}]"
        )),
        other => other,
    }
}

/// Criterion for `([p1/q1] + [p2/q2]) * [p3/q3]` with `q1, q2 > 1`, `p3 ≠ 1`.
pub fn three_factor_verdict(
    f1: &Fraction,
    f2: &Fraction,
    f3: &Fraction,
) -> Result<EmbedVerdict, ExprError> {
    require_montesinos_term(f1)?;
    require_montesinos_term(f2)?;
    if f3.num().is_one() {
        return Err(ExprError::Precondition(format!(
            "third factor [{f3}] must have p3 ≠ 1"
        )));
    }
    let m = montesinos_verdict(&[f1.clone(), f2.clone()])?;
    let step = |status: &Status, what: &str| match status {
        Status::Yes { closure: Some(n) } => match extend_product_verdict(n, f3) {
            Status::No { .. } => Status::no(format!(
                "{what} closure of the sum is [{n}], which does not match [{f3}]"
            )),
            other => other,
        },
        Status::No { .. } => Status::no(format!("sum part is not {what}")),
        other => other.clone(),
    };
    Ok(EmbedVerdict {
        unknottable: step(&m.unknottable, "unknottable"),
        unlinkable: step(&m.unlinkable, "unlinkable").tag(MIRRORED_RULE),
        splittable: step(&m.splittable, "splittable").tag(MIRRORED_RULE),
        evidence: vec![format!(
            "three-factor criterion on ([{f1}] + [{f2}]) * [{f3}]"
        )],
    })
}

/// Verdict of a union of two tangles meeting along a disk that misses both.
pub fn union_verdict(v1: &EmbedVerdict, v2: &EmbedVerdict) -> EmbedVerdict {
    let unknottable = match (&v1.unknottable, &v2.unknottable) {
        (Status::Yes { .. }, Status::Yes { .. }) => Status::Yes { closure: None },
        (Status::No { .. }, _) | (_, Status::No { .. }) => {
            Status::no("a side of the union is not unknottable")
        }
        _ => Status::unknown("a side of the union is undecided"),
    };
    let side = |v: &EmbedVerdict| {
        if v.unlinkable.is_yes() || v.unknottable.is_yes() {
            Some(true)
        } else if v.unlinkable.is_no() && v.unknottable.is_no() {
            Some(false)
        } else {
            None
        }
    };
    let unlinkable = match (side(v1), side(v2)) {
        (Some(true), Some(true)) => Status::Yes { closure: None },
        (Some(false), _) | (_, Some(false)) => {
            Status::no("a side is neither unlinkable nor unknottable")
        }
        _ => Status::unknown("a side of the union is undecided"),
    };
    EmbedVerdict {
        unknottable,
        unlinkable,
        splittable: Status::Yes { closure: None },
        evidence: vec!["union rule".into()],
    }
}

/// What the engine knows about a catalog entry referenced by `@name`.
#[derive(Debug, Clone)]
pub struct NamedHint {
    pub verdict: EmbedVerdict,
    pub essential: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Hints {
    pub named: BTreeMap<String, NamedHint>,
}

#[derive(Debug, Clone)]
enum Form {
    Rational(Fraction),
    Montesinos(Vec<Fraction>),
    Other,
}

#[derive(Debug, Clone)]
struct Node {
    form: Form,
    verdict: EmbedVerdict,
    essential: bool,
}

impl Node {
    fn rational(f: Fraction) -> Node {
        Node {
            verdict: rational_verdict(&f),
            form: Form::Rational(f),
            essential: false,
        }
    }

    fn degenerate(reason: &str) -> Node {
        Node {
            form: Form::Other,
            verdict: EmbedVerdict::unknown(reason).note(reason),
            essential: false,
        }
    }

    fn montesinos(list: Vec<Fraction>) -> Result<Node, ExprError> {
        Ok(Node {
            verdict: montesinos_verdict(&list)?,
            form: Form::Montesinos(list),
            essential: true,
        })
    }
}

/// Evaluates an expression to a verdict.
///
/// Rational pieces are folded exactly; two or more non-integral summands go
/// to the Montesinos criterion; a rational added to or stacked on a tangle
/// with a known closure goes through the extension rules; otherwise the
/// subtangle rules can still rule properties out.
pub fn evaluate(expr: &TangleExpr, hints: &Hints) -> Result<EmbedVerdict, ExprError> {
    let node = eval(&expr.normalize(), hints)?;
    let v = node.verdict;
    if !matches!(node.form, Form::Rational(_)) && v.unknottable.is_yes() && v.splittable.is_yes() {
        return Err(ExprError::Inconsistent(format!(
            "non-rational {expr} reported both unknottable and splittable"
        )));
    }
    if let (Status::Yes { closure: Some(a) }, Status::Yes { closure: Some(b) }) =
        (&v.unlinkable, &v.splittable)
    {
        if a != b {
            return Err(ExprError::Inconsistent(
                "unlinking and splitting closures differ".into(),
            ));
        }
    }
    Ok(v)
}

fn eval(expr: &TangleExpr, hints: &Hints) -> Result<Node, ExprError> {
    match expr {
        TangleExpr::Leaf(f) => Ok(Node::rational(f.clone())),
        TangleExpr::Named(name) => {
            let hint = hints
                .named
                .get(name)
                .ok_or_else(|| ExprError::Unresolved(name.clone()))?;
            Ok(Node {
                form: Form::Other,
                verdict: hint.verdict.clone(),
                essential: hint.essential,
            })
        }
        TangleExpr::Rotate(inner) => {
            let n = eval(inner, hints)?;
            Ok(match n.form {
                Form::Rational(f) => Node::rational(f.rotate()),
                _ => Node {
                    form: Form::Other,
                    verdict: n
                        .verdict
                        .map_closures(Fraction::rotate)
                        .note("quarter turn: closures rotate"),
                    essential: n.essential,
                },
            })
        }
        TangleExpr::Mirror(inner) => {
            let n = eval(inner, hints)?;
            Ok(match n.form {
                Form::Rational(f) => Node::rational(f.mirror()),
                Form::Montesinos(list) => {
                    Node::montesinos(list.iter().map(Fraction::mirror).collect())?
                }
                Form::Other => Node {
                    form: Form::Other,
                    verdict: n
                        .verdict
                        .map_closures(Fraction::mirror)
                        .note("mirror: closures negate"),
                    essential: n.essential,
                },
            })
        }
        TangleExpr::Sum(a, b) => {
            let (x, y) = (eval(a, hints)?, eval(b, hints)?);
            combine_sum(x, y)
        }
        TangleExpr::Product(a, b) => {
            let (x, y) = (eval(a, hints)?, eval(b, hints)?);
            combine_product(x, y)
        }
    }
}

fn combine_sum(x: Node, y: Node) -> Result<Node, ExprError> {
    use Form::*;
    match (&x.form, &y.form) {
        (Rational(f), Rational(g)) => {
            if f.is_integral() || g.is_integral() {
                match f.checked_add(g) {
                    Some(h) => Ok(Node::rational(h)),
                    None => Ok(Node::degenerate("sum of two [inf] tangles")),
                }
            } else if f.is_infinite() || g.is_infinite() {
                Ok(Node::degenerate("sum with [inf] is degenerate"))
            } else {
                Node::montesinos(vec![f.clone(), g.clone()])
            }
        }
        (Montesinos(list), Rational(g)) | (Rational(g), Montesinos(list)) if g.is_infinite() => {
            let _ = list;
            Ok(Node::degenerate("sum with [inf] is degenerate"))
        }
        (Montesinos(list), Rational(g)) => {
            let mut list = list.clone();
            if g.is_integral() {
                let last = list.pop().expect("nonempty");
                list.push(last.add_integer(g.num()));
            } else {
                list.push(g.clone());
            }
            Node::montesinos(list)
        }
        (Rational(g), Montesinos(list)) => {
            let mut list = list.clone();
            if g.is_integral() {
                list[0] = list[0].add_integer(g.num());
            } else {
                list.insert(0, g.clone());
            }
            Node::montesinos(list)
        }
        (Montesinos(l1), Montesinos(l2)) => {
            Node::montesinos(l1.iter().chain(l2).cloned().collect())
        }
        (_, Rational(g)) => Ok(extend(&x, g, false)),
        (Rational(g), _) => Ok(extend(&y, g, false)),
        _ => Ok(prune(&[&x, &y], "sum")),
    }
}

fn combine_product(x: Node, y: Node) -> Result<Node, ExprError> {
    use Form::*;
    match (&x.form, &y.form) {
        (Rational(f), Rational(g)) => {
            if f.is_vertical() || g.is_vertical() {
                match f.recip().checked_add(&g.recip()) {
                    Some(h) => Ok(Node::rational(h.recip())),
                    None => Ok(Node::degenerate("product of two [0] tangles")),
                }
            } else if f.is_zero() || g.is_zero() {
                Ok(Node::degenerate("product with [0] is degenerate"))
            } else {
                // T * U is a quarter turn of rot(T) + rot(U).
                let inner = Node::montesinos(vec![f.rotate(), g.rotate()])?;
                Ok(Node {
                    form: Other,
                    verdict: inner
                        .verdict
                        .map_closures(Fraction::rotate)
                        .note("product of rationals as a turned sum"),
                    essential: true,
                })
            }
        }
        (Montesinos(list), Rational(g)) | (Rational(g), Montesinos(list))
            if list.len() == 2 && !g.num().is_one() && !g.is_zero() =>
        {
            Ok(Node {
                form: Other,
                verdict: three_factor_verdict(&list[0], &list[1], g)?,
                essential: true,
            })
        }
        (_, Rational(g)) => Ok(extend(&x, g, true)),
        (Rational(g), _) => Ok(extend(&y, g, true)),
        _ => Ok(prune(&[&x, &y], "product")),
    }
}

/// `T + [g]` (or `T * [g]`) for a non-rational `T`.
fn extend(t: &Node, g: &Fraction, product: bool) -> Node {
    let degenerate = if product {
        g.is_zero()
    } else {
        g.is_infinite()
    };
    if degenerate {
        return Node::degenerate(if product {
            "product with [0] is degenerate"
        } else {
            "sum with [inf] is degenerate"
        });
    }
    let rule = |c: &Fraction| {
        if product {
            extend_product_verdict(c, g)
        } else {
            extend_sum_verdict(c, g)
        }
    };
    let op = if product { "*" } else { "+" };
    let v = &t.verdict;
    let step = |status: &Status, what: &str| -> Status {
        match status {
            Status::Yes { closure: Some(c) } if t.essential => rule(c),
            Status::Yes { .. } => Status::unknown(format!(
                "extension needs an essential tangle with a known {what} closure"
            )),
            Status::No { .. } if what == "unknotting" => {
                Status::no("a subtangle is not unknottable")
            }
            Status::No { .. } if what == "unlinking" && v.unknottable.is_no() => {
                Status::no("a subtangle is neither unknottable nor unlinkable")
            }
            Status::No { .. } => Status::unknown(format!("no {what} closure to extend")),
            Status::Unknown { .. } => {
                Status::unknown(format!("{what} status of the subtangle is undecided"))
            }
        }
    };
    let mut verdict = EmbedVerdict {
        unknottable: step(&v.unknottable, "unknotting"),
        unlinkable: step(&v.unlinkable, "unlinking").tag(MIRRORED_RULE),
        splittable: step(&v.splittable, "splitting").tag(MIRRORED_RULE),
        evidence: v.evidence.clone(),
    };
    verdict
        .evidence
        .push(format!("rational extension T {op} [{g}]"));
    Node {
        form: Form::Other,
        verdict,
        essential: t.essential,
    }
}

/// Subtangle rules for a decomposition that is not a union.
fn prune(parts: &[&Node], what: &str) -> Node {
    let unknottable = if parts.iter().any(|n| n.verdict.unknottable.is_no()) {
        Status::no("a subtangle is not unknottable")
    } else {
        Status::unknown("no criterion applies")
    };
    let unlinkable = if parts
        .iter()
        .any(|n| n.verdict.unknottable.is_no() && n.verdict.unlinkable.is_no())
    {
        Status::no("a subtangle is neither unknottable nor unlinkable")
    } else if parts.iter().all(|n| n.verdict.unlinkable.is_no()) {
        Status::no("no part is unlinkable")
    } else {
        Status::unknown("no criterion applies")
    };
    let splittable = if parts.iter().all(|n| n.verdict.splittable.is_no()) {
        Status::no("no part is splittable")
    } else {
        Status::unknown("no criterion applies")
    };
    let mut evidence: Vec<String> = parts
        .iter()
        .flat_map(|n| n.verdict.evidence.clone())
        .collect();
    evidence.push(format!("subtangle rules on a {what}"));
    Node {
        form: Form::Other,
        verdict: EmbedVerdict {
            unknottable,
            unlinkable,
            splittable,
            evidence,
        },
        essential: parts.iter().any(|n| n.essential),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: i64, q: i64) -> Fraction {
        Fraction::of(p, q)
    }

    #[test]
    fn parse_examples() {
        let e = parse_expr("(1/3 + 1/3) * [-2]").unwrap();
        assert_eq!(
            e,
            TangleExpr::product(
                TangleExpr::sum(TangleExpr::leaf(1, 3), TangleExpr::leaf(1, 3)),
                TangleExpr::leaf(-2, 1)
            )
        );
        assert_eq!(parse_expr("[0]").unwrap(), TangleExpr::leaf(0, 1));
        assert_eq!(
            parse_expr("rot(1/2)").unwrap(),
            TangleExpr::rotate(TangleExpr::leaf(1, 2))
        );
        assert_eq!(
            parse_expr("mirror(@7_13) + inf").unwrap().to_string(),
            "mirror(@7_13) + [inf]"
        );
        assert_eq!(
            parse_expr("1/3 + -1/2").unwrap(),
            TangleExpr::sum(TangleExpr::leaf(1, 3), TangleExpr::leaf(-1, 2))
        );
    }

    #[test]
    fn parse_errors() {
        let e = parse_expr("1/3 + 1/3 * [-2]").unwrap_err();
        assert_eq!(e.pos, 10);
        assert!(parse_expr("rot(1/2").is_err());
        assert!(parse_expr("0/0").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("1/2 1/3").is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "([1/3] + [1/3]) * [-2]",
            "[1/2] + ([1/3] + [1/5])",
            "rot([1/2] * [1/3]) + @6_2",
            "[inf]",
        ] {
            let e = parse_expr(s).unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn normalize_collapses_turns() {
        let e = parse_expr("rot(rot(rot(rot(rot(1/2)))))")
            .unwrap()
            .normalize();
        assert_eq!(e, parse_expr("rot(1/2)").unwrap());
        assert_eq!(
            parse_expr("mirror(mirror(@a))").unwrap().normalize(),
            TangleExpr::Named("a".into())
        );
    }

    #[test]
    fn montesinos_examples() {
        let v = montesinos_verdict(&[f(1, 3), f(1, 3)]).unwrap();
        assert!(v.unknottable.is_no() && v.unlinkable.is_no() && v.splittable.is_no());
        assert!(montesinos_verdict(&[f(1, 2), f(1, 5)])
            .unwrap()
            .unknottable
            .is_no());
        assert_eq!(
            montesinos_verdict(&[f(1, 2), f(1, 3)]).unwrap().unknottable,
            Status::yes(f(-1, 1))
        );
        let v = montesinos_verdict(&[f(1, 3), f(-1, 3)]).unwrap();
        assert_eq!(v.unlinkable, Status::yes(f(0, 1)));
        assert_eq!(v.splittable, Status::yes(f(0, 1)));
        assert!(montesinos_verdict(&[f(2, 1), f(1, 3)]).is_err());
        assert!(montesinos_verdict(&[f(1, 3), f(1, 5), f(1, 7)])
            .unwrap()
            .unknottable
            .is_no());
    }

    #[test]
    fn extension_examples() {
        assert_eq!(
            extend_sum_verdict(&f(-1, 1), &f(2, 1)),
            Status::yes(f(-3, 1))
        );
        assert_eq!(
            extend_sum_verdict(&f(2, 3), &f(5, 3)),
            Status::yes(f(-1, 1))
        );
        assert!(extend_sum_verdict(&f(-1, 1), &f(1, 2)).is_no());
        assert!(extend_product_verdict(&f(2, 3), &f(2, 9)).is_yes());
        assert!(extend_product_verdict(&f(2, 3), &f(1, 4)).is_yes());
        assert!(extend_product_verdict(&f(0, 1), &f(-2, 1)).is_no());
    }

    #[test]
    fn three_factor_examples() {
        let v = three_factor_verdict(&f(1, 3), &f(1, 3), &f(-2, 1)).unwrap();
        assert!(v.unknottable.is_no());
        let v = three_factor_verdict(&f(1, 3), &f(-1, 2), &f(-2, 1)).unwrap();
        assert!(v.unknottable.is_no());
        let v = three_factor_verdict(&f(1, 2), &f(1, 3), &f(-1, 2)).unwrap();
        assert!(v.unknottable.is_yes());
        assert!(three_factor_verdict(&f(1, 2), &f(1, 3), &f(1, 2)).is_err());
    }

    #[test]
    fn union_examples() {
        let yes = rational_verdict(&f(1, 2));
        let v = union_verdict(&yes, &yes);
        assert!(v.unknottable.is_yes() && v.splittable.is_yes());
        let no = montesinos_verdict(&[f(1, 2), f(1, 5)]).unwrap();
        assert!(union_verdict(&yes, &no).unknottable.is_no());
        let unlinkable = montesinos_verdict(&[f(1, 3), f(-1, 3)]).unwrap();
        assert!(union_verdict(&unlinkable, &yes).unlinkable.is_yes());
    }

    #[test]
    fn evaluate_examples() {
        let h = Hints::default();
        let v = evaluate(&parse_expr("(1/3 + 1/3) * [-2]").unwrap(), &h).unwrap();
        assert!(v.unknottable.is_no() && v.unlinkable.is_no() && v.splittable.is_no());
        let v = evaluate(&parse_expr("1/2").unwrap(), &h).unwrap();
        assert!(v.unknottable.is_yes() && v.unlinkable.is_yes());
        assert_eq!(v.splittable, Status::yes(f(-1, 2)));
        let v = evaluate(&parse_expr("1/2 + 1/5").unwrap(), &h).unwrap();
        assert!(v.unknottable.is_no() && v.unlinkable.is_no() && v.splittable.is_no());
        assert!(matches!(
            evaluate(&parse_expr("@x").unwrap(), &h),
            Err(ExprError::Unresolved(_))
        ));
    }

    #[test]
    fn integral_terms_are_absorbed() {
        let h = Hints::default();
        let a = evaluate(&parse_expr("1/2 + 1/3 + 2").unwrap(), &h).unwrap();
        let b = evaluate(&parse_expr("1/2 + 7/3").unwrap(), &h).unwrap();
        assert_eq!(a.unknottable, b.unknottable);
        assert_eq!(a.unknottable, Status::yes(f(-3, 1)));
    }

    #[test]
    fn named_pruning() {
        let mut h = Hints::default();
        h.named.insert(
            "6_2".into(),
            NamedHint {
                verdict: montesinos_verdict(&[f(1, 3), f(1, 3)]).unwrap(),
                essential: true,
            },
        );
        let v = evaluate(&parse_expr("@6_2 * [-2]").unwrap(), &h).unwrap();
        assert!(v.unknottable.is_no());
        assert!(v.unlinkable.is_no());
    }
}
