//! Extended rationals `p/q` (with `∞ = 1/0`) labelling rational tangles, and
//! the 2-bridge links obtained as their numerator closures.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FractionError {
    #[error("0/0 is not a tangle fraction")]
    Indeterminate,
    #[error("cannot parse fraction `{0}`")]
    Parse(String),
    #[error("`{0}` has no continued fraction")]
    Infinite(Fraction),
}

/// A reduced extended rational. The denominator is never negative, `∞` is
/// stored as `1/0` and zero as `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    num: BigInt,
    den: BigInt,
}

impl Fraction {
    /// Reduces `p/q`, moving the sign onto the numerator.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, FractionError> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(FractionError::Indeterminate);
        }
        if q.is_zero() {
            return Ok(Self::infinity());
        }
        let g = p.gcd(&q);
        p /= &g;
        q /= &g;
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        Ok(Fraction { num: p, den: q })
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Fraction {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn infinity() -> Self {
        Fraction {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    /// Convenience constructor for small literals; panics on `0/0`.
    pub fn of(p: i64, q: i64) -> Self {
        Self::new(p, q).expect("0/0 literal")
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True for the integral tangles `[n]` (denominator 1).
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// True when `1/f` is an integer, i.e. a vertical twist `[1/n]` or `[∞]`.
    pub fn is_vertical(&self) -> bool {
        self.num.abs().is_one() || self.is_infinite()
    }

    /// `f + n`; `∞` absorbs.
    pub fn add_integer(&self, n: &BigInt) -> Self {
        if self.is_infinite() {
            return self.clone();
        }
        Fraction {
            num: &self.num + n * &self.den,
            den: self.den.clone(),
        }
    }

    /// Quarter turn of the tangle: `f ↦ -1/f`.
    pub fn rotate(&self) -> Self {
        Fraction::new(-self.den.clone(), self.num.clone()).expect("reduced fraction is never 0/0")
    }

    /// Mirror image: `f ↦ -f`.
    pub fn mirror(&self) -> Self {
        if self.is_infinite() {
            return self.clone();
        }
        Fraction {
            num: -self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// Reciprocal `1/f` (with `1/0 = ∞`).
    pub fn recip(&self) -> Self {
        Fraction::new(self.den.clone(), self.num.clone()).expect("reduced fraction is never 0/0")
    }

    /// Sum of extended rationals; `None` for `∞ + ∞`.
    pub fn checked_add(&self, other: &Fraction) -> Option<Fraction> {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => None,
            (true, false) | (false, true) => Some(Fraction::infinity()),
            _ => Some(
                Fraction::new(
                    &self.num * &other.den + &other.num * &self.den,
                    &self.den * &other.den,
                )
                .expect("finite sum"),
            ),
        }
    }

    /// Twist vector `[c_1, ..., c_m]` with
    /// `f = c_m + 1/(c_{m-1} + 1/(... + 1/c_1))`.
    ///
    /// All entries share the sign of `f`; only the outermost entry `c_m`
    /// may be zero. The diagram builder reads the vector innermost first:
    /// odd positions counted from the end are horizontal twist blocks, even
    /// ones vertical, so the last block is always horizontal.
    pub fn continued_fraction(&self) -> Result<Vec<BigInt>, FractionError> {
        if self.is_infinite() {
            return Err(FractionError::Infinite(self.clone()));
        }
        let negative = self.num.is_negative();
        let (mut p, mut q) = (self.num.abs(), self.den.clone());
        let mut outer_first = Vec::new();
        loop {
            let (quot, rem) = p.div_rem(&q);
            outer_first.push(quot);
            if rem.is_zero() {
                break;
            }
            p = q;
            q = rem;
        }
        outer_first.reverse();
        if negative {
            for c in &mut outer_first {
                *c = -c.clone();
            }
        }
        Ok(outer_first)
    }

    /// Inverse of [`Fraction::continued_fraction`].
    pub fn from_continued_fraction(terms: &[BigInt]) -> Result<Self, FractionError> {
        let mut iter = terms.iter();
        let first = iter
            .next()
            .ok_or_else(|| FractionError::Parse("empty twist vector".into()))?;
        let mut value = Fraction::integer(first.clone());
        for c in iter {
            value = value
                .recip()
                .checked_add(&Fraction::integer(c.clone()))
                .expect("finite");
        }
        Ok(value)
    }

    /// The 2-bridge link `N([p/q])`.
    pub fn numerator_two_bridge(&self) -> TwoBridgeLink {
        TwoBridgeLink::from_numerator(&self.num, &self.den)
    }

    /// The 2-bridge link `D([p/q]) = N([p/q]⊥)`.
    pub fn denominator_two_bridge(&self) -> TwoBridgeLink {
        self.rotate().numerator_two_bridge()
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if self.is_integral() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Fraction {
    type Err = FractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(t)
            .trim();
        if matches!(t, "inf" | "∞" | "infinity") {
            return Ok(Fraction::infinity());
        }
        let bad = || FractionError::Parse(s.to_string());
        match t.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                Fraction::new(p, q)
            }
            None => Ok(Fraction::integer(t.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Fraction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn big_as_string<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Schubert normal form `b(α, β)` of a 2-bridge link.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TwoBridgeLink {
    #[serde(serialize_with = "big_as_string")]
    pub alpha: BigInt,
    #[serde(serialize_with = "big_as_string")]
    pub beta: BigInt,
}

impl TwoBridgeLink {
    /// `N([p/q]) = b(|p|, q·sign(p) mod |p|)`.
    fn from_numerator(p: &BigInt, q: &BigInt) -> Self {
        if p.is_zero() {
            return TwoBridgeLink {
                alpha: BigInt::zero(),
                beta: BigInt::one(),
            };
        }
        let alpha = p.abs();
        let signed_q = if p.is_negative() {
            -q.clone()
        } else {
            q.clone()
        };
        let beta = signed_q.mod_floor(&alpha);
        TwoBridgeLink { alpha, beta }
    }

    pub fn components(&self) -> usize {
        if self.alpha.is_even() {
            2
        } else {
            1
        }
    }

    pub fn is_unknot(&self) -> bool {
        self.alpha.is_one()
    }

    pub fn is_unlink(&self) -> bool {
        self.alpha.is_zero()
    }

    /// The determinant of a 2-bridge link is `α`.
    pub fn determinant(&self) -> BigInt {
        self.alpha.clone()
    }

    /// Schubert: `b(α, β) = b(α, β')` iff `β' ≡ β` or `β·β' ≡ 1 (mod α)`.
    pub fn same_link(&self, other: &TwoBridgeLink) -> bool {
        self.classify_against(other, false)
    }

    /// As [`TwoBridgeLink::same_link`] but also identifying mirror images
    /// (`β' ≡ -β` or `β·β' ≡ -1`).
    pub fn same_up_to_mirror(&self, other: &TwoBridgeLink) -> bool {
        self.classify_against(other, true)
    }

    fn classify_against(&self, other: &TwoBridgeLink, allow_mirror: bool) -> bool {
        if self.alpha != other.alpha {
            return false;
        }
        let a = &self.alpha;
        if a.is_zero() || a.is_one() {
            return true;
        }
        let b = self.beta.mod_floor(a);
        let b2 = other.beta.mod_floor(a);
        let prod = (&b * &b2).mod_floor(a);
        let neg_one = (a - 1u32).mod_floor(a);
        if b == b2 || prod.is_one() {
            return true;
        }
        allow_mirror && ((&b + &b2).mod_floor(a).is_zero() || prod == neg_one)
    }
}

impl fmt::Display for TwoBridgeLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b({}, {})", self.alpha, self.beta)
    }
}

/// What `N([t] + [u])` is for two rational tangles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalClosure {
    #[serde(serialize_with = "big_as_string")]
    pub alpha: BigInt,
    pub components: usize,
    pub unknot: bool,
    pub unlink: bool,
    pub split: bool,
}

/// `N([p/q] + [r/s])` is the 2-bridge link with `α = |ps + rq|`.
pub fn rational_closure_verdict(t: &Fraction, u: &Fraction) -> RationalClosure {
    let alpha = (t.num() * u.den() + u.num() * t.den()).abs();
    let unlink = alpha.is_zero();
    RationalClosure {
        components: if alpha.is_even() { 2 } else { 1 },
        unknot: alpha.is_one(),
        unlink,
        split: unlink,
        alpha,
    }
}

/// A rational `r/s` with `N([f] + [r/s])` the unknot, chosen with
/// `|s| ≤ |p|` via the extended Euclidean algorithm.
pub fn rational_unknotting_closure(f: &Fraction) -> Fraction {
    // Solve p·s + q·r = 1.
    let (p, q) = (f.num(), f.den());
    if q.is_zero() {
        return Fraction::zero();
    }
    if p.is_zero() {
        return Fraction::infinity();
    }
    let ext = p.extended_gcd(q);
    // ext.x·p + ext.y·q = gcd = ±1
    let (s, r) = if ext.gcd.is_one() {
        (ext.x, ext.y)
    } else {
        (-ext.x, -ext.y)
    };
    Fraction::new(r, s).expect("coprime solution")
}
