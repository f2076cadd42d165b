//! Sparse Laurent polynomials with exact integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Var {
    A,
    /// `t^(1/2)`: exponent `e` stands for `t^(e/2)`.
    SqrtT,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    pub var: Var,
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero(var: Var) -> Self {
        LaurentPoly {
            var,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(var: Var) -> Self {
        Self::monomial(var, 1, 0)
    }

    pub fn monomial(var: Var, coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero(var);
        p.add_term(exp, coeff.into());
        p
    }

    pub fn from_terms(var: Var, terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut p = Self::zero(var);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.var);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Multiplies every exponent by `k / d`; `None` when not integral.
    pub fn substitute(&self, var: Var, k: i64, d: i64) -> Option<Self> {
        let mut out = Self::zero(var);
        for (e, c) in &self.terms {
            if (e * k) % d != 0 {
                return None;
            }
            out.add_term(e * k / d, c.clone());
        }
        Some(out)
    }

    /// Value at `x = z` for a Gaussian rational `z ≠ 0`.
    pub fn eval(&self, z: &Gaussian) -> Gaussian {
        let inv = z.recip();
        let mut acc = Gaussian::zero();
        for (e, c) in &self.terms {
            let base = if *e >= 0 { z } else { &inv };
            acc = acc.add(
                &base
                    .pow(e.unsigned_abs())
                    .scale(&BigRational::from_integer(c.clone())),
            );
        }
        acc
    }

    /// Value at `t = z`; with half-integer exponents `z` must have an exact
    /// square root.
    pub fn eval_t(&self, t: &Gaussian) -> Result<Gaussian, EvalError> {
        match self.var {
            Var::A => Err(EvalError::WrongVariable),
            Var::SqrtT => {
                if self.terms.keys().all(|e| e % 2 == 0) {
                    let p = self.substitute(Var::SqrtT, 1, 2).expect("even exponents");
                    Ok(p.eval(t))
                } else {
                    let root = t.sqrt().ok_or(EvalError::NoSquareRoot)?;
                    Ok(self.eval(&root))
                }
            }
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, other: &LaurentPoly) -> LaurentPoly {
        self + &(-other)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            var: self.var,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.var);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let power = match self.var {
                Var::A => match e {
                    0 => String::new(),
                    1 => "A".to_string(),
                    _ => format!("A^{e}"),
                },
                Var::SqrtT => match e {
                    0 => String::new(),
                    2 => "t".to_string(),
                    e if e % 2 == 0 => format!("t^{}", e / 2),
                    e => format!("t^({e}/2)"),
                },
            };
            match (power.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{power}")?,
                (false, false) => write!(f, "{mag}*{power}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<(i64, String)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.to_string()))
            .collect();
        let mut st = s.serialize_struct("LaurentPoly", 3)?;
        st.serialize_field("var", &self.var)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("evaluation at t needs a polynomial in t^(1/2)")]
    WrongVariable,
    #[error("the point has no exact square root, needed for half-integer powers of t")]
    NoSquareRoot,
    #[error("cannot evaluate at 0")]
    Zero,
    #[error("bad point `{0}`: expected a rational `p/q` or a Gaussian integer `a+bi`")]
    Parse(String),
}

/// A Gaussian rational `re + im·i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    pub fn integer(re: i64, im: i64) -> Self {
        Gaussian {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn zero() -> Self {
        Self::integer(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Gaussian) -> Gaussian {
        Gaussian {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn mul(&self, o: &Gaussian) -> Gaussian {
        Gaussian {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn scale(&self, k: &BigRational) -> Gaussian {
        Gaussian {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> Gaussian {
        let n = self.norm();
        Gaussian {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn pow(&self, n: u64) -> Gaussian {
        let mut out = Self::integer(1, 0);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        out
    }

    /// An exact square root, when one exists with rational parts.
    pub fn sqrt(&self) -> Option<Gaussian> {
        if self.im.is_zero() {
            let r = rational_sqrt(&self.re.abs())?;
            return Some(if self.re.is_negative() {
                Gaussian {
                    re: BigRational::zero(),
                    im: r,
                }
            } else {
                Gaussian {
                    re: r,
                    im: BigRational::zero(),
                }
            });
        }
        // (x + yi)^2 = re + im·i with x^2 = (|z| + re)/2.
        let modulus = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(2.into());
        let x = rational_sqrt(&((&modulus + &self.re) / &two))?;
        let y = &self.im / (&two * &x);
        Some(Gaussian { re: x, im: y })
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{}-{}i", self.re, -&self.im),
            (false, false) => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

impl FromStr for Gaussian {
    type Err = EvalError;

    /// `p`, `p/q`, `bi`, `i`, `-i` or `a+bi` / `a-bi`.
    fn from_str(s: &str) -> Result<Self, EvalError> {
        let bad = || EvalError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let int = |x: &str| -> Result<BigInt, EvalError> {
            match x {
                "" | "+" => Ok(BigInt::one()),
                "-" => Ok(-BigInt::one()),
                x => x.parse().map_err(|_| bad()),
            }
        };
        let g = if let Some(body) = t.strip_suffix('i') {
            let split = body.rfind(['+', '-']).filter(|&k| k > 0);
            let (re, im) = match split {
                Some(k) => (
                    body[..k].parse::<BigInt>().map_err(|_| bad())?,
                    int(&body[k..])?,
                ),
                None => (BigInt::zero(), int(body)?),
            };
            Gaussian {
                re: BigRational::from_integer(re),
                im: BigRational::from_integer(im),
            }
        } else {
            let re = match t.split_once('/') {
                Some((p, q)) => {
                    let q: BigInt = q.parse().map_err(|_| bad())?;
                    if q.is_zero() {
                        return Err(bad());
                    }
                    BigRational::new(p.parse().map_err(|_| bad())?, q)
                }
                None => BigRational::from_integer(t.parse().map_err(|_| bad())?),
            };
            Gaussian {
                re,
                im: BigRational::zero(),
            }
        };
        if g.is_zero() {
            return Err(EvalError::Zero);
        }
        Ok(g)
    }
}
