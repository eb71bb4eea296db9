//! Exact Laurent polynomials over the integers.
//!
//! Terms are kept in graded lexicographic order (total degree first, then the
//! exponent vector lexicographically); the leading term is the largest one.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("variable count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("division is not exact")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation needs a nonzero polynomial")]
    ZeroInput,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, LaurentError>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The `i`-th seed variable (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn monomial(exps: Vec<i32>, c: impl Into<BigInt>) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(exps), c.into());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i32>, BigInt)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(LaurentError::DimensionMismatch(nvars, e.len()));
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the leading one down.
    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &BigInt)> {
        self.terms.iter().rev().map(|(m, c)| (m.0.as_slice(), c))
    }

    fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    fn check_dim(&self, o: &Self) -> Result<()> {
        if self.nvars == o.nvars {
            Ok(())
        } else {
            Err(LaurentError::DimensionMismatch(self.nvars, o.nvars))
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check_dim(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check_dim(o)?;
        let mut r = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(self.nvars);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    fn shift(&self, by: &[i32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Monomial(m.0.iter().zip(by).map(|(a, b)| a + b).collect()), c.clone()))
            .collect();
        LaurentPoly { nvars: self.nvars, terms }
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut out = vec![i32::MAX; self.nvars];
        for m in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(&m.0) {
                *o = (*o).min(e);
            }
        }
        if self.is_zero() {
            vec![0; self.nvars]
        } else {
            out
        }
    }

    /// Exact quotient. Both sides are first shifted to polynomials with the
    /// monomial content of the divisor removed, so that leading-term elimination
    /// runs under a well-order and terminates.
    pub fn div_exact(&self, g: &Self) -> Result<Self> {
        self.check_dim(g)?;
        if g.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        let gmin = g.min_exponents();
        let fmin = self.min_exponents();
        let neg = |v: &[i32]| v.iter().map(|x| -x).collect::<Vec<i32>>();
        let h = g.shift(&neg(&gmin));
        let mut r = self.shift(&neg(&fmin));
        let (hm, hc) = {
            let (m, c) = h.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut q = Self::zero(self.nvars);
        while let Some((rm, rc)) = r.leading() {
            let qm = rm.div(&hm);
            if qm.0.iter().any(|&e| e < 0) {
                return Err(LaurentError::NotDivisible);
            }
            let (qc, rem) = rc.div_rem(&hc);
            if !rem.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            let t = LaurentPoly { nvars: self.nvars, terms: BTreeMap::from([(qm, qc)]) };
            r = &r - &(&t * &h);
            q = &q + &t;
        }
        let back: Vec<i32> = fmin.iter().zip(&gmin).map(|(a, b)| a - b).collect();
        Ok(q.shift(&back))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// `max(0, -min exponent)` per variable.
    pub fn denominator_vector(&self) -> Result<Vec<u32>> {
        if self.is_zero() {
            return Err(LaurentError::ZeroInput);
        }
        Ok(self.min_exponents().iter().map(|&e| if e < 0 { (-e) as u32 } else { 0 }).collect())
    }

    pub fn has_positive_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|&e| e >= 0))
    }

    /// Evaluates at a point with nonzero coordinates wherever negative exponents occur.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut s = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (x, &e) in point.iter().zip(&m.0) {
                if e >= 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                } else {
                    t /= num_traits::pow(x.clone(), (-e) as usize);
                }
            }
            s += t;
        }
        s
    }

    /// Numerator over monomial denominator, e.g. `(x + y)/z`.
    pub fn to_fraction_string(&self, names: &[String]) -> String {
        let den = self.denominator_vector().unwrap_or_else(|_| vec![0; self.nvars]);
        if den.iter().all(|&d| d == 0) {
            return self.to_string_with(names);
        }
        let num = self.shift(&den.iter().map(|&d| d as i32).collect::<Vec<_>>());
        let dm = LaurentPoly::monomial(den.iter().map(|&d| d as i32).collect(), 1);
        let wrap = |p: &LaurentPoly| {
            let s = p.to_string_with(names);
            let single_factor = p.is_monomial() && s.chars().all(|c| c.is_alphanumeric() || c == '^');
            if single_factor {
                s
            } else {
                format!("({})", s)
            }
        };
        format!("{}/{}", wrap(&num), wrap(&dm))
    }

    /// Text form such as `x1^2*x2^-1 + 3*x3 - 1`, leading term first.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(k, &e)| if e == 1 { names[k].clone() } else { format!("{}^{}", names[k], e) })
                .collect();
            if factors.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&format!("{}*", a));
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    /// Inverse of [`to_string_with`](Self::to_string_with); also accepts `·` as the product sign.
    pub fn parse(text: &str, names: &[String]) -> Result<Self> {
        let nvars = names.len();
        let err = |m: &str| LaurentError::Parse(format!("{}: {:?}", m, text));
        let s: String = text.replace('·', "*").chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        // split at top-level signs, keeping exponent signs attached
        let chars: Vec<char> = s.chars().collect();
        let mut pieces: Vec<(bool, String)> = vec![];
        let mut cur = String::new();
        let mut neg = false;
        for (i, &ch) in chars.iter().enumerate() {
            let exp_sign = i > 0 && chars[i - 1] == '^';
            if (ch == '+' || ch == '-') && !exp_sign {
                if !cur.is_empty() {
                    pieces.push((neg, std::mem::take(&mut cur)));
                } else if i > 0 {
                    return Err(err("dangling sign"));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err("trailing sign"));
        }
        pieces.push((neg, cur));
        let mut p = Self::zero(nvars);
        for (neg, body) in pieces {
            let mut coeff = BigInt::one();
            let mut exps = vec![0i32; nvars];
            for f in body.split('*') {
                if f.is_empty() {
                    return Err(err("empty factor"));
                }
                if f.chars().next().unwrap().is_ascii_digit() {
                    coeff *= f.parse::<BigInt>().map_err(|_| err("bad coefficient"))?;
                    continue;
                }
                let (name, e) = match f.split_once('^') {
                    Some((a, b)) => (a, b.parse::<i32>().map_err(|_| err("bad exponent"))?),
                    None => (f, 1),
                };
                let k = names.iter().position(|x| x == name).ok_or_else(|| err("unknown variable"))?;
                exps[k] += e;
            }
            if neg {
                coeff = -coeff;
            }
            p.add_term(Monomial(exps), coeff);
        }
        Ok(p)
    }

    pub fn to_json(&self, names: &[String]) -> serde_json::Value {
        serde_json::to_value(LaurentJson::from_poly(self, names)).expect("json")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: LaurentJson = serde_json::from_value(v.clone()).map_err(|e| LaurentError::Parse(e.to_string()))?;
        j.into_poly()
    }
}

/// `x1`, `x2`, ... used when no names are given.
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{}", i)).collect()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.nvars)))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    exps: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl LaurentJson {
    fn from_poly(p: &LaurentPoly, names: &[String]) -> Self {
        LaurentJson {
            vars: names.to_vec(),
            terms: p.terms().map(|(m, c)| TermJson { coeff: c.to_string(), exps: m.to_vec() }).collect(),
        }
    }

    fn into_poly(self) -> Result<LaurentPoly> {
        let n = self.vars.len();
        let terms = self
            .terms
            .into_iter()
            .map(|t| {
                t.coeff
                    .parse::<BigInt>()
                    .map(|c| (t.exps, c))
                    .map_err(|_| LaurentError::Parse(format!("bad coefficient {:?}", t.coeff)))
            })
            .collect::<Result<Vec<_>>>()?;
        LaurentPoly::from_terms(n, terms)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentJson::from_poly(self, &default_names(self.nvars)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        LaurentJson::deserialize(d)?.into_poly().map_err(serde::de::Error::custom)
    }
}

// Operator forms panic on a variable-count mismatch; use the checked_* methods to recover.

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        self.checked_add(o).expect("laurent add")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(o).expect("laurent sub")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(o).expect("laurent mul")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}
