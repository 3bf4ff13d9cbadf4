//! Exact scalars: arbitrary-precision rationals times a Laurent monomial in
//! formal volume symbols.
//!
//! The symbols `omega(m)` (volume of the unit sphere `S^{m-1}`), `volSO(n)`
//! and `volFlag` never receive numeric values inside the engine. Every
//! identity the engine checks closes over the Laurent ring they generate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

/// Shorthand for a small rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// A formal unit symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unit {
    /// Volume of the unit sphere `S^{m-1}` in `R^m`.
    OmegaSphere(u32),
    /// Volume of `SO(n)`.
    VolSO(u32),
    /// Volume of the flag manifold fibre normalisation.
    VolFlag,
}

impl Unit {
    pub fn symbol(&self) -> String {
        match self {
            Unit::OmegaSphere(m) => format!("omega({m})"),
            Unit::VolSO(n) => format!("volSO({n})"),
            Unit::VolFlag => "volFlag".to_string(),
        }
    }

    fn latex(&self) -> String {
        match self {
            Unit::OmegaSphere(m) => format!("\\omega_{{{m}}}"),
            Unit::VolSO(n) => format!("\\mathrm{{vol}}\\,SO({n})"),
            Unit::VolFlag => "\\mathrm{vol}\\,\\mathrm{Flag}".to_string(),
        }
    }

    /// Display-only numeric value; `None` for `volFlag`, which depends on
    /// data the symbol does not carry.
    fn approx(&self) -> Option<f64> {
        match self {
            Unit::OmegaSphere(m) => Some(sphere_volume(*m)),
            Unit::VolSO(n) => Some((2..=*n).map(sphere_volume).product()),
            Unit::VolFlag => None,
        }
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "volFlag" {
            return Ok(Unit::VolFlag);
        }
        let inner = |prefix: &str| -> Option<u32> {
            s.strip_prefix(prefix)?.strip_suffix(')')?.parse().ok()
        };
        if let Some(m) = inner("omega(") {
            if m >= 1 {
                return Ok(Unit::OmegaSphere(m));
            }
        }
        if let Some(n) = inner("volSO(") {
            return Ok(Unit::VolSO(n));
        }
        Err(Error::Parse(format!("unknown unit symbol `{s}`")))
    }
}

/// `2 pi^{m/2} / Gamma(m/2)`.
fn sphere_volume(m: u32) -> f64 {
    let half = m as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / gamma_half_integer(m)
}

/// `Gamma(m/2)` for a positive integer `m`.
fn gamma_half_integer(m: u32) -> f64 {
    if m.is_multiple_of(2) {
        (1..m / 2).map(|k| k as f64).product()
    } else {
        // Gamma(1/2) * (1/2)(3/2)...((m-2)/2)
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < m as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// A Laurent monomial in the unit symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Units(BTreeMap<Unit, i32>);

impl Units {
    pub fn one() -> Self {
        Units::default()
    }

    pub fn of(unit: Unit, exp: i32) -> Self {
        let mut u = Units::default();
        u.push(unit, exp);
        u
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, unit: Unit) -> i32 {
        self.0.get(&unit).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Unit, i32)> + '_ {
        self.0.iter().map(|(u, e)| (*u, *e))
    }

    fn push(&mut self, unit: Unit, exp: i32) {
        let e = self.0.entry(unit).or_insert(0);
        *e += exp;
        if *e == 0 {
            self.0.remove(&unit);
        }
    }

    pub fn mul(&self, other: &Units) -> Units {
        let mut out = self.clone();
        for (u, e) in other.iter() {
            out.push(u, e);
        }
        out
    }

    pub fn inv(&self) -> Units {
        Units(self.0.iter().map(|(u, e)| (*u, -e)).collect())
    }

    pub fn div(&self, other: &Units) -> Units {
        self.mul(&other.inv())
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(u, e)| format!("{}^{}", u.symbol(), e))
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Exact rational coefficient times a unit monomial, kept canonical: the
/// rational is reduced and a zero coefficient carries no units.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    coeff: Rational,
    units: Units,
}

impl Scalar {
    pub fn new(coeff: Rational, units: Units) -> Self {
        Scalar { coeff, units }.canonical()
    }

    pub fn zero() -> Self {
        Scalar::new(Rational::zero(), Units::one())
    }

    pub fn one() -> Self {
        Scalar::new(Rational::one(), Units::one())
    }

    pub fn rational(coeff: Rational) -> Self {
        Scalar::new(coeff, Units::one())
    }

    /// `omega(m)^exp`.
    pub fn omega(m: usize, exp: i32) -> Self {
        Scalar::new(Rational::one(), Units::of(Unit::OmegaSphere(m as u32), exp))
    }

    /// `volSO(n)^exp`.
    pub fn vol_so(n: usize, exp: i32) -> Self {
        Scalar::new(Rational::one(), Units::of(Unit::VolSO(n as u32), exp))
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn units(&self) -> &Units {
        &self.units
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Restores the canonical form. Idempotent.
    pub fn canonical(self) -> Self {
        // BigRational reduces on construction, so only the zero rule remains.
        if self.coeff.is_zero() {
            Scalar { coeff: Rational::zero(), units: Units::one() }
        } else {
            self
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.units != other.units {
            return Err(Error::UnitMismatch {
                left: self.units.to_string(),
                right: other.units.to_string(),
            });
        }
        Ok(Scalar::new(&self.coeff + &other.coeff, self.units.clone()))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&-other)
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::new(&self.coeff / &other.coeff, self.units.div(&other.units)))
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        Scalar::new(&self.coeff * r, self.units.clone())
    }

    /// Floating-point rendering for human consumption only; `None` if a unit
    /// has no numeric value.
    pub fn approx_f64(&self) -> Option<f64> {
        let mut v = self.coeff.to_f64()?;
        for (u, e) in self.units.iter() {
            v *= u.approx()?.powi(e);
        }
        Some(v)
    }

    /// `\frac{num}{den}\omega_{n}^{-1}` style LaTeX.
    pub fn to_latex(&self) -> String {
        let c = &self.coeff;
        let sign = if c.is_negative() { "-" } else { "" };
        let num = c.numer().abs();
        let den = c.denom();
        let mut s = if den.is_one() {
            format!("{sign}{num}")
        } else {
            format!("{sign}\\frac{{{num}}}{{{den}}}")
        };
        for (u, e) in self.units.iter() {
            if e == 1 {
                s.push_str(&u.latex());
            } else {
                s.push_str(&format!("{}^{{{}}}", u.latex(), e));
            }
        }
        s
    }

    pub fn to_json_value(&self) -> ScalarJson {
        ScalarJson {
            num: self.coeff.numer().to_string(),
            den: self.coeff.denom().to_string(),
            units: self
                .units
                .iter()
                .map(|(u, e)| UnitJson { sym: u.symbol(), exp: e })
                .collect(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.coeff, self.units.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.coeff * &rhs.coeff, self.units.mul(&rhs.units))
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::rational(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.coeff.numer(), self.coeff.denom())?;
        for (u, e) in self.units.iter() {
            write!(f, " * {}^{}", u.symbol(), e)?;
        }
        Ok(())
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('*').map(str::trim);
        let head = parts.next().filter(|h| !h.is_empty()).ok_or_else(|| Error::Parse("empty scalar".into()))?;
        let coeff = parse_rational(head)?;
        let mut units = Units::one();
        for p in parts {
            let (sym, exp) = p
                .rsplit_once('^')
                .ok_or_else(|| Error::Parse(format!("missing exponent in `{p}`")))?;
            let exp: i32 = exp.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in `{p}`")))?;
            units.push(sym.parse()?, exp);
        }
        Ok(Scalar::new(coeff, units))
    }
}

/// Parses `a/b` or `a`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Wire form of a unit exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitJson {
    pub sym: String,
    pub exp: i32,
}

/// Wire form `{num, den, units:[{sym, exp}]}` with decimal strings for the
/// big integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub num: String,
    pub den: String,
    pub units: Vec<UnitJson>,
}

impl TryFrom<ScalarJson> for Scalar {
    type Error = Error;

    fn try_from(j: ScalarJson) -> Result<Scalar> {
        let coeff = parse_rational(&format!("{}/{}", j.num, j.den))?;
        let mut units = Units::one();
        for u in j.units {
            units.push(u.sym.parse()?, u.exp);
        }
        Ok(Scalar::new(coeff, units))
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ScalarJson::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(m: usize, e: i32, num: i64, den: i64) -> Scalar {
        Scalar::omega(m, e).scale(&rat(num, den))
    }

    #[test]
    fn like_unit_addition() {
        let s = w(3, -1, 1, 2).checked_add(&w(3, -1, 1, 3)).unwrap();
        assert_eq!(s, w(3, -1, 5, 6));
    }

    #[test]
    fn rational_product() {
        let s = &Scalar::rational(rat(2, 3)) * &w(5, 1, 3, 4);
        assert_eq!(s, w(5, 1, 1, 2));
    }

    #[test]
    fn distinct_units_do_not_add() {
        let err = Scalar::omega(3, 1).checked_add(&Scalar::omega(4, 1)).unwrap_err();
        assert!(matches!(err, Error::UnitMismatch { .. }));
    }

    #[test]
    fn zero_absorbs_units() {
        let z = w(3, -1, 1, 2).checked_sub(&w(3, -1, 1, 2)).unwrap();
        assert!(z.units().is_one());
        assert_eq!(z, Scalar::zero());
        assert_eq!(Scalar::zero().checked_add(&Scalar::omega(7, 2)).unwrap(), Scalar::omega(7, 2));
    }

    #[test]
    fn division() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
        let q = Scalar::omega(4, 1).checked_div(&w(4, 2, 2, 1)).unwrap();
        assert_eq!(q, w(4, -1, 1, 2));
    }

    #[test]
    fn text_form() {
        let s = &Scalar::omega(3, -1) * &Scalar::vol_so(4, 1).scale(&rat(-5, 6));
        assert_eq!(s.to_string(), "-5/6 * omega(3)^-1 * volSO(4)^1");
        assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s);
        assert_eq!("3".parse::<Scalar>().unwrap(), Scalar::rational(int(3)));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("1 * foo(2)^1".parse::<Scalar>().is_err());
    }

    #[test]
    fn json_form() {
        let s = w(5, -1, 3, 16);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"num":"3","den":"16","units":[{"sym":"omega(5)","exp":-1}]}"#);
        assert_eq!(serde_json::from_str::<Scalar>(&j).unwrap(), s);
    }

    #[test]
    fn latex_form() {
        assert_eq!(w(4, -1, -1, 2).to_latex(), "-\\frac{1}{2}\\omega_{4}^{-1}");
        assert_eq!(w(4, 1, 3, 1).to_latex(), "3\\omega_{4}");
    }

    #[test]
    fn display_only_values() {
        let w2 = Scalar::omega(2, 1).approx_f64().unwrap();
        let w3 = Scalar::omega(3, 1).approx_f64().unwrap();
        assert!((w2 - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((w3 - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        let w5 = Scalar::omega(5, 1).approx_f64().unwrap();
        assert!((w5 - 8.0 * std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-12);
        assert!(Scalar::new(int(1), Units::of(Unit::VolFlag, 1)).approx_f64().is_none());
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            let (a, b, c) = (Scalar::rational(a), Scalar::rational(b), Scalar::rational(c));
            let ab_c = a.checked_add(&b).unwrap().checked_add(&c).unwrap();
            let a_bc = a.checked_add(&b.checked_add(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            let lhs = &a * &b.checked_add(&c).unwrap();
            let rhs = (&a * &b).checked_add(&(&a * &c)).unwrap();
            prop_assert_eq!(lhs, rhs);
            if !b.is_zero() {
                prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
            }
        }

        #[test]
        fn canonical_is_idempotent(a in arb_rat(), m in 1usize..9, e in -3i32..3) {
            let s = Scalar::omega(m, e).scale(&a);
            prop_assert_eq!(s.clone().canonical().canonical(), s.clone().canonical());
            prop_assert!(s.coeff().denom() > &BigInt::zero());
            prop_assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s);
        }
    }
}
