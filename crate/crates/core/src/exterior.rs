//! Exterior algebra on the generators `σ_1..σ_n, ω_{2,1}..ω_{n,1}` with an
//! optional fibre-volume marker `ρ`, over exact rationals.
//!
//! A blade is a bitset: `σ_i` sits at bit `i-1` and `ω_{j,1}` at bit
//! `32+j-2`, so the integer order of bits is the canonical generator order
//! and the encoding does not depend on `n`. The marker `ρ` always sits to
//! the right of every generator and never takes part in reordering.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational};

const OMEGA_SHIFT: u32 = 32;
const SIGMA_MASK: u64 = (1 << OMEGA_SHIFT) - 1;

/// Largest ambient dimension the bit encoding supports.
pub const MAX_N: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Sigma(usize),
    Omega1(usize),
}

impl Generator {
    fn bit(self) -> u64 {
        match self {
            Generator::Sigma(i) => 1 << (i - 1),
            Generator::Omega1(j) => 1 << (OMEGA_SHIFT as usize + j - 2),
        }
    }

    fn from_bit(b: u32) -> Generator {
        if b < OMEGA_SHIFT {
            Generator::Sigma(b as usize + 1)
        } else {
            Generator::Omega1((b - OMEGA_SHIFT) as usize + 2)
        }
    }

    fn valid(self) -> bool {
        match self {
            Generator::Sigma(i) => (1..=MAX_N).contains(&i),
            Generator::Omega1(j) => (2..=MAX_N).contains(&j),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Sigma(i) => write!(f, "s{i}"),
            Generator::Omega1(j) => write!(f, "w{j}1"),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad generator `{s}`"));
        let g = if let Some(i) = s.strip_prefix('s') {
            Generator::Sigma(i.parse().map_err(|_| bad())?)
        } else if let Some(j) = s.strip_prefix('w') {
            let j = j.strip_suffix('1').ok_or_else(bad)?;
            Generator::Omega1(j.parse().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        if g.valid() {
            Ok(g)
        } else {
            Err(bad())
        }
    }
}

/// A canonically ordered product of distinct generators, possibly followed
/// by `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade {
    bits: u64,
    rho: bool,
}

impl Blade {
    pub const ONE: Blade = Blade { bits: 0, rho: false };

    pub fn rho() -> Blade {
        Blade { bits: 0, rho: true }
    }

    pub fn sigma(i: usize) -> Blade {
        Blade { bits: Generator::Sigma(i).bit(), rho: false }
    }

    pub fn omega(j: usize) -> Blade {
        Blade { bits: Generator::Omega1(j).bit(), rho: false }
    }

    /// `σ_I` for increasing or arbitrary `I`; returns the sign needed to put
    /// the product in canonical order (zero on repeats).
    pub fn sigmas(idx: &[usize]) -> (i32, Blade) {
        Self::product(idx.iter().map(|&i| Generator::Sigma(i)))
    }

    pub fn omegas(idx: &[usize]) -> (i32, Blade) {
        Self::product(idx.iter().map(|&j| Generator::Omega1(j)))
    }

    /// Canonical blade and sign of an ordered product of generators.
    pub fn product(gens: impl IntoIterator<Item = Generator>) -> (i32, Blade) {
        let mut sign = 1;
        let mut acc = Blade::ONE;
        for g in gens {
            let b = Blade { bits: g.bit(), rho: false };
            match acc.wedge(&b) {
                Some((s, w)) => {
                    sign *= s;
                    acc = w;
                }
                None => return (0, Blade::ONE),
            }
        }
        (sign, acc)
    }

    pub fn with_rho(self) -> Blade {
        Blade { rho: true, ..self }
    }

    pub fn has_rho(&self) -> bool {
        self.rho
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn sigma_bits(&self) -> u64 {
        self.bits & SIGMA_MASK
    }

    pub fn omega_bits(&self) -> u64 {
        self.bits & !SIGMA_MASK
    }

    pub fn sigma_degree(&self) -> usize {
        self.sigma_bits().count_ones() as usize
    }

    pub fn omega_degree(&self) -> usize {
        self.omega_bits().count_ones() as usize
    }

    /// Generator count; `ρ` is excluded from the grading.
    pub fn degree(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.bits & g.bit() != 0
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        let mut x = self.bits;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros();
            x &= x - 1;
            Some(Generator::from_bit(b))
        })
    }

    /// Sorted indices of the σ generators.
    pub fn sigma_indices(&self) -> Vec<usize> {
        self.generators()
            .filter_map(|g| match g {
                Generator::Sigma(i) => Some(i),
                _ => None,
            })
            .collect()
    }

    /// Sorted `j` of the `ω_{j,1}` generators.
    pub fn omega_indices(&self) -> Vec<usize> {
        self.generators()
            .filter_map(|g| match g {
                Generator::Omega1(j) => Some(j),
                _ => None,
            })
            .collect()
    }

    fn from_parts(sigma: u64, rest: Blade) -> Blade {
        Blade { bits: sigma | rest.omega_bits(), rho: rest.rho }
    }

    /// `self ∧ other` as `(sign, blade)`, or `None` when it vanishes.
    pub fn wedge(&self, other: &Blade) -> Option<(i32, Blade)> {
        if self.bits & other.bits != 0 || (self.rho && other.rho) {
            return None;
        }
        let sign = if merge_parity(self.bits, other.bits) { -1 } else { 1 };
        Some((sign, Blade { bits: self.bits | other.bits, rho: self.rho || other.rho }))
    }
}

/// Parity of the number of pairs `(x in a, y in b)` with `x > y`, i.e. of
/// the shuffle that sorts `a` followed by `b`.
fn merge_parity(a: u64, b: u64) -> bool {
    let mut count = 0u32;
    let mut x = b;
    while x != 0 {
        let j = x.trailing_zeros();
        count += (a >> j >> 1).count_ones();
        x &= x - 1;
    }
    count % 2 == 1
}

fn sign_of(odd: bool) -> i32 {
    if odd {
        -1
    } else {
        1
    }
}

fn choose2_odd(k: usize) -> bool {
    (k * k.saturating_sub(1) / 2) % 2 == 1
}

fn full_sigma(n: usize) -> u64 {
    (1u64 << n) - 1
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.generators().map(|g| g.to_string()).collect();
        if self.rho {
            parts.push("rho".into());
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("^"))
        }
    }
}

impl FromStr for Blade {
    type Err = Error;

    /// Accepts only canonical order, so that text and value correspond
    /// one-to-one.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Blade::ONE);
        }
        let mut blade = Blade::ONE;
        let mut last: Option<Generator> = None;
        for tok in s.split('^') {
            if blade.rho {
                return Err(Error::Parse(format!("`rho` must be last in `{s}`")));
            }
            if tok == "rho" {
                blade.rho = true;
                continue;
            }
            let g: Generator = tok.parse()?;
            if last.is_some_and(|l| l >= g) {
                return Err(Error::Parse(format!("blade `{s}` is not in canonical order")));
            }
            last = Some(g);
            blade.bits |= g.bit();
        }
        Ok(blade)
    }
}

/// Sparse rational combination of blades; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Multivector {
    terms: BTreeMap<Blade, Rational>,
}

impl Multivector {
    pub fn zero() -> Self {
        Multivector::default()
    }

    pub fn one() -> Self {
        Multivector::blade(Blade::ONE)
    }

    pub fn blade(b: Blade) -> Self {
        Multivector::term(Rational::one(), b)
    }

    pub fn term(c: Rational, b: Blade) -> Self {
        let mut m = Multivector::zero();
        m.add_term(b, c);
        m
    }

    pub fn sigma(i: usize) -> Self {
        Multivector::blade(Blade::sigma(i))
    }

    pub fn omega(j: usize) -> Self {
        Multivector::blade(Blade::omega(j))
    }

    pub fn rho() -> Self {
        Multivector::blade(Blade::rho())
    }

    /// Signed ordered product of generators.
    pub fn product(gens: impl IntoIterator<Item = Generator>) -> Self {
        let (s, b) = Blade::product(gens);
        Multivector::term(Rational::from_integer(s.into()), b)
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

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Blade, Rational> {
        self.terms
    }

    pub fn coefficient(&self, b: &Blade) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, b: Blade, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add_scaled(&mut self, other: &Multivector, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (b, v) in &other.terms {
            self.add_term(*b, v * c);
        }
    }

    pub fn add(&self, other: &Multivector) -> Multivector {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &Multivector) -> Multivector {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> Multivector {
        if c.is_zero() {
            return Multivector::zero();
        }
        Multivector { terms: self.terms.iter().map(|(b, v)| (*b, v * c)).collect() }
    }

    pub fn neg(&self) -> Multivector {
        self.scale(&-Rational::one())
    }

    pub fn wedge(&self, other: &Multivector) -> Multivector {
        let mut out = Multivector::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((s, w)) = a.wedge(b) {
                    let v = ca * cb;
                    out.add_term(w, if s < 0 { -v } else { v });
                }
            }
        }
        out
    }

    /// `self^k` under the wedge product.
    pub fn power(&self, k: usize) -> Multivector {
        (0..k).fold(Multivector::one(), |acc, _| acc.wedge(self))
    }

    /// The degree shared by all blades, if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Blade::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Part of `self` made of blades satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Blade) -> bool) -> Multivector {
        Multivector {
            terms: self.terms.iter().filter(|(b, _)| keep(b)).map(|(b, v)| (*b, v.clone())).collect(),
        }
    }

    /// Coefficient of `σ_1∧…∧σ_n∧ω_{2,1}∧…∧ω_{n,1}` (with or without `ρ`).
    pub fn top_coefficient(&self, n: usize, rho: bool) -> Rational {
        self.coefficient(&top_blade(n, rho))
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(b, c)| TermJson { coef: c.to_string(), blade: b.to_string() })
            .collect()
    }

    pub fn from_json_terms(terms: &[TermJson]) -> Result<Multivector> {
        let mut m = Multivector::zero();
        for t in terms {
            m.add_term(t.blade.parse()?, parse_rational(&t.coef)?);
        }
        Ok(m)
    }
}

/// The positively oriented top blade.
pub fn top_blade(n: usize, rho: bool) -> Blade {
    let bits = full_sigma(n) | (((1u64 << (n - 1)) - 1) << OMEGA_SHIFT);
    Blade { bits, rho }
}

/// Hodge star on the σ-block: `σ_I ↦ ±σ_{I^c}` with `σ_I ∧ *σ_I = σ_1∧…∧σ_n`.
pub fn hodge_star_sigma(n: usize, a: &Multivector) -> Result<Multivector> {
    let mut out = Multivector::zero();
    for (b, c) in a.terms() {
        if b.omega_bits() != 0 || b.rho {
            return Err(Error::NonSigmaInput);
        }
        check_sigma_range(n, b)?;
        let comp = full_sigma(n) & !b.bits;
        let s = sign_of(merge_parity(b.bits, comp));
        out.add_term(Blade { bits: comp, rho: false }, signed(c, s));
    }
    Ok(out)
}

fn check_sigma_range(n: usize, b: &Blade) -> Result<()> {
    if b.sigma_bits() & !full_sigma(n) != 0 {
        return Err(Error::IndexOutOfRange(format!("blade {b} exceeds n={n}")));
    }
    Ok(())
}

fn signed(c: &Rational, s: i32) -> Rational {
    if s < 0 {
        -c
    } else {
        c.clone()
    }
}

/// `*_1`: on a blade of σ-degree `k`, `(-1)^{C(n-k,2)} (*σ-part) ∧ rest`.
pub fn star1(n: usize, a: &Multivector) -> Multivector {
    let mut out = Multivector::zero();
    for (b, c) in a.terms() {
        let k = b.sigma_degree();
        let comp = full_sigma(n) & !b.sigma_bits();
        let odd = merge_parity(b.sigma_bits(), comp) ^ choose2_odd(n - k);
        out.add_term(Blade::from_parts(comp, *b), signed(c, sign_of(odd)));
    }
    out
}

/// Explicit inverse of [`star1`]: a blade of σ-degree `k` is the image of
/// `(-1)^{C(k,2)} ε σ_{J^c} ∧ rest`, where `*σ_{J^c} = ε σ_J`.
pub fn star1_inv(n: usize, a: &Multivector) -> Multivector {
    let mut out = Multivector::zero();
    for (b, c) in a.terms() {
        let k = b.sigma_degree();
        let comp = full_sigma(n) & !b.sigma_bits();
        let odd = merge_parity(comp, b.sigma_bits()) ^ choose2_odd(k);
        out.add_term(Blade::from_parts(comp, *b), signed(c, sign_of(odd)));
    }
    out
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(b, c)| format!("{c}*{b}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for Multivector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Multivector::zero());
        }
        let mut m = Multivector::zero();
        for term in s.split(" + ") {
            let (c, b) = term
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("term `{term}` lacks `coef*blade`")))?;
            m.add_term(b.parse()?, parse_rational(c)?);
        }
        Ok(m)
    }
}

/// JSON form of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub blade: String,
}

impl Serialize for Multivector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        Multivector::from_json_terms(&terms).map_err(serde::de::Error::custom)
    }
}
