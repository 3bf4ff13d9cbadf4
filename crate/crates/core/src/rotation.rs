//! The rotation algebra `R[x_ij]/I`, realised inside the exterior kernel by
//! `x_ij = ½(σ_i∧ω_{j,1} + σ_j∧ω_{i,1})`, together with its chord-diagram
//! basis and the primal rotation-measure quotient.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{binom_usize, noncrossing_matchings, permutation_sign};
use crate::error::{Error, Result};
use crate::exterior::{Blade, Generator, Multivector, MAX_N};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::{rat, Rational, Scalar, Units};

/// An element of the rotation algebra of `R^n`, stored as a body multivector
/// over `σ_2..σ_n, ω_{2,1}..ω_{n,1}` times a common unit monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    n: usize,
    units: Units,
    body: Multivector,
}

impl AlgebraElement {
    /// Validates that every blade uses indices `2..=n`, carries no `ρ`, and
    /// has equal σ- and ω-degree.
    pub fn new(n: usize, body: Multivector) -> Result<Self> {
        check_n(n)?;
        for (b, _) in body.terms() {
            let ok = !b.has_rho()
                && b.sigma_degree() == b.omega_degree()
                && b.sigma_indices().iter().chain(&b.omega_indices()).all(|&i| (2..=n).contains(&i));
            if !ok {
                return Err(Error::IndexOutOfRange(format!("blade {b} is not an algebra blade for n={n}")));
            }
        }
        Ok(AlgebraElement { n, units: Units::one(), body })
    }

    pub(crate) fn from_body(n: usize, body: Multivector) -> Self {
        AlgebraElement { n, units: Units::one(), body }
    }

    pub fn one(n: usize) -> Self {
        Self::from_body(n, Multivector::one())
    }

    pub fn zero(n: usize) -> Self {
        Self::from_body(n, Multivector::zero())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn units(&self) -> &Units {
        &self.units
    }

    pub fn body(&self) -> &Multivector {
        &self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Algebra degree (half the blade degree); `None` for zero or mixed
    /// degree.
    pub fn degree(&self) -> Option<usize> {
        self.body.homogeneous_degree().map(|d| d / 2)
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraElement {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        AlgebraElement { n: self.n, units: self.units.mul(s.units()), body: self.body.scale(s.coeff()) }
    }

    pub fn scale_q(&self, r: &Rational) -> AlgebraElement {
        self.scale(&Scalar::rational(r.clone()))
    }

    pub fn checked_add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.units != other.units {
            return Err(Error::UnitMismatch { left: self.units.to_string(), right: other.units.to_string() });
        }
        let body = self.body.add(&other.body);
        let units = if body.is_zero() { Units::one() } else { self.units.clone() };
        Ok(AlgebraElement { n: self.n, units, body })
    }

    pub fn checked_sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.checked_add(&other.scale_q(&-Rational::one()))
    }

    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        multiply(self, other)
    }

    pub fn pow(&self, k: usize) -> AlgebraElement {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = multiply(&acc, self).expect("same n");
        }
        acc
    }

    /// Body as a sparse vector keyed by blade.
    pub fn to_sparse(&self) -> SparseVec<Blade> {
        self.body.clone().into_terms()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.units.is_one() || self.is_zero() {
            write!(f, "{}", self.body)
        } else {
            write!(f, "({}) * {}", self.body, self.units)
        }
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if !(1..=MAX_N).contains(&n) {
        return Err(Error::IndexOutOfRange(format!("n={n} outside 1..={MAX_N}")));
    }
    Ok(())
}

/// Product in the algebra: the wedge of the bodies.
pub fn multiply(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    let body = a.body.wedge(&b.body);
    let units = if body.is_zero() { Units::one() } else { a.units.mul(&b.units) };
    Ok(AlgebraElement { n: a.n, units, body })
}

/// `x_ij`, `2 <= i, j <= n`.
pub fn generator(n: usize, i: usize, j: usize) -> Result<AlgebraElement> {
    check_n(n)?;
    for v in [i, j] {
        if !(2..=n).contains(&v) {
            return Err(Error::IndexOutOfRange(format!("x_{{{i},{j}}} needs 2 <= i,j <= {n}")));
        }
    }
    Ok(AlgebraElement::from_body(n, x_body(i, j)))
}

fn x_body(i: usize, j: usize) -> Multivector {
    let sw = |a, b| Multivector::product([Generator::Sigma(a), Generator::Omega1(b)]);
    if i == j {
        sw(i, i)
    } else {
        sw(i, j).add(&sw(j, i)).scale(&rat(1, 2))
    }
}

/// `E_i(x_{a,a} : a in idx)`.
pub fn elementary_symmetric(n: usize, idx: &[usize], i: usize) -> Result<AlgebraElement> {
    let diag: Vec<AlgebraElement> = idx.iter().map(|&a| generator(n, a, a)).try_collect()?;
    let mut acc = AlgebraElement::zero(n);
    for c in diag.iter().combinations(i) {
        let mut m = AlgebraElement::one(n);
        for x in c {
            m = multiply(&m, x)?;
        }
        acc = acc.checked_add(&m)?;
    }
    Ok(acc)
}

/// `det(x_ij)` for `i in rows`, `j in cols` (equal lengths).
pub fn determinant(n: usize, rows: &[usize], cols: &[usize]) -> Result<AlgebraElement> {
    if rows.len() != cols.len() {
        return Err(Error::DimensionMismatch(rows.len(), cols.len()));
    }
    let mut acc = AlgebraElement::zero(n);
    for perm in (0..cols.len()).permutations(cols.len()) {
        let mut m = AlgebraElement::one(n);
        for (r, &c) in rows.iter().zip(&perm) {
            m = multiply(&m, &generator(n, *r, cols[c])?)?;
        }
        let s = permutation_sign(&perm);
        acc = acc.checked_add(&m.scale_q(&Rational::from_integer(s.into())))?;
    }
    Ok(acc)
}

/// A chord-diagram monomial `Π_{d in D} x_dd · Π_{(a,b) in M} x_ab`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChordMonomial {
    pub n: usize,
    pub diagonals: Vec<usize>,
    pub matching: Vec<(usize, usize)>,
}

impl ChordMonomial {
    pub fn new(n: usize, diagonals: Vec<usize>, matching: Vec<(usize, usize)>) -> Result<Self> {
        let bad = |why: &str| Err(Error::BadIndexSet(why.to_string()));
        let mut diagonals = diagonals;
        diagonals.sort_unstable();
        let mut matching: Vec<(usize, usize)> =
            matching.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        matching.sort_unstable();
        let mut seen = BTreeSet::new();
        for &v in diagonals.iter().chain(matching.iter().flat_map(|(a, b)| [a, b])) {
            if !(2..=n).contains(&v) {
                return bad(&format!("index {v} outside 2..={n}"));
            }
            if !seen.insert(v) {
                return bad(&format!("index {v} used twice"));
            }
        }
        for (&(a, b), &(c, d)) in matching.iter().tuple_combinations() {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                return bad(&format!("chords ({a},{b}) and ({c},{d}) cross"));
            }
        }
        Ok(ChordMonomial { n, diagonals, matching })
    }

    pub fn degree(&self) -> usize {
        self.diagonals.len() + self.matching.len()
    }

    pub fn evaluate(&self) -> AlgebraElement {
        let mut body = Multivector::one();
        for &d in &self.diagonals {
            body = body.wedge(&x_body(d, d));
        }
        for &(a, b) in &self.matching {
            body = body.wedge(&x_body(a, b));
        }
        AlgebraElement::from_body(self.n, body)
    }
}

impl fmt::Display for ChordMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{{{}}}M{{", self.diagonals.iter().join(","))?;
        for (a, b) in &self.matching {
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

impl ChordMonomial {
    /// Parses the text form; `n` is not part of it.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad chord monomial `{s}`"));
        let rest = s.trim().strip_prefix("D{").ok_or_else(bad)?;
        let (d, rest) = rest.split_once("}M{").ok_or_else(bad)?;
        let m = rest.strip_suffix('}').ok_or_else(bad)?;
        let diagonals: Vec<usize> = if d.is_empty() {
            vec![]
        } else {
            d.split(',').map(|x| x.trim().parse().map_err(|_| bad())).try_collect()?
        };
        let mut matching = Vec::new();
        let mut m = m.trim();
        while !m.is_empty() {
            let inner = m.strip_prefix('(').ok_or_else(bad)?;
            let (pair, tail) = inner.split_once(')').ok_or_else(bad)?;
            let (a, b) = pair.split_once(',').ok_or_else(bad)?;
            matching.push((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?));
            m = tail.trim();
        }
        ChordMonomial::new(n, diagonals, matching)
    }
}

/// All chord monomials of degree `k`, sorted.
pub fn chord_basis(n: usize, k: usize) -> Vec<ChordMonomial> {
    let idx: Vec<usize> = (2..=n).collect();
    let mut out = Vec::new();
    for d in 0..=k.min(idx.len()) {
        let l = k - d;
        for diag in idx.iter().copied().combinations(d) {
            let rest: Vec<usize> = idx.iter().copied().filter(|v| !diag.contains(v)).collect();
            if 2 * l > rest.len() {
                continue;
            }
            for pts in rest.iter().copied().combinations(2 * l) {
                for m in noncrossing_matchings(&pts) {
                    out.push(ChordMonomial { n, diagonals: diag.clone(), matching: m });
                }
            }
        }
    }
    out.sort();
    out
}

/// Chord basis of one degree with its images reduced to echelon form, for
/// repeated coordinate extraction.
#[derive(Debug, Clone)]
pub struct ChordSystem {
    pub n: usize,
    pub k: usize,
    pub basis: Vec<ChordMonomial>,
    echelon: Echelon<Blade>,
}

impl ChordSystem {
    pub fn new(n: usize, k: usize) -> Self {
        let basis = chord_basis(n, k);
        let echelon = Echelon::from_vectors(basis.iter().map(|m| m.evaluate().to_sparse()));
        ChordSystem { n, k, basis, echelon }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn coordinates(&self, a: &AlgebraElement) -> Result<Vec<Scalar>> {
        if a.n != self.n {
            return Err(Error::DimensionMismatch(a.n, self.n));
        }
        if !a.is_zero() && a.degree() != Some(self.k) {
            return Err(Error::NotHomogeneous(self.k));
        }
        if self.rank() != self.basis.len() {
            return Err(Error::SolveFailure(format!("chord images dependent at n={}, k={}", self.n, self.k)));
        }
        let combo = self
            .echelon
            .solve(a.to_sparse())
            .ok_or_else(|| Error::SolveFailure("element outside the chord span".into()))?;
        Ok((0..self.basis.len())
            .map(|i| {
                let c = combo.get(&i).cloned().unwrap_or_else(Rational::zero);
                Scalar::new(c, a.units.clone())
            })
            .collect())
    }
}

/// Coefficients of `a` in [`chord_basis`]`(n, k)`.
pub fn coordinates(a: &AlgebraElement, k: usize) -> Result<Vec<Scalar>> {
    ChordSystem::new(a.n, k).coordinates(a)
}

/// Rank of the chord-monomial images in degree `k`.
pub fn graded_dimension(n: usize, k: usize) -> usize {
    ChordSystem::new(n, k).rank()
}

fn sigma_omega_blade(sig: &[usize], om: &[usize]) -> Multivector {
    Multivector::product(sig.iter().map(|&i| Generator::Sigma(i)).chain(om.iter().map(|&j| Generator::Omega1(j))))
}

/// `dα = Σ_{i=2}^n σ_i∧ω_{i,1}`.
pub fn d_alpha(n: usize) -> Multivector {
    (2..=n).fold(Multivector::zero(), |acc, i| acc.add(&sigma_omega_blade(&[i], &[i])))
}

/// The primal rotation-measure space in degree `k`:
/// `Λ^k ⊗ Λ^{n-1-k}` modulo the image of `dα ∧ (Λ^{k-1} ⊗ Λ^{n-2-k})`.
#[derive(Debug, Clone)]
pub struct RotationQuotient {
    pub n: usize,
    pub k: usize,
    image: Echelon<Blade>,
}

impl RotationQuotient {
    pub fn new(n: usize, k: usize) -> Self {
        let idx: Vec<usize> = (2..=n).collect();
        let da = d_alpha(n);
        let mut image = Echelon::new();
        if k >= 1 && n >= k + 2 {
            for s in idx.iter().copied().combinations(k - 1) {
                for w in idx.iter().copied().combinations(n - 2 - k) {
                    image.insert(da.wedge(&sigma_omega_blade(&s, &w)).into_terms());
                }
            }
        }
        RotationQuotient { n, k, image }
    }

    pub fn dimension(&self) -> usize {
        let m = binom_usize(self.n - 1, self.k);
        m * m - self.image.rank()
    }

    pub fn is_trivial(&self, v: &Multivector) -> bool {
        self.image.contains(v.clone().into_terms())
    }
}

pub fn rotation_space_dimension(n: usize, k: usize) -> usize {
    RotationQuotient::new(n, k).dimension()
}

fn check_sequence(n: usize, s: &[usize]) -> Result<()> {
    if s.iter().any(|v| !(2..=n).contains(v)) {
        return Err(Error::BadIndexSet(format!("{s:?} has entries outside 2..={n}")));
    }
    if s.iter().collect::<BTreeSet<_>>().len() != s.len() {
        return Err(Error::BadIndexSet(format!("{s:?} repeats an entry")));
    }
    Ok(())
}

/// Representative of `S_{I,J}`: `sgn · σ_I ∧ ω_{J^c}` with `J^c` ascending and
/// `sgn` the sign of the sequence `(J, J^c)`. Zero if `I` repeats.
pub fn omega_ij(n: usize, i: &[usize], j: &[usize]) -> Result<Multivector> {
    check_sequence(n, j)?;
    if i.iter().any(|v| !(2..=n).contains(v)) {
        return Err(Error::BadIndexSet(format!("{i:?} has entries outside 2..={n}")));
    }
    if i.len() != j.len() {
        return Err(Error::BadIndexSet(format!("|I|={} differs from |J|={}", i.len(), j.len())));
    }
    let jc: Vec<usize> = (2..=n).filter(|v| !j.contains(v)).collect();
    let full: Vec<usize> = j.iter().chain(&jc).copied().collect();
    let sgn = permutation_sign(&full);
    Ok(sigma_omega_blade(i, &jc).scale(&Rational::from_integer(sgn.into())))
}

/// The alternating sum `Σ_l (-1)^l S_{I'∪j'_l, J'∖j'_l}` as a primal form.
pub fn relation_form(n: usize, ip: &[usize], jp: &[usize]) -> Result<Multivector> {
    check_sequence(n, ip)?;
    check_sequence(n, jp)?;
    if jp.len() != ip.len() + 2 {
        return Err(Error::BadIndexSet(format!("need |J'| = |I'| + 2, got {} and {}", jp.len(), ip.len())));
    }
    let mut tot = Multivector::zero();
    for l in 1..=jp.len() {
        let i: Vec<usize> = ip.iter().copied().chain([jp[l - 1]]).collect();
        let j: Vec<usize> = jp.iter().enumerate().filter(|&(t, _)| t != l - 1).map(|(_, &v)| v).collect();
        let sign = if l % 2 == 0 { Rational::one() } else { -Rational::one() };
        tot.add_scaled(&omega_ij(n, &i, &j)?, &sign);
    }
    Ok(tot)
}

/// Whether the alternating-sum relation for `(I', J')` holds in the
/// rotation-measure quotient.
pub fn rotation_relation_check(n: usize, ip: &[usize], jp: &[usize]) -> Result<bool> {
    let form = relation_form(n, ip, jp)?;
    Ok(RotationQuotient::new(n, ip.len() + 1).is_trivial(&form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{binomial, chord_count, factorial, narayana};
    use crate::scalar::int;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn x(n: usize, i: usize, j: usize) -> AlgebraElement {
        generator(n, i, j).unwrap()
    }

    fn mul(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        multiply(a, b).unwrap()
    }

    #[test]
    fn generators() {
        let b: Blade = "s2^w21".parse().unwrap();
        assert_eq!(x(4, 2, 2).body(), &Multivector::blade(b));
        assert_eq!(x(4, 2, 3), x(4, 3, 2));
        assert!(matches!(generator(3, 2, 4), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(generator(3, 1, 2), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn products() {
        let sq = mul(&x(4, 2, 3), &x(4, 2, 3));
        assert_eq!(sq, mul(&x(4, 2, 2), &x(4, 3, 3)).scale_q(&rat(-1, 2)));
        let blade: Blade = "s2^s3^w21^w31".parse().unwrap();
        assert_eq!(sq.body(), &Multivector::term(rat(1, 2), blade));
        let rel = mul(&x(5, 2, 3), &x(5, 4, 5))
            .checked_add(&mul(&x(5, 2, 4), &x(5, 3, 5)))
            .unwrap()
            .checked_add(&mul(&x(5, 2, 5), &x(5, 3, 4)))
            .unwrap();
        assert!(rel.is_zero());
        assert!(mul(&x(4, 2, 2), &x(4, 2, 3)).is_zero());
        assert_eq!(multiply(&x(3, 2, 2), &x(4, 2, 2)), Err(Error::DimensionMismatch(3, 4)));
    }

    #[test]
    fn chord_basis_counts() {
        let b = chord_basis(3, 1);
        let text: Vec<String> = b.iter().map(|m| m.to_string()).collect();
        assert_eq!(text, ["D{}M{(2,3)}", "D{2}M{}", "D{3}M{}"]);
        assert_eq!(chord_basis(4, 3).len(), 1);
        assert_eq!(chord_basis(4, 3)[0].diagonals, vec![2, 3, 4]);
        assert_eq!(chord_basis(5, 2).len(), 20);
        for n in 1..9 {
            for k in 0..n {
                assert_eq!(BigInt::from(chord_basis(n, k).len()), chord_count(n, k));
            }
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(graded_dimension(4, 1), 6);
        assert_eq!(graded_dimension(4, 0), 1);
        assert_eq!(graded_dimension(7, 3), 175);
        for n in 1..7 {
            for k in 0..n {
                assert_eq!(BigInt::from(graded_dimension(n, k)), narayana(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn chord_coordinates() {
        let sq = mul(&x(4, 2, 3), &x(4, 2, 3));
        let sys = ChordSystem::new(4, 2);
        let c = sys.coordinates(&sq).unwrap();
        for (m, v) in sys.basis.iter().zip(&c) {
            let want = if m.diagonals == [2, 3] { rat(-1, 2) } else { int(0) };
            assert_eq!(v.coeff(), &want, "{m}");
        }
        let c = coordinates(&x(5, 2, 3), 1).unwrap();
        let basis = chord_basis(5, 1);
        let pos = basis.iter().position(|m| m.matching == [(2, 3)]).unwrap();
        assert!(c.iter().enumerate().all(|(i, v)| v.coeff() == &if i == pos { int(1) } else { int(0) }));
        // straightening a crossing pair
        let c = coordinates(&mul(&x(5, 2, 4), &x(5, 3, 5)), 2).unwrap();
        let basis = chord_basis(5, 2);
        for (m, v) in basis.iter().zip(&c) {
            let want = if m.matching == [(2, 3), (4, 5)] || m.matching == [(2, 5), (3, 4)] { int(-1) } else { int(0) };
            assert_eq!(v.coeff(), &want, "{m}");
        }
        assert_eq!(coordinates(&x(5, 2, 3), 2), Err(Error::NotHomogeneous(2)));
    }

    #[test]
    fn chord_text() {
        let m = ChordMonomial::new(7, vec![5, 2], vec![(7, 6), (3, 4)]).unwrap();
        assert_eq!(m.to_string(), "D{2,5}M{(3,4)(6,7)}");
        assert_eq!(ChordMonomial::parse(7, "D{2,5}M{(3,4)(6,7)}").unwrap(), m);
        assert_eq!(ChordMonomial::parse(3, "D{}M{}").unwrap().degree(), 0);
        assert!(ChordMonomial::new(6, vec![], vec![(2, 4), (3, 5)]).is_err());
        assert!(ChordMonomial::new(6, vec![2], vec![(2, 4)]).is_err());
        let j = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<ChordMonomial>(&j).unwrap(), m);
    }

    #[test]
    fn ideal_identities() {
        for n in 2..7 {
            let idx: Vec<usize> = (2..=n).collect();
            let det = determinant(n, &idx, &idx).unwrap();
            let prod = idx.iter().fold(AlgebraElement::one(n), |acc, &i| mul(&acc, &x(n, i, i)));
            let c = Rational::new(factorial(n as u64), BigInt::from(2).pow(n as u32 - 1));
            assert_eq!(det, prod.scale_q(&c), "n={n}");
        }
        for n in 2..8 {
            let idx: Vec<usize> = (2..=n).collect();
            for i in 0..n {
                for j in 0..n - i {
                    let lhs = mul(&elementary_symmetric(n, &idx, i).unwrap(), &elementary_symmetric(n, &idx, j).unwrap());
                    let rhs = elementary_symmetric(n, &idx, i + j)
                        .unwrap()
                        .scale_q(&Rational::from_integer(binomial((i + j) as i64, i as i64)));
                    assert_eq!(lhs, rhs, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn rotation_quotient() {
        assert_eq!(rotation_space_dimension(3, 1), 3);
        assert_eq!(rotation_space_dimension(4, 2), 6);
        assert_eq!(rotation_space_dimension(2, 0), 1);
        for n in 2..7 {
            for k in 0..n {
                assert_eq!(BigInt::from(rotation_space_dimension(n, k)), narayana(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn rotation_relations() {
        assert!(rotation_relation_check(3, &[], &[2, 3]).unwrap());
        assert!(rotation_relation_check(4, &[2], &[2, 3, 4]).unwrap());
        assert_eq!(omega_ij(4, &[3, 2], &[2, 4]).unwrap(), omega_ij(4, &[2, 3], &[2, 4]).unwrap().neg());
        assert_eq!(omega_ij(4, &[2, 3], &[4, 2]).unwrap(), omega_ij(4, &[2, 3], &[2, 4]).unwrap().neg());
        assert!(matches!(rotation_relation_check(3, &[], &[2, 2]), Err(Error::BadIndexSet(_))));
        assert!(matches!(rotation_relation_check(3, &[], &[2, 5]), Err(Error::BadIndexSet(_))));
        // a single S_{I,J} is not a relation
        let q = RotationQuotient::new(3, 1);
        assert!(!q.is_trivial(&omega_ij(3, &[2], &[3]).unwrap()));
    }

    fn arb_monomial(n: usize, max_deg: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
        proptest::collection::vec((2..=n, 2..=n), 0..=max_deg)
    }

    fn eval(n: usize, m: &[(usize, usize)]) -> AlgebraElement {
        m.iter().fold(AlgebraElement::one(n), |acc, &(i, j)| mul(&acc, &x(n, i, j)))
    }

    proptest! {
        #[test]
        fn commutative_associative(a in arb_monomial(6, 2), b in arb_monomial(6, 2), c in arb_monomial(6, 1)) {
            let (a, b, c) = (eval(6, &a), eval(6, &b), eval(6, &c));
            prop_assert_eq!(mul(&a, &b), mul(&b, &a));
            prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        }

        #[test]
        fn ideal_generators_vanish(i in 2usize..=8, j in 2usize..=8, k in 2usize..=8, l in 2usize..=8) {
            let n = 8;
            let s = mul(&x(n, i, j), &x(n, k, l))
                .checked_add(&mul(&x(n, i, k), &x(n, j, l))).unwrap()
                .checked_add(&mul(&x(n, i, l), &x(n, j, k))).unwrap();
            prop_assert!(s.is_zero());
            prop_assert!(mul(&mul(&x(n, i, j), &x(n, i, k)), &x(n, i, l)).is_zero());
        }
    }
}
