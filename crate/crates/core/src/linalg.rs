//! Exact sparse row echelon form over the rationals.
//!
//! Vectors are sparse maps from an ordered key to a rational. Each stored
//! pivot row remembers how it was combined from the inserted vectors, so
//! membership tests also return coordinates.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Rational, x: &SparseVec<K>) {
    for (k, v) in x {
        let e = y.entry(k.clone()).or_insert_with(Rational::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

#[derive(Debug, Clone)]
struct Pivot<K> {
    row: SparseVec<K>,
    combo: SparseVec<usize>,
}

/// Incrementally built echelon basis of the span of inserted vectors.
#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone> {
    pivots: BTreeMap<K, Pivot<K>>,
    inserted: usize,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { pivots: BTreeMap::new(), inserted: 0 }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors(vs: impl IntoIterator<Item = SparseVec<K>>) -> Self {
        let mut e = Self::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Number of vectors inserted so far.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the pivots; returns the residual and the
    /// combination `c` of inserted vectors with `v = residual + Σ c_i v_i`.
    pub fn reduce(&self, v: SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut v = v;
        let mut combo = SparseVec::new();
        let mut residual = SparseVec::new();
        while let Some((lead, c)) = v.pop_first() {
            match self.pivots.get(&lead) {
                Some(p) => {
                    // pivot rows are monic, so subtract c * row (its lead was already popped)
                    v.insert(lead, c.clone());
                    axpy(&mut v, &-&c, &p.row);
                    axpy(&mut combo, &c, &p.combo);
                }
                None => {
                    residual.insert(lead, c);
                }
            }
        }
        (residual, combo)
    }

    /// Inserts `v`; returns whether it increased the rank.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (residual, combo) = self.reduce(v);
        let Some((lead, c)) = residual.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        // residual = v - Σ combo_i v_i
        let mut own = SparseVec::new();
        own.insert(idx, Rational::one());
        axpy(&mut own, &-Rational::one(), &combo);
        let inv = c.recip();
        let row = residual.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        let combo = own.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.pivots.insert(lead, Pivot { row, combo });
        true
    }

    pub fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coefficients `c` with `v = Σ c_i v_i`, or `None` if `v` is outside
    /// the span. Unique when the inserted vectors are independent.
    pub fn solve(&self, v: SparseVec<K>) -> Option<SparseVec<usize>> {
        let (residual, combo) = self.reduce(v);
        residual.is_empty().then_some(combo)
    }
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(vs: impl IntoIterator<Item = SparseVec<K>>) -> usize {
    Echelon::from_vectors(vs).rank()
}

/// Inverse of a square dense rational matrix, or `None` if singular.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col].recip();
        for j in 0..n {
            a[col][j] *= &d;
            inv[col][j] *= &d;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn is_identity(a: &[Vec<Rational>]) -> bool {
    a.iter().enumerate().all(|(i, r)| {
        r.len() == a.len() && r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}
