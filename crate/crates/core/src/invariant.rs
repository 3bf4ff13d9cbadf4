//! Invariant subalgebras of the rotation algebra: the area-measure algebra
//! generated by `t = Σ x_ii`, and the flag algebra generated by the block
//! traces `x`, `y` (and the block determinant `u` in the exceptional case).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::exterior::Blade;
use crate::rotation::{check_n, determinant, elementary_symmetric, AlgebraElement};
use crate::scalar::{Rational, Scalar};

/// The flag manifold of pairs `(v, E)` with `dim E = p + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlagContext {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub exceptional: bool,
}

impl FlagContext {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        check_n(n)?;
        if p >= n {
            return Err(Error::IndexOutOfRange(format!("p={p} must be below n={n}")));
        }
        let q = n - p - 1;
        Ok(FlagContext { n, p, q, exceptional: n >= 3 && n % 2 == 1 && p == q })
    }

    /// `m_k = min{p, q, k, n-k-1}`.
    pub fn m(&self, k: usize) -> usize {
        self.p.min(self.q).min(k).min(self.n - 1 - k)
    }

    /// `m'_k = min{p, k}`.
    pub fn m_prime(&self, k: usize) -> usize {
        self.p.min(k)
    }

    /// Valid `a` for `Φ_{k,a}`: `max{0, k-q} ..= min{k, p}`.
    pub fn phi_range(&self, k: usize) -> std::ops::RangeInclusive<usize> {
        k.saturating_sub(self.q)..=k.min(self.p)
    }

    pub fn block1(&self) -> Vec<usize> {
        (2..=self.p + 1).collect()
    }

    pub fn block2(&self) -> Vec<usize> {
        (self.p + 2..=self.n).collect()
    }

    /// Degree of the exceptional element, when present.
    pub fn exceptional_degree(&self) -> Option<usize> {
        self.exceptional.then_some(self.p)
    }
}

impl fmt::Display for FlagContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, p={}", self.n, self.p)
    }
}

/// `E_1(x_22, ..., x_nn)`; its powers are `t^i = i! E_i`.
pub fn t_element(n: usize) -> Result<AlgebraElement> {
    check_n(n)?;
    elementary_symmetric(n, &(2..=n).collect::<Vec<_>>(), 1)
}

/// The generators `x`, `y` and, in the exceptional case, `u`.
#[derive(Debug, Clone)]
pub struct FlagGenerators {
    pub x: AlgebraElement,
    pub y: AlgebraElement,
    pub u: Option<AlgebraElement>,
}

pub fn flag_generators(ctx: &FlagContext) -> Result<FlagGenerators> {
    let x = elementary_symmetric(ctx.n, &ctx.block1(), 1)?;
    let y = elementary_symmetric(ctx.n, &ctx.block2(), 1)?;
    let u = if ctx.exceptional { Some(determinant(ctx.n, &ctx.block1(), &ctx.block2())?) } else { None };
    Ok(FlagGenerators { x, y, u })
}

/// The `u` generator alone.
pub fn u_element(ctx: &FlagContext) -> Result<AlgebraElement> {
    if !ctx.exceptional {
        return Err(Error::ExceptionalUnavailable { n: ctx.n, p: ctx.p });
    }
    determinant(ctx.n, &ctx.block1(), &ctx.block2())
}

/// `x^i y^j`.
pub fn monomial(ctx: &FlagContext, i: usize, j: usize) -> Result<AlgebraElement> {
    let g = flag_generators(ctx)?;
    g.x.pow(i).multiply(&g.y.pow(j))
}

/// A basis slot of the flag algebra in one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvariantSlot {
    /// `x^i y^j`.
    Mono(usize, usize),
    U,
}

impl fmt::Display for InvariantSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantSlot::Mono(i, j) => write!(f, "x^{i}y^{j}"),
            InvariantSlot::U => write!(f, "u"),
        }
    }
}

/// The monomial basis of one degree of the flag algebra, reduced for
/// coordinate extraction.
#[derive(Debug, Clone)]
pub struct InvariantSystem {
    pub ctx: FlagContext,
    pub k: usize,
    pub slots: Vec<InvariantSlot>,
    echelon: Echelon<Blade>,
}

impl InvariantSystem {
    pub fn new(ctx: &FlagContext, k: usize) -> Result<Self> {
        if k >= ctx.n {
            return Err(Error::IndexOutOfRange(format!("degree {k} exceeds n-1={}", ctx.n - 1)));
        }
        let g = flag_generators(ctx)?;
        let mut slots = Vec::new();
        let mut echelon = Echelon::new();
        for i in ctx.phi_range(k) {
            slots.push(InvariantSlot::Mono(i, k - i));
            echelon.insert(g.x.pow(i).multiply(&g.y.pow(k - i))?.to_sparse());
        }
        if let (Some(u), Some(d)) = (&g.u, ctx.exceptional_degree()) {
            if d == k {
                slots.push(InvariantSlot::U);
                echelon.insert(u.to_sparse());
            }
        }
        if echelon.rank() != slots.len() {
            return Err(Error::SolveFailure(format!("flag monomials dependent at {ctx}, k={k}")));
        }
        Ok(InvariantSystem { ctx: *ctx, k, slots, echelon })
    }

    pub fn coordinates(&self, a: &AlgebraElement) -> Result<BTreeMap<InvariantSlot, Scalar>> {
        if a.n() != self.ctx.n {
            return Err(Error::DimensionMismatch(a.n(), self.ctx.n));
        }
        if !a.is_zero() && a.degree() != Some(self.k) {
            return Err(Error::NotHomogeneous(self.k));
        }
        let combo = self.echelon.solve(a.to_sparse()).ok_or(Error::NotInSubalgebra)?;
        Ok(self
            .slots
            .iter()
            .enumerate()
            .map(|(idx, s)| {
                let c = combo.get(&idx).cloned().unwrap_or_else(Rational::zero);
                (*s, Scalar::new(c, a.units().clone()))
            })
            .collect())
    }
}

/// Coefficients of `a` over `{x^i y^{k-i}}` (plus `u` in the exceptional
/// middle degree).
pub fn invariant_coordinates(
    ctx: &FlagContext,
    a: &AlgebraElement,
    k: usize,
) -> Result<BTreeMap<InvariantSlot, Scalar>> {
    InvariantSystem::new(ctx, k)?.coordinates(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::factorial_q;
    use crate::rotation::{generator, multiply};
    use crate::scalar::{int, rat};

    fn ctx(n: usize, p: usize) -> FlagContext {
        FlagContext::new(n, p).unwrap()
    }

    #[test]
    fn context() {
        let c = ctx(5, 2);
        assert_eq!((c.q, c.exceptional), (2, true));
        assert!(!ctx(4, 1).exceptional);
        assert!(!ctx(5, 1).exceptional);
        assert_eq!(c.m(0), 0);
        assert_eq!(c.m(2), 2);
        assert_eq!(c.m(4), 0);
        assert_eq!(ctx(6, 1).m_prime(3), 1);
        assert!(FlagContext::new(3, 3).is_err());
        assert_eq!(ctx(6, 1).phi_range(5), 1..=1);
    }

    #[test]
    fn area_algebra() {
        let t = t_element(3).unwrap();
        let e2 = elementary_symmetric(3, &[2, 3], 2).unwrap();
        assert_eq!(t.pow(2), e2.scale_q(&int(2)));
        for n in 2..8 {
            let t = t_element(n).unwrap();
            assert!(t.pow(n).is_zero());
            let top = elementary_symmetric(n, &(2..=n).collect::<Vec<_>>(), n - 1).unwrap();
            assert_eq!(t.pow(n - 1), top.scale_q(&factorial_q(n as u64 - 1)));
            assert!(!t.pow(n - 1).is_zero());
        }
    }

    #[test]
    fn flag_relations() {
        let c = ctx(5, 2);
        let g = flag_generators(&c).unwrap();
        assert!(g.x.pow(3).is_zero() && g.y.pow(3).is_zero());
        let u = g.u.unwrap();
        assert!(multiply(&u, &g.x).unwrap().is_zero());
        assert!(multiply(&u, &g.y).unwrap().is_zero());

        let c = ctx(3, 1);
        let g = flag_generators(&c).unwrap();
        let u = g.u.unwrap();
        assert_eq!(u, generator(3, 2, 3).unwrap());
        let xy = multiply(&g.x, &g.y).unwrap();
        assert_eq!(u.pow(2), xy.scale_q(&rat(-1, 2)));
        assert_eq!(u_element(&ctx(4, 1)).unwrap_err(), Error::ExceptionalUnavailable { n: 4, p: 1 });
    }

    #[test]
    fn coordinates_in_flag_basis() {
        let c = ctx(5, 2);
        let xy = monomial(&c, 1, 1).unwrap();
        let co = invariant_coordinates(&c, &xy, 2).unwrap();
        assert_eq!(co[&InvariantSlot::Mono(1, 1)].coeff(), &int(1));
        assert!(co[&InvariantSlot::U].is_zero());
        assert_eq!(co.len(), 4);

        let t = t_element(5).unwrap();
        let co = invariant_coordinates(&c, &t, 1).unwrap();
        assert_eq!(co[&InvariantSlot::Mono(1, 0)].coeff(), &int(1));
        assert_eq!(co[&InvariantSlot::Mono(0, 1)].coeff(), &int(1));

        // x_23 mixes the blocks and is not invariant
        let err = invariant_coordinates(&c, &generator(5, 2, 4).unwrap(), 1).unwrap_err();
        assert_eq!(err, Error::NotInSubalgebra);
    }

    #[test]
    fn proposition_relations_up_to_seven() {
        for n in 1..8 {
            for p in 0..n {
                let c = ctx(n, p);
                let g = flag_generators(&c).unwrap();
                assert!(g.x.pow(p + 1).is_zero());
                assert!(g.y.pow(c.q + 1).is_zero());
                assert!(!monomial(&c, p, c.q).unwrap().is_zero());
                for k in 0..n {
                    InvariantSystem::new(&c, k).unwrap();
                }
                if let Some(u) = g.u {
                    let sign = if p % 2 == 0 { int(1) } else { int(-1) };
                    let coef = sign * rat(p as i64 + 1, 1 << (2 * p));
                    assert_eq!(u.pow(2), monomial(&c, p, p).unwrap().scale_q(&coef), "n={n}");
                }
            }
        }
    }
}
