//! Named bases of flag area measures, their duals inside the flag algebra,
//! base changes between them, and globalization to ordinary area measures.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::combinat::{binom_q, factorial_q, sign_q};
use crate::error::{Error, Result};
use crate::invariant::{monomial, u_element, FlagContext, InvariantSlot, InvariantSystem};
use crate::linalg::{invert, is_identity, mat_mul, transpose};
use crate::report::Report;
use crate::rotation::AlgebraElement;
use crate::scalar::{Rational, Scalar};

/// A basis measure of the flag (or, for `GlobS`, the ordinary) area
/// measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MeasureLabel {
    Phi(usize, usize),
    S(usize, usize),
    PhiEx,
    GlobS(usize),
    /// `(ω_{n-p}/ω_n) C(q,k)^{-1} Φ_{k,0}`.
    HugWeil(usize),
}

impl MeasureLabel {
    pub fn degree(&self, ctx: &FlagContext) -> usize {
        match *self {
            MeasureLabel::Phi(k, _) | MeasureLabel::S(k, _) | MeasureLabel::GlobS(k) | MeasureLabel::HugWeil(k) => k,
            MeasureLabel::PhiEx => ctx.p,
        }
    }

    pub fn validate(&self, ctx: &FlagContext) -> Result<()> {
        let bad = |why: String| Err(Error::IndexOutOfRange(format!("{self} at {ctx}: {why}")));
        let k = self.degree(ctx);
        if k >= ctx.n {
            return bad(format!("degree must be below {}", ctx.n));
        }
        match *self {
            MeasureLabel::Phi(k, a) if !ctx.phi_range(k).contains(&a) => {
                bad(format!("need {} <= a <= {}", ctx.phi_range(k).start(), ctx.phi_range(k).end()))
            }
            MeasureLabel::S(k, i) if i > ctx.m(k) => bad(format!("need i <= m_k = {}", ctx.m(k))),
            MeasureLabel::PhiEx if !ctx.exceptional => Err(Error::ExceptionalUnavailable { n: ctx.n, p: ctx.p }),
            MeasureLabel::HugWeil(k) if k > ctx.q => bad(format!("need k <= q = {}", ctx.q)),
            _ => Ok(()),
        }
    }

    /// Ordering key for deterministic tables: degree first, then kind and
    /// indices.
    pub fn sort_key(&self, ctx: &FlagContext) -> (usize, MeasureLabel) {
        (self.degree(ctx), *self)
    }
}

impl fmt::Display for MeasureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureLabel::Phi(k, a) => write!(f, "Phi[{k},{a}]"),
            MeasureLabel::S(k, i) => write!(f, "S[{k},{i}]"),
            MeasureLabel::PhiEx => write!(f, "PhiEx"),
            MeasureLabel::GlobS(k) => write!(f, "GlobS[{k}]"),
            MeasureLabel::HugWeil(k) => write!(f, "HugWeil[{k}]"),
        }
    }
}

impl FromStr for MeasureLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "PhiEx" {
            return Ok(MeasureLabel::PhiEx);
        }
        let bad = || Error::Parse(format!("bad measure label `{s}`"));
        let (name, rest) = s.split_once('[').ok_or_else(bad)?;
        let args: Vec<usize> = rest
            .strip_suffix(']')
            .ok_or_else(bad)?
            .split(',')
            .map(|a| a.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (name, args.as_slice()) {
            ("Phi", &[k, a]) => Ok(MeasureLabel::Phi(k, a)),
            ("S", &[k, i]) => Ok(MeasureLabel::S(k, i)),
            ("GlobS", &[k]) => Ok(MeasureLabel::GlobS(k)),
            ("HugWeil", &[k]) => Ok(MeasureLabel::HugWeil(k)),
            _ => Err(bad()),
        }
    }
}

/// Which family of basis measures a table is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Phi,
    S,
}

/// The basis labels of degree `k` (including `Φ_ex` in the exceptional
/// middle degree).
pub fn basis_labels(ctx: &FlagContext, basis: Basis, k: usize) -> Vec<MeasureLabel> {
    let mut out: Vec<MeasureLabel> = match basis {
        Basis::Phi => ctx.phi_range(k).map(|a| MeasureLabel::Phi(k, a)).collect(),
        Basis::S => (0..=ctx.m(k)).map(|i| MeasureLabel::S(k, i)).collect(),
    };
    if ctx.exceptional_degree() == Some(k) {
        out.push(MeasureLabel::PhiEx);
    }
    out
}

/// A homogeneous linear combination of basis measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureExpr {
    pub ctx: FlagContext,
    pub degree: usize,
    terms: BTreeMap<MeasureLabel, Scalar>,
}

impl MeasureExpr {
    pub fn zero(ctx: &FlagContext, degree: usize) -> Self {
        MeasureExpr { ctx: *ctx, degree, terms: BTreeMap::new() }
    }

    pub fn single(ctx: &FlagContext, label: MeasureLabel, coeff: Scalar) -> Result<Self> {
        let mut e = MeasureExpr::zero(ctx, label.degree(ctx));
        e.add_term(label, coeff)?;
        Ok(e)
    }

    pub fn add_term(&mut self, label: MeasureLabel, coeff: Scalar) -> Result<()> {
        if label.degree(&self.ctx) != self.degree {
            return Err(Error::DegreeMismatch(format!("{label} in a degree-{} expression", self.degree)));
        }
        if !matches!(label, MeasureLabel::GlobS(_)) {
            label.validate(&self.ctx)?;
        }
        let cur = self.terms.remove(&label).unwrap_or_else(Scalar::zero);
        let new = cur.checked_add(&coeff)?;
        if !new.is_zero() {
            self.terms.insert(label, new);
        }
        Ok(())
    }

    pub fn add(&self, other: &MeasureExpr) -> Result<MeasureExpr> {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(*l, c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> MeasureExpr {
        let terms = if s.is_zero() {
            BTreeMap::new()
        } else {
            self.terms.iter().map(|(l, c)| (*l, c * s)).collect()
        };
        MeasureExpr { terms, ..self.clone() }
    }

    pub fn coefficient(&self, label: &MeasureLabel) -> Scalar {
        self.terms.get(label).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MeasureLabel, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for MeasureExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(l, c)| format!("({c}) {l}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn q(r: Rational) -> Scalar {
    Scalar::rational(r)
}

fn binom(n: usize, k: usize) -> Rational {
    binom_q(n as i64, k as i64)
}

fn check(ctx: &FlagContext, label: MeasureLabel) -> Result<()> {
    label.validate(ctx)
}

/// `c_{n,k,p,i} = C(n-1,k)^{-1} C(m_k,i)^{-1} C(|k-q|+m_k,i)^{-1} C(n-1,i)`.
pub fn c_constant(ctx: &FlagContext, k: usize, i: usize) -> Result<Rational> {
    check(ctx, MeasureLabel::S(k, i))?;
    let m = ctx.m(k);
    let d = binom(ctx.n - 1, k) * binom(m, i) * binom(k.abs_diff(ctx.q) + m, i);
    Ok(binom(ctx.n - 1, i) / d)
}

/// Coefficient of `Φ_{k,a}` in `S_k^{(p),i}`.
fn s_phi_entry(ctx: &FlagContext, k: usize, i: usize, a: usize) -> Result<Rational> {
    let (m, mp) = (ctx.m(k), ctx.m_prime(k));
    if a + m < mp || a + i > mp {
        return Ok(Rational::zero());
    }
    Ok(c_constant(ctx, k, i)? * binom(mp - a, i))
}

/// Coefficient of `S_j^{(p),s}` in `Φ_{j,a}` as displayed for the inverse
/// relation.
fn phi_s_entry(ctx: &FlagContext, j: usize, a: usize, s: usize) -> Result<Rational> {
    let mp = ctx.m_prime(j);
    if s + a < mp {
        return Ok(Rational::zero());
    }
    Ok(sign_q((a + mp + s) as i64) / c_constant(ctx, j, s)? * binom(s, mp - a))
}

/// `S_k^{(p),i}` in the `Φ` basis.
pub fn s_in_phi(ctx: &FlagContext, k: usize, i: usize) -> Result<MeasureExpr> {
    check(ctx, MeasureLabel::S(k, i))?;
    let mut e = MeasureExpr::zero(ctx, k);
    for a in ctx.phi_range(k) {
        e.add_term(MeasureLabel::Phi(k, a), q(s_phi_entry(ctx, k, i, a)?))?;
    }
    Ok(e)
}

/// `Φ_{j,a}` in the `S` basis.
pub fn phi_in_s(ctx: &FlagContext, j: usize, a: usize) -> Result<MeasureExpr> {
    check(ctx, MeasureLabel::Phi(j, a))?;
    let mut e = MeasureExpr::zero(ctx, j);
    for s in 0..=ctx.m(j) {
        e.add_term(MeasureLabel::S(j, s), q(phi_s_entry(ctx, j, a, s)?))?;
    }
    Ok(e)
}

pub type Matrix = Vec<Vec<Rational>>;

/// `M[i][a]`: coefficient of `Φ_{k,a}` in `S_k^i` (rows `i`, columns over
/// the valid `a` in increasing order).
pub fn s_in_phi_matrix(ctx: &FlagContext, k: usize) -> Result<Matrix> {
    (0..=ctx.m(k)).map(|i| ctx.phi_range(k).map(|a| s_phi_entry(ctx, k, i, a)).collect()).collect()
}

/// `N[a][s]`: coefficient of `S_k^s` in `Φ_{k,a}`.
pub fn phi_in_s_matrix(ctx: &FlagContext, k: usize) -> Result<Matrix> {
    ctx.phi_range(k).map(|a| (0..=ctx.m(k)).map(|s| phi_s_entry(ctx, k, a, s)).collect()).collect()
}

/// Dual base change as displayed: `D[a][i]` is the coefficient of
/// `S_k^{i,*}` in `Φ_{k,a}^*`.
pub fn dual_phi_in_s_matrix(ctx: &FlagContext, k: usize) -> Result<Matrix> {
    let mp = ctx.m_prime(k);
    ctx.phi_range(k)
        .map(|a| (0..=ctx.m(k)).map(|i| Ok(c_constant(ctx, k, i)? * binom(mp - a, i))).collect())
        .collect()
}

/// Dual base change as displayed: `D[i][a]` is the coefficient of
/// `Φ_{k,a}^*` in `S_k^{i,*}`.
pub fn dual_s_in_phi_matrix(ctx: &FlagContext, k: usize) -> Result<Matrix> {
    let mp = ctx.m_prime(k);
    (0..=ctx.m(k))
        .map(|i| {
            ctx.phi_range(k)
                .map(|a| {
                    if a + i < mp {
                        return Ok(Rational::zero());
                    }
                    Ok(sign_q((a + mp + i) as i64) / c_constant(ctx, k, i)? * binom(i, mp - a))
                })
                .collect()
        })
        .collect()
}

/// Inverse of the `S`-in-`Φ` matrix, for cross-checking.
pub fn s_in_phi_inverse(ctx: &FlagContext, k: usize) -> Result<Matrix> {
    invert(&s_in_phi_matrix(ctx, k)?).ok_or_else(|| Error::SolveFailure(format!("singular base change at k={k}")))
}

/// Mutual inverses of the base changes, and the displayed dual base
/// changes as their inverse-transposes, in every degree.
pub fn verify_basis_changes(ctx: &FlagContext) -> Result<Report> {
    let mut report = Report::default();
    let mut inv_fail = None;
    let mut dual_fail = None;
    for k in 0..ctx.n {
        let (s, p) = (s_in_phi_matrix(ctx, k)?, phi_in_s_matrix(ctx, k)?);
        if inv_fail.is_none() && !(is_identity(&mat_mul(&s, &p)) && is_identity(&mat_mul(&p, &s))) {
            inv_fail = Some(format!("degree {k}"));
        }
        let ok = dual_phi_in_s_matrix(ctx, k)? == transpose(&s) && dual_s_in_phi_matrix(ctx, k)? == transpose(&p);
        if dual_fail.is_none() && !ok {
            dual_fail = Some(format!("degree {k}"));
        }
    }
    report.push("S/Phi base changes are inverse", inv_fail);
    report.push("dual base changes are inverse-transpose", dual_fail);
    Ok(report)
}

fn omega_n_inv(ctx: &FlagContext) -> Scalar {
    Scalar::omega(ctx.n, -1)
}

/// `Φ_{k,a}^* = (1/ω_n) C(q,k-a)^{-1} C(p,a)^{-1} x^a y^{k-a} / (a!(k-a)!)`.
pub fn phi_dual(ctx: &FlagContext, k: usize, a: usize) -> Result<AlgebraElement> {
    check(ctx, MeasureLabel::Phi(k, a))?;
    let c = (binom(ctx.q, k - a) * binom(ctx.p, a) * factorial_q(a as u64) * factorial_q((k - a) as u64)).recip();
    Ok(monomial(ctx, a, k - a)?.scale(&omega_n_inv(ctx).scale(&c)))
}

/// `S_k^{(p),i,*}` from its displayed expansion over `x^a y^{k-a}`.
pub fn s_dual(ctx: &FlagContext, k: usize, i: usize) -> Result<AlgebraElement> {
    let c = c_constant(ctx, k, i)?;
    let mp = ctx.m_prime(k);
    let pre = sign_q((i + mp) as i64) / c;
    let mut acc = AlgebraElement::zero(ctx.n);
    for a in mp - i.min(mp)..=mp {
        if !ctx.phi_range(k).contains(&a) {
            continue;
        }
        let coef = &pre * sign_q(a as i64) * binom(i, mp - a)
            / (factorial_q(a as u64) * factorial_q((k - a) as u64) * binom(ctx.q, k - a) * binom(ctx.p, a));
        acc = acc.checked_add(&monomial(ctx, a, k - a)?.scale(&omega_n_inv(ctx).scale(&coef)))?;
    }
    Ok(acc)
}

/// `Φ_ex^* = (-1)^p u / (ω_n p!)`.
pub fn phi_ex_dual(ctx: &FlagContext) -> Result<AlgebraElement> {
    let u = u_element(ctx)?;
    let c = sign_q(ctx.p as i64) / factorial_q(ctx.p as u64);
    Ok(u.scale(&omega_n_inv(ctx).scale(&c)))
}

/// Dual of the global `S_k` pulled back to the flag algebra:
/// `(x+y)^k / (k! ω_n)`.
pub fn glob_s_dual(ctx: &FlagContext, k: usize) -> Result<AlgebraElement> {
    let x = monomial(ctx, 1, 0)?;
    let y = monomial(ctx, 0, 1)?;
    let t = x.checked_add(&y)?;
    Ok(t.pow(k).scale(&omega_n_inv(ctx).scale(&factorial_q(k as u64).recip())))
}

/// The dual element of a basis label.
pub fn dual(ctx: &FlagContext, label: MeasureLabel) -> Result<AlgebraElement> {
    match label {
        MeasureLabel::Phi(k, a) => phi_dual(ctx, k, a),
        MeasureLabel::S(k, i) => s_dual(ctx, k, i),
        MeasureLabel::PhiEx => phi_ex_dual(ctx),
        MeasureLabel::GlobS(k) => glob_s_dual(ctx, k),
        MeasureLabel::HugWeil(_) => Err(Error::IndexOutOfRange(format!("{label} is not a basis label"))),
    }
}

/// `S_k^{(p)} = (ω_{n-p}/ω_n) C(q,k)^{-1} Φ_{k,0}`.
pub fn hug_weil_in_phi(ctx: &FlagContext, k: usize) -> Result<MeasureExpr> {
    check(ctx, MeasureLabel::HugWeil(k))?;
    let c = Scalar::omega(ctx.n - ctx.p, 1) * omega_n_inv(ctx);
    MeasureExpr::single(ctx, MeasureLabel::Phi(k, 0), c.scale(&binom(ctx.q, k).recip()))
}

/// Expresses any label through `Φ` labels (and `Φ_ex`).
pub fn expand_in_phi(ctx: &FlagContext, label: MeasureLabel) -> Result<MeasureExpr> {
    match label {
        MeasureLabel::Phi(..) | MeasureLabel::PhiEx => MeasureExpr::single(ctx, label, Scalar::one()),
        MeasureLabel::S(k, i) => s_in_phi(ctx, k, i),
        MeasureLabel::HugWeil(k) => hug_weil_in_phi(ctx, k),
        MeasureLabel::GlobS(_) => Err(Error::IndexOutOfRange(format!("{label} is not a flag measure"))),
    }
}

/// The pairing values of the algebra monomials against `Φ_{k,a}` and `Φ_ex`:
/// `<x^a y^{k-a}, Φ_{k,a}> = ω_n C(p,a) C(q,k-a) a! (k-a)!` and
/// `<u, Φ_ex> = (-1)^p p! ω_n`, all others zero.
pub fn bridge_constant(ctx: &FlagContext, slot: InvariantSlot, label: MeasureLabel) -> Scalar {
    let w = Scalar::omega(ctx.n, 1);
    match (slot, label) {
        (InvariantSlot::Mono(a, b), MeasureLabel::Phi(k, a2)) if a == a2 && a + b == k => w.scale(
            &(binom(ctx.p, a) * binom(ctx.q, b) * factorial_q(a as u64) * factorial_q(b as u64)),
        ),
        (InvariantSlot::U, MeasureLabel::PhiEx) => {
            w.scale(&(sign_q(ctx.p as i64) * factorial_q(ctx.p as u64)))
        }
        _ => Scalar::zero(),
    }
}

/// `<dual, label>` for a dual element of the flag algebra and a flag
/// measure, computed from its monomial coordinates and the bridge
/// constants.
pub fn evaluate(ctx: &FlagContext, label: MeasureLabel, dual: &AlgebraElement) -> Result<Scalar> {
    let expr = expand_in_phi(ctx, label)?;
    let k = label.degree(ctx);
    if dual.is_zero() {
        return Ok(Scalar::zero());
    }
    let coords = InvariantSystem::new(ctx, k)?.coordinates(dual)?;
    pair_coordinates(ctx, &coords, &expr)
}

/// Pairing from precomputed coordinates.
pub fn pair_coordinates(
    ctx: &FlagContext,
    coords: &BTreeMap<InvariantSlot, Scalar>,
    expr: &MeasureExpr,
) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (slot, c) in coords {
        if c.is_zero() {
            continue;
        }
        for (label, e) in expr.terms() {
            let b = bridge_constant(ctx, *slot, *label);
            if !b.is_zero() {
                acc = acc.checked_add(&(&(c * e) * &b))?;
            }
        }
    }
    Ok(acc)
}

/// Pushes a flag measure expression forward to the global area measures.
pub fn globalize(expr: &MeasureExpr) -> Result<MeasureExpr> {
    let ctx = expr.ctx;
    let mut out = MeasureExpr::zero(&ctx, expr.degree);
    for (label, c) in expr.terms() {
        let (k, f) = match *label {
            MeasureLabel::S(k, _) | MeasureLabel::GlobS(k) => (k, Scalar::one()),
            MeasureLabel::Phi(k, a) => (k, q(binom(ctx.q, k - a) * binom(ctx.p, a))),
            MeasureLabel::PhiEx => continue,
            MeasureLabel::HugWeil(k) => (k, Scalar::omega(ctx.n - ctx.p, 1) * omega_n_inv(&ctx)),
        };
        out.add_term(MeasureLabel::GlobS(k), c * &f)?;
    }
    Ok(out)
}

/// `glob` of a single label.
pub fn globalize_label(ctx: &FlagContext, label: MeasureLabel) -> Result<MeasureExpr> {
    if !matches!(label, MeasureLabel::GlobS(_)) {
        label.validate(ctx)?;
    }
    let mut e = MeasureExpr::zero(ctx, label.degree(ctx));
    e.terms.insert(label, Scalar::one());
    globalize(&e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::flag_generators;
    use crate::linalg::{is_identity, mat_mul, transpose};
    use crate::scalar::{int, rat};

    fn ctx(n: usize, p: usize) -> FlagContext {
        FlagContext::new(n, p).unwrap()
    }

    fn w(n: usize, e: i32) -> Scalar {
        Scalar::omega(n, e)
    }

    #[test]
    fn label_text() {
        for s in ["Phi[3,1]", "S[2,0]", "PhiEx", "GlobS[4]", "HugWeil[2]"] {
            assert_eq!(s.parse::<MeasureLabel>().unwrap().to_string(), s);
        }
        assert!("Phi[1]".parse::<MeasureLabel>().is_err());
        assert!("T[1,2]".parse::<MeasureLabel>().is_err());
        let c = ctx(4, 1);
        assert!(MeasureLabel::Phi(1, 2).validate(&c).is_err());
        assert!(MeasureLabel::S(1, 2).validate(&c).is_err());
        assert!(MeasureLabel::PhiEx.validate(&c).is_err());
        assert!(MeasureLabel::PhiEx.validate(&ctx(5, 2)).is_ok());
    }

    #[test]
    fn c_constants() {
        for n in 2..8 {
            for p in 0..n {
                let c = ctx(n, p);
                if n >= 2 {
                    assert_eq!(c_constant(&c, 1, 0).unwrap(), rat(1, n as i64 - 1));
                }
                for k in 0..n {
                    assert_eq!(c_constant(&c, k, 0).unwrap(), binom(n - 1, k).recip());
                }
                assert_eq!(c_constant(&c, n - 1, 0).unwrap(), int(1));
            }
        }
        assert!(c_constant(&ctx(4, 1), 1, 2).is_err());
    }

    #[test]
    fn s_in_phi_examples() {
        let c = ctx(5, 2);
        let e = s_in_phi(&c, 1, 0).unwrap();
        assert_eq!(e.coefficient(&MeasureLabel::Phi(1, 0)), q(rat(1, 4)));
        assert_eq!(e.coefficient(&MeasureLabel::Phi(1, 1)), q(rat(1, 4)));
        for p in 0..5 {
            let c = ctx(5, p);
            let top = s_in_phi(&c, 4, 0).unwrap();
            assert_eq!(top, MeasureExpr::single(&c, MeasureLabel::Phi(4, p), Scalar::one()).unwrap());
        }
        assert_eq!(s_in_phi(&c, 0, 0).unwrap(), MeasureExpr::single(&c, MeasureLabel::Phi(0, 0), Scalar::one()).unwrap());
    }

    #[test]
    fn phi_in_s_examples() {
        let c = ctx(5, 2);
        let e = phi_in_s(&c, 1, 1).unwrap();
        assert_eq!(e.coefficient(&MeasureLabel::S(1, 0)), q(int(4)));
        assert_eq!(e.coefficient(&MeasureLabel::S(1, 1)), q(-c_constant(&c, 1, 1).unwrap().recip()));
        assert_eq!(phi_in_s(&c, 0, 0).unwrap(), MeasureExpr::single(&c, MeasureLabel::S(0, 0), Scalar::one()).unwrap());
    }

    #[test]
    fn base_changes_are_inverse_and_dual_is_transpose() {
        for n in 1..8 {
            for p in 0..n {
                let c = ctx(n, p);
                for k in 0..n {
                    let m = s_in_phi_matrix(&c, k).unwrap();
                    let inv = phi_in_s_matrix(&c, k).unwrap();
                    assert!(is_identity(&mat_mul(&m, &inv)), "n={n} p={p} k={k}");
                    assert!(is_identity(&mat_mul(&inv, &m)));
                    assert_eq!(dual_phi_in_s_matrix(&c, k).unwrap(), transpose(&m));
                    assert_eq!(dual_s_in_phi_matrix(&c, k).unwrap(), transpose(&s_in_phi_inverse(&c, k).unwrap()));
                }
            }
        }
    }

    #[test]
    fn dual_examples() {
        let c = ctx(5, 1);
        let g = flag_generators(&c).unwrap();
        assert_eq!(phi_dual(&c, 1, 0).unwrap(), g.y.scale(&w(5, -1).scale(&rat(1, 3))));
        assert_eq!(phi_dual(&c, 0, 0).unwrap(), AlgebraElement::one(5).scale(&w(5, -1)));
        let top = monomial(&c, 1, 3).unwrap().scale(&w(5, -1).scale(&rat(1, 6)));
        assert_eq!(phi_dual(&c, 4, 1).unwrap(), top);

        let c3 = ctx(3, 1);
        let x23 = crate::rotation::generator(3, 2, 3).unwrap();
        assert_eq!(phi_ex_dual(&c3).unwrap(), x23.scale(&w(3, -1).scale(&int(-1))));
        let c5 = ctx(5, 2);
        assert_eq!(phi_ex_dual(&c5).unwrap(), u_element(&c5).unwrap().scale(&w(5, -1).scale(&rat(1, 2))));
        assert!(phi_ex_dual(&c).is_err());
    }

    #[test]
    fn dual_pairings_are_kronecker() {
        for n in 1..7 {
            for p in 0..n {
                let c = ctx(n, p);
                for k in 0..n {
                    for basis in [Basis::Phi, Basis::S] {
                        let labels = basis_labels(&c, basis, k);
                        for l1 in &labels {
                            let d = dual(&c, *l1).unwrap();
                            for l2 in &labels {
                                let v = evaluate(&c, *l2, &d).unwrap();
                                let want = if l1 == l2 { Scalar::one() } else { Scalar::zero() };
                                assert_eq!(v, want, "n={n} p={p} <{l1}*, {l2}>");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn area_dual_of_degree_one() {
        for n in 3..7 {
            for p in 1..n - 1 {
                let c = ctx(n, p);
                let g = flag_generators(&c).unwrap();
                let xy = g.x.checked_add(&g.y).unwrap();
                // x + y is ω_n times the pulled-back global dual, and pairs to ω_n with every S_1^{(p),i}
                assert_eq!(glob_s_dual(&c, 1).unwrap().scale(&w(n, 1)), xy);
                for i in 0..=c.m(1) {
                    assert_eq!(evaluate(&c, MeasureLabel::S(1, i), &xy).unwrap(), w(n, 1));
                }
                // the flag dual S_1^{(p),0,*} itself is (n-1) Φ_{1,1}^*
                let s10 = s_dual(&c, 1, 0).unwrap();
                assert_eq!(s10, g.x.scale(&w(n, -1).scale(&rat(n as i64 - 1, p as i64))));
                assert_ne!(s10.scale(&w(n, 1)), xy);
            }
        }
    }

    #[test]
    fn globalization() {
        let c = ctx(5, 2);
        for k in 0..5 {
            for i in 0..=c.m(k) {
                let g = globalize_label(&c, MeasureLabel::S(k, i)).unwrap();
                assert_eq!(g, MeasureExpr::single(&c, MeasureLabel::GlobS(k), Scalar::one()).unwrap());
                assert_eq!(globalize(&s_in_phi(&c, k, i).unwrap()).unwrap(), g);
            }
            for a in c.phi_range(k) {
                let g = globalize_label(&c, MeasureLabel::Phi(k, a)).unwrap();
                assert_eq!(g.coefficient(&MeasureLabel::GlobS(k)), q(binom(2, k - a) * binom(2, a)));
            }
        }
        assert!(globalize_label(&c, MeasureLabel::PhiEx).unwrap().is_zero());
        // the pulled-back global duals have no u-component, so glob Φ_ex = 0 is forced
        for k in 0..5 {
            let d = glob_s_dual(&c, k).unwrap();
            if k == 2 {
                assert!(evaluate(&c, MeasureLabel::PhiEx, &d).unwrap().is_zero());
            }
            for i in 0..=c.m(k) {
                assert_eq!(evaluate(&c, MeasureLabel::S(k, i), &d).unwrap(), Scalar::one());
            }
        }
    }

    #[test]
    fn hug_weil_normalisation() {
        let c = ctx(6, 2);
        let e = hug_weil_in_phi(&c, 1).unwrap();
        let coef = e.coefficient(&MeasureLabel::Phi(1, 0));
        assert_eq!(coef, (w(4, 1) * w(6, -1)).scale(&rat(1, 3)));
        assert_eq!(
            globalize_label(&c, MeasureLabel::HugWeil(1)).unwrap().coefficient(&MeasureLabel::GlobS(1)),
            w(4, 1) * w(6, -1)
        );
        assert!(hug_weil_in_phi(&c, 4).is_err());
    }

    #[test]
    fn base_change_suite() {
        for n in 1..7 {
            for p in 0..n {
                let r = verify_basis_changes(&ctx(n, p)).unwrap();
                assert!(r.passed(), "n={n} p={p}\n{r}");
            }
        }
    }
}
