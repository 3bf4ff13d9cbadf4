//! Local additive kinematic formulas: the coproduct of a basis measure is
//! read off from products of dual elements,
//! `coeff(L ⊗ R in A(X)) = <X, L^* · R^*>`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinat::{binom_q, sign_q};
use crate::error::{Error, Result};
use crate::invariant::{FlagContext, InvariantSystem};
use crate::measures::{
    basis_labels, c_constant, dual, expand_in_phi, globalize_label, pair_coordinates, phi_dual, phi_ex_dual,
    Basis, MeasureLabel,
};
use crate::rotation::{multiply, AlgebraElement};
use crate::scalar::{Rational, Scalar};

pub use crate::report::{CheckResult, Report};

/// One term `coeff · left ⊗ right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableTerm {
    pub left: MeasureLabel,
    pub right: MeasureLabel,
    pub coeff: Scalar,
}

/// The coproduct of one basis measure, nonzero terms only, sorted by
/// `(left degree, left, right degree, right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KinematicTable {
    pub ctx: FlagContext,
    pub input: MeasureLabel,
    pub terms: Vec<TableTerm>,
}

impl KinematicTable {
    pub fn from_map(ctx: &FlagContext, input: MeasureLabel, map: BTreeMap<(MeasureLabel, MeasureLabel), Scalar>) -> Self {
        let mut terms: Vec<TableTerm> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((left, right), coeff)| TableTerm { left, right, coeff })
            .collect();
        terms.sort_by_key(|t| (t.left.sort_key(ctx), t.right.sort_key(ctx)));
        KinematicTable { ctx: *ctx, input, terms }
    }

    pub fn coefficient(&self, left: MeasureLabel, right: MeasureLabel) -> Scalar {
        self.terms
            .iter()
            .find(|t| t.left == left && t.right == right)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn as_map(&self) -> BTreeMap<(MeasureLabel, MeasureLabel), Scalar> {
        self.terms.iter().map(|t| ((t.left, t.right), t.coeff.clone())).collect()
    }
}

impl fmt::Display for KinematicTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "A({}) at {}:", self.input, self.ctx)?;
        for t in &self.terms {
            writeln!(f, "  {} (x) {}  :  {}", t.left, t.right, t.coeff)?;
        }
        Ok(())
    }
}

/// Precomputed dual elements and coordinate systems for one flag context.
#[derive(Debug, Clone)]
pub struct Engine {
    pub ctx: FlagContext,
    duals: HashMap<MeasureLabel, AlgebraElement>,
    systems: Vec<InvariantSystem>,
}

impl Engine {
    pub fn new(ctx: &FlagContext) -> Result<Self> {
        let mut duals = HashMap::new();
        let mut systems = Vec::new();
        for k in 0..ctx.n {
            for basis in [Basis::Phi, Basis::S] {
                for l in basis_labels(ctx, basis, k) {
                    duals.insert(l, dual(ctx, l)?);
                }
            }
            systems.push(InvariantSystem::new(ctx, k)?);
        }
        Ok(Engine { ctx: *ctx, duals, systems })
    }

    pub fn dual(&self, label: MeasureLabel) -> Result<&AlgebraElement> {
        self.duals.get(&label).ok_or_else(|| Error::IndexOutOfRange(format!("{label} at {}", self.ctx)))
    }

    /// `<X, a>` for a flag measure `X` and a dual element `a`.
    pub fn evaluate(&self, label: MeasureLabel, a: &AlgebraElement) -> Result<Scalar> {
        let expr = expand_in_phi(&self.ctx, label)?;
        if a.is_zero() {
            return Ok(Scalar::zero());
        }
        let coords = self.systems[label.degree(&self.ctx)].coordinates(a)?;
        pair_coordinates(&self.ctx, &coords, &expr)
    }

    /// `A(input)` in the basis matching the input label (`Φ` for `Φ_{k,a}`
    /// and `Φ_ex`, `S` for `S_k^{(p),i}`; `HugWeil` inputs are delegated to
    /// [`Engine::hug_weil_coproduct`]).
    pub fn coproduct(&self, input: MeasureLabel) -> Result<KinematicTable> {
        let basis = match input {
            MeasureLabel::S(..) => Basis::S,
            MeasureLabel::Phi(..) | MeasureLabel::PhiEx => Basis::Phi,
            MeasureLabel::HugWeil(k) => return self.hug_weil_coproduct(k),
            MeasureLabel::GlobS(_) => {
                return Err(Error::IndexOutOfRange(format!("{input} is a global measure; see global_coproduct")))
            }
        };
        self.coproduct_in(input, basis)
    }

    /// `A(input)` with both tensor factors expanded in `basis`.
    pub fn coproduct_in(&self, input: MeasureLabel, basis: Basis) -> Result<KinematicTable> {
        input.validate(&self.ctx)?;
        let ctx = &self.ctx;
        let k = input.degree(ctx);
        let expr = expand_in_phi(ctx, input)?;
        let mut map = BTreeMap::new();
        for j in 0..=k {
            for l in basis_labels(ctx, basis, j) {
                for r in basis_labels(ctx, basis, k - j) {
                    let prod = multiply(self.dual(l)?, self.dual(r)?)?;
                    if prod.is_zero() {
                        continue;
                    }
                    let coords = self.systems[k].coordinates(&prod)?;
                    map.insert((l, r), pair_coordinates(ctx, &coords, &expr)?);
                }
            }
        }
        Ok(KinematicTable::from_map(ctx, input, map))
    }

    /// Table over the Hug–Weil measures `S_j^{(p)}`, derived from `A(Φ_{k,0})`.
    pub fn hug_weil_coproduct(&self, k: usize) -> Result<KinematicTable> {
        let ctx = &self.ctx;
        MeasureLabel::HugWeil(k).validate(ctx)?;
        // S_j^{(p)} = λ_j Φ_{j,0}
        let lambda = |j: usize| {
            (Scalar::omega(ctx.n - ctx.p, 1) * Scalar::omega(ctx.n, -1)).scale(&binom_q(ctx.q as i64, j as i64).recip())
        };
        let base = self.coproduct(MeasureLabel::Phi(k, 0))?;
        let mut map = BTreeMap::new();
        for t in base.terms {
            let (MeasureLabel::Phi(j, 0), MeasureLabel::Phi(l, 0)) = (t.left, t.right) else {
                return Err(Error::SolveFailure(format!("unexpected term {} (x) {}", t.left, t.right)));
            };
            let c = (&lambda(k) * &t.coeff).checked_div(&(&lambda(j) * &lambda(l)))?;
            map.insert((MeasureLabel::HugWeil(j), MeasureLabel::HugWeil(l)), c);
        }
        Ok(KinematicTable::from_map(ctx, MeasureLabel::HugWeil(k), map))
    }

    /// All tables of one basis, degree by degree.
    pub fn all_tables(&self, basis: Basis) -> Result<Vec<KinematicTable>> {
        (0..self.ctx.n)
            .flat_map(|k| basis_labels(&self.ctx, basis, k))
            .map(|l| self.coproduct(l))
            .collect()
    }
}

/// `A(input)` computed from scratch.
pub fn coproduct(ctx: &FlagContext, input: MeasureLabel) -> Result<KinematicTable> {
    Engine::new(ctx)?.coproduct(input)
}

/// `A(S_k) = (1/ω_n) Σ_j C(k,j) S_j ⊗ S_{k-j}` on the global area measures.
pub fn global_coproduct(ctx: &FlagContext, k: usize) -> Result<KinematicTable> {
    if k >= ctx.n {
        return Err(Error::IndexOutOfRange(format!("degree {k} at {ctx}")));
    }
    let w = Scalar::omega(ctx.n, -1);
    let map = (0..=k)
        .map(|j| {
            ((MeasureLabel::GlobS(j), MeasureLabel::GlobS(k - j)), w.scale(&binom_q(k as i64, j as i64)))
        })
        .collect();
    Ok(KinematicTable::from_map(ctx, MeasureLabel::GlobS(k), map))
}

fn b(n: i64, k: i64) -> Rational {
    binom_q(n, k)
}

/// `c^{k,a}_{j,b} = C(q,j-b)^{-1} C(p,b)^{-1} C(q-k+j+a-b, j-b) C(p-a+b, b)`,
/// the coefficient (times `ω_n`) of `Φ_{j,b} ⊗ Φ_{k-j,a-b}` in `A(Φ_{k,a})`.
pub fn closed_form_phi(ctx: &FlagContext, k: usize, a: usize, j: usize, bb: usize) -> Result<Rational> {
    if j > k || bb > a {
        return Err(Error::IndexOutOfRange(format!("need j <= k and b <= a, got k={k} a={a} j={j} b={bb}")));
    }
    for l in [MeasureLabel::Phi(k, a), MeasureLabel::Phi(j, bb), MeasureLabel::Phi(k - j, a - bb)] {
        l.validate(ctx)?;
    }
    let (p, q) = (ctx.p as i64, ctx.q as i64);
    let (k, a, j, bb) = (k as i64, a as i64, j as i64, bb as i64);
    Ok(b(q - k + j + a - bb, j - bb) * b(p - a + bb, bb) / (b(q, j - bb) * b(p, bb)))
}

fn closed_form_s_with(
    ctx: &FlagContext,
    (k, i, j, bb, c): (usize, usize, usize, usize, usize),
    corrected: bool,
) -> Result<Rational> {
    if j > k {
        return Err(Error::IndexOutOfRange(format!("need j <= k, got j={j} k={k}")));
    }
    let l = k - j;
    let pre_c = c_constant(ctx, k, i)? / (c_constant(ctx, j, bb)? * c_constant(ctx, l, c)?);
    let (mk, mpk, mpj, mpl) = (ctx.m(k) as i64, ctx.m_prime(k) as i64, ctx.m_prime(j) as i64, ctx.m_prime(l) as i64);
    let (mj, ml) = (ctx.m(j) as i64, ctx.m(l) as i64);
    let (p, q) = (ctx.p as i64, ctx.q as i64);
    let (ki, ii, ji, bi, ci) = (k as i64, i as i64, j as i64, bb as i64, c as i64);
    let pre = sign_q(bi + ci + mpj + mpl) * pre_c;
    let mut tot = Rational::zero();
    for t in (mpk - mk)..=(mpk - ii) {
        let (lo, hi) = if corrected {
            ((mpj - bi).max(t - mpl), mpj.min(t - mpl + ci))
        } else {
            ((mpj - bi).max(t - ml), mj.min(t - mpl + ci))
        };
        let mut inner = Rational::zero();
        for s in lo..=hi {
            let den = b(q, ji - s) * b(p, s);
            if den.is_zero() {
                continue;
            }
            inner += b(bi, mpj - s) * b(ci, mpl - t + s) * b(q - ki + t - s + ji, ji - s) * b(p - t + s, s) / den;
        }
        tot += sign_q(t) * b(mpk - t, ii) * inner;
    }
    Ok(pre * tot)
}

/// The double-sum coefficient `C^{k,i}_{j,b,c}` (times `ω_n`) of
/// `S_j^b ⊗ S_{k-j}^c` in `A(S_k^i)`, with the inner summation bounds
/// `max{m'_j-b, t-m'_{k-j}} ..= min{m'_j, t-m'_{k-j}+c}`.
pub fn closed_form_s(ctx: &FlagContext, k: usize, i: usize, j: usize, bb: usize, c: usize) -> Result<Rational> {
    closed_form_s_with(ctx, (k, i, j, bb, c), true)
}

/// The same double sum with the inner bounds exactly as usually printed,
/// `max{m'_j-b, t-m_{k-j}} ..= min{m_j, t-m'_{k-j}+c}`. Kept for
/// comparison; it disagrees with the dual-product expansion in some cases.
pub fn closed_form_s_as_printed(ctx: &FlagContext, k: usize, i: usize, j: usize, bb: usize, c: usize) -> Result<Rational> {
    closed_form_s_with(ctx, (k, i, j, bb, c), false)
}

/// `(-1)^p (p+1) / (2^{2p} ω_n)`, the `Φ_ex ⊗ Φ_ex` coefficient of
/// `A(Φ_{n-1,p})` in the exceptional case.
pub fn exceptional_correction(ctx: &FlagContext) -> Result<Scalar> {
    if !ctx.exceptional {
        return Err(Error::ExceptionalUnavailable { n: ctx.n, p: ctx.p });
    }
    let p = ctx.p as i64;
    let c = sign_q(p) * Rational::new(BigInt::from(p + 1), BigInt::from(2).pow(2 * ctx.p as u32));
    Ok(Scalar::omega(ctx.n, -1).scale(&c))
}

/// The same correction in the form `(-1)^{(n-1)/2} (n+1) / (2^n ω_n)`.
pub fn exceptional_correction_s_form(ctx: &FlagContext) -> Result<Scalar> {
    if !ctx.exceptional {
        return Err(Error::ExceptionalUnavailable { n: ctx.n, p: ctx.p });
    }
    let n = ctx.n as i64;
    let c = sign_q((n - 1) / 2) * Rational::new(BigInt::from(n + 1), BigInt::from(2).pow(ctx.n as u32));
    Ok(Scalar::omega(ctx.n, -1).scale(&c))
}

/// `A(Φ_{k,a})` assembled from [`closed_form_phi`] (the `O(n)` formula).
pub fn closed_form_phi_table(ctx: &FlagContext, k: usize, a: usize) -> Result<KinematicTable> {
    MeasureLabel::Phi(k, a).validate(ctx)?;
    let w = Scalar::omega(ctx.n, -1);
    let mut map = BTreeMap::new();
    for j in 0..=k {
        for bb in ctx.phi_range(j) {
            if bb > a || !ctx.phi_range(k - j).contains(&(a - bb)) {
                continue;
            }
            let c = closed_form_phi(ctx, k, a, j, bb)?;
            map.insert((MeasureLabel::Phi(j, bb), MeasureLabel::Phi(k - j, a - bb)), w.scale(&c));
        }
    }
    Ok(KinematicTable::from_map(ctx, MeasureLabel::Phi(k, a), map))
}

/// `A(S_k^i)` assembled from [`closed_form_s`].
pub fn closed_form_s_table(ctx: &FlagContext, k: usize, i: usize) -> Result<KinematicTable> {
    MeasureLabel::S(k, i).validate(ctx)?;
    let w = Scalar::omega(ctx.n, -1);
    let mut map = BTreeMap::new();
    for j in 0..=k {
        for bb in 0..=ctx.m(j) {
            for c in 0..=ctx.m(k - j) {
                let v = closed_form_s(ctx, k, i, j, bb, c)?;
                map.insert((MeasureLabel::S(j, bb), MeasureLabel::S(k - j, c)), w.scale(&v));
            }
        }
    }
    Ok(KinematicTable::from_map(ctx, MeasureLabel::S(k, i), map))
}

/// The exceptional tables: `A(Φ_{n-1,p})` as the `O(n)` table plus the
/// `Φ_ex ⊗ Φ_ex` correction, and `A(Φ_ex) = (1/ω_n)(Φ_ex ⊗ Φ_{0,0} + Φ_{0,0} ⊗ Φ_ex)`.
pub fn exceptional_coproduct(ctx: &FlagContext) -> Result<(KinematicTable, KinematicTable)> {
    let corr = exceptional_correction(ctx)?;
    let top = MeasureLabel::Phi(ctx.n - 1, ctx.p);
    let mut map = closed_form_phi_table(ctx, ctx.n - 1, ctx.p)?.as_map();
    map.insert((MeasureLabel::PhiEx, MeasureLabel::PhiEx), corr);
    let w = Scalar::omega(ctx.n, -1);
    let ex = BTreeMap::from([
        ((MeasureLabel::PhiEx, MeasureLabel::Phi(0, 0)), w.clone()),
        ((MeasureLabel::Phi(0, 0), MeasureLabel::PhiEx), w),
    ]);
    Ok((KinematicTable::from_map(ctx, top, map), KinematicTable::from_map(ctx, MeasureLabel::PhiEx, ex)))
}

/// The scalar `c` with `(Φ_ex^*)^2 = c · Φ_{n-1,p}^*`, read off through the
/// invariant coordinates of both sides.
pub fn exceptional_square_coefficient(ctx: &FlagContext) -> Result<Scalar> {
    let e = phi_ex_dual(ctx)?;
    let sq = multiply(&e, &e)?;
    let top = phi_dual(ctx, ctx.n - 1, ctx.p)?;
    let sys = InvariantSystem::new(ctx, ctx.n - 1)?;
    let (a, b) = (sys.coordinates(&sq)?, sys.coordinates(&top)?);
    let slot = crate::invariant::InvariantSlot::Mono(ctx.p, ctx.q);
    a[&slot].checked_div(&b[&slot])
}

type Triple = (MeasureLabel, MeasureLabel, MeasureLabel);

fn apply_left(engine: &Engine, t: &KinematicTable, basis: Basis) -> Result<BTreeMap<Triple, Scalar>> {
    let mut out: BTreeMap<Triple, Scalar> = BTreeMap::new();
    for term in &t.terms {
        for inner in engine.coproduct_in(term.left, basis)?.terms {
            let e = out.entry((inner.left, inner.right, term.right)).or_insert_with(Scalar::zero);
            *e = e.checked_add(&(&term.coeff * &inner.coeff))?;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

fn apply_right(engine: &Engine, t: &KinematicTable, basis: Basis) -> Result<BTreeMap<Triple, Scalar>> {
    let mut out: BTreeMap<Triple, Scalar> = BTreeMap::new();
    for term in &t.terms {
        for inner in engine.coproduct_in(term.right, basis)?.terms {
            let e = out.entry((term.left, inner.left, inner.right)).or_insert_with(Scalar::zero);
            *e = e.checked_add(&(&term.coeff * &inner.coeff))?;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Cocommutativity, coassociativity, counit and globalization, on every
/// basis label of both bases.
pub fn verify_structure(ctx: &FlagContext) -> Result<Report> {
    let engine = Engine::new(ctx)?;
    let mut tables = Vec::new();
    for basis in [Basis::Phi, Basis::S] {
        for k in 0..ctx.n {
            for l in basis_labels(ctx, basis, k) {
                tables.push((basis, engine.coproduct_in(l, basis)?));
            }
        }
    }
    let mut report = Report::default();

    let fail = tables.iter().find_map(|(_, t)| {
        t.terms
            .iter()
            .find(|x| t.coefficient(x.right, x.left) != x.coeff)
            .map(|x| format!("A({}) at {} (x) {}", t.input, x.left, x.right))
    });
    report.push("cocommutativity", fail);

    let mut fail = None;
    for (basis, t) in &tables {
        if apply_left(&engine, t, *basis)? != apply_right(&engine, t, *basis)? {
            fail = Some(format!("A({})", t.input));
            break;
        }
    }
    report.push("coassociativity", fail);

    // (ε ⊗ id) A = id with ε(Φ_{0,0}) = ω_n
    let w = Scalar::omega(ctx.n, 1);
    let unit = MeasureLabel::Phi(0, 0);
    let unit_s = MeasureLabel::S(0, 0);
    let fail = tables.iter().find_map(|(_, t)| {
        let left_deg0: Vec<&TableTerm> = t.terms.iter().filter(|x| x.left.degree(ctx) == 0).collect();
        let ok = left_deg0.len() == 1
            && (left_deg0[0].left == unit || left_deg0[0].left == unit_s)
            && left_deg0[0].right == t.input
            && &left_deg0[0].coeff * &w == Scalar::one();
        (!ok).then(|| format!("A({})", t.input))
    });
    report.push("counit", fail);

    let mut fail = None;
    'outer: for (_, t) in &tables {
        let mut lhs: BTreeMap<(MeasureLabel, MeasureLabel), Scalar> = BTreeMap::new();
        for x in &t.terms {
            let (gl, gr) = (globalize_label(ctx, x.left)?, globalize_label(ctx, x.right)?);
            for (a, ca) in gl.terms() {
                for (bl, cb) in gr.terms() {
                    let e = lhs.entry((*a, *bl)).or_insert_with(Scalar::zero);
                    *e = e.checked_add(&(&(ca * cb) * &x.coeff))?;
                }
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        let mut rhs: BTreeMap<(MeasureLabel, MeasureLabel), Scalar> = BTreeMap::new();
        for (g, c) in globalize_label(ctx, t.input)?.terms() {
            let MeasureLabel::GlobS(k) = g else { continue };
            for term in global_coproduct(ctx, *k)?.terms {
                let e = rhs.entry((term.left, term.right)).or_insert_with(Scalar::zero);
                *e = e.checked_add(&(c * &term.coeff))?;
            }
        }
        rhs.retain(|_, v| !v.is_zero());
        if lhs != rhs {
            fail = Some(format!("glob (x) glob of A({})", t.input));
            break 'outer;
        }
    }
    report.push("globalization", fail);
    Ok(report)
}

/// Agreement of the dual-product tables with the closed forms, including
/// the exceptional corrections.
pub fn verify_closed_forms(ctx: &FlagContext) -> Result<Report> {
    let engine = Engine::new(ctx)?;
    let mut report = Report::default();
    let top = (ctx.n - 1, ctx.p);

    let mut fail = None;
    'phi: for k in 0..ctx.n {
        for a in ctx.phi_range(k) {
            let mut want = closed_form_phi_table(ctx, k, a)?;
            if ctx.exceptional && (k, a) == top {
                want = exceptional_coproduct(ctx)?.0;
            }
            if engine.coproduct(MeasureLabel::Phi(k, a))? != want {
                fail = Some(format!("A(Phi[{k},{a}])"));
                break 'phi;
            }
        }
    }
    report.push("O(n) formulas for Phi", fail);

    let mut fail = None;
    'cs: for k in 0..ctx.n {
        for i in 0..=ctx.m(k) {
            let mut want = closed_form_s_table(ctx, k, i)?.as_map();
            if ctx.exceptional && k == ctx.n - 1 {
                want.insert((MeasureLabel::PhiEx, MeasureLabel::PhiEx), exceptional_correction_s_form(ctx)?);
            }
            let want = KinematicTable::from_map(ctx, MeasureLabel::S(k, i), want);
            if engine.coproduct(MeasureLabel::S(k, i))? != want {
                fail = Some(format!("A(S[{k},{i}])"));
                break 'cs;
            }
        }
    }
    report.push("double-sum formulas for S", fail);

    if ctx.exceptional {
        let (_, ex) = exceptional_coproduct(ctx)?;
        let got = engine.coproduct(MeasureLabel::PhiEx)?;
        report.push("A(PhiEx)", (got != ex).then(|| format!("got {got}")));
        let a = exceptional_correction(ctx)?;
        let sq = exceptional_square_coefficient(ctx)?;
        let s_form = exceptional_correction_s_form(ctx)?;
        let same = a == sq && a == s_form;
        report.push("exceptional correction", (!same).then(|| format!("{a} vs {sq} vs {s_form}")));
        let phi_top = engine.coproduct(MeasureLabel::Phi(top.0, top.1))?;
        let s_top = engine.coproduct(MeasureLabel::S(top.0, 0))?;
        let relabel: BTreeMap<_, _> = s_top
            .terms
            .iter()
            .map(|t| ((t.left, t.right), t.coeff.clone()))
            .collect();
        let consistent = phi_top.coefficient(MeasureLabel::PhiEx, MeasureLabel::PhiEx)
            == relabel.get(&(MeasureLabel::PhiEx, MeasureLabel::PhiEx)).cloned().unwrap_or_else(Scalar::zero);
        report.push("S[n-1,0] = Phi[n-1,p] correction", (!consistent).then(|| "corrections differ".to_string()));
    }
    Ok(report)
}
