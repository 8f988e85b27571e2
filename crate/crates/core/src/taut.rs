//! The degree-3 tautological elamination: collision parameters, companion
//! matching via perturbed dynamical builds, the leaf sets, censuses, and the
//! recurrence checks on the census table.
//!
//! Two companion routes are kept side by side. The naive oracle does one full
//! perturbed build per collision parameter; the production route pulls back
//! only the chain of leaves whose tip orbit passes through s0, which is the
//! same pullback with everything irrelevant skipped. The two are compared
//! leaf-for-leaf in the test suites.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::angle::{Angle, Height};
use crate::error::{Error, Result};
use crate::fixed::{full_build, pullback_into, FxCtx, FxPinch};
use crate::leaf::{simple_system_noncrossing, Leaf};
use crate::pinch::{census, pinch_circle_unchecked, Census};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TipKind {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

#[derive(Clone, Debug)]
pub struct CollisionParam {
    pub s: Angle,
    pub kind: TipKind,
}

/// Shared exact context for one (t, N): the common denominator, the
/// structural-angle gap, and epsilon = gap/4.
pub(crate) struct TautCtx {
    pub fx: FxCtx,
    pub t_num: i128,
    pub third: i128,
    pub eps: i128,
}

impl TautCtx {
    /// `strict` additionally requires all structural angles up to depth N to
    /// be pairwise distinct (genericity of t).
    pub fn new(t: &Angle, max_depth: u32, strict: bool) -> Result<Self> {
        let q_t = t.value().denom().clone();
        let d_big: BigInt = BigInt::from(4) * &q_t * BigInt::from(3).pow(2 * max_depth + 1);
        let d = d_big.to_i128().ok_or_else(|| {
            Error::InternalAssertion("common denominator exceeds i128".into())
        })?;
        let fx = FxCtx::new(d);
        let t_num = fx.to_num(t.value())?;
        let third = d / 3;

        // structural angles: preimage chains of t and t+1/3 to depth N, plus
        // the arc boundary t+2/3
        let mut angles: Vec<i128> = Vec::new();
        for base in [t_num, fx.add(t_num, third)] {
            let mut level = vec![base];
            angles.push(base);
            for _ in 1..=max_depth {
                let mut next = Vec::with_capacity(level.len() * 3);
                for &x in &level {
                    for p in fx.preimages3(x)? {
                        next.push(p);
                    }
                }
                angles.extend_from_slice(&next);
                level = next;
            }
        }
        angles.push(fx.add(t_num, 2 * third));
        angles.sort_unstable();

        if strict {
            for w in angles.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DegenerateParameter(format!(
                        "structural angles coincide at {} for t = {t}, depth {max_depth}",
                        fx.angle(w[0])
                    )));
                }
            }
        } else {
            angles.dedup();
        }
        if angles.len() < 2 {
            return Err(Error::DegenerateParameter("too few structural angles".into()));
        }
        let mut gap = fx.d;
        for w in angles.windows(2) {
            let g = w[1] - w[0];
            if g > 0 {
                gap = gap.min(g);
            }
        }
        gap = gap.min(fx.d - (angles.last().unwrap() - angles.first().unwrap()));
        if gap % 4 != 0 {
            return Err(Error::InternalAssertion("structural gap not divisible by 4".into()));
        }
        Ok(TautCtx { fx, t_num, third, eps: gap / 4 })
    }

    fn arc_bounds(&self) -> (i128, i128) {
        (self.fx.add(self.t_num, self.third), self.fx.add(self.t_num, 2 * self.third))
    }

    /// Collision parameters at depth n as fixed numerators.
    pub fn params_fx(&self, n: u32) -> Result<Vec<(i128, TipKind)>> {
        let (lo, hi) = self.arc_bounds();
        let p3n = 3i128.pow(n);
        let mut out = Vec::new();
        for (kind, base) in [(TipKind::A, self.t_num), (TipKind::B, self.fx.add(self.t_num, self.third))] {
            let mut count = 0usize;
            for j in 0..p3n {
                let num = base + j * self.fx.d;
                if num % p3n != 0 {
                    return Err(Error::InternalAssertion("inexact collision parameter".into()));
                }
                let s = self.fx.norm(num / p3n);
                if s == lo || s == hi {
                    return Err(Error::DegenerateParameter(format!(
                        "collision parameter {} at depth {n} hits the arc boundary",
                        self.fx.angle(s)
                    )));
                }
                if self.fx.in_open_arc(s, lo, hi) {
                    out.push((s, kind));
                    count += 1;
                }
            }
            if count != 3usize.pow(n - 1) {
                return Err(Error::DegenerateParameter(format!(
                    "{count} type-{kind:?} collision parameters at depth {n}, expected {}",
                    3usize.pow(n - 1)
                )));
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    fn critical_tips(&self, s0: i128, side: Side, eps: i128) -> (i128, i128, FxPinchInput) {
        let s_star = match side {
            Side::Below => self.fx.norm(s0 - eps),
            Side::Above => self.fx.norm(s0 + eps),
        };
        let c1 = (self.t_num, self.fx.add(self.t_num, self.third));
        let c2 = (s_star, self.fx.add(s_star, self.third));
        (s_star, c2.0, [c1, c2])
    }

    /// Production route: pull back only the leaf chain through s0.
    pub fn companion_chain(&self, s0: i128, n: u32, side: Side, eps: i128) -> Result<i128> {
        let (_, _, crit) = self.critical_tips(s0, side, eps);
        let pinch = FxPinch::new(&self.fx, &crit)?;
        let mut orbit = vec![s0];
        for k in 1..=n {
            orbit.push(self.fx.image3(orbit[k as usize - 1]));
        }
        let top = orbit[n as usize];
        if top != crit[0].0 && top != crit[0].1 {
            return Err(Error::DegenerateParameter(format!(
                "3^{n} * {} is not a tip of the top critical leaf",
                self.fx.angle(s0)
            )));
        }
        let mut cur = crit[0];
        for k in (0..n).rev() {
            let comp = pinch.locate(&self.fx, orbit[k as usize])?;
            cur = pullback_into(&self.fx, &pinch, cur, comp)?;
            if cur.0 != orbit[k as usize] && cur.1 != orbit[k as usize] {
                return Err(Error::InternalAssertion(
                    "chain leaf lost the parameter orbit".into(),
                ));
            }
        }
        Ok(if cur.0 == s0 { cur.1 } else { cur.0 })
    }

    /// Naive oracle: full perturbed build, then locate the unique depth-n
    /// preimage of C_1 owning s0.
    pub fn companion_naive(&self, s0: i128, n: u32, side: Side, eps: i128) -> Result<i128> {
        let (_, _, crit) = self.critical_tips(s0, side, eps);
        let leaves = full_build(&self.fx, &crit, n)?;
        let mut owner = None;
        for l in leaves.iter().filter(|l| l.depth == n && l.ancestor == 0) {
            if l.a == s0 || l.b == s0 {
                if owner.is_some() {
                    return Err(Error::InternalAssertion(format!(
                        "two depth-{n} leaves own the collision parameter {}",
                        self.fx.angle(s0)
                    )));
                }
                owner = Some(*l);
            }
        }
        let l = owner.ok_or_else(|| {
            Error::InternalAssertion(format!(
                "no depth-{n} leaf owns the collision parameter {}",
                self.fx.angle(s0)
            ))
        })?;
        Ok(if l.a == s0 { l.b } else { l.a })
    }
}

type FxPinchInput = [(i128, i128); 2];

/// All s in the open arc (t+1/3, t+2/3) with 3^n s = t (type A) or t+1/3
/// (type B); exactly 3^(n-1) of each for generic t.
pub fn collision_params(t: &Angle, n: u32) -> Result<Vec<CollisionParam>> {
    if n == 0 {
        return Err(Error::DegenerateParameter("collision depth must be >= 1".into()));
    }
    let ctx = TautCtx::new(t, n, true)?;
    Ok(ctx
        .params_fx(n)?
        .into_iter()
        .map(|(s, kind)| CollisionParam { s: ctx.fx.angle(s), kind })
        .collect())
}

fn check_param_local(t: &Angle, s0: &Angle, n: u32) -> Result<TipKind> {
    let third = Angle::from_frac(1, 3).unwrap();
    let lo = t.add(&third);
    let hi = t.add(&third).add(&third);
    if !s0.in_open_arc(&lo, &hi) {
        return Err(Error::DegenerateParameter(format!(
            "s0 = {s0} is not inside the arc ({lo}, {hi})"
        )));
    }
    let top = s0.image(3u32.pow(n));
    if &top == t {
        Ok(TipKind::A)
    } else if top == t.add(&third) {
        Ok(TipKind::B)
    } else {
        Err(Error::DegenerateParameter(format!(
            "3^{n} * {s0} = {top} equals neither t nor t+1/3"
        )))
    }
}

/// Normalize the raw other tip into the open parameter arc (t+1/3, t+2/3):
/// among raw and raw +/- 1/3 exactly one lies there, and it is the collision
/// parameter pairing with s0 (tripling is unaffected, the candidates differ
/// by thirds).
fn normalize_into_arc(ctx: &TautCtx, raw: i128) -> Result<i128> {
    let (lo, hi) = ctx.arc_bounds();
    let mut found = None;
    for cand in [raw, ctx.fx.add(raw, ctx.third), ctx.fx.add(raw, 2 * ctx.third)] {
        if ctx.fx.in_open_arc(cand, lo, hi) {
            if found.is_some() {
                return Err(Error::InternalAssertion(
                    "two companion representatives in the parameter arc".into(),
                ));
            }
            found = Some(cand);
        }
    }
    found.ok_or_else(|| {
        Error::DegenerateParameter("companion representative hits the arc boundary".into())
    })
}

/// The collision parameter s' pairing with s0: the other tip of the depth-n
/// preimage leaf of C_1 owning s0 in the perturbed build at s* = s0 -/+
/// epsilon, normalized into the parameter arc. The normalized value is
/// side-independent; the raw tips on the two sides differ by a third.
pub fn companion(t: &Angle, s0: &Angle, n: u32, side: Side) -> Result<Angle> {
    check_param_local(t, s0, n)?;
    let ctx = TautCtx::new(t, n, false)?;
    let s0n = ctx.fx.to_num(s0.value())?;
    let raw = ctx.companion_chain(s0n, n, side, ctx.eps)?;
    Ok(ctx.fx.angle(normalize_into_arc(&ctx, raw)?))
}

/// Same contract as [`companion`], via the full-build oracle.
pub fn companion_naive(t: &Angle, s0: &Angle, n: u32, side: Side) -> Result<Angle> {
    check_param_local(t, s0, n)?;
    let ctx = TautCtx::new(t, n, false)?;
    let s0n = ctx.fx.to_num(s0.value())?;
    let raw = ctx.companion_naive(s0n, n, side, ctx.eps)?;
    Ok(ctx.fx.angle(normalize_into_arc(&ctx, raw)?))
}

/// Reference-semantics oracle through the public BigRational generator.
pub fn companion_via_generate(t: &Angle, s0: &Angle, n: u32, side: Side) -> Result<Angle> {
    use crate::dynlam::{generate, CriticalSet};
    check_param_local(t, s0, n)?;
    let ctx = TautCtx::new(t, n, false)?;
    let eps = BigRational::new(BigInt::from(ctx.eps), BigInt::from(ctx.fx.d));
    let s_star = match side {
        Side::Below => Angle::new(s0.value() - &eps),
        Side::Above => Angle::new(s0.value() + &eps),
    };
    let third = Angle::from_frac(1, 3).unwrap();
    let h2 = Height::pow_of(3, -(n as i32)).mul_int(2);
    let c1 = Leaf::new(vec![t.clone(), t.add(&third)], Height::one())?;
    let c2 = Leaf::new(vec![s_star.clone(), s_star.add(&third)], h2)?;
    let cset = CriticalSet::new(vec![c1, c2], 3)?;
    let built = generate(&cset, n)?;
    let mut owner = None;
    for l in built.precritical.iter() {
        if l.depth == Some(n) && l.origin == Some(0) && l.has_tip(s0) {
            if owner.is_some() {
                return Err(Error::InternalAssertion("two leaves own s0".into()));
            }
            owner = Some(l);
        }
    }
    let l = owner
        .ok_or_else(|| Error::InternalAssertion(format!("no depth-{n} leaf owns {s0}")))?;
    let other: Vec<&Angle> = l.tips().iter().filter(|x| *x != s0).collect();
    if other.len() != 1 {
        return Err(Error::InternalAssertion("owner leaf is not simple".into()));
    }
    let raw = ctx.fx.to_num(other[0].value())?;
    Ok(ctx.fx.angle(normalize_into_arc(&ctx, raw)?))
}

/// One leaf of the tautological elamination: a depth-n chord with its
/// type-A/type-B tips and the collision parameters that produced it.
#[derive(Clone, Debug)]
pub struct TautLeaf {
    pub depth: u32,
    pub a_tip: Angle,
    pub b_tip: Angle,
    /// (type-A collision parameter, its companion from below)
    pub params: (Angle, Angle),
}

impl TautLeaf {
    pub fn height(&self) -> Height {
        Height::pow_of(3, 1 - self.depth as i32)
    }

    pub fn to_leaf(&self) -> Leaf {
        Leaf::new(vec![self.a_tip.clone(), self.b_tip.clone()], self.height())
            .expect("tautological chord")
            .with_meta(Some(self.depth), None)
    }
}

#[derive(Clone, Debug)]
pub struct TautLamination {
    pub t: Angle,
    pub max_depth: u32,
    /// Sorted by (depth, smaller tip).
    pub leaves: Vec<TautLeaf>,
}

impl TautLamination {
    pub fn leaves_up_to(&self, n: u32) -> Vec<Leaf> {
        self.leaves.iter().filter(|l| l.depth <= n).map(|l| l.to_leaf()).collect()
    }

    pub fn count_at_depth(&self, n: u32) -> usize {
        self.leaves.iter().filter(|l| l.depth == n).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchRoute {
    Chain,
    NaiveOracle,
}

pub fn taut_leaves(t: &Angle, max_depth: u32) -> Result<TautLamination> {
    taut_leaves_via(t, max_depth, MatchRoute::Chain)
}

/// Fixed-denominator form of one tautological leaf.
#[derive(Clone, Copy, Debug)]
pub(crate) struct FxTautLeaf {
    pub a_tip: i128,
    pub b_tip: i128,
    pub depth: u32,
    pub a_param: i128,
    pub b_param: i128,
}

/// Fixed-denominator build of the whole lamination: the hot path shared by
/// the public constructor and the monodromy sweep. Asserts per-depth counts,
/// the exactly-twice dedup rule, side-independence of every chord, and
/// non-crossing of the assembled system.
pub(crate) fn taut_leaves_fx(
    t: &Angle,
    max_depth: u32,
    route: MatchRoute,
) -> Result<(TautCtx, Vec<FxTautLeaf>)> {
    let ctx = TautCtx::new(t, max_depth, true)?;
    let mut leaves: Vec<FxTautLeaf> = Vec::new();
    for n in 1..=max_depth {
        let params = ctx.params_fx(n)?;
        let one = |&(s0, kind): &(i128, TipKind)| -> Result<(i128, TipKind, i128)> {
            let run = |side| match route {
                MatchRoute::Chain => ctx.companion_chain(s0, n, side, ctx.eps),
                MatchRoute::NaiveOracle => ctx.companion_naive(s0, n, side, ctx.eps),
            };
            let below = run(Side::Below)?;
            let above = run(Side::Above)?;
            if chord_of(&ctx.fx, s0, below) != chord_of(&ctx.fx, s0, above) {
                return Err(Error::InternalAssertion(format!(
                    "chord at {} depends on the approach side",
                    ctx.fx.angle(s0)
                )));
            }
            Ok((s0, kind, below))
        };
        // parallelism only pays off on large parameter batches
        let chords: Vec<(i128, TipKind, i128)> = if params.len() >= 486 {
            params.par_iter().map(one).collect::<Result<Vec<_>>>()?
        } else {
            params.iter().map(one).collect::<Result<Vec<_>>>()?
        };

        // each chord must appear exactly twice, once per type
        let mut groups: BTreeMap<(i128, i128), Vec<(i128, TipKind, i128)>> = BTreeMap::new();
        for &(s0, kind, comp) in &chords {
            let key = chord_of(&ctx.fx, s0, comp);
            groups.entry(key).or_default().push((s0, kind, comp));
        }
        if groups.len() != 3usize.pow(n - 1) {
            return Err(Error::InternalAssertion(format!(
                "{} distinct chords at depth {n}, expected {}",
                groups.len(),
                3usize.pow(n - 1)
            )));
        }
        for (key, members) in groups {
            if members.len() != 2 || members[0].1 == members[1].1 {
                return Err(Error::InternalAssertion(format!(
                    "chord ({}, {}) found {} times with kinds {:?}",
                    ctx.fx.angle(key.0),
                    ctx.fx.angle(key.1),
                    members.len(),
                    members.iter().map(|m| m.1).collect::<Vec<_>>()
                )));
            }
            let (a_param, _, a_comp) = *members.iter().find(|m| m.1 == TipKind::A).unwrap();
            let a_tip = ctx.fx.image3(a_param);
            let b_tip = if a_tip == key.0 { key.1 } else { key.0 };
            let b_param = normalize_into_arc(&ctx, a_comp)?;
            leaves.push(FxTautLeaf { a_tip, b_tip, depth: n, a_param, b_param });
        }
    }
    leaves.sort_by_key(|l| (l.depth, l.a_tip.min(l.b_tip)));
    let pairs: Vec<(i128, i128)> = leaves.iter().map(|l| (l.a_tip, l.b_tip)).collect();
    crate::fixed::fx_noncrossing(&ctx.fx, &pairs)?;
    if leaves.len() != (3usize.pow(max_depth) - 1) / 2 {
        return Err(Error::InternalAssertion(format!(
            "{} leaves up to depth {max_depth}, expected {}",
            leaves.len(),
            (3usize.pow(max_depth) - 1) / 2
        )));
    }
    Ok((ctx, leaves))
}

/// Build the tautological elamination over exact rational angles.
pub fn taut_leaves_via(t: &Angle, max_depth: u32, route: MatchRoute) -> Result<TautLamination> {
    let (ctx, fx_leaves) = taut_leaves_fx(t, max_depth, route)?;
    let leaves = fx_leaves
        .iter()
        .map(|l| TautLeaf {
            depth: l.depth,
            a_tip: ctx.fx.angle(l.a_tip),
            b_tip: ctx.fx.angle(l.b_tip),
            params: (ctx.fx.angle(l.a_param), ctx.fx.angle(l.b_param)),
        })
        .collect();
    let out = TautLamination { t: t.clone(), max_depth, leaves };
    let all: Vec<Leaf> = out.leaves_up_to(max_depth);
    simple_system_noncrossing(&all)?;
    Ok(out)
}

fn chord_of(fx: &FxCtx, s0: i128, companion: i128) -> (i128, i128) {
    let x = fx.image3(s0);
    let y = fx.image3(companion);
    (x.min(y), x.max(y))
}

/// Censuses of S^1 mod the depth <= n leaves, for n = 0..=N.
pub fn taut_census(t: &Angle, max_depth: u32) -> Result<Vec<Census>> {
    let tl = taut_leaves(t, max_depth)?;
    censuses_of(&tl)
}

pub fn censuses_of(tl: &TautLamination) -> Result<Vec<Census>> {
    let mut out = Vec::new();
    for n in 0..=tl.max_depth {
        let p = pinch_circle_unchecked(&tl.leaves_up_to(n))?;
        out.push(census(&p, n)?);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct RainsReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// The census-table identities: row sums, the first-column recurrence
/// N(2n,1) = 3 N(2n-1,1) and N(2n+1,1) = 3 N(2n,1) - 2 N(n,1), and the
/// unique largest component ell = 2^n per row.
pub fn rains_check(censuses: &[Census]) -> RainsReport {
    let mut failures = Vec::new();
    let col1: Vec<u64> = censuses.iter().map(|c| *c.entries.get(&1).unwrap_or(&0)).collect();
    for (i, c) in censuses.iter().enumerate() {
        if c.depth != i as u32 {
            failures.push(format!("row {i} carries depth {}", c.depth));
        }
        if !c.row_identities_hold() {
            failures.push(format!("row {i} violates the row identities"));
        }
        let top = 1u64 << c.depth;
        if c.entries.get(&top) != Some(&1) {
            failures.push(format!("row {i} has no unique component of length 2^{i}/3^{i}"));
        }
        if c.entries.keys().any(|&l| l > top) {
            failures.push(format!("row {i} has a component longer than 2^{i}/3^{i}"));
        }
    }
    for n in 1..censuses.len() {
        if n % 2 == 0 && col1[n] != 3 * col1[n - 1] {
            failures.push(format!("N({n},1) = {} != 3*N({},1) = {}", col1[n], n - 1, 3 * col1[n - 1]));
        }
        if n % 2 == 1 && n > 1 {
            let want = 3 * col1[n - 1] - 2 * col1[n / 2];
            if col1[n] != want {
                failures.push(format!("N({n},1) = {} != 3*N({},1) - 2*N({},1) = {want}", col1[n], n - 1, n / 2));
            }
        }
    }
    RainsReport { ok: failures.is_empty(), failures }
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub ok: bool,
    pub censuses: Vec<(Angle, Vec<Census>)>,
    pub mismatches: Vec<String>,
}

/// Censuses agree across parameters: the testable census-level consequence
/// of the rotation-flow equivariance of the tautological elamination.
pub fn t_invariance_check(ts: &[Angle], max_depth: u32) -> Result<InvarianceReport> {
    let mut censuses = Vec::new();
    for t in ts {
        censuses.push((t.clone(), taut_census(t, max_depth)?));
    }
    let mismatches = compare_census_tables(&censuses);
    Ok(InvarianceReport { ok: mismatches.is_empty(), censuses, mismatches })
}

pub fn compare_census_tables(tables: &[(Angle, Vec<Census>)]) -> Vec<String> {
    let mut mismatches = Vec::new();
    if let Some((t0, first)) = tables.first() {
        for (t, other) in &tables[1..] {
            for (a, b) in first.iter().zip(other.iter()) {
                if a.entries != b.entries {
                    mismatches.push(format!(
                        "row {} differs between t = {t0} and t = {t}",
                        a.depth
                    ));
                }
            }
        }
    }
    mismatches
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leaf::validate_elamination;

    fn ang(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn params_at_depth_one() {
        let ps = collision_params(&ang("1/12"), 1).unwrap();
        let a: Vec<_> = ps.iter().filter(|p| p.kind == TipKind::A).map(|p| p.s.to_string()).collect();
        let b: Vec<_> = ps.iter().filter(|p| p.kind == TipKind::B).map(|p| p.s.to_string()).collect();
        assert_eq!(a, vec!["25/36"]);
        assert_eq!(b, vec!["17/36"]);
    }

    #[test]
    fn params_at_depth_two() {
        let ps = collision_params(&ang("1/12"), 2).unwrap();
        let a: Vec<_> = ps.iter().filter(|p| p.kind == TipKind::A).map(|p| p.s.to_string()).collect();
        let b: Vec<_> = ps.iter().filter(|p| p.kind == TipKind::B).map(|p| p.s.to_string()).collect();
        assert_eq!(a, vec!["49/108", "61/108", "73/108"]);
        assert_eq!(b, vec!["53/108", "65/108", "77/108"]);
    }

    #[test]
    fn params_include_paper_example() {
        // t = 0 is degenerate at depth 2 (type-A solutions hit the arc
        // boundary), but 5/9 is a genuine type-A parameter: 9 * 5/9 = 0 mod 1
        assert!(collision_params(&ang("0/1"), 2).is_err());
        assert_eq!(check_param_local(&ang("0/1"), &ang("5/9"), 2).unwrap(), TipKind::A);
    }

    #[test]
    fn paper_companion() {
        let c = companion(&ang("0/1"), &ang("5/9"), 2, Side::Below).unwrap();
        assert_eq!(c.to_string(), "16/27");
        // the normalized companion is side-independent
        let above = companion(&ang("0/1"), &ang("5/9"), 2, Side::Above).unwrap();
        assert_eq!(above.to_string(), "16/27");
        assert_eq!(c.image(3).to_string(), "7/9");
    }

    #[test]
    fn derived_companions() {
        let c = companion(&ang("1/12"), &ang("61/108"), 2, Side::Below).unwrap();
        assert_eq!(c.to_string(), "65/108");
        let c = companion(&ang("1/12"), &ang("25/36"), 1, Side::Below).unwrap();
        assert_eq!(c.to_string(), "17/36");
    }

    #[test]
    fn naive_and_generate_oracles_agree_with_chain() {
        let t = ang("1/12");
        for n in 1..=3 {
            for p in collision_params(&t, n).unwrap() {
                for side in [Side::Below, Side::Above] {
                    let fast = companion(&t, &p.s, n, side).unwrap();
                    let naive = companion_naive(&t, &p.s, n, side).unwrap();
                    let gen = companion_via_generate(&t, &p.s, n, side).unwrap();
                    assert_eq!(fast, naive, "s0 = {} depth {n}", p.s);
                    assert_eq!(fast, gen, "s0 = {} depth {n}", p.s);
                }
            }
        }
    }

    #[test]
    fn depth_one_lamination() {
        let tl = taut_leaves(&ang("1/12"), 1).unwrap();
        assert_eq!(tl.leaves.len(), 1);
        let l = &tl.leaves[0];
        assert_eq!(l.a_tip.to_string(), "1/12");
        assert_eq!(l.b_tip.to_string(), "5/12");
        assert_eq!(l.height(), Height::one());
    }

    #[test]
    fn depth_two_lamination_matches_hand_computation() {
        let tl = taut_leaves(&ang("1/12"), 2).unwrap();
        let mut got: Vec<(Angle, Angle)> = tl
            .leaves
            .iter()
            .filter(|l| l.depth == 2)
            .map(|l| {
                let (a, b) = (l.a_tip.clone(), l.b_tip.clone());
                (a.clone().min(b.clone()), a.max(b))
            })
            .collect();
        got.sort();
        let mut want: Vec<(Angle, Angle)> = vec![
            (ang("5/36"), ang("13/36")),
            (ang("25/36"), ang("29/36")),
            (ang("1/36"), ang("17/36")),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn taut_leaves_degenerate_at_zero() {
        assert!(matches!(
            taut_leaves(&ang("0/1"), 2),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn validator_passes_on_generated_set() {
        let tl = taut_leaves(&ang("1/12"), 4).unwrap();
        assert!(validate_elamination(&tl.leaves_up_to(4)).is_empty());
        for n in 1..=4 {
            assert_eq!(tl.count_at_depth(n), 3usize.pow(n - 1));
        }
    }

    #[test]
    fn census_small_rows() {
        let cs = taut_census(&ang("1/12"), 3).unwrap();
        assert_eq!(cs[0].entries, BTreeMap::from([(1, 1)]));
        assert_eq!(cs[1].entries, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(cs[2].entries, BTreeMap::from([(1, 3), (2, 1), (4, 1)]));
        assert_eq!(cs[3].entries, BTreeMap::from([(1, 7), (2, 6), (8, 1)]));
        let r = rains_check(&cs);
        assert!(r.ok, "{:?}", r.failures);
    }

    #[test]
    fn chain_equals_naive_at_depth_four() {
        let t = ang("1/12");
        let a = taut_leaves_via(&t, 4, MatchRoute::Chain).unwrap();
        let b = taut_leaves_via(&t, 4, MatchRoute::NaiveOracle).unwrap();
        let pairs = |tl: &TautLamination| {
            tl.leaves
                .iter()
                .map(|l| (l.depth, l.a_tip.clone(), l.b_tip.clone()))
                .collect::<Vec<_>>()
        };
        assert_eq!(pairs(&a), pairs(&b));
    }

    #[test]
    fn epsilon_independence() {
        let t = ang("1/12");
        let ctx = TautCtx::new(&t, 3, true).unwrap();
        for n in 1..=3 {
            for (s0, _) in ctx.params_fx(n).unwrap() {
                for side in [Side::Below, Side::Above] {
                    let e1 = ctx.companion_chain(s0, n, side, ctx.eps).unwrap();
                    let e3 = ctx.companion_chain(s0, n, side, ctx.eps / 3).unwrap();
                    assert_eq!(e1, e3);
                }
            }
        }
    }

    #[test]
    fn invariance_of_censuses_across_t() {
        let ts = vec![ang("1/12"), ang("1/7")];
        let rep = t_invariance_check(&ts, 3).unwrap();
        assert!(rep.ok, "{:?}", rep.mismatches);
    }

    #[test]
    fn corrupted_table_is_reported() {
        let t = ang("1/12");
        let mut a = (t.clone(), taut_census(&t, 2).unwrap());
        let b = (ang("1/7"), taut_census(&ang("1/7"), 2).unwrap());
        *a.1[2].entries.get_mut(&1).unwrap() += 1;
        let mism = compare_census_tables(&[a, b]);
        assert!(!mism.is_empty());
    }
}
