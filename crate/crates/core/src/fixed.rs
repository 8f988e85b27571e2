//! Exact circle arithmetic over one shared denominator.
//!
//! Inside a single perturbed build every angle is an integer multiple of 1/D
//! for a common D, so angles become i128 numerators: comparisons are integer
//! comparisons and pullback is exact division by 3. This is a representation
//! change only; the arithmetic stays exact.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::angle::Angle;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FxCtx {
    pub d: i128,
}

impl FxCtx {
    pub fn new(d: i128) -> Self {
        debug_assert!(d > 0 && d % 3 == 0);
        FxCtx { d }
    }

    /// Exact conversion; errors if `a` is not a multiple of 1/D.
    pub fn to_num(&self, a: &BigRational) -> Result<i128> {
        let scaled = a * BigRational::from_integer(BigInt::from(self.d));
        if !scaled.is_integer() {
            return Err(Error::InternalAssertion(format!(
                "angle {a} is not a multiple of 1/{}",
                self.d
            )));
        }
        let n = scaled.to_integer();
        let n = (&n % BigInt::from(self.d) + BigInt::from(self.d)) % BigInt::from(self.d);
        n.to_i128()
            .ok_or_else(|| Error::InternalAssertion("fixed-denominator overflow".into()))
    }

    pub fn angle(&self, x: i128) -> Angle {
        Angle::new(BigRational::new(BigInt::from(x.rem_euclid(self.d)), BigInt::from(self.d)))
    }

    #[inline]
    pub fn norm(&self, x: i128) -> i128 {
        x.rem_euclid(self.d)
    }

    #[inline]
    pub fn add(&self, x: i128, y: i128) -> i128 {
        (x + y) % self.d
    }

    /// Counterclockwise distance from x to y in (0, d].
    #[inline]
    pub fn ccw(&self, x: i128, y: i128) -> i128 {
        let r = (y - x).rem_euclid(self.d);
        if r == 0 {
            self.d
        } else {
            r
        }
    }

    /// Strict membership in the open ccw arc (a, b).
    #[inline]
    pub fn in_open_arc(&self, x: i128, a: i128, b: i128) -> bool {
        x != a && self.ccw(a, x) < self.ccw(a, b)
    }

    #[inline]
    pub fn image3(&self, x: i128) -> i128 {
        (3 * x) % self.d
    }

    /// The three preimages of x under tripling; exact by construction of D.
    pub fn preimages3(&self, x: i128) -> Result<[i128; 3]> {
        let mut out = [0i128; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let num = x + (k as i128) * self.d;
            if num % 3 != 0 {
                return Err(Error::InternalAssertion(format!(
                    "inexact preimage: {x} + {k}*D not divisible by 3"
                )));
            }
            *slot = num / 3;
        }
        Ok(out)
    }
}

/// The circle pinched along a set of simple leaves, in fixed arithmetic.
pub struct FxPinch {
    /// sorted tip numerators
    tips: Vec<i128>,
    /// component id of the gap starting at tips[g]
    comp_of_gap: Vec<usize>,
}



impl FxPinch {
    pub fn new(ctx: &FxCtx, leaves: &[(i128, i128)]) -> Result<Self> {
        let mut entries: Vec<(i128, usize, usize)> = Vec::with_capacity(leaves.len() * 2);
        for (li, &(a, b)) in leaves.iter().enumerate() {
            entries.push((ctx.norm(a), li, 0));
            entries.push((ctx.norm(b), li, 1));
        }
        entries.sort_unstable();
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DegenerateParameter(format!(
                    "coincident tips at {}",
                    ctx.angle(w[0].0)
                )));
            }
        }
        let m = entries.len();
        let tips: Vec<i128> = entries.iter().map(|e| e.0).collect();
        let owner: Vec<(usize, usize)> = entries.iter().map(|e| (e.1, e.2)).collect();
        let _ = &owner;
        // position of each (leaf, tip) among sorted tips
        let mut pos = vec![[0usize; 2]; leaves.len()];
        for (g, &(l, t)) in owner.iter().enumerate() {
            pos[l][t] = g;
        }
        // gap g ends at tips[g+1], owned by (l, t); continue from the other tip
        let mut comp_of_gap = vec![usize::MAX; m];
        let mut ncomp = 0usize;
        for start in 0..m {
            if comp_of_gap[start] != usize::MAX {
                continue;
            }
            let mut g = start;
            loop {
                comp_of_gap[g] = ncomp;
                let (l, t) = owner[(g + 1) % m];
                g = pos[l][1 - t];
                if g == start {
                    break;
                }
            }
            ncomp += 1;
        }
        let _ = ncomp;
        Ok(FxPinch { tips, comp_of_gap })
    }

    /// Component containing x; x on a tip is degenerate.
    pub fn locate(&self, ctx: &FxCtx, x: i128) -> Result<usize> {
        if self.tips.is_empty() {
            return Ok(0);
        }
        let x = ctx.norm(x);
        let idx = self.tips.partition_point(|&t| t < x);
        if idx < self.tips.len() && self.tips[idx] == x {
            return Err(Error::DegenerateParameter(format!(
                "angle {} hits a critical tip",
                ctx.angle(x)
            )));
        }
        let gap = (idx + self.tips.len() - 1) % self.tips.len();
        Ok(self.comp_of_gap[gap])
    }

}

/// A simple leaf in a fixed-denominator build.
#[derive(Clone, Copy, Debug)]
pub struct FxLeaf {
    pub a: i128,
    pub b: i128,
    pub depth: u32,
    pub ancestor: usize,
}

/// Fast non-crossing check for simple-leaf systems: chords cross iff their
/// sorted endpoint intervals interleave, so well-nestedness is exactly
/// non-crossing (same argument as the rational-side check).
pub fn fx_noncrossing(ctx: &FxCtx, leaves: &[(i128, i128)]) -> Result<()> {
    let mut events: Vec<(i128, usize)> = Vec::with_capacity(leaves.len() * 2);
    for (i, &(a, b)) in leaves.iter().enumerate() {
        events.push((ctx.norm(a), i));
        events.push((ctx.norm(b), i));
    }
    events.sort_unstable();
    for w in events.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DegenerateParameter(format!(
                "coincident tips at {}",
                ctx.angle(w[0].0)
            )));
        }
    }
    let mut stack: Vec<usize> = Vec::new();
    let mut open = vec![false; leaves.len()];
    for (_, i) in events {
        if !open[i] {
            open[i] = true;
            stack.push(i);
        } else if stack.pop() != Some(i) {
            return Err(Error::CrossingLeaves(format!(
                "chord ({}, {}) crosses a neighbor",
                ctx.angle(leaves[i].0),
                ctx.angle(leaves[i].1)
            )));
        }
    }
    Ok(())
}

/// One component of a fixed-denominator pinch, arcs in traversal order.
#[derive(Clone, Debug)]
pub struct FxComponent {
    /// (start, end) numerators over the context denominator
    pub arcs: Vec<(i128, i128)>,
    pub length: i128,
}

/// Full pinch of a system of simple leaves in fixed arithmetic, with the
/// same canonical ordering as the rational pinch: components sorted by the
/// smallest contained arc start, each arc cycle rotated to start there.
pub fn fx_pinch_components(ctx: &FxCtx, leaves: &[(i128, i128)]) -> Result<Vec<FxComponent>> {
    let mut entries: Vec<(i128, usize, usize)> = Vec::with_capacity(leaves.len() * 2);
    for (li, &(a, b)) in leaves.iter().enumerate() {
        entries.push((ctx.norm(a), li, 0));
        entries.push((ctx.norm(b), li, 1));
    }
    entries.sort_unstable();
    for w in entries.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DegenerateParameter(format!(
                "coincident tips at {}",
                ctx.angle(w[0].0)
            )));
        }
    }
    let m = entries.len();
    if m == 0 {
        return Ok(vec![FxComponent { arcs: vec![], length: ctx.d }]);
    }
    let mut pos = vec![[0usize; 2]; leaves.len()];
    for (g, &(_, l, t)) in entries.iter().enumerate() {
        pos[l][t] = g;
    }
    let mut comp_of_gap = vec![usize::MAX; m];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..m {
        if comp_of_gap[start] != usize::MAX {
            continue;
        }
        let mut cycle = Vec::new();
        let mut g = start;
        loop {
            comp_of_gap[g] = cycles.len();
            cycle.push(g);
            let (_, l, t) = entries[(g + 1) % m];
            g = pos[l][1 - t];
            if g == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    for cycle in cycles.iter_mut() {
        let best = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, &g)| entries[g].0)
            .map(|(i, _)| i)
            .unwrap();
        cycle.rotate_left(best);
    }
    cycles.sort_by_key(|c| entries[c[0]].0);
    let mut out = Vec::with_capacity(cycles.len());
    for cycle in cycles {
        let mut arcs = Vec::with_capacity(cycle.len());
        let mut length = 0i128;
        for &g in &cycle {
            let s = entries[g].0;
            let e = entries[(g + 1) % m].0;
            arcs.push((s, e));
            length += ctx.ccw(s, e);
        }
        out.push(FxComponent { arcs, length });
    }
    Ok(out)
}

/// Breadth-first pullback of both critical leaves through S^1 mod C,
/// flagging every exact tip collision. Returns precritical leaves only.
pub fn full_build(
    ctx: &FxCtx,
    crit: &[(i128, i128); 2],
    max_depth: u32,
) -> Result<Vec<FxLeaf>> {
    let pinch = FxPinch::new(ctx, crit)?;
    let mut seen: HashSet<i128> = HashSet::new();
    for &(a, b) in crit {
        seen.insert(ctx.norm(a));
        seen.insert(ctx.norm(b));
    }
    let mut out: Vec<FxLeaf> = Vec::new();
    let mut frontier: Vec<FxLeaf> = crit
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| FxLeaf { a: ctx.norm(a), b: ctx.norm(b), depth: 0, ancestor: i })
        .collect();
    for depth in 1..=max_depth {
        let mut next: Vec<FxLeaf> = Vec::with_capacity(frontier.len() * 3);
        for leaf in &frontier {
            let mut per_comp: [(Option<i128>, Option<i128>); 3] =
                [(None, None), (None, None), (None, None)];
            for (side, tip) in [(0usize, leaf.a), (1usize, leaf.b)] {
                for pre in ctx.preimages3(tip)? {
                    let comp = pinch.locate(ctx, pre).map_err(|e| match e {
                        Error::DegenerateParameter(m) => {
                            Error::DegenerateParameter(format!("depth {depth}: {m}"))
                        }
                        other => other,
                    })?;
                    let slot = &mut per_comp[comp];
                    let cell = if side == 0 { &mut slot.0 } else { &mut slot.1 };
                    if cell.is_some() {
                        return Err(Error::InternalAssertion(
                            "two preimages of one tip in one component".into(),
                        ));
                    }
                    *cell = Some(pre);
                }
            }
            for slot in per_comp.iter() {
                let (a, b) = match (slot.0, slot.1) {
                    (Some(a), Some(b)) => (a, b),
                    _ => {
                        return Err(Error::InternalAssertion(
                            "component missing a preimage".into(),
                        ))
                    }
                };
                for t in [a, b] {
                    if !seen.insert(t) {
                        return Err(Error::DegenerateParameter(format!(
                            "depth {depth}: tip {} collides with an existing tip",
                            ctx.angle(t)
                        )));
                    }
                }
                next.push(FxLeaf { a, b, depth, ancestor: leaf.ancestor });
            }
        }
        out.extend_from_slice(&next);
        frontier = next;
    }
    Ok(out)
}

/// Pull one leaf back into the given component; returns the preimage leaf
/// there. Preimages that hit pinch points belong to no open component and
/// are skipped: only degeneracies inside the target component matter here,
/// and a missing preimage is reported as such.
pub fn pullback_into(
    ctx: &FxCtx,
    pinch: &FxPinch,
    leaf: (i128, i128),
    comp: usize,
) -> Result<(i128, i128)> {
    let mut found: [Option<i128>; 2] = [None, None];
    for (side, tip) in [(0usize, leaf.0), (1usize, leaf.1)] {
        for pre in ctx.preimages3(tip)? {
            match pinch.locate(ctx, pre) {
                Ok(c) if c == comp => {
                    if found[side].is_some() {
                        return Err(Error::InternalAssertion(
                            "two preimages of one tip in one component".into(),
                        ));
                    }
                    found[side] = Some(pre);
                }
                Ok(_) | Err(Error::DegenerateParameter(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    match (found[0], found[1]) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::DegenerateParameter(
            "target component is missing a preimage of the chain leaf".into(),
        )),
    }
}
