//! Critical sets and the dynamical elamination generator: iterated pullback
//! through S^1 mod C, plus the squeeze and rotation flows and Weyl-chamber
//! coordinates on critical heights.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::angle::{Angle, Height};
use crate::error::{Error, Result};
use crate::leaf::{validate_elamination, Leaf};
use crate::pinch::{pinch_circle, PinchedCircle};

/// A degree-d critical set: critical leaves whose critical multiplicities
/// sum to d-1 and which pinch the circle into d components of length 1/d.
#[derive(Clone, Debug)]
pub struct CriticalSet {
    degree: u32,
    leaves: Vec<Leaf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriticalViolation {
    TipsNotCongruent { leaf: usize },
    MultiplicitySum { got: usize, want: usize },
    NotAnElamination(String),
    SharedIdealPoints { a: usize, b: usize },
    WrongComponents(String),
}

impl fmt::Display for CriticalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalViolation::TipsNotCongruent { leaf } => {
                write!(f, "leaf {leaf} has tips not congruent mod 1/d")
            }
            CriticalViolation::MultiplicitySum { got, want } => {
                write!(f, "critical multiplicities sum to {got}, not {want}")
            }
            CriticalViolation::NotAnElamination(s) => write!(f, "not an elamination: {s}"),
            CriticalViolation::SharedIdealPoints { a, b } => {
                write!(f, "critical leaves {a} and {b} share ideal points (not in general position)")
            }
            CriticalViolation::WrongComponents(s) => write!(f, "pinch is wrong: {s}"),
        }
    }
}

/// Check the four critical-set invariants; violations are data.
pub fn validate_critical_set(leaves: &[Leaf], d: u32) -> Vec<CriticalViolation> {
    let mut out = Vec::new();
    let dd = BigRational::new(BigInt::one(), BigInt::from(d));
    for (i, leaf) in leaves.iter().enumerate() {
        let base = &leaf.tips()[0];
        let congruent = leaf.tips()[1..]
            .iter()
            .all(|t| (t.value() - base.value()).fract_div(&dd));
        if !congruent {
            out.push(CriticalViolation::TipsNotCongruent { leaf: i });
        }
    }
    // multiplicity correction applies only to leaves sharing ideal points;
    // those configurations are rejected as outside general position
    for (i, a) in leaves.iter().enumerate() {
        for (j, b) in leaves.iter().enumerate().skip(i + 1) {
            if a.shared_tips(b).len() >= 2 {
                out.push(CriticalViolation::SharedIdealPoints { a: i, b: j });
            }
        }
    }
    let mult: usize = leaves.iter().map(|l| l.multiplicity()).sum();
    if mult != (d as usize) - 1 {
        out.push(CriticalViolation::MultiplicitySum { got: mult, want: d as usize - 1 });
    }
    let viols = validate_elamination(leaves);
    if !viols.is_empty() {
        out.push(CriticalViolation::NotAnElamination(format!("{}", viols[0])));
    }
    if out.is_empty() {
        match pinch_circle(leaves) {
            Err(e) => out.push(CriticalViolation::WrongComponents(e.to_string())),
            Ok(p) => {
                let want = BigRational::new(BigInt::one(), BigInt::from(d));
                if p.components.len() != d as usize
                    || p.components.iter().any(|c| c.length != want)
                {
                    out.push(CriticalViolation::WrongComponents(format!(
                        "{} components, expected {} of length 1/{}",
                        p.components.len(),
                        d,
                        d
                    )));
                }
            }
        }
    }
    out
}

trait FractDiv {
    fn fract_div(&self, by: &BigRational) -> bool;
}

impl FractDiv for BigRational {
    /// self is an integer multiple of `by`.
    fn fract_div(&self, by: &BigRational) -> bool {
        (self / by).is_integer()
    }
}

impl CriticalSet {
    pub fn new(leaves: Vec<Leaf>, degree: u32) -> Result<Self> {
        let v = validate_critical_set(&leaves, degree);
        if let Some(first) = v.first() {
            return Err(Error::InvalidCriticalSet(first.to_string()));
        }
        Ok(CriticalSet { degree, leaves })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn critical_multiplicity(&self, j: usize) -> usize {
        let leaf = &self.leaves[j];
        let taller_sharing = self
            .leaves
            .iter()
            .filter(|o| o.height() > leaf.height() && o.shared_tips(leaf).len() >= 2)
            .count();
        leaf.multiplicity() - taller_sharing
    }

    pub fn pinched(&self) -> Result<PinchedCircle> {
        pinch_circle(&self.leaves)
    }
}

/// Pull a leaf back through S^1 mod C: one preimage leaf per component, with
/// tips the unique preimages of p's tips in that component, height h(p)/d.
pub fn pullback_leaf(p: &Leaf, c: &CriticalSet) -> Result<Vec<Leaf>> {
    let pinched = c.pinched()?;
    pullback_with(p, c, &pinched)
}

fn pullback_with(p: &Leaf, c: &CriticalSet, pinched: &PinchedCircle) -> Result<Vec<Leaf>> {
    let d = c.degree;
    let mut per_component: Vec<Vec<Angle>> = vec![Vec::new(); d as usize];
    for tip in p.tips() {
        for pre in tip.preimages(d) {
            if pinched.tip_index.contains_key(&pre) {
                return Err(Error::DegenerateParameter(format!(
                    "preimage angle {pre} hits a critical tip"
                )));
            }
            let comp = pinched.locate(&pre)?;
            per_component[comp].push(pre);
        }
    }
    let height = p.height().div_int(d);
    let mut out = Vec::with_capacity(d as usize);
    for (comp, tips) in per_component.into_iter().enumerate() {
        if tips.len() != p.tips().len() {
            return Err(Error::InternalAssertion(format!(
                "component {comp} received {} preimages for {} tips",
                tips.len(),
                p.tips().len()
            )));
        }
        out.push(Leaf::new(tips, height.clone())?);
    }
    Ok(out)
}

/// A critical set together with its precritical leaves up to `max_depth`.
#[derive(Clone, Debug)]
pub struct DynamicalElamination {
    pub critical: CriticalSet,
    /// Precritical leaves, labelled with (depth >= 1, ancestor index).
    pub precritical: Vec<Leaf>,
    pub max_depth: u32,
}

impl DynamicalElamination {
    pub fn all_leaves(&self) -> Vec<Leaf> {
        let mut v: Vec<Leaf> = self
            .critical
            .leaves
            .iter()
            .enumerate()
            .map(|(i, l)| l.clone().with_meta(Some(0), Some(i)))
            .collect();
        v.extend(self.precritical.iter().cloned());
        v
    }

    pub fn leaves_at_depth(&self, k: u32) -> Vec<&Leaf> {
        if k == 0 {
            return self.critical.leaves.iter().collect();
        }
        self.precritical.iter().filter(|l| l.depth == Some(k)).collect()
    }
}

/// Breadth-first pullback of every leaf to depth N. For a degree-d set of e
/// simple critical leaves this yields e*d^k leaves at depth k.
pub fn generate(c: &CriticalSet, max_depth: u32) -> Result<DynamicalElamination> {
    let pinched = c.pinched()?;
    let mut seen: HashSet<Angle> = HashSet::new();
    for leaf in &c.leaves {
        for t in leaf.tips() {
            seen.insert(t.clone());
        }
    }
    let mut precritical: Vec<Leaf> = Vec::new();
    let mut frontier: Vec<Leaf> = c
        .leaves
        .iter()
        .enumerate()
        .map(|(i, l)| l.clone().with_meta(Some(0), Some(i)))
        .collect();
    for depth in 1..=max_depth {
        let mut next = Vec::with_capacity(frontier.len() * c.degree as usize);
        for leaf in &frontier {
            let pulled = pullback_with(leaf, c, &pinched).map_err(|e| match e {
                Error::DegenerateParameter(msg) => {
                    Error::DegenerateParameter(format!("depth {depth}: {msg}"))
                }
                other => other,
            })?;
            for q in pulled {
                for t in q.tips() {
                    if !seen.insert(t.clone()) {
                        return Err(Error::DegenerateParameter(format!(
                            "depth {depth}: tip {t} collides with an existing tip"
                        )));
                    }
                }
                next.push(q.with_meta(Some(depth), leaf.origin));
            }
        }
        precritical.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(DynamicalElamination { critical: c.clone(), precritical, max_depth })
}

/// Multiply all heights by a positive rational; angles unchanged.
pub fn squeeze(l: &DynamicalElamination, lambda: &BigRational) -> Result<DynamicalElamination> {
    let scale = |leaf: &Leaf| -> Result<Leaf> {
        Ok(Leaf::new(leaf.tips().to_vec(), leaf.height().scale(lambda)?)?
            .with_meta(leaf.depth, leaf.origin))
    };
    let critical = CriticalSet::new(
        l.critical.leaves.iter().map(&scale).collect::<Result<Vec<_>>>()?,
        l.critical.degree,
    )?;
    let precritical = l.precritical.iter().map(&scale).collect::<Result<Vec<_>>>()?;
    Ok(DynamicalElamination { critical, precritical, max_depth: l.max_depth })
}

/// Advance each critical leaf C_j by arclength h_j*s_j inside its component
/// of the circle pinched along the strictly taller critical leaves, then
/// regenerate the precritical data (uniqueness of the generated elamination
/// makes this the flowed elamination).
pub fn rotate_flow(l: &DynamicalElamination, s: &[BigRational]) -> Result<DynamicalElamination> {
    let crit = &l.critical.leaves;
    if s.len() != crit.len() {
        return Err(Error::DegenerateParameter(format!(
            "flow vector has {} coordinates for {} critical leaves",
            s.len(),
            crit.len()
        )));
    }
    // generic heights: no ratio may be a power of d (including equal heights)
    let d = l.critical.degree;
    for i in 0..crit.len() {
        for j in (i + 1)..crit.len() {
            if power_of_d_ratio(crit[i].height(), crit[j].height(), d).is_some() {
                return Err(Error::NonGenericHeights(format!(
                    "h({i})/h({j}) is a power of {d}"
                )));
            }
        }
    }

    // process tallest first; each leaf keeps its arclength coordinates inside
    // the component structure of the already-moved taller leaves
    let mut order: Vec<usize> = (0..crit.len()).collect();
    order.sort_by(|&a, &b| crit[b].height().cmp(crit[a].height()));

    let mut moved: Vec<Leaf> = crit.to_vec();
    for (rank, &j) in order.iter().enumerate() {
        let taller_old: Vec<Leaf> = order[..rank].iter().map(|&k| crit[k].clone()).collect();
        let taller_new: Vec<Leaf> = order[..rank].iter().map(|&k| moved[k].clone()).collect();
        let delta = crit[j].height().value() * &s[j];
        let new_tips = crit[j]
            .tips()
            .iter()
            .map(|t| transport(t, &taller_old, &taller_new, &delta))
            .collect::<Result<Vec<_>>>()?;
        moved[j] = Leaf::new(new_tips, crit[j].height().clone())?;
    }

    let critical = CriticalSet::new(moved, d)?;
    generate(&critical, l.max_depth)
}

/// Carry a point at fixed component coordinate from the old taller structure
/// to the new one, advanced by `delta` arclength.
fn transport(
    t: &Angle,
    taller_old: &[Leaf],
    taller_new: &[Leaf],
    delta: &BigRational,
) -> Result<Angle> {
    let coord = component_coordinate(t, taller_old)?;
    point_at_coordinate(&coord.0, coord.1 + delta, taller_new)
}

/// Reference tip of a component: the lexicographically least (leaf, tip
/// index) among its arc-start tips; stable as the structure moves.
fn component_reference(p: &PinchedCircle, comp: usize) -> Option<(usize, usize)> {
    p.components[comp].arcs.iter().map(|(s, _)| p.tip_index[s]).min()
}

/// (reference tip id, arclength offset ccw from the reference arc start).
fn component_coordinate(
    x: &Angle,
    taller: &[Leaf],
) -> Result<((usize, usize), BigRational)> {
    if taller.is_empty() {
        return Ok(((usize::MAX, 0), x.value().clone()));
    }
    let p = pinch_circle(taller)?;
    let comp = p.locate(x)?;
    let c = &p.components[comp];
    let rf = component_reference(&p, comp)
        .ok_or_else(|| Error::InternalAssertion("component without boundary".into()))?;
    // the reference tip starts exactly one arc of this component
    let start = c
        .arcs
        .iter()
        .position(|(s, _)| s == &taller[rf.0].tips()[rf.1])
        .ok_or_else(|| Error::InternalAssertion("reference tip starts no arc".into()))?;
    let mut off = BigRational::zero();
    for i in 0..c.arcs.len() {
        let (s, e) = &c.arcs[(start + i) % c.arcs.len()];
        let arc_len = s.ccw_dist(e);
        if x.in_open_arc(s, e) {
            return Ok((rf, off + s.ccw_dist(x)));
        }
        off += arc_len;
    }
    Err(Error::DegenerateParameter(format!("point {x} sits on a pinch point")))
}

fn point_at_coordinate(
    rf: &(usize, usize),
    mut off: BigRational,
    taller: &[Leaf],
) -> Result<Angle> {
    if taller.is_empty() {
        return Ok(Angle::new(off));
    }
    let p = pinch_circle(taller)?;
    let ref_angle = taller[rf.0].tips()[rf.1].clone();
    let comp = p
        .components
        .iter()
        .position(|c| c.arcs.iter().any(|(s, _)| s == &ref_angle))
        .ok_or_else(|| Error::InternalAssertion("reference tip starts no arc".into()))?;
    let c = &p.components[comp];
    let total: BigRational = c.length.clone();
    off = mod_len(&off, &total);
    let start = c.arcs.iter().position(|(s, _)| s == &ref_angle).unwrap();
    for i in 0..c.arcs.len() {
        let (s, e) = &c.arcs[(start + i) % c.arcs.len()];
        let arc_len = s.ccw_dist(e);
        if off < arc_len {
            return Ok(s.add_rational(&off));
        }
        off -= arc_len;
    }
    Err(Error::DegenerateParameter("rotated point lands on a pinch point".into()))
}

fn mod_len(x: &BigRational, len: &BigRational) -> BigRational {
    let q = (x / len).floor();
    x - q * len
}

fn power_of_d_ratio(a: &Height, b: &Height, d: u32) -> Option<i64> {
    let (hi, lo, sign) = if a >= b { (a, b, 1i64) } else { (b, a, -1i64) };
    let ratio = hi.value() / lo.value();
    if !ratio.is_integer() {
        return None;
    }
    let mut n = ratio.to_integer();
    let d = BigInt::from(d);
    let mut k = 0i64;
    while n > BigInt::one() {
        let (q, r) = n.div_rem(&d);
        if !r.is_zero() {
            return None;
        }
        n = q;
        k += 1;
    }
    Some(sign * k)
}

/// Weyl-chamber data: integer coordinates t_j = -log_d h_j where heights are
/// exact powers of d, and wall flags for pairs whose height ratio is d^k
/// with k >= 1 (equal heights are chamber boundary, not a wall).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylCoords {
    pub t: Vec<Option<i64>>,
    /// (i, j, t_j - t_i) for each flagged pair, i < j in the sorted order.
    pub walls: Vec<(usize, usize, bool)>,
}

pub fn weyl_coords(heights: &[Height], d: u32) -> Result<WeylCoords> {
    for w in heights.windows(2) {
        if w[0] < w[1] {
            return Err(Error::DegenerateParameter(
                "heights must be sorted in descending order".into(),
            ));
        }
    }
    let one = Height::one();
    let t = heights.iter().map(|h| power_of_d_ratio(&one, h, d)).collect();
    let mut walls = Vec::new();
    for i in 0..heights.len() {
        for j in (i + 1)..heights.len() {
            let flagged = matches!(
                power_of_d_ratio(&heights[i], &heights[j], d),
                Some(k) if k >= 1
            );
            walls.push((i, j, flagged));
        }
    }
    Ok(WeylCoords { t, walls })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: i64, d: i64) -> Angle {
        Angle::from_frac(n, d).unwrap()
    }

    fn leaf(tips: &[(i64, i64)], h: (i64, i64)) -> Leaf {
        Leaf::new(
            tips.iter().map(|&(n, d)| a(n, d)).collect(),
            Height::from_frac(h.0, h.1).unwrap(),
        )
        .unwrap()
    }

    // s* = 49/108 - 1/1000 = 12223/27000: perturbed off the collision value
    fn degree3_set() -> CriticalSet {
        let s = BigRational::new(12223.into(), 27000.into());
        let third = BigRational::new(1.into(), 3.into());
        let c2 = Leaf::new(
            vec![Angle::new(s.clone()), Angle::new(&s + &third)],
            Height::from_frac(8, 9).unwrap(),
        )
        .unwrap();
        CriticalSet::new(vec![leaf(&[(3, 36), (15, 36)], (1, 1)), c2], 3).unwrap()
    }

    #[test]
    fn paper_degree3_critical_set_is_valid() {
        let v = validate_critical_set(
            &[leaf(&[(3, 36), (15, 36)], (1, 1)), leaf(&[(49, 108), (85, 108)], (8, 9))],
            3,
        );
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn single_simple_leaf_fails_multiplicity() {
        let v = validate_critical_set(&[leaf(&[(3, 36), (15, 36)], (1, 1))], 3);
        assert!(v.iter().any(|x| matches!(x, CriticalViolation::MultiplicitySum { got: 1, want: 2 })));
    }

    #[test]
    fn degree4_antipodal_configuration_is_valid() {
        let v = validate_critical_set(
            &[
                leaf(&[(0, 1), (1, 2)], (1, 1)),
                leaf(&[(1, 8), (3, 8)], (1, 2)),
                leaf(&[(5, 8), (7, 8)], (1, 2)),
            ],
            4,
        );
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn tips_not_congruent_detected() {
        let v = validate_critical_set(
            &[leaf(&[(0, 1), (1, 4)], (1, 1)), leaf(&[(1, 2), (5, 6)], (1, 2))],
            3,
        );
        assert!(v.iter().any(|x| matches!(x, CriticalViolation::TipsNotCongruent { leaf: 0 })));
    }

    #[test]
    fn pullback_distributes_preimages_over_components() {
        // s* = 49/108 - 1/1000
        let s = BigRational::new(49.into(), 108.into())
            - BigRational::new(1.into(), 1000.into());
        let third = BigRational::new(1.into(), 3.into());
        let c2 = Leaf::new(
            vec![Angle::new(s.clone()), Angle::new(&s + &third)],
            Height::from_frac(8, 9).unwrap(),
        )
        .unwrap();
        let c = CriticalSet::new(vec![leaf(&[(3, 36), (15, 36)], (1, 1)), c2], 3).unwrap();
        let pulled = pullback_leaf(&c.leaves()[0], &c).unwrap();
        let mut tipsets: Vec<Vec<Angle>> =
            pulled.iter().map(|l| l.tips().to_vec()).collect();
        tipsets.sort();
        let mut want = vec![
            vec![a(5, 36), a(13, 36)],
            vec![a(17, 36), a(25, 36)],
            vec![a(1, 36), a(29, 36)],
        ];
        want.sort();
        assert_eq!(tipsets, want);
        for l in &pulled {
            assert_eq!(l.height(), &Height::from_frac(1, 3).unwrap());
        }
    }

    #[test]
    fn pullback_pairing_depends_on_s_star() {
        // s* = 61/108 - epsilon gives a different pairing of the same angles
        let s = BigRational::new(61.into(), 108.into())
            - BigRational::new(1.into(), 1000.into());
        let third = BigRational::new(1.into(), 3.into());
        let c2 = Leaf::new(
            vec![Angle::new(s.clone()), Angle::new(&s + &third)],
            Height::from_frac(8, 9).unwrap(),
        )
        .unwrap();
        let c = CriticalSet::new(vec![leaf(&[(3, 36), (15, 36)], (1, 1)), c2], 3).unwrap();
        let pulled = pullback_leaf(&c.leaves()[0], &c).unwrap();
        let mut tipsets: Vec<Vec<Angle>> =
            pulled.iter().map(|l| l.tips().to_vec()).collect();
        tipsets.sort();
        let mut want = vec![
            vec![a(5, 36), a(13, 36)],
            vec![a(25, 36), a(29, 36)],
            vec![a(1, 36), a(17, 36)],
        ];
        want.sort();
        assert_eq!(tipsets, want);
    }

    #[test]
    fn degenerate_preimage_on_critical_tip() {
        // degree 2 with critical angle 0: preimages of 0 are exactly the tips
        let c = CriticalSet::new(vec![leaf(&[(0, 1), (1, 2)], (1, 1))], 2).unwrap();
        assert!(matches!(
            pullback_leaf(&c.leaves()[0], &c),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn generic_degree2_pullback_splits_by_halves() {
        let c = CriticalSet::new(vec![leaf(&[(1, 10), (6, 10)], (1, 1))], 2).unwrap();
        let pulled = pullback_leaf(&c.leaves()[0], &c).unwrap();
        let mut tipsets: Vec<Vec<Angle>> =
            pulled.iter().map(|l| l.tips().to_vec()).collect();
        tipsets.sort();
        let mut want = vec![vec![a(3, 10), a(11, 20)], vec![a(1, 20), a(8, 10)]];
        want.sort();
        assert_eq!(tipsets, want);
    }

    #[test]
    fn generate_counts_are_e_d_pow_k() {
        // a dyadic critical angle never returns to the tips under doubling
        let c = CriticalSet::new(vec![leaf(&[(1, 32), (17, 32)], (1, 1))], 2).unwrap();
        let l = generate(&c, 5).unwrap();
        for k in 1..=5 {
            assert_eq!(l.leaves_at_depth(k).len(), 2usize.pow(k));
            for q in l.leaves_at_depth(k) {
                assert_eq!(q.height(), &Height::pow_of(2, -(k as i32)));
            }
        }
        let all = l.all_leaves();
        assert!(validate_elamination(&all).is_empty());
    }

    #[test]
    fn degree3_generate_counts_and_validity() {
        let c = degree3_set(); // s* = 49/108 close but generic
        let l = generate(&c, 4).unwrap();
        for k in 1..=4 {
            assert_eq!(l.leaves_at_depth(k).len(), 2 * 3usize.pow(k));
        }
        assert!(validate_elamination(&l.all_leaves()).is_empty());
    }

    #[test]
    fn image_of_generated_leaf_is_generated() {
        let c = degree3_set();
        let l = generate(&c, 3).unwrap();
        for k in 2..=3u32 {
            for q in l.leaves_at_depth(k) {
                let img = crate::leaf::leaf_image(q, 3).unwrap();
                let found = l
                    .leaves_at_depth(k - 1)
                    .iter()
                    .any(|p| p.tips() == img.tips());
                assert!(found, "image of {q:?} not found at depth {}", k - 1);
            }
        }
    }

    #[test]
    fn generate_degenerate_at_self_preimage() {
        let c = CriticalSet::new(vec![leaf(&[(0, 1), (1, 2)], (1, 1))], 2).unwrap();
        assert!(matches!(generate(&c, 1), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn squeeze_scales_heights_only() {
        let c = degree3_set();
        let l = generate(&c, 2).unwrap();
        let lam = BigRational::new(1.into(), 3.into());
        let sq = squeeze(&l, &lam).unwrap();
        assert_eq!(
            sq.critical.leaves()[0].height(),
            &Height::from_frac(1, 3).unwrap()
        );
        assert_eq!(sq.critical.leaves()[0].tips(), l.critical.leaves()[0].tips());
        let back = squeeze(&sq, &BigRational::new(3.into(), 1.into())).unwrap();
        assert_eq!(back.critical.leaves()[0].height(), l.critical.leaves()[0].height());
    }

    #[test]
    fn rotate_flow_zero_is_identity() {
        let c = degree3_set();
        let l = generate(&c, 2).unwrap();
        let z = BigRational::zero();
        let r = rotate_flow(&l, &[z.clone(), z]).unwrap();
        for (x, y) in r.critical.leaves().iter().zip(l.critical.leaves()) {
            assert_eq!(x.tips(), y.tips());
        }
        for (x, y) in r.precritical.iter().zip(&l.precritical) {
            assert_eq!(x.tips(), y.tips());
        }
    }

    #[test]
    fn rotate_flow_period_return() {
        let c = degree3_set();
        let l = generate(&c, 2).unwrap();
        // shortest leaf is C_2 (height 8/9) in the length-2/3 component of
        // S^1 mod C_1; a full loop returns the critical set
        let len = BigRational::new(2.into(), 3.into());
        let h2 = BigRational::new(8.into(), 9.into());
        let s = vec![BigRational::zero(), len / h2];
        let r = rotate_flow(&l, &s).unwrap();
        for (x, y) in r.critical.leaves().iter().zip(l.critical.leaves()) {
            assert_eq!(x.tips(), y.tips());
        }
    }

    #[test]
    fn rotate_flows_commute() {
        let c = degree3_set();
        let l = generate(&c, 2).unwrap();
        let a1 = BigRational::new(1.into(), 50.into());
        let b2 = BigRational::new(1.into(), 70.into());
        let z = BigRational::zero();
        let ab = rotate_flow(&rotate_flow(&l, &[a1.clone(), z.clone()]).unwrap(), &[z.clone(), b2.clone()]).unwrap();
        let ba = rotate_flow(&rotate_flow(&l, &[z.clone(), b2]).unwrap(), &[a1, z]).unwrap();
        for (x, y) in ab.critical.leaves().iter().zip(ba.critical.leaves()) {
            assert_eq!(x.tips(), y.tips());
        }
        for (x, y) in ab.precritical.iter().zip(&ba.precritical) {
            assert_eq!(x.tips(), y.tips());
        }
    }

    #[test]
    fn rotate_flow_rejects_nongeneric_heights() {
        let c2 = leaf(&[(49, 108), (85, 108)], (1, 3)); // ratio 1/(1/3) = 3
        let c = CriticalSet::new(vec![leaf(&[(3, 36), (15, 36)], (1, 1)), c2], 3).unwrap();
        let l = generate(&c, 1).unwrap();
        let z = BigRational::zero();
        assert!(matches!(
            rotate_flow(&l, &[z.clone(), z]),
            Err(Error::NonGenericHeights(_))
        ));
    }

    #[test]
    fn weyl_examples() {
        let h = |n, d| Height::from_frac(n, d).unwrap();
        let w = weyl_coords(&[h(1, 1), h(1, 4), h(1, 4)], 4).unwrap();
        assert_eq!(
            w.walls,
            vec![(0, 1, true), (0, 2, true), (1, 2, false)]
        );
        assert_eq!(w.t, vec![Some(0), Some(1), Some(1)]);

        let w = weyl_coords(&[h(1, 1), h(8, 9)], 3).unwrap();
        assert_eq!(w.walls, vec![(0, 1, false)]);
        assert_eq!(w.t, vec![Some(0), None]);

        let w = weyl_coords(&[h(1, 1), h(1, 3)], 3).unwrap();
        assert_eq!(w.walls, vec![(0, 1, true)]);
        assert_eq!(w.t, vec![Some(0), Some(1)]);
    }

    #[test]
    fn squeeze_shifts_weyl_coords() {
        let c = CriticalSet::new(
            vec![leaf(&[(3, 36), (15, 36)], (1, 1)), leaf(&[(49, 108), (85, 108)], (1, 3))],
            3,
        )
        .unwrap();
        let l = DynamicalElamination { critical: c, precritical: vec![], max_depth: 0 };
        let sq = squeeze(&l, &BigRational::new(1.into(), 3.into())).unwrap();
        let hs: Vec<Height> =
            sq.critical.leaves().iter().map(|x| x.height().clone()).collect();
        let w = weyl_coords(&hs, 3).unwrap();
        assert_eq!(w.t, vec![Some(1), Some(2)]);
    }
}
