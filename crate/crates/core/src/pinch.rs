//! Pinching the circle along a finite leaf system: components, lengths,
//! censuses, and the monkey-pants Euler bookkeeping.
//!
//! The traversal convention: walk counterclockwise along an arc; on arriving
//! at tip sigma_i of a leaf (tips cyclically ordered sigma_0 < ... < sigma_m),
//! continue from sigma_{i+1 mod m+1}. This orientation is validated against
//! the single-chord case (lengths x and 1-x) and the depth-2 census.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::angle::{Angle, Height};
use crate::error::{Error, Result};
use crate::leaf::{cross_unchecked, Leaf};

/// One circle of S^1 mod the leaf system.
#[derive(Clone, Debug)]
pub struct Component {
    pub id: usize,
    /// Arcs in traversal order, each (start, end) counterclockwise.
    pub arcs: Vec<(Angle, Angle)>,
    pub length: BigRational,
    /// (leaf index, tip index) arrived at, at the end of each arc.
    pub adjacency: Vec<(usize, usize)>,
}

impl Component {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "id": self.id,
            "length": format!("{}/{}", self.length.numer(), self.length.denom()),
            "arcs": self.arcs.iter()
                .map(|(s, e)| serde_json::json!([s.to_string(), e.to_string()]))
                .collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct PinchedCircle {
    pub components: Vec<Component>,
    /// tip angle -> (leaf index, tip index within the leaf)
    pub tip_index: BTreeMap<Angle, (usize, usize)>,
}

impl PinchedCircle {
    /// The component whose arcs contain the angle `x` (x must not be a tip).
    pub fn locate(&self, x: &Angle) -> Result<usize> {
        if self.tip_index.contains_key(x) {
            return Err(Error::DegenerateParameter(format!("angle {x} is a pinch point")));
        }
        for c in &self.components {
            if c.arcs.is_empty() {
                return Ok(c.id);
            }
            for (s, e) in &c.arcs {
                if x.in_open_arc(s, e) {
                    return Ok(c.id);
                }
            }
        }
        Err(Error::InternalAssertion(format!("angle {x} is in no component")))
    }
}

/// Pinch the circle along pairwise non-crossing leaves with pairwise distinct
/// tips. Components partition the arcs; their count is 1 + sum of leaf
/// multiplicities.
pub fn pinch_circle(leaves: &[Leaf]) -> Result<PinchedCircle> {
    for (i, a) in leaves.iter().enumerate() {
        for b in &leaves[i + 1..] {
            if !a.shared_tips(b).is_empty() {
                return Err(Error::DegenerateParameter(format!(
                    "coincident tips between {a:?} and {b:?}"
                )));
            }
            if cross_unchecked(a.tips(), b.tips()) {
                return Err(Error::CrossingLeaves(format!("{a:?} crosses {b:?}")));
            }
        }
    }
    pinch_circle_unchecked(leaves)
}

/// Same as [`pinch_circle`] but assumes the caller already validated the
/// system (used by generators that validate once per build).
pub fn pinch_circle_unchecked(leaves: &[Leaf]) -> Result<PinchedCircle> {
    let mut tips: Vec<(Angle, usize, usize)> = Vec::new();
    for (li, leaf) in leaves.iter().enumerate() {
        for (ti, t) in leaf.tips().iter().enumerate() {
            tips.push((t.clone(), li, ti));
        }
    }
    tips.sort_by(|x, y| x.0.cmp(&y.0));
    for w in tips.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DegenerateParameter(format!("coincident tips at {}", w[0].0)));
        }
    }

    let mut tip_index = BTreeMap::new();
    for (a, li, ti) in &tips {
        tip_index.insert(a.clone(), (*li, *ti));
    }

    let m = tips.len();
    if m == 0 {
        return Ok(PinchedCircle {
            components: vec![Component {
                id: 0,
                arcs: vec![],
                length: BigRational::one(),
                adjacency: vec![],
            }],
            tip_index,
        });
    }

    // arc k runs from tips[k] to tips[k+1 mod m]
    let pos_of: BTreeMap<(usize, usize), usize> =
        tips.iter().enumerate().map(|(k, (_, li, ti))| ((*li, *ti), k)).collect();
    let succ: Vec<usize> = (0..m)
        .map(|k| {
            let (_, li, ti) = &tips[(k + 1) % m];
            let nt = (ti + 1) % leaves[*li].tips().len();
            pos_of[&(*li, nt)]
        })
        .collect();

    let mut seen = vec![false; m];
    let mut raw: Vec<(Vec<usize>, BigRational)> = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut len = BigRational::zero();
        let mut k = start;
        loop {
            seen[k] = true;
            cycle.push(k);
            len += tips[k].0.ccw_dist(&tips[(k + 1) % m].0);
            k = succ[k];
            if k == start {
                break;
            }
        }
        raw.push((cycle, len));
    }

    // canonical form: rotate each cycle to start at its smallest arc-start
    // angle, order components by that angle
    for (cycle, _) in raw.iter_mut() {
        let best = cycle
            .iter()
            .enumerate()
            .min_by(|a, b| tips[*a.1].0.cmp(&tips[*b.1].0))
            .map(|(i, _)| i)
            .unwrap();
        cycle.rotate_left(best);
    }
    raw.sort_by(|a, b| tips[a.0[0]].0.cmp(&tips[b.0[0]].0));

    let mut components = Vec::new();
    let mut total = BigRational::zero();
    for (id, (cycle, length)) in raw.into_iter().enumerate() {
        let arcs: Vec<(Angle, Angle)> = cycle
            .iter()
            .map(|&k| (tips[k].0.clone(), tips[(k + 1) % m].0.clone()))
            .collect();
        let adjacency: Vec<(usize, usize)> =
            cycle.iter().map(|&k| (tips[(k + 1) % m].1, tips[(k + 1) % m].2)).collect();
        if !length.is_positive() {
            return Err(Error::InternalAssertion("non-positive component length".into()));
        }
        total += &length;
        components.push(Component { id, arcs, length, adjacency });
    }
    if total != BigRational::one() {
        return Err(Error::InternalAssertion(format!("component lengths sum to {total}, not 1")));
    }
    let mults: usize = leaves.iter().map(|l| l.multiplicity()).sum();
    if components.len() != 1 + mults {
        return Err(Error::InternalAssertion(format!(
            "{} components != 1 + {} multiplicities",
            components.len(),
            mults
        )));
    }
    Ok(PinchedCircle { components, tip_index })
}

/// Pinch along the leaves of height strictly greater than `h`.
pub fn level_components(leaves: &[Leaf], h: &Height) -> Result<PinchedCircle> {
    if leaves.iter().any(|l| l.height() == h) {
        return Err(Error::HeightCollision(h.to_string()));
    }
    let above: Vec<Leaf> = leaves.iter().filter(|l| l.height() > h).cloned().collect();
    pinch_circle(&above)
}

/// Histogram of component lengths ell/3^n at depth n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub depth: u32,
    pub entries: BTreeMap<u64, u64>,
}

impl Census {
    pub fn total_count(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn weighted_sum(&self) -> u64 {
        self.entries.iter().map(|(l, c)| l * c).sum()
    }

    /// The identities sum N(n,ell) = (3^n+1)/2 and sum N(n,ell)*ell = 3^n.
    pub fn row_identities_hold(&self) -> bool {
        let p = 3u64.pow(self.depth);
        self.total_count() == (p + 1) / 2 && self.weighted_sum() == p
    }

    pub fn csv_rows(&self) -> Vec<String> {
        self.entries.iter().map(|(l, c)| format!("{},{},{}", self.depth, l, c)).collect()
    }
}

/// Component-length histogram; every length must be an integer multiple of
/// 1/3^n.
pub fn census(p: &PinchedCircle, n: u32) -> Result<Census> {
    let scale = BigRational::from_integer(BigInt::from(3u32).pow(n));
    let mut entries: BTreeMap<u64, u64> = BTreeMap::new();
    for c in &p.components {
        let v = &c.length * &scale;
        if !v.is_integer() {
            return Err(Error::NonConformingLength {
                length: format!("{}/{}", c.length.numer(), c.length.denom()),
                depth: n,
            });
        }
        let l = v
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::InternalAssertion("census entry overflow".into()))?;
        *entries.entry(l).or_insert(0) += 1;
    }
    Ok(Census { depth: n, entries })
}

/// Verification data for one component of the height band (t1, t2): the
/// waist (a component of the pinch at t2), its cuffs (components of the
/// pinch at t1 contained in it), and the total multiplicity of band leaves.
#[derive(Clone, Debug)]
pub struct MonkeyPants {
    pub waist: usize,
    pub waist_length: BigRational,
    pub cuffs: Vec<usize>,
    pub saddle_multiplicity_sum: usize,
}

impl MonkeyPants {
    /// Euler bookkeeping: #cuffs = 1 + saddle multiplicity.
    pub fn euler_ok(&self) -> bool {
        self.cuffs.len() == 1 + self.saddle_multiplicity_sum
    }
}

/// Pair the pinches at the two band levels by arc containment and count
/// cuffs per waist.
pub fn monkey_pants_check(leaves: &[Leaf], t1: &Height, t2: &Height) -> Result<Vec<MonkeyPants>> {
    if t1 >= t2 {
        return Err(Error::DegenerateParameter(format!("band ({t1}, {t2}) is empty")));
    }
    let bot = level_components(leaves, t1)?;
    let top = level_components(leaves, t2)?;

    // each bottom component's arcs lie inside a single top component; test
    // containment at arc midpoints (arc endpoints can be top pinch points)
    let midpoint = |s: &Angle, e: &Angle| -> Angle {
        s.add_rational(&(s.ccw_dist(e) / BigRational::from_integer(2.into())))
    };
    let mut cuffs_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in &bot.components {
        let w = match c.arcs.first() {
            None => 0,
            Some((s, e)) => top_component_containing(&top, &midpoint(s, e))?,
        };
        for (s, e) in c.arcs.iter().skip(1) {
            let w2 = top_component_containing(&top, &midpoint(s, e))?;
            if w2 != w {
                return Err(Error::InternalAssertion(
                    "bottom component spans two waists".into(),
                ));
            }
        }
        cuffs_of.entry(w).or_default().push(c.id);
    }

    let mut out = Vec::new();
    for w in &top.components {
        let mut mult = 0usize;
        for leaf in leaves {
            if leaf.height() > t1 && leaf.height() < t2 {
                let here = match leaf.tips().first() {
                    Some(t) => top_component_containing(&top, t)? == w.id,
                    None => false,
                };
                if here {
                    mult += leaf.multiplicity();
                }
            }
        }
        out.push(MonkeyPants {
            waist: w.id,
            waist_length: w.length.clone(),
            cuffs: cuffs_of.remove(&w.id).unwrap_or_default(),
            saddle_multiplicity_sum: mult,
        });
    }
    Ok(out)
}

/// Locate the top-level component containing a point that may itself be a
/// tip of a deeper (band or below) leaf: tips of the top pinch are excluded.
fn top_component_containing(top: &PinchedCircle, x: &Angle) -> Result<usize> {
    if top.components.len() == 1 {
        return Ok(top.components[0].id);
    }
    top.locate(x)
}
