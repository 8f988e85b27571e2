//! Leaves (chords of the circle with tips and a height) and elaminations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::angle::{Angle, Height};
use crate::error::{Error, Result};

/// An extended leaf: >= 2 distinct tip angles (sorted) and a positive height.
/// `depth` and `origin` are bookkeeping labels used by the generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Leaf {
    tips: Vec<Angle>,
    height: Height,
    pub depth: Option<u32>,
    pub origin: Option<usize>,
}

impl Leaf {
    pub fn new(mut tips: Vec<Angle>, height: Height) -> Result<Self> {
        tips.sort();
        tips.dedup();
        if tips.len() < 2 {
            return Err(Error::DegenerateParameter(
                "a leaf needs at least two distinct tips".into(),
            ));
        }
        Ok(Leaf { tips, height, depth: None, origin: None })
    }

    pub fn with_meta(mut self, depth: Option<u32>, origin: Option<usize>) -> Self {
        self.depth = depth;
        self.origin = origin;
        self
    }

    /// Tips in increasing angle order (the canonical cyclic order).
    pub fn tips(&self) -> &[Angle] {
        &self.tips
    }

    pub fn height(&self) -> &Height {
        &self.height
    }

    pub fn multiplicity(&self) -> usize {
        self.tips.len() - 1
    }

    pub fn is_simple(&self) -> bool {
        self.tips.len() == 2
    }

    pub fn has_tip(&self, a: &Angle) -> bool {
        self.tips.binary_search(a).is_ok()
    }

    pub fn shared_tips(&self, other: &Leaf) -> Vec<Angle> {
        self.tips.iter().filter(|t| other.has_tip(t)).cloned().collect()
    }

    /// Same vein (tip set), ignoring heights and labels.
    pub fn same_vein(&self, other: &Leaf) -> bool {
        self.tips == other.tips
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert(
            "tips".into(),
            serde_json::Value::Array(
                self.tips.iter().map(|t| serde_json::Value::String(t.to_string())).collect(),
            ),
        );
        obj.insert("height".into(), serde_json::Value::String(self.height.to_string()));
        if let Some(d) = self.depth {
            obj.insert("depth".into(), serde_json::Value::from(d));
        }
        serde_json::Value::Object(obj)
    }
}

impl fmt::Debug for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.tips.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}@{}", self.height)
    }
}

/// True iff some 2-element subset of `a`'s tips links some 2-element subset
/// of `b`'s tips, i.e. the ideal polygons cross. Requires disjoint tip sets.
pub fn chords_cross(a: &Leaf, b: &Leaf) -> Result<bool> {
    if let Some(t) = a.tips.iter().find(|t| b.has_tip(t)) {
        return Err(Error::SharedTip(t.to_string()));
    }
    Ok(cross_unchecked(a.tips(), b.tips()))
}

/// Non-crossing iff all of `b` lies in a single gap between cyclically
/// consecutive tips of `a`. Tip sets must be disjoint and sorted.
pub(crate) fn cross_unchecked(a: &[Angle], b: &[Angle]) -> bool {
    let gap = |x: &Angle| -> usize {
        // number of a-tips <= x; gaps indexed mod a.len()
        match a.binary_search(x) {
            Ok(_) => unreachable!("disjoint tip sets"),
            Err(i) => i % a.len(),
        }
    };
    let g0 = gap(&b[0]);
    b[1..].iter().any(|x| gap(x) != g0)
}

/// The image of a leaf under z -> z^d on angles: tips tripled (etc.) mod 1
/// with duplicates merged, height multiplied by d.
pub fn leaf_image(p: &Leaf, d: u32) -> Result<Leaf> {
    let mut tips: Vec<Angle> = p.tips.iter().map(|t| t.image(d)).collect();
    tips.sort();
    tips.dedup();
    if tips.len() < 2 {
        return Err(Error::CriticalCollapse { degree: d });
    }
    Ok(Leaf { tips, height: p.height.mul_int(d), depth: None, origin: None })
}

/// A finite elamination: a list of leaves subject to the validity predicates
/// checked by [`validate_elamination`].
#[derive(Clone, Debug)]
pub struct Elamination {
    pub leaves: Vec<Leaf>,
}

impl Elamination {
    pub fn new(leaves: Vec<Leaf>) -> Self {
        Elamination { leaves }
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_elamination(&self.leaves)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Crossing { a: usize, b: usize },
    DuplicateVein { a: usize, b: usize },
    /// Distinct leaves of equal height sharing a tip argument must have
    /// amalgamated; as separate leaves they violate saturation.
    SharedTipEqualHeight { a: usize, b: usize, at: Angle },
    /// A shorter leaf shares exactly one tip argument with a taller leaf and
    /// no taller leaf saturates it (shares two arguments) there.
    Unsaturated { leaf: usize, taller: usize, at: Angle },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Crossing { a, b } => write!(f, "leaves {a} and {b} cross"),
            Violation::DuplicateVein { a, b } => write!(f, "leaves {a} and {b} have the same vein"),
            Violation::SharedTipEqualHeight { a, b, at } => {
                write!(f, "equal-height leaves {a} and {b} share the tip {at}")
            }
            Violation::Unsaturated { leaf, taller, at } => {
                write!(f, "leaf {leaf} shares only the tip {at} with taller leaf {taller} and is unsaturated there")
            }
        }
    }
}

/// Checks every pair: crossings, duplicate veins, and the elder-sibling
/// conditions at shared tip arguments. Violations are data, not errors;
/// saturation findings on finite truncations are warnings by design.
pub fn validate_elamination(leaves: &[Leaf]) -> Vec<Violation> {
    let mut out = Vec::new();
    // group leaves by tip argument to make the saturation pass cheap
    let mut by_tip: BTreeMap<&Angle, Vec<usize>> = BTreeMap::new();
    for (i, leaf) in leaves.iter().enumerate() {
        for t in leaf.tips() {
            by_tip.entry(t).or_default().push(i);
        }
    }
    let mut shared_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for ids in by_tip.values() {
        for (k, &i) in ids.iter().enumerate() {
            for &j in &ids[k + 1..] {
                shared_pairs.insert((i.min(j), i.max(j)));
            }
        }
    }

    for i in 0..leaves.len() {
        for j in (i + 1)..leaves.len() {
            if shared_pairs.contains(&(i, j)) {
                continue;
            }
            if cross_unchecked(leaves[i].tips(), leaves[j].tips()) {
                out.push(Violation::Crossing { a: i, b: j });
            }
        }
    }

    for &(i, j) in &shared_pairs {
        let (li, lj) = (&leaves[i], &leaves[j]);
        if li.same_vein(lj) {
            out.push(Violation::DuplicateVein { a: i, b: j });
            continue;
        }
        let shared = li.shared_tips(lj);
        if li.height() == lj.height() {
            out.push(Violation::SharedTipEqualHeight { a: i, b: j, at: shared[0].clone() });
            continue;
        }
        if shared.len() >= 2 {
            continue; // saturated pair
        }
        let (short, tall) = if li.height() < lj.height() { (i, j) } else { (j, i) };
        let at = &shared[0];
        // some taller leaf sharing two arguments with the short leaf at this
        // tip would saturate it
        let saturated = by_tip[at].iter().any(|&k| {
            k != short
                && leaves[k].height() > leaves[short].height()
                && leaves[short].shared_tips(&leaves[k]).len() >= 2
        });
        if !saturated {
            out.push(Violation::Unsaturated { leaf: short, taller: tall, at: at.clone() });
        }
    }
    out
}

/// Fast non-crossing check for systems of *simple* leaves: sort endpoints and
/// match parentheses. Two chords link iff their sorted endpoint intervals
/// interleave, so well-nestedness is exactly non-crossing.
pub(crate) fn simple_system_noncrossing(leaves: &[Leaf]) -> Result<()> {
    let mut events: Vec<(&Angle, usize)> = Vec::with_capacity(leaves.len() * 2);
    for (i, leaf) in leaves.iter().enumerate() {
        debug_assert!(leaf.is_simple());
        events.push((&leaf.tips()[0], i));
        events.push((&leaf.tips()[1], i));
    }
    events.sort();
    for w in events.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DegenerateParameter(format!("coincident tips at {}", w[0].0)));
        }
    }
    let mut stack: Vec<usize> = Vec::new();
    let mut open = vec![false; leaves.len()];
    for (_, i) in events {
        if !open[i] {
            open[i] = true;
            stack.push(i);
        } else {
            match stack.pop() {
                Some(top) if top == i => {}
                _ => {
                    return Err(Error::CrossingLeaves(format!(
                        "chord {:?} crosses a neighbor",
                        leaves[i]
                    )))
                }
            }
        }
    }
    Ok(())
}
