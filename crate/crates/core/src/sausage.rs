//! Quadratic towers: marked points built by repeated pullback under maps
//! z -> z^2 + c_j, analytic continuation of every point around the loop
//! c(theta) = e^{2 pi i theta} c0, and the component-length rule.
//!
//! Double precision suffices here: only the matching permutation (discrete
//! data) is extracted, guarded by tolerance margins well above the
//! continuation error.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};

const COLLISION_TOL: f64 = 1e-9;
const MATCH_TOL: f64 = 1e-6;

/// How a tower point came to be.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Derivation {
    /// level-1 seed: the double root c or the simple root -2c
    Root { double: bool },
    /// +/- sqrt(parent - selection)
    Sqrt { parent: usize, selection: usize, positive: bool },
}

#[derive(Clone, Debug)]
pub struct TowerPoint {
    pub id: usize,
    pub level: u32,
    pub value: Complex64,
    pub derivation: Derivation,
    /// local degree: 2 for the critical preimage of the selected value
    pub delta: u8,
}

/// Selections are previously tracked points; the distinguished ones carry
/// symbolic names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    C,
    MinusTwoC,
    ZeroPoint,
    Id(usize),
}

impl Selection {
    pub fn parse(s: &str) -> Result<Selection> {
        match s.trim() {
            "c" => Ok(Selection::C),
            "-2c" => Ok(Selection::MinusTwoC),
            "0" => Ok(Selection::ZeroPoint),
            other => other
                .parse::<usize>()
                .map(Selection::Id)
                .map_err(|_| Error::DegenerateParameter(format!("bad chain entry '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuadraticTower {
    pub c0: Complex64,
    pub depth: u32,
    pub points: Vec<TowerPoint>,
    /// resolved selection point id per level transition (level j -> j+1)
    pub selections: Vec<usize>,
}

impl QuadraticTower {
    pub fn level(&self, k: u32) -> Vec<&TowerPoint> {
        self.points.iter().filter(|p| p.level == k).collect()
    }
}

/// Build all levels <= depth. Level 1 is {c, -2c} (the roots of
/// (z-c)^2 (z+2c)); level k+1 is the full preimage of level k under
/// z^2 + c_k where c_k is the selected tracked point.
pub fn tower_build(chain: &[Selection], c0: Complex64, depth: u32) -> Result<QuadraticTower> {
    if c0.norm() == 0.0 {
        return Err(Error::DegenerateParameter("c0 must be nonzero".into()));
    }
    if depth < 1 {
        return Err(Error::DegenerateParameter("depth must be >= 1".into()));
    }
    if chain.len() + 1 != depth as usize {
        return Err(Error::DegenerateParameter(format!(
            "a depth-{depth} tower needs {} chain selections, got {}",
            depth - 1,
            chain.len()
        )));
    }
    let mut points = vec![
        TowerPoint { id: 0, level: 1, value: c0, derivation: Derivation::Root { double: true }, delta: 2 },
        TowerPoint {
            id: 1,
            level: 1,
            value: -2.0 * c0,
            derivation: Derivation::Root { double: false },
            delta: 1,
        },
    ];
    let mut selections = Vec::new();
    let mut zero_point: Option<usize> = None;
    for (lvl, sel) in chain.iter().enumerate() {
        let level = (lvl + 1) as u32;
        let sel_id = match *sel {
            Selection::C => 0,
            Selection::MinusTwoC => 1,
            Selection::ZeroPoint => zero_point.ok_or_else(|| {
                Error::DegenerateParameter(format!(
                    "no tracked 0 point exists before level {level}"
                ))
            })?,
            Selection::Id(id) => {
                if id >= points.len() {
                    return Err(Error::DegenerateParameter(format!("no point with id {id}")));
                }
                id
            }
        };
        selections.push(sel_id);
        let c_val = points[sel_id].value;
        let current: Vec<(usize, Complex64)> = points
            .iter()
            .filter(|p| p.level == level)
            .map(|p| (p.id, p.value))
            .collect();
        for (pid, w) in current {
            let u = w - c_val;
            if u.norm() < COLLISION_TOL {
                // critical preimage: the double root 0
                let id = points.len();
                points.push(TowerPoint {
                    id,
                    level: level + 1,
                    value: Complex64::new(0.0, 0.0),
                    derivation: Derivation::Sqrt { parent: pid, selection: sel_id, positive: true },
                    delta: 2,
                });
                if zero_point.is_none() {
                    zero_point = Some(id);
                }
            } else {
                let r = u.sqrt();
                for (positive, v) in [(true, r), (false, -r)] {
                    let id = points.len();
                    points.push(TowerPoint {
                        id,
                        level: level + 1,
                        value: v,
                        derivation: Derivation::Sqrt { parent: pid, selection: sel_id, positive },
                        delta: 1,
                    });
                }
            }
        }
        // tolerance check: distinct points must stay separated
        let lvl_pts: Vec<Complex64> =
            points.iter().filter(|p| p.level == level + 1).map(|p| p.value).collect();
        for i in 0..lvl_pts.len() {
            for j in (i + 1)..lvl_pts.len() {
                if (lvl_pts[i] - lvl_pts[j]).norm() < COLLISION_TOL {
                    return Err(Error::NumericalDegeneracy(format!(
                        "points collide at level {} (choose a different c0)",
                        level + 1
                    )));
                }
            }
        }
    }
    Ok(QuadraticTower { c0, depth, points, selections })
}

/// Recompute every point value for the base parameter `c`, continuing each
/// square root from its previous value (nearest-branch choice).
fn advance(tower: &QuadraticTower, values: &mut [Complex64], c: Complex64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in &tower.points {
        let new = match p.derivation {
            Derivation::Root { double } => {
                if double {
                    c
                } else {
                    -2.0 * c
                }
            }
            Derivation::Sqrt { parent, selection, .. } => {
                let u = values[parent] - values[selection];
                if p.delta == 2 {
                    Complex64::new(0.0, 0.0)
                } else {
                    let r = u.sqrt();
                    let old = values[p.id];
                    if (r - old).norm() <= (-r - old).norm() {
                        r
                    } else {
                        -r
                    }
                }
            }
        };
        let old = values[p.id];
        let moved = (new - old).norm();
        if p.delta == 1 && matches!(p.derivation, Derivation::Sqrt { .. }) {
            // step acceptance: each point moves < 0.1 x its distance to the
            // branch point of its defining square root (the origin)
            let dist_to_branch = old.norm();
            if dist_to_branch > 0.0 && moved >= 0.1 * dist_to_branch {
                return Err(Error::ContinuationStall(0.0));
            }
            worst = worst.max(moved / dist_to_branch);
        }
        values[p.id] = new;
    }
    Ok(worst)
}

/// Analytic continuation of every tower point around the full loop
/// c(theta) = e^{2 pi i theta} c0; returns the endpoint-matching permutation
/// of point ids.
pub fn continue_loop(tower: &QuadraticTower) -> Result<Vec<usize>> {
    continue_loops(tower, 1)
}

/// Continuation around the loop traversed `loops` times.
pub fn continue_loops(tower: &QuadraticTower, loops: u32) -> Result<Vec<usize>> {
    let start: Vec<Complex64> = tower.points.iter().map(|p| p.value).collect();
    let mut values = start.clone();
    let mut theta = 0.0f64;
    let end = loops as f64;
    let mut step = 1.0 / 256.0;
    let floor = 1.0 / 67_108_864.0; // 2^-26
    while theta < end {
        let target = (theta + step).min(end);
        let c = Complex64::from_polar(tower.c0.norm(), tower.c0.arg() + std::f64::consts::TAU * target);
        let mut trial = values.clone();
        match advance(tower, &mut trial, c) {
            Ok(_) => {
                values = trial;
                theta = target;
                step = (step * 1.5).min(1.0 / 256.0);
            }
            Err(Error::ContinuationStall(_)) => {
                step *= 0.5;
                if step < floor {
                    return Err(Error::ContinuationStall(theta));
                }
            }
            Err(e) => return Err(e),
        }
    }
    // endpoint set must match the start set within tolerance
    let mut perm = vec![usize::MAX; values.len()];
    for (i, v) in values.iter().enumerate() {
        let lvl = tower.points[i].level;
        let mut best = (f64::INFINITY, usize::MAX);
        for (j, s) in start.iter().enumerate() {
            if tower.points[j].level != lvl {
                continue;
            }
            let d = (v - s).norm();
            if d < best.0 {
                best = (d, j);
            }
        }
        if best.0 > MATCH_TOL {
            return Err(Error::MatchFailure(best.0));
        }
        perm[i] = best.1;
    }
    // must be a permutation
    let mut seen = vec![false; perm.len()];
    for &j in &perm {
        if j == usize::MAX || seen[j] {
            return Err(Error::MatchFailure(f64::NAN));
        }
        seen[j] = true;
    }
    Ok(perm)
}

pub fn orbit_sizes(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut sizes = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut n = 0usize;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            n += 1;
            k = perm[k];
        }
        sizes.push(n);
    }
    sizes.sort_unstable();
    sizes
}

/// Component lengths attached to tower points: lambda(c) = 2/3,
/// lambda(-2c) = 1/3, and lambda(child) = lambda(parent) * delta(child)/3.
pub fn marked_lengths(tower: &QuadraticTower) -> Vec<BigRational> {
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let mut out: Vec<BigRational> = Vec::with_capacity(tower.points.len());
    for p in &tower.points {
        let lam = match p.derivation {
            Derivation::Root { double: true } => &third * BigInt::from(2),
            Derivation::Root { double: false } => third.clone(),
            Derivation::Sqrt { parent, .. } => {
                &out[parent] * BigInt::from(p.delta as u32) * &third
            }
        };
        out.push(lam);
    }
    out
}

/// Hurwitz dimension d - 1 - sum of branch multiplicities.
pub fn hurwitz_dimension(d: i64, branch_multiplicities: &[i64]) -> i64 {
    d - 1 - branch_multiplicities.iter().sum::<i64>()
}

/// Every chain of depth <= max_depth over the distinguished selections
/// {c, -2c, 0}: first selection in {c, -2c}, later ones may also pick 0.
pub fn enumerate_chains(max_depth: u32) -> Vec<Vec<Selection>> {
    let mut out = vec![vec![]]; // depth 1
    let mut frontier = vec![vec![]];
    for level in 1..max_depth {
        let mut next = Vec::new();
        for chain in &frontier {
            let opts: &[Selection] = if level == 1 {
                &[Selection::C, Selection::MinusTwoC]
            } else {
                &[Selection::C, Selection::MinusTwoC, Selection::ZeroPoint]
            };
            for &o in opts {
                let mut c = chain.clone();
                c.push(o);
                next.push(c);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn default_c0() -> Complex64 {
    Complex64::new(0.7, 0.1)
}
