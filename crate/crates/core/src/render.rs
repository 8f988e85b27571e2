//! SVG rendering: elaminations as hyperbolic chord diagrams with radial
//! tips, and a recursive schematic of the pinched disk. Output is
//! deterministic byte-for-byte for identical input.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::angle::Angle;
use crate::error::Result;
use crate::leaf::Leaf;
use crate::pinch::pinch_circle_unchecked;

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub size_px: u32,
    pub depth_cutoff: Option<u32>,
    /// radius = exp(min(h, cap) * scale)
    pub height_scale: f64,
    pub height_cap: f64,
    pub stroke_width: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            size_px: 800,
            depth_cutoff: None,
            height_scale: 0.25,
            height_cap: 2.0,
            stroke_width: 1.2,
        }
    }
}

const PALETTE: [&str; 7] =
    ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

fn fmt_f(x: f64) -> String {
    format!("{x:.4}")
}

struct Frame {
    cx: f64,
    cy: f64,
    r: f64,
}

impl Frame {
    fn point(&self, a: &Angle, radial: f64) -> (f64, f64) {
        let th = a.to_f64() * std::f64::consts::TAU;
        // y axis flipped so angles run counterclockwise on screen
        (self.cx + self.r * radial * th.cos(), self.cy - self.r * radial * th.sin())
    }
}

/// One leaf: the vein drawn as circular arcs orthogonal to the unit circle
/// (straight when antipodal), tips as radial segments scaled by height.
fn leaf_group(out: &mut String, frame: &Frame, leaf: &Leaf, spec: &RenderSpec, class: &str) {
    let depth = leaf.depth.unwrap_or(0) as usize;
    let color = PALETTE[depth % PALETTE.len()];
    let _ = write!(
        out,
        "<g class=\"{class}\" stroke=\"{color}\" fill=\"none\" stroke-width=\"{}\">",
        fmt_f(spec.stroke_width)
    );
    let h = leaf.height().to_f64().min(spec.height_cap);
    let tip_r = (h * spec.height_scale).exp();
    for t in leaf.tips() {
        let (x1, y1) = frame.point(t, 1.0);
        let (x2, y2) = frame.point(t, tip_r);
        let _ = write!(
            out,
            "<path d=\"M {} {} L {} {}\"/>",
            fmt_f(x1),
            fmt_f(y1),
            fmt_f(x2),
            fmt_f(y2)
        );
    }
    let tips = leaf.tips();
    for i in 0..tips.len() {
        let a = &tips[i];
        let b = &tips[(i + 1) % tips.len()];
        if tips.len() == 2 && i == 1 {
            break; // a chord has one vein edge
        }
        let (x1, y1) = frame.point(a, 1.0);
        let (x2, y2) = frame.point(b, 1.0);
        let ta = a.to_f64() * std::f64::consts::TAU;
        let tb = b.to_f64() * std::f64::consts::TAU;
        let dot = (ta - tb).cos();
        if (dot + 1.0).abs() < 1e-12 {
            let _ = write!(
                out,
                "<path d=\"M {} {} L {} {}\"/>",
                fmt_f(x1),
                fmt_f(y1),
                fmt_f(x2),
                fmt_f(y2)
            );
        } else {
            // orthogonal circle through the two boundary points
            let r_arc = frame.r * ((1.0 - dot) / (1.0 + dot)).sqrt();
            // minor arc on the side of the disk interior: sweep by orientation
            let ccw = (tb - ta).rem_euclid(std::f64::consts::TAU) < std::f64::consts::PI;
            let sweep = if ccw { 1 } else { 0 };
            let _ = write!(
                out,
                "<path d=\"M {} {} A {} {} 0 0 {} {} {}\"/>",
                fmt_f(x1),
                fmt_f(y1),
                fmt_f(r_arc),
                fmt_f(r_arc),
                sweep,
                fmt_f(x2),
                fmt_f(y2)
            );
        }
    }
    out.push_str("</g>");
}

/// Unit circle plus one group per leaf; deterministic output.
pub fn render_elamination(leaves: &[Leaf], spec: &RenderSpec) -> String {
    let size = spec.size_px as f64;
    let frame = Frame { cx: size / 2.0, cy: size / 2.0, r: size * 0.38 };
    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        spec.size_px
    );
    let _ = write!(
        out,
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1\"/>",
        fmt_f(frame.cx),
        fmt_f(frame.cy),
        fmt_f(frame.r)
    );
    for leaf in leaves {
        if let (Some(cut), Some(d)) = (spec.depth_cutoff, leaf.depth) {
            if d > cut {
                continue;
            }
        }
        let class = if leaf.depth == Some(0) { "leaf critical" } else { "leaf" };
        leaf_group(&mut out, &frame, leaf, spec, class);
    }
    out.push_str("</svg>");
    out
}

/// Recursive schematic of the pinched disk: leaves pinched in decreasing
/// height, one at a time; every disk has radius proportional to its circle
/// length, and each split-off component becomes a child disk placed on its
/// parent at the mean angle of its arcs. Combinatorial approximation only,
/// not conformally accurate.
pub fn render_pinched_disk(leaves: &[Leaf], spec: &RenderSpec) -> Result<String> {
    use std::collections::HashMap;

    #[derive(Clone)]
    struct Disk {
        cx: f64,
        cy: f64,
        length: BigRational,
    }

    let validations = crate::leaf::validate_elamination(leaves);
    if let Some(v) = validations.first() {
        return Err(crate::error::Error::CrossingLeaves(v.to_string()));
    }

    let size = spec.size_px as f64;
    let r0 = size * 0.42;
    let radius = |len: &BigRational| (len.to_f64().unwrap_or(0.0) * r0).max(0.5);

    // disks keyed by the component's arc list (flattened tip angles)
    let key_of = |arcs: &[(Angle, Angle)]| -> Vec<Angle> {
        arcs.iter().flat_map(|(s, e)| [s.clone(), e.clone()]).collect()
    };
    let mut disks: HashMap<Vec<Angle>, Disk> = HashMap::new();
    disks.insert(
        vec![],
        Disk { cx: size / 2.0, cy: size / 2.0, length: BigRational::from_integer(1.into()) },
    );

    let mut order: Vec<&Leaf> = leaves.iter().collect();
    order.sort_by(|a, b| b.height().cmp(a.height()).then_with(|| a.tips().cmp(b.tips())));

    let mut pinched: Vec<Leaf> = Vec::new();
    for leaf in order {
        pinched.push(leaf.clone());
        let p = pinch_circle_unchecked(&pinched)?;
        // components that already have disks persist untouched; exactly one
        // old disk disappears and 1 + multiplicity new components appear
        let mut fresh: Vec<&crate::pinch::Component> = Vec::new();
        let mut seen_keys: Vec<Vec<Angle>> = Vec::new();
        for comp in &p.components {
            let key = key_of(&comp.arcs);
            if disks.contains_key(&key) {
                seen_keys.push(key);
            } else {
                fresh.push(comp);
            }
        }
        let parent_key = {
            let alive: std::collections::HashSet<&Vec<Angle>> = seen_keys.iter().collect();
            disks
                .keys()
                .find(|k| !alive.contains(k))
                .cloned()
                .ok_or_else(|| crate::error::Error::InternalAssertion("no disk split".into()))?
        };
        let parent = disks.remove(&parent_key).unwrap();
        fresh.sort_by(|a, b| b.length.cmp(&a.length).then_with(|| a.arcs.cmp(&b.arcs)));
        if fresh.is_empty() {
            disks.insert(parent_key, parent);
            continue;
        }
        let keep = fresh[0];
        let keep_r = radius(&keep.length);
        disks.insert(
            key_of(&keep.arcs),
            Disk { cx: parent.cx, cy: parent.cy, length: keep.length.clone() },
        );
        for piece in &fresh[1..] {
            let r = radius(&piece.length);
            // arc-length weighted circular mean of the piece's arcs
            let (mut vx, mut vy) = (0.0f64, 0.0f64);
            for (s, e) in &piece.arcs {
                let len = s.ccw_dist(e).to_f64().unwrap_or(0.0);
                let mid = s.to_f64() + len / 2.0;
                vx += len * (mid * std::f64::consts::TAU).cos();
                vy += len * (mid * std::f64::consts::TAU).sin();
            }
            let ang = vy.atan2(vx);
            disks.insert(
                key_of(&piece.arcs),
                Disk {
                    cx: parent.cx + (keep_r + r) * 0.98 * ang.cos(),
                    cy: parent.cy - (keep_r + r) * 0.98 * ang.sin(),
                    length: piece.length.clone(),
                },
            );
        }
    }

    let mut circles: Vec<(f64, f64, f64)> = disks
        .values()
        .map(|d| (d.cx, d.cy, radius(&d.length)))
        .collect();
    circles.sort_by(|a, b| {
        b.2.partial_cmp(&a.2)
            .unwrap()
            .then(a.0.partial_cmp(&b.0).unwrap())
            .then(a.1.partial_cmp(&b.1).unwrap())
    });

    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        spec.size_px
    );
    out.push_str(
        "<desc>schematic pinched disk; combinatorial approximation, not conformally accurate</desc>",
    );
    for (cx, cy, r) in &circles {
        let _ = write!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>",
            fmt_f(*cx),
            fmt_f(*cy),
            fmt_f(*r)
        );
    }
    out.push_str("</svg>");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Height;

    fn leaf(tips: &[(i64, i64)], h: (i64, i64), depth: u32) -> Leaf {
        Leaf::new(
            tips.iter().map(|&(n, d)| Angle::from_frac(n, d).unwrap()).collect(),
            Height::from_frac(h.0, h.1).unwrap(),
        )
        .unwrap()
        .with_meta(Some(depth), None)
    }

    #[test]
    fn empty_elamination_is_circle_only() {
        let svg = render_elamination(&[], &RenderSpec::default());
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches("<path").count(), 0);
    }

    #[test]
    fn output_is_deterministic() {
        let leaves =
            vec![leaf(&[(1, 4), (5, 12)], (1, 1), 1), leaf(&[(3, 4), (11, 12)], (1, 3), 2)];
        let a = render_elamination(&leaves, &RenderSpec::default());
        let b = render_elamination(&leaves, &RenderSpec::default());
        assert_eq!(a, b);
    }

    #[test]
    fn critical_leaves_carry_the_critical_class() {
        let leaves = vec![leaf(&[(3, 36), (15, 36)], (1, 1), 0)];
        let svg = render_elamination(&leaves, &RenderSpec::default());
        assert!(svg.contains("class=\"leaf critical\""));
    }

    #[test]
    fn single_chord_disk_radii_have_ratio_five_to_one() {
        let leaves = vec![leaf(&[(1, 4), (5, 12)], (1, 1), 1)];
        let svg = render_pinched_disk(&leaves, &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches("<circle").count(), 2);
        // radii: parent size*0.42, child size*0.42/5... extract the two radii
        let radii: Vec<f64> = svg
            .split("r=\"")
            .skip(1)
            .map(|s| s.split('"').next().unwrap().parse::<f64>().unwrap())
            .collect();
        let ratio = radii[0].max(radii[1]) / radii[0].min(radii[1]);
        assert!((ratio - 5.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn depth_zero_schematic_is_one_disk() {
        let svg = render_pinched_disk(&[], &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains("not conformally accurate"));
    }
}
