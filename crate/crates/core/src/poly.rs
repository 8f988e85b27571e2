//! Floating-point polynomial dynamics: normal forms, shift-locus membership,
//! the Green's function, external angles via the convergent branch product,
//! and critical data extraction by external-ray tracing.
//!
//! Double precision throughout; every reported digit is guarded by residual
//! checks rather than a priori error analysis.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ESCAPE_NORM: f64 = 1e8;
const DEFAULT_MAXITER: usize = 10_000;

/// A polynomial in normal form z^d + a_2 z^{d-2} + ... + a_d.
#[derive(Clone, Debug)]
pub struct Poly {
    /// coefficients from the leading term down: [1, 0, a_2, ..., a_d]
    pub coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn from_normal_coeffs(tail: &[Complex64]) -> Poly {
        let mut coeffs = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        coeffs.extend_from_slice(tail);
        Poly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in &self.coeffs {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Vec<Complex64> {
        let d = self.degree();
        self.coeffs[..d]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * ((d - i) as f64))
            .collect()
    }

    /// 1 + max |a_i|: outside this radius every orbit escapes monotonically.
    pub fn escape_radius(&self) -> f64 {
        1.0 + self.coeffs.iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn eval_coeffs(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        acc = acc * z + c;
    }
    acc
}

/// Conjugate an arbitrary polynomial into normal form by z -> alpha z + beta
/// with beta = -b_1/(d b_0) and alpha a principal (d-1)-st root, then zero
/// the (numerically vanishing) subleading coefficient.
pub fn normalize_poly(raw: &[Complex64]) -> Result<(Poly, Complex64, Complex64)> {
    if raw.is_empty() || raw[0].norm() == 0.0 {
        return Err(Error::ZeroLeading);
    }
    let d = raw.len() - 1;
    if d < 2 {
        return Err(Error::DegenerateParameter("degree must be >= 2".into()));
    }
    let b0 = raw[0];
    let b1 = raw[1];
    let beta = -b1 / (b0 * d as f64);
    // alpha^(d-1) b0 = 1: principal branch
    let alpha = (-b0.ln() / (d as f64 - 1.0)).exp();
    // g(z) = (f(alpha z + beta) - beta)/alpha; expand f(alpha z + beta) by
    // Horner in the shifted variable
    let mut acc: Vec<Complex64> = vec![raw[0]];
    for &c in &raw[1..] {
        let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
        for (i, &a) in acc.iter().enumerate() {
            next[i] += a * alpha;
            next[i + 1] += a * beta;
        }
        next[acc.len()] += c;
        acc = next;
    }
    let mut g: Vec<Complex64> = acc.iter().map(|&c| c / alpha).collect();
    g[d] -= beta / alpha;
    // residual checks: monic, vanishing subleading coefficient
    if (g[0] - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::InternalAssertion(format!(
            "normalization failed: leading coefficient {}",
            g[0]
        )));
    }
    if g[1].norm() > 1e-8 * (1.0 + raw.iter().map(|c| c.norm()).fold(0.0, f64::max)) {
        return Err(Error::InternalAssertion(format!(
            "normalization failed: subleading coefficient {}",
            g[1]
        )));
    }
    let mut tail = g[2..].to_vec();
    for c in tail.iter_mut() {
        if c.norm() < 1e-14 {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    Ok((Poly::from_normal_coeffs(&tail), alpha, beta))
}

/// Roots of the derivative (the critical points) by Durand-Kerner with
/// deterministic perturbation restarts; residual < 1e-12 required.
pub fn critical_points(p: &Poly) -> Result<Vec<Complex64>> {
    let der = p.derivative();
    let lead = der[0];
    let monic: Vec<Complex64> = der.iter().map(|&c| c / lead).collect();
    let n = monic.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let scale = 1.0
        + monic.iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max);
    for restart in 0..8u32 {
        let jitter = 0.4 + 0.13 * restart as f64;
        let mut roots: Vec<Complex64> = (0..n)
            .map(|k| {
                Complex64::from_polar(
                    scale * jitter,
                    std::f64::consts::TAU * (k as f64 + 0.25 + 0.1 * restart as f64)
                        / n as f64,
                )
            })
            .collect();
        let mut ok = false;
        for _ in 0..400 {
            let mut delta: f64 = 0.0;
            for i in 0..n {
                let zi = roots[i];
                let mut denom = Complex64::new(1.0, 0.0);
                for (j, &zj) in roots.iter().enumerate() {
                    if j != i {
                        denom *= zi - zj;
                    }
                }
                if denom.norm() == 0.0 {
                    delta = f64::NAN;
                    break;
                }
                let step = eval_coeffs(&monic, zi) / denom;
                roots[i] = zi - step;
                delta = delta.max(step.norm());
            }
            if !delta.is_finite() {
                break;
            }
            if delta < 1e-14 {
                ok = true;
                break;
            }
        }
        if ok
            && roots
                .iter()
                .all(|&r| eval_coeffs(&der, r).norm() < 1e-12 * lead.norm() * (1.0 + r.norm().powi(n as i32)))
        {
            roots.sort_by(|a, b| {
                (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap()
            });
            return Ok(roots);
        }
    }
    Err(Error::NumericalDegeneracy("critical-point solver did not converge".into()))
}

/// Shift-locus membership data for one critical point.
#[derive(Clone, Debug)]
pub enum Escape {
    Escapes { time: usize },
    Bounded { cycle_detected_at: usize },
    Undecided,
}

#[derive(Clone, Debug)]
pub struct Membership {
    pub is_member: bool,
    pub undecided: bool,
    pub per_critical: Vec<(Complex64, Escape)>,
}

/// Every critical orbit must escape past R within maxiter; bounded cycles
/// are classified distinctly from undecided orbits.
pub fn shift_member(p: &Poly, r: Option<f64>, maxiter: Option<usize>) -> Result<Membership> {
    let r = r.unwrap_or_else(|| p.escape_radius());
    let maxiter = maxiter.unwrap_or(DEFAULT_MAXITER);
    let crit = critical_points(p)?;
    let mut per_critical = Vec::new();
    let mut all_escape = true;
    let mut undecided = false;
    for &c in &crit {
        let mut z = c;
        let mut orbit: Vec<Complex64> = Vec::new();
        let mut out = Escape::Undecided;
        for k in 0..maxiter {
            if z.norm() > r {
                out = Escape::Escapes { time: k };
                break;
            }
            if let Some(_j) = orbit.iter().position(|&w| (w - z).norm() < 1e-12) {
                out = Escape::Bounded { cycle_detected_at: k };
                break;
            }
            if orbit.len() < 4096 {
                orbit.push(z);
            }
            z = p.eval(z);
        }
        match out {
            Escape::Escapes { .. } => {}
            Escape::Bounded { .. } => all_escape = false,
            Escape::Undecided => {
                all_escape = false;
                undecided = true;
            }
        }
        per_critical.push((c, out));
    }
    Ok(Membership { is_member: all_escape, undecided, per_critical })
}

/// Green's function h(z) = lim d^{-n} log |f^n(z)|, truncated once the orbit
/// passes 1e8; zero if the orbit never escapes.
pub fn green(p: &Poly, z: Complex64, maxiter: Option<usize>) -> f64 {
    let maxiter = maxiter.unwrap_or(DEFAULT_MAXITER);
    let d = p.degree() as f64;
    let mut w = z;
    let mut scale = 1.0f64;
    for _ in 0..maxiter {
        if w.norm() > ESCAPE_NORM {
            return w.norm().ln() * scale;
        }
        w = p.eval(w);
        scale /= d;
    }
    0.0
}

/// Max critical height.
pub fn critical_height(p: &Poly) -> Result<f64> {
    let crit = critical_points(p)?;
    Ok(crit.iter().map(|&c| green(p, c, None)).fold(0.0, f64::max))
}

/// External angle (in turns) of a point strictly above every critical
/// height, via the convergent product for the conjugacy with principal
/// branches; the functional equation is used as a runtime check.
pub fn external_angle(p: &Poly, z: Complex64) -> Result<f64> {
    let h = green(p, z, None);
    let hmax = critical_height(p)?;
    if h <= hmax {
        return Err(Error::BelowCriticalHeight { h, hmax });
    }
    let theta = external_angle_unchecked(p, z);
    // runtime check: theta(f(z)) = d * theta(z) mod 1
    let t_up = external_angle_unchecked(p, p.eval(z));
    let d = p.degree() as f64;
    let diff = (d * theta - t_up).rem_euclid(1.0);
    let err = diff.min(1.0 - diff);
    if err > 1e-8 {
        return Err(Error::InternalAssertion(format!(
            "functional equation drift {err:.3e} in the external angle"
        )));
    }
    Ok(theta)
}

fn external_angle_unchecked(p: &Poly, z: Complex64) -> f64 {
    let d = p.degree() as f64;
    let mut w = z;
    let mut theta = w.arg() / std::f64::consts::TAU;
    let mut weight = 1.0f64;
    for _ in 0..64 {
        let fw = p.eval(w);
        let ratio = fw / w.powi(p.degree() as i32);
        weight /= d;
        theta += ratio.arg() / std::f64::consts::TAU * weight;
        w = fw;
        if w.norm() > 1e14 {
            break;
        }
    }
    theta.rem_euclid(1.0)
}

fn newton_inverse(p: &Poly, target: Complex64, guess: Complex64) -> Result<Complex64> {
    let der = p.derivative();
    let mut x = guess;
    for _ in 0..80 {
        let fx = p.eval(x) - target;
        if fx.norm() < 1e-13 * (1.0 + target.norm()) {
            return Ok(x);
        }
        let dfx = eval_coeffs(&der, x);
        if dfx.norm() == 0.0 {
            return Err(Error::RayTraceFailure("Newton hit a critical point".into()));
        }
        x -= fx / dfx;
        if !x.re.is_finite() || !x.im.is_finite() {
            return Err(Error::RayTraceFailure("Newton diverged".into()));
        }
    }
    Err(Error::RayTraceFailure("Newton did not converge".into()))
}

/// Trace the external ray at `theta` from large radius down to potential
/// `h_stop`, maintaining the tower of forward images for continuity: the
/// point at height h is the f-preimage of the point at height d*h on the
/// ray at angle d*theta.
fn trace_ray(p: &Poly, theta: f64, h_stop: f64) -> Result<Complex64> {
    let d = p.degree() as f64;
    let s_big = (1e9f64).ln();
    let levels_for = |h: f64| -> usize {
        let mut k = 0usize;
        while d.powi(k as i32) * h < s_big {
            k += 1;
        }
        k
    };
    let polar_guess = |h: f64, j: usize| -> Complex64 {
        Complex64::from_polar(
            (d.powi(j as i32) * h).exp(),
            std::f64::consts::TAU * (theta * d.powi(j as i32)).rem_euclid(1.0),
        )
    };
    let rebuild = |h: f64, old: Option<(&[Complex64], f64)>| -> Result<Vec<Complex64>> {
        let k = levels_for(h);
        let mut pts = vec![Complex64::new(0.0, 0.0); k + 1];
        pts[k] = polar_guess(h, k);
        for j in (0..k).rev() {
            let guess = match old {
                Some((prev, _)) if j < prev.len() => prev[j],
                _ => polar_guess(h, j),
            };
            let x = newton_inverse(p, pts[j + 1], guess)?;
            // guard against branch jumps relative to the continuation guess
            if (x - guess).norm() > 0.8 * (1.0 + guess.norm()) {
                return Err(Error::RayTraceFailure("ray jumped between branches".into()));
            }
            pts[j] = x;
        }
        Ok(pts)
    };

    let mut h = (1e6f64).ln().max(2.0 * h_stop);
    let mut pts = rebuild(h, None)?;
    let mut factor = 0.7f64;
    while h > h_stop {
        let target_h = (h * factor).max(h_stop);
        match rebuild(target_h, Some((&pts, h))) {
            Ok(next) => {
                pts = next;
                h = target_h;
                factor = 0.7;
            }
            Err(_) if factor < 0.99999 => {
                factor = factor.sqrt();
            }
            Err(e) => return Err(e),
        }
    }
    Ok(pts[0])
}

#[derive(Clone, Debug)]
pub struct CriticalDatum {
    pub point: Complex64,
    pub multiplicity: usize,
    pub height: f64,
    pub angles: Vec<f64>,
    pub escape_time: usize,
}

#[derive(Clone, Debug)]
pub struct CriticalData {
    pub per_critical: Vec<CriticalDatum>,
}

/// Heights, escape times and external-angle sets of the critical points:
/// among the d preimage angles of theta(f(c)), keep those whose rays land
/// at c.
pub fn critical_data(p: &Poly) -> Result<CriticalData> {
    let membership = shift_member(p, None, None)?;
    if !membership.is_member {
        return Err(Error::DegenerateParameter(
            "critical data needs every critical point to escape".into(),
        ));
    }
    let d = p.degree();
    let mut crit = critical_points(p)?;
    // group multiple roots
    let mut grouped: Vec<(Complex64, usize)> = Vec::new();
    crit.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    for c in crit {
        match grouped.last_mut() {
            Some((prev, mult)) if (*prev - c).norm() < 1e-7 => *mult += 1,
            _ => grouped.push((c, 1)),
        }
    }
    let min_sep = grouped
        .iter()
        .enumerate()
        .flat_map(|(i, &(a, _))| {
            grouped[i + 1..].iter().map(move |&(b, _)| (a - b).norm())
        })
        .fold(f64::INFINITY, f64::min)
        .min(1.0);
    let mut out = Vec::new();
    for &(c, mult) in &grouped {
        let h = green(p, c, None);
        let escape_time = match membership
            .per_critical
            .iter()
            .find(|(w, _)| (w - c).norm() < 1e-7)
        {
            Some((_, Escape::Escapes { time })) => *time,
            _ => 0,
        };
        let up_angle = external_angle(p, p.eval(c))?;
        // descend through h(1+1e-3) all the way to h(1+1e-10): the adjacent
        // rays end within the 1e-4 * injectivity-radius tolerance there
        let h_stop = h * (1.0 + 1e-10);
        let tol = 1e-4 * min_sep;
        let mut angles = Vec::new();
        let mut distances = Vec::new();
        for k in 0..d {
            let theta = ((up_angle + k as f64) / d as f64).rem_euclid(1.0);
            match trace_ray(p, theta, h_stop) {
                Ok(end) => {
                    let dist = (end - c).norm();
                    distances.push(dist);
                    if dist < tol {
                        angles.push((theta, dist));
                    }
                }
                Err(_) => distances.push(f64::INFINITY),
            }
        }
        if angles.len() != mult + 1 {
            return Err(Error::RayTraceFailure(format!(
                "critical point {c}: {} adjacent rays found, expected {} (distances {distances:?})",
                angles.len(),
                mult + 1
            )));
        }
        // tie guard: accepted rays must be separated from the rejected ones
        let worst_in = angles.iter().map(|a| a.1).fold(0.0, f64::max);
        let best_out = distances
            .iter()
            .filter(|&&x| x >= tol)
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if best_out < 50.0 * worst_in {
            return Err(Error::RayTraceFailure(format!(
                "critical point {c}: ambiguous ray landing ({worst_in:.2e} vs {best_out:.2e})"
            )));
        }
        let mut angles: Vec<f64> = angles.into_iter().map(|a| a.0).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.push(CriticalDatum { point: c, multiplicity: mult, height: h, angles, escape_time });
    }
    Ok(CriticalData { per_critical: out })
}

/// The worked cubic f(z) = z^3 + 3z + 3^{-1/2}.
pub fn worked_example_cubic() -> Poly {
    Poly::from_normal_coeffs(&[
        Complex64::new(3.0, 0.0),
        Complex64::new(1.0 / 3.0f64.sqrt(), 0.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn normalize_fixes_leading_and_subleading() {
        // 2z^2 -> z^2
        let raw = vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let (p, _, _) = normalize_poly(&raw).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(p.coeffs[2].norm() < 1e-12);
    }

    #[test]
    fn normalize_is_a_conjugacy() {
        // alpha z (z-1)^2 with alpha = 10: raw coefficients 10, -20, 10, 0
        let raw = vec![
            Complex64::new(10.0, 0.0),
            Complex64::new(-20.0, 0.0),
            Complex64::new(10.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let (g, alpha, beta) = normalize_poly(&raw).unwrap();
        // check f(alpha z + beta) = alpha g(z) + beta at sample points
        for &z in &[
            Complex64::new(0.3, 0.7),
            Complex64::new(-1.2, 0.4),
            Complex64::new(2.0, -0.5),
        ] {
            let lhs = eval_coeffs(&raw, alpha * z + beta);
            let rhs = alpha * g.eval(z) + beta;
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn worked_cubic_critical_points_are_plus_minus_i() {
        let p = worked_example_cubic();
        let crit = critical_points(&p).unwrap();
        assert_eq!(crit.len(), 2);
        let i = Complex64::new(0.0, 1.0);
        assert!(crit.iter().any(|&c| (c - i).norm() < 1e-10));
        assert!(crit.iter().any(|&c| (c + i).norm() < 1e-10));
    }

    #[test]
    fn worked_cubic_is_a_shift_polynomial() {
        let p = worked_example_cubic();
        let m = shift_member(&p, None, None).unwrap();
        assert!(m.is_member);
        // forward orbit passes through -23 * 3^(-3/2)
        let i = Complex64::new(0.0, 1.0);
        let f2i = p.eval(p.eval(i));
        assert!(close(f2i.re, -23.0 / 27.0f64.sqrt(), 1e-12));
        assert!(close(f2i.im, 0.0, 1e-12));
    }

    #[test]
    fn cantor_non_shift_example() {
        // 10 z (z-1)^2: critical point 1 maps to the fixed point 0
        let raw = vec![
            Complex64::new(10.0, 0.0),
            Complex64::new(-20.0, 0.0),
            Complex64::new(10.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let (p, _, _) = normalize_poly(&raw).unwrap();
        let m = shift_member(&p, None, None).unwrap();
        assert!(!m.is_member);
        assert!(!m.undecided);
    }

    #[test]
    fn scaled_discriminant_complement_is_shift() {
        // 100 (z^3 - z)
        let raw = vec![
            Complex64::new(100.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-100.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let (p, _, _) = normalize_poly(&raw).unwrap();
        let m = shift_member(&p, None, None).unwrap();
        assert!(m.is_member);
    }

    #[test]
    fn pure_power_is_not_shift() {
        let p = Poly::from_normal_coeffs(&[Complex64::new(0.0, 0.0)]); // z^2
        let m = shift_member(&p, None, None).unwrap();
        assert!(!m.is_member);
    }

    #[test]
    fn green_functional_equation() {
        let p = worked_example_cubic();
        for &z in &[
            Complex64::new(2.0, 1.0),
            Complex64::new(-1.5, 2.5),
            Complex64::new(0.0, 3.0),
        ] {
            let h = green(&p, z, None);
            let hf = green(&p, p.eval(z), None);
            assert!(close(hf, 3.0 * h, 1e-9), "{hf} vs {}", 3.0 * h);
        }
    }

    #[test]
    fn green_of_pure_power_is_log() {
        let p = Poly::from_normal_coeffs(&[Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]); // z^3... wait: tail [a2, a3] = [0, 0]
        for &z in &[Complex64::new(1.5, 0.3), Complex64::new(0.0, 2.0)] {
            assert!(close(green(&p, z, None), z.norm().ln(), 1e-12));
        }
    }

    #[test]
    fn external_angle_of_pure_power_is_arg() {
        let p = Poly::from_normal_coeffs(&[Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]);
        let z = Complex64::from_polar(2.0, 1.234);
        let theta = external_angle(&p, z).unwrap();
        assert!(close(theta, 1.234 / std::f64::consts::TAU, 1e-12));
    }

    #[test]
    fn worked_cubic_angles() {
        let p = worked_example_cubic();
        let i = Complex64::new(0.0, 1.0);
        let t1 = external_angle(&p, p.eval(i)).unwrap();
        assert!(close(t1, 1.0 / 6.0, 1e-6), "theta(f(i)) = {t1}");
        let t2 = external_angle(&p, p.eval(p.eval(i))).unwrap();
        assert!(close(t2, 0.5, 1e-6), "theta(f^2(i)) = {t2}");
        // |phi(i)| ~ 1.18
        let h = green(&p, i, None);
        assert!(close(h.exp(), 1.18, 0.01), "|phi(i)| = {}", h.exp());
    }

    #[test]
    fn worked_cubic_critical_angle_set() {
        let p = worked_example_cubic();
        let data = critical_data(&p).unwrap();
        let at_i = data
            .per_critical
            .iter()
            .find(|d| (d.point - Complex64::new(0.0, 1.0)).norm() < 1e-8)
            .unwrap();
        assert_eq!(at_i.angles.len(), 2);
        assert!(close(at_i.angles[0], 1.0 / 18.0, 1e-6), "{:?}", at_i.angles);
        assert!(close(at_i.angles[1], 7.0 / 18.0, 1e-6), "{:?}", at_i.angles);
        // the two angles differ by k/d
        let diff = (at_i.angles[1] - at_i.angles[0]).rem_euclid(1.0);
        assert!(close(diff * 3.0, (diff * 3.0).round(), 1e-9));
    }

    #[test]
    fn below_critical_height_rejected() {
        let p = worked_example_cubic();
        // a point well inside: the fixed region near the origin
        let z = Complex64::new(0.01, 0.0);
        assert!(matches!(
            external_angle(&p, z),
            Err(Error::BelowCriticalHeight { .. })
        ));
    }

    #[test]
    fn heights_stable_under_doubling_maxiter() {
        let p = worked_example_cubic();
        let i = Complex64::new(0.0, 1.0);
        let h1 = green(&p, i, Some(DEFAULT_MAXITER));
        let h2 = green(&p, i, Some(2 * DEFAULT_MAXITER));
        assert!(close(h1, h2, 1e-9));
    }
}
