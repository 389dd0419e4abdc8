//! Disks in the plane and the lune/lens regions cut out by two of them.

use crate::num::{gauss_legendre_on, smoothed_gauss_legendre};
use crate::{LabError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    radius: f64,
    center: [f64; 2],
}

impl Default for Disk {
    fn default() -> Self {
        Disk::unit_area()
    }
}

impl Disk {
    pub fn new(radius: f64, center: [f64; 2]) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.iter().all(|c| c.is_finite()) {
            return Err(LabError::input(format!("disk needs a positive radius and finite center, got r = {radius}, c = {center:?}")));
        }
        Ok(Disk { radius, center })
    }

    /// The origin-centred disk of area one, radius `1/√π`.
    pub fn unit_area() -> Self {
        Disk { radius: 1.0 / PI.sqrt(), center: [0.0, 0.0] }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let dx = p[0] - self.center[0];
        let dy = p[1] - self.center[1];
        dx * dx + dy * dy <= self.radius * self.radius
    }

    pub fn translate(&self, t: [f64; 2]) -> Disk {
        Disk { radius: self.radius, center: [self.center[0] + t[0], self.center[1] + t[1]] }
    }

    /// Concentric copy with radius scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Disk> {
        Disk::new(self.radius * factor, self.center)
    }
}

/// Area of `D \ (D + t)` for a disk of radius `r` and `|t| = d`.
pub fn disk_lune_area(r: f64, d: f64) -> Result<f64> {
    if !(r > 0.0) || !(d >= 0.0) || !r.is_finite() || !d.is_finite() {
        return Err(LabError::input(format!("lune area needs r > 0 and d ≥ 0, got r = {r}, d = {d}")));
    }
    if d >= 2.0 * r {
        return Ok(PI * r * r);
    }
    let lens = 2.0 * r * r * (d / (2.0 * r)).acos() - 0.5 * d * (4.0 * r * r - d * d).sqrt();
    Ok((PI * r * r - lens).max(0.0))
}

/// Area of the intersection of disks with radii `r1`, `r2` and centre distance `d`.
fn lens_area(r1: f64, r2: f64, d: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return PI * r * r;
    }
    let a1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0).acos();
    let a2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0).acos();
    let k = ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)).max(0.0).sqrt();
    r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * k
}

/// The set of `ρ ≥ 0` with `origin + ρ(cos φ, sin φ)` inside `disk`, if any.
pub fn ray_chord(disk: &Disk, origin: [f64; 2], phi: f64) -> Option<(f64, f64)> {
    let cx = disk.center[0] - origin[0];
    let cy = disk.center[1] - origin[1];
    let (s, c) = phi.sin_cos();
    let b = c * cx + s * cy;
    let q = cx * cx + cy * cy - disk.radius * disk.radius;
    let disc = b * b - q;
    if disc <= 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let hi = b + root;
    if hi <= 0.0 {
        return None;
    }
    // the smaller root via the product q = lo·hi avoids cancellation
    let lo = (q / hi).max(0.0);
    Some((lo, hi))
}

/// Radial extent of a region along one ray, an interval of `ρ` or nothing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialSet {
    pub lo: f64,
    pub hi: f64,
}

impl RadialSet {
    fn from_bounds(lo: f64, hi: f64) -> Option<Self> {
        (hi > lo).then_some(RadialSet { lo, hi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// `base \ other`.
    Lune,
    /// `base ∩ other`.
    Lens,
}

/// A region built from two disks, integrated in polar coordinates about the
/// centre of `other`.
///
/// Along a ray from that centre, `other` is `[0, r_other]` and `base` is a
/// chord, so the lune and the lens are single radial intervals. The angular
/// range is cut where the two circles cross and where rays are tangent to
/// `base`; on each piece the radial limits are smooth apart from square-root
/// behaviour at the ends, which the smoothed angular rule absorbs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoDiskRegion {
    pub base: Disk,
    pub other: Disk,
    pub kind: RegionKind,
}

impl TwoDiskRegion {
    pub fn new(base: Disk, other: Disk, kind: RegionKind) -> Self {
        TwoDiskRegion { base, other, kind }
    }

    fn offset(&self) -> (f64, f64) {
        let dx = self.base.center[0] - self.other.center[0];
        let dy = self.base.center[1] - self.other.center[1];
        (dx.hypot(dy), dy.atan2(dx))
    }

    /// Exact area.
    pub fn area(&self) -> f64 {
        let (d, _) = self.offset();
        let lens = lens_area(self.base.radius, self.other.radius, d);
        match self.kind {
            RegionKind::Lens => lens,
            RegionKind::Lune => (self.base.area() - lens).max(0.0),
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let inside_other = self.other.contains(p);
        self.base.contains(p)
            && match self.kind {
                RegionKind::Lune => !inside_other,
                RegionKind::Lens => inside_other,
            }
    }

    /// Radial interval of the region along the ray at angle `phi`.
    pub fn radial_set(&self, phi: f64) -> Option<RadialSet> {
        let (lo, hi) = ray_chord(&self.base, self.other.center, phi)?;
        let r = self.other.radius;
        match self.kind {
            RegionKind::Lune => RadialSet::from_bounds(lo.max(r), hi),
            RegionKind::Lens => RadialSet::from_bounds(lo, hi.min(r)),
        }
    }

    /// Sorted angular breakpoints in `[φ₀, φ₀ + 2π]`.
    fn angular_breaks(&self) -> Vec<f64> {
        let (d, psi) = self.offset();
        let (rb, ro) = (self.base.radius, self.other.radius);
        let start = psi - PI;
        let mut breaks = vec![start, start + TAU];
        if d > 0.0 {
            let cos_cross = (ro * ro + d * d - rb * rb) / (2.0 * ro * d);
            if cos_cross.abs() < 1.0 {
                let a = cos_cross.acos();
                breaks.extend([psi - a, psi + a]);
            }
            // origin on or near the boundary of base still has tangent rays
            if d >= rb * (1.0 - 1e-9) {
                let a = (rb / d).min(1.0).asin();
                breaks.extend([psi - a, psi + a]);
            }
        }
        for b in breaks.iter_mut().skip(2) {
            *b = start + (*b - start).rem_euclid(TAU);
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        breaks
    }

    /// Quadrature nodes `(point, weight)` for integrals over the region.
    ///
    /// `angular_nodes` is shared among the non-empty angular pieces in
    /// proportion to their width (at least 8 each); every ray gets
    /// `radial_nodes` Gauss–Legendre points.
    pub fn quadrature_nodes(&self, radial_nodes: usize, angular_nodes: usize) -> Vec<([f64; 2], f64)> {
        let breaks = self.angular_breaks();
        let pieces: Vec<(f64, f64)> = breaks
            .windows(2)
            .map(|w| (w[0], w[1]))
            .filter(|&(a, b)| b - a > 1e-14 && self.radial_set(0.5 * (a + b)).is_some())
            .collect();
        let total: f64 = pieces.iter().map(|(a, b)| b - a).sum();
        let [ox, oy] = self.other.center;
        let mut nodes = Vec::new();
        for (a, b) in pieces {
            let count = ((angular_nodes as f64 * (b - a) / total).round() as usize).max(8);
            for (phi, wphi) in smoothed_gauss_legendre(a, b, count) {
                let Some(rs) = self.radial_set(phi) else { continue };
                let (s, c) = phi.sin_cos();
                for (rho, wrho) in gauss_legendre_on(rs.lo, rs.hi, radial_nodes) {
                    nodes.push(([ox + rho * c, oy + rho * s], wphi * wrho * rho));
                }
            }
        }
        nodes
    }

    pub fn integrate<F: Fn([f64; 2]) -> f64>(&self, f: F, radial_nodes: usize, angular_nodes: usize) -> f64 {
        self.quadrature_nodes(radial_nodes, angular_nodes).iter().map(|&(p, w)| w * f(p)).sum()
    }
}
