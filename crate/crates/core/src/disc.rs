//! Points of the open unit disc, Blaschke functions and the Poincaré-disc
//! arithmetic (metric, scaling, addition) the hyperbolic swarm moves with.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus a computed disc point may take. Operations whose exact
/// result lies in the disc but rounds onto the circle are pulled back here.
const MAX_MODULUS: f64 = 1.0 - 1e-12;

const SINGULARITY_EPS: f64 = 1e-14;

/// A complex number strictly inside the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub const ORIGIN: DiscPoint = DiscPoint(Complex64::new(0.0, 0.0));

    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.norm_sqr() < 1.0 {
            Ok(DiscPoint(z))
        } else {
            Err(Error::OutsideDisc { re: z.re, im: z.im })
        }
    }

    /// Polar constructor; `modulus` must be in `[0, 1)`.
    pub fn from_polar(modulus: f64, angle: f64) -> Result<Self> {
        Self::from_complex(Complex64::from_polar(modulus, angle))
    }

    /// Wraps the result of a closed disc operation. The exact value is inside
    /// the disc; floating point rounding may land it on or past the circle.
    pub(crate) fn settle(z: Complex64) -> Self {
        let r = z.norm();
        if r.is_finite() && r <= MAX_MODULUS {
            DiscPoint(z)
        } else if r.is_finite() {
            DiscPoint(z * (MAX_MODULUS / r))
        } else {
            DiscPoint(Complex64::new(0.0, 0.0))
        }
    }

    /// Radial clamp to `max_modulus` (which must be below 1).
    pub fn clamp_modulus(self, max_modulus: f64) -> Self {
        let r = self.0.norm();
        if r > max_modulus {
            DiscPoint(self.0 * (max_modulus / r))
        } else {
            self
        }
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.0.re
    }

    #[inline]
    pub fn im(self) -> f64 {
        self.0.im
    }

    #[inline]
    pub fn modulus(self) -> f64 {
        self.0.norm()
    }
}

impl From<DiscPoint> for Complex64 {
    fn from(p: DiscPoint) -> Self {
        p.0
    }
}

/// The Blaschke function `B(z, a) = (z - a) / (1 - conj(a) z)`.
pub fn blaschke(z: Complex64, a: DiscPoint) -> Result<Complex64> {
    let den = Complex64::new(1.0, 0.0) - a.0.conj() * z;
    let mag = den.norm();
    if mag < SINGULARITY_EPS {
        return Err(Error::NearSingularity(mag));
    }
    Ok((z - a.0) / den)
}

/// Blaschke function for arguments known to keep the denominator away from
/// zero (both points in the closed disc with `a` strictly inside).
#[inline]
pub(crate) fn blaschke_unchecked(z: Complex64, a: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// Parameters `(a, eps)` of the disc automorphism `t -> eps * B(t, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlaschkeParams {
    a: DiscPoint,
    eps: Complex64,
}

impl BlaschkeParams {
    pub fn new(a: DiscPoint, eps: Complex64) -> Result<Self> {
        if (eps.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnitModulus {
                re: eps.re,
                im: eps.im,
            });
        }
        Ok(Self { a, eps })
    }

    pub fn a(&self) -> DiscPoint {
        self.a
    }

    pub fn eps(&self) -> Complex64 {
        self.eps
    }

    pub fn apply(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.eps * blaschke(t, self.a)?)
    }
}

/// Hyperbolic distance `arctanh |B(z2, z1)|`.
pub fn hyp_metric(z1: DiscPoint, z2: DiscPoint) -> f64 {
    let r = blaschke_unchecked(z2.0, z1.0).norm().min(1.0);
    r.atanh()
}

/// The geodesic from `w1` to `w2` as the image of `[0, p]` under a Blaschke
/// transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypSegment {
    pub p: f64,
    pub params: BlaschkeParams,
}

pub fn hyp_segment_params(w1: DiscPoint, w2: DiscPoint) -> Result<HypSegment> {
    let b = blaschke_unchecked(w2.0, w1.0);
    let p = b.norm();
    if p.min(1.0).atanh() < 1e-14 {
        return Err(Error::DegenerateSegment);
    }
    let eps = b / p;
    let a = DiscPoint::settle(-eps.conj() * w1.0);
    Ok(HypSegment {
        p,
        params: BlaschkeParams { a, eps },
    })
}

/// Hyperbolic scaling of the vector from `w1` to `w2` by `lambda`; returns the
/// new endpoint. Negative factors reverse the direction.
pub fn hyp_scale(lambda: f64, w1: DiscPoint, w2: DiscPoint) -> DiscPoint {
    let seg = match hyp_segment_params(w1, w2) {
        Ok(seg) => seg,
        Err(_) => return w1,
    };
    let s = (lambda * seg.p.min(MAX_MODULUS).atanh()).tanh();
    let t = Complex64::new(s, 0.0);
    DiscPoint::settle(seg.params.eps * blaschke_unchecked(t, seg.params.a.0))
}

/// `lambda ⊙ w` for a vector anchored at the origin. Equivalent to
/// `hyp_scale(lambda, 0, w)` but without the Blaschke round trip.
pub fn hyp_scale_origin(lambda: f64, w: DiscPoint) -> DiscPoint {
    let r = w.0.norm();
    if r.min(1.0).atanh() < 1e-14 {
        return DiscPoint::ORIGIN;
    }
    let s = (lambda * r.min(MAX_MODULUS).atanh()).tanh();
    DiscPoint::settle(w.0 * (s / r))
}

/// Hyperbolic vector addition `(w1 + w2) / (1 + w1 conj(w2))`.
pub fn hyp_add(w1: DiscPoint, w2: DiscPoint) -> DiscPoint {
    let den = Complex64::new(1.0, 0.0) + w1.0 * w2.0.conj();
    DiscPoint::settle((w1.0 + w2.0) / den)
}

/// Hyperbolic vector subtraction `(w1 - w2) / (1 - w1 conj(w2))`.
pub fn hyp_sub(w1: DiscPoint, w2: DiscPoint) -> DiscPoint {
    let den = Complex64::new(1.0, 0.0) - w1.0 * w2.0.conj();
    DiscPoint::settle((w1.0 - w2.0) / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn d(re: f64, im: f64) -> DiscPoint {
        DiscPoint::new(re, im).unwrap()
    }

    #[test]
    fn disc_point_rejects_boundary() {
        assert!(DiscPoint::new(1.0, 0.0).is_err());
        assert!(DiscPoint::new(0.6, 0.8).is_err());
        assert!(DiscPoint::new(f64::NAN, 0.0).is_err());
        assert!(DiscPoint::new(0.6, 0.79).is_ok());
    }

    #[test]
    fn blaschke_examples() {
        let a = d(0.3, -0.2);
        assert!(blaschke(a.value(), a).unwrap().norm() < 1e-15);
        let z = c(0.1, 0.7);
        assert_eq!(blaschke(z, DiscPoint::ORIGIN).unwrap(), z);
        let v = blaschke(c(0.0, 0.0), d(0.5, 0.0)).unwrap();
        assert!((v - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn blaschke_near_singularity() {
        // 1 / conj(a) is the pole
        let a = d(0.5, 0.0);
        assert!(matches!(
            blaschke(c(2.0, 0.0), a),
            Err(Error::NearSingularity(_))
        ));
    }

    #[test]
    fn blaschke_maps_circle_to_circle() {
        let a = d(-0.4, 0.55);
        for k in 0..32 {
            let z = Complex64::from_polar(1.0, k as f64 * 0.2);
            assert!((blaschke(z, a).unwrap().norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn metric_examples() {
        let z = d(0.2, 0.3);
        assert_eq!(hyp_metric(z, z), 0.0);
        let r = hyp_metric(DiscPoint::ORIGIN, d(0.5, 0.0));
        assert!((r - 0.549_306_144_334_054_8).abs() < 1e-12);
    }

    #[test]
    fn segment_from_origin_is_radial() {
        let seg = hyp_segment_params(DiscPoint::ORIGIN, d(0.4, 0.0)).unwrap();
        assert!((seg.p - 0.4).abs() < 1e-15);
        assert!((seg.params.eps() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(seg.params.a().modulus() < 1e-15);
    }

    #[test]
    fn degenerate_segment() {
        let w = d(0.1, 0.1);
        assert!(matches!(
            hyp_segment_params(w, w),
            Err(Error::DegenerateSegment)
        ));
        assert_eq!(hyp_scale(3.0, w, w), w);
    }

    #[test]
    fn scale_examples() {
        let w1 = d(0.1, -0.3);
        let w2 = d(-0.5, 0.2);
        assert!((hyp_scale(1.0, w1, w2).value() - w2.value()).norm() < 1e-12);
        assert!((hyp_scale(0.0, w1, w2).value() - w1.value()).norm() < 1e-12);
        let v = hyp_scale(2.0, DiscPoint::ORIGIN, d(0.5, 0.0));
        assert!((v.value() - c(0.8, 0.0)).norm() < 1e-12);
        let o = hyp_scale_origin(2.0, d(0.5, 0.0));
        assert!((o.value() - c(0.8, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn negative_scale_reverses() {
        let w = d(0.3, 0.4);
        let v = hyp_scale(-1.0, DiscPoint::ORIGIN, w);
        assert!((v.value() + w.value()).norm() < 1e-12);
    }

    #[test]
    fn add_sub_examples() {
        let w = d(0.3, -0.6);
        assert_eq!(hyp_add(DiscPoint::ORIGIN, w), w);
        assert_eq!(hyp_add(w, DiscPoint::ORIGIN), w);
        assert_eq!(hyp_sub(w, w), DiscPoint::ORIGIN);
        let s = hyp_add(d(0.5, 0.0), d(0.5, 0.0));
        assert!((s.value() - c(0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn settle_pulls_rounding_back_inside() {
        let w = d(0.999_999_999_999_9, 0.0);
        let s = hyp_add(w, w);
        assert!(s.modulus() < 1.0);
    }

    #[test]
    fn blaschke_params_require_unit_eps() {
        assert!(BlaschkeParams::new(DiscPoint::ORIGIN, c(0.9, 0.0)).is_err());
        let p = BlaschkeParams::new(d(0.2, 0.0), c(0.0, 1.0)).unwrap();
        let v = p.apply(c(0.2, 0.0)).unwrap();
        assert!(v.norm() < 1e-15);
    }
}
