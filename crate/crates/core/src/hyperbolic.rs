//! Upper half-plane model of the hyperbolic plane: the metric, the Mobius
//! action of unit-determinant 2x2 real matrices, and uniform sampling from
//! hyperbolic disks.

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Significand bits carried by ordinary `HPoint` arithmetic.
pub const BASE_PRECISION_BITS: u32 = 53;
/// Significand bits of the extended (double-double) kernel the Gauss
/// reduction escalates to when f64 cannot certify its postcondition.
pub const EXTENDED_PRECISION_BITS: u32 = 106;

/// A point of the upper half-plane: re + i*im with im > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    re: f64,
    im: f64,
}

impl HPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::NotInHalfPlane(im));
        }
        Ok(Self { re, im })
    }

    /// The base point i.
    pub fn i() -> Self {
        Self { re: 0.0, im: 1.0 }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    /// Squared Euclidean modulus re^2 + im^2.
    pub fn norm_sq(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    /// Euclidean distance to another point (used for tolerance checks).
    pub fn euclid_dist(&self, other: &HPoint) -> f64 {
        (self.re - other.re).hypot(self.im - other.im)
    }
}

/// Polar coordinates around a disk center: hyperbolic radius and angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarHPoint {
    pub r: f64,
    pub theta: f64,
}

/// A real 2x2 matrix of determinant 1 acting by z -> (az + b)/(cz + d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mobius {
    const DET_TOL: f64 = 1e-9;

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).abs() > Self::DET_TOL {
            return Err(Error::NotUnimodular(det));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    /// The rotation [[cos phi, sin phi], [-sin phi, cos phi]] stabilizing i.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self {
            a: c,
            b: s,
            c: -s,
            d: c,
        }
    }

    /// The unique upper-triangular unit-determinant matrix taking i to `to`:
    /// [[sqrt(im), re/sqrt(im)], [0, 1/sqrt(im)]].
    pub fn translate_i_to(to: &HPoint) -> Self {
        let s = to.im.sqrt();
        Self {
            a: s,
            b: to.re / s,
            c: 0.0,
            d: 1.0 / s,
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        // For det 1 the adjugate is the inverse.
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Apply the linear fractional transformation. The image of the upper
    /// half-plane stays in the upper half-plane, so this cannot fail.
    pub fn apply(&self, z: &HPoint) -> HPoint {
        let num_re = self.a * z.re + self.b;
        let num_im = self.a * z.im;
        let den_re = self.c * z.re + self.d;
        let den_im = self.c * z.im;
        let den = den_re * den_re + den_im * den_im;
        HPoint {
            re: (num_re * den_re + num_im * den_im) / den,
            im: (num_im * den_re - num_re * den_im) / den,
        }
    }
}

impl std::ops::Mul for Mobius {
    type Output = Mobius;
    fn mul(self, rhs: Mobius) -> Mobius {
        Mobius {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

/// Apply a Mobius matrix to a point (free-function form of [`Mobius::apply`]).
pub fn mobius_apply(m: &Mobius, z: &HPoint) -> HPoint {
    m.apply(z)
}

/// Hyperbolic distance acosh(1 + |z-w|^2 / (2 im(z) im(w))).
///
/// The acosh argument is >= 1 exactly; it is clamped against sub-ulp
/// rounding before evaluation.
pub fn hdist(z: &HPoint, w: &HPoint) -> f64 {
    let dre = z.re - w.re;
    let dim = z.im - w.im;
    let arg = 1.0 + (dre * dre + dim * dim) / (2.0 * z.im * w.im);
    arg.max(1.0).acosh()
}

/// Uniform polar sample from the hyperbolic disk of radius `radius`:
/// the area of a disk of radius r is 2 pi (cosh r - 1), so the radius is
/// acosh(1 + u (cosh R - 1)) and the angle is uniform.
pub fn pick_hyperbolic(radius: f64, stream: &mut RandomStream) -> PolarHPoint {
    assert!(radius > 0.0 && radius.is_finite());
    let x = (radius.cosh() - 1.0) * stream.uniform();
    PolarHPoint {
        r: (x + 1.0).acosh(),
        theta: 2.0 * std::f64::consts::PI * stream.uniform(),
    }
}

/// Place a polar sample in the half-plane as a concrete point around i:
/// z = K_{theta/2} (i e^r), where K_phi is the rotation stabilizing i.
///
/// The stabilizer rotates the tangent circle at i by twice its parameter,
/// so the half-angle makes theta in [0, 2 pi) sweep the boundary once.
pub fn halfplane_point(polar: &PolarHPoint) -> HPoint {
    let along_axis = HPoint {
        re: 0.0,
        im: polar.r.exp(),
    };
    Mobius::rotation(0.5 * polar.theta).apply(&along_axis)
}

/// Uniform random point in the hyperbolic disk of radius `radius` about i.
pub fn pick_halfplane(radius: f64, stream: &mut RandomStream) -> HPoint {
    halfplane_point(&pick_hyperbolic(radius, stream))
}
