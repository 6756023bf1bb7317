//! Near-uniform sampling from { A in SL(2,Z) : ||A||_F <= X }.
//!
//! The fancy sampler draws a uniform point from a hyperbolic disk around i,
//! Gauss-reduces it to the fundamental domain while accumulating the
//! reducing matrix, and keeps the matrix when its norm is within the bound.
//! The naive rejection sampler and an exhaustive enumeration oracle provide
//! exact ground truth at desk scale.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::hyperbolic::{pick_halfplane, HPoint};
use crate::lattice::pick_matrix;
use crate::rng::RandomStream;

/// Exact integer 2x2 matrix; unit determinant for group elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2Z {
    pub const IDENTITY: Mat2Z = Mat2Z {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    /// The inversion z -> -1/z.
    pub const S: Mat2Z = Mat2Z {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };

    /// The translation z -> z + q.
    pub fn translation(q: i64) -> Mat2Z {
        Mat2Z {
            a: 1,
            b: q,
            c: 0,
            d: 1,
        }
    }

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Mat2Z {
        Mat2Z { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        let det = self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128;
        det.try_into().expect("determinant overflows i64")
    }

    /// Exact squared Frobenius norm a^2 + b^2 + c^2 + d^2.
    pub fn frobenius_norm_sq(&self) -> u128 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|&e| (e as i128 * e as i128) as u128)
            .sum()
    }

    pub fn neg(&self) -> Mat2Z {
        Mat2Z {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    /// Inverse of a determinant-1 matrix (the adjugate).
    pub fn inverse(&self) -> Mat2Z {
        debug_assert_eq!(self.det(), 1);
        Mat2Z {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn mul(&self, rhs: &Mat2Z) -> Mat2Z {
        let prod = |x: i64, y: i64, z: i64, w: i64| -> i64 {
            (x as i128 * y as i128 + z as i128 * w as i128)
                .try_into()
                .expect("matrix product entry overflows i64")
        };
        Mat2Z {
            a: prod(self.a, rhs.a, self.b, rhs.c),
            b: prod(self.a, rhs.b, self.b, rhs.d),
            c: prod(self.c, rhs.a, self.d, rhs.c),
            d: prod(self.c, rhs.b, self.d, rhs.d),
        }
    }

    /// Apply the Mobius action to a half-plane point.
    ///
    /// Computed in extended (106-bit) precision: integer entries are exact
    /// there, so the result is faithful to the last f64 bit even when the
    /// entries are large and the naive formula would cancel catastrophically.
    pub fn apply(&self, z: &HPoint) -> HPoint {
        let re = Dd::from_f64(z.re());
        let im = Dd::from_f64(z.im());
        let (a, b) = (dd_from_i64(self.a), dd_from_i64(self.b));
        let (c, d) = (dd_from_i64(self.c), dd_from_i64(self.d));
        let num_re = a * re + b;
        let num_im = a * im;
        let den_re = c * re + d;
        let den_im = c * im;
        let den = den_re.sqr() + den_im.sqr();
        let out_re = (num_re * den_re + num_im * den_im) / den;
        let out_im = (num_im * den_re - num_re * den_im) / den;
        HPoint::new(out_re.to_f64(), out_im.to_f64())
            .expect("determinant-1 action preserves the half-plane")
    }
}

#[inline]
fn dd_from_i64(x: i64) -> Dd {
    // Exact two-word split for |x| beyond 2^53.
    let hi = x as f64;
    let lo = (x - hi as i64) as f64;
    Dd::from_f64(hi) + lo
}

/// Result of Gauss reduction: the reducing matrix and the reduced point,
/// with point = matrix . input.
#[derive(Debug, Clone)]
pub struct ReducedPair {
    pub matrix: Mat2Z,
    pub point: HPoint,
}

/// Hyperbolic distance d(i, A i) = acosh(||A||^2 / 2); equals 2 ln x for the
/// large singular value x of A.
pub fn translation_distance(m: &Mat2Z) -> f64 {
    let norm_sq = m.frobenius_norm_sq() as f64;
    (norm_sq / 2.0).max(1.0).acosh()
}

/// The large singular value x >= 1 of a unit-determinant 2x2 matrix. The
/// singular values are (x, 1/x), so ||A||^2 = x^2 + 1/x^2 and A moves i by
/// hyperbolic distance 2 ln x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularProfile {
    x: f64,
}

impl SingularProfile {
    pub fn of(m: &Mat2Z) -> SingularProfile {
        debug_assert_eq!(m.det().abs(), 1);
        // x^2 + 1/x^2 = ||A||^2 solves to x^2 = (||A||^2 + sqrt(||A||^4 - 4)) / 2.
        let norm_sq = m.frobenius_norm_sq() as f64;
        let x_sq = 0.5 * (norm_sq + (norm_sq * norm_sq - 4.0).max(0.0).sqrt());
        SingularProfile { x: x_sq.sqrt().max(1.0) }
    }

    pub fn large_singular_value(&self) -> f64 {
        self.x
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + 1.0 / (self.x * self.x)
    }

    pub fn translation_distance(&self) -> f64 {
        2.0 * self.x.ln()
    }
}

// ---------------------------------------------------------------------------
// Gauss reduction kernel, generic over the working scalar.
// ---------------------------------------------------------------------------

trait Scalar: Copy {
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sub_i64(self, q: i64) -> Self;
    fn neg(self) -> Self;
    fn sqr(self) -> Self;
    fn add(self, o: Self) -> Self;
    fn div(self, o: Self) -> Self;
    fn ge(self, c: f64) -> bool;
    fn gt(self, c: f64) -> bool;
    fn lt(self, c: f64) -> bool;
    fn eq_one(self) -> bool;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sub_i64(self, q: i64) -> Self {
        self - q as f64
    }
    fn neg(self) -> Self {
        -self
    }
    fn sqr(self) -> Self {
        self * self
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn ge(self, c: f64) -> bool {
        self >= c
    }
    fn gt(self, c: f64) -> bool {
        self > c
    }
    fn lt(self, c: f64) -> bool {
        self < c
    }
    fn eq_one(self) -> bool {
        self == 1.0
    }
}

impl Scalar for Dd {
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn sub_i64(self, q: i64) -> Self {
        self - dd_from_i64(q)
    }
    fn neg(self) -> Self {
        -self
    }
    fn sqr(self) -> Self {
        Dd::sqr(self)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn ge(self, c: f64) -> bool {
        self >= Dd::from_f64(c)
    }
    fn gt(self, c: f64) -> bool {
        self > Dd::from_f64(c)
    }
    fn lt(self, c: f64) -> bool {
        self < Dd::from_f64(c)
    }
    fn eq_one(self) -> bool {
        self == Dd::ONE
    }
}

/// Translate re into [-1/2, 1/2), returning the shifted value and the
/// integer removed. Ties at half-integers shift so the remainder lands on
/// the -1/2 edge of the interval, matching the domain convention.
fn split_translation<S: Scalar>(re: S) -> (S, i64) {
    let mut q = (re.to_f64() + 0.5).floor() as i64;
    let mut shifted = re.sub_i64(q);
    while shifted.ge(0.5) {
        q += 1;
        shifted = re.sub_i64(q);
    }
    while shifted.lt(-0.5) {
        q -= 1;
        shifted = re.sub_i64(q);
    }
    (shifted, q)
}

struct RawReduction<S> {
    matrix: [i128; 4], // row-major a, b, c, d
    re: S,
    im: S,
    inversions: u32,
}

/// Core loop: alternate integer translations with the inversion z -> -1/z,
/// accumulating the reducing matrix, until the point lies in
/// { |Re z| <= 1/2, |z| >= 1 } with the deterministic boundary convention
/// Re in [-1/2, 1/2) and Re <= 0 on the unit circle.
fn reduce_core<S: Scalar>(z: &HPoint, cap: u32) -> Result<RawReduction<S>> {
    let mut re = S::from_f64(z.re());
    let mut im = S::from_f64(z.im());
    let mut m: [i128; 4] = [1, 0, 0, 1];
    let mut inversions = 0u32;
    loop {
        let (shifted, q) = split_translation(re);
        re = shifted;
        if q != 0 {
            // [[1, -q], [0, 1]] * m
            m[0] -= q as i128 * m[2];
            m[1] -= q as i128 * m[3];
        }
        let norm_sq = re.sqr().add(im.sqr());
        if norm_sq.ge(1.0) {
            // On the unit circle, prefer the representative with Re <= 0.
            if norm_sq.eq_one() && re.gt(0.0) {
                re = re.neg();
                m = [-m[2], -m[3], m[0], m[1]];
            }
            return Ok(RawReduction {
                matrix: m,
                re,
                im,
                inversions,
            });
        }
        re = re.neg().div(norm_sq);
        im = im.div(norm_sq);
        m = [-m[2], -m[3], m[0], m[1]];
        inversions += 1;
        if inversions > cap {
            return Err(Error::ReductionCap(cap));
        }
    }
}

/// Iteration cap 64 + 8 ceil(log2 X_eq), where X_eq is the norm bound whose
/// disk reaches the input point: cosh d(i, z) = (|z|^2 + 1) / (2 im z).
fn iteration_cap(z: &HPoint) -> u32 {
    let cosh_d = (z.norm_sq() + 1.0) / (2.0 * z.im());
    let x_eq = (2.0 * cosh_d).sqrt().max(2.0);
    64 + 8 * (x_eq.log2().ceil() as u32)
}

fn to_mat2z(m: &[i128; 4]) -> Result<Mat2Z> {
    let conv = |x: i128| i64::try_from(x).map_err(|_| Error::EntryOverflow);
    Ok(Mat2Z {
        a: conv(m[0])?,
        b: conv(m[1])?,
        c: conv(m[2])?,
        d: conv(m[3])?,
    })
}

/// Residual |A z - z0| computed in extended precision; the certification
/// measure for a candidate reduction.
fn residual(matrix: &Mat2Z, z: &HPoint, z0_re: f64, z0_im: f64) -> f64 {
    let image = matrix.apply(z);
    (image.re() - z0_re).hypot(image.im() - z0_im)
}

const VERIFY_TOL: f64 = 1e-10;

/// Gauss-reduce z to the fundamental domain, returning the reducing matrix
/// and the reduced point (see [`ReducedPair`]).
///
/// Runs in f64 first; if the extended-precision residual check fails (deep
/// points amplify rounding by roughly exp of their distance from i), the
/// whole reduction is redone in 106-bit arithmetic.
pub fn reduce2(z: &HPoint) -> Result<ReducedPair> {
    reduce2_traced(z).map(|(pair, _)| pair)
}

/// As [`reduce2`], also reporting the number of inversion steps taken.
pub fn reduce2_traced(z: &HPoint) -> Result<(ReducedPair, u32)> {
    let cap = iteration_cap(z);
    if let Ok(raw) = reduce_core::<f64>(z, cap) {
        if let Ok(matrix) = to_mat2z(&raw.matrix) {
            if residual(&matrix, z, raw.re, raw.im) <= VERIFY_TOL {
                let point = HPoint::new(raw.re, raw.im)?;
                return Ok((ReducedPair { matrix, point }, raw.inversions));
            }
        }
    }
    // Extended-precision retry.
    let raw = reduce_core::<Dd>(z, 2 * cap)?;
    let matrix = to_mat2z(&raw.matrix)?;
    let (re, im) = (raw.re.to_f64(), raw.im.to_f64());
    if residual(&matrix, z, re, im) > VERIFY_TOL.max(1e-15 * im.abs()) {
        return Err(Error::ReductionPrecision);
    }
    let point = HPoint::new(re, im)?;
    Ok((ReducedPair { matrix, point }, raw.inversions))
}

// ---------------------------------------------------------------------------
// Enumeration oracle and samplers.
// ---------------------------------------------------------------------------

/// Guard for the exhaustive enumeration (cubic in the bound).
pub const ENUMERATION_GUARD: f64 = 2000.0;

/// Largest k >= 0 with k^2 <= limit, or -1 if none.
fn int_sqrt_bound(limit: f64) -> i64 {
    if limit < 0.0 {
        return -1;
    }
    let mut k = limit.sqrt().floor() as i64;
    while ((k + 1) as f64) * ((k + 1) as f64) <= limit {
        k += 1;
    }
    while k > 0 && (k as f64) * (k as f64) > limit {
        k -= 1;
    }
    k
}

/// All A in SL(2,Z) with ||A||^2 <= norm_bound^2, in lexicographic order on
/// (a, b, c, d). The norm test is exact: the integer sum of squares against
/// norm_bound^2 computed once in f64.
pub fn enumerate_sl2z(norm_bound: f64) -> Result<Vec<Mat2Z>> {
    if !norm_bound.is_finite() || norm_bound < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "norm bound must be finite and nonnegative, got {norm_bound}"
        )));
    }
    if norm_bound > ENUMERATION_GUARD {
        return Err(Error::EnumerationBudget {
            bound: norm_bound,
            guard: ENUMERATION_GUARD,
        });
    }
    let x_sq = norm_bound * norm_bound;
    let mut out = Vec::new();
    let a_max = int_sqrt_bound(x_sq);
    for a in -a_max..=a_max {
        let rem_a = x_sq - (a * a) as f64;
        let b_max = int_sqrt_bound(rem_a);
        for b in -b_max..=b_max {
            let rem_b = rem_a - (b * b) as f64;
            let c_max = int_sqrt_bound(rem_b);
            for c in -c_max..=c_max {
                let rem_c = rem_b - (c * c) as f64;
                if a == 0 {
                    // det = -bc = 1 forces (b, c) = (1, -1) or (-1, 1).
                    if b as i128 * c as i128 == -1 {
                        let d_max = int_sqrt_bound(rem_c);
                        for d in -d_max..=d_max {
                            out.push(Mat2Z::new(a, b, c, d));
                        }
                    }
                } else {
                    let num = 1 + b as i128 * c as i128;
                    if num % a as i128 == 0 {
                        let d = num / a as i128;
                        if let Ok(d) = i64::try_from(d) {
                            if (d * d) as f64 <= rem_c {
                                out.push(Mat2Z::new(a, b, c, d));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Exactly uniform sampling by rejection: draw integer matrices of bounded
/// Frobenius norm and keep the first with determinant 1. Expected attempts
/// grow like X^2.
pub fn pick_sl_naive(norm_bound: f64, stream: &mut RandomStream) -> Result<Mat2Z> {
    pick_sl_naive_traced(norm_bound, stream).map(|(m, _)| m)
}

/// As [`pick_sl_naive`], also reporting the number of rejected candidates.
pub fn pick_sl_naive_traced(
    norm_bound: f64,
    stream: &mut RandomStream,
) -> Result<(Mat2Z, u64)> {
    let x_sq = norm_bound * norm_bound;
    if !(x_sq >= 2.0) {
        return Err(Error::NormBoundTooSmall(norm_bound));
    }
    let mut attempts = 0u64;
    loop {
        attempts += 1;
        let m = pick_matrix(2, norm_bound, stream);
        let mat = Mat2Z::new(m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1));
        if mat.det() == 1 {
            return Ok((mat, attempts));
        }
    }
}

/// Disk radius for the fancy sampler: acosh(X^2/2) reaches the farthest
/// admissible matrix, ln(1/eps) buys the probability-ratio bound, and the
/// constant absorbs the cusp-tail factor and the diameter of the compact
/// part of the fundamental domain.
pub fn radius_schedule(norm_bound: f64, epsilon: f64) -> Result<f64> {
    if !(norm_bound * norm_bound >= 2.0) {
        return Err(Error::NormBoundTooSmall(norm_bound));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    Ok((norm_bound * norm_bound / 2.0).acosh() + (1.0 / epsilon).ln() + 2.0)
}

/// One draw of the fancy sampler together with its cost counters.
#[derive(Debug, Clone, Copy)]
pub struct FancyDraw {
    pub matrix: Mat2Z,
    /// Disk points drawn (loop iterations) before acceptance.
    pub attempts: u64,
    /// Total Gauss-reduction inversion steps over all attempts.
    pub reduce_steps: u64,
}

// Orbit representatives of the elliptic fixed points within the domain;
// samples this close are redrawn because the reducing matrix is not unique
// there.
const ELLIPTIC_TOL: f64 = 1e-15;
const SQRT3_HALF: f64 = 0.866_025_403_784_438_6;

fn near_elliptic(z: &HPoint) -> bool {
    let near = |re: f64, im: f64| (z.re() - re).hypot(z.im() - im) < ELLIPTIC_TOL;
    near(0.0, 1.0) || near(-0.5, SQRT3_HALF) || near(0.5, SQRT3_HALF)
}

/// Near-uniform draw from { A : ||A||_F <= norm_bound }: the probability
/// ratio between any two admissible matrices is within exp(+-epsilon).
/// Expected loop iterations scale like 1/epsilon at fixed bound.
pub fn pick_fancy(norm_bound: f64, epsilon: f64, stream: &mut RandomStream) -> Result<Mat2Z> {
    pick_fancy_traced(norm_bound, epsilon, stream).map(|draw| draw.matrix)
}

/// As [`pick_fancy`], exposing the attempt and reduction-step counters.
pub fn pick_fancy_traced(
    norm_bound: f64,
    epsilon: f64,
    stream: &mut RandomStream,
) -> Result<FancyDraw> {
    let radius = radius_schedule(norm_bound, epsilon)?;
    let norm_cap = norm_bound * norm_bound;
    let mut attempts = 0u64;
    let mut reduce_steps = 0u64;
    loop {
        attempts += 1;
        let z = pick_halfplane(radius, stream);
        let (pair, steps) = reduce2_traced(&z)?;
        reduce_steps += steps as u64;
        if near_elliptic(&pair.point) {
            continue;
        }
        if pair.matrix.frobenius_norm_sq() as f64 <= norm_cap {
            // reduce2 determines the matrix only up to sign (A and -A act
            // identically); randomize it so the output covers SL rather
            // than PSL.
            let matrix = if stream.next_u64() & 1 == 1 {
                pair.matrix.neg()
            } else {
                pair.matrix
            };
            return Ok(FancyDraw {
                matrix,
                attempts,
                reduce_steps,
            });
        }
    }
}
