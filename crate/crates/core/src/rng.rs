//! Deterministic seedable randomness and density-inversion sampling.
//!
//! Every sampler in this crate draws from a [`RandomStream`], a SplitMix64
//! generator with fixed, documented constants. The same seed produces the
//! same byte-for-byte output sequence on every platform, which is what makes
//! the statistical suites reproducible.

use crate::error::{Error, Result};

/// SplitMix64 stream. Single u64 state, period 2^64.
///
/// Constants are the standard ones from Steele, Lea and Flood's SplitMix;
/// the increment is the 64-bit golden ratio.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, state: seed }
    }

    /// The seed this stream was created with (for replay logging).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform f64 in [0, 1), using the top 53 bits for a full mantissa.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased uniform integer in [0, n). Lemire's multiply-shift with
    /// rejection, so small supports are exactly uniform.
    pub fn gen_range(&mut self, n: u64) -> u64 {
        assert!(n > 0, "gen_range requires n > 0");
        let mut m = (self.next_u64() as u128) * (n as u128);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                m = (self.next_u64() as u128) * (n as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Derive an independent stream. Distinct labels give streams that do
    /// not overlap the parent sequence in any observed prefix.
    pub fn split(&self, label: u64) -> RandomStream {
        let derived = mix64(self.seed ^ mix64(label ^ 0x5851_F42D_4C95_7F2D));
        RandomStream::new(derived)
    }
}

/// Two independent standard normal variates via the Box-Muller transform.
///
/// A zero first uniform is redrawn to keep the logarithm finite.
pub fn gaussian_pair(stream: &mut RandomStream) -> (f64, f64) {
    let mut u1 = stream.uniform();
    while u1 == 0.0 {
        u1 = stream.uniform();
    }
    let u2 = stream.uniform();
    let radius = (-2.0 * u1.ln()).sqrt();
    let (sin, cos) = (2.0 * std::f64::consts::PI * u2).sin_cos();
    (radius * cos, radius * sin)
}

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A density on (0, R] described through its antiderivative F with F(0) = 0.
///
/// Sampling inverts F: with u uniform, F^{-1}(F(R) u) has density
/// proportional to f = F'. The inverse can be supplied analytically;
/// otherwise it is computed by bisection to 1e-12 relative accuracy.
pub struct DensitySpec {
    radius: f64,
    cdf: RealFn,
    inv_cdf: Option<RealFn>,
    total: f64,
}

impl DensitySpec {
    /// Build a spec from the antiderivative F. Rejects F that is not
    /// strictly increasing (checked on a grid) or does not vanish at 0.
    pub fn from_cdf(
        radius: f64,
        cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "density radius must be positive and finite, got {radius}"
            )));
        }
        let total = cdf(radius);
        let err = || Error::NonMonotoneCdf { radius };
        if !(total > 0.0) || cdf(0.0).abs() > 1e-9 * total.max(1.0) {
            return Err(err());
        }
        // Grid check for strict monotonicity.
        const GRID: usize = 64;
        let mut prev = 0.0f64;
        for k in 1..=GRID {
            let t = radius * (k as f64) / (GRID as f64);
            let v = cdf(t);
            if !(v > prev) {
                return Err(err());
            }
            prev = v;
        }
        Ok(Self {
            radius,
            cdf: Box::new(cdf),
            inv_cdf: None,
            total,
        })
    }

    /// Attach an analytic inverse of F, used instead of bisection.
    pub fn with_inverse(
        mut self,
        inv_cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.inv_cdf = Some(Box::new(inv_cdf));
        self
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn invert(&self, target: f64) -> f64 {
        if let Some(inv) = &self.inv_cdf {
            return inv(target);
        }
        // Bisection on [0, R]; F is increasing so this always brackets.
        let mut lo = 0.0f64;
        let mut hi = self.radius;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (self.cdf)(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi.max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Draw a value in (0, R] with density proportional to the spec's f.
pub fn gen_random(spec: &DensitySpec, stream: &mut RandomStream) -> f64 {
    let target = spec.total * stream.uniform();
    spec.invert(target)
}
