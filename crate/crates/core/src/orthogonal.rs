//! Haar-uniform O(n) sampling by QR of Gaussian matrices, signed
//! permutations for the integral case, and the exactly rational points of
//! SO(2): primitive Pythagorean rotations, Dirichlet's two-squares count,
//! and visible lattice points.

use crate::error::{Error, Result};
use crate::finite::gen_perm;
use crate::rng::{gaussian_pair, RandomStream};

/// A real n x n matrix intended to be orthogonal (row-major entries).
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl OrthoMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    /// Max-norm of Q^T Q - I; the orthogonality certificate.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| self.at(k, i) * self.at(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Determinant by LU with partial pivoting (n is small here).
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut m = self.entries.clone();
        let mut det = 1.0f64;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| {
                    m[a * n + col]
                        .abs()
                        .partial_cmp(&m[b * n + col].abs())
                        .unwrap()
                })
                .unwrap();
            if m[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            det *= m[col * n + col];
            for row in (col + 1)..n {
                let factor = m[row * n + col] / m[col * n + col];
                for j in col..n {
                    m[row * n + j] -= factor * m[col * n + j];
                }
            }
        }
        det
    }

    /// Angle of the first column in [0, 2 pi); meaningful for n = 2.
    pub fn first_column_angle(&self) -> f64 {
        let angle = self.at(1, 0).atan2(self.at(0, 0));
        if angle < 0.0 {
            angle + 2.0 * std::f64::consts::PI
        } else {
            angle
        }
    }
}

/// Haar-uniform element of O(n): orthogonal factor of an i.i.d. standard
/// normal matrix, sign-normalized so the triangular factor has a positive
/// diagonal (which pins the factorization uniquely).
pub fn random_orthogonal(n: usize, stream: &mut RandomStream) -> OrthoMatrix {
    assert!(n >= 1);
    'resample: loop {
        let mut a = Vec::with_capacity(n * n + 1);
        while a.len() < n * n {
            let (x, y) = gaussian_pair(stream);
            a.push(x);
            a.push(y);
        }
        a.truncate(n * n);

        // Householder triangularization; q_t accumulates the transpose of Q.
        let mut r = a;
        let mut q_t = vec![0.0f64; n * n];
        for i in 0..n {
            q_t[i * n + i] = 1.0;
        }
        let mut v = vec![0.0f64; n];
        for col in 0..n.saturating_sub(1) {
            let mut norm_sq = 0.0;
            for row in col..n {
                v[row] = r[row * n + col];
                norm_sq += v[row] * v[row];
            }
            let norm = norm_sq.sqrt();
            if norm == 0.0 {
                continue 'resample; // rank-deficient draw
            }
            let alpha = if v[col] >= 0.0 { -norm } else { norm };
            v[col] -= alpha;
            let v_sq: f64 = (col..n).map(|k| v[k] * v[k]).sum();
            if v_sq == 0.0 {
                continue;
            }
            // Apply H = I - 2 v v^T / (v^T v) to R and to q_t.
            for j in col..n {
                let dot: f64 = (col..n).map(|k| v[k] * r[k * n + j]).sum();
                let scale = 2.0 * dot / v_sq;
                for k in col..n {
                    r[k * n + j] -= scale * v[k];
                }
            }
            for j in 0..n {
                let dot: f64 = (col..n).map(|k| v[k] * q_t[k * n + j]).sum();
                let scale = 2.0 * dot / v_sq;
                for k in col..n {
                    q_t[k * n + j] -= scale * v[k];
                }
            }
        }
        // Q = q_t^T, with column signs flipped wherever R has a negative
        // diagonal entry.
        let mut q = vec![0.0f64; n * n];
        for col in 0..n {
            let diag = r[col * n + col];
            if diag == 0.0 {
                continue 'resample;
            }
            let sign = if diag < 0.0 { -1.0 } else { 1.0 };
            for row in 0..n {
                q[row * n + col] = sign * q_t[col * n + row];
            }
        }
        return OrthoMatrix { n, entries: q };
    }
}

/// Uniform element of O(n, Z): the 2^n n! signed permutation matrices.
pub fn random_signed_permutation(n: usize, stream: &mut RandomStream) -> OrthoMatrix {
    let perm = gen_perm(n, stream);
    let mut entries = vec![0.0f64; n * n];
    for (col, &row) in perm.images().iter().enumerate() {
        let sign = if stream.gen_range(2) == 0 { 1.0 } else { -1.0 };
        entries[row * n + col] = sign;
    }
    OrthoMatrix { n, entries }
}

/// An exactly orthogonal rational rotation [[a/q, b/q], [-b/q, a/q]] with
/// a^2 + b^2 = q^2 and gcd(a, b) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalRotation {
    pub a: i64,
    pub b: i64,
    pub q: i64,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

const FACTOR_BUDGET: u64 = 1_000_000_000;

/// Number of essentially distinct representations of q as a sum of two
/// squares: the product of (exponent + 1) over primes = 1 mod 4 dividing q,
/// provided every prime = 3 mod 4 divides q to an even power (else 0).
/// Powers of 2 do not affect the count.
///
/// The normalization agrees with counting ordered pairs (a, b), a >= 1,
/// b >= 0, a^2 + b^2 = q: each unit-rotation orbit of size 4 has exactly one
/// such representative.
pub fn two_squares_count(q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be positive".into()));
    }
    if q > FACTOR_BUDGET {
        return Err(Error::FactoringBudget(q));
    }
    let mut rem = q;
    while rem % 2 == 0 {
        rem /= 2;
    }
    let mut count = 1u64;
    let mut factor = 3u64;
    while factor * factor <= rem {
        if rem % factor == 0 {
            let mut exp = 0u64;
            while rem % factor == 0 {
                rem /= factor;
                exp += 1;
            }
            match factor % 4 {
                1 => count *= exp + 1,
                _ => {
                    if exp % 2 == 1 {
                        return Ok(0);
                    }
                }
            }
        }
        factor += 2;
    }
    if rem > 1 {
        // rem is a remaining prime factor to the first power.
        match rem % 4 {
            1 => count *= 2,
            _ => return Ok(0),
        }
    }
    Ok(count)
}

const ROTATION_BUDGET: u64 = 10_000;

/// All rational rotations with denominator q <= max_denominator, via the
/// primitive Pythagorean parametrization a = m^2 - k^2, b = 2mk,
/// q = m^2 + k^2 over coprime opposite-parity (m, k), plus the four axis
/// rotations, with all sign and axis-swap variants. Sorted by (q, a, b).
pub fn enumerate_rational_rotations(max_denominator: u64) -> Result<Vec<RationalRotation>> {
    if max_denominator == 0 {
        return Err(Error::InvalidParameter(
            "max denominator must be positive".into(),
        ));
    }
    if max_denominator > ROTATION_BUDGET {
        return Err(Error::EnumerationBudget {
            bound: max_denominator as f64,
            guard: ROTATION_BUDGET as f64,
        });
    }
    let mut out = vec![
        RationalRotation { a: 1, b: 0, q: 1 },
        RationalRotation { a: -1, b: 0, q: 1 },
        RationalRotation { a: 0, b: 1, q: 1 },
        RationalRotation { a: 0, b: -1, q: 1 },
    ];
    let q_max = max_denominator as i64;
    let mut m = 2i64;
    while m * m + 1 <= q_max {
        for k in 1..m {
            let q = m * m + k * k;
            if q > q_max {
                break;
            }
            if (m + k) % 2 == 0 || gcd(m as u64, k as u64) != 1 {
                continue;
            }
            let a = m * m - k * k;
            let b = 2 * m * k;
            for &(x, y) in &[(a, b), (b, a)] {
                for &sx in &[1i64, -1] {
                    for &sy in &[1i64, -1] {
                        out.push(RationalRotation {
                            a: sx * x,
                            b: sy * y,
                            q,
                        });
                    }
                }
            }
        }
        m += 1;
    }
    out.sort();
    Ok(out)
}

/// Uniform draw from [`enumerate_rational_rotations`].
pub fn sample_rational_rotation(
    max_denominator: u64,
    stream: &mut RandomStream,
) -> Result<RationalRotation> {
    let all = enumerate_rational_rotations(max_denominator)?;
    Ok(all[stream.gen_range(all.len() as u64) as usize])
}

/// Exact count of visible lattice points (coprime coordinates) in the
/// punctured disk 0 < a^2 + b^2 <= Q^2.
pub fn visible_point_count(max_radius: u64) -> Result<u64> {
    if max_radius == 0 {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    if max_radius > ROTATION_BUDGET {
        return Err(Error::EnumerationBudget {
            bound: max_radius as f64,
            guard: ROTATION_BUDGET as f64,
        });
    }
    let q = max_radius as i64;
    let q_sq = q * q;
    // Count the open quadrant a, b >= 1 and multiply by 4; the only visible
    // axis points are (+-1, 0) and (0, +-1).
    let mut quadrant = 0u64;
    for a in 1..=q {
        let a_sq = a * a;
        if a_sq + 1 > q_sq {
            break;
        }
        for b in 1..=q {
            if a_sq + b * b > q_sq {
                break;
            }
            if gcd(a as u64, b as u64) == 1 {
                quadrant += 1;
            }
        }
    }
    Ok(4 * quadrant + 4)
}
