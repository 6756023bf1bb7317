//! Uniform random lattice points in Euclidean balls, and integer matrices of
//! bounded Frobenius norm as lattice points in dimension n^2.
//!
//! The ball sampler pads the radius by sqrt(n) (the unit-cube diagonal) and
//! rounds to the nearest lattice point, rejecting results outside the target
//! ball. Every lattice point in the ball then owns its full Voronoi cube
//! inside the padded ball, so all are equally likely.

use crate::error::{Error, Result};
use crate::rng::{gaussian_pair, RandomStream};

/// An exact integer lattice point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    coords: Vec<i64>,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Exact squared L2 norm.
    pub fn norm_sq(&self) -> u128 {
        self.coords
            .iter()
            .map(|&c| (c as i128 * c as i128) as u128)
            .sum()
    }
}

/// An n x n integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatNZ {
    n: usize,
    entries: Vec<i64>,
}

impl MatNZ {
    pub fn new(n: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn at(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.n + col]
    }

    /// Exact squared Frobenius norm: the sum of squared entries.
    pub fn frobenius_norm_sq(&self) -> u128 {
        self.entries
            .iter()
            .map(|&c| (c as i128 * c as i128) as u128)
            .sum()
    }
}

/// Uniform random point in the n-ball of radius `radius`: an isotropic
/// Gaussian direction scaled to radius * u^(1/n).
pub fn ball_point(n: usize, radius: f64, stream: &mut RandomStream) -> Vec<f64> {
    assert!(n >= 1 && radius > 0.0);
    loop {
        let mut v = Vec::with_capacity(n + 1);
        while v.len() < n {
            let (x, y) = gaussian_pair(stream);
            v.push(x);
            v.push(y);
        }
        v.truncate(n);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue; // probability-zero degenerate draw
        }
        let scale = radius * stream.uniform().powf(1.0 / n as f64) / norm;
        for x in &mut v {
            *x *= scale;
        }
        return v;
    }
}

/// Round to the nearest integer, ties away from zero (`f64::round`). The
/// Voronoi-cube argument only needs the rule to be fixed; this one is.
#[inline]
fn round_coord(x: f64) -> i64 {
    x.round() as i64
}

/// Uniform random lattice point v in Z^n with ||v|| <= radius.
///
/// The norm test compares the exact integer sum of squares against
/// radius^2 computed once in f64 (correct to 1 ulp); boundary ties are
/// accepted.
pub fn pick_lattice_vector(n: usize, radius: f64, stream: &mut RandomStream) -> LatticeVector {
    assert!(n >= 1 && radius >= 0.0);
    let radius_sq = radius * radius;
    let padded = radius + (n as f64).sqrt();
    loop {
        let x = ball_point(n, padded, stream);
        let v: Vec<i64> = x.iter().map(|&c| round_coord(c)).collect();
        let norm_sq: u128 = v.iter().map(|&c| (c as i128 * c as i128) as u128).sum();
        debug_assert!(norm_sq < (1u128 << 53));
        if norm_sq as f64 <= radius_sq {
            return LatticeVector::new(v);
        }
    }
}

/// Uniform random n x n integer matrix with Frobenius norm <= radius,
/// reshaped row-major from a lattice point in dimension n^2.
pub fn pick_matrix(n: usize, radius: f64, stream: &mut RandomStream) -> MatNZ {
    let v = pick_lattice_vector(n * n, radius, stream);
    MatNZ {
        n,
        entries: v.coords,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats;
    use std::collections::HashMap;

    /// Exhaustive enumeration oracle: all lattice points of norm <= radius.
    pub(crate) fn enumerate_ball(n: usize, radius: f64) -> Vec<Vec<i64>> {
        let bound = radius.floor() as i64;
        let radius_sq = radius * radius;
        let mut out = Vec::new();
        let mut current = vec![0i64; n];
        fn rec(
            k: usize,
            n: usize,
            bound: i64,
            radius_sq: f64,
            partial: u128,
            current: &mut Vec<i64>,
            out: &mut Vec<Vec<i64>>,
        ) {
            if k == n {
                out.push(current.clone());
                return;
            }
            for c in -bound..=bound {
                let sq = partial + (c * c) as u128;
                if sq as f64 <= radius_sq {
                    current[k] = c;
                    rec(k + 1, n, bound, radius_sq, sq, current, out);
                }
            }
            current[k] = 0;
        }
        rec(0, n, bound, radius_sq, 0, &mut current, &mut out);
        out
    }

    #[test]
    fn oracle_counts() {
        assert_eq!(enumerate_ball(2, 1.0).len(), 5);
        assert_eq!(enumerate_ball(4, 1.0).len(), 9);
        assert_eq!(enumerate_ball(4, 3.0).len(), 425);
    }

    #[test]
    fn ball_point_dimension_one_is_uniform() {
        let mut stream = RandomStream::new(41);
        let mut samples: Vec<f64> = (0..100_000)
            .map(|_| ball_point(1, 2.0, &mut stream)[0])
            .collect();
        let ks = stats::ks_statistic(&mut samples, |t| ((t + 2.0) / 4.0).clamp(0.0, 1.0));
        assert!(ks < 0.01, "ks = {ks}");
    }

    #[test]
    fn ball_point_stays_in_ball() {
        let mut stream = RandomStream::new(43);
        for _ in 0..10_000 {
            let v = ball_point(3, 1.5, &mut stream);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(norm <= 1.5 + 1e-12);
        }
    }

    #[test]
    fn ball_point_volume_ratio_in_dim_four() {
        let mut stream = RandomStream::new(47);
        let n = 100_000;
        let mut inner = 0u64;
        for _ in 0..n {
            let v = ball_point(4, 1.0, &mut stream);
            if v.iter().map(|x| x * x).sum::<f64>() <= 0.25 {
                inner += 1;
            }
        }
        let got = inner as f64 / n as f64;
        assert!((got - 1.0 / 16.0).abs() < 0.005, "got {got}");
    }

    #[test]
    fn single_point_ball() {
        let mut stream = RandomStream::new(53);
        for _ in 0..50 {
            let v = pick_lattice_vector(1, 0.5, &mut stream);
            assert_eq!(v.coords(), &[0]);
        }
    }

    #[test]
    fn lattice_vectors_respect_the_bound_exactly() {
        let mut stream = RandomStream::new(59);
        for _ in 0..5_000 {
            let v = pick_lattice_vector(3, 2.5, &mut stream);
            assert!(v.norm_sq() as f64 <= 6.25);
        }
    }

    #[test]
    fn lattice_uniform_on_five_points() {
        let mut stream = RandomStream::new(61);
        let support = enumerate_ball(2, 1.0);
        let index: HashMap<&[i64], usize> = support
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_slice(), i))
            .collect();
        let mut counts = vec![0u64; support.len()];
        for _ in 0..100_000 {
            let v = pick_lattice_vector(2, 1.0, &mut stream);
            counts[index[v.coords()]] += 1;
        }
        let report = stats::chi_square_uniform("Z^2 ball(1)", &counts).unwrap();
        assert!(report.p_value > 0.01, "p = {}", report.p_value);
    }

    #[test]
    fn matrix_reshape_matches_vector_norm() {
        let mut stream = RandomStream::new(67);
        for _ in 0..2_000 {
            let m = pick_matrix(2, 2.0, &mut stream);
            assert!(m.frobenius_norm_sq() <= 4);
            assert_eq!(m.dim(), 2);
        }
    }

    #[test]
    fn matrix_uniform_on_nine_elements() {
        let mut stream = RandomStream::new(71);
        let support = enumerate_ball(4, 1.0);
        assert_eq!(support.len(), 9);
        let index: HashMap<&[i64], usize> = support
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_slice(), i))
            .collect();
        let mut counts = vec![0u64; 9];
        for _ in 0..100_000 {
            let m = pick_matrix(2, 1.0, &mut stream);
            counts[index[m.entries()]] += 1;
        }
        let report = stats::chi_square_uniform("M2(Z) ball(1)", &counts).unwrap();
        assert!(report.p_value > 0.01, "p = {}", report.p_value);
    }

    #[test]
    fn rejection_rate_stays_modest() {
        // Mean rejected draws per accepted lattice point stays below 10 at
        // (4, 10) and (9, 10).
        for &(n, radius) in &[(4usize, 10.0f64), (9, 10.0)] {
            let mut stream = RandomStream::new(73 + n as u64);
            let mut attempts = 0u64;
            let accepted = 20_000u64;
            let radius_sq = radius * radius;
            let padded = radius + (n as f64).sqrt();
            let mut got = 0u64;
            while got < accepted {
                attempts += 1;
                let x = ball_point(n, padded, &mut stream);
                let norm_sq: u128 = x
                    .iter()
                    .map(|&c| {
                        let r = round_coord(c);
                        (r as i128 * r as i128) as u128
                    })
                    .sum();
                if norm_sq as f64 <= radius_sq {
                    got += 1;
                }
            }
            let mean_rejections = (attempts - accepted) as f64 / accepted as f64;
            assert!(
                mean_rejections < 10.0,
                "mean rejections at (n={n}, X={radius}) = {mean_rejections}"
            );
        }
    }

    #[test]
    fn boundary_shell_gets_its_share() {
        // Edge-effect check at (n, X) = (2, 2): the norm-4 shell holds 4 of
        // the 13 points; its observed frequency must sit within 4 sigma.
        let mut stream = RandomStream::new(79);
        let support = enumerate_ball(2, 2.0);
        assert_eq!(support.len(), 13);
        let shell: Vec<_> = support
            .iter()
            .filter(|v| v.iter().map(|&c| c * c).sum::<i64>() == 4)
            .collect();
        assert_eq!(shell.len(), 4);
        let n = 200_000u64;
        let mut hits = 0u64;
        for _ in 0..n {
            let v = pick_lattice_vector(2, 2.0, &mut stream);
            if v.norm_sq() == 4 {
                hits += 1;
            }
        }
        let p = 4.0 / 13.0;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let got = hits as f64 / n as f64;
        assert!((got - p).abs() < 4.0 * sigma, "got {got}, want {p} +- {sigma}");
    }
}
