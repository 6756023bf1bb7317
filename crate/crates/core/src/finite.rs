//! Exact uniform sampling in SL(n,p) and Sp(2n,p), uniform random
//! permutations, and an approximate sampler by random walk on a transvection
//! Cayley graph.

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// A prime field F_p with p < 2^31, validated by deterministic trial
/// division at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.p - b % self.p)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Multiplicative inverse of a nonzero residue (extended Euclid).
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "zero has no inverse");
        let (mut old_r, mut r) = (a as i128 % self.p as i128, self.p as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        old_s.rem_euclid(self.p as i128) as u64
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A matrix over F_p with entries stored row-major in [0, p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    n: usize,
    p: u64,
    entries: Vec<u64>,
}

impl FpMatrix {
    pub fn new(n: usize, field: PrimeField, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let p = field.p();
        Ok(Self {
            n,
            p,
            entries: entries.into_iter().map(|e| e % p).collect(),
        })
    }

    pub fn identity(n: usize, field: PrimeField) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self {
            n,
            p: field.p(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.n + col]
    }

    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.n, rhs.n);
        assert_eq!(self.p, rhs.p);
        let n = self.n;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.entries[i * n + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] =
                        (entries[i * n + j] + aik * rhs.entries[k * n + j]) % self.p;
                }
            }
        }
        FpMatrix {
            n,
            p: self.p,
            entries,
        }
    }

    pub fn transpose(&self) -> FpMatrix {
        let n = self.n;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        FpMatrix {
            n,
            p: self.p,
            entries,
        }
    }

    /// Determinant mod p by Gaussian elimination.
    pub fn det(&self) -> u64 {
        let field = PrimeField { p: self.p };
        let n = self.n;
        let mut m = self.entries.clone();
        let mut det = 1u64;
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * n + col] != 0);
            let Some(pivot) = pivot else { return 0 };
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                }
                det = field.neg(det);
            }
            let inv = field.inv(m[col * n + col]);
            det = field.mul(det, m[col * n + col]);
            for row in (col + 1)..n {
                let factor = field.mul(m[row * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let sub = field.mul(factor, m[col * n + j]);
                    m[row * n + j] = field.sub(m[row * n + j], sub);
                }
            }
        }
        det
    }

    /// Canonical byte serialization (n, p, entries row-major), the hashing
    /// key used by the uniformity harness.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 8 * self.entries.len());
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&self.p.to_le_bytes());
        for &e in &self.entries {
            out.extend_from_slice(&e.to_le_bytes());
        }
        out
    }
}

/// Exactly uniform element of SL(n,p): draw entries i.i.d., reject singular
/// matrices, and divide the first column by the determinant. Every SL
/// element has exactly p-1 preimages among invertible matrices, one per
/// determinant value.
pub fn gen_rand_sl(n: usize, field: PrimeField, stream: &mut RandomStream) -> FpMatrix {
    assert!(n >= 1);
    let p = field.p();
    loop {
        let entries: Vec<u64> = (0..n * n).map(|_| stream.gen_range(p)).collect();
        let m = FpMatrix {
            n,
            p,
            entries,
        };
        let det = m.det();
        if det == 0 {
            continue;
        }
        let inv = field.inv(det);
        let mut m = m;
        for row in 0..n {
            m.entries[row * n] = field.mul(m.entries[row * n], inv);
        }
        debug_assert_eq!(m.det(), 1);
        return m;
    }
}

/// The symplectic space F_p^{2n} with the form given by
/// J = [[0, I], [-I, 0]] in the basis order (x_1..x_n, y_1..y_n).
#[derive(Debug, Clone, Copy)]
pub struct SymplecticSpace {
    n: usize,
    field: PrimeField,
}

impl SymplecticSpace {
    pub fn new(n: usize, field: PrimeField) -> Self {
        assert!(n >= 1);
        Self { n, field }
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    /// The Gram matrix of the form.
    pub fn j_matrix(&self) -> FpMatrix {
        let n2 = 2 * self.n;
        let mut entries = vec![0u64; n2 * n2];
        for k in 0..self.n {
            entries[k * n2 + self.n + k] = 1;
            entries[(self.n + k) * n2 + k] = self.field.neg(1);
        }
        FpMatrix {
            n: n2,
            p: self.field.p(),
            entries,
        }
    }

    /// The alternating form <u, v> = sum_k u_k v_{n+k} - u_{n+k} v_k.
    pub fn form(&self, u: &[u64], v: &[u64]) -> u64 {
        let f = self.field;
        let mut acc = 0u64;
        for k in 0..self.n {
            acc = f.add(acc, f.mul(u[k], v[self.n + k]));
            acc = f.sub(acc, f.mul(u[self.n + k], v[k]));
        }
        acc
    }
}

/// Symplectic projection of v onto the span of hyperbolic pairs (x_j, y_j):
/// v' = sum_j (<v, y_j> x_j - <v, x_j> y_j). The residual v - v' pairs to
/// zero with every basis vector built so far.
pub fn symplectic_project(
    space: &SymplecticSpace,
    v: &[u64],
    pairs: &[(Vec<u64>, Vec<u64>)],
) -> Result<Vec<u64>> {
    let f = space.field;
    // Reject pair sets that are not a partial symplectic basis.
    for (j, (xj, yj)) in pairs.iter().enumerate() {
        if space.form(xj, yj) != 1 {
            return Err(Error::BadSymplecticPairs);
        }
        for (k, (xk, yk)) in pairs.iter().enumerate() {
            if j != k
                && (space.form(xj, xk) != 0
                    || space.form(yj, yk) != 0
                    || space.form(xj, yk) != 0)
            {
                return Err(Error::BadSymplecticPairs);
            }
        }
    }
    let mut out = vec![0u64; v.len()];
    for (xj, yj) in pairs {
        let along_x = space.form(v, yj);
        let along_y = space.form(v, xj);
        for (o, (&xc, &yc)) in out.iter_mut().zip(xj.iter().zip(yj.iter())) {
            *o = f.add(*o, f.mul(along_x, xc));
            *o = f.sub(*o, f.mul(along_y, yc));
        }
    }
    Ok(out)
}

/// Uniform element of Sp(2n,p) by building a uniformly random symplectic
/// basis pair by pair: draw x, y, strip their projections onto the pairs
/// built so far, retry until the residuals pair nontrivially, and normalize.
/// Columns (x_1..x_n, y_1..y_n) then satisfy M^T J M = J.
pub fn gen_rand_sp(n: usize, field: PrimeField, stream: &mut RandomStream) -> FpMatrix {
    let space = SymplecticSpace::new(n, field);
    let p = field.p();
    let dim = 2 * n;
    let mut pairs: Vec<(Vec<u64>, Vec<u64>)> = Vec::with_capacity(n);
    while pairs.len() < n {
        let (x_res, y_res, c) = loop {
            let x: Vec<u64> = (0..dim).map(|_| stream.gen_range(p)).collect();
            let y: Vec<u64> = (0..dim).map(|_| stream.gen_range(p)).collect();
            let x_proj = project_unchecked(&space, &x, &pairs);
            let y_proj = project_unchecked(&space, &y, &pairs);
            let x_res: Vec<u64> = x.iter().zip(&x_proj).map(|(&a, &b)| field.sub(a, b)).collect();
            let y_res: Vec<u64> = y.iter().zip(&y_proj).map(|(&a, &b)| field.sub(a, b)).collect();
            let c = space.form(&x_res, &y_res);
            if c != 0 {
                break (x_res, y_res, c);
            }
        };
        let c_inv = field.inv(c);
        let y_scaled: Vec<u64> = y_res.iter().map(|&v| field.mul(v, c_inv)).collect();
        pairs.push((x_res, y_scaled));
    }
    let mut entries = vec![0u64; dim * dim];
    for (j, (xj, yj)) in pairs.iter().enumerate() {
        for row in 0..dim {
            entries[row * dim + j] = xj[row];
            entries[row * dim + n + j] = yj[row];
        }
    }
    let m = FpMatrix {
        n: dim,
        p,
        entries,
    };
    debug_assert!(is_symplectic(&m));
    m
}

// Projection without the pair-set validation; the builder maintains the
// invariant itself.
fn project_unchecked(
    space: &SymplecticSpace,
    v: &[u64],
    pairs: &[(Vec<u64>, Vec<u64>)],
) -> Vec<u64> {
    let f = space.field;
    let mut out = vec![0u64; v.len()];
    for (xj, yj) in pairs {
        let along_x = space.form(v, yj);
        let along_y = space.form(v, xj);
        for (o, (&xc, &yc)) in out.iter_mut().zip(xj.iter().zip(yj.iter())) {
            *o = f.add(*o, f.mul(along_x, xc));
            *o = f.sub(*o, f.mul(along_y, yc));
        }
    }
    out
}

/// Exact membership test M^T J M = J.
pub fn is_symplectic(m: &FpMatrix) -> bool {
    if m.n % 2 != 0 {
        return false;
    }
    let field = PrimeField { p: m.p };
    let space = SymplecticSpace::new(m.n / 2, field);
    let j = space.j_matrix();
    m.transpose().mul(&j).mul(m) == j
}

/// A permutation of {0, .., n-1} in image form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }
}

/// Uniform random permutation by Fisher-Yates: swap position i with a
/// uniform position in [0, i] for i from n-1 down to 1.
pub fn gen_perm(n: usize, stream: &mut RandomStream) -> Permutation {
    assert!(n >= 1);
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = stream.gen_range(i as u64 + 1) as usize;
        images.swap(i, j);
    }
    Permutation { images }
}

/// Elementary transvection generators I + c E_{ij} (i != j, c = +-1) of
/// SL(n,p); for n = 2 these are the four upper/lower unipotents.
pub fn transvection_generators(n: usize, field: PrimeField) -> Vec<FpMatrix> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for c in [1, field.neg(1)] {
                let mut m = FpMatrix::identity(n, field);
                m.entries[i * n + j] = c;
                gens.push(m);
            }
        }
    }
    gens
}

/// Endpoint of a lazy random walk of the given length on the Cayley graph of
/// SL(n,p) with transvection generators: each step stays put with
/// probability 1/2, else right-multiplies by a uniform generator.
pub fn expander_walk_sample(
    n: usize,
    field: PrimeField,
    length: u64,
    stream: &mut RandomStream,
) -> FpMatrix {
    let gens = transvection_generators(n, field);
    let mut m = FpMatrix::identity(n, field);
    for _ in 0..length {
        if stream.gen_range(2) == 0 {
            continue;
        }
        let g = &gens[stream.gen_range(gens.len() as u64) as usize];
        m = m.mul(g);
    }
    m
}
