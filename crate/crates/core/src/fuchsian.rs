//! Greedy reduction to a Dirichlet fundamental domain for a user-supplied
//! geometrically finite Fuchsian group, generalizing the continued-fraction
//! reduction of the modular group.

use crate::error::{Error, Result};
use crate::hyperbolic::{halfplane_point, hdist, pick_hyperbolic, HPoint, Mobius};
use crate::rng::RandomStream;

/// Side-pairing generators together with the Dirichlet basepoint.
///
/// The set must be closed under inverses (up to sign: g and -g act
/// identically) and must not contain the identity.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    gens: Vec<Mobius>,
    basepoint: HPoint,
}

const GEN_TOL: f64 = 1e-9;

fn acts_identically(g: &Mobius, h: &Mobius) -> bool {
    let same = (g.a - h.a).abs().max((g.b - h.b).abs()).max((g.c - h.c).abs()).max((g.d - h.d).abs());
    let flip = (g.a + h.a).abs().max((g.b + h.b).abs()).max((g.c + h.c).abs()).max((g.d + h.d).abs());
    same.min(flip) <= GEN_TOL
}

impl GeneratorSet {
    pub fn new(gens: Vec<Mobius>, basepoint: HPoint) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::BadGeneratorSet("no generators supplied".into()));
        }
        let identity = Mobius::identity();
        for (i, g) in gens.iter().enumerate() {
            if acts_identically(g, &identity) {
                return Err(Error::BadGeneratorSet(format!(
                    "generator {i} acts as the identity"
                )));
            }
            let inv = g.inverse();
            if !gens.iter().any(|h| acts_identically(h, &inv)) {
                return Err(Error::BadGeneratorSet(format!(
                    "inverse of generator {i} is missing"
                )));
            }
        }
        Ok(Self { gens, basepoint })
    }

    /// The modular group side pairings {S, T, T^-1} with a chosen basepoint.
    pub fn modular_group(basepoint: HPoint) -> Self {
        let gens = vec![
            Mobius::new(0.0, -1.0, 1.0, 0.0).unwrap(),
            Mobius::new(1.0, 1.0, 0.0, 1.0).unwrap(),
            Mobius::new(1.0, -1.0, 0.0, 1.0).unwrap(),
        ];
        Self::new(gens, basepoint).expect("modular generators are well-formed")
    }

    pub fn gens(&self) -> &[Mobius] {
        &self.gens
    }

    pub fn basepoint(&self) -> &HPoint {
        &self.basepoint
    }

    /// Largest violation of the local Dirichlet condition at z: positive when
    /// some generator moves z strictly closer to the basepoint.
    pub fn dirichlet_defect(&self, z: &HPoint) -> f64 {
        let here = hdist(z, &self.basepoint);
        self.gens
            .iter()
            .map(|g| here - hdist(&g.apply(z), &self.basepoint))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Record of one greedy reduction run.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    /// Indices (into the generator list) applied, in order.
    pub word: Vec<usize>,
    pub steps: u64,
    pub final_point: HPoint,
    /// Accumulated transformation with final_point = matrix . input.
    pub matrix: Mobius,
}

pub const DEFAULT_STEP_CAP: u64 = 1_000_000;

/// Minimal distance improvement for a greedy step to count as progress;
/// below this the loop stops to avoid floating-point cycling.
const DECREASE_TOL: f64 = 1e-12;

/// Repeatedly apply the generator bringing the point closest to the
/// basepoint; stop when no generator improves on staying put. Ties go to the
/// lowest generator index (and staying put wins all ties).
pub fn greedy_reduce(x: &HPoint, gset: &GeneratorSet) -> Result<ReductionTrace> {
    greedy_reduce_capped(x, gset, DEFAULT_STEP_CAP)
}

pub fn greedy_reduce_capped(
    x: &HPoint,
    gset: &GeneratorSet,
    step_cap: u64,
) -> Result<ReductionTrace> {
    let basepoint = gset.basepoint();
    let mut current = *x;
    let mut matrix = Mobius::identity();
    let mut word = Vec::new();
    loop {
        let here = hdist(&current, basepoint);
        let mut best: Option<(usize, HPoint, f64)> = None;
        for (i, g) in gset.gens().iter().enumerate() {
            let image = g.apply(&current);
            let dist = hdist(&image, basepoint);
            if best.as_ref().map_or(true, |(_, _, d)| dist < *d) {
                best = Some((i, image, dist));
            }
        }
        let (i, image, dist) = best.expect("generator set is non-empty");
        if dist >= here - DECREASE_TOL {
            return Ok(ReductionTrace {
                steps: word.len() as u64,
                word,
                final_point: current,
                matrix,
            });
        }
        current = image;
        matrix = gset.gens()[i] * matrix;
        word.push(i);
        if word.len() as u64 > step_cap {
            return Err(Error::StepCapExceeded(step_cap));
        }
    }
}

/// Summary of greedy-reduction cost over random points in a disk around the
/// basepoint.
#[derive(Debug, Clone)]
pub struct StepStats {
    /// (hyperbolic distance from basepoint, steps taken) per trial.
    pub trials: Vec<(f64, u64)>,
    pub mean_steps: f64,
    pub max_steps: u64,
    /// Least-squares slope of steps against distance.
    pub steps_per_distance: f64,
}

/// Sample `trials` points uniformly from the disk of the given radius about
/// the basepoint, reduce each, and regress step count on distance.
pub fn step_count_experiment(
    gset: &GeneratorSet,
    radius: f64,
    trials: u64,
    stream: &mut RandomStream,
) -> Result<StepStats> {
    let to_base = Mobius::translate_i_to(gset.basepoint());
    let mut data = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let x = to_base.apply(&halfplane_point(&pick_hyperbolic(radius, stream)));
        let trace = greedy_reduce(&x, gset)?;
        data.push((hdist(&x, gset.basepoint()), trace.steps));
    }
    let n = data.len() as f64;
    let mean_steps = data.iter().map(|&(_, s)| s as f64).sum::<f64>() / n;
    let max_steps = data.iter().map(|&(_, s)| s).max().unwrap_or(0);
    let mean_dist = data.iter().map(|&(d, _)| d).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for &(d, s) in &data {
        cov += (d - mean_dist) * (s as f64 - mean_steps);
        var += (d - mean_dist) * (d - mean_dist);
    }
    Ok(StepStats {
        trials: data,
        mean_steps,
        max_steps,
        steps_per_distance: if var > 0.0 { cov / var } else { 0.0 },
    })
}
