//! End-to-end validation suite: every statistical and exactness guarantee
//! the crate makes, each run at its stated tolerance against an independent
//! oracle (exhaustive enumeration, closed-form laws, or brute-force scans).
//!
//! Run with `cargo test -p grouprand-core --test acceptance -- --nocapture`
//! to see one PASS line per criterion. The heavy criteria draw 10^6 samples
//! and take a few minutes in an optimized build.

use grouprand_core::*;
use std::collections::HashMap;

fn pass(line: &str) {
    println!("PASS {line}");
}

fn counts_over<T: std::hash::Hash + Eq + Clone>(
    support: &[T],
    draws: impl Iterator<Item = T>,
) -> Vec<u64> {
    let index: HashMap<&T, usize> = support.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut counts = vec![0u64; support.len()];
    for item in draws {
        counts[*index.get(&item).expect("draw outside enumerated support")] += 1;
    }
    counts
}

#[test]
fn criterion_01_sl2z_count_law() {
    // Exhaustive-scan oracle, independent of the library's enumeration.
    let brute = |bound: i64, x_sq: f64| -> usize {
        let mut count = 0;
        for a in -bound..=bound {
            for b in -bound..=bound {
                for c in -bound..=bound {
                    for d in -bound..=bound {
                        let norm = (a * a + b * b + c * c + d * d) as f64;
                        if norm <= x_sq && a * d - b * c == 1 {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    };
    let sqrt2 = 2.0f64.sqrt();
    let n_sqrt2 = enumerate_sl2z(sqrt2).unwrap().len();
    assert_eq!(n_sqrt2, 4);
    assert_eq!(n_sqrt2, brute(1, sqrt2 * sqrt2));

    let n_2 = enumerate_sl2z(2.0).unwrap().len();
    assert_eq!(n_2, brute(2, 4.0));
    assert_eq!(n_2, 20);

    let n_200 = enumerate_sl2z(200.0).unwrap().len();
    let ratio = n_200 as f64 / (200.0 * 200.0);
    assert!(
        (5.5..=6.5).contains(&ratio),
        "N(200) = {n_200}, ratio = {ratio}"
    );
    pass(&format!(
        "criterion 1: N(sqrt2) = {n_sqrt2}, N(2) = {n_2}, N(200)/200^2 = {ratio:.4} in [5.5, 6.5]"
    ));
}

#[test]
fn criterion_02a_fancy_near_uniform_at_x5() {
    let support = enumerate_sl2z(5.0).unwrap();
    let mut stream = RandomStream::new(0x5AFE_0001);
    let draws = 1_000_000u64;
    let samples = (0..draws).map(|_| {
        let m = pick_fancy(5.0, 0.01, &mut stream).unwrap();
        assert_eq!(m.det(), 1);
        assert!(m.frobenius_norm_sq() <= 25);
        m
    });
    let counts = counts_over(&support, samples);
    let report = chi_square_uniform("SL2Z X=5", &counts).unwrap();
    assert!(
        report.tv_estimate <= 0.02,
        "TV = {} > 0.02",
        report.tv_estimate
    );
    assert!(report.p_value > 0.001, "p = {}", report.p_value);
    pass(&format!(
        "criterion 2a: X=5 eps=0.01, support {}, TV = {:.4} <= 0.02, chi-square p = {:.3} > 0.001",
        support.len(),
        report.tv_estimate,
        report.p_value
    ));
}

#[test]
fn criterion_02b_fancy_frequencies_at_minimal_bound() {
    let sqrt2 = 2.0f64.sqrt();
    let support = enumerate_sl2z(sqrt2).unwrap();
    assert_eq!(support.len(), 4);
    let mut stream = RandomStream::new(0x5AFE_0002);
    let draws = 200_000u64;
    let counts = counts_over(
        &support,
        (0..draws).map(|_| pick_fancy(sqrt2, 0.01, &mut stream).unwrap()),
    );
    let mut worst = 0.0f64;
    for &c in &counts {
        let freq = c as f64 / draws as f64;
        worst = worst.max((freq - 0.25).abs());
        assert!(
            (freq - 0.25).abs() <= 0.01,
            "frequency {freq} strays from 0.25 by more than 0.01"
        );
    }
    pass(&format!(
        "criterion 2b: X=sqrt2 eps=0.01, all 4 frequencies within {worst:.4} <= 0.01 of 0.25"
    ));
}

#[test]
fn criterion_03_naive_vs_fancy_agreement() {
    let support = enumerate_sl2z(3.0).unwrap();
    let per_sampler = 100_000u64;
    let mut stream_a = RandomStream::new(0x5AFE_0003);
    let naive = counts_over(
        &support,
        (0..per_sampler).map(|_| pick_sl_naive(3.0, &mut stream_a).unwrap()),
    );
    let mut stream_b = RandomStream::new(0x5AFE_0004);
    let fancy = counts_over(
        &support,
        (0..per_sampler).map(|_| pick_fancy(3.0, 0.01, &mut stream_b).unwrap()),
    );
    let (stat, dof, p) = chi_square_two_sample(&naive, &fancy).unwrap();
    assert!(p > 0.01, "two-sample chi-square = {stat}, dof = {dof}, p = {p}");
    pass(&format!(
        "criterion 3: X=3 naive vs fancy two-sample chi-square p = {p:.3} > 0.01 ({} draws each)",
        per_sampler
    ));
}

#[test]
fn criterion_04_cost_scales_with_inverse_epsilon() {
    let draws = 800u64;
    let mut normalized = Vec::new();
    for &eps in &[0.1, 0.03, 0.01] {
        let mut stream = RandomStream::new(0x5AFE_0005);
        let mut attempts = 0u64;
        for _ in 0..draws {
            attempts += pick_fancy_traced(5.0, eps, &mut stream).unwrap().attempts;
        }
        let mean = attempts as f64 / draws as f64;
        normalized.push((eps, mean, mean * eps));
    }
    let min = normalized.iter().map(|t| t.2).fold(f64::INFINITY, f64::min);
    let max = normalized.iter().map(|t| t.2).fold(0.0f64, f64::max);
    assert!(
        max / min <= 3.0,
        "attempts*eps spread {normalized:?} exceeds factor 3"
    );
    pass(&format!(
        "criterion 4: mean attempts at X=5 for eps 0.1/0.03/0.01 = {:.1}/{:.1}/{:.1}; attempts*eps spread factor {:.2} <= 3",
        normalized[0].1,
        normalized[1].1,
        normalized[2].1,
        max / min
    ));
}

#[test]
fn criterion_05_norm_distance_identity() {
    let oracle = enumerate_sl2z(100.0).unwrap();
    let i = HPoint::i();
    let mut worst = 0.0f64;
    for m in &oracle {
        let via_norm = translation_distance(m);
        let via_metric = hdist(&i, &m.apply(&i));
        worst = worst.max((via_norm - via_metric).abs());
    }
    assert!(worst <= 1e-9, "worst identity gap {worst}");
    pass(&format!(
        "criterion 5: |translation_distance - hdist(i, A i)| <= {worst:.2e} over {} matrices with norm <= 100",
        oracle.len()
    ));
}

#[test]
fn criterion_06_reduction_correctness_at_radius_20() {
    let mut stream = RandomStream::new(0x5AFE_0006);
    let mut worst_residual = 0.0f64;
    for _ in 0..10_000 {
        let z = pick_halfplane(20.0, &mut stream);
        // Any Err here would be an iteration-cap or precision failure.
        let pair = reduce2(&z).unwrap();
        let z0 = &pair.point;
        assert!(z0.re().abs() <= 0.5 + 1e-12);
        assert!(z0.norm_sq().sqrt() >= 1.0 - 1e-12);
        let image = pair.matrix.apply(&z);
        let residual = image.euclid_dist(z0);
        worst_residual = worst_residual.max(residual);
        assert!(residual <= 1e-9, "residual {residual}");
    }
    pass(&format!(
        "criterion 6: 10^4 reductions from radius 20, domain membership ok, worst |A z - z0| = {worst_residual:.2e} <= 1e-9, zero cap hits"
    ));
}

#[test]
fn criterion_07_lattice_ball_uniformity() {
    fn enumerate_ball(n: usize, radius: f64) -> Vec<Vec<i64>> {
        let bound = radius.floor() as i64;
        let radius_sq = radius * radius;
        let mut out = Vec::new();
        let mut current = vec![0i64; n];
        fn rec(
            k: usize,
            n: usize,
            bound: i64,
            radius_sq: f64,
            partial: i64,
            current: &mut Vec<i64>,
            out: &mut Vec<Vec<i64>>,
        ) {
            if k == n {
                out.push(current.clone());
                return;
            }
            for c in -bound..=bound {
                let sq = partial + c * c;
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

    // (n, X) = (2, 1): 5 points at 1e5 draws.
    let support2 = enumerate_ball(2, 1.0);
    assert_eq!(support2.len(), 5);
    let mut stream = RandomStream::new(0x5AFE_0007);
    let counts2 = counts_over(
        &support2,
        (0..100_000).map(|_| pick_lattice_vector(2, 1.0, &mut stream).coords().to_vec()),
    );
    let report2 = chi_square_uniform("Z^2 X=1", &counts2).unwrap();
    assert!(report2.p_value > 0.01, "p = {}", report2.p_value);

    // (n, X) = (4, 3): 425 points at 1e6 draws.
    let support4 = enumerate_ball(4, 3.0);
    assert_eq!(support4.len(), 425);
    let draws = 1_000_000u64;
    let mut stream = RandomStream::new(0x5AFE_0008);
    let counts4 = counts_over(
        &support4,
        (0..draws).map(|_| pick_lattice_vector(4, 3.0, &mut stream).coords().to_vec()),
    );
    let report4 = chi_square_uniform("Z^4 X=3", &counts4).unwrap();
    assert!(report4.p_value > 0.01, "p = {}", report4.p_value);

    // Edge effect: the outermost shell (norm 3 exactly, 104 of 425 points)
    // must receive its enumeration share within 3 sigma.
    let shell: Vec<usize> = support4
        .iter()
        .enumerate()
        .filter(|(_, v)| v.iter().map(|&c| c * c).sum::<i64>() == 9)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(shell.len(), 104);
    let shell_hits: u64 = shell.iter().map(|&i| counts4[i]).sum();
    let p_shell = 104.0 / 425.0;
    let sigma = (p_shell * (1.0 - p_shell) / draws as f64).sqrt();
    let observed = shell_hits as f64 / draws as f64;
    assert!(
        (observed - p_shell).abs() <= 3.0 * sigma,
        "shell frequency {observed} vs {p_shell} +- {sigma}"
    );
    pass(&format!(
        "criterion 7: chi-square p = {:.3} (n=2, X=1) and {:.3} (n=4, X=3) > 0.01; boundary shell at {:.4} vs {:.4} within 3 sigma",
        report2.p_value, report4.p_value, observed, p_shell
    ));
}

fn enumerate_sl_small(n: usize, p: u64) -> Vec<FpMatrix> {
    let field = PrimeField::new(p).unwrap();
    let cells = n * n;
    let total = (p as u64).pow(cells as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut rem = code;
        let entries: Vec<u64> = (0..cells)
            .map(|_| {
                let e = rem % p;
                rem /= p;
                e
            })
            .collect();
        let m = FpMatrix::new(n, field, entries).unwrap();
        if m.det() == 1 {
            out.push(m);
        }
    }
    out
}

fn enumerate_sp_4_2() -> Vec<FpMatrix> {
    let field = PrimeField::new(2).unwrap();
    let mut out = Vec::new();
    for code in 0u32..(1 << 16) {
        let entries: Vec<u64> = (0..16).map(|k| ((code >> k) & 1) as u64).collect();
        let m = FpMatrix::new(4, field, entries).unwrap();
        if is_symplectic(&m) {
            out.push(m);
        }
    }
    out
}

#[test]
fn criterion_08_finite_group_uniformity() {
    let mut lines = Vec::new();

    // SL(2,2) (order 6) and SL(2,3) (order 24) at 1e5 draws.
    for &(p, order) in &[(2u64, 6usize), (3, 24)] {
        let support = enumerate_sl_small(2, p);
        assert_eq!(support.len(), order);
        let field = PrimeField::new(p).unwrap();
        let mut stream = RandomStream::new(0x5AFE_0010 + p);
        let counts = counts_over(
            &support,
            (0..100_000).map(|_| gen_rand_sl(2, field, &mut stream)),
        );
        let report = chi_square_uniform(&format!("SL(2,{p})"), &counts).unwrap();
        assert!(report.p_value > 0.01, "SL(2,{p}) p = {}", report.p_value);
        lines.push(format!("SL(2,{p}) p = {:.3}", report.p_value));
    }

    // Sp(2,3) = SL(2,3) at 1e5 draws, every output preserving the form.
    {
        let support = enumerate_sl_small(2, 3);
        let field = PrimeField::new(3).unwrap();
        let mut stream = RandomStream::new(0x5AFE_0020);
        let counts = counts_over(
            &support,
            (0..100_000).map(|_| {
                let m = gen_rand_sp(1, field, &mut stream);
                assert!(is_symplectic(&m));
                m
            }),
        );
        let report = chi_square_uniform("Sp(2,3)", &counts).unwrap();
        assert!(report.p_value > 0.01, "Sp(2,3) p = {}", report.p_value);
        lines.push(format!("Sp(2,3) p = {:.3}", report.p_value));
    }

    // Sp(4,2) (order 720, oracle-enumerated) at 1e6 draws.
    {
        let support = enumerate_sp_4_2();
        assert_eq!(support.len(), 720);
        let field = PrimeField::new(2).unwrap();
        let mut stream = RandomStream::new(0x5AFE_0021);
        let counts = counts_over(
            &support,
            (0..1_000_000).map(|_| {
                let m = gen_rand_sp(2, field, &mut stream);
                assert!(is_symplectic(&m));
                m
            }),
        );
        let report = chi_square_uniform("Sp(4,2)", &counts).unwrap();
        assert!(report.p_value > 0.01, "Sp(4,2) p = {}", report.p_value);
        lines.push(format!("Sp(4,2) p = {:.3}", report.p_value));
    }

    pass(&format!("criterion 8: {}", lines.join(", ")));
}

#[test]
fn criterion_09_expander_walk_mixing() {
    let support = enumerate_sl_small(2, 3);
    let field = PrimeField::new(3).unwrap();
    let walks = 1_000_000u64;
    let mut tv = HashMap::new();
    for &length in &[5u64, 15, 50] {
        let mut stream = RandomStream::new(0x5AFE_0030 + length);
        let counts = counts_over(
            &support,
            (0..walks).map(|_| expander_walk_sample(2, field, length, &mut stream)),
        );
        tv.insert(length, tv_distance_uniform(&counts));
    }
    let noise = 0.005;
    assert!(tv[&50] <= 0.05, "TV(50) = {}", tv[&50]);
    assert!(tv[&15] <= tv[&5] + noise, "TV rose from L=5 to L=15");
    assert!(tv[&50] <= tv[&15] + noise, "TV rose from L=15 to L=50");
    pass(&format!(
        "criterion 9: SL(2,3) walk TV = {:.4} (L=5) -> {:.4} (L=15) -> {:.4} (L=50); TV(50) <= 0.05 and decreasing",
        tv[&5], tv[&15], tv[&50]
    ));
}

#[test]
fn criterion_10_orthogonal_and_rational() {
    // Orthogonality at n = 4 over 1e3 draws.
    let mut stream = RandomStream::new(0x5AFE_0040);
    let mut worst_defect = 0.0f64;
    for _ in 0..1_000 {
        let q = random_orthogonal(4, &mut stream);
        worst_defect = worst_defect.max(q.orthogonality_defect());
    }
    assert!(worst_defect <= 1e-12, "defect {worst_defect}");

    // First-column angle uniform at n = 2, 1e5 draws.
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut angles: Vec<f64> = (0..100_000)
        .map(|_| random_orthogonal(2, &mut stream).first_column_angle())
        .collect();
    let ks = ks_statistic(&mut angles, |t| (t / two_pi).clamp(0.0, 1.0));
    assert!(ks < 0.01, "ks = {ks}");

    // Dirichlet's count against brute force for every q <= 10^4.
    for q in 1..=10_000u64 {
        let mut brute = 0u64;
        let mut a = 1u64;
        while a * a <= q {
            let rest = q - a * a;
            let b = (rest as f64).sqrt().round() as u64;
            if b * b == rest {
                brute += 1;
            }
            a += 1;
        }
        assert_eq!(two_squares_count(q).unwrap(), brute, "q = {q}");
    }

    // Visible-point asymptotics at Q = 1000.
    let visible = visible_point_count(1000).unwrap();
    let ratio = visible as f64 / ((6.0 / std::f64::consts::PI) * 1e6);
    assert!((0.98..=1.02).contains(&ratio), "ratio = {ratio}");

    pass(&format!(
        "criterion 10: QR defect {worst_defect:.2e} <= 1e-12, angle KS {ks:.4} < 0.01, two-squares matches brute force to 10^4, visible(1000)/((6/pi)10^6) = {ratio:.5}"
    ));
}

#[test]
fn criterion_11_fuchsian_greedy_reduction() {
    let basepoint = HPoint::new(0.0, 2.0).unwrap();
    let gset = GeneratorSet::modular_group(basepoint);
    let to_base = Mobius::translate_i_to(&basepoint);
    let mut stream = RandomStream::new(0x5AFE_0050);
    let mut max_steps = 0u64;
    for _ in 0..1_000 {
        let x = to_base.apply(&pick_halfplane(10.0, &mut stream));
        // Any Err would be a step-cap hit.
        let trace = greedy_reduce(&x, &gset).unwrap();
        max_steps = max_steps.max(trace.steps);
        assert!(
            gset.dirichlet_defect(&trace.final_point) <= 1e-9,
            "Dirichlet defect {}",
            gset.dirichlet_defect(&trace.final_point)
        );
        // Orbit cross-check: input and output reduce to the same canonical
        // representative of the modular fundamental domain.
        let canon_in = reduce2(&x).unwrap().point;
        let canon_out = reduce2(&trace.final_point).unwrap().point;
        assert!(
            canon_in.euclid_dist(&canon_out) <= 1e-9,
            "orbit mismatch: {canon_in:?} vs {canon_out:?}"
        );
    }
    pass(&format!(
        "criterion 11: 10^3 greedy reductions from radius 10 terminated (max {max_steps} steps), local Dirichlet condition and orbit cross-check hold"
    ));
}
