//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use fspt::analysis::*;
use fspt::cohomology::*;
use fspt::fermion::{fold_phase, pfaffian};
use fspt::model::{AdiabaticPath, FloquetParams, ProductState, Sign};
use fspt::statevector::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn sweet_spot_alternation() -> Outcome {
    let mut worst = 0.0f64;
    for l in [2, 4, 8] {
        let p = FloquetParams::sweet_spot(l).unwrap();
        let drive = vec![p; 12];
        for kind in [EngineKind::Fermion, EngineKind::Statevector] {
            let s = run_sequence(kind, &drive, l, l / 2, &ProductState::all_plus(l)).unwrap();
            for (k, v) in s.s1_even.iter().enumerate() {
                let ideal = if k % 2 == 0 { 1.0 } else { 0.0 };
                worst = worst.max((v - ideal).abs());
            }
        }
    }
    outcome(worst < 1e-12, format!("max deviation {worst:.2e}"))
}

fn cross_engine_oracle() -> Outcome {
    let l = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let drive: Vec<FloquetParams> = (0..50)
            .map(|_| FloquetParams::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), l).unwrap())
            .collect();
        let signs: Vec<Sign> = (0..l)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect();
        let init = ProductState::new(signs).unwrap();
        let l_a = rng.gen_range(1..l);
        let a = run_sequence(EngineKind::Fermion, &drive, l, l_a, &init).unwrap();
        let b = run_sequence(EngineKind::Statevector, &drive, l, l_a, &init).unwrap();
        worst = worst.max(a.max_discrepancy(&b).unwrap());
    }
    outcome(worst < 1e-9, format!("max |Δ| {worst:.2e}"))
}

fn random_antisymmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-1.0..1.0);
            a[(i, j)] = v;
            a[(j, i)] = -v;
        }
    }
    a
}

fn pfaffian_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for t in 0..1000 {
        let n = 2 * (1 + t % 20);
        let a = random_antisymmetric(n, &mut rng);
        let pf = pfaffian(&a).unwrap();
        let det = a.clone().determinant();
        worst = worst.max((pf * pf - det).abs() / det.abs());
    }
    let mut closed = 0.0f64;
    for _ in 0..100 {
        let a = random_antisymmetric(4, &mut rng);
        let want = a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)];
        closed = closed.max((pfaffian(&a).unwrap() - want).abs());
    }
    outcome(
        worst < 1e-8 && closed < 1e-14,
        format!("max relative |Pf² − det| {worst:.2e}, 4x4 closed form {closed:.2e}"),
    )
}

fn crossing_ratio(l: usize, n_steps: usize) -> f64 {
    let s = run_adiabatic(
        EngineKind::Fermion,
        &AdiabaticPath::new(n_steps),
        l,
        l / 2,
        &ProductState::all_plus(l),
    )
    .unwrap();
    envelope_crossing(&s.s1_even)
        .unwrap()
        .map_or(f64::NAN, |r| r.ratio)
}

fn crossing_location(ratio_5000: f64) -> Outcome {
    outcome(
        (ratio_5000 - 0.507).abs() <= 0.005,
        format!("N_c/N_steps = {ratio_5000:.4} at L=100, N_steps=5000 (target 0.507 ± 0.005)"),
    )
}

fn crossing_convergence(ratios: &[f64; 3]) -> Outcome {
    let dist: Vec<f64> = ratios.iter().map(|r| (r - 0.5).abs()).collect();
    let monotone = dist[0] > dist[1] && dist[1] > dist[2];
    let close = ratios[2] <= 0.505;
    outcome(
        monotone && close,
        format!(
            "ratios {:.4}, {:.4}, {:.4} for N_steps 1000, 5000, 10000 (monotone: {monotone}, last ≤ 0.505: {close})",
            ratios[0], ratios[1], ratios[2]
        ),
    )
}

fn beating_frequency() -> Outcome {
    let path = AdiabaticPath::new(10000);
    let l = 20;
    let rows: Vec<(i64, f64, f64)> = [-100i64, -50, 0, 50, 100]
        .par_iter()
        .map(|&eps| {
            let s = run_stop_and_repeat(
                EngineKind::Fermion,
                &path,
                l,
                l / 2,
                eps,
                200,
                &ProductState::all_plus(l),
            )
            .unwrap();
            let fit = cosine_fit(&s.s1_even).unwrap();
            let stop = (5000 + eps) as usize;
            let pi_mode = pi_mode_at(&path.params_at(stop, l).unwrap()).unwrap();
            (eps, fit.frequency, pi_mode)
        })
        .collect();
    let worst = rows
        .iter()
        .map(|(_, w, p)| (w - p).abs())
        .fold(0.0, f64::max);
    let detail = rows
        .iter()
        .map(|(e, w, p)| format!("ε={e}: ω_fit {w:.4} vs {p:.4}"))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(worst < 0.02, format!("max gap {worst:.4}; {detail}"))
}

fn fm_fit(l: usize) -> FitResult {
    let s = run_adiabatic(
        EngineKind::Fermion,
        &AdiabaticPath::new(10000),
        l,
        l / 2,
        &ProductState::all_plus(l),
    )
    .unwrap();
    fm_tail_fit(&s.s1_even).unwrap()
}

fn deep_fm_frequency() -> Outcome {
    let omega = -fm_fit(8).frequency;
    let target = -(PI - 1.0);
    outcome(
        (omega - target).abs() < 0.02,
        format!("ω = {omega:.4} vs −(π−1) = {target:.4}"),
    )
}

fn amplitude_scaling_check() -> Outcome {
    let ls = [10, 20, 30, 40];
    let amps: Vec<f64> = ls.par_iter().map(|&l| fm_fit(l).amplitude).collect();
    let fit = amplitude_scaling(&ls, &amps).unwrap();
    outcome(
        fit.is_adiabatic(0.05),
        format!(
            "slope {:.4} ± {:.4}; A = {:?}",
            fit.slope,
            fit.slope_stderr,
            amps.iter().map(|a| format!("{a:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn domain_wall() -> Outcome {
    let l = 30;
    let n_steps = 10000;
    let l_as: Vec<usize> = (2..=l - 2).collect();
    let rows = run_adiabatic_tail(
        EngineKind::Fermion,
        &AdiabaticPath::new(n_steps),
        l,
        &l_as,
        fm_tail_window(n_steps),
        &ProductState::all_plus(l),
    )
    .unwrap();
    let points: Vec<(usize, f64)> = l_as
        .iter()
        .zip(&rows)
        .map(|(&l_a, row)| (l_a, cosine_fit(row).unwrap().amplitude))
        .collect();
    let fit = domain_wall_profile(l, &points).unwrap();
    outcome(
        fit.residual < 0.1,
        format!(
            "κ = {:.4}, normalized residual {:.4}",
            fit.kappa, fit.residual
        ),
    )
}

fn circular_gap(a: f64, b: f64) -> f64 {
    fold_phase(a - b).abs()
}

fn many_body_l4() -> Outcome {
    let path = AdiabaticPath::new(2);
    let fm = path.params_at(2, 4).unwrap();
    let spec = many_body_spectrum(&fm).unwrap();
    let beta = fm.beta;
    let present = |e: f64| {
        spec.quasienergies
            .iter()
            .map(|&w| circular_gap(w, e))
            .fold(f64::INFINITY, f64::min)
    };
    let (e0, e1) = (present(1.5 * beta), present(0.5 * beta));

    let topo = path.params_at(0, 4).unwrap();
    let spec = many_body_spectrum(&topo).unwrap();
    let plus = PureState::prepare(&ProductState::all_plus(4)).unwrap();
    let ov = spec.overlaps(&plus);
    let mut idx: Vec<usize> = (0..ov.len()).collect();
    idx.sort_by(|&a, &b| ov[b].total_cmp(&ov[a]));
    let split = circular_gap(spec.quasienergies[idx[0]], spec.quasienergies[idx[1]]);
    let pi_dev = (split - PI).abs();
    outcome(
        e0 < 1e-8 && e1 < 1e-8 && pi_dev < 1e-8,
        format!("|E_0 − 3β/2| {e0:.1e}, |E_1 − β/2| {e1:.1e}, |Δω − π| at θ=0 {pi_dev:.1e}"),
    )
}

fn random_qubit(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    let v = [
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    ];
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

fn teleportation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let psis: Vec<[Complex64; 2]> = (0..20).map(|_| random_qubit(&mut rng)).collect();
    let mut worst_ideal = 1.0f64;
    for l in [4, 6] {
        for psi in &psis {
            let r = teleport(*psi, l, 0.0, 0).unwrap();
            worst_ideal = worst_ideal.min(r.branch(0, Sign::Plus).fidelity.unwrap_or(0.0));
        }
    }
    let adiabatic = teleport(psis[0], 6, 0.15 * PI, 2000)
        .unwrap()
        .branch(0, Sign::Plus)
        .fidelity
        .unwrap_or(0.0);
    let trivial = psis
        .iter()
        .map(|psi| {
            teleport_trivial(*psi, 6)
                .unwrap()
                .branch(0, Sign::Plus)
                .fidelity
                .unwrap_or(0.0)
        })
        .fold(1.0, f64::min);
    outcome(
        worst_ideal >= 1.0 - 1e-10 && adiabatic >= 0.99 && trivial < 0.99,
        format!(
            "θ=0 min fidelity 1 − {:.1e}; adiabatic {adiabatic:.6}; trivial-drive min {trivial:.4}",
            1.0 - worst_ideal
        ),
    )
}

fn eigenstate_cycling(l: usize, theta: f64) -> f64 {
    let p = AdiabaticPath::new(1).params_at_theta(theta, l).unwrap();
    let spec = many_body_spectrum(&p).unwrap();
    let mut worst = 0.0f64;
    for j in 0..spec.len() {
        let v = spec.eigenstate(j);
        for n in [1, 2] {
            worst = worst.max(
                sre_cycling_check(&p, &v, l / 2, n, 1)
                    .unwrap()
                    .max_deviation,
            );
        }
    }
    worst
}

fn sre_cycling() -> Outcome {
    let l = 6;
    let sweet = FloquetParams::sweet_spot(l).unwrap();
    let spec = many_body_spectrum(&sweet).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut exact = 0.0f64;
    for _ in 0..10 {
        let mut amps = vec![Complex64::new(0.0, 0.0); spec.len()];
        for j in 0..spec.len() {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for (a, v) in amps.iter_mut().zip(spec.eigenvectors.column(j).iter()) {
                *a += c * v;
            }
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        let psi = PureState::from_amplitudes(amps).unwrap();
        for n in [1, 2] {
            exact = exact.max(
                sre_cycling_check(&sweet, &psi, l / 2, n, 1)
                    .unwrap()
                    .max_deviation,
            );
        }
    }
    let theta = 0.1 * PI / 4.0;
    let near = eigenstate_cycling(l, theta);
    let larger = eigenstate_cycling(8, theta);
    outcome(
        exact < 1e-12 && near < 1e-8,
        format!(
            "sweet spot {exact:.1e}; θ=0.1π/4 eigenstates L=6 {near:.2e} (L=8 for reference {larger:.2e})"
        ),
    )
}

fn cohomology_signatures() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=6 {
        for m in 0..n {
            let (g, spt) = SPTClass::zn_zn(n, m).unwrap();
            let table = defect_table(&g, &spt, &Coboundary::trivial(&g)).unwrap();
            if protected_signature(&table, 1).unwrap() != zn_zn_signature(n, m) {
                failures.push(format!("signature N={n} m={m}"));
            }
        }
    }

    let (g, spt) = SPTClass::zn_zn(4, 2).unwrap();
    let p = families(&defect_table(&g, &spt, &Coboundary::trivial(&g)).unwrap()).unwrap();
    let listed: [[[usize; 2]; 4]; 4] = [
        [[0, 0], [0, 2], [2, 0], [2, 2]],
        [[0, 1], [0, 3], [2, 1], [2, 3]],
        [[1, 0], [1, 2], [3, 0], [3, 2]],
        [[1, 1], [1, 3], [3, 1], [3, 3]],
    ];
    for fam in listed {
        let label = p.label_of(&fam[0]).cloned().unwrap_or_default();
        let want: Vec<Element> = fam.iter().map(|q| q.to_vec()).collect();
        if p.members(&label) != Some(want.as_slice()) {
            failures.push(format!("family {:?}", fam[0]));
        }
    }
    if p.len() != 4 {
        failures.push(format!("{} families for N=4 m=2", p.len()));
    }
    let d = 2;
    for c in [[1usize, 0], [0, 1], [1, 1]] {
        let perm = cycle_families(&p, &c).unwrap();
        for (from, to) in &perm {
            let want = vec![(from[0] + c[0]) % d, (from[1] + c[1]) % d];
            if *to != want {
                failures.push(format!("cycling {from:?} by {c:?}"));
            }
        }
        let shifted = [(c[0] + d) % 4, c[1]];
        if cycle_families(&p, &shifted).unwrap() != perm {
            failures.push(format!("c={c:?} vs {shifted:?}"));
        }
    }

    let (g6, spt6) = SPTClass::zn_zn(6, 3).unwrap();
    let p6 = families(&defect_table(&g6, &spt6, &Coboundary::trivial(&g6)).unwrap()).unwrap();
    let f00: Vec<Element> = vec![vec![0, 0], vec![0, 3], vec![3, 0], vec![3, 3]];
    if p6.members(&[0, 0]) != Some(f00.as_slice()) {
        failures.push("F_00 for N=6 m=3".into());
    }

    for (n, m) in [(4, 2), (6, 3), (6, 2), (5, 0)] {
        let (g, spt) = SPTClass::zn_zn(n, m).unwrap();
        let report = gauge_invariance_check(&g, &spt, 10, 99).unwrap();
        if !report.passed() {
            failures.push(format!("gauge N={n} m={m}: {:?}", report.failure));
        }
    }
    let pass = failures.is_empty();
    outcome(
        pass,
        if pass {
            "30 signatures, families, cycling and gauge invariance".to_string()
        } else {
            failures.join("; ")
        },
    )
}

fn fspt_counting() -> Outcome {
    let zn: Vec<usize> = (1..=8)
        .map(|n| fspt_count(&AbelianGroup::zn(n).unwrap()).1)
        .collect();
    let z2z2 = fspt_count(&AbelianGroup::zn_zn(2).unwrap());
    outcome(
        zn.iter().enumerate().all(|(i, &c)| c == i + 1) && z2z2 == (2, 8),
        format!("Z_N for N=1..8: {zn:?}; Z2×Z2 {z2z2:?}"),
    )
}

type Job = Box<dyn Fn() -> Outcome + Sync>;

fn main() -> ExitCode {
    let start = Instant::now();
    let ratios: Vec<f64> = [1000, 5000, 10000]
        .par_iter()
        .map(|&n| crossing_ratio(100, n))
        .collect();
    let ratios = [ratios[0], ratios[1], ratios[2]];

    let jobs: Vec<(&str, Job)> = vec![
        ("sweet-spot alternation", Box::new(sweet_spot_alternation)),
        ("cross-engine oracle", Box::new(cross_engine_oracle)),
        ("Pfaffian property suite", Box::new(pfaffian_suite)),
        (
            "phase-transition crossing",
            Box::new(move || crossing_location(ratios[1])),
        ),
        (
            "crossing-ratio convergence",
            Box::new(move || crossing_convergence(&ratios)),
        ),
        ("beating frequency match", Box::new(beating_frequency)),
        ("deep-FM frequency", Box::new(deep_fm_frequency)),
        ("amplitude scaling", Box::new(amplitude_scaling_check)),
        ("domain-wall profile", Box::new(domain_wall)),
        ("many-body spectrum L=4", Box::new(many_body_l4)),
        ("teleportation", Box::new(teleportation)),
        ("SRE cycling", Box::new(sre_cycling)),
        ("cohomology signatures", Box::new(cohomology_signatures)),
        ("FSPT counting", Box::new(fspt_counting)),
    ];
    let results: Vec<(Outcome, f64)> = jobs
        .par_iter()
        .map(|(_, job)| {
            let t = Instant::now();
            let o = job();
            (o, t.elapsed().as_secs_f64())
        })
        .collect();

    let mut failed = 0;
    for (i, ((name, _), (o, secs))) in jobs.iter().zip(&results).enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("{tag} {:>2} {name} ({secs:.1}s): {}", i + 1, o.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        jobs.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
