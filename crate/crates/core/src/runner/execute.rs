//! Experiment execution: grid fan-out, deterministic merge, persistence.

use std::collections::BTreeMap;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::config::{Experiment, RunConfig};
use super::output::{num, write_artifacts, write_manifest, Artifact, RunManifest, Table};
use crate::analysis::*;
use crate::cohomology::{
    cycle_families, defect_table, families, gauge_invariance_check, protected_signature, signature,
    sym_resolved_from_defects, zn_zn_signature, Coboundary, SPTClass,
};
use crate::error::{Error, Result};
use crate::fermion::{quasienergy_spectrum, FloquetStep};
use crate::model::{AdiabaticPath, Sign};
use crate::statevector::{
    many_body_spectrum, teleport, teleport_trivial, PureState, TeleportReport, SPECTRUM_CAP,
};

/// What an experiment hands back before persistence. `failure` is raised
/// after the outputs are written.
#[derive(Default)]
struct Outcome {
    artifacts: Vec<Artifact>,
    summary: BTreeMap<String, serde_json::Value>,
    failure: Option<Error>,
}

impl Outcome {
    fn with(artifacts: Vec<Artifact>) -> Self {
        Self {
            artifacts,
            ..Self::default()
        }
    }
}

/// Runs `config` on `jobs` worker threads (all cores when `None`), writes
/// its outputs and `manifest.json` into `config.output_dir`.
pub fn execute(config: &RunConfig, jobs: Option<usize>) -> Result<RunManifest> {
    config.validate()?;
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let outcome = pool.install(|| run_experiment(config))?;
    let outputs = write_artifacts(&config.output_dir, &outcome.artifacts)?;
    let manifest = RunManifest {
        config: config.clone(),
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix_seconds: started,
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
        jobs: pool.current_num_threads(),
        status: if outcome.failure.is_some() {
            "failed"
        } else {
            "ok"
        }
        .to_string(),
        outputs,
        summary: outcome.summary,
    };
    write_manifest(&config.output_dir, &manifest)?;
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(manifest),
    }
}

/// Computes every output body without touching the file system.
pub fn render(config: &RunConfig) -> Result<Vec<Artifact>> {
    config.validate()?;
    Ok(run_experiment(config)?.artifacts)
}

fn run_experiment(config: &RunConfig) -> Result<Outcome> {
    match config.experiment {
        Experiment::Sweep => sweep(config),
        Experiment::StopRepeat => stop_repeat(config),
        Experiment::CrossingScan => crossing_scan(config),
        Experiment::Scaling => scaling(config),
        Experiment::Spectrum => spectrum(config),
        Experiment::Teleport => teleport_runs(config),
        Experiment::SreFamilies => sre_families(config),
        Experiment::Compare => compare(config),
    }
}

fn path(config: &RunConfig, n_steps: usize) -> AdiabaticPath {
    AdiabaticPath::new(n_steps).with_r0(config.r0)
}

/// Grid points `(engine, L, L_A, N_steps)` in sorted order.
fn sweep_points(config: &RunConfig) -> Result<Vec<(EngineKind, usize, usize, usize)>> {
    let mut pts = Vec::new();
    for kind in config.engines()? {
        for l in config.sites()? {
            for l_a in config.l_a(l)? {
                for n in config.n_steps()? {
                    pts.push((kind, l, l_a, n));
                }
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).expect("integer keys"));
    pts.dedup();
    Ok(pts)
}

fn sweep(config: &RunConfig) -> Result<Outcome> {
    let pts = sweep_points(config)?;
    let single = pts.len() == 1;
    let artifacts = pts
        .par_iter()
        .map(|&(kind, l, l_a, n)| {
            let p = path(config, n);
            let s = run_adiabatic(kind, &p, l, l_a, &config.initial.state(l)?)?;
            let mut header: Vec<String> = ["step", "theta", "alpha", "beta", "s1_even"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            header.extend((1..=l).map(|i| format!("x_{i}")));
            let mut t = Table::new(&header);
            for (k, (s1, x)) in s.s1_even.iter().zip(&s.x_site).enumerate() {
                let fp = p.params_at(k, l)?;
                let mut row = vec![
                    k.to_string(),
                    num(p.theta(k)?),
                    num(fp.alpha),
                    num(fp.beta),
                    num(*s1),
                ];
                row.extend(x.iter().map(|v| num(*v)));
                t.row(row);
            }
            let name = if single {
                "series.csv".to_string()
            } else {
                format!("series_L{l}_LA{l_a}_N{n}_{kind}.csv")
            };
            Ok(t.into_artifact(name))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::with(artifacts))
}

fn stop_repeat(config: &RunConfig) -> Result<Outcome> {
    let mut pts = Vec::new();
    for (kind, l, l_a, n) in sweep_points(config)? {
        for e in config.epsilon()? {
            pts.push((kind, l, l_a, n, e));
        }
    }
    let r = config.repeats();
    let results = pts
        .par_iter()
        .map(|&(kind, l, l_a, n, e)| {
            let p = path(config, n);
            let s = run_stop_and_repeat(kind, &p, l, l_a, e, r, &config.initial.state(l)?)?;
            let fit = if s.len() >= MIN_FIT_LEN {
                Some(cosine_fit(&s.s1_even)?)
            } else {
                None
            };
            let stop = (n / 2) as i64 + e;
            let pi_mode = pi_mode_at(&p.params_at(stop as usize, l)?)?;
            Ok((s, fit, pi_mode))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut series = Table::new(&["engine", "L", "L_A", "N_steps", "epsilon", "rep", "s1_even"]);
    let mut fits = Table::new(&[
        "engine",
        "L",
        "L_A",
        "N_steps",
        "epsilon",
        "amplitude",
        "frequency",
        "phase",
        "residual",
        "pi_mode",
    ]);
    for (&(kind, l, l_a, n, e), (s, fit, pi_mode)) in pts.iter().zip(&results) {
        let key = [
            kind.to_string(),
            l.to_string(),
            l_a.to_string(),
            n.to_string(),
            e.to_string(),
        ];
        for (rep, v) in s.s1_even.iter().enumerate() {
            let mut row = key.to_vec();
            row.extend([rep.to_string(), num(*v)]);
            series.row(row);
        }
        let mut row = key.to_vec();
        match fit {
            Some(f) => row.extend([
                num(f.amplitude),
                num(f.frequency),
                num(f.phase),
                num(f.residual),
            ]),
            None => row.extend(std::iter::repeat_n(String::new(), 4)),
        }
        row.push(num(*pi_mode));
        fits.row(row);
    }
    Ok(Outcome::with(vec![
        series.into_artifact("stop_repeat.csv"),
        fits.into_artifact("fits.csv"),
    ]))
}

fn crossing_scan(config: &RunConfig) -> Result<Outcome> {
    let pts = sweep_points(config)?;
    let results = pts
        .par_iter()
        .map(|&(kind, l, l_a, n)| {
            let s = run_adiabatic(kind, &path(config, n), l, l_a, &config.initial.state(l)?)?;
            envelope_crossing(&s.s1_even)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["engine", "L", "L_A", "N_steps", "N_c", "ratio"]);
    for (&(kind, l, l_a, n), c) in pts.iter().zip(&results) {
        let (n_c, ratio) = match c {
            Some(c) => (c.n_c.to_string(), num(c.ratio)),
            None => ("none".to_string(), "none".to_string()),
        };
        t.row(vec![
            kind.to_string(),
            l.to_string(),
            l_a.to_string(),
            n.to_string(),
            n_c,
            ratio,
        ]);
    }
    Ok(Outcome::with(vec![t.into_artifact("crossing.csv")]))
}

fn scaling(config: &RunConfig) -> Result<Outcome> {
    let pts = sweep_points(config)?;
    let fits = pts
        .par_iter()
        .map(|&(kind, l, l_a, n)| {
            let s = run_adiabatic(kind, &path(config, n), l, l_a, &config.initial.state(l)?)?;
            fm_tail_fit(&s.s1_even)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&[
        "engine",
        "L",
        "L_A",
        "N_steps",
        "amplitude",
        "frequency",
        "phase",
        "residual",
    ]);
    let mut groups: BTreeMap<(EngineKind, usize), (Vec<usize>, Vec<f64>)> = BTreeMap::new();
    for (&(kind, l, l_a, n), f) in pts.iter().zip(&fits) {
        t.row(vec![
            kind.to_string(),
            l.to_string(),
            l_a.to_string(),
            n.to_string(),
            num(f.amplitude),
            num(f.frequency),
            num(f.phase),
            num(f.residual),
        ]);
        if l_a == l / 2 {
            let g = groups.entry((kind, n)).or_default();
            g.0.push(l);
            g.1.push(f.amplitude);
        }
    }
    let mut slopes = Table::new(&["engine", "N_steps", "slope", "slope_stderr", "adiabatic"]);
    let mut summary = BTreeMap::new();
    for ((kind, n), (ls, amps)) in &groups {
        if ls.len() < MIN_SCALING_POINTS {
            continue;
        }
        let f = amplitude_scaling(ls, amps)?;
        let adiabatic = f.is_adiabatic(0.05);
        slopes.row(vec![
            kind.to_string(),
            n.to_string(),
            num(f.slope),
            num(f.slope_stderr),
            adiabatic.to_string(),
        ]);
        summary.insert(format!("slope_{kind}_N{n}"), json!(f.slope));
    }
    let mut artifacts = vec![
        t.into_artifact("scaling.csv"),
        slopes.into_artifact("scaling_fit.csv"),
    ];
    if config.profile {
        artifacts.extend(profiles(config)?);
    }
    Ok(Outcome {
        artifacts,
        summary,
        failure: None,
    })
}

/// Amplitude against `L_A ∈ 2..=L−2` from the tail of each sweep.
fn profiles(config: &RunConfig) -> Result<Vec<Artifact>> {
    let mut pts = Vec::new();
    for kind in config.engines()? {
        for l in config.sites()? {
            for n in config.n_steps()? {
                if l >= 2 + MIN_PROFILE_POINTS {
                    pts.push((kind, l, n));
                }
            }
        }
    }
    let results = pts
        .par_iter()
        .map(|&(kind, l, n)| {
            let l_as: Vec<usize> = (2..=l - 2).collect();
            let rows = run_adiabatic_tail(
                kind,
                &path(config, n),
                l,
                &l_as,
                fm_tail_window(n),
                &config.initial.state(l)?,
            )?;
            let points = l_as
                .iter()
                .zip(&rows)
                .map(|(&l_a, row)| Ok((l_a, cosine_fit(row)?.amplitude)))
                .collect::<Result<Vec<_>>>()?;
            let fit = domain_wall_profile(l, &points)?;
            Ok((points, fit))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut prof = Table::new(&["engine", "L", "N_steps", "L_A", "amplitude", "sine_fit"]);
    let mut fits = Table::new(&["engine", "L", "N_steps", "kappa", "residual"]);
    for (&(kind, l, n), (points, fit)) in pts.iter().zip(&results) {
        for &(l_a, a) in points {
            let sine = fit.kappa * (std::f64::consts::PI * l_a as f64 / l as f64).sin();
            prof.row(vec![
                kind.to_string(),
                l.to_string(),
                n.to_string(),
                l_a.to_string(),
                num(a),
                num(sine),
            ]);
        }
        fits.row(vec![
            kind.to_string(),
            l.to_string(),
            n.to_string(),
            num(fit.kappa),
            num(fit.residual),
        ]);
    }
    Ok(vec![
        prof.into_artifact("profile.csv"),
        fits.into_artifact("profile_fit.csv"),
    ])
}

fn spectrum(config: &RunConfig) -> Result<Outcome> {
    let sites = config.sites()?;
    let thetas = config.thetas()?;
    let mut pts = Vec::new();
    for &l in &sites {
        for n in config.n_steps()? {
            pts.push((l, n));
        }
    }
    let traces = pts
        .par_iter()
        .map(|&(l, n)| pi_mode_trace(&path(config, n), l))
        .collect::<Result<Vec<_>>>()?;
    let mut trace = Table::new(&["L", "N_steps", "step", "theta", "alpha", "beta", "pi_mode"]);
    for (&(l, n), tr) in pts.iter().zip(&traces) {
        let p = path(config, n);
        for (k, w) in tr.iter().enumerate() {
            let fp = p.params_at(k, l)?;
            trace.row(vec![
                l.to_string(),
                n.to_string(),
                k.to_string(),
                num(p.theta(k)?),
                num(fp.alpha),
                num(fp.beta),
                num(*w),
            ]);
        }
    }

    let probe = AdiabaticPath::new(1).with_r0(config.r0);
    let mut single = Table::new(&["L", "theta", "index", "quasienergy"]);
    for &l in &sites {
        for &th in &thetas {
            let spec =
                quasienergy_spectrum(&FloquetStep::new(&probe.params_at_theta(th, l)?).to_map())?;
            for (i, w) in spec.phases().iter().enumerate() {
                single.row(vec![l.to_string(), num(th), i.to_string(), num(*w)]);
            }
        }
    }
    let mut artifacts = vec![
        trace.into_artifact("pi_mode.csv"),
        single.into_artifact("quasienergies.csv"),
    ];

    if config.engines()?.contains(&EngineKind::Statevector) {
        let mut mb = Table::new(&[
            "L",
            "theta",
            "index",
            "quasienergy",
            "parity",
            "plus_overlap",
        ]);
        for &l in sites.iter().filter(|&&l| l <= SPECTRUM_CAP) {
            let plus = PureState::prepare(&crate::model::ProductState::all_plus(l))?;
            for &th in &thetas {
                let spec = many_body_spectrum(&probe.params_at_theta(th, l)?)?;
                let ov = spec.overlaps(&plus);
                let mut order: Vec<usize> = (0..spec.len()).collect();
                order.sort_by(|&a, &b| spec.quasienergies[a].total_cmp(&spec.quasienergies[b]));
                for (i, &j) in order.iter().enumerate() {
                    mb.row(vec![
                        l.to_string(),
                        num(th),
                        i.to_string(),
                        num(spec.quasienergies[j]),
                        spec.parities[j].to_string(),
                        num(ov[j]),
                    ]);
                }
            }
        }
        artifacts.push(mb.into_artifact("many_body.csv"));
    }
    Ok(Outcome::with(artifacts))
}

fn random_qubit(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    let v = [
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    ];
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

fn teleport_runs(config: &RunConfig) -> Result<Outcome> {
    let theta1 = config.theta1.unwrap_or(0.0);
    let n_ramp = config.n_ramp.unwrap_or(0);
    if theta1 > 0.0 && n_ramp == 0 {
        return Err(Error::Config("theta1 > 0 requires n_ramp > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let psis: Vec<[Complex64; 2]> = (0..config.trials())
        .map(|_| random_qubit(&mut rng))
        .collect();
    let mut pts = Vec::new();
    for l in config.sites()? {
        for trial in 0..psis.len() {
            pts.push((l, trial));
        }
    }
    let reports = pts
        .par_iter()
        .map(|&(l, trial)| {
            let psi = psis[trial];
            Ok((teleport(psi, l, theta1, n_ramp)?, teleport_trivial(psi, l)?))
        })
        .collect::<Result<Vec<(TeleportReport, TeleportReport)>>>()?;
    let mut t = Table::new(&[
        "mode",
        "L",
        "trial",
        "psi0_re",
        "psi0_im",
        "psi1_re",
        "psi1_im",
        "chi",
        "ancilla",
        "q1",
        "probability",
        "fidelity",
    ]);
    let mut worst = 1.0f64;
    for (&(l, trial), (floquet, trivial)) in pts.iter().zip(&reports) {
        let psi = psis[trial];
        for (mode, rep) in [("floquet", floquet), ("trivial", trivial)] {
            for (&(a, q), b) in &rep.branches {
                t.row(vec![
                    mode.to_string(),
                    l.to_string(),
                    trial.to_string(),
                    num(psi[0].re),
                    num(psi[0].im),
                    num(psi[1].re),
                    num(psi[1].im),
                    num(rep.chi),
                    a.to_string(),
                    if q == Sign::Plus { "+" } else { "-" }.to_string(),
                    num(b.probability),
                    b.fidelity.map(num).unwrap_or_default(),
                ]);
            }
        }
        if let Some(f) = floquet.branch(0, Sign::Plus).fidelity {
            worst = worst.min(f);
        }
    }
    let mut summary = BTreeMap::new();
    summary.insert("min_fidelity_ancilla0_plus".to_string(), json!(worst));
    Ok(Outcome {
        artifacts: vec![t.into_artifact("teleport.csv")],
        summary,
        failure: None,
    })
}

fn fmt_elem(e: &[usize]) -> String {
    let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn sre_families(config: &RunConfig) -> Result<Outcome> {
    let n = config
        .group_n
        .ok_or_else(|| Error::Config("missing N".into()))?;
    let m = config.m.ok_or_else(|| Error::Config("missing m".into()))?;
    let c = config.pumped_charge();
    let (group, spt) = SPTClass::zn_zn(n, m)?;
    let d = spt.d(&group).unwrap_or(1);
    let table = defect_table(&group, &spt, &Coboundary::trivial(&group))?;
    let parts = families(&table)?;
    let raw = signature(&sym_resolved_from_defects(&table)?);
    let protected = protected_signature(&table, config.seed)?;
    let perm = cycle_families(&parts, &c)?;
    let gauge = gauge_invariance_check(&group, &spt, 10, config.seed)?;

    let mut text = String::new();
    text.push_str(&format!("group Z{n} x Z{n}, class m={m}, d={d}\n"));
    text.push_str(&format!(
        "support H: {}\n",
        table
            .h_elements()
            .iter()
            .map(|e| fmt_elem(e))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    text.push_str(&format!("fixed-point signature {raw}\n"));
    text.push_str(&format!(
        "protected signature {protected} (closed form {})\n",
        zn_zn_signature(n, m)
    ));
    text.push_str(&format!("families ({}):\n", parts.len()));
    for (label, members) in &parts.families {
        let ms: Vec<String> = members.iter().map(|e| fmt_elem(e)).collect();
        text.push_str(&format!("F{} = {{{}}}\n", fmt_elem(label), ms.join(", ")));
    }
    text.push_str(&format!("cycling by c = {}:\n", fmt_elem(&c)));
    for (from, to) in &perm {
        text.push_str(&format!("F{} -> F{}\n", fmt_elem(from), fmt_elem(to)));
    }
    text.push_str(&format!(
        "gauge invariance over {} coboundaries: {}\n",
        gauge.trials,
        if gauge.passed() { "pass" } else { "FAIL" }
    ));

    let mut summary = BTreeMap::new();
    summary.insert("protected_signature".to_string(), json!(protected.0));
    summary.insert("families".to_string(), json!(parts.len()));
    summary.insert("gauge_invariant".to_string(), json!(gauge.passed()));
    let failure = gauge.failure.as_ref().map(|f| {
        Error::Invariant(format!(
            "gauge check failed at trial {}: {}",
            f.trial, f.reason
        ))
    });
    Ok(Outcome {
        artifacts: vec![Artifact {
            name: "families.txt".to_string(),
            body: text,
        }],
        summary,
        failure,
    })
}

fn compare(config: &RunConfig) -> Result<Outcome> {
    let mut pts: Vec<(usize, usize, usize)> = sweep_points(config)?
        .into_iter()
        .map(|(_, l, l_a, n)| (l, l_a, n))
        .collect();
    pts.dedup();
    let results = pts
        .par_iter()
        .map(|&(l, l_a, n)| {
            let drive = path_drive(&path(config, n), l)?;
            compare_engines(&drive, l, l_a, &config.initial.state(l)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["L", "L_A", "N_steps", "max_discrepancy", "passed"]);
    let mut worst = 0.0f64;
    for (&(l, l_a, n), r) in pts.iter().zip(&results) {
        t.row(vec![
            l.to_string(),
            l_a.to_string(),
            n.to_string(),
            num(r.max_discrepancy),
            r.passed.to_string(),
        ]);
        worst = worst.max(r.max_discrepancy);
    }
    let mut summary = BTreeMap::new();
    summary.insert("max_discrepancy".to_string(), json!(worst));
    let failure = results.iter().any(|r| !r.passed).then(|| {
        Error::Invariant(format!(
            "engines disagree by {worst:e} (tolerance {ENGINE_AGREEMENT_TOL:e})"
        ))
    });
    Ok(Outcome {
        artifacts: vec![t.into_artifact("compare.csv")],
        summary,
        failure,
    })
}
