//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use codesep::cli::{fit_pipeline, run_sweep, DataSource, FitOutput, HeaderArg, SnrProtocol, SweepConfig, SweepOutput};
use codesep::codesep_core::classifiers::{train, ClassifierKind, ClassifierSpec};
use codesep::codesep_core::coding::{coding_rate, log2det_identity_plus, per_class_coding_rate, CodingConfig, Variant};
use codesep::codesep_core::datagen::{
    build_snr_taskset, generate, preprocess, GeneratorSpec, NoiseSplit, Preprocess, Shape,
};
use codesep::codesep_core::harness::{
    estimate_ability, fit_sigmoid, task_accuracies, theta_grid, SigmoidParams, SvmFamily,
};
use codesep::codesep_core::measures::{
    density_measure, dsi_measure, lsc_measure, n2_measure, rs_measure, DensityScaling, NeighborScope,
    DEFAULT_DENSITY_THRESHOLD,
};
use codesep::codesep_core::probe::{synthetic_progressive_dump, ProbeConfig};
use codesep::codesep_core::rng::rng_from;
use codesep::codesep_core::stats::{kendall_tau, median, spearman};
use codesep::codesep_core::{LabeledMatrix, Matrix};
use codesep::parallel;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};

type Outcome = Result<String, String>;

const SEEDS: u64 = 10;

fn iris_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/iris.csv")
}

fn iris_source() -> DataSource {
    DataSource::File {
        path: iris_path(),
        label_col: "last".into(),
        delimiter: ',',
        header: HeaderArg::Auto,
    }
}

fn blobs_surrogate() -> DataSource {
    DataSource::Generator {
        spec: GeneratorSpec::new(Shape::Blobs, 75, 0).with_noise(2.0),
    }
}

fn reference_protocol() -> SnrProtocol {
    SnrProtocol {
        snr_lo: 5.0,
        snr_hi: 20.0,
        levels: 16,
        trials: 20,
        split: NoiseSplit::Equal,
    }
}

fn random_labeled(rng: &mut impl Rng, d: usize, k: usize, m: usize, scale: f64) -> LabeledMatrix {
    let data = Matrix::from_fn(d, m, |_, _| {
        scale * (2.0 * rng.random::<f64>() - 1.0) + rng.random_range(-1.0..1.0)
    });
    let mut labels: Vec<usize> = (0..m).map(|j| j % k).collect();
    for i in (1..m).rev() {
        labels.swap(i, rng.random_range(0..=i));
    }
    LabeledMatrix::new(data, labels).unwrap()
}

// 1 ----------------------------------------------------------------------

fn rate_inequality() -> Outcome {
    let cfg = CodingConfig::new(2.0, Variant::NonZeroMean).unwrap();
    let mut rng = rng_from(101);
    let mut violations = Vec::new();
    for case in 0..1000 {
        let d = rng.random_range(1..=10);
        let k = rng.random_range(2..=5);
        let m = rng.random_range(2 * k..=200);
        let scale = rng.random_range(0.1..5.0);
        let x = random_labeled(&mut rng, d, k, m, scale);
        let total = coding_rate(x.data(), &cfg).unwrap();
        let parts = per_class_coding_rate(&x, &cfg).unwrap();
        if total < parts {
            violations.push(format!("case {case} (d={d}, k={k}, m={m}): {total} < {parts}"));
        }
    }
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (d, mk, k) = (
            rng.random_range(1..=10),
            rng.random_range(2..=40),
            rng.random_range(2..=5),
        );
        let block = Matrix::from_fn(d, mk, |_, _| rng.random_range(-4.0..4.0));
        let data = Matrix::from_fn(d, mk * k, |i, j| block.get(i, j % mk));
        let x = LabeledMatrix::new(data, (0..mk * k).map(|j| j / mk).collect()).unwrap();
        worst = worst.max((rs_measure(&x, &cfg).unwrap() - 1.0).abs());
    }
    let detail = format!(
        "1000 random instances, {} violations; 100 duplicated-class sets, max |RS-1| = {worst:.1e}",
        violations.len()
    );
    if violations.is_empty() && worst < 1e-9 {
        Ok(detail)
    } else {
        Err(format!(
            "{detail}; first: {}",
            violations.first().map_or("-", String::as_str)
        ))
    }
}

// 2 ----------------------------------------------------------------------

fn kernel_oracle() -> Outcome {
    let mut rng = rng_from(202);
    let mut worst = 0.0f64;
    let mut wide = 0;
    for _ in 0..500 {
        let d = rng.random_range(1..=16);
        let m = rng.random_range(1..=24);
        wide += usize::from(d > m);
        let scale = rng.random_range(0.05..20.0);
        let x = Matrix::from_fn(d, m, |_, _| scale * (2.0 * rng.random::<f64>() - 1.0));
        let alpha = d as f64 / (m as f64 * 0.25);
        let got = log2det_identity_plus(&x, alpha).unwrap();
        let xn = DMatrix::from_column_slice(d, m, x.as_slice());
        let eig = (&xn * xn.transpose()).symmetric_eigen().eigenvalues;
        let want: f64 = eig.iter().map(|l| (1.0 + alpha * l).log2()).sum();
        worst = worst.max((got - want).abs() / want.abs());
    }
    let detail = format!("500 matrices ({wide} with d > m), max relative error {worst:.2e}");
    if worst < 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 3 ----------------------------------------------------------------------

const SHAPE_ORDER: [Shape; 6] = [
    Shape::Blobs,
    Shape::Moons,
    Shape::Circles,
    Shape::Xor,
    Shape::Spirals,
    Shape::Random,
];

fn shape_ordering() -> Outcome {
    let cfg = CodingConfig::default();
    let mut ordered = 0;
    let mut blobs = Vec::new();
    let mut random = Vec::new();
    for seed in 0..SEEDS {
        let rs: Vec<f64> = SHAPE_ORDER
            .iter()
            .map(|&s| rs_measure(&generate(&GeneratorSpec::new(s, 500, seed)).unwrap(), &cfg).unwrap())
            .collect();
        ordered += usize::from(rs.windows(2).all(|w| w[0] < w[1]));
        blobs.push(rs[0]);
        random.push(rs[5]);
    }
    let blobs_ok = blobs.iter().all(|v| (v - 0.1402).abs() <= 0.15);
    let random_ok = random.iter().all(|v| (v - 0.9982).abs() <= 0.05);
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        format!("[{lo:.4}, {hi:.4}]")
    };
    let detail = format!(
        "ordering held on {ordered}/{SEEDS} seeds; Blobs RS {} (target 0.1402 ± 0.15); Random RS {} (target 0.9982 ± 0.05)",
        range(&blobs),
        range(&random)
    );
    if ordered >= 8 && blobs_ok && random_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 4 ----------------------------------------------------------------------

fn blobs_sd(sd: f64, seed: u64, per_class: usize) -> LabeledMatrix {
    generate(&GeneratorSpec::new(Shape::Blobs, per_class, seed).with_noise(sd)).unwrap()
}

fn sd_trends() -> Outcome {
    let cfg = CodingConfig::default();
    let sds: Vec<f64> = (1..=9).map(f64::from).collect();
    let mut monotone = [0usize; 3];
    let mut plateau = 0;
    let mut lsc_ranges = Vec::new();
    for seed in 0..SEEDS {
        let sets: Vec<LabeledMatrix> = sds.iter().map(|&sd| blobs_sd(sd, seed, 300)).collect();
        let rs: Vec<f64> = sets.iter().map(|x| rs_measure(x, &cfg).unwrap()).collect();
        let dsi: Vec<f64> = sets.iter().map(|x| dsi_measure(x).unwrap()).collect();
        let den: Vec<f64> = sets
            .iter()
            .map(|x| density_measure(x, DEFAULT_DENSITY_THRESHOLD, DensityScaling::Raw).unwrap())
            .collect();
        let lsc: Vec<f64> = sets[2..].iter().map(|x| lsc_measure(x).unwrap()).collect();
        for (hit, v) in monotone.iter_mut().zip([&rs, &dsi, &den]) {
            *hit += usize::from(spearman(&sds, v).unwrap_or(f64::NAN) >= 0.95);
        }
        let r =
            lsc.iter().copied().fold(f64::NEG_INFINITY, f64::max) - lsc.iter().copied().fold(f64::INFINITY, f64::min);
        plateau += usize::from(r < 0.05);
        lsc_ranges.push(r);
    }
    let detail = format!(
        "Spearman ≥ 0.95 on RS {}/{SEEDS}, DSI {}/{SEEDS}, Density {}/{SEEDS} seeds; LSC range over SD 3..9 < 0.05 on {plateau}/{SEEDS} seeds (median range {:.3})",
        monotone[0],
        monotone[1],
        monotone[2],
        median(&lsc_ranges)
    );
    if monotone.iter().all(|&h| h >= 8) && plateau >= 8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 5 ----------------------------------------------------------------------

fn dist(x: &Matrix, i: usize, j: usize) -> f64 {
    x.col(i)
        .iter()
        .zip(x.col(j))
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

fn brute_ks(a: &[f64], b: &[f64]) -> f64 {
    let cdf = |s: &[f64], t: f64| s.iter().filter(|&&v| v <= t).count() as f64 / s.len() as f64;
    a.iter()
        .chain(b)
        .map(|&t| (cdf(a, t) - cdf(b, t)).abs())
        .fold(0.0, f64::max)
}

fn brute_dsi(x: &LabeledMatrix) -> f64 {
    let l = x.labels();
    let mut sum = 0.0;
    for c in 0..x.classes() {
        let (mut intra, mut inter) = (Vec::new(), Vec::new());
        for i in 0..x.len() {
            for j in 0..x.len() {
                if l[i] == c && l[j] == c && i < j {
                    intra.push(dist(x.data(), i, j));
                } else if l[i] == c && l[j] != c {
                    inter.push(dist(x.data(), i, j));
                }
            }
        }
        sum += brute_ks(&intra, &inter);
    }
    1.0 - sum / x.classes() as f64
}

fn brute_nearest(x: &LabeledMatrix, i: usize, keep: impl Fn(usize) -> bool) -> f64 {
    (0..x.len())
        .filter(|&j| j != i && keep(j))
        .map(|j| dist(x.data(), i, j))
        .fold(f64::INFINITY, f64::min)
}

fn brute_n2(x: &LabeledMatrix) -> f64 {
    let l = x.labels();
    let (mut nn, mut ne) = (0.0, 0.0);
    for i in 0..x.len() {
        nn += brute_nearest(x, i, |j| l[j] == l[i]);
        ne += brute_nearest(x, i, |j| l[j] != l[i]);
    }
    if ne == 0.0 {
        1.0
    } else {
        1.0 - 1.0 / (1.0 + nn / ne)
    }
}

fn brute_lsc(x: &LabeledMatrix) -> f64 {
    let (m, l) = (x.len(), x.labels());
    let mut total = 0usize;
    for i in 0..m {
        let r = brute_nearest(x, i, |j| l[j] != l[i]);
        total += (0..m).filter(|&j| j != i && dist(x.data(), i, j) < r).count();
    }
    1.0 - total as f64 / (m * m) as f64
}

fn brute_density(x: &Matrix, t: f64) -> f64 {
    let m = x.cols();
    let edges = (0..m)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .filter(|&(i, j)| dist(x, i, j) < t)
        .count();
    1.0 - 2.0 * edges as f64 / (m * (m - 1)) as f64
}

fn distance_oracles() -> Outcome {
    let mut rng = rng_from(505);
    let mut mismatches = Vec::new();
    for case in 0..200 {
        let k = rng.random_range(2..=4);
        let m = rng.random_range(2 * k..=50);
        let d = rng.random_range(1..=4);
        let data = Matrix::from_fn(d, m, |_, _| (rng.random::<f64>() * 6.0).round() / 4.0);
        let mut labels: Vec<usize> = (0..m).map(|j| j % k).collect();
        for i in (1..m).rev() {
            labels.swap(i, rng.random_range(0..=i));
        }
        let x = LabeledMatrix::new(data, labels).unwrap();
        let t = rng.random_range(0.1..1.0);
        let pairs = [
            ("dsi", dsi_measure(&x).unwrap(), brute_dsi(&x)),
            ("n2", n2_measure(&x, NeighborScope::SameClass).unwrap(), brute_n2(&x)),
            ("lsc", lsc_measure(&x).unwrap(), brute_lsc(&x)),
            (
                "density",
                density_measure(&x, t, DensityScaling::Raw).unwrap(),
                brute_density(x.data(), t),
            ),
        ];
        for (name, got, want) in pairs {
            if got != want {
                mismatches.push(format!("case {case} {name}: {got} vs {want}"));
            }
        }
    }
    let detail = format!("200 datasets × 4 measures, {} inexact", mismatches.len());
    if mismatches.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; first: {}", mismatches[0]))
    }
}

// 6 ----------------------------------------------------------------------

fn preprocessing() -> Outcome {
    let cfg = CodingConfig::default();
    let methods = [
        Preprocess::MinMax,
        Preprocess::MeanNorm,
        Preprocess::Center,
        Preprocess::Standardize,
    ];
    let mut hits = [0usize; 4];
    for seed in 0..SEEDS {
        let sets: Vec<LabeledMatrix> = (1..=9).map(|sd| blobs_sd(f64::from(sd), seed, 300)).collect();
        let raw: Vec<f64> = sets.iter().map(|x| rs_measure(x, &cfg).unwrap()).collect();
        for (h, &method) in hits.iter_mut().zip(&methods) {
            let rs: Vec<f64> = sets
                .iter()
                .map(|x| rs_measure(&preprocess(x, method).unwrap(), &cfg).unwrap())
                .collect();
            *h += usize::from(kendall_tau(&raw, &rs).unwrap_or(f64::NAN) == 1.0);
        }
    }
    let detail = methods
        .iter()
        .zip(&hits)
        .map(|(m, h)| format!("{} τ=1 on {h}/{SEEDS}", m.name()))
        .collect::<Vec<_>>()
        .join(", ");
    if hits.iter().all(|&h| h >= 8) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 7 ----------------------------------------------------------------------

fn sweep_config(source: DataSource) -> SweepConfig {
    SweepConfig {
        source,
        snr: reference_protocol(),
        classifiers: ClassifierKind::ALL.iter().map(|&k| ClassifierSpec::new(k)).collect(),
        coding: CodingConfig::default(),
        paper_defaults: true,
    }
}

fn correlation() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, source) in [("iris", iris_source()), ("blobs", blobs_surrogate())] {
        let (_, out) = run_sweep(&sweep_config(source), 0).map_err(|e| e.to_string())?;
        for c in &out.correlations {
            let r = c.pearson.unwrap_or(f64::NAN);
            ok &= r > 0.8;
            parts.push(format!("{name}/{} r={r:.3}", c.classifier.name()));
        }
    }
    let detail = parts.join(", ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 8 ----------------------------------------------------------------------

fn sigmoid_round_trip() -> Outcome {
    let truth = SigmoidParams {
        u: 0.95,
        l: 0.30,
        a: 8.0,
        b: 0.5,
    };
    let theta = theta_grid(20);
    let exact: Vec<f64> = theta.iter().map(|&t| truth.eval(t)).collect();
    let p = fit_sigmoid(&theta, &exact).map_err(|e| e.to_string())?.params;
    let exact_err = [(p.u, truth.u), (p.l, truth.l), (p.a, truth.a), (p.b, truth.b)]
        .iter()
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max);
    let noise = Normal::new(0.0, 0.02).unwrap();
    let mut rng = rng_from(808);
    let mut rel: [Vec<f64>; 4] = Default::default();
    for _ in 0..100 {
        let y: Vec<f64> = theta.iter().map(|&t| truth.eval(t) + noise.sample(&mut rng)).collect();
        let p = fit_sigmoid(&theta, &y).map_err(|e| e.to_string())?.params;
        for (r, (g, w)) in rel
            .iter_mut()
            .zip([(p.u, truth.u), (p.l, truth.l), (p.a, truth.a), (p.b, truth.b)])
        {
            r.push(((g - w) / w).abs());
        }
    }
    let med: Vec<f64> = rel.iter().map(|r| median(r)).collect();
    let detail = format!(
        "exact max abs error {exact_err:.1e}; noisy median relative error u {:.3} l {:.3} a {:.3} b {:.3}",
        med[0], med[1], med[2], med[3]
    );
    if exact_err < 1e-4 && med.iter().all(|&m| m < 0.10) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 9, 10 ------------------------------------------------------------------

/// The SVM task family on the Iris SNR tasks with the held-out LogReg.
fn iris_family() -> Result<FitOutput, String> {
    let seed = 0;
    let config = sweep_config(iris_source());
    let (loaded, sweep): (_, SweepOutput) = run_sweep(&config, seed).map_err(|e| e.to_string())?;
    let p = config.snr;
    let taskset = build_snr_taskset(&loaded.data, p.snr_lo, p.snr_hi, p.levels, p.trials, seed, p.split)
        .map_err(|e| e.to_string())?;
    let specs = SvmFamily::default().specs(seed).map_err(|e| e.to_string())?;
    let curves = parallel::build_task_curves(&specs, &taskset).map_err(|e| e.to_string())?;
    let held = ClassifierSpec::log_reg().with_seed(seed);
    let acc = task_accuracies(&train(&held, &taskset.train).map_err(|e| e.to_string())?, &taskset)
        .map_err(|e| e.to_string())?;
    fit_pipeline(
        &curves.theta,
        &curves.p_acc,
        &sweep.sweep.rs_mean,
        Some(&sweep.sweep.snr_db),
        Some((Some(held.kind), acc)),
        4,
    )
    .map_err(|e| e.to_string())
}

fn ability(fit: &FitOutput) -> Outcome {
    let set = &fit.curve_set;
    let mut parts = Vec::new();
    let mut ok = true;
    for target in [0.2, 0.5, 0.8] {
        let mut acc = vec![0.0; set.tasks.len()];
        for (i, t) in set.tasks.iter().enumerate() {
            acc[t.task] = set.model(i, target);
        }
        match estimate_ability(set, &acc) {
            Ok(e) => {
                ok &= (e.theta - target).abs() <= 0.02;
                parts.push(format!("θ={target}: θ̂={:.4}", e.theta));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("θ={target}: {e}"));
            }
        }
    }
    match &fit.held_out {
        Some(h) => match (h.window_spread, &h.estimate) {
            (Some(s), Some(e)) => {
                ok &= s < 0.1;
                parts.push(format!(
                    "held-out log_reg θ̂={:.4}, spread over {} windows {s:.4}",
                    e.theta,
                    h.window_thetas.len()
                ));
            }
            _ => {
                ok = false;
                parts.push(format!(
                    "held-out estimate unavailable ({})",
                    h.error.as_deref().unwrap_or("too few mid-curve tasks")
                ));
            }
        },
        None => ok = false,
    }
    let detail = parts.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn difficulty_vs_rs(fit: &FitOutput) -> Outcome {
    let b = fit.b_vs_rs.unwrap_or(f64::NAN);
    let s = fit.slope_vs_rs.unwrap_or(f64::NAN);
    let detail = format!("Spearman(rs, b) = {b:.3} (want ≥ 0.8); Spearman(rs, (u−l)·a) = {s:.3} (want ≤ −0.8)");
    if b >= 0.8 && s <= -0.8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 11 ---------------------------------------------------------------------

fn layer_probe() -> Outcome {
    let dump = synthetic_progressive_dump(4, 10, 100, 3, 16, 0).map_err(|e| e.to_string())?;
    let report = parallel::probe(&dump, &ProbeConfig::default()).map_err(|e| e.to_string())?;
    let finals: Vec<f64> = report.layers.iter().map(|l| l.final_rs).collect();
    let deltas: Vec<f64> = report.layers.iter().map(|l| l.delta_rs).collect();
    let dec = finals.windows(2).all(|w| w[0] > w[1]);
    let inc = deltas.windows(2).all(|w| w[0] < w[1]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" > ");
    let detail = format!(
        "final RS {}; ΔRS {}",
        fmt(&finals),
        deltas.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" < ")
    );
    if dec && inc && finals.len() == 4 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 12 ---------------------------------------------------------------------

fn run_twice(args: &[&str], files: &[&Path]) -> Result<bool, String> {
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = Command::new(env!("CARGO_BIN_EXE_codesep"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!(
                "`{}` failed: {}",
                args.join(" "),
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        let mut bytes = out.stdout;
        for f in files {
            bytes.extend(std::fs::read(f).map_err(|e| e.to_string())?);
        }
        outputs.push(bytes);
    }
    Ok(outputs[0] == outputs[1])
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name);
    let iris = iris_path();
    let iris = iris.to_str().unwrap();
    let gen = p("gen.csv");
    let pre = p("pre.csv");
    let sweep = p("sweep.json");
    let probe_csv = p("probe.csv");
    let first = Command::new(env!("CARGO_BIN_EXE_codesep"))
        .args([
            "sweep",
            "--input",
            iris,
            "--trials",
            "3",
            "--seed",
            "7",
            "-o",
            sweep.to_str().unwrap(),
        ])
        .status()
        .map_err(|e| e.to_string())?;
    if !first.success() {
        return Err("sweep for the fit input failed".into());
    }
    let cases: Vec<(&str, Vec<&str>, Vec<&Path>)> = vec![
        (
            "measure",
            vec!["measure", "--shape", "moons", "--n", "150", "--seed", "7"],
            vec![],
        ),
        (
            "generate",
            vec![
                "generate",
                "--shape",
                "spirals",
                "--n",
                "80",
                "--seed",
                "7",
                "--data",
                gen.to_str().unwrap(),
            ],
            vec![&gen],
        ),
        (
            "preprocess",
            vec![
                "preprocess",
                "--input",
                iris,
                "--method",
                "standardize",
                "--data",
                pre.to_str().unwrap(),
            ],
            vec![&pre],
        ),
        (
            "sweep",
            vec!["sweep", "--input", iris, "--trials", "3", "--seed", "7"],
            vec![],
        ),
        (
            "fit",
            vec!["fit", "--sweep", sweep.to_str().unwrap(), "--variants", "8"],
            vec![],
        ),
        (
            "probe",
            vec![
                "probe",
                "--synthetic",
                "--seed",
                "7",
                "--csv",
                probe_csv.to_str().unwrap(),
            ],
            vec![&probe_csv],
        ),
    ];
    let mut same = Vec::new();
    let mut differ = Vec::new();
    for (name, args, files) in &cases {
        if run_twice(args, files)? {
            same.push(*name);
        } else {
            differ.push(*name);
        }
    }
    let detail = format!(
        "byte-identical: {}; differing: {}",
        same.join(", "),
        if differ.is_empty() {
            "none".into()
        } else {
            differ.join(", ")
        }
    );
    if differ.is_empty() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let secs = Duration::as_secs_f64(&start.elapsed());
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {n:>2} [{tag}] {name}: {detail} ({secs:.1}s)");
    };
    report(1, "coding-rate inequality", &mut rate_inequality);
    report(2, "log-det kernel oracle", &mut kernel_oracle);
    report(3, "synthetic shape ordering", &mut shape_ordering);
    report(4, "measures vs Blobs SD", &mut sd_trends);
    report(5, "distance-measure oracles", &mut distance_oracles);
    report(6, "preprocessing consistency", &mut preprocessing);
    report(7, "accuracy vs separability", &mut correlation);
    report(8, "sigmoid round trip", &mut sigmoid_round_trip);
    let family = iris_family();
    report(9, "ability inverse consistency", &mut || {
        family.as_ref().map_err(Clone::clone).and_then(ability)
    });
    report(10, "difficulty vs RS", &mut || {
        family.as_ref().map_err(Clone::clone).and_then(difficulty_vs_rs)
    });
    report(11, "layer probe ordering", &mut layer_probe);
    report(12, "CLI determinism", &mut determinism);
    if failed == 0 {
        println!("acceptance: all 12 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 12 criteria failed");
        ExitCode::FAILURE
    }
}
