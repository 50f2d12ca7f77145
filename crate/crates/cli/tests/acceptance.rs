//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use nalgebra::{Complex, Matrix4};
use rand::Rng;
use rand_distr::StandardNormal;
use relspin::distributions::RadialProfile;
use relspin::entanglement::concurrence_of;
use relspin::kinematics::{boost_momentum, wigner_matrix};
use relspin::protocol::{encode, verify_invariance, verify_operator_commutes};
use relspin::spin::sigma_y_sigma_y;
use relspin::{
    boost_amplitude, concurrence, reduce_spin_density, BellState, BipartiteState, ComplexMat4, FourMomentum,
    IntegratorSpec, LogicalOperator, MomentumDistribution, RandomStream, Rapidity, C64,
};
use relspin_cli::config::{SweepConfig, XValue, XiGrid};
use relspin_cli::invariance::random_logical_amplitudes;
use relspin_cli::sweep::compute_sweep;
use relspin_cli::{run_invariance_suite, SuiteOptions, SuiteVariant, SweepRecord};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn rap(xi: f64) -> Rapidity {
    Rapidity::along_z(xi).unwrap()
}

fn sweep(sigma: &[f64], x: &[XValue], xi: XiGrid) -> Vec<SweepRecord> {
    let config = SweepConfig {
        sigma_over_m: sigma.to_vec(),
        x: x.to_vec(),
        xi_grid: xi,
        integrator: IntegratorSpec::default(),
        output_path: "unused.csv".into(),
        record_timing: false,
    };
    config.validate().unwrap();
    let out = compute_sweep(&config);
    if let Some(r) = out.records.iter().find(|r| r.error.is_some()) {
        panic!("sweep row failed: {r:?}");
    }
    out.records
}

fn value(r: &SweepRecord) -> (f64, f64) {
    (r.concurrence.unwrap(), r.error_bound.unwrap())
}

fn c1_identity_boost() -> Verdict {
    let spec = IntegratorSpec::quadrature(12);
    let profile = RadialProfile::gaussian(1.0).unwrap();
    let mut families = vec![
        MomentumDistribution::entangled_gaussian(1.0, 0.0).unwrap(),
        MomentumDistribution::entangled_gaussian(1.0, 0.8).unwrap(),
        MomentumDistribution::delta_correlated(profile.clone()),
        MomentumDistribution::collinear_beam(profile.clone(), 0.7).unwrap(),
    ];
    families.extend(BellState::ALL.map(|b| MomentumDistribution::bell_manifold(b, profile.clone())));
    let mut worst: f64 = 0.0;
    for d in &families {
        for b in BellState::ALL {
            let state = BipartiteState::prepare(d, b.vector(), &spec).unwrap();
            let rho = reduce_spin_density(&state, Rapidity::IDENTITY, &spec).unwrap();
            worst = worst.max((concurrence(&rho).unwrap().value - 1.0).abs());
        }
    }
    verdict(worst <= 1e-9, format!("{} families x 4 Bell states, max |C - 1| = {worst:.1e}", families.len()))
}

fn c2_delta_limit() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut passed = true;
    for xi in [0.5, 1.0, 2.0, 5.0, 10.0] {
        for r in sweep(&[1.0, 4.0], &[XValue::Delta], XiGrid::single(xi)) {
            let (c, e) = value(&r);
            worst = worst.max((c - 1.0).abs());
            passed &= (c - 1.0).abs() <= e.max(1e-8);
        }
    }
    verdict(passed, format!("sigma/m in {{1, 4}}, 5 rapidities, max |C - 1| = {worst:.1e}"))
}

/// `(ξ, C, standard error)` from an independent 10⁷-sample Monte Carlo of
/// the boosted singlet, σ/m = 1, x = 0.
const MC_ORACLE: [(f64, f64, f64); 4] = [
    (1.0, 0.860_513_44, 5.02e-5),
    (2.0, 0.647_316_06, 1.24e-4),
    (3.0, 0.524_939_26, 1.63e-4),
    (4.0, 0.472_876_21, 1.78e-4),
];

fn c3_decoherence() -> Verdict {
    let rows = sweep(&[1.0], &[XValue::Correlation(0.0)], XiGrid { start: 0.0, stop: 4.0, step: 1.0 });
    let c: Vec<(f64, f64)> = rows.iter().map(value).collect();
    let decreasing = c.windows(2).all(|w| w[1].0 < w[0].0);
    let max_err = c.iter().map(|v| v.1).fold(0.0, f64::max);
    let drop = c[0].0 - c[4].0;
    let mut worst_sigma: f64 = 0.0;
    for (k, (_, expected, se)) in MC_ORACLE.iter().enumerate() {
        let (v, e) = c[k + 1];
        worst_sigma = worst_sigma.max((v - expected).abs() / (se * se + e * e).sqrt());
    }
    let values: Vec<String> = c.iter().map(|v| format!("{:.5}", v.0)).collect();
    verdict(
        decreasing && drop > 10.0 * max_err && worst_sigma <= 3.0,
        format!(
            "C = [{}], drop {drop:.3} vs 10 x err {:.1e}, oracle gap {worst_sigma:.2} combined sigma",
            values.join(", "),
            10.0 * max_err
        ),
    )
}

fn c4_protection_ordering() -> Verdict {
    let mut passed = true;
    let mut margins = Vec::new();
    for sigma in [1.0, 4.0] {
        for xi in [2.0, 4.0] {
            let rows = sweep(&[sigma], &[XValue::Correlation(0.0), XValue::Correlation(0.8)], XiGrid::single(xi));
            let ((c0, e0), (c8, e8)) = (value(&rows[0]), value(&rows[1]));
            let margin = (c8 - c0) / (3.0 * (e0 + e8));
            passed &= margin > 1.0;
            margins.push(format!("{margin:.0}"));
        }
    }
    verdict(passed, format!("gap / (3 x combined error) = [{}]", margins.join(", ")))
}

fn c5_continuity() -> Verdict {
    let x = [0.9, 0.99, 0.999].map(XValue::Correlation);
    let rows = sweep(&[1.0], &x, XiGrid::single(2.0));
    let c: Vec<f64> = rows.iter().map(|r| value(r).0).collect();
    let increasing = c.windows(2).all(|w| w[1] > w[0]);
    let gap = 1.0 - c[2];
    verdict(increasing && gap < 0.01, format!("C = [{:.6}, {:.6}, {:.6}], final gap {gap:.2e}", c[0], c[1], c[2]))
}

fn c6_bell_manifolds() -> Verdict {
    let variants = BellState::ALL.map(SuiteVariant::Bell);
    let spec = IntegratorSpec::default();
    let report = run_invariance_suite(&variants, &[1.0, 5.0], &spec, &SuiteOptions::default()).unwrap();
    let worst = report.rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    verdict(report.passed, format!("{} checks, max deviation {worst:.1e}", report.rows.len()))
}

fn c7_protocol() -> Verdict {
    let spec = IntegratorSpec::default();
    let profile = RadialProfile::gaussian(1.0).unwrap();
    let mut stream = RandomStream::new(7, 0);
    let (mut checks, mut passed, mut worst) = (0, true, 0.0f64);
    for _ in 0..20 {
        let (a, b) = random_logical_amplitudes(&mut stream);
        let theta = loop {
            let t: f64 = stream.rng().random_range(0.0..PI);
            if t > 0.0 {
                break t;
            }
        };
        let beam = MomentumDistribution::collinear_beam(profile.clone(), theta).unwrap().normalize(&spec).unwrap();
        let q = encode(a, b, beam).unwrap();
        for xi in [1.0, 2.0, 5.0] {
            let mut reports = vec![verify_invariance(&q, rap(xi), &spec).unwrap()];
            for op in [LogicalOperator::not(), LogicalOperator::hadamard()] {
                reports.push(verify_operator_commutes(&q, &op, rap(xi), &spec).unwrap());
            }
            for r in reports {
                checks += 1;
                passed &= r.passed;
                worst = worst.max(r.max_deviation);
            }
        }
    }
    verdict(passed, format!("{checks} checks on 20 random qubits, max deviation {worst:.1e}"))
}

fn random_momentum(rng: &mut impl Rng) -> FourMomentum {
    FourMomentum::new(rng.random_range(0.0..50.0), rng.random_range(0.0..=PI), rng.random_range(0.0..TAU)).unwrap()
}

fn c8_pointwise_identity() -> Verdict {
    let spec = IntegratorSpec::default();
    let d = MomentumDistribution::delta_correlated(RadialProfile::gaussian(4.0).unwrap());
    let state = BipartiteState::prepare(&d, BellState::PsiMinus.vector(), &spec).unwrap();
    let mut stream = RandomStream::new(8, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let rng = stream.rng();
        let p = random_momentum(rng);
        let xi: f64 = rng.random_range(-12.0..12.0);
        let g = state.momentum_amplitude(&p, &p).unwrap();
        let out = boost_amplitude(&state, &p, &p, rap(xi)).unwrap();
        let expected = state.spin_state().scale(C64::new(g, 0.0));
        worst = worst.max(out.amplitudes.max_abs_diff(&expected));
    }
    verdict(worst <= 1e-12, format!("1000 random (p, xi), max entry deviation {worst:.1e}"))
}

fn c9_kinematics() -> Verdict {
    let mut stream = RandomStream::new(9, 0);
    let rng = stream.rng();
    let (mut unitary, mut identity, mut shell, mut collinear) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let p = random_momentum(rng);
        let xi = rap(rng.random_range(-12.0..12.0));
        unitary = unitary.max(wigner_matrix(&p, xi).unitarity_defect().abs());
        let w0 = wigner_matrix(&p, Rapidity::IDENTITY).matrix();
        identity = identity.max(w0.max_abs_diff(&relspin::ComplexMat2::identity()));
        let b = boost_momentum(&p, xi);
        let m2 = b.energy() * b.energy() - b.magnitude() * b.magnitude();
        shell = shell.max((m2 - 1.0).abs() / (b.energy() * b.energy()));
        let theta = if rng.random::<bool>() { 0.0 } else { PI };
        let z = FourMomentum::new(rng.random_range(0.0..50.0), theta, rng.random_range(0.0..TAU)).unwrap();
        let w = wigner_matrix(&z, xi);
        collinear = collinear.max((w.alpha - 1.0).abs().max(w.beta.abs()));
    }
    verdict(
        unitary <= 1e-12 && identity <= 1e-14 && shell <= 1e-10 && collinear <= 1e-12,
        format!(
            "10^4 cases each: unitarity {unitary:.1e}, identity {identity:.1e}, mass shell {shell:.1e}, collinear {collinear:.1e}"
        ),
    )
}

fn to_na(m: &ComplexMat4) -> Matrix4<Complex<f64>> {
    Matrix4::from_fn(|i, j| m.0[i][j])
}

/// Concurrence from the singular values of `√ρ (σ_y ⊗ σ_y) √ρ*`, with
/// nalgebra doing all linear algebra.
fn hermitian_path_oracle(rho: &ComplexMat4) -> f64 {
    let eig = to_na(rho).symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|v| Complex::new(v.max(0.0).sqrt(), 0.0));
    let root = eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();
    let a = root * to_na(&sigma_y_sigma_y()) * root.conjugate();
    let mut l: Vec<f64> = a.singular_values().iter().copied().collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Hilbert–Schmidt ensemble: `G G† / tr(G G†)` with `G` complex Ginibre.
fn random_density(rng: &mut impl Rng) -> ComplexMat4 {
    let g = ComplexMat4::new(std::array::from_fn(|_| {
        std::array::from_fn(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    }));
    let rho = g * g.adjoint();
    rho.scale(C64::new(1.0 / rho.trace().re, 0.0))
}

fn c10_concurrence_oracle() -> Verdict {
    let mut stream = RandomStream::new(10, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let rho = random_density(stream.rng());
        worst = worst.max((concurrence_of(&rho, 0.0).unwrap().value - hermitian_path_oracle(&rho)).abs());
    }
    let mut werner: f64 = 0.0;
    for l in [0.0, 0.25, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let rho = BellState::PsiMinus.projector().scale(C64::new(l, 0.0))
            + ComplexMat4::identity().scale(C64::new((1.0 - l) / 4.0, 0.0));
        let c = concurrence_of(&rho, 0.0).unwrap().value;
        werner = werner.max((c - ((3.0 * l - 1.0) / 2.0).max(0.0)).abs());
    }
    verdict(
        worst <= 1e-8 && werner <= 1e-10,
        format!("1000 random states, max gap {worst:.1e}; Werner family max gap {werner:.1e}"),
    )
}

fn c11_backends() -> Verdict {
    let quad_spec = IntegratorSpec::default();
    let mc_spec = IntegratorSpec::monte_carlo(1_000_000, 11);
    let d = MomentumDistribution::entangled_gaussian(1.0, 0.8).unwrap();
    let state = BipartiteState::prepare(&d, BellState::PsiMinus.vector(), &quad_spec).unwrap();
    let quad = reduce_spin_density(&state, rap(2.0), &quad_spec).unwrap();
    let mc = reduce_spin_density(&state, rap(2.0), &mc_spec).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let gap = (quad.rho.0[i][j] - mc.rho.0[i][j]).norm();
            let combined = quad.entry_errors[i][j].hypot(mc.entry_errors[i][j]);
            let ratio = if combined > 0.0 {
                gap / combined
            } else if gap == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(ratio);
        }
    }
    verdict(worst <= 3.0, format!("worst entry gap {worst:.2} combined errors"))
}

fn c12_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for backend in ["monte_carlo", "quadrature"] {
        for name in ["a.csv", "b.csv"] {
            let out = dir.path().join(format!("{backend}-{name}"));
            let status = std::process::Command::new(env!("CARGO_BIN_EXE_relspin"))
                .args(["sweep", "--sigma-over-m", "1,4", "--x", "0,0.8,delta", "--xi", "0:3:1.5"])
                .args(["--backend", backend, "--samples", "50000", "--nodes", "8", "--seed", "12"])
                .arg("--out")
                .arg(&out)
                .stderr(std::process::Stdio::null())
                .status()
                .unwrap();
            assert!(status.success());
            outputs.push(std::fs::read(out).unwrap());
        }
    }
    let same = outputs[0] == outputs[1] && outputs[2] == outputs[3];
    verdict(same, format!("two backends, two runs each, {} and {} bytes", outputs[0].len(), outputs[2].len()))
}

type Criterion = (u32, &'static str, fn() -> Verdict, Option<Duration>);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "identity-boost exactness", c1_identity_boost, Some(Duration::from_secs(10))),
        (2, "delta-limit invariance", c2_delta_limit, Some(Duration::from_secs(60))),
        (3, "boost-induced decoherence", c3_decoherence, Some(Duration::from_secs(600))),
        (4, "momentum-entanglement protection ordering", c4_protection_ordering, Some(Duration::from_secs(600))),
        (5, "continuity toward the delta limit", c5_continuity, None),
        (6, "Bell manifold invariance suite", c6_bell_manifolds, None),
        (7, "protocol invariance", c7_protocol, None),
        (8, "pointwise algebraic identity", c8_pointwise_identity, None),
        (9, "kinematics property suite", c9_kinematics, Some(Duration::from_secs(30))),
        (10, "concurrence oracle equivalence", c10_concurrence_oracle, None),
        (11, "backend cross-validation", c11_backends, None),
        (12, "determinism", c12_determinism, None),
    ];
    let mut failures = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let passed = v.passed && in_time;
        failures += usize::from(!passed);
        let timing = match limit {
            Some(l) => format!("{:.1}s of {}s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.1}s", elapsed.as_secs_f64()),
        };
        println!("{} {id:>2} {name}: {} [{timing}]", if passed { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{} of 12 criteria passed", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
