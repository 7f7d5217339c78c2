//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use sphere_spectra_core::constants::tube_integral_floor;
use sphere_spectra_core::harness::{offsets_table, OffsetStatus, OracleKind};
use sphere_spectra_core::{
    arctan_cubed_factor, compute_bound_constants, gen_clifford_torus, sphere_volume, tube_integral,
    verify_oracles, verify_surface, volume_upper_bound, AnalyticSurface, GeneratorSpec, SurfaceOptions,
    SurfaceSource, VerificationReport,
};

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn run(id: u32, title: &str, budget: Duration, body: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut out = Outcome::new();
    body(&mut out);
    let elapsed = start.elapsed();
    out.require(
        elapsed <= budget,
        format!("runtime {:.2} s exceeds {:.0} s", elapsed.as_secs_f64(), budget.as_secs_f64()),
    );
    let ok = out.failures.is_empty();
    println!(
        "{} criterion {id}: {title} ({:.2} s; {})",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        out.notes.join("; ")
    );
    for f in &out.failures {
        println!("    failed: {f}");
    }
    ok
}

fn constant_chain(out: &mut Outcome) {
    let mut min_a_margin = f64::INFINITY;
    let mut min_b_margin = f64::INFINITY;
    for n in 2..=64 {
        let c = compute_bound_constants(n).expect("n ≥ 2");
        let (a_floor, b_ceiling) = ((n as f64 - 1.0) * (n * n) as f64 / 32000.0, 5.0 * (n * n) as f64 / 216.0);
        out.require(c.a_n > a_floor, format!("a_{n} = {} not above {a_floor}", c.a_n));
        out.require(c.b_n < b_ceiling, format!("b_{n} = {} not below {b_ceiling}", c.b_n));
        min_a_margin = min_a_margin.min(c.a_n / a_floor - 1.0);
        min_b_margin = min_b_margin.min(1.0 - c.b_n / b_ceiling);
    }
    let (lo, hi) = (7.0 / 200.0, 1.0 / 27.0);
    let mut n = 2.0f64;
    let mut count = 0;
    while n <= 1e6 {
        let k = n.round() as usize;
        let f = arctan_cubed_factor(k).expect("n ≥ 2");
        out.require(lo <= f && f <= hi, format!("f({k}) = {f} outside [7/200, 1/27]"));
        count += 1;
        n *= 1.1;
    }
    let f = arctan_cubed_factor(1_000_000).unwrap();
    out.require(lo <= f && f <= hi, format!("f(10⁶) = {f} outside the window"));
    out.note(format!(
        "min relative margins a {min_a_margin:.3}, b {min_b_margin:.3}; window held at {} grid points",
        count + 1
    ));
}

fn surface(spec: GeneratorSpec) -> VerificationReport {
    verify_surface(&SurfaceSource::Generator(spec), &SurfaceOptions::default()).expect("surface verification runs")
}

fn clifford_end_to_end(out: &mut Outcome, yang_yau: &mut Option<VerificationReport>) {
    let r = surface(GeneratorSpec::Clifford { res_u: 128, res_v: 128 });
    let l1 = r.spectrum.lambda1;
    let lam = r.curvature.lambda_discrete;
    let bound = r.bound.bound_discrete;
    out.require((1.98..=2.02).contains(&l1), format!("λ₁ = {l1} outside [1.98, 2.02]"));
    out.require((1.386..=1.442).contains(&lam), format!("Λ = {lam} outside [1.386, 1.442]"));
    out.require(1.0 < bound, format!("bound {bound} not above n/2"));
    out.require(bound <= l1, format!("bound {bound} exceeds λ₁ = {l1}"));
    out.require(l1 <= 2.0, format!("λ₁ = {l1} exceeds n = 2"));
    out.require((bound - 1.000_016_3).abs() < 1e-6, format!("bound {bound} is not ≈ 1.0000163"));
    out.require(r.verdicts.all_passed(), format!("verdicts {:?}", r.verdicts));
    out.note(format!(
        "λ₁ = {l1:.6} (×{}), Λ = {lam:.6}, bound = {bound:.9}, residual {:.1e}",
        r.spectrum.multiplicity, r.spectrum.residual
    ));
    *yang_yau = Some(r);
}

fn equator(out: &mut Outcome) {
    let r = surface(GeneratorSpec::Equator { subdiv: 5 });
    let l1 = r.spectrum.lambda1;
    out.require((1.98..=2.02).contains(&l1), format!("λ₁ = {l1} outside [1.98, 2.02]"));
    out.require(r.spectrum.multiplicity == 3, format!("multiplicity {} ≠ 3", r.spectrum.multiplicity));
    out.require(r.curvature.lambda_discrete <= 0.05, format!("Λ = {}", r.curvature.lambda_discrete));
    out.require(r.bound.bound_discrete == 2.0, format!("bound {} ≠ 2", r.bound.bound_discrete));
    out.require(r.verdicts.all_passed(), format!("verdicts {:?}", r.verdicts));
    out.note(format!(
        "λ₁ = {l1:.6}, cluster {:?}, Λ = {:.2e}, bound = {}",
        r.spectrum.cluster, r.curvature.lambda_discrete, r.bound.bound_discrete
    ));
}

fn volume_bounds(out: &mut Outcome) {
    let families = [
        AnalyticSurface::GeodesicSphere { r: FRAC_PI_6 },
        AnalyticSurface::GeodesicSphere { r: FRAC_PI_4 },
        AnalyticSurface::GeodesicSphere { r: FRAC_PI_3 },
        AnalyticSurface::FlatTorus { r: 0.4 },
        AnalyticSurface::FlatTorus { r: 0.5 },
        AnalyticSurface::FlatTorus { r: FRAC_1_SQRT_2 },
    ];
    let mut tightest = f64::INFINITY;
    for s in families {
        let lambda = s.kappas().norm();
        let vb = volume_upper_bound(2, lambda).expect("Λ > 0");
        out.require(s.area() <= vb.sharp, format!("{}: area {} > {}", s.label(), s.area(), vb.sharp));
        tightest = tightest.min(vb.sharp / s.area());
    }
    let i1 = tube_integral(2, 1.0).unwrap();
    let i_sqrt2 = tube_integral(2, SQRT_2).unwrap();
    let i_sqrt2_exact = 1.5 * FRAC_1_SQRT_2.atan() - FRAC_1_SQRT_2;
    out.require((i1 - (FRAC_PI_4 - 0.5)).abs() <= 1e-9, format!("I_1 = {i1}"));
    out.require((i_sqrt2 - i_sqrt2_exact).abs() <= 1e-9, format!("I_√2 = {i_sqrt2}"));
    out.require((i_sqrt2 - 0.216_112).abs() < 1e-6, format!("I_√2 = {i_sqrt2} not ≈ 0.216112"));
    let mut checked = 0;
    for n in [2, 3, 4, 6, 8, 16] {
        let mut lambda = 0.25;
        while lambda <= 200.0 {
            let i = tube_integral(n, lambda).unwrap();
            let floor = tube_integral_floor(n, lambda);
            let expected = 5.0 / 54.0 * 0.9f64.powi(2 * n as i32) / lambda;
            out.require((floor - expected).abs() <= 1e-15 * expected, format!("floor formula at n={n}"));
            out.require(i >= floor, format!("I_Λ = {i} < floor {floor} at n={n}, Λ={lambda}"));
            checked += 1;
            lambda *= 1.25;
        }
    }
    out.note(format!(
        "min bound/area {tightest:.3}; I_1 err {:.1e}; I_√2 err {:.1e}; floor held at {checked} points; Vol(S³) = {:.6}",
        (i1 - (FRAC_PI_4 - 0.5)).abs(),
        (i_sqrt2 - i_sqrt2_exact).abs(),
        sphere_volume(3)
    ));
}

fn clifford_offsets(out: &mut Outcome) {
    let mesh = gen_clifford_torus(128, 128).unwrap();
    let ts = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8];
    let rows = offsets_table(&mesh, &ts).expect("offset table runs");
    let mut worst = 0.0f64;
    for row in &rows[..7] {
        let exact = 2.0 * (2.0 * row.t).tan();
        out.require(row.status == OffsetStatus::Embedded, format!("t={}: {}", row.t, row.status.as_str()));
        let h = row.min_mean_curvature.unwrap_or(f64::NAN);
        let err = (h - exact).abs() / exact;
        out.require(h > 0.0 && err <= 0.05, format!("t={}: min H {h} vs {exact}", row.t));
        worst = worst.max(err);
    }
    let last = &rows[7];
    out.require(last.status == OffsetStatus::BeyondHorizon, format!("t=0.8: {}", last.status.as_str()));
    out.require((last.horizon - FRAC_PI_4).abs() < 1e-12, format!("horizon {}", last.horizon));
    out.note(format!("worst min-H error {worst:.2e}; t=0.8 beyond horizon {:.6}", last.horizon));
}

fn radial_oracles(out: &mut Outcome) {
    let suite = verify_oracles(&[2, 3, 4], None, 1e-10).expect("oracles run");
    for row in suite.failures() {
        out.require(false, format!("{} n={} {}: measure {:e}", row.check.as_str(), row.n, row.case, row.measure));
    }
    let worst_identity = suite
        .rows
        .iter()
        .filter(|r| r.kind == OracleKind::Identity)
        .map(|r| r.measure / (1.0 + r.lhs.abs()))
        .fold(0.0, f64::max);
    out.require(worst_identity <= 1e-8, format!("identity gap {worst_identity:e} > 1e-8"));
    let min_slack = suite
        .rows
        .iter()
        .filter(|r| r.kind == OracleKind::Inequality)
        .map(|r| r.measure)
        .fold(f64::INFINITY, f64::min);
    out.note(format!(
        "{} rows; worst relative identity gap {worst_identity:.1e}; min inequality slack {min_slack:.1e}",
        suite.rows.len()
    ));
}

fn yang_yau_and_simons(out: &mut Outcome, report: Option<&VerificationReport>) {
    let Some(r) = report else {
        out.require(false, "Clifford report unavailable");
        return;
    };
    let product = r.spectrum.lambda1 * r.surface.area_discrete;
    let limit = 16.0 * PI;
    out.require((product - 39.5).abs() < 0.5, format!("λ₁·Area = {product} not ≈ 39.5"));
    out.require(product <= limit, format!("λ₁·Area = {product} > 16π"));
    out.require(r.curvature.simons_integral >= -0.05, format!("Simons {}", r.curvature.simons_integral));
    out.note(format!(
        "λ₁·Area = {product:.4} ≤ 16π = {limit:.4}; Simons = {:.2e}",
        r.curvature.simons_integral
    ));
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut clifford = None;
    let results = [
        run(1, "constant chain", secs(1), constant_chain),
        run(2, "Clifford torus end to end", secs(60), |o| clifford_end_to_end(o, &mut clifford)),
        run(3, "equator", secs(30), equator),
        run(4, "volume bound", secs(5), volume_bounds),
        run(5, "Clifford offsets", secs(90), clifford_offsets),
        run(6, "radial oracles", secs(10), radial_oracles),
        run(7, "Yang–Yau and Simons", secs(1), |o| yang_yau_and_simons(o, clifford.as_ref())),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
