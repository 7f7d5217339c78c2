//! Composed verification suites and the reports they produce.
//!
//! Every verdict in a report is a pure function of numbers stored in the
//! same report, so a serialized report can be re-audited without rerunning
//! anything: see [`VerificationReport::recompute_verdicts`].

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constants::{eigenvalue_lower_bound, volume_upper_bound};
use crate::error::{Error, Result};
use crate::mesh::{
    assemble_laplacian, discrete_shape_operator, gen_clifford_torus, gen_flat_torus, gen_geodesic_sphere,
    io::read_s3off, offset_mesh, self_intersection_test, AnalyticSurface, DiscreteGeometry, SphericalTriMesh,
};
use crate::radial::{
    verify_bochner_radial, verify_choiwang_chain_hemisphere_with, verify_interior_gradient_with,
    verify_boundary_layer_hemisphere_with, verify_reilly_radial_with, IdentityReport, InequalityReport, OracleTolerance,
    RadialProfile,
};
use crate::spectral::{smallest_nonzero_eig_with, EigenOptions};
use crate::sphere::{embeddedness_horizon, offset_mean_curvature, OffsetDistance};
use crate::VERSION;

/// Version of every serialized report produced here.
pub const SCHEMA_VERSION: u32 = 1;
/// Relative slack allowed when comparing discrete eigenvalues against bounds.
pub const DEFAULT_VERDICT_TOLERANCE: f64 = 0.02;
/// Lower limit for the discrete Simons integral of a minimal surface.
pub const SIMONS_FLOOR: f64 = -0.05;
/// Discrete `max |H|` allowed for a surface without analytic data to count
/// as minimal, relative to `max(1, Λ)`.
pub const DISCRETE_MINIMAL_REL: f64 = 0.05;

/// A built-in surface family and its resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Clifford { res_u: usize, res_v: usize },
    FlatTorus { r: f64, res_u: usize, res_v: usize },
    Equator { subdiv: usize },
    GeodesicSphere { r: f64, subdiv: usize },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<SphericalTriMesh> {
        match *self {
            GeneratorSpec::Clifford { res_u, res_v } => gen_clifford_torus(res_u, res_v),
            GeneratorSpec::FlatTorus { r, res_u, res_v } => gen_flat_torus(r, res_u, res_v),
            GeneratorSpec::Equator { subdiv } => gen_geodesic_sphere(FRAC_PI_2, subdiv),
            GeneratorSpec::GeodesicSphere { r, subdiv } => gen_geodesic_sphere(r, subdiv),
        }
    }
}

/// Where the mesh under test comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SurfaceSource {
    Generator(GeneratorSpec),
    File { path: PathBuf },
}

impl SurfaceSource {
    pub fn load(&self) -> Result<SphericalTriMesh> {
        match self {
            SurfaceSource::Generator(spec) => spec.build(),
            SurfaceSource::File { path } => read_s3off(path),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceOptions {
    pub eigen: EigenOptions,
    pub verdict_tolerance: f64,
    /// Offset distances for the embeddedness table; empty skips it.
    pub offsets: Vec<f64>,
    /// Run the stereographic self-intersection test on the surface itself.
    pub check_embedding: bool,
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        Self {
            eigen: EigenOptions::default(),
            verdict_tolerance: DEFAULT_VERDICT_TOLERANCE,
            offsets: Vec::new(),
            check_embedding: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    fn check(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn when(applies: bool, ok: impl FnOnce() -> bool) -> Self {
        if applies {
            Verdict::check(ok())
        } else {
            Verdict::Skipped
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub minimal: Verdict,
    /// `λ₁ ≥ n/2`.
    pub choi_wang: Verdict,
    /// `λ₁ ≥ n/2 + a_n/(Λ⁶ + b_n)` for every available `Λ`.
    pub improved_bound: Verdict,
    /// `λ₁ ≤ n`.
    pub yau_upper: Verdict,
    /// `λ₁ · Area ≤ 8π ⌊(γ + 3)/2⌋`.
    pub yang_yau: Verdict,
    /// `∫ ‖A‖²(‖A‖² − n) ≥ −0.05`.
    pub simons: Verdict,
    /// `Area ≤ Vol(S³) / (2 I_Λ)`.
    pub volume: Verdict,
    pub embedded: Verdict,
    /// Every offset inside the horizon is embedded.
    pub offsets: Verdict,
}

impl Verdicts {
    /// True when nothing failed.
    pub fn all_passed(&self) -> bool {
        self.named().iter().all(|(_, v)| *v != Verdict::Fail)
    }

    pub fn named(&self) -> [(&'static str, Verdict); 9] {
        [
            ("minimal", self.minimal),
            ("choi_wang", self.choi_wang),
            ("improved_bound", self.improved_bound),
            ("yau_upper", self.yau_upper),
            ("yang_yau", self.yang_yau),
            ("simons", self.simons),
            ("volume", self.volume),
            ("embedded", self.embedded),
            ("offsets", self.offsets),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub label: String,
    pub vertices: usize,
    pub triangles: usize,
    pub genus: i64,
    pub components: usize,
    pub area_discrete: f64,
    pub area_analytic: Option<f64>,
    pub analytic: Option<AnalyticSurface>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub lambda1: f64,
    pub residual: f64,
    pub iterations: usize,
    pub multiplicity: usize,
    pub cluster: Vec<f64>,
    pub lambda1_analytic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSummary {
    /// `max ‖A‖` from the discrete shape operator.
    pub lambda_discrete: f64,
    pub lambda_analytic: Option<f64>,
    pub max_abs_mean_curvature: f64,
    pub mean_curvature_analytic: Option<f64>,
    pub simons_integral: f64,
    /// Vertices whose one-ring fit fell back to analytic values.
    pub fallback_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub n: usize,
    pub half_n: f64,
    pub bound_discrete: f64,
    pub bound_analytic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeSummary {
    /// Analytic when known, discrete otherwise.
    pub lambda_used: f64,
    pub area_used: f64,
    pub tube_integral: f64,
    pub sharp_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OffsetStatus {
    Embedded,
    SelfIntersecting,
    /// `|t|` reaches the embeddedness horizon.
    BeyondHorizon,
    /// No projection pole clears the mesh; the test could not run.
    NoPole,
}

impl OffsetStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            OffsetStatus::Embedded => "embedded",
            OffsetStatus::SelfIntersecting => "self-intersecting",
            OffsetStatus::BeyondHorizon => "beyond-horizon",
            OffsetStatus::NoPole => "no-pole",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffsetRow {
    pub t: f64,
    pub horizon: f64,
    pub status: OffsetStatus,
    pub witnesses: usize,
    pub min_mean_curvature: Option<f64>,
    pub max_mean_curvature: Option<f64>,
    /// Mean curvature of the analytic offset, constant on the homogeneous families.
    pub analytic_mean_curvature: Option<f64>,
    /// `|min H − H_analytic| / |H_analytic|`, absolute when `H_analytic = 0`.
    pub min_mean_curvature_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub load_s: f64,
    pub assembly_s: f64,
    pub eigensolve_s: f64,
    pub geometry_s: f64,
    pub intersection_s: f64,
    pub offsets_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceParameters {
    pub source: SurfaceSource,
    pub options: SurfaceOptions,
}

/// Everything `verify-surface` measures about one mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub version: String,
    pub parameters: SurfaceParameters,
    pub surface: SurfaceSummary,
    pub spectrum: SpectrumSummary,
    pub curvature: CurvatureSummary,
    pub bound: BoundSummary,
    pub volume: VolumeSummary,
    /// `None` when the self-intersection test was skipped or had no pole.
    pub embedded: Option<bool>,
    pub offsets: Vec<OffsetRow>,
    pub verdicts: Verdicts,
    pub timing: Timing,
}

fn yang_yau_limit(genus: i64) -> f64 {
    8.0 * PI * ((genus + 3) / 2) as f64
}

impl VerificationReport {
    /// Analytic minimality when known, else discrete `max |H|` against
    /// `0.05 · max(1, Λ)`.
    pub fn is_minimal(&self) -> bool {
        let c = &self.curvature;
        match c.mean_curvature_analytic {
            Some(h) => h.abs() <= 1e-12,
            None => c.max_abs_mean_curvature <= DISCRETE_MINIMAL_REL * c.lambda_discrete.max(1.0),
        }
    }

    /// Derives every verdict from the stored numbers.
    pub fn recompute_verdicts(&self) -> Verdicts {
        let tau = self.parameters.options.verdict_tolerance;
        let minimal = self.is_minimal();
        let l1 = self.spectrum.lambda1;
        let n = self.bound.n as f64;
        let bounds = std::iter::once(self.bound.bound_discrete).chain(self.bound.bound_analytic);
        let offsets_in_range: Vec<_> = self
            .offsets
            .iter()
            .filter(|r| r.status != OffsetStatus::BeyondHorizon)
            .collect();
        Verdicts {
            minimal: Verdict::check(minimal),
            choi_wang: Verdict::when(minimal, || l1 >= 0.5 * n * (1.0 - tau)),
            improved_bound: Verdict::when(minimal, || bounds.into_iter().all(|b| l1 >= b * (1.0 - tau))),
            yau_upper: Verdict::when(minimal, || l1 <= n * (1.0 + tau)),
            yang_yau: Verdict::when(self.surface.genus >= 0 && self.surface.components == 1, || {
                l1 * self.surface.area_discrete <= yang_yau_limit(self.surface.genus) * (1.0 + tau)
            }),
            simons: Verdict::when(minimal, || self.curvature.simons_integral >= SIMONS_FLOOR),
            volume: Verdict::check(self.volume.area_used <= self.volume.sharp_bound * (1.0 + tau)),
            embedded: match self.embedded {
                Some(e) => Verdict::check(e),
                None => Verdict::Skipped,
            },
            offsets: Verdict::when(!offsets_in_range.is_empty(), || {
                offsets_in_range.iter().all(|r| r.status == OffsetStatus::Embedded)
            }),
        }
    }

    pub fn csv_header() -> &'static str {
        "label,vertices,triangles,genus,area,lambda1,residual,multiplicity,lambda1_analytic,\
         lambda_discrete,lambda_analytic,bound_discrete,bound_analytic,simons_integral,volume_bound,\
         minimal,choi_wang,improved_bound,yau_upper,yang_yau,simons,volume,embedded,offsets,total_s"
    }

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        let mut fields = vec![
            csv_escape(&self.surface.label),
            self.surface.vertices.to_string(),
            self.surface.triangles.to_string(),
            self.surface.genus.to_string(),
            format!("{:e}", self.surface.area_discrete),
            format!("{:e}", self.spectrum.lambda1),
            format!("{:e}", self.spectrum.residual),
            self.spectrum.multiplicity.to_string(),
            opt(self.spectrum.lambda1_analytic),
            format!("{:e}", self.curvature.lambda_discrete),
            opt(self.curvature.lambda_analytic),
            format!("{:e}", self.bound.bound_discrete),
            opt(self.bound.bound_analytic),
            format!("{:e}", self.curvature.simons_integral),
            format!("{:e}", self.volume.sharp_bound),
        ];
        fields.extend(self.verdicts.named().iter().map(|(_, v)| v.as_str().to_string()));
        fields.push(format!("{:.3}", self.timing.total_s));
        fields.join(",")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Smallest horizon `arctan(1/κ_max)` over the vertices.
fn discrete_horizon(geometry: &DiscreteGeometry) -> f64 {
    (0..geometry.vertex_count())
        .map(|i| embeddedness_horizon(&geometry.principal_curvatures(i)))
        .fold(f64::INFINITY, f64::min)
}

fn offset_row(mesh: &SphericalTriMesh, t: f64, horizon: f64) -> Result<OffsetRow> {
    let mut row = OffsetRow {
        t,
        horizon,
        status: OffsetStatus::BeyondHorizon,
        witnesses: 0,
        min_mean_curvature: None,
        max_mean_curvature: None,
        analytic_mean_curvature: None,
        min_mean_curvature_error: None,
    };
    let moved = match offset_mesh(mesh, OffsetDistance(t)) {
        Ok(m) => m,
        Err(Error::BeyondHorizon { horizon, .. }) => {
            row.horizon = horizon;
            return Ok(row);
        }
        Err(e) => return Err(e),
    };
    row.status = match self_intersection_test(&moved) {
        Ok(rep) if rep.embedded => OffsetStatus::Embedded,
        Ok(rep) => {
            row.witnesses = rep.witnesses.len();
            OffsetStatus::SelfIntersecting
        }
        Err(Error::Configuration(_)) => OffsetStatus::NoPole,
        Err(e) => return Err(e),
    };
    let g = discrete_shape_operator(&moved)?;
    let (lo, hi) = (g.min_mean_curvature(), g.max_mean_curvature());
    row.min_mean_curvature = Some(lo);
    row.max_mean_curvature = Some(hi);
    if let Some(a) = mesh.analytic() {
        let h = offset_mean_curvature(&a.kappas(), OffsetDistance(t))?;
        row.analytic_mean_curvature = Some(h);
        let err = (lo - h).abs();
        row.min_mean_curvature_error = Some(if h == 0.0 { err } else { err / h.abs() });
    }
    Ok(row)
}

/// Offsets `mesh` by each `t` and tabulates embeddedness and mean curvature.
///
/// Distances at or past the horizon become [`OffsetStatus::BeyondHorizon`]
/// rows rather than errors. Rows are computed on separate threads.
pub fn offsets_table(mesh: &SphericalTriMesh, ts: &[f64]) -> Result<Vec<OffsetRow>> {
    let horizon = match mesh.analytic() {
        Some(a) if mesh.normals().is_some() => embeddedness_horizon(&a.kappas()),
        _ => discrete_horizon(&discrete_shape_operator(mesh)?),
    };
    std::thread::scope(|scope| {
        let handles: Vec<_> = ts.iter().map(|&t| scope.spawn(move || offset_row(mesh, t, horizon))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("offset worker panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffsetsReport {
    pub schema: u32,
    pub version: String,
    pub source: SurfaceSource,
    pub label: String,
    pub rows: Vec<OffsetRow>,
}

pub fn offsets_report(source: &SurfaceSource, ts: &[f64]) -> Result<OffsetsReport> {
    let mesh = source.load()?;
    let label = surface_label(source, &mesh);
    Ok(OffsetsReport {
        schema: SCHEMA_VERSION,
        version: VERSION.to_string(),
        source: source.clone(),
        label,
        rows: offsets_table(&mesh, ts)?,
    })
}

fn surface_label(source: &SurfaceSource, mesh: &SphericalTriMesh) -> String {
    match (mesh.analytic(), source) {
        (Some(a), _) => a.label(),
        (None, SurfaceSource::File { path }) => path.display().to_string(),
        (None, SurfaceSource::Generator(g)) => format!("{g:?}"),
    }
}

/// Assembly, eigensolve, shape operator and all verdicts for one surface.
pub fn verify_surface(source: &SurfaceSource, options: &SurfaceOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let mesh = source.load()?;
    let load_s = start.elapsed().as_secs_f64();
    verify_mesh(source, &mesh, options, load_s, start)
}

fn verify_mesh(
    source: &SurfaceSource,
    mesh: &SphericalTriMesh,
    options: &SurfaceOptions,
    load_s: f64,
    start: Instant,
) -> Result<VerificationReport> {
    const N: usize = 2;
    let lap = Instant::now();
    let pair = assemble_laplacian(mesh)?;
    let assembly_s = lap.elapsed().as_secs_f64();

    let lap = Instant::now();
    let eig = smallest_nonzero_eig_with(&pair, options.eigen)?;
    let eigensolve_s = lap.elapsed().as_secs_f64();

    let lap = Instant::now();
    let geometry = discrete_shape_operator(mesh)?;
    let geometry_s = lap.elapsed().as_secs_f64();

    let lap = Instant::now();
    let embedded = if options.check_embedding {
        match self_intersection_test(mesh) {
            Ok(rep) => Some(rep.embedded),
            Err(Error::Configuration(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let intersection_s = lap.elapsed().as_secs_f64();

    let lap = Instant::now();
    let offsets = if options.offsets.is_empty() {
        Vec::new()
    } else {
        offsets_table(mesh, &options.offsets)?
    };
    let offsets_s = lap.elapsed().as_secs_f64();

    let analytic = mesh.analytic().copied();
    let kappas = analytic.map(|a| a.kappas());
    let lambda_analytic = kappas.as_ref().map(|k| k.norm());
    let topology = mesh.topology();
    let area_discrete = mesh.area();
    let area_analytic = analytic.map(|a| a.area());

    let lambda_used = lambda_analytic.unwrap_or(geometry.lambda);
    let area_used = area_analytic.unwrap_or(area_discrete);
    let vb = volume_upper_bound(N, lambda_used)?;

    let mut report = VerificationReport {
        schema: SCHEMA_VERSION,
        version: VERSION.to_string(),
        parameters: SurfaceParameters {
            source: source.clone(),
            options: options.clone(),
        },
        surface: SurfaceSummary {
            label: surface_label(source, mesh),
            vertices: mesh.vertex_count(),
            triangles: mesh.triangle_count(),
            genus: topology.genus,
            components: topology.components,
            area_discrete,
            area_analytic,
            analytic,
        },
        spectrum: SpectrumSummary {
            lambda1: eig.lambda1,
            residual: eig.residual,
            iterations: eig.iterations,
            multiplicity: eig.multiplicity(),
            cluster: eig.cluster.clone(),
            lambda1_analytic: analytic.map(|a| a.lambda1()),
        },
        curvature: CurvatureSummary {
            lambda_discrete: geometry.lambda,
            lambda_analytic,
            max_abs_mean_curvature: geometry.max_abs_mean_curvature(),
            mean_curvature_analytic: kappas.as_ref().map(|k| k.mean_curvature()),
            simons_integral: geometry.simons_integral(),
            fallback_vertices: geometry.fallback_vertices.len(),
        },
        bound: BoundSummary {
            n: N,
            half_n: 0.5 * N as f64,
            bound_discrete: eigenvalue_lower_bound(N, geometry.lambda)?,
            bound_analytic: lambda_analytic.map(|l| eigenvalue_lower_bound(N, l)).transpose()?,
        },
        volume: VolumeSummary {
            lambda_used,
            area_used,
            tube_integral: vb.tube_integral,
            sharp_bound: vb.sharp,
        },
        embedded,
        offsets,
        verdicts: Verdicts {
            minimal: Verdict::Skipped,
            choi_wang: Verdict::Skipped,
            improved_bound: Verdict::Skipped,
            yau_upper: Verdict::Skipped,
            yang_yau: Verdict::Skipped,
            simons: Verdict::Skipped,
            volume: Verdict::Skipped,
            embedded: Verdict::Skipped,
            offsets: Verdict::Skipped,
        },
        timing: Timing {
            load_s,
            assembly_s,
            eigensolve_s,
            geometry_s,
            intersection_s,
            offsets_s,
            total_s: 0.0,
        },
    };
    report.verdicts = report.recompute_verdicts();
    report.timing.total_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Checks run by [`verify_oracles`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleCheck {
    Reilly,
    Bochner,
    InteriorGradient,
    BoundaryLayer,
    Hemisphere,
}

impl OracleCheck {
    pub const ALL: [OracleCheck; 5] = [
        OracleCheck::Reilly,
        OracleCheck::Bochner,
        OracleCheck::InteriorGradient,
        OracleCheck::BoundaryLayer,
        OracleCheck::Hemisphere,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OracleCheck::Reilly => "reilly",
            OracleCheck::Bochner => "bochner",
            OracleCheck::InteriorGradient => "interior-gradient",
            OracleCheck::BoundaryLayer => "boundary-layer",
            OracleCheck::Hemisphere => "hemisphere",
        }
    }
}

impl std::str::FromStr for OracleCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OracleCheck::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = OracleCheck::ALL.iter().map(|c| c.as_str()).collect();
                Error::Configuration(format!("unknown check {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    /// `measure` is `|lhs − rhs|`, at most `threshold`.
    Identity,
    /// `measure` is `rhs − lhs`, at least `−threshold`.
    Inequality,
    /// `measure` is a residual, at most `threshold`.
    Residual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub check: OracleCheck,
    pub case: String,
    pub n: usize,
    pub kind: OracleKind,
    pub lhs: f64,
    pub rhs: f64,
    pub measure: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl OracleRow {
    fn identity(check: OracleCheck, case: String, n: usize, r: &IdentityReport) -> Self {
        Self {
            check,
            case,
            n,
            kind: OracleKind::Identity,
            lhs: r.lhs,
            rhs: r.rhs,
            measure: r.gap,
            threshold: r.threshold,
            passed: r.passed,
        }
    }

    fn inequality(check: OracleCheck, case: String, n: usize, r: &InequalityReport) -> Self {
        Self {
            check,
            case,
            n,
            kind: OracleKind::Inequality,
            lhs: r.lhs,
            rhs: r.rhs,
            measure: r.slack,
            threshold: r.tolerance,
            passed: r.passed,
        }
    }

    fn residual(check: OracleCheck, case: String, n: usize, value: f64, threshold: f64) -> Self {
        Self {
            check,
            case,
            n,
            kind: OracleKind::Residual,
            lhs: value,
            rhs: 0.0,
            measure: value,
            threshold,
            passed: value <= threshold,
        }
    }

    pub fn csv_header() -> &'static str {
        "check,case,n,kind,lhs,rhs,measure,threshold,passed"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:e},{:e},{:e},{:e},{}",
            self.check.as_str(),
            csv_escape(&self.case),
            self.n,
            serde_plain_kind(self.kind),
            self.lhs,
            self.rhs,
            self.measure,
            self.threshold,
            self.passed
        )
    }
}

fn serde_plain_kind(k: OracleKind) -> &'static str {
    match k {
        OracleKind::Identity => "identity",
        OracleKind::Inequality => "inequality",
        OracleKind::Residual => "residual",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSuite {
    pub schema: u32,
    pub version: String,
    pub dims: Vec<usize>,
    pub only: Option<OracleCheck>,
    pub quadrature_tolerance: f64,
    pub rows: Vec<OracleRow>,
}

impl OracleSuite {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleRow> {
        self.rows.iter().filter(|r| !r.passed)
    }
}

/// Annuli `(r₀, R)` for the Bochner check.
pub const BOCHNER_ANNULI: [(f64, f64); 3] = [(0.3, 1.2), (0.5, 1.0), (0.3, 2.5)];
/// Ball radii for the Reilly grid, crossed with the ball test profiles.
pub const REILLY_RADII: [f64; 3] = [0.4, 1.0, 1.5];
/// `(r₀, R, t)` for the interior gradient estimate.
pub const INTERIOR_GRADIENT_CASES: [(f64, f64, f64); 4] = [(0.3, 1.3, 0.1), (0.3, 1.3, 0.24), (0.5, 2.5, 0.3), (0.2, 1.0, 0.05)];
/// Offset distances and `β` values for the hemisphere boundary-layer estimate.
pub const BOUNDARY_LAYER_TS: [f64; 3] = [0.1, 0.3, 0.6];
pub const BOUNDARY_LAYER_BETAS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

fn polar_profiles() -> Vec<RadialProfile> {
    vec![
        RadialProfile::new("cos θ", f64::cos, |r| -r.sin(), |r| -r.cos()),
        RadialProfile::new("θ^2", |r| r * r, |r| 2.0 * r, |_| 2.0),
        RadialProfile::new("sin 2θ", |r| (2.0 * r).sin(), |r| 2.0 * (2.0 * r).cos(), |r| -4.0 * (2.0 * r).sin()),
    ]
}

/// Runs the radial checks over their grids for each `n` in `dims`.
pub fn verify_oracles(dims: &[usize], only: Option<OracleCheck>, quadrature_tolerance: f64) -> Result<OracleSuite> {
    let tol = OracleTolerance {
        quadrature: quadrature_tolerance,
    };
    let wanted = |c: OracleCheck| only.map_or(true, |o| o == c);
    let mut rows = Vec::new();
    for &n in dims {
        if wanted(OracleCheck::Reilly) {
            for f in RadialProfile::ball_test_profiles() {
                for radius in REILLY_RADII {
                    let r = verify_reilly_radial_with(n, radius, &f, tol)?;
                    rows.push(OracleRow::identity(
                        OracleCheck::Reilly,
                        format!("f={} R={radius}", f.label),
                        n,
                        &r.identity,
                    ));
                }
            }
        }
        if wanted(OracleCheck::Bochner) {
            for (a, b) in BOCHNER_ANNULI {
                let r = verify_bochner_radial(n, a, b)?;
                rows.push(OracleRow::residual(
                    OracleCheck::Bochner,
                    format!("annulus [{a}, {b}]"),
                    n,
                    r.max_residual.max(r.max_fd_residual),
                    1e-6,
                ));
            }
        }
        if wanted(OracleCheck::InteriorGradient) {
            let v = RadialProfile::radial_harmonic(n);
            for (a, b, t) in INTERIOR_GRADIENT_CASES {
                let r = verify_interior_gradient_with(n, a, b, t, &v, tol)?;
                rows.push(OracleRow::inequality(
                    OracleCheck::InteriorGradient,
                    format!("annulus [{a}, {b}] t={t}"),
                    n,
                    &r.inequality,
                ));
            }
        }
        if wanted(OracleCheck::BoundaryLayer) {
            for v in polar_profiles() {
                for t in BOUNDARY_LAYER_TS {
                    for beta in BOUNDARY_LAYER_BETAS {
                        let r = verify_boundary_layer_hemisphere_with(n, t, beta, &v, tol)?;
                        rows.push(OracleRow::inequality(
                            OracleCheck::BoundaryLayer,
                            format!("v={} t={t} β={beta}", v.label),
                            n,
                            &r.inequality,
                        ));
                    }
                }
            }
        }
        if wanted(OracleCheck::Hemisphere) {
            let r = verify_choiwang_chain_hemisphere_with(n, tol)?;
            let h = OracleCheck::Hemisphere;
            rows.push(OracleRow::identity(h, "green identity".into(), n, &r.green_identity));
            rows.push(OracleRow::inequality(h, "reilly inequality".into(), n, &r.reilly_inequality));
            rows.push(OracleRow::inequality(h, "choi-wang inequality".into(), n, &r.choi_wang_inequality));
            rows.push(OracleRow::inequality(h, "hessian nonnegative".into(), n, &r.hessian_nonnegative));
            rows.push(OracleRow::inequality(
                h,
                "boundary gradient".into(),
                n,
                &r.boundary_gradient_inequality,
            ));
            for (k, y) in r.young_chain.iter().enumerate() {
                rows.push(OracleRow::inequality(h, format!("young step {}", k + 1), n, y));
            }
            rows.push(OracleRow::residual(h, "integrator agreement".into(), n, r.integrator_agreement, 1e-7));
            rows.push(OracleRow::residual(h, "ode residual".into(), n, r.max_ode_residual, 1e-8));
        }
    }
    Ok(OracleSuite {
        schema: SCHEMA_VERSION,
        version: VERSION.to_string(),
        dims: dims.to_vec(),
        only,
        quadrature_tolerance,
        rows,
    })
}
