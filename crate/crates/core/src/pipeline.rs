//! End-to-end driver: diagonals, cover search, lift, pull, verify, report.
//!
//! Reports use the `vtr-1` JSON schema (see [`PipelineReport`]). Everything
//! except the `timings` object is a deterministic function of the input
//! complex and the configuration.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{BoundaryMode, PolyhedralComplex};
use crate::covers::{
    build_cover, search_cover_killing_diagonals, Checkpoint, CoverComplex, CoverError,
    ExhaustionReason, PermutationRep, SearchConfig, SearchMode, SearchOutcome, SearchStats,
};
use crate::diagonals::enumerate_diagonals;
use crate::format::{fingerprint, ComplexFile, CoverEntry};
use crate::pulling::{
    order_vertices, subdivide_complex, verify_triangulation, Certificate, OrderSpec, PullingError,
    Triangulation,
};

pub const REPORT_FORMAT: &str = "vtr-1";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OutputPaths {
    pub report: Option<PathBuf>,
    pub triangulation: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub max_degree: usize,
    pub cap: usize,
    pub mode: SearchMode,
    /// Ordering of the cover's vertex classes for pulling.
    pub order: OrderSpec,
    pub rep_budget: Option<u64>,
    pub resume: Option<Checkpoint>,
    /// Used by callers that write results; [`virtualize`] itself writes nothing.
    pub outputs: OutputPaths,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let search = SearchConfig::default();
        Self {
            max_degree: search.max_degree,
            cap: search.cap,
            mode: search.mode,
            order: OrderSpec::Default,
            rep_budget: None,
            resume: None,
            outputs: OutputPaths::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.max_degree == 0 {
            return Err(PipelineError::Config("max degree must be positive".into()));
        }
        if self.cap == 0 {
            return Err(PipelineError::Config("cap must be positive".into()));
        }
        if self.rep_budget == Some(0) {
            return Err(PipelineError::Config("budget must be positive".into()));
        }
        Ok(())
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            max_degree: self.max_degree,
            cap: self.cap,
            mode: self.mode,
            rep_budget: self.rep_budget,
            resume: self.resume.clone(),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("the pipeline needs a closed complex; this one has {0} unpaired facets")]
    NotClosed(usize),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Pulling(#[from] PullingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Ok,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSummary {
    pub fingerprint: String,
    pub dim: usize,
    pub polyhedra: usize,
    pub pairings: usize,
    pub vertex_classes: usize,
    pub euler_characteristic: i64,
    /// Largest number of ideal vertices in one input cell.
    pub max_ideal_per_cell: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalStats {
    pub total: usize,
    pub returning: usize,
    pub returning_per_polyhedron: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverReport {
    pub degree: usize,
    pub regular: bool,
    /// Generator images in 1-based cycle notation.
    pub generators: Vec<String>,
    pub mode: Option<SearchMode>,
    /// Reps the regular cover was assembled from (empty for degree 1).
    pub sources: Vec<CoverEntry>,
    pub search: Option<SearchStats>,
    pub vertex_classes: usize,
    pub euler_characteristic: i64,
    /// Re-counted on the lifted complex; 0 on success.
    pub returning_diagonals: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustionReport {
    pub reason: ExhaustionReason,
    pub stats: SearchStats,
    pub checkpoint: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationStats {
    pub ordering: String,
    pub simplices: usize,
    /// `ideal_histogram[k]` simplices have exactly `k` ideal vertices.
    pub ideal_histogram: Vec<usize>,
    pub max_ideal_per_simplex: usize,
    /// `Some` when every input cell has at most one ideal vertex: whether
    /// every output simplex does too.
    pub at_most_one_ideal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timings {
    pub search_ms: u64,
    pub pull_ms: u64,
    pub verify_ms: u64,
    pub total_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineReport {
    pub format: String,
    pub status: RunStatus,
    pub input: InputSummary,
    pub diagonals: DiagonalStats,
    pub cover: Option<CoverReport>,
    pub exhaustion: Option<ExhaustionReport>,
    pub triangulation: Option<TriangulationStats>,
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// The machine form with timings removed, for golden comparison.
    pub fn deterministic_json(&self) -> String {
        let mut r = self.clone();
        r.timings = None;
        r.to_json()
    }

    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for PipelineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = &self.input;
        writeln!(
            f,
            "input: dim {}, {} polyhedra, {} pairings, {} vertex classes, chi {}",
            i.dim, i.polyhedra, i.pairings, i.vertex_classes, i.euler_characteristic
        )?;
        writeln!(
            f,
            "diagonals: {} total, {} returning",
            self.diagonals.total, self.diagonals.returning
        )?;
        if let Some(c) = &self.cover {
            writeln!(
                f,
                "cover: degree {}{}, {} vertex classes, {} returning diagonals",
                c.degree,
                if c.regular { " (regular)" } else { "" },
                c.vertex_classes,
                c.returning_diagonals
            )?;
            for (g, p) in c.generators.iter().enumerate() {
                writeln!(f, "  g{g} -> {p}")?;
            }
        }
        if let Some(e) = &self.exhaustion {
            writeln!(
                f,
                "search exhausted ({:?}) after degrees {:?}, {} reps tested, {} over cap",
                e.reason, e.stats.degrees_tried, e.stats.reps_tested, e.stats.reps_over_cap
            )?;
            writeln!(f, "resume with: {}", e.checkpoint)?;
        }
        if let Some(t) = &self.triangulation {
            writeln!(
                f,
                "triangulation: {} simplices, ideal-vertex histogram {:?} ({})",
                t.simplices, t.ideal_histogram, t.ordering
            )?;
            if let Some(ok) = t.at_most_one_ideal {
                writeln!(f, "at most one ideal vertex per simplex: {ok}")?;
            }
        }
        if let Some(c) = &self.certificate {
            writeln!(f, "certificate: {}", if c.passed { "passed" } else { "FAILED" })?;
            for x in &c.failures {
                writeln!(f, "  {x}")?;
            }
        }
        if let Some(t) = &self.timings {
            writeln!(f, "time: {} ms", t.total_ms)?;
        }
        Ok(())
    }
}

/// A verified triangulation of the (possibly trivial) cover.
#[derive(Clone, Debug)]
pub struct Virtualized {
    pub cover: Option<CoverComplex>,
    /// The complex that was pulled: the cover's total space, or the input.
    pub complex: PolyhedralComplex,
    pub triangulation: Triangulation,
}

impl Virtualized {
    pub fn to_file(&self) -> ComplexFile {
        self.triangulation
            .to_file(&self.complex, self.cover.as_ref().map(CoverComplex::entry))
    }
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub report: PipelineReport,
    pub result: Option<Virtualized>,
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

pub fn input_summary(complex: &PolyhedralComplex) -> InputSummary {
    InputSummary {
        fingerprint: fingerprint(complex),
        dim: complex.dim(),
        polyhedra: complex.polyhedra().len(),
        pairings: complex.pairings().len(),
        vertex_classes: complex.num_vertex_classes(),
        euler_characteristic: complex.euler_characteristic(),
        max_ideal_per_cell: complex.polyhedra().iter().map(|p| p.ideal_count()).max().unwrap_or(0),
    }
}

pub fn triangulation_stats(
    t: &Triangulation,
    complex: &PolyhedralComplex,
    order: &OrderSpec,
    input_max_ideal: usize,
) -> TriangulationStats {
    let counts = t.ideal_counts(complex);
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0; t.dim + 2];
    for c in counts {
        histogram[c] += 1;
    }
    while histogram.len() > 1 && histogram.last() == Some(&0) {
        histogram.pop();
    }
    TriangulationStats {
        ordering: order.to_string(),
        simplices: t.simplices.len(),
        ideal_histogram: histogram,
        max_ideal_per_simplex: max,
        at_most_one_ideal: (input_max_ideal <= 1).then_some(max <= 1),
    }
}

/// Finds a regular cover without returning diagonals (degree 1 if the input
/// already has none), pulls it, and verifies the triangulation.
pub fn virtualize(complex: &PolyhedralComplex, config: &PipelineConfig) -> Result<PipelineRun, PipelineError> {
    let start = Instant::now();
    config.validate()?;
    if complex.mode() != BoundaryMode::Closed || !complex.is_closed() {
        let unpaired = complex
            .polyhedra()
            .iter()
            .map(|p| p.lattice.facets().len())
            .sum::<usize>()
            - 2 * complex.pairings().len();
        return Err(PipelineError::NotClosed(unpaired));
    }
    let input = input_summary(complex);
    let base = enumerate_diagonals(complex);
    let diagonals = DiagonalStats {
        total: base.len(),
        returning: base.returning_count(),
        returning_per_polyhedron: base.returning_per_polyhedron(complex.polyhedra().len()),
    };

    let search_start = Instant::now();
    let (cover, cover_report) = if base.returning_count() == 0 {
        let trivial = PermutationRep::trivial(complex.pairings().len());
        let report = CoverReport {
            degree: 1,
            regular: true,
            generators: trivial.cycle_strings(),
            mode: None,
            sources: Vec::new(),
            search: None,
            vertex_classes: complex.num_vertex_classes(),
            euler_characteristic: complex.euler_characteristic(),
            returning_diagonals: 0,
        };
        (None, report)
    } else {
        match search_cover_killing_diagonals(complex, &config.search())? {
            SearchOutcome::Exhausted(e) => {
                let report = PipelineReport {
                    format: REPORT_FORMAT.into(),
                    status: RunStatus::Exhausted,
                    input,
                    diagonals,
                    cover: None,
                    exhaustion: Some(ExhaustionReport {
                        reason: e.reason,
                        stats: e.stats.clone(),
                        checkpoint: e.checkpoint.token(),
                    }),
                    triangulation: None,
                    certificate: None,
                    timings: Some(Timings {
                        search_ms: ms(search_start),
                        pull_ms: 0,
                        verify_ms: 0,
                        total_ms: ms(start),
                    }),
                };
                return Ok(PipelineRun { report, result: None });
            }
            SearchOutcome::Found(found) => {
                let total = found.cover.total();
                let report = CoverReport {
                    degree: found.rep.degree(),
                    regular: found.rep.is_regular(),
                    generators: found.rep.cycle_strings(),
                    mode: Some(config.mode),
                    sources: found
                        .sources
                        .iter()
                        .map(|r| CoverEntry {
                            degree: r.degree(),
                            generators: r.cycle_strings(),
                        })
                        .collect(),
                    search: Some(found.stats.clone()),
                    vertex_classes: total.num_vertex_classes(),
                    euler_characteristic: total.euler_characteristic(),
                    returning_diagonals: found.diagonals.returning_count(),
                };
                (Some(found.cover), report)
            }
        }
    };
    let search_ms = ms(search_start);

    let pull_start = Instant::now();
    let pulled = cover.as_ref().map_or(complex, |c| c.total()).clone();
    let ordering = order_vertices(&pulled, &config.order)?;
    let triangulation = subdivide_complex(&pulled, &ordering)?;
    let pull_ms = ms(pull_start);

    let verify_start = Instant::now();
    let certificate = verify_triangulation(&triangulation, &pulled);
    if !certificate.passed {
        return Err(PullingError::Verification(Box::new(certificate)).into());
    }
    let verify_ms = ms(verify_start);

    let stats = triangulation_stats(&triangulation, &pulled, &config.order, input.max_ideal_per_cell);
    let report = PipelineReport {
        format: REPORT_FORMAT.into(),
        status: RunStatus::Ok,
        input,
        diagonals,
        cover: Some(cover_report),
        exhaustion: None,
        triangulation: Some(stats),
        certificate: Some(certificate),
        timings: Some(Timings {
            search_ms,
            pull_ms,
            verify_ms,
            total_ms: ms(start),
        }),
    };
    Ok(PipelineRun {
        report,
        result: Some(Virtualized {
            cover,
            complex: pulled,
            triangulation,
        }),
    })
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Pulling(#[from] PullingError),
}

/// Re-verifies a triangulation file against its base complex, rebuilding
/// the cover it names. The returned certificate is recomputed; a stored
/// certificate that disagrees with it is recorded as a failure.
pub fn verify_file(file: &ComplexFile, base: &PolyhedralComplex) -> Result<Certificate, VerifyError> {
    let cover = match &file.cover {
        Some(entry) => Some(build_cover(base, &PermutationRep::parse(entry.degree, &entry.generators)?)?),
        None => None,
    };
    let target = cover.as_ref().map_or(base, |c| c.total());
    let t = Triangulation::from_file(file, target)?;
    let mut cert = verify_triangulation(&t, target);
    if let Some(stored) = &file.certificate {
        if stored != &cert {
            cert.failures.push("stored certificate differs from the recomputed one".into());
            cert.passed = false;
        }
    }
    Ok(cert)
}
