//! Bounded search for a regular cover with no returning diagonals.

use std::ops::ControlFlow;

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use super::cover::{build_cover, CoverComplex, LiftedVertices};
use super::lowindex::for_each_rep;
use super::perm::PermutationRep;
use super::regular::{common_cover, regularize};
use super::CoverError;
use crate::complex::PolyhedralComplex;
use crate::diagonals::{diagonals_after_cover, enumerate_diagonals, DiagonalSet};
use crate::format::{fingerprint, CoverEntry};
use crate::presentation::{extract_presentation, GroupPresentation};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Test each rep's regularization for the global property.
    #[default]
    Direct,
    /// One rep per returning base diagonal, then their common cover.
    PerDiagonal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest degree of enumerated reps (before regularization).
    pub max_degree: usize,
    /// Largest image order accepted by regularization.
    pub cap: usize,
    pub mode: SearchMode,
    /// Stop with a checkpoint after testing this many reps in this run.
    pub rep_budget: Option<u64>,
    pub resume: Option<Checkpoint>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_degree: 24,
            cap: 10_000,
            mode: SearchMode::Direct,
            rep_budget: None,
            resume: None,
        }
    }
}

/// Counters carried across checkpoints, so a resumed search reports the same
/// totals as an uninterrupted one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub degrees_tried: Vec<usize>,
    pub reps_tested: u64,
    /// Reps whose image exceeded the cap.
    pub reps_over_cap: u64,
}

/// Where to pick up a search. `index` counts reps already tested at
/// `degree`; `diagonal` is the position in the returning-diagonal list
/// (per-diagonal mode only).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub version: u32,
    pub fingerprint: String,
    pub mode: SearchMode,
    pub max_degree: usize,
    pub cap: usize,
    pub degree: usize,
    pub index: u64,
    pub diagonal: usize,
    pub found: Vec<CoverEntry>,
    pub stats: SearchStats,
}

impl Checkpoint {
    pub fn token(&self) -> String {
        URL_SAFE_NO_PAD.encode(serde_json::to_vec(self).expect("serializable"))
    }

    pub fn parse(token: &str) -> Result<Self, CoverError> {
        let bytes = URL_SAFE_NO_PAD
            .decode(token.trim())
            .map_err(|e| CoverError::Checkpoint(e.to_string()))?;
        let cp: Checkpoint =
            serde_json::from_slice(&bytes).map_err(|e| CoverError::Checkpoint(e.to_string()))?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(CoverError::Checkpoint(format!("unsupported version {}", cp.version)));
        }
        Ok(cp)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExhaustionReason {
    DegreeBound,
    Budget,
}

#[derive(Clone, Debug)]
pub struct Exhaustion {
    pub reason: ExhaustionReason,
    pub stats: SearchStats,
    pub checkpoint: Checkpoint,
}

#[derive(Clone, Debug)]
pub struct FoundCover {
    /// The regular rep defining the cover.
    pub rep: PermutationRep,
    /// Reps the regular one was built from: one in direct mode, one per
    /// handled diagonal otherwise.
    pub sources: Vec<PermutationRep>,
    pub cover: CoverComplex,
    pub diagonals: DiagonalSet,
    pub stats: SearchStats,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Box<FoundCover>),
    Exhausted(Box<Exhaustion>),
}

struct State {
    degree: usize,
    index: u64,
    diagonal: usize,
    found: Vec<PermutationRep>,
    stats: SearchStats,
    tested_this_run: u64,
}

enum Step {
    Hit(PermutationRep),
    Budget,
    Bound,
}

/// Searches covers in increasing degree for one whose regularization has no
/// returning diagonals. Reps at each degree come in canonical order, so the
/// result is reproducible and a resumed search finds what an uninterrupted
/// one would.
pub fn search_cover_killing_diagonals(
    complex: &PolyhedralComplex,
    config: &SearchConfig,
) -> Result<SearchOutcome, CoverError> {
    let base = enumerate_diagonals(complex);
    let returning: Vec<(usize, usize, usize)> = base
        .returning()
        .map(|(_, d)| (d.polyhedron, d.v, d.w))
        .collect();
    if returning.is_empty() {
        return Err(CoverError::NoReturningDiagonals);
    }
    let pres = extract_presentation(complex)?;
    let fp = fingerprint(complex);
    let mut state = match &config.resume {
        None => State {
            degree: match config.mode {
                SearchMode::Direct => 1,
                SearchMode::PerDiagonal => 2,
            },
            index: 0,
            diagonal: 0,
            found: Vec::new(),
            stats: SearchStats::default(),
            tested_this_run: 0,
        },
        Some(cp) => {
            if cp.fingerprint != fp {
                return Err(CoverError::Checkpoint("checkpoint belongs to a different complex".into()));
            }
            if cp.mode != config.mode {
                return Err(CoverError::Checkpoint("checkpoint was taken in a different search mode".into()));
            }
            if cp.cap != config.cap {
                return Err(CoverError::Checkpoint("checkpoint was taken with a different cap".into()));
            }
            let found = cp
                .found
                .iter()
                .map(|e| PermutationRep::parse(e.degree, &e.generators))
                .collect::<Result<_, _>>()?;
            State {
                degree: cp.degree,
                index: cp.index,
                diagonal: cp.diagonal,
                found,
                stats: cp.stats.clone(),
                tested_this_run: 0,
            }
        }
    };

    let checkpoint = |s: &State| Checkpoint {
        version: CHECKPOINT_VERSION,
        fingerprint: fp.clone(),
        mode: config.mode,
        max_degree: config.max_degree,
        cap: config.cap,
        degree: s.degree,
        index: s.index,
        diagonal: s.diagonal,
        found: s
            .found
            .iter()
            .map(|r| CoverEntry {
                degree: r.degree(),
                generators: r.cycle_strings(),
            })
            .collect(),
        stats: s.stats.clone(),
    };
    let exhausted = |s: &State, reason| {
        Ok(SearchOutcome::Exhausted(Box::new(Exhaustion {
            reason,
            stats: s.stats.clone(),
            checkpoint: checkpoint(s),
        })))
    };

    let (regular, sources) = match config.mode {
        SearchMode::Direct => {
            let hit = scan(&pres, config, &mut state, |rep, stats| match regularize(rep, config.cap) {
                Err(CoverError::CapExceeded { .. }) => {
                    stats.reps_over_cap += 1;
                    Ok(None)
                }
                Err(e) => Err(e),
                Ok(reg) => {
                    let lifted = LiftedVertices::new(complex, &reg);
                    let killed = returning.iter().all(|&(p, v, w)| !lifted.lift_returning(0, p, v, w));
                    Ok(killed.then_some(reg))
                }
            })?;
            match hit {
                Step::Hit(reg) => {
                    let source = state.found.pop().expect("scan records the source rep");
                    (reg, vec![source])
                }
                Step::Budget => return exhausted(&state, ExhaustionReason::Budget),
                Step::Bound => return exhausted(&state, ExhaustionReason::DegreeBound),
            }
        }
        SearchMode::PerDiagonal => {
            while state.diagonal < returning.len() {
                let (p, v, w) = returning[state.diagonal];
                let handled = state.found.iter().any(|r| {
                    let lifted = LiftedVertices::new(complex, r);
                    (0..r.degree()).any(|i| !lifted.lift_returning(i, p, v, w))
                });
                if !handled {
                    let hit = scan(&pres, config, &mut state, |rep, _| {
                        let lifted = LiftedVertices::new(complex, rep);
                        let kills = (0..rep.degree()).any(|i| !lifted.lift_returning(i, p, v, w));
                        Ok(kills.then(|| rep.clone()))
                    })?;
                    match hit {
                        Step::Hit(_) => {}
                        Step::Budget => return exhausted(&state, ExhaustionReason::Budget),
                        Step::Bound => return exhausted(&state, ExhaustionReason::DegreeBound),
                    }
                }
                state.diagonal += 1;
                state.degree = 2;
                state.index = 0;
            }
            (common_cover(&state.found, config.cap)?, state.found.clone())
        }
    };

    let cover = build_cover(complex, &regular)?;
    let diagonals = diagonals_after_cover(&base, &cover).map_err(|e| CoverError::Verification(e.to_string()))?;
    if diagonals.returning_count() != 0 {
        return Err(CoverError::Verification(format!(
            "cover of degree {} still has {} returning diagonals",
            regular.degree(),
            diagonals.returning_count()
        )));
    }
    Ok(SearchOutcome::Found(Box::new(FoundCover {
        rep: regular,
        sources,
        cover,
        diagonals,
        stats: state.stats,
    })))
}

/// Walks reps from the state's position up to the degree bound, calling
/// `test` on each. A hit pushes the rep onto `state.found`.
fn scan<F>(
    pres: &GroupPresentation,
    config: &SearchConfig,
    state: &mut State,
    mut test: F,
) -> Result<Step, CoverError>
where
    F: FnMut(&PermutationRep, &mut SearchStats) -> Result<Option<PermutationRep>, CoverError>,
{
    while state.degree <= config.max_degree {
        let d = state.degree;
        if state.stats.degrees_tried.last() != Some(&d) {
            state.stats.degrees_tried.push(d);
        }
        let skip = state.index;
        let mut seen = 0u64;
        let mut outcome: Result<Option<Step>, CoverError> = Ok(None);
        let _ = for_each_rep(pres, d, |rep| {
            if seen < skip {
                seen += 1;
                return ControlFlow::Continue(());
            }
            if config.rep_budget.is_some_and(|b| state.tested_this_run >= b) {
                outcome = Ok(Some(Step::Budget));
                return ControlFlow::Break(());
            }
            seen += 1;
            state.index = seen;
            state.tested_this_run += 1;
            state.stats.reps_tested += 1;
            match test(&rep, &mut state.stats) {
                Err(e) => {
                    outcome = Err(e);
                    ControlFlow::Break(())
                }
                Ok(Some(hit)) => {
                    state.found.push(rep);
                    outcome = Ok(Some(Step::Hit(hit)));
                    ControlFlow::Break(())
                }
                Ok(None) => ControlFlow::Continue(()),
            }
        });
        if let Some(step) = outcome? {
            return Ok(step);
        }
        state.degree += 1;
        state.index = 0;
    }
    Ok(Step::Bound)
}
