//! Two-phase source–IRS–destination association.
//!
//! Phase 1 matches sources to IRSs on an interference-free coherent
//! single-hop score; phase 2 matches destinations to the surviving
//! (source, IRS) pairs on the full end-to-end SINR with every phase-1 pair
//! active. Both phases run deferred acceptance: sources propose in phase 1,
//! destinations propose in phase 2. Composing the two bijections yields the
//! 3D association.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{self, Matching, ScoreMatrix};
use crate::propagation;
use crate::scenario::Scenario;
use crate::sinr::{self, PhaseConfig, SinrContext};

/// A binary one-to-one S–I–D assignment stored as (source, IRS, destination)
/// triples, sorted by source index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Association3D {
    triples: Vec<(usize, usize, usize)>,
}

impl Association3D {
    /// Build from triples, rejecting out-of-range indices and any agent
    /// appearing twice. Completeness is checked separately by [`validate`].
    pub fn from_triples(
        mut triples: Vec<(usize, usize, usize)>,
        num_sources: usize,
        num_panels: usize,
        num_destinations: usize,
    ) -> Result<Self> {
        let mut src_seen = vec![false; num_sources];
        let mut irs_seen = vec![false; num_panels];
        let mut dst_seen = vec![false; num_destinations];
        for &(k, n, l) in &triples {
            if k >= num_sources || n >= num_panels || l >= num_destinations {
                return Err(Error::invalid_input(format!(
                    "triple ({k}, {n}, {l}) out of range for K={num_sources}, N={num_panels}, L={num_destinations}"
                )));
            }
            if src_seen[k] || irs_seen[n] || dst_seen[l] {
                return Err(Error::invalid_input(format!(
                    "triple ({k}, {n}, {l}) reuses an already-assigned agent"
                )));
            }
            src_seen[k] = true;
            irs_seen[n] = true;
            dst_seen[l] = true;
        }
        triples.sort_unstable();
        Ok(Self { triples })
    }

    pub fn triples(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, k: usize, n: usize, l: usize) -> bool {
        self.triples.binary_search(&(k, n, l)).is_ok()
    }

    /// The (IRS, destination) serving source `k`, if any.
    pub fn serving(&self, k: usize) -> Option<(usize, usize)> {
        self.triples.iter().find(|t| t.0 == k).map(|t| (t.1, t.2))
    }

    pub fn irs_in_use(&self, n: usize) -> bool {
        self.triples.iter().any(|t| t.1 == n)
    }

    /// Check constraints: every source and destination in exactly one triple,
    /// every IRS in at most one (each IRS would need its own source for
    /// equality, impossible when K < N).
    pub fn validate(
        &self,
        num_sources: usize,
        num_panels: usize,
        num_destinations: usize,
    ) -> ValidationReport {
        let mut violations = Vec::new();
        let mut src_count = vec![0usize; num_sources];
        let mut irs_count = vec![0usize; num_panels];
        let mut dst_count = vec![0usize; num_destinations];
        for &(k, n, l) in &self.triples {
            if k >= num_sources || n >= num_panels || l >= num_destinations {
                violations.push(format!("triple ({k}, {n}, {l}) out of range"));
                continue;
            }
            src_count[k] += 1;
            irs_count[n] += 1;
            dst_count[l] += 1;
        }
        for (k, &c) in src_count.iter().enumerate() {
            if c == 0 {
                violations.push(format!("source {k} unpaired"));
            } else if c > 1 {
                violations.push(format!("source {k} appears in {c} triples"));
            }
        }
        for (n, &c) in irs_count.iter().enumerate() {
            if c > 1 {
                violations.push(format!("IRS {n} appears in {c} triples"));
            }
        }
        for (l, &c) in dst_count.iter().enumerate() {
            if c == 0 {
                violations.push(format!("destination {l} unpaired"));
            } else if c > 1 {
                violations.push(format!("destination {l} appears in {c} triples"));
            }
        }
        ValidationReport { violations }
    }
}

/// Outcome of [`Association3D::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }
}

/// Phase-1 result: the S–I matching plus its pairs in source order.
#[derive(Debug, Clone)]
pub struct PhaseOneResult {
    pub matching: Matching,
    /// Matched (source, IRS) pairs sorted by source index.
    pub pairs: Vec<(usize, usize)>,
}

impl PhaseOneResult {
    /// Wrap an externally chosen S–I pairing (one IRS per source).
    pub fn from_pairs(source_to_irs: &[usize], num_irs: usize) -> Result<Self> {
        let matching =
            Matching::from_assignment(source_to_irs.iter().map(|&n| Some(n)).collect(), num_irs)?;
        let pairs = matching.pairs();
        Ok(Self { matching, pairs })
    }
}

/// Phase-2 result: destinations matched onto phase-1 pair indices.
#[derive(Debug, Clone)]
pub struct PhaseTwoResult {
    pub matching: Matching,
}

/// Phase-1 pseudo rate Λ of the S_k → I_n channel: an interference-free
/// coherent single-hop SNR proxy,
///
/// `Λ = log₂(1 + P_k G_S (Σ_m √ℓ₁)² / σ²)`,
///
/// where `ℓ₁ = (λ/4π)² e^{−κ d₁} / d₁²` is the element spreading-absorption
/// loss. Large, nearby panels score high; the destination side is unknown in
/// this phase and contributes nothing.
pub fn pseudo_rate_si(scenario: &Scenario, k: usize, n: usize) -> Result<f64> {
    let src = scenario.sources[k];
    let panel = &scenario.panels[n];
    let lambda = propagation::wavelength(scenario.radio.carrier_frequency_hz)?;
    let aperture = lambda / (4.0 * std::f64::consts::PI);
    let kappa = scenario.radio.absorption_coeff_per_m;
    let mut amp_sum = 0.0;
    for m in 0..panel.element_count() {
        let d1 = src.sub(panel.element_center(m)?).norm();
        if d1 == 0.0 {
            return Err(Error::geometry("source coincides with an IRS element"));
        }
        amp_sum += aperture * (-kappa * d1 / 2.0).exp() / d1;
    }
    let snr = scenario.radio.tx_power_w() * scenario.radio.source_gain * amp_sum * amp_sum
        / sinr::noise_power(&scenario.radio);
    Ok((1.0 + snr).log2())
}

/// The K×N phase-1 pseudo-rate matrix.
pub fn build_si_matrix(scenario: &Scenario) -> Result<ScoreMatrix> {
    let k = scenario.num_sources();
    let n = scenario.num_panels();
    let mut data = Vec::with_capacity(k * n);
    for src in 0..k {
        for panel in 0..n {
            data.push(pseudo_rate_si(scenario, src, panel)?);
        }
    }
    ScoreMatrix::new(k, n, data)
}

/// Solve P1: sources propose to IRSs on the pseudo-rate matrix; the IRS-side
/// priorities come from the transposed matrix.
pub fn solve_p1(pseudo: &ScoreMatrix) -> Result<PhaseOneResult> {
    if pseudo.rows() > pseudo.cols() {
        return Err(Error::Infeasible(format!(
            "{} sources exceed {} IRSs",
            pseudo.rows(),
            pseudo.cols()
        )));
    }
    let prio_sources = matching::build_priorities(pseudo);
    let prio_irs = matching::build_priorities(&pseudo.transposed());
    let matching = matching::deferred_acceptance(&prio_sources, &prio_irs)?;
    let pairs = matching.pairs();
    Ok(PhaseOneResult { matching, pairs })
}

/// Reflection phases with every phase-1 pair co-phased toward destination
/// `l`; unmatched IRSs keep θ = 0.
fn column_phases(ctx: &SinrContext<'_>, p1: &PhaseOneResult, l: usize) -> PhaseConfig {
    let dims: Vec<usize> = (0..ctx.tensor.num_panels())
        .map(|n| ctx.tensor.elements(n))
        .collect();
    let mut phases = PhaseConfig::zeros(&dims);
    for &(k, n) in &p1.pairs {
        for (m, entry) in ctx.tensor.link(k, n, l).iter().enumerate() {
            phases.set_theta(n, m, entry.phase);
        }
    }
    phases
}

fn p1_reflecting(ctx: &SinrContext<'_>, p1: &PhaseOneResult) -> Vec<bool> {
    (0..ctx.tensor.num_panels())
        .map(|n| ctx.idle_irs_reflect || p1.pairs.iter().any(|&(_, pn)| pn == n))
        .collect()
}

/// Phase-2 pseudo rate Λ of serving destination `l` from the phase-1 pair
/// (k*, n*): the full end-to-end SINR with every phase-1 pair active and
/// co-phased toward the destination under evaluation.
pub fn pseudo_rate_id(
    ctx: &SinrContext<'_>,
    k_star: usize,
    n_star: usize,
    l: usize,
    p1: &PhaseOneResult,
) -> Result<f64> {
    if !p1.pairs.contains(&(k_star, n_star)) {
        return Err(Error::ContractViolation(format!(
            "pair ({k_star}, {n_star}) was not matched in phase 1"
        )));
    }
    let phases = column_phases(ctx, p1, l);
    let active: Vec<usize> = p1.pairs.iter().map(|p| p.0).collect();
    let reflecting = p1_reflecting(ctx, p1);
    let gamma = ctx.sinr_filtered(k_star, n_star, l, &phases, &active, &reflecting);
    Ok((1.0 + gamma).log2())
}

/// The (pairs × destinations) phase-2 pseudo-rate matrix, rows in
/// `p1.pairs` order.
pub fn build_id_matrix(ctx: &SinrContext<'_>, p1: &PhaseOneResult) -> Result<ScoreMatrix> {
    let num_pairs = p1.pairs.len();
    let num_dests = ctx.tensor.num_destinations();
    let active: Vec<usize> = p1.pairs.iter().map(|p| p.0).collect();
    let reflecting = p1_reflecting(ctx, p1);
    let mut data = vec![0.0; num_pairs * num_dests];
    for l in 0..num_dests {
        let phases = column_phases(ctx, p1, l);
        for (row, &(k, n)) in p1.pairs.iter().enumerate() {
            let gamma = ctx.sinr_filtered(k, n, l, &phases, &active, &reflecting);
            data[row * num_dests + l] = (1.0 + gamma).log2();
        }
    }
    ScoreMatrix::new(num_pairs, num_dests, data)
}

/// Solve P2: destinations propose to the phase-1 pairs. `pseudo_id` must be
/// the (pairs × destinations) matrix from [`build_id_matrix`].
pub fn solve_p2(pseudo_id: &ScoreMatrix, p1: &PhaseOneResult) -> Result<PhaseTwoResult> {
    if pseudo_id.rows() != p1.pairs.len() {
        return Err(Error::Infeasible(format!(
            "phase-2 matrix has {} rows for {} phase-1 pairs",
            pseudo_id.rows(),
            p1.pairs.len()
        )));
    }
    if pseudo_id.cols() != pseudo_id.rows() {
        return Err(Error::Infeasible(format!(
            "phase 2 needs as many destinations as pairs, got {} vs {}",
            pseudo_id.cols(),
            pseudo_id.rows()
        )));
    }
    let prio_dests = matching::build_priorities(&pseudo_id.transposed());
    let prio_pairs = matching::build_priorities(pseudo_id);
    let matching = matching::deferred_acceptance(&prio_dests, &prio_pairs)?;
    Ok(PhaseTwoResult { matching })
}

/// Compose the two bijections into the final 3D association.
pub fn assemble(
    p1: &PhaseOneResult,
    p2: &PhaseTwoResult,
    num_sources: usize,
    num_panels: usize,
    num_destinations: usize,
) -> Result<Association3D> {
    let mut triples = Vec::with_capacity(p1.pairs.len());
    for (l, pair_idx) in p2.matching.pairs() {
        let (k, n) = *p1.pairs.get(pair_idx).ok_or_else(|| {
            Error::ContractViolation(format!("phase-2 responder {pair_idx} has no phase-1 pair"))
        })?;
        triples.push((k, n, l));
    }
    let assignment =
        Association3D::from_triples(triples, num_sources, num_panels, num_destinations)
            .map_err(|e| Error::ContractViolation(format!("assembled association invalid: {e}")))?;
    Ok(assignment)
}

/// Full two-phase pipeline output.
#[derive(Debug, Clone)]
pub struct TwoPhaseSolution {
    pub assignment: Association3D,
    pub p1_proposals: u64,
    pub p2_proposals: u64,
}

/// Run both phases end to end on one scenario.
pub fn solve_two_phase(scenario: &Scenario, ctx: &SinrContext<'_>) -> Result<TwoPhaseSolution> {
    if scenario.num_sources() != scenario.num_destinations() {
        return Err(Error::Infeasible(format!(
            "two-phase association expects K = L, got K={} L={}",
            scenario.num_sources(),
            scenario.num_destinations()
        )));
    }
    let si = build_si_matrix(scenario)?;
    let p1 = solve_p1(&si)?;
    let id = build_id_matrix(ctx, &p1)?;
    let p2 = solve_p2(&id, &p1)?;
    let assignment = assemble(
        &p1,
        &p2,
        scenario.num_sources(),
        scenario.num_panels(),
        scenario.num_destinations(),
    )?;
    let report = assignment.validate(
        scenario.num_sources(),
        scenario.num_panels(),
        scenario.num_destinations(),
    );
    if !report.is_valid() {
        return Err(Error::ContractViolation(format!(
            "two-phase output failed validation: {}",
            report.violations().join("; ")
        )));
    }
    Ok(TwoPhaseSolution {
        assignment,
        p1_proposals: p1.matching.proposal_count(),
        p2_proposals: p2.matching.proposal_count(),
    })
}

/// Standalone constraint check, spec-shaped: (valid, violation list).
pub fn validate(
    a: &Association3D,
    num_sources: usize,
    num_panels: usize,
    num_destinations: usize,
) -> (bool, Vec<String>) {
    let report = a.validate(num_sources, num_panels, num_destinations);
    (report.is_valid(), report.violations().to_vec())
}
