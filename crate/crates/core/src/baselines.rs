//! Reference association algorithms: exhaustive search, partial exhaustive
//! search, greedy selection, random assignment and partial random assignment.
//!
//! Exhaustive search enumerates every injective S–I pairing combined with
//! every destination bijection and is therefore exact but exponential; a
//! candidate cap keeps it from running away. All randomized schemes draw from
//! a caller-supplied seeded generator and are reproducible.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::association::{self, Association3D, PhaseOneResult};
use crate::error::{Error, Result};
use crate::matching::ScoreMatrix;
use crate::scenario::Scenario;
use crate::sinr::{self, SinrContext, SumRate};

/// Default ceiling on exhaustive-search candidates.
pub const DEFAULT_CANDIDATE_CAP: u128 = 1_000_000;

/// Association algorithm tags, as they appear on the CLI and in CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Two-phase deferred-acceptance association.
    Proposed,
    /// Exhaustive search over all S-I-D candidates.
    Es,
    /// Partial exhaustive search: exact per phase, greedy across phases.
    Pes,
    /// Greedy selection with random conflict resolution.
    Gs,
    /// Uniform random assignment.
    Ra,
    /// Phase-wise uniform random assignment.
    Pra,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Proposed,
        Algorithm::Es,
        Algorithm::Pes,
        Algorithm::Gs,
        Algorithm::Ra,
        Algorithm::Pra,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Algorithm::Proposed => "proposed",
            Algorithm::Es => "es",
            Algorithm::Pes => "pes",
            Algorithm::Gs => "gs",
            Algorithm::Ra => "ra",
            Algorithm::Pra => "pra",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "proposed" => Ok(Algorithm::Proposed),
            "es" => Ok(Algorithm::Es),
            "pes" => Ok(Algorithm::Pes),
            "gs" => Ok(Algorithm::Gs),
            "ra" => Ok(Algorithm::Ra),
            "pra" => Ok(Algorithm::Pra),
            other => Err(Error::invalid_input(format!("unknown algorithm '{other}'"))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// One algorithm's answer on one scenario.
#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub algorithm: Algorithm,
    pub assignment: Association3D,
    pub sum_rate: SumRate,
    /// Proposer-side proposal events (deferred acceptance and greedy).
    pub proposals: u64,
    /// Full or per-phase candidates evaluated (enumeration schemes).
    pub candidates: u64,
}

fn falling_factorial(n: u128, k: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
    }
    Some(acc)
}

fn factorial(k: u128) -> Option<u128> {
    falling_factorial(k, k)
}

/// Total S-I-D candidates explored by exhaustive search:
/// N!/(N−K)! · K!.
pub fn exhaustive_candidate_count(num_sources: usize, num_panels: usize) -> Option<u128> {
    let injections = falling_factorial(num_panels as u128, num_sources as u128)?;
    injections.checked_mul(factorial(num_sources as u128)?)
}

fn check_dims(scenario: &Scenario) -> Result<(usize, usize, usize)> {
    scenario.validate()?;
    let k = scenario.num_sources();
    let n = scenario.num_panels();
    let l = scenario.num_destinations();
    if k != l {
        return Err(Error::Infeasible(format!(
            "baselines expect K = L, got K={k} L={l}"
        )));
    }
    Ok((k, n, l))
}

/// Exact optimum by checking every possible combination; ties broken by
/// lexicographic triple order. Refuses instances above the candidate cap.
pub fn exhaustive_search(
    scenario: &Scenario,
    ctx: &SinrContext<'_>,
    cap: u128,
) -> Result<BaselineResult> {
    let (k, n, l) = check_dims(scenario)?;
    let count = exhaustive_candidate_count(k, n).unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    let mut best: Option<(SumRate, Association3D)> = None;
    let mut evaluated = 0u64;
    for irs_choice in (0..n).permutations(k) {
        for dest_choice in (0..l).permutations(l) {
            let triples: Vec<_> = (0..k)
                .map(|src| (src, irs_choice[src], dest_choice[src]))
                .collect();
            let candidate = Association3D::from_triples(triples, k, n, l)?;
            let value = sinr::sum_rate(ctx, &candidate)?;
            evaluated += 1;
            let replace = match &best {
                None => true,
                Some((best_value, best_assignment)) => {
                    value.bps_hz > best_value.bps_hz
                        || (value.bps_hz == best_value.bps_hz
                            && candidate.triples() < best_assignment.triples())
                }
            };
            if replace {
                best = Some((value, candidate));
            }
        }
    }
    let (sum_rate, assignment) =
        best.ok_or_else(|| Error::Infeasible("no candidate assignments".into()))?;
    Ok(BaselineResult {
        algorithm: Algorithm::Es,
        assignment,
        sum_rate,
        proposals: 0,
        candidates: evaluated,
    })
}

/// Partial exhaustive search: enumerate all S–I injections on the phase-1
/// pseudo rate, then all destination bijections on the true sum rate.
pub fn partial_exhaustive(
    scenario: &Scenario,
    ctx: &SinrContext<'_>,
    cap: u128,
) -> Result<BaselineResult> {
    let (k, n, l) = check_dims(scenario)?;
    let stage1 = falling_factorial(n as u128, k as u128).unwrap_or(u128::MAX);
    let stage2 = factorial(k as u128).unwrap_or(u128::MAX);
    if stage1 > cap || stage2 > cap {
        return Err(Error::CapExceeded {
            count: stage1.max(stage2),
            cap,
        });
    }

    let pseudo = association::build_si_matrix(scenario)?;
    let mut best_pairs: Option<(f64, Vec<usize>)> = None;
    let mut evaluated = 0u64;
    for irs_choice in (0..n).permutations(k) {
        let total: f64 = (0..k).map(|src| pseudo.get(src, irs_choice[src])).sum();
        evaluated += 1;
        let replace = match &best_pairs {
            None => true,
            Some((best_total, best_choice)) => {
                total > *best_total || (total == *best_total && irs_choice < *best_choice)
            }
        };
        if replace {
            best_pairs = Some((total, irs_choice));
        }
    }
    let (_, irs_choice) =
        best_pairs.ok_or_else(|| Error::Infeasible("no S-I injections".into()))?;

    let mut best: Option<(SumRate, Association3D)> = None;
    for dest_choice in (0..l).permutations(l) {
        let triples: Vec<_> = (0..k)
            .map(|src| (src, irs_choice[src], dest_choice[src]))
            .collect();
        let candidate = Association3D::from_triples(triples, k, n, l)?;
        let value = sinr::sum_rate(ctx, &candidate)?;
        evaluated += 1;
        let replace = match &best {
            None => true,
            Some((best_value, best_assignment)) => {
                value.bps_hz > best_value.bps_hz
                    || (value.bps_hz == best_value.bps_hz
                        && candidate.triples() < best_assignment.triples())
            }
        };
        if replace {
            best = Some((value, candidate));
        }
    }
    let (sum_rate, assignment) =
        best.ok_or_else(|| Error::Infeasible("no destination bijections".into()))?;
    Ok(BaselineResult {
        algorithm: Algorithm::Pes,
        assignment,
        sum_rate,
        proposals: 0,
        candidates: evaluated,
    })
}

/// One greedy round-based allocation: every unplaced proposer bids for its
/// best untried responder; a free responder with several bids goes to a
/// uniformly random one, and taken responders reject everyone. Losers retry
/// with their next choice until all proposers are placed.
fn greedy_phase(scores: &ScoreMatrix, rng: &mut ChaCha8Rng) -> (Vec<usize>, u64) {
    let num_p = scores.rows();
    let num_r = scores.cols();
    debug_assert!(num_p <= num_r);
    let prio = crate::matching::build_priorities(scores);
    let mut next_choice = vec![0usize; num_p];
    let mut placed: Vec<Option<usize>> = vec![None; num_p];
    let mut taken = vec![false; num_r];
    let mut proposals = 0u64;

    while placed.iter().any(|p| p.is_none()) {
        // Bids of this round, grouped per responder.
        let mut bids: Vec<Vec<usize>> = vec![Vec::new(); num_r];
        for p in 0..num_p {
            if placed[p].is_some() {
                continue;
            }
            // Skip already-taken responders without spending a round on them.
            while next_choice[p] < num_r && taken[prio.row(p)[next_choice[p]]] {
                next_choice[p] += 1;
            }
            // num_p <= num_r guarantees an untaken responder remains.
            debug_assert!(next_choice[p] < num_r);
            let r = prio.row(p)[next_choice[p]];
            next_choice[p] += 1;
            proposals += 1;
            bids[r].push(p);
        }
        for (r, bidders) in bids.iter().enumerate() {
            if bidders.is_empty() {
                continue;
            }
            let winner = bidders[rng.gen_range(0..bidders.len())];
            placed[winner] = Some(r);
            taken[r] = true;
        }
    }
    (placed.into_iter().map(|p| p.unwrap()).collect(), proposals)
}

/// Greedy selection: sources grab IRSs on phase-1 pseudo rates, then
/// destinations grab the resulting pairs on phase-2 pseudo rates, with
/// uniform random conflict resolution in both phases.
pub fn greedy(
    scenario: &Scenario,
    ctx: &SinrContext<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<BaselineResult> {
    let (k, n, l) = check_dims(scenario)?;
    let pseudo_si = association::build_si_matrix(scenario)?;
    let (source_to_irs, proposals_1) = greedy_phase(&pseudo_si, rng);

    // Reuse the phase-2 score construction with the greedy pairing.
    let p1 = PhaseOneResult::from_pairs(&source_to_irs, n)?;
    let pseudo_id = association::build_id_matrix(ctx, &p1)?;
    // Destinations propose: transpose to rows = destinations.
    let (dest_to_pair, proposals_2) = greedy_phase(&pseudo_id.transposed(), rng);

    let triples: Vec<_> = dest_to_pair
        .iter()
        .enumerate()
        .map(|(dest, &pair_idx)| {
            let (src, irs) = p1.pairs[pair_idx];
            (src, irs, dest)
        })
        .collect();
    let assignment = Association3D::from_triples(triples, k, n, l)?;
    let sum_rate = sinr::sum_rate(ctx, &assignment)?;
    Ok(BaselineResult {
        algorithm: Algorithm::Gs,
        assignment,
        sum_rate,
        proposals: proposals_1 + proposals_2,
        candidates: 1,
    })
}

/// Uniform random valid association: a random S–I injection and a random
/// destination bijection drawn in one shot.
pub fn random_assignment(
    scenario: &Scenario,
    ctx: &SinrContext<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<BaselineResult> {
    let (k, n, l) = check_dims(scenario)?;
    let mut irs_idx: Vec<usize> = (0..n).collect();
    let (chosen, _) = irs_idx.partial_shuffle(rng, k);
    let irs_choice: Vec<usize> = chosen.to_vec();
    let mut dest_choice: Vec<usize> = (0..l).collect();
    dest_choice.shuffle(rng);

    let triples: Vec<_> = (0..k)
        .map(|src| (src, irs_choice[src], dest_choice[src]))
        .collect();
    let assignment = Association3D::from_triples(triples, k, n, l)?;
    let sum_rate = sinr::sum_rate(ctx, &assignment)?;
    Ok(BaselineResult {
        algorithm: Algorithm::Ra,
        assignment,
        sum_rate,
        proposals: 0,
        candidates: 1,
    })
}

/// Phase-wise random assignment: first a uniform S–I injection, then a
/// uniform destination bijection onto the chosen pairs.
pub fn partial_random(
    scenario: &Scenario,
    ctx: &SinrContext<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<BaselineResult> {
    let (k, n, l) = check_dims(scenario)?;
    let mut irs_idx: Vec<usize> = (0..n).collect();
    let (chosen, _) = irs_idx.partial_shuffle(rng, k);
    let irs_choice: Vec<usize> = chosen.to_vec();
    let pairs: Vec<(usize, usize)> = irs_choice
        .iter()
        .enumerate()
        .map(|(src, &irs)| (src, irs))
        .collect();

    let mut pair_for_dest: Vec<usize> = (0..k).collect();
    pair_for_dest.shuffle(rng);
    let triples: Vec<_> = pair_for_dest
        .iter()
        .enumerate()
        .map(|(dest, &pair_idx)| {
            let (src, irs) = pairs[pair_idx];
            (src, irs, dest)
        })
        .collect();
    let assignment = Association3D::from_triples(triples, k, n, l)?;
    let sum_rate = sinr::sum_rate(ctx, &assignment)?;
    Ok(BaselineResult {
        algorithm: Algorithm::Pra,
        assignment,
        sum_rate,
        proposals: 0,
        candidates: 1,
    })
}
