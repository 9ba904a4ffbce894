//! Generic one-to-one proposer–responder deferred acceptance.
//!
//! Proposers walk their priority lists from best to worst; a responder holds
//! its best proposal so far and trades up when a preferred proposer arrives.
//! The loop runs while some unmatched proposer still has unexplored
//! responders, so every proposer ends up matched or rejected by everyone.
//! Each proposer approaches each responder at most once, bounding the total
//! number of proposals by P × R.
//!
//! Ties in scores are broken by ascending index when priorities are built,
//! which makes every run deterministic; after that the responder comparison
//! can never see equal ranks.

use crate::error::{Error, Result};

/// Rectangular score matrix: rows are proposers, columns responders.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ScoreMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid_input(format!(
                "score matrix expects {}x{} = {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid_input("score matrix entries must be finite"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transposed(&self) -> ScoreMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        ScoreMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

/// Per-agent descending preference orderings: `order[a]` lists counterpart
/// indices best-first.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorityMatrix {
    order: Vec<Vec<usize>>,
    counterparts: usize,
}

impl PriorityMatrix {
    /// Wrap explicit orderings, checking each row is a permutation.
    pub fn new(order: Vec<Vec<usize>>, counterparts: usize) -> Result<Self> {
        for (i, row) in order.iter().enumerate() {
            if row.len() != counterparts {
                return Err(Error::invalid_input(format!(
                    "priority row {i} has {} entries, expected {counterparts}",
                    row.len()
                )));
            }
            let mut seen = vec![false; counterparts];
            for &c in row {
                if c >= counterparts || seen[c] {
                    return Err(Error::invalid_input(format!(
                        "priority row {i} is not a permutation"
                    )));
                }
                seen[c] = true;
            }
        }
        Ok(Self {
            order,
            counterparts,
        })
    }

    pub fn agents(&self) -> usize {
        self.order.len()
    }

    pub fn counterparts(&self) -> usize {
        self.counterparts
    }

    pub fn row(&self, agent: usize) -> &[usize] {
        &self.order[agent]
    }

    /// rank[a][c] = position of counterpart c in agent a's ordering (0 best).
    fn ranks(&self) -> Vec<Vec<usize>> {
        self.order
            .iter()
            .map(|row| {
                let mut rank = vec![0usize; self.counterparts];
                for (pos, &c) in row.iter().enumerate() {
                    rank[c] = pos;
                }
                rank
            })
            .collect()
    }
}

/// Sort each row of the score matrix into a descending preference ordering,
/// breaking ties by ascending counterpart index.
pub fn build_priorities(scores: &ScoreMatrix) -> PriorityMatrix {
    let order = (0..scores.rows())
        .map(|r| {
            let row = scores.row(r);
            let mut idx: Vec<usize> = (0..scores.cols()).collect();
            idx.sort_by(|&a, &b| {
                row[b]
                    .partial_cmp(&row[a])
                    .expect("finite scores")
                    .then(a.cmp(&b))
            });
            idx
        })
        .collect();
    PriorityMatrix {
        order,
        counterparts: scores.cols(),
    }
}

/// Result of one deferred-acceptance run.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    proposer_to_responder: Vec<Option<usize>>,
    responder_to_proposer: Vec<Option<usize>>,
    proposal_count: u64,
}

impl Matching {
    /// Wrap an explicit proposer → responder assignment (`None` = unmatched),
    /// checking injectivity. Useful for auditing externally built matchings;
    /// the proposal count is zero.
    pub fn from_assignment(
        proposer_to_responder: Vec<Option<usize>>,
        num_responders: usize,
    ) -> Result<Self> {
        let mut responder_to_proposer = vec![None; num_responders];
        for (p, r) in proposer_to_responder.iter().enumerate() {
            if let Some(r) = *r {
                if r >= num_responders {
                    return Err(Error::invalid_input(format!(
                        "responder {r} out of range ({num_responders} responders)"
                    )));
                }
                if responder_to_proposer[r].is_some() {
                    return Err(Error::invalid_input(format!(
                        "responder {r} matched to more than one proposer"
                    )));
                }
                responder_to_proposer[r] = Some(p);
            }
        }
        Ok(Self {
            proposer_to_responder,
            responder_to_proposer,
            proposal_count: 0,
        })
    }

    pub fn num_proposers(&self) -> usize {
        self.proposer_to_responder.len()
    }

    pub fn num_responders(&self) -> usize {
        self.responder_to_proposer.len()
    }

    pub fn responder_of(&self, proposer: usize) -> Option<usize> {
        self.proposer_to_responder[proposer]
    }

    pub fn proposer_of(&self, responder: usize) -> Option<usize> {
        self.responder_to_proposer[responder]
    }

    /// Matched (proposer, responder) pairs in proposer order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.proposer_to_responder
            .iter()
            .enumerate()
            .filter_map(|(p, r)| r.map(|r| (p, r)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.proposer_to_responder
            .iter()
            .filter(|r| r.is_some())
            .count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn proposal_count(&self) -> u64 {
        self.proposal_count
    }
}

/// Run proposer-side deferred acceptance over two priority matrices.
///
/// `prio_p` ranks responders per proposer; `prio_r` ranks proposers per
/// responder. Unequal side sizes are allowed; leftover responders stay
/// vacant.
pub fn deferred_acceptance(prio_p: &PriorityMatrix, prio_r: &PriorityMatrix) -> Result<Matching> {
    let num_p = prio_p.agents();
    let num_r = prio_r.agents();
    if prio_p.counterparts() != num_r || prio_r.counterparts() != num_p {
        return Err(Error::invalid_input(format!(
            "priority shapes disagree: {num_p} proposers x {} vs {num_r} responders x {}",
            prio_p.counterparts(),
            prio_r.counterparts()
        )));
    }
    let responder_rank = prio_r.ranks();

    let mut engaged_to: Vec<Option<usize>> = vec![None; num_p];
    let mut holds: Vec<Option<usize>> = vec![None; num_r];
    let mut next_choice = vec![0usize; num_p];
    let mut proposal_count = 0u64;

    // Lowest-index free proposer with options left proposes next.
    let mut free: Vec<usize> = (0..num_p).rev().collect();
    while let Some(p) = free.pop() {
        if next_choice[p] >= num_r {
            continue; // rejected by every responder
        }
        let r = prio_p.row(p)[next_choice[p]];
        next_choice[p] += 1;
        proposal_count += 1;
        match holds[r] {
            None => {
                holds[r] = Some(p);
                engaged_to[p] = Some(r);
            }
            Some(current) => {
                if responder_rank[r][p] < responder_rank[r][current] {
                    holds[r] = Some(p);
                    engaged_to[p] = Some(r);
                    engaged_to[current] = None;
                    free.push(current);
                } else {
                    free.push(p);
                }
            }
        }
    }

    Ok(Matching {
        proposer_to_responder: engaged_to,
        responder_to_proposer: holds,
        proposal_count,
    })
}

/// Audit a matching for blocking pairs.
///
/// A pair (p, r) blocks when both sides rank each other strictly above their
/// current partners, with "unmatched" below every counterpart. Preferences
/// are the tie-broken orderings derived from the scores, the same ones the
/// algorithm plays against.
pub fn is_stable(
    m: &Matching,
    scores_p: &ScoreMatrix,
    scores_r: &ScoreMatrix,
) -> (bool, Vec<(usize, usize)>) {
    let num_p = m.num_proposers();
    let num_r = m.num_responders();
    assert_eq!(scores_p.rows(), num_p, "proposer score shape");
    assert_eq!(scores_r.rows(), num_r, "responder score shape");
    let rank_p = build_priorities(scores_p).ranks();
    let rank_r = build_priorities(scores_r).ranks();

    let mut blocking = Vec::new();
    for p in 0..num_p {
        for r in 0..num_r {
            if m.responder_of(p) == Some(r) {
                continue;
            }
            let p_prefers = match m.responder_of(p) {
                Some(current) => rank_p[p][r] < rank_p[p][current],
                None => true,
            };
            let r_prefers = match m.proposer_of(r) {
                Some(current) => rank_r[r][p] < rank_r[r][current],
                None => true,
            };
            if p_prefers && r_prefers {
                blocking.push((p, r));
            }
        }
    }
    (blocking.is_empty(), blocking)
}

/// Proposal-count sanity check: deferred acceptance never exceeds P × R.
pub fn proposal_bound_check(m: &Matching, num_p: usize, num_r: usize) -> bool {
    m.proposal_count() <= (num_p as u64) * (num_r as u64)
}
