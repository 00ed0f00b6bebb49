use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{adjusted_rand_index, DistanceMatrix};
use crate::seed::derive;
use crate::{Error, Result};

/// Assignment/update sweeps allowed per trial.
pub const MAX_SWEEPS: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub seed: u64,
    pub medoids: Vec<usize>,
    /// Cluster index (position in `medoids`) per point.
    pub assignment: Vec<usize>,
    pub objective: f64,
    pub sweeps: usize,
    /// Objective after each assignment step.
    pub objective_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub k: usize,
    pub trials: Vec<Trial>,
    /// Index into `trials` of the lowest objective (earliest on ties).
    pub best_trial: usize,
    /// Per-trial ARI against the true labels, once scored.
    pub trial_aris: Vec<f64>,
}

impl ClusteringResult {
    pub fn best(&self) -> &Trial {
        &self.trials[self.best_trial]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.best().assignment
    }

    pub fn medoids(&self) -> &[usize] {
        &self.best().medoids
    }

    /// Scores every trial against `truth`.
    pub fn score(&mut self, truth: &[usize]) -> Result<()> {
        self.trial_aris = self
            .trials
            .iter()
            .map(|t| adjusted_rand_index(truth, &t.assignment))
            .collect::<Result<_>>()?;
        Ok(())
    }

    pub fn mean_ari(&self) -> Option<f64> {
        if self.trial_aris.is_empty() {
            None
        } else {
            Some(self.trial_aris.iter().sum::<f64>() / self.trial_aris.len() as f64)
        }
    }

    pub fn best_ari(&self) -> Option<f64> {
        self.trial_aris.get(self.best_trial).copied()
    }
}

/// k-medoids from `trials` random sets of distinct medoids. Each sweep assigns
/// points to their nearest medoid, then moves medoids within their clusters;
/// once that settles, a PAM swap is tried before stopping.
pub fn kmedoids(d: &DistanceMatrix, k: usize, trials: usize, seed: u64) -> Result<ClusteringResult> {
    let m = d.len();
    if k == 0 || k > m {
        return Err(Error::InvalidClusterCount { k, m });
    }
    let trials: Vec<Trial> = (0..trials.max(1))
        .map(|t| run_trial(d, k, derive(seed, &[t as u64])))
        .collect();
    let mut best_trial = 0;
    for (i, t) in trials.iter().enumerate() {
        if t.objective < trials[best_trial].objective {
            best_trial = i;
        }
    }
    Ok(ClusteringResult { k, trials, best_trial, trial_aris: Vec::new() })
}

fn run_trial(d: &DistanceMatrix, k: usize, seed: u64) -> Trial {
    let m = d.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Partial Fisher-Yates for k distinct starting medoids.
    let mut pool: Vec<usize> = (0..m).collect();
    for i in 0..k {
        let j = rng.gen_range(i..m);
        pool.swap(i, j);
    }
    let mut medoids: Vec<usize> = pool[..k].to_vec();
    let mut assignment = alloc::vec![0usize; m];
    let mut history = Vec::new();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let objective = assign(d, &medoids, &mut assignment);
        history.push(objective);
        if !update_medoids(d, &mut medoids, &assignment) && !best_swap(d, &mut medoids, objective) {
            break;
        }
    }
    let objective = assign(d, &medoids, &mut assignment);
    Trial { seed, medoids, assignment, objective, sweeps, objective_history: history }
}

/// Moves each medoid to the member minimising the in-cluster distance sum.
fn update_medoids(d: &DistanceMatrix, medoids: &mut [usize], assignment: &[usize]) -> bool {
    let mut changed = false;
    for (c, medoid) in medoids.iter_mut().enumerate() {
        let members: Vec<usize> = (0..assignment.len()).filter(|&i| assignment[i] == c).collect();
        let cost = |i: usize| members.iter().map(|&j| d.get(i, j)).sum::<f64>();
        let mut best = *medoid;
        let mut best_cost = cost(best);
        for &i in &members {
            let ci = cost(i);
            if ci < best_cost {
                best = i;
                best_cost = ci;
            }
        }
        if best != *medoid {
            *medoid = best;
            changed = true;
        }
    }
    changed
}

/// PAM swap step: applies the single medoid/non-medoid exchange that lowers
/// the objective most, if any does. This escapes the local optima where the
/// alternating step alone stalls, e.g. two medoids seeded in one cluster.
fn best_swap(d: &DistanceMatrix, medoids: &mut [usize], objective: f64) -> bool {
    let m = d.len();
    // Nearest and second-nearest medoid distance per point.
    let mut near = alloc::vec![(0usize, f64::INFINITY, f64::INFINITY); m];
    for (i, entry) in near.iter_mut().enumerate() {
        for (c, &md) in medoids.iter().enumerate() {
            let v = d.get(i, md);
            if v < entry.1 {
                *entry = (c, v, entry.1);
            } else if v < entry.2 {
                entry.2 = v;
            }
        }
    }
    let mut best: Option<(usize, usize)> = None;
    let mut best_cost = objective;
    for h in 0..m {
        if medoids.contains(&h) {
            continue;
        }
        for c in 0..medoids.len() {
            let cost: f64 = (0..m)
                .map(|i| {
                    let (nc, d1, d2) = near[i];
                    let other = if nc == c { d2 } else { d1 };
                    other.min(d.get(i, h))
                })
                .sum();
            // Relative margin keeps rounding noise from triggering swaps.
            if cost < best_cost - 1e-12 * (1.0 + objective) {
                best_cost = cost;
                best = Some((c, h));
            }
        }
    }
    match best {
        Some((c, h)) => {
            medoids[c] = h;
            true
        }
        None => false,
    }
}

/// Nearest-medoid assignment; a medoid always belongs to its own cluster and
/// other ties go to the earliest medoid. Returns the total distance.
fn assign(d: &DistanceMatrix, medoids: &[usize], assignment: &mut [usize]) -> f64 {
    let mut total = 0.0;
    for (i, slot) in assignment.iter_mut().enumerate() {
        if let Some(c) = medoids.iter().position(|&md| md == i) {
            *slot = c;
            continue;
        }
        let mut best = 0;
        let mut best_d = d.get(i, medoids[0]);
        for (c, &md) in medoids.iter().enumerate().skip(1) {
            let v = d.get(i, md);
            if v < best_d {
                best = c;
                best_d = v;
            }
        }
        *slot = best;
        total += best_d;
    }
    total
}
