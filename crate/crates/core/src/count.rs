//! Gradual determination of the number of clusters.
//!
//! From the current voltage grid:
//!
//! 1. every column's voltage-weighted evidence is combined; whatever the
//!    result supports besides the whole frame is the support for that
//!    cluster existing;
//! 2. the per-cluster existence evidence is combined and regrouped by how
//!    many clusters a conjunction asserts, giving mass on `|chi| >= r`;
//! 3. that is combined with a prior over `|chi| = r`, giving a posterior
//!    and the domain conflict `c0`;
//! 4. the posterior is blended toward a one-hot at its argmax by the
//!    normalized entropy `alpha`.

use serde::{Deserialize, Serialize};

use crate::annealer::NetworkState;
use crate::error::{Error, Result};
use crate::evidence::{discount_by_voltage, Combiner, SimpleSupport, TOTAL_CONFLICT_EPS};

/// Support for one cluster's existence; `support + theta = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Existence {
    pub support: f64,
    pub theta: f64,
    /// The weighted evidence was totally conflicting and has been discarded.
    pub meaningless: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorSpec {
    pub p: f64,
    pub max_count: usize,
}

impl Default for PriorSpec {
    fn default() -> Self {
        PriorSpec {
            p: 0.8,
            max_count: 6,
        }
    }
}

impl PriorSpec {
    pub fn new(p: f64, max_count: usize) -> Result<Self> {
        let prior = PriorSpec { p, max_count };
        prior.validate()?;
        Ok(prior)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::domain(format!("prior p must be in (0, 1), got {}", self.p)));
        }
        if self.max_count < 1 {
            return Err(Error::domain("prior needs at least one count"));
        }
        Ok(())
    }

    /// `m(|chi| = r) = p^(2(r-1)) / Z` for `r = 1..=max_count`.
    pub fn masses(&self) -> Vec<f64> {
        let q = self.p * self.p;
        let raw: Vec<f64> = (0..self.max_count).map(|i| q.powi(i as i32)).collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter().map(|m| m / z).collect()
    }
}

pub fn cluster_existence(evidence: &[SimpleSupport], v_column: &[f64]) -> Result<Existence> {
    if evidence.len() != v_column.len() {
        return Err(Error::domain(format!(
            "{} voltages for {} pieces of evidence",
            v_column.len(),
            evidence.len()
        )));
    }
    let Some(first) = evidence.first() else {
        return Ok(Existence {
            support: 0.0,
            theta: 1.0,
            meaningless: false,
        });
    };
    let mut acc = Combiner::new(first.frame_size());
    for (e, &v) in evidence.iter().zip(v_column) {
        if v > 0.0 {
            acc.absorb(&discount_by_voltage(e, v)?)?;
        }
    }
    if acc.is_total() {
        return Ok(Existence {
            support: 0.0,
            theta: 1.0,
            meaningless: true,
        });
    }
    let (combined, _) = acc.finish()?;
    let theta = combined.theta_mass().clamp(0.0, 1.0);
    Ok(Existence {
        support: 1.0 - theta,
        theta,
        meaningless: false,
    })
}

/// Mass on `|chi| >= r` for `r = 1..=R`, plus the mass left on the frame.
///
/// Equivalent to summing, over every subset of clusters of size `r`, the
/// product of the supports inside and the thetas outside. Computed as a
/// convolution over clusters.
pub fn at_least_distribution(supports: &[f64]) -> (Vec<f64>, f64) {
    let mut by_size = vec![0.0; supports.len() + 1];
    by_size[0] = 1.0;
    for (seen, &a) in supports.iter().enumerate() {
        let b = 1.0 - a;
        for r in (1..=seen + 1).rev() {
            by_size[r] = by_size[r] * b + by_size[r - 1] * a;
        }
        by_size[0] *= b;
    }
    let theta = by_size[0];
    (by_size.split_off(1), theta)
}

/// Combines the count evidence with the prior.
///
/// `{|chi| = r}` meets `{|chi| >= j}` exactly when `j <= r`, so the
/// unnormalized posterior of `r` is `m(r) * (theta + sum_{j<=r} at_least[j])`
/// and the conflict is `sum_r m(r) * sum_{j>r} at_least[j]`.
pub fn posterior_counts(
    at_least: &[f64],
    theta_mass: f64,
    prior: &PriorSpec,
) -> Result<(Vec<f64>, f64)> {
    prior.validate()?;
    if at_least.len() != prior.max_count {
        return Err(Error::domain(format!(
            "count evidence has {} entries, prior has {}",
            at_least.len(),
            prior.max_count
        )));
    }
    let m = prior.masses();
    let total: f64 = at_least.iter().sum();
    let mut below = theta_mass;
    let mut unnormalized = Vec::with_capacity(m.len());
    let mut c0 = 0.0;
    for (r, &mr) in m.iter().enumerate() {
        below += at_least[r];
        unnormalized.push(mr * below);
        c0 += mr * (total - (below - theta_mass));
    }
    let c0 = c0.max(0.0);
    if c0 >= 1.0 - TOTAL_CONFLICT_EPS {
        return Err(Error::TotalConflict { conflict: c0 });
    }
    let norm: f64 = unnormalized.iter().sum();
    Ok((unnormalized.into_iter().map(|x| x / norm).collect(), c0))
}

/// Index of the largest entry, ties to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &x)| {
            if x > best.1 {
                (i, x)
            } else {
                best
            }
        })
        .0
}

/// `gd[r*] = 1 - alpha + alpha * posterior[r*]` at the argmax, and
/// `alpha * posterior[r]` elsewhere.
pub fn gradual_determination(posterior: &[f64], alpha: f64) -> Vec<f64> {
    let best = argmax(posterior);
    posterior
        .iter()
        .enumerate()
        .map(|(r, &p)| {
            if r == best {
                1.0 - alpha + alpha * p
            } else {
                alpha * p
            }
        })
        .collect()
}

/// Everything the count determination derives in one iteration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountState {
    pub existence: Vec<Existence>,
    /// `m(|chi| >= r)` for `r = 1..=R`.
    pub at_least: Vec<f64>,
    pub theta_mass: f64,
    /// `m*(|chi| = r)` for `r = 1..=R`.
    pub posterior: Vec<f64>,
    pub c0: f64,
    pub alpha: f64,
    pub gd: Vec<f64>,
}

impl CountState {
    /// Most probable number of clusters (1-based).
    pub fn determined_count(&self) -> usize {
        argmax(&self.posterior) + 1
    }
}

pub fn compute_count_state(
    evidence: &[SimpleSupport],
    state: &NetworkState,
    prior: &PriorSpec,
    alpha: f64,
) -> Result<CountState> {
    if evidence.len() != state.rows() {
        return Err(Error::domain(format!(
            "{} pieces of evidence for {} rows",
            evidence.len(),
            state.rows()
        )));
    }
    if prior.max_count != state.cols() {
        return Err(Error::domain(format!(
            "prior covers {} counts, network has {} columns",
            prior.max_count,
            state.cols()
        )));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!("alpha {alpha} outside [0, 1]")));
    }
    let existence = (0..state.cols())
        .map(|n| cluster_existence(evidence, &state.column(n)))
        .collect::<Result<Vec<_>>>()?;
    let supports: Vec<f64> = existence.iter().map(|e| e.support).collect();
    let (at_least, theta_mass) = at_least_distribution(&supports);
    let (posterior, c0) = posterior_counts(&at_least, theta_mass, prior)?;
    let gd = gradual_determination(&posterior, alpha);
    Ok(CountState {
        existence,
        at_least,
        theta_mass,
        posterior,
        c0,
        alpha,
        gd,
    })
}
