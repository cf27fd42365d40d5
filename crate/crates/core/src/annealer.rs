//! The neural structure.
//!
//! One neuron per (evidence, cluster) pair. Row `m` is a piece of evidence,
//! column `n` a candidate cluster. Input voltages `u` evolve synchronously;
//! output voltages are `V = (1 + tanh(u / u0)) / 2` and read as the degree
//! to which evidence `m` belongs to cluster `n`.
//!
//! The update for every neuron is
//!
//! ```text
//! u(t+1) = u(t) + eta * (T1 + T2 + T3 + eb - u(t))
//! T1 = sum_i (dti * w(c_im) + gi) * V_in      same column
//! T2 = sum_{j != n} (ri + gi) * V_mj          same row
//! T3 = (Dti + gi) * drive(n, gd)              domain term
//! ```
//!
//! with `w(c) = -ln(1 - c)` the conflict weight.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons reject NaN

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metaconflict::{conflict_weight, ConflictMatrix, Partition};

/// How the gradual determination drives the domain term of column `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainTerm {
    /// Column `n` (0-based) is driven by the belief that there are at most
    /// `n` clusters, i.e. fewer clusters than would need this column.
    #[default]
    Cumulative,
    /// Column `n` is driven by `gd(|chi| = n + 1)` directly.
    Literal,
}

impl std::str::FromStr for DomainTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cumulative" => Ok(DomainTerm::Cumulative),
            "literal" => Ok(DomainTerm::Literal),
            other => Err(Error::Config(format!(
                "domain term must be cumulative or literal, got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HyperParams {
    /// Gain factor.
    pub eta: f64,
    /// Data-term inhibition.
    pub dti: f64,
    /// Row inhibition.
    pub ri: f64,
    /// Domain inhibition.
    pub domain_inhibition: f64,
    /// Global inhibition, added to every coupling.
    pub gi: f64,
    /// Excitation bias.
    pub eb: f64,
    /// Sigmoid scale.
    pub u0: f64,
    /// Half-width of the initial noise, as a fraction of `u0`.
    pub noise_amplitude: f64,
    pub max_iterations: usize,
    /// A neuron counts as on at or above this voltage.
    pub on_threshold: f64,
    /// A neuron counts as off at or below this voltage.
    pub off_threshold: f64,
    pub domain_term: DomainTerm,
    /// Whether the column sum includes the neuron itself (`gi * V_mn`).
    pub self_coupling: bool,
    /// Seed for the initial noise.
    pub seed: u64,
}

impl Default for HyperParams {
    fn default() -> Self {
        HyperParams {
            eta: 1e-5,
            dti: -2000.0,
            ri: -500.0,
            domain_inhibition: -2000.0,
            gi: -200.0,
            eb: 1800.0,
            u0: 0.02,
            noise_amplitude: 0.1,
            max_iterations: 1000,
            on_threshold: 0.99,
            off_threshold: 0.01,
            domain_term: DomainTerm::Cumulative,
            self_coupling: true,
            seed: 0,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::domain(format!("eta must be > 0, got {}", self.eta)));
        }
        if !(self.u0 > 0.0) {
            return Err(Error::domain(format!("u0 must be > 0, got {}", self.u0)));
        }
        if !(self.noise_amplitude >= 0.0) {
            return Err(Error::domain("noise amplitude must be >= 0"));
        }
        if self.max_iterations < 1 {
            return Err(Error::domain("max_iterations must be >= 1"));
        }
        if !(0.0 <= self.off_threshold
            && self.off_threshold < self.on_threshold
            && self.on_threshold <= 1.0)
        {
            return Err(Error::domain(format!(
                "need 0 <= off ({}) < on ({}) <= 1",
                self.off_threshold, self.on_threshold
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkState {
    rows: usize,
    cols: usize,
    u: Vec<f64>,
    v: Vec<f64>,
    t: usize,
    entropy0: f64,
}

impl NetworkState {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn iteration(&self) -> usize {
        self.t
    }

    pub fn initial_entropy(&self) -> f64 {
        self.entropy0
    }

    pub fn u(&self, m: usize, n: usize) -> f64 {
        self.u[m * self.cols + n]
    }

    pub fn v(&self, m: usize, n: usize) -> f64 {
        self.v[m * self.cols + n]
    }

    /// Output voltages, row-major.
    pub fn voltages(&self) -> &[f64] {
        &self.v
    }

    pub fn input_voltages(&self) -> &[f64] {
        &self.u
    }

    pub fn row(&self, m: usize) -> &[f64] {
        &self.v[m * self.cols..(m + 1) * self.cols]
    }

    pub fn column(&self, n: usize) -> Vec<f64> {
        (0..self.rows).map(|m| self.v(m, n)).collect()
    }
}

pub fn output_voltage(u: f64, u0: f64) -> f64 {
    0.5 * (1.0 + (u / u0).tanh())
}

/// Input voltage at which every output voltage equals `1 / n_clusters`.
pub fn initial_input_voltage(n_clusters: usize, u0: f64) -> f64 {
    u0 * (2.0 / n_clusters as f64 - 1.0).atanh()
}

pub fn init_state<R: Rng + ?Sized>(
    n_evidence: usize,
    n_clusters: usize,
    params: &HyperParams,
    rng: &mut R,
) -> Result<NetworkState> {
    params.validate()?;
    if n_evidence < 1 {
        return Err(Error::domain("network needs at least one row"));
    }
    if n_clusters < 2 {
        return Err(Error::domain(format!(
            "network needs at least two columns, got {n_clusters}"
        )));
    }
    let u00 = initial_input_voltage(n_clusters, params.u0);
    let half_width = params.noise_amplitude * params.u0;
    let u: Vec<f64> = (0..n_evidence * n_clusters)
        .map(|_| u00 + half_width * rng.gen_range(-1.0..=1.0))
        .collect();
    let v: Vec<f64> = u.iter().map(|&x| output_voltage(x, params.u0)).collect();
    let entropy0 = raw_entropy(&v);
    Ok(NetworkState {
        rows: n_evidence,
        cols: n_clusters,
        u,
        v,
        t: 0,
        entropy0,
    })
}

/// Coefficient of `V_in` in the update of `u_mn`, for every pair of rows.
///
/// `dti * w(c_im) + gi` off the diagonal. On the diagonal the conflict is
/// zero, leaving `gi` (or nothing with self-coupling off). The matrix is
/// symmetric because the conflict matrix is.
#[derive(Clone, Debug, PartialEq)]
pub struct Coupling {
    n: usize,
    coeff: Vec<f64>,
}

impl Coupling {
    pub fn new(conflicts: &ConflictMatrix, params: &HyperParams) -> Self {
        let n = conflicts.len();
        let mut coeff = vec![0.0; n * n];
        for i in 0..n {
            for m in 0..n {
                coeff[i * n + m] = if i == m && !params.self_coupling {
                    0.0
                } else {
                    params.dti * conflict_weight(conflicts.get(i, m)) + params.gi
                };
            }
        }
        Coupling { n, coeff }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, m: usize) -> f64 {
        self.coeff[i * self.n + m]
    }
}

/// Per-column input of the domain term.
pub fn domain_drive(gd: &[f64], term: DomainTerm) -> Vec<f64> {
    match term {
        DomainTerm::Literal => gd.to_vec(),
        DomainTerm::Cumulative => {
            let mut below = 0.0;
            gd.iter()
                .map(|g| {
                    let d = below;
                    below += g;
                    d
                })
                .collect()
        }
    }
}

/// One synchronous iteration. `gd` is the gradual determination, one value
/// per column; `None` drops the domain term (fixed number of clusters).
pub fn step(
    state: &NetworkState,
    coupling: &Coupling,
    gd: Option<&[f64]>,
    params: &HyperParams,
) -> Result<NetworkState> {
    let (rows, cols) = (state.rows, state.cols);
    if coupling.len() != rows {
        return Err(Error::domain(format!(
            "coupling has {} rows, network has {rows}",
            coupling.len()
        )));
    }
    let drive = match gd {
        Some(gd) => {
            if gd.len() != cols {
                return Err(Error::domain(format!(
                    "gd has {} entries, network has {cols} columns",
                    gd.len()
                )));
            }
            if let Some(g) = gd.iter().find(|g| !(-1e-12..=1.0 + 1e-12).contains(*g)) {
                return Err(Error::domain(format!("gd value {g} outside [0, 1]")));
            }
            Some(domain_drive(gd, params.domain_term))
        }
        None => None,
    };

    let row_gain = params.ri + params.gi;
    let domain_gain = params.domain_inhibition + params.gi;
    let v = &state.v;
    let mut u = state.u.clone();
    let mut column_input = vec![0.0; cols];
    for m in 0..rows {
        column_input.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..rows {
            let c = coupling.get(i, m);
            if c == 0.0 {
                continue;
            }
            let vi = &v[i * cols..(i + 1) * cols];
            for (acc, &x) in column_input.iter_mut().zip(vi) {
                *acc += c * x;
            }
        }
        let row = &v[m * cols..(m + 1) * cols];
        let row_sum: f64 = row.iter().sum();
        for n in 0..cols {
            let idx = m * cols + n;
            let t1 = column_input[n];
            let t2 = row_gain * (row_sum - row[n]);
            let t3 = drive.as_ref().map_or(0.0, |d| domain_gain * d[n]);
            u[idx] = state.u[idx] + params.eta * (t1 + t2 + t3 + params.eb - state.u[idx]);
        }
    }
    let v = u.iter().map(|&x| output_voltage(x, params.u0)).collect();
    Ok(NetworkState {
        rows,
        cols,
        u,
        v,
        t: state.t + 1,
        entropy0: state.entropy0,
    })
}

/// `-sum V ln V` with `0 ln 0 = 0`.
pub fn raw_entropy(v: &[f64]) -> f64 {
    // adding 0.0 turns the -0.0 of an all-saturated grid into 0.0
    v.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln())
        .sum::<f64>()
        + 0.0
}

/// Raw entropy and its ratio `alpha` to the initial entropy, clamped to
/// `[0, 1]`.
pub fn entropy(state: &NetworkState) -> Result<(f64, f64)> {
    if !(state.entropy0 > 0.0) {
        return Err(Error::DegenerateStart);
    }
    let raw = raw_entropy(&state.v);
    Ok((raw, (raw / state.entropy0).clamp(0.0, 1.0)))
}

/// Every row has exactly one neuron on and all others off.
pub fn is_crisp(state: &NetworkState, params: &HyperParams) -> bool {
    (0..state.rows).all(|m| {
        let row = state.row(m);
        let on = row.iter().filter(|&&x| x >= params.on_threshold).count();
        let off = row.iter().filter(|&&x| x <= params.off_threshold).count();
        on == 1 && off == state.cols - 1
    })
}

pub fn has_converged(state: &NetworkState, params: &HyperParams) -> bool {
    state.t >= params.max_iterations || is_crisp(state, params)
}

/// Row-wise argmax, ties to the lowest column.
pub fn extract_partition(state: &NetworkState) -> Partition {
    let assignment = (0..state.rows)
        .map(|m| {
            state
                .row(m)
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (n, &x)| {
                    if x > best.1 {
                        (n, x)
                    } else {
                        best
                    }
                })
                .0
        })
        .collect();
    Partition::new(assignment, state.cols).expect("argmax is always a valid column")
}

#[cfg(test)]
pub(crate) fn state_from_voltages(rows: usize, cols: usize, v: Vec<f64>, t: usize) -> NetworkState {
    assert_eq!(v.len(), rows * cols);
    let u = v
        .iter()
        .map(|&x| 0.02 * (2.0 * x.clamp(1e-300, 1.0 - 1e-16) - 1.0).atanh())
        .collect();
    let entropy0 = raw_entropy(&vec![1.0 / cols as f64; rows * cols]);
    NetworkState {
        rows,
        cols,
        u,
        v,
        t,
        entropy0,
    }
}
