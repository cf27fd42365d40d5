//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use dsclust::evidence::{FocalSet, MassFunction};
use rand::Rng;

/// Dempster's rule as one n-ary combination: every tuple of focal elements
/// (one per body) contributes the product of its masses to the intersection
/// of its sets. Conflict is what lands on the empty set.
pub fn brute_combine(frame_size: u8, bodies: &[Vec<(u64, f64)>]) -> (BTreeMap<u64, f64>, f64) {
    let full = (1u64 << frame_size) - 1;
    let mut acc: Vec<(u64, f64)> = vec![(full, 1.0)];
    for body in bodies {
        let mut next = Vec::with_capacity(acc.len() * body.len());
        for &(a, ma) in &acc {
            for &(b, mb) in body {
                next.push((a & b, ma * mb));
            }
        }
        acc = next;
    }
    let mut out = BTreeMap::new();
    let mut k = 0.0;
    for (set, m) in acc {
        if set == 0 {
            k += m;
        } else {
            *out.entry(set).or_insert(0.0) += m;
        }
    }
    for m in out.values_mut() {
        *m /= 1.0 - k;
    }
    (out, k)
}

/// Mass on exactly `r` existing clusters, by walking all `2^R` subsets.
pub fn enumerate_at_least(supports: &[f64]) -> (Vec<f64>, f64) {
    let r = supports.len();
    let mut by_size = vec![0.0; r + 1];
    for mask in 0u32..(1 << r) {
        let mut p = 1.0;
        for (i, &a) in supports.iter().enumerate() {
            p *= if mask >> i & 1 == 1 { a } else { 1.0 - a };
        }
        by_size[mask.count_ones() as usize] += p;
    }
    let theta = by_size[0];
    (by_size[1..].to_vec(), theta)
}

/// A random body of up to `max_focal` nonempty focal sets with positive
/// masses summing to one.
pub fn random_body<R: Rng>(rng: &mut R, frame_size: u8, max_focal: usize) -> Vec<(u64, f64)> {
    let full = (1u64 << frame_size) - 1;
    let n = rng.gen_range(1..=max_focal);
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut merged = BTreeMap::new();
    for w in weights {
        *merged.entry(rng.gen_range(1..=full)).or_insert(0.0) += w / total;
    }
    merged.into_iter().collect()
}

pub fn to_mass_function(frame_size: u8, body: &[(u64, f64)]) -> MassFunction {
    MassFunction::from_entries(
        frame_size,
        body.iter()
            .map(|&(b, m)| (FocalSet::from_bits(b, frame_size).unwrap(), m)),
    )
    .unwrap()
}

/// Largest absolute difference between a combined mass function and an
/// oracle map.
pub fn max_mass_diff(m: &MassFunction, oracle: &BTreeMap<u64, f64>) -> f64 {
    let mut keys: Vec<u64> = oracle.keys().copied().collect();
    keys.extend(m.iter().map(|(s, _)| s.bits()));
    keys.into_iter()
        .map(|b| {
            let set = FocalSet::from_bits(b, m.frame_size()).unwrap();
            (m.mass(&set) - oracle.get(&b).copied().unwrap_or(0.0)).abs()
        })
        .fold(0.0, f64::max)
}
