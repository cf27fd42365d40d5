//! Frames of discernment, focal sets, simple support functions and
//! Dempster's rule of combination.
//!
//! Focal sets are bitmasks over at most 63 frame elements. Element `i`
//! (1-based, as in reports and problem files) is bit `i - 1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported frame.
pub const MAX_FRAME_SIZE: usize = 63;

/// Masses below this are dropped after every combination step.
pub const PRUNE_EPS: f64 = 1e-12;

/// Conflict at or above `1 - TOTAL_CONFLICT_EPS` is treated as total.
pub const TOTAL_CONFLICT_EPS: f64 = 1e-12;

/// Normalization tolerance for mass functions.
pub const MASS_SUM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    labels: Vec<String>,
}

impl Frame {
    /// Frame `{1, 2, ..., size}`.
    pub fn new(size: usize) -> Result<Self> {
        Self::with_labels((1..=size).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() || labels.len() > MAX_FRAME_SIZE {
            return Err(Error::domain(format!(
                "frame size must be in 1..={MAX_FRAME_SIZE}, got {}",
                labels.len()
            )));
        }
        Ok(Frame { labels })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn full(&self) -> FocalSet {
        FocalSet::full(self.size() as u8)
    }

    /// Builds a focal set from 1-based element indices.
    pub fn set(&self, elements: &[usize]) -> Result<FocalSet> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > self.size() {
                return Err(Error::domain(format!(
                    "element {e} outside frame 1..={}",
                    self.size()
                )));
            }
            bits |= 1 << (e - 1);
        }
        FocalSet::from_bits(bits, self.size() as u8)
    }
}

/// A subset of a frame of discernment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FocalSet {
    bits: u64,
    frame: u8,
}

impl FocalSet {
    pub fn from_bits(bits: u64, frame_size: u8) -> Result<Self> {
        if frame_size == 0 || frame_size as usize > MAX_FRAME_SIZE {
            return Err(Error::domain(format!("invalid frame size {frame_size}")));
        }
        if bits & !full_mask(frame_size) != 0 {
            return Err(Error::domain(format!(
                "bits {bits:#x} exceed a frame of {frame_size} elements"
            )));
        }
        Ok(FocalSet {
            bits,
            frame: frame_size,
        })
    }

    pub fn full(frame_size: u8) -> Self {
        FocalSet {
            bits: full_mask(frame_size),
            frame: frame_size,
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn frame_size(&self) -> u8 {
        self.frame
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == full_mask(self.frame)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn intersect(&self, other: &FocalSet) -> Result<FocalSet> {
        check_frames(self.frame, other.frame)?;
        Ok(FocalSet {
            bits: self.bits & other.bits,
            frame: self.frame,
        })
    }

    pub fn is_disjoint(&self, other: &FocalSet) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }

    /// Member elements, 1-based and ascending.
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.frame as usize)
            .filter(move |i| self.bits & (1 << i) != 0)
            .map(|i| i + 1)
    }

    /// Smallest member (1-based).
    pub fn min_element(&self) -> Option<usize> {
        (!self.is_empty()).then(|| self.bits.trailing_zeros() as usize + 1)
    }
}

impl fmt::Display for FocalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

fn full_mask(frame_size: u8) -> u64 {
    if frame_size as usize >= 64 {
        u64::MAX
    } else {
        (1u64 << frame_size) - 1
    }
}

fn check_frames(left: u8, right: u8) -> Result<()> {
    if left != right {
        return Err(Error::FrameMismatch { left, right });
    }
    Ok(())
}

/// One piece of evidence: `mass` on `focal`, `1 - mass` on the whole frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimpleSupport {
    pub id: usize,
    focal: FocalSet,
    mass: f64,
}

impl SimpleSupport {
    pub fn new(id: usize, focal: FocalSet, mass: f64) -> Result<Self> {
        if focal.is_empty() {
            return Err(Error::domain(format!("evidence {id}: empty focal set")));
        }
        if !(mass > 0.0 && mass <= 1.0) {
            return Err(Error::domain(format!(
                "evidence {id}: mass {mass} outside (0, 1]"
            )));
        }
        Ok(SimpleSupport { id, focal, mass })
    }

    pub fn focal(&self) -> FocalSet {
        self.focal
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn theta_mass(&self) -> f64 {
        1.0 - self.mass
    }

    pub fn frame_size(&self) -> u8 {
        self.focal.frame
    }

    pub fn to_mass_function(&self) -> MassFunction {
        MassFunction::simple(self.focal, self.mass)
    }
}

/// Conflict between two simple support functions: the product of their
/// masses when the focal sets are disjoint, zero otherwise.
pub fn pairwise_conflict(a: &SimpleSupport, b: &SimpleSupport) -> Result<f64> {
    if a.focal.is_disjoint(&b.focal)? {
        Ok(a.mass * b.mass)
    } else {
        Ok(0.0)
    }
}

/// A basic probability assignment over one frame.
///
/// Entries are strictly positive, sum to one and never include the empty set.
#[derive(Clone, Debug, PartialEq)]
pub struct MassFunction {
    frame: u8,
    entries: BTreeMap<u64, f64>,
}

impl MassFunction {
    /// All mass on the frame.
    pub fn vacuous(frame_size: u8) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(full_mask(frame_size), 1.0);
        MassFunction {
            frame: frame_size,
            entries,
        }
    }

    fn simple(focal: FocalSet, mass: f64) -> Self {
        let mut entries = BTreeMap::new();
        if mass > 0.0 {
            entries.insert(focal.bits, mass);
        }
        let rest = 1.0 - mass;
        if rest > 0.0 {
            *entries.entry(full_mask(focal.frame)).or_insert(0.0) += rest;
        }
        MassFunction {
            frame: focal.frame,
            entries,
        }
    }

    pub fn from_entries(
        frame_size: u8,
        entries: impl IntoIterator<Item = (FocalSet, f64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (set, mass) in entries {
            check_frames(frame_size, set.frame)?;
            if set.is_empty() {
                return Err(Error::domain("mass function entry on the empty set"));
            }
            if !(mass >= 0.0 && mass.is_finite()) {
                return Err(Error::domain(format!("invalid mass {mass}")));
            }
            if mass > 0.0 {
                *map.entry(set.bits).or_insert(0.0) += mass;
            }
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > MASS_SUM_TOL {
            return Err(Error::domain(format!("masses sum to {total}, expected 1")));
        }
        Ok(MassFunction {
            frame: frame_size,
            entries: map,
        })
    }

    pub fn frame_size(&self) -> u8 {
        self.frame
    }

    pub fn mass(&self, set: &FocalSet) -> f64 {
        if set.frame != self.frame {
            return 0.0;
        }
        self.entries.get(&set.bits).copied().unwrap_or(0.0)
    }

    pub fn theta_mass(&self) -> f64 {
        self.entries
            .get(&full_mask(self.frame))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (FocalSet, f64)> + '_ {
        let frame = self.frame;
        self.entries
            .iter()
            .map(move |(&bits, &m)| (FocalSet { bits, frame }, m))
    }
}

/// Weights a simple support function by an output voltage `v`: the focal
/// mass becomes `v * mass`, the rest goes to the frame.
pub fn discount_by_voltage(e: &SimpleSupport, v: f64) -> Result<MassFunction> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::domain(format!("voltage {v} outside [0, 1]")));
    }
    Ok(MassFunction::simple(e.focal, v * e.mass))
}

/// Incremental Dempster combination.
///
/// Tracks `1 - k` as the product of the per-step normalizers so the
/// accumulated conflict equals that of a single n-ary combination. Once a
/// step is totally conflicting the accumulator saturates at `k = 1`.
#[derive(Clone, Debug)]
pub struct Combiner {
    current: MassFunction,
    one_minus_k: f64,
    total: bool,
}

impl Combiner {
    pub fn new(frame_size: u8) -> Self {
        Combiner {
            current: MassFunction::vacuous(frame_size),
            one_minus_k: 1.0,
            total: false,
        }
    }

    pub fn absorb(&mut self, body: &MassFunction) -> Result<()> {
        check_frames(self.current.frame, body.frame)?;
        if self.total {
            return Ok(());
        }
        let mut product: BTreeMap<u64, f64> = BTreeMap::new();
        let mut empty = 0.0;
        for (&a, &ma) in &self.current.entries {
            for (&b, &mb) in &body.entries {
                let m = ma * mb;
                match a & b {
                    0 => empty += m,
                    c => *product.entry(c).or_insert(0.0) += m,
                }
            }
        }
        let keep = 1.0 - empty;
        if keep <= TOTAL_CONFLICT_EPS {
            self.total = true;
            self.one_minus_k = 0.0;
            return Ok(());
        }
        product.retain(|_, m| {
            *m /= keep;
            *m >= PRUNE_EPS
        });
        let sum: f64 = product.values().sum();
        product.values_mut().for_each(|m| *m /= sum);
        self.current.entries = product;
        self.one_minus_k *= keep;
        Ok(())
    }

    /// Accumulated conflict, in `[0, 1]`.
    pub fn conflict(&self) -> f64 {
        1.0 - self.one_minus_k
    }

    pub fn is_total(&self) -> bool {
        self.total || self.one_minus_k <= TOTAL_CONFLICT_EPS
    }

    pub fn finish(self) -> Result<(MassFunction, f64)> {
        if self.is_total() {
            return Err(Error::TotalConflict {
                conflict: self.conflict(),
            });
        }
        let k = self.conflict();
        Ok((self.current, k))
    }
}

/// Dempster's rule over a list of bodies of evidence. Returns the
/// normalized combination and the total conflict `k`.
pub fn combine(frame: &Frame, bodies: &[MassFunction]) -> Result<(MassFunction, f64)> {
    let mut acc = Combiner::new(frame.size() as u8);
    for body in bodies {
        acc.absorb(body)?;
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn frame5() -> Frame {
        Frame::new(5).unwrap()
    }

    fn ssf(frame: &Frame, id: usize, elems: &[usize], mass: f64) -> SimpleSupport {
        SimpleSupport::new(id, frame.set(elems).unwrap(), mass).unwrap()
    }

    #[test]
    fn frame_bounds() {
        assert!(Frame::new(0).is_err());
        assert!(Frame::new(63).is_ok());
        assert!(Frame::new(64).is_err());
        assert!(frame5().set(&[6]).is_err());
        assert!(FocalSet::from_bits(0b100000, 5).is_err());
    }

    #[test]
    fn focal_set_ops() {
        let f = frame5();
        let a = f.set(&[1, 3, 5]).unwrap();
        let b = f.set(&[3, 4]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), f.set(&[3]).unwrap());
        assert_eq!(a.elements().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(b.min_element(), Some(3));
        assert_eq!(a.to_string(), "{1,3,5}");
        assert!(f.full().is_full());
        let empty = f.set(&[1]).unwrap().intersect(&f.set(&[2]).unwrap()).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.min_element(), None);

        let other = Frame::new(4).unwrap().set(&[1]).unwrap();
        assert!(matches!(
            a.intersect(&other),
            Err(Error::FrameMismatch { left: 5, right: 4 })
        ));
    }

    #[test]
    fn simple_support_validation() {
        let f = frame5();
        let empty = FocalSet::from_bits(0, 5).unwrap();
        assert!(SimpleSupport::new(0, empty, 0.5).is_err());
        assert!(SimpleSupport::new(0, f.full(), 0.0).is_err());
        assert!(SimpleSupport::new(0, f.full(), 1.1).is_err());
        assert!(SimpleSupport::new(0, f.full(), 1.0).is_ok());
    }

    #[test]
    fn conflict_of_disjoint_pair() {
        let f = frame5();
        let a = ssf(&f, 0, &[1], 0.6);
        let b = ssf(&f, 1, &[2, 3], 0.5);
        assert_abs_diff_eq!(pairwise_conflict(&a, &b).unwrap(), 0.30, epsilon = 1e-15);
        assert_abs_diff_eq!(pairwise_conflict(&b, &a).unwrap(), 0.30, epsilon = 1e-15);
    }

    #[test]
    fn no_conflict_when_overlapping() {
        let f = frame5();
        let a = ssf(&f, 0, &[1, 2], 0.9);
        let b = ssf(&f, 1, &[2], 0.9);
        assert_eq!(pairwise_conflict(&a, &b).unwrap(), 0.0);
        assert_eq!(pairwise_conflict(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn pairwise_conflict_frame_mismatch() {
        let a = ssf(&frame5(), 0, &[1], 0.5);
        let b = ssf(&Frame::new(3).unwrap(), 1, &[2], 0.5);
        assert!(matches!(
            pairwise_conflict(&a, &b),
            Err(Error::FrameMismatch { .. })
        ));
    }

    #[test]
    fn combine_empty_list_is_vacuous() {
        let f = frame5();
        let (m, k) = combine(&f, &[]).unwrap();
        assert_eq!(m, MassFunction::vacuous(5));
        assert_eq!(k, 0.0);
    }

    #[test]
    fn combine_two_disjoint_halves() {
        let f = frame5();
        let a = ssf(&f, 0, &[1], 0.5).to_mass_function();
        let b = ssf(&f, 1, &[2], 0.5).to_mass_function();
        let (m, k) = combine(&f, &[a, b]).unwrap();
        // products: {1}∩{2}=∅ 0.25, {1}∩Θ 0.25, Θ∩{2} 0.25, Θ∩Θ 0.25
        assert_abs_diff_eq!(k, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(m.mass(&f.set(&[1]).unwrap()), 0.25 / 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(m.mass(&f.set(&[2]).unwrap()), 0.25 / 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(m.theta_mass(), 0.25 / 0.75, epsilon = 1e-15);
    }

    #[test]
    fn combine_single_body_unchanged() {
        let f = frame5();
        let body = MassFunction::from_entries(
            5,
            [
                (f.set(&[1, 2]).unwrap(), 0.3),
                (f.set(&[4]).unwrap(), 0.2),
                (f.full(), 0.5),
            ],
        )
        .unwrap();
        let (m, k) = combine(&f, std::slice::from_ref(&body)).unwrap();
        assert_eq!(k, 0.0);
        for (set, mass) in body.iter() {
            assert_abs_diff_eq!(m.mass(&set), mass, epsilon = 1e-15);
        }
    }

    #[test]
    fn combine_total_conflict_is_an_error() {
        let f = frame5();
        let a = ssf(&f, 0, &[1], 1.0).to_mass_function();
        let b = ssf(&f, 1, &[2], 1.0).to_mass_function();
        assert!(matches!(
            combine(&f, &[a.clone(), b.clone()]),
            Err(Error::TotalConflict { .. })
        ));
        let mut acc = Combiner::new(5);
        acc.absorb(&a).unwrap();
        acc.absorb(&b).unwrap();
        assert!(acc.is_total());
        assert_eq!(acc.conflict(), 1.0);
    }

    #[test]
    fn discount_by_voltage_cases() {
        let f = frame5();
        let e = ssf(&f, 0, &[2, 4], 0.8);
        assert_eq!(discount_by_voltage(&e, 0.0).unwrap(), MassFunction::vacuous(5));
        assert_eq!(discount_by_voltage(&e, 1.0).unwrap(), e.to_mass_function());
        let half = discount_by_voltage(&e, 0.5).unwrap();
        assert_abs_diff_eq!(half.mass(&e.focal()), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(half.theta_mass(), 0.6, epsilon = 1e-15);
        assert!(discount_by_voltage(&e, -0.1).is_err());
        assert!(discount_by_voltage(&e, 1.5).is_err());
    }

    #[test]
    fn theta_mass_closed_form_for_ssfs() {
        let f = frame5();
        let evidence = [
            ssf(&f, 0, &[1], 0.4),
            ssf(&f, 1, &[2, 3], 0.7),
            ssf(&f, 2, &[1, 3], 0.2),
            ssf(&f, 3, &[4, 5], 0.9),
        ];
        let bodies: Vec<_> = evidence.iter().map(|e| e.to_mass_function()).collect();
        let (m, k) = combine(&f, &bodies).unwrap();
        let prod: f64 = evidence.iter().map(|e| e.theta_mass()).product();
        assert_abs_diff_eq!(m.theta_mass(), prod / (1.0 - k), epsilon = 1e-9);
        assert_abs_diff_eq!(m.total(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn mass_function_rejects_bad_entries() {
        let f = frame5();
        assert!(MassFunction::from_entries(5, [(f.full(), 0.9)]).is_err());
        let empty = FocalSet::from_bits(0, 5).unwrap();
        assert!(MassFunction::from_entries(5, [(empty, 0.5), (f.full(), 0.5)]).is_err());
        let m = MassFunction::from_entries(5, [(f.set(&[1]).unwrap(), 0.0), (f.full(), 1.0)])
            .unwrap();
        assert_eq!(m.len(), 1);
    }
}
