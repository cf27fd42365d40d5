//! Test problems: one simple support function per nonempty subset of the
//! frame, and the partition that puts every piece of evidence with its
//! smallest element.
//!
//! Problem files are line oriented, `id, subset, mass`, with the subset as
//! space-separated 1-based elements in ascending order. Lines starting with
//! `#` are comments, except `# frame_size = N`, which fixes the frame.
//! Without it the frame is the largest element mentioned.
//!
//! ```text
//! # frame_size = 3
//! 0, 1, 0.41
//! 1, 2, 0.87
//! 2, 1 2, 0.05
//! ```
//!
//! Partition files are `id, cluster` with 0-based clusters and an optional
//! `# clusters = R` line.

use std::fmt::Write as _;
use std::path::Path;

use rand::distributions::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evidence::{FocalSet, Frame, SimpleSupport, MAX_FRAME_SIZE};
use crate::metaconflict::Partition;
use crate::seeding;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MassMode {
    /// Masses drawn uniformly from the open interval (0, 1).
    #[default]
    Uniform,
    /// Every mass is 1.
    AllOnes,
}

impl std::str::FromStr for MassMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(MassMode::Uniform),
            "all-ones" | "ones" => Ok(MassMode::AllOnes),
            other => Err(Error::Config(format!(
                "mass mode must be uniform or all-ones, got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSpec {
    pub frame_size: usize,
    pub mass_mode: MassMode,
    pub seed: u64,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        ProblemSpec {
            frame_size: 5,
            mass_mode: MassMode::Uniform,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub frame: Frame,
    pub evidence: Vec<SimpleSupport>,
}

/// Largest frame for which the full powerset problem is generated.
pub const MAX_GENERATED_FRAME: usize = 20;

/// One piece of evidence per nonempty subset, in ascending bitmask order.
pub fn generate(spec: &ProblemSpec) -> Result<Problem> {
    if spec.frame_size < 1 || spec.frame_size > MAX_GENERATED_FRAME {
        return Err(Error::domain(format!(
            "frame size must be in 1..={MAX_GENERATED_FRAME}, got {}",
            spec.frame_size
        )));
    }
    let frame = Frame::new(spec.frame_size)?;
    let mut rng = seeding::stream(spec.seed, seeding::PROBLEM_STREAM);
    let count = (1u64 << spec.frame_size) - 1;
    let evidence = (1..=count)
        .enumerate()
        .map(|(id, bits)| {
            let mass = match spec.mass_mode {
                MassMode::Uniform => rng.sample(Open01),
                MassMode::AllOnes => 1.0,
            };
            SimpleSupport::new(id, FocalSet::from_bits(bits, spec.frame_size as u8)?, mass)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Problem { frame, evidence })
}

/// Every piece of evidence goes to the cluster of its smallest element.
/// Within a cluster all focal sets share that element, so nothing conflicts.
pub fn canonical_partition(evidence: &[SimpleSupport], frame: &Frame) -> Result<Partition> {
    let assignment = evidence
        .iter()
        .map(|e| {
            if e.frame_size() as usize != frame.size() {
                return Err(Error::FrameMismatch {
                    left: frame.size() as u8,
                    right: e.frame_size(),
                });
            }
            e.focal()
                .min_element()
                .map(|x| x - 1)
                .ok_or_else(|| Error::domain(format!("evidence {} has an empty focal set", e.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::new(assignment, frame.size())
}

pub fn format_problem(problem: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# id, subset, mass");
    let _ = writeln!(out, "# frame_size = {}", problem.frame.size());
    for e in &problem.evidence {
        let subset: Vec<String> = e.focal().elements().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}, {}, {}", e.id, subset.join(" "), e.mass());
    }
    out
}

pub fn write_problem(path: &Path, problem: &Problem) -> Result<()> {
    std::fs::write(path, format_problem(problem)).map_err(|e| Error::io(path, e))
}

fn directive(line: &str, key: &str) -> Option<String> {
    let rest = line.strip_prefix('#')?.trim();
    let (k, v) = rest.split_once('=')?;
    (k.trim() == key).then(|| v.trim().to_string())
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_problem(text: &str, path: &Path) -> Result<Problem> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut frame_size = None;
    for (i, line) in text.lines().enumerate() {
        if let Some(v) = directive(line.trim(), "frame_size") {
            frame_size = Some(
                v.parse::<usize>()
                    .map_err(|e| parse_err(i + 1, format!("frame_size: {e}")))?,
            );
        }
    }

    let mut rows = Vec::new();
    for (line, l) in data_lines(text) {
        let fields: Vec<&str> = l.split(',').map(str::trim).collect();
        let [id, subset, mass] = fields[..] else {
            return Err(parse_err(line, format!("expected 3 fields, got {}", fields.len())));
        };
        let id: usize = id
            .parse()
            .map_err(|e| parse_err(line, format!("id: {e}")))?;
        let elements = subset
            .split_whitespace()
            .map(|x| x.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(line, format!("subset: {e}")))?;
        let mass: f64 = mass
            .parse()
            .map_err(|e| parse_err(line, format!("mass: {e}")))?;
        rows.push((line, id, elements, mass));
    }
    if rows.is_empty() {
        return Err(parse_err(0, "no evidence".into()));
    }
    let size = match frame_size {
        Some(s) => s,
        None => rows
            .iter()
            .flat_map(|r| r.2.iter().copied())
            .max()
            .unwrap_or(0),
    };
    if size == 0 || size > MAX_FRAME_SIZE {
        return Err(parse_err(0, format!("frame size {size} unsupported")));
    }
    let frame = Frame::new(size)?;
    let mut evidence = Vec::with_capacity(rows.len());
    for (pos, (line, id, elements, mass)) in rows.into_iter().enumerate() {
        if id != pos {
            return Err(parse_err(line, format!("ids must be 0, 1, 2, ...; expected {pos}, got {id}")));
        }
        let focal = frame.set(&elements).map_err(|e| parse_err(line, e.to_string()))?;
        evidence.push(SimpleSupport::new(id, focal, mass).map_err(|e| parse_err(line, e.to_string()))?);
    }
    Ok(Problem { frame, evidence })
}

pub fn read_problem(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_problem(&text, path)
}

pub fn format_partition(partition: &Partition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# id, cluster");
    let _ = writeln!(out, "# clusters = {}", partition.cluster_count());
    for (id, c) in partition.assignment().iter().enumerate() {
        let _ = writeln!(out, "{id}, {c}");
    }
    out
}

pub fn parse_partition(text: &str, path: &Path) -> Result<Partition> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut clusters = None;
    for (i, line) in text.lines().enumerate() {
        if let Some(v) = directive(line.trim(), "clusters") {
            clusters = Some(
                v.parse::<usize>()
                    .map_err(|e| parse_err(i + 1, format!("clusters: {e}")))?,
            );
        }
    }
    let mut assignment = Vec::new();
    for (line, l) in data_lines(text) {
        let Some((id, c)) = l.split_once(',') else {
            return Err(parse_err(line, "expected `id, cluster`".into()));
        };
        let id: usize = id
            .trim()
            .parse()
            .map_err(|e| parse_err(line, format!("id: {e}")))?;
        if id != assignment.len() {
            return Err(parse_err(line, format!("expected id {}, got {id}", assignment.len())));
        }
        assignment.push(
            c.trim()
                .parse::<usize>()
                .map_err(|e| parse_err(line, format!("cluster: {e}")))?,
        );
    }
    let r = clusters.unwrap_or_else(|| assignment.iter().max().map_or(1, |m| m + 1));
    Partition::new(assignment, r).map_err(|e| parse_err(0, e.to_string()))
}

pub fn read_partition(path: &Path) -> Result<Partition> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_partition(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metaconflict::evaluate_partition;

    #[test]
    fn thirty_one_pieces_of_evidence() {
        let p = generate(&ProblemSpec::default()).unwrap();
        assert_eq!(p.evidence.len(), 31);
        let bits: Vec<u64> = p.evidence.iter().map(|e| e.focal().bits()).collect();
        assert_eq!(bits, (1..=31).collect::<Vec<_>>());
        assert!(p.evidence.iter().all(|e| e.mass() > 0.0 && e.mass() < 1.0));
        assert!(p.evidence.iter().enumerate().all(|(i, e)| e.id == i));
    }

    #[test]
    fn single_element_frame() {
        let p = generate(&ProblemSpec {
            frame_size: 1,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(p.evidence.len(), 1);
        assert_eq!(p.evidence[0].focal().elements().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = ProblemSpec {
            seed: 42,
            ..Default::default()
        };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = ProblemSpec {
            seed: 43,
            ..Default::default()
        };
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn all_ones_mode() {
        let p = generate(&ProblemSpec {
            mass_mode: MassMode::AllOnes,
            ..Default::default()
        })
        .unwrap();
        assert!(p.evidence.iter().all(|e| e.mass() == 1.0));
    }

    #[test]
    fn canonical_partition_by_smallest_element() {
        let p = generate(&ProblemSpec::default()).unwrap();
        let part = canonical_partition(&p.evidence, &p.frame).unwrap();
        let idx = p
            .evidence
            .iter()
            .position(|e| e.focal() == p.frame.set(&[3, 5]).unwrap())
            .unwrap();
        // focal {3,5} lands in the third cluster
        assert_eq!(part.assignment()[idx], 2);
        assert_eq!(part.sizes(), vec![16, 8, 4, 2, 1]);
        assert_eq!(part.nonempty_clusters(), 5);
        let report = evaluate_partition(&p.evidence, &part, 0.0).unwrap();
        assert_eq!(report.mcf, 0.0);
    }

    #[test]
    fn problem_file_roundtrip() {
        let p = generate(&ProblemSpec {
            frame_size: 3,
            seed: 9,
            ..Default::default()
        })
        .unwrap();
        let text = format_problem(&p);
        let back = parse_problem(&text, Path::new("mem")).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn problem_file_without_frame_directive() {
        let text = "0, 1, 0.5\n1, 2 3, 0.25\n";
        let p = parse_problem(text, Path::new("mem")).unwrap();
        assert_eq!(p.frame.size(), 3);
        assert_eq!(p.evidence[1].focal(), p.frame.set(&[2, 3]).unwrap());
    }

    #[test]
    fn problem_file_errors() {
        let bad = [
            "0, 1\n",
            "0, 1, x\n",
            "1, 1, 0.5\n",
            "0, , 0.5\n",
            "0, 1, 1.5\n",
            "# frame_size = 2\n0, 3, 0.5\n",
            "",
        ];
        for text in bad {
            assert!(
                matches!(parse_problem(text, Path::new("mem")), Err(Error::Parse { .. })),
                "{text:?}"
            );
        }
    }

    #[test]
    fn partition_file_roundtrip() {
        let part = Partition::new(vec![0, 2, 1, 1, 0], 4).unwrap();
        let back = parse_partition(&format_partition(&part), Path::new("mem")).unwrap();
        assert_eq!(back, part);
        let inferred = parse_partition("0, 1\n1, 0\n", Path::new("mem")).unwrap();
        assert_eq!(inferred.cluster_count(), 2);
        assert!(parse_partition("0, 1\n2, 0\n", Path::new("mem")).is_err());
        assert!(parse_partition("# clusters = 1\n0, 1\n", Path::new("mem")).is_err());
    }
}
