use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{InstanceId, Page, RelationType};

/// One broken page invariant, naming the offending ids.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InvalidPageSize { width: f64, height: f64 },
    DuplicateInstanceId { id: InstanceId },
    MalformedBox { id: InstanceId },
    OutsidePage { id: InstanceId },
    Overlap { first: InstanceId, second: InstanceId },
    InstanceScoreOutOfRange { id: InstanceId, score: f64 },
    MixedInstanceScores,
    SelfLoop { id: InstanceId, rel: RelationType },
    DanglingEndpoint { subject: InstanceId, object: InstanceId, rel: RelationType, missing: InstanceId },
    DuplicateRelation { subject: InstanceId, object: InstanceId, rel: RelationType },
    RelationScoreOutOfRange { subject: InstanceId, object: InstanceId, rel: RelationType, score: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidPageSize { width, height } => {
                write!(f, "invalid page size {width}x{height}")
            }
            Violation::DuplicateInstanceId { id } => write!(f, "duplicate instance id {id}"),
            Violation::MalformedBox { id } => {
                write!(f, "instance {id}: box must have finite coordinates and positive size")
            }
            Violation::OutsidePage { id } => write!(f, "instance {id}: box extends beyond the page"),
            Violation::Overlap { first, second } => {
                write!(f, "overlap between instances {first} and {second}")
            }
            Violation::InstanceScoreOutOfRange { id, score } => {
                write!(f, "instance {id}: score {score} outside [0, 1]")
            }
            Violation::MixedInstanceScores => {
                f.write_str("some instances carry a score and others do not")
            }
            Violation::SelfLoop { id, rel } => write!(f, "self loop {id} -{rel}-> {id}"),
            Violation::DanglingEndpoint { subject, object, rel, missing } => {
                write!(f, "dangling endpoint {missing} in edge {subject} -{rel}-> {object}")
            }
            Violation::DuplicateRelation { subject, object, rel } => {
                write!(f, "duplicate edge {subject} -{rel}-> {object}")
            }
            Violation::RelationScoreOutOfRange { subject, object, rel, score } => {
                write!(f, "edge {subject} -{rel}-> {object}: score {score} outside [0, 1]")
            }
        }
    }
}

/// Every invariant violation found on one page; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn in_unit_range(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

/// Check every page invariant. The page is not modified.
pub fn validate_page(page: &Page) -> ValidationReport {
    let mut violations = Vec::new();

    if !(page.width.is_finite() && page.height.is_finite() && page.width > 0.0 && page.height > 0.0) {
        violations.push(Violation::InvalidPageSize { width: page.width, height: page.height });
    }

    let mut ids = HashSet::with_capacity(page.instances.len());
    for inst in &page.instances {
        if !ids.insert(inst.id) {
            violations.push(Violation::DuplicateInstanceId { id: inst.id });
        }
        if !inst.bbox.is_well_formed() {
            violations.push(Violation::MalformedBox { id: inst.id });
        } else if !inst.bbox.fits_within(page.width, page.height) {
            violations.push(Violation::OutsidePage { id: inst.id });
        }
        if let Some(score) = inst.score {
            if !in_unit_range(score) {
                violations.push(Violation::InstanceScoreOutOfRange { id: inst.id, score });
            }
        }
    }

    let scored = page.instances.iter().filter(|i| i.score.is_some()).count();
    if scored != 0 && scored != page.instances.len() {
        violations.push(Violation::MixedInstanceScores);
    }

    for (i, a) in page.instances.iter().enumerate() {
        for b in &page.instances[i + 1..] {
            if a.bbox.intersection_area(&b.bbox) > 0.0 {
                violations.push(Violation::Overlap { first: a.id, second: b.id });
            }
        }
    }

    let mut seen = HashSet::with_capacity(page.relations.len());
    for edge in &page.relations {
        let (subject, rel, object) = edge.triple();
        if subject == object {
            violations.push(Violation::SelfLoop { id: subject, rel });
        }
        for end in [subject, object] {
            if !ids.contains(&end) {
                violations.push(Violation::DanglingEndpoint { subject, object, rel, missing: end });
            }
            if subject == object {
                break;
            }
        }
        if !seen.insert(edge.triple()) {
            violations.push(Violation::DuplicateRelation { subject, object, rel });
        }
        for score in [edge.score, edge.existence].into_iter().flatten() {
            if !in_unit_range(score) {
                violations.push(Violation::RelationScoreOutOfRange { subject, object, rel, score });
            }
        }
    }

    ValidationReport { violations }
}
