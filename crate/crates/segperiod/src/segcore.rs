//! Segments, multisegments and the raw combinatorics on them: lattice
//! membership, the precedes/linked relations, union and intersection of
//! linked segments, twisting and the contragredient.

use std::cmp::Ordering;

use thiserror::Error;

use crate::support::{LabelId, Registry, RegistryError};
use crate::Exp;

/// A single twist `label * v^exponent` of a cuspidal label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuspidalPoint {
    pub label: LabelId,
    pub exponent: Exp,
}

impl CuspidalPoint {
    pub fn new(label: LabelId, exponent: Exp) -> Self {
        CuspidalPoint { label, exponent }
    }

    pub fn twist(&self, e: Exp) -> CuspidalPoint {
        CuspidalPoint::new(self.label.clone(), self.exponent + e)
    }
}

/// An arithmetic progression of twists of one label: the points
/// `start, start + s, ..., start + (len-1)s` where `s` is the label's
/// lattice step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub label: LabelId,
    pub start: Exp,
    pub len: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SegError {
    #[error("segments are not linked")]
    NotLinked,
    #[error("segment length must be at least 1")]
    EmptySegment,
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

impl Segment {
    pub fn new(label: LabelId, start: Exp, len: u32) -> Result<Self, SegError> {
        if len == 0 {
            return Err(SegError::EmptySegment);
        }
        Ok(Segment { label, start, len })
    }

    pub fn point(p: CuspidalPoint) -> Self {
        Segment {
            label: p.label,
            start: p.exponent,
            len: 1,
        }
    }

    pub fn step(&self, reg: &Registry) -> Result<Exp, SegError> {
        Ok(Exp::from_integer(reg.get(&self.label)?.step as i64))
    }

    pub fn end(&self, reg: &Registry) -> Result<Exp, SegError> {
        Ok(self.start + self.step(reg)? * Exp::from_integer(self.len as i64 - 1))
    }

    pub fn points(&self, reg: &Registry) -> Result<Vec<CuspidalPoint>, SegError> {
        let step = self.step(reg)?;
        Ok((0..self.len)
            .map(|k| {
                CuspidalPoint::new(
                    self.label.clone(),
                    self.start + step * Exp::from_integer(k as i64),
                )
            })
            .collect())
    }

    pub fn first_point(&self) -> CuspidalPoint {
        CuspidalPoint::new(self.label.clone(), self.start)
    }

    pub fn twist(&self, e: Exp) -> Segment {
        Segment {
            label: self.label.clone(),
            start: self.start + e,
            len: self.len,
        }
    }

    /// Weight contributed to `n` of `GL_n(D)`.
    pub fn weight(&self, reg: &Registry) -> Result<u32, SegError> {
        Ok(self.len * reg.get(&self.label)?.group_size)
    }

    /// `[a,b] -> [-b,-a]` over the dual label.
    pub fn contragredient(&self, reg: &Registry) -> Result<Segment, SegError> {
        let end = self.end(reg)?;
        let dual = reg.get(&self.label)?.dual_id.clone();
        Ok(Segment {
            label: dual,
            start: -end,
            len: self.len,
        })
    }
}

/// True iff the two points sit on the same twist lattice: equal labels
/// and an exponent difference divisible by the label's step.
pub fn same_lattice(
    p: &CuspidalPoint,
    q: &CuspidalPoint,
    reg: &Registry,
) -> Result<bool, SegError> {
    if p.label != q.label {
        return Ok(false);
    }
    let step = Exp::from_integer(reg.get(&p.label)?.step as i64);
    let diff = p.exponent - q.exponent;
    Ok((diff / step).is_integer())
}

/// `d1` precedes `d2`: same lattice, `d2` starts and ends strictly
/// later, and close enough that the two progressions splice into one.
pub fn precedes(d1: &Segment, d2: &Segment, reg: &Registry) -> Result<bool, SegError> {
    if !same_lattice(&d1.first_point(), &d2.first_point(), reg)? {
        return Ok(false);
    }
    let step = d1.step(reg)?;
    let (e1, e2) = (d1.end(reg)?, d2.end(reg)?);
    Ok(d2.start > d1.start && e2 > e1 && d2.start <= e1 + step)
}

pub fn linked(d1: &Segment, d2: &Segment, reg: &Registry) -> Result<bool, SegError> {
    Ok(precedes(d1, d2, reg)? || precedes(d2, d1, reg)?)
}

/// Union of a linked pair: spans `[min start, max end]`.
pub fn union(d1: &Segment, d2: &Segment, reg: &Registry) -> Result<Segment, SegError> {
    if !linked(d1, d2, reg)? {
        return Err(SegError::NotLinked);
    }
    let step = d1.step(reg)?;
    let start = d1.start.min(d2.start);
    let end = d1.end(reg)?.max(d2.end(reg)?);
    let len = ((end - start) / step).to_integer() as u32 + 1;
    Ok(Segment {
        label: d1.label.clone(),
        start,
        len,
    })
}

/// Intersection of a linked pair spans `[max start, min end]`; absent
/// when the segments are juxtaposed.
pub fn intersection(
    d1: &Segment,
    d2: &Segment,
    reg: &Registry,
) -> Result<Option<Segment>, SegError> {
    if !linked(d1, d2, reg)? {
        return Err(SegError::NotLinked);
    }
    let step = d1.step(reg)?;
    let start = d1.start.max(d2.start);
    let end = d1.end(reg)?.min(d2.end(reg)?);
    if end < start {
        return Ok(None);
    }
    let len = ((end - start) / step).to_integer() as u32 + 1;
    Ok(Some(Segment {
        label: d1.label.clone(),
        start,
        len,
    }))
}

/// A finite multiset of segments. Kept in a canonical order so that
/// structural equality and hashing are meaningful.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Multisegment {
    segments: Vec<Segment>,
}

/// Canonical segment order: by label, then descending start, then
/// descending length. Descending starts match the order in which the
/// duality algorithm emits segments.
fn canonical_cmp(a: &Segment, b: &Segment) -> Ordering {
    a.label
        .cmp(&b.label)
        .then(b.start.cmp(&a.start))
        .then(b.len.cmp(&a.len))
}

impl Multisegment {
    pub fn new(mut segments: Vec<Segment>) -> Self {
        segments.sort_by(canonical_cmp);
        Multisegment { segments }
    }

    pub fn empty() -> Self {
        Multisegment::default()
    }

    pub fn singleton(seg: Segment) -> Self {
        Multisegment::new(vec![seg])
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn push(&mut self, seg: Segment) {
        self.segments.push(seg);
        self.segments.sort_by(canonical_cmp);
    }

    pub fn merged(&self, other: &Multisegment) -> Multisegment {
        let mut all = self.segments.clone();
        all.extend(other.segments.iter().cloned());
        Multisegment::new(all)
    }

    /// Total weight: the `n` of `GL_n(D)`.
    pub fn weight(&self, reg: &Registry) -> Result<u32, SegError> {
        self.segments.iter().map(|s| s.weight(reg)).sum()
    }

    /// The cuspidal support as a sorted point multiset.
    pub fn support(&self, reg: &Registry) -> Result<Vec<CuspidalPoint>, SegError> {
        let mut pts = Vec::new();
        for seg in &self.segments {
            pts.extend(seg.points(reg)?);
        }
        pts.sort();
        Ok(pts)
    }

    pub fn twist(&self, e: Exp) -> Multisegment {
        Multisegment::new(self.segments.iter().map(|s| s.twist(e)).collect())
    }

    pub fn contragredient(&self, reg: &Registry) -> Result<Multisegment, SegError> {
        let segs = self
            .segments
            .iter()
            .map(|s| s.contragredient(reg))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Multisegment::new(segs))
    }

    /// Indices of all unordered linked pairs.
    pub fn linked_pairs(&self, reg: &Registry) -> Result<Vec<(usize, usize)>, SegError> {
        let mut pairs = Vec::new();
        for i in 0..self.segments.len() {
            for j in (i + 1)..self.segments.len() {
                if linked(&self.segments[i], &self.segments[j], reg)? {
                    pairs.push((i, j));
                }
            }
        }
        Ok(pairs)
    }

    /// True iff no two segments are linked.
    pub fn pairwise_unlinked(&self, reg: &Registry) -> Result<bool, SegError> {
        Ok(self.linked_pairs(reg)?.is_empty())
    }
}
