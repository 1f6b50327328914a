//! The involution on multisegments exchanging the socle and quotient
//! presentations of the same irreducible: `Z(m) = L(dual(m))`.
//!
//! The dual is computed by repeatedly extracting a chain of end points:
//! starting from the highest end, descend one lattice step at a time
//! through segments whose beginnings strictly decrease, truncating each
//! visited segment by its end point and emitting the visited ends as
//! one dual segment. Ties (several candidates with the required end)
//! are broken toward the largest beginning; involutivity is checked
//! exhaustively in the tests.

use std::collections::BTreeMap;

use crate::decomp::RepForm;
use crate::segcore::{Multisegment, SegError, Segment};
use crate::support::Registry;
use crate::Exp;

/// `(label, lattice coset)` key: duality acts lattice by lattice.
fn lattice_key(seg: &Segment, reg: &Registry) -> Result<(String, Exp), SegError> {
    let step = seg.step(reg)?;
    let coset = seg.start - (seg.start / step).floor() * step;
    Ok((seg.label.to_string(), coset))
}

fn dual_one_lattice(mut segs: Vec<Segment>, reg: &Registry) -> Result<Vec<Segment>, SegError> {
    let mut out = Vec::new();
    if segs.is_empty() {
        return Ok(out);
    }
    let step = segs[0].step(reg)?;
    while !segs.is_empty() {
        // Highest end; among those, the largest beginning.
        let mut pick = 0usize;
        for i in 1..segs.len() {
            let (ei, ep) = (segs[i].end(reg)?, segs[pick].end(reg)?);
            if ei > ep || (ei == ep && segs[i].start > segs[pick].start) {
                pick = i;
            }
        }
        let top_end = segs[pick].end(reg)?;
        let mut chain: Vec<usize> = vec![pick];
        let mut want_end = top_end - step;
        let mut prev_start = segs[pick].start;
        loop {
            let mut next: Option<usize> = None;
            for (i, s) in segs.iter().enumerate() {
                if chain.contains(&i) {
                    continue;
                }
                if s.end(reg)? == want_end && s.start < prev_start {
                    match next {
                        Some(j) if segs[j].start >= s.start => {}
                        _ => next = Some(i),
                    }
                }
            }
            match next {
                None => break,
                Some(i) => {
                    prev_start = segs[i].start;
                    chain.push(i);
                    want_end -= step;
                }
            }
        }
        let count = chain.len() as i64;
        out.push(Segment {
            label: segs[0].label.clone(),
            start: top_end - step * Exp::from_integer(count - 1),
            len: count as u32,
        });
        // Truncate every visited segment by its end point.
        chain.sort_unstable_by(|a, b| b.cmp(a));
        for i in chain {
            if segs[i].len == 1 {
                segs.remove(i);
            } else {
                segs[i].len -= 1;
            }
        }
    }
    Ok(out)
}

/// The dual multisegment. Involutive and support-preserving; mixed
/// lattices are dualized independently.
pub fn mw_dual(m: &Multisegment, reg: &Registry) -> Result<Multisegment, SegError> {
    let mut by_lattice: BTreeMap<(String, Exp), Vec<Segment>> = BTreeMap::new();
    for seg in m.segments() {
        by_lattice
            .entry(lattice_key(seg, reg)?)
            .or_default()
            .push(seg.clone());
    }
    let mut out = Vec::new();
    for (_, segs) in by_lattice {
        out.extend(dual_one_lattice(segs, reg)?);
    }
    Ok(Multisegment::new(out))
}

/// Re-present a socle form as a quotient form of the same irreducible.
pub fn to_l_form(f: &RepForm, reg: &Registry) -> Result<RepForm, SegError> {
    match f {
        RepForm::Z(m) => Ok(RepForm::L(mw_dual(m, reg)?)),
        RepForm::L(_) => Ok(f.clone()),
        RepForm::Product(fs) => Ok(RepForm::Product(
            fs.iter()
                .map(|g| to_l_form(g, reg))
                .collect::<Result<Vec<_>, _>>()?,
        )),
    }
}

/// Re-present a quotient form as a socle form of the same irreducible.
pub fn to_z_form(f: &RepForm, reg: &Registry) -> Result<RepForm, SegError> {
    match f {
        RepForm::L(m) => Ok(RepForm::Z(mw_dual(m, reg)?)),
        RepForm::Z(_) => Ok(f.clone()),
        RepForm::Product(fs) => Ok(RepForm::Product(
            fs.iter()
                .map(|g| to_z_form(g, reg))
                .collect::<Result<Vec<_>, _>>()?,
        )),
    }
}
