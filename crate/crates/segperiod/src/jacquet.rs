//! Segment-level Jacquet restriction to a maximal Levi block, for the
//! presentations the orbit predicates consume: single-segment socle or
//! quotient forms and products of such. Socle forms cut ascending,
//! quotient forms descending; both conventions are pinned by regression
//! fixtures.

use thiserror::Error;

use crate::decomp::RepForm;
use crate::segcore::{Multisegment, SegError, Segment};
use crate::support::Registry;

/// One summand `left (x) right` of a restriction, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacquetTerm {
    pub left: RepForm,
    pub right: RepForm,
    pub multiplicity: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JacquetError {
    #[error("cut {k} out of range for weight {n}")]
    CutOutOfRange { k: u32, n: u32 },
    #[error("unsupported presentation for restriction")]
    UnsupportedPresentation,
    #[error(transparent)]
    Seg(#[from] SegError),
    #[error(transparent)]
    Registry(#[from] crate::support::RegistryError),
}

fn seg_slice(seg: &Segment, reg: &Registry, from: u32, count: u32) -> Result<Segment, SegError> {
    let step = seg.step(reg)?;
    Ok(Segment {
        label: seg.label.clone(),
        start: seg.start + step * crate::Exp::from_integer(from as i64),
        len: count,
    })
}

fn wrap(form_is_z: bool, seg: Option<Segment>) -> RepForm {
    match seg {
        None => RepForm::empty(),
        Some(s) => {
            let m = Multisegment::singleton(s);
            if form_is_z {
                RepForm::Z(m)
            } else {
                RepForm::L(m)
            }
        }
    }
}

/// Restriction of a single-segment form at the cut `k`: empty unless
/// `k` is a multiple of the label's group size, one term otherwise.
/// Socle forms yield `first points (x) rest`, quotient forms
/// `last points (x) first points`.
pub fn jacquet_segment(
    form: &RepForm,
    k: u32,
    reg: &Registry,
) -> Result<Vec<JacquetTerm>, JacquetError> {
    let (is_z, m) = match form {
        RepForm::Z(m) => (true, m),
        RepForm::L(m) => (false, m),
        RepForm::Product(_) => return Err(JacquetError::UnsupportedPresentation),
    };
    if m.len() != 1 {
        return Err(JacquetError::UnsupportedPresentation);
    }
    let seg = &m.segments()[0];
    let n = form.weight(reg)?;
    if k > n {
        return Err(JacquetError::CutOutOfRange { k, n });
    }
    let r = reg.get(&seg.label)?.group_size;
    if !k.is_multiple_of(r) {
        return Ok(Vec::new());
    }
    let j = k / r; // points on the left block
    let (left, right) = if is_z {
        (
            if j == 0 {
                None
            } else {
                Some(seg_slice(seg, reg, 0, j)?)
            },
            if j == seg.len {
                None
            } else {
                Some(seg_slice(seg, reg, j, seg.len - j)?)
            },
        )
    } else {
        (
            if j == 0 {
                None
            } else {
                Some(seg_slice(seg, reg, seg.len - j, j)?)
            },
            if j == seg.len {
                None
            } else {
                Some(seg_slice(seg, reg, 0, seg.len - j)?)
            },
        )
    };
    Ok(vec![JacquetTerm {
        left: wrap(is_z, left),
        right: wrap(is_z, right),
        multiplicity: 1,
    }])
}

fn product_of(parts: Vec<RepForm>) -> RepForm {
    let mut flat = Vec::new();
    for p in parts {
        match p {
            RepForm::Product(fs) if fs.is_empty() => {}
            other => flat.push(other),
        }
    }
    match flat.len() {
        0 => RepForm::empty(),
        1 => flat.into_iter().next().unwrap(),
        _ => RepForm::Product(flat),
    }
}

fn push_merged(terms: &mut Vec<JacquetTerm>, left: RepForm, right: RepForm, mult: u32) {
    for t in terms.iter_mut() {
        if t.left == left && t.right == right {
            t.multiplicity += mult;
            return;
        }
    }
    terms.push(JacquetTerm {
        left,
        right,
        multiplicity: mult,
    });
}

/// Restriction of an ordered product of single-segment forms: the sum
/// over compositions `k = k_1 + ... + k_t` of per-factor cuts, each
/// term's sides being the ordered products of the factor pieces.
pub fn jacquet_product(
    factors: &[RepForm],
    k: u32,
    reg: &Registry,
) -> Result<Vec<JacquetTerm>, JacquetError> {
    let n: u32 = {
        let mut total = 0;
        for f in factors {
            total += f.weight(reg)?;
        }
        total
    };
    if k > n {
        return Err(JacquetError::CutOutOfRange { k, n });
    }
    let mut terms: Vec<JacquetTerm> = Vec::new();
    // Depth-first over compositions.
    fn recurse(
        factors: &[RepForm],
        idx: usize,
        remaining: u32,
        lefts: &mut Vec<RepForm>,
        rights: &mut Vec<RepForm>,
        reg: &Registry,
        out: &mut Vec<JacquetTerm>,
    ) -> Result<(), JacquetError> {
        if idx == factors.len() {
            if remaining == 0 {
                push_merged(out, product_of(lefts.clone()), product_of(rights.clone()), 1);
            }
            return Ok(());
        }
        let w = factors[idx].weight(reg)?;
        for cut in 0..=w.min(remaining) {
            let sub = jacquet_segment(&factors[idx], cut, reg)?;
            for t in sub {
                lefts.push(t.left.clone());
                rights.push(t.right.clone());
                recurse(factors, idx + 1, remaining - cut, lefts, rights, reg, out)?;
                lefts.pop();
                rights.pop();
            }
        }
        Ok(())
    }
    recurse(factors, 0, k, &mut Vec::new(), &mut Vec::new(), reg, &mut terms)?;
    Ok(terms)
}

/// Restriction of an arbitrary supported form: single segments,
/// products of single segments, and multi-segment forms whose segments
/// are pairwise unlinked (those are the induced products themselves).
/// Genuinely glued multi-segment forms are rejected rather than
/// answered wrongly.
pub fn jacquet_of_form(
    form: &RepForm,
    k: u32,
    reg: &Registry,
) -> Result<Vec<JacquetTerm>, JacquetError> {
    match form {
        RepForm::Z(m) | RepForm::L(m) if m.len() == 1 => jacquet_segment(form, k, reg),
        RepForm::Z(m) | RepForm::L(m) => {
            if !m.pairwise_unlinked(reg)? {
                return Err(JacquetError::UnsupportedPresentation);
            }
            let is_z = matches!(form, RepForm::Z(_));
            let factors: Vec<RepForm> = m
                .segments()
                .iter()
                .map(|s| {
                    let single = Multisegment::singleton(s.clone());
                    if is_z {
                        RepForm::Z(single)
                    } else {
                        RepForm::L(single)
                    }
                })
                .collect();
            jacquet_product(&factors, k, reg)
        }
        RepForm::Product(fs) => jacquet_product(fs, k, reg),
    }
}
