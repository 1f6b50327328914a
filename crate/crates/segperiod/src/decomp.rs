//! Presentations of representations (socle `Z`, quotient `L`, products)
//! together with two-factor decomposition of products of segment
//! representations and normalization of product presentations.

use thiserror::Error;

use crate::duality::mw_dual;
use crate::segcore::{intersection, linked, precedes, union, Multisegment, SegError, Segment};
use crate::support::Registry;
use crate::Exp;

/// A presentation of a representation: socle form, quotient form, or an
/// ordered product of presentations. A product of zero factors is the
/// representation of the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RepForm {
    Z(Multisegment),
    L(Multisegment),
    Product(Vec<RepForm>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error(transparent)]
    Seg(#[from] SegError),
}

impl RepForm {
    pub fn point(seg: Segment) -> RepForm {
        RepForm::Z(Multisegment::singleton(seg))
    }

    pub fn empty() -> RepForm {
        RepForm::Product(Vec::new())
    }

    pub fn weight(&self, reg: &Registry) -> Result<u32, SegError> {
        match self {
            RepForm::Z(m) | RepForm::L(m) => m.weight(reg),
            RepForm::Product(fs) => fs.iter().map(|f| f.weight(reg)).sum(),
        }
    }

    /// Cuspidal support as a sorted point multiset.
    pub fn support(&self, reg: &Registry) -> Result<Vec<crate::segcore::CuspidalPoint>, SegError> {
        match self {
            RepForm::Z(m) | RepForm::L(m) => m.support(reg),
            RepForm::Product(fs) => {
                let mut pts = Vec::new();
                for f in fs {
                    pts.extend(f.support(reg)?);
                }
                pts.sort();
                Ok(pts)
            }
        }
    }

    pub fn twist(&self, e: Exp) -> RepForm {
        match self {
            RepForm::Z(m) => RepForm::Z(m.twist(e)),
            RepForm::L(m) => RepForm::L(m.twist(e)),
            RepForm::Product(fs) => RepForm::Product(fs.iter().map(|f| f.twist(e)).collect()),
        }
    }

    pub fn contragredient(&self, reg: &Registry) -> Result<RepForm, SegError> {
        match self {
            RepForm::Z(m) => Ok(RepForm::Z(m.contragredient(reg)?)),
            RepForm::L(m) => Ok(RepForm::L(m.contragredient(reg)?)),
            // Factor order reverses through the contragredient.
            RepForm::Product(fs) => Ok(RepForm::Product(
                fs.iter()
                    .rev()
                    .map(|f| f.contragredient(reg))
                    .collect::<Result<Vec<_>, _>>()?,
            )),
        }
    }

    /// True when the form is a single point (one segment of length one).
    pub fn as_point(&self) -> Option<&Segment> {
        match self {
            RepForm::Z(m) | RepForm::L(m) if m.len() == 1 && m.segments()[0].len == 1 => {
                Some(&m.segments()[0])
            }
            _ => None,
        }
    }

    /// The socle parameter of an irreducible (non-product) form.
    pub fn z_parameter(&self, reg: &Registry) -> Result<Option<Multisegment>, SegError> {
        match self {
            RepForm::Z(m) => Ok(Some(m.clone())),
            RepForm::L(m) => Ok(Some(mw_dual(m, reg)?)),
            RepForm::Product(_) => Ok(None),
        }
    }
}

/// Outcome of a two-factor decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDecomposition {
    pub irreducible: bool,
    pub sub: Option<RepForm>,
    pub quotient: Option<RepForm>,
    pub subquotients: Vec<RepForm>,
}

/// Decomposition of the product of two socle-form segment
/// representations: irreducible exactly when the segments are not
/// linked, of length two otherwise, with the orientation determined by
/// which segment precedes the other.
pub fn decompose_pair_z(
    d1: &Segment,
    d2: &Segment,
    reg: &Registry,
) -> Result<PairDecomposition, DecompError> {
    if !linked(d1, d2, reg)? {
        let whole = RepForm::Z(Multisegment::new(vec![d1.clone(), d2.clone()]));
        return Ok(PairDecomposition {
            irreducible: true,
            sub: None,
            quotient: None,
            subquotients: vec![whole],
        });
    }
    let glued = RepForm::Z(Multisegment::new(vec![d1.clone(), d2.clone()]));
    let mut merged = vec![union(d1, d2, reg)?];
    if let Some(int) = intersection(d1, d2, reg)? {
        merged.push(int);
    }
    let merged = RepForm::Z(Multisegment::new(merged));
    let (sub, quotient) = if precedes(d2, d1, reg)? {
        (glued.clone(), merged.clone())
    } else {
        (merged.clone(), glued.clone())
    };
    Ok(PairDecomposition {
        irreducible: false,
        sub: Some(sub.clone()),
        quotient: Some(quotient.clone()),
        subquotients: vec![sub, quotient],
    })
}

/// Decomposition of the product of two quotient-form segment
/// representations. For a linked pair the two subquotients each occur
/// with multiplicity one but the orientation is not assigned.
pub fn decompose_pair_l(
    d1: &Segment,
    d2: &Segment,
    reg: &Registry,
) -> Result<PairDecomposition, DecompError> {
    if !linked(d1, d2, reg)? {
        let whole = RepForm::L(Multisegment::new(vec![d1.clone(), d2.clone()]));
        return Ok(PairDecomposition {
            irreducible: true,
            sub: None,
            quotient: None,
            subquotients: vec![whole],
        });
    }
    let glued = RepForm::L(Multisegment::new(vec![d1.clone(), d2.clone()]));
    let mut merged = vec![union(d1, d2, reg)?];
    if let Some(int) = intersection(d1, d2, reg)? {
        merged.push(int);
    }
    let merged = RepForm::L(Multisegment::new(merged));
    Ok(PairDecomposition {
        irreducible: false,
        sub: None,
        quotient: None,
        subquotients: vec![merged, glued],
    })
}

/// Pairwise linkage criterion for a product of single-segment socle
/// forms: exact for two factors, and adopted for three or more.
pub fn is_irreducible_product(factors: &[Segment], reg: &Registry) -> Result<bool, DecompError> {
    for i in 0..factors.len() {
        for j in (i + 1)..factors.len() {
            if linked(&factors[i], &factors[j], reg)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// How far normalization got.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeStatus {
    /// The result is a single irreducible presentation.
    Irreducible,
    /// The product is genuinely reducible; left as a product.
    Reducible,
}

fn flatten_into(f: &RepForm, out: &mut Vec<RepForm>) {
    match f {
        RepForm::Product(fs) => {
            for g in fs {
                flatten_into(g, out);
            }
        }
        other => out.push(other.clone()),
    }
}

fn cross_unlinked(groups: &[&Multisegment], reg: &Registry) -> Result<bool, SegError> {
    for i in 0..groups.len() {
        for j in (i + 1)..groups.len() {
            for a in groups[i].segments() {
                for b in groups[j].segments() {
                    if linked(a, b, reg)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Normalize a presentation: flatten nested products, record single
/// points canonically as socle forms, and merge a product of
/// presentations into one form when every cross-factor segment pair is
/// unlinked (converting through the duality when presentations mix).
/// Genuinely reducible products are returned as products. Idempotent.
pub fn normalize(f: &RepForm, reg: &Registry) -> Result<(RepForm, NormalizeStatus), DecompError> {
    let mut factors = Vec::new();
    flatten_into(f, &mut factors);
    // Canonical single-point form.
    let factors: Vec<RepForm> = factors
        .into_iter()
        .map(|g| match g {
            RepForm::L(m) if m.len() == 1 && m.segments()[0].len == 1 => RepForm::Z(m),
            other => other,
        })
        .collect();
    if factors.is_empty() {
        return Ok((RepForm::empty(), NormalizeStatus::Irreducible));
    }
    if factors.len() == 1 {
        return Ok((factors[0].clone(), NormalizeStatus::Irreducible));
    }

    // Unlinked cross-pairs make the product irreducible; the test is
    // presentation-dependent and sufficient only, so both presentations
    // are tried, preferring the one the factors already share.
    let try_merge = |params: &[Multisegment]| -> Result<Option<Multisegment>, DecompError> {
        let refs: Vec<&Multisegment> = params.iter().collect();
        if !cross_unlinked(&refs, reg)? {
            return Ok(None);
        }
        let mut merged = Multisegment::empty();
        for m in params {
            merged = merged.merged(m);
        }
        Ok(Some(merged))
    };
    let is_point = |g: &RepForm| g.as_point().is_some();
    let all_z_or_pt = factors.iter().all(|g| matches!(g, RepForm::Z(_)));
    let all_l_or_pt = factors
        .iter()
        .all(|g| matches!(g, RepForm::L(_)) || is_point(g));
    let socle_params: Vec<Multisegment> = factors
        .iter()
        .map(|g| match g {
            RepForm::Z(m) => Ok(m.clone()),
            RepForm::L(m) => mw_dual(m, reg),
            RepForm::Product(_) => unreachable!("flattened"),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let quotient_params: Vec<Multisegment> = factors
        .iter()
        .map(|g| match g {
            RepForm::L(m) => Ok(m.clone()),
            RepForm::Z(m) => mw_dual(m, reg),
            RepForm::Product(_) => unreachable!("flattened"),
        })
        .collect::<Result<Vec<_>, _>>()?;

    let attempts: [(&[Multisegment], bool); 2] = if all_l_or_pt && !all_z_or_pt {
        [(&quotient_params, false), (&socle_params, true)]
    } else {
        [(&socle_params, true), (&quotient_params, false)]
    };
    for (params, socle) in attempts {
        if let Some(merged) = try_merge(params)? {
            let form = if socle {
                RepForm::Z(merged)
            } else {
                RepForm::L(merged)
            };
            return Ok((form, NormalizeStatus::Irreducible));
        }
    }
    Ok((RepForm::Product(factors), NormalizeStatus::Reducible))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exp;
    use crate::support::LabelId;

    fn reg() -> Registry {
        Registry::default_registry()
    }
    fn seg(label: &str, start: Exp, len: u32) -> Segment {
        Segment::new(LabelId::new(label), start, len).unwrap()
    }

    #[test]
    fn linked_character_points_socle() {
        let r = reg();
        let d1 = seg("chi", exp(-1, 1), 1);
        let d2 = seg("chi", exp(1, 1), 1);
        let dec = decompose_pair_z(&d1, &d2, &r).unwrap();
        assert!(!dec.irreducible);
        // d1 precedes d2, so the merged form is the subrepresentation.
        assert_eq!(
            dec.sub,
            Some(RepForm::Z(Multisegment::new(vec![seg("chi", exp(-1, 1), 2)])))
        );
        assert_eq!(
            dec.quotient,
            Some(RepForm::Z(Multisegment::new(vec![d1.clone(), d2.clone()])))
        );
    }

    #[test]
    fn speh_socle_orientation() {
        let r = reg();
        let d1 = seg("mu", exp(-1, 2), 1);
        let d2 = seg("mu", exp(1, 2), 1);
        let dec = decompose_pair_z(&d1, &d2, &r).unwrap();
        assert_eq!(
            dec.sub,
            Some(RepForm::Z(Multisegment::new(vec![seg("mu", exp(-1, 2), 2)])))
        );
    }

    #[test]
    fn orientation_swaps_with_order() {
        let r = reg();
        let d1 = seg("mu", exp(0, 1), 2);
        let d2 = seg("mu", exp(1, 1), 2);
        let ab = decompose_pair_z(&d1, &d2, &r).unwrap();
        let ba = decompose_pair_z(&d2, &d1, &r).unwrap();
        assert_eq!(ab.sub, ba.quotient);
        assert_eq!(ab.quotient, ba.sub);
    }

    #[test]
    fn different_cosets_irreducible() {
        let r = reg();
        let d1 = seg("chi", exp(0, 1), 1);
        let d2 = seg("chi", exp(-1, 1), 1);
        assert!(decompose_pair_z(&d1, &d2, &r).unwrap().irreducible);
    }

    #[test]
    fn quotient_form_pair() {
        let r = reg();
        let d1 = seg("mu", exp(-1, 2), 1);
        let d2 = seg("mu", exp(1, 2), 1);
        let dec = decompose_pair_l(&d1, &d2, &r).unwrap();
        assert!(!dec.irreducible);
        assert_eq!(dec.subquotients.len(), 2);
        assert!(dec
            .subquotients
            .contains(&RepForm::L(Multisegment::new(vec![seg("mu", exp(-1, 2), 2)]))));
        assert!(dec
            .subquotients
            .contains(&RepForm::L(Multisegment::new(vec![d1.clone(), d2.clone()]))));
    }

    #[test]
    fn containment_pair_irreducible() {
        let r = reg();
        let big = seg("chi", exp(-1, 1), 2);
        let inside = seg("chi", exp(1, 1), 1);
        assert!(decompose_pair_l(&big, &inside, &r).unwrap().irreducible);
    }

    #[test]
    fn product_irreducibility() {
        let r = reg();
        assert!(is_irreducible_product(
            &[seg("chi", exp(-1, 1), 2), seg("chi", exp(0, 1), 2)],
            &r
        )
        .unwrap());
        assert!(!is_irreducible_product(
            &[seg("chi", exp(-1, 1), 1), seg("chi", exp(1, 1), 1)],
            &r
        )
        .unwrap());
        assert!(is_irreducible_product(&[seg("mu", exp(0, 1), 1)], &r).unwrap());
    }

    #[test]
    fn normalize_mixed_example() {
        let r = reg();
        let st = RepForm::L(Multisegment::new(vec![seg("chi", exp(-1, 1), 2)]));
        let pt = RepForm::Z(Multisegment::new(vec![seg("chi", exp(0, 1), 1)]));
        let (form, status) = normalize(&RepForm::Product(vec![st, pt]), &r).unwrap();
        assert_eq!(status, NormalizeStatus::Irreducible);
        assert_eq!(
            form,
            RepForm::L(Multisegment::new(vec![
                seg("chi", exp(-1, 1), 2),
                seg("chi", exp(0, 1), 1)
            ]))
        );
    }

    #[test]
    fn normalize_reducible_kept() {
        let r = reg();
        let a = RepForm::point(seg("chi", exp(-1, 1), 1));
        let b = RepForm::point(seg("chi", exp(1, 1), 1));
        let (form, status) = normalize(&RepForm::Product(vec![a.clone(), b.clone()]), &r).unwrap();
        assert_eq!(status, NormalizeStatus::Reducible);
        assert_eq!(form, RepForm::Product(vec![a, b]));
    }

    #[test]
    fn normalize_tries_both_presentations() {
        // The socle parameters of these factors are cross-linked but the
        // quotient parameters are not (containment), so the product is
        // irreducible and must merge.
        let r = reg();
        let glued = RepForm::Z(Multisegment::new(vec![
            seg("chi", exp(-1, 1), 1),
            seg("chi", exp(1, 1), 1),
        ]));
        let pt = RepForm::point(seg("chi", exp(1, 1), 1));
        let (form, status) = normalize(&RepForm::Product(vec![glued, pt]), &r).unwrap();
        assert_eq!(status, NormalizeStatus::Irreducible);
        assert_eq!(
            form,
            RepForm::L(Multisegment::new(vec![
                seg("chi", exp(-1, 1), 2),
                seg("chi", exp(1, 1), 1)
            ]))
        );
    }

    #[test]
    fn normalize_idempotent_and_weight_preserving() {
        let r = reg();
        let f = RepForm::Product(vec![
            RepForm::Z(Multisegment::new(vec![seg("mu", exp(0, 1), 2)])),
            RepForm::Product(vec![RepForm::point(seg("chi", exp(0, 1), 1))]),
        ]);
        let (n1, _) = normalize(&f, &r).unwrap();
        let (n2, _) = normalize(&n1, &r).unwrap();
        assert_eq!(n1, n2);
        assert_eq!(f.weight(&r).unwrap(), n1.weight(&r).unwrap());
    }

    #[test]
    fn normalize_single_factor() {
        let r = reg();
        let z = RepForm::Z(Multisegment::new(vec![seg("mu", exp(0, 1), 2)]));
        let (form, status) = normalize(&RepForm::Product(vec![z.clone()]), &r).unwrap();
        assert_eq!(form, z);
        assert_eq!(status, NormalizeStatus::Irreducible);
    }

    #[test]
    fn socle_parameters_match_downset_for_pairs() {
        use crate::order::enumerate_below;
        let r = reg();
        for s1 in 0..5 {
            for s2 in 0..5 {
                for l1 in 1..=3u32 {
                    for l2 in 1..=3u32 {
                        let d1 = seg("mu", exp(s1, 1), l1);
                        let d2 = seg("mu", exp(s2, 1), l2);
                        let dec = decompose_pair_z(&d1, &d2, &r).unwrap();
                        let mut params: Vec<Multisegment> = dec
                            .subquotients
                            .iter()
                            .map(|f| f.z_parameter(&r).unwrap().unwrap())
                            .collect();
                        params.sort();
                        params.dedup();
                        let mut below: Vec<Multisegment> =
                            enumerate_below(&Multisegment::new(vec![d1, d2]), &r)
                                .unwrap()
                                .into_iter()
                                .collect();
                        below.sort();
                        assert_eq!(params, below);
                    }
                }
            }
        }
    }
}
