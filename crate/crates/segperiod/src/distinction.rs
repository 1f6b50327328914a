//! The symplectic-period engine: Hom/Ext oracles on rank-one points,
//! the closed/open/middle orbit predicates for parabolically induced
//! representations, and the verdict classifier for weights one to four.

use thiserror::Error;

use crate::decomp::{normalize, NormalizeStatus, RepForm};
use crate::jacquet::{jacquet_of_form, JacquetError, JacquetTerm};
use crate::rules::{RuleError, RuleTable, Status, Verdict};
use crate::segcore::{CuspidalPoint, SegError, Segment};
use crate::support::{Registry, RegistryError};
use crate::Exp;

/// Three-valued answer for partially computable Hom/Ext spaces;
/// monotone under information refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriBool {
    Yes,
    No,
    Unknown,
}

impl TriBool {
    pub fn and(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::No, _) | (_, TriBool::No) => TriBool::No,
            (TriBool::Yes, TriBool::Yes) => TriBool::Yes,
            _ => TriBool::Unknown,
        }
    }

    pub fn from_status(s: Status) -> TriBool {
        match s {
            Status::Distinguished => TriBool::Yes,
            Status::NotDistinguished => TriBool::No,
            Status::Inconclusive => TriBool::Unknown,
        }
    }
}

#[derive(Debug, Error)]
pub enum DistinctionError {
    #[error("expected weight {expected}, got {got}")]
    WeightMismatch { expected: u32, got: u32 },
    #[error("weight {0} unsupported (expected 1 to 4)")]
    UnsupportedWeight(u32),
    #[error("unsupported split: factor weights {0:?}")]
    UnsupportedSplit(Vec<u32>),
    #[error("both points must live on rank-one labels")]
    NotRankOne,
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Jacquet(#[from] JacquetError),
    #[error(transparent)]
    Seg(#[from] SegError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

fn require_rank_one(p: &CuspidalPoint, reg: &Registry) -> Result<(), DistinctionError> {
    if reg.get(&p.label)?.group_size != 1 {
        return Err(DistinctionError::NotRankOne);
    }
    Ok(())
}

/// Hom between two rank-one points: one when equal, zero otherwise.
pub fn hom_gl1(
    x: &CuspidalPoint,
    y: &CuspidalPoint,
    reg: &Registry,
) -> Result<u8, DistinctionError> {
    require_rank_one(x, reg)?;
    require_rank_one(y, reg)?;
    Ok(u8::from(x == y))
}

/// First Ext group between two smooth rank-one points: dimension one
/// exactly when they coincide.
pub fn ext1_gl1(
    x: &CuspidalPoint,
    y: &CuspidalPoint,
    reg: &Registry,
) -> Result<u8, DistinctionError> {
    require_rank_one(x, reg)?;
    require_rank_one(y, reg)?;
    Ok(u8::from(x == y))
}

/// Symplectic-period status of a representation of weight at most
/// three; the recursion base for the weight-four predicates. Unknown
/// only where a cuspidal status is genuinely unresolved, or for
/// reducible products whose distinction the engine does not decide.
pub fn sp_hom(
    rep: &RepForm,
    reg: &Registry,
    table: &RuleTable,
) -> Result<TriBool, DistinctionError> {
    let w = rep.weight(reg)?;
    if w == 0 || w > 3 {
        return Err(DistinctionError::WeightMismatch {
            expected: 3,
            got: w,
        });
    }
    let (form, status) = normalize(rep, reg).map_err(|e| match e {
        crate::decomp::DecompError::Seg(s) => DistinctionError::Seg(s),
    })?;
    if status != NormalizeStatus::Irreducible {
        return Ok(TriBool::Unknown);
    }
    let m = form
        .z_parameter(reg)?
        .expect("irreducible normalized form has a socle parameter");
    Ok(TriBool::from_status(table.classify_multiseg(&m, reg)?.status))
}

fn term_point(form: &RepForm) -> Option<&Segment> {
    form.as_point()
}

fn is_character_point(seg: &Segment, reg: &Registry) -> Result<bool, DistinctionError> {
    Ok(reg.get(&seg.label)?.is_character())
}

fn point_eq_twisted(a: &Segment, b: &Segment, e: Exp) -> bool {
    a.label == b.label && a.len == 1 && b.len == 1 && a.start == b.start + e
}

/// Closed-orbit condition for a weight `(2,1)` induction `s1 x s2`:
/// some restriction term `A (x) B` of `s1` pairs `A` with the twisted
/// point `s2 v` while `B` sits on a character line.
pub fn closed_orbit_p21(
    s1: &RepForm,
    s2: &CuspidalPoint,
    reg: &Registry,
) -> Result<bool, DistinctionError> {
    let s2_seg = Segment::point(s2.clone());
    for term in jacquet_of_form(s1, 1, reg)? {
        let (Some(a), Some(b)) = (term_point(&term.left), term_point(&term.right)) else {
            continue;
        };
        if point_eq_twisted(a, &s2_seg, Exp::from_integer(1)) && is_character_point(b, reg)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Closed-orbit condition for a weight `(1,3)` induction `l1 x l2`:
/// some restriction term `A (x) B` of `l2` (weights two and one) pairs
/// `B v` with `l1` while `A` carries a symplectic period.
pub fn closed_orbit_p13(
    l1: &CuspidalPoint,
    l2: &RepForm,
    reg: &Registry,
    table: &RuleTable,
) -> Result<bool, DistinctionError> {
    let l1_seg = Segment::point(l1.clone());
    for term in jacquet_of_form(l2, 2, reg)? {
        let Some(b) = term_point(&term.right) else {
            continue;
        };
        if point_eq_twisted(&l1_seg, b, Exp::from_integer(1))
            && sp_hom(&term.left, reg, table)? == TriBool::Yes
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Vanishing of the first Ext functor controlling the open orbit,
/// evaluated on restriction terms. The rank-one pairing slot is decided
/// by `pair_left`: the left piece for `(2,1)` inductions, the right
/// piece for `(1,3)`.
///
/// Vanishes when no term matches the twisted partner point (both the
/// Hom and Ext factors die on the rank-one side); provably nonzero when
/// a matched term's symplectic side carries an invariant functional;
/// unknown otherwise (the symplectic Ext factor is not computable).
pub fn ext_vanishes_p(
    partner: &CuspidalPoint,
    terms: &[JacquetTerm],
    pair_left: bool,
    reg: &Registry,
    table: &RuleTable,
) -> Result<TriBool, DistinctionError> {
    let partner_seg = Segment::point(partner.clone());
    let mut verdict = TriBool::Yes;
    for term in terms {
        let (paired, sp_side) = if pair_left {
            (&term.left, &term.right)
        } else {
            (&term.right, &term.left)
        };
        let Some(p) = term_point(paired) else {
            // Cannot pin the rank-one factors; no conclusion.
            verdict = TriBool::Unknown;
            continue;
        };
        let matched = if pair_left {
            point_eq_twisted(p, &partner_seg, Exp::from_integer(1))
        } else {
            point_eq_twisted(&partner_seg, p, Exp::from_integer(1))
        };
        if !matched {
            continue;
        }
        match sp_hom(sp_side, reg, table)? {
            TriBool::Yes => return Ok(TriBool::No),
            _ => verdict = TriBool::Unknown,
        }
    }
    Ok(verdict)
}

/// Verdict of the orbit analysis for an induced representation:
/// distinguished when the closed orbit fires, or when both factors are
/// distinguished and the controlling Ext functor vanishes; not
/// distinguished when no orbit condition can hold; unknown otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitOutcome {
    ClosedOrbit,
    OpenOrbit,
    NoOrbit,
    Unresolved,
}

fn outcome_tribool(o: OrbitOutcome) -> TriBool {
    match o {
        OrbitOutcome::ClosedOrbit | OrbitOutcome::OpenOrbit => TriBool::Yes,
        OrbitOutcome::NoOrbit => TriBool::No,
        OrbitOutcome::Unresolved => TriBool::Unknown,
    }
}

/// `(2,1)` induction `s1 x s2`.
pub fn induced_has_period_p21(
    s1: &RepForm,
    s2: &CuspidalPoint,
    reg: &Registry,
    table: &RuleTable,
) -> Result<(TriBool, OrbitOutcome), DistinctionError> {
    let w = s1.weight(reg)?;
    if w != 2 {
        return Err(DistinctionError::WeightMismatch {
            expected: 2,
            got: w,
        });
    }
    if closed_orbit_p21(s1, s2, reg)? {
        return Ok((TriBool::Yes, OrbitOutcome::ClosedOrbit));
    }
    let open = sp_hom(s1, reg, table)?.and(sp_hom(
        &RepForm::point(Segment::point(s2.clone())),
        reg,
        table,
    )?);
    let terms = jacquet_of_form(s1, 1, reg)?;
    let ext = ext_vanishes_p(s2, &terms, true, reg, table)?;
    let outcome = match (open, ext) {
        (TriBool::Yes, TriBool::Yes) => OrbitOutcome::OpenOrbit,
        (TriBool::No, _) => OrbitOutcome::NoOrbit,
        _ => OrbitOutcome::Unresolved,
    };
    Ok((outcome_tribool(outcome), outcome))
}

/// `(1,3)` induction `l1 x l2`.
pub fn induced_has_period_p13(
    l1: &CuspidalPoint,
    l2: &RepForm,
    reg: &Registry,
    table: &RuleTable,
) -> Result<(TriBool, OrbitOutcome), DistinctionError> {
    let w = l2.weight(reg)?;
    if w != 3 {
        return Err(DistinctionError::WeightMismatch {
            expected: 3,
            got: w,
        });
    }
    // A restriction term with an unresolved symplectic side blocks the
    // conclusion that the closed orbit cannot fire.
    let l1_seg = Segment::point(l1.clone());
    let terms = jacquet_of_form(l2, 2, reg)?;
    let mut closed = TriBool::No;
    for term in &terms {
        let Some(b) = term_point(&term.right) else {
            continue;
        };
        if point_eq_twisted(&l1_seg, b, Exp::from_integer(1)) {
            match sp_hom(&term.left, reg, table)? {
                TriBool::Yes => {
                    closed = TriBool::Yes;
                    break;
                }
                TriBool::Unknown => closed = TriBool::Unknown,
                TriBool::No => {}
            }
        }
    }
    if closed == TriBool::Yes {
        return Ok((TriBool::Yes, OrbitOutcome::ClosedOrbit));
    }
    let open = sp_hom(&RepForm::point(l1_seg), reg, table)?.and(sp_hom(l2, reg, table)?);
    let ext = ext_vanishes_p(l1, &terms, false, reg, table)?;
    let outcome = match (open, ext) {
        (TriBool::Yes, TriBool::Yes) => OrbitOutcome::OpenOrbit,
        (TriBool::No, _) if closed == TriBool::No => OrbitOutcome::NoOrbit,
        _ => OrbitOutcome::Unresolved,
    };
    Ok((outcome_tribool(outcome), outcome))
}

/// Middle-orbit pairing twist for `(2,2)` inductions; no worked example
/// pins it, so it is configurable and defaults to zero.
#[derive(Debug, Clone, Copy)]
pub struct MiddleOrbitConfig {
    pub twist: Exp,
}

impl Default for MiddleOrbitConfig {
    fn default() -> Self {
        MiddleOrbitConfig {
            twist: Exp::from_integer(0),
        }
    }
}

/// `(2,2)` induction `p1 x p2`. The closed condition is a twist match
/// between the factors (checked in both orders, the mirrored order
/// through the contragredient); the middle orbit is the configurable
/// diagonal pairing of restriction terms.
pub fn induced_has_period_p22(
    p1: &RepForm,
    p2: &RepForm,
    reg: &Registry,
    table: &RuleTable,
    config: &MiddleOrbitConfig,
) -> Result<(TriBool, OrbitOutcome), DistinctionError> {
    for f in [p1, p2] {
        let w = f.weight(reg)?;
        if w != 2 {
            return Err(DistinctionError::WeightMismatch {
                expected: 2,
                got: w,
            });
        }
    }
    let norm = |f: &RepForm| -> Result<RepForm, DistinctionError> {
        Ok(normalize(f, reg)
            .map_err(|crate::decomp::DecompError::Seg(s)| DistinctionError::Seg(s))?
            .0)
    };
    let (n1, n2) = (norm(p1)?, norm(p2)?);
    if n1 == norm(&p2.twist(Exp::from_integer(1)))? || n2 == norm(&p1.twist(Exp::from_integer(1)))? {
        return Ok((TriBool::Yes, OrbitOutcome::ClosedOrbit));
    }
    let open = sp_hom(p1, reg, table)?.and(sp_hom(p2, reg, table)?);
    // Middle orbit: terms A (x) B of p1 and C (x) D of p2 with
    // A = D v^t and B, C on character lines. Uncomputable restrictions
    // leave the condition undecided.
    let middle: Option<bool> = (|| -> Result<Option<bool>, DistinctionError> {
        let t1 = match jacquet_of_form(&n1, 1, reg) {
            Ok(t) => t,
            Err(JacquetError::UnsupportedPresentation) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let t2 = match jacquet_of_form(&n2, 1, reg) {
            Ok(t) => t,
            Err(JacquetError::UnsupportedPresentation) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        for u in &t1 {
            for v in &t2 {
                let (Some(a), Some(b), Some(c), Some(d)) = (
                    term_point(&u.left),
                    term_point(&u.right),
                    term_point(&v.left),
                    term_point(&v.right),
                ) else {
                    return Ok(None);
                };
                if point_eq_twisted(a, d, config.twist)
                    && is_character_point(b, reg)?
                    && is_character_point(c, reg)?
                {
                    return Ok(Some(true));
                }
            }
        }
        Ok(Some(false))
    })()?;
    let outcome = match (open, middle) {
        (TriBool::No, Some(false)) => OrbitOutcome::NoOrbit,
        _ => OrbitOutcome::Unresolved,
    };
    Ok((outcome_tribool(outcome), outcome))
}

/// The classifier context: registry, rule table, middle-orbit knob.
pub struct Classifier<'a> {
    pub registry: &'a Registry,
    pub table: &'a RuleTable,
    pub middle: MiddleOrbitConfig,
}

impl<'a> Classifier<'a> {
    pub fn new(registry: &'a Registry, table: &'a RuleTable) -> Self {
        Classifier {
            registry,
            table,
            middle: MiddleOrbitConfig::default(),
        }
    }

    /// Verdict for a representation given by any presentation of weight
    /// one to four. Reducible products are classified as induced
    /// representations, recorded in the justification.
    pub fn classify(&self, rep: &RepForm) -> Result<Verdict, DistinctionError> {
        let reg = self.registry;
        let w = rep.weight(reg)?;
        if w == 0 || w > 4 {
            return Err(DistinctionError::UnsupportedWeight(w));
        }
        let (form, status) = normalize(rep, reg)
            .map_err(|crate::decomp::DecompError::Seg(s)| DistinctionError::Seg(s))?;
        match status {
            NormalizeStatus::Irreducible => {
                let m = form
                    .z_parameter(reg)?
                    .expect("irreducible normalized form has a socle parameter");
                Ok(self.table.classify_multiseg(&m, reg)?)
            }
            NormalizeStatus::Reducible => {
                let RepForm::Product(factors) = &form else {
                    unreachable!("reducible normalization is a product")
                };
                let verdict = self.classify_induced(factors)?;
                Ok(verdict.prepend(
                    "NORM",
                    "input is a reducible product; the verdict refers to the induced representation",
                ))
            }
        }
    }

    /// Verdict for the parabolically induced representation with the
    /// given ordered factors, via the orbit analysis of the matching
    /// maximal split. For more than two factors every grouping into an
    /// irreducible two-factor split is consulted; a period found through
    /// any grouping certifies the induced representation.
    pub fn classify_induced(&self, factors: &[RepForm]) -> Result<Verdict, DistinctionError> {
        let reg = self.registry;
        if factors.len() < 2 {
            let ws: Vec<u32> = factors
                .iter()
                .map(|f| f.weight(reg))
                .collect::<Result<_, _>>()?;
            return Err(DistinctionError::UnsupportedSplit(ws));
        }
        // A period found through any grouping certifies the induced
        // representation; ruling it out needs every grouping to fail.
        let mut verdicts: Vec<Verdict> = Vec::new();
        for cut in 1..factors.len() {
            let left = self.group(&factors[..cut])?;
            let right = self.group(&factors[cut..])?;
            let (Some(left), Some(right)) = (left, right) else {
                continue;
            };
            if let Some(verdict) = self.two_factor(&left, &right)? {
                if verdict.status == Status::Distinguished {
                    return Ok(verdict);
                }
                verdicts.push(verdict);
            }
        }
        if verdicts.is_empty() {
            let ws: Vec<u32> = factors
                .iter()
                .map(|f| f.weight(reg))
                .collect::<Result<_, _>>()?;
            return Err(DistinctionError::UnsupportedSplit(ws));
        }
        if let Some(v) = verdicts
            .iter()
            .find(|v| v.status == Status::Inconclusive)
        {
            return Ok(v.clone());
        }
        Ok(verdicts.into_iter().next().expect("nonempty"))
    }

    /// Normalize a factor group into a single irreducible presentation,
    /// or report that this grouping is unavailable.
    fn group(&self, factors: &[RepForm]) -> Result<Option<RepForm>, DistinctionError> {
        let f = if factors.len() == 1 {
            factors[0].clone()
        } else {
            RepForm::Product(factors.to_vec())
        };
        let (form, status) = normalize(&f, self.registry)
            .map_err(|crate::decomp::DecompError::Seg(s)| DistinctionError::Seg(s))?;
        Ok((status == NormalizeStatus::Irreducible).then_some(form))
    }

    fn two_factor(
        &self,
        left: &RepForm,
        right: &RepForm,
    ) -> Result<Option<Verdict>, DistinctionError> {
        let reg = self.registry;
        let (wl, wr) = (left.weight(reg)?, right.weight(reg)?);
        let result = match (wl, wr) {
            (2, 1) => {
                let p = right.as_point().expect("weight-one form is a point");
                let (t, o) = induced_has_period_p21(left, &p.first_point(), reg, self.table)?;
                Some((t, o, "2,1"))
            }
            (1, 2) => {
                // Mirror through the contragredient to the (2,1) case.
                let lc = left.contragredient(reg)?;
                let rc = right.contragredient(reg)?;
                let p = lc.as_point().expect("weight-one form is a point");
                let (t, o) = induced_has_period_p21(&rc, &p.first_point(), reg, self.table)?;
                Some((t, o, "1,2 via contragredient"))
            }
            (1, 3) => {
                let p = left.as_point().expect("weight-one form is a point");
                let (t, o) = induced_has_period_p13(&p.first_point(), right, reg, self.table)?;
                Some((t, o, "1,3"))
            }
            (3, 1) => {
                let lc = left.contragredient(reg)?;
                let rc = right.contragredient(reg)?;
                let p = rc.as_point().expect("weight-one form is a point");
                let (t, o) = induced_has_period_p13(&p.first_point(), &lc, reg, self.table)?;
                Some((t, o, "3,1 via contragredient"))
            }
            (2, 2) => {
                let (t, o) = induced_has_period_p22(left, right, reg, self.table, &self.middle)?;
                Some((t, o, "2,2"))
            }
            _ => None,
        };
        Ok(result.map(|(t, o, split)| {
            let status = match t {
                TriBool::Yes => Status::Distinguished,
                TriBool::No => Status::NotDistinguished,
                TriBool::Unknown => Status::Inconclusive,
            };
            let (id, what) = match o {
                OrbitOutcome::ClosedOrbit => ("IND.CLOSED", "closed orbit condition holds"),
                OrbitOutcome::OpenOrbit => (
                    "IND.OPEN",
                    "both factors distinguished and the controlling Ext functor vanishes",
                ),
                OrbitOutcome::NoOrbit => ("IND.NONE", "no orbit condition can hold"),
                OrbitOutcome::Unresolved => ("IND.UNRESOLVED", "orbit analysis inconclusive"),
            };
            Verdict::new(status, id, &format!("{what} (split {split})"))
        }))
    }
}
