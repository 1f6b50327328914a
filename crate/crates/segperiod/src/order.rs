//! Elementary operations and the partial order they generate on
//! multisegments, with exhaustive enumeration of the down-set (the
//! subquotient parameters of the corresponding induced product).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::segcore::{intersection, union, Multisegment, SegError};
use crate::support::Registry;

/// All multisegments obtained by replacing one linked pair of `m` by
/// its union and intersection (the intersection dropped when empty).
/// Duplicates collapse.
pub fn elementary_successors(
    m: &Multisegment,
    reg: &Registry,
) -> Result<BTreeSet<Multisegment>, SegError> {
    let mut out = BTreeSet::new();
    let segs = m.segments();
    for (i, j) in m.linked_pairs(reg)? {
        let mut rest: Vec<_> = segs
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i && *k != j)
            .map(|(_, s)| s.clone())
            .collect();
        rest.push(union(&segs[i], &segs[j], reg)?);
        if let Some(int) = intersection(&segs[i], &segs[j], reg)? {
            rest.push(int);
        }
        out.insert(Multisegment::new(rest));
    }
    Ok(out)
}

/// The full down-set `{ b : b <= a }` under sequences of elementary
/// operations, including `a` itself.
pub fn enumerate_below(a: &Multisegment, reg: &Registry) -> Result<BTreeSet<Multisegment>, SegError> {
    let mut seen: BTreeSet<Multisegment> = BTreeSet::new();
    let mut queue: VecDeque<Multisegment> = VecDeque::new();
    seen.insert(a.clone());
    queue.push_back(a.clone());
    while let Some(m) = queue.pop_front() {
        for next in elementary_successors(&m, reg)? {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// `b <= a`: reachability by elementary operations. Equal cuspidal
/// support is a necessary precheck; reachability is then a memoized
/// breadth-first search.
pub fn leq(b: &Multisegment, a: &Multisegment, reg: &Registry) -> Result<bool, SegError> {
    if b == a {
        return Ok(true);
    }
    if b.support(reg)? != a.support(reg)? {
        return Ok(false);
    }
    Ok(enumerate_below(a, reg)?.contains(b))
}

/// The minimal elements of the down-set of `a`. Nothing is asserted
/// about the size of this set.
pub fn minimal_below(a: &Multisegment, reg: &Registry) -> Result<BTreeSet<Multisegment>, SegError> {
    let below = enumerate_below(a, reg)?;
    let mut out = BTreeSet::new();
    for m in &below {
        if elementary_successors(m, reg)?.is_empty() {
            out.insert(m.clone());
        }
    }
    Ok(out)
}

/// Empirical antisymmetry check over a family of multisegments; a
/// violation would indicate an implementation bug in the elementary
/// operations, so it aborts with a diagnostic.
pub fn assert_antisymmetric(family: &[Multisegment], reg: &Registry) -> Result<(), SegError> {
    let mut downsets: HashMap<&Multisegment, HashSet<Multisegment>> = HashMap::new();
    for m in family {
        downsets.insert(m, enumerate_below(m, reg)?.into_iter().collect());
    }
    for a in family {
        for b in downsets[a].iter() {
            if b != a {
                if let Some(db) = downsets.get(b) {
                    assert!(
                        !db.contains(a),
                        "antisymmetry violated between {a:?} and {b:?}"
                    );
                }
            }
        }
    }
    Ok(())
}

impl PartialOrd for Multisegment {
    /// Structural order used only for canonical storage in sets.
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Multisegment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |m: &Multisegment| {
            m.segments()
                .iter()
                .map(|s| (s.label.clone(), s.start, s.len))
                .collect::<Vec<_>>()
        };
        key(self).cmp(&key(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exp;
    use crate::segcore::Segment;
    use crate::support::LabelId;
    use crate::Exp;

    fn reg() -> Registry {
        Registry::default_registry()
    }
    fn seg(label: &str, start: Exp, len: u32) -> Segment {
        Segment::new(LabelId::new(label), start, len).unwrap()
    }

    #[test]
    fn successors_of_adjacent_points() {
        let r = reg();
        let m = Multisegment::new(vec![seg("chi", exp(-1, 1), 1), seg("chi", exp(1, 1), 1)]);
        let succ = elementary_successors(&m, &r).unwrap();
        assert_eq!(succ.len(), 1);
        assert!(succ.contains(&Multisegment::new(vec![seg("chi", exp(-1, 1), 2)])));
    }

    #[test]
    fn successors_of_single_segment() {
        let r = reg();
        let m = Multisegment::new(vec![seg("mu", exp(0, 1), 3)]);
        assert!(elementary_successors(&m, &r).unwrap().is_empty());
    }

    #[test]
    fn successors_of_three_chain() {
        let r = reg();
        let m = Multisegment::new(vec![
            seg("chi", exp(-2, 1), 1),
            seg("chi", exp(0, 1), 1),
            seg("chi", exp(2, 1), 1),
        ]);
        let succ = elementary_successors(&m, &r).unwrap();
        assert_eq!(succ.len(), 2);
        assert!(succ.contains(&Multisegment::new(vec![
            seg("chi", exp(-2, 1), 2),
            seg("chi", exp(2, 1), 1)
        ])));
        assert!(succ.contains(&Multisegment::new(vec![
            seg("chi", exp(-2, 1), 1),
            seg("chi", exp(0, 1), 2)
        ])));
    }

    #[test]
    fn leq_examples() {
        let r = reg();
        let b = Multisegment::new(vec![seg("chi", exp(-1, 1), 3)]);
        let a = Multisegment::new(vec![seg("chi", exp(-1, 1), 2), seg("chi", exp(3, 1), 1)]);
        assert!(leq(&b, &a, &r).unwrap());
        assert!(leq(&a, &a, &r).unwrap());
        let other = Multisegment::new(vec![seg("chi", exp(0, 1), 1)]);
        assert!(!leq(&other, &a, &r).unwrap());
    }

    #[test]
    fn downset_of_three_chain_has_four_elements() {
        let r = reg();
        let a = Multisegment::new(vec![
            seg("chi", exp(-2, 1), 1),
            seg("chi", exp(0, 1), 1),
            seg("chi", exp(2, 1), 1),
        ]);
        let below = enumerate_below(&a, &r).unwrap();
        assert_eq!(below.len(), 4);
    }

    #[test]
    fn downset_trivial_cases() {
        let r = reg();
        let single = Multisegment::new(vec![seg("mu", exp(0, 1), 2)]);
        assert_eq!(enumerate_below(&single, &r).unwrap().len(), 1);
        // Gap of two steps on a step-one lattice: unlinked.
        let gap = Multisegment::new(vec![seg("mu", exp(0, 1), 1), seg("mu", exp(2, 1), 1)]);
        assert_eq!(enumerate_below(&gap, &r).unwrap().len(), 1);
    }

    #[test]
    fn downset_size_one_iff_unlinked() {
        let r = reg();
        for s1 in 0..4 {
            for s2 in 0..4 {
                for l1 in 1..3u32 {
                    for l2 in 1..3u32 {
                        let m = Multisegment::new(vec![
                            seg("mu", exp(s1, 1), l1),
                            seg("mu", exp(s2, 1), l2),
                        ]);
                        let below = enumerate_below(&m, &r).unwrap();
                        assert_eq!(below.len() == 1, m.pairwise_unlinked(&r).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn support_preserved_below() {
        let r = reg();
        let a = Multisegment::new(vec![
            seg("mu", exp(0, 1), 2),
            seg("mu", exp(1, 1), 2),
            seg("mu", exp(0, 1), 1),
        ]);
        let sup = a.support(&r).unwrap();
        for b in enumerate_below(&a, &r).unwrap() {
            assert_eq!(b.support(&r).unwrap(), sup);
        }
    }
}
