//! Data-driven verdict rules: an ordered list of (pattern, verdict,
//! citation) records matched against normalized socle parameters, up to
//! a twist per label variable and label renaming consistent with class
//! and group size.
//!
//! Record format, one per line, `|`-separated, `#` comments:
//!
//! ```text
//! n | id | pattern | verdict | citation
//! ```
//!
//! Patterns are product expressions whose atoms are socle shapes over
//! wildcard labels (`Z([?c*v^0 .. ?c*v^2]; [?c*v^-2])`), bare wildcard
//! points (`?c1`), recursive factors (`@dist2`, `@dist3`) requiring the
//! assigned sub-multisegment to classify distinguished at that weight,
//! or the catch-all `*`. Wildcard classes are read from the name: `?c*`
//! character, `?m*` higher, `?x*` any rank-one label, `?p2*`/`?p3*`/
//! `?p4*` cuspidal of that rank, `?a*` anything. Factors of a product
//! pattern must land on pairwise-unlinked segment groups. Verdicts are
//! `distinguished`, `not_distinguished`, `inconclusive` or `status ?v`
//! (the registered status of the label bound to `?v`); a trailing
//! `@flag` downgrades the verdict to inconclusive when the registry's
//! even-rank cuspidal assumption is switched off.

use std::collections::HashMap;

use thiserror::Error;

use crate::segcore::{linked, Multisegment, SegError, Segment};
use crate::support::{CuspidalLabel, Registry, SpStatus};
use crate::Exp;

/// Verdict status of the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Distinguished,
    NotDistinguished,
    Inconclusive,
}

/// A verdict with its justification chain of (rule id, citation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub justification: Vec<(String, String)>,
}

impl Verdict {
    pub fn new(status: Status, id: &str, citation: &str) -> Self {
        Verdict {
            status,
            justification: vec![(id.to_string(), citation.to_string())],
        }
    }

    pub fn prepend(mut self, id: &str, citation: &str) -> Self {
        self.justification.insert(0, (id.to_string(), citation.to_string()));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarClass {
    Character,
    Higher,
    AnyGl1,
    Cuspidal(u32),
    Any,
}

impl VarClass {
    fn admits(&self, label: &CuspidalLabel) -> bool {
        match self {
            VarClass::Character => label.is_character(),
            VarClass::Higher => label.is_higher_gl1(),
            VarClass::AnyGl1 => label.group_size == 1,
            VarClass::Cuspidal(r) => label.group_size == *r && label.dim_class.is_none(),
            VarClass::Any => true,
        }
    }
}

#[derive(Debug, Clone)]
struct PatSeg {
    var: String,
    class: VarClass,
    start: Exp,
    len: u32,
}

#[derive(Debug, Clone)]
enum PatFactor {
    /// Fixed shape over wildcard labels.
    Group(Vec<PatSeg>),
    /// Any sub-multisegment of this weight classifying distinguished.
    DistRec(u32),
    /// Matches anything of the rule's weight.
    Blanket,
}

#[derive(Debug, Clone)]
enum VerdictSpec {
    Fixed(Status),
    ByStatus(String),
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub weight: u32,
    pub id: String,
    factors: Vec<PatFactor>,
    verdict: VerdictSpec,
    needs_even_flag: bool,
    pub citation: String,
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("rule table line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no rule matched a multisegment of weight {0}")]
    NoRule(u32),
    #[error("weight {0} unsupported (expected 1 to 4)")]
    UnsupportedWeight(u32),
    #[error(transparent)]
    Seg(#[from] SegError),
    #[error(transparent)]
    Registry(#[from] crate::support::RegistryError),
}

/// The ordered rule table.
#[derive(Debug, Clone)]
pub struct RuleTable {
    rules: Vec<Rule>,
}

/// The table shipped with the crate.
pub const DEFAULT_RULES: &str = include_str!("../data/rules.tab");

impl RuleTable {
    pub fn default_table() -> RuleTable {
        RuleTable::parse(DEFAULT_RULES).expect("embedded rule table is well-formed")
    }

    pub fn parse(text: &str) -> Result<RuleTable, RuleError> {
        let mut rules = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            if parts.len() != 5 {
                return Err(RuleError::Parse {
                    line: lineno + 1,
                    message: format!("expected 5 fields, got {}", parts.len()),
                });
            }
            let weight: u32 = parts[0].parse().map_err(|_| RuleError::Parse {
                line: lineno + 1,
                message: format!("bad weight `{}`", parts[0]),
            })?;
            let factors = parse_pattern(parts[2]).map_err(|message| RuleError::Parse {
                line: lineno + 1,
                message,
            })?;
            let (verdict, needs_even_flag) =
                parse_verdict(parts[3]).map_err(|message| RuleError::Parse {
                    line: lineno + 1,
                    message,
                })?;
            rules.push(Rule {
                weight,
                id: parts[1].to_string(),
                factors,
                verdict,
                needs_even_flag,
                citation: parts[4].to_string(),
            });
        }
        Ok(RuleTable { rules })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Classify the irreducible representation with socle parameter `m`.
    /// The first matching rule (in table order) decides.
    pub fn classify_multiseg(
        &self,
        m: &Multisegment,
        reg: &Registry,
    ) -> Result<Verdict, RuleError> {
        let weight = m.weight(reg)?;
        if weight == 0 || weight > 4 {
            return Err(RuleError::UnsupportedWeight(weight));
        }
        for rule in &self.rules {
            if rule.weight != weight {
                continue;
            }
            if let Some(bindings) = match_rule(rule, m, reg, self)? {
                let status = match &rule.verdict {
                    VerdictSpec::Fixed(s) => *s,
                    VerdictSpec::ByStatus(var) => {
                        let label = bindings
                            .get(var)
                            .expect("status variable bound by matcher");
                        match reg.get(label)?.sp_status {
                            SpStatus::Distinguished => Status::Distinguished,
                            SpStatus::NotDistinguished => Status::NotDistinguished,
                            SpStatus::Unknown => Status::Inconclusive,
                        }
                    }
                };
                let status = if rule.needs_even_flag && !reg.even_cuspidal_not_distinguished {
                    Status::Inconclusive
                } else {
                    status
                };
                return Ok(Verdict::new(status, &rule.id, &rule.citation));
            }
        }
        Err(RuleError::NoRule(weight))
    }
}

type Bindings = HashMap<String, crate::support::LabelId>;

fn parse_var(token: &str) -> Result<(String, VarClass), String> {
    let name = token
        .strip_prefix('?')
        .ok_or_else(|| format!("expected a wildcard, got `{token}`"))?;
    let class = if name.starts_with("p2") {
        VarClass::Cuspidal(2)
    } else if name.starts_with("p3") {
        VarClass::Cuspidal(3)
    } else if name.starts_with("p4") {
        VarClass::Cuspidal(4)
    } else if name.starts_with('c') {
        VarClass::Character
    } else if name.starts_with('m') {
        VarClass::Higher
    } else if name.starts_with('x') {
        VarClass::AnyGl1
    } else if name.starts_with('a') {
        VarClass::Any
    } else {
        return Err(format!("unknown wildcard class in `{token}`"));
    };
    Ok((name.to_string(), class))
}

fn parse_rational(s: &str) -> Result<Exp, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: i64 = num
        .trim()
        .parse()
        .map_err(|_| format!("bad rational `{s}`"))?;
    let d: i64 = den
        .trim()
        .parse()
        .map_err(|_| format!("bad rational `{s}`"))?;
    if d == 0 {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Exp::new(n, d))
}

/// `?var*v^e` or bare `?var` (exponent zero).
fn parse_pat_point(s: &str) -> Result<(String, VarClass, Exp), String> {
    match s.split_once("*v^") {
        Some((var, e)) => {
            let (name, class) = parse_var(var.trim())?;
            Ok((name, class, parse_rational(e.trim())?))
        }
        None => {
            let (name, class) = parse_var(s.trim())?;
            Ok((name, class, Exp::from_integer(0)))
        }
    }
}

fn pat_step(class: VarClass) -> Result<Exp, String> {
    // Pattern exponents presuppose the class's forced lattice step.
    match class {
        VarClass::Character => Ok(Exp::from_integer(2)),
        VarClass::Higher | VarClass::Cuspidal(_) => Ok(Exp::from_integer(1)),
        _ => Err("range patterns need a class with a fixed step".to_string()),
    }
}

fn parse_pat_group(body: &str) -> Result<Vec<PatSeg>, String> {
    let mut segs = Vec::new();
    for part in body.split(';') {
        let part = part.trim();
        let inner = part
            .strip_prefix('[')
            .and_then(|p| p.strip_suffix(']'))
            .ok_or_else(|| format!("expected `[...]`, got `{part}`"))?;
        match inner.split_once("..") {
            Some((lo, hi)) => {
                let (var, class, start) = parse_pat_point(lo.trim())?;
                let (var2, class2, end) = parse_pat_point(hi.trim())?;
                if var != var2 || class != class2 {
                    return Err("range endpoints must use one wildcard".to_string());
                }
                let step = pat_step(class)?;
                let ratio = (end - start) / step;
                if !ratio.is_integer() || ratio < Exp::from_integer(0) {
                    return Err(format!("range `{part}` is off-lattice"));
                }
                segs.push(PatSeg {
                    var,
                    class,
                    start,
                    len: ratio.to_integer() as u32 + 1,
                });
            }
            None => {
                let (var, class, start) = parse_pat_point(inner.trim())?;
                segs.push(PatSeg {
                    var,
                    class,
                    start,
                    len: 1,
                });
            }
        }
    }
    Ok(segs)
}

fn parse_pattern(text: &str) -> Result<Vec<PatFactor>, String> {
    let text = text.trim();
    if text == "*" {
        return Ok(vec![PatFactor::Blanket]);
    }
    let mut factors = Vec::new();
    for piece in text.split(" x ") {
        let piece = piece.trim();
        if piece == "@dist2" {
            factors.push(PatFactor::DistRec(2));
        } else if piece == "@dist3" {
            factors.push(PatFactor::DistRec(3));
        } else if let Some(body) = piece.strip_prefix("Z(").and_then(|p| p.strip_suffix(')')) {
            factors.push(PatFactor::Group(parse_pat_group(body)?));
        } else if piece.starts_with('?') {
            let (var, class, start) = parse_pat_point(piece)?;
            factors.push(PatFactor::Group(vec![PatSeg {
                var,
                class,
                start,
                len: 1,
            }]));
        } else {
            return Err(format!("unrecognized pattern factor `{piece}`"));
        }
    }
    Ok(factors)
}

fn parse_verdict(text: &str) -> Result<(VerdictSpec, bool), String> {
    let mut text = text.trim();
    let mut flag = false;
    if let Some(rest) = text.strip_suffix("@flag") {
        flag = true;
        text = rest.trim();
    }
    let spec = if text == "distinguished" {
        VerdictSpec::Fixed(Status::Distinguished)
    } else if text == "not_distinguished" {
        VerdictSpec::Fixed(Status::NotDistinguished)
    } else if text == "inconclusive" {
        VerdictSpec::Fixed(Status::Inconclusive)
    } else if let Some(var) = text.strip_prefix("status ") {
        let (name, _) = parse_var(var.trim())?;
        VerdictSpec::ByStatus(name)
    } else {
        return Err(format!("unrecognized verdict `{text}`"));
    };
    Ok((spec, flag))
}

/// Try to match a rule against a multisegment: distribute the segments
/// over the pattern factors, unify wildcard labels and per-variable
/// twists, check recursive factors and cross-factor unlinkedness.
fn match_rule(
    rule: &Rule,
    m: &Multisegment,
    reg: &Registry,
    table: &RuleTable,
) -> Result<Option<Bindings>, RuleError> {
    if matches!(rule.factors.as_slice(), [PatFactor::Blanket]) {
        return Ok(Some(Bindings::new()));
    }
    let segs = m.segments();
    let k = rule.factors.len();
    // Assign each segment to a factor index, counting in base k.
    let mut assignment = vec![0usize; segs.len()];
    loop {
        if let Some(b) = try_assignment(rule, m, &assignment, reg, table)? {
            return Ok(Some(b));
        }
        let mut i = 0;
        loop {
            if i == assignment.len() {
                return Ok(None);
            }
            assignment[i] += 1;
            if assignment[i] < k {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

fn try_assignment(
    rule: &Rule,
    m: &Multisegment,
    assignment: &[usize],
    reg: &Registry,
    table: &RuleTable,
) -> Result<Option<Bindings>, RuleError> {
    let segs = m.segments();
    let k = rule.factors.len();
    let mut groups: Vec<Vec<&Segment>> = vec![Vec::new(); k];
    for (seg, &f) in segs.iter().zip(assignment) {
        groups[f].push(seg);
    }
    // Cross-factor segments must be pairwise unlinked.
    for i in 0..k {
        for j in (i + 1)..k {
            for a in &groups[i] {
                for b in &groups[j] {
                    if linked(a, b, reg)? {
                        return Ok(None);
                    }
                }
            }
        }
    }
    let mut bindings: Bindings = Bindings::new();
    let mut twists: HashMap<String, Exp> = HashMap::new();
    for (factor, group) in rule.factors.iter().zip(&groups) {
        match factor {
            PatFactor::Blanket => unreachable!("blanket is always sole"),
            PatFactor::DistRec(w) => {
                let sub = Multisegment::new(group.iter().map(|s| (*s).clone()).collect());
                if sub.weight(reg)? != *w {
                    return Ok(None);
                }
                match table.classify_multiseg(&sub, reg) {
                    Ok(v) if v.status == Status::Distinguished => {}
                    Ok(_) => return Ok(None),
                    Err(RuleError::Seg(e)) => return Err(RuleError::Seg(e)),
                    Err(_) => return Ok(None),
                }
            }
            PatFactor::Group(slots) => {
                if slots.len() != group.len() {
                    return Ok(None);
                }
                if !match_group(slots, group, reg, &mut bindings, &mut twists)? {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(bindings))
}

/// Match a fixed group's slots against segments (some permutation),
/// extending the shared bindings. Backtracking over slot order.
fn match_group(
    slots: &[PatSeg],
    group: &[&Segment],
    reg: &Registry,
    bindings: &mut Bindings,
    twists: &mut HashMap<String, Exp>,
) -> Result<bool, RuleError> {
    fn recurse(
        slots: &[PatSeg],
        group: &[&Segment],
        used: &mut Vec<bool>,
        idx: usize,
        reg: &Registry,
        bindings: &mut Bindings,
        twists: &mut HashMap<String, Exp>,
    ) -> Result<bool, RuleError> {
        if idx == slots.len() {
            return Ok(true);
        }
        let slot = &slots[idx];
        for (i, seg) in group.iter().enumerate() {
            if used[i] || seg.len != slot.len {
                continue;
            }
            let label = reg.get(&seg.label)?;
            if !slot.class.admits(label) {
                continue;
            }
            let twist = seg.start - slot.start;
            let prev_label = bindings.get(&slot.var).cloned();
            let prev_twist = twists.get(&slot.var).copied();
            if let Some(ref l) = prev_label {
                if *l != seg.label || prev_twist != Some(twist) {
                    continue;
                }
            }
            bindings.insert(slot.var.clone(), seg.label.clone());
            twists.insert(slot.var.clone(), twist);
            used[i] = true;
            if recurse(slots, group, used, idx + 1, reg, bindings, twists)? {
                return Ok(true);
            }
            used[i] = false;
            match prev_label {
                Some(l) => {
                    bindings.insert(slot.var.clone(), l);
                    twists.insert(slot.var.clone(), prev_twist.unwrap());
                }
                None => {
                    bindings.remove(&slot.var);
                    twists.remove(&slot.var);
                }
            }
        }
        Ok(false)
    }
    let mut used = vec![false; group.len()];
    recurse(slots, group, &mut used, 0, reg, bindings, twists)
}
