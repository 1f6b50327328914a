//! Registry of cuspidal labels: the abstract supercuspidal building
//! blocks every other module consults for group size, twist-lattice
//! step, contragredient partner and known symplectic-period status.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

/// Dimension dichotomy for labels on `GL_1(D) = D^x`: a character or an
/// irreducible of dimension greater than one. Only meaningful for
/// group size 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DimClass {
    Character,
    Higher,
}

/// Known symplectic-period status of a label viewed as an irreducible
/// representation of its own group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpStatus {
    Distinguished,
    NotDistinguished,
    Unknown,
}

/// Interned label identifier. Cheap to clone and compare.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelId(Arc<str>);

impl LabelId {
    pub fn new(s: &str) -> Self {
        LabelId(Arc::from(s))
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for LabelId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// A registered cuspidal label.
#[derive(Debug, Clone)]
pub struct CuspidalLabel {
    pub id: LabelId,
    /// The label lives on `GL_r(D)`.
    pub group_size: u32,
    /// Present exactly when `group_size == 1`.
    pub dim_class: Option<DimClass>,
    /// Exponent of `v` per lattice step.
    pub step: u32,
    /// Contragredient partner; an involution on the registry.
    pub dual_id: LabelId,
    pub sp_status: SpStatus,
}

impl CuspidalLabel {
    pub fn is_character(&self) -> bool {
        self.group_size == 1 && self.dim_class == Some(DimClass::Character)
    }
    pub fn is_higher_gl1(&self) -> bool {
        self.group_size == 1 && self.dim_class == Some(DimClass::Higher)
    }
}

/// Input record for [`Registry::build`]: unset fields take the
/// documented defaults.
#[derive(Debug, Clone)]
pub struct LabelSpec {
    pub id: String,
    pub group_size: u32,
    pub dim_class: Option<DimClass>,
    pub step: Option<u32>,
    pub dual_id: Option<String>,
    pub sp_status: Option<SpStatus>,
}

impl LabelSpec {
    pub fn character(id: &str) -> Self {
        LabelSpec {
            id: id.to_string(),
            group_size: 1,
            dim_class: Some(DimClass::Character),
            step: None,
            dual_id: None,
            sp_status: None,
        }
    }
    pub fn higher(id: &str) -> Self {
        LabelSpec {
            id: id.to_string(),
            group_size: 1,
            dim_class: Some(DimClass::Higher),
            step: None,
            dual_id: None,
            sp_status: None,
        }
    }
    pub fn cuspidal(id: &str, group_size: u32) -> Self {
        LabelSpec {
            id: id.to_string(),
            group_size,
            dim_class: None,
            step: None,
            dual_id: None,
            sp_status: None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("duplicate label id `{0}`")]
    DuplicateId(String),
    #[error("label `{id}`: step {step} is inconsistent with its class (expected {expected})")]
    StepInconsistent { id: String, step: u32, expected: u32 },
    #[error("label `{id}`: dual id `{dual}` is not registered")]
    DanglingDual { id: String, dual: String },
    #[error("labels `{a}` and `{b}`: dual links are not symmetric")]
    AsymmetricDual { a: String, b: String },
    #[error("label `{id}`: group size must be positive")]
    ZeroGroupSize { id: String },
    #[error("label `{id}`: dim class is only meaningful on GL_1(D)")]
    ClassOnLargeGroup { id: String },
    #[error("label `{id}`: GL_1(D) labels need a dim class")]
    MissingClass { id: String },
    #[error("label `{id}`: sp_status {given} contradicts the forced value {forced}")]
    StatusInconsistent { id: String, given: String, forced: String },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("support file: {0}")]
    File(String),
}

/// Immutable registry of cuspidal labels. Built once, then shared.
#[derive(Debug, Clone)]
pub struct Registry {
    labels: BTreeMap<LabelId, CuspidalLabel>,
    /// Cuspidal labels of even group size are taken to be
    /// non-distinguished; switching this off downgrades the affected
    /// statuses to unknown.
    pub even_cuspidal_not_distinguished: bool,
}

impl Registry {
    /// Build a registry from specs, filling defaults and validating the
    /// label invariants. Dual links are installed symmetrically.
    pub fn build(specs: Vec<LabelSpec>) -> Result<Registry, RegistryError> {
        Registry::build_with_flag(specs, true)
    }

    pub fn build_with_flag(
        specs: Vec<LabelSpec>,
        even_cuspidal_not_distinguished: bool,
    ) -> Result<Registry, RegistryError> {
        let mut labels: BTreeMap<LabelId, CuspidalLabel> = BTreeMap::new();
        for spec in &specs {
            let label = resolve_spec(spec, even_cuspidal_not_distinguished)?;
            if labels.contains_key(&label.id) {
                return Err(RegistryError::DuplicateId(spec.id.clone()));
            }
            labels.insert(label.id.clone(), label);
        }
        // Dual links must land on registered labels, symmetrically.
        let snapshot: Vec<(LabelId, LabelId)> = labels
            .values()
            .map(|l| (l.id.clone(), l.dual_id.clone()))
            .collect();
        for (id, dual) in &snapshot {
            match labels.get(dual) {
                None => {
                    return Err(RegistryError::DanglingDual {
                        id: id.to_string(),
                        dual: dual.to_string(),
                    })
                }
                Some(partner) => {
                    if &partner.dual_id != id {
                        return Err(RegistryError::AsymmetricDual {
                            a: id.to_string(),
                            b: dual.to_string(),
                        });
                    }
                    // Contragredient partners share size, class and step.
                    let this = &labels[id];
                    if partner.group_size != this.group_size
                        || partner.dim_class != this.dim_class
                        || partner.step != this.step
                    {
                        return Err(RegistryError::AsymmetricDual {
                            a: id.to_string(),
                            b: dual.to_string(),
                        });
                    }
                }
            }
        }
        Ok(Registry {
            labels,
            even_cuspidal_not_distinguished,
        })
    }

    pub fn get(&self, id: &LabelId) -> Result<&CuspidalLabel, RegistryError> {
        self.labels
            .get(id)
            .ok_or_else(|| RegistryError::UnknownLabel(id.to_string()))
    }

    pub fn lookup(&self, name: &str) -> Option<&CuspidalLabel> {
        self.labels.get(&LabelId::new(name))
    }

    pub fn dual(&self, id: &LabelId) -> Result<&CuspidalLabel, RegistryError> {
        let label = self.get(id)?;
        self.get(&label.dual_id)
    }

    pub fn labels(&self) -> impl Iterator<Item = &CuspidalLabel> {
        self.labels.values()
    }

    /// The registry shipped with the command line front end: a character
    /// `chi`, a higher-dimensional `mu`, and cuspidal labels `rho2`,
    /// `rho3`.
    pub fn default_registry() -> Registry {
        Registry::build(vec![
            LabelSpec::character("chi"),
            LabelSpec::higher("mu"),
            LabelSpec::cuspidal("rho2", 2),
            LabelSpec::cuspidal("rho3", 3),
        ])
        .expect("default registry is valid")
    }

    /// Parse a support registry from its key-value text form. One table
    /// per label; unspecified fields take the documented defaults.
    ///
    /// ```toml
    /// even_cuspidal_not_distinguished = true
    ///
    /// [chi]
    /// group = 1
    /// class = "character"
    ///
    /// [rho3]
    /// group = 3
    /// sp_status = "distinguished"
    /// ```
    pub fn from_toml_str(text: &str) -> Result<Registry, RegistryError> {
        let doc: RegistryFile =
            toml::from_str(text).map_err(|e| RegistryError::File(e.to_string()))?;
        let flag = doc.even_cuspidal_not_distinguished.unwrap_or(true);
        let mut specs = Vec::new();
        for (id, entry) in doc.labels {
            if let Some(explicit) = &entry.id {
                if explicit != &id {
                    return Err(RegistryError::File(format!(
                        "label `{id}`: id field `{explicit}` does not match the table name"
                    )));
                }
            }
            let dim_class = match entry.class.as_deref() {
                None => None,
                Some("character") => Some(DimClass::Character),
                Some("higher") => Some(DimClass::Higher),
                Some(other) => {
                    return Err(RegistryError::File(format!(
                        "label `{id}`: unknown class `{other}`"
                    )))
                }
            };
            let sp_status = match entry.sp_status.as_deref() {
                None => None,
                Some("distinguished") => Some(SpStatus::Distinguished),
                Some("not_distinguished") => Some(SpStatus::NotDistinguished),
                Some("unknown") => Some(SpStatus::Unknown),
                Some(other) => {
                    return Err(RegistryError::File(format!(
                        "label `{id}`: unknown sp_status `{other}`"
                    )))
                }
            };
            specs.push(LabelSpec {
                id,
                group_size: entry.group.unwrap_or(1),
                dim_class,
                step: entry.step,
                dual_id: entry.dual,
                sp_status,
            });
        }
        Registry::build_with_flag(specs, flag)
    }
}

#[derive(Debug, Deserialize)]
struct RegistryFile {
    even_cuspidal_not_distinguished: Option<bool>,
    #[serde(flatten)]
    labels: BTreeMap<String, RegistryEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryEntry {
    /// Optional; must match the table name when present.
    id: Option<String>,
    group: Option<u32>,
    class: Option<String>,
    step: Option<u32>,
    dual: Option<String>,
    sp_status: Option<String>,
}

fn status_name(s: SpStatus) -> &'static str {
    match s {
        SpStatus::Distinguished => "distinguished",
        SpStatus::NotDistinguished => "not_distinguished",
        SpStatus::Unknown => "unknown",
    }
}

fn resolve_spec(spec: &LabelSpec, even_flag: bool) -> Result<CuspidalLabel, RegistryError> {
    let id = spec.id.clone();
    if spec.group_size == 0 {
        return Err(RegistryError::ZeroGroupSize { id });
    }
    if spec.group_size > 1 && spec.dim_class.is_some() {
        return Err(RegistryError::ClassOnLargeGroup { id });
    }
    if spec.group_size == 1 && spec.dim_class.is_none() {
        return Err(RegistryError::MissingClass { id });
    }

    // Hard step defaults: v^2 on character lines, v elsewhere. For
    // GL_3(D) cuspidal labels the step is a genuine user field.
    let (default_step, forced_step) = match (spec.group_size, spec.dim_class) {
        (1, Some(DimClass::Character)) => (2, Some(2)),
        (1, Some(DimClass::Higher)) => (1, Some(1)),
        (2, _) => (1, Some(1)),
        _ => (1, None),
    };
    let step = spec.step.unwrap_or(default_step);
    if let Some(expected) = forced_step {
        if step != expected {
            return Err(RegistryError::StepInconsistent {
                id,
                step,
                expected,
            });
        }
    }

    let forced_status = match (spec.group_size, spec.dim_class) {
        (1, Some(DimClass::Character)) => Some(SpStatus::Distinguished),
        (1, Some(DimClass::Higher)) => Some(SpStatus::NotDistinguished),
        (r, _) if r % 2 == 0 => {
            if even_flag {
                Some(SpStatus::NotDistinguished)
            } else {
                Some(SpStatus::Unknown)
            }
        }
        _ => None,
    };
    let sp_status = match (forced_status, spec.sp_status) {
        (Some(forced), Some(given)) if forced != given => {
            return Err(RegistryError::StatusInconsistent {
                id,
                given: status_name(given).to_string(),
                forced: status_name(forced).to_string(),
            })
        }
        (Some(forced), _) => forced,
        (None, given) => given.unwrap_or(SpStatus::Unknown),
    };

    let label_id = LabelId::new(&spec.id);
    let dual_id = spec
        .dual_id
        .as_deref()
        .map(LabelId::new)
        .unwrap_or_else(|| label_id.clone());
    Ok(CuspidalLabel {
        id: label_id,
        group_size: spec.group_size,
        dim_class: spec.dim_class,
        step,
        dual_id,
        sp_status,
    })
}

/// Exponents of the modulus character of the standard parabolic with
/// Levi blocks of sizes `(r, s)`, on the two blocks: `(s, -r)`.
pub fn delta_exponents(r: i64, s: i64) -> Result<(i64, i64), RegistryError> {
    if r < 1 || s < 1 {
        return Err(RegistryError::File(format!(
            "delta_exponents: block sizes must be positive, got ({r}, {s})"
        )));
    }
    Ok((s, -r))
}
