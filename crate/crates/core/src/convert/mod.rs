//! Merge-convertible code constructions, the conversion executor, and
//! optimality verification.

mod engine;
mod execute;
mod lrc_merge;
mod mds_merge;
mod mds_to_lrc;
mod verify;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bounds::{BoundsError, MergeParams};
use crate::code::{CodeError, CodeJson, LinearCode, LocalityCertificate};
use crate::field::{FieldCtx, FieldElem, FieldError, FieldSpec};
use crate::matrix::MatError;
use crate::pgl::{GroupError, GroupSpec, GroupTable};

pub use execute::{execute, AccessReport, AccessTrace};
pub use lrc_merge::{build_lrc_merge, lrc_census, LrcCensus, LrcMergeParams};
pub use mds_merge::{build_mds_merge, MdsMergeParams};
pub use mds_to_lrc::{build_mds_to_lrc, MdsToLrcParams};
pub use verify::{verify_convertible, ComponentCheck, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConvertError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("need {need} free orbits, only {have} available")]
    InsufficientOrbits { need: usize, have: usize },
    #[error("construction self-check failed: {0}")]
    Construction(String),
    #[error("input {0} is not a codeword of its initial code")]
    NotACodeword(usize),
    #[error("converted word is not a codeword of the final code")]
    FinalMembership,
    #[error("plan mismatch: {0}")]
    PlanMismatch(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

impl ConvertError {
    /// Whether the error comes from an exhausted distance-check budget.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, ConvertError::Code(CodeError::Infeasible(_)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    MdsMerge,
    LrcMerge,
    MdsToLrc,
}

/// Declared family of a component code, checked by [`verify_convertible`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Mds,
    Lrc { cert: LocalityCertificate },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub code: LinearCode,
    pub family: Family,
}

/// One summand of a written symbol: `coeff * c_initial[coord]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub initial: usize,
    pub coord: usize,
    pub coeff: FieldElem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrittenSymbol {
    pub final_coord: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnchangedPair {
    pub initial_coord: usize,
    pub final_coord: usize,
}

/// Recovers `c_initial[target]` from stored symbols of the same stripe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRecipe {
    pub initial: usize,
    pub target: usize,
    pub sources: Vec<(usize, FieldElem)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConversionPlan {
    /// Per initial code, the symbols copied verbatim into the final stripe.
    pub unchanged: Vec<Vec<UnchangedPair>>,
    pub written: Vec<WrittenSymbol>,
    /// Local reconstructions; empty when every used symbol is read directly.
    pub recipes: Vec<LocalRecipe>,
}

impl ConversionPlan {
    /// Coordinates of each initial code used by the written symbols.
    pub fn read_sets(&self, t: usize) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); t];
        for w in &self.written {
            for term in &w.terms {
                sets[term.initial].push(term.coord);
            }
        }
        for s in sets.iter_mut() {
            s.sort_unstable();
            s.dedup();
        }
        sets
    }

    /// Coordinates actually fetched from storage, after local reconstruction.
    pub fn storage_reads(&self, t: usize) -> Vec<Vec<usize>> {
        let mut sets = self.read_sets(t);
        for rec in &self.recipes {
            let s = &mut sets[rec.initial];
            s.retain(|&c| c != rec.target);
            s.extend(rec.sources.iter().map(|&(c, _)| c));
        }
        for s in sets.iter_mut() {
            s.sort_unstable();
            s.dedup();
        }
        sets
    }

    pub fn written_coords(&self) -> Vec<usize> {
        self.written.iter().map(|w| w.final_coord).collect()
    }
}

/// A family of initial codes, a final code, and a plan converting between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvertibleCode {
    pub kind: ConstructionKind,
    pub initial: Vec<Component>,
    pub final_code: Component,
    pub plan: ConversionPlan,
    pub params: MergeParams,
    /// Every canonical choice made by the builder.
    pub provenance: Value,
}

impl ConvertibleCode {
    pub fn field(&self) -> &FieldCtx {
        self.final_code.code.field()
    }

    pub fn t(&self) -> usize {
        self.initial.len()
    }

    /// Checks the structural invariants tying the plan to the codes.
    pub fn validate(&self) -> Result<(), ConvertError> {
        let t = self.t();
        let nf = self.final_code.code.n();
        let mismatch = |m: String| Err(ConvertError::PlanMismatch(m));
        let ksum: usize = self.initial.iter().map(|c| c.code.k()).sum();
        if ksum != self.final_code.code.k() {
            return mismatch(format!("initial dimensions sum to {ksum}, final has {}", self.final_code.code.k()));
        }
        if self.plan.unchanged.len() != t {
            return mismatch("unchanged sets do not match the number of initial codes".into());
        }
        let mut owner = vec![false; nf];
        let mut claim = |c: usize| -> Result<(), ConvertError> {
            if c >= nf {
                return Err(ConvertError::PlanMismatch(format!("final coordinate {c} out of range")));
            }
            if std::mem::replace(&mut owner[c], true) {
                return Err(ConvertError::PlanMismatch(format!("final coordinate {c} assigned twice")));
            }
            Ok(())
        };
        for (i, pairs) in self.plan.unchanged.iter().enumerate() {
            let ic = &self.initial[i].code;
            for p in pairs {
                if p.initial_coord >= ic.n() {
                    return mismatch(format!("initial {i} coordinate {} out of range", p.initial_coord));
                }
                claim(p.final_coord)?;
                if ic.labels()[p.initial_coord] != self.final_code.code.labels()[p.final_coord] {
                    return mismatch(format!("label mismatch for initial {i} coordinate {}", p.initial_coord));
                }
            }
        }
        for w in &self.plan.written {
            claim(w.final_coord)?;
            for term in &w.terms {
                if term.initial >= t || term.coord >= self.initial[term.initial].code.n() {
                    return mismatch(format!("term references missing coordinate {}/{}", term.initial, term.coord));
                }
                if term.coeff.is_zero() {
                    return mismatch("zero coefficient in plan".into());
                }
            }
        }
        if let Some(c) = owner.iter().position(|&o| !o) {
            return mismatch(format!("final coordinate {c} is neither unchanged nor written"));
        }
        let reads = self.plan.read_sets(t);
        let mut targets: HashSet<(usize, usize)> = HashSet::new();
        for rec in &self.plan.recipes {
            if rec.initial >= t || !targets.insert((rec.initial, rec.target)) {
                return mismatch("duplicate or invalid recipe".into());
            }
        }
        for rec in &self.plan.recipes {
            if !reads[rec.initial].contains(&rec.target) {
                return mismatch(format!("recipe target {} of initial {} is never used", rec.target, rec.initial));
            }
            if rec.sources.iter().any(|(c, _)| targets.contains(&(rec.initial, *c))) {
                return mismatch("recipe sources must be stored symbols".into());
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> BundleJson {
        let comp = |c: &Component| ComponentJson { code: c.code.to_json(), family: c.family.clone() };
        BundleJson {
            kind: self.kind,
            field: self.field().spec(),
            initial: self.initial.iter().map(comp).collect(),
            final_code: comp(&self.final_code),
            plan: PlanJson::from_plan(&self.plan),
            params: self.params.clone(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_json(j: &BundleJson) -> Result<Self, ConvertError> {
        let field = FieldCtx::from_spec(&j.field)?;
        let comp = |c: &ComponentJson| -> Result<Component, ConvertError> {
            Ok(Component { code: LinearCode::from_json(&field, &c.code)?, family: c.family.clone() })
        };
        let cc = ConvertibleCode {
            kind: j.kind,
            initial: j.initial.iter().map(comp).collect::<Result<_, _>>()?,
            final_code: comp(&j.final_code)?,
            plan: j.plan.to_plan(&field)?,
            params: j.params.clone(),
            provenance: j.provenance.clone(),
        };
        cc.validate()?;
        Ok(cc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub code: CodeJson,
    #[serde(flatten)]
    pub family: Family,
}

/// Serialized plan. Terms are `[initial, coord, coeff]`, sources `[coord, coeff]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanJson {
    pub unchanged: Vec<Vec<UnchangedPair>>,
    pub written: Vec<WrittenJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub recipes: Vec<RecipeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WrittenJson {
    pub final_coord: usize,
    pub terms: Vec<[i64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeJson {
    pub initial: usize,
    pub target: usize,
    pub sources: Vec<[i64; 2]>,
}

impl PlanJson {
    fn from_plan(p: &ConversionPlan) -> Self {
        PlanJson {
            unchanged: p.unchanged.clone(),
            written: p
                .written
                .iter()
                .map(|w| WrittenJson {
                    final_coord: w.final_coord,
                    terms: w.terms.iter().map(|t| [t.initial as i64, t.coord as i64, t.coeff.value() as i64]).collect(),
                })
                .collect(),
            recipes: p
                .recipes
                .iter()
                .map(|r| RecipeJson {
                    initial: r.initial,
                    target: r.target,
                    sources: r.sources.iter().map(|&(c, a)| [c as i64, a.value() as i64]).collect(),
                })
                .collect(),
        }
    }

    fn to_plan(&self, field: &FieldCtx) -> Result<ConversionPlan, ConvertError> {
        let idx = |v: i64| -> Result<usize, ConvertError> {
            usize::try_from(v).map_err(|_| ConvertError::PlanMismatch(format!("negative index {v}")))
        };
        let written = self
            .written
            .iter()
            .map(|w| -> Result<WrittenSymbol, ConvertError> {
                let terms = w
                    .terms
                    .iter()
                    .map(|&[i, c, a]| Ok(Term { initial: idx(i)?, coord: idx(c)?, coeff: field.elem(a)? }))
                    .collect::<Result<_, ConvertError>>()?;
                Ok(WrittenSymbol { final_coord: w.final_coord, terms })
            })
            .collect::<Result<_, _>>()?;
        let recipes = self
            .recipes
            .iter()
            .map(|r| -> Result<LocalRecipe, ConvertError> {
                let sources = r
                    .sources
                    .iter()
                    .map(|&[c, a]| Ok((idx(c)?, field.elem(a)?)))
                    .collect::<Result<_, ConvertError>>()?;
                Ok(LocalRecipe { initial: r.initial, target: r.target, sources })
            })
            .collect::<Result<_, _>>()?;
        Ok(ConversionPlan { unchanged: self.unchanged.clone(), written, recipes })
    }
}

/// A [`ConvertibleCode`] as a single JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleJson {
    pub kind: ConstructionKind,
    pub field: FieldSpec,
    pub initial: Vec<ComponentJson>,
    #[serde(rename = "final")]
    pub final_code: ComponentJson,
    pub plan: PlanJson,
    pub params: MergeParams,
    pub provenance: Value,
}

/// A complete, serializable request for one of the three constructions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructSpec {
    MdsMerge { field: FieldSpec, group: GroupSpec, params: MdsMergeParams },
    LrcMerge { field: FieldSpec, group: GroupSpec, subgroup: GroupSpec, params: LrcMergeParams },
    MdsToLrc { field: FieldSpec, params: MdsToLrcParams },
}

impl ConstructSpec {
    pub fn build(&self) -> Result<ConvertibleCode, ConvertError> {
        match self {
            ConstructSpec::MdsMerge { field, group, params } => {
                let f = FieldCtx::from_spec(field)?;
                build_mds_merge(&f, &GroupTable::from_spec(&f, group)?, params)
            }
            ConstructSpec::LrcMerge { field, group, subgroup, params } => {
                let f = FieldCtx::from_spec(field)?;
                let g = GroupTable::from_spec(&f, group)?;
                let h = GroupTable::from_spec(&f, subgroup)?;
                build_lrc_merge(&f, &g, &h, params)
            }
            ConstructSpec::MdsToLrc { field, params } => build_mds_to_lrc(&FieldCtx::from_spec(field)?, params),
        }
    }
}
