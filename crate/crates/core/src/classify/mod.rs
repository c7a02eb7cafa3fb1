//! What a group identity says about the starred group it must hold in.
//!
//! Conditions are conjunctions of the structural atoms PC (commutative),
//! PB (all squares central) and PS (squares are star-fixed), possibly with
//! identities that could not be reduced further, or `never`.

pub mod battery;
pub mod normal_form;
pub mod patterns;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::star::{predicate_pb, predicate_pc, predicate_ps, StarredGroup};
use crate::word::{GroupIdentity, IdentitySet};
pub use battery::{Witness, WitnessBattery};
pub use normal_form::holds_under;
pub use patterns::{necessary_condition, shape_key};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    PC,
    PB,
    PS,
}

impl Atom {
    pub fn holds(self, sg: &StarredGroup) -> bool {
        match self {
            Atom::PC => predicate_pc(sg.group()),
            Atom::PB => predicate_pb(sg.group()),
            Atom::PS => predicate_ps(sg.group(), sg.star()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionExpr {
    Never,
    /// All atoms and all raw identities; empty means `always`.
    Conj {
        atoms: BTreeSet<Atom>,
        raws: BTreeSet<GroupIdentity>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("unknown condition `{0}`")]
    Unknown(String),
    #[error("malformed raw identity in `{0}`")]
    BadRaw(String),
}

impl ConditionExpr {
    pub fn always() -> Self {
        ConditionExpr::Conj { atoms: BTreeSet::new(), raws: BTreeSet::new() }
    }

    pub fn never() -> Self {
        ConditionExpr::Never
    }

    pub fn atom(a: Atom) -> Self {
        ConditionExpr::from_atoms([a])
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        ConditionExpr::Conj { atoms: atoms.into_iter().collect(), raws: BTreeSet::new() }.normalized()
    }

    /// An identity kept verbatim, stored by its shape key.
    pub fn raw(id: &GroupIdentity) -> Self {
        let key = shape_key(id);
        let mut raws = BTreeSet::new();
        if !key.is_trivial() {
            raws.insert(key);
        }
        ConditionExpr::Conj { atoms: BTreeSet::new(), raws }
    }

    /// PC implies PB (an abelian group is its own center), so PB is dropped
    /// next to PC.
    fn normalized(self) -> Self {
        match self {
            ConditionExpr::Never => ConditionExpr::Never,
            ConditionExpr::Conj { mut atoms, raws } => {
                if atoms.contains(&Atom::PC) {
                    atoms.remove(&Atom::PB);
                }
                ConditionExpr::Conj { atoms, raws }
            }
        }
    }

    pub fn and(&self, other: &ConditionExpr) -> ConditionExpr {
        match (self, other) {
            (ConditionExpr::Never, _) | (_, ConditionExpr::Never) => ConditionExpr::Never,
            (ConditionExpr::Conj { atoms: a, raws: r }, ConditionExpr::Conj { atoms: b, raws: s }) => {
                ConditionExpr::Conj { atoms: a | b, raws: r | s }.normalized()
            }
        }
    }

    pub fn is_never(&self) -> bool {
        matches!(self, ConditionExpr::Never)
    }

    pub fn is_always(&self) -> bool {
        matches!(self, ConditionExpr::Conj { atoms, raws } if atoms.is_empty() && raws.is_empty())
    }

    pub fn has_raw(&self) -> bool {
        matches!(self, ConditionExpr::Conj { raws, .. } if !raws.is_empty())
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        match self {
            ConditionExpr::Never => BTreeSet::new(),
            ConditionExpr::Conj { atoms, .. } => atoms.clone(),
        }
    }

    pub fn raws(&self) -> BTreeSet<GroupIdentity> {
        match self {
            ConditionExpr::Never => BTreeSet::new(),
            ConditionExpr::Conj { raws, .. } => raws.clone(),
        }
    }

    /// `self` provably implies `other`: atoms by inclusion (PC covering PB),
    /// raw identities by equality or by a normal-form proof from the atoms.
    pub fn implies(&self, other: &ConditionExpr) -> bool {
        match (self, other) {
            (ConditionExpr::Never, _) => true,
            (_, ConditionExpr::Never) => false,
            (ConditionExpr::Conj { atoms: a, raws: r }, ConditionExpr::Conj { atoms: b, raws: s }) => {
                let covers = |x: &Atom| a.contains(x) || (*x == Atom::PB && a.contains(&Atom::PC));
                b.iter().all(covers) && s.iter().all(|id| r.contains(id) || holds_under(id, a))
            }
        }
    }
}

impl fmt::Display for ConditionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionExpr::Never => f.write_str("never"),
            ConditionExpr::Conj { atoms, raws } => {
                let mut parts: Vec<String> = Vec::new();
                if !atoms.is_empty() {
                    parts.push(atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("&"));
                }
                parts.extend(raws.iter().map(|r| format!("raw: {r}")));
                if parts.is_empty() {
                    f.write_str("always")
                } else {
                    f.write_str(&parts.join(" & "))
                }
            }
        }
    }
}

impl FromStr for ConditionExpr {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "never" => return Ok(ConditionExpr::Never),
            "always" => return Ok(ConditionExpr::always()),
            _ => {}
        }
        let mut cond = ConditionExpr::always();
        for part in s.split('&').map(str::trim) {
            let next = match part {
                "PC" => ConditionExpr::atom(Atom::PC),
                "PB" => ConditionExpr::atom(Atom::PB),
                "PS" => ConditionExpr::atom(Atom::PS),
                _ => match part.strip_prefix("raw:") {
                    Some(src) => ConditionExpr::raw(&src.trim().parse().map_err(|_| ConditionError::BadRaw(s.into()))?),
                    None => return Err(ConditionError::Unknown(s.into())),
                },
            };
            cond = cond.and(&next);
        }
        Ok(cond)
    }
}

pub fn condition_holds(c: &ConditionExpr, sg: &StarredGroup) -> bool {
    match c {
        ConditionExpr::Never => false,
        ConditionExpr::Conj { atoms, raws } => atoms.iter().all(|a| a.holds(sg)) && raws.iter().all(|id| id.holds(sg)),
    }
}

pub fn identity_holds(id: &GroupIdentity, sg: &StarredGroup) -> bool {
    id.holds(sg)
}

/// Brute-force truth of `id` on every battery member.
pub fn signature_probe(id: &GroupIdentity, battery: &WitnessBattery) -> Vec<bool> {
    battery.members().iter().map(|m| id.holds(&m.starred)).collect()
}

/// How a classification was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Trivial,
    Pattern,
    NormalForm,
    Raw,
    /// The battery contradicted the symbolic answer.
    Vetoed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub condition: ConditionExpr,
    pub stage: Stage,
}

/// Classifies identities, checking every symbolic answer on a battery.
#[derive(Debug, Clone, Copy)]
pub struct Classifier<'a> {
    battery: &'a WitnessBattery,
}

impl Default for Classifier<'static> {
    fn default() -> Self {
        Classifier { battery: WitnessBattery::standard() }
    }
}

impl<'a> Classifier<'a> {
    pub fn new(battery: &'a WitnessBattery) -> Self {
        Classifier { battery }
    }

    pub fn battery(&self) -> &'a WitnessBattery {
        self.battery
    }

    /// The symbolic answer before any battery check.
    pub fn classify_symbolic(&self, id: &GroupIdentity) -> Classification {
        let id = crate::word::canonicalize(id);
        if id.is_trivial() {
            return Classification { condition: ConditionExpr::always(), stage: Stage::Trivial };
        }
        let (necessary, _) = necessary_condition(&id);
        match &necessary {
            ConditionExpr::Never => Classification { condition: necessary, stage: Stage::Pattern },
            c if !c.is_always() && patterns::lookup(&id).is_some() => {
                Classification { condition: necessary, stage: Stage::Pattern }
            }
            c if holds_under(&id, &c.atoms()) => Classification { condition: necessary, stage: Stage::NormalForm },
            _ => Classification { condition: ConditionExpr::raw(&id), stage: Stage::Raw },
        }
    }

    pub fn classify(&self, id: &GroupIdentity) -> Classification {
        let symbolic = self.classify_symbolic(id);
        if symbolic.condition.has_raw() || self.agrees(id, &symbolic.condition) {
            symbolic
        } else {
            Classification { condition: ConditionExpr::raw(id), stage: Stage::Vetoed }
        }
    }

    /// `c` predicts the brute-force truth of `id` on every member.
    pub fn agrees(&self, id: &GroupIdentity, c: &ConditionExpr) -> bool {
        self.battery.members().iter().all(|m| condition_holds(c, &m.starred) == id.holds(&m.starred))
    }

    pub fn classify_set(&self, set: &IdentitySet) -> ConditionExpr {
        absorb_raws(&set.iter().fold(ConditionExpr::always(), |acc, id| acc.and(&self.classify(id).condition)))
    }
}

/// Replaces each raw identity of a conjunction by its necessary atoms when
/// those, together with the conjunction's atoms, are enough to prove it.
pub fn absorb_raws(c: &ConditionExpr) -> ConditionExpr {
    let ConditionExpr::Conj { atoms, raws } = c else {
        return ConditionExpr::Never;
    };
    let mut out = ConditionExpr::from_atoms(atoms.iter().copied());
    let mut kept = Vec::new();
    for r in raws {
        let (needed, _) = necessary_condition(r);
        let with = out.and(&needed);
        if !needed.is_never() && holds_under(r, &with.atoms()) {
            out = with;
        } else {
            kept.push(r);
        }
    }
    kept.into_iter().fold(out, |acc, r| acc.and(&ConditionExpr::raw(r)))
}

pub fn classify_identity(id: &GroupIdentity) -> ConditionExpr {
    Classifier::default().classify(id).condition
}

pub fn classify_set(set: &IdentitySet) -> ConditionExpr {
    Classifier::default().classify_set(set)
}
