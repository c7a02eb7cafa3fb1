//! A small set of starred groups realizing distinct (PC, PB, PS) signatures,
//! used to cross-check symbolic classifications by brute force.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::group::{Elem, FiniteGroup, GroupError};
use crate::star::{enumerate_star_maps, g0_candidates, Signature, StarMap, StarredGroup};

/// Named groups of order at most 16 searched for witnesses, in search order.
pub const CANDIDATE_GROUPS: &[&str] = &[
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:2xcyclic:2",
    "cyclic:5",
    "cyclic:6",
    "dihedral:3",
    "cyclic:7",
    "cyclic:8",
    "cyclic:4xcyclic:2",
    "cyclic:2xcyclic:2xcyclic:2",
    "dihedral:4",
    "quaternion:8",
    "cyclic:9",
    "cyclic:3xcyclic:3",
    "cyclic:10",
    "dihedral:5",
    "cyclic:11",
    "cyclic:12",
    "cyclic:6xcyclic:2",
    "dihedral:6",
    "cyclic:13",
    "cyclic:14",
    "dihedral:7",
    "cyclic:15",
    "cyclic:16",
    "cyclic:8xcyclic:2",
    "cyclic:4xcyclic:4",
    "cyclic:4xcyclic:2xcyclic:2",
    "cyclic:2xcyclic:2xcyclic:2xcyclic:2",
    "dihedral:8",
    "dihedral:4xcyclic:2",
    "quaternion:8xcyclic:2",
    "modular:16",
];

/// Members kept per signature with `g0 = 1`, before one extra member with
/// a nontrivial `g0`.
const PER_SIGNATURE: usize = 2;

#[derive(Clone, Debug)]
pub struct Witness {
    pub descriptor: String,
    pub starred: StarredGroup,
    pub signature: Signature,
}

impl Witness {
    pub fn label(&self) -> String {
        let star = if self.starred.star().is_inversion(self.starred.group()) {
            "inverse".to_string()
        } else {
            format!("{:?}", self.starred.star().as_slice())
        };
        format!("{} star={} g0={}", self.descriptor, star, self.starred.g0())
    }
}

#[derive(Clone, Debug)]
pub struct WitnessBattery {
    members: Vec<Witness>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BatteryFile {
    searched: Vec<String>,
    unrealized: Vec<String>,
    #[serde(default)]
    member: Vec<MemberRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MemberRecord {
    group: String,
    star: Vec<Elem>,
    g0: Elem,
    signature: String,
}

const ARTIFACT: &str = include_str!("../../data/battery.toml");

/// Every signature in a fixed order.
pub fn all_signatures() -> Vec<Signature> {
    let mut out = Vec::new();
    for pc in [true, false] {
        for pb in [true, false] {
            for ps in [true, false] {
                out.push(Signature { pc, pb, ps });
            }
        }
    }
    out
}

/// Signatures ruled out by PC ⇒ PB.
pub fn is_consistent(sig: Signature) -> bool {
    !sig.pc || sig.pb
}

impl WitnessBattery {
    /// The checked-in battery.
    pub fn standard() -> &'static WitnessBattery {
        static CELL: OnceLock<WitnessBattery> = OnceLock::new();
        CELL.get_or_init(|| WitnessBattery::parse(ARTIFACT).expect("checked-in battery is valid"))
    }

    pub fn members(&self) -> &[Witness] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn signatures(&self) -> Vec<Signature> {
        let mut s: Vec<Signature> = self.members.iter().map(|m| m.signature).collect();
        s.sort();
        s.dedup();
        s
    }

    /// Searches [`CANDIDATE_GROUPS`] for witnesses; stars are tried with
    /// inversion first, then in enumeration order.
    pub fn discover() -> Result<(WitnessBattery, Vec<Signature>), GroupError> {
        let mut plain: BTreeMap<Signature, Vec<Witness>> = BTreeMap::new();
        let mut shifted: BTreeMap<Signature, Witness> = BTreeMap::new();
        for &desc in CANDIDATE_GROUPS {
            let group = Arc::new(FiniteGroup::from_descriptor(desc)?);
            for star in ordered_stars(&group) {
                let signature = Signature::of(&group, &star);
                let slot = plain.entry(signature).or_default();
                if slot.len() < PER_SIGNATURE {
                    slot.push(Witness {
                        descriptor: desc.to_string(),
                        starred: StarredGroup::new(group.clone(), star.clone(), 0)?,
                        signature,
                    });
                }
                if let Entry::Vacant(e) = shifted.entry(signature) {
                    if let Some(c) = g0_candidates(&group, &star).into_iter().find(|c| c.index() != 0) {
                        e.insert(Witness {
                            descriptor: desc.to_string(),
                            starred: StarredGroup::new(group.clone(), star.clone(), c.index())?,
                            signature,
                        });
                    }
                }
            }
        }
        let mut members = Vec::new();
        for sig in all_signatures() {
            members.extend(plain.remove(&sig).unwrap_or_default());
            members.extend(shifted.remove(&sig));
        }
        let found: Vec<Signature> = members.iter().map(|m| m.signature).collect();
        let unrealized = all_signatures().into_iter().filter(|s| is_consistent(*s) && !found.contains(s)).collect();
        Ok((WitnessBattery { members }, unrealized))
    }

    /// Serializes a discovered battery in the artifact format.
    pub fn render(&self, unrealized: &[Signature]) -> String {
        let file = BatteryFile {
            searched: CANDIDATE_GROUPS.iter().map(|s| s.to_string()).collect(),
            unrealized: unrealized.iter().map(|s| s.to_string()).collect(),
            member: self
                .members
                .iter()
                .map(|m| MemberRecord {
                    group: m.descriptor.clone(),
                    star: m.starred.star().as_slice().to_vec(),
                    g0: m.starred.g0(),
                    signature: m.signature.to_string(),
                })
                .collect(),
        };
        let mut out = String::new();
        out.push_str("# Witness battery, regenerated by `bolmoufang battery`.\n");
        out.push_str("# Signature table:\n");
        for m in &self.members {
            let _ = writeln!(out, "#   {:<12} {}", m.signature.to_string(), m.label());
        }
        out.push('\n');
        out.push_str(&toml::to_string(&file).expect("serializable"));
        out
    }

    pub fn parse(text: &str) -> Result<WitnessBattery, String> {
        let file: BatteryFile = toml::from_str(text).map_err(|e| e.to_string())?;
        let mut members = Vec::new();
        for rec in file.member {
            let group = Arc::new(FiniteGroup::from_descriptor(&rec.group).map_err(|e| e.to_string())?);
            let star = StarMap::new(&group, rec.star).map_err(|e| e.to_string())?;
            let signature = Signature::of(&group, &star);
            if signature.to_string() != rec.signature {
                return Err(format!("{}: recorded signature {} but found {}", rec.group, rec.signature, signature));
            }
            if !star.is_nonidentical() {
                return Err(format!("{}: battery stars must be nonidentical", rec.group));
            }
            let starred = StarredGroup::new(group, star, rec.g0).map_err(|e| e.to_string())?;
            members.push(Witness { descriptor: rec.group, starred, signature });
        }
        Ok(WitnessBattery { members })
    }
}

/// Nonidentical stars, inversion first.
fn ordered_stars(group: &FiniteGroup) -> Vec<StarMap> {
    let mut stars: Vec<StarMap> = enumerate_star_maps(group).into_iter().filter(|s| s.is_nonidentical()).collect();
    stars.sort_by_key(|s| !s.is_inversion(group));
    stars
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn artifact_is_up_to_date() {
        let (battery, unrealized) = WitnessBattery::discover().unwrap();
        assert_eq!(battery.render(&unrealized), ARTIFACT);
    }

    #[test]
    fn required_signatures_are_present() {
        let battery = WitnessBattery::standard();
        let sigs = battery.signatures();
        for (pc, pb, ps) in
            [(true, true, true), (true, true, false), (false, true, true), (false, true, false), (false, false, false)]
        {
            assert!(sigs.contains(&Signature { pc, pb, ps }), "{pc} {pb} {ps}");
        }
        assert!(battery.len() >= 5);
        for m in battery.members() {
            assert!(m.starred.star().is_nonidentical());
            assert!(m.starred.order() <= 16);
        }
    }

    #[test]
    fn battery_contains_a_nontrivial_g0() {
        assert!(WitnessBattery::standard().members().iter().any(|m| m.starred.g0() != 0));
    }
}
