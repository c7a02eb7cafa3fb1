//! Shape keys (identities up to renaming, per-variable star, global star and
//! side swap) and the library of identities with known meaning.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use super::{Atom, ConditionExpr};
use crate::word::{canonicalize, substitute_unit, GroupIdentity, Letter, Var};

/// Target names for renamed variables.
const TARGETS: &[u8] = b"xyzwvutsrqponmlkjihgfedcba";

/// Identities with more variables than this are only canonicalized.
const MAX_KEY_VARS: usize = 6;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// The least canonical form over all renamings onto `x, y, z, ...`, star
/// flips of single variables, starring both sides and swapping sides. Each
/// of these preserves whether an identity holds in a starred group.
pub fn shape_key(id: &GroupIdentity) -> GroupIdentity {
    let id = canonicalize(id);
    let vars = id.sorted_vars();
    let k = vars.len();
    if k > MAX_KEY_VARS {
        return id;
    }
    let mut best: Option<GroupIdentity> = None;
    for perm in permutations(k) {
        let rename = |v: Var| TARGETS[perm[vars.binary_search(&v).unwrap()]];
        for mask in 0..1usize << k {
            let flipped = id.map_letters(|l| {
                let i = vars.binary_search(&l.var).unwrap();
                Letter::new(rename(l.var), l.starred ^ (mask >> i & 1 == 1))
            });
            for starred in [false, true] {
                let base = if starred { flipped.starred() } else { flipped.clone() };
                for swap in [false, true] {
                    let cand = canonicalize(&if swap { base.swapped() } else { base.clone() });
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
        }
    }
    best.unwrap_or(id)
}

/// Identities whose exact meaning is known, with that meaning.
pub const PATTERNS: &[(&str, &str)] = &[
    ("x*=x", "never"),
    ("xy=yx", "PC"),
    ("xx*y=x*yx", "PC"),
    ("xxy=yxx", "PB"),
    ("xyx*=x*yx", "PB"),
    ("xxy=yx*x*", "PB&PS"),
    ("xx=x*x*", "PS"),
];

fn library() -> &'static HashMap<GroupIdentity, ConditionExpr> {
    static CELL: OnceLock<HashMap<GroupIdentity, ConditionExpr>> = OnceLock::new();
    CELL.get_or_init(|| {
        PATTERNS
            .iter()
            .map(|(src, cond)| {
                let id: GroupIdentity = src.parse().expect("pattern parses");
                (shape_key(&id), cond.parse().expect("pattern condition parses"))
            })
            .collect()
    })
}

/// The library meaning of `id`, if its shape is known.
pub fn lookup(id: &GroupIdentity) -> Option<&'static ConditionExpr> {
    library().get(&shape_key(id))
}

/// A necessary condition for `id`: the conjunction of the meanings of every
/// specialization (some variables set to 1) whose shape is in the library.
/// Also returns the specializations that matched, for tracing.
pub fn necessary_condition(id: &GroupIdentity) -> (ConditionExpr, Vec<(GroupIdentity, ConditionExpr)>) {
    let vars = id.sorted_vars();
    let mut cond = ConditionExpr::always();
    let mut hits = Vec::new();
    let mut seen = BTreeSet::new();
    for mask in 0..1usize << vars.len() {
        let drop: Vec<Var> = (0..vars.len()).filter(|i| mask >> i & 1 == 1).map(|i| vars[i]).collect();
        let special = substitute_unit(id, &drop);
        if special.is_trivial() || !seen.insert(shape_key(&special)) {
            continue;
        }
        if let Some(c) = lookup(&special) {
            cond = cond.and(c);
            hits.push((special, c.clone()));
        }
    }
    (cond, hits)
}

/// The atoms used by the library.
pub fn library_atoms() -> BTreeSet<Atom> {
    library().values().flat_map(|c| c.atoms().iter().copied().collect::<Vec<_>>()).collect()
}
