//! Normal forms of group words under structural assumptions, used to show
//! that an identity holds in every starred group satisfying a condition.
//!
//! Every letter is rewritten with `v* = v^-1 c_v`, where `c_v = v v*` is
//! central. When squares are central as well (PB), `v^-1 = v s_v^-1` with
//! `s_v = v v`, and two plain letters commute up to a central commutator of
//! order two. PS adds `s_v^2 = c_v^2`, since `(vv)* = s_v^-1 c_v^2`.

use std::collections::{BTreeMap, BTreeSet};

use super::Atom;
use crate::word::{canonicalize, GroupIdentity, GroupWord, Letter, Var};

/// Free reduction of `v^±1` letters plus exponents of the central `c_v`.
#[derive(Debug, PartialEq, Eq)]
struct FreeForm {
    g0: i32,
    letters: Vec<(Var, bool)>,
    norms: BTreeMap<Var, i64>,
}

fn free_form(w: &GroupWord) -> FreeForm {
    let mut letters: Vec<(Var, bool)> = Vec::new();
    let mut norms: BTreeMap<Var, i64> = BTreeMap::new();
    for l in &w.letters {
        // (var, inverted)
        let next = (l.var, l.starred);
        if l.starred {
            *norms.entry(l.var).or_default() += 1;
        }
        if letters.last() == Some(&(next.0, !next.1)) {
            letters.pop();
        } else {
            letters.push(next);
        }
    }
    norms.retain(|_, e| *e != 0);
    FreeForm { g0: w.g0_exp, letters, norms }
}

/// Sorted parity product with central monomials in `s_v`, `c_v` and the
/// commutators `[v, w]`.
#[derive(Debug, PartialEq, Eq)]
struct CentralForm {
    g0: i32,
    odd: Vec<Var>,
    squares: BTreeMap<Var, i64>,
    norms: BTreeMap<Var, i64>,
    commutators: BTreeSet<(Var, Var)>,
}

fn central_form(w: &GroupWord, commutative: bool, square_fixed: bool) -> CentralForm {
    let mut odd: Vec<Var> = Vec::new();
    let mut squares: BTreeMap<Var, i64> = BTreeMap::new();
    let mut norms: BTreeMap<Var, i64> = BTreeMap::new();
    let mut commutators = BTreeSet::new();
    for &Letter { var: v, starred } in &w.letters {
        // move v left past every larger odd letter
        let pos = odd.partition_point(|&a| a < v);
        if !commutative {
            for &a in &odd[pos..] {
                if a != v {
                    let pair = (v, a);
                    if !commutators.remove(&pair) {
                        commutators.insert(pair);
                    }
                }
            }
        }
        if odd.get(pos) == Some(&v) {
            odd.remove(pos);
            *squares.entry(v).or_default() += 1;
        } else {
            odd.insert(pos, v);
        }
        if starred {
            *squares.entry(v).or_default() -= 1;
            *norms.entry(v).or_default() += 1;
        }
    }
    if square_fixed {
        for (v, s) in squares.iter_mut() {
            let k = s.div_euclid(2);
            *s -= 2 * k;
            *norms.entry(*v).or_default() += 2 * k;
        }
    }
    squares.retain(|_, e| *e != 0);
    norms.retain(|_, e| *e != 0);
    CentralForm { g0: w.g0_exp, odd, squares, norms, commutators }
}

/// Rewrites `v*v*` to `vv` until stable, canonicalizing in between.
fn square_fixed_rewrite(id: &GroupIdentity) -> GroupIdentity {
    let rewrite = |w: &GroupWord| {
        let mut out: Vec<Letter> = Vec::with_capacity(w.letters.len());
        for &l in &w.letters {
            if l.starred && out.last() == Some(&l) {
                out.pop();
                out.push(l.star());
                out.push(l.star());
            } else {
                out.push(l);
            }
        }
        GroupWord::new(w.g0_exp, out)
    };
    let mut cur = canonicalize(id);
    loop {
        let next = canonicalize(&GroupIdentity::new(rewrite(&cur.lhs), rewrite(&cur.rhs)));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// True if `id` provably holds in every admissible starred group whose group
/// satisfies all of `atoms`. A false answer proves nothing.
pub fn holds_under(id: &GroupIdentity, atoms: &BTreeSet<Atom>) -> bool {
    let id = canonicalize(id);
    if id.is_trivial() {
        return true;
    }
    let pc = atoms.contains(&Atom::PC);
    let pb = pc || atoms.contains(&Atom::PB);
    let ps = atoms.contains(&Atom::PS);
    if pb {
        return central_form(&id.lhs, pc, ps) == central_form(&id.rhs, pc, ps);
    }
    if ps {
        let r = square_fixed_rewrite(&id);
        return r.is_trivial() || free_form(&r.lhs) == free_form(&r.rhs);
    }
    free_form(&id.lhs) == free_form(&id.rhs)
}
