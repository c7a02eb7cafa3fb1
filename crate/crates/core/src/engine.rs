//! Symbolic evaluation of loop terms over `G ∪ Gu`.
//!
//! Each variable is assigned a coset; a term then evaluates to a coset and a
//! group word, following the four multiplication clauses selected by a
//! quadruple. Comparing both sides of a loop identity under every
//! assignment yields the set of group identities the construction needs.

use std::fmt;

use thiserror::Error;

use crate::term::{LoopIdentity, LoopTerm};
use crate::theta::MultQuadruple;
use crate::word::{canonicalize, GroupIdentity, GroupWord, IdentitySet, Letter, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coset {
    G,
    Gu,
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coset::G => "G",
            Coset::Gu => "Gu",
        })
    }
}

/// A coset for each variable of an identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CosetAssignment {
    vars: Vec<Var>,
    cosets: Vec<Coset>,
}

impl CosetAssignment {
    pub fn new(vars: &[Var], cosets: Vec<Coset>) -> Self {
        assert_eq!(vars.len(), cosets.len());
        CosetAssignment { vars: vars.to_vec(), cosets }
    }

    /// Every assignment, as a binary counter with the first variable most
    /// significant and `Gu` as the digit one.
    pub fn all(vars: &[Var]) -> impl Iterator<Item = CosetAssignment> + '_ {
        let k = vars.len();
        (0..1usize << k).map(move |code| {
            let cosets = (0..k).map(|i| if code >> (k - 1 - i) & 1 == 1 { Coset::Gu } else { Coset::G }).collect();
            CosetAssignment::new(vars, cosets)
        })
    }

    pub fn from_pairs(pairs: &[(char, Coset)]) -> Self {
        let mut sorted: Vec<(Var, Coset)> = pairs.iter().map(|&(c, k)| (c as u8, k)).collect();
        sorted.sort();
        CosetAssignment { vars: sorted.iter().map(|p| p.0).collect(), cosets: sorted.iter().map(|p| p.1).collect() }
    }

    pub fn get(&self, v: Var) -> Coset {
        let i = self.vars.iter().position(|&w| w == v).expect("assignment is total");
        self.cosets[i]
    }

    pub fn count_gu(&self) -> usize {
        self.cosets.iter().filter(|&&c| c == Coset::Gu).count()
    }
}

impl fmt::Display for CosetAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.cosets.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

/// A formal element `w` or `wu` of the doubled loop.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicValue {
    pub coset: Coset,
    pub word: GroupWord,
}

pub fn evaluate_term(t: &LoopTerm, f: &CosetAssignment, q: &MultQuadruple) -> SymbolicValue {
    match t {
        LoopTerm::Var(v) => SymbolicValue { coset: f.get(*v), word: GroupWord::letter(Letter::plain(*v)) },
        LoopTerm::Mul(a, b) => {
            let a = evaluate_term(a, f, q);
            let b = evaluate_term(b, f, q);
            let (map, coset) = match (a.coset, b.coset) {
                (Coset::G, Coset::G) => (q.alpha, Coset::G),
                (Coset::G, Coset::Gu) => (q.beta, Coset::Gu),
                (Coset::Gu, Coset::G) => (q.gamma, Coset::Gu),
                (Coset::Gu, Coset::Gu) => (q.delta, Coset::G),
            };
            SymbolicValue { coset, word: map.delta(&a.word, &b.word) }
        }
    }
}

/// Number of `Gu ∘ Gu` products performed while evaluating `t`.
pub fn delta_usage(t: &LoopTerm, f: &CosetAssignment) -> usize {
    fn walk(t: &LoopTerm, f: &CosetAssignment) -> (Coset, usize) {
        match t {
            LoopTerm::Var(v) => (f.get(*v), 0),
            LoopTerm::Mul(a, b) => {
                let (ca, na) = walk(a, f);
                let (cb, nb) = walk(b, f);
                let both = ca == Coset::Gu && cb == Coset::Gu;
                let coset = if (ca == Coset::Gu) != (cb == Coset::Gu) { Coset::Gu } else { Coset::G };
                (coset, na + nb + both as usize)
            }
        }
    }
    walk(t, f).1
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("identity `{0}` is not strictly balanced")]
    NotStrictlyBalanced(String),
}

/// One assignment's evaluation before and after canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub assignment: CosetAssignment,
    pub coset: Coset,
    pub raw: GroupIdentity,
    pub canonical: GroupIdentity,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f={} : {} = {} -> {}", self.assignment, self.raw.lhs.spaced(), self.raw.rhs.spaced(), self.canonical)
    }
}

pub fn collect_identities(psi: &LoopIdentity, q: &MultQuadruple) -> Result<IdentitySet, EngineError> {
    Ok(collect_with_trace(psi, q)?.into_iter().map(|line| line.canonical).collect())
}

/// Evaluates both sides under every assignment, in counter order.
pub fn collect_with_trace(psi: &LoopIdentity, q: &MultQuadruple) -> Result<Vec<TraceLine>, EngineError> {
    if !psi.is_strictly_balanced() {
        return Err(EngineError::NotStrictlyBalanced(psi.to_string()));
    }
    Ok(CosetAssignment::all(psi.vars())
        .map(|f| {
            let l = evaluate_term(&psi.lhs, &f, q);
            let r = evaluate_term(&psi.rhs, &f, q);
            assert_eq!(l.coset, r.coset, "balanced sides share a coset");
            let raw = GroupIdentity::new(l.word, r.word);
            let canonical = canonicalize(&raw);
            TraceLine { assignment: f, coset: l.coset, raw, canonical }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{builtin, builtin_identities, parse_identity};
    use Coset::{Gu, G};

    fn q(s: &str) -> MultQuadruple {
        s.parse().unwrap()
    }

    fn term(s: &str) -> LoopTerm {
        crate::term::parse_term(s, 0).unwrap()
    }

    #[test]
    fn chein_product_of_two_gu() {
        let f = CosetAssignment::from_pairs(&[('x', Gu), ('y', Gu)]);
        let v = evaluate_term(&term("xy"), &f, &MultQuadruple::chein());
        assert_eq!(v.coset, G);
        assert_eq!(v.word.to_string(), "g0y*x");
    }

    #[test]
    fn dbj_c_identity_right_side() {
        let f = CosetAssignment::from_pairs(&[('x', Gu), ('y', G), ('z', Gu)]);
        let v = evaluate_term(&term("x(y(yz))"), &f, &MultQuadruple::dbj());
        assert_eq!(v.coset, G);
        assert_eq!(v.word.to_string(), "g0xz*y*y*");
    }

    #[test]
    fn single_variable_is_its_letter() {
        let f = CosetAssignment::from_pairs(&[('x', G)]);
        let v = evaluate_term(&term("x"), &f, &MultQuadruple::chein());
        assert_eq!(v, SymbolicValue { coset: G, word: "x".parse().unwrap() });
    }

    #[test]
    fn left_alternative_under_associative_quadruple() {
        let psi = builtin("lalt").unwrap();
        let qa = q("xy,xy,g0xy");
        let lines = collect_with_trace(&psi, &qa).unwrap();
        let line = lines.iter().find(|l| l.assignment.to_string() == "GGu").unwrap();
        assert_eq!(line.raw.lhs.to_string(), "xxy");
        assert_eq!(line.raw.rhs.to_string(), "xxy");
        assert!(line.canonical.is_trivial());
    }

    #[test]
    fn dbj_c_identity_yields_the_square_identity() {
        let psi = builtin("c").unwrap();
        let f = CosetAssignment::from_pairs(&[('x', Gu), ('y', G), ('z', Gu)]);
        let lines = collect_with_trace(&psi, &MultQuadruple::dbj()).unwrap();
        let line = lines.iter().find(|l| l.assignment == f).unwrap();
        let expected: GroupIdentity = "xz*y*y*=y*y*xz*".parse().unwrap();
        assert!(line.canonical == expected || line.canonical == expected.swapped());
        assert_eq!(line.to_string(), "f=GuGGu : g0 y* y* x z* = g0 x z* y* y* -> y*y*xz*=xz*y*y*");
    }

    #[test]
    fn associative_quadruple_gives_only_trivial_identities() {
        for (name, psi) in builtin_identities() {
            let set = collect_identities(&psi, &q("xy,xy,g0xy")).unwrap();
            assert_eq!(set.nontrivial().count(), 0, "{name}");
        }
    }

    #[test]
    fn unbalanced_identities_are_rejected() {
        let psi = parse_identity("xy=yx").unwrap();
        assert_eq!(
            collect_identities(&psi, &MultQuadruple::chein()),
            Err(EngineError::NotStrictlyBalanced("xy=yx".into()))
        );
    }

    #[test]
    fn assignment_order_is_a_binary_counter() {
        let names: Vec<String> = CosetAssignment::all(b"xyz").map(|f| f.to_string()).collect();
        assert_eq!(names[0], "GGG");
        assert_eq!(names[1], "GGGu");
        assert_eq!(names[4], "GuGG");
        assert_eq!(names.len(), 8);
    }

    #[test]
    fn delta_usage_counts_gu_products() {
        let c = builtin("c").unwrap();
        let f = CosetAssignment::from_pairs(&[('x', Gu), ('y', Gu), ('z', G)]);
        assert_eq!(delta_usage(&c.lhs, &f), 1);
        let g = CosetAssignment::from_pairs(&[('x', G), ('y', G), ('z', G)]);
        assert_eq!(delta_usage(&c.lhs, &g), 0);
    }

    #[test]
    fn delta_counts_and_cosets_match_on_both_sides() {
        for (name, psi) in builtin_identities() {
            for f in CosetAssignment::all(psi.vars()) {
                let k: usize = psi.lhs.leaves().iter().filter(|&&v| f.get(v) == Gu).count();
                let (l, r) = (delta_usage(&psi.lhs, &f), delta_usage(&psi.rhs, &f));
                assert_eq!(l, r, "{name} {f}");
                assert_eq!(l, k / 2, "{name} {f}");
                for qd in [MultQuadruple::chein(), MultQuadruple::dbj(), q("yx*,yx,g0y*x*")] {
                    let lv = evaluate_term(&psi.lhs, &f, &qd);
                    assert_eq!(lv.coset == Gu, k % 2 == 1);
                    assert_eq!(lv.word.g0_exp as usize, k / 2);
                }
            }
        }
    }
}
