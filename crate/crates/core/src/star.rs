//! Involutory antiautomorphisms with central norms, admissible `g0` choices,
//! and the structural predicates PC, PB and PS.

use std::fmt;
use std::sync::Arc;

use crate::group::{Elem, FiniteGroup, GroupError};

/// An involutory antiautomorphism `g -> g*` with `g g*` central.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarMap {
    map: Vec<Elem>,
}

impl fmt::Debug for StarMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StarMap{:?}", self.map)
    }
}

impl StarMap {
    /// Validates `map` against `group`.
    pub fn new(group: &FiniteGroup, map: Vec<Elem>) -> Result<Self, GroupError> {
        let n = group.order();
        if map.len() != n {
            return Err(GroupError::StarLength { got: map.len(), expected: n });
        }
        if let Some((g, &h)) = map.iter().enumerate().find(|(_, &h)| h >= n) {
            return Err(GroupError::StarOutOfRange(g, h));
        }
        for g in 0..n {
            if map[map[g]] != g {
                return Err(GroupError::NotInvolutory(g, map[map[g]]));
            }
        }
        for g in 0..n {
            for h in 0..n {
                if map[group.mul(g, h)] != group.mul(map[h], map[g]) {
                    return Err(GroupError::NotAntiautomorphism(g, h));
                }
            }
        }
        if let Some(g) = (0..n).find(|&g| !group.is_central(group.mul(g, map[g]))) {
            return Err(GroupError::NormNotCentral(g));
        }
        Ok(StarMap { map })
    }

    pub fn inversion(group: &FiniteGroup) -> Self {
        StarMap { map: group.elements().map(|g| group.inv(g)).collect() }
    }

    /// The identity map; admissible only on abelian groups.
    pub fn identity_map(group: &FiniteGroup) -> Result<Self, GroupError> {
        if !predicate_pc(group) {
            return Err(GroupError::IdentityStarNonabelian);
        }
        Ok(StarMap { map: group.elements().collect() })
    }

    #[inline]
    pub fn apply(&self, g: Elem) -> Elem {
        self.map[g]
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.map
    }

    /// True iff some element is moved.
    pub fn is_nonidentical(&self) -> bool {
        self.map.iter().enumerate().any(|(g, &h)| g != h)
    }

    pub fn is_inversion(&self, group: &FiniteGroup) -> bool {
        self.map.iter().enumerate().all(|(g, &h)| group.inv(g) == h)
    }
}

/// A star-fixed central element, the admissible choices for `g0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CentralElement(Elem);

impl CentralElement {
    pub fn index(self) -> Elem {
        self.0
    }
}

/// A group together with an admissible star map and `g0`: the input data of
/// the doubling construction.
#[derive(Clone, Debug)]
pub struct StarredGroup {
    group: Arc<FiniteGroup>,
    star: StarMap,
    g0: CentralElement,
}

impl StarredGroup {
    pub fn new(group: Arc<FiniteGroup>, star: StarMap, g0: Elem) -> Result<Self, GroupError> {
        let star = StarMap::new(&group, star.map)?;
        let g0 = central_element(&group, &star, g0)?;
        Ok(StarredGroup { group, star, g0 })
    }

    /// Shorthand for the inversion star and `g0 = 1`.
    pub fn with_inversion(group: FiniteGroup) -> Self {
        let star = StarMap::inversion(&group);
        StarredGroup { group: Arc::new(group), star, g0: CentralElement(0) }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn star(&self) -> &StarMap {
        &self.star
    }

    pub fn g0(&self) -> Elem {
        self.g0.index()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.group.mul(a, b)
    }

    #[inline]
    pub fn apply_star(&self, g: Elem) -> Elem {
        self.star.apply(g)
    }

    pub fn g0_pow(&self, k: i64) -> Elem {
        self.group.pow(self.g0(), k)
    }
}

fn central_element(group: &FiniteGroup, star: &StarMap, g0: Elem) -> Result<CentralElement, GroupError> {
    if g0 >= group.order() {
        return Err(GroupError::G0OutOfRange(g0));
    }
    if !group.is_central(g0) {
        return Err(GroupError::G0NotCentral(g0));
    }
    if star.apply(g0) != g0 {
        return Err(GroupError::G0NotFixed(g0));
    }
    Ok(CentralElement(g0))
}

/// All central elements fixed by `star`, in increasing order.
pub fn g0_candidates(group: &FiniteGroup, star: &StarMap) -> Vec<CentralElement> {
    group.center().iter().filter(|&&z| star.apply(z) == z).map(|&z| CentralElement(z)).collect()
}

/// G is commutative.
pub fn predicate_pc(group: &FiniteGroup) -> bool {
    group.center().len() == group.order()
}

/// G/Z(G) is an elementary abelian 2-group, i.e. every square is central.
pub fn predicate_pb(group: &FiniteGroup) -> bool {
    group.elements().all(|g| group.is_central(group.mul(g, g)))
}

/// `(gg)* = gg` for every g.
pub fn predicate_ps(group: &FiniteGroup, star: &StarMap) -> bool {
    group.elements().all(|g| {
        let sq = group.mul(g, g);
        star.apply(sq) == sq
    })
}

/// Every admissible star map of `group`, sorted by the map array.
///
/// Groups of order at most 8 are searched over all bijections; larger groups
/// go through automorphisms composed with inversion.
pub fn enumerate_star_maps(group: &FiniteGroup) -> Vec<StarMap> {
    if group.order() <= 8 {
        star_maps_exhaustive(group)
    } else {
        star_maps_via_automorphisms(group)
    }
}

/// Backtracking search over involutions of the element set.
pub fn star_maps_exhaustive(group: &FiniteGroup) -> Vec<StarMap> {
    let n = group.order();
    let orders: Vec<usize> = group.elements().map(|g| group.element_order(g)).collect();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut found = Vec::new();
    extend_involution(group, &orders, &mut map, &mut found);
    found.sort();
    found
}

fn extend_involution(group: &FiniteGroup, orders: &[usize], map: &mut [Elem], found: &mut Vec<StarMap>) {
    let n = group.order();
    let Some(g) = (0..n).find(|&g| map[g] == usize::MAX) else {
        if (0..n).all(|g| group.is_central(group.mul(g, map[g]))) {
            found.push(StarMap { map: map.to_vec() });
        }
        return;
    };
    for h in g..n {
        if map[h] != usize::MAX || orders[h] != orders[g] {
            continue;
        }
        map[g] = h;
        map[h] = g;
        if partial_antihom_ok(group, map) {
            extend_involution(group, orders, map, found);
        }
        map[g] = usize::MAX;
        map[h] = usize::MAX;
    }
}

fn partial_antihom_ok(group: &FiniteGroup, map: &[Elem]) -> bool {
    let n = group.order();
    for a in 0..n {
        if map[a] == usize::MAX {
            continue;
        }
        for b in 0..n {
            if map[b] == usize::MAX {
                continue;
            }
            let ab = group.mul(a, b);
            let expected = group.mul(map[b], map[a]);
            if map[ab] != usize::MAX && map[ab] != expected {
                return false;
            }
        }
    }
    true
}

/// Enumerates automorphisms `phi` by generator images and keeps every
/// `g -> phi(g^-1)` that is involutory with central norms.
pub fn star_maps_via_automorphisms(group: &FiniteGroup) -> Vec<StarMap> {
    let gens = generating_set(group);
    let orders: Vec<usize> = group.elements().map(|g| group.element_order(g)).collect();
    let candidates: Vec<Vec<Elem>> =
        gens.iter().map(|&g| group.elements().filter(|&h| orders[h] == orders[g]).collect()).collect();
    let mut images = Vec::with_capacity(gens.len());
    let mut found = Vec::new();
    search_images(group, &gens, &candidates, &mut images, &mut |aut| {
        let map: Vec<Elem> = group.elements().map(|g| aut[group.inv(g)]).collect();
        let involutory = (0..map.len()).all(|g| map[map[g]] == g);
        if involutory && group.elements().all(|g| group.is_central(group.mul(g, map[g]))) {
            found.push(StarMap { map });
        }
    });
    found.sort();
    found
}

fn search_images(
    group: &FiniteGroup,
    gens: &[Elem],
    candidates: &[Vec<Elem>],
    images: &mut Vec<Elem>,
    emit: &mut dyn FnMut(&[Elem]),
) {
    if images.len() == gens.len() {
        if let Some(aut) = extend_homomorphism(group, gens, images) {
            emit(&aut);
        }
        return;
    }
    for &h in &candidates[images.len()] {
        images.push(h);
        search_images(group, gens, candidates, images, emit);
        images.pop();
    }
}

/// Extends generator images to a bijective endomorphism, if consistent.
fn extend_homomorphism(group: &FiniteGroup, gens: &[Elem], images: &[Elem]) -> Option<Vec<Elem>> {
    let n = group.order();
    let mut phi = vec![usize::MAX; n];
    phi[0] = 0;
    let mut stack = vec![0];
    while let Some(w) = stack.pop() {
        for (&g, &img) in gens.iter().zip(images) {
            let wg = group.mul(w, g);
            let target = group.mul(phi[w], img);
            if phi[wg] == usize::MAX {
                phi[wg] = target;
                stack.push(wg);
            } else if phi[wg] != target {
                return None;
            }
        }
    }
    let mut hit = vec![false; n];
    for &v in &phi {
        if v == usize::MAX || std::mem::replace(&mut hit[v], true) {
            return None;
        }
    }
    Some(phi)
}

/// Greedy generating set preferring elements of large order.
fn generating_set(group: &FiniteGroup) -> Vec<Elem> {
    let mut by_order: Vec<Elem> = group.elements().skip(1).collect();
    by_order.sort_by_key(|&g| std::cmp::Reverse(group.element_order(g)));
    let mut gens = Vec::new();
    let mut span = vec![0];
    for g in by_order {
        if span.len() == group.order() {
            break;
        }
        if span.binary_search(&g).is_err() {
            gens.push(g);
            span = group.generated(&gens);
        }
    }
    gens
}

/// The (PC, PB, PS) signature of a starred group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub pc: bool,
    pub pb: bool,
    pub ps: bool,
}

impl Signature {
    pub fn of(group: &FiniteGroup, star: &StarMap) -> Self {
        Signature { pc: predicate_pc(group), pb: predicate_pb(group), ps: predicate_ps(group, star) }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lit = |b: bool, name: &str| if b { name.to_string() } else { format!("!{name}") };
        write!(f, "{}&{}&{}", lit(self.pc, "PC"), lit(self.pb, "PB"), lit(self.ps, "PS"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(desc: &str) -> FiniteGroup {
        FiniteGroup::from_descriptor(desc).unwrap()
    }

    /// Oracle: every permutation of the elements, filtered by the definition.
    fn all_bijection_stars(group: &FiniteGroup) -> Vec<Vec<Elem>> {
        fn permute(k: usize, perm: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
            if k == perm.len() {
                out.push(perm.clone());
                return;
            }
            for i in k..perm.len() {
                perm.swap(k, i);
                permute(k + 1, perm, out);
                perm.swap(k, i);
            }
        }
        let mut perms = Vec::new();
        permute(0, &mut group.elements().collect(), &mut perms);
        let mut ok: Vec<Vec<Elem>> = perms.into_iter().filter(|m| StarMap::new(group, m.clone()).is_ok()).collect();
        ok.sort();
        ok
    }

    #[test]
    fn stars_of_cyclic_four() {
        let c4 = g("cyclic:4");
        let oracle = all_bijection_stars(&c4);
        assert_eq!(oracle, vec![vec![0, 1, 2, 3], vec![0, 3, 2, 1]]);
        let stars = enumerate_star_maps(&c4);
        let maps: Vec<Vec<Elem>> = stars.iter().map(|s| s.as_slice().to_vec()).collect();
        assert_eq!(maps, oracle);
        assert_eq!(stars.iter().filter(|s| s.is_nonidentical()).count(), 1);
    }

    #[test]
    fn symmetric_three_has_only_inversion() {
        let s3 = g("symmetric:3");
        let oracle = all_bijection_stars(&s3);
        assert_eq!(oracle.len(), 1);
        let stars = enumerate_star_maps(&s3);
        assert_eq!(stars.len(), 1);
        assert!(stars[0].is_inversion(&s3));
    }

    #[test]
    fn cyclic_two_identity_is_inversion() {
        let c2 = g("cyclic:2");
        let stars = enumerate_star_maps(&c2);
        assert_eq!(stars.len(), 1);
        assert!(!stars[0].is_nonidentical());
        assert!(stars[0].is_inversion(&c2));
    }

    #[test]
    fn search_routes_agree_on_small_groups() {
        for desc in [
            "cyclic:1",
            "cyclic:2",
            "cyclic:3",
            "cyclic:4",
            "cyclic:5",
            "cyclic:6",
            "cyclic:7",
            "cyclic:8",
            "cyclic:2xcyclic:2",
            "cyclic:4xcyclic:2",
            "cyclic:2xcyclic:2xcyclic:2",
            "dihedral:3",
            "dihedral:4",
            "quaternion:8",
        ] {
            let group = g(desc);
            assert_eq!(star_maps_exhaustive(&group), star_maps_via_automorphisms(&group), "{desc}");
        }
    }

    #[test]
    fn bijection_oracle_matches_on_order_six() {
        for desc in ["cyclic:6", "dihedral:3"] {
            let group = g(desc);
            let maps: Vec<Vec<Elem>> = enumerate_star_maps(&group).iter().map(|s| s.as_slice().to_vec()).collect();
            assert_eq!(maps, all_bijection_stars(&group), "{desc}");
        }
    }

    #[test]
    fn enumerated_stars_satisfy_invariants() {
        for desc in ["dihedral:4", "quaternion:8", "modular:16", "dihedral:4xcyclic:2", "dihedral:6"] {
            let group = g(desc);
            let stars = enumerate_star_maps(&group);
            assert!(stars.iter().any(|s| s.is_inversion(&group)), "{desc}");
            for star in &stars {
                for x in group.elements() {
                    let xs = star.apply(x);
                    assert_eq!(star.apply(xs), x);
                    // g g* = g* g, central
                    assert_eq!(group.mul(x, xs), group.mul(xs, x));
                    assert!(group.is_central(group.mul(xs, x)));
                    for y in group.elements() {
                        assert_eq!(star.apply(group.mul(x, y)), group.mul(star.apply(y), xs));
                    }
                }
            }
        }
    }

    #[test]
    fn g0_candidates_examples() {
        let s3 = g("symmetric:3");
        let inv = StarMap::inversion(&s3);
        assert_eq!(g0_candidates(&s3, &inv), vec![CentralElement(0)]);

        let d4 = g("dihedral:4");
        let inv = StarMap::inversion(&d4);
        let c: Vec<Elem> = g0_candidates(&d4, &inv).iter().map(|c| c.index()).collect();
        assert_eq!(c, vec![0, 2]);

        for star in enumerate_star_maps(&d4) {
            let cands = g0_candidates(&d4, &star);
            assert_eq!(cands[0].index(), 0);
            for c in &cands {
                for k in -3..=3 {
                    let p = d4.pow(c.index(), k);
                    assert!(d4.is_central(p) && star.apply(p) == p);
                }
            }
        }
    }

    #[test]
    fn predicates_on_examples() {
        let c8 = g("cyclic:8");
        let inv = StarMap::inversion(&c8);
        assert_eq!(Signature::of(&c8, &inv), Signature { pc: true, pb: true, ps: false });

        let d4 = g("dihedral:4");
        let inv = StarMap::inversion(&d4);
        assert_eq!(Signature::of(&d4, &inv), Signature { pc: false, pb: true, ps: true });

        let s3 = g("symmetric:3");
        let inv = StarMap::inversion(&s3);
        assert_eq!(Signature::of(&s3, &inv), Signature { pc: false, pb: false, ps: false });

        let m16 = g("modular:16");
        let inv = StarMap::inversion(&m16);
        assert_eq!(Signature::of(&m16, &inv), Signature { pc: false, pb: true, ps: false });
    }

    #[test]
    fn commutative_implies_pb() {
        for desc in ["cyclic:5", "cyclic:8", "cyclic:4xcyclic:4", "cyclic:3xcyclic:3"] {
            let group = g(desc);
            assert!(predicate_pc(&group) && predicate_pb(&group));
        }
    }

    #[test]
    fn starred_group_rejects_bad_g0() {
        let d4 = Arc::new(g("dihedral:4"));
        let inv = StarMap::inversion(&d4);
        assert!(StarredGroup::new(d4.clone(), inv.clone(), 2).is_ok());
        assert_eq!(StarredGroup::new(d4.clone(), inv.clone(), 1).unwrap_err(), GroupError::G0NotCentral(1));
        let c4 = Arc::new(g("cyclic:4"));
        let inv = StarMap::inversion(&c4);
        assert_eq!(StarredGroup::new(c4, inv, 1).unwrap_err(), GroupError::G0NotFixed(1));
    }

    #[test]
    fn star_validation_errors() {
        let s3 = g("symmetric:3");
        assert!(matches!(StarMap::new(&s3, vec![0, 1, 2, 3, 4, 5]), Err(GroupError::NotAntiautomorphism(..))));
        assert!(matches!(StarMap::identity_map(&s3), Err(GroupError::IdentityStarNonabelian)));
        assert!(matches!(StarMap::new(&s3, vec![0, 1]), Err(GroupError::StarLength { .. })));
        let c4 = g("cyclic:4");
        assert!(matches!(
            StarMap::new(&c4, vec![0, 2, 1, 3]),
            Err(GroupError::NotInvolutory(..)) | Err(GroupError::NotAntiautomorphism(..))
        ));
    }
}
