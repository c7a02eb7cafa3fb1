//! Concrete doubled loops on `G ∪ Gu` and brute-force checks on them.
//!
//! Element `g` of `G` has index `g`, and `gu` has index `n + g`.

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::group::{write_rows, Elem, FiniteGroup};
use crate::star::StarredGroup;
use crate::term::LoopIdentity;
use crate::theta::{MultQuadruple, ThetaElem};
use crate::word::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("tables have orders {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("element map is not a bijection on 0..{0}")]
    NotBijection(usize),
}

/// Where a table came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub group: String,
    pub star: Vec<Elem>,
    pub g0: Elem,
    pub quadruple: MultQuadruple,
    /// The table was transposed after building.
    pub opposite: bool,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({}, star={:?}, g0={}, {})", self.group, self.star, self.g0, self.quadruple)?;
        if self.opposite {
            f.write_str(" opposite")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopTable {
    order: usize,
    table: Vec<Elem>,
    provenance: Option<Provenance>,
}

impl LoopTable {
    /// A bare table, e.g. a group viewed as a loop.
    pub fn from_rows(order: usize, table: Vec<Elem>) -> Self {
        assert_eq!(table.len(), order * order);
        assert!(table.iter().all(|&e| e < order));
        LoopTable { order, table, provenance: None }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        LoopTable::from_rows(g.order(), g.table().to_vec())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b]
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn is_latin(&self) -> bool {
        let n = self.order;
        let mut seen = vec![0usize; n];
        let mut stamp = 0;
        for i in 0..n {
            stamp += 1;
            if (0..n).any(|j| std::mem::replace(&mut seen[self.mul(i, j)], stamp) == stamp) {
                return false;
            }
            stamp += 1;
            if (0..n).any(|j| std::mem::replace(&mut seen[self.mul(j, i)], stamp) == stamp) {
                return false;
            }
        }
        true
    }

    /// Cayley text with the provenance as a comment header.
    pub fn to_cayley(&self) -> String {
        let mut out = String::new();
        if let Some(p) = &self.provenance {
            let _ = writeln!(out, "# {p}");
        }
        let _ = writeln!(out, "{}", self.order);
        write_rows(&mut out, self.order, &self.table);
        out
    }

    /// Solves `a ∘ x = b` for every pair, as a table indexed `a * n + b`.
    fn left_division(&self) -> Vec<Elem> {
        let n = self.order;
        let mut out = vec![0; n * n];
        for a in 0..n {
            for x in 0..n {
                out[a * n + self.mul(a, x)] = x;
            }
        }
        out
    }

    /// Solves `x ∘ a = b`, indexed `a * n + b`.
    fn right_division(&self) -> Vec<Elem> {
        let n = self.order;
        let mut out = vec![0; n * n];
        for a in 0..n {
            for x in 0..n {
                out[a * n + self.mul(x, a)] = x;
            }
        }
        out
    }
}

/// `Q(G, *, g0, α, β, γ, δ)`.
pub fn build_loop(sg: &StarredGroup, q: &MultQuadruple) -> LoopTable {
    let n = sg.order();
    let m = 2 * n;
    let mut table = vec![0; m * m];
    let delta = |t: ThetaElem, g, h| t.delta_concrete(sg, g, h);
    for g in 0..n {
        for h in 0..n {
            table[g * m + h] = delta(q.alpha, g, h);
            table[g * m + n + h] = n + delta(q.beta, g, h);
            table[(n + g) * m + h] = n + delta(q.gamma, g, h);
            table[(n + g) * m + n + h] = delta(q.delta, g, h);
        }
    }
    let t = LoopTable {
        order: m,
        table,
        provenance: Some(Provenance {
            group: sg.group().name().to_string(),
            star: sg.star().as_slice().to_vec(),
            g0: sg.g0(),
            quadruple: *q,
            opposite: false,
        }),
    };
    debug_assert!(t.is_latin());
    t
}

/// Element 0 is a two-sided neutral element.
pub fn is_loop(t: &LoopTable) -> bool {
    (0..t.order).all(|a| t.mul(0, a) == a && t.mul(a, 0) == a)
}

/// The loop criterion on the Θ-parts of `α`, `β`, `γ`, assuming `α` does
/// not swap its arguments; `δ` is free.
pub fn loop_criterion(q: &MultQuadruple) -> bool {
    use ThetaElem as T;
    let part = |t: ThetaElem| (t.g0_exp == 0).then_some(t);
    part(q.alpha) == Some(T::XY)
        && part(q.beta).is_some_and(|b| [T::XY, T::X_Y, T::YX, T::YX_].contains(&b))
        && part(q.gamma).is_some_and(|c| [T::XY, T::XY_, T::YX, T::Y_X].contains(&c))
}

/// The same criterion with maps compared by their values `Δθ(g, h)` on the
/// given group, so that maps coinciding there count as equal.
pub fn loop_criterion_on(sg: &StarredGroup, q: &MultQuadruple) -> bool {
    use ThetaElem as T;
    let n = sg.order();
    let same = |s: ThetaElem, t: ThetaElem| {
        (0..n).all(|g| (0..n).all(|h| s.delta_concrete(sg, g, h) == t.delta_concrete(sg, g, h)))
    };
    let any = |t: ThetaElem, set: &[ThetaElem]| set.iter().any(|&s| same(s, t));
    any(q.alpha, &[T::XY])
        && any(q.beta, &[T::XY, T::X_Y, T::YX, T::YX_])
        && any(q.gamma, &[T::XY, T::XY_, T::YX, T::Y_X])
}

/// A falsifying valuation, as `(variable, element)` pairs in sorted
/// variable order. The first one in odometer order is reported.
pub fn check_identity_witness(t: &LoopTable, psi: &LoopIdentity) -> Option<Vec<(Var, Elem)>> {
    let vars = psi.vars();
    let (lhs, rhs) = psi.compile();
    let n = t.order;
    let k = vars.len();
    if k == 0 {
        return None;
    }
    let mul = |a: Elem, b: Elem| t.table[a * n + b];
    let search = |first: Elem| {
        let mut val = vec![0; k];
        val[0] = first;
        let mut stack = Vec::with_capacity(16);
        loop {
            if lhs.eval(&val, &mut stack, mul) != rhs.eval(&val, &mut stack, mul) {
                return Some(val);
            }
            let mut i = k - 1;
            loop {
                if i == 0 {
                    return None;
                }
                val[i] += 1;
                if val[i] < n {
                    break;
                }
                val[i] = 0;
                i -= 1;
            }
        }
    };
    let found = if n * n >= 256 { (0..n).into_par_iter().find_map_first(search) } else { (0..n).find_map(search) };
    found.map(|val| vars.iter().copied().zip(val).collect())
}

pub fn check_identity(t: &LoopTable, psi: &LoopIdentity) -> bool {
    check_identity_witness(t, psi).is_none()
}

/// The transposed table.
pub fn opposite(t: &LoopTable) -> LoopTable {
    let n = t.order;
    let table = (0..n * n).map(|i| t.mul(i % n, i / n)).collect();
    let provenance = t.provenance.clone().map(|p| Provenance { opposite: !p.opposite, ..p });
    LoopTable { order: n, table, provenance }
}

/// `f(x ∘ y) = f(x) • f(y)` for all pairs.
pub fn check_isomorphism(a: &LoopTable, b: &LoopTable, f: &[Elem]) -> Result<bool, ConstructionError> {
    let n = a.order;
    if b.order != n || f.len() != n {
        return Err(ConstructionError::SizeMismatch(n, if b.order != n { b.order } else { f.len() }));
    }
    let mut hit = vec![false; n];
    for &x in f {
        if x >= n || std::mem::replace(&mut hit[x], true) {
            return Err(ConstructionError::NotBijection(n));
        }
    }
    Ok((0..n).all(|x| (0..n).all(|y| f[a.mul(x, y)] == b.mul(f[x], f[y]))))
}

/// `g ↦ t⁻¹g`, `gu ↦ (t⁻¹g)u` with `t = g0ⁿ`: carries `Q(α, β, γ, δ)` onto
/// the quadruple with every map shifted by `g0ⁿ`.
pub fn g0_shift_map(sg: &StarredGroup, n: i64) -> Vec<Elem> {
    let g = sg.group();
    let t_inv = sg.g0_pow(-n);
    let k = g.order();
    (0..2 * k).map(|x| if x < k { g.mul(t_inv, x) } else { k + g.mul(t_inv, x - k) }).collect()
}

/// The quadruple with every map preceded by `θ_{g0}ⁿ`.
pub fn g0_shifted(q: &MultQuadruple, n: i32) -> MultQuadruple {
    q.map_each(|t| t.with_g0(t.g0_exp + n))
}

/// `g ↦ g`, `gu ↦ g*u`.
pub fn star_coset_map(sg: &StarredGroup) -> Vec<Elem> {
    let k = sg.order();
    (0..2 * k).map(|x| if x < k { x } else { k + sg.apply_star(x - k) }).collect()
}

/// The pairs `(β, β')` and `(γ, γ')` for which [`star_coset_map`] is an
/// isomorphism onto `(α, β', γ', θ_{x*y*}δ)`.
pub const BETA_PAIRS: [(ThetaElem, ThetaElem); 4] = [
    (ThetaElem::XY, ThetaElem::YX_),
    (ThetaElem::YX, ThetaElem::X_Y),
    (ThetaElem::X_Y, ThetaElem::YX),
    (ThetaElem::YX_, ThetaElem::XY),
];

pub const GAMMA_PAIRS: [(ThetaElem, ThetaElem); 4] = [
    (ThetaElem::XY, ThetaElem::Y_X),
    (ThetaElem::YX, ThetaElem::XY_),
    (ThetaElem::XY_, ThetaElem::YX),
    (ThetaElem::Y_X, ThetaElem::XY),
];

/// The image quadruple `(α, β', γ', θ_{x*y*}δ)`.
pub fn star_reduced(q: &MultQuadruple, beta: ThetaElem, gamma: ThetaElem) -> MultQuadruple {
    MultQuadruple::new(q.alpha, beta, gamma, q.delta.compose(ThetaElem::X_Y_))
}

/// `θ''` with `Δθ''(a, b) = (Δθ(a*, b*))*`.
fn star_conjugate(t: ThetaElem) -> ThetaElem {
    ThetaElem { g0_exp: t.g0_exp, swap: !t.swap, star_first: t.star_second, star_second: t.star_first }
}

/// The standard quadruple whose loop is isomorphic to the opposite of the
/// loop of `q`, with whether the star-coset reduction was needed on the way.
fn mirror_steps(q: &MultQuadruple) -> (MultQuadruple, bool) {
    let m = q.opposite().map_each(star_conjugate);
    let beta = BETA_PAIRS.iter().find(|p| p.0 == m.beta).map(|p| p.1);
    let gamma = GAMMA_PAIRS.iter().find(|p| p.0 == m.gamma).map(|p| p.1);
    match (beta, gamma) {
        _ if m.is_standard() => (m, false),
        (Some(b), Some(c)) => (star_reduced(&m, b, c), true),
        _ => (m, false),
    }
}

/// Maps a left-handed construction to its right-handed counterpart.
pub fn mirror_quadruple(q: &MultQuadruple) -> MultQuadruple {
    mirror_steps(q).0
}

/// An isomorphism from `opposite(build_loop(sg, q))` onto
/// `build_loop(sg, mirror_quadruple(q))`.
pub fn mirror_map(sg: &StarredGroup, q: &MultQuadruple) -> Vec<Elem> {
    let k = sg.order();
    let reduced = mirror_steps(q).1;
    (0..2 * k)
        .map(|x| match (x < k, reduced) {
            (true, _) => sg.apply_star(x),
            (false, true) => x,
            (false, false) => k + sg.apply_star(x - k),
        })
        .collect()
}

pub fn has_two_sided_inverses(t: &LoopTable) -> bool {
    (0..t.order).all(|a| (0..t.order).any(|b| t.mul(a, b) == 0 && t.mul(b, a) == 0))
}

/// Every subloop generated by two elements is associative.
pub fn is_diassociative(t: &LoopTable) -> bool {
    let n = t.order;
    let ldiv = t.left_division();
    let rdiv = t.right_division();
    let mut checked: std::collections::HashSet<Vec<bool>> = std::collections::HashSet::new();
    for a in 0..n {
        for b in a..n {
            let sub = closure(t, &ldiv, &rdiv, &[a, b]);
            let mut mask = vec![false; n];
            for &x in &sub {
                mask[x] = true;
            }
            if !checked.insert(mask) {
                continue;
            }
            let assoc = sub
                .iter()
                .all(|&x| sub.iter().all(|&y| sub.iter().all(|&z| t.mul(t.mul(x, y), z) == t.mul(x, t.mul(y, z)))));
            if !assoc {
                return false;
            }
        }
    }
    true
}

/// Smallest subset containing `gens` and closed under `∘`, `\` and `/`.
fn closure(t: &LoopTable, ldiv: &[Elem], rdiv: &[Elem], gens: &[Elem]) -> Vec<Elem> {
    let n = t.order;
    let mut inside = vec![false; n];
    let mut elems: Vec<Elem> = Vec::new();
    for &g in gens {
        if !std::mem::replace(&mut inside[g], true) {
            elems.push(g);
        }
    }
    let mut done = 0;
    while done < elems.len() {
        let x = elems[done];
        done += 1;
        for i in 0..done {
            let y = elems[i];
            for z in [t.mul(x, y), t.mul(y, x), ldiv[x * n + y], ldiv[y * n + x], rdiv[x * n + y], rdiv[y * n + x]] {
                if !std::mem::replace(&mut inside[z], true) {
                    elems.push(z);
                }
            }
        }
    }
    elems.sort_unstable();
    elems
}
