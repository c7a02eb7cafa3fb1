//! Twist maps on pairs: the dihedral group of swaps and coordinate stars,
//! extended by the central shift `g0`, and multiplication quadruples built
//! from them.
//!
//! A token such as `g0y*x` names the map `(g, h) -> (g0 h*, g)`: the letters
//! spell the output pair, the optional `g0` prefix multiplies the first
//! coordinate. Since `g0` is central and star-fixed, all maps are compared
//! after evaluation, so the `g0` factor may be collected in front.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::group::Elem;
use crate::star::StarredGroup;
use crate::word::GroupWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("malformed twist token `{0}`")]
    Malformed(String),
    #[error("twist token `{0}` must use both x and y")]
    RepeatedLetter(String),
    #[error("malformed quadruple `{0}`: expected `beta,gamma,delta` or `alpha,beta,gamma,delta`")]
    QuadrupleArity(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ThetaElem {
    pub g0_exp: i32,
    pub swap: bool,
    pub star_first: bool,
    pub star_second: bool,
}

impl ThetaElem {
    pub const XY: ThetaElem = ThetaElem::part(false, false, false);
    pub const XY_: ThetaElem = ThetaElem::part(false, false, true);
    pub const X_Y: ThetaElem = ThetaElem::part(false, true, false);
    pub const X_Y_: ThetaElem = ThetaElem::part(false, true, true);
    pub const YX: ThetaElem = ThetaElem::part(true, false, false);
    pub const YX_: ThetaElem = ThetaElem::part(true, false, true);
    pub const Y_X: ThetaElem = ThetaElem::part(true, true, false);
    pub const Y_X_: ThetaElem = ThetaElem::part(true, true, true);

    pub const fn part(swap: bool, star_first: bool, star_second: bool) -> Self {
        ThetaElem { g0_exp: 0, swap, star_first, star_second }
    }

    /// The eight maps in the order xy, xy*, x*y, x*y*, yx, yx*, y*x, y*x*.
    pub fn all_parts() -> impl Iterator<Item = ThetaElem> {
        (0..8).map(ThetaElem::from_index)
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < 8, "twist index {i} out of range");
        ThetaElem::part(i & 4 != 0, i & 2 != 0, i & 1 != 0)
    }

    /// Index of the Θ-part, ignoring the `g0` power.
    pub fn index(self) -> usize {
        (self.swap as usize) << 2 | (self.star_first as usize) << 1 | self.star_second as usize
    }

    pub fn with_g0(self, n: i32) -> Self {
        ThetaElem { g0_exp: n, ..self }
    }

    pub fn theta_part(self) -> Self {
        self.with_g0(0)
    }

    pub fn is_identity(self) -> bool {
        self == ThetaElem::XY
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: ThetaElem) -> ThetaElem {
        let (first, second) =
            if self.swap { (other.star_second, other.star_first) } else { (other.star_first, other.star_second) };
        ThetaElem {
            g0_exp: self.g0_exp + other.g0_exp,
            swap: self.swap ^ other.swap,
            star_first: first ^ self.star_first,
            star_second: second ^ self.star_second,
        }
    }

    pub fn inverse(self) -> ThetaElem {
        let part = ThetaElem::all_parts().find(|p| p.compose(self.theta_part()).is_identity()).expect("finite group");
        part.with_g0(-self.g0_exp)
    }

    /// Applies the map to a pair of formal words.
    pub fn apply(self, pair: (&GroupWord, &GroupWord)) -> (GroupWord, GroupWord) {
        let (a, b) = if self.swap { (pair.1, pair.0) } else { (pair.0, pair.1) };
        let mut first = if self.star_first { a.star() } else { a.clone() };
        let second = if self.star_second { b.star() } else { b.clone() };
        first.g0_exp += self.g0_exp;
        (first, second)
    }

    /// `Δθ(a, b)` on formal words.
    pub fn delta(self, a: &GroupWord, b: &GroupWord) -> GroupWord {
        let (p, q) = self.apply((a, b));
        delta_eval(&p, &q)
    }

    /// `Δθ(g, h)` in a concrete starred group.
    #[inline]
    pub fn delta_concrete(self, sg: &StarredGroup, g: Elem, h: Elem) -> Elem {
        let (a, b) = if self.swap { (h, g) } else { (g, h) };
        let a = if self.star_first { sg.apply_star(a) } else { a };
        let b = if self.star_second { sg.apply_star(b) } else { b };
        let ab = sg.mul(a, b);
        if self.g0_exp == 0 {
            ab
        } else {
            sg.mul(sg.g0_pow(self.g0_exp as i64), ab)
        }
    }
}

/// Δ on formal words: concatenation with `g0` powers collected in front.
pub fn delta_eval(a: &GroupWord, b: &GroupWord) -> GroupWord {
    a.concat(b)
}

pub fn theta_parse(token: &str) -> Result<ThetaElem, ThetaError> {
    token.parse()
}

pub fn theta_format(t: ThetaElem) -> String {
    t.to_string()
}

pub fn theta_compose(a: ThetaElem, b: ThetaElem) -> ThetaElem {
    a.compose(b)
}

pub fn theta_apply(t: ThetaElem, pair: (&GroupWord, &GroupWord)) -> (GroupWord, GroupWord) {
    t.apply(pair)
}

impl FromStr for ThetaElem {
    type Err = ThetaError;

    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let malformed = || ThetaError::Malformed(token.to_string());
        let s = token.trim();
        let (g0_exp, rest) = match s.strip_prefix("g0") {
            None => (0, s),
            Some(r) => match r.strip_prefix('^') {
                None => (1, r),
                Some(r) => {
                    let end = r
                        .char_indices()
                        .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                        .map_or(r.len(), |(i, _)| i);
                    let n: i32 = r[..end].parse().map_err(|_| malformed())?;
                    (n, &r[end..])
                }
            },
        };
        let mut letters = Vec::new();
        let mut chars = rest.chars().peekable();
        while let Some(c) = chars.next() {
            if !c.is_ascii_lowercase() {
                return Err(malformed());
            }
            let starred = chars.next_if_eq(&'*').is_some();
            letters.push((c, starred));
        }
        let [(a, sa), (b, sb)] = letters[..] else {
            return Err(malformed());
        };
        let swap = match (a, b) {
            ('x', 'y') => false,
            ('y', 'x') => true,
            _ if a == b && (a == 'x' || a == 'y') => return Err(ThetaError::RepeatedLetter(token.to_string())),
            _ => return Err(malformed()),
        };
        Ok(ThetaElem { g0_exp, swap, star_first: sa, star_second: sb })
    }
}

impl fmt::Display for ThetaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.g0_exp {
            0 => {}
            1 => f.write_str("g0")?,
            n => write!(f, "g0^{n}")?,
        }
        let (a, b) = if self.swap { ('y', 'x') } else { ('x', 'y') };
        let star = |s: bool| if s { "*" } else { "" };
        write!(f, "{a}{}{b}{}", star(self.star_first), star(self.star_second))
    }
}

impl fmt::Debug for ThetaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "θ[{self}]")
    }
}

/// The four twist maps `(α, β, γ, δ)` that define loop multiplication on
/// `G ∪ Gu`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultQuadruple {
    pub alpha: ThetaElem,
    pub beta: ThetaElem,
    pub gamma: ThetaElem,
    pub delta: ThetaElem,
}

pub const BETA_OPTIONS: [ThetaElem; 4] = [ThetaElem::XY, ThetaElem::X_Y, ThetaElem::YX, ThetaElem::YX_];
pub const GAMMA_OPTIONS: [ThetaElem; 2] = [ThetaElem::XY, ThetaElem::YX];

impl MultQuadruple {
    pub fn new(alpha: ThetaElem, beta: ThetaElem, gamma: ThetaElem, delta: ThetaElem) -> Self {
        MultQuadruple { alpha, beta, gamma, delta }
    }

    /// A quadruple with `α = xy`.
    pub fn triple(beta: ThetaElem, gamma: ThetaElem, delta: ThetaElem) -> Self {
        MultQuadruple::new(ThetaElem::XY, beta, gamma, delta)
    }

    /// Chein's original construction `(yx, xy*, g0y*x)`.
    pub fn chein() -> Self {
        MultQuadruple::triple(ThetaElem::YX, ThetaElem::XY_, ThetaElem::Y_X.with_g0(1))
    }

    /// The de Barros-Juriaans construction `(xy, y*x, g0xy*)`.
    pub fn dbj() -> Self {
        MultQuadruple::triple(ThetaElem::XY, ThetaElem::Y_X, ThetaElem::XY_.with_g0(1))
    }

    /// True for the restricted search space: `α = xy`, `β` and `γ` from
    /// their option lists, `δ` carrying exactly one `g0`.
    pub fn is_standard(&self) -> bool {
        self.alpha == ThetaElem::XY
            && BETA_OPTIONS.contains(&self.beta)
            && GAMMA_OPTIONS.contains(&self.gamma)
            && self.delta.g0_exp == 1
    }

    /// Composes every map on the right with `t`, i.e. `(αt, βt, γt, δt)`.
    pub fn map_each(&self, t: impl Fn(ThetaElem) -> ThetaElem) -> Self {
        MultQuadruple::new(t(self.alpha), t(self.beta), t(self.gamma), t(self.delta))
    }

    /// The quadruple whose loop is the opposite of this one's.
    pub fn opposite(&self) -> Self {
        let s = |t: ThetaElem| t.compose(ThetaElem::YX);
        MultQuadruple::new(s(self.alpha), s(self.gamma), s(self.beta), s(self.delta))
    }

    /// `β, γ, δ` as printed in result tables.
    pub fn triple_string(&self) -> String {
        format!("{},{},{}", self.beta, self.gamma, self.delta)
    }
}

impl FromStr for MultQuadruple {
    type Err = ThetaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<ThetaElem> = inner.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>()?;
        match parts[..] {
            [b, c, d] => Ok(MultQuadruple::triple(b, c, d)),
            [a, b, c, d] => Ok(MultQuadruple::new(a, b, c, d)),
            _ => Err(ThetaError::QuadrupleArity(s.to_string())),
        }
    }
}

impl fmt::Display for MultQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha == ThetaElem::XY {
            write!(f, "({}, {}, {})", self.beta, self.gamma, self.delta)
        } else {
            write!(f, "({}, {}, {}, {})", self.alpha, self.beta, self.gamma, self.delta)
        }
    }
}

impl fmt::Debug for MultQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
