//! Formal group words `g0^n · letters`, identities between them, and the
//! canonical form used to compare them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::group::Elem;
use crate::star::StarredGroup;

/// A variable name, stored as its ASCII lowercase letter.
pub type Var = u8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub var: Var,
    pub starred: bool,
}

impl Letter {
    pub fn new(var: Var, starred: bool) -> Self {
        Letter { var, starred }
    }

    pub fn plain(var: Var) -> Self {
        Letter::new(var, false)
    }

    pub fn star(self) -> Self {
        Letter::new(self.var, !self.starred)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.var as char, if self.starred { "*" } else { "" })
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unexpected character `{ch}` in word `{src}`")]
    BadChar { ch: char, src: String },
    #[error("malformed g0 exponent in `{0}`")]
    BadExponent(String),
    #[error("identity `{0}` needs exactly one `=`")]
    MissingEquals(String),
}

/// `g0^g0_exp` followed by the letters. `g0` never occurs among the letters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupWord {
    pub g0_exp: i32,
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn new(g0_exp: i32, letters: Vec<Letter>) -> Self {
        GroupWord { g0_exp, letters }
    }

    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn letter(l: Letter) -> Self {
        GroupWord::new(0, vec![l])
    }

    pub fn is_identity(&self) -> bool {
        self.g0_exp == 0 && self.letters.is_empty()
    }

    /// `w*`: letters reversed with stars flipped; `g0` is star-fixed.
    pub fn star(&self) -> GroupWord {
        GroupWord::new(self.g0_exp, self.letters.iter().rev().map(|l| l.star()).collect())
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        GroupWord::new(self.g0_exp + other.g0_exp, letters)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.letters.iter().map(|l| l.var)
    }

    /// Value under `val`, which maps a variable to its group element.
    pub fn eval(&self, sg: &StarredGroup, val: impl Fn(Var) -> Elem) -> Elem {
        let start = if self.g0_exp == 0 { 0 } else { sg.g0_pow(self.g0_exp as i64) };
        self.letters.iter().fold(start, |acc, l| {
            let g = val(l.var);
            sg.mul(acc, if l.starred { sg.apply_star(g) } else { g })
        })
    }

    /// Space-separated form, e.g. `g0 x z* y* y*`.
    pub fn spaced(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        match self.g0_exp {
            0 => {}
            1 => parts.push("g0".into()),
            n => parts.push(format!("g0^{n}")),
        }
        parts.extend(self.letters.iter().map(|l| l.to_string()));
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

pub fn star_word(w: &GroupWord) -> GroupWord {
    w.star()
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        match self.g0_exp {
            0 => {}
            1 => f.write_str("g0")?,
            n => write!(f, "g0^{n}")?,
        }
        self.letters.iter().try_for_each(|l| write!(f, "{l}"))
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GroupWord {
    type Err = WordError;

    /// Accepts compact (`g0xz*`) or spaced (`g0 x z*`) forms; `1` is the
    /// empty word.
    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |ch| WordError::BadChar { ch, src: src.to_string() };
        let mut w = GroupWord::identity();
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == 'g' && chars.get(i + 1) == Some(&'0') {
                i += 2;
                if chars.get(i) == Some(&'^') {
                    i += 1;
                    let start = i;
                    if chars.get(i) == Some(&'-') {
                        i += 1;
                    }
                    while chars.get(i).is_some_and(|c| c.is_ascii_digit()) {
                        i += 1;
                    }
                    let digits: String = chars[start..i].iter().collect();
                    w.g0_exp += digits.parse::<i32>().map_err(|_| WordError::BadExponent(src.into()))?;
                } else {
                    w.g0_exp += 1;
                }
            } else if c == '1' {
                i += 1;
            } else if c.is_ascii_lowercase() {
                let starred = chars.get(i + 1) == Some(&'*');
                w.letters.push(Letter::new(c as u8, starred));
                i += if starred { 2 } else { 1 };
            } else {
                return Err(bad(c));
            }
        }
        Ok(w)
    }
}

/// An equation `lhs = rhs` between group words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupIdentity {
    pub lhs: GroupWord,
    pub rhs: GroupWord,
}

impl GroupIdentity {
    pub fn new(lhs: GroupWord, rhs: GroupWord) -> Self {
        GroupIdentity { lhs, rhs }
    }

    /// Both sides syntactically equal.
    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    /// Variables in order of first occurrence, reading lhs then rhs.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen = Vec::new();
        for v in self.lhs.vars().chain(self.rhs.vars()) {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    }

    pub fn sorted_vars(&self) -> Vec<Var> {
        let mut v = self.vars();
        v.sort_unstable();
        v
    }

    pub fn swapped(&self) -> Self {
        GroupIdentity::new(self.rhs.clone(), self.lhs.clone())
    }

    /// Stars both sides.
    pub fn starred(&self) -> Self {
        GroupIdentity::new(self.lhs.star(), self.rhs.star())
    }

    /// Applies `f` to every letter.
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Self {
        let m = |w: &GroupWord| GroupWord::new(w.g0_exp, w.letters.iter().map(|&l| f(l)).collect());
        GroupIdentity::new(m(&self.lhs), m(&self.rhs))
    }

    /// Brute-force check over every valuation of the variables in `sg`.
    pub fn holds(&self, sg: &StarredGroup) -> bool {
        self.counterexample(sg).is_none()
    }

    /// A valuation (variables in sorted order) violating the identity.
    pub fn counterexample(&self, sg: &StarredGroup) -> Option<Vec<(Var, Elem)>> {
        let vars = self.sorted_vars();
        let compile = |w: &GroupWord| -> Vec<(usize, bool)> {
            w.letters.iter().map(|l| (vars.binary_search(&l.var).unwrap(), l.starred)).collect()
        };
        let (lc, rc) = (compile(&self.lhs), compile(&self.rhs));
        let (l0, r0) = (sg.g0_pow(self.lhs.g0_exp as i64), sg.g0_pow(self.rhs.g0_exp as i64));
        let n = sg.order();
        let mut val = vec![0; vars.len()];
        let eval = |code: &[(usize, bool)], start: Elem, val: &[Elem]| {
            code.iter().fold(start, |acc, &(i, s)| sg.mul(acc, if s { sg.apply_star(val[i]) } else { val[i] }))
        };
        loop {
            if eval(&lc, l0, &val) != eval(&rc, r0, &val) {
                return Some(vars.iter().copied().zip(val.iter().copied()).collect());
            }
            // odometer step
            let mut k = 0;
            loop {
                if k == val.len() {
                    return None;
                }
                val[k] += 1;
                if val[k] < n {
                    break;
                }
                val[k] = 0;
                k += 1;
            }
        }
    }
}

impl fmt::Display for GroupIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for GroupIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GroupIdentity {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some((l, r)) = s.split_once('=') else {
            return Err(WordError::MissingEquals(s.into()));
        };
        if r.contains('=') {
            return Err(WordError::MissingEquals(s.into()));
        }
        Ok(GroupIdentity::new(l.parse()?, r.parse()?))
    }
}

/// A deduplicated set of canonical identities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentitySet {
    identities: BTreeSet<GroupIdentity>,
}

impl IdentitySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Canonicalizes and inserts.
    pub fn insert(&mut self, id: &GroupIdentity) -> bool {
        self.identities.insert(canonicalize(id))
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupIdentity> {
        self.identities.iter()
    }

    pub fn len(&self) -> usize {
        self.identities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty()
    }

    /// Members other than the trivial identity.
    pub fn nontrivial(&self) -> impl Iterator<Item = &GroupIdentity> {
        self.identities.iter().filter(|id| !id.is_trivial())
    }
}

impl FromIterator<GroupIdentity> for IdentitySet {
    fn from_iter<I: IntoIterator<Item = GroupIdentity>>(iter: I) -> Self {
        let mut set = IdentitySet::new();
        for id in iter {
            set.insert(&id);
        }
        set
    }
}

/// Moves adjacent `v v*` / `v* v` pairs out of `letters` (they are central)
/// and returns the remaining letters plus the extracted variables.
fn extract_central_pairs(letters: &[Letter]) -> (Vec<Letter>, Vec<Var>) {
    let mut rest: Vec<Letter> = Vec::with_capacity(letters.len());
    let mut pairs = Vec::new();
    for &l in letters {
        match rest.last() {
            Some(&top) if top.var == l.var && top.starred != l.starred => {
                rest.pop();
                pairs.push(l.var);
            }
            _ => rest.push(l),
        }
    }
    pairs.sort_unstable();
    (rest, pairs)
}

fn normalize_side(w: &GroupWord) -> GroupWord {
    let (rest, pairs) = extract_central_pairs(&w.letters);
    let mut letters = Vec::with_capacity(w.letters.len());
    for v in pairs {
        letters.push(Letter::plain(v));
        letters.push(Letter::new(v, true));
    }
    letters.extend(rest);
    GroupWord::new(w.g0_exp, letters)
}

fn cancel_ends(id: &mut GroupIdentity) {
    let m = id.lhs.g0_exp.min(id.rhs.g0_exp);
    id.lhs.g0_exp -= m;
    id.rhs.g0_exp -= m;
    let (l, r) = (&mut id.lhs.letters, &mut id.rhs.letters);
    let prefix = l.iter().zip(r.iter()).take_while(|(a, b)| a == b).count();
    l.drain(..prefix);
    r.drain(..prefix);
    let suffix = l.iter().rev().zip(r.iter().rev()).take_while(|(a, b)| a == b).count();
    l.truncate(l.len() - suffix);
    r.truncate(r.len() - suffix);
}

/// Canonical form: `x*x` is rewritten `xx*`, adjacent `vv*` pairs move to
/// the front sorted by variable, then common `g0` powers and common end
/// letters cancel. Repeated until nothing changes.
pub fn canonicalize(id: &GroupIdentity) -> GroupIdentity {
    let mut cur = id.clone();
    loop {
        let mut next = GroupIdentity::new(normalize_side(&cur.lhs), normalize_side(&cur.rhs));
        cancel_ends(&mut next);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Replaces each variable in `vars` by the identity element.
pub fn substitute_unit(id: &GroupIdentity, vars: &[Var]) -> GroupIdentity {
    let keep = |w: &GroupWord| {
        GroupWord::new(w.g0_exp, w.letters.iter().copied().filter(|l| !vars.contains(&l.var)).collect())
    };
    canonicalize(&GroupIdentity::new(keep(&id.lhs), keep(&id.rhs)))
}

/// Flips the stars of every variable that only ever occurs starred.
pub fn star_rename(id: &GroupIdentity) -> GroupIdentity {
    let letters = || id.lhs.letters.iter().chain(&id.rhs.letters);
    let only_starred: Vec<Var> =
        id.vars().into_iter().filter(|&v| letters().filter(|l| l.var == v).all(|l| l.starred)).collect();
    id.map_letters(|l| if only_starred.contains(&l.var) { l.star() } else { l })
}
