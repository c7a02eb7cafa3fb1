//! Finite groups stored as Cayley tables.
//!
//! Element `0` is always the identity. Named families use fixed presentations
//! so that element indices are stable across runs:
//!
//! | descriptor     | order | element `i + m*j` stands for                     |
//! |----------------|-------|--------------------------------------------------|
//! | `cyclic:n`     | n     | `a^i` (`j = 0`)                                   |
//! | `dihedral:n`   | 2n    | `r^i s^j`, `m = n`, `s r s = r^-1`                |
//! | `symmetric:3`  | 6     | same table as `dihedral:3`                        |
//! | `quaternion:8` | 8     | `a^i b^j`, `m = 4`, `b^2 = a^2`, `b a b^-1 = a^-1` |
//! | `modular:16`   | 16    | `a^i b^j`, `m = 8`, `b^2 = 1`, `b a b = a^5`       |
//!
//! A direct product `A x B` numbers the pair `(a, b)` as `a * |B| + b`.

use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

/// Index of a group (or loop) element.
pub type Elem = usize;

/// Largest group order accepted by the loaders.
pub const MAX_GROUP_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed Cayley table (line {line}): {message}")]
    Malformed { line: usize, message: String },
    #[error("unknown group descriptor `{0}`")]
    UnknownDescriptor(String),
    #[error("invalid parameter for `{family}`: {message}")]
    BadParameter { family: String, message: String },
    #[error("group order {0} exceeds the supported maximum of {MAX_GROUP_ORDER}")]
    TooLarge(usize),
    #[error("table has no two-sided identity element")]
    NoIdentity,
    #[error("table is not a Latin square: {kind} {line} repeats element {value}")]
    NotLatin { kind: &'static str, line: Elem, value: Elem },
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(Elem, Elem, Elem),
    #[error("star map has length {got}, expected {expected}")]
    StarLength { got: usize, expected: usize },
    #[error("star map sends {0} to {1}, which is not an element")]
    StarOutOfRange(Elem, Elem),
    #[error("star map is not involutory: {0}** = {1}")]
    NotInvolutory(Elem, Elem),
    #[error("star map is not an antiautomorphism: ({0}*{1})* != {1}* {0}*")]
    NotAntiautomorphism(Elem, Elem),
    #[error("{0} {0}* is not central")]
    NormNotCentral(Elem),
    #[error("identity star map is not an antiautomorphism of a nonabelian group")]
    IdentityStarNonabelian,
    #[error("g0 = {0} is not an element")]
    G0OutOfRange(Elem),
    #[error("g0 = {0} is not central")]
    G0NotCentral(Elem),
    #[error("g0 = {0} is not fixed by the star map")]
    G0NotFixed(Elem),
}

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
    center: Vec<Elem>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("name", &self.name).field("order", &self.order).finish()
    }
}

impl FiniteGroup {
    /// Validates `rows` as a group table. If the identity is not element `0`
    /// the elements are relabelled by swapping it with `0`.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<Elem>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Malformed { line: 1, message: "empty table".into() });
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::Malformed {
                    line: r + 2,
                    message: format!("row {r} has {} entries, expected {n}", row.len()),
                });
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(GroupError::Malformed { line: r + 2, message: format!("entry {v} out of range 0..{n}") });
            }
        }
        let mut table: Vec<Elem> = rows.into_iter().flatten().collect();
        check_latin(n, &table)?;

        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e * n + g] == g && table[g * n + e] == g))
            .ok_or(GroupError::NoIdentity)?;
        if identity != 0 {
            let relabel = |x: Elem| match x {
                0 => identity,
                x if x == identity => 0,
                x => x,
            };
            let mut swapped = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    swapped[relabel(a) * n + relabel(b)] = relabel(table[a * n + b]);
                }
            }
            table = swapped;
        }

        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Self::from_valid_table(name.into(), n, table))
    }

    fn from_valid_table(name: String, order: usize, table: Vec<Elem>) -> Self {
        let inverse = (0..order).map(|g| (0..order).find(|&h| table[g * order + h] == 0).expect("Latin row")).collect();
        let center = (0..order).filter(|&z| (0..order).all(|g| table[z * order + g] == table[g * order + z])).collect();
        FiniteGroup { name, order, table, inverse, center }
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        check_family_order("cyclic", n, n)?;
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Ok(Self::from_valid_table(format!("cyclic:{n}"), n, table))
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        check_family_order("dihedral", n, 2 * n)?;
        let order = 2 * n;
        let mut table = vec![0; order * order];
        for x in 0..order {
            let (i, j) = (x % n, x / n);
            for y in 0..order {
                let (k, l) = (y % n, y / n);
                let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
                table[x * order + y] = rot + n * ((j + l) % 2);
            }
        }
        Ok(Self::from_valid_table(format!("dihedral:{n}"), order, table))
    }

    pub fn quaternion8() -> Self {
        let mut table = vec![0; 64];
        for x in 0..8 {
            let (i, j) = (x % 4, x / 4);
            for y in 0..8 {
                let (k, l) = (y % 4, y / 4);
                let mut a = if j == 0 { (i + k) % 4 } else { (i + 4 - k) % 4 };
                let b = j + l;
                if b == 2 {
                    a = (a + 2) % 4;
                }
                table[x * 8 + y] = a + 4 * (b % 2);
            }
        }
        Self::from_valid_table("quaternion:8".into(), 8, table)
    }

    /// Modular group `<a, b | a^8 = b^2 = 1, b a b = a^5>` of order 16.
    pub fn modular16() -> Self {
        let mut table = vec![0; 256];
        for x in 0..16 {
            let (i, j) = (x % 8, x / 8);
            for y in 0..16 {
                let (k, l) = (y % 8, y / 8);
                let twisted = if j == 0 { k } else { (5 * k) % 8 };
                table[x * 16 + y] = (i + twisted) % 8 + 8 * ((j + l) % 2);
            }
        }
        Self::from_valid_table("modular:16".into(), 16, table)
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        let order = a.order * b.order;
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        let m = b.order;
        let mut table = vec![0; order * order];
        for x in 0..order {
            for y in 0..order {
                table[x * order + y] = a.mul(x / m, y / m) * m + b.mul(x % m, y % m);
            }
        }
        let name = format!("{}x{}", a.name, b.name);
        Ok(Self::from_valid_table(name, order, table))
    }

    /// Builds a group from a descriptor such as `dihedral:4` or
    /// `cyclic:4xcyclic:2`.
    pub fn from_descriptor(descriptor: &str) -> Result<Self, GroupError> {
        let compact: String = descriptor.chars().filter(|c| !c.is_whitespace()).collect();
        let factors = split_product(&compact);
        let mut iter = factors.iter();
        let first = iter.next().ok_or_else(|| GroupError::UnknownDescriptor(descriptor.to_string()))?;
        let mut group = Self::named(first)?;
        for factor in iter {
            group = Self::direct_product(&group, &Self::named(factor)?)?;
        }
        Ok(group)
    }

    fn named(factor: &str) -> Result<Self, GroupError> {
        let (family, param) =
            factor.split_once(':').ok_or_else(|| GroupError::UnknownDescriptor(factor.to_string()))?;
        let n: usize = param.parse().map_err(|_| GroupError::BadParameter {
            family: family.to_string(),
            message: format!("`{param}` is not a positive integer"),
        })?;
        let fixed = |expected: usize| {
            if n == expected {
                Ok(())
            } else {
                Err(GroupError::BadParameter {
                    family: family.to_string(),
                    message: format!("only {family}:{expected} is available"),
                })
            }
        };
        match family {
            "cyclic" => Self::cyclic(n),
            "dihedral" => Self::dihedral(n),
            "symmetric" => {
                fixed(3)?;
                let mut g = Self::dihedral(3)?;
                g.name = "symmetric:3".into();
                Ok(g)
            }
            "quaternion" => fixed(8).map(|_| Self::quaternion8()),
            "modular" => fixed(16).map(|_| Self::modular16()),
            _ => Err(GroupError::UnknownDescriptor(factor.to_string())),
        }
    }

    /// Parses the Cayley file format: first non-comment line is the order,
    /// followed by that many rows. Lines starting with `#` are comments.
    pub fn parse_cayley(name: impl Into<String>, text: &str) -> Result<Self, GroupError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) =
            lines.next().ok_or(GroupError::Malformed { line: 1, message: "missing order line".into() })?;
        let n: usize = header
            .parse()
            .map_err(|_| GroupError::Malformed { line: line_no, message: format!("`{header}` is not an order") })?;
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let mut rows = Vec::with_capacity(n);
        for (line_no, line) in lines {
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<Elem>().map_err(|_| GroupError::Malformed {
                        line: line_no,
                        message: format!("`{tok}` is not an element index"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if rows.len() == n {
                return Err(GroupError::Malformed { line: line_no, message: "too many rows".into() });
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(GroupError::Malformed {
                line: text.lines().count(),
                message: format!("expected {n} rows, found {}", rows.len()),
            });
        }
        Self::from_table(name, rows)
    }

    pub fn to_cayley(&self) -> String {
        let mut out = format!("# {}\n{}\n", self.name, self.order);
        write_rows(&mut out, self.order, &self.table);
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    /// `g^k` for any integer `k`.
    pub fn pow(&self, g: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(g) } else { g };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, g: Elem) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn center(&self) -> &[Elem] {
        &self.center
    }

    pub fn is_central(&self, z: Elem) -> bool {
        self.center.binary_search(&z).is_ok()
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    /// Subgroup generated by `gens`, as a sorted list.
    pub fn generated(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(w) = stack.pop() {
            for &g in gens {
                let wg = self.mul(w, g);
                if !seen[wg] {
                    seen[wg] = true;
                    stack.push(wg);
                }
            }
        }
        (0..self.order).filter(|&g| seen[g]).collect()
    }
}

/// Center of `group`, i.e. `{ z : z g = g z for all g }`.
pub fn center(group: &FiniteGroup) -> Vec<Elem> {
    group.center().to_vec()
}

/// Loads a group from a descriptor or, if `source` names an existing file, from
/// a Cayley table file.
pub fn load_group(source: &str) -> Result<FiniteGroup, GroupError> {
    let path = Path::new(source);
    if path.is_file() {
        let text =
            fs::read_to_string(path).map_err(|e| GroupError::Io { path: source.to_string(), message: e.to_string() })?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(source);
        return FiniteGroup::parse_cayley(name, &text);
    }
    FiniteGroup::from_descriptor(source)
}

pub(crate) fn write_rows(out: &mut String, n: usize, table: &[Elem]) {
    use std::fmt::Write;
    for row in table.chunks(n) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
}

fn check_latin(n: usize, table: &[Elem]) -> Result<(), GroupError> {
    for r in 0..n {
        let mut seen = vec![false; n];
        for c in 0..n {
            let v = table[r * n + c];
            if std::mem::replace(&mut seen[v], true) {
                return Err(GroupError::NotLatin { kind: "row", line: r, value: v });
            }
        }
    }
    for c in 0..n {
        let mut seen = vec![false; n];
        for r in 0..n {
            let v = table[r * n + c];
            if std::mem::replace(&mut seen[v], true) {
                return Err(GroupError::NotLatin { kind: "column", line: c, value: v });
            }
        }
    }
    Ok(())
}

fn check_family_order(family: &str, n: usize, order: usize) -> Result<(), GroupError> {
    if n == 0 {
        return Err(GroupError::BadParameter {
            family: family.to_string(),
            message: "parameter must be positive".into(),
        });
    }
    if order > MAX_GROUP_ORDER {
        return Err(GroupError::TooLarge(order));
    }
    Ok(())
}

/// Splits `cyclic:4xcyclic:2` into its factors. A factor boundary is an `x`
/// that follows a digit and precedes a letter.
fn split_product(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut parts = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len().saturating_sub(1) {
        if bytes[i] == b'x' && bytes[i - 1].is_ascii_digit() && bytes[i + 1].is_ascii_alphabetic() {
            parts.push(&s[start..i]);
            start = i + 1;
        }
    }
    if start < s.len() {
        parts.push(&s[start..]);
    }
    parts
}
