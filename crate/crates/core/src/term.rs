//! Terms over one binary operation written by juxtaposition, identities
//! between them, and the named Bol-Moufang type identities.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::word::Var;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum LoopTerm {
    Var(Var),
    Mul(Box<LoopTerm>, Box<LoopTerm>),
}

impl LoopTerm {
    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: LoopTerm, b: LoopTerm) -> LoopTerm {
        LoopTerm::Mul(Box::new(a), Box::new(b))
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Var>) {
        match self {
            LoopTerm::Var(v) => out.push(*v),
            LoopTerm::Mul(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Postfix program with variables replaced by their index in `vars`.
    pub fn compile(&self, vars: &[Var]) -> CompiledTerm {
        let mut ops = Vec::new();
        self.emit(vars, &mut ops);
        CompiledTerm { ops }
    }

    fn emit(&self, vars: &[Var], ops: &mut Vec<TermOp>) {
        match self {
            LoopTerm::Var(v) => ops.push(TermOp::Push(vars.iter().position(|w| w == v).expect("variable listed"))),
            LoopTerm::Mul(a, b) => {
                a.emit(vars, ops);
                b.emit(vars, ops);
                ops.push(TermOp::Mul);
            }
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopTerm::Var(_) => write!(f, "{self}"),
            LoopTerm::Mul(..) => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for LoopTerm {
    /// Every compound operand is parenthesized, e.g. `((xy)y)z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopTerm::Var(v) => write!(f, "{}", *v as char),
            LoopTerm::Mul(a, b) => {
                a.fmt_operand(f)?;
                b.fmt_operand(f)
            }
        }
    }
}

impl fmt::Debug for LoopTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermOp {
    Push(usize),
    Mul,
}

/// A term flattened for repeated evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledTerm {
    ops: Vec<TermOp>,
}

impl CompiledTerm {
    pub fn eval<T: Copy>(&self, val: &[T], stack: &mut Vec<T>, mul: impl Fn(T, T) -> T) -> T {
        stack.clear();
        for op in &self.ops {
            match *op {
                TermOp::Push(i) => stack.push(val[i]),
                TermOp::Mul => {
                    let b = stack.pop().expect("well-formed");
                    let a = stack.pop().expect("well-formed");
                    stack.push(mul(a, b));
                }
            }
        }
        stack.pop().expect("well-formed")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("identity `{0}` needs exactly one `=`")]
    MissingEquals(String),
    #[error("empty term at position {0}")]
    EmptyTerm(usize),
    #[error("unbalanced parentheses at position {0}")]
    Unbalanced(usize),
    #[error("unexpected symbol `{ch}` at position {pos}")]
    BadSymbol { ch: char, pos: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LoopIdentity {
    pub lhs: LoopTerm,
    pub rhs: LoopTerm,
    vars: Vec<Var>,
}

impl LoopIdentity {
    pub fn new(lhs: LoopTerm, rhs: LoopTerm) -> Self {
        let mut vars = lhs.leaves();
        vars.extend(rhs.leaves());
        vars.sort_unstable();
        vars.dedup();
        LoopIdentity { lhs, rhs, vars }
    }

    /// The variables, sorted.
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn is_strictly_balanced(&self) -> bool {
        self.lhs.leaves() == self.rhs.leaves()
    }

    pub fn compile(&self) -> (CompiledTerm, CompiledTerm) {
        (self.lhs.compile(&self.vars), self.rhs.compile(&self.vars))
    }
}

impl fmt::Display for LoopIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for LoopIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for LoopIdentity {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_identity(s)
    }
}

pub fn parse_identity(src: &str) -> Result<LoopIdentity, ParseError> {
    let eq: Vec<usize> = src.char_indices().filter(|&(_, c)| c == '=').map(|(i, _)| i).collect();
    let [split] = eq[..] else {
        return Err(ParseError::MissingEquals(src.to_string()));
    };
    let lhs = parse_term(&src[..split], 0)?;
    let rhs = parse_term(&src[split + 1..], split + 1)?;
    Ok(LoopIdentity::new(lhs, rhs))
}

/// Parses one side; `offset` shifts reported positions.
pub fn parse_term(src: &str, offset: usize) -> Result<LoopTerm, ParseError> {
    let tokens: Vec<(usize, char)> =
        src.char_indices().filter(|(_, c)| !c.is_whitespace()).map(|(i, c)| (i + offset, c)).collect();
    let mut parser = Parser { tokens: &tokens, pos: 0, end: offset + src.len() };
    let term = parser.term()?;
    match parser.peek() {
        None => Ok(term),
        Some((pos, ')')) => Err(ParseError::Unbalanced(pos)),
        Some((pos, ch)) => Err(ParseError::BadSymbol { ch, pos }),
    }
}

struct Parser<'a> {
    tokens: &'a [(usize, char)],
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<(usize, char)> {
        self.tokens.get(self.pos).copied()
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |(p, _)| p)
    }

    /// term := primary+, left-associated.
    fn term(&mut self) -> Result<LoopTerm, ParseError> {
        let mut acc: Option<LoopTerm> = None;
        while let Some(p) = self.primary()? {
            acc = Some(match acc {
                None => p,
                Some(a) => LoopTerm::mul(a, p),
            });
        }
        acc.ok_or(ParseError::EmptyTerm(self.here()))
    }

    fn primary(&mut self) -> Result<Option<LoopTerm>, ParseError> {
        let Some((pos, c)) = self.peek() else {
            return Ok(None);
        };
        match c {
            'a'..='z' => {
                self.pos += 1;
                Ok(Some(LoopTerm::Var(c as u8)))
            }
            '(' => {
                self.pos += 1;
                let inner = self.term()?;
                match self.peek() {
                    Some((_, ')')) => {
                        self.pos += 1;
                        Ok(Some(inner))
                    }
                    _ => Err(ParseError::Unbalanced(pos)),
                }
            }
            ')' => Ok(None),
            ch => Err(ParseError::BadSymbol { ch, pos }),
        }
    }
}

pub fn check_strictly_balanced(id: &LoopIdentity) -> bool {
    id.is_strictly_balanced()
}

/// Names and defining identities, in lattice order.
pub const BUILTIN_SOURCES: [(&str, &str); 16] = [
    ("assoc", "x(yz)=(xy)z"),
    ("extra", "x(y(zx))=((xy)z)x"),
    ("moufang", "x(y(xz))=((xy)x)z"),
    ("c", "((xy)y)z=x(y(yz))"),
    ("lbol", "x(y(xz))=(x(yx))z"),
    ("rbol", "((zx)y)x=z((xy)x)"),
    ("lc", "(xx)(yz)=(x(xy))z"),
    ("rc", "x((yz)z)=(xy)(zz)"),
    ("flexible", "x(yx)=(xy)x"),
    ("lalt", "x(xy)=(xx)y"),
    ("ralt", "x(yy)=(xy)y"),
    ("lns", "((xx)y)z=(xx)(yz)"),
    ("mns", "(x(yy))z=x((yy)z)"),
    ("rns", "(xy)(zz)=x(y(zz))"),
    ("rif", "(xy)(z(xy))=((x(yz))x)y"),
    ("flexible-bm", "(x(yx))z=((xy)x)z"),
];

pub fn builtin_identities() -> BTreeMap<&'static str, LoopIdentity> {
    BUILTIN_SOURCES.iter().map(|&(name, src)| (name, parse_identity(src).expect("builtin parses"))).collect()
}

/// Builtin by name.
pub fn builtin(name: &str) -> Option<LoopIdentity> {
    BUILTIN_SOURCES.iter().find(|(n, _)| *n == name).map(|(_, src)| parse_identity(src).expect("builtin parses"))
}

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN_SOURCES.iter().map(|(n, _)| *n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: char) -> LoopTerm {
        LoopTerm::Var(c as u8)
    }

    #[test]
    fn parses_c_identity() {
        let id = parse_identity("((xy)y)z=x(y(yz))").unwrap();
        assert_eq!(id.vars(), b"xyz");
        let lhs = LoopTerm::mul(LoopTerm::mul(LoopTerm::mul(v('x'), v('y')), v('y')), v('z'));
        assert_eq!(id.lhs, lhs);
        assert_eq!(id.to_string(), "((xy)y)z=x(y(yz))");
    }

    #[test]
    fn parses_flexible_law() {
        let id = parse_identity("x(yx)=(xy)x").unwrap();
        assert_eq!(id.lhs, LoopTerm::mul(v('x'), LoopTerm::mul(v('y'), v('x'))));
        assert_eq!(id.rhs, LoopTerm::mul(LoopTerm::mul(v('x'), v('y')), v('x')));
    }

    #[test]
    fn juxtaposition_associates_left() {
        let a = parse_identity("xyz=x(yz)").unwrap();
        let b = parse_identity("(xy)z=x(yz)").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_identity(" x y z = x ( y z ) ").unwrap(), b);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_identity("x(yz=xy"), Err(ParseError::Unbalanced(1))));
        assert!(matches!(parse_identity("xy)=xy"), Err(ParseError::Unbalanced(2))));
        assert!(matches!(parse_identity("=xy"), Err(ParseError::EmptyTerm(0))));
        assert!(matches!(parse_identity("xy="), Err(ParseError::EmptyTerm(3))));
        assert!(matches!(parse_identity("x()=x"), Err(ParseError::EmptyTerm(2))));
        assert!(matches!(parse_identity("x+y=y+x"), Err(ParseError::BadSymbol { ch: '+', pos: 1 })));
        assert!(matches!(parse_identity("xy"), Err(ParseError::MissingEquals(_))));
        assert!(matches!(parse_identity("x=y=z"), Err(ParseError::MissingEquals(_))));
    }

    #[test]
    fn strict_balance() {
        assert!(check_strictly_balanced(&parse_identity("((xy)y)z=x(y(yz))").unwrap()));
        assert!(check_strictly_balanced(&parse_identity("x(yx)=(xy)x").unwrap()));
        assert!(!check_strictly_balanced(&parse_identity("xy=yx").unwrap()));
        assert!(!check_strictly_balanced(&parse_identity("xx=x").unwrap()));
    }

    #[test]
    fn builtins_are_balanced_and_round_trip() {
        let all = builtin_identities();
        assert_eq!(all.len(), 16);
        for (name, src) in BUILTIN_SOURCES {
            let id = &all[name];
            assert!(id.is_strictly_balanced(), "{name}");
            assert_eq!(id.to_string(), src, "{name}");
            assert_eq!(&parse_identity(&id.to_string()).unwrap(), id);
        }
        assert_eq!(builtin("moufang").unwrap().to_string(), "x(y(xz))=((xy)x)z");
        assert_eq!(builtin("c").unwrap().to_string(), "((xy)y)z=x(y(yz))");
        assert_eq!(builtin("assoc").unwrap().to_string(), "x(yz)=(xy)z");
        assert!(builtin("nope").is_none());
    }

    fn tree_eval(t: &LoopTerm, val: &dyn Fn(Var) -> usize, mul: &dyn Fn(usize, usize) -> usize) -> usize {
        match t {
            LoopTerm::Var(v) => val(*v),
            LoopTerm::Mul(a, b) => mul(tree_eval(a, val, mul), tree_eval(b, val, mul)),
        }
    }

    #[test]
    fn compiled_terms_evaluate_like_trees() {
        // a non-associative quasigroup on Z/7
        let mul = |a: usize, b: usize| (2 * a + 3 * b + 1) % 7;
        let mut stack = Vec::new();
        for (_, id) in builtin_identities() {
            let (l, r) = id.compile();
            for code in 0..343 {
                let val = [code % 7, code / 7 % 7, code / 49];
                let lookup = |v: Var| val[id.vars().iter().position(|&w| w == v).unwrap()];
                assert_eq!(l.eval(&val, &mut stack, mul), tree_eval(&id.lhs, &lookup, &mul));
                assert_eq!(r.eval(&val, &mut stack, mul), tree_eval(&id.rhs, &lookup, &mul));
            }
        }
    }

    fn arb_term() -> impl Strategy<Value = LoopTerm> {
        let leaf = (0u8..4).prop_map(|i| LoopTerm::Var(b"xyzw"[i as usize]));
        leaf.prop_recursive(4, 16, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| LoopTerm::mul(a, b)))
    }

    proptest! {
        #[test]
        fn format_then_parse_is_identity(a in arb_term(), b in arb_term()) {
            let id = LoopIdentity::new(a, b);
            prop_assert_eq!(parse_identity(&id.to_string()).unwrap(), id);
        }
    }
}
