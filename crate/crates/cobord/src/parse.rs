//! The space-expression grammar used by the CLI and the C API.
//!
//! ```text
//! space   := term ('*' term)*
//! term    := 'P' <int>                      projective space
//!          | 'Pt'                           the point
//!          | 'PB' '(' space ';' div (',' div)* ')'
//!          | 'Hyp' '(' space ';' div ')'
//!          | 'Bl' '(' space ')'
//!          | '(' space ')'
//! div     := ['+'|'-'] dterm (('+'|'-') dterm)*
//! dterm   := <int> | [<int> ['*']] <ident>
//! ```
//!
//! Examples: `P3`, `P2*P1`, `PB(P2; 0, h)`, `Hyp(P1*P1; a+b)`, `Bl(P3)`.
//!
//! Hyperplane generators are named when a sub-expression is closed: a lone
//! projective space is called `h`, factors of a product are called
//! `a, b, c, ...` left to right. Divisor expressions inside `PB`/`Hyp` are
//! resolved against the ring of the base expression, so `PB(P2; 0, h)` sees
//! the base generator as `h`. Bundle generators are `xi`, then `xi2`, ...

use std::collections::BTreeSet;
use std::sync::Arc;

use num::Zero;

use crate::chern::{ChernError, CohClass, Ring, Space};
use crate::rat::{qi, Q};

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u32),
    Star,
    LParen,
    RParen,
    Semi,
    Comma,
    Plus,
    Minus,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn lex(input: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            ';' => {
                toks.push((i, Tok::Semi));
                i += 1;
            }
            ',' => {
                toks.push((i, Tok::Comma));
                i += 1;
            }
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: u32 = input[start..i]
                    .parse()
                    .map_err(|_| ParseError { pos: start, msg: "integer too large".into() })?;
                toks.push((start, Tok::Int(n)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((start, Tok::Ident(input[start..i].to_string())));
            }
            _ => return err(i, format!("unexpected character `{c}`")),
        }
    }
    Ok(Lexer { toks, pos: 0, end: input.len() })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_pos(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.peek_pos();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => err(pos, format!("expected {what}")),
        }
    }
}

/// Allocates generator names: a lone projective leaf is `h`, product leaves
/// are `a, b, c, ...`; bundle levels are `xi, xi2, ...`. Already-used names
/// are skipped.
struct Names {
    used: BTreeSet<String>,
}

const LEAF_POOL: [&str; 8] = ["a", "b", "c", "d", "f", "g", "y", "z"];

impl Names {
    fn new() -> Self {
        Names { used: BTreeSet::new() }
    }

    fn leaf(&mut self, lone: bool) -> String {
        if lone && !self.used.contains("h") {
            self.used.insert("h".into());
            return "h".into();
        }
        for cand in LEAF_POOL {
            if !self.used.contains(cand) {
                self.used.insert(cand.into());
                return cand.into();
            }
        }
        let mut k = 1;
        loop {
            let cand = format!("h{k}");
            if !self.used.contains(&cand) {
                self.used.insert(cand.clone());
                return cand;
            }
            k += 1;
        }
    }

    fn bundle(&mut self) -> String {
        if !self.used.contains("xi") {
            self.used.insert("xi".into());
            return "xi".into();
        }
        let mut k = 2;
        loop {
            let cand = format!("xi{k}");
            if !self.used.contains(&cand) {
                self.used.insert(cand.clone());
                return cand;
            }
            k += 1;
        }
    }
}

/// A parsed sub-expression whose projective leaves may still be unnamed.
enum Tree {
    Point,
    Proj(u32),
    Product(Box<Tree>, Box<Tree>),
    Built(Space),
}

impl Tree {
    fn unnamed_leaves(&self) -> u32 {
        match self {
            Tree::Proj(_) => 1,
            Tree::Product(a, b) => a.unnamed_leaves() + b.unnamed_leaves(),
            _ => 0,
        }
    }

    fn build(self, names: &mut Names, lone: bool) -> Result<Space, ParseError> {
        match self {
            Tree::Point => Ok(Space::point()),
            Tree::Proj(n) => Ok(Space::proj(n, &names.leaf(lone))),
            Tree::Product(a, b) => {
                let left = a.build(names, false)?;
                let right = b.build(names, false)?;
                Space::product(left, right).map_err(|e| ParseError { pos: 0, msg: e.to_string() })
            }
            Tree::Built(s) => Ok(s),
        }
    }
}

fn finalize(tree: Tree, names: &mut Names) -> Result<Space, ParseError> {
    let lone = tree.unnamed_leaves() == 1;
    tree.build(names, lone)
}

/// Parses a complete space expression.
pub fn parse_space(input: &str) -> Result<Space, ParseError> {
    let mut lx = lex(input)?;
    let mut names = Names::new();
    let tree = parse_product(&mut lx, &mut names)?;
    if lx.peek().is_some() {
        return err(lx.peek_pos(), "trailing input after space expression");
    }
    finalize(tree, &mut names)
}

fn parse_product(lx: &mut Lexer, names: &mut Names) -> Result<Tree, ParseError> {
    let mut acc = parse_term(lx, names)?;
    while lx.peek() == Some(&Tok::Star) {
        lx.next();
        let rhs = parse_term(lx, names)?;
        acc = Tree::Product(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_term(lx: &mut Lexer, names: &mut Names) -> Result<Tree, ParseError> {
    let pos = lx.peek_pos();
    match lx.next() {
        Some(Tok::LParen) => {
            let inner = parse_product(lx, names)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(inner)
        }
        Some(Tok::Ident(id)) => match id.as_str() {
            "Pt" => Ok(Tree::Point),
            "PB" => {
                lx.expect(Tok::LParen, "`(` after PB")?;
                let base_tree = parse_product(lx, names)?;
                let base = finalize(base_tree, names)?;
                let ring = ring_of(&base, pos)?;
                lx.expect(Tok::Semi, "`;` before the bundle classes")?;
                let mut classes = vec![parse_divisor_tokens(lx, &ring)?];
                while lx.peek() == Some(&Tok::Comma) {
                    lx.next();
                    classes.push(parse_divisor_tokens(lx, &ring)?);
                }
                lx.expect(Tok::RParen, "`)` after the bundle classes")?;
                let gen = names.bundle();
                Space::proj_bundle(base, classes, &gen)
                    .map(Tree::Built)
                    .map_err(|e| ParseError { pos, msg: e.to_string() })
            }
            "Hyp" => {
                lx.expect(Tok::LParen, "`(` after Hyp")?;
                let amb_tree = parse_product(lx, names)?;
                let ambient = finalize(amb_tree, names)?;
                let ring = ring_of(&ambient, pos)?;
                lx.expect(Tok::Semi, "`;` before the divisor class")?;
                let class = parse_divisor_tokens(lx, &ring)?;
                lx.expect(Tok::RParen, "`)` after the divisor class")?;
                Space::hypersurface(ambient, class)
                    .map(Tree::Built)
                    .map_err(|e| ParseError { pos, msg: e.to_string() })
            }
            "Bl" => {
                lx.expect(Tok::LParen, "`(` after Bl")?;
                let inner_tree = parse_product(lx, names)?;
                let inner = finalize(inner_tree, names)?;
                lx.expect(Tok::RParen, "`)` after Bl argument")?;
                Space::blowup_point(inner)
                    .map(Tree::Built)
                    .map_err(|e| ParseError { pos, msg: e.to_string() })
            }
            other => {
                if let Some(dims) = other.strip_prefix('P') {
                    if let Ok(n) = dims.parse::<u32>() {
                        return Ok(Tree::Proj(n));
                    }
                }
                err(pos, format!("unknown space constructor `{other}`"))
            }
        },
        _ => err(pos, "expected a space expression"),
    }
}

fn ring_of(space: &Space, pos: usize) -> Result<Arc<Ring>, ParseError> {
    space
        .geometry()
        .map(|g| g.ring)
        .map_err(|e: ChernError| ParseError { pos, msg: e.to_string() })
}

/// Parses a divisor expression against the ring of an existing space.
pub fn parse_divisor(input: &str, space: &Space) -> Result<CohClass, ParseError> {
    let ring = ring_of(space, 0)?;
    let mut lx = lex(input)?;
    let class = parse_divisor_tokens(&mut lx, &ring)?;
    if lx.peek().is_some() {
        return err(lx.peek_pos(), "trailing input after divisor expression");
    }
    Ok(class)
}

fn parse_divisor_tokens(lx: &mut Lexer, ring: &Arc<Ring>) -> Result<CohClass, ParseError> {
    let mut acc = CohClass::zero(ring);
    let mut first = true;
    loop {
        let sign = match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                qi(1)
            }
            Some(Tok::Minus) => {
                lx.next();
                qi(-1)
            }
            _ if first => qi(1),
            _ => break,
        };
        first = false;
        let term = parse_divisor_term(lx, ring)?;
        acc = acc
            .add(&term.scale(&sign))
            .map_err(|e| ParseError { pos: lx.peek_pos(), msg: e.to_string() })?;
    }
    if !acc.is_divisor() {
        return err(lx.peek_pos(), "expression is not a degree-1 divisor class");
    }
    Ok(acc)
}

fn parse_divisor_term(lx: &mut Lexer, ring: &Arc<Ring>) -> Result<CohClass, ParseError> {
    let pos = lx.peek_pos();
    let mut coeff: Q = qi(1);
    let mut saw_int = false;
    if let Some(Tok::Int(n)) = lx.peek() {
        coeff = qi(*n as i64);
        saw_int = true;
        lx.next();
        if lx.peek() == Some(&Tok::Star) {
            lx.next();
        }
    }
    match lx.peek() {
        Some(Tok::Ident(name)) => {
            let name = name.clone();
            lx.next();
            let gen = CohClass::generator(ring, &name)
                .map_err(|e| ParseError { pos, msg: e.to_string() })?;
            Ok(gen.scale(&coeff))
        }
        _ if saw_int => {
            if coeff.is_zero() {
                Ok(CohClass::zero(ring))
            } else {
                err(pos, "a bare integer in a divisor must be 0")
            }
        }
        _ => err(pos, "expected a divisor term"),
    }
}

/// Renders a space back into the expression grammar (canonical form, used
/// for cache keys and reporting).
pub fn space_expr(space: &Space) -> String {
    crate::chern::render_expr(space)
}
