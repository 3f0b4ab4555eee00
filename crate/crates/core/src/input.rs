//! Text format for problem files.
//!
//! A problem is a sequence of statements, each ending in a semicolon:
//!
//! ```text
//! # comments run to the end of the line
//! ring base y1 y2 fiber x1 x2 ;
//! ideal [ y1^2 - y2^3 ] ;
//! module q=1 gens [ y1*x1 - y2, meet[x1; y1 + x2] ] ;
//! map [ x1, x1*x2 ] ;
//! flags [ assume-domain, normal-target ] ;
//! ```
//!
//! The `ring` statement must come first and declares base variables (the
//! last one is the distinguished direction of the flatness tests) and
//! optional fiber variables. `ideal` lists generators in the base
//! variables. `module` gives the rank and the relation generators — bare
//! polynomials at rank one, bracketed tuples `[p1, ..., pq]` otherwise. A
//! `meet[list; list]` item (rank one only) expands to generators of the
//! intersection of the two listed ideals, computed on the spot. `map`
//! lists the coordinate functions of an openness problem, and `flags`
//! asserts the extra hypotheses by name.
//!
//! Polynomials use integer or `a/b` rational coefficients, `^` powers,
//! and products written with `*` or by plain juxtaposition; `+` and `-`
//! separate terms and parentheses group. The canonical form printed by
//! [`Polynomial`]'s `Display` parses back to an equal polynomial.

use crate::error::Error;
use crate::flatness::{FlatnessAssumptions, ModulePresentation};
use crate::groebner::{FreeModuleElement, Submodule};
use crate::openness::{MapPresentation, OpennessOptions};
use crate::poly::{Coeff, Polynomial, VarUniverse};
use crate::Result;
use num_bigint::BigInt;
use std::sync::Arc;

/// Hypothesis flags a problem file can assert.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProblemFlags {
    pub assume_domain: bool,
    pub assume_embedding: bool,
    pub pure_dimensional: bool,
    pub normal_target: bool,
}

impl ProblemFlags {
    pub fn flatness_assumptions(&self) -> FlatnessAssumptions {
        FlatnessAssumptions { domain: self.assume_domain, embedding: self.assume_embedding }
    }

    pub fn openness_options(&self) -> OpennessOptions {
        OpennessOptions {
            pure_dimensional_source: self.pure_dimensional,
            normal_target: self.normal_target,
            chart: Default::default(),
        }
    }
}

/// A parsed problem file.
#[derive(Clone, Debug)]
pub struct Problem {
    pub universe: Arc<VarUniverse>,
    /// Generators from the `ideal` statement (empty list or statement
    /// omitted: the base is the whole affine space).
    pub base_gens: Vec<Polynomial>,
    /// Rank from the `module` statement; one if the statement is absent.
    pub rank: usize,
    pub module_gens: Vec<FreeModuleElement>,
    /// Map components if a `map` statement is present.
    pub map_components: Option<Vec<Polynomial>>,
    pub flags: ProblemFlags,
}

impl Problem {
    /// View the problem as a flatness instance.
    pub fn flatness_presentation(&self) -> Result<ModulePresentation> {
        ModulePresentation::new(
            &self.universe,
            self.rank,
            self.module_gens.clone(),
            self.base_gens.clone(),
        )
    }

    /// View the problem as an openness instance: the `map` statement gives
    /// the components, the `module` statement (rank one) the source ideal,
    /// and the `ideal` statement the target ideal.
    pub fn map_presentation(&self) -> Result<MapPresentation> {
        let components = self
            .map_components
            .clone()
            .ok_or_else(|| Error::Input("an openness problem needs a map statement".into()))?;
        if self.rank != 1 {
            return Err(Error::Input("the source ideal of a map has rank one".into()));
        }
        let source_gens: Vec<Polynomial> = self
            .module_gens
            .iter()
            .map(|g| g.component(0).clone())
            .collect();
        MapPresentation::new(&self.universe, components, source_gens, self.base_gens.clone())
    }
}

/// Parse a whole problem file.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let mut parser = Parser::new(text)?;
    parser.problem()
}

/// Parse a single polynomial over a known universe (used for command-line
/// arguments such as colon divisors).
pub fn parse_poly(text: &str, universe: &Arc<VarUniverse>) -> Result<Polynomial> {
    let mut parser = Parser::new(text)?;
    parser.universe = Some(universe.clone());
    let poly = parser.poly()?;
    if parser.pos < parser.toks.len() {
        let (_, line, col) = parser.toks[parser.pos].clone();
        return Err(Error::Parse { line, col, msg: "trailing input after polynomial".into() });
    }
    Ok(poly)
}

const KEYWORDS: &[&str] =
    &["ring", "base", "fiber", "ideal", "module", "map", "flags", "gens", "q", "meet"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Semi,
    Caret,
    Star,
    Plus,
    Minus,
    Eq,
    Slash,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("number `{s}`"),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Slash => "`/`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                advance(&mut chars);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    advance(&mut chars);
                    if c == '\n' {
                        break;
                    }
                }
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(advance(&mut chars));
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Int(digits), tline, tcol));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(advance(&mut chars));
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(ident), tline, tcol));
            }
            _ => {
                let tok = match c {
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '^' => Tok::Caret,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '=' => Tok::Eq,
                    '/' => Tok::Slash,
                    other => {
                        return Err(Error::Parse {
                            line: tline,
                            col: tcol,
                            msg: format!("unexpected character `{other}`"),
                        })
                    }
                };
                advance(&mut chars);
                toks.push((tok, tline, tcol));
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    universe: Option<Arc<VarUniverse>>,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let toks = lex(text)?;
        let end = (
            text.lines().count().max(1),
            text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1),
        );
        Ok(Parser { toks, pos: 0, universe: None, end })
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|(_, l, c)| (*l, *c)).unwrap_or(self.end)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn next_tok(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<()> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let msg = format!("expected {}, found {}", want.describe(), t.describe());
                self.fail(msg)
            }
            None => self.fail(format!("expected {}, found end of input", want.describe())),
        }
    }

    fn eat_ident(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(t) => {
                let msg = format!("expected {what}, found {}", t.describe());
                self.fail(msg)
            }
            None => self.fail(format!("expected {what}, found end of input")),
        }
    }

    fn int_u32(&mut self, what: &str) -> Result<u32> {
        match self.peek() {
            Some(Tok::Int(s)) => {
                let parsed = s.parse::<u32>();
                let s = s.clone();
                self.pos += 1;
                parsed.map_err(|_| {
                    let (line, col) = self
                        .toks
                        .get(self.pos - 1)
                        .map(|(_, l, c)| (*l, *c))
                        .unwrap_or(self.end);
                    Error::Parse { line, col, msg: format!("{what} `{s}` out of range") }
                })
            }
            Some(t) => {
                let msg = format!("expected {what}, found {}", t.describe());
                self.fail(msg)
            }
            None => self.fail(format!("expected {what}, found end of input")),
        }
    }

    // ----- problem structure ------------------------------------------------

    fn problem(&mut self) -> Result<Problem> {
        self.ring()?;
        let universe = self.universe.clone().expect("ring sets the universe");

        let mut base_gens: Option<Vec<Polynomial>> = None;
        let mut module: Option<(usize, Vec<FreeModuleElement>)> = None;
        let mut map_components: Option<Vec<Polynomial>> = None;
        let mut flags: Option<ProblemFlags> = None;

        while self.peek().is_some() {
            let word = self.ident("a statement keyword")?;
            match word.as_str() {
                "ideal" => {
                    if base_gens.is_some() {
                        return self.fail("duplicate `ideal` statement");
                    }
                    base_gens = Some(self.generator_list(1)?.into_iter().flatten().collect());
                    self.expect(&Tok::Semi)?;
                }
                "module" => {
                    if module.is_some() {
                        return self.fail("duplicate `module` statement");
                    }
                    module = Some(self.module_statement()?);
                }
                "map" => {
                    if map_components.is_some() {
                        return self.fail("duplicate `map` statement");
                    }
                    map_components = Some(self.poly_list()?);
                    self.expect(&Tok::Semi)?;
                }
                "flags" => {
                    if flags.is_some() {
                        return self.fail("duplicate `flags` statement");
                    }
                    flags = Some(self.flags_statement()?);
                    self.expect(&Tok::Semi)?;
                }
                "ring" => return self.fail("duplicate `ring` statement"),
                other => {
                    return self.fail(format!(
                        "unknown statement `{other}` (expected ideal, module, map, or flags)"
                    ))
                }
            }
        }

        let (rank, module_gens) = module.unwrap_or((1, Vec::new()));
        Ok(Problem {
            universe,
            base_gens: base_gens.unwrap_or_default(),
            rank,
            module_gens,
            map_components,
            flags: flags.unwrap_or_default(),
        })
    }

    fn ring(&mut self) -> Result<()> {
        if !self.eat_ident("ring") {
            return self.fail("a problem starts with a `ring` statement");
        }
        if !self.eat_ident("base") {
            return self.fail("expected `base` after `ring`");
        }
        let mut base = Vec::new();
        let mut fiber = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Ident(s)) if s == "fiber" => {
                    self.pos += 1;
                    while let Some(Tok::Ident(s)) = self.peek() {
                        if KEYWORDS.contains(&s.as_str()) {
                            return self.fail(format!("`{s}` is reserved and cannot name a variable"));
                        }
                        fiber.push(s.clone());
                        self.pos += 1;
                    }
                    break;
                }
                Some(Tok::Ident(s)) => {
                    if KEYWORDS.contains(&s.as_str()) {
                        return self.fail(format!("`{s}` is reserved and cannot name a variable"));
                    }
                    base.push(s.clone());
                    self.pos += 1;
                }
                _ => break,
            }
        }
        if base.is_empty() {
            return self.fail("the ring needs at least one base variable");
        }
        self.expect(&Tok::Semi)?;
        self.universe = Some(VarUniverse::new(&base, &fiber)?);
        Ok(())
    }

    fn module_statement(&mut self) -> Result<(usize, Vec<FreeModuleElement>)> {
        if !self.eat_ident("q") {
            return self.fail("expected `q=<rank>` after `module`");
        }
        self.expect(&Tok::Eq)?;
        let rank = self.int_u32("module rank")? as usize;
        if rank == 0 {
            return self.fail("module rank must be positive");
        }
        if !self.eat_ident("gens") {
            return self.fail("expected `gens` after the module rank");
        }
        let rows = self.generator_list(rank)?;
        self.expect(&Tok::Semi)?;
        let universe = self.universe.clone().expect("ring parsed first");
        let gens = rows
            .into_iter()
            .map(|components| {
                if components.iter().all(|p| p.is_zero()) {
                    FreeModuleElement::new(vec![Polynomial::zero(&universe); rank])
                } else {
                    FreeModuleElement::new(components)
                }
            })
            .collect();
        Ok((rank, gens))
    }

    /// A bracketed list of generators: bare polynomials (or `meet` items)
    /// at rank one, `[p1, ..., pq]` tuples otherwise.
    fn generator_list(&mut self, rank: usize) -> Result<Vec<Vec<Polynomial>>> {
        self.expect(&Tok::LBrack)?;
        let mut rows: Vec<Vec<Polynomial>> = Vec::new();
        if matches!(self.peek(), Some(Tok::RBrack)) {
            self.pos += 1;
            return Ok(rows);
        }
        loop {
            if rank == 1 {
                if self.eat_ident("meet") {
                    for p in self.meet_item()? {
                        rows.push(vec![p]);
                    }
                } else {
                    rows.push(vec![self.poly()?]);
                }
            } else if matches!(self.peek(), Some(Tok::Ident(s)) if s == "meet") {
                return self.fail("`meet` items need a rank-one module");
            } else {
                self.expect(&Tok::LBrack)?;
                let mut tuple = Vec::with_capacity(rank);
                loop {
                    tuple.push(self.poly()?);
                    if matches!(self.peek(), Some(Tok::Comma)) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect(&Tok::RBrack)?;
                if tuple.len() != rank {
                    return self.fail(format!(
                        "generator tuple has {} entries but the rank is {rank}",
                        tuple.len()
                    ));
                }
                rows.push(tuple);
            }
            match self.next_tok() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBrack) => break,
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return self.fail("expected `,` or `]` in generator list");
                }
            }
        }
        Ok(rows)
    }

    /// `meet[p, ...; p, ...]`: generators of the intersection of the two
    /// listed ideals, computed here so the expansion is part of parsing.
    fn meet_item(&mut self) -> Result<Vec<Polynomial>> {
        self.expect(&Tok::LBrack)?;
        let universe = self.universe.clone().expect("ring parsed first");
        let mut left = Vec::new();
        loop {
            left.push(self.poly()?);
            match self.next_tok() {
                Some(Tok::Comma) => continue,
                Some(Tok::Semi) => break,
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return self.fail("expected `,` or `;` in the first meet list");
                }
            }
        }
        let mut right = Vec::new();
        loop {
            right.push(self.poly()?);
            match self.next_tok() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBrack) => break,
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return self.fail("expected `,` or `]` in the second meet list");
                }
            }
        }
        let a = Submodule::ideal(&universe, left)?;
        let b = Submodule::ideal(&universe, right)?;
        Ok(a.intersect(&b)?.gen_polys())
    }

    fn poly_list(&mut self) -> Result<Vec<Polynomial>> {
        self.expect(&Tok::LBrack)?;
        let mut polys = Vec::new();
        if matches!(self.peek(), Some(Tok::RBrack)) {
            self.pos += 1;
            return Ok(polys);
        }
        loop {
            polys.push(self.poly()?);
            match self.next_tok() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBrack) => break,
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return self.fail("expected `,` or `]` in list");
                }
            }
        }
        Ok(polys)
    }

    fn flags_statement(&mut self) -> Result<ProblemFlags> {
        self.expect(&Tok::LBrack)?;
        let mut flags = ProblemFlags::default();
        if matches!(self.peek(), Some(Tok::RBrack)) {
            self.pos += 1;
            return Ok(flags);
        }
        loop {
            let mut name = self.ident("a flag name")?;
            while matches!(self.peek(), Some(Tok::Minus)) {
                self.pos += 1;
                name.push('-');
                name.push_str(&self.ident("the rest of the flag name")?);
            }
            match name.as_str() {
                "assume-domain" => flags.assume_domain = true,
                "assume-embedding" => flags.assume_embedding = true,
                "pure-dimensional" => flags.pure_dimensional = true,
                "normal-target" => flags.normal_target = true,
                other => {
                    return self.fail(format!(
                        "unknown flag `{other}` (expected assume-domain, assume-embedding, \
                         pure-dimensional, or normal-target)"
                    ))
                }
            }
            match self.next_tok() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBrack) => break,
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return self.fail("expected `,` or `]` in flags list");
                }
            }
        }
        Ok(flags)
    }

    // ----- polynomials ------------------------------------------------------

    fn poly(&mut self) -> Result<Polynomial> {
        let universe = match &self.universe {
            Some(u) => u.clone(),
            None => return self.fail("polynomials need a ring declaration first"),
        };
        let mut negate = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term(&universe)?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term(&universe)?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term(&universe)?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self, universe: &Arc<VarUniverse>) -> Result<Polynomial> {
        let mut acc = self.factor(universe)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor(universe)?;
                    acc = &acc * &f;
                }
                // Juxtaposition: a factor can start right after another.
                Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                    let f = self.factor(universe)?;
                    acc = &acc * &f;
                }
                Some(Tok::Int(_)) | Some(Tok::LParen) => {
                    let f = self.factor(universe)?;
                    acc = &acc * &f;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self, universe: &Arc<VarUniverse>) -> Result<Polynomial> {
        let mut atom = self.atom(universe)?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let e = self.int_u32("exponent")?;
            atom = atom.pow(e);
        }
        Ok(atom)
    }

    fn atom(&mut self, universe: &Arc<VarUniverse>) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Int(digits)) => {
                self.pos += 1;
                let numer = BigInt::parse_bytes(digits.as_bytes(), 10)
                    .expect("lexer produced digits");
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.pos += 1;
                    let denom_digits = match self.peek() {
                        Some(Tok::Int(d)) => d.clone(),
                        _ => return self.fail("expected a denominator after `/`"),
                    };
                    self.pos += 1;
                    let denom = BigInt::parse_bytes(denom_digits.as_bytes(), 10)
                        .expect("lexer produced digits");
                    if denom == BigInt::from(0) {
                        return self.fail("zero denominator");
                    }
                    Ok(Polynomial::constant(universe, Coeff::new(numer, denom)))
                } else {
                    Ok(Polynomial::constant(universe, Coeff::from_integer(numer)))
                }
            }
            Some(Tok::Ident(name)) => {
                if KEYWORDS.contains(&name.as_str()) {
                    return self.fail(format!("`{name}` is reserved and cannot appear here"));
                }
                match universe.index_of(&name) {
                    Some(i) => {
                        self.pos += 1;
                        Ok(Polynomial::var(universe, i))
                    }
                    None => self.fail(format!("unknown variable `{name}`")),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.poly()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            Some(t) => self.fail(format!("expected a polynomial, found {}", t.describe())),
            None => self.fail("expected a polynomial, found end of input"),
        }
    }
}
