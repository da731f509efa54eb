//! The shared input grammar: polynomials (`3/2*x^2*y - z + 1`), script
//! files (`ring Q[x,y]; ideal (y - x^2, y);`), first-order sentences
//! (`forall x. exists y. x*y = 1 | x = 0`), and the JSON corpus format for
//! transfer instances. Errors carry line and column.

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::{MultiPoly, RingCtx};
use crate::scalar::{FieldTag, Scalar};
use crate::transfer::TransferInstance;
use crate::ultra::{Formula, Sentence, Term};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Symbol(char),
    Arrow,    // ->
    NotEqual, // !=
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line,
                col: start_col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            out.push(Token {
                tok: Tok::Int(s),
                line,
                col: start_col,
            });
            continue;
        }
        if c == '-' && i + 1 < chars.len() && chars[i + 1] == '>' {
            out.push(Token {
                tok: Tok::Arrow,
                line,
                col: start_col,
            });
            i += 2;
            col += 2;
            continue;
        }
        if c == '!' && i + 1 < chars.len() && chars[i + 1] == '=' {
            out.push(Token {
                tok: Tok::NotEqual,
                line,
                col: start_col,
            });
            i += 2;
            col += 2;
            continue;
        }
        if "+-*/^()[],;:=|&!.".contains(c) {
            out.push(Token {
                tok: Tok::Symbol(c),
                line,
                col: start_col,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Parse {
            line,
            column: start_col,
            message: format!("unexpected character {c:?}"),
        });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(input: &str) -> Result<Parser> {
        Ok(Parser {
            tokens: tokenize(input)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn location(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.location();
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_symbol(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Symbol(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            other => Err(self.error(format!("expected {c:?}, found {other:?}"))),
        }
    }

    fn eat_symbol(&mut self, c: char) -> bool {
        matches!(self.peek(), Some(Tok::Symbol(s)) if *s == c) && {
            self.pos += 1;
            true
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            other => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error(format!("expected identifier, found {other:?}")))
            }
        }
    }

    fn expect_int(&mut self) -> Result<i64> {
        match self.next() {
            Some(Tok::Int(s)) => s
                .parse::<i64>()
                .map_err(|_| self.error("integer out of range")),
            other => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error(format!("expected integer, found {other:?}")))
            }
        }
    }
}

// ---------- polynomials ----------

fn parse_rational(p: &mut Parser) -> Result<BigRational> {
    let num = match p.next() {
        Some(Tok::Int(s)) => BigInt::from_str(&s).map_err(|_| p.error("bad integer"))?,
        other => {
            p.pos = p.pos.saturating_sub(1);
            return Err(p.error(format!("expected number, found {other:?}")));
        }
    };
    if p.eat_symbol('/') {
        let den = match p.next() {
            Some(Tok::Int(s)) => BigInt::from_str(&s).map_err(|_| p.error("bad integer"))?,
            other => {
                p.pos = p.pos.saturating_sub(1);
                return Err(p.error(format!("expected denominator, found {other:?}")));
            }
        };
        if den == BigInt::from(0) {
            return Err(p.error("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    } else {
        Ok(BigRational::from(num))
    }
}

fn coefficient_scalar(ring: &Arc<RingCtx>, q: BigRational, p: &Parser) -> Result<Scalar> {
    match ring.field {
        FieldTag::Rational => Ok(Scalar::Rational(q)),
        FieldTag::Prime(pr) => Scalar::Rational(q)
            .reduce_mod_p(pr)
            .map_err(|_| p.error(format!("coefficient denominator divisible by {pr}"))),
    }
}

/// factor := rational | var [^ int] | '(' expr ')'
fn parse_factor(p: &mut Parser, ring: &Arc<RingCtx>) -> Result<MultiPoly> {
    match p.peek().cloned() {
        Some(Tok::Int(_)) => {
            let q = parse_rational(p)?;
            let c = coefficient_scalar(ring, q, p)?;
            let mut acc = MultiPoly::constant(ring, c);
            // implicit multiplication: 3x^2
            if let Some(Tok::Ident(_)) = p.peek() {
                let rest = parse_factor(p, ring)?;
                acc = acc.mul(&rest).map_err(|e| p.error(format!("{e}")))?;
            }
            Ok(acc)
        }
        Some(Tok::Ident(name)) => {
            p.pos += 1;
            let idx = ring
                .var_index(&name)
                .ok_or_else(|| p.error(format!("unknown variable {name}")))?;
            let mut acc = MultiPoly::var(ring, idx);
            if p.eat_symbol('^') {
                let e = p.expect_int()?;
                if e < 0 {
                    return Err(p.error("negative exponent"));
                }
                acc = acc.pow(e as u32).map_err(|e| p.error(format!("{e}")))?;
            }
            Ok(acc)
        }
        Some(Tok::Symbol('(')) => {
            p.pos += 1;
            let inner = parse_poly_expr(p, ring)?;
            p.expect_symbol(')')?;
            if p.eat_symbol('^') {
                let e = p.expect_int()?;
                if e < 0 {
                    return Err(p.error("negative exponent"));
                }
                return inner.pow(e as u32).map_err(|e| p.error(format!("{e}")));
            }
            Ok(inner)
        }
        other => Err(p.error(format!("expected a polynomial factor, found {other:?}"))),
    }
}

/// term := factor ('*' factor)*
fn parse_poly_term(p: &mut Parser, ring: &Arc<RingCtx>) -> Result<MultiPoly> {
    let mut acc = parse_factor(p, ring)?;
    while p.eat_symbol('*') {
        let rhs = parse_factor(p, ring)?;
        acc = acc.mul(&rhs).map_err(|e| p.error(format!("{e}")))?;
    }
    Ok(acc)
}

/// expr := ['-'] term (('+'|'-') term)*
fn parse_poly_expr(p: &mut Parser, ring: &Arc<RingCtx>) -> Result<MultiPoly> {
    let mut acc = if p.eat_symbol('-') {
        parse_poly_term(p, ring)?.neg()
    } else {
        parse_poly_term(p, ring)?
    };
    loop {
        if p.eat_symbol('+') {
            let rhs = parse_poly_term(p, ring)?;
            acc = acc.add(&rhs).map_err(|e| p.error(format!("{e}")))?;
        } else if p.eat_symbol('-') {
            let rhs = parse_poly_term(p, ring)?;
            acc = acc.sub(&rhs).map_err(|e| p.error(format!("{e}")))?;
        } else {
            break;
        }
    }
    Ok(acc)
}

/// Parse one polynomial in the given ring.
pub fn parse_polynomial(ring: &Arc<RingCtx>, input: &str) -> Result<MultiPoly> {
    let mut p = Parser::new(input)?;
    let poly = parse_poly_expr(&mut p, ring)?;
    if p.peek().is_some() {
        return Err(p.error("trailing input after polynomial"));
    }
    Ok(poly)
}

// ---------- sentences ----------

fn parse_sentence_term(p: &mut Parser) -> Result<Term> {
    let mut acc = parse_sentence_term_atom(p)?;
    loop {
        if p.eat_symbol('+') {
            let rhs = parse_sentence_term_atom(p)?;
            acc = Term::Add(Box::new(acc), Box::new(rhs));
        } else if p.eat_symbol('-') {
            let rhs = parse_sentence_term_atom(p)?;
            acc = Term::Sub(Box::new(acc), Box::new(rhs));
        } else {
            break;
        }
    }
    Ok(acc)
}

fn parse_sentence_term_atom(p: &mut Parser) -> Result<Term> {
    let mut acc = parse_sentence_term_factor(p)?;
    while p.eat_symbol('*') {
        let rhs = parse_sentence_term_factor(p)?;
        acc = Term::Mul(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_sentence_term_factor(p: &mut Parser) -> Result<Term> {
    if p.eat_symbol('-') {
        let inner = parse_sentence_term_factor(p)?;
        return Ok(Term::Neg(Box::new(inner)));
    }
    match p.next() {
        Some(Tok::Int(s)) => {
            let n = s.parse::<i64>().map_err(|_| p.error("integer literal out of range"))?;
            Ok(factor_power(p, Term::Int(n))?)
        }
        Some(Tok::Ident(v)) => Ok(factor_power(p, Term::Var(v))?),
        Some(Tok::Symbol('(')) => {
            let inner = parse_sentence_term(p)?;
            p.expect_symbol(')')?;
            Ok(factor_power(p, inner)?)
        }
        other => {
            p.pos = p.pos.saturating_sub(1);
            Err(p.error(format!("expected a term, found {other:?}")))
        }
    }
}

/// `t^k` expands to repeated multiplication in the ring language.
fn factor_power(p: &mut Parser, base: Term) -> Result<Term> {
    if p.eat_symbol('^') {
        let e = p.expect_int()?;
        if e < 1 {
            return Err(p.error("exponent must be positive"));
        }
        let mut acc = base.clone();
        for _ in 1..e {
            acc = Term::Mul(Box::new(acc), Box::new(base.clone()));
        }
        Ok(acc)
    } else {
        Ok(base)
    }
}

/// formula := implication; implication := disjunction ['->' implication]
fn parse_formula(p: &mut Parser) -> Result<Formula> {
    let lhs = parse_disjunction(p)?;
    if matches!(p.peek(), Some(Tok::Arrow)) {
        p.pos += 1;
        let rhs = parse_formula(p)?;
        Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)))
    } else {
        Ok(lhs)
    }
}

fn parse_disjunction(p: &mut Parser) -> Result<Formula> {
    let mut acc = parse_conjunction(p)?;
    while p.eat_symbol('|') {
        let rhs = parse_conjunction(p)?;
        acc = Formula::Or(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_conjunction(p: &mut Parser) -> Result<Formula> {
    let mut acc = parse_unary_formula(p)?;
    while p.eat_symbol('&') {
        let rhs = parse_unary_formula(p)?;
        acc = Formula::And(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_unary_formula(p: &mut Parser) -> Result<Formula> {
    if p.eat_symbol('!') {
        let inner = parse_unary_formula(p)?;
        return Ok(Formula::Not(Box::new(inner)));
    }
    match p.peek().cloned() {
        Some(Tok::Ident(kw)) if kw == "forall" || kw == "exists" => {
            p.pos += 1;
            let var = p.expect_ident()?;
            p.expect_symbol('.')?;
            let body = parse_formula(p)?;
            Ok(if kw == "forall" {
                Formula::ForAll(var, Box::new(body))
            } else {
                Formula::Exists(var, Box::new(body))
            })
        }
        Some(Tok::Symbol('(')) => {
            // might be a parenthesized formula or a parenthesized term in an
            // equation; try formula first, backtrack to atom on failure
            let save = p.pos;
            p.pos += 1;
            if let Ok(inner) = parse_formula(p) {
                if p.eat_symbol(')')
                    && !matches!(p.peek(), Some(Tok::Symbol('=')) | Some(Tok::NotEqual))
                {
                    return Ok(inner);
                }
            }
            p.pos = save;
            parse_atom(p)
        }
        _ => parse_atom(p),
    }
}

fn parse_atom(p: &mut Parser) -> Result<Formula> {
    let lhs = parse_sentence_term(p)?;
    match p.next() {
        Some(Tok::Symbol('=')) => {
            let rhs = parse_sentence_term(p)?;
            Ok(Formula::Eq(lhs, rhs))
        }
        Some(Tok::NotEqual) => {
            let rhs = parse_sentence_term(p)?;
            Ok(Formula::Not(Box::new(Formula::Eq(lhs, rhs))))
        }
        other => {
            p.pos = p.pos.saturating_sub(1);
            Err(p.error(format!("expected = or != in atom, found {other:?}")))
        }
    }
}

/// Parse a closed first-order sentence.
pub fn parse_sentence(input: &str) -> Result<Sentence> {
    let mut p = Parser::new(input)?;
    let f = parse_formula(&mut p)?;
    if p.peek().is_some() {
        return Err(p.error("trailing input after sentence"));
    }
    Sentence::new(f)
}

// ---------- script files ----------

/// Parsed statements of a script file.
#[derive(Debug, Clone, Default)]
pub struct Script {
    pub ring: Option<Arc<RingCtx>>,
    pub ideals: Vec<Vec<MultiPoly>>,
    pub sentences: Vec<Sentence>,
    /// Variable blocks, for correspondences (source | target [| ...]).
    pub blocks: Vec<Vec<String>>,
    /// Kept variables for pushforward.
    pub keep: Vec<String>,
    pub projective: bool,
    /// Polynomial maps (one polynomial per target variable).
    pub maps: Vec<Vec<MultiPoly>>,
}

impl Script {
    pub fn require_ring(&self) -> Result<Arc<RingCtx>> {
        self.ring
            .clone()
            .ok_or_else(|| Error::Validation("script declares no ring".into()))
    }

    pub fn ideal(&self, index: usize) -> Result<Ideal> {
        let ring = self.require_ring()?;
        let gens = self
            .ideals
            .get(index)
            .ok_or_else(|| Error::Validation(format!("script has no ideal #{index}")))?;
        Ideal::new(&ring, gens.clone())
    }
}

/// Parse a script: `ring ...; ideal (...); sentence: ...;` statements.
pub fn parse_script(input: &str) -> Result<Script> {
    let mut p = Parser::new(input)?;
    let mut script = Script::default();
    while p.peek().is_some() {
        let kw = p.expect_ident()?;
        match kw.as_str() {
            "ring" => {
                let field_tok = p.expect_ident()?;
                let field = if field_tok == "Q" {
                    FieldTag::Rational
                } else if let Some(rest) = field_tok.strip_prefix('F') {
                    let pr: u64 = rest
                        .parse()
                        .map_err(|_| p.error(format!("bad field spec {field_tok}")))?;
                    FieldTag::prime(pr)?
                } else {
                    return Err(p.error(format!("unknown field {field_tok}; use Q or F<p>")));
                };
                p.expect_symbol('[')?;
                let mut vars = vec![p.expect_ident()?];
                while p.eat_symbol(',') {
                    vars.push(p.expect_ident()?);
                }
                p.expect_symbol(']')?;
                p.expect_symbol(';')?;
                let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
                script.ring = Some(RingCtx::new(field, &refs));
            }
            "ideal" => {
                let ring = script
                    .ring
                    .clone()
                    .ok_or_else(|| p.error("ideal before ring declaration"))?;
                p.expect_symbol('(')?;
                let mut gens = Vec::new();
                if !matches!(p.peek(), Some(Tok::Symbol(')'))) {
                    gens.push(parse_poly_expr(&mut p, &ring)?);
                    while p.eat_symbol(',') {
                        gens.push(parse_poly_expr(&mut p, &ring)?);
                    }
                }
                p.expect_symbol(')')?;
                p.expect_symbol(';')?;
                script.ideals.push(gens);
            }
            "map" => {
                let ring = script
                    .ring
                    .clone()
                    .ok_or_else(|| p.error("map before ring declaration"))?;
                p.expect_symbol('(')?;
                let mut coords = vec![parse_poly_expr(&mut p, &ring)?];
                while p.eat_symbol(',') {
                    coords.push(parse_poly_expr(&mut p, &ring)?);
                }
                p.expect_symbol(')')?;
                p.expect_symbol(';')?;
                script.maps.push(coords);
            }
            "sentence" => {
                p.expect_symbol(':')?;
                // consume tokens until the closing ';' and reparse as a sentence
                let start = p.pos;
                while !matches!(p.peek(), Some(Tok::Symbol(';')) | None) {
                    p.pos += 1;
                }
                if p.peek().is_none() {
                    return Err(p.error("unterminated sentence"));
                }
                let slice = p.tokens[start..p.pos].to_vec();
                p.expect_symbol(';')?;
                let mut sp = Parser { tokens: slice, pos: 0 };
                let f = parse_formula(&mut sp)?;
                if sp.peek().is_some() {
                    return Err(sp.error("trailing input in sentence"));
                }
                script.sentences.push(Sentence::new(f)?);
            }
            "blocks" => {
                p.expect_symbol('(')?;
                let mut block = Vec::new();
                let mut blocks = Vec::new();
                loop {
                    match p.next() {
                        Some(Tok::Ident(v)) => block.push(v),
                        Some(Tok::Symbol(',')) => {}
                        Some(Tok::Symbol('|')) => {
                            blocks.push(std::mem::take(&mut block));
                        }
                        Some(Tok::Symbol(')')) => {
                            blocks.push(std::mem::take(&mut block));
                            break;
                        }
                        other => return Err(p.error(format!("unexpected {other:?} in blocks"))),
                    }
                }
                p.expect_symbol(';')?;
                script.blocks = blocks;
            }
            "keep" => {
                p.expect_symbol('(')?;
                let mut vars = vec![p.expect_ident()?];
                while p.eat_symbol(',') {
                    vars.push(p.expect_ident()?);
                }
                p.expect_symbol(')')?;
                p.expect_symbol(';')?;
                script.keep = vars;
            }
            "projective" => {
                p.expect_symbol(';')?;
                script.projective = true;
            }
            other => {
                return Err(p.error(format!("unknown statement {other}")));
            }
        }
    }
    Ok(script)
}

// ---------- JSON corpus ----------

fn json_ring(value: &serde_json::Value) -> Result<Arc<RingCtx>> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Validation("ring must be an object".into()))?;
    let field = match obj.get("field").and_then(|f| f.as_str()) {
        Some("Q") => FieldTag::Rational,
        Some(f) if f.starts_with('F') => {
            let p: u64 = f[1..]
                .parse()
                .map_err(|_| Error::Validation(format!("bad field {f}")))?;
            FieldTag::prime(p)?
        }
        other => return Err(Error::Validation(format!("bad field spec {other:?}"))),
    };
    let vars: Vec<String> = obj
        .get("vars")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Validation("ring.vars must be an array".into()))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(|s| s.to_string())
                .ok_or_else(|| Error::Validation("variable names must be strings".into()))
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    Ok(RingCtx::new(field, &refs))
}

fn json_polys(ring: &Arc<RingCtx>, value: &serde_json::Value) -> Result<Vec<MultiPoly>> {
    value
        .as_array()
        .ok_or_else(|| Error::Validation("expected an array of polynomial strings".into()))?
        .iter()
        .map(|v| {
            let s = v
                .as_str()
                .ok_or_else(|| Error::Validation("polynomials must be strings".into()))?;
            parse_polynomial(ring, s)
        })
        .collect()
}

fn json_ideal(ring: &Arc<RingCtx>, value: &serde_json::Value) -> Result<Ideal> {
    Ideal::new(ring, json_polys(ring, value)?)
}

/// Parse one transfer instance from its JSON record.
pub fn transfer_instance_from_json(value: &serde_json::Value) -> Result<TransferInstance> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Validation("instance must be an object".into()))?;
    let kind = obj
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| Error::Validation("instance needs a string kind".into()))?;
    let ring = || -> Result<Arc<RingCtx>> {
        json_ring(
            obj.get("ring")
                .ok_or_else(|| Error::Validation("instance needs a ring".into()))?,
        )
    };
    let field = |name: &str| -> Result<&serde_json::Value> {
        obj.get(name)
            .ok_or_else(|| Error::Validation(format!("instance needs field {name}")))
    };
    match kind {
        "associated-cycle" => {
            let r = ring()?;
            Ok(TransferInstance::AssociatedCycle {
                ideal: json_ideal(&r, field("ideal")?)?,
                codim: obj.get("codim").and_then(|c| c.as_u64()).map(|c| c as usize),
            })
        }
        "local-length" => {
            let r = ring()?;
            Ok(TransferInstance::LocalLength {
                ideal: json_ideal(&r, field("ideal")?)?,
                prime: json_ideal(&r, field("prime")?)?,
            })
        }
        "koszul-data" => {
            let r = ring()?;
            Ok(TransferInstance::KoszulData {
                quotient: json_ideal(&r, field("quotient")?)?,
                sequence: json_polys(&r, field("sequence")?)?,
                point: json_ideal(&r, field("point")?)?,
            })
        }
        "intersection-product" => {
            let r = ring()?;
            Ok(TransferInstance::IntersectionProduct {
                a: json_ideal(&r, field("a")?)?,
                b: json_ideal(&r, field("b")?)?,
                projective: obj
                    .get("projective")
                    .and_then(|p| p.as_bool())
                    .unwrap_or(false),
            })
        }
        "pushforward" => {
            let r = ring()?;
            let keep_names: Vec<String> = field("keep")?
                .as_array()
                .ok_or_else(|| Error::Validation("keep must be an array".into()))?
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(|s| s.to_string())
                        .ok_or_else(|| Error::Validation("keep entries must be strings".into()))
                })
                .collect::<Result<_>>()?;
            let keep: Vec<usize> = keep_names
                .iter()
                .map(|n| {
                    r.var_index(n)
                        .ok_or_else(|| Error::Validation(format!("unknown variable {n}")))
                })
                .collect::<Result<_>>()?;
            Ok(TransferInstance::Pushforward {
                ideal: json_ideal(&r, field("ideal")?)?,
                keep,
            })
        }
        "compose" => {
            let alpha_ring = json_ring(field("alpha_ring")?)?;
            let beta_ring = json_ring(field("beta_ring")?)?;
            let split = field("split")?
                .as_array()
                .ok_or_else(|| Error::Validation("split must be [nx, ny, nz]".into()))?;
            if split.len() != 3 {
                return Err(Error::Validation("split must have three entries".into()));
            }
            let nums: Vec<usize> = split
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|n| n as usize)
                        .ok_or_else(|| Error::Validation("split entries must be integers".into()))
                })
                .collect::<Result<_>>()?;
            Ok(TransferInstance::Compose {
                alpha: json_ideal(&alpha_ring, field("alpha")?)?,
                beta: json_ideal(&beta_ring, field("beta")?)?,
                split: (nums[0], nums[1], nums[2]),
            })
        }
        "hilbert-degree" => {
            let r = ring()?;
            Ok(TransferInstance::HilbertDegree {
                ideal: json_ideal(&r, field("ideal")?)?,
            })
        }
        other => Err(Error::Validation(format!("unknown instance kind {other}"))),
    }
}

/// Parse a corpus: a JSON array of instance records.
pub fn corpus_from_json(input: &str) -> Result<Vec<TransferInstance>> {
    let value: serde_json::Value =
        serde_json::from_str(input).map_err(|e| Error::Validation(format!("bad JSON: {e}")))?;
    value
        .as_array()
        .ok_or_else(|| Error::Validation("corpus must be a JSON array".into()))?
        .iter()
        .map(transfer_instance_from_json)
        .collect()
}
