//! Map descriptions: a small expression language naming catalog maps and
//! the cone/join combinators.
//!
//! ```text
//! desc  := name | name '(' arg (',' arg)* ')'
//! arg   := desc | integer | fraction
//! ```
//!
//! Angles are exact fractions `p/q`; decimals are rejected. An omitted angle
//! in `cone`/`join` means "solve for it".

use biharm::catalog::{curve_s2, curve_s3, eigenmap, hopf, identity_sphere, make_mu, make_nu, make_pi};
use biharm::deformer::{solve_cone, solve_join, AngleSolution, DeformError, Flavor};
use biharm::map::{cone, join, MapError, SphereMap};
use biharm::rational::{fmt_q, parse_fraction, Q};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Desc {
    Pi(u32),
    Mu(u32),
    Nu(u32),
    Identity(u32),
    Hopf,
    Eigenmap(u32, u32),
    CurveS2,
    CurveS3(Q),
    Cone(Box<Desc>, Option<Q>),
    Join(Box<Desc>, Box<Desc>, Option<Q>),
}

impl fmt::Display for Desc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Desc::Pi(m) => write!(f, "pi({m})"),
            Desc::Mu(m) => write!(f, "mu({m})"),
            Desc::Nu(m) => write!(f, "nu({m})"),
            Desc::Identity(m) => write!(f, "identity_sphere({m})"),
            Desc::Hopf => f.write_str("hopf"),
            Desc::Eigenmap(m, k) => write!(f, "eigenmap({m}, {k})"),
            Desc::CurveS2 => f.write_str("curve_s2"),
            Desc::CurveS3(a) => write!(f, "curve_s3({})", fmt_q(a)),
            Desc::Cone(v, None) => write!(f, "cone({v})"),
            Desc::Cone(v, Some(t)) => write!(f, "cone({v}, {})", fmt_q(t)),
            Desc::Join(a, b, None) => write!(f, "join({a}, {b})"),
            Desc::Join(a, b, Some(t)) => write!(f, "join({a}, {b}, {})", fmt_q(t)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {}: {message}\n  {input}\n  {caret}", .pos + 1, caret = caret(*.pos))]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
    pub input: String,
}

fn caret(pos: usize) -> String {
    format!("{}^", " ".repeat(pos))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    LBracket,
    RBracket,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let err = |pos: usize, message: String| ParseError { pos, message, input: input.to_string() };
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' | ')' | ',' | '[' | ']' => {
                out.push((
                    pos,
                    match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ',' => Tok::Comma,
                        '[' => Tok::LBracket,
                        _ => Tok::RBracket,
                    },
                ));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                out.push((pos, Tok::Ident(chars[start..i].iter().map(|p| p.1).collect())));
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || "/.+-".contains(chars[i].1)) {
                    i += 1;
                }
                out.push((pos, Tok::Number(chars[start..i].iter().map(|p| p.1).collect())));
            }
            other => return Err(err(pos, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

/// A parsed argument: a nested description or a number.
enum Arg {
    Desc(Desc),
    Number(Q, usize),
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos, message: message.into(), input: self.input.to_string() })
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.input.len(), |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            self.err(self.pos(), format!("expected {what}"))
        }
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Number(s)) => {
                self.at += 1;
                match parse_fraction(&s) {
                    Ok(v) => Ok(Arg::Number(v, pos)),
                    Err(e) => self.err(pos, format!("bad number '{s}': {e}")),
                }
            }
            Some(Tok::Ident(_)) => Ok(Arg::Desc(self.desc()?)),
            Some(Tok::LBracket) => self.err(pos, "explicit polynomial lists are not supported; use eigenmap(m, k)"),
            _ => self.err(pos, "expected a map or a number"),
        }
    }

    fn desc(&mut self) -> Result<Desc, ParseError> {
        let pos = self.pos();
        let name = match self.peek().cloned() {
            Some(Tok::Ident(s)) => s,
            _ => return self.err(pos, "expected a map name"),
        };
        self.at += 1;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.at += 1;
            loop {
                args.push(self.arg()?);
                match self.peek() {
                    Some(Tok::Comma) => self.at += 1,
                    _ => break,
                }
            }
            self.expect(Tok::RParen, "',' or ')'")?;
        }
        self.build(&name, pos, args)
    }

    fn build(&self, name: &str, pos: usize, args: Vec<Arg>) -> Result<Desc, ParseError> {
        let arity = |lo: usize, hi: usize| -> Result<(), ParseError> {
            if args.len() < lo || args.len() > hi {
                let want = if lo == hi { lo.to_string() } else { format!("{lo} to {hi}") };
                return self.err(pos, format!("{name} takes {want} argument(s), got {}", args.len()));
            }
            Ok(())
        };
        let int = |a: &Arg| -> Result<u32, ParseError> {
            match a {
                Arg::Number(v, p) if v.is_integer() => {
                    u32::try_from(v.to_integer()).or_else(|_| self.err(*p, "expected a small nonnegative integer"))
                }
                Arg::Number(_, p) => self.err(*p, "expected an integer"),
                Arg::Desc(_) => self.err(pos, format!("{name} expects an integer argument")),
            }
        };
        let frac = |a: &Arg| -> Result<Q, ParseError> {
            match a {
                Arg::Number(v, _) => Ok(v.clone()),
                Arg::Desc(_) => self.err(pos, format!("{name} expects a fraction p/q")),
            }
        };
        let map = |a: Arg| -> Result<Box<Desc>, ParseError> {
            match a {
                Arg::Desc(d) => Ok(Box::new(d)),
                Arg::Number(_, p) => self.err(p, format!("{name} expects a map argument")),
            }
        };
        match name {
            "pi" | "mu" | "nu" | "identity" | "identity_sphere" => {
                arity(1, 1)?;
                let m = int(&args[0])?;
                Ok(match name {
                    "pi" => Desc::Pi(m),
                    "mu" => Desc::Mu(m),
                    "nu" => Desc::Nu(m),
                    _ => Desc::Identity(m),
                })
            }
            "hopf" => arity(0, 0).map(|_| Desc::Hopf),
            "curve_s2" => arity(0, 0).map(|_| Desc::CurveS2),
            "curve_s3" => {
                arity(1, 1)?;
                Ok(Desc::CurveS3(frac(&args[0])?))
            }
            "eigenmap" => {
                arity(2, 2)?;
                Ok(Desc::Eigenmap(int(&args[0])?, int(&args[1])?))
            }
            "cone" => {
                arity(1, 2)?;
                let t = args.get(1).map(frac).transpose()?;
                let v = map(args.into_iter().next().expect("arity checked"))?;
                Ok(Desc::Cone(v, t))
            }
            "join" => {
                arity(2, 3)?;
                let t = args.get(2).map(frac).transpose()?;
                let mut it = args.into_iter();
                let a = map(it.next().expect("arity checked"))?;
                let b = map(it.next().expect("arity checked"))?;
                Ok(Desc::Join(a, b, t))
            }
            other => self.err(
                pos,
                format!("unknown map '{other}' (expected pi, mu, nu, identity_sphere, hopf, eigenmap, curve_s2, curve_s3, cone, join)"),
            ),
        }
    }
}

pub fn parse(input: &str) -> Result<Desc, ParseError> {
    let mut p = Parser { input, toks: lex(input)?, at: 0 };
    let d = p.desc()?;
    if p.at < p.toks.len() {
        return p.err(p.pos(), "unexpected trailing input");
    }
    Ok(d)
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Deform(#[from] DeformError),
}

/// A built map together with any angles solved along the way.
#[derive(Debug)]
pub struct Built {
    pub map: SphereMap,
    pub solutions: Vec<AngleSolution>,
}

impl Desc {
    /// Builds the map; omitted angles are solved for `flavor`.
    pub fn build(&self, flavor: Flavor) -> Result<Built, BuildError> {
        let mut solutions = Vec::new();
        let map = self.build_into(flavor, &mut solutions)?;
        Ok(Built { map, solutions })
    }

    fn build_into(&self, flavor: Flavor, sols: &mut Vec<AngleSolution>) -> Result<SphereMap, BuildError> {
        Ok(match self {
            Desc::Pi(m) => make_pi(*m)?,
            Desc::Mu(m) => make_mu(*m)?,
            Desc::Nu(m) => make_nu(*m)?,
            Desc::Identity(m) => identity_sphere(*m)?,
            Desc::Hopf => hopf()?,
            Desc::Eigenmap(m, k) => eigenmap(*m, *k)?,
            Desc::CurveS2 => curve_s2(),
            Desc::CurveS3(a) => curve_s3(a.clone())?,
            Desc::Cone(v, t) => {
                let v = v.build_into(flavor, sols)?;
                match t {
                    Some(t) => cone(&v, t.clone())?,
                    None => {
                        let s = solve_cone(&v, flavor)?;
                        sols.push(s.solution);
                        s.map
                    }
                }
            }
            Desc::Join(a, b, t) => {
                let a = a.build_into(flavor, sols)?;
                let b = b.build_into(flavor, sols)?;
                match t {
                    Some(t) => join(&a, &b, t.clone())?,
                    None => {
                        let s = solve_join(&a, &b, flavor)?;
                        sols.push(s.solution);
                        s.map
                    }
                }
            }
        })
    }

    pub fn with_angle(&self, t: Q) -> Desc {
        match self {
            Desc::Cone(v, _) => Desc::Cone(v.clone(), Some(t)),
            Desc::Join(a, b, _) => Desc::Join(a.clone(), b.clone(), Some(t)),
            other => other.clone(),
        }
    }
}
