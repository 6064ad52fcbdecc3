//! Polynomial expressions in two named variables with Gaussian-rational
//! coefficients, and the germ file format.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := ('+'|'-') factor | base ('^' nat)?
//! base   := number ('/' number)? | 'i' | var | '(' expr ')'
//! ```
//!
//! Juxtaposition multiplies (`2xy`). Division is only allowed between two
//! numeric literals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffs::{Backend, Coefficient, GaussianRational};
use crate::germs::{DiffeoGerm, VectorFieldGerm};
use crate::jets::Jet2;

/// Degree beyond which expansion is refused.
pub const MAX_EXPANSION_DEGREE: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent at {pos}")]
    NegativeExponent { pos: usize },
    #[error("invalid germ file: {0}")]
    InvalidFile(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    /// Terms above the truncation were dropped; the highest dropped degree.
    TruncationLoss { max_degree: u32 },
}

impl std::fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseWarning::TruncationLoss { max_degree } => {
                write!(f, "terms up to degree {max_degree} exceed the truncation and were dropped")
            }
        }
    }
}

type Poly = BTreeMap<(u32, u32), GaussianRational>;

/// A parsed expression: the truncated jet and the full polynomial.
#[derive(Debug, Clone)]
pub struct Parsed<C: Coefficient> {
    pub jet: Jet2<C>,
    pub terms: Vec<((u32, u32), GaussianRational)>,
    pub warnings: Vec<ParseWarning>,
}

/// Parses `text` as a polynomial in `vars` and truncates at `trunc`.
pub fn parse_poly<C: Coefficient>(text: &str, vars: (&str, &str), trunc: u32) -> Result<Parsed<C>, ParseError> {
    let tokens = tokenize(text, vars)?;
    let mut p = Parser { tokens, pos: 0, end: text.len() };
    let poly = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(syntax(t.pos, format!("unexpected {}", t.kind.describe())));
    }
    let dropped = poly.keys().map(|&(i, j)| i + j).filter(|&d| d > trunc).max();
    let warnings = dropped.map(|d| ParseWarning::TruncationLoss { max_degree: d }).into_iter().collect();
    let jet = Jet2::from_terms(poly.iter().map(|(&m, c)| (m, C::from_gaussian(c))), trunc);
    Ok(Parsed { jet, terms: poly.into_iter().collect(), warnings })
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::SyntaxError { pos, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Num(BigRational),
    Var(usize),
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Num(n) => format!("number {n}"),
            Kind::Var(_) => "variable".into(),
            Kind::I => "`i`".into(),
            Kind::Plus => "`+`".into(),
            Kind::Minus => "`-`".into(),
            Kind::Star => "`*`".into(),
            Kind::Slash => "`/`".into(),
            Kind::Caret => "`^`".into(),
            Kind::LParen => "`(`".into(),
            Kind::RParen => "`)`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn tokenize(text: &str, vars: (&str, &str)) -> Result<Vec<Token>, ParseError> {
    let mut names: Vec<(&str, Kind)> = vec![(vars.0, Kind::Var(0)), (vars.1, Kind::Var(1))];
    if vars.0 != "i" && vars.1 != "i" {
        names.push(("i", Kind::I));
    }
    names.sort_by_key(|(n, _)| std::cmp::Reverse(n.len()));
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        if !bytes[k].is_ascii() {
            let c = text[k..].chars().next().unwrap_or('?');
            return Err(syntax(k, format!("unexpected character `{c}`")));
        }
        let c = bytes[k] as char;
        let single = match c {
            '+' => Some(Kind::Plus),
            '-' => Some(Kind::Minus),
            '*' => Some(Kind::Star),
            '/' => Some(Kind::Slash),
            '^' => Some(Kind::Caret),
            '(' => Some(Kind::LParen),
            ')' => Some(Kind::RParen),
            _ => None,
        };
        if let Some(kind) = single {
            out.push(Token { kind, pos: k });
            k += 1;
        } else if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            let int_part = &text[start..k];
            let mut frac_part = "";
            if k < bytes.len() && bytes[k] == b'.' {
                k += 1;
                let fs = k;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                frac_part = &text[fs..k];
            }
            if int_part.is_empty() && frac_part.is_empty() {
                return Err(syntax(start, "malformed number"));
            }
            let digits = format!("{int_part}{frac_part}");
            let num: BigInt = digits.parse().map_err(|_| syntax(start, "malformed number"))?;
            let den = num_traits::pow(BigInt::from(10), frac_part.len());
            out.push(Token { kind: Kind::Num(BigRational::new(num, den)), pos: start });
        } else if c.is_alphabetic() || c == '_' {
            let mut end = k;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            // split the identifier run into declared names (juxtaposition)
            while k < end {
                let rest = &text[k..end];
                match names.iter().find(|(n, _)| !n.is_empty() && rest.starts_with(n)) {
                    Some((n, kind)) => {
                        out.push(Token { kind: kind.clone(), pos: k });
                        k += n.len();
                    }
                    None => {
                        let unknown: String = rest.chars().take_while(|ch| ch.is_alphabetic() || *ch == '_').collect();
                        let unknown = if unknown.is_empty() { rest.to_string() } else { unknown };
                        return Err(ParseError::UnknownVariable(unknown));
                    }
                }
                // digits directly after a name start a new number token
                if k < end && bytes[k].is_ascii_digit() {
                    break;
                }
            }
        } else {
            return Err(syntax(k, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn eat(&mut self, kind: &Kind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = if self.eat(&Kind::Minus) {
            neg(&self.term()?)
        } else {
            self.eat(&Kind::Plus);
            self.term()?
        };
        loop {
            if self.eat(&Kind::Plus) {
                acc = add(&acc, &self.term()?);
            } else if self.eat(&Kind::Minus) {
                acc = add(&acc, &neg(&self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let explicit = self.eat(&Kind::Star);
            let starts_factor = matches!(
                self.peek().map(|t| &t.kind),
                Some(Kind::Num(_) | Kind::Var(_) | Kind::I | Kind::LParen)
            );
            if explicit || starts_factor {
                acc = mul(&acc, &self.factor()?, self.here())?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        if self.eat(&Kind::Minus) {
            return Ok(neg(&self.factor()?));
        }
        if self.eat(&Kind::Plus) {
            return self.factor();
        }
        let base = self.base()?;
        if !self.eat(&Kind::Caret) {
            return Ok(base);
        }
        let pos = self.here();
        match self.peek().map(|t| t.kind.clone()) {
            Some(Kind::Minus) => Err(ParseError::NegativeExponent { pos }),
            Some(Kind::Num(n)) if n.is_integer() => {
                self.pos += 1;
                if self.peek().map(|t| &t.kind) == Some(&Kind::Slash) {
                    return Err(syntax(self.here(), "exponent must be a natural number"));
                }
                let e: u32 = n.to_integer().try_into().map_err(|_| syntax(pos, "exponent too large"))?;
                power(&base, e, pos)
            }
            _ => Err(syntax(pos, "exponent must be a natural number")),
        }
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        let pos = self.here();
        let tok = self.peek().cloned().ok_or_else(|| syntax(pos, "unexpected end of input"))?;
        self.pos += 1;
        match tok.kind {
            Kind::Num(n) => {
                if self.eat(&Kind::Slash) {
                    let dpos = self.here();
                    match self.peek().map(|t| t.kind.clone()) {
                        Some(Kind::Num(d)) => {
                            self.pos += 1;
                            if d.is_zero() {
                                return Err(syntax(dpos, "division by zero"));
                            }
                            Ok(constant(GaussianRational::real(n / d)))
                        }
                        _ => Err(syntax(dpos, "division is only allowed between numeric literals")),
                    }
                } else {
                    Ok(constant(GaussianRational::real(n)))
                }
            }
            Kind::I => Ok(constant(GaussianRational::i())),
            Kind::Var(0) => Ok(monomial(1, 0)),
            Kind::Var(_) => Ok(monomial(0, 1)),
            Kind::LParen => {
                let e = self.expr()?;
                if !self.eat(&Kind::RParen) {
                    return Err(syntax(self.here(), "expected `)`"));
                }
                Ok(e)
            }
            Kind::Slash => Err(syntax(pos, "division is only allowed between numeric literals")),
            k => Err(syntax(pos, format!("unexpected {}", k.describe()))),
        }
    }
}

fn constant(c: GaussianRational) -> Poly {
    let mut p = Poly::new();
    if !Coefficient::is_zero(&c) {
        p.insert((0, 0), c);
    }
    p
}

fn monomial(i: u32, j: u32) -> Poly {
    let mut p = Poly::new();
    p.insert((i, j), GaussianRational::one());
    p
}

fn neg(p: &Poly) -> Poly {
    p.iter().map(|(m, c)| (*m, -c.clone())).collect()
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (m, c) in b {
        let e = out.entry(*m).or_insert_with(GaussianRational::zero);
        *e += c;
        if Coefficient::is_zero(e) {
            out.remove(m);
        }
    }
    out
}

fn degree(p: &Poly) -> u32 {
    p.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
}

fn mul(a: &Poly, b: &Poly, pos: usize) -> Result<Poly, ParseError> {
    if degree(a) + degree(b) > MAX_EXPANSION_DEGREE {
        return Err(syntax(pos, format!("expansion exceeds degree {MAX_EXPANSION_DEGREE}")));
    }
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = (ma.0 + mb.0, ma.1 + mb.1);
            *out.entry(m).or_insert_with(GaussianRational::zero) += &ca.mul_ref(cb);
        }
    }
    out.retain(|_, c| !Coefficient::is_zero(c));
    Ok(out)
}

fn power(base: &Poly, e: u32, pos: usize) -> Result<Poly, ParseError> {
    if base.is_empty() {
        return Ok(if e == 0 { monomial(0, 0) } else { Poly::new() });
    }
    if (degree(base) as u64) * (e as u64) > MAX_EXPANSION_DEGREE as u64 {
        return Err(syntax(pos, format!("expansion exceeds degree {MAX_EXPANSION_DEGREE}")));
    }
    let mut acc = monomial(0, 0);
    for _ in 0..e {
        acc = mul(&acc, base, pos)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Germ files
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapExprs {
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VfExprs {
    pub dx: String,
    pub dy: String,
}

/// `{"trunc": N, "backend": "exact", "map": {"x": .., "y": ..}}` or the same
/// with `"vf": {"dx": .., "dy": ..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapExprs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vf: Option<VfExprs>,
}

impl GermFile {
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let f: GermFile = serde_json::from_str(text).map_err(|e| ParseError::InvalidFile(e.to_string()))?;
        if let Some(v) = f.format {
            if v != 1 {
                return Err(ParseError::InvalidFile(format!("unsupported format {v}")));
            }
        }
        match (&f.map, &f.vf) {
            (Some(_), Some(_)) => Err(ParseError::InvalidFile("both `map` and `vf` given".into())),
            (None, None) => Err(ParseError::InvalidFile("one of `map` or `vf` is required".into())),
            _ => Ok(f),
        }
    }
}

/// A parsed diffeomorphism with the untruncated polynomial components.
#[derive(Debug, Clone)]
pub struct ParsedDiffeo<C: Coefficient> {
    pub germ: DiffeoGerm<C>,
    pub components: [Vec<((u32, u32), GaussianRational)>; 2],
    pub warnings: Vec<ParseWarning>,
}

#[derive(Debug, Clone)]
pub struct ParsedVf<C: Coefficient> {
    pub germ: VectorFieldGerm<C>,
    pub warnings: Vec<ParseWarning>,
}

/// Parses the map `(F1, F2)` in `x, y`.
pub fn parse_diffeo<C: Coefficient>(x: &str, y: &str, trunc: u32) -> Result<ParsedDiffeo<C>, ParseError> {
    let f1 = parse_poly::<C>(x, ("x", "y"), trunc)?;
    let f2 = parse_poly::<C>(y, ("x", "y"), trunc)?;
    let mut warnings = f1.warnings;
    warnings.extend(f2.warnings);
    let germ = DiffeoGerm::from_components(&f1.jet, &f2.jet).with_polynomial(warnings.is_empty());
    Ok(ParsedDiffeo { germ, components: [f1.terms, f2.terms], warnings })
}

/// Parses the vector field `dx ∂/∂x + dy ∂/∂y`.
pub fn parse_vf<C: Coefficient>(dx: &str, dy: &str, trunc: u32) -> Result<ParsedVf<C>, ParseError> {
    let a = parse_poly::<C>(dx, ("x", "y"), trunc)?;
    let b = parse_poly::<C>(dy, ("x", "y"), trunc)?;
    let mut warnings = a.warnings;
    warnings.extend(b.warnings);
    let mut germ = VectorFieldGerm::new(a.jet, b.jet);
    germ.polynomial = warnings.is_empty();
    Ok(ParsedVf { germ, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::ComplexFloat;

    type G = GaussianRational;

    fn p(s: &str) -> Result<Jet2<G>, ParseError> {
        parse_poly::<G>(s, ("x", "y"), 12).map(|r| r.jet)
    }

    fn jet(terms: &[((u32, u32), G)]) -> Jet2<G> {
        Jet2::from_terms(terms.iter().cloned(), 12)
    }

    #[test]
    fn simple_sum() {
        assert_eq!(p("x + y^2").unwrap(), jet(&[((1, 0), G::one()), ((0, 2), G::one())]));
    }

    #[test]
    fn gaussian_coefficient() {
        assert_eq!(p("(1/2 + 3/4*i)*x^2*y").unwrap(), jet(&[((2, 1), G::from_parts(1, 2, 3, 4))]));
    }

    #[test]
    fn unknown_variable() {
        assert_eq!(p("x + z"), Err(ParseError::UnknownVariable("z".into())));
        assert_eq!(p("x + xz"), Err(ParseError::UnknownVariable("z".into())));
    }

    #[test]
    fn juxtaposition() {
        assert_eq!(p("2xy").unwrap(), jet(&[((1, 1), G::from_integer(2))]));
        assert_eq!(p("3x^2y").unwrap(), jet(&[((2, 1), G::from_integer(3))]));
        assert_eq!(p("(x+y)(x-y)").unwrap(), p("x^2 - y^2").unwrap());
        assert_eq!(p("2i x").unwrap(), jet(&[((1, 0), G::from_parts(0, 1, 2, 1))]));
    }

    #[test]
    fn signs_and_powers() {
        assert_eq!(p("-x^2").unwrap(), jet(&[((2, 0), G::from_integer(-1))]));
        assert_eq!(p("x*-y").unwrap(), jet(&[((1, 1), G::from_integer(-1))]));
        assert_eq!(p("(x+y)^2").unwrap(), p("x^2 + 2*x*y + y^2").unwrap());
        assert_eq!(p("x^0").unwrap(), Jet2::one(12));
        assert_eq!(p("x - x").unwrap(), Jet2::zero(12));
        assert_eq!(p("0.25 x").unwrap(), jet(&[((1, 0), G::from_ratio(1, 4))]));
    }

    #[test]
    fn errors() {
        assert!(matches!(p("x^-1"), Err(ParseError::NegativeExponent { pos: 2 })));
        assert!(matches!(p("x/2"), Err(ParseError::SyntaxError { pos: 1, .. })));
        assert!(matches!(p("x + "), Err(ParseError::SyntaxError { pos: 4, .. })));
        assert!(matches!(p("(x + y"), Err(ParseError::SyntaxError { .. })));
        assert!(matches!(p("x $ y"), Err(ParseError::SyntaxError { pos: 2, .. })));
        assert!(matches!(p("1/0"), Err(ParseError::SyntaxError { .. })));
        assert!(matches!(p("x^1/2"), Err(ParseError::SyntaxError { .. })));
        assert!(matches!(p("x^1000"), Err(ParseError::SyntaxError { .. })));
        assert!(matches!(p("x + é"), Err(ParseError::SyntaxError { pos: 4, .. })));
    }

    #[test]
    fn truncation_warning() {
        let r = parse_poly::<G>("x + y^5", ("x", "y"), 3).unwrap();
        assert_eq!(r.jet, Jet2::var(crate::jets::Var::X, 3));
        assert_eq!(r.warnings, vec![ParseWarning::TruncationLoss { max_degree: 5 }]);
        assert_eq!(r.terms.len(), 2);
        // cancellation above the truncation is not a loss
        let r = parse_poly::<G>("x + y^5 - y^5", ("x", "y"), 3).unwrap();
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn chart_variables() {
        let r = parse_poly::<G>("u v^2", ("u", "v"), 5).unwrap();
        assert_eq!(r.jet.coeff(1, 2), G::one());
        assert!(matches!(parse_poly::<G>("x", ("u", "v"), 5), Err(ParseError::UnknownVariable(_))));
    }

    #[test]
    fn float_backend() {
        let r = parse_poly::<ComplexFloat>("1/4 x + i y", ("x", "y"), 5).unwrap();
        assert_eq!(r.jet.coeff(1, 0), ComplexFloat::new(0.25, 0.0));
        assert_eq!(r.jet.coeff(0, 1), ComplexFloat::new(0.0, 1.0));
    }

    #[test]
    fn germ_files() {
        let f = GermFile::from_json(r#"{"trunc": 8, "backend": "exact", "map": {"x": "x+y^2", "y": "y+x^2"}}"#).unwrap();
        assert_eq!(f.trunc, Some(8));
        assert_eq!(f.backend, Some(Backend::Exact));
        let d = parse_diffeo::<G>(&f.map.as_ref().unwrap().x, &f.map.as_ref().unwrap().y, 8).unwrap();
        assert_eq!(d.germ.p, Jet2::monomial(0, 2, G::one(), 8));
        assert!(d.germ.polynomial);
        let v = GermFile::from_json(r#"{"vf": {"dx": "x^2", "dy": "y^2"}}"#).unwrap();
        assert!(v.vf.is_some());
        assert!(GermFile::from_json(r#"{"trunc": 8}"#).is_err());
        assert!(GermFile::from_json(r#"{"format": 2, "vf": {"dx": "x^2", "dy": "y^2"}}"#).is_err());
        assert!(GermFile::from_json("not json").is_err());
    }
}
