//! Truncated bivariate power series.
//!
//! A [`Jet2`] stores every term of total degree `<= trunc` and nothing else.
//! The truncation travels with the value so that precision loss is always
//! visible: binary operations take the smaller truncation, and operations
//! that lose an order (derivatives, division by a variable) lower it.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::coeffs::{CoeffError, Coefficient};
use crate::poly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("homogeneous degree {degree} outside 0..={trunc}")]
    OutOfRange { degree: u32, trunc: u32 },
    #[error("denominator is not a unit (vanishing constant term)")]
    NotAUnit,
    #[error("term with exponents ({0}, {1}) is not divisible")]
    NotDivisible(u32, u32),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Chart {
    /// `π(x, v) = (x, x·v)`
    U1,
    /// `π(u, y) = (u·y, y)`
    U2,
}

/// Exponent pair, ordered by total degree and then by descending power of
/// the first variable (graded lexicographic with `x > y`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(&self) -> u32 {
        self.x + self.y
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.x.cmp(&self.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Order of vanishing of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    fn saturating(self) -> u32 {
        self.finite().unwrap_or(u32::MAX / 4)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Bivariate series truncated at total degree `trunc`.
#[derive(Clone, PartialEq)]
pub struct Jet2<C> {
    trunc: u32,
    coeffs: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> fmt::Debug for Jet2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet2[{}]({})", self.trunc, self.to_text(("x", "y")))
    }
}

impl<C: Coefficient> fmt::Display for Jet2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(("x", "y")))
    }
}

fn tri_index(m: Monomial) -> usize {
    let d = m.degree() as usize;
    d * (d + 1) / 2 + m.y as usize
}

impl<C: Coefficient> Jet2<C> {
    pub fn zero(trunc: u32) -> Self {
        Jet2 { trunc, coeffs: BTreeMap::new() }
    }

    pub fn constant(c: C, trunc: u32) -> Self {
        Jet2::monomial(0, 0, c, trunc)
    }

    pub fn one(trunc: u32) -> Self {
        Jet2::constant(C::one(), trunc)
    }

    pub fn var(var: Var, trunc: u32) -> Self {
        match var {
            Var::X => Jet2::monomial(1, 0, C::one(), trunc),
            Var::Y => Jet2::monomial(0, 1, C::one(), trunc),
        }
    }

    pub fn monomial(i: u32, j: u32, c: C, trunc: u32) -> Self {
        let mut jet = Jet2::zero(trunc);
        jet.add_term(Monomial::new(i, j), c);
        jet
    }

    /// Builds a jet from terms, summing repeats and dropping anything above
    /// `trunc`.
    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), C)>, trunc: u32) -> Self {
        let mut jet = Jet2::zero(trunc);
        for ((i, j), c) in terms {
            jet.add_term(Monomial::new(i, j), c);
        }
        jet
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if m.degree() > self.trunc {
            return;
        }
        match self.coeffs.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.coeffs.remove(&m);
                }
            }
            None => {
                if !c.is_zero() {
                    self.coeffs.insert(m, c);
                }
            }
        }
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.coeffs.get(&Monomial::new(i, j)).cloned().unwrap_or_else(C::zero)
    }

    /// Stored terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &C)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest total degree among stored terms.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| m.degree()).max()
    }

    /// Lowers the truncation, discarding terms above it. Never raises it.
    pub fn truncate(&self, trunc: u32) -> Self {
        let t = trunc.min(self.trunc);
        Jet2 {
            trunc: t,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.degree() <= t)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Declares a new truncation without touching the terms. Only valid when
    /// the caller knows the stored terms are exact up to `trunc`.
    pub(crate) fn with_trunc_unchecked(mut self, trunc: u32) -> Self {
        self.trunc = trunc;
        self.coeffs.retain(|m, _| m.degree() <= trunc);
        self
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Jet2<D> {
        let mut out = Jet2::zero(self.trunc);
        for (m, c) in &self.coeffs {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn convert<D: Coefficient>(&self) -> Jet2<D> {
        self.map_coeffs(|c| {
            D::from_gaussian(&c.as_gaussian().expect("coefficient has an exact value"))
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.trunc.min(other.trunc);
        let mut out = self.truncate(t);
        for (m, c) in &other.coeffs {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let t = self.trunc.min(other.trunc);
        let mut out = self.truncate(t);
        for (m, c) in &other.coeffs {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Jet2::zero(self.trunc);
        }
        self.map_coeffs(|c| c.mul_ref(s))
    }

    /// Product truncated at `min(trunc f, trunc g)`.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, self.trunc.min(other.trunc))
    }

    /// Product keeping terms of degree `<= t`; the caller vouches for `t`.
    pub(crate) fn mul_trunc(&self, other: &Self, t: u32) -> Self {
        if self.is_zero() || other.is_zero() {
            return Jet2::zero(t);
        }
        let size = tri_index(Monomial::new(0, t)) + 1;
        let mut acc: Vec<Option<C>> = vec![None; size];
        for (m1, c1) in &self.coeffs {
            let d1 = m1.degree();
            if d1 > t {
                break;
            }
            for (m2, c2) in &other.coeffs {
                if d1 + m2.degree() > t {
                    break;
                }
                let m = Monomial::new(m1.x + m2.x, m1.y + m2.y);
                let prod = c1.mul_ref(c2);
                let slot = &mut acc[tri_index(m)];
                match slot {
                    Some(v) => *v += &prod,
                    None => *slot = Some(prod),
                }
            }
        }
        let mut coeffs = BTreeMap::new();
        for d in 0..=t {
            for y in 0..=d {
                let m = Monomial::new(d - y, y);
                if let Some(c) = acc[tri_index(m)].take() {
                    if !c.is_zero() {
                        coeffs.insert(m, c);
                    }
                }
            }
        }
        Jet2 { trunc: t, coeffs }
    }

    /// Product whose truncation is the largest one the factors determine:
    /// `min(trunc f + ν(g), trunc g + ν(f))`, capped at `cap`.
    pub fn mul_exact_order(&self, other: &Self, cap: u32) -> Self {
        self.mul_trunc(other, self.exact_product_trunc(other, cap))
    }

    pub(crate) fn exact_product_trunc(&self, other: &Self, cap: u32) -> u32 {
        (self.trunc.saturating_add(other.valuation().saturating()))
            .min(other.trunc.saturating_add(self.valuation().saturating()))
            .min(cap)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Jet2::one(self.trunc);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Least total degree of a stored term.
    pub fn valuation(&self) -> Valuation {
        match self.coeffs.keys().next() {
            Some(m) => Valuation::Finite(m.degree()),
            None => Valuation::Infinite,
        }
    }

    /// Least exponent of `var` among stored terms.
    pub fn valuation_in(&self, var: Var) -> Valuation {
        self.coeffs
            .keys()
            .map(|m| match var {
                Var::X => m.x,
                Var::Y => m.y,
            })
            .min()
            .map_or(Valuation::Infinite, Valuation::Finite)
    }

    /// Degree-`m` homogeneous component.
    pub fn homogeneous_part(&self, m: u32) -> Result<Self, JetError> {
        if m > self.trunc {
            return Err(JetError::OutOfRange { degree: m, trunc: self.trunc });
        }
        Ok(Jet2 {
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(mm, _)| mm.degree() == m)
                .map(|(mm, c)| (*mm, c.clone()))
                .collect(),
        })
    }

    /// Formal partial derivative; the result is known one degree less.
    pub fn partial_derivative(&self, var: Var) -> Self {
        let mut out = Jet2::zero(self.trunc.saturating_sub(1));
        for (m, c) in &self.coeffs {
            let (e, dm) = match var {
                Var::X if m.x > 0 => (m.x, Monomial::new(m.x - 1, m.y)),
                Var::Y if m.y > 0 => (m.y, Monomial::new(m.x, m.y - 1)),
                _ => continue,
            };
            out.add_term(dm, c.mul_ref(&C::from_i64(e as i64)));
        }
        out
    }

    /// Blow-up substitution. `U1`: `f(x, x·v)` as a jet in `(x, v)`;
    /// `U2`: `f(u·y, y)` as a jet in `(u, y)`. Unknown terms of `f` map to
    /// degree `> trunc`, so the truncation is kept.
    pub fn substitute_chart(&self, chart: Chart) -> Self {
        let mut out = Jet2::zero(self.trunc);
        for (m, c) in &self.coeffs {
            let nm = match chart {
                Chart::U1 => Monomial::new(m.x + m.y, m.y),
                Chart::U2 => Monomial::new(m.x, m.x + m.y),
            };
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Series quotient `n / d` for `d` with a nonzero constant term.
    pub fn divide_by_unit(&self, d: &Self) -> Result<Self, JetError> {
        let t = self.trunc.min(d.trunc);
        let d0 = d.coeff(0, 0);
        if d0.is_zero() {
            return Err(JetError::NotAUnit);
        }
        let d0_inv = d0.inv()?;
        let dh: Vec<Self> = (0..=t).map(|m| d.homogeneous_part(m).expect("m <= trunc")).collect();
        let mut q: Vec<Self> = Vec::with_capacity(t as usize + 1);
        for m in 0..=t {
            let mut acc = self.homogeneous_part(m).expect("m <= trunc").with_trunc_unchecked(t);
            for l in 1..=m {
                if dh[l as usize].is_zero() || q[(m - l) as usize].is_zero() {
                    continue;
                }
                acc = acc.sub(&dh[l as usize].mul_trunc(&q[(m - l) as usize], t));
            }
            q.push(acc.scale(&d0_inv));
        }
        let mut out = Jet2::zero(t);
        for part in q {
            for (m, c) in part.coeffs {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    /// Exact quotient by `var^m`; the truncation drops by `m`.
    pub fn divide_by_monomial(&self, var: Var, m: u32) -> Result<Self, JetError> {
        let mut out = Jet2::zero(self.trunc.saturating_sub(m));
        for (mm, c) in &self.coeffs {
            let nm = match var {
                Var::X if mm.x >= m => Monomial::new(mm.x - m, mm.y),
                Var::Y if mm.y >= m => Monomial::new(mm.x, mm.y - m),
                _ => return Err(JetError::NotDivisible(mm.x, mm.y)),
            };
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    /// Multiplies by `x^i y^j`, raising the truncation accordingly.
    pub fn shift(&self, i: u32, j: u32) -> Self {
        Jet2 {
            trunc: self.trunc + i + j,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| (Monomial::new(m.x + i, m.y + j), c.clone()))
                .collect(),
        }
    }

    /// `f` with `var` replaced by `var + c`, re-expanded at the same
    /// truncation. Exact for polynomials of degree `<= trunc`.
    pub fn recenter(&self, var: Var, c: &C) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let max_e = self
            .coeffs
            .keys()
            .map(|m| match var {
                Var::X => m.x,
                Var::Y => m.y,
            })
            .max()
            .unwrap_or(0);
        let mut pows = vec![C::one()];
        for k in 1..=max_e {
            pows.push(pows[k as usize - 1].mul_ref(c));
        }
        let binom = binomials(max_e);
        let mut out = Jet2::zero(self.trunc);
        for (m, coef) in &self.coeffs {
            let e = match var {
                Var::X => m.x,
                Var::Y => m.y,
            };
            for l in 0..=e {
                let factor = pows[(e - l) as usize].mul_ref(&C::from_i64(binom[e as usize][l as usize]));
                let nm = match var {
                    Var::X => Monomial::new(l, m.y),
                    Var::Y => Monomial::new(m.x, l),
                };
                out.add_term(nm, coef.mul_ref(&factor));
            }
        }
        out
    }

    /// `f(m00·x + m01·y, m10·x + m11·y)`; linear substitutions preserve the
    /// total-degree truncation exactly.
    pub fn linear_substitute(&self, m: &[[C; 2]; 2]) -> Self {
        let t = self.trunc;
        let lx = Jet2::from_terms([((1, 0), m[0][0].clone()), ((0, 1), m[0][1].clone())], t);
        let ly = Jet2::from_terms([((1, 0), m[1][0].clone()), ((0, 1), m[1][1].clone())], t);
        self.substitute(&lx, &ly)
    }

    /// `f(g1, g2)` for `g1`, `g2` without constant term. The truncation is
    /// `min` of the three inputs.
    pub fn substitute(&self, g1: &Self, g2: &Self) -> Self {
        debug_assert!(g1.coeff(0, 0).is_zero() && g2.coeff(0, 0).is_zero());
        let t = self.trunc.min(g1.trunc).min(g2.trunc);
        let max_x = self.coeffs.keys().map(|m| m.x).max().unwrap_or(0);
        let max_y = self.coeffs.keys().map(|m| m.y).max().unwrap_or(0);
        let powers = |g: &Self, n: u32| {
            let mut v = vec![Jet2::one(t)];
            for k in 1..=n {
                let next = v[k as usize - 1].mul_exact_order(g, t);
                v.push(next);
            }
            v
        };
        let px = powers(g1, max_x);
        let py = powers(g2, max_y);
        let mut out = Jet2::zero(t);
        for (m, c) in &self.coeffs {
            if m.degree() > t {
                continue;
            }
            let term = px[m.x as usize].mul_trunc(&py[m.y as usize], t).scale(c);
            for (mm, cc) in term.coeffs {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// Swaps the two variables.
    pub fn swap_vars(&self) -> Self {
        Jet2 {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(m, c)| (Monomial::new(m.y, m.x), c.clone())).collect(),
        }
    }

    /// Restriction to `var = 0` as a polynomial in the other variable.
    pub fn restrict_zero(&self, var: Var) -> UniPoly<C> {
        let mut v: Vec<C> = Vec::new();
        for (m, c) in &self.coeffs {
            let (zero_e, other_e) = match var {
                Var::X => (m.x, m.y),
                Var::Y => (m.y, m.x),
            };
            if zero_e == 0 {
                let k = other_e as usize;
                if v.len() <= k {
                    v.resize(k + 1, C::zero());
                }
                v[k] += c;
            }
        }
        UniPoly::new(v)
    }

    /// For a homogeneous jet of degree `k`: `h(1, v)` (`Var::X`) or
    /// `h(u, 1)` (`Var::Y`) as a polynomial in the other variable.
    pub fn dehomogenize(&self, set_to_one: Var) -> UniPoly<C> {
        let mut v: Vec<C> = Vec::new();
        for (m, c) in &self.coeffs {
            let k = match set_to_one {
                Var::X => m.y,
                Var::Y => m.x,
            } as usize;
            if v.len() <= k {
                v.resize(k + 1, C::zero());
            }
            v[k] += c;
        }
        UniPoly::new(v)
    }

    pub fn eval(&self, x: &C, y: &C) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.coeffs {
            acc += &c.mul_ref(&x.pow(m.x)).mul_ref(&y.pow(m.y));
        }
        acc
    }

    /// Canonical text: graded-lexicographic terms such as `x + 3/2*x^2*y`.
    pub fn to_text(&self, vars: (&str, &str)) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in &self.coeffs {
            let mut parts = Vec::new();
            for (name, e) in [(vars.0, m.x), (vars.1, m.y)] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            let term = format_term(c, &parts.join("*"));
            push_term(&mut out, &term);
        }
        out
    }
}

pub(crate) fn format_term<C: Coefficient>(c: &C, mono: &str) -> String {
    let cs = c.to_string();
    if mono.is_empty() {
        return cs;
    }
    if c.is_one() && cs == "1" {
        return mono.to_string();
    }
    if cs == "-1" {
        return format!("-{mono}");
    }
    format!("{cs}*{mono}")
}

pub(crate) fn push_term(out: &mut String, term: &str) {
    if out.is_empty() {
        out.push_str(term);
    } else if let Some(rest) = term.strip_prefix('-') {
        out.push_str(" - ");
        out.push_str(rest);
    } else {
        out.push_str(" + ");
        out.push_str(term);
    }
}

fn binomials(n: u32) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = vec![vec![1]];
    for k in 1..=n as usize {
        let prev = &rows[k - 1];
        let mut row = vec![1i64; k + 1];
        for j in 1..k {
            row[j] = prev[j - 1] + prev[j];
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::GaussianRational as G;

    fn j(terms: &[((u32, u32), i64)], t: u32) -> Jet2<G> {
        Jet2::from_terms(terms.iter().map(|&(m, c)| (m, G::from_integer(c))), t)
    }

    #[test]
    fn arithmetic() {
        let xpy = j(&[((1, 0), 1), ((0, 1), 1)], 6);
        let xmy = j(&[((1, 0), 1), ((0, 1), -1)], 6);
        assert_eq!(xpy.mul(&xmy), j(&[((2, 0), 1), ((0, 2), -1)], 6));
        assert!(xpy.mul(&Jet2::zero(6)).is_zero());
        let a = j(&[((1, 0), 1), ((0, 2), 1)], 6);
        let b = j(&[((0, 1), 1), ((0, 2), -1)], 6);
        assert_eq!(a.add(&b), xpy);
    }

    #[test]
    fn min_trunc_rule() {
        let a = j(&[((1, 0), 1)], 3);
        let b = j(&[((1, 0), 1), ((3, 0), 1)], 5);
        let p = a.mul(&b);
        assert_eq!(p.trunc(), 3);
        assert_eq!(p, j(&[((2, 0), 1)], 3));
        assert_eq!(a.add(&b).trunc(), 3);
    }

    #[test]
    fn valuations() {
        assert_eq!(j(&[((2, 1), 1), ((0, 4), 1)], 6).valuation(), Valuation::Finite(3));
        assert_eq!(Jet2::<G>::zero(4).valuation(), Valuation::Infinite);
        assert_eq!(j(&[((0, 0), 1), ((1, 0), 1)], 4).valuation(), Valuation::Finite(0));
    }

    #[test]
    fn homogeneous_parts() {
        let f = j(&[((1, 0), 1), ((2, 0), 1), ((1, 1), 1)], 5);
        assert_eq!(f.homogeneous_part(2).unwrap(), j(&[((2, 0), 1), ((1, 1), 1)], 5));
        assert!(j(&[((2, 0), 1)], 5).homogeneous_part(3).unwrap().is_zero());
        let h = j(&[((2, 0), 3), ((0, 2), 1)], 5);
        assert_eq!(h.homogeneous_part(2).unwrap(), h);
        assert_eq!(f.homogeneous_part(6), Err(JetError::OutOfRange { degree: 6, trunc: 5 }));
    }

    #[test]
    fn derivatives() {
        let f = j(&[((2, 1), 1)], 5);
        let d = f.partial_derivative(Var::X);
        assert_eq!(d, j(&[((1, 1), 2)], 4));
        assert!(j(&[((2, 0), 1)], 5).partial_derivative(Var::Y).is_zero());
        assert_eq!(j(&[((1, 0), 1), ((0, 2), 1)], 5).partial_derivative(Var::X), j(&[((0, 0), 1)], 4));
    }

    #[test]
    fn chart_substitutions() {
        assert_eq!(j(&[((1, 0), 1), ((0, 2), 1)], 6).substitute_chart(Chart::U1), j(&[((1, 0), 1), ((2, 2), 1)], 6));
        assert_eq!(j(&[((0, 2), 1)], 6).substitute_chart(Chart::U2), j(&[((0, 2), 1)], 6));
        assert_eq!(j(&[((1, 1), 1)], 6).substitute_chart(Chart::U1), j(&[((2, 1), 1)], 6));
    }

    #[test]
    fn unit_division() {
        let one_plus_x = j(&[((0, 0), 1), ((1, 0), 1)], 5);
        let inv = Jet2::one(5).divide_by_unit(&one_plus_x).unwrap();
        assert_eq!(inv, j(&[((0, 0), 1), ((1, 0), -1), ((2, 0), 1), ((3, 0), -1), ((4, 0), 1), ((5, 0), -1)], 5));
        let f = j(&[((1, 1), 3), ((0, 2), 1)], 5);
        assert_eq!(f.divide_by_unit(&Jet2::one(5)).unwrap(), f);
        // (v + x) / (1 + x), multiplied back
        let n = j(&[((0, 1), 1), ((1, 0), 1)], 5);
        let q = n.divide_by_unit(&one_plus_x).unwrap();
        assert_eq!(q.mul(&one_plus_x), n);
        assert_eq!(q.coeff(0, 1), G::one());
        assert_eq!(q.coeff(1, 0), G::one());
        assert_eq!(q.coeff(1, 1), G::from_integer(-1));
        assert_eq!(q.coeff(2, 0), G::from_integer(-1));
        assert_eq!(j(&[((1, 0), 1)], 5).divide_by_unit(&j(&[((1, 0), 1)], 5)), Err(JetError::NotAUnit));
    }

    #[test]
    fn monomial_division() {
        // (x^2 v^2 - v x^2) / x = x (v^2 - v)
        let f = j(&[((2, 2), 1), ((2, 1), -1)], 6);
        let q = f.divide_by_monomial(Var::X, 1).unwrap();
        assert_eq!(q, j(&[((1, 2), 1), ((1, 1), -1)], 5));
        assert_eq!(j(&[((3, 0), 1)], 6).divide_by_monomial(Var::X, 1).unwrap(), j(&[((2, 0), 1)], 5));
        assert_eq!(
            j(&[((1, 0), 1), ((0, 1), 1)], 6).divide_by_monomial(Var::X, 1),
            Err(JetError::NotDivisible(0, 1))
        );
    }

    #[test]
    fn recentering() {
        let f = j(&[((0, 0), 1), ((0, 3), -1)], 6);
        assert_eq!(f.recenter(Var::Y, &G::one()), j(&[((0, 1), -3), ((0, 2), -3), ((0, 3), -1)], 6));
        assert_eq!(f.recenter(Var::Y, &G::zero()), f);
        assert_eq!(j(&[((0, 2), 1)], 6).recenter(Var::Y, &G::one()), j(&[((0, 0), 1), ((0, 1), 2), ((0, 2), 1)], 6));
    }

    #[test]
    fn linear_change() {
        // (x + y)^2 under y -> y + 2x
        let f = j(&[((2, 0), 1), ((1, 1), 2), ((0, 2), 1)], 4);
        let m = [[G::one(), G::zero()], [G::from_integer(2), G::one()]];
        assert_eq!(f.linear_substitute(&m), j(&[((2, 0), 9), ((1, 1), 6), ((0, 2), 1)], 4));
    }

    #[test]
    fn canonical_text() {
        let f = Jet2::from_terms(
            [((2, 1), G::from_parts(1, 2, 3, 4)), ((1, 0), G::one()), ((0, 2), G::from_integer(-1)), ((3, 0), G::from_ratio(3, 2))],
            6,
        );
        assert_eq!(f.to_text(("x", "y")), "x - y^2 + 3/2*x^3 + (1/2+3/4*i)*x^2*y");
        assert_eq!(Jet2::<G>::zero(3).to_string(), "0");
    }
}
