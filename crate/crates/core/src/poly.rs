//! Univariate and bivariate polynomial algebra.
//!
//! Univariate polynomials carry the restrictions of vector fields to the
//! exceptional divisor (tangent-cone polynomials, residue data). Bivariate
//! polynomials over `Q(i)` are only used for gcd computations on honest
//! polynomial inputs.

use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::coeffs::{Coefficient, ComplexFloat, GaussianRational};

/// Dense univariate polynomial, coefficients from degree 0 upward, no
/// trailing (numerically) zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> UniPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        UniPoly::new(vec![c])
    }

    /// `v - c`.
    pub fn linear_root(c: &C) -> Self {
        UniPoly::new(vec![-c.clone(), C::one()])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    /// Multiplicity of `0` as a root.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, v: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(v);
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_ref(&C::from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &a.mul_ref(b);
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    /// Quotient and remainder; `None` when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dl = d.leading()?;
        let dl_inv = dl.inv().ok()?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((UniPoly::zero(), self.clone()));
        }
        let mut q = vec![C::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].mul_ref(&dl_inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = c.mul_ref(dc);
                    r[i + j] -= &t;
                }
            }
            r[i + dd] = C::zero();
            q[i] = c;
        }
        r.truncate(dd);
        Some((UniPoly::new(q), UniPoly::new(r)))
    }

    pub fn monic(&self) -> Self {
        match self.leading().and_then(|l| l.inv().ok()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Taylor shift: the polynomial `w ↦ self(w + c)`.
    pub fn recenter(&self, c: &C) -> Self {
        let mut out = self.coeffs.clone();
        let n = out.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = out[j + 1].mul_ref(c);
                out[j] += &t;
            }
        }
        UniPoly::new(out)
    }

    /// Squarefree part `self / gcd(self, self')`, made monic.
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).expect("nonzero gcd").0.monic()
    }

    /// Multiplicity of `r` as a root, dividing out `(v - r)` exactly.
    fn strip_root(&self, r: &C) -> (Self, u32) {
        let lin = UniPoly::linear_root(r);
        let mut cur = self.clone();
        let mut m = 0;
        while !cur.is_zero() {
            let (q, rem) = cur.div_rem(&lin).expect("monic divisor");
            if !rem.is_zero() {
                break;
            }
            cur = q;
            m += 1;
        }
        (cur, m)
    }

    /// Truncated power series `self / den` through degree `n`.
    pub fn series_quotient(&self, den: &Self, n: usize) -> Option<Vec<C>> {
        let d0 = den.coeffs.first()?;
        let d0_inv = d0.inv().ok()?;
        let mut q: Vec<C> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut acc = self.coeff(m);
            for l in 1..=m {
                if l < den.coeffs.len() {
                    acc -= &den.coeffs[l].mul_ref(&q[m - l]);
                }
            }
            q.push(acc.mul_ref(&d0_inv));
        }
        Some(q)
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> UniPoly<D> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Text form in the variable `var`, highest degree first.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let term = crate::jets::format_term(c, &mono);
            crate::jets::push_term(&mut out, &term);
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("v"))
    }
}

// ---------------------------------------------------------------------------
// Roots
// ---------------------------------------------------------------------------

/// Roots found in the coefficient field, with multiplicities, and the
/// cofactor carrying every root that could not be represented.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet<C> {
    pub roots: Vec<(C, u32)>,
    pub unresolved: Option<UniPoly<C>>,
}

/// All roots in `Q(i)` of a polynomial over `Q(i)`.
///
/// Clearing denominators gives a polynomial over `Z[i]` whose roots in `Q(i)`
/// are `z / a_n` for Gaussian integers `z`, `a_n` the leading coefficient.
/// Numerical roots of the squarefree part locate the candidates `z`, which
/// are then confirmed by exact evaluation and divided out exactly.
pub fn gaussian_rational_roots(poly: &UniPoly<GaussianRational>) -> RootSet<GaussianRational> {
    type G = GaussianRational;
    if poly.degree().unwrap_or(0) == 0 {
        return RootSet { roots: Vec::new(), unresolved: None };
    }
    let sf = poly.squarefree();
    let mut found: Vec<G> = Vec::new();
    if sf.coeff(0).is_zero() {
        found.push(G::zero());
    }
    let lcm = sf
        .coeffs()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, &c.denominator_lcm()));
    let scaled = sf.scale(&G::real(num_rational::BigRational::from_integer(lcm)));
    let lead = scaled.leading().expect("nonconstant").clone();
    let lead_c = lead.to_complex();
    let numeric = complex_roots_raw(&sf.map(|c| ComplexFloat(c.to_complex())));
    for rho in numeric {
        let z = rho * lead_c;
        let (zr, zi) = (z.re.round(), z.im.round());
        if !zr.is_finite() || !zi.is_finite() || zr.abs() > 1e15 || zi.abs() > 1e15 {
            continue;
        }
        'cand: for dr in [0.0, -1.0, 1.0] {
            for di in [0.0, -1.0, 1.0] {
                let cand_z = G::new(
                    num_rational::BigRational::from_integer(((zr + dr) as i64).into()),
                    num_rational::BigRational::from_integer(((zi + di) as i64).into()),
                );
                let cand = cand_z.checked_div(&lead).expect("nonzero leading coefficient");
                if found.contains(&cand) {
                    continue;
                }
                if sf.eval(&cand).is_zero() {
                    found.push(cand);
                    break 'cand;
                }
            }
        }
    }
    found.sort_by(|a, b| a.lex_cmp(b));
    let mut cofactor = poly.clone();
    let mut roots = Vec::new();
    for r in found {
        let (rest, m) = cofactor.strip_root(&r);
        if m > 0 {
            roots.push((r, m));
            cofactor = rest;
        }
    }
    let unresolved = if cofactor.degree().unwrap_or(0) >= 1 { Some(cofactor.monic()) } else { None };
    RootSet { roots, unresolved }
}

/// All complex roots of a polynomial over floats, clustered into multiple
/// roots when they lie within a small relative distance.
pub fn complex_roots(poly: &UniPoly<ComplexFloat>) -> RootSet<ComplexFloat> {
    if poly.degree().unwrap_or(0) == 0 {
        return RootSet { roots: Vec::new(), unresolved: None };
    }
    let raw = complex_roots_raw(poly);
    let mut clusters: Vec<(Vec<Complex64>, Complex64)> = Vec::new();
    for z in raw {
        let scale = 1.0f64.max(z.norm());
        match clusters.iter_mut().find(|(_, c)| (*c - z).norm() <= 1e-4 * scale) {
            Some((members, centre)) => {
                members.push(z);
                *centre = members.iter().sum::<Complex64>() / members.len() as f64;
            }
            None => clusters.push((vec![z], z)),
        }
    }
    let mut roots: Vec<(ComplexFloat, u32)> = clusters
        .into_iter()
        .map(|(members, centre)| {
            let r = if members.len() == 1 { polish(poly, centre) } else { centre };
            (ComplexFloat(r), members.len() as u32)
        })
        .collect();
    roots.sort_by(|a, b| a.0.lex_cmp(&b.0));
    RootSet { roots, unresolved: None }
}

fn eval_c(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn polish(poly: &UniPoly<ComplexFloat>, z0: Complex64) -> Complex64 {
    let coeffs: Vec<Complex64> = poly.coeffs().iter().map(|c| c.0).collect();
    let mut z = z0;
    for _ in 0..8 {
        let (p, dp) = eval_c(&coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= 1e-17 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// Aberth–Ehrlich iteration; returns `degree` approximate roots.
fn complex_roots_raw(poly: &UniPoly<ComplexFloat>) -> Vec<Complex64> {
    let n = match poly.degree() {
        Some(n) if n >= 1 => n,
        _ => return Vec::new(),
    };
    let lead = poly.leading().expect("nonzero").0;
    let coeffs: Vec<Complex64> = poly.coeffs().iter().map(|c| c.0 / lead).collect();
    if n == 1 {
        return vec![-coeffs[0]];
    }
    // Cauchy bound for the initial circle.
    let bound = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let radius = bound.min(1e6).max(1e-3) * 0.5;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_c(&coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 { Complex64::zero() } else { 1.0 / d }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let step = if denom.norm() == 0.0 || !dp.is_finite() || dp.norm() == 0.0 {
                Complex64::new(1e-3, 1e-3)
            } else {
                ratio / denom
            };
            z[i] -= step;
            max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

// ---------------------------------------------------------------------------
// Bivariate polynomials over Q(i)
// ---------------------------------------------------------------------------

/// Polynomial in `y` whose coefficients are polynomials in `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    rows: Vec<UniPoly<GaussianRational>>,
}

impl BiPoly {
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = ((u32, u32), &'a GaussianRational)>) -> Self {
        let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
        for ((i, j), c) in terms {
            let (i, j) = (i as usize, j as usize);
            if rows.len() <= j {
                rows.resize(j + 1, Vec::new());
            }
            if rows[j].len() <= i {
                rows[j].resize(i + 1, GaussianRational::zero());
            }
            rows[j][i] += c;
        }
        BiPoly::from_rows(rows.into_iter().map(UniPoly::new).collect())
    }

    fn from_rows(mut rows: Vec<UniPoly<GaussianRational>>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BiPoly { rows }
    }

    /// `(x-exponent, y-exponent, coefficient)` triples.
    pub fn terms(&self) -> Vec<((u32, u32), GaussianRational)> {
        let mut out = Vec::new();
        for (j, row) in self.rows.iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push(((i as u32, j as u32), c.clone()));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn y_degree(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.rows.len() <= 1 && self.rows.first().is_none_or(|r| r.degree().unwrap_or(0) == 0)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.rows.first().map(|r| r.coeff(0)).unwrap_or_else(GaussianRational::zero)
    }

    fn leading_row(&self) -> &UniPoly<GaussianRational> {
        self.rows.last().expect("nonzero bivariate polynomial")
    }

    fn content(&self) -> UniPoly<GaussianRational> {
        self.rows.iter().fold(UniPoly::zero(), |acc, r| acc.gcd(r))
    }

    fn scale_rows(&self, f: &UniPoly<GaussianRational>) -> Self {
        BiPoly::from_rows(self.rows.iter().map(|r| r.mul(f)).collect())
    }

    fn div_rows(&self, f: &UniPoly<GaussianRational>) -> Self {
        BiPoly::from_rows(self.rows.iter().map(|r| r.div_rem(f).expect("nonzero content").0).collect())
    }

    fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.div_rows(&self.content())
    }

    /// Pseudo-remainder with respect to `y`.
    fn pseudo_rem(&self, d: &BiPoly) -> BiPoly {
        let dd = d.y_degree().expect("nonzero divisor");
        let lc = d.leading_row().clone();
        let mut r = self.clone();
        while let Some(rd) = r.y_degree() {
            if rd < dd {
                break;
            }
            let lr = r.leading_row().clone();
            let shift = rd - dd;
            let mut rows: Vec<UniPoly<GaussianRational>> = r.rows.iter().map(|row| row.mul(&lc)).collect();
            for (j, drow) in d.rows.iter().enumerate() {
                rows[j + shift] = rows[j + shift].sub(&drow.mul(&lr));
            }
            r = BiPoly::from_rows(rows);
        }
        r
    }

    /// Greatest common divisor, normalised so its leading coefficient is 1.
    pub fn gcd(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let content = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.y_degree() < b.y_degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale_rows(&content).normalized()
    }

    fn normalized(&self) -> BiPoly {
        match self.rows.last().and_then(|r| r.leading().cloned()) {
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                BiPoly::from_rows(self.rows.iter().map(|r| r.scale(&inv)).collect())
            }
            None => self.clone(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let dd = d.y_degree()?;
        let lc = d.leading_row().clone();
        let mut r = self.clone();
        let mut q: Vec<UniPoly<GaussianRational>> = vec![UniPoly::zero(); self.rows.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.y_degree() {
            if rd < dd {
                return None;
            }
            let (c, rem) = r.leading_row().div_rem(&lc)?;
            if !rem.is_zero() {
                return None;
            }
            let shift = rd - dd;
            let mut rows = r.rows.clone();
            for (j, drow) in d.rows.iter().enumerate() {
                rows[j + shift] = rows[j + shift].sub(&drow.mul(&c));
            }
            q[shift] = q[shift].add(&c);
            let next = BiPoly::from_rows(rows);
            if next.y_degree() == Some(rd) {
                return None;
            }
            r = next;
        }
        Some(BiPoly::from_rows(q))
    }

    /// Total degree, `None` for zero.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms().iter().map(|((i, j), _)| (*i + *j) as usize).max()
    }
}

/// Height of a Gaussian rational, used in tests to keep random inputs small.
pub fn height(c: &GaussianRational) -> f64 {
    let f = |q: &num_rational::BigRational| {
        q.numer().to_f64().unwrap_or(f64::INFINITY).abs().max(q.denom().to_f64().unwrap_or(f64::INFINITY))
    };
    f(&c.re).max(f(&c.im))
}
