//! Coefficient fields.
//!
//! Two interchangeable backends share the [`Coefficient`] interface:
//! exact Gaussian rationals `Q(i)` and double-precision complex numbers
//! compared against a process-wide tolerance. The exact backend is the
//! source of truth; the float backend reaches irrational directions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::poly::{RootSet, UniPoly};

/// Default tolerance for zero tests in the float backend.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default denominator bound for rational reconstruction of float values.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000;

static FLOAT_TOL_BITS: AtomicU64 = AtomicU64::new(DEFAULT_TOL.to_bits());

/// Current zero tolerance of the float backend.
pub fn float_tolerance() -> f64 {
    f64::from_bits(FLOAT_TOL_BITS.load(AtomicOrdering::Relaxed))
}

/// Sets the zero tolerance of the float backend for the whole process.
pub fn set_float_tolerance(tol: f64) {
    assert!(tol.is_finite() && tol >= 0.0, "tolerance must be finite and non-negative");
    FLOAT_TOL_BITS.store(tol.to_bits(), AtomicOrdering::Relaxed);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
}

/// A field element usable as a jet coefficient.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_gaussian(g: &GaussianRational) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn checked_div(&self, rhs: &Self) -> Result<Self, CoeffError>;
    /// Exact zero test (exact backend) or `|self| <= tol` (float backend).
    fn is_zero(&self) -> bool;
    fn to_complex(&self) -> Complex64;
    fn to_index_value(&self) -> IndexValue;
    /// Total order used to make divisor-point enumeration deterministic.
    fn lex_cmp(&self, other: &Self) -> Ordering;
    /// Roots of a univariate polynomial that are representable in this field.
    fn roots(poly: &UniPoly<Self>) -> RootSet<Self>;
    fn to_json(&self) -> Value;
    /// Exact value, when one is available (float values convert bit-exactly).
    fn as_gaussian(&self) -> Option<GaussianRational>;

    fn from_i64(n: i64) -> Self {
        Self::from_gaussian(&GaussianRational::from_integer(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_gaussian(&GaussianRational::from_ratio(num, den))
    }

    fn inv(&self) -> Result<Self, CoeffError> {
        Self::one().checked_div(self)
    }

    fn is_one(&self) -> bool {
        (self.clone() - Self::one()).is_zero()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    fn scale_int(&self, n: i64) -> Self {
        self.mul_ref(&Self::from_i64(n))
    }

    /// `acc[i + j] += f[i]·g[j]`; `acc` must hold `f.len() + g.len() - 1`
    /// entries.
    fn mul_add_rows(acc: &mut [Self], f: &[Self], g: &[Self]) {
        for (i, fi) in f.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, gj) in g.iter().enumerate() {
                if !gj.is_zero() {
                    acc[i + j] += &fi.mul_ref(gj);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// Common denominator of a row and the scaled numerators (`None` for zero
/// entries); `None` for an all-zero row.
fn integer_row(row: &[GaussianRational]) -> Option<(BigInt, Vec<Option<(BigInt, BigInt)>>)> {
    let mut den = BigInt::one();
    let mut any = false;
    for c in row.iter().filter(|c| !c.is_zero()) {
        any = true;
        den = den.lcm(&c.denominator_lcm());
    }
    if !any {
        return None;
    }
    let scaled = row
        .iter()
        .map(|c| {
            (!c.is_zero()).then(|| {
                let re = c.re.numer() * (&den / c.re.denom());
                let im = c.im.numer() * (&den / c.im.denom());
                (re, im)
            })
        })
        .collect();
    Some((den, scaled))
}

/// `re + im·i` with both parts in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_integer(n: i64) -> Self {
        GaussianRational { re: BigRational::from_integer(n.into()), im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(num.into(), den.into()),
            im: BigRational::zero(),
        }
    }

    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Least common multiple of the two denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    /// Converts a binary double exactly (no rounding).
    pub fn from_f64_exact(re: f64, im: f64) -> Option<Self> {
        Some(GaussianRational {
            re: BigRational::from_float(re)?,
            im: BigRational::from_float(im)?,
        })
    }

    fn cmp_lex(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl<'a> AddAssign<&'a GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &'a GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &'a GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// `3/2`, `-i`, `1/2*i`, `(1/2+3/4*i)`; always parseable back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |q: &BigRational| -> String {
            if q.is_one() {
                "i".to_string()
            } else if *q == -BigRational::one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(q))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => f.write_str(&fmt_rational(&self.re)),
            (true, false) => f.write_str(&imag(&self.im)),
            (false, false) => {
                let im = imag(&self.im);
                if im.starts_with('-') {
                    write!(f, "({}{})", fmt_rational(&self.re), im)
                } else {
                    write!(f, "({}+{})", fmt_rational(&self.re), im)
                }
            }
        }
    }
}

impl Serialize for GaussianRational {
    /// `[re_num, re_den, im_num, im_den]` as decimal strings.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [
            self.re.numer().to_string(),
            self.re.denom().to_string(),
            self.im.numer().to_string(),
            self.im.denom().to_string(),
        ]
        .serialize(s)
    }
}

impl Coefficient for GaussianRational {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn one() -> Self {
        GaussianRational::from_integer(1)
    }

    fn from_gaussian(g: &GaussianRational) -> Self {
        g.clone()
    }

    fn scale_int(&self, n: i64) -> Self {
        let n = BigInt::from(n);
        GaussianRational { re: &self.re * &n, im: &self.im * &n }
    }

    /// Clears denominators once per row so the convolution runs over
    /// Gaussian integers and each output entry is reduced once.
    fn mul_add_rows(acc: &mut [Self], f: &[Self], g: &[Self]) {
        let (Some((df, fi)), Some((dg, gi))) = (integer_row(f), integer_row(g)) else {
            return;
        };
        let mut out: Vec<Option<(BigInt, BigInt)>> = vec![None; f.len() + g.len() - 1];
        for (i, a) in fi.iter().enumerate() {
            let Some((ar, ai)) = a else { continue };
            for (j, b) in gi.iter().enumerate() {
                let Some((br, bi)) = b else { continue };
                let re = ar * br - ai * bi;
                let im = ar * bi + ai * br;
                match &mut out[i + j] {
                    Some((r, m)) => {
                        *r += re;
                        *m += im;
                    }
                    slot => *slot = Some((re, im)),
                }
            }
        }
        let den = df * dg;
        for (k, v) in out.into_iter().enumerate() {
            if let Some((re, im)) = v {
                acc[k] += &GaussianRational::new(BigRational::new(re, den.clone()), BigRational::new(im, den.clone()));
            }
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, CoeffError> {
        if Coefficient::is_zero(rhs) {
            return Err(CoeffError::DivisionByZero);
        }
        if rhs.im.is_zero() {
            return Ok(GaussianRational { re: &self.re / &rhs.re, im: &self.im / &rhs.re });
        }
        let n = rhs.norm_sqr();
        let num = self.mul_ref(&rhs.conj());
        Ok(GaussianRational { re: num.re / &n, im: num.im / n })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    fn to_index_value(&self) -> IndexValue {
        IndexValue::Exact(self.clone())
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.cmp_lex(other)
    }

    fn roots(poly: &UniPoly<Self>) -> RootSet<Self> {
        crate::poly::gaussian_rational_roots(poly)
    }

    fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("string array")
    }

    fn as_gaussian(&self) -> Option<GaussianRational> {
        Some(self.clone())
    }
}

// ---------------------------------------------------------------------------
// Complex floats
// ---------------------------------------------------------------------------

/// Double-precision complex number; zero tests use [`float_tolerance`].
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct ComplexFloat(pub Complex64);

impl ComplexFloat {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexFloat(Complex64::new(re, im))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn abs(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.re.is_finite() && self.0.im.is_finite()
    }
}

impl Add for ComplexFloat {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ComplexFloat(self.0 + rhs.0)
    }
}

impl Sub for ComplexFloat {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ComplexFloat(self.0 - rhs.0)
    }
}

impl Mul for ComplexFloat {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ComplexFloat(self.0 * rhs.0)
    }
}

impl Neg for ComplexFloat {
    type Output = Self;
    fn neg(self) -> Self {
        ComplexFloat(-self.0)
    }
}

impl<'a> AddAssign<&'a ComplexFloat> for ComplexFloat {
    fn add_assign(&mut self, rhs: &'a ComplexFloat) {
        self.0 += rhs.0;
    }
}

impl<'a> SubAssign<&'a ComplexFloat> for ComplexFloat {
    fn sub_assign(&mut self, rhs: &'a ComplexFloat) {
        self.0 -= rhs.0;
    }
}

impl fmt::Display for ComplexFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if im == 0.0 {
            write!(f, "{re}")
        } else if re == 0.0 {
            write!(f, "{im}*i")
        } else if im < 0.0 {
            write!(f, "({re}{im}*i)")
        } else {
            write!(f, "({re}+{im}*i)")
        }
    }
}

impl Serialize for ComplexFloat {
    /// `[re, im]`.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl Coefficient for ComplexFloat {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        ComplexFloat::new(0.0, 0.0)
    }

    fn one() -> Self {
        ComplexFloat::new(1.0, 0.0)
    }

    fn from_gaussian(g: &GaussianRational) -> Self {
        ComplexFloat(g.to_complex())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        ComplexFloat(self.0 * rhs.0)
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, CoeffError> {
        if rhs.abs() <= float_tolerance() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(ComplexFloat(self.0 / rhs.0))
    }

    fn is_zero(&self) -> bool {
        self.abs() <= float_tolerance()
    }

    fn to_complex(&self) -> Complex64 {
        self.0
    }

    fn to_index_value(&self) -> IndexValue {
        IndexValue::Float(*self)
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.0
            .re
            .total_cmp(&other.0.re)
            .then_with(|| self.0.im.total_cmp(&other.0.im))
    }

    fn roots(poly: &UniPoly<Self>) -> RootSet<Self> {
        crate::poly::complex_roots(poly)
    }

    fn to_json(&self) -> Value {
        json!([self.0.re, self.0.im])
    }

    fn as_gaussian(&self) -> Option<GaussianRational> {
        GaussianRational::from_f64_exact(self.0.re, self.0.im)
    }
}

// ---------------------------------------------------------------------------
// Index values and their classification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum IndexValue {
    Exact(GaussianRational),
    Float(ComplexFloat),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IndexClass {
    InQGe0,
    NotInQGe0,
    Indeterminate,
}

/// Membership of a value in `Q_{>0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RatioClass {
    InQGt0,
    NotInQGt0,
    Indeterminate,
}

/// Tolerance and denominator bound used to classify float values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyConfig {
    pub tol: f64,
    pub max_denominator: u64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { tol: DEFAULT_TOL, max_denominator: DEFAULT_MAX_DENOMINATOR }
    }
}

/// Sign of a value known to be a real rational (exactly or by reconstruction).
enum Rationality {
    Rational(Ordering),
    NotReal,
    NegativeReal,
    Unknown,
}

impl IndexValue {
    pub fn backend(&self) -> Backend {
        match self {
            IndexValue::Exact(_) => Backend::Exact,
            IndexValue::Float(_) => Backend::Float,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            IndexValue::Exact(g) => g.to_complex(),
            IndexValue::Float(c) => c.0,
        }
    }

    pub fn as_exact(&self) -> Option<&GaussianRational> {
        match self {
            IndexValue::Exact(g) => Some(g),
            IndexValue::Float(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            IndexValue::Exact(g) => g.to_json(),
            IndexValue::Float(c) => c.to_json(),
        }
    }

    fn rationality(&self, cfg: &ClassifyConfig) -> Rationality {
        match self {
            IndexValue::Exact(g) => {
                if g.im.is_zero() {
                    Rationality::Rational(g.re.cmp(&BigRational::zero()))
                } else {
                    Rationality::NotReal
                }
            }
            IndexValue::Float(c) => {
                if !c.is_finite() || c.im().abs() > cfg.tol {
                    return Rationality::NotReal;
                }
                let re = c.re();
                if re.abs() <= cfg.tol {
                    return Rationality::Rational(Ordering::Equal);
                }
                match reconstruct_rational(re, cfg.max_denominator, cfg.tol) {
                    Some((n, _)) => Rationality::Rational(n.signum().cmp(&0)),
                    None if re < 0.0 => Rationality::NegativeReal,
                    None => Rationality::Unknown,
                }
            }
        }
    }
}

impl Serialize for IndexValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            IndexValue::Exact(g) => g.serialize(s),
            IndexValue::Float(c) => c.serialize(s),
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Exact(g) => g.fmt(f),
            IndexValue::Float(c) => c.fmt(f),
        }
    }
}

/// Decides membership of `v` in `Q_{>=0}`.
///
/// Exact values are always decided. Float values with a non-negligible
/// imaginary part or a negative real part are decided as well; otherwise the
/// real part must be recognised as a rational with bounded denominator.
pub fn classify_index(v: &IndexValue, cfg: &ClassifyConfig) -> IndexClass {
    match v.rationality(cfg) {
        Rationality::Rational(Ordering::Less) => IndexClass::NotInQGe0,
        Rationality::Rational(_) => IndexClass::InQGe0,
        Rationality::NotReal | Rationality::NegativeReal => IndexClass::NotInQGe0,
        Rationality::Unknown => IndexClass::Indeterminate,
    }
}

/// Decides membership of `v` in `Q_{>0}`.
pub fn classify_ratio(v: &IndexValue, cfg: &ClassifyConfig) -> RatioClass {
    match v.rationality(cfg) {
        Rationality::Rational(Ordering::Greater) => RatioClass::InQGt0,
        Rationality::Rational(_) => RatioClass::NotInQGt0,
        Rationality::NotReal | Rationality::NegativeReal => RatioClass::NotInQGt0,
        Rationality::Unknown => RatioClass::Indeterminate,
    }
}

/// Best rational approximation `n/d` of `x` with `d <= max_den` by continued
/// fractions, returned only when it lies within `tol` of `x`.
pub fn reconstruct_rational(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if (x - h1 as f64 / k1 as f64).abs() <= tol || frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    let approx = h1 as f64 / k1 as f64;
    if (x - approx).abs() <= tol {
        Some((h1 as i64, k1 as u64))
    } else {
        None
    }
}

/// Exact Gaussian rational from a reconstructed float, if both parts reconstruct.
pub fn reconstruct_gaussian(c: Complex64, cfg: &ClassifyConfig) -> Option<GaussianRational> {
    let (rn, rd) = reconstruct_rational(c.re, cfg.max_denominator, cfg.tol)?;
    let (in_, id) = reconstruct_rational(c.im, cfg.max_denominator, cfg.tol)?;
    Some(GaussianRational::new(
        BigRational::new(rn.into(), (rd as i64).into()),
        BigRational::new(in_.into(), (id as i64).into()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rn: i64, rd: i64, in_: i64, id: i64) -> GaussianRational {
        GaussianRational::from_parts(rn, rd, in_, id)
    }

    #[test]
    fn conjugate_product() {
        let a = g(1, 2, 1, 1);
        let b = g(1, 2, -1, 1);
        assert_eq!(a * b, GaussianRational::from_ratio(5, 4));
    }

    #[test]
    fn zero_divided() {
        let z = GaussianRational::zero();
        assert_eq!(z.checked_div(&GaussianRational::one()).unwrap(), GaussianRational::zero());
        assert_eq!(
            GaussianRational::one().checked_div(&GaussianRational::zero()),
            Err(CoeffError::DivisionByZero)
        );
        assert_eq!(
            ComplexFloat::one().checked_div(&ComplexFloat::new(1e-12, 0.0)),
            Err(CoeffError::DivisionByZero)
        );
    }

    #[test]
    fn sum_of_thirds() {
        let s = GaussianRational::from_ratio(1, 3) + GaussianRational::from_ratio(1, 6);
        assert_eq!(s, GaussianRational::from_ratio(1, 2));
        assert_eq!(*s.re.denom(), BigInt::from(2));
    }

    #[test]
    fn division_by_complex() {
        let a = g(1, 1, 2, 1);
        let b = g(3, 1, -1, 1);
        let q = a.checked_div(&b).unwrap();
        assert_eq!(q * b, a);
    }

    #[test]
    fn classify_exact() {
        let cfg = ClassifyConfig::default();
        let c = |v: GaussianRational| classify_index(&IndexValue::Exact(v), &cfg);
        assert_eq!(c(GaussianRational::from_integer(-1)), IndexClass::NotInQGe0);
        assert_eq!(c(GaussianRational::from_integer(1)), IndexClass::InQGe0);
        assert_eq!(c(GaussianRational::zero()), IndexClass::InQGe0);
        assert_eq!(c(g(1, 1, 1, 1)), IndexClass::NotInQGe0);
        assert_eq!(
            classify_ratio(&IndexValue::Exact(GaussianRational::zero()), &cfg),
            RatioClass::NotInQGt0
        );
    }

    #[test]
    fn classify_float_reconstructs_third() {
        let cfg = ClassifyConfig::default();
        let v = IndexValue::Float(ComplexFloat::new(0.333333333, 0.0));
        // 0.333333333 is within 1e-9 of 1/3 only loosely; the reconstruction
        // finds 1/3 because |0.333333333 - 1/3| = 3.3e-10.
        assert_eq!(classify_index(&v, &cfg), IndexClass::InQGe0);
        assert_eq!(reconstruct_rational(0.333333333, 1_000_000, 1e-9), Some((1, 3)));
    }

    #[test]
    fn classify_float_irrational() {
        let cfg = ClassifyConfig::default();
        // with the default bounds every real is within 1e-9 of some n/d,
        // d <= 10^6; a tighter configuration exposes sqrt 2
        let strict = ClassifyConfig { tol: 1e-13, max_denominator: 1000 };
        let sqrt2 = IndexValue::Float(ComplexFloat::new(std::f64::consts::SQRT_2, 0.0));
        assert_eq!(classify_index(&sqrt2, &strict), IndexClass::Indeterminate);
        let neg = IndexValue::Float(ComplexFloat::new(-std::f64::consts::SQRT_2, 0.0));
        assert_eq!(classify_index(&neg, &cfg), IndexClass::NotInQGe0);
        let cplx = IndexValue::Float(ComplexFloat::new(0.5, 0.5));
        assert_eq!(classify_index(&cplx, &cfg), IndexClass::NotInQGe0);
    }

    #[test]
    fn float_tolerance_default() {
        assert_eq!(float_tolerance(), 1e-9);
    }

    #[test]
    fn display_forms() {
        assert_eq!(g(3, 2, 0, 1).to_string(), "3/2");
        assert_eq!(g(0, 1, -1, 1).to_string(), "-i");
        assert_eq!(g(1, 2, 3, 4).to_string(), "(1/2+3/4*i)");
        assert_eq!(g(-1, 2, -3, 4).to_string(), "(-1/2-3/4*i)");
        assert_eq!(serde_json::to_string(&g(1, 2, -3, 4)).unwrap(), r#"["1","2","-3","4"]"#);
        assert_eq!(serde_json::to_string(&ComplexFloat::new(0.5, -1.0)).unwrap(), "[0.5,-1.0]");
    }
}
