//! Camacho–Sad indices along the exceptional divisor and the residual index
//! of a diffeomorphism through its infinitesimal generator.
//!
//! For a saturated field `X' = x·c(x, v) ∂x + b(x, v) ∂v` with `x = 0`
//! invariant, the index at `v0` is `Res_{v=v0} c(0, v)/b(0, v)`.

use serde_json::{json, Value};
use thiserror::Error;

use crate::blowup::{blowup_vf, BlowupError, DivisorPoint};
use crate::coeffs::{classify_index, ClassifyConfig, Coefficient, IndexClass, IndexValue};
use crate::germs::{log_diffeo, saturate, DiffeoGerm, GermError, VectorFieldGerm};
use crate::jets::{JetError, Var};
use crate::poly::UniPoly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IndexError {
    #[error("the divisor x = 0 is not invariant")]
    NotInvariant,
    #[error("the field restricted to the divisor vanishes at this precision")]
    ZeroDenominator,
    #[error("truncation {trunc} is too small for a pole of order {order}")]
    InsufficientPrecision { trunc: u32, order: usize },
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// `Res_{v=v0} num/den`, with `mult` the order of the zero of `den` at
/// `v0` when it is already known.
pub fn residue<C: Coefficient>(num: &UniPoly<C>, den: &UniPoly<C>, v0: &C, mult: Option<u32>) -> Result<C, IndexError> {
    if den.is_zero() {
        return Err(IndexError::ZeroDenominator);
    }
    let n = num.recenter(v0);
    let d = den.recenter(v0);
    let m = match mult {
        Some(m) => m as usize,
        None => d.low_order().ok_or(IndexError::ZeroDenominator)?,
    };
    if m == 0 {
        return Ok(C::zero());
    }
    // num / (w^m · unit): the residue is the w^{m-1} coefficient of num/unit
    let unit = UniPoly::new(d.coeffs().iter().skip(m).cloned().collect());
    let q = n.series_quotient(&unit, m - 1).ok_or(IndexError::ZeroDenominator)?;
    Ok(q[m - 1].clone())
}

/// Camacho–Sad index of `X` along `x = 0` at the divisor coordinate `v0`.
///
/// The field is saturated first, so the index is that of the foliation.
pub fn cs_index<C: Coefficient>(x: &VectorFieldGerm<C>, v0: &C) -> Result<IndexValue, IndexError> {
    let sat = saturate(x)?.xprime;
    if !sat.a.restrict_zero(Var::X).is_zero() {
        return Err(IndexError::NotInvariant);
    }
    let c0 = sat.a.divide_by_monomial(Var::X, 1)?.restrict_zero(Var::X);
    let b0 = sat.b.restrict_zero(Var::X);
    if b0.is_zero() {
        return Err(IndexError::ZeroDenominator);
    }
    let m = b0.recenter(v0).low_order().ok_or(IndexError::ZeroDenominator)?;
    if m > 0 && 2 * m - 1 > sat.b.trunc() as usize {
        return Err(IndexError::InsufficientPrecision { trunc: sat.b.trunc(), order: m });
    }
    Ok(residue(&c0, &b0, v0, Some(m as u32))?.to_index_value())
}

/// Residual index of `F` at a characteristic direction, read off the first
/// blow-up of its infinitesimal generator.
pub fn residual_index<C: Coefficient>(f: &DiffeoGerm<C>, at: &DivisorPoint<C>) -> Result<IndexValue, IndexError> {
    let x = log_diffeo(f)?;
    let xt = blowup_vf(&x, at)?;
    cs_index(&xt, &C::zero())
}

#[derive(Clone, Debug, PartialEq)]
pub enum IndexEntry<C: Coefficient> {
    Point { point: DivisorPoint<C>, multiplicity: u32, index: IndexValue, class: IndexClass },
    /// Singular points at the roots of `factor`, which are not in the field.
    NonRational { factor: UniPoly<C> },
}

impl<C: Coefficient> IndexEntry<C> {
    pub fn to_json_value(&self) -> Value {
        match self {
            IndexEntry::Point { point, multiplicity, index, class } => json!({
                "dir": point.direction_json(),
                "chart": point.chart,
                "center": point.coord.to_json(),
                "mult": multiplicity,
                "index": index.to_json(),
                "class": class,
            }),
            IndexEntry::NonRational { factor } => json!({
                "dir": null,
                "factor": factor.to_text("v"),
                "index": null,
                "class": "NonRationalDirection",
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexReport<C: Coefficient> {
    pub dicritical: bool,
    pub entries: Vec<IndexEntry<C>>,
    /// Present when every singular point was found in the field.
    pub sum: Option<IndexValue>,
}

impl<C: Coefficient> IndexReport<C> {
    pub fn points(&self) -> impl Iterator<Item = (&DivisorPoint<C>, &IndexValue, IndexClass)> {
        self.entries.iter().filter_map(|e| match e {
            IndexEntry::Point { point, index, class, .. } => Some((point, index, *class)),
            IndexEntry::NonRational { .. } => None,
        })
    }

    pub fn has_non_rational(&self) -> bool {
        self.entries.iter().any(|e| matches!(e, IndexEntry::NonRational { .. }))
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "format": 1,
            "dicritical": self.dicritical,
            "points": self.entries.iter().map(IndexEntry::to_json_value).collect::<Vec<_>>(),
            "sum": self.sum.as_ref().map(IndexValue::to_json),
        })
    }
}

/// Indices of the saturated strict transform of `X` at the singular points
/// of the exceptional divisor of one blow-up at the origin.
///
/// Along the divisor the saturated transform restricts to
/// `c = a_k(1, v)` and `b = b_k(1, v) - v·a_k(1, v)` in `U1` (and the
/// symmetric pair in `U2`), so the indices only involve the leading
/// homogeneous parts of the saturated field.
pub fn divisor_index_report<C: Coefficient>(x: &VectorFieldGerm<C>, cfg: &ClassifyConfig) -> Result<IndexReport<C>, IndexError> {
    let sat = saturate(x)?.xprime;
    let (k, ak, bk) = match sat.leading_parts() {
        Some(parts) if parts.0 >= 1 => parts,
        // nonsingular: the divisor carries no singular point
        _ => return Ok(IndexReport { dicritical: false, entries: Vec::new(), sum: None }),
    };
    let c1 = ak.dehomogenize(Var::X);
    let r = bk.dehomogenize(Var::X).sub(&c1.mul(&UniPoly::new(vec![C::zero(), C::one()])));
    if r.is_zero() {
        return Ok(IndexReport { dicritical: true, entries: Vec::new(), sum: None });
    }
    let mut entries = Vec::new();
    let roots = C::roots(&r);
    let mut points: Vec<(DivisorPoint<C>, u32, C)> = Vec::new();
    for (v0, m) in &roots.roots {
        points.push((DivisorPoint::u1(v0.clone()), *m, residue(&c1, &r, v0, Some(*m))?));
    }
    points.sort_by(|a, b| a.0.lex_cmp(&b.0));
    let deg = r.degree().unwrap_or(0) as u32;
    if deg < k + 1 {
        let c2 = bk.dehomogenize(Var::Y);
        let r2 = ak.dehomogenize(Var::Y).sub(&c2.mul(&UniPoly::new(vec![C::zero(), C::one()])));
        let m = k + 1 - deg;
        points.push((DivisorPoint::u2(C::zero()), m, residue(&c2, &r2, &C::zero(), Some(m))?));
    }
    let mut sum = Some(C::zero());
    for (point, multiplicity, idx) in points {
        sum = sum.map(|s| s + idx.clone());
        let index = idx.to_index_value();
        let class = classify_index(&index, cfg);
        entries.push(IndexEntry::Point { point, multiplicity, index, class });
    }
    if let Some(factor) = roots.unresolved {
        entries.push(IndexEntry::NonRational { factor });
        sum = None;
    }
    Ok(IndexReport { dicritical: false, entries, sum: sum.map(|s| s.to_index_value()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{ComplexFloat, GaussianRational};
    use crate::germs::exp_vf;
    use crate::jets::Jet2;

    type G = GaussianRational;

    fn j(terms: &[((u32, u32), i64)], t: u32) -> Jet2<G> {
        Jet2::from_terms(terms.iter().map(|&(m, c)| (m, G::from_integer(c))), t)
    }

    fn exact(n: i64, d: i64) -> IndexValue {
        IndexValue::Exact(G::from_ratio(n, d))
    }

    #[test]
    fn residues_of_partial_fractions() {
        // 1/(v(v-1)) = -1/v + 1/(v-1)
        let den = UniPoly::new(vec![G::zero(), G::from_integer(-1), G::one()]);
        let one = UniPoly::constant(G::one());
        assert_eq!(residue(&one, &den, &G::zero(), None).unwrap(), G::from_integer(-1));
        assert_eq!(residue(&one, &den, &G::one(), None).unwrap(), G::one());
        assert_eq!(residue(&one, &den, &G::from_integer(2), None).unwrap(), G::zero());
        // (1 + v)/v^2 has residue 1
        let v2 = UniPoly::new(vec![G::zero(), G::zero(), G::one()]);
        let num = UniPoly::new(vec![G::one(), G::one()]);
        assert_eq!(residue(&num, &v2, &G::zero(), None).unwrap(), G::one());
    }

    #[test]
    fn cs_of_saturated_field() {
        let x = VectorFieldGerm::new(j(&[((1, 0), 1)], 6), j(&[((0, 2), 1), ((0, 1), -1)], 6));
        assert_eq!(cs_index(&x, &G::zero()).unwrap(), exact(-1, 1));
        assert_eq!(cs_index(&x, &G::one()).unwrap(), exact(1, 1));
        assert_eq!(cs_index(&x, &G::from_integer(3)).unwrap(), exact(0, 1));
    }

    #[test]
    fn cs_of_linear_model() {
        // λ x ∂x + μ v ∂v has index λ/μ
        let x = VectorFieldGerm::new(j(&[((1, 0), 2)], 6), j(&[((0, 1), 5)], 6));
        assert_eq!(cs_index(&x, &G::zero()).unwrap(), exact(2, 5));
        // invariance under a monomial factor
        let xx = VectorFieldGerm::new(j(&[((3, 0), 2)], 8), j(&[((2, 1), 5)], 8));
        assert_eq!(cs_index(&xx, &G::zero()).unwrap(), exact(2, 5));
    }

    #[test]
    fn cs_errors() {
        let x = VectorFieldGerm::new(j(&[((0, 1), 1)], 6), j(&[((0, 1), 1)], 6));
        assert_eq!(cs_index(&x, &G::zero()), Err(IndexError::NotInvariant));
        let x = VectorFieldGerm::new(j(&[((1, 0), 1)], 6), j(&[((1, 1), 1)], 6));
        // saturation removes x, leaving ∂x + v ∂v: x = 0 is not invariant
        assert_eq!(cs_index(&x, &G::zero()), Err(IndexError::NotInvariant));
        let one = UniPoly::constant(G::one());
        assert_eq!(residue(&one, &UniPoly::zero(), &G::zero(), None), Err(IndexError::ZeroDenominator));
    }

    #[test]
    fn residual_index_of_exp() {
        let x = VectorFieldGerm::new(j(&[((2, 0), 1)], 8), j(&[((0, 2), 1)], 8));
        let f = exp_vf(&x).unwrap();
        assert_eq!(residual_index(&f, &DivisorPoint::u1(G::zero())).unwrap(), exact(-1, 1));
        let g = DiffeoGerm::new(j(&[((0, 2), 1)], 8), j(&[((2, 0), 1)], 8));
        assert_eq!(residual_index(&g, &DivisorPoint::u1(G::one())).unwrap(), exact(-1, 3));
    }

    #[test]
    fn residual_index_float() {
        let g: DiffeoGerm<ComplexFloat> = DiffeoGerm::new(j(&[((0, 2), 1)], 8), j(&[((2, 0), 1)], 8)).convert();
        let omega = ComplexFloat::new(-0.5, 3f64.sqrt() / 2.0);
        let idx = residual_index(&g, &DivisorPoint::u1(omega)).unwrap().to_complex();
        assert!((idx - num_complex::Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn report_for_diagonal_field() {
        let x = VectorFieldGerm::new(j(&[((2, 0), 1)], 8), j(&[((0, 2), 1)], 8));
        let r = divisor_index_report(&x, &ClassifyConfig::default()).unwrap();
        assert!(!r.dicritical);
        let pts: Vec<_> = r.points().map(|(p, i, c)| (p.direction(), i.clone(), c)).collect();
        assert_eq!(
            pts,
            vec![
                ((G::one(), G::zero()), exact(-1, 1), IndexClass::NotInQGe0),
                ((G::one(), G::one()), exact(1, 1), IndexClass::InQGe0),
                ((G::zero(), G::one()), exact(-1, 1), IndexClass::NotInQGe0),
            ]
        );
        assert_eq!(r.sum, Some(exact(-1, 1)));
        // the same values through blow-up and residues
        for (p, i, _) in r.points() {
            assert_eq!(&cs_index(&blowup_vf(&x, p).unwrap(), &G::zero()).unwrap(), i);
        }
    }

    #[test]
    fn report_with_irrational_points() {
        let f = DiffeoGerm::new(j(&[((0, 2), 1)], 8), j(&[((2, 0), 1)], 8));
        let x = log_diffeo(&f).unwrap();
        let r = divisor_index_report(&x, &ClassifyConfig::default()).unwrap();
        assert_eq!(r.points().count(), 1);
        assert!(r.has_non_rational());
        assert_eq!(r.sum, None);
        let xf: VectorFieldGerm<ComplexFloat> = x.convert();
        let rf = divisor_index_report(&xf, &ClassifyConfig::default()).unwrap();
        assert_eq!(rf.points().count(), 3);
        for (_, i, c) in rf.points() {
            assert!((i.to_complex().re + 1.0 / 3.0).abs() < 1e-9);
            assert_eq!(c, IndexClass::NotInQGe0);
        }
        assert!((rf.sum.unwrap().to_complex().re + 1.0).abs() < 1e-6);
    }

    #[test]
    fn dicritical_report() {
        let x = VectorFieldGerm::new(j(&[((2, 0), 1)], 8), j(&[((1, 1), 1), ((0, 3), 1)], 8));
        let r = divisor_index_report(&x, &ClassifyConfig::default()).unwrap();
        assert!(r.dicritical);
        assert!(r.entries.is_empty());
    }
}
