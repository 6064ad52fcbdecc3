//! Point blow-up of diffeomorphism and vector-field germs.
//!
//! Every blow-up is carried out at the origin of the first chart after a
//! linear change of coordinates that moves the chosen divisor point there.
//! The resulting germs are written in divisor-first coordinates `(e, t)`:
//! the exceptional divisor is `e = 0` and the chosen point is the origin.
//!
//! * `U1` at `v0`: `(e, t) ↦ (e, e·(t + v0))`, i.e. `t = y/x - v0`.
//! * `U2` at `u0`: `(e, t) ↦ ((t + u0)·e, e)`, i.e. `t = x/y - u0`.

use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coeffs::Coefficient;
use crate::germs::{characteristic_directions, order_of, CharDirection, DiffeoGerm, GermError, VectorFieldGerm};
use crate::jets::{Chart, Jet2, JetError, Valuation, Var};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlowupError {
    #[error("the point is not a characteristic direction")]
    NotCharacteristic,
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Germ(#[from] GermError),
}

/// A point of the exceptional divisor: `v0` in `U1`, `u0` in `U2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorPoint<C: Coefficient> {
    pub chart: Chart,
    pub coord: C,
}

impl<C: Coefficient> DivisorPoint<C> {
    pub fn u1(v0: C) -> Self {
        DivisorPoint { chart: Chart::U1, coord: v0 }
    }

    pub fn u2(u0: C) -> Self {
        DivisorPoint { chart: Chart::U2, coord: u0 }
    }

    /// `[1 : v0]` lives in `U1`; `[0 : 1]` is the `U2` origin.
    pub fn from_direction(d: &CharDirection<C>) -> Self {
        if d.is_vertical() {
            DivisorPoint::u2(C::zero())
        } else {
            DivisorPoint::u1(d.direction.1.clone())
        }
    }

    /// Tangent direction `[α : β]` of the point.
    pub fn direction(&self) -> (C, C) {
        match self.chart {
            Chart::U1 => (C::one(), self.coord.clone()),
            Chart::U2 => (self.coord.clone(), C::one()),
        }
    }

    /// Same point in the canonical chart (`U1` unless it is `[0 : 1]`).
    pub fn canonical(&self) -> Self {
        match self.chart {
            Chart::U2 if !self.coord.is_zero() => DivisorPoint::u1(self.coord.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// Orders `U1` before `U2`, then by coordinate.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        let rank = |c: Chart| match c {
            Chart::U1 => 0,
            Chart::U2 => 1,
        };
        rank(self.chart).cmp(&rank(other.chart)).then_with(|| self.coord.lex_cmp(&other.coord))
    }

    /// `[α, β]` as JSON coefficients.
    pub fn direction_json(&self) -> Value {
        let (a, b) = self.direction();
        json!([a.to_json(), b.to_json()])
    }

    pub fn to_json_value(&self) -> Value {
        json!({"chart": self.chart, "center": self.coord.to_json()})
    }

    /// The linear change of coordinates `M` that sends the point to the
    /// `U1` origin, and its inverse.
    fn frame(&self) -> ([[C; 2]; 2], [[C; 2]; 2]) {
        let c = self.coord.clone();
        let (o, z) = (C::one(), C::zero());
        match self.chart {
            Chart::U1 => ([[o.clone(), z.clone()], [-c.clone(), o.clone()]], [[o.clone(), z], [c, o]]),
            Chart::U2 => ([[z.clone(), o.clone()], [o.clone(), -c.clone()]], [[c, o.clone()], [o, z]]),
        }
    }
}

impl<C: Coefficient> std::fmt::Display for DivisorPoint<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b) = self.direction();
        write!(f, "[{a}:{b}]")
    }
}

/// Components `(m00 p + m01 q, m10 p + m11 q) ∘ M⁻¹`.
fn conjugate<C: Coefficient>(p: &Jet2<C>, q: &Jet2<C>, point: &DivisorPoint<C>) -> (Jet2<C>, Jet2<C>) {
    let (m, minv) = point.frame();
    let p1 = p.scale(&m[0][0]).add(&q.scale(&m[0][1])).linear_substitute(&minv);
    let q1 = p.scale(&m[1][0]).add(&q.scale(&m[1][1])).linear_substitute(&minv);
    (p1, q1)
}

/// Lift of `F` to the blow-up, localized at `point`.
///
/// `F̃1 = x + P`, `F̃2 = (v + Q/x) / (1 + P/x)` with `P = p(x, xv)` and
/// `Q = q(x, xv)` in the conjugated frame. One order of precision is spent
/// on the division by `x`.
pub fn blowup_diffeo<C: Coefficient>(f: &DiffeoGerm<C>, point: &DivisorPoint<C>) -> Result<DiffeoGerm<C>, BlowupError> {
    let k = match order_of(f) {
        Valuation::Finite(k) if k >= 2 => k,
        ord => return Err(GermError::NotTangentToIdentity(ord).into()),
    };
    let (p1, q1) = conjugate(&f.p, &f.q, point);
    // [1:0] is characteristic in the new frame iff x^k does not occur in q_k
    if !q1.coeff(k, 0).is_zero() {
        return Err(BlowupError::NotCharacteristic);
    }
    let n = f.trunc();
    let big_p = p1.substitute_chart(Chart::U1);
    let big_q = q1.substitute_chart(Chart::U1);
    let p_over_x = big_p.divide_by_monomial(Var::X, 1)?;
    let q_over_x = big_q.divide_by_monomial(Var::X, 1)?;
    let num = Jet2::var(Var::Y, n - 1).add(&q_over_x);
    let den = Jet2::one(n - 1).add(&p_over_x);
    let f2 = num.divide_by_unit(&den)?;
    let f1 = Jet2::var(Var::X, n).add(&big_p);
    Ok(DiffeoGerm::from_components(&f1, &f2))
}

/// Strict transform `X̃ = a(x, xv) ∂x + (b(x, xv) - v·a(x, xv))/x ∂v` of `X`
/// localized at `point`.
pub fn blowup_vf<C: Coefficient>(x: &VectorFieldGerm<C>, point: &DivisorPoint<C>) -> Result<VectorFieldGerm<C>, BlowupError> {
    let (a1, b1) = conjugate(&x.a, &x.b, point);
    let at = a1.substitute_chart(Chart::U1);
    let bt = b1.substitute_chart(Chart::U1);
    let v_at = at.shift(0, 1).truncate(at.trunc());
    let bnew = bt.sub(&v_at).divide_by_monomial(Var::X, 1)?;
    Ok(VectorFieldGerm::new(at, bnew))
}

/// One blow-up step: the chart used and the point's coordinate in it.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartStep<C: Coefficient> {
    pub chart: Chart,
    pub center: C,
}

/// Composite of blow-ups, outermost first.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartMap<C: Coefficient> {
    pub steps: Vec<ChartStep<C>>,
}

impl<C: Coefficient> Default for ChartMap<C> {
    fn default() -> Self {
        ChartMap { steps: Vec::new() }
    }
}

impl<C: Coefficient> ChartMap<C> {
    pub fn push(&mut self, point: &DivisorPoint<C>) {
        self.steps.push(ChartStep { chart: point.chart, center: point.coord.clone() });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(self.steps.iter().map(|s| json!({"chart": s.chart, "center": s.center.to_json()})).collect())
    }

    /// Numeric copy used for pushing points down.
    pub fn to_float(&self) -> Vec<(Chart, Complex64)> {
        self.steps.iter().map(|s| (s.chart, s.center.to_complex())).collect()
    }
}

/// Pushes a point of the last chart down to `C^2`, innermost step first.
pub fn blow_down(steps: &[(Chart, Complex64)], pt: (Complex64, Complex64)) -> (Complex64, Complex64) {
    steps.iter().rev().fold(pt, |(e, t), (chart, c)| match chart {
        Chart::U1 => (e, e * (t + c)),
        Chart::U2 => ((t + c) * e, e),
    })
}

/// Characteristic directions of `F` that are representable in the field,
/// as divisor points.
pub fn characteristic_points<C: Coefficient>(f: &DiffeoGerm<C>) -> Result<Vec<DivisorPoint<C>>, GermError> {
    let dirs = characteristic_directions(f)?;
    Ok(dirs.directions.iter().map(DivisorPoint::from_direction).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{ComplexFloat, GaussianRational};
    use crate::germs::{exp_vf, log_diffeo};

    type G = GaussianRational;

    fn j(terms: &[((u32, u32), i64)], t: u32) -> Jet2<G> {
        Jet2::from_terms(terms.iter().map(|&(m, c)| (m, G::from_integer(c))), t)
    }

    #[test]
    fn vf_at_origin() {
        let x = VectorFieldGerm::new(j(&[((2, 0), 1)], 6), j(&[((0, 2), 1)], 6));
        let xt = blowup_vf(&x, &DivisorPoint::u1(G::zero())).unwrap();
        assert_eq!(xt.a, j(&[((2, 0), 1)], 5));
        assert_eq!(xt.b, j(&[((1, 2), 1), ((1, 1), -1)], 5));
        assert_eq!(xt.trunc(), 5);
    }

    #[test]
    fn vf_at_one() {
        let x = VectorFieldGerm::new(j(&[((2, 0), 1)], 6), j(&[((0, 2), 1)], 6));
        let xt = blowup_vf(&x, &DivisorPoint::u1(G::one())).unwrap();
        // w = v - 1: ã = x^2, b̃ = x((1+w)^2 - (1+w)) = x(w + w^2)
        assert_eq!(xt.a, j(&[((2, 0), 1)], 5));
        assert_eq!(xt.b, j(&[((1, 1), 1), ((1, 2), 1)], 5));
        assert!(xt.order() >= Valuation::Finite(2));
    }

    #[test]
    fn vf_at_vertical() {
        let x = VectorFieldGerm::new(j(&[((2, 0), 1)], 6), j(&[((0, 2), 1)], 6));
        let xt = blowup_vf(&x, &DivisorPoint::u2(G::zero())).unwrap();
        // symmetric to the U1 origin
        assert_eq!(xt.a, j(&[((2, 0), 1)], 5));
        assert_eq!(xt.b, j(&[((1, 2), 1), ((1, 1), -1)], 5));
    }

    #[test]
    fn vf_of_generator() {
        let f = DiffeoGerm::new(j(&[((0, 2), 1)], 8), j(&[((2, 0), 1)], 8));
        let x = log_diffeo(&f).unwrap();
        let xt = blowup_vf(&x, &DivisorPoint::u1(G::one())).unwrap();
        // b̃ = x(1 - (1+w)^3) + O(x^2): the x·w coefficient is -3
        assert_eq!(xt.b.coeff(1, 1), G::from_integer(-3));
        assert_eq!(xt.b.coeff(1, 0), G::zero());
        assert_eq!(xt.a.coeff(2, 0), G::one());
    }

    #[test]
    fn diffeo_blowup() {
        let f = DiffeoGerm::new(j(&[((0, 2), 1)], 8), j(&[((2, 0), 1)], 8));
        let p = DivisorPoint::u1(G::one());
        let ft = blowup_diffeo(&f, &p).unwrap();
        assert_eq!(ft.trunc(), 7);
        assert!(order_of(&ft) >= order_of(&f));
        // divisor fixed pointwise
        assert!(ft.p.restrict_zero(Var::X).is_zero());
        assert!(ft.q.restrict_zero(Var::X).is_zero());
        let via_vf = exp_vf(&blowup_vf(&log_diffeo(&f).unwrap(), &p).unwrap()).unwrap();
        assert_eq!(ft, via_vf);
    }

    #[test]
    fn not_characteristic() {
        let f = DiffeoGerm::new(j(&[((0, 2), 1)], 8), j(&[((2, 0), 1)], 8));
        assert_eq!(blowup_diffeo(&f, &DivisorPoint::u1(G::zero())), Err(BlowupError::NotCharacteristic));
        assert_eq!(blowup_diffeo(&f, &DivisorPoint::u2(G::zero())), Err(BlowupError::NotCharacteristic));
    }

    #[test]
    fn float_irrational_direction() {
        let f: DiffeoGerm<ComplexFloat> = DiffeoGerm::new(j(&[((0, 2), 1)], 8), j(&[((2, 0), 2)], 8)).convert();
        for p in characteristic_points(&f).unwrap() {
            let ft = blowup_diffeo(&f, &p).unwrap();
            assert!(order_of(&ft) >= Valuation::Finite(2));
            let via_vf = exp_vf(&blowup_vf(&log_diffeo(&f).unwrap(), &p).unwrap()).unwrap();
            for (m, c) in ft.q.terms() {
                assert!((c.0 - via_vf.q.coeff(m.x, m.y).0).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn blow_down_steps() {
        let c = |re: f64| Complex64::new(re, 0.0);
        assert_eq!(blow_down(&[(Chart::U1, c(1.0))], (c(0.1), c(0.0))), (c(0.1), c(0.1)));
        assert_eq!(blow_down(&[], (c(0.3), c(0.4))), (c(0.3), c(0.4)));
        let (x, y) = blow_down(&[(Chart::U2, c(0.0))], (c(0.1), c(0.2)));
        assert!((x - c(0.02)).norm() < 1e-15 && (y - c(0.1)).norm() < 1e-15);
        // two steps: inner (e, t) -> outer chart -> plane
        let (x, y) = blow_down(&[(Chart::U1, c(1.0)), (Chart::U1, c(0.0))], (c(0.5), c(0.0)));
        assert_eq!((x, y), (c(0.5), c(0.5)));
    }

    #[test]
    fn divisor_points() {
        let p = DivisorPoint::u2(G::from_integer(2));
        assert_eq!(p.canonical(), DivisorPoint::u1(G::from_ratio(1, 2)));
        assert_eq!(p.direction(), (G::from_integer(2), G::one()));
        assert_eq!(DivisorPoint::u2(G::zero()).to_string(), "[0:1]");
        assert!(DivisorPoint::u1(G::from_integer(5)).lex_cmp(&DivisorPoint::u2(G::zero())).is_lt());
    }
}
