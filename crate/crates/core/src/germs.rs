//! Vector-field germs, tangent-to-the-identity diffeomorphism germs, the
//! exponential operator and the infinitesimal generator.

use serde_json::{json, Value};
use thiserror::Error;

use crate::coeffs::{Coefficient, GaussianRational};
use crate::jets::{Jet2, JetError, Valuation, Var};
use crate::poly::{BiPoly, UniPoly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GermError {
    #[error("vector field has order {0}, the exponential needs order >= 2")]
    OrderTooLow(Valuation),
    #[error("map is not tangent to the identity (order {0})")]
    NotTangentToIdentity(Valuation),
    #[error("isolatedness is only decided for honest polynomial inputs")]
    NotPolynomialInput,
    #[error("cannot saturate: {0}")]
    SaturationUnavailable(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// `X = a ∂/∂x + b ∂/∂y`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldGerm<C: Coefficient> {
    pub a: Jet2<C>,
    pub b: Jet2<C>,
    /// Components are honest polynomials, not truncations of series.
    pub polynomial: bool,
}

/// `F(x, y) = (x + p, y + q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffeoGerm<C: Coefficient> {
    pub p: Jet2<C>,
    pub q: Jet2<C>,
    pub polynomial: bool,
}

impl<C: Coefficient> VectorFieldGerm<C> {
    /// Both components are brought to the common truncation.
    pub fn new(a: Jet2<C>, b: Jet2<C>) -> Self {
        let t = a.trunc().min(b.trunc());
        VectorFieldGerm { a: a.truncate(t), b: b.truncate(t), polynomial: false }
    }

    pub fn polynomial(a: Jet2<C>, b: Jet2<C>) -> Self {
        VectorFieldGerm { polynomial: true, ..VectorFieldGerm::new(a, b) }
    }

    pub fn zero(trunc: u32) -> Self {
        VectorFieldGerm::new(Jet2::zero(trunc), Jet2::zero(trunc))
    }

    pub fn trunc(&self) -> u32 {
        self.a.trunc()
    }

    /// `min(ν(a), ν(b))`.
    pub fn order(&self) -> Valuation {
        self.a.valuation().min(self.b.valuation())
    }

    pub fn truncate(&self, t: u32) -> Self {
        VectorFieldGerm { a: self.a.truncate(t), b: self.b.truncate(t), polynomial: self.polynomial }
    }

    pub fn scale(&self, c: &C) -> Self {
        VectorFieldGerm { a: self.a.scale(c), b: self.b.scale(c), polynomial: self.polynomial }
    }

    pub fn convert<D: Coefficient>(&self) -> VectorFieldGerm<D> {
        VectorFieldGerm { a: self.a.convert(), b: self.b.convert(), polynomial: self.polynomial }
    }

    /// `X(g) = a ∂g/∂x + b ∂g/∂y`.
    ///
    /// The result carries the largest truncation the inputs determine,
    /// never more than `min(trunc X, trunc g)`.
    pub fn apply(&self, g: &Jet2<C>) -> Jet2<C> {
        let cap = self.trunc().min(g.trunc());
        let gx = g.partial_derivative(Var::X);
        let gy = g.partial_derivative(Var::Y);
        let t = self.a.exact_product_trunc(&gx, cap).min(self.b.exact_product_trunc(&gy, cap));
        self.a.mul_trunc(&gx, t).add(&self.b.mul_trunc(&gy, t))
    }

    /// Restriction of the leading homogeneous parts: `(a_k, b_k)` with
    /// `k = ν(X)`.
    pub fn leading_parts(&self) -> Option<(u32, Jet2<C>, Jet2<C>)> {
        let k = self.order().finite()?;
        Some((k, self.a.homogeneous_part(k).ok()?, self.b.homogeneous_part(k).ok()?))
    }

    /// Tangent-cone polynomial `b_k(1, v) - v·a_k(1, v)`.
    pub fn tangent_cone_polynomial(&self) -> Option<UniPoly<C>> {
        let (_, ak, bk) = self.leading_parts()?;
        Some(tangent_polynomial(&ak, &bk))
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "format": 1,
            "trunc": self.trunc(),
            "backend": C::BACKEND,
            "vf": {"dx": self.a.to_text(("x", "y")), "dy": self.b.to_text(("x", "y"))},
        })
    }
}

impl<C: Coefficient> DiffeoGerm<C> {
    pub fn new(p: Jet2<C>, q: Jet2<C>) -> Self {
        let t = p.trunc().min(q.trunc());
        DiffeoGerm { p: p.truncate(t), q: q.truncate(t), polynomial: false }
    }

    pub fn polynomial(p: Jet2<C>, q: Jet2<C>) -> Self {
        DiffeoGerm { polynomial: true, ..DiffeoGerm::new(p, q) }
    }

    /// Builds `F` from its two components `F1 = x + p`, `F2 = y + q`.
    pub fn from_components(f1: &Jet2<C>, f2: &Jet2<C>) -> Self {
        let t = f1.trunc().min(f2.trunc());
        DiffeoGerm::new(f1.sub(&Jet2::var(Var::X, t)), f2.sub(&Jet2::var(Var::Y, t)))
    }

    pub fn identity(trunc: u32) -> Self {
        DiffeoGerm::new(Jet2::zero(trunc), Jet2::zero(trunc))
    }

    pub fn trunc(&self) -> u32 {
        self.p.trunc()
    }

    pub fn first(&self) -> Jet2<C> {
        Jet2::var(Var::X, self.trunc()).add(&self.p)
    }

    pub fn second(&self) -> Jet2<C> {
        Jet2::var(Var::Y, self.trunc()).add(&self.q)
    }

    pub fn truncate(&self, t: u32) -> Self {
        DiffeoGerm { p: self.p.truncate(t), q: self.q.truncate(t), polynomial: self.polynomial }
    }

    pub fn convert<D: Coefficient>(&self) -> DiffeoGerm<D> {
        DiffeoGerm { p: self.p.convert(), q: self.q.convert(), polynomial: self.polynomial }
    }

    /// Tangency order `min(ν(p), ν(q))`.
    pub fn order(&self) -> Valuation {
        order_of(self)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "format": 1,
            "trunc": self.trunc(),
            "backend": C::BACKEND,
            "map": {"x": self.first().to_text(("x", "y")), "y": self.second().to_text(("x", "y"))},
        })
    }
}

pub(crate) fn tangent_polynomial<C: Coefficient>(ak: &Jet2<C>, bk: &Jet2<C>) -> UniPoly<C> {
    let a1 = ak.dehomogenize(Var::X);
    let b1 = bk.dehomogenize(Var::X);
    b1.sub(&a1.mul(&UniPoly::new(vec![C::zero(), C::one()])))
}

/// Homogeneous components: `h[d][y]` is the coefficient of `x^(d-y) y^y`.
type Graded<C> = Vec<Vec<C>>;

fn graded<C: Coefficient>(f: &Jet2<C>, n: u32) -> Graded<C> {
    let mut h: Graded<C> = (0..=n as usize).map(|d| vec![C::zero(); d + 1]).collect();
    for (m, c) in f.terms() {
        if m.degree() <= n {
            h[m.degree() as usize][m.y as usize] = c.clone();
        }
    }
    h
}

fn ungraded<C: Coefficient>(h: &Graded<C>, n: u32) -> Jet2<C> {
    let terms = h.iter().enumerate().flat_map(|(d, row)| {
        row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(y, c)| (((d - y) as u32, y as u32), c.clone()))
    });
    Jet2::from_terms(terms, n)
}

/// Graded series together with the partial derivatives of each
/// homogeneous row.
struct Series<C> {
    rows: Graded<C>,
    dx: Vec<Vec<C>>,
    dy: Vec<Vec<C>>,
}

impl<C: Coefficient> Series<C> {
    fn zero(n: u32) -> Self {
        let rows: Graded<C> = (0..=n as usize).map(|d| vec![C::zero(); d + 1]).collect();
        let der = (0..=n as usize).map(|d| vec![C::zero(); d.max(1)]).collect::<Vec<_>>();
        Series { rows, dx: der.clone(), dy: der }
    }

    fn from_graded(rows: Graded<C>) -> Self {
        let mut s = Series::zero(rows.len() as u32 - 1);
        for (d, row) in rows.into_iter().enumerate() {
            s.set(d, row);
        }
        s
    }

    /// `∂/∂x` of `x^(d-y) y^y` lands at index `y`, `∂/∂y` at `y - 1`.
    fn set(&mut self, d: usize, row: Vec<C>) {
        if d > 0 && row.iter().any(|c| !c.is_zero()) {
            self.dx[d] = (0..d).map(|y| row[y].scale_int((d - y) as i64)).collect();
            self.dy[d] = (0..d).map(|y| row[y + 1].scale_int((y + 1) as i64)).collect();
        }
        self.rows[d] = row;
    }

    fn is_zero(&self) -> bool {
        self.rows.iter().all(|row| row.iter().all(Coefficient::is_zero))
    }
}

/// Degree-`d` part of `X(h)`: `Σ a_e ∂h_s/∂x + b_e ∂h_s/∂y` over `e + s - 1 = d`.
fn lie_degree<C: Coefficient>(a: &Graded<C>, b: &Graded<C>, h: &Series<C>, d: usize) -> Vec<C> {
    let mut out = vec![C::zero(); d + 1];
    for s in 1..=d.min(h.rows.len() - 1) {
        let e = d + 1 - s;
        if e < a.len() {
            C::mul_add_rows(&mut out, &a[e], &h.dx[s]);
            C::mul_add_rows(&mut out, &b[e], &h.dy[s]);
        }
    }
    out
}

/// `exp(tX)(g) = Σ t^j/j! X^j(g)`, finite at the truncation because each
/// application of `X` raises the order.
pub fn exp_apply<C: Coefficient>(x: &VectorFieldGerm<C>, g: &Jet2<C>, t: &C) -> Result<Jet2<C>, GermError> {
    let ord = x.order();
    if ord < Valuation::Finite(2) {
        return Err(GermError::OrderTooLow(ord));
    }
    let n = x.trunc().min(g.trunc());
    if t.is_zero() {
        return Ok(g.truncate(n));
    }
    let (a, b) = (graded(&x.a, n), graded(&x.b, n));
    let mut sum = graded(g, n);
    let mut term = Series::from_graded(sum.clone());
    let mut coef = C::one();
    for j in 1i64.. {
        let mut next = Series::zero(n);
        for d in 0..=n as usize {
            next.set(d, lie_degree(&a, &b, &term, d));
        }
        if next.is_zero() {
            break;
        }
        coef = coef.mul_ref(t).checked_div(&C::from_i64(j)).expect("j > 0");
        for (row, add) in sum.iter_mut().zip(&next.rows) {
            for (s, c) in row.iter_mut().zip(add) {
                if !c.is_zero() {
                    *s += &c.mul_ref(&coef);
                }
            }
        }
        term = next;
    }
    Ok(ungraded(&sum, n))
}

/// `Exp(X) = (exp X(x), exp X(y))`.
pub fn exp_vf<C: Coefficient>(x: &VectorFieldGerm<C>) -> Result<DiffeoGerm<C>, GermError> {
    exp_vf_at(x, &C::one())
}

/// Time-`t` map `(exp tX(x), exp tX(y))`.
pub fn exp_vf_at<C: Coefficient>(x: &VectorFieldGerm<C>, t: &C) -> Result<DiffeoGerm<C>, GermError> {
    let n = x.trunc();
    let fx = exp_apply(x, &Jet2::var(Var::X, n), t)?;
    let fy = exp_apply(x, &Jet2::var(Var::Y, n), t)?;
    Ok(DiffeoGerm::from_components(&fx, &fy))
}

/// Infinitesimal generator: the unique `X` with `Exp(X) = F` up to the
/// truncation, solved one homogeneous degree at a time.
///
/// In degree `d` the component `exp X(x)` equals `a_d` plus terms
/// `X^j(x)/j!`, `j >= 2`, that only involve `a_e, b_e` with `e < d`.
pub fn log_diffeo<C: Coefficient>(f: &DiffeoGerm<C>) -> Result<VectorFieldGerm<C>, GermError> {
    let n = f.trunc();
    let k = match order_of(f) {
        Valuation::Infinite => return Ok(VectorFieldGerm::zero(n)),
        Valuation::Finite(k) if k >= 2 => k as usize,
        ord => return Err(GermError::NotTangentToIdentity(ord)),
    };
    let (p, q) = (graded(&f.p, n), graded(&f.q, n));
    // first[0] = X(x) = a, first[1] = X(y) = b; towers[i][j - 2] = X^j of x or y
    let mut first = [Series::zero(n), Series::zero(n)];
    let mut towers: [Vec<Series<C>>; 2] = [Vec::new(), Vec::new()];
    let inv_fact: Vec<C> = {
        let mut v = vec![C::one()];
        for j in 1..=n as i64 {
            v.push(v[j as usize - 1].checked_div(&C::from_i64(j)).expect("j > 0"));
        }
        v
    };
    for d in k..=n as usize {
        let jmax = (d - 1) / (k - 1);
        for i in 0..2 {
            while towers[i].len() + 2 <= jmax {
                towers[i].push(Series::zero(n));
            }
            let mut corr = vec![C::zero(); d + 1];
            for j in 2..=jmax {
                let row = {
                    let prev = if j == 2 { &first[i] } else { &towers[i][j - 3] };
                    lie_degree(&first[0].rows, &first[1].rows, prev, d)
                };
                for (c, r) in corr.iter_mut().zip(&row) {
                    if !r.is_zero() {
                        *c += &r.mul_ref(&inv_fact[j]);
                    }
                }
                towers[i][j - 2].set(d, row);
            }
            let target = if i == 0 { &p[d] } else { &q[d] };
            let row = target.iter().zip(&corr).map(|(x, c)| x.clone() - c.clone()).collect();
            first[i].set(d, row);
        }
    }
    let [a, b] = first;
    Ok(VectorFieldGerm::new(ungraded(&a.rows, n), ungraded(&b.rows, n)))
}

/// `F ∘ G`.
pub fn compose<C: Coefficient>(f: &DiffeoGerm<C>, g: &DiffeoGerm<C>) -> DiffeoGerm<C> {
    let t = f.trunc().min(g.trunc());
    let g1 = g.first().truncate(t);
    let g2 = g.second().truncate(t);
    let c1 = g1.add(&f.p.substitute(&g1, &g2));
    let c2 = g2.add(&f.q.substitute(&g1, &g2));
    DiffeoGerm::from_components(&c1, &c2)
}

/// Tangency order; `Infinite` for the identity.
pub fn order_of<C: Coefficient>(f: &DiffeoGerm<C>) -> Valuation {
    f.p.valuation().min(f.q.valuation())
}

/// Whether `0` is an isolated solution of `p = q = 0`.
///
/// Decided through the polynomial gcd `g = gcd(p, q)` over `Q(i)` (which is
/// also the gcd over `C`): after removing `g` the two polynomials are coprime
/// and meet in finitely many points, so `0` is isolated exactly when the
/// common factor does not vanish at the origin.
pub fn is_isolated_fixed_point(f: &DiffeoGerm<GaussianRational>, as_polynomials: bool) -> Result<bool, GermError> {
    if !as_polynomials {
        return Err(GermError::NotPolynomialInput);
    }
    let p = BiPoly::from_terms(f.p.terms().map(|(m, c)| ((m.x, m.y), c)));
    let q = BiPoly::from_terms(f.q.terms().map(|(m, c)| ((m.x, m.y), c)));
    if p.is_zero() && q.is_zero() {
        return Ok(false);
    }
    let g = p.gcd(&q);
    Ok(!g.constant_term().is_zero())
}

/// `X = factor · X'`.
#[derive(Clone, Debug, PartialEq)]
pub struct Saturation<C: Coefficient> {
    pub factor: Jet2<C>,
    pub xprime: VectorFieldGerm<C>,
}

/// Removes the common factor of the components.
///
/// The largest monomial `x^i y^j` dividing both components is always
/// removed. For honest polynomial components the full polynomial gcd is
/// removed as well. Truncated series only carry monomial factors here: the
/// blow-up of a saturated germ with an isolated singularity acquires no
/// other common factor.
pub fn saturate<C: Coefficient>(x: &VectorFieldGerm<C>) -> Result<Saturation<C>, GermError> {
    if x.a.is_zero() && x.b.is_zero() {
        return Err(GermError::SaturationUnavailable("zero vector field at this truncation".into()));
    }
    let t = x.trunc();
    let i = x.a.valuation_in(Var::X).min(x.b.valuation_in(Var::X)).finite().unwrap_or(0);
    let j = x.a.valuation_in(Var::Y).min(x.b.valuation_in(Var::Y)).finite().unwrap_or(0);
    let div = |f: &Jet2<C>| -> Result<Jet2<C>, JetError> {
        f.divide_by_monomial(Var::X, i)?.divide_by_monomial(Var::Y, j)
    };
    let mut factor = Jet2::monomial(i, j, C::one(), t);
    let mut xprime = VectorFieldGerm { a: div(&x.a)?, b: div(&x.b)?, polynomial: x.polynomial };
    if x.polynomial {
        if let (Some(pa), Some(pb)) = (exact_bipoly(&xprime.a), exact_bipoly(&xprime.b)) {
            let g = pa.gcd(&pb);
            if !g.is_constant() {
                let qa = pa.div_exact(&g).expect("gcd divides");
                let qb = pb.div_exact(&g).expect("gcd divides");
                let gd = g.total_degree().unwrap_or(0) as u32;
                let tp = xprime.trunc().saturating_sub(gd);
                let to_jet = |p: &BiPoly, tt: u32| {
                    Jet2::from_terms(p.terms().into_iter().map(|(m, c)| (m, C::from_gaussian(&c))), tt)
                };
                factor = factor.mul(&to_jet(&g, t));
                xprime = VectorFieldGerm { a: to_jet(&qa, tp), b: to_jet(&qb, tp), polynomial: true };
            }
        }
    }
    if xprime.a.is_zero() && xprime.b.is_zero() {
        return Err(GermError::SaturationUnavailable("saturated field vanishes at this truncation".into()));
    }
    Ok(Saturation { factor, xprime })
}

fn exact_bipoly<C: Coefficient>(f: &Jet2<C>) -> Option<BiPoly> {
    let terms: Option<Vec<((u32, u32), GaussianRational)>> =
        f.terms().map(|(m, c)| c.as_gaussian().map(|g| ((m.x, m.y), g))).collect();
    let terms = terms?;
    Some(BiPoly::from_terms(terms.iter().map(|(m, c)| (*m, c))))
}

/// A characteristic direction `[α : β]` with `P_k(α, β) = λ (α, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharDirection<C: Coefficient> {
    pub direction: (C, C),
    pub lambda: C,
    pub multiplicity: u32,
    pub degenerate: bool,
}

impl<C: Coefficient> CharDirection<C> {
    /// `true` for `[0 : 1]`.
    pub fn is_vertical(&self) -> bool {
        self.direction.0.is_zero()
    }

    /// The affine coordinate of the point on the exceptional divisor:
    /// `v0 = β/α` in `U1`, `u0 = 0` in `U2` for `[0 : 1]`.
    pub fn slope(&self) -> C {
        if self.is_vertical() {
            C::zero()
        } else {
            self.direction.1.clone()
        }
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "dir": [self.direction.0.to_json(), self.direction.1.to_json()],
            "lambda": self.lambda.to_json(),
            "mult": self.multiplicity,
            "degenerate": self.degenerate,
            "dicritical": false,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharDirections<C: Coefficient> {
    pub order: u32,
    pub directions: Vec<CharDirection<C>>,
    /// `r(v) = q_k(1, v) - v·p_k(1, v)`.
    pub tangent_polynomial: UniPoly<C>,
    /// Every direction is characteristic (`r ≡ 0`).
    pub dicritical: bool,
    /// Factor of `r` whose roots are not representable in the field.
    pub unresolved: Option<UniPoly<C>>,
}

/// Characteristic directions of a tangent-to-the-identity germ.
pub fn characteristic_directions<C: Coefficient>(f: &DiffeoGerm<C>) -> Result<CharDirections<C>, GermError> {
    let k = match order_of(f) {
        Valuation::Finite(k) if k >= 2 => k,
        ord => return Err(GermError::NotTangentToIdentity(ord)),
    };
    let pk = f.p.homogeneous_part(k)?;
    let qk = f.q.homogeneous_part(k)?;
    let r = tangent_polynomial(&pk, &qk);
    if r.is_zero() {
        return Ok(CharDirections {
            order: k,
            directions: Vec::new(),
            tangent_polynomial: r,
            dicritical: true,
            unresolved: None,
        });
    }
    let p1 = pk.dehomogenize(Var::X);
    let roots = C::roots(&r);
    let mut directions: Vec<CharDirection<C>> = roots
        .roots
        .iter()
        .map(|(v0, m)| {
            let lambda = p1.eval(v0);
            CharDirection {
                direction: (C::one(), v0.clone()),
                degenerate: lambda.is_zero(),
                lambda,
                multiplicity: *m,
            }
        })
        .collect();
    directions.sort_by(|a, b| a.direction.1.lex_cmp(&b.direction.1));
    let deg = r.degree().unwrap_or(0) as u32;
    if deg < k + 1 {
        // [0:1] is characteristic iff p_k(0, 1) = 0; λ = q_k(0, 1).
        let lambda = qk.coeff(0, k);
        directions.push(CharDirection {
            direction: (C::zero(), C::one()),
            degenerate: lambda.is_zero(),
            lambda,
            multiplicity: k + 1 - deg,
        });
    }
    Ok(CharDirections { order: k, directions, tangent_polynomial: r, dicritical: false, unresolved: roots.unresolved })
}


impl<C: Coefficient> DiffeoGerm<C> {
    pub fn with_polynomial(mut self, polynomial: bool) -> Self {
        self.polynomial = polynomial;
        self
    }
}
