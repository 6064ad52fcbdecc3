//! Reduction of the singularity of the infinitesimal generator by point
//! blow-ups, following the points whose index is not in `Q_{>=0}`, and the
//! parabolic-curve certificate built on the reduced point.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::blowup::{blowup_vf, BlowupError, ChartMap, DivisorPoint};
use crate::coeffs::{
    classify_ratio, Backend, ClassifyConfig, Coefficient, GaussianRational, IndexClass, IndexValue, RatioClass,
};
use crate::germs::{
    characteristic_directions, exp_vf, is_isolated_fixed_point, log_diffeo, order_of, CharDirection, DiffeoGerm,
    GermError, VectorFieldGerm,
};
use crate::indices::{divisor_index_report, IndexError};
use crate::jets::{Valuation, Var};

pub const DEFAULT_MAX_DEPTH: usize = 10;
/// Blow-ups are refused below this truncation.
pub const MIN_BLOWUP_TRUNC: u32 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResolutionError {
    #[error("the fixed point is not isolated")]
    NotIsolated,
    #[error("the germ is not an honest polynomial map")]
    NotPolynomialInput,
    #[error("truncation {trunc} cannot resolve the reduced form (need {needed})")]
    InsufficientPrecision { trunc: u32, needed: u32 },
    #[error("reduced point fails the shape check: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Certified,
    Dicritical,
    NonRationalBlocked,
    DepthExceeded,
    NoEligibleIndex,
}

impl Status {
    /// Which failure to report when several branches fail.
    fn priority(self) -> u8 {
        match self {
            Status::Certified => 4,
            Status::DepthExceeded => 3,
            Status::NonRationalBlocked => 2,
            Status::Dicritical => 1,
            Status::NoEligibleIndex => 0,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolveConfig {
    pub max_depth: usize,
    pub classify: ClassifyConfig,
}

impl Default for ResolveConfig {
    fn default() -> Self {
        ResolveConfig { max_depth: DEFAULT_MAX_DEPTH, classify: ClassifyConfig::default() }
    }
}

/// `u^k((λu + …)∂u + (μv + …)∂v)` data at a divisor point.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedPointData<C: Coefficient> {
    pub k: u32,
    pub lambda: C,
    pub mu: C,
    pub ratio: IndexValue,
    pub ratio_class: RatioClass,
}

impl<C: Coefficient> ReducedPointData<C> {
    pub fn to_json_value(&self) -> Value {
        json!({
            "k": self.k,
            "lambda": self.lambda.to_json(),
            "mu": self.mu.to_json(),
            "ratio": self.ratio.to_json(),
            "ratio_class": self.ratio_class,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReducedCheck<C: Coefficient> {
    Reduced(ReducedPointData<C>),
    NotReduced(String),
}

/// Decides whether `X` at the origin has the reduced form
/// `u^k((λu + u²(…))∂u + (μv + u(…))∂v)` with `λ ≠ 0`, `μ/λ ∉ Q_{>0}`,
/// the divisor being `u = 0`.
pub fn reduced_form_check<C: Coefficient>(x: &VectorFieldGerm<C>, cfg: &ClassifyConfig) -> Result<ReducedCheck<C>, ResolutionError> {
    let k = match x.a.valuation_in(Var::X).min(x.b.valuation_in(Var::X)) {
        Valuation::Finite(k) => k,
        Valuation::Infinite => return Ok(ReducedCheck::NotReduced("zero field".into())),
    };
    if x.trunc() < k + 1 {
        return Err(ResolutionError::InsufficientPrecision { trunc: x.trunc(), needed: k + 1 });
    }
    let a = x.a.divide_by_monomial(Var::X, k).map_err(GermError::from)?;
    let b = x.b.divide_by_monomial(Var::X, k).map_err(GermError::from)?;
    if !a.restrict_zero(Var::X).is_zero() {
        return Ok(ReducedCheck::NotReduced("the u-component does not vanish on the divisor".into()));
    }
    if !b.coeff(0, 0).is_zero() {
        return Ok(ReducedCheck::NotReduced("nonsingular point".into()));
    }
    let lambda = a.coeff(1, 0);
    let mu = b.coeff(0, 1);
    if lambda.is_zero() {
        return Ok(ReducedCheck::NotReduced("lambda = 0".into()));
    }
    let ratio = mu.checked_div(&lambda).expect("lambda != 0").to_index_value();
    let ratio_class = classify_ratio(&ratio, cfg);
    match ratio_class {
        RatioClass::NotInQGt0 => Ok(ReducedCheck::Reduced(ReducedPointData { k, lambda, mu, ratio, ratio_class })),
        RatioClass::InQGt0 => Ok(ReducedCheck::NotReduced(format!("mu/lambda = {ratio} is a positive rational"))),
        RatioClass::Indeterminate => Ok(ReducedCheck::NotReduced(format!("mu/lambda = {ratio} is indeterminate"))),
    }
}

/// A blow-up centre of the chain with its index on the newest divisor.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainStep<C: Coefficient> {
    pub point: DivisorPoint<C>,
    pub index: IndexValue,
    pub class: IndexClass,
}

impl<C: Coefficient> ChainStep<C> {
    pub fn to_json_value(&self) -> Value {
        json!({
            "chart": self.point.chart,
            "center": self.point.coord.to_json(),
            "index": self.index.to_json(),
            "class": self.class,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Resolution<C: Coefficient> {
    pub status: Status,
    pub chain: Vec<ChainStep<C>>,
    /// The (unsaturated) transform of the field at the reduced point.
    pub transform: Option<VectorFieldGerm<C>>,
    pub reduced: Option<ReducedPointData<C>>,
}

impl<C: Coefficient> Resolution<C> {
    pub fn chart_map(&self) -> ChartMap<C> {
        let mut m = ChartMap::default();
        for s in &self.chain {
            m.push(&s.point);
        }
        m
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "format": 1,
            "status": self.status,
            "chain": self.chain.iter().map(ChainStep::to_json_value).collect::<Vec<_>>(),
            "final": self.reduced.as_ref().map(ReducedPointData::to_json_value),
        })
    }
}

struct Found<C: Coefficient> {
    chain: Vec<ChainStep<C>>,
    transform: VectorFieldGerm<C>,
    reduced: ReducedPointData<C>,
}

/// Blows up until a reduced point is reached, always through points whose
/// index is not in `Q_{>=0}`, depth first in lexicographic order with
/// backtracking.
pub fn resolve<C: Coefficient>(x: &VectorFieldGerm<C>, cfg: &ResolveConfig) -> Result<Resolution<C>, ResolutionError> {
    match search(x, 0, cfg)? {
        Ok(found) => Ok(Resolution {
            status: Status::Certified,
            chain: found.chain,
            transform: Some(found.transform),
            reduced: Some(found.reduced),
        }),
        Err(status) => Ok(Resolution { status, chain: Vec::new(), transform: None, reduced: None }),
    }
}

type SearchResult<C> = Result<Result<Found<C>, Status>, ResolutionError>;

fn search<C: Coefficient>(x: &VectorFieldGerm<C>, depth: usize, cfg: &ResolveConfig) -> SearchResult<C> {
    let report = match divisor_index_report(x, &cfg.classify) {
        Ok(r) => r,
        Err(IndexError::InsufficientPrecision { .. }) => return Ok(Err(Status::DepthExceeded)),
        Err(e) => return Err(e.into()),
    };
    if report.dicritical {
        return Ok(Err(Status::Dicritical));
    }
    let mut eligible: Vec<ChainStep<C>> = report
        .points()
        .filter(|(_, _, class)| *class == IndexClass::NotInQGe0)
        .map(|(p, i, c)| ChainStep { point: p.clone(), index: i.clone(), class: c })
        .collect();
    eligible.sort_by(|a, b| a.point.lex_cmp(&b.point));
    if eligible.is_empty() {
        return Ok(Err(if report.has_non_rational() { Status::NonRationalBlocked } else { Status::NoEligibleIndex }));
    }
    if depth >= cfg.max_depth || x.trunc() < MIN_BLOWUP_TRUNC {
        return Ok(Err(Status::DepthExceeded));
    }
    let mut transforms = Vec::with_capacity(eligible.len());
    for step in &eligible {
        let y = blowup_vf(x, &step.point)?;
        match reduced_form_check(&y, &cfg.classify) {
            Ok(ReducedCheck::Reduced(data)) => {
                return Ok(Ok(Found { chain: vec![step.clone()], transform: y, reduced: data }));
            }
            Ok(ReducedCheck::NotReduced(_)) | Err(ResolutionError::InsufficientPrecision { .. }) => {}
            Err(e) => return Err(e),
        }
        transforms.push(y);
    }
    let mut worst: Option<Status> = None;
    for (step, y) in eligible.iter().zip(transforms) {
        match search(&y, depth + 1, cfg)? {
            Ok(mut found) => {
                found.chain.insert(0, step.clone());
                return Ok(Ok(found));
            }
            Err(status) => {
                if worst.is_none_or(|w| status.priority() > w.priority()) {
                    worst = Some(status);
                }
            }
        }
    }
    Ok(Err(worst.unwrap_or(Status::NoEligibleIndex)))
}

/// Expansion of `F* = Exp(X*)` at the reduced point.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeCheck<C: Coefficient> {
    /// u-valuation of `F*_1 - u`.
    pub first_valuation: Valuation,
    /// Coefficient of `u^{k+1}` in `F*_1 - u`.
    pub first_leading: C,
    /// u-valuation of `F*_2 - v`.
    pub second_valuation: Valuation,
    /// Coefficient of `u^k v` in `F*_2 - v`.
    pub second_uk_v: C,
    /// Coefficient of `u^k` in `F*_2 - v`.
    pub second_uk: C,
}

impl<C: Coefficient> ShapeCheck<C> {
    pub fn of(fstar: &DiffeoGerm<C>, k: u32) -> Self {
        ShapeCheck {
            first_valuation: fstar.p.valuation_in(Var::X),
            first_leading: fstar.p.coeff(k + 1, 0),
            second_valuation: fstar.q.valuation_in(Var::X),
            second_uk_v: fstar.q.coeff(k, 1),
            second_uk: fstar.q.coeff(k, 0),
        }
    }

    /// `F*_1 = u + λu^{k+1} + O(u^{k+2})`, `F*_2 = v + μu^k v + O(u^{k+1})`
    /// read as statements about u-valuations and the displayed coefficients.
    pub fn matches(&self, data: &ReducedPointData<C>) -> bool {
        self.first_valuation == Valuation::Finite(data.k + 1)
            && (self.first_leading.clone() - data.lambda.clone()).is_zero()
            && self.second_valuation >= Valuation::Finite(data.k)
            && (self.second_uk_v.clone() - data.mu.clone()).is_zero()
            && self.second_uk.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionCertificate<C: Coefficient> {
    pub status: Status,
    pub backend: Backend,
    pub ord: u32,
    pub trunc: u32,
    /// Characteristic direction of the first blow-up: the tangent direction
    /// of the certified curves.
    pub direction: Option<CharDirection<C>>,
    pub chain: Vec<ChainStep<C>>,
    pub reduced: Option<ReducedPointData<C>>,
    pub shape: Option<ShapeCheck<C>>,
    /// `ord(F) - 1`.
    pub curve_count: u32,
}

impl<C: Coefficient> ResolutionCertificate<C> {
    pub fn chart_map(&self) -> ChartMap<C> {
        let mut m = ChartMap::default();
        for s in &self.chain {
            m.push(&s.point);
        }
        m
    }

    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "format": 1,
            "status": self.status,
            "backend": self.backend,
            "ord": self.ord,
            "trunc": self.trunc,
            "direction": self.direction.as_ref().map(|d| json!([d.direction.0.to_json(), d.direction.1.to_json()])),
            "chain": self.chain.iter().map(ChainStep::to_json_value).collect::<Vec<_>>(),
            "final": self.reduced.as_ref().map(ReducedPointData::to_json_value),
            "curve_count": self.curve_count,
        })
    }
}

/// Full pipeline for a polynomial germ with isolated fixed point: generator,
/// resolution, and the expansion of `Exp` of the transform at the reduced
/// point.
pub fn certify_parabolic<C: Coefficient>(
    f: &DiffeoGerm<GaussianRational>,
    cfg: &ResolveConfig,
) -> Result<ResolutionCertificate<C>, ResolutionError> {
    if !f.polynomial {
        return Err(ResolutionError::NotPolynomialInput);
    }
    let ord = match order_of(f) {
        Valuation::Finite(k) if k >= 2 => k,
        v => return Err(GermError::NotTangentToIdentity(v).into()),
    };
    if !is_isolated_fixed_point(f, true)? {
        return Err(ResolutionError::NotIsolated);
    }
    let fc: DiffeoGerm<C> = f.convert();
    let x = log_diffeo(&fc)?;
    let res = resolve(&x, cfg)?;
    let mut cert = ResolutionCertificate {
        status: res.status,
        backend: C::BACKEND,
        ord,
        trunc: f.trunc(),
        direction: None,
        chain: res.chain.clone(),
        reduced: res.reduced.clone(),
        shape: None,
        curve_count: ord - 1,
    };
    if res.status != Status::Certified {
        return Ok(cert);
    }
    let first = &res.chain[0].point;
    let dirs = characteristic_directions(&fc)?;
    cert.direction = dirs.directions.into_iter().find(|d| {
        let p = DivisorPoint::from_direction(d);
        p.chart == first.chart && (p.coord.clone() - first.coord.clone()).is_zero()
    });
    let transform = res.transform.as_ref().expect("certified resolution has a transform");
    let data = res.reduced.as_ref().expect("certified resolution has data");
    let fstar = exp_vf(transform)?;
    let shape = ShapeCheck::of(&fstar, data.k);
    if !shape.matches(data) {
        return Err(ResolutionError::ShapeMismatch(format!(
            "F*_1 - u has u-valuation {} with leading {}, F*_2 - v has u^k v coefficient {}",
            shape.first_valuation, shape.first_leading, shape.second_uk_v
        )));
    }
    cert.shape = Some(shape);
    Ok(cert)
}
