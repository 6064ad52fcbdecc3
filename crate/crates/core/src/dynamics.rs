//! Numerical check of certified parabolic curves: seeds in the attracting
//! sectors of the reduced point are pushed down to `C^2` and iterated under
//! the polynomial map itself.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::blowup::blow_down;
use crate::coeffs::{Coefficient, GaussianRational};
use crate::germs::DiffeoGerm;
use crate::resolution::ResolutionCertificate;

pub type Point = (Complex64, Complex64);

/// Polynomial self-map of `C^2` evaluated in double precision.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap {
    comps: [Vec<((u32, u32), Complex64)>; 2],
    max_x: u32,
    max_y: u32,
}

impl PolyMap {
    pub fn new(f1: Vec<((u32, u32), Complex64)>, f2: Vec<((u32, u32), Complex64)>) -> Self {
        let max_x = f1.iter().chain(&f2).map(|((i, _), _)| *i).max().unwrap_or(0);
        let max_y = f1.iter().chain(&f2).map(|((_, j), _)| *j).max().unwrap_or(0);
        PolyMap { comps: [f1, f2], max_x, max_y }
    }

    /// From the exact components `(F1, F2)`.
    pub fn from_terms(components: &[Vec<((u32, u32), GaussianRational)>; 2]) -> Self {
        let conv = |v: &Vec<((u32, u32), GaussianRational)>| v.iter().map(|(m, c)| (*m, c.to_complex())).collect();
        PolyMap::new(conv(&components[0]), conv(&components[1]))
    }

    /// The polynomial `(x + p, y + q)` stored in a germ.
    pub fn from_diffeo<C: Coefficient>(f: &DiffeoGerm<C>) -> Self {
        let conv = |j: &crate::jets::Jet2<C>| j.terms().map(|(m, c)| ((m.x, m.y), c.to_complex())).collect();
        PolyMap::new(conv(&f.first()), conv(&f.second()))
    }

    pub fn eval(&self, (x, y): Point) -> Point {
        let mut xp = Vec::with_capacity(self.max_x as usize + 1);
        let mut yp = Vec::with_capacity(self.max_y as usize + 1);
        xp.push(Complex64::new(1.0, 0.0));
        yp.push(Complex64::new(1.0, 0.0));
        for i in 0..self.max_x as usize {
            xp.push(xp[i] * x);
        }
        for j in 0..self.max_y as usize {
            yp.push(yp[j] * y);
        }
        let ev = |c: &Vec<((u32, u32), Complex64)>| {
            c.iter().fold(Complex64::new(0.0, 0.0), |acc, ((i, j), k)| acc + k * xp[*i as usize] * yp[*j as usize])
        };
        (ev(&self.comps[0]), ev(&self.comps[1]))
    }
}

pub fn norm((x, y): Point) -> f64 {
    (x.norm_sqr() + y.norm_sqr()).sqrt()
}

/// `|p1 d2 - p2 d1| / (|p| |d|)`: sine of the angle between the lines.
pub fn chordal_distance(p: Point, d: Point) -> f64 {
    let np = norm(p);
    let nd = norm(d);
    if np == 0.0 || nd == 0.0 {
        return 0.0;
    }
    (p.0 * d.1 - p.1 * d.0).norm() / (np * nd)
}

/// The `k` rays where `λ u^k` is a negative real: `arg λ + kθ = π`.
pub fn attracting_directions(lambda: Complex64, k: u32) -> Vec<Complex64> {
    let arg = lambda.arg();
    (0..k)
        .map(|j| {
            let theta = (PI - arg + 2.0 * PI * j as f64) / k as f64;
            Complex64::from_polar(1.0, theta)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitConfig {
    pub n_max: usize,
    pub eps_conv: f64,
    pub escape_radius: f64,
    pub window: usize,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig { n_max: 100_000, eps_conv: 1e-4, escape_radius: 1e3, window: 100 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converged,
    Escaped,
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub n: usize,
    pub point: Point,
    pub abs: f64,
    pub dir_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord {
    pub samples: Vec<Sample>,
    pub verdict: Verdict,
    /// Chordal distance of the last point to the target direction.
    pub tangency_error: Option<f64>,
    /// `|p_{n+1}| < |p_n|` over the final window.
    pub monotone_tail: bool,
}

impl OrbitRecord {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("an orbit has at least its seed")
    }

    /// `n·|x_n|` at the last step.
    pub fn rate(&self) -> f64 {
        let s = self.last();
        s.n as f64 * s.point.0.norm()
    }

    /// CSV with columns `n, re_x, im_x, re_y, im_y, abs, dir_error`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re_x,im_x,re_y,im_y,abs,dir_error\n");
        for s in &self.samples {
            let de = s.dir_error.map(|d| format!("{d:e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{:e},{:e},{:e},{:e},{:e},{}",
                s.n, s.point.0.re, s.point.0.im, s.point.1.re, s.point.1.im, s.abs, de
            );
        }
        out
    }
}

/// Iterates `f` from `p0`, logging geometrically spaced samples.
pub fn orbit(f: &PolyMap, p0: Point, target: Option<Point>, cfg: &OrbitConfig) -> OrbitRecord {
    let sample = |n: usize, p: Point| Sample { n, point: p, abs: norm(p), dir_error: target.map(|d| chordal_distance(p, d)) };
    let mut samples = vec![sample(0, p0)];
    if norm(p0) == 0.0 {
        return OrbitRecord { samples, verdict: Verdict::Converged, tangency_error: target.map(|_| 0.0), monotone_tail: true };
    }
    let mut p = p0;
    let mut next_log = 1usize;
    let mut decreasing_run = 0usize;
    let mut prev_abs = norm(p0);
    let mut n = 0;
    let mut escaped = false;
    while n < cfg.n_max {
        p = f.eval(p);
        n += 1;
        let a = norm(p);
        if !a.is_finite() || a > cfg.escape_radius {
            escaped = true;
            samples.push(sample(n, p));
            break;
        }
        decreasing_run = if a < prev_abs { decreasing_run + 1 } else { 0 };
        prev_abs = a;
        if a == 0.0 {
            samples.push(sample(n, p));
            return OrbitRecord { samples, verdict: Verdict::Converged, tangency_error: target.map(|_| 0.0), monotone_tail: true };
        }
        if n == next_log || n == cfg.n_max {
            samples.push(sample(n, p));
            next_log *= 2;
        }
    }
    let monotone_tail = decreasing_run >= cfg.window.min(n);
    let verdict = if escaped {
        Verdict::Escaped
    } else if prev_abs < cfg.eps_conv && monotone_tail {
        Verdict::Converged
    } else {
        Verdict::Undecided
    };
    let tangency_error = target.map(|d| chordal_distance(p, d));
    OrbitRecord { samples, verdict, tangency_error, monotone_tail }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub samples_per_petal: usize,
    pub radius: f64,
    /// Offsets of the transversal coordinate at the reduced point.
    pub offsets: Vec<Complex64>,
    /// Also seed along `-d` for each attracting direction `d`.
    pub repelling: bool,
    pub tangency_threshold: f64,
    pub orbit: OrbitConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples_per_petal: 3,
            radius: 0.05,
            offsets: vec![Complex64::new(0.0, 0.0)],
            repelling: true,
            tangency_threshold: 1e-3,
            orbit: OrbitConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeedResult {
    pub radius: f64,
    pub offset: Complex64,
    /// Seed in the coordinates of the reduced point.
    pub local: Point,
    pub start: Point,
    /// The seed escaped at its radius and was retried at a quarter of it.
    pub retried: bool,
    pub record: OrbitRecord,
}

impl SeedResult {
    pub fn success(&self, threshold: f64) -> bool {
        self.record.verdict == Verdict::Converged && self.record.tangency_error.is_some_and(|e| e < threshold)
    }

    fn to_json_value(&self) -> Value {
        let last = self.record.last();
        json!({
            "radius": self.radius,
            "offset": [self.offset.re, self.offset.im],
            "start": [[self.start.0.re, self.start.0.im], [self.start.1.re, self.start.1.im]],
            "retried": self.retried,
            "verdict": self.record.verdict,
            "steps": last.n,
            "abs": last.abs,
            "tangency_error": self.record.tangency_error,
            "rate": self.record.rate(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PetalReport {
    pub direction: Complex64,
    pub repelling: bool,
    pub seeds: Vec<SeedResult>,
}

impl PetalReport {
    pub fn converged_fraction(&self, threshold: f64) -> f64 {
        if self.seeds.is_empty() {
            return 0.0;
        }
        self.seeds.iter().filter(|s| s.success(threshold)).count() as f64 / self.seeds.len() as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub target: Point,
    pub petals: Vec<PetalReport>,
    pub tangency_threshold: f64,
}

impl VerificationReport {
    pub fn attracting(&self) -> impl Iterator<Item = &SeedResult> {
        self.petals.iter().filter(|p| !p.repelling).flat_map(|p| &p.seeds)
    }

    pub fn repelling(&self) -> impl Iterator<Item = &SeedResult> {
        self.petals.iter().filter(|p| p.repelling).flat_map(|p| &p.seeds)
    }

    /// Fraction of attracting seeds that converged tangentially; `None`
    /// without seeds.
    pub fn fraction(&self) -> Option<f64> {
        let seeds: Vec<_> = self.attracting().collect();
        if seeds.is_empty() {
            return None;
        }
        Some(seeds.iter().filter(|s| s.success(self.tangency_threshold)).count() as f64 / seeds.len() as f64)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "format": 1,
            "target": [[self.target.0.re, self.target.0.im], [self.target.1.re, self.target.1.im]],
            "fraction": self.fraction(),
            "petals": self.petals.iter().map(|p| json!({
                "direction": [p.direction.re, p.direction.im],
                "repelling": p.repelling,
                "converged_fraction": p.converged_fraction(self.tangency_threshold),
                "seeds": p.seeds.iter().map(SeedResult::to_json_value).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("certificate status is {0}, only certified germs are verified")]
    NotCertified(String),
}

/// Seeds `u = r·d`, `v = offset` at the reduced point for each attracting
/// direction `d`, pushes them down through the chart map and iterates `f`.
pub fn verify_certificate<C: Coefficient>(
    f: &PolyMap,
    cert: &ResolutionCertificate<C>,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, VerifyError> {
    let (Some(data), Some(dir)) = (cert.reduced.as_ref(), cert.direction.as_ref()) else {
        return Err(VerifyError::NotCertified(cert.status.to_string()));
    };
    let target = (dir.direction.0.to_complex(), dir.direction.1.to_complex());
    let steps = cert.chart_map().to_float();
    let mut petals = Vec::new();
    let mut signs = vec![false];
    if cfg.repelling {
        signs.push(true);
    }
    for repelling in signs {
        for d in attracting_directions(data.lambda.to_complex(), data.k) {
            let d = if repelling { -d } else { d };
            let mut seeds = Vec::with_capacity(cfg.samples_per_petal);
            for i in 0..cfg.samples_per_petal {
                let radius = cfg.radius / f64::powi(2.0, (i % 3) as i32);
                let offset = if cfg.offsets.is_empty() {
                    Complex64::new(0.0, 0.0)
                } else {
                    cfg.offsets[(i / 3) % cfg.offsets.len()]
                };
                let run = |r: f64| {
                    let local = (d * r, offset);
                    let start = blow_down(&steps, local);
                    (local, start, orbit(f, start, Some(target), &cfg.orbit))
                };
                let (mut local, mut start, mut record) = run(radius);
                let mut retried = false;
                if record.verdict == Verdict::Escaped && !repelling {
                    (local, start, record) = run(radius / 4.0);
                    retried = true;
                }
                seeds.push(SeedResult { radius, offset, local, start, retried, record });
            }
            petals.push(PetalReport { direction: d, repelling, seeds });
        }
    }
    Ok(VerificationReport { target, petals, tangency_threshold: cfg.tangency_threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn symmetric() -> PolyMap {
        PolyMap::new(
            vec![((1, 0), c(1.0, 0.0)), ((0, 2), c(1.0, 0.0))],
            vec![((0, 1), c(1.0, 0.0)), ((2, 0), c(1.0, 0.0))],
        )
    }

    #[test]
    fn petal_directions() {
        let close = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12);
        assert!(close(&attracting_directions(c(1.0, 0.0), 1), &[c(-1.0, 0.0)]));
        assert!(close(&attracting_directions(c(1.0, 0.0), 2), &[c(0.0, 1.0), c(0.0, -1.0)]));
        assert!(close(&attracting_directions(c(-1.0, 0.0), 1), &[c(1.0, 0.0)]));
    }

    #[test]
    fn diagonal_orbit_converges() {
        let cfg = OrbitConfig::default();
        let r = orbit(&symmetric(), (c(-0.1, 0.0), c(-0.1, 0.0)), Some((c(1.0, 0.0), c(1.0, 0.0))), &cfg);
        assert_eq!(r.verdict, Verdict::Converged);
        assert!(r.tangency_error.unwrap() < 1e-12);
        assert!(r.monotone_tail);
        let rate = r.rate();
        assert!((0.5..=2.0).contains(&rate), "{rate}");
        assert!(r.samples.windows(2).all(|w| w[0].n < w[1].n));
    }

    #[test]
    fn orbit_escapes() {
        let r = orbit(&symmetric(), (c(0.5, 0.0), c(0.5, 0.0)), None, &OrbitConfig::default());
        assert_eq!(r.verdict, Verdict::Escaped);
    }

    #[test]
    fn fixed_point_orbit() {
        let r = orbit(&symmetric(), (c(0.0, 0.0), c(0.0, 0.0)), None, &OrbitConfig::default());
        assert_eq!(r.verdict, Verdict::Converged);
        assert_eq!(r.last().n, 0);
    }

    #[test]
    fn chordal() {
        assert!(chordal_distance((c(1.0, 0.0), c(1.0, 0.0)), (c(2.0, 0.0), c(2.0, 0.0))) < 1e-15);
        assert!((chordal_distance((c(1.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(1.0, 0.0))) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_layout() {
        let cfg = OrbitConfig { n_max: 4, ..OrbitConfig::default() };
        let r = orbit(&symmetric(), (c(-0.1, 0.0), c(-0.1, 0.0)), Some((c(1.0, 0.0), c(1.0, 0.0))), &cfg);
        let csv = r.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "n,re_x,im_x,re_y,im_y,abs,dir_error");
        assert_eq!(lines.len(), 1 + r.samples.len());
        assert!(lines[1].starts_with("0,"));
    }
}
