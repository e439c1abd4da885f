//! Floating-point orbit sampling by random words, and density diagnostics
//! against an exact orbit-closure description.

use std::collections::HashMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::affine::GroupSpec;
use crate::classifier::{ClassifyError, OrbitClosureDescription};
use crate::closures::{AddClosure, MulClosure, MulVariant};
use crate::invariant::AffineSubspace;
use crate::linalg::Vector;
use crate::scalar::{rational_to_f64, FieldScalar};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid sampling configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("csv output failed: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub x: Vec<f64>,
    pub num_words: usize,
    pub max_word_len: usize,
    /// Half-width of the sup-norm window around the origin.
    pub window: f64,
    pub seed: u64,
}

impl SampleConfig {
    pub const DEFAULT_NUM_WORDS: usize = 200_000;
    pub const DEFAULT_MAX_WORD_LEN: usize = 40;
    pub const DEFAULT_WINDOW: f64 = 3.0;

    pub fn new(x: Vec<f64>) -> Self {
        SampleConfig {
            x,
            num_words: Self::DEFAULT_NUM_WORDS,
            max_word_len: Self::DEFAULT_MAX_WORD_LEN,
            window: Self::DEFAULT_WINDOW,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.num_words == 0 {
            return Err(SimError::InvalidConfig("num_words must be at least 1".into()));
        }
        if self.max_word_len == 0 {
            return Err(SimError::InvalidConfig("max_word_len must be at least 1".into()));
        }
        if !(self.window > 0.0) {
            return Err(SimError::InvalidConfig("window must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSample {
    pub points: Vec<Vec<f64>>,
    /// Trials whose endpoint left the window or overflowed.
    pub discarded: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityReport {
    pub max_deviation: f64,
    pub coverage: f64,
    pub probes: usize,
    pub retained: usize,
    pub discarded: usize,
}

#[derive(Debug, Clone)]
struct FloatMap {
    ratio: f64,
    b: Vec<f64>,
}

impl FloatMap {
    fn apply_in_place(&self, x: &mut [f64]) {
        for (xi, bi) in x.iter_mut().zip(&self.b) {
            *xi = self.ratio * *xi + bi;
        }
    }
}

/// Generators followed by their inverses, in float.
fn float_letters(spec: &GroupSpec) -> Vec<FloatMap> {
    spec.maps()
        .flat_map(|f| {
            let g = f.inverse();
            [f, &g].map(|m| FloatMap { ratio: m.ratio().to_f64(), b: m.translation().iter().map(FieldScalar::to_f64).collect() })
        })
        .collect()
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Endpoint of every trial, before windowing. Trial `i` depends only on
/// `(seed, i)`, so a run with fewer words is a prefix of a longer one.
pub fn sample_orbit_raw(spec: &GroupSpec, cfg: &SampleConfig) -> Result<Vec<Vec<f64>>, SimError> {
    cfg.validate()?;
    if cfg.x.len() != spec.dim() {
        return Err(SimError::DimensionMismatch { expected: spec.dim(), got: cfg.x.len() });
    }
    let letters = float_letters(spec);
    Ok((0..cfg.num_words)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let len = rng.gen_range(1..=cfg.max_word_len);
            let mut p = cfg.x.clone();
            for _ in 0..len {
                letters[rng.gen_range(0..letters.len())].apply_in_place(&mut p);
            }
            p
        })
        .collect())
}

pub fn sample_orbit(spec: &GroupSpec, cfg: &SampleConfig) -> Result<OrbitSample, SimError> {
    let raw = sample_orbit_raw(spec, cfg)?;
    let total = raw.len();
    let points: Vec<Vec<f64>> =
        raw.into_iter().filter(|p| p.iter().all(|c| c.is_finite() && c.abs() <= cfg.window)).collect();
    Ok(OrbitSample { discarded: total - points.len(), points })
}

pub fn write_csv<W: Write>(points: &[Vec<f64>], dim: usize, mut out: W) -> std::io::Result<()> {
    let header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for p in points {
        let row: Vec<String> = p.iter().map(|c| format!("{c:?}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

// -- small float geometry --

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn to_f64_vec(v: &[FieldScalar]) -> Vec<f64> {
    v.iter().map(FieldScalar::to_f64).collect()
}

/// Orthonormal basis of the span of `vs` (modified Gram-Schmidt).
fn orthonormal(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for e in &q {
            w = axpy(-dot(&w, e), e, &w);
        }
        let len = norm(&w);
        if len > 1e-12 * norm(v).max(1.0) {
            q.push(w.iter().map(|x| x / len).collect());
        }
    }
    q
}

/// Component of `v` orthogonal to the orthonormal set `q`.
fn reject(v: &[f64], q: &[Vec<f64>]) -> Vec<f64> {
    q.iter().fold(v.to_vec(), |w, e| axpy(-dot(&w, e), e, &w))
}

fn in_window(p: &[f64], w: f64) -> bool {
    p.iter().all(|c| c.abs() <= w * (1.0 + 1e-12))
}

fn subspace_basis(e: &AffineSubspace) -> Vec<Vec<f64>> {
    orthonormal(&e.directions().iter().map(|d| to_f64_vec(d)).collect::<Vec<_>>())
}

/// Solve the small symmetric system `g c = r` by Gaussian elimination.
fn solve(mut g: Vec<Vec<f64>>, mut r: Vec<f64>) -> Vec<f64> {
    let k = r.len();
    for i in 0..k {
        let piv = (i..k).max_by(|&a, &b| g[a][i].abs().total_cmp(&g[b][i].abs())).unwrap();
        g.swap(i, piv);
        r.swap(i, piv);
        for j in i + 1..k {
            let f = g[j][i] / g[i][i];
            for c in i..k {
                g[j][c] -= f * g[i][c];
            }
            r[j] -= f * r[i];
        }
    }
    let mut c = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| g[i][j] * c[j]).sum();
        c[i] = (r[i] - s) / g[i][i];
    }
    c
}

/// Distance from `p` to the lattice coset `origin + Z⟨basis⟩`.
fn lattice_distance(p: &[f64], origin: &[f64], basis: &[Vec<f64>]) -> f64 {
    let d = sub(p, origin);
    if basis.is_empty() {
        return norm(&d);
    }
    let gram: Vec<Vec<f64>> = basis.iter().map(|a| basis.iter().map(|b| dot(a, b)).collect()).collect();
    let rhs: Vec<f64> = basis.iter().map(|a| dot(a, &d)).collect();
    let c = solve(gram, rhs);
    let r = basis.len();
    let mut best = f64::INFINITY;
    for code in 0..3usize.pow(r as u32) {
        let mut m = d.clone();
        let mut rest = code;
        for (ci, b) in c.iter().zip(basis) {
            let k = ci.round() + (rest % 3) as f64 - 1.0;
            rest /= 3;
            m = axpy(-k, b, &m);
        }
        best = best.min(norm(&m));
    }
    best
}

/// Lattice points of `origin + Z⟨basis⟩` inside the window, by flood fill.
fn lattice_points_in_window(origin: &[f64], basis: &[Vec<f64>], w: f64, cap: usize) -> Vec<Vec<f64>> {
    if basis.is_empty() {
        return if in_window(origin, w) { vec![origin.to_vec()] } else { Vec::new() };
    }
    let slack = basis.iter().map(|b| b.iter().fold(0.0f64, |m, x| m.max(x.abs()))).fold(0.0, f64::max);
    let gram: Vec<Vec<f64>> = basis.iter().map(|a| basis.iter().map(|b| dot(a, b)).collect()).collect();
    let rhs: Vec<f64> = basis.iter().map(|a| -dot(a, origin)).collect();
    let start: Vec<i64> = solve(gram, rhs).iter().map(|c| c.round() as i64).collect();
    let point = |k: &[i64]| {
        k.iter().zip(basis).fold(origin.to_vec(), |acc, (&ki, b)| axpy(ki as f64, b, &acc))
    };
    let mut seen = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::from([start.clone()]);
    seen.insert(start);
    let mut out = Vec::new();
    while let Some(k) = queue.pop_front() {
        let p = point(&k);
        if in_window(&p, w) {
            out.push(p.clone());
        }
        if seen.len() > cap {
            break;
        }
        for i in 0..basis.len() {
            for step in [-1, 1] {
                let mut nk = k.clone();
                nk[i] += step;
                if !seen.contains(&nk) && in_window(&point(&nk), w + slack) {
                    seen.insert(nk.clone());
                    queue.push_back(nk);
                }
            }
        }
    }
    out
}

/// Grid probes of the flat `base + span(q)` inside the window.
fn flat_probes(base: &[f64], q: &[Vec<f64>], w: f64, h: f64) -> Vec<Vec<f64>> {
    let n = base.len();
    if q.len() == n {
        let steps = (w / h).floor() as i64;
        let mut out = Vec::new();
        let mut idx = vec![-steps; n];
        loop {
            out.push(idx.iter().map(|&k| k as f64 * h).collect());
            let mut i = 0;
            while i < n {
                idx[i] += 1;
                if idx[i] <= steps {
                    break;
                }
                idx[i] = -steps;
                i += 1;
            }
            if i == n {
                return out;
            }
        }
    }
    let center = reject(base, q);
    let hq: Vec<Vec<f64>> = q.iter().map(|e| e.iter().map(|x| x * h).collect()).collect();
    let mut out = lattice_points_in_window(&center, &hq, w, 2_000_000);
    out.retain(|p| in_window(p, w));
    out
}

/// Values of the multiplicative closure used to build slices, with
/// `h_min ≤ |t|·scale ≤ t_max·scale`.
fn slice_parameters(lambda: &MulClosure, scale: f64, t_max: f64, h_min: f64) -> Vec<f64> {
    let mut ts = vec![0.0];
    let mut push = |t: f64| {
        if t.abs() * scale >= h_min && t.abs() <= t_max {
            ts.push(t);
        }
    };
    match &lambda.variant {
        MulVariant::TrivialOne => push(1.0),
        MulVariant::PlusMinusOne => {
            push(1.0);
            push(-1.0);
        }
        MulVariant::CyclicPos(r) | MulVariant::CyclicWithSign(r) | MulVariant::CyclicTwisted(r) => {
            let rho = rational_to_f64(r).abs();
            let rho = if rho < 1.0 { rho.recip() } else { rho };
            let lr = rho.ln();
            let hi = (t_max.ln() / lr).ceil() as i64 + 1;
            let lo = ((h_min / scale).ln() / lr).floor() as i64 - 1;
            for k in lo..=hi {
                let m = rho.powi(k as i32);
                match lambda.variant {
                    MulVariant::CyclicPos(_) => push(m),
                    MulVariant::CyclicWithSign(_) => {
                        push(m);
                        push(-m);
                    }
                    _ => push(if k.rem_euclid(2) == 0 { m } else { -m }),
                }
            }
        }
        MulVariant::DensePos | MulVariant::DenseAll => unreachable!("dense families are flats"),
    }
    ts
}

/// Float form of a description, as a finite union of pieces.
enum Piece {
    Flat { base: Vec<f64>, q: Vec<Vec<f64>> },
    /// `base + span(q)` restricted to `⟨y − base, u⟩ ≥ 0`, `u` a unit vector in `span(q)`.
    HalfFlat { base: Vec<f64>, q: Vec<Vec<f64>>, u: Vec<f64> },
    Lattice { origin: Vec<f64>, basis: Vec<Vec<f64>> },
    /// `⋃_t base + t·u + span(q)` over the cyclic closure `lambda`, `u ⟂ q`.
    Cyclic { base: Vec<f64>, u: Vec<f64>, q: Vec<Vec<f64>>, lambda: MulClosure },
}

fn pieces(desc: &OrbitClosureDescription) -> Result<Vec<Piece>, SimError> {
    Ok(match desc {
        OrbitClosureDescription::AffineSet { e } => {
            vec![Piece::Flat { base: to_f64_vec(e.base()), q: subspace_basis(e) }]
        }
        OrbitClosureDescription::ScaledFamily { base, direction, lambda, e } => {
            let q = subspace_basis(e);
            let base = to_f64_vec(base);
            let u = reject(&to_f64_vec(direction), &q);
            match lambda.variant {
                MulVariant::DenseAll => {
                    let mut all = q.clone();
                    all.push(u.iter().map(|x| x / norm(&u)).collect());
                    vec![Piece::Flat { base, q: orthonormal(&all) }]
                }
                MulVariant::DensePos => {
                    let unit: Vec<f64> = u.iter().map(|x| x / norm(&u)).collect();
                    let mut all = q.clone();
                    all.push(unit.clone());
                    vec![Piece::HalfFlat { base, q: orthonormal(&all), u: unit }]
                }
                _ => vec![Piece::Cyclic { base, u, q, lambda: lambda.clone() }],
            }
        }
        OrbitClosureDescription::CosetPair { x, a, h } => {
            let x = to_f64_vec(x);
            let other: Vec<f64> = to_f64_vec(a).iter().zip(&x).map(|(ai, xi)| ai - xi).collect();
            match h {
                AddClosure::Lattice { basis } => {
                    let basis: Vec<Vec<f64>> = basis.iter().map(|b| to_f64_vec(b)).collect();
                    vec![
                        Piece::Lattice { origin: x, basis: basis.clone() },
                        Piece::Lattice { origin: other, basis },
                    ]
                }
                AddClosure::DenseLine { direction } => {
                    let q = orthonormal(&[to_f64_vec(direction)]);
                    vec![Piece::Flat { base: x, q: q.clone() }, Piece::Flat { base: other, q }]
                }
                AddClosure::Unresolved { real_rank, rational_rank, .. } => {
                    return Err(ClassifyError::UnresolvedClosure {
                        real_rank: *real_rank,
                        rational_rank: *rational_rank,
                    }
                    .into())
                }
            }
        }
    })
}

fn piece_distance(piece: &Piece, p: &[f64]) -> f64 {
    match piece {
        Piece::Flat { base, q } => norm(&reject(&sub(p, base), q)),
        Piece::HalfFlat { base, q, u } => {
            let d = sub(p, base);
            let t = dot(&d, u);
            let off = norm(&reject(&d, q));
            if t >= 0.0 {
                off
            } else {
                // nearest point is on the boundary flat
                (off * off + t * t).sqrt()
            }
        }
        Piece::Lattice { origin, basis } => lattice_distance(p, origin, basis),
        Piece::Cyclic { base, u, q, lambda } => {
            let d = reject(&sub(p, base), q);
            let uu = dot(u, u);
            let t_star = dot(&d, u) / uu;
            lambda
                .nearby_elements_f64(t_star)
                .into_iter()
                .map(|t| norm(&axpy(-t, u, &d)))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

fn piece_probes(piece: &Piece, w: f64, h: f64) -> Vec<Vec<f64>> {
    match piece {
        Piece::Flat { base, q } => flat_probes(base, q, w, h),
        Piece::HalfFlat { base, q, u } => {
            let mut pts = flat_probes(base, q, w, h);
            pts.retain(|p| dot(&sub(p, base), u) >= -1e-12);
            pts
        }
        Piece::Lattice { origin, basis } => lattice_points_in_window(origin, basis, w, 2_000_000),
        Piece::Cyclic { base, u, q, lambda } => {
            let n = base.len() as f64;
            let base_off = norm(&reject(base, q));
            let un = norm(u);
            let t_max = (w * n.sqrt() + base_off) / un;
            let mut out = Vec::new();
            for t in slice_parameters(lambda, un, t_max, h / 4.0) {
                out.extend(flat_probes(&axpy(t, u, base), q, w, h));
            }
            out
        }
    }
}

/// Largest distance from a sample to the predicted set.
pub fn deviation_from_prediction(samples: &[Vec<f64>], desc: &OrbitClosureDescription) -> Result<f64, SimError> {
    let ps = pieces(desc)?;
    for s in samples {
        if s.len() != desc.ambient_dim() {
            return Err(SimError::DimensionMismatch { expected: desc.ambient_dim(), got: s.len() });
        }
    }
    Ok(samples
        .par_iter()
        .map(|s| ps.iter().map(|pc| piece_distance(pc, s)).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max))
}

/// Sample lookup by cells of side `eps`.
struct SampleGrid<'a> {
    eps: f64,
    cells: HashMap<Vec<i64>, Vec<&'a [f64]>>,
}

impl<'a> SampleGrid<'a> {
    fn new(samples: &'a [Vec<f64>], eps: f64) -> Self {
        let mut cells: HashMap<Vec<i64>, Vec<&[f64]>> = HashMap::new();
        for s in samples {
            cells.entry(Self::key(s, eps)).or_default().push(s);
        }
        SampleGrid { eps, cells }
    }

    fn key(p: &[f64], eps: f64) -> Vec<i64> {
        p.iter().map(|c| (c / eps).floor() as i64).collect()
    }

    fn has_sample_near(&self, p: &[f64]) -> bool {
        let k = Self::key(p, self.eps);
        let n = k.len();
        (0..3usize.pow(n as u32)).any(|code| {
            let mut rest = code;
            let cell: Vec<i64> = k
                .iter()
                .map(|&ki| {
                    let off = (rest % 3) as i64 - 1;
                    rest /= 3;
                    ki + off
                })
                .collect();
            self.cells
                .get(&cell)
                .is_some_and(|v| v.iter().any(|s| norm(&sub(s, p)) <= self.eps))
        })
    }
}

/// Fraction of grid probes of the predicted set (inside the window) that
/// have a sample within `eps`. Returns the fraction and the probe count.
pub fn coverage_of_prediction(
    samples: &[Vec<f64>],
    desc: &OrbitClosureDescription,
    window: f64,
    h: f64,
    eps: f64,
) -> Result<(f64, usize), SimError> {
    let mut probes: Vec<Vec<f64>> = Vec::new();
    for pc in pieces(desc)? {
        probes.extend(piece_probes(&pc, window, h));
    }
    if probes.is_empty() {
        return Ok((1.0, 0));
    }
    let grid = SampleGrid::new(samples, eps);
    let hit = probes.par_iter().filter(|p| grid.has_sample_near(p)).count();
    Ok((hit as f64 / probes.len() as f64, probes.len()))
}

pub fn density_report(
    sample: &OrbitSample,
    desc: &OrbitClosureDescription,
    window: f64,
    h: f64,
    eps: f64,
) -> Result<DensityReport, SimError> {
    let max_deviation = deviation_from_prediction(&sample.points, desc)?;
    let (coverage, probes) = coverage_of_prediction(&sample.points, desc, window, h, eps)?;
    Ok(DensityReport { max_deviation, coverage, probes, retained: sample.points.len(), discarded: sample.discarded })
}

/// Float image of an exact point.
pub fn point_to_f64(x: &Vector) -> Vec<f64> {
    to_f64_vec(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QBound {
    Fixed(u64),
    /// Enough multiples to reach the interval ends for every exponent.
    Adaptive,
}

/// Whether `{q·λ^p(1 − λ^p)}` over the given exponent range and multipliers
/// has a value within `eps` of every point of the grid on `[u, v]` of step `eps`.
pub fn hlambda_oracle(lambda: f64, p_range: (i32, i32), q_bound: QBound, interval: (f64, f64), eps: f64) -> bool {
    let (p_min, p_max) = p_range;
    let (u, v) = interval;
    if !(lambda > 1.0) || p_min > p_max || !(eps > 0.0) || u > v {
        return false;
    }
    let reach = u.abs().max(v.abs());
    let steps: Vec<(f64, f64)> = (p_min..=p_max)
        .filter_map(|p| {
            let lp = lambda.powi(p);
            let s = lp * (1.0 - lp);
            if s == 0.0 || !s.is_finite() {
                return None;
            }
            let bound = match q_bound {
                QBound::Fixed(b) => b as f64,
                QBound::Adaptive => (reach / s.abs()).ceil() + 1.0,
            };
            Some((s, bound))
        })
        .collect();
    let count = ((v - u) / eps).floor() as i64;
    (0..=count).all(|i| {
        let g = u + i as f64 * eps;
        // q = 0 gives the value 0
        g.abs() <= eps
            || steps.iter().any(|&(s, bound)| {
                let q = (g / s).round().clamp(-bound, bound);
                (q * s - g).abs() <= eps
            })
    })
}
