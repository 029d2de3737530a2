//! Fixed-step numerical integration of slice flows, with return detection
//! in the quotient (torus or Heisenberg nilmanifold).

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::hamiltonian::BumpSpec;
use super::{CollarError, CollarFamily, Result};
use crate::qlin::{rational_from_f64, rational_to_f64, ScalarK, Tag};

/// A point of `T^m × S¹ × (−ε, ε)` in floating point.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NilPoint {
    pub base: Vec<f64>,
    pub fiber: f64,
    pub s: f64,
}

impl NilPoint {
    pub fn origin(m: usize) -> Self {
        NilPoint { base: vec![0.0; m], fiber: 0.0, s: 0.0 }
    }
}

/// The field `speed · (c, 1 − Σ_{i<j} C_ij x_i c_j)` on `T^m × S¹`, the
/// horizontal lift of the constant base direction `c` plus the fiber
/// generator, in the gauge `α = dθ + Σ_{i<j} C_ij x_i dx^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceFlow {
    pub c: Vec<f64>,
    /// Curvature entry `C₁₂` for `m = 2` (equal to `−euler_k`); zero for a
    /// trivial bundle. Must be an integer for the quotient to exist.
    pub curvature: i64,
    pub speed: f64,
}

impl SliceFlow {
    pub fn new(c: Vec<f64>, euler_k: i64) -> Self {
        SliceFlow { c, curvature: -euler_k, speed: 1.0 }
    }

    fn m(&self) -> usize {
        self.c.len()
    }

    fn deriv(&self, y: &[f64], out: &mut [f64]) {
        let m = self.m();
        for i in 0..m {
            out[i] = self.speed * self.c[i];
        }
        let mut fib = 1.0;
        if self.curvature != 0 {
            fib -= self.curvature as f64 * y[0] * self.c[1];
        }
        out[m] = self.speed * fib;
    }

    fn is_stationary(&self) -> bool {
        self.speed == 0.0
    }

    /// `g·y` for the deck transformation `g = (n_1, …, n_m, n_θ)`.
    fn act(&self, n: &[i64], y: &[f64], out: &mut [f64]) {
        let m = self.m();
        for i in 0..m {
            out[i] = y[i] + n[i] as f64;
        }
        let mut th = y[m] + n[m] as f64;
        if self.curvature != 0 {
            th -= self.curvature as f64 * n[0] as f64 * y[1];
        }
        out[m] = th;
    }

    /// Representative of `y` in the fundamental domain `[0,1)^{m+1}`.
    pub fn reduce(&self, y: &[f64]) -> Vec<f64> {
        let m = self.m();
        let mut n = vec![0i64; m + 1];
        for i in 0..m {
            n[i] = -libm::floor(y[i]) as i64;
        }
        let mut out = vec![0.0; m + 1];
        self.act(&n, y, &mut out);
        let th = out[m];
        out[m] = th - libm::floor(th);
        out
    }

    /// Deck transformation bringing `q` nearest to `p`, and the squared
    /// distance achieved.
    fn nearest(&self, p: &[f64], q: &[f64], buf: &mut [f64], best: &mut [i64]) -> f64 {
        let m = self.m();
        let mut n = vec![0i64; m + 1];
        for i in 0..m {
            n[i] = libm::round(p[i] - q[i]) as i64;
        }
        let mut best_d = f64::INFINITY;
        let offsets: &[i64] = if self.curvature != 0 { &[-1, 0, 1] } else { &[0] };
        for &o0 in offsets {
            for &o1 in offsets {
                let mut cand = n.clone();
                cand[0] += o0;
                if m > 1 {
                    cand[1] += o1;
                } else if o1 != 0 {
                    continue;
                }
                cand[m] = 0;
                self.act(&cand, q, buf);
                cand[m] = libm::round(p[m] - buf[m]) as i64;
                self.act(&cand, q, buf);
                let d: f64 = (0..=m).map(|i| (buf[i] - p[i]) * (buf[i] - p[i])).sum();
                if d < best_d {
                    best_d = d;
                    best.copy_from_slice(&cand);
                }
            }
        }
        best_d
    }
}

/// Integration and detection parameters.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimOptions {
    pub horizon: f64,
    pub step: f64,
    /// Return tolerance in the quotient metric.
    pub tau: f64,
    /// Upper bound on the number of recorded trajectory samples.
    pub max_samples: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { horizon: 100.0, step: 1e-3, tau: 1e-6, max_samples: 20_000 }
    }
}

/// Sample of a trajectory, reduced to the fundamental domain.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectorySample {
    pub t: f64,
    pub base: Vec<f64>,
    pub fiber: f64,
    pub s: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trajectory {
    pub m: usize,
    pub samples: Vec<TrajectorySample>,
}

/// Whether a return to the start was observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Closure {
    Closed,
    NotClosed,
    /// The field vanishes; every point is fixed.
    Stationary,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetectionReport {
    pub closed: Closure,
    /// Time of the first return within `τ`, when one was detected.
    pub period: Option<f64>,
    /// Smallest quotient distance to the start after first leaving the
    /// `2τ`-ball (`None` if the trajectory never left it).
    pub min_return_distance: Option<f64>,
    /// Time at which `min_return_distance` was attained.
    pub min_return_time: Option<f64>,
    pub steps: usize,
}

fn rk4(flow: &SliceFlow, y: &[f64], h: f64, k: &mut [Vec<f64>; 4], tmp: &mut [f64], out: &mut [f64]) {
    let n = y.len();
    flow.deriv(y, &mut k[0]);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k[0][i];
    }
    flow.deriv(tmp, &mut k[1]);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k[1][i];
    }
    flow.deriv(tmp, &mut k[2]);
    for i in 0..n {
        tmp[i] = y[i] + h * k[2][i];
    }
    flow.deriv(tmp, &mut k[3]);
    for i in 0..n {
        out[i] = y[i] + h / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
    }
}

/// Closest approach of the segment `da → db` (offsets from the start) to
/// the origin: `(distance, λ ∈ [0,1])`.
fn closest_on_segment(da: &[f64], db: &[f64]) -> (f64, f64) {
    let mut dd = 0.0;
    let mut ad = 0.0;
    for i in 0..da.len() {
        let d = db[i] - da[i];
        dd += d * d;
        ad += da[i] * d;
    }
    let lam = if dd > 0.0 { (-ad / dd).clamp(0.0, 1.0) } else { 0.0 };
    let dist2: f64 = (0..da.len()).map(|i| {
        let v = da[i] + lam * (db[i] - da[i]);
        v * v
    }).sum();
    (libm::sqrt(dist2), lam)
}

/// Integrates `flow` from `x0` with fixed-step RK4 in the universal cover
/// and detects the first return within `τ` of the start in the quotient.
pub fn simulate(flow: &SliceFlow, x0: &NilPoint, opts: &SimOptions) -> Result<(Trajectory, DetectionReport)> {
    let m = flow.m();
    if x0.base.len() != m {
        return Err(CollarError::Invalid(alloc::format!("start point needs {m} base coordinates")));
    }
    if !(opts.step > 0.0 && opts.horizon > 0.0 && opts.tau > 0.0) {
        return Err(CollarError::Invalid("horizon, step and tau must be positive".to_string()));
    }
    if opts.step >= opts.horizon {
        return Err(CollarError::StepTooLarge);
    }
    if flow.curvature != 0 && m != 2 {
        return Err(CollarError::Invalid("nontrivial bundles are modelled over T^2 only".to_string()));
    }
    let mut y: Vec<f64> = x0.base.iter().copied().chain([x0.fiber]).collect();
    let p0 = flow.reduce(&y);
    y.clone_from(&p0);
    let sample = |t: f64, y: &[f64]| {
        let r = flow.reduce(y);
        TrajectorySample { t, base: r[..m].to_vec(), fiber: r[m], s: x0.s }
    };
    let mut traj = Trajectory { m, samples: vec![sample(0.0, &y)] };
    if flow.is_stationary() {
        let report = DetectionReport {
            closed: Closure::Stationary,
            period: None,
            min_return_distance: Some(0.0),
            min_return_time: None,
            steps: 0,
        };
        return Ok((traj, report));
    }
    let steps = libm::ceil(opts.horizon / opts.step) as usize;
    let record_every = (steps / opts.max_samples.max(1)).max(1);
    let mut k: [Vec<f64>; 4] = [vec![0.0; m + 1], vec![0.0; m + 1], vec![0.0; m + 1], vec![0.0; m + 1]];
    let mut tmp = vec![0.0; m + 1];
    let mut next = vec![0.0; m + 1];
    let mut ga = vec![0.0; m + 1];
    let mut gb = vec![0.0; m + 1];
    let mut da = vec![0.0; m + 1];
    let mut db = vec![0.0; m + 1];
    let mut g = vec![0i64; m + 1];
    let escape2 = 4.0 * opts.tau * opts.tau;
    let mut escaped = false;
    let mut min_dist: Option<(f64, f64)> = None;
    let mut report = DetectionReport {
        closed: Closure::NotClosed,
        period: None,
        min_return_distance: None,
        min_return_time: None,
        steps: 0,
    };
    let h = opts.step;
    for n in 0..steps {
        let t = n as f64 * h;
        rk4(flow, &y, h, &mut k, &mut tmp, &mut next);
        report.steps = n + 1;
        if !escaped {
            if flow.nearest(&p0, &next, &mut gb, &mut g) > escape2 {
                escaped = true;
            }
        } else {
            flow.nearest(&p0, &y, &mut ga, &mut g);
            flow.act(&g, &next, &mut gb);
            for i in 0..=m {
                da[i] = ga[i] - p0[i];
                db[i] = gb[i] - p0[i];
            }
            let (d, lam) = closest_on_segment(&da, &db);
            if min_dist.is_none_or(|(best, _)| d < best) {
                min_dist = Some((d, t + lam * h));
            }
            if d < opts.tau {
                report.closed = Closure::Closed;
                report.period = Some(t + lam * h);
                core::mem::swap(&mut y, &mut next);
                traj.samples.push(sample(t + h, &y));
                break;
            }
        }
        core::mem::swap(&mut y, &mut next);
        if (n + 1) % record_every == 0 {
            traj.samples.push(sample(t + h, &y));
        }
    }
    report.min_return_distance = min_dist.map(|(d, _)| d);
    report.min_return_time = min_dist.map(|(_, t)| t);
    Ok((traj, report))
}

/// Numeric value of a tagged scalar; every irrational tag must be bound.
pub fn eval_scalar(x: &ScalarK, bindings: &BTreeMap<Tag, f64>) -> Result<f64> {
    x.eval_f64(bindings).ok_or_else(|| {
        let missing = x.irrational_tags().find(|t| !bindings.contains_key(*t)).map(Tag::to_string);
        CollarError::UnboundTag(missing.unwrap_or_default())
    })
}

/// The slice flow of a family at parameters `(u, s)`: the direction is
/// solved exactly, then evaluated with the given tag bindings.
pub fn slice_flow(fam: &CollarFamily, u: &ScalarK, s: f64, bindings: &BTreeMap<Tag, f64>) -> Result<SliceFlow> {
    let s_exact = rational_from_f64(s).ok_or_else(|| CollarError::Invalid("s must be finite".to_string()))?;
    let c = fam.kernel_direction(u, &ScalarK::rational(s_exact))?;
    let cf = c.iter().map(|x| eval_scalar(x, bindings)).collect::<Result<Vec<_>>>()?;
    Ok(SliceFlow::new(cf, fam.euler_k))
}

/// Simulates the characteristic flow on the slice through `x0` (unit fiber
/// speed).
pub fn simulate_flow(
    fam: &CollarFamily,
    u: &ScalarK,
    bindings: &BTreeMap<Tag, f64>,
    x0: &NilPoint,
    opts: &SimOptions,
) -> Result<(Trajectory, DetectionReport)> {
    if libm::fabs(x0.s) >= rational_to_f64(&fam.eps) {
        return Err(CollarError::OutsideCollar);
    }
    let flow = slice_flow(fam, u, x0.s, bindings)?;
    simulate(&flow, x0, opts)
}

/// Simulates the Hamiltonian flow of `H = f(s)`: the slice flow scaled by
/// `f′(s)`, stationary where `f′(s) = 0`.
pub fn simulate_hamiltonian(
    fam: &CollarFamily,
    u: &ScalarK,
    bump: &BumpSpec,
    bindings: &BTreeMap<Tag, f64>,
    x0: &NilPoint,
    opts: &SimOptions,
) -> Result<(Trajectory, DetectionReport)> {
    if libm::fabs(x0.s) >= rational_to_f64(&fam.eps) {
        return Err(CollarError::OutsideCollar);
    }
    let mut flow = slice_flow(fam, u, x0.s, bindings)?;
    let s_exact = rational_from_f64(x0.s).ok_or_else(|| CollarError::Invalid("s must be finite".to_string()))?;
    flow.speed = rational_to_f64(&bump.derivative(&s_exact));
    simulate(&flow, x0, opts)
}

/// Partial quotients `[a₀; a₁, a₂, …]` of `x`, at most `depth` of them.
pub fn continued_fraction(x: f64, depth: usize) -> Vec<i64> {
    let mut out = Vec::new();
    let mut r = x;
    for _ in 0..depth {
        let a = libm::floor(r);
        out.push(a as i64);
        let frac = r - a;
        if frac < 1e-12 {
            break;
        }
        r = 1.0 / frac;
        if !r.is_finite() || r > 1e15 {
            break;
        }
    }
    out
}

/// Convergents `p_k/q_k` of a continued fraction.
pub fn convergents(cf: &[i64]) -> Vec<(i64, i64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, 0i64, 1i64);
    let mut out = Vec::with_capacity(cf.len());
    for &a in cf {
        let p = a.saturating_mul(p0).saturating_add(p1);
        let q = a.saturating_mul(q0).saturating_add(q1);
        out.push((p, q));
        p1 = p0;
        q1 = q0;
        p0 = p;
        q0 = q;
    }
    out
}

/// Distance from `x` to the nearest integer.
pub fn dist_to_int(x: f64) -> f64 {
    libm::fabs(x - libm::round(x))
}

/// For the trivial-bundle flow with a single irrational component `x`
/// (all others integers), returns happen at integer times `q`, at distance
/// `‖q·x‖`. By best approximation, the minimum over `1 ≤ q ≤ horizon` is
/// attained at a convergent denominator; returns `(q, ‖q·x‖)`.
pub fn cf_min_return(x: f64, horizon: f64, depth: usize) -> Option<(i64, f64)> {
    let cf = continued_fraction(x, depth);
    convergents(&cf)
        .into_iter()
        .map(|(_, q)| q)
        .filter(|&q| q >= 1 && (q as f64) <= horizon)
        .map(|q| (q, dist_to_int(q as f64 * x)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}
