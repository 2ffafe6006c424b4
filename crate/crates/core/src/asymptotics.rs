//! Numerical engine for the asymptotic limits of the DOS statistics.
//!
//! For an analytic p-value distribution F, the empirical DOS sequence
//! approximates the objective
//!
//! ```text
//! h_alpha(t) = (F^{-1}(2t) - 2 F^{-1}(t)) / t^alpha,   t in (0, 1/2],
//! ```
//!
//! whose maximizer `t_tilde` is the limiting change-point location. The
//! limiting proportion estimate (the "estimable proportion") is
//! `(t_tilde - F^{-1}(t_tilde)) / (1 - F^{-1}(t_tilde))`.
//!
//! `check_a2` diagnoses objectives whose maximum is not a unique interior
//! point (too-weak signal makes h increase across the whole domain; mixtures
//! of uniforms can make it constant on an interval at its maximum).

use std::fmt;

use crate::error::{Error, Result};
use crate::normal::{std_normal_quantile, std_normal_sf};

/// Lower end of the search domain for t; h can be ill-conditioned at 0.
pub const T_EPSILON: f64 = 1e-4;

/// Coarse grid size used by [`ideal_changepoint`] before refinement.
const IDEAL_GRID: usize = 2000;

/// An analytic p-value distribution with CDF and quantile evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileModel {
    kind: ModelKind,
}

#[derive(Debug, Clone, PartialEq)]
enum ModelKind {
    /// F(x) = pi1·Psi_mu1(Psi0^{-1}(x)) + (1−pi1)·x.
    GaussianMixture { pi1: f64, mu1: f64 },
    /// F(x) = pi1·min(x/b, 1) + (1−pi1)·x.
    UniformMixture { pi1: f64, b: f64 },
    /// F(x) = pi1·Psi_mu1(Psi0^{-1}(x)) + (1−pi1)·Psi_mu0(Psi0^{-1}(x)),
    /// the composite-null model with superuniform true nulls (mu0 ≤ 0).
    CompositeGaussian { pi1: f64, mu0: f64, mu1: f64 },
    /// Piecewise-linear quantile function; `breaks` are the interior
    /// change-points in t, `slopes` covers every segment (the closing
    /// segment's slope is derived so that Q(1) = 1), and `q_nodes` caches Q
    /// at 0, each break, and 1.
    PiecewiseLinear {
        breaks: Vec<f64>,
        slopes: Vec<f64>,
        q_nodes: Vec<f64>,
    },
}

/// Survival of N(mu, 1) at the null survival-quantile of x, i.e.
/// Psi_mu(Psi0^{-1}(x)) for x in (0, 1).
fn psi_mixture_term(mu: f64, x: f64) -> f64 {
    let q = -std_normal_quantile(x).expect("x checked in (0,1)");
    std_normal_sf(q - mu)
}

impl QuantileModel {
    pub fn gaussian_mixture(pi1: f64, mu1: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&pi1) || pi1.is_nan() {
            return Err(Error::BadModel(format!("pi1 must lie in [0, 1), got {pi1}")));
        }
        if mu1 <= 0.0 || mu1.is_nan() {
            return Err(Error::BadModel(format!("mu1 must be > 0, got {mu1}")));
        }
        Ok(Self {
            kind: ModelKind::GaussianMixture { pi1, mu1 },
        })
    }

    pub fn uniform_mixture(pi1: f64, b: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&pi1) || pi1.is_nan() {
            return Err(Error::BadModel(format!("pi1 must lie in [0, 1), got {pi1}")));
        }
        if b <= 0.0 || b >= 1.0 || b.is_nan() {
            return Err(Error::BadModel(format!("b must lie in (0, 1), got {b}")));
        }
        Ok(Self {
            kind: ModelKind::UniformMixture { pi1, b },
        })
    }

    pub fn composite_gaussian(pi1: f64, mu0: f64, mu1: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&pi1) || pi1.is_nan() {
            return Err(Error::BadModel(format!("pi1 must lie in [0, 1), got {pi1}")));
        }
        if mu1 <= 0.0 || mu1.is_nan() {
            return Err(Error::BadModel(format!("mu1 must be > 0, got {mu1}")));
        }
        if mu0 > 0.0 || mu0.is_nan() {
            return Err(Error::BadModel(format!("mu0 must be <= 0, got {mu0}")));
        }
        Ok(Self {
            kind: ModelKind::CompositeGaussian { pi1, mu0, mu1 },
        })
    }

    /// Piecewise-linear quantile function. `breaks` are strictly increasing
    /// interior points of (0, 1); `slopes[i]` is the quantile slope on the
    /// i-th segment. The slope of the final segment (from the last break to
    /// 1) is derived so the quantile closes at Q(1) = 1.
    pub fn piecewise_linear(breaks: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        if breaks.is_empty() || slopes.len() != breaks.len() {
            return Err(Error::BadModel(
                "need one slope per segment left of each break".into(),
            ));
        }
        let ascending = breaks.windows(2).all(|w| w[0] < w[1]);
        if !ascending || breaks[0] <= 0.0 || *breaks.last().unwrap() >= 1.0 {
            return Err(Error::BadModel(
                "breaks must be strictly increasing inside (0, 1)".into(),
            ));
        }
        if slopes.iter().any(|&s| s <= 0.0 || s.is_nan()) {
            return Err(Error::BadModel("slopes must be positive".into()));
        }
        let mut q_nodes = vec![0.0];
        let mut prev_t = 0.0;
        for (i, &b) in breaks.iter().enumerate() {
            let q = q_nodes[i] + slopes[i] * (b - prev_t);
            q_nodes.push(q);
            prev_t = b;
        }
        let last_q = *q_nodes.last().unwrap();
        if last_q >= 1.0 {
            return Err(Error::BadModel(
                "quantile exceeds 1 before the final segment".into(),
            ));
        }
        let closing = (1.0 - last_q) / (1.0 - prev_t);
        let mut slopes = slopes;
        slopes.push(closing);
        q_nodes.push(1.0);
        Ok(Self {
            kind: ModelKind::PiecewiseLinear {
                breaks,
                slopes,
                q_nodes,
            },
        })
    }

    /// F(x) for x in [0, 1]. Exact for the uniform and piecewise kinds.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) || x.is_nan() {
            return Err(Error::BadX(x));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        if x == 1.0 {
            return Ok(1.0);
        }
        Ok(match &self.kind {
            ModelKind::GaussianMixture { pi1, mu1 } => {
                pi1 * psi_mixture_term(*mu1, x) + (1.0 - pi1) * x
            }
            ModelKind::UniformMixture { pi1, b } => {
                pi1 * (x / b).min(1.0) + (1.0 - pi1) * x
            }
            ModelKind::CompositeGaussian { pi1, mu0, mu1 } => {
                pi1 * psi_mixture_term(*mu1, x) + (1.0 - pi1) * psi_mixture_term(*mu0, x)
            }
            ModelKind::PiecewiseLinear {
                breaks,
                slopes,
                q_nodes,
            } => {
                // Invert the piecewise-linear quantile segment containing x.
                let seg = q_nodes[1..].partition_point(|&q| q < x);
                let t0 = if seg == 0 { 0.0 } else { breaks[seg - 1] };
                t0 + (x - q_nodes[seg]) / slopes[seg]
            }
        })
    }

    /// F^{-1}(t) for t in [0, 1]. Closed form for the piecewise-linear
    /// kinds, bisection on the guaranteed bracket [0, 1] otherwise.
    pub fn quantile(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) || t.is_nan() {
            return Err(Error::BadT(t));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        if t == 1.0 {
            return Ok(1.0);
        }
        Ok(match &self.kind {
            ModelKind::UniformMixture { pi1, b } => {
                let knee = pi1 + (1.0 - pi1) * b;
                if t <= knee {
                    t / (pi1 / b + (1.0 - pi1))
                } else {
                    (t - pi1) / (1.0 - pi1)
                }
            }
            ModelKind::PiecewiseLinear {
                breaks,
                slopes,
                q_nodes,
            } => {
                let seg = breaks.partition_point(|&b| b < t);
                let t0 = if seg == 0 { 0.0 } else { breaks[seg - 1] };
                q_nodes[seg] + slopes[seg] * (t - t0)
            }
            _ => self.bisect_quantile(t),
        })
    }

    /// Bisection until the bracket is exhausted at f64 resolution; the CDF
    /// slope is bounded below by pi0 on the relevant kinds, so the residual
    /// |cdf(result) − t| ends far below the 1e-10 contract.
    fn bisect_quantile(&self, t: f64) -> f64 {
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f = self.cdf(mid).expect("mid stays inside [0, 1]");
            if f < t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            ModelKind::GaussianMixture { pi1, mu1 } => {
                format!("gaussian(pi1={pi1}, mu1={mu1})")
            }
            ModelKind::UniformMixture { pi1, b } => format!("uniform(pi1={pi1}, b={b})"),
            ModelKind::CompositeGaussian { pi1, mu0, mu1 } => {
                format!("composite(pi1={pi1}, mu0={mu0}, mu1={mu1})")
            }
            ModelKind::PiecewiseLinear { breaks, slopes, .. } => {
                format!("piecewise(breaks={breaks:?}, slopes={slopes:?})")
            }
        }
    }
}

/// The objective h_alpha(t) = (F^{-1}(2t) − 2 F^{-1}(t)) / t^alpha for
/// t in (0, 1/2].
pub fn h_value(model: &QuantileModel, alpha: f64, t: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&alpha) || alpha.is_nan() {
        return Err(Error::BadAlpha(alpha));
    }
    if t <= 0.0 || t > 0.5 || t.is_nan() {
        return Err(Error::BadT(t));
    }
    Ok((model.quantile(2.0 * t)? - 2.0 * model.quantile(t)?) / t.powf(alpha))
}

/// Classification of the objective's maximum over the search grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum A2Status {
    /// Unique interior maximum: the asymptotic limits are well defined.
    Ok,
    /// h is non-decreasing over the whole domain (signal too weak).
    IncreasingThroughout,
    /// ≥ 3 adjacent grid points within 1e-9 of the maximum.
    PlateauAtMax,
    /// Maximum attained at a boundary of the search domain.
    BoundaryMax,
}

impl fmt::Display for A2Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            A2Status::Ok => "ok",
            A2Status::IncreasingThroughout => "increasing_throughout",
            A2Status::PlateauAtMax => "plateau_at_max",
            A2Status::BoundaryMax => "boundary_max",
        };
        f.write_str(s)
    }
}

/// Grid diagnostic report for the (A2) assumption.
#[derive(Debug, Clone, PartialEq)]
pub struct A2Report {
    pub status: A2Status,
    /// Grid location of the maximum.
    pub t_at_max: f64,
    pub h_max: f64,
    pub grid_size: usize,
}

impl A2Report {
    pub fn is_ok(&self) -> bool {
        self.status == A2Status::Ok
    }
}

/// Asymptotic limits at a model: the ideal change-point location, the
/// threshold F^{-1}(t_tilde), the estimable proportion, and the attained
/// objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealQuantities {
    pub t_tilde: f64,
    pub quantile_at_t: f64,
    pub pi1_estimable: f64,
    pub h_at_max: f64,
}

struct GridScan {
    ts: Vec<f64>,
    hs: Vec<f64>,
    argmax: usize,
}

fn scan_h(model: &QuantileModel, alpha: f64, grid_size: usize) -> Result<GridScan> {
    let step = (0.5 - T_EPSILON) / (grid_size - 1) as f64;
    let mut ts = Vec::with_capacity(grid_size);
    let mut hs = Vec::with_capacity(grid_size);
    let mut argmax = 0usize;
    for i in 0..grid_size {
        let t = if i + 1 == grid_size {
            0.5
        } else {
            T_EPSILON + step * i as f64
        };
        let h = h_value(model, alpha, t)?;
        if h > hs.get(argmax).copied().unwrap_or(f64::NEG_INFINITY) {
            argmax = i;
        }
        ts.push(t);
        hs.push(h);
    }
    Ok(GridScan { ts, hs, argmax })
}

const PLATEAU_TOL: f64 = 1e-9;
const PLATEAU_RUN: usize = 3;
const MONOTONE_SLACK: f64 = 1e-12;

fn classify(scan: &GridScan) -> A2Status {
    let hs = &scan.hs;
    let last = hs.len() - 1;
    let h_max = hs[scan.argmax];

    let nondecreasing = hs.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK);
    if nondecreasing {
        return A2Status::IncreasingThroughout;
    }

    // Longest run of consecutive near-maximal points containing the argmax.
    let near = |i: usize| h_max - hs[i] <= PLATEAU_TOL;
    let mut run_lo = scan.argmax;
    while run_lo > 0 && near(run_lo - 1) {
        run_lo -= 1;
    }
    let mut run_hi = scan.argmax;
    while run_hi < last && near(run_hi + 1) {
        run_hi += 1;
    }
    if run_hi - run_lo + 1 >= PLATEAU_RUN {
        return A2Status::PlateauAtMax;
    }

    if scan.argmax == 0 || scan.argmax == last {
        return A2Status::BoundaryMax;
    }
    A2Status::Ok
}

/// Evaluate h on a grid over [1e-4, 1/2] and classify the maximum.
///
/// `grid_size` must be at least 100.
pub fn check_a2(model: &QuantileModel, alpha: f64, grid_size: usize) -> Result<A2Report> {
    assert!(grid_size >= 100, "grid_size must be at least 100");
    let scan = scan_h(model, alpha, grid_size)?;
    Ok(A2Report {
        status: classify(&scan),
        t_at_max: scan.ts[scan.argmax],
        h_max: scan.hs[scan.argmax],
        grid_size,
    })
}

/// Golden-section maximization of `f` on [a, b]; returns (argmax, max).
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximize h over [1e-4, 1/2]: 2000-point coarse grid, then golden-section
/// refinement of the bracketing interval. Errors with `A2Violated` when the
/// grid scan shows a boundary maximum, a plateau, or a globally increasing
/// objective.
pub fn ideal_changepoint(model: &QuantileModel, alpha: f64) -> Result<IdealQuantities> {
    let scan = scan_h(model, alpha, IDEAL_GRID)?;
    let status = classify(&scan);
    if status != A2Status::Ok {
        return Err(Error::A2Violated(status));
    }
    let lo = scan.ts[scan.argmax - 1];
    let hi = scan.ts[scan.argmax + 1];
    let objective = |t: f64| h_value(model, alpha, t).expect("t stays inside (0, 1/2]");
    let (t_tilde, h_at_max) = golden_max(objective, lo, hi, 1e-8);
    let quantile_at_t = model.quantile(t_tilde)?;
    let pi1_estimable = (t_tilde - quantile_at_t) / (1.0 - quantile_at_t);
    Ok(IdealQuantities {
        t_tilde,
        quantile_at_t,
        pi1_estimable,
        h_at_max,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn remark_piecewise() -> QuantileModel {
        QuantileModel::piecewise_linear(vec![0.1, 0.2, 0.3, 0.4], vec![0.1, 0.2, 0.4, 0.9])
            .unwrap()
    }

    #[test]
    fn uniform_mixture_cdf_and_quantile_are_exact() {
        let m = QuantileModel::uniform_mixture(0.2, 0.1).unwrap();
        assert!((m.cdf(0.1).unwrap() - 0.28).abs() < 1e-15);
        assert!((m.quantile(0.28).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(m.cdf(0.0).unwrap(), 0.0);
        assert_eq!(m.cdf(1.0).unwrap(), 1.0);
        assert_eq!(m.quantile(0.0).unwrap(), 0.0);
        assert_eq!(m.quantile(1.0).unwrap(), 1.0);
    }

    #[test]
    fn gaussian_cdf_boundaries() {
        let m = QuantileModel::gaussian_mixture(0.1, 3.0).unwrap();
        assert_eq!(m.cdf(0.0).unwrap(), 0.0);
        assert_eq!(m.cdf(1.0).unwrap(), 1.0);
    }

    #[test]
    fn gaussian_cdf_matches_closed_form_reference() {
        // Frozen 30-digit reference for F(0.05), pi1 = 0.1, mu1 = 3:
        // z = PhiInv(0.95) = 1.64485362695147271, Psi_3(z) = Phi(3 - z),
        // F = 0.1 * Psi_3(z) + 0.9 * 0.05.
        let m = QuantileModel::gaussian_mixture(0.1, 3.0).unwrap();
        let want = 0.136231453675029643065289099707;
        assert!((m.cdf(0.05).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn gaussian_cdf_matches_quadrature_oracle() {
        // Independent oracle: Psi_mu(z) = integral of the N(mu,1) density
        // over [z, z+40] by composite Simpson; z frozen from a reference
        // table rather than taken from our own quantile.
        let z = 1.64485362695147271486384890799; // PhiInv(0.95)
        let mu = 3.0;
        let simpson = |a: f64, b: f64, k: usize| {
            let h = (b - a) / k as f64;
            let f = |t: f64| (-0.5 * (t - mu) * (t - mu)).exp()
                / (2.0 * std::f64::consts::PI).sqrt();
            let mut s = f(a) + f(b);
            for j in 1..k {
                s += f(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        };
        let psi = simpson(z, z + 40.0, 8192);
        let want = 0.1 * psi + 0.9 * 0.05;
        let m = QuantileModel::gaussian_mixture(0.1, 3.0).unwrap();
        assert!(
            (m.cdf(0.05).unwrap() - want).abs() < 1e-8,
            "cdf {} vs quadrature {want}",
            m.cdf(0.05).unwrap()
        );
    }

    #[test]
    fn quantile_is_inverse_on_a_grid() {
        let models = [
            QuantileModel::gaussian_mixture(0.1, 3.0).unwrap(),
            QuantileModel::composite_gaussian(0.25, -1.0, 2.25).unwrap(),
            QuantileModel::uniform_mixture(0.2, 0.1).unwrap(),
            remark_piecewise(),
        ];
        for m in &models {
            for i in 1..40 {
                let x = i as f64 / 40.0;
                let back = m.quantile(m.cdf(x).unwrap()).unwrap();
                assert!(
                    (back - x).abs() < 1e-8,
                    "{}: x={x} back={back}",
                    m.describe()
                );
            }
        }
    }

    #[test]
    fn bisection_residual_is_tiny() {
        let m = QuantileModel::gaussian_mixture(0.1, 3.0).unwrap();
        for t in [1e-4, 0.01, 0.28, 0.49, 0.9] {
            let x = m.quantile(t).unwrap();
            assert!((m.cdf(x).unwrap() - t).abs() < 1e-10);
        }
    }

    #[test]
    fn cdf_rejects_out_of_domain() {
        let m = QuantileModel::uniform_mixture(0.2, 0.1).unwrap();
        assert!(matches!(m.cdf(-0.1), Err(Error::BadX(_))));
        assert!(matches!(m.cdf(1.1), Err(Error::BadX(_))));
        assert!(matches!(m.quantile(-0.1), Err(Error::BadT(_))));
        assert!(matches!(m.quantile(1.1), Err(Error::BadT(_))));
    }

    #[test]
    fn h_piecewise_algebra_example() {
        // uniform_mixture(0.2, 0.1), alpha = 1, t = 0.28:
        // F^{-1}(0.56) = 0.1 + (0.56 - 0.28)/0.8 = 0.45, h = 0.25/0.28.
        let m = QuantileModel::uniform_mixture(0.2, 0.1).unwrap();
        let h = h_value(&m, 1.0, 0.28).unwrap();
        assert!((h - 0.25 / 0.28).abs() < 1e-12, "h = {h}");
    }

    #[test]
    fn h_is_zero_for_pure_uniform() {
        let m = QuantileModel::uniform_mixture(0.0, 0.5).unwrap();
        for i in 1..50 {
            let t = i as f64 * 0.01;
            assert!(h_value(&m, 1.0, t).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn h_nonnegative_for_concave_cdf_models() {
        for m in [
            QuantileModel::gaussian_mixture(0.2, 2.0).unwrap(),
            QuantileModel::uniform_mixture(0.3, 0.2).unwrap(),
            remark_piecewise(),
        ] {
            for i in 1..=100 {
                let t = i as f64 * 0.005;
                assert!(
                    h_value(&m, 1.0, t).unwrap() >= -1e-12,
                    "{} at t={t}",
                    m.describe()
                );
            }
        }
    }

    #[test]
    fn h_rejects_bad_inputs() {
        let m = QuantileModel::uniform_mixture(0.2, 0.1).unwrap();
        assert!(matches!(h_value(&m, 0.3, 0.2), Err(Error::BadAlpha(_))));
        assert!(matches!(h_value(&m, 1.0, 0.0), Err(Error::BadT(_))));
        assert!(matches!(h_value(&m, 1.0, 0.6), Err(Error::BadT(_))));
    }

    #[test]
    fn ideal_changepoint_uniform_mixture_closed_form() {
        // t_tilde = pi1 + b*pi0 = 0.28, F^{-1} = b, estimable = pi1, both alphas.
        let m = QuantileModel::uniform_mixture(0.2, 0.1).unwrap();
        for alpha in [0.5, 1.0] {
            let q = ideal_changepoint(&m, alpha).unwrap();
            assert!((q.t_tilde - 0.28).abs() < 1e-4, "t={}", q.t_tilde);
            assert!((q.quantile_at_t - 0.1).abs() < 1e-4);
            assert!((q.pi1_estimable - 0.2).abs() < 1e-4);
        }
    }

    #[test]
    fn ideal_changepoint_flags_weak_gaussian_signal() {
        let m = QuantileModel::gaussian_mixture(0.2, 1.0).unwrap();
        assert_eq!(
            ideal_changepoint(&m, 1.0).unwrap_err(),
            Error::A2Violated(A2Status::IncreasingThroughout)
        );
    }

    #[test]
    fn strong_signal_recovers_nearly_all_of_pi1() {
        let m = QuantileModel::gaussian_mixture(0.1, 6.0).unwrap();
        let q = ideal_changepoint(&m, 1.0).unwrap();
        assert!(
            q.pi1_estimable / 0.1 >= 0.95,
            "ratio = {}",
            q.pi1_estimable / 0.1
        );
        // Brute-force grid oracle agrees.
        let mut best_t = 0.0;
        let mut best_h = f64::NEG_INFINITY;
        let n = 200_000;
        for i in 0..=n {
            let t = T_EPSILON + (0.5 - T_EPSILON) * i as f64 / n as f64;
            let h = h_value(&m, 1.0, t).unwrap();
            if h > best_h {
                best_h = h;
                best_t = t;
            }
        }
        assert!((best_t - q.t_tilde).abs() <= 2.0 * (0.5 - T_EPSILON) / n as f64 + 1e-9);
    }

    #[test]
    fn check_a2_classifies_the_three_regimes() {
        let weak = QuantileModel::gaussian_mixture(0.2, 1.0).unwrap();
        assert_eq!(
            check_a2(&weak, 1.0, 500).unwrap().status,
            A2Status::IncreasingThroughout
        );

        let plateau = remark_piecewise();
        assert_eq!(
            check_a2(&plateau, 1.0, 500).unwrap().status,
            A2Status::PlateauAtMax
        );

        let ok = QuantileModel::uniform_mixture(0.2, 0.1).unwrap();
        assert_eq!(check_a2(&ok, 1.0, 500).unwrap().status, A2Status::Ok);
    }

    #[test]
    fn remark_piecewise_h_is_constant_on_its_plateau() {
        // On [0.3, 0.4] the numerator equals t, so h_1 is exactly 1.
        let m = remark_piecewise();
        for t in [0.30, 0.33, 0.36, 0.40] {
            assert!((h_value(&m, 1.0, t).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(h_value(&m, 1.0, 0.45).unwrap() < 1.0);
        assert!(h_value(&m, 1.0, 0.25).unwrap() < 1.0);
    }

    #[test]
    fn piecewise_constructor_validates() {
        assert!(QuantileModel::piecewise_linear(vec![], vec![]).is_err());
        assert!(QuantileModel::piecewise_linear(vec![0.2, 0.1], vec![0.5, 0.5]).is_err());
        assert!(QuantileModel::piecewise_linear(vec![0.5], vec![2.5]).is_err());
        assert!(QuantileModel::piecewise_linear(vec![0.5], vec![-0.1]).is_err());
    }

    #[test]
    fn alpha_monotonicity_of_the_argmax() {
        // Smaller alpha shifts the maximizer right (or leaves it in place).
        for (pi1, mu1) in [(0.05, 3.0), (0.1, 3.0), (0.1, 4.0), (0.2, 3.0)] {
            let m = QuantileModel::gaussian_mixture(pi1, mu1).unwrap();
            let ok_half = check_a2(&m, 0.5, 500).unwrap().is_ok();
            let ok_one = check_a2(&m, 1.0, 500).unwrap().is_ok();
            if ok_half && ok_one {
                let t_half = ideal_changepoint(&m, 0.5).unwrap().t_tilde;
                let t_one = ideal_changepoint(&m, 1.0).unwrap().t_tilde;
                assert!(
                    t_half >= t_one - 1e-6,
                    "pi1={pi1} mu1={mu1}: {t_half} vs {t_one}"
                );
            }
        }
    }

    #[test]
    fn estimable_proportion_never_exceeds_pi1() {
        for (pi1, mu1) in [(0.05, 3.0), (0.1, 2.0), (0.1, 3.0), (0.2, 4.0)] {
            let m = QuantileModel::gaussian_mixture(pi1, mu1).unwrap();
            for alpha in [0.5, 1.0] {
                if check_a2(&m, alpha, 500).unwrap().is_ok() {
                    let q = ideal_changepoint(&m, alpha).unwrap();
                    assert!(
                        q.pi1_estimable <= pi1 + 1e-6,
                        "pi1={pi1} mu1={mu1} alpha={alpha}: {}",
                        q.pi1_estimable
                    );
                }
            }
        }
    }
}
