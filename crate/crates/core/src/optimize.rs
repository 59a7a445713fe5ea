//! Derivative-free minimizers over a small real parameter vector.
//!
//! Two methods are provided: a linear-model trust-region method in the
//! COBYLA family and a Nelder–Mead simplex. Both count every objective
//! evaluation as one iteration and record all of them.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Cobyla,
    NelderMead,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cobyla => "cobyla",
            Method::NelderMead => "nelder-mead",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cobyla" => Some(Method::Cobyla),
            "nelder-mead" | "neldermead" | "nm" => Some(Method::NelderMead),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum StopRule {
    /// Stop once the trust radius (or simplex size) has reached
    /// `final_step` and no further progress is made at that scale.
    #[default]
    TrustRadius,
    /// Additionally stop as soon as two successive improving iterates
    /// differ by less than `rel_tol · max(|E|, 1)`.
    RelativeChange,
}

impl StopRule {
    pub fn as_str(self) -> &'static str {
        match self {
            StopRule::TrustRadius => "radius",
            StopRule::RelativeChange => "relative",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "radius" | "trust-radius" => Some(StopRule::TrustRadius),
            "relative" | "relative-change" => Some(StopRule::RelativeChange),
            _ => None,
        }
    }
}

impl fmt::Display for StopRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Settings shared by both minimizers. Steps are in the units of the
/// parameters (degrees for waveplate angles).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    pub stop_rule: StopRule,
    /// Relative energy change used by [`StopRule::RelativeChange`].
    pub rel_tol: f64,
    /// Upper bound on objective evaluations.
    pub max_iterations: usize,
    pub initial_step: f64,
    /// Smallest trust radius or simplex size before giving up on progress.
    pub final_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::Cobyla,
            stop_rule: StopRule::TrustRadius,
            rel_tol: 0.01,
            max_iterations: 200,
            initial_step: 15.0,
            final_step: 0.01f64.to_degrees(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidConfig("initial_step must be positive".into()));
        }
        if !(self.final_step > 0.0 && self.final_step <= self.initial_step) {
            return Err(Error::InvalidConfig(
                "final_step must be positive and no larger than initial_step".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    /// Successive improving iterates differed by less than `rel_tol`.
    Converged,
    /// The trust radius or simplex shrank below `final_step`.
    StepTooSmall,
    MaxIterations,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::StepTooSmall => "step-too-small",
            StopReason::MaxIterations => "max-iterations",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "converged" => Some(StopReason::Converged),
            "step-too-small" => Some(StopReason::StepTooSmall),
            "max-iterations" => Some(StopReason::MaxIterations),
            _ => None,
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub x: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimization {
    pub evaluations: Vec<Evaluation>,
    pub stop: StopReason,
}

impl Minimization {
    /// Lowest recorded evaluation.
    pub fn best(&self) -> &Evaluation {
        self.evaluations
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .expect("a minimization records at least one evaluation")
    }
}

enum Halt {
    Stop(StopReason),
    Failed(Error),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Failed(e)
    }
}

struct Recorder<F> {
    f: F,
    budget: usize,
    rel_tol: Option<f64>,
    evaluations: Vec<Evaluation>,
}

impl<F: FnMut(&[f64]) -> Result<f64>> Recorder<F> {
    fn eval(&mut self, x: &[f64]) -> std::result::Result<f64, Halt> {
        if self.evaluations.len() >= self.budget {
            return Err(Halt::Stop(StopReason::MaxIterations));
        }
        let value = (self.f)(x)?;
        if !value.is_finite() {
            return Err(Halt::Failed(Error::InvalidConfig(format!(
                "objective returned a non-finite value at {x:?}"
            ))));
        }
        self.evaluations.push(Evaluation { x: x.to_vec(), value });
        Ok(value)
    }

    fn settled(&self, previous: f64, current: f64) -> bool {
        self.rel_tol
            .is_some_and(|tol| (current - previous).abs() < tol * current.abs().max(1.0))
    }
}

/// Minimizes `f` from `x0`. Errors from `f` abort the run; running out of
/// evaluations or step size is reported through [`Minimization::stop`].
pub fn minimize<F>(f: F, x0: &[f64], config: &OptimizerConfig) -> Result<Minimization>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    config.validate()?;
    if x0.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rec = Recorder {
        f,
        budget: config.max_iterations,
        rel_tol: (config.stop_rule == StopRule::RelativeChange).then_some(config.rel_tol),
        evaluations: Vec::new(),
    };
    let outcome = match config.method {
        Method::Cobyla => cobyla(&mut rec, x0, config),
        Method::NelderMead => nelder_mead(&mut rec, x0, config),
    };
    let stop = match outcome {
        Ok(reason) | Err(Halt::Stop(reason)) => reason,
        Err(Halt::Failed(e)) => return Err(e),
    };
    Ok(Minimization {
        evaluations: rec.evaluations,
        stop,
    })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn argmin(values: &[f64]) -> usize {
    (0..values.len())
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .unwrap_or(0)
}

/// Linear interpolation model on `n + 1` vertices around vertex `best`.
/// Returns the model gradient and the inverse of the displacement matrix
/// (column `k` is the dual direction of the `k`-th non-best vertex).
fn linear_model(pts: &[Vec<f64>], vals: &[f64], best: usize) -> Option<(DVector<f64>, DMatrix<f64>)> {
    let n = pts[0].len();
    let others: Vec<usize> = (0..pts.len()).filter(|&i| i != best).collect();
    let d = DMatrix::from_fn(n, n, |r, c| pts[others[r]][c] - pts[best][c]);
    let df = DVector::from_iterator(n, others.iter().map(|&i| vals[i] - vals[best]));
    let inv = d.try_inverse()?;
    let g = &inv * df;
    g.iter().all(|v| v.is_finite()).then_some((g, inv))
}

/// Least-squares linear fit `f ≈ c + g·(x − center)` over recorded points
/// within `radius` of `center`.
fn regression_gradient(history: &[Evaluation], center: &[f64], radius: f64) -> Option<DVector<f64>> {
    let n = center.len();
    let near: Vec<&Evaluation> = history.iter().filter(|e| dist(&e.x, center) <= radius).collect();
    if near.len() < n + 2 {
        return None;
    }
    let a = DMatrix::from_fn(near.len(), n + 1, |r, c| {
        if c == 0 {
            1.0
        } else {
            near[r].x[c - 1] - center[c - 1]
        }
    });
    let b = DVector::from_iterator(near.len(), near.iter().map(|e| e.value));
    let sol = a.svd(true, true).solve(&b, 1e-12).ok()?;
    let g = sol.rows(1, n).into_owned();
    g.iter().all(|v| v.is_finite()).then_some(g)
}

fn cobyla<F>(rec: &mut Recorder<F>, x0: &[f64], cfg: &OptimizerConfig) -> std::result::Result<StopReason, Halt>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let n = x0.len();
    let mut rho = cfg.initial_step;
    let mut delta = rho;
    let max_delta = 4.0 * cfg.initial_step;
    let mut pts = vec![x0.to_vec()];
    let mut vals = vec![rec.eval(x0)?];
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += rho;
        vals.push(rec.eval(&x)?);
        pts.push(x);
    }
    let mut samples = vec![1u32; n + 1];
    let mut resampled = false;

    loop {
        let best = argmin(&vals);
        let others: Vec<usize> = (0..=n).filter(|&i| i != best).collect();
        let Some((g, inv)) = linear_model(&pts, &vals, best) else {
            // Degenerate simplex: rebuild it around the best point.
            let center = pts[best].clone();
            for (k, &i) in others.iter().enumerate() {
                let mut x = center.clone();
                x[k] += rho;
                vals[i] = rec.eval(&x)?;
                pts[i] = x;
                samples[i] = 1;
            }
            continue;
        };

        let g = regression_gradient(&rec.evaluations, &pts[best], 3.0 * rho.max(delta)).unwrap_or(g);
        let gnorm = g.norm();
        if gnorm > 0.0 {
            let x: Vec<f64> = pts[best]
                .iter()
                .zip(g.iter())
                .map(|(p, gi)| p - delta * gi / gnorm)
                .collect();
            let fx = rec.eval(&x)?;
            let predicted = delta * gnorm;
            let actual = vals[best] - fx;
            let step: Vec<f64> = x.iter().zip(&pts[best]).map(|(a, b)| a - b).collect();
            // Volume ratio of the simplex if vertex k were replaced by x.
            let sig: Vec<f64> = (0..n)
                .map(|k| inv.column(k).iter().zip(&step).map(|(d, s)| d * s).sum::<f64>().abs())
                .collect();
            let mut drop = None;
            let mut floor = 0.0;
            for (k, &v) in sig.iter().enumerate() {
                if v > floor {
                    drop = Some(k);
                    floor = v;
                }
            }
            let mut reach = 1.1 * rho;
            for (k, &v) in sig.iter().enumerate() {
                let width = 1.0 / inv.column(k).norm();
                if v * width >= 0.25 * rho || v >= 1.0 {
                    let d = if actual > 0.0 {
                        dist(&pts[others[k]], &x)
                    } else {
                        dist(&pts[others[k]], &pts[best])
                    };
                    if d > reach {
                        drop = Some(k);
                        reach = d;
                    }
                }
            }
            if let Some(k) = drop {
                pts[others[k]] = x;
                vals[others[k]] = fx;
                samples[others[k]] = 1;
            }
            if actual > 0.0 {
                if rec.settled(vals[best], fx) {
                    return Ok(StopReason::Converged);
                }
                if actual >= 0.1 * predicted {
                    if actual >= 0.7 * predicted {
                        delta = (2.0 * delta).min(max_delta);
                    }
                    continue;
                }
            }
            if delta > rho {
                delta = (0.5 * delta).max(rho);
                continue;
            }
        }

        // The step was poor; repair the geometry before shrinking the radius.
        let best = argmin(&vals);
        let others: Vec<usize> = (0..=n).filter(|&i| i != best).collect();
        let Some((g, inv)) = linear_model(&pts, &vals, best) else {
            continue;
        };
        let (k_far, d_far) = others
            .iter()
            .enumerate()
            .map(|(k, &i)| (k, dist(&pts[i], &pts[best])))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("simplex has at least two vertices");
        let (k_thin, width) = (0..n)
            .map(|k| (k, 1.0 / inv.column(k).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("simplex has at least two vertices");
        let target = if d_far > 2.1 * rho {
            Some(k_far)
        } else if width < 0.25 * rho {
            Some(k_thin)
        } else {
            None
        };
        match target {
            Some(k) => {
                let dir = inv.column(k);
                let len = dir.norm();
                let sign = if g.dot(&dir) > 0.0 { -1.0 } else { 1.0 };
                let x: Vec<f64> = pts[best]
                    .iter()
                    .zip(dir.iter())
                    .map(|(p, d)| p + sign * rho * d / len)
                    .collect();
                let i = others[k];
                vals[i] = rec.eval(&x)?;
                pts[i] = x;
                samples[i] = 1;
            }
            None if !resampled => {
                let v = rec.eval(&pts[best])?;
                let c = f64::from(samples[best]);
                vals[best] = (vals[best] * c + v) / (c + 1.0);
                samples[best] += 1;
                resampled = true;
            }
            None => {
                resampled = false;
                if rho <= cfg.final_step {
                    return Ok(StopReason::StepTooSmall);
                }
                rho *= 0.5;
                if rho <= 1.5 * cfg.final_step {
                    rho = cfg.final_step;
                }
                delta = rho;
            }
        }
    }
}

fn nelder_mead<F>(rec: &mut Recorder<F>, x0: &[f64], cfg: &OptimizerConfig) -> std::result::Result<StopReason, Halt>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let n = x0.len();
    let nf = n as f64;
    let (expansion, contraction, shrink) = if n > 1 {
        (1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
    } else {
        (2.0, 0.5, 0.5)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), rec.eval(x0)?)];
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += cfg.initial_step;
        let v = rec.eval(&x)?;
        simplex.push((x, v));
    }
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best_before = simplex[0].1;
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| dist(x, &simplex[0].0))
            .fold(0.0, f64::max);
        if size < cfg.final_step {
            return Ok(StopReason::StepTooSmall);
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let xr = lerp(&centroid, &worst.0, -1.0);
        let fr = rec.eval(&xr)?;
        if fr < simplex[0].1 {
            let xe = lerp(&centroid, &worst.0, -expansion);
            let fe = rec.eval(&xe)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = lerp(&centroid, &xr, contraction);
                let fc = rec.eval(&xc)?;
                (xc, fc)
            } else {
                let xc = lerp(&centroid, &worst.0, contraction);
                let fc = rec.eval(&xc)?;
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[n] = (xc, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x = lerp(&anchor, &vertex.0, shrink);
                    let v = rec.eval(&x)?;
                    *vertex = (x, v);
                }
            }
        }
        let best_after = simplex.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        if best_after < best_before && rec.settled(best_before, best_after) {
            return Ok(StopReason::Converged);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(x: &[f64]) -> Result<f64> {
        Ok(x.iter()
            .enumerate()
            .map(|(i, v)| (i as f64 + 1.0) * (v - 1.0).powi(2))
            .sum::<f64>()
            - 5.0)
    }

    fn tight(method: Method) -> OptimizerConfig {
        OptimizerConfig {
            method,
            stop_rule: StopRule::TrustRadius,
            rel_tol: 1e-12,
            max_iterations: 2000,
            initial_step: 1.0,
            final_step: 1e-6,
        }
    }

    #[test]
    fn both_methods_find_a_quadratic_minimum() {
        for method in [Method::Cobyla, Method::NelderMead] {
            let m = minimize(quadratic, &[4.0, -3.0, 2.0], &tight(method)).unwrap();
            let best = m.best();
            assert!((best.value + 5.0).abs() < 1e-6, "{method}: {}", best.value);
            for v in &best.x {
                assert!((v - 1.0).abs() < 1e-2, "{method}: {:?}", best.x);
            }
        }
    }

    #[test]
    fn budget_is_respected() {
        for method in [Method::Cobyla, Method::NelderMead] {
            let cfg = OptimizerConfig {
                max_iterations: 5,
                ..tight(method)
            };
            let m = minimize(quadratic, &[4.0, -3.0, 2.0], &cfg).unwrap();
            assert_eq!(m.evaluations.len(), 5);
            assert_eq!(m.stop, StopReason::MaxIterations);
        }
    }

    #[test]
    fn relative_rule_stops_early_with_loose_tolerance() {
        let cfg = OptimizerConfig {
            rel_tol: 0.5,
            stop_rule: StopRule::RelativeChange,
            ..tight(Method::Cobyla)
        };
        let m = minimize(quadratic, &[4.0, -3.0, 2.0], &cfg).unwrap();
        assert_eq!(m.stop, StopReason::Converged);
        assert!(m.evaluations.len() < 100);
        let radius_only = minimize(
            quadratic,
            &[4.0, -3.0, 2.0],
            &OptimizerConfig {
                rel_tol: 0.5,
                ..tight(Method::Cobyla)
            },
        )
        .unwrap();
        assert_ne!(radius_only.stop, StopReason::Converged);
    }

    #[test]
    fn objective_errors_propagate() {
        let err = minimize(|_| Err(Error::EmptyInput), &[0.0], &OptimizerConfig::default()).unwrap_err();
        assert_eq!(err, Error::EmptyInput);
    }

    #[test]
    fn invalid_configs_rejected() {
        let base = OptimizerConfig::default();
        for cfg in [
            OptimizerConfig { rel_tol: 0.0, ..base },
            OptimizerConfig {
                max_iterations: 0,
                ..base
            },
            OptimizerConfig {
                initial_step: -1.0,
                ..base
            },
            OptimizerConfig {
                final_step: 100.0,
                ..base
            },
        ] {
            assert!(matches!(
                minimize(quadratic, &[0.0], &cfg),
                Err(Error::InvalidConfig(_))
            ));
        }
        assert_eq!(minimize(quadratic, &[], &base).unwrap_err(), Error::EmptyInput);
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Cobyla, Method::NelderMead] {
            assert_eq!(Method::parse(m.as_str()), Some(m));
        }
        for r in [StopRule::TrustRadius, StopRule::RelativeChange] {
            assert_eq!(StopRule::parse(r.as_str()), Some(r));
        }
        for s in [
            StopReason::Converged,
            StopReason::StepTooSmall,
            StopReason::MaxIterations,
        ] {
            assert_eq!(StopReason::parse(s.as_str()), Some(s));
        }
    }
}
