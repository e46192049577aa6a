//! Sampled field data: a delay trace and the 2D (t, τ) field map.

use crate::error::{Error, Result};

/// Minimum samples in a [`TimeTrace`].
pub const MIN_TRACE_SAMPLES: usize = 16;

const UNIFORM_RTOL: f64 = 1e-9;

/// `n` points start, start + step, ...
pub fn uniform_grid(start: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| start + step * k as f64).collect()
}

/// Spacing of a uniform, strictly increasing grid.
pub fn grid_step(points: &[f64], what: &str) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::grid(format!("{what} grid needs at least 2 points")));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::grid(format!("{what} grid has non-finite points")));
    }
    let step = (points[points.len() - 1] - points[0]) / (points.len() - 1) as f64;
    if !(step > 0.0) {
        return Err(Error::grid(format!("{what} grid must be increasing")));
    }
    for (k, w) in points.windows(2).enumerate() {
        if ((w[1] - w[0]) - step).abs() > UNIFORM_RTOL * step {
            return Err(Error::grid(format!(
                "{what} grid is not uniform at index {k}: spacing {} vs {step}",
                w[1] - w[0]
            )));
        }
    }
    Ok(step)
}

/// Field amplitude on a uniform delay grid (ps).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeTrace {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::grid(format!("{} times but {} values", times.len(), values.len())));
        }
        if times.len() < MIN_TRACE_SAMPLES {
            return Err(Error::grid(format!(
                "trace needs at least {MIN_TRACE_SAMPLES} samples, got {}",
                times.len()
            )));
        }
        grid_step(&times, "time")?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::grid("trace has non-finite values"));
        }
        Ok(TimeTrace { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.times[self.len() - 1] - self.times[0]) / (self.len() - 1) as f64
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        TimeTrace::new(self.times.clone(), values)
    }
}

/// E(t, τ) with rows along τ and columns along t.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap2D {
    t: Vec<f64>,
    tau: Vec<f64>,
    values: Vec<f64>,
}

impl FieldMap2D {
    /// `values` is row-major: `values[i * t.len() + j]` = E(t_j, τ_i).
    pub fn new(t: Vec<f64>, tau: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        grid_step(&t, "t")?;
        grid_step(&tau, "tau")?;
        if values.len() != t.len() * tau.len() {
            return Err(Error::grid(format!(
                "map has {} values for a {}x{} grid",
                values.len(),
                tau.len(),
                t.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::grid("map has non-finite values"));
        }
        Ok(FieldMap2D { t, tau, values })
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t
    }

    pub fn tau_grid(&self) -> &[f64] {
        &self.tau
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// (rows along τ, columns along t)
    pub fn dims(&self) -> (usize, usize) {
        (self.tau.len(), self.t.len())
    }

    pub fn get(&self, i_tau: usize, j_t: usize) -> f64 {
        self.values[i_tau * self.t.len() + j_t]
    }

    pub fn row(&self, i_tau: usize) -> &[f64] {
        let nt = self.t.len();
        &self.values[i_tau * nt..(i_tau + 1) * nt]
    }

    /// E(t_j, ·) along τ.
    pub fn column(&self, j_t: usize) -> Vec<f64> {
        (0..self.tau.len()).map(|i| self.get(i, j_t)).collect()
    }

    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        FieldMap2D::new(self.t.clone(), self.tau.clone(), values)
    }

    pub fn mean_square(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_validation() {
        let t = uniform_grid(-1.0, 0.1, 20);
        assert!(TimeTrace::new(t.clone(), vec![0.0; 20]).is_ok());
        assert!(TimeTrace::new(t[..15].to_vec(), vec![0.0; 15]).is_err());
        assert!(TimeTrace::new(t.clone(), vec![0.0; 19]).is_err());
        let mut bent = t.clone();
        bent[7] += 1e-4;
        assert!(matches!(TimeTrace::new(bent, vec![0.0; 20]), Err(Error::Grid(_))));
        let mut v = vec![0.0; 20];
        v[3] = f64::NAN;
        assert!(TimeTrace::new(t, v).is_err());
    }

    #[test]
    fn long_grids_stay_uniform() {
        let t = uniform_grid(-10.0, 0.1, 100_000);
        assert!((grid_step(&t, "t").unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn map_layout() {
        let t = uniform_grid(0.0, 1.0, 3);
        let tau = uniform_grid(0.0, 1.0, 2);
        let m = FieldMap2D::new(t, tau, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(m.dims(), (2, 3));
        assert_eq!(m.get(1, 0), 4.0);
        assert_eq!(m.row(1), &[4.0, 5.0, 6.0]);
        assert_eq!(m.column(2), vec![3.0, 6.0]);
        assert!(m.with_values(vec![0.0; 5]).is_err());
    }
}
