//! Axis construction for parameter sweeps.

use crate::error::{Error, Result};

/// `n` evenly spaced points with exact endpoints.
pub fn linear_grid(start: f64, stop: f64, n: usize) -> Result<Vec<f64>> {
    check_span(start, stop, n)?;
    let step = (stop - start) / (n as f64 - 1.0);
    let mut grid: Vec<f64> = (0..n).map(|i| start + step * i as f64).collect();
    grid[n - 1] = stop;
    Ok(grid)
}

/// `n` logarithmically spaced points with exact endpoints; requires
/// 0 < start < stop.
pub fn log_grid(start: f64, stop: f64, n: usize) -> Result<Vec<f64>> {
    check_span(start, stop, n)?;
    if start <= 0.0 {
        return Err(Error::domain(format!(
            "logarithmic grid needs a positive start, got {start}"
        )));
    }
    let (a, b) = (start.ln(), stop.ln());
    let step = (b - a) / (n as f64 - 1.0);
    let mut grid: Vec<f64> = (0..n).map(|i| (a + step * i as f64).exp()).collect();
    grid[0] = start;
    grid[n - 1] = stop;
    Ok(grid)
}

fn check_span(start: f64, stop: f64, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("a grid needs at least 2 points, got {n}")));
    }
    if !start.is_finite() || !stop.is_finite() || start >= stop {
        return Err(Error::domain(format!(
            "grid span must satisfy start < stop with finite endpoints, got [{start}, {stop}]"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::assert_close;

    #[test]
    fn linear_grid_has_exact_endpoints_and_uniform_steps() {
        let g = linear_grid(0.010, 0.050, 60).unwrap();
        assert_eq!(g.len(), 60);
        assert_eq!(g[0], 0.010);
        assert_eq!(g[59], 0.050);
        let step = g[1] - g[0];
        for w in g.windows(2) {
            assert_close(w[1] - w[0], step, 1e-15, 1e-9);
        }
    }

    #[test]
    fn log_grid_has_exact_endpoints_and_constant_ratio() {
        let g = log_grid(1e-2, 1e2, 120).unwrap();
        assert_eq!(g.len(), 120);
        assert_eq!(g[0], 1e-2);
        assert_eq!(g[119], 1e2);
        let ratio = g[1] / g[0];
        for w in g.windows(2) {
            assert_close(w[1] / w[0], ratio, 0.0, 1e-9);
        }
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_spans() {
        assert!(linear_grid(0.0, 1.0, 1).is_err());
        assert!(linear_grid(1.0, 1.0, 10).is_err());
        assert!(linear_grid(2.0, 1.0, 10).is_err());
        assert!(log_grid(0.0, 1.0, 10).is_err());
        assert!(log_grid(-1.0, 1.0, 10).is_err());
        assert!(linear_grid(f64::NAN, 1.0, 10).is_err());
    }
}
