//! Polar grids on the disk and the complex fields sampled on them.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::{Error, Result};

/// A polar grid: an explicit list of radii crossed with `n_theta` uniform angles.
///
/// Point ordering is radial-outer: all angles of the first radius, then all angles
/// of the second, and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    radii: Vec<f64>,
    n_theta: usize,
}

impl PolarGrid {
    /// Uniformly spaced radii `r_i = r_max * (i+1) / n_r` (the origin is excluded).
    pub fn uniform(n_r: usize, n_theta: usize, r_max: f64) -> Result<Self> {
        if n_r < 1 || n_theta < 1 {
            return Err(Error::Domain(format!(
                "grid needs at least one node per direction, got {n_r} x {n_theta}"
            )));
        }
        if !(r_max > 0.0 && r_max < 1.0) {
            return Err(Error::Domain(format!(
                "grid r_max must lie in (0, 1), got {r_max}"
            )));
        }
        let radii = (0..n_r)
            .map(|i| r_max * (i + 1) as f64 / n_r as f64)
            .collect();
        Ok(Self { radii, n_theta })
    }

    /// Grid over an explicit (strictly increasing, in `(0,1)`) radius list.
    pub fn from_radii(radii: Vec<f64>, n_theta: usize) -> Result<Self> {
        if radii.is_empty() || n_theta < 1 {
            return Err(Error::Domain("empty grid".into()));
        }
        if radii
            .iter()
            .any(|&r| !(r > 0.0 && r < 1.0) || !r.is_finite())
        {
            return Err(Error::Domain("grid radii must lie in (0, 1)".into()));
        }
        Ok(Self { radii, n_theta })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn n_r(&self) -> usize {
        self.radii.len()
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.n_theta as f64
    }

    /// Iterates `(r, theta, z)` in the radial-outer storage order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, Complex64)> + '_ {
        self.radii.iter().flat_map(move |&r| {
            (0..self.n_theta).map(move |j| {
                let th = self.theta(j);
                (r, th, Complex64::from_polar(r, th))
            })
        })
    }
}

/// Complex values sampled on a [`PolarGrid`], stored in the grid's point order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub grid: PolarGrid,
    pub values: Vec<Complex64>,
}

impl GridField {
    pub fn new(grid: PolarGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` on every grid point.
    pub fn from_fn(grid: PolarGrid, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        let values = grid.points().map(|(_, _, z)| f(z)).collect();
        Self { grid, values }
    }

    pub fn value_at(&self, i_r: usize, j_theta: usize) -> Complex64 {
        self.values[i_r * self.grid.n_theta() + j_theta]
    }

    /// Writes the field as CSV with header `r,theta,re,im`, 17 significant digits,
    /// one row per grid point in radial-outer order.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "r,theta,re,im")?;
        for ((r, th, _), v) in self.grid.points().zip(&self.values) {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", r, th, v.re, v.im)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_layout() {
        let g = PolarGrid::uniform(4, 8, 0.8).unwrap();
        assert_eq!(g.len(), 32);
        assert_eq!(g.radii()[0], 0.2);
        assert_eq!(g.radii()[3], 0.8);
        let pts: Vec<_> = g.points().collect();
        // radial-outer: the first n_theta entries share the innermost radius
        assert!(pts[..8].iter().all(|&(r, _, _)| r == 0.2));
        assert_eq!(pts[8].0, 0.4);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(PolarGrid::uniform(0, 8, 0.5).is_err());
        assert!(PolarGrid::uniform(4, 8, 1.0).is_err());
        assert!(PolarGrid::from_radii(vec![0.2, 1.5], 4).is_err());
    }

    #[test]
    fn csv_header_and_determinism() {
        let g = PolarGrid::uniform(2, 2, 0.5).unwrap();
        let f = GridField::from_fn(g, |z| z);
        let mut a = Vec::new();
        f.write_csv(&mut a).unwrap();
        let text = String::from_utf8(a.clone()).unwrap();
        assert!(text.starts_with("r,theta,re,im\n"));
        assert_eq!(text.lines().count(), 5);
        let mut b = Vec::new();
        f.write_csv(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn field_length_must_match_grid() {
        let g = PolarGrid::uniform(2, 2, 0.5).unwrap();
        assert!(GridField::new(g, vec![Complex64::new(0.0, 0.0); 3]).is_err());
    }
}
