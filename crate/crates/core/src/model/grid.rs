use crate::error::{Error, Result};
use crate::spectrum::quadrature::gauss_legendre;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridSpacing {
    Uniform,
    Geometric,
}

impl std::str::FromStr for GridSpacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "linear" => Ok(Self::Uniform),
            "geometric" | "log" => Ok(Self::Geometric),
            other => Err(Error::Config(format!("unknown grid spacing '{other}'"))),
        }
    }
}

/// Strictly increasing wavenumber grid. Consecutive points bound the panels of
/// the composite quadrature; a one-point grid is a point mass.
#[derive(Clone, Debug, PartialEq)]
pub struct KGrid {
    points: Vec<f64>,
}

impl KGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMeasure("grid has no points".into()));
        }
        if points.iter().any(|k| !k.is_finite() || *k < 0.0) {
            return Err(Error::InvalidMeasure("grid points must be finite and nonnegative".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMeasure("grid must be strictly increasing".into()));
        }
        Ok(Self { points })
    }

    pub fn uniform(kmin: f64, kmax: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidMeasure("need at least two points".into()));
        }
        let h = (kmax - kmin) / (n - 1) as f64;
        Self::new((0..n).map(|i| kmin + h * i as f64).collect())
    }

    pub fn geometric(kmin: f64, kmax: f64, n: usize) -> Result<Self> {
        if n < 2 || kmin <= 0.0 {
            return Err(Error::InvalidMeasure("geometric grid needs kmin > 0 and two points".into()));
        }
        let r = (kmax / kmin).ln() / (n - 1) as f64;
        let mut pts: Vec<f64> = (0..n).map(|i| kmin * (r * i as f64).exp()).collect();
        pts[n - 1] = kmax;
        Self::new(pts)
    }

    pub fn with_spacing(spacing: GridSpacing, kmin: f64, kmax: f64, n: usize) -> Result<Self> {
        match spacing {
            GridSpacing::Uniform => Self::uniform(kmin, kmax, n),
            GridSpacing::Geometric => Self::geometric(kmin, kmax, n),
        }
    }

    /// Point mass at `k`.
    pub fn single(k: f64) -> Result<Self> {
        Self::new(vec![k])
    }

    /// 2000 geometric points on `[1e-3, 60]`.
    pub fn default_grid() -> Self {
        Self::geometric(1e-3, 60.0, 2000).expect("valid default grid")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_point_mass(&self) -> bool {
        self.points.len() == 1
    }

    pub fn kmin(&self) -> f64 {
        self.points[0]
    }

    pub fn kmax(&self) -> f64 {
        *self.points.last().unwrap()
    }

    pub fn panels(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    /// The first points up to (and including) the last one `≤ kcut`.
    pub fn truncated(&self, kcut: f64) -> Result<Self> {
        Self::new(self.points.iter().copied().filter(|&k| k <= kcut).collect())
    }

    /// Composite Gauss–Legendre nodes, `order` per panel; the single node of a
    /// point-mass grid has weight one.
    pub fn nodes(&self, order: usize) -> Vec<(f64, f64)> {
        if self.is_point_mass() {
            return vec![(self.points[0], 1.0)];
        }
        let rule = gauss_legendre(order);
        let mut out = Vec::with_capacity(order * (self.len() - 1));
        for (a, b) in self.panels() {
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            out.extend(rule.iter().map(|&(x, w)| (c + h * x, h * w)));
        }
        out
    }
}

/// Probability weights `∝ φ · Δk` on the grid cells.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureConfig {
    pub grid: KGrid,
    pub weights: Vec<f64>,
}

impl MeasureConfig {
    pub fn from_density<F: Fn(f64) -> f64>(grid: KGrid, phi: F) -> Result<Self> {
        let raw: Vec<f64> = if grid.is_point_mass() {
            let v = phi(grid.kmin());
            vec![v]
        } else {
            grid.panels().map(|(a, b)| phi(0.5 * (a + b)) * (b - a)).collect()
        };
        if raw.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidMeasure("density must be positive on every cell".into()));
        }
        let total: f64 = raw.iter().sum();
        Ok(Self {
            grid,
            weights: raw.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn uniform(grid: KGrid) -> Result<Self> {
        Self::from_density(grid, |_| 1.0)
    }
}
