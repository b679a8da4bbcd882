//! Piecewise-constant functions on (0, 1] and the exact rearrangement
//! machinery built on them.
//!
//! A [`Grid`] stores breakpoints 0 = p_0 < p_1 < ... < p_n = 1; cell i is
//! (p_i, p_{i+1}). All operations on [`GridFn`] are exact in the sense that
//! no quadrature error is introduced: rearrangement lands on the grid of
//! accumulated mass boundaries, and binary operations work on the common
//! refinement of the two grids.

use crate::error::{Result, RskError};
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    /// Strictly increasing, first entry 0, last entry 1.
    pub points: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Grid> {
        if points.len() < 2 || points[0] != 0.0 || (*points.last().unwrap() - 1.0).abs() > 1e-15 {
            return Err(RskError::Parameter(
                "grid must run from 0 to 1".into(),
            ));
        }
        for w in points.windows(2) {
            if !(w[1] > w[0]) {
                return Err(RskError::Parameter("grid points must increase".into()));
            }
        }
        let mut points = points;
        *points.last_mut().unwrap() = 1.0;
        Ok(Grid { points })
    }

    /// Geometric grid with K points per octave down to t_min, plus the
    /// sentinel cell (0, t_min).
    pub fn geometric(k: u32, t_min: f64) -> Grid {
        assert!(k >= 1 && t_min > 0.0 && t_min < 1.0);
        let octaves = (1.0 / t_min).log2();
        let total = (octaves * k as f64).ceil() as i64;
        let mut points = vec![0.0];
        for i in 0..=total {
            let p = t_min * 2.0f64.powf(i as f64 / k as f64);
            if p < 1.0 - 1e-14 {
                points.push(p);
            }
        }
        points.push(1.0);
        Grid { points }
    }

    pub fn n_cells(&self) -> usize {
        self.points.len() - 1
    }

    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.points[i], self.points[i + 1])
    }

    /// Index of the cell containing t (cells are taken left-open).
    pub fn locate(&self, t: f64) -> usize {
        debug_assert!(t > 0.0 && t <= 1.0);
        match self.points.binary_search_by(|p| p.partial_cmp(&t).unwrap()) {
            Ok(i) => i.saturating_sub(1),
            Err(i) => i - 1,
        }
    }

    /// Union of breakpoints of two grids.
    pub fn refine_with(&self, other: &Grid) -> Grid {
        let mut pts: Vec<f64> = Vec::with_capacity(self.points.len() + other.points.len());
        let (a, b) = (&self.points, &other.points);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) => {
                    if x < y {
                        i += 1;
                        x
                    } else if y < x {
                        j += 1;
                        y
                    } else {
                        i += 1;
                        j += 1;
                        x
                    }
                }
                (Some(&x), None) => {
                    i += 1;
                    x
                }
                (None, Some(&y)) => {
                    j += 1;
                    y
                }
                (None, None) => break,
            };
            pts.push(next);
        }
        Grid { points: pts }
    }
}

/// Nonnegative piecewise-constant function; `values[i]` is the value on
/// cell i. `f64::INFINITY` is allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFn {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl GridFn {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<GridFn> {
        if values.len() != grid.n_cells() {
            return Err(RskError::GridMismatch(format!(
                "{} values for {} cells",
                values.len(),
                grid.n_cells()
            )));
        }
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(RskError::Parameter("values must be nonnegative".into()));
        }
        Ok(GridFn { grid, values })
    }

    pub fn constant(grid: Grid, v: f64) -> GridFn {
        let n = grid.n_cells();
        GridFn { grid, values: vec![v; n] }
    }

    /// Indicator of (0, b).
    pub fn indicator(grid: &Grid, b: f64) -> GridFn {
        let mut g = grid.clone();
        if !g.points.iter().any(|p| (p - b).abs() < 1e-15) {
            g = g.refine_with(&Grid {
                points: vec![0.0, b, 1.0],
            });
        }
        let values = (0..g.n_cells())
            .map(|i| if g.cell(i).1 <= b + 1e-15 { 1.0 } else { 0.0 })
            .collect();
        GridFn { grid: g, values }
    }

    /// Samples a pointwise-defined function at cell midpoints (in log scale,
    /// which is natural for geometric grids).
    pub fn sample(grid: &Grid, f: &dyn Fn(f64) -> f64) -> GridFn {
        let values = (0..grid.n_cells())
            .map(|i| {
                let (a, b) = grid.cell(i);
                let mid = if a > 0.0 { (a * b).sqrt() } else { b * 0.5 };
                f(mid).max(0.0)
            })
            .collect();
        GridFn {
            grid: grid.clone(),
            values,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.values[self.grid.locate(t)]
    }

    pub fn integral(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.values.len() {
            let (a, b) = self.grid.cell(i);
            let v = self.values[i];
            if v.is_infinite() {
                return f64::INFINITY;
            }
            s += v * (b - a);
        }
        s
    }

    /// Resamples onto a refinement of `self.grid` (exact: every new cell is
    /// contained in an old one).
    pub fn on_refinement(&self, fine: &Grid) -> GridFn {
        let values = (0..fine.n_cells())
            .map(|i| {
                let (a, b) = fine.cell(i);
                self.values[self.grid.locate(0.5 * (a + b))]
            })
            .collect();
        GridFn {
            grid: fine.clone(),
            values,
        }
    }

    /// Decreasing rearrangement f*. The result lives on the grid of
    /// accumulated mass boundaries, which is the only grid on which a
    /// piecewise-constant representation of f* is exact.
    pub fn rearrange(&self) -> GridFn {
        let mut cells: Vec<(f64, f64)> = (0..self.values.len())
            .map(|i| {
                let (a, b) = self.grid.cell(i);
                (self.values[i], b - a)
            })
            .collect();
        cells.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
        let mut points = vec![0.0];
        let mut values = Vec::new();
        let mut acc = 0.0;
        for (v, len) in cells {
            acc += len;
            match values.last() {
                Some(&last) if last == v => {
                    *points.last_mut().unwrap() = acc;
                }
                _ => {
                    values.push(v);
                    points.push(acc);
                }
            }
        }
        *points.last_mut().unwrap() = 1.0;
        GridFn {
            grid: Grid { points },
            values,
        }
    }

    /// Distribution function μ{ |f| > λ }.
    /// Rearrangement carried back onto the refinement of the original grid.
    /// `rearrange` merges equal-value cells, which can collapse the grid to
    /// a handful of points; downstream kernel applications need the full
    /// resolution, so the rearranged values are re-expanded here.
    pub fn rearrange_fine(&self) -> GridFn {
        let star = self.rearrange();
        let fine = self.grid.refine_with(&star.grid);
        star.on_refinement(&fine)
    }

    pub fn distribution(&self, lambda: f64) -> f64 {
        let mut s = 0.0;
        for i in 0..self.values.len() {
            if self.values[i] > lambda {
                let (a, b) = self.grid.cell(i);
                s += b - a;
            }
        }
        s
    }

    /// Exact running integral s ↦ ∫_0^s f, evaluated at t.
    pub fn running_integral(&self, t: f64) -> f64 {
        let mut s = 0.0;
        for i in 0..self.values.len() {
            let (a, b) = self.grid.cell(i);
            if b <= t {
                s += self.values[i] * (b - a);
            } else if a < t {
                s += self.values[i] * (t - a);
                break;
            } else {
                break;
            }
        }
        s
    }

    /// Pointwise f**(t) = (1/t) ∫_0^t f* , exact.
    pub fn double_star_at(&self, star: &GridFn, t: f64) -> f64 {
        let _ = self;
        star.running_integral(t) / t
    }

    /// f** as cell averages on the rearranged grid. On a cell (a, b) where
    /// f* ≡ v and A(s) = A_a + v (s - a), the average of A(s)/s has the
    /// closed form below, so no quadrature is needed.
    pub fn double_star(&self) -> GridFn {
        let star = self.rearrange();
        let mut values = Vec::with_capacity(star.values.len());
        let mut a_acc = 0.0;
        for i in 0..star.values.len() {
            let (a, b) = star.grid.cell(i);
            let v = star.values[i];
            let avg = if v.is_infinite() {
                f64::INFINITY
            } else if a == 0.0 {
                v
            } else {
                (v * (b - a) + (a_acc - v * a) * (b / a).ln()) / (b - a)
            };
            values.push(avg);
            if v.is_finite() {
                a_acc += v * (b - a);
            } else {
                a_acc = f64::INFINITY;
            }
        }
        GridFn {
            grid: star.grid,
            values,
        }
    }

    /// Dilation (E_λ f)(s) = f(s/λ) when s/λ ≤ 1, else 0; exact on the grid
    /// with breakpoints λ p_i clipped to (0, 1].
    pub fn dilate(&self, lambda: f64) -> Result<GridFn> {
        if !(lambda > 0.0) {
            return Err(RskError::Parameter("dilation factor must be positive".into()));
        }
        let mut points = vec![0.0];
        let mut values = Vec::new();
        for i in 0..self.values.len() {
            let b = self.grid.points[i + 1] * lambda;
            if b >= 1.0 {
                points.push(1.0);
                values.push(self.values[i]);
                break;
            }
            points.push(b);
            values.push(self.values[i]);
        }
        if *points.last().unwrap() < 1.0 {
            points.push(1.0);
            values.push(0.0);
        }
        Ok(GridFn {
            grid: Grid { points },
            values,
        })
    }

    /// ∫ f g over the common refinement.
    pub fn pairing(&self, other: &GridFn) -> f64 {
        let fine = self.grid.refine_with(&other.grid);
        let f = self.on_refinement(&fine);
        let g = other.on_refinement(&fine);
        let mut s = 0.0;
        for i in 0..fine.n_cells() {
            let (a, b) = fine.cell(i);
            let p = f.values[i] * g.values[i];
            if p.is_nan() {
                continue; // 0 * inf
            }
            if p.is_infinite() {
                return f64::INFINITY;
            }
            s += p * (b - a);
        }
        s
    }

    /// Pointwise sum on the common refinement.
    pub fn add(&self, other: &GridFn) -> GridFn {
        let fine = self.grid.refine_with(&other.grid);
        let f = self.on_refinement(&fine);
        let g = other.on_refinement(&fine);
        let values = f
            .values
            .iter()
            .zip(g.values.iter())
            .map(|(x, y)| x + y)
            .collect();
        GridFn { grid: fine, values }
    }

    pub fn scale(&self, c: f64) -> GridFn {
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = (0..self.values.len())
            .map(|i| {
                let (a, b) = self.grid.cell(i);
                let v = self.values[i];
                json!({
                    "left": a,
                    "right": b,
                    "value": if v.is_infinite() { Value::from("inf") } else { Value::from(v) },
                })
            })
            .collect();
        Value::Array(cells)
    }

    pub fn from_json(v: &Value) -> Result<GridFn> {
        let arr = v
            .as_array()
            .ok_or_else(|| RskError::Parameter("expected array of cells".into()))?;
        let mut points = vec![0.0];
        let mut values = Vec::new();
        for cell in arr {
            let left = cell["left"]
                .as_f64()
                .ok_or_else(|| RskError::Parameter("cell missing left".into()))?;
            let right = cell["right"]
                .as_f64()
                .ok_or_else(|| RskError::Parameter("cell missing right".into()))?;
            if (left - points.last().unwrap()).abs() > 1e-12 {
                return Err(RskError::Parameter("cells must tile (0,1)".into()));
            }
            let value = match &cell["value"] {
                Value::String(s) if s == "inf" => f64::INFINITY,
                v => v
                    .as_f64()
                    .ok_or_else(|| RskError::Parameter("cell missing value".into()))?,
            };
            points.push(right);
            values.push(value);
        }
        GridFn::new(Grid::new(points)?, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_grid_octaves() {
        let g = Grid::geometric(1, 0.125);
        assert_eq!(g.points, vec![0.0, 0.125, 0.25, 0.5, 1.0]);
        let g = Grid::geometric(16, 2.0f64.powi(-40));
        assert_eq!(g.n_cells(), 16 * 40 + 1);
    }

    #[test]
    fn rearrange_sorts_blocks() {
        let g = Grid::new(vec![0.0, 0.25, 0.5, 1.0]).unwrap();
        let f = GridFn::new(g, vec![3.0, 1.0, 2.0]).unwrap();
        let fs = f.rearrange();
        assert_eq!(fs.values, vec![3.0, 2.0, 1.0]);
        assert_eq!(fs.grid.points, vec![0.0, 0.25, 0.75, 1.0]);
    }

    #[test]
    fn rearrange_indicator_translates_to_origin() {
        let g = Grid::new(vec![0.0, 0.6, 0.85, 1.0]).unwrap();
        let f = GridFn::new(g, vec![0.0, 1.0, 0.0]).unwrap();
        let fs = f.rearrange();
        assert_eq!(fs.values, vec![1.0, 0.0]);
        assert!((fs.grid.points[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rearrangement_is_equimeasurable() {
        let g = Grid::geometric(4, 1.0 / 64.0);
        let f = GridFn::sample(&g, &|t| (10.0 * t).sin().abs() + t);
        let fs = f.rearrange();
        for lambda in [0.0, 0.1, 0.5, 0.9, 1.3] {
            assert!((f.distribution(lambda) - fs.distribution(lambda)).abs() < 1e-12);
        }
        assert!((f.integral() - fs.integral()).abs() < 1e-12);
    }

    #[test]
    fn hardy_littlewood_on_uneven_cells() {
        // The case that breaks same-grid cell averaging: cells of lengths
        // 1/3 and 2/3 with values 0 and 2.
        let g = Grid::new(vec![0.0, 1.0 / 3.0, 1.0]).unwrap();
        let f = GridFn::new(g, vec![0.0, 2.0]).unwrap();
        let fs = f.rearrange();
        let lhs = f.pairing(&f);
        let rhs = fs.pairing(&fs);
        assert!((lhs - 8.0 / 3.0).abs() < 1e-12);
        assert!(rhs >= lhs - 1e-12);
    }

    #[test]
    fn double_star_of_indicator() {
        // f = χ_(0,b): f** = 1 on (0,b), b/t after; check cell averages.
        let b = 0.25;
        let g = Grid::new(vec![0.0, b, 0.5, 1.0]).unwrap();
        let f = GridFn::new(g, vec![1.0, 0.0, 0.0]).unwrap();
        let dd = f.double_star();
        assert!((dd.eval(0.1) - 1.0).abs() < 1e-15);
        // zero cells merge under rearrangement, so the tail cell is (b, 1)
        // and the average of b/t over it is b log(1/b) / (1 - b)
        assert!((dd.eval(0.75) - b * 4.0f64.ln() / 0.75).abs() < 1e-15);
        assert!((f.double_star_at(&f.rearrange(), 0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dilate_scales_mass() {
        let g = Grid::geometric(2, 1.0 / 16.0);
        let f = GridFn::sample(&g, &|t| 1.0 / (t + 0.1));
        for lambda in [0.3, 0.5, 1.0] {
            let ef = f.dilate(lambda).unwrap();
            assert!((ef.integral() - lambda * f.integral()).abs() < 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let g = Grid::new(vec![0.0, 0.5, 1.0]).unwrap();
        let f = GridFn::new(g, vec![f64::INFINITY, 2.0]).unwrap();
        let j = f.to_json();
        let back = GridFn::from_json(&j).unwrap();
        assert_eq!(f, back);
    }
}
