//! Uniform rectangular grids of complex field values and second-order
//! Wirtinger finite differences.
//!
//! With z = x + iy the operators are dz = (dx - i dy)/2, dzb = (dx + i dy)/2;
//! central differences are used on interior points and the boundary ring of
//! the derivative grids is marked invalid (NaN).

use crate::C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid too small: need at least {need} points per axis, got {nx} x {ny}")]
    GridTooSmall { need: usize, nx: usize, ny: usize },
    #[error("field length {len} does not match grid {nx} x {ny}")]
    FieldSizeMismatch { len: usize, nx: usize, ny: usize },
}

/// Complex samples of one field on a uniform (x, y) grid, row-major in x.
#[derive(Debug, Clone)]
pub struct Grid2D {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<C64>,
    /// Width of the boundary ring on which `values` are not valid.
    pub invalid_margin: usize,
}

impl Grid2D {
    pub fn new(x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize) -> Result<Self, GridError> {
        if nx < 5 || ny < 5 {
            return Err(GridError::GridTooSmall { need: 5, nx, ny });
        }
        Ok(Grid2D {
            x0,
            y0,
            dx,
            dy,
            nx,
            ny,
            values: vec![C64::new(0.0, 0.0); nx * ny],
            invalid_margin: 0,
        })
    }

    /// Grid covering [x0, x1] x [y0, y1] with nx x ny points.
    pub fn covering(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<Self, GridError> {
        let dx = (x1 - x0) / (nx as f64 - 1.0);
        let dy = (y1 - y0) / (ny as f64 - 1.0);
        Grid2D::new(x0, y0, dx, dy, nx, ny)
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.dx * i as f64
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.y0 + self.dy * j as f64
    }

    #[inline]
    pub fn z(&self, i: usize, j: usize) -> C64 {
        C64::new(self.x(i), self.y(j))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let k = self.idx(i, j);
        self.values[k] = v;
    }

    pub fn fill_with(&mut self, f: impl Fn(C64) -> C64) {
        for i in 0..self.nx {
            for j in 0..self.ny {
                let z = self.z(i, j);
                self.set(i, j, f(z));
            }
        }
    }

    pub fn like(&self) -> Grid2D {
        Grid2D {
            values: vec![C64::new(0.0, 0.0); self.nx * self.ny],
            ..self.clone()
        }
    }

    /// Max modulus over points at least `margin` away from the boundary.
    pub fn interior_max(&self, margin: usize) -> f64 {
        let m = margin.max(self.invalid_margin);
        let mut best: f64 = 0.0;
        for i in m..self.nx - m {
            for j in m..self.ny - m {
                best = best.max(self.get(i, j).norm());
            }
        }
        best
    }

    /// RMS over the same interior.
    pub fn interior_l2(&self, margin: usize) -> f64 {
        let m = margin.max(self.invalid_margin);
        let mut acc = 0.0;
        let mut cnt = 0usize;
        for i in m..self.nx - m {
            for j in m..self.ny - m {
                acc += self.get(i, j).norm_sqr();
                cnt += 1;
            }
        }
        (acc / cnt.max(1) as f64).sqrt()
    }
}

pub struct WirtingerDerivs {
    pub dz: Grid2D,
    pub dzb: Grid2D,
    pub dzdzb: Grid2D,
}

/// Second-order central Wirtinger derivatives of a field.
pub fn wirtinger_derivatives(f: &Grid2D) -> Result<WirtingerDerivs, GridError> {
    if f.nx < 5 || f.ny < 5 {
        return Err(GridError::GridTooSmall {
            need: 5,
            nx: f.nx,
            ny: f.ny,
        });
    }
    if f.values.len() != f.nx * f.ny {
        return Err(GridError::FieldSizeMismatch {
            len: f.values.len(),
            nx: f.nx,
            ny: f.ny,
        });
    }
    let nan = C64::new(f64::NAN, f64::NAN);
    let mut dz = f.like();
    let mut dzb = f.like();
    let mut dmx = f.like();
    for g in [&mut dz, &mut dzb, &mut dmx] {
        g.values.fill(nan);
        g.invalid_margin = f.invalid_margin + 1;
    }
    let i_half = C64::new(0.0, 0.5);
    for i in 1..f.nx - 1 {
        for j in 1..f.ny - 1 {
            let fx = (f.get(i + 1, j) - f.get(i - 1, j)) / (2.0 * f.dx);
            let fy = (f.get(i, j + 1) - f.get(i, j - 1)) / (2.0 * f.dy);
            dz.set(i, j, fx * 0.5 - fy * i_half);
            dzb.set(i, j, fx * 0.5 + fy * i_half);
            // dz dzb = (fxx + fyy)/4
            let fxx = (f.get(i + 1, j) - f.get(i, j) * 2.0 + f.get(i - 1, j)) / (f.dx * f.dx);
            let fyy = (f.get(i, j + 1) - f.get(i, j) * 2.0 + f.get(i, j - 1)) / (f.dy * f.dy);
            dmx.set(i, j, (fxx + fyy) * 0.25);
        }
    }
    Ok(WirtingerDerivs {
        dz,
        dzb,
        dzdzb: dmx,
    })
}
