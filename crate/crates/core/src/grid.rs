//! Rectangular sections `w -> (1/n) K_n(z, w)` of the exact kernel.

use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::ensure_finite;
use crate::{EnsembleParams, Error, ExactKernel, Result, Scalar};

/// Bounds and node counts of an evaluation grid. Nodes include both bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec<T> {
    pub re_min: T,
    pub re_max: T,
    pub im_min: T,
    pub im_max: T,
    pub steps_re: usize,
    pub steps_im: usize,
}

impl<T: Scalar> GridSpec<T> {
    /// The square `[-half, half]^2` with `steps` nodes per axis.
    pub fn square(half: T, steps: usize) -> Self {
        Self {
            re_min: -half,
            re_max: half,
            im_min: -half,
            im_max: half,
            steps_re: steps,
            steps_im: steps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.re_min, self.re_max, self.im_min, self.im_max] {
            if !v.is_finite() {
                return Err(Error::NonFinite("grid bound"));
            }
        }
        if !(self.re_min < self.re_max && self.im_min < self.im_max) {
            return Err(Error::InvalidArgument(
                "grid bounds must satisfy min < max".into(),
            ));
        }
        if self.steps_re < 2 || self.steps_im < 2 {
            return Err(Error::InvalidArgument(
                "grids need at least 2 steps per axis".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.steps_re * self.steps_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn step_re(&self) -> T {
        (self.re_max - self.re_min) / T::from_usize(self.steps_re - 1).unwrap()
    }

    pub fn step_im(&self) -> T {
        (self.im_max - self.im_min) / T::from_usize(self.steps_im - 1).unwrap()
    }

    pub fn node(&self, i_re: usize, i_im: usize) -> Complex<T> {
        Complex::new(
            self.re_min + T::from_usize(i_re).unwrap() * self.step_re(),
            self.im_min + T::from_usize(i_im).unwrap() * self.step_im(),
        )
    }

    /// Grid node closest to `z`, clamped to the grid.
    pub fn nearest(&self, z: Complex<T>) -> (usize, usize) {
        let snap = |x: T, lo: T, step: T, steps: usize| {
            let k = ((x - lo) / step).round();
            let k = k.max(T::zero()).min(T::from_usize(steps - 1).unwrap());
            k.to_usize().unwrap_or(0)
        };
        (
            snap(z.re, self.re_min, self.step_re(), self.steps_re),
            snap(z.im, self.im_min, self.step_im(), self.steps_im),
        )
    }
}

/// Kernel section sampled on a grid. `values` is row-major with the real
/// index outermost: node `(i_re, i_im)` sits at `i_re * steps_im + i_im`.
#[derive(Debug, Clone)]
pub struct KernelGrid<T> {
    pub fixed_z: Complex<T>,
    pub spec: GridSpec<T>,
    pub values: Vec<Complex<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakSummary<T> {
    pub peak_index: (usize, usize),
    pub peak_w: Complex<T>,
    pub peak_abs: T,
    pub nearest_index: (usize, usize),
    /// Whether the largest `|value|` sits on the node nearest `fixed_z`.
    pub peak_at_nearest: bool,
    /// Nodes in the connected region around the peak with `|value| >= peak/2`.
    pub half_max_nodes: usize,
    /// Diameter of the disk with the same area as that region.
    pub fwhm: T,
}

impl<T: Scalar> KernelGrid<T> {
    pub fn value(&self, i_re: usize, i_im: usize) -> Complex<T> {
        self.values[i_re * self.spec.steps_im + i_im]
    }

    /// Writes `re_w,im_w,re_k,im_k,abs_k`, one row per node, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "re_w,im_w,re_k,im_k,abs_k")?;
        for i in 0..self.spec.steps_re {
            for j in 0..self.spec.steps_im {
                let w = self.spec.node(i, j);
                let k = self.value(i, j);
                writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    w.re,
                    w.im,
                    k.re,
                    k.im,
                    k.norm()
                )?;
            }
        }
        Ok(())
    }

    pub fn peak(&self) -> PeakSummary<T> {
        let (mut best, mut best_abs) = (0usize, T::neg_infinity());
        for (idx, v) in self.values.iter().enumerate() {
            let a = v.norm();
            if a > best_abs {
                best = idx;
                best_abs = a;
            }
        }
        let cols = self.spec.steps_im;
        let peak_index = (best / cols, best % cols);
        let nearest_index = self.spec.nearest(self.fixed_z);
        let half_max_nodes = self.half_max_region(best, best_abs * T::lit(0.5));
        let area = T::from_usize(half_max_nodes).unwrap() * self.spec.step_re() * self.spec.step_im();
        PeakSummary {
            peak_index,
            peak_w: self.spec.node(peak_index.0, peak_index.1),
            peak_abs: best_abs,
            nearest_index,
            peak_at_nearest: peak_index == nearest_index,
            half_max_nodes,
            fwhm: T::lit(2.0) * (area / T::PI()).sqrt(),
        }
    }

    // 4-connected flood fill from `start` over nodes at or above `level`.
    fn half_max_region(&self, start: usize, level: T) -> usize {
        let (rows, cols) = (self.spec.steps_re, self.spec.steps_im);
        let mut seen = vec![false; self.values.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(idx) = stack.pop() {
            count += 1;
            let (i, j) = (idx / cols, idx % cols);
            let mut visit = |ni: usize, nj: usize| {
                let nidx = ni * cols + nj;
                if !seen[nidx] && self.values[nidx].norm() >= level {
                    seen[nidx] = true;
                    stack.push(nidx);
                }
            };
            if i > 0 {
                visit(i - 1, j);
            }
            if i + 1 < rows {
                visit(i + 1, j);
            }
            if j > 0 {
                visit(i, j - 1);
            }
            if j + 1 < cols {
                visit(i, j + 1);
            }
        }
        count
    }
}

/// Evaluates the exact kernel at every node. Each node is computed
/// independently, so the output does not depend on the thread count.
pub fn kernel_grid<T: Scalar>(
    params: &EnsembleParams<T>,
    z: Complex<T>,
    spec: GridSpec<T>,
) -> Result<KernelGrid<T>> {
    ensure_finite(z, "z")?;
    spec.validate()?;
    let kernel = ExactKernel::new(*params);
    let cols = spec.steps_im;
    let values = (0..spec.len())
        .into_par_iter()
        .map(|idx| kernel.eval(z, spec.node(idx / cols, idx % cols)))
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelGrid {
        fixed_z: z,
        spec,
        values,
    })
}
