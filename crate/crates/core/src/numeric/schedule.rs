//! Regularization schedules: the ε ladder, grid refinement levels, and
//! Richardson extrapolation along the diagonal of a convergence table.

use alloc::vec::Vec;

use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct Schedule {
    /// ε_m = eps0 · 4^{−m}, m = 0…eps_levels−1.
    pub eps0: f64,
    pub eps_levels: usize,
    /// Grid points per real dimension at level 0, doubled per level.
    pub grid_base: usize,
    pub grid_levels: usize,
    /// Exclusion margin around the singular locus: |F|² < margin².
    pub margin: f64,
    /// Finite-difference step for ∂̄ of operator fields.
    pub fd_step: f64,
    /// Whether the χ_ε(Q − u∇Q) part of R contributes (codimension 0).
    pub include_prime: bool,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            eps0: 0.5,
            eps_levels: 4,
            grid_base: 48,
            grid_levels: 3,
            margin: 1e-2,
            fd_step: 1e-3,
            include_prime: false,
        }
    }
}

impl Schedule {
    pub fn eps(&self, m: usize) -> f64 {
        self.eps0 * libm::pow(4.0, -(m as f64))
    }

    pub fn grid_n(&self, level: usize) -> usize {
        self.grid_base << level
    }

    /// Cells along the diagonal: (ε level, grid level) pairs, coarse to fine.
    pub fn diagonal(&self) -> Vec<(usize, usize)> {
        (0..self.eps_levels)
            .map(|m| (m, m.min(self.grid_levels.saturating_sub(1))))
            .collect()
    }
}

/// Values per (ε level, grid level).
#[derive(Clone, Debug)]
pub struct ConvergenceTable {
    pub cells: Vec<(usize, usize, Complex64)>,
}

#[derive(Clone, Debug)]
pub struct CurrentPairing {
    pub value: Complex64,
    pub error: f64,
    pub converged: bool,
    pub table: ConvergenceTable,
}

/// Geometric (Richardson-style) extrapolation on the diagonal sequence,
/// with the convergence ratio estimated from the last three iterates.
/// Returns (limit, error estimate, converged).
pub fn extrapolate(diag: &[Complex64]) -> (Complex64, f64, bool) {
    match diag.len() {
        0 => (Complex64::new(0.0, 0.0), f64::INFINITY, false),
        1 => (diag[0], f64::INFINITY, false),
        2 => {
            let err = (diag[1] - diag[0]).norm();
            (diag[1], err, err.is_finite())
        }
        n => {
            let a = diag[n - 3];
            let b = diag[n - 2];
            let c = diag[n - 1];
            let d1 = b - a;
            let d2 = c - b;
            let scale = c.norm().max(1e-300);
            if d2.norm() <= 1e-13 * scale {
                return (c, d2.norm().max(1e-15 * scale), true);
            }
            if d1.norm() <= 1e-13 * scale {
                // Stalled then jumped: no contraction estimate available.
                return (c, 2.0 * d2.norm(), false);
            }
            let q = d2 / d1;
            if q.norm() >= 0.95 {
                // Not contracting: report the raw value with a frank error.
                return (c, d2.norm(), false);
            }
            let limit = c + d2 * q / (1.0 - q);
            let err = (limit - c).norm() + d2.norm() * q.norm();
            (limit, err, true)
        }
    }
}

pub fn pairing_from_diag(
    diag_cells: &[(usize, usize)],
    values: &[Complex64],
) -> CurrentPairing {
    let (value, error, converged) = extrapolate(values);
    CurrentPairing {
        value,
        error,
        converged,
        table: ConvergenceTable {
            cells: diag_cells
                .iter()
                .zip(values)
                .map(|(&(m, l), &v)| (m, l, v))
                .collect(),
        },
    }
}
