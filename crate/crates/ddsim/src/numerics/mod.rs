//! Shared numerical kernels: adaptive Gauss-Kronrod quadrature,
//! golden-section refinement and a Nelder-Mead simplex.

pub mod optim;
pub mod quad;

/// sin(x)/x with the removable singularity handled by series expansion.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}
