//! Jacobi operators `(Hu)(n) = a(n+1)u(n+1) + b(n)u(n) + a(n)u(n−1)` built
//! from an orbit: coefficient assembly, Dirichlet finite sections and their
//! eigenvalues, solutions of `(H − E)u = 0`, section resolvents.

mod coefficients;
mod difference;
mod green;
mod section;

pub use coefficients::{assemble_coefficients, CoefficientWindow, SamplingFunctions};
pub use difference::{apply_operator, solve_difference_equation, weyl_residual, SiteVector, Solution};
pub use green::{
    combes_thomas_check, greens_function, solve_shifted, write_greens_csv, CombesThomasOptions, CombesThomasReport,
    SINGULAR_PIVOT,
};
pub use section::{write_eigenvalues_csv, FiniteSection};
