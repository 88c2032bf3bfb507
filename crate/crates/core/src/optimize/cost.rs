use crate::quantum::DensityMatrix;
use crate::scalar::Real;

/// Target state of the optimising player.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostSpec<T> {
    pub target: DensityMatrix<T>,
}

impl<T: Real> CostSpec<T> {
    pub fn new(target: DensityMatrix<T>) -> Self {
        Self { target }
    }
}

/// `½‖ρ(T) − ρ_T‖²_F`
pub fn cost<T: Real>(rho_final: &DensityMatrix<T>, spec: &CostSpec<T>) -> T {
    T::lit(0.5) * (*rho_final.matrix() - *spec.target.matrix()).frobenius_norm_sqr()
}
