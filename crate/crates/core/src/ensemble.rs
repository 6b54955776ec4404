//! Ensemble density matrices: equilibrium, pseudo-pure preparation by
//! averaging three permuted experiments, pulses and free precession.
//!
//! Only Hermiticity and unit trace are enforced on a [`DensityMatrix`];
//! pseudo-pure bookkeeping routinely deals with trace-one Hermitian
//! matrices whose deviation part is not positive on its own.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Dim, C64};
use crate::pulse::{gate_u1, gate_u2};
use crate::spin::{p, Level, SpinModel};

/// Tolerance on Hermiticity and trace for a valid density matrix.
pub const STATE_TOL: f64 = 1e-12;

/// Tolerance on `U·U† = 1` accepted by [`apply_unitary`].
pub const UNITARITY_TOL: f64 = 1e-10;

/// Largest off-diagonal modulus still read as a diagonal state.
pub const DIAGONAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.dim() != Dim::Four {
            return Err(Error::DimensionMismatch {
                left: 4,
                right: mat.size(),
            });
        }
        mat.check_finite()?;
        if !mat.is_hermitian(STATE_TOL) {
            return Err(Error::State("not Hermitian"));
        }
        if (mat.trace() - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::State("trace is not 1"));
        }
        Ok(DensityMatrix(mat))
    }

    /// `(1/4)·1`.
    pub fn maximally_mixed() -> Self {
        DensityMatrix(ComplexMatrix::identity(Dim::Four).scale_real(0.25))
    }

    /// Pure state on a single level.
    pub fn basis(level: Level) -> Self {
        let m = level.index();
        DensityMatrix(p(m, m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn populations(&self) -> [f64; 4] {
        [1, 2, 3, 4].map(|m| self.0.get(m, m).re)
    }

    /// Largest off-diagonal modulus.
    pub fn coherence_norm(&self) -> f64 {
        self.0
            .off_diagonal()
            .map(|(_, _, z)| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Coefficients of the averaged state `Z[α·1 + β·P44]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PseudoPureParams {
    pub alpha: f64,
    pub beta: f64,
    pub z: f64,
}

impl PseudoPureParams {
    /// `Z[α·1 + β·P_mm]`; level 4 is the `|00>` preparation.
    pub fn state(&self, level: Level) -> DensityMatrix {
        let m = level.index();
        let mat = ComplexMatrix::identity(Dim::Four).scale_real(self.z * self.alpha)
            + p(m, m).scale_real(self.z * self.beta);
        DensityMatrix(mat)
    }
}

/// Diagonal entries of a diagonal state, with the identity coefficient
/// pinned to zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiagonalPopulations {
    pub mu0: f64,
    pub mu: [f64; 4],
}

/// `Z[1 + Σ λ_m P_mm]`.
pub fn equilibrium_density(model: &SpinModel) -> DensityMatrix {
    let z = model.z();
    let diag = model.lambdas().map(|l| z * (1.0 + l));
    DensityMatrix(ComplexMatrix::diagonal(&diag).expect("finite lambdas"))
}

/// Boltzmann state `exp(Σ λ_m P_mm) / Tr`, of which [`equilibrium_density`]
/// is the first-order expansion.
pub fn boltzmann_density(model: &SpinModel) -> DensityMatrix {
    let w = model.lambdas().map(f64::exp);
    let total: f64 = w.iter().sum();
    DensityMatrix(ComplexMatrix::diagonal(&w.map(|x| x / total)).expect("finite lambdas"))
}

/// `U ρ U†`.
pub fn apply_unitary(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    if u.dim() != Dim::Four {
        return Err(Error::DimensionMismatch {
            left: 4,
            right: u.size(),
        });
    }
    if !u.is_unitary(UNITARITY_TOL) {
        return Err(Error::Evolution("propagator is not unitary"));
    }
    Ok(DensityMatrix(rho.0.conjugate_by(u)?))
}

/// α = 1 + (λ1+λ2+λ3)/3, β = λ4 − (λ1+λ2+λ3)/3.
pub fn alpha_beta(model: &SpinModel) -> PseudoPureParams {
    let l = model.lambdas();
    let third = (l[0] + l[1] + l[2]) / 3.0;
    PseudoPureParams {
        alpha: 1.0 + third,
        beta: l[3] - third,
        z: model.z(),
    }
}

/// Mean of the three experiments `U_comp`, `U_comp·U1`, `U_comp·U2` run on
/// the equilibrium state.
///
/// U1 and U2 cycle levels 1→2→3 and 1→3→2 while fixing level 4, so the
/// average spreads the populations of levels 1..3 evenly and leaves the
/// result equal to `U_comp Z[α·1 + β·P44] U_comp†`.
pub fn pseudo_pure_average(model: &SpinModel, u_comp: &ComplexMatrix) -> Result<DensityMatrix> {
    let eq = equilibrium_density(model);
    let runs = [
        *u_comp,
        u_comp.mat_mul(&gate_u1())?,
        u_comp.mat_mul(&gate_u2())?,
    ];
    let mut sum = ComplexMatrix::zeros(Dim::Four);
    for u in &runs {
        sum = sum.checked_add(apply_unitary(&eq, u)?.matrix())?;
    }
    Ok(DensityMatrix(sum.scale_real(1.0 / 3.0)))
}

/// Evolution under `H0` for `t` seconds: `exp(−iH0t) ρ exp(iH0t)`.
///
/// Entry `(m, n)` picks up `exp(−i(E_m − E_n)t)`; populations are untouched.
pub fn free_precession(model: &SpinModel, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if !t.is_finite() {
        return Err(Error::Evolution("evolution time must be finite"));
    }
    let e = model.energies();
    let mut out = rho.0;
    for (m, n, z) in rho.0.off_diagonal() {
        let phase = -(e[m - 1] - e[n - 1]) * t;
        out.set(m, n, z * C64::from_polar(1.0, phase));
    }
    Ok(DensityMatrix(out))
}

pub fn diagonal_populations(rho: &DensityMatrix) -> Result<DiagonalPopulations> {
    diagonal_populations_with_tol(rho, DIAGONAL_TOL)
}

pub fn diagonal_populations_with_tol(rho: &DensityMatrix, tol: f64) -> Result<DiagonalPopulations> {
    if rho.coherence_norm() > tol {
        return Err(Error::State("not diagonal"));
    }
    Ok(DiagonalPopulations {
        mu0: 0.0,
        mu: rho.populations(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::gate_u3;
    use crate::spin::{build_model, SpinModelConfig};

    fn model() -> SpinModel {
        build_model(SpinModelConfig::default()).unwrap()
    }

    fn with_lambdas(l: [f64; 4]) -> SpinModel {
        model().with_lambdas(l).unwrap()
    }

    #[test]
    fn equilibrium_examples() {
        let rho = equilibrium_density(&with_lambdas([0.0; 4]));
        assert!(rho
            .matrix()
            .approx_eq(DensityMatrix::maximally_mixed().matrix(), 0.0));
        let rho = equilibrium_density(&with_lambdas([-0.3, -0.1, 0.1, 0.3]));
        let expect = [0.25 * 0.7, 0.25 * 0.9, 0.25 * 1.1, 0.25 * 1.3];
        for (got, want) in rho.populations().iter().zip(expect) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(Dim::Four)).is_err());
        let skew = *DensityMatrix::maximally_mixed().matrix() + p(1, 2).scale_real(0.1);
        assert_eq!(DensityMatrix::new(skew), Err(Error::State("not Hermitian")));
        assert!(DensityMatrix::new(ComplexMatrix::identity(Dim::Two).scale_real(0.5)).is_err());
    }

    #[test]
    fn apply_unitary_examples() {
        let eq = equilibrium_density(&model());
        let id = ComplexMatrix::identity(Dim::Four);
        assert_eq!(apply_unitary(&eq, &id).unwrap(), eq);

        let pure4 = DensityMatrix::basis(Level::new(4).unwrap());
        assert_eq!(apply_unitary(&pure4, &gate_u1()).unwrap(), pure4);

        let mu = [0.4, 0.1, 0.3, 0.2];
        let rho = DensityMatrix::new(ComplexMatrix::diagonal(&mu).unwrap()).unwrap();
        let out = apply_unitary(&rho, &gate_u3()).unwrap();
        let m = out.matrix();
        assert!((m.get(1, 2).re - (mu[0] - mu[1]) / 2.0).abs() < 1e-15);
        assert!((m.get(3, 4).re - (mu[2] - mu[3]) / 2.0).abs() < 1e-15);

        let not_unitary = id.scale_real(1.1);
        assert_eq!(
            apply_unitary(&rho, &not_unitary),
            Err(Error::Evolution("propagator is not unitary"))
        );
    }

    #[test]
    fn alpha_beta_examples() {
        let ab = alpha_beta(&with_lambdas([0.0; 4]));
        assert_eq!((ab.alpha, ab.beta), (1.0, 0.0));
        let ab = alpha_beta(&with_lambdas([0.3, 0.1, -0.1, -0.3]));
        assert!((ab.alpha - 1.1).abs() < 1e-15 && (ab.beta + 0.4).abs() < 1e-15);
        let ab = alpha_beta(&with_lambdas([-0.3, -0.1, 0.1, 0.3]));
        assert!((ab.alpha - 0.9).abs() < 1e-15 && (ab.beta - 0.4).abs() < 1e-15);
        assert!((ab.z * (4.0 * ab.alpha + ab.beta) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pseudo_pure_with_identity_computation() {
        let m = model();
        let avg = pseudo_pure_average(&m, &ComplexMatrix::identity(Dim::Four)).unwrap();
        let target = alpha_beta(&m).state(Level::new(4).unwrap());
        assert!(avg.matrix().approx_eq(target.matrix(), 1e-15));

        let flat = with_lambdas([0.0; 4]);
        let avg = pseudo_pure_average(&flat, &gate_u3()).unwrap();
        assert!(avg
            .matrix()
            .approx_eq(DensityMatrix::maximally_mixed().matrix(), 1e-15));
    }

    #[test]
    fn free_precession_examples() {
        let m = model();
        let eq = equilibrium_density(&m);
        assert_eq!(free_precession(&m, &eq, 3.7).unwrap(), eq);

        let mut mat = *DensityMatrix::maximally_mixed().matrix();
        mat.set(2, 1, C64::new(0.1, 0.0));
        mat.set(1, 2, C64::new(0.1, 0.0));
        let rho = DensityMatrix::new(mat).unwrap();
        let t = 0.3;
        let out = free_precession(&m, &rho, t).unwrap();
        let expect = C64::from_polar(0.1, m.omega12() * t);
        assert!((out.matrix().get(2, 1) - expect).norm() < 1e-15);

        assert!(free_precession(&m, &rho, f64::NAN).is_err());
    }

    #[test]
    fn populations_of_diagonal_states() {
        let mu = diagonal_populations(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(mu.mu, [0.25; 4]);
        assert_eq!(mu.mu0, 0.0);

        let m = model();
        let ab = alpha_beta(&m);
        let mu = diagonal_populations(&ab.state(Level::new(4).unwrap())).unwrap();
        let za = ab.z * ab.alpha;
        assert_eq!(mu.mu[..3], [za, za, za]);
        assert!((mu.mu[3] - ab.z * (ab.alpha + ab.beta)).abs() < 1e-18);

        let mut mat = *DensityMatrix::maximally_mixed().matrix();
        mat.set(1, 2, C64::new(0.1, 0.0));
        mat.set(2, 1, C64::new(0.1, 0.0));
        let rho = DensityMatrix::new(mat).unwrap();
        assert_eq!(
            diagonal_populations(&rho),
            Err(Error::State("not diagonal"))
        );
    }
}
