//! Target atom model: ionisation potential, effective charge, and the
//! binding-potential family.

use crate::error::{Result, SfiError};
use crate::geom::Vec2;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    /// −z_eff/r.
    Coulomb,
    /// −z_eff·exp(−r/a)/r; the Coulomb potential is the a → ∞ limit.
    Yukawa { screening_length_au: f64 },
    /// −z_eff/√(r² + a²).
    SoftCore { a_au: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomModel {
    pub ip_au: f64,
    pub z_eff: f64,
    pub potential_kind: PotentialKind,
}

impl AtomModel {
    pub fn new(ip_au: f64, z_eff: f64, potential_kind: PotentialKind) -> Result<Self> {
        if !(ip_au > 0.0) {
            return Err(SfiError::InvalidParameter(format!(
                "ionisation potential must be positive, got {ip_au} a.u."
            )));
        }
        if !(z_eff >= 0.0) {
            return Err(SfiError::InvalidParameter(format!(
                "effective charge must be nonnegative, got {z_eff}"
            )));
        }
        match potential_kind {
            PotentialKind::Yukawa { screening_length_au } if !(screening_length_au > 0.0) => {
                return Err(SfiError::InvalidParameter(format!(
                    "Yukawa screening length must be positive, got {screening_length_au}"
                )));
            }
            PotentialKind::SoftCore { a_au } if !(a_au > 0.0) => {
                return Err(SfiError::InvalidParameter(format!(
                    "soft-core parameter must be positive, got {a_au}"
                )));
            }
            _ => {}
        }
        Ok(AtomModel {
            ip_au,
            z_eff,
            potential_kind,
        })
    }

    /// κ = √(2·Ip).
    pub fn kappa(&self) -> f64 {
        (2.0 * self.ip_au).sqrt()
    }

    /// Ionic potential at radius r (classical point evaluation).
    pub fn potential_r(&self, r: f64) -> f64 {
        if self.z_eff == 0.0 {
            return 0.0;
        }
        match self.potential_kind {
            PotentialKind::Coulomb => -self.z_eff / r,
            PotentialKind::Yukawa { screening_length_au } => {
                -self.z_eff * (-r / screening_length_au).exp() / r
            }
            PotentialKind::SoftCore { a_au } => -self.z_eff / (r * r + a_au * a_au).sqrt(),
        }
    }

    pub fn potential(&self, pos: Vec2) -> f64 {
        self.potential_r(pos.norm())
    }

    /// Ionic force −∇V on the electron at `pos`.
    pub fn force(&self, pos: Vec2) -> Vec2 {
        if self.z_eff == 0.0 {
            return Vec2::ZERO;
        }
        let r2 = pos.norm_sq();
        match self.potential_kind {
            PotentialKind::Coulomb => {
                let r = r2.sqrt();
                pos * (-self.z_eff / (r2 * r))
            }
            PotentialKind::Yukawa { screening_length_au } => {
                let r = r2.sqrt();
                let ex = (-r / screening_length_au).exp();
                pos * (-self.z_eff * ex * (1.0 / (r2 * r) + 1.0 / (screening_length_au * r2)))
            }
            PotentialKind::SoftCore { a_au } => {
                let d2 = r2 + a_au * a_au;
                pos * (-self.z_eff / (d2 * d2.sqrt()))
            }
        }
    }

    /// Potential evaluated with an additional grid softening a²; used by the
    /// grid solver where a bare 1/r is not representable. For the soft-core
    /// family the model's own parameter wins.
    pub fn potential_softened(&self, r2: f64, grid_a2: f64) -> f64 {
        if self.z_eff == 0.0 {
            return 0.0;
        }
        match self.potential_kind {
            PotentialKind::Coulomb => -self.z_eff / (r2 + grid_a2).sqrt(),
            PotentialKind::Yukawa { screening_length_au } => {
                let rs = (r2 + grid_a2).sqrt();
                -self.z_eff * (-rs / screening_length_au).exp() / rs
            }
            PotentialKind::SoftCore { a_au } => -self.z_eff / (r2 + a_au * a_au).sqrt(),
        }
    }

    /// Gradient dV/dr at radius r with grid softening (radial derivative of
    /// `potential_softened` with respect to a Cartesian coordinate is
    /// obtained by the caller via the chain rule).
    pub fn dv_dr_softened(&self, r2: f64, grid_a2: f64) -> f64 {
        if self.z_eff == 0.0 {
            return 0.0;
        }
        match self.potential_kind {
            PotentialKind::Coulomb => {
                let d2 = r2 + grid_a2;
                self.z_eff * r2.sqrt() / (d2 * d2.sqrt())
            }
            PotentialKind::Yukawa { screening_length_au } => {
                let d2 = r2 + grid_a2;
                let rs = d2.sqrt();
                let ex = (-rs / screening_length_au).exp();
                self.z_eff * ex * r2.sqrt() * (1.0 / (d2 * rs) + 1.0 / (screening_length_au * d2))
            }
            PotentialKind::SoftCore { a_au } => {
                let d2 = r2 + a_au * a_au;
                self.z_eff * r2.sqrt() / (d2 * d2.sqrt())
            }
        }
    }

    /// True when the radial tail is Coulombic (−z_eff/r as r → ∞).
    pub fn has_coulomb_tail(&self) -> bool {
        self.z_eff > 0.0
            && matches!(
                self.potential_kind,
                PotentialKind::Coulomb | PotentialKind::SoftCore { .. }
            )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kappa_squares_back_to_ip() {
        let a = AtomModel::new(0.5, 1.0, PotentialKind::Coulomb).unwrap();
        assert_eq!(a.kappa() * a.kappa() / 2.0, 0.5);
        let b = AtomModel::new(13.6 / crate::units::HARTREE_EV, 1.0, PotentialKind::Coulomb)
            .unwrap();
        assert_relative_eq!(b.kappa() * b.kappa() / 2.0, b.ip_au, max_relative = 1e-15);
    }

    #[test]
    fn yukawa_approaches_coulomb_for_long_screening() {
        let c = AtomModel::new(0.5, 1.0, PotentialKind::Coulomb).unwrap();
        let y = AtomModel::new(
            0.5,
            1.0,
            PotentialKind::Yukawa {
                screening_length_au: 1e9,
            },
        )
        .unwrap();
        for r in [0.3, 1.0, 5.0, 40.0] {
            assert_relative_eq!(y.potential_r(r), c.potential_r(r), max_relative = 1e-6);
        }
    }

    #[test]
    fn force_is_minus_gradient() {
        // Central-difference check for every potential family.
        let atoms = [
            AtomModel::new(0.5, 1.0, PotentialKind::Coulomb).unwrap(),
            AtomModel::new(
                0.5,
                1.7,
                PotentialKind::Yukawa {
                    screening_length_au: 3.0,
                },
            )
            .unwrap(),
            AtomModel::new(0.5, 1.0, PotentialKind::SoftCore { a_au: 0.8 }).unwrap(),
        ];
        let h = 1e-6;
        for atom in atoms {
            for pos in [Vec2::new(1.3, -0.7), Vec2::new(-4.0, 2.2), Vec2::new(0.4, 0.1)] {
                let fx = -(atom.potential(pos + Vec2::new(h, 0.0))
                    - atom.potential(pos + Vec2::new(-h, 0.0)))
                    / (2.0 * h);
                let fy = -(atom.potential(pos + Vec2::new(0.0, h))
                    - atom.potential(pos + Vec2::new(0.0, -h)))
                    / (2.0 * h);
                let f = atom.force(pos);
                assert_relative_eq!(f.x, fx, max_relative = 1e-6, epsilon = 1e-10);
                assert_relative_eq!(f.y, fy, max_relative = 1e-6, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(AtomModel::new(0.0, 1.0, PotentialKind::Coulomb).is_err());
        assert!(AtomModel::new(0.5, -1.0, PotentialKind::Coulomb).is_err());
        assert!(AtomModel::new(
            0.5,
            1.0,
            PotentialKind::Yukawa {
                screening_length_au: 0.0
            }
        )
        .is_err());
    }
}
