//! Golden-ratio constants.
//!
//! Every coupling and projector coefficient in this crate is an algebraic
//! function of phi. The powers used in operator formulas are precomputed here
//! once, so the same f64 values appear everywhere.

/// phi = (1 + sqrt 5) / 2, the positive root of x^2 = x + 1.
pub fn phi() -> f64 {
    (1.0 + 5.0_f64.sqrt()) * 0.5
}

/// Frequently used powers of phi.
#[derive(Debug, Clone, Copy)]
pub struct Golden {
    pub phi: f64,
    pub inv_phi: f64,
    pub inv_phi2: f64,
    pub sqrt_phi: f64,
    pub inv_sqrt_phi: f64,
    pub phi_3_2: f64,
    pub inv_phi_3_2: f64,
    pub phi_5_2: f64,
}

impl Golden {
    pub fn new() -> Self {
        let phi = phi();
        let sqrt_phi = phi.sqrt();
        Golden {
            phi,
            inv_phi: 1.0 / phi,
            inv_phi2: 1.0 / (phi * phi),
            sqrt_phi,
            inv_sqrt_phi: 1.0 / sqrt_phi,
            phi_3_2: phi * sqrt_phi,
            inv_phi_3_2: 1.0 / (phi * sqrt_phi),
            phi_5_2: phi * phi * sqrt_phi,
        }
    }
}

impl Default for Golden {
    fn default() -> Self {
        Self::new()
    }
}
