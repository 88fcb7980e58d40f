//! Lambertian emission, photodiode collection area, and the FoV gate.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiometryParams {
    /// Lambertian mode number.
    pub alpha: f64,
    /// Photodiode area, m².
    pub area_rx: f64,
    /// Field-of-view half-angle, rad.
    pub fov: f64,
}

/// Radiant intensity per unit power, `(alpha + 1) / 2pi * cos^alpha(phi)`.
pub fn lambertian_intensity(phi: f64, alpha: f64) -> Result<f64> {
    if !(-FRAC_PI_2..=FRAC_PI_2).contains(&phi) {
        return Err(Error::LambertianDomain(phi));
    }
    // cos(pi/2) is 6e-17, not zero
    let c = if libm::fabs(phi) == FRAC_PI_2 { 0.0 } else { libm::cos(phi) };
    Ok((alpha + 1.0) / (2.0 * PI) * libm::pow(c, alpha))
}

/// 1 when `theta` lies inside the field of view, boundary included.
pub fn visibility(theta: f64, fov: f64) -> u8 {
    u8::from((0.0..=fov).contains(&theta))
}

/// Effective collection area `A_R cos(theta)` inside the FoV, else 0.
pub fn effective_area(theta: f64, params: &RadiometryParams) -> f64 {
    if visibility(theta, params.fov) == 1 {
        params.area_rx * libm::cos(theta)
    } else {
        0.0
    }
}
