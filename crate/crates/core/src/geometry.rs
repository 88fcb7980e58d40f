//! Closed-form single-bounce ray geometry.
//!
//! Every path length and angle here is computed from wall distances, the
//! way the model states them, rather than from coordinates. Arrival angles
//! `aoa_rx` are frame angles of the direction from the Rx toward the
//! scatterer; departure angles `aod_tx` are frame angles of the direction
//! from the Tx toward the scatterer. Both are measured at the array center.
//! Element spacing changes path lengths only, through a plane-wave
//! projection of the half-spacing onto the ray.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::math::{wrap_angle, Vec2};
use crate::scatter::{Family, Scatterer};
use crate::scene::{CornerFrame, Scene};

/// Tx array element. `P` sits half a spacing ahead of the array center
/// along the heading axis, `PPrime` half a spacing behind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TxElement {
    P,
    PPrime,
}

/// Rx array element, same layout as [`TxElement`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RxElement {
    Q,
    QPrime,
}

impl TxElement {
    pub const ALL: [TxElement; 2] = [TxElement::P, TxElement::PPrime];

    pub fn sign(self) -> f64 {
        match self {
            TxElement::P => 1.0,
            TxElement::PPrime => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TxElement::P => "p",
            TxElement::PPrime => "p'",
        }
    }
}

impl RxElement {
    pub const ALL: [RxElement; 2] = [RxElement::Q, RxElement::QPrime];

    pub fn sign(self) -> f64 {
        match self {
            RxElement::Q => 1.0,
            RxElement::QPrime => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RxElement::Q => "q",
            RxElement::QPrime => "q'",
        }
    }
}

/// Terminal positions and array layout at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Terminals {
    pub tx: Vec2,
    pub rx: Vec2,
    /// Frame angle of the Tx array axis (its heading).
    pub tx_axis: f64,
    /// Frame angle of the Rx array axis (its heading).
    pub rx_axis: f64,
    pub delta_t: f64,
    pub delta_r: f64,
}

impl Terminals {
    pub fn of(scene: &Scene) -> Self {
        Self {
            tx: scene.tx().position,
            rx: scene.rx().position,
            tx_axis: scene.tx().heading,
            rx_axis: scene.rx().heading,
            delta_t: scene.config().delta_t,
            delta_r: scene.config().delta_r,
        }
    }
}

/// One resolved single-bounce ray for a given element pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayGeometry {
    pub family: Family,
    pub scatterer: Vec2,
    /// Departure angle at the Tx, frame angle.
    pub aod_tx: f64,
    /// Arrival angle at the Rx, frame angle of the Rx-to-scatterer direction.
    pub aoa_rx: f64,
    /// Incidence angle at the scatterer, signed, from the local normal.
    pub aoa_scatterer: f64,
    /// Re-emission angle at the scatterer, signed, from the local normal.
    pub aod_scatterer: f64,
    pub len_tx_s: f64,
    pub len_s_rx: f64,
    pub len_elem_tx: f64,
    pub len_elem_rx: f64,
    /// Wall-distance bearing of the scatterer seen from the Tx (mobile only).
    pub aux_mu_t: Option<f64>,
    /// Wall-distance bearing of the scatterer seen from the Rx (mobile only).
    pub aux_mu_r: Option<f64>,
}

impl RayGeometry {
    /// Element-to-element path length.
    pub fn path_length(&self) -> f64 {
        self.len_elem_tx + self.len_elem_rx
    }
}

/// `base_len - delta/2 * elem_sign * cos(heading - angle)`.
///
/// Tx-side callers pass `(tx_axis, aod)`; Rx-side callers pass
/// `(aoa, rx_axis)`.
pub fn element_offset(
    base_len: f64,
    delta: f64,
    elem_sign: f64,
    heading: f64,
    angle: f64,
) -> Result<f64> {
    let len = base_len - 0.5 * delta * elem_sign * libm::cos(heading - angle);
    if len > 0.0 {
        Ok(len)
    } else {
        Err(Error::ElementCorrection(len))
    }
}

struct Distances {
    t1: f64,
    t2: f64,
    r1: f64,
    r2: f64,
}

fn distances(t: &Terminals) -> Distances {
    let tx = CornerFrame::wall_distances(t.tx);
    let rx = CornerFrame::wall_distances(t.rx);
    Distances {
        t1: tx.h1,
        t2: tx.h2,
        r1: rx.h1,
        r2: rx.h2,
    }
}

fn check_aod(angle: f64, lo: f64, hi: f64) -> Result<()> {
    if angle > lo && angle < hi {
        Ok(())
    } else {
        Err(Error::AodOutOfRange { angle, lo, hi })
    }
}

fn check_coupling(angle: f64, lo: f64, hi: f64) -> Result<()> {
    if angle > lo && angle < hi {
        Ok(())
    } else {
        Err(Error::InvalidCoupling { angle })
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    t: &Terminals,
    family: Family,
    scatterer: Vec2,
    aod_tx: f64,
    aoa_rx: f64,
    aoa_scatterer: f64,
    aod_scatterer: f64,
    len_tx_s: f64,
    len_s_rx: f64,
    tx: TxElement,
    rx: RxElement,
) -> Result<RayGeometry> {
    let len_elem_tx = element_offset(len_tx_s, t.delta_t, tx.sign(), t.tx_axis, aod_tx)?;
    let len_elem_rx = element_offset(len_s_rx, t.delta_r, rx.sign(), aoa_rx, t.rx_axis)?;
    Ok(RayGeometry {
        family,
        scatterer,
        aod_tx,
        aoa_rx,
        aoa_scatterer,
        aod_scatterer,
        len_tx_s,
        len_s_rx,
        len_elem_tx,
        len_elem_rx,
        aux_mu_t: None,
        aux_mu_r: None,
    })
}

/// Ray off wall W1 leaving the Tx at `aod` in (0, pi/2).
pub fn wall1_geometry(t: &Terminals, aod: f64, tx: TxElement, rx: RxElement) -> Result<RayGeometry> {
    check_aod(aod, 0.0, FRAC_PI_2)?;
    wall1_unchecked(t, aod, tx, rx)
}

fn wall1_unchecked(t: &Terminals, aod: f64, tx: TxElement, rx: RxElement) -> Result<RayGeometry> {
    let h = distances(t);
    let run = h.t1 / libm::tan(aod);
    let len_tx_s = h.t1 / libm::sin(aod);
    // two-argument form of pi - arctan(h_R1 / (h_T2 - h_T1/tan(aod) - h_R2))
    let aoa = libm::atan2(h.r1, -(h.t2 - run - h.r2));
    check_coupling(aoa, 0.0, PI)?;
    let len_s_rx = h.r1 / libm::sin(aoa);
    finish(
        t,
        Family::Wall1,
        Vec2::new(-h.t2 + run, 0.0),
        aod,
        aoa,
        aod - FRAC_PI_2,
        aoa - FRAC_PI_2,
        len_tx_s,
        len_s_rx,
        tx,
        rx,
    )
}

/// Ray off wall W2 leaving the Tx at `aod` in (-pi/2, 0).
pub fn wall2_geometry(t: &Terminals, aod: f64, tx: TxElement, rx: RxElement) -> Result<RayGeometry> {
    check_aod(aod, -FRAC_PI_2, 0.0)?;
    wall2_unchecked(t, aod, tx, rx)
}

fn wall2_unchecked(t: &Terminals, aod: f64, tx: TxElement, rx: RxElement) -> Result<RayGeometry> {
    let h = distances(t);
    let rise = h.t2 * libm::tan(aod);
    let len_tx_s = h.t2 / libm::cos(aod);
    let aoa = libm::atan2(h.r1 - h.t1 + rise, h.r2);
    check_coupling(aoa, -FRAC_PI_2, FRAC_PI_2)?;
    let len_s_rx = h.r2 / libm::cos(aoa);
    finish(
        t,
        Family::Wall2,
        Vec2::new(0.0, -h.t1 + rise),
        aod,
        aoa,
        aod,
        aoa,
        len_tx_s,
        len_s_rx,
        tx,
        rx,
    )
}

/// Arrival angle of a disc scatterer from its departure angle.
///
/// `aod` and `mu_t` share the Tx bearing convention of [`mobile_geometry`];
/// the result shares the Rx bearing convention of `mu_r`.
pub fn couple_mobile_aoa(aod: f64, mu_t: f64, mu_r: f64, len_tx_s: f64, len_s_rx: f64) -> f64 {
    libm::atan(libm::tan(aod - mu_t) * len_tx_s / len_s_rx) + mu_r
}

/// Ray off a mobile scatterer at `position`.
pub fn mobile_geometry(
    t: &Terminals,
    position: Vec2,
    tx: TxElement,
    rx: RxElement,
) -> Result<RayGeometry> {
    let h = distances(t);
    let m = CornerFrame::wall_distances(position);
    let len_tx_s = libm::hypot(m.h1 - h.t1, m.h2 - h.t2);
    let len_s_rx = libm::hypot(m.h1 - h.r1, m.h2 - h.r2);
    if !(len_tx_s > 0.0 && len_s_rx > 0.0) {
        return Err(Error::DegenerateRay);
    }
    // Bearings from wall distances. mu_t runs clockwise from +x;
    // mu_r runs counter-clockwise from +y.
    let mu_t = libm::atan2(m.h1 - h.t1, h.t2 - m.h2);
    let mu_r = libm::atan2(m.h2 - h.r2, h.r1 - m.h1);
    // A point scatterer departs exactly along its own bearing.
    let aod_bearing = mu_t;
    let aod_tx = wrap_angle(-aod_bearing);
    let aoa_rx = wrap_angle(couple_mobile_aoa(aod_bearing, mu_t, mu_r, len_tx_s, len_s_rx) + FRAC_PI_2);
    // Local normal bisects the directions toward Tx and Rx.
    let spread = wrap_angle(aod_tx - aoa_rx);
    let mut ray = finish(
        t,
        Family::Mobile,
        position,
        aod_tx,
        aoa_rx,
        0.5 * spread,
        -0.5 * spread,
        len_tx_s,
        len_s_rx,
        tx,
        rx,
    )?;
    ray.aux_mu_t = Some(mu_t);
    ray.aux_mu_r = Some(mu_r);
    Ok(ray)
}

/// Ray through an existing scatterer, dispatched on its family.
///
/// Wall scatterers are fixed in place, so as the Tx moves their departure
/// angle drifts; the closed forms stay valid on (0, pi) for W1 and on
/// (-pi/2, pi/2) for W2.
pub fn ray_to(t: &Terminals, s: &Scatterer, tx: TxElement, rx: RxElement) -> Result<RayGeometry> {
    match s.family {
        Family::Wall1 => {
            let aod = libm::atan2(-t.tx.y, s.position.x - t.tx.x);
            check_aod(aod, 0.0, PI)?;
            wall1_unchecked(t, aod, tx, rx)
        }
        Family::Wall2 => {
            let aod = libm::atan2(s.position.y - t.tx.y, -t.tx.x);
            check_aod(aod, -FRAC_PI_2, FRAC_PI_2)?;
            wall2_unchecked(t, aod, tx, rx)
        }
        Family::Mobile => mobile_geometry(t, s.position, tx, rx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{build_scene, ScenarioConfig};
    use core::f64::consts::FRAC_PI_4;

    fn defaults() -> Terminals {
        Terminals::of(&build_scene(ScenarioConfig::default()).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    /// Coordinate oracle: explicit positions, Euclidean distances, atan2
    /// bearings, and a dot-product projection for element offsets.
    fn oracle(t: &Terminals, s: Vec2, tx: TxElement, rx: RxElement) -> [f64; 6] {
        let to_s = s - t.tx;
        let from_rx = s - t.rx;
        let u_tx = Vec2::from_angle(t.tx_axis) * (0.5 * t.delta_t * tx.sign());
        let u_rx = Vec2::from_angle(t.rx_axis) * (0.5 * t.delta_r * rx.sign());
        [
            to_s.norm(),
            from_rx.norm(),
            to_s.norm() - u_tx.dot(to_s.normalized()),
            from_rx.norm() - u_rx.dot(from_rx.normalized()),
            to_s.angle(),
            from_rx.angle(),
        ]
    }

    fn assert_matches_oracle(t: &Terminals, g: &RayGeometry, tx: TxElement, rx: RxElement) {
        let o = oracle(t, g.scatterer, tx, rx);
        assert!(rel(g.len_tx_s, o[0]) < 1e-9, "{} vs {}", g.len_tx_s, o[0]);
        assert!(rel(g.len_s_rx, o[1]) < 1e-9);
        assert!(rel(g.len_elem_tx, o[2]) < 1e-9);
        assert!(rel(g.len_elem_rx, o[3]) < 1e-9);
        assert!(wrap_angle(g.aod_tx - o[4]).abs() < 1e-9);
        assert!(wrap_angle(g.aoa_rx - o[5]).abs() < 1e-9);
    }

    #[test]
    fn wall1_trivial_lengths() {
        let t = defaults();
        let g = wall1_geometry(&t, FRAC_PI_2 - 1e-12, TxElement::P, RxElement::Q).unwrap();
        assert!(rel(g.len_tx_s, 40.0) < 1e-12);
        let g = wall1_geometry(&t, PI / 6.0, TxElement::P, RxElement::Q).unwrap();
        assert!(rel(g.len_tx_s, 80.0) < 1e-12);
    }

    #[test]
    fn wall1_matches_oracle() {
        let t = defaults();
        for tx in TxElement::ALL {
            for rx in RxElement::ALL {
                let g = wall1_geometry(&t, FRAC_PI_4, tx, rx).unwrap();
                assert_eq!(g.scatterer.y, 0.0);
                assert!((g.scatterer.x - 37.0).abs() < 1e-12);
                assert_matches_oracle(&t, &g, tx, rx);
            }
        }
    }

    #[test]
    fn wall1_rejects_out_of_range() {
        let t = defaults();
        assert!(matches!(
            wall1_geometry(&t, -0.1, TxElement::P, RxElement::Q),
            Err(Error::AodOutOfRange { .. })
        ));
        assert!(wall1_geometry(&t, FRAC_PI_2, TxElement::P, RxElement::Q).is_err());
    }

    #[test]
    fn wall1_branch_at_rx_abscissa() {
        // Scatterer directly above the Rx: denominator of the single-argument
        // form vanishes, the two-argument form gives pi/2.
        let t = Terminals { tx: Vec2::new(-3.0, -40.0), rx: Vec2::new(-1.0, -3.0), ..defaults() };
        let aod = libm::atan2(40.0, 2.0);
        let g = wall1_geometry(&t, aod, TxElement::P, RxElement::Q).unwrap();
        assert!((g.aoa_rx - FRAC_PI_2).abs() < 1e-12);
        assert!(rel(g.len_s_rx, 3.0) < 1e-12);
    }

    #[test]
    fn wall2_trivial_lengths() {
        let t = defaults();
        let g = wall2_geometry(&t, -1e-12, TxElement::P, RxElement::Q).unwrap();
        assert!(rel(g.len_tx_s, 3.0) < 1e-12);
        let g = wall2_geometry(&t, -PI / 3.0, TxElement::P, RxElement::Q).unwrap();
        assert!(rel(g.len_tx_s, 6.0) < 1e-12);
        assert!(wall2_geometry(&t, 0.0, TxElement::P, RxElement::Q).is_err());
    }

    #[test]
    fn wall2_matches_oracle() {
        let t = defaults();
        for tx in TxElement::ALL {
            for rx in RxElement::ALL {
                let g = wall2_geometry(&t, -FRAC_PI_4, tx, rx).unwrap();
                assert_eq!(g.scatterer.x, 0.0);
                assert_matches_oracle(&t, &g, tx, rx);
            }
        }
    }

    #[test]
    fn mobile_default_lengths() {
        let t = defaults();
        let g = mobile_geometry(&t, Vec2::new(-8.0, -8.0), TxElement::P, RxElement::Q).unwrap();
        assert!(rel(g.len_tx_s, libm::sqrt(1049.0)) < 1e-15);
        assert!((g.len_tx_s - 32.388).abs() < 1e-3);
        assert_matches_oracle(&t, &g, TxElement::P, RxElement::Q);
        assert!(g.aux_mu_t.is_some() && g.aux_mu_r.is_some());
    }

    #[test]
    fn mobile_symmetric_point() {
        // Tx (-3,-40) and Rx (-40,-3) are mirror images across y = x.
        let t = defaults();
        let g = mobile_geometry(&t, Vec2::new(-12.5, -12.5), TxElement::P, RxElement::Q).unwrap();
        assert!(rel(g.len_tx_s, g.len_s_rx) < 1e-14);
    }

    #[test]
    fn mobile_coincident_is_degenerate() {
        let t = defaults();
        assert_eq!(
            mobile_geometry(&t, t.tx, TxElement::P, RxElement::Q),
            Err(Error::DegenerateRay)
        );
    }

    #[test]
    fn mobile_scatterer_angles_bisect() {
        let t = defaults();
        let s = Vec2::new(-9.0, -7.0);
        let g = mobile_geometry(&t, s, TxElement::P, RxElement::Q).unwrap();
        let to_tx = (t.tx - s).normalized();
        let to_rx = (t.rx - s).normalized();
        let n = (to_tx + to_rx).normalized();
        assert!((libm::cos(g.aoa_scatterer) - n.dot(to_tx)).abs() < 1e-12);
        assert!((libm::cos(g.aod_scatterer) - n.dot(to_rx)).abs() < 1e-12);
    }

    #[test]
    fn element_offset_values() {
        assert_eq!(element_offset(10.0, 0.5, 1.0, 0.0, 0.0).unwrap(), 9.75);
        assert!((element_offset(10.0, 0.5, 1.0, FRAC_PI_2, 0.0).unwrap() - 10.0).abs() < 1e-15);
        assert!((element_offset(10.0, 0.5, -1.0, 0.0, FRAC_PI_2).unwrap() - 10.0).abs() < 1e-15);
        assert_eq!(element_offset(10.0, 0.5, -1.0, 0.0, 0.0).unwrap(), 10.25);
        assert!(matches!(
            element_offset(0.2, 0.5, 1.0, 0.0, 0.0),
            Err(Error::ElementCorrection(_))
        ));
    }

    #[test]
    fn far_field_projection_is_close_to_exact() {
        // The projected element length differs from the exact element-to-
        // scatterer distance by at most (delta/2)^2 / base.
        let t = defaults();
        let g = wall1_geometry(&t, 1.2, TxElement::P, RxElement::Q).unwrap();
        let elem = t.tx + Vec2::from_angle(t.tx_axis) * (0.5 * t.delta_t);
        let exact = elem.distance(g.scatterer);
        assert!((exact - g.len_elem_tx).abs() <= 0.0625 / g.len_tx_s);
    }
}
