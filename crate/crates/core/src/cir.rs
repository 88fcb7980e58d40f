//! Tap-form channel impulse responses.
//!
//! A CIR is kept as an exact list of delayed, weighted Dirac taps. Each
//! tap weight is the fraction of transmitted optical power that reaches
//! the photodiode over one single-bounce path. Uniform-grid binning is a
//! view for plotting; metrics always read the taps.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::{ray_to, RayGeometry, RxElement, Terminals, TxElement};
use crate::math::wrap_angle;
use crate::optics::{effective_area, lambertian_intensity, visibility, RadiometryParams};
use crate::scatter::{Family, Scatterer};
use crate::scene::Scene;

/// Why a tap carries zero amplitude, if it does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TapStatus {
    Active,
    /// Arrival angle outside the receiver field of view.
    OutsideFov,
    /// The ray leaves the Tx or a scatterer surface from behind.
    Backside,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathTap {
    /// Seconds.
    pub delay: f64,
    pub amplitude: f64,
    pub family: Family,
    pub tx: TxElement,
    pub rx: RxElement,
    pub status: TapStatus,
}

impl PathTap {
    pub fn is_active(&self) -> bool {
        self.status == TapStatus::Active
    }
}

/// Taps of one element pair at one time instant, sorted by delay.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ImpulseResponse {
    taps: Vec<PathTap>,
    time: f64,
    tx: TxElement,
    rx: RxElement,
}

/// Amplitude histogram on a uniform delay grid starting at `origin`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedCir {
    pub bin_width: f64,
    pub origin: f64,
    pub bins: Vec<f64>,
}

impl BinnedCir {
    pub fn total(&self) -> f64 {
        self.bins.iter().sum()
    }
}

fn sort_taps(taps: &mut [PathTap]) {
    taps.sort_by(|a, b| a.delay.total_cmp(&b.delay));
}

impl ImpulseResponse {
    pub fn new(time: f64, tx: TxElement, rx: RxElement, mut taps: Vec<PathTap>) -> Self {
        sort_taps(&mut taps);
        Self { taps, time, tx, rx }
    }

    pub fn empty(time: f64, tx: TxElement, rx: RxElement) -> Self {
        Self::new(time, tx, rx, Vec::new())
    }

    pub fn taps(&self) -> &[PathTap] {
        &self.taps
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn link(&self) -> (TxElement, RxElement) {
        (self.tx, self.rx)
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Sum of tap amplitudes.
    pub fn total_power(&self) -> f64 {
        self.taps.iter().map(|t| t.amplitude).sum()
    }

    /// Smallest delay among active taps.
    pub fn min_active_delay(&self) -> Option<f64> {
        self.taps.iter().find(|t| t.is_active()).map(|t| t.delay)
    }

    pub fn of_family(&self, family: Family) -> impl Iterator<Item = &PathTap> {
        self.taps.iter().filter(move |t| t.family == family)
    }

    pub fn binned(&self, bin_width: f64) -> BinnedCir {
        let Some(first) = self.taps.first() else {
            return BinnedCir { bin_width, origin: 0.0, bins: Vec::new() };
        };
        let origin = libm::floor(first.delay / bin_width) * bin_width;
        let last = self.taps[self.taps.len() - 1].delay;
        let n = libm::floor((last - origin) / bin_width) as usize + 1;
        let mut bins = alloc::vec![0.0; n];
        for t in &self.taps {
            let k = (libm::floor((t.delay - origin) / bin_width) as usize).min(n - 1);
            bins[k] += t.amplitude;
        }
        BinnedCir { bin_width, origin, bins }
    }
}

/// Tap weight and delay for a resolved ray.
///
/// The weight is the Lambertian hop from the Tx to the scatterer times the
/// Lambertian hop from the scatterer to the photodiode:
/// `R(e_tx)/l1² · cos(i_s) · rho · R(e_s)/l2² · A_eff(i_rx)`, where the
/// emission and incidence angles are taken from each terminal's heading and
/// from the scatterer's surface normal.
pub fn tap_from_ray(
    ray: &RayGeometry,
    rho: f64,
    terminals: &Terminals,
    params: &RadiometryParams,
    c: f64,
    tx: TxElement,
    rx: RxElement,
) -> PathTap {
    let delay = ray.path_length() / c;
    let emission = wrap_angle(ray.aod_tx - terminals.tx_axis);
    let incidence = libm::fabs(wrap_angle(ray.aoa_rx - terminals.rx_axis));
    let mut tap = PathTap {
        delay,
        amplitude: 0.0,
        family: ray.family,
        tx,
        rx,
        status: TapStatus::Active,
    };
    if visibility(incidence, params.fov) == 0 {
        tap.status = TapStatus::OutsideFov;
        return tap;
    }
    let cos_in = libm::cos(ray.aoa_scatterer);
    let cos_out = libm::cos(ray.aod_scatterer);
    if libm::fabs(emission) > FRAC_PI_2 || cos_in < 0.0 || cos_out < 0.0 {
        tap.status = TapStatus::Backside;
        return tap;
    }
    // Both angles were range-checked above.
    let source = lambertian_intensity(emission, params.alpha).unwrap_or(0.0);
    let reradiated = lambertian_intensity(ray.aod_scatterer, params.alpha).unwrap_or(0.0);
    let l1 = ray.len_elem_tx;
    let l2 = ray.len_elem_rx;
    tap.amplitude = source / (l1 * l1) * cos_in * rho * reradiated / (l2 * l2)
        * effective_area(incidence, params);
    tap
}

/// Single-bounce tap through one scatterer at the scene's current instant.
pub fn sb_tap(scene: &Scene, s: &Scatterer, tx: TxElement, rx: RxElement) -> Result<PathTap> {
    let terminals = Terminals::of(scene);
    let ray = ray_to(&terminals, s, tx, rx)?;
    let config = scene.config();
    Ok(tap_from_ray(&ray, s.rho, &terminals, &config.radiometry(), config.c, tx, rx))
}

/// One tap per scatterer; zero-weight taps are kept with their status.
pub fn family_cir<'a>(
    scene: &Scene,
    scatterers: impl IntoIterator<Item = &'a Scatterer>,
    tx: TxElement,
    rx: RxElement,
) -> Result<ImpulseResponse> {
    let taps = scatterers
        .into_iter()
        .map(|s| sb_tap(scene, s, tx, rx))
        .collect::<Result<Vec<_>>>()?;
    Ok(ImpulseResponse::new(scene.time(), tx, rx, taps))
}

/// Superposition of the three single-bounce families of one link.
pub fn total_cir(
    sb11: ImpulseResponse,
    sb12: ImpulseResponse,
    sb13: ImpulseResponse,
) -> Result<ImpulseResponse> {
    let key = (sb11.time, sb11.link());
    if [&sb12, &sb13].iter().any(|r| (r.time, r.link()) != key) {
        return Err(Error::MismatchedLinks);
    }
    let mut taps = sb11.taps;
    taps.extend(sb12.taps);
    taps.extend(sb13.taps);
    Ok(ImpulseResponse::new(key.0, key.1 .0, key.1 .1, taps))
}

/// Total CIR of every (Tx element, Rx element) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MimoResponse {
    entries: [[ImpulseResponse; 2]; 2],
}

fn tx_index(e: TxElement) -> usize {
    match e {
        TxElement::P => 0,
        TxElement::PPrime => 1,
    }
}

fn rx_index(e: RxElement) -> usize {
    match e {
        RxElement::Q => 0,
        RxElement::QPrime => 1,
    }
}

impl MimoResponse {
    pub fn get(&self, tx: TxElement, rx: RxElement) -> &ImpulseResponse {
        &self.entries[tx_index(tx)][rx_index(rx)]
    }

    /// Entries in (p,q), (p,q'), (p',q), (p',q') order.
    pub fn iter(&self) -> impl Iterator<Item = &ImpulseResponse> {
        self.entries.iter().flatten()
    }
}

/// Total CIR of one link.
pub fn link_cir(scene: &Scene, tx: TxElement, rx: RxElement) -> Result<ImpulseResponse> {
    let [a, b, c] = Family::ALL.map(|f| family_cir(scene, scene.scatterers_of(f), tx, rx));
    total_cir(a?, b?, c?)
}

/// 2×2 MIMO response of the scene's scatterer realization.
pub fn mimo_matrix(scene: &Scene) -> Result<MimoResponse> {
    let row = |tx| -> Result<[ImpulseResponse; 2]> {
        Ok([link_cir(scene, tx, RxElement::Q)?, link_cir(scene, tx, RxElement::QPrime)?])
    };
    Ok(MimoResponse {
        entries: [row(TxElement::P)?, row(TxElement::PPrime)?],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub matrix: MimoResponse,
}

/// MIMO responses at each instant of `grid`, moving the scene between
/// instants. Scatterer identities carry over from one instant to the next.
pub fn evolve(scene: &Scene, grid: &[f64]) -> Result<Vec<Snapshot>> {
    let horizon = scene.config().horizon;
    let start = scene.time();
    let bad = Error::InvalidTimeGrid { start, horizon };
    if grid.windows(2).any(|w| !(w[1] > w[0]))
        || grid.first().is_some_and(|&t| t < start)
        || grid.last().is_some_and(|&t| t > horizon * (1.0 + 1e-12))
    {
        return Err(bad);
    }
    let mut current = scene.clone();
    let mut out = Vec::with_capacity(grid.len());
    for &t in grid {
        if t > current.time() {
            current = current.advance(t - current.time())?;
        }
        out.push(Snapshot {
            time: t,
            matrix: mimo_matrix(&current)?,
        });
    }
    Ok(out)
}
