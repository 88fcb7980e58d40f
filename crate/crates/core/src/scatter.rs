//! Random scatterer realizations.
//!
//! Wall scatterers are placed where a ray leaving the Tx array center at a
//! von Mises distributed departure angle meets the wall. Mobile scatterers
//! are uniform on a disc and drift at constant speed. Realization `k` of a
//! run draws from ChaCha stream `k` of the master seed, so its content
//! never depends on which thread or in what order it is produced.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::math::{wrap_angle, Vec2};
use crate::scene::{CornerFrame, Scene};

/// Single-bounce propagation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Family {
    /// SB-11, off wall W1.
    Wall1,
    /// SB-12, off wall W2.
    Wall2,
    /// SB-13, off a moving vehicle or pedestrian.
    Mobile,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Wall1, Family::Wall2, Family::Mobile];

    pub fn label(self) -> &'static str {
        match self {
            Family::Wall1 => "SB-11",
            Family::Wall2 => "SB-12",
            Family::Mobile => "SB-13",
        }
    }
}

impl core::fmt::Display for Family {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

/// One effective scatterer.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Scatterer {
    pub family: Family,
    pub position: Vec2,
    pub rho: f64,
    /// Surface normal for wall scatterers; `None` means the normal bisects
    /// the directions toward Tx and Rx and is resolved per ray.
    pub normal: Option<Vec2>,
    pub heading: f64,
    pub speed: f64,
}

impl Scatterer {
    pub fn wall(wall: Wall, position: Vec2, rho: f64) -> Self {
        Self {
            family: wall.family(),
            position,
            rho,
            normal: Some(wall.normal()),
            heading: 0.0,
            speed: 0.0,
        }
    }

    pub fn mobile(position: Vec2, rho: f64, heading: f64, speed: f64) -> Self {
        Self {
            family: Family::Mobile,
            position,
            rho,
            normal: None,
            heading,
            speed,
        }
    }

    /// Unit surface normal as seen by a ray from `tx` to `rx`.
    pub fn normal_for(&self, tx: Vec2, rx: Vec2) -> Vec2 {
        self.normal.unwrap_or_else(|| {
            ((tx - self.position).normalized() + (rx - self.position).normalized()).normalized()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wall {
    W1,
    W2,
}

impl Wall {
    pub fn family(self) -> Family {
        match self {
            Wall::W1 => Family::Wall1,
            Wall::W2 => Family::Wall2,
        }
    }

    /// Inward normal, pointing into the street.
    pub fn normal(self) -> Vec2 {
        match self {
            Wall::W1 => Vec2::new(0.0, -1.0),
            Wall::W2 => Vec2::new(-1.0, 0.0),
        }
    }

    /// Open departure-angle interval that can reach this wall.
    pub fn aod_interval(self) -> (f64, f64) {
        match self {
            Wall::W1 => (0.0, FRAC_PI_2),
            Wall::W2 => (-FRAC_PI_2, 0.0),
        }
    }
}

/// Point where the ray leaving `tx` at frame angle `aod` meets the wall.
pub fn wall_point(tx: Vec2, wall: Wall, aod: f64) -> Vec2 {
    match wall {
        Wall::W1 => Vec2::new(tx.x - tx.y / libm::tan(aod), 0.0),
        Wall::W2 => Vec2::new(0.0, tx.y - tx.x * libm::tan(aod)),
    }
}

/// Best–Fisher rejection sampler for the von Mises distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMises {
    mu: f64,
    kappa: f64,
    r: f64,
}

// Below this concentration the density is uniform to within 1e-6.
const UNIFORM_KAPPA: f64 = 1e-6;

impl VonMises {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::NegativeConcentration(kappa));
        }
        let r = if kappa < UNIFORM_KAPPA {
            f64::NAN
        } else {
            let tau = 1.0 + libm::sqrt(1.0 + 4.0 * kappa * kappa);
            let rho = (tau - libm::sqrt(2.0 * tau)) / (2.0 * kappa);
            (1.0 + rho * rho) / (2.0 * rho)
        };
        Ok(Self { mu, kappa, r })
    }
}

impl Distribution<f64> for VonMises {
    /// Draws an angle in (-pi, pi].
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.kappa < UNIFORM_KAPPA {
            return wrap_angle(self.mu + PI - TAU * rng.random::<f64>());
        }
        loop {
            let z = libm::cos(PI * rng.random::<f64>());
            let u2: f64 = rng.random();
            let u3: f64 = rng.random();
            let f = (1.0 + self.r * z) / (self.r + z);
            let c = self.kappa * (self.r - f);
            if c * (2.0 - c) > u2 || libm::log(c / u2) + 1.0 - c >= 0.0 {
                let turn = libm::acos(f.clamp(-1.0, 1.0));
                let theta = if u3 > 0.5 { self.mu + turn } else { self.mu - turn };
                return wrap_angle(theta);
            }
        }
    }
}

pub fn sample_von_mises<R: Rng + ?Sized>(mu: f64, kappa: f64, rng: &mut R) -> Result<f64> {
    Ok(VonMises::new(mu, kappa)?.sample(rng))
}

// Attempts per acceptance-rate check when sampling wall scatterers.
const REJECTION_WINDOW: usize = 10_000;

/// Draws `count` scatterers on `wall` for the scene's current Tx position.
///
/// Departure angles outside the wall's interval, or that would land beyond
/// the corner, are redrawn; the accepted angles keep the conditional von
/// Mises shape.
pub fn sample_wall_scatterers<R: Rng + ?Sized>(
    scene: &Scene,
    wall: Wall,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Scatterer>> {
    let config = scene.config();
    let dist = match wall {
        Wall::W1 => VonMises::new(config.vm_mu_1, config.vm_kappa_1)?,
        Wall::W2 => VonMises::new(config.vm_mu_2, config.vm_kappa_2)?,
    };
    let (lo, hi) = wall.aod_interval();
    let tx = scene.tx().position;
    let mut out = Vec::with_capacity(count);
    let (mut attempts, mut window_accepts) = (0usize, 0usize);
    while out.len() < count {
        let aod = dist.sample(rng);
        attempts += 1;
        if aod > lo && aod < hi {
            let p = wall_point(tx, wall, aod);
            let on_street_side = match wall {
                Wall::W1 => p.x < 0.0,
                Wall::W2 => p.y < 0.0,
            };
            if on_street_side && p.x.is_finite() && p.y.is_finite() {
                out.push(Scatterer::wall(wall, p, config.rho_wall));
                window_accepts += 1;
            }
        }
        if attempts % REJECTION_WINDOW == 0 {
            if window_accepts * 100 < REJECTION_WINDOW {
                return Err(Error::IncompatibleAod {
                    accepted: window_accepts,
                    attempts: REJECTION_WINDOW,
                });
            }
            window_accepts = 0;
        }
    }
    Ok(out)
}

/// Uniform draws on a disc, each with a uniform random heading.
pub fn sample_disc<R: Rng + ?Sized>(
    center: Vec2,
    radius: f64,
    count: usize,
    speed: f64,
    rho: f64,
    rng: &mut R,
) -> Vec<Scatterer> {
    (0..count)
        .map(|_| {
            let r = radius * libm::sqrt(rng.random::<f64>());
            let bearing = TAU * rng.random::<f64>();
            let heading = TAU * rng.random::<f64>();
            Scatterer::mobile(center + Vec2::from_angle(bearing) * r, rho, heading, speed)
        })
        .collect()
}

/// Draws `count` mobile scatterers on the scene's configured disc.
pub fn sample_mobile_scatterers<R: Rng + ?Sized>(
    scene: &Scene,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Scatterer>> {
    let config = scene.config();
    let center = scene.disc_center();
    if !CornerFrame::inside(center + Vec2::new(config.disc_radius, config.disc_radius)) {
        return Err(Error::InvalidConfig {
            field: "disc_radius",
            reason: "mobile-scatterer disc intersects a wall",
        });
    }
    Ok(sample_disc(center, config.disc_radius, count, config.v_m, config.rho_vehicle, rng))
}

/// RNG for realization `index` of a run seeded with `seed`.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Fills the scene with realization `index`: N1 W1 scatterers, N2 W2
/// scatterers, then N3 mobile scatterers, all from one stream. The rest of
/// the stream drives mobile-scatterer heading random walks.
pub fn populate(scene: &Scene, index: u64) -> Result<Scene> {
    let config = scene.config();
    let mut rng = realization_rng(config.seed, index);
    let mut all = sample_wall_scatterers(scene, Wall::W1, config.n1, &mut rng)?;
    all.extend(sample_wall_scatterers(scene, Wall::W2, config.n2, &mut rng)?);
    all.extend(sample_mobile_scatterers(scene, config.n3, &mut rng)?);
    Ok(scene.clone().with_scatterers(all, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{build_scene, ScenarioConfig};
    use alloc::vec;
    use core::f64::consts::FRAC_PI_4;

    fn scene() -> Scene {
        build_scene(ScenarioConfig::default()).unwrap()
    }

    #[test]
    fn negative_kappa_rejected() {
        let mut rng = realization_rng(0, 0);
        assert_eq!(
            sample_von_mises(0.0, -1.0, &mut rng),
            Err(Error::NegativeConcentration(-1.0))
        );
    }

    #[test]
    fn zero_kappa_is_uniform() {
        let mut rng = realization_rng(1, 0);
        let n = 100_000;
        let mut draws: Vec<f64> = (0..n)
            .map(|_| sample_von_mises(0.7, 0.0, &mut rng).unwrap())
            .collect();
        assert!(draws.iter().all(|&a| a > -PI && a <= PI));
        draws.sort_by(f64::total_cmp);
        // Kolmogorov–Smirnov distance to U(-pi, pi]
        let ks = draws
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let cdf = (a + PI) / TAU;
                let lo = i as f64 / n as f64;
                let hi = (i + 1) as f64 / n as f64;
                (cdf - lo).abs().max((hi - cdf).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "ks = {ks}");
    }

    #[test]
    fn concentrated_circular_mean() {
        let mut rng = realization_rng(2, 0);
        let dist = VonMises::new(0.3, 50.0).unwrap();
        let (mut s, mut c) = (0.0, 0.0);
        for _ in 0..100_000 {
            let a = dist.sample(&mut rng);
            s += libm::sin(a);
            c += libm::cos(a);
        }
        assert!((libm::atan2(s, c) - 0.3).abs() < 0.02);
    }

    #[test]
    fn von_mises_deterministic() {
        let draw = |seed| {
            let mut rng = realization_rng(seed, 3);
            (0..50).map(|_| sample_von_mises(-1.0, 4.0, &mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
        assert_ne!(draw(11), draw(12));
    }

    #[test]
    fn wall_point_matches_ray_intersection() {
        let tx = Vec2::new(-3.0, -40.0);
        let p = wall_point(tx, Wall::W1, FRAC_PI_4);
        // march along the ray until y crosses 0, then interpolate
        let dir = Vec2::from_angle(FRAC_PI_4);
        let t = -tx.y / dir.y;
        let hit = tx + dir * t;
        assert!((p.x - hit.x).abs() < 1e-9 * hit.x.abs());
        assert!((p.x - 37.0).abs() < 1e-12);
        assert_eq!(p.y, 0.0);

        let p = wall_point(tx, Wall::W2, -FRAC_PI_4);
        assert_eq!(p, Vec2::new(0.0, -43.0));
    }

    #[test]
    fn empty_requests() {
        let mut rng = realization_rng(0, 0);
        assert!(sample_wall_scatterers(&scene(), Wall::W1, 0, &mut rng).unwrap().is_empty());
        assert!(sample_mobile_scatterers(&scene(), 0, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn wall_scatterers_on_their_walls() {
        let mut rng = realization_rng(5, 0);
        let s = scene();
        for s in sample_wall_scatterers(&s, Wall::W1, 200, &mut rng).unwrap() {
            assert_eq!(s.position.y, 0.0);
            assert!(s.position.x < 0.0);
            assert_eq!(s.rho, 0.4);
            assert_eq!(s.normal, Some(Vec2::new(0.0, -1.0)));
        }
        for s in sample_wall_scatterers(&s, Wall::W2, 200, &mut rng).unwrap() {
            assert_eq!(s.position.x, 0.0);
            assert!(s.position.y < 0.0);
        }
    }

    #[test]
    fn incompatible_aod_distribution() {
        let config = ScenarioConfig { vm_mu_1: -FRAC_PI_2, vm_kappa_1: 200.0, ..Default::default() };
        let s = build_scene(config).unwrap();
        let mut rng = realization_rng(0, 0);
        assert!(matches!(
            sample_wall_scatterers(&s, Wall::W1, 1, &mut rng),
            Err(Error::IncompatibleAod { .. })
        ));
    }

    #[test]
    fn degenerate_disc() {
        let mut rng = realization_rng(0, 0);
        let v = sample_disc(Vec2::new(-8.0, -8.0), 0.0, 1, 1.0, 0.8, &mut rng);
        assert_eq!(v[0].position, Vec2::new(-8.0, -8.0));
    }

    #[test]
    fn disc_mean_is_center() {
        let mut rng = realization_rng(9, 0);
        let center = Vec2::new(-8.0, -8.0);
        let v = sample_disc(center, 2.0, 100_000, 1.0, 0.8, &mut rng);
        let n = v.len() as f64;
        let mean = v.iter().fold(Vec2::default(), |a, s| a + s.position) * (1.0 / n);
        assert!(mean.distance(center) < 0.02);
        assert!(v.iter().all(|s| s.position.distance(center) <= 2.0));
    }

    #[test]
    fn populate_cardinalities_and_determinism() {
        let s = scene();
        let a = populate(&s, 4).unwrap();
        let b = populate(&s, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.scatterers(), populate(&s, 5).unwrap().scatterers());
        let counts: Vec<usize> = Family::ALL.iter().map(|&f| a.scatterers_of(f).count()).collect();
        assert_eq!(counts, vec![100, 100, 100]);
    }
}
