//! Scenario parameters, the corner coordinate frame, and scene kinematics.
//!
//! Wall W1 is the line `y = 0` and wall W2 the line `x = 0`; the street
//! occupies the open quadrant `x < 0, y < 0` with the corner at the origin.
//! An entity at distance `h1` from W1 and `h2` from W2 sits at `(-h2, -h1)`,
//! so wall distances are recovered exactly as `|y|` and `|x|`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Entity, Error, Result};
use crate::math::Vec2;
use crate::optics::RadiometryParams;
use crate::scatter::{Family, Scatterer};

/// All physical and numerical parameters of a run.
///
/// Angles are radians. `gamma_t`/`gamma_r` are vehicle headings relative
/// to their own street axis; see [`street_heading`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioConfig {
    pub alpha: f64,
    pub area_rx: f64,
    pub fov: f64,
    pub rho_wall: f64,
    pub rho_vehicle: f64,
    pub delta_t: f64,
    pub delta_r: f64,
    pub gamma_t: f64,
    pub gamma_r: f64,
    pub v_t: f64,
    pub v_r: f64,
    pub v_m: f64,
    pub h_t1: f64,
    pub h_t2: f64,
    pub h_r1: f64,
    pub h_r2: f64,
    pub h_m1: f64,
    pub h_m2: f64,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub vm_kappa_1: f64,
    pub vm_mu_1: f64,
    pub vm_kappa_2: f64,
    pub vm_mu_2: f64,
    pub disc_radius: f64,
    /// Heading random-walk intensity for mobile scatterers, rad/sqrt(s).
    pub walk_std: f64,
    pub c: f64,
    pub seed: u64,
    pub time_step: f64,
    pub horizon: f64,
    pub bin_width: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            area_rx: 1e-4,
            fov: 80.0 * PI / 180.0,
            rho_wall: 0.4,
            rho_vehicle: 0.8,
            delta_t: 0.5,
            delta_r: 0.5,
            gamma_t: 0.0,
            gamma_r: PI / 2.0,
            v_t: 7.0,
            v_r: 7.0,
            v_m: 1.0,
            h_t1: 40.0,
            h_t2: 3.0,
            h_r1: 3.0,
            h_r2: 40.0,
            h_m1: 8.0,
            h_m2: 8.0,
            n1: 100,
            n2: 100,
            n3: 100,
            vm_kappa_1: 2.0,
            vm_mu_1: PI / 4.0,
            vm_kappa_2: 2.0,
            vm_mu_2: -PI / 4.0,
            disc_radius: 2.0,
            walk_std: 0.0,
            c: 3e8,
            seed: 0,
            time_step: 0.1,
            horizon: 4.0,
            bin_width: 1e-9,
        }
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveDistance { field, value })
    }
}

fn check(ok: bool, field: &'static str, reason: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidConfig { field, reason })
    }
}

fn non_negative(field: &'static str, value: f64) -> Result<()> {
    check(value >= 0.0 && value.is_finite(), field, "must be finite and >= 0")
}

impl ScenarioConfig {
    /// Checks every field invariant, reporting the first offending field.
    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("h_t1", self.h_t1),
            ("h_t2", self.h_t2),
            ("h_r1", self.h_r1),
            ("h_r2", self.h_r2),
            ("h_m1", self.h_m1),
            ("h_m2", self.h_m2),
            ("area_rx", self.area_rx),
            ("disc_radius", self.disc_radius),
            ("c", self.c),
            ("time_step", self.time_step),
            ("horizon", self.horizon),
            ("bin_width", self.bin_width),
        ] {
            positive(field, value)?;
        }
        for (field, value) in [
            ("delta_t", self.delta_t),
            ("delta_r", self.delta_r),
            ("v_t", self.v_t),
            ("v_r", self.v_r),
            ("v_m", self.v_m),
            ("alpha", self.alpha),
            ("walk_std", self.walk_std),
        ] {
            non_negative(field, value)?;
        }
        check(self.fov > 0.0 && self.fov <= PI / 2.0, "fov", "must lie in (0, pi/2]")?;
        for (field, value) in [("rho_wall", self.rho_wall), ("rho_vehicle", self.rho_vehicle)] {
            check((0.0..=1.0).contains(&value), field, "must lie in [0, 1]")?;
        }
        for (field, value) in [("n1", self.n1), ("n2", self.n2), ("n3", self.n3)] {
            check(value > 0, field, "scatterer count must be > 0")?;
        }
        for (field, value) in [("vm_kappa_1", self.vm_kappa_1), ("vm_kappa_2", self.vm_kappa_2)] {
            non_negative(field, value)?;
        }
        for (field, value) in [
            ("gamma_t", self.gamma_t),
            ("gamma_r", self.gamma_r),
            ("vm_mu_1", self.vm_mu_1),
            ("vm_mu_2", self.vm_mu_2),
        ] {
            check(value.is_finite(), field, "must be finite")?;
        }
        check(
            self.disc_radius < self.h_m1.min(self.h_m2),
            "disc_radius",
            "mobile-scatterer disc intersects a wall",
        )?;
        Ok(())
    }

    pub fn radiometry(&self) -> RadiometryParams {
        RadiometryParams {
            alpha: self.alpha,
            area_rx: self.area_rx,
            fov: self.fov,
        }
    }

    /// Uniform grid `0, step, ..., horizon` (inclusive when it lands on it).
    pub fn time_grid(&self) -> Vec<f64> {
        let steps = libm::floor(self.horizon / self.time_step + 1e-9) as usize;
        (0..=steps).map(|k| k as f64 * self.time_step).collect()
    }
}

/// Maps a street-relative heading to a frame heading (counter-clockwise
/// from +x). Zero means "along the street toward the corner" for the Tx
/// street; `pi/2` does the same for the Rx street.
pub fn street_heading(gamma: f64) -> f64 {
    PI / 2.0 - gamma
}

/// Canonical corner frame helpers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CornerFrame;

impl CornerFrame {
    /// Position of an entity `h1` from W1 and `h2` from W2.
    pub fn position(h1: f64, h2: f64) -> Vec2 {
        Vec2::new(-h2, -h1)
    }

    pub fn wall_distances(p: Vec2) -> WallDistances {
        WallDistances {
            h1: libm::fabs(p.y),
            h2: libm::fabs(p.x),
        }
    }

    pub fn inside(p: Vec2) -> bool {
        p.x < 0.0 && p.y < 0.0
    }
}

/// Perpendicular distances to W1 and W2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallDistances {
    pub h1: f64,
    pub h2: f64,
}

/// Kinematic state of a moving entity.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MobileState {
    pub position: Vec2,
    /// Frame heading, counter-clockwise from +x.
    pub heading: f64,
    pub speed: f64,
}

impl MobileState {
    pub fn wall_distances(&self) -> WallDistances {
        CornerFrame::wall_distances(self.position)
    }

    fn stepped(&self, dt: f64) -> Vec2 {
        self.position + Vec2::from_angle(self.heading) * (self.speed * dt)
    }
}

/// Immutable snapshot of the scene at one time instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    config: ScenarioConfig,
    time: f64,
    tx: MobileState,
    rx: MobileState,
    scatterers: Vec<Scatterer>,
    motion_rng: ChaCha8Rng,
}

/// Builds the t = 0 scene with an empty scatterer registry.
pub fn build_scene(config: ScenarioConfig) -> Result<Scene> {
    config.validate()?;
    let tx = MobileState {
        position: CornerFrame::position(config.h_t1, config.h_t2),
        heading: street_heading(config.gamma_t),
        speed: config.v_t,
    };
    let rx = MobileState {
        position: CornerFrame::position(config.h_r1, config.h_r2),
        heading: street_heading(config.gamma_r),
        speed: config.v_r,
    };
    let motion_rng = ChaCha8Rng::seed_from_u64(config.seed);
    Ok(Scene {
        config,
        time: 0.0,
        tx,
        rx,
        scatterers: Vec::new(),
        motion_rng,
    })
}

impl Scene {
    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn tx(&self) -> &MobileState {
        &self.tx
    }

    pub fn rx(&self) -> &MobileState {
        &self.rx
    }

    pub fn scatterers(&self) -> &[Scatterer] {
        &self.scatterers
    }

    pub fn scatterers_of(&self, family: Family) -> impl Iterator<Item = &Scatterer> {
        self.scatterers.iter().filter(move |s| s.family == family)
    }

    /// Mobile-scatterer disc center.
    pub fn disc_center(&self) -> Vec2 {
        CornerFrame::position(self.config.h_m1, self.config.h_m2)
    }

    /// Replaces the scatterer registry. `motion_rng` drives any heading
    /// random walk of mobile scatterers from here on.
    pub fn with_scatterers(mut self, scatterers: Vec<Scatterer>, motion_rng: ChaCha8Rng) -> Self {
        self.scatterers = scatterers;
        self.motion_rng = motion_rng;
        self
    }

    pub fn with_terminals(mut self, tx: MobileState, rx: MobileState) -> Self {
        self.tx = tx;
        self.rx = rx;
        self
    }

    /// Moves every mobile entity forward by `dt` seconds.
    ///
    /// Tx and Rx stop the run if they would reach a wall. Mobile
    /// scatterers bounce off walls with their heading mirrored.
    pub fn advance(&self, dt: f64) -> Result<Scene> {
        if !(dt > 0.0) {
            return Err(Error::NonPositiveStep(dt));
        }
        let time = self.time + dt;
        let mut next = self.clone();
        next.time = time;
        for (entity, state, slot) in [
            (Entity::Tx, &self.tx, &mut next.tx),
            (Entity::Rx, &self.rx, &mut next.rx),
        ] {
            let p = state.stepped(dt);
            if !CornerFrame::inside(p) {
                return Err(Error::GeometryExhausted { entity, time });
            }
            slot.position = p;
        }

        let walk = if self.config.walk_std > 0.0 {
            Normal::new(0.0, self.config.walk_std * libm::sqrt(dt)).ok()
        } else {
            None
        };
        for s in next.scatterers.iter_mut().filter(|s| s.speed > 0.0) {
            let (mut p, mut heading) = (
                s.position + Vec2::from_angle(s.heading) * (s.speed * dt),
                s.heading,
            );
            if p.x >= 0.0 {
                p.x = -p.x;
                heading = PI - heading;
            }
            if p.y >= 0.0 {
                p.y = -p.y;
                heading = -heading;
            }
            if let Some(walk) = &walk {
                heading += walk.sample(&mut next.motion_rng);
            }
            s.position = p;
            s.heading = heading;
        }
        Ok(next)
    }
}
