//! Scenario config files.
//!
//! A config file is a flat TOML document: one `key = value` per line,
//! `#` starts a comment. Keys are the [`ScenarioConfig`] field names.
//! Angle keys (`fov`, `gamma_t`, `gamma_r`, `vm_mu_1`, `vm_mu_2`,
//! `walk_std`) are radians, or degrees when written with a `_deg` suffix.
//! Keys left out keep their default values; unknown keys are rejected.
//!
//! ```toml
//! fov_deg = 80
//! rho_wall = 0.4
//! n3 = 200        # more mobile scatterers
//! ```

use thiserror::Error;
use toml::{Table, Value};
use vvlc_core::scene::ScenarioConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax error: {0}")]
    Syntax(String),
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: `{key}` expects {expected}")]
    Type {
        key: String,
        line: usize,
        expected: &'static str,
    },
    #[error("`{0}` is given more than once")]
    Duplicate(String),
    #[error("override `{0}` is not of the form key=value")]
    Override(String),
    #[error("{0}")]
    Domain(#[from] vvlc_core::Error),
}

const ANGLE_KEYS: [&str; 6] = ["fov", "gamma_t", "gamma_r", "vm_mu_1", "vm_mu_2", "walk_std"];

enum Slot<'a> {
    Real(&'a mut f64),
    Count(&'a mut usize),
    Seed(&'a mut u64),
}

fn slot<'a>(c: &'a mut ScenarioConfig, key: &str) -> Option<Slot<'a>> {
    use Slot::*;
    Some(match key {
        "alpha" => Real(&mut c.alpha),
        "area_rx" => Real(&mut c.area_rx),
        "fov" => Real(&mut c.fov),
        "rho_wall" => Real(&mut c.rho_wall),
        "rho_vehicle" => Real(&mut c.rho_vehicle),
        "delta_t" => Real(&mut c.delta_t),
        "delta_r" => Real(&mut c.delta_r),
        "gamma_t" => Real(&mut c.gamma_t),
        "gamma_r" => Real(&mut c.gamma_r),
        "v_t" => Real(&mut c.v_t),
        "v_r" => Real(&mut c.v_r),
        "v_m" => Real(&mut c.v_m),
        "h_t1" => Real(&mut c.h_t1),
        "h_t2" => Real(&mut c.h_t2),
        "h_r1" => Real(&mut c.h_r1),
        "h_r2" => Real(&mut c.h_r2),
        "h_m1" => Real(&mut c.h_m1),
        "h_m2" => Real(&mut c.h_m2),
        "n1" => Count(&mut c.n1),
        "n2" => Count(&mut c.n2),
        "n3" => Count(&mut c.n3),
        "vm_kappa_1" => Real(&mut c.vm_kappa_1),
        "vm_mu_1" => Real(&mut c.vm_mu_1),
        "vm_kappa_2" => Real(&mut c.vm_kappa_2),
        "vm_mu_2" => Real(&mut c.vm_mu_2),
        "disc_radius" => Real(&mut c.disc_radius),
        "walk_std" => Real(&mut c.walk_std),
        "c" => Real(&mut c.c),
        "seed" => Seed(&mut c.seed),
        "time_step" => Real(&mut c.time_step),
        "horizon" => Real(&mut c.horizon),
        "bin_width" => Real(&mut c.bin_width),
        _ => return None,
    })
}

/// Line of the first `key =` assignment in `text`, 1-based; 0 if absent.
fn line_of(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| {
            l.trim_start()
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map_or(0, |i| i + 1)
}

/// Resolves `_deg` keys, returning the field name and a scale to radians.
fn field_name(key: &str) -> (&str, f64) {
    match key.strip_suffix("_deg") {
        Some(base) if ANGLE_KEYS.contains(&base) => (base, std::f64::consts::PI / 180.0),
        _ => (key, 1.0),
    }
}

fn apply_table(config: &mut ScenarioConfig, table: &Table, text: &str) -> Result<(), ConfigError> {
    let mut seen = std::collections::BTreeSet::new();
    for (key, value) in table {
        let line = line_of(text, key);
        let (name, scale) = field_name(key);
        if !seen.insert(name) {
            return Err(ConfigError::Duplicate(name.to_owned()));
        }
        let type_err = |expected| ConfigError::Type { key: key.clone(), line, expected };
        match slot(config, name) {
            None => return Err(ConfigError::UnknownKey { key: key.clone(), line }),
            Some(Slot::Real(f)) => {
                *f = match value {
                    Value::Float(v) => *v,
                    Value::Integer(v) => *v as f64,
                    _ => return Err(type_err("a number")),
                } * scale;
            }
            Some(Slot::Count(n)) => match value {
                Value::Integer(v) if *v >= 0 => *n = *v as usize,
                _ => return Err(type_err("a non-negative integer")),
            },
            Some(Slot::Seed(s)) => match value {
                Value::Integer(v) if *v >= 0 => *s = *v as u64,
                _ => return Err(type_err("a non-negative integer")),
            },
        }
    }
    Ok(())
}

fn parse_table(text: &str) -> Result<Table, ConfigError> {
    text.parse::<Table>().map_err(|e| ConfigError::Syntax(e.to_string()))
}

/// Parses a config document over the defaults and validates the result.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut config = ScenarioConfig::default();
    apply_table(&mut config, &parse_table(text)?, text)?;
    config.validate()?;
    Ok(config)
}

/// Applies `key=value` overrides in order, then validates.
pub fn apply_overrides(
    mut config: ScenarioConfig,
    overrides: &[String],
) -> Result<ScenarioConfig, ConfigError> {
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| ConfigError::Override(item.clone()))?;
        let line = format!("{} = {}", key.trim(), value.trim());
        let table = parse_table(&line)?;
        apply_table(&mut config, &table, &line)?;
    }
    config.validate()?;
    Ok(config)
}
