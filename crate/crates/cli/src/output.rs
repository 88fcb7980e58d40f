//! Text and JSON writers.
//!
//! Floats are written in shortest round-trip scientific notation, so
//! parsing a field back yields the exact in-memory value.

use std::fmt::Write as _;

use serde::Serialize;
use vvlc_core::cir::{ImpulseResponse, PathTap};
use vvlc_core::metrics::{ChannelStats, SampleSummary};

pub const TAPS_HEADER: &str = "delay_s,amplitude,family";
pub const TIMELINE_HEADER: &str = "t_s,total_power,min_delay_s";
pub const TIMELINE_TAPS_HEADER: &str = "t_s,tx,rx,delay_s,amplitude,family";
pub const REALIZATIONS_HEADER: &str =
    "realization,dc_gain,loss_db,gain_db,mean_excess_delay_s,rms_delay_spread_s,max_bit_rate_bps";

pub fn float(v: f64) -> String {
    format!("{v:e}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

/// File-name fragment for a link, e.g. `p_qprime`.
pub fn link_name(cir: &ImpulseResponse) -> String {
    let (tx, rx) = cir.link();
    format!("{}_{}", tx.label(), rx.label()).replace('\'', "prime")
}

fn taps_rows(out: &mut String, prefix: &str, taps: &[PathTap]) {
    for tap in taps {
        let _ = writeln!(
            out,
            "{prefix}{},{},{}",
            float(tap.delay),
            float(tap.amplitude),
            tap.family.label()
        );
    }
}

pub fn taps_csv(cir: &ImpulseResponse) -> String {
    let mut out = format!("{TAPS_HEADER}\n");
    taps_rows(&mut out, "", cir.taps());
    out
}

#[derive(Debug, Default)]
pub struct TimelineWriter {
    pub summary: String,
    pub taps: String,
}

impl TimelineWriter {
    pub fn new() -> Self {
        Self {
            summary: format!("{TIMELINE_HEADER}\n"),
            taps: format!("{TIMELINE_TAPS_HEADER}\n"),
        }
    }

    /// One summary row for `link`, and taps of every link in `all`.
    pub fn push<'a>(
        &mut self,
        time: f64,
        link: &ImpulseResponse,
        all: impl IntoIterator<Item = &'a ImpulseResponse>,
    ) {
        let _ = writeln!(
            self.summary,
            "{},{},{}",
            float(time),
            float(link.total_power()),
            opt_float(link.min_active_delay())
        );
        for cir in all {
            let (tx, rx) = cir.link();
            let prefix = format!("{},{},{},", float(time), tx.label(), rx.label());
            taps_rows(&mut self.taps, &prefix, cir.taps());
        }
    }
}

pub fn realizations_csv(rows: &[ChannelStats]) -> String {
    let mut out = format!("{REALIZATIONS_HEADER}\n");
    for (i, s) in rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{},{},{}",
            float(s.dc_gain),
            float(s.loss_db),
            float(s.gain_db),
            float(s.mean_excess_delay),
            float(s.rms_delay_spread),
            opt_float(s.max_bit_rate)
        );
    }
    out
}

#[derive(Debug, Serialize)]
pub struct LinkStats {
    pub tx: &'static str,
    pub rx: &'static str,
    /// `None` when the link receives no power.
    pub total: Option<ChannelStats>,
    pub sb11: Option<ChannelStats>,
    pub sb12: Option<ChannelStats>,
    pub sb13: Option<ChannelStats>,
}

#[derive(Debug, Serialize)]
pub struct SummaryDocument {
    pub realizations: usize,
    pub link: String,
    /// Absent with fewer than two realizations.
    pub gain_db: Option<SampleSummary>,
    pub rms_delay_spread_s: Option<SampleSummary>,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    pub mode: &'static str,
    pub seed: u64,
    pub realizations: Option<usize>,
    pub config_hash: String,
    /// Output file name and SHA-256 of its contents, in name order.
    pub files: Vec<(String, String)>,
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}
