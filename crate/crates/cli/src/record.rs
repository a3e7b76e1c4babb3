//! Versioned JSON result records.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use backbend_core::{Window, PRF_NAME, PRF_VERSION};
use serde::Serialize;

pub const SCHEMA_ID: &str = "backbend-perc/result";
pub const SCHEMA_VERSION: u32 = 1;

pub const RESULT_SCHEMA: &str = include_str!("../schema/result.schema.json");
pub const SWEEP_SCHEMA: &str = include_str!("../schema/sweep.schema.json");

#[derive(Serialize, Debug, Clone, Copy)]
#[serde(rename_all = "snake_case")]
pub enum SeedSource {
    Flag,
    Config,
    Entropy,
}

#[derive(Serialize, Debug, Clone, Copy)]
pub struct Prf {
    pub name: &'static str,
    pub version: u32,
}

#[derive(Serialize, Debug, Clone)]
pub struct Metadata {
    pub master_seed: u64,
    pub seed_source: SeedSource,
    pub prf: Prf,
    pub crate_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
}

impl Metadata {
    pub fn new(seed: Seed, window: Option<Window>, reproducible: bool) -> Self {
        let timestamp_unix = (!reproducible).then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Self {
            master_seed: seed.value,
            seed_source: seed.source,
            prf: Prf {
                name: PRF_NAME,
                version: PRF_VERSION,
            },
            crate_version: env!("CARGO_PKG_VERSION"),
            dimension: window.map(|w| w.dim()),
            window,
            timestamp_unix,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct Record<'a, P: Serialize, R: Serialize> {
    pub schema: &'static str,
    pub schema_version: u32,
    pub command: &'a str,
    pub metadata: Metadata,
    pub plan: P,
    pub result: R,
}

impl<'a, P: Serialize, R: Serialize> Record<'a, P, R> {
    pub fn new(command: &'a str, metadata: Metadata, plan: P, result: R) -> Self {
        Self {
            schema: SCHEMA_ID,
            schema_version: SCHEMA_VERSION,
            command,
            metadata,
            plan,
            result,
        }
    }

    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        match out {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                Ok(stdout.flush()?)
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Seed {
    pub value: u64,
    pub source: SeedSource,
}

impl Seed {
    /// The flag value, else the config value, else a fresh draw reported on
    /// stderr.
    pub fn resolve(flag: Option<u64>, config: Option<u64>) -> Self {
        match (flag, config) {
            (Some(value), _) => Seed {
                value,
                source: SeedSource::Flag,
            },
            (None, Some(value)) => Seed {
                value,
                source: SeedSource::Config,
            },
            (None, None) => {
                let value = rand::random();
                eprintln!("seed: {value}");
                Seed {
                    value,
                    source: SeedSource::Entropy,
                }
            }
        }
    }
}
