//! On-disk layout shared by every stage.
//!
//! ```text
//! <dir>/manifest.json    written last; marks the set complete
//! <dir>/metadata.jsonl   one row per response
//! <dir>/rirs/<id>.wav    mono 32-bit float, 32 kHz, unit peak
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rirdist::io::{read_json, read_jsonl, read_wav, write_json, write_jsonl, write_wav};
use rirdist::synth::{ShoeboxRoom, SynthesisConfig};
use rirdist::{Rir, RoomId, DURATION_SAMPLES, SAMPLE_RATE};
use serde::{Deserialize, Serialize};

use crate::error::{check_schema, CliError, CliResult};

pub const DATASET_SCHEMA: &str = "rir-dataset/1";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const METADATA_FILE: &str = "metadata.jsonl";
pub const RIR_DIR: &str = "rirs";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: String,
    pub seed: u64,
    pub n_per_room: usize,
    pub count: usize,
    pub sample_rate: u32,
    pub duration_samples: usize,
    pub synthesis: Option<SynthesisConfig>,
    pub rooms: Vec<ShoeboxRoom<f64>>,
}

impl Manifest {
    pub fn new(seed: u64, n_per_room: usize, synthesis: Option<SynthesisConfig>, rooms: Vec<ShoeboxRoom<f64>>) -> Self {
        Self {
            schema_version: DATASET_SCHEMA.to_string(),
            seed,
            n_per_room,
            count: 0,
            sample_rate: SAMPLE_RATE,
            duration_samples: DURATION_SAMPLES,
            synthesis,
            rooms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetadataRow {
    pub rir_id: String,
    pub room_id: RoomId,
    pub source_pos: [f64; 3],
    pub receiver_pos: [f64; 3],
    pub distance_m: f64,
    /// Factor restoring physical amplitude from the stored unit-peak samples.
    pub norm_gain: f64,
    /// Path relative to the dataset root.
    pub wav: String,
}

/// Streams responses to disk; nothing is visible as complete until [`finish`](Self::finish).
pub struct DatasetWriter {
    root: PathBuf,
    rows: Vec<MetadataRow>,
}

impl DatasetWriter {
    pub fn create(root: &Path) -> CliResult<Self> {
        let rirs = root.join(RIR_DIR);
        fs::create_dir_all(&rirs)
            .map_err(|e| CliError::Output(format!("cannot create {}: {e}", rirs.display())))?;
        let _ = fs::remove_file(root.join(MANIFEST_FILE));
        Ok(Self {
            root: root.to_path_buf(),
            rows: Vec::new(),
        })
    }

    /// Writes a batch of `(id, response)` pairs; responses are stored as given.
    pub fn add_batch(&mut self, batch: &[(String, Rir)]) -> CliResult<()> {
        let rows = batch
            .par_iter()
            .map(|(id, rir)| {
                let wav = format!("{RIR_DIR}/{id}.wav");
                let samples: Vec<f32> = rir.samples().iter().map(|&x| x as f32).collect();
                write_wav(&self.root.join(&wav), &samples).map_err(CliError::output)?;
                Ok(MetadataRow {
                    rir_id: id.clone(),
                    room_id: rir.room_id,
                    source_pos: rir.source_pos,
                    receiver_pos: rir.receiver_pos,
                    distance_m: rir.distance_m(),
                    norm_gain: rir.norm_gain(),
                    wav,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        self.rows.extend(rows);
        Ok(())
    }

    pub fn finish(self, mut manifest: Manifest) -> CliResult<Manifest> {
        write_jsonl(&self.root.join(METADATA_FILE), &self.rows).map_err(CliError::output)?;
        manifest.count = self.rows.len();
        write_json(&self.root.join(MANIFEST_FILE), &manifest).map_err(CliError::output)?;
        Ok(manifest)
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub root: PathBuf,
    pub manifest: Manifest,
    pub rows: Vec<MetadataRow>,
}

impl Dataset {
    pub fn open(root: &Path) -> CliResult<Self> {
        let manifest_path = root.join(MANIFEST_FILE);
        if !manifest_path.is_file() {
            return Err(CliError::MissingData(format!(
                "{} has no {MANIFEST_FILE}; run `generate` first or wait for it to finish",
                root.display()
            )));
        }
        let manifest: Manifest = read_json(&manifest_path).map_err(CliError::input)?;
        check_schema(&manifest_path.display().to_string(), &manifest.schema_version, DATASET_SCHEMA)?;
        let rows: Vec<MetadataRow> =
            read_jsonl(&root.join(METADATA_FILE)).map_err(CliError::input)?;
        if rows.len() != manifest.count {
            return Err(CliError::MissingData(format!(
                "{}: manifest lists {} responses but metadata has {}",
                root.display(),
                manifest.count,
                rows.len()
            )));
        }
        Ok(Self {
            root: root.to_path_buf(),
            manifest,
            rows,
        })
    }

    /// Loads one response with its physical gain restored in the bookkeeping.
    pub fn load(&self, row: &MetadataRow) -> Result<Rir, String> {
        let samples = read_wav(&self.root.join(&row.wav)).map_err(|e| e.to_string())?;
        Rir::with_gain(
            samples.into_iter().map(f64::from).collect(),
            row.room_id,
            row.source_pos,
            row.receiver_pos,
            row.norm_gain,
        )
        .map_err(|e| format!("{}: {e}", row.rir_id))
    }

    /// Loads rows in parallel, preserving order.
    pub fn load_rows(&self, rows: &[MetadataRow]) -> Vec<Result<Rir, String>> {
        rows.par_iter().map(|r| self.load(r)).collect()
    }
}

/// Rows are processed in chunks of this many responses to bound memory.
pub const LOAD_CHUNK: usize = 256;
