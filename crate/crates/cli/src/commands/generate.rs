use rirdist::rng::derive;
use rirdist::synth::{normalize_rir, sample_scenes, synthesize_batch, SynthesisConfig};

use crate::args::GenerateArgs;
use crate::dataset::{DatasetWriter, Manifest};
use crate::error::{CliError, CliResult};
use crate::lock::OutputLock;
use crate::rooms::resolve_rooms;

/// Scene seed for one room of a generation run.
pub fn room_scene_seed(seed: u64, room_id: u32) -> u64 {
    derive(seed, [u64::from(room_id)])
}

pub fn run(args: &GenerateArgs) -> CliResult<Manifest> {
    let rooms = resolve_rooms(&args.rooms)?;
    let n = usize::try_from(args.n).map_err(|_| CliError::Usage("--n is too large".into()))?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let config = SynthesisConfig {
        max_image_order: args.max_order,
        tail_crossover_ms: args.crossover_ms,
        ..Default::default()
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let _lock = OutputLock::acquire(&args.out)?;
    let mut writer = DatasetWriter::create(&args.out)?;
    for room in &rooms {
        let id = room.room_id.0;
        let scenes = sample_scenes(room, n, room_scene_seed(args.seed, id))
            .map_err(|e| CliError::Usage(format!("room {id}: {e}")))?;
        let batch = synthesize_batch(room, &scenes, &config)
            .into_iter()
            .enumerate()
            .map(|(k, r)| {
                let rir = r
                    .map_err(|e| e.to_string())
                    .and_then(|r| normalize_rir(&r).map_err(|e| e.to_string()))
                    .map_err(|e| CliError::Usage(format!("room {id} scene {k}: {e}")))?;
                Ok((format!("r{id:02}-{k:05}"), rir))
            })
            .collect::<CliResult<Vec<_>>>()?;
        writer.add_batch(&batch)?;
        log::info!("room {id}: {n} responses");
    }
    let manifest = writer.finish(Manifest::new(args.seed, n, Some(config), rooms))?;
    println!("generated {} responses in {}", manifest.count, args.out.display());
    Ok(manifest)
}
