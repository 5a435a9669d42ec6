use std::path::Path;

use rirdist::io::read_json;
use rirdist::synth::{builtin_room, ShoeboxRoom, BUILTIN_ROOM_COUNT};

use crate::error::{CliError, CliResult};

/// Parses "1-20", "3", "1,4,7-9" into sorted, de-duplicated ids.
pub fn parse_room_ids(spec: &str) -> CliResult<Vec<u32>> {
    let bad = |part: &str| CliError::Usage(format!("invalid room list entry {part:?} in {spec:?}"));
    let mut ids = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (lo, hi) = match part.split_once('-') {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad(part))?, b.trim().parse().map_err(|_| bad(part))?),
            None => {
                let v: u32 = part.parse().map_err(|_| bad(part))?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(bad(part));
        }
        ids.extend(lo..=hi);
    }
    ids.sort_unstable();
    ids.dedup();
    if ids.is_empty() {
        return Err(CliError::Usage(format!("no rooms in {spec:?}")));
    }
    Ok(ids)
}

/// Built-in rooms by id list, or rooms read from a JSON file if `spec` names one.
pub fn resolve_rooms(spec: &str) -> CliResult<Vec<ShoeboxRoom<f64>>> {
    let path = Path::new(spec);
    if path.is_file() {
        let rooms: Vec<ShoeboxRoom<f64>> = read_json(path).map_err(|e| CliError::Usage(e.to_string()))?;
        for r in &rooms {
            r.validate().map_err(|e| CliError::Usage(format!("{spec}: room {}: {e}", r.room_id)))?;
        }
        if rooms.is_empty() {
            return Err(CliError::Usage(format!("{spec} lists no rooms")));
        }
        return Ok(rooms);
    }
    parse_room_ids(spec)?
        .into_iter()
        .map(|id| {
            builtin_room(id).ok_or_else(|| {
                CliError::Usage(format!("unknown room {id}; built-in rooms are 1-{BUILTIN_ROOM_COUNT}"))
            })
        })
        .collect()
}
