//! Configuration, presets, manifests and file formats.

mod config;
mod manifest;
mod table;

pub use config::{
    parse_config_file, parse_config_str, preset, to_toml, ConfigFile, PRESETS, SCHEMA_VERSION,
};
pub use manifest::RunManifest;
pub use table::{
    detection_csv, efficiency_csv, fmt_float, histogram_csv, jumps_csv, path_csv, read_jumps,
    read_path, to_json, write_jumps, write_json, write_path, write_text,
};
