//! Output-directory handling: deterministic CSV/JSON files plus a manifest
//! describing the run.

use std::fs;
use std::path::{Path, PathBuf};

pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> std::io::Result<()> {
        fs::write(self.root.join(name), contents)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Writes manifest.json with the command line, seed, library version and
    /// a hash of the resolved configuration.
    pub fn finish_manifest(
        &mut self,
        command: &str,
        seed: u64,
        config: &serde_json::Value,
    ) -> std::io::Result<()> {
        let config_text = serde_json::to_string(config).expect("config serializes");
        let manifest = serde_json::json!({
            "command": command,
            "seed": seed,
            "library_version": bellkit::version(),
            "config_hash": format!("{:016x}", fnv1a(config_text.as_bytes())),
            "config": config,
            "outputs": self.files,
        });
        fs::write(
            self.root.join("manifest.json"),
            serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
        )
    }
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Fixed-precision float formatting so reruns are byte-identical.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.12e}")
}
