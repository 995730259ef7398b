//! Artifacts are written to a staging directory inside the output
//! directory and moved into place only when the whole run succeeds.

use std::io;
use std::path::{Path, PathBuf};

use tempfile::TempDir;

pub struct Staging {
    dir: TempDir,
    out_dir: PathBuf,
    files: Vec<String>,
}

impl Staging {
    pub fn new(out_dir: &Path) -> io::Result<Self> {
        std::fs::create_dir_all(out_dir)?;
        let dir = tempfile::Builder::new()
            .prefix(".staging-")
            .tempdir_in(out_dir)?;
        Ok(Staging {
            dir,
            out_dir: out_dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    /// Path for a new artifact; the name is remembered for commit.
    pub fn path(&mut self, name: &str) -> PathBuf {
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        self.dir.path().join(name)
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        let path = self.path(name);
        std::fs::write(path, bytes)
    }

    /// Moves every staged file into the output directory. The staging
    /// directory is removed either way.
    pub fn commit(self) -> io::Result<Vec<String>> {
        for name in &self.files {
            std::fs::rename(self.dir.path().join(name), self.out_dir.join(name))?;
        }
        Ok(self.files)
    }
}
