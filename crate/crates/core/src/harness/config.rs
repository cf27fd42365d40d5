//! TOML run configuration. Every key is optional.
//!
//! ```toml
//! mode = "unknown-k"        # or "fixed-k:5"
//! columns = 6
//! output_dir = "out"
//!
//! [problem]
//! frame_size = 5
//! mass_mode = "uniform"     # or "all-ones"
//! seed = 3
//!
//! [params]
//! eta = 1e-5
//! domain_term = "cumulative"
//! self_coupling = true
//! max_iterations = 1000
//! seed = 3
//!
//! [prior]
//! p = 0.8
//!
//! [trace]
//! dir = "trace"
//! scalars = true
//! grid_every = 10
//! ```

use std::path::Path;

use super::RunConfig;
use crate::error::{Error, Result};

pub fn parse_config(text: &str, path: &Path) -> Result<RunConfig> {
    toml::from_str(text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e
            .span()
            .map_or(0, |s| text[..s.start].matches('\n').count() + 1),
        message: e.message().to_string(),
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path)
}
