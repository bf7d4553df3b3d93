use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Cli;
use crate::error::{CliError, CliResult};

/// The bytes a command produces plus the facts that go into the sidecar.
pub struct Artifact {
    pub body: Vec<u8>,
    pub details: Value,
}

impl Artifact {
    pub fn text(body: String, details: Value) -> Self {
        Artifact {
            body: body.into_bytes(),
            details,
        }
    }

    pub fn json(value: &impl Serialize) -> CliResult<Self> {
        let mut body = serde_json::to_vec_pretty(value)?;
        body.push(b'\n');
        Ok(Artifact {
            body,
            details: Value::Null,
        })
    }

    pub fn csv<R: Serialize>(rows: &[R], details: Value) -> CliResult<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for row in rows {
            writer.serialize(row)?;
        }
        let body = writer
            .into_inner()
            .map_err(|e| io_error(Path::new("<csv buffer>"))(e.into_error()))?;
        Ok(Artifact { body, details })
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(io_error(path))
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".provenance.json");
    PathBuf::from(name)
}

/// Writes the artifact to `--output` (plus its sidecar) or to stdout.
pub fn emit(cli: &Cli, artifact: &Artifact) -> CliResult<()> {
    let Some(path) = &cli.output else {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        return lock
            .write_all(&artifact.body)
            .and_then(|()| lock.flush())
            .map_err(io_error(Path::new("<stdout>")));
    };
    std::fs::write(path, &artifact.body).map_err(io_error(path))?;
    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let provenance = json!({
        "tool": "wlbounds",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cli.command,
        "details": artifact.details,
        "created_unix": created,
    });
    let sidecar = sidecar_path(path);
    let mut text = serde_json::to_vec_pretty(&provenance)?;
    text.push(b'\n');
    std::fs::write(&sidecar, text).map_err(io_error(&sidecar))
}
