pub mod control;
pub mod locus;
pub mod material;
pub mod simulate;
pub mod sweep;
pub mod sysid;
pub mod workspace;

use std::path::Path;

use freelab::control::{auto_tune, PidGains};
use freelab::dynamics::LumpedParams;
use freelab::kinematics::FreeGeometry;

use crate::config::WorkbenchConfig;
use crate::output::RunOutput;
use crate::{Common, Failure};

/// Parse the configuration (or defaults) and start a run record.
pub fn load(common: &Common) -> Result<(WorkbenchConfig, RunOutput), Failure> {
    let mut out = RunOutput::default();
    let cfg = match &common.config {
        Some(path) => {
            let (cfg, bytes) = WorkbenchConfig::load(path)?;
            out.config = Some(bytes);
            cfg
        }
        None => WorkbenchConfig::default(),
    };
    Ok((cfg, out))
}

/// Read an input file, recording its digest under its file name.
pub fn read_input(path: &Path, out: &mut RunOutput) -> Result<Vec<u8>, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    out.inputs.push((name, bytes.clone()));
    Ok(bytes)
}

/// Rows of a headed CSV of numbers. Returns the lower-cased header.
pub fn read_numeric_csv(bytes: &[u8], what: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), Failure> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes);
    let header: Vec<String> =
        rdr.headers().map_err(|e| Failure::Config(format!("{what}: {e}")))?.iter().map(|h| h.to_ascii_lowercase()).collect();
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Failure::Config(format!("{what}: {e}")))?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| Failure::Config(format!("{what}: line {}: '{f}' is not a number", i + 2))))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != header.len() {
            return Err(Failure::Config(format!("{what}: line {}: expected {} fields", i + 2, header.len())));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Explicit gains from the configuration, otherwise the auto-tuned set.
pub fn gains(cfg: &WorkbenchConfig, geom: &FreeGeometry, params: &LumpedParams) -> Result<(PidGains, Option<f64>), Failure> {
    if let Some(g) = cfg.explicit_gains() {
        return Ok((g, None));
    }
    let t = auto_tune(geom, params, cfg.integration.control_rate_hz).map_err(|e| Failure::Numeric(format!("auto_tune: {e}")))?;
    log::info!("auto-tuned gains {:?} (spectral radius {:.4})", t.gains, t.spectral_radius);
    Ok((t.gains, Some(t.spectral_radius)))
}

pub fn record_every(cfg: &WorkbenchConfig) -> Result<usize, Failure> {
    let i = &cfg.integration;
    let n = (i.output_interval_s / i.dt_s).round();
    if n < 1.0 || ((n * i.dt_s - i.output_interval_s) / i.output_interval_s).abs() > 1e-9 {
        return Err(Failure::Config(format!(
            "integration.output_interval_s: {} s is not a whole number of dt_s = {} s",
            i.output_interval_s, i.dt_s
        )));
    }
    Ok(n as usize)
}
