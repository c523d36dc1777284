//! Sequence input from flags or CSV files.

use std::path::Path;

use cesaro_core::registry::seeded_sequence;
use cesaro_core::{FiniteSequence, C64};
use clap::Args;

use crate::{parse_c64, CliError};

/// Where the input sequence comes from; exactly one source is required.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SequenceSource {
    /// Entries f(0), f(1), ... separated by ';', each "re" or "re,im"
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
    /// CSV file with a column `re` and optional column `im`
    #[arg(long)]
    pub input: Option<std::path::PathBuf>,
    /// Random entries in the unit square of this length (see --seed)
    #[arg(long)]
    pub random: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct SequenceInput {
    #[command(flatten)]
    pub source: SequenceSource,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl SequenceInput {
    pub fn load(&self) -> Result<FiniteSequence, CliError> {
        let s = &self.source;
        if let Some(v) = &s.values {
            let vals = v
                .split(';')
                .filter(|x| !x.trim().is_empty())
                .map(parse_c64)
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::Usage)?;
            return Ok(FiniteSequence::new(vals));
        }
        if let Some(path) = &s.input {
            return read_csv(path);
        }
        let len = s.random.unwrap_or(0);
        Ok(seeded_sequence(self.seed, len))
    }

    /// Seed to record in metadata, if the input was generated.
    pub fn seed(&self) -> Option<u64> {
        self.source.random.map(|_| self.seed)
    }
}

fn read_csv(path: &Path) -> Result<FiniteSequence, CliError> {
    let bad = |e: String| CliError::Usage(format!("{}: {e}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let re = col("re").ok_or_else(|| bad("missing column 're'".into()))?;
    let im = col("im");
    let mut vals = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| {
            rec.get(i)
                .unwrap_or("")
                .trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("bad number on line {}", vals.len() + 2)))
        };
        let z = C64::new(num(re)?, im.map(num).transpose()?.unwrap_or(0.0));
        vals.push(z);
    }
    Ok(FiniteSequence::new(vals))
}
