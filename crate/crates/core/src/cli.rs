//! Command-line front end: `generate`, `analyze`, and `nist`.
//!
//! Exit codes: 0 on success, 1 on any error (a JSON object
//! `{"error": <kind>, "message": <text>}` is written to stderr), and for
//! `nist` 2 when the battery ran but at least one test failed.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bitstream::BitStream;
use crate::entropy::{self, EntropyReport};
use crate::error::Error;
use crate::extract::{self, ExtractionResult, ExtractorSpec};
use crate::nist::{self, TestParams};
use crate::pipeline::{self, EntropySource};
use crate::quantize::{self, QuantizerSpec};
use crate::residual;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TESTS_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pulsar-rng", version, about = "Random bits from pulsar timing residuals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantizeArg {
    Threshold,
    Gray8,
    Sha512,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtractArg {
    None,
    Xor,
    VonNeumann,
    Shake256,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, clap::Args)]
pub struct GenerateArgs {
    /// Residual CSV (`mjd,residual_us[,uncertainty_us]`).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = QuantizeArg::Gray8)]
    pub quantize: QuantizeArg,
    /// Threshold for `--quantize threshold`.
    #[arg(long, default_value_t = quantize::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = ExtractArg::None)]
    pub extract: ExtractArg,
    /// XOR window (bits per output bit).
    #[arg(long, default_value_t = extract::DEFAULT_WINDOW)]
    pub window: usize,
    /// Target statistical distance for SHAKE-256 extraction.
    #[arg(long, default_value_t = extract::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value_t = extract::DEFAULT_BLOCK_BITS)]
    pub block_bits: usize,
    /// Extractor seed as hex (required for shake256).
    #[arg(long)]
    pub seed: Option<String>,
    /// Min-entropy per quantized bit to credit. Measured when omitted.
    #[arg(long)]
    pub k_per_bit: Option<f64>,
    /// Overrides the pulsar id from the CSV metadata.
    #[arg(long)]
    pub pulsar_id: Option<String>,
    /// Output bitstream; defaults to the input path with a `.bin` extension.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Manifest path; defaults to `<output>.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, clap::Args)]
pub struct AnalyzeArgs {
    /// Bitstream file, or a residual `.csv` which is quantized first.
    #[arg(long)]
    pub input: PathBuf,
    /// Valid bits in a bitstream file. Read from `<input>.json` when present,
    /// otherwise every byte counts.
    #[arg(long)]
    pub bit_len: Option<usize>,
    /// Quantizer for residual CSV input.
    #[arg(long, value_enum, default_value_t = QuantizeArg::Gray8)]
    pub quantize: QuantizeArg,
    #[arg(long, default_value_t = quantize::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, clap::Args)]
pub struct NistArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub bit_len: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub streams: usize,
    #[arg(long, default_value_t = 100_000)]
    pub stream_len: usize,
    #[arg(long, default_value_t = nist::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = TestParams::default().block_frequency_len)]
    pub block_frequency_len: usize,
    #[arg(long, default_value_t = TestParams::default().approximate_entropy_m)]
    pub approximate_entropy_m: usize,
    #[arg(long, default_value_t = TestParams::default().serial_m)]
    pub serial_m: usize,
    #[arg(long, default_value_t = TestParams::default().linear_complexity_len)]
    pub linear_complexity_len: usize,
    /// Also write the report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn a residual CSV into a packed bitstream plus JSON manifest.
    Generate(GenerateArgs),
    /// Entropy report for a bitstream or residual file.
    Analyze(AnalyzeArgs),
    /// Run the ten-test SP800-22 battery over consecutive substreams.
    Nist(NistArgs),
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Config(String),
    Io(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Config(_) => "ConfigError",
            CliError::Io(_) => "IoError",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Config(m) | CliError::Io(m) => m.clone(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Everything in the manifest except `run` is a pure function of the
/// inputs and flags.
#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub pulsar_id: String,
    pub dataset_tag: String,
    pub input: String,
    pub residual_count: usize,
    pub quantizer: QuantizerSpec,
    pub quantized_bits: usize,
    pub extractor: Option<ExtractorSpec>,
    pub k_per_bit: Option<f64>,
    pub k_per_bit_source: Option<String>,
    pub extraction: Option<serde_json::Value>,
    pub output: String,
    pub bit_len: usize,
    pub byte_len: usize,
    pub sha256: String,
    pub run: RunInfo,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RunInfo {
    pub generated_at_unix: u64,
    pub tool_version: String,
}

fn quantizer_spec(arg: QuantizeArg, threshold: f64) -> QuantizerSpec {
    match arg {
        QuantizeArg::Threshold => QuantizerSpec::Threshold { tau: threshold },
        QuantizeArg::Gray8 => QuantizerSpec::Gray8,
        QuantizeArg::Sha512 => QuantizerSpec::Sha512,
    }
}

fn extractor_spec(args: &GenerateArgs) -> Result<Option<ExtractorSpec>, CliError> {
    Ok(match args.extract {
        ExtractArg::None => None,
        ExtractArg::Xor => Some(ExtractorSpec::XorFold { window: args.window }),
        ExtractArg::VonNeumann => Some(ExtractorSpec::VonNeumann),
        ExtractArg::Shake256 => {
            let seed = args
                .seed
                .as_deref()
                .ok_or_else(|| CliError::Config("--extract shake256 requires --seed <hex>".into()))?;
            let seed = hex::decode(seed.trim())
                .map_err(|e| CliError::Config(format!("--seed is not valid hex: {e}")))?;
            Some(ExtractorSpec::Shake256 {
                epsilon: args.epsilon,
                block_bits: args.block_bits,
                seed,
            })
        }
    })
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| io_err(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Reads a packed bitstream. The bit length comes from `bit_len`, else a
/// sidecar manifest, else the file size.
pub fn load_bitstream(path: &Path, bit_len: Option<usize>) -> Result<BitStream, CliError> {
    let bytes = read(path)?;
    let bit_len = match bit_len {
        Some(n) => Some(n),
        None => {
            let sidecar = sidecar_path(path);
            match fs::read(&sidecar) {
                Ok(raw) => serde_json::from_slice::<serde_json::Value>(&raw)
                    .ok()
                    .and_then(|v| v.get("bit_len").and_then(|b| b.as_u64()))
                    .map(|n| n as usize),
                Err(_) => None,
            }
        }
    };
    match bit_len {
        Some(n) if n > bytes.len() * 8 => Err(CliError::Config(format!(
            "bit length {n} exceeds the {} bits in {}",
            bytes.len() * 8,
            path.display()
        ))),
        Some(n) => Ok(BitStream::from_bytes_with_len(bytes, n)),
        None => Ok(BitStream::from_bytes(bytes)),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let quantizer = quantizer_spec(args.quantize, args.threshold);
    let extractor = extractor_spec(args)?;
    let mut series = residual::parse_residual_csv(&read(&args.input)?)?;
    if let Some(id) = &args.pulsar_id {
        series.pulsar_id = id.clone();
    }
    if series.pulsar_id.is_empty() {
        series.pulsar_id = args
            .input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }

    let generated = pipeline::generate(&series, &quantizer, extractor.as_ref(), args.k_per_bit)?;
    let bits = generated.output();

    let output = args
        .output
        .clone()
        .unwrap_or_else(|| args.input.with_extension("bin"));
    let manifest_path = args.manifest.clone().unwrap_or_else(|| sidecar_path(&output));
    write(&output, bits.as_bytes())?;

    let manifest = Manifest {
        pulsar_id: series.pulsar_id.clone(),
        dataset_tag: series.dataset_tag.clone(),
        input: args.input.display().to_string(),
        residual_count: generated.residual_count,
        quantizer,
        quantized_bits: generated.quantized.len(),
        extractor,
        k_per_bit: generated.k_per_bit,
        k_per_bit_source: generated.k_source.map(|s| match s {
            EntropySource::Asserted => "asserted".to_string(),
            EntropySource::Measured => "measured".to_string(),
        }),
        extraction: generated
            .extraction
            .as_ref()
            .map(|e: &ExtractionResult| serde_json::to_value(e).expect("serializable")),
        output: output.display().to_string(),
        bit_len: bits.len(),
        byte_len: bits.as_bytes().len(),
        sha256: hex::encode(Sha256::digest(bits.as_bytes())),
        run: RunInfo {
            generated_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        },
    };
    let json = to_json(&manifest);
    write(&manifest_path, json.as_bytes())?;

    match args.format {
        Format::Json => writeln!(out, "{json}"),
        Format::Text => writeln!(
            out,
            "pulsar {}: {} residuals -> {} quantized bits ({}) -> {} output bits{}\nwrote {} and {}",
            manifest.pulsar_id,
            manifest.residual_count,
            manifest.quantized_bits,
            quantizer.name(),
            manifest.bit_len,
            manifest
                .extractor
                .as_ref()
                .map(|e| format!(" ({})", e.name()))
                .unwrap_or_default(),
            output.display(),
            manifest_path.display()
        ),
    }
    .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(EXIT_OK)
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let bits = if is_csv(&args.input) {
        let series = residual::parse_residual_csv(&read(&args.input)?)?;
        let normalized = residual::normalize(&series)?;
        quantize::quantize(&normalized, &quantizer_spec(args.quantize, args.threshold))?
    } else {
        load_bitstream(&args.input, args.bit_len)?
    };
    let report: EntropyReport = entropy::analyze(&bits)?;
    match args.format {
        Format::Json => writeln!(out, "{}", to_json(&report)),
        Format::Text => writeln!(
            out,
            "bits: {}\nones: {}\nShannon entropy: {} bits per byte\nShannon entropy: {:.6} bits per bit\nMin-entropy: {:.6} bits per bit",
            report.sample_bits,
            report.ones,
            report
                .shannon_bits_per_byte
                .map(|h| format!("{h:.6}"))
                .unwrap_or_else(|| "n/a".into()),
            report.shannon_bits_per_bit,
            report.min_entropy_bits_per_bit
        ),
    }
    .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(EXIT_OK)
}

fn cmd_nist(args: &NistArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let bits = load_bitstream(&args.input, args.bit_len)?;
    let params = TestParams {
        block_frequency_len: args.block_frequency_len,
        approximate_entropy_m: args.approximate_entropy_m,
        serial_m: args.serial_m,
        linear_complexity_len: args.linear_complexity_len,
        alpha: args.alpha,
    };
    let result = nist::run_battery(&bits, args.streams, args.stream_len, &params)?;
    let rendered = match args.format {
        Format::Json => to_json(&result),
        Format::Text => result.to_table(),
    };
    if let Some(path) = &args.report {
        write(path, rendered.as_bytes())?;
    }
    writeln!(out, "{}", rendered.trim_end()).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(if result.all_pass {
        EXIT_OK
    } else {
        EXIT_TESTS_FAILED
    })
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Nist(a) => cmd_nist(a, out),
    }
}

pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = writeln!(err, "{}", error_json("ConfigError", e.to_string().trim()));
            return EXIT_ERROR;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(e.kind(), &e.message()));
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("pulsar-rng").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_flag_is_config_error() {
        let (code, _, err) = run_args(&["generate", "--bogus"]);
        assert_eq!(code, EXIT_ERROR);
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], "ConfigError");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("generate"));
    }

    #[test]
    fn missing_input_is_io_error() {
        let (code, _, err) = run_args(&["analyze", "--input", "/nonexistent/file.bin"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("IoError"));
    }
}
