//! Command-line front end for the flstego pipeline.
//!
//! Exit codes: 0 success, 2 usage error, 3 file or parse error,
//! 4 validation error (dimensions, keys). Output files are written via a
//! temporary file and renamed into place, so a failing command never
//! leaves a partial artifact.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use flstego::codec::{self, PbmFormat, PgmFormat, RasterKind};
use flstego::{metrics, stego, FlMap, KeyBundle, MapId};

const KEYFILE_HELP: &str = "\
Key files are three fixed-order lines:

    map=FL6
    modulus=256
    keys=131,163,34

`map` names a transform (FL1, FL2, ... or ARNOLD), `modulus` must equal
the cover side, and `keys` lists one receiver key per occupied bit
plane, each in 1..=P-1 where P is the transform's period.";

#[derive(Parser)]
#[command(
    name = "flstego",
    version,
    about = "Hide binary secret images in the low bit planes of grayscale covers",
    long_about = "Hide binary secret images in the low bit planes of grayscale PGM covers.\n\
        Each secret is scrambled with a keyed torus transform before embedding and\n\
        unscrambled after extraction.\n\n\
        SHARP EDGE: payloads carry no header, checksum or authentication. Revealing\n\
        with a wrong key, or from an image that holds no secret, produces plausible\n\
        noise instead of an error.",
    after_help = KEYFILE_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt 1-8 secrets and embed them into a cover image
    Hide(HideArgs),
    /// Extract and decrypt the secrets from a stego image
    Reveal(RevealArgs),
    /// Apply a torus transform to an image a given number of times
    Scramble(ScrambleArgs),
    /// Print the period of a transform on an N x N torus
    Period(PeriodArgs),
    /// Split a grayscale image into its 8 bit planes
    Slice(SliceArgs),
    /// Report MSE and PSNR between two grayscale images
    Metrics(MetricsArgs),
}

#[derive(Args)]
struct HideArgs {
    /// Cover image (PGM, square)
    #[arg(long)]
    cover: PathBuf,
    /// Secret image (PBM, same side as the cover); repeat for up to 8
    #[arg(long = "secret", required = true)]
    secrets: Vec<PathBuf>,
    /// Key file; see --help for the format
    #[arg(long)]
    keyfile: PathBuf,
    /// Output stego image (PGM)
    #[arg(long)]
    out: PathBuf,
    /// Print `mse=<float> psnr=<float|inf>` for the stego image
    #[arg(long)]
    report: bool,
}

#[derive(Args)]
struct RevealArgs {
    /// Stego image (PGM)
    #[arg(long)]
    stego: PathBuf,
    /// Key file; its key count decides how many planes are extracted
    #[arg(long)]
    keyfile: PathBuf,
    /// Directory for secret_1.pbm .. secret_k.pbm
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ScrambleArgs {
    /// Input image (PGM or PBM, square)
    #[arg(long = "in")]
    input: PathBuf,
    /// Transform to apply (FL<i> or ARNOLD)
    #[arg(long, value_parser = parse_map_id)]
    map: MapId,
    /// Torus size; `auto` uses the image side, an explicit value must equal it
    #[arg(long, default_value = "auto", value_parser = parse_modulus)]
    modulus: ModulusArg,
    /// Number of applications of the transform
    #[arg(long)]
    iterations: u64,
    /// Output image, same kind as the input
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PeriodArgs {
    /// Transform to inspect (FL<i> or ARNOLD)
    #[arg(long, value_parser = parse_map_id)]
    map: MapId,
    /// Torus size N >= 2
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    modulus: u32,
}

#[derive(Args)]
struct SliceArgs {
    /// Input grayscale image (PGM)
    #[arg(long = "in")]
    input: PathBuf,
    /// Directory for plane_1.pbm .. plane_8.pbm
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    /// First image (PGM)
    #[arg(long)]
    a: PathBuf,
    /// Second image (PGM), same size
    #[arg(long)]
    b: PathBuf,
}

#[derive(Clone, Copy)]
enum ModulusArg {
    Auto,
    Value(u32),
}

fn parse_map_id(s: &str) -> Result<MapId, String> {
    MapId::from_str(s).map_err(|e| e.to_string())
}

fn parse_modulus(s: &str) -> Result<ModulusArg, String> {
    if s == "auto" {
        return Ok(ModulusArg::Auto);
    }
    match s.parse::<u32>() {
        Ok(n) if n >= 2 => Ok(ModulusArg::Value(n)),
        Ok(n) => Err(format!("modulus {n} is too small; the torus needs at least 2")),
        Err(_) => Err(format!("expected `auto` or an integer, got `{s}`")),
    }
}

enum CliError {
    Usage(String),
    File(String),
    Validation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::File(_) => 3,
            CliError::Validation(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::File(msg) | CliError::Validation(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl From<flstego::Error> for CliError {
    fn from(err: flstego::Error) -> Self {
        if err.is_file_error() {
            CliError::File(err.to_string())
        } else {
            CliError::Validation(err.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Hide(args) => cmd_hide(args),
        Command::Reveal(args) => cmd_reveal(args),
        Command::Scramble(args) => cmd_scramble(args),
        Command::Period(args) => cmd_period(args),
        Command::Slice(args) => cmd_slice(args),
        Command::Metrics(args) => cmd_metrics(args),
    }
}

fn cmd_hide(args: HideArgs) -> Result<(), CliError> {
    if args.secrets.len() > 8 {
        return Err(CliError::Usage(format!(
            "{} secrets given; at most 8 bit planes are available",
            args.secrets.len()
        )));
    }
    let cover = codec::read_gray(&args.cover)?;
    let secrets = args
        .secrets
        .iter()
        .map(codec::read_bin)
        .collect::<flstego::Result<Vec<_>>>()?;
    let keys = load_key_bundle(&args.keyfile)?;
    let result = stego::hide(&cover, &secrets, &keys)?;
    codec::write_gray(&result.stego, &args.out, PgmFormat::Binary)?;
    if args.report {
        println!("mse={} psnr={}", result.mse, result.psnr_db);
    }
    Ok(())
}

fn cmd_reveal(args: RevealArgs) -> Result<(), CliError> {
    let stego_img = codec::read_gray(&args.stego)?;
    let keys = load_key_bundle(&args.keyfile)?;
    let secrets = stego::reveal(&stego_img, &keys)?;
    create_dir(&args.out_dir)?;
    for (index, secret) in secrets.iter().enumerate() {
        let path = args.out_dir.join(format!("secret_{}.pbm", index + 1));
        codec::write_bin(secret, path, PbmFormat::Binary)?;
    }
    Ok(())
}

fn cmd_scramble(args: ScrambleArgs) -> Result<(), CliError> {
    let bytes = std::fs::read(&args.input).map_err(|source| flstego::Error::Io {
        path: args.input.clone(),
        source,
    })?;
    let kind = codec::sniff_kind(&bytes)?;
    match kind {
        RasterKind::Gray => {
            let img = codec::decode_gray(&bytes)?.into_image()?;
            let map = build_scramble_map(args.map, args.modulus, img.side())?;
            let out = map.scramble(&img, args.iterations)?;
            codec::write_gray(&out, &args.out, PgmFormat::Binary)?;
        }
        RasterKind::Bitmap => {
            let img = codec::decode_bits(&bytes)?.into_image()?;
            let map = build_scramble_map(args.map, args.modulus, img.side())?;
            let out = map.scramble(&img, args.iterations)?;
            codec::write_bin(&out, &args.out, PbmFormat::Binary)?;
        }
    }
    Ok(())
}

fn build_scramble_map(id: MapId, modulus: ModulusArg, side: usize) -> Result<FlMap, CliError> {
    let modulus = match modulus {
        ModulusArg::Auto => side as u32,
        ModulusArg::Value(n) => {
            if n as usize != side {
                return Err(CliError::Validation(format!(
                    "explicit modulus {n} does not match the image side {side}"
                )));
            }
            n
        }
    };
    Ok(FlMap::build(id, modulus)?)
}

fn cmd_period(args: PeriodArgs) -> Result<(), CliError> {
    let map = FlMap::build(args.map, args.modulus)?;
    println!("period={}", map.period()?);
    Ok(())
}

fn cmd_slice(args: SliceArgs) -> Result<(), CliError> {
    let img = codec::read_gray(&args.input)?;
    let stack = flstego::bitplane::slice(&img);
    create_dir(&args.out_dir)?;
    for k in 1..=8u8 {
        let path = args.out_dir.join(format!("plane_{k}.pbm"));
        codec::write_bin(stack.plane(k).expect("k in range"), path, PbmFormat::Binary)?;
    }
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), CliError> {
    let a = codec::read_gray(&args.a)?;
    let b = codec::read_gray(&args.b)?;
    let report = metrics::compare(&a, &b)?;
    println!("mse={} psnr={}", report.mse, report.psnr_db);
    Ok(())
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| {
        CliError::File(format!("{}: {source}", dir.display()))
    })
}

// ---------------------------------------------------------------------
// Key files

fn load_key_bundle(path: &Path) -> Result<KeyBundle, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::File(format!("{}: {source}", path.display())))?;
    let (map_id, modulus, keys) = parse_keyfile(&text)
        .map_err(|msg| CliError::File(format!("{}: {msg}", path.display())))?;
    Ok(KeyBundle::new(map_id, modulus, keys)?)
}

/// Parses the three fixed-order `map=` / `modulus=` / `keys=` lines.
/// Syntax problems are reported as strings (file errors); semantic
/// validation happens in [`KeyBundle::new`].
fn parse_keyfile(text: &str) -> Result<(MapId, u32, Vec<u64>), String> {
    let mut lines = text.lines().map(str::trim).filter(|line| !line.is_empty());
    let mut field = |name: &str| -> Result<String, String> {
        let line = lines
            .next()
            .ok_or_else(|| format!("missing `{name}=` line"))?;
        line.strip_prefix(name)
            .and_then(|rest| rest.strip_prefix('='))
            .map(str::to_owned)
            .ok_or_else(|| format!("expected `{name}=<value>`, found `{line}`"))
    };

    let map_text = field("map")?;
    let map_id = match MapId::from_str(&map_text) {
        Ok(id) => id,
        // Unknown index ranges are semantic, not syntactic; let the
        // bundle constructor report them as validation errors.
        Err(flstego::Error::MapIndex { .. }) => {
            return Err(format!("map index in `{map_text}` is out of range"));
        }
        Err(err) => return Err(err.to_string()),
    };
    let modulus_text = field("modulus")?;
    let modulus: u32 = modulus_text
        .parse()
        .map_err(|_| format!("invalid modulus `{modulus_text}`"))?;
    let keys_text = field("keys")?;
    let keys = keys_text
        .split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<u64>()
                .map_err(|_| format!("invalid key `{piece}`"))
        })
        .collect::<Result<Vec<u64>, String>>()?;
    if lines.next().is_some() {
        return Err("trailing content after the `keys=` line".into());
    }
    Ok((map_id, modulus, keys))
}
