//! The `fragmark` command line.
//!
//! Exit status: 0 on success, 1 for invalid input, 2 for file problems and
//! 3 when `detect` finds at least one tampered block. Failures are reported
//! on stderr as `error:<kind>: <message>`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fragmark_core::image::BlockGrid;
use fragmark_core::{
    collage, detect, embed, forge, CrackBudget, Error as CoreError, KeySet, Permutation,
    RegionAssignment, SchemeParams,
};

use crate::error::{Error, Result};
use crate::{assignment, keyfile, paramsfile, pnm, search};

pub const EXIT_TAMPERED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fragmark", version, about = "Self-embedding fragile watermark toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    /// Embedding mode `m,l`.
    #[arg(long, default_value = "6,2")]
    mode: String,
    /// Block side in pixels.
    #[arg(long, default_value_t = 2)]
    block: usize,
    /// Authentication bits per block.
    #[arg(long = "la")]
    la: Option<usize>,
    /// Reference subset size (needs --v).
    #[arg(long, requires = "v")]
    u: Option<usize>,
    /// Reference bits per subset (needs --u).
    #[arg(long, requires = "u")]
    v: Option<usize>,
    /// Parameter file `m=..,l=..,b=..,La=..,u=..,v=..`; overrides the flags above.
    #[arg(long)]
    params: Option<PathBuf>,
}

impl SchemeArgs {
    fn resolve(&self) -> Result<SchemeParams> {
        if let Some(path) = &self.params {
            return paramsfile::load_params(path);
        }
        let (m, l) = paramsfile::parse_mode(&self.mode)?;
        let mut p = SchemeParams::for_mode(m, l, self.block, self.la)?;
        if let (Some(u), Some(v)) = (self.u, self.v) {
            p.u = u;
            p.v = v;
        }
        Ok(p)
    }
}

#[derive(Debug, Args)]
struct KeyArg {
    /// Key file written by `keygen`.
    #[arg(long, visible_alias = "seed-file")]
    keys: PathBuf,
}

impl KeyArg {
    fn load(&self, err: &mut dyn Write) -> Result<KeySet> {
        let keys = keyfile::load_keys(&self.keys)?;
        if keys.has_zero_seed() {
            let _ = writeln!(err, "warning: key file contains an all-zero seed");
        }
        Ok(keys)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a fresh key file from OS randomness.
    Keygen {
        #[arg(long)]
        out: PathBuf,
    },
    /// Watermark a cover image.
    Embed {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        keys: KeyArg,
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Check every block of a watermarked image.
    Detect {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        keys: KeyArg,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Write a PBM mask with one pixel per block (black = tampered).
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Assemble a collage from authenticated images.
    Collage {
        /// Four donors: top-left, top-right, bottom-left, bottom-right.
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], conflicts_with_all = ["donors", "assign"])]
        quadrants: Option<Vec<PathBuf>>,
        /// Donor images referenced by index from --assign.
        #[arg(long, num_args = 1.., requires = "assign")]
        donors: Option<Vec<PathBuf>>,
        /// Block-assignment file.
        #[arg(long, requires = "donors")]
        assign: Option<PathBuf>,
        /// Block side used to split the quadrants.
        #[arg(long, default_value_t = 2)]
        block: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover the embedding permutation from two authenticated images.
    Crack {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Worker threads (default: logical cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Allow searches over 9 to 12 watermark bits.
        #[arg(long)]
        long: bool,
        /// Stop after this many candidates.
        #[arg(long)]
        limit: Option<u64>,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Re-sign blocks with new content using a recovered permutation.
    Forge {
        #[arg(long = "in")]
        input: PathBuf,
        /// Image supplying the new MSB content.
        #[arg(long)]
        content: PathBuf,
        /// Comma-separated permutation, as printed by `crack`.
        #[arg(long)]
        perm: String,
        /// Comma-separated block indices; ranges like 10-20 are allowed.
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        blocks: Option<String>,
        /// Forge every block.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate parameters for an image size.
    ParamsCheck {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
    },
}

/// Runs the CLI with the given arguments (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let msg = e.to_string();
                    let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
                    let _ = writeln!(err, "error:usage: {first}");
                    1
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let message = match &e {
                Error::Core(CoreError::SearchTooLarge { elements }) => {
                    search::refusal_message(*elements, false)
                }
                other => other.to_string(),
            };
            let _ = writeln!(err, "error:{}: {message}", e.code());
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Keygen { out: path } => {
            keyfile::save_keys(&path, &keyfile::generate_keys()?)?;
            let _ = writeln!(out, "wrote {}", path.display());
        }
        Command::Embed {
            input,
            out: path,
            keys,
            scheme,
        } => {
            let keys = keys.load(err)?;
            let params = scheme.resolve()?;
            let cover = pnm::load_image(&input)?;
            let marked = embed(&cover, &params, &keys)?;
            pnm::save_image(&path, &marked)?;
            let _ = writeln!(out, "embedded {params} into {}", path.display());
        }
        Command::Detect {
            input,
            keys,
            scheme,
            mask,
        } => {
            let keys = keys.load(err)?;
            let params = scheme.resolve()?;
            let img = pnm::load_image(&input)?;
            let map = detect(&img, &params, &keys)?;
            if let Some(mask) = mask {
                pnm::save_mask(mask, &map)?;
            }
            let _ = writeln!(
                out,
                "tampered_blocks={} total={}",
                map.tampered_count(),
                map.len()
            );
            let _ = writeln!(out, "tampering_rate={:.6}", map.tampering_rate());
            if map.tampered_count() > 0 {
                return Ok(EXIT_TAMPERED);
            }
        }
        Command::Collage {
            quadrants,
            donors,
            assign,
            block,
            out: path,
        } => {
            let (images, assignment) = if let Some(paths) = quadrants {
                let images = load_all(&paths)?;
                let grid = BlockGrid::for_image(&images[0], block)?;
                (images, RegionAssignment::quadrants(&grid))
            } else if let (Some(paths), Some(assign)) = (donors, assign) {
                (load_all(&paths)?, assignment::load_assignment(assign)?)
            } else {
                return Err(Error::Usage(
                    "collage needs --quadrants or --donors with --assign".into(),
                ));
            };
            let img = collage(&images, &assignment)?;
            pnm::save_image(&path, &img)?;
            let _ = writeln!(out, "wrote {}", path.display());
        }
        Command::Crack {
            a,
            b,
            scheme,
            threads,
            long,
            limit,
            report,
        } => {
            let params = scheme.resolve()?;
            let (img_a, img_b) = (pnm::load_image(&a)?, pnm::load_image(&b)?);
            let budget = CrackBudget {
                allow_long: long,
                candidate_limit: limit,
            };
            let result = search::crack_parallel(&img_a, &img_b, &params, budget, threads);
            let result = match result {
                Err(Error::Core(CoreError::SearchTooLarge { elements })) => {
                    let _ = writeln!(
                        err,
                        "error:search_too_large: {}",
                        search::refusal_message(elements, long)
                    );
                    return Ok(1);
                }
                other => other?,
            };
            let text = result.render();
            let _ = write!(out, "{text}");
            if let Some(path) = report {
                std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            }
        }
        Command::Forge {
            input,
            content,
            perm,
            blocks,
            all,
            scheme,
            out: path,
        } => {
            let params = scheme.resolve()?;
            let img = pnm::load_image(&input)?;
            let content = pnm::load_image(&content)?;
            let pi: Permutation = perm.parse()?;
            let block_list = if all {
                let grid = BlockGrid::new(img.width(), img.height(), params.b)?;
                (0..grid.block_count()).collect()
            } else {
                parse_block_list(blocks.as_deref().unwrap_or(""))?
            };
            let forged = forge(&img, &content, &block_list, &params, &pi)?;
            pnm::save_image(&path, &forged)?;
            let _ = writeln!(out, "forged {} blocks into {}", block_list.len(), path.display());
        }
        Command::ParamsCheck {
            scheme,
            width,
            height,
        } => {
            let params = scheme.resolve()?;
            let checked = params.validate(width, height)?;
            let _ = writeln!(out, "{params}");
            let _ = writeln!(out, "mode={}", checked.mode());
            let _ = writeln!(out, "m_prime={}", checked.m_prime());
            let _ = writeln!(out, "subsets={}", checked.subsets());
            let _ = writeln!(out, "reference_bits={}", checked.reference_len());
            let _ = writeln!(out, "blocks={}", checked.grid().block_count());
        }
    }
    Ok(0)
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<fragmark_core::GrayImage>> {
    paths.iter().map(pnm::load_image).collect()
}

/// Parses `1,4,10-12` into `[1, 4, 10, 11, 12]`.
pub fn parse_block_list(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Usage(format!("bad block list `{text}`"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}
