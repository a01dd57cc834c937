//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use indisc::Signature;

/// Generalized indiscernibles over tree and array index structures.
///
/// Exit status: 0 success, 1 property violated (counterexample printed),
/// 2 usage or input error.
#[derive(Debug, Parser)]
#[command(name = "indisc", version)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantifier-free type codes of index tuples.
    #[command(subcommand)]
    Qftp(QftpCmd),
    /// Build or verify the named index maps.
    #[command(subcommand)]
    Maps(MapsCmd),
    /// Extract indiscernible families from a family file.
    #[command(subcommand)]
    Extract(ExtractCmd),
    /// Exhaustive self-checks.
    #[command(subcommand)]
    Check(CheckCmd),
    /// TP2 witnesses.
    #[command(subcommand)]
    Tp2(Tp2Cmd),
}

fn parse_sig(s: &str) -> Result<Signature, String> {
    s.parse().map_err(|e: indisc::ParseError| e.to_string())
}

/// `a,b` with both parts non-negative integers.
fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}

#[derive(Debug, Subcommand)]
pub enum QftpCmd {
    /// Print the code of a tuple as hex plus its atoms.
    Code {
        #[arg(long, value_parser = parse_sig)]
        sig: Signature,
        /// Tuple literal such as `(<0>,<1,0>)` or `((0,1),(2,0))`.
        tuple: String,
    },
    /// Compare the codes of two tuples; exit 1 if they differ.
    Equal {
        #[arg(long, value_parser = parse_sig)]
        sig: Signature,
        first: String,
        second: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    /// Identity on a tree fragment (`--fragment`, `--from`, `--to`).
    Identity,
    /// Restriction to the levels in `--levels` (`--fragment`).
    LevelRestriction,
    /// The children `node⌢<i>`, `i < count`, of `--node` as a path of
    /// a `1 × count` array.
    Path,
    /// The str0 embedding on `--fragment k,m`.
    Str0,
    /// Same-level nodes of `--fragment` spread along array rows.
    Stretch,
    /// `(i, j) ↦ <0>^{2i}⌢<j+1>` on `--array`.
    G,
    /// Stretch after `g` on `--array`.
    Fg,
}

#[derive(Debug, Args)]
pub struct MapSpec {
    #[arg(value_enum)]
    pub kind: MapKind,
    #[arg(long, value_parser = parse_pair, default_value = "2,2")]
    pub fragment: (u64, u64),
    #[arg(long, value_parser = parse_pair, default_value = "3,3")]
    pub array: (u64, u64),
    /// Source signature; overrides the map's default.
    #[arg(long, value_parser = parse_sig)]
    pub from: Option<Signature>,
    /// Target signature; overrides the map's default.
    #[arg(long, value_parser = parse_sig)]
    pub to: Option<Signature>,
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<usize>,
    #[arg(long, default_value = "<>")]
    pub node: String,
    #[arg(long, default_value_t = 4)]
    pub count: u64,
}

#[derive(Debug, Subcommand)]
pub enum MapsCmd {
    /// Print the map as a source/target table.
    Build(MapSpec),
    /// Check that the map respects quantifier-free types.
    Verify {
        #[command(flatten)]
        spec: MapSpec,
        #[arg(long, default_value_t = 4)]
        arity: usize,
    },
}

#[derive(Debug, Args)]
pub struct FileIo {
    /// Family file (JSON).
    pub input: PathBuf,
    /// Write the extracted family file here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ExtractCmd {
    /// Indiscernible subsequence of a `1 × N` family.
    Seq {
        #[command(flatten)]
        io: FileIo,
        /// Checked arities `1..=t`.
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Length of the subsequence.
        #[arg(long)]
        h: usize,
    },
    /// str0-indiscernible family over `k^{≤m}` from a str-indiscernible tree family.
    Tree {
        #[command(flatten)]
        io: FileIo,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
    /// Array-indiscernible `r × c` sub-array.
    Array {
        #[command(flatten)]
        io: FileIo,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Homogeneous level set for a meet-closed str code (hex).
    Levels {
        /// Family file (JSON).
        input: PathBuf,
        #[arg(long)]
        code: String,
        #[arg(long)]
        h: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// Run the exhaustive fact suites and print a PASS/FAIL table.
    Facts {
        #[arg(long, value_parser = parse_pair, default_value = "2,2")]
        fragment: (u64, u64),
        #[arg(long, value_parser = parse_pair, default_value = "4,4")]
        array: (u64, u64),
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
    /// Check a family file for indiscernibility.
    Indiscernible {
        input: PathBuf,
        #[arg(long, value_parser = parse_sig)]
        sig: Signature,
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Tp2Cmd {
    /// Check that a witness file is k-TP2.
    Verify {
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Reduce a k-TP2 witness to a 2-TP2 witness and print the trace.
    Reduce {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Write the output witness here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}
