use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use vinscheme::scheme::{discover_with_reverse, Variant};
use vinscheme::survey::{self, DEFAULT_CLASSIFY_N};
use vinscheme::{discover, eval, DiscoveryParams, NoScheme, Oracle, PatternSet, Scheme};

#[derive(Parser)]
#[command(name = "vinscheme", version, about = "Enumeration schemes for vincular pattern avoidance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Bounds {
    /// Maximum prefix length.
    #[arg(short = 'd', long = "depth", default_value_t = 5)]
    depth: usize,
    /// Maximum norm of basis gap vectors.
    #[arg(short = 'M', long = "max-gap-norm", default_value_t = 2)]
    max_gap_norm: u32,
}

impl Bounds {
    fn params(self) -> DiscoveryParams {
        DiscoveryParams::new(self.depth, self.max_gap_norm)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Search for a finite scheme.
    Discover {
        /// Comma-separated patterns, e.g. "23-1, 3-21".
        patterns: String,
        #[command(flatten)]
        bounds: Bounds,
        /// Retry with the reversed patterns on failure.
        #[arg(long)]
        try_reverse: bool,
        /// Write the scheme document here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Count avoiders for n = 1..N.
    Enumerate {
        /// Patterns, unless --scheme is given.
        patterns: Option<String>,
        /// Largest length (same as --n).
        #[arg(value_name = "N")]
        n_max: Option<usize>,
        #[arg(long = "n", conflicts_with = "n_max")]
        n_flag: Option<usize>,
        /// Read a scheme document instead of discovering one.
        #[arg(long)]
        scheme: Option<PathBuf>,
        /// Refine counts by number of inversions.
        #[arg(long)]
        by_inversions: bool,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        json: bool,
    },
    /// Compare scheme counts with brute force.
    OracleCheck {
        /// Patterns, unless --scheme is given.
        patterns: Option<String>,
        #[arg(long = "n", default_value_t = 8)]
        n_max: usize,
        #[arg(long)]
        scheme: Option<PathBuf>,
        #[arg(long, default_value_t = vinscheme::oracle::DEFAULT_ORACLE_LIMIT)]
        oracle_limit: usize,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        json: bool,
    },
    /// Success rates over symmetry classes.
    Survey {
        /// Single patterns of this length, one row per block type.
        #[arg(long, conflicts_with = "set_type", required_unless_present = "set_type")]
        length: Option<usize>,
        /// Sets with these pattern lengths, e.g. "3,3".
        #[arg(long)]
        set_type: Option<String>,
        #[command(flatten)]
        bounds: Bounds,
        /// Allow long-running set types.
        #[arg(long)]
        slow: bool,
        #[arg(long)]
        json: bool,
    },
    /// Group pattern sets by their counting sequences.
    Classify {
        /// One pattern set per argument.
        #[arg(required = true)]
        patterns: Vec<String>,
        #[arg(long = "n", default_value_t = DEFAULT_CLASSIFY_N)]
        n_max: usize,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Io(String),
    Usage(String),
    NoScheme(Box<NoScheme>),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::NoScheme(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }
}

impl From<vinscheme::Error> for Failure {
    fn from(e: vinscheme::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<NoScheme> for Failure {
    fn from(e: NoScheme) -> Self {
        Failure::NoScheme(Box::new(e))
    }
}

type Outcome = Result<(), Failure>;

/// A scheme together with the symmetric image it was found for.
#[derive(Serialize, Deserialize)]
struct SchemeFile {
    variant: Variant,
    requested: PatternSet,
    #[serde(deserialize_with = "scheme_from_value")]
    scheme: Scheme,
}

fn scheme_from_value<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Scheme, D::Error> {
    let v = serde_json::Value::deserialize(d)?;
    Scheme::from_json(&v.to_string()).map_err(serde::de::Error::custom)
}

fn parse_set(s: &str) -> Result<PatternSet, Failure> {
    s.parse().map_err(|e: vinscheme::Error| Failure::Usage(e.to_string()))
}

fn read_scheme(path: &Path) -> Result<SchemeFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if value.get("scheme").is_some() {
        return serde_json::from_value(value).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())));
    }
    let scheme = Scheme::from_json(&text)?;
    Ok(SchemeFile {
        variant: Variant::Original,
        requested: scheme.patterns().clone(),
        scheme,
    })
}

fn obtain(
    patterns: Option<&str>,
    scheme: Option<&Path>,
    bounds: Bounds,
) -> Result<SchemeFile, Failure> {
    match (patterns, scheme) {
        (_, Some(path)) => read_scheme(path),
        (Some(p), None) => {
            let requested = parse_set(p)?;
            let (variant, scheme) = discover_with_reverse(&requested, bounds.params())?;
            Ok(SchemeFile {
                variant,
                requested,
                scheme,
            })
        }
        (None, None) => Err(Failure::Usage("give patterns or --scheme".into())),
    }
}

fn json_array<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn cmd_discover(patterns: &str, bounds: Bounds, try_reverse: bool, out: Option<&Path>, json: bool) -> Outcome {
    let requested = parse_set(patterns)?;
    let (variant, scheme) = if try_reverse {
        discover_with_reverse(&requested, bounds.params())?
    } else {
        (Variant::Original, discover(&requested, bounds.params())?)
    };
    let file = SchemeFile {
        variant,
        requested,
        scheme,
    };
    let doc = serde_json::to_string_pretty(&file).expect("scheme file serializes");
    if let Some(path) = out {
        fs::write(path, &doc).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    if json {
        println!("{doc}");
    } else {
        println!("patterns: {}", file.requested);
        println!("variant: {}", file.variant);
        println!("depth: {}", file.scheme.depth());
        println!("triples: {}", file.scheme.len());
        for t in file.scheme.triples() {
            println!("  {t}");
        }
    }
    Ok(())
}

fn cmd_enumerate(file: SchemeFile, n_max: usize, by_inversions: bool, json: bool) -> Outcome {
    if by_inversions {
        let rows = eval::inversion_triangle_as(&file.scheme, file.variant, n_max)?;
        if json {
            println!("{}", json_array(rows.iter().map(|r| json_array(r.coefficients()))));
        } else {
            for r in rows {
                let c: Vec<String> = r.coefficients().iter().map(|c| c.to_string()).collect();
                println!("{}", c.join(" "));
            }
        }
    } else {
        let seq = eval::sequence(&file.scheme, n_max)?;
        if json {
            println!("{}", json_array(&seq));
        } else {
            for c in seq {
                println!("{c}");
            }
        }
    }
    Ok(())
}

fn cmd_oracle_check(file: SchemeFile, n_max: usize, limit: usize, json: bool) -> Outcome {
    let oracle = Oracle::new(limit);
    let mut rows = Vec::new();
    let mut first_bad = None;
    for n in 1..=n_max {
        let expect = oracle.count(&file.requested, n)?;
        let got = eval::count(&file.scheme, n)?;
        let ok = got == expect.into();
        if !ok && first_bad.is_none() {
            first_bad = Some(n);
        }
        rows.push((n, got, expect, ok));
    }
    if json {
        let items = rows.iter().map(|(n, got, expect, ok)| {
            format!("{{\"n\":{n},\"scheme\":{got},\"oracle\":{expect},\"pass\":{ok}}}")
        });
        println!("{}", json_array(items));
    } else {
        for (n, got, expect, ok) in &rows {
            println!("n={n} scheme={got} oracle={expect} {}", if *ok { "pass" } else { "FAIL" });
        }
    }
    match first_bad {
        Some(n) => Err(Failure::Mismatch(format!("first divergence at n = {n}"))),
        None => Ok(()),
    }
}

fn parse_set_type(s: &str) -> Result<Vec<usize>, Failure> {
    s.trim_matches(|c| c == '{' || c == '}' || c == '(' || c == ')')
        .split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("bad set type `{s}`")))
        })
        .collect()
}

fn cmd_survey(length: Option<usize>, set_type: Option<&str>, bounds: Bounds, slow: bool, json: bool) -> Outcome {
    let report = match (length, set_type) {
        (Some(k), _) => survey::survey_patterns(k, bounds.params())?,
        (None, Some(t)) => survey::survey_sets(&parse_set_type(t)?, bounds.params(), slow)?,
        (None, None) => return Err(Failure::Usage("give --length or --set-type".into())),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{report}");
    }
    Ok(())
}

fn cmd_classify(patterns: &[String], n_max: usize, bounds: Bounds, json: bool) -> Outcome {
    let sets = patterns.iter().map(|p| parse_set(p)).collect::<Result<Vec<_>, _>>()?;
    let report = survey::classify(&sets, bounds.params(), n_max);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{report}");
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Discover {
            patterns,
            bounds,
            try_reverse,
            out,
            json,
        } => cmd_discover(&patterns, bounds, try_reverse, out.as_deref(), json),
        Command::Enumerate {
            patterns,
            n_max,
            n_flag,
            scheme,
            by_inversions,
            bounds,
            json,
        } => {
            let file = obtain(patterns.as_deref(), scheme.as_deref(), bounds)?;
            cmd_enumerate(file, n_max.or(n_flag).unwrap_or(10), by_inversions, json)
        }
        Command::OracleCheck {
            patterns,
            n_max,
            scheme,
            oracle_limit,
            bounds,
            json,
        } => {
            let file = obtain(patterns.as_deref(), scheme.as_deref(), bounds)?;
            cmd_oracle_check(file, n_max, oracle_limit, json)
        }
        Command::Survey {
            length,
            set_type,
            bounds,
            slow,
            json,
        } => cmd_survey(length, set_type.as_deref(), bounds, slow, json),
        Command::Classify {
            patterns,
            n_max,
            bounds,
            json,
        } => cmd_classify(&patterns, n_max, bounds, json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Io(m) | Failure::Usage(m) | Failure::Mismatch(m) => eprintln!("error: {m}"),
                Failure::NoScheme(e) => eprintln!("{e}"),
            }
            ExitCode::from(f.code())
        }
    }
}
