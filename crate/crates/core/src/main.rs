use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use semshift::freq::DeviationMode;
use semshift::lexicon::{Priority, SentimentClass};
use semshift::report::config::{ConceptMapConfig, LexiconConfig, SynthConfig};
use semshift::report::{self, CommandError, RunConfig};
use semshift::synth::ChannelParams;

#[derive(Parser)]
#[command(name = "semshift", version, about = "Sentiment and semantic-field shift analytics for translated corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check lexicons, concept map, reference tables and manifest files.
    Validate(ConfigArgs),
    /// Write the CSV/JSON report bundle.
    Analyze(ConfigArgs),
    /// Generate a synthetic source corpus and channel translations.
    Synth(SynthArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON run configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Lexicon file for a language, as LANG=PATH; repeatable.
    #[arg(long = "lexicon", value_name = "LANG=PATH", value_parser = lang_path)]
    lexicons: Vec<(String, PathBuf)>,
    /// Mark a language's lexicon as translator-attested; repeatable.
    #[arg(long = "attested", value_name = "LANG")]
    attested: Vec<String>,
    #[arg(long)]
    concept_map: Option<PathBuf>,
    #[arg(long, requires = "concept_map")]
    source_language: Option<String>,
    #[arg(long, requires = "concept_map")]
    target_language: Option<String>,
    /// Reference frequency table for a language, as LANG=PATH; repeatable.
    #[arg(long = "freq", value_name = "LANG=PATH", value_parser = lang_path)]
    frequency_tables: Vec<(String, PathBuf)>,
    /// Conflict priority, highest first, e.g. epistemic,negative,positive.
    #[arg(long, value_delimiter = ',')]
    priority: Option<Vec<SentimentClass>>,
    /// Grouping factors, comma separated.
    #[arg(long, value_delimiter = ',')]
    factors: Option<Vec<String>>,
    #[arg(long, value_parser = unit_interval)]
    alpha: Option<f64>,
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long, value_enum)]
    deviation_mode: Option<ModeArg>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    base: ConfigArgs,
    /// Run a single channel of this kind instead of the configured ones.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Narrow/widen factor for --kind; defaults to 0.4 (machine) or 1.3 (human).
    #[arg(long, requires = "kind", value_parser = positive)]
    factor: Option<f64>,
    #[arg(long, requires = "kind", value_parser = unit_closed)]
    pull: Option<f64>,
    #[arg(long, requires = "kind", value_parser = positive)]
    inflation: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    words: Option<usize>,
    #[arg(long, value_parser = unit_closed)]
    density: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Difference,
    Ratio,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Machine,
    Human,
}

fn lang_path(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((lang, path)) if !lang.is_empty() && !path.is_empty() => {
            Ok((lang.to_string(), PathBuf::from(path)))
        }
        _ => Err(format!("expected LANG=PATH, got {s:?}")),
    }
}

fn number(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| e.to_string())
}

fn positive(s: &str) -> Result<f64, String> {
    let x = number(s)?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let x = number(s)?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(format!("must lie in (0, 1), got {s}"))
    }
}

fn unit_closed(s: &str) -> Result<f64, String> {
    let x = number(s)?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("must lie in [0, 1], got {s}"))
    }
}

/// Flag paths are relative to the working directory, config paths to the config file.
fn cwd_path(path: PathBuf) -> PathBuf {
    std::path::absolute(&path).unwrap_or(path)
}

fn load_config(args: ConfigArgs) -> Result<RunConfig, CommandError> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path).map_err(CommandError::Config)?,
        None => RunConfig::default(),
    };
    if let Some(p) = args.manifest {
        config.manifest = Some(cwd_path(p));
    }
    let mut fresh: Vec<String> = Vec::new();
    for (lang, path) in args.lexicons {
        // Lexicon flags replace the configured list for that language.
        if !fresh.contains(&lang) {
            config.lexicons.insert(
                lang.clone(),
                LexiconConfig {
                    paths: Vec::new(),
                    attested: false,
                },
            );
            fresh.push(lang.clone());
        }
        config
            .lexicons
            .get_mut(&lang)
            .expect("inserted above")
            .paths
            .push(cwd_path(path));
    }
    for lang in args.attested {
        match config.lexicons.get_mut(&lang) {
            Some(entry) => entry.attested = true,
            None => {
                return Err(CommandError::Config(semshift::Error::InvalidParam(format!(
                    "--attested {lang}: no lexicon configured for {lang}"
                ))))
            }
        }
    }
    if let Some(path) = args.concept_map {
        let previous = config.concept_map.take();
        let language = |flag: Option<String>, old: Option<String>, name: &str| {
            flag.or(old).ok_or_else(|| {
                CommandError::Config(semshift::Error::InvalidParam(format!(
                    "--concept-map needs --{name}"
                )))
            })
        };
        config.concept_map = Some(ConceptMapConfig {
            path: cwd_path(path),
            source_language: language(
                args.source_language,
                previous.as_ref().map(|c| c.source_language.clone()),
                "source-language",
            )?,
            target_language: language(
                args.target_language,
                previous.map(|c| c.target_language),
                "target-language",
            )?,
        });
    }
    for (lang, path) in args.frequency_tables {
        config.frequency_tables.insert(lang, cwd_path(path));
    }
    if let Some(order) = args.priority {
        config.priority = Priority::new(&order).map_err(CommandError::Config)?;
    }
    if let Some(factors) = args.factors {
        config.factors = factors;
    }
    if let Some(alpha) = args.alpha {
        config.alpha = alpha;
    }
    if let Some(k) = args.top_k {
        config.top_k = k;
    }
    if let Some(mode) = args.deviation_mode {
        config.deviation_mode = match mode {
            ModeArg::Difference => DeviationMode::Difference,
            ModeArg::Ratio => DeviationMode::Ratio,
        };
    }
    if let Some(out) = args.output {
        config.output_dir = cwd_path(out);
    }
    Ok(config)
}

fn synth_config(args: SynthArgs) -> Result<RunConfig, CommandError> {
    let mut config = load_config(args.base)?;
    let mut synth: SynthConfig = config.synth_or_default();
    if let Some(seed) = args.seed {
        synth.seed = seed;
        for c in &mut synth.channels {
            c.seed = seed;
        }
    }
    if let Some(words) = args.words {
        synth.words = words;
    }
    if let Some(density) = args.density {
        synth.density = density;
    }
    if let Some(kind) = args.kind {
        let mut params = match kind {
            KindArg::Machine => ChannelParams::machine(synth.seed),
            KindArg::Human => ChannelParams::human(synth.seed),
        };
        if let Some(f) = args.factor {
            params.narrow_widen_factor = f;
        }
        if let Some(p) = args.pull {
            params.norm_pull = p;
        }
        if let Some(i) = args.inflation {
            params.length_inflation = i;
        }
        synth.channels = vec![params];
    }
    config.synth = Some(synth);
    Ok(config)
}

fn run(cli: Cli) -> Result<(), CommandError> {
    match cli.command {
        Command::Validate(args) => {
            let config = load_config(args)?;
            let (report, _) = report::check(&config);
            if !report.is_clean() {
                return Err(CommandError::Invalid(report));
            }
            println!("{report}");
            Ok(())
        }
        Command::Analyze(args) => {
            let config = load_config(args)?;
            let outcome = report::analyze(&config)?;
            println!(
                "wrote {} files to {}",
                outcome.files.len(),
                outcome.output_dir.display()
            );
            Ok(())
        }
        Command::Synth(args) => {
            let config = synth_config(args)?;
            let outcome = report::synth(&config)?;
            let source_words = outcome.texts[0].words;
            for t in &outcome.texts {
                println!(
                    "{}: {} words (x{:.4} of source)",
                    t.path.display(),
                    t.words,
                    t.words as f64 / source_words as f64
                );
            }
            println!(
                "wrote {} files to {}",
                outcome.files.len(),
                outcome.output_dir.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CommandError::Invalid(report) => eprintln!("{report}"),
                CommandError::Config(e) | CommandError::Analysis(e) => {
                    eprintln!("error: {e}");
                    let mut source = std::error::Error::source(e);
                    while let Some(cause) = source {
                        eprintln!("  caused by: {cause}");
                        source = cause.source();
                    }
                }
            }
            ExitCode::from(err.exit_code())
        }
    }
}
