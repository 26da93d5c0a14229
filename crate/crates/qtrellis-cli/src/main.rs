use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qtrellis::code::{builtin, builtin_names, parse_code_file, CodeError, Split, StabilizerCode, TrellisProfile};
use qtrellis::decode::{
    classify_residual, CssDecoder, DecodeError, Decoder, SyndromeDecoder, ViterbiOptions, WeightTable,
};
use qtrellis::pauli::{format_pauli, parse_pauli};
use qtrellis::sim::{
    exact_failure_counts, fit_threshold, parse_kind, run_montecarlo, ChannelKind, ChannelSpec, Dataset, DecoderMode,
    McConfig, SimError, TrellisSet,
};
use qtrellis::trellis::{census, deserialize, serialize, to_json, Trellis, TrellisError, DEFAULT_EDGE_CAP};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qtrellis", version, about = "Minimal syndrome trellises and Viterbi decoding for stabilizer codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the per-depth structure of a code's minimal trellis.
    Profile {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value = "full")]
        split: Split,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build a trellis and write it to a file.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value = "full")]
        split: Split,
        #[arg(long)]
        out: PathBuf,
        /// Discard vertex labels before writing.
        #[arg(long)]
        drop_labels: bool,
        /// Write JSON instead of the binary format.
        #[arg(long)]
        json: bool,
        /// Refuse to build trellises with more edges than this.
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        cap: u128,
    },
    /// Classify every section of a stored trellis into bipartite blocks.
    Census {
        #[arg(long)]
        trellis: PathBuf,
    },
    /// Decode one syndrome.
    Decode {
        /// A full trellis, or an X-part and a Z-part trellis for split decoding.
        #[arg(long, num_args = 1..=2, required = true)]
        trellis: Vec<PathBuf>,
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated syndrome values, one per stabilizer.
        #[arg(long)]
        syndrome: String,
        /// `depolarizing:P`, `dephasing-z:P`, `dephasing-x:P` or `table:FILE`.
        #[arg(long)]
        channel: String,
        /// The actual error, to classify the outcome against.
        #[arg(long)]
        error: Option<String>,
    },
    /// Monte Carlo logical error rates over a grid of physical rates.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        /// Channel kind: depolarizing, dephasing-z or dephasing-x.
        #[arg(long)]
        channel: String,
        #[arg(long)]
        p_min: f64,
        #[arg(long)]
        p_max: f64,
        #[arg(long)]
        p_step: f64,
        #[arg(long, default_value_t = 30_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value = "full")]
        decoder: DecoderMode,
        #[arg(long)]
        out: PathBuf,
        /// Also print exact rates for codes small enough to enumerate.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        cap: u128,
    },
    /// Fit the finite-size threshold ansatz to a results file.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 9)]
        dmin: usize,
        /// Fit the conditional instead of the unconditional rate.
        #[arg(long)]
        conditional: bool,
    },
}

#[derive(Args)]
struct CodeArgs {
    /// Built-in code name or path to a code file.
    #[arg(long)]
    code: String,
    /// Distance, for code families. Repeat or separate by commas where several are accepted.
    #[arg(long, value_delimiter = ',')]
    distance: Vec<usize>,
    /// File listing a qudit order (1-based, whitespace separated).
    #[arg(long)]
    order: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Kind {
    Validation,
    Cap,
    Io,
}

fn kind_of(err: &anyhow::Error) -> Kind {
    for cause in err.chain() {
        if cause.is::<std::io::Error>() || cause.is::<csv::Error>() || cause.is::<serde_json::Error>() {
            return Kind::Io;
        }
        if let Some(e) = cause.downcast_ref::<TrellisError>() {
            match e {
                TrellisError::TooLarge { .. } => return Kind::Cap,
                TrellisError::Format(_) => return Kind::Io,
                _ => {}
            }
        }
        if let Some(e) = cause.downcast_ref::<SimError>() {
            match e {
                SimError::Cap(_) => return Kind::Cap,
                SimError::Trellis(TrellisError::TooLarge { .. }) => return Kind::Cap,
                _ => {}
            }
        }
        if let Some(CodeError::Parse { .. }) = cause.downcast_ref::<CodeError>() {
            return Kind::Io;
        }
    }
    Kind::Validation
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(match kind_of(&e) {
                Kind::Validation => 2,
                Kind::Cap => 3,
                Kind::Io => 4,
            })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Command::Profile { code, split, format } => {
            let c = load_code(&code, single_distance(&code)?)?;
            print_profile(&c.profile(split)?, format)
        }
        Command::Build { code, split, out, drop_labels, json, cap } => {
            let c = load_code(&code, single_distance(&code)?)?;
            let mut t = Trellis::for_code(&c, split, cap)?;
            if drop_labels {
                t.drop_labels();
            }
            if json {
                std::fs::write(&out, serde_json::to_vec(&to_json(&t))?).with_context(|| format!("writing {}", out.display()))?;
            } else {
                std::fs::write(&out, serialize(&t)).with_context(|| format!("writing {}", out.display()))?;
            }
            println!("{} vertices, {} edges written to {}", t.total_vertices(), t.total_edges(), out.display());
            Ok(())
        }
        Command::Census { trellis } => {
            let t = read_trellis(&trellis)?;
            let cs = census(&t)?;
            let counts: Vec<_> = cs
                .counts
                .iter()
                .map(|(b, k)| serde_json::json!({"d_past": b.d_past, "d_future": b.d_future, "parallel": b.parallel, "blocks": k}))
                .collect();
            let out = serde_json::json!({
                "total_vertices": cs.total_vertices,
                "total_edges": cs.total_edges,
                "configurations": counts,
                "mergers": cs.mergers,
                "expansions": cs.expansions,
                "edges_from_blocks": cs.edges_from_blocks,
                "vertices_from_blocks": cs.vertices_from_blocks,
                "identities_hold": cs.identities_hold(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            if !cs.identities_hold() {
                bail!("census identities do not hold");
            }
            Ok(())
        }
        Command::Decode { trellis, code, syndrome, channel, error } => {
            let c = load_code(&code, single_distance(&code)?)?;
            let trellises = trellis.iter().map(|p| read_trellis(p)).collect::<Result<Vec<_>>>()?;
            let weights = channel_weights(&channel, &c)?;
            let s = parse_syndrome(&syndrome, c.p())?;
            let opts = ViterbiOptions::default();
            let dec: Box<dyn SyndromeDecoder> = match trellises.as_slice() {
                [t] if t.split() == Split::Full => Box::new(Decoder::new(&c, t, &weights, opts)?),
                [a, b] => {
                    let (x, z) = if a.split() == Split::X { (a, b) } else { (b, a) };
                    Box::new(CssDecoder::new(&c, x, z, &weights, opts)?)
                }
                _ => bail!(DecodeError::Mismatch("give one full trellis or an X-part and a Z-part trellis".into())),
            };
            let mut out = dec.decode(&s)?;
            if let Some(e) = error {
                let e = parse_pauli(c.field(), &e)?;
                if c.syndrome(&e)? != s {
                    bail!("the given error does not have the given syndrome");
                }
                let (class, flags) = classify_residual(&c, &e, &out.correction)?;
                out.classification = class;
                out.logical_flags = flags;
            }
            let json = serde_json::json!({
                "correction": format_pauli(&out.correction),
                "weight": out.path_weight,
                "classification": out.classification,
                "logical_flags": out.logical_flags,
            });
            println!("{}", serde_json::to_string_pretty(&json)?);
            Ok(())
        }
        Command::Simulate { code, channel, p_min, p_max, p_step, samples, seed, workers, decoder, out, exact, cap } => {
            let kind = parse_kind(&channel)?;
            if !(p_step > 0.0) || p_max < p_min {
                bail!("need p_step > 0 and p_max >= p_min");
            }
            let steps = ((p_max - p_min) / p_step + 1e-9).floor() as usize;
            let grid: Vec<f64> = (0..=steps).map(|k| p_min + p_step * k as f64).collect();
            let distances: Vec<Option<usize>> =
                if code.distance.is_empty() { vec![None] } else { code.distance.iter().map(|&d| Some(d)).collect() };
            let mut w = csv::Writer::from_path(&out).with_context(|| format!("creating {}", out.display()))?;
            let cfg = McConfig { samples, seed, workers, ..McConfig::default() };
            for d in distances {
                let c = load_code(&code, d)?;
                let set = TrellisSet::build(c, decoder, cap)?;
                let points = run_montecarlo(&set, &kind, &grid, &cfg)?;
                let counts = match exact.then(|| exact_counts(&set, &kind, grid[0])).transpose() {
                    Ok(c) => c,
                    Err(e) if matches!(e.downcast_ref::<SimError>(), Some(SimError::Cap(_))) => {
                        eprintln!("note: d={} skipped for exact rates: {e:#}", d.unwrap_or(0));
                        None
                    }
                    Err(e) => return Err(e),
                };
                for pt in &points {
                    w.serialize(Row {
                        code: code.code.clone(),
                        distance: d.unwrap_or(0),
                        decoder: decoder.name().into(),
                        channel: ChannelSpec::new(kind.clone(), pt.p_phys)?.name().into(),
                        p_phys: pt.p_phys,
                        samples: pt.samples,
                        failures: pt.failures,
                        rate_cond: pt.rate_cond,
                        rate_uncond: pt.rate_uncond,
                        ci_lo: pt.ci_lo,
                        ci_hi: pt.ci_hi,
                        seed,
                    })?;
                    if let Some(c) = &counts {
                        println!("d={} p={:.5} monte_carlo={:.6e} exact={:.6e}", d.unwrap_or(0), pt.p_phys, pt.rate_uncond, c.rate(pt.p_phys));
                    }
                }
            }
            w.flush()?;
            Ok(())
        }
        Command::Fit { input, dmin, conditional } => {
            let mut r = csv::Reader::from_path(&input).with_context(|| format!("reading {}", input.display()))?;
            let mut by_d: std::collections::BTreeMap<usize, Vec<(f64, f64)>> = Default::default();
            for row in r.deserialize() {
                let row: Row = row?;
                by_d.entry(row.distance).or_default().push((row.p_phys, if conditional { row.rate_cond } else { row.rate_uncond }));
            }
            let data: Vec<Dataset> = by_d.into_iter().map(|(distance, points)| Dataset { distance, points }).collect();
            let fit = fit_threshold(&data, dmin)?;
            println!("{}", serde_json::to_string_pretty(&fit)?);
            Ok(())
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Row {
    code: String,
    distance: usize,
    decoder: String,
    channel: String,
    p_phys: f64,
    samples: u64,
    failures: u64,
    rate_cond: f64,
    rate_uncond: f64,
    ci_lo: f64,
    ci_hi: f64,
    seed: u64,
}

fn exact_counts(set: &TrellisSet, kind: &ChannelKind, p: f64) -> Result<qtrellis::sim::ExactCounts> {
    let ch = ChannelSpec::new(kind.clone(), p.max(1e-3))?;
    let w = qtrellis::decode::weights_from_channel(&ch, set.code.n(), set.code.p(), Split::Full)?;
    let dec = set.decoder(&w)?;
    Ok(exact_failure_counts(dec.as_ref(), kind)?)
}

fn single_distance(code: &CodeArgs) -> Result<Option<usize>> {
    match code.distance.as_slice() {
        [] => Ok(None),
        [d] => Ok(Some(*d)),
        _ => bail!("this command takes a single distance"),
    }
}

fn load_code(args: &CodeArgs, distance: Option<usize>) -> Result<StabilizerCode> {
    let known = builtin_names().iter().any(|n| n.trim_end_matches("(d)") == args.code);
    let code = if known {
        builtin(&args.code, distance)?
    } else {
        let path = Path::new(&args.code);
        if !path.exists() {
            bail!(CodeError::UnknownCode(args.code.clone()));
        }
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        parse_code_file(&text)?
    };
    match &args.order {
        None => Ok(code),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let order = text
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| CodeError::Parse { line: 0, msg: format!("bad index {t:?}") }))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(code.permuted(&order)?)
        }
    }
}

fn read_trellis(path: &Path) -> Result<Trellis> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(deserialize(&bytes).with_context(|| format!("parsing {}", path.display()))?)
}

fn parse_syndrome(text: &str, p: u32) -> Result<Vec<u8>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v: u32 = t.trim().parse().map_err(|_| anyhow!("bad syndrome entry {t:?}"))?;
            if v >= p {
                bail!("syndrome entry {v} is not below p = {p}");
            }
            Ok(v as u8)
        })
        .collect()
}

fn channel_weights(spec: &str, code: &StabilizerCode) -> Result<WeightTable> {
    let channel = match spec.strip_prefix("table:") {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            ChannelSpec::table(WeightTable::parse(&text, code.p(), code.n())?)
        }
        None => spec.parse::<ChannelSpec>()?,
    };
    Ok(qtrellis::decode::weights_from_channel(&channel, code.n(), code.p(), Split::Full)?)
}

fn print_profile(prof: &TrellisProfile, format: Format) -> Result<()> {
    let n = prof.n;
    let rows: Vec<[String; 8]> = (0..=n)
        .map(|i| {
            let opt = |v: Option<u128>| v.map_or("-".to_string(), |x| x.to_string());
            let check = |v: &Option<Vec<usize>>| v.as_ref().map_or("-".to_string(), |x| x[i].to_string());
            [
                i.to_string(),
                prof.dim_past[i].to_string(),
                prof.dim_future[i].to_string(),
                format!("{}/{}", check(&prof.check_past), check(&prof.check_future)),
                prof.v_count(i).to_string(),
                if i == 0 { "-".into() } else { prof.e_count(i).to_string() },
                opt(prof.deg_in(i)),
                opt(prof.deg_out(i)),
            ]
        })
        .collect();
    let header = ["depth", "past", "future", "checks_past/future", "vertices", "edges", "deg_in", "deg_out"];
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(prof)?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(header)?;
            for r in &rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        Format::Text => {
            println!("{}", header.join("\t"));
            for r in &rows {
                println!("{}", r.join("\t"));
            }
            println!("total vertices {}, total edges {}", prof.total_vertices(), prof.total_edges());
        }
    }
    Ok(())
}
