use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pebble_exchange::classify::{classify, pebble_shape, verify_girth_five, verify_product};
use pebble_exchange::flip::{realize_by_flips, replay_flips};
use pebble_exchange::format::{
    builtin_graph, parse_flip_certificate, parse_graph, parse_move_certificate, parse_permutation,
    write_flip_certificate, write_move_certificate, CertificateFile,
};
use pebble_exchange::perm::automorphisms;
use pebble_exchange::puzzle::peb_group_with_states;
use pebble_exchange::square::{
    build, compile_automorphism_to_square_moves, seq_a_with, Family, SynthOptions,
};
use pebble_exchange::verify::{examples_suite, flip_suite, square_sequence_suite};
use pebble_exchange::{Error, Graph, Permutation, PuzzleInstance, SearchOptions};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "pebx",
    version,
    about = "Pebble-exchange puzzles: search, synthesis and certificate replay"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Maximum number of configurations a search may visit.
    #[arg(long, global = true, default_value_t = pebble_exchange::search::DEFAULT_CAP)]
    cap: usize,
    /// Worker threads for searches and batch checks.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Where to write the certificate, for verbs that produce one.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Leave `elapsed_ms` out of the report so that reruns are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Automorphism group of a graph.
    Aut {
        #[arg(long)]
        graph: String,
    },
    /// Automorphisms reachable from the identity in Puz(G).
    Peb {
        #[arg(long)]
        graph: String,
    },
    /// Decide whether every configuration of Puz(board, pebbles) is reachable.
    Feasible {
        #[arg(long)]
        board: String,
        #[arg(long)]
        pebbles: String,
    },
    /// Shortest move sequence between two configurations, if any.
    Equivalent {
        #[arg(long)]
        board: String,
        #[arg(long)]
        pebbles: String,
        /// Permutation file or inline list such as `2,1,3`.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Reverse the pebbles on a squared path.
    ReverseSquare {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::A)]
        kind: Kind,
        /// Use a shortest searched sequence for the smallest sizes.
        #[arg(long)]
        bfs_base: bool,
        /// Permit sizes whose certificates run to millions of moves.
        #[arg(long)]
        allow_large: bool,
    },
    /// Realize automorphisms of a graph as products of path flips.
    Flips {
        #[arg(long)]
        graph: String,
        /// A single automorphism; all of them when omitted.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Realize an automorphism of G by moves on Puz(G^2).
    CompileSquare {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        sigma: String,
    },
    /// Replay a move certificate and print its final configuration.
    Replay {
        #[arg(long)]
        cert: String,
    },
    /// Replay a flip certificate and print its final configuration.
    ReplayFlips {
        #[arg(long)]
        cert: String,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Closed-form feasibility verdict from the shape of the pebble graph.
    Classify {
        #[arg(long)]
        board: String,
        #[arg(long)]
        pebbles: String,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Girth at least five: reachable set equals the matching configurations.
    #[command(name = "prop2")]
    GirthFive {
        #[arg(long)]
        graph: String,
    },
    /// The exchange group of a product is the product of the groups.
    Product {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
    /// Closed-form predicates against search on every small connected board.
    Examples {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Path-square reversal sequences, with search confirmation for small n.
    #[command(name = "lemma-square")]
    SquareSequences {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 7)]
        bfs_max_n: usize,
    },
    /// Flip realizations of every automorphism of every small connected graph.
    #[command(name = "lemma-flips")]
    FlipRealizations {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long, default_value_t = 6)]
        oracle_max_n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    A,
    B,
    C,
}

/// What a verb produced, and whether the answer was negative.
enum Outcome {
    Report(Value, bool),
    Text(String, bool),
}

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.jobs.max(1))
        .build();
    let result = match pool {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(anyhow::Error::new(e)),
    };
    match result {
        Ok(Outcome::Report(mut v, negative)) => {
            if !cli.common.no_timing {
                v["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("report serializes")
            );
            exit(negative)
        }
        Ok(Outcome::Text(s, negative)) => {
            print!("{s}");
            exit(negative)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit(negative: bool) -> ExitCode {
    if negative {
        ExitCode::from(EXIT_NEGATIVE)
    } else {
        ExitCode::SUCCESS
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. } | Error::ResourceLimit(_)) => EXIT_CAP,
        Some(
            Error::IllegalMove { .. }
            | Error::InvalidBoardPath(_)
            | Error::PebbleImageNotPath(_)
            | Error::Internal { .. },
        ) => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

fn search_opts(c: &Common) -> SearchOptions {
    SearchOptions {
        cap: c.cap,
        jobs: c.jobs.max(1),
    }
}

/// A built-in name, a graph file, or `sq:` followed by either.
fn load_graph(spec: &str) -> anyhow::Result<Graph> {
    if let Some(inner) = spec.strip_prefix("sq:") {
        return Ok(load_graph(inner)?.square());
    }
    if let Some(g) = builtin_graph(spec) {
        return g.with_context(|| format!("graph `{spec}`"));
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading graph file `{spec}`"))?;
    parse_graph(&text).with_context(|| format!("graph file `{spec}`"))
}

/// The form of a graph argument stored in certificate descriptors: built-in
/// names verbatim, files as absolute paths so replay works from anywhere.
fn descriptor_spec(spec: &str) -> anyhow::Result<String> {
    if let Some(inner) = spec.strip_prefix("sq:") {
        return Ok(format!("sq:{}", descriptor_spec(inner)?));
    }
    let s = if builtin_graph(spec).is_some() {
        spec.to_string()
    } else {
        let p = fs::canonicalize(spec).with_context(|| format!("resolving `{spec}`"))?;
        p.to_string_lossy().into_owned()
    };
    if s.chars().any(char::is_whitespace) {
        bail!(Error::InvalidParameter(format!(
            "graph path `{s}` contains whitespace and cannot go in a certificate"
        )));
    }
    Ok(s)
}

/// A permutation file, or an inline list separated by commas or spaces.
fn load_permutation(arg: &str) -> anyhow::Result<Permutation> {
    if Path::new(arg).is_file() {
        let text = fs::read_to_string(arg).with_context(|| format!("reading `{arg}`"))?;
        return parse_permutation(&text).with_context(|| format!("permutation file `{arg}`"));
    }
    parse_permutation(&arg.replace(',', " ")).with_context(|| format!("permutation `{arg}`"))
}

fn one_based(p: &Permutation) -> Vec<usize> {
    p.to_one_based()
}

fn group_json(elements: &[Permutation]) -> Value {
    json!(elements.iter().map(|p| p.to_string()).collect::<Vec<_>>())
}

fn write_out(out: Option<&String>, text: &str) -> anyhow::Result<Option<String>> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing `{path}`"))?;
            Ok(Some(path.clone()))
        }
        None => Ok(None),
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let c = &cli.common;
    let opts = search_opts(c);
    match &cli.command {
        Command::Aut { graph } => {
            let g = load_graph(graph)?;
            let aut = automorphisms(&g)?;
            Ok(Outcome::Report(
                json!({
                    "command": "aut",
                    "instance": { "graph": graph, "n": g.n(), "edges": g.edge_count() },
                    "aut_order": aut.order,
                    "elements": group_json(&aut.elements),
                }),
                false,
            ))
        }
        Command::Peb { graph } => {
            let g = load_graph(graph)?;
            let (peb, states) = peb_group_with_states(&g, opts)?;
            Ok(Outcome::Report(
                json!({
                    "command": "peb",
                    "instance": { "graph": graph, "n": g.n(), "edges": g.edge_count() },
                    "peb_order": peb.order,
                    "bfs_states": states,
                    "elements": group_json(&peb.elements),
                }),
                false,
            ))
        }
        Command::Feasible { board, pebbles } => {
            let (gb, gp) = (load_graph(board)?, load_graph(pebbles)?);
            let puz = PuzzleInstance::new(gb.clone(), gp.clone())?;
            let (feasible, states) = puz.feasibility_count(opts)?;
            let closed = classify(&gb, &gp)?;
            let rule = match closed.feasible {
                Some(_) => serde_json::to_value(closed.rule)?,
                None => json!("search"),
            };
            Ok(Outcome::Report(
                json!({
                    "command": "feasible",
                    "instance": { "board": board, "pebbles": pebbles, "n": gb.n() },
                    "verdict": feasible,
                    "rule": rule,
                    "witness": serde_json::to_value(&closed)?.get("witness").cloned(),
                    "bfs_states": states,
                    "pebble_shape": pebble_shape(&gp),
                    "closed_form": closed,
                    "consistent": closed.feasible.is_none_or(|f| f == feasible),
                }),
                !feasible,
            ))
        }
        Command::Equivalent {
            board,
            pebbles,
            from,
            to,
        } => {
            let puz = PuzzleInstance::new(load_graph(board)?, load_graph(pebbles)?)?;
            let (f, g) = (load_permutation(from)?, load_permutation(to)?);
            let moves = puz.shortest_moves(&f, &g, c.cap)?;
            let mut certificate = None;
            if let Some(m) = &moves {
                let file = CertificateFile {
                    descriptor: vec![
                        ("board".into(), descriptor_spec(board)?),
                        ("pebbles".into(), descriptor_spec(pebbles)?),
                    ],
                    start: f.clone(),
                    end: g.clone(),
                    body: m.clone(),
                };
                certificate = write_out(c.out.as_ref(), &write_move_certificate(&file))?;
            }
            Ok(Outcome::Report(
                json!({
                    "command": "equivalent",
                    "instance": { "board": board, "pebbles": pebbles, "from": one_based(&f), "to": one_based(&g) },
                    "verdict": moves.is_some(),
                    "moves": moves.as_ref().map(|m| m.len()),
                    "certificate": certificate,
                }),
                moves.is_none(),
            ))
        }
        Command::ReverseSquare {
            n,
            kind,
            bfs_base,
            allow_large,
        } => {
            let so = SynthOptions {
                allow_large: *allow_large,
                bfs_base: *bfs_base,
            };
            let (cert, board, pebbles) = match kind {
                Kind::A => (seq_a_with(*n, so)?, format!("sq:p{n}"), format!("sq:p{n}")),
                Kind::B => (
                    build(Family::B, *n, so)?,
                    format!("sqminus{n}"),
                    format!("sq:p{n}"),
                ),
                Kind::C => (
                    build(Family::C, *n, so)?,
                    format!("sq:p{n}"),
                    format!("sqminus{n}"),
                ),
            };
            cert.verify()?;
            let file = CertificateFile {
                descriptor: vec![
                    ("board".into(), board.clone()),
                    ("pebbles".into(), pebbles.clone()),
                ],
                start: cert.start.clone(),
                end: cert.end.clone(),
                body: cert.moves.clone(),
            };
            let certificate = write_out(c.out.as_ref(), &write_move_certificate(&file))?;
            Ok(Outcome::Report(
                json!({
                    "command": "reverse-square",
                    "instance": { "board": board, "pebbles": pebbles, "n": n },
                    "verdict": true,
                    "moves": cert.moves.len(),
                    "provenance": cert.provenance,
                    "end": one_based(&cert.end),
                    "certificate": certificate,
                }),
                false,
            ))
        }
        Command::Flips { graph, sigma } => {
            let g = load_graph(graph)?;
            let id = Permutation::identity(g.n());
            match sigma {
                Some(s) => {
                    let sigma = load_permutation(s)?;
                    let seq = realize_by_flips(&g, &sigma)?;
                    replay_flips(&g, &id, &seq)?;
                    let file = CertificateFile {
                        descriptor: vec![("graph".into(), descriptor_spec(graph)?)],
                        start: id,
                        end: sigma.clone(),
                        body: seq.clone(),
                    };
                    let certificate = write_out(c.out.as_ref(), &write_flip_certificate(&file))?;
                    Ok(Outcome::Report(
                        json!({
                            "command": "flips",
                            "instance": { "graph": graph, "sigma": one_based(&sigma) },
                            "verdict": true,
                            "flips": seq.len(),
                            "path_vertices": seq.total_path_vertices(),
                            "certificate": certificate,
                        }),
                        false,
                    ))
                }
                None => {
                    if c.out.is_some() {
                        bail!(Error::InvalidParameter(
                            "--out needs --sigma: one certificate per automorphism".into()
                        ));
                    }
                    let aut = automorphisms(&g)?;
                    let mut rows = Vec::new();
                    for sigma in &aut.elements {
                        let seq = realize_by_flips(&g, sigma)?;
                        if replay_flips(&g, &id, &seq)? != *sigma {
                            bail!(Error::Internal {
                                step: "flips".into(),
                                detail: format!("replay misses {sigma}")
                            });
                        }
                        rows.push(json!({ "sigma": sigma.to_string(), "flips": seq.len() }));
                    }
                    Ok(Outcome::Report(
                        json!({
                            "command": "flips",
                            "instance": { "graph": graph, "n": g.n() },
                            "verdict": true,
                            "aut_order": aut.order,
                            "realized": rows,
                        }),
                        false,
                    ))
                }
            }
        }
        Command::CompileSquare { graph, sigma } => {
            let g = load_graph(graph)?;
            let sigma = load_permutation(sigma)?;
            let cert = compile_automorphism_to_square_moves(&g, &sigma)?;
            cert.verify()?;
            let spec = format!("sq:{}", descriptor_spec(graph)?);
            let file = CertificateFile {
                descriptor: vec![("board".into(), spec.clone()), ("pebbles".into(), spec)],
                start: cert.start.clone(),
                end: cert.end.clone(),
                body: cert.moves.clone(),
            };
            let certificate = write_out(c.out.as_ref(), &write_move_certificate(&file))?;
            Ok(Outcome::Report(
                json!({
                    "command": "compile-square",
                    "instance": { "graph": graph, "sigma": one_based(&sigma) },
                    "verdict": true,
                    "moves": cert.moves.len(),
                    "certificate": certificate,
                }),
                false,
            ))
        }
        Command::Replay { cert } => {
            let text = fs::read_to_string(cert).with_context(|| format!("reading `{cert}`"))?;
            let file =
                parse_move_certificate(&text).with_context(|| format!("certificate `{cert}`"))?;
            let board = file.get("board").context("descriptor lacks board=")?;
            let pebbles = file.get("pebbles").context("descriptor lacks pebbles=")?;
            let puz = PuzzleInstance::new(load_graph(board)?, load_graph(pebbles)?)?;
            let end = puz.replay(&file.start, &file.body)?;
            replayed(end, &file.end)
        }
        Command::ReplayFlips { cert } => {
            let text = fs::read_to_string(cert).with_context(|| format!("reading `{cert}`"))?;
            let file =
                parse_flip_certificate(&text).with_context(|| format!("certificate `{cert}`"))?;
            let g = load_graph(file.get("graph").context("descriptor lacks graph=")?)?;
            let end = replay_flips(&g, &file.start, &file.body)?;
            replayed(end, &file.end)
        }
        Command::Verify { suite } => verify(suite, opts),
        Command::Classify { board, pebbles } => {
            let (gb, gp) = (load_graph(board)?, load_graph(pebbles)?);
            let v = classify(&gb, &gp)?;
            Ok(Outcome::Report(
                json!({
                    "command": "classify",
                    "instance": { "board": board, "pebbles": pebbles, "n": gb.n() },
                    "pebble_shape": pebble_shape(&gp),
                    "verdict": v.feasible,
                    "rule": v.rule,
                    "witness": serde_json::to_value(&v)?.get("witness").cloned(),
                    "note": v.note,
                }),
                v.feasible == Some(false),
            ))
        }
    }
}

/// Prints the final configuration; a mismatch with the declared end rejects
/// the certificate.
fn replayed(end: Permutation, declared: &Permutation) -> anyhow::Result<Outcome> {
    if &end != declared {
        eprintln!("certificate declares {declared} but replay ends at {end}");
        return Ok(Outcome::Text(format!("{end}\n"), true));
    }
    Ok(Outcome::Text(format!("{end}\n"), false))
}

fn verify(suite: &Suite, opts: SearchOptions) -> anyhow::Result<Outcome> {
    let (name, report) = match suite {
        Suite::GirthFive { graph } => (
            "prop2",
            serde_json::to_value(verify_girth_five(&load_graph(graph)?, opts)?)?,
        ),
        Suite::Product { g1, g2 } => (
            "product",
            serde_json::to_value(verify_product(&load_graph(g1)?, &load_graph(g2)?, opts)?)?,
        ),
        Suite::Examples { max_n } => (
            "examples",
            serde_json::to_value(examples_suite(*max_n, opts))?,
        ),
        Suite::SquareSequences { max_n, bfs_max_n } => (
            "lemma-square",
            serde_json::to_value(square_sequence_suite(*max_n, *bfs_max_n, opts)?)?,
        ),
        Suite::FlipRealizations {
            max_n,
            oracle_max_n,
        } => (
            "lemma-flips",
            serde_json::to_value(flip_suite(*max_n, *oracle_max_n, opts))?,
        ),
    };
    let passed = report["passed"].as_bool().unwrap_or(false);
    Ok(Outcome::Report(
        json!({ "command": "verify", "suite": name, "verdict": passed, "report": report }),
        !passed,
    ))
}
