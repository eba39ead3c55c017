use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use thetakit::graph::{enumerate_bipartite, enumerate_graphs, enumerate_graphs_up_to_isomorphism};
use thetakit::linalg::{binomial_basis_coeffs, fermat_basis_coeffs, integer_binomial_basis_coeffs};
use thetakit::minrank::{bipartite_minrank_gfp, minrank_gfp, Budget, MinRankResult};
use thetakit::sets::{
    t_inclusion_matrix, t_intersection_matrix, witness_matrix_finite, witness_matrix_modular,
    WitnessVariant,
};
use thetakit::theta::{
    default_l_max, theta_bipartite_exact_with, theta_exact_with, theta_uniform_exact_with,
    uniform_l_max, SolveOptions, ThetaResult,
};
use thetakit::verify::{
    build_corpus, parse_corpus, run_corpus, to_json, write_csv, write_repro_bundle, CheckConfig,
    CorpusSpec, Params, TheoremId, Verdict,
};
use thetakit::{BipartiteGraph, Error, Graph, LSpec, SetFamily};

const EXIT_UNKNOWN: u8 = 1;
const EXIT_ARGUMENT: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "thetakit",
    version,
    about = "Set intersection representations and minimum rank"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GraphArg {
    /// Graph in graph6 format.
    #[arg(long = "graph6", value_name = "G6")]
    graph6: String,
}

#[derive(clap::Args)]
struct BipArg {
    /// Bipartite graph as `graph6:n1` (first n1 vertices form V1).
    #[arg(long, conflicts_with = "rows", required_unless_present = "rows")]
    bip: Option<String>,
    /// Bipartite graph as comma-separated 0/1 rows, e.g. `110,011`.
    #[arg(long)]
    rows: Option<String>,
}

impl BipArg {
    fn load(&self) -> thetakit::Result<BipartiteGraph> {
        match (&self.bip, &self.rows) {
            (Some(id), _) => BipartiteGraph::parse_id(id),
            (None, Some(rows)) => {
                let rows: Vec<&str> = rows.split(',').map(str::trim).collect();
                BipartiteGraph::from_rows(&rows)
            }
            (None, None) => Err(Error::arg("give --bip or --rows")),
        }
    }
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Largest universe size to try.
    #[arg(long)]
    l_max: Option<usize>,
    /// Search node budget.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Wall-clock budget in milliseconds.
    #[arg(long)]
    budget_ms: Option<u64>,
    /// Print the optimal representation after the value.
    #[arg(long)]
    witness: bool,
}

impl SolveArgs {
    fn options(&self, n: usize, lspec: &LSpec) -> SolveOptions {
        SolveOptions {
            l_max: Some(self.l_max.unwrap_or_else(|| default_l_max(n, lspec))),
            max_nodes: self.max_nodes,
            deadline: self
                .budget_ms
                .map(|ms| std::time::Instant::now() + Duration::from_millis(ms)),
        }
    }
}

#[derive(clap::Args)]
struct RankArgs {
    /// Field characteristic.
    #[arg(long)]
    p: u64,
    /// Search node budget.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Wall-clock budget in milliseconds.
    #[arg(long)]
    budget_ms: Option<u64>,
    /// Print a minimizing matrix after the value.
    #[arg(long)]
    witness: bool,
}

impl RankArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_nodes: self.max_nodes,
            deadline: self
                .budget_ms
                .map(|ms| std::time::Instant::now() + Duration::from_millis(ms)),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    /// Product over R of (x - r).
    Product,
    /// 1 - (x - r)^(p-1), one vector per residue.
    Fermat,
    /// Product over the finite set of (x - l), integer coefficients.
    Integer,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    /// Inclusion matrix of F against the t-subsets.
    Inclusion,
    /// Entries C(|F_u ∩ G_v|, t) against the t-subsets.
    Intersection,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Θ_L of a graph.
    Theta {
        #[command(flatten)]
        graph: GraphArg,
        /// Intersection sizes: `finite:a,b`, `mod:p:r1,r2`, `threshold` or `cofinite-excl:a,b`.
        #[arg(long = "L", value_name = "LSPEC")]
        l: LSpec,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// θ_L of a bipartite graph.
    ThetaBip {
        #[command(flatten)]
        graph: BipArg,
        /// Intersection sizes: `finite:a,b`, `mod:p:r1,r2`, `threshold` or `cofinite-excl:a,b`.
        #[arg(long = "L", value_name = "LSPEC")]
        l: LSpec,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Θ_{L,K} with every set size drawn from K.
    ThetaUniform {
        #[command(flatten)]
        graph: GraphArg,
        /// Intersection sizes: `finite:a,b`, `mod:p:r1,r2`, `threshold` or `cofinite-excl:a,b`.
        #[arg(long = "L", value_name = "LSPEC")]
        l: LSpec,
        /// Allowed set sizes, comma separated.
        #[arg(long = "K", value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Minimum rank over GF(p).
    Minrank {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        rank: RankArgs,
    },
    /// Bipartite minimum rank over GF(p).
    Bminrank {
        #[command(flatten)]
        graph: BipArg,
        #[command(flatten)]
        rank: RankArgs,
    },
    /// Binomial-basis coefficients of the residue polynomials.
    Coeffs {
        /// Modulus (not needed for --relation integer).
        #[arg(long)]
        p: Option<u64>,
        /// Residues (or finite values for --relation integer).
        #[arg(long = "R", value_delimiter = ',', required = true)]
        r: Vec<u64>,
        #[arg(long, value_enum, default_value = "product")]
        relation: Relation,
    },
    /// Inclusion or t-intersection matrix of a set family, with its rank.
    Incmat {
        /// Family file: header `l n`, then one set per line.
        #[arg(long)]
        family: PathBuf,
        /// Size of the column subsets.
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value = "inclusion")]
        kind: MatrixKind,
        /// Rank over GF(p) instead of the rationals.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Witness matrix of two families for a residue set or finite set.
    Witness {
        /// Family file, same format as for incmat.
        #[arg(long)]
        family: PathBuf,
        /// Second family; defaults to the first.
        #[arg(long)]
        other: Option<PathBuf>,
        /// Modulus for the product and fermat variants.
        #[arg(long)]
        p: Option<u64>,
        /// Residues mod p, or the finite set for --variant finite.
        #[arg(long = "R", value_delimiter = ',', required = true)]
        r: Vec<u64>,
        /// One of product, fermat, finite.
        #[arg(long, default_value = "product")]
        variant: String,
    },
    /// Check an inequality over a corpus and emit one report row per item.
    Verify {
        /// Inequality id, e.g. T3.1i, C3.2ii, TIGHT-GF2, STAR-INEQ.
        #[arg(long)]
        theorem: TheoremId,
        /// Modulus; with --R gives L = {x : x mod p in R}.
        #[arg(long)]
        p: Option<u64>,
        /// Residues mod p.
        #[arg(long = "R", value_delimiter = ',')]
        r: Vec<u64>,
        /// Intersection sizes: `finite:a,b`, `mod:p:r1,r2`, `threshold` or `cofinite-excl:a,b`.
        #[arg(long = "L", value_name = "LSPEC")]
        l: Option<LSpec>,
        /// Uniform size (T5.1) or L = {0..k-1} (T1.1).
        #[arg(long)]
        k: Option<usize>,
        /// Allowed set sizes (T5.2), comma separated.
        #[arg(long = "K", value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Exhaustive corpus up to this size.
        #[arg(long, conflicts_with_all = ["classes", "corpus"])]
        n_max: Option<usize>,
        /// Paths, cycles and complete graphs up to this order.
        #[arg(long, conflicts_with = "corpus")]
        classes: Option<usize>,
        /// Corpus file, one item per line.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Record per-row wall time (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
        /// Evaluate rows outside the twin-free, no-isolated-vertex hypothesis.
        #[arg(long)]
        ignore_hypothesis: bool,
        /// Where to write the bundle for the first violated row.
        #[arg(long, default_value = "thetakit-repro")]
        repro_dir: PathBuf,
    },
    /// Print a graph corpus in graph6 (or `graph6:n1` for bipartite).
    Corpus {
        #[arg(long)]
        n: usize,
        /// One representative per isomorphism class.
        #[arg(long)]
        iso: bool,
        /// Bipartite graphs with parts n x m.
        #[arg(long)]
        bipartite: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ARGUMENT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Budget(_) => EXIT_UNKNOWN,
                _ => EXIT_ARGUMENT,
            })
        }
    }
}

fn print_theta(r: &ThetaResult, witness: bool) -> u8 {
    match r {
        ThetaResult::Exact(rep) => {
            println!("{}", rep.universe);
            if witness {
                print!("{}", rep.to_text());
            }
            0
        }
        ThetaResult::Unknown {
            bound,
            refuted_below,
            reason,
            nodes,
        } => {
            println!("unknown");
            eprintln!(
                "no representation within {bound} elements; refuted below {refuted_below} ({reason:?}, {nodes} nodes)"
            );
            EXIT_UNKNOWN
        }
    }
}

fn print_rank(r: MinRankResult, witness: bool) -> u8 {
    match r {
        MinRankResult::Exact { rank, witness: m } => {
            println!("{rank}");
            if witness {
                print!("{}", m.to_grid_string());
            }
            0
        }
        MinRankResult::Unknown { nodes, best_upper } => {
            println!("unknown");
            match best_upper {
                Some(u) => eprintln!("budget exhausted after {nodes} nodes; best upper bound {u}"),
                None => eprintln!("budget exhausted after {nodes} nodes"),
            }
            EXIT_UNKNOWN
        }
    }
}

fn read_family(path: &PathBuf) -> thetakit::Result<SetFamily> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::arg(format!("cannot read {}: {e}", path.display())))?;
    SetFamily::parse_text(&text)
}

fn need_p(p: Option<u64>) -> thetakit::Result<u64> {
    p.ok_or_else(|| Error::arg("--p is required"))
}

fn run(cmd: Command) -> thetakit::Result<u8> {
    match cmd {
        Command::Theta { graph, l, solve } => {
            let g = Graph::parse_graph6(&graph.graph6)?;
            let r = theta_exact_with(&g, &l, &solve.options(g.n(), &l));
            Ok(print_theta(&r, solve.witness))
        }
        Command::ThetaBip { graph, l, solve } => {
            let g = graph.load()?;
            let r = theta_bipartite_exact_with(&g, &l, &solve.options(g.n1() + g.n2(), &l));
            Ok(print_theta(&r, solve.witness))
        }
        Command::ThetaUniform { graph, l, k, solve } => {
            let g = Graph::parse_graph6(&graph.graph6)?;
            let mut opts = solve.options(g.n(), &l);
            if solve.l_max.is_none() {
                opts.l_max = Some(uniform_l_max(g.n(), &k));
            }
            let r = theta_uniform_exact_with(&g, &l, &k, &opts)?;
            let k_max = k.iter().copied().max().unwrap_or(0);
            if g.n() * k_max <= uniform_l_max(g.n(), &k) && r.refuted_through(g.n() * k_max) {
                println!("none");
                eprintln!("no representation with set sizes in K exists");
                return Ok(0);
            }
            Ok(print_theta(&r, solve.witness))
        }
        Command::Minrank { graph, rank } => {
            let g = Graph::parse_graph6(&graph.graph6)?;
            Ok(print_rank(
                minrank_gfp(&g, rank.p, &rank.budget())?,
                rank.witness,
            ))
        }
        Command::Bminrank { graph, rank } => {
            let g = graph.load()?;
            Ok(print_rank(
                bipartite_minrank_gfp(&g, rank.p, &rank.budget())?,
                rank.witness,
            ))
        }
        Command::Coeffs { p, r, relation } => {
            match relation {
                Relation::Product => {
                    println!("a: {}", binomial_basis_coeffs(&r, need_p(p)?)?);
                }
                Relation::Fermat => {
                    let p = need_p(p)?;
                    for &ri in &r {
                        println!("b[{ri}]: {}", fermat_basis_coeffs(ri, p)?);
                    }
                }
                Relation::Integer => {
                    let c = integer_binomial_basis_coeffs(&r);
                    let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
                    println!("a: {}", parts.join(" "));
                }
            }
            Ok(0)
        }
        Command::Incmat { family, t, kind, p } => {
            let f = read_family(&family)?;
            let m = match kind {
                MatrixKind::Inclusion => t_inclusion_matrix(&f, t)?,
                MatrixKind::Intersection => {
                    let ts = SetFamily::all_subsets_of_size(f.ground_size(), t)?;
                    t_intersection_matrix(&f, &ts, t)?
                }
            };
            let m = match p {
                Some(p) => m.reduce_mod(p)?,
                None => m,
            };
            print!("{}", m.to_grid_string());
            println!("rank {}", m.rank());
            Ok(0)
        }
        Command::Witness {
            family,
            other,
            p,
            r,
            variant,
        } => {
            let f = read_family(&family)?;
            let g = match &other {
                Some(path) => read_family(path)?,
                None => f.clone(),
            };
            let m = if variant == "finite" {
                witness_matrix_finite(&f, &g, &r)?
            } else {
                let v = WitnessVariant::parse(&variant)?;
                witness_matrix_modular(&f, &g, &r, need_p(p)?, v)?
            };
            print!("{}", m.to_grid_string());
            println!("rank {}", m.rank());
            Ok(0)
        }
        Command::Verify {
            theorem,
            p,
            r,
            l,
            k,
            sizes,
            n_max,
            classes,
            corpus,
            format,
            timing,
            ignore_hypothesis,
            repro_dir,
        } => {
            let lspec = match (l, p) {
                (Some(l), _) => Some(l),
                (None, Some(p)) if !r.is_empty() => Some(LSpec::modular(p, &r)?),
                _ => None,
            };
            let params = Params { lspec, k, sizes, p };
            params.validate(theorem)?;
            let kind = theorem.item_kind();
            let spec = match (n_max, classes, corpus) {
                (Some(n), _, _) => CorpusSpec::Exhaustive(n),
                (_, Some(n), _) => CorpusSpec::Classes(n),
                (_, _, Some(path)) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| Error::arg(format!("cannot read {}: {e}", path.display())))?;
                    CorpusSpec::Items(parse_corpus(kind, &text)?)
                }
                _ => return Err(Error::arg("give one of --n-max, --classes, --corpus")),
            };
            let items = build_corpus(kind, &spec)?;
            let mut config = CheckConfig::from_env()?;
            config.record_millis = timing;
            config.ignore_hypothesis = ignore_hypothesis;
            let mut outcome = run_corpus(theorem, &params, &items, &config)?;
            if let Some(at) = outcome.violation {
                match write_repro_bundle(&repro_dir, &outcome.rows[at]) {
                    Ok(dir) => {
                        outcome.rows[at].witness_path = Some(dir.display().to_string());
                        eprintln!(
                            "violation: {} on {}; bundle in {}",
                            theorem,
                            outcome.rows[at].graph6,
                            dir.display()
                        );
                    }
                    Err(e) => eprintln!("violation: {theorem}; could not write bundle: {e}"),
                }
            }
            let stdout = io::stdout();
            match format {
                Format::Csv => write_csv(&outcome.rows, stdout.lock())?,
                Format::Json => {
                    let mut out = stdout.lock();
                    writeln!(out, "{}", to_json(&outcome.rows))
                        .map_err(|e| Error::arg(format!("write failed: {e}")))?;
                }
            }
            Ok(if outcome.violation.is_some() {
                EXIT_VIOLATION
            } else if outcome
                .rows
                .iter()
                .any(|r| r.holds == Verdict::Indeterminate)
            {
                EXIT_UNKNOWN
            } else {
                0
            })
        }
        Command::Corpus { n, iso, bipartite } => {
            let mut out = io::stdout().lock();
            let mut emit = |line: String| {
                writeln!(out, "{line}").map_err(|e| Error::arg(format!("write failed: {e}")))
            };
            match (bipartite, iso) {
                (Some(m), false) => {
                    for b in enumerate_bipartite(n, m)? {
                        emit(b.id())?;
                    }
                }
                (Some(_), true) => return Err(Error::arg("--iso applies to plain graphs only")),
                (None, true) => {
                    for g in enumerate_graphs_up_to_isomorphism(n)? {
                        emit(g.to_graph6()?)?;
                    }
                }
                (None, false) => {
                    for g in enumerate_graphs(n)? {
                        emit(g.to_graph6()?)?;
                    }
                }
            }
            Ok(0)
        }
    }
}
