use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tw_core::diagram::Diagram;
use tw_core::dsl::{parse_diagram, parse_word, print_diagram, print_inline};
use tw_core::model::checks::{
    check_action, check_cosimplicial, check_ds_naturality, check_relations, check_twist_axioms, convention_experiment,
    free_module_derivation, free_module_spot_values, juxtaposition_check, negative_controls, ActionOptions,
};
use tw_core::model::{AlgebraBackend, Backend, BackendSpec, Convention, FreeModuleBackend};
use tw_core::render::{render_ascii, render_svg};
use tw_core::report::VerificationReport;
use tw_core::rewrite::canonicalize;
use tw_core::simplicial::{verify_cofacial_identities, verify_simplicial_identities, SweepOptions};
use tw_core::tw::{beta, enumerate_hom, tau, theta, verify_contraction, ContractionOptions, ENUMERATION_LIMIT};

#[derive(Parser)]
#[command(name = "tw", version, about = "Diagrams in B_k, the TW operad and its action on cobar constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
    /// List the equality classes of maps SRC -> TGT with a bounded number of generators.
    Enumerate {
        /// Source word, e.g. "[0]^3", "(0 1 1)" or "0 1".
        src: String,
        tgt: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        max_gens: usize,
    },
    /// Draw a diagram file ("-" reads stdin).
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Print the canonical form of a diagram file.
    Normalize { file: PathBuf },
    /// Print beta_n.
    Beta { n: usize },
    /// Print Theta_{n,k}.
    Theta { n: usize, k: usize },
    /// Print tau(n).
    Tau { n: usize },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Simplicial,
    Contraction,
    Twist,
    Naturality,
    Action,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random samples; the meaning depends on the suite.
    #[arg(long)]
    samples: Option<usize>,
    /// Backend definition file (TOML) for twist, naturality and action.
    #[arg(long)]
    backend: Option<PathBuf>,
    /// Also write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Print only the summary line.
    #[arg(long, short)]
    quiet: bool,
}

/// Usage, input or I/O problems; exit code 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Fatal> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
    }
}

fn read_diagram(path: &Path) -> Result<Diagram, Fatal> {
    let text = read_input(path)?;
    parse_diagram(&text).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn load_backend(path: &Option<PathBuf>) -> Result<Option<Backend>, Fatal> {
    match path {
        None => Ok(None),
        Some(p) => Ok(Some(BackendSpec::load(p)?.build()?)),
    }
}

macro_rules! with_backend {
    ($b:expr, |$x:ident| $body:expr) => {
        match $b {
            Backend::Algebra($x) => $body,
            Backend::FreeModule($x) => $body,
        }
    };
}

/// Domains up to this size are compared exhaustively in the naturality and
/// action suites on free modules; larger ones are sampled.
const FREE_MODULE_LIMIT: u64 = 256;

type Job<'a> = Box<dyn FnOnce() -> (String, VerificationReport) + Send + 'a>;

/// Runs the jobs on separate threads and combines their reports in order.
fn run_parallel(suite: &str, jobs: Vec<Job<'_>>) -> VerificationReport {
    let parts = thread::scope(|s| {
        let handles: Vec<_> = jobs.into_iter().map(|j| s.spawn(j)).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    VerificationReport::combine(suite, parts)
}

fn job<'a>(tag: &str, f: impl FnOnce() -> VerificationReport + Send + 'a) -> Job<'a> {
    let tag = tag.to_string();
    Box::new(move || (tag, f()))
}

fn verify(args: &VerifyArgs) -> Result<VerificationReport, Fatal> {
    let seed = args.seed;
    let backend = load_backend(&args.backend)?;
    let report = match args.suite {
        Suite::Simplicial => {
            let opts = SweepOptions {
                k_max: args.kmax.unwrap_or(3),
                samples: args.samples.unwrap_or(500),
                max_context: 2,
                seed,
            };
            run_parallel(
                "simplicial",
                vec![
                    job("simplicial", move || verify_simplicial_identities(&opts)),
                    job("cofacial", move || verify_cofacial_identities(&opts)),
                ],
            )
        }
        Suite::Contraction => verify_contraction(&ContractionOptions {
            n_max: args.nmax.unwrap_or(4),
            k_max: args.kmax.unwrap_or(2),
            samples: args.samples.unwrap_or(100),
            seed,
        }),
        Suite::Twist => {
            let samples = args.samples.unwrap_or(1000);
            match &backend {
                Some(Backend::Algebra(a)) => check_twist_axioms(a),
                Some(Backend::FreeModule(f)) => {
                    let mut r = check_twist_axioms(f);
                    r.push(juxtaposition_check(f));
                    if f.convention() == Convention::Nested {
                        r.extend(free_module_derivation(f));
                    }
                    r
                }
                None => {
                    let mut jobs: Vec<Job> = vec![
                        job("dual-f2", || check_twist_axioms(&AlgebraBackend::dual_numbers_f2())),
                        job("diagonal-f3", || check_twist_axioms(&AlgebraBackend::diagonal_f3())),
                        job("controls", negative_controls),
                        job("spot", || {
                            let mut r = VerificationReport::new("twist-spot");
                            r.push(free_module_spot_values());
                            r
                        }),
                    ];
                    for base in [1u32, 2] {
                        jobs.push(job(&format!("convention-x{base}"), move || convention_experiment(2, base, samples, seed).1));
                        jobs.push(job(&format!("derivation-x{base}"), move || {
                            let b = FreeModuleBackend::new(2, base, Convention::Nested)
                                .expect("valid")
                                .with_sampling(samples, seed);
                            free_module_derivation(&b)
                        }));
                    }
                    run_parallel("twist", jobs)
                }
            }
        }
        Suite::Naturality => {
            let k_max = args.kmax.unwrap_or(2);
            let n_max = args.nmax.unwrap_or(3);
            let samples = args.samples.unwrap_or(100);
            let b = match backend {
                None => Backend::Algebra(AlgebraBackend::dual_numbers_f2()),
                Some(Backend::FreeModule(f)) => Backend::FreeModule(f.with_exhaustive_limit(FREE_MODULE_LIMIT)),
                Some(other) => other,
            };
            with_backend!(&b, |x| run_parallel(
                "naturality",
                vec![
                    job("phi", || check_relations(x, k_max, samples, seed)),
                    job("squares", || check_ds_naturality(x, k_max, 2)),
                    job("cobar", || check_cosimplicial(x, n_max)),
                ],
            ))
        }
        Suite::Action => {
            let opts = ActionOptions {
                n_max: args.nmax.unwrap_or(2),
                k_max: args.kmax.unwrap_or(1),
                samples: args.samples.unwrap_or(3),
                seed,
                ..ActionOptions::default()
            };
            match backend {
                None => check_action(&AlgebraBackend::dual_numbers_f2(), &opts),
                Some(Backend::Algebra(a)) => check_action(&a, &opts),
                Some(Backend::FreeModule(f)) => check_action(&f.with_exhaustive_limit(FREE_MODULE_LIMIT), &opts),
            }
        }
    };
    Ok(report)
}

fn run(cli: Cli) -> Result<bool, Fatal> {
    match cli.command {
        Command::Verify(args) => {
            let report = verify(&args)?;
            // single writer, after every suite has finished
            if let Some(path) = &args.json {
                std::fs::write(path, report.to_json() + "\n").map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
            }
            if args.quiet {
                let failed = report.failures().count();
                println!("suite {}: {} check(s), {failed} failed", report.suite, report.checks.len());
            } else {
                println!("{report}");
            }
            Ok(report.passed())
        }
        Command::Enumerate { src, tgt, k, max_gens } => {
            let (s, t) = (parse_word(&src).map_err(|e| Fatal(format!("{}: {}", e.0, e.1)))?, parse_word(&tgt).map_err(|e| Fatal(format!("{}: {}", e.0, e.1)))?);
            if let Some(l) = s.iter().chain(t.iter()).find(|l| l.0 as usize > k) {
                return Err(Fatal(format!("label {l} exceeds k = {k}")));
            }
            let e = enumerate_hom(&s, &t, k, max_gens, ENUMERATION_LIMIT);
            println!("{} classes", e.classes.len());
            for c in &e.classes {
                println!("{}", print_inline(c.diagram()));
            }
            if !e.complete {
                eprintln!("warning: state limit reached after {} states; the list may be incomplete", e.explored);
            }
            Ok(true)
        }
        Command::Render { file, format } => {
            let d = read_diagram(&file)?;
            match format {
                Format::Ascii => print!("{}", render_ascii(&d)),
                Format::Svg => print!("{}", render_svg(&d)),
            }
            Ok(true)
        }
        Command::Normalize { file } => {
            let d = read_diagram(&file)?;
            print!("{}", print_diagram(canonicalize(&d).diagram()));
            Ok(true)
        }
        Command::Beta { n } => {
            print!("{}", print_diagram(&beta(n)?));
            Ok(true)
        }
        Command::Theta { n, k } => {
            print!("{}", print_diagram(&theta(n, k)?));
            Ok(true)
        }
        Command::Tau { n } => {
            print!("{}", print_diagram(tau(n)?.diagram()));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
