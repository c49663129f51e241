use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use orbicover::covers::{enumerate_double_covers, verify_covering, CoveringMap};
use orbicover::coxeter::{
    branch_decomposition, davis_orbicomplex, one_endedness_check, racg_presentation, DefiningGraph,
};
use orbicover::demo::{run_demo, Census, DemoConfig};
use orbicover::invariants::{abelianization, compare_report, fundamental_group_presentation};
use orbicover::orbicore::{euler_characteristic, singular_subspace, Orbicomplex};

#[derive(Parser)]
#[command(name = "orbicover", version, about = "Reflection orbicomplexes, their finite covers and invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the result to this file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Emit JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Presentation, branch decomposition and one-endedness of a defining graph.
    Racg {
        graph: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Davis orbicomplex of a defining graph.
    Davis {
        graph: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Orbifold Euler characteristic.
    Euler {
        complex: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Singular subspace.
    Singular {
        complex: PathBuf,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Fundamental group presentation.
    Pi1 {
        complex: PathBuf,
        /// Print the abelianization instead.
        #[arg(long)]
        ab: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Check the covering conditions of a serialized covering map.
    Verify {
        cover: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate the connected double covers of a mirror-free complex.
    Covers {
        complex: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Compare two complexes by homeomorphism and homotopy invariants.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run the full counterexample pipeline.
    PaperDemo {
        /// Directory receiving the intermediate complexes and covering maps.
        #[arg(long, value_name = "DIR")]
        artifacts: Option<PathBuf>,
        /// Piece census selecting X2, as `cones:count` pairs.
        #[arg(long, value_delimiter = ',', value_parser = parse_census_entry)]
        x2_census: Vec<(usize, usize)>,
        /// Require the pair to have isomorphic singular subspaces.
        #[arg(long)]
        pair_singular_isomorphic: bool,
        /// Require the pair to have different normal forms.
        #[arg(long)]
        pair_distinct_normal_forms: bool,
        #[command(flatten)]
        output: Output,
    },
}

/// Failure with its exit code.
struct Exit(u8, String);

const PARSE: u8 = 2;
const PRECONDITION: u8 = 3;
const VERIFICATION: u8 = 4;

fn parse_census_entry(s: &str) -> Result<(usize, usize), String> {
    let (k, n) = s.split_once(':').ok_or("expected cones:count")?;
    Ok((k.trim().parse().map_err(|e| format!("{e}"))?, n.trim().parse().map_err(|e| format!("{e}"))?))
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Exit> {
    let text = std::fs::read_to_string(path).map_err(|e| Exit(PARSE, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Exit(PARSE, format!("{}: {e}", path.display())))
}

fn precondition(e: orbicover::error::Error) -> Exit {
    Exit(PRECONDITION, e.to_string())
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable") + "\n"
}

fn emit(output: &Output, text: String) -> Result<(), Exit> {
    match &output.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Exit(PRECONDITION, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_artifact<T: Serialize>(dir: &Path, name: &str, x: &T) -> Result<(), Exit> {
    std::fs::write(dir.join(name), to_json(x)).map_err(|e| Exit(PRECONDITION, format!("{}: {e}", dir.display())))
}

fn run(cli: Cli) -> Result<(), Exit> {
    match cli.command {
        Command::Racg { graph, output } => {
            let g: DefiningGraph = read(&graph)?;
            g.check_simplicial().map_err(precondition)?;
            let presentation = racg_presentation(&g);
            let one_ended = one_endedness_check(&g);
            let branches = branch_decomposition(&g);
            let text = if output.json {
                to_json(&json!({
                    "presentation": presentation,
                    "branches": branches.as_ref().ok(),
                    "one_ended": one_ended,
                }))
            } else {
                let mut t = format!("generators: {}\n{presentation}\n", presentation.generators.len());
                if let Ok(bs) = &branches {
                    t += &format!("branches: {}\n", bs.len());
                    for b in bs {
                        t += &format!("  {} -> {}: n = {}\n", b.start(), b.end(), b.n());
                    }
                }
                t + &format!("one-ended: {one_ended}\n")
            };
            emit(&output, text)?;
            branches.map(|_| ()).map_err(precondition)
        }
        Command::Davis { graph, output } => {
            let g: DefiningGraph = read(&graph)?;
            let d = davis_orbicomplex(&g).map_err(precondition)?;
            emit(&output, to_json(&d))
        }
        Command::Euler { complex, output } => {
            let c: Orbicomplex = read(&complex)?;
            let chi = euler_characteristic(&c).map_err(precondition)?;
            emit(&output, if output.json { to_json(&chi.to_string()) } else { format!("{chi}\n") })
        }
        Command::Singular { complex, dot, output } => {
            let c: Orbicomplex = read(&complex)?;
            let s = singular_subspace(&c).map_err(precondition)?;
            emit(&output, if dot { s.to_dot(&c.name) } else { to_json(&s) })
        }
        Command::Pi1 { complex, ab, output } => {
            let c: Orbicomplex = read(&complex)?;
            let p = fundamental_group_presentation(&c).map_err(precondition)?;
            let text = match (ab, output.json) {
                (true, true) => to_json(&abelianization(&p)),
                (true, false) => format!("{}\n", abelianization(&p)),
                (false, true) => to_json(&p),
                (false, false) => format!("{p}\n"),
            };
            emit(&output, text)
        }
        Command::Verify { cover, output } => {
            let f: CoveringMap = read(&cover)?;
            let report = verify_covering(&f).map_err(precondition)?;
            emit(&output, if output.json { to_json(&report) } else { report.to_string() })?;
            if report.passed() {
                Ok(())
            } else {
                Err(Exit(VERIFICATION, "covering conditions fail".into()))
            }
        }
        Command::Covers { complex, output } => {
            let c: Orbicomplex = read(&complex)?;
            let family = enumerate_double_covers(&c).map_err(precondition)?;
            let text = if output.json {
                to_json(&family.iter().map(|d| json!({ "labeling": d.labeling, "map": d.map })).collect::<Vec<_>>())
            } else {
                let mut t = format!("{} connected double covers\n", family.len());
                for (i, d) in family.iter().enumerate() {
                    let chi = euler_characteristic(&d.complex).map_err(precondition)?;
                    let census: Vec<String> = d.complex.census().iter().map(|p| p.to_string()).collect();
                    t += &format!("{i}: euler {chi}; pieces {}\n", census.join(", "));
                }
                t
            };
            emit(&output, text)
        }
        Command::Compare { a, b, output } => {
            let (a, b): (Orbicomplex, Orbicomplex) = (read(&a)?, read(&b)?);
            let r = compare_report(&a, &b).map_err(precondition)?;
            emit(&output, if output.json { to_json(&r) } else { format!("{}\n", r.summary()) })
        }
        Command::PaperDemo { artifacts, x2_census, pair_singular_isomorphic, pair_distinct_normal_forms, output } => {
            let mut config = DemoConfig::default();
            if !x2_census.is_empty() {
                config.x2_census = Census::from_iter(x2_census);
            }
            config.pair.singular_isomorphic = pair_singular_isomorphic;
            config.pair.normal_forms_equal = !pair_distinct_normal_forms;
            let (report, art) = run_demo(&config);
            let text = if output.json {
                to_json(&report)
            } else {
                let mut t = String::new();
                for s in &report.stages {
                    t += &format!("stage {}: {} ({:.1} ms)\n", s.stage, s.name, s.millis);
                    for (k, v) in &s.invariants {
                        t += &format!("  {k}: {v}\n");
                    }
                    for v in &s.verdicts {
                        t += &format!("  {v}\n");
                    }
                }
                t + if report.passed { "PASS\n" } else { "FAIL\n" }
            };
            emit(&output, text)?;
            if let (Some(dir), Some(art)) = (artifacts, &art) {
                std::fs::create_dir_all(&dir).map_err(|e| Exit(PRECONDITION, format!("{}: {e}", dir.display())))?;
                write_artifact(&dir, "davis.json", &art.davis)?;
                for (name, f) in [
                    ("x1", &art.x1),
                    ("x2", &art.x2),
                    ("y", &art.y),
                    ("z", &art.z),
                    ("y_hat", &art.y_hat),
                    ("z_hat", &art.z_hat),
                ] {
                    write_artifact(&dir, &format!("{name}.json"), &f.source)?;
                    write_artifact(&dir, &format!("{name}_cover.json"), f)?;
                }
            }
            match report.failure {
                None => Ok(()),
                Some(f) => Err(Exit(VERIFICATION, f)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
