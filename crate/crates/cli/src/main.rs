use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ncause_core::cause::{self, format_all_causes};
use ncause_core::dot::{dot_diagram, dot_graph};
use ncause_core::eval::{self, effects};
use ncause_core::lang::{self, Lowered};
use ncause_core::{Diagram, Graph};

/// Evaluate neuron diagrams, infer causes and render DOT.
#[derive(Parser)]
#[command(name = "ncause", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a file, reporting diagnostics only.
    Check { file: PathBuf },
    /// Print neuron values of a diagram in evaluation order.
    Eval {
        file: PathBuf,
        #[arg(long)]
        diagram: String,
        /// Print only this neuron.
        #[arg(long)]
        neuron: Option<String>,
    },
    /// Print the causes of each output of a diagram.
    Causes {
        file: PathBuf,
        #[arg(long)]
        diagram: String,
    },
    /// Print the output values for every input combination.
    Effects {
        file: PathBuf,
        #[command(flatten)]
        select: Select,
    },
    /// Print the causes of every diagram a graph generates.
    AllCauses {
        file: PathBuf,
        #[command(flatten)]
        select: Select,
    },
    /// Emit GraphViz DOT.
    Dot {
        file: PathBuf,
        #[command(flatten)]
        select: Select,
        /// Write here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare two graphs (or diagrams); prints True or False.
    Equal {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"], required_unless_present = "causes", conflicts_with = "causes")]
        effects: Option<Vec<String>>,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        causes: Option<Vec<String>>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Select {
    #[arg(long)]
    graph: Option<String>,
    /// Use this diagram (its graph, where a graph is needed).
    #[arg(long)]
    diagram: Option<String>,
}

/// A failure to report on standard error, exiting with status 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(String, ExitCode), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, code)) => {
            if !out.is_empty() {
                println!("{out}");
            }
            code
        }
        Err(Failure(msg)) => {
            eprintln!("ncause: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Read, parse and lower `file`, printing its diagnostics to standard error.
fn load(file: &Path) -> Result<Lowered, Failure> {
    let text = fs::read_to_string(file)
        .map_err(|e| Failure(format!("cannot read {}: {e}", file.display())))?;
    let shown = file.display();
    let lowered = match lang::load(&text) {
        Ok(l) => l,
        Err(diags) => {
            for d in &diags {
                eprintln!("{shown}:{d}");
            }
            return Err(Failure(format!("{shown}: {} syntax error(s)", diags.len())));
        }
    };
    for d in &lowered.diagnostics {
        eprintln!("{shown}:{d}");
    }
    if lowered.has_errors() {
        return Err(Failure(format!("{shown}: invalid definitions")));
    }
    Ok(lowered)
}

fn diagram<'a>(l: &'a Lowered, name: &str) -> Result<&'a Diagram, Failure> {
    l.diagrams
        .get(name)
        .ok_or_else(|| Failure(format!("no diagram named `{name}`")))
}

fn graph<'a>(l: &'a Lowered, name: &str) -> Result<&'a std::sync::Arc<Graph>, Failure> {
    l.graphs
        .get(name)
        .ok_or_else(|| Failure(format!("no graph named `{name}`")))
}

fn selected<'a>(l: &'a Lowered, s: &Select) -> Result<&'a std::sync::Arc<Graph>, Failure> {
    match (&s.graph, &s.diagram) {
        (Some(g), _) => graph(l, g),
        (None, Some(d)) => Ok(diagram(l, d)?.graph()),
        (None, None) => unreachable!("clap requires a selector"),
    }
}

/// A graph by name, or the graph of a diagram by that name.
fn any_graph<'a>(l: &'a Lowered, name: &str) -> Result<&'a std::sync::Arc<Graph>, Failure> {
    match (l.graphs.get(name), l.diagrams.get(name)) {
        (Some(g), _) => Ok(g),
        (None, Some(d)) => Ok(d.graph()),
        (None, None) => Err(Failure(format!("no graph or diagram named `{name}`"))),
    }
}

fn verdict(same: bool) -> Outcome {
    let code = if same {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    };
    Ok((if same { "True" } else { "False" }.to_string(), code))
}

fn run(cmd: Command) -> Outcome {
    let ok = |s: String| Ok((s, ExitCode::SUCCESS));
    match cmd {
        Command::Check { file } => {
            let l = load(&file)?;
            eprintln!(
                "{}: ok ({} graphs, {} diagrams)",
                file.display(),
                l.graphs.len(),
                l.diagrams.len()
            );
            ok(String::new())
        }
        Command::Eval {
            file,
            diagram: name,
            neuron,
        } => {
            let l = load(&file)?;
            let d = diagram(&l, &name)?;
            let g = d.graph();
            let val = eval::evaluate(d);
            let show = |id| format!("{}:{}", g.name(id), g.domain().show(val.get(id)));
            match neuron {
                Some(n) => {
                    let id = g
                        .id_of(&n)
                        .ok_or_else(|| Failure(format!("no neuron named `{n}` in `{name}`")))?;
                    ok(show(id))
                }
                None => ok(g
                    .topo_order()
                    .iter()
                    .map(|&id| show(id))
                    .collect::<Vec<_>>()
                    .join("\n")),
            }
        }
        Command::Causes {
            file,
            diagram: name,
        } => {
            let l = load(&file)?;
            ok(cause::causes(diagram(&l, &name)?)?.to_string())
        }
        Command::Effects { file, select } => {
            let l = load(&file)?;
            ok(effects(selected(&l, &select)?)?.to_string())
        }
        Command::AllCauses { file, select } => {
            let l = load(&file)?;
            ok(format_all_causes(&cause::all_causes(selected(
                &l, &select,
            )?)?))
        }
        Command::Dot {
            file,
            select,
            output,
        } => {
            let l = load(&file)?;
            let text = match (&select.graph, &select.diagram) {
                (Some(g), _) => dot_graph(graph(&l, g)?),
                (None, Some(d)) => dot_diagram(diagram(&l, d)?),
                (None, None) => unreachable!("clap requires a selector"),
            };
            match output {
                Some(path) => {
                    fs::write(&path, text)
                        .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?;
                    ok(String::new())
                }
                None => ok(text.trim_end().to_string()),
            }
        }
        Command::Equal {
            file,
            effects: by_effects,
            causes: by_causes,
        } => {
            let l = load(&file)?;
            if let Some(names) = by_effects {
                let (a, b) = (any_graph(&l, &names[0])?, any_graph(&l, &names[1])?);
                return verdict(effects(a)? == effects(b)?);
            }
            let names = by_causes.expect("clap requires --effects or --causes");
            match (l.diagrams.get(&names[0]), l.diagrams.get(&names[1])) {
                (Some(a), Some(b))
                    if !l.graphs.contains_key(&names[0]) && !l.graphs.contains_key(&names[1]) =>
                {
                    verdict(cause::causes(a)? == cause::causes(b)?)
                }
                _ => {
                    let (a, b) = (any_graph(&l, &names[0])?, any_graph(&l, &names[1])?);
                    verdict(cause::all_causes(a)? == cause::all_causes(b)?)
                }
            }
        }
    }
}
