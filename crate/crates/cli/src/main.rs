//! `tropls`: exact divisor theory and tropical linear series on metric
//! graphs. All numeric I/O is exact rational strings; exit codes are
//! 0 = pass/true/dependent, 1 = fail/false/independent, 2 = input error,
//! 3 = undetermined.

mod commands;
mod dot;
mod output;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "tropls", version, about = "tropical linear series toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Baker-Norine rank of a divisor.
    Rank(commands::RankArgs),
    /// Reduced divisor with its witness function.
    Reduce(commands::ReduceArgs),
    /// Tropical dependence of function sets.
    Dep(commands::DepArgs),
    /// Finitely generated tropical submodules.
    Module(commands::ModuleArgs),
    /// Tropical-linear-series checks and constructions.
    Tls(commands::TlsArgs),
    /// Matroids, valuated matroids and the Levi-graph series.
    Matroid(commands::MatroidArgs),
    /// Tropical modifications and balancing.
    Morph(commands::MorphArgs),
    /// Built-in example fixtures.
    Example(commands::ExampleArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Rank(a) => commands::rank(a),
        Command::Reduce(a) => commands::reduce(a),
        Command::Dep(a) => commands::dep(a),
        Command::Module(a) => commands::module(a),
        Command::Tls(a) => commands::tls(a),
        Command::Matroid(a) => commands::matroid(a),
        Command::Morph(a) => commands::morph(a),
        Command::Example(a) => commands::example(a),
    };
    let code = match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}
