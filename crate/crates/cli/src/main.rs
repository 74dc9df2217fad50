use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hermkq::config::CAP_ENV;
use hermkq::Caps;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "hermkq", version, about = "Exact hermitian K-theory computations over small finite rings")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Candidate cap for exhaustive searches
    #[arg(long, env = CAP_ENV, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// Inputs may be inline JSON, `@path` to a file, or `-` for stdin.
#[derive(Subcommand, Debug)]
enum Command {
    /// Check the involution axioms of a ring
    RingCheck {
        #[arg(long)]
        ring: String,
        /// Check this many random pairs instead of all of them
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Nondegeneracy, evenness and normal forms of a form
    FormCheck {
        #[arg(long)]
        form: String,
    },
    /// Enumerate the automorphism group of a form
    Group {
        #[arg(long)]
        form: String,
        /// Group variant; defaults to the form's own variant
        #[arg(long)]
        variant: Option<String>,
        /// Include every element in the report
        #[arg(long)]
        list: bool,
        /// Also check the extension S(E) → O^el → O^min
        #[arg(long)]
        extension: bool,
    },
    /// Stable classes of forms up to a rank
    Witt {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        epsilon: i64,
        #[arg(long, default_value = "min")]
        variant: String,
        #[arg(long, default_value_t = 2)]
        max_rank: usize,
    },
    /// Isomorphism classes with their direct-sum table
    Gw {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        epsilon: i64,
        #[arg(long, default_value = "min")]
        variant: String,
        #[arg(long, default_value_t = 2)]
        max_rank: usize,
    },
    /// Arf invariant of a form over a field of characteristic 2
    Arf {
        #[arg(long)]
        form: String,
    },
    /// Dickson invariant on the orthogonal group of a form
    Dickson {
        #[arg(long)]
        form: String,
    },
    /// The group Ξ(A)
    Xi {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        epsilon: i64,
        /// Also check the Arf retraction (char 2 fields, trivial involution)
        #[arg(long)]
        retraction: bool,
    },
    /// Cup-products with polynomial forms
    Clauwens {
        #[command(subcommand)]
        command: ClauwensCommand,
    },
    /// Whitehead block identities for a pair of invertible matrices
    Whitehead {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        /// Check this many seeded random pairs instead
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the bundled acceptance suites
    Verify {
        /// `all` or a criterion number from 1 to 12
        #[arg(default_value = "all")]
        which: String,
    },
}

#[derive(Subcommand, Debug)]
enum ClauwensCommand {
    /// κ = Σ θₙ ⊗ δφⁿ for `{"theta": …, "delta": {"epsilon", "matrix"}}`
    Product {
        #[arg(long)]
        input: String,
    },
    /// Reduce θ to an almost hermitian form, optionally checked against δ
    Linearize {
        #[arg(long)]
        input: String,
    },
    /// The f_p, Z_p recursion for `{"ring", "epsilon", "g", "delta", "zeta", "depth"}`
    Lemma4 {
        #[arg(long)]
        input: String,
    },
    /// γ(t) with γ*γ = 1 + νt for `{"ring", "nu", "lambda"}`
    SqrtNilpotent {
        #[arg(long)]
        input: String,
    },
    /// α with αp1 = p0α for `{"ring", "ideal", "p0", "p1", "form"}`
    ConjugateProjectors {
        #[arg(long)]
        input: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = cli.cap.map(|c| Caps::new(c as u128)).unwrap_or_default();
    match commands::run(&cli.command, &caps) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.document()).expect("report serializes")),
                Format::Table => print!("{}", out.table()),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&commands::error_document(&cli.command, &e)).expect("error serializes")
                ),
                Format::Table => {}
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
