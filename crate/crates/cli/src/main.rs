mod bench;
mod numeric;
mod program;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use unifpu::kernels::{DEFAULT_FREQ_MHZ, ElemFormat, Mode};
use unifpu::posit::AccuracyFormat;

/// Posit / binary32 unified FPU toolkit.
#[derive(Parser, Debug)]
#[command(name = "unifpu", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for generated data.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Clock used for throughput figures.
    #[arg(long, global = true, default_value_t = DEFAULT_FREQ_MHZ)]
    freq_mhz: f64,
    /// Simulated memory size in bytes; for bench, operands get everything above the data base.
    #[arg(long, global = true)]
    mem_bytes: Option<usize>,
    /// Cycle cost table as JSON (see README for the fields).
    #[arg(long, global = true)]
    cost: Option<PathBuf>,
    /// Emit JSON instead of text or CSV.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Break a posit pattern into its fields and exact value.
    Decode {
        #[arg(long, value_parser = numeric::parse_prec)]
        prec: u32,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=7))]
        es: u8,
        #[arg(value_parser = numeric::parse_hex)]
        pattern: u32,
    },
    /// Round a decimal value to the nearest posit.
    Encode {
        #[arg(long, value_parser = numeric::parse_prec)]
        prec: u32,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=7))]
        es: u8,
        #[arg(allow_negative_numbers = true)]
        value: f64,
    },
    /// Convert a pattern between posit formats and fp32.
    Convert {
        #[arg(long)]
        from: ElemFormat,
        #[arg(long)]
        to: ElemFormat,
        #[arg(value_parser = numeric::parse_hex)]
        pattern: u32,
    },
    /// Decimal accuracy over a log-spaced grid, as CSV.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "p16e1,fp16")]
        fmt: Vec<AccuracyFormat>,
        #[arg(long, default_value_t = 1e-8)]
        min: f64,
        #[arg(long, default_value_t = 1e8)]
        max: f64,
        #[arg(long, default_value_t = 161)]
        samples: usize,
    },
    /// Check every pattern: round trip, monotonicity, fp32 exactness.
    Exhaustive {
        #[arg(long, value_parser = numeric::parse_prec)]
        prec: u32,
        /// Exponent sizes; defaults to 0..=7 for 8-bit and 0,1,2 for 16-bit.
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(0..=7))]
        es: Vec<u8>,
    },
    /// Assemble a source file into hex words.
    Asm {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Disassemble a hex word file.
    Disasm {
        input: PathBuf,
        /// Prefix each line with its byte address.
        #[arg(long)]
        addresses: bool,
    },
    /// Run a program (.s or hex words) and print the final state as JSON.
    Run {
        input: PathBuf,
        /// Print one line per retired instruction to stderr.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 100_000_000)]
        max_cycles: u64,
        /// Load address of the program text.
        #[arg(long, value_parser = numeric::parse_hex, default_value = "0")]
        base: u32,
        /// Data segment `ADDR:FILE`; `.hex` files hold hex bytes, others raw bytes.
        #[arg(long)]
        data: Vec<String>,
        /// Initial pcsr value.
        #[arg(long, value_parser = numeric::parse_hex)]
        pcsr: Option<u32>,
    },
    /// Run benchmark kernels and report cycles, throughput and accuracy.
    Bench {
        #[arg(long, value_parser = ["gemm", "gemv", "softmax"])]
        kernel: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "fp32")]
        fmt: Vec<ElemFormat>,
        #[arg(long, value_delimiter = ',', default_value = "unified")]
        mode: Vec<Mode>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Returns whether every check passed.
fn dispatch(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    match cli.cmd {
        Command::Decode { prec, es, pattern } => numeric::decode(g, prec, es, pattern),
        Command::Encode { prec, es, value } => numeric::encode(g, prec, es, value),
        Command::Convert { from, to, pattern } => numeric::convert(g, from, to, pattern),
        Command::Sweep {
            fmt,
            min,
            max,
            samples,
        } => numeric::sweep(g, &fmt, min, max, samples),
        Command::Exhaustive { prec, es } => numeric::exhaustive(g, prec, &es),
        Command::Asm { input, output } => program::asm(&input, output.as_deref()),
        Command::Disasm { input, addresses } => program::disasm(&input, addresses),
        Command::Run {
            input,
            trace,
            max_cycles,
            base,
            data,
            pcsr,
        } => program::run(
            g,
            &program::RunArgs {
                input,
                trace,
                max_cycles,
                base,
                data,
                pcsr,
            },
        ),
        Command::Bench {
            kernel,
            sizes,
            fmt,
            mode,
        } => bench::bench(g, &kernel, &sizes, &fmt, &mode),
    }
}
