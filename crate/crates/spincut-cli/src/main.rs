//! Command-line front end for the spincut toolkit.
//!
//! Exit codes: 0 on pass, 1 on a failed verification, 2 on input errors.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand};

use commands::{
    cmd_analyze, cmd_arf, cmd_flattorus_spectrum, cmd_flattorus_verify, cmd_willmore,
    fixture_bytes, AnalyzeOptions, FixtureKind, FlatTorusOptions, WillmoreInput, WillmoreOptions,
};
use report::{Format, Report};

#[derive(Parser)]
#[command(
    name = "spincut",
    version,
    about = "Spin-structure invariants, spin-cut diameters and Dirac eigenvalue bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Structured => Format::Structured,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline on a mesh file: topology, Arf, spin-cut, bounds
    Analyze(AnalyzeArgs),
    /// Exact Dirac spectrum oracle for flat tori
    Flattorus {
        #[command(subcommand)]
        sub: FlatTorusCommand,
    },
    /// Discrete Willmore energy and the torus bound check
    Willmore(WillmoreArgs),
    /// Generate fixture mesh files
    Fixtures {
        #[command(subcommand)]
        which: FixtureCommand,
    },
    /// Arf invariant of a quadratic form on the standard symplectic space
    Arf(ArfArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Seed for all randomized searches
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Mesh file (native JSON or OFF)
    mesh: String,
    /// Spin structure as q-bits on the canonical homology basis
    #[arg(long, value_parser = parse_bits)]
    spin: Option<Bits>,
    /// 1-to-4 refinement level for distance computations
    #[arg(long, default_value_t = 1)]
    subdivision: usize,
    /// Search effort (candidate cycles per class and Lagrangian variants)
    #[arg(long, default_value_t = 4)]
    budget: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum FlatTorusCommand {
    /// Sorted |lambda| slice below a cutoff
    Spectrum {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Largest |lambda| to report
        #[arg(long)]
        cutoff: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check the torus eigenvalue bound for every k in the scan window
    Verify {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct LatticeArgs {
    /// First lattice vector, e.g. 1,0
    #[arg(long, value_parser = parse_vec2)]
    b1: Vec2,
    /// Second lattice vector, e.g. 0,1
    #[arg(long, value_parser = parse_vec2)]
    b2: Vec2,
    /// Twist bits: 1 means nontrivial along that generator
    #[arg(long, value_parser = parse_eps)]
    eps: Eps,
}

#[derive(Args)]
struct WillmoreArgs {
    /// Mesh file with vertex positions
    mesh: Option<String>,
    /// Torus of revolution instead of a file: major minor nu nv
    #[arg(long, num_args = 4, value_names = ["R", "r", "NU", "NV"])]
    revolution: Option<Vec<String>>,
    /// Spin structure as q-bits on the canonical homology basis
    #[arg(long, value_parser = parse_bits)]
    spin: Option<Bits>,
    /// Refinement level for the spin-cut diameter search
    #[arg(long, default_value_t = 0)]
    subdivision: usize,
    /// Search effort for the spin-cut diameter
    #[arg(long, default_value_t = 2)]
    budget: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum FixtureCommand {
    /// Flat torus over a lattice basis
    GridTorus {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, value_parser = parse_vec2, default_value = "1,0")]
        b1: Vec2,
        #[arg(long, value_parser = parse_vec2, default_value = "0,1")]
        b2: Vec2,
        /// Embed a spin block with these q-bits on the coordinate loops
        #[arg(long, value_parser = parse_eps)]
        spin: Option<Eps>,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Mildly sheared lattice torus
    ShearedTorus {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, value_parser = parse_eps)]
        spin: Option<Eps>,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Two glued tori of genus 2 in total
    Genus2 {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Subdivided icosahedron projected to the unit sphere
    Icosphere {
        #[arg(long, default_value_t = 4)]
        level: usize,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Embedded torus of revolution with its induced spin structure
    Revolution {
        #[arg(long)]
        major: f64,
        #[arg(long)]
        minor: f64,
        #[arg(long, default_value_t = 64)]
        nu: usize,
        #[arg(long, default_value_t = 64)]
        nv: usize,
        #[arg(short, long)]
        output: Option<String>,
    },
}

#[derive(Args)]
struct ArfArgs {
    /// Form values on the standard basis as a bit string, e.g. 0110
    #[arg(long, value_parser = parse_bits)]
    q: Bits,
    #[command(flatten)]
    common: CommonArgs,
}

type Vec2 = [f64; 2];
type Eps = (u8, u8);
type Bits = Vec<u8>;

fn parse_vec2(s: &str) -> Result<Vec2, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected x,y but got {s:?}"));
    }
    let x = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let y = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([x, y])
}

fn parse_eps(s: &str) -> Result<Eps, String> {
    let bits = parse_bits(s)?;
    if bits.len() != 2 {
        return Err(format!("expected two bits but got {s:?}"));
    }
    Ok((bits[0], bits[1]))
}

fn parse_bits(s: &str) -> Result<Bits, String> {
    let cleaned = s.replace(',', "");
    cleaned
        .chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            c => Err(format!("bit strings contain only 0 and 1, found {c:?}")),
        })
        .collect()
}

fn emit(report: Report, format: Format, code: u8) -> std::process::ExitCode {
    print!("{}", report.render(format));
    std::process::ExitCode::from(code)
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(args) => {
            let opts = AnalyzeOptions {
                path: args.mesh,
                spin_bits: args.spin,
                seed: args.common.seed,
                subdivision: args.subdivision,
                budget: args.budget,
            };
            let (report, code) = cmd_analyze(&opts);
            emit(report, args.common.format.into(), code)
        }
        Command::Flattorus { sub } => match sub {
            FlatTorusCommand::Spectrum { lattice, cutoff, common } => {
                let opts = FlatTorusOptions {
                    b1: lattice.b1,
                    b2: lattice.b2,
                    eps: lattice.eps,
                    seed: common.seed,
                };
                let (report, code) = cmd_flattorus_spectrum(&opts, cutoff);
                emit(report, common.format.into(), code)
            }
            FlatTorusCommand::Verify { lattice, common } => {
                let opts = FlatTorusOptions {
                    b1: lattice.b1,
                    b2: lattice.b2,
                    eps: lattice.eps,
                    seed: common.seed,
                };
                let (report, code) = cmd_flattorus_verify(&opts);
                emit(report, common.format.into(), code)
            }
        },
        Command::Willmore(args) => {
            let input = match (&args.revolution, &args.mesh) {
                (Some(rev), _) => {
                    let parse = |i: usize, what: &str| -> Result<f64, String> {
                        rev[i].parse::<f64>().map_err(|e| format!("bad {what}: {e}"))
                    };
                    match (parse(0, "major"), parse(1, "minor"), parse(2, "nu"), parse(3, "nv")) {
                        (Ok(major), Ok(minor), Ok(nu), Ok(nv)) => WillmoreInput::Revolution {
                            major,
                            minor,
                            nu: nu as usize,
                            nv: nv as usize,
                        },
                        _ => {
                            let mut report = Report::new("willmore", args.common.seed);
                            let code = commands::input_error(
                                &mut report,
                                "args",
                                "--revolution takes R r NU NV",
                            );
                            return emit(report, args.common.format.into(), code);
                        }
                    }
                }
                (None, Some(path)) => WillmoreInput::File(path.clone()),
                (None, None) => {
                    let mut report = Report::new("willmore", args.common.seed);
                    let code = commands::input_error(
                        &mut report,
                        "args",
                        "provide a mesh file or --revolution",
                    );
                    return emit(report, args.common.format.into(), code);
                }
            };
            let opts = WillmoreOptions {
                input,
                spin_bits: args.spin,
                seed: args.common.seed,
                subdivision: args.subdivision,
                budget: args.budget,
            };
            let (report, code) = cmd_willmore(&opts);
            emit(report, args.common.format.into(), code)
        }
        Command::Fixtures { which } => {
            let (kind, output) = match which {
                FixtureCommand::GridTorus { n, b1, b2, spin, output } => {
                    (FixtureKind::GridTorus { n, b1, b2, spin }, output)
                }
                FixtureCommand::ShearedTorus { n, spin, output } => {
                    (FixtureKind::ShearedTorus { n, spin }, output)
                }
                FixtureCommand::Genus2 { n, output } => (FixtureKind::Genus2 { n }, output),
                FixtureCommand::Icosphere { level, output } => {
                    (FixtureKind::Icosphere { level }, output)
                }
                FixtureCommand::Revolution { major, minor, nu, nv, output } => {
                    (FixtureKind::Revolution { major, minor, nu, nv }, output)
                }
            };
            match fixture_bytes(&kind) {
                Ok(contents) => match output {
                    Some(path) => {
                        if let Err(e) = std::fs::write(&path, contents) {
                            eprintln!("error: cannot write {path}: {e}");
                            return std::process::ExitCode::from(2);
                        }
                        println!("wrote {path}");
                        std::process::ExitCode::SUCCESS
                    }
                    None => {
                        print!("{contents}");
                        std::process::ExitCode::SUCCESS
                    }
                },
                Err(msg) => {
                    eprintln!("error: {msg}");
                    std::process::ExitCode::from(2)
                }
            }
        }
        Command::Arf(args) => {
            let (report, code) = cmd_arf(&args.q, args.common.seed);
            emit(report, args.common.format.into(), code)
        }
    }
}
