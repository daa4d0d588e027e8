//! The `dim` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{branching_factor, Recurrence};
use crate::error::{usage, Error, Result};
use crate::format::{parse_certificate, parse_graph, write_certificate, write_graph};
use crate::gen::{gen_gnp, gen_planted, gen_regular, with_random_weights};
use crate::graph::{Graph, Weight};
use crate::oracle::{brute_force, verify_detailed, Check};
use crate::solve::{solve_with, Mode, Solution, SolveOptions};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Environment switch for the per-branch elimination checks.
pub const DEBUG_ASSERT_ENV: &str = "DIM_DEBUG_ASSERT";

#[derive(Parser, Debug)]
#[command(
    name = "dim",
    version,
    about = "Exact solver for dominating induced matchings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance; exit 0 if a matching exists, 1 if not.
    Solve {
        #[arg(long, default_value = "decide")]
        mode: Mode,
        /// Write search statistics as JSON.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Print only the certificate lines.
        #[arg(long)]
        cert: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        input: PathBuf,
    },
    /// Check a certificate against a graph.
    Verify { input: PathBuf, cert: PathBuf },
    /// Solve by exhaustive enumeration (at most 24 vertices).
    Oracle {
        #[arg(long, default_value = "decide")]
        mode: Mode,
        input: PathBuf,
    },
    /// Generate a random instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Branching factor of a recurrence, e.g. `16,12,10,6`.
    Factor { decrements: String },
    /// Solve every instance listed in a suite file and print one line each.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value = "decide")]
        mode: Mode,
    },
}

#[derive(Args, Debug)]
struct GenCommon {
    #[arg(long)]
    seed: u64,
    /// Attach uniform integer weights from the range `LO,HI`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    weights: Option<(i64, i64)>,
    /// Output file; standard output if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Yes-instance built around a hidden matching.
    Planted {
        #[arg(long)]
        n: usize,
        /// Vertices on the matched side (even); defaults to about 2n/3.
        #[arg(long)]
        matched: Option<usize>,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        common: GenCommon,
    },
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo = lo.trim().parse().map_err(|_| format!("bad bound {lo:?}"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad bound {hi:?}"))?;
    Ok((lo, hi))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
        }
    };
    let mut out = std::io::stdout().lock();
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("dim: {e}");
            EXIT_ERROR
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn debug_assertions_requested() -> bool {
    std::env::var(DEBUG_ASSERT_ENV).is_ok_and(|v| v == "1")
}

fn print_answer(
    out: &mut impl Write,
    sol: Option<&Solution>,
    weighted: bool,
    cert_only: bool,
) -> Result<i32> {
    match sol {
        Some(sol) => {
            if !cert_only {
                writeln!(out, "YES")?;
            }
            write!(out, "{}", write_certificate(sol, weighted))?;
            Ok(EXIT_YES)
        }
        None => {
            if !cert_only {
                writeln!(out, "NO")?;
            }
            Ok(EXIT_NO)
        }
    }
}

fn dispatch(cmd: Command, out: &mut impl Write) -> Result<i32> {
    match cmd {
        Command::Solve {
            mode,
            stats,
            cert,
            threads,
            input,
        } => {
            let g = read_graph(&input)?;
            let opts = SolveOptions {
                mode,
                threads: threads.max(1),
                check_bounds: debug_assertions_requested(),
                ..SolveOptions::default()
            };
            let (sol, st) = solve_with(&g, &opts)?;
            if let Some(path) = stats {
                fs::write(&path, st.to_json())?;
            }
            for v in &st.violations {
                eprintln!(
                    "dim: elimination bound missed at case {} (vertex {}, {}): {} < {}",
                    v.step,
                    v.vertex + 1,
                    v.label,
                    v.eliminated,
                    v.required
                );
            }
            print_answer(out, sol.as_ref(), mode != Mode::Decide, cert)
        }
        Command::Verify { input, cert } => {
            let g = read_graph(&input)?;
            let text = fs::read_to_string(&cert)
                .map_err(|e| Error::Input(format!("{}: {e}", cert.display())))?;
            let c = parse_certificate(&text, g.capacity())?;
            let mut check = verify_detailed(&g, &c.edges)?;
            if let (Check::Accept, Some(total)) = (&check, c.total) {
                let actual: Weight = c.edges.iter().map(|e| g.weight(e.lo(), e.hi())).sum();
                if actual != total {
                    check = Check::Reject(format!("stated total {total} but edges weigh {actual}"));
                }
            }
            match check {
                Check::Accept => {
                    writeln!(out, "ACCEPT")?;
                    Ok(EXIT_YES)
                }
                Check::Reject(reason) => {
                    writeln!(out, "REJECT {reason}")?;
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Oracle { mode, input } => {
            let g = read_graph(&input)?;
            if mode != Mode::Decide && !g.is_weighted() {
                return Err(Error::Input(format!("mode {mode} needs edge weights")));
            }
            let sol = brute_force(&g, mode)?;
            print_answer(out, sol.as_ref(), mode != Mode::Decide, false)
        }
        Command::Gen { kind } => generate(kind, out),
        Command::Factor { decrements } => {
            let r: Recurrence = decrements.parse()?;
            writeln!(out, "{:.4}", branching_factor(&r))?;
            Ok(EXIT_YES)
        }
        Command::Bench { suite, mode } => bench(&suite, mode, out),
    }
}

fn generate(kind: GenKind, out: &mut impl Write) -> Result<i32> {
    let (g, mut comments, common) = match kind {
        GenKind::Planted {
            n,
            matched,
            p,
            common,
        } => {
            let matched = matched.unwrap_or(2 * n / 3 / 2 * 2);
            if matched > n {
                return usage(format!("matched side {matched} exceeds n = {n}"));
            }
            let planted = gen_planted(matched, n - matched, p, common.seed)?;
            let comments = vec![format!(
                "planted matched={matched} independent={} p={p} seed={}",
                n - matched,
                common.seed
            )]
            .into_iter()
            .chain(
                planted
                    .certificate
                    .iter()
                    .map(|e| format!("planted m {} {}", e.lo() + 1, e.hi() + 1)),
            )
            .collect();
            (planted.graph, comments, common)
        }
        GenKind::Gnp { n, p, common } => {
            let c = vec![format!("gnp n={n} p={p} seed={}", common.seed)];
            (gen_gnp(n, p, common.seed)?, c, common)
        }
        GenKind::Regular { n, d, common } => {
            let c = vec![format!("regular n={n} d={d} seed={}", common.seed)];
            (gen_regular(n, d, common.seed)?, c, common)
        }
    };
    let g = match common.weights {
        Some((lo, hi)) => {
            comments.push(format!("weights {lo},{hi}"));
            with_random_weights(&g, lo, hi, common.seed)?
        }
        None => g,
    };
    let text = write_graph(&g, &comments);
    match common.output {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_YES)
}

/// Reads one suite entry: a file path, or `gnp n p seed`,
/// `planted matched independent p seed`, `regular n d seed`.
fn suite_graph(line: &str, base: &Path) -> Result<Graph> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let num = |t: &str| -> Result<u64> {
        t.parse()
            .map_err(|_| Error::Input(format!("bad number {t:?} in suite line {line:?}")))
    };
    let prob = |t: &str| -> Result<f64> {
        t.parse()
            .map_err(|_| Error::Input(format!("bad probability {t:?} in suite line {line:?}")))
    };
    match toks.as_slice() {
        ["gnp", n, p, seed] => gen_gnp(num(n)? as usize, prob(p)?, num(seed)?),
        ["planted", m, i, p, seed] => {
            Ok(gen_planted(num(m)? as usize, num(i)? as usize, prob(p)?, num(seed)?)?.graph)
        }
        ["regular", n, d, seed] => gen_regular(num(n)? as usize, num(d)? as usize, num(seed)?),
        [path] => read_graph(&base.join(path)),
        _ => Err(Error::Input(format!("unrecognized suite line {line:?}"))),
    }
}

fn bench(suite: &Path, mode: Mode, out: &mut impl Write) -> Result<i32> {
    let text =
        fs::read_to_string(suite).map_err(|e| Error::Input(format!("{}: {e}", suite.display())))?;
    let base = suite.parent().unwrap_or(Path::new("."));
    writeln!(out, "instance\tn\tm\tanswer\tnodes\tleaves\tms")?;
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut g = suite_graph(line, base)?;
        if mode != Mode::Decide && !g.is_weighted() {
            g = with_random_weights(&g, -10, 10, 0)?;
        }
        let opts = SolveOptions {
            mode,
            check_bounds: debug_assertions_requested(),
            ..SolveOptions::default()
        };
        let (sol, st) = solve_with(&g, &opts)?;
        let answer = match &sol {
            None => "NO".to_string(),
            Some(_) if mode == Mode::Decide => "YES".to_string(),
            Some(s) => format!("YES:{}", s.total_weight),
        };
        writeln!(
            out,
            "{line}\t{}\t{}\t{answer}\t{}\t{}\t{:.1}",
            g.num_vertices(),
            g.num_edges(),
            st.nodes,
            st.leaves,
            st.wall_time_ms
        )?;
    }
    Ok(EXIT_YES)
}
