use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use aitbench::algostats::{
    antistochasticity, csoph, desc_profile, equivalences_report, soph, soph_free, soph_pair_report, survey,
    theta_profiles,
};
use aitbench::complexity::{bdepth, chain_rule_report, depth_pair_report, k_of, kt_of, time_profile};
use aitbench::enumeration::{badger, busy_beaver, omega_approx, sweep, Budget, HaltingTable, RowStatus};
use aitbench::halting_info::{
    build_gamma, hmd, late_halters_report, patch_advice, reach_by_badger, reach_curve, reassemble, StepFunction,
};
use aitbench::lab::{write_atomically, Lab};
use aitbench::machine::U0;
use aitbench::profile::Profile;
use aitbench::report::{write_generators, write_series, write_table, Format, Report};
use aitbench::{BitString, Certainty, Error};

const DEFAULT_MAX_LEN: usize = 14;
const DEFAULT_MAX_STEPS: u64 = 100_000;

/// Exhaustive enumeration lab for the U0 prefix machine.
#[derive(Parser, Debug)]
#[command(name = "aitbench", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Longest program length L to enumerate.
    #[arg(long, global = true)]
    max_len: Option<usize>,
    /// Step cap J per program.
    #[arg(long, global = true)]
    max_steps: Option<u64>,
    /// Auxiliary string z ("-" for the empty string).
    #[arg(long, global = true)]
    cond: Option<String>,
    /// Table file for z, or a directory holding one file per z.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Csv)]
    format: Fmt,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Sharp-finish drop threshold.
    #[arg(long, global = true, default_value_t = 1)]
    eps: u32,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Fmt {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ProfileKind {
    Time,
    Desc,
    Theta,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ReportKind {
    Chainrule,
    Pairs,
    Equivalences,
    Latehalters,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build (or extend) the halting table for z.
    Sweep,
    /// Ω^z lower bound, certified bits, busy beaver and badger values.
    Omega,
    /// K(x|z) and the time-bounded K^{B(i)}(x|z).
    K {
        #[arg(long)]
        x: String,
    },
    /// Generators of 𝓛, Λ or the paired Θ̃/Θ̂ series.
    Profile {
        #[arg(value_enum)]
        kind: ProfileKind,
        #[arg(long)]
        x: String,
    },
    /// Sophistication variants and antistochasticity of x.
    Soph {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 0)]
        c: u32,
    },
    /// bdepth_c(x|z) by definition and from the depth profile.
    Depth {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 0)]
        c: u32,
    },
    /// The reach curve R_z.
    Reach {
        #[arg(long)]
        i_max: Option<usize>,
        /// Use the clock route instead of the definition.
        #[arg(long)]
        badger: bool,
    },
    /// H_z(i) = R_z(i) − i.
    Hmd {
        #[arg(long)]
        i_max: Option<usize>,
    },
    /// γ for a step function given as "pos:value,pos:value,...".
    Gamma {
        #[arg(long)]
        h: String,
        /// Also emit δ and the reassembled prefix of length i + h(i).
        #[arg(long)]
        i: Option<usize>,
    },
    /// Chain-rule, pair-law, equivalence or late-halter tables.
    Report {
        #[arg(value_enum)]
        kind: ReportKind,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Every string of length n, and the splits of the most antistochastic one.
    Survey {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Failure::Usage(format!("cannot start {n} workers: {e}"))),
        },
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget_insufficiency() { 2 } else { 1 })
        }
    }
}

fn bits(s: &str) -> Result<BitString, Failure> {
    BitString::parse_or_dash(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn requested_budget(cli: &Cli, fallback: Budget) -> Result<Budget, Failure> {
    Budget::new(
        cli.max_len.unwrap_or(fallback.max_len),
        cli.max_steps.unwrap_or(fallback.max_jsteps),
    )
    .map_err(|e| Failure::Usage(e.to_string()))
}

fn is_dir_arg(p: &Path) -> bool {
    p.is_dir() || p.as_os_str().to_string_lossy().ends_with('/')
}

/// Sets up the lab for this run. A `--cache` file holds the table for z and
/// fixes the budget unless `sweep` is asked to extend it; the other tables a
/// command needs go next to it.
fn open_lab(cli: &Cli, z: &BitString) -> Result<Lab, Failure> {
    let defaults = Budget { max_len: DEFAULT_MAX_LEN, max_jsteps: DEFAULT_MAX_STEPS };
    let Some(path) = &cli.cache else {
        return Ok(Lab::new(requested_budget(cli, defaults)?));
    };
    if is_dir_arg(path) {
        return Ok(Lab::new(requested_budget(cli, defaults)?).with_cache_dir(path));
    }
    let machine = U0::new();
    let table = if path.exists() {
        let old = HaltingTable::read_from(BufReader::new(fs::File::open(path)?))?;
        if old.z() != z {
            return Err(Failure::Usage(format!(
                "{} holds the table for z={}, not z={}",
                path.display(),
                old.z().to_string_or_dash(),
                z.to_string_or_dash()
            )));
        }
        let budget = requested_budget(cli, old.budget())?;
        if budget == old.budget() {
            old
        } else if matches!(cli.cmd, Cmd::Sweep) {
            let t = sweep(&machine, z, budget, Some(&old))?;
            write_atomically(path, &t)?;
            t
        } else {
            return Err(Failure::Usage(format!(
                "{} was swept with L={} J={}; run `sweep` to extend it",
                path.display(),
                old.budget().max_len,
                old.budget().max_jsteps
            )));
        }
    } else {
        let t = sweep(&machine, z, requested_budget(cli, defaults)?, None)?;
        write_atomically(path, &t)?;
        t
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let lab = Lab::new(table.budget()).with_cache_dir(dir);
    lab.insert(table)?;
    Ok(lab)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let z = match &cli.cond {
        Some(s) => bits(s)?,
        None => BitString::new(),
    };
    let format = match cli.format {
        Fmt::Csv => Format::Csv,
        Fmt::Json => Format::Json,
    };
    let lab = open_lab(cli, &z)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();

    match &cli.cmd {
        Cmd::Sweep => {
            let t = lab.table(&z)?;
            sweep_summary(&t).write(&mut out, format)?;
        }
        Cmd::Omega => {
            let t = lab.table(&z)?;
            omega_report(&t)?.write(&mut out, format)?;
        }
        Cmd::K { x } => {
            let x = bits(x)?;
            let t_z = lab.table(&z)?;
            let t_eps = lab.eps()?;
            let sp = k_of(&x, &t_z)?;
            let mut r = Report::new("k");
            r.push(&x, Some(&z), "K", sp.k, sp.certainty);
            r.push(&x, Some(&z), "program", sp.program.to_string_or_dash(), sp.certainty);
            r.push(&x, Some(&z), "steps", sp.steps, Certainty::Exact);
            for i in 0..=t_eps.max_len() {
                if let Ok(m) = kt_of(&x, i, &t_z, &t_eps) {
                    r.push(&x, Some(&z), format!("K^B({i})"), m.value, m.certainty);
                }
            }
            r.write(&mut out, format)?;
        }
        Cmd::Profile { kind, x } => {
            let x = bits(x)?;
            let t_z = lab.table(&z)?;
            let t_eps = lab.eps()?;
            match kind {
                ProfileKind::Time => {
                    let tp = time_profile(&x, &t_z, &t_eps)?;
                    write_generators(&mut out, format, &tp.profile, &tp.certainties)?;
                }
                ProfileKind::Desc => {
                    let dp = desc_profile(&x, &t_z)?;
                    let certs: Vec<Certainty> = dp
                        .profile
                        .generators()
                        .iter()
                        .map(|&(i, psi)| {
                            dp.models
                                .iter()
                                .filter(|m| (m.k_model.value as u32, m.two_part_length() as u32) == (i, psi))
                                .map(|m| m.k_model.certainty)
                                .min()
                                .unwrap_or(Certainty::UpperBound)
                        })
                        .collect();
                    write_generators(&mut out, format, &dp.profile, &certs)?;
                }
                ProfileKind::Theta => {
                    let th = theta_profiles(&x, &t_z, &t_eps)?;
                    write_theta_pairs(&mut out, format, &th.tilde, &th.hat, th.tilde_certainty, th.hat_certainty)?;
                }
            }
        }
        Cmd::Soph { x, c } => {
            let x = bits(x)?;
            let t_z = lab.table(&z)?;
            let t_eps = lab.eps()?;
            let mut r = Report::new("soph");
            match soph(&x, *c, &t_z) {
                Ok(m) => r.push(&x, Some(&z), format!("soph_{c}"), m.value, m.certainty),
                Err(Error::NoSufficientModel { .. }) => {
                    r.push(&x, Some(&z), format!("soph_{c}"), "none", Certainty::UpperBound)
                }
                Err(e) => return Err(e.into()),
            }
            let cs = csoph(&x, &t_z)?;
            r.push(&x, Some(&z), "csoph", cs.value, cs.certainty);
            let sf = soph_free(&x, &t_z, &t_eps)?;
            r.push(&x, Some(&z), "soph_free", sf.value, sf.certainty);
            let a = antistochasticity(&x, &t_z)?;
            r.push(&x, Some(&z), "antistochasticity", a.value, a.certainty);
            r.write(&mut out, format)?;
        }
        Cmd::Depth { x, c } => {
            let x = bits(x)?;
            let t_z = lab.table(&z)?;
            let t_eps = lab.eps()?;
            let by_def = bdepth(&x, *c as usize, &t_z, &t_eps)?;
            let tp = time_profile(&x, &t_z, &t_eps)?;
            let mut r = Report::new("depth");
            r.push(&x, Some(&z), format!("bdepth_{c}"), by_def.value, by_def.certainty);
            let graph = tp.bdepth(*c).map_or("inf".to_string(), |v| v.to_string());
            r.push(&x, Some(&z), format!("bdepth_{c}(graph)"), graph, tp.shortest.certainty);
            r.push(&x, Some(&z), "K", tp.shortest.k, tp.shortest.certainty);
            r.push(&x, Some(&z), "steps(x*)", tp.shortest.steps, Certainty::Exact);
            r.write(&mut out, format)?;
        }
        Cmd::Reach { i_max, badger } => {
            let t_z = lab.table(&z)?;
            let t_eps = lab.eps()?;
            let i_max = i_max.unwrap_or(t_eps.max_len());
            let curve = if *badger {
                reach_by_badger(&t_z, &t_eps, i_max)?
            } else {
                reach_curve(&t_z, &t_eps, i_max)?
            };
            let rows: Vec<_> = curve
                .points
                .iter()
                .enumerate()
                .map(|(i, m)| (i as u32, Some(m.value), m.certainty))
                .collect();
            write_series(&mut out, format, ["i", "r"], &rows)?;
        }
        Cmd::Hmd { i_max } => {
            let t_z = lab.table(&z)?;
            let t_eps = lab.eps()?;
            let i_max = i_max.unwrap_or(t_eps.max_len());
            let rows: Vec<Vec<String>> = hmd(&t_z, &t_eps, i_max)?
                .iter()
                .enumerate()
                .map(|(i, m)| vec![i.to_string(), m.value.to_string(), m.certainty.to_string()])
                .collect();
            write_table(&mut out, format, &["i", "h", "certainty"], &rows)?;
        }
        Cmd::Gamma { h, i } => {
            let h = parse_step_function(h)?;
            let t_eps = lab.eps()?;
            let gamma = build_gamma(&h, &t_eps)?;
            let empty = BitString::new();
            let mut r = Report::new("gamma");
            r.push(&empty, None, "gamma", gamma.to_string_or_dash(), Certainty::Exact);
            if let Some(i) = i {
                let delta = patch_advice(&h, *i, &t_eps)?;
                let n = i + h.value(*i);
                let whole = reassemble(&h, &gamma, &delta, n)?;
                let matches = whole == t_eps.certified_prefix().prefix(n);
                r.push(&empty, None, "delta", delta.to_string_or_dash(), Certainty::Exact);
                r.push(&empty, None, "reassembled", whole.to_string_or_dash(), Certainty::Exact);
                r.push(&empty, None, "matches_certified_prefix", matches, Certainty::Exact);
            }
            r.write(&mut out, format)?;
        }
        Cmd::Report { kind, n } => {
            let r = match kind {
                ReportKind::Chainrule => chain_rule_report(*n, &lab)?,
                ReportKind::Pairs => {
                    let mut r = depth_pair_report(*n, cli.eps, &lab)?;
                    r.extend(soph_pair_report(*n, cli.eps, &lab)?);
                    r
                }
                ReportKind::Equivalences => equivalences_report(*n, &lab)?,
                ReportKind::Latehalters => {
                    let t = lab.table(&z)?;
                    late_halters_report(&t, 0..=t.max_len().saturating_sub(1))?
                }
            };
            r.write(&mut out, format)?;
        }
        Cmd::Survey { n } => {
            survey(*n, &lab)?.write(&mut out, format)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn sweep_summary(t: &HaltingTable) -> Report {
    let (mut halted, mut aborted, mut unknown) = (0usize, 0usize, 0usize);
    for (_, row) in t.rows() {
        match row {
            RowStatus::Halted { .. } => halted += 1,
            RowStatus::Aborted => aborted += 1,
            RowStatus::Unknown { .. } => unknown += 1,
        }
    }
    let z = t.z().clone();
    let cert = Certainty::exact_if(t.is_exact(), Certainty::LowerBound);
    let mut r = Report::new("sweep");
    r.push(&z, None, "machine", t.machine_version(), Certainty::Exact);
    r.push(&z, None, "max_len", t.budget().max_len, Certainty::Exact);
    r.push(&z, None, "max_steps", t.budget().max_jsteps, Certainty::Exact);
    r.push(&z, None, "halted", halted, cert);
    r.push(&z, None, "aborted", aborted, Certainty::Exact);
    r.push(&z, None, "unknown", unknown, Certainty::Exact);
    r
}

fn omega_report(t: &HaltingTable) -> Result<Report, Failure> {
    let z = t.z().clone();
    let o = omega_approx(t);
    let mut r = Report::new("omega");
    r.push(&z, None, "omega", &o.value, o.certainty);
    r.push(&z, None, "omega_upper", t.omega_upper(), Certainty::UpperBound);
    r.push(&z, None, "unresolved_mass", &o.unresolved_mass, Certainty::Exact);
    r.push(&z, None, "stabilized_bits", o.stabilized_bits, Certainty::Exact);
    r.push(&z, None, "certified_prefix", t.certified_prefix().to_string_or_dash(), Certainty::Exact);
    for n in 0..=t.max_len() {
        let b = busy_beaver(t, n)?;
        r.push(&z, None, format!("B({n})"), b.value, b.certainty);
    }
    for i in 0..=o.stabilized_bits {
        let j = badger(t, i)?;
        r.push(&z, None, format!("badger({i})"), j.value, j.certainty);
    }
    Ok(r)
}

/// One row per program length between the lowest and highest generator:
/// the least clock reading reaching that length on each clock.
fn write_theta_pairs(
    out: &mut impl Write,
    format: Format,
    tilde: &Profile,
    hat: &Profile,
    tilde_cert: Certainty,
    hat_cert: Certainty,
) -> Result<(), Failure> {
    let heights = tilde.generators().iter().chain(hat.generators()).map(|g| g.1);
    let (lo, hi) = heights.fold((u32::MAX, 0), |(lo, hi), h| (lo.min(h), hi.max(h)));
    let show = |v: Option<u32>| v.map_or("inf".to_string(), |v| v.to_string());
    let rows: Vec<Vec<String>> = (lo..=hi)
        .map(|len| {
            vec![
                len.to_string(),
                show(tilde.i_of(len)),
                show(hat.i_of(len)),
                tilde_cert.to_string(),
                hat_cert.to_string(),
            ]
        })
        .collect();
    write_table(
        out,
        format,
        &["length", "theta_tilde", "theta_hat", "certainty_tilde", "certainty_hat"],
        &rows,
    )?;
    Ok(())
}

fn parse_step_function(s: &str) -> Result<StepFunction, Failure> {
    let mut steps = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (a, v) = part
            .split_once(':')
            .ok_or_else(|| Failure::Usage(format!("step `{part}` is not pos:value")))?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| Failure::Usage(format!("bad number `{t}`")));
        steps.push((num(a)?, num(v)?));
    }
    StepFunction::new(steps).map_err(|e| Failure::Usage(e.to_string()))
}
