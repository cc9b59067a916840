//! Dovetailed sweeps over all programs up to a length bound, the halting
//! tables they produce, and everything read off those tables: Ω
//! approximations with stabilization certificates, busy beaver values, the
//! busy badger and the Ω clocks.
//!
//! Schedule: at j-step `j` every program of length `≤ min(j, L)` has been run
//! for `j` steps. A program `p` therefore joins at j-step `|p|` and is first
//! seen halted at j-step `max(|p|, rt(p))`. Because runs are deterministic and
//! budgets only grow, one run of each program with budget `J` determines its
//! whole history in the schedule; the sweep uses that and the [`Dovetail`]
//! replays the schedule literally.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certainty::{Certainty, Measured};
use crate::encoding::{BitString, Dyadic};
use crate::error::{Error, Result};
use crate::machine::{Execution, ExecutionResult, PrefixMachine};

/// Largest supported program length bound.
pub const MAX_SUPPORTED_LEN: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    /// L: programs of length up to this many bits are enumerated.
    pub max_len: usize,
    /// J: the last j-step of the schedule, and so every program's step cap.
    pub max_jsteps: u64,
}

impl Budget {
    pub fn new(max_len: usize, max_jsteps: u64) -> Result<Self> {
        if max_len < 3 {
            return Err(Error::InvalidBudget(format!("L must be at least 3, got {max_len}")));
        }
        if max_len > MAX_SUPPORTED_LEN {
            return Err(Error::InvalidBudget(format!(
                "L must be at most {MAX_SUPPORTED_LEN}, got {max_len}"
            )));
        }
        if max_jsteps < 1 {
            return Err(Error::InvalidBudget("J must be at least 1".into()));
        }
        Ok(Budget { max_len, max_jsteps })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Halted { steps: u64, output: BitString },
    Aborted,
    Unknown { steps_spent: u64 },
}

/// First j-step at which a program of length `len` with running time `steps`
/// is seen halted.
pub fn halt_jstep(len: usize, steps: u64) -> u64 {
    steps.max(len as u64)
}

/// The persisted result of a sweep for one machine and auxiliary string.
#[derive(Clone, Debug)]
pub struct HaltingTable {
    machine_version: String,
    z: BitString,
    budget: Budget,
    rows: Vec<RowStatus>,
    // derived
    history: Vec<(u64, Dyadic)>,
    unresolved_mass: Dyadic,
    first_unknown_len: Option<usize>,
    busy_beaver: Vec<u64>,
    clock: Vec<(u64, usize)>,
    by_output: HashMap<BitString, Vec<u64>>,
}

impl PartialEq for HaltingTable {
    fn eq(&self, other: &Self) -> bool {
        self.machine_version == other.machine_version
            && self.z == other.z
            && self.budget == other.budget
            && self.rows == other.rows
    }
}

impl HaltingTable {
    pub fn from_rows(
        machine_version: &str,
        z: BitString,
        budget: Budget,
        rows: Vec<RowStatus>,
    ) -> Result<Self> {
        let l = budget.max_len;
        if rows.len() as u64 != (1u64 << (l + 1)) - 1 {
            return Err(Error::Parse(format!(
                "expected {} rows for L={l}, found {}",
                (1u64 << (l + 1)) - 1,
                rows.len()
            )));
        }

        let mut halts: Vec<(u64, usize)> = Vec::new();
        let mut busy_beaver = vec![0u64; l + 1];
        let mut first_unknown_len = None;
        let mut by_output: HashMap<BitString, Vec<u64>> = HashMap::new();
        for (idx, row) in rows.iter().enumerate() {
            let len = BitString::from_index(idx as u64).len();
            match row {
                RowStatus::Halted { steps, output } => {
                    halts.push((halt_jstep(len, *steps), len));
                    busy_beaver[len] = busy_beaver[len].max(*steps);
                    by_output.entry(output.clone()).or_default().push(idx as u64);
                }
                RowStatus::Unknown { .. } => {
                    if first_unknown_len.is_none() {
                        first_unknown_len = Some(len);
                    }
                }
                RowStatus::Aborted => {}
            }
        }
        for n in 1..=l {
            busy_beaver[n] = busy_beaver[n].max(busy_beaver[n - 1]);
        }

        halts.sort_unstable();
        let mut history: Vec<(u64, Dyadic)> = Vec::new();
        let mut m = Dyadic::zero();
        for (j, len) in halts {
            m += &Dyadic::mass(len);
            match history.last_mut() {
                Some((last_j, last_m)) if *last_j == j => *last_m = m.clone(),
                _ => history.push((j, m.clone())),
            }
        }

        let unresolved_mass = unknown_antichain_mass(&rows, l);
        let mut table = HaltingTable {
            machine_version: machine_version.to_string(),
            z,
            budget,
            rows,
            history,
            unresolved_mass,
            first_unknown_len,
            busy_beaver,
            clock: Vec::new(),
            by_output,
        };
        let mut clock = vec![(1, table.stable_bits(&table.m_at(1)))];
        for (j, m) in &table.history {
            if *j > 1 {
                clock.push((*j, table.stable_bits(m)));
            }
        }
        table.clock = clock;
        Ok(table)
    }

    pub fn machine_version(&self) -> &str {
        &self.machine_version
    }

    pub fn z(&self) -> &BitString {
        &self.z
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn max_len(&self) -> usize {
        self.budget.max_len
    }

    pub fn row(&self, p: &BitString) -> Option<&RowStatus> {
        if p.len() > self.budget.max_len {
            return None;
        }
        self.rows.get(p.index() as usize)
    }

    pub fn rows(&self) -> impl Iterator<Item = (BitString, &RowStatus)> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| (BitString::from_index(i as u64), r))
    }

    /// Halted programs in length-lex order: (program, steps, output).
    pub fn halted(&self) -> impl Iterator<Item = (BitString, u64, &BitString)> {
        self.rows().filter_map(|(p, r)| match r {
            RowStatus::Halted { steps, output } => Some((p, *steps, output)),
            _ => None,
        })
    }

    /// Halted programs with output `x`, in length-lex order.
    pub fn producers(&self, x: &BitString) -> Vec<(BitString, u64)> {
        self.by_output
            .get(x)
            .map(|idxs| {
                idxs.iter()
                    .map(|&i| {
                        let steps = match &self.rows[i as usize] {
                            RowStatus::Halted { steps, .. } => *steps,
                            _ => unreachable!(),
                        };
                        (BitString::from_index(i), steps)
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Distinct outputs of halted programs.
    pub fn outputs(&self) -> impl Iterator<Item = &BitString> {
        self.by_output.keys()
    }

    /// The halted set restricted to programs of length at most `n`.
    pub fn halted_set(&self, n: usize) -> HaltedSet {
        let programs = self
            .halted()
            .filter(|(p, _, _)| p.len() <= n)
            .map(|(p, s, o)| (p, (s, o.clone())))
            .collect();
        HaltedSet { max_len: n, programs }
    }

    pub fn unknown_count(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r, RowStatus::Unknown { .. }))
            .count()
    }

    /// True when no Unknown row remains.
    pub fn is_exact(&self) -> bool {
        self.first_unknown_len.is_none()
    }

    /// True when no Unknown row of length at most `n` remains.
    pub fn is_exact_up_to(&self, n: usize) -> bool {
        self.first_unknown_len.is_none_or(|l| l > n)
    }

    pub fn first_unknown_len(&self) -> Option<usize> {
        self.first_unknown_len
    }

    /// Change points `(j, M(j))` of the dovetailer's running sum.
    pub fn m_history(&self) -> &[(u64, Dyadic)] {
        &self.history
    }

    /// M(j): total mass of programs seen halted by j-step `j`.
    pub fn m_at(&self, j: u64) -> Dyadic {
        let k = self.history.partition_point(|(jj, _)| *jj <= j);
        if k == 0 {
            Dyadic::zero()
        } else {
            self.history[k - 1].1.clone()
        }
    }

    pub fn m_final(&self) -> Dyadic {
        self.history.last().map(|(_, m)| m.clone()).unwrap_or_else(Dyadic::zero)
    }

    /// Largest mass an antichain of Unknown rows could still add.
    pub fn unresolved_mass(&self) -> &Dyadic {
        &self.unresolved_mass
    }

    /// Upper bound on the L-restricted Ω.
    pub fn omega_upper(&self) -> Dyadic {
        &self.m_final() + &self.unresolved_mass
    }

    /// Number of leading bits of `m` (at most L) that cannot change any more:
    /// the largest `i` with `⌊m·2^i⌋ = ⌊upper·2^i⌋`.
    pub fn stable_bits(&self, m: &Dyadic) -> usize {
        let upper = self.omega_upper();
        (0..=self.budget.max_len as u32)
            .take_while(|&i| upper.floor_scaled(i) == m.floor_scaled(i))
            .count()
            .saturating_sub(1)
    }

    /// Certified bits of the L-restricted Ω.
    pub fn certified_bits(&self) -> usize {
        self.stable_bits(&self.m_final())
    }

    /// Certified prefix of the L-restricted Ω.
    pub fn certified_prefix(&self) -> BitString {
        self.m_final().prefix_bits(self.certified_bits() as u32)
    }

    /// Stabilized bits of M at each change point of the schedule, starting
    /// with j-step 1.
    pub fn clock(&self) -> &[(u64, usize)] {
        &self.clock
    }

    /// Stabilized bits of M(j).
    pub fn stable_bits_at(&self, j: u64) -> usize {
        let k = self.clock.partition_point(|(jj, _)| *jj <= j);
        if k == 0 {
            0
        } else {
            self.clock[k - 1].1
        }
    }

    fn certainty_of_clock(&self) -> Certainty {
        Certainty::exact_if(self.is_exact(), Certainty::UpperBound)
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        let mut buf = String::new();
        writeln!(
            buf,
            "aitbench-table v1 machine={} z={} L={} J={}",
            self.machine_version,
            self.z.to_string_or_dash(),
            self.budget.max_len,
            self.budget.max_jsteps
        )
        .unwrap();
        for (p, row) in self.rows() {
            let p = p.to_string_or_dash();
            match row {
                RowStatus::Halted { steps, output } => {
                    writeln!(buf, "{p} H {steps} {}", output.to_string_or_dash()).unwrap()
                }
                RowStatus::Aborted => writeln!(buf, "{p} A").unwrap(),
                RowStatus::Unknown { steps_spent } => writeln!(buf, "{p} U {steps_spent}").unwrap(),
            }
        }
        for (j, m) in &self.history {
            writeln!(buf, "M {j} {m}").unwrap();
        }
        w.write_all(buf.as_bytes())?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("ascii")
    }

    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty table file".into()))??;
        let (version, z, budget) = parse_header(&header)?;
        let n_rows = (1u64 << (budget.max_len + 1)) - 1;
        let mut rows = Vec::with_capacity(n_rows as usize);
        let mut history = Vec::new();
        for (k, line) in lines.enumerate() {
            let line = line?;
            let bad = || Error::Parse(format!("bad table line {}: {line:?}", k + 2));
            let fields: Vec<&str> = line.split(' ').collect();
            if fields[0] == "M" {
                if fields.len() != 3 {
                    return Err(bad());
                }
                let j: u64 = fields[1].parse().map_err(|_| bad())?;
                let m: Dyadic = fields[2].parse()?;
                history.push((j, m));
                continue;
            }
            if !history.is_empty() || fields.len() < 2 {
                return Err(bad());
            }
            let p = BitString::parse_or_dash(fields[0])?;
            if p.index() != rows.len() as u64 {
                return Err(bad());
            }
            let row = match (fields[1], fields.len()) {
                ("H", 4) => RowStatus::Halted {
                    steps: fields[2].parse().map_err(|_| bad())?,
                    output: BitString::parse_or_dash(fields[3])?,
                },
                ("A", 2) => RowStatus::Aborted,
                ("U", 3) => RowStatus::Unknown {
                    steps_spent: fields[2].parse().map_err(|_| bad())?,
                },
                _ => return Err(bad()),
            };
            rows.push(row);
        }
        let table = HaltingTable::from_rows(&version, z, budget, rows)?;
        if table.history != history {
            return Err(Error::Parse("M history does not match the rows".into()));
        }
        Ok(table)
    }

    pub fn parse(text: &str) -> Result<Self> {
        HaltingTable::read_from(text.as_bytes())
    }
}

fn parse_header(line: &str) -> Result<(String, BitString, Budget)> {
    let bad = || Error::Parse(format!("bad table header: {line:?}"));
    let rest = line.strip_prefix("aitbench-table v1 ").ok_or_else(bad)?;
    let mut version = None;
    let mut z = None;
    let mut l = None;
    let mut j = None;
    for field in rest.split(' ') {
        let (key, value) = field.split_once('=').ok_or_else(bad)?;
        match key {
            "machine" => version = Some(value.to_string()),
            "z" => z = Some(BitString::parse_or_dash(value)?),
            "L" => l = Some(value.parse::<usize>().map_err(|_| bad())?),
            "J" => j = Some(value.parse::<u64>().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    let budget = Budget::new(l.ok_or_else(bad)?, j.ok_or_else(bad)?)?;
    Ok((version.ok_or_else(bad)?, z.ok_or_else(bad)?, budget))
}

/// Mass of the heaviest prefix-free subset of Unknown rows: the most that
/// programs still running could add to the sum.
fn unknown_antichain_mass(rows: &[RowStatus], l: usize) -> Dyadic {
    // best[idx] in units of 2^-L
    let mut best = vec![0u64; rows.len()];
    for len in (0..=l).rev() {
        let start = (1usize << len) - 1;
        for idx in start..start + (1usize << len) {
            let own = match rows[idx] {
                RowStatus::Unknown { .. } => 1u64 << (l - len),
                _ => 0,
            };
            let children = if len < l {
                best[2 * idx + 1] + best[2 * idx + 2]
            } else {
                0
            };
            best[idx] = own.max(children);
        }
    }
    Dyadic::from_u64(best[0], l as u32)
}

/// What one program's run tells about its extensions.
#[derive(Clone, Debug)]
enum Outcome {
    Halted(u64, BitString),
    /// Needs more input: extensions must be run.
    Underflow,
    /// Stopped without halting properly, or provably never halts.
    Dead,
    Running(u64),
}

impl Outcome {
    fn from_result(r: ExecutionResult) -> Outcome {
        match r {
            ExecutionResult::Success { output, steps } => Outcome::Halted(steps, output),
            ExecutionResult::AbortInputUnderflow { .. } => Outcome::Underflow,
            ExecutionResult::AbortEarlyHalt { .. } | ExecutionResult::Diverges { .. } => {
                Outcome::Dead
            }
            ExecutionResult::BudgetExceeded { steps_spent } => Outcome::Running(steps_spent),
        }
    }

    /// Outcome for a one-bit extension when this run did not underflow.
    fn for_extension(&self) -> Outcome {
        match self {
            Outcome::Halted(..) | Outcome::Dead => Outcome::Dead,
            Outcome::Running(s) => Outcome::Running(*s),
            Outcome::Underflow => unreachable!("underflowing runs are extended by running"),
        }
    }
}

/// Runs the schedule for every program of length at most L with auxiliary
/// string `z`.
///
/// Only programs whose one-bit-shorter prefix ran out of input are
/// simulated; every other row follows from its prefix. Simulations fan out
/// over the current rayon pool and are merged in length-lex order, so the
/// table does not depend on the number of workers.
pub fn sweep<M: PrefixMachine>(
    machine: &M,
    z: &BitString,
    budget: Budget,
    resume_from: Option<&HaltingTable>,
) -> Result<HaltingTable> {
    if let Some(old) = resume_from {
        if old.machine_version != machine.version() {
            return Err(Error::VersionMismatch {
                expected: machine.version().to_string(),
                found: old.machine_version.clone(),
            });
        }
        if &old.z != z {
            return Err(Error::ResumeMismatch(format!(
                "table is for z={}, sweep is for z={}",
                old.z.to_string_or_dash(),
                z.to_string_or_dash()
            )));
        }
        let ob = old.budget;
        if ob.max_len > budget.max_len || ob.max_jsteps > budget.max_jsteps || ob == budget {
            return Err(Error::BudgetNotLarger {
                old_len: ob.max_len,
                old_steps: ob.max_jsteps,
                new_len: budget.max_len,
                new_steps: budget.max_jsteps,
            });
        }
    }

    let l = budget.max_len;
    let cap = budget.max_jsteps;
    let mut outcomes: Vec<Outcome> = Vec::with_capacity((1usize << (l + 1)) - 1);
    for len in 0..=l {
        let mut level: Vec<Option<Outcome>> = vec![None; 1usize << len];
        let mut to_run: Vec<usize> = Vec::new();
        for k in 0..level.len() {
            if len == 0 {
                to_run.push(k);
                continue;
            }
            let parent = &outcomes[(1usize << (len - 1)) - 1 + k / 2];
            match parent {
                Outcome::Underflow => to_run.push(k),
                other => level[k] = Some(other.for_extension()),
            }
        }
        let results: Vec<Outcome> = to_run
            .par_iter()
            .map(|&k| {
                let p = BitString::from_uint(k as u64, len);
                if let Some(old) = resume_from {
                    if let Some(RowStatus::Halted { steps, output }) = old.row(&p) {
                        return Outcome::Halted(*steps, output.clone());
                    }
                }
                Outcome::from_result(machine.run(&p, z, cap))
            })
            .collect();
        for (k, r) in to_run.into_iter().zip(results) {
            level[k] = Some(r);
        }
        outcomes.extend(level.into_iter().map(|o| o.expect("every row resolved")));
    }

    let rows = outcomes
        .into_iter()
        .enumerate()
        .map(|(idx, o)| {
            let len = BitString::from_index(idx as u64).len();
            if len as u64 > cap {
                // never scheduled within J j-steps
                return RowStatus::Unknown { steps_spent: 0 };
            }
            match o {
                Outcome::Halted(steps, output) => RowStatus::Halted { steps, output },
                Outcome::Underflow | Outcome::Dead => RowStatus::Aborted,
                Outcome::Running(steps_spent) => RowStatus::Unknown { steps_spent },
            }
        })
        .collect();
    HaltingTable::from_rows(machine.version(), z.clone(), budget, rows)
}

/// Reference sweep that simulates every program independently. Slow; used to
/// check [`sweep`].
pub fn sweep_exhaustive<M: PrefixMachine>(
    machine: &M,
    z: &BitString,
    budget: Budget,
) -> Result<HaltingTable> {
    let rows = BitString::all_up_to(budget.max_len)
        .map(|p| {
            if p.len() as u64 > budget.max_jsteps {
                return RowStatus::Unknown { steps_spent: 0 };
            }
            match machine.run(&p, z, budget.max_jsteps) {
                ExecutionResult::Success { output, steps } => RowStatus::Halted { steps, output },
                ExecutionResult::BudgetExceeded { steps_spent } => RowStatus::Unknown { steps_spent },
                _ => RowStatus::Aborted,
            }
        })
        .collect();
    HaltingTable::from_rows(machine.version(), z.clone(), budget, rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaApprox {
    /// Final M: the mass of all programs seen halted.
    pub value: Dyadic,
    pub stabilized_bits: usize,
    /// Exact when no Unknown row remains; the value is then Ω restricted to
    /// programs of length at most L. Either way it is a lower bound on the
    /// machine's unrestricted Ω.
    pub certainty: Certainty,
    /// The most that still-running programs could add.
    pub unresolved_mass: Dyadic,
}

pub fn omega_approx(t: &HaltingTable) -> OmegaApprox {
    OmegaApprox {
        value: t.m_final(),
        stabilized_bits: t.certified_bits(),
        certainty: Certainty::exact_if(t.is_exact(), Certainty::LowerBound),
        unresolved_mass: t.unresolved_mass.clone(),
    }
}

/// B(n): the longest running time among halting programs of length ≤ n.
pub fn busy_beaver(t: &HaltingTable, n: usize) -> Result<Measured<u64>> {
    if n > t.max_len() {
        return Err(Error::OutOfBudget { n, max_len: t.max_len() });
    }
    Ok(Measured::new(
        t.busy_beaver[n],
        Certainty::exact_if(t.is_exact_up_to(n), Certainty::LowerBound),
    ))
}

/// B⁻¹(N): the length of the shortest halting program running at least N
/// steps.
pub fn inverse_busy_beaver(t: &HaltingTable, steps: u64) -> Result<Measured<usize>> {
    let steps = steps.max(1);
    match t.busy_beaver.iter().position(|&b| b >= steps) {
        Some(n) => Ok(Measured::new(
            n,
            Certainty::exact_if(t.is_exact_up_to(n - 1), Certainty::UpperBound),
        )),
        None => Err(Error::NotWitnessed { steps, lower_bound: t.max_len() + 1 }),
    }
}

/// Busy running time brt(p) = B⁻¹(rt(p)), with running times beyond every
/// enumerated program reported as the lower bound L + 1.
pub fn busy_running_time(t: &HaltingTable, steps: u64) -> Measured<usize> {
    match inverse_busy_beaver(t, steps) {
        Ok(m) => m,
        Err(_) => Measured::new(t.max_len() + 1, Certainty::LowerBound),
    }
}

/// The busy badger: the first j-step at which `i` bits of the sum are
/// certified stable. Applied to a table with auxiliary string z this is the
/// relativized badger for Ω^z.
pub fn badger(t: &HaltingTable, i: usize) -> Result<Measured<u64>> {
    let certified = t.certified_bits();
    if i > certified {
        return Err(Error::NotStabilized { requested: i, certified });
    }
    let j = t
        .clock
        .iter()
        .find(|(_, bits)| *bits >= i)
        .map(|(j, _)| *j)
        .expect("the final change point certifies every certified bit");
    Ok(Measured::new(j, t.certainty_of_clock()))
}

/// Reading of the clock kept by `clock_table` for a program with running time
/// `rt`: the least `i` with badger(i) ≥ rt, which is one more than the bits
/// already stable at j-step rt − 1.
pub fn clock_reading(clock_table: &HaltingTable, rt: u64) -> Measured<usize> {
    if rt <= 1 {
        return Measured::new(0, clock_table.certainty_of_clock());
    }
    let theta = clock_table.stable_bits_at(rt - 1) + 1;
    if theta > clock_table.certified_bits() {
        Measured::new(theta, Certainty::LowerBound)
    } else {
        Measured::new(
            theta,
            Certainty::exact_if(clock_table.is_exact(), Certainty::LowerBound),
        )
    }
}

/// Which sum a clock reading is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Clock {
    /// Ω, kept by the ε-tail of the dovetailer.
    Omega,
    /// Ω^z, kept by the z-tail.
    OmegaZ,
}

/// θ(p) or θ^z(p) for a program halting in `t_z`.
pub fn clock_time(
    t_z: &HaltingTable,
    t_eps: &HaltingTable,
    p: &BitString,
    which: Clock,
) -> Result<Measured<usize>> {
    let rt = match t_z.row(p) {
        Some(RowStatus::Halted { steps, .. }) => *steps,
        _ => {
            return Err(Error::NotProducible {
                x: format!("a halt of {}", p.to_string_or_dash()),
                z: t_z.z().to_string_or_dash(),
            })
        }
    };
    if t_z.budget() != t_eps.budget() {
        return Err(Error::BudgetMismatch);
    }
    Ok(match which {
        Clock::Omega => clock_reading(t_eps, rt),
        Clock::OmegaZ => clock_reading(t_z, rt),
    })
}

/// Halting programs up to a length bound, with running time and output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaltedSet {
    pub max_len: usize,
    pub programs: BTreeMap<BitString, (u64, BitString)>,
}

/// A program seen halting by the [`Dovetail`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaltEvent {
    pub program: BitString,
    pub steps: u64,
    pub output: BitString,
    pub jstep: u64,
}

/// A literal, incremental replay of the j-step schedule.
pub struct Dovetail<'m, M: PrefixMachine> {
    machine: &'m M,
    z: BitString,
    max_len: usize,
    j: u64,
    live: Vec<(BitString, M::Exec)>,
    m: Dyadic,
    history: Vec<(u64, Dyadic)>,
    halts: Vec<HaltEvent>,
}

impl<'m, M: PrefixMachine> Dovetail<'m, M> {
    pub fn new(machine: &'m M, z: &BitString, max_len: usize) -> Self {
        Dovetail {
            machine,
            z: z.clone(),
            max_len,
            j: 0,
            live: Vec::new(),
            m: Dyadic::zero(),
            history: Vec::new(),
            halts: Vec::new(),
        }
    }

    pub fn jstep(&self) -> u64 {
        self.j
    }

    pub fn m(&self) -> &Dyadic {
        &self.m
    }

    /// M(j) for any j-step already performed.
    pub fn m_at(&self, j: u64) -> Dyadic {
        let k = self.history.partition_point(|(jj, _)| *jj <= j);
        if k == 0 {
            Dyadic::zero()
        } else {
            self.history[k - 1].1.clone()
        }
    }

    pub fn halts(&self) -> &[HaltEvent] {
        &self.halts
    }

    /// True once every program has joined and none is still running.
    pub fn is_settled(&self) -> bool {
        self.j >= self.max_len as u64 && self.live.is_empty()
    }

    /// Performs the next j-step; returns the programs that halted in it.
    pub fn step(&mut self) -> &[HaltEvent] {
        self.j += 1;
        let j = self.j;
        if j as usize <= self.max_len {
            for p in BitString::all_of_length(j as usize) {
                let exec = self.machine.start(&p, &self.z);
                self.live.push((p, exec));
            }
        }
        let first_new = self.halts.len();
        let mut still_live = Vec::with_capacity(self.live.len());
        for (p, mut exec) in self.live.drain(..) {
            match exec.advance(j) {
                None => still_live.push((p, exec)),
                Some(ExecutionResult::Success { output, steps }) => {
                    self.m += &Dyadic::mass(p.len());
                    self.halts.push(HaltEvent { program: p, steps, output, jstep: j });
                }
                Some(_) => {}
            }
        }
        self.live = still_live;
        if self.halts.len() > first_new {
            self.history.push((j, self.m.clone()));
        }
        &self.halts[first_new..]
    }
}

/// Recovers the halting programs of length ≤ j from the first j bits of Ω:
/// dovetails until M agrees with the prefix, after which no program that
/// short can halt any more.
pub fn halting_from_omega<M: PrefixMachine>(
    machine: &M,
    t: &HaltingTable,
    omega_prefix: &BitString,
) -> Result<HaltedSet> {
    let j = omega_prefix.len();
    let certified = t.certified_bits();
    if j > certified {
        return Err(Error::NotStabilized { requested: j, certified });
    }
    let target = Dyadic::from_fraction_bits(omega_prefix).floor_scaled(j as u32);
    let mut dove = Dovetail::new(machine, t.z(), t.max_len());
    loop {
        let current = dove.m().floor_scaled(j as u32);
        if current == target {
            break;
        }
        if current > target || dove.jstep() >= t.budget().max_jsteps || dove.is_settled() {
            return Err(Error::PrefixNotReached);
        }
        dove.step();
    }
    let programs = dove
        .halts()
        .iter()
        .filter(|h| h.program.len() <= j)
        .map(|h| (h.program.clone(), (h.steps, h.output.clone())))
        .collect();
    Ok(HaltedSet { max_len: j, programs })
}

/// Recovers the halting programs of length ≤ j from their number ω_j: runs
/// them all in parallel until that many have halted.
pub fn halting_from_count<M: PrefixMachine>(
    machine: &M,
    t: &HaltingTable,
    j: usize,
    omega_j: usize,
) -> Result<HaltedSet> {
    if j > t.max_len() {
        return Err(Error::OutOfBudget { n: j, max_len: t.max_len() });
    }
    let mut dove = Dovetail::new(machine, t.z(), j);
    while dove.halts().len() < omega_j {
        if dove.jstep() >= t.budget().max_jsteps || dove.is_settled() {
            return Err(Error::CountNeverReached { expected: omega_j });
        }
        dove.step();
    }
    let programs = dove
        .halts()
        .iter()
        .map(|h| (h.program.clone(), (h.steps, h.output.clone())))
        .collect();
    Ok(HaltedSet { max_len: j, programs })
}
