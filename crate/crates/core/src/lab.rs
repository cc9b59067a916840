//! Halting tables for many auxiliary strings under one budget, built on
//! demand and optionally persisted in a cache directory.

use std::collections::HashMap;
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::encoding::BitString;
use crate::enumeration::{sweep, Budget, HaltingTable};
use crate::error::{Error, Result};
use crate::machine::{PrefixMachine, U0};

pub struct Lab {
    machine: U0,
    budget: Budget,
    cache_dir: Option<PathBuf>,
    tables: Mutex<HashMap<BitString, Arc<HaltingTable>>>,
}

impl Lab {
    pub fn new(budget: Budget) -> Self {
        Lab {
            machine: U0::new(),
            budget,
            cache_dir: None,
            tables: Mutex::new(HashMap::new()),
        }
    }

    /// Tables are read from and written to `dir`, one file per z.
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn machine(&self) -> &U0 {
        &self.machine
    }

    /// Adds an already built table, e.g. one loaded from a user-named file.
    pub fn insert(&self, table: HaltingTable) -> Result<Arc<HaltingTable>> {
        if table.budget() != self.budget {
            return Err(Error::BudgetMismatch);
        }
        if table.machine_version() != self.machine.version() {
            return Err(Error::VersionMismatch {
                expected: self.machine.version().to_string(),
                found: table.machine_version().to_string(),
            });
        }
        let t = Arc::new(table);
        self.tables.lock().unwrap().insert(t.z().clone(), t.clone());
        Ok(t)
    }

    /// The table for auxiliary string `z` (ε for the unconditional one).
    pub fn table(&self, z: &BitString) -> Result<Arc<HaltingTable>> {
        if let Some(t) = self.tables.lock().unwrap().get(z) {
            return Ok(t.clone());
        }
        let t = match self.cache_path(z) {
            Some(path) if path.exists() => {
                let t = HaltingTable::read_from(BufReader::new(fs::File::open(&path)?))?;
                if t.z() != z || t.budget() != self.budget {
                    return Err(Error::ResumeMismatch(format!(
                        "cache file {} holds a different table",
                        path.display()
                    )));
                }
                t
            }
            Some(path) => {
                let t = sweep(&self.machine, z, self.budget, None)?;
                write_atomically(&path, &t)?;
                t
            }
            None => sweep(&self.machine, z, self.budget, None)?,
        };
        let t = Arc::new(t);
        // another thread may have built the same table meanwhile; both are equal
        Ok(self.tables.lock().unwrap().entry(z.clone()).or_insert(t).clone())
    }

    pub fn eps(&self) -> Result<Arc<HaltingTable>> {
        self.table(&BitString::new())
    }

    fn cache_path(&self, z: &BitString) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|d| d.join(cache_file_name(self.machine.version(), z, self.budget)))
    }
}

/// Canonical cache file name for one (machine, z, budget).
pub fn cache_file_name(version: &str, z: &BitString, budget: Budget) -> String {
    format!(
        "{version}_z{}_L{}_J{}.tbl",
        z.to_string_or_dash(),
        budget.max_len,
        budget.max_jsteps
    )
}

pub fn write_atomically(path: &Path, t: &HaltingTable) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        t.write_to(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
