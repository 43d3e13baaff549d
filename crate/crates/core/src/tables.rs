//! Loading the shipped table data, or a replacement directory.

use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::ext1_tables::{Ext1AtPrime, Ext1Table, ERRATA_FILE, EXT1_TABLE_FILE};
use crate::g1_cohom::{G1AtPrime, G1Table, G1_TABLE_FILE};
use crate::weight_lattice::Prime;

/// Environment variable naming a directory that replaces the built-in data.
pub const DATA_DIR_ENV: &str = "SL3COH_DATA";

const BUILTIN_G1: &str = include_str!("../data/g1_cohom.tbl");
const BUILTIN_EXT1: &str = include_str!("../data/ext1.tbl");
const BUILTIN_ERRATA: &str = include_str!("../data/errata.overlay");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Errata {
    #[default]
    On,
    Off,
}

#[derive(Debug, Clone)]
pub struct Tables {
    pub g1: G1Table,
    pub ext1: Ext1Table,
    pub errata: Errata,
}

impl Tables {
    pub fn from_texts(g1: &str, ext1: &str, overlay: &str, errata: Errata) -> Result<Self> {
        let g1 = G1Table::parse(G1_TABLE_FILE, g1)?;
        let mut ext1 = Ext1Table::parse(EXT1_TABLE_FILE, ext1)?;
        if errata == Errata::On {
            ext1.apply_overlay(ERRATA_FILE, overlay)?;
        }
        Ok(Tables { g1, ext1, errata })
    }

    pub fn builtin(errata: Errata) -> Self {
        Tables::from_texts(BUILTIN_G1, BUILTIN_EXT1, BUILTIN_ERRATA, errata).expect("built-in tables parse")
    }

    /// Reads `g1_cohom.tbl`, `ext1.tbl` and `errata.overlay` from `dir`.
    /// A missing overlay file is treated as empty.
    pub fn from_dir(dir: &Path, errata: Errata) -> Result<Self> {
        let g1 = fs::read_to_string(dir.join(G1_TABLE_FILE))?;
        let ext1 = fs::read_to_string(dir.join(EXT1_TABLE_FILE))?;
        let overlay = match fs::read_to_string(dir.join(ERRATA_FILE)) {
            Ok(s) => s,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(e.into()),
        };
        Tables::from_texts(&g1, &ext1, &overlay, errata)
    }

    /// Honours [`DATA_DIR_ENV`], falling back to the built-in data.
    pub fn from_env(errata: Errata) -> Result<Self> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Tables::from_dir(Path::new(&dir), errata),
            _ => Ok(Tables::builtin(errata)),
        }
    }

    pub fn at(&self, p: Prime) -> PrimeTables {
        PrimeTables {
            p,
            g1: self.g1.at(p),
            ext1: self.ext1.at(p),
        }
    }
}

/// All tables instantiated at one prime.
#[derive(Debug, Clone)]
pub struct PrimeTables {
    pub p: Prime,
    pub g1: G1AtPrime,
    pub ext1: Ext1AtPrime,
}
