//! JSON inputs and catalog lookups.

use std::path::{Path, PathBuf};

use clap::Args;
use corfun_core::catalog::{lattice_by_name, poset_by_name, LATTICE_NAMES, POSET_NAMES};
use corfun_core::lattice::{ideal_lattice, irreducibles, Lattice, MarkedLattice};
use corfun_core::poset::Poset;
use corfun_core::relation::{GroundSet, Relation};
use corfun_core::{Error, Result};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetJson {
    elements: Vec<String>,
    relation: Vec<[String; 2]>,
    #[serde(default)]
    validate: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationJson {
    source: Vec<String>,
    target: Vec<String>,
    pairs: Vec<[String; 2]>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::validation(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::validation(format!("{}: {e}", path.display())))
}

fn index(set: &GroundSet, label: &str, path: &Path) -> Result<usize> {
    set.index_of(label)
        .ok_or_else(|| Error::validation(format!("{}: unknown element '{label}'", path.display())))
}

/// Poset JSON; returns the poset and whether lattice laws should be re-checked.
pub fn load_poset(path: &Path) -> Result<(Poset, bool)> {
    let raw: PosetJson = parse(path)?;
    let set = GroundSet::new(raw.elements)?;
    let pairs = raw
        .relation
        .iter()
        .map(|[a, b]| Ok((index(&set, a, path)?, index(&set, b, path)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((Poset::from_pairs(set, &pairs)?, raw.validate))
}

/// Relation JSON, pairs target-first.
pub fn load_relation(path: &Path) -> Result<(GroundSet, GroundSet, Relation)> {
    let raw: RelationJson = parse(path)?;
    let x = GroundSet::new(raw.source)?;
    let y = GroundSet::new(raw.target)?;
    let pairs = raw
        .pairs
        .iter()
        .map(|[b, a]| Ok((index(&y, b, path)?, index(&x, a, path)?)))
        .collect::<Result<Vec<_>>>()?;
    let r = Relation::from_pairs(y.len(), x.len(), pairs)?;
    Ok((x, y, r))
}

/// Where a poset or lattice comes from. `--name` tries lattice names before
/// poset names in lattice contexts and the other way round for posets.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Catalog name (lozenge, m3, n5, c, cop, p32, tree, chainN, booleanN,
    /// antichainN, v, lambda, chain-plus-point, n)
    #[arg(long)]
    pub name: Option<String>,
    /// Poset JSON; lattice commands use its lattice of lower ideals
    #[arg(long, value_name = "FILE")]
    pub poset: Option<PathBuf>,
    /// Lattice JSON (a poset JSON that must be a lattice)
    #[arg(long, value_name = "FILE")]
    pub lattice: Option<PathBuf>,
}

fn unknown(name: &str) -> Error {
    Error::validation(format!(
        "unknown name '{name}'; lattices: {}; posets: {}",
        LATTICE_NAMES.join(", "),
        POSET_NAMES.join(", ")
    ))
}

fn load_lattice_file(path: &Path) -> Result<Lattice> {
    let (p, validate) = load_poset(path)?;
    let l = Lattice::build(p)?;
    if validate && !l.check_laws() {
        return Err(Error::invariant("lattice laws fail after construction"));
    }
    Ok(l)
}

impl Source {
    pub fn label(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        let path = self.poset.as_ref().or(self.lattice.as_ref()).expect("clap enforces one source");
        path.file_stem().map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned())
    }

    pub fn poset(&self) -> Result<Poset> {
        if let Some(n) = &self.name {
            return match poset_by_name(n) {
                Ok(p) => Ok(p),
                Err(_) => lattice_by_name(n).map(|l| l.poset().clone()).map_err(|_| unknown(n)),
            };
        }
        if let Some(path) = &self.poset {
            return Ok(load_poset(path)?.0);
        }
        Ok(load_lattice_file(self.lattice.as_ref().expect("clap enforces one source"))?.poset().clone())
    }

    /// The marked lattice `T`; posets become `I↓(P)`.
    pub fn marked(&self) -> Result<MarkedLattice> {
        if let Some(n) = &self.name {
            return match lattice_by_name(n) {
                Ok(l) => Ok(irreducibles(&l)),
                Err(_) => poset_by_name(n).map(|p| ideal_lattice(&p)).map_err(|_| unknown(n)),
            };
        }
        if let Some(path) = &self.poset {
            return Ok(ideal_lattice(&load_poset(path)?.0));
        }
        Ok(irreducibles(&load_lattice_file(self.lattice.as_ref().expect("clap enforces one source"))?))
    }
}

/// `N` or an inclusive range `A..B`.
pub fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("'{t}' is not a non-negative integer"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok((a, b))
        }
        None => num(s).map(|n| (n, n)),
    }
}
