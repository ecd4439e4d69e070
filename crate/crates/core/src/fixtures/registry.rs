//! The built-in fixture roster, constructed on first use.

use std::sync::OnceLock;

use crate::arith::DEFAULT_PRIME;
use crate::error::{Error, Result};
use crate::plane::points::find_rational_points;

use super::construct::search;
use super::file::{DeclaredProfile, FixtureRecord};

/// Primes at which every built-in fixture is validated.
pub const CONSENSUS_PRIMES: [u32; 3] = [10007, 31513, 65521];

const MARKED_POINTS: usize = 6;

struct Recipe {
    name: &'static str,
    degree: u32,
    nodes: &'static [[i64; 3]],
    base_seed: u64,
    genus: usize,
    gonality: usize,
    clifford: usize,
    provenance: &'static str,
}

const RECIPES: &[Recipe] = &[
    Recipe {
        name: "F1",
        degree: 4,
        nodes: &[],
        base_seed: 101,
        genus: 3,
        gonality: 3,
        clifford: 1,
        provenance: "smooth plane quartic; gonality 3 from projection from a point, never hyperelliptic",
    },
    Recipe {
        name: "F2",
        degree: 5,
        nodes: &[[0, 0, 1]],
        base_seed: 201,
        genus: 5,
        gonality: 3,
        clifford: 1,
        provenance: "one-nodal quintic; trigonal by projection from the node",
    },
    Recipe {
        name: "F3",
        degree: 6,
        nodes: &[[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1], [2, 3, 1]],
        base_seed: 301,
        genus: 5,
        gonality: 4,
        clifford: 2,
        provenance: "sextic with five general nodes; tetragonal by node projection, not trigonal by the Koszul certificate",
    },
    Recipe {
        name: "F4",
        degree: 5,
        nodes: &[],
        base_seed: 401,
        genus: 6,
        gonality: 4,
        clifford: 1,
        provenance: "smooth plane quintic; gonality d-1 and Clifford index d-4 of smooth plane curves",
    },
    Recipe {
        name: "F5",
        degree: 6,
        nodes: &[[0, 0, 1], [1, 0, 1], [0, 1, 1]],
        base_seed: 501,
        genus: 7,
        gonality: 4,
        clifford: 2,
        provenance: "three-nodal sextic; tetragonal by node projection, declared minimal",
    },
    Recipe {
        name: "F6",
        degree: 6,
        nodes: &[[0, 0, 1]],
        base_seed: 601,
        genus: 9,
        gonality: 4,
        clifford: 2,
        provenance: "one-nodal sextic; tetragonal by node projection, declared minimal",
    },
    Recipe {
        name: "F7",
        degree: 7,
        nodes: &[[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]],
        base_seed: 701,
        genus: 11,
        gonality: 5,
        clifford: 3,
        provenance: "four-nodal septic; pentagonal by node projection, declared minimal",
    },
    Recipe {
        name: "F8",
        degree: 6,
        nodes: &[[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1], [2, 3, 1], [3, -1, 1]],
        base_seed: 801,
        genus: 4,
        gonality: 3,
        clifford: 1,
        provenance: "six-nodal sextic, normalization of genus 4 hence trigonal; gluing fixture keeping the first node",
    },
    Recipe {
        name: "F9",
        degree: 5,
        nodes: &[[0, 0, 1], [1, 0, 1]],
        base_seed: 901,
        genus: 4,
        gonality: 3,
        clifford: 1,
        provenance: "two-nodal quintic, trigonal by node projection; gluing fixture keeping the first node",
    },
];

fn build(r: &Recipe) -> Result<FixtureRecord> {
    let (seed, coeffs) = search(r.degree, r.nodes, r.base_seed, &CONSENSUS_PRIMES, 200)?;
    let mut record = FixtureRecord {
        name: r.name.to_string(),
        prime: DEFAULT_PRIME,
        degree: r.degree,
        coeffs,
        nodes: r.nodes.to_vec(),
        seed,
        marked: Vec::new(),
        declared: DeclaredProfile { genus: r.genus, gonality: Some(r.gonality), clifford: Some(r.clifford) },
        provenance: r.provenance.to_string(),
    };
    let curve = record.curve()?;
    if curve.genus() != r.genus {
        return Err(Error::Consistency(format!("{} has genus {}, expected {}", r.name, curve.genus(), r.genus)));
    }
    record.marked = find_rational_points(&curve, MARKED_POINTS, seed).points;
    Ok(record)
}

/// All built-in fixtures, in roster order.
pub fn registry() -> &'static [FixtureRecord] {
    static CELL: OnceLock<Vec<FixtureRecord>> = OnceLock::new();
    CELL.get_or_init(|| RECIPES.iter().map(|r| build(r).unwrap_or_else(|e| panic!("fixture {} failed to build: {e}", r.name))).collect())
}

pub fn lookup(name: &str) -> Result<&'static FixtureRecord> {
    registry().iter().find(|r| r.name.eq_ignore_ascii_case(name)).ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

pub fn names() -> Vec<&'static str> {
    RECIPES.iter().map(|r| r.name).collect()
}
