use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::diagram::GaussDiagram;
use crate::error::{Error, Result};
use crate::pairing::{CellTable, CoefficientVector};
use crate::perm::Permutation;

/// An integer modulo a nonnegative modulus; modulus 0 means a plain integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    pub value: i64,
    #[serde(rename = "mod")]
    pub modulus: u64,
}

impl Residue {
    /// Reduces `value` into `[0, modulus)` when the modulus is positive.
    pub fn new(value: i64, modulus: u64) -> Self {
        let value = if modulus == 0 { value } else { value.rem_euclid(modulus as i64) };
        Residue { value, modulus }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 0 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} mod {}", self.value, self.modulus)
        }
    }
}

/// lk(a, b): half the signed count of crossings between components `a` and `b`.
pub fn linking_number(g: &GaussDiagram, a: usize, b: usize) -> Result<i64> {
    g.check_component(a)?;
    g.check_component(b)?;
    if a == b {
        return Err(Error::SameComponent);
    }
    let sum: i64 = g
        .arrows()
        .iter()
        .filter(|x| {
            let (t, h) = (x.tail.component, x.head.component);
            (t == a && h == b) || (t == b && h == a)
        })
        .map(|x| x.sign.value())
        .sum();
    if sum % 2 != 0 {
        return Err(Error::NonIntegralLinking { a, b, sum });
    }
    Ok(sum / 2)
}

/// The pairwise linking numbers `[lk(1,2), lk(1,3), lk(2,3)]` of a
/// three-component diagram.
pub fn linking_numbers(g: &GaussDiagram) -> Result<[i64; 3]> {
    g.require_components(3)?;
    Ok([linking_number(g, 0, 1)?, linking_number(g, 0, 2)?, linking_number(g, 1, 2)?])
}

/// gcd of the three pairwise linking numbers (0 when all vanish).
pub fn linking_gcd(g: &GaussDiagram) -> Result<u64> {
    let lk = linking_numbers(g)?;
    Ok(lk.iter().fold(0i64, |acc, &x| acc.gcd(&x)) as u64)
}

/// First invariant family with λ = 1 at σ = identity.
pub fn family_i(g: &GaussDiagram) -> Result<i64> {
    family_i_at(g, Permutation::IDENTITY)
}

pub fn family_i_at(g: &GaussDiagram, sigma: Permutation) -> Result<i64> {
    f_general(&CoefficientVector::family_i(sigma), g)
}

/// Second invariant family with λ = 1 at σ = identity.
pub fn family_j(g: &GaussDiagram) -> Result<i64> {
    family_j_at(g, Permutation::IDENTITY)
}

pub fn family_j_at(g: &GaussDiagram, sigma: Permutation) -> Result<i64> {
    f_general(&CoefficientVector::family_j(sigma), g)
}

/// f(c)(G) for an arbitrary coefficient vector.
pub fn f_general(c: &CoefficientVector, g: &GaussDiagram) -> Result<i64> {
    crate::pairing::eval_combination(c, g)
}

/// Milnor's triple linking number μ₁₂₃ modulo the gcd of the linking numbers.
///
/// The value comes from the based three-term formula
/// [`CoefficientVector::triple_linking`]; it is cross-checked against
/// f(2,2,1,1), which must be divisible by 6 with f(2,2,1,1)/6 ≡ 2·μ₁₂₃.
/// Either check failing is reported as an error, never rounded away.
pub fn milnor_mu123(g: &GaussDiagram) -> Result<Residue> {
    let cells = CellTable::compute(g)?;
    milnor_mu123_from_cells(g, &cells)
}

fn milnor_mu123_from_cells(g: &GaussDiagram, cells: &CellTable) -> Result<Residue> {
    let modulus = linking_gcd(g)?;
    let f = CoefficientVector::fact_2211().eval_cells(cells);
    if f % 6 != 0 {
        return Err(Error::NotDivisibleBySix { value: f });
    }
    let based = CoefficientVector::triple_linking().eval_cells(cells);
    let gap = f / 6 - 2 * based;
    let consistent = if modulus == 0 { gap == 0 } else { gap % modulus as i64 == 0 };
    if !consistent {
        return Err(Error::TripleLinkingMismatch { sixth: f / 6, based, modulus });
    }
    Ok(Residue::new(based, modulus))
}

/// Everything the tool reports for one three-component diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantReport {
    /// `[lk(1,2), lk(1,3), lk(2,3)]`.
    pub lk: [i64; 3],
    #[serde(rename = "familyI")]
    pub family_i: i64,
    #[serde(rename = "familyJ")]
    pub family_j: i64,
    pub mu123: Residue,
    /// f(2,2,1,1), always a multiple of 6 on realizable diagrams.
    pub f2211: i64,
}

impl InvariantReport {
    pub fn compute(g: &GaussDiagram) -> Result<Self> {
        let cells = CellTable::compute(g)?;
        Ok(InvariantReport {
            lk: linking_numbers(g)?,
            family_i: CoefficientVector::family_i(Permutation::IDENTITY).eval_cells(&cells),
            family_j: CoefficientVector::family_j(Permutation::IDENTITY).eval_cells(&cells),
            mu123: milnor_mu123_from_cells(g, &cells)?,
            f2211: CoefficientVector::fact_2211().eval_cells(&cells),
        })
    }
}
