use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of the three circle roles, written as the image triple
/// `(σ(1), σ(2), σ(3))`. Stored zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Permutation([u8; 3]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([0, 1, 2]);

    /// All of S₃ in lexicographic order of the image triple: 123, 132, 213, 231, 312, 321.
    pub const ALL: [Permutation; 6] = [
        Permutation([0, 1, 2]),
        Permutation([0, 2, 1]),
        Permutation([1, 0, 2]),
        Permutation([1, 2, 0]),
        Permutation([2, 0, 1]),
        Permutation([2, 1, 0]),
    ];

    /// Builds a permutation from zero-based images.
    pub fn new(images: [u8; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &x in &images {
            if x > 2 || seen[x as usize] {
                return Err(Error::BadParameter(format!("{images:?} is not a permutation of 0,1,2")));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation(images))
    }

    /// Zero-based image of role `r`.
    pub fn apply(self, r: usize) -> usize {
        self.0[r] as usize
    }

    pub fn images(self) -> [u8; 3] {
        self.0
    }

    /// Position of this permutation in [`Permutation::ALL`].
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&p| p == self).expect("S3 is complete")
    }

    /// sgn(σ) ∈ {+1, −1}.
    pub fn parity(self) -> i64 {
        let [a, b, c] = self.0;
        let inversions = (a > b) as u8 + (a > c) as u8 + (b > c) as u8;
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0u8; 3];
        for (r, &x) in self.0.iter().enumerate() {
            inv[x as usize] = r as u8;
        }
        Permutation(inv)
    }

    /// `(self ∘ other)(r) = self(other(r))`.
    pub fn compose(self, other: Self) -> Self {
        Permutation([self.0[other.0[0] as usize], self.0[other.0[1] as usize], self.0[other.0[2] as usize]])
    }

    /// The triple read backwards: (i,j,k) ↦ (k,j,i).
    pub fn reversed(self) -> Self {
        Permutation([self.0[2], self.0[1], self.0[0]])
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.0[0] + 1, self.0[1] + 1, self.0[2] + 1)
    }
}

impl std::str::FromStr for Permutation {
    type Err = Error;

    /// Parses the one-based image triple, e.g. `"231"`.
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s.trim().bytes().collect();
        if digits.len() != 3 || digits.iter().any(|d| !(b'1'..=b'3').contains(d)) {
            return Err(Error::BadParameter(format!("`{s}` is not a permutation like 123 or 231")));
        }
        Permutation::new([digits[0] - b'1', digits[1] - b'1', digits[2] - b'1'])
    }
}

impl TryFrom<String> for Permutation {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        p.to_string()
    }
}
