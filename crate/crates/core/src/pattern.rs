use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four two-arrow pattern families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    RR,
    LL,
    RL,
    LR,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::RR, Family::LL, Family::RL, Family::LR];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::RR => "RR",
            Family::LL => "LL",
            Family::RL => "RL",
            Family::LR => "LR",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "RR" => Ok(Family::RR),
            "LL" => Ok(Family::LL),
            "RL" => Ok(Family::RL),
            "LR" => Ok(Family::LR),
            _ => Err(Error::BadParameter(format!("unknown pattern family `{s}`"))),
        }
    }
}

/// Where one endpoint of a pattern arrow sits: circle role (0 = i, 1 = j,
/// 2 = k) and rank among that circle's endpoints counted from the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatternEnd {
    pub role: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatternArrow {
    pub tail: PatternEnd,
    pub head: PatternEnd,
}

/// A sign-free two-arrow template on three circle roles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrowPattern {
    pub name: String,
    pub arrows: [PatternArrow; 2],
    /// Number of endpoints on each circle role.
    pub circle_sizes: [usize; 3],
}

impl ArrowPattern {
    /// Builds and validates a pattern from circle words and arrows given as
    /// endpoint ids.
    pub fn from_parts(name: &str, circles: [Vec<String>; 3], arrows: &[(String, String)]) -> Result<Self> {
        let mut place: HashMap<&str, PatternEnd> = HashMap::new();
        for (role, ids) in circles.iter().enumerate() {
            for (rank, id) in ids.iter().enumerate() {
                if place.insert(id.as_str(), PatternEnd { role, rank }).is_some() {
                    return Err(Error::Pattern(format!("{name}: endpoint `{id}` listed twice")));
                }
            }
        }
        if arrows.len() != 2 {
            return Err(Error::Pattern(format!("{name}: expected exactly 2 arrows, found {}", arrows.len())));
        }
        let mut used: HashMap<&str, usize> = HashMap::new();
        let mut out = Vec::new();
        for (t, h) in arrows {
            let lookup = |id: &str| {
                place.get(id).copied().ok_or_else(|| Error::Pattern(format!("{name}: endpoint `{id}` is on no circle")))
            };
            let tail = lookup(t)?;
            let head = lookup(h)?;
            *used.entry(t.as_str()).or_default() += 1;
            *used.entry(h.as_str()).or_default() += 1;
            out.push(PatternArrow { tail, head });
        }
        if used.len() != place.len() || used.values().any(|&n| n != 1) {
            return Err(Error::Pattern(format!("{name}: every endpoint must belong to exactly one arrow end")));
        }
        let circle_sizes = [circles[0].len(), circles[1].len(), circles[2].len()];
        if circle_sizes.contains(&0) {
            return Err(Error::Pattern(format!("{name}: the two arrows must touch all three circles")));
        }
        Ok(ArrowPattern { name: name.to_string(), arrows: [out[0], out[1]], circle_sizes })
    }

    /// Every arrow reversed (tail and head exchanged).
    pub fn reversed_arrows(&self) -> Self {
        let flip = |a: PatternArrow| PatternArrow { tail: a.head, head: a.tail };
        ArrowPattern { name: self.name.clone(), arrows: [flip(self.arrows[0]), flip(self.arrows[1])], circle_sizes: self.circle_sizes }
    }

    /// The endpoint order on every circle reversed.
    pub fn mirrored_order(&self) -> Self {
        let sizes = self.circle_sizes;
        let m = |e: PatternEnd| PatternEnd { role: e.role, rank: sizes[e.role] - 1 - e.rank };
        let fix = |a: PatternArrow| PatternArrow { tail: m(a.tail), head: m(a.head) };
        ArrowPattern { name: self.name.clone(), arrows: [fix(self.arrows[0]), fix(self.arrows[1])], circle_sizes: sizes }
    }

    /// Renders the pattern block in the data-file format.
    pub fn to_block(&self) -> String {
        let id = |e: PatternEnd| -> String {
            let before: usize = self.circle_sizes[..e.role].iter().sum();
            ((b'a' + (before + e.rank) as u8) as char).to_string()
        };
        let mut out = format!("pattern {}\n", self.name);
        for (role, r) in ["i", "j", "k"].iter().enumerate() {
            let ids: Vec<String> = (0..self.circle_sizes[role]).map(|rank| id(PatternEnd { role, rank })).collect();
            out.push_str(&format!("circle {r}: {}\n", ids.join(" ")));
        }
        for a in &self.arrows {
            out.push_str(&format!("arrow {} -> {}\n", id(a.tail), id(a.head)));
        }
        out
    }
}

/// Which direction convention to read the shipped pictures with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// The shipped transcription as written.
    Shipped,
    /// Every arrow reversed.
    ReversedArrows,
    /// Endpoint order on every circle reversed.
    MirroredOrder,
    /// Both of the above.
    ReversedMirrored,
}

impl Convention {
    pub const ALL: [Convention; 4] =
        [Convention::Shipped, Convention::ReversedArrows, Convention::MirroredOrder, Convention::ReversedMirrored];
}

/// The four family patterns, indexed by [`Family`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternSet {
    patterns: [ArrowPattern; 4],
}

const SHIPPED: &str = include_str!("../data/patterns-v1.txt");

impl PatternSet {
    /// The transcription shipped in `data/patterns-v1.txt`.
    pub fn shipped() -> Self {
        PatternSet::parse(SHIPPED).expect("shipped pattern file is valid")
    }

    pub fn shipped_text() -> &'static str {
        SHIPPED
    }

    /// One of the direction-convention variants of the shipped transcription.
    pub fn variant(convention: Convention) -> Self {
        let base = PatternSet::shipped();
        let map = |p: &ArrowPattern| match convention {
            Convention::Shipped => p.clone(),
            Convention::ReversedArrows => p.reversed_arrows(),
            Convention::MirroredOrder => p.mirrored_order(),
            Convention::ReversedMirrored => p.reversed_arrows().mirrored_order(),
        };
        PatternSet { patterns: base.patterns.each_ref().map(map) }
    }

    pub fn get(&self, f: Family) -> &ArrowPattern {
        &self.patterns[f.index()]
    }

    /// Parses a pattern file; it must define each of RR, LL, RL, LR once.
    pub fn parse(text: &str) -> Result<Self> {
        let patterns = parse_pattern_file(text)?;
        let mut slots: [Option<ArrowPattern>; 4] = Default::default();
        for p in patterns {
            let f: Family = p.name.parse().map_err(|_| Error::Pattern(format!("unknown pattern name `{}`", p.name)))?;
            if slots[f.index()].replace(p).is_some() {
                return Err(Error::Pattern(format!("pattern {f} defined twice")));
            }
        }
        let mut out = Vec::new();
        for (f, s) in Family::ALL.iter().zip(slots) {
            out.push(s.ok_or_else(|| Error::Pattern(format!("pattern {f} missing")))?);
        }
        let patterns: [ArrowPattern; 4] = out.try_into().expect("four families");
        Ok(PatternSet { patterns })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("version 1\n");
        for p in &self.patterns {
            out.push('\n');
            out.push_str(&p.to_block());
        }
        out
    }
}

impl Default for PatternSet {
    fn default() -> Self {
        PatternSet::shipped()
    }
}

/// Parses the block format: `version 1`, then blocks opened by
/// `pattern <name>` holding `circle <role>: <ids>` and `arrow <id> -> <id>`.
pub fn parse_pattern_file(text: &str) -> Result<Vec<ArrowPattern>> {
    struct Block {
        name: String,
        circles: [Option<Vec<String>>; 3],
        arrows: Vec<(String, String)>,
    }
    fn finish(b: Block) -> Result<ArrowPattern> {
        let [i, j, k] = b.circles;
        let missing = |r: &str| Error::Pattern(format!("{}: circle {r} missing", b.name));
        let circles = [i.ok_or_else(|| missing("i"))?, j.ok_or_else(|| missing("j"))?, k.ok_or_else(|| missing("k"))?];
        ArrowPattern::from_parts(&b.name, circles, &b.arrows)
    }
    let mut out = Vec::new();
    let mut current: Option<Block> = None;
    let mut version_seen = false;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::Pattern(format!("line {}: {m}", n + 1));
        if let Some(v) = line.strip_prefix("version") {
            if v.trim() != "1" {
                return Err(err(format!("unsupported version `{}`", v.trim())));
            }
            version_seen = true;
        } else if let Some(name) = line.strip_prefix("pattern") {
            if let Some(b) = current.take() {
                out.push(finish(b)?);
            }
            let name = name.trim();
            if name.is_empty() {
                return Err(err("pattern needs a name".into()));
            }
            current = Some(Block { name: name.to_string(), circles: Default::default(), arrows: Vec::new() });
        } else if let Some(rest) = line.strip_prefix("circle") {
            let b = current.as_mut().ok_or_else(|| err("circle outside a pattern block".into()))?;
            let (role, ids) = rest.split_once(':').ok_or_else(|| err("expected `circle <role>: <ids>`".into()))?;
            let r = match role.trim() {
                "i" => 0,
                "j" => 1,
                "k" => 2,
                other => return Err(err(format!("unknown circle role `{other}`"))),
            };
            if b.circles[r].is_some() {
                return Err(err(format!("circle {} given twice", role.trim())));
            }
            b.circles[r] = Some(ids.split_whitespace().map(str::to_string).collect());
        } else if let Some(rest) = line.strip_prefix("arrow") {
            let b = current.as_mut().ok_or_else(|| err("arrow outside a pattern block".into()))?;
            let (t, h) = rest.split_once("->").ok_or_else(|| err("expected `arrow <id> -> <id>`".into()))?;
            b.arrows.push((t.trim().to_string(), h.trim().to_string()));
        } else {
            return Err(err(format!("unrecognized line `{line}`")));
        }
    }
    if let Some(b) = current.take() {
        out.push(finish(b)?);
    }
    if !version_seen {
        return Err(Error::Pattern("missing `version 1` line".into()));
    }
    Ok(out)
}
