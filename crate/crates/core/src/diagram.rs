use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Which end of an arrow sits at a slot. Arrows point from the over-strand
/// (tail, written `O`) to the under-strand (head, written `U`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Tail,
    Head,
}

impl End {
    pub fn letter(self) -> char {
        match self {
            End::Tail => 'O',
            End::Head => 'U',
        }
    }

    pub fn other(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }
}

/// Local writhe of a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn from_value(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Pos),
            -1 => Ok(Sign::Neg),
            _ => Err(Error::Invalid(format!("sign must be +1 or -1, got {v}"))),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

/// A slot on a component: one endpoint of one arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slot {
    pub arrow: usize,
    pub end: End,
}

/// A position on a component, counted from the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Endpoint {
    pub component: usize,
    pub position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    /// Endpoint on the over-passing strand.
    pub tail: Endpoint,
    /// Endpoint on the under-passing strand.
    pub head: Endpoint,
    pub sign: Sign,
}

impl Arrow {
    pub fn endpoint(&self, end: End) -> Endpoint {
        match end {
            End::Tail => self.tail,
            End::Head => self.head,
        }
    }
}

/// One token of a Gauss word: `O7+`, `U3-`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Token {
    pub end: End,
    pub label: u64,
    pub sign: Sign,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.end.letter(), self.label, self.sign.symbol())
    }
}

/// A based, ordered Gauss diagram. Immutable after construction; every
/// operation returns a new diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussDiagram {
    components: Vec<Vec<Slot>>,
    arrows: Vec<Arrow>,
}

impl GaussDiagram {
    /// The `n`-component unlink (no arrows).
    pub fn unlink(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("a diagram needs at least one component".into()));
        }
        Ok(GaussDiagram { components: vec![Vec::new(); n], arrows: Vec::new() })
    }

    /// Builds a diagram from Gauss words, renumbering crossings by first
    /// occurrence (component order, then position).
    pub fn from_tokens(words: &[Vec<Token>]) -> Result<Self> {
        Self::from_tokens_with_labels(words).map(|(g, _)| g)
    }

    /// Like [`GaussDiagram::from_tokens`], also returning the original label
    /// of each arrow of the result.
    pub fn from_tokens_with_labels(words: &[Vec<Token>]) -> Result<(Self, Vec<u64>)> {
        if words.is_empty() {
            return Err(Error::Invalid("a diagram needs at least one component".into()));
        }
        struct Seen {
            index: usize,
            tail: Option<Endpoint>,
            head: Option<Endpoint>,
            sign: Sign,
            count: usize,
        }
        let mut seen: HashMap<u64, Seen> = HashMap::new();
        let mut labels = Vec::new();
        let mut components = Vec::with_capacity(words.len());
        for (c, word) in words.iter().enumerate() {
            let mut slots = Vec::with_capacity(word.len());
            for (p, tok) in word.iter().enumerate() {
                let here = Endpoint { component: c, position: p };
                let entry = seen.entry(tok.label).or_insert_with(|| {
                    labels.push(tok.label);
                    Seen { index: labels.len() - 1, tail: None, head: None, sign: tok.sign, count: 0 }
                });
                entry.count += 1;
                if entry.count > 2 {
                    continue;
                }
                if entry.sign != tok.sign {
                    return Err(Error::SignMismatch { label: tok.label });
                }
                let place = match tok.end {
                    End::Tail => &mut entry.tail,
                    End::Head => &mut entry.head,
                };
                if place.is_some() {
                    return Err(Error::LabelKind { label: tok.label, kind: tok.end.letter() });
                }
                *place = Some(here);
                slots.push(Slot { arrow: entry.index, end: tok.end });
            }
            components.push(slots);
        }
        let mut arrows = vec![None; labels.len()];
        for (label, s) in &seen {
            if s.count != 2 {
                return Err(Error::LabelCount { label: *label, count: s.count });
            }
            arrows[s.index] = Some(Arrow { tail: s.tail.unwrap(), head: s.head.unwrap(), sign: s.sign });
        }
        let arrows = arrows.into_iter().map(|a| a.expect("every label indexed")).collect();
        Ok((GaussDiagram { components, arrows }, labels))
    }

    /// Gauss words with label = arrow index + 1.
    pub fn to_tokens(&self) -> Vec<Vec<Token>> {
        self.components
            .iter()
            .map(|slots| {
                slots
                    .iter()
                    .map(|s| Token { end: s.end, label: s.arrow as u64 + 1, sign: self.arrows[s.arrow].sign })
                    .collect()
            })
            .collect()
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn components(&self) -> &[Vec<Slot>] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &[Slot] {
        &self.components[c]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn slot(&self, e: Endpoint) -> Slot {
        self.components[e.component][e.position]
    }

    pub fn require_components(&self, m: usize) -> Result<()> {
        if self.components.len() != m {
            return Err(Error::ComponentCount { expected: m, found: self.components.len() });
        }
        Ok(())
    }

    /// True if the arrows are numbered by first occurrence.
    pub fn is_canonical(&self) -> bool {
        let mut next = 0;
        for slots in &self.components {
            for s in slots {
                if s.arrow == next {
                    next += 1;
                } else if s.arrow > next {
                    return false;
                }
            }
        }
        true
    }

    /// The same diagram with arrows renumbered by first occurrence.
    pub fn canonical(&self) -> Self {
        GaussDiagram::from_tokens(&self.to_tokens()).expect("a valid diagram re-validates")
    }

    /// The same diagram with its arrow list reordered: arrow `order[k]` of
    /// `self` becomes arrow `k`. Useful to check order independence.
    pub fn permute_arrows(&self, order: &[usize]) -> Result<Self> {
        let n = self.arrows.len();
        let mut new_index = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::BadParameter("arrow order has wrong length".into()));
        }
        for (k, &old) in order.iter().enumerate() {
            if old >= n || new_index[old] != usize::MAX {
                return Err(Error::BadParameter("arrow order is not a permutation".into()));
            }
            new_index[old] = k;
        }
        let components = self
            .components
            .iter()
            .map(|slots| slots.iter().map(|s| Slot { arrow: new_index[s.arrow], end: s.end }).collect())
            .collect();
        let arrows = order.iter().map(|&old| self.arrows[old]).collect();
        Ok(GaussDiagram { components, arrows })
    }

    /// Reorders components: the new component `r` is the old component
    /// `p(r)`. Requires exactly three components.
    pub fn permute_components(&self, p: Permutation) -> Result<Self> {
        self.require_components(3)?;
        let order: Vec<usize> = (0..3).map(|r| p.apply(r)).collect();
        Ok(self.reorder_components(&order))
    }

    /// New component `r` is old component `order[r]`; `order` must be a
    /// permutation of the component indices.
    pub fn reorder_components(&self, order: &[usize]) -> Self {
        let words = self.to_tokens();
        let reordered: Vec<Vec<Token>> = order.iter().map(|&c| words[c].clone()).collect();
        GaussDiagram::from_tokens(&reordered).expect("reordering keeps validity")
    }

    /// Reverses the orientation of component `c`. The base point stays put,
    /// so the slot order reverses; crossings between `c` and another
    /// component change sign, self-crossings of `c` keep theirs.
    pub fn reverse_component(&self, c: usize) -> Result<Self> {
        self.check_component(c)?;
        let mut words = self.to_tokens();
        words[c].reverse();
        for (i, a) in self.arrows.iter().enumerate() {
            let touches = (a.tail.component == c) != (a.head.component == c);
            if touches {
                let label = i as u64 + 1;
                for w in words.iter_mut() {
                    for t in w.iter_mut().filter(|t| t.label == label) {
                        t.sign = t.sign.flip();
                    }
                }
            }
        }
        GaussDiagram::from_tokens(&words)
    }

    /// Mirror image: every crossing changes sign and over/under swap.
    pub fn mirror(&self) -> Self {
        let words: Vec<Vec<Token>> = self
            .to_tokens()
            .into_iter()
            .map(|w| w.into_iter().map(|t| Token { end: t.end.other(), label: t.label, sign: t.sign.flip() }).collect())
            .collect();
        GaussDiagram::from_tokens(&words).expect("mirroring keeps validity")
    }

    /// Disjoint union: components of `other` are appended after ours.
    pub fn disjoint_union(&self, other: &GaussDiagram) -> Self {
        let mut words = self.to_tokens();
        let shift = self.arrows.len() as u64;
        for w in other.to_tokens() {
            words.push(w.into_iter().map(|t| Token { label: t.label + shift, ..t }).collect());
        }
        GaussDiagram::from_tokens(&words).expect("union of valid diagrams is valid")
    }

    /// Deletes the given arrows (both endpoints).
    pub fn without_arrows(&self, remove: &[usize]) -> Self {
        let words: Vec<Vec<Token>> = self
            .to_tokens()
            .into_iter()
            .map(|w| w.into_iter().filter(|t| !remove.contains(&(t.label as usize - 1))).collect())
            .collect();
        GaussDiagram::from_tokens(&words).expect("deleting arrows keeps validity")
    }

    pub fn check_component(&self, c: usize) -> Result<()> {
        if c >= self.components.len() {
            return Err(Error::ComponentIndex { index: c, count: self.components.len() });
        }
        Ok(())
    }

    /// Parses the Gauss-code text format: components separated by `;` or
    /// newlines, tokens like `O1+`/`U12-`, `#` starts a comment. A line that
    /// holds only a comment is skipped; an empty line is an empty component.
    pub fn parse(text: &str) -> Result<Self> {
        let mut words: Vec<Vec<Token>> = Vec::new();
        for (ln, raw_line) in text.lines().enumerate() {
            let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
            let (body, had_comment) = match line.find('#') {
                Some(i) => (&line[..i], true),
                None => (line, false),
            };
            if had_comment && body.trim().is_empty() {
                continue;
            }
            let mut offset = 0;
            for part in body.split(';') {
                words.push(parse_word(part, ln + 1, offset + 1)?);
                offset += part.chars().count() + 1;
            }
        }
        if words.is_empty() {
            return Err(Error::Syntax { line: 1, column: 1, message: "no components".into() });
        }
        GaussDiagram::from_tokens(&words)
    }

    /// Canonical text: one component per line, labels by first occurrence.
    pub fn to_code(&self) -> String {
        let g = if self.is_canonical() { None } else { Some(self.canonical()) };
        let g = g.as_ref().unwrap_or(self);
        let mut out = String::new();
        for w in g.to_tokens() {
            let line: Vec<String> = w.iter().map(|t| t.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the JSON alternative `{"components": [[{"kind":"O","label":1,"sign":1}, ...], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: JsonDiagram = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let mut words = Vec::with_capacity(doc.components.len());
        for comp in doc.components {
            let mut w = Vec::with_capacity(comp.len());
            for t in comp {
                let end = match t.kind.as_str() {
                    "O" => End::Tail,
                    "U" => End::Head,
                    k => return Err(Error::Json(format!("kind must be \"O\" or \"U\", got {k:?}"))),
                };
                w.push(Token { end, label: t.label, sign: Sign::from_value(t.sign)? });
            }
            words.push(w);
        }
        GaussDiagram::from_tokens(&words)
    }

    pub fn to_json(&self) -> String {
        let g = self.canonical();
        let doc = JsonDiagram {
            components: g
                .to_tokens()
                .into_iter()
                .map(|w| {
                    w.into_iter()
                        .map(|t| JsonToken { kind: t.end.letter().to_string(), label: t.label, sign: t.sign.value() })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("plain data serializes")
    }
}

impl fmt::Display for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_code())
    }
}

impl std::str::FromStr for GaussDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GaussDiagram::parse(s)
    }
}

/// Serialized as its Gauss-code text.
impl Serialize for GaussDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_code())
    }
}

impl<'de> Deserialize<'de> for GaussDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        GaussDiagram::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonDiagram {
    components: Vec<Vec<JsonToken>>,
}

#[derive(Serialize, Deserialize)]
struct JsonToken {
    kind: String,
    label: u64,
    sign: i64,
}

fn parse_word(part: &str, line: usize, first_column: usize) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = part.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        let word: String = chars[start..i].iter().collect();
        let err = |message: String| Error::Syntax { line, column: first_column + start, message };
        let mut it = word.chars();
        let end = match it.next() {
            Some('O') | Some('o') => End::Tail,
            Some('U') | Some('u') => End::Head,
            _ => return Err(err(format!("token `{word}` must start with O or U"))),
        };
        let rest: String = it.collect();
        let sign = match rest.chars().last() {
            Some('+') => Sign::Pos,
            Some('-') => Sign::Neg,
            _ => return Err(err(format!("token `{word}` must end with + or -"))),
        };
        let digits = &rest[..rest.len() - 1];
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err(format!("token `{word}` needs a decimal crossing label")));
        }
        let label = digits.parse::<u64>().map_err(|e| err(format!("label in `{word}`: {e}")))?;
        tokens.push(Token { end, label, sign });
    }
    Ok(tokens)
}
