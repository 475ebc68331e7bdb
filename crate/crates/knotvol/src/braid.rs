//! Braid words and the doubled-strand crossing diagram.
//!
//! A braid word in the Artin generators is parsed from text, validated, and
//! turned into the crossing diagram of its (1,1)-tangle closure: every braid
//! strand doubles into two momentum lines, each letter ±i becomes a crossing
//! on the four lines of strands i, i+1, and the closure identifies top and
//! bottom of every line except the cut one.
//!
//! Text grammar (whitespace separated):
//!
//! ```text
//! word    := [ "strands=" N ] token+        (token+ may be empty only with
//! token   := signed integer  e.g. "1", "-2"  an explicit strands= header)
//!          | "s" index [ "^-1" ]            e.g. "s1", "s2^-1"
//! ```
//!
//! Without a header the strand count is max|index| + 1. The canonical
//! printer emits the numeric form.

use crate::error::{Error, Result};
use serde::Serialize;

/// A validated word in the Artin braid group B_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    n_strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    /// Build from explicit strand count and signed generator indices.
    pub fn new(n_strands: usize, letters: Vec<i32>) -> Result<Self> {
        if n_strands == 0 {
            return Err(Error::Config("braid needs at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize > n_strands - 1 {
                return Err(Error::IndexOutOfRange {
                    index: l as i64,
                    n_strands,
                });
            }
        }
        Ok(BraidWord { n_strands, letters })
    }

    pub fn n_strands(&self) -> usize {
        self.n_strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Sum of the letter exponents.
    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|&l| l.signum() as i64).sum()
    }

    /// Canonical numeric form; includes the strands header exactly when the
    /// count is not recoverable from the letters.
    pub fn canonical(&self) -> String {
        let inferred = self
            .letters
            .iter()
            .map(|l| l.unsigned_abs() as usize + 1)
            .max()
            .unwrap_or(1);
        let body = self
            .letters
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        if inferred == self.n_strands {
            body
        } else if body.is_empty() {
            format!("strands={}", self.n_strands)
        } else {
            format!("strands={} {}", self.n_strands, body)
        }
    }
}

impl std::fmt::Display for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Parse braid text; see the module grammar.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let mut letters: Vec<i32> = Vec::new();
    let mut strands: Option<usize> = None;
    let mut first = true;
    for (pos, tok) in tokens(text) {
        if first {
            first = false;
            if let Some(n) = tok.strip_prefix("strands=") {
                let n: usize = n.parse().map_err(|_| Error::Parse {
                    position: pos,
                    message: format!("bad strand count `{tok}`"),
                })?;
                if n == 0 {
                    return Err(Error::Parse {
                        position: pos,
                        message: "strand count must be positive".into(),
                    });
                }
                strands = Some(n);
                continue;
            }
        }
        letters.push(parse_token(pos, tok)?);
    }
    if letters.is_empty() && strands.is_none() {
        return Err(Error::Parse {
            position: 0,
            message: "empty braid word".into(),
        });
    }
    let inferred = letters
        .iter()
        .map(|l| l.unsigned_abs() as usize + 1)
        .max()
        .unwrap_or(1);
    let n = strands.unwrap_or(inferred);
    BraidWord::new(n, letters)
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - text.as_ptr() as usize, tok))
}

fn parse_token(pos: usize, tok: &str) -> Result<i32> {
    let bad = |message: String| Error::Parse {
        position: pos,
        message,
    };
    if let Some(rest) = tok.strip_prefix('s') {
        let (idx, inverse) = match rest.strip_suffix("^-1") {
            Some(i) => (i, true),
            None => (rest, false),
        };
        let idx: u32 = idx
            .parse()
            .map_err(|_| bad(format!("bad generator `{tok}`")))?;
        if idx == 0 {
            return Err(bad("generator index must be at least 1".into()));
        }
        return Ok(if inverse { -(idx as i32) } else { idx as i32 });
    }
    let v: i32 = tok
        .parse()
        .map_err(|_| bad(format!("unrecognized token `{tok}`")))?;
    if v == 0 {
        return Err(bad("generator index 0 is not valid".into()));
    }
    Ok(v)
}

/// Sum of the exponents of a braid word.
pub fn writhe(word: &BraidWord) -> i64 {
    word.writhe()
}

pub type SegmentId = usize;

/// One crossing of the doubled diagram. `slots` holds the eight incident
/// segment ids in the roles (p₁, p₂, p₃, p₄, p₁′, p₂′, p₃′, p₄′): unprimed
/// above the crossing, primed below, both numbered left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Crossing {
    /// +1 for the braid operator, −1 for its inverse.
    pub sign: i8,
    pub slots: [SegmentId; 8],
}

/// The doubled-strand crossing diagram of a (1,1)-tangle closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagram {
    pub n_strands: usize,
    pub n_segments: usize,
    pub crossings: Vec<Crossing>,
    /// Loose segments of the cut strand: the top and bottom of the opened
    /// momentum line (plus any strand-1 line no crossing ever touches).
    pub open_segments: Vec<SegmentId>,
    /// Segments pinned to momentum 0: the open segments together with the
    /// closed loop of the cut strand's partner line.
    pub pinned_segments: Vec<SegmentId>,
    /// Canonical text of the source word, when built from one.
    pub source: Option<String>,
}

/// Build the doubled crossing diagram of the braid closure cut at strand 1.
///
/// Strand j occupies columns 2j−2 and 2j−1 (left and right momentum line).
/// Letter ±i crosses columns 2i−2..2i+1. Closure joins bottom to top of
/// every column except column 0, which is cut open; the (1,1)-trace
/// identification closes column 1 and its loop is pinned to 0 along with the
/// open ends.
pub fn build_diagram(word: &BraidWord) -> Diagram {
    let cols = 2 * word.n_strands();
    // Union-find over provisional segment ids.
    let mut parent: Vec<usize> = (0..cols).collect();
    let mut current: Vec<usize> = (0..cols).collect();
    let top: Vec<usize> = (0..cols).collect();
    let mut crossings_raw: Vec<(i8, [usize; 8])> = Vec::new();

    for &letter in word.letters() {
        let base = 2 * (letter.unsigned_abs() as usize - 1);
        let mut slots = [0usize; 8];
        for k in 0..4 {
            slots[k] = current[base + k];
        }
        for k in 0..4 {
            let id = parent.len();
            parent.push(id);
            slots[4 + k] = id;
            current[base + k] = id;
        }
        crossings_raw.push((letter.signum() as i8, slots));
    }

    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    // Closure: bottom of each column meets its top, except the cut column 0.
    for c in 1..cols {
        let a = find(&mut parent, top[c]);
        let b = find(&mut parent, current[c]);
        parent[a] = b;
    }

    // Compact to dense ids.
    let mut dense: Vec<Option<usize>> = vec![None; parent.len()];
    let mut n_segments = 0;
    let mut densify = |parent: &mut Vec<usize>, dense: &mut Vec<Option<usize>>, x: usize| {
        let root = find(parent, x);
        *dense[root].get_or_insert_with(|| {
            let id = n_segments;
            n_segments += 1;
            id
        })
    };
    let crossings: Vec<Crossing> = crossings_raw
        .iter()
        .map(|(sign, slots)| {
            let mut s = [0usize; 8];
            for (dst, &src) in s.iter_mut().zip(slots.iter()) {
                *dst = densify(&mut parent, &mut dense, src);
            }
            Crossing {
                sign: *sign,
                slots: s,
            }
        })
        .collect();

    let open_top = densify(&mut parent, &mut dense, top[0]);
    let open_bottom = densify(&mut parent, &mut dense, current[0]);
    let partner = densify(&mut parent, &mut dense, top[1]);

    let mut open_segments = vec![open_top];
    if open_bottom != open_top {
        open_segments.push(open_bottom);
    }
    // A strand-1 line untouched by every crossing is a loose vertical line
    // of the tangle, not a closed loop.
    let mut incidence = vec![0usize; n_segments];
    for c in &crossings {
        for &s in &c.slots {
            incidence[s] += 1;
        }
    }
    if incidence[partner] == 0 && !open_segments.contains(&partner) {
        open_segments.push(partner);
    }
    let mut pinned_segments = open_segments.clone();
    if !pinned_segments.contains(&partner) {
        pinned_segments.push(partner);
    }

    Diagram {
        n_strands: word.n_strands(),
        n_segments,
        crossings,
        open_segments,
        pinned_segments,
        source: Some(word.canonical()),
    }
}

impl Diagram {
    /// How many crossing slots each segment appears in.
    pub fn slot_incidence(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_segments];
        for c in &self.crossings {
            for &s in &c.slots {
                counts[s] += 1;
            }
        }
        counts
    }

    /// Structural audit: internal segments sit in exactly two slots, open
    /// segments in at most one, and slot ids are in range.
    pub fn validate(&self) -> Result<()> {
        let counts = self.slot_incidence();
        for c in &self.crossings {
            for &s in &c.slots {
                if s >= self.n_segments {
                    return Err(Error::InconsistentConstraints(format!(
                        "slot id {s} out of range"
                    )));
                }
            }
        }
        for (seg, &n) in counts.iter().enumerate() {
            let open = self.open_segments.contains(&seg);
            if open && n > 1 {
                return Err(Error::InconsistentConstraints(format!(
                    "open segment {seg} appears {n} times"
                )));
            }
            if !open && n != 2 {
                return Err(Error::InconsistentConstraints(format!(
                    "internal segment {seg} appears {n} times, expected 2"
                )));
            }
        }
        Ok(())
    }
}
