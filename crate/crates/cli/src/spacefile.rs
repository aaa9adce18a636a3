//! The line-oriented space-file format.
//!
//! ```text
//! boxspace v1
//! component 6
//! weights 0.25 0.15 0.1 0.1 0.2 0.2      # optional, default uniform
//! pairs 0 0  1 0  0 1                    # relation pairs, x y x y ...
//! component 9
//! generator torus 3                      # named per-component generator
//! ```
//!
//! `#` starts a comment. Each `component <size>` opens a block; `weights`,
//! `labels`, `pairs` and `generator` lines apply to the most recent block.
//! Named generators (`cycle`, `torus <side>`, `margulis <side>`,
//! `complete`) add the corresponding edge relation plus the diagonal.
//! Serialization always writes explicit weights and pairs, so
//! parse(serialize(f)) reproduces `f` exactly.

use std::sync::Arc;

use boxspace::{BoxSpace, Relation, SpaceWeights, WeightedComponent};
use thiserror::Error;

/// A parsed space file: the box space, its weights (uniform unless given),
/// and the generator relation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceFile {
    pub space: Arc<BoxSpace>,
    pub weights: SpaceWeights,
    pub relation: Relation,
}

#[derive(Debug, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

struct ComponentBlock {
    size: u32,
    weights: Option<Vec<f64>>,
    labels: Option<Vec<String>>,
    pairs: Vec<(u32, u32)>,
    declared_at: usize,
}

impl SpaceFile {
    /// A space file with uniform weights and the given relation.
    pub fn new(space: Arc<BoxSpace>, relation: Relation) -> Self {
        SpaceFile {
            weights: SpaceWeights::uniform(space.clone()),
            space,
            relation,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut blocks: Vec<ComponentBlock> = Vec::new();
        let mut saw_header = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let keyword = tokens.next().expect("nonempty line");
            if !saw_header {
                if keyword == "boxspace" && tokens.next() == Some("v1") {
                    saw_header = true;
                    continue;
                }
                return Err(err(line_no, "expected header `boxspace v1`"));
            }
            match keyword {
                "component" => {
                    let size: u32 = tokens
                        .next()
                        .ok_or_else(|| err(line_no, "component needs a size"))?
                        .parse()
                        .map_err(|_| err(line_no, "component size must be an integer"))?;
                    if size == 0 {
                        return Err(err(line_no, "component size must be at least 1"));
                    }
                    blocks.push(ComponentBlock {
                        size,
                        weights: None,
                        labels: None,
                        pairs: Vec::new(),
                        declared_at: line_no,
                    });
                }
                "weights" => {
                    let block = blocks
                        .last_mut()
                        .ok_or_else(|| err(line_no, "weights before any component"))?;
                    let vals: Result<Vec<f64>, _> = tokens.map(str::parse::<f64>).collect();
                    let vals = vals.map_err(|_| err(line_no, "weights must be numbers"))?;
                    if vals.len() != block.size as usize {
                        return Err(err(
                            line_no,
                            format!("expected {} weights, got {}", block.size, vals.len()),
                        ));
                    }
                    if block.weights.is_some() {
                        return Err(err(line_no, "duplicate weights line"));
                    }
                    block.weights = Some(vals);
                }
                "labels" => {
                    let block = blocks
                        .last_mut()
                        .ok_or_else(|| err(line_no, "labels before any component"))?;
                    let names: Vec<String> = tokens.map(str::to_owned).collect();
                    if names.len() != block.size as usize {
                        return Err(err(
                            line_no,
                            format!("expected {} labels, got {}", block.size, names.len()),
                        ));
                    }
                    if block.labels.is_some() {
                        return Err(err(line_no, "duplicate labels line"));
                    }
                    block.labels = Some(names);
                }
                "pairs" => {
                    let block = blocks
                        .last_mut()
                        .ok_or_else(|| err(line_no, "pairs before any component"))?;
                    let idxs: Result<Vec<u32>, _> = tokens.map(str::parse::<u32>).collect();
                    let idxs = idxs.map_err(|_| err(line_no, "pairs must be point indices"))?;
                    if idxs.len() % 2 != 0 {
                        return Err(err(line_no, "pairs line has an odd number of indices"));
                    }
                    for chunk in idxs.chunks(2) {
                        let (x, y) = (chunk[0], chunk[1]);
                        if x >= block.size || y >= block.size {
                            return Err(err(
                                line_no,
                                format!("pair ({x}, {y}) outside component of size {}", block.size),
                            ));
                        }
                        block.pairs.push((x, y));
                    }
                }
                "generator" => {
                    let block = blocks
                        .last_mut()
                        .ok_or_else(|| err(line_no, "generator before any component"))?;
                    let name = tokens
                        .next()
                        .ok_or_else(|| err(line_no, "generator needs a name"))?;
                    let args: Vec<&str> = tokens.collect();
                    named_generator(block, name, &args, line_no)?;
                }
                other => {
                    return Err(err(line_no, format!("unknown keyword `{other}`")));
                }
            }
        }
        if !saw_header {
            return Err(err(1, "expected header `boxspace v1`"));
        }
        if blocks.is_empty() {
            return Err(err(1, "a space file needs at least one component"));
        }

        let sizes: Vec<u32> = blocks.iter().map(|b| b.size).collect();
        let any_labels = blocks.iter().any(|b| b.labels.is_some());
        let space = if any_labels {
            let labels: Vec<Vec<String>> = blocks
                .iter()
                .map(|b| {
                    b.labels
                        .clone()
                        .unwrap_or_else(|| (0..b.size).map(|i| i.to_string()).collect())
                })
                .collect();
            BoxSpace::with_labels(sizes, labels)
        } else {
            BoxSpace::new(sizes)
        }
        .map_err(|e| err(1, e.to_string()))?;

        let mut weighted = Vec::new();
        for (c, block) in blocks.iter().enumerate() {
            let wc = match &block.weights {
                None => WeightedComponent::uniform(c as u32, block.size),
                Some(raw) => {
                    let sum: f64 = raw.iter().sum();
                    if (sum - 1.0).abs() <= 1e-12 {
                        WeightedComponent::new(c as u32, raw.clone())
                    } else {
                        WeightedComponent::normalized(c as u32, raw.clone())
                    }
                }
            }
            .map_err(|e| err(block.declared_at, e.to_string()))?;
            weighted.push(wc);
        }
        let weights =
            SpaceWeights::new(space.clone(), weighted).map_err(|e| err(1, e.to_string()))?;

        let relation = Relation::from_pairs(
            space.clone(),
            blocks
                .iter()
                .enumerate()
                .flat_map(|(c, b)| b.pairs.iter().map(move |&p| (c as u32, p)))
                .collect::<Vec<_>>(),
        )
        .map_err(|e| err(1, e.to_string()))?;

        Ok(SpaceFile {
            space,
            weights,
            relation,
        })
    }

    /// Canonical serialization: explicit weights and pairs, 16 pairs per
    /// line. Parsing the output reproduces the value exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::from("boxspace v1\n");
        for (c, &size) in self.space.sizes().iter().enumerate() {
            out.push_str(&format!("component {size}\n"));
            if let Some(all) = self.space.point_labels() {
                out.push_str("labels");
                for name in &all[c] {
                    out.push(' ');
                    out.push_str(name);
                }
                out.push('\n');
            }
            out.push_str("weights");
            for w in self.weights.component(c as u32).weights() {
                out.push_str(&format!(" {w}"));
            }
            out.push('\n');
            let pairs = self.relation.component_pairs(c as u32);
            for chunk in pairs.chunks(16) {
                out.push_str("pairs");
                for &(x, y) in chunk {
                    out.push_str(&format!(" {x} {y}"));
                }
                out.push('\n');
            }
        }
        out
    }
}

fn named_generator(
    block: &mut ComponentBlock,
    name: &str,
    args: &[&str],
    line_no: usize,
) -> Result<(), ParseError> {
    let n = block.size;
    match name {
        "cycle" => {
            if n < 3 {
                return Err(err(line_no, "cycle needs at least 3 points"));
            }
            for x in 0..n {
                block.pairs.push((x, x));
                block.pairs.push((x, (x + 1) % n));
                block.pairs.push(((x + 1) % n, x));
            }
        }
        "torus" => {
            let side = square_side(args, n, line_no)?;
            for r in 0..side {
                for c in 0..side {
                    let at = r * side + c;
                    block.pairs.push((at, at));
                    for (dr, dc) in [(1, 0), (side - 1, 0), (0, 1), (0, side - 1)] {
                        let nb = ((r + dr) % side) * side + (c + dc) % side;
                        block.pairs.push((nb, at));
                        block.pairs.push((at, nb));
                    }
                }
            }
        }
        "margulis" => {
            let side = square_side(args, n, line_no)?;
            let s = side;
            for x in 0..s {
                for y in 0..s {
                    let at = x * s + y;
                    block.pairs.push((at, at));
                    let neighbors = [
                        ((x + 2 * y) % s, y),
                        ((x + s - (2 * y) % s) % s, y),
                        ((x + 2 * y + 1) % s, y),
                        ((x + 2 * s - (2 * y + 1) % s) % s, y),
                        (x, (y + 2 * x) % s),
                        (x, (y + s - (2 * x) % s) % s),
                        (x, (y + 2 * x + 1) % s),
                        (x, (y + 2 * s - (2 * x + 1) % s) % s),
                    ];
                    for (nx, ny) in neighbors {
                        let nb = (nx % s) * s + (ny % s);
                        block.pairs.push((nb, at));
                        block.pairs.push((at, nb));
                    }
                }
            }
        }
        "complete" => {
            for x in 0..n {
                for y in 0..n {
                    block.pairs.push((x, y));
                }
            }
        }
        other => {
            return Err(err(line_no, format!("unknown generator `{other}`")));
        }
    }
    Ok(())
}

fn square_side(args: &[&str], size: u32, line_no: usize) -> Result<u32, ParseError> {
    let side: u32 = args
        .first()
        .ok_or_else(|| err(line_no, "generator needs a side argument"))?
        .parse()
        .map_err(|_| err(line_no, "side must be an integer"))?;
    if side < 2 {
        return Err(err(line_no, "side must be at least 2"));
    }
    if side * side != size {
        return Err(err(
            line_no,
            format!("component size {size} is not side^2 = {}", side * side),
        ));
    }
    Ok(side)
}
