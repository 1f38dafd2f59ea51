//! JSON instance files.
//!
//! ```json
//! {"version": 1, "n": 1, "A": [[0], [1], [2]], "alpha": ["1", "2", "1"]}
//! ```
//!
//! A single configuration can be given at top level (`A` with `alpha` or
//! `weights`); several go in `blocks`. Coordinates are `"p/q"` strings or
//! `{"q": "p/q", "base": "r", "exponent": "e/f"}`. Weight entries are
//! `{"place": "2" | "inf", "multiplicity": "1", "tau": ["log(2)", "0"]}`.

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::arith::{format_rational, parse_rational, Q};
use crate::error::Error;
use crate::invariants::{Block, InstanceOptions, MultiInstance, ToricInstance};
use crate::logvalue::LogValue;
use crate::places::{weights_from_point, Coordinate, PlaceEntry, PlaceWeights};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default = "default_version")]
    pub version: u32,
    pub n: usize,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<CoordinateLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightEntryFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "OptionsFile::is_default")]
    pub options: OptionsFile,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockFile {
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<CoordinateLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightEntryFile>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordinateLiteral {
    Integer(i64),
    Plain(String),
    Radical {
        q: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exponent: Option<String>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntryFile {
    pub place: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<String>,
    pub tau: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsFile {
    #[serde(default)]
    pub normalized_mode: bool,
    #[serde(default)]
    pub waive_product_formula: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_cap_bits: Option<u32>,
}

impl OptionsFile {
    fn is_default(&self) -> bool {
        *self == Self::default()
    }
}

/// Where a block's weights came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSource {
    Point(Vec<Coordinate>),
    Supplied(PlaceWeights),
    /// Neither `alpha` nor `weights`: all weights zero.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockData {
    pub points: Vec<Vec<i64>>,
    pub source: WeightSource,
    pub weights: PlaceWeights,
}

/// A validated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub blocks: Vec<BlockData>,
    pub b: Option<Vec<i64>>,
    pub c: Option<Vec<usize>>,
    pub samples: Vec<Vec<Q>>,
    pub options: InstanceOptions,
    pub precision_cap_bits: Option<u32>,
}

fn field(path: impl Into<String>) -> impl FnOnce(Error) -> CliError {
    let path = path.into();
    move |source| CliError::Field { field: path, source }
}

fn parse_coordinate(lit: &CoordinateLiteral) -> Result<Coordinate, Error> {
    match lit {
        CoordinateLiteral::Integer(k) => Ok(Coordinate::rational(Q::from_integer((*k).into()))),
        CoordinateLiteral::Plain(s) => Ok(Coordinate::rational(parse_rational(s)?)),
        CoordinateLiteral::Radical { q, base, exponent } => {
            let one = || Q::from_integer(1.into());
            let base = base.as_deref().map(parse_rational).transpose()?.unwrap_or_else(one);
            let exponent = exponent.as_deref().map(parse_rational).transpose()?.unwrap_or_else(one);
            Coordinate::new(parse_rational(q)?, base, exponent)
        }
    }
}

fn render_coordinate(c: &Coordinate) -> CoordinateLiteral {
    if c.base() == &Q::from_integer(1.into()) && c.exponent() == &Q::from_integer(0.into()) {
        return CoordinateLiteral::Plain(format_rational(c.q()));
    }
    CoordinateLiteral::Radical {
        q: format_rational(c.q()),
        base: Some(format_rational(c.base())),
        exponent: Some(format_rational(c.exponent())),
    }
}

fn parse_block(path: &str, n: usize, b: &BlockFile) -> Result<BlockData, CliError> {
    let points = b.a.clone().ok_or_else(|| CliError::Field {
        field: format!("{path}A"),
        source: Error::invalid("missing configuration"),
    })?;
    if points.is_empty() {
        return Err(field(format!("{path}A"))(Error::Empty("configuration")));
    }
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(field(format!("{path}A"))(Error::DimensionMismatch {
            expected: n,
            found: p.len(),
        }));
    }
    let (source, weights) = match (&b.alpha, &b.weights) {
        (Some(_), Some(_)) => {
            return Err(field(path.trim_end_matches('.'))(Error::invalid(
                "give either alpha or weights, not both",
            )))
        }
        (Some(alpha), None) => {
            let f = format!("{path}alpha");
            if alpha.len() != points.len() {
                return Err(field(f)(Error::DimensionMismatch {
                    expected: points.len(),
                    found: alpha.len(),
                }));
            }
            let coords = alpha
                .iter()
                .map(parse_coordinate)
                .collect::<Result<Vec<_>, _>>()
                .map_err(field(f.clone()))?;
            let w = weights_from_point(&coords).map_err(field(f))?;
            (WeightSource::Point(coords), w)
        }
        (None, Some(entries)) => {
            let f = format!("{path}weights");
            let parsed = entries
                .iter()
                .map(|e| {
                    let multiplicity = match &e.multiplicity {
                        Some(m) => parse_rational(m)?,
                        None => Q::from_integer(1.into()),
                    };
                    let tau = e
                        .tau
                        .iter()
                        .map(|t| t.parse::<LogValue>())
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(PlaceEntry {
                        place: e.place.parse()?,
                        multiplicity,
                        tau,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()
                .map_err(field(f.clone()))?;
            let w = PlaceWeights::new(points.len(), parsed).map_err(field(f))?;
            (WeightSource::Supplied(w.clone()), w)
        }
        (None, None) => (WeightSource::Trivial, PlaceWeights::trivial(points.len())),
    };
    Ok(BlockData {
        points,
        source,
        weights,
    })
}

/// Parses and fully validates an instance file.
pub fn parse_instance(text: &str) -> Result<Instance, CliError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| {
        CliError::Syntax(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    from_file(&file)
}

pub fn from_file(file: &InstanceFile) -> Result<Instance, CliError> {
    if file.version != FORMAT_VERSION {
        return Err(field("version")(Error::invalid(format!(
            "unsupported version {}",
            file.version
        ))));
    }
    let n = file.n;
    let single = BlockFile {
        a: file.a.clone(),
        alpha: file.alpha.clone(),
        weights: file.weights.clone(),
    };
    let has_single = single.a.is_some() || single.alpha.is_some() || single.weights.is_some();
    let blocks = match (&file.blocks, has_single) {
        (Some(_), true) => {
            return Err(field("blocks")(Error::invalid(
                "give either top-level A or blocks, not both",
            )))
        }
        (Some(bs), false) => {
            if bs.is_empty() {
                return Err(field("blocks")(Error::Empty("block list")));
            }
            bs.iter()
                .enumerate()
                .map(|(i, b)| parse_block(&format!("blocks[{i}]."), n, b))
                .collect::<Result<Vec<_>, _>>()?
        }
        (None, _) => vec![parse_block("", n, &single)?],
    };
    let options = InstanceOptions {
        normalized_mode: file.options.normalized_mode,
        waive_product_formula: file.options.waive_product_formula,
    };
    let samples = file
        .samples
        .iter()
        .flatten()
        .enumerate()
        .map(|(i, s)| {
            let f = format!("samples[{i}]");
            if s.len() != n {
                return Err(field(f)(Error::DimensionMismatch {
                    expected: n,
                    found: s.len(),
                }));
            }
            s.iter()
                .map(|x| parse_rational(x))
                .collect::<Result<Vec<_>, _>>()
                .map_err(field(f))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let inst = Instance {
        n,
        blocks,
        b: file.b.clone(),
        c: file.c.clone(),
        samples,
        options,
        precision_cap_bits: file.options.precision_cap_bits,
    };
    inst.validate()?;
    Ok(inst)
}

impl Instance {
    /// Eagerly runs the checks of the modules the instance feeds into.
    fn validate(&self) -> Result<(), CliError> {
        if let Some(bits) = self.precision_cap_bits {
            if bits < 64 {
                return Err(field("options.precision_cap_bits")(Error::invalid(
                    "precision cap must be at least 64 bits",
                )));
            }
        }
        if self.blocks.len() == 1 {
            self.toric()?;
        }
        if let Some(b) = &self.b {
            let len = self.blocks[0].points.len();
            if self.blocks.len() != 1 || b.len() != len {
                return Err(field("b")(Error::DimensionMismatch {
                    expected: len,
                    found: b.len(),
                }));
            }
        }
        if self.c.is_some() {
            self.multi()?;
        } else if self.blocks.len() > 1 {
            return Err(field("c")(Error::invalid("several blocks need an index vector c")));
        }
        Ok(())
    }

    /// The single configuration as a toric instance.
    pub fn toric(&self) -> Result<ToricInstance, CliError> {
        if self.blocks.len() != 1 {
            return Err(CliError::Incompatible(format!(
                "needs a single configuration, found {} blocks",
                self.blocks.len()
            )));
        }
        let b = &self.blocks[0];
        ToricInstance::new(b.points.clone(), b.weights.clone(), self.options).map_err(field("A"))
    }

    /// The blocks with the index vector `c`.
    pub fn multi(&self) -> Result<MultiInstance, CliError> {
        let c = self
            .c
            .clone()
            .ok_or_else(|| CliError::Incompatible("needs the index vector c".into()))?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block {
                points: b.points.clone(),
                weights: b.weights.clone(),
            })
            .collect();
        MultiInstance::new(blocks, c, self.options).map_err(field("c"))
    }

    pub fn to_file(&self) -> InstanceFile {
        let block_file = |b: &BlockData| BlockFile {
            a: Some(b.points.clone()),
            alpha: match &b.source {
                WeightSource::Point(c) => Some(c.iter().map(render_coordinate).collect()),
                _ => None,
            },
            weights: match &b.source {
                WeightSource::Supplied(w) => Some(
                    w.entries()
                        .iter()
                        .map(|e| WeightEntryFile {
                            place: e.place.to_string(),
                            multiplicity: Some(format_rational(&e.multiplicity)),
                            tau: e.tau.iter().map(|t| t.to_string()).collect(),
                        })
                        .collect(),
                ),
                _ => None,
            },
        };
        let (single, blocks) = if self.blocks.len() == 1 {
            (block_file(&self.blocks[0]), None)
        } else {
            (BlockFile::default(), Some(self.blocks.iter().map(block_file).collect()))
        };
        InstanceFile {
            version: FORMAT_VERSION,
            n: self.n,
            a: single.a,
            alpha: single.alpha,
            weights: single.weights,
            blocks,
            b: self.b.clone(),
            c: self.c.clone(),
            samples: (!self.samples.is_empty())
                .then(|| self.samples.iter().map(|s| s.iter().map(format_rational).collect()).collect()),
            options: OptionsFile {
                normalized_mode: self.options.normalized_mode,
                waive_product_formula: self.options.waive_product_formula,
                precision_cap_bits: self.precision_cap_bits,
            },
        }
    }
}

/// Pretty JSON text that [`parse_instance`] reads back to the same instance.
pub fn render(inst: &Instance) -> String {
    serde_json::to_string_pretty(&inst.to_file()).expect("instance files serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic_instance() {
        let i = parse_instance(r#"{"n":1, "A":[[0],[1],[2]], "alpha":["1","2","1"]}"#).unwrap();
        assert_eq!(i.blocks.len(), 1);
        assert_eq!(i.blocks[0].weights.entries().len(), 2);
        assert_eq!(parse_instance(&render(&i)).unwrap(), i);
    }

    #[test]
    fn zero_coordinate() {
        let e = parse_instance(r#"{"n":1, "A":[[0],[1],[2]], "alpha":["1","0","1"]}"#).unwrap_err();
        assert!(e.to_string().contains("zero coordinate"), "{e}");
        assert!(e.to_string().starts_with("alpha"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn unsaturated_lattice() {
        let e = parse_instance(r#"{"n":1, "A":[[0],[2]]}"#).unwrap_err();
        assert!(e.to_string().contains("index 2"), "{e}");
        let ok = parse_instance(r#"{"n":1, "A":[[0],[2]], "options":{"normalized_mode":true}}"#);
        assert!(ok.is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_instance("{\"n\":1,\n \"A\": [[0],[1]\n").unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
        let e = parse_instance(r#"{"n":1, "A":[[0],[1]], "colour":"red"}"#).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
    }

    #[test]
    fn shape_checks() {
        assert!(parse_instance(r#"{"n":2, "A":[[0],[1]]}"#).is_err());
        assert!(parse_instance(r#"{"n":1, "A":[[0],[1]], "alpha":["1"]}"#).is_err());
        assert!(parse_instance(r#"{"n":1, "A":[[0],[1]], "b":[1]}"#).is_err());
        assert!(parse_instance(r#"{"n":1, "blocks":[{"A":[[0],[1]]},{"A":[[0],[1]]}]}"#).is_err());
        assert!(parse_instance(r#"{"n":1, "A":[[0],[1]], "alpha":["1","2"], "weights":[]}"#).is_err());
    }

    #[test]
    fn radical_and_supplied_weights_round_trip() {
        let text = r#"{
            "n": 1,
            "blocks": [
                {"A": [[0],[1],[2]], "alpha": ["1/3", {"q": "1", "base": "2", "exponent": "1/3"}, 5]},
                {"A": [[0],[1]], "weights": [
                    {"place": "inf", "tau": ["0", "log(7)"]},
                    {"place": "7", "multiplicity": "1", "tau": ["0", "-log(7)"]}
                ]}
            ],
            "c": [1, 1],
            "samples": [["1/2"]],
            "options": {"precision_cap_bits": 4096}
        }"#;
        let i = parse_instance(text).unwrap();
        assert_eq!(i.blocks.len(), 2);
        assert_eq!(i.precision_cap_bits, Some(4096));
        assert_eq!(parse_instance(&render(&i)).unwrap(), i);
    }
}
