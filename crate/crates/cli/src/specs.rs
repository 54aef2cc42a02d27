//! Sequence, matrix and domain specifications.
//!
//! Every spec has a JSON form. Parameterless kinds also have an inline
//! shorthand: `cesaro`, `inverse_of(phi)`, `compose(delta,cesaro)` for
//! matrices; `e`, `harmonic`, `unit:3`, `geometric:1/2`, `1,-1/2,3` for
//! sequences; `C` for the Cesàro domain.

use std::sync::Arc;

use bvspaces::banded::BandedMatrix;
use bvspaces::builders::{self, Domain, RieszWeights, WeightPair};
use bvspaces::rational::{format_rational, int, parse_rational, pow};
use bvspaces::{Error, Rational, Seq, Triangle};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A rational literal: `"-3/7"` or a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lit(pub Rational);

impl Serialize for Lit {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Lit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse_rational(&t).map(Lit).map_err(D::Error::custom),
            Raw::Int(i) => Ok(Lit(int(i))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    Zero,
    Const(Lit),
    /// `1/(k+1)`.
    Harmonic,
    /// `(k+1)^p`.
    Power(u32),
    /// `r^k`.
    Geometric(Lit),
    /// `e⁽ʲ⁾`.
    Unit(usize),
}

/// Inside JSON a sequence may also be given by its shorthand string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeqRepr")]
pub struct SeqSpec {
    pub prefix: Vec<Lit>,
    pub tail: Tail,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SeqRepr {
    Shorthand(String),
    Fields(SeqFields),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeqFields {
    #[serde(default)]
    prefix: Vec<Lit>,
    #[serde(default = "zero_tail")]
    tail: Tail,
}

impl TryFrom<SeqRepr> for SeqSpec {
    type Error = String;

    fn try_from(repr: SeqRepr) -> Result<Self, String> {
        match repr {
            SeqRepr::Shorthand(text) => SeqSpec::parse(&text).map_err(|e| e.to_string()),
            SeqRepr::Fields(SeqFields { prefix, tail }) => Ok(SeqSpec { prefix, tail }),
        }
    }
}

fn zero_tail() -> Tail {
    Tail::Zero
}

impl SeqSpec {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let text = text.trim();
        if text.starts_with('{') {
            return from_json(text);
        }
        let tail_only = |tail| SeqSpec { prefix: Vec::new(), tail };
        let arg = |a: &str| a.trim().to_owned();
        let (name, value) = match text.split_once(':') {
            Some((n, v)) => (n.trim(), Some(arg(v))),
            None => (text, None),
        };
        let int_arg = |v: &Option<String>| -> Result<u64, Error> {
            v.as_deref()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_error(name.len() + 1, format!("`{name}` needs a nonnegative integer argument")))
        };
        let rat_arg = |v: &Option<String>| -> Result<Lit, Error> {
            let v = v
                .as_deref()
                .ok_or_else(|| parse_error(name.len(), format!("`{name}` needs a rational argument")))?;
            parse_rational(v).map(Lit).map_err(|e| shift(e, name.len() + 1))
        };
        Ok(match name {
            "zero" => tail_only(Tail::Zero),
            "e" | "ones" => tail_only(Tail::Const(Lit(int(1)))),
            "harmonic" => tail_only(Tail::Harmonic),
            "alternating" => tail_only(Tail::Geometric(Lit(int(-1)))),
            "const" => tail_only(Tail::Const(rat_arg(&value)?)),
            "geometric" => tail_only(Tail::Geometric(rat_arg(&value)?)),
            "power" => tail_only(Tail::Power(int_arg(&value)? as u32)),
            "unit" => tail_only(Tail::Unit(int_arg(&value)? as usize)),
            _ => {
                let mut prefix = Vec::new();
                let mut offset = 0;
                for item in text.split(',') {
                    let lit = parse_rational(item).map_err(|_| {
                        parse_error(offset, format!("unknown sequence `{}`", item.trim()))
                    })?;
                    prefix.push(Lit(lit));
                    offset += item.len() + 1;
                }
                SeqSpec { prefix, tail: Tail::Zero }
            }
        })
    }

    /// The sequence: prefix terms first, then the tail at the global index.
    pub fn build(&self) -> Seq {
        let prefix: Arc<Vec<Rational>> = Arc::new(self.prefix.iter().map(|l| l.0.clone()).collect());
        let len = prefix.len();
        let tail = self.tail.clone();
        let label = serde_json::to_string(self).unwrap_or_default();
        let seq = Seq::from_fn(label, move |k| {
            if let Some(v) = prefix.get(k) {
                return v.clone();
            }
            match &tail {
                Tail::Zero => int(0),
                Tail::Const(c) => c.0.clone(),
                Tail::Harmonic => Rational::new(1.into(), (k as i64 + 1).into()),
                Tail::Power(p) => pow(&int(k as i64 + 1), *p),
                Tail::Geometric(r) => pow(&r.0, k as u32),
                Tail::Unit(j) => int(i64::from(k == *j)),
            }
        });
        match self.tail {
            Tail::Zero => seq.with_support_bound(len.saturating_sub(1)),
            Tail::Unit(j) => seq.with_support_bound(j.max(len.saturating_sub(1))),
            _ => seq,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixSpec {
    Identity,
    Delta,
    Sum,
    Cesaro,
    CesaroInv,
    Phi,
    Weighted { u: SeqSpec, v: SeqSpec },
    Riesz { q: SeqSpec },
    Gamma { u: SeqSpec, v: SeqSpec },
    SigmaRiesz { q: SeqSpec },
    InverseOf(Box<MatrixSpec>),
    Compose(Vec<MatrixSpec>),
    /// Explicit leading rows of a row-finite matrix; later rows are zero.
    Banded(Vec<Vec<Lit>>),
}

/// A resolved matrix spec.
#[derive(Clone, Debug)]
pub enum Built {
    Triangle(Triangle),
    Banded(BandedMatrix),
}

impl Built {
    pub fn into_banded(self) -> BandedMatrix {
        match self {
            Built::Triangle(t) => BandedMatrix::from(&t),
            Built::Banded(b) => b,
        }
    }

    pub fn into_triangle(self, role: &str) -> Result<Triangle, Error> {
        match self {
            Built::Triangle(t) => Ok(t),
            Built::Banded(_) => Err(parse_error(0, format!("{role} must be a triangle, not a banded row list"))),
        }
    }
}

impl MatrixSpec {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let text = text.trim();
        if text.starts_with('{') || text.starts_with('"') {
            return from_json(text);
        }
        let mut parser = Shorthand { text, pos: 0 };
        let spec = parser.matrix()?;
        parser.skip_ws();
        if parser.pos != text.len() {
            return Err(parse_error(parser.pos, "trailing input".into()));
        }
        Ok(spec)
    }

    pub fn build(&self) -> Result<Built, Error> {
        let pair = |u: &SeqSpec, v: &SeqSpec| WeightPair::new(u.build(), v.build());
        let tri = |t: Triangle| Ok(Built::Triangle(t));
        match self {
            MatrixSpec::Identity => tri(Triangle::identity()),
            MatrixSpec::Delta => tri(builders::delta()),
            MatrixSpec::Sum => tri(builders::sigma_sum()),
            MatrixSpec::Cesaro => tri(builders::cesaro()),
            MatrixSpec::CesaroInv => tri(builders::cesaro_inverse()),
            MatrixSpec::Phi => tri(builders::phi()),
            MatrixSpec::Weighted { u, v } => tri(builders::weighted_mean(&pair(u, v))),
            MatrixSpec::Riesz { q } => tri(builders::riesz(&RieszWeights::new(q.build()))),
            MatrixSpec::Gamma { u, v } => tri(builders::gamma(&pair(u, v))),
            MatrixSpec::SigmaRiesz { q } => tri(builders::sigma_riesz(&RieszWeights::new(q.build()))),
            MatrixSpec::InverseOf(inner) => tri(inner.build()?.into_triangle("inverse_of operand")?.invert()?),
            MatrixSpec::Compose(factors) => {
                let mut factors = factors.iter();
                let first = factors
                    .next()
                    .ok_or_else(|| parse_error(0, "compose needs at least one factor".into()))?;
                let mut acc = first.build()?.into_triangle("compose factor")?;
                for f in factors {
                    acc = acc.compose(&f.build()?.into_triangle("compose factor")?);
                }
                tri(acc)
            }
            MatrixSpec::Banded(rows) => Ok(Built::Banded(BandedMatrix::from_rows(
                "banded",
                rows.iter().map(|r| r.iter().map(|l| l.0.clone()).collect()).collect(),
            ))),
        }
    }
}

/// Recursive-descent parser for `name` and `name(arg, ...)`.
struct Shorthand<'a> {
    text: &'a str,
    pos: usize,
}

impl Shorthand<'_> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<&str, Error> {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.text.len() - start);
        if len == 0 {
            return Err(parse_error(start, "expected a matrix name".into()));
        }
        self.pos += len;
        Ok(&self.text[start..start + len])
    }

    fn args(&mut self) -> Result<Vec<MatrixSpec>, Error> {
        if !self.eat('(') {
            return Err(parse_error(self.pos, "expected `(`".into()));
        }
        let mut args = vec![self.matrix()?];
        while self.eat(',') {
            args.push(self.matrix()?);
        }
        if !self.eat(')') {
            return Err(parse_error(self.pos, "expected `)` or `,`".into()));
        }
        Ok(args)
    }

    fn matrix(&mut self) -> Result<MatrixSpec, Error> {
        let start = self.pos;
        let name = self.ident()?.to_owned();
        Ok(match name.as_str() {
            "identity" => MatrixSpec::Identity,
            "delta" => MatrixSpec::Delta,
            "sum" => MatrixSpec::Sum,
            "cesaro" => MatrixSpec::Cesaro,
            "cesaro_inv" => MatrixSpec::CesaroInv,
            "phi" => MatrixSpec::Phi,
            "inverse_of" => {
                let mut args = self.args()?;
                if args.len() != 1 {
                    return Err(parse_error(start, "inverse_of takes exactly one argument".into()));
                }
                MatrixSpec::InverseOf(Box::new(args.remove(0)))
            }
            "compose" => MatrixSpec::Compose(self.args()?),
            "weighted" | "riesz" | "gamma" | "sigma_riesz" | "banded" => {
                return Err(parse_error(start, format!("`{name}` is parameterized; use the JSON form")))
            }
            _ => return Err(parse_error(start, format!("unknown matrix `{name}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainSpec {
    C,
    G { u: SeqSpec, v: SeqSpec },
    R { q: SeqSpec },
}

impl DomainSpec {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let text = text.trim();
        match text {
            "C" | "c" => Ok(DomainSpec::C),
            _ if text.starts_with('{') || text.starts_with('"') => from_json(text),
            _ => Err(parse_error(0, format!("unknown domain `{text}`; use C or the JSON form of G/R"))),
        }
    }

    pub fn build(&self) -> Domain {
        match self {
            DomainSpec::C => Domain::cesaro(),
            DomainSpec::G { u, v } => Domain::weighted(WeightPair::new(u.build(), v.build())),
            DomainSpec::R { q } => Domain::riesz(RieszWeights::new(q.build())),
        }
    }
}

fn parse_error(position: usize, message: String) -> Error {
    Error::Parse { position, message }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse {
            position: position + by,
            message,
        },
        other => other,
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| {
        // serde_json reports 1-based line/column.
        let offset: usize = text.lines().take(e.line().saturating_sub(1)).map(|l| l.len() + 1).sum();
        parse_error(offset + e.column().saturating_sub(1), e.to_string())
    })
}
