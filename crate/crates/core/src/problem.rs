//! Problem files: a map program followed by one `domain` line and optional
//! `set key=value` lines.
//!
//! ```text
//! dim 2
//! map g1 = 2*x1 - 0.5
//! map g2 = 0.25 + 0.5*x2
//! domain rect [0,1] [0,1]
//! set task=certify
//! ```
//!
//! Domain lines:
//!
//! ```text
//! domain rect [lo,hi] ...
//! domain cylinder [a,b] base [lo,hi] ...
//! domain coneshell l=sum|sup|euclid|linear(c1,...,cn) a=<v> b=<v>
//! domain holedball R=<v> hole (cx,cy,r) hole (cx,cy,r) ...
//! ```

use std::str::FromStr;

use crate::certify::{Direction, Directions, Form};
use crate::error::{Error, Result};
use crate::geometry::{
    ConeShellSpec, CylinderSpec, DomainSpec, Functional, Hole, HoledBallSpec, RectDomain,
};
use crate::interval::{Interval, IntervalBox};
use crate::mapdsl::{parse_program, MapSpec};

/// Reason given when an annulus domain is requested.
pub const ANNULUS_REFUSAL: &str = "annulus domains are refused: the annulus fixed point statement \
     is false in finite dimension (a nontrivial rotation of a planar annulus about its centre \
     satisfies its boundary conditions and has no fixed point)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Certify,
    Localize,
    Index,
    Trace,
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "certify" => Task::Certify,
            "localize" => Task::Localize,
            "index" => Task::Index,
            "trace" => Task::Trace,
            _ => return Err(Error::InvalidArgument(format!("unknown task '{s}'"))),
        })
    }
}

/// Form requested for cylinder and cone shell certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormChoice {
    Expansive,
    Compressive,
    /// Expansive first, then compressive.
    #[default]
    Auto,
}

impl FormChoice {
    pub fn forms(self) -> &'static [Form] {
        match self {
            FormChoice::Expansive => &[Form::Expansive],
            FormChoice::Compressive => &[Form::Compressive],
            FormChoice::Auto => &[Form::Expansive, Form::Compressive],
        }
    }
}

impl FromStr for FormChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "expansive" => FormChoice::Expansive,
            "compressive" => FormChoice::Compressive,
            "auto" => FormChoice::Auto,
            _ => return Err(Error::InvalidArgument(format!("unknown form '{s}'"))),
        })
    }
}

/// Defaults carried by a problem file. Command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub task: Option<Task>,
    pub form: Option<FormChoice>,
    pub directions: Option<Directions>,
    pub max_depth: Option<usize>,
    pub tol: Option<f64>,
    pub budget: Option<usize>,
    pub grid: Option<usize>,
    pub t_range: Option<Interval>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub map: MapSpec,
    pub domain: DomainSpec,
    pub settings: Settings,
}

pub fn parse_problem(source: &str) -> Result<Problem> {
    let program = parse_program(source)?;
    let (line, text) = program
        .domain
        .ok_or_else(|| Error::InvalidDomain("missing 'domain' line".into()))?;
    let dim = program.map.dim();
    let domain = parse_domain(&text, dim).map_err(|e| match e {
        Error::InvalidDomain(m) => Error::InvalidDomain(format!("line {line}: {m}")),
        other => other,
    })?;
    if domain.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: domain.dim() });
    }
    let mut settings = Settings::default();
    for (line, key, value) in &program.settings {
        apply_setting(&mut settings, key, value, dim)
            .map_err(|e| Error::InvalidArgument(format!("line {line}: {e}")))?;
    }
    Ok(Problem { map: program.map, domain, settings })
}

fn apply_setting(s: &mut Settings, key: &str, value: &str, dim: usize) -> Result<()> {
    let int = |v: &str| {
        v.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("{key} expects an integer")))
    };
    match key {
        "task" => s.task = Some(value.parse()?),
        "form" => s.form = Some(value.parse()?),
        "directions" => s.directions = Some(parse_directions(value, dim)?),
        "max_depth" => s.max_depth = Some(int(value)?),
        "budget" => s.budget = Some(int(value)?),
        "grid" => s.grid = Some(int(value)?),
        "tol" => s.tol = Some(number(value)?),
        "t_range" => {
            let g = groups(value, '[', ']')?;
            match g.as_slice() {
                [pair] if pair.len() == 2 => s.t_range = Some(Interval::new(pair[0], pair[1])?),
                _ => return Err(Error::InvalidArgument("t_range expects [a,b]".into())),
            }
        }
        _ => return Err(Error::InvalidArgument(format!("unknown setting '{key}'"))),
    }
    Ok(())
}

/// `auto`, or one letter `e`/`c` per coordinate (commas optional).
pub fn parse_directions(text: &str, dim: usize) -> Result<Directions> {
    if text == "auto" {
        return Ok(Directions::Auto);
    }
    let dirs = text
        .chars()
        .filter(|c| !matches!(c, ',' | ' '))
        .map(|c| match c {
            'e' => Ok(Direction::E),
            'c' => Ok(Direction::C),
            _ => Err(Error::InvalidArgument(format!("direction '{c}' is not e or c"))),
        })
        .collect::<Result<Vec<_>>>()?;
    if dirs.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: dirs.len() });
    }
    Ok(Directions::Fixed(dirs))
}

fn number(text: &str) -> Result<f64> {
    let t = text.trim();
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::InvalidDomain(format!("'{t}' is not a finite number"))),
    }
}

/// Comma-separated numbers inside each `open ... close` group; anything
/// outside the groups must be blank.
fn groups(text: &str, open: char, close: char) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix(open)
            .ok_or_else(|| Error::InvalidDomain(format!("expected '{open}' at '{rest}'")))?;
        let end = body
            .find(close)
            .ok_or_else(|| Error::InvalidDomain(format!("missing '{close}'")))?;
        out.push(body[..end].split(',').map(number).collect::<Result<Vec<_>>>()?);
        rest = body[end + 1..].trim_start();
    }
    Ok(out)
}

fn bounds(text: &str) -> Result<IntervalBox> {
    let g = groups(text, '[', ']')?;
    if g.is_empty() {
        return Err(Error::InvalidDomain("expected at least one [lo,hi]".into()));
    }
    let pairs = g
        .iter()
        .map(|p| match p.as_slice() {
            [lo, hi] if lo < hi => Ok((*lo, *hi)),
            _ => Err(Error::InvalidDomain(format!("bad bounds {p:?}; expected [lo,hi] with lo < hi"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntervalBox::from_bounds(&pairs)?)
}

/// Splits on whitespace outside parentheses.
fn tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ => {}
        }
        if ch.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn functional(text: &str, dim: usize) -> Result<Functional> {
    Ok(match text {
        "sum" => Functional::Linear(vec![1.0; dim]),
        "sup" => Functional::Sup,
        "euclid" => Functional::Euclid,
        _ => {
            let inner = text
                .strip_prefix("linear(")
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| Error::UnsupportedFunctional(text.to_string()))?;
            Functional::Linear(inner.split(',').map(number).collect::<Result<Vec<_>>>()?)
        }
    })
}

/// Parses the text after `domain` for a map of dimension `dim`.
pub fn parse_domain(text: &str, dim: usize) -> Result<DomainSpec> {
    let text = text.trim();
    let (kind, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    match kind {
        "rect" => Ok(DomainSpec::Rect(RectDomain::new(bounds(rest)?)?)),
        "cylinder" => {
            let (height, base) = rest
                .split_once("base")
                .ok_or_else(|| Error::InvalidDomain("cylinder needs 'base'".into()))?;
            let h = bounds(height)?;
            if h.dim() != 1 {
                return Err(Error::InvalidDomain("cylinder height must be a single [a,b]".into()));
            }
            Ok(DomainSpec::Cylinder(CylinderSpec::new(h.coord(0), bounds(base)?)?))
        }
        "coneshell" => {
            let (mut l, mut a, mut b) = (None, None, None);
            for tok in tokens(rest) {
                let (k, v) = tok
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidDomain(format!("expected key=value, got '{tok}'")))?;
                match k {
                    "l" => l = Some(functional(v, dim)?),
                    "a" => a = Some(number(v)?),
                    "b" => b = Some(number(v)?),
                    _ => return Err(Error::InvalidDomain(format!("unknown coneshell key '{k}'"))),
                }
            }
            let missing = |what: &str| Error::InvalidDomain(format!("coneshell needs {what}="));
            Ok(DomainSpec::ConeShell(ConeShellSpec::new(
                dim,
                l.ok_or_else(|| missing("l"))?,
                a.ok_or_else(|| missing("a"))?,
                b.ok_or_else(|| missing("b"))?,
            )?))
        }
        "holedball" => {
            let mut radius = None;
            let mut holes = Vec::new();
            let toks = tokens(rest);
            let mut it = toks.iter();
            while let Some(tok) = it.next() {
                if let Some(v) = tok.strip_prefix("R=") {
                    radius = Some(number(v)?);
                } else if tok == "hole" {
                    let spec = it
                        .next()
                        .ok_or_else(|| Error::InvalidDomain("'hole' needs (cx,cy,r)".into()))?;
                    match groups(spec, '(', ')')?.as_slice() {
                        [h] if h.len() == 3 => {
                            holes.push(Hole { center: [h[0], h[1]], radius: h[2] })
                        }
                        _ => return Err(Error::InvalidDomain(format!("bad hole '{spec}'"))),
                    }
                } else {
                    return Err(Error::InvalidDomain(format!("unexpected '{tok}' in holedball")));
                }
            }
            let radius = radius.ok_or_else(|| Error::InvalidDomain("holedball needs R=".into()))?;
            Ok(DomainSpec::HoledBall(HoledBallSpec::new(radius, holes)?))
        }
        "annulus" => Err(Error::UnsupportedDomain(ANNULUS_REFUSAL.into())),
        other => Err(Error::InvalidDomain(format!("unknown domain kind '{other}'"))),
    }
}
