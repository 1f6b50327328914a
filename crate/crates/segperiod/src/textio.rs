//! Grammar, parser and formatter for representation expressions,
//! multisegments and points.
//!
//! ```text
//! expr     := product
//! product  := atom { "x" atom }
//! atom     := ("Z" | "L") "(" seg { ";" seg } ")" | point | "1"
//! seg      := "[" point ".." point "]" | "[" point "]"
//! point    := label [ "*v^" rational ]
//! rational := ["-"] digits [ "/" digits ]
//! ```
//!
//! `;` separates segments and `..` delimits ranges. Exponents are exact
//! rationals in `v`-units; range segments must be lattice-consistent
//! (end minus start a nonnegative multiple of the label's step).

use thiserror::Error;

use crate::decomp::RepForm;
use crate::segcore::{CuspidalPoint, Multisegment, Segment};
use crate::support::Registry;
use crate::Exp;

/// Byte range into the parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        SourceSpan { start, end }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{message} at bytes {}..{}", span.start, span.end)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    fn new(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError {
            message: message.into(),
            span,
        }
    }
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
    registry: &'a Registry,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, registry: &'a Registry) -> Self {
        Parser {
            input,
            bytes: input.as_bytes(),
            pos: 0,
            registry,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::new(
                format!("expected `{}`", c as char),
                SourceSpan::new(self.pos, (self.pos + 1).min(self.input.len())),
            ))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.input[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::new(
                "expected a label",
                SourceSpan::new(start, (start + 1).min(self.input.len())),
            ));
        }
        Ok((
            self.input[start..self.pos].to_string(),
            SourceSpan::new(start, self.pos),
        ))
    }

    fn rational(&mut self) -> Result<Exp, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(ParseError::new(
                "malformed rational",
                SourceSpan::new(start, (self.pos + 1).min(self.input.len())),
            ));
        }
        let num: i64 = self.input[start..self.pos].parse().map_err(|_| {
            ParseError::new("malformed rational", SourceSpan::new(start, self.pos))
        })?;
        let mut den: i64 = 1;
        if self.bytes.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let den_start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == den_start {
                return Err(ParseError::new(
                    "malformed rational",
                    SourceSpan::new(start, (self.pos + 1).min(self.input.len())),
                ));
            }
            den = self.input[den_start..self.pos].parse().map_err(|_| {
                ParseError::new("malformed rational", SourceSpan::new(start, self.pos))
            })?;
            if den == 0 {
                return Err(ParseError::new(
                    "zero denominator",
                    SourceSpan::new(start, self.pos),
                ));
            }
        }
        Ok(Exp::new(num, den))
    }

    fn point(&mut self) -> Result<(CuspidalPoint, SourceSpan), ParseError> {
        let (name, span) = self.ident()?;
        let label = match self.registry.lookup(&name) {
            Some(l) => l.id.clone(),
            None => return Err(ParseError::new(format!("unknown label `{name}`"), span)),
        };
        let mut end_span = span;
        let exponent = if self.eat_str("*v^") {
            let e = self.rational()?;
            end_span = SourceSpan::new(span.start, self.pos);
            e
        } else {
            Exp::from_integer(0)
        };
        Ok((CuspidalPoint::new(label, exponent), end_span))
    }

    fn segment(&mut self) -> Result<Segment, ParseError> {
        self.skip_ws();
        let seg_start = self.pos;
        self.expect(b'[')?;
        let (p, _) = self.point()?;
        if self.eat_str("..") {
            let (q, q_span) = self.point()?;
            self.expect(b']')?;
            let span = SourceSpan::new(seg_start, self.pos);
            if p.label != q.label {
                return Err(ParseError::new(
                    "segment endpoints must share a label",
                    span,
                ));
            }
            let step = Exp::from_integer(
                self.registry
                    .lookup(p.label.as_str())
                    .expect("label resolved above")
                    .step as i64,
            );
            let diff = q.exponent - p.exponent;
            let ratio = diff / step;
            if !ratio.is_integer() || ratio < Exp::from_integer(0) {
                return Err(ParseError::new(
                    format!(
                        "off-lattice range: {} to {} is not a nonnegative multiple of step {}",
                        p.exponent, q.exponent, step
                    ),
                    SourceSpan::new(q_span.start, q_span.end),
                ));
            }
            let len = ratio.to_integer() as u32 + 1;
            Ok(Segment {
                label: p.label,
                start: p.exponent,
                len,
            })
        } else {
            self.expect(b']')?;
            Ok(Segment::point(p))
        }
    }

    fn multisegment(&mut self) -> Result<Multisegment, ParseError> {
        let mut segs = vec![self.segment()?];
        while self.peek() == Some(b';') {
            self.pos += 1;
            segs.push(self.segment()?);
        }
        Ok(Multisegment::new(segs))
    }

    fn atom(&mut self) -> Result<RepForm, ParseError> {
        self.skip_ws();
        let rest = &self.input[self.pos..];
        if rest.starts_with("Z(") || rest.starts_with("L(") {
            let is_z = rest.starts_with('Z');
            self.pos += 2;
            let m = self.multisegment()?;
            self.expect(b')')?;
            return Ok(if is_z { RepForm::Z(m) } else { RepForm::L(m) });
        }
        if self.bytes.get(self.pos) == Some(&b'1')
            && !self
                .bytes
                .get(self.pos + 1)
                .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
            return Ok(RepForm::empty());
        }
        let (p, _) = self.point()?;
        Ok(RepForm::point(Segment::point(p)))
    }

    fn product(&mut self) -> Result<RepForm, ParseError> {
        let mut factors = vec![self.atom()?];
        loop {
            self.skip_ws();
            // A standalone `x` is the product operator.
            let rest = &self.input[self.pos..];
            if rest.starts_with('x')
                && !rest[1..]
                    .bytes()
                    .next()
                    .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
            {
                self.pos += 1;
                factors.push(self.atom()?);
            } else {
                break;
            }
        }
        if factors.len() == 1 {
            Ok(factors.into_iter().next().unwrap())
        } else {
            Ok(RepForm::Product(factors))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos != self.input.len() {
            return Err(ParseError::new(
                "trailing input",
                SourceSpan::new(self.pos, self.input.len()),
            ));
        }
        Ok(())
    }
}

/// Parse a representation expression against a registry.
pub fn parse_expr(text: &str, registry: &Registry) -> Result<RepForm, ParseError> {
    let mut p = Parser::new(text, registry);
    let form = p.product()?;
    p.finish()?;
    Ok(form)
}

/// Parse a bare multisegment (`seg { ";" seg }`).
pub fn parse_multisegment(text: &str, registry: &Registry) -> Result<Multisegment, ParseError> {
    let mut p = Parser::new(text, registry);
    let m = p.multisegment()?;
    p.finish()?;
    Ok(m)
}

fn format_exp(e: Exp) -> String {
    e.to_string()
}

pub fn format_point(p: &CuspidalPoint) -> String {
    format!("{}*v^{}", p.label, format_exp(p.exponent))
}

pub fn format_segment(seg: &Segment, registry: &Registry) -> String {
    if seg.len == 1 {
        format!("[{}]", format_point(&seg.first_point()))
    } else {
        let end = seg
            .end(registry)
            .expect("segment label resolves in this registry");
        format!(
            "[{} .. {}]",
            format_point(&seg.first_point()),
            format_point(&CuspidalPoint::new(seg.label.clone(), end))
        )
    }
}

/// Canonical text for a multisegment: segments in canonical order
/// joined by `;`.
pub fn format_multisegment(m: &Multisegment, registry: &Registry) -> String {
    m.segments()
        .iter()
        .map(|s| format_segment(s, registry))
        .collect::<Vec<_>>()
        .join(";")
}

/// Canonical text for a form; `parse_expr` returns a structurally equal
/// value. Nested products flatten.
pub fn format_form(f: &RepForm, registry: &Registry) -> String {
    match f {
        RepForm::Z(m) if m.len() == 1 && m.segments()[0].len == 1 => {
            format_point(&m.segments()[0].first_point())
        }
        RepForm::Z(m) => format!("Z({})", format_multisegment(m, registry)),
        RepForm::L(m) => format!("L({})", format_multisegment(m, registry)),
        RepForm::Product(fs) => {
            if fs.is_empty() {
                "1".to_string()
            } else {
                fs.iter()
                    .map(|g| format_form(g, registry))
                    .collect::<Vec<_>>()
                    .join(" x ")
            }
        }
    }
}
