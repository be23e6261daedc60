//! Compact string grammar for [`TraceSpec`].
//!
//! ```text
//! spec    := body [":nonexceptional"]
//! body    := "kloosterman:s=" INT [":normalized"]
//!          | "phase:num=" INTS [":den=" INTS]
//!          | "char:c=" INT [":" body]
//!          | "product:(" spec (";" spec)* ")"
//!          | "ones"
//! INTS    := INT ("," INT)*          coefficients, lowest degree first
//! ```
//!
//! `char:c=3` alone is the multiplicative character itself; with a body
//! it twists that body pointwise. `ones` is the constant table 1.

use std::fmt;

use thiserror::Error;

use super::{TraceKind, TraceSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace spec parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        let digits_start = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits_start {
            return self.err("expected an integer");
        }
        match self.src[start..end].parse() {
            Ok(v) => {
                self.pos = end;
                Ok(v)
            }
            Err(_) => self.err("integer out of range"),
        }
    }

    fn ints(&mut self) -> Result<Vec<i64>, ParseError> {
        let mut out = vec![self.int()?];
        while self.eat(",") {
            out.push(self.int()?);
        }
        Ok(out)
    }

    fn spec(&mut self) -> Result<TraceSpec, ParseError> {
        let kind = self.body()?;
        let declared_nonexceptional = self.eat(":nonexceptional");
        Ok(TraceSpec {
            kind,
            declared_nonexceptional,
        })
    }

    fn body(&mut self) -> Result<TraceKind, ParseError> {
        if self.eat("kloosterman:") {
            self.expect("s=")?;
            let at = self.pos;
            let s = self.int()?;
            if s < 1 || s > 64 {
                return Err(ParseError {
                    position: at,
                    message: format!("dimension s must lie in 1..=64, got {s}"),
                });
            }
            let normalized = self.eat(":normalized");
            Ok(TraceKind::Kloosterman {
                s: s as u32,
                normalized,
            })
        } else if self.eat("phase:") {
            self.expect("num=")?;
            let numerator = self.ints()?;
            let denominator = if self.eat(":den=") {
                self.ints()?
            } else {
                vec![1]
            };
            Ok(TraceKind::RationalPhase {
                numerator,
                denominator,
            })
        } else if self.eat("char:") {
            self.expect("c=")?;
            let at = self.pos;
            let c = self.int()?;
            if c < 1 {
                return Err(ParseError {
                    position: at,
                    message: format!("character index must be positive, got {c}"),
                });
            }
            let base = if self.rest().starts_with(':') && !self.rest().starts_with(":nonexceptional")
            {
                self.pos += 1;
                Some(Box::new(TraceSpec::from(self.body()?)))
            } else {
                None
            };
            Ok(TraceKind::CharacterTwist { c: c as u64, base })
        } else if self.eat("product:") {
            self.expect("(")?;
            let mut factors = vec![self.spec()?];
            while self.eat(";") {
                factors.push(self.spec()?);
            }
            self.expect(")")?;
            Ok(TraceKind::Product(factors))
        } else if self.eat("ones") {
            Ok(TraceKind::Custom {
                label: "ones".into(),
            })
        } else {
            self.err("expected one of `kloosterman:`, `phase:`, `char:`, `product:`, `ones`")
        }
    }
}

pub fn parse(src: &str) -> Result<TraceSpec, ParseError> {
    let mut parser = Parser { src, pos: 0 };
    let spec = parser.spec()?;
    if parser.pos != src.len() {
        return parser.err("unexpected trailing input");
    }
    Ok(spec)
}

impl std::str::FromStr for TraceSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceKind::Kloosterman { s, normalized } => {
                write!(f, "kloosterman:s={s}")?;
                if *normalized {
                    write!(f, ":normalized")?;
                }
                Ok(())
            }
            TraceKind::RationalPhase {
                numerator,
                denominator,
            } => write!(f, "phase:num={}:den={}", join(numerator), join(denominator)),
            TraceKind::CharacterTwist { c, base } => {
                write!(f, "char:c={c}")?;
                match base {
                    Some(b) => write!(f, ":{}", b.kind),
                    None => Ok(()),
                }
            }
            TraceKind::Product(factors) => {
                write!(f, "product:(")?;
                for (i, s) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
            TraceKind::Custom { label } => write!(f, "{label}"),
        }
    }
}

impl fmt::Display for TraceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if self.declared_nonexceptional {
            write!(f, ":nonexceptional")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_forms() {
        let k: TraceSpec = "kloosterman:s=2:normalized".parse().unwrap();
        assert_eq!(
            k.kind,
            TraceKind::Kloosterman {
                s: 2,
                normalized: true
            }
        );
        assert!(!k.declared_nonexceptional);

        let ph: TraceSpec = "phase:num=0,1:den=1".parse().unwrap();
        assert_eq!(
            ph.kind,
            TraceKind::RationalPhase {
                numerator: vec![0, 1],
                denominator: vec![1]
            }
        );

        let ch: TraceSpec = "char:c=3:phase:num=0,1:den=1".parse().unwrap();
        match &ch.kind {
            TraceKind::CharacterTwist { c: 3, base: Some(b) } => {
                assert!(matches!(b.kind, TraceKind::RationalPhase { .. }))
            }
            other => panic!("unexpected {other:?}"),
        }

        let pr: TraceSpec = "product:(kloosterman:s=3;char:c=2;phase:num=1:den=0,1)"
            .parse()
            .unwrap();
        match &pr.kind {
            TraceKind::Product(f) => assert_eq!(f.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nonexceptional_flag() {
        let s: TraceSpec = "kloosterman:s=2:normalized:nonexceptional".parse().unwrap();
        assert!(s.declared_nonexceptional);
        let s: TraceSpec = "char:c=3:phase:num=0,1:nonexceptional".parse().unwrap();
        assert!(s.declared_nonexceptional);
        match s.kind {
            TraceKind::CharacterTwist { base: Some(b), .. } => {
                assert!(!b.declared_nonexceptional)
            }
            _ => panic!(),
        }
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "kloosterman:s=2:normalized",
            "kloosterman:s=3",
            "phase:num=0,1:den=1",
            "phase:num=-3,0,2:den=1,1:nonexceptional",
            "char:c=3",
            "char:c=5:kloosterman:s=2",
            "product:(kloosterman:s=2:normalized;char:c=2:nonexceptional)",
            "ones",
        ] {
            let spec: TraceSpec = src.parse().unwrap();
            assert_eq!(spec.to_string(), src);
        }
    }

    #[test]
    fn error_positions() {
        let e = parse("kloosterman:t=2").unwrap_err();
        assert_eq!(e.position, 12);
        let e = parse("kloosterman:s=0").unwrap_err();
        assert_eq!(e.position, 14);
        let e = parse("phase:num=1,:den=1").unwrap_err();
        assert_eq!(e.position, 12);
        let e = parse("product:(ones;ones").unwrap_err();
        assert_eq!(e.position, 18);
        let e = parse("ones:extra").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("bessel").unwrap_err();
        assert_eq!(e.position, 0);
    }
}
