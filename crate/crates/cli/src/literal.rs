//! Root-list parsing: comma-separated real or complex literals.
//!
//! Grammar per token: `[-]a`, `[-]a(+|-)bi`, or `[-]bi`. No whitespace inside
//! a token; `i` is the only imaginary suffix.

use limpoly::{Roots, C64};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("cannot parse root literal '{token}'")]
    BadLiteral { token: String },
    #[error("empty root list")]
    Empty,
    #[error("{0}")]
    Roots(String),
}

fn number(text: &str) -> Option<f64> {
    // reject "inf", "nan" and friends that f64::from_str accepts
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit() || b".+-eE".contains(&b)) {
        return None;
    }
    text.parse::<f64>().ok().filter(|x| x.is_finite())
}

pub fn parse_complex(token: &str) -> Result<C64, ParseError> {
    let bad = || ParseError::BadLiteral {
        token: token.to_string(),
    };
    if token.is_empty() || token.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = token.strip_suffix('i') else {
        return number(token).map(|re| C64::new(re, 0.0)).ok_or_else(bad);
    };
    // split before the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = number(&body[..k]).ok_or_else(bad)?;
            let im = number(&body[k..]).ok_or_else(bad)?;
            Ok(C64::new(re, im))
        }
        None => number(body).map(|im| C64::new(0.0, im)).ok_or_else(bad),
    }
}

pub fn parse_roots(list: &str) -> Result<Roots, ParseError> {
    let trimmed = list.trim();
    if trimmed.is_empty() {
        return Err(ParseError::Empty);
    }
    let roots = trimmed
        .split(',')
        .map(|t| parse_complex(t.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Roots::new(roots).map_err(|e| ParseError::Roots(e.to_string()))
}
