//! Element expressions:
//!
//! ```text
//! rat:<p>/<q>                 sqrt:<n>
//! seq:periodic:<word>         seq:evconst:<word>;<letter>
//! lower:rat:<p>/<q>           lower:sqrt:<n>
//! ```
//!
//! Case-sensitive, no whitespace. Cantor words are digit strings, Baire words
//! separate letters with `.`.

use std::sync::Arc;

use crate::domains::interval::{iota_real, IntervalBasis, RealPoint};
use crate::domains::lower::{lower_rational, lower_sqrt, RationalBasis};
use crate::domains::seq::{iota_seq, SeqBasis, SeqPoint};
use crate::error::{Error, Result};
use crate::ideal::ApproxElement;
use crate::order::rational::{fmt_q, parse_q, Q};
use crate::order::BasisDescriptor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Rat(Q),
    Sqrt(u64),
    Periodic(String),
    EvConst { word: String, letter: String },
    LowerRat(Q),
    LowerSqrt(u64),
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expr::Rat(r) => write!(f, "rat:{}", fmt_q(r)),
            Expr::Sqrt(n) => write!(f, "sqrt:{n}"),
            Expr::Periodic(w) => write!(f, "seq:periodic:{w}"),
            Expr::EvConst { word, letter } => write!(f, "seq:evconst:{word};{letter}"),
            Expr::LowerRat(r) => write!(f, "lower:rat:{}", fmt_q(r)),
            Expr::LowerSqrt(n) => write!(f, "lower:sqrt:{n}"),
        }
    }
}

fn natural(text: &str) -> Result<u64> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("`{text}` is not a natural number")));
    }
    text.parse().map_err(|_| Error::Parse(format!("`{text}` is out of range")))
}

fn rational(text: &str) -> Result<Q> {
    if text.bytes().any(|b| b.is_ascii_whitespace() || b == b'+') {
        return Err(Error::Parse(format!("`{text}` is not a rational p/q")));
    }
    parse_q(text)
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    if text.chars().any(char::is_whitespace) {
        return Err(Error::Parse(format!("expression `{text}` contains whitespace")));
    }
    if let Some(rest) = text.strip_prefix("lower:rat:") {
        return Ok(Expr::LowerRat(rational(rest)?));
    }
    if let Some(rest) = text.strip_prefix("lower:sqrt:") {
        return Ok(Expr::LowerSqrt(natural(rest)?));
    }
    if let Some(rest) = text.strip_prefix("rat:") {
        return Ok(Expr::Rat(rational(rest)?));
    }
    if let Some(rest) = text.strip_prefix("sqrt:") {
        return Ok(Expr::Sqrt(natural(rest)?));
    }
    if let Some(rest) = text.strip_prefix("seq:periodic:") {
        return Ok(Expr::Periodic(rest.to_string()));
    }
    if let Some(rest) = text.strip_prefix("seq:evconst:") {
        let (word, letter) = rest
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("`{text}` needs `<word>;<letter>`")))?;
        return Ok(Expr::EvConst { word: word.to_string(), letter: letter.to_string() });
    }
    Err(Error::Parse(format!("unrecognised expression `{text}`")))
}

fn wrong_domain(e: &Expr, domain: &str) -> Error {
    Error::Parse(format!("`{e}` is not an element of the {domain} domain"))
}

pub fn real_element(e: &Expr) -> Result<ApproxElement<IntervalBasis>> {
    let point = match e {
        Expr::Rat(r) => RealPoint::rational(r.clone())?,
        Expr::Sqrt(n) => RealPoint::sqrt(*n)?,
        other => return Err(wrong_domain(other, "reals")),
    };
    Ok(iota_real(&point))
}

pub fn seq_point(basis: &SeqBasis, e: &Expr) -> Result<SeqPoint> {
    match e {
        Expr::Periodic(w) => SeqPoint::periodic(basis, basis.parse(w)?),
        Expr::EvConst { word, letter } => SeqPoint::eventually_constant(basis, basis.parse(word)?, basis.parse_letter(letter)?),
        other => Err(wrong_domain(other, &basis.id())),
    }
}

pub fn seq_element(basis: &Arc<SeqBasis>, e: &Expr) -> Result<ApproxElement<SeqBasis>> {
    iota_seq(basis, &seq_point(basis, e)?)
}

pub fn lower_element(e: &Expr) -> Result<ApproxElement<RationalBasis>> {
    match e {
        Expr::LowerRat(r) => Ok(lower_rational(r.clone())),
        Expr::LowerSqrt(n) => Ok(lower_sqrt(*n)),
        other => Err(wrong_domain(other, "lower")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_roundtrip() {
        for text in ["rat:3/2", "sqrt:2", "seq:periodic:01", "seq:evconst:;1", "seq:evconst:2.10;7", "lower:rat:-1/2", "lower:sqrt:5"] {
            assert_eq!(parse_expr(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn grammar_is_strict() {
        for bad in ["Rat:1/2", "rat: 1/2", "rat:1", "sqrt:-2", "seq:evconst:01", "lower:rat:1/0", "rat:1/+2"] {
            assert!(parse_expr(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn wrong_domain_is_rejected() {
        assert!(real_element(&parse_expr("lower:rat:1/2").unwrap()).is_err());
        let cantor = Arc::new(SeqBasis::CANTOR);
        assert!(seq_element(&cantor, &parse_expr("seq:periodic:2").unwrap()).is_err());
        assert!(seq_element(&Arc::new(SeqBasis::BAIRE), &parse_expr("seq:periodic:2.17").unwrap()).is_ok());
    }
}
