//! Cell specifications and their textual grammar.
//!
//! `sphere`, `etoral`, `cell:C3`, `cell:T`, `idem:C3`, `idem:T`,
//! `coind:T:idem:C3`, `coind:N:idem:C3`; sums with `+`; a leading `S<k>:`
//! suspends by `k`.

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A subgroup of the maximal torus in rank 1: `C_n` or `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ToralSub {
    C(u64),
    T,
}

impl fmt::Display for ToralSub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToralSub::C(n) => write!(f, "C{n}"),
            ToralSub::T => write!(f, "T"),
        }
    }
}

impl FromStr for ToralSub {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<ToralSub> {
        if s == "T" {
            return Ok(ToralSub::T);
        }
        match s.strip_prefix('C').and_then(|n| n.parse::<u64>().ok()) {
            Some(n) if n >= 1 => Ok(ToralSub::C(n)),
            _ => invalid(format!("unknown subgroup '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FromLevel {
    T,
    N,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellKind {
    Sphere,
    /// `e_T S⁰`; equal to the sphere in the toral category.
    ToralIdempotentSphere,
    /// `G/L₊`.
    Cell(ToralSub),
    /// `E⟨(K)⟩`.
    Idempotent(ToralSub),
    Coinduced(FromLevel, Box<CellSpec>),
}

/// A suspended cell, or a finite sum of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellSpec {
    Single { kind: CellKind, shift: i32 },
    Sum(Vec<CellSpec>),
}

impl CellSpec {
    pub fn single(kind: CellKind) -> CellSpec {
        CellSpec::Single { kind, shift: 0 }
    }

    pub fn shifted(&self, k: i32) -> CellSpec {
        match self {
            CellSpec::Single { kind, shift } => CellSpec::Single { kind: kind.clone(), shift: shift + k },
            CellSpec::Sum(v) => CellSpec::Sum(v.iter().map(|c| c.shifted(k)).collect()),
        }
    }

    /// Flattened summands.
    pub fn summands(&self) -> Vec<(CellKind, i32)> {
        match self {
            CellSpec::Single { kind, shift } => vec![(kind.clone(), *shift)],
            CellSpec::Sum(v) => v.iter().flat_map(|c| c.summands()).collect(),
        }
    }
}

fn parse_kind(s: &str) -> Result<CellKind> {
    if let Some(rest) = s.strip_prefix("coind:") {
        let (lvl, inner) = rest.split_once(':').ok_or_else(|| crate::Error::InvalidConfig(format!("bad cell '{s}'")))?;
        let from = match lvl {
            "T" => FromLevel::T,
            "N" => FromLevel::N,
            _ => return invalid(format!("coinduction from unknown level '{lvl}'")),
        };
        return Ok(CellKind::Coinduced(from, Box::new(inner.parse()?)));
    }
    match s {
        "sphere" => return Ok(CellKind::Sphere),
        "etoral" => return Ok(CellKind::ToralIdempotentSphere),
        _ => {}
    }
    if let Some(k) = s.strip_prefix("cell:") {
        return Ok(CellKind::Cell(k.parse()?));
    }
    if let Some(k) = s.strip_prefix("idem:") {
        return Ok(CellKind::Idempotent(k.parse()?));
    }
    invalid(format!("unknown cell '{s}'"))
}

fn parse_single(s: &str) -> Result<CellSpec> {
    let s = s.trim();
    if s.is_empty() {
        return invalid("empty cell");
    }
    if let Some(rest) = s.strip_prefix('S') {
        if let Some((k, inner)) = rest.split_once(':') {
            if let Ok(k) = k.parse::<i32>() {
                return Ok(parse_single(inner)?.shifted(k));
            }
        }
    }
    Ok(CellSpec::single(parse_kind(s)?))
}

impl FromStr for CellSpec {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<CellSpec> {
        let parts: Vec<&str> = s.split('+').collect();
        if parts.len() == 1 {
            return parse_single(parts[0]);
        }
        Ok(CellSpec::Sum(parts.into_iter().map(parse_single).collect::<Result<_>>()?))
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellKind::Sphere => write!(f, "sphere"),
            CellKind::ToralIdempotentSphere => write!(f, "etoral"),
            CellKind::Cell(l) => write!(f, "cell:{l}"),
            CellKind::Idempotent(k) => write!(f, "idem:{k}"),
            CellKind::Coinduced(FromLevel::T, c) => write!(f, "coind:T:{c}"),
            CellKind::Coinduced(FromLevel::N, c) => write!(f, "coind:N:{c}"),
        }
    }
}

impl fmt::Display for CellSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellSpec::Single { kind, shift: 0 } => write!(f, "{kind}"),
            CellSpec::Single { kind, shift } => write!(f, "S{shift}:{kind}"),
            CellSpec::Sum(v) => {
                let s: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", s.join("+"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trips() {
        for s in ["sphere", "etoral", "cell:C3", "cell:T", "idem:C3", "idem:T", "coind:N:idem:C3", "coind:T:idem:T", "S2:sphere", "sphere+S-4:idem:C2", "coind:N:coind:T:idem:C1"] {
            let c: CellSpec = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
            assert_eq!(c.to_string().parse::<CellSpec>().unwrap(), c);
        }
        assert!("idem:C0".parse::<CellSpec>().is_err());
        assert!("coind:G:sphere".parse::<CellSpec>().is_err());
        assert!("ball".parse::<CellSpec>().is_err());
        assert_eq!("S1:S2:sphere".parse::<CellSpec>().unwrap(), CellSpec::single(CellKind::Sphere).shifted(3));
    }
}
