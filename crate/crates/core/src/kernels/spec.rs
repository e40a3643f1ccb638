//! Catalog identifiers such as `Ga:n=1,p=3,r=1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    /// G_a^n
    Additive(u32),
    /// Strictly upper triangular 3×3 unipotent matrices.
    Heisenberg3,
    /// GL_1
    Multiplicative,
}

/// A group scheme from the catalog over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSchemeSpec {
    pub kind: Kind,
    pub p: u32,
}

impl GroupSchemeSpec {
    pub fn new(kind: Kind, p: u32) -> Result<Self> {
        if ![2, 3, 5, 7].contains(&p) {
            return Err(Error::Invalid(format!("p = {p} is not a prime <= 7")));
        }
        if let Kind::Additive(n) = kind {
            if !(1..=3).contains(&n) {
                return Err(Error::Invalid(format!("G_a^n needs 1 <= n <= 3, got {n}")));
            }
        }
        Ok(GroupSchemeSpec { kind, p })
    }

    pub fn additive(n: u32, p: u32) -> Result<Self> {
        Self::new(Kind::Additive(n), p)
    }

    pub fn heisenberg(p: u32) -> Result<Self> {
        Self::new(Kind::Heisenberg3, p)
    }

    pub fn multiplicative(p: u32) -> Result<Self> {
        Self::new(Kind::Multiplicative, p)
    }

    /// Dimension of the group (number of coordinate generators).
    pub fn dim(&self) -> usize {
        match self.kind {
            Kind::Additive(n) => n as usize,
            Kind::Heisenberg3 => 3,
            Kind::Multiplicative => 1,
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        match self.kind {
            Kind::Additive(1) => vec!["x".into()],
            Kind::Additive(n) => (1..=n).map(|i| format!("x{i}")).collect(),
            Kind::Heisenberg3 => vec!["a".into(), "b".into(), "c".into()],
            Kind::Multiplicative => vec!["t".into()],
        }
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self.kind, Kind::Heisenberg3)
    }

    pub fn is_unipotent(&self) -> bool {
        !matches!(self.kind, Kind::Multiplicative)
    }

    /// Quasilogarithm features need p greater than the nilpotency class.
    pub fn quasilog_eligible(&self) -> bool {
        match self.kind {
            Kind::Additive(_) => true,
            Kind::Heisenberg3 => self.p >= 3,
            Kind::Multiplicative => false,
        }
    }

    pub fn short_name(&self) -> String {
        match self.kind {
            Kind::Additive(1) => "Ga".into(),
            Kind::Additive(n) => format!("Ga^{n}"),
            Kind::Heisenberg3 => "Heis3".into(),
            Kind::Multiplicative => "Gm".into(),
        }
    }
}

/// A catalog entry together with the Frobenius height r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseId {
    pub group: GroupSchemeSpec,
    pub r: u32,
}

impl CaseId {
    pub fn new(group: GroupSchemeSpec, r: u32) -> Result<Self> {
        if !(1..=3).contains(&r) {
            return Err(Error::Invalid(format!("height r = {r} not in 1..=3")));
        }
        Ok(CaseId { group, r })
    }

    pub fn p(&self) -> u32 {
        self.group.p
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.group.kind {
            Kind::Additive(n) => write!(f, "Ga:n={n},p={},r={}", self.group.p, self.r),
            Kind::Heisenberg3 => write!(f, "Heis3:p={},r={}", self.group.p, self.r),
            Kind::Multiplicative => write!(f, "Gm:p={},r={}", self.group.p, self.r),
        }
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("{s:?}: {msg}"));
        let (head, tail) = s.split_once(':').ok_or_else(|| bad("expected KIND:key=value,..."))?;
        let mut n = None;
        let mut p = None;
        let mut r = None;
        for kv in tail.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let v: u32 = v.trim().parse().map_err(|_| bad("value is not a natural number"))?;
            let slot = match k.trim() {
                "n" => &mut n,
                "p" => &mut p,
                "r" => &mut r,
                other => return Err(bad(&format!("unknown key {other:?}"))),
            };
            if slot.replace(v).is_some() {
                return Err(bad("repeated key"));
            }
        }
        let p = p.ok_or_else(|| bad("missing p"))?;
        let r = r.ok_or_else(|| bad("missing r"))?;
        let kind = match head.trim() {
            "Ga" => Kind::Additive(n.unwrap_or(1)),
            "Heis3" if n.is_none() => Kind::Heisenberg3,
            "Gm" if n.is_none() => Kind::Multiplicative,
            "Heis3" | "Gm" => return Err(bad("n is only meaningful for Ga")),
            other => return Err(bad(&format!("unknown group {other:?}"))),
        };
        CaseId::new(GroupSchemeSpec::new(kind, p)?, r)
    }
}
