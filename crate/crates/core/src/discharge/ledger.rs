use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::planar::{Cluster, ClusterId, FaceId, PlaneGraph};

/// Charges are kept in quarter units.
pub type Quarters = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Account {
    Vertex(usize),
    Face(FaceId),
    Cluster(ClusterId),
    Outer,
}

impl fmt::Display for Account {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Account::Vertex(v) => write!(f, "v{v}"),
            Account::Face(id) => write!(f, "f{id}"),
            Account::Cluster(id) => write!(f, "H{id}"),
            Account::Outer => write!(f, "OUTER"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not an account name (expected v<i>, f<i>, H<i> or OUTER)")]
pub struct BadAccount(pub String);

impl FromStr for Account {
    type Err = BadAccount;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "OUTER" {
            return Ok(Account::Outer);
        }
        let bad = || BadAccount(s.to_string());
        let (head, num) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let id: usize = num.parse().map_err(|_| bad())?;
        match head {
            "v" => Ok(Account::Vertex(id)),
            "f" => Ok(Account::Face(id)),
            "H" => Ok(Account::Cluster(id)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Account {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Account {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Face to an adjacent 3-face (credited to its cluster).
    R1,
    /// Face to the ends of an edge not on a 3-face.
    R1a,
    /// 4-vertex passing its R1a income on to a cluster.
    R1b,
    R2,
    R3,
    R4,
    R5,
}

impl Rule {
    pub const ORDER: [Rule; 5] = [Rule::R5, Rule::R1, Rule::R2, Rule::R3, Rule::R4];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub rule: Rule,
    pub from: Account,
    pub to: Account,
    pub quarters: Quarters,
}

/// Formats quarter units as an exact fraction.
pub fn fraction(q: Quarters) -> String {
    let sign = if q < 0 { "-" } else { "" };
    let a = q.abs();
    match a % 4 {
        0 => format!("{sign}{}", a / 4),
        2 => format!("{sign}{}/2", a / 2),
        _ => format!("{sign}{a}/4"),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChargeLedger {
    initial: BTreeMap<Account, Quarters>,
    accounts: BTreeMap<Account, Quarters>,
    transfers: Vec<Transfer>,
}

impl ChargeLedger {
    pub fn accounts(&self) -> &BTreeMap<Account, Quarters> {
        &self.accounts
    }

    pub fn initial(&self) -> &BTreeMap<Account, Quarters> {
        &self.initial
    }

    pub fn transfers(&self) -> &[Transfer] {
        &self.transfers
    }

    pub fn get(&self, a: Account) -> Quarters {
        self.accounts.get(&a).copied().unwrap_or(0)
    }

    pub fn total(&self) -> Quarters {
        self.accounts.values().sum()
    }

    pub fn record(&mut self, rule: Rule, from: Account, to: Account, quarters: Quarters) {
        if quarters == 0 {
            return;
        }
        *self.accounts.entry(from).or_insert(0) -= quarters;
        *self.accounts.entry(to).or_insert(0) += quarters;
        self.transfers.push(Transfer { rule, from, to, quarters });
    }

    /// Transfers touching `a`, in recording order.
    pub fn history(&self, a: Account) -> impl Iterator<Item = &Transfer> + '_ {
        self.transfers.iter().filter(move |t| t.from == a || t.to == a)
    }

    /// Credits minus debits of `a` over all transfers.
    pub fn net(&self, a: Account) -> Quarters {
        self.history(a).map(|t| if t.to == a { t.quarters } else { -t.quarters }).sum()
    }

    /// Replaces the accounts of clustered 3-faces by one account per cluster
    /// holding their sum. Done before any transfer.
    pub fn fold_clusters(&mut self, clusters: &[Cluster]) {
        for c in clusters {
            let mut sum = 0;
            for f in &c.faces {
                sum += self.accounts.remove(&Account::Face(*f)).unwrap_or(0);
                self.initial.remove(&Account::Face(*f));
            }
            self.accounts.insert(Account::Cluster(c.id), sum);
            self.initial.insert(Account::Cluster(c.id), sum);
        }
    }
}

/// Vertex `v` starts with d(v) - 4, every interior face with d(f) - 4 and
/// the outer face with d(C) + 4.
pub fn initial_charges(pg: &PlaneGraph) -> ChargeLedger {
    let mut accounts = BTreeMap::new();
    for v in 0..pg.n() {
        accounts.insert(Account::Vertex(v), 4 * (pg.degree(v) as Quarters - 4));
    }
    for f in pg.faces() {
        let d = f.degree() as Quarters;
        if f.id == pg.outer_id() {
            accounts.insert(Account::Outer, 4 * (d + 4));
        } else {
            accounts.insert(Account::Face(f.id), 4 * (d - 4));
        }
    }
    ChargeLedger { initial: accounts.clone(), accounts, transfers: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_are_exact() {
        assert_eq!(fraction(4), "1");
        assert_eq!(fraction(2), "1/2");
        assert_eq!(fraction(-6), "-3/2");
        assert_eq!(fraction(1), "1/4");
        assert_eq!(fraction(10), "5/2");
        assert_eq!(fraction(0), "0");
    }

    #[test]
    fn account_names_round_trip() {
        for a in [Account::Vertex(17), Account::Face(0), Account::Cluster(3), Account::Outer] {
            assert_eq!(a.to_string().parse::<Account>().unwrap(), a);
        }
        assert!("x3".parse::<Account>().is_err());
        assert!("v".parse::<Account>().is_err());
    }

    #[test]
    fn transfers_conserve() {
        let mut l = ChargeLedger::default();
        l.record(Rule::R1, Account::Face(0), Account::Vertex(1), 3);
        l.record(Rule::R2, Account::Vertex(1), Account::Cluster(0), 2);
        assert_eq!(l.total(), 0);
        assert_eq!(l.get(Account::Vertex(1)), 1);
        assert_eq!(l.net(Account::Vertex(1)), 1);
        assert_eq!(l.history(Account::Cluster(0)).count(), 1);
    }
}
