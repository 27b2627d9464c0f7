//! Built-in examples: presentations, triples, a potential and a Brauer
//! graph, with their actions and band pairs. `QUIVERBENCH_REGISTRY` points
//! at a replacement file in the same format.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::brauer::{brauer_algebra, shadow, BrauerGraph};
use crate::classify::SkewGentleTriple;
use crate::error::{input, Error, Result};
use crate::json::{self, ActionJson, PotentialJson, PresentationJson, TripleJson};
use crate::quiver::{jacobian_presentation, Potential, Presentation, Quiver};
use crate::skew::GroupAction;
use crate::words::{ChainSpec, OrderConvention, SigmaWord, StringAlgebra, Word};

pub const REGISTRY_ENV: &str = "QUIVERBENCH_REGISTRY";

const BUILTIN: &str = include_str!("../data/registry.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Presentation,
    Triple,
    Potential,
    BrauerGraph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expect {
    pub special_biserial: Option<bool>,
    pub string: Option<bool>,
    pub gentle: Option<bool>,
}

/// One chain L = {S X T U}: `inverse` swaps in the inverted bands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub inverse: bool,
    pub s: String,
    pub t: String,
    pub convention: OrderConvention,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub u: String,
    pub v: String,
    pub chains: Vec<ChainJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    #[serde(default)]
    pub name: String,
    pub kind: EntryKind,
    #[serde(default)]
    pub description: String,
    pub data: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shadow_pair: Option<PairJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_derivatives: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Registry {
    pub entries: Vec<Entry>,
}

/// A chain with the order convention its elements are sorted by.
#[derive(Clone, Debug)]
pub struct Chain {
    pub spec: ChainSpec,
    pub convention: OrderConvention,
}

/// Everything the pair verifiers need for one registry instance.
pub struct PairInstance {
    pub name: String,
    pub presentation: Presentation,
    pub algebra: StringAlgebra,
    pub u: Word,
    pub v: Word,
    pub chains: Vec<Chain>,
    pub action: Option<GroupAction>,
}

impl Registry {
    pub fn builtin() -> Self {
        serde_json::from_str(BUILTIN).expect("embedded registry parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("registry: {e}")))
    }

    /// The file named by the environment variable, else the built-in one.
    pub fn load() -> Result<Self> {
        match std::env::var(REGISTRY_ENV) {
            Ok(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
                Registry::parse(&text)
            }
            Err(_) => Ok(Registry::builtin()),
        }
    }

    /// A single entry, as stored in a registry file.
    pub fn entry_from_str(text: &str) -> Result<Entry> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("entry: {e}")))
    }

    pub fn get(&self, name: &str) -> Result<&Entry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::Input(format!("no registry entry named {name}")))
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }
}

impl Entry {
    /// The algebra the entry describes; for a potential, its Jacobian
    /// presentation, and for a graph, its Brauer graph algebra.
    pub fn presentation(&self) -> Result<Presentation> {
        match self.kind {
            EntryKind::Presentation => json::presentation_from_json(&json::parse::<PresentationJson>(&self.data)?),
            EntryKind::Triple => Ok(self.triple()?.presentation()),
            EntryKind::Potential => {
                let (q, w) = self.potential()?;
                jacobian_presentation(&q, &w)
            }
            EntryKind::BrauerGraph => brauer_algebra(&self.graph()?),
        }
    }

    pub fn triple(&self) -> Result<SkewGentleTriple> {
        if self.kind != EntryKind::Triple {
            return input(format!("{} is not a triple", self.name));
        }
        json::triple_from_json(&json::parse::<TripleJson>(&self.data)?)
    }

    pub fn potential(&self) -> Result<(Quiver, Potential)> {
        if self.kind != EntryKind::Potential {
            return input(format!("{} is not a potential", self.name));
        }
        json::potential_from_json(&json::parse::<PotentialJson>(&self.data)?)
    }

    pub fn graph(&self) -> Result<BrauerGraph> {
        if self.kind != EntryKind::BrauerGraph {
            return input(format!("{} is not a Brauer graph", self.name));
        }
        let g: BrauerGraph = json::parse(&self.data)?;
        g.validate()?;
        Ok(g)
    }

    pub fn action(&self, q: &Quiver) -> Result<Option<GroupAction>> {
        self.action.as_ref().map(|a| json::action_from_json(q, a)).transpose()
    }

    /// The band pair and its chains, over the shadow for a Brauer graph.
    pub fn pair_instance(&self) -> Result<PairInstance> {
        let (presentation, pair) = match (&self.pair, &self.shadow_pair) {
            (Some(p), _) => (self.presentation()?, p),
            (None, Some(p)) => (shadow(&self.presentation()?)?, p),
            _ => return input(format!("{} carries no band pair", self.name)),
        };
        let algebra = StringAlgebra::new(&presentation)?;
        let q = algebra.quiver().clone();
        let u = Word::parse(&q, &pair.u)?;
        let v = Word::parse(&q, &pair.v)?;
        let chains = pair
            .chains
            .iter()
            .map(|c| {
                let (cu, cv) = if c.inverse { (u.inverse(&q), v.inverse(&q)) } else { (u.clone(), v.clone()) };
                Ok(Chain {
                    spec: ChainSpec { u: cu, v: cv, s: SigmaWord::parse(&c.s)?, t: SigmaWord::parse(&c.t)?, depth: 3 },
                    convention: c.convention,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let action = self.action(&q)?;
        Ok(PairInstance { name: self.name.clone(), presentation, algebra, u, v, chains, action })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds() {
        let r = Registry::builtin();
        for e in &r.entries {
            let p = e.presentation().unwrap_or_else(|err| panic!("{}: {err}", e.name));
            e.action(&p.quiver).unwrap();
            if e.pair.is_some() || e.shadow_pair.is_some() {
                e.pair_instance().unwrap_or_else(|err| panic!("{}: {err}", e.name));
            }
        }
        assert!(r.get("nope").is_err());
    }
}
