//! JSON instance files and the bundled fixtures.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbifold::{GroupElement, Orbifold};
use crate::poly::parse_poly;
use crate::scalar::{CycField, CycRat};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub variables: Vec<String>,
    pub root_of_unity_order: u32,
    pub potential: String,
    /// Exact scalars such as `2`, `-3/7`, `0.5` or `1 - z` (`z` is the
    /// primitive root of unity).
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    pub group_generators: Vec<Vec<i64>>,
}

pub const Z6_JSON: &str = include_str!("../fixtures/z6.json");
pub const Z3_JSON: &str = include_str!("../fixtures/z3.json");
pub const Z4_JSON: &str = include_str!("../fixtures/z4.json");

impl InstanceFile {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src)
            .map_err(|e| Error::Instance(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::Instance(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&src)
    }

    /// Parse, specialize parameters, and validate into an orbifold.
    pub fn load(&self) -> Result<Arc<Orbifold>> {
        let n = self.variables.len();
        if n == 0 {
            return Err(Error::Instance("no variables".into()));
        }
        if self.root_of_unity_order == 0 {
            return Err(Error::Instance("root_of_unity_order must be positive".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.variables {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && v != "z";
            if !ok || !seen.insert(v) {
                return Err(Error::Instance(format!("bad or repeated variable name `{v}`")));
            }
        }
        let field = CycField::new(self.root_of_unity_order);
        let mut params: HashMap<String, CycRat> = HashMap::new();
        for (name, value) in &self.parameters {
            if seen.contains(name) {
                return Err(Error::Instance(format!("parameter `{name}` shadows a variable")));
            }
            let c = parse_poly(value, &[], &HashMap::new(), &field)
                .map_err(|e| Error::Instance(format!("parameter `{name}`: {e}")))?;
            params.insert(name.clone(), c.constant_term());
        }
        let w = parse_poly(&self.potential, &self.variables, &params, &field)
            .map_err(|e| Error::Instance(format!("potential: {e}")))?;
        let mut gens = Vec::with_capacity(self.group_generators.len());
        for g in &self.group_generators {
            if g.len() != n {
                return Err(Error::Instance(format!("generator {g:?} has {} entries, expected {n}", g.len())));
            }
            gens.push(GroupElement::new(g, self.root_of_unity_order));
        }
        Ok(Arc::new(Orbifold::new(field, self.variables.clone(), w, &gens)?))
    }
}

pub fn load_path(path: &Path) -> Result<Arc<Orbifold>> {
    InstanceFile::read(path)?.load()
}

/// Bundled fixture by name: `z6`, `z4` or `z3`.
pub fn fixture(name: &str) -> Result<Arc<Orbifold>> {
    let src = match name {
        "z6" => Z6_JSON,
        "z4" => Z4_JSON,
        "z3" => Z3_JSON,
        _ => return Err(Error::Instance(format!("no bundled fixture `{name}`"))),
    };
    InstanceFile::from_json(src)?.load()
}
