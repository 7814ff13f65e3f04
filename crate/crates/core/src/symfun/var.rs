//! Global append-only variable table.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

/// Interned variable handle. Ids are dense and never reused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Var {
        Var(i as u32)
    }

    pub fn name(self) -> String {
        var_name(self)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&var_name(*self))
    }
}

#[derive(Default)]
struct Table {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

fn table() -> &'static RwLock<Table> {
    static T: OnceLock<RwLock<Table>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(Table::default()))
}

/// Intern `name`, returning the existing handle if already present.
pub fn intern(name: &str) -> Var {
    if let Some(&id) = table().read().expect("variable table poisoned").ids.get(name) {
        return Var(id);
    }
    let mut t = table().write().expect("variable table poisoned");
    if let Some(&id) = t.ids.get(name) {
        return Var(id);
    }
    let id = t.names.len() as u32;
    t.names.push(name.to_string());
    t.ids.insert(name.to_string(), id);
    Var(id)
}

/// Look up without interning.
pub fn lookup(name: &str) -> Option<Var> {
    table().read().expect("variable table poisoned").ids.get(name).map(|&i| Var(i))
}

pub fn var_name(v: Var) -> String {
    table().read().expect("variable table poisoned").names[v.index()].clone()
}
