use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VarKind {
    Coord { vertex: String, axis: Axis },
    Aux { purpose: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarInfo {
    pub name: String,
    #[serde(flatten)]
    pub kind: VarKind,
}

/// Ordered variable names; index order is the default variable precedence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarTable {
    vars: Vec<VarInfo>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Plain named variables without vertex bookkeeping, for tests and
    /// free-standing polynomials.
    pub fn named<S: AsRef<str>>(names: &[S]) -> Self {
        let mut t = VarTable::new();
        for n in names {
            t.push(n.as_ref().to_string(), VarKind::Aux { purpose: "free".into() });
        }
        t
    }

    fn push(&mut self, name: String, kind: VarKind) -> usize {
        assert!(self.index_of(&name).is_none(), "duplicate variable {name}");
        self.vars.push(VarInfo { name, kind });
        self.vars.len() - 1
    }

    /// Adds `x<label>` and `y<label>`; returns the index of the x variable.
    pub fn add_vertex(&mut self, label: &str) -> usize {
        let x = self.push(
            format!("x{label}"),
            VarKind::Coord { vertex: label.to_string(), axis: Axis::X },
        );
        self.push(
            format!("y{label}"),
            VarKind::Coord { vertex: label.to_string(), axis: Axis::Y },
        );
        x
    }

    pub fn add_aux(&mut self, name: String, purpose: String) -> usize {
        self.push(name, VarKind::Aux { purpose })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vars[v].name
    }

    pub fn info(&self, v: usize) -> &VarInfo {
        &self.vars[v]
    }

    pub fn iter(&self) -> impl Iterator<Item = &VarInfo> {
        self.vars.iter()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn coord(&self, vertex: &str, axis: Axis) -> Option<usize> {
        self.vars.iter().position(|v| {
            matches!(&v.kind, VarKind::Coord { vertex: w, axis: a } if w == vertex && *a == axis)
        })
    }

    pub fn aux_count(&self) -> usize {
        self.vars
            .iter()
            .filter(|v| matches!(v.kind, VarKind::Aux { .. }))
            .count()
    }
}
