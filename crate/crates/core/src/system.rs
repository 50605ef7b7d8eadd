//! Unit-distance constraint systems generated from graphs.

use thiserror::Error;

use crate::graph::Graph;
use crate::poly::{Axis, MonomialOrder, Polynomial, Rational, VarTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("pinned vertex `{0}` is not in the graph")]
    UnknownPin(String),
    #[error("vertex `{0}` pinned twice")]
    DuplicatePin(String),
    #[error("graph has no edges to pin")]
    NoEdges,
    #[error("distinctness pair ({0}, {0}) names the same vertex")]
    SamePair(String),
    #[error("distinctness pair names unknown vertex `{0}`")]
    UnknownVertex(String),
}

/// Exact coordinates for a pinned vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pin {
    pub vertex: String,
    pub x: Rational,
    pub y: Rational,
}

impl Pin {
    pub fn new(vertex: &str, x: Rational, y: Rational) -> Self {
        Pin { vertex: vertex.to_string(), x, y }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// `|p_u - p_v|^2 - 1`
    UnitEdge(String, String),
    /// `t * |p_u - p_v|^2 - 1`
    Distinct(String, String),
}

/// Polynomials (each read as `poly = 0`) encoding one embedding problem.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub vars: VarTable,
    pub polys: Vec<Polynomial>,
    pub origins: Vec<Constraint>,
    pub pins: Vec<Pin>,
    pub graph: Graph,
}

impl ConstraintSystem {
    /// Default order: lex with variables in table order, i.e.
    /// `x1 > y1 > x2 > ...` by vertex order and auxiliaries last.
    pub fn default_order(&self) -> MonomialOrder {
        MonomialOrder::lex(self.vars.len())
    }

    pub fn pin_of(&self, vertex: &str) -> Option<&Pin> {
        self.pins.iter().find(|p| p.vertex == vertex)
    }

    /// Coordinate of `vertex` as a polynomial: a pinned constant or a variable.
    pub fn coordinate(&self, vertex: &str, axis: Axis) -> Polynomial {
        if let Some(p) = self.pin_of(vertex) {
            let c = match axis {
                Axis::X => &p.x,
                Axis::Y => &p.y,
            };
            return Polynomial::constant(c.clone());
        }
        Polynomial::var(self.vars.coord(vertex, axis).expect("unpinned vertex has variables"))
    }

    fn squared_distance(&self, u: &str, v: &str) -> Polynomial {
        let dx = &self.coordinate(u, Axis::X) - &self.coordinate(v, Axis::X);
        let dy = &self.coordinate(u, Axis::Y) - &self.coordinate(v, Axis::Y);
        &(&dx * &dx) + &(&dy * &dy)
    }

    /// Nonzero polynomials only; an edge between two consistently pinned
    /// vertices contributes the zero polynomial.
    pub fn nonzero_polys(&self) -> Vec<Polynomial> {
        self.polys.iter().filter(|p| !p.is_zero()).cloned().collect()
    }

    /// Human-readable pin relations such as `x2 - 1`, one per pinned axis.
    pub fn pin_relations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.pins {
            for (axis, val) in [("x", &p.x), ("y", &p.y)] {
                out.push(pin_relation(&format!("{axis}{}", p.vertex), val));
            }
        }
        out
    }
}

fn pin_relation(name: &str, val: &Rational) -> String {
    use num_traits::{Signed, Zero};
    if val.is_zero() {
        return name.to_string();
    }
    let (n, d) = (val.numer().abs(), val.denom().clone());
    let lhs = if d == 1.into() { name.to_string() } else { format!("{d}*{name}") };
    let sign = if val.is_negative() { '+' } else { '-' };
    format!("{lhs} {sign} {n}")
}

/// One polynomial `|p_u - p_v|^2 - 1` per edge, with pinned coordinates
/// substituted.
pub fn distance_constraints(g: &Graph, pins: &[Pin]) -> Result<ConstraintSystem, SystemError> {
    for (i, p) in pins.iter().enumerate() {
        if g.index_of(&p.vertex).is_none() {
            return Err(SystemError::UnknownPin(p.vertex.clone()));
        }
        if pins[..i].iter().any(|q| q.vertex == p.vertex) {
            return Err(SystemError::DuplicatePin(p.vertex.clone()));
        }
    }
    let mut vars = VarTable::new();
    for l in g.labels() {
        if !pins.iter().any(|p| &p.vertex == l) {
            vars.add_vertex(l);
        }
    }
    let mut sys = ConstraintSystem {
        vars,
        polys: Vec::new(),
        origins: Vec::new(),
        pins: pins.to_vec(),
        graph: g.clone(),
    };
    for &(u, v) in g.edges() {
        let (lu, lv) = (g.label(u), g.label(v));
        let p = &sys.squared_distance(lu, lv) - &Polynomial::one();
        sys.polys.push(p);
        sys.origins.push(Constraint::UnitEdge(lu.to_string(), lv.to_string()));
    }
    Ok(sys)
}

/// Pins the first edge in vertex order to `(0,0)`–`(1,0)`.
pub fn auto_pin(g: &Graph) -> Result<Vec<Pin>, SystemError> {
    let &(u, v) = g.edges().iter().min().ok_or(SystemError::NoEdges)?;
    Ok(vec![
        Pin::new(g.label(u), Rational::from_integer(0.into()), Rational::from_integer(0.into())),
        Pin::new(g.label(v), Rational::from_integer(1.into()), Rational::from_integer(0.into())),
    ])
}

/// Rabinowitsch construction: for each pair adds `t_uv` and
/// `t_uv * |p_u - p_v|^2 - 1`, forcing the two vertices apart.
pub fn saturate_distinctness(
    sys: &ConstraintSystem,
    pairs: &[(&str, &str)],
) -> Result<ConstraintSystem, SystemError> {
    let mut out = sys.clone();
    for &(u, v) in pairs {
        for w in [u, v] {
            if sys.graph.index_of(w).is_none() {
                return Err(SystemError::UnknownVertex(w.to_string()));
            }
        }
        if u == v {
            return Err(SystemError::SamePair(u.to_string()));
        }
        let t = out.vars.add_aux(format!("t_{u}_{v}"), format!("distinct {u} {v}"));
        let p = &(&Polynomial::var(t) * &out.squared_distance(u, v)) - &Polynomial::one();
        out.polys.push(p);
        out.origins.push(Constraint::Distinct(u.to_string(), v.to_string()));
    }
    Ok(out)
}
