//! Morphism expressions built from atoms by the closure constructions.

use std::fmt;

use super::facts::Fact;
use crate::error::{Error, Result};
use crate::finring::{FiniteMorphism, DEFAULT_BOUND};
use crate::kernel::Poly;
use crate::rings::{
    diagonal, idealization, localize_construction, polynomial_extension, quotient_construction, tensor_over,
    FpAlgebra, IdealSpec, ModulePresentation, RingMorphism,
};
use crate::psi::common_ideal_reduce;

/// A morphism given either by a presentation or by finite tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Morphism {
    Presented(RingMorphism),
    Finite(FiniteMorphism),
}

impl Morphism {
    /// The presented form, if there is one.
    pub fn presented(&self) -> Option<&RingMorphism> {
        match self {
            Morphism::Presented(u) => Some(u),
            Morphism::Finite(f) => f.presentation(),
        }
    }

    /// Table form, built on demand from a presentation of finite rings.
    pub fn finite(&self) -> Option<FiniteMorphism> {
        match self {
            Morphism::Finite(f) => Some(f.clone()),
            Morphism::Presented(u) => FiniteMorphism::from_ring_morphism(u, DEFAULT_BOUND).ok(),
        }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Morphism::Presented(u) => write!(f, "{u}"),
            Morphism::Finite(m) => match m.presentation() {
                Some(u) => write!(f, "{u}"),
                None => write!(f, "{} -> {}", m.source(), m.target()),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub morphism: Morphism,
    pub facts: Vec<Fact>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Atom(Atom),
    /// First `.0`, then `.1`.
    Compose(Box<MorphismExpr>, Box<MorphismExpr>),
    Quotient { inner: Box<MorphismExpr>, source_ideal: IdealSpec, target_ideal: IdealSpec },
    Localize { inner: Box<MorphismExpr>, s: Poly, t: Poly },
    /// `C → C ⊗_A B` for `inner : A → B` and `along : A → C`.
    BaseChange { inner: Box<MorphismExpr>, along: RingMorphism },
    PolyExt(Box<MorphismExpr>),
    Diagonal(Box<MorphismExpr>, Box<MorphismExpr>),
    Idealize { ring: FpAlgebra, module: ModulePresentation },
    CommonIdealReduce { inner: Box<MorphismExpr>, ideal: IdealSpec },
}

/// A node together with the morphism it denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismExpr {
    name: String,
    node: Node,
    flat: Morphism,
}

fn ill_typed(e: Error) -> Error {
    match e {
        Error::ContextMismatch(why) => Error::IllTypedExpression(why),
        other => other,
    }
}

fn presented(e: &MorphismExpr, what: &str) -> Result<RingMorphism> {
    e.flat
        .presented()
        .cloned()
        .ok_or_else(|| Error::IllTypedExpression(format!("{what} needs a presented morphism, {} has none", e.name)))
}

impl MorphismExpr {
    pub fn atom(name: impl Into<String>, u: RingMorphism) -> Self {
        let flat = Morphism::Presented(u);
        MorphismExpr { name: name.into(), node: Node::Atom(Atom { morphism: flat.clone(), facts: Vec::new() }), flat }
    }

    pub fn finite_atom(name: impl Into<String>, u: FiniteMorphism) -> Self {
        let flat = Morphism::Finite(u);
        MorphismExpr { name: name.into(), node: Node::Atom(Atom { morphism: flat.clone(), facts: Vec::new() }), flat }
    }

    /// `second ∘ first`.
    pub fn compose(first: MorphismExpr, second: MorphismExpr) -> Result<Self> {
        let flat = match (&first.flat, &second.flat) {
            (Morphism::Finite(u), Morphism::Finite(v)) => Morphism::Finite(u.then(v).map_err(ill_typed)?),
            _ => {
                let u = presented(&first, "composition")?;
                let v = presented(&second, "composition")?;
                Morphism::Presented(u.then(&v).map_err(ill_typed)?)
            }
        };
        let name = format!("compose({}, {})", first.name, second.name);
        Ok(MorphismExpr { name, node: Node::Compose(Box::new(first), Box::new(second)), flat })
    }

    pub fn quotient(inner: MorphismExpr, source_ideal: IdealSpec, target_ideal: IdealSpec) -> Result<Self> {
        let u = presented(&inner, "a quotient")?;
        let flat = Morphism::Presented(quotient_construction(&u, &source_ideal, &target_ideal).map_err(ill_typed)?);
        let name = format!("quotient({}, {source_ideal}, {target_ideal})", inner.name);
        Ok(MorphismExpr { name, node: Node::Quotient { inner: Box::new(inner), source_ideal, target_ideal }, flat })
    }

    pub fn localize(inner: MorphismExpr, s: Poly, t: Poly) -> Result<Self> {
        let u = presented(&inner, "a localization")?;
        let flat = Morphism::Presented(localize_construction(&u, &s, &t).map_err(ill_typed)?);
        let name = format!("localize({}, {}, {})", inner.name, u.source().show(&s), u.target().show(&t));
        Ok(MorphismExpr { name, node: Node::Localize { inner: Box::new(inner), s, t }, flat })
    }

    pub fn base_change(inner: MorphismExpr, along: RingMorphism) -> Result<Self> {
        let u = presented(&inner, "a base change")?;
        let t = tensor_over(&along, &u).map_err(ill_typed)?;
        let flat = Morphism::Presented(t.left);
        let name = format!("base_change({}, {})", inner.name, along.target());
        Ok(MorphismExpr { name, node: Node::BaseChange { inner: Box::new(inner), along }, flat })
    }

    pub fn poly_ext(inner: MorphismExpr) -> Result<Self> {
        let u = presented(&inner, "a polynomial extension")?;
        let flat = Morphism::Presented(polynomial_extension(&u).map_err(ill_typed)?);
        let name = format!("polyext({})", inner.name);
        Ok(MorphismExpr { name, node: Node::PolyExt(Box::new(inner)), flat })
    }

    pub fn diagonal(left: MorphismExpr, right: MorphismExpr) -> Result<Self> {
        let ub = presented(&left, "a diagonal")?;
        let uc = presented(&right, "a diagonal")?;
        if ub.source() != uc.source() {
            return Err(Error::IllTypedExpression(format!(
                "diagonal needs a shared source: {} and {} differ",
                ub.source(),
                uc.source()
            )));
        }
        let flat = Morphism::Presented(diagonal(&ub, &uc).map_err(ill_typed)?.1);
        let name = format!("diagonal({}, {})", left.name, right.name);
        Ok(MorphismExpr { name, node: Node::Diagonal(Box::new(left), Box::new(right)), flat })
    }

    pub fn idealize(name: impl Into<String>, ring: FpAlgebra, module: ModulePresentation) -> Result<Self> {
        let flat = Morphism::Presented(idealization(&ring, &module).map_err(ill_typed)?.1);
        Ok(MorphismExpr { name: name.into(), node: Node::Idealize { ring, module }, flat })
    }

    pub fn common_ideal_reduce(inner: MorphismExpr, ideal: IdealSpec) -> Result<Self> {
        let u = presented(&inner, "a common-ideal reduction")?;
        let red = common_ideal_reduce(&u, &ideal).map_err(ill_typed)?;
        let flat = Morphism::Presented(red.morphism);
        let name = format!("reduce({}, {ideal})", inner.name);
        Ok(MorphismExpr { name, node: Node::CommonIdealReduce { inner: Box::new(inner), ideal }, flat })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Renames the expression; names appear in proof traces.
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    /// The morphism the expression denotes.
    pub fn morphism(&self) -> &Morphism {
        &self.flat
    }

    pub fn facts(&self) -> &[Fact] {
        match &self.node {
            Node::Atom(a) => &a.facts,
            _ => &[],
        }
    }

    pub(crate) fn atom_mut(&mut self) -> Option<&mut Atom> {
        match &mut self.node {
            Node::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// Direct subexpressions, including the factors named by compositum facts.
    pub fn children(&self) -> Vec<&MorphismExpr> {
        match &self.node {
            Node::Atom(a) => a.facts.iter().flat_map(|f| f.subexpressions()).collect(),
            Node::Compose(x, y) | Node::Diagonal(x, y) => vec![x, y],
            Node::Quotient { inner, .. }
            | Node::Localize { inner, .. }
            | Node::BaseChange { inner, .. }
            | Node::PolyExt(inner)
            | Node::CommonIdealReduce { inner, .. } => vec![inner],
            Node::Idealize { .. } => Vec::new(),
        }
    }
}

impl fmt::Display for MorphismExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}
