use std::sync::Arc;

use crate::error::Error;
use crate::Result;

/// Role of a variable inside a universe.
///
/// Base variables are the coordinates being blown up (the last one is the
/// distinguished direction); fiber variables are everything else the module
/// generators may use.  Blowup variables are the chart coordinates produced by
/// the chart substitution, and aux variables are short-lived helpers for
/// elimination tricks (intersection, radical membership, one-shot saturation).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarTag {
    Base,
    Fiber,
    Blowup,
    Aux,
}

/// An ordered list of named variables with their roles.
///
/// The position in the list is the variable's index everywhere else in the
/// crate: exponent vectors are indexed by it, and every monomial order treats
/// earlier variables as larger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarUniverse {
    names: Vec<String>,
    tags: Vec<VarTag>,
}

impl VarUniverse {
    /// Builds a universe from base and fiber variable names, in that order.
    /// Names must be nonempty and pairwise distinct.
    pub fn new<S: AsRef<str>>(base: &[S], fiber: &[S]) -> Result<Arc<Self>> {
        let mut names = Vec::with_capacity(base.len() + fiber.len());
        let mut tags = Vec::with_capacity(base.len() + fiber.len());
        for b in base {
            names.push(b.as_ref().to_string());
            tags.push(VarTag::Base);
        }
        for x in fiber {
            names.push(x.as_ref().to_string());
            tags.push(VarTag::Fiber);
        }
        Self::validate(&names)?;
        Ok(Arc::new(VarUniverse { names, tags }))
    }

    fn validate(names: &[String]) -> Result<()> {
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Input("empty variable name".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Input(format!("duplicate variable name {n}")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn tag(&self, i: usize) -> VarTag {
        self.tags[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Indices of all variables carrying `tag`, in universe order.
    pub fn indices_with_tag(&self, tag: VarTag) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.tags[i] == tag).collect()
    }

    /// Indices of the base (or blowup, after a chart substitution) variables.
    pub fn base_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| matches!(self.tags[i], VarTag::Base | VarTag::Blowup))
            .collect()
    }

    pub fn fiber_indices(&self) -> Vec<usize> {
        self.indices_with_tag(VarTag::Fiber)
    }

    pub fn n_base(&self) -> usize {
        self.base_indices().len()
    }

    pub fn n_fiber(&self) -> usize {
        self.fiber_indices().len()
    }

    /// Index of the distinguished last base variable.
    pub fn last_base(&self) -> Option<usize> {
        self.base_indices().last().copied()
    }

    /// Extends the universe with one fresh aux variable and returns its index.
    /// The fresh name is derived from `stem` and avoids every existing name.
    pub fn with_aux(self: &Arc<Self>, stem: &str) -> (Arc<Self>, usize) {
        let mut k = 0usize;
        let name = loop {
            let cand = if k == 0 { stem.to_string() } else { format!("{stem}{k}") };
            if self.index_of(&cand).is_none() {
                break cand;
            }
            k += 1;
        };
        let mut names = self.names.clone();
        let mut tags = self.tags.clone();
        names.push(name);
        tags.push(VarTag::Aux);
        let idx = names.len() - 1;
        (Arc::new(VarUniverse { names, tags }), idx)
    }

    /// Extends the universe with one fresh fiber variable (used by the rank
    /// embedding when a presentation declares no fiber variables).
    pub fn with_fresh_fiber(self: &Arc<Self>, stem: &str) -> (Arc<Self>, usize) {
        let (u, idx) = self.with_aux(stem);
        let mut inner = (*u).clone();
        inner.tags[idx] = VarTag::Fiber;
        (Arc::new(inner), idx)
    }

    /// Renames the base variables to chart coordinates (`z1..zn`, tagged
    /// [`VarTag::Blowup`]) while keeping all positions.  Fiber variables are
    /// untouched.
    pub fn blowup_image(self: &Arc<Self>) -> Arc<Self> {
        let mut names = self.names.clone();
        let mut tags = self.tags.clone();
        for (k, i) in self.base_indices().into_iter().enumerate() {
            names[i] = format!("z{}", k + 1);
            tags[i] = VarTag::Blowup;
        }
        // A rename may collide with an existing fiber name; keep names unique.
        VarUniverse::validate(&names).expect("chart coordinate name collides with a fiber variable");
        Arc::new(VarUniverse { names, tags })
    }

    /// True when both universes have identical names and tags.
    pub fn same_as(&self, other: &VarUniverse) -> bool {
        self == other
    }
}
