/// Bounds that make Gröbner blowup fail with `ResourceLimit` instead of hanging.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_degree: usize,
    pub max_terms: usize,
    /// Generators allowed in a user presentation; internal elimination rings
    /// may add auxiliary variables beyond this.
    pub max_vars: usize,
    pub max_basis: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_degree: 64, max_terms: 100_000, max_vars: 8, max_basis: 5_000 }
    }
}
