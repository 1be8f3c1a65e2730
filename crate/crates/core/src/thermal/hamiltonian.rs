use crate::error::{Error, Result};
use crate::linalg::{self, r, CMat, HERMITICITY_TOL};
use crate::qstate::SiteSpace;

use super::Geometry;

/// What a local term does on its support.
#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    /// Hermitian operator on the support, in support order.
    Operator(CMat),
    /// Energy of each local configuration, indexed row-major in support order.
    Table(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalTerm {
    pub support: Vec<usize>,
    pub coupling: Coupling,
}

impl LocalTerm {
    pub fn operator(support: Vec<usize>, op: CMat) -> Self {
        LocalTerm { support, coupling: Coupling::Operator(op) }
    }

    pub fn table(support: Vec<usize>, table: Vec<f64>) -> Self {
        LocalTerm { support, coupling: Coupling::Table(table) }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.coupling, Coupling::Table(_))
    }

    /// The term as a matrix on its support (tables become diagonal).
    pub fn local_matrix(&self) -> CMat {
        match &self.coupling {
            Coupling::Operator(op) => op.clone(),
            Coupling::Table(t) => linalg::real_diag(t),
        }
    }

    pub fn touches(&self, region: &[usize]) -> bool {
        self.support.iter().any(|s| region.contains(s))
    }

    pub fn within(&self, region: &[usize]) -> bool {
        self.support.iter().all(|s| region.contains(s))
    }
}

/// A finite-range Hamiltonian `H = Σ_k h_k` on a lattice of `d`-level sites
/// labeled `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeHamiltonian {
    local_dim: usize,
    geometry: Geometry,
    terms: Vec<LocalTerm>,
    range: usize,
}

impl LatticeHamiltonian {
    /// Nearest-neighbor range (every support has diameter ≤ 1).
    pub fn new(local_dim: usize, geometry: Geometry, terms: Vec<LocalTerm>) -> Result<Self> {
        Self::with_range(local_dim, geometry, terms, 1)
    }

    /// Hamiltonian whose terms may span up to `range` lattice steps.
    pub fn with_range(
        local_dim: usize,
        geometry: Geometry,
        terms: Vec<LocalTerm>,
        range: usize,
    ) -> Result<Self> {
        geometry.validate()?;
        if local_dim < 2 {
            return Err(Error::OutOfRange { what: "local dimension", value: local_dim as f64 });
        }
        let n = geometry.site_count();
        for (k, term) in terms.iter().enumerate() {
            if term.support.is_empty() {
                return Err(Error::InvalidHamiltonian(format!("term {k} has empty support")));
            }
            let mut sorted = term.support.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != term.support.len() {
                return Err(Error::InvalidHamiltonian(format!("term {k} repeats a site")));
            }
            if let Some(&bad) = term.support.iter().find(|&&s| s >= n) {
                return Err(Error::UnknownSite(bad));
            }
            let local = local_dim.pow(term.support.len() as u32);
            match &term.coupling {
                Coupling::Operator(op) => {
                    if op.nrows() != local || op.ncols() != local {
                        return Err(Error::InvalidHamiltonian(format!(
                            "term {k}: operator is {}x{}, support needs {local}x{local}",
                            op.nrows(),
                            op.ncols()
                        )));
                    }
                    let deviation = linalg::anti_hermitian_deviation(op);
                    if deviation > HERMITICITY_TOL {
                        return Err(Error::NotHermitian { deviation });
                    }
                }
                Coupling::Table(table) => {
                    if table.len() != local {
                        return Err(Error::InvalidHamiltonian(format!(
                            "term {k}: table has {} entries, support needs {local}",
                            table.len()
                        )));
                    }
                    if table.iter().any(|v| !v.is_finite()) {
                        return Err(Error::InvalidHamiltonian(format!("term {k}: non-finite energy")));
                    }
                }
            }
            let diameter = term
                .support
                .iter()
                .flat_map(|&a| term.support.iter().map(move |&b| (a, b)))
                .map(|(a, b)| geometry.distance(a, b))
                .max()
                .unwrap_or(0);
            if diameter > range {
                return Err(Error::InvalidHamiltonian(format!(
                    "term {k} has diameter {diameter}, exceeding the range bound {range}"
                )));
            }
        }
        Ok(LatticeHamiltonian { local_dim, geometry, terms, range })
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn site_count(&self) -> usize {
        self.geometry.site_count()
    }

    pub fn sites(&self) -> Vec<usize> {
        (0..self.site_count()).collect()
    }

    pub fn is_classical(&self) -> bool {
        self.terms.iter().all(LocalTerm::is_classical)
    }

    pub fn space(&self) -> Result<SiteSpace> {
        SiteSpace::chain(self.local_dim, self.site_count())
    }

    /// Dense matrix of `Σ_k h_k` on the listed terms.
    pub fn matrix_of_terms(&self, terms: &[LocalTerm]) -> Result<CMat> {
        let space = self.space()?;
        let n = space.site_count();
        let mut h = CMat::zeros(space.dim(), space.dim());
        for term in terms {
            h += linalg::embed_operator(&term.local_matrix(), &term.support, self.local_dim, n);
        }
        Ok(h)
    }

    pub fn matrix(&self) -> Result<CMat> {
        self.matrix_of_terms(&self.terms)
    }

    /// Classical energy of a configuration (one digit per site).
    pub fn energy(&self, config: &[usize]) -> Result<f64> {
        let mut e = 0.0;
        for term in &self.terms {
            let Coupling::Table(table) = &term.coupling else {
                return Err(Error::InvalidHamiltonian(
                    "configuration energy requires a classical Hamiltonian".into(),
                ));
            };
            let local = term.support.iter().fold(0, |acc, &s| acc * self.local_dim + config[s]);
            e += table[local];
        }
        Ok(e)
    }

    /// Interaction graph adjacency: sites sharing a term.
    pub fn interaction_neighbors(&self) -> Vec<Vec<usize>> {
        let n = self.site_count();
        let mut adj = vec![Vec::new(); n];
        for term in &self.terms {
            for &a in &term.support {
                for &b in &term.support {
                    if a != b && !adj[a].contains(&b) {
                        adj[a].push(b);
                    }
                }
            }
        }
        adj
    }

    /// Same Hamiltonian with every term multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> LatticeHamiltonian {
        let terms = self
            .terms
            .iter()
            .map(|t| LocalTerm {
                support: t.support.clone(),
                coupling: match &t.coupling {
                    Coupling::Operator(op) => Coupling::Operator(op * r(factor)),
                    Coupling::Table(table) => Coupling::Table(table.iter().map(|v| v * factor).collect()),
                },
            })
            .collect();
        LatticeHamiltonian { terms, ..self.clone() }
    }
}

/// `H = H_A + H_∂ + H_B` for disjoint regions `A`, `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySplit {
    pub region_a: Vec<usize>,
    pub region_b: Vec<usize>,
    pub h_a: Vec<LocalTerm>,
    pub h_b: Vec<LocalTerm>,
    /// Every term not contained in `A` or in `B`.
    pub h_boundary: Vec<LocalTerm>,
    /// Sites of `A` touched by a boundary term.
    pub boundary_a: Vec<usize>,
    pub boundary_b: Vec<usize>,
    /// Whether `A ∪ B` is the whole lattice.
    pub complementary: bool,
}

impl BoundarySplit {
    pub fn new(h: &LatticeHamiltonian, region_a: Vec<usize>, region_b: Vec<usize>) -> Result<Self> {
        if region_a.is_empty() || region_b.is_empty() {
            return Err(Error::MalformedSplit("regions must be nonempty".into()));
        }
        let n = h.site_count();
        for &s in region_a.iter().chain(&region_b) {
            if s >= n {
                return Err(Error::MalformedSplit(format!("site {s} is not on the lattice")));
            }
        }
        if let Some(&s) = region_a.iter().find(|s| region_b.contains(s)) {
            return Err(Error::MalformedSplit(format!("site {s} is in both regions")));
        }
        let mut a_sorted = region_a.clone();
        a_sorted.sort_unstable();
        a_sorted.dedup();
        let mut b_sorted = region_b.clone();
        b_sorted.sort_unstable();
        b_sorted.dedup();
        if a_sorted.len() != region_a.len() || b_sorted.len() != region_b.len() {
            return Err(Error::MalformedSplit("repeated site".into()));
        }
        let (mut h_a, mut h_b, mut h_boundary) = (Vec::new(), Vec::new(), Vec::new());
        for term in h.terms() {
            if term.within(&a_sorted) {
                h_a.push(term.clone());
            } else if term.within(&b_sorted) {
                h_b.push(term.clone());
            } else {
                h_boundary.push(term.clone());
            }
        }
        let touched = |region: &[usize]| -> Vec<usize> {
            region
                .iter()
                .copied()
                .filter(|s| h_boundary.iter().any(|t| t.support.contains(s)))
                .collect()
        };
        let boundary_a = touched(&a_sorted);
        let boundary_b = touched(&b_sorted);
        Ok(BoundarySplit {
            complementary: a_sorted.len() + b_sorted.len() == n,
            region_a: a_sorted,
            region_b: b_sorted,
            h_a,
            h_b,
            h_boundary,
            boundary_a,
            boundary_b,
        })
    }

    /// `A` against the rest of the lattice.
    pub fn complement_of(h: &LatticeHamiltonian, region_a: Vec<usize>) -> Result<Self> {
        let region_b: Vec<usize> = (0..h.site_count()).filter(|s| !region_a.contains(s)).collect();
        Self::new(h, region_a, region_b)
    }
}
