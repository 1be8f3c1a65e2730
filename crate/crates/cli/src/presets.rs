//! Named models, channels, networks, profiles and ring states.

use std::collections::BTreeMap;
use std::path::Path;

use arealaw::caps::{self, checked_power};
use arealaw::fcs::{presets as channels, FcsDescriptor, QuantumChannel};
use arealaw::linalg::{self, c, paulis, r, CMat, CVec};
use arealaw::singlet::Profile;
use arealaw::thermal::{models, Geometry, LatticeHamiltonian};
use arealaw::{DensityMatrix, SiteSpace};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresetKind {
    ClassicalModel,
    QuantumModel,
    RingState,
    Channel,
    GibbsNetwork,
    Profile,
}

/// Catalog line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetInfo {
    pub name: String,
    pub kind: PresetKind,
    pub description: String,
    /// Drawn from the run seed.
    pub random: bool,
    pub local_dim: Option<usize>,
    pub sites: Option<usize>,
    pub bond_dim: Option<usize>,
    /// Largest Hilbert-space dimension the preset needs, if any.
    pub dimension: Option<u128>,
    pub within_caps: bool,
}

/// Commuting pair-interaction network.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkSpec {
    Ring { h_pair: CMat, local_dim: usize, sites: usize },
    Patch { h_h: CMat, h_v: CMat, local_dim: usize, rows: usize, cols: usize },
}

impl NetworkSpec {
    pub fn local_dim(&self) -> usize {
        match self {
            NetworkSpec::Ring { local_dim, .. } | NetworkSpec::Patch { local_dim, .. } => *local_dim,
        }
    }

    pub fn sites(&self) -> usize {
        match self {
            NetworkSpec::Ring { sites, .. } => *sites,
            NetworkSpec::Patch { rows, cols, .. } => rows * cols,
        }
    }

    /// `H` built directly, for comparison with the contracted network.
    pub fn hamiltonian(&self) -> CMat {
        let d = self.local_dim();
        let n = self.sites();
        let mut out = CMat::zeros(d.pow(n as u32), d.pow(n as u32));
        match self {
            NetworkSpec::Ring { h_pair, sites, .. } => {
                for b in 0..*sites {
                    out += linalg::embed_operator(h_pair, &[b, (b + 1) % sites], d, n);
                }
            }
            NetworkSpec::Patch { h_h, h_v, rows, cols, .. } => {
                let g = Geometry::Patch { rows: *rows, cols: *cols };
                for (a, b) in g.horizontal_bonds() {
                    out += linalg::embed_operator(h_h, &[a, b], d, n);
                }
                for (a, b) in g.vertical_bonds() {
                    out += linalg::embed_operator(h_v, &[a, b], d, n);
                }
            }
        }
        out
    }
}

/// Singlet profile with its truncation rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePreset {
    pub profile: Profile,
    /// Extend the truncation to `40 · R_max` so that no pair length the
    /// radius grid can resolve is cut away.
    pub cover_grid: bool,
}

/// A fixed ring state with its known block-entropy profile `S(0..=N)`.
#[derive(Debug, Clone)]
pub struct RingState {
    pub state: DensityMatrix,
    pub exact_profile: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum Resolved {
    Hamiltonian(LatticeHamiltonian),
    RingState(RingState),
    Channel(FcsDescriptor),
    Network(NetworkSpec),
    Profile(ProfilePreset),
}

struct Builtin {
    name: &'static str,
    kind: PresetKind,
    description: &'static str,
    random: bool,
}

const fn entry(name: &'static str, kind: PresetKind, description: &'static str, random: bool) -> Builtin {
    Builtin { name, kind, description, random }
}

use PresetKind::*;

const BUILTINS: &[Builtin] = &[
    entry("ising-ring-8", ClassicalModel, "classical Ising ring, J = 1, no field, 8 sites", false),
    entry("ising-ring-12", ClassicalModel, "classical Ising ring, J = 1, no field, 12 sites", false),
    entry("ising-field-ring-10", ClassicalModel, "classical Ising ring, J = 1, field 0.3, 10 sites", false),
    entry("potts3-ring-8", ClassicalModel, "3-state Potts ring, J = 1, 8 sites", false),
    entry("ising-patch-3x3", ClassicalModel, "classical Ising 3x3 open patch, J = 1", false),
    entry("potts3-patch-2x3", ClassicalModel, "3-state Potts 2x3 open patch, J = 1", false),
    entry("tfim-chain-8", QuantumModel, "transverse-field Ising chain, J = 1, g = 1, 8 sites", false),
    entry("tfim-ring-8", QuantumModel, "transverse-field Ising ring, J = 1, g = 1, 8 sites", false),
    entry("xx-chain-8", QuantumModel, "XX chain, J = 1, 8 sites", false),
    entry("xx-ring-8", QuantumModel, "XX ring, J = 1, 8 sites", false),
    entry("heisenberg-chain-8", QuantumModel, "Heisenberg chain, J = 1, 8 sites", false),
    entry("heisenberg-ring-8", QuantumModel, "Heisenberg ring, J = 1, 8 sites", false),
    entry("random-2local-chain-8", QuantumModel, "unit-norm random two-site terms on an 8-site chain", true),
    entry("ghz-ring-8", RingState, "pure GHZ state of 8 qubits", false),
    entry("product-ring-8", RingState, "product of cos(π/8)|0⟩ + sin(π/8)|1⟩ on 8 qubits", false),
    entry("aklt", Channel, "spin-1 AKLT generator, D = 2, d = 3", false),
    entry("aklt-mixed", Channel, "AKLT with a π z-rotation applied with probability 0.2", false),
    entry("ghz", Channel, "GHZ generator, D = 2, d = 2 (degenerate peripheral spectrum)", false),
    entry("product", Channel, "product-state generator, D = 1, d = 2", false),
    entry("random-d2", Channel, "random two-Kraus generator, D = 2, d = 2", true),
    entry("random-d3", Channel, "random two-Kraus generator, D = 3, d = 2", true),
    entry("random-pure-d2", Channel, "random isometry generator, D = 2, d = 2", true),
    entry("random-pure-d3", Channel, "random isometry generator, D = 3, d = 2", true),
    entry("ising-mpo-ring-6", GibbsNetwork, "classical Ising pair term -Z⊗Z on a 6-site ring", false),
    entry("zz-mpo-ring-8", GibbsNetwork, "Z⊗Z pair term on an 8-site ring", false),
    entry("cluster-mpo-ring-6", GibbsNetwork, "cluster terms -ZXZ on 6 qubits grouped into 3 two-qubit blocks", false),
    entry("random-commuting-mpo-ring-6", GibbsNetwork, "random pair term diagonal in a random product basis, 6-site ring", true),
    entry("ising-peps-2x2", GibbsNetwork, "classical Ising -Z⊗Z on a 2x2 patch", false),
    entry("zz-peps-2x3", GibbsNetwork, "Z⊗Z horizontal, -0.4 Z⊗Z + 0.2 Z⊗1 vertical, 2x3 patch", false),
    entry("exponential-2", Profile, "f(x) = exp(-x/2), truncated at 40", false),
    entry("exponential-3", Profile, "f(x) = exp(-x/3), truncated at 60", false),
    entry("exponential-5", Profile, "f(x) = exp(-x/5), truncated at 100", false),
    entry("lorentzian-1", Profile, "f(x) = 1/(x² + 1), truncated beyond the radius grid", false),
    entry("lorentzian-2", Profile, "f(x) = 1/(x² + 4), truncated beyond the radius grid", false),
    entry("uniform-5", Profile, "f(x) = 1 for 1 ≤ x ≤ 5", false),
];

/// Preset file in a custom directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CustomPreset {
    Profile {
        name: String,
        #[serde(default)]
        description: String,
        profile: Profile,
    },
    /// Kraus operators as rows of `[re, im]` pairs, each of shape `(D·d) x D`
    /// with the memory index most significant in the rows.
    Channel {
        name: String,
        #[serde(default)]
        description: String,
        phys_dim: usize,
        kraus: Vec<Vec<Vec<[f64; 2]>>>,
    },
}

impl CustomPreset {
    fn name(&self) -> &str {
        match self {
            CustomPreset::Profile { name, .. } | CustomPreset::Channel { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Registry {
    custom: BTreeMap<String, CustomPreset>,
}

impl Registry {
    pub fn builtin() -> Self {
        Registry::default()
    }

    /// Built-ins plus every `*.json` file of `dir`.
    pub fn with_custom_dir(dir: &Path) -> Result<Self, CliError> {
        let mut custom = BTreeMap::new();
        let entries = std::fs::read_dir(dir).map_err(|e| CliError::Config(format!("cannot read {}: {e}", dir.display())))?;
        let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for path in paths.into_iter().filter(|p| p.extension().is_some_and(|x| x == "json")) {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let preset: CustomPreset =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let name = preset.name().to_string();
            if BUILTINS.iter().any(|b| b.name == name) || custom.contains_key(&name) {
                return Err(CliError::Config(format!("preset '{name}' is defined twice")));
            }
            custom.insert(name, preset);
        }
        Ok(Registry { custom })
    }

    pub fn kind(&self, name: &str) -> Result<PresetKind, CliError> {
        if let Some(b) = BUILTINS.iter().find(|b| b.name == name) {
            return Ok(b.kind);
        }
        match self.custom.get(name) {
            Some(CustomPreset::Profile { .. }) => Ok(PresetKind::Profile),
            Some(CustomPreset::Channel { .. }) => Ok(PresetKind::Channel),
            None if parametric_profile(name).is_some() => Ok(PresetKind::Profile),
            None => Err(CliError::Config(format!("unknown preset '{name}'"))),
        }
    }

    pub fn is_random(&self, name: &str) -> bool {
        BUILTINS.iter().any(|b| b.name == name && b.random)
    }

    /// Builds a preset; random presets draw from `rng`.
    pub fn resolve(&self, name: &str, rng: &mut ChaCha8Rng) -> Result<Resolved, CliError> {
        if let Some(custom) = self.custom.get(name) {
            return resolve_custom(custom);
        }
        Ok(match name {
            "ising-ring-8" => Resolved::Hamiltonian(models::classical_ising(Geometry::Ring { sites: 8 }, 1.0, 0.0)?),
            "ising-ring-12" => Resolved::Hamiltonian(models::classical_ising(Geometry::Ring { sites: 12 }, 1.0, 0.0)?),
            "ising-field-ring-10" => {
                Resolved::Hamiltonian(models::classical_ising(Geometry::Ring { sites: 10 }, 1.0, 0.3)?)
            }
            "potts3-ring-8" => Resolved::Hamiltonian(models::classical_potts(Geometry::Ring { sites: 8 }, 3, 1.0)?),
            "ising-patch-3x3" => {
                Resolved::Hamiltonian(models::classical_ising(Geometry::Patch { rows: 3, cols: 3 }, 1.0, 0.0)?)
            }
            "potts3-patch-2x3" => {
                Resolved::Hamiltonian(models::classical_potts(Geometry::Patch { rows: 2, cols: 3 }, 3, 1.0)?)
            }
            "tfim-chain-8" => Resolved::Hamiltonian(models::transverse_ising(Geometry::Chain { sites: 8 }, 1.0, 1.0)?),
            "tfim-ring-8" => Resolved::Hamiltonian(models::transverse_ising(Geometry::Ring { sites: 8 }, 1.0, 1.0)?),
            "xx-chain-8" => Resolved::Hamiltonian(models::xx(Geometry::Chain { sites: 8 }, 1.0)?),
            "xx-ring-8" => Resolved::Hamiltonian(models::xx(Geometry::Ring { sites: 8 }, 1.0)?),
            "heisenberg-chain-8" => Resolved::Hamiltonian(models::heisenberg(Geometry::Chain { sites: 8 }, 1.0)?),
            "heisenberg-ring-8" => Resolved::Hamiltonian(models::heisenberg(Geometry::Ring { sites: 8 }, 1.0)?),
            "random-2local-chain-8" => Resolved::Hamiltonian(models::random_two_local(rng, Geometry::Chain { sites: 8 })?),
            "ghz-ring-8" => Resolved::RingState(ghz_ring(8)?),
            "product-ring-8" => Resolved::RingState(product_ring(8)?),
            "aklt" => Resolved::Channel(channels::aklt()?),
            "aklt-mixed" => Resolved::Channel(channels::aklt_mixed(0.2)?),
            "ghz" => Resolved::Channel(channels::ghz()?),
            "product" => Resolved::Channel(channels::product()?),
            "random-d2" => Resolved::Channel(channels::random(rng, 2, 2, 2)?),
            "random-d3" => Resolved::Channel(channels::random(rng, 3, 2, 2)?),
            "random-pure-d2" => Resolved::Channel(channels::random(rng, 2, 2, 1)?),
            "random-pure-d3" => Resolved::Channel(channels::random(rng, 3, 2, 1)?),
            "ising-mpo-ring-6" => Resolved::Network(NetworkSpec::Ring { h_pair: zz() * r(-1.0), local_dim: 2, sites: 6 }),
            "zz-mpo-ring-8" => Resolved::Network(NetworkSpec::Ring { h_pair: zz(), local_dim: 2, sites: 8 }),
            "cluster-mpo-ring-6" => Resolved::Network(NetworkSpec::Ring { h_pair: cluster_pair(), local_dim: 4, sites: 3 }),
            "random-commuting-mpo-ring-6" => {
                Resolved::Network(NetworkSpec::Ring { h_pair: random_commuting_pair(rng), local_dim: 2, sites: 6 })
            }
            "ising-peps-2x2" => Resolved::Network(NetworkSpec::Patch {
                h_h: zz() * r(-1.0),
                h_v: zz() * r(-1.0),
                local_dim: 2,
                rows: 2,
                cols: 2,
            }),
            "zz-peps-2x3" => Resolved::Network(NetworkSpec::Patch {
                h_h: zz(),
                h_v: zz() * r(-0.4) + linalg::kron(&paulis::z(), &linalg::identity(2)) * r(0.2),
                local_dim: 2,
                rows: 2,
                cols: 3,
            }),
            "exponential-2" => profile(Profile::Exponential { xi: 2.0 }, false),
            "exponential-3" => profile(Profile::Exponential { xi: 3.0 }, false),
            "exponential-5" => profile(Profile::Exponential { xi: 5.0 }, false),
            "lorentzian-1" => profile(Profile::Lorentzian { a: 1.0 }, true),
            "lorentzian-2" => profile(Profile::Lorentzian { a: 2.0 }, true),
            "uniform-5" => profile(Profile::Custom { values: vec![1.0; 5] }, false),
            other => match parametric_profile(other) {
                Some(preset) => Resolved::Profile(preset?),
                None => return Err(CliError::Config(format!("unknown preset '{other}'"))),
            },
        })
    }

    /// Every preset, built-ins first in registry order, then custom ones by
    /// name.
    pub fn catalog(&self) -> Result<Vec<PresetInfo>, CliError> {
        let caps = caps::global();
        let mut out = Vec::new();
        let names = BUILTINS
            .iter()
            .map(|b| (b.name.to_string(), b.description.to_string(), b.random))
            .chain(self.custom.values().map(|c| {
                let description = match c {
                    CustomPreset::Profile { description, .. } | CustomPreset::Channel { description, .. } => description,
                };
                (c.name().to_string(), description.clone(), false)
            }));
        for (name, description, random) in names {
            let mut rng = crate::task_rng(0, 0);
            let resolved = self.resolve(&name, &mut rng)?;
            let (local_dim, sites, bond_dim, dimension) = match &resolved {
                Resolved::Hamiltonian(h) => {
                    let d = h.local_dim();
                    let n = h.site_count();
                    (Some(d), Some(n), None, Some(checked_power(d, n)))
                }
                Resolved::RingState(ring) => {
                    let s = ring.state.space();
                    (Some(s.local_dim()), Some(s.site_count()), None, Some(s.dim() as u128))
                }
                Resolved::Channel(f) => (Some(f.phys_dim()), None, Some(f.bond_dim()), None),
                Resolved::Network(spec) => {
                    let d = spec.local_dim();
                    (Some(d), Some(spec.sites()), Some(d * d), Some(checked_power(d, spec.sites())))
                }
                Resolved::Profile(_) => (None, None, None, None),
            };
            let within_caps = match (&resolved, dimension) {
                (Resolved::Hamiltonian(h), Some(dim)) if h.is_classical() => caps.check_enumeration(dim).is_ok(),
                (_, Some(dim)) => caps.check_dim(dim).is_ok(),
                _ => true,
            };
            out.push(PresetInfo {
                kind: self.kind(&name)?,
                name,
                description,
                random,
                local_dim,
                sites,
                bond_dim,
                dimension,
                within_caps,
            });
        }
        Ok(out)
    }
}

fn profile(profile: Profile, cover_grid: bool) -> Resolved {
    Resolved::Profile(ProfilePreset { profile, cover_grid })
}

/// `exponential:<ξ>` and `lorentzian:<a>`, the latter truncated beyond the
/// radius grid.
fn parametric_profile(name: &str) -> Option<Result<ProfilePreset, CliError>> {
    let (family, value) = name.split_once(':')?;
    let parsed = value.parse::<f64>().map_err(|_| CliError::Config(format!("bad profile parameter in '{name}'")));
    let (profile, cover_grid) = match family {
        "exponential" => (parsed.map(|xi| Profile::Exponential { xi }), false),
        "lorentzian" => (parsed.map(|a| Profile::Lorentzian { a }), true),
        _ => return None,
    };
    Some(profile.and_then(|profile| {
        arealaw::singlet::SingletModel::new(profile.clone())?;
        Ok(ProfilePreset { profile, cover_grid })
    }))
}

fn resolve_custom(custom: &CustomPreset) -> Result<Resolved, CliError> {
    match custom {
        CustomPreset::Profile { profile, .. } => {
            arealaw::singlet::SingletModel::new(profile.clone())?;
            Ok(Resolved::Profile(ProfilePreset { profile: profile.clone(), cover_grid: false }))
        }
        CustomPreset::Channel { name, phys_dim, kraus, .. } => {
            let mut ops = Vec::with_capacity(kraus.len());
            for rows in kraus {
                let ncols = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|row| row.len() != ncols) {
                    return Err(CliError::Config(format!("preset '{name}': ragged Kraus operator")));
                }
                ops.push(CMat::from_fn(rows.len(), ncols, |i, j| c(rows[i][j][0], rows[i][j][1])));
            }
            let channel = QuantumChannel::new(ops)?;
            if channel.output_dim() != channel.input_dim() * phys_dim {
                return Err(CliError::Config(format!("preset '{name}': Kraus shape does not match phys_dim")));
            }
            Ok(Resolved::Channel(FcsDescriptor::new(channel, *phys_dim)?))
        }
    }
}

fn zz() -> CMat {
    linalg::kron(&paulis::z(), &paulis::z())
}

/// `−(ZXZ1 + 1ZXZ)` on two blocks of two qubits.
pub fn cluster_pair() -> CMat {
    let (x, z) = (paulis::x(), paulis::z());
    let id = linalg::identity(2);
    (linalg::kron_all([&z, &x, &z, &id]) + linalg::kron_all([&id, &z, &x, &z])) * r(-1.0)
}

/// `(U⊗U) diag(e) (U⊗U)†` with a random single-qubit `U` and `e ∈ [−1, 1)`.
pub fn random_commuting_pair(rng: &mut ChaCha8Rng) -> CMat {
    use rand::Rng;
    let u = arealaw::random::unitary(rng, 2);
    let uu = linalg::kron(&u, &u);
    let diag: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    &uu * linalg::real_diag(&diag) * uu.adjoint()
}

/// `S(L) = ln 2` for `0 < L < N`.
pub fn ghz_ring(n: usize) -> Result<RingState, CliError> {
    let dim = 1usize << n;
    let mut psi = CVec::zeros(dim);
    psi[0] = r(std::f64::consts::FRAC_1_SQRT_2);
    psi[dim - 1] = r(std::f64::consts::FRAC_1_SQRT_2);
    let exact_profile = (0..=n).map(|l| if l == 0 || l == n { 0.0 } else { std::f64::consts::LN_2 }).collect();
    Ok(RingState { state: DensityMatrix::pure(SiteSpace::chain(2, n)?, &psi)?, exact_profile })
}

/// `S(L) = 0` throughout.
pub fn product_ring(n: usize) -> Result<RingState, CliError> {
    let t = std::f64::consts::FRAC_PI_8;
    let site = CVec::from_vec(vec![r(t.cos()), r(t.sin())]);
    let mut psi = site.clone();
    for _ in 1..n {
        psi = psi.kronecker(&site);
    }
    Ok(RingState { state: DensityMatrix::pure(SiteSpace::chain(2, n)?, &psi)?, exact_profile: vec![0.0; n + 1] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_stable_and_complete() {
        let registry = Registry::builtin();
        let a = registry.catalog().unwrap();
        let b = registry.catalog().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), BUILTINS.len());
        let aklt = a.iter().find(|p| p.name == "aklt").unwrap();
        assert_eq!((aklt.bond_dim, aklt.local_dim), (Some(2), Some(3)));
        assert!(a.iter().any(|p| p.name == "ising-ring-8" && p.kind == PresetKind::ClassicalModel));
    }

    #[test]
    fn empty_custom_directory_gives_builtins_only() {
        let dir = tempfile::tempdir().unwrap();
        let registry = Registry::with_custom_dir(dir.path()).unwrap();
        assert_eq!(registry.catalog().unwrap(), Registry::builtin().catalog().unwrap());
    }

    #[test]
    fn custom_presets_load_and_clash() {
        let dir = tempfile::tempdir().unwrap();
        let profile = r#"{"kind": "profile", "name": "steps", "profile": {"family": "custom", "values": [1.0, 0.5]}}"#;
        std::fs::write(dir.path().join("steps.json"), profile).unwrap();
        // The identity isometry |α⟩ ↦ |α⟩|0⟩ on a one-dimensional memory.
        let channel = r#"{"kind": "channel", "name": "zero", "phys_dim": 2, "kraus": [[[[1, 0]], [[0, 0]]]]}"#;
        std::fs::write(dir.path().join("zero.json"), channel).unwrap();
        let registry = Registry::with_custom_dir(dir.path()).unwrap();
        let names: Vec<String> = registry.catalog().unwrap().into_iter().map(|p| p.name).collect();
        assert_eq!(&names[names.len() - 2..], ["steps", "zero"]);
        std::fs::write(dir.path().join("clash.json"), r#"{"kind": "profile", "name": "aklt", "profile": {"family": "lorentzian", "a": 1.0}}"#).unwrap();
        assert!(Registry::with_custom_dir(dir.path()).is_err());
    }

    #[test]
    fn unknown_preset_is_a_config_error() {
        let mut rng = crate::task_rng(1, 0);
        assert!(matches!(Registry::builtin().resolve("nope", &mut rng), Err(CliError::Config(_))));
        assert!(Registry::builtin().resolve("exponential:abc", &mut rng).is_err());
        assert!(Registry::builtin().resolve("lorentzian:-1", &mut rng).is_err());
    }

    #[test]
    fn parametric_profiles_resolve() {
        let mut rng = crate::task_rng(1, 0);
        let registry = Registry::builtin();
        assert_eq!(registry.kind("exponential:2.5").unwrap(), PresetKind::Profile);
        match registry.resolve("lorentzian:1.5", &mut rng).unwrap() {
            Resolved::Profile(p) => {
                assert_eq!(p.profile, Profile::Lorentzian { a: 1.5 });
                assert!(p.cover_grid);
            }
            other => panic!("{other:?}"),
        }
    }
}
