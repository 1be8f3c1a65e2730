//! One runner per experiment. Work items are evaluated in parallel and
//! assembled in grid order.

use std::collections::BTreeMap;

use arealaw::fcs::{self, BlockPosition, FcsDescriptor, ETA_SENTINEL};
use arealaw::info::{self, SubsetEntropies};
use arealaw::linalg::{self, paulis, CMat};
use arealaw::peps::{self, ContractedNetwork};
use arealaw::qstate::trace_norm_distance;
use arealaw::singlet::{self, AreaLaw, Profile, ScalingFamily, SingletModel};
use arealaw::thermal::{
    classical_area_check, quantum_thermal_area_check, BoundarySplit, ClassicalGibbs, Geometry, HamiltonianSpectrum,
    LatticeHamiltonian,
};
use arealaw::{random, DensityMatrix, SiteSpace};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::*;
use crate::presets::{NetworkSpec, PresetKind, ProfilePreset, Registry, Resolved};
use crate::report::{num, CheckReport, Record, Table};
use crate::{task_rng, CliError};

#[derive(Debug, Default)]
struct Outcome {
    records: Vec<Record>,
    tables: Vec<Table>,
    fits: BTreeMap<String, f64>,
    verdicts: BTreeMap<String, String>,
}

impl Outcome {
    fn absorb(&mut self, other: Outcome) {
        self.records.extend(other.records);
        self.tables.extend(other.tables);
        self.fits.extend(other.fits);
        self.verdicts.extend(other.verdicts);
    }

    fn fit(&mut self, key: String, value: f64) {
        self.fits.insert(key, value);
    }
}

/// Runs every check of the configured experiment.
pub fn run(config: &ExperimentConfig) -> Result<CheckReport, CliError> {
    let registry = match &config.custom_presets {
        Some(dir) => Registry::with_custom_dir(dir)?,
        None => Registry::builtin(),
    };
    let mut outcome = match config.experiment {
        ExperimentKind::ClassicalArea => classical_area(config, &registry)?,
        ExperimentKind::QuantumArea => quantum_area(config, &registry)?,
        ExperimentKind::CorrelatorBound => correlator_bound(config)?,
        ExperimentKind::ShellChain => shell_chain(config)?,
        ExperimentKind::Concavity => concavity(config, &registry)?,
        ExperimentKind::FcsDecay => fcs_decay(config, &registry)?,
        ExperimentKind::FcsArea => fcs_area(config, &registry)?,
        ExperimentKind::GibbsPeps => gibbs_peps(config, &registry)?,
        ExperimentKind::SingletScaling => singlet_scaling(config, &registry)?,
        ExperimentKind::Saturation => saturation(config, &registry)?,
    };
    if outcome.tables.is_empty() {
        outcome.tables.push(record_table(config.experiment.name(), &outcome.records));
    }
    Ok(CheckReport::new(config, outcome.records, outcome.tables, outcome.fits, outcome.verdicts))
}

fn record_table(label: &str, records: &[Record]) -> Table {
    let mut table = Table::new(label, &["check", "inputs", "lhs", "rhs", "slack", "pass"]);
    for r in records {
        table.push(vec![
            r.check.clone(),
            r.inputs.to_string(),
            num(r.lhs),
            num(r.rhs),
            num(r.slack),
            r.pass.to_string(),
        ]);
    }
    table
}

struct Instance {
    label: String,
    resolved: Resolved,
}

/// Resolves the configured presets (or `defaults`), drawing `draws`
/// instances of each random one from its own stream.
fn instances(
    config: &ExperimentConfig,
    registry: &Registry,
    defaults: &[&str],
    allowed: &[PresetKind],
    draws: usize,
) -> Result<Vec<Instance>, CliError> {
    let names: Vec<String> = if config.presets.is_empty() {
        defaults.iter().map(|s| s.to_string()).collect()
    } else {
        config.presets.clone()
    };
    let mut out = Vec::new();
    for (index, name) in names.iter().enumerate() {
        let kind = registry.kind(name)?;
        if !allowed.contains(&kind) {
            return Err(CliError::Config(format!("preset '{name}' ({kind:?}) cannot be used by {}", config.experiment)));
        }
        if registry.is_random(name) {
            let seed = config.require_seed()?;
            if draws == 0 {
                return Err(CliError::Config("draws must be positive".into()));
            }
            for k in 0..draws {
                let mut rng = task_rng(seed, ((index as u64) << 32) | k as u64);
                out.push(Instance { label: format!("{name}-{k}"), resolved: registry.resolve(name, &mut rng)? });
            }
        } else {
            let mut rng = task_rng(0, 0);
            out.push(Instance { label: name.clone(), resolved: registry.resolve(name, &mut rng)? });
        }
    }
    Ok(out)
}

fn hamiltonian(inst: &Instance) -> &LatticeHamiltonian {
    match &inst.resolved {
        Resolved::Hamiltonian(h) => h,
        _ => unreachable!("kind checked when resolving"),
    }
}

fn region_string(region: &[usize]) -> String {
    region.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn grid<T: Copy>(a: usize, bs: &[T]) -> Vec<(usize, T)> {
    (0..a).flat_map(|i| bs.iter().map(move |&b| (i, b))).collect()
}

fn collect<T: Sync, F>(items: &[T], f: F) -> Result<Outcome, CliError>
where
    F: Fn(&T) -> Result<Outcome, CliError> + Sync + Send,
{
    let parts: Vec<Outcome> = items.par_iter().map(f).collect::<Result<_, _>>()?;
    let mut out = Outcome::default();
    for part in parts {
        out.absorb(part);
    }
    Ok(out)
}

/// Merges per-task rows into one table per label, keeping first-seen order.
fn merge_tables(outcome: &mut Outcome) {
    let mut merged: Vec<Table> = Vec::new();
    for table in outcome.tables.drain(..) {
        match merged.iter_mut().find(|t| t.label == table.label) {
            Some(existing) => existing.rows.extend(table.rows),
            None => merged.push(table),
        }
    }
    outcome.tables = merged;
}

const THERMAL_HEADER: [&str; 7] = ["model", "beta", "region", "boundary", "i_ab", "bound_rhs", "pass"];

fn classical_area(config: &ExperimentConfig, registry: &Registry) -> Result<Outcome, CliError> {
    let params: BetaParams = config.params()?;
    check_betas(&params.beta)?;
    let tol = config.tolerance();
    let insts = instances(
        config,
        registry,
        &["ising-ring-8", "ising-ring-12", "ising-field-ring-10", "potts3-ring-8", "ising-patch-3x3", "potts3-patch-2x3"],
        &[PresetKind::ClassicalModel],
        1,
    )?;
    let tasks = grid(insts.len(), &params.beta);
    let mut out = collect(&tasks, |&(i, beta)| {
        let inst = &insts[i];
        let h = hamiltonian(inst);
        let g = ClassicalGibbs::build(h, beta)?;
        let mut out = Outcome::default();
        let mut table = Table::new("classical-area", &THERMAL_HEADER);
        for region in h.geometry().contiguous_regions() {
            let split = BoundarySplit::complement_of(h, region.clone())?;
            let report = classical_area_check(&g, &split)?;
            let inputs = json!({"model": inst.label, "beta": beta, "region": region});
            let equality = Record::equal("boundary-equality", inputs.clone(), report.i_ab, report.i_boundary, tol);
            let bound = Record::at_most("boundary-bound", inputs, report.i_ab, report.bound, tol);
            table.push(vec![
                inst.label.clone(),
                num(beta),
                region_string(&region),
                report.boundary_a.len().to_string(),
                num(report.i_ab),
                num(report.bound),
                (equality.pass && bound.pass).to_string(),
            ]);
            out.records.extend([equality, bound]);
        }
        out.tables.push(table);
        Ok(out)
    })?;
    merge_tables(&mut out);
    Ok(out)
}

fn quantum_area(config: &ExperimentConfig, registry: &Registry) -> Result<Outcome, CliError> {
    let params: QuantumAreaParams = config.params()?;
    check_betas(&params.beta)?;
    let tol = config.tolerance();
    let insts = instances(
        config,
        registry,
        &["tfim-chain-8", "xx-chain-8", "heisenberg-chain-8", "random-2local-chain-8"],
        &[PresetKind::QuantumModel, PresetKind::ClassicalModel],
        params.draws,
    )?;
    let mut out = collect(&insts, |inst| {
        let h = hamiltonian(inst);
        let spectrum = HamiltonianSpectrum::new(h)?;
        let mut out = Outcome::default();
        let mut header = THERMAL_HEADER.to_vec();
        header.insert(6, "simple_bound");
        let mut table = Table::new("quantum-area", &header);
        let mut flagged = 0usize;
        for &beta in &params.beta {
            let g = spectrum.gibbs(beta)?;
            for region in h.geometry().contiguous_regions() {
                let split = BoundarySplit::complement_of(h, region.clone())?;
                let report = quantum_thermal_area_check(&g, &split)?;
                flagged += usize::from(report.exceeds_classical_cap);
                let inputs = json!({"model": inst.label, "beta": beta, "region": region});
                let free = Record::at_most("free-energy-bound", inputs.clone(), report.i_ab, report.rhs, tol);
                let simple = Record::at_most("boundary-norm-bound", inputs, report.rhs, report.simple_bound, tol);
                table.push(vec![
                    inst.label.clone(),
                    num(beta),
                    region_string(&region),
                    report.boundary_size.to_string(),
                    num(report.i_ab),
                    num(report.rhs),
                    num(report.simple_bound),
                    (free.pass && simple.pass).to_string(),
                ]);
                out.records.extend([free, simple]);
            }
        }
        out.fit(format!("{}.exceeds_classical_cap", inst.label), flagged as f64);
        out.tables.push(table);
        Ok(out)
    })?;
    merge_tables(&mut out);
    Ok(out)
}

fn check_qubits(qubits: &[usize], min: usize) -> Result<(), CliError> {
    non_empty("qubits", qubits)?;
    if let Some(n) = qubits.iter().find(|&&n| n < min) {
        return Err(CliError::Config(format!("need at least {min} qubits, got {n}")));
    }
    Ok(())
}

fn correlator_bound(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let params: CorrelatorParams = config.params()?;
    check_qubits(&params.qubits, 2)?;
    let seed = config.require_seed()?;
    let tol = config.tolerance();
    let draws: Vec<usize> = (0..params.draws).collect();
    collect(&draws, |&k| {
        let mut rng = task_rng(seed, k as u64);
        let n = params.qubits[k % params.qubits.len()];
        let space = SiteSpace::chain(2, n)?;
        let rank = rng.random_range(1..=space.dim());
        let cut = rng.random_range(1..n);
        let rho = random::density_matrix(&mut rng, space, Some(rank));
        let ma = random::observable(&mut rng, SiteSpace::new(2, (0..cut).collect())?);
        let mb = random::observable(&mut rng, SiteSpace::new(2, (cut..n).collect())?);
        let bound = info::check_correlator_bound(&rho, &ma, &mb)?;
        let inputs = json!({"draw": k, "qubits": n, "rank": rank, "cut": cut});
        Ok(Outcome {
            records: vec![Record::at_least("correlator-bound", inputs, bound.mutual_information, bound.rhs, tol)],
            ..Outcome::default()
        })
    })
}

fn shell_chain(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let params: ShellParams = config.params()?;
    check_qubits(&params.qubits, 2)?;
    let seed = config.require_seed()?;
    let tol = config.tolerance();
    let states: Vec<usize> = (0..params.states).collect();
    collect(&states, |&k| {
        let mut rng = task_rng(seed, k as u64);
        let n = params.qubits[k % params.qubits.len()];
        let space = SiteSpace::chain(2, n)?;
        // Alternate pure and full-rank draws.
        let rank = if k % 2 == 0 { Some(1) } else { None };
        let labels = space.labels().to_vec();
        let rho = random::density_matrix(&mut rng, space, rank);
        let entropies = SubsetEntropies::new(&rho)?;
        let geometries = info::all_shell_geometries(&labels);
        let mut worst: Option<(info::ShellChain, usize)> = None;
        for (g, geometry) in geometries.iter().enumerate() {
            let chain = entropies.shell_chain(geometry)?;
            if worst.as_ref().is_none_or(|(w, _)| chain.slack < w.slack) {
                worst = Some((chain, g));
            }
        }
        let (chain, g) = worst.expect("at least one geometry");
        let geometry = &geometries[g];
        let inputs = json!({
            "state": k,
            "qubits": n,
            "pure": rank.is_some(),
            "geometries": geometries.len(),
            "worst": {"a": geometry.inner, "c": geometry.shell, "b": geometry.outer},
        });
        Ok(Outcome {
            records: vec![Record::at_most("shell-chain", inputs, chain.i_a_bc, chain.i_a_b + 2.0 * chain.s_c, tol)],
            ..Outcome::default()
        })
    })
}

fn ring_sites(h: &LatticeHamiltonian, label: &str) -> Result<(), CliError> {
    match h.geometry() {
        Geometry::Ring { .. } => Ok(()),
        other => Err(CliError::Config(format!("preset '{label}' lives on {other:?}, a ring is required"))),
    }
}

/// Thermal model presets contribute one task per β, ring states one task.
fn ring_tasks(insts: &[Instance], betas: &[f64]) -> Result<Vec<(usize, Option<f64>)>, CliError> {
    let mut tasks = Vec::new();
    for (i, inst) in insts.iter().enumerate() {
        match &inst.resolved {
            Resolved::Hamiltonian(h) => {
                ring_sites(h, &inst.label)?;
                tasks.extend(betas.iter().map(|&b| (i, Some(b))));
            }
            _ => tasks.push((i, None)),
        }
    }
    Ok(tasks)
}

fn ring_state(inst: &Instance, beta: Option<f64>) -> Result<DensityMatrix, CliError> {
    Ok(match (&inst.resolved, beta) {
        (Resolved::RingState(ring), _) => ring.state.clone(),
        (Resolved::Hamiltonian(h), Some(beta)) if h.is_classical() => {
            ClassicalGibbs::build(h, beta)?.distribution.to_density()?
        }
        (Resolved::Hamiltonian(h), Some(beta)) => HamiltonianSpectrum::new(h)?.gibbs(beta)?.rho,
        _ => unreachable!("ring tasks pair models with a temperature"),
    })
}

fn concavity(config: &ExperimentConfig, registry: &Registry) -> Result<Outcome, CliError> {
    let params: BetaParams = config.params()?;
    check_betas(&params.beta)?;
    let tol = config.tolerance();
    let insts = instances(
        config,
        registry,
        &["tfim-ring-8", "xx-ring-8", "heisenberg-ring-8", "ghz-ring-8", "product-ring-8"],
        &[PresetKind::QuantumModel, PresetKind::ClassicalModel, PresetKind::RingState],
        1,
    )?;
    let tasks = ring_tasks(&insts, &params.beta)?;
    let mut out = collect(&tasks, |&(i, beta)| {
        let inst = &insts[i];
        let rho = ring_state(inst, beta)?;
        let profile = info::block_entropy_profile(&rho)?;
        let s = &profile.entropies;
        let n = s.len() - 1;
        let ring = info::ring_mi_increments(s)?;
        let mut out = Outcome::default();
        let mut table = Table::new("concavity", &["model", "beta", "L", "entropy", "mutual_information"]);
        let beta_json = beta.map_or(Value::Null, |b| json!(b));
        for l in 1..n {
            let inputs = json!({"model": inst.label, "beta": beta_json, "L": l});
            out.records.push(Record::at_least("concavity", inputs, s[l], (s[l - 1] + s[l + 1]) / 2.0, tol));
        }
        for l in 1..=n / 2 {
            let inputs = json!({"model": inst.label, "beta": beta_json, "L": l});
            out.records.push(Record::at_least("ring-increment", inputs, ring.increments[l - 1], 0.0, tol));
        }
        if let Resolved::RingState(exact) = &inst.resolved {
            let exact_mi = info::ring_mi_increments(&exact.exact_profile)?.mutual_information;
            for l in 0..=n {
                let inputs = json!({"model": inst.label, "L": l});
                out.records.push(Record::equal("exact-entropy", inputs.clone(), s[l], exact.exact_profile[l], tol));
                out.records.push(Record::equal("exact-mutual-information", inputs, ring.mutual_information[l], exact_mi[l], tol));
            }
        }
        for l in 0..=n {
            table.push(vec![
                inst.label.clone(),
                beta.map_or(String::new(), num),
                l.to_string(),
                num(s[l]),
                num(ring.mutual_information[l]),
            ]);
        }
        out.fit(format!("{}{}.position_spread", inst.label, beta.map_or(String::new(), |b| format!("@{b}"))), profile.position_spread);
        out.tables.push(table);
        Ok(out)
    })?;
    merge_tables(&mut out);
    Ok(out)
}

fn channel(inst: &Instance) -> &FcsDescriptor {
    match &inst.resolved {
        Resolved::Channel(f) => f,
        _ => unreachable!("kind checked when resolving"),
    }
}

fn check_range(name: &str, range: (usize, usize), gaps: &[usize]) -> Result<(), CliError> {
    let inside = gaps.iter().filter(|&&l| l >= range.0 && l <= range.1).count();
    if range.0 > range.1 || inside < 2 {
        return Err(CliError::Config(format!("{name} {range:?} covers fewer than two separations")));
    }
    Ok(())
}

fn fcs_decay(config: &ExperimentConfig, registry: &Registry) -> Result<Outcome, CliError> {
    let params: FcsDecayParams = config.params()?;
    non_empty("gaps", &params.gaps)?;
    check_range("fit_range", params.fit_range, &params.gaps)?;
    check_range("mi_fit_range", params.mi_fit_range, &params.gaps)?;
    if params.block == 0 {
        return Err(CliError::Config("block must be positive".into()));
    }
    let tol = config.tolerance();
    let insts = instances(config, registry, &["aklt", "random-d2", "random-d3"], &[PresetKind::Channel], params.draws)?;
    collect(&insts, |inst| {
        let f = channel(inst);
        let curve = fcs::factorization_curve(f, params.block, params.block, &params.gaps)?;
        let label = &inst.label;
        let mut out = Outcome::default();
        let mut table = Table::new(label.clone(), &["L", "trace_distance", "mutual_information", "bound"]);
        for p in &curve.points {
            table.push(vec![p.l.to_string(), num(p.trace_distance), num(p.mutual_information), num(p.bound)]);
            let inputs = json!({"channel": label, "L": p.l});
            out.records.push(Record::at_most("fannes-bound", inputs, p.mutual_information, p.bound, tol));
        }
        out.tables.push(table);
        out.fit(format!("{label}.eta"), curve.eta);
        if curve.eta <= ETA_SENTINEL {
            let exact = curve.points.iter().all(|p| p.trace_distance <= tol);
            out.records.push(Record::flag("exact-factorization", json!({"channel": label}), exact));
            out.verdicts.insert(format!("{label}.decay"), "exact factorization".into());
            return Ok(out);
        }
        let ln_eta = curve.eta.ln();
        out.fit(format!("{label}.ln_eta"), ln_eta);
        let norm = curve.norm_bound()?;
        out.fit(format!("{label}.c"), norm.c);
        for &(l, td, bound) in &norm.checks {
            let inputs = json!({"channel": label, "L": l, "fit_gap": norm.fit_gap});
            out.records.push(Record::at_most("norm-bound", inputs, td, bound, tol));
        }
        let inputs = json!({"channel": label, "range": params.fit_range});
        match curve.trace_distance_fit(params.fit_range) {
            Some(fit) => {
                out.fit(format!("{label}.trace_distance_slope"), fit.slope);
                out.records.push(Record::relative("trace-distance-slope", inputs, fit.slope, ln_eta, params.slope_tolerance));
            }
            None => out.records.push(Record::flag("trace-distance-slope", inputs, false)),
        }
        let mi_fit = curve.mutual_information_fit(params.mi_fit_range);
        if let Some(fit) = &mi_fit {
            out.fit(format!("{label}.mutual_information_slope"), fit.slope);
        }
        if let Some(rel) = params.mi_rate_tolerance {
            let inputs = json!({"channel": label, "range": params.mi_fit_range});
            out.records.push(match mi_fit {
                Some(fit) => Record::relative("mutual-information-rate", inputs, fit.slope, ln_eta, rel),
                None => Record::flag("mutual-information-rate", inputs, false),
            });
        }
        Ok(out)
    })
}

fn fcs_area(config: &ExperimentConfig, registry: &Registry) -> Result<Outcome, CliError> {
    let params: FcsAreaParams = config.params()?;
    non_empty("lengths", &params.lengths)?;
    if params.lengths.contains(&0) {
        return Err(CliError::Config("block lengths must be positive".into()));
    }
    let tol = config.tolerance();
    let insts = instances(
        config,
        registry,
        &["aklt", "ghz", "product", "random-pure-d2", "random-pure-d3"],
        &[PresetKind::Channel],
        params.draws,
    )?;
    for inst in &insts {
        if !channel(inst).is_pure() {
            return Err(CliError::Config(format!("channel '{}' does not generate a pure state", inst.label)));
        }
    }
    let tasks = grid(insts.len(), &params.lengths);
    collect(&tasks, |&(i, n)| {
        let report = fcs::mps_area_check(channel(&insts[i]), n, BlockPosition::Interior)?;
        let inputs = json!({"channel": insts[i].label, "length": n, "bond_dim": channel(&insts[i]).bond_dim()});
        Ok(Outcome {
            records: vec![Record::at_most("mps-area-bound", inputs, report.mutual_information, report.bound, tol)],
            ..Outcome::default()
        })
    })
}

fn contract(spec: &NetworkSpec, beta: f64) -> Result<ContractedNetwork, CliError> {
    Ok(match spec {
        NetworkSpec::Ring { h_pair, local_dim, sites } => {
            peps::build_gibbs_tensor_1d(h_pair, beta, *local_dim)?.contract_ring(*sites)?
        }
        NetworkSpec::Patch { h_h, h_v, local_dim, rows, cols } => {
            peps::build_gibbs_tensor_2d(h_h, h_v, beta, *local_dim)?.contract_patch(*rows, *cols)?
        }
    })
}

fn spec_geometry(spec: &NetworkSpec) -> Geometry {
    match *spec {
        NetworkSpec::Ring { sites, .. } => Geometry::Ring { sites },
        NetworkSpec::Patch { rows, cols, .. } => Geometry::Patch { rows, cols },
    }
}

/// Negative control: pair terms that do not commute on a shared site.
fn non_commuting_rejected() -> Vec<Record> {
    let (x, y, z) = (paulis::x(), paulis::y(), paulis::z());
    let heisenberg: CMat = linalg::kron(&x, &x) + linalg::kron(&y, &y) + linalg::kron(&z, &z);
    let zz = linalg::kron(&z, &z);
    let xx = linalg::kron(&x, &x);
    let rejected = |r: arealaw::Result<()>| matches!(r, Err(arealaw::Error::NonCommuting { .. }));
    vec![
        Record::flag(
            "non-commuting-rejected",
            json!({"pair": "heisenberg", "lattice": "ring"}),
            rejected(peps::build_gibbs_tensor_1d(&heisenberg, 1.0, 2).map(|_| ())),
        ),
        Record::flag(
            "non-commuting-rejected",
            json!({"pair": "zz horizontal, xx vertical", "lattice": "patch"}),
            rejected(peps::build_gibbs_tensor_2d(&zz, &xx, 1.0, 2).map(|_| ())),
        ),
    ]
}

fn gibbs_peps(config: &ExperimentConfig, registry: &Registry) -> Result<Outcome, CliError> {
    let params: GibbsPepsParams = config.params()?;
    check_betas(&params.beta)?;
    let tol = config.tolerance();
    let insts = instances(
        config,
        registry,
        &["ising-mpo-ring-6", "zz-mpo-ring-8", "cluster-mpo-ring-6", "ising-peps-2x2", "zz-peps-2x3"],
        &[PresetKind::GibbsNetwork],
        params.draws,
    )?;
    let tasks = grid(insts.len(), &params.beta);
    let mut out = collect(&tasks, |&(i, beta)| {
        let inst = &insts[i];
        let spec = match &inst.resolved {
            Resolved::Network(spec) => spec,
            _ => unreachable!("kind checked when resolving"),
        };
        let network = contract(spec, beta)?;
        let exact = linalg::expm_hermitian(&spec.hamiltonian(), -beta);
        let exact = DensityMatrix::from_unnormalized(network.state.space().clone(), exact)?;
        let distance = trace_norm_distance(&network.state, &exact)?;
        let mut out = Outcome::default();
        let inputs = json!({"network": inst.label, "beta": beta});
        out.records.push(Record::at_most("reconstruction", inputs, distance, 0.0, tol));
        for region in spec_geometry(spec).contiguous_regions() {
            let report = peps::peps_area_check_mixed(&network, &region)?;
            let inputs = json!({"network": inst.label, "beta": beta, "region": region, "cut_bonds": report.cut_bonds});
            out.records.push(Record::at_most("peps-area-bound", inputs, report.mutual_information, report.bound, tol));
        }
        Ok(out)
    })?;
    out.records.extend(non_commuting_rejected());
    Ok(out)
}

fn singlet_model(preset: &ProfilePreset, params: &SingletParams) -> Result<SingletModel, CliError> {
    let r_max = params.radii.iter().copied().max().unwrap_or(0);
    let cutoff = match params.cutoff {
        Some(c) => c,
        None if preset.cover_grid => preset.profile.default_cutoff().max(40 * r_max),
        None => preset.profile.default_cutoff(),
    };
    Ok(SingletModel::with_cutoff(preset.profile.clone(), cutoff)?)
}

fn singlet_scaling(config: &ExperimentConfig, registry: &Registry) -> Result<Outcome, CliError> {
    let params: SingletParams = config.params()?;
    non_empty("radii", &params.radii)?;
    non_empty("gaps", &params.gaps)?;
    let insts = instances(
        config,
        registry,
        &["exponential-2", "exponential-3", "exponential-5", "lorentzian-1", "lorentzian-2"],
        &[PresetKind::Profile],
        1,
    )?;
    collect(&insts, |inst| {
        let preset = match &inst.resolved {
            Resolved::Profile(p) => p,
            _ => unreachable!("kind checked when resolving"),
        };
        let model = singlet_model(preset, &params)?;
        let report = singlet::scaling_analysis(&model, &params.radii, &params.gaps)?;
        let label = &inst.label;
        let mut out = Outcome::default();
        let mut table = Table::new(label.clone(), &["R", "L", "crossings", "mi_nats"]);
        for p in &report.points {
            table.push(vec![p.radius.to_string(), p.gap.to_string(), num(p.crossings), num(p.mutual_information)]);
        }
        out.tables.push(table);
        out.fit(format!("{label}.cutoff"), report.cutoff as f64);
        out.fit(format!("{label}.truncation_error"), report.truncation_error);
        out.fit(format!("{label}.xi_m"), report.xi_m.as_f64());
        out.fit(format!("{label}.adjacent_spread"), report.adjacent_spread);
        if let Some(length) = report.decay_length {
            out.fit(format!("{label}.decay_length"), length);
        }
        if let Some(c) = report.min_log_correlation() {
            out.fit(format!("{label}.min_log_correlation"), c);
        }
        for (gap, fit) in &report.log_fits {
            out.fit(format!("{label}.log_slope.L{gap}"), fit.slope);
        }
        let verdict = match report.area_law {
            AreaLaw::Holds => "area law holds",
            AreaLaw::Violated => "area law violated",
        };
        out.verdicts.insert(format!("{label}.area_law"), verdict.into());
        let family = match report.family {
            ScalingFamily::ExponentialDecay => "exponential decay",
            ScalingFamily::LogarithmicGrowth => "logarithmic growth",
        };
        out.verdicts.insert(format!("{label}.family"), family.into());
        let base = json!({"profile": label, "cutoff": report.cutoff});
        match preset.profile {
            Profile::Exponential { xi } => {
                let inputs = json!({"profile": label, "xi": xi});
                out.records.push(match report.decay_length {
                    Some(length) => Record::relative("decay-length", inputs, length, xi, 0.25),
                    None => Record::flag("decay-length", inputs, false),
                });
                out.records.push(Record::flag("xi-m-finite", base.clone(), report.xi_m.is_finite()));
                let plateau: Vec<f64> =
                    report.adjacent.iter().filter(|(r, _)| *r as f64 >= 20.0 * xi).map(|&(_, i)| i).collect();
                let inputs = json!({"profile": label, "from_radius": 20.0 * xi, "radii": plateau.len()});
                out.records.push(if plateau.len() >= 2 {
                    let hi = plateau.iter().copied().fold(f64::MIN, f64::max);
                    let lo = plateau.iter().copied().fold(f64::MAX, f64::min);
                    Record::at_most("adjacent-plateau", inputs, (hi - lo) / hi, singlet::PLATEAU_TOLERANCE, 0.0)
                } else {
                    Record::flag("adjacent-plateau", inputs, false)
                });
                out.records.push(Record::flag("area-law-holds", base, report.area_law == AreaLaw::Holds));
            }
            Profile::Lorentzian { .. } => {
                let inputs = json!({"profile": label, "fits": report.log_fits.len()});
                out.records.push(match report.min_log_correlation() {
                    Some(c) => Record::at_least("log-fit-correlation", inputs, c, 0.99, 0.0),
                    None => Record::flag("log-fit-correlation", inputs, false),
                });
                let increasing = report.adjacent.windows(2).all(|w| w[1].1 > w[0].1);
                out.records.push(Record::flag("adjacent-increasing", base.clone(), increasing));
                out.records.push(Record::flag("xi-m-infinite", base.clone(), !report.xi_m.is_finite()));
                out.records.push(Record::flag("area-law-violated", base, report.area_law == AreaLaw::Violated));
            }
            Profile::Custom { .. } => {}
        }
        Ok(out)
    })
}

fn saturation(config: &ExperimentConfig, registry: &Registry) -> Result<Outcome, CliError> {
    let params: SaturationParams = config.params()?;
    check_betas(&params.beta)?;
    let tol = config.tolerance();
    let insts = instances(
        config,
        registry,
        &["ghz-ring-8", "product-ring-8", "ising-ring-8", "tfim-ring-8"],
        &[PresetKind::QuantumModel, PresetKind::ClassicalModel, PresetKind::RingState],
        1,
    )?;
    let tasks = ring_tasks(&insts, &params.beta)?;
    collect(&tasks, |&(i, beta)| {
        let inst = &insts[i];
        let rho = ring_state(inst, beta)?;
        let profile = info::block_entropy_profile(&rho)?;
        let report = fcs::saturation_detect(&profile.entropies, tol)?;
        let mut out = Outcome::default();
        let key = match beta {
            Some(b) => format!("{}@{b}", inst.label),
            None => inst.label.clone(),
        };
        let inputs = json!({"model": inst.label, "beta": beta});
        match report.saturation_length {
            Some(l0) => {
                out.fit(format!("{key}.saturation_length"), l0 as f64);
                out.verdicts.insert(key.clone(), format!("saturates at L = {l0}"));
            }
            None => {
                out.verdicts.insert(key.clone(), "no saturation".into());
            }
        }
        if let Resolved::RingState(_) = inst.resolved {
            out.records.push(Record::flag("saturation-found", inputs, report.saturation_length.is_some()));
            for &(l, residual) in &report.residuals {
                let inputs = json!({"model": inst.label, "L": l});
                out.records.push(Record::equal("markov-residual", inputs, residual, 0.0, tol));
            }
        } else {
            out.records.push(Record::flag("no-saturation", inputs, report.saturation_length.is_none()));
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(kind: ExperimentKind, presets: &[&str], params: Value, seed: Option<u64>) -> ExperimentConfig {
        ExperimentConfig {
            presets: presets.iter().map(|s| s.to_string()).collect(),
            params,
            seed,
            ..ExperimentConfig::new(kind)
        }
    }

    #[test]
    fn classical_area_on_ising_ring_passes() {
        let c = config(ExperimentKind::ClassicalArea, &["ising-ring-8"], json!({"beta": [0.5]}), None);
        let report = run(&c).unwrap();
        assert!(report.passed());
        assert_eq!(report.summary.pass_count, 2 * 56);
        assert_eq!(report.tables.len(), 1);
    }

    #[test]
    fn random_presets_need_a_seed() {
        let c = config(ExperimentKind::FcsArea, &["random-pure-d2"], json!({"draws": 2}), None);
        assert!(matches!(run(&c), Err(CliError::Config(_))));
        let c = config(ExperimentKind::CorrelatorBound, &[], json!({"draws": 3}), None);
        assert!(matches!(run(&c), Err(CliError::Config(_))));
    }

    #[test]
    fn wrong_preset_kind_is_rejected() {
        let c = config(ExperimentKind::ClassicalArea, &["aklt"], json!({}), None);
        assert!(matches!(run(&c), Err(CliError::Config(_))));
        let c = config(ExperimentKind::Concavity, &["tfim-chain-8"], json!({"beta": [1.0]}), None);
        assert!(matches!(run(&c), Err(CliError::Config(_))));
    }

    #[test]
    fn fcs_decay_on_aklt_tracks_ln_three() {
        let c = config(ExperimentKind::FcsDecay, &["aklt"], json!({"slope_tolerance": 0.05}), None);
        let report = run(&c).unwrap();
        let slope = report.summary.fits["aklt.trace_distance_slope"];
        assert!((slope + 3f64.ln()).abs() < 0.05 * 3f64.ln(), "{slope}");
        assert_eq!(report.tables[0].header, ["L", "trace_distance", "mutual_information", "bound"]);
        assert!(report.passed());
    }

    #[test]
    fn lorentzian_violates_the_area_law() {
        let c = config(ExperimentKind::SingletScaling, &["lorentzian-1"], json!({}), None);
        let report = run(&c).unwrap();
        assert_eq!(report.summary.verdicts["lorentzian-1.area_law"], "area law violated");
        assert!(report.passed());
    }

    #[test]
    fn cap_violations_name_the_dimension() {
        let c = config(ExperimentKind::CorrelatorBound, &[], json!({"draws": 1, "qubits": [15]}), Some(1));
        let err = run(&c).unwrap_err();
        assert!(err.to_string().contains("32768"), "{err}");
    }
}
