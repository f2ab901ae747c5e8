//! Job configuration, dispatch and machine-readable reporting.
//!
//! A job is a single JSON document selecting a task plus its inputs,
//! either by fixture name or by explicit specs (group family or Cayley
//! table, subgroup label list, multiplier exponent table, per-element
//! representation matrices, per-outcome instrument Chois). Complex
//! matrices use the wire format of [`crate::numkernel::matrix_to_json`]:
//! nested arrays of `[re, im]` pairs, row-major.
//!
//! Every numeric in a report is reproducible from `{config, seed}`; the
//! only non-deterministic field is `timestamp`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::covariant::{CanonicalB, CovariantSystem, IntertwinerB};
use crate::dilation::{
    build_dilation, dilation_isomorphism, measurement_model, simulate, verify_dilation,
};
use crate::fixtures;
use crate::groups::{coset_space, validate_multiplier, CosetSpace, FiniteGroup, Multiplier};
use crate::instruments::{
    check_covariance, instrument_statistics, norm_bound_probe, validate_instrument, Instrument,
};
use crate::numkernel::{identity, matrix_from_json, matrix_to_json, max_abs, CMatrix};
use crate::reps::{validate_rep, Representation};
use crate::{Error, Result};

pub const REPORT_SCHEMA: &str = "covins-report/1";

/// Task selector; maps one-to-one onto the CLI `--task` names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Validate,
    EnumerateB,
    Build,
    Dilate,
    Decompose,
    Model,
    Simulate,
}

impl Task {
    pub fn parse(name: &str) -> Result<Task> {
        serde_json::from_value(Value::String(name.to_string()))
            .map_err(|_| Error::Config(format!("unknown task `{name}`")))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Task::Validate => "validate",
            Task::EnumerateB => "enumerate-b",
            Task::Build => "build",
            Task::Dilate => "dilate",
            Task::Decompose => "decompose",
            Task::Model => "model",
            Task::Simulate => "simulate",
        }
    }
}

/// Group selection: a builtin family or an explicit Cayley table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Family {
        family: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ns: Option<Vec<usize>>,
    },
    Cayley { cayley_table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Family { family, n, ns } => match family.as_str() {
                "trivial" => Ok(FiniteGroup::trivial()),
                "cyclic" => {
                    let n = n.ok_or_else(|| Error::Config("cyclic needs field `n`".into()))?;
                    if n == 0 {
                        return Err(Error::Config("cyclic needs n >= 1".into()));
                    }
                    Ok(FiniteGroup::cyclic(n))
                }
                "dihedral" => {
                    let n = n.ok_or_else(|| Error::Config("dihedral needs field `n`".into()))?;
                    if n == 0 {
                        return Err(Error::Config("dihedral needs n >= 1".into()));
                    }
                    Ok(FiniteGroup::dihedral(n))
                }
                "quaternion" => Ok(FiniteGroup::quaternion()),
                "product_of_cyclics" => {
                    let ns = ns
                        .as_ref()
                        .ok_or_else(|| Error::Config("product_of_cyclics needs field `ns`".into()))?;
                    if ns.is_empty() || ns.contains(&0) {
                        return Err(Error::Config("product_of_cyclics needs positive orders".into()));
                    }
                    Ok(FiniteGroup::product_of_cyclics(ns))
                }
                other => Err(Error::Config(format!("unknown group family `{other}`"))),
            },
            GroupSpec::Cayley { cayley_table } => FiniteGroup::from_cayley(cayley_table.clone()),
        }
    }
}

/// Multiplier exponent table: `m(g1,g2) = exp(2πi·table[g1][g2]/root_order)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiplierSpec {
    pub root_order: u32,
    pub table: Vec<Vec<u32>>,
}

/// Representation matrices, either one per element or per generator
/// (ordinary representations only; words are completed through the
/// Cayley table).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<BTreeMap<String, Value>>,
}

/// Per-outcome Choi matrices; the outcome space comes from the subgroup.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstrumentSpec {
    pub dim: usize,
    pub chois: Vec<Value>,
}

/// One job: task, inputs, numerical knobs, output path.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<MultiplierSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instrument: Option<InstrumentSpec>,
    /// Canonical intertwiner choice (`uniform`, `lueders`, `random`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_kind: Option<String>,
    /// Explicit intertwiner matrix, overriding `b_kind`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_matrix: Option<Value>,
    /// Input state for `simulate`; defaults to the maximally mixed state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl JobConfig {
    pub fn from_json_str(text: &str) -> Result<JobConfig> {
        Ok(serde_json::from_str(text)?)
    }
}

/// One named pass/fail line of a report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn residual(name: &str, residual: f64, threshold: f64) -> Check {
        Check {
            name: name.to_string(),
            passed: residual <= threshold,
            residual: Some(residual),
            threshold: Some(threshold),
            detail: None,
        }
    }

    fn flag(name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            passed,
            residual: None,
            threshold: None,
            detail: Some(detail.into()),
        }
    }
}

/// Machine-readable job report, schema `covins-report/1`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub task: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    pub seed: u64,
    pub tolerance: f64,
    /// Seconds since the Unix epoch at report creation; the single field
    /// excluded from reproducibility comparisons.
    pub timestamp: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub artifacts: Map<String, Value>,
}

impl Report {
    fn new(task: Task, fixture: Option<String>, seed: u64, tolerance: f64) -> Report {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Report {
            schema: REPORT_SCHEMA,
            task: task.name().to_string(),
            fixture,
            seed,
            tolerance,
            timestamp,
            passed: true,
            checks: Vec::new(),
            artifacts: Map::new(),
        }
    }

    fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Instrument wire format: `{dim, outcomes, chois}` with outcome labels
/// the canonical coset representatives.
pub fn instrument_to_json(instrument: &Instrument) -> Value {
    let outcomes: Vec<usize> = (0..instrument.num_outcomes())
        .map(|x| instrument.outcomes().representative(x))
        .collect();
    json!({
        "dim": instrument.dim(),
        "outcomes": outcomes,
        "chois": instrument.chois().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

fn instrument_from_spec(spec: &InstrumentSpec, outcomes: &CosetSpace) -> Result<Instrument> {
    let chois = spec
        .chois
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(spec.dim, outcomes.clone(), chois)
}

fn rep_from_spec(
    spec: &RepSpec,
    group: &FiniteGroup,
    multiplier: Option<Multiplier>,
) -> Result<Representation> {
    if let Some(values) = &spec.matrices {
        if values.len() != group.order() {
            return Err(Error::Config(format!(
                "representation lists {} matrices, group has order {}",
                values.len(),
                group.order()
            )));
        }
        let matrices = values.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
        return Representation::new(matrices, multiplier);
    }
    let Some(generators) = &spec.generators else {
        return Err(Error::Config(
            "representation needs `matrices` or `generators`".into(),
        ));
    };
    if multiplier.is_some() {
        return Err(Error::Config(
            "projective representations require full per-element matrices; \
             generator completion would need phase choices the table does not determine"
                .into(),
        ));
    }
    let mut known: Vec<Option<CMatrix>> = vec![None; group.order()];
    let mut dim = None;
    for (label, value) in generators {
        let idx: usize = label
            .parse()
            .map_err(|_| Error::Config(format!("generator label `{label}` is not an element")))?;
        if idx >= group.order() {
            return Err(Error::Config(format!("generator label {idx} out of range")));
        }
        let m = matrix_from_json(value)?;
        dim.get_or_insert(m.nrows());
        known[idx] = Some(m);
    }
    let dim = dim.ok_or_else(|| Error::Config("no generators given".into()))?;
    known[FiniteGroup::IDENTITY].get_or_insert(identity(dim));
    // complete words: products of known elements until the table closes
    loop {
        let mut progressed = false;
        for a in group.elements() {
            for b in group.elements() {
                let (Some(ma), Some(mb)) = (&known[a], &known[b]) else {
                    continue;
                };
                let prod = ma * mb;
                let ab = group.mul(a, b);
                match &known[ab] {
                    None => {
                        known[ab] = Some(prod);
                        progressed = true;
                    }
                    Some(existing) => {
                        if max_abs(&(existing - &prod)) > 1e-9 {
                            return Err(Error::Config(format!(
                                "generator matrices are inconsistent at element {ab}"
                            )));
                        }
                    }
                }
            }
        }
        if !progressed {
            break;
        }
    }
    let matrices = known
        .into_iter()
        .enumerate()
        .map(|(g, m)| m.ok_or_else(|| Error::Config(format!("element {g} is not generated"))))
        .collect::<Result<Vec<_>>>()?;
    Representation::new(matrices, None)
}

/// Inputs of a job after fixture lookup / spec construction.
struct ResolvedInputs {
    fixture: Option<String>,
    group: FiniteGroup,
    rep: Option<Representation>,
    subgroup: Vec<usize>,
    instrument: Option<Instrument>,
}

fn resolve_inputs(config: &JobConfig, tol: f64) -> Result<ResolvedInputs> {
    if let Some(name) = &config.fixture {
        // instrument fixtures carry a -uniform/-lueders suffix
        if name.ends_with("-uniform") || name.ends_with("-lueders") {
            let (f, inst) = fixtures::fixture_instrument(name, tol)?;
            return Ok(ResolvedInputs {
                fixture: Some(name.clone()),
                group: f.group,
                rep: Some(f.rep),
                subgroup: f.subgroup,
                instrument: Some(inst),
            });
        }
        let f = fixtures::fixture(name)?;
        return Ok(ResolvedInputs {
            fixture: Some(name.clone()),
            group: f.group,
            rep: Some(f.rep),
            subgroup: f.subgroup,
            instrument: None,
        });
    }
    let group_spec = config
        .group
        .as_ref()
        .ok_or_else(|| Error::Config("either `fixture` or `group` is required".into()))?;
    let group = group_spec.build()?;
    let subgroup = config.subgroup.clone().unwrap_or_else(|| vec![0]);
    if !group.is_subgroup(&subgroup) {
        return Err(Error::NotASubgroup(format!("{subgroup:?}")));
    }
    let multiplier = match &config.multiplier {
        Some(spec) => {
            let m = Multiplier::new(group.order(), spec.root_order, spec.table.clone())?;
            let report = validate_multiplier(&group, &m)?;
            if !report.valid() {
                return Err(Error::InvalidMultiplier(format!(
                    "normalization violations at {:?}, cocycle violations at {:?}",
                    report.normalization_violations,
                    report.cocycle_violations.iter().take(5).collect::<Vec<_>>()
                )));
            }
            Some(m)
        }
        None => None,
    };
    let rep = config
        .representation
        .as_ref()
        .map(|spec| rep_from_spec(spec, &group, multiplier))
        .transpose()?;
    let instrument = config
        .instrument
        .as_ref()
        .map(|spec| {
            let outcomes = coset_space(&group, &subgroup)?;
            instrument_from_spec(spec, &outcomes)
        })
        .transpose()?;
    Ok(ResolvedInputs {
        fixture: None,
        group,
        rep,
        subgroup,
        instrument,
    })
}

fn require_rep(inputs: &ResolvedInputs) -> Result<&Representation> {
    inputs
        .rep
        .as_ref()
        .ok_or_else(|| Error::Config("this task needs a representation".into()))
}

fn system_of(inputs: &ResolvedInputs, tol: f64) -> Result<CovariantSystem> {
    let rep = require_rep(inputs)?;
    CovariantSystem::new(inputs.group.clone(), rep.clone(), inputs.subgroup.clone(), tol)
}

fn resolve_b(
    config: &JobConfig,
    system: &CovariantSystem,
    seed: u64,
    tol: f64,
) -> Result<IntertwinerB> {
    if let Some(value) = &config.b_matrix {
        return Ok(IntertwinerB::new(matrix_from_json(value)?));
    }
    match config.b_kind.as_deref() {
        None | Some("lueders") => Ok(system.canonical_b(CanonicalB::Lueders)),
        Some("uniform") => Ok(system.canonical_b(CanonicalB::Uniform)),
        Some("random") => {
            let basis = system.admissible_b_basis(tol)?;
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            Ok(system.random_admissible_b(&basis, &mut rng))
        }
        Some(other) => Err(Error::Config(format!("unknown b_kind `{other}`"))),
    }
}

fn resolve_instrument(
    config: &JobConfig,
    inputs: &ResolvedInputs,
    seed: u64,
    tol: f64,
) -> Result<Instrument> {
    if let Some(inst) = &inputs.instrument {
        return Ok(inst.clone());
    }
    let system = system_of(inputs, tol)?;
    let b = resolve_b(config, &system, seed, tol)?;
    system.instrument_from_b(&b, tol.max(1e-9))
}

/// Runs one job and assembles its report. The process exit status of the
/// CLI is 0 exactly when `report.passed` holds.
pub fn run(config: &JobConfig) -> Result<Report> {
    let tol = config.tolerance.unwrap_or(crate::numkernel::DEFAULT_TOL);
    let seed = config.seed.unwrap_or(0);
    let task = config
        .task
        .ok_or_else(|| Error::Config("field `task` is required".into()))?;
    let inputs = resolve_inputs(config, tol)?;
    let mut report = Report::new(task, inputs.fixture.clone(), seed, tol);
    report
        .artifacts
        .insert("group_order".into(), json!(inputs.group.order()));

    match task {
        Task::Validate => {
            report.push(Check::flag(
                "group_axioms",
                true,
                format!("order {}", inputs.group.order()),
            ));
            report.push(Check::flag(
                "subgroup",
                inputs.group.is_subgroup(&inputs.subgroup),
                format!("{:?}", inputs.subgroup),
            ));
            if let Some(rep) = &inputs.rep {
                let rr = validate_rep(&inputs.group, rep, tol)?;
                report.push(Check::residual("rep_identity", rr.identity_residual, tol));
                report.push(Check::residual(
                    "rep_unitarity",
                    rr.max_unitarity_residual,
                    tol,
                ));
                report.push(Check::residual(
                    "rep_homomorphism",
                    rr.max_homomorphism_residual,
                    tol,
                ));
            }
            if let Some(inst) = &inputs.instrument {
                let ir = validate_instrument(inst, tol);
                report.push(Check::residual(
                    "instrument_positivity",
                    (-ir.min_eigenvalue()).max(0.0),
                    tol,
                ));
                report.push(Check::residual(
                    "instrument_trace_preservation",
                    ir.trace_preservation_residual,
                    tol,
                ));
                if let Some(rep) = &inputs.rep {
                    let cov = check_covariance(&inputs.group, inst, rep, tol)?;
                    report.push(Check::residual("instrument_covariance", cov.max_residual, tol));
                }
                let ratio = norm_bound_probe(inst, 200, seed);
                report.push(Check::residual(
                    "norm_bound",
                    (ratio - 2.0).max(0.0),
                    tol,
                ));
                report.artifacts.insert("norm_probe_max_ratio".into(), json!(ratio));
            }
        }
        Task::EnumerateB => {
            let system = system_of(&inputs, tol)?;
            let basis = system.admissible_b_basis(tol)?;
            // orthonormality of the emitted basis
            let mut gram_res = 0.0f64;
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let ip = crate::numkernel::hs_inner(a, b);
                    let target = if i == j { 1.0 } else { 0.0 };
                    gram_res = gram_res.max((ip - num_complex::Complex64::new(target, 0.0)).norm());
                }
            }
            report.push(Check::residual("basis_orthonormality", gram_res, tol * 10.0));
            report
                .artifacts
                .insert("admissible_dimension".into(), json!(basis.len()));
            report.artifacts.insert(
                "basis".into(),
                Value::Array(basis.iter().map(matrix_to_json).collect()),
            );
            report.artifacts.insert(
                "sigma".into(),
                json!({
                    "kind": "regular_of_subgroup_times_identity",
                    "subgroup": inputs.subgroup,
                    "multiplicity": system.dim() * system.dim(),
                    "dim": system.dim_v(),
                }),
            );
        }
        Task::Build => {
            let system = system_of(&inputs, tol)?;
            let b = resolve_b(config, &system, seed, tol)?;
            let breport = system.validate_b(&b);
            report.push(Check::residual("b_norm", breport.norm_residual, tol));
            report.push(Check::residual(
                "b_intertwining",
                breport.intertwining_residual,
                tol,
            ));
            let inst = system.instrument_from_b(&b, tol.max(1e-9))?;
            let ir = validate_instrument(&inst, tol);
            report.push(Check::residual(
                "instrument_positivity",
                (-ir.min_eigenvalue()).max(0.0),
                tol,
            ));
            report.push(Check::residual(
                "instrument_trace_preservation",
                ir.trace_preservation_residual,
                tol,
            ));
            let cov = check_covariance(&inputs.group, &inst, system.rep(), tol)?;
            report.push(Check::residual("instrument_covariance", cov.max_residual, tol));
            report.artifacts.insert(
                "b".into(),
                json!({
                    "sigma": {
                        "kind": "regular_of_subgroup_times_identity",
                        "subgroup": inputs.subgroup,
                        "multiplicity": system.dim() * system.dim(),
                        "dim": system.dim_v(),
                    },
                    "matrix": matrix_to_json(&b.matrix),
                }),
            );
            report
                .artifacts
                .insert("instrument".into(), instrument_to_json(&inst));
        }
        Task::Dilate => {
            let rep = require_rep(&inputs)?;
            let inst = resolve_instrument(config, &inputs, seed, tol)?;
            let system = build_dilation(&inputs.group, rep, &inst, tol)?;
            let dr = verify_dilation(&inputs.group, rep, &inst, &system, tol)?;
            report.push(Check::residual("pvm", dr.pvm_residual, tol));
            report.push(Check::residual("pvm_covariance", dr.pvm_covariance_residual, tol));
            report.push(Check::residual("intertwining", dr.intertwining_residual, tol));
            report.push(Check::residual("isometry", dr.isometry_residual, tol));
            report.push(Check::residual(
                "reconstruction",
                dr.reconstruction_residual,
                tol,
            ));
            report.push(Check::flag(
                "minimality",
                dr.minimal(),
                format!("rank {} of {}", dr.minimality_rank, dr.dim_k * dr.dim_h),
            ));
            report.artifacts.insert("dim_k".into(), json!(system.dim_k));
            report.artifacts.insert(
                "dilation".into(),
                json!({
                    "dim_k": system.dim_k,
                    "w": matrix_to_json(&system.w),
                    "projections": system.projections.iter().map(matrix_to_json).collect::<Vec<_>>(),
                    "d_rep": system.d_rep.matrices().iter().map(matrix_to_json).collect::<Vec<_>>(),
                }),
            );
            // uniqueness spot check against an independently rebuilt copy
            let second = build_dilation(&inputs.group, rep, &inst, tol)?;
            let iso = dilation_isomorphism(&inputs.group, rep, &inst, &system, &second, tol)?;
            report.push(Check::residual(
                "uniqueness_isomorphism",
                iso.factorization_residual
                    .max(iso.d_residual)
                    .max(iso.p_residual)
                    .max(iso.w_residual),
                tol.max(1e-12) * 100.0,
            ));
        }
        Task::Decompose => {
            let system = system_of(&inputs, tol)?;
            let inst = resolve_instrument(config, &inputs, seed, tol)?;
            let phi = system.phi_from_instrument(&inst, tol)?;
            let pr = phi.validate(&system);
            report.push(Check::residual(
                "phi_positivity",
                (-pr.min_choi_eigenvalue).max(0.0),
                tol,
            ));
            report.push(Check::residual(
                "phi_normalization",
                pr.normalization_residual,
                tol,
            ));
            report.push(Check::residual("phi_covariance", pr.covariance_residual, tol));
            let b = system.b_from_phi(&phi, seed, tol)?;
            let breport = system.validate_b(&b);
            report.push(Check::residual("b_norm", breport.norm_residual, tol * 100.0));
            report.push(Check::residual(
                "b_intertwining",
                breport.intertwining_residual,
                tol * 100.0,
            ));
            // both round trips close
            let phi_back = system.phi_from_b(&b, tol.max(1e-9) * 100.0)?;
            report.push(Check::residual(
                "phi_round_trip",
                max_abs(&(&phi_back.choi - &phi.choi)),
                tol * 100.0,
            ));
            let inst_back = system.instrument_from_phi(&phi, tol)?;
            let mut inst_res = 0.0f64;
            for x in 0..inst.num_outcomes() {
                inst_res = inst_res.max(max_abs(&(inst.choi(x) - inst_back.choi(x))));
            }
            report.push(Check::residual("instrument_round_trip", inst_res, tol * 100.0));
            report
                .artifacts
                .insert("phi_choi".into(), matrix_to_json(&phi.choi));
            report
                .artifacts
                .insert("b_matrix".into(), matrix_to_json(&b.matrix));
        }
        Task::Model => {
            let rep = require_rep(&inputs)?;
            let inst = resolve_instrument(config, &inputs, seed, tol)?;
            let dil = build_dilation(&inputs.group, rep, &inst, tol)?;
            let model = measurement_model(&inputs.group, rep, &inst, &dil, tol)?;
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut max_dev = 0.0f64;
            for _ in 0..4 {
                let rho = crate::numkernel::random_density(inst.dim(), &mut rng);
                let exact = instrument_statistics(&inst, &rho, tol)?;
                let pointer = model.pointer_statistics(&rho, tol)?;
                for (p, q) in exact.probabilities.iter().zip(pointer.iter()) {
                    max_dev = max_dev.max((p - q).abs());
                }
            }
            report.push(Check::residual("pointer_statistics", max_dev, tol));
            let mut model_json = json!({
                "dim_apparatus": model.dim_apparatus,
                "dim_system": model.dim_system,
                "dim_k": dil.dim_k,
                "initial": (0..model.initial.len())
                    .map(|i| json!([model.initial[i].re, model.initial[i].im]))
                    .collect::<Vec<_>>(),
                "pointer": model.pointer.iter().map(matrix_to_json).collect::<Vec<_>>(),
            });
            // the coupling can be large; emit it only at report-friendly sizes
            if model.coupling.nrows() <= 256 {
                model_json["coupling"] = matrix_to_json(&model.coupling);
            } else {
                model_json["coupling_omitted"] =
                    json!(format!("{0}x{0} matrix", model.coupling.nrows()));
            }
            report.artifacts.insert("model".into(), model_json);
        }
        Task::Simulate => {
            let inst = resolve_instrument(config, &inputs, seed, tol)?;
            let d = inst.dim();
            let rho = match &config.state {
                Some(value) => matrix_from_json(value)?,
                None => identity(d).unscale(d as f64),
            };
            let shots = config.shots.unwrap_or(100_000);
            let record = simulate(&inst, &rho, shots, seed, tol)?;
            // counts must sit within 4σ of the exact distribution
            let mut worst = 0.0f64;
            for (x, &p) in record.probabilities.iter().enumerate() {
                let mean = shots as f64 * p.max(0.0);
                let sigma = (shots as f64 * p.max(0.0) * (1.0 - p.max(0.0))).sqrt();
                let dev = (record.counts[x] as f64 - mean).abs();
                let allowed = 4.0 * sigma;
                if dev > allowed {
                    worst = worst.max(if allowed > 0.0 { dev / allowed } else { f64::INFINITY });
                }
            }
            report.push(Check::flag(
                "counts_within_4_sigma",
                worst == 0.0,
                format!("worst deviation ratio {worst:.3}"),
            ));
            let labels: Vec<usize> = (0..inst.num_outcomes())
                .map(|x| inst.outcomes().representative(x))
                .collect();
            report.artifacts.insert(
                "samples".into(),
                json!({
                    "seed": record.seed,
                    "shots": record.shots,
                    "outcomes": labels,
                    "counts": record.counts,
                    "probabilities": record.probabilities,
                }),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_names_round_trip() {
        for name in [
            "validate",
            "enumerate-b",
            "build",
            "dilate",
            "decompose",
            "model",
            "simulate",
        ] {
            assert_eq!(Task::parse(name).unwrap().name(), name);
        }
        assert!(Task::parse("nope").is_err());
    }

    #[test]
    fn malformed_cayley_table_is_located() {
        let cfg = JobConfig {
            task: Some(Task::Validate),
            group: Some(GroupSpec::Cayley {
                cayley_table: vec![vec![0, 1], vec![1, 1]],
            }),
            ..Default::default()
        };
        let err = run(&cfg).unwrap_err();
        assert!(matches!(err, Error::NotAGroup(_)), "{err}");
    }

    #[test]
    fn parse_error_carries_location() {
        let err = JobConfig::from_json_str("{ \"task\": \"validate\", }").unwrap_err();
        match err {
            Error::Json { line, column, .. } => {
                assert!(line >= 1 && column >= 1);
            }
            other => panic!("expected located JSON error, got {other}"),
        }
    }

    #[test]
    fn unknown_field_is_rejected() {
        let err = JobConfig::from_json_str("{ \"task\": \"validate\", \"tasks\": 3 }").unwrap_err();
        assert!(matches!(err, Error::Json { .. }));
    }

    #[test]
    fn validate_fixture_passes() {
        let cfg = JobConfig {
            task: Some(Task::Validate),
            fixture: Some("pauli-lueders".into()),
            ..Default::default()
        };
        let report = run(&cfg).unwrap();
        assert!(report.passed, "{}", report.to_json_string());
        assert_eq!(report.schema, REPORT_SCHEMA);
    }

    #[test]
    fn explicit_group_rep_round_trip() {
        // Z2 with the sign character, by generators
        let cfg_json = serde_json::json!({
            "task": "validate",
            "group": {"family": "cyclic", "n": 2},
            "representation": {"generators": {"1": [[[-1.0, 0.0]]]}},
        });
        let cfg: JobConfig = serde_json::from_value(cfg_json).unwrap();
        let report = run(&cfg).unwrap();
        assert!(report.passed, "{}", report.to_json_string());
    }

    #[test]
    fn generators_with_multiplier_are_rejected() {
        // projective phases of words are ambiguous; only full tables work
        let cfg_json = serde_json::json!({
            "task": "validate",
            "group": {"family": "product_of_cyclics", "ns": [2, 2]},
            "multiplier": {"root_order": 2, "table": [
                [0,0,0,0],[0,0,1,1],[0,0,0,0],[0,0,1,1]
            ]},
            "representation": {"generators": {"1": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[-1.0,0.0]]]}},
        });
        let cfg: JobConfig = serde_json::from_value(cfg_json).unwrap();
        let err = run(&cfg).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }

    #[test]
    fn generator_completion_rejects_inconsistency() {
        // claiming U(1) = [2] on Z2 cannot close: U(0) = U(1)U(1) = [4] ≠ I
        let cfg_json = serde_json::json!({
            "task": "validate",
            "group": {"family": "cyclic", "n": 2},
            "representation": {"generators": {"1": [[[2.0, 0.0]]]}},
        });
        let cfg: JobConfig = serde_json::from_value(cfg_json).unwrap();
        assert!(matches!(run(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn simulate_report_is_reproducible() {
        let cfg = JobConfig {
            task: Some(Task::Simulate),
            fixture: Some("pauli-uniform".into()),
            seed: Some(7),
            shots: Some(10_000),
            ..Default::default()
        };
        let mut a = run(&cfg).unwrap();
        let mut b = run(&cfg).unwrap();
        a.timestamp = 0;
        b.timestamp = 0;
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert!(a.passed);
    }

    #[test]
    fn dilate_task_reports_dim_k() {
        let cfg = JobConfig {
            task: Some(Task::Dilate),
            fixture: Some("pauli-lueders".into()),
            ..Default::default()
        };
        let report = run(&cfg).unwrap();
        assert!(report.passed, "{}", report.to_json_string());
        assert_eq!(report.artifacts["dim_k"], json!(4));
    }
}
