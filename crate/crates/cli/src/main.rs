//! boxspace: analyze weighted box spaces from the command line.
//!
//! Exit codes: 0 on success (report or certificate produced), 2 on a clean
//! "no certificate found", 1 on any error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use boxspace::{
    build_label, extract_weights, folner_search, localization_ratio, verify_witness_inequality,
    ww_scan, KernelKind, Point, PointSet, PropagationOperator, Relation, ScanMode, SearchOutcome,
};
use boxspace_cli::report::{params, Provenance, Report, Verdict};
use boxspace_cli::{gen_cycles, gen_margulis, gen_random_regular, gen_torus, SpaceFile};

#[derive(Parser)]
#[command(
    name = "boxspace",
    version,
    about = "Weighted box space analysis toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Heuristic,
}

impl From<ModeArg> for ScanMode {
    fn from(m: ModeArg) -> ScanMode {
        match m {
            ModeArg::Exact => ScanMode::Exact,
            ModeArg::Heuristic => ScanMode::Heuristic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Tent,
    Heat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Ball,
    Heat,
}

#[derive(Args)]
struct CommonArgs {
    /// Input space file.
    space: PathBuf,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Convergence tolerance for spectral norms.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Cap on ball size for exhaustive enumeration.
    #[arg(long, default_value_t = 22)]
    cap: usize,
    /// Subset scan mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a space file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Decompose the relation into partial bijection classes.
    Label {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Spectral norms of the indicator operator of the relation.
    Norms {
        #[command(flatten)]
        common: CommonArgs,
        /// Analyze the k-th power of the indicator operator.
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Operator-norm-localization ratios over bounded balls.
    Onlp {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1)]
        power: u32,
        /// Localization constant to test against.
        #[arg(long, default_value_t = 1.0 / 3.0)]
        c: f64,
        /// Bounding relation is widen(T, f-depth); 0 means the diagonal.
        #[arg(long, default_value_t = 1)]
        f_depth: u32,
    },
    /// Weighted boundary-growth scan over an increasing family of bounds.
    Wwexpander {
        #[command(flatten)]
        common: CommonArgs,
        /// Expansion level to test: ratios must exceed 1 + c.
        #[arg(long, default_value_t = 0.1)]
        c: f64,
        /// Scan widen(T, 1), ..., widen(T, f-depth).
        #[arg(long, default_value_t = 3)]
        f_depth: u32,
    },
    /// Search for a Folner certificate via kernel level sets.
    Folner {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Largest kernel radius to try (sweep starts at 1).
        #[arg(long, default_value_t = 12)]
        radius: u32,
        #[arg(long, value_enum, default_value_t = KernelArg::Tent)]
        kernel: KernelArg,
    },
    /// Build and grade property-A vector families.
    Propa {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = FamilyArg::Ball)]
        family: FamilyArg,
        /// Ball radius (ball family) or walk steps (heat family).
        #[arg(long, default_value_t = 3)]
        radius: u32,
        /// Require the family variation to stay below this bound.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Chain localization ratios, witness extraction, and verification.
    Pipeline {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        c: f64,
        /// Depth of the first bounding relation (0 means the diagonal);
        /// later rounds widen further.
        #[arg(long, default_value_t = 0)]
        f_depth: u32,
        /// Extraction rounds per component.
        #[arg(long, default_value_t = 3)]
        rounds: u32,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Cycle components of the given sizes.
    Cycles {
        sizes: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Square torus components of the given sides.
    Torus {
        sides: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Margulis expander components of the given sides.
    Margulis {
        sides: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random regular components of the given sizes.
    RandomRegular {
        sizes: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// Seed for the pairing model (mandatory determinism).
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { kind } => run_gen(kind),
        Command::Label { common } => run_label(common),
        Command::Norms { common, power } => run_norms(common, power),
        Command::Onlp {
            common,
            power,
            c,
            f_depth,
        } => run_onlp(common, power, c, f_depth),
        Command::Wwexpander { common, c, f_depth } => run_wwexpander(common, c, f_depth),
        Command::Folner {
            common,
            eps,
            radius,
            kernel,
        } => run_folner(common, eps, radius, kernel),
        Command::Propa {
            common,
            family,
            radius,
            eps,
        } => run_propa(common, family, radius, eps),
        Command::Pipeline {
            common,
            power,
            c,
            f_depth,
            rounds,
        } => run_pipeline(common, power, c, f_depth, rounds),
    }
}

fn load(path: &PathBuf) -> Result<SpaceFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SpaceFile::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn indicator_power(file: &SpaceFile, power: u32) -> Result<PropagationOperator> {
    let base = PropagationOperator::indicator(&file.relation);
    let mut op = base.clone();
    for _ in 1..power.max(1) {
        op = op.multiply(&base)?;
    }
    Ok(op)
}

/// `widen(t, depth)` with the convention that depth 0 is the diagonal.
fn bounding_relation(t: &Relation, depth: u32) -> Result<Relation> {
    if depth == 0 {
        Ok(Relation::diagonal(t.space().clone()))
    } else {
        Ok(t.widen(depth)?)
    }
}

fn provenance(common: &CommonArgs, seed: Option<u64>) -> Provenance {
    Provenance {
        mode: match common.mode {
            ModeArg::Exact => "exact".into(),
            ModeArg::Heuristic => "heuristic".into(),
        },
        cap: common.cap,
        tolerance: common.tol,
        seed,
    }
}

fn run_gen(kind: GenKind) -> Result<ExitCode> {
    let (file, out, header) = match kind {
        GenKind::Cycles { sizes, out } => {
            let f = gen_cycles(&sizes)?;
            (f, out, format!("# cycles {sizes:?}"))
        }
        GenKind::Torus { sides, out } => {
            let f = gen_torus(&sides)?;
            (f, out, format!("# torus {sides:?}"))
        }
        GenKind::Margulis { sides, out } => {
            let f = gen_margulis(&sides)?;
            (f, out, format!("# margulis {sides:?}"))
        }
        GenKind::RandomRegular {
            sizes,
            degree,
            seed,
            out,
        } => {
            let f = gen_random_regular(degree, &sizes, seed)?;
            (
                f,
                out,
                format!("# random-regular degree={degree} seed={seed} {sizes:?}"),
            )
        }
    };
    let content = format!("{header}\n{}", file.serialize());
    emit(&out, &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct LabelResults {
    max_degree: u32,
    class_count: usize,
    non_diagonal_classes: usize,
    class_sizes: Vec<usize>,
    verified: bool,
}

fn run_label(common: CommonArgs) -> Result<ExitCode> {
    let file = load(&common.space)?;
    let base = file.relation.with_diagonal();
    let label = build_label(&base)?;
    let results = LabelResults {
        max_degree: base.max_degree(),
        class_count: label.class_count(),
        non_diagonal_classes: label.non_diagonal_count(),
        class_sizes: label.classes().iter().map(|c| c.pair_count()).collect(),
        verified: boxspace::verify_label(&label),
    };
    let report = Report::new(
        "label",
        Some(common.space.display().to_string()),
        params(&[]),
        provenance(&common, None),
        results,
        None,
    );
    emit(&common.out, &report.to_json())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ComponentNorm {
    component: u32,
    dim: usize,
    norm: f64,
}

#[derive(Serialize)]
struct NormsResults {
    power: u32,
    operator_norm: f64,
    propagation_pairs: usize,
    per_component: Vec<ComponentNorm>,
}

fn run_norms(common: CommonArgs, power: u32) -> Result<ExitCode> {
    let file = load(&common.space)?;
    let op = indicator_power(&file, power)?;
    let norms = op.operator_norm(common.tol)?;
    let results = NormsResults {
        power,
        operator_norm: norms.iter().copied().fold(0.0, f64::max),
        propagation_pairs: op.propagation().pair_count(),
        per_component: norms
            .iter()
            .enumerate()
            .map(|(c, &n)| ComponentNorm {
                component: c as u32,
                dim: op.component_dim(c as u32),
                norm: n,
            })
            .collect(),
    };
    let report = Report::new(
        "norms",
        Some(common.space.display().to_string()),
        params(&[("power", json!(power))]),
        provenance(&common, None),
        results,
        None,
    );
    emit(&common.out, &report.to_json())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CenterRatio {
    component: u32,
    index: u32,
    ratio: f64,
}

#[derive(Serialize)]
struct OnlpResults {
    c: f64,
    f_depth: u32,
    operator_norm: f64,
    best_ratio: f64,
    best_center: CenterRatio,
    holds_at_c: bool,
    per_center: Vec<CenterRatio>,
}

fn run_onlp(common: CommonArgs, power: u32, c: f64, f_depth: u32) -> Result<ExitCode> {
    let file = load(&common.space)?;
    let op = indicator_power(&file, power)?;
    let f = bounding_relation(&file.relation, f_depth)?;
    let rep = localization_ratio(&op, &f, common.tol)?;
    let holds = rep.holds_at(c);
    let results = OnlpResults {
        c,
        f_depth,
        operator_norm: rep.operator_norm,
        best_ratio: rep.best_ratio,
        best_center: CenterRatio {
            component: rep.best_ball_center.component,
            index: rep.best_ball_center.index,
            ratio: rep.best_ratio,
        },
        holds_at_c: holds,
        per_center: rep
            .per_center_ratios
            .iter()
            .map(|&(p, r)| CenterRatio {
                component: p.component,
                index: p.index,
                ratio: r,
            })
            .collect(),
    };
    let report = Report::new(
        "onlp",
        Some(common.space.display().to_string()),
        params(&[
            ("c", json!(c)),
            ("f_depth", json!(f_depth)),
            ("power", json!(power)),
        ]),
        provenance(&common, None),
        results,
        Some(if holds {
            Verdict::Certified
        } else {
            Verdict::Refuted
        }),
    );
    emit(&common.out, &report.to_json())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ComponentRatioJson {
    component: u32,
    min_ratio: f64,
    argmin: Vec<u32>,
    mode: &'static str,
    diagonal_added: bool,
}

#[derive(Serialize)]
struct WwFReport {
    f_depth: u32,
    tail_min: f64,
    tail_window: usize,
    consistent: bool,
    per_component: Vec<ComponentRatioJson>,
}

#[derive(Serialize)]
struct WwResults {
    c: f64,
    all_consistent: bool,
    reports: Vec<WwFReport>,
}

fn mode_str(mode: ScanMode) -> &'static str {
    match mode {
        ScanMode::Exact => "exact",
        ScanMode::Heuristic => "heuristic",
    }
}

fn run_wwexpander(common: CommonArgs, c: f64, f_depth: u32) -> Result<ExitCode> {
    let file = load(&common.space)?;
    let t = file.relation.with_diagonal();
    let f_seq: Vec<Relation> = (1..=f_depth.max(1))
        .map(|d| t.widen(d))
        .collect::<boxspace::Result<_>>()?;
    let reports = ww_scan(&file.weights, &t, &f_seq, c, common.mode.into(), common.cap)?;
    let all_consistent = reports.iter().all(|r| r.consistent);
    let results = WwResults {
        c,
        all_consistent,
        reports: reports
            .iter()
            .map(|r| WwFReport {
                f_depth: r.f_index as u32 + 1,
                tail_min: r.tail_min,
                tail_window: r.tail_window,
                consistent: r.consistent,
                per_component: r
                    .per_component
                    .iter()
                    .map(|b| ComponentRatioJson {
                        component: b.component,
                        min_ratio: b.min_ratio,
                        argmin: b.argmin.indices().to_vec(),
                        mode: mode_str(b.mode),
                        diagonal_added: b.diagonal_added,
                    })
                    .collect(),
            })
            .collect(),
    };
    // A heuristic tail below the level genuinely refutes (upper bound);
    // a heuristic tail above it is only evidence.
    let verdict = if all_consistent {
        Verdict::EvidenceOnly
    } else {
        Verdict::Refuted
    };
    let report = Report::new(
        "wwexpander",
        Some(common.space.display().to_string()),
        params(&[("c", json!(c)), ("f_depth", json!(f_depth))]),
        provenance(&common, None),
        results,
        Some(verdict),
    );
    emit(&common.out, &report.to_json())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct MassJson {
    component: u32,
    scanned: bool,
    mass_f: f64,
    mass_tf: f64,
    ratio: Option<f64>,
}

#[derive(Serialize)]
struct FolnerFailureJson {
    best_radius: u32,
    best_threshold: f64,
    best_ratio: f64,
}

#[derive(Serialize)]
struct FolnerResults {
    kernel: &'static str,
    eps: f64,
    max_radius: u32,
    success: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reverified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_component: Option<Vec<MassJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<FolnerFailureJson>,
}

fn run_folner(common: CommonArgs, eps: f64, radius: u32, kernel: KernelArg) -> Result<ExitCode> {
    let file = load(&common.space)?;
    let t = file.relation.with_diagonal();
    let kind = match kernel {
        KernelArg::Tent => KernelKind::Tent,
        KernelArg::Heat => KernelKind::Heat,
    };
    let outcome = folner_search(&t, None, eps, &file.weights, kind, 1..=radius.max(1))?;
    let kernel_name = match kernel {
        KernelArg::Tent => "tent",
        KernelArg::Heat => "heat",
    };
    let (results, verdict, code) = match &outcome {
        SearchOutcome::Certificate {
            radius: r,
            certificate,
        } => {
            // Re-check the certificate inequality from scratch.
            let enlarged = t.compose(&certificate.relation)?;
            let reverified = certificate.per_component.iter().all(|m| {
                if !m.scanned {
                    return true;
                }
                let wc = file.weights.component(m.component);
                let mass_f = boxspace::measure_ct(&certificate.relation, wc);
                let mass_tf = boxspace::measure_ct(&enlarged, wc);
                mass_tf < (1.0 + eps) * mass_f
            });
            (
                FolnerResults {
                    kernel: kernel_name,
                    eps,
                    max_radius: radius,
                    success: true,
                    radius: Some(*r),
                    threshold: Some(certificate.threshold),
                    certificate_pairs: Some(certificate.relation.pair_count()),
                    reverified: Some(reverified),
                    per_component: Some(
                        certificate
                            .per_component
                            .iter()
                            .map(|m| MassJson {
                                component: m.component,
                                scanned: m.scanned,
                                mass_f: m.mass_f,
                                mass_tf: m.mass_tf,
                                ratio: (m.mass_f > 0.0).then(|| m.mass_tf / m.mass_f),
                            })
                            .collect(),
                    ),
                    failure: None,
                },
                Verdict::Certified,
                ExitCode::SUCCESS,
            )
        }
        SearchOutcome::Failure {
            best_radius,
            failure,
        } => (
            FolnerResults {
                kernel: kernel_name,
                eps,
                max_radius: radius,
                success: false,
                radius: None,
                threshold: None,
                certificate_pairs: None,
                reverified: None,
                per_component: None,
                failure: Some(FolnerFailureJson {
                    best_radius: *best_radius,
                    best_threshold: failure.best_threshold,
                    best_ratio: failure.best_ratio,
                }),
            },
            Verdict::EvidenceOnly,
            ExitCode::from(2),
        ),
    };
    let report = Report::new(
        "folner",
        Some(common.space.display().to_string()),
        params(&[
            ("eps", json!(eps)),
            ("kernel", json!(kernel_name)),
            ("radius", json!(radius)),
        ]),
        provenance(&common, None),
        results,
        Some(verdict),
    );
    emit(&common.out, &report.to_json())?;
    Ok(code)
}

#[derive(Serialize)]
struct FamilyQuality {
    component: u32,
    epsilon: f64,
    support_pairs: usize,
    support_in_widened: bool,
}

#[derive(Serialize)]
struct PropaResults {
    family: &'static str,
    radius: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_required: Option<f64>,
    max_epsilon: f64,
    per_component: Vec<FamilyQuality>,
}

fn run_propa(
    common: CommonArgs,
    family: FamilyArg,
    radius: u32,
    eps: Option<f64>,
) -> Result<ExitCode> {
    let file = load(&common.space)?;
    let t = file.relation.with_diagonal();
    let family_name = match family {
        FamilyArg::Ball => "ball",
        FamilyArg::Heat => "heat",
    };
    let label = match family {
        FamilyArg::Heat => Some(build_label(&t)?),
        FamilyArg::Ball => None,
    };
    let mut per_component = Vec::new();
    let mut max_epsilon: f64 = 0.0;
    let reference = t.widen(radius.max(1))?;
    for c in 0..file.space.component_count() as u32 {
        let fam = match family {
            FamilyArg::Ball => boxspace::ball_average_family(c, &t, radius)?,
            FamilyArg::Heat => {
                boxspace::heat_family(c, label.as_ref().expect("heat label"), radius)?
            }
        };
        let (epsilon, support) = boxspace::certificate_quality(&fam, &t);
        max_epsilon = max_epsilon.max(epsilon);
        per_component.push(FamilyQuality {
            component: c,
            epsilon,
            support_pairs: support.pair_count(),
            support_in_widened: support.is_subset_of(&reference),
        });
    }
    let achieved = eps.map(|bound| max_epsilon < bound);
    let results = PropaResults {
        family: family_name,
        radius,
        eps_required: eps,
        max_epsilon,
        per_component,
    };
    let verdict = achieved.map(|ok| {
        if ok {
            Verdict::Certified
        } else {
            Verdict::EvidenceOnly
        }
    });
    let report = Report::new(
        "propa",
        Some(common.space.display().to_string()),
        params(&[
            (
                "eps",
                eps.map(|e| json!(e)).unwrap_or(serde_json::Value::Null),
            ),
            ("family", json!(family_name)),
            ("radius", json!(radius)),
        ]),
        provenance(&common, None),
        results,
        verdict,
    );
    emit(&common.out, &report.to_json())?;
    Ok(match achieved {
        Some(false) => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    })
}

#[derive(Serialize)]
struct WitnessJson {
    eigenvalue: f64,
    support_size: usize,
    support: Vec<u32>,
}

#[derive(Serialize)]
struct CheckJson {
    min_ratio: Option<f64>,
    threshold: f64,
    passed: bool,
    mode: &'static str,
    argmin: Vec<u32>,
}

#[derive(Serialize)]
struct RoundJson {
    round: u32,
    f_depth: u32,
    restricted_norm: f64,
    best_ratio: f64,
    triggered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<CheckJson>,
}

#[derive(Serialize)]
struct ComponentPipeline {
    component: u32,
    rounds: Vec<RoundJson>,
}

#[derive(Serialize)]
struct PipelineResults {
    c: f64,
    rounds_requested: u32,
    any_round_triggered: bool,
    all_checks_passed: bool,
    per_component: Vec<ComponentPipeline>,
}

/// Best localization ratio of one component: max over ball centers of
/// `||a P_{F[x]}|| / ||a_c||`, using the component-local norm.
fn component_best_ratio(
    a: &PropagationOperator,
    f: &Relation,
    component: u32,
    norm: f64,
    tol: f64,
) -> Result<f64> {
    let size = a.space().size(component)?;
    let mut best: f64 = 0.0;
    for x in 0..size {
        let ball = f.ball_of(Point::new(component, x));
        let compressed = a.compressed_norm(&ball, tol)?;
        best = best.max(compressed / norm);
    }
    Ok(best)
}

fn run_pipeline(
    common: CommonArgs,
    power: u32,
    c: f64,
    f_depth: u32,
    rounds: u32,
) -> Result<ExitCode> {
    let file = load(&common.space)?;
    let op = indicator_power(&file, power)?;
    let mode: ScanMode = common.mode.into();
    let mut per_component = Vec::new();
    let mut any_triggered = false;
    let mut all_passed = true;
    for comp in 0..file.space.component_count() as u32 {
        let mut forbidden = PointSet::empty(comp);
        let mut round_reports = Vec::new();
        for round in 1..=rounds {
            let restricted = op.zero_columns(&forbidden);
            let norm = restricted.operator_norm(common.tol)?[comp as usize];
            if norm <= 0.0 {
                break;
            }
            let f = bounding_relation(&file.relation.with_diagonal(), f_depth + round - 1)?;
            let best_ratio = component_best_ratio(&restricted, &f, comp, norm, common.tol)?;
            let triggered = best_ratio < c;
            if !triggered {
                round_reports.push(RoundJson {
                    round,
                    f_depth: f_depth + round - 1,
                    restricted_norm: norm,
                    best_ratio,
                    triggered,
                    witness: None,
                    check: None,
                });
                break;
            }
            any_triggered = true;
            let witness = extract_weights(&op, comp, &forbidden, common.tol)?;
            let check = verify_witness_inequality(&witness, &op, &f, c, mode, common.cap)?;
            all_passed &= check.passed;
            forbidden = forbidden.union(&witness.support)?;
            round_reports.push(RoundJson {
                round,
                f_depth: f_depth + round - 1,
                restricted_norm: norm,
                best_ratio,
                triggered,
                witness: Some(WitnessJson {
                    eigenvalue: witness.source_eigenvalue,
                    support_size: witness.support.len(),
                    support: witness.support.indices().to_vec(),
                }),
                check: Some(CheckJson {
                    min_ratio: check.min_ratio.is_finite().then_some(check.min_ratio),
                    threshold: check.threshold,
                    passed: check.passed,
                    mode: mode_str(check.mode),
                    argmin: check.argmin.indices().to_vec(),
                }),
            });
            if forbidden.len() as u32 == file.space.size(comp)? {
                break;
            }
        }
        per_component.push(ComponentPipeline {
            component: comp,
            rounds: round_reports,
        });
    }
    let verdict = if !any_triggered {
        Verdict::EvidenceOnly
    } else if !all_passed {
        Verdict::Refuted
    } else if mode == ScanMode::Exact {
        Verdict::Certified
    } else {
        Verdict::EvidenceOnly
    };
    let results = PipelineResults {
        c,
        rounds_requested: rounds,
        any_round_triggered: any_triggered,
        all_checks_passed: all_passed,
        per_component,
    };
    let report = Report::new(
        "pipeline",
        Some(common.space.display().to_string()),
        params(&[
            ("c", json!(c)),
            ("f_depth", json!(f_depth)),
            ("power", json!(power)),
            ("rounds", json!(rounds)),
        ]),
        provenance(&common, None),
        results,
        Some(verdict),
    );
    emit(&common.out, &report.to_json())?;
    Ok(ExitCode::SUCCESS)
}
