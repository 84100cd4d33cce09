//! Config-driven experiment dispatch: builds fixtures, runs the library
//! operations, writes the JSON report plus CSV tables, and maps verdicts to
//! exit codes (0 pass/evidence, 2 fail-with-witness, 3 inconclusive,
//! 1 usage/IO error — the latter raised as [`CliError`]).

use std::path::{Path, PathBuf};

use modmet_core::axioms::check_modular_axioms;
use modmet_core::compactness::{cauchy_classification, compactness_verdict, SequenceTrace};
use modmet_core::fuzzy::{fuzzy_ball, fuzzy_refinement};
use modmet_core::gauge::{d0_matrix, d0_phi_matrix, d1_phi_matrix, dstar_matrix, Bracket};
use modmet_core::modular::{LambdaGrid, ModularFamily};
use modmet_core::orlicz::kr::{kr_compactness, KrVerdict};
use modmet_core::orlicz::{induced_modular, DiscreteMeasureSpace, FunctionFamily, Integrand, Partition};
use modmet_core::topology::{
    composition_check, delta2_diagnostic, entourage, metrize_uniformity, refinement_compare,
    RefinementDirection,
};
use modmet_core::{DistanceMatrix, PointSpace, Verdict};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::{
    BracketConfig, ExperimentConfig, ExperimentKind, FamilyConfig, GridConfig, IntegrandConfig,
    ModularConfig, OmegaConfig, SequenceConfig, SpaceSource,
};
use crate::{fixtures, io, CliError};

pub struct RunOptions {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub experiment: Option<String>,
    pub quiet: bool,
}

struct Outcome {
    exit: i32,
    verdict: &'static str,
    report: Value,
}

fn verdict_outcome(v: Verdict) -> (i32, &'static str) {
    match v {
        Verdict::Pass => (0, "pass"),
        Verdict::Fail => (2, "fail"),
        Verdict::Inconclusive => (3, "inconclusive"),
    }
}

pub fn run(opts: &RunOptions) -> Result<i32, CliError> {
    let mut cfg = ExperimentConfig::from_path(&opts.config)?;
    if let Some(name) = &opts.experiment {
        cfg.experiment = ExperimentKind::parse(name)
            .ok_or_else(|| CliError::Config(format!("unknown experiment {name:?}")))?;
    }
    let seed = opts.seed.unwrap_or(cfg.seed);
    let out = opts
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("modmet_out"));
    std::fs::create_dir_all(&out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = cfg.experiment;
    let outcome = match kind {
        ExperimentKind::Axioms => axioms(&cfg, &mut rng, &out)?,
        ExperimentKind::Gauges => gauges(&cfg, &mut rng, &out)?,
        ExperimentKind::TopologyCompare => topology_compare(&cfg, &mut rng, &out)?,
        ExperimentKind::Delta2 => delta2(&cfg, &mut rng, &out)?,
        ExperimentKind::Cauchy => cauchy(&cfg, &mut rng, &out)?,
        ExperimentKind::Nets => nets(&cfg, &mut rng, &out)?,
        ExperimentKind::Kr => kr(&cfg, &mut rng, &out)?,
        ExperimentKind::Fuzzy => fuzzy(&cfg, &mut rng, &out)?,
        ExperimentKind::Adequacy => adequacy(&cfg, &mut rng, &out)?,
    };

    let report = json!({
        "experiment": kind.name(),
        "seed": seed,
        "verdict": outcome.verdict,
        "exit_code": outcome.exit,
        "data": outcome.report,
    });
    io::write_json(&report, &out.join("report.json"))?;
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    io::write_json(
        &json!({"timestamp_unix": timestamp, "tool": format!("modmet {}", env!("CARGO_PKG_VERSION"))}),
        &out.join("meta.json"),
    )?;
    if !opts.quiet {
        println!(
            "{}: {} (exit {}); report at {}",
            kind.name(),
            outcome.verdict,
            outcome.exit,
            out.join("report.json").display()
        );
    }
    Ok(outcome.exit)
}

// ---------------------------------------------------------------- builders

fn build_space(src: &SpaceSource, rng: &mut ChaCha8Rng) -> Result<PointSpace, CliError> {
    match src {
        SpaceSource::Path { path } => io::load_space(path),
        SpaceSource::Random { n, scale } => fixtures::random_metric_space(rng, *n, *scale),
        SpaceSource::Hexagon => fixtures::jittered_hexagon(rng),
        SpaceSource::Line { coords } => {
            if coords.is_empty() {
                return Err(CliError::Config("line space needs coordinates".into()));
            }
            Ok(PointSpace::line(coords))
        }
    }
}

fn build_integrand(cfg: &IntegrandConfig) -> Result<Integrand, CliError> {
    match cfg {
        IntegrandConfig::Lp { p } => Integrand::lp(*p).map_err(CliError::Core),
        IntegrandConfig::ExpSquared => Ok(Integrand::exp_squared()),
        IntegrandConfig::VariableExponent { exponents } => {
            Integrand::variable_exponent(exponents.clone()).map_err(CliError::Core)
        }
    }
}

fn build_omega(cfg: &OmegaConfig) -> Result<DiscreteMeasureSpace, CliError> {
    if let Some(path) = &cfg.path {
        return io::load_omega(path);
    }
    if let Some(masses) = &cfg.masses {
        return DiscreteMeasureSpace::from_masses(masses.clone()).map_err(CliError::Core);
    }
    let cells = cfg.cells.unwrap_or(64);
    if cells == 0 {
        return Err(CliError::Config("omega needs at least one cell".into()));
    }
    let mesh = cfg.mesh.unwrap_or(1.0 / cells as f64);
    DiscreteMeasureSpace::grid_1d(cells, mesh).map_err(CliError::Core)
}

fn build_family(cfg: &FamilyConfig, omega: &DiscreteMeasureSpace) -> Result<FunctionFamily, CliError> {
    let family = match cfg {
        FamilyConfig::Path { path } => io::load_family_csv(path)?,
        FamilyConfig::Lipschitz { m } => fixtures::lipschitz_family(*m, omega.len())?,
        FamilyConfig::Rademacher { m } => fixtures::rademacher_family(*m, omega.len())?,
    };
    if family.width() != omega.len() {
        return Err(CliError::Config(format!(
            "family has {} cells but omega has {}",
            family.width(),
            omega.len()
        )));
    }
    Ok(family)
}

fn build_modular(
    cfg: &ModularConfig,
    space_src: &SpaceSource,
    rng: &mut ChaCha8Rng,
) -> Result<ModularFamily, CliError> {
    match cfg {
        ModularConfig::Scaled { p } => {
            let space = build_space(space_src, rng)?;
            ModularFamily::power_scaled(space, *p).map_err(CliError::Core)
        }
        ModularConfig::Saturating { q } => {
            let space = build_space(space_src, rng)?;
            let q = *q;
            if !(q >= 0.0) {
                return Err(CliError::Config(format!("saturating exponent must be >= 0, got {q}")));
            }
            ModularFamily::saturating_metric(space, move |l| l.powf(q)).map_err(CliError::Core)
        }
        ModularConfig::Exponential { times, trajectories } => {
            ModularFamily::exponential_family(times.clone(), trajectories.clone())
                .map_err(CliError::Core)
        }
        ModularConfig::Step => {
            let space = build_space(space_src, rng)?;
            ModularFamily::step(space).map_err(CliError::Core)
        }
        ModularConfig::Orlicz { integrand, omega, family } => {
            let phi = build_integrand(integrand)?;
            let om = build_omega(omega)?;
            let fam = build_family(family, &om)?;
            induced_modular(&phi, &om, fam.rows().to_vec()).map_err(CliError::Core)
        }
    }
}

fn phi_named(name: &str) -> Result<fn(f64) -> f64, CliError> {
    match name {
        "identity" => Ok(|t| t),
        "square" => Ok(|t| t * t),
        other => Err(CliError::Config(format!(
            "unknown phi {other:?}; expected \"identity\" or \"square\""
        ))),
    }
}

fn default_radii(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| lo * (hi / lo).powf(k as f64 / (count - 1) as f64))
        .collect()
}

// ------------------------------------------------------------- experiments

#[derive(Debug, Default, Deserialize)]
struct AxiomsSettings {
    space: Option<SpaceSource>,
    modular: Option<ModularConfig>,
    grid: Option<GridConfig>,
    tol: Option<f64>,
    phi: Option<String>,
}

fn axioms(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, _out: &Path) -> Result<Outcome, CliError> {
    let s: AxiomsSettings = cfg.settings()?;
    let space_src = s.space.unwrap_or_default();
    let modular_cfg = s.modular.unwrap_or_default();
    let w = build_modular(&modular_cfg, &space_src, rng)?;
    let grid = match s.grid {
        Some(g) => g.build()?,
        None => LambdaGrid::geometric(0.1, 10.0, 25).map_err(CliError::Core)?,
    };
    let tol = s.tol.unwrap_or(1e-9);
    let axioms_report = check_modular_axioms(&w, &grid, tol).map_err(CliError::Core)?;
    let phi_report = match &s.phi {
        Some(name) => {
            let phi = phi_named(name)?;
            Some(
                modmet_core::axioms::check_phi_convexity(&w, &phi, &grid, tol)
                    .map_err(CliError::Core)?,
            )
        }
        None => None,
    };
    let verdict = if axioms_report.passed() && phi_report.as_ref().map_or(true, |r| r.passed()) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let (exit, name) = verdict_outcome(verdict);
    Ok(Outcome {
        exit,
        verdict: name,
        report: json!({
            "family": w.name(),
            "claims": w.claims(),
            "axioms": axioms_report,
            "phi_convexity": phi_report,
        }),
    })
}

#[derive(Debug, Default, Deserialize)]
struct GaugesSettings {
    space: Option<SpaceSource>,
    modular: Option<ModularConfig>,
    bracket: Option<BracketConfig>,
    phi: Option<String>,
    lambda_grid: Option<GridConfig>,
}

fn gauges(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, out: &Path) -> Result<Outcome, CliError> {
    let s: GaugesSettings = cfg.settings()?;
    let w = build_modular(&s.modular.unwrap_or_default(), &s.space.unwrap_or_default(), rng)?;
    let br = match s.bracket {
        Some(b) => b.build()?,
        None => Bracket::default(),
    };
    let m0 = d0_matrix(&w, &br).map_err(CliError::Core)?;
    let ms = dstar_matrix(&w, &br).map_err(CliError::Core)?;
    io::write_matrix_csv(&m0, &out.join("d0.csv"))?;
    io::write_matrix_csv(&ms, &out.join("dstar.csv"))?;
    let mut tables = vec!["d0.csv".to_string(), "dstar.csv".to_string()];

    let mut phi_info = Value::Null;
    if let Some(name) = &s.phi {
        let phi = phi_named(name)?;
        let grid = match s.lambda_grid {
            Some(g) => g.build()?,
            None => LambdaGrid::per_decade(1e-6, 1e6, 48).map_err(CliError::Core)?,
        };
        let mp0 = d0_phi_matrix(&w, &phi, &br).map_err(CliError::Core)?;
        let mp1 = d1_phi_matrix(&w, &phi, &grid, &br).map_err(CliError::Core)?;
        io::write_matrix_csv(&mp0, &out.join("d0_phi.csv"))?;
        io::write_matrix_csv(&mp1, &out.join("d1_phi.csv"))?;
        tables.push("d0_phi.csv".to_string());
        tables.push("d1_phi.csv".to_string());
        phi_info = json!({"phi": name, "d0_phi": mp0, "d1_phi": mp1});
    }

    // triangle excesses beyond tolerance indicate engine tolerance too
    // coarse, not a mathematical failure; they are reported, not fatal
    let viol0 = m0.triangle_violations(1e-9);
    let viols = ms.triangle_violations(1e-9);
    Ok(Outcome {
        exit: 0,
        verdict: "pass",
        report: json!({
            "family": w.name(),
            "d0": m0,
            "dstar": ms,
            "d0_triangle_violations": viol0,
            "dstar_triangle_violations": viols,
            "phi_gauges": phi_info,
            "tables": tables,
        }),
    })
}

#[derive(Debug, Default, Deserialize)]
struct TopologySettings {
    space: Option<SpaceSource>,
    modular: Option<ModularConfig>,
    n_max: Option<u32>,
    radii: Option<Vec<f64>>,
    composition_n_max: Option<u32>,
    bracket: Option<BracketConfig>,
}

fn topology_compare(
    cfg: &ExperimentConfig,
    rng: &mut ChaCha8Rng,
    out: &Path,
) -> Result<Outcome, CliError> {
    let s: TopologySettings = cfg.settings()?;
    let space_src = s.space.unwrap_or(SpaceSource::Hexagon);
    let w = build_modular(&s.modular.unwrap_or_default(), &space_src, rng)?;
    let n_max = s.n_max.unwrap_or(24);
    let br = match s.bracket {
        Some(b) => b.build()?,
        None => Bracket::default(),
    };
    let metr = metrize_uniformity(&w, n_max).map_err(CliError::Core)?;
    let d0m = d0_matrix(&w, &br).map_err(CliError::Core)?;
    let radii = s.radii.unwrap_or_else(|| default_radii(0.01, 2.0, 12));
    let verdict = refinement_compare(&metr.chained, &d0m, &radii).map_err(CliError::Core)?;

    let comp_n = s.composition_n_max.unwrap_or(16);
    let mut compositions = Vec::new();
    let mut all_compose = true;
    for n in 1..=comp_n {
        let c = composition_check(&w, n).map_err(CliError::Core)?;
        all_compose = all_compose && c.holds;
        compositions.push(c);
    }

    io::write_matrix_csv(&metr.raw, &out.join("metrize_raw.csv"))?;
    io::write_matrix_csv(&metr.chained, &out.join("metrize_chained.csv"))?;
    io::write_matrix_csv(&d0m, &out.join("d0.csv"))?;
    for n in [1u32, 4, comp_n.max(1)] {
        let e = entourage(&w, n).map_err(CliError::Core)?;
        io::write_entourage_csv(&e, &out.join(format!("entourage_n{n}.csv")))?;
    }

    let mutual = verdict.direction == RefinementDirection::Mutual;
    let pass = mutual && all_compose;
    Ok(Outcome {
        exit: if pass { 0 } else { 2 },
        verdict: if pass { "pass" } else { "fail" },
        report: json!({
            "family": w.name(),
            "n_max": n_max,
            "radii": radii,
            "refinement": verdict,
            "diagonal_floor": metr.diagonal_floor,
            "sentinel": metr.sentinel,
            "compositions_hold": all_compose,
            "compositions": compositions,
            "tables": ["metrize_raw.csv", "metrize_chained.csv", "d0.csv"],
        }),
    })
}

#[derive(Debug, Default, Deserialize)]
struct Delta2Settings {
    /// "scaled" (expects no violation) or "step" (expects a witness);
    /// ignored when explicit space/modular/sequences are supplied.
    fixture: Option<String>,
    count: Option<usize>,
    len: Option<usize>,
    p: Option<f64>,
    lambda_set: Option<Vec<f64>>,
    horizon: Option<usize>,
    tol: Option<f64>,
    space: Option<SpaceSource>,
    modular: Option<ModularConfig>,
    sequences: Option<Vec<SequenceConfig>>,
}

fn delta2(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, _out: &Path) -> Result<Outcome, CliError> {
    let s: Delta2Settings = cfg.settings()?;
    let count = s.count.unwrap_or(20);
    let len = s.len.unwrap_or(26);
    let (w, sequences, mut lambda_set, default_tol) = if let Some(seqs) = &s.sequences {
        let w = build_modular(
            &s.modular.clone().unwrap_or_default(),
            &s.space.clone().unwrap_or_default(),
            rng,
        )?;
        let sequences: Vec<SequenceTrace> = seqs
            .iter()
            .map(|sc| SequenceTrace::with_limit(sc.points.clone(), sc.limit).map_err(CliError::Core))
            .collect::<Result<_, _>>()?;
        (w, sequences, vec![1.0, 0.5], 1e-6)
    } else {
        match s.fixture.as_deref().unwrap_or("scaled") {
            "scaled" => {
                let f = fixtures::delta2_scaled_fixture(rng, count, len, s.p.unwrap_or(1.0))?;
                (f.modular, f.sequences, f.lambda_set, 1e-6)
            }
            "step" => {
                let f = fixtures::delta2_step_fixture(count, len)?;
                (f.modular, f.sequences, f.lambda_set, 1e-9)
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown delta2 fixture {other:?}; expected \"scaled\" or \"step\""
                )))
            }
        }
    };
    if let Some(ls) = s.lambda_set {
        lambda_set = ls;
    }
    let horizon = s
        .horizon
        .unwrap_or_else(|| sequences.iter().map(|t| t.len()).max().unwrap_or(3));
    let tol = s.tol.unwrap_or(default_tol);
    let report = delta2_diagnostic(&w, &sequences, &lambda_set, horizon, tol).map_err(CliError::Core)?;
    let (exit, name) = verdict_outcome(report.verdict);
    Ok(Outcome {
        exit,
        verdict: name,
        report: json!({
            "family": w.name(),
            "sequences": sequences.len(),
            "lambda_set": lambda_set,
            "horizon": horizon,
            "tol": tol,
            "diagnostic": report,
        }),
    })
}

#[derive(Debug, Default, Deserialize)]
struct CauchySettings {
    count: Option<usize>,
    len: Option<usize>,
    p: Option<f64>,
    n_max: Option<u32>,
    bracket: Option<BracketConfig>,
}

fn cauchy(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, _out: &Path) -> Result<Outcome, CliError> {
    let s: CauchySettings = cfg.settings()?;
    let fixture = fixtures::cauchy_fixture(
        rng,
        s.count.unwrap_or(24),
        s.len.unwrap_or(28),
        s.p.unwrap_or(1.0),
    )?;
    let n_max = s.n_max.unwrap_or(3);
    let br = match s.bracket {
        Some(b) => b.build()?,
        None => Bracket::default(),
    };
    let mut rows = Vec::new();
    let mut all_agree = true;
    for (k, trace) in fixture.traces.iter().enumerate() {
        let c = cauchy_classification(trace, &fixture.modular, n_max, &br).map_err(CliError::Core)?;
        all_agree = all_agree && c.agree();
        rows.push(json!({
            "trace": k,
            "v_cauchy": c.v_cauchy,
            "d0_cauchy": c.d0_cauchy,
            "dstar_cauchy": c.dstar_cauchy,
            "agree": c.agree(),
        }));
    }
    Ok(Outcome {
        exit: if all_agree { 0 } else { 2 },
        verdict: if all_agree { "pass" } else { "fail" },
        report: json!({
            "n_max": n_max,
            "traces": rows,
        }),
    })
}

#[derive(Debug, Default, Deserialize)]
struct NetsSettings {
    space: Option<SpaceSource>,
    modular: Option<ModularConfig>,
    /// "base" (the space's own distances), "d0" or "dstar".
    metric: Option<String>,
    epsilons: Option<Vec<f64>>,
    bracket: Option<BracketConfig>,
    trace_len: Option<usize>,
}

fn nets(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, out: &Path) -> Result<Outcome, CliError> {
    let s: NetsSettings = cfg.settings()?;
    let space_src = s.space.unwrap_or_default();
    let br = match s.bracket {
        Some(b) => b.build()?,
        None => Bracket::default(),
    };
    let metric_kind = s.metric.as_deref().unwrap_or("base");
    let (matrix, family): (DistanceMatrix, Option<ModularFamily>) = match metric_kind {
        "base" => {
            let space = build_space(&space_src, rng)?;
            let base = space
                .base_distance()
                .ok_or_else(|| CliError::Config("space carries no base distance".into()))?
                .clone();
            let w = s
                .modular
                .map(|m| build_modular(&m, &SpaceSource::Line { coords: vec![] }, rng))
                .transpose();
            // a modular over a different space cannot pair with the base
            // matrix; only accept it when dimensions line up
            let fam = match w {
                Ok(Some(f)) if f.len() == base.n() => Some(f),
                _ => None,
            };
            (base, fam)
        }
        "d0" | "dstar" => {
            let w = build_modular(&s.modular.unwrap_or_default(), &space_src, rng)?;
            let m = if metric_kind == "d0" {
                d0_matrix(&w, &br).map_err(CliError::Core)?
            } else {
                dstar_matrix(&w, &br).map_err(CliError::Core)?
            };
            (m, Some(w))
        }
        other => return Err(CliError::Config(format!("unknown metric source {other:?}"))),
    };

    let epsilons = match s.epsilons {
        Some(e) => e,
        None => {
            let diam = matrix.max_finite().unwrap_or(1.0).max(1e-6);
            vec![diam, diam / 2.0, diam / 4.0, diam / 8.0, diam / 16.0]
        }
    };
    let traces = fixtures::settling_traces(matrix.n(), s.trace_len.unwrap_or(12));
    let ev = compactness_verdict(&matrix, family.as_ref(), &epsilons, &traces, 1e-9)
        .map_err(CliError::Core)?;

    let mut csv = String::from("epsilon,net_size\n");
    for (e, size) in &ev.net_sizes {
        csv.push_str(&format!("{e},{size}\n"));
    }
    std::fs::write(out.join("nets.csv"), csv)
        .map_err(|e| CliError::Io(format!("cannot write nets.csv: {e}")))?;
    // full cover detail for the finest epsilon
    let finest = epsilons.iter().copied().fold(f64::INFINITY, f64::min);
    let cover = modmet_core::compactness::epsilon_net(&matrix, finest).map_err(CliError::Core)?;
    io::write_json(&cover, &out.join("net_finest.json"))?;

    let (exit, name) = verdict_outcome(ev.verdict);
    Ok(Outcome {
        exit,
        verdict: name,
        report: json!({
            "metric": metric_kind,
            "evidence": ev,
            "tables": ["nets.csv", "net_finest.json"],
        }),
    })
}

#[derive(Debug, Default, Deserialize)]
struct KrSettings {
    integrand: Option<IntegrandConfig>,
    omega: Option<OmegaConfig>,
    family: Option<FamilyConfig>,
    eps_ladder: Option<Vec<f64>>,
    partition_blocks: Option<Vec<usize>>,
    lambda_grid: Option<GridConfig>,
    bracket: Option<BracketConfig>,
}

fn kr(cfg: &ExperimentConfig, _rng: &mut ChaCha8Rng, out: &Path) -> Result<Outcome, CliError> {
    let s: KrSettings = cfg.settings()?;
    let phi = build_integrand(&s.integrand.unwrap_or_default())?;
    let omega = build_omega(&s.omega.unwrap_or_default())?;
    let family = build_family(&s.family.unwrap_or(FamilyConfig::Lipschitz { m: 11 }), &omega)?;
    let ladder = s.eps_ladder.unwrap_or_else(|| vec![0.4, 0.2, 0.1]);
    let blocks = match s.partition_blocks {
        Some(b) => b,
        None => {
            let cells = omega.len();
            (0..ladder.len())
                .map(|j| {
                    let shift = 2 * (ladder.len() - 1 - j) as u32;
                    (cells >> shift).max(1)
                })
                .collect()
        }
    };
    if blocks.len() != ladder.len() {
        return Err(CliError::Config(format!(
            "partition_blocks must match the ladder length {} (got {})",
            ladder.len(),
            blocks.len()
        )));
    }
    let partitions: Vec<Partition> = blocks
        .iter()
        .map(|&b| Partition::contiguous(omega.len(), b).map_err(CliError::Core))
        .collect::<Result<_, _>>()?;
    let grid = match s.lambda_grid {
        Some(g) => g.build()?,
        None => LambdaGrid::per_decade(1e-6, 1e6, 48).map_err(CliError::Core)?,
    };
    let br = match s.bracket {
        Some(b) => b.build()?,
        None => Bracket::default(),
    };

    let report = kr_compactness(&family, &phi, &omega, &ladder, &partitions, &grid, &br)
        .map_err(CliError::Core)?;

    let mut csv = String::from("level,eps,blocks,net_size,lambda_t,lambda_c,lambda_p\n");
    for (k, level) in report.levels.iter().enumerate() {
        csv.push_str(&format!(
            "{k},{},{},{},{},{},{}\n",
            level.eps,
            level.blocks,
            level.net.centers.len(),
            level.tightness.lambda_t,
            level.emc.lambda_c,
            level.averaging.lambda_p,
        ));
    }
    std::fs::write(out.join("kr_stages.csv"), csv)
        .map_err(|e| CliError::Io(format!("cannot write kr_stages.csv: {e}")))?;
    io::write_family_csv(&family, &out.join("family.csv"))?;
    io::save_omega(&omega, &out.join("omega.json"))?;

    let (exit, name) = match &report.verdict {
        KrVerdict::CompactEvidence => (0, "pass"),
        KrVerdict::NonCompactEvidence => (2, "fail"),
        KrVerdict::StageFailed { .. } => (2, "fail"),
    };
    Ok(Outcome {
        exit,
        verdict: name,
        report: json!({
            "integrand": phi.name(),
            "eps_ladder": ladder,
            "partition_blocks": blocks,
            "report": report,
            "tables": ["kr_stages.csv", "family.csv", "omega.json"],
        }),
    })
}

#[derive(Debug, Default, Deserialize)]
struct FuzzySettings {
    space: Option<SpaceSource>,
    t_list: Option<Vec<f64>>,
    r_list: Option<Vec<f64>>,
    radii: Option<Vec<f64>>,
}

fn fuzzy(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, _out: &Path) -> Result<Outcome, CliError> {
    let s: FuzzySettings = cfg.settings()?;
    let space = build_space(&s.space.unwrap_or_default(), rng)?;
    let d = space
        .base_distance()
        .ok_or_else(|| CliError::Config("space carries no base distance".into()))?;
    let ts = s.t_list.unwrap_or_else(|| vec![0.25, 1.0, 4.0]);
    let rs = s.r_list.unwrap_or_else(|| vec![0.01, 0.3, 0.7]);
    let radii = match s.radii {
        Some(r) => r,
        None => {
            let lo = d.min_positive().unwrap_or(1.0) * 0.5;
            let hi = d.max_finite().unwrap_or(1.0) * 2.0;
            default_radii(lo.min(hi * 0.5), hi, 8)
        }
    };

    // exact ball identity B(x,r,t) = {y : d < t r/(1-r)} on all samples
    let mut identity_ok = true;
    let mut identity_failures = Vec::new();
    for x in 0..d.n() {
        for &r in &rs {
            for &t in &ts {
                let fb = fuzzy_ball(d, x, r, t).map_err(CliError::Core)?;
                let mb = d.ball(x, t * r / (1.0 - r));
                if fb != mb {
                    identity_ok = false;
                    identity_failures.push(json!({"x": x, "r": r, "t": t}));
                }
            }
        }
    }
    let verdict = fuzzy_refinement(d, &ts, &rs, &radii).map_err(CliError::Core)?;
    let mutual = verdict.direction == RefinementDirection::Mutual;
    let pass = mutual && identity_ok;
    Ok(Outcome {
        exit: if pass { 0 } else { 2 },
        verdict: if pass { "pass" } else { "fail" },
        report: json!({
            "t_list": ts,
            "r_list": rs,
            "radii": radii,
            "ball_identity_exact": identity_ok,
            "ball_identity_failures": identity_failures,
            "refinement": verdict,
        }),
    })
}

#[derive(Debug, Default, Deserialize)]
struct AdequacySettings {
    space: Option<SpaceSource>,
    anchors: Option<Vec<usize>>,
    tol: Option<f64>,
}

fn adequacy(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, _out: &Path) -> Result<Outcome, CliError> {
    let s: AdequacySettings = cfg.settings()?;
    let space = build_space(&s.space.unwrap_or_default(), rng)?;
    let d = space
        .base_distance()
        .ok_or_else(|| CliError::Config("space carries no base distance".into()))?;
    let tol = s.tol.unwrap_or(1e-12);
    let full: Vec<usize> = (0..d.n()).collect();
    let full_defect = modmet_core::topology::adequacy_defect(d, &full).map_err(CliError::Core)?;

    let mut singles = Vec::new();
    for a in 0..d.n() {
        let v = modmet_core::topology::adequacy_defect(d, &[a]).map_err(CliError::Core)?;
        singles.push(json!({"anchor": a, "defect": v}));
    }
    let custom = match &s.anchors {
        Some(anchors) => Some(modmet_core::topology::adequacy_defect(d, anchors).map_err(CliError::Core)?),
        None => None,
    };
    let pass = full_defect <= tol;
    Ok(Outcome {
        exit: if pass { 0 } else { 2 },
        verdict: if pass { "pass" } else { "fail" },
        report: json!({
            "full_space_defect": full_defect,
            "tol": tol,
            "single_anchor_defects": singles,
            "custom_anchors": s.anchors,
            "custom_defect": custom,
        }),
    })
}

// --------------------------------------------------------------- generate

pub struct GenerateOptions {
    pub kind: String,
    pub out: PathBuf,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub cells: usize,
    pub scale: f64,
}

pub fn generate(opts: &GenerateOptions) -> Result<(), CliError> {
    std::fs::create_dir_all(&opts.out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", opts.out.display())))?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    match opts.kind.as_str() {
        "space" => {
            let space = fixtures::random_metric_space(&mut rng, opts.n, opts.scale)?;
            io::save_space(&space, &opts.out.join("space.json"))?;
        }
        "hexagon" => {
            let space = fixtures::jittered_hexagon(&mut rng)?;
            io::save_space(&space, &opts.out.join("space.json"))?;
        }
        "rademacher" => {
            let family = fixtures::rademacher_family(opts.m, opts.cells)?;
            io::write_family_csv(&family, &opts.out.join("family.csv"))?;
            io::save_omega(&fixtures::unit_omega(opts.cells)?, &opts.out.join("omega.json"))?;
        }
        "lipschitz" => {
            let family = fixtures::lipschitz_family(opts.m, opts.cells)?;
            io::write_family_csv(&family, &opts.out.join("family.csv"))?;
            io::save_omega(&fixtures::unit_omega(opts.cells)?, &opts.out.join("omega.json"))?;
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown fixture kind {other:?}; expected space, hexagon, rademacher or lipschitz"
            )))
        }
    }
    Ok(())
}
