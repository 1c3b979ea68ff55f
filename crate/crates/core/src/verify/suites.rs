use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::{estimate_operator_norm_with, replay_ratio, EstimateConfig};
use super::family::ExponentFamily;
use super::report::{Check, Report};
use crate::embed::{embed, embedded_modular, g_decompose, G2_BOUND_RADIUS};
use crate::error::{Error, Result};
use crate::exponent::{ExponentFunction, ExponentSequence};
use crate::hilbert::pointwise_bound;
use crate::multiplier::{apply_multiplier, check_hypotheses, min_grid_size, sup_on_grid, Symbol};
use crate::space::{luxemburg_norm_step, modular_seq, modular_step, normalize, Sequence, DEFAULT_TOL};
use crate::window::Window;

/// The available check suites. The command-line ids are given by
/// [`Suite::id`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Suite {
    /// Modular and norm of the embedded step function (`lemma21`).
    EmbeddingBudget,
    /// Remainder bounds in the cell decomposition of `Hf` (`lemma23`).
    CellDecomposition,
    /// Exact modular of the embedding and its two-sided comparison (`remark31`).
    ModularTransfer,
    /// Saturation of operator-norm lower bounds as the window grows (`theorem13`).
    HilbertSaturation,
    /// Finite modular of multiplier outputs via the small/large split (`theorem32`).
    MultiplierModular,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::EmbeddingBudget,
        Suite::CellDecomposition,
        Suite::ModularTransfer,
        Suite::HilbertSaturation,
        Suite::MultiplierModular,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::EmbeddingBudget => "lemma21",
            Suite::CellDecomposition => "lemma23",
            Suite::ModularTransfer => "remark31",
            Suite::HilbertSaturation => "theorem13",
            Suite::MultiplierModular => "theorem32",
        }
    }

    fn default_families(self) -> Vec<ExponentFamily> {
        let parse = |xs: &[&str]| xs.iter().map(|s| s.parse().expect("built-in family")).collect();
        match self {
            Suite::HilbertSaturation => parse(&["alternating:1.5:3", "log_decay:2", "uniform:1.3:4"]),
            Suite::MultiplierModular => parse(&["constant:1.5", "alternating:1.4:1.9:1.4", "uniform:1.2:2:1.2"]),
            _ => parse(&["constant:2", "alternating:1.5:3", "log_decay:2", "uniform:1.3:4"]),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.id() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl TryFrom<String> for Suite {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Suite> for String {
    fn from(s: Suite) -> String {
        s.id().to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random inputs per exponent family (per symbol for multipliers).
    pub trials: usize,
    /// Inputs live on `[-half_width, half_width]`.
    pub half_width: i64,
    /// Empty means the suite's own default list.
    pub families: Vec<ExponentFamily>,
    /// Half-widths for the saturation suite, in increasing order.
    pub windows: Vec<i64>,
    pub samples_per_cell: usize,
    /// Samples closer than this to a jump of the embedded function are skipped.
    pub edge_gap: f64,
    pub tol: f64,
    /// Largest relative increase allowed per window doubling.
    pub saturation_threshold: f64,
    /// Estimates must stay below this multiple of the pointwise constant.
    pub envelope_factor: f64,
    pub symbols: Vec<String>,
    pub grid_size: Option<usize>,
    pub estimate: EstimateConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            trials: 32,
            half_width: 16,
            families: Vec::new(),
            windows: vec![256, 512, 1024],
            samples_per_cell: 200,
            edge_gap: 1e-3,
            tol: 1e-12,
            saturation_threshold: 0.02,
            envelope_factor: 10.0,
            symbols: ["one", "shift", "sgn", "riesz_tau:1"].map(String::from).to_vec(),
            grid_size: None,
            estimate: EstimateConfig::default(),
        }
    }
}

impl SuiteConfig {
    fn families_for(&self, suite: Suite) -> Vec<ExponentFamily> {
        if self.families.is_empty() {
            suite.default_families()
        } else {
            self.families.clone()
        }
    }

    fn window(&self) -> Result<Window> {
        if self.half_width < 0 {
            return Err(Error::InvalidArgument(format!("half_width must be >= 0, got {}", self.half_width)));
        }
        Ok(Window::symmetric(self.half_width))
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidTolerance(self.tol));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<Report> {
    let suite: Suite = name.parse()?;
    config.validate()?;
    let mut report = Report::new(suite.id(), config.seed, config);
    match suite {
        Suite::EmbeddingBudget => embedding_budget(config, &mut report)?,
        Suite::CellDecomposition => cell_decomposition(config, &mut report)?,
        Suite::ModularTransfer => modular_transfer(config, &mut report)?,
        Suite::HilbertSaturation => hilbert_saturation(config, &mut report)?,
        Suite::MultiplierModular => multiplier_modular(config, &mut report)?,
    }
    Ok(report)
}

/// Independent stream per (family, trial).
fn trial_rng(seed: u64, family: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((family as u64) << 32) | trial as u64);
    rng
}

/// Trial 0 is `e_0`; the rest are uniform on `[-1, 1]` over the window.
fn trial_input(window: Window, rng: &mut ChaCha8Rng, trial: usize) -> Sequence {
    if trial == 0 {
        Sequence::basis(0).restrict(window)
    } else {
        Sequence::from_fn(window, |_| rng.gen_range(-1.0..=1.0))
    }
}

/// Worst sample per check name, in first-seen order.
fn merge_worst(report: &mut Report, per_trial: Vec<Vec<Check>>) {
    let mut merged: Vec<Check> = Vec::new();
    for check in per_trial.into_iter().flatten() {
        match merged.iter_mut().find(|c| c.name == check.name) {
            Some(slot) => *slot = slot.clone().worse(check),
            None => merged.push(check),
        }
    }
    for c in merged {
        report.push(c);
    }
}

fn embedding_budget(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    report.note(
        "The bound ((2 pi)^p_bar / 2) ||b|| compares a modular with a norm; it is checked in two steps, \
         rho(f) <= ((2 pi)^p_bar / 2) rho(b) and rho(b) <= 1 whenever ||b|| <= 1.",
    );
    let window = cfg.window()?;
    for (fi, family) in cfg.families_for(Suite::EmbeddingBudget).iter().enumerate() {
        let per_trial = (0..cfg.trials)
            .into_par_iter()
            .map(|t| -> Result<Vec<Check>> {
                let mut rng = trial_rng(cfg.seed, fi, t);
                let p = family.realize(window, cfg.seed ^ t as u64)?;
                let b = normalize(&trial_input(window, &mut rng, t), &p)?;
                let e = embed(&b, &p);
                let rho_b = modular_seq(&b, &p);
                let rho_f = modular_step(&e.f, &e.pfun);
                let factor = (2.0 * PI).powf(p.p_bar()) / 2.0;
                let norm_f = luxemburg_norm_step(&e.f, &e.pfun, DEFAULT_TOL)?.value;
                let inputs = (&b, &p);
                Ok(vec![
                    Check::le(format!("{family}: unit-ball modular"), "||b|| <= 1 implies sum |b_k|^p_k <= 1", rho_b, 1.0, cfg.tol)
                        .with_inputs(&inputs),
                    Check::le(
                        format!("{family}: embedded modular budget"),
                        "rho(f) <= ((2 pi)^p_bar / 2) sum |b_k|^p_k",
                        rho_f,
                        factor * rho_b,
                        cfg.tol * factor,
                    )
                    .with_inputs(&inputs),
                    Check::le(
                        format!("{family}: embedded norm finite"),
                        "||f|| <= max(1, ((2 pi)^p_bar / 2) sum |b_k|^p_k)",
                        norm_f,
                        (factor * rho_b).max(1.0),
                        cfg.tol * factor,
                    )
                    .with_inputs(&inputs),
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        merge_worst(report, per_trial);
    }
    Ok(())
}

fn cell_decomposition(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    report.note(format!(
        "|G2(x)| <= 2 |b_n| log 2 holds exactly when |x - n| <= 1/12; on the rest of the cell it is reported \
         for information only. Samples within {} of n +- 1/4 are skipped.",
        cfg.edge_gap
    ));
    let window = cfg.window()?;
    let p = ExponentSequence::constant(2.0)?;
    let samples = cfg.samples_per_cell.max(1);
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<Vec<Check>> {
            let mut rng = trial_rng(cfg.seed, 0, t);
            let b = trial_input(window, &mut rng, t);
            let e = embed(&b, &p);
            let mut g1: Option<Check> = None;
            let mut g2_near: Option<Check> = None;
            let mut g2_cell: Option<Check> = None;
            let keep = |slot: &mut Option<Check>, c: Check| {
                *slot = Some(match slot.take() {
                    Some(prev) => prev.worse(c),
                    None => c,
                });
            };
            for n in window.indices() {
                let g = g_decompose(&e, n)?;
                for i in 0..samples {
                    let u = (i as f64 + 0.5) / samples as f64 - 0.5;
                    if (u.abs() - 0.25).abs() < cfg.edge_gap {
                        continue;
                    }
                    let x = n as f64 + u;
                    let inputs = (&b, n, x);
                    keep(
                        &mut g1,
                        Check::le(
                            "G1 remainder bound",
                            "|G1(x)| <= sum_{m != n} 3 |b_m| / |n - m|^2",
                            g.g1_at(x)?.abs(),
                            g.g1_bound,
                            cfg.tol,
                        )
                        .with_inputs(&inputs),
                    );
                    let g2 = g.g2_at(x)?.abs();
                    let c = Check::le("G2 bound on the full cell", "|G2(x)| <= 2 |b_n| log 2", g2, g.g2_bound(), cfg.tol)
                        .with_inputs(&inputs)
                        .informational();
                    if u.abs() <= G2_BOUND_RADIUS {
                        let near = Check { name: "G2 bound near the cell centre".into(), informational: false, ..c.clone() };
                        keep(&mut g2_near, near);
                    }
                    keep(&mut g2_cell, c);
                }
            }
            Ok([g1, g2_near, g2_cell].into_iter().flatten().collect())
        })
        .collect::<Result<Vec<_>>>()?;
    merge_worst(report, per_trial);
    Ok(())
}

fn modular_transfer(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let window = cfg.window()?;
    for (fi, family) in cfg.families_for(Suite::ModularTransfer).iter().enumerate() {
        let per_trial = (0..cfg.trials)
            .into_par_iter()
            .map(|t| -> Result<Vec<Check>> {
                let mut rng = trial_rng(cfg.seed, fi, t);
                let p = family.realize(window, cfg.seed ^ t as u64)?;
                let b = trial_input(window, &mut rng, t);
                let e = embed(&b, &p);
                let lhs = modular_step(&e.f, &e.pfun);
                let rhs = embedded_modular(&b, &p);
                let rho_b = modular_seq(&b, &p);
                let (lo, hi) = b
                    .iter()
                    .filter(|(_, v)| *v != 0.0)
                    .map(|(n, _)| (2.0 * PI).powf(p.get(n)) / 2.0)
                    .fold((f64::INFINITY, 1.0f64), |(lo, hi), c| (lo.min(c), hi.max(c)));
                let lo = if lo.is_finite() { lo } else { 1.0 };
                let inputs = (&b, &p);
                let scale = rhs.abs().max(1.0);
                Ok(vec![
                    Check::eq(format!("{family}: modular identity"), "rho(f) = (1/2) sum |2 pi b_n|^p_n", lhs, rhs, cfg.tol * scale)
                        .with_inputs(&inputs),
                    Check::le(format!("{family}: lower constant at least 1"), "1 <= m1", 1.0, lo, 0.0).with_inputs(&inputs),
                    Check::le(format!("{family}: lower comparison"), "m1 rho(b) <= rho(f)", lo * rho_b, lhs, cfg.tol * scale)
                        .with_inputs(&inputs),
                    Check::le(format!("{family}: upper comparison"), "rho(f) <= M1 rho(b)", lhs, hi * rho_b, cfg.tol * scale)
                        .with_inputs(&inputs),
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        merge_worst(report, per_trial);
    }
    Ok(())
}

fn hilbert_saturation(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    report.note(
        "Each value is ||Hb|| / ||b|| for a stored witness on the square section over the window, so it is a \
         lower bound for the operator norm. Increments above the threshold that persist under doubling indicate \
         growth, not a search failure.",
    );
    let mut windows = cfg.windows.clone();
    windows.sort_unstable();
    windows.dedup();
    if windows.is_empty() || windows[0] < 0 {
        return Err(Error::InvalidArgument("saturation needs non-negative window half-widths".into()));
    }
    let largest = Window::symmetric(*windows.last().unwrap());
    for (fi, family) in cfg.families_for(Suite::HilbertSaturation).iter().enumerate() {
        let p = family.realize(largest, cfg.seed)?;
        let envelope = cfg.envelope_factor * pointwise_bound(p.p_bar())?.constant;
        let mut warm: Option<Sequence> = None;
        let mut previous: Option<(i64, f64)> = None;
        for &h in &windows {
            let window = Window::symmetric(h);
            let est_cfg = EstimateConfig {
                seed: cfg.seed.wrapping_add(fi as u64),
                warm_start: warm.take(),
                ..cfg.estimate.clone()
            };
            let est = estimate_operator_norm_with(&p, window, &est_cfg)?;
            let value = est.lower_bound;
            let inputs = (&family.to_string(), h, cfg.seed);
            report.push(
                Check::le(
                    format!("{family}: [-{h}, {h}] below envelope"),
                    "||Hb|| / ||b|| <= factor * pointwise constant(p_bar)",
                    value,
                    envelope,
                    0.0,
                )
                .with_inputs(&inputs)
                .with_note(format!("method {:?}", est.method).to_lowercase()),
            );
            let replay = replay_ratio(&est.witness, &p)?;
            report.push(
                Check::eq(format!("{family}: [-{h}, {h}] witness replay"), "recomputed ratio = recorded ratio", replay, value, 1e-8)
                    .with_inputs(&est.witness),
            );
            if let Some((ph, pv)) = previous {
                report.push(
                    Check::le(
                        format!("{family}: [-{ph}, {ph}] -> [-{h}, {h}] nondecreasing"),
                        "estimate on the smaller window <= estimate on the larger",
                        pv,
                        value,
                        1e-9 * pv,
                    )
                    .with_inputs(&inputs),
                );
                let growth = (value / pv).log2() / ((h as f64 + 0.5) / (ph as f64 + 0.5)).log2();
                report.push(
                    Check::le(
                        format!("{family}: [-{ph}, {ph}] -> [-{h}, {h}] relative increment"),
                        "(next - previous) / previous < threshold",
                        (value - pv) / pv,
                        cfg.saturation_threshold,
                        0.0,
                    )
                    .with_inputs(&inputs)
                    .with_note(format!("local growth exponent {growth:.4}")),
                );
            }
            previous = Some((h, value));
            warm = Some(est.witness);
        }
    }
    Ok(())
}

fn multiplier_modular(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    report.note(
        "For p_- <= p_n <= 2 the modular of T_m b is split at |T_m b| = 1: small values are raised to p_- and \
         large values squared, and the square sum is controlled by Plancherel.",
    );
    let window = cfg.window()?;
    let symbols = cfg.symbols.iter().map(|s| Symbol::parse(s)).collect::<Result<Vec<_>>>()?;
    for (fi, family) in cfg.families_for(Suite::MultiplierModular).iter().enumerate() {
        let p = family.realize(window, cfg.seed)?;
        let hyp = check_hypotheses(&ExponentFunction::from_sequence(&p), false)?;
        report.push(
            Check::eq(
                format!("{family}: exponent hypotheses"),
                "1 < p_- <= p_+ <= 2 and |{p > p_-}| < infinity",
                if hyp.in_range && hyp.satisfied { 1.0 } else { 0.0 },
                1.0,
                0.0,
            )
            .with_inputs(&p)
            .with_note(format!("p_- = {}, p_+ = {}, q = {}", hyp.p_minus, hyp.p_plus, hyp.q)),
        );
        let p_minus = hyp.p_minus;
        for (si, m) in symbols.iter().enumerate() {
            let grid = cfg.grid_size.unwrap_or_else(|| min_grid_size(window.len).max(1024));
            let sup = sup_on_grid(m, grid);
            let name = m.name();
            let per_trial = (0..cfg.trials)
                .into_par_iter()
                .map(|t| -> Result<Vec<Check>> {
                    let mut rng = trial_rng(cfg.seed, (fi << 16) | si, t);
                    let b = normalize(&trial_input(window, &mut rng, t), &p)?;
                    let c = apply_multiplier(m, &b, grid)?;
                    let rho = modular_seq(&c, &p);
                    let split: f64 = c
                        .values()
                        .iter()
                        .map(|v| {
                            let a = v.norm();
                            if a <= 1.0 {
                                a.powf(p_minus)
                            } else {
                                a * a
                            }
                        })
                        .sum();
                    let inputs = (&b, &p, &name, grid);
                    Ok(vec![
                        Check::le(
                            format!("{family} {name}: modular split"),
                            "rho(T_m b) <= sum_{|T_m b| <= 1} |T_m b|^p_- + sum_{|T_m b| > 1} |T_m b|^2",
                            rho,
                            split,
                            cfg.tol * split.max(1.0),
                        )
                        .with_inputs(&inputs),
                        Check::le(
                            format!("{family} {name}: Plancherel"),
                            "||T_m b||_2 <= sup |m| ||b||_2",
                            c.l2_norm(),
                            sup * b.lq_norm(2.0),
                            1e-9,
                        )
                        .with_inputs(&inputs),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            merge_worst(report, per_trial);
        }
    }
    Ok(())
}
