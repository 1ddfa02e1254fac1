//! The four subcommands. Each validates its configuration before touching
//! the output directory.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use boostwave::frame_transform::{transform, NormalizationMode, TransformedModel};
use boostwave::output::{sci, VERSION};
use boostwave::tomography::{
    analytic_on_bins, extract_slice, reconstruct_density, simulate, AMode, SliceReport,
};
use boostwave::verify::{run_suite, SuiteConfig};
use boostwave::{Boost, Event, Wavefunction};
use serde::Serialize;

use crate::config::{self, BoostConfig, Lattice, PacketConfig, TomoConfig};
use crate::{CliError, Common};

pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Option<String>,
    pub failed_checks: Vec<String>,
}

fn prepare_out(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(CliError::Io)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Run(e.into()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn echo_line<T: Serialize>(config: &T) -> Result<String, CliError> {
    Ok(format!("# config={}", serde_json::to_string(config).map_err(|e| CliError::Run(e.into()))?))
}

/// `t,x,re,im,density` rows over the product lattice, t outermost.
fn write_field<W: Wavefunction + Sync>(
    path: &Path,
    title: &str,
    echo: &str,
    columns: &str,
    field: &W,
    t: &Lattice,
    x: &Lattice,
) -> Result<(), CliError> {
    let mut w = create(path)?;
    writeln!(w, "# boostwave {VERSION} {title}")?;
    writeln!(w, "{echo}")?;
    writeln!(w, "{columns}")?;
    let xs = x.values();
    for &tv in &t.values() {
        for &xv in &xs {
            let z = field.evaluate(Event::new(tv, xv));
            writeln!(w, "{},{},{},{},{}", sci(tv), sci(xv), sci(z.re), sci(z.im), sci(z.norm_sqr()))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn packet(common: &Common) -> Result<Outcome, CliError> {
    let cfg: PacketConfig = config::load(common.config.as_deref())?;
    cfg.validate()?;
    let model = cfg.model.build()?;
    prepare_out(&common.out)?;
    let path = common.out.join("packet.csv");
    write_field(&path, "packet", &echo_line(&cfg)?, "t,x,re,im,density", &model, &cfg.t, &cfg.x)?;
    Ok(Outcome { files: vec![path], summary: None, failed_checks: vec![] })
}

#[derive(Serialize)]
struct BoostSummary<'a> {
    version: &'static str,
    v: f64,
    gamma: f64,
    doppler: f64,
    #[serde(rename = "A_momentum_scalar")]
    a_momentum_scalar: f64,
    #[serde(rename = "A_path_normalized")]
    a_path_normalized: Option<f64>,
    #[serde(rename = "A_slice_normalized")]
    a_slice_normalized: f64,
    mode: NormalizationMode,
    #[serde(rename = "A")]
    a: f64,
    extension: bool,
    boundary_warning: bool,
    config: &'a BoostConfig,
}

fn transformed(cfg: &BoostConfig, mode: NormalizationMode) -> Result<Option<TransformedModel>, CliError> {
    let b = Boost::new(cfg.v)?;
    let quad = cfg.model.normalization_quadrature(b, mode)?;
    if mode != NormalizationMode::MomentumScalar && quad.is_none() {
        return Ok(None);
    }
    Ok(Some(transform(cfg.model.build()?, b, mode, quad.as_ref())?))
}

pub fn boost(common: &Common) -> Result<Outcome, CliError> {
    let cfg: BoostConfig = config::load(common.config.as_deref())?;
    cfg.validate()?;
    let b = Boost::new(cfg.v)?;
    let ms = transformed(&cfg, NormalizationMode::MomentumScalar)?.expect("closed form");
    let path = transformed(&cfg, NormalizationMode::PathNormalized)?;
    let slice = transformed(&cfg, NormalizationMode::SliceNormalized)?.expect("slice domain");
    let chosen = match cfg.mode {
        NormalizationMode::MomentumScalar => &ms,
        NormalizationMode::PathNormalized => path.as_ref().expect("validated"),
        NormalizationMode::SliceNormalized => &slice,
    };
    let summary = BoostSummary {
        version: VERSION,
        v: cfg.v,
        gamma: b.gamma(),
        doppler: b.doppler(),
        a_momentum_scalar: ms.a(),
        a_path_normalized: path.as_ref().map(|p| p.a()),
        a_slice_normalized: slice.a(),
        mode: cfg.mode,
        a: chosen.a(),
        extension: ms.is_extension(),
        boundary_warning: chosen.boundary_warning(),
        config: &cfg,
    };

    prepare_out(&common.out)?;
    let csv = common.out.join("boost.csv");
    write_field(&csv, "boosted packet", &echo_line(&cfg)?, "t_prime,x_prime,re,im,density", chosen, &cfg.t, &cfg.x)?;
    let json = common.out.join("boost.json");
    write_json(&json, &summary)?;
    let text = format!(
        "v = {}  gamma = {:.10}  D = {:.10}\nA momentum scalar = {:.10}\nA path normalized = {}\nA slice normalized = {:.10}{}\n",
        cfg.v,
        b.gamma(),
        b.doppler(),
        ms.a(),
        path.as_ref().map_or("undefined".to_string(), |p| format!("{:.10}", p.a())),
        slice.a(),
        if ms.is_extension() { "\nEXTENSION: off-shell transformation" } else { "" },
    );
    Ok(Outcome { files: vec![csv, json], summary: Some(text), failed_checks: vec![] })
}

#[derive(Serialize)]
struct SliceFile<'a> {
    #[serde(flatten)]
    report: &'a SliceReport,
    run: &'a TomoConfig,
}

pub fn tomo(common: &Common) -> Result<Outcome, CliError> {
    let mut cfg: TomoConfig = config::load(common.config.as_deref())?;
    if let Some(seed) = common.seed {
        cfg.tomography.seed = seed;
    }
    cfg.validate()?;
    let model = cfg.model.build()?;
    let table = simulate(&cfg.tomography, &model)?;

    prepare_out(&common.out)?;
    let counts = common.out.join("counts.csv");
    let mut w = create(&counts)?;
    writeln!(w, "{}", echo_line(&cfg)?.replacen("# config=", "# run=", 1))?;
    table.write_csv(&mut w)?;
    w.flush()?;
    let mut files = vec![counts];
    let mut text = String::new();
    for &spec in &cfg.slices {
        let slice = extract_slice(&table, spec)?;
        let b = spec.boost(&cfg.tomography)?;
        let quad = cfg.model.normalization_quadrature(b, NormalizationMode::SliceNormalized)?;
        let analytic = transform(model.clone(), b, NormalizationMode::SliceNormalized, quad.as_ref())?;
        let hist = reconstruct_density(&slice, &table, cfg.a_mode)?;
        let scale = match cfg.a_mode {
            AMode::Estimated => 1.0,
            AMode::Supplied(a) => (a / analytic.a()).powi(2),
        };
        let expected: Vec<f64> = analytic_on_bins(&hist, &analytic).iter().map(|d| d * scale).collect();
        let report = SliceReport::new(&slice, &table, &hist, Some(&expected));
        let path = common.out.join(format!("slice_q{}_s{}.json", spec.q, spec.s));
        write_json(&path, &SliceFile { report: &report, run: &cfg })?;
        files.push(path);
        let cmp = report.comparison.expect("analytic supplied");
        text.push_str(&format!(
            "q={} s={}: v_B = {:.6}, t' = {:.6}, A = {:.6} (slice quadrature {:.6}), L1 = {:.5}\n",
            spec.q, spec.s, slice.v_b, slice.t_prime, hist.a, analytic.a(), cmp.l1
        ));
    }
    Ok(Outcome { files, summary: Some(text), failed_checks: vec![] })
}

pub fn verify(common: &Common) -> Result<Outcome, CliError> {
    let mut cfg: SuiteConfig = config::load(common.config.as_deref())?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    config::validate_suite(&cfg)?;
    let report = run_suite(&cfg)?;
    prepare_out(&common.out)?;
    let json = common.out.join("verify.json");
    write_json(&json, &report)?;
    let txt = common.out.join("verify.txt");
    let summary = report.summary();
    let mut w = create(&txt)?;
    writeln!(w, "{}", echo_line(&cfg)?)?;
    w.write_all(summary.as_bytes())?;
    w.flush()?;
    let failed_checks = report
        .checks
        .iter()
        .filter(|c| c.status == boostwave::verify::Status::Fail)
        .map(|c| c.name.clone())
        .collect();
    Ok(Outcome { files: vec![json, txt], summary: Some(summary), failed_checks })
}
