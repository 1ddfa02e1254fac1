//! Simulated position tomography and its reading by a moving observer.
//!
//! Alice measures `N` identically prepared samples at each of the instants
//! `t_i = i·Δt_d`, `i = 0..=m`, recording which of the `B = L/Δx` spatial bins
//! fired. The resulting counts table has one row per instant and each row
//! sums to `N`.
//!
//! An observer moving with `v_B = Δt_d/(q·Δx)` regards the cells along the
//! staircase `i = ⌊j/q⌋ + s` as simultaneous. Reading the counts on such a
//! staircase, with bins contracted to `Δx/γ`, gives that observer's position
//! distribution up to the constant fixed by [`estimate_a`].

use std::io::{BufRead, Write};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{Boost, Event};
use crate::output::{sci, VERSION};
use crate::wavepacket::Wavefunction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TomographyConfig {
    /// Samples measured per instant (N).
    pub samples: u64,
    /// Index of the last instant (m); the table has m + 1 rows.
    pub rows: usize,
    /// Duration of one detection (Δt_d).
    pub dt_d: f64,
    /// Bin width (Δx).
    pub dx: f64,
    /// Extent of the well (L); L/Δx must be an integer.
    pub length: f64,
    pub seed: u64,
}

impl TomographyConfig {
    pub fn validate(&self) -> Result<()> {
        self.bins().map(|_| ())
    }

    /// Number of spatial bins B = L/Δx.
    pub fn bins(&self) -> Result<usize> {
        if self.samples == 0 || self.rows == 0 {
            return Err(Error::Domain("samples and rows must be at least 1".into()));
        }
        if !(self.dt_d > 0.0 && self.dt_d.is_finite()) {
            return Err(Error::Domain(format!("dt_d must be positive, got {}", self.dt_d)));
        }
        if !(self.dx > 0.0 && self.dx.is_finite() && self.length > 0.0 && self.length.is_finite())
        {
            return Err(Error::Domain("dx and length must be positive".into()));
        }
        let ratio = self.length / self.dx;
        let b = ratio.round();
        if b < 1.0 || (ratio - b).abs() > 1e-9 * ratio {
            return Err(Error::Domain(format!("length/dx = {ratio} is not a positive integer")));
        }
        Ok(b as usize)
    }

    fn echo(&self) -> Vec<(&'static str, String)> {
        vec![
            ("samples", self.samples.to_string()),
            ("rows", self.rows.to_string()),
            ("dt_d", sci(self.dt_d)),
            ("dx", sci(self.dx)),
            ("length", sci(self.length)),
            ("seed", self.seed.to_string()),
        ]
    }
}

/// Detection counts, rows indexed by instant and columns by bin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsTable {
    counts: Vec<Vec<u64>>,
    config: TomographyConfigKey,
}

// f64 fields prevent Eq on the config itself; keep the bit patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TomographyConfigKey([u64; 6]);

impl From<&TomographyConfig> for TomographyConfigKey {
    fn from(c: &TomographyConfig) -> Self {
        TomographyConfigKey([
            c.samples,
            c.rows as u64,
            c.dt_d.to_bits(),
            c.dx.to_bits(),
            c.length.to_bits(),
            c.seed,
        ])
    }
}

impl TomographyConfigKey {
    fn config(&self) -> TomographyConfig {
        let k = self.0;
        TomographyConfig {
            samples: k[0],
            rows: k[1] as usize,
            dt_d: f64::from_bits(k[2]),
            dx: f64::from_bits(k[3]),
            length: f64::from_bits(k[4]),
            seed: k[5],
        }
    }
}

impl CountsTable {
    /// Builds a table from explicit counts, checking the shape and row sums.
    pub fn from_counts(config: TomographyConfig, counts: Vec<Vec<u64>>) -> Result<Self> {
        let bins = config.bins()?;
        if counts.len() != config.rows + 1 {
            return Err(Error::Table(format!(
                "expected {} rows, found {}",
                config.rows + 1,
                counts.len()
            )));
        }
        for (i, row) in counts.iter().enumerate() {
            if row.len() != bins {
                return Err(Error::Table(format!("row {i} has {} bins, expected {bins}", row.len())));
            }
            let sum: u64 = row.iter().sum();
            if sum != config.samples {
                return Err(Error::Table(format!(
                    "row {i} sums to {sum}, expected {}",
                    config.samples
                )));
            }
        }
        Ok(CountsTable { counts, config: (&config).into() })
    }

    pub fn config(&self) -> TomographyConfig {
        self.config.config()
    }

    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn bins(&self) -> usize {
        self.counts[0].len()
    }

    pub fn get(&self, row: usize, bin: usize) -> u64 {
        self.counts[row][bin]
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.counts[row]
    }

    /// CSV with the configuration echoed in `#` comment lines, then a header
    /// `row,t,n_0,…` and one line per instant.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let cfg = self.config();
        writeln!(w, "# boostwave {VERSION} counts table")?;
        for (k, v) in cfg.echo() {
            writeln!(w, "# {k}={v}")?;
        }
        let header: Vec<String> = (0..self.bins()).map(|j| format!("n_{j}")).collect();
        writeln!(w, "row,t,{}", header.join(","))?;
        for (i, row) in self.counts.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(w, "{i},{},{}", sci(i as f64 * cfg.dt_d), cells.join(","))?;
        }
        Ok(())
    }

    /// Parses the output of [`CountsTable::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut text = String::new();
        let mut fields = std::collections::HashMap::new();
        for line in r.lines() {
            let line = line?;
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((k, v)) = comment.trim().split_once('=') {
                    fields.insert(k.trim().to_string(), v.trim().to_string());
                }
            } else {
                text.push_str(&line);
                text.push('\n');
            }
        }
        let get = |k: &str| {
            fields.get(k).ok_or_else(|| Error::Table(format!("missing config comment '{k}'")))
        };
        let bad = |k: &str| Error::Table(format!("unparsable config comment '{k}'"));
        let config = TomographyConfig {
            samples: get("samples")?.parse().map_err(|_| bad("samples"))?,
            rows: get("rows")?.parse().map_err(|_| bad("rows"))?,
            dt_d: get("dt_d")?.parse().map_err(|_| bad("dt_d"))?,
            dx: get("dx")?.parse().map_err(|_| bad("dx"))?,
            length: get("length")?.parse().map_err(|_| bad("length"))?,
            seed: get("seed")?.parse().map_err(|_| bad("seed"))?,
        };
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let mut counts = Vec::new();
        for record in reader.records() {
            let record = record?;
            let row = record
                .iter()
                .skip(2)
                .map(|c| c.trim().parse::<u64>().map_err(|_| Error::Table(format!("bad count '{c}'"))))
                .collect::<Result<Vec<u64>>>()?;
            counts.push(row);
        }
        Self::from_counts(config, counts)
    }
}

/// Bin probabilities at instant `row`: |ψ|² at bin midpoints, renormalized
/// to sum to one.
pub fn row_probabilities<W: Wavefunction + ?Sized>(
    config: &TomographyConfig,
    model: &W,
    row: usize,
) -> Result<Vec<f64>> {
    let bins = config.bins()?;
    let t = row as f64 * config.dt_d;
    let weights: Vec<f64> = (0..bins)
        .map(|j| model.density(Event::new(t, (j as f64 + 0.5) * config.dx)) * config.dx)
        .collect();
    let mass: f64 = weights.iter().sum();
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::ZeroMass { row, mass });
    }
    Ok(weights.into_iter().map(|w| w / mass).collect())
}

/// Random stream for row `row`: ChaCha8 keyed by the master seed, with the
/// row index as stream id.
pub fn row_rng(seed: u64, row: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row as u64);
    rng
}

/// Draws `N` categorical samples per instant. Rows are simulated in parallel
/// on independent streams; the table depends only on config and seed.
pub fn simulate<W: Wavefunction + Sync + ?Sized>(
    config: &TomographyConfig,
    model: &W,
) -> Result<CountsTable> {
    let bins = config.bins()?;
    let counts = (0..=config.rows)
        .into_par_iter()
        .map(|i| {
            let p = row_probabilities(config, model, i)?;
            let dist = WeightedIndex::new(&p)
                .map_err(|e| Error::Domain(format!("row {i}: {e}")))?;
            let mut rng = row_rng(config.seed, i);
            let mut row = vec![0u64; bins];
            for _ in 0..config.samples {
                row[dist.sample(&mut rng)] += 1;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    CountsTable::from_counts(*config, counts)
}

/// Staircase `i = ⌊j/q⌋ + s` through the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub q: u32,
    pub s: i64,
}

impl SliceSpec {
    pub fn new(q: u32, s: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("slice slope denominator q must be positive".into()));
        }
        Ok(SliceSpec { q, s })
    }

    /// v_B = Δt_d/(q·Δx).
    pub fn velocity(&self, config: &TomographyConfig) -> f64 {
        config.dt_d / (self.q as f64 * config.dx)
    }

    pub fn boost(&self, config: &TomographyConfig) -> Result<Boost> {
        if self.q == 0 {
            return Err(Error::Domain("slice slope denominator q must be positive".into()));
        }
        Boost::new(self.velocity(config))
    }

    /// Row selected at column `j`, if any.
    pub fn row_at(&self, j: usize) -> i64 {
        (j as i64).div_euclid(self.q as i64) + self.s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceCell {
    pub row: usize,
    pub col: usize,
    pub count: u64,
    /// Primed time of the cell's left edge (iΔt_d, jΔx).
    pub t_prime: f64,
    /// Primed position of the cell's left edge.
    pub x_prime: f64,
    /// Primed image of the cell centre (iΔt_d, (j + ½)Δx).
    pub center: Event,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceData {
    pub spec: SliceSpec,
    pub v_b: f64,
    pub gamma: f64,
    /// Contracted bin width Δx/γ.
    pub dx_prime: f64,
    /// Nominal primed time s·γ·Δt_d of the slice.
    pub t_prime: f64,
    pub cells: Vec<SliceCell>,
}

impl SliceData {
    pub fn total_count(&self) -> u64 {
        self.cells.iter().map(|c| c.count).sum()
    }

    /// (min, max) of the per-cell primed times.
    pub fn t_prime_range(&self) -> (f64, f64) {
        self.cells.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
            (lo.min(c.t_prime), hi.max(c.t_prime))
        })
    }
}

/// Cells on the staircase, clipped to the table.
pub fn extract_slice(table: &CountsTable, spec: SliceSpec) -> Result<SliceData> {
    let cfg = table.config();
    let boost = spec.boost(&cfg)?;
    let (v, g) = (boost.v(), boost.gamma());
    let cells: Vec<SliceCell> = (0..table.bins())
        .filter_map(|j| {
            let i = spec.row_at(j);
            if i < 0 || i as usize >= table.rows() {
                return None;
            }
            let i = i as usize;
            let t = i as f64 * cfg.dt_d;
            let x = j as f64 * cfg.dx;
            let edge = boost.event(Event::new(t, x));
            Some(SliceCell {
                row: i,
                col: j,
                count: table.get(i, j),
                t_prime: edge.t,
                x_prime: edge.x,
                center: boost.event(Event::new(t, x + 0.5 * cfg.dx)),
            })
        })
        .collect();
    if cells.is_empty() {
        return Err(Error::EmptySlice { q: spec.q, s: spec.s });
    }
    Ok(SliceData {
        spec,
        v_b: v,
        gamma: g,
        dx_prime: cfg.dx / g,
        t_prime: spec.s as f64 * g * cfg.dt_d,
        cells,
    })
}

/// A from 1 = (A²/γ)·Σ(slice counts)/N.
pub fn estimate_a(slice: &SliceData, table: &CountsTable) -> Result<f64> {
    let total = slice.total_count();
    if total == 0 {
        return Err(Error::ZeroCount);
    }
    Ok((slice.gamma * table.config().samples as f64 / total as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AMode {
    Estimated,
    Supplied(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub x_prime: f64,
    pub dx_prime: f64,
    pub count: u64,
    pub height: f64,
    /// Primed event at which the bin is compared with an analytic density.
    pub center: Event,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub a: f64,
    pub a_mode: AMode,
    pub total: u64,
    pub bins: Vec<HistogramBin>,
}

impl Histogram {
    pub fn heights(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.height).collect()
    }

    /// Σ height·Δx′.
    pub fn integral(&self) -> f64 {
        self.bins.iter().map(|b| b.height * b.dx_prime).sum()
    }
}

/// Empirical |ψ′|² on the contracted bins `[x′, x′ + Δx′)`.
///
/// With [`AMode::Estimated`] the heights are count/(total·Δx′) and integrate
/// to one. A supplied A gives heights A²·count/(γ·N·Δx′), the density implied
/// by ψ′ = Aψ with |ψ|²Δx = count/N.
pub fn reconstruct_density(
    slice: &SliceData,
    table: &CountsTable,
    a_mode: AMode,
) -> Result<Histogram> {
    let total = slice.total_count();
    let n = table.config().samples as f64;
    let a = match a_mode {
        AMode::Estimated => estimate_a(slice, table)?,
        AMode::Supplied(a) => a,
    };
    let bins = slice
        .cells
        .iter()
        .map(|c| {
            let height = match a_mode {
                AMode::Estimated => c.count as f64 / (total as f64 * slice.dx_prime),
                AMode::Supplied(_) => a * a * c.count as f64 / (slice.gamma * n * slice.dx_prime),
            };
            HistogramBin {
                x_prime: c.x_prime,
                dx_prime: slice.dx_prime,
                count: c.count,
                height,
                center: c.center,
            }
        })
        .collect();
    Ok(Histogram { a, a_mode, total, bins })
}

/// Analytic density evaluated at each bin's comparison event.
pub fn analytic_on_bins<W: Wavefunction + ?Sized>(hist: &Histogram, analytic: &W) -> Vec<f64> {
    hist.bins.iter().map(|b| analytic.density(b.center)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// Σ |h_b − f_b| Δx′_b
    pub l1: f64,
    /// max |h_b − f_b|
    pub max_deviation: f64,
    /// Σ (n_b − E_b)²/E_b over bins with E_b ≥ 5, E_b = total·f_b·Δx′_b.
    pub chi_square: f64,
    pub chi_square_bins: usize,
    pub bins: usize,
}

pub fn compare_distributions(hist: &Histogram, analytic: &[f64]) -> Comparison {
    assert_eq!(hist.bins.len(), analytic.len(), "analytic values must match the bins");
    let mut l1 = 0.0;
    let mut max_deviation: f64 = 0.0;
    let mut chi_square = 0.0;
    let mut chi_square_bins = 0;
    for (b, &f) in hist.bins.iter().zip(analytic) {
        let d = (b.height - f).abs();
        l1 += d * b.dx_prime;
        max_deviation = max_deviation.max(d);
        let expected = hist.total as f64 * f * b.dx_prime;
        if expected >= 5.0 {
            let observed = b.height * hist.total as f64 * b.dx_prime;
            chi_square += (observed - expected).powi(2) / expected;
            chi_square_bins += 1;
        }
    }
    Comparison { l1, max_deviation, chi_square, chi_square_bins, bins: hist.bins.len() }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportBin {
    pub x_prime: f64,
    pub dx_prime: f64,
    pub count: u64,
    pub height: f64,
    pub t_prime_center: f64,
    pub x_prime_center: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<f64>,
}

/// JSON form of one slice: geometry, A, histogram and optional comparison.
#[derive(Debug, Clone, Serialize)]
pub struct SliceReport {
    pub version: &'static str,
    pub q: u32,
    pub s: i64,
    #[serde(rename = "v_B")]
    pub v_b: f64,
    pub gamma: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub a_mode: AMode,
    pub t_prime: f64,
    pub t_prime_min: f64,
    pub t_prime_max: f64,
    pub dx_prime: f64,
    pub total_count: u64,
    pub samples: u64,
    pub bins: Vec<ReportBin>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    pub config: TomographyConfig,
}

impl SliceReport {
    pub fn new(
        slice: &SliceData,
        table: &CountsTable,
        hist: &Histogram,
        analytic: Option<&[f64]>,
    ) -> Self {
        let (t_min, t_max) = slice.t_prime_range();
        let bins = hist
            .bins
            .iter()
            .enumerate()
            .map(|(n, b)| ReportBin {
                x_prime: b.x_prime,
                dx_prime: b.dx_prime,
                count: b.count,
                height: b.height,
                t_prime_center: b.center.t,
                x_prime_center: b.center.x,
                analytic: analytic.map(|a| a[n]),
            })
            .collect();
        SliceReport {
            version: VERSION,
            q: slice.spec.q,
            s: slice.spec.s,
            v_b: slice.v_b,
            gamma: slice.gamma,
            a: hist.a,
            a_mode: hist.a_mode,
            t_prime: slice.t_prime,
            t_prime_min: t_min,
            t_prime_max: t_max,
            dx_prime: slice.dx_prime,
            total_count: slice.total_count(),
            samples: table.config().samples,
            bins,
            comparison: analytic.map(|a| compare_distributions(hist, a)),
            config: table.config(),
        }
    }
}
