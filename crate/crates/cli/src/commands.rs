use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use multiphoton::distributions::{
    counting_probability, counting_probability_exact, detect_probability, detected_fraction, efficiency,
    joint_pdf, marginal_broken, marginal_full,
};
use multiphoton::exact::{parse_rational, to_f64, Rational};
use multiphoton::moments::{
    bundle_length_stats, cross_moment_first_last, cross_moment_first_last_sum, cross_moment_quadrature, moment,
    moment_quadrature, moment_sum, peak_average_weighted, std_dev_coefficients, unfiltered_mean, variance,
    FirstLastMoments, MomentResult,
};
use multiphoton::montecarlo::{
    effective_bundler_rates, extract_peak, purity, sample_bundles, sample_cwse_stream, waiting_times, CountHistogram,
    Histogram, RngSpec,
};
use multiphoton::quadrature::integrate_to_inf;
use multiphoton::rates::Filter;
use multiphoton::thermal::{
    filtered_intensity, filtered_temperature, g2_thermal_filtered, lorentzian_fit, spectrum_thermal,
    thermal_number_distribution, ThermalParams,
};
use multiphoton::wtd::{mean_wtd_biphoton, thermal_peak_average, wtd_biphoton, wtd_thermal};
use multiphoton::{verify, BundleSpec, Error, RateSet};

use crate::output::{Cell, Format, Table};
use crate::{parse_float, Command, Figure, PipelineArg, RateArgs, ThermalQuantity};

pub enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::RequiresFilter => Failure::Usage(e.to_string()),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

fn flatten(prefix: &str, value: &serde_json::Value, out: &mut Vec<(String, String)>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        serde_json::Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn with_config(command: &Command, mut table: Table) -> Table {
    let mut meta = vec![("units".to_string(), "gamma_a = 1 unless --gamma is set".to_string())];
    if let Ok(v) = serde_json::to_value(command) {
        flatten("", &v, &mut meta);
    }
    meta.append(&mut table.metadata);
    table.metadata = meta;
    table
}

pub fn run(command: &Command, format: Format, output: Option<&Path>) -> Outcome<ExitCode> {
    if let Command::Verify { seed } = command {
        return run_verify(*seed, format, output);
    }
    let table = match command {
        Command::Efficiency { rates, grid } => {
            let r = rates.rate_set()?;
            let mut t = Table::new(&["window", "efficiency"]);
            for w in grid.values()? {
                t.push(vec![w.into(), efficiency(&r, w)?.into()]);
            }
            t
        }
        Command::Counting { rates, n, window, exact } => counting(rates, *n, window, *exact)?,
        Command::Pdf { rates, n, times } => {
            let r = rates.rate_set()?;
            let spec = BundleSpec::new(*n)?;
            let mut t = Table::new(&["times", "density"]);
            let label = times.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            t.push(vec![label.into(), joint_pdf(&r, spec, times)?.into()]);
            t
        }
        Command::Marginal { rates, n, k, broken, grid } => {
            let r = rates.rate_set()?;
            let spec = BundleSpec::new(*n)?;
            let mut t = Table::new(&["t", "density"]);
            for x in grid.values()? {
                let d = if *broken { marginal_broken(&r, spec, *k, x)? } else { marginal_full(&r, spec, *k, x)? };
                t.push(vec![x.into(), d.into()]);
            }
            t
        }
        Command::Moments { .. } => moments(command)?,
        Command::Wtd { .. } => wtd(command)?,
        Command::Thermal { .. } => thermal(command)?,
        Command::Simulate { .. } => simulate(command)?,
        Command::Table { unfiltered_means, std_coefficients, max_n, n, k } => {
            table(*unfiltered_means, *std_coefficients, *max_n, *n, *k)?
        }
        Command::Verify { .. } => unreachable!(),
    };
    with_config(command, table).write(format, output)?;
    Ok(ExitCode::SUCCESS)
}

fn counting(rates: &RateArgs, n: u32, window: &str, exact: bool) -> Outcome<Table> {
    let spec = BundleSpec::new(n)?;
    let w = parse_float(window)?;
    if exact {
        if w.is_finite() {
            return usage("--exact needs --window inf");
        }
        let r = rates.exact()?;
        let dist = counting_probability_exact(&r.single_detection(), spec)?;
        let mut t = Table::new(&["k", "exact", "probability"]);
        for (k, p) in dist.probabilities.iter().enumerate() {
            t.push(vec![k.into(), p.to_string().into(), to_f64(p).into()]);
        }
        return Ok(t);
    }
    let dist = counting_probability(&rates.rate_set()?, spec, w)?;
    let mut t = Table::new(&["k", "probability"]);
    for (k, p) in dist.probabilities.iter().enumerate() {
        t.push(vec![k.into(), (*p).into()]);
    }
    Ok(t)
}

fn exact_cells(m: &MomentResult) -> Vec<Cell> {
    let exact = m.exact().map(|x| x.to_string()).unwrap_or_default();
    let pipeline = serde_json::to_value(m.pipeline)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    vec![pipeline.into(), exact.into(), m.to_f64().into()]
}

/// Rational stand-in for a grid point, rounded to seven significant digits.
fn decimal(x: f64) -> Outcome<Rational> {
    Ok(parse_rational(&format!("{x:.6e}"))?)
}

fn log_grid(from: f64, to: f64, points: usize) -> Outcome<Vec<f64>> {
    if !(from > 0.0 && from < to) || points < 2 {
        return usage("Γ grid needs 0 < from < to and at least two points");
    }
    Ok((0..points)
        .map(|i| (from.ln() + i as f64 / (points - 1) as f64 * (to.ln() - from.ln())).exp())
        .collect())
}

fn moments(command: &Command) -> Outcome<Table> {
    let Command::Moments {
        rates, n, k, mean, second, std, cross, pearson, reflective, length, exact, pipeline, figure,
        gamma_from, gamma_to, gamma_points,
    } = command
    else {
        unreachable!()
    };
    let n = *n;
    let spec = BundleSpec::new(n)?;
    if let Some(fig) = figure {
        if *fig != Figure::Fig1Floor {
            return usage("moments supports --figure fig1-floor");
        }
        let gamma = parse_float(&rates.gamma)?;
        let mut t = Table::new(&["gamma_filter", "k", "mean_full", "mean_broken"]);
        for bw in log_grid(*gamma_from, *gamma_to, *gamma_points)? {
            let r = RateSet::filtered(gamma, bw)?;
            for k in 1..=n {
                let full = moment_quadrature(&r, n, k, 1)?.to_f64();
                let norm = detected_fraction(&r, spec, k)?;
                let broken = integrate_to_inf(|x| x * marginal_broken(&r, spec, k, x).unwrap_or(f64::NAN), 1e-12)? / norm;
                t.push(vec![bw.into(), k.into(), full.into(), broken.into()]);
            }
        }
        return Ok(t);
    }
    let pipeline = match (pipeline, exact) {
        (Some(p), false) => *p,
        (Some(PipelineArg::Exact), true) | (None, _) => PipelineArg::Exact,
        (Some(_), true) => return usage("--exact conflicts with --pipeline"),
    };
    let photon = *mean || *second || *std || !(*cross || *pearson || *reflective || *length);
    let mean = *mean || !(*second || *std || *cross || *pearson || *reflective || *length);
    let ks: Vec<u32> = match k {
        Some(k) => vec![*k],
        None => (1..=n).collect(),
    };
    let mut t = Table::new(&["quantity", "n", "k", "pipeline", "exact", "value"]);
    let float_rates = rates.rate_set()?;
    let needs_exact = pipeline != PipelineArg::Quadrature || *std || *pearson || *reflective || *length;
    let exact_rates = if needs_exact { Some(rates.exact()?) } else { None };
    let compute = |k: u32, order: u32| -> Outcome<MomentResult> {
        Ok(match pipeline {
            PipelineArg::Exact => moment(exact_rates.as_ref().unwrap(), n, k, order)?,
            PipelineArg::Sum => moment_sum(exact_rates.as_ref().unwrap(), n, k, order)?,
            PipelineArg::Quadrature => moment_quadrature(&float_rates, n, k, order)?,
        })
    };
    if photon {
        for &k in &ks {
            if mean {
                let mut row: Vec<Cell> = vec!["mean".into(), n.into(), k.into()];
                row.extend(exact_cells(&compute(k, 1)?));
                t.push(row);
            }
            if *second {
                let mut row: Vec<Cell> = vec!["second".into(), n.into(), k.into()];
                row.extend(exact_cells(&compute(k, 2)?));
                t.push(row);
            }
            if *std {
                let var = variance(exact_rates.as_ref().unwrap(), n, k)?;
                t.push(vec![
                    "variance".into(), n.into(), k.into(), "EXPPOLY_EXACT".into(), var.to_string().into(), to_f64(&var).into(),
                ]);
                t.push(vec!["std".into(), n.into(), k.into(), "EXPPOLY_EXACT".into(), "".into(), to_f64(&var).sqrt().into()]);
            }
        }
    }
    if *cross {
        let m = match pipeline {
            PipelineArg::Exact => cross_moment_first_last(exact_rates.as_ref().unwrap(), n)?,
            PipelineArg::Sum => cross_moment_first_last_sum(exact_rates.as_ref().unwrap(), n)?,
            PipelineArg::Quadrature => cross_moment_quadrature(&float_rates, n)?,
        };
        let mut row: Vec<Cell> = vec!["cross_first_last".into(), n.into(), "".into()];
        row.extend(exact_cells(&m));
        t.push(row);
    }
    if *pearson || *reflective {
        let fl = FirstLastMoments::new(exact_rates.as_ref().unwrap(), n)?;
        if *pearson {
            let sq = fl.pearson_squared();
            t.push(vec!["pearson_squared".into(), n.into(), "".into(), "EXPPOLY_EXACT".into(), sq.to_string().into(), to_f64(&sq).into()]);
            t.push(vec!["pearson".into(), n.into(), "".into(), "EXPPOLY_EXACT".into(), "".into(), fl.pearson().into()]);
        }
        if *reflective {
            let sq = fl.reflective_squared();
            t.push(vec!["reflective_squared".into(), n.into(), "".into(), "EXPPOLY_EXACT".into(), sq.to_string().into(), to_f64(&sq).into()]);
            t.push(vec!["reflective".into(), n.into(), "".into(), "EXPPOLY_EXACT".into(), "".into(), fl.reflective().into()]);
        }
    }
    if *length {
        let s = bundle_length_stats(exact_rates.as_ref().unwrap(), n)?;
        t.push(vec!["length_mean".into(), n.into(), "".into(), "EXPPOLY_EXACT".into(), s.mean.to_string().into(), to_f64(&s.mean).into()]);
        t.push(vec![
            "length_variance".into(), n.into(), "".into(), "EXPPOLY_EXACT".into(), s.variance.to_string().into(), to_f64(&s.variance).into(),
        ]);
        t.push(vec!["length_std".into(), n.into(), "".into(), "EXPPOLY_EXACT".into(), "".into(), s.std().into()]);
    }
    Ok(t)
}

fn wtd(command: &Command) -> Outcome<Table> {
    let Command::Wtd { rates, theta, grid, figure, max_n, figure_theta } = command else { unreachable!() };
    if let Some(fig) = figure {
        if *fig != Figure::Fig2b {
            return usage("wtd supports --figure fig2b");
        }
        let gamma = parse_rational(&rates.gamma)?;
        let widths = if grid.log { grid.values()? } else { log_grid(0.01, 100.0, 41)? };
        let mut t = Table::new(&["gamma_filter", "n", "peak_average", "thermal_wide", "thermal_narrow"]);
        for bw in widths {
            let exact = multiphoton::ExactRates::filtered(gamma.clone(), decimal(bw)?)?;
            let p = ThermalParams::from_theta(*figure_theta, to_f64(&gamma), Filter::Bandwidth(bw))?;
            let avg = thermal_peak_average(&p);
            for n in 2..=*max_n {
                let v = to_f64(&peak_average_weighted(&exact, n)?);
                t.push(vec![bw.into(), n.into(), v.into(), avg.wide.into(), avg.narrow.unwrap_or(f64::NAN).into()]);
            }
        }
        return Ok(t);
    }
    let taus = grid.values()?;
    if let Some(theta) = theta {
        let p = ThermalParams::from_theta(*theta, parse_float(&rates.gamma)?, Filter::Unfiltered)?;
        let mut t = Table::new(&["tau", "wtd"]);
        t.meta("thermal_peak_average", thermal_peak_average(&p).wide);
        for tau in taus {
            t.push(vec![tau.into(), wtd_thermal(&p, tau)?.into()]);
        }
        return Ok(t);
    }
    let r = rates.rate_set()?;
    let mut t = Table::new(&["tau", "wtd"]);
    t.meta("mean_wtd", mean_wtd_biphoton(&r));
    for tau in taus {
        t.push(vec![tau.into(), wtd_biphoton(&r, tau)?.into()]);
    }
    Ok(t)
}

fn thermal(command: &Command) -> Outcome<Table> {
    let Command::Thermal { theta, gamma, filter, quantity, grid } = command else { unreachable!() };
    let f = match filter.trim() {
        "none" | "inf" | "unfiltered" => Filter::Unfiltered,
        s => Filter::Bandwidth(parse_float(s)?),
    };
    let p = ThermalParams::from_theta(*theta, parse_float(gamma)?, f)?;
    Ok(match quantity {
        ThermalQuantity::Spectrum => {
            let mut t = Table::new(&["omega", "spectrum"]);
            for w in grid.values()? {
                t.push(vec![w.into(), spectrum_thermal(&p, w).into()]);
            }
            t
        }
        ThermalQuantity::G2 => {
            let mut t = Table::new(&["tau", "g2"]);
            for x in grid.values()? {
                t.push(vec![x.into(), g2_thermal_filtered(&p, x)?.into()]);
            }
            t
        }
        ThermalQuantity::Wtd => {
            let bare = ThermalParams::new(p.pump(), p.gamma_a(), Filter::Unfiltered)?;
            let mut t = Table::new(&["tau", "wtd"]);
            for x in grid.values()? {
                t.push(vec![x.into(), wtd_thermal(&bare, x)?.into()]);
            }
            t
        }
        ThermalQuantity::Number => {
            let mut t = Table::new(&["n", "probability"]);
            for n in 0..grid.points as u32 {
                t.push(vec![n.into(), thermal_number_distribution(&p, n).into()]);
            }
            t
        }
        ThermalQuantity::Summary => {
            let mut t = Table::new(&["quantity", "value"]);
            let avg = thermal_peak_average(&p);
            let rows: Vec<(&str, f64)> = vec![
                ("theta", p.theta()),
                ("kappa", p.kappa()),
                ("q", p.q()),
                ("mean_photons", p.mean_photons()),
                ("intensity", p.intensity()),
                ("filtered_intensity", filtered_intensity(&p)),
                ("peak_average_wide", avg.wide),
            ];
            for (k, v) in rows {
                t.push(vec![k.into(), v.into()]);
            }
            if p.bandwidth().is_some() {
                t.push(vec!["population_ratio_temperature".into(), filtered_temperature(&p)?.into()]);
                t.push(vec!["peak_average_narrow".into(), avg.narrow.unwrap_or(f64::NAN).into()]);
                t.push(vec!["lorentzian_fit_residual".into(), lorentzian_fit(&p).relative_residual.into()]);
            }
            t
        }
    })
}

fn write_lines<T: serde::Serialize>(path: &Path, items: &[T]) -> Outcome<()> {
    let mut f = BufWriter::new(File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut f, item).map_err(|e| Failure::Numeric(e.to_string()))?;
        writeln!(f)?;
    }
    f.flush()?;
    Ok(())
}

fn simulate(command: &Command) -> Outcome<Table> {
    let Command::Simulate {
        rates, n, bundle: _, stream, trajectories, seed, trigger_rate, duration, effective_rate, fit_from, fit_to, records,
    } = command
    else {
        unreachable!()
    };
    let spec = BundleSpec::new(*n)?;
    let mut r = rates.rate_set()?;
    if *effective_rate {
        r = effective_bundler_rates(&r)?;
    }
    if *stream {
        let s = sample_cwse_stream(&r, spec, *trigger_rate, *duration, RngSpec::new(*seed, 0))?;
        if let Some(path) = records {
            write_lines(path, &s.events)?;
        }
        let mut t = Table::new(&["quantity", "value", "std_error"]);
        t.push(vec!["triggers".into(), (s.trigger_times.len() as f64).into(), Cell::Text(String::new())]);
        t.push(vec!["events".into(), (s.events.len() as f64).into(), Cell::Text(String::new())]);
        if let Ok(p) = purity(&s.bundles).estimate() {
            t.push(vec!["purity".into(), p.value.into(), p.std_error.into()]);
            let target = detect_probability(&r, spec, *n)?;
            t.push(vec!["purity_expected".into(), target.into(), Cell::Text(String::new())]);
        }
        let mut h = Histogram::new(0.0, 4.0 * fit_to, (40.0 * fit_to).ceil() as usize)?;
        h.extend(waiting_times(&s.events));
        match extract_peak(&h, (*fit_from, *fit_to)) {
            Ok(peak) => {
                t.push(vec!["peak_average".into(), peak.average.into(), Cell::Text(String::new())]);
                t.push(vec!["peak_weight".into(), peak.weight.into(), Cell::Text(String::new())]);
                t.push(vec!["background_rate".into(), peak.background_rate.into(), Cell::Text(String::new())]);
            }
            Err(e) => t.meta("peak_extraction", e),
        }
        return Ok(t);
    }
    let recs = sample_bundles(&r, spec, *seed, 0, *trajectories);
    if let Some(path) = records {
        write_lines(path, &recs)?;
    }
    let hist = CountHistogram::from_records(*n as usize, &recs);
    let expected: Vec<f64> = (0..=*n).map(|k| detect_probability(&r, spec, k)).collect::<Result<_, _>>()?;
    let z = hist.z_scores(&expected);
    let mut t = Table::new(&["detected", "observed", "expected", "z_score"]);
    if let Ok(p) = purity(&recs).estimate() {
        t.meta("purity", format!("{} ± {}", p.value, p.std_error));
    }
    for k in 0..=*n as usize {
        t.push(vec![
            k.into(),
            hist.counts[k].into(),
            (expected[k] * *trajectories as f64).into(),
            z[k].into(),
        ]);
    }
    Ok(t)
}

fn table(unfiltered_means: bool, std_coefficients: bool, max_n: u32, n: u32, k: u32) -> Outcome<Table> {
    if unfiltered_means == std_coefficients {
        return usage("choose exactly one of --unfiltered-means and --std-coefficients");
    }
    if unfiltered_means {
        if !(1..=BundleSpec::DEFAULT_CAP).contains(&max_n) {
            return usage(format!("--max-N must lie in 1..={}", BundleSpec::DEFAULT_CAP));
        }
        let mut t = Table::new(&["n", "k", "exact", "value"]);
        for n in 1..=max_n {
            for k in 1..=n {
                let m = unfiltered_mean(n, k)?;
                t.push(vec![n.into(), k.into(), m.to_string().into(), to_f64(&m).into()]);
            }
        }
        return Ok(t);
    }
    let c = std_dev_coefficients(n, k)?;
    let mut t = Table::new(&["coefficient", "index", "value"]);
    for (i, a) in c.alpha.iter().enumerate() {
        t.push(vec!["alpha".into(), i.into(), a.to_string().into()]);
    }
    for (i, b) in c.beta.iter().enumerate() {
        t.push(vec!["beta".into(), i.into(), b.to_string().into()]);
    }
    t.push(vec!["prefactor".into(), 0usize.into(), c.prefactor.to_string().into()]);
    Ok(t)
}

fn run_verify(seed: u64, format: Format, output: Option<&Path>) -> Outcome<ExitCode> {
    let reports = verify::run_all(seed);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&reports).map_err(|e| Failure::Numeric(e.to_string()))? + "\n",
        Format::Csv => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&r.summary());
                s.push('\n');
                for c in &r.checks {
                    s.push_str("    ");
                    s.push_str(c);
                    s.push('\n');
                }
            }
            s
        }
    };
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(if reports.iter().all(|r| r.passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
