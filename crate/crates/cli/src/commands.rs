use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Deserialize;
use serde_json::json;

use toric_core::experiments::output::{write_decay_csv, write_fit_csv, write_jj_csv, write_lifetime_csv, write_threshold_csv};
use toric_core::experiments::{
    decay_curve, estimate_lifetime, estimate_threshold, fit_mu_nu, jj_coherence_scan, sector_lattice, DecayOptions, DegreePoint,
    JJSimulation, LifetimeOptions, ThresholdConfig, DEGREE_LAW_MU, DEGREE_LAW_NU,
};
use toric_core::{Family, PeriodicLattice, Sector};

use crate::config::{default_p_grid, default_sizes, RunConfig};
use crate::CliError;

/// Lattices measured by `fit` when no data file is given.
pub const FIT_LATTICES: [(Family, Sector); 7] = [
    (Family::Hexagonal, Sector::Primal),
    (Family::ReducedSquare, Sector::Primal),
    (Family::Union, Sector::Dual),
    (Family::Square, Sector::Primal),
    (Family::Union, Sector::Primal),
    (Family::ReducedSquare, Sector::Dual),
    (Family::Triangular, Sector::Primal),
];

pub fn dispatch(run: &RunConfig) -> Result<(), CliError> {
    match run.command {
        "lattice" => lattice(run),
        "threshold" => threshold(run),
        "lifetime" => lifetime(run),
        "decay" => decay(run),
        "fit" => fit(run),
        "jj" => jj(run),
        other => Err(CliError::Internal(format!("no handler for `{other}`"))),
    }
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<(), CliError> {
    let io_err = |e| CliError::Io(path.to_path_buf(), e);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    body(&mut w).and_then(|_| w.flush()).map_err(io_err)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn with_meta<T>(run: &RunConfig, f: impl FnOnce(&[(&str, String)]) -> T) -> T {
    let owned = run.meta();
    let meta: Vec<(&str, String)> = owned.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    f(&meta)
}

fn degree(lat: &PeriodicLattice) -> f64 {
    let q = lat.average_degree();
    *q.numer() as f64 / *q.denom() as f64
}

fn lattice(run: &RunConfig) -> Result<(), CliError> {
    let (family, l) = (run.family(), run.sizes.as_ref().expect("size resolved")[0]);
    let mut lat = PeriodicLattice::generate(family, l)?;
    if run.dual == Some(true) {
        lat = lat.dual();
    }
    let file = lat.to_file();
    let text = file.to_json();
    match &run.out {
        Some(path) => {
            write_file(path, |w| w.write_all(text.as_bytes()))?;
            println!(
                "{}",
                json!({"family": file.family, "L": l, "average_degree": file.meta.average_degree, "path": path})
            );
        }
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io("<stdout>".into(), e))?,
    }
    Ok(())
}

fn threshold_config(run: &RunConfig, family: Family, sector: Sector, sizes: Vec<usize>, p_grid: Vec<f64>) -> ThresholdConfig {
    let mut cfg = ThresholdConfig::new(family, sector, sizes, p_grid, run.n_runs, run.seed);
    cfg.sparsifier = run.sparsifier;
    if let Some(b) = run.bootstrap {
        cfg.bootstrap = b;
    }
    cfg
}

fn threshold(run: &RunConfig) -> Result<(), CliError> {
    let cfg = threshold_config(
        run,
        run.family(),
        run.sector(),
        run.sizes.clone().expect("sizes resolved"),
        run.p_grid.clone().expect("grid resolved"),
    );
    eprintln!(
        "threshold {} {}: L = {:?}, {} grid points, {} samples each",
        cfg.family,
        cfg.sector,
        cfg.sizes,
        cfg.p_grid.len(),
        cfg.samples
    );
    let started = Instant::now();
    let r = estimate_threshold(&cfg)?;
    eprintln!("done in {:.1?}", started.elapsed());
    with_meta(run, |meta| write_file(&run.output_path("threshold.csv"), |w| write_threshold_csv(w, &r, meta)))?;
    println!(
        "{}",
        json!({
            "family": r.family, "sector": r.sector, "p_c": r.p_c, "p_c_err": r.p_c_err,
            "ci": [r.ci.0, r.ci.1], "pair_crossings": r.pair_crossings,
        })
    );
    Ok(())
}

fn lifetime(run: &RunConfig) -> Result<(), CliError> {
    let (family, sector) = (run.family(), run.sector());
    let mut results = Vec::new();
    for &l in run.sizes.as_ref().expect("sizes resolved") {
        let lat = sector_lattice(family, sector, l)?;
        for &t in run.temperatures.as_ref().expect("temperatures resolved") {
            let mut opts = LifetimeOptions::new(run.n_runs, run.seed, run.t_max.expect("window resolved"));
            opts.sparsifier = run.sparsifier;
            opts.n_samples = run.samples.unwrap_or(opts.n_samples);
            opts.criterion = run.criterion.unwrap_or(opts.criterion);
            opts.bootstrap = run.bootstrap.unwrap_or(opts.bootstrap);
            eprintln!("lifetime {family} {sector} L = {l} T/J = {t}: {} runs", run.n_runs);
            let r = estimate_lifetime(&lat, run.rates.model(t)?, &opts)?;
            println!(
                "{}",
                json!({"family": r.family, "sector": r.sector, "L": l, "T_over_J": t, "tau": r.tau, "tau_err": r.tau_err})
            );
            results.push(r);
        }
    }
    with_meta(run, |meta| write_file(&run.output_path("lifetime.csv"), |w| write_lifetime_csv(w, &results, meta)))
}

fn decay(run: &RunConfig) -> Result<(), CliError> {
    let (family, sector) = (run.family(), run.sector());
    let (t_max, n) = (run.t_max.expect("window resolved"), run.samples.expect("samples resolved"));
    let times: Vec<f64> = (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect();
    let opts = DecayOptions { n_runs: run.n_runs, seed: run.seed, sparsifier: run.sparsifier };
    let mut curves = Vec::new();
    for &l in run.sizes.as_ref().expect("sizes resolved") {
        let lat = sector_lattice(family, sector, l)?;
        for &t in run.temperatures.as_ref().expect("temperatures resolved") {
            eprintln!("decay {family} {sector} L = {l} T/J = {t}: {} runs", run.n_runs);
            let c = decay_curve(&lat, run.rates.model(t)?, &times, opts)?;
            println!(
                "{}",
                json!({"family": c.family, "sector": c.sector, "L": l, "T_over_J": t, "crossing_0.5": c.crossing(0.5)})
            );
            curves.push(c);
        }
    }
    with_meta(run, |meta| write_file(&run.output_path("decay.csv"), |w| write_decay_csv(w, &curves, meta)))
}

#[derive(Deserialize)]
struct FitRow {
    q: f64,
    p_c: f64,
    #[serde(default)]
    p_c_err: f64,
}

fn read_points(path: &Path) -> Result<Vec<DegreePoint>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    reader
        .deserialize::<FitRow>()
        .map(|row| {
            let row = row.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            Ok(DegreePoint { q: row.q, p_c: row.p_c, p_c_err: row.p_c_err })
        })
        .collect()
}

fn fit(run: &RunConfig) -> Result<(), CliError> {
    let points = match (&run.data, &run.lattices) {
        (Some(path), _) => read_points(path)?,
        (None, Some(lattices)) => {
            let mut points = Vec::new();
            for &(family, sector) in lattices {
                let cfg = threshold_config(run, family, sector, default_sizes(family, &[16, 32]), default_p_grid(family));
                eprintln!("fit: measuring {family} {sector} at L = {:?}", cfg.sizes);
                let r = estimate_threshold(&cfg)?;
                let q = degree(&sector_lattice(family, sector, cfg.sizes[0])?);
                eprintln!("  q = {q:.4}: p_c = {:.4} ± {:.4}", r.p_c, r.p_c_err);
                points.push(DegreePoint { q, p_c: r.p_c, p_c_err: r.p_c_err });
            }
            points
        }
        (None, None) => return Err(CliError::Config("fit needs --data or --lattices".into())),
    };
    let fit = fit_mu_nu(&points)?;
    with_meta(run, |meta| write_file(&run.output_path("fit.csv"), |w| write_fit_csv(w, &fit, meta)))?;
    println!("{}", json!({"mu": fit.mu, "nu": fit.nu, "points": fit.points.len()}));
    Ok(())
}

fn jj(run: &RunConfig) -> Result<(), CliError> {
    let x = run.x.expect("x resolved");
    let q_grid = run.q_grid.as_ref().expect("grid resolved");
    let sim = (run.simulate == Some(true)).then(|| {
        let mut lifetime = LifetimeOptions::new(run.n_runs, run.seed, run.t_max.unwrap_or(12.0));
        lifetime.sparsifier = run.sparsifier;
        JJSimulation { linear_size: run.sizes.as_ref().map_or(16, |s| s[0]), lifetime }
    });
    let mut scans = Vec::new();
    for &t in run.temperatures.as_ref().expect("temperatures resolved") {
        let scan = jj_coherence_scan(x, t, q_grid, DEGREE_LAW_MU, DEGREE_LAW_NU, sim.as_ref())?;
        println!("{}", json!({"x": x, "T": t, "best_q": scan.best_q}));
        scans.push(scan);
    }
    with_meta(run, |meta| write_file(&run.output_path("jj.csv"), |w| write_jj_csv(w, &scans, meta)))
}
