//! The `nivatk` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_traits::Signed;

use crate::annihilator::{find_annihilator, search_difference_annihilator, verify_expansion, ModCheck};
use crate::catalog;
use crate::config::{count_patterns, pattern_complexity, Configuration};
use crate::decomposition::{decompose, default_halo};
use crate::error::{Error, Result};
use crate::laurent::{annihilates, line_factorization, newton_polygon_directions, LaurentPolynomial};
use crate::lattice::{IntVector, Lattice};
use crate::nivat::{
    bound_two_directions, corollary_report, line_pattern_census, nivat_scan, periodicity_class, scan_csv,
};
use crate::parse::{self, ConfigFile};
use crate::quadratic::QuadraticReal;
use crate::tiling::{
    prime_periodicity_check, search_periodic_cotiler, verify_cotiler, ClusterTile, CotilerCheck, PeriodicCoTiler,
};
use crate::window::Window;

#[derive(Parser, Debug)]
#[command(name = "nivatk", version, about = "Exact tools for configurations of low pattern complexity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count distinct patterns of a shape.
    Complexity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        shape: String,
        /// Anchor window; ignored for evidently periodic configurations.
        #[arg(long, default_value = "64")]
        sample: String,
    },
    /// Find an annihilator from a shape with few patterns.
    Annihilate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        shape: String,
        #[arg(long)]
        sample: String,
        /// Verification window; defaults to the sample.
        #[arg(long)]
        verify: Option<String>,
    },
    /// Check that a polynomial annihilates a configuration.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        window: String,
        /// Comma-separated primes for the power-expansion checks.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Search for a product of difference operators annihilating a configuration.
    Search {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_factors: usize,
        #[arg(long, default_value_t = 1)]
        bound: i64,
        #[arg(long)]
        window: String,
    },
    /// Split a configuration into periodic components on a window.
    Decompose {
        #[arg(long)]
        config: PathBuf,
        /// Periods, e.g. "(1,0) (0,1)".
        #[arg(long)]
        vectors: String,
        #[arg(long)]
        core: String,
        #[arg(long)]
        halo: Option<String>,
    },
    /// Line factorization of a polynomial, or a per-line pattern census.
    Lines {
        #[arg(long, required_unless_present = "config")]
        poly: Option<String>,
        #[arg(long, requires_all = ["direction", "shape", "sample"])]
        config: Option<PathBuf>,
        #[arg(long)]
        direction: Option<String>,
        #[arg(long)]
        shape: Option<String>,
        #[arg(long)]
        sample: Option<String>,
    },
    /// CSV of sampled M x N complexities against MN.
    NivatScan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "M")]
        big_m: String,
        #[arg(long = "N")]
        big_n: String,
        #[arg(long, default_value = "500")]
        sample: String,
    },
    /// Complexity lower bounds implied by an annihilator.
    Bounds {
        #[arg(long)]
        poly: String,
        #[arg(long = "M")]
        big_m: u64,
        #[arg(long = "N")]
        big_n: u64,
        /// Also evaluate the two-direction bound for this pair.
        #[arg(long, num_args = 2, value_names = ["V1", "V2"])]
        pair: Option<Vec<String>>,
    },
    /// Check a periodic co-tiler of a tile.
    TileVerify {
        #[arg(long)]
        tile: String,
        /// Lattice generators, e.g. "(3,0)(0,1)".
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        residues: String,
        /// Window for the prime-size congruence check.
        #[arg(long, default_value = "60")]
        window: String,
    },
    /// Search for a periodic co-tiler by increasing lattice index.
    TileSearch {
        #[arg(long)]
        tile: String,
        #[arg(long, default_value_t = 12)]
        max_index: u64,
        #[arg(long, default_value = "60")]
        window: String,
    },
    /// Reproduce the reference examples and print PASS/FAIL per example.
    Examples,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code: 0 on success, 1 when a check fails, 2 on usage or input errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return 2;
    }
    match dispatch(cli.command) {
        Ok((text, ok)) => {
            let _ = out.write_all(text.as_bytes());
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var("NIVATK_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("NIVATK_THREADS must be a positive integer, got '{v}'"))?;
    // Fails only if a pool already exists, e.g. on repeated calls in tests.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn load(path: &PathBuf) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfiguration(format!("cannot read {}: {e}", path.display())))?;
    parse::parse_config_file(&text)
}

fn join(vs: &[IntVector]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

type Report = (String, bool);

fn dispatch(cmd: Command) -> Result<Report> {
    let mut s = String::new();
    let ok = match cmd {
        Command::Complexity { config, shape, sample } => {
            let c = load(&config)?.config;
            let shape = parse::parse_window(&shape, c.dim())?;
            let sample = parse::parse_window(&sample, c.dim())?;
            let r = pattern_complexity(&c, &shape, &sample)?;
            let _ = writeln!(s, "count={} exact={}", r.count, r.exact);
            true
        }
        Command::Annihilate {
            config,
            shape,
            sample,
            verify,
        } => {
            let c = load(&config)?.config;
            let shape = parse::parse_window(&shape, c.dim())?;
            let sample = parse::parse_window(&sample, c.dim())?;
            let verify = match verify {
                Some(v) => parse::parse_window(&v, c.dim())?,
                None => sample.clone(),
            };
            match find_annihilator(&c, &shape, &sample, &verify)? {
                Some(r) => {
                    let _ = writeln!(s, "patterns={} shape_size={}", r.distinct_patterns, r.shape.len());
                    let _ = writeln!(s, "g={}", r.g);
                    let _ = writeln!(s, "constant={}", r.constant);
                    let _ = writeln!(s, "f={}", r.f);
                    let _ = writeln!(s, "verified=true");
                    true
                }
                None => {
                    let n = count_patterns(&c, &shape, &sample, Some(shape.len()))?;
                    let _ = writeln!(s, "absent patterns>={n} shape_size={}", shape.len());
                    false
                }
            }
        }
        Command::Verify {
            config,
            poly,
            window,
            primes,
        } => {
            let c = load(&config)?.config;
            let f = parse::parse_polynomial(&poly, Some(c.dim()))?;
            let window = parse::parse_window(&window, c.dim())?;
            let a = annihilates(&f, &c, &window)?;
            let _ = writeln!(s, "annihilates={a}");
            let mut ok = a.holds();
            if ok && !primes.is_empty() {
                for e in verify_expansion(&f, &c, &primes, &window)? {
                    let exact = match &e.exact {
                        Some(x) => {
                            ok &= x.holds();
                            x.to_string()
                        }
                        None => "skipped".to_string(),
                    };
                    let mod_p = match &e.mod_p {
                        ModCheck::Holds => "holds".to_string(),
                        ModCheck::Fails { witness } => {
                            ok = false;
                            format!("fails at {witness}")
                        }
                    };
                    let _ = writeln!(
                        s,
                        "p={} above_bound={} expanded={} mod_p={}",
                        e.p, e.above_bound, exact, mod_p
                    );
                }
            }
            ok
        }
        Command::Search {
            config,
            max_factors,
            bound,
            window,
        } => {
            let c = load(&config)?.config;
            let window = parse::parse_window(&window, c.dim())?;
            let found = search_difference_annihilator(&c, max_factors, bound, &window)?;
            let periods: Vec<IntVector> = c
                .period_lattice()
                .filter(|l| l.is_full_rank())
                .map(|l| l.basis().to_vec())
                .unwrap_or_default();
            let class = periodicity_class(found.as_deref(), None, &periods);
            match &found {
                Some(vs) => {
                    let _ = writeln!(s, "vectors={}", join(vs));
                }
                None => {
                    let _ = writeln!(s, "vectors=none");
                }
            }
            let _ = writeln!(s, "class={} certain={}", class.class, class.certain);
            found.is_some()
        }
        Command::Decompose {
            config,
            vectors,
            core,
            halo,
        } => {
            let c = load(&config)?.config;
            let vectors = parse::parse_vectors(&vectors)?;
            let core = parse::parse_window(&core, c.dim())?;
            let halo = match halo {
                Some(h) => parse::parse_window(&h, c.dim())?,
                None => default_halo(&core, &vectors)?,
            };
            let d = decompose(&c, &vectors, &core, &halo)?;
            let _ = writeln!(
                s,
                "residual_check={} integral={} max_abs={}",
                d.residual_check,
                d.integral,
                d.max_abs()
            );
            for (v, p) in d.vectors.iter().zip(&d.components) {
                let m = p.values.iter().map(|x| x.abs()).max().unwrap_or_default();
                let _ = writeln!(s, "component {v} max_abs={m}");
            }
            d.residual_check
        }
        Command::Lines {
            poly,
            config,
            direction,
            shape,
            sample,
        } => {
            if let Some(poly) = poly {
                let f = parse::parse_polynomial(&poly, None)?;
                let lf = line_factorization(&f)?;
                let _ = writeln!(s, "newton_directions={}", join(&newton_polygon_directions(&f)?));
                let _ = writeln!(s, "line_directions={}", join(&lf.directions()));
                for (v, phi) in &lf.factors {
                    let _ = writeln!(s, "factor {v}: {phi}");
                }
                let _ = writeln!(s, "monomial={}", lf.monomial);
                let _ = writeln!(s, "remainder={}", lf.remainder);
                let _ = writeln!(s, "reconstructs={}", lf.product() == f);
            }
            if let (Some(config), Some(direction), Some(shape), Some(sample)) = (config, direction, shape, sample) {
                let c = load(&config)?.config;
                let v = parse::parse_vector(&direction)?;
                let shape = parse::parse_window(&shape, c.dim())?;
                let sample = parse::parse_window(&sample, c.dim())?;
                let census = line_pattern_census(&c, &shape, &v, &sample)?;
                let _ = writeln!(
                    s,
                    "anchor_lines={} disjoint_pattern_lines={}",
                    census.anchor_lines(),
                    census.disjoint_pattern_lines
                );
                for (w, k) in &census.lines {
                    let _ = writeln!(s, "line {w} patterns={k}");
                }
            }
            true
        }
        Command::NivatScan {
            config,
            big_m,
            big_n,
            sample,
        } => {
            let c = load(&config)?.config;
            let m = parse::parse_range(&big_m)?;
            let n = parse::parse_range(&big_n)?;
            let sample = parse::parse_window(&sample, c.dim())?;
            s = scan_csv(&nivat_scan(&c, m, n, &sample)?);
            true
        }
        Command::Bounds {
            poly,
            big_m,
            big_n,
            pair,
        } => {
            let f = parse::parse_polynomial(&poly, Some(2))?;
            let lf = line_factorization(&f)?;
            let r = corollary_report(&f, &lf, big_m, big_n)?;
            let _ = writeln!(s, "M={} N={} bbox=({},{})", r.big_m, r.big_n, r.bbox_f.0, r.bbox_f.1);
            let _ = writeln!(s, "directions={} (line-direction count {})", join(&r.directions), r.directions.len());
            for b in &r.bounds {
                let _ = write!(s, "{} value={}", b.label, b.value);
                if let Some((a, c)) = &b.pair {
                    let _ = write!(s, " pair={a} {c}");
                }
                if let Some(q) = &b.ratio {
                    let _ = write!(s, " ratio={q}");
                }
                let _ = writeln!(s, " conditional={}", b.conditional);
            }
            if let Some(pair) = pair {
                let v1 = parse::parse_vector(&pair[0])?;
                let v2 = parse::parse_vector(&pair[1])?;
                let _ = writeln!(s, "two-directions value={}", bound_two_directions(&v1, &v2, big_m, big_n)?);
            }
            true
        }
        Command::TileVerify {
            tile,
            lattice,
            residues,
            window,
        } => {
            let d = parse::parse_tile(&tile)?;
            let gens = parse::parse_vectors(&lattice)?;
            let co = PeriodicCoTiler::new(Lattice::new(d.dim(), gens)?, parse::parse_vectors(&residues)?)?;
            let window = parse::parse_window(&window, d.dim())?;
            tile_report(&mut s, &d, &co, &window)?
        }
        Command::TileSearch { tile, max_index, window } => {
            let d = parse::parse_tile(&tile)?;
            let window = parse::parse_window(&window, d.dim())?;
            match search_periodic_cotiler(&d, max_index)? {
                Some(co) => {
                    let _ = writeln!(s, "lattice={}", join(co.lattice.basis()));
                    let _ = writeln!(s, "residues={}", join(&co.residues));
                    tile_report(&mut s, &d, &co, &window)?
                }
                None => {
                    let _ = writeln!(s, "cotiler=none max_index={max_index}");
                    false
                }
            }
        }
        Command::Examples => {
            let mut all = true;
            for (name, r) in run_examples() {
                match r {
                    Ok((true, detail)) => {
                        let _ = writeln!(s, "PASS {name} {detail}");
                    }
                    Ok((false, detail)) => {
                        all = false;
                        let _ = writeln!(s, "FAIL {name} {detail}");
                    }
                    Err(e) => {
                        all = false;
                        let _ = writeln!(s, "FAIL {name} error: {e}");
                    }
                }
            }
            all
        }
    };
    Ok((s, ok))
}

fn tile_report(s: &mut String, d: &ClusterTile, co: &PeriodicCoTiler, window: &Window) -> Result<bool> {
    let check = verify_cotiler(d, co)?;
    let _ = writeln!(s, "cotiler={check}");
    let mut ok = check == CotilerCheck::Valid;
    if ok && d.len() >= 2 && (2..d.len()).all(|k| !d.len().is_multiple_of(k)) {
        let pc = prime_periodicity_check(d, co, window)?;
        let bad: Vec<IntVector> = pc.periods.iter().filter(|(_, v)| !v).map(|(w, _)| w.clone()).collect();
        let _ = writeln!(
            s,
            "p={} periods_checked={} periods_failed={}",
            pc.p,
            pc.periods.len(),
            if bad.is_empty() { "none".to_string() } else { join(&bad) }
        );
        let _ = writeln!(
            s,
            "congruence={}",
            match &pc.congruence {
                ModCheck::Holds => "holds".to_string(),
                ModCheck::Fails { witness } => format!("fails at {witness}"),
            }
        );
        ok &= pc.all_verified();
    }
    Ok(ok)
}

type ExampleOutcome = Result<(bool, String)>;

fn iv(x: &[i64]) -> IntVector {
    IntVector(x.to_vec())
}

/// The five reference checks, in order.
pub fn run_examples() -> Vec<(&'static str, ExampleOutcome)> {
    vec![
        ("two-lines-3d", example_two_lines()),
        ("prime-tile", example_prime_tile()),
        ("difference-search", example_search()),
        ("mechanical-sum", example_mechanical()),
        ("unbounded-components", example_unbounded()),
    ]
}

fn example_two_lines() -> ExampleOutcome {
    let n = 3;
    let c = catalog::two_lines(n)?;
    let shape = Window::cube(3, 0, n - 1)?;
    let count = count_patterns(&c, &shape, &Window::cube(3, -12, 9)?, None)?;
    let expected = (2 * n * n + 1) as usize;
    Ok((count == expected, format!("count={count} expected={expected} cube={}", n * n * n)))
}

fn example_prime_tile() -> ExampleOutcome {
    let d = catalog::tromino();
    let Some(co) = search_periodic_cotiler(&d, 12)? else {
        return Ok((false, "no co-tiler found".into()));
    };
    let valid = verify_cotiler(&d, &co)? == CotilerCheck::Valid;
    let pc = prime_periodicity_check(&d, &co, &Window::rect(&[60, 60])?)?;
    Ok((
        valid && pc.all_verified(),
        format!(
            "cotiler={} periods={}/{} congruence={}",
            if valid { "Valid" } else { "invalid" },
            pc.periods.iter().filter(|(_, ok)| *ok).count(),
            pc.periods.len(),
            if pc.congruence == ModCheck::Holds { "holds" } else { "fails" }
        ),
    ))
}

fn example_search() -> ExampleOutcome {
    let c = catalog::two_lines(3)?;
    let found = search_difference_annihilator(&c, 2, 1, &Window::cube(3, -8, 8)?)?;
    let mut want = vec![iv(&[1, 0, 0]), iv(&[0, 1, 0])];
    want.sort();
    Ok(match found {
        Some(mut vs) => {
            vs.sort();
            (vs == want, format!("vectors={}", join(&vs)))
        }
        None => (false, "vectors=none".into()),
    })
}

fn ex5() -> Result<Configuration> {
    Ok(catalog::mechanical_sum(QuadraticReal::sqrt(2)?))
}

fn ex5_poly() -> LaurentPolynomial {
    let mut f = LaurentPolynomial::one(2);
    for v in [iv(&[1, 0]), iv(&[0, 1]), iv(&[1, -1])] {
        f = &f * &LaurentPolynomial::difference(&v);
    }
    f
}

fn example_mechanical() -> ExampleOutcome {
    let c = ex5()?;
    let w = Window::rect(&[200, 200])?;
    let a = annihilates(&ex5_poly(), &c, &w)?;
    let binary = c.materialize(&w)?.values.iter().all(|&v| v == 0 || v == 1);
    Ok((
        a.holds() && binary,
        format!("annihilates={a} values_in_01={binary}"),
    ))
}

fn example_unbounded() -> ExampleOutcome {
    let c = ex5()?;
    let vectors = [iv(&[1, 0]), iv(&[0, 1]), iv(&[1, -1])];
    let mut maxima = Vec::new();
    for n in [20u64, 40] {
        let core = Window::rect(&[n, n])?;
        let d = decompose(&c, &vectors, &core, &default_halo(&core, &vectors)?)?;
        if !d.residual_check {
            return Ok((false, format!("residual check failed on {n}x{n}")));
        }
        maxima.push(d.max_abs());
    }
    Ok((
        maxima[1] > maxima[0],
        format!("max_abs 20x20={} 40x40={}", maxima[0], maxima[1]),
    ))
}
