//! Batch front-end: build a configured model, run analyses, emit JSON
//! reports and SVG diagrams.
//!
//! Exit codes: 0 all requested checks passed, 1 usage/config error,
//! 2 checks ran and some failed, 3 engine failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use twistlab::analysis::syndrome;
use twistlab::cocycle::Cocycle;
use twistlab::config::RunConfig;
use twistlab::group::FiniteAbelianGroup;
use twistlab::lattice::Axis;
use twistlab::operator::LatticeOperator;
use twistlab::report::{execute, Report};
use twistlab::site::SiteOperator;
use twistlab::svg::render;

const USAGE: &str = "usage: twistlab <command> [config.toml] [options]

commands:
  run            run every analysis listed in the config
  check-commute  commutation sweep only
  gsd            stabilizer analysis (ground-state degeneracy)
  logicals       loop-operator inventory
  syndrome       single-operator excitation syndromes
  confine        confinement scans
  braid          braiding phases
  boundaries     boundary condensation table
  fractal        fractal symmetry checks
  peps-verify    tensor-network identities
  oracles        brute-force cross-checks of the degeneracy
  render         write SVG diagrams for the configured model
  group-show     print group and cocycle tables (no config needed)

options:
  --trace-budget N   cap on trace-oracle assignments
  --dense-budget N   cap on dense-oracle Hilbert dimension
  --jobs N           accepted for compatibility; runs are deterministic
  --seed N           affects nothing but sampling order in property tests
  --report PATH      override the report output path
  --svg-dir DIR      override the diagram output directory
  --factors LIST     (group-show) comma-separated cyclic factors
  --cocycle NAME     (group-show) canonical_z22 | trivial
";

struct Options {
    config_path: Option<PathBuf>,
    trace_budget: Option<u128>,
    dense_budget: Option<u128>,
    report: Option<PathBuf>,
    svg_dir: Option<PathBuf>,
    factors: Vec<u32>,
    cocycle: String,
}

fn parse_options(args: &[String]) -> Result<Options, String> {
    let mut opts = Options {
        config_path: None,
        trace_budget: None,
        dense_budget: None,
        report: None,
        svg_dir: None,
        factors: vec![2, 2],
        cocycle: "canonical_z22".into(),
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--trace-budget" => {
                opts.trace_budget = Some(
                    it.next()
                        .ok_or("--trace-budget needs a value")?
                        .parse()
                        .map_err(|e| format!("trace budget: {e}"))?,
                )
            }
            "--dense-budget" => {
                opts.dense_budget = Some(
                    it.next()
                        .ok_or("--dense-budget needs a value")?
                        .parse()
                        .map_err(|e| format!("dense budget: {e}"))?,
                )
            }
            "--jobs" | "--seed" => {
                it.next().ok_or("option needs a value")?;
            }
            "--report" => opts.report = Some(it.next().ok_or("--report needs a path")?.into()),
            "--svg-dir" => opts.svg_dir = Some(it.next().ok_or("--svg-dir needs a path")?.into()),
            "--factors" => {
                let v = it.next().ok_or("--factors needs a list")?;
                opts.factors = v
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|e| format!("factor: {e}")))
                    .collect::<Result<_, _>>()?;
            }
            "--cocycle" => opts.cocycle = it.next().ok_or("--cocycle needs a name")?.clone(),
            other if !other.starts_with("--") && opts.config_path.is_none() => {
                opts.config_path = Some(other.into());
            }
            other => return Err(format!("unknown option {other:?}")),
        }
    }
    Ok(opts)
}

fn load_config(opts: &Options) -> Result<RunConfig, String> {
    let path = opts
        .config_path
        .as_ref()
        .ok_or("missing config file argument")?;
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut cfg = RunConfig::from_toml(&text).map_err(|e| e.to_string())?;
    if let Some(t) = opts.trace_budget {
        cfg.budget.trace = t;
    }
    if let Some(d) = opts.dense_budget {
        cfg.budget.dense = d;
    }
    if let Some(r) = &opts.report {
        cfg.output.report = Some(r.display().to_string());
    }
    if let Some(s) = &opts.svg_dir {
        cfg.output.svg_dir = Some(s.display().to_string());
    }
    Ok(cfg)
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), String> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(|e| format!("{}: {e}", tmp.display()))?;
    fs::rename(&tmp, path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(report: &Report, cfg: &RunConfig) -> Result<(), String> {
    for (name, outcome) in &report.analyses {
        println!("{} {}", if outcome.passed { "PASS" } else { "FAIL" }, name);
    }
    let json = report.to_json();
    match &cfg.output.report {
        Some(path) => {
            write_atomic(Path::new(path), &json)?;
            println!("report written to {path}");
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_render(cfg: &RunConfig) -> Result<(), String> {
    let model = cfg.build().map_err(|e| e.to_string())?;
    let dir = cfg
        .output
        .svg_dir
        .clone()
        .unwrap_or_else(|| "diagrams".into());
    fs::create_dir_all(&dir).map_err(|e| format!("{dir}: {e}"))?;
    for (name, svg) in render(&model, None, None) {
        write_atomic(&Path::new(&dir).join(&name), &svg)?;
    }
    // one probe syndrome diagram for 2D models
    if model.lattice.dims() == 2 {
        let g0 = model.group().clone();
        if let Some(e) = model.lattice.edge([1, 1, 0], Axis::Y) {
            let op = LatticeOperator::from_sites(
                &g0,
                [(
                    e,
                    SiteOperator::x_alpha_bar(model.alpha(), twistlab::group::GroupElement(1)),
                )],
            );
            if let Ok(s) = syndrome(&model, &op) {
                for (name, svg) in render(&model, Some(&op), Some(&s)) {
                    write_atomic(&Path::new(&dir).join(format!("syndrome_{name}")), &svg)?;
                }
            }
        }
    }
    println!("diagrams written to {dir}");
    Ok(())
}

fn cmd_group_show(opts: &Options) -> Result<(), String> {
    let group = FiniteAbelianGroup::new(&opts.factors);
    let cocycle = match opts.cocycle.as_str() {
        "canonical_z22" => {
            if opts.factors != vec![2, 2] {
                return Err("canonical_z22 needs --factors 2,2".into());
            }
            Cocycle::canonical_z2z2()
        }
        "trivial" => Cocycle::trivial(group.clone()),
        other => return Err(format!("unknown cocycle {other:?}")),
    };
    println!("group Z_{:?}, elements in index order:", opts.factors);
    for g in group.elements() {
        println!("  {:?}", group.tuple(g));
    }
    println!("cocycle table (rows g, columns h, phases as fractions of a turn):");
    for g in group.elements() {
        let row: Vec<String> = group
            .elements()
            .map(|h| cocycle.value(g, h).to_string())
            .collect();
        println!("  {}", row.join("  "));
    }
    println!("slant characters:");
    for g in group.elements() {
        let chi = cocycle.slant(g).map_err(|e| e.to_string())?;
        println!("  g={:?} -> {:?}", group.tuple(g), group.irrep_tuple(chi));
    }
    let k = cocycle.kernel_subgroup().map_err(|e| e.to_string())?;
    println!(
        "slant kernel order {}, image subgroup order {}",
        k.order(),
        cocycle.image_subgroup().map_err(|e| e.to_string())?.len()
    );
    Ok(())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(command) = args.first().cloned() else {
        eprintln!("{USAGE}");
        return ExitCode::from(1);
    };
    let opts = match parse_options(&args[1..]) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}\n{USAGE}");
            return ExitCode::from(1);
        }
    };
    if command == "group-show" {
        return match cmd_group_show(&opts) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }
    let mut cfg = match load_config(&opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}\n{USAGE}");
            return ExitCode::from(1);
        }
    };
    let focused = |name: &str| vec![name.to_string()];
    match command.as_str() {
        "run" => {}
        "check-commute" => cfg.analysis.run = focused("commutation"),
        "gsd" => cfg.analysis.run = focused("gsd"),
        "logicals" => cfg.analysis.run = focused("logicals"),
        "syndrome" => cfg.analysis.run = focused("syndromes"),
        "confine" => cfg.analysis.run = focused("confinement"),
        "braid" => cfg.analysis.run = focused("braiding"),
        "boundaries" => cfg.analysis.run = focused("condensation"),
        "fractal" => cfg.analysis.run = focused("fractal"),
        "peps-verify" => cfg.analysis.run = focused("peps"),
        "oracles" => cfg.analysis.run = focused("oracles"),
        "render" => {
            return match cmd_render(&cfg) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        other => {
            eprintln!("unknown command {other:?}\n{USAGE}");
            return ExitCode::from(1);
        }
    }
    match execute(&cfg) {
        Ok(report) => {
            if let Err(e) = emit(&report, &cfg) {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("engine error: {e}");
            ExitCode::from(3)
        }
    }
}
