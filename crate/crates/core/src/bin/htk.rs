//! Command-line front end: reads a problem spec, dispatches to the
//! library, and emits deterministic JSON (or SVG/ASCII pictures).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hypertoric::arrangement::Arrangement;
use hypertoric::corpus::{self, Bounds};
use hypertoric::polytope;
use hypertoric::quiver::{self, Ctx};
use hypertoric::render;
use hypertoric::report::RunReport;
use hypertoric::spec::ProblemSpec;
use hypertoric::arrangement;
use hypertoric::tilting;

#[derive(Parser)]
#[command(name = "htk", version, about = "combinatorial invariants of periodic hyperplane arrangements and their quiver algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline with all cross-checks; exit code 0 iff every check passes
    Analyze(CommonArgs),
    /// Chamber classes, adjacency quiver, smoothness
    Chambers(CommonArgs),
    /// Quadratic presentations of both algebras
    Quiver(CommonArgs),
    /// Graded dimension table via intersection-polytope h-vectors
    Ext(CommonArgs),
    /// Graded dimension tables via the closed form and the toric route
    Hilbert(CommonArgs),
    /// Euler-form reciprocity between the two Hilbert matrices
    KoszulCheck(CommonArgs),
    /// Tilting summands, monomial sections, endomorphism verification
    Tilting(CommonArgs),
    /// Picture of a rank-2 arrangement (SVG or ASCII)
    Render(CommonArgs),
    /// Brute-force truncated dimensions and agreement with the fast routes
    Oracle(CommonArgs),
    /// Sample reproducible smooth problem instances
    CorpusGenerate(CorpusArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
    Ascii,
}

#[derive(Args)]
struct CommonArgs {
    /// problem spec JSON file
    #[arg(long)]
    spec: PathBuf,
    /// truncation degree Q (overrides the spec)
    #[arg(long)]
    truncation: Option<usize>,
    /// seed for all pseudo-random choices (overrides the spec)
    #[arg(long)]
    seed: Option<u64>,
    /// output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// include wall-clock timings (breaks byte-for-byte determinism)
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    count: usize,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    k_max: usize,
    #[arg(long, default_value_t = 7)]
    p_max: i64,
    #[arg(long, default_value_t = 2)]
    entry_max: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

struct Session {
    spec: ProblemSpec,
    arr: Arrangement,
    q: usize,
    seed: u64,
    timings: Option<BTreeMap<String, u64>>,
}

impl Session {
    fn open(args: &CommonArgs) -> Result<Self, String> {
        let text = std::fs::read_to_string(&args.spec)
            .map_err(|e| format!("cannot read {}: {e}", args.spec.display()))?;
        let mut spec = ProblemSpec::from_json(&text).map_err(|e| e.to_string())?;
        if let Some(q) = args.truncation {
            spec.options.truncation = Some(q);
        }
        if let Some(s) = args.seed {
            spec.options.seed = Some(s);
        }
        let arr = spec.arrangement().map_err(|e| e.to_string())?;
        Ok(Session {
            q: spec.truncation(),
            seed: spec.seed(),
            arr,
            spec,
            timings: args.timings.then(BTreeMap::new),
        })
    }

    fn timed<T>(&mut self, name: &str, f: impl FnOnce(&Self) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        if let Some(t) = self.timings.as_mut() {
            t.insert(name.into(), start.elapsed().as_millis() as u64);
        }
        out
    }
}

fn emit(args: &CommonArgs, text: &str) -> Result<(), String> {
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn chambers_value(arr: &Arrangement, enm: &arrangement::Enumeration, seed: u64) -> Result<serde_json::Value, String> {
    let smooth = arr.is_smooth(seed).map_err(|e| e.to_string())?;
    let edges: Vec<_> = enm
        .edges()
        .iter()
        .map(|&(from, to, coordinate)| json!({"from": from, "to": to, "coordinate": coordinate}))
        .collect();
    Ok(json!({
        "classes": enm.classes,
        "edges": edges,
        "smooth": smooth.smooth,
        "bases_count": smooth.bases_count,
    }))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::CorpusGenerate(args) => {
            let bounds = Bounds {
                n_max: args.n_max,
                k_max: args.k_max,
                p_max: args.p_max,
                entry_max: args.entry_max,
            };
            let specs = corpus::corpus_generate(args.seed, args.count, &bounds)
                .map_err(|e| e.to_string())?;
            let text = serde_json::to_string_pretty(&specs).unwrap();
            match &args.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| e.to_string())?,
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Render(args) => {
            let s = Session::open(&args)?;
            let enm = s.arr.enumerate_classes();
            let text = match args.format {
                Format::Ascii => render::render_ascii(&s.arr, &enm).map_err(|e| e.to_string())?,
                _ => render::render_svg(&s.arr, &enm).map_err(|e| e.to_string())?,
            };
            emit(&args, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Analyze(args) => command_analyze(args),
        Cmd::Chambers(args) => {
            let s = Session::open(&args)?;
            let enm = s.arr.enumerate_classes();
            let value = chambers_value(&s.arr, &enm, s.seed)?;
            emit(&args, &serde_json::to_string_pretty(&value).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Quiver(args) => simple_report(args, "quiver", |s, report| {
            let enm = s.arr.enumerate_classes();
            let ctx = Ctx::new(&s.arr, &enm);
            let smooth = s.arr.is_smooth(s.seed).map_err(|e| e.to_string())?.smooth;
            for (name, pres) in [
                ("H", quiver::build_h(&ctx, smooth)),
                ("H_dual", quiver::build_h_dual(&ctx, smooth)),
            ] {
                let mut by_label: BTreeMap<&str, usize> = BTreeMap::new();
                for r in &pres.relations {
                    *by_label.entry(r.label).or_default() += 1;
                }
                report.add_result(
                    name,
                    "presentation",
                    &json!({
                        "arrows": enm.arrows.len(),
                        "base_dim": pres.base_dim,
                        "relations": by_label,
                        "nonsmooth_warning": pres.nonsmooth_warning,
                    }),
                );
            }
            Ok(())
        }),
        Cmd::Ext(args) => simple_report(args, "ext", |s, report| {
            let enm = s.arr.enumerate_classes();
            let ctx = Ctx::new(&s.arr, &enm);
            let dims = quiver::ext_dims_from_toric(&ctx, s.q, s.seed).map_err(|e| e.to_string())?;
            report.add_result("ext_dims", dims.route, &dims);
            Ok(())
        }),
        Cmd::Hilbert(args) => simple_report(args, "hilbert", |s, report| {
            let enm = s.arr.enumerate_classes();
            let ctx = Ctx::new(&s.arr, &enm);
            let hom = quiver::hom_dims_h(&ctx, s.q);
            report.add_result("hom_dims", hom.route, &hom);
            let ext = quiver::ext_dims_from_toric(&ctx, s.q, s.seed).map_err(|e| e.to_string())?;
            report.add_result("ext_dims", ext.route, &ext);
            Ok(())
        }),
        Cmd::KoszulCheck(args) => checked_report(args, "koszul-check", |s, report| {
            let enm = s.arr.enumerate_classes();
            let ctx = Ctx::new(&s.arr, &enm);
            let hom = quiver::hom_dims_h(&ctx, s.q);
            let ext = quiver::ext_dims_from_toric(&ctx, s.q, s.seed).map_err(|e| e.to_string())?;
            let outcome = quiver::koszulity_check(&ext, &hom, s.q);
            report.add_check(
                "reciprocity",
                outcome.is_ok(),
                outcome.err().map_or("identity holds".into(), |e| e.to_string()),
            );
            Ok(())
        }),
        Cmd::Tilting(args) => checked_report(args, "tilting", |s, report| {
            let enm = s.arr.enumerate_classes();
            let ctx = Ctx::new(&s.arr, &enm);
            let smooth = s.arr.is_smooth(s.seed).map_err(|e| e.to_string())?.smooth;
            let pres = quiver::build_h(&ctx, smooth);
            let summands = tilting::tilting_summands(&ctx, smooth);
            let sections: Vec<_> = enm
                .classes
                .iter()
                .enumerate()
                .flat_map(|(xi, cx)| {
                    enm.classes.iter().enumerate().map(move |(yi, cy)| {
                        let m = tilting::section(&cx.representative, &cy.representative);
                        json!({"from": xi, "to": yi, "monomial": m.to_string_pretty(), "degree": m.degree()})
                    })
                })
                .collect();
            let verification = tilting::verify_end_iso(&ctx, &pres);
            let dims = quiver::hom_dims_h(&ctx, s.q);
            let table = tilting::monomial_degree_table(&ctx, &dims);
            report.add_result("summands", "enumeration", &summands);
            report.add_result("sections", "monomial", &sections);
            report.add_result("degree_table", "closed-form", &table);
            report.add_check(
                "end_iso",
                verification.is_ok(),
                verification.map_or_else(|e| e.to_string(), |r| format!("{} relations verified", r.relations_checked)),
            );
            Ok(())
        }),
        Cmd::Oracle(args) => checked_report(args, "oracle", |s, report| {
            let enm = s.arr.enumerate_classes();
            let ctx = Ctx::new(&s.arr, &enm);
            let smooth = s.arr.is_smooth(s.seed).map_err(|e| e.to_string())?.smooth;
            let cap = quiver::default_cell_cap();
            let h = quiver::build_h(&ctx, smooth);
            let hd = quiver::build_h_dual(&ctx, smooth);
            let oh = quiver::truncated_dims_oracle(&ctx, &h, s.q, cap).map_err(|e| e.to_string())?;
            let od = quiver::truncated_dims_oracle(&ctx, &hd, s.q, cap).map_err(|e| e.to_string())?;
            let closed = quiver::hom_dims_h(&ctx, s.q);
            let toric = quiver::ext_dims_from_toric(&ctx, s.q, s.seed).map_err(|e| e.to_string())?;
            report.add_result("oracle_hom_dims", oh.route, &oh);
            report.add_result("oracle_ext_dims", od.route, &od);
            report.add_check(
                "hom-agreement",
                oh.entries == closed.entries,
                "oracle vs closed-form".into(),
            );
            report.add_check(
                "ext-agreement",
                od.entries == toric.entries,
                "oracle vs toric".into(),
            );
            Ok(())
        }),
    }
}

fn simple_report(
    args: CommonArgs,
    command: &str,
    body: impl FnOnce(&Session, &mut RunReport) -> Result<(), String>,
) -> Result<ExitCode, String> {
    let s = Session::open(&args)?;
    let mut report = RunReport::new(command, &s.spec);
    body(&s, &mut report)?;
    report.timings_ms = s.timings;
    emit(&args, &report.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn checked_report(
    args: CommonArgs,
    command: &str,
    body: impl FnOnce(&Session, &mut RunReport) -> Result<(), String>,
) -> Result<ExitCode, String> {
    let s = Session::open(&args)?;
    let mut report = RunReport::new(command, &s.spec);
    body(&s, &mut report)?;
    report.timings_ms = s.timings;
    let ok = report.pass();
    emit(&args, &report.to_json())?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn command_analyze(args: CommonArgs) -> Result<ExitCode, String> {
    let mut s = Session::open(&args)?;
    let mut report = RunReport::new("analyze", &s.spec);
    let q = s.q;
    let seed = s.seed;

    let enm = s.timed("enumerate", |s| s.arr.enumerate_classes());
    let smooth_report = s.arr.is_smooth(seed).map_err(|e| e.to_string())?;
    let smooth = smooth_report.smooth;
    report.add_result("chambers", "sweep", &chambers_value(&s.arr, &enm, seed)?);
    report.add_result("smooth", "perturbation", &smooth_report);
    report.add_check(
        "bases-bound",
        smooth_report.class_count <= smooth_report.bases_count,
        format!(
            "{} classes vs {} bases",
            smooth_report.class_count, smooth_report.bases_count
        ),
    );

    let ctx = Ctx::new(&s.arr, &enm);
    let pres_h = quiver::build_h(&ctx, smooth);
    let pres_hd = quiver::build_h_dual(&ctx, smooth);

    let duality = quiver::quadratic_duality_check(&ctx, &pres_h, &pres_hd);
    report.add_check(
        "duality",
        duality.is_ok(),
        duality.map_or_else(|e| e.to_string(), |d| format!("{} class pairs", d.pairs.len())),
    );

    if smooth {
        let start = Instant::now();
        let closed = quiver::hom_dims_h(&ctx, q);
        let toric = quiver::ext_dims_from_toric(&ctx, q, seed).map_err(|e| e.to_string())?;
        report.add_result("hom_dims", closed.route, &closed);
        report.add_result("ext_dims", toric.route, &toric);

        let reciprocity = quiver::koszulity_check(&toric, &closed, q);
        report.add_check(
            "reciprocity",
            reciprocity.is_ok(),
            reciprocity.err().map_or("identity holds".into(), |e| e.to_string()),
        );

        let cap = quiver::default_cell_cap();
        let oracle_q = q.min(4);
        let oh = quiver::truncated_dims_oracle(&ctx, &pres_h, oracle_q, cap).map_err(|e| e.to_string())?;
        let od = quiver::truncated_dims_oracle(&ctx, &pres_hd, oracle_q, cap).map_err(|e| e.to_string())?;
        let agree = (0..enm.classes.len()).all(|x| {
            (0..enm.classes.len()).all(|y| {
                (0..=oracle_q).all(|d| {
                    oh.entries[x][y][d] == closed.entries[x][y][d]
                        && od.entries[x][y][d] == toric.entries[x][y][d]
                })
            })
        });
        report.add_check(
            "oracle-agreement",
            agree,
            format!("both algebras to degree {oracle_q}"),
        );

        // every intersection polytope: Morse route vs face-ring route
        let mut toric_oracle_ok = true;
        let mut polys = 0usize;
        for cx in &enm.classes {
            for cy in &enm.classes {
                for w in s.arr.lifts_within_linf1(&cx.representative, &cy.key) {
                    let poly = s.arr.pair_polytope(&cx.representative, &w);
                    let graph = s.arr.vertex_graph(&cx.representative, &w);
                    if graph.is_empty() {
                        continue;
                    }
                    polys += 1;
                    let morse = polytope::h_vector_auto(&graph, seed).map_err(|e| e.to_string())?;
                    let face = polytope::sr_dims(&poly, &graph).map_err(|e| e.to_string())?;
                    if morse != face
                        || morse.iter().rev().ne(morse.iter())
                        || morse.iter().sum::<i64>() != graph.vertices.len() as i64
                    {
                        toric_oracle_ok = false;
                    }
                }
            }
        }
        report.add_check(
            "toric-oracle",
            toric_oracle_ok,
            format!("{polys} intersection polytopes"),
        );

        let end_iso = tilting::verify_end_iso(&ctx, &pres_h);
        report.add_check(
            "tilting-verification",
            end_iso.is_ok(),
            end_iso.map_or_else(|e| e.to_string(), |r| format!("{} relations verified", r.relations_checked)),
        );
        if let Some(t) = s.timings.as_mut() {
            t.insert("analyze-core".into(), start.elapsed().as_millis() as u64);
        }
    } else {
        report.add_result("non_smooth_parameter", "perturbation", &true);
        report.add_check(
            "non-smooth-stamp",
            true,
            "Koszulity, oracle and tilting checks not applicable".into(),
        );
    }

    report.timings_ms = s.timings;
    let ok = report.pass();
    emit(&args, &report.to_json())?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
