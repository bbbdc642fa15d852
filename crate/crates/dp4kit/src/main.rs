//! Command-line front end: every library operation as a subcommand with
//! JSON (default) or TSV output.  Exit codes: 0 success, 2 validation
//! error, 3 budget refusal.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use dp4::algebra::field::FieldSpec;
use dp4::census::{
    base_points, fiber_point_count, figure1_d1_check, section_height, section_search_partition,
    SearchBudget, SectionCandidate,
};
use dp4::error::Error as CoreError;
use dp4::fibration::{
    case_splitting, discriminant_profile, expected_dims_high_height, fiber_at, generate_model,
    numerology, rr_quartic_count, section_count_table, CaseSpec, FibrationModel, Parity,
};
use dp4::lattice::k3_class_arith;
use dp4::pencil::{classify_stability, lines_on_surface, projective_points, StabilityStatus};
use dp4::quintic::{invariants_quintic, xi_of_pencil};
use dp4kit::formats::{
    element_string, quintic_from_strings, GramTableJson, ModelJson, PencilJson, QuadricsJson,
};
use dp4kit::{EXIT_BUDGET, EXIT_VALIDATION, SCHEMA};

/// Exact invariants, classifications, and models of quartic del Pezzo
/// surfaces and their fibrations over the projective line.
#[derive(Parser)]
#[command(name = "dp4kit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the payload to a file instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Emit tab-separated tables instead of JSON where available.
    #[arg(long, global = true)]
    tsv: bool,
    /// Override budget guards.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Characteristic; omit for the rationals.
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree over the prime field.
    #[arg(long, default_value_t = 1)]
    k: usize,
}

impl FieldArgs {
    fn spec(&self) -> Result<FieldSpec> {
        match self.p {
            None => Ok(FieldSpec::rationals()),
            Some(p) => FieldSpec::extension_field(p, self.k).map_err(|e| anyhow!("{e}")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// GIT stability of a pencil of quadrics: the root multiplicity
    /// partition of its determinantal quintic and the probed singular
    /// points with ordinary/non-ordinary flags.
    Classify {
        /// Pencil JSON: {"field": ..., "Q0": [[...]], "Q1": [[...]]}.
        pencil: PathBuf,
    },
    /// Lines of projective 4-space contained in the base locus of a
    /// pencil, over an extension of the coefficient field.
    Lines {
        pencil: PathBuf,
        /// Relative extension degree to enumerate over.
        #[arg(long, default_value_t = 1)]
        ext: usize,
    },
    /// The degree 4, 8, 12 invariants of a binary quintic.
    Invariants {
        /// JSON array of six coefficients (of s^i t^(5-i)).
        quintic: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Weighted moduli point of the determinantal quintic of a pencil.
    Xi { pencil: PathBuf },
    /// Exact pairings of an integer combination in a labeled Gram table.
    Lattice {
        /// Gram table JSON: {"labels": [...], "gram": [[...]]}.
        #[arg(long)]
        table: PathBuf,
        /// Integer combination of labels, e.g. "2h - C + R'".
        #[arg(long)]
        expr: String,
    },
    /// Height identities: singular fibers, Euler characteristics, Hodge
    /// numbers, and parameter counts.
    Numerology {
        #[arg(long, required_unless_present = "all")]
        height: Option<i64>,
        #[arg(long, default_value_t = 2)]
        h11: i64,
        /// Print the table for heights 0..42 in steps of two.
        #[arg(long)]
        all: bool,
    },
    /// The eight-row splitting-type table with its symbolic heights.
    Cases,
    /// Generate a random fibration model over a finite field,
    /// deterministic from the seed, validated against its discriminant.
    Generate {
        #[arg(long)]
        case: u8,
        #[arg(long)]
        parity: String,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The pencil of quadrics cut out by a model over a base point.
    Fiber {
        model: PathBuf,
        /// Base point coordinates [t0 : t1], parsed in the model field.
        #[arg(long, default_value = "0")]
        t0: String,
        #[arg(long, default_value = "1")]
        t1: String,
    },
    /// Fiberwise discriminant of a model: chart polynomial, order at
    /// infinity, projective degree, squarefreeness.
    Discriminant { model: PathBuf },
    /// Point counts per fiber and an exhaustive bounded-degree section
    /// search with anticanonical heights.
    Census {
        model: PathBuf,
        /// Degree bound for the section search.
        #[arg(long, default_value_t = 0)]
        deg: usize,
        /// Worker threads for the search.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Also count fiber points over extensions up to this degree.
        #[arg(long, default_value_t = 1)]
        count_ext: usize,
    },
    /// Common zeros of four quadratic forms in projective 4-space over
    /// extensions up to a bound.
    Basepoints {
        /// JSON: {"field": ..., "quadrics": [four sparse polynomials]}.
        quads: PathBuf,
        #[arg(long, default_value_t = 1)]
        kmax: usize,
    },
    /// Expected dimension of degree-d surfaces through a space curve.
    Rrcount {
        #[arg(long)]
        deg: i64,
        #[arg(long, allow_hyphen_values = true)]
        genus: i64,
        #[arg(long, default_value_t = 4)]
        ambient_deg: i64,
    },
    /// Certify degree-one line sections of a height-ten model: lines on
    /// the ambient quadric meeting the base curve exactly once.
    Figure1 { model: PathBuf },
    /// High-height comparison: nodal anticanonical images against the
    /// fibration parameter counts, with contracted-section counts.
    ExpectedDims,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // budget refusals get their own exit code
            let is_budget = e.downcast_ref::<CoreError>().is_some_and(|c| {
                matches!(
                    c,
                    CoreError::BudgetExceeded { .. } | CoreError::RetryBudgetExhausted { .. }
                )
            });
            let payload = json!({
                "schema": SCHEMA,
                "error": e.to_string(),
            });
            eprintln!("{}", serde_json::to_string(&payload).unwrap());
            if is_budget {
                ExitCode::from(EXIT_BUDGET as u8)
            } else {
                ExitCode::from(EXIT_VALIDATION as u8)
            }
        }
    }
}

fn budget(cli: &Cli) -> SearchBudget {
    let max = std::env::var("DP4KIT_BUDGET")
        .ok()
        .and_then(|v| v.parse::<u128>().ok())
        .unwrap_or(1_000_000_000);
    SearchBudget {
        max_candidates: max,
        force: cli.force,
    }
}

fn emit(cli: &Cli, payload: Value, tsv: Option<String>) -> Result<()> {
    let text = match (&cli.tsv, tsv) {
        (true, Some(t)) => t,
        _ => serde_json::to_string_pretty(&payload)? + "\n",
    };
    match &cli.output {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_model(path: &PathBuf) -> Result<FibrationModel> {
    let j: ModelJson = read_json(path)?;
    j.to_model()
}

fn core(e: CoreError) -> anyhow::Error {
    anyhow::Error::new(e)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Classify { pencil } => {
            let p: PencilJson = read_json(pencil)?;
            let pencil = p.to_pencil()?;
            let verdict = classify_stability(&pencil).map_err(core)?;
            let status = match verdict.status {
                StabilityStatus::Stable => "stable",
                StabilityStatus::StrictlySemistable => "strictly-semistable",
                StabilityStatus::Unstable => "unstable",
                StabilityStatus::DegeneratePencil => "degenerate-pencil",
            };
            let points: Vec<Value> = verdict
                .singular_points
                .iter()
                .map(|s| {
                    json!({
                        "point": s.point.iter().map(element_string).collect::<Vec<_>>(),
                        "ext_degree": s.ext_degree,
                        "ordinary": s.ordinary,
                    })
                })
                .collect();
            emit(
                cli,
                json!({
                    "schema": SCHEMA,
                    "status": status,
                    "partition": verdict.partition,
                    "singular_points": points,
                }),
                None,
            )
        }
        Command::Lines { pencil, ext } => {
            let p: PencilJson = read_json(pencil)?;
            let pencil = p.to_pencil()?;
            let lines = lines_on_surface(&pencil, *ext).map_err(core)?;
            let rows: Vec<Value> = lines
                .iter()
                .map(|l| {
                    json!([
                        l.points[0].iter().map(element_string).collect::<Vec<_>>(),
                        l.points[1].iter().map(element_string).collect::<Vec<_>>(),
                    ])
                })
                .collect();
            let tsv = lines
                .iter()
                .map(|l| {
                    format!(
                        "{}\t{}",
                        l.points[0]
                            .iter()
                            .map(element_string)
                            .collect::<Vec<_>>()
                            .join(","),
                        l.points[1]
                            .iter()
                            .map(element_string)
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                })
                .collect::<Vec<_>>()
                .join("\n")
                + "\n";
            emit(
                cli,
                json!({
                    "schema": SCHEMA,
                    "count": lines.len(),
                    "ext_degree": ext,
                    "lines": rows,
                }),
                Some(tsv),
            )
        }
        Command::Invariants { quintic, field } => {
            let coeffs: Vec<serde_json::Value> = read_json(quintic)?;
            let spec = field.spec()?;
            let strings: Vec<String> = coeffs
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            let form = quintic_from_strings(&spec, &strings)?;
            let inv = invariants_quintic(&form).map_err(core)?;
            emit(
                cli,
                json!({
                    "schema": SCHEMA,
                    "I4": element_string(&inv.i4),
                    "I8": element_string(&inv.i8),
                    "I12": element_string(&inv.i12),
                    "semistable": !inv.is_zero(),
                }),
                None,
            )
        }
        Command::Xi { pencil } => {
            let p: PencilJson = read_json(pencil)?;
            let pencil = p.to_pencil()?;
            let point = xi_of_pencil(&pencil).map_err(core)?;
            let normalized: Vec<String> = point.normalized().iter().map(element_string).collect();
            emit(
                cli,
                json!({
                    "schema": SCHEMA,
                    "coords": point.coords.iter().map(element_string).collect::<Vec<_>>(),
                    "weights": [1, 2, 3],
                    "normalized": normalized,
                }),
                None,
            )
        }
        Command::Lattice { table, expr } => {
            let t: GramTableJson = read_json(table)?;
            let table = t.to_table()?;
            let arith = k3_class_arith(&table, expr).map_err(core)?;
            let mut tsv = String::from("pairing\tvalue\n");
            tsv.push_str(&format!("self\t{}\n", arith.self_intersection));
            for (label, value) in table.labels().iter().zip(arith.pairings.iter()) {
                tsv.push_str(&format!("{label}\t{value}\n"));
            }
            if let Some(g) = arith.genus {
                tsv.push_str(&format!("genus\t{g}\n"));
            }
            emit(
                cli,
                json!({
                    "schema": SCHEMA,
                    "expr": expr,
                    "coeffs": arith.coeffs,
                    "self_intersection": arith.self_intersection,
                    "labels": table.labels(),
                    "pairings": arith.pairings,
                    "genus": arith.genus,
                }),
                Some(tsv),
            )
        }
        Command::Numerology { height, h11, all } => {
            let rows: Vec<i64> = if *all {
                (0..=42).step_by(2).collect()
            } else {
                vec![height.unwrap()]
            };
            let reports: Result<Vec<Value>> = rows
                .iter()
                .map(|&h| {
                    let r = numerology(h, *h11).map_err(core)?;
                    Ok(json!({
                        "h": r.height,
                        "delta": r.singular_fibers,
                        "chi": r.euler,
                        "chiOmega1": r.chi_omega1,
                        "params": r.parameters,
                        "h11": r.h11,
                        "h12": r.h12,
                    }))
                })
                .collect();
            let reports = reports?;
            let tsv = {
                let mut s = String::from("h\tdelta\tchi\tchiOmega1\tparams\th11\th12\n");
                for r in &reports {
                    s.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                        r["h"], r["delta"], r["chi"], r["chiOmega1"], r["params"], r["h11"],
                        r["h12"]
                    ));
                }
                s
            };
            let payload = if *all {
                json!({"schema": SCHEMA, "rows": reports})
            } else {
                let mut single = reports[0].clone();
                single["schema"] = json!(SCHEMA);
                single
            };
            emit(cli, payload, Some(tsv))
        }
        Command::Cases => {
            let mut rows = Vec::new();
            let mut tsv = String::from("case\tparity\tV\theight\talpha\n");
            for case in 1..=5u8 {
                for parity in [Parity::Even, Parity::Odd] {
                    let c0 = CaseSpec { case, parity, n: 0 };
                    let row0 = case_splitting(&c0).map_err(core)?;
                    let offset = row0.height;
                    let height_formula = if offset == 0 {
                        "20n".to_string()
                    } else {
                        format!("20n+{offset}")
                    };
                    let alpha0 = row0.alpha;
                    let alpha_formula = format!("-(2n+{})", -alpha0);
                    let parity_name = match parity {
                        Parity::Even => "even",
                        Parity::Odd => "odd",
                    };
                    tsv.push_str(&format!(
                        "{case}\t{parity_name}\t{:?}\t{height_formula}\t{alpha_formula}\n",
                        row0.v.twists()
                    ));
                    rows.push(json!({
                        "case": case,
                        "parity": parity_name,
                        "v": row0.v.twists(),
                        "height": height_formula,
                        "alpha": alpha_formula,
                    }));
                }
            }
            emit(cli, json!({"schema": SCHEMA, "rows": rows}), Some(tsv))
        }
        Command::Generate {
            case,
            parity,
            n,
            field,
            seed,
        } => {
            let parity = match parity.as_str() {
                "even" => Parity::Even,
                "odd" => Parity::Odd,
                other => bail!("parity must be 'even' or 'odd', got '{other}'"),
            };
            let spec = field.spec()?;
            let c = CaseSpec::new(*case, parity, *n).map_err(core)?;
            let model = generate_model(&c, &spec, *seed).map_err(core)?;
            let j = ModelJson::from_model(&model);
            emit(cli, serde_json::to_value(&j)?, None)
        }
        Command::Fiber { model, t0, t1 } => {
            let m = load_model(model)?;
            let spec = m.spec().clone();
            let t0 = spec.parse_element(t0).map_err(core)?;
            let t1 = spec.parse_element(t1).map_err(core)?;
            let fiber = fiber_at(&m, &t0, &t1).map_err(core)?;
            let j = PencilJson::from_pencil(&fiber);
            emit(cli, serde_json::to_value(&j)?, None)
        }
        Command::Discriminant { model } => {
            let m = load_model(model)?;
            let prof = discriminant_profile(&m).map_err(core)?;
            emit(
                cli,
                json!({
                    "schema": SCHEMA,
                    "chart_coeffs": dp4kit::formats::unipoly_strings(&prof.poly),
                    "ord_infinity": prof.ord_infinity,
                    "projective_degree": prof.projective_degree,
                    "squarefree": prof.squarefree,
                    "expected_degree": 2 * m.height(),
                }),
                None,
            )
        }
        Command::Census {
            model,
            deg,
            threads,
            count_ext,
        } => {
            let started = std::time::Instant::now();
            let m = load_model(model)?;
            let spec = m.spec().clone();
            let b = budget(cli);
            // per-fiber point counts over the rational base points
            let mut counts: Vec<Value> = Vec::new();
            let mut tsv = String::from("t0\tt1\tk\tcount\n");
            for t in projective_points(&spec, 1).map_err(core)? {
                for k in 1..=*count_ext {
                    let n = fiber_point_count(&m, &t[0], &t[1], k).map_err(core)?;
                    tsv.push_str(&format!(
                        "{}\t{}\t{}\t{}\n",
                        element_string(&t[0]),
                        element_string(&t[1]),
                        k,
                        n
                    ));
                    counts.push(json!({
                        "t": [element_string(&t[0]), element_string(&t[1])],
                        "k": k,
                        "count": n,
                    }));
                }
            }
            // partitioned section search, merged deterministically
            let parts = (*threads).max(1) as u128;
            let mut sections: Vec<SectionCandidate> = if parts == 1 {
                dp4::census::section_search(&m, *deg, &b).map_err(core)?.sections
            } else {
                let mut all: Vec<SectionCandidate> = Vec::new();
                let results: Vec<Result<Vec<SectionCandidate>, CoreError>> =
                    std::thread::scope(|scope| {
                        let mut handles = Vec::new();
                        for part in 0..parts {
                            let m = &m;
                            let b = &b;
                            handles.push(scope.spawn(move || {
                                section_search_partition(m, *deg, part, parts, b)
                                    .map(|r| r.sections)
                            }));
                        }
                        handles.into_iter().map(|h| h.join().unwrap()).collect()
                    });
                for r in results {
                    all.extend(r.map_err(core)?);
                }
                all
            };
            sections.sort();
            sections.dedup();
            eprintln!(
                "census: {} sections at degree <= {} in {} ms",
                sections.len(),
                deg,
                started.elapsed().as_millis()
            );
            let section_rows: Result<Vec<Value>> = sections
                .iter()
                .map(|s| {
                    let h = section_height(&m, s).map_err(core)?;
                    Ok(json!({
                        "polys": s.polys.iter().map(dp4kit::formats::unipoly_strings).collect::<Vec<_>>(),
                        "degree": s.degree(),
                        "height": h,
                    }))
                })
                .collect();
            emit(
                cli,
                json!({
                    "schema": SCHEMA,
                    "per_fiber_counts": counts,
                    "degree_bound": deg,
                    "sections": section_rows?,
                    "complete": true,
                }),
                Some(tsv),
            )
        }
        Command::Basepoints { quads, kmax } => {
            let q: QuadricsJson = read_json(quads)?;
            let (_, forms) = q.to_forms()?;
            let pts = base_points(&forms, *kmax, &budget(cli)).map_err(core)?;
            let rows: Vec<Value> = pts
                .iter()
                .map(|p| {
                    json!({
                        "point": p.point.iter().map(element_string).collect::<Vec<_>>(),
                        "ext_degree": p.ext_degree,
                        "reduced": p.reduced,
                    })
                })
                .collect();
            emit(
                cli,
                json!({"schema": SCHEMA, "count": pts.len(), "points": rows}),
                None,
            )
        }
        Command::Rrcount {
            deg,
            genus,
            ambient_deg,
        } => {
            let value = rr_quartic_count(*deg, *genus, *ambient_deg);
            emit(
                cli,
                json!({
                    "schema": SCHEMA,
                    "deg": deg,
                    "genus": genus,
                    "ambient_deg": ambient_deg,
                    "count": value,
                }),
                None,
            )
        }
        Command::Figure1 { model } => {
            let m = load_model(model)?;
            let report = figure1_d1_check(&m, &budget(cli)).map_err(core)?;
            // the parameter-count table for section degrees: (2d-1, d+1)
            let table: Vec<Value> = (0..=4i64)
                .map(|d| {
                    let (secancy, params) = section_count_table(d);
                    json!({"degree": d, "secancy": secancy, "parameters": params})
                })
                .collect();
            let lines: Vec<Value> = report
                .verified_sections
                .iter()
                .map(|l| {
                    json!({
                        "points": [
                            l.points[0].iter().map(element_string).collect::<Vec<_>>(),
                            l.points[1].iter().map(element_string).collect::<Vec<_>>(),
                        ],
                        "secancy": l.secancy,
                    })
                })
                .collect();
            emit(
                cli,
                json!({
                    "schema": SCHEMA,
                    "lines_on_quadric": report.lines_on_quadric,
                    "lines_meeting_curve_once": report.lines_meeting_curve_once,
                    "rejected_disjoint": report.rejected_disjoint,
                    "verified_sections": lines,
                    "parameter_table": table,
                }),
                None,
            )
        }
        Command::ExpectedDims => {
            let rows = expected_dims_high_height();
            let mut tsv = String::from("height\tcontracted\tvariety_dim\tfibration_dim\n");
            for r in &rows {
                tsv.push_str(&format!(
                    "{}\t{}\t{}\t{}\n",
                    r.height,
                    r.contracted_sections,
                    r.variety_dim.map_or("-".into(), |v| v.to_string()),
                    r.fibration_dim
                ));
            }
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "height": r.height,
                        "contracted_sections": r.contracted_sections,
                        "variety_dim": r.variety_dim,
                        "fibration_dim": r.fibration_dim,
                    })
                })
                .collect();
            emit(cli, json!({"schema": SCHEMA, "rows": json_rows}), Some(tsv))
        }
    }
}

