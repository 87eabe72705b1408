use std::fmt::Write;

use abelcay::families::{Degree3Columns, PUBLISHED_DEGREE3};
use abelcay::ratio;
use abelcay::search::proven_upper;
use abelcay::{
    bounds_report, density, make_dnm, minimum_distance_diagram_capped, na_search, nc_search,
    smith_normal_form, verify_witness, AbelianGroupSpec, CayleyDigraph, Error, HyperL, IntMatrix,
    QuotientGroup, SearchConfig, SearchResult,
};
use serde_json::{json, Value};

use crate::{Cli, Command, Format};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_SINGULAR: u8 = 2;
pub const EXIT_NOT_GENERATING: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure::usage(message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SingularMatrix => EXIT_SINGULAR,
            Error::NotGenerating { .. } => EXIT_NOT_GENERATING,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub struct Output {
    pub body: String,
    pub warnings: Vec<String>,
    pub code: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Output {
            body,
            warnings: Vec::new(),
            code: 0,
        }
    }
}

type CmdResult = Result<Output, Failure>;

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn unsupported(cmd: &str, format: Format) -> Failure {
    Failure::usage(format!("`{cmd}` does not support --format {format:?}").to_lowercase())
}

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Snf { matrix } => snf(cli, matrix),
        Command::Family { n, m } => family(cli, *n, *m),
        Command::Diameter { group, generators } => diameter(cli, group, generators),
        Command::Search {
            d,
            k,
            abelian,
            upper,
            max_witnesses,
            degenerate,
        } => {
            let cfg = SearchConfig {
                upper: *upper,
                max_witnesses: *max_witnesses,
                allow_degenerate: *degenerate,
                ..search_config(cli)
            };
            search(cli, *d, *k, *abelian, &cfg)
        }
        Command::Table { kmax, search_up_to } => table(cli, *kmax, *search_up_to),
        Command::Hyperl { matrix, mn, m, cap } => hyperl(cli, matrix.as_deref(), *mn, *m, *cap),
        Command::Bounds { d, k } => bounds(cli, *d, *k),
    }
}

fn search_config(cli: &Cli) -> SearchConfig {
    let mut cfg = SearchConfig {
        threads: cli.threads,
        ..SearchConfig::default()
    };
    if let Some(b) = cli.budget {
        cfg.budget = b;
    }
    cfg
}

fn snf(cli: &Cli, literal: &str) -> CmdResult {
    let m: IntMatrix = literal.parse()?;
    let snf = smith_normal_form(&m);
    if snf.is_singular() {
        return Err(Error::SingularMatrix.into());
    }
    let q = QuotientGroup::with_decomposition(m, snf.clone())?;
    let st = q.structure();
    let torsion: Vec<String> = st.torsion.iter().map(|t| t.to_string()).collect();
    let group = if torsion.is_empty() {
        "trivial".to_string()
    } else {
        torsion
            .iter()
            .map(|t| format!("Z{t}"))
            .collect::<Vec<_>>()
            .join(" x ")
    };
    match cli.format {
        Format::Text => {
            let s: Vec<String> = snf.s.iter().map(|x| x.to_string()).collect();
            let mut out = String::new();
            writeln!(out, "S = diag({})", s.join(", ")).unwrap();
            writeln!(out, "U =\n{}", snf.u).unwrap();
            writeln!(out, "V =\n{}", snf.v).unwrap();
            writeln!(out, "det = {}", snf.det).unwrap();
            writeln!(out, "invariant factors: {}", s.join(" ")).unwrap();
            writeln!(
                out,
                "group: {group} (order {}, rank {}, {})",
                st.order,
                st.rank,
                if st.cyclic { "cyclic" } else { "non-cyclic" }
            )
            .unwrap();
            Ok(Output::ok(out))
        }
        Format::Json => {
            let mut v = snf.to_json();
            v["invariant_factors"] = v["s"].clone();
            v["structure"] = json!({
                "order": st.order.to_string(),
                "rank": st.rank,
                "torsion": torsion,
                "cyclic": st.cyclic,
            });
            Ok(Output::ok(pretty(&v)))
        }
        f => Err(unsupported("snf", f)),
    }
}

fn family(cli: &Cli, n: u64, m: u64) -> CmdResult {
    let fam = make_dnm(n, m)?;
    let check = if cli.verify {
        Some(fam.verify()?)
    } else {
        None
    };
    let failed = check.as_ref().is_some_and(|c| !c.passed());
    let body = match cli.format {
        Format::Text => {
            let f = ratio::to_fraction_string;
            let mut out = String::new();
            writeln!(out, "D_{{{n},{m}}} = {}", fam.digraph).unwrap();
            writeln!(out, "matrix {}", fam.matrix.to_literal()).unwrap();
            writeln!(
                out,
                "predicted: order {}, diameter {}, density {}",
                fam.predicted_order,
                fam.predicted_diameter,
                f(&fam.predicted_density)
            )
            .unwrap();
            if let Some(c) = &check {
                writeln!(
                    out,
                    "measured:  order {}, diameter {}, density {}, {} at max distance",
                    c.measured_order,
                    c.measured_diameter,
                    f(&c.measured_density),
                    c.at_max_distance
                )
                .unwrap();
                writeln!(out, "{}", if c.passed() { "PASS" } else { "FAIL" }).unwrap();
            }
            out
        }
        Format::Json => pretty(&fam.to_json(check.as_ref())),
        Format::Dot => fam.digraph.to_dot()?,
        f => return Err(unsupported("family", f)),
    };
    Ok(Output {
        code: if failed { EXIT_USAGE } else { 0 },
        ..Output::ok(body)
    })
}

fn parse_generator(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|_| Failure::usage(format!("bad generator `{s}`")))
        })
        .collect()
}

fn diameter(cli: &Cli, group: &str, generators: &[String]) -> CmdResult {
    let group: AbelianGroupSpec = group.parse()?;
    let gens = generators
        .iter()
        .map(|g| parse_generator(g))
        .collect::<Result<Vec<_>, _>>()?;
    let g = CayleyDigraph::new(group, gens)?;
    if cli.format == Format::Dot {
        return Ok(Output::ok(g.to_dot()?));
    }
    let p = g.distance_profile()?;
    let dens = density(&g, &p)?;
    match cli.format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "{g}").unwrap();
            writeln!(out, "order {}, degree {}", p.order, g.degree()).unwrap();
            writeln!(out, "diameter {}", p.diameter).unwrap();
            writeln!(
                out,
                "distribution {}",
                p.counts
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            )
            .unwrap();
            writeln!(
                out,
                "density {} = {}",
                ratio::to_fraction_string(&dens),
                ratio::to_decimal_string(&dens, 5)
            )
            .unwrap();
            Ok(Output::ok(out))
        }
        Format::Json => {
            let mut v = g.profile_json(&p)?;
            v["group"] = json!(g.group().to_string());
            v["generators"] = json!(g.generators());
            Ok(Output::ok(pretty(&v)))
        }
        Format::Csv => {
            let mut out = String::from("distance,count\n");
            for (i, c) in p.counts.iter().enumerate() {
                writeln!(out, "{i},{c}").unwrap();
            }
            Ok(Output::ok(out))
        }
        Format::Dot => unreachable!(),
    }
}

fn search(cli: &Cli, d: u64, k: u64, abelian: bool, cfg: &SearchConfig) -> CmdResult {
    let r = if abelian {
        na_search(d, k, cfg)?
    } else {
        nc_search(d, k, cfg)?
    };
    if cli.verify {
        if let Some(w) = r
            .witnesses
            .iter()
            .find(|w| !verify_witness(&w.digraph(), k))
        {
            return Err(Failure::usage(format!(
                "witness {} failed re-verification",
                w.digraph()
            )));
        }
    }
    let name = if abelian { "NA" } else { "NC" };
    let body = match cli.format {
        Format::Text => search_text(name, &r),
        Format::Json => {
            let mut v = r.to_json();
            v["abelian"] = json!(abelian);
            v["budget_exceeded"] = json!(r.budget_exceeded);
            pretty(&v)
        }
        f => return Err(unsupported("search", f)),
    };
    let mut out = Output::ok(body);
    if r.budget_exceeded {
        out.warnings.push(format!(
            "budget of {} visits exhausted; result is a lower bound only",
            cfg.budget
        ));
        out.code = EXIT_BUDGET;
    }
    Ok(out)
}

fn search_text(name: &str, r: &SearchResult) -> String {
    let mut out = String::new();
    let status = if r.exhaustive {
        "exhaustive"
    } else if r.budget_exceeded {
        "budget exceeded"
    } else {
        "below proven ceiling"
    };
    writeln!(
        out,
        "{name}_{{{},{}}} >= {} ({status}; scan from {})",
        r.d, r.k, r.best_order, r.ceiling
    )
    .unwrap();
    if r.exhaustive {
        out = out.replacen(" >= ", " = ", 1);
    }
    writeln!(
        out,
        "explored {} generator sets, {} BFS visits",
        r.explored, r.visits
    )
    .unwrap();
    writeln!(
        out,
        "witnesses ({} of {}):",
        r.witnesses.len(),
        r.witness_count
    )
    .unwrap();
    for w in &r.witnesses {
        writeln!(out, "  {}", w.digraph()).unwrap();
    }
    out
}

struct TableRow {
    k: u64,
    cols: Degree3Columns,
    nc3: Option<u64>,
    source: &'static str,
}

fn table(cli: &Cli, kmax: u64, search_up_to: u64) -> CmdResult {
    if kmax < 1 {
        return Err(Failure::usage("table needs kmax >= 1"));
    }
    let cfg = search_config(cli);
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    for k in 1..=kmax {
        let cols = Degree3Columns::new(k);
        let published = PUBLISHED_DEGREE3.iter().find(|r| r.k == k).map(|r| r.nc3);
        let (nc3, source) = if k <= search_up_to {
            let r = nc_search(3, k, &cfg)?;
            if r.budget_exceeded {
                warnings.push(format!(
                    "k={k}: search budget exhausted, using published value"
                ));
                (published, "published")
            } else if r.exhaustive {
                (Some(r.best_order), "search")
            } else {
                (Some(r.best_order), "search (partial)")
            }
        } else {
            (published, "published")
        };
        if cli.verify && k == 7 {
            let g = CayleyDigraph::new(
                AbelianGroupSpec::cyclic(84)?,
                vec![vec![2], vec![9], vec![35]],
            )?;
            if !verify_witness(&g, 7) {
                warnings.push("k=7: witness Cay(Z84, {2,9,35}) failed".into());
            }
        }
        rows.push(TableRow {
            k,
            cols,
            nc3,
            source,
        });
    }
    let delta = |r: &TableRow| {
        r.nc3
            .map(|n| ratio::to_decimal_string_half_even(&Degree3Columns::density_of(r.k, n), 5))
            .unwrap_or_else(|| "-".into())
    };
    let nc = |r: &TableRow| r.nc3.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
    let body = match cli.format {
        Format::Text => {
            let mut out = format!(
                "{:>3} {:>8} {:>14} {:>14} {:>19} {:>15} {:>7}  {}\n",
                "k",
                "delta",
                "ceil(.084k^3)",
                "ceil(3/25k^3)",
                "floor(3/25(k+3)^3)",
                "floor((k+3)^3/9)",
                "NC_3,k",
                "source"
            );
            for r in &rows {
                writeln!(
                    out,
                    "{:>3} {:>8} {:>14} {:>14} {:>19} {:>15} {:>7}  {}",
                    r.k,
                    delta(r),
                    r.cols.ceil_0084_k3,
                    r.cols.ceil_3_25_k3,
                    r.cols.upper_bound,
                    r.cols.cube_over_9,
                    nc(r),
                    r.source
                )
                .unwrap();
            }
            out
        }
        Format::Csv => {
            let mut out = String::from(
                "k,delta,ceil_0084_k3,ceil_3_25_k3,floor_3_25_k3_3,floor_k3_3_9,nc3,source\n",
            );
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.k,
                    delta(r),
                    r.cols.ceil_0084_k3,
                    r.cols.ceil_3_25_k3,
                    r.cols.upper_bound,
                    r.cols.cube_over_9,
                    nc(r),
                    r.source
                )
                .unwrap();
            }
            out
        }
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|r| {
                    json!({
                        "k": r.k,
                        "delta": delta(r),
                        "ceil_0084_k3": r.cols.ceil_0084_k3.to_string(),
                        "ceil_3_25_k3": r.cols.ceil_3_25_k3.to_string(),
                        "floor_3_25_k3_3": r.cols.upper_bound.to_string(),
                        "floor_k3_3_9": r.cols.cube_over_9.to_string(),
                        "nc3": r.nc3,
                        "source": r.source,
                        "proven_upper": proven_upper(3, r.k),
                    })
                })
                .collect(),
        )),
        f => return Err(unsupported("table", f)),
    };
    Ok(Output {
        warnings,
        ..Output::ok(body)
    })
}

fn hyperl_json(l: &HyperL) -> Value {
    json!({
        "dim": l.dim(),
        "size": l.len(),
        "max_norm": l.max_norm,
        "max_attainers": l.max_attainers,
        "norm_counts": l.norm_counts(),
        "points": l.points,
    })
}

fn hyperl(cli: &Cli, literal: Option<&str>, mn: Option<u64>, m: u64, cap: u64) -> CmdResult {
    let matrix = match (literal, mn) {
        (Some(s), None) => s.parse::<IntMatrix>()?,
        (None, Some(n)) => abelcay::make_mnm(n, m)?,
        _ => return Err(Failure::usage("give a matrix literal or --mn N")),
    };
    let l = minimum_distance_diagram_capped(&matrix, cap)?;
    if cli.verify {
        let bfs = CayleyDigraph::from_matrix(&matrix)?.distance_profile()?;
        if bfs.diameter != l.max_norm || bfs.counts != l.norm_counts() {
            return Err(Failure::usage(format!(
                "diagram max norm {} disagrees with BFS diameter {}",
                l.max_norm, bfs.diameter
            )));
        }
    }
    let body = match cli.format {
        Format::Text => {
            let mut out = String::new();
            if l.dim() == 2 {
                out += &l.render_ascii()?;
            }
            writeln!(
                out,
                "{} points, max norm {} ({} attain it)",
                l.len(),
                l.max_norm,
                l.max_attainers
            )
            .unwrap();
            writeln!(
                out,
                "norm counts {}",
                l.norm_counts()
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            )
            .unwrap();
            out
        }
        Format::Csv => l.to_csv(),
        Format::Json => pretty(&hyperl_json(&l)),
        f => return Err(unsupported("hyperl", f)),
    };
    Ok(Output::ok(body))
}

fn bounds(cli: &Cli, d: u64, k: u64) -> CmdResult {
    let r = bounds_report(d, k)?;
    match cli.format {
        Format::Text => Ok(Output::ok(r.to_string())),
        Format::Json => Ok(Output::ok(pretty(&r.to_json()))),
        f => Err(unsupported("bounds", f)),
    }
}
