//! Command line driver: parses JSON documents, dispatches the library
//! analyses, and emits deterministic text or JSON reports.
//!
//! Exit codes: 0 when the analysis ran and every requested property
//! holds, 1 when a property fails (the report names a witness), 2 on
//! input or usage errors (reports point at the offending JSON path).
//! Independent sub-analyses are assembled strictly in input order, and
//! two runs on identical inputs produce identical bytes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use cartan_core::algebra::{
    conv, i_norm, is_masa, matrix_model, reduced_norm, star, AlgebraContext,
};
use cartan_core::cocycle::Cocycle2;
use cartan_core::groupoid::FiniteGroupoid;
use cartan_core::io::{
    cartan_pair_to_json, cocycle_groupoid_field, complex_to_json, matrix_model_to_json,
    parse_cartan_pair, parse_cocycle, parse_graph, parse_groupoid, parse_section, DocRef,
    IoError,
};
use cartan_core::symbolic::{
    condition_k, condition_l, dr_arrows_at_depth, essential_freeness, has_no_loops,
    has_two_first_returns, no_exit_cycles, Graph,
};
use cartan_core::util::{fmt_complex, sig12};
use cartan_core::weyl::{
    alpha_of, kernel_commutant_check, masa_check, reconstruct, roundtrip_check,
    separation_check, unique_extension_analysis, Element, NormalizerElement, WeylError,
};

#[derive(Parser)]
#[command(name = "cartan", version, about = "Groupoid, graph, and Cartan pair analyses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Numeric tolerance override, in (0, 1e-2].
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the groupoid axioms of one or more documents.
    Validate {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Orbits, principality, and isotropy of a groupoid document.
    GroupoidAnalyze { input: PathBuf },
    /// Cycle conditions of a graph document.
    GraphCheck {
        input: PathBuf,
        /// Comma-separated subset of L, K, loops (default: all three).
        #[arg(long)]
        conditions: Option<String>,
        /// Check essential freeness for the exponent pair m,n.
        #[arg(long)]
        free: Option<String>,
        /// Depth for the diagonal-restricted arrow enumeration.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Build the convolution algebra of a cocycle document and export
    /// its matrix model.
    AlgebraBuild { input: PathBuf },
    /// Norms of a section document over a cocycle document.
    AlgebraNorm {
        input: PathBuf,
        /// Cocycle document supplying the groupoid and twist.
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Reconstruct the groupoid and twist of a pair document.
    CartanReconstruct { input: PathBuf },
    /// Full round trip: convolution model of a cocycle document,
    /// reconstruction, and comparison with the input.
    Roundtrip { input: PathBuf },
    /// Verify the 2-cocycle identity of a cocycle document.
    CocycleCheck { input: PathBuf },
}

/// A report section: ordered key/value lines with parallel text and
/// JSON renderings.
struct Section_ {
    title: String,
    lines: Vec<(String, String, Value)>,
}

impl Section_ {
    fn new(title: impl Into<String>) -> Self {
        Section_ { title: title.into(), lines: Vec::new() }
    }

    fn put(&mut self, key: &str, text: String, value: Value) {
        self.lines.push((key.to_string(), text, value));
    }

    fn text(&mut self, key: &str, s: impl Into<String>) {
        let s = s.into();
        self.put(key, s.clone(), Value::String(s));
    }

    fn flag(&mut self, key: &str, b: bool) {
        self.put(key, b.to_string(), Value::Bool(b));
    }

    fn count(&mut self, key: &str, n: usize) {
        self.put(key, n.to_string(), json!(n));
    }

    fn num(&mut self, key: &str, v: f64) {
        let v = sig12(v);
        self.put(key, format!("{v}"), json!(v));
    }

    fn complex(&mut self, key: &str, z: Complex64) {
        self.put(key, fmt_complex(z), complex_to_json(z));
    }

    fn list(&mut self, key: &str, items: &[String]) {
        self.put(key, format!("[{}]", items.join(", ")), json!(items));
    }
}

struct Report {
    command: &'static str,
    sections: Vec<Section_>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report { command, sections: Vec::new() }
    }

    fn section(&mut self, title: impl Into<String>) -> &mut Section_ {
        self.sections.push(Section_::new(title));
        self.sections.last_mut().unwrap()
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = format!("command: {}\n", self.command);
                for s in &self.sections {
                    out.push_str(&format!("== {}\n", s.title));
                    for (k, t, _) in &s.lines {
                        out.push_str(&format!("{k}: {t}\n"));
                    }
                }
                out
            }
            Format::Json => {
                let sections: Vec<Value> = self
                    .sections
                    .iter()
                    .map(|s| {
                        let data: Vec<Value> =
                            s.lines.iter().map(|(k, _, v)| json!([k, v])).collect();
                        json!({ "title": s.title, "data": data })
                    })
                    .collect();
                let doc = json!({
                    "schema": "1",
                    "command": self.command,
                    "sections": sections,
                });
                let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
                out.push('\n');
                out
            }
        }
    }
}

/// Input or usage failure: rendered as a structured report, exit 2.
struct UsageError {
    context: String,
    message: String,
}

impl UsageError {
    fn io(file: &Path, e: IoError) -> Self {
        UsageError {
            context: format!("{}{}", file.display(), e.path),
            message: e.message,
        }
    }
}

type CmdResult = Result<(Report, bool), (Report, UsageError)>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let tolerance = match cli.tolerance {
        None => 1e-8,
        Some(t) if t > 0.0 && t <= 1e-2 => t,
        Some(t) => {
            let mut report = Report::new("error");
            let s = report.section("usage error");
            s.text("flag", "--tolerance");
            s.num("value", t);
            s.text("message", "tolerance must lie in (0, 1e-2]");
            print!("{}", report.render(format));
            return ExitCode::from(2);
        }
    };

    let result: CmdResult = match &cli.command {
        Command::Validate { inputs } => cmd_validate(inputs),
        Command::GroupoidAnalyze { input } => cmd_groupoid_analyze(input),
        Command::GraphCheck { input, conditions, free, depth } => {
            cmd_graph_check(input, conditions.as_deref(), free.as_deref(), *depth)
        }
        Command::AlgebraBuild { input } => cmd_algebra_build(input),
        Command::AlgebraNorm { input, cocycle } => cmd_algebra_norm(input, cocycle, tolerance),
        Command::CartanReconstruct { input } => cmd_cartan_reconstruct(input),
        Command::Roundtrip { input } => cmd_roundtrip(input, tolerance),
        Command::CocycleCheck { input } => cmd_cocycle_check(input),
    };

    match result {
        Ok((report, all_hold)) => {
            print!("{}", report.render(format));
            ExitCode::from(if all_hold { 0 } else { 1 })
        }
        Err((mut report, e)) => {
            let s = report.section("input error");
            s.text("at", e.context);
            s.text("message", e.message);
            print!("{}", report.render(format));
            ExitCode::from(2)
        }
    }
}

fn load_json(file: &Path) -> Result<Value, UsageError> {
    let raw = std::fs::read_to_string(file).map_err(|e| UsageError {
        context: file.display().to_string(),
        message: format!("cannot read file: {e}"),
    })?;
    serde_json::from_str(&raw).map_err(|e| UsageError {
        context: file.display().to_string(),
        message: format!("invalid JSON: {e}"),
    })
}

fn load_groupoid(file: &Path) -> Result<FiniteGroupoid, UsageError> {
    let doc = load_json(file)?;
    parse_groupoid(&doc, "").map_err(|e| UsageError::io(file, e))
}

/// Loads a cocycle document; a string "groupoid" field is a path
/// resolved relative to the document's directory.
fn load_cocycle_doc(file: &Path) -> Result<(FiniteGroupoid, Cocycle2), UsageError> {
    let doc = load_json(file)?;
    let g = match cocycle_groupoid_field(&doc, "").map_err(|e| UsageError::io(file, e))? {
        DocRef::Path(rel) => {
            let base = file.parent().unwrap_or(Path::new("."));
            load_groupoid(&base.join(rel))?
        }
        DocRef::Inline(v) => {
            parse_groupoid(v, "/groupoid").map_err(|e| UsageError::io(file, e))?
        }
    };
    let violations = g.validate();
    if !violations.is_empty() {
        return Err(UsageError {
            context: format!("{}/groupoid", file.display()),
            message: format!("groupoid axioms fail: {}", violations[0]),
        });
    }
    let s = parse_cocycle(&doc, &g, "").map_err(|e| UsageError::io(file, e))?;
    Ok((g, s))
}

fn describe_groupoid(s: &mut Section_, g: &FiniteGroupoid) {
    s.count("units", g.n_units());
    s.count("arrows", g.n_arrows());
}

fn cmd_validate(inputs: &[PathBuf]) -> CmdResult {
    let mut report = Report::new("validate");
    let mut all_hold = true;
    for input in inputs {
        let doc = match load_json(input) {
            Ok(d) => d,
            Err(e) => return Err((report, e)),
        };
        let g = match parse_groupoid(&doc, "") {
            Ok(g) => g,
            Err(e) => return Err((report, UsageError::io(input, e))),
        };
        let s = report.section(format!("input {}", input.display()));
        describe_groupoid(s, &g);
        let violations = g.validate();
        s.count("axiom violations", violations.len());
        for (i, v) in violations.iter().enumerate() {
            s.text(&format!("violation {i}"), v.to_string());
        }
        s.text("result", if violations.is_empty() { "pass" } else { "fail" });
        all_hold &= violations.is_empty();
    }
    Ok((report, all_hold))
}

fn cmd_groupoid_analyze(input: &Path) -> CmdResult {
    let mut report = Report::new("groupoid-analyze");
    let g = match load_groupoid(input) {
        Ok(g) => g,
        Err(e) => return Err((report, e)),
    };
    let s = report.section(format!("input {}", input.display()));
    describe_groupoid(s, &g);
    let violations = g.validate();
    s.count("axiom violations", violations.len());
    if !violations.is_empty() {
        s.text("witness", violations[0].to_string());
        return Ok((report, false));
    }
    let orbits = g.orbits();
    s.count("orbits", orbits.len());
    for (i, orbit) in orbits.iter().enumerate() {
        let names: Vec<String> =
            orbit.iter().map(|&u| g.unit_name(u).to_string()).collect();
        s.list(&format!("orbit {i}"), &names);
    }
    s.flag("principal", g.is_principal());
    s.flag("essentially principal", g.is_essentially_principal());
    s.flag("effective", g.is_effective());
    s.count("isotropy arrows off units", {
        g.isotropy_bundle().iter().filter(|&&a| !g.is_unit_arrow(a)).count()
    });
    Ok((report, true))
}

fn edge_list(g: &Graph, cycle: &[u32]) -> Vec<String> {
    cycle.iter().map(|&e| g.edge(e).id.clone()).collect()
}

/// Some directed cycle, as edge ids, if the graph has one.
fn find_cycle(g: &Graph) -> Option<Vec<String>> {
    // Colors: 0 unseen, 1 on stack, 2 done. Edge stack rebuilds the cycle.
    let n = g.n_vertices();
    let mut color = vec![0u8; n];
    for start in 0..n as u32 {
        if color[start as usize] != 0 {
            continue;
        }
        let mut stack: Vec<(u32, usize)> = vec![(start, 0)];
        let mut path_edges: Vec<u32> = Vec::new();
        color[start as usize] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < g.out_edges(v).len() {
                let e = g.out_edges(v)[*next];
                *next += 1;
                let w = g.edge(e).dst;
                match color[w as usize] {
                    0 => {
                        color[w as usize] = 1;
                        path_edges.push(e);
                        stack.push((w, 0));
                    }
                    1 => {
                        // Back edge: the cycle is the path suffix from w.
                        let mut cycle = vec![e];
                        let mut cur = v;
                        for &pe in path_edges.iter().rev() {
                            if cur == w {
                                break;
                            }
                            cycle.push(pe);
                            cur = g.edge(pe).src;
                        }
                        cycle.reverse();
                        return Some(cycle.iter().map(|&e| g.edge(e).id.clone()).collect());
                    }
                    _ => {}
                }
            } else {
                color[v as usize] = 2;
                stack.pop();
                path_edges.pop();
            }
        }
    }
    None
}

fn cmd_graph_check(
    input: &Path,
    conditions: Option<&str>,
    free: Option<&str>,
    depth: Option<usize>,
) -> CmdResult {
    let mut report = Report::new("graph-check");
    let requested: Vec<String> = match conditions {
        None => vec!["L".into(), "K".into(), "loops".into()],
        Some(raw) => {
            let items: Vec<String> = raw.split(',').map(str::to_string).collect();
            for item in &items {
                if item != "L" && item != "K" && item != "loops" {
                    return Err((
                        report,
                        UsageError {
                            context: "--conditions".into(),
                            message: format!("unknown condition \"{item}\" (expected L, K, loops)"),
                        },
                    ));
                }
            }
            items
        }
    };
    let free_pair: Option<(usize, usize)> = match free {
        None => None,
        Some(raw) => {
            let parts: Vec<&str> = raw.split(',').collect();
            let parsed = if parts.len() == 2 {
                parts[0].parse::<usize>().ok().zip(parts[1].parse::<usize>().ok())
            } else {
                None
            };
            match parsed {
                Some((m, n)) if m != n => Some((m, n)),
                Some(_) => {
                    return Err((
                        report,
                        UsageError {
                            context: "--free".into(),
                            message: "exponents must differ".into(),
                        },
                    ))
                }
                None => {
                    return Err((
                        report,
                        UsageError {
                            context: "--free".into(),
                            message: format!("expected \"m,n\", got \"{raw}\""),
                        },
                    ))
                }
            }
        }
    };
    if depth == Some(0) {
        return Err((
            report,
            UsageError { context: "--depth".into(), message: "depth must be at least 1".into() },
        ));
    }

    let doc = match load_json(input) {
        Ok(d) => d,
        Err(e) => return Err((report, e)),
    };
    let g = match parse_graph(&doc, "") {
        Ok(g) => g,
        Err(e) => return Err((report, UsageError::io(input, e))),
    };
    let s = report.section(format!("input {}", input.display()));
    s.count("vertices", g.n_vertices());
    s.count("edges", g.n_edges());
    let mut all_hold = true;

    for cond in &requested {
        let s = report.section(format!("condition {cond}"));
        match cond.as_str() {
            "L" => {
                let cycles = no_exit_cycles(&g);
                let holds = condition_l(&g);
                s.flag("holds", holds);
                if !holds {
                    s.list("no-exit cycle", &edge_list(&g, &cycles[0]));
                }
                all_hold &= holds;
            }
            "K" => {
                let holds = condition_k(&g);
                s.flag("holds", holds);
                if !holds {
                    let v = (0..g.n_vertices() as u32)
                        .find(|&v| has_two_first_returns(&g, v) == Some(false))
                        .unwrap();
                    s.text("unique first-return vertex", g.vertex_name(v));
                }
                all_hold &= holds;
            }
            "loops" => {
                let holds = has_no_loops(&g);
                s.flag("holds", holds);
                if !holds {
                    s.list("cycle", &find_cycle(&g).unwrap());
                }
                all_hold &= holds;
            }
            _ => unreachable!(),
        }
    }

    if let Some((m, n)) = free_pair {
        let s = report.section(format!("essential freeness ({m}, {n})"));
        match essential_freeness(&g, m, n) {
            Ok(true) => s.flag("holds", true),
            Ok(false) => {
                s.flag("holds", false);
                let d = m.abs_diff(n);
                let cycle = no_exit_cycles(&g)
                    .into_iter()
                    .find(|c| d % c.len() == 0)
                    .expect("a dividing no-exit cycle witnesses the failure");
                s.list("periodic cycle", &edge_list(&g, &cycle));
                all_hold = false;
            }
            Err(e) => {
                s.flag("holds", false);
                s.text("witness", e.to_string());
                all_hold = false;
            }
        }
    }

    if let Some(d) = depth {
        let s = report.section("diagonal-restricted arrows");
        s.count("depth", d);
        match dr_arrows_at_depth(&g, d) {
            Ok(classes) => s.count("classes", classes.len()),
            Err(e) => s.text("witness", e.to_string()),
        }
    }

    Ok((report, all_hold))
}

fn cmd_cocycle_check(input: &Path) -> CmdResult {
    let mut report = Report::new("cocycle-check");
    let (g, sigma) = match load_cocycle_doc(input) {
        Ok(x) => x,
        Err(e) => return Err((report, e)),
    };
    let s = report.section(format!("input {}", input.display()));
    describe_groupoid(s, &g);
    s.count("nontrivial values", sigma.nontrivial_values().len());
    match sigma.check() {
        Ok(()) => {
            s.flag("cocycle identity", true);
            Ok((report, true))
        }
        Err(v) => {
            s.flag("cocycle identity", false);
            s.text("witness", v.to_string());
            if let cartan_core::cocycle::CocycleViolation::Identity { first, second, third } = &v
            {
                let a = g.arrow_index(first).unwrap();
                let b = g.arrow_index(second).unwrap();
                let c = g.arrow_index(third).unwrap();
                let ab = g.compose(a, b).unwrap();
                let bc = g.compose(b, c).unwrap();
                s.complex("sigma(a,b)", sigma.get(a, b));
                s.complex("sigma(ab,c)", sigma.get(ab, c));
                s.complex("sigma(b,c)", sigma.get(b, c));
                s.complex("sigma(a,bc)", sigma.get(a, bc));
            }
            Ok((report, false))
        }
    }
}

fn cmd_algebra_build(input: &Path) -> CmdResult {
    let mut report = Report::new("algebra-build");
    let (g, sigma) = match load_cocycle_doc(input) {
        Ok(x) => x,
        Err(e) => return Err((report, e)),
    };
    let s = report.section(format!("input {}", input.display()));
    describe_groupoid(s, &g);
    if let Err(v) = sigma.check() {
        s.flag("cocycle identity", false);
        s.text("witness", v.to_string());
        return Ok((report, false));
    }
    let ctx = AlgebraContext::new(sigma);
    let s = report.section("algebra");
    s.flag("diagonal is masa", is_masa(&ctx));
    s.flag("essentially principal", ctx.groupoid().is_essentially_principal());
    let model = matrix_model(&ctx);
    s.count("blocks", model.blocks.len());
    for (i, b) in model.blocks.iter().enumerate() {
        s.text(
            &format!("block {i}"),
            format!(
                "size {} on [{}]",
                b.basis.len(),
                b.units
                    .iter()
                    .map(|&u| ctx.groupoid().unit_name(u))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        );
    }
    let s = report.section("matrix model");
    s.put("model", "see JSON output".to_string(), matrix_model_to_json(&model, &ctx));
    Ok((report, true))
}

fn cmd_algebra_norm(input: &Path, cocycle: &Path, tolerance: f64) -> CmdResult {
    let mut report = Report::new("algebra-norm");
    let (_, sigma) = match load_cocycle_doc(cocycle) {
        Ok(x) => x,
        Err(e) => return Err((report, e)),
    };
    if let Err(v) = sigma.check() {
        return Err((
            report,
            UsageError {
                context: cocycle.display().to_string(),
                message: format!("cocycle identity fails: {v}"),
            },
        ));
    }
    let ctx = AlgebraContext::new(sigma);
    let doc = match load_json(input) {
        Ok(d) => d,
        Err(e) => return Err((report, e)),
    };
    let f = match parse_section(&doc, &ctx, "") {
        Ok(f) => f,
        Err(e) => return Err((report, UsageError::io(input, e))),
    };
    let s = report.section(format!("input {}", input.display()));
    s.count("support", f.support().len());
    let sup = f.max_abs();
    let red = reduced_norm(&ctx, &f);
    let full = i_norm(&ctx, &f);
    s.num("max entry", sup);
    s.num("reduced norm", red);
    s.num("i-norm", full);
    let cstar = reduced_norm(&ctx, &conv(&ctx, &star(&ctx, &f), &f));
    s.num("reduced norm of f* f", cstar);
    let s = report.section("inequalities");
    let mut all_hold = true;
    for (name, ok) in [
        ("max entry <= reduced norm", sup <= red + tolerance),
        ("reduced norm <= i-norm", red <= full + tolerance),
        ("C*-identity", (cstar - red * red).abs() <= tolerance * (1.0 + red * red)),
    ] {
        s.flag(name, ok);
        all_hold &= ok;
    }
    s.num("tolerance", tolerance);
    Ok((report, all_hold))
}

fn cmd_cartan_reconstruct(input: &Path) -> CmdResult {
    let mut report = Report::new("cartan-reconstruct");
    let doc = match load_json(input) {
        Ok(d) => d,
        Err(e) => return Err((report, e)),
    };
    let (pair, generators) = match parse_cartan_pair(&doc, "") {
        Ok(x) => x,
        Err(e) => return Err((report, UsageError::io(input, e))),
    };
    let s = report.section(format!("input {}", input.display()));
    s.count("blocks", pair.block_sizes().len());
    s.put("pair", "see JSON output".to_string(), cartan_pair_to_json(&pair));
    let masa = masa_check(&pair);
    s.flag("diagonal is masa", masa);
    if !masa {
        return Ok((report, false));
    }
    let recon = match reconstruct(&pair) {
        Ok(r) => r,
        Err(e) => {
            s.text("witness", e.to_string());
            return Ok((report, false));
        }
    };
    let s = report.section("reconstructed groupoid");
    describe_groupoid(s, &recon.groupoid);
    s.flag("principal", recon.groupoid.is_principal());
    s.count("twist nontrivial values", recon.twist.nontrivial_values().len());

    let mut all_hold = true;
    let s = report.section("checks");
    match kernel_commutant_check(&pair) {
        Ok(ok) => {
            s.flag("trivially-acting normalizers are diagonal", ok);
            all_hold &= ok;
        }
        Err(e) => {
            s.text("kernel check error", e.to_string());
            all_hold = false;
        }
    }
    match separation_check(&pair) {
        Ok(ok) => {
            s.flag("diagonal vanishes at moved points", ok);
            all_hold &= ok;
        }
        Err(e) => {
            s.text("separation check error", e.to_string());
            all_hold = false;
        }
    }
    match unique_extension_analysis(&pair) {
        Ok(r) => {
            s.flag("weyl groupoid principal", r.weyl_principal);
            s.flag("ker P spanned by free normalizers", r.ker_p_equals_free_span);
            s.flag("A = B + span[A,B]", r.commutator_decomposition);
            all_hold &= r.weyl_principal && r.ker_p_equals_free_span && r.commutator_decomposition;
        }
        Err(e) => {
            s.text("extension analysis error", e.to_string());
            all_hold = false;
        }
    }

    for (i, (block, mat)) in generators.iter().enumerate() {
        let s = report.section(format!("generator {i}"));
        s.count("block", *block);
        let mut elem = Element::zero(&pair);
        elem.blocks[*block] = mat.clone();
        match NormalizerElement::new(&pair, elem) {
            Ok(n) => {
                s.flag("normalizer", true);
                match alpha_of(&pair, &n) {
                    Ok(alpha) => {
                        let pairs: Vec<String> =
                            alpha.pairs().map(|(y, x)| format!("{y} -> {x}")).collect();
                        s.list("action", &pairs);
                    }
                    Err(e) => {
                        s.text("witness", e.to_string());
                        all_hold = false;
                    }
                }
            }
            Err(e) => {
                s.flag("normalizer", false);
                s.text("witness", e.to_string());
                all_hold = false;
            }
        }
    }

    Ok((report, all_hold))
}

fn cmd_roundtrip(input: &Path, tolerance: f64) -> CmdResult {
    let mut report = Report::new("roundtrip");
    let (g, sigma) = match load_cocycle_doc(input) {
        Ok(x) => x,
        Err(e) => return Err((report, e)),
    };
    let s = report.section(format!("input {}", input.display()));
    describe_groupoid(s, &g);
    if let Err(v) = sigma.check() {
        s.flag("cocycle identity", false);
        s.text("witness", v.to_string());
        return Ok((report, false));
    }
    if !g.is_principal() {
        s.flag("principal", false);
        s.text("witness", "groupoid is not principal".to_string());
        return Ok((report, false));
    }
    s.flag("principal", true);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    match roundtrip_check(&g, &sigma, &mut rng) {
        Ok(r) => {
            let s = report.section("round trip");
            let bijection: Vec<String> =
                r.unit_map.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
            s.list("unit bijection", &bijection);
            let witness: BTreeMap<&str, Complex64> =
                r.witness.values().collect();
            for (arrow, z) in &witness {
                s.complex(&format!("witness at {arrow}"), *z);
            }
            s.num("star residual", r.star_residual);
            s.num("inversion residual", r.inversion_residual);
            s.num("tolerance", tolerance);
            let ok = r.star_residual <= tolerance && r.inversion_residual <= tolerance;
            s.flag("within tolerance", ok);
            Ok((report, ok))
        }
        Err(e @ (WeylError::NotMasa | WeylError::NotCohomologous | WeylError::IsomorphismNotFound)) => {
            let s = report.section("round trip");
            s.text("witness", e.to_string());
            Ok((report, false))
        }
        Err(e) => Err((
            report,
            UsageError { context: input.display().to_string(), message: e.to_string() },
        )),
    }
}
