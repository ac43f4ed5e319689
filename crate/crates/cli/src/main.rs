//! `gpdcolim`: command-line front end.
//!
//! Exit codes: 0 success, 1 refutation (a failed condition or check, a
//! distinguished comparison), 2 usage or input error, 3 inconclusive (fuel
//! exhausted or undecided words).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use gpdcolim::colimit::colimit_presentation;
use gpdcolim::comparison::{
    equivalence_report, gamma_k_properties, injectivize_diagram_b2, truncation_check, Verdict,
};
use gpdcolim::corpus::{builtin_text, BUILTIN_NAMES};
use gpdcolim::diagram::{load, save, Diagram, StrictnessReport};
use gpdcolim::groupoid::finite::FiniteGroupoidSpec;
use gpdcolim::groupoid::{
    enumerate_functors, functor_groupoid_stats, groupoid_invariants, FiniteGroupoid, GroupoidInvariants,
    GroupoidPresentation,
};
use gpdcolim::set_colimit::{check_maincor, check_theorem_main, ConditionBattery};
use gpdcolim::two_colimit::{descent_category, two_colimit_presentation, DescentShape};
use gpdcolim::Error;

#[derive(Parser, Debug)]
#[command(name = "gpdcolim", version, about = "Colimits and 2-colimits of diagrams of groupoids over subset posets")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Search budget for word problems and enumerations.
    #[arg(long, global = true, default_value_t = 10_000)]
    fuel: u64,
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Treat undecided relation checks as validation failures.
    #[arg(long, global = true)]
    strict_validation: bool,
    /// Proceed even if strictness cannot be verified.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Args, Debug)]
struct Input {
    /// Diagram file (JSON).
    file: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a diagram and check strictness.
    Validate(Input),
    /// Colimit presentation and its invariants.
    Colim {
        #[command(flatten)]
        input: Input,
        /// Keep every raw generator.
        #[arg(long)]
        no_cleanup: bool,
    },
    /// 2-colimit presentation and its invariants.
    Twocolim(Input),
    /// Injectivity condition battery.
    Conditions {
        #[command(flatten)]
        input: Input,
        /// Reduced battery (the default).
        #[arg(long, conflicts_with = "full")]
        maincor: bool,
        /// Every condition of the full battery.
        #[arg(long)]
        full: bool,
    },
    /// Compare colimit and 2-colimit.
    Compare {
        #[command(flatten)]
        input: Input,
        /// Certify with the full battery instead of the reduced one.
        #[arg(long)]
        full_battery: bool,
    },
    /// Compare the 2-colimit with its truncation to |S| ≥ n−3.
    TruncateCheck {
        #[command(flatten)]
        input: Input,
        /// Finite target files; defaults to the point and ℤ/2.
        #[arg(long = "target")]
        targets: Vec<PathBuf>,
    },
    /// Check faithfulness, fullness and essential surjectivity of γ_k.
    GammaK {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: u8,
        /// Finite target file; defaults to ℤ/2.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Count functors into a finite target on both sides.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        target: PathBuf,
    },
    /// Replace the corners of a Full(2) diagram by mapping cylinders.
    Injectivize {
        #[command(flatten)]
        input: Input,
        /// Write the new diagram here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print a built-in example diagram.
    Example {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(BUILTIN_NAMES))]
        name: String,
    },
}

/// Outcome class; the exit code is a function of this alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Ok,
    Refuted,
    Error,
    Inconclusive,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Refuted => 1,
            Status::Error => 2,
            Status::Inconclusive => 3,
        }
    }
}

struct Outcome {
    status: Status,
    report: Value,
    text: String,
    fuel_spent: u64,
    /// Checks left undecided within fuel.
    unknowns: Vec<String>,
}

impl Outcome {
    fn new(status: Status, report: Value, text: String) -> Self {
        Outcome { status, report, text, fuel_spent: 0, unknowns: Vec::new() }
    }
}

fn error_status(e: &Error) -> Status {
    match e {
        Error::FuelExceeded(_) | Error::Overflow(_) => Status::Inconclusive,
        _ => Status::Error,
    }
}

fn fail(e: Error) -> Outcome {
    Outcome::new(error_status(&e), json!({ "error": e.to_string() }), format!("error: {e}\n"))
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_target(path: &Path) -> Result<(String, FiniteGroupoid), Error> {
    let spec: FiniteGroupoidSpec =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok((path.display().to_string(), spec.build()?))
}

fn default_targets() -> Vec<(String, FiniteGroupoid)> {
    vec![
        ("point".into(), FiniteGroupoid::point()),
        ("z2".into(), FiniteGroupoid::cyclic_point(2).expect("order 2")),
    ]
}

/// A diagram ready for the pipelines, or the outcome that stops them.
fn prepare(path: &Path, common: &Common) -> Result<(Diagram, StrictnessReport), Outcome> {
    let mut d = read(path).and_then(|t| load(&t)).map_err(fail)?;
    let report = d.verify(common.fuel, common.strict_validation).map_err(fail)?;
    if !report.verified {
        if common.force {
            d.force();
        } else {
            let undecided = report.failures.is_empty();
            let status = if undecided { Status::Inconclusive } else { Status::Error };
            let text = if undecided {
                "strictness could not be decided within fuel; rerun with --force to proceed\n".to_string()
            } else {
                format!("diagram is not strict: {}\n", report.failures.iter().map(|f| f.detail.as_str()).collect::<Vec<_>>().join("; "))
            };
            let mut o = Outcome::new(status, json!({ "strictness": report }), text);
            o.fuel_spent = report.fuel_spent;
            o.unknowns = strictness_unknowns(&report);
            return Err(o);
        }
    }
    Ok((d, report))
}

#[derive(Serialize)]
struct GeneratorSummary {
    name: String,
    src: String,
    dst: String,
}

#[derive(Serialize)]
struct PresentationSummary {
    objects: Vec<String>,
    generators: Vec<GeneratorSummary>,
    relations: Vec<String>,
    invariants: GroupoidInvariants,
}

fn summarize(g: &GroupoidPresentation) -> Result<PresentationSummary, Error> {
    Ok(PresentationSummary {
        objects: g.objects.clone(),
        generators: g
            .generators
            .iter()
            .map(|e| GeneratorSummary { name: e.name.clone(), src: g.objects[e.src].clone(), dst: g.objects[e.dst].clone() })
            .collect(),
        relations: g.relations.iter().map(|r| format!("{} = {}", g.format_word(&r.lhs), g.format_word(&r.rhs))).collect(),
        invariants: groupoid_invariants(g)?,
    })
}

fn render_invariants(out: &mut String, label: &str, inv: &GroupoidInvariants) {
    let _ = writeln!(out, "{label}: {} objects, {} component(s)", inv.object_count, inv.component_count);
    for c in &inv.components {
        let _ = writeln!(
            out,
            "  component at {} ({} objects): vertex group {}; abelianization free rank {}, torsion {:?}",
            c.base, c.objects, c.vertex_group, c.abelianization.free_rank, c.abelianization.torsion
        );
    }
}

fn render_presentation(out: &mut String, label: &str, p: &PresentationSummary) {
    let _ = writeln!(out, "{label} presentation:");
    let _ = writeln!(out, "  objects: {}", p.objects.join(", "));
    for g in &p.generators {
        let _ = writeln!(out, "  {}: {} → {}", g.name, g.src, g.dst);
    }
    for r in &p.relations {
        let _ = writeln!(out, "  {r}");
    }
    render_invariants(out, label, &p.invariants);
}

fn render_battery(out: &mut String, b: &ConditionBattery) {
    let _ = writeln!(out, "battery: {} instance(s), {} distinct condition(s)", b.instances.len(), b.reports.len());
    for r in &b.reports {
        let _ = write!(out, "  A^{}_{} [{}]: {}", r.v, r.u, r.labels.join(", "), if r.holds { "holds" } else { "fails" });
        if let Some(w) = &r.witness {
            let _ = write!(out, " ({} and {} both map to {})", w.first, w.second, w.image);
        }
        out.push('\n');
    }
}

fn strictness_text(r: &StrictnessReport) -> String {
    let mut out = format!(
        "strictness: {} ({} failure(s), {} undecided, fuel spent {})\n",
        if r.verified { "verified" } else { "not verified" },
        r.failures.len(),
        r.unknowns,
        r.fuel_spent
    );
    for f in &r.failures {
        let _ = writeln!(out, "  {:?} at diamond above {}: {}", f.kind, f.diamond.bottom, f.detail);
    }
    for w in &r.warnings {
        let _ = writeln!(out, "  warning: {w}");
    }
    out
}

fn strictness_unknowns(r: &StrictnessReport) -> Vec<String> {
    let mut out = r.warnings.clone();
    if r.unknowns > 0 {
        out.push(format!("{} generator comparison(s) undecided during strictness checking", r.unknowns));
    }
    out
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Example { name } => {
            let text = builtin_text(name).expect("validated by clap").to_string();
            Outcome::new(Status::Ok, serde_json::from_str(&text).expect("valid JSON"), text)
        }
        Command::Validate(input) => {
            let mut d = match read(&input.file).and_then(|t| load(&t)) {
                Ok(d) => d,
                Err(e) => return fail(e),
            };
            match d.verify(c.fuel, c.strict_validation) {
                Ok(r) => {
                    let status = if r.verified {
                        Status::Ok
                    } else if r.failures.is_empty() {
                        Status::Inconclusive
                    } else {
                        Status::Refuted
                    };
                    let mut text = format!("{} over {} with {} element(s)\n", input.file.display(), d.view(), d.elements().len());
                    text.push_str(&strictness_text(&r));
                    let mut o = Outcome::new(status, json!({ "strictness": r }), text);
                    o.fuel_spent = r.fuel_spent;
                    o.unknowns = strictness_unknowns(&r);
                    o
                }
                Err(e) => fail(e),
            }
        }
        Command::Colim { input, no_cleanup } => pipeline(input, c, |d, r| {
            let res = colimit_presentation(d, d.view(), !no_cleanup)?;
            let p = summarize(&res.groupoid)?;
            let mut text = strictness_text(r);
            render_presentation(&mut text, "colimit", &p);
            Ok(Outcome::new(Status::Ok, json!({ "colimit": p }), text))
        }),
        Command::Twocolim(input) => pipeline(input, c, |d, r| {
            let res = two_colimit_presentation(d, d.view())?;
            let p = summarize(&res.groupoid)?;
            let mut text = strictness_text(r);
            render_presentation(&mut text, "2-colimit", &p);
            Ok(Outcome::new(Status::Ok, json!({ "two_colimit": p }), text))
        }),
        Command::Conditions { input, full, .. } => pipeline(input, c, |d, _| {
            let b = if *full { check_theorem_main(d)? } else { check_maincor(d)? };
            let mut text = String::new();
            render_battery(&mut text, &b);
            let _ = writeln!(text, "{}", if b.holds { "all conditions hold" } else { "some condition fails" });
            let status = if b.holds { Status::Ok } else { Status::Refuted };
            Ok(Outcome::new(status, json!({ "battery": b }), text))
        }),
        Command::Compare { input, full_battery } => pipeline(input, c, |d, _| {
            let rep = equivalence_report(d, c.fuel, *full_battery)?;
            let mut text = String::new();
            render_battery(&mut text, &rep.conditions);
            if let Some(ci) = &rep.colim_invariants {
                render_invariants(&mut text, "colimit", ci);
            }
            if let Some(ti) = &rep.twocolim_invariants {
                render_invariants(&mut text, "2-colimit", ti);
            }
            let status = match &rep.verdict {
                Verdict::GuaranteedEquivalent { battery } => {
                    let _ = writeln!(text, "verdict: GuaranteedEquivalent (every condition of the {battery} battery holds)");
                    Status::Ok
                }
                Verdict::InvariantsAgree => {
                    let _ = writeln!(text, "verdict: InvariantsAgree (some condition fails; invariants agree)");
                    Status::Ok
                }
                Verdict::Distinguished { invariant, colimit, two_colimit } => {
                    let _ = writeln!(text, "verdict: Distinguished by {invariant}: colimit {colimit}, 2-colimit {two_colimit}");
                    Status::Refuted
                }
                Verdict::Inconclusive { reason } => {
                    let _ = writeln!(text, "verdict: Inconclusive ({reason})");
                    Status::Inconclusive
                }
            };
            let (fuel_spent, unknowns) = (rep.fuel_spent, rep.unknowns.clone());
            let mut o = Outcome::new(status, json!({ "comparison": rep }), text);
            o.fuel_spent = fuel_spent;
            o.unknowns = unknowns;
            Ok(o)
        }),
        Command::TruncateCheck { input, targets } => pipeline(input, c, |d, _| {
            let targets = if targets.is_empty() {
                default_targets()
            } else {
                targets.iter().map(|t| load_target(t)).collect::<Result<Vec<_>, _>>()?
            };
            let rep = truncation_check(d, &targets, c.fuel)?;
            let mut text = String::new();
            render_invariants(&mut text, &format!("2-colimit over Full({})", rep.n), &rep.full);
            render_invariants(&mut text, &format!("2-colimit over Codim({},{})", rep.n, rep.k), &rep.truncated);
            for t in &rep.targets {
                let _ = writeln!(text, "target {}: {} vs {} isomorphism classes", t.target, t.full_classes, t.truncated_classes);
            }
            let _ = writeln!(text, "{}", if rep.holds { "truncation agrees" } else { "truncation differs" });
            let status = if rep.holds { Status::Ok } else { Status::Refuted };
            Ok(Outcome::new(status, json!({ "truncation": rep }), text))
        }),
        Command::GammaK { input, k, target } => pipeline(input, c, |d, _| {
            let (name, h) = match target {
                Some(t) => load_target(t)?,
                None => default_targets().pop().expect("two defaults"),
            };
            let rep = gamma_k_properties(d, &h, *k, c.fuel)?;
            let mut text = format!(
                "γ_{} into {name}: {} data in {} class(es) → {} data in {} class(es)\n",
                rep.k, rep.descent_objects, rep.descent_classes, rep.truncated_objects, rep.truncated_classes
            );
            let _ = writeln!(text, "faithful: {}", rep.faithful);
            let _ = writeln!(text, "full: {}{}", rep.full, if rep.expect_full { " (expected)" } else { "" });
            let _ = writeln!(
                text,
                "essentially surjective: {}{}",
                rep.essentially_surjective,
                if rep.expect_equivalence { " (expected)" } else { "" }
            );
            for ce in &rep.counterexamples {
                let _ = writeln!(text, "counterexample: {ce}");
            }
            let status = if rep.holds { Status::Ok } else { Status::Refuted };
            Ok(Outcome::new(status, json!({ "gamma_k": rep }), text))
        }),
        Command::Oracle { input, target } => pipeline(input, c, |d, _| {
            let (name, h) = load_target(target)?;
            let colim = colimit_presentation(d, d.view(), true)?;
            let homs = enumerate_functors(&colim.groupoid, &h, c.fuel)?.len();
            let cones = DescentShape::new(d)?.enumerate_cones(&h, c.fuel)?.len();
            let tc = two_colimit_presentation(d, d.view())?;
            let functors = enumerate_functors(&tc.groupoid, &h, c.fuel)?;
            let hom_stats = functor_groupoid_stats(&tc.groupoid, &h, &functors);
            let desc = descent_category(d, &h, c.fuel)?;
            let agree = homs == cones && hom_stats == desc.stats;
            let mut text = format!("target {name}\n");
            let _ = writeln!(text, "functors out of the colimit: {homs}; strict cones: {cones}");
            let _ = writeln!(
                text,
                "functors out of the 2-colimit: {} objects, {} classes, {} morphisms",
                hom_stats.objects, hom_stats.iso_classes, hom_stats.morphisms
            );
            let _ = writeln!(
                text,
                "descent data: {} objects, {} classes, {} morphisms",
                desc.stats.objects, desc.stats.iso_classes, desc.stats.morphisms
            );
            let _ = writeln!(text, "{}", if agree { "counts agree" } else { "counts differ" });
            let status = if agree { Status::Ok } else { Status::Refuted };
            let report = json!({
                "colimit_functors": homs,
                "cones": cones,
                "two_colimit_functors": hom_stats,
                "descent": desc.stats,
                "agree": agree,
            });
            Ok(Outcome::new(status, report, text))
        }),
        Command::Injectivize { input, output } => pipeline(input, c, |d, _| {
            let inj = injectivize_diagram_b2(d)?;
            let b = check_theorem_main(&inj)?;
            let saved = save(&inj);
            let mut text = String::new();
            match output {
                Some(path) => {
                    std::fs::write(path, &saved).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    let _ = writeln!(text, "wrote {}", path.display());
                    render_battery(&mut text, &b);
                }
                None => text.push_str(&saved),
            }
            let status = if b.holds { Status::Ok } else { Status::Refuted };
            let diagram: Value = serde_json::from_str(&saved).expect("valid JSON");
            Ok(Outcome::new(status, json!({ "diagram": diagram, "battery": b }), text))
        }),
    }
}

fn pipeline(
    input: &Input,
    common: &Common,
    f: impl FnOnce(&Diagram, &StrictnessReport) -> Result<Outcome, Error>,
) -> Outcome {
    match prepare(&input.file, common) {
        Ok((d, r)) => {
            let mut o = f(&d, &r).unwrap_or_else(fail);
            o.fuel_spent += r.fuel_spent;
            let mut unknowns = strictness_unknowns(&r);
            unknowns.append(&mut o.unknowns);
            o.unknowns = unknowns;
            o
        }
        Err(o) => o,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate(_) => "validate",
        Command::Colim { .. } => "colim",
        Command::Twocolim(_) => "twocolim",
        Command::Conditions { .. } => "conditions",
        Command::Compare { .. } => "compare",
        Command::TruncateCheck { .. } => "truncate-check",
        Command::GammaK { .. } => "gamma-k",
        Command::Oracle { .. } => "oracle",
        Command::Injectivize { .. } => "injectivize",
        Command::Example { .. } => "example",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut outcome = run(&cli);
    if cli.common.json {
        let envelope = json!({
            "command": command_name(&cli.command),
            "status": outcome.status,
            "exit_code": outcome.status.code(),
            "fuel_spent": outcome.fuel_spent,
            "unknowns": outcome.unknowns,
            "report": outcome.report,
        });
        println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
    } else if outcome.status == Status::Error {
        eprint!("{}", outcome.text);
    } else if matches!(cli.command, Command::Example { .. } | Command::Injectivize { output: None, .. }) {
        print!("{}", outcome.text);
    } else {
        for u in &outcome.unknowns {
            let _ = writeln!(outcome.text, "undecided: {u}");
        }
        let _ = writeln!(outcome.text, "fuel spent: {}", outcome.fuel_spent);
        print!("{}", outcome.text);
    }
    ExitCode::from(outcome.status.code())
}
