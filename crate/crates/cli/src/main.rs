//! Command-line front end: fastness checking, diagram extraction and
//! comparison, realizations, the word problem, local-word reduction,
//! marker orbits, excision, blueprint analysis, and the fixture catalog.
//!
//! Exit codes: 0 for affirmative verdicts and successful emission, 1 for
//! negative verdicts, 2 for input errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use geofast::blueprint::{
    blueprints_isomorphic, classify_orderability, freeness_probe, is_faithful, Blueprint,
    Orderability,
};
use geofast::diagram::DynamicalDiagram;
use geofast::excision::{excise, find_extraneous};
use geofast::fastness::{
    canonical_marking, fastness_report, BumpFamily,
};
use geofast::fixtures;
use geofast::num::show_rat;
use geofast::plmap::{Bump, PLMap};
use geofast::symbolic::{
    enumerate_orbit, evaluate_local, local_reduce, translate_word, LocalWord, Word,
};
use geofast::system::{default_names, FastSystem};

#[derive(Parser)]
#[command(name = "geofast", version, about = "Exact tools for geometrically fast families of piecewise-linear homeomorphisms")]
struct Cli {
    /// Emit machine-readable JSON instead of the human report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named fixture (family, diagram, or blueprint).
    Fixtures {
        /// Fixture name, e.g. `F 2`, `Fn 3`, `brin-navas`, `geofast-pair`,
        /// `excision`, `chain-decomp`, `psl2`, `psl2-squares`, `psl2-witness`.
        name: Vec<String>,
        /// For `F n`: emit only the `g` or `h` family.
        #[arg(long)]
        part: Option<FPart>,
    },
    /// Properness, chain partition, and the fastness verdict of a family.
    Check { file: Option<String> },
    /// Canonical marking and feet of a family.
    Mark { file: Option<String> },
    /// Dynamical diagram of a geometrically fast family.
    Diagram { file: Option<String> },
    /// The unique order-preserving isomorphism of two diagrams, if any.
    Iso { left: String, right: String },
    /// Realize a diagram as a concrete family on [0, 1].
    Realize {
        file: Option<String>,
        #[arg(long, conflicts_with = "dyadic")]
        terminal: bool,
        /// Dyadic breakpoints and power-of-two slopes.
        #[arg(long)]
        dyadic: bool,
    },
    /// Text-art rendering of a diagram (contraction convention).
    Render { file: Option<String> },
    /// Locally reduce a local word over a fast family and evaluate it.
    Reduce {
        #[arg(long)]
        word: String,
        file: Option<String>,
    },
    /// Translate a word through the diagram isomorphism of two families.
    Translate {
        #[arg(long)]
        word: String,
        left: String,
        right: String,
    },
    /// Decide whether a word composes to the identity.
    Identity {
        #[arg(long)]
        word: String,
        file: Option<String>,
    },
    /// Enumerate the marker orbit to a depth, sorted by value.
    Orbit {
        #[arg(long, default_value_t = 4)]
        depth: usize,
        file: Option<String>,
    },
    /// List extraneous-bump certificates; optionally apply one.
    Excise {
        /// Apply the k-th certificate and emit the quotient family.
        #[arg(long)]
        apply: Option<usize>,
        file: Option<String>,
    },
    /// Blueprint analysis.
    #[command(subcommand)]
    Blueprint(BlueprintCmd),
}

#[derive(Subcommand)]
enum BlueprintCmd {
    /// Check the blueprint axioms.
    Validate { file: Option<String> },
    /// Decide faithfulness (backward reachability, cross-checked).
    Faithful {
        #[arg(long, default_value_t = 6)]
        depth: usize,
        file: Option<String>,
    },
    /// Classify: orderable (F), cyclically orderable (T), neither (V).
    Classify {
        #[arg(long, default_value_t = 14)]
        bound: usize,
        file: Option<String>,
    },
    /// Probe freeness of the hat-action up to a word length.
    Free {
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        file: Option<String>,
    },
    /// Structure isomorphism of two blueprints.
    Iso { left: String, right: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum FPart {
    G,
    H,
}

/// A generating family on disk: either a bare list of maps or an object
/// with names.
#[derive(Serialize)]
struct Family {
    names: Vec<String>,
    maps: Vec<PLMap>,
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Named { names: Vec<String>, maps: Vec<PLMap> },
            Bare(Vec<PLMap>),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Named { names, maps } => Family { names, maps },
            Raw::Bare(maps) => Family {
                names: default_names(maps.len()),
                maps,
            },
        })
    }
}

fn read_input(file: &Option<String>) -> Result<String, String> {
    match file.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("stdin: {e}"))?;
            Ok(buf)
        }
        Some(path) => fs::read_to_string(path).map_err(|e| format!("{path}: {e}")),
    }
}

fn parse_family(text: &str) -> Result<Family, String> {
    serde_json::from_str(text).map_err(|e| format!("family: {e}"))
}

fn parse_diagram(text: &str) -> Result<DynamicalDiagram, String> {
    serde_json::from_str(text).map_err(|e| format!("diagram: {e}"))
}

fn parse_blueprint(text: &str) -> Result<Blueprint, String> {
    serde_json::from_str(text).map_err(|e| format!("blueprint: {e}"))
}

fn load_family(file: &Option<String>) -> Result<Family, String> {
    parse_family(&read_input(file)?)
}

fn load_system(file: &Option<String>) -> Result<FastSystem, String> {
    let fam = load_family(file)?;
    FastSystem::new(fam.maps, fam.names).map_err(|e| e.to_string())
}

fn family_json(names: &[String], maps: &[PLMap]) -> serde_json::Value {
    json!({ "names": names, "maps": maps })
}

fn main() -> ExitCode {
    // die quietly when the consumer of a pipe goes away
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Fixtures { name, part } => cmd_fixtures(&name.join(" "), part),
        Command::Check { file } => cmd_check(&file, cli.json),
        Command::Mark { file } => cmd_mark(&file, cli.json),
        Command::Diagram { file } => {
            let sys = load_system(&file)?;
            println!("{}", serde_json::to_string_pretty(sys.diagram()).unwrap());
            Ok(0)
        }
        Command::Iso { left, right } => cmd_iso(&left, &right, cli.json),
        Command::Realize {
            file,
            terminal,
            dyadic,
        } => cmd_realize(&file, terminal, dyadic),
        Command::Render { file } => {
            let d = parse_diagram(&read_input(&file)?)?;
            println!("{}", d.render());
            Ok(0)
        }
        Command::Reduce { word, file } => cmd_reduce(&word, &file, cli.json),
        Command::Translate { word, left, right } => cmd_translate(&word, &left, &right, cli.json),
        Command::Identity { word, file } => cmd_identity(&word, &file, cli.json),
        Command::Orbit { depth, file } => cmd_orbit(depth, &file, cli.json),
        Command::Excise { apply, file } => cmd_excise(apply, &file, cli.json),
        Command::Blueprint(sub) => cmd_blueprint(sub, cli.json),
    }
}

fn cmd_fixtures(name: &str, part: Option<FPart>) -> Result<u8, String> {
    let value = fixture_value(name, part)?;
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
    Ok(0)
}

fn fixture_value(name: &str, part: Option<FPart>) -> Result<serde_json::Value, String> {
    let words: Vec<&str> = name.split_whitespace().collect();
    match words.as_slice() {
        ["F", n] => {
            let n: i64 = n.parse().map_err(|_| format!("bad rank `{n}`"))?;
            if n < 2 {
                return Err("rank must be at least 2".into());
            }
            let g = fixtures::f_generators(n);
            let gnames: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
            let h = fixtures::f_chain(n as usize);
            let hnames: Vec<String> = (0..n).map(|i| format!("h{i}")).collect();
            Ok(match part {
                Some(FPart::G) => family_json(&gnames, &g),
                Some(FPart::H) => family_json(&hnames, &h),
                None => json!({ "g": family_json(&gnames, &g), "h": family_json(&hnames, &h) }),
            })
        }
        ["Fn", n] => {
            let n: usize = n.parse().map_err(|_| format!("bad rank `{n}`"))?;
            if n < 2 {
                return Err("rank must be at least 2".into());
            }
            let h = fixtures::f_chain(n);
            let hnames: Vec<String> = (0..n).map(|i| format!("h{i}")).collect();
            Ok(family_json(&hnames, &h))
        }
        ["brin-navas"] => {
            let (maps, names) = fixtures::brin_navas();
            Ok(family_json(&names, &maps))
        }
        ["geofast-pair"] => {
            let maps = fixtures::geofast_pair();
            Ok(family_json(&default_names(2), &maps))
        }
        ["excision"] => {
            let (maps, names) = fixtures::excision_family();
            Ok(family_json(&names, &maps))
        }
        ["chain-decomp"] => Ok(serde_json::to_value(fixtures::chain_decomp_diagram()).unwrap()),
        ["psl2"] => Ok(serde_json::to_value(fixtures::psl2_blueprint()).unwrap()),
        ["psl2-squares"] => Ok(serde_json::to_value(fixtures::psl2_squares_blueprint()).unwrap()),
        ["psl2-witness"] => Ok(serde_json::to_value(fixtures::psl2_witness()).unwrap()),
        _ => Err(format!("unknown fixture `{name}`")),
    }
}

fn family_bumps(maps: &[PLMap]) -> BumpFamily {
    let mut bumps: Vec<Bump> = Vec::new();
    for m in maps {
        for (b, _) in m.signed_bumps() {
            bumps.push(b);
        }
    }
    BumpFamily::new(bumps)
}

fn cmd_check(file: &Option<String>, as_json: bool) -> Result<u8, String> {
    let fam = load_family(file)?;
    let family = family_bumps(&fam.maps);
    let generator_violation = geofast::fastness::properness_violation(&fam.maps);
    let report = fastness_report(&family);
    let violation = generator_violation.or(report.violation.clone());
    let proper = violation.is_none();
    let fast = proper && report.fast;
    let marking = if proper {
        canonical_marking(&family).ok()
    } else {
        None
    };
    if as_json {
        let markers = marking.as_ref().map(|m| {
            m.markers.iter().map(show_rat).collect::<Vec<_>>()
        });
        let feet = marking.as_ref().and_then(|m| m.feet()).map(|feet| {
            feet.iter()
                .map(|f| json!({ "src": f.src, "dest": f.dest }))
                .collect::<Vec<_>>()
        });
        let value = json!({
            "proper": proper,
            "violation": violation,
            "fast": fast,
            "chains": report.chains,
            "isolated": report.isolated,
            "markers": markers,
            "feet": feet,
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        match &violation {
            None => println!("properness: proper"),
            Some(v) => println!(
                "properness: NOT proper ({} is a {} transition point of #{} and #{})",
                v.point, v.side, v.members.0, v.members.1
            ),
        }
        for c in &report.chains {
            println!(
                "chain {:?}: C_min = {}, C_max = {}, C_min * product = {}  [{}]",
                c.members,
                show_rat(&c.c_min),
                show_rat(&c.c_max),
                show_rat(&c.image),
                if c.ok { "ok" } else { "fails" }
            );
        }
        if !report.isolated.is_empty() {
            println!("isolated bumps: {:?}", report.isolated);
        }
        if let Some(m) = &marking {
            println!(
                "markers: {}",
                m.markers.iter().map(show_rat).collect::<Vec<_>>().join(", ")
            );
        }
        println!("verdict: {}", if fast { "geometrically fast" } else { "not geometrically fast" });
    }
    Ok(if fast { 0 } else { 1 })
}

fn cmd_mark(file: &Option<String>, as_json: bool) -> Result<u8, String> {
    let fam = load_family(file)?;
    let family = family_bumps(&fam.maps);
    let marking = canonical_marking(&family).map_err(|e| e.to_string())?;
    if as_json {
        let feet = marking.feet().map(|feet| {
            feet.iter()
                .map(|f| json!({ "src": f.src, "dest": f.dest }))
                .collect::<Vec<_>>()
        });
        let value = json!({
            "markers": marking.markers.iter().map(show_rat).collect::<Vec<_>>(),
            "initial": marking.initial,
            "feet": feet,
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        for (k, t) in marking.markers.iter().enumerate() {
            let tag = if marking.initial[k] { " (initial)" } else { "" };
            match marking.feet() {
                Some(feet) => println!(
                    "bump {k}: marker {}{tag}, src {}, dest {}",
                    show_rat(t),
                    feet[k].src,
                    feet[k].dest
                ),
                None => println!("bump {k}: marker {}{tag}", show_rat(t)),
            }
        }
    }
    Ok(0)
}

fn cmd_iso(left: &str, right: &str, as_json: bool) -> Result<u8, String> {
    let a = parse_diagram(&read_input(&Some(left.to_string()))?)?;
    let b = parse_diagram(&read_input(&Some(right.to_string()))?)?;
    match a.isomorphism_to(&b) {
        Some(iso) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&iso).unwrap());
            } else {
                let pairs: Vec<String> = iso
                    .label_map
                    .iter()
                    .map(|(k, v)| format!("{k} -> {v}"))
                    .collect();
                println!("isomorphic: {}", pairs.join(", "));
            }
            Ok(0)
        }
        None => {
            println!("none");
            Ok(1)
        }
    }
}

fn cmd_realize(file: &Option<String>, terminal: bool, dyadic: bool) -> Result<u8, String> {
    let d = parse_diagram(&read_input(file)?)?;
    let real = if dyadic {
        d.realize_dyadic()
    } else {
        let _ = terminal; // terminal is the default
        d.realize_terminal()
    }
    .map_err(|e| e.to_string())?;
    println!(
        "{}",
        serde_json::to_string_pretty(&family_json(&real.labels, &real.maps)).unwrap()
    );
    Ok(0)
}

fn cmd_reduce(word: &str, file: &Option<String>, as_json: bool) -> Result<u8, String> {
    let sys = load_system(file)?;
    let lw = LocalWord::parse(word, &sys).map_err(|e| e.to_string())?;
    let reduced = local_reduce(&sys, &lw);
    let value = evaluate_local(&sys, &reduced);
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "reduced": reduced.display(&sys),
                "value": show_rat(&value),
            }))
            .unwrap()
        );
    } else {
        println!("reduced: {}", reduced.display(&sys));
        println!("value: {}", show_rat(&value));
    }
    Ok(0)
}

fn cmd_translate(word: &str, left: &str, right: &str, as_json: bool) -> Result<u8, String> {
    let fam_a = parse_family(&read_input(&Some(left.to_string()))?)?;
    let fam_b = parse_family(&read_input(&Some(right.to_string()))?)?;
    let x = FastSystem::new(fam_a.maps, fam_a.names).map_err(|e| e.to_string())?;
    let y = FastSystem::new(fam_b.maps, fam_b.names).map_err(|e| e.to_string())?;
    let iso = x
        .diagram()
        .isomorphism_to(y.diagram())
        .ok_or("diagrams are not isomorphic")?;
    let w = Word::parse(word, x.names()).map_err(|e| e.to_string())?;
    let out = translate_word(&iso, x.names(), y.names(), &w).map_err(|e| e.to_string())?;
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "word": out.display(y.names()) })).unwrap()
        );
    } else {
        println!("{}", out.display(y.names()));
    }
    Ok(0)
}

fn cmd_identity(word: &str, file: &Option<String>, as_json: bool) -> Result<u8, String> {
    let fam = load_family(file)?;
    let w = Word::parse(word, &fam.names).map_err(|e| e.to_string())?;
    // the composition oracle is authoritative; the orbit search is a
    // cross-check that also produces a witness
    let (identity, witness) = match FastSystem::new(fam.maps.clone(), fam.names.clone()) {
        Ok(sys) => {
            let verdict = geofast::symbolic::word_is_identity_checked(&sys, &w, None);
            let witness = verdict
                .moved_point
                .map(|(lw, v)| (lw.display(&sys), show_rat(&v)));
            (verdict.identity, witness)
        }
        Err(_) => (geofast::symbolic::word_is_identity(&w, &fam.maps), None),
    };
    if as_json {
        let value = json!({ "identity": identity, "moved_point": witness });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else if identity {
        println!("identity");
    } else {
        match witness {
            Some((lw, v)) => println!("not identity (moves {lw} = {v})"),
            None => println!("not identity"),
        }
    }
    Ok(if identity { 0 } else { 1 })
}

fn cmd_orbit(depth: usize, file: &Option<String>, as_json: bool) -> Result<u8, String> {
    let sys = load_system(file)?;
    let mut points = enumerate_orbit(&sys, depth);
    points.sort_by(|a, b| a.value.cmp(&b.value));
    if as_json {
        let rows: Vec<serde_json::Value> = points
            .iter()
            .map(|p| json!({ "value": show_rat(&p.value), "word": p.word.display(&sys) }))
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows).unwrap());
    } else {
        for p in &points {
            println!("{}\t{}", show_rat(&p.value), p.word.display(&sys));
        }
    }
    Ok(0)
}

fn cmd_excise(apply: Option<usize>, file: &Option<String>, as_json: bool) -> Result<u8, String> {
    let sys = load_system(file)?;
    let certs = find_extraneous(&sys);
    match apply {
        Some(k) => {
            let cert = certs
                .get(k)
                .ok_or_else(|| format!("no certificate #{k} (found {})", certs.len()))?;
            let quotient = excise(&sys, cert).map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&family_json(sys.names(), &quotient)).unwrap()
            );
            Ok(0)
        }
        None => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&certs).unwrap());
            } else if certs.is_empty() {
                println!("no extraneous bump sets");
            } else {
                for (k, c) in certs.iter().enumerate() {
                    println!(
                        "#{k}: generator {} ({}), bumps {:?}, witness {}",
                        c.generator,
                        sys.names()[c.generator],
                        c.bumps,
                        c.witness
                    );
                }
            }
            Ok(if certs.is_empty() { 1 } else { 0 })
        }
    }
}

fn cmd_blueprint(sub: BlueprintCmd, as_json: bool) -> Result<u8, String> {
    match sub {
        BlueprintCmd::Validate { file } => {
            let bp = parse_blueprint(&read_input(&file)?)?;
            let violations = bp.validate();
            if as_json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "valid": violations.is_empty(),
                        "violations": violations,
                    }))
                    .unwrap()
                );
            } else if violations.is_empty() {
                println!("valid");
            } else {
                for v in &violations {
                    println!("violation: {v}");
                }
            }
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        BlueprintCmd::Faithful { depth, file } => {
            let bp = parse_blueprint(&read_input(&file)?)?;
            let verdict = is_faithful(&bp, depth);
            if as_json {
                println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
            } else if verdict.faithful {
                println!("faithful (oracle depth {})", verdict.oracle_depth);
            } else {
                println!(
                    "not faithful (witness {:?})",
                    verdict.witness.unwrap_or_default()
                );
            }
            Ok(if verdict.faithful { 0 } else { 1 })
        }
        BlueprintCmd::Classify { bound, file } => {
            let bp = parse_blueprint(&read_input(&file)?)?;
            let class = classify_orderability(&bp, bound).map_err(|e| e.to_string())?;
            if as_json {
                println!("{}", serde_json::to_string_pretty(&class).unwrap());
            } else {
                match &class {
                    Orderability::Orderable { witness } => {
                        println!("orderable: embeds into F (order: {})", witness.join(" < "))
                    }
                    Orderability::CyclicallyOrderable { witness } => println!(
                        "cyclically orderable: embeds into T (cycle: {})",
                        witness.join(" -> ")
                    ),
                    Orderability::Neither => println!("neither: embeds into V"),
                }
            }
            Ok(match class {
                Orderability::Neither => 1,
                _ => 0,
            })
        }
        BlueprintCmd::Free {
            maxlen,
            depth,
            file,
        } => {
            let bp = parse_blueprint(&read_input(&file)?)?;
            let verdict = freeness_probe(&bp, maxlen, depth);
            if as_json {
                println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
            } else {
                match &verdict.relator {
                    None => println!(
                        "free to length {} ({} words checked)",
                        verdict.free_to, verdict.words_checked
                    ),
                    Some(r) => println!("not free: relator {}", r.join(" ")),
                }
            }
            Ok(if verdict.relator.is_none() { 0 } else { 1 })
        }
        BlueprintCmd::Iso { left, right } => {
            let a = parse_blueprint(&read_input(&Some(left))?)?;
            let b = parse_blueprint(&read_input(&Some(right))?)?;
            let found = blueprints_isomorphic(&a, &b, 14).map_err(|e| e.to_string())?;
            match found {
                Some(map) => {
                    if as_json {
                        let obj: BTreeMap<String, String> = map.into_iter().collect();
                        println!("{}", serde_json::to_string_pretty(&obj).unwrap());
                    } else {
                        let pairs: Vec<String> =
                            map.iter().map(|(k, v)| format!("{k} -> {v}")).collect();
                        println!("isomorphic: {}", pairs.join(", "));
                    }
                    Ok(0)
                }
                None => {
                    println!("none");
                    Ok(1)
                }
            }
        }
    }
}
