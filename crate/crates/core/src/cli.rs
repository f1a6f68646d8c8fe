//! Command-line front end. [`run`] returns the exit code and the text to
//! print, so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 a checked claim failed, 2 usage error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::acceptance::run_all;
use crate::autgrp::{aut_group, aut_group_auto, aut_group_bruteforce, conj_set, AutOptions};
use crate::constructions::{
    affine_psi_map, cyclic_map, dihedral_map, fractional_psi_map, platonic_map, power_map,
    psl2_map, psl2_prime_map, semi_elementary_map, ConstructionRecord, DihedralBranch, Platonic,
};
use crate::error::{Error, Result};
use crate::ff::{gf, gf_q, Fe, Field};
use crate::invariant::{dm_map, invariants_of_degree, Character, MatrixGroup};
use crate::moduli2::{
    census, locus_verdict, multiplier_polynomial, sigma_invariants, CensusOptions, ModuliPoint,
};
use crate::ratmap::{field_json, format_upoly, parse_hom, parse_map, parse_rational};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "p1dyn", version, about = "Dynamics on the projective line over finite fields")]
struct Cli {
    /// Output format; census defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Field selection: `--q`, or `--p` with optional `--k`.
#[derive(Args, Debug, Clone)]
struct FieldArgs {
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    q: Option<u64>,
}

impl FieldArgs {
    fn field(&self) -> Result<Field> {
        match (self.q, self.p) {
            (Some(q), _) => gf_q(q),
            (None, Some(p)) => gf(p, self.k.unwrap_or(1)),
            (None, None) => Err(Error::Invalid("give --q or --p".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a map with a prescribed automorphism group and check the claim.
    Construct(ConstructArgs),
    /// Automorphism group of a map.
    Aut {
        #[arg(long)]
        map: String,
        #[command(flatten)]
        field: FieldArgs,
        /// Search over GF(q^e) instead of choosing e automatically.
        #[arg(long)]
        ext_degree: Option<u32>,
        /// Cross-check by brute force when the search field has at most
        /// this many elements.
        #[arg(long, default_value_t = 0)]
        oracle_bound: u32,
    },
    /// All Möbius maps conjugating one map to another.
    Conj {
        #[arg(long)]
        map: String,
        #[arg(long)]
        to: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        ext_degree: u32,
        #[arg(long, default_value_t = 25)]
        oracle_bound: u32,
    },
    /// Relative invariants of SL2(F_q) or GL2(F_q) by degree.
    Invariants {
        #[arg(long, default_value = "sl2")]
        group: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        degree: usize,
        /// Last degree of a range starting at --degree.
        #[arg(long)]
        max_degree: Option<usize>,
        /// trivial, det, or det^k.
        #[arg(long, default_value = "trivial")]
        character: String,
    },
    /// The map [x F + G_y : y F - G_x] and its automorphism group.
    Dm {
        /// Homogeneous F in x, y (u1, u2 allowed).
        #[arg(long = "f")]
        f: String,
        /// Homogeneous G in x, y (u1, u2 allowed).
        #[arg(long = "g")]
        g: String,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Automorphism-locus verdict for a point (σ1, σ2) or a quadratic map.
    Locus {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        sigma1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        sigma2: Option<String>,
        #[arg(long)]
        map: Option<String>,
    },
    /// Every quadratic map over GF(q), grouped by moduli point.
    Census {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 5)]
        oracle_bound: u32,
        #[arg(long, default_value_t = 6)]
        ext_degree: u32,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run the acceptance suite; nonzero exit on any failure.
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructKind {
    PowerMap,
    AffinePsi,
    FractionalPsi,
    SemiElementary,
    Psl2,
    Psl2Prime,
    Cyclic,
    Dihedral,
    Platonic,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(value_enum)]
    kind: ConstructKind,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    /// Comma-separated GF(p)-basis of the additive group.
    #[arg(long)]
    basis: Option<String>,
    /// a4, s4 or a5.
    #[arg(long)]
    group: Option<String>,
    /// power, inverse-power or cubic.
    #[arg(long)]
    branch: Option<String>,
    /// Also brute-force when the claimed group's field has at most this
    /// many elements.
    #[arg(long, default_value_t = 0)]
    oracle_bound: u32,
}

/// Parses a constant such as `3`, `-1`, `w+1` or `2/3`.
pub fn parse_const(f: &Field, s: &str) -> Result<Fe> {
    let (n, d) = parse_rational(f, s)?;
    if n.len() > 1 || d.len() != 1 {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("{s} is not a constant"),
        });
    }
    let n = n.first().copied().unwrap_or(Fe::ZERO);
    f.div(n, d[0])
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::Invalid(format!("--{name} is required")))
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    v
}

struct Outcome {
    ok: bool,
    json: Value,
    csv: Option<String>,
}

fn construct(a: &ConstructArgs) -> Result<Outcome> {
    let konst = |f: &Field, v: &Option<String>, name: &str, default: Option<&str>| -> Result<Fe> {
        match (v, default) {
            (Some(s), _) => parse_const(f, s),
            (None, Some(s)) => parse_const(f, s),
            (None, None) => Err(Error::Invalid(format!("--{name} is required"))),
        }
    };
    let rec: ConstructionRecord = match a.kind {
        ConstructKind::PowerMap => {
            let q = need(&a.q, "q")?;
            let f = gf_q(q)?;
            power_map(q, konst(&f, &a.a, "a", Some("1"))?)?
        }
        ConstructKind::AffinePsi => {
            let q = need(&a.q, "q")?;
            let f = gf_q(q)?;
            affine_psi_map(q, konst(&f, &a.a, "a", None)?, konst(&f, &a.b, "b", None)?)?
        }
        ConstructKind::FractionalPsi => {
            let q = need(&a.q, "q")?;
            let f = gf_q(q)?;
            fractional_psi_map(
                q,
                konst(&f, &a.a, "a", None)?,
                konst(&f, &a.b, "b", None)?,
                konst(&f, &a.c, "c", None)?,
                konst(&f, &a.d, "d", None)?,
            )?
        }
        ConstructKind::SemiElementary => {
            let f = FieldArgs {
                p: a.p,
                k: a.k,
                q: a.q,
            }
            .field()?;
            let basis = need(&a.basis, "basis")?
                .split(',')
                .map(|s| parse_const(&f, s.trim()))
                .collect::<Result<Vec<_>>>()?;
            semi_elementary_map(&f, &basis, need(&a.n, "n")?)?
        }
        ConstructKind::Psl2 => psl2_map(need(&a.q, "q")?)?,
        ConstructKind::Psl2Prime => {
            let p = need(&a.p, "p")?;
            let f = gf(p, 1)?;
            psl2_prime_map(p as u64, konst(&f, &a.c, "c", Some("1"))?)?
        }
        ConstructKind::Cyclic => cyclic_map(need(&a.n, "n")?, need(&a.p, "p")?)?,
        ConstructKind::Dihedral => {
            let branch = a.branch.as_deref().map(str::parse::<DihedralBranch>).transpose()?;
            dihedral_map(need(&a.n, "n")?, need(&a.p, "p")?, branch)?
        }
        ConstructKind::Platonic => {
            let kind: Platonic = need(&a.group, "group")?.parse()?;
            platonic_map(kind, need(&a.p, "p")?)?
        }
    };
    let v = rec.verify()?;
    let mut ok = v.agrees && rec.witnesses_hold();
    let mut body = json!({
        "record": rec.to_json(),
        "label": rec.claimed_group.label().to_string(),
        "order": rec.claimed_group.order(),
        "verification": v.to_json(),
        "holds": ok,
    });
    let gfield = rec.claimed_group.field.clone();
    if a.oracle_bound > 0 && gfield.q() <= a.oracle_bound {
        let b = rec.verify_bruteforce(&gfield, a.oracle_bound)?;
        ok &= b.agrees;
        body["oracle"] = json!({ "order": b.aut.order(), "agrees": b.agrees });
        body["holds"] = json!(ok);
    }
    Ok(Outcome {
        ok,
        json: envelope("construct", body),
        csv: None,
    })
}

fn run_cmd(cli: &Cli) -> Result<Outcome> {
    match &cli.cmd {
        Command::Construct(a) => construct(a),
        Command::Aut {
            map,
            field,
            ext_degree,
            oracle_bound,
        } => {
            let f = field.field()?;
            let m = parse_map(&f, map)?;
            let r = match ext_degree {
                Some(e) => aut_group(&m, &gf(f.p(), f.k() * e)?)?,
                None => aut_group_auto(&m, AutOptions::default())?,
            };
            let mut ok = true;
            let mut body = json!({
                "map": m.to_json(),
                "label": r.group.label().to_string(),
                "order": r.order(),
                "aut": r.to_json(),
            });
            if *oracle_bound > 0 && r.search_field.q() <= *oracle_bound {
                let b = aut_group_bruteforce(&m, &r.search_field, *oracle_bound)?;
                ok = b.group.elements == r.group.elements;
                body["oracle"] = json!({ "order": b.order(), "agrees": ok });
            }
            Ok(Outcome {
                ok,
                json: envelope("aut", body),
                csv: None,
            })
        }
        Command::Conj {
            map,
            to,
            field,
            ext_degree,
            oracle_bound,
        } => {
            let f = field.field()?;
            let a = parse_map(&f, map)?;
            let b = parse_map(&f, to)?;
            let search = gf(f.p(), f.k() * ext_degree)?;
            let set = conj_set(&a, &b, &search, *oracle_bound)?;
            let aut = if search.q() <= *oracle_bound {
                aut_group_bruteforce(&a, &search, *oracle_bound)?
            } else {
                aut_group(&a, &search)?
            };
            // nonempty sets are cosets of Aut
            let coset_ok = set.is_empty() || set.len() == aut.order();
            Ok(Outcome {
                ok: coset_ok,
                json: envelope(
                    "conj",
                    json!({
                        "search_field": field_json(&search),
                        "count": set.len(),
                        "conjugators": set.iter().map(|m| m.format(&search)).collect::<Vec<_>>(),
                        "aut_order": aut.order(),
                        "coset_size_matches": coset_ok,
                    }),
                ),
                csv: None,
            })
        }
        Command::Invariants {
            group,
            q,
            degree,
            max_degree,
            character,
        } => {
            let g = match group.to_ascii_lowercase().as_str() {
                "sl2" => MatrixGroup::sl2(*q)?,
                "gl2" => MatrixGroup::gl2(*q)?,
                other => return Err(Error::Invalid(format!("unknown group {other}"))),
            };
            let chi = parse_character(character)?;
            let hi = max_degree.unwrap_or(*degree);
            let mut out = Vec::new();
            for d in *degree..=hi {
                let basis = invariants_of_degree(&g, d, &chi)?;
                out.push(json!({
                    "degree": d,
                    "dimension": basis.len(),
                    "basis": basis.iter().map(|h| h.format()).collect::<Vec<_>>(),
                }));
            }
            Ok(Outcome {
                ok: true,
                json: envelope(
                    "invariants",
                    json!({
                        "group": group,
                        "q": q,
                        "group_order": g.order(),
                        "character": character,
                        "degrees": out,
                    }),
                ),
                csv: None,
            })
        }
        Command::Dm { f, g, field } => {
            let fld = field.field()?;
            let q = Some(field.q.unwrap_or(fld.q() as u64));
            let gp = parse_hom(&fld, g, q, 0)?;
            let fp = parse_hom(&fld, f, q, gp.degree().saturating_sub(2))?;
            let m = dm_map(&fp, &gp)?;
            let mut body = json!({
                "f": fp.format(),
                "g": gp.format(),
                "map": m.to_json(),
                "degree": m.degree(),
                "nominal_degree": gp.degree().saturating_sub(1),
            });
            if m.degree() >= 2 {
                let r = aut_group_auto(&m, AutOptions::default())?;
                body["aut"] = r.to_json();
                body["order"] = json!(r.order());
                body["label"] = json!(r.group.label().to_string());
            } else {
                body["note"] = json!("degree below 2; no automorphism group computed");
            }
            Ok(Outcome {
                ok: true,
                json: envelope("dm", body),
                csv: None,
            })
        }
        Command::Locus {
            p,
            k,
            sigma1,
            sigma2,
            map,
        } => {
            let f = gf(*p, k.unwrap_or(1))?;
            let pt = match (map, sigma1, sigma2) {
                (Some(m), None, None) => sigma_invariants(&parse_map(&f, m)?)?,
                (None, Some(a), Some(b)) => {
                    ModuliPoint::new(&f, parse_const(&f, a)?, parse_const(&f, b)?)
                }
                _ => {
                    return Err(Error::Invalid(
                        "give either --map or both --sigma1 and --sigma2".into(),
                    ))
                }
            };
            let v = locus_verdict(*p, &pt)?;
            Ok(Outcome {
                ok: true,
                json: envelope(
                    "locus",
                    json!({
                        "field": field_json(&f),
                        "point": pt.to_json(),
                        "multiplier_polynomial": format_upoly(&f, &multiplier_polynomial(&pt)),
                        "verdict": v.to_json(),
                    }),
                ),
                csv: None,
            })
        }
        Command::Census {
            q,
            oracle_bound,
            ext_degree,
            jobs,
        } => {
            let t = census(
                *q,
                CensusOptions {
                    ext_degree: *ext_degree,
                    oracle_bound: *oracle_bound,
                    jobs: *jobs,
                },
            )?;
            let ok = t.all_agree() && t.oracle_mismatches == 0;
            Ok(Outcome {
                ok,
                csv: Some(t.to_csv()),
                json: envelope("census", t.to_json().as_object().cloned().map(Value::Object).unwrap_or_default()),
            })
        }
        Command::Selftest => {
            let results = run_all();
            let passed = results.iter().filter(|r| r.passed).count();
            let ok = passed == results.len();
            Ok(Outcome {
                ok,
                json: envelope(
                    "selftest",
                    json!({
                        "passed": passed,
                        "total": results.len(),
                        "results": results,
                    }),
                ),
                csv: None,
            })
        }
    }
}

fn parse_character(s: &str) -> Result<Character> {
    let s = s.trim().to_ascii_lowercase();
    match s.as_str() {
        "trivial" | "1" => Ok(Character::Trivial),
        "det" => Ok(Character::DetPow(1)),
        _ => {
            let k = s
                .strip_prefix("det^")
                .and_then(|k| k.parse::<i64>().ok())
                .ok_or_else(|| Error::Invalid(format!("unknown character {s}")))?;
            Ok(Character::DetPow(k))
        }
    }
}

fn is_usage(e: &Error) -> bool {
    !matches!(e, Error::Internal(_))
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let is_census = matches!(cli.cmd, Command::Census { .. });
    let format = cli.format.unwrap_or(if is_census { Format::Csv } else { Format::Json });
    if format == Format::Csv && !is_census {
        return (2, "error: --format csv is only available for census\n".into());
    }
    let outcome = match run_cmd(&cli) {
        Ok(o) => o,
        Err(e) => {
            let code = if is_usage(&e) { 2 } else { 1 };
            let body = envelope("error", json!({ "error": e.to_string() }));
            return (code, format!("{}\n", serde_json::to_string_pretty(&body).expect("json")));
        }
    };
    let text = match format {
        Format::Csv => outcome.csv.unwrap_or_default(),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&outcome.json).expect("json")
        ),
    };
    let code = if outcome.ok { 0 } else { 1 };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => (code, String::new()),
            Err(e) => (1, format!("error: cannot write {}: {e}\n", path.display())),
        },
        None => (code, text),
    }
}
