use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use geomrep::autsolver::{correlation_group, verify_representation, RepresentationReport, Verdict, FINGERPRINT_BOUND};
use geomrep::constructions::{
    complete_graph_geometry, coset_geometry, cube_geometry, dihedral_geometry, gq22,
    hemidodecahedron_petrie, pgl_correlation_group, pgl_cross_ratio_geometry, CosetGeometrySpec,
    FacePetrieRule,
};
use geomrep::freegroup::{
    bounded_ft_check, k_group, rc_check_exact, subgroup_action, ParabolicFamily,
};
use geomrep::{FiniteField, IncidenceSystem, PermGroup, Permutation, TypeId};
use num_bigint::BigUint;
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const DEFAULT_SEED: u64 = 20240917;
const RAW_SEARCH_WARNING: usize = 1000;

#[derive(Parser)]
#[command(name = "geomrep", version, about = "Incidence geometric representations of groups")]
struct Cli {
    /// Seed for randomized internals, echoed in reports.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Upper bound on worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Include wall-clock timings in reports (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a geometry and print it in the interchange format.
    Build {
        #[command(subcommand)]
        construction: Construction,
    },
    /// Check predicates of a geometry file.
    Check {
        file: PathBuf,
        /// Comma-separated subset of valid, geometry, firm, rc.
        #[arg(long, default_value = "valid,geometry,firm,rc")]
        properties: String,
    },
    /// Compute the correlation group of a geometry file.
    Aut { file: PathBuf },
    /// Build a construction and compare its groups with expected orders.
    Verify {
        #[command(subcommand)]
        construction: Construction,
        /// Expected order of the type-preserving group.
        #[arg(long, global = true)]
        inn: Option<u64>,
        /// Expected order of the full correlation group.
        #[arg(long, global = true)]
        aut: Option<u64>,
    },
    /// Free-group subgroup checks.
    Free {
        #[command(subcommand)]
        family: FreeFamily,
    },
    /// Convert a geometry file.
    Export {
        file: PathBuf,
        /// Graphviz DOT of the incidence graph.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// Canonical interchange JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Clone)]
enum Construction {
    Dihedral(SizeArg),
    Complete(SizeArg),
    Gq22,
    Cube {
        /// Omit incidences between adjacent vertices of the two classes.
        #[arg(long)]
        no_vertex_incidence: bool,
    },
    Hemidodeca {
        #[arg(long, default_value = "shared-edge")]
        rule: FacePetrieRule,
    },
    Pgl {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        q: u32,
        /// Degree of the base field over the prime field.
        #[arg(long, default_value_t = 1)]
        base_degree: u32,
        /// Keep only cross-ratio types in the orbit of the primitive element.
        #[arg(long)]
        min_poly: bool,
    },
    Coset {
        #[arg(long)]
        group: PathBuf,
    },
}

#[derive(Args, Clone)]
struct SizeArg {
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand)]
enum FreeFamily {
    /// The rose-cover subgroup family of F_n.
    Rose {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Comma-separated subset of independence, intersections, rc, ft, action, or all.
        #[arg(long, default_value = "all")]
        check: String,
        /// Word length bound for the bounded flag-transitivity check.
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
}

#[derive(Deserialize)]
struct GroupFile {
    degree: usize,
    generators: Vec<Vec<usize>>,
    subgroups: Vec<SubgroupFile>,
}

#[derive(Deserialize)]
struct SubgroupFile {
    label: Option<String>,
    generators: Vec<Vec<usize>>,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

struct Output {
    text: String,
    code: u8,
}

struct Context {
    seed: u64,
    threads: usize,
    timings: bool,
    command: String,
}

impl Context {
    fn report(&self, digest: String, results: Value, elapsed: f64) -> String {
        let mut doc = json!({
            "tool": "geomrep",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.seed,
            "threads": self.threads,
            "input_digest": digest,
            "results": results,
        });
        if self.timings {
            doc["timings"] = json!({ "total_seconds": elapsed });
        }
        serde_json::to_string_pretty(&doc).expect("json value") + "\n"
    }
}

fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<(IncidenceSystem, String), Failure> {
    let text = read(path)?;
    let sys = IncidenceSystem::from_json(&text).map_err(usage)?;
    let report = sys.validate();
    if !report.ok {
        let v = serde_json::to_string(&report.violations).expect("json");
        return Err(usage(format!("invalid incidence system: {v}")));
    }
    Ok((sys, digest(text.as_bytes())))
}

fn perm(degree: usize, images: &[usize]) -> Result<Permutation, Failure> {
    if images.len() != degree {
        return Err(usage(format!("generator of length {} on degree {degree}", images.len())));
    }
    Permutation::from_usize_images(images).map_err(usage)
}

fn coset_spec(path: &Path) -> Result<(CosetGeometrySpec, String), Failure> {
    let text = read(path)?;
    let file: GroupFile = serde_json::from_str(&text).map_err(|e| usage(format!("group file: {e}")))?;
    let group = |gens: &[Vec<usize>]| -> Result<PermGroup, Failure> {
        let perms = gens.iter().map(|g| perm(file.degree, g)).collect::<Result<Vec<_>, _>>()?;
        PermGroup::new(file.degree, perms).map_err(usage)
    };
    let mut spec = CosetGeometrySpec::new(
        group(&file.generators)?,
        file.subgroups.iter().map(|s| group(&s.generators)).collect::<Result<_, _>>()?,
    );
    for (i, s) in file.subgroups.iter().enumerate() {
        if let Some(label) = &s.label {
            spec.labels[i] = TypeId(label.clone());
        }
    }
    Ok((spec, digest(text.as_bytes())))
}

fn construction_key(c: &Construction) -> String {
    match c {
        Construction::Dihedral(a) => format!("dihedral n={}", a.n),
        Construction::Complete(a) => format!("complete n={}", a.n),
        Construction::Gq22 => "gq22".into(),
        Construction::Cube { no_vertex_incidence } => format!("cube vertex_incidence={}", !no_vertex_incidence),
        Construction::Hemidodeca { rule } => format!("hemidodeca rule={rule}"),
        Construction::Pgl { n, q, base_degree, min_poly } => {
            format!("pgl n={n} q={q} base_degree={base_degree} min_poly={min_poly}")
        }
        Construction::Coset { group } => format!("coset group={}", group.display()),
    }
}

fn field_for(q: u32) -> Result<FiniteField, Failure> {
    let p = (2..=q).find(|p| q % p == 0).ok_or_else(|| usage("q must be a prime power"))?;
    let mut k = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(usage("q must be a prime power"));
    }
    FiniteField::new(p, k).map_err(usage)
}

/// Builds a construction; the digest covers file contents for coset input.
fn build(c: &Construction) -> Result<(IncidenceSystem, String), Failure> {
    let key_digest = || digest(construction_key(c).as_bytes());
    let sys = match c {
        Construction::Dihedral(a) => dihedral_geometry(a.n).map_err(usage)?,
        Construction::Complete(a) => complete_graph_geometry(a.n).map_err(usage)?,
        Construction::Gq22 => gq22(),
        Construction::Cube { no_vertex_incidence } => cube_geometry(!no_vertex_incidence),
        Construction::Hemidodeca { rule } => hemidodecahedron_petrie(*rule),
        Construction::Pgl { n, q, base_degree, min_poly } => {
            let field = field_for(*q)?;
            pgl_cross_ratio_geometry(*n, &field, *base_degree, *min_poly).map_err(usage)?.system
        }
        Construction::Coset { group } => {
            let (spec, d) = coset_spec(group)?;
            return Ok((coset_geometry(&spec).map_err(usage)?.system, d));
        }
    };
    Ok((sys, key_digest()))
}

fn run_build(c: &Construction) -> Result<Output, Failure> {
    let (sys, _) = build(c)?;
    Ok(Output {
        text: sys.to_json() + "\n",
        code: 0,
    })
}

fn run_check(ctx: &Context, file: &Path, properties: &str) -> Result<Output, Failure> {
    let wanted: Vec<&str> = properties.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if let Some(bad) = wanted.iter().find(|p| !["valid", "geometry", "firm", "rc"].contains(p)) {
        return Err(usage(format!("unknown property {bad:?}")));
    }
    let start = Instant::now();
    let (sys, d) = load_system(file)?;
    let mut results = BTreeMap::new();
    for p in wanted {
        let value = match p {
            "valid" => true,
            "geometry" => sys.is_geometry(),
            "firm" => sys.is_firm(),
            _ => sys.is_residually_connected(),
        };
        results.insert(p.to_string(), value);
    }
    Ok(Output {
        text: ctx.report(d, json!(results), start.elapsed().as_secs_f64()),
        code: 0,
    })
}

fn run_aut(ctx: &Context, file: &Path) -> Result<Output, Failure> {
    let start = Instant::now();
    let (sys, d) = load_system(file)?;
    if sys.len() > RAW_SEARCH_WARNING {
        eprintln!(
            "warning: raw correlation search on {} elements may be slow; `verify pgl` uses restriction-extension",
            sys.len()
        );
    }
    let r = correlation_group(&sys).map_err(usage)?;
    let mut results = r.to_json();
    if let Ok(fp) = r.aut_group().fingerprint(FINGERPRINT_BOUND) {
        results["fingerprint"] = serde_json::to_value(fp).expect("json");
    }
    Ok(Output {
        text: ctx.report(d, results, start.elapsed().as_secs_f64()),
        code: 0,
    })
}

fn run_verify(ctx: &Context, c: &Construction, inn: Option<u64>, aut: Option<u64>) -> Result<Output, Failure> {
    let (Some(inn), Some(aut)) = (inn, aut) else {
        return Err(usage("verify needs --inn and --aut"));
    };
    let start = Instant::now();
    let key = construction_key(c);
    let (report, d) = match c {
        Construction::Pgl { n, q, base_degree, min_poly } => {
            let field = field_for(*q)?;
            let geom = pgl_cross_ratio_geometry(*n, &field, *base_degree, *min_poly).map_err(usage)?;
            let res = pgl_correlation_group(&geom).map_err(usage)?;
            let mut report =
                RepresentationReport::from_result(key.clone(), BigUint::from(inn), BigUint::from(aut), res.result.clone())
                    .to_json();
            report["restriction_extension"] = res.to_json();
            (report, digest(key.as_bytes()))
        }
        _ => {
            let (sys, d) = build(c)?;
            (verify_representation(key, &sys, inn, aut).to_json(), d)
        }
    };
    let verdict = report["verdict"].as_str().unwrap_or_default().to_string();
    let code = if verdict == Verdict::Representation.to_string() { 0 } else { 1 };
    Ok(Output {
        text: ctx.report(d, report, start.elapsed().as_secs_f64()),
        code,
    })
}

fn subsets(r: usize, sizes: std::ops::RangeInclusive<usize>) -> Vec<Vec<usize>> {
    (0..1usize << r)
        .map(|m| (0..r).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|j| sizes.contains(&j.len()))
        .collect()
}

fn run_free(ctx: &Context, n: usize, check: &str, max_len: usize) -> Result<Output, Failure> {
    const CHECKS: [&str; 5] = ["independence", "intersections", "rc", "ft", "action"];
    let mut wanted: Vec<&str> = check.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if wanted.contains(&"all") {
        wanted = CHECKS.to_vec();
    }
    if let Some(bad) = wanted.iter().find(|c| !CHECKS.contains(c)) {
        return Err(usage(format!("unknown check {bad:?}")));
    }
    if max_len > 10 {
        return Err(usage("--max-len must be at most 10"));
    }
    let start = Instant::now();
    let fam = ParabolicFamily::rose_cover(n).map_err(usage)?;
    let r = fam.len();
    let mut results = serde_json::Map::new();
    let mut pass = true;
    results.insert("generators".into(), json!(fam.generators));
    for c in wanted {
        let value = match c {
            "independence" => {
                let ok = fam.ambient.rank() == r;
                pass &= ok;
                json!({ "rank": fam.ambient.rank(), "generators": r, "pass": ok,
                        "vertices": fam.ambient.vertex_count(), "edges": fam.ambient.edge_count() })
            }
            "intersections" => {
                let mut ok = true;
                for j in subsets(r, 2..=3) {
                    ok &= fam.parabolic(&j).map_err(usage)?.same_subgroup(&fam.common_generators(&j));
                }
                let all: Vec<usize> = (0..r).collect();
                let full = fam.parabolic(&all).map_err(usage)?;
                let trivial = full.rank() == 0;
                pass &= ok && trivial;
                json!({ "pairs_and_triples_pass": ok, "full_intersection_trivial": trivial })
            }
            "rc" => {
                let rep = rc_check_exact(&fam).map_err(usage)?;
                pass &= rep.pass;
                serde_json::to_value(rep).expect("json")
            }
            "ft" => {
                let mut reports = Vec::new();
                let mut ok = true;
                for j in subsets(r, 0..=r) {
                    for i in (0..r).filter(|i| !j.contains(i)) {
                        let rep = bounded_ft_check(&fam, &j, i, max_len).map_err(usage)?;
                        ok &= rep.pass;
                        if !rep.pass {
                            reports.push(rep);
                        }
                    }
                }
                pass &= ok;
                json!({ "max_len": max_len, "pass": ok, "failures": reports })
            }
            _ => {
                let autos = k_group(n).map_err(usage)?;
                let (perms, group) = subgroup_action(&autos, &fam).map_err(usage)?;
                let fp = group.fingerprint(FINGERPRINT_BOUND).ok();
                json!({
                    "generator_images": perms.iter().map(|p| p.images().to_vec()).collect::<Vec<_>>(),
                    "order": group.order().to_string(),
                    "fingerprint": fp,
                })
            }
        };
        results.insert(c.to_string(), value);
    }
    results.insert("pass".into(), json!(pass));
    let d = digest(format!("free rose n={n} check={check} max_len={max_len}").as_bytes());
    Ok(Output {
        text: ctx.report(d, Value::Object(results), start.elapsed().as_secs_f64()),
        code: if pass { 0 } else { 1 },
    })
}

fn run_export(file: &Path, dot: bool) -> Result<Output, Failure> {
    let (sys, _) = load_system(file)?;
    let text = if dot { sys.to_dot() } else { sys.to_json() + "\n" };
    Ok(Output { text, code: 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        seed: cli.seed,
        threads: cli.threads.max(1),
        timings: cli.timings,
        command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
    };
    let result = match &cli.command {
        Command::Build { construction } => run_build(construction),
        Command::Check { file, properties } => run_check(&ctx, file, properties),
        Command::Aut { file } => run_aut(&ctx, file),
        Command::Verify { construction, inn, aut } => run_verify(&ctx, construction, *inn, *aut),
        Command::Free {
            family: FreeFamily::Rose { n, check, max_len },
        } => run_free(&ctx, *n, check, *max_len),
        Command::Export { file, dot, json: _ } => run_export(file, *dot),
    };
    match result {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &out.text).map_err(|e| e.to_string()),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
