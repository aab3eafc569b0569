use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use sl2act_core::cayley::{enumerate_group, walk_operator, GenerationReport};
use sl2act_core::dynamics::{
    build_truncation, equicontinuity_defect, koopman_gap, orbit_transitivity, Cocycle, CocycleKind, CyclicClosure,
    DefectConfig, Point, ResidueClass, SkewProductSystem, TruncatedProduct, DEFAULT_PRODUCT_CAPACITY,
};
use sl2act_core::rng::PRNG_NAME;
use sl2act_core::sl2::{canonical_generators, odd_primes_between, GeneratorSet, Generators, IntMat2, Prime};
use sl2act_core::spectra::{gap_scan, min_gap, solve, IterativeConfig, MethodChoice, RowFlag, ScanConfig, SolverConfig};
use sl2act_core::words::freeness_scan;

use crate::args::{ClassArg, Command, Format, GensArg, MethodArgs, RunConfig};
use crate::emit::{flat_csv, scan_csv, to_json};
use crate::error::{exit, CliError};
use crate::table_dump::write_table;

/// A finished report and the status it should exit with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub exit: i32,
    /// Human-readable summary for stderr.
    pub note: Option<String>,
}

pub fn generators(cfg: &RunConfig) -> Result<Generators, CliError> {
    let g = canonical_generators();
    match &cfg.c_override {
        None => Ok(g),
        Some(s) => Ok(g.with_c(parse_matrix(s)?)),
    }
}

/// Parses four integers separated by commas and/or whitespace.
pub fn parse_matrix(s: &str) -> Result<IntMat2, CliError> {
    let parts: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!("expected 4 matrix entries, got {:?}", s)));
    }
    let mut e = Vec::with_capacity(4);
    for p in parts {
        e.push(
            p.parse::<BigInt>()
                .map_err(|_| CliError::Usage(format!("bad integer {p:?}")))?,
        );
    }
    let [a, b, c, d]: [BigInt; 4] = e.try_into().expect("four entries");
    Ok(IntMat2::new(a, b, c, d)?)
}

/// One matrix per line; `#` starts a comment.
pub fn read_generators_file(path: &Path) -> Result<Vec<IntMat2>, CliError> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_matrix)
        .collect()
}

fn set_of(g: GensArg) -> GeneratorSet {
    match g {
        GensArg::A => GeneratorSet::A,
        GensArg::Ab => GeneratorSet::AB,
        GensArg::Abc => GeneratorSet::ABC,
    }
}

fn method_of(m: MethodArgs) -> MethodChoice {
    if m.dense {
        MethodChoice::Dense
    } else if m.iterative {
        MethodChoice::Iterative
    } else {
        MethodChoice::Auto
    }
}

fn solver_config(method: MethodArgs, tol: f64, max_iter: usize, seed: u64) -> Result<SolverConfig, CliError> {
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    Ok(SolverConfig {
        method: method_of(method),
        iterative: IterativeConfig {
            tol,
            max_iter,
            seed,
            ..Default::default()
        },
        ..Default::default()
    })
}

fn prime(v: u64) -> Result<Prime, CliError> {
    Ok(Prime::new(v)?)
}

fn generator_strings(g: &Generators) -> Value {
    json!({
        "x": g.x.to_string(),
        "y": g.y.to_string(),
        "a": g.a.to_string(),
        "b": g.b.to_string(),
        "c": g.c.to_string(),
    })
}

fn render<T: Serialize>(cfg: &RunConfig, report: &T) -> Result<String, CliError> {
    match cfg.format() {
        Format::Json => to_json(report),
        Format::Csv => flat_csv(&serde_json::to_value(report)?),
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let gens = generators(cfg)?;
    let config = serde_json::to_value(cfg)?;
    match &cfg.command {
        Command::Freecheck { rank, max_len, gens: source } => {
            let images = if source == "default" {
                let all = [gens.a.clone(), gens.b.clone(), gens.c.clone()];
                if *rank > all.len() {
                    return Err(CliError::Usage(format!(
                        "default generators have rank at most 3, requested {rank}"
                    )));
                }
                all[..*rank].to_vec()
            } else {
                let images = read_generators_file(Path::new(source))?;
                if images.len() != *rank {
                    return Err(CliError::Usage(format!(
                        "--rank {rank} but {} matrices in {source}",
                        images.len()
                    )));
                }
                images
            };
            let report = freeness_scan(&images, *max_len);
            let names: &[&str] = if source == "default" { &["a", "b", "c"] } else { &[] };
            let witness = report.witness.as_ref().map(|w| w.display_with(names));
            let body = json!({
                "config": config,
                "images": images.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "rank": report.rank,
                "max_length": report.max_length,
                "words_checked": report.words_checked,
                "free": report.is_free(),
                "witness": witness,
                "witness_letters": report.witness.as_ref().map(|w| w.letters().iter().map(|l| (l.generator, l.exponent())).collect::<Vec<_>>()),
            });
            let (exit, note) = match &witness {
                Some(w) => (exit::REFUTED, Some(format!("freeness refuted: {w} evaluates to the identity"))),
                None => (exit::OK, None),
            };
            Ok(Outcome {
                body: render(cfg, &body)?,
                exit,
                note,
            })
        }

        Command::Enumerate { prime: p, gens: set, dump } => {
            let p = prime(*p)?;
            let table = enumerate_group(p, &gens.set(set_of(*set)))?;
            if let Some(path) = dump {
                write_table(&table, std::io::BufWriter::new(fs::File::create(path)?))?;
            }
            let report = GenerationReport::from_table(&table);
            let body = json!({
                "config": config,
                "generators": generator_strings(&gens),
                "prime": report.prime,
                "subgroup_size": report.subgroup_size,
                "full_group_size": report.full_group_size,
                "generated": report.generated,
                "degree": table.degree(),
            });
            let (exit, note) = if report.generated {
                (exit::OK, None)
            } else {
                (
                    exit::REFUTED,
                    Some(format!(
                        "not generated mod {p}: subgroup of order {} in {}",
                        report.subgroup_size, report.full_group_size
                    )),
                )
            };
            Ok(Outcome {
                body: render(cfg, &body)?,
                exit,
                note,
            })
        }

        Command::Gap {
            prime: p,
            gens: set,
            method,
            tol,
            max_iter,
        } => {
            let p = prime(*p)?;
            let solver = solver_config(*method, *tol, *max_iter, cfg.seed)?;
            let table = enumerate_group(p, &gens.set(set_of(*set)))?;
            let generated = table.is_full_group();
            let op = walk_operator(&table);
            let report = solve(&op, &solver)?.report;
            let body = json!({
                "config": config,
                "generators": generator_strings(&gens),
                "prime": p,
                "generated": generated,
                "report": report,
                "prng": PRNG_NAME,
            });
            let (exit, note) = if report.converged {
                (exit::OK, None)
            } else {
                (
                    exit::FAILURE,
                    Some(format!("not converged: residual {} > tol {}", report.residual_norm, tol)),
                )
            };
            Ok(Outcome {
                body: render(cfg, &body)?,
                exit,
                note,
            })
        }

        Command::Scan {
            pmin,
            pmax,
            class,
            gens: set,
            method,
            tol,
        } => {
            let solver = solver_config(*method, *tol, IterativeConfig::default().max_iter, cfg.seed)?;
            let primes: Vec<Prime> = odd_primes_between(*pmin, *pmax)
                .filter(|p| match class {
                    ClassArg::One => p.residue_class_mod4() == 1,
                    ClassArg::Three => p.residue_class_mod4() == 3,
                    ClassArg::All => true,
                })
                .collect();
            let rows = gap_scan(
                &primes,
                set_of(*set),
                &gens,
                &ScanConfig {
                    solver,
                    ..Default::default()
                },
            );
            let least = min_gap(&rows);
            let not_generated: Vec<u32> = rows
                .iter()
                .filter(|r| r.flag == RowFlag::NotGenerated)
                .map(|r| r.p)
                .collect();
            let body = match cfg.format() {
                Format::Csv => scan_csv(&rows)?,
                Format::Json => to_json(&json!({
                    "config": config,
                    "generators": generator_strings(&gens),
                    "rows": rows,
                    "min_gap": least,
                    "not_generated": not_generated,
                    "prng": PRNG_NAME,
                }))?,
            };
            let note = Some(format!(
                "{} primes scanned, min gap {}, not generated: {:?}",
                rows.len(),
                least.map_or("n/a".to_string(), |g| g.to_string()),
                not_generated
            ));
            Ok(Outcome {
                body,
                exit: exit::OK,
                note,
            })
        }

        Command::Simulate {
            kprimes,
            lprimes,
            cocycle,
            steps,
            method,
            tol,
        } => {
            let sys = build_system(&gens, kprimes, lprimes, cocycle)?;
            let solver = solver_config(*method, *tol, *steps, cfg.seed)?;
            let orbits = orbit_transitivity(&sys, DEFAULT_PRODUCT_CAPACITY)?;
            let gap = koopman_gap(&sys, &solver, DEFAULT_PRODUCT_CAPACITY)?;
            let body = json!({
                "config": config,
                "generators": generator_strings(&gens),
                "kprimes": sys.base().primes(),
                "lprimes": sys.fiber().primes(),
                "size": sys.size(),
                "closure_order": sys.closure().order(),
                "cosets": sys.closure().num_cosets(),
                "cocycle": sys.cocycle().kind(),
                "transitive": orbits.transitive,
                "orbit_count": orbits.orbit_count,
                "identity_orbit_size": orbits.identity_orbit_size,
                "gap_report": gap,
                "gap_positive": gap.has_gap(),
                "prng": PRNG_NAME,
            });
            let (exit, note) = if gap.converged {
                (exit::OK, None)
            } else {
                (exit::FAILURE, Some(format!("Koopman gap not converged within {steps} steps")))
            };
            Ok(Outcome {
                body: render(cfg, &body)?,
                exit,
                note,
            })
        }

        Command::Defect {
            kprimes,
            lprimes,
            cocycle,
            delta,
            horizon,
            samples,
        } => {
            let sys = build_system(&gens, kprimes, lprimes, cocycle)?;
            let report = equicontinuity_defect(
                &sys,
                &DefectConfig {
                    delta: *delta,
                    horizon: *horizon,
                    samples: *samples,
                    seed: cfg.seed,
                },
            )?;
            let coords = |p: Point| {
                json!({
                    "base": sys.base().decode(p.base),
                    "fiber": sys.fiber().decode(p.fiber),
                })
            };
            let body = json!({
                "config": config,
                "generators": generator_strings(&gens),
                "kprimes": sys.base().primes(),
                "lprimes": sys.fiber().primes(),
                "cocycle": sys.cocycle().kind(),
                "defect": report.defect,
                "delta": report.delta,
                "attaining_pair": [coords(report.attaining_pair.0), coords(report.attaining_pair.1)],
                "attaining_step": report.attaining_step,
                "min_positive_distance": report.min_positive_distance,
                "horizon": report.horizon,
                "samples": report.samples,
                "prng": PRNG_NAME,
            });
            Ok(Outcome {
                body: render(cfg, &body)?,
                exit: exit::OK,
                note: None,
            })
        }
    }
}

fn truncation(
    class: ResidueClass,
    values: &[u64],
    gens: &Generators,
    set: GeneratorSet,
) -> Result<TruncatedProduct, CliError> {
    let primes = values.iter().map(|&v| prime(v)).collect::<Result<Vec<_>, _>>()?;
    Ok(build_truncation(class, &primes, &gens.set(set), DEFAULT_PRODUCT_CAPACITY)?)
}

pub fn build_system(
    gens: &Generators,
    kprimes: &[u64],
    lprimes: &[u64],
    cocycle: &str,
) -> Result<SkewProductSystem, CliError> {
    let base = truncation(ResidueClass::One, kprimes, gens, GeneratorSet::ABC)?;
    let fiber = truncation(ResidueClass::Three, lprimes, gens, GeneratorSet::AB)?;
    let order = CyclicClosure::new(&base, base.project(&gens.c))
        .map_err(CliError::from)?
        .order();
    let phi0 = parse_cocycle(cocycle, order, &fiber)?;
    debug_assert!(matches!(
        phi0.kind(),
        CocycleKind::Trivial | CocycleKind::SeededRandom { .. } | CocycleKind::Table
    ));
    Ok(SkewProductSystem::new(base, fiber, gens, phi0)?)
}

/// `trivial`, `random:SEED`, or `table:PATH` where the file holds a JSON
/// list with one fiber element per power of c, each a list of per-factor
/// indices.
pub fn parse_cocycle(spec: &str, order: usize, fiber: &TruncatedProduct) -> Result<Cocycle, CliError> {
    if spec == "trivial" {
        return Ok(Cocycle::trivial(order));
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| CliError::Usage(format!("bad cocycle seed {seed:?}")))?;
        return Ok(Cocycle::seeded_random(order, fiber, seed));
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let tuples: Vec<Vec<u32>> = serde_json::from_str(&fs::read_to_string(path)?)
            .map_err(|e| CliError::Usage(format!("cocycle table {path}: {e}")))?;
        let mut values = Vec::with_capacity(tuples.len());
        for t in tuples {
            let in_range = t.len() == fiber.num_factors()
                && t.iter()
                    .zip(fiber.factor_tables())
                    .all(|(&i, table)| (i as usize) < table.size());
            if !in_range {
                return Err(CliError::Usage(format!("cocycle entry {t:?} is not a fiber element")));
            }
            values.push(fiber.encode(&t));
        }
        return Ok(Cocycle::from_table(values, order, fiber)?);
    }
    Err(CliError::Usage(format!(
        "unknown cocycle {spec:?}; expected trivial, random:SEED or table:PATH"
    )))
}
