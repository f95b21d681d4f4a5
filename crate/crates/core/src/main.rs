//! `perim` — exact counting, constructive maps, and exhaustive verification
//! for perimeter-indexed partition and composition families.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde::Serialize;

use perim::emit::{self, Format};
use perim::{
    fib_chain_12_from_odd, fib_chain_gt1_from_12, ft1_map, ft2_map, phi_preimage, phi_traced,
    pi, pi_inverse, rank_composition, rotate_residues, sweep, sweep_all_default,
    unrank_composition, unrotate_residues, verify_fibonacci, verify_fu_tang, verify_huang,
    verify_lemma, verify_main, verify_munagi, verify_proposition, Composition, Error,
    FamilyObject, FamilySpec, Partition, PhiTrace, RPolicy, ResidueSet, Suite, SweepConfig,
    SweepReport, TheoremReport, VerifyOptions, DEFAULT_CAP,
};

#[derive(Parser)]
#[command(
    name = "perim",
    version,
    about = "Exact combinatorics of the partition perimeter",
    after_help = "Families are written kind:params, e.g. `h:n=12,m=3`, \
                  `ft1:n=7,m=1,k=1`, `lemma-residue:n=10,m=4,R=1,3`. \
                  Partitions and compositions cross the boundary as \
                  comma-separated positive integers with no whitespace."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the members of a family
    Count {
        /// Family in canonical text form, e.g. h:n=4,m=3
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// List the members of a family in canonical rank order
    Enumerate {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Apply one of the named maps to an explicit partition or composition
    Map {
        /// One of: pi, pi-inverse, conjugate, rotate, unrotate, phi,
        /// phi-preimage, ft1, ft2, fib12, fib-gt1
        #[arg(long)]
        map: String,
        /// Comma-separated parts of the input object
        #[arg(long)]
        input: String,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        /// Comma-separated residues for rotate/unrotate
        #[arg(long = "R")]
        residues: Option<String>,
        /// Print the step-by-step trace (phi only)
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Verify one statement at a parameter point, or `--suite all` for the
    /// full default grid
    Verify {
        /// One of: main, fu-tang, lemma, munagi, huang, proposition,
        /// fibonacci, all
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long = "R")]
        residues: Option<String>,
        /// Worker threads for sharded scans (0 = all cores)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Run suites over a parameter grid: n in 1..=N, m up to M, k up to K
    Sweep {
        /// Comma-separated suites, or `all`
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long, default_value_t = 12)]
        n: u64,
        #[arg(long, default_value_t = 6)]
        m: u64,
        #[arg(long, default_value_t = 3)]
        k: u64,
        /// Residue-set policy for the lemma grid: all or singletons
        #[arg(long, default_value = "all")]
        r_policy: String,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Render a Young diagram (or an m-modular diagram when --m is given)
    Render {
        #[arg(long)]
        input: String,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Canonical rank of a composition
    Rank {
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Composition of n at a canonical index
    Unrank {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        index: u64,
        #[arg(long, default_value = "text")]
        format: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome { stdout, failed }) => {
            print!("{stdout}");
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

struct Outcome {
    stdout: String,
    failed: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            failed: false,
        }
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Count { family, cap, format } => {
            let format = Format::from_str(&format)?;
            let spec: FamilySpec = family.parse()?;
            let count = spec.count(cap)?;
            Ok(Outcome::ok(emit::emit_count(&spec.to_string(), count, format)))
        }
        Command::Enumerate { family, cap, format } => {
            let format = Format::from_str(&format)?;
            let spec: FamilySpec = family.parse()?;
            let members: Vec<FamilyObject> = spec.enumerate(cap)?.collect();
            Ok(Outcome::ok(emit::emit_members(&members, format)))
        }
        Command::Map { map, input, m, k, residues, trace, format } => {
            let format = Format::from_str(&format)?;
            run_map(&map, &input, m, k, residues.as_deref(), trace, format)
        }
        Command::Verify { suite, n, m, k, residues, workers, cap, format } => {
            let format = Format::from_str(&format)?;
            if suite == "all" {
                let report = sweep_all_default(workers, cap)?;
                eprintln!(
                    "verified {} points in {:.1?}",
                    report.points, report.elapsed
                );
                return Ok(Outcome {
                    stdout: emit::emit_sweep(&report, format),
                    failed: !report.passed,
                });
            }
            let suite: Suite = suite.parse()?;
            let opts = VerifyOptions { workers, cap };
            let report = run_verify_point(suite, n, m, k, residues.as_deref(), &opts)?;
            eprintln!("verified in {:.1?}", report.elapsed);
            Ok(Outcome {
                failed: !report.passed,
                stdout: emit::emit_report(&report, format),
            })
        }
        Command::Sweep { suite, n, m, k, r_policy, workers, cap, format } => {
            let format = Format::from_str(&format)?;
            let suites = parse_suites(&suite)?;
            let config = SweepConfig {
                n_max: n,
                m_max: m,
                k_max: k,
                r_policy: match r_policy.as_str() {
                    "all" => RPolicy::AllSubsets,
                    "singletons" => RPolicy::Singletons,
                    other => return Err(Error::parse(other, "expected all or singletons")),
                },
                workers,
                cap,
            };
            let report: SweepReport = sweep(&suites, &config)?;
            eprintln!("swept {} points in {:.1?}", report.points, report.elapsed);
            Ok(Outcome {
                failed: !report.passed,
                stdout: emit::emit_sweep(&report, format),
            })
        }
        Command::Render { input, m, format } => {
            let format = Format::from_str(&format)?;
            let diagram = match m {
                Some(m) => {
                    let c: Composition = input.parse()?;
                    perim::render::render_modular(&c, m)?
                }
                None => {
                    let c: Composition = input.parse()?;
                    perim::render::render_young(c.parts())
                }
            };
            match format {
                Format::Text => Ok(Outcome::ok(diagram.text())),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Rendered<'a> {
                        style: String,
                        lines: &'a [String],
                    }
                    let style = match diagram.style {
                        perim::render::DiagramStyle::Young => "young".to_string(),
                        perim::render::DiagramStyle::Modular(m) => format!("modular-{m}"),
                    };
                    Ok(Outcome::ok(emit::to_json(&Rendered {
                        style,
                        lines: &diagram.lines,
                    })))
                }
                Format::Csv => Err(Error::InvalidParameters(
                    "render supports text and json only".into(),
                )),
            }
        }
        Command::Rank { input, format } => {
            let format = Format::from_str(&format)?;
            let c: Composition = input.parse()?;
            let index = rank_composition(&c);
            match format {
                Format::Text => Ok(Outcome::ok(format!("{}\n", index.index))),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Ranked {
                        n: u64,
                        index: u64,
                    }
                    Ok(Outcome::ok(emit::to_json(&Ranked {
                        n: index.n,
                        index: index.index,
                    })))
                }
                Format::Csv => Ok(Outcome::ok(format!("n,index\n{},{}\n", index.n, index.index))),
            }
        }
        Command::Unrank { n, index, format } => {
            let format = Format::from_str(&format)?;
            let c = unrank_composition(n, index)?;
            match format {
                Format::Text => Ok(Outcome::ok(format!("{c}\n"))),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Unranked {
                        n: u64,
                        index: u64,
                        parts: Vec<u64>,
                    }
                    Ok(Outcome::ok(emit::to_json(&Unranked {
                        n,
                        index,
                        parts: c.parts().to_vec(),
                    })))
                }
                Format::Csv => Ok(Outcome::ok(format!("n,index,parts\n{n},{index},\"{c}\"\n"))),
            }
        }
    }
}

fn parse_suites(names: &[String]) -> Result<Vec<Suite>, Error> {
    if names.is_empty() || names.iter().any(|s| s == "all") {
        return Ok(Suite::ALL.to_vec());
    }
    names.iter().map(|s| s.parse()).collect()
}

fn need(param: Option<u64>, name: &str) -> Result<u64, Error> {
    param.ok_or_else(|| Error::InvalidParameters(format!("--{name} is required for this suite")))
}

fn run_verify_point(
    suite: Suite,
    n: Option<u64>,
    m: Option<u64>,
    k: Option<u64>,
    residues: Option<&str>,
    opts: &VerifyOptions,
) -> Result<TheoremReport, Error> {
    let n = need(n, "n")?;
    match suite {
        Suite::Main => verify_main(n, need(m, "m")?, opts),
        Suite::FuTang => verify_fu_tang(n, need(m, "m")?, k.unwrap_or(0), opts),
        Suite::Lemma => {
            let m = need(m, "m")?;
            let list = residues.ok_or_else(|| {
                Error::InvalidParameters("--R is required for the lemma suite".into())
            })?;
            let set = ResidueSet::new(m, parse_residues(list)?)?;
            verify_lemma(n, &set, opts)
        }
        Suite::Munagi => verify_munagi(n, need(m, "m")?, opts),
        Suite::Huang => verify_huang(n, need(m, "m")?, k.unwrap_or(0), opts),
        Suite::Proposition => verify_proposition(n, need(m, "m")?, need(k, "k")?, opts),
        Suite::Fibonacci => verify_fibonacci(n, opts),
    }
}

fn parse_residues(list: &str) -> Result<Vec<u64>, Error> {
    list.split(',')
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| Error::parse(list, format!("`{tok}` is not a residue")))
        })
        .collect()
}

#[derive(Serialize)]
struct MapOutput<'a> {
    map: &'a str,
    input: Vec<u64>,
    output: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a PhiTrace>,
}

fn trace_table(trace: &PhiTrace) -> String {
    let mut out = String::from("i  j  branch    r  emitted\n");
    for step in &trace.steps {
        let branch = match step.branch {
            perim::PhiBranch::Preserve => "preserve",
            perim::PhiBranch::Split => "split",
        };
        let remainder = step
            .remainder
            .map(|r| r.to_string())
            .unwrap_or_else(|| "-".to_string());
        let emitted: Vec<String> = step.emitted.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(
            out,
            "{}  {}  {:<8}  {}  {}",
            step.source_index,
            step.level,
            branch,
            remainder,
            emitted.join(",")
        );
    }
    out
}

fn run_map(
    map: &str,
    input: &str,
    m: Option<u64>,
    k: Option<u64>,
    residues: Option<&str>,
    trace: bool,
    format: Format,
) -> Result<Outcome, Error> {
    let need_m = || need(m, "m");
    let residue_set = || -> Result<ResidueSet, Error> {
        let list = residues.ok_or_else(|| {
            Error::InvalidParameters("--R is required for this map".into())
        })?;
        ResidueSet::new(need_m()?, parse_residues(list)?)
    };
    let composition = || -> Result<Composition, Error> { input.parse() };
    let partition = || -> Result<Partition, Error> { input.parse() };

    let mut phi_trace = None;
    let output: Option<Vec<u64>> = match map {
        "pi" => Some(pi(&composition()?).parts().to_vec()),
        "pi-inverse" => Some(pi_inverse(&partition()?).parts().to_vec()),
        "conjugate" => Some(partition()?.conjugate().parts().to_vec()),
        "rotate" => Some(rotate_residues(&composition()?, &residue_set()?)?.parts().to_vec()),
        "unrotate" => Some(unrotate_residues(&composition()?, &residue_set()?)?.parts().to_vec()),
        "phi" => {
            let (d, t) = phi_traced(&composition()?, need_m()?)?;
            if trace {
                phi_trace = Some(t);
            }
            Some(d.parts().to_vec())
        }
        "phi-preimage" => {
            phi_preimage(&composition()?, need_m()?)?.map(|c| c.parts().to_vec())
        }
        "ft1" => Some(ft1_map(&composition()?, need_m()?, need(k, "k")?)?.parts().to_vec()),
        "ft2" => Some(ft2_map(&composition()?, need_m()?, need(k, "k")?)?.parts().to_vec()),
        "fib12" => Some(fib_chain_12_from_odd(&composition()?)?.parts().to_vec()),
        "fib-gt1" => Some(fib_chain_gt1_from_12(&composition()?)?.parts().to_vec()),
        other => return Err(Error::parse(other, "unknown map")),
    };

    match format {
        Format::Text => {
            let mut text = match &output {
                Some(parts) => {
                    let joined: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                    format!("{}\n", joined.join(","))
                }
                None => "absent\n".to_string(),
            };
            if let Some(t) = &phi_trace {
                text.push_str(&trace_table(t));
            }
            Ok(Outcome::ok(text))
        }
        Format::Json => Ok(Outcome::ok(emit::to_json(&MapOutput {
            map,
            input: perim::Composition::from_str(input)
                .map(|c| c.parts().to_vec())
                .unwrap_or_default(),
            output,
            trace: phi_trace.as_ref(),
        }))),
        Format::Csv => Err(Error::InvalidParameters(
            "map supports text and json only".into(),
        )),
    }
}
