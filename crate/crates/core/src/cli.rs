//! The `treechoice` command line.
//!
//! Exit codes: 0 when the property holds or output was produced, 1 when a
//! property fails (the witness is printed), 2 for usage and input errors,
//! 3 when the work budget runs out. Structured output is one JSON document
//! on stdout; diagnostics go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::alternative::{parse_list, Alphabet};
use crate::catalog;
use crate::error::{Error, Result};
use crate::io::{self, RuleDoc};
use crate::preference::{Domain, PeakViolation, Preference, Profile};
use crate::rules::{ExtremeRule, Rule};
use crate::theorem::{self, SweepConfig};
use crate::tree::{NodeSet, Tree};
use crate::verification::{pareto_set, CheckReport, Property, Verifier, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "treechoice", version, about = "Extreme rules and strategy-proofness on trees")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads (0 = one per core); never changes the output.
    #[arg(long, default_value_t = 0, global = true)]
    pub jobs: usize,
    /// Maximum rule evaluations per check.
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Seed for sampled corruptions in sweeps.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    Sp,
    Unanimity,
    Anonymity,
    Efficiency,
    All,
}

#[derive(Args, Debug)]
pub struct RuleArgs {
    #[arg(long)]
    pub tree: PathBuf,
    /// Leaf of the extreme rule.
    #[arg(long, conflicts_with = "rule", required_unless_present = "rule")]
    pub leaf: Option<String>,
    /// Rule designation file, e.g. {"type":"extreme","leaf":"a"}.
    #[arg(long)]
    pub rule: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply an extreme rule to a profile.
    Eval {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        profile: PathBuf,
        /// Domain for index-form profiles.
        #[arg(long)]
        domain: Option<PathBuf>,
    },
    /// Path hull of a node set.
    Hull {
        #[arg(long)]
        tree: PathBuf,
        /// Comma-separated nodes.
        #[arg(long)]
        nodes: String,
    },
    /// Node of a set's path hull nearest to a given node.
    Minimizer {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        nodes: String,
    },
    /// Write every single-peaked preference on the tree as a domain file.
    EnumerateSp {
        #[arg(long)]
        tree: PathBuf,
        /// Write the domain here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Is every preference of the domain single-peaked on the tree?
    CheckSpDomain {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        domain: PathBuf,
    },
    /// Exhaustively check properties of an extreme rule on domain^n.
    CheckRule {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value_t = PropertyArg::All)]
        property: PropertyArg,
    },
    /// First manipulation of an extreme rule, if any.
    FindManipulation {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Search over peak multisets instead of full profiles.
        #[arg(long)]
        tops_only: bool,
    },
    /// Build the explicit manipulation for a non-single-peaked preference.
    ProofWitness {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Ranking such as d,b,c,a; defaults to the first non-single-peaked member.
        #[arg(long)]
        bad_pref: Option<String>,
    },
    /// Pareto-undominated alternatives of a profile.
    Pareto {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Also report the path hull of the peaks.
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Check both directions of the characterization over all small trees.
    TheoremSweep {
        #[arg(long, default_value_t = 3)]
        min_nodes: usize,
        #[arg(long, default_value_t = 5)]
        max_nodes: usize,
        /// Agent counts, comma-separated.
        #[arg(long, default_value = "2", value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, conflicts_with = "converse_only")]
        forward_only: bool,
        #[arg(long)]
        converse_only: bool,
        #[arg(long, default_value_t = 4)]
        exhaustive_up_to: usize,
        #[arg(long, default_value_t = 50)]
        sample: usize,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::WorkLimitExceeded(_) => EXIT_BUDGET,
                _ => EXIT_USAGE,
            }
        }
    }
}

struct Output<'a> {
    format: Format,
    out: &'a mut dyn Write,
}

impl Output<'_> {
    fn emit<T: Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        let body = match self.format {
            Format::Structured => io::to_json(value),
            Format::Text => {
                let mut t = text();
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                t
            }
        };
        self.out
            .write_all(body.as_bytes())
            .map_err(|e| Error::Malformed(format!("writing output: {e}")))
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let verifier = Verifier::new().with_budget(cli.budget).with_jobs(cli.jobs);
    let mut out = Output {
        format: cli.format,
        out,
    };
    match &cli.command {
        Command::Eval { rule, profile, domain } => {
            let (tree, rule) = load_rule(rule)?;
            let domain = domain.as_deref().map(io::load_domain).transpose()?;
            let profile = io::load_profile(profile, tree.nodes(), domain.as_ref())?;
            let outcome = rule.apply(&profile)?;
            #[derive(Serialize)]
            struct Eval<'a> {
                rule: RuleDoc,
                tops: NodeSet,
                outcome: &'a crate::Alternative,
            }
            let doc = Eval {
                rule: RuleDoc::from(&rule),
                tops: profile.tops(),
                outcome: &outcome,
            };
            out.emit(&doc, || outcome.to_string())?;
            Ok(EXIT_OK)
        }
        Command::Hull { tree, nodes } => {
            let tree = io::load_tree(tree)?;
            let set = NodeSet::new(parse_list(nodes)?);
            let hull = tree.path_hull(&set)?;
            #[derive(Serialize)]
            struct Hull<'a> {
                set: &'a NodeSet,
                hull: &'a NodeSet,
            }
            out.emit(&Hull { set: &set, hull: &hull }, || hull.to_string())?;
            Ok(EXIT_OK)
        }
        Command::Minimizer { tree, from, nodes } => {
            let tree = io::load_tree(tree)?;
            let from: crate::Alternative = from.parse()?;
            let set = NodeSet::new(parse_list(nodes)?);
            let gate = tree.distance_minimizer(&from, &set)?;
            #[derive(Serialize)]
            struct Minimizer<'a> {
                from: &'a crate::Alternative,
                set: &'a NodeSet,
                hull: NodeSet,
                minimizer: &'a crate::Alternative,
            }
            let doc = Minimizer {
                from: &from,
                set: &set,
                hull: tree.path_hull(&set)?,
                minimizer: &gate,
            };
            out.emit(&doc, || gate.to_string())?;
            Ok(EXIT_OK)
        }
        Command::EnumerateSp { tree, output } => {
            let tree = io::load_tree(tree)?;
            let domain = Domain::single_peaked(&tree);
            let text = io::domain_to_string(&domain);
            match output {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
                    #[derive(Serialize)]
                    struct Written {
                        path: String,
                        preferences: usize,
                    }
                    let doc = Written {
                        path: path.display().to_string(),
                        preferences: domain.len(),
                    };
                    out.emit(&doc, || format!("wrote {} preferences to {}", domain.len(), path.display()))?;
                }
                None => out
                    .out
                    .write_all(text.as_bytes())
                    .map_err(|e| Error::Malformed(format!("writing output: {e}")))?,
            }
            Ok(EXIT_OK)
        }
        Command::CheckSpDomain { tree, domain } => {
            let tree = io::load_tree(tree)?;
            let domain = load_domain_for(domain, &tree)?;
            #[derive(Serialize)]
            struct Offender {
                index: usize,
                preference: Preference,
                violation: PeakViolation,
            }
            #[derive(Serialize)]
            struct SpDomain {
                single_peaked: bool,
                minimally_rich: bool,
                violations: Vec<Offender>,
            }
            let mut violations = Vec::new();
            for (index, p) in domain.preferences().iter().enumerate() {
                if let Some(violation) = p.single_peak_violation(&tree)? {
                    violations.push(Offender {
                        index,
                        preference: p.clone(),
                        violation,
                    });
                }
            }
            let doc = SpDomain {
                single_peaked: violations.is_empty(),
                minimally_rich: domain.is_minimally_rich(),
                violations,
            };
            out.emit(&doc, || {
                let mut t = format!(
                    "single-peaked: {}\nminimally rich: {}\n",
                    if doc.single_peaked { "yes" } else { "no" },
                    if doc.minimally_rich { "yes" } else { "no" }
                );
                for v in &doc.violations {
                    t.push_str(&format!(
                        "  #{} {}: {} lies between the peak and {} but {} is preferred\n",
                        v.index, v.preference, v.violation.inner, v.violation.outer, v.violation.outer
                    ));
                }
                t
            })?;
            Ok(if doc.single_peaked { EXIT_OK } else { EXIT_FAILS })
        }
        Command::CheckRule {
            rule,
            domain,
            n,
            property,
        } => {
            let (tree, rule) = load_rule(rule)?;
            let domain = load_domain_for(domain, &tree)?;
            let n = *n as usize;
            let properties: Vec<Property> = match property {
                PropertyArg::Sp => vec![Property::StrategyProofness],
                PropertyArg::Unanimity => vec![Property::Unanimity],
                PropertyArg::Anonymity => vec![Property::Anonymity],
                PropertyArg::Efficiency => vec![Property::Efficiency],
                PropertyArg::All => Property::ALL.to_vec(),
            };
            let reports = properties
                .iter()
                .map(|&p| verifier.check(p, &rule, &domain, n))
                .collect::<Result<Vec<CheckReport>>>()?;
            let all_hold = reports.iter().all(CheckReport::holds);
            let text = || {
                let mut t = format!("{} on {} agents, {}\n", rule.name(), n, domain);
                for r in &reports {
                    t.push_str(&format!("{r}\n"));
                }
                t
            };
            if let [single] = reports.as_slice() {
                out.emit(single, text)?;
            } else {
                out.emit(&reports, text)?;
            }
            Ok(if all_hold { EXIT_OK } else { EXIT_FAILS })
        }
        Command::FindManipulation {
            rule,
            domain,
            n,
            tops_only,
        } => {
            let (tree, rule) = load_rule(rule)?;
            let domain = load_domain_for(domain, &tree)?;
            let n = *n as usize;
            let witness = if *tops_only {
                verifier.find_manipulation_by_tops(&rule, &domain, n)?
            } else {
                verifier.find_manipulation(&rule, &domain, n)?
            };
            #[derive(Serialize)]
            struct Found<'a> {
                rule: RuleDoc,
                witness: &'a Option<crate::ManipulationWitness>,
            }
            let doc = Found {
                rule: RuleDoc::from(&rule),
                witness: &witness,
            };
            out.emit(&doc, || match &witness {
                Some(w) => format!("{} is manipulable: {w}", rule.name()),
                None => format!("{} is strategy-proof on {} agents", rule.name(), n),
            })?;
            Ok(if witness.is_some() { EXIT_FAILS } else { EXIT_OK })
        }
        Command::ProofWitness {
            tree,
            domain,
            n,
            bad_pref,
        } => {
            let tree = io::load_tree(tree)?;
            let domain = load_domain_for(domain, &tree)?;
            let bad = match bad_pref {
                Some(text) => Preference::new(&parse_list(text)?, tree.nodes())?,
                None => {
                    let i = domain.first_not_single_peaked(&tree)?.ok_or_else(|| {
                        Error::PreconditionViolated("every preference is single-peaked on the tree".into())
                    })?;
                    domain.preferences()[i].clone()
                }
            };
            let proof = theorem::construct_proof_witness(&tree, &bad, &domain, *n as usize)?;
            out.emit(&proof, || {
                format!(
                    "peak {}: {} is preferred to {} although {} lies between them\nrule extreme[{}]\n{}",
                    proof.peak, proof.preferred, proof.blocked, proof.blocked, proof.leaf, proof.witness
                )
            })?;
            Ok(EXIT_OK)
        }
        Command::Pareto { profile, domain, tree } => {
            let tree = tree.as_deref().map(io::load_tree).transpose()?;
            let domain = domain.as_deref().map(io::load_domain).transpose()?;
            let profile = load_free_profile(profile, tree.as_ref(), domain.as_ref())?;
            let efficient = pareto_set(&profile);
            let hull = tree.as_ref().map(|t| t.path_hull(&profile.tops())).transpose()?;
            #[derive(Serialize)]
            struct Pareto<'a> {
                pareto: &'a NodeSet,
                #[serde(skip_serializing_if = "Option::is_none")]
                peak_hull: &'a Option<NodeSet>,
            }
            out.emit(
                &Pareto {
                    pareto: &efficient,
                    peak_hull: &hull,
                },
                || match &hull {
                    Some(h) => format!("{efficient}\npeak hull {h}"),
                    None => efficient.to_string(),
                },
            )?;
            Ok(EXIT_OK)
        }
        Command::TheoremSweep {
            min_nodes,
            max_nodes,
            n,
            forward_only,
            converse_only,
            exhaustive_up_to,
            sample,
        } => {
            if n.contains(&0) {
                return Err(Error::NoAgents);
            }
            let trees = catalog::catalog(*min_nodes.max(&3)..=*max_nodes);
            let config = SweepConfig {
                n_values: n.clone(),
                forward: !converse_only,
                converse: !forward_only,
                exhaustive_up_to: *exhaustive_up_to,
                sample_size: *sample,
                seed: cli.seed,
            };
            let verdicts = theorem::sweep(&verifier, &trees, &config)?;
            let bad = verdicts.iter().filter(|v| !v.consistent).count();
            out.emit(&verdicts, || {
                let mut t = String::new();
                for v in &verdicts {
                    t.push_str(&format!(
                        "{} {:<16} n={} {:?}: single-peaked={} all-extreme-sp={} {}\n",
                        v.tree_id,
                        v.domain_id,
                        v.n,
                        v.direction,
                        v.single_peaked,
                        v.all_extreme_sp,
                        if v.consistent { "ok" } else { "INCONSISTENT" }
                    ));
                }
                t.push_str(&format!("{} verdicts, {} inconsistent\n", verdicts.len(), bad));
                t
            })?;
            Ok(if bad == 0 { EXIT_OK } else { EXIT_FAILS })
        }
    }
}

fn load_rule(args: &RuleArgs) -> Result<(Tree, ExtremeRule)> {
    let tree = io::load_tree(&args.tree)?;
    let doc = match (&args.leaf, &args.rule) {
        (Some(leaf), _) => RuleDoc::Extreme { leaf: leaf.parse()? },
        (None, Some(path)) => io::load_rule(path)?,
        (None, None) => return Err(Error::Malformed("give --leaf or --rule".into())),
    };
    let rule = doc.build(&tree)?;
    Ok((tree, rule))
}

fn load_domain_for(path: &Path, tree: &Tree) -> Result<Domain> {
    let domain = io::load_domain(path)?;
    if !domain.alphabet().same_as(tree.nodes()) {
        return Err(Error::AlphabetMismatch(format!(
            "{}: domain over {} but tree over {}",
            path.display(),
            domain.alphabet(),
            tree.nodes()
        )));
    }
    Ok(domain)
}

fn load_free_profile(path: &Path, tree: Option<&Tree>, domain: Option<&Domain>) -> Result<Profile> {
    let alphabet: Option<Alphabet> = tree
        .map(|t| t.nodes().clone())
        .or_else(|| domain.map(|d| d.alphabet().clone()));
    match alphabet {
        Some(a) => io::load_profile(path, &a, domain),
        None => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
            io::parse::<Profile>(&text)
        }
    }
}
