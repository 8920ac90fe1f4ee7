//! Command-line front end. Every command builds an [`OutputDocument`]; the
//! table and JSON renderings are both derived from it.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{choose_parameters, toda_bound, TodaBoundParams};
use crate::error::{Error, Result};
use crate::geometry::{enumerate_from_split, EnumeratedGenerator, SpanReport};
use crate::homology::{
    homology_of_abelian, poincare_series_closed, poincare_series_recursive, AbelianGroupSpec, CoefficientRing,
};
use crate::structure::{atoral_split, split_coefficients, SplitBasis, SplitTag};
use crate::verdict::{classify_manifold, ClassLabel, ManifoldQuery, SpinStatus, Verdict};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "yamabe", version, about = "Homology of BG for abelian G and curvature verdicts")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoeffArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "Z2")]
    Z2,
}

impl From<CoeffArg> for CoefficientRing {
    fn from(c: CoeffArg) -> Self {
        match c {
            CoeffArg::Z => CoefficientRing::Integers,
            CoeffArg::Z2 => CoefficientRing::Mod2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Recursive,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpinArg {
    Spin,
    NonspinCover,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum YesNo {
    Yes,
    No,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Toral,
    Atoral,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology of the classifying space, degree by degree.
    Homology {
        spec: String,
        #[arg(long, value_enum, default_value_t = CoeffArg::Z)]
        coeff: CoeffArg,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
    },
    /// Poincaré series of (Z/p)^r.
    Poincare {
        rank: usize,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Toral/atoral splitting of a finite abelian p-group.
    Split {
        spec: String,
        /// Defaults to Z for odd p and Z2 for p = 2.
        #[arg(long, value_enum)]
        coeff: Option<CoeffArg>,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
    },
    /// Geometric generators in one degree, with curvature status.
    Generators {
        spec: String,
        /// Defaults to Z for odd p and Z2 for p = 2.
        #[arg(long, value_enum)]
        coeff: Option<CoeffArg>,
        #[arg(long)]
        degree: usize,
    },
    /// Curvature verdict for a closed manifold.
    Classify {
        spec: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum)]
        spin: SpinArg,
        #[arg(long, value_enum)]
        orientable: YesNo,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
    /// Evaluate the Toda-bracket curvature bound, or search parameters for it.
    TodaBound(TodaBoundArgs),
}

#[derive(Args, Debug)]
pub struct TodaBoundArgs {
    #[arg(long)]
    pub n0: usize,
    #[arg(long)]
    pub n1: usize,
    /// c0,c1,d0,d1
    #[arg(long, value_delimiter = ',', default_value = "1,1,1,1")]
    pub constants: Vec<f64>,
    #[arg(long, conflicts_with = "params", required_unless_present = "params")]
    pub delta: Option<f64>,
    /// t0,t1,l,eps
    #[arg(long, value_delimiter = ',')]
    pub params: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub command: String,
    pub input: String,
    pub version: String,
    pub results: Results,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    Homology {
        coefficients: String,
        degrees: Vec<HomologyRow>,
    },
    Poincare {
        rank: usize,
        closed: Option<Vec<String>>,
        recursive: Option<Vec<String>>,
        agree: Option<bool>,
    },
    Split {
        coefficients: String,
        fold_order: Vec<String>,
        degrees: Vec<SplitRow>,
    },
    Generators {
        coefficients: String,
        degree: usize,
        generators: Vec<GeneratorRow>,
        span: SpanReport,
    },
    Classify {
        query: ManifoldQuery,
        verdict: Verdict,
    },
    TodaBound {
        params: TodaBoundParams,
        bound: f64,
        delta: Option<f64>,
        certified: Option<bool>,
        tube_bound_at_zero_eps: Option<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRank {
    pub prime: u64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRow {
    pub degree: usize,
    pub group: String,
    /// Number of cyclic summands.
    pub rank: usize,
    pub free_rank: usize,
    pub p_ranks: Vec<PrimeRank>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRow {
    pub degree: usize,
    pub group: String,
    pub toral: usize,
    pub atoral: usize,
    pub basis: SplitBasis,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRow {
    pub description: String,
    #[serde(flatten)]
    pub generator: EnumeratedGenerator,
}

/// Process exit code for a failed command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnsupportedCoefficients(_) | Error::UnsupportedGroup(_) => 3,
        Error::RewriteNotJustified(_) | Error::NonZeroSquare(_) | Error::DimensionMismatch(_) => 1,
        _ => 2,
    }
}

fn parse_spec(s: &str) -> Result<AbelianGroupSpec> {
    s.parse()
}

fn resolve_coeff(spec: &AbelianGroupSpec, coeff: Option<CoeffArg>) -> Result<CoefficientRing> {
    match coeff {
        Some(c) => Ok(c.into()),
        None => split_coefficients(spec),
    }
}

fn series_strings(v: Vec<num_bigint::BigUint>) -> Vec<String> {
    v.into_iter().map(|c| c.to_string()).collect()
}

/// Runs a parsed command. `echo` is recorded as the document's command line.
pub fn run(command: &Command, echo: String) -> Result<OutputDocument> {
    let (input, results) = match command {
        Command::Homology { spec, coeff, max_degree } => {
            let parsed = parse_spec(spec)?;
            let coeff: CoefficientRing = (*coeff).into();
            let h = homology_of_abelian(&parsed, coeff, *max_degree)?;
            let primes = match coeff {
                CoefficientRing::Integers => parsed.primes(),
                CoefficientRing::Mod2 => vec![2],
            };
            let degrees = h
                .groups()
                .iter()
                .enumerate()
                .map(|(degree, g)| {
                    Ok(HomologyRow {
                        degree,
                        group: g.to_string(),
                        rank: g.summand_count(),
                        free_rank: g.free_rank(),
                        p_ranks: primes
                            .iter()
                            .map(|&p| Ok(PrimeRank { prime: p, rank: g.p_rank(p)? }))
                            .collect::<Result<_>>()?,
                    })
                })
                .collect::<Result<_>>()?;
            (parsed.to_string(), Results::Homology { coefficients: coeff.to_string(), degrees })
        }
        Command::Poincare { rank, max_degree, method } => {
            let closed = match method {
                Method::Closed | Method::Both => Some(poincare_series_closed(*rank, *max_degree)?),
                Method::Recursive => None,
            };
            let recursive = match method {
                Method::Recursive | Method::Both => Some(poincare_series_recursive(*rank, *max_degree)?),
                Method::Closed => None,
            };
            let agree = match (&closed, &recursive) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            };
            (
                rank.to_string(),
                Results::Poincare {
                    rank: *rank,
                    closed: closed.map(series_strings),
                    recursive: recursive.map(series_strings),
                    agree,
                },
            )
        }
        Command::Split { spec, coeff, max_degree } => {
            let parsed = parse_spec(spec)?;
            let coeff = resolve_coeff(&parsed, *coeff)?;
            let split = atoral_split(&parsed, coeff, *max_degree)?;
            let degrees = split
                .bases()
                .iter()
                .map(|b| SplitRow {
                    degree: b.degree,
                    group: b.group().to_string(),
                    toral: b.count(SplitTag::Toral),
                    atoral: b.count(SplitTag::Atoral),
                    basis: b.clone(),
                })
                .collect();
            let fold_order = split.fold_order().iter().map(|q| format!("Z/{q}")).collect();
            (parsed.to_string(), Results::Split { coefficients: coeff.to_string(), fold_order, degrees })
        }
        Command::Generators { spec, coeff, degree } => {
            let parsed = parse_spec(spec)?;
            let coeff = resolve_coeff(&parsed, *coeff)?;
            let split = atoral_split(&parsed, coeff, *degree)?;
            let generators = enumerate_from_split(&split, *degree)?
                .into_iter()
                .map(|g| GeneratorRow { description: g.generator.to_string(), generator: g })
                .collect();
            let span = crate::geometry::span_check(&parsed, coeff, *degree)?;
            (
                parsed.to_string(),
                Results::Generators { coefficients: coeff.to_string(), degree: *degree, generators, span },
            )
        }
        Command::Classify { spec, dim, spin, orientable, class } => {
            let query = ManifoldQuery {
                group: parse_spec(spec)?,
                dimension: *dim,
                spin: match spin {
                    SpinArg::Spin => SpinStatus::Spin,
                    SpinArg::NonspinCover => SpinStatus::UniversalCoverNonSpin,
                },
                orientable: *orientable == YesNo::Yes,
                class_label: match class {
                    None => ClassLabel::Unspecified,
                    Some(ClassArg::Toral) => ClassLabel::Toral,
                    Some(ClassArg::Atoral) => ClassLabel::Atoral,
                },
            };
            let verdict = classify_manifold(&query)?;
            (query.group.to_string(), Results::Classify { query, verdict })
        }
        Command::TodaBound(args) => toda_bound_results(args)?,
    };
    Ok(OutputDocument { command: echo, input, version: VERSION.to_string(), results })
}

fn toda_bound_results(args: &TodaBoundArgs) -> Result<(String, Results)> {
    let [c0, c1, d0, d1] = args.constants[..] else {
        return Err(Error::InvalidParameter("--constants takes c0,c1,d0,d1".into()));
    };
    let input = format!("n0={} n1={} constants={c0},{c1},{d0},{d1}", args.n0, args.n1);
    let results = if let Some(delta) = args.delta {
        let s = choose_parameters(args.n0, args.n1, c0, c1, d0, d1, delta)?;
        Results::TodaBound {
            params: s.params,
            bound: s.bound,
            delta: Some(delta),
            certified: Some(s.bound < delta),
            tube_bound_at_zero_eps: Some(s.tube_bound_at_zero_eps),
        }
    } else {
        let Some([t0, t1, l, eps]) = args.params.as_deref().and_then(|p| <[f64; 4]>::try_from(p).ok()) else {
            return Err(Error::InvalidParameter("--params takes t0,t1,l,eps".into()));
        };
        let params = TodaBoundParams { n0: args.n0, n1: args.n1, c0, c1, d0, d1, t0, t1, l, eps };
        params.validate()?;
        let bound = toda_bound(&params);
        if !bound.is_finite() {
            return Err(Error::InvalidParameter(format!("bound overflows at {params:?}")));
        }
        Results::TodaBound { params, bound, delta: None, certified: None, tube_bound_at_zero_eps: None }
    };
    Ok((input, results))
}

pub fn render_json(doc: &OutputDocument) -> String {
    serde_json::to_string_pretty(doc).expect("output documents serialize")
}

pub fn render_table(doc: &OutputDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} [{}]", doc.command, doc.version);
    let _ = writeln!(out, "input: {}", doc.input);
    match &doc.results {
        Results::Homology { coefficients, degrees } => {
            let _ = writeln!(out, "coefficients: {coefficients}");
            let _ = writeln!(out, "{:>6}  {:>5}  group", "degree", "rank");
            for r in degrees {
                let _ = writeln!(out, "{:>6}  {:>5}  {}", r.degree, r.rank, r.group);
            }
        }
        Results::Poincare { closed, recursive, agree, .. } => {
            if let Some(c) = closed {
                let _ = writeln!(out, "closed:    {}", c.join(", "));
            }
            if let Some(r) = recursive {
                let _ = writeln!(out, "recursive: {}", r.join(", "));
            }
            if let Some(a) = agree {
                let _ = writeln!(out, "agree: {a}");
            }
        }
        Results::Split { coefficients, fold_order, degrees } => {
            let _ = writeln!(out, "coefficients: {coefficients}");
            let _ = writeln!(out, "fold order: {}", fold_order.join(", "));
            let _ = writeln!(out, "{:>6}  {:>5}  {:>6}  group", "degree", "toral", "atoral");
            for r in degrees {
                let _ = writeln!(out, "{:>6}  {:>5}  {:>6}  {}", r.degree, r.toral, r.atoral, r.group);
            }
        }
        Results::Generators { coefficients, degree, generators, span } => {
            let _ = writeln!(out, "coefficients: {coefficients}, degree {degree}");
            for g in generators {
                let _ = writeln!(
                    out,
                    "  [{}] {:<8} {:?}  {}",
                    g.generator.index,
                    g.generator.status.to_string(),
                    g.generator.label.tag,
                    g.description
                );
                for n in &g.generator.notes {
                    let _ = writeln!(out, "        note: {n}");
                }
            }
            let _ = writeln!(
                out,
                "span: bijection={} psc={} Y>=0={} unknown={}",
                span.bijection, span.tally.psc, span.tally.nonneg_yamabe, span.tally.unknown
            );
            for m in &span.mismatches {
                let _ = writeln!(out, "  mismatch: {m}");
            }
        }
        Results::Classify { verdict, .. } => {
            let tags: Vec<&str> = verdict.citations.iter().map(|r| r.tag()).collect();
            let _ = writeln!(out, "status: {}", verdict.status);
            let _ = writeln!(out, "citations: [{}]", tags.join(", "));
            let _ = writeln!(out, "notes: {}", verdict.notes);
        }
        Results::TodaBound { params, bound, delta, certified, .. } => {
            let _ = writeln!(out, "t0={} t1={} l={} eps={:e}", params.t0, params.t1, params.l, params.eps);
            let _ = writeln!(out, "bound: {bound:e}");
            if let (Some(d), Some(c)) = (delta, certified) {
                let _ = writeln!(out, "delta: {d:e} certified: {c}");
            }
        }
    }
    out
}
