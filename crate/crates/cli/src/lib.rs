//! Command-line surface for `arctan-bounds`.
//!
//! Exit codes: 0 verified, 1 certified violation or identity failure,
//! 2 inconclusive, 3 usage error.

use std::io::{self, Write};
use std::str::FromStr;

use arctan_bounds::bounds::{
    arctan_oracle, enclose_arctan_via_bounds, verify_families, BoundFamily, BoundsError, GridPoint, Side, Term,
    Theorem, Verdict, VerificationReport,
};
use arctan_bounds::coefficients::{coeff_b_explicit, CoefficientTable, Family};
use arctan_bounds::exact::{ExactRational, RationalInterval};
use arctan_bounds::identities::{
    check_b_recurrence_equiv, check_b_recurrence_on, check_e_equals_coefficient, check_lemma3, check_lemma4,
    check_t2_inequalities, check_t3_inequalities, run_suite, sweep_e_recurrence, sweep_relation_12,
    sweep_s_plus_closed_form, sweep_wz_pair, sweep_wz_telescope, IdentityVerdict, SuiteBounds,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATED: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// A certified contradiction between independent computations.
    #[error("{0}")]
    Certified(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Certified(_) => EXIT_VIOLATED,
            _ => EXIT_USAGE,
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::OracleDisagreement { .. } => CliError::Certified(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "arctan-bounds", version, about = "Exact coefficients and certified two-sided bounds for arctan x")]
pub struct Cli {
    /// Digits shown in human-format decimal previews.
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..=1000))]
    pub digits: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact coefficient table for one family.
    Coeffs(CoeffsArgs),
    /// Exact identity and inequality sweeps.
    Identities(IdentitiesArgs),
    /// Certified grid verification of one theorem at order k.
    Verify(VerifyArgs),
    /// Enclosure of arctan x from the order-k bounds.
    Enclose(EncloseArgs),
    /// Independent certified enclosure of arctan x.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    A,
    K,
    B,
    C1,
    E,
    C4,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::K => Family::K,
            FamilyArg::B => Family::B,
            FamilyArg::C1 => Family::CT1,
            FamilyArg::E => Family::E,
            FamilyArg::C4 => Family::CT4,
        }
    }
}

/// Inclusive index range `FROM..TO`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub from: u64,
    pub to: u64,
}

impl FromStr for IndexRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected FROM..TO, got `{s}`"))?;
        let from = a.trim().parse::<u64>().map_err(|e| format!("bad FROM `{a}`: {e}"))?;
        let to = b.trim().parse::<u64>().map_err(|e| format!("bad TO `{b}`: {e}"))?;
        if from > to {
            return Err(format!("empty range {from}..{to}"));
        }
        Ok(Self { from, to })
    }
}

/// `NUM/DEN` or an integer.
pub fn parse_rational(s: &str) -> Result<ExactRational, String> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let num = n.trim().parse::<BigInt>().map_err(|e| format!("bad numerator `{n}`: {e}"))?;
    let den = d.trim().parse::<BigInt>().map_err(|e| format!("bad denominator `{d}`: {e}"))?;
    if den.is_zero() {
        return Err("denominator must be nonzero".into());
    }
    Ok(ExactRational::new(num, den))
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse::<u8>().ok().and_then(Theorem::from_number).ok_or_else(|| format!("theorem must be 1, 2 or 3, got `{s}`"))
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Inclusive index range, e.g. `2..7`.
    #[arg(long)]
    pub m: IndexRange,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckId {
    Wz,
    WzTelescope,
    BetaRelation,
    BRecurrence,
    ERecurrence,
    #[value(name = "e-equals-E")]
    EEqualsE,
    SPlus,
    T2,
    T3,
    Lemma3,
    Lemma4,
    All,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long, value_enum)]
    pub check: CheckId,
    /// Largest m swept; defaults to the check's standard bound.
    #[arg(long)]
    pub m_max: Option<u64>,
    /// Largest k (or number of telescoped terms) where the check has one.
    #[arg(long)]
    pub k_max: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_theorem)]
    pub theorem: Theorem,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    pub k: u32,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub grid: u64,
    #[arg(long, env = "ARCTAN_BOUNDS_MAX_BITS", default_value_t = 256, value_parser = clap::value_parser!(u32).range(8..))]
    pub max_bits: u32,
    /// Right end of the grid. Points past the proven domain are reported as
    /// UNPROVEN-DOMAIN.
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    pub domain_hi: Option<ExactRational>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EncloseArgs {
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    pub x: ExactRational,
    #[arg(long, value_parser = parse_theorem)]
    pub theorem: Theorem,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    pub k: u32,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(1..))]
    pub bits: u32,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    pub x: ExactRational,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    pub bits: u32,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

/// Deliberate corruptions for exercising the failure paths.
#[derive(Debug, Clone, Default)]
pub struct Faults {
    /// `identities --check b-recurrence` sees `B(m) + 1` in place of `B(m)`.
    pub corrupt_b_at: Option<u64>,
    /// `verify` uses an upper side whose gap term has the wrong sign.
    pub negate_upper_gap: bool,
}

// ---- serialized forms -----------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct OutputRecord<P: Serialize> {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub payload: P,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct RationalOut {
    pub num: String,
    pub den: String,
}

impl From<&ExactRational> for RationalOut {
    fn from(q: &ExactRational) -> Self {
        Self { num: q.numer().to_string(), den: q.denom().to_string() }
    }
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct IntervalOut {
    pub lo_num: String,
    pub lo_den: String,
    pub hi_num: String,
    pub hi_den: String,
}

impl From<&RationalInterval> for IntervalOut {
    fn from(iv: &RationalInterval) -> Self {
        Self {
            lo_num: iv.lo().numer().to_string(),
            lo_den: iv.lo().denom().to_string(),
            hi_num: iv.hi().numer().to_string(),
            hi_den: iv.hi().denom().to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
struct CoeffRow {
    m: u64,
    num: String,
    den: String,
}

#[derive(Debug, Serialize)]
struct CoeffsPayload {
    family: &'static str,
    rows: Vec<CoeffRow>,
}

#[derive(Debug, Serialize)]
struct FailureOut {
    m: u64,
    k: Option<u64>,
}

#[derive(Debug, Serialize)]
struct VerdictOut {
    id: &'static str,
    range: String,
    holds: bool,
    first_failure: Option<FailureOut>,
}

#[derive(Debug, Serialize)]
struct IdentitiesPayload {
    check: String,
    holds: bool,
    verdicts: Vec<VerdictOut>,
}

#[derive(Debug, Serialize)]
struct SummaryOut {
    separated: usize,
    violated: usize,
    inconclusive: usize,
}

#[derive(Debug, Serialize)]
struct PointOut {
    i: u64,
    x: RationalOut,
    verdict: String,
    bits: u32,
    margin: IntervalOut,
}

#[derive(Debug, Serialize)]
struct VerifyPayload {
    theorem: u8,
    k: u32,
    grid_n: u64,
    max_bits: u32,
    domain_hi: RationalOut,
    domain: &'static str,
    summary: SummaryOut,
    points: Vec<PointOut>,
}

#[derive(Debug, Serialize)]
struct EnclosePayload {
    theorem: u8,
    k: u32,
    bits: u32,
    x: RationalOut,
    interval: IntervalOut,
    width: RationalOut,
}

#[derive(Debug, Serialize)]
struct OraclePayload {
    x: RationalOut,
    bits: u32,
    interval: IntervalOut,
    width: RationalOut,
}

// ---- decimal previews -------------------------------------------------------------

fn scaled_to_string(n: &BigInt, digits: u32) -> String {
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let d = digits as usize;
    let padded = if s.len() <= d { format!("{}{s}", "0".repeat(d + 1 - s.len())) } else { s };
    let (int, frac) = padded.split_at(padded.len() - d);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

/// `q` rounded toward -inf to `digits` decimals.
pub fn decimal_floor(q: &ExactRational, digits: u32) -> String {
    let scale = ExactRational::from_integer(BigInt::from(10).pow(digits));
    scaled_to_string(&(q * scale).floor().to_integer(), digits)
}

/// `q` rounded toward +inf to `digits` decimals.
pub fn decimal_ceil(q: &ExactRational, digits: u32) -> String {
    let scale = ExactRational::from_integer(BigInt::from(10).pow(digits));
    scaled_to_string(&(q * scale).ceil().to_integer(), digits)
}

fn decimal_interval(iv: &RationalInterval, digits: u32) -> String {
    format!("[{}, {}]", decimal_floor(iv.lo(), digits), decimal_ceil(iv.hi(), digits))
}

fn sci(q: &ExactRational) -> String {
    use num_traits::ToPrimitive;
    match q.to_f64() {
        Some(v) if v != 0.0 && v.is_finite() => format!("{v:.3e}"),
        _ => {
            if q.is_zero() {
                "0".into()
            } else {
                format!("~2^-{}", arctan_bounds::exact::bits_below(&q.abs()))
            }
        }
    }
}

// ---- commands ---------------------------------------------------------------------

fn write_json<P: Serialize>(out: &mut dyn Write, command: &'static str, payload: P) -> Result<(), CliError> {
    let record = OutputRecord { schema_version: SCHEMA_VERSION, command, payload };
    serde_json::to_writer_pretty(&mut *out, &record)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_coeffs(args: &CoeffsArgs, digits: u32, out: &mut dyn Write) -> Result<u8, CliError> {
    let family = Family::from(args.family);
    let table = CoefficientTable::build(family, args.m.from, args.m.to).map_err(|e| CliError::Usage(e.to_string()))?;
    match args.format {
        Format::Json => {
            let rows = table
                .iter()
                .map(|(m, q)| CoeffRow { m, num: q.numer().to_string(), den: q.denom().to_string() })
                .collect();
            write_json(out, "coeffs", CoeffsPayload { family: family.name(), rows })?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
            w.write_record(["m", "numerator", "denominator"])?;
            for (m, q) in table.iter() {
                w.write_record([m.to_string(), q.numer().to_string(), q.denom().to_string()])?;
            }
            w.flush()?;
        }
        Format::Human => {
            let rows: Vec<(String, String, String)> = table
                .iter()
                .map(|(m, q)| (m.to_string(), format!("{}/{}", q.numer(), q.denom()), decimal_floor(q, digits)))
                .collect();
            let wm = rows.iter().map(|r| r.0.len()).max().unwrap_or(1).max(1);
            let wd = rows.iter().map(|r| r.2.len()).max().unwrap_or(1);
            writeln!(out, "{} coefficients, m = {}..{}", family.name(), args.m.from, args.m.to)?;
            writeln!(out, "{:>wm$}  {:>wd$}  exact", "m", "decimal")?;
            for (m, q, d) in rows {
                writeln!(out, "{m:>wm$}  {d:>wd$}  {q}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn identity_verdicts(args: &IdentitiesArgs, faults: &Faults) -> Vec<IdentityVerdict> {
    let d = SuiteBounds::default();
    let m = |default: u64| args.m_max.unwrap_or(default);
    let k = |default: u64| args.k_max.unwrap_or(default);
    match args.check {
        CheckId::Wz => vec![sweep_wz_pair(m(d.wz_m_max), k(d.wz_k_max))],
        CheckId::WzTelescope => vec![sweep_wz_telescope(m(d.telescope_m_max), k(d.telescope_k_terms))],
        CheckId::BetaRelation => vec![sweep_relation_12(m(d.rel12_m_max), k(d.rel12_k_max))],
        CheckId::BRecurrence => match faults.corrupt_b_at {
            None => vec![check_b_recurrence_equiv(m(d.b_m_max))],
            Some(bad) => {
                let m_max = m(d.b_m_max);
                let mut values: Vec<ExactRational> = (0..=m_max).map(coeff_b_explicit).collect();
                if let Some(v) = values.get_mut(bad as usize) {
                    *v += ExactRational::from_integer(BigInt::from(1));
                }
                vec![check_b_recurrence_on(&values)]
            }
        },
        CheckId::ERecurrence => vec![sweep_e_recurrence(m(d.e_recurrence_m_max))],
        CheckId::EEqualsE => vec![check_e_equals_coefficient(m(d.e_equals_m_max))],
        CheckId::SPlus => vec![sweep_s_plus_closed_form(m(d.s_plus_m_max))],
        CheckId::T2 => check_t2_inequalities(m(d.inequality_m_max)).to_vec(),
        CheckId::T3 => check_t3_inequalities(m(d.inequality_m_max)).to_vec(),
        CheckId::Lemma3 => vec![check_lemma3(m(d.lemma_m_max), &d.lemma_tol)],
        CheckId::Lemma4 => vec![check_lemma4(m(d.lemma_m_max), &d.lemma_tol)],
        CheckId::All => run_suite(&d),
    }
}

fn cmd_identities(args: &IdentitiesArgs, faults: &Faults, out: &mut dyn Write) -> Result<u8, CliError> {
    if args.check == CheckId::All && (args.m_max.is_some() || args.k_max.is_some()) {
        return Err(CliError::Usage("--check all uses the standard bounds; drop --m-max/--k-max".into()));
    }
    if let Some(m) = args.m_max {
        let min = match args.check {
            CheckId::Wz | CheckId::WzTelescope | CheckId::BetaRelation | CheckId::ERecurrence | CheckId::EEqualsE => 2,
            CheckId::SPlus | CheckId::T2 => 2,
            _ => 0,
        };
        if m < min {
            return Err(CliError::Usage(format!("--m-max must be at least {min} for this check")));
        }
    }
    let verdicts = identity_verdicts(args, faults);
    let holds = verdicts.iter().all(IdentityVerdict::holds);
    let check = args.check.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    match args.format {
        Format::Json => {
            let verdicts = verdicts
                .iter()
                .map(|v| VerdictOut {
                    id: v.id.name(),
                    range: v.range.clone(),
                    holds: v.holds(),
                    first_failure: v.first_failure().map(|f| FailureOut { m: f.m, k: f.k }),
                })
                .collect();
            write_json(out, "identities", IdentitiesPayload { check, holds, verdicts })?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
            w.write_record(["id", "holds", "failure_m", "failure_k"])?;
            for v in &verdicts {
                let f = v.first_failure();
                w.write_record([
                    v.id.name().to_string(),
                    v.holds().to_string(),
                    f.map(|f| f.m.to_string()).unwrap_or_default(),
                    f.and_then(|f| f.k).map(|k| k.to_string()).unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
        Format::Human => {
            for v in &verdicts {
                writeln!(out, "{v}")?;
            }
        }
    }
    Ok(if holds { EXIT_OK } else { EXIT_VIOLATED })
}

fn exit_for(report: &VerificationReport) -> u8 {
    if report.summary.violated > 0 {
        EXIT_VIOLATED
    } else if report.summary.inconclusive > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn domain_label(report: &VerificationReport) -> &'static str {
    if report.proven_domain {
        "PROVEN"
    } else {
        "UNPROVEN-DOMAIN"
    }
}

fn negate_gap(lower: &BoundFamily, upper: &BoundFamily) -> Result<BoundFamily, CliError> {
    let theorem = upper.theorem();
    let (exp, coeff) = theorem.gap_term(upper.k())?;
    let mut terms: Vec<Term> = upper.terms().to_vec();
    match terms.iter_mut().find(|t| t.exponent == exp) {
        Some(t) => t.coeff = -coeff,
        None => {
            // the gap sits on the lower side: subtract it twice from the upper side
            terms = lower.terms().to_vec();
            terms.retain(|t| t.exponent != exp);
            terms.push(Term { exponent: exp, coeff: -coeff * ExactRational::from_integer(BigInt::from(2)) });
        }
    }
    Ok(BoundFamily::from_terms(theorem, Side::Upper, upper.k(), terms))
}

fn cmd_verify(args: &VerifyArgs, digits: u32, faults: &Faults, out: &mut dyn Write) -> Result<u8, CliError> {
    let lower = BoundFamily::build(args.theorem, args.k, Side::Lower)?;
    let mut upper = BoundFamily::build(args.theorem, args.k, Side::Upper)?;
    if faults.negate_upper_gap {
        upper = negate_gap(&lower, &upper)?;
    }
    let domain_hi = match &args.domain_hi {
        Some(hi) if !hi.is_positive() => return Err(CliError::Usage("--domain-hi must be positive".into())),
        Some(hi) => hi.clone(),
        None => args.theorem.domain().certified_lower(),
    };
    let report = verify_families(&lower, &upper, &domain_hi, args.grid, args.max_bits)?;
    match args.format {
        Format::Json => {
            let payload = VerifyPayload {
                theorem: report.theorem.number(),
                k: report.k,
                grid_n: report.grid_n,
                max_bits: args.max_bits,
                domain_hi: RationalOut::from(&report.domain_hi),
                domain: domain_label(&report),
                summary: SummaryOut {
                    separated: report.summary.separated,
                    violated: report.summary.violated,
                    inconclusive: report.summary.inconclusive,
                },
                points: report.points.iter().map(point_out).collect(),
            };
            write_json(out, "verify", payload)?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
            w.write_record([
                "i",
                "x_num",
                "x_den",
                "verdict",
                "bits",
                "margin_lo_num",
                "margin_lo_den",
                "margin_hi_num",
                "margin_hi_den",
            ])?;
            for p in &report.points {
                let m = IntervalOut::from(&p.margin);
                w.write_record([
                    p.index.to_string(),
                    p.x.numer().to_string(),
                    p.x.denom().to_string(),
                    p.verdict.to_string(),
                    p.bits.to_string(),
                    m.lo_num,
                    m.lo_den,
                    m.hi_num,
                    m.hi_den,
                ])?;
            }
            w.flush()?;
        }
        Format::Human => write_report_human(&report, args.max_bits, digits.min(12), out)?,
    }
    Ok(exit_for(&report))
}

fn point_out(p: &GridPoint) -> PointOut {
    PointOut {
        i: p.index,
        x: RationalOut::from(&p.x),
        verdict: p.verdict.to_string(),
        bits: p.bits,
        margin: IntervalOut::from(&p.margin),
    }
}

fn write_report_human(r: &VerificationReport, max_bits: u32, digits: u32, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "theorem {} k={} grid={} max_bits={}", r.theorem, r.k, r.grid_n, max_bits)?;
    writeln!(
        out,
        "grid x_i = i/{} * {}/{} (~{}) [{}]",
        r.grid_n,
        r.domain_hi.numer(),
        r.domain_hi.denom(),
        decimal_floor(&r.domain_hi, digits),
        domain_label(r)
    )?;
    let w = r.grid_n.to_string().len();
    for p in &r.points {
        let margin = if p.verdict == Verdict::Separated {
            format!("margin >= {}", sci(p.margin.lo()))
        } else {
            format!("margin in [{}, {}]", sci(p.margin.lo()), sci(p.margin.hi()))
        };
        writeln!(
            out,
            "{:>w$}  x~{}  {:<12}  bits={:<5} {margin}",
            p.index,
            decimal_floor(&p.x, digits),
            p.verdict,
            p.bits
        )?;
    }
    writeln!(
        out,
        "summary: separated {} violated {} inconclusive {}",
        r.summary.separated, r.summary.violated, r.summary.inconclusive
    )
}

fn cmd_enclose(args: &EncloseArgs, digits: u32, out: &mut dyn Write) -> Result<u8, CliError> {
    let enc = enclose_arctan_via_bounds(args.theorem, &args.x, args.k, args.bits)?;
    let width = enc.width();
    match args.format {
        Format::Json => write_json(
            out,
            "enclose",
            EnclosePayload {
                theorem: args.theorem.number(),
                k: args.k,
                bits: args.bits,
                x: RationalOut::from(&args.x),
                interval: IntervalOut::from(&enc),
                width: RationalOut::from(&width),
            },
        )?,
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
            w.write_record(["lo_num", "lo_den", "hi_num", "hi_den"])?;
            let iv = IntervalOut::from(&enc);
            w.write_record([iv.lo_num, iv.lo_den, iv.hi_num, iv.hi_den])?;
            w.flush()?;
        }
        Format::Human => {
            writeln!(out, "arctan({}) by {} bounds, k={}, {} bits", args.x, args.theorem, args.k, args.bits)?;
            write_interval_human(&enc, digits, out)?;
        }
    }
    Ok(EXIT_OK)
}

fn write_interval_human(iv: &RationalInterval, digits: u32, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "  decimal {}", decimal_interval(iv, digits))?;
    writeln!(out, "  lo      {}/{}", iv.lo().numer(), iv.lo().denom())?;
    writeln!(out, "  hi      {}/{}", iv.hi().numer(), iv.hi().denom())?;
    writeln!(out, "  width   {}", sci(&iv.width()))
}

fn cmd_oracle(args: &OracleArgs, digits: u32, out: &mut dyn Write) -> Result<u8, CliError> {
    let iv = arctan_oracle(&args.x, args.bits);
    match args.format {
        Format::Json => write_json(
            out,
            "oracle",
            OraclePayload {
                x: RationalOut::from(&args.x),
                bits: args.bits,
                interval: IntervalOut::from(&iv),
                width: RationalOut::from(&iv.width()),
            },
        )?,
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
            w.write_record(["lo_num", "lo_den", "hi_num", "hi_den"])?;
            let o = IntervalOut::from(&iv);
            w.write_record([o.lo_num, o.lo_den, o.hi_num, o.hi_den])?;
            w.flush()?;
        }
        Format::Human => {
            writeln!(out, "arctan({}), {} bits", args.x, args.bits)?;
            write_interval_human(&iv, digits, out)?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    run_with(cli, &Faults::default(), out)
}

pub fn run_with(cli: &Cli, faults: &Faults, out: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Coeffs(a) => cmd_coeffs(a, cli.digits, out),
        Command::Identities(a) => cmd_identities(a, faults, out),
        Command::Verify(a) => cmd_verify(a, cli.digits, faults, out),
        Command::Enclose(a) => cmd_enclose(a, cli.digits, out),
        Command::Oracle(a) => cmd_oracle(a, cli.digits, out),
    }
}

/// Parses `args` (including the program name), runs, and reports errors on
/// `err`. Help and version requests exit 0; parse errors exit 3.
pub fn main_with<I, T>(args: I, faults: &Faults, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ =
                if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match run_with(&cli, faults, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
