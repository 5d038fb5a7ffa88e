//! Machine-readable report emitted by every subcommand. The JSON layout is
//! pinned by schema/report.schema.json; the table and CSV renderings are
//! pure functions of this struct.

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize)]
pub struct SpecEcho {
    pub r: String,
    pub a: Option<u64>,
    pub f: Option<u64>,
    pub t: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeRow {
    pub p: u64,
    pub level: u64,
    pub nu: String,
    pub e_p: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalSection {
    pub bound: u64,
    pub primes_considered: u64,
    pub excluded: u64,
    pub matching: u64,
    pub observed: f64,
    pub predicted: f64,
    pub deviation: f64,
    pub binomial_se: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub spec: SpecEcho,
    /// "closed-form", "engine", or "both-agree".
    pub provenance: String,
    /// The density as an exact multiple of Artin's constant, "num/den".
    pub exact_coeff: String,
    pub excluded_tail_primes: Vec<u64>,
    pub uses_artin_tail: bool,
    pub density_float: f64,
    pub correction_exact: Option<String>,
    pub correction_float: Option<f64>,
    pub vanishes: bool,
    pub cause: String,
    pub per_prime: Vec<PrimeRow>,
    pub level: Option<u64>,
    pub empirical: Option<EmpiricalSection>,
}

impl Report {
    pub fn to_table(&self) -> String {
        let mut lines = Vec::new();
        let spec = &self.spec;
        let progression = match (spec.a, spec.f) {
            (Some(a), Some(f)) => format!(", q ≡ {a} mod {f}"),
            _ => String::new(),
        };
        lines.push(format!(
            "problem     r = {}{progression}, index t = {}",
            spec.r, spec.t
        ));
        lines.push(format!("provenance  {}", self.provenance));
        lines.push(format!(
            "density     {} × A = {:.7}",
            self.exact_coeff, self.density_float
        ));
        if let (Some(exact), Some(float)) = (&self.correction_exact, self.correction_float) {
            lines.push(format!("correction  E = {exact} = {float:.7}"));
        }
        lines.push(format!(
            "vanishes    {} (cause: {})",
            self.vanishes, self.cause
        ));
        if let Some(level) = self.level {
            lines.push(format!("level       {level}"));
        }
        for row in &self.per_prime {
            lines.push(format!(
                "  p = {:<3} level {:<5} nu_p = {:<8} E_p = {}",
                row.p,
                row.level,
                row.nu,
                row.e_p.as_deref().unwrap_or("-")
            ));
        }
        if let Some(emp) = &self.empirical {
            lines.push(format!(
                "sieve       bound {} considered {} matching {} excluded {}",
                emp.bound, emp.primes_considered, emp.matching, emp.excluded
            ));
            lines.push(format!(
                "observed    {:.7} vs predicted {:.7} (deviation {:+.7}, se {:.7})",
                emp.observed, emp.predicted, emp.deviation, emp.binomial_se
            ));
        }
        lines.join("\n")
    }

    pub fn csv_header() -> &'static str {
        "r,a,f,t,exact_coeff,density_float,correction_exact,vanishes,cause,provenance"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.spec.r,
            self.spec.a.map_or(String::new(), |a| a.to_string()),
            self.spec.f.map_or(String::new(), |f| f.to_string()),
            self.spec.t,
            self.exact_coeff,
            self.density_float,
            self.correction_exact.as_deref().unwrap_or(""),
            self.vanishes,
            self.cause,
            self.provenance
        )
    }
}
