//! Deterministic report structures. Identical inputs and seed produce
//! byte-identical stdout; timing goes to stderr only.

use serde::Serialize;

use chow_core::check::CheckReport;
use chow_core::limits::Analysis;

#[derive(Serialize)]
pub struct DegreeReport {
    pub command: String,
    pub spec: String,
    pub n: usize,
    pub degree: usize,
    /// Nonzero top derivatives `delta^d x_j`, describing the generic locus.
    pub generic_locus: Vec<LocusGenerator>,
}

#[derive(Serialize)]
pub struct LocusGenerator {
    pub j: usize,
    pub top_derivative: String,
}

impl DegreeReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("spec: {}\n", self.spec));
        out.push_str(&format!("n: {}\n", self.n));
        out.push_str(&format!("degree: {}\n", self.degree));
        out.push_str("generic locus generators:\n");
        for g in &self.generic_locus {
            out.push_str(&format!(
                "  delta^{} x{} = {}\n",
                self.degree, g.j, g.top_derivative
            ));
        }
        out
    }
}

#[derive(Serialize)]
pub struct ChowReport {
    pub command: String,
    pub spec: String,
    pub degree: usize,
    /// Canonical gamma-form text of the determinant.
    pub chow_form: String,
    /// Content removed by the spec's candidates, as `candidate^power`.
    pub content_removed: Vec<String>,
    /// The form after content removal, when any content was removed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced_form: Option<String>,
    /// Evaluation point echo for `--at`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    /// Dual-point expansion for `--expand`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expanded: Option<String>,
}

impl ChowReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("spec: {}\n", self.spec));
        out.push_str(&format!("degree: {}\n", self.degree));
        if let Some(at) = &self.at {
            out.push_str(&format!("at: {at}\n"));
        }
        out.push_str(&format!("chow form: {}\n", self.chow_form));
        if !self.content_removed.is_empty() {
            out.push_str(&format!(
                "content removed: {}\n",
                self.content_removed.join(", ")
            ));
        }
        if let Some(r) = &self.reduced_form {
            out.push_str(&format!("reduced form: {r}\n"));
        }
        if let Some(e) = &self.expanded {
            out.push_str(&format!("expanded: {e}\n"));
        }
        out
    }
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub command: String,
    pub spec: String,
    pub degree: usize,
    pub verdict: String,
    pub hausdorff: bool,
    pub proper: bool,
    pub pieces: Vec<PieceReport>,
    pub witness_pairs: Vec<WitnessPair>,
}

#[derive(Serialize)]
pub struct PieceReport {
    pub name: String,
    pub kind: String,
    pub center: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceptional_power: Option<u32>,
    pub multiplicity: u32,
    pub orbit_factor: String,
    pub residual: String,
    pub residual_content: Vec<String>,
    pub residual_at_infinity: bool,
    pub hausdorff_ok: bool,
    pub proper_ok: bool,
}

#[derive(Serialize)]
pub struct WitnessPair {
    pub first: String,
    pub second: String,
}

impl AnalyzeReport {
    pub fn from_analysis(
        command: &str,
        spec: &str,
        degree: usize,
        analysis: &Analysis,
    ) -> AnalyzeReport {
        AnalyzeReport {
            command: command.to_string(),
            spec: spec.to_string(),
            degree,
            verdict: analysis.verdict().to_string(),
            hausdorff: analysis.hausdorff,
            proper: analysis.proper,
            pieces: analysis
                .pieces
                .iter()
                .map(|p| PieceReport {
                    name: p.name.clone(),
                    kind: if p.is_chart { "chart" } else { "stratum" }.to_string(),
                    center: p.center_desc.clone(),
                    exceptional_power: p.lift_power,
                    multiplicity: p.decomposition.multiplicity,
                    orbit_factor: p.decomposition.orbit_factor.golden_string(),
                    residual: p.decomposition.residual.golden_string(),
                    residual_content: p
                        .decomposition
                        .residual_content
                        .iter()
                        .map(|(c, pow)| power_string(&c.canonical_string(), *pow))
                        .collect(),
                    residual_at_infinity: p.decomposition.at_infinity_residual(),
                    hausdorff_ok: p.hausdorff_ok(),
                    proper_ok: p.proper_ok(),
                })
                .collect(),
            witness_pairs: analysis
                .witness_pairs
                .iter()
                .map(|(a, b)| WitnessPair {
                    first: a.clone(),
                    second: b.clone(),
                })
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("spec: {}\n", self.spec));
        out.push_str(&format!("degree: {}\n", self.degree));
        for p in &self.pieces {
            out.push_str(&format!("piece: {} ({})\n", p.name, p.kind));
            out.push_str(&format!("  center: {}\n", p.center));
            if let Some(e) = p.exceptional_power {
                out.push_str(&format!("  exceptional power: {e}\n"));
            }
            out.push_str(&format!("  multiplicity: {}\n", p.multiplicity));
            out.push_str(&format!("  orbit factor: {}\n", p.orbit_factor));
            out.push_str(&format!("  residual: {}\n", p.residual));
            if !p.residual_content.is_empty() {
                out.push_str(&format!(
                    "  residual content: {}\n",
                    p.residual_content.join(", ")
                ));
            }
            out.push_str(&format!(
                "  residual at infinity: {}\n  hausdorff: {}\n  proper: {}\n",
                p.residual_at_infinity, p.hausdorff_ok, p.proper_ok
            ));
        }
        for w in &self.witness_pairs {
            out.push_str(&format!(
                "non-separated pair: {{{}}} and {{{}}}\n",
                w.first, w.second
            ));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

#[derive(Serialize)]
pub struct CheckCliReport {
    pub command: String,
    pub spec: String,
    pub degree: usize,
    pub trials: usize,
    pub seed: u64,
    pub suites: Vec<SuiteLine>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct SuiteLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckCliReport {
    pub fn from_report(
        command: &str,
        spec: &str,
        trials: usize,
        seed: u64,
        report: &CheckReport,
    ) -> CheckCliReport {
        CheckCliReport {
            command: command.to_string(),
            spec: spec.to_string(),
            degree: report.degree,
            trials,
            seed,
            suites: report
                .outcomes
                .iter()
                .map(|o| SuiteLine {
                    name: o.name.to_string(),
                    passed: o.passed,
                    detail: o.detail.clone(),
                })
                .collect(),
            passed: report.passed(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("spec: {}\n", self.spec));
        out.push_str(&format!("degree: {}\n", self.degree));
        out.push_str(&format!("trials: {}\n", self.trials));
        out.push_str(&format!("seed: {}\n", self.seed));
        for s in &self.suites {
            let tag = if s.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{tag}] {}: {}\n", s.name, s.detail));
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.passed { "ok" } else { "failed" }
        ));
        out
    }
}

fn power_string(base: &str, power: u32) -> String {
    if power == 1 {
        base.to_string()
    } else {
        format!("({base})^{power}")
    }
}
