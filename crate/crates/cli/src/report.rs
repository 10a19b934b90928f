//! Verification reports: one line per inequality case with a stable
//! grammar, plus a JSON sidecar. Wall time goes to stderr so reports stay
//! byte-identical across worker counts.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub statement_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub empirical_constant: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub provenance: String,
}

impl InequalityReport {
    /// Comparison form lhs ≤ rhs·(1 + tolerance).
    pub fn le(
        statement_id: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        provenance: impl Into<String>,
    ) -> Self {
        let pass = lhs.is_finite() && rhs.is_finite() && lhs <= rhs * (1.0 + tolerance);
        let empirical_constant = if rhs != 0.0 { lhs / rhs } else { f64::INFINITY };
        Self {
            statement_id: statement_id.into(),
            lhs,
            rhs,
            empirical_constant: if lhs == 0.0 && rhs == 0.0 {
                1.0
            } else {
                empirical_constant
            },
            tolerance,
            pass,
            provenance: provenance.into(),
        }
    }

    /// Comparison form |lhs − rhs| ≤ tolerance·scale.
    pub fn close(
        statement_id: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        scale: f64,
        provenance: impl Into<String>,
    ) -> Self {
        let pass = lhs.is_finite() && rhs.is_finite() && (lhs - rhs).abs() <= tolerance * scale;
        Self {
            statement_id: statement_id.into(),
            lhs,
            rhs,
            empirical_constant: if scale != 0.0 {
                (lhs - rhs).abs() / scale
            } else {
                0.0
            },
            tolerance,
            pass,
            provenance: provenance.into(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:.10e} {:.10e} {:.6e} {}",
            self.statement_id,
            self.lhs,
            self.rhs,
            self.empirical_constant,
            if self.pass { "pass" } else { "fail" }
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite_name: String,
    pub fixtures_version: String,
    pub cases: Vec<InequalityReport>,
    pub overall: bool,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

impl SuiteReport {
    pub fn new(suite_name: impl Into<String>, fixtures_version: impl Into<String>) -> Self {
        Self {
            suite_name: suite_name.into(),
            fixtures_version: fixtures_version.into(),
            cases: Vec::new(),
            overall: true,
            wall_time_secs: 0.0,
        }
    }

    pub fn push(&mut self, case: InequalityReport) {
        self.overall &= case.pass;
        self.cases.push(case);
    }

    pub fn extend(&mut self, cases: Vec<InequalityReport>) {
        for c in cases {
            self.push(c);
        }
    }

    /// Stable text form written to stdout.
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "suite {} fixtures {}\n",
            self.suite_name, self.fixtures_version
        ));
        for c in &self.cases {
            out.push_str(&c.line());
            out.push('\n');
        }
        out.push_str(&format!(
            "overall {} cases {}\n",
            if self.overall { "pass" } else { "fail" },
            self.cases.len()
        ));
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}
