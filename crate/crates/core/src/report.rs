//! Outcome of a verification: pass, or the first nonzero residual found.

use std::fmt;

use crate::bicomplex::VBForm;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::series::Mat2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub params: Vec<(String, i64)>,
    pub witness: Option<String>,
}

impl Report {
    pub fn new(check: &str, params: &[(&str, i64)]) -> Self {
        Report {
            check: check.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    /// Record a failure unless one is already recorded.
    pub fn fail(&mut self, label: impl fmt::Display, residual: impl fmt::Display) {
        if self.witness.is_none() {
            self.witness = Some(format!("{label}: {residual}"));
        }
    }

    pub fn ensure(&mut self, label: impl fmt::Display, ok: bool) {
        if !ok {
            self.fail(label, "condition violated");
        }
    }

    pub fn zero_poly<S: Scalar>(&mut self, label: impl fmt::Display, p: &Poly<S>) {
        if let Some((m, c)) = p.terms().next() {
            let lead = Poly::from_terms([(m.clone(), c.clone())]);
            self.fail(label, lead);
        }
    }

    pub fn zero_form<S: Scalar>(&mut self, label: impl fmt::Display, f: &VBForm<S>) {
        if let Some(t) = f.first_term() {
            self.fail(label, t);
        }
    }

    pub fn zero_mat<S: Scalar>(&mut self, label: impl fmt::Display, m: &Mat2<S>) {
        for r in 0..2 {
            for c in 0..2 {
                self.zero_poly(format!("{label}[{r}{c}]"), m.get(r, c));
            }
        }
    }

    /// Fold another report's outcome into this one.
    pub fn absorb(&mut self, other: &Report) {
        if let Some(w) = &other.witness {
            if self.witness.is_none() {
                self.witness = Some(format!("{} {}: {w}", other.check, other.param_string()));
            }
        }
    }

    pub fn param_string(&self) -> String {
        let parts: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.join(",")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {}({})", self.check, self.param_string())?;
        if let Some(w) = &self.witness {
            write!(f, " witness {w}")?;
        }
        Ok(())
    }
}
