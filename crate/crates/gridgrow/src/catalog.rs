//! Growth rates of avoidance classes, keyed by normalized basis.
//!
//! Only rates that are exact limits belong here; finite-length count ratios
//! are not growth rates and are never inferred. The built-in catalog covers
//! the monotone classes (rate 1) and the six classes avoiding one pattern
//! of length 3 (rate 4, the limit of the Catalan ratio (4m-2)/(m+1)).
//! Everything else comes from a user catalog file or a `gr=` cell.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::perm::Basis;

#[derive(Clone, Debug, Default)]
pub struct GrowthRateCatalog {
    rates: HashMap<Basis, f64>,
}

impl GrowthRateCatalog {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The shipped rates: Av(12) = Av(21) = 1 and Av(β) = 4 for every
    /// single pattern β of length 3.
    pub fn builtin() -> Self {
        let mut cat = Self::empty();
        for (spec, rate) in [
            ("Av(12)", 1.0),
            ("Av(21)", 1.0),
            ("Av(123)", 4.0),
            ("Av(132)", 4.0),
            ("Av(213)", 4.0),
            ("Av(231)", 4.0),
            ("Av(312)", 4.0),
            ("Av(321)", 4.0),
        ] {
            let basis = Basis::parse(spec).expect("builtin basis");
            cat.insert(basis, rate).expect("builtin rate");
        }
        cat
    }

    /// Registers a rate; growth rates of infinite classes are at least 1.
    pub fn insert(&mut self, basis: Basis, rate: f64) -> Result<()> {
        if !rate.is_finite() || rate < 1.0 {
            return Err(Error::Domain(format!(
                "growth rate for {basis} must be a finite real >= 1, got {rate}"
            )));
        }
        if basis.is_finite_class() {
            return Err(Error::Domain(format!(
                "{basis} is a finite class and has no growth rate to catalog"
            )));
        }
        self.rates.insert(basis, rate);
        Ok(())
    }

    pub fn lookup(&self, basis: &Basis) -> Option<f64> {
        self.rates.get(basis).copied()
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Merges `Av(...) = <real>` lines over the current entries; `#` starts
    /// a comment. Later lines win.
    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        for (line_idx, raw_line) in text.lines().enumerate() {
            let line_no = line_idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line.split_once('=').ok_or(Error::Parse {
                line: line_no,
                column: 1,
                message: format!("expected `Av(...) = <real>`, got {line:?}"),
            })?;
            let basis = Basis::parse(lhs.trim()).map_err(|e| Error::Parse {
                line: line_no,
                column: 1,
                message: e.to_string(),
            })?;
            let rate: f64 = rhs.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                column: lhs.len() + 2,
                message: format!("cannot parse growth rate {:?}", rhs.trim()),
            })?;
            self.insert(basis, rate)?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.merge_str(&text)
    }

    /// The catalog as its own file format, sorted for stable output.
    pub fn to_catalog_string(&self) -> String {
        let mut entries: Vec<(String, f64)> = self
            .rates
            .iter()
            .map(|(b, &r)| (b.to_string(), r))
            .collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out = String::new();
        for (basis, rate) in entries {
            let _ = writeln!(out, "{basis} = {rate}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_rates() {
        let cat = GrowthRateCatalog::builtin();
        assert_eq!(cat.len(), 8);
        assert_eq!(cat.lookup(&Basis::parse("Av(21)").unwrap()), Some(1.0));
        assert_eq!(cat.lookup(&Basis::parse("Av(231)").unwrap()), Some(4.0));
        assert_eq!(cat.lookup(&Basis::parse("Av(1234)").unwrap()), None);
    }

    #[test]
    fn lookup_uses_normalized_bases() {
        let mut cat = GrowthRateCatalog::empty();
        // 2143 contains 21 and is discarded by normalization
        cat.merge_str("Av(21, 2143) = 1.0").unwrap();
        assert_eq!(cat.lookup(&Basis::parse("Av(21)").unwrap()), Some(1.0));
    }

    #[test]
    fn merge_overrides_and_comments() {
        let mut cat = GrowthRateCatalog::builtin();
        cat.merge_str("# separable permutations\nAv(2413,3142) = 5.83\nAv(321) = 4.0\n")
            .unwrap();
        assert_eq!(
            cat.lookup(&Basis::parse("Av(2413,3142)").unwrap()),
            Some(5.83)
        );
    }

    #[test]
    fn bad_lines_are_rejected() {
        let mut cat = GrowthRateCatalog::empty();
        assert!(matches!(
            cat.merge_str("Av(21) 1.0"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            cat.merge_str("Av(21) = fast"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(cat.merge_str("Av(21) = 0.5"), Err(Error::Domain(_))));
        assert!(matches!(
            cat.merge_str("Av(12,21) = 1"),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn round_trips_through_text() {
        let mut cat = GrowthRateCatalog::builtin();
        cat.merge_str("Av(1342) = 8").unwrap();
        let mut again = GrowthRateCatalog::empty();
        again.merge_str(&cat.to_catalog_string()).unwrap();
        assert_eq!(again.len(), cat.len());
        assert_eq!(again.lookup(&Basis::parse("Av(1342)").unwrap()), Some(8.0));
    }
}
