//! Constants table: predicted vs computed values over a range of moduli.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use zslab::constants::ConstantKind;
use zslab::WeightSetSpec;

/// `a..b` (inclusive), optionally restricted by parity: `a..b:even`, `a..b:odd`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub lo: u64,
    pub hi: u64,
    pub parity: Option<u64>,
}

impl NRange {
    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        (self.lo..=self.hi).filter(|n| self.parity.is_none_or(|p| n % 2 == p))
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected a..b, a..b:even or a..b:odd, got {s:?}");
        let (range, parity) = match s.split_once(':') {
            Some((r, "even")) => (r, Some(0)),
            Some((r, "odd")) => (r, Some(1)),
            Some(_) => return Err(bad()),
            None => (s, None),
        };
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo < 1 || lo > hi {
            return Err(format!("empty or invalid range {s:?}"));
        }
        Ok(Self { lo, hi, parity })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub n: u64,
    pub kind: ConstantKind,
    pub weights: WeightSetSpec,
    pub predicted: Option<u64>,
    /// How the prediction was obtained, e.g. `closed_form:units-2^omega`.
    pub predicted_method: Option<String>,
    pub computed: Option<u64>,
    /// `None` when either side is missing.
    pub agree: Option<bool>,
}

/// Sort rows by `(n, kind, weights)`.
pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        (a.n, a.kind, a.weights.to_string()).cmp(&(b.n, b.kind, b.weights.to_string()))
    });
}

fn cell<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(String::new, T::to_string)
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from("n,kind,weights,predicted,predicted_method,computed,agree\n");
    for r in rows {
        // weight specs may contain commas
        let weights = r.weights.to_string();
        let weights = if weights.contains(',') {
            format!("\"{weights}\"")
        } else {
            weights
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            r.kind,
            weights,
            cell(&r.predicted),
            cell(&r.predicted_method),
            cell(&r.computed),
            cell(&r.agree)
        )
        .unwrap();
    }
    out
}

pub fn to_json(rows: &[Row]) -> String {
    let mut out = serde_json::to_string_pretty(rows).expect("rows serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r: NRange = "2..12".parse().unwrap();
        assert_eq!(r.values().count(), 11);
        let r: NRange = "2..24:even".parse().unwrap();
        assert_eq!(r.values().collect::<Vec<_>>(), (1..=12).map(|k| 2 * k).collect::<Vec<_>>());
        let r: NRange = "3..=7:odd".parse().unwrap();
        assert_eq!(r.values().collect::<Vec<_>>(), vec![3, 5, 7]);
        for bad in ["", "5..2", "0..3", "1..x", "2..4:prime"] {
            assert!(bad.parse::<NRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_quotes_explicit_sets() {
        let rows = vec![Row {
            n: 6,
            kind: ConstantKind::D,
            weights: "explicit:1,5".parse().unwrap(),
            predicted: None,
            predicted_method: None,
            computed: Some(3),
            agree: None,
        }];
        assert_eq!(
            to_csv(&rows),
            "n,kind,weights,predicted,predicted_method,computed,agree\n6,D,\"explicit:1,5\",,,3,\n"
        );
    }

    #[test]
    fn row_order() {
        let row = |n, kind, w: &str| Row {
            n,
            kind,
            weights: w.parse().unwrap(),
            predicted: None,
            predicted_method: None,
            computed: None,
            agree: None,
        };
        let mut rows = vec![
            row(3, ConstantKind::C, "units"),
            row(2, ConstantKind::E, "odd"),
            row(2, ConstantKind::D, "units"),
            row(2, ConstantKind::D, "odd"),
        ];
        sort_rows(&mut rows);
        let got: Vec<String> = rows.iter().map(|r| format!("{}{}{}", r.n, r.kind, r.weights)).collect();
        assert_eq!(got, ["2Dodd", "2Dunits", "2Eodd", "3Cunits"]);
    }
}
