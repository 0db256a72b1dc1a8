//! Binary ±1 patterns, their integer labels and the amplitude encoding.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::simcore::StateVector;

/// A length-m vector over {-1, +1} with m = 2^N.
///
/// Entry j corresponds to basis index j; the integer label reads the entries
/// as a bit string (most significant bit first) under b_j = (-1)^{bit_j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryPattern {
    entries: Vec<i8>,
}

impl BinaryPattern {
    /// Validates that every entry is ±1 and the length is a power of two ≥ 2.
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        let m = entries.len();
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "pattern length {m} is not a power of two ≥ 2"
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e != 1 && e != -1) {
            return Err(Error::Domain(format!("pattern entry {bad} is not ±1")));
        }
        Ok(BinaryPattern { entries })
    }

    /// Builds the pattern whose label is `label`: entry j is (-1)^{bit_j},
    /// bit 0 being the most significant of the m-bit representation.
    pub fn from_label(label: u64, m: usize) -> Result<Self> {
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "pattern length {m} is not a power of two ≥ 2"
            )));
        }
        if m < 64 && label >= 1u64 << m {
            return Err(Error::Argument(format!(
                "label {label} out of range for {m}-entry patterns"
            )));
        }
        let entries = (0..m)
            .map(|j| {
                let shift = m - 1 - j;
                let bit = if shift < 64 { (label >> shift) & 1 } else { 0 };
                if bit == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        Ok(BinaryPattern { entries })
    }

    /// The integer label of this pattern. Fails for patterns longer than 64
    /// entries whose sign structure does not fit a 64-bit label.
    pub fn label(&self) -> Result<u64> {
        let m = self.entries.len();
        let mut label = 0u64;
        for (j, &e) in self.entries.iter().enumerate() {
            if e == -1 {
                let shift = m - 1 - j;
                if shift >= 64 {
                    return Err(Error::Argument(format!(
                        "pattern of {m} entries does not fit a 64-bit label"
                    )));
                }
                label |= 1u64 << shift;
            }
        }
        Ok(label)
    }

    /// Parses a single pattern line: either `k:<decimal label>` or an explicit
    /// string of `+`/`-` characters of length `m`. Anything else is rejected.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let text = text.trim();
        if let Some(label_text) = text.strip_prefix("k:") {
            let label: u64 = label_text
                .parse()
                .map_err(|_| Error::Parse(format!("invalid pattern label '{label_text}'")))?;
            return BinaryPattern::from_label(label, m);
        }
        if text.chars().all(|c| c == '+' || c == '-') && !text.is_empty() {
            if text.len() != m {
                return Err(Error::Parse(format!(
                    "pattern string of length {} where {m} entries were expected",
                    text.len()
                )));
            }
            let entries = text.chars().map(|c| if c == '+' { 1 } else { -1 }).collect();
            return BinaryPattern::new(entries);
        }
        Err(Error::Parse(format!(
            "pattern line '{text}' is neither 'k:<int>' nor a ±-string"
        )))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// N = log2(m).
    pub fn n_qubits(&self) -> usize {
        self.entries.len().trailing_zeros() as usize
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn get(&self, j: usize) -> i8 {
        self.entries[j]
    }

    /// Classical inner product Σ_j self_j · other_j.
    pub fn dot(&self, other: &BinaryPattern) -> Result<i64> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "dot product between lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a as i64) * (b as i64))
            .sum())
    }

    /// The pattern with every entry negated.
    pub fn negated(&self) -> BinaryPattern {
        BinaryPattern {
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    /// The pattern with entry `j` negated.
    pub fn flipped(&self, j: usize) -> BinaryPattern {
        let mut entries = self.entries.clone();
        entries[j] = -entries[j];
        BinaryPattern { entries }
    }

    /// Renders the pattern as a `+`/`-` string.
    pub fn to_line(&self) -> String {
        self.entries
            .iter()
            .map(|&e| if e == 1 { '+' } else { '-' })
            .collect()
    }

    /// Amplitude encoding: the state with amplitudes entry_j / √m. This is the
    /// reference definition the preparation circuits are checked against.
    pub fn encode(&self) -> StateVector {
        let m = self.len();
        let scale = 1.0 / (m as f64).sqrt();
        let amps = self
            .entries
            .iter()
            .map(|&e| Complex64::new(e as f64 * scale, 0.0))
            .collect();
        StateVector::from_amplitudes(amps).expect("±1/√m amplitudes are normalized")
    }
}

/// Parses one pattern per line; blank lines are skipped, any malformed line
/// aborts the parse.
pub fn parse_pattern_file(text: &str, m: usize) -> Result<Vec<BinaryPattern>> {
    let mut patterns = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p = BinaryPattern::parse(line, m)
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        patterns.push(p);
    }
    Ok(patterns)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_boundaries() {
        let p = BinaryPattern::from_label(0, 16).unwrap();
        assert!(p.entries().iter().all(|&e| e == 1));

        let p = BinaryPattern::from_label((1u64 << 16) - 1, 16).unwrap();
        assert!(p.entries().iter().all(|&e| e == -1));

        assert!(BinaryPattern::from_label(1 << 16, 16).is_err());
    }

    #[test]
    fn cross_pattern_rows() {
        // 20032 = 0100111001000000₂ viewed as a 4x4 image, row major.
        let p = BinaryPattern::from_label(20032, 16).unwrap();
        let rows: Vec<&[i8]> = p.entries().chunks(4).collect();
        assert_eq!(rows[0], &[1, -1, 1, 1]);
        assert_eq!(rows[1], &[-1, -1, -1, 1]);
        assert_eq!(rows[2], &[1, -1, 1, 1]);
        assert_eq!(rows[3], &[1, 1, 1, 1]);
    }

    #[test]
    fn encode_examples() {
        let p = BinaryPattern::new(vec![1, 1, 1, 1]).unwrap();
        assert!(p
            .encode()
            .amplitudes()
            .iter()
            .all(|a| (a.re - 0.5).abs() < 1e-15 && a.im == 0.0));

        let p = BinaryPattern::new(vec![1, 1, 1, -1]).unwrap();
        let amps = p.encode().amplitudes().to_vec();
        assert!((amps[3].re + 0.5).abs() < 1e-15);

        let p = BinaryPattern::from_label(20032, 16).unwrap();
        let amps = p.encode().amplitudes().to_vec();
        for (j, a) in amps.iter().enumerate() {
            let expected = if [1, 4, 5, 6, 9].contains(&j) { -0.25 } else { 0.25 };
            assert!((a.re - expected).abs() < 1e-15, "index {j}");
            assert_eq!(a.im, 0.0);
        }
    }

    #[test]
    fn rejects_bad_entries_and_lengths() {
        assert!(BinaryPattern::new(vec![1, 0, 1, 1]).is_err());
        assert!(BinaryPattern::new(vec![1, 1, 1]).is_err());
        assert!(BinaryPattern::new(vec![1]).is_err());
    }

    #[test]
    fn label_round_trip_exhaustive_m4() {
        for k in 0..16u64 {
            let p = BinaryPattern::from_label(k, 4).unwrap();
            assert_eq!(p.label().unwrap(), k);
        }
    }

    #[test]
    fn parse_line_forms() {
        let a = BinaryPattern::parse("k:20032", 16).unwrap();
        let b = BinaryPattern::parse("+-++---++-++++++", 16).unwrap();
        assert_eq!(a, b);
        assert!(BinaryPattern::parse("+-+", 16).is_err());
        assert!(BinaryPattern::parse("k:+-", 16).is_err());
        assert!(BinaryPattern::parse("+-k:3", 4).is_err());
        assert!(BinaryPattern::parse("k:99999999", 16).is_err());
    }

    #[test]
    fn parse_file_rejects_bad_line() {
        let good = "k:0\n++--\n\nk:15\n";
        let ps = parse_pattern_file(good, 4).unwrap();
        assert_eq!(ps.len(), 3);
        assert!(parse_pattern_file("k:0\n+++\n", 4).is_err());
    }
}
