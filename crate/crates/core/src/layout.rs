//! Binary tile-selection chromosome.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// `bits[n]` is true when tile `n + 1` is installed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Layout {
    bits: Vec<bool>,
}

impl Layout {
    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    /// Every admissible tile installed.
    pub fn full(mask: &[bool]) -> Self {
        Self { bits: mask.to_vec() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Parses a row-major string of `0`/`1` characters; whitespace is ignored.
    pub fn parse_bits(text: &str, n: usize) -> Result<Self> {
        let bits = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::LayoutParse(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.len() != n {
            return Err(Error::LayoutLength { got: bits.len(), expected: n });
        }
        Ok(Self { bits })
    }

    /// Builds a layout from 1-based tile indices.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut bits = vec![false; n];
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, count: n });
            }
            bits[i - 1] = true;
        }
        Ok(Self { bits })
    }

    /// Parses an index list such as `{3, 4, 5}` or `3,4,5`.
    pub fn parse_indices(text: &str, n: usize) -> Result<Self> {
        let inner = text.trim().trim_start_matches(['{', '[']).trim_end_matches(['}', ']']);
        let indices = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::LayoutParse(format!("{s:?} is not a tile index")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(&indices, n)
    }

    /// Reads a layout file written by [`crate::export::write_layout_file`].
    ///
    /// The `bits = ...` line wins; otherwise a `tiles = ...` line is used.
    pub fn read_file(path: impl AsRef<Path>, n: usize) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let mut tiles = None;
        for line in text.lines() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("bits") {
                return Self::parse_bits(rest.trim_start().trim_start_matches('=').trim(), n);
            }
            if let Some(rest) = line.strip_prefix("tiles") {
                tiles = Some(rest.trim_start().trim_start_matches('=').trim().to_string());
            }
        }
        match tiles {
            Some(t) => Self::parse_indices(&t, n),
            None => Err(Error::LayoutParse(format!("{} has no `bits` or `tiles` line", path.display()))),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    /// Number of installed tiles, `M`.
    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// 0-based positions of installed tiles, ascending.
    pub fn installed(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    /// 1-based indices of installed tiles.
    pub fn indices(&self) -> Vec<usize> {
        self.installed().map(|i| i + 1).collect()
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn is_subset_of(&self, other: &Layout) -> bool {
        self.len() == other.len() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::LayoutLength { got: self.len(), expected: n });
        }
        Ok(())
    }

    /// Rejects layouts of the wrong length or with tiles on forbidden cells.
    pub fn validate(&self, mask: &[bool]) -> Result<()> {
        self.check_len(mask.len())?;
        match self.bits.iter().zip(mask).position(|(&b, &ok)| b && !ok) {
            Some(i) => Err(Error::MaskedTile { index: i + 1 }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Layout({})", self.to_bit_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_list_and_bits_agree() {
        let a = Layout::parse_indices("{3, 4, 5, 6, 8, 12, 30, 32, 43, 44, 45, 46}", 60).unwrap();
        assert_eq!(a.count_ones(), 12);
        assert_eq!(a.indices(), vec![3, 4, 5, 6, 8, 12, 30, 32, 43, 44, 45, 46]);
        let b = Layout::parse_bits(&a.to_bit_string(), 60).unwrap();
        assert_eq!(a, b);
        assert_eq!(Layout::parse_indices("3,4 5", 6).unwrap().to_bit_string(), "001110");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Layout::parse_bits("0101", 60), Err(Error::LayoutLength { got: 4, expected: 60 })));
        assert!(Layout::parse_bits("01x", 3).is_err());
        assert!(matches!(Layout::parse_indices("0", 5), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(Layout::parse_indices("6", 5), Err(Error::IndexOutOfRange { .. })));
        assert!(Layout::parse_indices("a,b", 5).is_err());
    }

    #[test]
    fn mask_validation() {
        let mask = [true, false, true];
        assert!(Layout::parse_bits("101", 3).unwrap().validate(&mask).is_ok());
        assert!(matches!(
            Layout::parse_bits("110", 3).unwrap().validate(&mask),
            Err(Error::MaskedTile { index: 2 })
        ));
        assert!(Layout::zeros(4).validate(&mask).is_err());
    }

    #[test]
    fn subset() {
        let a = Layout::parse_bits("0100", 4).unwrap();
        let b = Layout::parse_bits("0110", 4).unwrap();
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
    }
}
