use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::ModError;

/// An integer partition, parts weakly decreasing and positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, ModError> {
        if parts.iter().any(|&x| x == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ModError::InvalidPartition(format!("{parts:?}")));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// No part repeated `p` or more times.
    pub fn is_p_regular(&self, p: u64) -> bool {
        let p = p as usize;
        let mut run = 1;
        for w in self.parts.windows(2) {
            run = if w[0] == w[1] { run + 1 } else { 1 };
            if run >= p {
                return false;
            }
        }
        true
    }

    /// Column lengths.
    pub fn conjugate(&self) -> Vec<usize> {
        let width = self.parts.first().copied().unwrap_or(0);
        (0..width).map(|c| self.parts.iter().filter(|&&r| r > c).count()).collect()
    }

    /// Number of standard Young tableaux, by the hook-length formula.
    pub fn hook_length_dim(&self) -> u128 {
        let cols = self.conjugate();
        let mut hooks: u128 = 1;
        for (r, &len) in self.parts.iter().enumerate() {
            for (c, &col_len) in cols.iter().enumerate().take(len) {
                hooks *= (len - c + col_len - r - 1) as u128;
            }
        }
        (1..=self.n() as u128).product::<u128>() / hooks
    }

    /// Partitions obtained by removing one box.
    pub fn remove_box(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.parts.len() {
            if i + 1 == self.parts.len() || self.parts[i] > self.parts[i + 1] {
                let mut parts = self.parts.clone();
                parts[i] -= 1;
                if parts[i] == 0 {
                    parts.pop();
                }
                out.push(Partition { parts });
            }
        }
        out
    }

    /// All partitions of `n` in decreasing lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for k in (1..=rest.min(max)).rev() {
                cur.push(k);
                rec(rest - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// p-regular partitions of `n`, in decreasing lexicographic order.
    pub fn all_regular(n: usize, p: u64) -> Vec<Partition> {
        Self::all(n).into_iter().filter(|l| l.is_p_regular(p)).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `"5,2"`, `"(5,2)"` or `"5 2"`.
impl FromStr for Partition {
    type Err = ModError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| ModError::InvalidPartition(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn basic_properties() {
        assert_eq!(part("(5,2)").hook_length_dim(), 14);
        assert_eq!(part("2,1").hook_length_dim(), 2);
        assert_eq!(part("4,3,2,1").hook_length_dim(), 768);
        assert_eq!(part("3,2,1").conjugate(), vec![3, 2, 1]);
        assert!(part("2,2,1").is_p_regular(3));
        assert!(!part("2,2,1").is_p_regular(2));
        assert!(!part("1,1,1").is_p_regular(3));
        assert!(part("1").is_p_regular(2));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(part("5,2").to_string(), "(5,2)");
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        // 2-regular partitions are partitions into distinct parts
        assert_eq!(Partition::all_regular(10, 2).len(), 10);
        assert_eq!(Partition::all(4)[0], part("4"));
    }

    #[test]
    fn box_removal() {
        let r: Vec<String> = part("3,3,1").remove_box().iter().map(|p| p.to_string()).collect();
        assert_eq!(r, vec!["(3,2,1)", "(3,3)"]);
    }
}
