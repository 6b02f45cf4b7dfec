//! Finite root systems: Cartan matrices, symmetrizers, positive roots and
//! the highest root, plus flag specifications such as `A3:2`.
//!
//! Conventions: `a_ij = <alpha_j, alpha_i^vee> = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)`
//! and `d_i = (alpha_i, alpha_i) / 2`, so `d_i a_ij` is symmetric. Node
//! numbering follows Bourbaki. Weights are written by Dynkin labels and
//! roots by their coordinates in the simple roots.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::{BigRational, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanData {
    series: Series,
    rank: usize,
    /// Symmetrized form `(alpha_i, alpha_j)`, even on the diagonal.
    form: Vec<Vec<i64>>,
    d: Vec<i64>,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    highest_root: Vec<i64>,
}

impl CartanData {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("no root system {series}{rank}"));
        let n = rank;
        let mut b = vec![vec![0i64; n]; n];
        let chain = |b: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            b[i][j] = v;
            b[j][i] = v;
        };
        match series {
            Series::A => {
                if n < 1 {
                    return Err(bad());
                }
                for i in 0..n {
                    b[i][i] = 2;
                    if i + 1 < n {
                        chain(&mut b, i, i + 1, -1);
                    }
                }
            }
            Series::B => {
                if n < 2 {
                    return Err(bad());
                }
                for i in 0..n {
                    b[i][i] = if i + 1 == n { 2 } else { 4 };
                    if i + 1 < n {
                        chain(&mut b, i, i + 1, -2);
                    }
                }
            }
            Series::C => {
                if n < 2 {
                    return Err(bad());
                }
                for i in 0..n {
                    b[i][i] = if i + 1 == n { 4 } else { 2 };
                    if i + 1 < n {
                        chain(&mut b, i, i + 1, if i + 2 == n { -2 } else { -1 });
                    }
                }
            }
            Series::D => {
                if n < 4 {
                    return Err(bad());
                }
                for i in 0..n {
                    b[i][i] = 2;
                }
                for i in 0..n - 2 {
                    chain(&mut b, i, i + 1, -1);
                }
                chain(&mut b, n - 3, n - 1, -1);
            }
            Series::E => {
                if !(6..=8).contains(&n) {
                    return Err(bad());
                }
                for i in 0..n {
                    b[i][i] = 2;
                }
                chain(&mut b, 0, 2, -1);
                chain(&mut b, 1, 3, -1);
                for i in 2..n - 1 {
                    chain(&mut b, i, i + 1, -1);
                }
            }
            Series::F => {
                if n != 4 {
                    return Err(bad());
                }
                b = vec![vec![4, -2, 0, 0], vec![-2, 4, -2, 0], vec![0, -2, 2, -1], vec![0, 0, -1, 2]];
            }
            Series::G => {
                if n != 2 {
                    return Err(bad());
                }
                b = vec![vec![2, -3], vec![-3, 6]];
            }
        }
        let d: Vec<i64> = (0..n).map(|i| b[i][i] / 2).collect();
        let cartan: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| b[i][j] / d[i]).collect()).collect();
        let positive_roots = enumerate_positive_roots(&cartan);
        let highest_root = positive_roots
            .iter()
            .max_by_key(|r| r.iter().sum::<i64>())
            .cloned()
            .expect("root system is nonempty");
        Ok(Self { series, rank, form: b, d, cartan, positive_roots, highest_root })
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `a_ij` with 0-based indices.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn d(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.highest_root
    }

    /// Dynkin labels of the simple root `alpha_j`.
    pub fn simple_root_weight(&self, j: usize) -> Vec<i64> {
        (0..self.rank).map(|i| self.cartan[i][j]).collect()
    }

    /// Dynkin labels of a root given in simple-root coordinates.
    pub fn root_to_weight(&self, root: &[i64]) -> Vec<i64> {
        (0..self.rank).map(|i| (0..self.rank).map(|j| self.cartan[i][j] * root[j]).sum()).collect()
    }

    /// Simple-root coordinates of a weight; rational in general.
    pub fn weight_to_root_coords(&self, w: &[i64]) -> Vec<BigRational> {
        let n = self.rank;
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    (0..n).map(|j| BigRational::from_integer(self.cartan[i][j].into())).collect();
                row.push(BigRational::from_integer(w[i].into()));
                row
            })
            .collect();
        // Cartan matrices of finite type are invertible, so plain elimination suffices.
        for col in 0..n {
            let p = (col..n).find(|&r| !m[r][col].is_zero()).expect("Cartan matrix is invertible");
            m.swap(col, p);
            let inv = m[col][col].recip();
            for c in col..=n {
                m[col][c] = &m[col][c] * &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=n {
                        let v = &m[col][c] * &f;
                        m[r][c] -= v;
                    }
                }
            }
        }
        m.into_iter().map(|row| row[n].clone()).collect()
    }

    /// The invariant form `(lambda, mu)` on weights given by Dynkin labels.
    pub fn weight_pairing(&self, lambda: &[i64], mu: &[i64]) -> BigRational {
        let m = self.weight_to_root_coords(mu);
        (0..self.rank)
            .map(|j| BigRational::from_integer((lambda[j] * self.d[j]).into()) * &m[j])
            .sum()
    }

    /// True iff the coefficient of `alpha_s` in the highest root is 1 (1-based `s`).
    pub fn is_irreducible_flag(&self, s: usize) -> Result<bool> {
        if s == 0 || s > self.rank {
            return Err(Error::NodeOutOfRange { node: s, rank: self.rank });
        }
        Ok(self.highest_root[s - 1] == 1)
    }
}

/// Positive roots by closure: `beta + alpha_i` is a root iff `p - <beta, alpha_i^vee> > 0`
/// where `p` is the length of the `alpha_i`-string below `beta`.
fn enumerate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let simple: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut all: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut layer = simple;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                let pair: i64 = (0..n).map(|j| cartan[i][j] * beta[j]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if all.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pair > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if all.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        layer = next;
    }
    let mut out: Vec<Vec<i64>> = all.into_iter().collect();
    out.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
    out
}

/// A root system together with a crossed node, as in `A3:2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagSpec {
    cartan: CartanData,
    node: usize,
}

impl FlagSpec {
    /// Builds the flag; the crossed node must have coefficient 1 in the highest root.
    pub fn new(cartan: CartanData, node: usize) -> Result<Self> {
        if !cartan.is_irreducible_flag(node)? {
            return Err(Error::NotIrreducible(format!("{}{}:{}", cartan.series(), cartan.rank(), node)));
        }
        Ok(Self { cartan, node })
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    /// Crossed node, 1-based.
    pub fn node(&self) -> usize {
        self.node
    }

    /// 0-based indices of the simple roots kept in the Levi factor.
    pub fn levi_set(&self) -> Vec<usize> {
        (0..self.cartan.rank()).filter(|&i| i + 1 != self.node).collect()
    }
}

impl fmt::Display for FlagSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}:{}", self.cartan.series(), self.cartan.rank(), self.node)
    }
}

impl FromStr for FlagSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("flag must look like A3:2, got {s:?}"));
        let (head, node) = s.split_once(':').ok_or_else(bad)?;
        let mut chars = head.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('E') => Series::E,
            Some('F') => Series::F,
            Some('G') => Series::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        let node: usize = node.parse().map_err(|_| bad())?;
        FlagSpec::new(CartanData::new(series, rank)?, node)
    }
}

impl Serialize for FlagSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(series: Series, rank: usize) -> CartanData {
        CartanData::new(series, rank).unwrap()
    }

    #[test]
    fn root_counts() {
        assert_eq!(cd(Series::A, 3).positive_roots().len(), 6);
        assert_eq!(cd(Series::B, 3).positive_roots().len(), 9);
        assert_eq!(cd(Series::C, 3).positive_roots().len(), 9);
        assert_eq!(cd(Series::D, 4).positive_roots().len(), 12);
        assert_eq!(cd(Series::E, 6).positive_roots().len(), 36);
        assert_eq!(cd(Series::E, 7).positive_roots().len(), 63);
        assert_eq!(cd(Series::E, 8).positive_roots().len(), 120);
        assert_eq!(cd(Series::F, 4).positive_roots().len(), 24);
        assert_eq!(cd(Series::G, 2).positive_roots().len(), 6);
    }

    #[test]
    fn highest_roots() {
        assert_eq!(cd(Series::A, 3).highest_root(), &[1, 1, 1]);
        assert_eq!(cd(Series::C, 3).highest_root(), &[2, 2, 1]);
        assert_eq!(cd(Series::B, 3).highest_root(), &[1, 2, 2]);
        assert_eq!(cd(Series::G, 2).highest_root(), &[3, 2]);
        assert_eq!(cd(Series::E, 8).highest_root(), &[2, 3, 4, 6, 5, 4, 3, 2]);
    }

    #[test]
    fn irreducible_flags() {
        assert!(cd(Series::A, 3).is_irreducible_flag(2).unwrap());
        assert!(!cd(Series::C, 3).is_irreducible_flag(1).unwrap());
        assert!(cd(Series::C, 3).is_irreducible_flag(3).unwrap());
        assert!(!cd(Series::G, 2).is_irreducible_flag(1).unwrap());
        assert!(!cd(Series::G, 2).is_irreducible_flag(2).unwrap());
        assert_eq!(
            cd(Series::A, 2).is_irreducible_flag(3),
            Err(Error::NodeOutOfRange { node: 3, rank: 2 })
        );
    }

    #[test]
    fn symmetrized_form() {
        for (s, r) in [(Series::B, 4), (Series::C, 4), (Series::F, 4), (Series::G, 2), (Series::D, 5)] {
            let c = cd(s, r);
            for i in 0..r {
                for j in 0..r {
                    assert_eq!(c.d(i) * c.a(i, j), c.d(j) * c.a(j, i));
                }
            }
        }
    }

    #[test]
    fn fundamental_weight_pairing_in_type_a() {
        let c = cd(Series::A, 2);
        // (omega_1, omega_1) = 2/3, (omega_1, omega_2) = 1/3
        assert_eq!(c.weight_pairing(&[1, 0], &[1, 0]), BigRational::new(2.into(), 3.into()));
        assert_eq!(c.weight_pairing(&[1, 0], &[0, 1]), BigRational::new(1.into(), 3.into()));
        assert_eq!(c.weight_pairing(&[2, -1], &[2, -1]), BigRational::from_integer(2.into()));
    }

    #[test]
    fn flag_parsing() {
        let f: FlagSpec = "A3:2".parse().unwrap();
        assert_eq!(f.levi_set(), vec![0, 2]);
        assert_eq!(f.to_string(), "A3:2");
        assert!(matches!("G2:1".parse::<FlagSpec>(), Err(Error::NotIrreducible(_))));
        assert!(matches!("A3".parse::<FlagSpec>(), Err(Error::Parse(_))));
        assert!(matches!("A3:4".parse::<FlagSpec>(), Err(Error::NodeOutOfRange { .. })));
    }
}
