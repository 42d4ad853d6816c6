use std::collections::VecDeque;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A group element in normal form. The meaning of the components depends on
/// the family:
///
/// * `Integers`: `[n]`;
/// * `Lattice`: `[n_1, ..., n_k]`;
/// * `Dihedral`: `[n, e]` for `tⁿ sᵉ`, `e ∈ {0, 1}`;
/// * `Free`: a reduced word of letters `±(i + 1)`;
/// * `Table`: `[index]`.
pub type Word = Vec<i64>;

/// A finitely generated group given by normal forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupModel {
    Integers,
    Lattice { rank: usize },
    Free { rank: usize },
    /// `⟨t, s | s² = e, s t s = t⁻¹⟩`.
    Dihedral,
    /// A finite group given by its multiplication table.
    Table { elements: Vec<String>, table: Vec<Vec<usize>>, generators: Vec<usize> },
}

fn free_letter(l: i64) -> String {
    let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
    if l > 0 {
        c.to_string()
    } else {
        c.to_ascii_uppercase().to_string()
    }
}

impl GroupModel {
    pub fn name(&self) -> String {
        match self {
            GroupModel::Integers => "Z".into(),
            GroupModel::Lattice { rank } => format!("Z^{rank}"),
            GroupModel::Free { rank } => format!("F_{rank}"),
            GroupModel::Dihedral => "D_inf".into(),
            GroupModel::Table { elements, .. } => format!("finite group of order {}", elements.len()),
        }
    }

    /// Checks the parameters (and group axioms for tables).
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupModel::Lattice { rank } | GroupModel::Free { rank } if *rank == 0 => {
                Err(Error::InvalidGroup("rank must be positive".into()))
            }
            GroupModel::Free { rank } if *rank > 26 => Err(Error::InvalidGroup("free rank above 26".into())),
            GroupModel::Table { elements, table, generators } => {
                let n = elements.len();
                if n == 0 || table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
                    return Err(Error::InvalidGroup("table must be n×n with entries < n".into()));
                }
                if generators.iter().any(|&g| g >= n) {
                    return Err(Error::InvalidGroup("generator out of range".into()));
                }
                let e = (0..n)
                    .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
                    .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
                for x in 0..n {
                    if !(0..n).any(|y| table[x][y] == e) {
                        return Err(Error::InvalidGroup(format!("`{}` has no inverse", elements[x])));
                    }
                    for y in 0..n {
                        for z in 0..n {
                            if table[table[x][y]][z] != table[x][table[y][z]] {
                                return Err(Error::InvalidGroup("table is not associative".into()));
                            }
                        }
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn identity(&self) -> Word {
        match self {
            GroupModel::Integers => vec![0],
            GroupModel::Lattice { rank } => vec![0; *rank],
            GroupModel::Free { .. } => vec![],
            GroupModel::Dihedral => vec![0, 0],
            GroupModel::Table { table, .. } => {
                let n = table.len();
                vec![(0..n).find(|&e| (0..n).all(|x| table[e][x] == x)).unwrap_or(0) as i64]
            }
        }
    }

    pub fn generators(&self) -> Vec<Word> {
        match self {
            GroupModel::Integers => vec![vec![1]],
            GroupModel::Lattice { rank } => (0..*rank)
                .map(|i| {
                    let mut w = vec![0; *rank];
                    w[i] = 1;
                    w
                })
                .collect(),
            GroupModel::Free { rank } => (1..=*rank as i64).map(|i| vec![i]).collect(),
            GroupModel::Dihedral => vec![vec![1, 0], vec![0, 1]],
            GroupModel::Table { generators, .. } => generators.iter().map(|&g| vec![g as i64]).collect(),
        }
    }

    pub fn multiply(&self, x: &[i64], y: &[i64]) -> Word {
        match self {
            GroupModel::Integers | GroupModel::Lattice { .. } => x.iter().zip(y).map(|(a, b)| a + b).collect(),
            GroupModel::Free { .. } => {
                let c = free_cancellation(x, y);
                let mut w = Vec::with_capacity(x.len() + y.len() - 2 * c);
                w.extend_from_slice(&x[..x.len() - c]);
                w.extend_from_slice(&y[c..]);
                w
            }
            GroupModel::Dihedral => {
                let sign = if x[1] == 0 { 1 } else { -1 };
                vec![x[0] + sign * y[0], (x[1] + y[1]) % 2]
            }
            GroupModel::Table { table, .. } => vec![table[x[0] as usize][y[0] as usize] as i64],
        }
    }

    pub fn invert(&self, x: &[i64]) -> Word {
        match self {
            GroupModel::Integers | GroupModel::Lattice { .. } => x.iter().map(|a| -a).collect(),
            GroupModel::Free { .. } => x.iter().rev().map(|l| -l).collect(),
            GroupModel::Dihedral => {
                if x[1] == 0 {
                    vec![-x[0], 0]
                } else {
                    x.to_vec()
                }
            }
            GroupModel::Table { table, .. } => {
                let e = self.identity()[0] as usize;
                vec![(0..table.len()).find(|&y| table[x[0] as usize][y] == e).unwrap_or(0) as i64]
            }
        }
    }

    /// Length of the product of two free-group words without building it.
    /// `None` for other families.
    pub fn free_product_len(&self, x: &[i64], y: &[i64]) -> Option<usize> {
        match self {
            GroupModel::Free { .. } => Some(x.len() + y.len() - 2 * free_cancellation(x, y)),
            _ => None,
        }
    }

    /// Whether `w` is a canonical normal form.
    pub fn is_normal(&self, w: &[i64]) -> bool {
        match self {
            GroupModel::Integers => w.len() == 1,
            GroupModel::Lattice { rank } => w.len() == *rank,
            GroupModel::Free { rank } => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank) && w.windows(2).all(|p| p[0] != -p[1])
            }
            GroupModel::Dihedral => w.len() == 2 && (w[1] == 0 || w[1] == 1),
            GroupModel::Table { elements, .. } => w.len() == 1 && w[0] >= 0 && (w[0] as usize) < elements.len(),
        }
    }

    /// Normal form of a word in the generators, given as signed 1-based
    /// generator indices (`-2` is the inverse of the second generator).
    pub fn normal_form(&self, letters: &[i64]) -> Result<Word> {
        let gens = self.generators();
        let mut w = self.identity();
        for &l in letters {
            let i = l.unsigned_abs() as usize;
            if l == 0 || i > gens.len() {
                return Err(Error::Domain(format!("no generator {l}")));
            }
            let g = if l > 0 { gens[i - 1].clone() } else { self.invert(&gens[i - 1]) };
            w = self.multiply(&w, &g);
        }
        Ok(w)
    }

    /// Word length with respect to the generators (closed forms where
    /// available, BFS for tables).
    pub fn word_length(&self, w: &[i64]) -> usize {
        match self {
            GroupModel::Integers | GroupModel::Lattice { .. } => w.iter().map(|a| a.unsigned_abs() as usize).sum(),
            GroupModel::Free { .. } => w.len(),
            GroupModel::Dihedral => w[0].unsigned_abs() as usize + w[1] as usize,
            GroupModel::Table { elements, .. } => {
                let b = self.ball(elements.len());
                b.index(w).map(|i| b.lengths[i]).unwrap_or(usize::MAX)
            }
        }
    }

    /// All elements of word length at most `r`, shortest first.
    pub fn ball(&self, r: usize) -> Ball {
        let mut gens = self.generators();
        let inv: Vec<Word> = gens.iter().map(|g| self.invert(g)).collect();
        for g in inv {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        let id = self.identity();
        let mut elements = vec![id.clone()];
        let mut lengths = vec![0];
        let mut index = FxHashMap::default();
        index.insert(id, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            if lengths[i] == r {
                continue;
            }
            for g in &gens {
                let w = self.multiply(&elements[i], g);
                if !index.contains_key(&w) {
                    index.insert(w.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(w);
                    lengths.push(lengths[i] + 1);
                }
            }
        }
        Ball { radius: r, elements, lengths, index }
    }

    pub fn format(&self, w: &[i64]) -> String {
        match self {
            GroupModel::Integers => w[0].to_string(),
            GroupModel::Lattice { .. } => {
                format!("({})", w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
            }
            GroupModel::Free { .. } => {
                if w.is_empty() {
                    "e".into()
                } else {
                    w.iter().map(|&l| free_letter(l)).collect()
                }
            }
            GroupModel::Dihedral => {
                let mut s = String::new();
                match w[0] {
                    0 => {}
                    1 => s.push('t'),
                    n => write!(s, "t^{n}").unwrap(),
                }
                if w[1] == 1 {
                    if !s.is_empty() {
                        s.push(' ');
                    }
                    s.push('s');
                }
                if s.is_empty() {
                    "e".into()
                } else {
                    s
                }
            }
            GroupModel::Table { elements, .. } => elements[w[0] as usize].clone(),
        }
    }

    /// Inverse of [`GroupModel::format`].
    pub fn parse(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        let bad = || Error::Domain(format!("cannot parse `{s}` as an element of {}", self.name()));
        let w = match self {
            GroupModel::Integers => vec![s.parse().map_err(|_| bad())?],
            GroupModel::Lattice { rank } => {
                let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
                let v: Vec<i64> = inner.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
                if v.len() != *rank {
                    return Err(bad());
                }
                v
            }
            GroupModel::Free { rank } => {
                if s == "e" {
                    return Ok(vec![]);
                }
                let mut letters = Vec::new();
                for c in s.chars() {
                    let i = (c.to_ascii_lowercase() as i64) - ('a' as i64) + 1;
                    if !c.is_ascii_alphabetic() || i < 1 || i as usize > *rank {
                        return Err(bad());
                    }
                    letters.push(if c.is_ascii_lowercase() { i } else { -i });
                }
                self.normal_form(&letters)?
            }
            GroupModel::Dihedral => {
                if s == "e" {
                    return Ok(vec![0, 0]);
                }
                let (tpart, e) = match s.strip_suffix('s') {
                    Some(rest) => (rest.trim(), 1),
                    None => (s, 0),
                };
                let n = match tpart {
                    "" => 0,
                    "t" => 1,
                    t => t.strip_prefix("t^").and_then(|x| x.parse().ok()).ok_or_else(bad)?,
                };
                vec![n, e]
            }
            GroupModel::Table { elements, .. } => {
                vec![elements.iter().position(|x| x == s).ok_or_else(bad)? as i64]
            }
        };
        Ok(w)
    }
}

fn free_cancellation(x: &[i64], y: &[i64]) -> usize {
    x.iter().rev().zip(y).take_while(|(a, b)| **a == -**b).count()
}

/// A ball of a group, enumerated shortest-first.
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: usize,
    pub elements: Vec<Word>,
    pub lengths: Vec<usize>,
    index: FxHashMap<Word, usize>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index(&self, w: &[i64]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn contains(&self, w: &[i64]) -> bool {
        self.index.contains_key(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_relations() {
        let g = GroupModel::Dihedral;
        let t = vec![1, 0];
        let s = vec![0, 1];
        assert_eq!(g.multiply(&s, &s), g.identity());
        let sts = g.multiply(&g.multiply(&s, &t), &s);
        assert_eq!(sts, g.invert(&t));
        // tⁿ s is an involution
        let r = g.multiply(&vec![3, 0], &s);
        assert_eq!(g.multiply(&r, &r), g.identity());
        assert_eq!(g.ball(6).len(), 24);
        for w in &g.ball(6).elements {
            assert_eq!(g.parse(&g.format(w)).unwrap(), *w);
        }
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(GroupModel::Integers.ball(3).len(), 7);
        assert_eq!(GroupModel::Lattice { rank: 2 }.ball(2).len(), 13);
        assert_eq!(GroupModel::Free { rank: 2 }.ball(3).len(), 1 + 4 + 12 + 36);
        let b = GroupModel::Free { rank: 2 }.ball(2);
        for (w, &l) in b.elements.iter().zip(&b.lengths) {
            assert_eq!(GroupModel::Free { rank: 2 }.word_length(w), l);
        }
        let d = GroupModel::Dihedral.ball(5);
        for (w, &l) in d.elements.iter().zip(&d.lengths) {
            assert_eq!(GroupModel::Dihedral.word_length(w), l);
        }
    }

    #[test]
    fn free_normal_form() {
        let f = GroupModel::Free { rank: 2 };
        assert_eq!(f.normal_form(&[1, 2, -2, -1, 1]).unwrap(), vec![1]);
        assert_eq!(f.format(&f.normal_form(&[1, -2]).unwrap()), "aB");
        assert_eq!(f.parse("abBA").unwrap(), Vec::<i64>::new());
        assert!(f.is_normal(&[1, 2, 1]));
        assert!(!f.is_normal(&[1, -1]));
        assert_eq!(f.free_product_len(&[1, 2], &[-2, 1]), Some(2));
    }

    #[test]
    fn table_group() {
        // ℤ/3
        let g = GroupModel::Table {
            elements: vec!["0".into(), "1".into(), "2".into()],
            table: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
            generators: vec![1],
        };
        g.validate().unwrap();
        assert_eq!(g.invert(&[1]), vec![2]);
        assert_eq!(g.ball(1).len(), 3);
        let bad = GroupModel::Table { elements: vec!["a".into(), "b".into()], table: vec![vec![0, 0], vec![0, 0]], generators: vec![] };
        assert!(bad.validate().is_err());
    }
}
