use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, 1, ...}` stored with trailing fixed points trimmed,
/// so that structural equality is equality after padding.
///
/// Points are 0-based internally; cycle notation is 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity() -> Self {
        Perm { images: Vec::new() }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::invalid(format!("images {images:?} are not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Self::from_images_unchecked(images))
    }

    pub(crate) fn from_images_unchecked(mut images: Vec<u32>) -> Self {
        while let Some(&last) = images.last() {
            if last as usize == images.len() - 1 {
                images.pop();
            } else {
                break;
            }
        }
        Perm { images }
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(cycles: &[Vec<u32>]) -> Result<Self> {
        let n = cycles.iter().flatten().map(|&p| p as usize + 1).max().unwrap_or(0);
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if used[p as usize] {
                    return Err(Error::invalid(format!("point {} repeated in cycles", p + 1)));
                }
                used[p as usize] = true;
                images[p as usize] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Self::from_images_unchecked(images))
    }

    /// Largest moved point plus one.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Images padded with fixed points to length `n`.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        let mut v = self.images.clone();
        v.extend(v.len() as u32..n.max(v.len()) as u32);
        v
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        match self.images.get(i as usize) {
            Some(&j) => j,
            None => i,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `x ▷ y = x y x⁻¹`.
    pub fn conj(&self, y: &Perm) -> Perm {
        let n = self.degree().max(y.degree());
        let mut out = vec![0u32; n];
        for i in 0..n as u32 {
            out[self.apply(i) as usize] = self.apply(y.apply(i));
        }
        Perm::from_images_unchecked(out)
    }

    pub fn pow(&self, k: i64) -> Perm {
        let n = self.degree();
        let mut out = vec![0u32; n];
        for cycle in self.cycles() {
            let len = cycle.len() as i64;
            let shift = k.rem_euclid(len) as usize;
            for (idx, &p) in cycle.iter().enumerate() {
                out[p as usize] = cycle[(idx + shift) % cycle.len()];
            }
        }
        for (i, v) in out.iter_mut().enumerate() {
            if self.images[i] == i as u32 {
                *v = i as u32;
            }
        }
        Perm::from_images_unchecked(out)
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths on `{0..n}`, including fixed points, sorted descending.
    pub fn cycle_type(&self, n: usize) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = t.iter().sum();
        t.extend(std::iter::repeat_n(1, n.saturating_sub(moved)));
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    pub fn fixed_points(&self, n: usize) -> usize {
        (0..n as u32).filter(|&i| self.apply(i) == i).count()
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        compose(self, other) == compose(other, self)
    }

    /// Parses 1-based cycle notation such as `(1,2,3)(4,5)` or `()`.
    pub fn parse(s: &str) -> Result<Perm> {
        parse_cycles(s, 1, None)
    }
}

/// "Apply `b` first, then `a`".
pub fn compose(a: &Perm, b: &Perm) -> Perm {
    let n = a.degree().max(b.degree());
    let out = (0..n as u32).map(|i| a.apply(b.apply(i))).collect();
    Perm::from_images_unchecked(out)
}

impl Mul for &Perm {
    type Output = Perm;
    fn mul(self, rhs: &Perm) -> Perm {
        compose(self, rhs)
    }
}

impl Mul for Perm {
    type Output = Perm;
    fn mul(self, rhs: Perm) -> Perm {
        compose(&self, &rhs)
    }
}

pub(crate) fn parse_cycles(s: &str, line: usize, degree: Option<usize>) -> Result<Perm> {
    let chars: Vec<char> = s.chars().collect();
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: &str| Error::parse(line, col + 1, msg);
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == chars.len() {
        return Err(err(i, "empty permutation"));
    }
    while i < chars.len() {
        if chars[i] != '(' {
            return Err(err(i, "expected '('"));
        }
        i += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut i);
            if i < chars.len() && chars[i] == ')' && cycle.is_empty() {
                break;
            }
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(err(i, "expected a point"));
            }
            let text: String = chars[start..i].iter().collect();
            let p: usize = text.parse().map_err(|_| err(start, "point out of range"))?;
            if p == 0 {
                return Err(err(start, "points are numbered from 1"));
            }
            if let Some(n) = degree {
                if p > n {
                    return Err(err(start, &format!("point {p} exceeds degree {n}")));
                }
            }
            cycle.push((p - 1) as u32);
            skip_ws(&mut i);
            match chars.get(i) {
                Some(',') => i += 1,
                Some(')') => break,
                _ => return Err(err(i, "expected ',' or ')'")),
            }
        }
        i += 1;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        skip_ws(&mut i);
    }
    let mut seen = std::collections::HashSet::new();
    for p in cycles.iter().flatten() {
        if !seen.insert(*p) {
            return Err(Error::parse(line, 1, format!("point {} repeated", p + 1)));
        }
    }
    Perm::from_cycles(&cycles)
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Perm> for String {
    fn from(p: Perm) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Perm {
    type Error = Error;
    fn try_from(s: String) -> Result<Perm> {
        Perm::parse(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_right_first() {
        let a = Perm::parse("(1,2)").unwrap();
        let b = Perm::parse("(2,3)").unwrap();
        assert_eq!(compose(&a, &b), Perm::parse("(1,2,3)").unwrap());
    }

    #[test]
    fn identity_and_inverse() {
        let g = Perm::parse("(1,4,2)(3,5)").unwrap();
        assert_eq!(&Perm::identity() * &g, g);
        assert!((&g * &g.inverse()).is_identity());
        assert_eq!(g.order(), 6);
        assert_eq!(g.pow(6), Perm::identity());
        assert_eq!(g.pow(-1), g.inverse());
    }

    #[test]
    fn padding_equality() {
        let a = Perm::from_images(vec![1, 0, 2, 3]).unwrap();
        let b = Perm::from_images(vec![1, 0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), 2);
    }

    #[test]
    fn conj_formula() {
        let x = Perm::parse("(1,2)").unwrap();
        let y = Perm::parse("(2,3)").unwrap();
        let expect = &(&x * &y) * &x.inverse();
        assert_eq!(x.conj(&y), expect);
        assert_eq!(x.conj(&y), Perm::parse("(1,3)").unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(Perm::parse("(1,2").is_err());
        assert!(Perm::parse("(0,1)").is_err());
        assert!(Perm::parse("(1,1)").is_err());
        assert!(Perm::parse("()").unwrap().is_identity());
        assert_eq!(Perm::parse("(1,3)(2,4)").unwrap().to_string(), "(1,3)(2,4)");
    }
}
