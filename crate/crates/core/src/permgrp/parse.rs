use super::group::PermGroup;
use super::perm::{parse_cycles, Perm};
use crate::error::{Error, Result};

/// Parses the group file format: `degree N` followed by one generator per line.
pub fn parse_group(text: &str) -> Result<PermGroup> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match degree {
            None => {
                let mut parts = content.split_whitespace();
                if parts.next() != Some("degree") {
                    return Err(Error::parse(line, 1, "expected `degree N`"));
                }
                let n = parts
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::parse(line, 8, "degree must be a positive integer"))?;
                if parts.next().is_some() {
                    return Err(Error::parse(line, 1, "trailing tokens after degree"));
                }
                degree = Some(n);
            }
            Some(n) => gens.push(parse_cycles(content, line, Some(n))?),
        }
    }
    let n = degree.ok_or_else(|| Error::parse(1, 1, "missing `degree N` line"))?;
    if gens.is_empty() {
        return Err(Error::parse(text.lines().count().max(1), 1, "no generators"));
    }
    Ok(PermGroup::with_degree(gens, n))
}

/// Writes a group in the group file format.
pub fn format_group(g: &PermGroup, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for l in c.lines() {
            out.push_str(&format!("# {l}\n"));
        }
    }
    out.push_str(&format!("degree {}\n", g.degree()));
    for x in g.generators() {
        out.push_str(&format!("{x}\n"));
    }
    out
}

impl std::str::FromStr for Perm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Perm> {
        Perm::parse(s)
    }
}
