use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::table::CharacterTable;
use crate::cyclo::parse::parse_at;
use crate::error::{Error, Result};

struct Line<'a> {
    no: usize,
    tokens: Vec<(usize, &'a str)>,
}

fn tokenize(raw: &str) -> Vec<(usize, &str)> {
    let content = raw.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &content[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &content[s..]));
    }
    out
}

fn expect_key<'a>(lines: &mut std::slice::Iter<'a, Line<'a>>, key: &str, last: usize) -> Result<&'a Line<'a>> {
    match lines.next() {
        Some(l) if l.tokens[0].1 == key => Ok(l),
        Some(l) => Err(Error::parse(l.no, 1, format!("expected `{key}`, found `{}`", l.tokens[0].1))),
        None => Err(Error::parse(last, 1, format!("missing `{key}` line"))),
    }
}

fn single<'a>(l: &'a Line<'a>) -> Result<(usize, &'a str)> {
    if l.tokens.len() != 2 {
        return Err(Error::parse(l.no, 1, format!("`{}` takes exactly one value", l.tokens[0].1)));
    }
    Ok(l.tokens[1])
}

fn parse_num<T: std::str::FromStr>(l: &Line<'_>, (col, tok): (usize, &str)) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(l.no, col, format!("invalid integer `{tok}`")))
}

fn row<'a>(l: &'a Line<'a>, k: usize, skip: usize) -> Result<&'a [(usize, &'a str)]> {
    let vals = &l.tokens[skip..];
    if vals.len() != k {
        return Err(Error::parse(l.no, 1, format!("expected {k} entries, found {}", vals.len())));
    }
    Ok(vals)
}

/// Parses a CTAB v1 document and validates it.
pub fn parse_ctab(text: &str) -> Result<CharacterTable> {
    let t = parse_ctab_unchecked(text)?;
    t.validate()?;
    Ok(t)
}

/// Parses a CTAB v1 document without checking character-theoretic invariants.
pub fn parse_ctab_unchecked(text: &str) -> Result<CharacterTable> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| Line { no: i + 1, tokens: tokenize(raw) })
        .filter(|l| !l.tokens.is_empty())
        .collect();
    let last = text.lines().count().max(1);
    let mut it = lines.iter();
    let head = expect_key(&mut it, "CTAB", last)?;
    if single(head)?.1 != "1" {
        return Err(Error::parse(head.no, head.tokens[1].0, "unsupported CTAB version"));
    }
    let name = single(expect_key(&mut it, "group", last)?)?.1.to_string();
    let ol = expect_key(&mut it, "order", last)?;
    let order: BigUint = parse_num(ol, single(ol)?)?;
    let nl = expect_key(&mut it, "nclasses", last)?;
    let k: usize = parse_num(nl, single(nl)?)?;
    let cl = expect_key(&mut it, "classes", last)?;
    let labels: Vec<String> = row(cl, k, 1)?.iter().map(|(_, s)| s.to_string()).collect();
    let sl = expect_key(&mut it, "sizes", last)?;
    let sizes = row(sl, k, 1)?.iter().map(|&t| parse_num(sl, t)).collect::<Result<Vec<BigUint>>>()?;
    let rl = expect_key(&mut it, "orders", last)?;
    let orders = row(rl, k, 1)?.iter().map(|&t| parse_num(rl, t)).collect::<Result<Vec<u64>>>()?;
    let mut power_maps = BTreeMap::new();
    let mut irreducibles = Vec::new();
    for l in it {
        match l.tokens[0].1 {
            "powermap" => {
                if l.tokens.len() < 2 {
                    return Err(Error::parse(l.no, 1, "powermap needs a prime"));
                }
                let p: u64 = parse_num(l, l.tokens[1])?;
                let mut map = Vec::with_capacity(k);
                for &(col, tok) in row(l, k, 2)? {
                    let idx: usize = parse_num(l, (col, tok))?;
                    if idx == 0 || idx > k {
                        return Err(Error::parse(l.no, col, format!("class index {idx} out of range")));
                    }
                    map.push(idx - 1);
                }
                if power_maps.insert(p, map).is_some() {
                    return Err(Error::parse(l.no, 1, format!("duplicate power map {p}")));
                }
            }
            "char" => {
                if l.tokens.len() < 2 {
                    return Err(Error::parse(l.no, 1, "char needs a degree"));
                }
                let deg: u64 = parse_num(l, l.tokens[1])?;
                let vals =
                    row(l, k, 2)?.iter().map(|&(col, tok)| parse_at(tok, l.no, col)).collect::<Result<Vec<_>>>()?;
                if vals[0].as_i64() != Some(deg as i64) {
                    return Err(Error::parse(l.no, l.tokens[2].0, "first value differs from the degree"));
                }
                irreducibles.push(vals);
            }
            other => return Err(Error::parse(l.no, 1, format!("unknown record `{other}`"))),
        }
    }
    Ok(CharacterTable { name, order, labels, sizes, orders, power_maps, irreducibles })
}

/// Serializes a table in CTAB v1; `parse_ctab(&format_ctab(t)) == t`.
pub fn format_ctab(t: &CharacterTable) -> String {
    let join = |v: Vec<String>| v.join(" ");
    let mut out = String::new();
    out.push_str("CTAB 1\n");
    out.push_str(&format!("group {}\n", t.name));
    out.push_str(&format!("order {}\n", t.order));
    out.push_str(&format!("nclasses {}\n", t.nclasses()));
    out.push_str(&format!("classes {}\n", t.labels.join(" ")));
    out.push_str(&format!("sizes {}\n", join(t.sizes.iter().map(|s| s.to_string()).collect())));
    out.push_str(&format!("orders {}\n", join(t.orders.iter().map(|s| s.to_string()).collect())));
    for (p, map) in &t.power_maps {
        out.push_str(&format!("powermap {p} {}\n", join(map.iter().map(|i| (i + 1).to_string()).collect())));
    }
    for chi in &t.irreducibles {
        out.push_str(&format!("char {} {}\n", chi[0], join(chi.iter().map(|v| v.to_string()).collect())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: &str = "CTAB 1\ngroup S3\norder 6\nnclasses 3\nclasses 1A 2A 3A\nsizes 1 3 2\norders 1 2 3\n\
powermap 2 1 1 3\npowermap 3 1 2 1\nchar 1 1 1 1\nchar 1 1 -1 1\nchar 2 2 0 -1\n";

    #[test]
    fn roundtrip() {
        let t = parse_ctab(S3).unwrap();
        assert_eq!(t.nclasses(), 3);
        assert_eq!(format_ctab(&t), S3);
    }

    #[test]
    fn broken_orthogonality() {
        let bad = S3.replace("char 2 2 0 -1", "char 2 2 0 1");
        assert!(matches!(parse_ctab(&bad), Err(Error::CorruptTable(_)) | Err(Error::Orthogonality { .. })));
        let bad = S3.replace("char 1 1 -1 1", "char 1 1 -1 E(3)").replace("char 2 2 0 -1", "char 2 2 0 -1-E(3)");
        assert!(parse_ctab(&bad).is_err());
    }

    #[test]
    fn syntax_errors_have_positions() {
        let bad = S3.replace("sizes 1 3 2", "sizes 1 x 2");
        match parse_ctab(&bad) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (6, 9)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
