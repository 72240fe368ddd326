//! Line-oriented interleaver file.
//!
//! ```text
//! RA-IL v1 k=<k> n=<n> girth=<g>
//! q_1 p_1 p_2 ... p_{q_1}
//! ...
//! ```
//!
//! Positions are 1-based and ascending within a line; `girth` is an integer
//! or `inf`. Lines starting with `#` and blank lines are ignored.

use std::fmt::Write as _;

use crate::encoder::GroupedInterleaver;
use crate::error::{Error, Result};

pub fn write_interleaver(il: &GroupedInterleaver, girth: Option<usize>) -> String {
    let mut out = String::new();
    let girth = girth.map_or_else(|| "inf".to_string(), |g| g.to_string());
    writeln!(out, "RA-IL v1 k={} n={} girth={}", il.k(), il.n(), girth).unwrap();
    for g in il.groups() {
        write!(out, "{}", g.len()).unwrap();
        for p in g {
            write!(out, " {}", p + 1).unwrap();
        }
        out.push('\n');
    }
    out
}

fn header_field<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("interleaver header is missing `{key}=`")))
}

fn parse_num(s: &str, what: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("invalid {what} `{s}`")))
}

/// Parses an interleaver file, returning it with the declared girth.
pub fn parse_interleaver(text: &str) -> Result<(GroupedInterleaver, Option<usize>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty interleaver file".into()))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("RA-IL") || tokens.next() != Some("v1") {
        return Err(Error::Parse("interleaver header must start with `RA-IL v1`".into()));
    }
    let k = parse_num(header_field(tokens.next(), "k")?, "k")?;
    let n = parse_num(header_field(tokens.next(), "n")?, "n")?;
    let girth = match header_field(tokens.next(), "girth")? {
        "inf" => None,
        g => Some(parse_num(g, "girth")?),
    };
    if tokens.next().is_some() {
        return Err(Error::Parse("trailing tokens in interleaver header".into()));
    }

    let mut groups = Vec::with_capacity(k);
    for (t, line) in lines.enumerate() {
        let mut nums = line.split_whitespace().map(|s| parse_num(s, "position"));
        let q = nums.next().ok_or_else(|| Error::Parse(format!("group line {} is empty", t + 1)))??;
        let positions = nums.collect::<Result<Vec<_>>>()?;
        if positions.len() != q {
            return Err(Error::Parse(format!("group {} declares {q} positions but lists {}", t + 1, positions.len())));
        }
        if positions.contains(&0) {
            return Err(Error::Parse(format!("group {} has position 0; positions are 1-based", t + 1)));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!("group {} is not strictly ascending", t + 1)));
        }
        groups.push(positions.into_iter().map(|p| p - 1).collect::<Vec<_>>());
    }
    if groups.len() != k {
        return Err(Error::Parse(format!("header declares k={k} but the file has {} groups", groups.len())));
    }
    let il = GroupedInterleaver::new(groups, n)?;
    Ok((il, girth))
}
