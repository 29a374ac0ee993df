//! Plain-text set and witness files.
//!
//! ```text
//! stabset v1            stabwit v1
//! group f2 n=3          group f2 n=3
//! 000                   k=1
//! 011                   s 011
//!                       t 000
//! ```
//!
//! Bitstrings list coordinate 1 first; integers are signed decimals. Set
//! elements are written in increasing order, which makes serialization of a
//! parsed canonical file byte-identical. Blank lines are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::group::{Ambient, FiniteSet, GroupElement, Witness};

pub const SET_MAGIC: &str = "stabset v1";
pub const WITNESS_MAGIC: &str = "stabwit v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetFile {
    F2(FiniteSet<BitVector>),
    Z(FiniteSet<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessFile {
    F2(Witness<BitVector>),
    Z(Witness<i64>),
}

impl SetFile {
    pub fn ambient(&self) -> Ambient {
        match self {
            SetFile::F2(a) => a.ambient(),
            SetFile::Z(a) => a.ambient(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SetFile::F2(a) => a.len(),
            SetFile::Z(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl WitnessFile {
    pub fn ambient(&self) -> Ambient {
        match self {
            WitnessFile::F2(w) => w.ambient(),
            WitnessFile::Z(w) => w.ambient(),
        }
    }
}

fn group_line(ambient: Ambient) -> String {
    format!("group {ambient}")
}

/// Numbered non-blank lines.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty())
}

fn expect_line<'a>(
    it: &mut impl Iterator<Item = (usize, &'a str)>,
    what: &str,
) -> Result<(usize, &'a str)> {
    it.next()
        .ok_or_else(|| Error::parse(0, format!("unexpected end of file, expected {what}")))
}

fn parse_group(line_no: usize, line: &str) -> Result<Ambient> {
    match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["group", "z"] => Ok(Ambient::Z),
        ["group", "f2", dim] => dim
            .strip_prefix("n=")
            .and_then(|n| n.parse().ok())
            .map(Ambient::F2)
            .ok_or_else(|| Error::parse(line_no, format!("bad dimension {dim:?}"))),
        _ => Err(Error::parse(line_no, format!("bad group line {line:?}"))),
    }
}

fn parse_elem<E: GroupElement + FromStr>(
    ambient: Ambient,
    line_no: usize,
    text: &str,
) -> Result<E> {
    let e: E = text
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad element {text:?}")))?;
    if e.ambient() != ambient {
        return Err(Error::parse(
            line_no,
            format!("element {text} does not lie in {ambient}"),
        ));
    }
    Ok(e)
}

fn parse_set_body<E: GroupElement + FromStr>(
    ambient: Ambient,
    body: impl Iterator<Item = (usize, impl AsRef<str>)>,
) -> Result<FiniteSet<E>> {
    let mut elems = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (line_no, line) in body {
        let e = parse_elem::<E>(ambient, line_no, line.as_ref())?;
        if !seen.insert(e) {
            return Err(Error::parse(line_no, format!("duplicate element {e}")));
        }
        elems.push(e);
    }
    FiniteSet::new(ambient, elems)
}

pub fn parse_set(text: &str) -> Result<SetFile> {
    let mut it = lines(text);
    let (n0, magic) = expect_line(&mut it, "header")?;
    if magic != SET_MAGIC {
        return Err(Error::parse(n0, format!("expected {SET_MAGIC:?}")));
    }
    let (n1, group) = expect_line(&mut it, "group line")?;
    match parse_group(n1, group)? {
        a @ Ambient::F2(_) => Ok(SetFile::F2(parse_set_body(a, it)?)),
        Ambient::Z => Ok(SetFile::Z(parse_set_body(Ambient::Z, it)?)),
    }
}

pub fn write_set<E: GroupElement>(a: &FiniteSet<E>) -> String {
    let mut out = format!("{SET_MAGIC}\n{}\n", group_line(a.ambient()));
    for e in a.iter() {
        writeln!(out, "{e}").unwrap();
    }
    out
}

impl SetFile {
    pub fn to_text(&self) -> String {
        match self {
            SetFile::F2(a) => write_set(a),
            SetFile::Z(a) => write_set(a),
        }
    }
}

fn parse_witness_body<'a, E: GroupElement + FromStr>(
    ambient: Ambient,
    k: usize,
    mut it: impl Iterator<Item = (usize, &'a str)>,
) -> Result<Witness<E>> {
    let mut read = |tag: &str| -> Result<Vec<E>> {
        (0..k)
            .map(|_| {
                let (line_no, line) = expect_line(&mut it, &format!("{tag} line"))?;
                let rest = line
                    .strip_prefix(tag)
                    .and_then(|r| r.strip_prefix(' '))
                    .ok_or_else(|| Error::parse(line_no, format!("expected \"{tag} <elem>\"")))?;
                parse_elem(ambient, line_no, rest.trim())
            })
            .collect()
    };
    let s = read("s")?;
    let t = read("t")?;
    if let Some((line_no, _)) = it.next() {
        return Err(Error::parse(line_no, format!("more than k = {k} entries per side")));
    }
    Witness::new(ambient, s, t)
}

pub fn parse_witness(text: &str) -> Result<WitnessFile> {
    let mut it = lines(text);
    let (n0, magic) = expect_line(&mut it, "header")?;
    if magic != WITNESS_MAGIC {
        return Err(Error::parse(n0, format!("expected {WITNESS_MAGIC:?}")));
    }
    let (n1, group) = expect_line(&mut it, "group line")?;
    let ambient = parse_group(n1, group)?;
    let (n2, kline) = expect_line(&mut it, "k= line")?;
    let k = kline
        .strip_prefix("k=")
        .and_then(|k| k.parse().ok())
        .ok_or_else(|| Error::parse(n2, format!("bad order line {kline:?}")))?;
    match ambient {
        Ambient::F2(_) => Ok(WitnessFile::F2(parse_witness_body(ambient, k, it)?)),
        Ambient::Z => Ok(WitnessFile::Z(parse_witness_body(ambient, k, it)?)),
    }
}

pub fn write_witness<E: GroupElement>(w: &Witness<E>) -> String {
    let mut out = format!("{WITNESS_MAGIC}\n{}\nk={}\n", group_line(w.ambient()), w.k());
    for e in w.s() {
        writeln!(out, "s {e}").unwrap();
    }
    for e in w.t() {
        writeln!(out, "t {e}").unwrap();
    }
    out
}

impl WitnessFile {
    pub fn to_text(&self) -> String {
        match self {
            WitnessFile::F2(w) => write_witness(w),
            WitnessFile::Z(w) => write_witness(w),
        }
    }
}
