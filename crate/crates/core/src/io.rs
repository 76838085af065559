//! Flat-file formats.
//!
//! Families are JSON lines: a header holding the space descriptor, then one
//! member per line as `{"id": 3, "coords": [[label, num, den], …]}`. Float
//! files may write `[label, x]` instead. The CSV form has the columns
//! `id,label,num,den` (an empty `den` marks a float) and takes the space from
//! the caller. Operators are a single JSON object
//! `{"domain", "codomain", "triplets": [[row, col, num, den], …]}`.

use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::scalar::Scalar;
use crate::space::{CoordinateLabel, SpaceDescriptor, SparseVector, VectorFamily};

/// A family together with the 1-based source line of every member.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedFamily<S> {
    pub family: VectorFamily<S>,
    pub lines: Vec<usize>,
}

impl<S: Scalar> ParsedFamily<S> {
    pub fn line_of(&self, id: u64) -> Option<usize> {
        self.family
            .members()
            .binary_search_by_key(&id, |(i, _)| *i)
            .ok()
            .map(|k| self.lines[k])
    }
}

#[derive(Deserialize)]
struct MemberIn {
    id: u64,
    coords: Vec<Vec<Number>>,
}

#[derive(Serialize)]
struct MemberOut {
    id: u64,
    coords: Vec<Vec<Number>>,
}

fn parse_error(line: usize, message: impl ToString) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

fn coordinate<S: Scalar>(entry: &[Number]) -> std::result::Result<(CoordinateLabel, S), String> {
    let (label, value) = entry
        .split_first()
        .ok_or_else(|| "empty coordinate".to_string())?;
    let label = label
        .as_u64()
        .ok_or_else(|| format!("label {label} is not a non-negative integer"))?;
    Ok((CoordinateLabel(label), S::from_json_parts(value)?))
}

pub fn read_family_jsonl<S: Scalar, R: BufRead>(reader: R) -> Result<ParsedFamily<S>> {
    let mut space: Option<Arc<SpaceDescriptor>> = None;
    let mut family: Option<VectorFamily<S>> = None;
    let mut lines = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let n = k + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let Some(space) = &space else {
            let descriptor: SpaceDescriptor =
                serde_json::from_str(&line).map_err(|e| parse_error(n, e))?;
            let descriptor = Arc::new(descriptor);
            family = Some(VectorFamily::new(descriptor.clone()));
            space = Some(descriptor);
            continue;
        };
        let member: MemberIn = serde_json::from_str(&line).map_err(|e| parse_error(n, e))?;
        let entries = member
            .coords
            .iter()
            .map(|c| coordinate(c))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_error(n, e))?;
        let vector = SparseVector::new(space.clone(), entries).map_err(|e| parse_error(n, e))?;
        family
            .as_mut()
            .expect("set with the header")
            .push(member.id, vector)
            .map_err(|e| parse_error(n, e))?;
        lines.push(n);
    }
    let family = family.ok_or_else(|| parse_error(1, "missing space header"))?;
    Ok(ParsedFamily { family, lines })
}

pub fn write_family_jsonl<S: Scalar, W: Write>(mut w: W, family: &VectorFamily<S>) -> Result<()> {
    serde_json::to_writer(&mut w, family.space().as_ref()).map_err(|e| Error::Io(e.to_string()))?;
    w.write_all(b"\n")?;
    for (id, v) in family.members() {
        let coords = v
            .entries()
            .iter()
            .map(|(l, x)| {
                let mut c = vec![Number::from(l.0)];
                c.extend(x.to_json_parts());
                c
            })
            .collect();
        serde_json::to_writer(&mut w, &MemberOut { id: *id, coords })
            .map_err(|e| Error::Io(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct CsvRow {
    id: u64,
    label: u64,
    num: String,
    den: String,
}

/// Rows may come in any order; members are assembled per id.
pub fn read_family_csv<S: Scalar, R: Read>(
    reader: R,
    space: SpaceDescriptor,
) -> Result<ParsedFamily<S>> {
    let space = Arc::new(space);
    let mut members: BTreeMap<u64, (usize, Vec<(CoordinateLabel, S)>)> = BTreeMap::new();
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    for (k, row) in csv.deserialize::<CsvRow>().enumerate() {
        // Line 1 is the header.
        let n = k + 2;
        let row = row.map_err(|e| parse_error(n, e))?;
        let number = |s: &str| Number::from_str(s).map_err(|e| parse_error(n, e));
        let parts = if row.den.is_empty() {
            vec![number(&row.num)?]
        } else {
            vec![number(&row.num)?, number(&row.den)?]
        };
        let value = S::from_json_parts(&parts).map_err(|e| parse_error(n, e))?;
        members
            .entry(row.id)
            .or_insert_with(|| (n, Vec::new()))
            .1
            .push((CoordinateLabel(row.label), value));
    }
    let mut family = VectorFamily::new(space.clone());
    let mut lines = Vec::with_capacity(members.len());
    for (id, (line, entries)) in members {
        let v = SparseVector::new(space.clone(), entries).map_err(|e| parse_error(line, e))?;
        family.push(id, v)?;
        lines.push(line);
    }
    Ok(ParsedFamily { family, lines })
}

pub fn write_family_csv<S: Scalar, W: Write>(w: W, family: &VectorFamily<S>) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    csv.write_record(["id", "label", "num", "den"])
        .map_err(io)?;
    for (id, v) in family.members() {
        for (l, x) in v.entries() {
            let parts = x.to_json_parts();
            let den = parts.get(1).map_or(String::new(), Number::to_string);
            csv.write_record([id.to_string(), l.0.to_string(), parts[0].to_string(), den])
                .map_err(io)?;
        }
    }
    csv.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    domain: SpaceDescriptor,
    codomain: SpaceDescriptor,
    triplets: Vec<Vec<Number>>,
}

pub fn operator_to_json<S: Scalar>(t: &LinearOperator<S>) -> serde_json::Value {
    let triplets = t
        .triplets()
        .iter()
        .map(|(r, c, v)| {
            let mut entry = vec![Number::from(r.0), Number::from(c.0)];
            entry.extend(v.to_json_parts());
            entry
        })
        .collect();
    serde_json::to_value(OperatorRepr {
        domain: **t.domain(),
        codomain: **t.codomain(),
        triplets,
    })
    .expect("operators serialise")
}

pub fn operator_from_json<S: Scalar>(value: serde_json::Value) -> Result<LinearOperator<S>> {
    let repr: OperatorRepr = serde_json::from_value(value).map_err(|e| parse_error(0, e))?;
    let mut triplets = Vec::with_capacity(repr.triplets.len());
    for (k, entry) in repr.triplets.iter().enumerate() {
        let bad = |m: String| parse_error(0, format!("triplet {k}: {m}"));
        if entry.len() < 3 {
            return Err(bad("expected [row, col, num, den]".into()));
        }
        let index = |n: &Number| {
            n.as_u64()
                .ok_or_else(|| bad(format!("{n} is not an index")))
        };
        let (row, col) = (index(&entry[0])?, index(&entry[1])?);
        let value = S::from_json_parts(&entry[2..]).map_err(bad)?;
        triplets.push((CoordinateLabel(row), CoordinateLabel(col), value));
    }
    LinearOperator::new(Arc::new(repr.domain), Arc::new(repr.codomain), triplets)
}

pub fn read_operator<S: Scalar, R: Read>(reader: R) -> Result<LinearOperator<S>> {
    let value = serde_json::from_reader(reader).map_err(|e| parse_error(e.line(), e))?;
    operator_from_json(value)
}

pub fn write_operator<S: Scalar, W: Write>(mut w: W, t: &LinearOperator<S>) -> Result<()> {
    serde_json::to_writer(&mut w, &operator_to_json(t)).map_err(|e| Error::Io(e.to_string()))?;
    w.write_all(b"\n")?;
    Ok(())
}
