//! hMetis hypergraph files and plain partition files.
//!
//! hMetis layout: a header `|E| |V| [fmt]`, then one line per hyperedge with
//! 1-indexed pins. `fmt` 1 prefixes each hyperedge line with its weight,
//! 10 appends `|V|` vertex-weight lines, 11 does both. Lines starting with
//! `%` are comments.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::partition::{BlockId, Partition};
use super::{Hypergraph, VertexId, Weight};
use crate::error::{Error, Result};

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(Error::from))
        .filter(|r| match r {
            Ok((_, l)) => {
                let t = l.trim_start();
                !t.is_empty() && !t.starts_with('%')
            }
            Err(_) => true,
        })
}

fn parse_int(line: usize, token: &str) -> Result<i64> {
    token
        .parse::<i64>()
        .map_err(|_| Error::parse(line, format!("expected an integer, found `{token}`")))
}

fn parse_weight(line: usize, token: &str, what: impl FnOnce() -> String) -> Result<Weight> {
    let value = parse_int(line, token)?;
    if value <= 0 {
        return Err(Error::NonPositiveWeight {
            what: what(),
            value,
        });
    }
    Ok(value as Weight)
}

pub fn parse_hmetis<R: BufRead>(reader: R) -> Result<Hypergraph> {
    let mut lines = content_lines(reader);
    let (hline, header) = lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::parse(0, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if !(2..=3).contains(&fields.len()) {
        return Err(Error::parse(
            hline,
            "header must be `<edges> <vertices> [fmt]`",
        ));
    }
    let edge_count = parse_int(hline, fields[0])?;
    let vertex_count = parse_int(hline, fields[1])?;
    if edge_count < 0 || vertex_count < 0 {
        return Err(Error::parse(hline, "negative counts in header"));
    }
    let (edge_count, vertex_count) = (edge_count as usize, vertex_count as usize);
    let fmt = match fields.get(2) {
        None => 0,
        Some(t) => parse_int(hline, t)?,
    };
    let (has_edge_weights, has_vertex_weights) = match fmt {
        0 => (false, false),
        1 => (true, false),
        10 => (false, true),
        11 => (true, true),
        other => return Err(Error::parse(hline, format!("unsupported fmt flag {other}"))),
    };

    let mut edges = Vec::with_capacity(edge_count);
    let mut edge_weights = Vec::with_capacity(edge_count);
    for e in 0..edge_count {
        let (ln, text) = lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::parse(0, format!("expected {edge_count} hyperedges, found {e}")))?;
        let mut tokens = text.split_whitespace();
        if has_edge_weights {
            let t = tokens.next().unwrap_or_default();
            edge_weights.push(parse_weight(ln, t, || format!("hyperedge {}", e + 1))?);
        } else {
            edge_weights.push(1);
        }
        let mut pins = Vec::new();
        for t in tokens {
            let pin = parse_int(ln, t)?;
            if pin < 1 || pin as usize > vertex_count {
                return Err(Error::PinOutOfRange {
                    edge: e,
                    pin,
                    vertex_count,
                });
            }
            pins.push((pin - 1) as VertexId);
        }
        if pins.is_empty() {
            return Err(Error::parse(ln, format!("hyperedge {} has no pins", e + 1)));
        }
        edges.push(pins);
    }

    let vertex_weights = if has_vertex_weights {
        let mut weights = Vec::with_capacity(vertex_count);
        for v in 0..vertex_count {
            let (ln, text) = lines.next().transpose()?.ok_or_else(|| {
                Error::parse(0, format!("expected {vertex_count} vertex weights, found {v}"))
            })?;
            let t = text.split_whitespace().next().unwrap_or_default();
            weights.push(parse_weight(ln, t, || format!("vertex {}", v + 1))?);
        }
        Some(weights)
    } else {
        None
    };
    if let Some(extra) = lines.next() {
        let (ln, _) = extra?;
        return Err(Error::parse(ln, "unexpected trailing content"));
    }
    Hypergraph::new(vertex_count, edges, vertex_weights, Some(edge_weights))
}

pub fn parse_hmetis_str(text: &str) -> Result<Hypergraph> {
    parse_hmetis(text.as_bytes())
}

pub fn read_hmetis(path: impl AsRef<Path>) -> Result<Hypergraph> {
    parse_hmetis(BufReader::new(File::open(path)?))
}

/// Writes `hg` in hMetis format, choosing the smallest fmt flag that keeps
/// every non-unit weight.
pub fn write_hmetis<W: Write>(hg: &Hypergraph, mut out: W) -> Result<()> {
    let edge_w = hg.edge_weights().iter().any(|&w| w != 1);
    let vertex_w = hg.vertex_weights().iter().any(|&w| w != 1);
    match (edge_w, vertex_w) {
        (false, false) => writeln!(out, "{} {}", hg.num_edges(), hg.num_vertices())?,
        (true, false) => writeln!(out, "{} {} 1", hg.num_edges(), hg.num_vertices())?,
        (false, true) => writeln!(out, "{} {} 10", hg.num_edges(), hg.num_vertices())?,
        (true, true) => writeln!(out, "{} {} 11", hg.num_edges(), hg.num_vertices())?,
    }
    for e in hg.edges() {
        let mut fields = Vec::with_capacity(hg.edge_size(e) + 1);
        if edge_w {
            fields.push(hg.edge_weight(e).to_string());
        }
        fields.extend(hg.pins(e).iter().map(|p| (p + 1).to_string()));
        writeln!(out, "{}", fields.join(" "))?;
    }
    if vertex_w {
        for &w in hg.vertex_weights() {
            writeln!(out, "{w}")?;
        }
    }
    Ok(())
}

pub fn write_hmetis_file(hg: &Hypergraph, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_hmetis(hg, &mut out)?;
    out.flush()?;
    Ok(())
}

/// One block id per line, in vertex order.
pub fn write_partition<W: Write>(part: &Partition, mut out: W) -> Result<()> {
    for &b in part.blocks() {
        writeln!(out, "{b}")?;
    }
    Ok(())
}

pub fn partition_to_string(part: &Partition) -> String {
    let mut buf = Vec::new();
    write_partition(part, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn write_partition_file(part: &Partition, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_partition(part, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Reads block ids written by [`write_partition`].
pub fn read_blocks<R: Read>(reader: R) -> Result<Vec<BlockId>> {
    let mut blocks = Vec::new();
    for line in content_lines(BufReader::new(reader)) {
        let (ln, text) = line?;
        let t = text.trim();
        let b = t
            .parse::<BlockId>()
            .map_err(|_| Error::parse(ln, format!("invalid block id `{t}`")))?;
        blocks.push(b);
    }
    Ok(blocks)
}

pub fn read_partition<R: Read>(hg: &Hypergraph, reader: R, k: u32) -> Result<Partition> {
    Partition::new(hg, read_blocks(reader)?, k)
}

pub fn read_partition_file(hg: &Hypergraph, path: impl AsRef<Path>, k: u32) -> Result<Partition> {
    read_partition(hg, File::open(path)?, k)
}
