//! graph6 serialization.
//!
//! The body packs the upper triangle of the adjacency matrix column by column
//! (`x(0,1), x(0,2), x(1,2), x(0,3), ...`) into 6-bit groups offset by 63.
//! Orders up to 62 use the one-byte size header; larger orders use the
//! `~`-prefixed long headers.

use thiserror::Error;

use crate::graph::{Builder, Graph};

const SHORT_MAX: usize = 62;
const MEDIUM_MAX: usize = 258_047;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("graph6: empty input")]
    Empty,
    #[error("graph6: malformed size header ({0})")]
    MalformedHeader(&'static str),
    #[error("graph6: byte 0x{byte:02x} at offset {offset} outside the printable range 63..=126")]
    OutOfRange { offset: usize, byte: u8 },
    #[error("graph6: body truncated, expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("graph6: trailing garbage, expected {expected} body bytes, found {found}")]
    TrailingGarbage { expected: usize, found: usize },
    #[error("graph6: nonzero padding bits in final byte")]
    NonzeroPadding,
    #[error("graph6: order 0 is not a valid graph")]
    ZeroOrder,
}

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

fn push_size(out: &mut Vec<u8>, n: usize) {
    if n <= SHORT_MAX {
        out.push(n as u8 + 63);
    } else if n <= MEDIUM_MAX {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

pub fn encode(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(8 + body_len(n));
    push_size(&mut out, n);
    let (mut acc, mut filled) = (0u8, 0);
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

fn sixbits(bytes: &[u8], offset: usize) -> Result<u8, Graph6Error> {
    let b = bytes[offset];
    if (63..=126).contains(&b) {
        Ok(b - 63)
    } else {
        Err(Graph6Error::OutOfRange { offset, byte: b })
    }
}

fn read_size(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    let first = *bytes.first().ok_or(Graph6Error::Empty)?;
    if first != 126 {
        return Ok((sixbits(bytes, 0)? as usize, 1));
    }
    let (start, width) = if bytes.get(1) == Some(&126) { (2, 6) } else { (1, 3) };
    if bytes.len() < start + width {
        return Err(Graph6Error::MalformedHeader("long-form size header cut short"));
    }
    let mut n = 0usize;
    for off in start..start + width {
        n = n << 6 | sixbits(bytes, off)? as usize;
    }
    Ok((n, start + width))
}

/// Decode one graph6 string. A leading `>>graph6<<` marker is accepted;
/// whitespace is not (callers split lines first).
pub fn decode(s: &str) -> Result<Graph, Graph6Error> {
    let bytes = s.as_bytes();
    let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
    let (n, head) = read_size(bytes)?;
    if n == 0 {
        return Err(Graph6Error::ZeroOrder);
    }
    let body = &bytes[head..];
    let expected = body_len(n);
    if body.len() < expected {
        return Err(Graph6Error::Truncated {
            expected,
            found: body.len(),
        });
    }
    if body.len() > expected {
        return Err(Graph6Error::TrailingGarbage {
            expected,
            found: body.len(),
        });
    }
    let mut b = Builder::new(n);
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let v = sixbits(bytes, head + bit / 6)?;
            if v >> (5 - bit % 6) & 1 == 1 {
                b.set(i, j, true);
            }
            bit += 1;
        }
    }
    if !bit.is_multiple_of(6) {
        let last = sixbits(bytes, head + bit / 6)?;
        if last & ((1 << (6 - bit % 6)) - 1) != 0 {
            return Err(Graph6Error::NonzeroPadding);
        }
    }
    Ok(b.finish())
}
