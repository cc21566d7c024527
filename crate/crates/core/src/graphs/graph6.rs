//! graph6 encoding (short header form only).
//!
//! A record is one header byte `n + 63` followed by the upper triangle of
//! the adjacency matrix in column order `x(0,1), x(0,2), x(1,2), x(0,3), ...`,
//! packed six bits per byte (most significant first) with each byte offset
//! by 63. The final byte is padded with zero bits.

use crate::error::{Error, Result};
use crate::graphs::Graph;

const OFFSET: u8 = 63;
const MAX_SHORT_N: usize = 62;

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Decode one graph6 record. Trailing `\n` / `\r` are ignored, as is an
/// optional `>>graph6<<` prefix.
pub fn parse_graph6(line: &[u8]) -> Result<Graph> {
    let mut bytes = line;
    while let [rest @ .., b'\n' | b'\r'] = bytes {
        bytes = rest;
    }
    if let Some(rest) = bytes.strip_prefix(b">>graph6<<") {
        bytes = rest;
    }
    let (&header, body) = bytes.split_first().ok_or(Error::Graph6Empty)?;
    if header == 126 {
        return Err(Error::Graph6LongHeader);
    }
    if !(OFFSET..=126).contains(&header) {
        return Err(Error::Graph6ByteRange {
            offset: 0,
            byte: header,
        });
    }
    let n = usize::from(header - OFFSET);
    let expected = body_len(n);
    if let Some((i, &b)) = body
        .iter()
        .enumerate()
        .find(|(_, &b)| !(OFFSET..=126).contains(&b))
    {
        return Err(Error::Graph6ByteRange {
            offset: i + 1,
            byte: b,
        });
    }
    if body.len() < expected {
        return Err(Error::Graph6Truncated {
            expected,
            found: body.len(),
        });
    }
    if body.len() > expected {
        return Err(Error::Graph6TrailingBytes {
            extra: body.len() - expected,
        });
    }

    let bit = |k: usize| -> bool {
        let byte = body[k / 6] - OFFSET;
        (byte >> (5 - k % 6)) & 1 == 1
    };
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    for pad in k..expected * 6 {
        if bit(pad) {
            return Err(Error::Graph6Padding);
        }
    }
    Graph::new(n, edges)
}

/// Encode a simple graph as a graph6 record (no trailing newline).
pub fn encode_graph6(n: usize, edges: &[(usize, usize)]) -> Result<Vec<u8>> {
    if n > MAX_SHORT_N {
        return Err(Error::Graph6LongHeader);
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let mut bits = vec![false; body_len(n) * 6];
    for &(a, b) in edges {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if j >= n {
            return Err(Error::VertexOutOfRange { vertex: j, n });
        }
        debug_assert!(i != j);
        bits[j * (j - 1) / 2 + i] = true;
    }
    debug_assert!(bits.len() >= nbits);
    let mut out = Vec::with_capacity(1 + body_len(n));
    out.push(n as u8 + OFFSET);
    for chunk in bits.chunks(6) {
        let v = chunk.iter().fold(0u8, |acc, &b| (acc << 1) | u8::from(b));
        out.push(v + OFFSET);
    }
    Ok(out)
}

/// Parse every non-empty line of a graph6 file. Errors carry the 1-based
/// line number.
pub fn parse_graph6_lines(text: &[u8]) -> Vec<(usize, Result<Graph>)> {
    text.split(|&b| b == b'\n')
        .enumerate()
        .filter(|(_, line)| !line.iter().all(|b| b.is_ascii_whitespace()))
        .map(|(i, line)| (i + 1, parse_graph6(line)))
        .collect()
}
