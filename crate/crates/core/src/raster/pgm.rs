//! PGM (P2 ascii / P5 binary) reading and writing, 8-bit only.

use super::GrayImage;
use crate::{Error, Result};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, field: &'static str, message: impl Into<String>) -> Error {
        Error::Format {
            offset: self.pos,
            field,
            message: message.into(),
        }
    }

    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, field: &'static str) -> Result<usize> {
        self.skip_separators();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.bytes.get(self.pos) {
                None => self.err(field, "unexpected end of data"),
                Some(&b) => self.err(field, format!("expected decimal digit, found {:?}", b as char)),
            });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        text.parse::<usize>().map_err(|_| Error::Format {
            offset: start,
            field,
            message: format!("number {text} out of range"),
        })
    }
}

/// Parses a PGM file with maxval 255.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cur = Cursor { bytes, pos: 0 };
    let binary = match bytes.get(0..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(cur.err("magic", "expected P2 or P5")),
    };
    cur.pos = 2;
    if !bytes.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(cur.err("magic", "missing separator after magic number"));
    }

    let width = cur.number("width")?;
    let height = cur.number("height")?;
    if width == 0 || height == 0 {
        return Err(cur.err("dimensions", format!("{width}x{height} image is empty")));
    }
    let maxval_start = {
        cur.skip_separators();
        cur.pos
    };
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Format {
            offset: maxval_start,
            field: "maxval",
            message: format!("only maxval 255 is supported, found {maxval}"),
        });
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| cur.err("dimensions", "image too large"))?;

    let pixels = if binary {
        // exactly one whitespace byte separates the header from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(cur.err("maxval", "missing separator before raster")),
        }
        let end = cur.pos + count;
        if bytes.len() < end {
            return Err(cur.err(
                "raster",
                format!("truncated payload: need {count} bytes, have {}", bytes.len() - cur.pos),
            ));
        }
        bytes[cur.pos..end].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        for _ in 0..count {
            let start = {
                cur.skip_separators();
                cur.pos
            };
            let v = cur.number("raster")?;
            if v > 255 {
                return Err(Error::Format {
                    offset: start,
                    field: "raster",
                    message: format!("sample {v} exceeds maxval"),
                });
            }
            pixels.push(v as u8);
        }
        pixels
    };

    GrayImage::new(width, height, pixels)
}

/// Encodes `img` as binary P5 (`binary == true`) or ascii P2.
pub fn save_pgm(img: &GrayImage, binary: bool) -> Vec<u8> {
    let header = format!(
        "{}\n{} {}\n255\n",
        if binary { "P5" } else { "P2" },
        img.width(),
        img.height()
    );
    let mut out = header.into_bytes();
    if binary {
        out.extend_from_slice(img.pixels());
    } else {
        for row in img.pixels().chunks(img.width()) {
            let line = row
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.extend_from_slice(line.as_bytes());
            out.push(b'\n');
        }
    }
    out
}
