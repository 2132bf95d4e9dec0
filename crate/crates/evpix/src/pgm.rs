//! Binary PGM (P5) images, the only image format the tool emits.

use std::io::{self, BufRead, Read, Write};

/// Writes an 8-bit grayscale image, row-major, one byte per pixel.
pub fn write_pgm<W: Write>(mut w: W, width: u32, height: u32, pixels: &[u8]) -> io::Result<()> {
    assert_eq!(pixels.len(), (width as usize) * (height as usize), "pixel buffer size");
    write!(w, "P5\n{width} {height}\n255\n")?;
    w.write_all(pixels)
}

/// Reads an 8-bit P5 image back; comments and extra whitespace in the
/// header are accepted.
pub fn read_pgm<R: Read>(r: R) -> io::Result<(u32, u32, Vec<u8>)> {
    let mut r = io::BufReader::new(r);
    let magic = next_token(&mut r)?;
    if magic != "P5" {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "not a P5 PGM"));
    }
    let parse = |tok: String| {
        tok.parse::<u32>()
            .map_err(|_| io::Error::new(io::ErrorKind::InvalidData, "bad PGM header number"))
    };
    let width = parse(next_token(&mut r)?)?;
    let height = parse(next_token(&mut r)?)?;
    let maxval = parse(next_token(&mut r)?)?;
    if maxval != 255 {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "only maxval 255 supported"));
    }
    let mut pixels = vec![0u8; (width as usize) * (height as usize)];
    r.read_exact(&mut pixels)?;
    Ok((width, height, pixels))
}

/// Next whitespace-delimited header token, skipping `#` comment lines.
fn next_token<R: BufRead>(r: &mut R) -> io::Result<String> {
    let mut tok = String::new();
    loop {
        let mut byte = [0u8; 1];
        r.read_exact(&mut byte)?;
        match byte[0] {
            b'#' if tok.is_empty() => {
                let mut line = String::new();
                r.read_line(&mut line)?;
            }
            b if b.is_ascii_whitespace() => {
                if !tok.is_empty() {
                    return Ok(tok);
                }
            }
            b => tok.push(b as char),
        }
    }
}
