//! Event-stream file formats: a plain CSV and a compact binary form.
//!
//! CSV rows are `t_us,x,y,polarity` with polarity written as 1 or -1.
//! The binary format opens with a 16-byte header (`EVPX0001`, then width
//! and height as little-endian u32) followed by 16-byte records: u64
//! timestamp in microseconds, u16 x, u16 y, i8 polarity, 3 pad bytes.
//! Both formats round-trip losslessly.

use std::io::{self, BufRead, Read, Write};

use evpix_core::pixel::{Event, Polarity};
use thiserror::Error;

pub const BIN_MAGIC: &[u8; 8] = b"EVPX0001";
const CSV_HEADER: &str = "t_us,x,y,polarity";

#[derive(Debug, Error)]
pub enum EventIoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: expected `t_us,x,y,polarity`, got `{text}`")]
    CsvParse { line: usize, text: String },
    #[error("line {line}: polarity must be 1 or -1, got `{text}`")]
    BadPolarity { line: usize, text: String },
    #[error("bad magic: not an EVPX0001 event file")]
    BadMagic,
    #[error("truncated record at byte offset {offset}")]
    Truncated { offset: u64 },
    #[error("record {index}: polarity byte {value} is neither 1 nor -1")]
    BadPolarityByte { index: u64, value: i8 },
}

/// Writes the CSV form, header line first.
pub fn write_events_csv<W: Write>(mut w: W, events: &[Event]) -> Result<(), EventIoError> {
    writeln!(w, "{CSV_HEADER}")?;
    for e in events {
        writeln!(w, "{},{},{},{}", e.t_us, e.x, e.y, e.polarity.sign())?;
    }
    Ok(())
}

/// Reads the CSV form; the header line is optional.
pub fn read_events_csv<R: Read>(r: R) -> Result<Vec<Event>, EventIoError> {
    let mut events = Vec::new();
    for (i, line) in io::BufReader::new(r).lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || (i == 0 && text == CSV_HEADER) {
            continue;
        }
        let parse = |s: Option<&str>| -> Option<i64> { s?.trim().parse().ok() };
        let mut cols = text.split(',');
        let fields = (
            parse(cols.next()),
            parse(cols.next()),
            parse(cols.next()),
            parse(cols.next()),
            cols.next(),
        );
        let (Some(t), Some(x), Some(y), Some(pol), None) = fields else {
            return Err(EventIoError::CsvParse { line: i + 1, text: text.to_string() });
        };
        let polarity = Polarity::from_sign(pol as i8).filter(|_| (-1..=1).contains(&pol)).ok_or(
            EventIoError::BadPolarity { line: i + 1, text: pol.to_string() },
        )?;
        events.push(Event { t_us: t as u64, x: x as u16, y: y as u16, polarity });
    }
    Ok(events)
}

/// Writes the binary form with the array geometry in the header.
pub fn write_events_bin<W: Write>(
    mut w: W,
    width: u32,
    height: u32,
    events: &[Event],
) -> Result<(), EventIoError> {
    w.write_all(BIN_MAGIC)?;
    w.write_all(&width.to_le_bytes())?;
    w.write_all(&height.to_le_bytes())?;
    for e in events {
        let mut rec = [0u8; 16];
        rec[..8].copy_from_slice(&e.t_us.to_le_bytes());
        rec[8..10].copy_from_slice(&e.x.to_le_bytes());
        rec[10..12].copy_from_slice(&e.y.to_le_bytes());
        rec[12] = e.polarity.sign() as u8;
        w.write_all(&rec)?;
    }
    Ok(())
}

/// Reads the binary form, returning `(width, height, events)`.
pub fn read_events_bin<R: Read>(mut r: R) -> Result<(u32, u32, Vec<Event>), EventIoError> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => EventIoError::BadMagic,
        _ => EventIoError::Io(e),
    })?;
    if &header[..8] != BIN_MAGIC {
        return Err(EventIoError::BadMagic);
    }
    let width = u32::from_le_bytes(header[8..12].try_into().unwrap());
    let height = u32::from_le_bytes(header[12..16].try_into().unwrap());
    let mut events = Vec::new();
    let mut rec = [0u8; 16];
    let mut offset = 16u64;
    loop {
        match read_record(&mut r, &mut rec)? {
            0 => break,
            16 => {}
            _ => return Err(EventIoError::Truncated { offset }),
        }
        let t_us = u64::from_le_bytes(rec[..8].try_into().unwrap());
        let x = u16::from_le_bytes(rec[8..10].try_into().unwrap());
        let y = u16::from_le_bytes(rec[10..12].try_into().unwrap());
        let value = rec[12] as i8;
        let polarity = Polarity::from_sign(value).ok_or(EventIoError::BadPolarityByte {
            index: (offset - 16) / 16,
            value,
        })?;
        events.push(Event { t_us, x, y, polarity });
        offset += 16;
    }
    Ok((width, height, events))
}

/// Reads up to one record, returning how many bytes arrived (0 at EOF).
fn read_record<R: Read>(r: &mut R, rec: &mut [u8; 16]) -> Result<usize, EventIoError> {
    let mut filled = 0;
    while filled < 16 {
        let n = r.read(&mut rec[filled..])?;
        if n == 0 {
            break;
        }
        filled += n;
    }
    Ok(filled)
}
