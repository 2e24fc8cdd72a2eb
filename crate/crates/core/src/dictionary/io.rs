//! Dictionary cache files.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! offset  size  field
//! 0       8     magic "SPCDICT1"
//! 8       1     kind: 0 = gold, 1 = mub, 2 = custom
//! 9       1     flags: bit 0 = trailing e_1 column, bit 1 = phase seed present
//! 10      2     reserved, zero
//! 12      4     N (rows)
//! 16      4     L (columns, including e_1)
//! 20      8     phase seed (zero when absent)
//! 28      ..    payload
//! ```
//!
//! Gold payload: one bit per entry of the structured columns (column-major,
//! MSB first, 1 = `-1/sqrt(N)`). MUB payload: two bits per entry holding the
//! exponent `e` of `i^e / sqrt(N)`. A phased MUB stores the unphased payload
//! and the seed; loading re-applies the phases. Custom payload: `(re, im)`
//! `f64` pairs, column-major.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{CodeTable, Dictionary, DictionaryKind};
use crate::error::{Error, Result};
use crate::C64;

const MAGIC: &[u8; 8] = b"SPCDICT1";
const FLAG_IDENTITY: u8 = 1;
const FLAG_PHASE: u8 = 2;

fn pack(values: impl Iterator<Item = u8>, bits: usize) -> Vec<u8> {
    let per_byte = 8 / bits;
    let mut out = Vec::new();
    let mut cur = 0u8;
    let mut filled = 0;
    for v in values {
        cur |= v << (8 - bits * (filled + 1));
        filled += 1;
        if filled == per_byte {
            out.push(cur);
            cur = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push(cur);
    }
    out
}

fn unpack(bytes: &[u8], bits: usize, count: usize) -> Vec<u8> {
    let per_byte = 8 / bits;
    let mask = (1u8 << bits) - 1;
    (0..count).map(|k| (bytes[k / per_byte] >> (8 - bits * (k % per_byte + 1))) & mask).collect()
}

/// Serializes `d` to `w`.
pub fn write_to<W: Write>(d: &Dictionary, mut w: W) -> Result<()> {
    let (kind, payload) = match (d.kind(), d.codes()) {
        (DictionaryKind::Gold, Some(code)) => (0u8, pack(code.exps().iter().map(|e| e >> 1), 1)),
        (DictionaryKind::Mub | DictionaryKind::MubRandomPhase, Some(code)) => {
            (1u8, pack(code.exps().iter().copied(), 2))
        }
        _ => {
            let mut payload = Vec::with_capacity(d.n_rows() * d.n_cols() * 16);
            for c in 0..d.n_cols() {
                for z in d.column(c) {
                    payload.extend_from_slice(&z.re.to_le_bytes());
                    payload.extend_from_slice(&z.im.to_le_bytes());
                }
            }
            (2u8, payload)
        }
    };
    let mut flags = 0u8;
    if d.has_identity_column() {
        flags |= FLAG_IDENTITY;
    }
    if d.phase_seed().is_some() {
        flags |= FLAG_PHASE;
    }
    w.write_all(MAGIC)?;
    w.write_all(&[kind, flags, 0, 0])?;
    w.write_all(&(d.n_rows() as u32).to_le_bytes())?;
    w.write_all(&(d.n_cols() as u32).to_le_bytes())?;
    w.write_all(&d.phase_seed().unwrap_or(0).to_le_bytes())?;
    w.write_all(&payload)?;
    w.flush()?;
    Ok(())
}

/// Reads a dictionary written by [`write_to`].
pub fn read_from<R: Read>(mut r: R) -> Result<Dictionary> {
    let mut header = [0u8; 28];
    r.read_exact(&mut header).map_err(|_| Error::Format("truncated header".into()))?;
    if &header[..8] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let (kind, flags) = (header[8], header[9]);
    let n = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
    let l = u32::from_le_bytes(header[16..20].try_into().unwrap()) as usize;
    let seed = u64::from_le_bytes(header[20..28].try_into().unwrap());
    let identity = flags & FLAG_IDENTITY != 0;
    if n == 0 || l == 0 {
        return Err(Error::Format("empty dictionary".into()));
    }
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;

    let code_cols = l - identity as usize;
    let read_codes = |bits: usize| -> Result<Vec<u8>> {
        let count = n * code_cols;
        if payload.len() != (count * bits).div_ceil(8) {
            return Err(Error::Format(format!(
                "payload has {} bytes, expected {}",
                payload.len(),
                (count * bits).div_ceil(8)
            )));
        }
        Ok(unpack(&payload, bits, count))
    };
    let dict = match kind {
        0 => {
            let exps = read_codes(1)?.into_iter().map(|b| 2 * b).collect();
            Dictionary::from_codes(DictionaryKind::Gold, n, CodeTable::new(n, code_cols, exps), identity)
        }
        1 => {
            let exps = read_codes(2)?;
            let d = Dictionary::from_codes(DictionaryKind::Mub, n, CodeTable::new(n, code_cols, exps), identity);
            if flags & FLAG_PHASE != 0 {
                d.apply_random_phase(seed)?
            } else {
                d
            }
        }
        2 => {
            if payload.len() != n * l * 16 {
                return Err(Error::Format("custom payload size mismatch".into()));
            }
            let values: Vec<f64> = payload.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())).collect();
            let columns: Vec<Vec<C64>> = values
                .chunks_exact(2 * n)
                .map(|col| col.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect())
                .collect();
            Dictionary::from_columns(&columns)?
        }
        other => return Err(Error::Format(format!("unknown kind byte {other}"))),
    };
    Ok(dict)
}

/// Writes `d` to the file at `path`.
pub fn save(d: &Dictionary, path: impl AsRef<Path>) -> Result<()> {
    write_to(d, BufWriter::new(File::create(path)?))
}

/// Loads a dictionary from the file at `path`.
pub fn load(path: impl AsRef<Path>) -> Result<Dictionary> {
    read_from(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{build_gold, build_mub};

    fn round_trip(d: &Dictionary) -> Dictionary {
        let mut buf = Vec::new();
        write_to(d, &mut buf).unwrap();
        read_from(buf.as_slice()).unwrap()
    }

    fn assert_bit_identical(a: &Dictionary, b: &Dictionary) {
        assert_eq!(a.kind(), b.kind());
        assert_eq!((a.n_rows(), a.n_cols()), (b.n_rows(), b.n_cols()));
        assert_eq!(a.phase_seed(), b.phase_seed());
        for c in 0..a.n_cols() {
            for (x, y) in a.column(c).iter().zip(b.column(c)) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }

    #[test]
    fn round_trips_are_bit_exact() {
        let gold = build_gold(5, true).unwrap();
        assert_bit_identical(&gold, &round_trip(&gold));
        let mub = build_mub(3).unwrap();
        assert_bit_identical(&mub, &round_trip(&mub));
        let phased = mub.apply_random_phase(99).unwrap();
        assert_bit_identical(&phased, &round_trip(&phased));
        let custom = Dictionary::identity(3);
        assert_bit_identical(&custom, &round_trip(&custom));
    }

    #[test]
    fn compact_sizes() {
        let mut buf = Vec::new();
        write_to(&build_gold(7, true).unwrap(), &mut buf).unwrap();
        assert_eq!(buf.len(), 28 + (127 * 16383usize).div_ceil(8));
        buf.clear();
        write_to(&build_mub(6).unwrap(), &mut buf).unwrap();
        assert_eq!(buf.len(), 28 + 64 * 4096 / 4);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(read_from(&b"nope"[..]), Err(Error::Format(_))));
        let mut buf = Vec::new();
        write_to(&build_mub(2).unwrap(), &mut buf).unwrap();
        buf.pop();
        assert!(matches!(read_from(buf.as_slice()), Err(Error::Format(_))));
    }
}
