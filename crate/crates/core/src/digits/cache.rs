//! On-disk digit cache.
//!
//! Layout: a header line `DCL1 <base> <count> <source-spec>\n`, the packed
//! digits (base 2: eight digits per byte, least significant bit first;
//! otherwise one byte per digit), then an 8-byte little-endian checksum
//! (first 8 bytes of SHA-256 over header and payload).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::stream::{compute_digits, DigitSource, DigitStream};
use crate::arith::EvalContext;
use crate::error::{Error, Result};
use crate::words::FiniteWord;

const MAGIC: &str = "DCL1";

fn checksum(data: &[u8]) -> [u8; 8] {
    let d = Sha256::digest(data);
    let mut out = [0u8; 8];
    out.copy_from_slice(&d[..8]);
    out
}

fn pack(digits: &[u8], base: u32) -> Vec<u8> {
    if base == 2 {
        let mut out = vec![0u8; digits.len().div_ceil(8)];
        for (i, &d) in digits.iter().enumerate() {
            out[i / 8] |= d << (i % 8);
        }
        out
    } else {
        digits.to_vec()
    }
}

fn unpack(bytes: &[u8], base: u32, count: usize) -> Vec<u8> {
    if base == 2 {
        (0..count).map(|i| (bytes[i / 8] >> (i % 8)) & 1).collect()
    } else {
        bytes[..count].to_vec()
    }
}

fn payload_len(base: u32, count: usize) -> usize {
    if base == 2 {
        count.div_ceil(8)
    } else {
        count
    }
}

/// Writes the stream atomically (temporary file in the same directory, then rename).
pub fn cache_store(stream: &DigitStream, path: &Path) -> Result<()> {
    let spec = stream.source().spec_string();
    if spec.contains('\n') {
        return Err(Error::invalid("source spec must be a single line"));
    }
    let mut data = format!("{MAGIC} {} {} {}\n", stream.base(), stream.len(), spec).into_bytes();
    data.extend(pack(stream.digits(), stream.base()));
    let sum = checksum(&data);
    data.extend_from_slice(&sum);
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&data)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

fn read_raw(path: &Path) -> Result<(u32, String, Vec<u8>)> {
    let data = fs::read(path)?;
    let nl = data.iter().position(|&c| c == b'\n').ok_or_else(|| Error::Integrity("missing header line".into()))?;
    let header = std::str::from_utf8(&data[..nl]).map_err(|_| Error::Integrity("header is not UTF-8".into()))?;
    let mut parts = header.splitn(4, ' ');
    let magic = parts.next().unwrap_or("");
    if magic != MAGIC {
        return Err(Error::Integrity(format!("unknown format version `{magic}`")));
    }
    let fbase: u32 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| Error::Integrity("bad base field".into()))?;
    let count: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| Error::Integrity("bad count field".into()))?;
    let spec = parts.next().unwrap_or("");
    let plen = payload_len(fbase, count);
    if data.len() != nl + 1 + plen + 8 {
        return Err(Error::Integrity(format!(
            "expected {} bytes, found {} (truncated or padded file)",
            nl + 1 + plen + 8,
            data.len()
        )));
    }
    let body = &data[..nl + 1 + plen];
    if checksum(body) != data[nl + 1 + plen..] {
        return Err(Error::Integrity("checksum mismatch".into()));
    }
    let digits = unpack(&data[nl + 1..nl + 1 + plen], fbase, count);
    if digits.iter().any(|&d| d as u32 >= fbase) {
        return Err(Error::Integrity("digit out of range".into()));
    }
    Ok((fbase, spec.to_string(), digits))
}

/// Reads a cache file, checking integrity and that it holds digits of
/// `source` in `base`.
pub fn cache_load(path: &Path, source: &DigitSource, base: u32) -> Result<DigitStream> {
    let (fbase, spec, digits) = read_raw(path)?;
    if fbase != base {
        return Err(Error::SpecMismatch(format!("cache holds base {fbase}, requested base {base}")));
    }
    if spec != source.spec_string() {
        return Err(Error::SpecMismatch(format!("cache holds `{spec}`, requested `{}`", source.spec_string())));
    }
    Ok(DigitStream::from_parts(source.clone(), base, digits))
}

/// Reads a cache file whose source is taken from its own header.
pub fn cache_read(path: &Path) -> Result<DigitStream> {
    let (base, spec, digits) = read_raw(path)?;
    let source = DigitSource::parse(&spec).map_err(|e| Error::Integrity(format!("unreadable source in header: {e}")))?;
    Ok(DigitStream::from_parts(source, base, digits))
}

/// File name used inside a cache directory for a source and base.
pub fn cache_path(dir: &Path, source: &DigitSource, base: u32) -> PathBuf {
    let h = Sha256::digest(format!("{base} {}", source.spec_string()).as_bytes());
    dir.join(format!("{}-b{base}.dcl", hex::encode(&h[..8])))
}

/// First n digits, served from the cache directory when a long enough
/// prefix is stored there, otherwise computed and written back.
pub fn cached_digits(dir: Option<&Path>, source: &DigitSource, base: u32, n: usize, ctx: &EvalContext) -> Result<FiniteWord> {
    if let Some(dir) = dir {
        let path = cache_path(dir, source, base);
        if path.exists() {
            match cache_load(&path, source, base) {
                Ok(s) if s.len() >= n => return s.word(n),
                Ok(_) | Err(Error::Integrity(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let w = compute_digits(source, base, n, ctx)?;
        let stream = DigitStream::from_parts(source.clone(), base, w.symbols().to_vec());
        cache_store(&stream, &path)?;
        return Ok(w);
    }
    compute_digits(source, base, n, ctx)
}
