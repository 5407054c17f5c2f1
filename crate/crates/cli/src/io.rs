use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use jndbem::measures::MosTable;
use jndbem::raster::{load_pgm, EDGE_THRESHOLD};
use jndbem::{EdgeMap, GrayImage};
use serde::Deserialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub(crate) fn read_bytes(path: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

pub(crate) fn read_image(path: &Path) -> anyhow::Result<(GrayImage, Vec<u8>)> {
    let bytes = read_bytes(path)?;
    let img = load_pgm(&bytes).with_context(|| format!("{}", path.display()))?;
    Ok((img, bytes))
}

pub(crate) fn read_edge_map(path: &Path) -> anyhow::Result<(EdgeMap, Vec<u8>)> {
    let (img, bytes) = read_image(path)?;
    Ok((EdgeMap::from_image(&img, EDGE_THRESHOLD), bytes))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

#[derive(Deserialize)]
struct MosRow {
    id: String,
    rating: i64,
}

/// Parses a MOS CSV with header `id,rating`.
pub fn read_mos_csv(bytes: &[u8]) -> anyhow::Result<MosTable> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["id", "rating"] {
        bail!("MOS header must be `id,rating`, found `{}`", headers.iter().collect::<Vec<_>>().join(","));
    }
    let mut table = MosTable::new();
    for row in reader.deserialize() {
        let row: MosRow = row.context("malformed MOS row")?;
        table.push(row.id, row.rating)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mos_csv() {
        let t = read_mos_csv(b"id,rating\nsobel,7\ncanny, 10\n").unwrap();
        assert_eq!(t.rows().len(), 2);
        assert!(read_mos_csv(b"name,score\na,1\n").is_err());
        assert!(read_mos_csv(b"id,rating\na,11\n").is_err());
        assert!(read_mos_csv(b"id,rating\na,x\n").is_err());
    }

    #[test]
    fn sha_of_empty() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
