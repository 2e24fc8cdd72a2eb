use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column order of the results CSV.
pub const CSV_HEADER: [&str; 15] = [
    "scheme",
    "dict_kind",
    "N",
    "L",
    "K",
    "M",
    "algo",
    "T",
    "ebn0_db",
    "trials",
    "block_errors",
    "bler",
    "ci_low",
    "ci_high",
    "seed",
];

/// One Monte Carlo point of one curve.
///
/// `ebn0_db` is `inf` for a noiseless run. `wall_time` and `digest` are
/// not part of the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlerRecord {
    pub scheme: String,
    pub dict_kind: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub algo: String,
    #[serde(rename = "T")]
    pub t: usize,
    pub ebn0_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    #[serde(skip)]
    pub wall_time: f64,
    #[serde(skip)]
    pub digest: String,
}

pub fn write_records<W: Write>(out: W, records: &[BlerRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<BlerRecord>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    if header != CSV_HEADER {
        return Err(Error::Format(format!("{} does not have the results CSV header", path.display())));
    }
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Path of the config-digest sidecar for a results CSV.
pub fn digest_path(csv: &Path) -> PathBuf {
    let mut name = csv.as_os_str().to_owned();
    name.push(".digest");
    PathBuf::from(name)
}

/// Appends records to a results CSV, one flush per point.
pub(crate) struct CsvSink {
    writer: csv::Writer<File>,
}

impl CsvSink {
    /// Starts a fresh file, or with `resume` keeps the points already on
    /// disk when the stored digest matches. Returns the kept records.
    pub(crate) fn open(
        path: &Path,
        digest: &str,
        resume: bool,
        rows_per_point: usize,
    ) -> Result<(Self, Vec<BlerRecord>)> {
        let mut kept = Vec::new();
        if resume && path.exists() {
            let found = std::fs::read_to_string(digest_path(path)).unwrap_or_default();
            if found.trim() != digest {
                return Err(Error::DigestMismatch { expected: digest.into(), found: found.trim().into() });
            }
            kept = read_records(path)?;
            // Drop a point that was only partly written.
            kept.truncate(kept.len() / rows_per_point * rows_per_point);
        }
        std::fs::write(digest_path(path), format!("{digest}\n"))?;
        let file = OpenOptions::new().create(true).write(true).truncate(true).open(path)?;
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        writer.write_record(CSV_HEADER)?;
        for r in &kept {
            writer.serialize(r)?;
        }
        writer.flush()?;
        Ok((CsvSink { writer }, kept))
    }

    pub(crate) fn append(&mut self, records: &[BlerRecord]) -> Result<()> {
        for r in records {
            self.writer.serialize(r)?;
        }
        self.writer.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(db: f64) -> BlerRecord {
        BlerRecord {
            scheme: "ssc".into(),
            dict_kind: "mub".into(),
            n: 64,
            l: 4096,
            k: 3,
            m: 4,
            algo: "mad".into(),
            t: 1,
            ebn0_db: db,
            trials: 1000,
            block_errors: 12,
            bler: 0.012,
            ci_low: 0.0068,
            ci_high: 0.0209,
            seed: 5,
            wall_time: 0.0,
            digest: String::new(),
        }
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let records = vec![rec(1.5), rec(f64::INFINITY)];
        write_records(File::create(&path).unwrap(), &records).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(
            text.starts_with("scheme,dict_kind,N,L,K,M,algo,T,ebn0_db,trials,block_errors,bler,ci_low,ci_high,seed\n")
        );
        assert!(text.contains("ssc,mub,64,4096,3,4,mad,1,1.5,1000,12,0.012,0.0068,0.0209,5\n"));
        assert_eq!(read_records(&path).unwrap(), records);
    }

    #[test]
    fn resume_checks_digest() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let (mut sink, kept) = CsvSink::open(&path, "abc", false, 1).unwrap();
        assert!(kept.is_empty());
        sink.append(&[rec(0.0), rec(1.0)]).unwrap();
        drop(sink);
        assert!(matches!(CsvSink::open(&path, "xyz", true, 1), Err(Error::DigestMismatch { .. })));
        let (_, kept) = CsvSink::open(&path, "abc", true, 2).unwrap();
        assert_eq!(kept.len(), 2);
        let (_, kept) = CsvSink::open(&path, "abc", false, 2).unwrap();
        assert!(kept.is_empty());
    }
}
