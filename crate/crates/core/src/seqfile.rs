//! Sequence files: one JSON header line, then one byte per symbol holding
//! the symbol's index in the header's alphabet.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::SymbolSequence;

pub const FORMAT: &str = "toeplitz-seq";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub alphabet: Vec<i8>,
    pub length: usize,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceFile {
    pub header: Header,
    pub sequence: SymbolSequence,
}

impl SequenceFile {
    /// Alphabet is the sorted set of symbols in `sequence`, or `alphabet` if given.
    pub fn new(
        sequence: SymbolSequence,
        alphabet: Option<Vec<i8>>,
        metadata: BTreeMap<String, String>,
    ) -> Result<Self> {
        let alphabet = alphabet.unwrap_or_else(|| sequence.alphabet());
        if let Some(s) = sequence.iter().find(|s| !alphabet.contains(s)) {
            return Err(Error::Format(format!("symbol {s} is not in the alphabet")));
        }
        Ok(SequenceFile {
            header: Header {
                format: FORMAT.into(),
                version: VERSION,
                alphabet,
                length: sequence.len(),
                metadata,
            },
            sequence,
        })
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut index = [0u8; 256];
        for (i, &s) in self.header.alphabet.iter().enumerate() {
            index[(s as i16 + 128) as usize] = i as u8;
        }
        let mut out = serde_json::to_vec(&self.header).map_err(|e| Error::Format(e.to_string()))?;
        out.push(b'\n');
        out.extend(self.sequence.iter().map(|&s| index[(s as i16 + 128) as usize]));
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let nl = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Format("missing header line".into()))?;
        let header: Header =
            serde_json::from_slice(&bytes[..nl]).map_err(|e| Error::Format(format!("header: {e}")))?;
        if header.format != FORMAT {
            return Err(Error::Format(format!("unknown format {:?}", header.format)));
        }
        if header.version != VERSION {
            return Err(Error::Format(format!("unsupported version {}", header.version)));
        }
        if header.alphabet.is_empty() || header.alphabet.len() > 256 {
            return Err(Error::Format("alphabet must have 1 to 256 symbols".into()));
        }
        let payload = &bytes[nl + 1..];
        if payload.len() != header.length {
            return Err(Error::Format(format!(
                "header declares {} symbols, payload has {}",
                header.length,
                payload.len()
            )));
        }
        let sequence = payload
            .iter()
            .map(|&b| {
                header
                    .alphabet
                    .get(b as usize)
                    .copied()
                    .ok_or_else(|| Error::Format(format!("payload byte {b} outside the alphabet")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SequenceFile {
            header,
            sequence: SymbolSequence::new(sequence),
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let bytes = fs::read(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_bytes(&bytes)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path.as_ref(), self.to_bytes()?)
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_with_metadata() {
        let mut meta = BTreeMap::new();
        meta.insert("construction".to_string(), "readout".to_string());
        meta.insert("scale".to_string(), "3^k".to_string());
        let f = SequenceFile::new(SymbolSequence::new(vec![1, -1, 0, 1]), Some(vec![-1, 0, 1]), meta).unwrap();
        let bytes = f.to_bytes().unwrap();
        let header_end = bytes.iter().position(|&b| b == b'\n').unwrap();
        assert_eq!(
            std::str::from_utf8(&bytes[..header_end]).unwrap(),
            r#"{"format":"toeplitz-seq","version":1,"alphabet":[-1,0,1],"length":4,"metadata":{"construction":"readout","scale":"3^k"}}"#
        );
        assert_eq!(&bytes[header_end + 1..], &[2, 0, 1, 2]);
        assert_eq!(SequenceFile::from_bytes(&bytes).unwrap(), f);
    }

    #[test]
    fn rejects_bad_files() {
        let f = SequenceFile::new(SymbolSequence::new(vec![0, 1]), None, BTreeMap::new()).unwrap();
        let mut bytes = f.to_bytes().unwrap();
        bytes.push(0);
        assert!(matches!(SequenceFile::from_bytes(&bytes), Err(Error::Format(_))));
        bytes.pop();
        *bytes.last_mut().unwrap() = 7;
        assert!(matches!(SequenceFile::from_bytes(&bytes), Err(Error::Format(_))));
        assert!(SequenceFile::from_bytes(b"no newline").is_err());
        assert!(SequenceFile::new(SymbolSequence::new(vec![2]), Some(vec![0, 1]), BTreeMap::new()).is_err());
    }
}
