//! Binary move-table format, little-endian throughout:
//!
//! ```text
//! b"SL2T" | p: u32 | size: u32 | degree: u32 | size * degree u32 entries (row-major)
//! ```

use std::io::{self, Read, Write};

use sl2act_core::GroupTable;

pub const MAGIC: &[u8; 4] = b"SL2T";

pub fn write_table<W: Write>(table: &GroupTable, mut w: W) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&table.prime().value().to_le_bytes())?;
    w.write_all(&(table.size() as u32).to_le_bytes())?;
    w.write_all(&(table.degree() as u32).to_le_bytes())?;
    let mut buf = Vec::with_capacity(table.move_table().len() * 4);
    for &v in table.move_table() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDump {
    pub prime: u32,
    pub size: u32,
    pub degree: u32,
    pub moves: Vec<u32>,
}

pub fn read_table<R: Read>(mut r: R) -> io::Result<TableDump> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad magic"));
    }
    let mut word = || -> io::Result<u32> {
        let mut b = [0u8; 4];
        r.read_exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    };
    let prime = word()?;
    let size = word()?;
    let degree = word()?;
    let mut moves = Vec::with_capacity(size as usize * degree as usize);
    for _ in 0..size as usize * degree as usize {
        moves.push(word()?);
    }
    Ok(TableDump {
        prime,
        size,
        degree,
        moves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use sl2act_core::{canonical_generators, enumerate_group, GeneratorSet, Prime};

    #[test]
    fn layout() {
        let g = canonical_generators();
        let t = enumerate_group(Prime::new(3).unwrap(), &g.set(GeneratorSet::AB)).unwrap();
        let mut bytes = Vec::new();
        write_table(&t, &mut bytes).unwrap();
        assert_eq!(bytes.len(), 16 + 24 * 4 * 4);
        assert_eq!(&bytes[..4], b"SL2T");
        assert_eq!(&bytes[4..16], &[3, 0, 0, 0, 24, 0, 0, 0, 4, 0, 0, 0]);
        let back = read_table(&bytes[..]).unwrap();
        assert_eq!(back.moves, t.move_table());
        assert!(read_table(&b"XXXX"[..]).is_err());
    }
}
