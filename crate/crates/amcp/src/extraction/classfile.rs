//! Constant-pool-only class-file reader.
//!
//! Only the header, the constant pool and `this_class` are decoded. Every
//! `CONSTANT_Class` entry counts as a reference, so the result
//! over-approximates the classes a method body actually touches.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassFileError {
    #[error("not a class file")]
    NotClassFile,
    #[error("malformed constant pool")]
    MalformedPool,
    #[error("unsupported constant tag {0}")]
    UnsupportedTag(u8),
    #[error("truncated class header")]
    TruncatedHeader,
    #[error("constant pool index {0} is not a {1} entry")]
    BadIndex(u16, &'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFileSummary {
    /// Internal form, e.g. `com/example/Foo`.
    pub class_name: String,
    pub referenced_classes: BTreeSet<String>,
    /// `(major, minor)`.
    pub version: (u16, u16),
}

#[derive(Debug, Clone)]
enum Entry {
    Utf8(String),
    Class(u16),
    Other,
    /// Second slot of a long or double.
    Unusable,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.pos.checked_add(n)?;
        let s = self.bytes.get(self.pos..end)?;
        self.pos = end;
        Some(s)
    }

    fn u1(&mut self) -> Option<u8> {
        self.take(1).map(|b| b[0])
    }

    fn u2(&mut self) -> Option<u16> {
        self.take(2).map(|b| u16::from_be_bytes([b[0], b[1]]))
    }

    fn u4(&mut self) -> Option<u32> {
        self.take(4).map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }
}

/// Decodes the JVM's modified UTF-8 (NUL as `C0 80`, supplementary
/// characters as surrogate pairs).
fn decode_modified_utf8(bytes: &[u8]) -> String {
    let mut units = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b & 0x80 == 0 {
            units.push(b as u16);
            i += 1;
        } else if b & 0xE0 == 0xC0 && i + 1 < bytes.len() {
            units.push((((b & 0x1F) as u16) << 6) | (bytes[i + 1] & 0x3F) as u16);
            i += 2;
        } else if b & 0xF0 == 0xE0 && i + 2 < bytes.len() {
            units.push(
                (((b & 0x0F) as u16) << 12) | (((bytes[i + 1] & 0x3F) as u16) << 6) | (bytes[i + 2] & 0x3F) as u16,
            );
            i += 3;
        } else {
            units.push(0xFFFD);
            i += 1;
        }
    }
    String::from_utf16_lossy(&units)
}

fn read_pool(cur: &mut Cursor<'_>) -> Result<Vec<Entry>, ClassFileError> {
    let count = cur.u2().ok_or(ClassFileError::MalformedPool)? as usize;
    // index 0 is unused
    let mut pool = vec![Entry::Unusable; count.max(1)];
    let mut i = 1;
    while i < count {
        let tag = cur.u1().ok_or(ClassFileError::MalformedPool)?;
        let skip =
            |cur: &mut Cursor<'_>, n: usize| cur.take(n).map(|_| Entry::Other).ok_or(ClassFileError::MalformedPool);
        let entry = match tag {
            1 => {
                let len = cur.u2().ok_or(ClassFileError::MalformedPool)? as usize;
                let bytes = cur.take(len).ok_or(ClassFileError::MalformedPool)?;
                Entry::Utf8(decode_modified_utf8(bytes))
            }
            7 => Entry::Class(cur.u2().ok_or(ClassFileError::MalformedPool)?),
            3 | 4 => skip(cur, 4)?,
            5 | 6 => {
                skip(cur, 8)?;
                if i + 1 >= count {
                    return Err(ClassFileError::MalformedPool);
                }
                pool[i] = Entry::Other;
                i += 2;
                continue;
            }
            8 | 16 | 19 | 20 => skip(cur, 2)?,
            15 => skip(cur, 3)?,
            9 | 10 | 11 | 12 | 17 | 18 => skip(cur, 4)?,
            other => return Err(ClassFileError::UnsupportedTag(other)),
        };
        pool[i] = entry;
        i += 1;
    }
    Ok(pool)
}

fn utf8_at(pool: &[Entry], index: u16) -> Result<&str, ClassFileError> {
    match pool.get(index as usize) {
        Some(Entry::Utf8(s)) => Ok(s),
        _ => Err(ClassFileError::BadIndex(index, "Utf8")),
    }
}

/// Element class of a (possibly array) class name; `None` for primitive
/// arrays.
pub fn element_class(name: &str) -> Option<&str> {
    if !name.starts_with('[') {
        return Some(name);
    }
    let elem = name.trim_start_matches('[');
    elem.strip_prefix('L')?.strip_suffix(';').filter(|s| !s.is_empty())
}

pub fn parse_class_file(bytes: &[u8]) -> Result<ClassFileSummary, ClassFileError> {
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.u4() != Some(0xCAFE_BABE) {
        return Err(ClassFileError::NotClassFile);
    }
    let minor = cur.u2().ok_or(ClassFileError::TruncatedHeader)?;
    let major = cur.u2().ok_or(ClassFileError::TruncatedHeader)?;
    let pool = read_pool(&mut cur)?;
    let _access = cur.u2().ok_or(ClassFileError::TruncatedHeader)?;
    let this_index = cur.u2().ok_or(ClassFileError::TruncatedHeader)?;
    let class_name = match pool.get(this_index as usize) {
        Some(Entry::Class(name)) => utf8_at(&pool, *name)?.to_owned(),
        _ => return Err(ClassFileError::BadIndex(this_index, "Class")),
    };

    let mut referenced_classes = BTreeSet::new();
    for entry in &pool {
        if let Entry::Class(name) = entry {
            if let Some(elem) = element_class(utf8_at(&pool, *name)?) {
                if elem != class_name {
                    referenced_classes.insert(elem.to_owned());
                }
            }
        }
    }
    Ok(ClassFileSummary {
        class_name,
        referenced_classes,
        version: (major, minor),
    })
}
