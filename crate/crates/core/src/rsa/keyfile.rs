//! Text key files: decimal integers, UTF-8, LF line endings.
//!
//! ```text
//! ray-forge-key v1
//! kind: system
//! e: 11
//! d: 35
//! p: 13
//! q: 17
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numtheory::Natural;
use crate::rsa::keys::{KeySystem, PrivateKey, PublicKey};

const MAGIC: &str = "ray-forge-key v1";

/// Any of the three key shapes the file format carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyMaterial {
    Public(PublicKey),
    Private(PrivateKey),
    System(KeySystem),
}

impl KeyMaterial {
    pub fn as_public(&self) -> Option<PublicKey> {
        match self {
            KeyMaterial::Public(pk) => Some(pk.clone()),
            KeyMaterial::System(ks) => Some(ks.public_key()),
            KeyMaterial::Private(_) => None,
        }
    }

    pub fn as_private(&self) -> Option<PrivateKey> {
        match self {
            KeyMaterial::Private(sk) => Some(sk.clone()),
            KeyMaterial::System(ks) => Some(ks.private_key()),
            KeyMaterial::Public(_) => None,
        }
    }
}

/// Serialize key material into the v1 text format.
pub fn write_key(material: &KeyMaterial) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    match material {
        KeyMaterial::Public(pk) => {
            out.push_str("kind: public\n");
            out.push_str(&format!("e: {}\n", pk.e));
            out.push_str(&format!("n: {}\n", pk.n));
        }
        KeyMaterial::Private(sk) => {
            out.push_str("kind: private\n");
            out.push_str(&format!("d: {}\n", sk.d));
            out.push_str(&format!("n: {}\n", sk.n));
        }
        KeyMaterial::System(ks) => {
            out.push_str("kind: system\n");
            out.push_str(&format!("e: {}\n", ks.e()));
            out.push_str(&format!("d: {}\n", ks.d()));
            out.push_str(&format!("p: {}\n", ks.p()));
            out.push_str(&format!("q: {}\n", ks.q()));
        }
    }
    out
}

/// Parse and re-validate a key file, reporting the offending line on error.
pub fn read_key(text: &str) -> Result<KeyMaterial> {
    let mut lines = text.lines().enumerate();

    let (_, magic) = lines
        .next()
        .ok_or_else(|| Error::KeyFile { line: 1, msg: "empty file".into() })?;
    if magic.trim_end() != MAGIC {
        return Err(Error::KeyFile { line: 1, msg: format!("expected header '{MAGIC}'") });
    }

    let (_, kind_line) = lines
        .next()
        .ok_or_else(|| Error::KeyFile { line: 2, msg: "missing kind line".into() })?;
    let kind = kind_line
        .strip_prefix("kind:")
        .map(str::trim)
        .ok_or_else(|| Error::KeyFile { line: 2, msg: "expected 'kind: <public|private|system>'".into() })?;

    let expected: &[&str] = match kind {
        "public" => &["e", "n"],
        "private" => &["d", "n"],
        "system" => &["e", "d", "p", "q"],
        other => {
            return Err(Error::KeyFile { line: 2, msg: format!("unknown kind '{other}'") });
        }
    };

    let mut values: BTreeMap<String, (usize, Natural)> = BTreeMap::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (name, value) = line.split_once(':').ok_or_else(|| Error::KeyFile {
            line: lineno,
            msg: "expected 'name: value'".into(),
        })?;
        let name = name.trim();
        if !expected.contains(&name) {
            return Err(Error::KeyFile {
                line: lineno,
                msg: format!("unexpected field '{name}' for kind '{kind}'"),
            });
        }
        if values.contains_key(name) {
            return Err(Error::KeyFile { line: lineno, msg: format!("duplicate field '{name}'") });
        }
        let parsed = Natural::from_str(value.trim()).map_err(|_| Error::KeyFile {
            line: lineno,
            msg: format!("'{}' is not a decimal integer", value.trim()),
        })?;
        values.insert(name.to_string(), (lineno, parsed));
    }

    for field in expected {
        if !values.contains_key(*field) {
            return Err(Error::KeyFile {
                line: text.lines().count() + 1,
                msg: format!("missing field '{field}'"),
            });
        }
    }
    let get = |name: &str| values[name].clone();

    match kind {
        "public" => {
            let (e_line, e) = get("e");
            let (_, n) = get("n");
            if e.is_zero() || e >= n {
                return Err(Error::KeyFile {
                    line: e_line,
                    msg: format!("public exponent must satisfy 0 < e < n = {n}"),
                });
            }
            Ok(KeyMaterial::Public(PublicKey { e, n }))
        }
        "private" => {
            let (d_line, d) = get("d");
            let (_, n) = get("n");
            if d.is_zero() || d >= n {
                return Err(Error::KeyFile {
                    line: d_line,
                    msg: format!("private exponent must satisfy 0 < d < n = {n}"),
                });
            }
            Ok(KeyMaterial::Private(PrivateKey { d, n }))
        }
        "system" => {
            let (_, e) = get("e");
            let (d_line, d) = get("d");
            let (_, p) = get("p");
            let (_, q) = get("q");
            let ks = KeySystem::new(e, d, p, q)
                .map_err(|err| Error::KeyFile { line: d_line, msg: err.to_string() })?;
            Ok(KeyMaterial::System(ks))
        }
        _ => unreachable!("kind validated above"),
    }
}
