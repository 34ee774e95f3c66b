use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use holofactor::serial::form_from_json;
use holofactor::{complex_to_real, parse_form, parse_symbol, BihermitianForm, RealSymbol};
use sha2::{Digest, Sha256};

use crate::InputArgs;

/// Raw input text and the number of variables requested on the command line.
pub struct Input {
    pub text: String,
    pub n: Option<usize>,
}

impl Input {
    pub fn load(args: &InputArgs) -> Result<Self> {
        let text = match (&args.expr, &args.file) {
            (Some(e), _) => e.clone(),
            (None, Some(p)) => read_text(p)?,
            (None, None) => bail!("no input given"),
        };
        Ok(Input { text, n: args.n })
    }

    pub fn digest(&self) -> String {
        sha256_hex(self.text.as_bytes())
    }

    fn is_json(&self) -> bool {
        self.text.trim_start().starts_with('{')
    }

    pub fn form(&self) -> Result<BihermitianForm> {
        if self.is_json() {
            let f = form_from_json(&self.text)?;
            if let Some(n) = self.n {
                if n != f.n() {
                    bail!("--n {n} disagrees with the form's n = {}", f.n());
                }
            }
            Ok(f)
        } else {
            Ok(parse_form(&self.text, self.n)?)
        }
    }

    pub fn symbol(&self) -> Result<RealSymbol> {
        if self.is_json() {
            Ok(complex_to_real(&self.form()?)?)
        } else {
            Ok(parse_symbol(&self.text, self.n)?)
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// One `label: expression` entry per line; blank lines and `#` comments are skipped.
pub fn parse_family(text: &str) -> Result<Vec<(String, BihermitianForm)>> {
    let mut family = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((label, expr)) = line.split_once(':') else {
            bail!("line {}: expected `label: expression`", k + 1);
        };
        let input = Input {
            text: expr.trim().to_string(),
            n: None,
        };
        let form = input.form().with_context(|| format!("line {}", k + 1))?;
        family.push((label.trim().to_string(), form));
    }
    Ok(family)
}
